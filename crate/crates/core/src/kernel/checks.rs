use serde::{Deserialize, Serialize};

use super::{ElemSet, FiniteHyperStructure};
use crate::error::{invalid, Result};

/// Named axiom (or derived property) that a table can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// `0 ⊞ x = x ⊞ 0 = {x}`.
    Identity,
    /// No `x'` with `0 ∈ x ⊞ x'` (or no left partner).
    NoInverse,
    /// More than one hyperinverse candidate on one side.
    AmbiguousInverse,
    /// Left and right hyperinverses differ.
    OneSidedInverse,
    /// `x ∈ y ⊞ z` iff `-x ∈ -z ⊞ -y`.
    InvertibilityOfSums,
    /// `a ⊞ (b ⊞ c) = (a ⊞ b) ⊞ c`.
    Associativity,
    /// The invertibility-of-sums and reversibility formulations disagree on
    /// a table satisfying all other hypergroup axioms.
    FormulationMismatch,
    /// `x ⊞ y = y ⊞ x`.
    Commutativity,
    /// Multiplicative identity missing or not two-sided.
    MonoidIdentity,
    MonoidAssociativity,
    /// `x ⊙ 0 = 0 ⊙ x = 0`.
    Absorption,
    LeftDistributivity,
    RightDistributivity,
    ZeroIsOne,
    NoMultiplicativeInverse,
}

/// One axiom violation with the element indices witnessing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

/// Outcome of an exhaustive check. `passed` iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

/// Witnesses kept per axiom; the check itself is always exhaustive.
const WITNESSES_PER_AXIOM: usize = 8;

#[derive(Default)]
struct Collector {
    violations: Vec<Violation>,
}

impl Collector {
    fn push(&mut self, axiom: Axiom, witness: &[usize]) {
        let seen = self.violations.iter().filter(|v| v.axiom == axiom).count();
        if seen < WITNESSES_PER_AXIOM {
            self.violations.push(Violation {
                axiom,
                witness: witness.to_vec(),
            });
        }
    }

    fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn finish(self) -> CheckReport {
        CheckReport::from_violations(self.violations)
    }
}

impl CheckReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        CheckReport {
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Why an index map fails to be a homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomomorphismFailure {
    ZeroNotFixed,
    OneNotFixed,
    /// `f(x ⊞ y) ⊄ f(x) ⊞ f(y)`.
    Sum(usize, usize),
    /// `f(xy) ≠ f(x) f(y)`.
    Product(usize, usize),
}

impl FiniteHyperStructure {
    /// Exhaustive check of the hypergroup axioms: identity, unique two-sided
    /// hyperinverse, invertibility of sums, associativity. As a cross-check
    /// the reversibility formulation is evaluated too and a
    /// [`Axiom::FormulationMismatch`] is reported if the two disagree on an
    /// otherwise valid table.
    pub fn check_hypergroup(&self) -> CheckReport {
        let mut c = Collector::default();
        self.collect_hypergroup(&mut c);
        c.finish()
    }

    fn collect_hypergroup(&self, c: &mut Collector) {
        let n = self.n();
        for x in 0..n {
            let s = ElemSet::singleton(x);
            if self.add(0, x) != s || self.add(x, 0) != s {
                c.push(Axiom::Identity, &[x]);
            }
        }

        for x in 0..n {
            let right: Vec<usize> = (0..n).filter(|&y| self.add(x, y).contains(0)).collect();
            let left: Vec<usize> = (0..n).filter(|&y| self.add(y, x).contains(0)).collect();
            match (right.as_slice(), left.as_slice()) {
                ([], _) | (_, []) => c.push(Axiom::NoInverse, &[x]),
                ([r], [l]) if r != l => c.push(Axiom::OneSidedInverse, &[x, *r, *l]),
                ([_], [_]) => {}
                _ => {
                    let mut w = vec![x];
                    w.extend(if right.len() > 1 { &right } else { &left });
                    c.push(Axiom::AmbiguousInverse, &w);
                }
            }
        }

        let mut invertible = true;
        let mut reversible = true;
        if let Some(neg) = self.negation() {
            for y in 0..n {
                for z in 0..n {
                    let s = self.add(y, z);
                    let mirrored = self.add(neg[z], neg[y]);
                    for x in 0..n {
                        if s.contains(x) != mirrored.contains(neg[x]) {
                            invertible = false;
                            c.push(Axiom::InvertibilityOfSums, &[x, y, z]);
                        }
                        if s.contains(x)
                            && !(self.add(x, neg[z]).contains(y) && self.add(neg[y], x).contains(z))
                        {
                            reversible = false;
                        }
                    }
                }
            }
        }

        for a in 0..n {
            for b in 0..n {
                let ab = self.add(a, b);
                for cc in 0..n {
                    let left = self.sum_sets(ab, ElemSet::singleton(cc));
                    let right = self.sum_sets(ElemSet::singleton(a), self.add(b, cc));
                    if left != right {
                        c.push(Axiom::Associativity, &[a, b, cc]);
                    }
                }
            }
        }

        let structural_ok =
            self.negation().is_some() && !c.has(Axiom::Identity) && !c.has(Axiom::Associativity);
        if structural_ok && invertible != reversible {
            c.push(Axiom::FormulationMismatch, &[]);
        }
    }

    /// Hypergroup axioms plus commutativity.
    pub fn check_commutative_hypergroup(&self) -> CheckReport {
        let mut c = Collector::default();
        self.collect_hypergroup(&mut c);
        self.collect_commutativity(&mut c);
        c.finish()
    }

    fn collect_commutativity(&self, c: &mut Collector) {
        let n = self.n();
        for x in 0..n {
            for y in x + 1..n {
                if self.add(x, y) != self.add(y, x) {
                    c.push(Axiom::Commutativity, &[x, y]);
                }
            }
        }
    }

    /// Commutative additive hypergroup, multiplicative monoid, absorption and
    /// two-sided distributivity.
    pub fn check_skew_hyperring(&self) -> Result<CheckReport> {
        let mut c = Collector::default();
        self.collect_skew_hyperring(&mut c)?;
        Ok(c.finish())
    }

    fn collect_skew_hyperring(&self, c: &mut Collector) -> Result<()> {
        let one = match (self.has_mul(), self.one()) {
            (true, Some(one)) => one,
            _ => return Err(invalid("structure has no multiplication table")),
        };
        let n = self.n();
        self.collect_hypergroup(c);
        self.collect_commutativity(c);

        for x in 0..n {
            if self.mul(one, x) != x || self.mul(x, one) != x {
                c.push(Axiom::MonoidIdentity, &[x]);
            }
            if self.mul(x, 0) != 0 || self.mul(0, x) != 0 {
                c.push(Axiom::Absorption, &[x]);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for d in 0..n {
                    if self.mul(ab, d) != self.mul(a, self.mul(b, d)) {
                        c.push(Axiom::MonoidAssociativity, &[a, b, d]);
                    }
                }
            }
        }
        for a in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let s = self.add(x, y);
                    let left = s.map(|i| self.mul(a, i));
                    if left != self.add(self.mul(a, x), self.mul(a, y)) {
                        c.push(Axiom::LeftDistributivity, &[a, x, y]);
                    }
                    let right = s.map(|i| self.mul(i, a));
                    if right != self.add(self.mul(x, a), self.mul(y, a)) {
                        c.push(Axiom::RightDistributivity, &[a, x, y]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Skew hyperring axioms, `0 ≠ 1`, and two-sided multiplicative inverses
    /// for every nonzero element.
    pub fn check_hyperfield(&self) -> Result<CheckReport> {
        let mut c = Collector::default();
        self.collect_skew_hyperring(&mut c)?;
        let one = self.one().expect("checked above");
        if one == 0 {
            c.push(Axiom::ZeroIsOne, &[]);
        }
        let n = self.n();
        for x in 1..n {
            if !(0..n).any(|y| self.mul(x, y) == one && self.mul(y, x) == one) {
                c.push(Axiom::NoMultiplicativeInverse, &[x]);
            }
        }
        Ok(c.finish())
    }

    /// `(a ⊞ b)(c ⊞ d) = ac ⊞ ad ⊞ bc ⊞ bd` for all quadruples; the witness is
    /// the first violating `(a, b, c, d)` in lexicographic order.
    pub fn is_doubly_distributive(&self) -> Result<(bool, Option<[usize; 4]>)> {
        if !self.has_mul() {
            return Err(invalid("structure has no multiplication table"));
        }
        let n = self.n();
        for a in 0..n {
            for b in 0..n {
                let ab = self.add(a, b);
                for c in 0..n {
                    for d in 0..n {
                        let lhs = self.mul_sets(ab, self.add(c, d));
                        let rhs = self.sum_all(&[
                            self.mul(a, c),
                            self.mul(a, d),
                            self.mul(b, c),
                            self.mul(b, d),
                        ]);
                        if lhs != rhs {
                            return Ok((false, Some([a, b, c, d])));
                        }
                    }
                }
            }
        }
        Ok((true, None))
    }

    /// `|a ⊞ b| = 1` whenever `a ≠ -b`.
    ///
    /// In a hypergroup `a = -b` exactly when `0 ∈ a ⊞ b`, which is the test
    /// used here, so no negation table is needed.
    pub fn is_stringent(&self) -> (bool, Option<(usize, usize)>) {
        let n = self.n();
        for a in 0..n {
            for b in 0..n {
                let s = self.add(a, b);
                if !s.contains(0) && !s.is_singleton() {
                    return (false, Some((a, b)));
                }
            }
        }
        (true, None)
    }
}

/// Does the index map `f` (given as `f[x]`) send `a` homomorphically into
/// `b`? Checks `f(0) = 0` and `f(x ⊞ y) ⊆ f(x) ⊞ f(y)`; when both structures
/// are multiplicative also `f(1) = 1` and `f(xy) = f(x)f(y)`.
pub fn is_homomorphism(
    f: &[usize],
    a: &FiniteHyperStructure,
    b: &FiniteHyperStructure,
) -> Result<(bool, Option<HomomorphismFailure>)> {
    if f.len() != a.n() {
        return Err(invalid(format!(
            "map has {} entries, source carrier has {}",
            f.len(),
            a.n()
        )));
    }
    if let Some(&bad) = f.iter().find(|&&v| v >= b.n()) {
        return Err(invalid(format!("image index {bad} outside target carrier")));
    }
    if f[0] != 0 {
        return Ok((false, Some(HomomorphismFailure::ZeroNotFixed)));
    }
    let n = a.n();
    for x in 0..n {
        for y in 0..n {
            if !a.add(x, y).map(|i| f[i]).is_subset(b.add(f[x], f[y])) {
                return Ok((false, Some(HomomorphismFailure::Sum(x, y))));
            }
        }
    }
    if let (Some(one_a), Some(one_b), true, true) = (a.one(), b.one(), a.has_mul(), b.has_mul()) {
        if f[one_a] != one_b {
            return Ok((false, Some(HomomorphismFailure::OneNotFixed)));
        }
        for x in 0..n {
            for y in 0..n {
                if f[a.mul(x, y)] != b.mul(f[x], f[y]) {
                    return Ok((false, Some(HomomorphismFailure::Product(x, y))));
                }
            }
        }
    }
    Ok((true, None))
}
