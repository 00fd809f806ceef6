//! Finite hyperoperation tables and exhaustive axiom checkers.
//!
//! A [`FiniteHyperStructure`] stores hyperaddition as an `n x n` table of
//! [`ElemSet`]s and, optionally, a single-valued multiplication table.
//! Index 0 is always the additive identity.

mod checks;
mod elemset;

pub use checks::{is_homomorphism, Axiom, CheckReport, HomomorphismFailure, Violation};
pub use elemset::{ElemSet, Iter, MAX_CARRIER};

use crate::error::{invalid, Error, Result};

/// A finite hypergroup, skew hyperring or skew hyperfield given by tables.
///
/// Tables are immutable once built. Axioms are not enforced at construction
/// (so corrupted fixtures can be represented); use the `check_*` methods.
/// Construction does enforce: `1 <= n <= 64`, every sum non-empty, every
/// index in range.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteHyperStructure {
    names: Vec<String>,
    add: Vec<ElemSet>,
    mul: Option<Vec<u8>>,
    one: Option<usize>,
    neg: Option<Vec<usize>>,
}

impl FiniteHyperStructure {
    /// Additive structure from a row-major `n x n` table.
    pub fn new(names: Vec<String>, add: Vec<ElemSet>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(invalid("empty carrier"));
        }
        if n > MAX_CARRIER {
            return Err(Error::Capacity {
                what: "carrier".into(),
                needed: n,
                limit: MAX_CARRIER,
            });
        }
        if add.len() != n * n {
            return Err(invalid(format!(
                "addition table has {} entries, expected {}",
                add.len(),
                n * n
            )));
        }
        let range = ElemSet::full(n);
        for (k, s) in add.iter().enumerate() {
            if s.is_empty() {
                return Err(invalid(format!(
                    "empty sum {} + {}",
                    names[k / n],
                    names[k % n]
                )));
            }
            if !s.is_subset(range) {
                return Err(invalid("sum contains an index outside the carrier"));
            }
        }
        let mut t = FiniteHyperStructure {
            names,
            add,
            mul: None,
            one: None,
            neg: None,
        };
        t.neg = t.derive_negation();
        Ok(t)
    }

    /// Additive structure with default names `0, 1, ..`.
    pub fn from_fn(n: usize, add: impl Fn(usize, usize) -> ElemSet) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n * n).map(|k| add(k / n, k % n)).collect();
        Self::new(names, table)
    }

    /// Attach a row-major multiplication table with identity `one`.
    pub fn with_multiplication(mut self, mul: Vec<usize>, one: usize) -> Result<Self> {
        let n = self.n();
        if mul.len() != n * n {
            return Err(invalid(format!(
                "multiplication table has {} entries, expected {}",
                mul.len(),
                n * n
            )));
        }
        if one >= n || mul.iter().any(|&v| v >= n) {
            return Err(invalid("multiplication index outside the carrier"));
        }
        self.mul = Some(mul.into_iter().map(|v| v as u8).collect());
        self.one = Some(one);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n() {
            return Err(invalid("name list length differs from carrier size"));
        }
        self.names = names;
        Ok(self)
    }

    /// Drop the multiplicative part.
    pub fn additive(&self) -> FiniteHyperStructure {
        FiniteHyperStructure {
            names: self.names.clone(),
            add: self.add.clone(),
            mul: None,
            one: None,
            neg: self.neg.clone(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    /// The full carrier as a set.
    #[inline]
    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.n())
    }

    /// The nonzero part of the carrier.
    #[inline]
    pub fn nonzero(&self) -> ElemSet {
        self.carrier().without(0)
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> ElemSet {
        self.add[x * self.n() + y]
    }

    pub fn add_table(&self) -> &[ElemSet] {
        &self.add
    }

    #[inline]
    pub fn has_mul(&self) -> bool {
        self.mul.is_some()
    }

    /// Product of two elements.
    ///
    /// # Panics
    /// If the structure carries no multiplication table.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let n = self.n();
        self.mul.as_ref().expect("structure has no multiplication")[x * n + y] as usize
    }

    pub fn mul_table(&self) -> Option<Vec<usize>> {
        self.mul
            .as_ref()
            .map(|m| m.iter().map(|&v| v as usize).collect())
    }

    #[inline]
    pub fn one(&self) -> Option<usize> {
        self.one
    }

    /// The hyperinverse of `x`, if the negation table could be derived.
    #[inline]
    pub fn neg(&self, x: usize) -> Option<usize> {
        self.neg.as_ref().map(|t| t[x])
    }

    pub fn negation(&self) -> Option<&[usize]> {
        self.neg.as_deref()
    }

    /// `A ⊞ B`, the union of `a ⊞ b` over `a ∈ A`, `b ∈ B`.
    pub fn extend_sum(&self, a: ElemSet, b: ElemSet) -> Result<ElemSet> {
        if a.is_empty() || b.is_empty() {
            return Err(invalid("extended sum of an empty set"));
        }
        let range = self.carrier();
        if !a.is_subset(range) || !b.is_subset(range) {
            return Err(invalid("set contains an index outside the carrier"));
        }
        Ok(self.sum_sets(a, b))
    }

    /// Unchecked `A ⊞ B`.
    #[inline]
    pub fn sum_sets(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for x in a {
            for y in b {
                out = out.union(self.add(x, y));
            }
        }
        out
    }

    /// Left-associated extended sum of a list of elements.
    pub fn sum_all(&self, xs: &[usize]) -> ElemSet {
        let mut acc = ElemSet::singleton(0);
        for &x in xs {
            acc = self.sum_sets(acc, ElemSet::singleton(x));
        }
        acc
    }

    /// `{ab | a ∈ A, b ∈ B}`.
    pub fn mul_sets(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n();
        (0..n).all(|x| (x + 1..n).all(|y| self.add(x, y) == self.add(y, x)))
    }

    pub fn is_mul_commutative(&self) -> bool {
        let n = self.n();
        self.has_mul() && (0..n).all(|x| (x + 1..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// True iff every sum is a singleton.
    pub fn is_single_valued(&self) -> bool {
        self.add.iter().all(|s| s.is_singleton())
    }

    /// Renumber through `perm`, where `perm[old] = new`. The permutation
    /// must fix 0.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteHyperStructure> {
        let n = self.n();
        if perm.len() != n || perm[0] != 0 {
            return Err(invalid("relabelling must be a permutation fixing 0"));
        }
        let mut seen = ElemSet::EMPTY;
        for &p in perm {
            if p >= n || seen.contains(p) {
                return Err(invalid("relabelling is not a permutation"));
            }
            seen.insert(p);
        }
        let mut names = vec![String::new(); n];
        let mut add = vec![ElemSet::EMPTY; n * n];
        for x in 0..n {
            names[perm[x]] = self.names[x].clone();
            for y in 0..n {
                add[perm[x] * n + perm[y]] = self.add(x, y).map(|i| perm[i]);
            }
        }
        let t = FiniteHyperStructure::new(names, add)?;
        match (&self.mul, self.one) {
            (Some(_), Some(one)) => {
                let mut mul = vec![0; n * n];
                for x in 0..n {
                    for y in 0..n {
                        mul[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
                    }
                }
                t.with_multiplication(mul, perm[one])
            }
            _ => Ok(t),
        }
    }

    /// Substructure on `keep` (which must contain 0), with sums intersected
    /// with `keep` and products kept when they stay inside. Index order
    /// follows `keep`.
    pub fn restrict(&self, keep: ElemSet) -> Result<(FiniteHyperStructure, Vec<usize>)> {
        if !keep.contains(0) {
            return Err(invalid("restriction must keep the zero"));
        }
        let elems: Vec<usize> = keep.iter().collect();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let m = elems.len();
        let mut add = Vec::with_capacity(m * m);
        for &x in &elems {
            for &y in &elems {
                let s = self.add(x, y).intersection(keep).map(|i| pos[i]);
                if s.is_empty() {
                    return Err(invalid(format!(
                        "restricted sum {} + {} is empty",
                        self.name(x),
                        self.name(y)
                    )));
                }
                add.push(s);
            }
        }
        let names = elems.iter().map(|&e| self.names[e].clone()).collect();
        let mut t = FiniteHyperStructure::new(names, add)?;
        if let (Some(_), Some(one)) = (&self.mul, self.one) {
            let closed = elems
                .iter()
                .all(|&x| elems.iter().all(|&y| keep.contains(self.mul(x, y))));
            if closed && keep.contains(one) {
                let mul = elems
                    .iter()
                    .flat_map(|&x| elems.iter().map(move |&y| (x, y)))
                    .map(|(x, y)| pos[self.mul(x, y)])
                    .collect();
                t = t.with_multiplication(mul, pos[one])?;
            }
        }
        Ok((t, elems))
    }

    fn derive_negation(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut neg = Vec::with_capacity(n);
        for x in 0..n {
            let right: ElemSet = (0..n).filter(|&y| self.add(x, y).contains(0)).collect();
            let left: ElemSet = (0..n).filter(|&y| self.add(y, x).contains(0)).collect();
            match (right.single(), left.single()) {
                (Some(r), Some(l)) if r == l => neg.push(r),
                _ => return None,
            }
        }
        Some(neg)
    }
}

impl std::fmt::Debug for FiniteHyperStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.n();
        writeln!(f, "FiniteHyperStructure(n = {n}) {{")?;
        for x in 1..n {
            for y in 1..n {
                let s: Vec<&str> = self.add(x, y).iter().map(|i| self.name(i)).collect();
                writeln!(
                    f,
                    "  {} + {} -> {}",
                    self.name(x),
                    self.name(y),
                    s.join(" ")
                )?;
            }
        }
        if self.has_mul() {
            for x in 1..n {
                for y in 1..n {
                    writeln!(
                        f,
                        "  {} * {} -> {}",
                        self.name(x),
                        self.name(y),
                        self.name(self.mul(x, y))
                    )?;
                }
            }
        }
        write!(f, "}}")
    }
}
