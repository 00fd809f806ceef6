use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::catalog::{krasner, sign, SetDescription, SymElem, SymbolicHyperfield};
use crate::error::{Error, Result};
use crate::isoenum::find_isomorphism;
use crate::kernel::{Axiom, CheckReport, ElemSet, FiniteHyperStructure, Violation};
use crate::ordered::{IndexElem, Window};

/// A finite semiring whose elements are subsets of a hyperfield, with
/// single-valued tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiringTable {
    pub elements: Vec<ElemSet>,
    /// Row-major `⊕` table over element indices.
    pub add: Vec<usize>,
    /// Row-major `⊙` table over element indices.
    pub mul: Vec<usize>,
    /// `generators[x]` is the index of the singleton `{x}`.
    pub generators: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

impl SemiringTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.len() + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b]
    }

    /// Exhaustive semiring axioms: `⊕` associative and commutative with
    /// identity `{0}`, `⊙` associative with identity `{1}`, `{0}` absorbing,
    /// and two-sided distributivity.
    pub fn check_axioms(&self) -> CheckReport {
        let n = self.len();
        let mut v = Vec::new();
        let mut push = |axiom, witness: &[usize]| {
            if v.iter().filter(|x: &&Violation| x.axiom == axiom).count() < 8 {
                v.push(Violation {
                    axiom,
                    witness: witness.to_vec(),
                });
            }
        };
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                push(Axiom::Identity, &[a]);
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                push(Axiom::MonoidIdentity, &[a]);
            }
            if self.mul(a, self.zero) != self.zero || self.mul(self.zero, a) != self.zero {
                push(Axiom::Absorption, &[a]);
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    push(Axiom::Commutativity, &[a, b]);
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        push(Axiom::Associativity, &[a, b, c]);
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        push(Axiom::MonoidAssociativity, &[a, b, c]);
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        push(Axiom::LeftDistributivity, &[a, b, c]);
                    }
                    if self.mul(self.add(b, c), a) != self.add(self.mul(b, a), self.mul(c, a)) {
                        push(Axiom::RightDistributivity, &[a, b, c]);
                    }
                }
            }
        }
        CheckReport::from_violations(v)
    }

    /// Element `i` written as a set of names from `source`.
    pub fn element_name(&self, source: &FiniteHyperStructure, i: usize) -> String {
        let names: Vec<&str> = self.elements[i].iter().map(|x| source.name(x)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Closure of the singletons of `t` under `A ⊕ B = ⋃ a ⊞ b` and
/// `A ⊙ B = {ab}`. Requires a doubly distributive structure; fails with a
/// capacity error once more than `cap` sets have been generated.
pub fn associated_semiring(t: &FiniteHyperStructure, cap: usize) -> Result<SemiringTable> {
    let (dd, witness) = t.is_doubly_distributive()?;
    if !dd {
        return Err(Error::Precondition(format!(
            "associated semiring needs double distributivity; fails at {witness:?}"
        )));
    }
    let one = t.one().expect("multiplicative");
    let mut elements: Vec<ElemSet> = (0..t.n()).map(ElemSet::singleton).collect();
    let mut index: HashMap<ElemSet, usize> =
        elements.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    if elements.len() > cap {
        return Err(Error::Capacity {
            what: "associated semiring".into(),
            needed: elements.len(),
            limit: cap,
        });
    }
    // Pairs (i, j) with both below `done` have been combined already.
    let mut done = 0;
    while done < elements.len() {
        let hi = elements.len();
        for i in 0..hi {
            for j in 0..hi {
                if i < done && j < done {
                    continue;
                }
                for s in [
                    t.sum_sets(elements[i], elements[j]),
                    t.mul_sets(elements[i], elements[j]),
                ] {
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(s) {
                        e.insert(elements.len());
                        elements.push(s);
                        if elements.len() > cap {
                            return Err(Error::Capacity {
                                what: "associated semiring".into(),
                                needed: elements.len(),
                                limit: cap,
                            });
                        }
                    }
                }
            }
        }
        done = hi;
    }
    let m = elements.len();
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            add.push(index[&t.sum_sets(elements[i], elements[j])]);
            mul.push(index[&t.mul_sets(elements[i], elements[j])]);
        }
    }
    Ok(SemiringTable {
        generators: (0..t.n()).collect(),
        zero: 0,
        one,
        elements,
        add,
        mul,
    })
}

/// Which closed form describes the associated semiring of a layering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// Base `K`: singletons and ghosts `g^ν = {h ≤ g} ∪ {0}`.
    Supertropical,
    /// Base `S`: `0`, `⊕g`, `⊖g` and `g° = {(±1, h) | h ≤ g} ∪ {0}`.
    Symmetrised,
    /// Field base over a dense group: singletons and `D(g) = {h < g} ∪ {0}`.
    Linearised,
}

impl fmt::Display for ClosedFormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedFormKind::Supertropical => "supertropical",
            ClosedFormKind::Symmetrised => "symmetrised",
            ClosedFormKind::Linearised => "linearised",
        })
    }
}

/// Element of a closed-form associated semiring: zero, a singleton, or the
/// extra set attached to layer `g` (`x ⊞ -x` for any `x` in layer `g`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedFormElem {
    Zero,
    Single(SymElem),
    Ghost(IndexElem),
}

/// The associated semiring of a doubly distributive layering, by its
/// closed-form rules rather than by powerset closure.
#[derive(Debug, Clone)]
pub struct ClosedFormSemiring {
    pub kind: ClosedFormKind,
    field: SymbolicHyperfield,
}

/// Pick the closed form for `f`; errors if `f` is not doubly distributive
/// (field base over a discrete group).
pub fn closed_form_semiring(f: &SymbolicHyperfield) -> Result<ClosedFormSemiring> {
    let base = f.base();
    let kind = if base.n() == 2 && find_isomorphism(base, &krasner()).is_some() {
        ClosedFormKind::Supertropical
    } else if base.n() == 3 && find_isomorphism(base, &sign()).is_some() {
        ClosedFormKind::Symmetrised
    } else if base.is_single_valued() {
        if !f.group().is_dense_below_identity()? {
            return Err(Error::Precondition(format!(
                "{f} is not doubly distributive: {} has a largest element below the identity",
                f.group()
            )));
        }
        ClosedFormKind::Linearised
    } else {
        return Err(Error::Precondition(format!(
            "{f}: base is neither K, S nor a field"
        )));
    };
    Ok(ClosedFormSemiring {
        kind,
        field: f.clone(),
    })
}

impl ClosedFormSemiring {
    pub fn field(&self) -> &SymbolicHyperfield {
        &self.field
    }

    fn layer(x: &ClosedFormElem) -> Option<&IndexElem> {
        match x {
            ClosedFormElem::Zero => None,
            ClosedFormElem::Single(s) => s.layer(),
            ClosedFormElem::Ghost(g) => Some(g),
        }
    }

    /// The subset of the layering that an element stands for.
    pub fn to_set(&self, x: &ClosedFormElem) -> Result<SetDescription> {
        Ok(match x {
            ClosedFormElem::Zero => SetDescription::singleton(SymElem::Zero),
            ClosedFormElem::Single(s) => SetDescription::singleton(s.clone()),
            ClosedFormElem::Ghost(g) => {
                let one = self.field.base().one().expect("hyperfield");
                let u = SymElem::unit(one, g.clone());
                self.field.sym_add(&u, &self.field.sym_neg(&u)?)?
            }
        })
    }

    /// Closed-form elements with layers in a window, plus zero.
    pub fn window_elements(&self, w: &Window) -> Vec<ClosedFormElem> {
        let mut out = vec![ClosedFormElem::Zero];
        for g in self.field.group().window_elements(w) {
            for u in 1..self.field.base().n() {
                out.push(ClosedFormElem::Single(SymElem::unit(u, g.clone())));
            }
            out.push(ClosedFormElem::Ghost(g));
        }
        out
    }

    pub fn add(&self, x: &ClosedFormElem, y: &ClosedFormElem) -> Result<ClosedFormElem> {
        use ClosedFormElem::*;
        let (gx, gy) = match (Self::layer(x), Self::layer(y)) {
            (None, _) => return Ok(y.clone()),
            (_, None) => return Ok(x.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        match gx.cmp(gy) {
            Ordering::Greater => return Ok(x.clone()),
            Ordering::Less => return Ok(y.clone()),
            Ordering::Equal => {}
        }
        let g = gx.clone();
        Ok(match self.kind {
            ClosedFormKind::Supertropical => Ghost(g),
            // D(g) lies strictly below layer g, so singletons there absorb it.
            ClosedFormKind::Linearised => match (x, y) {
                (Single(a), Single(b)) => match self.field.sym_add(a, b)?.single() {
                    Some(c) => Single(c.clone()),
                    None => Ghost(g),
                },
                (Single(_), Ghost(_)) => x.clone(),
                (Ghost(_), Single(_)) => y.clone(),
                _ => Ghost(g),
            },
            ClosedFormKind::Symmetrised => match (x, y) {
                (Single(a), Single(b)) => {
                    let s = self.field.sym_add(a, b)?;
                    match s.single() {
                        Some(c) => Single(c.clone()),
                        None => Ghost(g),
                    }
                }
                _ => Ghost(g),
            },
        })
    }

    pub fn mul(&self, x: &ClosedFormElem, y: &ClosedFormElem) -> Result<ClosedFormElem> {
        use ClosedFormElem::*;
        let group = self.field.group();
        Ok(match (x, y) {
            (Zero, _) | (_, Zero) => Zero,
            (Single(a), Single(b)) => Single(self.field.sym_mul(a, b)?),
            _ => {
                let gx = Self::layer(x).expect("nonzero");
                let gy = Self::layer(y).expect("nonzero");
                Ghost(group.group_op(gx, gy)?)
            }
        })
    }

    /// Exact symbolic cross-check on a window: every element, sum and
    /// product agrees with set arithmetic on the described subsets. Returns
    /// the mismatches found.
    pub fn verify_against_sets(&self, w: &Window) -> Result<Vec<String>> {
        let elems = self.window_elements(w);
        let f = &self.field;
        let mut bad = Vec::new();
        for x in &elems {
            let sx = self.to_set(x)?;
            for y in &elems {
                let sy = self.to_set(y)?;
                let sum = self.to_set(&self.add(x, y)?)?;
                if sum != f.set_add(&sx, &sy)? {
                    bad.push(format!("{x:?} + {y:?}"));
                }
                let prod = self.to_set(&self.mul(x, y)?)?;
                if prod != f.set_mul(&sx, &sy)? {
                    bad.push(format!("{x:?} * {y:?}"));
                }
            }
        }
        Ok(bad)
    }
}

/// Closure of the singletons of a window table under `⊕`, computed on the
/// truncated table.
pub fn windowed_closure(f: &SymbolicHyperfield, w: &Window) -> Result<Vec<ElemSet>> {
    let wt = f.window_table(w)?;
    let t = &wt.table;
    let mut elements: Vec<ElemSet> = (0..t.n()).map(ElemSet::singleton).collect();
    let mut seen: std::collections::HashSet<ElemSet> = elements.iter().copied().collect();
    let mut i = 0;
    while i < elements.len() {
        for j in 0..=i {
            let s = t.sum_sets(elements[i], elements[j]);
            if seen.insert(s) {
                elements.push(s);
            }
        }
        i += 1;
    }
    elements.sort();
    Ok(elements)
}

/// Compare the closed form with the windowed closure: same element sets
/// after truncation, same sums, and same products wherever the closed-form
/// product stays inside the window (and, for a dense group, is not a
/// product of two downsets). Returns mismatch descriptions.
pub fn compare_with_windowed_closure(cf: &ClosedFormSemiring, w: &Window) -> Result<Vec<String>> {
    let f = cf.field();
    let wt = f.window_table(w)?;
    let t = &wt.table;
    let closure = windowed_closure(f, w)?;
    let elems = cf.window_elements(w);
    let trunc =
        |x: &ClosedFormElem| -> Result<ElemSet> { Ok(f.truncate(&cf.to_set(x)?, &wt.elems).0) };

    let mut bad = Vec::new();
    let mut described: Vec<ElemSet> = elems.iter().map(trunc).collect::<Result<_>>()?;
    described.sort();
    described.dedup();
    if described != closure {
        bad.push(format!(
            "closure has {} sets, closed form describes {}",
            closure.len(),
            described.len()
        ));
    }
    let in_window = |x: &ClosedFormElem| match ClosedFormSemiring::layer(x) {
        None => true,
        Some(g) => wt.elems.iter().any(|e| e.layer() == Some(g)),
    };
    for x in &elems {
        let tx = trunc(x)?;
        for y in &elems {
            let ty = trunc(y)?;
            if trunc(&cf.add(x, y)?)? != t.sum_sets(tx, ty) {
                bad.push(format!("sum {x:?} + {y:?}"));
            }
            let p = cf.mul(x, y)?;
            // A window samples a dense group discretely, so products of two
            // downsets lose their top layer there.
            let sampled = !(cf.kind == ClosedFormKind::Linearised
                && matches!((x, y), (ClosedFormElem::Ghost(_), ClosedFormElem::Ghost(_))));
            if sampled && in_window(&p) {
                let mut prod = ElemSet::EMPTY;
                for a in tx {
                    for b in ty {
                        let c = f.sym_mul(&wt.elems[a], &wt.elems[b])?;
                        if let Some(k) = wt.index_of(&c) {
                            prod.insert(k);
                        }
                    }
                }
                let mut expected = trunc(&p)?;
                let (_, cut_x) = f.truncate(&cf.to_set(x)?, &wt.elems);
                let (_, cut_y) = f.truncate(&cf.to_set(y)?, &wt.elems);
                if cut_x || cut_y {
                    // Only layers reachable from the sampled part of a cut
                    // downset are comparable.
                    let low =
                        |s: ElemSet| s.iter().filter_map(|k| wt.elems[k].layer().cloned()).min();
                    let floor = match (low(tx), low(ty)) {
                        (Some(a), Some(b)) => Some(f.group().group_op(&a, &b)?),
                        _ => None,
                    };
                    let keep = |k: usize| match (wt.elems[k].layer(), &floor) {
                        (None, _) => true,
                        (Some(g), Some(fl)) => g >= fl,
                        (Some(_), None) => false,
                    };
                    expected = ElemSet::from_indices(expected.iter().filter(|&k| keep(k)));
                }
                if expected != prod {
                    bad.push(format!("product {x:?} * {y:?}"));
                }
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_symbolic, finite_field_of_order};
    use crate::constructions::product;

    #[test]
    fn krasner_sign_and_field_closures() {
        let k = associated_semiring(&krasner(), 16).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.elements.contains(&ElemSet::from_indices([0, 1])));
        assert!(k.check_axioms().passed);

        let s = associated_semiring(&sign(), 16).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.elements.contains(&ElemSet::full(3)));
        assert!(s.check_axioms().passed);

        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = finite_field_of_order(q).unwrap();
            let t = associated_semiring(&f, 64).unwrap();
            assert_eq!(t.len(), q);
            assert!(t.check_axioms().passed);
        }
    }

    #[test]
    fn closure_respects_cap_and_precondition() {
        assert!(matches!(
            associated_semiring(&sign(), 3),
            Err(Error::Capacity { .. })
        ));
        let kk = product(&krasner(), &krasner()).unwrap();
        assert!(associated_semiring(&kk, 64).unwrap().check_axioms().passed);
        let z = builtin_symbolic("Zminusinf").unwrap();
        let wt = z.window_table(&Window::new(0, 0)).unwrap();
        assert!(associated_semiring(&wt.table, 64).is_err());
    }

    #[test]
    fn closed_forms_match_set_arithmetic() {
        for (name, kind) in [
            ("trop(Z)", ClosedFormKind::Supertropical),
            ("layer(S,Z)", ClosedFormKind::Symmetrised),
            ("layer(K,Z^2)", ClosedFormKind::Supertropical),
            ("layer(GF(3),Q)", ClosedFormKind::Linearised),
        ] {
            let f = builtin_symbolic(name).unwrap();
            let cf = closed_form_semiring(&f).unwrap();
            assert_eq!(cf.kind, kind);
            let w = if name.contains("^2") {
                Window::new(-1, 1)
            } else {
                Window::new(-3, 3)
            };
            assert_eq!(
                cf.verify_against_sets(&w).unwrap(),
                Vec::<String>::new(),
                "{name}"
            );
        }
        assert!(closed_form_semiring(&builtin_symbolic("Zminusinf").unwrap()).is_err());
    }

    #[test]
    fn windowed_closure_matches_closed_form() {
        for name in ["trop(Z)", "layer(S,Z)", "layer(GF(5),Q)"] {
            let f = builtin_symbolic(name).unwrap();
            let cf = closed_form_semiring(&f).unwrap();
            let bad = compare_with_windowed_closure(&cf, &Window::new(-3, 3)).unwrap();
            assert!(bad.is_empty(), "{name}: {bad:?}");
        }
    }
}
