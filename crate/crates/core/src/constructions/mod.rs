//! Products, wedge sums, layerings, Krasner quotients and associated
//! semirings.

mod semiring;

pub use semiring::{
    associated_semiring, closed_form_semiring, compare_with_windowed_closure, windowed_closure,
    ClosedFormElem, ClosedFormKind, ClosedFormSemiring, SemiringTable,
};

use crate::catalog::{Action, SymbolicHyperfield};
use crate::error::{invalid, Error, Result};
use crate::kernel::{ElemSet, FiniteHyperStructure, MAX_CARRIER};
use crate::ordered::OrderedIndex;

fn capacity(what: &str, needed: usize) -> Result<()> {
    if needed > MAX_CARRIER {
        return Err(Error::Capacity {
            what: what.into(),
            needed,
            limit: MAX_CARRIER,
        });
    }
    Ok(())
}

/// Componentwise product. Element `(a,b)` has index `a * |B| + b`. The
/// result carries a multiplication when both factors do.
pub fn product(a: &FiniteHyperStructure, b: &FiniteHyperStructure) -> Result<FiniteHyperStructure> {
    let (na, nb) = (a.n(), b.n());
    let n = na * nb;
    capacity("product carrier", n)?;
    let idx = |x: usize, y: usize| x * nb + y;
    let mut names = Vec::with_capacity(n);
    for x in 0..na {
        for y in 0..nb {
            names.push(format!("({},{})", a.name(x), b.name(y)));
        }
    }
    let mut add = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let (sa, sb) = (a.add(p / nb, q / nb), b.add(p % nb, q % nb));
            let mut s = ElemSet::EMPTY;
            for x in sa {
                for y in sb {
                    s.insert(idx(x, y));
                }
            }
            add.push(s);
        }
    }
    let t = FiniteHyperStructure::new(names, add)?;
    match (a.one(), b.one(), a.has_mul() && b.has_mul()) {
        (Some(oa), Some(ob), true) => {
            let mul = (0..n * n)
                .map(|k| {
                    let (p, q) = (k / n, k % n);
                    idx(a.mul(p / nb, q / nb), b.mul(p % nb, q % nb))
                })
                .collect();
            t.with_multiplication(mul, idx(oa, ob))
        }
        _ => Ok(t),
    }
}

/// Wedge sum of hypergroups indexed by the chain `0 < 1 < .. < k-1` in list
/// order. Nonzero elements of layer `i` are renamed `name_i` (1-based); all
/// layers share the zero at index 0, and layer `i` occupies a contiguous
/// index block above the blocks of lower layers.
pub fn wedge_sum(layers: &[FiniteHyperStructure]) -> Result<FiniteHyperStructure> {
    if layers.is_empty() {
        return Err(invalid("wedge sum of no layers"));
    }
    for (i, l) in layers.iter().enumerate() {
        let report = l.check_hypergroup();
        if !report.passed {
            return Err(invalid(format!(
                "layer {} is not a hypergroup: {:?}",
                i + 1,
                report.violations[0]
            )));
        }
    }
    let n = 1 + layers.iter().map(|l| l.n() - 1).sum::<usize>();
    capacity("wedge sum carrier", n)?;

    // offset[i] + x - 1 is the global index of nonzero x in layer i.
    let mut offset = Vec::with_capacity(layers.len());
    let mut names = vec!["0".to_string()];
    let mut layer_of = vec![usize::MAX];
    let mut local = vec![0];
    for (i, l) in layers.iter().enumerate() {
        offset.push(names.len());
        for x in 1..l.n() {
            names.push(format!("{}_{}", l.name(x), i + 1));
            layer_of.push(i);
            local.push(x);
        }
    }
    let mut below = vec![ElemSet::singleton(0)];
    for i in 1..layers.len() {
        let prev = below[i - 1];
        let block = (offset[i - 1]..offset[i]).collect::<ElemSet>();
        below.push(prev.union(block));
    }
    let mut add = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let s = if x == 0 {
                ElemSet::singleton(y)
            } else if y == 0 {
                ElemSet::singleton(x)
            } else {
                let (i, j) = (layer_of[x], layer_of[y]);
                match i.cmp(&j) {
                    std::cmp::Ordering::Greater => ElemSet::singleton(x),
                    std::cmp::Ordering::Less => ElemSet::singleton(y),
                    std::cmp::Ordering::Equal => {
                        let inner = layers[i].add(local[x], local[y]);
                        let mapped = inner.map(|z| if z == 0 { 0 } else { offset[i] + z - 1 });
                        if inner.contains(0) {
                            mapped.union(below[i])
                        } else {
                            mapped
                        }
                    }
                }
            };
            add.push(s);
        }
    }
    FiniteHyperStructure::new(names, add)
}

/// The layering `M ⋊ G` with the given action, after checking that `M` is
/// a hyperfield. `label` names the base in the result's name.
pub fn layering(
    label: &str,
    m: &FiniteHyperStructure,
    g: OrderedIndex,
    action: Action,
) -> Result<SymbolicHyperfield> {
    let report = m.check_hyperfield()?;
    if !report.passed {
        return Err(invalid(format!(
            "{label} is not a hyperfield: {:?}",
            report.violations[0]
        )));
    }
    let name = format!("layer({label},{g})");
    SymbolicHyperfield::new(name, m.clone(), g, action)
}

fn check_field(k: &FiniteHyperStructure) -> Result<usize> {
    if !k.is_single_valued() {
        return Err(invalid("quotient base must be a field"));
    }
    let report = k.check_hyperfield()?;
    if !report.passed {
        return Err(invalid(format!(
            "quotient base is not a field: {:?}",
            report.violations[0]
        )));
    }
    Ok(k.one().expect("checked"))
}

/// All subgroups of the (cyclic) multiplicative group of a finite field,
/// one per divisor `d` of `q - 1`, as `{x | x^d = 1}`, by increasing size.
pub fn unit_subgroups(k: &FiniteHyperStructure) -> Result<Vec<ElemSet>> {
    let one = check_field(k)?;
    let q1 = k.n() - 1;
    let mut out = Vec::new();
    for d in (1..=q1).filter(|d| q1.is_multiple_of(*d)) {
        let s: ElemSet = (1..k.n())
            .filter(|&x| {
                let mut p = one;
                for _ in 0..d {
                    p = k.mul(p, x);
                }
                p == one
            })
            .collect();
        out.push(s);
    }
    Ok(out)
}

/// The Krasner quotient `K/U`: nonzero cosets `gU` plus zero, with
/// `[g] ⊞ [h]` the classes met by `gU + hU`. Index 0 is `[0]`, index 1 is
/// `[1] = U`, the rest follow their least representative. Elements are
/// named `[r]` after their least representative.
pub fn quotient(k: &FiniteHyperStructure, u: ElemSet) -> Result<FiniteHyperStructure> {
    let one = check_field(k)?;
    let n = k.n();
    if u.contains(0) || !u.contains(one) || !u.is_subset(k.nonzero()) {
        return Err(invalid("U must be a set of units containing 1"));
    }
    for a in u {
        for b in u {
            if !u.contains(k.mul(a, b)) {
                return Err(invalid("U is not closed under multiplication"));
            }
        }
        if !u.iter().any(|b| k.mul(a, b) == one) {
            return Err(invalid("U is not closed under inverses"));
        }
    }

    let mut class = vec![usize::MAX; n];
    class[0] = 0;
    let mut reps = vec![0];
    let mut members = vec![ElemSet::singleton(0)];
    let mut order: Vec<usize> = vec![one];
    order.extend((1..n).filter(|&x| x != one));
    for g in order {
        if class[g] != usize::MAX {
            continue;
        }
        let id = reps.len();
        let coset: ElemSet = u.iter().map(|x| k.mul(g, x)).collect();
        for x in coset {
            class[x] = id;
        }
        reps.push(coset.min().expect("nonempty"));
        members.push(coset);
    }
    let m = reps.len();
    let names = reps
        .iter()
        .map(|&r| {
            if r == 0 {
                "0".to_string()
            } else {
                format!("[{}]", k.name(r))
            }
        })
        .collect();
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            add.push(k.sum_sets(members[a], members[b]).map(|x| class[x]));
            mul.push(class[k.mul(reps[a], reps[b])]);
        }
    }
    FiniteHyperStructure::new(names, add)?.with_multiplication(mul, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{finite_field, finite_field_of_order, krasner, sign};
    use crate::isoenum::find_isomorphism;
    use crate::kernel::Axiom;
    use proptest::prelude::*;

    fn cyclic(n: usize) -> FiniteHyperStructure {
        FiniteHyperStructure::from_fn(n, |x, y| ElemSet::singleton((x + y) % n)).unwrap()
    }

    fn one_point() -> FiniteHyperStructure {
        FiniteHyperStructure::from_fn(1, |_, _| ElemSet::singleton(0))
            .unwrap()
            .with_multiplication(vec![0], 0)
            .unwrap()
    }

    #[test]
    fn product_examples() {
        let kk = product(&krasner(), &krasner()).unwrap();
        assert_eq!(kk.n(), 4);
        assert!(kk.check_skew_hyperring().unwrap().passed);
        assert_eq!(kk.name(2), "(1,0)");

        let z6 = product(&finite_field(2, 1).unwrap(), &finite_field(3, 1).unwrap()).unwrap();
        assert!(z6.check_skew_hyperring().unwrap().passed);
        assert!(z6.is_single_valued());
        // (1,1) generates the additive group, like 1 in Z/6.
        let mut acc = 0;
        let mut seen = ElemSet::EMPTY;
        for _ in 0..6 {
            acc = z6.add(acc, 4).single().unwrap();
            seen.insert(acc);
        }
        assert_eq!(seen, z6.carrier());

        let k1 = product(&krasner(), &one_point()).unwrap();
        assert!(find_isomorphism(&k1, &krasner()).is_some());
        assert!(matches!(
            product(&finite_field(3, 2).unwrap(), &finite_field(2, 3).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn wedge_of_two_c2() {
        let w = wedge_sum(&[cyclic(2), cyclic(2)]).unwrap();
        assert_eq!(w.names(), ["0", "1_1", "1_2"]);
        assert_eq!(w.add(2, 2), ElemSet::from_indices([0, 1]));
        assert_eq!(w.add(1, 2), ElemSet::singleton(2));
        assert!(w.check_hypergroup().passed);
    }

    #[test]
    fn wedge_of_one_layer_is_the_layer() {
        for l in [cyclic(3), krasner().additive(), sign().additive()] {
            let w = wedge_sum(std::slice::from_ref(&l)).unwrap();
            assert!(find_isomorphism(&w, &l).is_some());
        }
    }

    #[test]
    fn wedge_of_k_and_s() {
        let w = wedge_sum(&[krasner().additive(), sign().additive()]).unwrap();
        assert_eq!(w.n(), 4);
        assert!(w.check_hypergroup().passed);
        assert!(w.is_stringent().0);
        assert_eq!(w.add(1, 1), ElemSet::from_indices([0, 1]));
        assert_eq!(w.add(2, 3), ElemSet::full(4));
    }

    #[test]
    fn wedge_rejects_bad_layers() {
        let bad = FiniteHyperStructure::from_fn(2, |x, y| ElemSet::singleton(x.max(y))).unwrap();
        assert!(wedge_sum(&[bad]).is_err());
        assert!(wedge_sum(&[]).is_err());
    }

    #[test]
    fn layering_examples() {
        let z = layering(
            "GF(2)",
            &finite_field(2, 1).unwrap(),
            OrderedIndex::Integers,
            Action::Trivial,
        )
        .unwrap();
        assert_eq!(z.base().n(), 2);
        let trivial = layering("S", &sign(), OrderedIndex::LexPower(0), Action::Trivial).unwrap();
        let wt = trivial
            .window_table(&crate::ordered::Window::new(0, 0))
            .unwrap();
        assert!(find_isomorphism(&wt.table, &sign()).is_some());
        let kk = product(&krasner(), &krasner()).unwrap();
        assert!(layering("KxK", &kk, OrderedIndex::Integers, Action::Trivial).is_err());
    }

    #[test]
    fn quotient_examples() {
        let gf4 = finite_field(2, 2).unwrap();
        let q = quotient(&gf4, gf4.nonzero()).unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(q.add(1, 1), ElemSet::from_indices([0, 1]));
        assert!(find_isomorphism(&q, &krasner()).is_some());

        let gf3 = finite_field(3, 1).unwrap();
        let q = quotient(&gf3, ElemSet::singleton(1)).unwrap();
        assert!(find_isomorphism(&q, &gf3).is_some());

        let gf5 = finite_field(5, 1).unwrap();
        let q = quotient(&gf5, ElemSet::from_indices([1, 4])).unwrap();
        assert_eq!(q.names(), ["0", "[1]", "[2]"]);
        assert_eq!(q.add(1, 1), ElemSet::from_indices([0, 2]));

        assert!(quotient(&gf5, ElemSet::from_indices([1, 2])).is_err());
        assert!(quotient(&krasner(), ElemSet::singleton(1)).is_err());
    }

    #[test]
    fn all_quotients_are_hyperfields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let k = finite_field_of_order(q).unwrap();
            let subs = unit_subgroups(&k).unwrap();
            for u in subs {
                let t = quotient(&k, u).unwrap();
                assert!(t.check_hyperfield().unwrap().passed, "GF({q})/{u:?}");
                assert_eq!(t.n(), 1 + (q - 1) / u.len());
            }
        }
    }

    /// Layer lists mixing groups, K and S, in random order.
    fn layer_list() -> impl Strategy<Value = Vec<FiniteHyperStructure>> {
        let layer = (0usize..5).prop_map(|i| match i {
            0 => cyclic(2),
            1 => cyclic(3),
            2 => krasner().additive(),
            3 => sign().additive(),
            _ => finite_field(2, 2).unwrap().additive(),
        });
        proptest::collection::vec(layer, 1..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn wedge_preserves_axioms(layers in layer_list()) {
            let w = wedge_sum(&layers).unwrap();
            let report = w.check_hypergroup();
            prop_assert!(report.passed, "{:?}", report.violations);
            prop_assert!(!report.violated(Axiom::FormulationMismatch));
            prop_assert!(w.is_stringent().0);
            prop_assert!(w.is_commutative());
        }
    }
}
