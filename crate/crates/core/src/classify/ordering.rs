use serde::Serialize;

use super::layering::{extract_symbolic_layering, BaseTag};
use crate::catalog::{SymElem, SymbolicHyperfield};
use crate::error::{Error, Result};
use crate::kernel::{ElemSet, FiniteHyperStructure};
use crate::ordered::Window;

/// Largest carrier [`find_ordering`] searches.
pub const MAX_ORDERING: usize = 16;

/// Largest number of window layers [`windowed_positive_cone`] searches.
const MAX_CONE_LAYERS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingReport {
    /// An ordering `P`, if one exists.
    pub ordering: Option<Vec<usize>>,
    /// `-1 ∉ R² ⊞ R²`.
    pub real: bool,
}

/// `-1 ∉ R² ⊞ R²` with `R² = {a² | a ∈ R}`.
pub fn is_real(t: &FiniteHyperStructure) -> Result<bool> {
    let one = t
        .one()
        .ok_or_else(|| Error::Precondition("not multiplicative".into()))?;
    let minus_one = t.neg(one).expect("hypergroup");
    let squares = ElemSet::from_indices((0..t.n()).map(|a| t.mul(a, a)));
    Ok(!t.sum_sets(squares, squares).contains(minus_one))
}

/// Search for `P` with `P ⊞ P ⊆ P`, `P ⊙ P ⊆ P`, `P ∪ -P = R` and
/// `P ∩ -P = {0}`. The last two conditions force `P` to contain exactly
/// one element of each pair `{x, -x}` (and no nonzero `x = -x` can be
/// placed), so the search runs over those choices, which covers every
/// qualifying subset. Also decides realness and checks that an ordering
/// exists exactly when the hyperfield is real.
pub fn find_ordering(t: &FiniteHyperStructure) -> Result<OrderingReport> {
    if t.n() > MAX_ORDERING {
        return Err(Error::Capacity {
            what: "ordering search".into(),
            needed: t.n(),
            limit: MAX_ORDERING,
        });
    }
    if !t.has_mul() || !t.check_hyperfield()?.passed {
        return Err(Error::Precondition(
            "orderings are searched in hyperfields".into(),
        ));
    }
    let real = is_real(t)?;
    let ordering = search(
        t.n(),
        |x| t.neg(x).expect("hypergroup"),
        |p| t.sum_sets(p, p).is_subset(p) && t.mul_sets(p, p).is_subset(p),
    );
    if ordering.is_some() != real {
        return Err(Error::TheoremViolation(format!(
            "ordering {} but real is {real}",
            if ordering.is_some() {
                "exists"
            } else {
                "does not exist"
            }
        )));
    }
    Ok(OrderingReport {
        ordering: ordering.map(|p| p.iter().collect()),
        real,
    })
}

fn search(n: usize, neg: impl Fn(usize) -> usize, ok: impl Fn(ElemSet) -> bool) -> Option<ElemSet> {
    let mut pairs = Vec::new();
    for x in 1..n {
        let nx = neg(x);
        if nx == x {
            return None;
        }
        if x < nx {
            pairs.push((x, nx));
        }
    }
    (0u64..1 << pairs.len()).find_map(|mask| {
        let p = pairs
            .iter()
            .enumerate()
            .fold(ElemSet::singleton(0), |p, (i, &(x, nx))| {
                p.with(if mask >> i & 1 == 0 { x } else { nx })
            });
        ok(p).then_some(p)
    })
}

/// The positive cone of a layered hyperfield with base `𝕊`, searched on a
/// window.
#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    pub window: Window,
    /// The nonzero elements of the ordering found, displayed.
    pub cone: Vec<String>,
    /// `ψ` restricted to the cone is a bijection onto the window's layers.
    pub bijective: bool,
    /// `-1` lies outside the cone.
    pub minus_one_outside: bool,
}

impl ConeReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.minus_one_outside
    }
}

/// Find an ordering of the window table (sums truncated to the window,
/// products required to stay in `P` whenever they land in the window) and
/// check that its nonzero part `O` meets every layer once, so that `H`
/// splits as `𝕊^× × G` via `x ↦ (±1, ψ(x))`.
pub fn windowed_positive_cone(f: &SymbolicHyperfield, window: &Window) -> Result<ConeReport> {
    let (ex, wt) = extract_symbolic_layering(f, window)?;
    if ex.base_tag != BaseTag::Sign {
        return Err(Error::Precondition(format!(
            "{} does not have base S",
            f.name()
        )));
    }
    let t = &wt.table;
    let n = t.n();
    let layers = (n - 1) / 2;
    if layers > MAX_CONE_LAYERS {
        return Err(Error::Capacity {
            what: "window layers for the cone search".into(),
            needed: layers,
            limit: MAX_CONE_LAYERS,
        });
    }
    let mut products = vec![None; n * n];
    for x in 0..n {
        for y in 0..n {
            products[x * n + y] = wt.index_of(&f.sym_mul(&wt.elems[x], &wt.elems[y])?);
        }
    }
    let cone = search(
        n,
        |x| t.neg(x).expect("hypergroup"),
        |p| {
            t.sum_sets(p, p).is_subset(p)
                && p.iter().all(|x| {
                    p.iter()
                        .all(|y| products[x * n + y].is_none_or(|k| p.contains(k)))
                })
        },
    )
    .ok_or_else(|| {
        Error::TheoremViolation(format!("{} has no ordering on the window", f.name()))
    })?;
    let nonzero: Vec<&SymElem> = cone.without(0).iter().map(|x| &wt.elems[x]).collect();
    let mut seen: Vec<_> = nonzero.iter().filter_map(|x| x.layer()).collect();
    seen.sort();
    seen.dedup();
    let all_layers = f.group().window_elements(window);
    let bijective = seen.len() == nonzero.len() && seen.len() == all_layers.len();
    let minus_one = f.sym_neg(&f.one())?;
    Ok(ConeReport {
        window: *window,
        cone: nonzero.iter().map(|x| f.display(x)).collect(),
        bijective,
        minus_one_outside: !nonzero.contains(&&minus_one),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_symbolic, finite_field, krasner, sign};

    #[test]
    fn orderings() {
        let s = find_ordering(&sign()).unwrap();
        assert_eq!(s.ordering, Some(vec![0, 1]));
        assert!(s.real);
        let g3 = find_ordering(&finite_field(3, 1).unwrap()).unwrap();
        assert_eq!(g3.ordering, None);
        assert!(!g3.real);
        assert_eq!(find_ordering(&krasner()).unwrap().ordering, None);
        assert!(matches!(
            find_ordering(&finite_field(17, 1).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn cones() {
        for name in ["layer(S,Z)", "layer(S,Q)"] {
            let f = builtin_symbolic(name).unwrap();
            let r = windowed_positive_cone(&f, &Window::new(-3, 3)).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
            assert_eq!(r.cone.len(), 7);
        }
        assert!(
            windowed_positive_cone(&builtin_symbolic("trop(Z)").unwrap(), &Window::new(-1, 1))
                .is_err()
        );
    }
}
