//! The classification pipeline for stringent structures: the order `<_F`,
//! its classes, layers and their types, wedge decomposition, layering
//! extraction, double distributivity, orderings, hyperring reduction and
//! valuations.

mod layering;
mod lemmas;
mod ordering;
mod reduce;

pub use layering::{
    dd_criterion_stringent, dd_criterion_symbolic, extract_layering, extract_symbolic_layering,
    sign_square_check, valuation_of, valuation_of_symbolic, BaseTag, LayeringExtraction,
    SymbolicLayering, Valuation, ValueGroup,
};
pub use lemmas::{check_order_lemmas, check_sum_below_lemma};
pub use ordering::{
    find_ordering, is_real, windowed_positive_cone, ConeReport, OrderingReport, MAX_ORDERING,
};
pub use reduce::{reduce_hyperring, HyperringVerdict};

use std::fmt;

use serde::Serialize;

use crate::catalog::{krasner, sign};
use crate::constructions::wedge_sum;
use crate::error::{Error, Result};
use crate::isoenum::find_isomorphism;
use crate::kernel::{is_homomorphism, ElemSet, FiniteHyperStructure};

fn require_stringent_hypergroup(t: &FiniteHyperStructure) -> Result<()> {
    if let Some(v) = t.check_hypergroup().violations.first() {
        return Err(Error::Precondition(format!(
            "not a hypergroup: {:?} at {:?}",
            v.axiom, v.witness
        )));
    }
    if let (false, Some((a, b))) = t.is_stringent() {
        return Err(Error::Precondition(format!(
            "not stringent: {} + {} has several elements",
            t.name(a),
            t.name(b)
        )));
    }
    Ok(())
}

/// `x <_F y` iff `x ⊞ y = y ⊞ x = {y}` and `x ≠ y`, on nonzero elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LessRelation {
    /// `above[x]` is the set of `y` with `x <_F y`.
    above: Vec<ElemSet>,
}

impl LessRelation {
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    pub fn above(&self, x: usize) -> ElemSet {
        self.above[x]
    }

    /// Neither `x <_F y` nor `y <_F x`.
    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        !self.less(x, y) && !self.less(y, x)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.above.len())
            .flat_map(|x| self.above[x].iter().map(move |y| (x, y)))
            .collect()
    }
}

/// The relation `<_F` on a stringent hypergroup, verified to be a strict
/// partial order.
pub fn less_relation(t: &FiniteHyperStructure) -> Result<LessRelation> {
    require_stringent_hypergroup(t)?;
    let n = t.n();
    let mut above = vec![ElemSet::EMPTY; n];
    for x in 1..n {
        for y in 1..n {
            let single = ElemSet::singleton(y);
            if x != y && t.add(x, y) == single && t.add(y, x) == single {
                above[x].insert(y);
            }
        }
    }
    let rel = LessRelation { above };
    for x in 1..n {
        if rel.less(x, x) {
            return Err(Error::TheoremViolation(format!(
                "<_F is reflexive at {}",
                t.name(x)
            )));
        }
        for y in rel.above(x) {
            if !rel.above(y).is_subset(rel.above(x)) {
                return Err(Error::TheoremViolation(format!(
                    "<_F is not transitive through {} < {}",
                    t.name(x),
                    t.name(y)
                )));
            }
        }
    }
    Ok(rel)
}

/// The classes of `~_F`, listed in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimClasses {
    pub classes: Vec<ElemSet>,
    /// Class index of each nonzero element; `None` for zero.
    pub class_of: Vec<Option<usize>>,
}

/// `x ~_F y` iff neither `x <_F y` nor `y <_F x`. Checks that this is an
/// equivalence relation with `-x ~_F x`, and that `<_F` lifts to a total
/// order on the classes.
pub fn sim_classes(t: &FiniteHyperStructure) -> Result<SimClasses> {
    let rel = less_relation(t)?;
    sim_classes_from(t, &rel)
}

fn sim_classes_from(t: &FiniteHyperStructure, rel: &LessRelation) -> Result<SimClasses> {
    let n = t.n();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<ElemSet> = Vec::new();
    for x in 1..n {
        if class_of[x].is_some() {
            continue;
        }
        let c = ElemSet::from_indices((1..n).filter(|&y| rel.equivalent(x, y)));
        for y in c {
            if class_of[y].is_some() {
                return Err(Error::TheoremViolation(format!(
                    "~_F is not transitive at {}",
                    t.name(y)
                )));
            }
            class_of[y] = Some(classes.len());
        }
        classes.push(c);
    }
    for (i, &c) in classes.iter().enumerate() {
        for x in c {
            if c.iter().any(|y| !rel.equivalent(x, y)) {
                return Err(Error::TheoremViolation(format!(
                    "~_F is not transitive at {}",
                    t.name(x)
                )));
            }
            let nx = t.neg(x).expect("hypergroup");
            if class_of[nx] != Some(i) {
                return Err(Error::TheoremViolation(format!(
                    "-{} is not ~_F {}",
                    t.name(x),
                    t.name(x)
                )));
            }
        }
    }
    // Lift the order: rank each class by how many classes lie below it.
    let k = classes.len();
    let rep: Vec<usize> = classes
        .iter()
        .map(|c| ElemSet::min(*c).expect("nonempty"))
        .collect();
    let mut ranked: Vec<(usize, usize)> = (0..k)
        .map(|i| ((0..k).filter(|&j| rel.less(rep[j], rep[i])).count(), i))
        .collect();
    ranked.sort_unstable();
    for (pos, &(rank, i)) in ranked.iter().enumerate() {
        if rank != pos {
            return Err(Error::TheoremViolation(
                "the classes of ~_F are not totally ordered".into(),
            ));
        }
        for &(_, j) in &ranked[pos + 1..] {
            let all_below = classes[i]
                .iter()
                .all(|x| classes[j].iter().all(|y| rel.less(x, y)));
            if !all_below {
                return Err(Error::TheoremViolation(
                    "<_F does not lift to the classes".into(),
                ));
            }
        }
    }
    let order: Vec<usize> = ranked.iter().map(|&(_, i)| i).collect();
    let mut new_index = vec![0; k];
    for (pos, &i) in order.iter().enumerate() {
        new_index[i] = pos;
    }
    Ok(SimClasses {
        classes: order.iter().map(|&i| classes[i]).collect(),
        class_of: class_of
            .into_iter()
            .map(|c| c.map(|i| new_index[i]))
            .collect(),
    })
}

/// The hypergroup `F_g` on `c ∪ {0}` with `x ⊞_g y = (x ⊞ y) ∩ F_g`, and the
/// indices of its elements in `t`.
pub fn layer_at(
    t: &FiniteHyperStructure,
    class: ElemSet,
) -> Result<(FiniteHyperStructure, Vec<usize>)> {
    let (l, elems) = t.restrict(class.with(0))?;
    if let Some(v) = l.check_hypergroup().violations.first() {
        return Err(Error::TheoremViolation(format!(
            "layer is not a hypergroup: {:?} at {:?}",
            v.axiom, v.witness
        )));
    }
    Ok((l, elems))
}

/// What a layer of a stringent hypergroup is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LayerTag {
    Krasner,
    Sign,
    /// A group with this many elements.
    Group(usize),
}

impl fmt::Display for LayerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerTag::Krasner => write!(f, "Krasner"),
            LayerTag::Sign => write!(f, "Sign"),
            LayerTag::Group(n) => write!(f, "Group({n})"),
        }
    }
}

/// A layer type with its witness: an isomorphism onto the additive
/// hypergroup of `𝕂` or `𝕊` (`iso[x]` indexes the target), or none for a
/// group, whose addition was checked to be single-valued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerIdentification {
    pub tag: LayerTag,
    pub iso: Option<Vec<usize>>,
}

/// Try `𝕂`, then `𝕊`, then single-valuedness.
pub fn identify_layer(l: &FiniteHyperStructure) -> Result<LayerIdentification> {
    let add = l.additive();
    if let Some(iso) = find_isomorphism(&add, &krasner().additive()) {
        return Ok(LayerIdentification {
            tag: LayerTag::Krasner,
            iso: Some(iso),
        });
    }
    if let Some(iso) = find_isomorphism(&add, &sign().additive()) {
        return Ok(LayerIdentification {
            tag: LayerTag::Sign,
            iso: Some(iso),
        });
    }
    if add.is_single_valued() && add.check_hypergroup().passed {
        return Ok(LayerIdentification {
            tag: LayerTag::Group(add.n()),
            iso: None,
        });
    }
    Err(Error::TheoremViolation(format!(
        "a layer with {} elements is neither K, S nor a group",
        l.n()
    )))
}

/// A stringent hypergroup as a wedge of its layers.
#[derive(Debug, Clone)]
pub struct WedgeDecomposition {
    /// The classes of `~_F` in increasing order.
    pub classes: Vec<ElemSet>,
    pub layers: Vec<FiniteHyperStructure>,
    pub tags: Vec<LayerIdentification>,
    /// The reconstructed wedge sum of `layers`.
    pub wedge: FiniteHyperStructure,
    /// `iso[x]` is the image of `x` in `wedge`; verified in both directions.
    pub iso: Vec<usize>,
}

impl WedgeDecomposition {
    pub fn tag_list(&self) -> Vec<LayerTag> {
        self.tags.iter().map(|t| t.tag).collect()
    }
}

/// Decompose a stringent hypergroup into its layers and check that the
/// wedge sum of the layers is isomorphic to it.
pub fn decompose_wedge(t: &FiniteHyperStructure) -> Result<WedgeDecomposition> {
    let sc = sim_classes(t)?;
    let mut layers = Vec::new();
    let mut tags = Vec::new();
    let mut iso = vec![0; t.n()];
    let mut offset = 0;
    for &c in &sc.classes {
        let (l, elems) = layer_at(t, c)?;
        let l = l.additive();
        tags.push(identify_layer(&l)?);
        // Layer index i ≥ 1 lands at offset + i in the wedge.
        for (i, &e) in elems.iter().enumerate().skip(1) {
            iso[e] = offset + i;
        }
        offset += l.n() - 1;
        layers.push(l);
    }
    let wedge = if layers.is_empty() {
        t.additive()
    } else {
        wedge_sum(&layers)?
    };
    let mut inv = vec![0; t.n()];
    for (x, &y) in iso.iter().enumerate() {
        inv[y] = x;
    }
    let (fwd, _) = is_homomorphism(&iso, &t.additive(), &wedge)?;
    let (back, _) = is_homomorphism(&inv, &wedge, &t.additive())?;
    if !(fwd && back) {
        return Err(Error::TheoremViolation(
            "the wedge of the layers is not isomorphic to the input".into(),
        ));
    }
    Ok(WedgeDecomposition {
        classes: sc.classes,
        layers,
        tags,
        wedge,
        iso,
    })
}
