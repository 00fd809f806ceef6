use std::fmt;

use serde::Serialize;

use super::{layer_at, sim_classes};
use crate::catalog::{krasner, sign, SymElem, SymbolicHyperfield, WindowTable};
use crate::error::{Error, Result};
use crate::isoenum::find_isomorphism;
use crate::kernel::{ElemSet, FiniteHyperStructure};
use crate::ordered::{IndexElem, OrderedIndex, Window};

/// The type of the unit layer `R_{1_G}` of a stringent hyperfield.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseTag {
    Krasner,
    Sign,
    Field,
}

impl fmt::Display for BaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseTag::Krasner => write!(f, "Krasner"),
            BaseTag::Sign => write!(f, "Sign"),
            BaseTag::Field => write!(f, "Field"),
        }
    }
}

/// Tag a multiplicative base: isomorphic to `𝕂`, to `𝕊`, or a field.
fn tag_base(base: &FiniteHyperStructure) -> Result<(BaseTag, Option<Vec<usize>>)> {
    if let Some(iso) = find_isomorphism(base, &krasner()) {
        return Ok((BaseTag::Krasner, Some(iso)));
    }
    if let Some(iso) = find_isomorphism(base, &sign()) {
        return Ok((BaseTag::Sign, Some(iso)));
    }
    if base.is_single_valued() && base.check_hyperfield()?.passed {
        return Ok((BaseTag::Field, None));
    }
    Err(Error::TheoremViolation(format!(
        "the unit layer ({} elements) is neither K, S nor a field",
        base.n()
    )))
}

/// The value group `G` found by the extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueGroup {
    /// The classes of a finite structure with their lifted product;
    /// `table[i * order + j]` is the class of a product.
    Finite {
        order: usize,
        table: Vec<usize>,
        identity: usize,
    },
    /// Classes of a window of a layered hyperfield, identified with the
    /// layers they occupy (in increasing order).
    Ordered {
        group: OrderedIndex,
        window: Window,
        layers: Vec<IndexElem>,
    },
}

impl ValueGroup {
    pub fn is_trivial(&self) -> bool {
        matches!(self, ValueGroup::Finite { order: 1, .. })
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueGroup::Finite { order: 1, .. } => write!(f, "trivial"),
            ValueGroup::Finite { order, .. } => write!(f, "finite of order {order}"),
            ValueGroup::Ordered { group, .. } => write!(f, "{group}"),
        }
    }
}

/// A stringent hyperfield presented as `R_{1_G} ⋊ G`.
#[derive(Debug, Clone)]
pub struct LayeringExtraction {
    /// The unit layer with its multiplication.
    pub base: FiniteHyperStructure,
    pub base_tag: BaseTag,
    /// Isomorphism onto `𝕂` or `𝕊` when the tag says so.
    pub base_iso: Option<Vec<usize>>,
    pub group: ValueGroup,
    /// `ψ`: the class of each element of the (windowed) carrier, `None` for
    /// zero.
    pub projection: Vec<Option<usize>>,
}

impl LayeringExtraction {
    /// `K`, `S` or `GF(q)`.
    pub fn base_name(&self) -> String {
        match self.base_tag {
            BaseTag::Krasner => "K".into(),
            BaseTag::Sign => "S".into(),
            BaseTag::Field => format!("GF({})", self.base.n()),
        }
    }
}

/// Symbolic extractions also keep the window table they were computed on.
pub type SymbolicLayering = (LayeringExtraction, WindowTable);

fn require_stringent_hyperfield(t: &FiniteHyperStructure) -> Result<()> {
    if !t.has_mul() {
        return Err(Error::Precondition("not multiplicative".into()));
    }
    if let Some(v) = t.check_hyperfield()?.violations.first() {
        return Err(Error::Precondition(format!(
            "not a hyperfield: {:?} at {:?}",
            v.axiom, v.witness
        )));
    }
    if !t.is_stringent().0 {
        return Err(Error::Precondition("not stringent".into()));
    }
    Ok(())
}

/// Extract `R_{1_G}` and `G` from a finite stringent hyperfield. The class
/// product is checked to be well defined, a group, and compatible with the
/// order of the classes; since a nontrivial ordered group is infinite, `G`
/// comes out trivial and the base is the whole hyperfield.
pub fn extract_layering(t: &FiniteHyperStructure) -> Result<LayeringExtraction> {
    require_stringent_hyperfield(t)?;
    let sc = sim_classes(t)?;
    let one = t.one().expect("hyperfield");
    let k = sc.classes.len();
    let cls = |x: usize| sc.class_of[x].expect("nonzero");
    let mut table = vec![usize::MAX; k * k];
    for x in 1..t.n() {
        for y in 1..t.n() {
            let cell = &mut table[cls(x) * k + cls(y)];
            let c = cls(t.mul(x, y));
            if *cell != usize::MAX && *cell != c {
                return Err(Error::TheoremViolation(
                    "the class product is not well defined".into(),
                ));
            }
            *cell = c;
        }
    }
    let identity = cls(one);
    for i in 0..k {
        if table[identity * k + i] != i || !(0..k).any(|j| table[i * k + j] == identity) {
            return Err(Error::TheoremViolation(
                "the classes do not form a group".into(),
            ));
        }
        for j in 0..k {
            for l in 0..k {
                // Classes are indexed in increasing order.
                if j < l
                    && !(table[i * k + j] < table[i * k + l] && table[j * k + i] < table[l * k + i])
                {
                    return Err(Error::TheoremViolation(
                        "the class product is not order preserving".into(),
                    ));
                }
            }
        }
    }
    let (base, _) = layer_at(t, sc.classes[identity])?;
    if !base.has_mul() {
        return Err(Error::TheoremViolation(
            "the unit layer is not closed under multiplication".into(),
        ));
    }
    let (base_tag, base_iso) = tag_base(&base)?;
    Ok(LayeringExtraction {
        base,
        base_tag,
        base_iso,
        group: ValueGroup::Finite {
            order: k,
            table,
            identity,
        },
        projection: sc.class_of,
    })
}

/// Recover `(M, G)` from a layered hyperfield on a window: the classes of
/// the window table must be exactly its layers in increasing order, every
/// layer must be isomorphic to the unit layer as a hypergroup, the unit
/// layer (with the symbolic multiplication) must be `𝕂`, `𝕊` or a field
/// isomorphic to the declared base, and the class product must be the
/// group operation wherever it stays in the window.
pub fn extract_symbolic_layering(
    f: &SymbolicHyperfield,
    window: &Window,
) -> Result<SymbolicLayering> {
    let wt = f.window_table(window)?;
    let t = &wt.table;
    let sc = sim_classes(t)?;
    let group = f.group();
    let mut layers: Vec<IndexElem> = Vec::new();
    for c in &sc.classes {
        let ls: Vec<&IndexElem> = c.iter().filter_map(|x| wt.elems[x].layer()).collect();
        let g = ls[0].clone();
        if ls.iter().any(|h| **h != g) {
            return Err(Error::TheoremViolation(format!(
                "a class of ~_F meets several layers at {g}"
            )));
        }
        if layers.last().is_some_and(|prev| *prev >= g) {
            return Err(Error::TheoremViolation(
                "classes are not ordered like their layers".into(),
            ));
        }
        layers.push(g);
    }
    let one = wt
        .index_of(&f.one())
        .ok_or_else(|| Error::InvalidArgument("the window must contain 1_G".into()))?;
    let identity = sc.class_of[one].expect("nonzero");
    let (unit_layer, elems) = layer_at(t, sc.classes[identity])?;
    let m = elems.len();
    let mut mul = vec![0; m * m];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            let p = f.sym_mul(&wt.elems[a], &wt.elems[b])?;
            let k = wt.index_of(&p).expect("unit layer is closed");
            mul[i * m + j] = elems.iter().position(|&e| e == k).ok_or_else(|| {
                Error::TheoremViolation("the unit layer is not closed under multiplication".into())
            })?;
        }
    }
    let base =
        unit_layer.with_multiplication(mul, elems.iter().position(|&e| e == one).expect("one"))?;
    let (base_tag, base_iso) = tag_base(&base)?;
    if find_isomorphism(&base, f.base()).is_none() {
        return Err(Error::TheoremViolation(
            "the unit layer differs from the declared base".into(),
        ));
    }
    let base_add = base.additive();
    for &c in &sc.classes {
        let (l, _) = layer_at(t, c)?;
        if find_isomorphism(&l.additive(), &base_add).is_none() {
            return Err(Error::TheoremViolation(
                "a layer is not isomorphic to the unit layer".into(),
            ));
        }
    }
    for x in 1..t.n() {
        for y in 1..t.n() {
            let p = f.sym_mul(&wt.elems[x], &wt.elems[y])?;
            if let Some(k) = wt.index_of(&p) {
                let (cx, cy) = (
                    sc.class_of[x].expect("nonzero"),
                    sc.class_of[y].expect("nonzero"),
                );
                let want = group.group_op(&layers[cx], &layers[cy])?;
                if layers[sc.class_of[k].expect("nonzero")] != want {
                    return Err(Error::TheoremViolation(
                        "the class product is not the group operation".into(),
                    ));
                }
            }
        }
    }
    if layers[identity] != group.identity()? {
        return Err(Error::TheoremViolation(
            "the unit class is not the identity layer".into(),
        ));
    }
    let extraction = LayeringExtraction {
        base,
        base_tag,
        base_iso,
        group: ValueGroup::Ordered {
            group: group.clone(),
            window: *window,
            layers,
        },
        projection: sc.class_of,
    };
    Ok((extraction, wt))
}

/// Double distributivity of a finite stringent hyperfield, decided by
/// `(1 ⊞ -1)(1 ⊞ -1) = 1 ⊞ -1 ⊞ 1 ⊞ -1`.
pub fn dd_criterion_stringent(t: &FiniteHyperStructure) -> Result<bool> {
    require_stringent_hyperfield(t)?;
    let one = t.one().expect("hyperfield");
    let s = t.add(one, t.neg(one).expect("hypergroup"));
    Ok(t.mul_sets(s, s) == t.sum_sets(s, s))
}

/// Double distributivity of a layered hyperfield: always for base `𝕂` or
/// `𝕊`; for a field base exactly when the elements below `1_G` are closed
/// under products in the sense `{ab | a, b < 1_G} = {c | c < 1_G}`, i.e.
/// when `G` is dense. The answer is cross-checked against the symbolic
/// evaluation of `(1 ⊞ -1)² = (1 ⊞ -1) ⊞ (1 ⊞ -1)`.
pub fn dd_criterion_symbolic(f: &SymbolicHyperfield) -> Result<bool> {
    let (tag, _) = tag_base(f.base())?;
    let by_type = match tag {
        BaseTag::Krasner | BaseTag::Sign => true,
        BaseTag::Field => f.group().is_dense_below_identity()?,
    };
    let one = f.one();
    let s = f.sym_add(&one, &f.sym_neg(&one)?)?;
    let direct = f.set_mul(&s, &s)? == f.set_add(&s, &s)?;
    if direct != by_type {
        return Err(Error::TheoremViolation(format!(
            "{}: type criterion says {by_type}, direct evaluation says {direct}",
            f.name()
        )));
    }
    Ok(by_type)
}

/// A valuation `ν` into `G ∪ {-∞}` with the outcome of checking its axioms.
#[derive(Debug, Clone, Serialize)]
pub struct Valuation {
    /// `(element, ν(element))`, with `-inf` for zero.
    pub values: Vec<(String, String)>,
    pub kernel_tag: BaseTag,
    /// `K`, `S` or `GF(q)`: the type of `ν⁻¹(1_G) ∪ {0}`.
    pub kernel_name: String,
    pub window: Option<Window>,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl Valuation {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `ν = ψ` on a finite stringent hyperfield, checked on all pairs:
/// `ν(x) = -∞` iff `x = 0`, `ν(xy) = ν(x)ν(y)`, and `ν(x) > ν(y)` implies
/// `x ⊞ y = {x}`.
pub fn valuation_of(t: &FiniteHyperStructure) -> Result<Valuation> {
    let ex = extract_layering(t)?;
    let ValueGroup::Finite { order, table, .. } = &ex.group else {
        unreachable!("finite extraction");
    };
    let nu = &ex.projection;
    let mut failures = Vec::new();
    let n = t.n();
    for x in 0..n {
        if nu[x].is_none() != (x == 0) {
            failures.push(format!("ν({}) = -inf but it is nonzero", t.name(x)));
        }
        for y in 0..n {
            let want = match (nu[x], nu[y]) {
                (Some(a), Some(b)) => Some(table[a * order + b]),
                _ => None,
            };
            if nu[t.mul(x, y)] != want {
                failures.push(format!(
                    "ν({}·{}) is not multiplicative",
                    t.name(x),
                    t.name(y)
                ));
            }
            if nu[x] > nu[y] && t.add(x, y) != ElemSet::singleton(x) {
                failures.push(format!(
                    "ν({}) > ν({}) but the sum is not {{{}}}",
                    t.name(x),
                    t.name(y),
                    t.name(x)
                ));
            }
        }
    }
    let values = (0..n)
        .map(|x| {
            let v = nu[x].map_or("-inf".to_string(), |c| format!("g{c}"));
            (t.name(x).to_string(), v)
        })
        .collect();
    Ok(Valuation {
        values,
        kernel_tag: ex.base_tag,
        kernel_name: ex.base_name(),
        window: None,
        pairs_checked: n * n,
        failures,
    })
}

/// `ν((u, g)) = g` and `ν(0) = -∞` on a layered hyperfield, checked on all
/// pairs from a window with exact symbolic sums and products; `ν` is also
/// compared with the extracted `ψ`.
pub fn valuation_of_symbolic(f: &SymbolicHyperfield, window: &Window) -> Result<Valuation> {
    let (ex, wt) = extract_symbolic_layering(f, window)?;
    let ValueGroup::Ordered { layers, .. } = &ex.group else {
        unreachable!("symbolic extraction");
    };
    let group = f.group();
    let nu = |x: &SymElem| x.layer().cloned();
    let mut failures = Vec::new();
    for (i, x) in wt.elems.iter().enumerate() {
        if ex.projection[i].map(|c| layers[c].clone()) != nu(x) {
            failures.push(format!("ν({}) differs from the extracted ψ", f.display(x)));
        }
        if nu(x).is_none() != (*x == SymElem::Zero) {
            failures.push(format!("ν({}) = -inf but it is nonzero", f.display(x)));
        }
        for y in &wt.elems {
            let want = match (nu(x), nu(y)) {
                (Some(a), Some(b)) => Some(group.group_op(&a, &b)?),
                _ => None,
            };
            if nu(&f.sym_mul(x, y)?) != want {
                failures.push(format!(
                    "ν({}·{}) is not multiplicative",
                    f.display(x),
                    f.display(y)
                ));
            }
            if nu(x) > nu(y)
                && f.sym_add(x, y)? != crate::catalog::SetDescription::singleton(x.clone())
            {
                failures.push(format!(
                    "ν({}) > ν({}) but the sum is not a singleton",
                    f.display(x),
                    f.display(y)
                ));
            }
        }
    }
    let values = wt
        .elems
        .iter()
        .map(|x| {
            (
                f.display(x),
                nu(x).map_or("-inf".to_string(), |g| g.to_string()),
            )
        })
        .collect();
    let n = wt.elems.len();
    Ok(Valuation {
        values,
        kernel_tag: ex.base_tag,
        kernel_name: ex.base_name(),
        window: Some(*window),
        pairs_checked: n * n,
        failures,
    })
}

/// For a layered hyperfield with base `𝕊`: every nonzero `a ∉ {1, -1}` in
/// the window has `a² ∉ {1, -1}`. Returns the counterexamples.
pub fn sign_square_check(f: &SymbolicHyperfield, window: &Window) -> Result<Vec<String>> {
    let (tag, _) = tag_base(f.base())?;
    if tag != BaseTag::Sign {
        return Err(Error::Precondition(format!(
            "{} does not have base S",
            f.name()
        )));
    }
    let one = f.one();
    let minus_one = f.sym_neg(&one)?;
    let mut bad = Vec::new();
    for a in f.window_elements(window) {
        if a == SymElem::Zero || a == one || a == minus_one {
            continue;
        }
        let sq = f.sym_mul(&a, &a)?;
        if sq == one || sq == minus_one {
            bad.push(f.display(&a));
        }
    }
    Ok(bad)
}
