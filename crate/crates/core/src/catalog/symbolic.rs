//! Layered hyperfields `M ⋊ G` over an infinite ordered group, with exact
//! symbolic hyperaddition.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::kernel::{is_homomorphism, ElemSet, FiniteHyperStructure, MAX_CARRIER};
use crate::ordered::{IndexElem, OrderedIndex, Window};

/// How `G` acts on the base hyperfield `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Trivial,
    /// One automorphism of `M` (as an index permutation) per generator of
    /// `ℤ` or `ℤ^k`; `σ_g` is the corresponding product of powers.
    Generators(Vec<Vec<usize>>),
}

/// An element of a [`SymbolicHyperfield`]: zero, or a unit `u` of the base
/// sitting in layer `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymElem {
    Zero,
    Unit { u: usize, g: IndexElem },
}

impl SymElem {
    pub fn unit(u: usize, g: IndexElem) -> SymElem {
        SymElem::Unit { u, g }
    }

    pub fn layer(&self) -> Option<&IndexElem> {
        match self {
            SymElem::Zero => None,
            SymElem::Unit { g, .. } => Some(g),
        }
    }
}

/// A set of elements of a layered hyperfield: a finite part, plus
/// optionally every element in a layer strictly below `below` together
/// with zero.
///
/// Kept in normal form: the finite part is sorted and deduplicated, holds
/// no element already covered by the downset, and holds `Zero` only when
/// there is no downset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetDescription {
    finite: Vec<SymElem>,
    below: Option<IndexElem>,
}

impl SetDescription {
    pub fn singleton(x: SymElem) -> SetDescription {
        SetDescription {
            finite: vec![x],
            below: None,
        }
    }

    /// `{0} ∪ {x | ψ(x) < g}`.
    pub fn downset(g: IndexElem) -> SetDescription {
        SetDescription {
            finite: Vec::new(),
            below: Some(g),
        }
    }

    pub fn new(finite: Vec<SymElem>, below: Option<IndexElem>) -> SetDescription {
        let mut s = SetDescription { finite, below };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.finite.sort();
        self.finite.dedup();
        if let Some(b) = &self.below {
            self.finite.retain(|x| match x.layer() {
                None => false,
                Some(g) => g >= b,
            });
        }
    }

    /// The elements listed explicitly (outside the downset).
    pub fn finite_part(&self) -> &[SymElem] {
        &self.finite
    }

    pub fn downset_below(&self) -> Option<&IndexElem> {
        self.below.as_ref()
    }

    pub fn contains(&self, x: &SymElem) -> bool {
        if self.finite.contains(x) {
            return true;
        }
        match (&self.below, x) {
            (Some(_), SymElem::Zero) => true,
            (Some(b), SymElem::Unit { g, .. }) => g < b,
            _ => false,
        }
    }

    pub fn single(&self) -> Option<&SymElem> {
        match (self.below.is_none(), self.finite.as_slice()) {
            (true, [x]) => Some(x),
            _ => None,
        }
    }

    /// Union of two descriptions.
    pub fn union(&self, other: &SetDescription) -> SetDescription {
        let below = match (&self.below, &other.below) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let mut finite = self.finite.clone();
        finite.extend(other.finite.iter().cloned());
        SetDescription::new(finite, below)
    }
}

/// A layering `M ⋊ G` of a finite hyperfield `M` along the split extension
/// `H = M^× ⋊ G`, where `G` acts on `M` by automorphisms.
///
/// Products are `(u,g)(v,h) = (u·σ_g(v), g+h)`. The layer of `(u,g)` is
/// `g`; inside a layer addition is that of `M` on the first coordinate.
#[derive(Debug, Clone)]
pub struct SymbolicHyperfield {
    name: String,
    base: FiniteHyperStructure,
    group: OrderedIndex,
    action: Action,
    perm_orders: Vec<i64>,
}

impl SymbolicHyperfield {
    /// Validates that `base` carries a multiplication, `group` is a group,
    /// and the action consists of pairwise commuting automorphisms of `base`
    /// (checked with [`is_homomorphism`] in both directions).
    pub fn new(
        name: impl Into<String>,
        base: FiniteHyperStructure,
        group: OrderedIndex,
        action: Action,
    ) -> Result<SymbolicHyperfield> {
        if !base.has_mul() {
            return Err(invalid("layering needs a multiplicative base"));
        }
        if !group.is_group() {
            return Err(Error::Unsupported(format!("{group} is not a group")));
        }
        let mut perm_orders = Vec::new();
        if let Action::Generators(perms) = &action {
            let arity = match group {
                OrderedIndex::Integers => 1,
                OrderedIndex::LexPower(k) => k,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "nontrivial actions of {group} are not supported"
                    )))
                }
            };
            if perms.len() != arity {
                return Err(invalid(format!(
                    "{group} needs {arity} generator automorphisms, got {}",
                    perms.len()
                )));
            }
            for p in perms {
                let inv = invert_perm(p, base.n())?;
                let (fwd, _) = is_homomorphism(p, &base, &base)?;
                let (back, _) = is_homomorphism(&inv, &base, &base)?;
                if !(fwd && back) {
                    return Err(invalid(format!("{p:?} is not an automorphism of the base")));
                }
                perm_orders.push(perm_order(p));
            }
            for a in perms {
                for b in perms {
                    if (0..base.n()).any(|x| a[b[x]] != b[a[x]]) {
                        return Err(invalid("generator automorphisms do not commute"));
                    }
                }
            }
        }
        Ok(SymbolicHyperfield {
            name: name.into(),
            base,
            group,
            action,
            perm_orders,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &FiniteHyperStructure {
        &self.base
    }

    pub fn group(&self) -> &OrderedIndex {
        &self.group
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn one(&self) -> SymElem {
        SymElem::unit(
            self.base.one().expect("validated"),
            self.group.identity().expect("validated"),
        )
    }

    fn contains(&self, x: &SymElem) -> bool {
        match x {
            SymElem::Zero => true,
            SymElem::Unit { u, g } => *u != 0 && *u < self.base.n() && self.group.contains(g),
        }
    }

    fn check(&self, x: &SymElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(invalid(format!("{x:?} is not an element of {}", self.name)))
        }
    }

    /// `σ_g(v)`.
    pub fn act(&self, g: &IndexElem, v: usize) -> usize {
        let Action::Generators(perms) = &self.action else {
            return v;
        };
        let exps: Vec<i64> = match g {
            IndexElem::Int(a) => vec![*a],
            IndexElem::Lex(a) => a.clone(),
            _ => return v,
        };
        let mut x = v;
        for ((p, &e), &ord) in perms.iter().zip(&exps).zip(&self.perm_orders) {
            for _ in 0..e.rem_euclid(ord) {
                x = p[x];
            }
        }
        x
    }

    /// Hyperaddition: the higher layer absorbs; within a layer use the base
    /// addition, adding the whole downset when the layer sum contains zero.
    pub fn sym_add(&self, x: &SymElem, y: &SymElem) -> Result<SetDescription> {
        self.check(x)?;
        self.check(y)?;
        let (SymElem::Unit { u, g }, SymElem::Unit { u: v, g: h }) = (x, y) else {
            let other = if *x == SymElem::Zero { y } else { x };
            return Ok(SetDescription::singleton(other.clone()));
        };
        Ok(match self.group.cmp(g, h)? {
            Ordering::Greater => SetDescription::singleton(x.clone()),
            Ordering::Less => SetDescription::singleton(y.clone()),
            Ordering::Equal => {
                let s = self.base.add(*u, *v);
                let finite = s
                    .without(0)
                    .iter()
                    .map(|w| SymElem::unit(w, g.clone()))
                    .collect();
                let below = s.contains(0).then(|| g.clone());
                SetDescription::new(finite, below)
            }
        })
    }

    pub fn sym_mul(&self, x: &SymElem, y: &SymElem) -> Result<SymElem> {
        self.check(x)?;
        self.check(y)?;
        let (SymElem::Unit { u, g }, SymElem::Unit { u: v, g: h }) = (x, y) else {
            return Ok(SymElem::Zero);
        };
        let w = self.base.mul(*u, self.act(g, *v));
        Ok(SymElem::unit(w, self.group.group_op(g, h)?))
    }

    pub fn sym_neg(&self, x: &SymElem) -> Result<SymElem> {
        self.check(x)?;
        Ok(match x {
            SymElem::Zero => SymElem::Zero,
            SymElem::Unit { u, g } => SymElem::unit(
                self.base
                    .neg(*u)
                    .ok_or_else(|| invalid("base has no negation"))?,
                g.clone(),
            ),
        })
    }

    pub fn sym_inv(&self, x: &SymElem) -> Result<SymElem> {
        self.check(x)?;
        let SymElem::Unit { u, g } = x else {
            return Err(Error::DivisionByZero);
        };
        let one = self.base.one().expect("validated");
        let ui = (1..self.base.n())
            .find(|&w| self.base.mul(*u, w) == one)
            .ok_or_else(|| invalid("base element has no inverse"))?;
        let minus_g = self.group.group_inv(g)?;
        Ok(SymElem::unit(self.act(&minus_g, ui), minus_g))
    }

    /// `A ⊞ B` on set descriptions.
    pub fn set_add(&self, a: &SetDescription, b: &SetDescription) -> Result<SetDescription> {
        let mut finite = Vec::new();
        let mut below: Option<IndexElem> = None;
        let mut acc = SetDescription::new(Vec::new(), None);
        for x in &a.finite {
            for y in &b.finite {
                acc = acc.union(&self.sym_add(x, y)?);
            }
        }
        // x ⊞ D(g) is {x} when x lies at or above layer g, else D(g).
        for (side, other) in [(a, b), (b, a)] {
            if let Some(g) = &other.below {
                for x in &side.finite {
                    match x.layer() {
                        Some(h) if h >= g => finite.push(x.clone()),
                        _ => raise(&mut below, g.clone()),
                    }
                }
            }
        }
        if let Some(g) = &a.below {
            if b.below.is_some() {
                raise(&mut below, g.clone());
            }
        }
        if let Some(g) = &b.below {
            if a.below.is_some() {
                raise(&mut below, g.clone());
            }
        }
        Ok(acc.union(&SetDescription::new(finite, below)))
    }

    /// `AB = {ab | a ∈ A, b ∈ B}` on set descriptions.
    pub fn set_mul(&self, a: &SetDescription, b: &SetDescription) -> Result<SetDescription> {
        let mut finite = Vec::new();
        let mut below: Option<IndexElem> = None;
        for x in &a.finite {
            for y in &b.finite {
                finite.push(self.sym_mul(x, y)?);
            }
        }
        // u·D(h) = D(ψ(u) + h) and D(g)·D(h) = D(g + h + m) where m is the
        // largest element below the identity, or D(g + h) without one.
        for (side, other) in [(a, b), (b, a)] {
            if let Some(h) = &other.below {
                for x in &side.finite {
                    match x.layer() {
                        Some(k) => raise(&mut below, self.group.group_op(k, h)?),
                        None => finite.push(SymElem::Zero),
                    }
                }
            }
        }
        if let (Some(g), Some(h)) = (&a.below, &b.below) {
            let mut t = self.group.group_op(g, h)?;
            if let Some(m) = self.group.max_below_identity() {
                t = self.group.group_op(&t, &m)?;
            }
            raise(&mut below, t);
        }
        Ok(SetDescription::new(finite, below))
    }

    /// Left-associated sum of elements starting from `{0}`.
    pub fn sum_all(&self, xs: &[SymElem]) -> Result<SetDescription> {
        let mut acc = SetDescription::singleton(SymElem::Zero);
        for x in xs {
            acc = self.set_add(&acc, &SetDescription::singleton(x.clone()))?;
        }
        Ok(acc)
    }

    /// All elements whose layer lies in the window, plus zero, in the order
    /// used by [`SymbolicHyperfield::window_table`].
    pub fn window_elements(&self, window: &Window) -> Vec<SymElem> {
        let mut out = vec![SymElem::Zero];
        for g in self.group.window_elements(window) {
            for u in 1..self.base.n() {
                out.push(SymElem::unit(u, g.clone()));
            }
        }
        out
    }

    /// Intersect a description with the window sample. The flag reports
    /// whether part of a downset was cut off.
    pub fn truncate(&self, s: &SetDescription, elems: &[SymElem]) -> (ElemSet, bool) {
        let mut set = ElemSet::EMPTY;
        for (i, e) in elems.iter().enumerate() {
            if s.contains(e) {
                set.insert(i);
            }
        }
        // Every nontrivial ordered group has elements below any window.
        let cut = s.below.is_some() && self.group != OrderedIndex::LexPower(0);
        (set, cut)
    }

    /// The finite hypergroup induced on a window: elements with layers in the
    /// window plus zero, with each sum intersected with the window. This is
    /// the wedge sum of the window's layers. A multiplication table is
    /// attached only when the window is closed under products (the trivial
    /// group).
    pub fn window_table(&self, window: &Window) -> Result<WindowTable> {
        let elems = self.window_elements(window);
        let n = elems.len();
        if n > MAX_CARRIER {
            return Err(Error::Capacity {
                what: format!("window {window} of {}", self.name),
                needed: n,
                limit: MAX_CARRIER,
            });
        }
        let mut add = Vec::with_capacity(n * n);
        let mut truncated = false;
        for x in &elems {
            for y in &elems {
                let (s, cut) = self.truncate(&self.sym_add(x, y)?, &elems);
                truncated |= cut;
                add.push(s);
            }
        }
        let names = elems.iter().map(|e| self.display(e)).collect();
        let mut table = FiniteHyperStructure::new(names, add)?;
        if self.group == OrderedIndex::LexPower(0) {
            let mut mul = Vec::with_capacity(n * n);
            for x in &elems {
                for y in &elems {
                    let p = self.sym_mul(x, y)?;
                    mul.push(elems.iter().position(|e| *e == p).expect("closed"));
                }
            }
            let one = elems
                .iter()
                .position(|e| *e == self.one())
                .expect("present");
            table = table.with_multiplication(mul, one)?;
        }
        Ok(WindowTable {
            table,
            elems,
            truncated,
            window: *window,
        })
    }

    /// Elements of layering over a two-element base print as their layer,
    /// with zero as `-inf`; otherwise as `(u,g)` and `0`.
    pub fn display(&self, x: &SymElem) -> String {
        let compact = self.base.n() == 2;
        match x {
            SymElem::Zero if compact => "-inf".into(),
            SymElem::Zero => "0".into(),
            SymElem::Unit { g, .. } if compact => g.to_string(),
            SymElem::Unit { u, g } => format!("({},{})", self.base.name(*u), g),
        }
    }

    pub fn display_set(&self, s: &SetDescription) -> String {
        let mut parts: Vec<String> = s.finite.iter().map(|x| self.display(x)).collect();
        if let Some(b) = &s.below {
            parts.push(format!("{{z | z < {b}}}"));
            parts.push(self.display(&SymElem::Zero));
        }
        format!("{{{}}}", parts.join(", "))
    }

    /// Inverse of [`SymbolicHyperfield::display`].
    pub fn parse_elem(&self, s: &str) -> Result<SymElem> {
        let s = s.trim();
        let compact = self.base.n() == 2;
        if (compact && s == "-inf") || (!compact && s == "0") {
            return Ok(SymElem::Zero);
        }
        let x = if compact {
            SymElem::unit(1, self.group.parse_elem(s)?)
        } else {
            let inner = s
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| invalid(format!("expected (u,g), got {s:?}")))?;
            let (u, g) = inner
                .split_once(',')
                .ok_or_else(|| invalid(format!("expected (u,g), got {s:?}")))?;
            let u = self
                .base
                .index_of(u.trim())
                .ok_or_else(|| invalid(format!("unknown base element {u:?}")))?;
            SymElem::unit(u, self.group.parse_elem(g)?)
        };
        self.check(&x)?;
        Ok(x)
    }
}

/// A window sample of a [`SymbolicHyperfield`].
#[derive(Debug, Clone)]
pub struct WindowTable {
    pub table: FiniteHyperStructure,
    /// `elems[i]` is the symbolic element at table index `i`.
    pub elems: Vec<SymElem>,
    /// Whether some sum lost elements lying below the window.
    pub truncated: bool,
    pub window: Window,
}

impl WindowTable {
    pub fn index_of(&self, x: &SymElem) -> Option<usize> {
        self.elems.iter().position(|e| e == x)
    }
}

impl fmt::Display for SymbolicHyperfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn raise(below: &mut Option<IndexElem>, g: IndexElem) {
    if below.as_ref().is_none_or(|b| g > *b) {
        *below = Some(g);
    }
}

fn invert_perm(p: &[usize], n: usize) -> Result<Vec<usize>> {
    if p.len() != n {
        return Err(invalid("automorphism has the wrong length"));
    }
    let mut inv = vec![usize::MAX; n];
    for (i, &j) in p.iter().enumerate() {
        if j >= n || inv[j] != usize::MAX {
            return Err(invalid("automorphism is not a permutation"));
        }
        inv[j] = i;
    }
    Ok(inv)
}

fn perm_order(p: &[usize]) -> i64 {
    let mut x: Vec<usize> = p.to_vec();
    let mut k = 1;
    while x.iter().enumerate().any(|(i, &v)| i != v) {
        x = x.iter().map(|&v| p[v]).collect();
        k += 1;
    }
    k
}
