//! Lazy formal power series over `ℤ` and `ℚ` with coefficients in a field,
//! optionally twisted by an action of the exponent group, and the quotient
//! maps from series fields onto layered hyperfields.

mod coeffs;
mod quotient;

pub use coeffs::{Coefficients, RationalCoeffs, TableCoeffs};
pub use quotient::{
    quotient_class, quotient_class_within, quotient_sample_check, QuotientMode, SampleReport,
    SeriesClass,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::ordered::{IndexElem, OrderedIndex};

/// How far [`LazySeries::leading`] scans for a nonzero coefficient before
/// giving up.
pub const LEAD_SCAN: u64 = 4096;

/// The order in which supports are well-ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Supports have a least element under `≤` and extend upwards, as in
    /// Laurent series.
    Ascending,
    /// Supports have a greatest element under `≤` and extend downwards, so
    /// the leading term sits in the highest layer.
    Descending,
}

impl Orientation {
    /// Whether `a` comes strictly before `b` in the working order.
    fn before(self, a: &IndexElem, b: &IndexElem) -> bool {
        match self {
            Orientation::Ascending => a < b,
            Orientation::Descending => a > b,
        }
    }
}

/// `base, base ± step, base ± 2·step, …`: a superset of the support,
/// enumerated in the working order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub base: IndexElem,
    pub step: IndexElem,
}

fn unit_step(group: &OrderedIndex) -> Result<IndexElem> {
    match group {
        OrderedIndex::Integers => Ok(IndexElem::Int(1)),
        OrderedIndex::Rationals => Ok(IndexElem::rat(1, 1)),
        _ => Err(Error::Unsupported(format!("series over {group}"))),
    }
}

/// The exponent group and orientation shared by compatible series.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Shape {
    group: OrderedIndex,
    orientation: Orientation,
}

impl Shape {
    fn position(&self, f: &Frontier, k: u64) -> Result<IndexElem> {
        let k = i64::try_from(k).map_err(|_| Error::Overflow("series position"))?;
        let off = self.group.times(&f.step, k)?;
        match self.orientation {
            Orientation::Ascending => self.group.group_op(&f.base, &off),
            Orientation::Descending => self.group.group_sub(&f.base, &off),
        }
    }

    /// Index of `g` in `f`, if `g` is one of its positions.
    fn index_of(&self, f: &Frontier, g: &IndexElem) -> Option<u64> {
        match self.orientation {
            Orientation::Ascending => self.group.steps_between(&f.base, &f.step, g),
            Orientation::Descending => self.group.steps_between(g, &f.step, &f.base),
        }
    }

    /// `(offset, ratio)` with `inner`'s position `j` at `outer`'s position
    /// `offset + ratio·j`.
    fn embed(&self, outer: &Frontier, inner: &Frontier) -> Result<(u64, u64)> {
        let zero = self.group.identity()?;
        let offset = self.index_of(outer, &inner.base);
        let ratio = self.group.steps_between(&zero, &outer.step, &inner.step);
        match (offset, ratio) {
            (Some(o), Some(r)) if r > 0 => Ok((o, r)),
            _ => Err(invalid("frontier does not embed")),
        }
    }

    fn abs(&self, g: IndexElem) -> Result<IndexElem> {
        if g < self.group.identity()? {
            self.group.group_inv(&g)
        } else {
            Ok(g)
        }
    }

    /// A frontier containing both.
    fn join(&self, a: &Frontier, b: &Frontier) -> Result<Frontier> {
        let base = if self.orientation.before(&b.base, &a.base) {
            b.base.clone()
        } else {
            a.base.clone()
        };
        let gap = self.abs(self.group.group_sub(&a.base, &b.base)?)?;
        let step = self.group.step_gcd(&a.step, &b.step)?;
        let step = self.group.step_gcd(&step, &gap)?;
        Ok(Frontier { base, step })
    }
}

enum Rule<R: Coefficients> {
    Zero,
    /// Finitely many nonzero coefficients, by frontier index.
    Terms(BTreeMap<u64, R::Elem>),
    Generator(Arc<dyn Fn(u64) -> R::Elem + Send + Sync>),
    Add {
        a: LazySeries<R>,
        b: LazySeries<R>,
        ea: (u64, u64),
        eb: (u64, u64),
    },
    Neg(LazySeries<R>),
    Mul {
        a: LazySeries<R>,
        b: LazySeries<R>,
        ra: u64,
        rb: u64,
    },
    /// The coefficients of `src` from index `skip` on.
    Skip {
        src: LazySeries<R>,
        skip: u64,
    },
    /// Inverse of a series with coefficient 1 at index 0 and exponent `1_G`
    /// there.
    UnitInverse(LazySeries<R>),
}

struct Node<R: Coefficients> {
    ring: Arc<R>,
    shape: Shape,
    frontier: Frontier,
    rule: Rule<R>,
    memo: Mutex<HashMap<u64, R::Elem>>,
}

/// A formal series `Σ p(g) x^g` whose coefficients are computed on demand
/// and cached. Cloning shares the cache.
pub struct LazySeries<R: Coefficients> {
    node: Arc<Node<R>>,
}

impl<R: Coefficients> Clone for LazySeries<R> {
    fn clone(&self) -> Self {
        LazySeries {
            node: Arc::clone(&self.node),
        }
    }
}

impl<R: Coefficients> fmt::Debug for LazySeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LazySeries({})", self.display(6))
    }
}

impl<R: Coefficients> LazySeries<R> {
    fn build(ring: Arc<R>, shape: Shape, frontier: Frontier, rule: Rule<R>) -> Self {
        LazySeries {
            node: Arc::new(Node {
                ring,
                shape,
                frontier,
                rule,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    fn derived(&self, frontier: Frontier, rule: Rule<R>) -> Self {
        Self::build(
            Arc::clone(&self.node.ring),
            self.node.shape.clone(),
            frontier,
            rule,
        )
    }

    pub fn zero(ring: Arc<R>, group: OrderedIndex, orientation: Orientation) -> Result<Self> {
        let frontier = Frontier {
            base: group.identity()?,
            step: unit_step(&group)?,
        };
        Ok(Self::build(
            ring,
            Shape { group, orientation },
            frontier,
            Rule::Zero,
        ))
    }

    /// `c·x^g`.
    pub fn monomial(
        ring: Arc<R>,
        group: OrderedIndex,
        orientation: Orientation,
        c: R::Elem,
        g: IndexElem,
    ) -> Result<Self> {
        let step = unit_step(&group)?;
        Self::monomial_with_step(ring, Shape { group, orientation }, c, g, step)
    }

    fn monomial_with_step(
        ring: Arc<R>,
        shape: Shape,
        c: R::Elem,
        g: IndexElem,
        step: IndexElem,
    ) -> Result<Self> {
        if !shape.group.contains(&g) {
            return Err(invalid(format!("{g} is not in {}", shape.group)));
        }
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(0, c);
        }
        Ok(Self::build(
            ring,
            shape,
            Frontier { base: g, step },
            Rule::Terms(terms),
        ))
    }

    pub fn one(ring: Arc<R>, group: OrderedIndex, orientation: Orientation) -> Result<Self> {
        let c = ring.one();
        let g = group.identity()?;
        Self::monomial(ring, group, orientation, c, g)
    }

    /// A finite sum of terms `c·x^g`; repeated exponents are added.
    pub fn from_terms(
        ring: Arc<R>,
        group: OrderedIndex,
        orientation: Orientation,
        terms: Vec<(IndexElem, R::Elem)>,
    ) -> Result<Self> {
        let shape = Shape { group, orientation };
        let mut out = Self::zero(Arc::clone(&ring), shape.group.clone(), orientation)?;
        for (g, c) in terms {
            let m = Self::monomial(Arc::clone(&ring), shape.group.clone(), orientation, c, g)?;
            out = out.add(&m)?;
        }
        Ok(out)
    }

    /// A series with coefficient `f(k)` at frontier index `k`.
    pub fn from_fn(
        ring: Arc<R>,
        group: OrderedIndex,
        orientation: Orientation,
        frontier: Frontier,
        f: impl Fn(u64) -> R::Elem + Send + Sync + 'static,
    ) -> Result<Self> {
        if !group.contains(&frontier.base)
            || !group.contains(&frontier.step)
            || frontier.step <= group.identity()?
        {
            return Err(invalid(
                "frontier step must be a positive element of the group",
            ));
        }
        Ok(Self::build(
            ring,
            Shape { group, orientation },
            frontier,
            Rule::Generator(Arc::new(f)),
        ))
    }

    /// A series with leading term `lead·x^base` followed by seeded random
    /// coefficients (zero allowed) at `base ± k·step`.
    pub fn random(
        ring: Arc<R>,
        group: OrderedIndex,
        orientation: Orientation,
        frontier: Frontier,
        lead: R::Elem,
        seed: u64,
    ) -> Result<Self> {
        let r = Arc::clone(&ring);
        Self::from_fn(ring, group, orientation, frontier, move |k| {
            if k == 0 {
                return lead.clone();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            r.random(&mut rng)
        })
    }

    pub fn ring(&self) -> &Arc<R> {
        &self.node.ring
    }

    pub fn group(&self) -> &OrderedIndex {
        &self.node.shape.group
    }

    pub fn orientation(&self) -> Orientation {
        self.node.shape.orientation
    }

    pub fn frontier(&self) -> &Frontier {
        &self.node.frontier
    }

    /// The exponent at frontier index `k`.
    pub fn position(&self, k: u64) -> Result<IndexElem> {
        self.node.shape.position(&self.node.frontier, k)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.node.shape != other.node.shape {
            return Err(invalid("series over different groups or orientations"));
        }
        Ok(())
    }

    /// The coefficient at frontier index `k`.
    pub fn coeff(&self, k: u64) -> R::Elem {
        if let Some(c) = self.node.memo.lock().expect("memo lock").get(&k) {
            return c.clone();
        }
        let c = self.compute(k);
        self.node
            .memo
            .lock()
            .expect("memo lock")
            .insert(k, c.clone());
        c
    }

    fn compute(&self, k: u64) -> R::Elem {
        let ring = &self.node.ring;
        match &self.node.rule {
            Rule::Zero => ring.zero(),
            Rule::Terms(t) => t.get(&k).cloned().unwrap_or_else(|| ring.zero()),
            Rule::Generator(f) => f(k),
            Rule::Add { a, b, ea, eb } => {
                let pick = |s: &LazySeries<R>, (o, r): (u64, u64)| {
                    if k >= o && (k - o).is_multiple_of(r) {
                        s.coeff((k - o) / r)
                    } else {
                        ring.zero()
                    }
                };
                ring.add(&pick(a, *ea), &pick(b, *eb))
            }
            Rule::Neg(a) => ring.neg(&a.coeff(k)),
            Rule::Mul { a, b, ra, rb } => {
                let mut acc = ring.zero();
                let mut j = 0;
                while j * ra <= k {
                    let rest = k - j * ra;
                    if rest.is_multiple_of(*rb) {
                        let x = a.coeff(j);
                        if !ring.is_zero(&x) {
                            let y = b.coeff(rest / rb);
                            if !ring.is_zero(&y) {
                                let y = if ring.has_action() {
                                    let g = a.position(j).expect("position within range");
                                    ring.act(&g, &y)
                                } else {
                                    y
                                };
                                acc = ring.add(&acc, &ring.mul(&x, &y));
                            }
                        }
                    }
                    j += 1;
                }
                acc
            }
            Rule::Skip { src, skip } => src.coeff(k + skip),
            Rule::UnitInverse(p) => {
                // q(0) = 1 and q(s) = -Σ_{g ≠ 1} p(g)·σ_g(q(s - g)).
                if k == 0 {
                    return ring.one();
                }
                let mut acc = ring.zero();
                for j in 1..=k {
                    let x = p.coeff(j);
                    if ring.is_zero(&x) {
                        continue;
                    }
                    let y = self.coeff(k - j);
                    let y = if ring.has_action() {
                        ring.act(&p.position(j).expect("position within range"), &y)
                    } else {
                        y
                    };
                    acc = ring.add(&acc, &ring.mul(&x, &y));
                }
                ring.neg(&acc)
            }
        }
    }

    /// The coefficient of `x^g`.
    pub fn coeff_at(&self, g: &IndexElem) -> R::Elem {
        match self.node.shape.index_of(&self.node.frontier, g) {
            Some(k) => self.coeff(k),
            None => self.node.ring.zero(),
        }
    }

    /// Force and return the first `d` coefficients.
    pub fn force(&self, d: u64) -> Vec<R::Elem> {
        (0..d).map(|k| self.coeff(k)).collect()
    }

    /// The first nonzero coefficient within `scan` frontier positions, with
    /// its index and exponent.
    pub fn leading_within(&self, scan: u64) -> Result<Option<(u64, IndexElem, R::Elem)>> {
        for k in 0..scan {
            let c = self.coeff(k);
            if !self.node.ring.is_zero(&c) {
                return Ok(Some((k, self.position(k)?, c)));
            }
        }
        Ok(None)
    }

    /// `m_p` and `p(m_p)`: the leading term, found within [`LEAD_SCAN`]
    /// positions.
    pub fn leading(&self) -> Result<Option<(u64, IndexElem, R::Elem)>> {
        self.leading_within(LEAD_SCAN)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if matches!(self.node.rule, Rule::Zero) {
            return Ok(other.clone());
        }
        if matches!(other.node.rule, Rule::Zero) {
            return Ok(self.clone());
        }
        let shape = &self.node.shape;
        let frontier = shape.join(&self.node.frontier, &other.node.frontier)?;
        let ea = shape.embed(&frontier, &self.node.frontier)?;
        let eb = shape.embed(&frontier, &other.node.frontier)?;
        Ok(self.derived(
            frontier,
            Rule::Add {
                a: self.clone(),
                b: other.clone(),
                ea,
                eb,
            },
        ))
    }

    pub fn neg(&self) -> Self {
        self.derived(self.node.frontier.clone(), Rule::Neg(self.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cauchy product `(pq)(s) = Σ_{g+h=s} p(g)·σ_g(q(h))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let shape = &self.node.shape;
        let (fa, fb) = (&self.node.frontier, &other.node.frontier);
        let frontier = Frontier {
            base: shape.group.group_op(&fa.base, &fb.base)?,
            step: shape.group.step_gcd(&fa.step, &fb.step)?,
        };
        if matches!(self.node.rule, Rule::Zero) || matches!(other.node.rule, Rule::Zero) {
            return Ok(self.derived(frontier, Rule::Zero));
        }
        let (_, ra) = shape.embed(
            &frontier,
            &Frontier {
                base: frontier.base.clone(),
                step: fa.step.clone(),
            },
        )?;
        let (_, rb) = shape.embed(
            &frontier,
            &Frontier {
                base: frontier.base.clone(),
                step: fb.step.clone(),
            },
        )?;
        Ok(self.derived(
            frontier,
            Rule::Mul {
                a: self.clone(),
                b: other.clone(),
                ra,
                rb,
            },
        ))
    }

    /// The inverse: write `p = p₁·p₂` with `p₂ = p(m_p)·x^{m_p}` and `p₁`
    /// having leading term 1 at `1_G`, invert `p₂` directly and `p₁` by the
    /// coefficient recursion, and return `p₂⁻¹·p₁⁻¹`.
    pub fn inv(&self) -> Result<Self> {
        let ring = Arc::clone(&self.node.ring);
        let shape = self.node.shape.clone();
        let Some((k, m, c)) = self.leading()? else {
            return Err(Error::DivisionByZero);
        };
        let group = &shape.group;
        let minus_m = group.group_inv(&m)?;
        // (c, m)·(d, -m) = (c·σ_m(d), 1) = 1 gives d = σ_{-m}(c⁻¹).
        let c_inv = ring.inv(&c).ok_or(Error::DivisionByZero)?;
        let d = ring.act(&minus_m, &c_inv);
        let step = self.node.frontier.step.clone();
        let p2_inv =
            Self::monomial_with_step(Arc::clone(&ring), shape.clone(), d, minus_m, step.clone())?;
        // p₁ = p·p₂⁻¹ has its leading coefficient at index k.
        let shifted = self.mul(&p2_inv)?;
        let p1 = shifted.derived(
            Frontier {
                base: shifted.position(k)?,
                step: shifted.node.frontier.step.clone(),
            },
            Rule::Skip {
                src: shifted.clone(),
                skip: k,
            },
        );
        debug_assert_eq!(p1.node.frontier.base, group.identity()?);
        let q = p1.derived(p1.node.frontier.clone(), Rule::UnitInverse(p1.clone()));
        p2_inv.mul(&q)
    }

    /// Coefficientwise equality on the first `d` positions of a common
    /// frontier, in the working order. Equality of lazy series is only
    /// semidecidable, so this is a bounded check.
    pub fn eq_depth(&self, other: &Self, d: u64) -> Result<bool> {
        if d == 0 {
            return Err(invalid("depth must be at least 1"));
        }
        self.compatible(other)?;
        let shape = &self.node.shape;
        let frontier = shape.join(&self.node.frontier, &other.node.frontier)?;
        let ea = shape.embed(&frontier, &self.node.frontier)?;
        let eb = shape.embed(&frontier, &other.node.frontier)?;
        let ring = &self.node.ring;
        let pick = |s: &Self, (o, r): (u64, u64), k: u64| {
            if k >= o && (k - o).is_multiple_of(r) {
                s.coeff((k - o) / r)
            } else {
                ring.zero()
            }
        };
        Ok((0..d).all(|k| pick(self, ea, k) == pick(other, eb, k)))
    }

    /// The first `d` nonzero terms among the first `d` frontier positions.
    pub fn terms(&self, d: u64) -> Result<Vec<(IndexElem, R::Elem)>> {
        let mut out = Vec::new();
        for k in 0..d {
            let c = self.coeff(k);
            if !self.node.ring.is_zero(&c) {
                out.push((self.position(k)?, c));
            }
        }
        Ok(out)
    }

    /// `c·t^g + …` over the first `d` frontier positions.
    pub fn display(&self, d: u64) -> String {
        let Ok(terms) = self.terms(d) else {
            return "?".into();
        };
        let one = self.node.ring.one();
        let zero = self.node.shape.group.identity().ok();
        let mut parts: Vec<String> = terms
            .iter()
            .map(|(g, c)| {
                let cs = self.node.ring.display(c);
                let cs = if cs.contains(['+', '-', ' ']) && cs.len() > 1 {
                    format!("({cs})")
                } else {
                    cs
                };
                match (Some(g) == zero.as_ref(), *c == one) {
                    (true, _) => cs,
                    (false, true) => format!("t^{g}"),
                    (false, false) => format!("{cs}*t^{g}"),
                }
            })
            .collect();
        if matches!(self.node.rule, Rule::Zero | Rule::Terms(_)) {
            if parts.is_empty() {
                parts.push("0".into());
            }
        } else {
            parts.push("...".into());
        }
        parts.join(" + ")
    }
}

/// Parse `c*t^g + c*t^g + …`. Coefficients are parsed by the ring and may
/// be parenthesised; `t` alone means `t^1` and a bare coefficient means
/// exponent `1_G`.
pub fn parse_series<R: Coefficients>(
    ring: Arc<R>,
    group: OrderedIndex,
    orientation: Orientation,
    text: &str,
) -> Result<LazySeries<R>> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut pieces = Vec::new();
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&text[start..]);
    for piece in pieces {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(invalid(format!("empty term in {text:?}")));
        }
        let (coeff, exp) = match piece.rfind('t') {
            Some(i) if !piece[i..].contains(')') => {
                let exp = piece[i + 1..].trim();
                let exp = match exp.strip_prefix('^') {
                    Some(e) => group.parse_elem(e.trim())?,
                    None if exp.is_empty() => unit_step(&group)?,
                    None => return Err(invalid(format!("bad term {piece:?}"))),
                };
                let c = piece[..i].trim().trim_end_matches('*').trim();
                (if c.is_empty() { None } else { Some(c) }, exp)
            }
            _ => (Some(piece), group.identity()?),
        };
        let c = match coeff {
            None => ring.one(),
            Some(c) => {
                let c = c
                    .strip_prefix('(')
                    .and_then(|c| c.strip_suffix(')'))
                    .unwrap_or(c);
                ring.parse(c.trim())
                    .ok_or_else(|| invalid(format!("unknown coefficient {c:?}")))?
            }
        };
        terms.push((exp, c));
    }
    LazySeries::from_terms(ring, group, orientation, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{finite_field, Action, SymbolicHyperfield};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn gf(p: usize) -> Arc<TableCoeffs> {
        Arc::new(TableCoeffs::new(finite_field(p as u32, 1).unwrap()).unwrap())
    }

    fn z(ring: &Arc<TableCoeffs>, text: &str) -> LazySeries<TableCoeffs> {
        parse_series(
            Arc::clone(ring),
            OrderedIndex::Integers,
            Orientation::Ascending,
            text,
        )
        .unwrap()
    }

    #[test]
    fn square_in_characteristic_two() {
        let r = gf(2);
        let p = z(&r, "1 + t");
        assert!(p.mul(&p).unwrap().eq_depth(&z(&r, "1 + t^2"), 8).unwrap());
        assert!(p
            .add(
                &LazySeries::zero(r.clone(), OrderedIndex::Integers, Orientation::Ascending)
                    .unwrap()
            )
            .unwrap()
            .eq_depth(&p, 8)
            .unwrap());
    }

    #[test]
    fn geometric_inverse() {
        let r = gf(2);
        let p = z(&r, "1 + t");
        let q = p.inv().unwrap();
        assert_eq!(q.force(8), vec![1; 8]);
        assert_eq!(q.position(7).unwrap(), IndexElem::Int(7));
        let one = z(&r, "1");
        assert!(q.mul(&p).unwrap().eq_depth(&one, 10).unwrap());
        assert!(one.inv().unwrap().eq_depth(&one, 10).unwrap());
    }

    #[test]
    fn monomials() {
        let r = gf(5);
        let a = z(&r, "2*t^3");
        let b = z(&r, "4*t^-1");
        assert!(a.mul(&b).unwrap().eq_depth(&z(&r, "3*t^2"), 5).unwrap());
        // (2 x^3)⁻¹ = 3 x^-3 over GF(5).
        assert!(a.inv().unwrap().eq_depth(&z(&r, "3*t^-3"), 5).unwrap());
    }

    #[test]
    fn depth_bounded_equality() {
        let r = gf(2);
        let p = z(&r, "1 + t");
        let one = z(&r, "1");
        assert!(p.eq_depth(&one, 1).unwrap());
        assert!(!p.eq_depth(&one, 2).unwrap());
        assert!(p.eq_depth(&one, 0).is_err());
    }

    #[test]
    fn descending_orientation_leads_with_the_top_exponent() {
        let r = gf(2);
        let p = parse_series(
            r.clone(),
            OrderedIndex::Integers,
            Orientation::Descending,
            "1 + t",
        )
        .unwrap();
        let (_, m, _) = p.leading().unwrap().unwrap();
        assert_eq!(m, IndexElem::Int(1));
        // (t + 1)⁻¹ = t^-1 + t^-2 + … in this orientation.
        let q = p.inv().unwrap();
        let terms = q.terms(4).unwrap();
        let exps: Vec<_> = terms.iter().map(|(g, _)| g.clone()).collect();
        assert_eq!(
            exps,
            (1..=4).map(|i| IndexElem::Int(-i)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn rational_exponents_and_coefficients() {
        let r = Arc::new(RationalCoeffs);
        let p = parse_series(
            r.clone(),
            OrderedIndex::Rationals,
            Orientation::Ascending,
            "1 + -1/2*t^1/3",
        )
        .unwrap();
        let q = p.inv().unwrap();
        // Σ (1/2)^k t^{k/3}.
        assert_eq!(
            q.coeff_at(&IndexElem::rat(2, 3)),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        let one = LazySeries::one(r, OrderedIndex::Rationals, Orientation::Ascending).unwrap();
        assert!(p.mul(&q).unwrap().eq_depth(&one, 10).unwrap());
    }

    #[test]
    fn twisted_inverse() {
        // Frobenius on GF(4) acting through ℤ.
        let gf4 = finite_field(2, 2).unwrap();
        let frob: Vec<usize> = (0..4).map(|x| gf4.mul(x, x)).collect();
        let f = SymbolicHyperfield::new(
            "GF(4)<Z>",
            gf4.clone(),
            OrderedIndex::Integers,
            Action::Generators(vec![frob]),
        )
        .unwrap();
        let r = Arc::new(TableCoeffs::layered(&f).unwrap());
        let p = parse_series(
            r.clone(),
            OrderedIndex::Integers,
            Orientation::Ascending,
            "x + t + (x+1)*t^2",
        )
        .unwrap();
        let q = p.inv().unwrap();
        let one = LazySeries::one(r, OrderedIndex::Integers, Orientation::Ascending).unwrap();
        assert!(p.mul(&q).unwrap().eq_depth(&one, 10).unwrap());
        assert!(q.mul(&p).unwrap().eq_depth(&one, 10).unwrap());
        // The twist makes the product noncommutative.
        let a = parse_series(
            p.ring().clone(),
            OrderedIndex::Integers,
            Orientation::Ascending,
            "t",
        )
        .unwrap();
        let b = parse_series(
            p.ring().clone(),
            OrderedIndex::Integers,
            Orientation::Ascending,
            "x",
        )
        .unwrap();
        assert!(!a.mul(&b).unwrap().eq_depth(&b.mul(&a).unwrap(), 3).unwrap());
    }

    #[test]
    fn zero_has_no_inverse() {
        let r = gf(3);
        let zero = LazySeries::zero(r, OrderedIndex::Integers, Orientation::Ascending).unwrap();
        assert!(matches!(zero.inv(), Err(Error::DivisionByZero)));
        assert!(
            LazySeries::zero(gf(3), OrderedIndex::LexPower(2), Orientation::Ascending).is_err()
        );
    }

    fn random_series(r: &Arc<TableCoeffs>, seed: u64) -> LazySeries<TableCoeffs> {
        let base = IndexElem::Int((seed % 7) as i64 - 3);
        let step = IndexElem::Int(1 + (seed % 2) as i64);
        let lead = 1 + (seed as usize % (r.order() - 1));
        LazySeries::random(
            r.clone(),
            OrderedIndex::Integers,
            Orientation::Ascending,
            Frontier { base, step },
            lead,
            seed,
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn inverse_identity(seed in 0u64..1000, p in prop::sample::select(vec![2usize, 3, 5])) {
            let r = gf(p);
            let s = random_series(&r, seed);
            let one = LazySeries::one(r, OrderedIndex::Integers, Orientation::Ascending).unwrap();
            prop_assert!(s.mul(&s.inv().unwrap()).unwrap().eq_depth(&one, 10).unwrap());
        }

        #[test]
        fn ring_laws(a in 0u64..500, b in 0u64..500, c in 0u64..500) {
            let r = gf(3);
            let (x, y, z) = (random_series(&r, a), random_series(&r, b), random_series(&r, c));
            let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
            let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert!(lhs.eq_depth(&rhs, 10).unwrap());
            prop_assert!(x.mul(&y.mul(&z).unwrap()).unwrap().eq_depth(&x.mul(&y).unwrap().mul(&z).unwrap(), 10).unwrap());
            prop_assert!(x.add(&y).unwrap().eq_depth(&y.add(&x).unwrap(), 10).unwrap());
        }
    }
}
