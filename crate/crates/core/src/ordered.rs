//! Totally ordered index sets and totally ordered abelian groups used as
//! layer indices.
//!
//! Group variants are written additively: the group identity is `0`, the
//! inverse is negation, and "strictly below the identity" means negative.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Exact rational, reduced, with 64-bit numerator and denominator.
pub type Rational = Ratio<i64>;

/// An ordered index set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderedIndex {
    /// `{0 < 1 < .. < n-1}`; ordered set only, no group law.
    FiniteChain(usize),
    /// `ℤ` under addition.
    Integers,
    /// `ℤ^k` with the lexicographic order. `ℤ^0` is the trivial group.
    LexPower(usize),
    /// `ℚ` under addition.
    Rationals,
}

/// An element of some [`OrderedIndex`].
///
/// The derived `Ord` agrees with the index order for elements of the same
/// index set; use [`OrderedIndex::cmp`] when the operands are untrusted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexElem {
    Chain(usize),
    Int(i64),
    Lex(Vec<i64>),
    Rat(Rational),
}

impl IndexElem {
    pub fn rat(num: i64, den: i64) -> IndexElem {
        IndexElem::Rat(Rational::new(num, den))
    }
}

impl fmt::Display for IndexElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexElem::Chain(i) => write!(f, "{i}"),
            IndexElem::Int(i) => write!(f, "{i}"),
            IndexElem::Lex(v) => {
                write!(f, "(")?;
                for (k, x) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            IndexElem::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl OrderedIndex {
    pub fn is_group(&self) -> bool {
        !matches!(self, OrderedIndex::FiniteChain(_))
    }

    pub fn contains(&self, g: &IndexElem) -> bool {
        match (self, g) {
            (OrderedIndex::FiniteChain(n), IndexElem::Chain(i)) => i < n,
            (OrderedIndex::Integers, IndexElem::Int(_)) => true,
            (OrderedIndex::LexPower(k), IndexElem::Lex(v)) => v.len() == *k,
            (OrderedIndex::Rationals, IndexElem::Rat(_)) => true,
            _ => false,
        }
    }

    fn check(&self, g: &IndexElem) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(invalid(format!("{g} is not an element of {self}")))
        }
    }

    fn check_group(&self) -> Result<()> {
        if self.is_group() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{self} has no group law")))
        }
    }

    /// Total-order comparison; lexicographic powers compare at the leftmost
    /// differing coordinate.
    pub fn cmp(&self, g: &IndexElem, h: &IndexElem) -> Result<Ordering> {
        self.check(g)?;
        self.check(h)?;
        Ok(g.cmp(h))
    }

    /// The group identity `1_G` (written `0`).
    pub fn identity(&self) -> Result<IndexElem> {
        match self {
            OrderedIndex::FiniteChain(_) => {
                Err(Error::Unsupported(format!("{self} has no group law")))
            }
            OrderedIndex::Integers => Ok(IndexElem::Int(0)),
            OrderedIndex::LexPower(k) => Ok(IndexElem::Lex(vec![0; *k])),
            OrderedIndex::Rationals => Ok(IndexElem::Rat(Rational::zero())),
        }
    }

    pub fn group_op(&self, g: &IndexElem, h: &IndexElem) -> Result<IndexElem> {
        self.check_group()?;
        self.check(g)?;
        self.check(h)?;
        Ok(match (g, h) {
            (IndexElem::Int(a), IndexElem::Int(b)) => {
                IndexElem::Int(i64::checked_add(*a, *b).ok_or(Error::Overflow("integer addition"))?)
            }
            (IndexElem::Lex(a), IndexElem::Lex(b)) => IndexElem::Lex(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| {
                        i64::checked_add(*x, *y).ok_or(Error::Overflow("lexicographic addition"))
                    })
                    .collect::<Result<_>>()?,
            ),
            (IndexElem::Rat(a), IndexElem::Rat(b)) => IndexElem::Rat(
                a.checked_add(b)
                    .ok_or(Error::Overflow("rational addition"))?,
            ),
            _ => unreachable!("membership checked"),
        })
    }

    pub fn group_inv(&self, g: &IndexElem) -> Result<IndexElem> {
        self.check_group()?;
        self.check(g)?;
        Ok(match g {
            IndexElem::Int(a) => {
                IndexElem::Int(a.checked_neg().ok_or(Error::Overflow("integer negation"))?)
            }
            IndexElem::Lex(a) => IndexElem::Lex(
                a.iter()
                    .map(|x| {
                        x.checked_neg()
                            .ok_or(Error::Overflow("lexicographic negation"))
                    })
                    .collect::<Result<_>>()?,
            ),
            IndexElem::Rat(a) => IndexElem::Rat(
                Rational::zero()
                    .checked_sub(a)
                    .ok_or(Error::Overflow("rational negation"))?,
            ),
            IndexElem::Chain(_) => unreachable!("group checked"),
        })
    }

    /// `g - h`.
    pub fn group_sub(&self, g: &IndexElem, h: &IndexElem) -> Result<IndexElem> {
        let minus_h = self.group_inv(h)?;
        self.group_op(g, &minus_h)
    }

    /// `k · g` for an integer `k`.
    pub fn times(&self, g: &IndexElem, k: i64) -> Result<IndexElem> {
        self.check_group()?;
        self.check(g)?;
        Ok(match g {
            IndexElem::Int(a) => {
                IndexElem::Int(i64::checked_mul(*a, k).ok_or(Error::Overflow("integer scaling"))?)
            }
            IndexElem::Lex(a) => IndexElem::Lex(
                a.iter()
                    .map(|x| {
                        i64::checked_mul(*x, k).ok_or(Error::Overflow("lexicographic scaling"))
                    })
                    .collect::<Result<_>>()?,
            ),
            IndexElem::Rat(a) => IndexElem::Rat(
                a.checked_mul(&Rational::from_integer(k))
                    .ok_or(Error::Overflow("rational scaling"))?,
            ),
            IndexElem::Chain(_) => unreachable!("group checked"),
        })
    }

    /// The largest element strictly below the identity, if one exists:
    /// `-1` in `ℤ`, `(0,..,0,-1)` in `ℤ^k` (k ≥ 1). `ℚ` and the trivial group
    /// have none.
    pub fn max_below_identity(&self) -> Option<IndexElem> {
        match self {
            OrderedIndex::Integers => Some(IndexElem::Int(-1)),
            OrderedIndex::LexPower(k) if *k > 0 => {
                let mut v = vec![0; *k];
                v[*k - 1] = -1;
                Some(IndexElem::Lex(v))
            }
            _ => None,
        }
    }

    /// Whether `{ab | a, b < 1_G} = {c | c < 1_G}`.
    ///
    /// For an ordered abelian group this fails exactly when some element
    /// sits immediately below the identity: that element has no such
    /// factorization, and every other negative `c` factors as
    /// `max_below · (c - max_below)`.
    pub fn is_dense_below_identity(&self) -> Result<bool> {
        self.check_group()?;
        Ok(self.max_below_identity().is_none())
    }

    /// A factorization `c = a + b` with `a, b < 0`, when one exists.
    pub fn factor_below_identity(&self, c: &IndexElem) -> Result<Option<(IndexElem, IndexElem)>> {
        let zero = self.identity()?;
        if self.cmp(c, &zero)? != Ordering::Less {
            return Err(invalid(format!("{c} is not below the identity")));
        }
        match (self, c) {
            (OrderedIndex::Rationals, IndexElem::Rat(r)) => {
                let half = IndexElem::Rat(r / 2);
                Ok(Some((half.clone(), half)))
            }
            _ => {
                let top = self
                    .max_below_identity()
                    .expect("discrete group below identity");
                if *c == top {
                    return Ok(None);
                }
                let rest = self.group_sub(c, &top)?;
                Ok(Some((top, rest)))
            }
        }
    }

    /// Greatest common "step" of two positive elements of a rank-one group
    /// (`ℤ` or `ℚ`): the largest `d` with both `a` and `b` integer multiples
    /// of `d`. Zero arguments are ignored.
    pub fn step_gcd(&self, a: &IndexElem, b: &IndexElem) -> Result<IndexElem> {
        match (a, b) {
            (IndexElem::Int(x), IndexElem::Int(y)) => Ok(IndexElem::Int(x.gcd(y))),
            (IndexElem::Rat(x), IndexElem::Rat(y)) => {
                let den = x.denom().lcm(y.denom());
                let xn = i64::checked_mul(*x.numer(), den / x.denom())
                    .ok_or(Error::Overflow("rational gcd"))?;
                let yn = i64::checked_mul(*y.numer(), den / y.denom())
                    .ok_or(Error::Overflow("rational gcd"))?;
                Ok(IndexElem::Rat(Rational::new(xn.gcd(&yn), den)))
            }
            _ => Err(Error::Unsupported(format!("step gcd in {self}"))),
        }
    }

    /// `(g - base) / step` when that is a non-negative integer.
    pub fn steps_between(&self, base: &IndexElem, step: &IndexElem, g: &IndexElem) -> Option<u64> {
        match (base, step, g) {
            (IndexElem::Int(b), IndexElem::Int(s), IndexElem::Int(x)) => {
                let d = i64::checked_sub(*x, *b)?;
                if *s == 0 || d < 0 || d % s != 0 {
                    None
                } else {
                    Some((d / s) as u64)
                }
            }
            (IndexElem::Rat(b), IndexElem::Rat(s), IndexElem::Rat(x)) => {
                let d = x.checked_sub(b)?;
                if s.is_zero() || d.is_negative() {
                    return None;
                }
                let q = d / s;
                if q.is_integer() {
                    Some(q.to_integer() as u64)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The finite sample of this index set lying in a window, ascending.
    pub fn window_elements(&self, w: &Window) -> Vec<IndexElem> {
        match self {
            OrderedIndex::FiniteChain(n) => (w.lo.max(0)..=w.hi)
                .filter(|&i| (i as usize) < *n)
                .map(|i| IndexElem::Chain(i as usize))
                .collect(),
            OrderedIndex::Integers => (w.lo..=w.hi).map(IndexElem::Int).collect(),
            OrderedIndex::Rationals => {
                let d = w.denominator.max(1);
                (w.lo * d..=w.hi * d)
                    .map(|k| IndexElem::rat(k, d))
                    .collect()
            }
            OrderedIndex::LexPower(k) => {
                let mut out = vec![Vec::new()];
                for _ in 0..*k {
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<i64>| {
                            (w.lo..=w.hi).map(move |x| {
                                let mut v = prefix.clone();
                                v.push(x);
                                v
                            })
                        })
                        .collect();
                }
                out.into_iter().map(IndexElem::Lex).collect()
            }
        }
    }

    /// Parse an element written the way [`IndexElem`]'s `Display` prints it.
    pub fn parse_elem(&self, s: &str) -> Result<IndexElem> {
        let s = s.trim();
        let bad = || invalid(format!("cannot read {s:?} as an element of {self}"));
        let g = match self {
            OrderedIndex::FiniteChain(_) => IndexElem::Chain(s.parse().map_err(|_| bad())?),
            OrderedIndex::Integers => IndexElem::Int(s.parse().map_err(|_| bad())?),
            OrderedIndex::Rationals => {
                let r = match s.split_once('/') {
                    Some((a, b)) => {
                        let den: i64 = b.trim().parse().map_err(|_| bad())?;
                        if den == 0 {
                            return Err(bad());
                        }
                        Rational::new(a.trim().parse().map_err(|_| bad())?, den)
                    }
                    None => Rational::from_integer(s.parse().map_err(|_| bad())?),
                };
                IndexElem::Rat(r)
            }
            OrderedIndex::LexPower(_) => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let v = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                        .collect::<Result<_>>()?
                };
                IndexElem::Lex(v)
            }
        };
        self.check(&g)?;
        Ok(g)
    }
}

impl fmt::Display for OrderedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderedIndex::FiniteChain(n) => write!(f, "chain({n})"),
            OrderedIndex::Integers => write!(f, "Z"),
            OrderedIndex::LexPower(k) => write!(f, "Z^{k}"),
            OrderedIndex::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for OrderedIndex {
    type Err = Error;

    /// Accepts `chain(n)`, `Z`, `Z^k`, `Q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(OrderedIndex::Integers);
        }
        if s == "Q" {
            return Ok(OrderedIndex::Rationals);
        }
        if let Some(k) = s.strip_prefix("Z^") {
            let k = k
                .parse()
                .map_err(|_| invalid(format!("bad exponent in {s:?}")))?;
            return Ok(OrderedIndex::LexPower(k));
        }
        if let Some(n) = s.strip_prefix("chain(").and_then(|r| r.strip_suffix(')')) {
            let n = n
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad chain length in {s:?}")))?;
            return Ok(OrderedIndex::FiniteChain(n));
        }
        Err(invalid(format!("unknown ordered index {s:?}")))
    }
}

/// A closed interval `lo..=hi` used to sample infinite index sets. For `ℚ`
/// the sample consists of the multiples of `1/denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub denominator: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Window {
        Window {
            lo,
            hi,
            denominator: 1,
        }
    }

    pub fn with_denominator(mut self, d: i64) -> Window {
        self.denominator = d.max(1);
        self
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::new(-8, 8)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator > 1 {
            write!(f, "{}..{} (step 1/{})", self.lo, self.hi, self.denominator)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl FromStr for Window {
    type Err = Error;

    /// `a..b`, e.g. `-5..5`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| invalid(format!("window {s:?} is not of the form a..b")))?;
        let lo: i64 = a
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad window bound {a:?}")))?;
        let hi: i64 = b
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad window bound {b:?}")))?;
        if lo > hi {
            return Err(invalid(format!("empty window {s:?}")));
        }
        Ok(Window::new(lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cmp_examples() {
        let z = OrderedIndex::Integers;
        assert_eq!(
            z.cmp(&IndexElem::Int(1), &IndexElem::Int(2)).unwrap(),
            Ordering::Less
        );
        let z2 = OrderedIndex::LexPower(2);
        assert_eq!(
            z2.cmp(&IndexElem::Lex(vec![0, -1]), &IndexElem::Lex(vec![0, 0]))
                .unwrap(),
            Ordering::Less
        );
        let q = OrderedIndex::Rationals;
        assert_eq!(
            q.cmp(&IndexElem::rat(1, 3), &IndexElem::rat(2, 5)).unwrap(),
            Ordering::Less
        );
        assert!(z.cmp(&IndexElem::Int(1), &IndexElem::rat(1, 2)).is_err());
    }

    #[test]
    fn group_examples() {
        let z = OrderedIndex::Integers;
        assert_eq!(
            z.group_op(&IndexElem::Int(2), &IndexElem::Int(3)).unwrap(),
            IndexElem::Int(5)
        );
        assert_eq!(z.group_inv(&IndexElem::Int(2)).unwrap(), IndexElem::Int(-2));
        let z2 = OrderedIndex::LexPower(2);
        assert_eq!(
            z2.group_op(&IndexElem::Lex(vec![1, 0]), &IndexElem::Lex(vec![0, -1]))
                .unwrap(),
            IndexElem::Lex(vec![1, -1])
        );
        let q = OrderedIndex::Rationals;
        assert_eq!(
            q.group_op(&IndexElem::rat(1, 2), &IndexElem::rat(1, 3))
                .unwrap(),
            IndexElem::rat(5, 6)
        );
        let chain = OrderedIndex::FiniteChain(3);
        assert!(matches!(
            chain.group_op(&IndexElem::Chain(0), &IndexElem::Chain(1)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let z = OrderedIndex::Integers;
        assert_eq!(
            z.group_op(&IndexElem::Int(i64::MAX), &IndexElem::Int(1)),
            Err(Error::Overflow("integer addition"))
        );
        let q = OrderedIndex::Rationals;
        let big = IndexElem::Rat(Rational::new(i64::MAX, 1));
        assert!(matches!(q.group_op(&big, &big), Err(Error::Overflow(_))));
    }

    #[test]
    fn density_witnesses() {
        let z = OrderedIndex::Integers;
        assert!(!z.is_dense_below_identity().unwrap());
        assert_eq!(z.factor_below_identity(&IndexElem::Int(-1)).unwrap(), None);
        assert!(z
            .factor_below_identity(&IndexElem::Int(-5))
            .unwrap()
            .is_some());

        let z2 = OrderedIndex::LexPower(2);
        assert!(!z2.is_dense_below_identity().unwrap());
        assert_eq!(
            z2.factor_below_identity(&IndexElem::Lex(vec![0, -1]))
                .unwrap(),
            None
        );

        let q = OrderedIndex::Rationals;
        assert!(q.is_dense_below_identity().unwrap());
        assert!(OrderedIndex::LexPower(0).is_dense_below_identity().unwrap());
    }

    /// Brute force over a window: a negative `c` factors as a sum of two
    /// negatives iff `factor_below_identity` says so.
    #[test]
    fn density_agrees_with_window_search() {
        for g in [OrderedIndex::Integers, OrderedIndex::LexPower(2)] {
            let w = Window::new(-3, 3);
            let elems = g.window_elements(&w);
            let zero = g.identity().unwrap();
            let neg: Vec<_> = elems.iter().filter(|e| **e < zero).cloned().collect();
            for c in &neg {
                let brute = neg.iter().any(|a| {
                    let b = g.group_sub(c, a).unwrap();
                    b < zero
                });
                assert_eq!(
                    brute,
                    g.factor_below_identity(c).unwrap().is_some(),
                    "{g} {c}"
                );
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in ["chain(4)", "Z", "Z^3", "Q"] {
            assert_eq!(s.parse::<OrderedIndex>().unwrap().to_string(), s);
        }
        let q = OrderedIndex::Rationals;
        assert_eq!(q.parse_elem("-3/6").unwrap(), IndexElem::rat(-1, 2));
        assert_eq!(
            OrderedIndex::LexPower(2)
                .parse_elem("(1,-2)")
                .unwrap()
                .to_string(),
            "(1,-2)"
        );
        assert!(OrderedIndex::LexPower(2).parse_elem("(1)").is_err());
        assert_eq!("-5..5".parse::<Window>().unwrap(), Window::new(-5, 5));
    }

    fn group_strategy() -> impl Strategy<Value = (OrderedIndex, [IndexElem; 3])> {
        let int = (-1000i64..1000).prop_map(IndexElem::Int);
        let lex = proptest::collection::vec(-20i64..20, 2).prop_map(IndexElem::Lex);
        let rat = (-200i64..200, 1i64..30).prop_map(|(a, b)| IndexElem::rat(a, b));
        prop_oneof![
            [int.clone(), int.clone(), int].prop_map(|v| (OrderedIndex::Integers, v)),
            [lex.clone(), lex.clone(), lex].prop_map(|v| (OrderedIndex::LexPower(2), v)),
            [rat.clone(), rat.clone(), rat].prop_map(|v| (OrderedIndex::Rationals, v)),
        ]
    }

    proptest! {
        #[test]
        fn total_order_laws((g, [a, b, c]) in group_strategy()) {
            let ab = g.cmp(&a, &b).unwrap();
            prop_assert_eq!(ab.reverse(), g.cmp(&b, &a).unwrap());
            prop_assert_eq!(g.cmp(&a, &a).unwrap(), Ordering::Equal);
            if ab != Ordering::Greater && g.cmp(&b, &c).unwrap() != Ordering::Greater {
                prop_assert_ne!(g.cmp(&a, &c).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn group_laws_and_translation_invariance((g, [a, b, c]) in group_strategy()) {
            let e = g.identity().unwrap();
            prop_assert_eq!(g.group_op(&a, &e).unwrap(), a.clone());
            let inv = g.group_inv(&a).unwrap();
            prop_assert_eq!(g.group_op(&a, &inv).unwrap(), e);
            let ab_c = g.group_op(&g.group_op(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.group_op(&a, &g.group_op(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            if g.cmp(&a, &b).unwrap() == Ordering::Less {
                prop_assert_eq!(
                    g.cmp(&g.group_op(&c, &a).unwrap(), &g.group_op(&c, &b).unwrap()).unwrap(),
                    Ordering::Less
                );
                prop_assert_eq!(
                    g.cmp(&g.group_op(&a, &c).unwrap(), &g.group_op(&b, &c).unwrap()).unwrap(),
                    Ordering::Less
                );
            }
        }

        #[test]
        fn rationals_factor_everything_below_identity(n in -500i64..0, d in 1i64..40) {
            let q = OrderedIndex::Rationals;
            let c = IndexElem::rat(n, d);
            let (a, b) = q.factor_below_identity(&c).unwrap().unwrap();
            let zero = q.identity().unwrap();
            prop_assert!(a < zero && b < zero);
            prop_assert_eq!(q.group_op(&a, &b).unwrap(), c);
        }
    }
}
