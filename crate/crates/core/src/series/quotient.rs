use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Coefficients, Frontier, LazySeries, Orientation, LEAD_SCAN};
use crate::catalog::{krasner, sign, Action, SetDescription, SymElem, SymbolicHyperfield};
use crate::error::{invalid, Error, Result};
use crate::ordered::{IndexElem, OrderedIndex};

/// Which unit subgroup `U` of the series field the quotient divides out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuotientMode {
    /// `U = {p | m_p = 1_G}`; the quotient is `𝕂 ⋊ G`.
    Krasner,
    /// `U = {p | m_p = 1_G, p(1_G) > 0}` over an ordered field; the quotient
    /// is `𝕊 ⋊ G`.
    Sign,
    /// `U = {p | m_p = 1_G, p(1_G) = 1}`; the quotient is `M ⋊ G` itself.
    Field,
}

impl QuotientMode {
    /// The layered hyperfield receiving the classes.
    pub fn target<R: Coefficients>(
        self,
        ring: &R,
        group: &OrderedIndex,
    ) -> Result<SymbolicHyperfield> {
        match self {
            // Over GF(2) the leading coefficients of a layer always cancel, so
            // the quotient is GF(2) ⋊ G rather than K ⋊ G.
            QuotientMode::Krasner if ring.field_index(&ring.one()).is_some() && ring.from_field_index(2).is_none() => {
                Err(Error::Precondition(
                    "the Krasner quotient needs at least three coefficients; over GF(2) use the field mode".into(),
                ))
            }
            QuotientMode::Krasner => SymbolicHyperfield::new(format!("trop({group})"), krasner(), group.clone(), Action::Trivial),
            QuotientMode::Sign => SymbolicHyperfield::new(format!("layer(S,{group})"), sign(), group.clone(), Action::Trivial),
            QuotientMode::Field => ring.field_target(group),
        }
    }
}

/// The class of a series as far as a bounded scan can tell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesClass {
    Exact(SymElem),
    /// Every scanned coefficient vanished: the class is zero or lies in a
    /// layer strictly below `below`.
    Vanishing {
        below: IndexElem,
    },
}

fn datum<R: Coefficients>(
    ring: &R,
    mode: QuotientMode,
    c: &R::Elem,
    m: IndexElem,
) -> Result<SymElem> {
    let u = match mode {
        QuotientMode::Krasner => 1,
        QuotientMode::Sign => match ring.sign(c) {
            Some(1) => 1,
            Some(-1) => 2,
            _ => {
                return Err(Error::Precondition(
                    "sign quotient needs an ordered coefficient field".into(),
                ))
            }
        },
        QuotientMode::Field => ring.field_index(c).ok_or_else(|| {
            Error::Precondition("field quotient needs finite field coefficients".into())
        })?,
    };
    Ok(SymElem::unit(u, m))
}

fn check_orientation<R: Coefficients>(p: &LazySeries<R>) -> Result<()> {
    if p.orientation() != Orientation::Descending {
        return Err(Error::Precondition(
            "quotient maps read the leading term of a descending series".into(),
        ));
    }
    Ok(())
}

/// The leading datum of `p` scanning `depth` frontier positions: `m_p`,
/// `(sign p(m_p), m_p)` or `(p(m_p), m_p)` depending on `mode`.
pub fn quotient_class_within<R: Coefficients>(
    p: &LazySeries<R>,
    mode: QuotientMode,
    depth: u64,
) -> Result<SeriesClass> {
    check_orientation(p)?;
    match p.leading_within(depth)? {
        Some((_, m, c)) => Ok(SeriesClass::Exact(datum(p.ring().as_ref(), mode, &c, m)?)),
        None => Ok(SeriesClass::Vanishing {
            below: p.position(depth.max(1) - 1)?,
        }),
    }
}

/// The class of `p` in the quotient, determined by its leading datum; a
/// series with no nonzero coefficient within [`LEAD_SCAN`] positions maps
/// to zero.
pub fn quotient_class<R: Coefficients>(p: &LazySeries<R>, mode: QuotientMode) -> Result<SymElem> {
    match quotient_class_within(p, mode, LEAD_SCAN)? {
        SeriesClass::Exact(x) => Ok(x),
        SeriesClass::Vanishing { .. } => Ok(SymElem::Zero),
    }
}

/// Outcome of [`quotient_sample_check`].
#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    /// The expected sum `x ⊞ y`, displayed.
    pub expected: String,
    /// Sampled classes outside the expected sum.
    pub outside: Vec<String>,
    /// Samples whose first `depth` coefficients all vanished but the
    /// expected sum has no downset deep enough to settle membership.
    pub inconclusive: usize,
    /// Elements of the finite part of the expected sum that were hit.
    pub covered: Vec<String>,
    pub finite_expected: usize,
    /// Samples landing in the downset part (or vanishing within depth).
    pub downset_hits: usize,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.outside.is_empty()
    }

    /// Fraction of the finite part of the expected sum that was hit.
    pub fn coverage(&self) -> f64 {
        if self.finite_expected == 0 {
            1.0
        } else {
            self.covered.len() as f64 / self.finite_expected as f64
        }
    }
}

fn random_step(group: &OrderedIndex, rng: &mut ChaCha8Rng) -> IndexElem {
    match group {
        OrderedIndex::Rationals => IndexElem::rat(1, rng.gen_range(1..=3)),
        _ => IndexElem::Int(rng.gen_range(1..=2)),
    }
}

fn random_nonzero<R: Coefficients>(ring: &R, rng: &mut ChaCha8Rng) -> R::Elem {
    loop {
        let c = ring.random(rng);
        if !ring.is_zero(&c) {
            return c;
        }
    }
}

/// A random series whose class is `x`.
fn representative<R: Coefficients>(
    ring: &Arc<R>,
    group: &OrderedIndex,
    mode: QuotientMode,
    x: &SymElem,
    rng: &mut ChaCha8Rng,
) -> Result<LazySeries<R>> {
    let SymElem::Unit { u, g } = x else {
        return LazySeries::zero(Arc::clone(ring), group.clone(), Orientation::Descending);
    };
    let lead = match mode {
        QuotientMode::Krasner => random_nonzero(ring.as_ref(), rng),
        QuotientMode::Sign => {
            let c = random_nonzero(ring.as_ref(), rng);
            let want = if *u == 1 { 1 } else { -1 };
            match ring.sign(&c) {
                Some(s) if s == want => c,
                Some(_) => ring.neg(&c),
                None => {
                    return Err(Error::Precondition(
                        "sign quotient needs an ordered coefficient field".into(),
                    ))
                }
            }
        }
        QuotientMode::Field => ring
            .from_field_index(*u)
            .ok_or_else(|| invalid(format!("{u} is not a coefficient index")))?,
    };
    let frontier = Frontier {
        base: g.clone(),
        step: random_step(group, rng),
    };
    LazySeries::random(
        Arc::clone(ring),
        group.clone(),
        Orientation::Descending,
        frontier,
        lead,
        rng.gen(),
    )
}

/// Draw random representatives of `x` and `y`, add them, and check that
/// the class of every sum lies in `x ⊞ y` computed in the target layered
/// hyperfield.
#[allow(clippy::too_many_arguments)]
pub fn quotient_sample_check<R: Coefficients>(
    ring: Arc<R>,
    group: &OrderedIndex,
    mode: QuotientMode,
    x: &SymElem,
    y: &SymElem,
    trials: usize,
    depth: u64,
    seed: u64,
) -> Result<SampleReport> {
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    let target = mode.target(ring.as_ref(), group)?;
    let expected: SetDescription = target.sym_add(x, y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SampleReport {
        samples: trials,
        expected: target.display_set(&expected),
        outside: Vec::new(),
        inconclusive: 0,
        covered: Vec::new(),
        finite_expected: expected.finite_part().len(),
        downset_hits: 0,
    };
    let mut covered: Vec<SymElem> = Vec::new();
    for _ in 0..trials {
        let p = representative(&ring, group, mode, x, &mut rng)?;
        let q = representative(&ring, group, mode, y, &mut rng)?;
        let s = p.add(&q)?;
        match quotient_class_within(&s, mode, depth)? {
            SeriesClass::Exact(c) => {
                if !expected.contains(&c) {
                    report.outside.push(target.display(&c));
                } else if expected.finite_part().contains(&c) {
                    if !covered.contains(&c) {
                        covered.push(c);
                    }
                } else {
                    report.downset_hits += 1;
                }
            }
            SeriesClass::Vanishing { below } => match expected.downset_below() {
                Some(b) if *b >= below => report.downset_hits += 1,
                _ if !expected.contains(&SymElem::Zero) => {
                    report.outside.push(format!("a class below layer {below}"))
                }
                _ => report.inconclusive += 1,
            },
        }
    }
    covered.sort();
    report.covered = covered.iter().map(|c| target.display(c)).collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::finite_field;
    use crate::series::{parse_series, RationalCoeffs, TableCoeffs};

    fn gf(p: usize) -> Arc<TableCoeffs> {
        Arc::new(TableCoeffs::new(finite_field(p as u32, 1).unwrap()).unwrap())
    }

    #[test]
    fn leading_data() {
        let r = gf(3);
        let p = parse_series(
            r.clone(),
            OrderedIndex::Integers,
            Orientation::Descending,
            "2*t^5 + t^2 + 1",
        )
        .unwrap();
        assert_eq!(
            quotient_class(&p, QuotientMode::Field).unwrap(),
            SymElem::unit(2, IndexElem::Int(5))
        );
        let x3 = parse_series(r, OrderedIndex::Integers, Orientation::Descending, "t^3").unwrap();
        assert_eq!(
            quotient_class(&x3, QuotientMode::Krasner).unwrap(),
            SymElem::unit(1, IndexElem::Int(3))
        );
        let q = parse_series(
            Arc::new(RationalCoeffs),
            OrderedIndex::Rationals,
            Orientation::Descending,
            "-1*t^2 + 3*t",
        )
        .unwrap();
        assert_eq!(
            quotient_class(&q, QuotientMode::Sign).unwrap(),
            SymElem::unit(2, IndexElem::rat(2, 1))
        );
        let asc = parse_series(gf(2), OrderedIndex::Integers, Orientation::Ascending, "t").unwrap();
        assert!(quotient_class(&asc, QuotientMode::Krasner).is_err());
    }

    #[test]
    fn krasner_quotient_of_gf2_is_refused() {
        let x = SymElem::unit(1, IndexElem::Int(0));
        let r = quotient_sample_check(
            gf(2),
            &OrderedIndex::Integers,
            QuotientMode::Krasner,
            &x,
            &x,
            10,
            10,
            0,
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
        let r = quotient_sample_check(
            gf(3),
            &OrderedIndex::Integers,
            QuotientMode::Krasner,
            &x,
            &x,
            200,
            10,
            0,
        )
        .unwrap();
        assert!(r.passed() && r.coverage() == 1.0, "{r:?}");
    }

    #[test]
    fn cancelling_sums_fall_into_the_downset() {
        let x = SymElem::unit(1, IndexElem::Int(0));
        let y = SymElem::unit(2, IndexElem::Int(0));
        let rep = quotient_sample_check(
            gf(3),
            &OrderedIndex::Integers,
            QuotientMode::Field,
            &x,
            &y,
            200,
            10,
            7,
        )
        .unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.finite_expected, 0);
        assert_eq!(rep.downset_hits + rep.inconclusive, 200);
    }

    #[test]
    fn equal_leading_data_give_a_singleton() {
        let x = SymElem::unit(1, IndexElem::Int(0));
        let rep = quotient_sample_check(
            gf(3),
            &OrderedIndex::Integers,
            QuotientMode::Field,
            &x,
            &x,
            200,
            10,
            1,
        )
        .unwrap();
        assert!(rep.passed());
        assert_eq!(rep.covered, vec!["(2,0)".to_string()]);
        assert_eq!(rep.downset_hits, 0);
    }

    #[test]
    fn zero_summand() {
        let y = SymElem::unit(1, IndexElem::rat(1, 2));
        let rep = quotient_sample_check(
            Arc::new(RationalCoeffs),
            &OrderedIndex::Rationals,
            QuotientMode::Sign,
            &SymElem::Zero,
            &y,
            50,
            10,
            3,
        )
        .unwrap();
        assert!(rep.passed());
        assert_eq!(rep.coverage(), 1.0);
    }
}
