use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::FiniteHyperStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HyperringVerdict {
    /// All sums are singletons.
    Ring,
    /// Every nonzero element is a unit.
    Hyperfield,
}

/// Classify a stringent skew hyperring as a skew ring or a stringent skew
/// hyperfield. Anything else is reported as a [`Error::TheoremViolation`]
/// naming a nonzero non-unit.
pub fn reduce_hyperring(r: &FiniteHyperStructure) -> Result<HyperringVerdict> {
    if let Some(v) = r.check_skew_hyperring()?.violations.first() {
        return Err(Error::Precondition(format!(
            "not a skew hyperring: {:?} at {:?}",
            v.axiom, v.witness
        )));
    }
    if !r.is_stringent().0 {
        return Err(Error::Precondition("not stringent".into()));
    }
    if r.is_single_valued() {
        return Ok(HyperringVerdict::Ring);
    }
    let one = r.one().expect("hyperring");
    let n = r.n();
    for x in 1..n {
        if !(1..n).any(|y| r.mul(x, y) == one && r.mul(y, x) == one) {
            return Err(Error::TheoremViolation(format!(
                "{} is a nonzero non-unit in a stringent hyperring with multivalued addition",
                r.name(x)
            )));
        }
    }
    if !r.check_hyperfield()?.passed {
        return Err(Error::TheoremViolation(
            "units everywhere but not a hyperfield".into(),
        ));
    }
    Ok(HyperringVerdict::Hyperfield)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{krasner, sign};
    use crate::constructions::wedge_sum;
    use crate::kernel::ElemSet;

    fn z4() -> FiniteHyperStructure {
        let add = FiniteHyperStructure::from_fn(4, |x, y| ElemSet::singleton((x + y) % 4)).unwrap();
        add.with_multiplication((0..16).map(|i| (i / 4) * (i % 4) % 4).collect(), 1)
            .unwrap()
    }

    #[test]
    fn verdicts() {
        assert_eq!(reduce_hyperring(&z4()).unwrap(), HyperringVerdict::Ring);
        assert_eq!(
            reduce_hyperring(&sign()).unwrap(),
            HyperringVerdict::Hyperfield
        );
        assert_eq!(
            reduce_hyperring(&krasner()).unwrap(),
            HyperringVerdict::Hyperfield
        );
    }

    /// `{0, a, 1}` with the wedge `𝕂 ∨ 𝕂` as addition (`a` in the lower
    /// layer) and `a² = 0` is a stringent commutative hyperring with
    /// multivalued addition in which `a` is not a unit.
    #[test]
    fn nilpotent_in_a_wedge_of_krasner_layers() {
        let add = wedge_sum(&[krasner().additive(), krasner().additive()]).unwrap();
        let r = add
            .with_multiplication(vec![0, 0, 0, 0, 0, 1, 0, 1, 2], 2)
            .unwrap();
        assert!(r.check_skew_hyperring().unwrap().passed);
        assert!(r.is_stringent().0);
        assert!(matches!(
            reduce_hyperring(&r),
            Err(Error::TheoremViolation(_))
        ));
    }
}
