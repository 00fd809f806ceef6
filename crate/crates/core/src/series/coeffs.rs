use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{Action, SymbolicHyperfield};
use crate::error::{Error, Result};
use crate::kernel::FiniteHyperStructure;
use crate::ordered::{IndexElem, OrderedIndex};

/// A coefficient field for [`super::LazySeries`], optionally with an action
/// of the exponent group by field automorphisms.
pub trait Coefficients: Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// `σ_g(a)`.
    fn act(&self, _g: &IndexElem, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }

    fn has_action(&self) -> bool {
        false
    }

    /// A random element, possibly zero.
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Sign in an ordered field: `1`, `-1`, or `0` for zero.
    fn sign(&self, _a: &Self::Elem) -> Option<i8> {
        None
    }

    /// Index of `a` in the finite base field, when there is one.
    fn field_index(&self, _a: &Self::Elem) -> Option<usize> {
        None
    }

    fn from_field_index(&self, _u: usize) -> Option<Self::Elem> {
        None
    }

    /// The layered hyperfield `M ⋊ G` whose elements are leading data of
    /// series with these coefficients.
    fn field_target(&self, group: &OrderedIndex) -> Result<SymbolicHyperfield> {
        Err(Error::Precondition(format!(
            "coefficients over {group} do not come from a finite field"
        )))
    }

    fn display(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Option<Self::Elem>;
}

/// A finite field given by its tables, with the action of a layered
/// hyperfield when built with [`TableCoeffs::layered`].
#[derive(Debug, Clone)]
pub struct TableCoeffs {
    field: FiniteHyperStructure,
    inverse: Vec<usize>,
    layered: Option<SymbolicHyperfield>,
}

impl TableCoeffs {
    /// Fails unless `field` is a field (a hyperfield with single-valued
    /// addition).
    pub fn new(field: FiniteHyperStructure) -> Result<TableCoeffs> {
        if !field.has_mul() || !field.is_single_valued() || !field.check_hyperfield()?.passed {
            return Err(Error::Precondition(
                "series coefficients must form a field".into(),
            ));
        }
        let n = field.n();
        let mut inverse = vec![0; n];
        for x in 1..n {
            inverse[x] = (1..n).find(|&y| field.mul(x, y) == 1).expect("hyperfield");
        }
        Ok(TableCoeffs {
            field,
            inverse,
            layered: None,
        })
    }

    /// Coefficients `A_g` of a layered hyperfield over a field, multiplied
    /// with its twist.
    pub fn layered(f: &SymbolicHyperfield) -> Result<TableCoeffs> {
        let mut t = TableCoeffs::new(f.base().clone())?;
        t.layered = Some(f.clone());
        Ok(t)
    }

    pub fn field(&self) -> &FiniteHyperStructure {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.field.n()
    }
}

impl Coefficients for TableCoeffs {
    type Elem = usize;

    fn zero(&self) -> usize {
        0
    }

    fn one(&self) -> usize {
        self.field.one().expect("field")
    }

    fn add(&self, a: &usize, b: &usize) -> usize {
        self.field.add(*a, *b).single().expect("single-valued")
    }

    fn neg(&self, a: &usize) -> usize {
        self.field.neg(*a).expect("field")
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.field.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> Option<usize> {
        (*a != 0).then(|| self.inverse[*a])
    }

    fn act(&self, g: &IndexElem, a: &usize) -> usize {
        match &self.layered {
            Some(f) => f.act(g, *a),
            None => *a,
        }
    }

    fn has_action(&self) -> bool {
        matches!(&self.layered, Some(f) if *f.action() != Action::Trivial)
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.field.n())
    }

    fn field_index(&self, a: &usize) -> Option<usize> {
        Some(*a)
    }

    fn from_field_index(&self, u: usize) -> Option<usize> {
        (u < self.field.n()).then_some(u)
    }

    fn field_target(&self, group: &OrderedIndex) -> Result<SymbolicHyperfield> {
        match &self.layered {
            Some(f) if f.group() == group => Ok(f.clone()),
            Some(f) => Err(Error::InvalidArgument(format!(
                "coefficients act through {}, not {group}",
                f.group()
            ))),
            None => SymbolicHyperfield::new(
                format!("layer(GF({}),{group})", self.field.n()),
                self.field.clone(),
                group.clone(),
                Action::Trivial,
            ),
        }
    }

    fn display(&self, a: &usize) -> String {
        self.field.name(*a).to_string()
    }

    fn parse(&self, s: &str) -> Option<usize> {
        self.field.index_of(s)
    }
}

/// The ordered field `ℚ` with exact arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalCoeffs;

impl Coefficients for RationalCoeffs {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> BigRational {
        let n: i64 = rng.gen_range(-5..=5);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sign(&self, a: &BigRational) -> Option<i8> {
        Some(if a.is_zero() {
            0
        } else if a.is_positive() {
            1
        } else {
            -1
        })
    }

    fn display(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Option<BigRational> {
        s.parse().ok()
    }
}
