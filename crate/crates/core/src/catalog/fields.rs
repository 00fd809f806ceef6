use crate::error::{invalid, Error, Result};
use crate::kernel::{ElemSet, FiniteHyperStructure, MAX_CARRIER};

/// Monic irreducible moduli for the extension fields we build, lowest
/// coefficient first, leading `1` omitted.
fn modulus(p: u32, k: u32) -> Option<&'static [u32]> {
    Some(match (p, k) {
        (2, 2) => &[1, 1],       // x^2 + x + 1
        (2, 3) => &[1, 1, 0],    // x^3 + x + 1
        (2, 4) => &[1, 1, 0, 0], // x^4 + x + 1
        (2, 5) => &[1, 0, 1, 0, 0],
        (3, 2) => &[1, 0], // x^2 + 1
        (3, 3) => &[1, 2, 0],
        (5, 2) => &[2, 0],
        (7, 2) => &[1, 0],
        _ => return None,
    })
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Arithmetic in `GF(p^k)` on base-`p` coefficient encodings: the element
/// `c_0 + c_1 x + ..` has index `c_0 + c_1 p + ..`.
#[derive(Debug, Clone)]
pub(crate) struct FieldArith {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

impl FieldArith {
    pub(crate) fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(invalid("field degree must be positive"));
        }
        let q = (p as usize).checked_pow(k).unwrap_or(usize::MAX);
        if q > MAX_CARRIER {
            return Err(Error::Capacity {
                what: format!("GF({p}^{k})"),
                needed: q,
                limit: MAX_CARRIER,
            });
        }
        let modulus = if k == 1 {
            Vec::new()
        } else {
            modulus(p, k)
                .ok_or_else(|| Error::NotFound(format!("no modulus stored for GF({p}^{k})")))?
                .to_vec()
        };
        Ok(FieldArith { p, k, modulus })
    }

    pub(crate) fn order(&self) -> usize {
        (self.p as usize).pow(self.k)
    }

    fn digits(&self, mut x: usize) -> Vec<u32> {
        let p = self.p as usize;
        (0..self.k)
            .map(|_| {
                let d = (x % p) as u32;
                x /= p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> usize {
        digits
            .iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p as usize + d as usize)
    }

    pub(crate) fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<u32> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    pub(crate) fn mul(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let k = self.k as usize;
        let p = self.p;
        let mut prod = vec![0u32; 2 * k];
        for (i, &u) in a.iter().enumerate() {
            for (j, &v) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % p;
            }
        }
        // x^k = -(modulus) reduces the high coefficients.
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let sub = (c * m) % p;
                prod[deg - k + i] = (prod[deg - k + i] + p - sub) % p;
            }
        }
        self.encode(&prod[..k])
    }

    pub(crate) fn name(&self, x: usize) -> String {
        if self.k == 1 {
            return x.to_string();
        }
        let d = self.digits(x);
        let mut terms = Vec::new();
        for (deg, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && deg > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match deg {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{deg}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// The finite field `GF(p^k)` as a (single-valued) hyperfield table.
///
/// Elements are indexed by their base-`p` coefficient vector; `1` has
/// index 1 and `x` has index `p`. Extension fields use the moduli
/// `x^2+x+1` (GF(4)), `x^3+x+1` (GF(8)), `x^2+1` (GF(9)) and a few more up
/// to order 64.
pub fn finite_field(p: u32, k: u32) -> Result<FiniteHyperStructure> {
    let f = FieldArith::new(p, k)?;
    let q = f.order();
    let names = (0..q).map(|x| f.name(x)).collect();
    let add = (0..q * q)
        .map(|i| ElemSet::singleton(f.add(i / q, i % q)))
        .collect();
    let mul = (0..q * q).map(|i| f.mul(i / q, i % q)).collect();
    FiniteHyperStructure::new(names, add)?.with_multiplication(mul, 1)
}

/// Finite field of order `q`.
pub fn finite_field_of_order(q: usize) -> Result<FiniteHyperStructure> {
    for p in 2..=q as u32 {
        if !is_prime(p) {
            continue;
        }
        let mut k = 0;
        let mut r = q;
        while r.is_multiple_of(p as usize) {
            r /= p as usize;
            k += 1;
        }
        if k > 0 {
            if r == 1 {
                return finite_field(p, k);
            }
            break;
        }
    }
    Err(Error::NotFound(format!("there is no field of order {q}")))
}

/// The Krasner hyperfield `{0, 1}` with `1 ⊞ 1 = {0, 1}`.
pub fn krasner() -> FiniteHyperStructure {
    let names = vec!["0".to_string(), "1".to_string()];
    let add = vec![
        ElemSet::singleton(0),
        ElemSet::singleton(1),
        ElemSet::singleton(1),
        ElemSet::from_indices([0, 1]),
    ];
    FiniteHyperStructure::new(names, add)
        .and_then(|t| t.with_multiplication(vec![0, 0, 0, 1], 1))
        .expect("static table")
}

/// The sign hyperfield `{0, 1, -1}` (indices 0, 1, 2) with
/// `1 ⊞ -1 = {0, 1, -1}`.
pub fn sign() -> FiniteHyperStructure {
    let names = vec!["0".to_string(), "1".to_string(), "-1".to_string()];
    let s = ElemSet::singleton;
    let all = ElemSet::full(3);
    let add = vec![s(0), s(1), s(2), s(1), s(1), all, s(2), all, s(2)];
    let mul = vec![0, 0, 0, 0, 1, 2, 0, 2, 1];
    FiniteHyperStructure::new(names, add)
        .and_then(|t| t.with_multiplication(mul, 1))
        .expect("static table")
}
