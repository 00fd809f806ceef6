//! Isomorphism testing, canonical forms, and exhaustive enumeration of small
//! hypergroups, hyperfields and stringent hyperrings.

mod enumerate;

pub use enumerate::{
    enumerate_hyperfields, enumerate_hypergroups, enumerate_stringent_hyperrings, HyperfieldFilter,
    HypergroupFilter,
};

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::kernel::{is_homomorphism, ElemSet, FiniteHyperStructure};

/// Colour of an element: `(role, hash)` where role is 0 for zero, 1 for the
/// multiplicative identity, 2 otherwise. Colours are isomorphism invariant.
type Colour = (u8, u64);

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Iterated colour refinement over the addition and multiplication tables.
fn colours(t: &FiniteHyperStructure) -> Vec<Colour> {
    let n = t.n();
    let role = |x: usize| -> u8 {
        if x == 0 {
            0
        } else if t.has_mul() && t.one() == Some(x) {
            1
        } else {
            2
        }
    };
    let mut col: Vec<Colour> = (0..n)
        .map(|x| {
            let xx = t.add(x, x);
            let base = (
                xx.len(),
                xx.contains(0),
                xx.contains(x),
                t.neg(x) == Some(x),
                t.has_mul()
                    .then(|| (0..n).filter(|&y| t.mul(x, y) == 0).count()),
            );
            (role(x), hash_of(&base))
        })
        .collect();
    let mut classes = distinct(&col);
    loop {
        let next: Vec<Colour> = (0..n)
            .map(|x| {
                let mut row: Vec<(Colour, Vec<Colour>, Vec<Colour>, Option<(Colour, Colour)>)> = (0
                    ..n)
                    .map(|y| {
                        let mut fwd: Vec<Colour> = t.add(x, y).iter().map(|z| col[z]).collect();
                        let mut back: Vec<Colour> = t.add(y, x).iter().map(|z| col[z]).collect();
                        fwd.sort_unstable();
                        back.sort_unstable();
                        let m = t.has_mul().then(|| (col[t.mul(x, y)], col[t.mul(y, x)]));
                        (col[y], fwd, back, m)
                    })
                    .collect();
                row.sort_unstable();
                (col[x].0, hash_of(&(col[x], row)))
            })
            .collect();
        let c = distinct(&next);
        col = next;
        if c == classes {
            return col;
        }
        classes = c;
    }
}

fn distinct(col: &[Colour]) -> usize {
    let mut v = col.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Search for an isomorphism `a → b`, returned as `f[x]`. The map fixes 0,
/// sends one to one when both structures are multiplicative, and is verified
/// with [`is_homomorphism`] in both directions before being returned.
pub fn find_isomorphism(a: &FiniteHyperStructure, b: &FiniteHyperStructure) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.has_mul() != b.has_mul() {
        return None;
    }
    let (ca, cb) = (colours(a), colours(b));
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    // Assign the most constrained elements first.
    let class_size = |c: &Colour| ca.iter().filter(|d| *d == c).count();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&x| (class_size(&ca[x]), ca[x]));

    let mut f = vec![usize::MAX; n];
    let mut used = ElemSet::singleton(0);
    f[0] = 0;
    let mut search = Search {
        a,
        b,
        ca: &ca,
        cb: &cb,
        order: &order,
    };
    if search.extend(0, &mut f, &mut used) {
        let inv = invert(&f);
        let fwd = is_homomorphism(&f, a, b).map(|r| r.0).unwrap_or(false);
        let back = is_homomorphism(&inv, b, a).map(|r| r.0).unwrap_or(false);
        if fwd && back {
            return Some(f);
        }
    }
    None
}

fn invert(f: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; f.len()];
    for (x, &y) in f.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

struct Search<'a> {
    a: &'a FiniteHyperStructure,
    b: &'a FiniteHyperStructure,
    ca: &'a [Colour],
    cb: &'a [Colour],
    order: &'a [usize],
}

impl Search<'_> {
    fn extend(&mut self, k: usize, f: &mut [usize], used: &mut ElemSet) -> bool {
        if k == self.order.len() {
            return true;
        }
        let x = self.order[k];
        for y in 1..self.b.n() {
            if used.contains(y) || self.cb[y] != self.ca[x] {
                continue;
            }
            f[x] = y;
            if self.consistent(x, f, *used) {
                used.insert(y);
                if self.extend(k + 1, f, used) {
                    return true;
                }
                used.remove(y);
            }
            f[x] = usize::MAX;
        }
        false
    }

    /// Check every table entry among assigned elements that involves `x`.
    fn consistent(&self, x: usize, f: &[usize], used: ElemSet) -> bool {
        let (a, b) = (self.a, self.b);
        let image = used.with(f[x]);
        let assigned: Vec<usize> = (0..a.n()).filter(|&y| f[y] != usize::MAX).collect();
        let sum_ok = |s: ElemSet, t: ElemSet| {
            if s.len() != t.len() {
                return false;
            }
            let mut mapped = ElemSet::EMPTY;
            for z in s {
                if f[z] != usize::MAX {
                    mapped.insert(f[z]);
                }
            }
            mapped == t.intersection(image)
        };
        for &y in &assigned {
            if !sum_ok(a.add(x, y), b.add(f[x], f[y])) || !sum_ok(a.add(y, x), b.add(f[y], f[x])) {
                return false;
            }
            if a.has_mul() {
                for (p, q) in [(x, y), (y, x)] {
                    let m = a.mul(p, q);
                    let target = b.mul(f[p], f[q]);
                    let ok = if f[m] != usize::MAX {
                        f[m] == target
                    } else {
                        !image.contains(target)
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A structure relabelled to the lexicographically least serialization
/// among all relabellings that respect the refined colour classes. Two
/// structures are isomorphic iff their canonical forms are equal.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    code: Vec<u64>,
    table: FiniteHyperStructure,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

impl CanonicalForm {
    pub fn code(&self) -> &[u64] {
        &self.code
    }

    /// The relabelled structure (index 0 is zero; the multiplicative
    /// identity, if any, is index 1).
    pub fn structure(&self) -> &FiniteHyperStructure {
        &self.table
    }

    pub fn into_structure(self) -> FiniteHyperStructure {
        self.table
    }
}

fn serialize(t: &FiniteHyperStructure, old_of: &[usize], new_of: &[usize]) -> Vec<u64> {
    let n = t.n();
    let mut code = Vec::with_capacity(2 + 2 * n * n);
    code.push(n as u64);
    code.push(t.has_mul() as u64);
    for &x in old_of {
        for &y in old_of {
            code.push(t.add(x, y).map(|z| new_of[z]).bits());
        }
    }
    if t.has_mul() {
        for &x in old_of {
            for &y in old_of {
                code.push(new_of[t.mul(x, y)] as u64);
            }
        }
    }
    code
}

/// Canonical form by exhaustive search over colour-respecting relabellings.
pub fn canonical_form(t: &FiniteHyperStructure) -> CanonicalForm {
    let n = t.n();
    let col = colours(t);
    let mut sorted: Vec<usize> = (0..n).collect();
    sorted.sort_by_key(|&x| (col[x], x));
    // Blocks of equal colour, as ranges of positions.
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || col[sorted[i]] != col[sorted[start]] {
            blocks.push((start, i));
            start = i;
        }
    }
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    let mut old_of = sorted.clone();
    permute_blocks(&blocks, 0, &mut old_of, &mut |old_of| {
        let new_of = invert(old_of);
        let code = serialize(t, old_of, &new_of);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, new_of));
        }
    });
    let (code, new_of) = best.expect("at least one labelling");
    let table = t.relabel(&new_of).expect("colour classes keep zero first");
    CanonicalForm { code, table }
}

fn permute_blocks(
    blocks: &[(usize, usize)],
    k: usize,
    order: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if k == blocks.len() {
        visit(order);
        return;
    }
    let (lo, hi) = blocks[k];
    heap_permute(lo, hi - lo, order, &mut |o| {
        permute_blocks(blocks, k + 1, o, visit)
    });
}

/// Heap's algorithm on `order[lo..lo + k]`.
fn heap_permute(
    lo: usize,
    k: usize,
    order: &mut Vec<usize>,
    visit: &mut dyn FnMut(&mut Vec<usize>),
) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(lo, k - 1, order, visit);
        if k.is_multiple_of(2) {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
    heap_permute(lo, k - 1, order, visit);
}
