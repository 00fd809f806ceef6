use std::collections::HashSet;

use rayon::prelude::*;

use super::{canonical_form, CanonicalForm};
use crate::error::{invalid, Error, Result};
use crate::kernel::{ElemSet, FiniteHyperStructure};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HypergroupFilter {
    pub stringent: bool,
    pub commutative: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HyperfieldFilter {
    pub stringent: bool,
    pub dd: bool,
}

const MAX_HYPERGROUP: usize = 6;
const MAX_HYPERFIELD: usize = 7;
const MAX_HYPERRING: usize = 5;

fn too_big(what: &str, n: usize, limit: usize) -> Error {
    Error::Capacity {
        what: format!("{what} enumeration"),
        needed: n,
        limit,
    }
}

/// Orbits of a set of points `0..count` under the group generated by `gens`.
fn orbits(count: usize, gens: &[&dyn Fn(usize) -> usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; count];
    let mut out = Vec::new();
    for start in 0..count {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for g in gens {
                let q = g(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Involutions on `1..=m` up to conjugacy: `f` fixed points followed by
/// adjacent transposed pairs.
fn involutions(m: usize) -> Vec<Vec<usize>> {
    (0..=m)
        .filter(|f| (m - f).is_multiple_of(2))
        .map(|f| {
            let mut neg: Vec<usize> = (0..=m).collect();
            let mut x = f + 1;
            while x < m {
                neg[x] = x + 1;
                neg[x + 1] = x;
                x += 2;
            }
            neg
        })
        .collect()
}

/// All hypergroups on `n ≤ 6` elements up to isomorphism.
///
/// Up to isomorphism the hyperinverse is one of the standard involutions.
/// The relation `z ∈ x ⊞ y` on nonzero triples must be closed under
/// reversibility and invertibility of sums, so it is a union of orbits of
/// the group those rules generate; the search chooses orbits with pruning
/// on the size of each sum, and checks the full axioms at the leaves.
pub fn enumerate_hypergroups(n: usize, filter: HypergroupFilter) -> Result<Vec<CanonicalForm>> {
    if n == 0 {
        return Err(invalid("carrier size must be positive"));
    }
    if n > MAX_HYPERGROUP {
        return Err(too_big("hypergroup", n, MAX_HYPERGROUP));
    }
    let m = n - 1;
    let mut tasks = Vec::new();
    for neg in involutions(m) {
        let plan = TriplePlan::new(m, &neg, filter);
        let depth = plan.orbits.len().min(6);
        for prefix in 0..(1u32 << depth) {
            tasks.push((plan.clone(), depth, prefix));
        }
    }
    let found: Vec<CanonicalForm> = tasks
        .into_par_iter()
        .flat_map_iter(|(plan, depth, prefix)| plan.run(depth, prefix))
        .collect();
    Ok(dedupe(found))
}

fn dedupe(found: Vec<CanonicalForm>) -> Vec<CanonicalForm> {
    let mut set: HashSet<CanonicalForm> = HashSet::new();
    let mut out: Vec<CanonicalForm> = found
        .into_iter()
        .filter(|c| set.insert(c.clone()))
        .collect();
    out.sort();
    out
}

#[derive(Clone)]
struct TriplePlan {
    m: usize,
    neg: Vec<usize>,
    filter: HypergroupFilter,
    orbits: Vec<Vec<usize>>,
    /// For each orbit, the (cell, count) contributions.
    cells: Vec<Vec<(usize, u32)>>,
}

impl TriplePlan {
    fn new(m: usize, neg: &[usize], filter: HypergroupFilter) -> TriplePlan {
        let enc = |x: usize, y: usize, z: usize| ((x - 1) * m + (y - 1)) * m + (z - 1);
        let dec = |t: usize| (t / (m * m) + 1, (t / m) % m + 1, t % m + 1);
        let count = m * m * m;
        // z ∈ x ⊞ y implies x ∈ z ⊞ -y, y ∈ -x ⊞ z and -z ∈ -y ⊞ -x.
        let r1 = |t: usize| {
            let (x, y, z) = dec(t);
            enc(z, neg[y], x)
        };
        let r2 = |t: usize| {
            let (x, y, z) = dec(t);
            enc(neg[x], z, y)
        };
        let r3 = |t: usize| {
            let (x, y, z) = dec(t);
            enc(neg[y], neg[x], neg[z])
        };
        let sw = |t: usize| {
            let (x, y, z) = dec(t);
            enc(y, x, z)
        };
        let mut gens: Vec<&dyn Fn(usize) -> usize> = vec![&r1, &r2, &r3];
        if filter.commutative {
            gens.push(&sw);
        }
        let orbits = if m == 0 {
            Vec::new()
        } else {
            orbits(count, &gens)
        };
        let cells = orbits
            .iter()
            .map(|o| {
                let mut c: Vec<(usize, u32)> = Vec::new();
                for &t in o {
                    let cell = t / m;
                    match c.iter_mut().find(|(k, _)| *k == cell) {
                        Some((_, k)) => *k += 1,
                        None => c.push((cell, 1)),
                    }
                }
                c
            })
            .collect();
        TriplePlan {
            m,
            neg: neg.to_vec(),
            filter,
            orbits,
            cells,
        }
    }

    fn cancels(&self, cell: usize) -> bool {
        let (x, y) = (cell / self.m + 1, cell % self.m + 1);
        self.neg[x] == y
    }

    /// Explore all completions of the orbit choices fixed by `prefix` on the
    /// first `depth` orbits.
    fn run(&self, depth: usize, prefix: u32) -> Vec<CanonicalForm> {
        let cells = self.m * self.m;
        let mut included = vec![0u32; cells];
        let mut remaining = vec![0u32; cells];
        for c in &self.cells {
            for &(cell, k) in c {
                remaining[cell] += k;
            }
        }
        let mut chosen = vec![false; self.orbits.len()];
        let mut out = Vec::new();
        let mut ok = true;
        for i in 0..depth {
            let take = prefix >> i & 1 == 1;
            ok &= self.decide(i, take, &mut included, &mut remaining, &mut chosen);
        }
        if ok {
            self.search(depth, &mut included, &mut remaining, &mut chosen, &mut out);
        }
        out
    }

    fn feasible(&self, cell: usize, included: &[u32], remaining: &[u32]) -> bool {
        if self.cancels(cell) {
            return true;
        }
        let inc = included[cell];
        inc + remaining[cell] >= 1 && !(self.filter.stringent && inc > 1)
    }

    /// Apply a decision; returns whether all touched cells stay feasible.
    fn decide(
        &self,
        i: usize,
        take: bool,
        included: &mut [u32],
        remaining: &mut [u32],
        chosen: &mut [bool],
    ) -> bool {
        chosen[i] = take;
        let mut ok = true;
        for &(cell, k) in &self.cells[i] {
            remaining[cell] -= k;
            if take {
                included[cell] += k;
            }
            ok &= self.feasible(cell, included, remaining);
        }
        ok
    }

    fn undo(&self, i: usize, take: bool, included: &mut [u32], remaining: &mut [u32]) {
        for &(cell, k) in &self.cells[i] {
            remaining[cell] += k;
            if take {
                included[cell] -= k;
            }
        }
    }

    fn search(
        &self,
        i: usize,
        included: &mut [u32],
        remaining: &mut [u32],
        chosen: &mut [bool],
        out: &mut Vec<CanonicalForm>,
    ) {
        if i == self.orbits.len() {
            if let Some(t) = self.build(chosen) {
                out.push(canonical_form(&t));
            }
            return;
        }
        for take in [false, true] {
            if self.decide(i, take, included, remaining, chosen) {
                self.search(i + 1, included, remaining, chosen, out);
            }
            self.undo(i, take, included, remaining);
        }
    }

    fn build(&self, chosen: &[bool]) -> Option<FiniteHyperStructure> {
        let m = self.m;
        let n = m + 1;
        let mut add = vec![ElemSet::EMPTY; n * n];
        for x in 0..n {
            add[x] = ElemSet::singleton(x);
            add[x * n] = ElemSet::singleton(x);
        }
        for x in 1..n {
            add[x * n + self.neg[x]].insert(0);
        }
        for (o, &take) in self.orbits.iter().zip(chosen) {
            if take {
                for &t in o {
                    let (x, y, z) = (t / (m * m) + 1, (t / m) % m + 1, t % m + 1);
                    add[x * n + y].insert(z);
                }
            }
        }
        let t = FiniteHyperStructure::from_fn(n, |x, y| add[x * n + y]).ok()?;
        if !t.check_hypergroup().passed {
            return None;
        }
        if self.filter.commutative && !t.is_commutative() {
            return None;
        }
        if self.filter.stringent && !t.is_stringent().0 {
            return None;
        }
        Some(t)
    }
}

/// Finite abelian groups of order `m`, each as a list of cyclic factor
/// orders.
fn abelian_groups(m: usize) -> Vec<Vec<usize>> {
    fn partitions(k: usize, max: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in (1..=k.min(max)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut per_prime: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut r = m;
    let mut p = 2;
    while r > 1 {
        let mut k = 0;
        while r.is_multiple_of(p) {
            r /= p;
            k += 1;
        }
        if k > 0 {
            per_prime.push(
                partitions(k, k)
                    .into_iter()
                    .map(|parts| parts.into_iter().map(|e| p.pow(e as u32)).collect())
                    .collect(),
            );
        }
        p += 1;
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new()];
    for choices in per_prime {
        groups = groups
            .into_iter()
            .flat_map(|g| {
                choices.iter().map(move |c| {
                    let mut h = g.clone();
                    h.extend(c);
                    h
                })
            })
            .collect();
    }
    groups
}

/// A finite abelian group on indices `1..=m` with identity 1.
struct Units {
    m: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl Units {
    fn new(factors: &[usize]) -> Units {
        let m: usize = factors.iter().product();
        let digits = |mut i: usize| {
            factors
                .iter()
                .map(|&f| {
                    let d = i % f;
                    i /= f;
                    d
                })
                .collect::<Vec<_>>()
        };
        let encode = |d: &[usize]| {
            d.iter()
                .zip(factors)
                .rev()
                .fold(0, |acc, (&x, &f)| acc * f + x)
        };
        let mut mul = vec![0; (m + 1) * (m + 1)];
        let mut inv = vec![0; m + 1];
        for a in 0..m {
            let da = digits(a);
            for b in 0..m {
                let db = digits(b);
                let s: Vec<usize> = da
                    .iter()
                    .zip(&db)
                    .zip(factors)
                    .map(|((x, y), f)| (x + y) % f)
                    .collect();
                mul[(a + 1) * (m + 1) + b + 1] = encode(&s) + 1;
            }
            let ia: Vec<usize> = da.iter().zip(factors).map(|(x, f)| (f - x) % f).collect();
            inv[a + 1] = encode(&ia) + 1;
        }
        Units { m, mul, inv }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * (self.m + 1) + b]
    }
}

/// All (commutative) hyperfields on `2 ≤ n ≤ 7` elements up to isomorphism.
///
/// The multiplicative group is abelian of order `n - 1` and `x ⊞ y` is
/// `x (1 ⊞ x⁻¹y)`, so the addition is fixed by `-1` and the sets
/// `S_z = 1 ⊞ z`. The relation `w ∈ S_z` must be closed under commutativity
/// and reversibility, which partitions the pairs `(z, w)` into orbits; every
/// union of orbits is built and checked.
pub fn enumerate_hyperfields(n: usize, filter: HyperfieldFilter) -> Result<Vec<CanonicalForm>> {
    if n < 2 {
        return Err(invalid("a hyperfield has at least two elements"));
    }
    if n > MAX_HYPERFIELD {
        return Err(too_big("hyperfield", n, MAX_HYPERFIELD));
    }
    let m = n - 1;
    let mut tasks = Vec::new();
    for factors in abelian_groups(m) {
        let units = Units::new(&factors);
        for eps in 1..=m {
            if units.mul(eps, eps) == 1 {
                tasks.push((factors.clone(), eps));
            }
        }
    }
    let found: Vec<CanonicalForm> = tasks
        .into_par_iter()
        .flat_map_iter(|(factors, eps)| hyperfields_for(&Units::new(&factors), eps, filter))
        .collect();
    Ok(dedupe(found))
}

fn hyperfields_for(h: &Units, eps: usize, filter: HyperfieldFilter) -> Vec<CanonicalForm> {
    let m = h.m;
    let n = m + 1;
    let enc = |z: usize, w: usize| (z - 1) * m + (w - 1);
    let dec = |t: usize| (t / m + 1, t % m + 1);
    // w ∈ 1 ⊞ z  ⇒  z⁻¹w ∈ 1 ⊞ z⁻¹, w⁻¹ ∈ 1 ⊞ ε w⁻¹ z, εz ∈ 1 ⊞ εw.
    let comm = |t: usize| {
        let (z, w) = dec(t);
        let zi = h.inv[z];
        enc(zi, h.mul(zi, w))
    };
    let rev1 = |t: usize| {
        let (z, w) = dec(t);
        let wi = h.inv[w];
        enc(h.mul(eps, h.mul(wi, z)), wi)
    };
    let rev2 = |t: usize| {
        let (z, w) = dec(t);
        enc(h.mul(eps, w), h.mul(eps, z))
    };
    let gens: Vec<&dyn Fn(usize) -> usize> = vec![&comm, &rev1, &rev2];
    let orbs = orbits(m * m, &gens);
    let mut mul = vec![0; n * n];
    for a in 1..n {
        for b in 1..n {
            mul[a * n + b] = h.mul(a, b);
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << orbs.len()) {
        let mut s = vec![ElemSet::EMPTY; n];
        for (i, o) in orbs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for &t in o {
                    let (z, w) = dec(t);
                    s[z].insert(w);
                }
            }
        }
        s[eps].insert(0);
        if (1..n).any(|z| s[z].is_empty()) {
            continue;
        }
        let add = |x: usize, y: usize| -> ElemSet {
            if x == 0 {
                return ElemSet::singleton(y);
            }
            if y == 0 {
                return ElemSet::singleton(x);
            }
            let z = h.mul(h.inv[x], y);
            s[z].map(|w| if w == 0 { 0 } else { h.mul(x, w) })
        };
        let Ok(t) = FiniteHyperStructure::from_fn(n, add) else {
            continue;
        };
        let Ok(t) = t.with_multiplication(mul.clone(), 1) else {
            continue;
        };
        if !t.check_hyperfield().map(|r| r.passed).unwrap_or(false) {
            continue;
        }
        if filter.stringent && !t.is_stringent().0 {
            continue;
        }
        if filter.dd && !t.is_doubly_distributive().map(|r| r.0).unwrap_or(false) {
            continue;
        }
        out.push(canonical_form(&t));
    }
    out
}

/// All stringent skew hyperrings on `n ≤ 5` elements up to isomorphism.
///
/// Left multiplication by `a` is a strict endomorphism of the additive
/// hypergroup sending the identity to `a`, so each row is drawn from the
/// strict endomorphisms of a stringent commutative hypergroup; the full
/// axioms are checked on every completed table.
pub fn enumerate_stringent_hyperrings(n: usize) -> Result<Vec<CanonicalForm>> {
    if n == 0 {
        return Err(invalid("carrier size must be positive"));
    }
    if n > MAX_HYPERRING {
        return Err(too_big("stringent hyperring", n, MAX_HYPERRING));
    }
    let groups = enumerate_hypergroups(
        n,
        HypergroupFilter {
            stringent: true,
            commutative: true,
        },
    )?;
    let found: Vec<CanonicalForm> = groups
        .into_par_iter()
        .flat_map_iter(|g| rings_over(g.structure()))
        .collect();
    Ok(dedupe(found))
}

fn strict_endomorphisms(t: &FiniteHyperStructure) -> Vec<Vec<usize>> {
    let n = t.n();
    let mut out = Vec::new();
    let mut f = vec![0usize; n];
    loop {
        let ok = (0..n).all(|x| (0..n).all(|y| t.add(x, y).map(|z| f[z]) == t.add(f[x], f[y])));
        if ok {
            out.push(f.clone());
        }
        // Next map with f[0] = 0, odometer over the remaining entries.
        let mut i = 1;
        loop {
            if i == n {
                return out;
            }
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

fn rings_over(add: &FiniteHyperStructure) -> Vec<CanonicalForm> {
    let n = add.n();
    if n == 1 {
        let t = add
            .clone()
            .with_multiplication(vec![0], 0)
            .expect("one element");
        return vec![canonical_form(&t)];
    }
    let endos = strict_endomorphisms(add);
    let mut out = Vec::new();
    for one in 1..n {
        if !endos.iter().any(|f| (0..n).all(|x| f[x] == x)) {
            continue;
        }
        // rows[a] = candidates for left multiplication by a.
        let rows: Vec<Vec<&Vec<usize>>> = (0..n)
            .map(|a| {
                endos
                    .iter()
                    .filter(|f| {
                        if a == 0 {
                            f.iter().all(|&v| v == 0)
                        } else if a == one {
                            (0..n).all(|x| f[x] == x)
                        } else {
                            f[one] == a
                        }
                    })
                    .collect()
            })
            .collect();
        if rows.iter().any(|r| r.is_empty()) {
            continue;
        }
        let mut pick = vec![0usize; n];
        loop {
            let mut mul = Vec::with_capacity(n * n);
            for a in 0..n {
                mul.extend(rows[a][pick[a]].iter().copied());
            }
            if let Ok(t) = add.clone().with_multiplication(mul, one) {
                let ok = t.check_skew_hyperring().map(|r| r.passed).unwrap_or(false);
                if ok && t.is_stringent().0 {
                    out.push(canonical_form(&t));
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                pick[i] += 1;
                if pick[i] < rows[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    out
}
