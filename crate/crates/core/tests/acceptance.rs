//! Acceptance suite, run without the test harness so that its output is
//! always shown. Prints one PASS/FAIL line per criterion, then exits
//! nonzero if any criterion fails other than those listed in
//! `KNOWN_FAILURES`, whose failures must come with a counterexample that the
//! independent oracle below confirms.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use hyperkit::catalog::{
    builtin_symbolic, finite_field_of_order, krasner, sign, SetDescription, SymElem,
    SymbolicHyperfield,
};
use hyperkit::classify::{
    dd_criterion_stringent, dd_criterion_symbolic, decompose_wedge, reduce_hyperring,
    valuation_of_symbolic, BaseTag,
};
use hyperkit::constructions::{
    associated_semiring, closed_form_semiring, compare_with_windowed_closure, product, quotient,
    unit_subgroups, wedge_sum,
};
use hyperkit::isoenum::{
    enumerate_hyperfields, enumerate_hypergroups, enumerate_stringent_hyperrings, find_isomorphism,
    HyperfieldFilter, HypergroupFilter,
};
use hyperkit::kernel::{Axiom, ElemSet, FiniteHyperStructure};
use hyperkit::ordered::{IndexElem, OrderedIndex, Window};
use hyperkit::series::{
    quotient_sample_check, Coefficients, Frontier, LazySeries, Orientation, QuotientMode,
    RationalCoeffs, TableCoeffs,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot be met because the statement they test is false.
/// See `criterion_7` for the counterexample.
const KNOWN_FAILURES: &[u32] = &[7];

const FIELD_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

struct Outcome {
    passed: bool,
    detail: String,
    /// For a known failure: the oracle confirmed the counterexample.
    confirmed_counterexample: bool,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
        confirmed_counterexample: false,
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
        confirmed_counterexample: false,
    }
}

fn verdict(problems: Vec<String>, ok: impl Into<String>) -> Outcome {
    if problems.is_empty() {
        pass(ok)
    } else {
        fail(format!(
            "{} problem(s); first: {}",
            problems.len(),
            problems[0]
        ))
    }
}

/// Brute-force evaluation on plain tables, independent of the kernel's set
/// arithmetic.
mod oracle {
    use super::*;

    pub struct Tables {
        pub n: usize,
        pub add: Vec<Vec<BTreeSet<usize>>>,
        pub mul: Option<Vec<Vec<usize>>>,
    }

    pub fn tables(t: &FiniteHyperStructure) -> Tables {
        let n = t.n();
        Tables {
            n,
            add: (0..n)
                .map(|x| (0..n).map(|y| t.add(x, y).iter().collect()).collect())
                .collect(),
            mul: t.has_mul().then(|| {
                (0..n)
                    .map(|x| (0..n).map(|y| t.mul(x, y)).collect())
                    .collect()
            }),
        }
    }

    impl Tables {
        pub fn sum(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
            let mut out = BTreeSet::new();
            for &x in a {
                for &y in b {
                    out.extend(self.add[x][y].iter().copied());
                }
            }
            out
        }

        pub fn prod(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
            let m = self.mul.as_ref().expect("multiplicative");
            a.iter()
                .flat_map(|&x| b.iter().map(move |&y| m[x][y]))
                .collect()
        }

        pub fn one_set(x: usize) -> BTreeSet<usize> {
            BTreeSet::from([x])
        }

        pub fn non_associative(&self) -> BTreeSet<Vec<usize>> {
            let mut out = BTreeSet::new();
            for a in 0..self.n {
                for b in 0..self.n {
                    for c in 0..self.n {
                        let l = self.sum(&self.add[a][b], &Self::one_set(c));
                        let r = self.sum(&Self::one_set(a), &self.add[b][c]);
                        if l != r {
                            out.insert(vec![a, b, c]);
                        }
                    }
                }
            }
            out
        }

        pub fn without_inverse(&self) -> BTreeSet<Vec<usize>> {
            (0..self.n)
                .filter(|&x| {
                    !(0..self.n).any(|y| self.add[x][y].contains(&0))
                        || !(0..self.n).any(|y| self.add[y][x].contains(&0))
                })
                .map(|x| vec![x])
                .collect()
        }

        pub fn bad_identity(&self) -> BTreeSet<Vec<usize>> {
            (0..self.n)
                .filter(|&x| {
                    self.add[0][x] != Self::one_set(x) || self.add[x][0] != Self::one_set(x)
                })
                .map(|x| vec![x])
                .collect()
        }

        pub fn not_left_distributive(&self) -> BTreeSet<Vec<usize>> {
            let m = self.mul.as_ref().expect("multiplicative");
            let mut out = BTreeSet::new();
            for a in 0..self.n {
                for x in 0..self.n {
                    for y in 0..self.n {
                        let l: BTreeSet<usize> = self.add[x][y].iter().map(|&s| m[a][s]).collect();
                        if l != self.add[m[a][x]][m[a][y]] {
                            out.insert(vec![a, x, y]);
                        }
                    }
                }
            }
            out
        }

        pub fn is_dd(&self) -> bool {
            let m = self.mul.as_ref().expect("multiplicative");
            for a in 0..self.n {
                for b in 0..self.n {
                    for c in 0..self.n {
                        for d in 0..self.n {
                            let l = self.prod(&self.add[a][b], &self.add[c][d]);
                            let mut r = Self::one_set(m[a][c]);
                            for s in [m[a][d], m[b][c], m[b][d]] {
                                r = self.sum(&r, &Self::one_set(s));
                            }
                            if l != r {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        }

        pub fn is_stringent(&self) -> bool {
            (0..self.n).all(|a| {
                (0..self.n).all(|b| self.add[a][b].contains(&0) || self.add[a][b].len() == 1)
            })
        }

        pub fn negation(&self, x: usize) -> usize {
            (0..self.n)
                .find(|&y| self.add[x][y].contains(&0))
                .expect("hypergroup")
        }

        /// `(1 ⊞ -1)² = (1 ⊞ -1) ⊞ (1 ⊞ -1)`.
        pub fn square_criterion(&self, one: usize) -> bool {
            let d = &self.add[one][self.negation(one)];
            self.prod(d, d) == self.sum(d, d)
        }
    }
}

fn criterion_1() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    let mut fields = vec![("K".to_string(), krasner()), ("S".to_string(), sign())];
    for q in FIELD_ORDERS {
        fields.push((format!("GF({q})"), finite_field_of_order(q).unwrap()));
    }
    for (name, f) in &fields {
        checked += 1;
        let r = f.check_hyperfield().unwrap();
        if !r.passed {
            problems.push(format!("{name}: {:?}", r.violations[0]));
        }
    }
    let kk = product(&krasner(), &krasner()).unwrap();
    checked += 1;
    if !kk.check_skew_hyperring().unwrap().passed {
        problems.push("K x K is not a hyperring".into());
    }
    let c = |q: usize| finite_field_of_order(q).unwrap().additive();
    let wedges = [
        vec![c(2), c(3), krasner().additive()],
        vec![sign().additive(), krasner().additive()],
        vec![
            krasner().additive(),
            krasner().additive(),
            krasner().additive(),
        ],
        vec![c(3), sign().additive(), c(2)],
        vec![c(4), c(5)],
    ];
    for layers in &wedges {
        checked += 1;
        let w = wedge_sum(layers).unwrap();
        if !w.check_hypergroup().passed {
            problems.push(format!("wedge of {} layers fails", layers.len()));
        }
    }

    // Corrupted tables: each must fail, and every reported witness for the
    // targeted axiom must be one the oracle finds.
    let names3 = |a: &str, b: &str, c: &str| vec![a.to_string(), b.to_string(), c.to_string()];
    let s = ElemSet::singleton;
    let mut corrupted: Vec<(&str, FiniteHyperStructure, Axiom)> = Vec::new();
    let k_no_inverse =
        FiniteHyperStructure::new(vec!["0".into(), "1".into()], vec![s(0), s(1), s(1), s(1)])
            .unwrap()
            .with_multiplication(vec![0, 0, 0, 1], 1)
            .unwrap();
    corrupted.push(("K with 1+1={1}", k_no_inverse, Axiom::NoInverse));
    let bad_id = FiniteHyperStructure::new(
        names3("0", "1", "-1"),
        vec![
            s(0),
            ElemSet::from_indices([0, 1]),
            s(2),
            s(1),
            s(1),
            ElemSet::full(3),
            s(2),
            ElemSet::full(3),
            s(2),
        ],
    )
    .unwrap();
    corrupted.push(("S with 0+1={0,1}", bad_id, Axiom::Identity));
    let non_assoc = FiniteHyperStructure::new(
        names3("0", "1", "2"),
        vec![s(0), s(1), s(2), s(1), s(2), s(0), s(2), s(0), s(2)],
    )
    .unwrap();
    corrupted.push(("C3 with 2+2={2}", non_assoc, Axiom::Associativity));
    let gf3 = finite_field_of_order(3).unwrap();
    let mut mul: Vec<usize> = (0..9).map(|k| gf3.mul(k / 3, k % 3)).collect();
    mul[2 * 3 + 2] = 2;
    let bad_mul = gf3.additive().with_multiplication(mul, 1).unwrap();
    corrupted.push(("GF(3) with 2*2=2", bad_mul, Axiom::LeftDistributivity));

    for (name, t, axiom) in &corrupted {
        checked += 1;
        let report = if t.has_mul() {
            t.check_skew_hyperring().unwrap()
        } else {
            t.check_hypergroup()
        };
        let o = oracle::tables(t);
        let expected = match axiom {
            Axiom::NoInverse => o.without_inverse(),
            Axiom::Identity => o.bad_identity(),
            Axiom::Associativity => o.non_associative(),
            Axiom::LeftDistributivity => o.not_left_distributive(),
            _ => unreachable!(),
        };
        let got: Vec<&Vec<usize>> = report
            .violations
            .iter()
            .filter(|v| v.axiom == *axiom)
            .map(|v| &v.witness)
            .collect();
        if report.passed || expected.is_empty() {
            problems.push(format!("{name}: expected a {axiom:?} failure"));
        } else if got.is_empty() || got.iter().any(|w| !expected.contains(*w)) {
            problems.push(format!("{name}: witnesses {got:?} not among {expected:?}"));
        } else if got.len() != expected.len().min(8) {
            problems.push(format!(
                "{name}: {} witnesses reported, oracle finds {}",
                got.len(),
                expected.len()
            ));
        }
    }
    verdict(
        problems,
        format!(
            "{checked} structures, {} corrupted tables caught",
            corrupted.len()
        ),
    )
}

fn all_hyperfields_up_to(n: usize) -> Vec<FiniteHyperStructure> {
    (2..=n)
        .flat_map(|k| {
            enumerate_hyperfields(
                k,
                HyperfieldFilter {
                    stringent: false,
                    dd: false,
                },
            )
            .unwrap()
            .into_iter()
            .map(|c| c.into_structure())
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut structures = all_hyperfields_up_to(5);
    let enumerated = structures.len();
    structures.push(krasner());
    structures.push(sign());
    structures.push(product(&krasner(), &krasner()).unwrap());
    for q in FIELD_ORDERS {
        structures.push(finite_field_of_order(q).unwrap());
    }
    for (m, u) in [
        (5, vec!["1", "4"]),
        (7, vec!["1", "2", "4"]),
        (9, vec!["1", "2"]),
    ] {
        let f = finite_field_of_order(m).unwrap();
        let set = ElemSet::from_indices(u.iter().map(|x| f.index_of(x).unwrap()));
        structures.push(quotient(&f, set).unwrap());
    }
    // The statement is about hyperfields; K x K is doubly distributive but
    // not stringent, and is counted separately.
    let (structures, others): (Vec<_>, Vec<_>) = structures
        .into_iter()
        .partition(|t| t.check_hyperfield().unwrap().passed);
    let mut problems = Vec::new();
    let mut dd = 0;
    for t in &structures {
        let o = oracle::tables(t);
        let kernel_dd = t.is_doubly_distributive().unwrap().0;
        if kernel_dd != o.is_dd() || t.is_stringent().0 != o.is_stringent() {
            problems.push(format!("kernel and oracle disagree on {:?}", t.names()));
        }
        if kernel_dd {
            dd += 1;
            if !t.is_stringent().0 {
                problems.push(format!(
                    "doubly distributive but not stringent: {:?}",
                    t.names()
                ));
            }
        }
    }
    verdict(
        problems,
        format!(
            "{} hyperfields ({enumerated} enumerated), {dd} doubly distributive, all stringent; {} non-hyperfields skipped",
            structures.len(),
            others.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let f = builtin_symbolic("Zminusinf").unwrap();
    let w = Window::default();
    let zero_layer = SetDescription::singleton(SymElem::unit(1, IndexElem::Int(0)));
    let x = f.set_add(&zero_layer, &zero_layer).unwrap();
    let square = f.set_mul(&x, &x).unwrap();
    let four = f.set_add(&x, &x).unwrap();
    let elems = f.window_elements(&w);
    let (_, sq_cut) = f.truncate(&square, &elems);
    let (_, four_cut) = f.truncate(&four, &elems);
    let dd = dd_criterion_symbolic(&f).unwrap();
    let mut problems = Vec::new();
    if square != SetDescription::downset(IndexElem::Int(-1)) {
        problems.push(format!("(0+0)(0+0) = {}", f.display_set(&square)));
    }
    if four != SetDescription::downset(IndexElem::Int(0)) {
        problems.push(format!("0+0+0+0 = {}", f.display_set(&four)));
    }
    if !(sq_cut && four_cut) {
        problems.push("truncation not flagged on the window".into());
    }
    if dd {
        problems.push("dd criterion returned true".into());
    }
    verdict(
        problems,
        format!(
            "(0+0)(0+0) = {}, 0+0+0+0 = {}, truncated on {w}, dd = false",
            f.display_set(&square),
            f.display_set(&four)
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for n in 1..=5 {
        let found = enumerate_hypergroups(
            n,
            HypergroupFilter {
                stringent: true,
                commutative: false,
            },
        )
        .unwrap();
        for c in found {
            total += 1;
            let t = c.structure();
            match decompose_wedge(t) {
                Err(e) => problems.push(format!("n={n}: {e}")),
                Ok(d) => {
                    // The isomorphism, checked entry by entry.
                    let ok = (0..t.n()).all(|x| {
                        (0..t.n()).all(|y| {
                            t.add(x, y).map(|z| d.iso[z]) == d.wedge.add(d.iso[x], d.iso[y])
                        })
                    });
                    let bijective = d.iso.iter().collect::<BTreeSet<_>>().len() == t.n();
                    if !ok || !bijective {
                        problems.push(format!("n={n}: reconstruction map is not an isomorphism"));
                    }
                }
            }
        }
    }
    verdict(
        problems,
        format!("{total} stringent hypergroups (n <= 5) decomposed and reconstructed"),
    )
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for n in 2..=5 {
        for c in enumerate_hyperfields(
            n,
            HyperfieldFilter {
                stringent: true,
                dd: false,
            },
        )
        .unwrap()
        {
            total += 1;
            let t = c.structure();
            let one = t.one().unwrap();
            let dd = t.is_doubly_distributive().unwrap().0;
            let oracle = oracle::tables(t).square_criterion(one);
            let crit = dd_criterion_stringent(t);
            if dd != oracle || crit != Ok(dd) {
                problems.push(format!(
                    "n={n}: dd={dd}, square criterion={oracle}, classify={crit:?}"
                ));
            }
        }
    }
    verdict(
        problems,
        format!("{total} stringent hyperfields (n <= 5) agree"),
    )
}

fn criterion_6() -> Outcome {
    let f = |q| finite_field_of_order(q).unwrap();
    let expected: Vec<(usize, Vec<(&str, FiniteHyperStructure)>)> = vec![
        (2, vec![("K", krasner()), ("GF(2)", f(2))]),
        (3, vec![("S", sign()), ("GF(3)", f(3))]),
        (4, vec![("GF(4)", f(4))]),
        (5, vec![("GF(5)", f(5))]),
        (6, vec![]),
        (7, vec![("GF(7)", f(7))]),
    ];
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for (n, want) in expected {
        let found = enumerate_hyperfields(
            n,
            HyperfieldFilter {
                stringent: false,
                dd: true,
            },
        )
        .unwrap();
        let mut names = Vec::new();
        for c in &found {
            let hits: Vec<&str> = want
                .iter()
                .filter(|(_, w)| find_isomorphism(c.structure(), w).is_some())
                .map(|(s, _)| *s)
                .collect();
            match hits.as_slice() {
                [one] => names.push(*one),
                _ => problems.push(format!(
                    "n={n}: unexpected dd hyperfield {:?}",
                    c.structure().names()
                )),
            }
        }
        if found.len() != want.len() {
            problems.push(format!(
                "n={n}: {} found, {} expected",
                found.len(),
                want.len()
            ));
        }
        summary.push(format!("{n}:{{{}}}", names.join(",")));
    }
    verdict(problems, summary.join(" "))
}

fn criterion_7() -> Outcome {
    let mut verdicts = (0, 0);
    let mut third = Vec::new();
    let mut total = 0;
    for n in 1..=5 {
        for c in enumerate_stringent_hyperrings(n).unwrap() {
            total += 1;
            match reduce_hyperring(c.structure()) {
                Ok(hyperkit::classify::HyperringVerdict::Ring) => verdicts.0 += 1,
                Ok(hyperkit::classify::HyperringVerdict::Hyperfield) => verdicts.1 += 1,
                Err(e) => third.push((c.into_structure(), e)),
            }
        }
    }
    if third.is_empty() {
        return pass(format!(
            "{total} stringent hyperrings: {} rings, {} hyperfields",
            verdicts.0, verdicts.1
        ));
    }
    // Confirm each third case independently: a commutative, associative,
    // distributive, stringent table with multivalued addition and a nonzero
    // element without inverse.
    let confirmed = third.iter().all(|(t, _)| {
        let o = oracle::tables(t);
        let m = o.mul.as_ref().unwrap();
        let one = t.one().unwrap();
        o.non_associative().is_empty()
            && o.not_left_distributive().is_empty()
            && o.is_stringent()
            && (0..o.n).any(|x| (0..o.n).any(|y| o.add[x][y].len() > 1))
            && (1..o.n).any(|x| !(1..o.n).any(|y| m[x][y] == one))
    });
    let (t, e) = &third[0];
    let table: Vec<String> = (1..t.n())
        .flat_map(|x| (1..t.n()).map(move |y| (x, y)))
        .filter(|&(x, y)| x <= y)
        .map(|(x, y)| {
            let s: Vec<&str> = t.add(x, y).iter().map(|z| t.name(z)).collect();
            format!("{}+{}={{{}}}", t.name(x), t.name(y), s.join(","))
        })
        .collect();
    let mut out = fail(format!(
        "{} of {total} stringent hyperrings are neither rings nor hyperfields; smallest: {} elements, {}, {}; {e}",
        third.len(),
        t.n(),
        table.join(" "),
        format_args!("{}*{}={}", t.name(2), t.name(2), t.name(t.mul(2, 2))),
    ));
    out.confirmed_counterexample = confirmed;
    out
}

fn criterion_8() -> Outcome {
    let mut problems = Vec::new();
    let gf4 = finite_field_of_order(4).unwrap();
    let k = quotient(&gf4, gf4.nonzero()).unwrap();
    let iso = find_isomorphism(&k, &krasner());
    let iso_text = match &iso {
        Some(m) => m
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", k.name(x), krasner().name(y)))
            .collect::<Vec<_>>()
            .join(" "),
        None => {
            problems.push("GF(4)/GF(4)^x is not K".into());
            String::new()
        }
    };
    let mut quotients = 0;
    for q in FIELD_ORDERS {
        let f = finite_field_of_order(q).unwrap();
        let subgroups = unit_subgroups(&f).unwrap();
        let divisors = (1..q).filter(|d| (q - 1) % d == 0).count();
        if subgroups.len() != divisors {
            problems.push(format!(
                "GF({q}): {} subgroups, expected {divisors}",
                subgroups.len()
            ));
        }
        for u in subgroups {
            quotients += 1;
            let t = quotient(&f, u).unwrap();
            if t.n() != 1 + (q - 1) / u.len() {
                problems.push(format!("GF({q})/{u:?} has {} elements", t.n()));
            }
            let r = t.check_hyperfield().unwrap();
            if !r.passed {
                problems.push(format!("GF({q})/{u:?}: {:?}", r.violations[0]));
            }
        }
    }
    verdict(
        problems,
        format!("GF(4)/GF(4)^x = K via {iso_text}; {quotients} quotients pass"),
    )
}

fn random_unit<R: Coefficients>(ring: &Arc<R>, seed: u64) -> LazySeries<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lead = loop {
        let c = ring.random(&mut rng);
        if !ring.is_zero(&c) {
            break c;
        }
    };
    let base = IndexElem::Int(rng.gen_range(-3..=3));
    let frontier = Frontier {
        base,
        step: IndexElem::Int(1),
    };
    LazySeries::random(
        Arc::clone(ring),
        OrderedIndex::Integers,
        Orientation::Ascending,
        frontier,
        lead,
        seed,
    )
    .unwrap()
}

/// Coefficients at `start, start+1, …` for `len` positions.
fn coeffs(p: &LazySeries<TableCoeffs>, start: i64, len: usize) -> Vec<usize> {
    (0..len as i64)
        .map(|k| p.coeff_at(&IndexElem::Int(start + k)))
        .collect()
}

fn lead_exponent(p: &LazySeries<TableCoeffs>) -> i64 {
    match p.leading().unwrap().unwrap().1 {
        IndexElem::Int(g) => g,
        _ => unreachable!(),
    }
}

const DEPTH: u64 = 10;

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    for q in [2usize, 3] {
        let field = finite_field_of_order(q).unwrap();
        let ring = Arc::new(TableCoeffs::new(field.clone()).unwrap());
        let one = LazySeries::one(
            Arc::clone(&ring),
            OrderedIndex::Integers,
            Orientation::Ascending,
        )
        .unwrap();
        for i in 0..100u64 {
            let p = random_unit(&ring, 1000 * q as u64 + i);
            let inv = p.inv().unwrap();
            if !p.mul(&inv).unwrap().eq_depth(&one, DEPTH).unwrap() {
                problems.push(format!("GF({q}) sample {i}: p * inv(p) != 1"));
            }
            // Oracle: schoolbook convolution of the first DEPTH coefficients.
            let (a, b) = (lead_exponent(&p), lead_exponent(&inv));
            if a + b != 0 {
                problems.push(format!("GF({q}) sample {i}: leading exponents {a} and {b}"));
                continue;
            }
            let (pc, qc) = (
                coeffs(&p, a, DEPTH as usize),
                coeffs(&inv, b, DEPTH as usize),
            );
            for k in 0..DEPTH as usize {
                let c = (0..=k).fold(0, |acc, j| {
                    field
                        .add(acc, field.mul(pc[j], qc[k - j]))
                        .single()
                        .unwrap()
                });
                let want = if k == 0 { 1 } else { 0 };
                if c != want {
                    problems.push(format!(
                        "GF({q}) sample {i}: convolution coefficient {k} is {c}"
                    ));
                }
            }
        }
        for i in 0..100u64 {
            let s = 50_000 + 1000 * q as u64 + 3 * i;
            let (x, y, z) = (
                random_unit(&ring, s),
                random_unit(&ring, s + 1),
                random_unit(&ring, s + 2),
            );
            let laws = [
                (
                    "assoc *",
                    x.mul(&y).unwrap().mul(&z).unwrap(),
                    x.mul(&y.mul(&z).unwrap()).unwrap(),
                ),
                (
                    "assoc +",
                    x.add(&y).unwrap().add(&z).unwrap(),
                    x.add(&y.add(&z).unwrap()).unwrap(),
                ),
                ("comm *", x.mul(&y).unwrap(), y.mul(&x).unwrap()),
                ("comm +", x.add(&y).unwrap(), y.add(&x).unwrap()),
                (
                    "distrib",
                    x.mul(&y.add(&z).unwrap()).unwrap(),
                    x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap(),
                ),
                (
                    "x - x",
                    x.sub(&x).unwrap(),
                    LazySeries::zero(
                        Arc::clone(&ring),
                        OrderedIndex::Integers,
                        Orientation::Ascending,
                    )
                    .unwrap(),
                ),
            ];
            for (law, l, r) in laws {
                if !l.eq_depth(&r, DEPTH).unwrap() {
                    problems.push(format!("GF({q}) triple {i}: {law}"));
                }
            }
        }
    }
    verdict(
        problems,
        format!("200 inverses and 200 triples, depth {DEPTH}"),
    )
}

fn sample_pairs<R: Coefficients>(
    ring: Arc<R>,
    mode: QuotientMode,
    pairs: &[(&str, &str)],
    problems: &mut Vec<String>,
) -> usize {
    let group = OrderedIndex::Integers;
    let target: SymbolicHyperfield = mode.target(ring.as_ref(), &group).unwrap();
    let mut samples = 0;
    for (k, (x, y)) in pairs.iter().enumerate() {
        let (xe, ye) = (target.parse_elem(x).unwrap(), target.parse_elem(y).unwrap());
        let r = quotient_sample_check(
            Arc::clone(&ring),
            &group,
            mode,
            &xe,
            &ye,
            1000,
            DEPTH,
            17 + k as u64,
        )
        .unwrap();
        samples += r.samples;
        if !r.outside.is_empty() {
            problems.push(format!(
                "{mode:?} {x}+{y}: classes {:?} outside {}",
                r.outside, r.expected
            ));
        }
        if r.coverage() < 1.0 {
            problems.push(format!(
                "{mode:?} {x}+{y}: covered {:?} of {}",
                r.covered, r.expected
            ));
        }
    }
    samples
}

fn criterion_10() -> Outcome {
    let mut problems = Vec::new();
    let gf = |q| Arc::new(TableCoeffs::new(finite_field_of_order(q).unwrap()).unwrap());
    let mut samples = sample_pairs(
        gf(3),
        QuotientMode::Krasner,
        &[("0", "0"), ("1", "0"), ("-2", "3")],
        &mut problems,
    );
    samples += sample_pairs(
        Arc::new(RationalCoeffs),
        QuotientMode::Sign,
        &[("(1,0)", "(1,0)"), ("(1,1)", "(-1,0)"), ("(1,0)", "(-1,0)")],
        &mut problems,
    );
    samples += sample_pairs(
        gf(3),
        QuotientMode::Field,
        &[("(1,0)", "(1,0)"), ("(1,0)", "(2,0)"), ("(1,2)", "(1,0)")],
        &mut problems,
    );
    verdict(
        problems,
        format!("{samples} samples over 9 pairs, no class outside the hypersum, full coverage"),
    )
}

fn criterion_11() -> Outcome {
    let mut problems = Vec::new();
    let mut sizes = Vec::new();
    let mut cases = vec![
        ("K".to_string(), krasner(), 3),
        ("S".to_string(), sign(), 4),
    ];
    for q in FIELD_ORDERS {
        cases.push((format!("GF({q})"), finite_field_of_order(q).unwrap(), q));
    }
    for (name, t, want) in cases {
        let s = associated_semiring(&t, 1024).unwrap();
        sizes.push(format!("{name}:{}", s.len()));
        if s.len() != want {
            problems.push(format!(
                "<{name}> has {} elements, expected {want}",
                s.len()
            ));
        }
        let r = s.check_axioms();
        if !r.passed {
            problems.push(format!("<{name}>: {:?}", r.violations[0]));
        }
    }
    let trop = builtin_symbolic("trop(Z)").unwrap();
    let w = Window::new(-5, 5);
    let cf = closed_form_semiring(&trop).unwrap();
    problems.extend(compare_with_windowed_closure(&cf, &w).unwrap());
    verdict(
        problems,
        format!(
            "{}; trop(Z) matches the {} table on {w}",
            sizes.join(" "),
            cf.kind
        ),
    )
}

fn criterion_12() -> Outcome {
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    let cases = [
        ("Zminusinf", Window::default(), BaseTag::Field, "GF(2)"),
        ("trop(Z)", Window::default(), BaseTag::Krasner, "K"),
        (
            "layer(GF(3),Q)",
            Window::new(-4, 4).with_denominator(2),
            BaseTag::Field,
            "GF(3)",
        ),
    ];
    for (name, w, tag, kernel) in cases {
        let f = builtin_symbolic(name).unwrap();
        let v = valuation_of_symbolic(&f, &w).unwrap();
        summary.push(format!(
            "{name}: {} pairs, kernel {}",
            v.pairs_checked, v.kernel_name
        ));
        if !v.passed() {
            problems.push(format!("{name}: {}", v.failures[0]));
        }
        if v.kernel_tag != tag || v.kernel_name != kernel {
            problems.push(format!(
                "{name}: kernel {} ({:?})",
                v.kernel_name, v.kernel_tag
            ));
        }
        let n = f.window_table(&w).unwrap().table.n();
        if v.pairs_checked != n * n {
            problems.push(format!(
                "{name}: {} pairs checked of {}",
                v.pairs_checked,
                n * n
            ));
        }
    }
    verdict(problems, summary.join("; "))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "axiom suite", criterion_1),
        (2, "doubly distributive implies stringent", criterion_2),
        (3, "Zminusinf sums and products", criterion_3),
        (4, "stringent hypergroups are wedges", criterion_4),
        (5, "dd criterion for stringent hyperfields", criterion_5),
        (6, "doubly distributive hyperfields by size", criterion_6),
        (
            7,
            "stringent hyperrings are rings or hyperfields",
            criterion_7,
        ),
        (8, "Krasner quotients", criterion_8),
        (9, "series inverse and ring laws", criterion_9),
        (10, "series quotient sampling", criterion_10),
        (11, "associated semirings", criterion_11),
        (12, "valuations", criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {status} [{:.2?}] {name}: {}",
            start.elapsed(),
            o.detail
        );
        let known = KNOWN_FAILURES.contains(&id);
        match (o.passed, known) {
            (true, false) => {}
            (false, true) if o.confirmed_counterexample => {
                println!("             known failure: counterexample confirmed by the oracle");
            }
            (false, true) => unexpected.push(format!(
                "criterion {id}: failure without a confirmed counterexample"
            )),
            (true, true) => unexpected.push(format!(
                "criterion {id} passes; remove it from KNOWN_FAILURES"
            )),
            (false, false) => unexpected.push(format!("criterion {id}: {}", o.detail)),
        }
    }
    if !unexpected.is_empty() {
        eprintln!("acceptance failed: {unexpected:#?}");
        std::process::exit(1);
    }
}
