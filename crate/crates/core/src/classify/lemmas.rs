use super::{less_relation, sim_classes};
use crate::error::Result;
use crate::kernel::FiniteHyperStructure;

/// Check the basic facts about `<_F` on a stringent hypergroup and return
/// descriptions of any failures:
/// - `y ∈ x ⊞ y` implies `y ∈ y ⊞ x`;
/// - `<_F` is a strict partial order and `~_F` an equivalence relation with
///   `-x ~_F x` (checked while building them);
/// - if `x <_F y` then for every nonzero `z`, `x <_F z` or `z <_F y`;
/// - if `x <_F y` then `±x <_F ±y`.
pub fn check_order_lemmas(t: &FiniteHyperStructure) -> Result<Vec<String>> {
    let rel = less_relation(t)?;
    sim_classes(t)?;
    let n = t.n();
    let name = |x: usize| t.name(x).to_string();
    let neg = |x: usize| t.neg(x).expect("hypergroup");
    let mut bad = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if t.add(x, y).contains(y) && !t.add(y, x).contains(y) {
                bad.push(format!(
                    "{} ∈ {} + {} but not {} + {}",
                    name(y),
                    name(x),
                    name(y),
                    name(y),
                    name(x)
                ));
            }
        }
    }
    for (x, y) in rel.pairs() {
        for z in 1..n {
            if !rel.less(x, z) && !rel.less(z, y) {
                bad.push(format!(
                    "{} < {} but {} sits between neither way",
                    name(x),
                    name(y),
                    name(z)
                ));
            }
        }
        for (a, b) in [(neg(x), y), (x, neg(y)), (neg(x), neg(y))] {
            if !rel.less(a, b) {
                bad.push(format!(
                    "{} < {} but not {} < {}",
                    name(x),
                    name(y),
                    name(a),
                    name(b)
                ));
            }
        }
    }
    Ok(bad)
}

/// If every member of a family lies `<_F z`, every nonzero element of its
/// sum does too. Checked for all families of size `2..=max_family` drawn
/// with repetition from the elements below each `z`.
pub fn check_sum_below_lemma(t: &FiniteHyperStructure, max_family: usize) -> Result<Vec<String>> {
    let rel = less_relation(t)?;
    let n = t.n();
    let mut bad = Vec::new();
    for z in 1..n {
        let below: Vec<usize> = (1..n).filter(|&x| rel.less(x, z)).collect();
        if below.is_empty() {
            continue;
        }
        for size in 2..=max_family {
            // Nondecreasing index sequences into `below`.
            let mut pick = vec![0usize; size];
            loop {
                let family: Vec<usize> = pick.iter().map(|&i| below[i]).collect();
                let sum = t.sum_all(&family);
                if let Some(w) = sum.without(0).iter().find(|&w| !rel.less(w, z)) {
                    let names: Vec<&str> = family.iter().map(|&x| t.name(x)).collect();
                    bad.push(format!(
                        "{} is in the sum of {:?} but not below {}",
                        t.name(w),
                        names,
                        t.name(z)
                    ));
                }
                let Some(i) = (0..size).rev().find(|&i| pick[i] + 1 < below.len()) else {
                    break;
                };
                pick[i] += 1;
                for j in i + 1..size {
                    pick[j] = pick[i];
                }
            }
        }
    }
    Ok(bad)
}
