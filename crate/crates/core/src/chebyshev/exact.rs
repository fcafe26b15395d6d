//! Closed-form optimal residuals.
//!
//! For a set `F` of free coordinates the best residual
//! `min_b ‖x - P_F x + Σ_{n∈F} b_n e_n‖` has an explicit value in every
//! bundled space:
//!
//! * lattice norms (`ℓ_p`, Schreier, mixed): `b = 0`;
//! * summing basis: a free coordinate resets the running sum, so each stretch
//!   between consecutive free coordinates costs half the range of its partial
//!   sums, and the stretch before the first free coordinate costs its largest
//!   partial sum;
//! * difference basis: a run of free coordinates is interpolated away and
//!   contributes `|y_{a-1} - y_{b+1}|` (nothing when the run starts at 1).
//!
//! The summing basis additionally admits exact profiles of `σ_n` and `ϑ_n`
//! that avoid subset enumeration altogether.

use crate::greedy::tie_split;
use crate::spaces::{SequenceSpace, SpaceKind};
use crate::vector::SparseVector;

/// Exact optimal residual with `free` (sorted ascending) as free coordinates.
pub fn best_residual(space: &SequenceSpace, x: &SparseVector, free: &[usize]) -> f64 {
    debug_assert!(free.windows(2).all(|w| w[0] < w[1]));
    match space.kind {
        SpaceKind::SummingC0 => summing_residual(x.entries(), free),
        SpaceKind::DifferenceL1 => difference_residual(x.entries(), free),
        _ => space.norm(&x.remove(free)),
    }
}

fn contains(sorted: &[usize], n: usize) -> bool {
    sorted.binary_search(&n).is_ok()
}

fn summing_residual(e: &[(usize, f64)], free: &[usize]) -> f64 {
    let first_free = free.first().copied().unwrap_or(usize::MAX);
    let mut best = 0.0f64;
    let mut prefix = 0.0f64;
    let (mut c, mut lo, mut hi) = (0.0f64, 0.0f64, 0.0f64);
    let mut k = 0; // next free coordinate not yet passed
    for &(n, v) in e {
        if n < first_free {
            prefix += v;
            best = best.max(prefix.abs());
            continue;
        }
        // close stretches for every free coordinate up to n
        let mut reset = false;
        while k < free.len() && free[k] <= n {
            best = best.max(0.5 * (hi - lo));
            c = 0.0;
            lo = 0.0;
            hi = 0.0;
            reset = free[k] == n;
            k += 1;
        }
        if !reset {
            c += v;
            lo = lo.min(c);
            hi = hi.max(c);
        }
    }
    if !free.is_empty() {
        best = best.max(0.5 * (hi - lo));
    }
    best
}

fn difference_residual(e: &[(usize, f64)], free: &[usize]) -> f64 {
    let fixed: Vec<(usize, f64)> = e.iter().copied().filter(|p| !contains(free, p.0)).collect();
    let Some(&(first, v0)) = fixed.first() else {
        return 0.0;
    };
    let free_between = |a: usize, b: usize| -> usize {
        // free coordinates strictly inside (a, b)
        free.partition_point(|&f| f < b) - free.partition_point(|&f| f <= a)
    };
    let mut total = 0.0;
    if first - 1 > free_between(0, first) {
        total += v0.abs();
    }
    for w in fixed.windows(2) {
        let ((i, a), (j, b)) = (w[0], w[1]);
        let zero_between = j - i - 1 > free_between(i, j);
        total += if zero_between { a.abs() + b.abs() } else { (a - b).abs() };
    }
    total + fixed.last().map_or(0.0, |p| p.1.abs())
}

/// Free coordinates the greedy left-to-right rule needs to bring the summing
/// residual down to `tau`, together with their positions (support indices).
fn summing_frees(e: &[(usize, f64)], tau: f64, out: &mut Vec<usize>) {
    out.clear();
    let mut prefix = 0.0f64;
    let mut started = false;
    let (mut c, mut lo, mut hi) = (0.0f64, 0.0f64, 0.0f64);
    for &(n, v) in e {
        if !started {
            prefix += v;
            if prefix.abs() > tau {
                started = true;
                out.push(n);
            }
        } else {
            let c2 = c + v;
            let (lo2, hi2) = (lo.min(c2), hi.max(c2));
            if hi2 - lo2 > 2.0 * tau {
                out.push(n);
                c = 0.0;
                lo = 0.0;
                hi = 0.0;
            } else {
                c = c2;
                lo = lo2;
                hi = hi2;
            }
        }
    }
}

/// Exact `σ_n` in the summing basis.
///
/// Free coordinates off the support never help (they only split a stretch
/// earlier than the next support index would), so it suffices to place them
/// on the support. For a target level `τ` the latest-possible placement is
/// optimal, giving a monotone feasibility test; bisection on `τ` then pins
/// the optimum and the residual of the final placement is returned.
pub fn summing_sigma(x: &SparseVector, n: usize) -> f64 {
    let e = x.entries();
    if n >= e.len() {
        return 0.0;
    }
    let full = summing_residual(e, &[]);
    if n == 0 {
        return full;
    }
    let (mut lo, mut hi) = (0.0f64, full);
    let mut frees = Vec::new();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        summing_frees(e, mid, &mut frees);
        if frees.len() <= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    summing_frees(e, hi, &mut frees);
    summing_residual(e, &frees).min(hi)
}

/// `σ_1, …, σ_{len}` in the summing basis.
pub fn summing_sigma_profile(x: &SparseVector, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut prev = f64::INFINITY;
    for n in 1..=len {
        let s = if prev == 0.0 { 0.0 } else { summing_sigma(x, n) };
        prev = s;
        out.push(s);
    }
    out
}

/// Exact `ϑ_m` for `m = 1..=len` in the summing basis, over all greedy sets.
///
/// For one tie level (indices `F` above the threshold, `T` at it) a greedy
/// set is `F` plus `r` elements of `T`. Its residual is the max over the
/// stretches between consecutive free coordinates, so the worst greedy set
/// is found by maximising over pairs (free `f`, next free `g`) that can
/// occur together: no `F` index strictly between them, and the `T` indices
/// outside `[f, g]` able to absorb the remaining budget. Each pair yields an
/// interval of admissible `r`, and for a fixed `f` the stretch value grows
/// with `g` while the interval's upper end shrinks, so one sweep per `f`
/// fills all `r` at once.
pub fn summing_theta_profile(x: &SparseVector, len: usize) -> Vec<f64> {
    let e = x.entries();
    let k = e.len();
    let mut out = vec![0.0; len];
    let mut m = 1;
    while m <= len && m < k {
        let split = tie_split(x, m);
        let nf = split.fixed.len();
        let nt = split.tied.len();
        let best = summing_theta_level(e, &split.fixed, &split.tied);
        // m ranges over nf+1 ..= nf+nt for this level
        for r in 1..=nt {
            let mm = nf + r;
            if mm > len || mm >= k {
                break;
            }
            out[mm - 1] = best[r];
        }
        m = nf + nt + 1;
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Fixed,
    Tied,
    Other,
}

/// `best[r]` = worst residual over greedy sets `F ∪ R`, `R ⊆ T`, `|R| = r`.
fn summing_theta_level(e: &[(usize, f64)], fixed: &[usize], tied: &[usize]) -> Vec<f64> {
    let nt = tied.len();
    let nf = fixed.len();
    let role: Vec<Role> = e
        .iter()
        .map(|&(n, _)| {
            if contains(fixed, n) {
                Role::Fixed
            } else if contains(tied, n) {
                Role::Tied
            } else {
                Role::Other
            }
        })
        .collect();
    let mut best = vec![f64::NEG_INFINITY; nt + 1];
    // (lo, hi, value) candidates for one left end, in order of growing value
    let mut cands: Vec<(usize, usize, f64)> = Vec::new();
    let flush = |cands: &mut Vec<(usize, usize, f64)>, base: usize, best: &mut Vec<f64>| {
        let mut filled = base; // r in (base, filled] already assigned
        let mut at_base = f64::NEG_INFINITY;
        for &(lo, hi, v) in cands.iter().rev() {
            let hi = hi.min(nt);
            if lo <= base && base <= hi {
                at_base = at_base.max(v);
            }
            let start = (filled + 1).max(lo);
            for r in start..=hi {
                if v > best[r] {
                    best[r] = v;
                }
            }
            filled = filled.max(hi);
        }
        if base <= nt && at_base > best[base] {
            best[base] = at_base;
        }
        cands.clear();
    };

    // stretch before the first free coordinate
    let mut prefix_max = 0.0f64;
    let mut prefix = 0.0f64;
    let mut t_before = 0usize;
    for (i, &(_, v)) in e.iter().enumerate() {
        match role[i] {
            Role::Fixed => {
                cands.push((0, nt - t_before, prefix_max));
                break;
            }
            Role::Tied => {
                cands.push((1, 1 + (nt - t_before - 1), prefix_max));
                t_before += 1;
            }
            Role::Other => {}
        }
        prefix += v;
        prefix_max = prefix_max.max(prefix.abs());
    }
    flush(&mut cands, 0, &mut best);

    // stretches opened by a free coordinate f
    let mut t_upto = 0usize; // tied indices at positions ≤ current f
    let mut f_upto = 0usize; // fixed indices at positions ≤ current f
    for fi in 0..e.len() {
        match role[fi] {
            Role::Other => continue,
            Role::Tied => t_upto += 1,
            Role::Fixed => f_upto += 1,
        }
        let need_f = usize::from(role[fi] == Role::Tied);
        let (mut c, mut lo, mut hi) = (0.0f64, 0.0f64, 0.0f64);
        let mut t_in = 0usize;
        let mut closed = false;
        for gi in fi + 1..e.len() {
            if role[gi] != Role::Other {
                let need_g = usize::from(role[gi] == Role::Tied);
                // r − need_f − need_g tied indices must come from outside [f, g]
                let outside = nt - (need_f + t_in + need_g);
                cands.push((need_f + need_g, need_f + need_g + outside, 0.5 * (hi - lo)));
                if role[gi] == Role::Fixed {
                    closed = true;
                    break;
                }
                t_in += 1;
            }
            c += e[gi].1;
            lo = lo.min(c);
            hi = hi.max(c);
        }
        if !closed && f_upto == nf {
            // f is the last free coordinate
            let avail = t_upto - need_f;
            cands.push((need_f, need_f + avail, 0.5 * (hi - lo)));
        }
        flush(&mut cands, need_f, &mut best);
    }
    best.iter().map(|&b| b.max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::for_each_combination;

    fn v(d: &[f64]) -> SparseVector {
        SparseVector::from_dense(d).unwrap()
    }

    #[test]
    fn summing_residual_examples() {
        let s = SequenceSpace::summing();
        assert_eq!(best_residual(&s, &v(&[1.0, 1.0]), &[1]), 0.5);
        assert_eq!(best_residual(&s, &v(&[1.0, 1.0]), &[2]), 1.0);
        assert_eq!(best_residual(&s, &v(&[1.0, 1.0]), &[]), 2.0);
        // a free index beyond the support changes nothing
        assert_eq!(best_residual(&s, &v(&[1.0, 1.0]), &[3]), 2.0);
        assert_eq!(best_residual(&s, &v(&[1.0, 1.0]), &[1, 2]), 0.0);
    }

    #[test]
    fn difference_residual_examples() {
        let d = SequenceSpace::difference();
        // (1, 0, 1) has norm 3; freeing the gap leaves a constant run
        assert_eq!(best_residual(&d, &v(&[1.0, 0.0, 1.0]), &[]), 3.0);
        assert_eq!(best_residual(&d, &v(&[1.0, 0.0, 1.0]), &[2]), 1.0);
        assert_eq!(best_residual(&d, &v(&[1.0, 0.0, 1.0]), &[1]), 2.0);
        assert_eq!(best_residual(&d, &v(&[0.0, 0.0, 1.0]), &[1, 2]), 1.0);
        assert_eq!(best_residual(&d, &v(&[0.0, 2.0, 1.0]), &[1]), 2.0);
    }

    fn brute_sigma(x: &SparseVector, n: usize) -> f64 {
        let s = SequenceSpace::summing();
        // every index up to two past the support, gaps included
        let sup: Vec<usize> = (1..=x.max_index().unwrap() + 2).collect();
        let mut best = f64::INFINITY;
        for k in 0..=n {
            for_each_combination(&sup, k, |c| {
                best = best.min(best_residual(&s, x, c));
                true
            });
        }
        best
    }

    fn brute_theta(x: &SparseVector, m: usize) -> f64 {
        let s = SequenceSpace::summing();
        let fam = crate::greedy::greedy_sets(x, m, usize::MAX).unwrap();
        fam.sets.iter().map(|a| best_residual(&s, x, a)).fold(0.0, f64::max)
    }

    #[test]
    fn summing_profiles_match_enumeration() {
        let vals = [-2.0, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0];
        let mut state = 12345u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for _ in 0..400 {
            let k = 1 + next() % 7;
            let mut pairs = Vec::new();
            let mut idx = 0;
            for _ in 0..k {
                idx += 1 + next() % 3;
                pairs.push((idx, vals[next() % vals.len()]));
            }
            let x = SparseVector::from_pairs(pairs).unwrap();
            let sig = summing_sigma_profile(&x, k);
            let th = summing_theta_profile(&x, k);
            for m in 1..=k {
                assert!((sig[m - 1] - brute_sigma(&x, m)).abs() < 1e-12, "{x:?} {m}");
                let want = if m >= k { 0.0 } else { brute_theta(&x, m) };
                assert!((th[m - 1] - want).abs() < 1e-12, "{x:?} {m}");
            }
        }
    }
}
