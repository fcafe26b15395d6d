//! Democracy functions by exhaustive search over signed indicator vectors,
//! and the checks built on them: super-democracy and super-conservative
//! ratios, the characteristic function `ψ` and Properties (W), (W*), (I).
//!
//! All searches run over a finite horizon `[1, H]`; values are lower
//! estimates of suprema and upper estimates of infima, and every report
//! carries the horizon and a witness that reproduces its value.

use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binomial, for_each_combination};
use crate::error::{invalid, LabError, Result};
use crate::spaces::{lorentz_ones, SequenceSpace, SpaceKind};
use crate::vector::SignedSet;

/// Default cap on subset × sign evaluations per search.
pub const DEFAULT_BUDGET: f64 = 1e7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `h_r`: sup over `|A| ≤ m`.
    Upper,
    /// `h_l`: inf over `|A| = m`.
    Lower,
    /// `h_{R,l}(m,u)`: sup over `|A| = m`, `A ⊆ [1,u]`.
    Left,
    /// `h_{R,r}(m,u)`: inf over `|A| = m`, `A ⊆ (u, H]`.
    Right,
}

impl Side {
    pub fn label(&self) -> &'static str {
        match self {
            Side::Upper => "hr",
            Side::Lower => "hl",
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemocracyReport {
    pub m: usize,
    pub u: Option<usize>,
    pub side: Side,
    pub horizon: usize,
    pub value: f64,
    pub witness: SignedSet,
    /// False when the value came from a structural minimiser instead of a
    /// full search.
    pub exhaustive: bool,
}

#[derive(Clone, Copy, PartialEq)]
enum Goal {
    Max,
    Min,
}

/// Checks that flipping signs leaves norms unchanged on a fixed probe family.
pub fn sign_invariant(space: &SequenceSpace) -> bool {
    let probes: [&[usize]; 4] = [&[1, 2], &[1, 2, 3, 5], &[2, 3, 4, 7, 9], &[1, 4, 6, 9, 10, 16]];
    probes.iter().all(|idx| {
        let plain = space.indicator_norm(&SignedSet::positive(idx.to_vec()).expect("valid"));
        (0u32..1 << idx.len()).all(|mask| {
            let signs = (0..idx.len())
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            let s = SignedSet::new(idx.to_vec(), signs).expect("valid");
            (space.indicator_norm(&s) - plain).abs() <= 1e-12 * (1.0 + plain)
        })
    })
}

fn sign_patterns(space: &SequenceSpace, k: usize) -> f64 {
    if k == 0 || (space.unconditional && sign_invariant(space)) {
        1.0
    } else {
        // the first sign is fixed to +1: ‖-y‖ = ‖y‖
        2f64.powi(k as i32 - 1)
    }
}

fn search_cost(space: &SequenceSpace, n: usize, sizes: &[usize]) -> f64 {
    sizes.iter().map(|&k| binomial(n, k) * sign_patterns(space, k)).sum()
}

type Best = Option<(f64, Vec<usize>, Vec<i8>)>;

fn better(goal: Goal, a: &Best, b: &Best) -> bool {
    // does b beat a
    match (a, b) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some((va, ia, sa)), Some((vb, ib, sb))) => {
            let strictly = match goal {
                Goal::Max => vb > va,
                Goal::Min => vb < va,
            };
            strictly || (vb == va && (ib, sb) < (ia, sa))
        }
    }
}

/// Exhaustive extremum of `‖1_{εA}‖` over `A ⊆ candidates` with `|A|` in
/// `sizes`, ties broken towards the lexicographically smallest witness.
fn search(
    space: &SequenceSpace,
    candidates: &[usize],
    sizes: &[usize],
    goal: Goal,
    budget: f64,
) -> Result<(f64, SignedSet)> {
    search_with_signs(space, candidates, sizes, goal, budget, true)
}

fn search_with_signs(
    space: &SequenceSpace,
    candidates: &[usize],
    sizes: &[usize],
    goal: Goal,
    budget: f64,
    signed: bool,
) -> Result<(f64, SignedSet)> {
    let cost = if signed {
        search_cost(space, candidates.len(), sizes)
    } else {
        sizes.iter().map(|&k| binomial(candidates.len(), k)).sum()
    };
    if cost > budget {
        return Err(LabError::BudgetExceeded {
            needed: cost,
            limit: budget,
        });
    }
    let mut best: Best = None;
    for &k in sizes {
        if k == 0 || k > candidates.len() {
            continue;
        }
        let patterns = if signed { sign_patterns(space, k) as u64 } else { 1 };
        let found = (0..=candidates.len() - k)
            .into_par_iter()
            .map(|i0| {
                let mut local: Best = None;
                let mut idx = vec![0usize; k];
                let mut entries: Vec<(usize, f64)> = vec![(0, 0.0); k];
                let mut signs = vec![1i8; k];
                for_each_combination(&candidates[i0 + 1..], k - 1, |rest| {
                    idx[0] = candidates[i0];
                    idx[1..].copy_from_slice(rest);
                    for mask in 0..patterns {
                        for j in 0..k {
                            // bit j-1 flips position j; position 0 stays +1
                            let neg = j > 0 && (mask >> (j - 1)) & 1 == 1;
                            signs[j] = if neg { -1 } else { 1 };
                            entries[j] = (idx[j], signs[j] as f64);
                        }
                        let v = space.norm_entries(&entries);
                        let cand = Some((v, idx.clone(), signs.clone()));
                        if better(goal, &local, &cand) {
                            local = cand;
                        }
                    }
                    true
                });
                local
            })
            .reduce(|| None, |a, b| if better(goal, &a, &b) { b } else { a });
        if better(goal, &best, &found) {
            best = found;
        }
    }
    let (v, i, s) = best.ok_or_else(|| LabError::InvalidArgument("no admissible set in range".into()))?;
    Ok((v, SignedSet::new(i, s)?))
}

fn check_horizon(m: usize, horizon: usize) -> Result<()> {
    if m == 0 {
        return invalid("m must be at least 1");
    }
    if m > horizon {
        return Err(LabError::HorizonTooSmall { horizon, needed: m });
    }
    Ok(())
}

fn report(m: usize, u: Option<usize>, side: Side, horizon: usize, found: (f64, SignedSet)) -> DemocracyReport {
    DemocracyReport {
        m,
        u,
        side,
        horizon,
        value: found.0,
        witness: found.1,
        exhaustive: true,
    }
}

/// `h_r(m)` over `A ⊆ [1, H]`, `|A| ≤ m`.
pub fn h_r(space: &SequenceSpace, m: usize, horizon: usize) -> Result<DemocracyReport> {
    h_r_with_budget(space, m, horizon, DEFAULT_BUDGET)
}

pub fn h_r_with_budget(space: &SequenceSpace, m: usize, horizon: usize, budget: f64) -> Result<DemocracyReport> {
    check_horizon(m, horizon)?;
    let cand: Vec<usize> = (1..=horizon).collect();
    // lattice norms grow with the set, so only |A| = m matters there
    let sizes: Vec<usize> = if space.projection_is_optimal() {
        vec![m]
    } else {
        (1..=m).collect()
    };
    Ok(report(
        m,
        None,
        Side::Upper,
        horizon,
        search(space, &cand, &sizes, Goal::Max, budget)?,
    ))
}

/// Exact-size variant: sup over `|A| = m`.
pub fn h_r_exact_size(space: &SequenceSpace, m: usize, horizon: usize) -> Result<DemocracyReport> {
    check_horizon(m, horizon)?;
    let cand: Vec<usize> = (1..=horizon).collect();
    Ok(report(
        m,
        None,
        Side::Upper,
        horizon,
        search(space, &cand, &[m], Goal::Max, DEFAULT_BUDGET)?,
    ))
}

/// `h_l(m)` over `A ⊆ [1, H]`, `|A| = m`.
pub fn h_l(space: &SequenceSpace, m: usize, horizon: usize) -> Result<DemocracyReport> {
    h_l_with_budget(space, m, horizon, DEFAULT_BUDGET)
}

pub fn h_l_with_budget(space: &SequenceSpace, m: usize, horizon: usize, budget: f64) -> Result<DemocracyReport> {
    check_horizon(m, horizon)?;
    let cand: Vec<usize> = (1..=horizon).collect();
    Ok(report(
        m,
        None,
        Side::Lower,
        horizon,
        search(space, &cand, &[m], Goal::Min, budget)?,
    ))
}

/// Restricted democracy functions. `Left` is the max over `A ⊆ [1,u]`
/// (requires `m ≤ u`), `Right` the min over `A ⊆ (u, H]`.
pub fn h_restricted(space: &SequenceSpace, m: usize, u: usize, side: Side, horizon: usize) -> Result<DemocracyReport> {
    h_restricted_with_budget(space, m, u, side, horizon, DEFAULT_BUDGET)
}

pub fn h_restricted_with_budget(
    space: &SequenceSpace,
    m: usize,
    u: usize,
    side: Side,
    horizon: usize,
    budget: f64,
) -> Result<DemocracyReport> {
    if m == 0 {
        return invalid("m must be at least 1");
    }
    let (cand, goal): (Vec<usize>, Goal) = match side {
        Side::Left => {
            if m > u {
                return invalid(format!("left restricted function needs m ≤ u, got m={m}, u={u}"));
            }
            ((1..=u).collect(), Goal::Max)
        }
        Side::Right => {
            if u >= horizon || horizon - u < m {
                return Err(LabError::HorizonTooSmall { horizon, needed: u + m });
            }
            ((u + 1..=horizon).collect(), Goal::Min)
        }
        _ => return invalid("restricted functions take side left or right"),
    };
    Ok(report(
        m,
        Some(u),
        side,
        horizon,
        search(space, &cand, &[m], goal, budget)?,
    ))
}

/// `h_{R,l}(m,u)` with every sign fixed to `+1`, i.e. the sup of `‖1_A‖`
/// over `A ⊆ [1,u]`, `|A| = m`.
pub fn h_left_positive(space: &SequenceSpace, m: usize, u: usize) -> Result<DemocracyReport> {
    if m == 0 || m > u {
        return invalid(format!("left restricted function needs 1 ≤ m ≤ u, got m={m}, u={u}"));
    }
    let cand: Vec<usize> = (1..=u).collect();
    let found = search_with_signs(space, &cand, &[m], Goal::Max, DEFAULT_BUDGET, false)?;
    Ok(report(m, Some(u), Side::Left, u, found))
}

/// A set of size `m` after `u` whose indicator attains `h_{R,r}(m,u)` in the
/// bundled spaces.
pub fn right_minimiser(space: &SequenceSpace, m: usize, u: usize) -> Result<SignedSet> {
    match space.kind {
        SpaceKind::SummingC0 => SignedSet::alternating((u + 1..=u + m).collect()),
        SpaceKind::MixNorm => {
            let first = if (u + 1) % 2 == 1 { u + 1 } else { u + 2 };
            SignedSet::positive((0..m).map(|i| first + 2 * i).collect())
        }
        _ => SignedSet::positive((u + 1..=u + m).collect()),
    }
}

/// `h_{R,r}(m,u)` that falls back on a known minimiser once exhaustive
/// search is out of budget.
///
/// The fallbacks are exact for the bundled spaces: every nonempty signed
/// set has summing norm ≥ 1 (first partial sum) and the alternating block
/// reaches 1; every difference norm is ≥ 2 (first and last terms) and a
/// constant block reaches 2; the Schreier norm of a block is minimal among
/// sets of the same size starting after `u`; the mixed norm is at least the
/// Lorentz term `F(m)`, which odd indices attain; in `ℓ_p` all sets of
/// size `m` have the same norm.
pub fn h_right_min(space: &SequenceSpace, m: usize, u: usize, horizon: usize) -> Result<DemocracyReport> {
    match h_restricted(space, m, u, Side::Right, horizon) {
        Err(LabError::BudgetExceeded { .. }) => {}
        other => return other,
    }
    let witness = right_minimiser(space, m, u)?;
    let last = *witness.indices().last().expect("m ≥ 1");
    if last > horizon {
        return Err(LabError::HorizonTooSmall { horizon, needed: last });
    }
    let value = space.indicator_norm(&witness);
    if space.kind == SpaceKind::MixNorm {
        debug_assert!((value - lorentz_ones(m)).abs() < 1e-12);
    }
    Ok(DemocracyReport {
        m,
        u: Some(u),
        side: Side::Right,
        horizon,
        value,
        witness,
        exhaustive: false,
    })
}

/// `max_{m ≤ m_max} h_r(m)/h_l(m)`.
pub fn superdemocracy_ratio(space: &SequenceSpace, m_max: usize, horizon: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for m in 1..=m_max {
        best = best.max(h_r(space, m, horizon)?.value / h_l(space, m, horizon)?.value);
    }
    Ok(best)
}

/// `max h_{R,l}(m,u)/h_{R,r}(m,u)` over `m ≤ m_max`, `m ≤ u ≤ H - m`.
pub fn superconservative_ratio(space: &SequenceSpace, m_max: usize, horizon: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for m in 1..=m_max {
        for u in m..=horizon.saturating_sub(m) {
            let l = h_restricted(space, m, u, Side::Left, horizon)?.value;
            let r = h_restricted(space, m, u, Side::Right, horizon)?.value;
            best = best.max(l / r);
        }
    }
    Ok(best)
}

/// Smallest `u ∈ [m, H]` with `h_r(m) ≤ 2 h_{R,l}(m, u)`.
pub fn characteristic_psi(space: &SequenceSpace, m: usize, horizon: usize) -> Result<usize> {
    let hr = h_r(space, m, horizon)?.value;
    for u in m..=horizon {
        if hr <= 2.0 * h_restricted(space, m, u, Side::Left, horizon)?.value + 1e-12 {
            return Ok(u);
        }
    }
    Err(LabError::HorizonTooSmall {
        horizon,
        needed: horizon + 1,
    })
}

/// The explicit sets that exhibit Property (W): an `n`-set after `m` whose
/// indicator reaches `h_r(n)`.
pub fn w_witness(space: &SequenceSpace, n: usize, m: usize) -> Option<SignedSet> {
    let idx: Vec<usize> = match space.kind {
        SpaceKind::SummingC0 => (m + 1..=m + n).collect(),
        SpaceKind::DifferenceL1 => (0..n).map(|i| m + 1 + 2 * i).collect(),
        SpaceKind::SchreierMod => (m * m + 1..=m * m + n).collect(),
        SpaceKind::MixNorm => {
            let first = if (m + 1) % 2 == 0 { m + 1 } else { m + 2 };
            (0..n).map(|i| first + 2 * i).collect()
        }
        SpaceKind::Lp(_) => return None,
    };
    SignedSet::positive(idx).ok()
}

/// The explicit sets behind Property (W*): `(C1, A)` with `A ⊆ [1, C1·m]`
/// and `‖1_{εA}‖` comparable to `h_l(m)`.
pub fn wstar_witness(space: &SequenceSpace, m: usize) -> Option<(usize, SignedSet)> {
    match space.kind {
        SpaceKind::SummingC0 => Some((1, SignedSet::alternating((1..=m).collect()).ok()?)),
        SpaceKind::DifferenceL1 | SpaceKind::SchreierMod => Some((1, SignedSet::positive((1..=m).collect()).ok()?)),
        SpaceKind::MixNorm => Some((2, SignedSet::positive((0..m).map(|i| 2 * i + 1).collect()).ok()?)),
        SpaceKind::Lp(_) => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyWReport {
    pub holds: bool,
    /// Smallest `C` with `h_r(n) ≤ C ‖1_{εA}‖` for a searched `A` after `m`.
    pub constant: f64,
    /// The same constant for the explicit witnesses of [`w_witness`].
    pub witness_constant: Option<f64>,
    /// `(n, m, best set after m, its norm)`
    pub witnesses: Vec<(usize, usize, SignedSet, f64)>,
}

pub fn check_property_w(space: &SequenceSpace, n_max: usize, m_max: usize, horizon: usize) -> Result<PropertyWReport> {
    if n_max == 0 || n_max > m_max || m_max > horizon {
        return invalid("need 1 ≤ n_max ≤ m_max ≤ horizon");
    }
    let mut constant = 0.0f64;
    let mut witness_constant: Option<f64> = None;
    let mut witnesses = Vec::new();
    for n in 1..=n_max {
        let hr = h_r(space, n, horizon)?.value;
        for m in n..=m_max {
            if horizon - m < n {
                return Err(LabError::HorizonTooSmall { horizon, needed: m + n });
            }
            let cand: Vec<usize> = (m + 1..=horizon).collect();
            let (v, set) = search(space, &cand, &[n], Goal::Max, DEFAULT_BUDGET)?;
            constant = constant.max(hr / v);
            witnesses.push((n, m, set, v));
            if let Some(w) = w_witness(space, n, m) {
                let c = hr / space.indicator_norm(&w);
                witness_constant = Some(witness_constant.map_or(c, |b| b.max(c)));
            }
        }
    }
    Ok(PropertyWReport {
        holds: constant.is_finite(),
        constant,
        witness_constant,
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyWStarReport {
    pub holds: bool,
    pub c1: usize,
    pub c2: f64,
    /// `C2` of the explicit witnesses with their own `C1`, if the space has them.
    pub witness_c1: Option<usize>,
    pub witness_c2: Option<f64>,
    /// For the chosen `C1`: `(m, minimising set in [1, C1·m], its norm, h_l(m))`.
    pub witnesses: Vec<(usize, SignedSet, f64, f64)>,
}

/// For each `C1 = 1, 2, …` (while `C1·m_max ≤ H` and the searches fit the
/// budget) computes `C2(C1) = max_m min_{A ⊆ [1, C1·m]} ‖1_{εA}‖ / h_l(m)`
/// and reports the smallest `C1` attaining the least `C2` seen.
pub fn check_property_wstar(space: &SequenceSpace, m_max: usize, horizon: usize) -> Result<PropertyWStarReport> {
    if m_max == 0 || m_max > horizon {
        return invalid("need 1 ≤ m_max ≤ horizon");
    }
    let hl: Vec<f64> = (1..=m_max)
        .map(|m| h_l(space, m, horizon).map(|r| r.value))
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, f64, Vec<(usize, SignedSet, f64, f64)>)> = None;
    let mut c1 = 1;
    while c1 * m_max <= horizon {
        let mut c2 = 0.0f64;
        let mut wit = Vec::new();
        let mut fits = true;
        for m in 1..=m_max {
            let cand: Vec<usize> = (1..=c1 * m).collect();
            match search(space, &cand, &[m], Goal::Min, DEFAULT_BUDGET) {
                Ok((v, set)) => {
                    c2 = c2.max(v / hl[m - 1]);
                    wit.push((m, set, v, hl[m - 1]));
                }
                Err(LabError::BudgetExceeded { .. }) => {
                    fits = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !fits {
            break;
        }
        if best.as_ref().map_or(true, |b| c2 < b.1 - 1e-9) {
            best = Some((c1, c2, wit));
        }
        // C2 cannot drop below 1 inside the horizon
        if c2 <= 1.0 + 1e-12 {
            break;
        }
        c1 += 1;
    }
    let (c1, c2, witnesses) = best.ok_or(LabError::BudgetExceeded {
        needed: f64::INFINITY,
        limit: DEFAULT_BUDGET,
    })?;
    let (mut witness_c1, mut witness_c2) = (None, None);
    for m in 1..=m_max {
        if let Some((k, set)) = wstar_witness(space, m) {
            witness_c1 = Some(k);
            let r = space.indicator_norm(&set) / hl[m - 1];
            witness_c2 = Some(witness_c2.map_or(r, |b: f64| b.max(r)));
        }
    }
    Ok(PropertyWStarReport {
        holds: c2.is_finite(),
        c1,
        c2,
        witness_c1,
        witness_c2,
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyIReport {
    pub holds: bool,
    /// `max h_{R,r}(2^{ℓ+1}u, u) / h_{R,r}(2^ℓ u, u)` over the scan.
    pub doubling_ratio: f64,
    /// `max h_{R,r}(u,u) / h_{R,r}(m,u)` over scanned `u ≤ ψ(m)`.
    pub comparison_ratio: f64,
    /// Whether every value came from an exhaustive search.
    pub exhaustive: bool,
}

/// Scans both conditions of Property (I) for `ℓ ≤ l_max`, `u ≤ u_max` and,
/// for the second, `m ≤ 2^{l_max+1} u_max`.
pub fn check_property_i(
    space: &SequenceSpace,
    psi: &dyn Fn(usize) -> usize,
    l_max: u32,
    u_max: usize,
    horizon: usize,
) -> Result<PropertyIReport> {
    let mut exhaustive = true;
    let mut h = |m: usize, u: usize| -> Result<f64> {
        let r = h_right_min(space, m, u, horizon)?;
        exhaustive &= r.exhaustive;
        Ok(r.value)
    };
    let mut doubling_ratio = 0.0f64;
    for u in 1..=u_max {
        for l in 0..=l_max {
            let lo = h((1 << l) * u, u)?;
            let hi = h((1 << (l + 1)) * u, u)?;
            doubling_ratio = doubling_ratio.max(hi / lo);
        }
    }
    let mut comparison_ratio = 0.0f64;
    let m_top = (1usize << (l_max + 1)) * u_max;
    for m in 1..=m_top {
        let bound = psi(m);
        for u in 1..=u_max.min(bound) {
            comparison_ratio = comparison_ratio.max(h(u, u)? / h(m, u)?);
        }
    }
    let holds = doubling_ratio.is_finite() && comparison_ratio.is_finite();
    Ok(PropertyIReport {
        holds,
        doubling_ratio,
        comparison_ratio,
        exhaustive,
    })
}

/// `x_{N,M} = 1_{[N+1, N+M]}`.
pub fn block(n: usize, m: usize) -> SignedSet {
    SignedSet::positive((n + 1..=n + m).collect()).expect("distinct indices")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summing_values() {
        let s = SequenceSpace::summing();
        let r = h_r(&s, 3, 8).unwrap();
        assert_eq!(r.value, 3.0);
        let l = h_l(&s, 3, 8).unwrap();
        assert_eq!(l.value, 1.0);
        assert_eq!(s.indicator_norm(&l.witness), l.value);
        assert!(!sign_invariant(&s));
        assert!(sign_invariant(&SequenceSpace::schreier()));
    }

    #[test]
    fn difference_and_schreier_values() {
        assert_eq!(h_r(&SequenceSpace::difference(), 2, 8).unwrap().value, 4.0);
        let r = h_r(&SequenceSpace::schreier(), 4, 19).unwrap();
        assert_eq!(r.value, 4.0);
        assert!(r.witness.indices()[0] >= 16);
        let d = SequenceSpace::difference();
        // signs allow the alternating block {2,3,4}: 1 + 2 + 2 + 1
        assert_eq!(h_restricted(&d, 3, 4, Side::Left, 10).unwrap().value, 6.0);
        assert_eq!(h_left_positive(&d, 3, 4).unwrap().value, 3.0);
        assert_eq!(h_restricted(&d, 2, 3, Side::Right, 12).unwrap().value, 2.0);
        assert_eq!(
            h_restricted(&SequenceSpace::summing(), 3, 5, Side::Left, 10)
                .unwrap()
                .value,
            3.0
        );
    }

    #[test]
    fn restricted_errors() {
        let d = SequenceSpace::difference();
        assert!(h_restricted(&d, 5, 4, Side::Left, 10).is_err());
        assert!(matches!(
            h_restricted(&d, 2, 10, Side::Right, 10),
            Err(LabError::HorizonTooSmall { .. })
        ));
        assert!(matches!(
            h_r_with_budget(&SequenceSpace::summing(), 6, 30, 1e3),
            Err(LabError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(characteristic_psi(&SequenceSpace::summing(), 3, 10).unwrap(), 3);
        // h_{R,l}(3,3) = 5 already; alternating block
        assert_eq!(characteristic_psi(&SequenceSpace::difference(), 3, 10).unwrap(), 3);
        assert_eq!(characteristic_psi(&SequenceSpace::lp(2.0).unwrap(), 3, 10).unwrap(), 3);
        assert!(characteristic_psi(&SequenceSpace::difference(), 3, 2).is_err());
    }

    #[test]
    fn difference_left_values() {
        let d = SequenceSpace::difference();
        for u in 1..=10 {
            for m in 1..=u {
                let signed = h_restricted(&d, m, u, Side::Left, u).unwrap().value;
                let expect = if u == m { 2 * m - 1 } else { 2 * m };
                assert_eq!(signed, expect as f64, "m={m} u={u}");
                let plain = h_left_positive(&d, m, u).unwrap().value;
                let expect = if u >= 2 * m { 2 * m } else { 2 * u - 2 * m + 1 };
                assert_eq!(plain, expect as f64, "m={m} u={u}");
            }
        }
    }

    #[test]
    fn ratios() {
        let l2 = SequenceSpace::lp(2.0).unwrap();
        assert!((superdemocracy_ratio(&l2, 4, 8).unwrap() - 1.0).abs() < 1e-12);
        let s = SequenceSpace::summing();
        assert!(superconservative_ratio(&s, 5, 12).unwrap() >= 5.0);
        assert!(superconservative_ratio(&SequenceSpace::schreier(), 3, 10).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn structural_minimisers_agree_with_search() {
        for space in SequenceSpace::bundled() {
            for u in 1..=4 {
                for m in 1..=4 {
                    let exact = h_restricted(&space, m, u, Side::Right, u + 2 * m + 6).unwrap();
                    let w = right_minimiser(&space, m, u).unwrap();
                    assert!((space.indicator_norm(&w) - exact.value).abs() < 1e-12);
                    let r = h_right_min(&space, m, u, u + 2 * m + 6).unwrap();
                    assert!(r.exhaustive);
                    assert_eq!(exact.value, r.value);
                }
            }
        }
    }
}
