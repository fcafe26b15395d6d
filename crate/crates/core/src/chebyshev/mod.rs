//! Best coefficients on a fixed index set, the Chebyshev-greedy error `ϑ_m`,
//! the best `m`-term error `σ_m` and the constant budgets relating the
//! greedy-type constants.

pub mod descent;
pub mod exact;
pub mod lp;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, for_each_combination};
use crate::error::{invalid, LabError, Result};
use crate::greedy::{a_p, eta_p, tie_split, Estimate};
use crate::spaces::{SequenceSpace, SpaceKind};
use crate::vector::SparseVector;

pub use exact::best_residual;

/// Largest number of candidate sets `sigma` is willing to try.
pub const SIGMA_BUDGET: f64 = 1e6;

/// Default off-support window for `sigma`.
pub fn default_window(space: &SequenceSpace) -> usize {
    if space.unconditional {
        0
    } else {
        4
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Lp,
    Descent,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSolution {
    pub support: Vec<usize>,
    /// `(n, a_n)` for each `n` in `support`.
    pub coefficients: Vec<(usize, f64)>,
    pub residual: f64,
    pub method: SolveMethod,
    /// The residual agrees with the closed-form optimum to `1e-9` and, for
    /// descent, the iteration stopped on its gain criterion.
    pub certified: bool,
}

fn normalize_set(a: &[usize]) -> Result<Vec<usize>> {
    let mut a = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.first() == Some(&0) {
        return invalid("indices start at 1");
    }
    Ok(a)
}

fn residual_vector(x: &SparseVector, coefficients: &[(usize, f64)]) -> SparseVector {
    let mut y = x.clone();
    for &(n, c) in coefficients {
        y.set(n, x.get(n) - c);
    }
    y
}

/// Minimises `‖x - Σ_{n∈A} a_n e_n‖` over real `a_n`.
///
/// Summing, difference and Schreier norms go through a linear program;
/// `ℓ_p` and the mixed norm through multistart coordinate descent. The result
/// is never worse than plain projection.
pub fn chebyshev_project(space: &SequenceSpace, x: &SparseVector, a: &[usize]) -> Result<ChebyshevSolution> {
    let a = normalize_set(a)?;
    let projection: Vec<(usize, f64)> = a.iter().map(|&n| (n, x.get(n))).collect();
    let proj_residual = space.norm(&x.remove(&a));
    let closed = best_residual(space, x, &a);
    let (method, mut coefficients, converged) = match space.kind {
        SpaceKind::SummingC0 | SpaceKind::DifferenceL1 | SpaceKind::SchreierMod => {
            let (_, c) = lp::solve(space, x, &a)?;
            (SolveMethod::Lp, a.iter().copied().zip(c).collect::<Vec<_>>(), true)
        }
        SpaceKind::Lp(_) | SpaceKind::MixNorm => {
            let r = descent::minimize(space, x, &a);
            (
                SolveMethod::Descent,
                a.iter().copied().zip(r.coefficients).collect(),
                r.converged,
            )
        }
    };
    let mut residual = space.norm(&residual_vector(x, &coefficients));
    if residual > proj_residual {
        coefficients = projection;
        residual = proj_residual;
    }
    let certified = converged && (residual - closed).abs() <= 1e-9 * (1.0 + closed);
    Ok(ChebyshevSolution {
        support: a,
        coefficients,
        residual,
        method,
        certified,
    })
}

/// Dense grid search for the best coefficients on `|A| ≤ 2` indices: every
/// coefficient ranges over `{k·step : |k·step| ≤ half_width}`. Used as an
/// oracle for the solvers.
pub fn grid_search(
    space: &SequenceSpace,
    x: &SparseVector,
    a: &[usize],
    step: f64,
    half_width: f64,
) -> Result<ChebyshevSolution> {
    let a = normalize_set(a)?;
    if a.len() > 2 {
        return invalid("grid search supports at most two free coefficients");
    }
    if !(step > 0.0 && half_width >= 0.0) {
        return invalid("grid needs a positive step and a nonnegative half width");
    }
    let k = (half_width / step + 1e-9).floor() as i64;
    let axis: Vec<f64> = (-k..=k).map(|i| i as f64 * step).collect();
    let mut base: Vec<(usize, f64)> = x.iter().collect();
    for &n in &a {
        if x.get(n) == 0.0 {
            base.push((n, 0.0));
        }
    }
    base.sort_unstable_by_key(|e| e.0);
    let slots: Vec<usize> = a
        .iter()
        .map(|n| base.binary_search_by_key(n, |e| e.0).expect("present"))
        .collect();
    let eval = |c: &[f64], buf: &mut Vec<(usize, f64)>| {
        buf.clear();
        buf.extend_from_slice(&base);
        for (&s, &v) in slots.iter().zip(c) {
            buf[s].1 -= v;
        }
        space.norm_entries(buf)
    };
    let (value, coefs) = match a.len() {
        0 => (space.norm(x), vec![]),
        1 => axis
            .iter()
            .map(|&c| (eval(&[c], &mut Vec::new()), vec![c]))
            .fold((f64::INFINITY, vec![]), |b, c| if c.0 < b.0 { c } else { b }),
        _ => {
            let (v, i, j) = axis
                .par_iter()
                .enumerate()
                .map(|(i, &c0)| {
                    let mut buf = Vec::with_capacity(base.len());
                    let mut best = (f64::INFINITY, i, 0usize);
                    for (j, &c1) in axis.iter().enumerate() {
                        let v = eval(&[c0, c1], &mut buf);
                        if v < best.0 {
                            best = (v, i, j);
                        }
                    }
                    best
                })
                // first minimiser in row-major order, whatever the scheduling
                .reduce(
                    || (f64::INFINITY, usize::MAX, usize::MAX),
                    |p, q| {
                        if q.0 < p.0 || (q.0 == p.0 && (q.1, q.2) < (p.1, p.2)) {
                            q
                        } else {
                            p
                        }
                    },
                );
            (v, vec![axis[i], axis[j]])
        }
    };
    Ok(ChebyshevSolution {
        coefficients: a.iter().copied().zip(coefs).collect(),
        support: a,
        residual: value,
        method: SolveMethod::Grid,
        certified: false,
    })
}

/// `ϑ_m(x)`: worst optimal residual over the greedy sets of order `m`.
///
/// Residuals come from the closed forms in [`exact`]; the summing basis uses
/// the exact pair sweep and never truncates.
pub fn theta(space: &SequenceSpace, x: &SparseVector, m: usize, cap: usize) -> Result<Estimate> {
    if cap < 1 {
        return invalid("cap must be at least 1");
    }
    if m >= x.len() {
        return Ok(Estimate::exact(0.0));
    }
    if m == 0 {
        return Ok(Estimate::exact(space.norm(x)));
    }
    if space.projection_is_optimal() {
        return crate::greedy::gamma(space, x, m, cap);
    }
    if space.kind == SpaceKind::SummingC0 {
        return Ok(Estimate::exact(exact::summing_theta_profile(x, m)[m - 1]));
    }
    let split = tie_split(x, m);
    let mut best = 0.0f64;
    let mut count = 0;
    let mut truncated = false;
    for_each_combination(&split.tied, split.need, |c| {
        if count == cap {
            truncated = true;
            return false;
        }
        count += 1;
        let mut set: Vec<usize> = split.fixed.iter().chain(c).copied().collect();
        set.sort_unstable();
        best = best.max(best_residual(space, x, &set));
        true
    });
    Ok(Estimate { value: best, truncated })
}

/// Candidate free coordinates for `σ_m`.
///
/// Lattice norms need only the support. The summing basis never gains from
/// an off-support coordinate. The difference basis does gain from interior
/// gaps (freeing the zero between two equal entries merges them), so every
/// index up to the end of the support is a candidate, followed by the
/// caller's window.
pub fn sigma_candidates(space: &SequenceSpace, x: &SparseVector, window: usize) -> Vec<usize> {
    let Some(last) = x.max_index() else {
        return vec![];
    };
    match space.kind {
        SpaceKind::DifferenceL1 => (1..=last + window).collect(),
        SpaceKind::SummingC0 => {
            let mut c = x.support();
            c.extend(last + 1..=last + window);
            c
        }
        _ => x.support(),
    }
}

/// `σ_m(x)`: smallest optimal residual over index sets of size at most `m`.
pub fn sigma(space: &SequenceSpace, x: &SparseVector, m: usize, window: usize) -> Result<f64> {
    if m >= x.len() {
        return Ok(0.0);
    }
    if m == 0 {
        return Ok(space.norm(x));
    }
    match space.kind {
        SpaceKind::SummingC0 => return Ok(exact::summing_sigma(x, m)),
        // dropping the m largest entries is optimal
        SpaceKind::Lp(_) => {
            let mut ord = x.entries().to_vec();
            ord.sort_by(|p, q| q.1.abs().total_cmp(&p.1.abs()).then(p.0.cmp(&q.0)));
            let a: Vec<usize> = ord[..m].iter().map(|e| e.0).collect();
            return Ok(space.norm(&x.remove(&a)));
        }
        _ => {}
    }
    let cand = sigma_candidates(space, x, window);
    let k = m.min(cand.len());
    let need = binomial(cand.len(), k);
    if need > SIGMA_BUDGET {
        return Err(LabError::BudgetExceeded {
            needed: need,
            limit: SIGMA_BUDGET,
        });
    }
    // Sets of size exactly k suffice: extra free coordinates never hurt.
    let mut best = f64::INFINITY;
    for_each_combination(&cand, k, |c| {
        best = best.min(best_residual(space, x, c));
        best > 0.0
    });
    Ok(best)
}

/// `σ_n` for `n = 1..=len`.
pub fn sigma_profile(space: &SequenceSpace, x: &SparseVector, len: usize, window: usize) -> Result<Vec<f64>> {
    if space.kind == SpaceKind::SummingC0 {
        return Ok(exact::summing_sigma_profile(x, len));
    }
    (1..=len).map(|n| sigma(space, x, n, window)).collect()
}

/// `ϑ_n` for `n = 1..=len`.
pub fn theta_profile(space: &SequenceSpace, x: &SparseVector, len: usize, cap: usize) -> Result<Vec<Estimate>> {
    if space.kind == SpaceKind::SummingC0 {
        return Ok(exact::summing_theta_profile(x, len)
            .into_iter()
            .map(Estimate::exact)
            .collect());
    }
    (1..=len).map(|n| theta(space, x, n, cap)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBudget {
    /// Bound on the semi-greedy constant from `C_q`, `C_sd` and `η_p`.
    pub c_sg_bound: f64,
    /// Bound on the super-democracy constant from `K_b` and `C_sg`.
    pub c_sd_bound: f64,
    /// Bound on the quasi-greedy constant from `K_b` and `C_sg`.
    pub c_q_bound: f64,
}

/// Evaluates the three displayed bounds linking the quasi-greedy constant
/// `C_q`, the super-democracy constant `C_sd`, the basis constant `K_b` and
/// the semi-greedy constant `C_sg`:
///
/// * `C_sg ≤ (2(C_q² η_p(C_q))^p + (2 A_p C_sd C_q² η_p(C_q))^p)^{1/p}`
/// * `C_sd ≤ K_b (1 + K_b) C_sg²`
/// * `C_q ≤ K_b C_sg (1 + (1 + K_b)^p C_sg^p)^{1/p}`
///
/// `c_sg` is the semi-greedy constant fed into the last two.
pub fn constant_budget(c_q: f64, c_sd: f64, k_b: f64, c_sg: f64, p: f64) -> Result<ConstantBudget> {
    for (name, v) in [("C_q", c_q), ("C_sd", c_sd), ("K_b", k_b), ("C_sg", c_sg)] {
        if !(v >= 1.0 && v.is_finite()) {
            return invalid(format!("{name} must be a finite number ≥ 1, got {v}"));
        }
    }
    let ap = a_p(p)?;
    let eta = eta_p(c_q, p)?;
    let core = c_q * c_q * eta;
    let c_sg_bound = ((2.0 * core).powf(p) + (2.0 * ap * c_sd * core).powf(p)).powf(1.0 / p);
    let c_sd_bound = k_b * (1.0 + k_b) * c_sg * c_sg;
    let c_q_bound = k_b * c_sg * (1.0 + (1.0 + k_b).powf(p) * c_sg.powf(p)).powf(1.0 / p);
    Ok(ConstantBudget {
        c_sg_bound,
        c_sd_bound,
        c_q_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(d: &[f64]) -> SparseVector {
        SparseVector::from_dense(d).unwrap()
    }

    #[test]
    fn project_examples() {
        let s = SequenceSpace::summing();
        let sol = chebyshev_project(&s, &v(&[1.0, 1.0]), &[1]).unwrap();
        assert!((sol.coefficients[0].1 - 1.5).abs() < 1e-9);
        assert!((sol.residual - 0.5).abs() < 1e-9);
        assert!(sol.certified);
        assert_eq!(sol.method, SolveMethod::Lp);

        let l2 = SequenceSpace::lp(2.0).unwrap();
        let sol = chebyshev_project(&l2, &v(&[3.0, 2.0, 1.0]), &[2]).unwrap();
        assert!((sol.coefficients[0].1 - 2.0).abs() < 1e-6);
        assert!((sol.residual - 10f64.sqrt()).abs() < 1e-9);
        assert_eq!(sol.method, SolveMethod::Descent);

        for space in SequenceSpace::bundled() {
            let x = v(&[1.0, -2.0, 0.5]);
            let sol = chebyshev_project(&space, &x, &[1, 2, 3, 5]).unwrap();
            assert!(sol.residual < 1e-9, "{space}");
            for (n, c) in sol.coefficients.iter().take(3) {
                assert!((c - x.get(*n)).abs() < 1e-6, "{space}");
            }
        }
    }

    #[test]
    fn lexicographic_choice() {
        // x = e_1 and A = {2} in the summing basis: every a_2 in [0, 2]
        // leaves residual 1, and the smallest is returned
        let s = SequenceSpace::summing();
        let sol = chebyshev_project(&s, &SparseVector::unit(1).unwrap(), &[2]).unwrap();
        assert!((sol.residual - 1.0).abs() < 1e-12);
        assert!(sol.coefficients[0].1.abs() < 1e-8);
    }

    #[test]
    fn theta_examples() {
        let s = SequenceSpace::summing();
        assert_eq!(theta(&s, &v(&[1.0, 1.0]), 1, 10).unwrap().value, 1.0);
        assert_eq!(theta(&s, &v(&[1.0, 1.0]), 2, 10).unwrap().value, 0.0);
        let l2 = SequenceSpace::lp(2.0).unwrap();
        let t = theta(&l2, &v(&[3.0, 2.0, 1.0]), 1, 10).unwrap().value;
        assert!((t - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sigma_examples() {
        let s = SequenceSpace::summing();
        assert_eq!(sigma(&s, &v(&[1.0, 1.0]), 1, 2).unwrap(), 0.5);
        let l1 = SequenceSpace::lp(1.0).unwrap();
        assert_eq!(sigma(&l1, &v(&[3.0, 2.0, 1.0]), 1, 0).unwrap(), 3.0);
        assert_eq!(sigma(&l1, &v(&[3.0, 2.0, 1.0]), 3, 0).unwrap(), 0.0);
        // interior gap in the difference basis
        let d = SequenceSpace::difference();
        assert_eq!(sigma(&d, &v(&[1.0, 0.0, 1.0]), 1, 0).unwrap(), 1.0);
    }

    #[test]
    fn sigma_budget() {
        let d = SequenceSpace::difference();
        let x = SparseVector::from_pairs((1..=30).map(|n| (n * 3, 1.0 + n as f64))).unwrap();
        assert!(matches!(sigma(&d, &x, 10, 4), Err(LabError::BudgetExceeded { .. })));
    }

    #[test]
    fn budget_examples() {
        let b = constant_budget(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.c_sd_bound, 2.0);
        assert_eq!(b.c_q_bound, 3.0);
        let eta = 3.0 + 2.0 * 2f64.sqrt();
        assert!((b.c_sg_bound - 4.0 * eta).abs() < 1e-6);
        assert!((b.c_sg_bound - 23.3137).abs() < 1e-4);
        assert!(constant_budget(0.5, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(constant_budget(1.0, 1.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn grid_oracle_small() {
        let s = SequenceSpace::summing();
        let g = grid_search(&s, &v(&[1.0, 1.0]), &[1], 1e-3, 2.0).unwrap();
        assert!((g.residual - 0.5).abs() < 1e-9);
        assert!(grid_search(&s, &v(&[1.0]), &[1, 2, 3], 0.1, 1.0).is_err());
    }
}
