//! Thresholding greedy machinery: greedy sets, greedy and partial-sum
//! errors, truncation operators and the constants `A_p`, `η_p`.

use serde::{Deserialize, Serialize};

use crate::combin::for_each_combination;
use crate::error::{invalid, LabError, Result};
use crate::spaces::{SequenceSpace, SpaceKind};
use crate::vector::SparseVector;

/// Default number of greedy sets enumerated before giving up on ties.
pub const DEFAULT_CAP: usize = 10_000;

/// A computed quantity that is exact unless `truncated` is set, in which case
/// it is a bound from the enumerated part only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub truncated: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            truncated: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedySetFamily {
    pub order: usize,
    /// Each set sorted ascending; sets listed in enumeration order.
    pub sets: Vec<Vec<usize>>,
    pub truncated: bool,
}

/// Split of the support at the `m`-th largest modulus: indices strictly above
/// the threshold are in every greedy set, `need` of the `tied` ones complete it.
#[derive(Clone, Debug)]
pub(crate) struct TieSplit {
    pub fixed: Vec<usize>,
    pub tied: Vec<usize>,
    pub need: usize,
}

/// Requires `1 ≤ m < |supp x|`.
pub(crate) fn tie_split(x: &SparseVector, m: usize) -> TieSplit {
    debug_assert!(m >= 1 && m < x.len());
    let mut mods: Vec<f64> = x.iter().map(|e| e.1.abs()).collect();
    mods.sort_unstable_by(|a, b| b.total_cmp(a));
    let t = mods[m - 1];
    let fixed: Vec<usize> = x.iter().filter(|e| e.1.abs() > t).map(|e| e.0).collect();
    let tied: Vec<usize> = x.iter().filter(|e| e.1.abs() == t).map(|e| e.0).collect();
    let need = m - fixed.len();
    TieSplit { fixed, tied, need }
}

fn merged(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

/// All greedy sets of order `m`, up to `cap` of them.
///
/// When `m` exceeds the support, the support is padded with the smallest
/// unused indices; every zero coordinate is tied, so the family is infinite
/// and the result is marked truncated.
pub fn greedy_sets(x: &SparseVector, m: usize, cap: usize) -> Result<GreedySetFamily> {
    if cap < 1 {
        return invalid("cap must be at least 1");
    }
    if m == 0 {
        return Ok(GreedySetFamily {
            order: 0,
            sets: vec![vec![]],
            truncated: false,
        });
    }
    if m >= x.len() {
        let mut set = x.support();
        let mut n = 1;
        while set.len() < m {
            if x.get(n) == 0.0 {
                set.push(n);
            }
            n += 1;
        }
        set.sort_unstable();
        return Ok(GreedySetFamily {
            order: m,
            sets: vec![set],
            truncated: m > x.len(),
        });
    }
    let split = tie_split(x, m);
    let mut sets = Vec::new();
    let mut truncated = false;
    for_each_combination(&split.tied, split.need, |c| {
        if sets.len() == cap {
            truncated = true;
            return false;
        }
        sets.push(merged(&split.fixed, c));
        true
    });
    Ok(GreedySetFamily {
        order: m,
        sets,
        truncated,
    })
}

/// The `m`-th greedy error: worst residual `‖x - P_A x‖` over greedy sets `A`.
pub fn gamma(space: &SequenceSpace, x: &SparseVector, m: usize, cap: usize) -> Result<Estimate> {
    if cap < 1 {
        return invalid("cap must be at least 1");
    }
    if m >= x.len() {
        return Ok(Estimate::exact(0.0));
    }
    if m == 0 {
        return Ok(Estimate::exact(space.norm(x)));
    }
    let split = tie_split(x, m);
    match space.kind {
        // the residual's modulus profile does not depend on the tie choice
        SpaceKind::Lp(_) => {
            let a = merged(&split.fixed, &split.tied[..split.need]);
            Ok(Estimate::exact(space.norm(&x.remove(&a))))
        }
        // the Lorentz term sees only moduli; leaving even indices behind
        // maximises the ℓ_2 term
        SpaceKind::MixNorm => {
            let mut order: Vec<usize> = split.tied.clone();
            order.sort_by_key(|&n| (n % 2 == 0, n));
            let a = merged(&split.fixed, &order[..split.need]);
            Ok(Estimate::exact(space.norm(&x.remove(&a))))
        }
        _ => {
            let mut best = 0.0f64;
            let mut count = 0usize;
            let mut truncated = false;
            for_each_combination(&split.tied, split.need, |c| {
                if count == cap {
                    truncated = true;
                    return false;
                }
                count += 1;
                let a = merged(&split.fixed, c);
                best = best.max(space.norm(&x.remove(&a)));
                true
            });
            Ok(Estimate { value: best, truncated })
        }
    }
}

/// `β_m(x) = ‖x - S_m x‖`.
pub fn beta(space: &SequenceSpace, x: &SparseVector, m: usize) -> f64 {
    let tail: Vec<(usize, f64)> = x.iter().filter(|e| e.0 > m).collect();
    space.norm_entries(&tail)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruncationKind {
    U,
    T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationResult {
    pub vector: SparseVector,
    pub kind: TruncationKind,
    /// Set when `A` reaches outside the support, which forces `U = 0`.
    pub outside_support: bool,
}

/// `U(x,A) = min_{n∈A}|x_n| Σ_{n∈A} sgn(x_n) e_n` and `T(x,A) = U(x,A) + P_{A^c} x`.
pub fn truncate(x: &SparseVector, a: &[usize], kind: TruncationKind) -> TruncationResult {
    let outside_support = a.iter().any(|&n| x.get(n) == 0.0);
    let mut u = SparseVector::new();
    if !a.is_empty() && !outside_support {
        let level = a.iter().map(|&n| x.get(n).abs()).fold(f64::INFINITY, f64::min);
        for &n in a {
            u.set(n, level * x.get(n).signum());
        }
    }
    let vector = match kind {
        TruncationKind::U => u,
        TruncationKind::T => &u + &x.remove(a),
    };
    TruncationResult {
        vector,
        kind,
        outside_support,
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return invalid(format!("p must lie in (0, 1], got {p}"));
    }
    Ok(())
}

/// `A_p = (2^p - 1)^{-1/p}`.
pub fn a_p(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok((2f64.powf(p) - 1.0).powf(-1.0 / p))
}

pub(crate) fn eta_objective(t: f64, u: f64, p: f64, ap: f64) -> f64 {
    let first = (1.0 - t.powf(p)).powf(-1.0 / p);
    let second = (1.0 - (1.0 + t / (ap * u)).powf(-p)).powf(-1.0 / p);
    first * second
}

/// `η_p(u) = min_{0<t<1} (1-t^p)^{-1/p} (1 - (1 + t/(A_p u))^{-p})^{-1/p}`
/// together with the minimising `t`.
pub fn eta_p_argmin(u: f64, p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    if !(u > 0.0 && u.is_finite()) {
        return invalid(format!("u must be positive, got {u}"));
    }
    let ap = a_p(p)?;
    let f = |t: f64| eta_objective(t, u, p, ap);
    const GRID: usize = 10_000;
    let h = 1.0 / (GRID + 1) as f64;
    let (mut best_i, mut best) = (1, f64::INFINITY);
    for i in 1..=GRID {
        let val = f(i as f64 * h);
        if val < best {
            best = val;
            best_i = i;
        }
    }
    let (t, val) = golden_min(f, (best_i as f64 - 1.0) * h, (best_i as f64 + 1.0) * h, 1e-13);
    Ok(if val < best {
        (val, t)
    } else {
        (best, best_i as f64 * h)
    })
}

pub fn eta_p(u: f64, p: f64) -> Result<f64> {
    Ok(eta_p_argmin(u, p)?.0)
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`;
/// returns `(argmin, min)`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + a.abs() + b.abs()) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    let ft = f(t);
    let mut best = (t, ft);
    for cand in [(c, fc), (d, fd)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Lower estimate of the quasi-greedy constant: max of `γ_m(x)/‖x‖`.
pub fn quasi_greedy_estimate(space: &SequenceSpace, sample: &[SparseVector], cap: usize) -> Result<Estimate> {
    let mut out = Estimate::exact(0.0);
    for x in sample {
        let nx = space.norm(x);
        if nx == 0.0 {
            return Err(LabError::ZeroDenominator("sample vector has zero norm".into()));
        }
        for m in 1..=x.len() {
            let g = gamma(space, x, m, cap)?;
            out.value = out.value.max(g.value / nx);
            out.truncated |= g.truncated;
        }
    }
    Ok(out)
}
