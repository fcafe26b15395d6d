//! Weights `ω: ℕ → (0, ∞)`, their summing weights, dilation sequences and
//! indices, doubling and regularity diagnostics, all over explicit finite
//! scan ranges.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, LabError, Result};

#[derive(Clone)]
pub enum WeightFormula {
    /// `n^α`
    Power(f64),
    /// `√n · ln(n+1)^γ`
    SqrtLog(f64),
    /// `ln(n+1)`
    Log,
    /// `b^n`
    Exponential(f64),
    /// `table[n-1]`, held at the last value past the end.
    Table(Vec<f64>),
    Custom {
        id: String,
        f: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    },
}

#[derive(Clone)]
pub struct Weight {
    pub formula: WeightFormula,
    pub theta_claim: Option<f64>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.id())
    }
}

impl Weight {
    pub fn new(formula: WeightFormula) -> Self {
        Self {
            formula,
            theta_claim: None,
        }
    }

    pub fn power(alpha: f64) -> Self {
        Self::new(WeightFormula::Power(alpha))
    }

    pub fn sqrt_log(gamma: f64) -> Self {
        Self::new(WeightFormula::SqrtLog(gamma))
    }

    pub fn log() -> Self {
        Self::new(WeightFormula::Log)
    }

    pub fn exponential(base: f64) -> Self {
        Self::new(WeightFormula::Exponential(base))
    }

    pub fn custom(id: impl Into<String>, f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(WeightFormula::Custom {
            id: id.into(),
            f: Arc::new(f),
        })
    }

    pub fn with_theta_claim(mut self, theta: f64) -> Self {
        self.theta_claim = Some(theta);
        self
    }

    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        match &self.formula {
            WeightFormula::Power(a) => x.powf(*a),
            WeightFormula::SqrtLog(g) => x.sqrt() * (x + 1.0).ln().powf(*g),
            WeightFormula::Log => (x + 1.0).ln(),
            WeightFormula::Exponential(b) => b.powf(x),
            WeightFormula::Table(t) => t[(n.max(1) - 1).min(t.len() - 1)],
            WeightFormula::Custom { f, .. } => f(n),
        }
    }

    pub fn id(&self) -> String {
        match &self.formula {
            WeightFormula::Power(a) => format!("power:{a}"),
            WeightFormula::SqrtLog(g) => format!("sqrtlog:{g}"),
            WeightFormula::Log => "log".into(),
            WeightFormula::Exponential(b) => format!("exp:{b}"),
            WeightFormula::Table(t) => {
                let body: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                format!("table:{}", body.join(","))
            }
            WeightFormula::Custom { id, .. } => id.clone(),
        }
    }

    /// Positive and nondecreasing on `1..=n_max`.
    pub fn is_admissible(&self, n_max: usize) -> bool {
        let mut prev = 0.0;
        for n in 1..=n_max {
            let w = self.eval(n);
            if !(w > 0.0 && w.is_finite()) || w < prev {
                return false;
            }
            prev = w;
        }
        true
    }
}

impl FromStr for Weight {
    type Err = LabError;

    /// `power:A`, `sqrtlog:G`, `log`, `exp:B`, `table:w1,w2,...`; also the
    /// shorthands `sqrt` (= `power:0.5`) and `sqrt*log` (= `sqrtlog:1`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| LabError::InvalidArgument(format!("bad number '{v}' in weight '{s}'")))
        };
        let w = match t {
            "log" => Self::log(),
            "sqrt" => Self::power(0.5),
            "sqrt*log" | "sqrtlog" => Self::sqrt_log(1.0),
            _ => match t.split_once(':') {
                Some(("power", a)) => Self::power(num(a)?),
                Some(("sqrtlog", g)) => Self::sqrt_log(num(g)?),
                Some(("exp", b)) => Self::exponential(num(b)?),
                Some(("table", body)) => {
                    let vals = body.split(',').map(num).collect::<Result<Vec<f64>>>()?;
                    if vals.is_empty() {
                        return invalid("empty weight table");
                    }
                    Self::new(WeightFormula::Table(vals))
                }
                _ => return invalid(format!("unknown weight '{s}'")),
            },
        };
        Ok(w)
    }
}

/// `ω̃(m) = Σ_{n≤m} ω(n)/n`.
pub fn summing_weight(w: &Weight, m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("summing weight needs m ≥ 1");
    }
    Ok((1..=m).map(|n| w.eval(n) / n as f64).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DilationReport {
    pub m: usize,
    /// `min_{k ≤ k_max} ω(Mk)/ω(k)`
    pub phi_hat: f64,
    /// `max_{k ≤ k_max} ω(Mk)/ω(k)`
    pub big_phi_hat: f64,
    pub k_max: usize,
}

pub fn dilation_bounds(w: &Weight, m: usize, k_max: usize) -> Result<DilationReport> {
    if m == 0 || k_max == 0 {
        return invalid("dilation bounds need M ≥ 1 and k_max ≥ 1");
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 1..=k_max {
        let r = w.eval(m * k) / w.eval(k);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(DilationReport {
        m,
        phi_hat: lo,
        big_phi_hat: hi,
        k_max,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexReport {
    pub i_hat: f64,
    pub big_i_hat: f64,
    pub m_max: usize,
    pub k_max: usize,
    /// Per-`M` bounds for `M = 2..=m_max`.
    pub bounds: Vec<DilationReport>,
}

/// `î = max_M ln φ̂(M)/ln M` and `Î = min_M ln Φ̂(M)/ln M` over `M ∈ [2, M_max]`.
pub fn dilation_indices(w: &Weight, m_max: usize, k_max: usize) -> Result<IndexReport> {
    if m_max < 2 || k_max == 0 {
        return invalid("dilation indices need M_max ≥ 2 and k_max ≥ 1");
    }
    let bounds: Vec<DilationReport> = (2..=m_max)
        .into_par_iter()
        .map(|m| dilation_bounds(w, m, k_max))
        .collect::<Result<_>>()?;
    let mut i_hat = f64::NEG_INFINITY;
    let mut big_i_hat = f64::INFINITY;
    for b in &bounds {
        let l = (b.m as f64).ln();
        i_hat = i_hat.max(b.phi_hat.ln() / l);
        big_i_hat = big_i_hat.min(b.big_phi_hat.ln() / l);
    }
    Ok(IndexReport {
        i_hat,
        big_i_hat,
        m_max,
        k_max,
        bounds,
    })
}

/// `θ̂ = max_{n ≤ n_max} ω(2n)/ω(n)`.
pub fn check_doubling(w: &Weight, n_max: usize) -> Result<f64> {
    if n_max == 0 {
        return invalid("n_max must be at least 1");
    }
    Ok((1..=n_max)
        .map(|n| w.eval(2 * n) / w.eval(n))
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regularity {
    /// `ω(N)(k/N)^α ≥ C ω(k)` for `k ≤ N`
    Lower,
    /// `ω(N)(k/N)^β ≤ C ω(k)` for `k ≤ N`
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    /// Extremal constant over `1 ≤ k ≤ N ≤ k_range`.
    pub constant: f64,
    /// The same constant over the half range `N ≤ k_range/2`.
    pub half_range_constant: f64,
    pub holds: bool,
    pub k_range: usize,
    /// `max ω(Mk)/(M^α ω(k))` over `M ≤ 64`, `k ≤ 256`, reported when the
    /// exponent exceeds the upper index estimate on that grid.
    pub dilation_constant: Option<f64>,
}

/// Relative drift of the constant between the half and the full range that
/// is still read as convergence.
pub const REGULARITY_DRIFT: f64 = 0.01;

/// Scans the lower or upper regularity constant.
///
/// A finite scan always produces a positive, finite constant, so `holds`
/// also asks that doubling the range moves the constant by at most
/// [`REGULARITY_DRIFT`] in the bad direction; a property that fails only
/// asymptotically shows up as steady drift.
pub fn regularity_check(w: &Weight, exponent: f64, mode: Regularity, k_range: usize) -> Result<RegularityReport> {
    match mode {
        Regularity::Lower if exponent <= 0.0 => return invalid("lower regularity needs α > 0"),
        Regularity::Upper if exponent >= 1.0 => return invalid("upper regularity needs β < 1"),
        _ => {}
    }
    if k_range < 2 {
        return invalid("k_range must be at least 2");
    }
    let half = k_range / 2;
    let wk: Vec<f64> = (0..=k_range).map(|n| if n == 0 { 0.0 } else { w.eval(n) }).collect();
    let lower = mode == Regularity::Lower;
    let per_n: Vec<f64> = (1..=k_range)
        .into_par_iter()
        .map(|n| {
            let mut ext = if lower { f64::INFINITY } else { f64::NEG_INFINITY };
            for k in 1..=n {
                let r = wk[n] * (k as f64 / n as f64).powf(exponent) / wk[k];
                ext = if lower { ext.min(r) } else { ext.max(r) };
            }
            ext
        })
        .collect();
    let fold = |s: &[f64]| {
        s.iter()
            .copied()
            .fold(if lower { f64::INFINITY } else { f64::NEG_INFINITY }, |a, b| {
                if lower {
                    a.min(b)
                } else {
                    a.max(b)
                }
            })
    };
    let constant = fold(&per_n);
    let half_range_constant = fold(&per_n[..half]);
    let holds = if lower {
        constant > 1e-6 && constant >= (1.0 - REGULARITY_DRIFT) * half_range_constant
    } else {
        constant.is_finite() && constant <= (1.0 + REGULARITY_DRIFT) * half_range_constant
    };
    let dilation_constant = if mode == Regularity::Upper {
        let idx = dilation_indices(w, 64, 256)?;
        (exponent > idx.big_i_hat).then(|| {
            let mut c = f64::NEG_INFINITY;
            for m in 1..=64usize {
                for k in 1..=256usize {
                    c = c.max(w.eval(m * k) / ((m as f64).powf(exponent) * w.eval(k)));
                }
            }
            c
        })
    } else {
        None
    };
    Ok(RegularityReport {
        constant,
        half_range_constant,
        holds,
        k_range,
        dilation_constant,
    })
}

/// `max_{N ≤ N_max} ω̃(N)/ω(N)`.
pub fn equiv_ratio(w: &Weight, n_max: usize) -> Result<f64> {
    if n_max == 0 {
        return invalid("N_max must be at least 1");
    }
    let mut acc = 0.0;
    let mut best = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let wn = w.eval(n);
        acc += wn / n as f64;
        best = best.max(acc / wn);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summing_weight_examples() {
        assert!((summing_weight(&Weight::power(1.0), 7).unwrap() - 7.0).abs() < 1e-12);
        let s = summing_weight(&Weight::power(0.5), 4).unwrap();
        assert!((s - (1.0 + 0.5f64.sqrt() + 1.0 / 3f64.sqrt() + 0.5)).abs() < 1e-12);
        let w = Weight::power(1.0);
        let theta = check_doubling(&w, 8).unwrap();
        assert!(w.eval(8) <= theta / 2f64.ln() * summing_weight(&w, 8).unwrap());
        assert!(summing_weight(&w, 0).is_err());
    }

    #[test]
    fn dilation_examples() {
        let r = dilation_bounds(&Weight::power(1.0), 3, 100).unwrap();
        assert!((r.phi_hat - 3.0).abs() < 1e-12 && (r.big_phi_hat - 3.0).abs() < 1e-12);
        let r = dilation_bounds(&Weight::log(), 2, 1 << 12).unwrap();
        assert!((r.big_phi_hat - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
        assert!(r.phi_hat <= 1.1);
        // the finite scan stops at k = 4096 where ln(8193)/ln(4097) ≈ 1.083
        assert!((r.phi_hat - 8193f64.ln() / 4097f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn doubling_examples() {
        assert!((check_doubling(&Weight::power(1.0), 50).unwrap() - 2.0).abs() < 1e-12);
        assert!((check_doubling(&Weight::power(0.5), 50).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(check_doubling(&Weight::exponential(2.0), 10).unwrap(), 1024.0);
    }

    #[test]
    fn power_indices_are_exact() {
        for a in [0.25, 0.5, 1.0] {
            let r = dilation_indices(&Weight::power(a), 64, 256).unwrap();
            assert!((r.i_hat - a).abs() < 1e-9 && (r.big_i_hat - a).abs() < 1e-9);
        }
    }

    #[test]
    fn regularity_examples() {
        let r = regularity_check(&Weight::power(1.0), 1.0, Regularity::Lower, 256).unwrap();
        assert!((r.constant - 1.0).abs() < 1e-12 && r.holds);
        let r = regularity_check(&Weight::sqrt_log(-1.0), 0.5, Regularity::Lower, 1 << 12).unwrap();
        // min at k = 1, N = 4096: ln 2 / ln 4097
        assert!((r.constant - 2f64.ln() / 4097f64.ln()).abs() < 1e-12);
        assert!(!r.holds);
        let r = regularity_check(&Weight::power(0.3), 0.5, Regularity::Upper, 512).unwrap();
        assert!(r.holds && r.constant <= 1.0 + 1e-12);
        assert!(r.dilation_constant.unwrap() <= 1.0 + 1e-12);
        assert!(regularity_check(&Weight::power(0.3), 1.0, Regularity::Upper, 64).is_err());
    }

    #[test]
    fn equiv_examples() {
        assert!((equiv_ratio(&Weight::power(1.0), 100).unwrap() - 1.0).abs() < 1e-12);
        let a = equiv_ratio(&Weight::power(0.5), 1 << 10).unwrap();
        let b = equiv_ratio(&Weight::power(0.5), 1 << 11).unwrap();
        assert!(a < 2.0 && a > 1.9 && (b - a) < 0.02);
        let a = equiv_ratio(&Weight::log(), 1 << 10).unwrap();
        let b = equiv_ratio(&Weight::log(), 1 << 12).unwrap();
        assert!(b > a + 0.5);
    }

    #[test]
    fn parsing() {
        assert_eq!("power:0.5".parse::<Weight>().unwrap().eval(4), 2.0);
        assert_eq!("sqrt*log".parse::<Weight>().unwrap().id(), "sqrtlog:1");
        let t: Weight = "table:1,2,2".parse().unwrap();
        assert_eq!((t.eval(1), t.eval(3), t.eval(9)), (1.0, 2.0, 2.0));
        assert!("cubic".parse::<Weight>().is_err());
        assert!(!Weight::sqrt_log(-1.0).is_admissible(4));
        assert!(Weight::sqrt_log(1.0).is_admissible(1000));
    }
}
