//! The bundled sequence spaces and their norms.
//!
//! Every norm is evaluated exactly on the (finite) support of a vector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, LabError, Result};
use crate::vector::{SignedSet, SparseVector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// `ℓ_p` with the canonical basis; a quasi-norm when `p < 1`.
    Lp(f64),
    /// `c_0` with the summing basis: `sup_N |Σ_{n≤N} a_n|`.
    SummingC0,
    /// `ℓ_1` with the difference basis: `Σ_n |a_n - a_{n+1}|`.
    DifferenceL1,
    /// Schreier-type space: sup over sets `F` with `√(min F) ≥ |F|` of `Σ_F |a_n|`.
    SchreierMod,
    /// Max of a log-discounted Lorentz term and the `ℓ_2` norm of the even coordinates.
    MixNorm,
}

/// A norm on finitely supported sequences together with what is known about
/// the canonical basis in it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpace {
    pub kind: SpaceKind,
    /// Basis constant `K_b` when it is known exactly.
    pub basis_constant: Option<f64>,
    pub unconditional: bool,
    /// Exponent `p` of the `p`-triangle inequality, in `(0, 1]`.
    pub p_convexity: f64,
    /// Constant in `‖x+y‖ ≤ κ(‖x‖+‖y‖)`.
    pub kappa: f64,
}

impl SequenceSpace {
    pub fn new(kind: SpaceKind) -> Result<Self> {
        let space = match kind {
            SpaceKind::Lp(p) => {
                if !(p.is_finite() && p > 0.0) {
                    return invalid(format!("lp exponent must be positive and finite, got {p}"));
                }
                let q = p.min(1.0);
                Self {
                    kind,
                    basis_constant: Some(1.0),
                    unconditional: true,
                    p_convexity: q,
                    kappa: 2f64.powf(1.0 / q - 1.0),
                }
            }
            SpaceKind::SummingC0 | SpaceKind::DifferenceL1 => Self {
                kind,
                basis_constant: Some(1.0),
                unconditional: false,
                p_convexity: 1.0,
                kappa: 1.0,
            },
            SpaceKind::SchreierMod | SpaceKind::MixNorm => Self {
                kind,
                basis_constant: Some(1.0),
                unconditional: true,
                p_convexity: 1.0,
                kappa: 1.0,
            },
        };
        Ok(space)
    }

    pub fn lp(p: f64) -> Result<Self> {
        Self::new(SpaceKind::Lp(p))
    }

    pub fn summing() -> Self {
        Self::new(SpaceKind::SummingC0).expect("valid kind")
    }

    pub fn difference() -> Self {
        Self::new(SpaceKind::DifferenceL1).expect("valid kind")
    }

    pub fn schreier() -> Self {
        Self::new(SpaceKind::SchreierMod).expect("valid kind")
    }

    pub fn mixnorm() -> Self {
        Self::new(SpaceKind::MixNorm).expect("valid kind")
    }

    /// The four example spaces followed by `ℓ_1` and `ℓ_2`.
    pub fn bundled() -> Vec<Self> {
        vec![
            Self::summing(),
            Self::difference(),
            Self::schreier(),
            Self::mixnorm(),
            Self::lp(1.0).expect("valid"),
            Self::lp(2.0).expect("valid"),
        ]
    }

    pub fn name(&self) -> String {
        match self.kind {
            SpaceKind::Lp(p) => format!("lp:{p}"),
            SpaceKind::SummingC0 => "summing".into(),
            SpaceKind::DifferenceL1 => "difference".into(),
            SpaceKind::SchreierMod => "schreier".into(),
            SpaceKind::MixNorm => "mixnorm".into(),
        }
    }

    /// True when the optimal coefficients on any index set are the vector's
    /// own, i.e. `‖x - P_A x + z‖ ≥ ‖x - P_A x‖` for `z` supported on `A`.
    /// Holds for lattice norms.
    pub fn projection_is_optimal(&self) -> bool {
        matches!(
            self.kind,
            SpaceKind::Lp(_) | SpaceKind::SchreierMod | SpaceKind::MixNorm
        )
    }

    pub fn norm(&self, x: &SparseVector) -> f64 {
        self.norm_entries(x.entries())
    }

    pub fn indicator_norm(&self, s: &SignedSet) -> f64 {
        self.norm(&s.to_vector())
    }

    /// Norm of the vector given by sorted, distinct `(index, value)` pairs.
    /// Zero values are allowed.
    pub fn norm_entries(&self, e: &[(usize, f64)]) -> f64 {
        match self.kind {
            SpaceKind::Lp(p) => lp_norm(e, p),
            SpaceKind::SummingC0 => summing_norm(e),
            SpaceKind::DifferenceL1 => difference_norm(e),
            SpaceKind::SchreierMod => schreier_norm(e),
            SpaceKind::MixNorm => mixnorm_norm(e),
        }
    }
}

impl fmt::Display for SequenceSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SequenceSpace {
    type Err = LabError;

    /// Accepts `summing`, `difference`, `schreier`, `mixnorm`, `lp:P` and `lpP`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "summing" | "summingc0" => Ok(Self::summing()),
            "difference" | "differencel1" => Ok(Self::difference()),
            "schreier" | "schreiermod" => Ok(Self::schreier()),
            "mixnorm" | "mix" => Ok(Self::mixnorm()),
            _ => {
                let p = t
                    .strip_prefix("lp:")
                    .or_else(|| t.strip_prefix("lp"))
                    .ok_or_else(|| LabError::InvalidArgument(format!("unknown space '{s}'")))?;
                let p: f64 = p
                    .parse()
                    .map_err(|_| LabError::InvalidArgument(format!("bad lp exponent in '{s}'")))?;
                Self::lp(p)
            }
        }
    }
}

fn lp_norm(e: &[(usize, f64)], p: f64) -> f64 {
    if p == 1.0 {
        return e.iter().map(|v| v.1.abs()).sum();
    }
    if p == 2.0 {
        return e.iter().map(|v| v.1 * v.1).sum::<f64>().sqrt();
    }
    let m = e.iter().fold(0.0f64, |m, v| m.max(v.1.abs()));
    if m == 0.0 {
        return 0.0;
    }
    // scaled to avoid overflow for large p
    m * e.iter().map(|v| (v.1.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn summing_norm(e: &[(usize, f64)]) -> f64 {
    let mut s = 0.0f64;
    let mut best = 0.0f64;
    for &(_, v) in e {
        s += v;
        best = best.max(s.abs());
    }
    best
}

fn difference_norm(e: &[(usize, f64)]) -> f64 {
    let e: Vec<(usize, f64)> = e.iter().copied().filter(|v| v.1 != 0.0).collect();
    let Some(&(first, a0)) = e.first() else {
        return 0.0;
    };
    let mut total = if first > 1 { a0.abs() } else { 0.0 };
    for w in e.windows(2) {
        let ((i, a), (j, b)) = (w[0], w[1]);
        total += if j == i + 1 { (a - b).abs() } else { a.abs() + b.abs() };
    }
    total + e.last().map_or(0.0, |v| v.1.abs())
}

pub(crate) fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Max over `m` of the sum of the `⌊√m⌋` largest `|x_i|` with `i ≥ m`. Only
/// support positions need to be tried as `m`: between two support indices
/// the tail is unchanged while `⌊√m⌋` can only grow.
fn schreier_norm(e: &[(usize, f64)]) -> f64 {
    let mut tail: Vec<f64> = Vec::with_capacity(e.len());
    let mut best = 0.0f64;
    for &(m, v) in e.iter().rev() {
        let a = v.abs();
        let pos = tail.partition_point(|&t| t > a);
        tail.insert(pos, a);
        let k = isqrt(m).min(tail.len());
        best = best.max(tail[..k].iter().sum());
    }
    best
}

fn mixnorm_norm(e: &[(usize, f64)]) -> f64 {
    let mut y: Vec<f64> = e.iter().map(|v| v.1.abs()).filter(|&a| a > 0.0).collect();
    y.sort_unstable_by(|a, b| b.total_cmp(a));
    let even = e.iter().filter(|v| v.0 % 2 == 0).map(|v| v.1 * v.1).sum::<f64>().sqrt();
    even.max(lorentz_term(&y))
}

/// `max_n (Σ_{i≤n} y_i/√i) / √(H_n)` for `y` sorted decreasing.
pub(crate) fn lorentz_term(y: &[f64]) -> f64 {
    let mut num = 0.0f64;
    let mut h = 0.0f64;
    let mut best = 0.0f64;
    for (i, &v) in y.iter().enumerate() {
        let k = (i + 1) as f64;
        num += v / k.sqrt();
        h += 1.0 / k;
        best = best.max(num / h.sqrt());
    }
    best
}

/// Value of the Lorentz term on `m` ones, `F(m) = Σ_{i≤m} i^{-1/2} / √(H_m)`.
pub fn lorentz_ones(m: usize) -> f64 {
    lorentz_term(&vec![1.0; m])
}

/// Lower estimate of the basis constant: max of `‖S_m x‖/‖x‖` over the
/// sample and all cut points `m`.
pub fn basis_constant_estimate(space: &SequenceSpace, sample: &[SparseVector]) -> Result<f64> {
    if sample.is_empty() {
        return invalid("empty sample");
    }
    let mut best = 0.0f64;
    for x in sample {
        let nx = space.norm(x);
        if nx == 0.0 {
            return Err(LabError::ZeroDenominator("sample vector has zero norm".into()));
        }
        for &(m, _) in x.entries() {
            best = best.max(space.norm(&x.partial_sum(m)) / nx);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(d: &[f64]) -> SparseVector {
        SparseVector::from_dense(d).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(SequenceSpace::summing().norm(&v(&[1.0, -1.0])), 1.0);
        assert_eq!(SequenceSpace::difference().norm(&v(&[0.0, 1.0, 0.0, 1.0])), 4.0);
        let block = SignedSet::positive(vec![10, 11, 12]).unwrap();
        assert_eq!(SequenceSpace::schreier().indicator_norm(&block), 3.0);
        let x = SparseVector::from_pairs([(1, 1.0), (3, 1.0)]).unwrap();
        let expected = (1.0 + 1.0 / 2f64.sqrt()) / 1.5f64.sqrt();
        assert!((SequenceSpace::mixnorm().norm(&x) - expected).abs() < 1e-12);
        let evens = SignedSet::positive(vec![2, 4, 6]).unwrap();
        assert!((SequenceSpace::mixnorm().indicator_norm(&evens) - 3f64.sqrt()).abs() < 1e-12);
        assert!(lorentz_ones(3) < 3f64.sqrt());
        let f3 = (1.0 + 1.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt()) / (11.0f64 / 6.0).sqrt();
        assert!((lorentz_ones(3) - f3).abs() < 1e-12);
    }

    #[test]
    fn difference_partial_sum() {
        let x = v(&[1.0, 1.0, 1.0]);
        assert_eq!(SequenceSpace::difference().norm(&x.partial_sum(1)), 1.0);
        assert_eq!(SequenceSpace::difference().norm(&x), 1.0);
    }

    #[test]
    fn empty_is_zero() {
        for s in SequenceSpace::bundled() {
            assert_eq!(s.norm(&SparseVector::new()), 0.0);
        }
    }

    #[test]
    fn parse_names() {
        for s in SequenceSpace::bundled() {
            assert_eq!(s.name().parse::<SequenceSpace>().unwrap(), s);
        }
        assert_eq!("lp2".parse::<SequenceSpace>().unwrap().kind, SpaceKind::Lp(2.0));
        assert!("lp:0".parse::<SequenceSpace>().is_err());
        assert!("hilbert".parse::<SequenceSpace>().is_err());
    }

    #[test]
    fn quasi_norm_metadata() {
        let s = SequenceSpace::lp(0.5).unwrap();
        assert_eq!(s.p_convexity, 0.5);
        assert_eq!(s.kappa, 2.0);
        assert!(!SequenceSpace::summing().unconditional);
        assert!(SequenceSpace::mixnorm().unconditional);
    }

    #[test]
    fn basis_constants() {
        let sample = vec![v(&[1.0, -2.0, 0.5]), v(&[0.0, 1.0, 1.0, -1.0])];
        for s in [
            SequenceSpace::difference(),
            SequenceSpace::schreier(),
            SequenceSpace::lp(2.0).unwrap(),
        ] {
            assert!(basis_constant_estimate(&s, &sample).unwrap() <= 1.0 + 1e-12);
        }
        assert!(basis_constant_estimate(&SequenceSpace::summing(), &[SparseVector::new()]).is_err());
    }
}
