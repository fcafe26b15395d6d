//! Weighted approximation-class quasi-norms and the embedding-failure
//! experiments built on them.
//!
//! For an error sequence `err_n(x)` the class norm is
//! `‖x‖ + (Σ_{n ≥ 1} (ω(n) err_n(x))^q / n)^{1/q}` (a sup when `q = ∞`).
//! The errors vanish beyond `|supp x|` (or beyond `max supp x` for the
//! partial-sum error), so the sums are finite and exact.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::chebyshev::{sigma_profile, theta_profile};
use crate::combin::harmonic;
use crate::error::{invalid, LabError, Result};
use crate::greedy::{beta, gamma, Estimate};
use crate::spaces::{SequenceSpace, SpaceKind};
use crate::vector::{SignedSet, SparseVector};
use crate::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if q > 0.0 && q.is_finite() {
            Ok(Exponent::Finite(q))
        } else {
            invalid(format!("q must lie in (0, ∞], got {q}"))
        }
    }

    /// `(Σ t_n^q / n)^{1/q}` or `sup t_n`, for `t_1, t_2, …`.
    pub fn combine(&self, terms: impl IntoIterator<Item = f64>) -> f64 {
        match *self {
            Exponent::Infinity => terms.into_iter().fold(0.0, f64::max),
            Exponent::Finite(q) => terms
                .into_iter()
                .enumerate()
                .map(|(i, t)| t.powf(q) / (i + 1) as f64)
                .sum::<f64>()
                .powf(1.0 / q),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => Exponent::new(
                t.parse()
                    .map_err(|_| LabError::InvalidArgument(format!("bad exponent {t}")))?,
            ),
        }
    }
}

/// Which error sequence defines the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    /// best `n`-term error `σ_n`
    A,
    /// greedy error `γ_n`
    G,
    /// Chebyshev-greedy error `ϑ_n`
    CG,
    /// partial-sum error `β_n`
    PG,
}

impl ClassKind {
    pub const ALL: [ClassKind; 4] = [ClassKind::A, ClassKind::G, ClassKind::CG, ClassKind::PG];

    pub fn label(&self) -> &'static str {
        match self {
            ClassKind::A => "A",
            ClassKind::G => "G",
            ClassKind::CG => "CG",
            ClassKind::PG => "PG",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassParams {
    pub weight: Weight,
    pub q: Exponent,
    pub kind: ClassKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassNorm {
    pub value: f64,
    /// Some `γ_n` or `ϑ_n` only covered part of its greedy sets.
    pub truncated: bool,
}

/// `err_n(x)` for `n = 1..=len`.
pub fn error_profile(
    space: &SequenceSpace,
    x: &SparseVector,
    kind: ClassKind,
    len: usize,
    window: usize,
    cap: usize,
) -> Result<Vec<Estimate>> {
    Ok(match kind {
        ClassKind::A => sigma_profile(space, x, len, window)?
            .into_iter()
            .map(Estimate::exact)
            .collect(),
        ClassKind::G => (1..=len).map(|n| gamma(space, x, n, cap)).collect::<Result<_>>()?,
        ClassKind::CG => theta_profile(space, x, len, cap)?,
        ClassKind::PG => (1..=len).map(|n| Estimate::exact(beta(space, x, n))).collect(),
    })
}

fn cutoff(x: &SparseVector, kind: ClassKind) -> usize {
    match kind {
        ClassKind::PG => x.max_index().unwrap_or(0),
        _ => x.len(),
    }
}

pub fn class_norm(
    space: &SequenceSpace,
    x: &SparseVector,
    params: &ClassParams,
    window: usize,
    cap: usize,
) -> Result<ClassNorm> {
    let profile = error_profile(space, x, params.kind, cutoff(x, params.kind), window, cap)?;
    let truncated = profile.iter().any(|e| e.truncated);
    let terms = profile
        .iter()
        .enumerate()
        .map(|(i, e)| params.weight.eval(i + 1) * e.value);
    Ok(ClassNorm {
        value: space.norm(x) + params.q.combine(terms),
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub preset: String,
    pub j_or_m: usize,
    pub k: Option<usize>,
    pub u: Option<usize>,
    pub eta: Option<usize>,
    pub num_norm: f64,
    pub den_norm: f64,
    pub ratio: f64,
    pub bound: Option<f64>,
    pub flags: Vec<String>,
}

/// `‖e_{m+1}‖_𝒢 / ‖e_{m+1}‖_𝒫𝒢` for each `m`, with the bound
/// `1/(ω(1) H_m^{1/q})` (`1/ω(1)` when `q = ∞`).
pub fn remark_ratio(
    space: &SequenceSpace,
    w: &Weight,
    q: Exponent,
    m_range: impl IntoIterator<Item = usize>,
) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for m in m_range {
        let x = SparseVector::unit(m + 1)?;
        let num = class_norm(
            space,
            &x,
            &ClassParams {
                weight: w.clone(),
                q,
                kind: ClassKind::G,
            },
            0,
            1,
        )?;
        let den = class_norm(
            space,
            &x,
            &ClassParams {
                weight: w.clone(),
                q,
                kind: ClassKind::PG,
            },
            0,
            1,
        )?;
        let bound = match q {
            Exponent::Finite(q) => 1.0 / (w.eval(1) * harmonic(m).powf(1.0 / q)),
            Exponent::Infinity => 1.0 / w.eval(1),
        };
        rows.push(ExperimentRow {
            preset: "remark".into(),
            j_or_m: m,
            k: None,
            u: None,
            eta: None,
            num_norm: num.value,
            den_norm: den.value,
            ratio: num.value / den.value,
            bound: Some(bound),
            flags: vec![],
        });
    }
    Ok(rows)
}

/// Pairs `(j, k_j, η_j)` from `grid` with `η_j/k_j ≥ 2^j` and
/// `f(k_j)/g(η_j) ≥ ω(η_j)/ω(k_j)`, for `j = 1, 2, …` until no pair exists.
/// For each `j` the pair with the smallest `k`, then smallest `η`, is taken.
pub fn witness_pair_search(
    f: &dyn Fn(usize) -> f64,
    g: &dyn Fn(usize) -> f64,
    w: &Weight,
    grid: &[usize],
) -> Vec<(usize, usize, usize)> {
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let mut out = Vec::new();
    for j in 1..usize::BITS as usize {
        let found = grid.iter().find_map(|&k| {
            grid.iter()
                .find(|&&eta| qualifies(f, g, w, j, k, eta))
                .map(|&eta| (j, k, eta))
        });
        match found {
            Some(p) => out.push(p),
            None => break,
        }
    }
    out
}

pub fn qualifies(
    f: &dyn Fn(usize) -> f64,
    g: &dyn Fn(usize) -> f64,
    w: &Weight,
    j: usize,
    k: usize,
    eta: usize,
) -> bool {
    k >= 1 && eta >= k && eta as f64 / k as f64 >= 2f64.powi(j as i32) && f(k) / g(eta) >= w.eval(eta) / w.eval(k)
}

/// Powers of two `1, 2, 4, …, 2^16`.
pub fn default_grid() -> Vec<usize> {
    (0..=16).map(|e| 1usize << e).collect()
}

/// The two blocks of the `j`-th vector of an experiment.
#[derive(Clone, Debug)]
pub struct ExperimentVector {
    pub left: SignedSet,
    pub right: SignedSet,
    pub x: SparseVector,
}

/// Summing-basis family: `Γ_l = [1, 4^j]` with alternating signs (so
/// `‖1_{εΓ_l}‖ = 1 = h_l`), `Γ_r` the next `2^j` indices with positive
/// signs (`‖1_{Γ_r}‖ = 2^j = h_r`), and `x_j = 2·1_{εΓ_l} + 1_{Γ_r}`.
pub fn imp1_vector(j: usize) -> Result<ExperimentVector> {
    let (k, eta) = (1usize << j, 1usize << (2 * j));
    let left = SignedSet::alternating((1..=eta).collect())?;
    let right = SignedSet::positive((eta + 1..=eta + k).collect())?;
    let x = &left.to_vector().scale(2.0) + &right.to_vector();
    Ok(ExperimentVector { left, right, x })
}

/// `‖x_j‖_𝒞𝒢 / ‖x_j‖_𝒜` for `j = 1..=j_max` on the summing-basis family.
///
/// Flags: `precondition` when `‖1_{εΓ_l}‖ ≤ ‖1_{Γ_r}‖ ω(k)/ω(η)` fails,
/// `sigma_bound` when `σ_{k+1}(x_j) ≤ 2‖1_{εΓ_l}‖` fails, `truncated` when
/// some error is only bounded.
pub fn imp1_experiment(
    space: &SequenceSpace,
    w: &Weight,
    q: Exponent,
    j_max: usize,
    cap: usize,
    window: usize,
) -> Result<Vec<ExperimentRow>> {
    if space.kind != SpaceKind::SummingC0 {
        return Err(LabError::NoPreset(format!(
            "imp1 has a preset only for the summing basis, not {}",
            space.name()
        )));
    }
    let mut rows = Vec::new();
    for j in 1..=j_max {
        let v = imp1_vector(j)?;
        let (k, eta) = (v.right.len(), v.left.len());
        let cg = class_norm(
            space,
            &v.x,
            &ClassParams {
                weight: w.clone(),
                q,
                kind: ClassKind::CG,
            },
            window,
            cap,
        )?;
        let a = class_norm(
            space,
            &v.x,
            &ClassParams {
                weight: w.clone(),
                q,
                kind: ClassKind::A,
            },
            window,
            cap,
        )?;
        let left_norm = space.indicator_norm(&v.left);
        let right_norm = space.indicator_norm(&v.right);
        let mut flags = vec![];
        if left_norm > right_norm * w.eval(k) / w.eval(eta) + 1e-12 {
            flags.push("precondition".to_string());
        }
        let s = crate::chebyshev::sigma(space, &v.x, k + 1, window)?;
        if s > 2.0 * left_norm + 1e-9 {
            flags.push("sigma_bound".to_string());
        }
        if cg.truncated || a.truncated {
            flags.push("truncated".to_string());
        }
        rows.push(ExperimentRow {
            preset: "imp1".into(),
            j_or_m: j,
            k: Some(k),
            u: None,
            eta: Some(eta),
            num_norm: cg.value,
            den_norm: a.value,
            ratio: cg.value / a.value,
            bound: Some(w.eval(eta) / w.eval(k)),
            flags,
        });
    }
    Ok(rows)
}

/// Mixed-norm family with `u_j = 2^j`, `η_j = 4^j`: `Γ_l` the even indices
/// in `[1, u_j]` with coefficient 1, `Γ_r` the odd indices in
/// `(u_j, u_j + 2η_j]` with coefficient 2.
pub fn kppg_vector(j: usize) -> Result<ExperimentVector> {
    let (u, eta) = (1usize << j, 1usize << (2 * j));
    let left = SignedSet::positive((2..=u).step_by(2).collect())?;
    let right = SignedSet::positive((u + 1..=u + 2 * eta).filter(|n| n % 2 == 1).collect())?;
    let x = &left.to_vector() + &right.to_vector().scale(2.0);
    Ok(ExperimentVector { left, right, x })
}

/// `‖x_j‖_𝒢 / ‖x_j‖_𝒫𝒢` for `j = 1..=j_max` on the mixed-norm family.
///
/// Flags `precondition` when `‖1_{Γ_l}‖/‖1_{Γ_r}‖ < ω(η)/ω(u)`: the growth
/// argument needs the left block to dominate by the weight ratio.
pub fn kppg_experiment(
    space: &SequenceSpace,
    w: &Weight,
    q: Exponent,
    j_max: usize,
    cap: usize,
) -> Result<Vec<ExperimentRow>> {
    if space.kind != SpaceKind::MixNorm {
        return Err(LabError::NoPreset(format!(
            "kppg has a preset only for the mixed norm, not {}",
            space.name()
        )));
    }
    let mut rows = Vec::new();
    for j in 1..=j_max {
        let v = kppg_vector(j)?;
        let (u, eta) = (1usize << j, 1usize << (2 * j));
        let g = class_norm(
            space,
            &v.x,
            &ClassParams {
                weight: w.clone(),
                q,
                kind: ClassKind::G,
            },
            0,
            cap,
        )?;
        let pg = class_norm(
            space,
            &v.x,
            &ClassParams {
                weight: w.clone(),
                q,
                kind: ClassKind::PG,
            },
            0,
            cap,
        )?;
        let lr = space.indicator_norm(&v.left) / space.indicator_norm(&v.right);
        let target = w.eval(eta) / w.eval(u);
        let mut flags = vec![];
        if lr < target {
            flags.push("precondition".to_string());
        }
        if g.truncated {
            flags.push("truncated".to_string());
        }
        rows.push(ExperimentRow {
            preset: "kppg".into(),
            j_or_m: j,
            k: Some(v.left.len()),
            u: Some(u),
            eta: Some(eta),
            num_norm: g.value,
            den_norm: pg.value,
            ratio: g.value / pg.value,
            bound: Some(target),
            flags,
        });
    }
    Ok(rows)
}

/// `‖1_{A_N}‖ / ‖1_{B_N}‖` in the mixed norm, `A_N` the evens in `[1, 2N]`,
/// `B_N` the odds in `(2N, 4N)`.
pub fn mixnorm_conservation_ratio(n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("N must be at least 1");
    }
    let space = SequenceSpace::mixnorm();
    let a = SignedSet::positive((2..=2 * n).step_by(2).collect())?;
    let b = SignedSet::positive((2 * n + 1..4 * n).step_by(2).collect())?;
    Ok(space.indicator_norm(&a) / space.indicator_norm(&b))
}

#[derive(Clone, Debug, Serialize)]
pub struct CasecReport {
    pub parts: Vec<Vec<usize>>,
    /// Position in `parts` of the chosen `V_s`.
    pub chosen: usize,
    pub m_norm: f64,
    pub v_norm: f64,
    pub x_norm: f64,
    /// `‖1_{εM_s}‖ ≤ ‖1_{V_s}‖`
    pub premise: bool,
    /// `p`-convexity exponent used in the bound.
    pub p: f64,
    /// `(1 + 2^p) ‖1_{V_s}‖^p`
    pub bound: f64,
    /// `‖x_s‖^p ≤ bound`
    pub chain_holds: bool,
}

/// Splits `d` into `r` contiguous balanced parts, picks the part `V_s` of
/// largest indicator norm (the first on ties) and evaluates
/// `x_s = 2·1_{εM_s} + 1_{V_s}`.
pub fn casec_construction(space: &SequenceSpace, m_s: &SignedSet, d: &[usize], r: usize) -> Result<CasecReport> {
    if d.len() != m_s.len() {
        return invalid(format!("|D| = {} differs from |M_s| = {}", d.len(), m_s.len()));
    }
    if r == 0 || r > d.len() {
        return invalid(format!("need 1 ≤ r ≤ |D|, got r = {r}"));
    }
    let mut d = d.to_vec();
    d.sort_unstable();
    if d.windows(2).any(|p| p[0] == p[1]) {
        return invalid("D has repeated indices");
    }
    if let (Some(&m_last), Some(&d_first)) = (m_s.indices().last(), d.first()) {
        if m_last >= d_first {
            return invalid("M_s must lie before D");
        }
    }
    let (base, extra) = (d.len() / r, d.len() % r);
    let mut parts = Vec::with_capacity(r);
    let mut at = 0;
    for i in 0..r {
        let size = base + usize::from(i < extra);
        parts.push(d[at..at + size].to_vec());
        at += size;
    }
    let norms: Vec<f64> = parts
        .iter()
        .map(|p| SignedSet::positive(p.clone()).map(|s| space.indicator_norm(&s)))
        .collect::<Result<_>>()?;
    let chosen = (0..r).fold(0, |b, i| if norms[i] > norms[b] { i } else { b });
    let v = SignedSet::positive(parts[chosen].clone())?;
    let x = &m_s.to_vector().scale(2.0) + &v.to_vector();
    let (m_norm, v_norm, x_norm) = (space.indicator_norm(m_s), norms[chosen], space.norm(&x));
    let p = space.p_convexity;
    let bound = (1.0 + 2f64.powf(p)) * v_norm.powf(p);
    Ok(CasecReport {
        parts,
        chosen,
        m_norm,
        v_norm,
        x_norm,
        premise: m_norm <= v_norm + 1e-12,
        p,
        bound,
        chain_holds: x_norm.powf(p) <= bound * (1.0 + 1e-12),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub holds: bool,
    /// First sample position where `‖x‖_𝒜 ≤ ‖x‖_𝒞𝒢 ≤ ‖x‖_𝒢` fails.
    pub first_violation: Option<usize>,
    /// `(A, CG, G)` per sample vector.
    pub norms: Vec<[f64; 3]>,
}

pub fn chain_check(
    space: &SequenceSpace,
    sample: &[SparseVector],
    w: &Weight,
    q: Exponent,
    window: usize,
    cap: usize,
) -> Result<ChainReport> {
    let mut norms = Vec::with_capacity(sample.len());
    let mut first_violation = None;
    for (i, x) in sample.iter().enumerate() {
        let mut v = [0.0; 3];
        for (slot, kind) in [ClassKind::A, ClassKind::CG, ClassKind::G].into_iter().enumerate() {
            v[slot] = class_norm(
                space,
                x,
                &ClassParams {
                    weight: w.clone(),
                    q,
                    kind,
                },
                window,
                cap,
            )?
            .value;
        }
        if first_violation.is_none() && (v[0] > v[1] + 1e-9 || v[1] > v[2] + 1e-9) {
            first_violation = Some(i);
        }
        norms.push(v);
    }
    Ok(ChainReport {
        holds: first_violation.is_none(),
        first_violation,
        norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kind: ClassKind, q: Exponent) -> ClassParams {
        ClassParams {
            weight: Weight::power(0.5),
            q,
            kind,
        }
    }

    #[test]
    fn unit_vectors() {
        let s = SequenceSpace::summing();
        let e3 = SparseVector::unit(3).unwrap();
        let pg = class_norm(&s, &e3, &params(ClassKind::PG, Exponent::Infinity), 4, 100).unwrap();
        assert!((pg.value - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        for space in SequenceSpace::bundled() {
            for kind in [ClassKind::A, ClassKind::G, ClassKind::CG] {
                let v = class_norm(&space, &e3, &params(kind, Exponent::Finite(2.0)), 4, 100).unwrap();
                assert_eq!(v.value, space.norm(&e3));
            }
        }
    }

    #[test]
    fn remark_rows() {
        let rows = remark_ratio(
            &SequenceSpace::summing(),
            &Weight::power(0.5),
            Exponent::Finite(2.0),
            1..=40,
        )
        .unwrap();
        for r in &rows {
            // 1/(1 + √m) in closed form
            assert!((r.ratio - 1.0 / (1.0 + (r.j_or_m as f64).sqrt())).abs() < 1e-12);
            assert!(r.ratio <= r.bound.unwrap());
        }
        assert!(rows.windows(2).all(|p| p[1].ratio <= p[0].ratio));
    }

    #[test]
    fn pair_search() {
        let w = Weight::power(0.5);
        let id = |n: usize| n as f64;
        let one = |_: usize| 1.0;
        for j in 1..=8 {
            assert!(qualifies(&id, &one, &w, j, 1 << j, 1 << (2 * j)));
        }
        let pairs = witness_pair_search(&id, &one, &w, &default_grid());
        assert!(!pairs.is_empty());
        assert!(pairs.iter().all(|&(j, k, e)| qualifies(&id, &one, &w, j, k, e)));
        assert!(witness_pair_search(&id, &id, &w, &default_grid()).is_empty());
        let two = |n: usize| 2.0 * n as f64;
        let root = |n: usize| (n as f64).sqrt();
        assert!(!witness_pair_search(&two, &root, &Weight::power(0.1), &default_grid()).is_empty());
    }

    #[test]
    fn casec_examples() {
        let l2 = SequenceSpace::lp(2.0).unwrap();
        let m = SignedSet::positive(vec![1, 2, 3, 4]).unwrap();
        let r = casec_construction(&l2, &m, &[5, 6, 7, 8], 2).unwrap();
        assert_eq!(r.parts, vec![vec![5, 6], vec![7, 8]]);
        assert!((r.x_norm - 18f64.sqrt()).abs() < 1e-12);
        assert!(!r.premise);
        assert!(r.chain_holds);
        let s = SequenceSpace::summing();
        let m = SignedSet::alternating(vec![1, 2, 3, 4]).unwrap();
        let r = casec_construction(&s, &m, &[5, 6, 7, 8], 2).unwrap();
        assert!(r.premise && r.chain_holds);
        assert!(casec_construction(&s, &m, &[5, 6], 1).is_err());
        assert!(casec_construction(&s, &m, &[3, 6, 7, 8], 1).is_err());
    }

    #[test]
    fn imp1_small() {
        let rows = imp1_experiment(
            &SequenceSpace::summing(),
            &Weight::power(0.5),
            Exponent::Infinity,
            3,
            100,
            4,
        )
        .unwrap();
        assert!(rows.windows(2).all(|p| p[1].ratio > p[0].ratio));
        assert!(rows.iter().all(|r| r.flags.is_empty()), "{rows:?}");
    }

    #[test]
    fn conservation_ratio_grows() {
        let r: Vec<f64> = [4, 8, 16, 32, 64]
            .iter()
            .map(|&n| mixnorm_conservation_ratio(n).unwrap())
            .collect();
        assert!(r.windows(2).all(|p| p[1] > p[0]));
    }
}
