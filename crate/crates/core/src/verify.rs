//! The acceptance suite: thirteen numbered checks, each with its own oracle
//! and tolerance, shared by the `verify` command and the test suite.
//!
//! Oracles here are deliberately independent of the library routines they
//! check (closed forms, brute-force sums, dense grids).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chebyshev::{chebyshev_project, grid_search, sigma_profile, theta_profile};
use crate::classes::{imp1_experiment, kppg_experiment, mixnorm_conservation_ratio, remark_ratio, Exponent};
use crate::democracy::{
    block, check_property_i, check_property_w, check_property_wstar, h_l, h_left_positive, h_r, h_restricted, Side,
};
use crate::error::Result;
use crate::greedy::{eta_p, gamma, greedy_sets, truncate, TruncationKind, DEFAULT_CAP};
use crate::sampling::random_sample;
use crate::spaces::SequenceSpace;
use crate::vector::SparseVector;
use crate::weights::{dilation_indices, Weight};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u32, name: &'static str, pass: bool, detail: String) -> Self {
        Self { id, name, pass, detail }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|p| p[1] > p[0])
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Summing basis: `h_r(N) = N` and `h_l(N) = 1` for `N ≤ 6`, horizon 12.
pub fn criterion_1() -> Result<Outcome> {
    let s = SequenceSpace::summing();
    let mut bad = vec![];
    for n in 1..=6 {
        let (r, l) = (h_r(&s, n, 12)?.value, h_l(&s, n, 12)?.value);
        if r != n as f64 || l != 1.0 {
            bad.push(format!("N={n}: h_r={r}, h_l={l}"));
        }
    }
    let detail = if bad.is_empty() {
        "h_r(N)=N, h_l(N)=1 for N=1..6".into()
    } else {
        bad.join("; ")
    };
    Ok(Outcome::new(1, "summing democracy", bad.is_empty(), detail))
}

/// Difference basis: `h_{R,l}(m,u)` against `2m` (`u ≥ 2m`) or `2u-2m+1`
/// for `1 ≤ m ≤ u ≤ 10`; `h_{R,r}(m,u) = 2` with horizon `u + 12`.
pub fn criterion_2() -> Result<Outcome> {
    let d = SequenceSpace::difference();
    let formula = |m: usize, u: usize| if u >= 2 * m { 2 * m } else { 2 * u - 2 * m + 1 } as f64;
    let (mut mismatches, mut first) = (0, None);
    let mut positive_mismatches = 0;
    let mut right_bad = 0;
    let mut pairs = 0;
    for u in 1..=10 {
        for m in 1..=u {
            pairs += 1;
            let signed = h_restricted(&d, m, u, Side::Left, u)?.value;
            if signed != formula(m, u) {
                mismatches += 1;
                first.get_or_insert((m, u, signed, formula(m, u)));
            }
            if h_left_positive(&d, m, u)?.value != formula(m, u) {
                positive_mismatches += 1;
            }
            if h_restricted(&d, m, u, Side::Right, u + 12)?.value != 2.0 {
                right_bad += 1;
            }
        }
    }
    let pass = mismatches == 0 && right_bad == 0;
    let mut detail = format!(
        "{pairs} pairs: signed left mismatches {mismatches}, right != 2: {right_bad}; all-positive-sign left mismatches {positive_mismatches}"
    );
    if let Some((m, u, got, want)) = first {
        detail.push_str(&format!(
            "; first mismatch (m,u)=({m},{u}) search {got} vs formula {want}"
        ));
    }
    Ok(Outcome::new(2, "difference restricted democracy", pass, detail))
}

/// Schreier-type norm of blocks `x_{N,M} = 1_{[N+1,N+M]}`.
pub fn criterion_3() -> Result<Outcome> {
    let s = SequenceSpace::schreier();
    let mut bad = vec![];
    let mut checked = 0;
    for m in 1..=30usize {
        for n in (m * m).saturating_sub(1)..=30usize.saturating_sub(m) {
            checked += 1;
            let v = s.indicator_norm(&block(n, m));
            if v != m as f64 {
                bad.push(format!("N={n},M={m}: {v}"));
            }
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for m in 4..=64 {
        let r = s.indicator_norm(&block(0, m)) / (m as f64).sqrt();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let pass = bad.is_empty() && lo >= 0.3 && hi <= 1.1;
    let detail = format!(
        "{checked} blocks with N ≥ M²-1: {} off; ‖x_(0,M)‖/√M ∈ [{lo:.4}, {hi:.4}] for M=4..64",
        bad.len()
    );
    Ok(Outcome::new(3, "schreier block norms", pass, detail))
}

/// Mixed norm: `‖1_{A_N}‖/‖1_{B_N}‖` over `N = 4, …, 64`.
pub fn criterion_4() -> Result<Outcome> {
    let r: Vec<f64> = [4, 8, 16, 32, 64]
        .iter()
        .map(|&n| mixnorm_conservation_ratio(n))
        .collect::<Result<_>>()?;
    let growth = r[4] / r[0];
    let pass = strictly_increasing(&r) && growth > 1.3;
    let detail = format!("ratios {} ; r(64)/r(4) = {growth:.4} (needs > 1.3)", fmt_list(&r));
    Ok(Outcome::new(4, "mixed norm non-conservativeness", pass, detail))
}

/// `σ_m ≤ ϑ_m ≤ γ_m` on the seeded sample, every bundled space.
pub fn criterion_5(seed: u64) -> Result<Outcome> {
    let sample = random_sample(seed, 200, 8, 16);
    let mut violations = vec![];
    let mut truncated = 0;
    let mut checks = 0;
    for space in SequenceSpace::bundled() {
        for (i, x) in sample.iter().enumerate() {
            let len = x.len().saturating_sub(1);
            let s = sigma_profile(&space, x, len, 4)?;
            let t = theta_profile(&space, x, len, DEFAULT_CAP)?;
            for m in 1..=len {
                let g = gamma(&space, x, m, DEFAULT_CAP)?;
                truncated += usize::from(g.truncated || t[m - 1].truncated);
                checks += 1;
                let (sv, tv, gv) = (s[m - 1], t[m - 1].value, g.value);
                if sv > tv + 1e-9 || tv > gv + 1e-9 {
                    violations.push(format!("{} x#{i} m={m}: σ={sv} ϑ={tv} γ={gv}", space.name()));
                }
            }
        }
    }
    let mut detail = format!(
        "{checks} (space, x, m) triples, {} violations, {truncated} truncated",
        violations.len()
    );
    if let Some(v) = violations.first() {
        detail.push_str(&format!("; first: {v}"));
    }
    Ok(Outcome::new(5, "error chain", violations.is_empty(), detail))
}

/// One oracle instance: `x` with entries `±0.25, ±0.5` on at most four
/// indices in `[1,6]`, and `A` of size 1 or 2 inside `supp x ∪ {max+1}`.
fn solver_instance(rng: &mut ChaCha8Rng) -> (SparseVector, Vec<usize>) {
    let levels = [-0.5, -0.25, 0.25, 0.5];
    let mut idx: Vec<usize> = (1..=6).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(1..=4);
    let mut pairs: Vec<(usize, f64)> = idx[..k].iter().map(|&n| (n, levels[rng.gen_range(0..4)])).collect();
    pairs.sort_unstable_by_key(|p| p.0);
    let x = SparseVector::from_pairs(pairs).expect("valid instance");
    let mut pool = x.support();
    pool.push(x.max_index().expect("nonempty") + 1);
    pool.shuffle(rng);
    let size = rng.gen_range(1..=2usize).min(pool.len());
    let mut a = pool[..size].to_vec();
    a.sort_unstable();
    (x, a)
}

/// Solver residuals against a dense grid (step `1e-3`) on 50 instances per space.
pub fn criterion_6(seed: u64) -> Result<Outcome> {
    const PER_SPACE: usize = 50;
    let mut worst = 0.0f64;
    let mut fails = vec![];
    let mut rejected = 0;
    for (si, space) in SequenceSpace::bundled().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((si as u64 + 1) << 32));
        let mut done = 0;
        while done < PER_SPACE {
            let (x, a) = solver_instance(&mut rng);
            let half = 2.0 * x.max_abs();
            let sol = chebyshev_project(&space, &x, &a)?;
            // the grid only sees the box; an optimum outside it is not comparable
            if sol.coefficients.iter().any(|c| c.1.abs() > half) {
                rejected += 1;
                continue;
            }
            let grid = grid_search(&space, &x, &a, 1e-3, half)?;
            let gap = (sol.residual - grid.residual).abs();
            worst = worst.max(gap);
            if gap > 1e-3 {
                fails.push(format!(
                    "{} x={:?} A={a:?}: solver {} grid {}",
                    space.name(),
                    x.entries(),
                    sol.residual,
                    grid.residual
                ));
            }
            done += 1;
        }
    }
    let mut detail = format!(
        "{} instances, max |solver - grid| = {worst:.2e}, {} over 1e-3, {rejected} resampled (optimum outside box)",
        PER_SPACE * 6,
        fails.len()
    );
    if let Some(f) = fails.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    Ok(Outcome::new(6, "chebyshev solver oracle", fails.is_empty(), detail))
}

/// Remark ratio on the summing basis, `ω = √n`, `q = 2`, `m ≤ 50`.
pub fn criterion_7() -> Result<Outcome> {
    let rows = remark_ratio(
        &SequenceSpace::summing(),
        &Weight::power(0.5),
        Exponent::Finite(2.0),
        1..=50,
    )?;
    let mut over = 0;
    for r in &rows {
        // brute-force harmonic sum, independent of the library's bound column
        let h: f64 = (1..=r.j_or_m).map(|n| 1.0 / n as f64).sum();
        if r.ratio > 1.0 / h.sqrt() + 1e-12 {
            over += 1;
        }
    }
    let h31: f64 = (1..=31).map(|n| 1.0 / n as f64).sum();
    let r31 = rows[30].ratio;
    let pass = over == 0 && r31 < 0.5 && 1.0 / h31.sqrt() < 0.5;
    let detail = format!(
        "bound violations {over} of 50; m=31: ratio {r31:.4}, bound 1/√H_31 = {:.4} (H_31 = {h31:.4})",
        1.0 / h31.sqrt()
    );
    Ok(Outcome::new(7, "remark ratio", pass, detail))
}

/// imp1 family on the summing basis, `ω = √n`, `q = ∞`, `j = 1..6`.
pub fn criterion_8() -> Result<Outcome> {
    let rows = imp1_experiment(
        &SequenceSpace::summing(),
        &Weight::power(0.5),
        Exponent::Infinity,
        6,
        DEFAULT_CAP,
        4,
    )?;
    let r: Vec<f64> = rows.iter().map(|x| x.ratio).collect();
    let steps: Vec<f64> = (2..=5).map(|j| r[j] / r[j - 1]).collect();
    let flagged = rows.iter().filter(|x| !x.flags.is_empty()).count();
    let pass = strictly_increasing(&r) && steps.iter().all(|&s| s >= 1.2);
    let detail = format!(
        "ratios j=1..6 {}; ratio_(j+1)/ratio_j for j=2..5 {}; flagged rows {flagged}",
        fmt_list(&r),
        fmt_list(&steps)
    );
    Ok(Outcome::new(8, "imp1 blow-up", pass, detail))
}

/// kppg family on the mixed norm, `ω = √n`, `q = ∞`, `j = 1..4`.
pub fn criterion_9() -> Result<Outcome> {
    let rows = kppg_experiment(
        &SequenceSpace::mixnorm(),
        &Weight::power(0.5),
        Exponent::Infinity,
        4,
        DEFAULT_CAP,
    )?;
    let r: Vec<f64> = rows.iter().map(|x| x.ratio).collect();
    let flagged: Vec<usize> = rows.iter().filter(|x| !x.flags.is_empty()).map(|x| x.j_or_m).collect();
    let detail = format!(
        "ratios j=1..4 {}; rows flagged by the precondition check {flagged:?}",
        fmt_list(&r)
    );
    Ok(Outcome::new(9, "kppg blow-up", strictly_increasing(&r), detail))
}

/// Dilation indices: `√n ln(n+1)` in `[0.4, 0.6]`, powers within `0.02`.
pub fn criterion_10() -> Result<Outcome> {
    let (m_max, k_max) = (1 << 10, 1 << 12);
    let sl = dilation_indices(&Weight::sqrt_log(1.0), m_max, k_max)?;
    let in_band = |v: f64| (0.4..=0.6).contains(&v);
    let mut pass = in_band(sl.i_hat) && in_band(sl.big_i_hat);
    let mut detail = format!("sqrt*log: î = {:.4}, Î = {:.4}", sl.i_hat, sl.big_i_hat);
    for alpha in [0.25, 0.5, 1.0] {
        let r = dilation_indices(&Weight::power(alpha), m_max, k_max)?;
        let ok = (r.i_hat - alpha).abs() <= 0.02 && (r.big_i_hat - alpha).abs() <= 0.02;
        pass &= ok;
        detail.push_str(&format!("; n^{alpha}: î = {:.4}, Î = {:.4}", r.i_hat, r.big_i_hat));
    }
    Ok(Outcome::new(10, "weight indices", pass, detail))
}

/// `η_1(1) = 3 + 2√2` against a `10^6`-point grid of the objective.
pub fn criterion_11() -> Result<Outcome> {
    let value = eta_p(1.0, 1.0)?;
    // p = 1: A_1 = 1 and the objective is 1/(1-t) · (1 + t)/t
    const N: usize = 1_000_000;
    let grid = (1..N)
        .map(|i| {
            let t = i as f64 / N as f64;
            (1.0 + t) / ((1.0 - t) * t)
        })
        .fold(f64::INFINITY, f64::min);
    let exact = 3.0 + 2.0 * 2f64.sqrt();
    let pass = (value - exact).abs() <= 1e-3 && (grid - exact).abs() <= 1e-3;
    let detail = format!("eta_p(1,1) = {value:.9}, grid {grid:.9}, 3+2√2 = {exact:.9}");
    Ok(Outcome::new(11, "eta_p spot value", pass, detail))
}

/// Properties (W), (W*) and (I) on the bundled non-`ℓ_p` spaces.
pub fn criterion_12() -> Result<Outcome> {
    let spaces = [
        SequenceSpace::summing(),
        SequenceSpace::difference(),
        SequenceSpace::schreier(),
        SequenceSpace::mixnorm(),
    ];
    let mut pass = true;
    let mut parts = vec![];
    for s in &spaces {
        let w = check_property_w(s, 4, 8, 8 + 16 + 4)?;
        let wc = w.witness_constant.unwrap_or(f64::INFINITY);
        let ok = w.holds && wc <= 1.0 + 1e-9 && w.constant <= 1.0 + 1e-9;
        pass &= ok;
        parts.push(format!("{} W: C = {:.4}, quoted C = {wc:.4}", s.name(), w.constant));
    }
    for s in &spaces {
        let ws = check_property_wstar(s, 6, 16)?;
        let (c1, c2) = (
            ws.witness_c1.unwrap_or(usize::MAX),
            ws.witness_c2.unwrap_or(f64::INFINITY),
        );
        let ok = ws.holds && c2 <= 1.0 + 1e-9 && ws.c1 <= c1;
        pass &= ok;
        parts.push(format!(
            "{} W*: search (C1, C2) = ({}, {:.4}), quoted ({c1}, {c2:.4})",
            s.name(),
            ws.c1,
            ws.c2
        ));
    }
    let psi_id = |m: usize| m;
    let psi_sq = |m: usize| (m * m).saturating_sub(1).max(1);
    let runs: [(&SequenceSpace, &dyn Fn(usize) -> usize); 3] =
        [(&spaces[0], &psi_id), (&spaces[2], &psi_sq), (&spaces[3], &psi_id)];
    for (s, psi) in runs {
        let r = check_property_i(s, psi, 4, 6, 400)?;
        let mut ok = r.holds;
        if s.name() == "summing" {
            ok &= r.doubling_ratio == 1.0 && r.comparison_ratio == 1.0;
        }
        pass &= ok;
        parts.push(format!(
            "{} I: doubling {:.4}, comparison {:.4}{}",
            s.name(),
            r.doubling_ratio,
            r.comparison_ratio,
            if r.exhaustive { "" } else { " (structural minimisers)" }
        ));
    }
    Ok(Outcome::new(12, "property suite", pass, parts.join("; ")))
}

/// `‖U(x,A)‖ ≤ 2‖x‖` for all greedy sets on `ℓ_2` and the Schreier space.
pub fn criterion_13(seed: u64) -> Result<Outcome> {
    let sample = random_sample(seed, 200, 8, 16);
    let mut worst = 0.0f64;
    let mut sets = 0;
    let mut bad = 0;
    for space in [SequenceSpace::lp(2.0)?, SequenceSpace::schreier()] {
        for x in &sample {
            let nx = space.norm(x);
            for m in 1..=x.len() {
                for a in greedy_sets(x, m, DEFAULT_CAP)?.sets {
                    sets += 1;
                    let r = space.norm(&truncate(x, &a, TruncationKind::U).vector) / nx;
                    worst = worst.max(r);
                    bad += usize::from(r > 2.0 + 1e-12);
                }
            }
        }
    }
    let detail = format!("{sets} greedy sets, max ‖U(x,A)‖/‖x‖ = {worst:.4}, {bad} over 2");
    Ok(Outcome::new(13, "truncation boundedness", bad == 0, detail))
}

pub fn run(id: u32, seed: u64) -> Result<Outcome> {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(seed),
        6 => criterion_6(seed),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        13 => criterion_13(seed),
        _ => crate::error::invalid(format!("no criterion {id}")),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<Outcome>> {
    (1..=13).map(|id| run(id, seed)).collect()
}
