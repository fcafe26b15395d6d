//! Multistart coordinate descent for the best-coefficient problem in the
//! spaces without a linear-programming formulation (`ℓ_p`, mixed norm).
//!
//! Each sweep runs a golden-section line search along every coordinate
//! direction and along every `e_i ± e_j`, the latter so that the search does
//! not stall on the kinks of a nonsmooth norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::greedy::golden_min;
use crate::spaces::SequenceSpace;
use crate::vector::SparseVector;

pub const RESTARTS: usize = 32;
pub const MAX_SWEEPS: usize = 100;
pub const STOP_GAIN: f64 = 1e-9;
const SEED: u64 = 0x6772_6565_6479;

pub struct DescentResult {
    pub value: f64,
    pub coefficients: Vec<f64>,
    /// The best start stopped on the gain criterion rather than the sweep budget.
    pub converged: bool,
}

struct Objective<'a> {
    space: &'a SequenceSpace,
    base: Vec<(usize, f64)>,
    slots: Vec<usize>,
}

impl Objective<'_> {
    fn eval(&self, a: &[f64], buf: &mut Vec<(usize, f64)>) -> f64 {
        buf.clear();
        buf.extend_from_slice(&self.base);
        for (&slot, &c) in self.slots.iter().zip(a) {
            buf[slot].1 -= c;
        }
        self.space.norm_entries(buf)
    }
}

pub fn minimize(space: &SequenceSpace, x: &SparseVector, a: &[usize]) -> DescentResult {
    let mut base: Vec<(usize, f64)> = x.iter().collect();
    for &n in a {
        if x.get(n) == 0.0 {
            base.push((n, 0.0));
        }
    }
    base.sort_unstable_by_key(|e| e.0);
    let slots: Vec<usize> = a
        .iter()
        .map(|n| base.binary_search_by_key(n, |e| e.0).expect("slot present"))
        .collect();
    let obj = Objective { space, base, slots };
    let scale = x.max_abs().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ a.len() as u64);
    let mut best = DescentResult {
        value: f64::INFINITY,
        coefficients: vec![],
        converged: false,
    };
    for start in 0..RESTARTS {
        let init: Vec<f64> = if start == 0 {
            a.iter().map(|&n| x.get(n)).collect()
        } else {
            (0..a.len())
                .map(|_| rng.gen_range(-2.0 * scale..=2.0 * scale))
                .collect()
        };
        let run = descend(&obj, init, scale);
        if run.value < best.value {
            best = run;
        }
    }
    best
}

fn descend(obj: &Objective<'_>, mut a: Vec<f64>, scale: f64) -> DescentResult {
    let k = a.len();
    let mut buf = Vec::new();
    let mut value = obj.eval(&a, &mut buf);
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        let mut d = vec![0.0; k];
        d[i] = 1.0;
        dirs.push(d);
    }
    for i in 0..k {
        for j in i + 1..k {
            for s in [1.0, -1.0] {
                let mut d = vec![0.0; k];
                d[i] = 1.0;
                d[j] = s;
                dirs.push(d);
            }
        }
    }
    let mut converged = k == 0;
    let mut radius = 2.0 * scale;
    for _ in 0..MAX_SWEEPS {
        if k == 0 {
            break;
        }
        let before = value;
        for d in &dirs {
            let line = |s: f64| {
                let p: Vec<f64> = a.iter().zip(d).map(|(ai, di)| ai + s * di).collect();
                obj.eval(&p, &mut Vec::with_capacity(obj.base.len()))
            };
            let (s, v) = golden_min(line, -radius, radius, 1e-12);
            if v < value {
                value = v;
                for (ai, di) in a.iter_mut().zip(d) {
                    *ai += s * di;
                }
            }
        }
        if before - value < STOP_GAIN {
            converged = true;
            break;
        }
        radius = (radius * 0.75).max((before - value).max(1e-6));
    }
    DescentResult {
        value,
        coefficients: a,
        converged,
    }
}
