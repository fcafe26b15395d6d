//! Linear-programming formulations of the best-coefficient problem for the
//! summing, difference and Schreier norms, solved with `minilp`.
//!
//! Variables `a_n` (`n ∈ A`) are the coefficients subtracted from `x`, so the
//! residual is `y = x - Σ a_n e_n`. Among optimal coefficient vectors the
//! lexicographically smallest is returned: after the main solve the optimum
//! is frozen as a constraint and `a_{n_1}, a_{n_2}, …` are minimised in turn.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{LabError, Result};
use crate::spaces::{isqrt, SequenceSpace, SpaceKind};
use crate::vector::SparseVector;

type Row = (Vec<(usize, f64)>, ComparisonOp, f64);

struct Model {
    bounds: Vec<(f64, f64)>,
    rows: Vec<Row>,
    /// Objective of the main problem.
    main: Vec<(usize, f64)>,
    /// Variable index of each coefficient, in the order of `A`.
    coefs: Vec<usize>,
}

impl Model {
    fn new(k: usize) -> Self {
        Self {
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); k],
            rows: Vec::new(),
            main: Vec::new(),
            coefs: (0..k).collect(),
        }
    }

    fn var(&mut self, lo: f64, hi: f64) -> usize {
        self.bounds.push((lo, hi));
        self.bounds.len() - 1
    }

    fn row(&mut self, expr: Vec<(usize, f64)>, op: ComparisonOp, rhs: f64) {
        self.rows.push((expr, op, rhs));
    }

    fn solve(&self, objective: &[(usize, f64)], extra: &[Row]) -> Result<(f64, Vec<f64>)> {
        let mut obj = vec![0.0; self.bounds.len()];
        for &(i, c) in objective {
            obj[i] += c;
        }
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = self.bounds.iter().zip(&obj).map(|(&b, &c)| p.add_var(c, b)).collect();
        for (expr, op, rhs) in self.rows.iter().chain(extra) {
            let terms: Vec<_> = expr.iter().map(|&(i, c)| (vars[i], c)).collect();
            p.add_constraint(terms.as_slice(), *op, *rhs);
        }
        let sol = p.solve().map_err(|e| LabError::Solver(e.to_string()))?;
        let values = vars.iter().map(|&v| sol[v]).collect();
        Ok((sol.objective(), values))
    }
}

/// Affine function `constant + Σ coef·var` of the LP variables.
#[derive(Clone, Default)]
struct Affine {
    constant: f64,
    terms: Vec<(usize, f64)>,
}

/// `|affine| ≤ bound_var` as two rows.
fn abs_le(model: &mut Model, f: &Affine, bound: usize) {
    let mut up = f.terms.clone();
    up.push((bound, -1.0));
    model.row(up, ComparisonOp::Le, -f.constant);
    let mut down: Vec<(usize, f64)> = f.terms.iter().map(|&(i, c)| (i, -c)).collect();
    down.push((bound, -1.0));
    model.row(down, ComparisonOp::Le, f.constant);
}

/// Residual coordinate `y_n` as an affine function.
fn coordinate(x: &SparseVector, a: &[usize], n: usize) -> Affine {
    let mut f = Affine {
        constant: x.get(n),
        terms: vec![],
    };
    if let Ok(i) = a.binary_search(&n) {
        f.terms.push((i, -1.0));
    }
    f
}

fn positions(x: &SparseVector, a: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = x.support().into_iter().chain(a.iter().copied()).collect();
    p.sort_unstable();
    p.dedup();
    p
}

fn build(space: &SequenceSpace, x: &SparseVector, a: &[usize]) -> Result<Model> {
    let mut m = Model::new(a.len());
    let pos = positions(x, a);
    match space.kind {
        SpaceKind::SummingC0 => {
            let t = m.var(0.0, f64::INFINITY);
            m.main = vec![(t, 1.0)];
            let mut s = Affine::default();
            for &n in &pos {
                let y = coordinate(x, a, n);
                s.constant += y.constant;
                s.terms.extend(y.terms);
                abs_le(&mut m, &s, t);
            }
        }
        SpaceKind::DifferenceL1 => {
            let mut terms: Vec<usize> = pos
                .iter()
                .flat_map(|&n| [n.saturating_sub(1), n])
                .filter(|&n| n >= 1)
                .collect();
            terms.sort_unstable();
            terms.dedup();
            for n in terms {
                let mut d = coordinate(x, a, n);
                let next = coordinate(x, a, n + 1);
                d.constant -= next.constant;
                d.terms.extend(next.terms.iter().map(|&(i, c)| (i, -c)));
                let s = m.var(0.0, f64::INFINITY);
                m.main.push((s, 1.0));
                abs_le(&mut m, &d, s);
            }
        }
        SpaceKind::SchreierMod => {
            let t = m.var(0.0, f64::INFINITY);
            m.main = vec![(t, 1.0)];
            let u: Vec<usize> = pos
                .iter()
                .map(|&n| {
                    let ui = m.var(0.0, f64::INFINITY);
                    abs_le(&mut m, &coordinate(x, a, n), ui);
                    ui
                })
                .collect();
            // top-k sum of u over the tail {p ≥ start}:
            // min over λ of kλ + Σ max(0, u_p − λ)
            for (j, &start) in pos.iter().enumerate() {
                let k = isqrt(start).min(pos.len() - j) as f64;
                let lambda = m.var(f64::NEG_INFINITY, f64::INFINITY);
                let mut budget = vec![(lambda, k), (t, -1.0)];
                for &up in &u[j..] {
                    let mu = m.var(0.0, f64::INFINITY);
                    budget.push((mu, 1.0));
                    m.row(vec![(mu, 1.0), (up, -1.0), (lambda, 1.0)], ComparisonOp::Ge, 0.0);
                }
                m.row(budget, ComparisonOp::Le, 0.0);
            }
        }
        _ => {
            return Err(LabError::InvalidArgument(format!(
                "no linear-programming formulation for {}",
                space.name()
            )))
        }
    }
    Ok(m)
}

/// Optimal value of the LP and the lexicographically smallest optimal
/// coefficients, one per element of `a` (sorted ascending).
pub fn solve(space: &SequenceSpace, x: &SparseVector, a: &[usize]) -> Result<(f64, Vec<f64>)> {
    let model = build(space, x, a)?;
    let (opt, values) = model.solve(&model.main, &[])?;
    if a.is_empty() {
        return Ok((opt, vec![]));
    }
    let tol = 1e-10 * (1.0 + opt.abs());
    let mut extra: Vec<Row> = vec![(model.main.clone(), ComparisonOp::Le, opt + tol)];
    let mut last = values;
    for &ci in &model.coefs {
        let (v, vals) = model.solve(&[(ci, 1.0)], &extra)?;
        extra.push((vec![(ci, 1.0)], ComparisonOp::Le, v + 1e-10 * (1.0 + v.abs())));
        last = vals;
    }
    Ok((opt, model.coefs.iter().map(|&i| last[i]).collect()))
}
