use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use greedylab_core::chebyshev::{sigma, theta};
use greedylab_core::classes::{casec_construction, imp1_experiment, kppg_experiment, remark_ratio, ExperimentRow};
use greedylab_core::democracy::{h_l, h_left_positive, h_r, h_restricted};
use greedylab_core::greedy::{beta, gamma, DEFAULT_CAP};
use greedylab_core::sampling::random_sample;
use greedylab_core::verify::{run_all, DEFAULT_SEED};
use greedylab_core::weights::{check_doubling, dilation_indices};
use greedylab_core::{class_norm, ClassKind, ClassParams, Exponent, SequenceSpace, SignedSet, SparseVector, Weight};

#[derive(Parser)]
#[command(
    name = "greedylab",
    version,
    about = "Greedy approximation experiments in sequence spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct Vectors {
    /// JSON file holding a list of vectors, each a list of [index, coefficient] pairs.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Seed for the random sample used when no input is given.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 8)]
    max_support: usize,
    #[arg(long, default_value_t = 16)]
    horizon: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Hr,
    Hl,
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Remark,
    Imp1,
    Kppg,
    Casec,
}

#[derive(Subcommand)]
enum Command {
    /// Norms of a list of vectors.
    Norms {
        #[arg(long)]
        space: SequenceSpace,
        #[command(flatten)]
        vectors: Vectors,
        #[command(flatten)]
        output: Output,
    },
    /// σ, γ, ϑ and β of each vector at order m.
    Errors {
        #[arg(long)]
        space: SequenceSpace,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        vectors: Vectors,
        #[command(flatten)]
        output: Output,
    },
    /// Democracy functions and their restricted variants.
    Democracy {
        #[arg(long)]
        space: SequenceSpace,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long, value_enum, default_value = "hr")]
        side: SideArg,
        #[arg(long, default_value_t = 16)]
        horizon: usize,
        /// Restrict the left search to all-positive signs.
        #[arg(long)]
        positive: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Dilation bounds and indices of a weight.
    Weights {
        #[arg(long, default_value = "power:0.5")]
        w: Weight,
        #[arg(long = "Mmax", default_value_t = 1024)]
        m_max: usize,
        #[arg(long = "kmax", default_value_t = 4096)]
        k_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The four approximation-class norms of each vector.
    Classes {
        #[arg(long)]
        space: SequenceSpace,
        #[arg(long, default_value = "power:0.5")]
        w: Weight,
        #[arg(long, default_value = "2")]
        q: Exponent,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        vectors: Vectors,
        #[command(flatten)]
        output: Output,
    },
    /// Embedding-failure experiments.
    Experiment {
        #[arg(long, value_enum)]
        preset: Preset,
        #[arg(long)]
        space: Option<SequenceSpace>,
        #[arg(long, default_value = "power:0.5")]
        w: Weight,
        #[arg(long, default_value = "inf")]
        q: Exponent,
        /// Largest m (remark), j (imp1, kppg) or block size (casec).
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Number of parts for casec.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance suite; exits nonzero unless every criterion passes.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: vec![],
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                Ok(w.into_inner()?)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(r)
                            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&rows)?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    fn emit(&self, output: &Output) -> Result<()> {
        let bytes = self.render(output.format)?;
        match &output.out {
            Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
            None => Ok(io::stdout().write_all(&bytes)?),
        }
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn load_vectors(v: &Vectors) -> Result<Vec<SparseVector>> {
    let Some(path) = &v.input else {
        return Ok(random_sample(v.seed, v.count, v.max_support, v.horizon));
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: Vec<Vec<(usize, f64)>> =
        serde_json::from_str(&text).context("input must be a list of [index, coefficient] lists")?;
    raw.into_iter()
        .map(|pairs| SparseVector::from_pairs(pairs.into_iter().filter(|p| p.1 != 0.0)).map_err(Into::into))
        .collect()
}

fn window_for(space: &SequenceSpace, window: Option<usize>) -> usize {
    window.unwrap_or_else(|| greedylab_core::chebyshev::default_window(space))
}

fn signed_set_columns(s: &SignedSet) -> (String, String) {
    let idx: Vec<String> = s.indices().iter().map(|n| n.to_string()).collect();
    let sg: Vec<String> = s
        .signs()
        .iter()
        .map(|e| if *e > 0 { "+" } else { "-" }.to_string())
        .collect();
    (idx.join(" "), sg.join(" "))
}

fn experiment_table(rows: &[ExperimentRow]) -> Table {
    let mut t = Table::new(&[
        "preset", "j_or_m", "k", "u", "eta", "num_norm", "den_norm", "ratio", "bound", "flags",
    ]);
    for r in rows {
        t.push(vec![
            r.preset.clone(),
            r.j_or_m.to_string(),
            opt(r.k),
            opt(r.u),
            opt(r.eta),
            num(r.num_norm),
            num(r.den_norm),
            num(r.ratio),
            opt(r.bound),
            r.flags.join(" "),
        ]);
    }
    t
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Norms { space, vectors, output } => {
            let mut t = Table::new(&["space", "vector_id", "norm"]);
            for (i, x) in load_vectors(&vectors)?.iter().enumerate() {
                t.push(vec![space.name(), i.to_string(), num(space.norm(x))]);
            }
            t.emit(&output)?;
        }
        Command::Errors {
            space,
            m,
            window,
            cap,
            vectors,
            output,
        } => {
            let window = window_for(&space, window);
            let mut t = Table::new(&[
                "space",
                "vector_id",
                "m",
                "sigma",
                "gamma",
                "theta",
                "beta",
                "truncated_flags",
            ]);
            for (i, x) in load_vectors(&vectors)?.iter().enumerate() {
                let s = sigma(&space, x, m, window)?;
                let g = gamma(&space, x, m, cap)?;
                let th = theta(&space, x, m, cap)?;
                let mut flags = vec![];
                if g.truncated {
                    flags.push("gamma");
                }
                if th.truncated {
                    flags.push("theta");
                }
                t.push(vec![
                    space.name(),
                    i.to_string(),
                    m.to_string(),
                    num(s),
                    num(g.value),
                    num(th.value),
                    num(beta(&space, x, m)),
                    flags.join(" "),
                ]);
            }
            t.emit(&output)?;
        }
        Command::Democracy {
            space,
            m,
            u,
            side,
            horizon,
            positive,
            output,
        } => {
            let need_u = || u.context("--u is required for restricted sides");
            let report = match side {
                SideArg::Hr => h_r(&space, m, horizon)?,
                SideArg::Hl => h_l(&space, m, horizon)?,
                SideArg::Left if positive => h_left_positive(&space, m, need_u()?)?,
                SideArg::Left => h_restricted(&space, m, need_u()?, greedylab_core::Side::Left, horizon)?,
                SideArg::Right => h_restricted(&space, m, need_u()?, greedylab_core::Side::Right, horizon)?,
            };
            let (idx, signs) = signed_set_columns(&report.witness);
            let mut t = Table::new(&[
                "space",
                "m",
                "u",
                "side",
                "value",
                "witness_indices",
                "witness_signs",
                "horizon",
            ]);
            t.push(vec![
                space.name(),
                m.to_string(),
                opt(report.u),
                report.side.label().to_string(),
                num(report.value),
                idx,
                signs,
                report.horizon.to_string(),
            ]);
            t.emit(&output)?;
        }
        Command::Weights {
            w,
            m_max,
            k_max,
            output,
        } => {
            let idx = dilation_indices(&w, m_max, k_max)?;
            let theta = check_doubling(&w, k_max)?;
            let mut t = Table::new(&[
                "weight_id",
                "M",
                "phi_hat",
                "Phi_hat",
                "i_hat",
                "I_hat",
                "theta_hat",
                "k_max",
            ]);
            for b in &idx.bounds {
                t.push(vec![
                    w.id(),
                    b.m.to_string(),
                    num(b.phi_hat),
                    num(b.big_phi_hat),
                    num(idx.i_hat),
                    num(idx.big_i_hat),
                    num(theta),
                    k_max.to_string(),
                ]);
            }
            t.emit(&output)?;
        }
        Command::Classes {
            space,
            w,
            q,
            window,
            cap,
            vectors,
            output,
        } => {
            let window = window_for(&space, window);
            let mut t = Table::new(&["space", "vector_id", "weight_id", "q", "A", "CG", "G", "PG"]);
            for (i, x) in load_vectors(&vectors)?.iter().enumerate() {
                let mut row = vec![space.name(), i.to_string(), w.id(), q.to_string()];
                for kind in [ClassKind::A, ClassKind::CG, ClassKind::G, ClassKind::PG] {
                    let c = class_norm(
                        &space,
                        x,
                        &ClassParams {
                            weight: w.clone(),
                            q,
                            kind,
                        },
                        window,
                        cap,
                    )?;
                    row.push(num(c.value));
                }
                t.push(row);
            }
            t.emit(&output)?;
        }
        Command::Experiment {
            preset,
            space,
            w,
            q,
            m,
            r,
            window,
            cap,
            output,
        } => {
            let rows = match preset {
                Preset::Remark => remark_ratio(&space.unwrap_or_else(SequenceSpace::summing), &w, q, 1..=m)?,
                Preset::Imp1 => {
                    let space = space.unwrap_or_else(SequenceSpace::summing);
                    imp1_experiment(&space, &w, q, m, cap, window_for(&space, window))?
                }
                Preset::Kppg => kppg_experiment(&space.unwrap_or_else(SequenceSpace::mixnorm), &w, q, m, cap)?,
                Preset::Casec => {
                    let space = space.unwrap_or_else(SequenceSpace::summing);
                    let ms = SignedSet::alternating((1..=m).collect())?;
                    let d: Vec<usize> = (m + 1..=2 * m).collect();
                    let c = casec_construction(&space, &ms, &d, r)?;
                    let mut flags = vec![];
                    if !c.premise {
                        flags.push("premise_fails".to_string());
                    }
                    if !c.chain_holds {
                        flags.push("chain_fails".to_string());
                    }
                    let lhs = c.x_norm.powf(c.p);
                    vec![ExperimentRow {
                        preset: "casec".into(),
                        j_or_m: m,
                        k: Some(r),
                        u: None,
                        eta: None,
                        num_norm: lhs,
                        den_norm: c.bound,
                        ratio: lhs / c.bound,
                        bound: Some(1.0),
                        flags,
                    }]
                }
            };
            experiment_table(&rows).emit(&output)?;
        }
        Command::Verify { seed, output } => {
            let outcomes = run_all(seed)?;
            let mut t = Table::new(&["id", "name", "pass", "detail"]);
            for o in &outcomes {
                eprintln!("{}", o.line());
                t.push(vec![
                    o.id.to_string(),
                    o.name.to_string(),
                    o.pass.to_string(),
                    o.detail.clone(),
                ]);
            }
            if output.out.is_some() {
                t.emit(&output)?;
            }
            let passed = outcomes.iter().filter(|o| o.pass).count();
            eprintln!("{passed}/{} criteria pass", outcomes.len());
            return Ok(passed == outcomes.len());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
