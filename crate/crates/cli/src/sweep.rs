//! Parameter sweeps: one verified certificate per size, rows in parameter
//! order whatever the worker count.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use rigidity_forge::certify::{
    circulant_decompose, dft_any_decompose, dft_decompose, gwh_decompose, verify, BlockParams, Certificate,
    CirculantPlan, DftBlockPlan,
};
use rigidity_forge::field::{Field, FieldDescriptor};
use rigidity_forge::numtheory::{is_squarefree, FactorableWitness};

use crate::{Failure, Outcome, INFEASIBLE, USAGE, VERIFY_FAILED};

/// Caps the number of sweep workers.
pub const THREADS_ENV: &str = "RIGIDITY_FORGE_THREADS";

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    /// `H_{d,n}` for `n` in the range.
    Gwh,
    /// `DFT_N` for `N` in the range.
    Dft,
    /// Circulant with top row `1, 2, ..., N` over `Q`.
    Circulant,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Inclusive range `a..b` (or a single value) of `n` for `gwh` and of
    /// `N` otherwise.
    #[arg(long)]
    range: String,
    #[arg(long, default_value_t = 2)]
    d: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// CSV output file; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("bad range {s:?}, expected a..b");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

struct Row {
    family: &'static str,
    n: usize,
    params: String,
    rank: usize,
    row_s: usize,
    col_s: usize,
    field_order: u128,
    wall_ms: u128,
}

enum JobError {
    Construction(String),
    Verification(String),
}

fn field_order(f: &Field) -> u128 {
    match f.descriptor() {
        FieldDescriptor::Cyclotomic { order } => *order as u128,
        _ => f.order().unwrap_or(0),
    }
}

fn build(family: Family, v: u64, d: u64, m: usize) -> Result<(Certificate, String), String> {
    let e = |e: rigidity_forge::certify::CertifyError| e.to_string();
    match family {
        Family::Gwh => {
            let field = Field::cyclotomic(d).map_err(|x| x.to_string())?;
            Ok((gwh_decompose(d, v as usize, m, &field).map_err(e)?, format!("d={d};n={v};m={m}")))
        }
        Family::Dft if is_squarefree(v) => {
            let field = Field::cyclotomic(v).map_err(|x| x.to_string())?;
            let witness = FactorableWitness::from_squarefree(v).map_err(|x| x.to_string())?;
            let plan = DftBlockPlan { witness, params: BlockParams::default() };
            Ok((dft_decompose(&plan, &field).map_err(e)?, format!("N={v};squarefree")))
        }
        Family::Dft => Ok((
            dft_any_decompose(v, &Field::rationals(), &CirculantPlan::default()).map_err(e)?,
            format!("N={v};ambient"),
        )),
        Family::Circulant => {
            let q = Field::rationals();
            let f: Vec<_> = (1..=v as i64).map(|i| q.from_i64(i)).collect();
            Ok((circulant_decompose(&f, &q, &CirculantPlan::default()).map_err(e)?, format!("N={v};top_row=1..N")))
        }
    }
}

fn job(family: Family, v: u64, d: u64, m: usize) -> Result<Row, JobError> {
    let start = Instant::now();
    let (cert, params) = build(family, v, d, m).map_err(JobError::Construction)?;
    let report = verify(&cert);
    if !report.passed() {
        return Err(JobError::Verification(format!("{params}: {}", report.summary())));
    }
    Ok(Row {
        family: cert.matrix.family(),
        n: cert.shape().0,
        params,
        rank: report.achieved_rank,
        row_s: report.achieved_sparsity.max_per_row,
        col_s: report.achieved_sparsity.max_per_col,
        field_order: field_order(&cert.field),
        wall_ms: start.elapsed().as_millis(),
    })
}

fn threads() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure(USAGE, format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(0),
    }
}

pub fn run(args: &SweepArgs) -> Outcome {
    let (a, b) = parse_range(&args.range).map_err(|e| Failure(USAGE, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads()?)
        .build()
        .map_err(|e| Failure(USAGE, e.to_string()))?;
    let (family, d, m) = (args.family, args.d, args.m);
    let results: Vec<(u64, Result<Row, JobError>)> =
        pool.install(|| (a..=b).into_par_iter().map(|v| (v, job(family, v, d, m))).collect());
    let sink: Box<dyn std::io::Write> = match &args.csv {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| Failure(USAGE, format!("{}: {e}", p.display())))?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Failure(USAGE, e.to_string());
    w.write_record(["family", "N", "params", "rank", "row_s", "col_s", "field_order", "wall_ms"]).map_err(csv_err)?;
    let mut code = 0;
    for (v, r) in results {
        match r {
            Ok(row) => w
                .write_record([
                    row.family.to_string(),
                    row.n.to_string(),
                    row.params,
                    row.rank.to_string(),
                    row.row_s.to_string(),
                    row.col_s.to_string(),
                    row.field_order.to_string(),
                    row.wall_ms.to_string(),
                ])
                .map_err(csv_err)?,
            Err(JobError::Construction(msg)) => {
                eprintln!("skipped {v}: {msg}");
                code = code.max(INFEASIBLE);
            }
            Err(JobError::Verification(msg)) => {
                eprintln!("failed {v}: {msg}");
                code = VERIFY_FAILED;
            }
        }
    }
    w.flush().map_err(|e| Failure(USAGE, e.to_string()))?;
    match code {
        0 => Ok(()),
        c => Err(Failure(c, "some sweep jobs did not produce a verified certificate".into())),
    }
}
