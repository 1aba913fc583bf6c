//! `rigidity-forge`: build, verify and tabulate sparse-plus-low-rank
//! certificates.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage or parse error,
//! 3 construction infeasible.

mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigidity_forge::certify::{
    abelian_decompose, ambient_by_search, circulant_decompose, dft_any_decompose, dft_decompose, gwh_decompose, gwh_finite_field,
    verify_against, AbelianPlan, BlockParams, Certificate, CertifyError, CirculantPlan, DftBlockPlan,
};
use rigidity_forge::field::Field;
use rigidity_forge::io;
use rigidity_forge::numtheory::{
    find_factorable, good_primes, is_squarefree, pi_a, scales_search, FactorableWitness, GoodPrimeConfig,
    ScalesFamily,
};
use rigidity_forge::structured::AbelianGroupSpec;
use serde_json::json;

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "rigidity-forge", version, about = "Exact sparse-plus-low-rank certificates for structured matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate and check it before writing.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Check a certificate file by exact elimination.
    Verify(VerifyArgs),
    #[command(subcommand)]
    Numtheory(NumCmd),
    /// Certify a range of sizes and tabulate the verified results as CSV.
    Sweep(sweep::SweepArgs),
}

#[derive(Args, Clone)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// `auto`, `q`, `cyclotomic:M`, `fq:P` or `fq:P,c0,...,ck`.
    #[arg(long, default_value = "auto")]
    field: String,
}

#[derive(Args, Clone)]
struct Thresholds {
    /// Smallest subset size handled by the product construction.
    #[arg(long)]
    k0: Option<usize>,
    /// Subset size at or above which lines are removed outright.
    #[arg(long)]
    removal: Option<usize>,
    /// Carried-factor budget exponent.
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Symmetric-plan parameter inside the product construction.
    #[arg(long = "block-m", default_value_t = 1)]
    block_m: usize,
}

impl Thresholds {
    fn params(&self) -> BlockParams {
        BlockParams {
            k0: self.k0,
            removal: self.removal,
            epsilon: self.epsilon,
            m: Some(self.block_m),
            ..BlockParams::default()
        }
    }
}

#[derive(Args, Clone)]
struct Ambient {
    /// Squarefree ambient size for the circulant embedding.
    #[arg(long, conflicts_with = "ambient_search")]
    ambient: Option<u64>,
    /// Use a factorable ambient size from the interval search instead of
    /// the smallest squarefree one.
    #[arg(long)]
    ambient_search: bool,
}

impl Ambient {
    fn resolve(&self, bound: u64) -> Result<Option<u64>, Failure> {
        if self.ambient_search {
            Ok(Some(ambient_by_search(bound)?))
        } else {
            Ok(self.ambient)
        }
    }

    fn given(&self) -> bool {
        self.ambient.is_some() || self.ambient_search
    }
}

#[derive(Subcommand)]
enum CertifyCmd {
    /// `H_{d,n}` with the symmetric plan of parameter `m`.
    Gwh {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: Output,
    },
    /// `DFT_N`; squarefree sizes use the block construction directly.
    Dft {
        #[arg(long = "N")]
        n: u64,
        /// Forces the ambient embedding, which sizes that are not
        /// squarefree always use.
        #[command(flatten)]
        ambient: Ambient,
        #[command(flatten)]
        thresholds: Thresholds,
        #[command(flatten)]
        out: Output,
    },
    /// Circulant with the top row read from a file of scalars.
    Circulant {
        #[arg(long = "top-row")]
        top_row: PathBuf,
        #[command(flatten)]
        ambient: Ambient,
        #[command(flatten)]
        thresholds: Thresholds,
        #[command(flatten)]
        out: Output,
    },
    /// Adjusted circulant of `Z_{n1} x ... x Z_{na}`, `f` in index order.
    Abelian {
        #[arg(long, value_delimiter = ',')]
        factors: Vec<u64>,
        #[arg(long)]
        f: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long = "split", default_value_t = 1)]
        split_threshold: usize,
        #[arg(long)]
        ambient: Option<u64>,
        #[command(flatten)]
        thresholds: Thresholds,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct VerifyArgs {
    cert: PathBuf,
    /// Rebuild the matrix from the certificate's descriptor (the default).
    #[arg(long, conflicts_with = "matrix_file")]
    matrix_from_descriptor: bool,
    /// Check against the matrix in this descriptor file instead.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum NumCmd {
    /// Primes `q` in `[lower, upper]` whose `q - 1` has only prime powers
    /// up to `max-pp`.
    GoodPrimes {
        #[arg(long)]
        lower: u64,
        #[arg(long)]
        upper: u64,
        #[arg(long = "max-pp")]
        max_pp: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// A product of `l` distinct good primes.
    Factorable {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        lower: u64,
        #[arg(long)]
        upper: u64,
        #[arg(long = "max-pp")]
        max_pp: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Number of primes `a < p <= x` with every prime factor of `p - a` at
    /// most `y`.
    Pi {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// A factorable `N` with `K < N < K (ln K)^2` under the relaxed family.
    Scales {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Failure carrying its exit code.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Self(USAGE, msg.to_string())
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        let code = match &e {
            CertifyError::Infeasible(_) => INFEASIBLE,
            CertifyError::Unverified(_) | CertifyError::Invariant(_) => VERIFY_FAILED,
            _ => USAGE,
        };
        Self(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field_or(spec: &str, auto: impl FnOnce() -> Result<Field, CertifyError>) -> Result<Field, Failure> {
    if spec == "auto" {
        Ok(auto()?)
    } else {
        io::parse_field_spec(spec).map_err(Failure::usage)
    }
}

/// Writes the certificate after checking it; a certificate that fails its
/// own check is reported and not written.
fn emit(cert: &Certificate, out: &Output) -> Outcome {
    let report = verify_against(cert, None);
    eprintln!("{}", report.summary());
    if !report.passed() {
        return Err(Failure(VERIFY_FAILED, "constructed certificate does not verify".into()));
    }
    write_out(out.output.as_deref(), &io::serialize(cert))
}

fn scalars(path: &Path, field: &Field) -> Result<Vec<rigidity_forge::field::Value>, Failure> {
    io::parse_scalars(&read(path)?, field).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn certify(cmd: &CertifyCmd) -> Outcome {
    match cmd {
        CertifyCmd::Gwh { d, n, m, out } => {
            let field = field_or(&out.field, || Ok(Field::cyclotomic(*d)?))?;
            let cert = if field.is_finite() {
                gwh_finite_field(*d, *n, *m, &field)?
            } else {
                gwh_decompose(*d, *n, *m, &field)?
            };
            emit(&cert, out)
        }
        CertifyCmd::Dft { n, ambient, thresholds, out } => {
            let cert = if is_squarefree(*n) && !ambient.given() {
                let field = field_or(&out.field, || Ok(Field::cyclotomic(*n)?))?;
                let plan = DftBlockPlan { witness: FactorableWitness::from_squarefree(*n).map_err(Failure::usage)?, params: thresholds.params() };
                dft_decompose(&plan, &field)?
            } else {
                let field = field_or(&out.field, || Ok(Field::rationals()))?;
                let ambient = ambient.resolve(2 * n - 1)?;
                dft_any_decompose(*n, &field, &CirculantPlan { ambient, params: thresholds.params() })?
            };
            emit(&cert, out)
        }
        CertifyCmd::Circulant { top_row, ambient, thresholds, out } => {
            let field = field_or(&out.field, || Ok(Field::rationals()))?;
            let f = scalars(top_row, &field)?;
            let plan = CirculantPlan { ambient: ambient.resolve(2 * f.len() as u64)?, params: thresholds.params() };
            let cert = circulant_decompose(&f, &field, &plan)?;
            emit(&cert, out)
        }
        CertifyCmd::Abelian { factors, f, m, split_threshold, ambient, thresholds, out } => {
            let group = AbelianGroupSpec::new(factors.clone()).map_err(Failure::usage)?;
            let field = field_or(&out.field, || Ok(Field::rationals()))?;
            let values = scalars(f, &field)?;
            let plan =
                AbelianPlan { m: *m, params: thresholds.params(), ambient: *ambient, split_threshold: *split_threshold };
            emit(&abelian_decompose(&group, &values, &field, &plan)?, out)
        }
    }
}

fn verify_cmd(args: &VerifyArgs) -> Outcome {
    let cert = io::parse(&read(&args.cert)?).map_err(|e| Failure::usage(format!("{}: {e}", args.cert.display())))?;
    let matrix = match &args.matrix_file {
        Some(p) => {
            let desc = io::parse_matrix(&read(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            let m = desc.realize().map_err(Failure::usage)?;
            Some(m.embed_into(&cert.field).map_err(Failure::usage)?)
        }
        None => None,
    };
    let report = verify_against(&cert, matrix.as_ref());
    if args.json {
        let v = json!({
            "passed": report.passed(),
            "claimed_rank": report.claimed_rank,
            "claimed_regular_sparsity": report.claimed_regular_sparsity,
            "achieved_rank": report.achieved_rank,
            "achieved_row_sparsity": report.achieved_sparsity.max_per_row,
            "achieved_col_sparsity": report.achieved_sparsity.max_per_col,
            "error": report.error,
        });
        println!("{v}");
    } else {
        println!("{}", report.summary());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure(VERIFY_FAILED, "verification failed".into()))
    }
}

fn print_rows(format: Format, header: &[&str], rows: Vec<Vec<serde_json::Value>>) -> Outcome {
    match format {
        Format::Json => {
            let objs: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|r| serde_json::Value::Object(header.iter().map(|h| h.to_string()).zip(r).collect()))
                .collect();
            println!("{}", serde_json::to_string_pretty(&objs).expect("plain data serializes"));
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let cell = |v: &serde_json::Value| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record(header).map_err(Failure::usage)?;
            for r in rows {
                w.write_record(r.iter().map(cell)).map_err(Failure::usage)?;
            }
            w.flush().map_err(Failure::usage)
        }
    }
}

fn config(lower: u64, upper: u64, max_pp: u64) -> Result<GoodPrimeConfig, Failure> {
    GoodPrimeConfig::new(lower, upper, max_pp).map_err(Failure::usage)
}

fn numtheory(cmd: &NumCmd) -> Outcome {
    match cmd {
        NumCmd::GoodPrimes { lower, upper, max_pp, format } => {
            let rows = good_primes(&config(*lower, *upper, *max_pp)?).into_iter().map(|q| vec![json!(q)]).collect();
            print_rows(*format, &["q"], rows)
        }
        NumCmd::Factorable { l, lower, upper, max_pp, format } => {
            let w = find_factorable(*l, &config(*lower, *upper, *max_pp)?)
                .map_err(|e| Failure(INFEASIBLE, e.to_string()))?;
            let primes = w.primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            print_rows(*format, &["n", "primes"], vec![vec![json!(w.n), json!(primes)]])
        }
        NumCmd::Pi { a, x, y, format } => {
            let count = pi_a(*a, *x, *y).map_err(Failure::usage)?;
            print_rows(*format, &["a", "x", "y", "count"], vec![vec![json!(a), json!(x), json!(y), json!(count)]])
        }
        NumCmd::Scales { k, format } => {
            let w = scales_search(*k, &ScalesFamily::relaxed()).map_err(|e| Failure(INFEASIBLE, e.to_string()))?;
            let primes = w.primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            print_rows(*format, &["k", "n", "primes"], vec![vec![json!(k), json!(w.n), json!(primes)]])
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Certify(c) => certify(c),
        Command::Verify(v) => verify_cmd(v),
        Command::Numtheory(n) => numtheory(n),
        Command::Sweep(s) => sweep::run(s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("rigidity-forge: {msg}");
            ExitCode::from(code)
        }
    }
}
