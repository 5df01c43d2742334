//! The `stickel` command line: residue-degree verdicts, range scans, Kummer
//! basis inspection, norm equation checks and the worked `ℓ = 23` report.
//!
//! Everything goes through [`run`], which writes data to `out`, diagnostics to
//! `err`, and returns the process exit code.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer as _;
use rayon::prelude::*;
use serde::Serialize;

use stickel_core::class_data::H_PLUS_KNOWN_BOUND;
use stickel_core::galois_arith::is_prime_u64;
use stickel_core::norm_solver::{parse_rational, TraceStep};
use stickel_core::stickelberger::{Reason, StressReport};
use stickel_core::zlattice::dot;
use stickel_core::{
    maillet_h_minus, norm_solvable, theta_f_element, ArithError, ClassNumberRecord, ClassNumberTable,
    CyclotomicModulus, GroupRingElement, KummerBasis, LatticeError, MembershipResult, NormVerdict, ResidueDegreeSet,
    ResidueGeneration, ResidueGenerationVerdict, SolveOutcome, StickelbergerError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const TSV_HEADER: &str = "ell\tf\tstatus\treason\trepresentatives\tassumptions";

#[derive(Parser, Debug)]
#[command(name = "stickel", version, about = "Stickelberger ideal and norm equation tools for Q(zeta_l)")]
pub struct Cli {
    /// Class number table to use instead of the built-in one.
    #[arg(long, global = true, env = "STICKELBERGER_TABLE", value_name = "PATH")]
    pub table: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide which residue degrees generate the class group of Q(zeta_l).
    Resgen(ResgenArgs),
    /// Residue-degree verdicts for every prime in a range.
    Scan(ScanArgs),
    /// Inspect the Kummer basis of the Stickelberger ideal.
    Stickelberger(StickelbergerArgs),
    /// Decide solvability of |N(x)| = a over Q(zeta_l).
    NormCheck(NormCheckArgs),
    /// Regenerate the worked example for one conductor.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Tsv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Human, conflicts_with_all = ["json", "tsv"])]
    pub format: OutputFormat,
    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with = "tsv")]
    pub json: bool,
    /// Shorthand for `--format tsv`.
    #[arg(long)]
    pub tsv: bool,
}

impl FormatArgs {
    pub fn resolve(self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.tsv {
            OutputFormat::Tsv
        } else {
            self.format
        }
    }
}

#[derive(Args, Debug)]
pub struct ResgenArgs {
    #[arg(long)]
    pub ell: u64,
    /// A single residue degree; all divisors of l - 1 when omitted.
    #[arg(long)]
    pub f: Option<u64>,
    #[command(flatten)]
    pub format: FormatArgs,
    /// Proceed for l >= 100, where h_plus = 1 is not known.
    #[arg(long)]
    pub assume_h_plus_one: bool,
    /// Also test this many random coset-representative choices per degree.
    #[arg(long, value_name = "TRIALS")]
    pub stress: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub ell_min: u64,
    #[arg(long)]
    pub ell_max: u64,
    #[command(flatten)]
    pub format: FormatArgs,
    #[arg(long)]
    pub assume_h_plus_one: bool,
    /// Fan the conductors out over a thread pool.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Args, Debug)]
pub struct StickelbergerArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub json: bool,
    #[command(subcommand)]
    pub action: StickelbergerAction,
}

#[derive(Subcommand, Debug)]
pub enum StickelbergerAction {
    /// Print the supports of f_1, ..., f_h and N.
    Basis,
    /// Test whether an element lies in the Stickelberger ideal.
    Member {
        /// `{1,5}`, `2*s1 - s7` or `N`.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
}

#[derive(Args, Debug)]
pub struct NormCheckArgs {
    #[arg(long)]
    pub ell: u64,
    /// An integer or a fraction `n/d`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[command(flatten)]
    pub format: FormatArgs,
    #[arg(long)]
    pub assume_h_plus_one: bool,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Emit the full worked example (basis, certificates, verdicts, norms).
    #[arg(long, required = true)]
    pub paper: bool,
    #[arg(long, default_value_t = 23)]
    pub ell: u64,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<StickelbergerError> for Failure {
    fn from(e: StickelbergerError) -> Self {
        match e {
            StickelbergerError::CertificateRejected(_)
            | StickelbergerError::RankDefect { .. }
            | StickelbergerError::Lattice(LatticeError::CertificateFailed(_)) => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let table = load_table(cli)?;
    let text = match &cli.command {
        Command::Resgen(a) => cmd_resgen(&table, a, err)?,
        Command::Scan(a) => cmd_scan(&table, a)?,
        Command::Stickelberger(a) => cmd_stickelberger(a)?,
        Command::NormCheck(a) => cmd_normcheck(&table, a)?,
        Command::Report(a) => cmd_report(&table, a)?,
    };
    out.write_all(text.as_bytes()).map_err(|e| Failure::Internal(format!("cannot write output: {e}")))
}

fn load_table(cli: &Cli) -> Result<ClassNumberTable, Failure> {
    match &cli.table {
        Some(path) => ClassNumberTable::load(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => Ok(ClassNumberTable::builtin()),
    }
}

fn modulus(ell: u64) -> Result<CyclotomicModulus, Failure> {
    Ok(CyclotomicModulus::new(ell)?)
}

/// The class number record for `ℓ`, after the `h^+` gate.
fn record_for(table: &ClassNumberTable, ell: u64, assume: bool) -> Result<&ClassNumberRecord, Failure> {
    if ell >= H_PLUS_KNOWN_BOUND && !assume {
        return Err(StickelbergerError::HPlusUnknown { ell }.into());
    }
    table.get(ell).map_err(|e| Failure::Usage(format!("{e}; supply a table with --table or STICKELBERGER_TABLE")))
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn support_string(reps: &[u64]) -> String {
    let items: Vec<String> = reps.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn join_or_dash(items: &[String]) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.join(",")
    }
}

fn tsv_row(v: &ResidueGenerationVerdict) -> String {
    let reps = v.representatives.as_deref().map(support_string).unwrap_or_else(|| "-".into());
    format!("{}\t{}\t{}\t{}\t{}\t{}\n", v.ell, v.f, v.status, v.reason.name(), reps, join_or_dash(&v.assumptions))
}

fn vec_string(v: &[BigInt]) -> String {
    let items: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", items.join(", "))
}

/// One-paragraph account of a membership result for `θ`.
pub fn describe_membership(r: &MembershipResult, theta: &GroupRingElement) -> String {
    match r {
        MembershipResult::InS { coeffs } => {
            let (a0, rest) = coeffs.split_last().expect("basis has at least two columns");
            format!("InS: a_1..a_{} = {}, a_0 = {}", rest.len(), vec_string(rest), a0)
        }
        MembershipResult::NotInS { certificate } => format!("NotInS: {}", describe_certificate(certificate, theta)),
    }
}

fn describe_certificate(c: &SolveOutcome, theta: &GroupRingElement) -> String {
    match c {
        SolveOutcome::Solution { x } => format!("solution {}", vec_string(x)),
        SolveOutcome::RationalInfeasible { u } => format!(
            "no rational solution; u = {} has u^T M = 0 and u^T theta = {}",
            vec_string(u),
            dot(u, theta.coeffs())
        ),
        SolveOutcome::NonIntegral { pivot, row, value, z, modulus } => format!(
            "Hermite coordinate {pivot} (row {row}) is forced to {value}; z = {} has z^T M = 0 and z^T theta = {} mod {modulus}",
            vec_string(z),
            dot(z, theta.coeffs()).mod_floor(modulus)
        ),
    }
}

fn describe_verdict(v: &ResidueGenerationVerdict) -> String {
    let mut s = format!("ell = {}, f = {}: {} ({})\n", v.ell, v.f, v.status, v.reason.name());
    let theta = v.tested_element();
    if let (Some(reps), Some(theta)) = (&v.representatives, &theta) {
        let _ = writeln!(s, "  representatives: {}", support_string(reps));
        if let Reason::ThetaNotInS(r) | Reason::ThetaInS(r) = &v.reason {
            let _ = writeln!(s, "  {}", describe_membership(r, theta));
        }
    }
    let _ = writeln!(s, "  assumptions: {}", join_or_dash(&v.assumptions));
    s
}

fn human_table(record: &ClassNumberRecord, verdicts: &[ResidueGenerationVerdict]) -> String {
    let mut s =
        format!("ell = {}: h = {} (h_plus = {}, h_minus = {})\n", record.ell, record.h, record.h_plus, record.h_minus);
    let _ = writeln!(s, "{:<6}{:<14}{:<22}representatives", "f", "status", "reason");
    for v in verdicts {
        let reps = v.representatives.as_deref().map(support_string).unwrap_or_default();
        let row = format!("{:<6}{:<14}{:<22}{}", v.f, v.status.to_string(), v.reason.name(), reps);
        let _ = writeln!(s, "{}", row.trim_end());
    }
    let set = ResidueDegreeSet::from_verdicts(record.ell, verdicts);
    let members: Vec<String> = set.members.iter().map(u64::to_string).collect();
    let _ = write!(s, "R = {{{}}}", members.join(","));
    if !set.undecided.is_empty() {
        let undecided: Vec<String> = set.undecided.iter().map(u64::to_string).collect();
        let _ = write!(s, ", undecided: {{{}}}", undecided.join(","));
    }
    s.push('\n');
    let _ = writeln!(s, "assumptions: {}", join_or_dash(&set.assumptions));
    s
}

#[derive(Serialize)]
struct TableJson<'a> {
    ell: u64,
    verdicts: &'a [ResidueGenerationVerdict],
    residue_degrees: ResidueDegreeSet,
}

fn report_stress(gen: &ResidueGeneration<'_>, fs: &[u64], trials: usize, seed: u64, err: &mut dyn Write) -> CmdResult {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for &f in fs {
        let StressReport { f, trials, canonical_in_s, disagreements } =
            gen.stress_representatives(f, trials, &mut rng)?;
        let _ = writeln!(
            err,
            "stress: ell = {}, f = {f}: canonical {} S, {}/{trials} random choices disagree",
            gen.modulus().ell(),
            if canonical_in_s { "in" } else { "not in" },
            disagreements.len()
        );
        for d in disagreements.iter().take(3) {
            let _ = writeln!(err, "stress:   e.g. {}", support_string(d));
        }
    }
    Ok(())
}

pub fn cmd_resgen(table: &ClassNumberTable, a: &ResgenArgs, err: &mut dyn Write) -> Result<String, Failure> {
    let m = modulus(a.ell)?;
    let record = record_for(table, a.ell, a.assume_h_plus_one)?;
    let gen = ResidueGeneration::new(m, record, a.assume_h_plus_one)?;
    let verdicts = match a.f {
        Some(f) => vec![gen.verdict(f)?],
        None => gen.table()?,
    };
    if let Some(trials) = a.stress {
        let fs: Vec<u64> = verdicts
            .iter()
            .filter(|v| matches!(v.reason, Reason::ThetaNotInS(_) | Reason::ThetaInS(_)))
            .map(|v| v.f)
            .collect();
        report_stress(&gen, &fs, trials, a.seed, err)?;
    }
    let format = a.format.resolve();
    Ok(match (format, a.f) {
        (OutputFormat::Json, Some(_)) => to_json(&verdicts[0])?,
        (OutputFormat::Json, None) => to_json(&TableJson {
            ell: a.ell,
            residue_degrees: ResidueDegreeSet::from_verdicts(a.ell, &verdicts),
            verdicts: &verdicts,
        })?,
        (OutputFormat::Tsv, _) => {
            std::iter::once(format!("{TSV_HEADER}\n")).chain(verdicts.iter().map(tsv_row)).collect()
        }
        (OutputFormat::Human, Some(_)) => describe_verdict(&verdicts[0]),
        (OutputFormat::Human, None) => human_table(record, &verdicts),
    })
}

pub fn cmd_scan(table: &ClassNumberTable, a: &ScanArgs) -> Result<String, Failure> {
    let ells: Vec<u64> = (a.ell_min.max(3)..=a.ell_max).filter(|&p| is_prime_u64(p)).collect();
    let records = ells.iter().map(|&ell| record_for(table, ell, a.assume_h_plus_one)).collect::<Result<Vec<_>, _>>()?;
    let one = |(&ell, record): (&u64, &&ClassNumberRecord)| -> Result<Vec<ResidueGenerationVerdict>, Failure> {
        Ok(ResidueGeneration::new(modulus(ell)?, record, a.assume_h_plus_one)?.table()?)
    };
    let tables: Vec<Result<Vec<ResidueGenerationVerdict>, Failure>> = if a.parallel {
        ells.par_iter().zip(records.par_iter()).map(one).collect()
    } else {
        ells.iter().zip(records.iter()).map(one).collect()
    };
    let rows: Vec<ResidueGenerationVerdict> =
        tables.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    Ok(match a.format.resolve() {
        OutputFormat::Json => to_json(&rows)?,
        OutputFormat::Tsv => std::iter::once(format!("{TSV_HEADER}\n")).chain(rows.iter().map(tsv_row)).collect(),
        OutputFormat::Human => {
            let mut s = String::new();
            for v in &rows {
                let _ = writeln!(s, "{:<6}{:<6}{:<14}{}", v.ell, v.f, v.status.to_string(), v.reason.name());
            }
            s
        }
    })
}

#[derive(Serialize)]
struct BasisColumn {
    name: String,
    support: Vec<u64>,
}

#[derive(Serialize)]
struct BasisJson {
    ell: u64,
    rank: usize,
    columns: Vec<BasisColumn>,
}

/// Support of a 0/1 element listed as `i^{-1}` for `i = 1, …, ℓ−1`, the order
/// in which `θ_a = Σ ⌊ai/ℓ⌋ σ_i^{-1}` produces its terms.
pub fn support_in_inverse_order(e: &GroupRingElement) -> Vec<u64> {
    let m = e.modulus();
    m.units()
        .map(|g| m.inverse(g))
        .filter(|&inv| !num_traits::Zero::is_zero(e.coeff(inv)))
        .map(|g| g.residue())
        .collect()
}

fn basis_columns(basis: &KummerBasis) -> Vec<BasisColumn> {
    let elems = basis.elements();
    let last = elems.len() - 1;
    elems
        .iter()
        .enumerate()
        .map(|(j, e)| BasisColumn {
            name: if j == last { "N".into() } else { format!("f_{}", j + 1) },
            support: support_in_inverse_order(e),
        })
        .collect()
}

pub fn cmd_stickelberger(a: &StickelbergerArgs) -> Result<String, Failure> {
    let m = modulus(a.ell)?;
    let basis = KummerBasis::new(m)?;
    match &a.action {
        StickelbergerAction::Basis => {
            let columns = basis_columns(&basis);
            if a.json {
                return to_json(&BasisJson { ell: a.ell, rank: basis.rank(), columns });
            }
            let mut s = String::new();
            for c in &columns {
                let _ = writeln!(s, "{} = {}", c.name, support_string(&c.support));
            }
            let _ = writeln!(s, "rank = {}", basis.rank());
            Ok(s)
        }
        StickelbergerAction::Member { element } => {
            let theta = GroupRingElement::parse(m, element).map_err(|e| Failure::Usage(e.to_string()))?;
            let result = basis.member_of_s(&theta)?;
            let fresh = KummerBasis::build_matrix(m)?;
            result.verify(&fresh, &theta).map_err(StickelbergerError::CertificateRejected)?;
            if a.json {
                return to_json(&result);
            }
            Ok(format!("theta = {}\n{}\n", theta.to_coefficient_string(), describe_membership(&result, &theta)))
        }
    }
}

/// Residue-degree set used by the norm engine, when it can be had without
/// extra assumptions.
fn r_set_for(m: CyclotomicModulus, record: &ClassNumberRecord, assume: bool) -> Result<ResidueDegreeSet, Failure> {
    let verdicts = ResidueGeneration::new(m, record, assume)?.table()?;
    Ok(ResidueDegreeSet::from_verdicts(m.ell(), &verdicts))
}

fn describe_step(t: &TraceStep) -> String {
    let mut s = String::new();
    match &t.prime {
        Some(p) => {
            let _ = write!(s, "  p = {p}");
            if let (Some(v), Some(f)) = (t.valuation, t.residue_degree) {
                let _ = write!(s, ", v = {v}, f = {f}");
            }
        }
        None => s.push_str("  global"),
    }
    let _ = write!(s, ": {} {}", t.rule.name(), t.detail);
    s
}

fn describe_norm(v: &NormVerdict) -> String {
    let mut s = format!("ell = {}, a = {}: {}\n", v.ell, v.a, v.status);
    for t in &v.trace {
        s.push_str(&describe_step(t));
        s.push('\n');
    }
    let _ = writeln!(s, "  assumptions: {}", join_or_dash(&v.assumptions));
    s
}

fn norm_verdict(table: &ClassNumberTable, ell: u64, a: &str, assume: bool) -> Result<NormVerdict, Failure> {
    let m = modulus(ell)?;
    let q = parse_rational(a).map_err(|e| Failure::Usage(e.to_string()))?;
    let record = record_for(table, ell, assume)?;
    let r_set = r_set_for(m, record, assume)?;
    Ok(norm_solvable(m, &q, record, Some(&r_set)))
}

pub fn cmd_normcheck(table: &ClassNumberTable, a: &NormCheckArgs) -> Result<String, Failure> {
    let v = norm_verdict(table, a.ell, &a.a, a.assume_h_plus_one)?;
    Ok(match a.format.resolve() {
        OutputFormat::Json => to_json(&v)?,
        OutputFormat::Tsv => {
            let rules: Vec<String> = v.trace.iter().map(|t| t.rule.name().to_string()).collect();
            format!("ell\ta\tstatus\trules\n{}\t{}\t{}\t{}\n", v.ell, v.a, v.status, join_or_dash(&rules))
        }
        OutputFormat::Human => describe_norm(&v),
    })
}

/// Norm equation samples for the report: the boundary cases of the
/// valuation criterion at small primes.
const REPORT_NORMS: &[&str] =
    &["0", "1", "-1", "-4", "2", "32", "2048", "1/2048", "23", "47", "3", "9", "24863", "2048/23"];

pub fn cmd_report(table: &ClassNumberTable, a: &ReportArgs) -> Result<String, Failure> {
    let m = modulus(a.ell)?;
    let record = record_for(table, a.ell, false)?;
    let gen = ResidueGeneration::new(m, record, false)?;
    let basis = gen.basis()?;
    let fresh = KummerBasis::build_matrix(m)?;
    let mut s = String::new();

    let _ = writeln!(s, "# Q(zeta_{})\n", a.ell);
    let _ = writeln!(s, "## Class number\n");
    let _ = writeln!(s, "h = {}, h_plus = {}, h_minus = {}", record.h, record.h_plus, record.h_minus);
    let maillet = maillet_h_minus(m).map_err(|e| Failure::Internal(e.to_string()))?;
    let _ = writeln!(s, "h_minus from the Maillet determinant: {maillet}\n");

    let _ = writeln!(s, "## Kummer basis\n");
    for c in basis_columns(basis) {
        let _ = writeln!(s, "{} = {}", c.name, support_string(&c.support));
    }
    let _ = writeln!(s, "rank = {}\n", basis.rank());

    let verdicts = gen.table()?;
    for v in verdicts.iter().filter(|v| matches!(v.reason, Reason::ThetaNotInS(_) | Reason::ThetaInS(_))) {
        let _ = writeln!(s, "## Residue degree {}\n", v.f);
        let sub = m.subgroup_of_order(v.f)?;
        let members: Vec<u64> = sub.members().iter().map(|g| g.residue()).collect();
        let _ = writeln!(s, "decomposition group = {}", support_string(&members));
        let canonical = theta_f_element(m, v.f).map_err(StickelbergerError::from)?;
        let canonical_result = basis.member_of_s(&canonical)?;
        canonical_result.verify(&fresh, &canonical).map_err(StickelbergerError::CertificateRejected)?;
        let _ = writeln!(s, "theta_{} = {}", v.f, canonical.to_coefficient_string());
        let _ = writeln!(s, "{}", describe_membership(&canonical_result, &canonical));
        let tested = v.tested_element().ok_or_else(|| Failure::Internal("verdict lacks representatives".into()))?;
        if tested != canonical {
            let _ = writeln!(s, "swapped representatives: {}", tested.to_support_string());
            if let Reason::ThetaNotInS(r) | Reason::ThetaInS(r) = &v.reason {
                let _ = writeln!(s, "{}", describe_membership(r, &tested));
            }
        }
        let _ = writeln!(s, "verdict: {}\n", v.status);
    }

    let _ = writeln!(s, "## Residue degrees\n");
    s.push_str(&human_table(record, &verdicts));
    let r_set = ResidueDegreeSet::from_verdicts(a.ell, &verdicts);

    let _ = writeln!(s, "\n## Norm equations |N(x)| = a\n");
    let _ = writeln!(s, "{:<10}{:<14}rules", "a", "status");
    for text in REPORT_NORMS {
        let q = parse_rational(text).map_err(|e| Failure::Internal(e.to_string()))?;
        let v = norm_solvable(m, &q, record, Some(&r_set));
        let rules: Vec<String> = v
            .trace
            .iter()
            .map(|t| match &t.prime {
                Some(p) => format!("{}@{p}", t.rule.name()),
                None => t.rule.name().to_string(),
            })
            .collect();
        let _ = writeln!(s, "{:<10}{:<14}{}", text, v.status.to_string(), join_or_dash(&rules));
    }
    Ok(s)
}
