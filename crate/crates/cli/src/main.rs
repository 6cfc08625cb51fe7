use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sn_core::builder::{CfpTable, Engine, ReductionTask};
use sn_core::characters::{character_table, inner_cg, kronecker_multiplicities};
use sn_core::combinatorics::{
    conjugate, dimension, enumerate_syt, lambda_eigenvalue, outer_decompose, partitions, Partition,
};
use sn_core::matelem::{load_specs, one_body_me, two_body_me, MeMatrix};
use sn_core::tables_io::{
    caption, column_heads, corpus_files, data_dir, export_table, verify_reference, CompareReport, Format,
    ReferenceTable,
};

#[derive(Parser)]
#[command(name = "sn", version, about = "Exact representation theory of S_n for n <= 6")]
struct Cli {
    /// Worker threads for independent tasks; output order does not depend on it.
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of an irrep.
    Dim { f: Partition },
    /// Class-sum eigenvalue of an irrep.
    Lambda { f: Partition },
    /// Conjugate partition.
    Conj { f: Partition },
    /// Standard Young tableaux as Yamanouchi symbols.
    Syt { f: Partition },
    /// Outer product decomposition f1 x f2.
    Outer { f1: Partition, f2: Partition },
    /// Inner (Kronecker) product decomposition f1 ⊗ f2.
    Kron { f1: Partition, f2: Partition },
    /// Fractional-parentage table for each f1 with the attached shape.
    Cfp {
        #[arg(required = true)]
        f1: Vec<Partition>,
        /// Shape on the attached labels; defaults to [1] or [2] per --moved.
        #[arg(long)]
        attach: Option<Partition>,
        /// Number of attached particles.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        moved: Option<u8>,
        /// Expected total particle number, checked against the shapes.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner Clebsch-Gordan coefficients for f1 ⊗ f2 -> f.
    Innercg {
        f1: Partition,
        f2: Partition,
        f: Partition,
        #[arg(long, value_enum, default_value = "text")]
        format: GridFormat,
    },
    /// Character table of S_n.
    Chartab {
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: GridFormat,
    },
    /// Matrix elements between the f block of the bra table and the fp block
    /// of the ket table. One attached particle uses m1, two use m2.
    Matelem {
        bra_parent: Partition,
        f: Partition,
        ket_parent: Partition,
        fp: Partition,
        #[arg(long)]
        attach: Option<Partition>,
        /// Attached shape of the ket table; defaults to --attach.
        #[arg(long)]
        ket_attach: Option<Partition>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        moved: Option<u8>,
        /// JSON operator file with "m1" and/or "m2".
        #[arg(long)]
        spec: PathBuf,
    },
    /// Compares reference tables against computed ones; all bundled tables
    /// without --reference. Exits 1 unless every table passes.
    Verify {
        /// Reference JSON. A relative path that does not exist is looked up
        /// next to the corpus directory, so `data/<file>` names a bundled table.
        #[arg(long)]
        reference: Vec<PathBuf>,
    },
    /// Verifies the bundled corpus; tables flagged with a known issue do not
    /// affect the exit status.
    CorpusVerifyAll,
}

enum Failure {
    Usage(clap::Error),
    Compute(String),
}

impl From<sn_core::Error> for Failure {
    fn from(e: sn_core::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, msg))
}

/// Prints a usage error with the grammar line and exits 2; help and version
/// requests exit 0 as usual.
fn exit_usage(e: clap::Error) -> ! {
    if e.use_stderr() {
        let text = e.render().to_string();
        eprint!("{text}");
        if !text.contains("Usage:") {
            eprintln!("\n{}", Cli::command().render_usage());
        }
        std::process::exit(2);
    }
    e.exit()
}

fn attach_shape(attach: Option<Partition>, moved: Option<u8>) -> Result<Partition, Failure> {
    match (attach, moved) {
        (Some(a), Some(m)) if a.n() != m as usize => {
            Err(usage(ErrorKind::ArgumentConflict, format!("--attach {a} moves {} particles, not {m}", a.n())))
        }
        (Some(a), _) => Ok(a),
        (None, m) => Ok(Partition::row(m.unwrap_or(1) as usize)),
    }
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn grid(rows: &[Vec<String>], format: GridFormat) -> Vec<u8> {
    match format {
        GridFormat::Text => aligned(rows).into_bytes(),
        GridFormat::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

fn table_text(t: &CfpTable) -> String {
    let mut rows = vec![std::iter::once(String::new()).chain(column_heads(t)).collect::<Vec<_>>()];
    for (d, e) in t.rows.iter().zip(&t.entries) {
        rows.push(std::iter::once(d.to_string()).chain(e.iter().map(|x| x.to_string())).collect());
    }
    format!("{}\n{}", caption(t), aligned(&rows))
}

fn render_table(t: &CfpTable, format: OutFormat) -> Vec<u8> {
    match format {
        OutFormat::Text => table_text(t).into_bytes(),
        OutFormat::Json => export_table(t, Format::Json),
        OutFormat::Csv => export_table(t, Format::Csv),
        OutFormat::Latex => export_table(t, Format::Latex),
    }
}

fn me_text(m: &MeMatrix) -> String {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    aligned(&rows)
}

/// Runs `f` over the items on the configured pool and returns results in
/// input order.
fn ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

fn run(cli: Cli, out: &mut Vec<u8>) -> Result<bool, Failure> {
    let engine = Engine::shared();
    match cli.command {
        Command::Dim { f } => writeln!(out, "{}", dimension(&f)).unwrap(),
        Command::Lambda { f } => writeln!(out, "{}", lambda_eigenvalue(&f)).unwrap(),
        Command::Conj { f } => writeln!(out, "{}", conjugate(&f)).unwrap(),
        Command::Syt { f } => {
            for y in enumerate_syt(&f) {
                writeln!(out, "{y}").unwrap();
            }
        }
        Command::Outer { f1, f2 } => writeln!(out, "{}", outer_decompose(&f1, &f2)).unwrap(),
        Command::Kron { f1, f2 } => writeln!(out, "{}", kronecker_multiplicities(&f1, &f2)?).unwrap(),
        Command::Cfp { f1, attach, moved, n, format, out: path } => {
            let attach = attach_shape(attach, moved)?;
            if let Some(n) = n {
                if let Some(bad) = f1.iter().find(|f| f.n() + attach.n() != n) {
                    return Err(usage(
                        ErrorKind::ArgumentConflict,
                        format!("{bad} x {attach} is not a partition of {n}"),
                    ));
                }
            }
            let tasks: Vec<ReductionTask> = f1.into_iter().map(|f| ReductionTask::new(f, attach.clone())).collect();
            let rendered = ordered(&tasks, |t| engine.table(t).map(|t| render_table(&t, format)));
            let mut bytes = Vec::new();
            for r in rendered {
                bytes.extend(r?);
            }
            match path {
                Some(p) => {
                    std::fs::write(&p, bytes).map_err(|e| Failure::Compute(format!("E_IO: {}: {e}", p.display())))?
                }
                None => out.extend(bytes),
            }
        }
        Command::Innercg { f1, f2, f, format } => {
            let cg = inner_cg(engine, &f1, &f2, &f)?;
            let d2 = dimension(&f2) as usize;
            for (k, copy) in cg.copies.iter().enumerate() {
                if cg.copies.len() > 1 {
                    writeln!(out, "copy {}", k + 1).unwrap();
                }
                let mut rows = vec![std::iter::once(String::new())
                    .chain((1..=copy[0].len()).map(|c| format!("{f}_{c}")))
                    .collect()];
                for (r, e) in copy.iter().enumerate() {
                    let label = format!("{}x{}", r / d2 + 1, r % d2 + 1);
                    rows.push(std::iter::once(label).chain(e.iter().map(|x| x.to_string())).collect());
                }
                out.extend(grid(&rows, format));
            }
        }
        Command::Chartab { n, format } => {
            if !(1..=6).contains(&n) {
                return Err(usage(ErrorKind::ValueValidation, format!("n must be between 1 and 6, got {n}")));
            }
            let t = character_table(n);
            let mut rows: Vec<Vec<String>> = vec![std::iter::once(String::new())
                .chain(t.classes.iter().map(|c| c.cycle_type.to_string()))
                .collect()];
            for f in partitions(n) {
                rows.push(std::iter::once(f.to_string()).chain(t.rows[&f].iter().map(|x| x.to_string())).collect());
            }
            out.extend(grid(&rows, format));
        }
        Command::Matelem { bra_parent, f, ket_parent, fp, attach, ket_attach, moved, spec } => {
            let attach = attach_shape(attach, moved)?;
            let ket_attach = ket_attach.unwrap_or_else(|| attach.clone());
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Failure::Compute(format!("E_IO: {}: {e}", spec.display())))?;
            let (one, two) = load_specs(&text)?;
            let bra = engine.table(&ReductionTask::new(bra_parent, attach.clone()))?;
            let ket = engine.table(&ReductionTask::new(ket_parent, ket_attach))?;
            let m = if attach.n() == 1 {
                one_body_me(engine, &f, &fp, &bra, &ket, &one)?
            } else {
                two_body_me(&f, &fp, &bra, &ket, &two)?
            };
            out.extend(me_text(&m).into_bytes());
        }
        Command::Verify { reference } => {
            let files = if reference.is_empty() {
                corpus_files(&data_dir())?
            } else {
                reference.into_iter().map(resolve_reference).collect()
            };
            let reports = verify_all(engine, &files);
            let mut ok = true;
            for r in reports {
                let r = r?;
                ok &= r.passed();
                write!(out, "{r}").unwrap();
            }
            return Ok(ok);
        }
        Command::CorpusVerifyAll => {
            let files = corpus_files(&data_dir())?;
            let reports = verify_all(engine, &files);
            let width = files.iter().map(|f| file_label(f).len()).max().unwrap_or(0);
            let (mut passed, mut flagged, mut failed) = (0, 0, 0);
            let mut ok = true;
            for (file, r) in files.iter().zip(reports) {
                let r = r?;
                match (r.passed(), r.accepted()) {
                    (true, _) => passed += 1,
                    (false, true) => flagged += 1,
                    (false, false) => failed += 1,
                }
                ok &= r.accepted();
                let verdict = if r.passed() {
                    "PASS"
                } else if r.accepted() {
                    "FAIL (known issue)"
                } else {
                    "FAIL"
                };
                writeln!(out, "{:<width$}  {verdict}", file_label(file)).unwrap();
            }
            writeln!(out, "{passed} passed, {flagged} known issues, {failed} failed").unwrap();
            return Ok(ok);
        }
    }
    Ok(true)
}

fn resolve_reference(p: PathBuf) -> PathBuf {
    if p.is_relative() && !p.exists() {
        if let Some(base) = data_dir().parent() {
            let alt = base.join(&p);
            if alt.exists() {
                return alt;
            }
        }
    }
    p
}

fn file_label(p: &std::path::Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn verify_all(engine: &Engine, files: &[PathBuf]) -> Vec<sn_core::Result<CompareReport>> {
    ordered(files, |p| {
        let r = ReferenceTable::load(p)?;
        verify_reference(engine, &r)
    })
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| exit_usage(e));
    if let Some(k) = cli.jobs {
        if k == 0 {
            exit_usage(Cli::command().error(ErrorKind::ValueValidation, "--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().expect("thread pool configured once");
    }
    let mut out = Vec::new();
    let status = run(cli, &mut out);
    std::io::stdout().write_all(&out).ok();
    match status {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => exit_usage(e),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
