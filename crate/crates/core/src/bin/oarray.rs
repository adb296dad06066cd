use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oarray::bounds::{self, BoundReport};
use oarray::cyclic::{develop, read_start, search_starting_rows, write_start};
use oarray::deletion::{delete_columns, m_optimal_after_deletion, max_safe_deletions};
use oarray::designs::{read_oa, write_oa, write_oa_header, write_oa_row, OaRows};
use oarray::enumerate::{self, Enumeration, PartitionSpec};
use oarray::hadamard_bibd::basic_binary_oa;
use oarray::verifier::verify_strength2;
use oarray::{
    Development, Error, OrthogonalArray, Quadruple, StartingRowSet, StreamingVerifier,
    VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "oarray",
    version,
    about = "Orthogonal arrays with a maximally repeated row"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bounds on the repeated-row multiplicity m
    Bounds {
        #[arg(short)]
        k: u64,
        #[arg(short)]
        n: u64,
        #[arg(short = 'l', long = "lambda")]
        lambda: u64,
    },
    /// Build an array and verify it before writing
    Construct(ConstructArgs),
    /// Check the strength-2 property and classify an OA file
    Verify {
        input: PathBuf,
        /// Count pairs while reading instead of loading the array
        #[arg(long)]
        stream: bool,
    },
    /// Backtracking search for starting rows of the basic quadruple at (k, n)
    Search {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        limit: usize,
        /// Plain rotation with m(n-1) base rows instead of modular development
        #[arg(long)]
        rotation: bool,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Delete columns from a verified OA
    Delete {
        input: PathBuf,
        #[arg(short)]
        s: usize,
        /// Columns to delete (default: the last s)
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<usize>>,
        #[arg(short)]
        o: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cyclic,
    Hadamard,
    Enumerate,
    Partition,
    Multipartition,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(short)]
    t: Option<usize>,
    #[arg(short)]
    k: Option<usize>,
    #[arg(short)]
    n: Option<usize>,
    /// Output file, or file prefix for partitions
    #[arg(short)]
    o: Option<PathBuf>,
    /// START file for the cyclic method
    #[arg(long)]
    start: Option<PathBuf>,
    /// Block to derive at in the Hadamard pipeline
    #[arg(long, default_value_t = 0)]
    block_index: usize,
    /// Column class sizes for multipartition, e.g. 8,8
    #[arg(long, value_delimiter = ',')]
    class_sizes: Option<Vec<usize>>,
    /// Verify rows as they are generated instead of materializing
    #[arg(long)]
    stream: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::Overflow(_) => 2,
            Error::Verification(_) => 3,
            Error::Unreachable { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn infeasible(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn not_an_array(report: &VerificationReport) -> Failure {
    Failure {
        code: 3,
        message: report.to_string(),
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Bounds { k, n, lambda } => cmd_bounds(k, n, lambda),
        Command::Construct(args) => cmd_construct(args),
        Command::Verify { input, stream } => cmd_verify(&input, stream),
        Command::Search {
            k,
            n,
            limit,
            rotation,
            o,
        } => cmd_search(k, n, limit, rotation, o.as_deref()),
        Command::Delete {
            input,
            s,
            columns,
            o,
        } => cmd_delete(&input, s, columns.as_deref(), &o),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_bounds(k: u64, n: u64, lambda: u64) -> Outcome {
    let report = BoundReport::new(k, n, lambda)?;
    let mut out = io::stdout().lock();
    writeln!(out, "k={k} n={n} lambda={lambda}")?;
    writeln!(out, "rao bound: m <= {}", report.rao_bound)?;
    writeln!(out, "floor bound: {}", report.floor_bound)?;
    match report.best_refined {
        Some((alpha, b)) => writeln!(out, "best refined bound: {b} (alpha={alpha})")?,
        None => writeln!(out, "best refined bound: none")?,
    }
    let denom = bounds::rao_denominator(k, n);
    if bounds::abar(k, n).is_none() {
        writeln!(out, "optimal impossible: k ≢ 1 mod n")?;
    } else if !(lambda * n * n).is_multiple_of(denom) {
        writeln!(
            out,
            "optimal impossible: lambda*n^2 not divisible by k(n-1)+1 = {denom}"
        )?;
    } else {
        let q = Quadruple::new(lambda * n * n / denom, lambda, k, n);
        writeln!(out, "feasible: m={}", q.m)?;
        writeln!(out, "basic: {}", if q.is_basic() { "yes" } else { "no" })?;
        if let Ok(s) = max_safe_deletions(k, n, lambda) {
            writeln!(out, "safe deletions: {s}")?;
        }
    }
    match bounds::basic_quadruple(k, n) {
        Some(q) => writeln!(out, "basic quadruple: {q}")?,
        None => writeln!(out, "basic quadruple: none")?,
    }
    Ok(())
}

fn need<T>(value: Option<T>, flag: &str, method: &str) -> std::result::Result<T, Failure> {
    value.ok_or_else(|| usage(format!("--method {method} needs {flag}")))
}

fn print_report(label: &str, report: &VerificationReport) {
    if label.is_empty() {
        println!("{report}");
    } else {
        println!("{label}: {report}");
    }
}

/// Writes `a` through a temporary file, renaming only once complete.
fn write_array(a: &OrthogonalArray, path: &Path, comment: Option<&str>) -> Outcome {
    let tmp = temp_path(path);
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        match comment {
            Some(c) => {
                write_oa_header(&mut w, a.k(), a.n(), a.lambda())?;
                writeln!(w, "# {c}")?;
                for row in a.rows() {
                    write_oa_row(&mut w, row)?;
                }
            }
            None => write_oa(a, &mut w)?,
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

fn part_path(prefix: &Path, index: usize) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(format!(".{index}.txt"));
    PathBuf::from(name)
}

fn class_comment(spec: &PartitionSpec, index: usize) -> String {
    let label: Vec<String> = spec.part_label(index).iter().map(u8::to_string).collect();
    format!("class {}", label.join(","))
}

fn verified(a: &OrthogonalArray) -> std::result::Result<VerificationReport, Failure> {
    let report = verify_strength2(a);
    if report.is_oa {
        Ok(report)
    } else {
        Err(not_an_array(&report))
    }
}

fn cmd_construct(args: ConstructArgs) -> Outcome {
    match args.method {
        Method::Cyclic => {
            let s = match (&args.start, args.k, args.n) {
                (Some(path), _, _) => read_start(BufReader::new(File::open(path)?))?,
                (None, Some(k), Some(n)) => find_starting_sets(k, n, Development::Modular, 1)?
                    .1
                    .remove(0),
                _ => return Err(usage("--method cyclic needs --start or -k and -n")),
            };
            emit_single(develop(&s)?, args.o.as_deref(), args.stream)
        }
        Method::Hadamard => {
            let t = need(args.t, "-t", "hadamard")?;
            emit_single(
                basic_binary_oa(t, args.block_index)?,
                args.o.as_deref(),
                args.stream,
            )
        }
        Method::Enumerate => {
            let k = need(args.k, "-k", "enumerate")?;
            let n = need(args.n, "-n", "enumerate")?;
            if args.stream {
                stream_enumeration(&Enumeration::new(k, n)?, args.o.as_deref())
            } else {
                emit_single(enumerate::enumerate_oa(k, n)?, args.o.as_deref(), false)
            }
        }
        Method::Partition | Method::Multipartition => {
            let multi = matches!(args.method, Method::Multipartition);
            let name = if multi { "multipartition" } else { "partition" };
            let k = need(args.k, "-k", name)?;
            let n = need(args.n, "-n", name)?;
            let spec = if multi {
                PartitionSpec::new(k, n, args.class_sizes.clone())?
            } else {
                PartitionSpec::single(k, n)?
            };
            if args.stream {
                stream_partition(&spec, args.o.as_deref())
            } else {
                let prefix = need(args.o.as_deref(), "-o", name)?;
                let parts = if multi {
                    enumerate::multi_partition_oa(k, n, args.class_sizes)?
                } else {
                    enumerate::partition_oa(k, n)?
                };
                let mut reports = Vec::with_capacity(parts.len());
                for part in &parts {
                    reports.push(verified(part)?);
                }
                for (i, (part, report)) in parts.iter().zip(&reports).enumerate() {
                    write_array(part, &part_path(prefix, i), Some(&class_comment(&spec, i)))?;
                    print_report(&format!("part {i} ({})", class_comment(&spec, i)), report);
                }
                Ok(())
            }
        }
    }
}

fn emit_single(a: OrthogonalArray, out: Option<&Path>, stream: bool) -> Outcome {
    let report = verified(&a)?;
    match out {
        Some(path) => write_array(&a, path, None)?,
        None if stream => {}
        None => {
            return Err(usage(
                "an output path -o is required (or --stream to only verify)",
            ))
        }
    }
    print_report("", &report);
    Ok(())
}

fn basic_for(k: usize, n: usize) -> std::result::Result<Quadruple, Failure> {
    bounds::basic_quadruple(k as u64, n as u64).ok_or_else(|| {
        if bounds::abar(k as u64, n as u64).is_none() {
            infeasible(format!("infeasible: {k} ≢ 1 mod {n}"))
        } else {
            infeasible(format!(
                "no basic quadruple with m > 1 for (k, n) = ({k}, {n})"
            ))
        }
    })
}

fn find_starting_sets(
    k: usize,
    n: usize,
    development: Development,
    limit: usize,
) -> std::result::Result<(Quadruple, Vec<StartingRowSet>), Failure> {
    let q = basic_for(k, n)?;
    let found = search_starting_rows(development, k, n, q.m as usize, q.lambda, limit)?;
    if found.is_empty() {
        return Err(Failure {
            code: 4,
            message: format!("search exhausted: no starting rows for {q}"),
        });
    }
    Ok((q, found))
}

/// Row sink that verifies and optionally writes to a temporary file.
struct Sink {
    verifier: StreamingVerifier,
    writer: Option<(BufWriter<File>, PathBuf, PathBuf)>,
    error: Option<io::Error>,
}

impl Sink {
    fn new(
        k: usize,
        n: usize,
        lambda: u64,
        path: Option<PathBuf>,
        comment: Option<String>,
    ) -> std::result::Result<Self, Failure> {
        let writer = match path {
            Some(path) => {
                let tmp = temp_path(&path);
                let mut w = BufWriter::new(File::create(&tmp)?);
                write_oa_header(&mut w, k, n, lambda)?;
                if let Some(c) = comment {
                    writeln!(w, "# {c}")?;
                }
                Some((w, tmp, path))
            }
            None => None,
        };
        Ok(Self {
            verifier: StreamingVerifier::new(k, n)?,
            writer,
            error: None,
        })
    }

    fn push(&mut self, row: &[u8]) {
        self.verifier.push(row);
        if let (Some((w, _, _)), None) = (&mut self.writer, &self.error) {
            if let Err(e) = write_oa_row(w, row) {
                self.error = Some(e);
            }
        }
    }

    fn finish(self, lambda: u64) -> std::result::Result<VerificationReport, Failure> {
        let report = self.verifier.finish(lambda);
        if let Some(e) = self.error {
            return Err(e.into());
        }
        if let Some((mut w, tmp, path)) = self.writer {
            w.flush()?;
            drop(w);
            if report.is_oa {
                fs::rename(&tmp, &path)?;
            } else {
                let _ = fs::remove_file(&tmp);
            }
        }
        if report.is_oa {
            Ok(report)
        } else {
            Err(not_an_array(&report))
        }
    }
}

fn stream_enumeration(e: &Enumeration, out: Option<&Path>) -> Outcome {
    let mut sink = Sink::new(e.k, e.n, e.lambda, out.map(Path::to_path_buf), None)?;
    enumerate::visit_rows(e, |row| sink.push(row));
    print_report("", &sink.finish(e.lambda)?);
    Ok(())
}

fn stream_partition(spec: &PartitionSpec, prefix: Option<&Path>) -> Outcome {
    let e = spec.enumeration();
    let mut sinks = Vec::with_capacity(spec.parts());
    for i in 0..spec.parts() {
        let path = prefix.map(|p| part_path(p, i));
        sinks.push(Sink::new(
            e.k,
            e.n,
            spec.part_lambda(),
            path,
            Some(class_comment(spec, i)),
        )?);
    }
    enumerate::visit_parts(spec, |part, row| sinks[part].push(row));
    let mut failure = None;
    for (i, sink) in sinks.into_iter().enumerate() {
        match sink.finish(spec.part_lambda()) {
            Ok(report) => print_report(&format!("part {i} ({})", class_comment(spec, i)), &report),
            Err(f) => {
                eprintln!("part {i}: {}", f.message);
                failure.get_or_insert(f);
            }
        }
    }
    failure.map_or(Ok(()), Err)
}

fn cmd_verify(input: &Path, stream: bool) -> Outcome {
    let file = BufReader::new(File::open(input)?);
    let report = if stream {
        let mut rows = OaRows::new(file)?;
        let header = rows.header();
        let mut v = StreamingVerifier::new(header.k, header.n)?;
        while let Some(row) = rows.next_row()? {
            v.push(row);
        }
        v.finish(header.lambda)
    } else {
        verify_strength2(&read_oa(file)?)
    };
    println!("{report}");
    if report.is_oa {
        let hist: Vec<String> = report
            .zero_count_histogram
            .iter()
            .map(|(z, c)| format!("{z}:{c}"))
            .collect();
        println!("zero counts: {}", hist.join(" "));
        Ok(())
    } else {
        Err(Failure {
            code: 3,
            message: "not an orthogonal array".into(),
        })
    }
}

fn cmd_search(k: usize, n: usize, limit: usize, rotation: bool, out: Option<&Path>) -> Outcome {
    let development = if rotation {
        Development::Rotation
    } else {
        Development::Modular
    };
    if limit == 0 {
        return Err(usage("--limit must be at least 1"));
    }
    let (q, found) = find_starting_sets(k, n, development, limit)?;
    let mut reports = Vec::with_capacity(found.len());
    for s in &found {
        reports.push(verified(&develop(s)?)?);
    }
    match out {
        Some(path) => {
            let tmp = temp_path(path);
            {
                let mut w = BufWriter::new(File::create(&tmp)?);
                write_start(&found[0], &mut w)?;
                w.flush()?;
            }
            fs::rename(&tmp, path)?;
        }
        None => write_start(&found[0], io::stdout().lock())?,
    }
    let mut log: Box<dyn Write> = if out.is_some() {
        Box::new(io::stdout().lock())
    } else {
        Box::new(io::stderr().lock())
    };
    writeln!(log, "found {} starting-row set(s) for {q}", found.len())?;
    for (i, report) in reports.iter().enumerate() {
        writeln!(log, "set {i}: {report}")?;
    }
    Ok(())
}

fn cmd_delete(input: &Path, s: usize, columns: Option<&[usize]>, out: &Path) -> Outcome {
    let a = read_oa(BufReader::new(File::open(input)?))?;
    let before = verified(&a)?;
    if s < 1 || s + 2 > a.k() {
        return Err(usage(format!(
            "-s must lie in 1..={}",
            a.k().saturating_sub(2)
        )));
    }
    let d = delete_columns(&a, s, columns)?;
    let report = verified(&d)?;
    write_array(&d, out, None)?;
    println!("{report}");
    println!(
        "m-optimal: {}",
        if report.classification.m_optimal {
            "yes"
        } else {
            "no"
        }
    );
    if before.classification.optimal {
        let (k, n, l) = (a.k() as u64, a.n() as u64, a.lambda());
        println!(
            "predicted m-optimal: {}",
            if m_optimal_after_deletion(k, n, l, s as u64) {
                "yes"
            } else {
                "no"
            }
        );
    }
    Ok(())
}
