use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperkit::catalog::{builtin_finite, krasner, sign, SymbolicHyperfield};
use hyperkit::classify::{
    dd_criterion_stringent, dd_criterion_symbolic, decompose_wedge, extract_layering,
    extract_symbolic_layering, find_ordering, reduce_hyperring, valuation_of,
    valuation_of_symbolic, windowed_positive_cone, Valuation,
};
use hyperkit::constructions::{
    associated_semiring, closed_form_semiring, compare_with_windowed_closure, quotient,
    unit_subgroups, windowed_closure,
};
use hyperkit::isoenum::{
    enumerate_hyperfields, enumerate_hypergroups, enumerate_stringent_hyperrings, find_isomorphism,
    HyperfieldFilter, HypergroupFilter,
};
use hyperkit::kernel::{CheckReport, FiniteHyperStructure};
use hyperkit::ordered::{IndexElem, OrderedIndex, Window};
use hyperkit::series::{
    parse_series, quotient_sample_check, Coefficients, Frontier, LazySeries, Orientation,
    QuotientMode, RationalCoeffs, TableCoeffs,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{
    construct, parse_structure, parse_subset, resolve_builtin, serialize, Body, Kind, ParseError,
    Structure,
};
use crate::report::Report;

/// Sets generated before the associated semiring closure gives up.
const SEMIRING_CAP: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "hyperkit",
    version,
    about = "Check, classify and construct finite and layered hyperfields"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Sample window `a..b` for infinite structures; `a..b/d` samples
    /// multiples of `1/d`.
    #[arg(long, global = true, default_value = "-8..8", allow_hyphen_values = true, value_parser = parse_window)]
    window: Window,
    /// Depth for series comparisons.
    #[arg(long, global = true, default_value_t = 10)]
    depth: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (range, den) = match s.split_once('/') {
        Some((r, d)) => (
            r,
            d.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad denominator {d:?}"))?,
        ),
        None => (s, 1),
    };
    if den < 1 {
        return Err("denominator must be positive".into());
    }
    let w: Window = range.parse().map_err(|e: hyperkit::Error| e.to_string())?;
    Ok(w.with_denominator(den))
}

#[derive(Debug, Args)]
struct Input {
    /// Structure file.
    file: Option<PathBuf>,
    /// Catalog name instead of a file, e.g. `S`, `GF(4)`, `Zminusinf`,
    /// `trop(Z)`, `layer(GF(3),Q)`.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
}

impl Input {
    fn label(&self) -> String {
        match (&self.file, &self.builtin) {
            (Some(f), _) => f.display().to_string(),
            (None, Some(b)) => format!("builtin {b}"),
            (None, None) => String::new(),
        }
    }

    fn load(&self) -> Result<Structure, CliError> {
        match (&self.file, &self.builtin) {
            (Some(f), _) => load_file(f),
            (None, Some(b)) => Ok(resolve_builtin(b)?),
            (None, None) => Err(CliError::Usage(
                "give a structure file or --builtin NAME".into(),
            )),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the axiom checker for the structure's kind.
    Check(Input),
    /// Classify a stringent structure: layers, base, value group, double
    /// distributivity.
    Classify(Input),
    /// Split a stringent hypergroup into its wedge layers.
    Decompose(Input),
    /// Search for an isomorphism between two structures.
    Iso {
        /// Structure files or catalog names.
        #[arg(num_args = 2)]
        structures: Vec<String>,
    },
    /// Build a product, wedge, layering, Krasner quotient or associated
    /// semiring.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// Structure files or catalog names, then the group for `layer` or
        /// the subgroup `{a,b,..}` for `quotient`.
        #[arg(required = true)]
        args: Vec<String>,
        /// Write the result into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Krasner quotients of a finite field by its unit subgroups.
    Quotient {
        #[command(flatten)]
        input: Input,
        /// One subgroup `{a,b,..}` instead of all of them.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// The associated semiring and its axioms.
    Semiring(Input),
    /// Lazy series arithmetic.
    Series(SeriesArgs),
    /// Check a valuation onto the value group.
    Valuation(Input),
    /// Search for an ordering (positive cone).
    Ordering(Input),
    /// Enumerate structures of a given size up to isomorphism.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        stringent: bool,
        #[arg(long)]
        commutative: bool,
        #[arg(long, requires = "hyperfield")]
        dd: bool,
        #[arg(long, conflicts_with = "hyperring")]
        hyperfield: bool,
        /// Stringent hyperrings, each sorted into ring or hyperfield.
        #[arg(long)]
        hyperring: bool,
        /// Write one structure file per result into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConstructKind {
    Product,
    Wedge,
    Layer,
    Quotient,
    Semiring,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesOp {
    /// Inverse of one series, checked against `1`.
    Inv,
    /// Product of two series.
    Mul,
    /// Inverse identity and ring laws on seeded random series.
    Check,
    /// Quotient map check: classes of sums of random representatives of
    /// two layered elements lie in their hypersum.
    Sample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrientationArg {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Krasner,
    Sign,
    Field,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[arg(value_enum)]
    op: SeriesOp,
    /// Series such as `1 + 1*t^1`, or layered elements for `sample`. Put
    /// operands starting with `-` after `--`.
    operands: Vec<String>,
    /// Coefficient field: `GF(q)` or `Q`.
    #[arg(long, default_value = "GF(2)")]
    coeffs: String,
    /// Exponent group: `Z` or `Q`.
    #[arg(long, default_value = "Z")]
    group: String,
    #[arg(long, value_enum, default_value = "ascending")]
    orientation: OrientationArg,
    #[arg(long, value_enum, default_value = "krasner")]
    mode: ModeArg,
    /// Random trials (default 100 for `check`, 1000 for `sample`).
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] hyperkit::Error),
}

impl CliError {
    /// Errors caused by the invocation rather than by the structure.
    fn is_usage(&self) -> bool {
        match self {
            CliError::Core(e) => matches!(
                e,
                hyperkit::Error::NotFound(_) | hyperkit::Error::InvalidArgument(_)
            ),
            _ => true,
        }
    }
}

fn load_file(path: &Path) -> Result<Structure, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_structure(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// A file if one exists at `arg`, otherwise a catalog name.
fn load_arg(arg: &str) -> Result<Structure, CliError> {
    let p = Path::new(arg);
    if p.is_file() {
        load_file(p)
    } else {
        Ok(resolve_builtin(arg)?)
    }
}

fn need_finite(s: &Structure) -> Result<&FiniteHyperStructure, CliError> {
    s.as_finite().ok_or_else(|| {
        CliError::Usage(format!(
            "{} is infinite; this command needs a finite structure",
            s.name
        ))
    })
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Classify(_) => "classify",
            Command::Decompose(_) => "decompose",
            Command::Iso { .. } => "iso",
            Command::Construct { .. } => "construct",
            Command::Quotient { .. } => "quotient",
            Command::Semiring(_) => "semiring",
            Command::Series(_) => "series",
            Command::Valuation(_) => "valuation",
            Command::Ordering(_) => "ordering",
            Command::Enumerate { .. } => "enumerate",
        }
    }

    fn label(&self) -> String {
        match self {
            Command::Check(i)
            | Command::Classify(i)
            | Command::Decompose(i)
            | Command::Semiring(i)
            | Command::Valuation(i)
            | Command::Ordering(i)
            | Command::Quotient { input: i, .. } => i.label(),
            Command::Iso { structures } => structures.join(" "),
            Command::Construct { kind, args, .. } => {
                format!("{} {}", format!("{kind:?}").to_lowercase(), args.join(" "))
            }
            Command::Series(s) => format!(
                "{} {}",
                format!("{:?}", s.op).to_lowercase(),
                s.operands.join(" ; ")
            ),
            Command::Enumerate { size, .. } => format!("size {size}"),
        }
    }
}

/// Parse arguments, run one command and print its report. Returns the exit
/// status: 0 if every check passed, 1 if one failed, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut report = Report::new(cli.command.name(), cli.command.label());
    match dispatch(&cli, &mut report) {
        Ok(()) => {}
        Err(e) if e.is_usage() => {
            eprintln!("error: {e}");
            return 2;
        }
        Err(e) => report.fail(e.to_string()),
    }
    if cli.json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    if report.passed {
        0
    } else {
        1
    }
}

fn dispatch(cli: &Cli, r: &mut Report) -> Result<(), CliError> {
    match &cli.command {
        Command::Check(i) => check(&i.load()?, &cli.window, r),
        Command::Classify(i) => classify(&i.load()?, &cli.window, r),
        Command::Decompose(i) => decompose(need_finite(&i.load()?)?, r),
        Command::Iso { structures } => {
            iso(&load_arg(&structures[0])?, &load_arg(&structures[1])?, r)
        }
        Command::Construct { kind, args, out } => {
            construct_cmd(*kind, args, out.as_deref(), &cli.window, r)
        }
        Command::Quotient { input, subgroup } => {
            quotients(need_finite(&input.load()?)?, subgroup.as_deref(), r)
        }
        Command::Semiring(i) => semiring(&i.load()?, &cli.window, r),
        Command::Series(s) => series(s, cli, r),
        Command::Valuation(i) => valuation(&i.load()?, &cli.window, r),
        Command::Ordering(i) => ordering(&i.load()?, &cli.window, r),
        Command::Enumerate {
            size,
            stringent,
            commutative,
            dd,
            hyperfield,
            hyperring,
            out,
        } => {
            let what = if *hyperring {
                Enumerated::Hyperrings
            } else if *hyperfield {
                Enumerated::Hyperfields(HyperfieldFilter {
                    stringent: *stringent,
                    dd: *dd,
                })
            } else {
                Enumerated::Hypergroups(HypergroupFilter {
                    stringent: *stringent,
                    commutative: *commutative,
                })
            };
            enumerate(*size, what, out.as_deref(), r)
        }
    }
}

fn witness_names(t: &FiniteHyperStructure, w: &[usize]) -> String {
    let names: Vec<&str> = w.iter().map(|&x| t.name(x)).collect();
    format!("({})", names.join(", "))
}

fn record_checks(t: &FiniteHyperStructure, report: &CheckReport, r: &mut Report) {
    for v in &report.violations {
        r.fail(format!("{:?} at {}", v.axiom, witness_names(t, &v.witness)));
    }
}

fn set_names(t: &FiniteHyperStructure, s: hyperkit::kernel::ElemSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| t.name(x)).collect();
    format!("{{{}}}", names.join(", "))
}

fn stringency_fact(t: &FiniteHyperStructure, r: &mut Report) -> bool {
    match t.is_stringent() {
        (true, _) => {
            r.fact("stringent", "yes");
            true
        }
        (false, Some((a, b))) => {
            r.fact(
                "stringent",
                format!(
                    "no: {} + {} = {}",
                    t.name(a),
                    t.name(b),
                    set_names(t, t.add(a, b))
                ),
            );
            false
        }
        (false, None) => {
            r.fact("stringent", "no");
            false
        }
    }
}

fn dd_fact(t: &FiniteHyperStructure, r: &mut Report) -> Result<bool, CliError> {
    let (dd, w) = t.is_doubly_distributive()?;
    match w {
        Some(w) if !dd => r.fact(
            "doubly distributive",
            format!("no at {}", witness_names(t, &w)),
        ),
        _ => r.fact("doubly distributive", if dd { "yes" } else { "no" }),
    }
    Ok(dd)
}

fn check(s: &Structure, window: &Window, r: &mut Report) -> Result<(), CliError> {
    match &s.body {
        Body::Finite(t) => {
            r.fact("kind", s.kind.keyword());
            r.fact("elements", t.names().join(" "));
            let report = match s.kind {
                Kind::Hypergroup => t.check_hypergroup(),
                Kind::Hyperring => t.check_skew_hyperring()?,
                Kind::Hyperfield => t.check_hyperfield()?,
            };
            record_checks(t, &report, r);
            r.fact("commutative", t.is_commutative());
            stringency_fact(t, r);
            if report.passed && s.kind != Kind::Hypergroup {
                dd_fact(t, r)?;
            }
        }
        Body::Symbolic(f) => {
            r.window = Some(window.to_string());
            let wt = f.window_table(window)?;
            r.fact("kind", "layered hyperfield");
            r.fact("window elements", wt.table.n());
            r.fact("window truncated", wt.truncated);
            let report = wt.table.check_hypergroup();
            record_checks(&wt.table, &report, r);
            stringency_fact(&wt.table, r);
            r.fact("doubly distributive", dd_criterion_symbolic(f)?);
        }
    }
    Ok(())
}

fn classify(s: &Structure, window: &Window, r: &mut Report) -> Result<(), CliError> {
    let t = match &s.body {
        Body::Symbolic(f) => {
            r.window = Some(window.to_string());
            let (ex, _) = extract_symbolic_layering(f, window)?;
            r.fact("base", ex.base_name());
            r.fact("G", &ex.group);
            r.fact("dd", dd_criterion_symbolic(f)?);
            return Ok(());
        }
        Body::Finite(t) => t,
    };
    if !stringency_fact(t, r) {
        r.fail("classification applies to stringent structures only");
        return Ok(());
    }
    if s.kind == Kind::Hypergroup || !t.has_mul() {
        let d = decompose_wedge(t)?;
        r.decomposition = Some(d.tag_list().iter().map(ToString::to_string).collect());
        return Ok(());
    }
    if s.kind == Kind::Hyperring {
        let v = reduce_hyperring(t)?;
        r.fact("verdict", format!("{v:?}"));
        return Ok(());
    }
    let report = t.check_hyperfield()?;
    if !report.passed {
        record_checks(t, &report, r);
        return Ok(());
    }
    let ex = extract_layering(t)?;
    r.fact("base", ex.base_name());
    r.fact("G", &ex.group);
    let dd = dd_fact(t, r)?;
    r.fact("dd", dd_criterion_stringent(t)?);
    debug_assert_eq!(dd, dd_criterion_stringent(t)?);
    let d = decompose_wedge(&t.additive())?;
    r.decomposition = Some(d.tag_list().iter().map(ToString::to_string).collect());
    Ok(())
}

fn decompose(t: &FiniteHyperStructure, r: &mut Report) -> Result<(), CliError> {
    if !stringency_fact(t, r) {
        r.fail("only stringent hypergroups decompose into wedges");
        return Ok(());
    }
    let d = decompose_wedge(&t.additive())?;
    let classes: Vec<String> = d.classes.iter().map(|&c| set_names(t, c)).collect();
    r.fact("classes", classes.join(" < "));
    r.fact(
        "reconstruction",
        "wedge of the layers is isomorphic to the input",
    );
    r.decomposition = Some(d.tag_list().iter().map(ToString::to_string).collect());
    Ok(())
}

fn iso(a: &Structure, b: &Structure, r: &mut Report) -> Result<(), CliError> {
    let (ta, tb) = (need_finite(a)?, need_finite(b)?);
    match find_isomorphism(ta, tb) {
        Some(m) => {
            let pairs: Vec<String> = m
                .iter()
                .enumerate()
                .map(|(x, &y)| format!("{}->{}", ta.name(x), tb.name(y)))
                .collect();
            r.fact("isomorphism", pairs.join(" "));
        }
        None => r.fail(format!("{} and {} are not isomorphic", a.name, b.name)),
    }
    Ok(())
}

fn write_structure(dir: &Path, s: &Structure) -> Result<PathBuf, CliError> {
    let t = need_finite(s)?;
    let io = |source| CliError::Io {
        path: dir.display().to_string(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let file: String = s
        .name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let path = dir.join(format!("{file}.hs"));
    fs::write(&path, serialize(s.kind, &s.name, t)).map_err(io)?;
    Ok(path)
}

fn construct_cmd(
    kind: ConstructKind,
    args: &[String],
    out: Option<&Path>,
    window: &Window,
    r: &mut Report,
) -> Result<(), CliError> {
    let (name, split) = match kind {
        ConstructKind::Product => ("product", args.len()),
        ConstructKind::Wedge => ("wedge", args.len()),
        ConstructKind::Layer => ("layer", 1.min(args.len())),
        ConstructKind::Quotient => ("quotient", 1.min(args.len())),
        ConstructKind::Semiring => {
            let [a] = args else {
                return Err(CliError::Usage("semiring takes one structure".into()));
            };
            return semiring(&load_arg(a)?, window, r);
        }
    };
    let operands = args[..split]
        .iter()
        .map(|a| load_arg(a))
        .collect::<Result<Vec<_>, _>>()?;
    let s = construct(name, &operands, &args[split..])?;
    r.fact("name", &s.name);
    match &s.body {
        Body::Finite(t) => {
            let report = match s.kind {
                Kind::Hypergroup => t.check_hypergroup(),
                Kind::Hyperring => t.check_skew_hyperring()?,
                Kind::Hyperfield => t.check_hyperfield()?,
            };
            record_checks(t, &report, r);
            if let Some(dir) = out {
                r.fact("written", write_structure(dir, &s)?.display());
            }
            r.fact("structure", serialize(s.kind, &s.name, t).trim_end());
        }
        Body::Symbolic(f) => {
            r.window = Some(window.to_string());
            let (ex, wt) = extract_symbolic_layering(f, window)?;
            r.fact("base", ex.base_name());
            r.fact("G", &ex.group);
            r.fact("window elements", wt.table.n());
            r.fact("dd", dd_criterion_symbolic(f)?);
        }
    }
    Ok(())
}

fn quotients(
    k: &FiniteHyperStructure,
    subgroup: Option<&str>,
    r: &mut Report,
) -> Result<(), CliError> {
    let subgroups = match subgroup {
        Some(text) => vec![parse_subset(k, text)?],
        None => unit_subgroups(k)?,
    };
    for u in subgroups {
        let q = quotient(k, u)?;
        let report = q.check_hyperfield()?;
        let mut what = format!("{} elements", q.n());
        if let Some(m) = find_isomorphism(&q, &krasner()) {
            what += &format!(", isomorphic to K via {}", iso_text(&q, &krasner(), &m));
        } else if let Some(m) = find_isomorphism(&q, &sign()) {
            what += &format!(", isomorphic to S via {}", iso_text(&q, &sign(), &m));
        } else if q.is_single_valued() {
            what += ", a field";
        }
        r.fact(&format!("quotient by {}", set_names(k, u)), what);
        for v in &report.violations {
            r.fail(format!(
                "quotient by {}: {:?} at {}",
                set_names(k, u),
                v.axiom,
                witness_names(&q, &v.witness)
            ));
        }
    }
    Ok(())
}

fn iso_text(a: &FiniteHyperStructure, b: &FiniteHyperStructure, m: &[usize]) -> String {
    let pairs: Vec<String> = m
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{}->{}", a.name(x), b.name(y)))
        .collect();
    pairs.join(" ")
}

fn semiring(s: &Structure, window: &Window, r: &mut Report) -> Result<(), CliError> {
    match &s.body {
        Body::Finite(t) => {
            let sr = associated_semiring(t, SEMIRING_CAP)?;
            r.fact("size", sr.len());
            let names: Vec<String> = (0..sr.len()).map(|i| sr.element_name(t, i)).collect();
            r.fact("elements", names.join(" "));
            for v in &sr.check_axioms().violations {
                let w: Vec<&str> = v.witness.iter().map(|&i| names[i].as_str()).collect();
                r.fail(format!("{:?} at ({})", v.axiom, w.join(", ")));
            }
        }
        Body::Symbolic(f) => {
            r.window = Some(window.to_string());
            let cf = closed_form_semiring(f)?;
            r.fact("closed form", cf.kind);
            r.fact("windowed closure size", windowed_closure(f, window)?.len());
            r.fail_all(compare_with_windowed_closure(&cf, window)?);
        }
    }
    Ok(())
}

fn valuation_facts(v: &Valuation, r: &mut Report) {
    r.fact("kernel", &v.kernel_name);
    r.fact("pairs checked", v.pairs_checked);
    if v.values.len() <= 16 {
        let vals: Vec<String> = v.values.iter().map(|(x, g)| format!("{x}:{g}")).collect();
        r.fact("values", vals.join(" "));
    }
    r.fail_all(v.failures.iter().cloned());
}

fn valuation(s: &Structure, window: &Window, r: &mut Report) -> Result<(), CliError> {
    let v = match &s.body {
        Body::Finite(t) => valuation_of(t)?,
        Body::Symbolic(f) => {
            r.window = Some(window.to_string());
            valuation_of_symbolic(f, window)?
        }
    };
    valuation_facts(&v, r);
    Ok(())
}

fn ordering(s: &Structure, window: &Window, r: &mut Report) -> Result<(), CliError> {
    match &s.body {
        Body::Finite(t) => {
            let o = find_ordering(t)?;
            r.fact("real", o.real);
            match o.ordering {
                Some(p) => {
                    let names: Vec<&str> = p.iter().map(|&x| t.name(x)).collect();
                    r.fact("ordering", format!("{{{}}}", names.join(", ")));
                }
                None => r.fact("ordering", "none"),
            }
        }
        Body::Symbolic(f) => {
            r.window = Some(window.to_string());
            let c = windowed_positive_cone(f, window)?;
            r.fact("cone", c.cone.join(" "));
            r.fact("one element per layer", c.bijective);
            r.fact("-1 outside", c.minus_one_outside);
            if !c.passed() {
                r.fail("the cone does not split the units as S x G");
            }
        }
    }
    Ok(())
}

enum Enumerated {
    Hypergroups(HypergroupFilter),
    Hyperfields(HyperfieldFilter),
    Hyperrings,
}

fn enumerate(
    size: usize,
    what: Enumerated,
    out: Option<&Path>,
    r: &mut Report,
) -> Result<(), CliError> {
    let (kind, found) = match what {
        Enumerated::Hypergroups(f) => (Kind::Hypergroup, enumerate_hypergroups(size, f)?),
        Enumerated::Hyperfields(f) => (Kind::Hyperfield, enumerate_hyperfields(size, f)?),
        Enumerated::Hyperrings => (Kind::Hyperring, enumerate_stringent_hyperrings(size)?),
    };
    r.fact("kind", kind.keyword());
    r.fact("count", found.len());
    for (i, c) in found.iter().enumerate() {
        let t = c.structure();
        let s = Structure::finite(kind, format!("{}{size}_{i}", kind.keyword()), t.clone());
        if kind == Kind::Hyperring {
            match reduce_hyperring(t) {
                Ok(v) => r.fact(&s.name, format!("{v:?}")),
                Err(e) => r.fail(format!(
                    "{}: {e}\n{}",
                    s.name,
                    serialize(kind, &s.name, t).trim_end()
                )),
            }
        }
        if let Some(dir) = out {
            write_structure(dir, &s)?;
        }
    }
    if let Some(dir) = out {
        r.fact("written to", dir.display());
    }
    Ok(())
}

fn series(a: &SeriesArgs, cli: &Cli, r: &mut Report) -> Result<(), CliError> {
    r.depth = Some(cli.depth);
    let group: OrderedIndex = a.group.parse()?;
    if a.coeffs == "Q" {
        series_over(Arc::new(RationalCoeffs), group, a, cli, r)
    } else {
        series_over(
            Arc::new(TableCoeffs::new(builtin_finite(&a.coeffs)?)?),
            group,
            a,
            cli,
            r,
        )
    }
}

fn series_over<R: Coefficients>(
    ring: Arc<R>,
    group: OrderedIndex,
    a: &SeriesArgs,
    cli: &Cli,
    r: &mut Report,
) -> Result<(), CliError> {
    let orientation = match a.orientation {
        OrientationArg::Ascending => Orientation::Ascending,
        OrientationArg::Descending => Orientation::Descending,
    };
    let depth = cli.depth;
    let parse = |text: &str| parse_series(Arc::clone(&ring), group.clone(), orientation, text);
    let operands = |k: usize| {
        if a.operands.len() == k {
            Ok(())
        } else {
            Err(CliError::Usage(
                format!("{:?} takes {k} operand(s)", a.op).to_lowercase(),
            ))
        }
    };
    match a.op {
        SeriesOp::Inv => {
            operands(1)?;
            let p = parse(&a.operands[0])?;
            let q = p.inv()?;
            r.fact("inverse", q.display(depth));
            let one = LazySeries::one(Arc::clone(&ring), group.clone(), orientation)?;
            if !p.mul(&q)?.eq_depth(&one, depth)? {
                r.fail(format!("p * inv(p) differs from 1 within depth {depth}"));
            }
        }
        SeriesOp::Mul => {
            operands(2)?;
            let p = parse(&a.operands[0])?;
            let q = parse(&a.operands[1])?;
            r.fact("product", p.mul(&q)?.display(depth));
        }
        SeriesOp::Check => {
            operands(0)?;
            r.seed = Some(cli.seed);
            let trials = a.trials.unwrap_or(100);
            let bad = random_series_laws(&ring, &group, orientation, trials, depth, cli.seed)?;
            r.fact("trials", trials);
            r.fail_all(bad);
        }
        SeriesOp::Sample => {
            operands(2)?;
            r.seed = Some(cli.seed);
            let mode = match a.mode {
                ModeArg::Krasner => QuotientMode::Krasner,
                ModeArg::Sign => QuotientMode::Sign,
                ModeArg::Field => QuotientMode::Field,
            };
            let target: SymbolicHyperfield = mode.target(ring.as_ref(), &group)?;
            let x = target.parse_elem(&a.operands[0])?;
            let y = target.parse_elem(&a.operands[1])?;
            let trials = a.trials.unwrap_or(1000);
            let rep = quotient_sample_check(
                Arc::clone(&ring),
                &group,
                mode,
                &x,
                &y,
                trials,
                depth,
                cli.seed,
            )?;
            r.fact("target", target.name());
            r.fact("expected", &rep.expected);
            r.fact("samples", rep.samples);
            r.fact("covered", rep.covered.join(" "));
            r.fact("below-window sums", rep.downset_hits);
            r.fact("inconclusive", rep.inconclusive);
            r.fail_all(
                rep.outside
                    .iter()
                    .map(|c| format!("class {c} lies outside the hypersum")),
            );
            if !rep.passed() && rep.outside.is_empty() {
                r.fail("the expected singleton classes were not all hit");
            }
        }
    }
    Ok(())
}

fn unit_step(group: &OrderedIndex) -> Result<IndexElem, CliError> {
    Ok(match group {
        OrderedIndex::Integers => IndexElem::Int(1),
        OrderedIndex::Rationals => IndexElem::rat(1, 2),
        other => {
            return Err(CliError::Usage(format!(
                "series over {other} are not supported"
            )))
        }
    })
}

/// A seeded random series with nonzero leading coefficient and leading
/// exponent in `-3..=3`.
pub(crate) fn random_unit<R: Coefficients>(
    ring: &Arc<R>,
    group: &OrderedIndex,
    orientation: Orientation,
    seed: u64,
) -> hyperkit::Result<LazySeries<R>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lead = loop {
        let c = ring.random(&mut rng);
        if !ring.is_zero(&c) {
            break c;
        }
    };
    let shift: i64 = rng.gen_range(-3..=3);
    let base = match group {
        OrderedIndex::Rationals => IndexElem::rat(shift, 1),
        _ => IndexElem::Int(shift),
    };
    let step = match group {
        OrderedIndex::Rationals => IndexElem::rat(1, 2),
        _ => IndexElem::Int(1),
    };
    LazySeries::random(
        Arc::clone(ring),
        group.clone(),
        orientation,
        Frontier { base, step },
        lead,
        seed,
    )
}

fn random_series_laws<R: Coefficients>(
    ring: &Arc<R>,
    group: &OrderedIndex,
    orientation: Orientation,
    trials: usize,
    depth: u64,
    seed: u64,
) -> Result<Vec<String>, CliError> {
    unit_step(group)?;
    let one = LazySeries::one(Arc::clone(ring), group.clone(), orientation)?;
    let mut bad = Vec::new();
    for i in 0..trials as u64 {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(3 * i);
        let p = random_unit(ring, group, orientation, s)?;
        let q = random_unit(ring, group, orientation, s + 1)?;
        let w = random_unit(ring, group, orientation, s + 2)?;
        if !p.mul(&p.inv()?)?.eq_depth(&one, depth)? {
            bad.push(format!("trial {i}: p * inv(p) is not 1"));
        }
        let checks = [
            (
                "(p*q)*w = p*(q*w)",
                p.mul(&q)?.mul(&w)?,
                p.mul(&q.mul(&w)?)?,
            ),
            (
                "(p+q)*w = p*w + q*w",
                p.add(&q)?.mul(&w)?,
                p.mul(&w)?.add(&q.mul(&w)?)?,
            ),
            (
                "p*(q+w) = p*q + p*w",
                p.mul(&q.add(&w)?)?,
                p.mul(&q)?.add(&p.mul(&w)?)?,
            ),
            (
                "(p+q)+w = p+(q+w)",
                p.add(&q)?.add(&w)?,
                p.add(&q.add(&w)?)?,
            ),
            ("p+q = q+p", p.add(&q)?, q.add(&p)?),
        ];
        for (law, lhs, rhs) in checks {
            if !lhs.eq_depth(&rhs, depth)? {
                bad.push(format!("trial {i}: {law} fails"));
            }
        }
        if !ring.has_action() && !p.mul(&q)?.eq_depth(&q.mul(&p)?, depth)? {
            bad.push(format!("trial {i}: p*q = q*p fails"));
        }
    }
    Ok(bad)
}
