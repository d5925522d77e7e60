//! Command-line front end.
//!
//! Exit codes: 0 affirmative, 1 negative or counterexample found, 2 input
//! error. JSON output has sorted keys; identical invocations print
//! identical bytes.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semitop_core::group::{Equivalence, LoopTable, Verdict, Word};
use semitop_core::homotopy::check_certificate;
use semitop_core::interval::RatSet;
use semitop_core::maps::{classify, classify_at, classify_via_closed, Class, ContinuityReport, PropertyQuery, SearchOutcome, SearchPlan, Witness};
use semitop_core::paths::{canonical_signature, compose_paths, format_signature, inverse_path, path_connectivity, Mode, StepPath};
use semitop_core::slices::{falsify_joint, verify_slices, JointOutcome};
use semitop_core::{FiniteSpace, Subset};

use crate::formats::{
    load_bundle, load_map, load_path, load_path_in, load_slices, load_space, load_table, map_to_file, path_to_file,
    read_json, space_to_file, table_from_file, table_to_file, InputError, TableFile,
};
use crate::search::run_parallel;
use crate::sexpr::{export_certificate, parse_certificate};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "semitop", version, about = "Semi-open sets, so-i-continuity, certified so-i-homotopy and loop groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the semi-open (or semi-closed) sets of a space in canonical order.
    SoFamily {
        space: PathBuf,
        #[arg(long)]
        semi_closed: bool,
    },
    /// Test one subset of a space, or a union of intervals in [0,1].
    SemiOpen(SemiOpenArgs),
    /// Decide continuity and so-1/2/3-continuity of a map.
    Classify {
        #[arg(long)]
        map: PathBuf,
        /// Pointwise verdicts at this domain point instead.
        #[arg(long)]
        point: Option<String>,
        /// Use preimages of closed and semi-closed sets.
        #[arg(long)]
        via_closed: bool,
    },
    /// Exhaustive counterexample search over small spaces.
    Search {
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write witness map or space files into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a step path is so-i-continuous.
    CheckPath {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        mode: u8,
    },
    /// Concatenate two step paths.
    Compose { first: PathBuf, second: PathBuf },
    /// Reverse a step path.
    Invert { path: PathBuf },
    /// Decide so-i path connectivity between two points, with a witness.
    Connect {
        space: PathBuf,
        from: String,
        to: String,
        #[arg(long, default_value_t = 1)]
        mode: u8,
    },
    /// Homotopy certificates.
    #[command(subcommand)]
    Cert(CertCommand),
    /// Slice families of homotopies.
    #[command(subcommand)]
    Slices(SlicesCommand),
    /// Loop tables and words.
    #[command(subcommand)]
    Pi1(Pi1Command),
}

#[derive(Debug, Args)]
pub struct SemiOpenArgs {
    space: Option<PathBuf>,
    /// Comma-separated point names.
    #[arg(long)]
    set: Option<String>,
    /// Interval notation such as "[0,1/2) u {3/4}".
    #[arg(long, conflicts_with_all = ["space", "set"])]
    interval: Option<String>,
    /// Test semi-closedness instead.
    #[arg(long)]
    closed: bool,
}

#[derive(Debug, Subcommand)]
pub enum CertCommand {
    /// Check a certificate against a bundle of named paths and maps.
    Verify {
        bundle: PathBuf,
        /// Certificate text; defaults to the bundle's "certificate" field.
        cert: Option<PathBuf>,
        #[arg(long)]
        mode: Option<u8>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SlicesCommand {
    /// Check every slice exactly; with --grid also run the joint falsifier.
    Verify {
        family: PathBuf,
        #[arg(long, default_value_t = 1)]
        mode: u8,
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Pi1Command {
    /// Add a loop to a table and print the new table.
    Register {
        table: PathBuf,
        name: String,
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply two words; prints the reduced word and its certificate.
    Mul {
        table: PathBuf,
        left: String,
        right: String,
        #[arg(long)]
        mode: Option<u8>,
        /// Write the certificate as a bundle file.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Invert a word.
    Inv { table: PathBuf, word: String },
    /// Print the left-associated loop of a word.
    Realize {
        table: PathBuf,
        word: String,
        #[arg(long)]
        mode: Option<u8>,
    },
    /// Search for a certificate that two words are homotopic.
    Equiv {
        table: PathBuf,
        left: String,
        right: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        mode: Option<u8>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Move a table along a path to its end point.
    Rebase {
        table: PathBuf,
        gamma: PathBuf,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Push a table forward along an irresolute map.
    Push {
        table: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Everything a run produced.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Run = Result<(i32, Report), Failure>;

/// A report renders as text or as stable-keyed JSON.
struct Report {
    text: String,
    json: Value,
}

fn input<E: std::fmt::Display>(file: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", file.display()))
}

fn plain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn mode(m: u8) -> Result<Mode, Failure> {
    Mode::from_index(m).map_err(plain)
}

fn names(space: &FiniteSpace, s: Subset) -> Value {
    Value::from(s.points().map(|p| space.name(p).to_string()).collect::<Vec<_>>())
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("formats serialize")
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("formats serialize") + "\n";
    fs::write(path, text).map_err(input(path))
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((code, report)) => {
            let stdout = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("values serialize") + "\n",
            };
            Output { code, stdout, stderr: String::new() }
        }
        Err(Failure::Input(msg)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn dispatch(cmd: &Command) -> Run {
    match cmd {
        Command::SoFamily { space, semi_closed } => so_family(space, *semi_closed),
        Command::SemiOpen(a) => semi_open(a),
        Command::Classify { map, point, via_closed } => classify_cmd(map, point.as_deref(), *via_closed),
        Command::Search { query, max_points, jobs, out } => search(query, *max_points, *jobs, out.as_deref()),
        Command::CheckPath { path, mode: m } => check_path(path, mode(*m)?),
        Command::Compose { first, second } => {
            let a = load_path(first)?;
            let b = load_path_in(second, a.space())?;
            let c = compose_paths(&a, &b).map_err(plain)?;
            Ok((0, path_report(&c)))
        }
        Command::Invert { path } => Ok((0, path_report(&inverse_path(&load_path(path)?)))),
        Command::Connect { space, from, to, mode: m } => connect(space, from, to, mode(*m)?),
        Command::Cert(CertCommand::Verify { bundle, cert, mode: m }) => cert_verify(bundle, cert.as_deref(), *m),
        Command::Slices(SlicesCommand::Verify { family, mode: m, grid }) => slices_verify(family, mode(*m)?, *grid),
        Command::Pi1(p) => pi1(p),
    }
}

fn so_family(path: &Path, semi_closed: bool) -> Run {
    let space = load_space(path)?;
    let (label, family) = if semi_closed {
        ("semi-closed", space.semi_closed_family())
    } else {
        ("semi-open", space.semi_open_family())
    };
    let mut text = String::new();
    for &s in &family {
        let _ = writeln!(text, "{}", space.format_subset(s));
    }
    let json = json!({
        "family": label,
        "count": family.len(),
        "sets": family.iter().map(|&s| names(&space, s)).collect::<Vec<_>>(),
    });
    Ok((0, Report { text, json }))
}

fn semi_open(a: &SemiOpenArgs) -> Run {
    let what = if a.closed { "semi-closed" } else { "semi-open" };
    if let Some(text) = &a.interval {
        let set: RatSet = text.parse().map_err(plain)?;
        let (holds, witness) = if a.closed {
            (set.is_semi_closed(), set.topo_closure())
        } else {
            (set.is_semi_open(), set.interior())
        };
        let criterion = if a.closed { "int(cl C) is contained in C" } else { "A is contained in cl(int A)" };
        let wname = if a.closed { "cl C" } else { "int A" };
        let verdict = if holds { "is" } else { "is not" };
        let text = format!("{set} {verdict} {what} ({criterion}; {wname} = {witness})\n");
        let json = json!({
            "set": set.to_string(),
            "property": what,
            "holds": holds,
            "criterion": criterion,
            "witness": witness.to_string(),
        });
        return Ok((i32::from(!holds), Report { text, json }));
    }
    let (Some(space_path), Some(set_text)) = (&a.space, &a.set) else {
        return Err(Failure::Input("give SPACE with --set, or --interval".into()));
    };
    let space = load_space(space_path)?;
    let members: Vec<&str> = set_text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let set = space.subset_of_names(members).map_err(input(space_path))?;
    let (holds, witness) = if a.closed {
        space.is_semi_closed(set).map_err(plain)?
    } else {
        space.is_semi_open(set).map_err(plain)?
    };
    let criterion = if a.closed {
        "a closed K with int(K) contained in C contained in K"
    } else {
        "an open U with U contained in A contained in cl(U)"
    };
    let mut text = format!(
        "{} {} {what} in {}\n",
        space.format_subset(set),
        if holds { "is" } else { "is not" },
        space
    );
    if let Some(w) = witness {
        let _ = writeln!(text, "witness: {} = {}", if a.closed { "K" } else { "U" }, space.format_subset(w));
    }
    let json = json!({
        "set": names(&space, set),
        "property": what,
        "holds": holds,
        "criterion": criterion,
        "witness": witness.map(|w| names(&space, w)),
    });
    Ok((i32::from(!holds), Report { text, json }))
}

fn class_rule(class: Class, via_closed: bool) -> &'static str {
    match (class, via_closed) {
        (Class::Continuous, false) => "preimage of every open set is open",
        (Class::So1, false) => "preimage of every open set is semi-open",
        (Class::So2, false) => "preimage of every semi-open set is semi-open",
        (Class::So3, false) => "preimage of every semi-open set is open",
        (Class::Continuous, true) => "preimage of every closed set is closed",
        (Class::So1, true) => "preimage of every closed set is semi-closed",
        (Class::So2, true) => "preimage of every semi-closed set is semi-closed",
        (Class::So3, true) => "preimage of every semi-closed set is closed",
    }
}

fn report_json(f: &semitop_core::SpaceMap, r: &ContinuityReport, via_closed: bool) -> Value {
    let mut classes = serde_json::Map::new();
    for class in Class::ALL {
        let w = r.witness(class);
        classes.insert(
            class.name().into(),
            json!({
                "holds": r.holds(class),
                "rule": class_rule(class, via_closed),
                "witness": w.map(|v| json!({
                    "set": names(f.codomain(), v.set),
                    "preimage": names(f.domain(), v.preimage),
                })),
            }),
        );
    }
    Value::Object(classes)
}

fn classify_cmd(path: &Path, point: Option<&str>, via_closed: bool) -> Run {
    let f = load_map(path)?;
    if let Some(name) = point {
        let p = f
            .domain()
            .index_of(name)
            .ok_or_else(|| Failure::Input(format!("{}: unknown point {name:?}", path.display())))?;
        let r = classify_at(&f, p).map_err(plain)?;
        let flags = [r.so1, r.so2, r.so3];
        let mut text = String::new();
        let mut obj = serde_json::Map::new();
        for (k, class) in [Class::So1, Class::So2, Class::So3].into_iter().enumerate() {
            let w = r.witnesses[k];
            let _ = write!(text, "{} at {name}: {}", class.name(), if flags[k] { "yes" } else { "no" });
            if let Some(v) = w {
                let _ = write!(text, " (no admissible neighbourhood of {name} maps into {})", f.codomain().format_subset(v));
            }
            text.push('\n');
            obj.insert(class.name().into(), json!({"holds": flags[k], "witness": w.map(|v| names(f.codomain(), v))}));
        }
        obj.insert("point".into(), json!(name));
        return Ok((0, Report { text, json: Value::Object(obj) }));
    }
    let r = if via_closed { classify_via_closed(&f) } else { classify(&f) };
    let mut text = format!("map {}\n", f.format_images());
    for class in Class::ALL {
        let _ = write!(text, "{:<10} {}", class.name(), if r.holds(class) { "yes" } else { "no" });
        if let Some(v) = r.witness(class) {
            let _ = write!(
                text,
                "  (preimage of {} is {})",
                f.codomain().format_subset(v.set),
                f.domain().format_subset(v.preimage)
            );
        }
        text.push('\n');
    }
    let mut json = report_json(&f, &r, via_closed);
    json["route"] = json!(if via_closed { "closed" } else { "open" });
    Ok((0, Report { text, json }))
}

fn search(query: &str, max_points: usize, jobs: Option<usize>, out: Option<&Path>) -> Run {
    let q: PropertyQuery = query.parse().map_err(plain)?;
    let plan = SearchPlan::new(q, max_points).map_err(plain)?;
    let outcome = run_parallel(&plan, jobs);
    let mut files: Vec<(&str, Value)> = Vec::new();
    let (code, text, witness) = match &outcome {
        SearchOutcome::NoneWithinBounds { max_points } => {
            (0, format!("{q}: no counterexample on spaces with at most {max_points} points\n"), Value::Null)
        }
        SearchOutcome::Found(w) => {
            let mut text = format!("{q}: counterexample\n");
            let witness = match w {
                Witness::Composition { f, g } => {
                    let gf = semitop_core::maps::compose(f, g).expect("witness maps compose");
                    let _ = writeln!(text, "f: {} -> {}  {}", f.domain(), f.codomain(), f.format_images());
                    let _ = writeln!(text, "g: {} -> {}  {}", g.domain(), g.codomain(), g.format_images());
                    let _ = writeln!(text, "g o f: {}", gf.format_images());
                    files.push(("f.json", to_json(&map_to_file(f))));
                    files.push(("g.json", to_json(&map_to_file(g))));
                    files.push(("gf.json", to_json(&map_to_file(&gf))));
                    json!({"f": to_json(&map_to_file(f)), "g": to_json(&map_to_file(g)), "composite": to_json(&map_to_file(&gf))})
                }
                Witness::Map(f) => {
                    let _ = writeln!(text, "f: {} -> {}  {}", f.domain(), f.codomain(), f.format_images());
                    files.push(("map.json", to_json(&map_to_file(f))));
                    json!({"map": to_json(&map_to_file(f))})
                }
                Witness::Space(s) => {
                    let _ = writeln!(text, "space: {s}");
                    files.push(("space.json", to_json(&space_to_file(s))));
                    json!({"space": to_json(&space_to_file(s))})
                }
            };
            (1, text, witness)
        }
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(input(dir))?;
        for (name, v) in &files {
            write_json(&dir.join(name), v)?;
        }
    }
    let json = json!({
        "query": q.to_string(),
        "max_points": max_points,
        "found": code == 1,
        "witness": witness,
    });
    Ok((code, Report { text, json }))
}

fn path_report(p: &StepPath) -> Report {
    Report { text: format!("{p}\n"), json: to_json(&path_to_file(p)) }
}

fn check_path(path: &Path, m: Mode) -> Run {
    let p = load_path(path)?;
    let v = p.so_violation(m);
    let sig = format_signature(p.space(), &canonical_signature(&p));
    let mut text = format!("{p}\nsignature {sig}\n");
    match &v {
        None => {
            let _ = writeln!(text, "so-{m}-continuous: yes");
        }
        Some(v) => {
            let _ = writeln!(
                text,
                "so-{m}-continuous: no (preimage of {} is {})",
                p.space().format_subset(v.set),
                v.preimage
            );
        }
    }
    let json = json!({
        "mode": m.index(),
        "holds": v.is_none(),
        "signature": sig,
        "witness": v.as_ref().map(|v| json!({"set": names(p.space(), v.set), "preimage": v.preimage.to_string()})),
    });
    Ok((i32::from(v.is_some()), Report { text, json }))
}

fn connect(path: &Path, from: &str, to: &str, m: Mode) -> Run {
    let space = std::sync::Arc::new((*load_space(path)?).clone());
    let point = |n: &str| {
        space.index_of(n).ok_or_else(|| Failure::Input(format!("{}: unknown point {n:?}", path.display())))
    };
    let (x, y) = (point(from)?, point(to)?);
    let found = path_connectivity(&space, x, y, m).map_err(plain)?;
    let (code, text) = match &found {
        Some(p) => (0, format!("{from} and {to} are so-{m}-path connected\nwitness {p}\n")),
        None => (1, format!("no so-{m}-path from {from} to {to}\n")),
    };
    let json = json!({
        "mode": m.index(),
        "connected": found.is_some(),
        "witness": found.as_ref().map(|p| to_json(&path_to_file(p))),
    });
    Ok((code, Report { text, json }))
}

fn cert_verify(bundle_path: &Path, cert: Option<&Path>, m: Option<u8>) -> Run {
    let mut bundle = load_bundle(bundle_path)?;
    if let Some(m) = m {
        bundle.mode = mode(m)?;
    }
    let (text_src, origin) = match cert {
        Some(p) => (fs::read_to_string(p).map_err(input(p))?, p),
        None => (
            bundle
                .certificate
                .clone()
                .ok_or_else(|| Failure::Input(format!("{}: no certificate given", bundle_path.display())))?,
            bundle_path,
        ),
    };
    let c = parse_certificate(&text_src, &bundle).map_err(input(origin))?;
    match check_certificate(&c) {
        Ok(j) => {
            let text = format!("verified: {j}\n");
            let json = json!({
                "verified": true,
                "mode": j.mode.index(),
                "rel": j.rel,
                "lhs": j.lhs.to_string(),
                "rhs": j.rhs.to_string(),
                "rules": c.root.size(),
            });
            Ok((0, Report { text, json }))
        }
        Err(e) => {
            let text = format!("rejected: {e}\n");
            let json = json!({
                "verified": false,
                "node": e.node,
                "rule": e.rule,
                "hypothesis": e.hypothesis.code(),
                "message": e.to_string(),
            });
            Ok((1, Report { text, json }))
        }
    }
}

fn slices_verify(path: &Path, m: Mode, grid: Option<usize>) -> Run {
    let h = load_slices(path)?;
    let r = verify_slices(&h, m).map_err(input(path))?;
    let mut text = format!("H_0 = {}\nH_1 = {}\n", r.start, r.end);
    let mut ok = r.holds();
    match &r.failure {
        None => {
            let _ = writeln!(text, "every slice is so-{m}-continuous ({} slices examined)", r.samples);
        }
        Some(f) => {
            let _ = writeln!(
                text,
                "slice at t = {} is not so-{m}-continuous: {} (preimage of {} is {})",
                f.t,
                f.slice,
                h.space().format_subset(f.set),
                f.preimage
            );
        }
    }
    let mut joint = Value::Null;
    if let Some(g) = grid {
        let outcome = falsify_joint(&h, m, g).map_err(input(path))?;
        match &outcome {
            JointOutcome::NoViolationFound => {
                let _ = writeln!(text, "joint check on a {g}x{g} grid: no violation found (not a proof)");
                joint = json!({"grid": g, "candidate": null});
            }
            JointOutcome::Candidate { set, s, t } => {
                ok = false;
                let _ = writeln!(
                    text,
                    "joint check on a {g}x{g} grid: candidate violation for {} at (s, t) = ({s}, {t})",
                    h.space().format_subset(*set)
                );
                joint = json!({"grid": g, "candidate": {"set": names(h.space(), *set), "s": s.to_string(), "t": t.to_string()}});
            }
        }
    }
    let json = json!({
        "mode": m.index(),
        "start": r.start.to_string(),
        "end": r.end.to_string(),
        "slices_hold": r.holds(),
        "samples": r.samples,
        "failure": r.failure.as_ref().map(|f| json!({
            "t": f.t.to_string(),
            "slice": f.slice.to_string(),
            "set": names(h.space(), f.set),
            "preimage": f.preimage.to_string(),
        })),
        "joint": joint,
    });
    Ok((i32::from(!ok), Report { text, json }))
}

fn table(path: &Path, m: Option<u8>) -> Result<LoopTable, Failure> {
    let m = m.map(mode).transpose()?;
    Ok(load_table(path, m)?)
}

fn word(t: &LoopTable, text: &str) -> Result<Word, Failure> {
    t.parse_word(text).map_err(plain)
}

fn emit_table(t: &LoopTable, out: Option<&Path>, extra: Option<(String, Value)>) -> Run {
    let file = table_to_file(t);
    if let Some(p) = out {
        write_json(p, &file)?;
    }
    let mut text = format!(
        "table at {} (mode {}) with {} generator(s)\n",
        t.space().name(t.basepoint()),
        t.mode(),
        t.generators().len()
    );
    for (name, g) in t.generators() {
        let _ = writeln!(text, "{name}: {g}");
    }
    let mut json = to_json(&file);
    if let Some((line, value)) = extra {
        text.push_str(&line);
        json = json!({"table": json, "word": value});
    }
    Ok((0, Report { text, json }))
}

fn pi1(cmd: &Pi1Command) -> Run {
    match cmd {
        Pi1Command::Register { table: tpath, name, path, out } => {
            let file: TableFile = read_json(tpath)?;
            let mut t = table_from_file(tpath, &file, None)?;
            let alpha = load_path_in(path, t.space())?;
            match t.register_loop(name, alpha) {
                Ok(()) => emit_table(&t, out.as_deref(), None),
                Err(e @ (semitop_core::GroupError::NotALoop { .. } | semitop_core::GroupError::NotSoI { .. })) => {
                    let json = json!({"registered": false, "reason": e.to_string()});
                    Ok((1, Report { text: format!("not registered: {e}\n"), json }))
                }
                Err(e) => Err(plain(e)),
            }
        }
        Pi1Command::Mul { table: tpath, left, right, mode: m, cert_out } => {
            let t = table(tpath, *m)?;
            let (a, b) = (word(&t, left)?, word(&t, right)?);
            let p = t.multiply(&a, &b).map_err(plain)?;
            if let Some(out) = cert_out {
                write_json(out, &export_certificate(&p.certificate))?;
            }
            let (code, status) = match &p.verdict {
                Verdict::Verified(_) => (0, "verified".to_string()),
                Verdict::Warning(e) => (1, format!("warning: {e}")),
            };
            let text = format!("{}\ncertificate {}: {status}\n", p.word, p.certificate.root.shape());
            let json = json!({
                "word": p.word.to_string(),
                "certificate": export_certificate(&p.certificate).certificate,
                "verified": p.verdict.is_verified(),
                "warning": match &p.verdict { Verdict::Warning(e) => Value::from(e.to_string()), _ => Value::Null },
            });
            Ok((code, Report { text, json }))
        }
        Pi1Command::Inv { table: tpath, word: w } => {
            let t = table(tpath, None)?;
            let inv = t.invert(&word(&t, w)?).map_err(plain)?;
            Ok((0, Report { text: format!("{inv}\n"), json: json!({"word": inv.to_string()}) }))
        }
        Pi1Command::Realize { table: tpath, word: w, mode: m } => {
            let t = table(tpath, *m)?;
            let p = t.realize(&word(&t, w)?).map_err(plain)?;
            Ok((0, path_report(&p)))
        }
        Pi1Command::Equiv { table: tpath, left, right, depth, mode: m, cert_out } => {
            let t = table(tpath, *m)?;
            let (a, b) = (word(&t, left)?, word(&t, right)?);
            match t.equivalent(&a, &b, *depth).map_err(plain)? {
                Equivalence::Yes(c) => {
                    if let Some(out) = cert_out {
                        write_json(out, &export_certificate(&c))?;
                    }
                    let text = format!("yes: [{a}] = [{b}] by {}\n", c.root.shape());
                    let json = json!({"answer": "yes", "certificate": export_certificate(&c).certificate});
                    Ok((0, Report { text, json }))
                }
                Equivalence::Unknown => {
                    let text = format!("unknown: no certificate found within depth {depth}\n");
                    Ok((1, Report { text, json: json!({"answer": "unknown", "depth": depth}) }))
                }
            }
        }
        Pi1Command::Rebase { table: tpath, gamma, word: w, out } => {
            let t = table(tpath, None)?;
            let g = load_path_in(gamma, t.space())?;
            let moved = t.basepoint_change(&g).map_err(plain)?;
            let extra = w.as_ref().map(|w| word(&t, w)).transpose()?.map(|w| (format!("word: {w}\n"), Value::from(w.to_string())));
            emit_table(&moved, out.as_deref(), extra)
        }
        Pi1Command::Push { table: tpath, map, word: w, out } => {
            let t = table(tpath, None)?;
            let f = load_map(map)?;
            let pushed = match t.induced_hom(&f) {
                Ok(p) => p,
                Err(e @ semitop_core::GroupError::MapNotIrresolute(_)) => {
                    let json = json!({"pushed": false, "reason": e.to_string()});
                    return Ok((1, Report { text: format!("not pushed: {e}\n"), json }));
                }
                Err(e) => return Err(plain(e)),
            };
            let extra = w.as_ref().map(|w| word(&t, w)).transpose()?.map(|w| (format!("word: {w}\n"), Value::from(w.to_string())));
            emit_table(&pushed, out.as_deref(), extra)
        }
    }
}
