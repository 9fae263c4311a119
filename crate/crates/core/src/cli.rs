//! The `cubeset` command line.
//!
//! Exit codes: `0` success, `1` a validation or mathematical failure (with a
//! witness on stderr), `2` an I/O or argument error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::homology::bigint_json;
use crate::algebra::{
    coboundary, cohomology, cup, homology, leibniz_defect, phi_brute, phi_closed, phi_recurrence_table, unit_cocycle,
    vassiliev_check, vassiliev_extend, ChainComplex, Cochain, Extension, HomologyGroup, Ring, VassilievFunction,
};
use crate::constructions::{
    estimate_rack_space, rack_space, trunk_nerve, trunk_of_rack, Group, Rack, Trunk, DEFAULT_CELL_CAP,
};
use crate::error::Error;
use crate::james::{check_face_heights, embed_blocks, estimate_james, james_complex};
use crate::square::{SquareSet, ValidationReport};
use crate::subdivision::{delta_chain_complex, estimate_sd_delta, estimate_sd_square, sd_delta, sd_square, DeltaSet};

/// Brute-force shuffle sums are skipped above this `m + n`.
const PHI_BRUTE_LIMIT: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "cubeset", version, about = "Cubical sets without degeneracies: racks, James complexes, subdivisions and exact (co)homology")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Conjugation,
    Core,
}

#[derive(Args, Debug, Clone)]
struct RackSource {
    /// Rack JSON (`{"elements", "op"}`).
    #[arg(long, visible_alias = "rack", conflicts_with = "group")]
    input: Option<PathBuf>,
    /// Group JSON (`{"elements", "mul"}`), turned into a rack by --construction.
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Construction::Conjugation)]
    construction: Construction,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// A □-set or Δ-set JSON file.
    #[arg(long, conflicts_with_all = ["rack", "group"])]
    input: Option<PathBuf>,
    /// Rack JSON; the complex is its rack space.
    #[arg(long, conflicts_with = "group")]
    rack: Option<PathBuf>,
    /// Group JSON; the complex is the rack space of its --construction rack.
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Construction::Conjugation)]
    construction: Construction,
    /// Truncation dimension: required for rack spaces, optional for --input.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Largest number of cells any construction may produce.
    #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
    cap: u128,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check rack tables and build rack spaces.
    #[command(subcommand)]
    Rack(RackCommand),
    /// The cubical nerve of a trunk.
    Nerve {
        /// Trunk JSON (`{"vertices", "edges", "squares"}`).
        #[arg(long, conflicts_with = "rack")]
        input: Option<PathBuf>,
        /// Rack JSON; uses the trunk of the rack.
        #[arg(long)]
        rack: Option<PathBuf>,
        #[arg(long)]
        max_dim: usize,
        /// Print an upper bound on the cell counts without building.
        #[arg(long)]
        estimate: bool,
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        cap: u128,
    },
    /// The James complex `J^n(C)`.
    James {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        /// Print cell counts without building.
        #[arg(long)]
        estimate: bool,
    },
    /// Δ-subdivision of a □-set or □-subdivision of a Δ-set.
    #[command(subcommand)]
    Subdivide(SubdivideCommand),
    /// Homology groups with trust flags.
    Homology {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "z")]
        coeff: Ring,
    },
    /// Cohomology groups with trust flags.
    Cohomology {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "z")]
        coeff: Ring,
    },
    /// Cup product of two cochains on a □-set.
    Cup {
        #[command(flatten)]
        source: Source,
        /// `unit:N` for the all-ones cochain of degree N, or a cochain JSON file.
        #[arg(long)]
        left: String,
        /// `unit:N` for the all-ones cochain of degree N, or a cochain JSON file.
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "z")]
        coeff: Ring,
    },
    /// The shuffle-sign table `φ_{m,n}` for `m, n <= max`.
    Phi {
        #[arg(long)]
        max: usize,
    },
    /// Vassiliev functions on a □-set.
    #[command(subcommand)]
    Vassiliev(VassilievCommand),
    /// Block centers and heights of `J^n(C)`.
    Embed {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
    /// Re-check face relations, `∂∂ = 0`, cocycles and the Leibniz rule.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Seed for the random cochains of the Leibniz check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cochain pairs.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// The cellular chain complex as sparse boundary matrices.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "z")]
        coeff: Ring,
    },
}

#[derive(Subcommand, Debug)]
enum RackCommand {
    /// Check the rack axioms.
    Check {
        #[command(flatten)]
        rack: RackSource,
    },
    /// The rack space `BR` truncated at --max-dim.
    Space {
        #[command(flatten)]
        rack: RackSource,
        #[arg(long)]
        max_dim: usize,
        /// Print cell counts without building.
        #[arg(long)]
        estimate: bool,
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        cap: u128,
    },
}

#[derive(Subcommand, Debug)]
enum SubdivideCommand {
    /// `Sd_Δ` of a □-set.
    Delta {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        estimate: bool,
    },
    /// `Sd_□` of a Δ-set; a □-set input is first Δ-subdivided.
    Square {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        estimate: bool,
    },
}

#[derive(Subcommand, Debug)]
enum VassilievCommand {
    /// Report every `(x, i)` where a Vassiliev function breaks the defining identity.
    Check {
        #[command(flatten)]
        source: Source,
        /// Vassiliev function JSON (`{"modulus", "levels"}`).
        #[arg(long)]
        function: PathBuf,
    },
    /// Extend a cochain upward until the differences disagree.
    Extend {
        #[command(flatten)]
        source: Source,
        /// Starting cochain JSON (`{"degree", "values"}`).
        #[arg(long)]
        start: PathBuf,
        /// Highest degree to reach; defaults to the truncation dimension.
        #[arg(long)]
        top: Option<usize>,
        /// Read values in `Z/m`; 0 or absent means `Z`.
        #[arg(long)]
        modulus: Option<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit 1.
    Math(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidRack(_) | Error::InvalidGroup(_) | Error::InvalidTrunk(_) | Error::InvalidMap(_) => {
                Failure::Math(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A result in all three formats.
struct Doc {
    json: Value,
    text: String,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

/// A document plus whether the command succeeded.
struct Outcome {
    doc: Doc,
    failure: Option<String>,
}

impl From<Doc> for Outcome {
    fn from(doc: Doc) -> Outcome {
        Outcome { doc, failure: None }
    }
}

enum Complex {
    Square(SquareSet),
    Delta(DeltaSet),
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = execute(&cli.command).and_then(|outcome| {
        let rendered = render(&outcome.doc, cli.format);
        match &cli.output {
            Some(path) => std::fs::write(path, rendered)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
            None => out.write_all(rendered.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?,
        }
        Ok(outcome.failure)
    });
    match result {
        Ok(None) => 0,
        Ok(Some(msg)) | Err(Failure::Math(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn render(doc: &Doc, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc.json).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => doc.text.clone(),
        Format::Csv => {
            let mut s = doc.header.join(",");
            s.push('\n');
            for row in &doc.rows {
                let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn execute(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Rack(RackCommand::Check { rack }) => rack_check(rack),
        Command::Rack(RackCommand::Space { rack, max_dim, estimate, cap }) => {
            let r = load_rack_source(rack)?;
            let counts = estimate_rack_space(r.size(), *max_dim);
            if *estimate {
                return Ok(estimate_doc(&counts, true).into());
            }
            let c = rack_space(&r, *max_dim, *cap)?;
            ensure_valid("rack space", &c.validate())?;
            Ok(square_doc(&c)?.into())
        }
        Command::Nerve { input, rack, max_dim, estimate, cap } => {
            let trunk = match (input, rack) {
                (Some(p), None) => Trunk::from_json(&read(p)?)?,
                (None, Some(p)) => trunk_of_rack(&Rack::from_json(&read(p)?)?),
                _ => return Err(Failure::Usage("nerve needs --input TRUNK or --rack RACK".into())),
            };
            if *estimate {
                return Ok(estimate_doc(&nerve_bound(&trunk, *max_dim), false).into());
            }
            let nerve = trunk_nerve(&trunk, *max_dim, *cap)?;
            ensure_valid("nerve", &nerve.set.validate())?;
            Ok(square_doc(&nerve.set)?.into())
        }
        Command::James { source, n, estimate } => {
            let c = load_square(source)?;
            if *n > c.max_dim() {
                return Err(Error::DegreeOverflow { degree: *n, max_dim: c.max_dim() }.into());
            }
            let counts = estimate_james(&c, *n);
            if *estimate {
                return Ok(estimate_doc(&counts, true).into());
            }
            check_cap(&counts, source.cap)?;
            let j = james_complex(&c, *n)?;
            ensure_valid("James complex", &j.set.validate())?;
            Ok(square_doc(&j.set)?.into())
        }
        Command::Subdivide(SubdivideCommand::Delta { source, estimate }) => {
            let c = load_square(source)?;
            if *estimate {
                return Ok(estimate_doc(&estimate_sd_delta(c.cell_counts()), true).into());
            }
            let sd = sd_delta(&c, source.cap)?;
            ensure_valid("Δ-subdivision", &sd.set.validate())?;
            Ok(delta_doc(&sd.set)?.into())
        }
        Command::Subdivide(SubdivideCommand::Square { source, estimate }) => {
            let x = match load(source)? {
                Complex::Delta(x) => x,
                Complex::Square(c) => {
                    if *estimate {
                        let counts = estimate_sd_delta(c.cell_counts());
                        check_cap(&counts, source.cap)?;
                    }
                    let sd = sd_delta(&c, source.cap)?;
                    ensure_valid("Δ-subdivision", &sd.set.validate())?;
                    sd.set
                }
            };
            if *estimate {
                return Ok(estimate_doc(&estimate_sd_square(x.cell_counts()), true).into());
            }
            let sq = sd_square(&x, source.cap)?;
            ensure_valid("□-subdivision", &sq.set.validate())?;
            Ok(square_doc(&sq.set)?.into())
        }
        Command::Homology { source, coeff } => {
            let k = chain_complex(&load(source)?, *coeff)?;
            Ok(groups_doc("H", &homology(&k), *coeff).into())
        }
        Command::Cohomology { source, coeff } => {
            let k = chain_complex(&load(source)?, *coeff)?;
            Ok(groups_doc("H^", &cohomology(&k), *coeff).into())
        }
        Command::Cup { source, left, right, coeff } => {
            let c = load_square(source)?;
            let u = cochain_arg(&c, left, *coeff)?;
            let v = cochain_arg(&c, right, *coeff)?;
            let w = cup(&c, &u, &v)?;
            Ok(cup_doc(&w).into())
        }
        Command::Phi { max } => phi(*max),
        Command::Vassiliev(VassilievCommand::Check { source, function }) => {
            let c = load_square(source)?;
            let v = VassilievFunction::from_json(&read(function)?)?;
            let violations = vassiliev_check(&c, &v)?;
            let list: Vec<Value> = violations
                .iter()
                .map(|x| {
                    json!({
                        "degree": x.degree, "cell": x.cell, "direction": x.direction,
                        "expected": bigint_json(&x.expected), "found": bigint_json(&x.found),
                    })
                })
                .collect();
            let mut text = String::new();
            for x in &violations {
                let _ = writeln!(
                    text,
                    "degree {} cell {} direction {}: expected {}, found {}",
                    x.degree, x.cell, x.direction, x.expected, x.found
                );
            }
            if violations.is_empty() {
                text.push_str("consistent\n");
            }
            let rows = violations
                .iter()
                .map(|x| {
                    vec![x.degree.to_string(), x.cell.to_string(), x.direction.to_string(), x.expected.to_string(), x.found.to_string()]
                })
                .collect();
            let doc = Doc {
                json: json!({"consistent": violations.is_empty(), "violations": list}),
                text,
                header: vec!["degree", "cell", "direction", "expected", "found"],
                rows,
            };
            let failure = violations.first().map(|x| {
                format!("{} Vassiliev violations; first at degree {} cell {} direction {}", violations.len(), x.degree, x.cell, x.direction)
            });
            Ok(Outcome { doc, failure })
        }
        Command::Vassiliev(VassilievCommand::Extend { source, start, top, modulus }) => {
            let c = load_square(source)?;
            let v0 = Cochain::from_json(&read(start)?)?;
            vassiliev_extend_cmd(&c, v0, top.unwrap_or(c.max_dim()), *modulus)
        }
        Command::Embed { source, n } => embed(&load_square(source)?, *n, source.cap),
        Command::Verify { source, seed, samples } => verify(&load(source)?, *seed, *samples),
        Command::Export { source, coeff } => {
            let k = chain_complex(&load(source)?, *coeff)?;
            Ok(export_doc(&k).into())
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn check_cap(counts: &[u128], cap: u128) -> CliResult<()> {
    let total = counts.iter().fold(0u128, |a, &c| a.saturating_add(c));
    if total > cap {
        return Err(Error::TooLarge { estimated: total, cap }.into());
    }
    Ok(())
}

fn ensure_valid(what: &str, report: &ValidationReport) -> CliResult<()> {
    match report.first() {
        None => Ok(()),
        Some(v) => Err(Failure::Math(format!("{what} has {} face-relation violations; first: {v}", report.len()))),
    }
}

fn rack_from(rack: Option<&Path>, group: Option<&Path>, construction: Construction) -> CliResult<Rack> {
    match (rack, group) {
        (Some(p), None) => Ok(Rack::from_json(&read(p)?)?),
        (None, Some(p)) => {
            let g = Group::from_json(&read(p)?)?;
            Ok(match construction {
                Construction::Conjugation => Rack::conjugation(&g),
                Construction::Core => Rack::core(&g),
            })
        }
        (None, None) => Err(Failure::Usage("a rack (--rack/--input) or a group (--group) is required".into())),
        (Some(_), Some(_)) => Err(Failure::Usage("give either a rack or a group, not both".into())),
    }
}

fn load_rack_source(s: &RackSource) -> CliResult<Rack> {
    rack_from(s.input.as_deref(), s.group.as_deref(), s.construction)
}

fn rack_check(s: &RackSource) -> CliResult<Outcome> {
    match load_rack_source(s) {
        Ok(r) => Ok(Doc {
            json: json!({"valid": true, "size": r.size(), "trivial": r.is_trivial()}),
            text: format!("valid rack, size {}\n", r.size()),
            header: vec!["valid", "size", "defect"],
            rows: vec![vec!["true".into(), r.size().to_string(), String::new()]],
        }
        .into()),
        Err(Failure::Math(defect)) => Ok(Outcome {
            doc: Doc {
                json: json!({"valid": false, "defect": defect}),
                text: format!("not a rack: {defect}\n"),
                header: vec!["valid", "size", "defect"],
                rows: vec![vec!["false".into(), String::new(), defect.clone()]],
            },
            failure: Some(defect),
        }),
        Err(e) => Err(e),
    }
}

/// Reads a □-set or Δ-set JSON file, or builds a rack space.
fn load(source: &Source) -> CliResult<Complex> {
    let complex = match (&source.input, &source.rack, &source.group) {
        (Some(p), None, None) => {
            let text = read(p)?;
            let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
            let mut complex = if is_delta_json(&value) {
                Complex::Delta(DeltaSet::from_json(&text)?)
            } else {
                Complex::Square(SquareSet::from_json(&text)?)
            };
            if let Some(d) = source.max_dim {
                complex = match complex {
                    Complex::Square(c) if d < c.max_dim() => Complex::Square(c.truncate(d)),
                    Complex::Delta(x) if d < x.max_dim() => Complex::Delta(x.truncate(d)),
                    other => other,
                };
            }
            complex
        }
        (None, rack, group) => {
            let r = rack_from(rack.as_deref(), group.as_deref(), source.construction)?;
            let d = source
                .max_dim
                .ok_or_else(|| Failure::Usage("--max-dim is required for a rack space".into()))?;
            Complex::Square(rack_space(&r, d, source.cap)?)
        }
        _ => return Err(Failure::Usage("give --input or a rack, not both".into())),
    };
    match &complex {
        Complex::Square(c) => ensure_valid("□-set", &c.validate())?,
        Complex::Delta(x) => ensure_valid("Δ-set", &x.validate())?,
    }
    Ok(complex)
}

fn load_square(source: &Source) -> CliResult<SquareSet> {
    match load(source)? {
        Complex::Square(c) => Ok(c),
        Complex::Delta(_) => Err(Failure::Usage("this command needs a □-set, not a Δ-set".into())),
    }
}

/// Δ-set face tables map each index to a list; □-set tables to a `{"0", "1"}` pair.
fn is_delta_json(v: &Value) -> bool {
    v.get("faces")
        .and_then(Value::as_object)
        .and_then(|m| m.values().next())
        .and_then(Value::as_object)
        .and_then(|m| m.values().next())
        .is_some_and(Value::is_array)
}

fn chain_complex(c: &Complex, ring: Ring) -> CliResult<ChainComplex> {
    let k = match c {
        Complex::Square(c) => ChainComplex::from_square_set(c, ring)?,
        Complex::Delta(x) => delta_chain_complex(x, ring)?,
    };
    if let Some(n) = k.first_nonzero_square() {
        return Err(Failure::Math(format!("∂∂ is not zero in degree {n}")));
    }
    Ok(k)
}

/// `|V|` vertices and at most `|E|^{n 2^{n-1}}` edge assignments per `n`-cube.
fn nerve_bound(t: &Trunk, max_dim: usize) -> Vec<u128> {
    let e = t.edges().len() as u128;
    (0..=max_dim)
        .map(|n| {
            if n == 0 {
                t.vertex_count() as u128
            } else {
                let edges = (n as u32) << (n - 1);
                e.checked_pow(edges).unwrap_or(u128::MAX)
            }
        })
        .collect()
}

fn estimate_doc(counts: &[u128], exact: bool) -> Doc {
    let total = counts.iter().fold(0u128, |a, &c| a.saturating_add(c));
    let text = format!(
        "{} cells by dimension: {}; total {}\n",
        if exact { "estimated" } else { "at most" },
        counts.iter().map(u128::to_string).collect::<Vec<_>>().join(" "),
        total
    );
    Doc {
        json: json!({
            "cells": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "total": total.to_string(),
            "exact": exact,
        }),
        text,
        header: vec!["dim", "cells"],
        rows: counts.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.to_string()]).collect(),
    }
}

fn square_doc(c: &SquareSet) -> CliResult<Doc> {
    let json: Value = serde_json::from_str(&c.to_json()?).map_err(Error::from)?;
    let mut rows = Vec::new();
    for n in 1..=c.max_dim() {
        for x in 0..c.cell_count(n) {
            for i in 1..=n {
                for eps in 0..=1u8 {
                    rows.push(vec![n.to_string(), x.to_string(), i.to_string(), eps.to_string(), c.face(n, x, i, eps).to_string()]);
                }
            }
        }
    }
    let text = format!(
        "□-set: max_dim {}, cells {:?}, Euler characteristic {}{}\n",
        c.max_dim(),
        c.cell_counts(),
        c.euler_characteristic(),
        if c.is_truncated() { ", truncated" } else { "" }
    );
    Ok(Doc { json, text, header: vec!["dim", "cell", "i", "eps", "face"], rows })
}

fn delta_doc(x: &DeltaSet) -> CliResult<Doc> {
    let json: Value = serde_json::from_str(&x.to_json()?).map_err(Error::from)?;
    let mut rows = Vec::new();
    for k in 1..=x.max_dim() {
        for s in 0..x.cell_count(k) {
            for i in 0..=k {
                rows.push(vec![k.to_string(), s.to_string(), i.to_string(), x.face(k, s, i).to_string()]);
            }
        }
    }
    let text = format!(
        "Δ-set: max_dim {}, cells {:?}, Euler characteristic {}{}\n",
        x.max_dim(),
        x.cell_counts(),
        x.euler_characteristic(),
        if x.is_truncated() { ", truncated" } else { "" }
    );
    Ok(Doc { json, text, header: vec!["dim", "cell", "i", "face"], rows })
}

fn groups_doc(symbol: &str, groups: &[HomologyGroup], ring: Ring) -> Doc {
    let mut text = String::new();
    for g in groups {
        let _ = writeln!(text, "{symbol}{}({ring}) = {g}{}", g.degree, if g.trusted { "" } else { "  [untrusted]" });
    }
    let rows = groups
        .iter()
        .map(|g| {
            let torsion: Vec<String> = g.torsion.iter().map(BigInt::to_string).collect();
            vec![g.degree.to_string(), g.rank.to_string(), torsion.join(" "), g.trusted.to_string()]
        })
        .collect();
    Doc {
        json: json!({"ring": ring, "groups": groups.iter().map(HomologyGroup::to_json).collect::<Vec<_>>()}),
        text,
        header: vec!["degree", "rank", "torsion", "trusted"],
        rows,
    }
}

fn cochain_arg(c: &SquareSet, arg: &str, ring: Ring) -> CliResult<Cochain> {
    match arg.strip_prefix("unit:") {
        Some(n) => {
            let n: usize = n.parse().map_err(|_| Failure::Usage(format!("bad degree in '{arg}'")))?;
            Ok(unit_cocycle(c, n, ring)?)
        }
        None => {
            let u = Cochain::from_json(&read(Path::new(arg))?)?;
            u.check_against(c)?;
            Ok(u)
        }
    }
}

fn cup_doc(w: &Cochain) -> Doc {
    let constant = match w.values().split_first() {
        Some((first, rest)) if rest.iter().all(|v| v == first) => bigint_json(first),
        Some(_) => Value::Null,
        None => Value::from(0),
    };
    let mut json = w.to_json();
    json["constant"] = constant.clone();
    let text = match &constant {
        Value::Null => format!("degree {} cochain, not constant\n", w.degree()),
        k => format!("{k} times the unit cochain of degree {}\n", w.degree()),
    };
    Doc {
        json,
        text,
        header: vec!["cell", "value"],
        rows: w.values().iter().enumerate().map(|(x, v)| vec![x.to_string(), v.to_string()]).collect(),
    }
}

fn phi(max: usize) -> CliResult<Outcome> {
    let recurrence = phi_recurrence_table(max);
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut mismatch = None;
    for (m, rec_row) in recurrence.iter().enumerate() {
        let mut line = Vec::new();
        for (n, rec) in rec_row.iter().enumerate() {
            let closed = phi_closed(m, n);
            let brute = (m + n <= PHI_BRUTE_LIMIT).then(|| phi_brute(m, n));
            if brute.as_ref().is_some_and(|b| *b != closed) || *rec != closed {
                mismatch.get_or_insert((m, n));
            }
            entries.push(json!({
                "m": m, "n": n, "phi": bigint_json(&closed),
                "brute": brute.as_ref().map(bigint_json), "recurrence": bigint_json(rec),
            }));
            rows.push(vec![
                m.to_string(),
                n.to_string(),
                closed.to_string(),
                brute.map(|b| b.to_string()).unwrap_or_default(),
                rec.to_string(),
            ]);
            line.push(closed.to_string());
        }
        let _ = writeln!(text, "{}", line.join("\t"));
    }
    let doc = Doc {
        json: json!({"max": max, "agree": mismatch.is_none(), "table": entries}),
        text,
        header: vec!["m", "n", "phi", "brute", "recurrence"],
        rows,
    };
    let failure = mismatch.map(|(m, n)| format!("φ_{{{m},{n}}} differs between closed form, brute force and recurrence"));
    Ok(Outcome { doc, failure })
}

fn vassiliev_extend_cmd(c: &SquareSet, start: Cochain, top: usize, modulus: Option<u64>) -> CliResult<Outcome> {
    let modulus = modulus.filter(|&m| m != 0);
    if modulus == Some(1) {
        return Err(Failure::Usage("--modulus must be 0 or at least 2".into()));
    }
    let first = start.degree();
    let mut levels = vec![start];
    let mut stop = None;
    while levels.len() + first <= top.min(c.max_dim()) {
        match vassiliev_extend(c, levels.last().expect("nonempty"), modulus)? {
            Extension::Extended(next) => levels.push(next),
            bad => {
                stop = Some(bad);
                break;
            }
        }
    }
    let inconsistency = match &stop {
        Some(Extension::Inconsistent { degree, cell, i, j, value_i, value_j }) => json!({
            "degree": degree, "cell": cell, "i": i, "j": j,
            "value_i": bigint_json(value_i), "value_j": bigint_json(value_j),
        }),
        _ => Value::Null,
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for v in &levels {
        let vals: Vec<String> = v.values().iter().map(BigInt::to_string).collect();
        let _ = writeln!(text, "V_{} = [{}]", v.degree(), vals.join(", "));
        for (x, val) in vals.into_iter().enumerate() {
            rows.push(vec![v.degree().to_string(), x.to_string(), val]);
        }
    }
    let failure = match stop {
        Some(Extension::Inconsistent { degree, cell, i, j, value_i, value_j }) => {
            let msg = format!("no V_{degree}: cell {cell} gives {value_i} in direction {i} but {value_j} in direction {j}");
            let _ = writeln!(text, "{msg}");
            Some(msg)
        }
        _ => None,
    };
    let doc = Doc {
        json: json!({
            "modulus": modulus,
            "start_degree": first,
            "levels": levels.iter().map(|v| v.values().iter().map(bigint_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "inconsistency": inconsistency,
        }),
        text,
        header: vec!["degree", "cell", "value"],
        rows,
    };
    Ok(Outcome { doc, failure })
}

fn embed(c: &SquareSet, n: usize, cap: u128) -> CliResult<Outcome> {
    if n > c.max_dim() {
        return Err(Error::DegreeOverflow { degree: n, max_dim: c.max_dim() }.into());
    }
    let counts = estimate_james(c, n);
    check_cap(&counts, cap)?;
    let cells = embed_blocks(c, n);
    let violations = if n == 1 {
        let j = james_complex(c, 1)?;
        ensure_valid("James complex", &j.set.validate())?;
        check_face_heights(&j, j.set.max_dim() + 1)
    } else {
        Vec::new()
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for cell in &cells {
        for b in &cell.blocks {
            let collapsed: Vec<String> = b.collapsed.iter().map(usize::to_string).collect();
            let _ = writeln!(
                text,
                "cell {}:{} collapsed ({}) height {} center ({})",
                cell.dim,
                cell.index,
                collapsed.join(","),
                b.height,
                b.center.join(", ")
            );
            rows.push(vec![
                cell.dim.to_string(),
                cell.index.to_string(),
                collapsed.join(" "),
                b.height.to_string(),
                b.center.join(" "),
            ]);
        }
    }
    let failure = violations.first().map(|v| {
        format!("{} face-height violations; first at k {} cell {} ∂_{}^{}", violations.len(), v.k, v.cell, v.i, v.eps)
    });
    let doc = Doc {
        json: json!({"n": n, "cells": cells, "height_violations": violations}),
        text,
        header: vec!["dim", "cell", "collapsed", "height", "center"],
        rows,
    };
    Ok(Outcome { doc, failure })
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn verify(complex: &Complex, seed: u64, samples: usize) -> CliResult<Outcome> {
    let mut checks = vec![Check { name: "face relations".into(), passed: true, detail: "validate() is empty".into() }];
    for ring in [Ring::Z, Ring::Z2] {
        let k = match complex {
            Complex::Square(c) => ChainComplex::from_square_set(c, ring)?,
            Complex::Delta(x) => delta_chain_complex(x, ring)?,
        };
        let bad = k.first_nonzero_square();
        checks.push(Check {
            name: format!("boundary squares to zero over {ring}"),
            passed: bad.is_none(),
            detail: bad.map_or_else(|| format!("ranks {:?}", k.ranks()), |n| format!("fails in degree {n}")),
        });
    }
    if let Complex::Square(c) = complex {
        for ring in [Ring::Z, Ring::Z2] {
            let bad = (0..c.max_dim()).find(|&n| {
                let v = unit_cocycle(c, n, ring).expect("degree within range");
                !coboundary(c, &v).expect("degree within range").is_zero()
            });
            checks.push(Check {
                name: format!("unit cochains are cocycles over {ring}"),
                passed: bad.is_none(),
                detail: bad.map_or_else(|| format!("degrees 0..{}", c.max_dim()), |n| format!("δV_{n} is not zero")),
            });
        }
        if c.max_dim() >= 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failed = None;
            for s in 0..samples {
                let p = rng.gen_range(0..c.max_dim());
                let q = rng.gen_range(0..c.max_dim() - p);
                let mut random = |d: usize| {
                    let values = (0..c.cell_count(d)).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
                    Cochain::new(d, Ring::Z, values)
                };
                let u = random(p);
                let v = random(q);
                if !leibniz_defect(c, &u, &v)?.is_zero() {
                    failed = Some((s, p, q));
                    break;
                }
            }
            checks.push(Check {
                name: "Leibniz rule on random cochains".into(),
                passed: failed.is_none(),
                detail: failed.map_or_else(
                    || format!("{samples} pairs, seed {seed}"),
                    |(s, p, q)| format!("sample {s} with degrees ({p}, {q}) fails"),
                ),
            });
        }
    }
    let mut text = String::new();
    for ch in &checks {
        let _ = writeln!(text, "{} {}: {}", if ch.passed { "ok  " } else { "FAIL" }, ch.name, ch.detail);
    }
    let failure = checks.iter().find(|ch| !ch.passed).map(|ch| format!("{}: {}", ch.name, ch.detail));
    let doc = Doc {
        json: json!({
            "passed": failure.is_none(),
            "checks": checks.iter().map(|ch| json!({"name": ch.name, "passed": ch.passed, "detail": ch.detail})).collect::<Vec<_>>(),
        }),
        text,
        header: vec!["check", "passed", "detail"],
        rows: checks.iter().map(|ch| vec![ch.name.clone(), ch.passed.to_string(), ch.detail.clone()]).collect(),
    };
    Ok(Outcome { doc, failure })
}

fn export_doc(k: &ChainComplex) -> Doc {
    let mut boundaries = Vec::new();
    let mut rows = Vec::new();
    for n in 0..=k.max_dim() {
        let m = k.boundary(n);
        let entries: Vec<[i64; 3]> = m.triplets().map(|(r, c, v)| [r as i64, c as i64, v]).collect();
        for &[r, c, v] in &entries {
            rows.push(vec![n.to_string(), r.to_string(), c.to_string(), v.to_string()]);
        }
        boundaries.push(json!({"dim": n, "rows": m.rows(), "cols": m.cols(), "entries": entries}));
    }
    Doc {
        json: json!({"ring": k.ring(), "trusted_degree": k.trusted_degree(), "boundaries": boundaries}),
        text: k.export_text(),
        header: vec!["dim", "row", "col", "value"],
        rows,
    }
}
