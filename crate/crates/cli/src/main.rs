use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::debug;

use gordian::atlas::Chirality;
use gordian::certify::{summarize_additivity, verify_certificate, Certificate, Summand};
use gordian::invariants::render_jones;
use gordian::moves::{simplify, DEFAULT_BUDGET};
use gordian::search::{adjacent_knots, count_unknotting_subsets, symbiont_search, unknotting_upper_bound, SearchConfig};
use gordian::{
    dt_to_diagram, emit_dt, fingerprint, murasugi_lower_bound, parse_dt, CrossingRef, KnotTable, PlanarDiagram,
};

#[derive(Parser)]
#[command(name = "gordian", version, about = "Knot diagrams, invariants and unknotting certificates")]
struct Cli {
    /// Knot table to use instead of the bundled one
    #[arg(long, global = true, env = "GORDIAN_TABLE")]
    table: Option<PathBuf>,

    /// Seed for randomized searches
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Most crossing changes per search
    #[arg(long, global = true)]
    depth: Option<u32>,

    /// Move budget for each simplification
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// key=value lines
    Machine,
}

/// Knots are given as a DT code (`DT:[4,6,2]` or `[4,6,2]`) or a table name,
/// optionally as `mirror NAME`.
#[derive(Subcommand)]
enum Command {
    /// Check a DT code and show the diagram it describes
    Parse { knot: String },
    /// Determinant, signature and Jones polynomial
    Invariants { knot: String },
    /// Reduce crossings with Reidemeister moves
    Simplify { knot: String },
    /// Change the given crossings (numbered from 0)
    Change {
        knot: String,
        #[arg(required = true)]
        crossings: Vec<usize>,
    },
    /// Connected sum of two knots
    Sum { left: String, right: String },
    /// Look a knot up in the table
    Identify { knot: String },
    /// Replay unknotting certificates
    Verify {
        #[arg(required_unless_present = "all_bundled", conflicts_with = "all_bundled")]
        file: Option<PathBuf>,
        #[arg(long)]
        all_bundled: bool,
        /// Print every step and the additivity verdict
        #[arg(long)]
        detail: bool,
    },
    /// Upper bound on the unknotting number by crossing-change search
    SearchUnknotting {
        knot: String,
        #[arg(long, default_value_t = 20_000)]
        max_nodes: usize,
        /// Write the witness certificate here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random diagrams of a connected sum with one change to a simpler knot
    SearchSymbiont {
        left: String,
        right: String,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        /// Random moves applied to each trial diagram
        #[arg(long, default_value_t = 3)]
        inflation: usize,
        /// Use this diagram for the next trial instead of a random one
        #[arg(long)]
        inject: Vec<String>,
        /// Write the first witness certificate here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count k-subsets of crossings whose change unknots the diagram
    CountSubsets { knot: String, k: usize },
    /// Knots one crossing change away from the diagram
    Adjacent { knot: String },
}

/// Output collected as key=value pairs, with a separate text rendering.
#[derive(Default)]
struct Report {
    fields: Vec<(String, String)>,
    text: Vec<String>,
}

impl Report {
    fn field(&mut self, key: &str, value: impl Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    fn line(&mut self, line: impl Display) {
        self.text.push(line.to_string());
    }

    /// Adds a field and shows it in text as `key: value`.
    fn both(&mut self, key: &str, value: impl Display) {
        let value = value.to_string();
        self.line(format!("{key}: {value}"));
        self.field(key, value);
    }

    fn print(&self, format: Format) {
        match format {
            Format::Text => self.text.iter().for_each(|l| println!("{l}")),
            Format::Machine => self.fields.iter().for_each(|(k, v)| println!("{k}={v}")),
        }
    }
}

fn code_text(d: &PlanarDiagram) -> String {
    if d.is_empty() {
        "DT:[]".into()
    } else {
        emit_dt(d).expect("nonempty diagrams have DT codes").to_string()
    }
}

fn list(xs: impl IntoIterator<Item = impl Display>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn diagram_from_code(arg: &str) -> Result<PlanarDiagram> {
    let code = parse_dt(arg).with_context(|| format!("cannot parse {arg:?}"))?;
    Ok(dt_to_diagram(&code)?)
}

fn knot(arg: &str, table: &KnotTable) -> Result<PlanarDiagram> {
    let t = arg.trim();
    if t.starts_with("DT:") || t.starts_with('[') {
        return diagram_from_code(t);
    }
    let s: Summand = t.parse()?;
    let Some(e) = table.get(&s.name) else {
        bail!("{} is not in the knot table", s.name);
    };
    let d = e.diagram();
    Ok(if s.mirrored { d.mirror() } else { d })
}

fn invariant_fields(r: &mut Report, d: &PlanarDiagram) -> Result<()> {
    let fp = fingerprint(d)?;
    r.both("determinant", fp.determinant);
    r.both("signature", fp.signature);
    r.both("jones", render_jones(&fp.jones));
    r.both("murasugi_bound", murasugi_lower_bound(d));
    Ok(())
}

fn chirality(c: Chirality) -> &'static str {
    match c {
        Chirality::AsTabulated => "as-tabulated",
        Chirality::Mirrored => "mirrored",
        Chirality::Amphichiral => "amphichiral",
    }
}

fn write_certificate(path: &Path, c: &Certificate) -> Result<()> {
    fs::write(path, format!("{c}\n")).with_context(|| format!("cannot write {}", path.display()))
}

/// Runs one subcommand. `Ok(false)` means a certificate failed to verify.
fn run(cli: &Cli, table: &KnotTable, r: &mut Report) -> Result<bool> {
    let mut cfg = SearchConfig::new(table);
    cfg.rng_seed = cli.seed;
    cfg.simplify_budget = cli.budget;
    if let Some(depth) = cli.depth {
        cfg.depth = depth;
    }
    match &cli.command {
        Command::Parse { knot: arg } => {
            let d = knot(arg, table)?;
            r.both("dt", code_text(&d));
            r.both("crossings", d.crossing_count());
            r.both("writhe", d.writhe());
            r.both("pd", format!("{:?}", d.pd_code()).replace(' ', ""));
        }
        Command::Invariants { knot: arg } => {
            let d = knot(arg, table)?;
            r.both("crossings", d.crossing_count());
            invariant_fields(r, &d)?;
        }
        Command::Simplify { knot: arg } => {
            let d = knot(arg, table)?;
            let (out, report) = simplify(&d, cli.budget);
            r.both("dt", code_text(&out));
            r.both("crossings", format!("{} -> {}", report.initial_crossings, report.final_crossings));
            r.both("moves", report.moves_applied);
            r.both("budget_exhausted", report.budget_exhausted);
        }
        Command::Change { knot: arg, crossings } => {
            let d = knot(arg, table)?;
            let refs: Vec<CrossingRef> = crossings.iter().map(|&c| CrossingRef(c)).collect();
            let out = d.change_crossings(&refs)?;
            r.both("dt", code_text(&out));
        }
        Command::Sum { left, right } => {
            let d = knot(left, table)?.connected_sum(&knot(right, table)?);
            r.both("dt", code_text(&d));
            r.both("crossings", d.crossing_count());
            invariant_fields(r, &d)?;
        }
        Command::Identify { knot: arg } => {
            let d = knot(arg, table)?;
            match table.identify(&d) {
                Ok(id) => {
                    r.line(&id);
                    r.field("name", &id.name);
                    r.field("chirality", chirality(id.chirality));
                    r.field("candidates", list(&id.candidates));
                    r.field("collisions", list(&id.collision_list));
                }
                Err(e) => {
                    r.line(&e);
                    r.field("name", "none");
                }
            }
        }
        Command::Verify {
            file,
            all_bundled,
            detail,
        } => {
            let certs = if *all_bundled {
                Certificate::bundled().into_iter().map(|(n, c)| (n.to_string(), c)).collect()
            } else {
                let path = file.as_ref().expect("clap requires a file");
                vec![(path.display().to_string(), Certificate::load(path)?)]
            };
            let mut all = true;
            for (name, c) in certs {
                let report = verify_certificate(&c, table);
                all &= report.passed();
                r.field("certificate", &name);
                r.field("title", &report.title);
                r.field("bound", report.claimed_bound);
                r.field("passed", report.passed());
                if let Some(ok) = report.sum_matches {
                    r.field("sum_matches", ok);
                }
                if let Some(e) = &report.error {
                    r.field("error", e);
                }
                if !detail {
                    r.line(report.verdict_line());
                    continue;
                }
                r.line(&report);
                if report.passed() && c.claimed_sum.is_some() {
                    match summarize_additivity(&c, table) {
                        Ok(s) => r.line(format!("  additivity: {s}")),
                        Err(e) => r.line(format!("  additivity: {e}")),
                    }
                }
            }
            return Ok(all);
        }
        Command::SearchUnknotting { knot: arg, max_nodes, out } => {
            let d = knot(arg, table)?;
            cfg.max_nodes = *max_nodes;
            let o = unknotting_upper_bound(&d, &cfg);
            r.both("bound", o.bound_found.map_or("none".to_string(), |b| b.to_string()));
            r.both("nodes", o.nodes_explored);
            r.both("exhausted", o.exhausted);
            if let Some(w) = &o.witness {
                r.line(format!("\n{w}"));
                if let Some(path) = out {
                    write_certificate(path, w)?;
                    r.field("witness", path.display());
                }
            }
        }
        Command::SearchSymbiont {
            left,
            right,
            trials,
            inflation,
            inject,
            out,
        } => {
            let left: Summand = left.parse()?;
            let right: Summand = right.parse()?;
            let injected = inject.iter().map(|s| diagram_from_code(s)).collect::<Result<Vec<_>>>()?;
            cfg.inflation = *inflation;
            let outcomes = symbiont_search(&left, &right, *trials, &cfg, &injected)?;
            let mut first = None;
            for (i, o) in outcomes.iter().enumerate() {
                let b = o.bound_found.map_or("none".to_string(), |b| b.to_string());
                r.line(format!("trial {i}: bound {b}, {} nodes", o.nodes_explored));
                r.field(&format!("trial.{i}.bound"), b);
                if first.is_none() {
                    first = o.witness.as_ref();
                }
            }
            r.field("found", outcomes.iter().filter(|o| o.bound_found.is_some()).count());
            if let Some(w) = first {
                r.line(format!("\n{w}"));
                if let Some(path) = out {
                    write_certificate(path, w)?;
                    r.field("witness", path.display());
                }
            }
        }
        Command::CountSubsets { knot: arg, k } => {
            let d = knot(arg, table)?;
            if *k > d.crossing_count() {
                bail!("k = {k} exceeds the {} crossings of the diagram", d.crossing_count());
            }
            let c = count_unknotting_subsets(&d, *k, &cfg);
            r.both("certified", c.certified);
            r.both("total", c.total);
            let unresolved = c.unresolved.iter().map(|s| format!("[{}]", list(s)));
            r.both("unresolved", list(unresolved));
        }
        Command::Adjacent { knot: arg } => {
            let d = knot(arg, table)?;
            let a = adjacent_knots(&d, &cfg);
            r.both("knots", list(a.knots.iter().map(|id| id.to_string())));
            r.both("unknot_changes", list(&a.unknot_changes));
            r.both("unidentified", list(&a.unidentified));
            r.both("unresolved", list(&a.unresolved));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let loaded;
    let table = match &cli.table {
        None => KnotTable::bundled(),
        Some(path) => match KnotTable::load(path) {
            Ok(t) => {
                debug!("loaded {} knots from {}", t.len(), path.display());
                loaded = t;
                &loaded
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
    };
    let mut report = Report::default();
    let outcome = run(&cli, table, &mut report);
    report.print(cli.format);
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
