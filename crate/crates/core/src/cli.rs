//! Command-line front end. Output is `key=value` lines, or JSON with
//! `--json`. Exit codes: 1 usage, 2 data, 3 verification.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::affine::{affine_support_function, box_shape, orbit_side_st_chi0, rectangle, twisted_harmonic_exists};
use crate::catalog::{self, find, CatalogDoc, CatalogEntry, OmegaHStatus};
use crate::checks::run_all;
use crate::dual_group::{a2n_exceptions, parameter_factors_through_iota, sp_embedding_jordan_type, unipotent_criterion};
use crate::hypergraph::{OrbitHypergraph, SupportFunction};
use crate::root_system::Character;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Verification(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stdist", version, about = "Orbit hypergraphs and Steinberg distinction verdicts")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Closed,
    Rational,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct EntryArgs {
    pub entry: String,
    #[arg(long, value_enum, default_value = "closed")]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// One line per entry.
    List,
}

#[derive(Debug, Subcommand)]
pub enum HypergraphCommand {
    Show(EntryArgs),
}

#[derive(Debug, Subcommand)]
pub enum ShapeCommand {
    /// Two rows of chambers, `cols` columns.
    Rectangle {
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Four rows in a closed band, `cols` columns.
    Box {
        #[arg(long)]
        cols: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lists catalog entries.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Prints an orbit hypergraph.
    #[command(subcommand)]
    Hypergraph(HypergraphCommand),
    /// Dimension and basis of the harmonic functions.
    Harmonic(EntryArgs),
    /// The support function.
    Support(EntryArgs),
    /// Orbit side and dual side verdicts.
    Decide {
        entry: String,
        /// Per-factor generator phases such as `1/2` or `0,1/3`, or
        /// `trivial` / `chi0`.
        #[arg(long)]
        character: Option<String>,
    },
    /// Runs every acceptance cross-check.
    VerifyAll,
    /// Writes a hypergraph as Graphviz dot or JSON.
    Export {
        entry: String,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, value_enum, default_value = "closed")]
        mode: Mode,
    },
    /// Builds a rectangle or box shape and checks its support function.
    #[command(subcommand)]
    Shape(ShapeCommand),
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(cli: &Cli) -> Result<Vec<CatalogEntry>, CliError> {
    let text = match &cli.catalog {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", p.display())))?,
        None => catalog::BUILTIN.to_string(),
    };
    catalog::load_catalog(&text).map_err(|e| CliError::Data(e.to_string()))
}

fn entry<'a>(entries: &'a [CatalogEntry], name: &str) -> Result<&'a CatalogEntry, CliError> {
    find(entries, name).ok_or_else(|| CliError::Data(format!("unknown entry {name:?}")))
}

fn graph_for(e: &CatalogEntry, mode: Mode) -> Result<&OrbitHypergraph, CliError> {
    match mode {
        Mode::Closed => Ok(&e.closed),
        Mode::Rational => e
            .rational
            .as_ref()
            .ok_or_else(|| CliError::Data(format!("{} has no rational graph", e.name))),
        Mode::Affine => e
            .affine
            .as_ref()
            .map(|a| &a.gamma1)
            .ok_or_else(|| CliError::Data(format!("{} has no affine fragment", e.name))),
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Closed => "closed",
        Mode::Rational => "rational",
        Mode::Affine => "affine",
    }
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json value serializes"))?;
    Ok(())
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Catalog(CatalogCommand::List) => catalog_list(cli, out),
        Command::Hypergraph(HypergraphCommand::Show(a)) => {
            let entries = load(cli)?;
            let e = entry(&entries, &a.entry)?;
            show_graph(cli.json, &e.name, mode_name(a.mode), graph_for(e, a.mode)?, out)
        }
        Command::Harmonic(a) => {
            let entries = load(cli)?;
            let e = entry(&entries, &a.entry)?;
            harmonic(cli.json, &e.name, a.mode, graph_for(e, a.mode)?, out)
        }
        Command::Support(a) => {
            let entries = load(cli)?;
            let e = entry(&entries, &a.entry)?;
            let g = graph_for(e, a.mode)?;
            let s = match a.mode {
                Mode::Affine => affine_support_function(g),
                _ => g.support_function(),
            }
            .map_err(|err| CliError::Data(err.to_string()))?;
            support(cli.json, &e.name, g, &s, out)
        }
        Command::Decide { entry: name, character } => {
            let entries = load(cli)?;
            decide(cli.json, entry(&entries, name)?, character.as_deref(), out)
        }
        Command::VerifyAll => verify_all(cli, out),
        Command::Export { entry: name, format, mode } => {
            let entries = load(cli)?;
            let e = entry(&entries, name)?;
            match format {
                ExportFormat::Dot => {
                    write!(out, "{}", graph_for(e, *mode)?.to_dot(&e.name))?;
                    Ok(())
                }
                ExportFormat::Json => {
                    writeln!(out, "{}", export_entry_json(e))?;
                    Ok(())
                }
            }
        }
        Command::Shape(s) => {
            let (name, g) = match s {
                ShapeCommand::Rectangle { rows, cols } => (
                    format!("rectangle {rows}x{cols}"),
                    rectangle(*rows, *cols).map_err(|e| CliError::Data(e.to_string()))?,
                ),
                ShapeCommand::Box { cols } => (
                    format!("box {cols}"),
                    box_shape(*cols).map_err(|e| CliError::Data(e.to_string()))?,
                ),
            };
            let s = affine_support_function(&g).map_err(|e| CliError::Data(e.to_string()))?;
            if cli.json {
                print_json(
                    out,
                    &json!({
                        "shape": name,
                        "graph": serde_json::to_value(&g).expect("graph serializes"),
                        "support": support_json(&g, &s),
                    }),
                )
            } else {
                show_graph(false, &name, "affine", &g, out)?;
                support(false, &name, &g, &s, out)
            }
        }
    }
}

/// A single-entry catalog document, with any derived closed graph
/// stored explicitly so that it loads on its own.
pub fn export_entry_json(e: &CatalogEntry) -> String {
    let mut r = e.repr.clone();
    if r.derived_from.is_some() {
        r.derived_from = None;
        r.hypergraph_closed = Some(e.closed.clone());
    }
    let doc = CatalogDoc {
        schema: catalog::SCHEMA.to_string(),
        entries: vec![r],
    };
    serde_json::to_string_pretty(&doc).expect("catalog serializes")
}

fn catalog_list(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let entries = load(cli)?;
    if cli.json {
        writeln!(out, "{}", catalog::to_json(&entries))?;
        return Ok(());
    }
    for e in &entries {
        writeln!(
            out,
            "name={} source={} vertices={} quasi_split={} full_closed_count={} harmonic_dim={} st_chi0={} rational={} affine={} omega_h_status={}",
            e.name,
            e.source,
            e.closed.len(),
            e.expected.quasi_split,
            e.expected.full_closed_count,
            e.expected.harmonic_dim_closed,
            e.expected.st_chi0_distinguished,
            e.rational.is_some(),
            e.affine.is_some(),
            status_name(e.omega_h_status),
        )?;
    }
    Ok(())
}

fn status_name(s: OmegaHStatus) -> &'static str {
    match s {
        OmegaHStatus::Derived => "derived",
        OmegaHStatus::Unverified => "unverified",
    }
}

fn show_graph(
    as_json: bool,
    name: &str,
    mode: &str,
    g: &OrbitHypergraph,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if as_json {
        return print_json(out, &serde_json::to_value(g).expect("graph serializes"));
    }
    writeln!(out, "entry={name}")?;
    writeln!(out, "mode={mode}")?;
    writeln!(out, "vertices={}", g.len())?;
    writeln!(out, "edges={}", g.edges.len())?;
    writeln!(out, "labels={}", g.labels.join(","))?;
    for (v, x) in g.vertices.iter().enumerate() {
        writeln!(out, "vertex={} rank={} full={}", x.id, x.rank, g.is_full(v))?;
    }
    for e in &g.edges {
        writeln!(
            out,
            "edge={} type={:?}{}",
            g.edge_name(e),
            e.kind,
            if e.open { " open=true" } else { "" }
        )?;
    }
    Ok(())
}

fn harmonic(
    as_json: bool,
    name: &str,
    mode: Mode,
    g: &OrbitHypergraph,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let h = g.harmonic_space();
    let rows: Vec<BTreeMap<String, String>> = h
        .basis
        .iter()
        .map(|f| {
            g.vertices
                .iter()
                .zip(f)
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(v, c)| (v.id.clone(), c.to_string()))
                .collect()
        })
        .collect();
    if as_json {
        return print_json(
            out,
            &json!({"entry": name, "mode": mode_name(mode), "dim": h.dim(), "basis": rows}),
        );
    }
    writeln!(out, "entry={name}")?;
    writeln!(out, "mode={}", mode_name(mode))?;
    writeln!(out, "dim={}", h.dim())?;
    for (k, r) in rows.iter().enumerate() {
        let terms: Vec<String> = r.iter().map(|(v, c)| format!("{v}:{c}")).collect();
        writeln!(out, "basis[{k}]={}", terms.join(","))?;
    }
    Ok(())
}

fn combination(g: &OrbitHypergraph, s: &SupportFunction, row: &[i64]) -> String {
    let terms: Vec<String> = row
        .iter()
        .zip(&s.basis)
        .filter(|(c, _)| **c != 0)
        .map(|(c, &b)| format!("{c}*{}", g.vertices[b].id))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn support_json(g: &OrbitHypergraph, s: &SupportFunction) -> Value {
    json!({
        "S": s.basis.iter().map(|&b| g.vertices[b].id.clone()).collect::<Vec<_>>(),
        "values": g.vertices.iter().zip(&s.values).map(|(v, row)| {
            (v.id.clone(), Value::from(row.clone()))
        }).collect::<serde_json::Map<_, _>>(),
    })
}

fn support(
    as_json: bool,
    name: &str,
    g: &OrbitHypergraph,
    s: &SupportFunction,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if as_json {
        let mut v = support_json(g, s);
        v["entry"] = name.into();
        return print_json(out, &v);
    }
    let ids: Vec<&str> = s.basis.iter().map(|&b| g.vertices[b].id.as_str()).collect();
    writeln!(out, "S={}", ids.join(","))?;
    for (v, row) in g.vertices.iter().zip(&s.values) {
        writeln!(out, "s({})={}", v.id, combination(g, s, row))?;
    }
    Ok(())
}

fn decide(
    as_json: bool,
    e: &CatalogEntry,
    character: Option<&str>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let inv = &e.involution;
    let mut kv: Vec<(String, Value)> = Vec::new();
    let mut put = |k: &str, v: Value| kv.push((k.to_string(), v));
    put("entry", e.name.clone().into());
    put("quasi_split", inv.quasi_split().into());
    put("full_closed_count", e.closed.full_closed_vertices().len().into());
    let st = orbit_side_st_chi0(&e.closed, inv);
    put("st_chi0", st.into());
    let unip = unipotent_criterion(inv, &e.factor_data).map_err(|err| CliError::Data(err.to_string()))?;
    put("dual", unip.into());
    put("dual_unipotent", unip.into());
    put("dual_factors_through_iota", parameter_factors_through_iota(inv).into());
    let exceptions = a2n_exceptions(inv);
    for f in &exceptions {
        let n = inv.ambient.factors[*f].rank / 2;
        let p = sp_embedding_jordan_type(n);
        put(
            &format!("jordan_partition[{}]", inv.ambient.factors[*f]),
            p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",").into(),
        );
    }
    if let Some(spec) = character {
        let chi = Character::parse(&e.omega, spec).map_err(|err| CliError::Data(err.to_string()))?;
        let omega_h: Vec<usize> = e.omega_h.iter().copied().collect();
        put("omega_order", e.omega.order().into());
        put("omega_h", Value::from(omega_h));
        put("omega_h_status", status_name(e.omega_h_status).into());
        let psi = chi.inverse_times(&Character::chi0(&e.omega));
        let verdict = match &e.affine {
            Some(a) => {
                let outcome = twisted_harmonic_exists(&a.gamma1, &e.omega, &a.h_action, &chi)
                    .map_err(|err| CliError::Data(err.to_string()))?;
                put("st_chi_basis", "affine fragment".into());
                outcome.exists
            }
            None => {
                put("st_chi_basis", "omega_h annotation".into());
                st && psi.is_trivial_on(&e.omega_h)
            }
        };
        put("st_chi", verdict.into());
    }
    if as_json {
        let map: serde_json::Map<String, Value> = kv.into_iter().collect();
        return print_json(out, &Value::Object(map));
    }
    for (k, v) in kv {
        match v {
            Value::String(s) => writeln!(out, "{k}={s}")?,
            other => writeln!(out, "{k}={other}")?,
        }
    }
    Ok(())
}

fn verify_all(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let entries = load(cli)?;
    let results = run_all(&entries);
    if cli.json {
        let v: Vec<Value> = results
            .iter()
            .map(|r| json!({"criterion": r.id, "name": r.name, "passed": r.passed, "details": r.details}))
            .collect();
        print_json(out, &Value::from(v))?;
    } else {
        for r in &results {
            writeln!(out, "{r}")?;
        }
    }
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("criteria failed: {}", failed.join(","))))
    }
}
