//! Command-line front end. Every verb reads JSON, calls one library
//! function and writes JSON or an aligned text table.
//!
//! Exit status is 0 on success, 1 for malformed input or violated
//! preconditions and 2 when an identity or integrality check fails. Errors
//! are reported on stderr as `{module, operation, reason, location}`.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chow::{integrate_function, integrate_table, local_gv_from_pt, local_pt_from_gv, local_resolving_window};
use crate::error::{Error, Result};
use crate::flop::{flop_check, FlopFixture};
use crate::genus::{decompose_symmetric, pt_local_irreducible, recompose, GenusVector};
use crate::io;
use crate::perverse::fixtures::{self, Fixture};
use crate::perverse::{assemble_datum, behrend_euler_check, e2_from_e1, gv_from_perverse, AssemblyMode};
use crate::rational::format_rational;
use crate::series::DegreeCutoff;
use crate::transforms::{gv_from_gw, gv_from_pt, gw_from_gv, pt_from_gv, resolving_window, Convention};

#[derive(Parser, Debug)]
#[command(name = "gvkit", version, about = "Exact conversions between curve-counting invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    Enriques,
    Elliptic,
    Nodal,
    Cusp,
    Smooth,
    ConifoldFlop,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Symmetric Laurent polynomial -> genus vector.
    Decompose {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Genus vector -> symmetric Laurent polynomial.
    Recompose {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// GV table -> stable-pair series.
    Gv2pt {
        #[arg(default_value = "-")]
        input: PathBuf,
        /// `B` (total degree) or `w1,...,wr:B`.
        #[arg(long)]
        cutoff: String,
        /// Precision bound in half-units of `q`; defaults to the window needed to invert.
        #[arg(long)]
        window: Option<i64>,
        #[arg(long, default_value = "global-q")]
        convention: Convention,
    },
    /// Stable-pair series -> GV table.
    Pt2gv {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        gmax: i64,
        #[arg(long, default_value = "global-q")]
        convention: Convention,
    },
    /// GV table -> GW table.
    Gv2gw {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        cutoff: String,
        /// Largest power of lambda kept.
        #[arg(long)]
        order: Option<i64>,
    },
    /// GW table -> GV table.
    Gw2gv {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        cutoff: String,
        #[arg(long, default_value_t = 3)]
        gmax: i64,
    },
    /// Local stable-pair function -> local GV table.
    LocalPt2gv {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 3)]
        gmax: i64,
        #[arg(long, default_value = "local-minus-q")]
        convention: Convention,
    },
    /// Local GV table -> local stable-pair function.
    LocalGv2pt {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long, default_value = "local-minus-q")]
        convention: Convention,
    },
    /// Integrates a local table or function against the Euler weights.
    Integrate {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Perverse datum or summand table -> local invariants per point.
    Perverse {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value = "filtered")]
        mode: AssemblyMode,
    },
    /// E1 page with d1 ranks -> E2 page.
    Spectral {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Checks the flop identity on a fixture.
    FlopCheck {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Emits a built-in fixture.
    Fixture {
        name: FixtureName,
        /// Size of the I_n fiber.
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// `hst`, `kl`, `ours` or `all` for the Enriques table.
        #[arg(long, default_value = "all")]
        mode: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        ex: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        es: i64,
        #[arg(long, default_value_t = 0)]
        g: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        nu: i64,
        #[arg(long, default_value_t = 6)]
        window: i64,
        #[arg(long, default_value_t = 4)]
        bound: i64,
    },
}

impl Command {
    fn names(&self) -> (&'static str, &'static str) {
        match self {
            Command::Decompose { .. } => ("genus_basis", "decompose"),
            Command::Recompose { .. } => ("genus_basis", "recompose"),
            Command::Gv2pt { .. } => ("transforms", "gv2pt"),
            Command::Pt2gv { .. } => ("transforms", "pt2gv"),
            Command::Gv2gw { .. } => ("transforms", "gv2gw"),
            Command::Gw2gv { .. } => ("transforms", "gw2gv"),
            Command::LocalPt2gv { .. } => ("chow_local", "local-pt2gv"),
            Command::LocalGv2pt { .. } => ("chow_local", "local-gv2pt"),
            Command::Integrate { .. } => ("chow_local", "integrate"),
            Command::Perverse { .. } => ("perverse_euler", "perverse"),
            Command::Spectral { .. } => ("perverse_euler", "spectral"),
            Command::FlopCheck { .. } => ("flop_transform", "flop-check"),
            Command::Fixture { .. } => ("perverse_euler", "fixture"),
        }
    }
}

/// A computed result: the JSON document, its table rendering and, for
/// checks that ran but failed, the failure.
pub struct Report {
    pub json: Value,
    pub table: Vec<Vec<String>>,
    pub failure: Option<Error>,
}

impl Report {
    fn new(json: Value, table: Vec<Vec<String>>) -> Self {
        Report { json, table, failure: None }
    }
}

/// Parses `B` (total degree in rank `rank`) or `w1,...,wr:B`.
pub fn parse_cutoff(text: &str, rank: usize) -> Result<DegreeCutoff> {
    let bad = || Error::Parse(format!("cutoff {text:?} is neither B nor w1,...,wr:B"));
    match text.split_once(':') {
        None => DegreeCutoff::total_degree(rank, text.trim().parse().map_err(|_| bad())?),
        Some((w, b)) => {
            let weights = w
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            let cutoff = DegreeCutoff::new(weights, b.trim().parse().map_err(|_| bad())?)?;
            if cutoff.rank() != rank {
                return Err(Error::RankMismatch { left: rank, right: cutoff.rank() });
            }
            Ok(cutoff)
        }
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    io::parse_json(&text)
}

fn genus_rows(v: &GenusVector) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["g".into(), "n".into()]];
    rows.extend(v.iter().map(|(g, n)| vec![g.to_string(), n.to_string()]));
    rows
}

fn invariants_summary(label: &str, v: &GenusVector) -> Vec<String> {
    let higher: num_bigint::BigUint = v.iter().filter(|(g, _)| *g >= 2).map(|(_, n)| n.magnitude().clone()).sum();
    vec![label.into(), v.get(0).to_string(), v.get(1).to_string(), higher.to_string()]
}

fn fixture_report(f: &Fixture) -> Result<(Value, Vec<String>)> {
    let invariants = f.invariants()?;
    let eval = f.datum.total().eval_minus_one()?;
    let behrend = f.strata.as_ref().map(|s| behrend_euler_check(s));
    let json = json!({
        "name": f.name,
        "datum": io::datum_to_json(&f.datum),
        "invariants": io::genus_to_json(&invariants),
        "eval_minus_one": format_rational(&eval),
        "strata": f.strata.as_deref().map(io::strata_to_json),
        "behrend": behrend,
    });
    Ok((json, invariants_summary(&f.name, &invariants)))
}

fn summary_header() -> Vec<String> {
    ["name", "n0", "n1", "sum |n_g|, g>=2"].map(String::from).to_vec()
}

#[allow(clippy::too_many_arguments)]
fn run_fixture(
    name: FixtureName,
    n: u32,
    mode: &str,
    ex: i64,
    es: i64,
    g: i64,
    nu: i64,
    window: i64,
    bound: i64,
) -> Result<Report> {
    match name {
        FixtureName::Enriques => {
            let all = fixtures::enriques_in(n)?;
            let chosen: Vec<&Fixture> = match mode {
                "all" => all.iter().collect(),
                "hst" | "kl" | "ours" => all.iter().filter(|f| f.name.eq_ignore_ascii_case(mode)).collect(),
                other => return Err(Error::Invalid(format!("unknown Enriques mode {other:?}"))),
            };
            let mut rows = vec![summary_header()];
            let mut out = Vec::new();
            for f in chosen {
                let (json, row) = fixture_report(f)?;
                out.push(json);
                rows.push(row);
            }
            Ok(Report::new(json!({"n": n, "rows": out}), rows))
        }
        FixtureName::Elliptic => {
            let f = fixtures::elliptic_fibration(ex, es)?;
            let (mut json, row) = fixture_report(&f)?;
            let (model, datum) = fixtures::elliptic_fiberwise(ex, es)?;
            let mut local = crate::chow::LocalGVTable::new();
            for (label, v) in gv_from_perverse(&datum)? {
                let cycle = model
                    .cycle_by_label(&label)
                    .ok_or_else(|| Error::OutsideModel(label.clone()))?
                    .clone();
                local.set_genus_vector(&cycle, &v)?;
            }
            json["fiberwise"] = json!({
                "model": io::model_to_json(&model),
                "local": io::local_table_to_json(&local),
                "integrated": io::gv_table_to_json(&integrate_table(&local, &model)?),
            });
            Ok(Report::new(json, vec![summary_header(), row]))
        }
        FixtureName::Nodal | FixtureName::Cusp | FixtureName::Smooth => {
            let f = match name {
                FixtureName::Nodal => fixtures::nodal_local()?,
                FixtureName::Cusp => fixtures::cusp_local()?,
                _ => fixtures::smooth_curve(g, nu)?,
            };
            let (mut json, row) = fixture_report(&f)?;
            json["pt_local"] = io::laurent_to_json(&pt_local_irreducible(&f.invariants()?, window)?);
            Ok(Report::new(json, vec![summary_header(), row]))
        }
        FixtureName::ConifoldFlop => {
            let fx = FlopFixture::conifold_pair(bound, window)?;
            Ok(Report::new(io::flop_to_json(&fx), vec![vec!["flop fixture".into(), "rank 2".into()]]))
        }
    }
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Decompose { input } => {
            let v = decompose_symmetric(&io::laurent_from_json(&read_json(input)?)?)?;
            Ok(Report::new(io::genus_to_json(&v), genus_rows(&v)))
        }
        Command::Recompose { input } => {
            let p = recompose(&io::genus_from_json(&read_json(input)?)?)?;
            Ok(Report::new(io::laurent_to_json(&p), vec![vec!["y".into(), p.to_string()]]))
        }
        Command::Gv2pt { input, cutoff, window, convention } => {
            let n = io::gv_table_from_json(&read_json(input)?)?;
            let cutoff = parse_cutoff(cutoff, n.rank())?;
            let hi = window.unwrap_or_else(|| resolving_window(&n, &cutoff));
            let z = pt_from_gv(&n, &cutoff, hi, *convention)?;
            Ok(Report::new(io::series_to_json(&z), series_rows(&z)))
        }
        Command::Pt2gv { input, gmax, convention } => {
            let z = io::series_from_json(&read_json(input)?)?;
            let n = gv_from_pt(&z, *gmax, *convention)?;
            Ok(Report::new(io::gv_table_to_json(&n), gv_rows(&n)))
        }
        Command::Gv2gw { input, cutoff, order } => {
            let n = io::gv_table_from_json(&read_json(input)?)?;
            let cutoff = parse_cutoff(cutoff, n.rank())?;
            let gw = gw_from_gv(&n, &cutoff, *order)?;
            let mut rows = vec![vec!["beta".into(), "g".into(), "GW".into()]];
            rows.extend(gw.iter().map(|(b, g, v)| vec![b.to_string(), g.to_string(), format_rational(v)]));
            Ok(Report::new(io::gw_table_to_json(&gw), rows))
        }
        Command::Gw2gv { input, cutoff, gmax } => {
            let gw = io::gw_table_from_json(&read_json(input)?)?;
            let cutoff = parse_cutoff(cutoff, gw.rank())?;
            let n = gv_from_gw(&gw, &cutoff, *gmax)?;
            Ok(Report::new(io::gv_table_to_json(&n), gv_rows(&n)))
        }
        Command::LocalPt2gv { input, model, gmax, convention } => {
            let model = io::model_from_json(&read_json(model)?)?;
            let p = io::function_from_json(&read_json(input)?, &model)?;
            let n = local_gv_from_pt(&p, &model, *gmax, *convention)?;
            Ok(Report::new(io::local_table_to_json(&n), local_rows(&n)))
        }
        Command::LocalGv2pt { input, model, window, convention } => {
            let model = io::model_from_json(&read_json(model)?)?;
            let n = io::local_table_from_json(&read_json(input)?)?;
            let hi = window.unwrap_or_else(|| local_resolving_window(&n, &model));
            let f = local_pt_from_gv(&n, &model, hi, *convention)?;
            let mut rows = vec![vec!["cycle".into(), "value".into()]];
            rows.extend(f.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| vec![c.to_string(), v.to_string()]));
            Ok(Report::new(io::function_to_json(&f), rows))
        }
        Command::Integrate { input, model } => {
            let model = io::model_from_json(&read_json(model)?)?;
            let value = read_json(input)?;
            if value.get("entries").is_some() {
                let n = integrate_table(&io::local_table_from_json(&value)?, &model)?;
                Ok(Report::new(io::gv_table_to_json(&n), gv_rows(&n)))
            } else {
                let f = io::function_from_json(&value, &model)?;
                let classes = integrate_function(&f, &model)?;
                let json = Value::Array(
                    classes
                        .iter()
                        .map(|(b, v)| json!({"beta": b.coords(), "value": io::laurent_to_json(v)}))
                        .collect(),
                );
                let mut rows = vec![vec!["beta".into(), "value".into()]];
                rows.extend(classes.iter().map(|(b, v)| vec![b.to_string(), v.to_string()]));
                Ok(Report::new(json, rows))
            }
        }
        Command::Perverse { input, mode } => {
            let value = read_json(input)?;
            let datum = if io::is_summand_table(&value) {
                assemble_datum(&io::summands_from_json(&value)?, *mode)?
            } else {
                io::datum_from_json(&value)?
            };
            let per_point = gv_from_perverse(&datum)?;
            let total = decompose_symmetric(&datum.total())?;
            let mut rows = vec![summary_header()];
            let mut points = Vec::new();
            for (label, v) in &per_point {
                rows.push(invariants_summary(label, v));
                points.push(json!({"label": label, "invariants": io::genus_to_json(v)}));
            }
            rows.push(invariants_summary("total", &total));
            Ok(Report::new(
                json!({
                    "datum": io::datum_to_json(&datum),
                    "points": points,
                    "total": io::genus_to_json(&total),
                }),
                rows,
            ))
        }
        Command::Spectral { input } => {
            let page = io::page_from_json(&read_json(input)?)?;
            let e2 = e2_from_e1(&page)?;
            let mut rows = vec![vec!["i".into(), "j".into(), "dim E2".into()]];
            rows.extend(e2.iter().map(|(&(i, j), d)| vec![i.to_string(), j.to_string(), d.to_string()]));
            Ok(Report::new(io::e2_to_json(&e2), rows))
        }
        Command::FlopCheck { input } => {
            let fx = io::flop_from_json(&read_json(input)?)?;
            let report = flop_check(&fx)?;
            let class_list = |v: &[crate::series::CurveClass]| v.iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>();
            let json = json!({
                "holds": report.holds(),
                "residual": io::series_to_json(&report.residual),
                "unresolved": class_list(&report.unresolved),
                "off_cone": class_list(&report.off_cone),
            });
            let mut rows = vec![vec!["beta".into(), "residual".into()]];
            rows.extend(report.residual.terms().map(|(b, v)| vec![b.to_string(), v.to_string()]));
            rows.push(vec!["holds".into(), report.holds().to_string()]);
            Ok(Report { json, table: rows, failure: report.require_zero().err() })
        }
        Command::Fixture { name, n, mode, ex, es, g, nu, window, bound } => {
            run_fixture(*name, *n, mode, *ex, *es, *g, *nu, *window, *bound)
        }
    }
}

fn series_rows(z: &crate::series::GradedSeries) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["beta".into(), "coefficient".into()]];
    rows.extend(z.terms().map(|(b, v)| vec![b.to_string(), v.to_string()]));
    rows
}

fn gv_rows(n: &crate::transforms::GVTable) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["beta".into(), "g".into(), "n".into()]];
    rows.extend(n.iter().map(|(b, g, v)| vec![b.to_string(), g.to_string(), v.to_string()]));
    rows
}

fn local_rows(n: &crate::chow::LocalGVTable) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["cycle".into(), "g".into(), "n".into()]];
    rows.extend(n.iter().map(|(c, g, v)| vec![c.to_string(), g.to_string(), v.to_string()]));
    rows
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// The error object written on failure.
pub fn error_json(cli: &Cli, err: &Error) -> Value {
    let (module, operation) = cli.command.names();
    let module = if matches!(err, Error::Parse(_)) { "cli" } else { module };
    json!({
        "module": module,
        "operation": operation,
        "reason": err.to_string(),
        "location": err.location(),
    })
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_check_failure() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command and writes to the given streams.
/// Returns the process exit status.
pub fn main_with(args: impl IntoIterator<Item = String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let fail = |err: &Error, stderr: &mut dyn Write| {
        let _ = stderr.write_all(io::render_json(&error_json(&cli, err)).as_bytes());
        exit_code(err)
    };
    let report = match run(&cli) {
        Ok(report) => report,
        Err(err) => return fail(&err, stderr),
    };
    let text = match cli.format {
        Format::Json => io::render_json(&report.json),
        Format::Table => render_table(&report.table),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string())),
    };
    if let Err(err) = written {
        return fail(&err, stderr);
    }
    match &report.failure {
        Some(err) => fail(err, stderr),
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(
            std::iter::once("gvkit").chain(args.iter().copied()).map(String::from),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cutoff_syntax() {
        assert_eq!(parse_cutoff("4", 2).unwrap(), DegreeCutoff::total_degree(2, 4).unwrap());
        assert_eq!(parse_cutoff("1,2:6", 2).unwrap(), DegreeCutoff::new([1, 2], 6).unwrap());
        assert!(parse_cutoff("1,2:6", 1).is_err());
        assert!(parse_cutoff("x", 1).is_err());
    }

    #[test]
    fn enriques_fixture_table() {
        let (code, out, _) = call(&["fixture", "enriques", "--n", "3", "--format", "table"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["HST", "-24", "12", "0"]);
        assert_eq!(lines[2].split_whitespace().collect::<Vec<_>>(), ["KL", "0", "12", "0"]);
        assert_eq!(lines[3].split_whitespace().collect::<Vec<_>>(), ["ours", "0", "4", "0"]);
    }

    #[test]
    fn unknown_mode_is_a_validation_error() {
        let (code, _, err) = call(&["fixture", "enriques", "--mode", "other"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["module"], "perverse_euler");
        assert_eq!(v["operation"], "fixture");
    }
}
