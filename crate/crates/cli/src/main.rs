//! Command line front end: validate model files, emit connection and Dirac
//! reports, inspect spinors, and run string-equation scans.
//!
//! Exit codes: 0 success, 1 semantic failure (a check failed), 2 input error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reductive_geom::clifford::SpinorRep;
use reductive_geom::dirac;
use reductive_geom::io;
use reductive_geom::lie::ReductiveModel;
use reductive_geom::models;
use reductive_geom::string_eq::{self, format_sig12, EquationTolerances};
use reductive_geom::tol::DEFAULT_TOL;

#[derive(Parser)]
#[command(
    name = "reductive-geom",
    about = "Invariant connections, cubic Dirac data and string-equation checks \
             on naturally reductive homogeneous spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ModelArgs {
    /// Builtin model name: jensen, chavel-ziller, su2, round-sphere
    #[arg(long)]
    builtin: Option<String>,
    /// Path to a model file (JSON)
    #[arg(long)]
    model: Option<PathBuf>,
    /// Builtin parameter, e.g. --param s=0.5 (repeatable)
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comparison tolerance (env REDUCTIVE_GEOM_TOL overrides the default)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every model invariant and print the residuals
    Validate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Connection, Dirac and holonomy report at one family parameter
    Report {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Family parameter t of the connection
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// String-equation residuals over a parameter grid
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// t grid: a:b:step or a comma-separated list
        #[arg(long = "t-grid")]
        t_grid: String,
        /// Parameter grid, e.g. --param-grid s=0.25:1:0.25 (repeatable)
        #[arg(long = "param-grid", value_name = "K=GRID")]
        param_grids: Vec<String>,
        /// Worker threads for the scan
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Constant spinors and the V4,2 spinor diagnostics
    Spinor {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    ExitCode::from(code)
}

/// Input-level errors exit with 2; semantic failures return Ok(1).
type AppResult<T> = Result<T, String>;

fn run(cli: Cli) -> AppResult<u8> {
    match cli.command {
        Command::Validate { model, output } => {
            let m = resolve_model(&model)?;
            let tol = effective_tol(&output)?;
            let report = m.validate_with_tol(tol);
            let text = match output.format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = report
                        .checks
                        .iter()
                        .map(|c| {
                            serde_json::json!({
                                "check": c.name,
                                "residual": c.residual,
                                "passed": c.passed,
                            })
                        })
                        .collect();
                    serde_json::to_string_pretty(&serde_json::json!({
                        "model": m.name,
                        "tol": tol,
                        "checks": rows,
                        "all_passed": report.all_passed(),
                    }))
                    .unwrap()
                }
                _ => {
                    let mut s = format!("model '{}' (dim {}, n {})\n", m.name, m.dim(), m.n());
                    for c in &report.checks {
                        s.push_str(&format!(
                            "  {:<26} {:<5} residual {}\n",
                            c.name,
                            if c.passed { "ok" } else { "FAIL" },
                            format_sig12(c.residual)
                        ));
                    }
                    s.push_str(if report.all_passed() {
                        "all checks passed\n"
                    } else {
                        "some checks FAILED\n"
                    });
                    s
                }
            };
            emit(&output, &text)?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Report { model, output, t } => {
            let m = resolve_model(&model)?;
            let report = io::full_report(&m, t).map_err(|e| e.to_string())?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap(),
                _ => render_report_text(&report),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Scan {
            model,
            output,
            t_grid,
            param_grids,
            jobs,
        } => {
            if model.model.is_some() {
                return Err("scan requires a builtin family (--builtin)".to_string());
            }
            let name = model
                .builtin
                .clone()
                .ok_or_else(|| "scan requires --builtin".to_string())?;
            let base = parse_params(&model.params)?;
            let t_values = parse_grid(&t_grid)?;
            if t_values.is_empty() {
                return Err("empty t grid".to_string());
            }
            let mut grids: Vec<(String, Vec<f64>)> = Vec::new();
            for g in &param_grids {
                let (k, spec) = g
                    .split_once('=')
                    .ok_or_else(|| format!("bad --param-grid '{g}', expected k=a:b:step"))?;
                grids.push((k.to_string(), parse_grid(spec)?));
            }
            let tol = match output.tol {
                Some(v) if v > 0.0 => EquationTolerances::uniform(v),
                Some(_) => return Err("tolerance must be positive".to_string()),
                None => match std::env::var("REDUCTIVE_GEOM_TOL") {
                    Ok(env) => {
                        let v: f64 = env
                            .parse()
                            .map_err(|_| "bad REDUCTIVE_GEOM_TOL value".to_string())?;
                        if !(v > 0.0) {
                            return Err("REDUCTIVE_GEOM_TOL must be positive".to_string());
                        }
                        EquationTolerances::uniform(v)
                    }
                    Err(_) => EquationTolerances::default(),
                },
            };
            let report = string_eq::scan(
                |point| {
                    let mut merged = base.clone();
                    for (k, v) in point {
                        merged.insert(k.clone(), *v);
                    }
                    io::builtin_model(&name, &merged)
                },
                &grids,
                &t_values,
                &tol,
                jobs,
            );
            let all_failed =
                !report.rows.is_empty() && report.rows.iter().all(|r| r.error.is_some());
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap(),
                _ => report.to_csv(),
            };
            emit(&output, &text)?;
            Ok(if all_failed { 1 } else { 0 })
        }
        Command::Spinor { model, output } => {
            let m = resolve_model(&model)?;
            let text = spinor_report(&m, &output)?;
            emit(&output, &text)?;
            Ok(0)
        }
    }
}

fn resolve_model(args: &ModelArgs) -> AppResult<ReductiveModel> {
    match (&args.builtin, &args.model) {
        (Some(_), Some(_)) => Err("--builtin and --model are mutually exclusive".to_string()),
        (Some(name), None) => {
            let params = parse_params(&args.params)?;
            io::builtin_model(name, &params).map_err(|e| e.to_string())
        }
        (None, Some(path)) => io::load_model_path(path).map_err(|e| e.to_string()),
        (None, None) => Err("one of --builtin or --model is required".to_string()),
    }
}

fn parse_params(entries: &[String]) -> AppResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for e in entries {
        let (k, v) = io::parse_param_assignment(e)?;
        out.insert(k, v);
    }
    Ok(out)
}

fn parse_grid(spec: &str) -> AppResult<Vec<f64>> {
    io::parse_grid_spec(spec)
}

fn effective_tol(output: &OutputArgs) -> AppResult<f64> {
    if let Some(t) = output.tol {
        if !(t > 0.0) {
            return Err("tolerance must be positive".to_string());
        }
        return Ok(t);
    }
    if let Ok(env) = std::env::var("REDUCTIVE_GEOM_TOL") {
        let t: f64 = env
            .parse()
            .map_err(|_| "bad REDUCTIVE_GEOM_TOL value".to_string())?;
        if !(t > 0.0) {
            return Err("REDUCTIVE_GEOM_TOL must be positive".to_string());
        }
        return Ok(t);
    }
    Ok(DEFAULT_TOL)
}

fn emit(output: &OutputArgs, text: &str) -> AppResult<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_report_text(r: &io::FullReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("model '{}' (n = {})", r.model, r.n));
    if !r.params.is_empty() {
        let ps: Vec<String> = r
            .params
            .iter()
            .map(|(k, v)| format!("{k} = {}", format_sig12(*v)))
            .collect();
        s.push_str(&format!("  [{}]", ps.join(", ")));
    }
    s.push('\n');
    let c = &r.connection;
    s.push_str(&format!("connection t = {}\n", format_sig12(c.t)));
    s.push_str(&format!(
        "  torsion is 3-form: {}   nonzero components:\n",
        c.torsion_is_three_form
    ));
    for e in &c.torsion {
        s.push_str(&format!(
            "    T({},{},{}) = {}\n",
            e.indices[0],
            e.indices[1],
            e.indices[2],
            format_sig12(e.value)
        ));
    }
    s.push_str("  ricci:\n");
    for row in &c.ricci {
        let cells: Vec<String> = row.iter().map(|v| format_sig12(*v)).collect();
        s.push_str(&format!("    [{}]\n", cells.join(", ")));
    }
    s.push_str(&format!("  scalar curvature  {}\n", format_sig12(c.scalar)));
    s.push_str(&format!("  holonomy dim      {}\n", c.holonomy_dim));
    s.push_str(&format!(
        "  self-adjointness residual {}\n",
        format_sig12(c.self_adjointness_residual)
    ));
    s.push_str(&format!(
        "dirac square scalars: h-part {}  m-part {}  first-order coeff {}\n",
        format_sig12(r.kp.scalar_h_part),
        format_sig12(r.kp.scalar_m_part),
        format_sig12(r.kp.first_order_coeff)
    ));
    s.push_str(&format!(
        "  scalar at t = 1/3: {}   rho_g^2 {}  rho_h^2 {}\n",
        format_sig12(r.kp.kp_scalar_third),
        format_sig12(r.kp.rho_g_sq),
        format_sig12(r.kp.rho_h_sq)
    ));
    s.push_str(&format!(
        "  degree-4 element max coefficient {}\n",
        format_sig12(r.kp.degree4.max_abs_coeff())
    ));
    s.push_str(&format!(
        "constant spinors: {}   eigenvalue bound {} (certified: {:?}, equality possible: {})\n",
        r.constant_spinor_dim,
        format_sig12(r.eigenvalue_bound.bound),
        r.eigenvalue_bound.omega_certification,
        r.eigenvalue_bound.equality_possible
    ));
    for f in &r.flags {
        s.push_str(&format!("flag: {f:?}\n"));
    }
    s
}

fn spinor_report(m: &ReductiveModel, output: &OutputArgs) -> AppResult<String> {
    let is_v42 = m.n() == 5 && (m.name == "jensen" || m.name == "chavel-ziller");
    let rep = if is_v42 {
        models::spin_fixture_dim5()
    } else {
        SpinorRep::generated(m.n()).map_err(|e| e.to_string())?
    };
    let fixed = dirac::constant_spinors(m, &rep).map_err(|e| e.to_string())?;
    let mut json = serde_json::json!({
        "model": m.name,
        "constant_spinor_dim": fixed.len(),
    });
    let mut text = format!(
        "model '{}': constant spinor space has dimension {}\n",
        m.name,
        fixed.len()
    );
    if is_v42 {
        let (plus, minus) = models::fixture_spinor_pair();
        let (conn, _) = models::contact_connection(m).map_err(|e| e.to_string())?;
        let mut parallel_residual: f64 = 0.0;
        for psi in [&plus, &minus] {
            for i in 0..m.n() {
                let mut z = vec![0.0; m.n()];
                z[i] = 1.0;
                let d = dirac::spinor_covariant_derivative_with_map(m, &rep, &conn, &z, psi)
                    .map_err(|e| e.to_string())?;
                parallel_residual = parallel_residual.max(d.norm());
            }
        }
        let killing_plus =
            models::killing_spinor_check(m, &rep, &plus, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let killing_minus = models::killing_spinor_check(m, &rep, &minus, DEFAULT_TOL)
            .map_err(|e| e.to_string())?;
        text.push_str(&format!(
            "contact connection parallel residual (both spinors): {}\n",
            format_sig12(parallel_residual)
        ));
        text.push_str(&format!(
            "killing spinor check +: {} (mu = {}, residual {})\n",
            killing_plus.is_killing,
            killing_plus
                .mu
                .map(format_sig12)
                .unwrap_or_else(|| "-".to_string()),
            format_sig12(killing_plus.residual)
        ));
        text.push_str(&format!(
            "killing spinor check -: {} (mu = {}, residual {})\n",
            killing_minus.is_killing,
            killing_minus
                .mu
                .map(format_sig12)
                .unwrap_or_else(|| "-".to_string()),
            format_sig12(killing_minus.residual)
        ));
        json["contact_parallel_residual"] = serde_json::json!(parallel_residual);
        json["killing_plus"] = serde_json::json!({
            "is_killing": killing_plus.is_killing,
            "mu": killing_plus.mu,
            "residual": killing_plus.residual,
        });
        json["killing_minus"] = serde_json::json!({
            "is_killing": killing_minus.is_killing,
            "mu": killing_minus.mu,
            "residual": killing_minus.residual,
        });
    }
    Ok(match output.format {
        Format::Json => serde_json::to_string_pretty(&json).unwrap(),
        _ => text,
    })
}
