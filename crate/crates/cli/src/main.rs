//! Command-line front end: config ingestion, spectral subcommands, and
//! machine-readable JSON/CSV reports.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 numerical failure.

mod output;
mod validate;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{fmt_g17, JsonWriter};
use starshell::extensions::{DefectSign, DefectSpinor};
use starshell::solver::{deficiency_indices, find_eigenvalues, sweep, SolverOptions};
use starshell::unitary::{build_vertex_unitary, deficiency_via_arc, eigenphases};
use starshell::{graph_from_json, StarGraph};
use std::io::Write;
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "starshell", version, about = "Spectra, deficiency indices and extension data for star-graph delta-shell couplings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// graph configuration JSON
    #[arg(long, global = true)]
    config: Option<String>,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
    /// report format where the command supports both
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// scan density per unit of the spectral parameter
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// residual tolerance for accepted roots
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// identity-defect threshold for multiplicity two
    #[arg(long = "mult-tol", global = true)]
    mult_tol: Option<f64>,
    /// seed for randomized validation suites
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the spin-orbit operator in a window
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        common: CommonOpts,
        /// window lower edge in lambda-tilde
        #[arg(long, default_value_t = -0.5)]
        lo: f64,
        /// window upper edge in lambda-tilde
        #[arg(long, default_value_t = 0.5)]
        hi: f64,
    },
    /// Deficiency indices of the planar Dirac operator
    Deficiency {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep a tied group of strengths and track index transitions
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        /// strengths to tie, e.g. "tau1" or "tau1,tau3"
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Cross-check the solver against the closed-form oracles
    Validate {
        #[command(flatten)]
        common: CommonOpts,
        /// run one suite only: ray | equal | opposite | three-sym | families
        #[arg(long)]
        suite: Option<String>,
        /// test hook: perturb computed values to force a failure
        #[arg(long, hide = true)]
        inject_perturbation: bool,
    },
    /// Vertex unitary, eigenphases and the arc count
    Unitary {
        #[command(flatten)]
        common: CommonOpts,
        /// include the matrix entries (row-major re/im pairs)
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Sample a defect spinor on an (r, theta) grid as CSV
    #[command(allow_negative_numbers = true)]
    Defect {
        #[command(flatten)]
        common: CommonOpts,
        /// eigenvalue lambda-tilde in [0, 1/2)
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value = "plus")]
        sign: String,
        /// basis index within the eigenspace (1-based)
        #[arg(long, default_value_t = 1)]
        basis: usize,
        #[arg(long, default_value_t = 0.1)]
        rmin: f64,
        #[arg(long, default_value_t = 10.0)]
        rmax: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 8)]
        ntheta: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CmdError {
    code: u8,
    message: String,
}

fn input_err(message: impl Into<String>) -> CmdError {
    CmdError { code: EXIT_INPUT, message: message.into() }
}

fn numeric_err(message: impl Into<String>) -> CmdError {
    CmdError { code: EXIT_NUMERIC, message: message.into() }
}

fn load_graph(common: &CommonOpts) -> Result<StarGraph, CmdError> {
    let path = common.config.as_ref().ok_or_else(|| input_err("--config is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {path}: {e}")))?;
    graph_from_json(&text).map_err(|e| input_err(e.to_string()))
}

fn solver_options(common: &CommonOpts) -> SolverOptions {
    let mut o = SolverOptions::default();
    if let Some(g) = common.grid {
        o.grid_per_unit = g;
    }
    if let Some(t) = common.tol {
        o.residual_tol = t;
    }
    if let Some(m) = common.mult_tol {
        o.mult_threshold = m;
    }
    o
}

fn emit(common: &CommonOpts, text: &str) -> Result<(), CmdError> {
    match &common.out {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| numeric_err(e.to_string()))?;
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input_err(format!("cannot write {path}: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CmdError> {
    match cli.command {
        Command::Spectrum { common, lo, hi } => cmd_spectrum(&common, lo, hi),
        Command::Deficiency { common } => cmd_deficiency(&common),
        Command::Sweep { common, param, from, to, steps } => {
            cmd_sweep(&common, &param, from, to, steps)
        }
        Command::Validate { common, suite, inject_perturbation } => {
            validate::cmd_validate(&common, suite.as_deref(), inject_perturbation)
        }
        Command::Unitary { common, dump_matrix } => cmd_unitary(&common, dump_matrix),
        Command::Defect { common, lambda, sign, basis, rmin, rmax, points, ntheta } => {
            cmd_defect(&common, lambda, &sign, basis, rmin, rmax, points, ntheta)
        }
    }
}

fn cmd_spectrum(common: &CommonOpts, lo: f64, hi: f64) -> Result<(), CmdError> {
    let g = load_graph(common)?;
    let opts = solver_options(common);
    let s = find_eigenvalues(&g, lo, hi, &opts).map_err(|e| numeric_err(e.to_string()))?;
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut w = JsonWriter::new();
            w.open_object();
            w.key("window");
            w.raw(&format!("[{},{}]", fmt_g17(s.window.0), fmt_g17(s.window.1)));
            w.key("total_with_multiplicity");
            w.raw(&s.total_with_multiplicity.to_string());
            w.key("records");
            w.open_array();
            for r in &s.records {
                w.array_item();
                w.open_object();
                w.key("lambda_tilde");
                w.num17(r.lambda_tilde);
                w.key("lambda");
                w.num17(r.lambda);
                w.key("multiplicity");
                w.raw(&r.multiplicity.to_string());
                w.key("residual");
                w.num17(r.residual);
                w.key("identity_defect");
                w.num17(r.identity_defect);
                w.key("boundary");
                w.raw(if r.boundary { "true" } else { "false" });
                w.close_object();
            }
            w.close_array();
            w.close_object();
            w.finish()
        }
        Format::Csv => {
            let mut t = String::from("lambda_tilde,lambda,multiplicity,residual,identity_defect,boundary\n");
            for r in &s.records {
                t.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    output::fmt_g12(r.lambda_tilde),
                    output::fmt_g12(r.lambda),
                    r.multiplicity,
                    output::fmt_g12(r.residual),
                    output::fmt_g12(r.identity_defect),
                    r.boundary
                ));
            }
            t
        }
    };
    emit(common, &text)
}

fn cmd_deficiency(common: &CommonOpts) -> Result<(), CmdError> {
    let g = load_graph(common)?;
    let opts = solver_options(common);
    let rep = deficiency_indices(&g, &opts).map_err(|e| numeric_err(e.to_string()))?;
    let mut w = JsonWriter::new();
    w.open_object();
    w.key("n_plus");
    w.raw(&rep.n_plus.to_string());
    w.key("n_minus");
    w.raw(&rep.n_minus.to_string());
    w.key("boundary_flags");
    w.open_array();
    for b in &rep.boundary {
        w.array_item();
        w.num17(*b);
    }
    w.close_array();
    w.key("eigenvalues");
    w.open_array();
    for r in rep.spectrum.interior() {
        w.array_item();
        w.raw(&format!("[{},{}]", fmt_g17(r.lambda_tilde), r.multiplicity));
    }
    w.close_array();
    w.close_object();
    emit(common, &w.finish())
}

fn parse_param(param: &str, n: usize) -> Result<Vec<usize>, CmdError> {
    let mut out = Vec::new();
    for piece in param.split(',') {
        let p = piece.trim();
        let idx: usize = p
            .strip_prefix("tau")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| input_err(format!("bad --param entry {p:?}: expected tauJ")))?;
        if idx == 0 || idx > n {
            return Err(input_err(format!("tau index {idx} outside 1..={n}")));
        }
        out.push(idx);
    }
    Ok(out)
}

fn cmd_sweep(
    common: &CommonOpts,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
) -> Result<(), CmdError> {
    if steps == 0 {
        return Err(input_err("--steps must be at least 1"));
    }
    if from > to {
        return Err(input_err("reversed range: --from must not exceed --to"));
    }
    let g = load_graph(common)?;
    let tied = parse_param(param, g.n_edges())?;
    let opts = solver_options(common);
    let values: Vec<f64> = if steps == 1 {
        vec![from]
    } else {
        (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect()
    };
    let table = sweep(&g, &tied, &values, &opts);
    let mut t = String::from("value,n,error,eigenvalues\n");
    for row in &table.rows {
        let n = row.n.map(|v| v.to_string()).unwrap_or_default();
        let err = row.error.clone().unwrap_or_default().replace(',', ";");
        let eigs = row
            .eigenvalues
            .iter()
            .map(|(lt, m)| format!("{}x{}", output::fmt_g12(*lt), m))
            .collect::<Vec<_>>()
            .join(";");
        t.push_str(&format!("{},{},{},{}\n", output::fmt_g12(row.value), n, err, eigs));
    }
    for (a, b, na, nb) in &table.transitions {
        t.push_str(&format!(
            "# transition: n {} -> {} between value {} and {}\n",
            na,
            nb,
            output::fmt_g12(*a),
            output::fmt_g12(*b)
        ));
    }
    emit(common, &t)
}

fn cmd_unitary(common: &CommonOpts, dump_matrix: bool) -> Result<(), CmdError> {
    let g = load_graph(common)?;
    let vu = build_vertex_unitary(&g);
    let phases = eigenphases(&vu).map_err(|e| numeric_err(e.to_string()))?;
    let arc_count: usize = phases.iter().filter(|p| p.on_arc).map(|p| p.multiplicity).sum();
    let symmetric = g.is_symmetric();
    let deficiency = if symmetric {
        Some(deficiency_via_arc(&g).map_err(|e| numeric_err(e.to_string()))?)
    } else {
        None
    };
    let mut w = JsonWriter::new();
    w.open_object();
    w.key("n_edges");
    w.raw(&g.n_edges().to_string());
    w.key("unitarity_defect");
    w.num17(vu.unitarity_defect);
    w.key("symmetric");
    w.raw(if symmetric { "true" } else { "false" });
    w.key("eigenphases");
    w.open_array();
    for p in &phases {
        w.array_item();
        w.open_object();
        w.key("theta");
        w.num17(p.theta);
        w.key("re");
        w.num17(p.z.re);
        w.key("im");
        w.num17(p.z.im);
        w.key("multiplicity");
        w.raw(&p.multiplicity.to_string());
        w.key("on_arc");
        w.raw(if p.on_arc { "true" } else { "false" });
        w.close_object();
    }
    w.close_array();
    w.key("arc_count");
    w.raw(&arc_count.to_string());
    w.key("deficiency_via_arc");
    match deficiency {
        Some((np, _)) => w.raw(&np.to_string()),
        None => w.raw("null"),
    }
    if !symmetric {
        w.key("note");
        w.raw("\"NotSymmetric: arc mapping not applicable for unequal sectors\"");
    }
    if dump_matrix {
        w.key("matrix");
        w.open_array();
        for row in vu.u.rows() {
            for z in row {
                w.array_item();
                w.raw(&format!("[{},{}]", fmt_g17(z.re), fmt_g17(z.im)));
            }
        }
        w.close_array();
    }
    w.close_object();
    emit(common, &w.finish())
}

#[allow(clippy::too_many_arguments)]
fn cmd_defect(
    common: &CommonOpts,
    lambda: f64,
    sign: &str,
    basis: usize,
    rmin: f64,
    rmax: f64,
    points: usize,
    ntheta: usize,
) -> Result<(), CmdError> {
    if !(0.0..0.5).contains(&lambda) {
        return Err(input_err(format!("lambda-tilde {lambda} outside [0, 1/2)")));
    }
    if !(rmin > 0.0 && rmax > rmin && points >= 2 && ntheta >= 1) {
        return Err(input_err("need rmin > 0, rmax > rmin, points >= 2, ntheta >= 1"));
    }
    let sign = match sign {
        "plus" => DefectSign::Plus,
        "minus" => DefectSign::Minus,
        other => return Err(input_err(format!("bad --sign {other:?}: plus or minus"))),
    };
    let g = load_graph(common)?;
    let opts = solver_options(common);
    // snap the request to an actual eigenvalue in [0, 1/2)
    let s = find_eigenvalues(&g, -0.01, 0.5, &opts).map_err(|e| numeric_err(e.to_string()))?;
    let nearest = s
        .interior()
        .filter(|r| r.lambda_tilde > -1e-9)
        .min_by(|a, b| {
            (a.lambda_tilde - lambda)
                .abs()
                .partial_cmp(&(b.lambda_tilde - lambda).abs())
                .unwrap()
        })
        .ok_or_else(|| input_err("no eigenvalue in [0, 1/2) for this configuration"))?;
    if (nearest.lambda_tilde - lambda).abs() > 1e-6 {
        return Err(input_err(format!(
            "lambda-tilde {lambda} is not an eigenvalue (nearest: {})",
            nearest.lambda_tilde
        )));
    }
    let lt = nearest.lambda_tilde.max(0.0);
    let spinor =
        DefectSpinor::new(&g, lt, basis, sign).map_err(|e| numeric_err(e.to_string()))?;
    let mut t = String::from("r,theta,re1,im1,re2,im2\n");
    let theta0 = g.omega(0);
    let span = 2.0 * std::f64::consts::PI;
    for i in 0..points {
        let r = rmin + (rmax - rmin) * i as f64 / (points - 1) as f64;
        for k in 0..ntheta {
            let theta = theta0 + span * k as f64 / ntheta as f64;
            let v = spinor.eval(r, theta).map_err(|e| numeric_err(e.to_string()))?;
            t.push_str(&format!(
                "{},{},{},{},{},{}\n",
                output::fmt_g12(r),
                output::fmt_g12(theta),
                output::fmt_g12(v[0].re),
                output::fmt_g12(v[0].im),
                output::fmt_g12(v[1].re),
                output::fmt_g12(v[1].im)
            ));
        }
    }
    emit(common, &t)
}
