use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use diskops::operators::{
    composition_matrix, convergence_profile, isometry_defect_series, monomial_composition_norm,
    multiplication_matrix, operator_norm, ProfileKind, DEFAULT_PROFILE_CAP,
};
use diskops::pick::{pick_matrix, psd_check, KernelMode, PickProblem};
use diskops::report::{emit_reports, Value};
use diskops::spaces::{kernel_eval, norm_sq, sup_norm_default};
use diskops::suite::{exit_code, run_suite, Config, Suite};
use diskops::{BlaschkeProduct, OutputFormat, PowerSeries, Space};

/// Numerical checks for weighted Hilbert spaces of analytic functions on the disk.
///
/// Every global flag can also be set through an environment variable with the
/// `DISKOPS_` prefix, e.g. `DISKOPS_TRUNCATION=512`.
#[derive(Parser, Debug)]
#[command(name = "diskops", version)]
struct Cli {
    /// Truncation order N (matrices are (N+1)×(N+1)).
    #[arg(long, global = true, env = "DISKOPS_TRUNCATION", default_value_t = 256)]
    truncation: usize,
    #[arg(long, global = true, env = "DISKOPS_TOL", default_value_t = 1e-8)]
    tol: f64,
    /// Trapezoid nodes on the circle; a power of two ≥ 256.
    #[arg(long, global = true, env = "DISKOPS_QUAD_NODES", default_value_t = 4096)]
    quad_nodes: usize,
    #[arg(long, global = true, env = "DISKOPS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "DISKOPS_OUTPUT", default_value = "text", value_parser = parse_format)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named suite: kernels, constants, isometries, blaschke, pick, composition or all.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Norm of a series given as a JSON array of [re, im] pairs.
    Norm {
        #[arg(value_parser = parse_space)]
        space: Space,
        series: PathBuf,
    },
    /// Compression norms of M_f or C_φ, plus a doubling profile (up to N for C_φ).
    Opnorm {
        #[arg(value_parser = parse_space)]
        space: Space,
        kind: OpKind,
        series: PathBuf,
    },
    /// Reproducing kernel K_w(z). Complex numbers are written `0.3+0.2i`.
    Kernel {
        #[arg(value_parser = parse_space)]
        space: Space,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        w: Complex64,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
    /// m-th defect of M_ψ for a Blaschke product ψ on a few fixed probes.
    Isometry {
        #[arg(value_parser = parse_space)]
        space: Space,
        blaschke: PathBuf,
        m: usize,
    },
    /// Positivity of the Pick matrix of an interpolation problem.
    Pick { problem: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpKind {
    Mult,
    Comp,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: diskops::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: diskops::Error| e.to_string())
}

fn parse_space(s: &str) -> Result<Space, String> {
    s.parse().map_err(|e: diskops::Error| e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if let Some((re, im)) = t.split_once(',') {
        let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
        let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
        return Ok(Complex64::new(re, im));
    }
    t.parse::<Complex64>().map_err(|_| format!("cannot read `{s}` as a complex number"))
}

/// Output of the ad hoc subcommands: ordered label/value pairs.
#[derive(Default)]
struct Fields(Vec<(String, Field)>);

enum Field {
    Num(Value),
    Flag(bool),
    Text(String),
}

impl Fields {
    fn num(&mut self, label: impl Into<String>, v: impl Into<Value>) {
        self.0.push((label.into(), Field::Num(v.into())));
    }
    fn flag(&mut self, label: impl Into<String>, v: bool) {
        self.0.push((label.into(), Field::Flag(v)));
    }
    fn text(&mut self, label: impl Into<String>, v: impl Into<String>) {
        self.0.push((label.into(), Field::Text(v.into())));
    }

    fn emit(&self, format: OutputFormat, mut out: impl Write) -> io::Result<()> {
        match format {
            OutputFormat::Json => {
                let mut map = serde_json::Map::new();
                for (k, v) in &self.0 {
                    let j = match v {
                        Field::Num(x) => serde_json::to_value(x)?,
                        Field::Flag(b) => (*b).into(),
                        Field::Text(s) => s.clone().into(),
                    };
                    map.insert(k.clone(), j);
                }
                serde_json::to_writer_pretty(&mut out, &map)?;
                writeln!(out)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["label", "value"])?;
                for (k, v) in &self.0 {
                    w.write_record([k.as_str(), &v.render()])?;
                }
                w.flush()
            }
            OutputFormat::Text => {
                let width = self.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.0 {
                    writeln!(out, "{k:<width$}  {}", v.render())?;
                }
                Ok(())
            }
        }
    }
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(v) => v.format(),
            Field::Flag(b) => b.to_string(),
            Field::Text(s) => s.clone(),
        }
    }
}

fn read_series(path: &Path) -> diskops::Result<PowerSeries> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn norm(space: &Space, path: &Path) -> diskops::Result<Fields> {
    let f = read_series(path)?;
    let mut out = Fields::default();
    let sq = norm_sq(space, &f);
    out.text("space", space.name());
    out.num("norm", sq.sqrt());
    out.num("norm_sq", sq);
    out.num("sup_norm", sup_norm_default(&f));
    Ok(out)
}

fn opnorm(space: &Space, kind: OpKind, path: &Path, config: &Config) -> diskops::Result<Fields> {
    let f = read_series(path)?;
    let n = config.truncation;
    let mut out = Fields::default();
    out.text("space", space.name());
    let (matrix, profile_kind) = match kind {
        OpKind::Mult => (multiplication_matrix(space, &f, n), ProfileKind::Multiplication),
        OpKind::Comp => (composition_matrix(space, &f, n)?, ProfileKind::Composition),
    };
    out.text("operator", if matches!(kind, OpKind::Mult) { "multiplication" } else { "composition" });
    out.num("truncation", n);
    out.num("compression_norm", operator_norm(&matrix));
    if matches!(kind, OpKind::Mult) {
        out.num("sup_norm_lower_bound", sup_norm_default(&f));
    }
    // dense composition compressions get expensive quickly, so their profile
    // stops at the requested truncation
    let cap = match kind {
        OpKind::Mult => n.max(DEFAULT_PROFILE_CAP),
        OpKind::Comp => n,
    };
    match convergence_profile(space, profile_kind, &f, config.tol, cap) {
        Ok(p) => {
            out.num("converged_estimate", p.estimate);
            out.num("converged_at", p.order_used);
        }
        Err(e) => out.text("converged_estimate", format!("not converged: {e}")),
    }
    if let (OpKind::Comp, Some(k)) = (kind, f.degree()) {
        let monomial = k >= 1 && (0..k).all(|j| f.coeff(j) == Complex64::new(0.0, 0.0));
        if monomial {
            out.num("exact_norm", monomial_composition_norm(space, f.coeff(k), k)?);
        }
    }
    Ok(out)
}

fn kernel(space: &Space, w: Complex64, z: Complex64) -> diskops::Result<Fields> {
    let mut out = Fields::default();
    out.text("space", space.name());
    out.num("w", w);
    out.num("z", z);
    out.num("kernel", kernel_eval(space, w, z)?);
    Ok(out)
}

fn isometry(space: &Space, path: &Path, m: usize, config: &Config) -> diskops::Result<Fields> {
    let psi = BlaschkeProduct::from_json(&std::fs::read_to_string(path)?)?;
    let order = config.truncation;
    let symbol = psi.series(order);
    let probes = [("1", vec![1.0]), ("z", vec![0.0, 1.0]), ("1+z", vec![1.0, 1.0]), ("z^2", vec![0.0, 0.0, 1.0])];
    let mut out = Fields::default();
    out.text("space", space.name());
    out.num("m", m);
    out.num("truncation", order);
    let mut worst: f64 = 0.0;
    for (name, coeffs) in probes {
        let h = PowerSeries::from_real(&coeffs)?;
        let d = isometry_defect_series(space, &symbol, m, &h, order);
        worst = worst.max(d.abs());
        out.num(format!("defect[{name}]"), d);
    }
    out.num("max_abs_defect", worst);
    match space.shift_isometry_order() {
        Some(k) => out.num("shift_isometry_order", k),
        None => out.text("shift_isometry_order", "none"),
    }
    Ok(out)
}

fn pick(path: &Path) -> diskops::Result<Fields> {
    let problem = PickProblem::from_json(&std::fs::read_to_string(path)?)?;
    let v = psd_check(&pick_matrix(&problem, KernelMode::Auto)?)?;
    let mut out = Fields::default();
    out.text("space", problem.space.name());
    out.num("points", problem.nodes.len());
    out.num("min_eigenvalue", v.min_eigenvalue);
    out.num("matrix_scale", v.matrix_scale);
    out.flag("psd", v.is_psd);
    Ok(out)
}

fn run(cli: Cli) -> diskops::Result<ExitCode> {
    let config = Config {
        truncation: cli.truncation,
        tol: cli.tol,
        quad_nodes: cli.quad_nodes,
        seed: cli.seed,
        output: cli.output,
    };
    config.validate()?;
    let stdout = io::stdout().lock();
    let fields = match &cli.command {
        Command::Verify { suite } => {
            let reports = run_suite(*suite, &config)?;
            emit_reports(&reports, config.output, stdout)?;
            return Ok(if exit_code(&reports) == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Norm { space, series } => norm(space, series)?,
        Command::Opnorm { space, kind, series } => opnorm(space, *kind, series, &config)?,
        Command::Kernel { space, w, z } => kernel(space, *w, *z)?,
        Command::Isometry { space, blaschke, m } => isometry(space, blaschke, *m, &config)?,
        Command::Pick { problem } => pick(problem)?,
    };
    fields.emit(config.output, stdout)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
