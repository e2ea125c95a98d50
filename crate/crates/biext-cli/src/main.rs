//! Command-line frontend: period evaluation, zero-locus and splitting-locus
//! scans, Green tables, iterated-integral evaluation, and the verification
//! suite runner.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse/usage error,
//! 3 numerical non-convergence.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use biext::error::AnalyticError;
use biext::hodge::PeriodValue;
use biext::period::PeriodEvaluator;
use biext::pushforward::{splitting_locus_scan, PhiSpec};
use biext::registry::{ExprSpec, PathSpec};
use biext::surface::{Surface, SurfaceSpec};

mod verify;

#[derive(Parser)]
#[command(
    name = "biext",
    about = "Period mappings of real biextensions on punctured surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Ψ_p(q) in the {e_k, κ_a} coordinates
    ComputePeriod {
        #[arg(long)]
        surface: PathBuf,
        /// Base point p as "re,im"
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Evaluation point q as "re,im"
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan |Ψ_p| < tol over a grid; emits flagged cells and a verdict
    ScanZeroLocus {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        ///

        /// Grid size per axis (≥ 8)
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Region "x0,x1,y0,y1"
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        #[arg(long)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan |Ψ_V| = |base + Φ·Ψ_p| < tol for a monodromy Hodge map
    SplittingLocus {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// phi.json with rows, e_dim, kappa_dim, base_period
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long)]
        region: String,
        #[arg(long)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Push Ψ_p(q) through a monodromy Hodge map
    Pushforward {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit the Green function of a K-class on a grid as CSV
    GreensTable {
        #[arg(long)]
        surface: PathBuf,
        /// Normalisation point p as "re,im"
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Index of the K-basis element
        #[arg(long, default_value_t = 0)]
        kappa: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate an iterated-integral expression along a path
    Integrate {
        #[arg(long)]
        surface: PathBuf,
        /// expr.json naming forms by registry keys
        #[arg(long)]
        expr: PathBuf,
        /// path.json with the polyline vertices
        #[arg(long)]
        path: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the invariant suites and print pass/fail per property
    Verify {
        /// Suite name (all when absent)
        #[arg(long)]
        suite: Option<String>,
        /// Identity tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Finite-difference residual tolerance
        #[arg(long, default_value_t = 1e-4)]
        fd_tol: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            classify_error(&err)
        }
    };
    std::process::exit(code);
}

/// Map error chains onto the documented exit codes.
fn classify_error(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(AnalyticError::NonConvergence { .. }) = cause.downcast_ref::<AnalyticError>() {
            return 3;
        }
    }
    2
}

fn parse_complex(text: &str) -> anyhow::Result<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(anyhow!("expected \"re,im\", got {text:?}"));
    }
    Ok(Complex64::new(
        parts[0].trim().parse().context("real part")?,
        parts[1].trim().parse().context("imaginary part")?,
    ))
}

fn parse_region(text: &str) -> anyhow::Result<(f64, f64, f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(anyhow!("expected \"x0,x1,y0,y1\", got {text:?}"));
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse().context("region coordinate"))
        .collect::<anyhow::Result<_>>()?;
    Ok((v[0], v[1], v[2], v[3]))
}

fn load_surface(path: &PathBuf) -> anyhow::Result<Surface> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading surface file {}", path.display()))?;
    let spec: SurfaceSpec = serde_json::from_str(&text).context("parsing surface.json")?;
    Ok(spec.to_surface()?)
}

fn emit(output: &OutputArgs, content: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn scan_to_csv(scan: &biext::period::ScanResult, degenerate: Option<bool>) -> String {
    let mut out = String::from("i,j,re,im,norm\n");
    for cell in &scan.flagged {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            cell.i, cell.j, cell.center.re, cell.center.im, cell.norm
        ));
    }
    if let Some(true) = degenerate {
        out.push_str("degenerate,true\n");
    }
    out.push_str(if scan.nowhere_dense {
        "verdict,nowhere-dense\n"
    } else {
        "verdict,dense\n"
    });
    out
}


fn scan_to_json(scan: &biext::period::ScanResult, degenerate: Option<bool>) -> anyhow::Result<String> {
    let flagged: Vec<serde_json::Value> = scan
        .flagged
        .iter()
        .map(|c| {
            serde_json::json!({
                "i": c.i, "j": c.j, "re": c.center.re, "im": c.center.im, "norm": c.norm
            })
        })
        .collect();
    let mut body = serde_json::json!({
        "flagged": flagged,
        "nowhere_dense": scan.nowhere_dense,
    });
    if let Some(d) = degenerate {
        body["degenerate"] = serde_json::json!(d);
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&body)?))
}

fn labelled_vector(
    output: &OutputArgs,
    labels: &[String],
    values: &[f64],
    json_body: serde_json::Value,
) -> anyhow::Result<String> {
    match output.format.as_deref() {
        Some("csv") => {
            let mut out = String::from("label,value\n");
            for (l, v) in labels.iter().zip(values) {
                out.push_str(&format!("{l},{v}\n"));
            }
            Ok(out)
        }
        _ => Ok(format!("{}\n", serde_json::to_string_pretty(&json_body)?)),
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::ComputePeriod { surface, base, point, output } => {
            let s = load_surface(&surface)?;
            let p = parse_complex(&base)?;
            let q = parse_complex(&point)?;
            let eval = PeriodEvaluator::new(&s, p)?;
            let v = eval.psi(q)?;
            let m = eval.fiber.e_labels.len();
            let body = serde_json::json!({
                "e": &v[..m],
                "kappa": &v[m..],
            });
            let labels = eval.fiber.labels();
            emit(&output, &labelled_vector(&output, &labels, &v, body)?)?;
            Ok(0)
        }
        Command::ScanZeroLocus { surface, base, grid, region, tol, output } => {
            let s = load_surface(&surface)?;
            let p = parse_complex(&base)?;
            let region = parse_region(&region)?;
            if tol <= 0.0 {
                return Err(anyhow!("tolerance must be positive"));
            }
            if grid < 8 {
                return Err(anyhow!("grid size must be at least 8"));
            }
            let scan = biext::period::zero_locus_scan(&s, p, region, grid, tol)?;
            let text = match output.format.as_deref() {
                Some("json") => scan_to_json(&scan, None)?,
                _ => scan_to_csv(&scan, None),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::SplittingLocus { surface, base, phi, grid, region, tol, output } => {
            let s = load_surface(&surface)?;
            let p = parse_complex(&base)?;
            let region = parse_region(&region)?;
            if tol <= 0.0 {
                return Err(anyhow!("tolerance must be positive"));
            }
            if grid < 8 {
                return Err(anyhow!("grid size must be at least 8"));
            }
            let text = fs::read_to_string(&phi)
                .with_context(|| format!("reading {}", phi.display()))?;
            let spec: PhiSpec = serde_json::from_str(&text).context("parsing phi.json")?;
            let (map, base_period) = spec.to_map(&s)?;
            let res = splitting_locus_scan(&map, &base_period, &s, p, region, grid, tol)?;
            let text = match output.format.as_deref() {
                Some("json") => scan_to_json(&res.scan, Some(res.degenerate))?,
                _ => scan_to_csv(&res.scan, Some(res.degenerate)),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Pushforward { surface, base, point, phi, output } => {
            let s = load_surface(&surface)?;
            let p = parse_complex(&base)?;
            let q = parse_complex(&point)?;
            let text = fs::read_to_string(&phi)
                .with_context(|| format!("reading {}", phi.display()))?;
            let spec: PhiSpec = serde_json::from_str(&text).context("parsing phi.json")?;
            let (map, base_period) = spec.to_map(&s)?;
            let v: PeriodValue =
                biext::pushforward::pushforward_period(&map, &base_period, &s, p, q)?;
            let values = v.to_f64();
            let body = serde_json::json!({
                "labels": v.labels,
                "value": values,
            });
            emit(&output, &labelled_vector(&output, &v.labels, &values, body)?)?;
            Ok(0)
        }
        Command::GreensTable { surface, base, grid, kappa, output } => {
            let s = load_surface(&surface)?;
            let p = parse_complex(&base)?;
            if grid < 8 {
                return Err(anyhow!("grid size must be at least 8"));
            }
            let kb = biext::surface::k_space_basis(&s);
            let el = kb
                .elements
                .get(kappa)
                .ok_or_else(|| anyhow!("K index {kappa} out of range ({} classes)", kb.elements.len()))?;
            let x0 = s
                .base_puncture()
                .and_then(|pt| pt.finite())
                .ok_or_else(|| anyhow!("the surface needs a finite x₀"))?;
            let g = biext::greens::solve_green(&s, el, x0, p)?;
            let tau = s.tau.expect("torus surface");
            let mut csv = String::from("z_re,z_im,f\n");
            for j in 0..grid {
                for i in 0..grid {
                    let z = Complex64::new(i as f64 / grid as f64, 0.0)
                        + tau * (j as f64 / grid as f64);
                    // the singular node is omitted
                    match g.eval(z) {
                        Ok(v) => csv.push_str(&format!("{},{},{}\n", z.re, z.im, v)),
                        Err(_) => continue,
                    }
                }
            }
            emit(&output, &csv)?;
            Ok(0)
        }
        Command::Integrate { surface, expr, path, output } => {
            let s = load_surface(&surface)?;
            let expr_text = fs::read_to_string(&expr)
                .with_context(|| format!("reading {}", expr.display()))?;
            let expr_spec: ExprSpec =
                serde_json::from_str(&expr_text).context("parsing expr.json")?;
            let path_text = fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let path_spec: PathSpec =
                serde_json::from_str(&path_text).context("parsing path.json")?;
            let e = expr_spec.to_expr(&s)?;
            let pth = path_spec.to_path(&s)?;
            let v = biext::chen::iterated_integral(&e, &pth)?;
            let body = serde_json::json!({ "value": [v.re, v.im] });
            emit(&output, &format!("{}\n", serde_json::to_string_pretty(&body)?))?;
            Ok(0)
        }
        Command::Verify { suite, tol, fd_tol } => {
            if tol <= 0.0 || fd_tol <= 0.0 {
                return Err(anyhow!("tolerances must be positive"));
            }
            let ok = verify::run(suite.as_deref(), tol, fd_tol)?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_classification() {
        let nc: anyhow::Error = AnalyticError::NonConvergence { max_depth: 44, last_err: 1e-3 }.into();
        assert_eq!(classify_error(&nc), 3);
        let wrapped = nc.context("while integrating");
        assert_eq!(classify_error(&wrapped), 3);
        let other: anyhow::Error = AnalyticError::InvalidInput("bad".into()).into();
        assert_eq!(classify_error(&other), 2);
        let plain = anyhow!("some parse problem");
        assert_eq!(classify_error(&plain), 2);
    }

    #[test]
    fn complex_and_region_parsing() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert!(parse_complex("1.5").is_err());
        assert!(parse_complex("a,b").is_err());
        assert_eq!(parse_region("-2, 2,-1,1 ").unwrap(), (-2.0, 2.0, -1.0, 1.0));
        assert!(parse_region("1,2,3").is_err());
    }
}
