//! `cforge`: command-line front end for the cuspidal-edge toolkit.
//!
//! Subcommands read and write the JSON germ / curve-spec formats from
//! `cforge_core::io` and print deterministic JSON reports, so runs are
//! reproducible byte for byte.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cforge_core::curve::Branch;
use cforge_core::edge::{
    adapt_germ, edge_invariants, germ_orders, EdgeInvariants, ADAPT_TOL,
};
use cforge_core::io::{
    read_curve_spec, read_germ, write_csv, write_germ, write_obj, GermFile, MeshGrid,
};
use cforge_core::jet::{Jet1, JetVec3};
use cforge_core::pipeline::{
    deform_to_curve, isomer, kappa_nu_family, planar_normalization, verify_isometry,
    DeformationResult, VerificationReport,
};
use cforge_core::Error;

#[derive(Parser)]
#[command(name = "cforge", version, about = "cuspidal edge invariants and isometric deformations")]
struct Cli {
    #[command(flatten)]
    common: CommonOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// numerical tolerance for genericity / cuspidality verdicts
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// target certified total degree of reports and solves
    #[arg(long, global = true)]
    order: Option<usize>,
    /// suppress warnings and progress on stderr
    #[arg(long, global = true)]
    quiet: bool,
    /// TOML config file (keys: tol, order, quiet)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariant series of a germ (adapting coordinates first)
    Invariants {
        germ: PathBuf,
    },
    /// Rewrite a germ in adapted coordinates
    Adapt {
        germ: PathBuf,
        /// output germ file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isometrically deform a germ onto a new boundary curve
    Deform {
        germ: PathBuf,
        /// boundary curve spec file (explicit or intrinsic JSON)
        #[arg(long, conflicts_with_all = ["isomer", "planar", "family"])]
        curve: Option<PathBuf>,
        /// produce the isomer (same fundamental form and boundary image)
        #[arg(long)]
        isomer: bool,
        /// planar normalization: flatten the boundary torsion (s = 1)
        #[arg(long, conflicts_with = "isomer")]
        planar: bool,
        /// curvature family `s0:s1:n` (boundary curvature moved to kappa + s)
        #[arg(long, conflicts_with_all = ["isomer", "planar"])]
        family: Option<String>,
        /// solution branch, `+` or `-`
        #[arg(long, default_value = "+")]
        branch: String,
        /// output germ file, or file prefix for families
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the first fundamental forms of two germs
    Verify {
        germ_a: PathBuf,
        germ_b: PathBuf,
    },
    /// Sample a germ on a grid and export a mesh
    Mesh {
        germ: PathBuf,
        /// u range `a:b:n`
        #[arg(long, default_value = "-0.125:0.125:64")]
        u: String,
        /// v range `c:d:m`
        #[arg(long, default_value = "-0.25:0.25:64")]
        v: String,
        #[arg(long, default_value = "obj", value_parser = ["obj", "csv"])]
        format: String,
        /// output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Effective settings after merging flags > `CFORGE_*` environment >
/// config file > defaults.
struct Settings {
    tol: f64,
    order: usize,
    quiet: bool,
}

#[derive(Default, Deserialize)]
struct ConfigFile {
    tol: Option<f64>,
    order: Option<usize>,
    quiet: Option<bool>,
}

fn load_config(path: Option<&Path>) -> anyhow::Result<ConfigFile> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("reading config {}", p.display()))?,
        None => match std::fs::read_to_string("cforge.toml") {
            Ok(t) => t,
            Err(_) => return Ok(ConfigFile::default()),
        },
    };
    toml::from_str(&text).context("parsing config file")
}

fn env_parse<T: std::str::FromStr>(key: &str) -> anyhow::Result<Option<T>> {
    match std::env::var(key) {
        Ok(s) => s
            .parse()
            .map(Some)
            .map_err(|_| anyhow::anyhow!("cannot parse {key}={s}")),
        Err(_) => Ok(None),
    }
}

impl Settings {
    fn resolve(opts: &CommonOpts) -> anyhow::Result<Self> {
        let file = load_config(opts.config.as_deref())?;
        let tol = opts
            .tol
            .or(env_parse("CFORGE_TOL")?)
            .or(file.tol)
            .unwrap_or(ADAPT_TOL);
        let order = opts
            .order
            .or(env_parse("CFORGE_ORDER")?)
            .or(file.order)
            .unwrap_or(8);
        let quiet = opts.quiet
            || env_parse::<bool>("CFORGE_QUIET")?.unwrap_or(false)
            || file.quiet.unwrap_or(false);
        Ok(Self { tol, order, quiet })
    }
}

fn series(j: &Jet1) -> Vec<f64> {
    j.coeffs().to_vec()
}

#[derive(Serialize)]
struct InvariantsReport {
    u_order: usize,
    v_order: usize,
    kappa_s: Vec<f64>,
    kappa_nu: Vec<f64>,
    kappa_c: Vec<f64>,
    kappa: Option<Vec<f64>>,
    tau: Option<Vec<f64>>,
    generic: bool,
    cuspidal_edge: bool,
    /// max deviation of `kappa^2 - kappa_s^2 - kappa_nu^2` (should vanish)
    kappa_identity_dev: Option<f64>,
}

impl InvariantsReport {
    fn new(f: &JetVec3, inv: &EdgeInvariants, tol: f64) -> Self {
        let (uo, vo) = germ_orders(f);
        let identity = inv.kappa().map(|k| {
            let lhs = k.mul(k);
            let rhs = inv.kappa_s.mul(&inv.kappa_s).add(&inv.kappa_nu.mul(&inv.kappa_nu));
            lhs.sub(&rhs).max_abs()
        });
        Self {
            u_order: uo,
            v_order: vo,
            kappa_s: series(&inv.kappa_s),
            kappa_nu: series(&inv.kappa_nu),
            kappa_c: series(&inv.kappa_c),
            kappa: inv.kappa().map(series),
            tau: inv.tau().map(series),
            generic: inv.is_generic(tol),
            cuspidal_edge: inv.is_cuspidal_edge(tol),
            kappa_identity_dev: identity,
        }
    }
}

#[derive(Serialize)]
struct VerificationJson {
    branch: &'static str,
    compared_degree: usize,
    i_form_dev: f64,
    product_dev: f64,
    boundary_dev: f64,
    kappa_s_dev: f64,
    residual: f64,
    passed: bool,
}

impl VerificationJson {
    fn new(branch: Branch, v: &VerificationReport) -> Self {
        Self {
            branch: match branch {
                Branch::Plus => "+",
                Branch::Minus => "-",
            },
            compared_degree: v.compared_degree,
            i_form_dev: v.i_form_dev,
            product_dev: v.product_dev,
            boundary_dev: v.boundary_dev,
            kappa_s_dev: v.kappa_s_dev,
            residual: v.residual,
            passed: v.passed,
        }
    }
}

fn parse_branch(s: &str) -> anyhow::Result<Branch> {
    match s {
        "+" | "plus" => Ok(Branch::Plus),
        "-" | "minus" => Ok(Branch::Minus),
        other => bail!("branch must be + or -, got {other}"),
    }
}

/// Parses a `from:to:count` triple.
fn parse_range(s: &str) -> anyhow::Result<(f64, f64, usize)> {
    let parts: Vec<_> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("expected from:to:count, got {s}");
    }
    let from: f64 = parts[0].parse().with_context(|| format!("bad number {}", parts[0]))?;
    let to: f64 = parts[1].parse().with_context(|| format!("bad number {}", parts[1]))?;
    let count: usize = parts[2].parse().with_context(|| format!("bad count {}", parts[2]))?;
    Ok((from, to, count))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn warn(settings: &Settings, msg: &str) {
    if !settings.quiet {
        eprintln!("warning: {msg}");
    }
}

fn check_budget(settings: &Settings, f: &JetVec3) {
    let (uo, vo) = germ_orders(f);
    if uo < settings.order + vo {
        warn(
            settings,
            &format!(
                "u-order {uo} is below the budget {} for certified degree {}; \
                 deeper coefficients may be truncated",
                settings.order + vo,
                settings.order
            ),
        );
    }
}

fn family_outputs(
    results: &[(f64, DeformationResult)],
    out: Option<&Path>,
) -> anyhow::Result<Vec<serde_json::Value>> {
    let mut members = Vec::new();
    for (idx, (s, r)) in results.iter().enumerate() {
        let path = out.map(|p| {
            let mut name = p.as_os_str().to_owned();
            name.push(format!("_{idx}.json"));
            PathBuf::from(name)
        });
        if let Some(p) = &path {
            write_germ(p, &r.germ.f)?;
        }
        let inv = &r.result_invariants;
        members.push(serde_json::json!({
            "s": s,
            "file": path.as_ref().map(|p| p.display().to_string()),
            "kappa_nu_0": inv.kappa_nu.coeff(0),
            "kappa_c_kappa_nu_0": inv.kappa_c.coeff(0) * inv.kappa_nu.coeff(0),
            "boundary_tau_max": inv.tau().map(|t| t.max_abs()),
            "verification": serde_json::to_value(VerificationJson::new(r.branch, &r.verification))?,
        }));
    }
    Ok(members)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let settings = Settings::resolve(&cli.common)?;
    match cli.command {
        Command::Invariants { germ } => {
            let f = read_germ(&germ)?;
            let (adapted, _) = adapt_germ(&f)?;
            let inv = edge_invariants(&adapted.f)?;
            let report = InvariantsReport::new(&adapted.f, &inv, settings.tol);
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !inv.is_generic(settings.tol) {
                return Err(Error::NonGeneric.into());
            }
            Ok(true)
        }
        Command::Adapt { germ, out } => {
            let f = read_germ(&germ)?;
            let (adapted, _) = adapt_germ(&f)?;
            emit(&GermFile::from_germ(&adapted.f).to_json(), out.as_deref())?;
            Ok(true)
        }
        Command::Deform { germ, curve, isomer: want_isomer, planar, family, branch, out } => {
            let f = read_germ(&germ)?;
            check_budget(&settings, &f);
            let branch = parse_branch(&branch)?;
            if let Some(spec) = family {
                let (s0, s1, n) = parse_range(&spec)?;
                if n < 1 {
                    bail!("family needs at least one member");
                }
                let s_values: Vec<f64> = if n == 1 {
                    vec![s0]
                } else {
                    (0..n).map(|k| s0 + (s1 - s0) * k as f64 / (n - 1) as f64).collect()
                };
                let results = kappa_nu_family(&f, s_values)?;
                let members = family_outputs(&results, out.as_deref())?;
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "family": "kappa_nu",
                    "members": members,
                }))?);
                Ok(results.iter().all(|(_, r)| r.verification.passed))
            } else if planar {
                let results = planar_normalization(&f, branch, vec![1.0])?;
                let members = family_outputs(&results, out.as_deref())?;
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "family": "planar",
                    "members": members,
                }))?);
                Ok(results.iter().all(|(_, r)| r.verification.passed))
            } else {
                let result = if want_isomer {
                    isomer(&f)?
                } else {
                    let spec = curve.ok_or_else(|| {
                        anyhow::anyhow!("deform needs --curve, --isomer, --planar or --family")
                    })?;
                    let sigma = read_curve_spec(&spec)?;
                    deform_to_curve(&f, &sigma, branch)?
                };
                if let Some(p) = &out {
                    write_germ(p, &result.germ.f)?;
                } else {
                    println!("{}", GermFile::from_germ(&result.germ.f).to_json());
                }
                let report = VerificationJson::new(result.branch, &result.verification);
                println!("{}", serde_json::to_string_pretty(&report)?);
                Ok(result.verification.passed)
            }
        }
        Command::Verify { germ_a, germ_b } => {
            let a = read_germ(&germ_a)?;
            let b = read_germ(&germ_b)?;
            let (uo_a, vo_a) = germ_orders(&a);
            let (uo_b, vo_b) = germ_orders(&b);
            let degree = settings.order.min(uo_a + vo_a).min(uo_b + vo_b);
            let report = verify_isometry(&a, &b, degree)?;
            println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                "compared_degree": report.compared_degree,
                "e_dev": report.e_dev,
                "f_dev": report.f_dev,
                "g_dev": report.g_dev,
                "product_dev": report.product_dev,
                "boundary_dev": report.boundary_dev,
            }))?);
            Ok(report.i_form_dev() <= settings.tol)
        }
        Command::Mesh { germ, u, v, format, out } => {
            let f = read_germ(&germ)?;
            let (u_min, u_max, un) = parse_range(&u)?;
            let (v_min, v_max, vn) = parse_range(&v)?;
            if u_min.abs().max(u_max.abs()) > 1.0 || v_min.abs().max(v_max.abs()) > 1.0 {
                warn(&settings, "sample box extends past |u|,|v| = 1; truncation error may dominate");
            }
            let grid = MeshGrid {
                u_min,
                u_max,
                u_samples: un,
                v_min,
                v_max,
                v_samples: vn,
            };
            let mut buf = Vec::new();
            match format.as_str() {
                "obj" => write_obj(&mut buf, &f, &grid)?,
                _ => write_csv(&mut buf, &f, &grid)?,
            }
            emit(std::str::from_utf8(&buf)?, out.as_deref())?;
            Ok(true)
        }
    }
}

/// Exit codes: 2 parse / bad file, 3 not a cuspidal edge, 4 non-generic,
/// 5 curvature condition violated, 6 order budget exhausted, 1 a
/// verification gate failed.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NotDivisible(_))
        | Some(Error::DegenerateEdge(_))
        | Some(Error::NotAdapted(_))
        | Some(Error::DegenerateFrame)
        | Some(Error::DegenerateCurve(_)) => 3,
        Some(Error::NonGeneric) | Some(Error::GenericityViolated(_)) => 4,
        Some(Error::CurvatureTooSmall { .. }) | Some(Error::MatrixSingular(_)) => 5,
        Some(Error::BudgetExhausted { .. }) | Some(Error::ZeroBudget) => 6,
        Some(_) => 2,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
