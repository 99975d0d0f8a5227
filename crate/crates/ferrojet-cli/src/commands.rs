use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ferrojet::coefficients::{region1, region2, region3, WaveType};
use ferrojet::magnetisation::{langevin_lambda_star, MagnetisationLaw};
use ferrojet::profiles::{eta_region1, eta_region2, eta_region3, Convention, Nonlinearity, Phase, WaveProfile};
use ferrojet::reduced::{
    kawahara_solve, nls_envelope, planar_homoclinic, Branch, HomoclinicOrbit, KawaharaOptions,
};
use ferrojet::spectrum::{classify, curve_range, sample_curve, Curve, ParameterPoint};
use ferrojet::verify::{
    basis_region1, basis_region2, basis_region3, chain_checks, domain_checks, normalisation_checks,
    pairing_checks, reversibility_check, taylor_coefficient_check, BasisSet, Check, CoefficientTag,
};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::config::{require, RunConfig};
use crate::csvio::{write_table, Table};
use crate::error::CliError;
use crate::svg;

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn emit_table(table: &Table, path: Option<&Path>) -> Result<(), CliError> {
    let mut out = sink(path)?;
    write_table(&mut out, table)?;
    out.flush()?;
    Ok(())
}

fn header(table: &mut Table, command: &str) {
    table.comment(format!("ferrojet {VERSION}"));
    table.comment(format!("command: {command}"));
}

pub fn curves(args: &CurvesArgs) -> Result<(), CliError> {
    if args.samples < 2 {
        return Err(CliError::Validation(format!("--samples must be at least 2, got {}", args.samples)));
    }
    let curve = match args.curve {
        CurveName::C1 => Curve::C1,
        CurveName::C2 => Curve::C2,
        CurveName::C3 => Curve::C3,
        CurveName::C4 => Curve::C4,
    };
    let range = curve_range(curve);
    let points = sample_curve(curve, args.samples, range)?;
    let mut table = Table::new(&["param", "beta0", "gamma0"]);
    header(&mut table, "curves");
    table.comment(format!("curve: {:?}", args.curve).to_lowercase());
    table.comment(format!("samples: {}", args.samples));
    table.comment(format!("param range: [{}, {}]", range.0, range.1));
    table.rows = points.iter().map(|(p, pt)| vec![*p, pt.beta0, pt.gamma0]).collect();
    emit_table(&table, args.common.out.as_deref())
}

pub fn classify_point(args: &ClassifyArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.common.config.as_deref())?;
    let beta0 = require(args.beta0.or(cfg.run.beta0), "beta0")?;
    let gamma0 = require(args.gamma0.or(cfg.run.gamma0), "gamma0")?;
    if !(beta0 > 0.0) {
        return Err(CliError::Validation(format!("--beta0 must be positive, got {beta0}")));
    }
    let report = classify(&ParameterPoint::new(beta0, gamma0))?;
    emit_json(&report, args.common.out.as_deref())
}

pub fn coeffs(args: &CoeffsArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.common.config.as_deref())?;
    let law = cfg.law(&args.law)?;
    let region = args
        .region
        .or(cfg.run.region)
        .ok_or_else(|| CliError::Validation("missing --region".into()))?;
    let warnings = law.warnings();
    let value = match region {
        RegionName::I | RegionName::ICubic => {
            let c = region1(require(args.beta0.or(cfg.run.beta0), "beta0")?, &law)?;
            json!({
                "region": "I",
                "coefficients": c,
                "predicates": {
                    "quadratic_wave": c.c_check != 0.0,
                    "cubic_pair": c.d_check > 0.0,
                },
                "warnings": warnings,
            })
        }
        RegionName::Ii | RegionName::IiCubic => {
            let c = region2(&law);
            json!({
                "region": "II",
                "coefficients": c,
                "predicates": {
                    "quadratic_wave": c.c1 != 0.0,
                    "cubic_pair": c.d1 != 0.0,
                },
                "not_cross_checked": ["d1", "c4_10", "c1_20", "c5"],
                "warnings": warnings,
            })
        }
        RegionName::Iii => {
            let c = region3(require(args.s.or(cfg.run.s), "s")?, &law)?;
            json!({
                "region": "III",
                "coefficients": c,
                "predicates": {
                    "c2_1_negative": c.c2_1 < 0.0,
                    "d4_positive": c.d4 > 0.0,
                    "envelope_wave": c.exists,
                },
                "not_cross_checked": ["d4"],
                "warnings": warnings,
            })
        }
    };
    emit_json(&value, args.common.out.as_deref())
}

fn law_label(law: &MagnetisationLaw) -> String {
    match law {
        MagnetisationLaw::Linear => "linear".into(),
        MagnetisationLaw::Langevin { lambda } => format!("langevin(lambda={lambda})"),
        MagnetisationLaw::Custom(_) => {
            let s = law.summary();
            format!("custom({})", serde_json::to_string(&s).unwrap_or_default())
        }
    }
}

struct SolveOutcome {
    profile: WaveProfile,
    orbit: HomoclinicOrbit,
    parameters: Vec<String>,
}

fn sign_branch(x: f64) -> Branch {
    if x >= 0.0 {
        Branch::Positive
    } else {
        Branch::Negative
    }
}

fn run_solve(args: &SolveArgs, cfg: &RunConfig, law: &MagnetisationLaw) -> Result<SolveOutcome, CliError> {
    let run = &cfg.run;
    let region = args
        .region
        .or(run.region)
        .ok_or_else(|| CliError::Validation("missing --region".into()))?;
    let mu = require(args.mu.or(run.mu), "mu")?;
    if !(mu > 0.0) {
        return Err(CliError::Validation(format!("--mu must be positive, got {mu}")));
    }
    let convention = match args.convention.or(run.convention) {
        Some(ConventionName::PaperLiteral) => Convention::PaperLiteral,
        _ => Convention::BasisConsistent,
    };
    let branch = match args.branch.or(run.branch) {
        Some(BranchName::Negative) => Branch::Negative,
        _ => Branch::Positive,
    };
    let kappa = args.kappa.or(run.kappa).unwrap_or(0.0);
    let mut parameters = vec![format!("mu: {mu}")];

    match region {
        RegionName::I | RegionName::ICubic => {
            let beta0 = require(args.beta0.or(run.beta0), "beta0")?;
            let c = region1(beta0, law)?;
            parameters.push(format!("beta0: {beta0}"));
            let (a, b, nonlinearity, br) = if region == RegionName::I {
                if c.c_check == 0.0 {
                    return Err(CliError::Numerical("c_check = 0: no quadratic solitary wave at this point".into()));
                }
                (c.c_check, 0.0, Nonlinearity::Quadratic, sign_branch(c.c_check))
            } else {
                parameters.push(format!("kappa_check: {kappa}"));
                (kappa, c.d_check, Nonlinearity::Cubic, branch)
            };
            parameters.push(format!("reduced system: Q'' = Q - ({a})Q^2 - ({b})Q^3"));
            let orbit = planar_homoclinic(a, b, br)?;
            let profile = eta_region1(&orbit, mu, beta0, nonlinearity, convention)?;
            Ok(SolveOutcome { profile, orbit, parameters })
        }
        RegionName::Ii | RegionName::IiCubic => {
            let delta = args.delta.or(run.delta).unwrap_or(0.0);
            let c = region2(law);
            let mut opts = KawaharaOptions { branch, ..KawaharaOptions::default() };
            if let Some(l) = args.half_length.or(run.half_length) {
                opts.half_length = l;
            }
            if let Some(n) = args.nodes.or(run.nodes) {
                opts.nodes = n;
            }
            parameters.push(format!("delta: {delta}"));
            let (a, b, nonlinearity) = if region == RegionName::Ii {
                (3.0 * c.c1, 0.0, Nonlinearity::Quadratic)
            } else {
                parameters.push(format!("kappa_check: {kappa}"));
                (kappa, 4.0 * c.d1, Nonlinearity::Cubic)
            };
            parameters.push(format!("reduced system: u'''' - 2(1+delta)u'' + u - ({a})u^2 - ({b})u^3 = 0"));
            let sol = kawahara_solve(delta, a, b, &opts)?;
            parameters.push(format!("newton steps (final stage): {}", sol.newton_trace.len()));
            parameters.push(format!("window half-length: {}", sol.half_length));
            let profile = eta_region2(&sol.orbit, mu, nonlinearity, convention)?;
            Ok(SolveOutcome { profile, orbit: sol.orbit, parameters })
        }
        RegionName::Iii => {
            let s = require(args.s.or(run.s), "s")?;
            let c = region3(s, law)?;
            let theta = match args.theta.or(run.theta) {
                Some(ThetaName::Pi) => Phase::Pi,
                _ => Phase::Zero,
            };
            parameters.push(format!("s: {s}"));
            parameters.push(format!("theta: {theta:?}").to_lowercase());
            parameters.push(format!("c2_1: {}", c.c2_1));
            parameters.push(format!("d4: {}", c.d4));
            let orbit = nls_envelope(mu, c.c2_1, c.d4)?;
            let profile = eta_region3(&orbit, s, theta)?;
            Ok(SolveOutcome { profile, orbit, parameters })
        }
    }
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.common.config.as_deref())?;
    let law = cfg.law(&args.law)?;
    let outcome = run_solve(args, &cfg, &law)?;
    let profile = &outcome.profile;
    if profile.wave_type == WaveType::Degenerate {
        return Err(CliError::Numerical("profile is identically zero".into()));
    }

    let mut table = Table::new(&["z", "eta"]);
    header(&mut table, "solve");
    table.comment(format!("region: {}", region_label(profile)));
    table.comment(format!("law: {}", law_label(&law)));
    for p in &outcome.parameters {
        table.comment(p.clone());
    }
    table.comment(format!("convention: {}", match profile.convention {
        ferrojet::profiles::Convention::BasisConsistent => "basis-consistent",
        ferrojet::profiles::Convention::PaperLiteral => "paper-literal",
    }));
    table.comment(format!("leading order profile; wave type: {:?}", profile.wave_type).to_lowercase());
    for w in law.warnings().iter().chain(&profile.warnings) {
        table.comment(format!("warning: {w}"));
    }
    table.rows = profile.z.iter().zip(&profile.eta).map(|(&z, &e)| vec![z, e]).collect();
    emit_table(&table, args.common.out.as_deref())?;

    if let Some(path) = &args.svg {
        let title = format!(
            "region {} leading-order {:?} wave",
            region_label(profile),
            profile.wave_type
        )
        .to_lowercase();
        std::fs::write(path, svg::polyline(&profile.z, &profile.eta, &title, "z", "eta"))?;
    }
    if let Some(path) = &args.orbit {
        emit_table(&orbit_table(&outcome.orbit), Some(path))?;
    }
    Ok(())
}

fn region_label(p: &WaveProfile) -> &'static str {
    use ferrojet::profiles::Region;
    match p.region {
        Region::I => "I",
        Region::ICubic => "I-cubic",
        Region::II => "II",
        Region::IICubic => "II-cubic",
        Region::III => "III",
    }
}

fn orbit_table(orbit: &HomoclinicOrbit) -> Table {
    let names = ["Z", "u", "u'", "u''", "u'''"];
    let cols = 2 + orbit.derivatives.len();
    let mut table = Table::new(&names[..cols.min(names.len())]);
    header(&mut table, "solve (reduced orbit)");
    table.comment(format!("system: {}", serde_json::to_string(&orbit.system).unwrap_or_default()));
    table.comment(format!("residual_norm: {:e}", orbit.residual_norm));
    table.comment(format!("energy_drift: {:e}", orbit.energy_drift));
    table.rows = (0..orbit.grid.len())
        .map(|i| {
            let mut row = vec![orbit.grid[i], orbit.u[i]];
            row.extend(orbit.derivatives.iter().take(names.len() - 2).map(|d| d[i]));
            row
        })
        .collect();
    table
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    suite: SuiteName,
    law: String,
    total: usize,
    failed: usize,
    all_pass: bool,
    checks: Vec<Check>,
}

fn bases() -> Result<Vec<BasisSet>, CliError> {
    let mut out = vec![basis_region1(0.5)?, basis_region1(1.0)?, basis_region2()];
    for s in [0.5, 1.0, 2.0] {
        out.push(basis_region3(s)?);
    }
    Ok(out)
}

fn taylor_suite(law: &MagnetisationLaw) -> Result<Vec<Check>, CliError> {
    let mut tags = Vec::new();
    for beta0 in [0.5, 1.0] {
        tags.push(CoefficientTag::IC1 { beta0 });
        tags.push(CoefficientTag::IC1_1 { beta0 });
    }
    tags.extend([CoefficientTag::IIC1, CoefficientTag::IIC1_01, CoefficientTag::IIC1_10]);
    for s in [0.5, 1.0, 2.0] {
        tags.push(CoefficientTag::IIIC2_1 { s });
        tags.push(CoefficientTag::IIITau1 { s });
    }
    let mut checks = Vec::new();
    for tag in tags {
        let t = taylor_coefficient_check(tag, law)?;
        let label = match tag {
            CoefficientTag::IC1 { beta0 } | CoefficientTag::IC1_1 { beta0 } => format!("{} beta0={beta0}", tag.name()),
            CoefficientTag::IIIC2_1 { s } | CoefficientTag::IIITau1 { s } => format!("{} s={s}", tag.name()),
            _ => tag.name().to_string(),
        };
        checks.push(if t.formula == 0.0 {
            Check::absolute(label, t.numeric, t.formula, 1e-8)
        } else {
            Check::relative(label, t.numeric, t.formula, 1e-5)
        });
    }
    Ok(checks)
}

/// Returns whether every check passed.
pub fn verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let cfg = RunConfig::load(args.common.config.as_deref())?;
    let law = cfg.law(&args.law)?;
    let mut checks = Vec::new();
    let suite = args.suite;
    let all = suite == SuiteName::All;
    for b in bases()? {
        if all || suite == SuiteName::Omega {
            checks.extend(pairing_checks(&b));
            checks.extend(normalisation_checks(&b));
        }
        if all || suite == SuiteName::Chains {
            checks.extend(chain_checks(&b)?);
            checks.extend(domain_checks(&b)?);
        }
        if all || suite == SuiteName::Reversibility {
            checks.extend(reversibility_check(&b)?);
        }
    }
    if all || suite == SuiteName::Taylor {
        checks.extend(taylor_suite(&law)?);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = VerifyReport {
        suite,
        law: law_label(&law),
        total: checks.len(),
        failed,
        all_pass: failed == 0,
        checks,
    };
    emit_json(&report, args.common.out.as_deref())?;
    Ok(failed == 0)
}

pub fn langevin_threshold(args: &ThresholdArgs) -> Result<(), CliError> {
    let lambda_star = langevin_lambda_star(args.alpha0)?;
    emit_json(&json!({ "alpha0": args.alpha0, "lambda_star": lambda_star }), args.common.out.as_deref())
}
