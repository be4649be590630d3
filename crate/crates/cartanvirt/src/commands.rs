use cartanvirt_core::immersion::{check_invariance, deck_map, random_isometry};
use cartanvirt_core::linalg::max_abs;
use cartanvirt_core::verification::{
    equivalence_map, kernel_of_hat_omega, sectional_curvature_fd, space_label, sectional_curvature_gauss, UNIQUENESS_TOL,
};
use cartanvirt_core::{run_suite, ComposedImmersion, FDConfig, SymmetricSpaceModel, Vector, VerificationReport};
use serde::Serialize;

use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::output::{self, pass_word, ConfigJson, Real, ReportJson};
use crate::space::{self, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Parsed flags shared by the commands that take a space.
#[derive(Debug, Clone)]
pub struct Options {
    pub space: String,
    pub lambda: Option<Vec<f64>>,
    pub config: FDConfig,
    pub format: Format,
}

/// What a command prints and the status it exits with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn new(stdout: String, pass: bool) -> Self {
        Self {
            stdout,
            code: if pass { EXIT_PASS } else { EXIT_FAIL },
        }
    }
}

fn targets(opts: &Options) -> Result<Vec<Target>, CliError> {
    opts.config.validate()?;
    space::resolve(&opts.space, opts.lambda.as_deref())
}

pub fn list(format: Format) -> Outcome {
    let kinds = space::kinds();
    let stdout = match format {
        Format::Json => output::to_json(&kinds),
        Format::Text => kinds
            .iter()
            .map(|k| {
                format!(
                    "{}: lambda default {}, algebra {}, dim m = {}, dim g = {}, {} (shorthand {})\n",
                    k.shorthand.replace(":n", "(n)").replace(":r", "(r)"),
                    k.lambda_default,
                    k.algebra,
                    k.dim_m,
                    k.dim_g,
                    k.parameter,
                    k.shorthand
                )
            })
            .collect(),
    };
    Outcome::new(stdout, true)
}

/// Full suite over every resolved handle, merged into one report.
pub fn verify_report(opts: &Options) -> Result<VerificationReport, CliError> {
    let mut merged: Option<VerificationReport> = None;
    for t in targets(opts)? {
        let r = run_suite(t.handle.immersion(), &opts.config)?;
        merged = Some(match merged {
            Some(m) => m.merge(&r)?,
            None => r,
        });
    }
    Ok(merged.expect("resolve yields at least one space"))
}

pub fn verify(opts: &Options) -> Result<Outcome, CliError> {
    let report = verify_report(opts)?;
    let stdout = match opts.format {
        Format::Json => output::to_json(&ReportJson::from(&report)),
        Format::Text => output::report_text(&report),
    };
    Ok(Outcome::new(stdout, report.pass()))
}

#[derive(Debug, Serialize)]
pub struct PlaneRow {
    pub i: usize,
    pub j: usize,
    pub gauss: Real,
    pub fd: Real,
    pub difference: Real,
}

#[derive(Debug, Serialize)]
pub struct CurvatureTable {
    pub space: String,
    pub step: Real,
    pub tolerance: Real,
    pub planes: Vec<PlaneRow>,
    pub pass: bool,
}

/// `y` made `g`-orthonormal to `x`, both unit.
fn orthonormal_pair(s: &SymmetricSpaceModel, x: &Vector, y: &Vector) -> (Vector, Vector) {
    let x = x / s.metric(x, x).sqrt();
    let y = y - &x * s.metric(&x, y);
    let y = &y / s.metric(&y, &y).sqrt();
    (x, y)
}

pub fn curvature_table(t: &Target, cfg: &FDConfig) -> CurvatureTable {
    let imm = t.handle.immersion();
    let s = imm.space();
    let e = s.algebra().identity();
    let h = cfg.nested_step();
    let mut planes = Vec::new();
    for i in 0..s.dim_m() {
        for j in i + 1..s.dim_m() {
            let (x, y) = orthonormal_pair(s, &s.m_basis(i), &s.m_basis(j));
            let gauss = sectional_curvature_gauss(imm, &e, &x, &y);
            let fd = sectional_curvature_fd(imm, &e, &x, &y, h, cfg.richardson);
            planes.push(PlaneRow {
                i,
                j,
                gauss: Real(gauss),
                fd: Real(fd),
                difference: Real((gauss - fd).abs()),
            });
        }
    }
    let pass = planes.iter().all(|p| p.difference.0 <= cfg.tol_fd);
    CurvatureTable {
        space: space_label(imm),
        step: Real(h),
        tolerance: Real(cfg.tol_fd),
        planes,
        pass,
    }
}

pub fn curvature(opts: &Options) -> Result<Outcome, CliError> {
    let tables: Vec<CurvatureTable> = targets(opts)?.iter().map(|t| curvature_table(t, &opts.config)).collect();
    let pass = tables.iter().all(|t| t.pass);
    let stdout = match opts.format {
        Format::Json => output::to_json(&tables),
        Format::Text => {
            let mut out = String::new();
            for t in &tables {
                out.push_str(&format!("space: {}  fd step={}\n", t.space, t.step.text()));
                out.push_str(&format!("  {:<8} {:<24} {:<24} {}\n", "plane", "K_gauss", "K_fd", "difference"));
                for p in &t.planes {
                    out.push_str(&format!(
                        "  {:<8} {:<24} {:<24} {}\n",
                        format!("({},{})", p.i, p.j),
                        p.gauss.text(),
                        p.fd.text(),
                        p.difference.text()
                    ));
                }
                out.push_str(&format!("  {}\n", pass_word(t.pass)));
            }
            out
        }
    };
    Ok(Outcome::new(stdout, pass))
}

#[derive(Debug, Serialize)]
pub struct UniquenessRow {
    pub space: String,
    pub signature: (usize, usize),
    pub kernel_dim: usize,
    pub recovery_error: Real,
    pub isometry_residual: Real,
    pub constancy_residual: Real,
    pub tolerance: Real,
    pub pass: bool,
}

/// Recovers a seeded random isometry `ι` from `Ω₀` and `ι∘Ω₀`.
pub fn uniqueness_row(t: &Target, cfg: &FDConfig) -> Result<UniquenessRow, CliError> {
    let imm = t.handle.immersion();
    if !imm.has_skew_ii() {
        return Err(CliError::Usage(format!(
            "uniqueness needs a skew second fundamental form; {} is a classical embedding",
            imm.space().descriptor()
        )));
    }
    let kernel = kernel_of_hat_omega(imm)?;
    let iota = random_isometry(imm.target_form(), cfg.seed, 0.5);
    let composed = ComposedImmersion::new(Box::new(imm), iota.clone())?;
    let eq = equivalence_map(imm, &composed, cfg.samples.min(20), cfg.seed)?;
    let recovery = max_abs(&(&eq.l - &iota));
    let pass = [recovery, eq.isometry_residual, eq.constancy_residual]
        .iter()
        .all(|r| *r <= UNIQUENESS_TOL);
    Ok(UniquenessRow {
        space: space_label(imm),
        signature: imm.target_form().signature().pair(),
        kernel_dim: kernel.dim,
        recovery_error: Real(recovery),
        isometry_residual: Real(eq.isometry_residual),
        constancy_residual: Real(eq.constancy_residual),
        tolerance: Real(UNIQUENESS_TOL),
        pass,
    })
}

pub fn uniqueness(opts: &Options) -> Result<Outcome, CliError> {
    let rows = targets(opts)?
        .iter()
        .map(|t| uniqueness_row(t, &opts.config))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = rows.iter().all(|r| r.pass);
    let stdout = match opts.format {
        Format::Json => output::to_json(&rows),
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "space: {}\n  signature: ({},{})\n  kernel dim: {}\n  recovery error |L - iota|: {}\n  isometry residual: {}\n  constancy residual: {}\n  tolerance: {}\n  {}\n",
                    r.space,
                    r.signature.0,
                    r.signature.1,
                    r.kernel_dim,
                    r.recovery_error.text(),
                    r.isometry_residual.text(),
                    r.constancy_residual.text(),
                    r.tolerance.text(),
                    pass_word(r.pass)
                )
            })
            .collect(),
    };
    Ok(Outcome::new(stdout, pass))
}

#[derive(Debug, Serialize)]
pub struct InvarianceRow {
    pub space: String,
    pub config: ConfigJson,
    pub residual: Real,
    pub tolerance: Real,
    pub invariant: bool,
}

pub fn invariance_row(t: &Target, cfg: &FDConfig) -> Result<InvarianceRow, CliError> {
    let gamma = t
        .isometry
        .as_ref()
        .ok_or_else(|| CliError::Usage("invariance needs a space file with an \"isometry\" matrix".into()))?;
    let imm = t.handle.immersion();
    let dgamma = deck_map(imm.space(), gamma)?;
    let residual = check_invariance(imm, dgamma, cfg.samples, cfg.seed);
    Ok(InvarianceRow {
        space: space_label(imm),
        config: cfg.into(),
        residual: Real(residual),
        tolerance: Real(cfg.tol_algebraic),
        invariant: residual <= cfg.tol_algebraic,
    })
}

pub fn invariance(opts: &Options) -> Result<Outcome, CliError> {
    let rows = targets(opts)?
        .iter()
        .map(|t| invariance_row(t, &opts.config))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = rows.iter().all(|r| r.invariant);
    let stdout = match opts.format {
        Format::Json => output::to_json(&rows),
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "space: {}\n  samples: {}\n  residual: {}\n  tolerance: {}\n  invariant: {}\n",
                    r.space,
                    r.config.samples,
                    r.residual.text(),
                    r.tolerance.text(),
                    if r.invariant { "yes" } else { "no" }
                )
            })
            .collect(),
    };
    Ok(Outcome::new(stdout, pass))
}
