//! Identity suites over a virtual immersion: axioms, fundamental equations,
//! locally-symmetric identities, Levi-Civita compatibility and rigidity.

pub mod checks;
pub mod config;
pub mod report;
pub mod rigidity;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

pub use checks::*;
pub use config::{FDConfig, NESTED_STEP_FACTOR, STEP_RANGE};
pub use report::{CheckRecord, VerificationReport};
pub use rigidity::{
    curvature_operator, equivalence_map, hat_connection, hat_omega, hat_omega_at, kernel_of_hat_omega,
    wedge, Equivalence, HatElement, KernelReport,
};

use crate::error::Result;
use crate::immersion::{fullness, omega0, random_isometry, ComposedImmersion, ImmersionKind, VirtualImmersion};
use crate::linalg::max_abs;
use crate::rng;
use crate::symmetric::SymmetricSpaceModel;

/// Tolerance for recovering a known isometry.
pub const UNIQUENESS_TOL: f64 = 1e-8;

/// Number of random isometries per rigidity check.
pub const RIGIDITY_TRIALS: usize = 20;

/// Step used for the coarse run of [`fd_convergence`]; the fine run halves it.
pub const CONVERGENCE_STEP: f64 = 1e-2;

/// Residuals below this are rounding noise and carry no convergence order.
pub const ROUNDOFF_FLOOR: f64 = 1e-9;

/// Admissible ratio of raw residuals when the step is halved.
pub const CONVERGENCE_RATIO: (f64, f64) = (2.5, 6.0);

type Imm<'a> = &'a dyn VirtualImmersion;

/// Algebraic checks applicable to `imm`.
pub fn algebraic_checks(imm: Imm, cfg: &FDConfig) -> Vec<CheckRecord> {
    let mut out = alloc::vec![
        verify_cartan_inclusions(imm, cfg),
        verify_jacobi(imm, cfg),
        verify_condition_a(imm, cfg),
        verify_ii_normal(imm, cfg),
        verify_weingarten(imm, cfg),
        verify_gauss(imm, cfg),
        verify_bianchi(imm, cfg),
        verify_pair_symmetry(imm, cfg),
        verify_ii_parity(imm, cfg),
    ];
    if imm.has_skew_ii() {
        out.push(verify_locsym_a(imm, cfg));
    }
    if imm.kind() == ImmersionKind::Canonical {
        out.push(verify_ii_equivariance(imm, cfg));
    }
    out
}

/// Finite-difference checks applicable to `imm`.
pub fn fd_checks(imm: Imm, cfg: &FDConfig) -> Vec<CheckRecord> {
    let (sign, sign_record) = verify_action_field_bracket_sign(imm, cfg);
    let mut out = alloc::vec![
        sign_record,
        verify_condition_b(imm, cfg, sign),
        verify_domega_normal_part(imm, cfg, sign),
        verify_levi_civita(imm, cfg),
        verify_ii_fd(imm, cfg),
        verify_shape_operator_fd(imm, cfg),
        verify_ricci(imm, cfg),
        verify_codazzi(imm, cfg),
        verify_locsym_c(imm, cfg),
        verify_curvature_fd(imm, cfg),
    ];
    if imm.has_skew_ii() {
        out.push(verify_locsym_b(imm, cfg));
        out.push(verify_hat_connection(imm, cfg));
    } else {
        out.push(verify_closedness(imm, cfg, sign));
    }
    if imm.kind() == ImmersionKind::Canonical {
        out.push(verify_action_field_derivative(imm, cfg));
    }
    out
}

/// Fullness, kernel characterization and rigidity recovery.
pub fn rigidity_checks(imm: Imm, cfg: &FDConfig) -> Vec<CheckRecord> {
    let label = space_label(imm);
    let v = imm.target_form().dim();
    let (_, spanned) = fullness(imm);
    let mut out = alloc::vec![CheckRecord::new(
        "fullness",
        "span(Omega(m) + II(m,m)) = V",
        &label,
        1,
        libm::fabs(v as f64 - spanned as f64),
        0.0,
    )];
    if !imm.has_skew_ii() {
        return out;
    }
    let (kernel, pairing, onto) = match kernel_of_hat_omega(imm) {
        Ok(k) => {
            let dim_gap = libm::fabs(k.dim as f64 - k.curvature_kernel_dim as f64);
            let pair_gap = libm::fabs(k.pairing_kernel_dim as f64 - k.curvature_kernel_dim as f64);
            (
                dim_gap.max(k.span_mismatch),
                pair_gap.max(k.pairing_mismatch),
                libm::fabs(k.target_dim as f64 - k.rank as f64),
            )
        }
        Err(_) => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
    };
    out.push(CheckRecord::new(
        "kernel_characterization",
        "ker Omega-hat = {(0,alpha) : R(alpha) = 0}",
        &label,
        1,
        kernel,
        cfg.tol_algebraic,
    ));
    out.push(CheckRecord::new(
        "kernel_pairing_reading",
        "R(alpha) = 0 as operator iff <R(alpha), .> = 0 on Lambda^2 m",
        &label,
        1,
        pairing,
        cfg.tol_algebraic,
    ));
    out.push(CheckRecord::new(
        "hat_omega_onto",
        "rank Omega-hat = dim V",
        &label,
        1,
        onto,
        0.0,
    ));
    let trials = cfg.samples.min(RIGIDITY_TRIALS);
    out.push(CheckRecord::new(
        "rigidity",
        "L Omega-hat_1 = Omega-hat_2 recovers iota for Omega_2 = iota Omega_1",
        &label,
        trials,
        rigidity_residual(imm, cfg, trials),
        UNIQUENESS_TOL,
    ));
    out
}

/// Worst of `‖L − ι‖∞`, the isometry defect and the point-dependence of `L`
/// over seeded random isometries `ι`.
pub fn rigidity_residual(imm: Imm, cfg: &FDConfig, trials: usize) -> f64 {
    let stream = rng::stream_id("rigidity");
    let mut worst = 0.0f64;
    for i in 0..trials as u64 {
        let s = rng::sub_seed(cfg.seed, stream, i);
        let iota = random_isometry(imm.target_form(), s, 0.5);
        let composed = ComposedImmersion::new(Box::new(imm), iota.clone());
        let r = match composed.and_then(|c| equivalence_map(imm, &c, 5, s)) {
            Ok(eq) => max_abs(&(&eq.l - &iota))
                .max(eq.isometry_residual)
                .max(eq.constancy_residual),
            Err(_) => f64::INFINITY,
        };
        if !(r <= worst) {
            worst = r;
        }
    }
    worst
}

/// Every applicable check on `imm`.
pub fn run_suite(imm: Imm, cfg: &FDConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut records = algebraic_checks(imm, cfg);
    records.extend(fd_checks(imm, cfg));
    records.extend(rigidity_checks(imm, cfg));
    Ok(VerificationReport::new(&space_label(imm), *cfg, records))
}

/// [`run_suite`] on the canonical immersion of `space`.
pub fn run_suite_for_space(space: &SymmetricSpaceModel, cfg: &FDConfig) -> Result<VerificationReport> {
    run_suite(&omega0(space), cfg)
}

/// Raw residual of one FD check at the coarse step and at half of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub name: String,
    pub coarse: f64,
    pub fine: f64,
    pub ratio: f64,
    /// Both residuals are below [`ROUNDOFF_FLOOR`]; no order is measurable.
    pub exact: bool,
}

impl ConvergenceRecord {
    pub fn pass(&self) -> bool {
        self.exact || (self.ratio >= CONVERGENCE_RATIO.0 && self.ratio <= CONVERGENCE_RATIO.1)
    }
}

/// Reruns every FD check without extrapolation at `h` and `h/2`.
pub fn fd_convergence(imm: Imm, cfg: &FDConfig) -> Result<Vec<ConvergenceRecord>> {
    let coarse_cfg = FDConfig {
        h: CONVERGENCE_STEP,
        richardson: false,
        ..*cfg
    };
    coarse_cfg.validate()?;
    let fine_cfg = FDConfig {
        h: CONVERGENCE_STEP * 0.5,
        ..coarse_cfg
    };
    let coarse = fd_checks(imm, &coarse_cfg);
    let fine = fd_checks(imm, &fine_cfg);
    Ok(coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| {
            let exact = c.max_residual < ROUNDOFF_FLOOR && f.max_residual < ROUNDOFF_FLOOR;
            ConvergenceRecord {
                name: c.name.clone(),
                coarse: c.max_residual,
                fine: f.max_residual,
                ratio: c.max_residual / f.max_residual,
                exact,
            }
        })
        .collect())
}
