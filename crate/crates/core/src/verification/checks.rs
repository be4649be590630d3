//! Individual identity checks. Each returns one [`CheckRecord`] with the
//! worst residual over `cfg.samples` seeded samples.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::config::FDConfig;
use super::report::CheckRecord;
use crate::fd;
use crate::immersion::{
    action_field, action_field_derivative_fd, shape_operator_raw, splitter_at, CanonicalImmersion,
    ImmersionKind, VirtualImmersion,
};
use crate::lie::GroupElement;
use crate::linalg::{max_abs_vec, Matrix, Vector};
use crate::rng;
use crate::symmetric::SymmetricSpaceModel;

type Imm<'a> = &'a dyn VirtualImmersion;

/// Label used in records: the space descriptor, plus the immersion kind
/// when it is not the canonical one.
pub fn space_label(imm: Imm) -> String {
    match imm.kind() {
        ImmersionKind::Canonical => imm.space().descriptor(),
        k => format!("{} [{}]", imm.space().descriptor(), k.name()),
    }
}

/// Worst value of `f` over `cfg.samples` seeded `(g, rng)` pairs.
fn sweep<F>(imm: Imm, cfg: &FDConfig, name: &str, mut f: F) -> f64
where
    F: FnMut(&GroupElement, &mut ChaCha8Rng) -> f64,
{
    let stream = rng::stream_id(name);
    let mut worst = 0.0f64;
    for i in 0..cfg.samples as u64 {
        let g = imm.space().random_group_element(rng::sub_seed(cfg.seed, stream, i));
        let mut r = rng::rng_for(cfg.seed, stream, i);
        let v = f(&g, &mut r);
        // NaN propagates as a failure
        if !(v <= worst) {
            worst = v;
        }
    }
    worst
}

/// Tolerance for checks that consume `II` without differentiating it.
fn ii_tol(imm: Imm, cfg: &FDConfig) -> f64 {
    if imm.numerical_ii() {
        cfg.tol_fd
    } else {
        cfg.tol_algebraic
    }
}

/// Step for derivatives of `II`: a numerical `II` already is a second
/// difference, so differentiating it is a nested stencil.
fn ii_step(imm: Imm, cfg: &FDConfig) -> f64 {
    if imm.numerical_ii() {
        cfg.nested_step()
    } else {
        cfg.h
    }
}

fn record(imm: Imm, cfg: &FDConfig, name: &str, anchor: &str, residual: f64, tol: f64) -> CheckRecord {
    CheckRecord::new(name, anchor, &space_label(imm), cfg.samples, residual, tol)
}

/// `Ad_g u` for a unit-scale random `u`, so that the action field has
/// unit-scale value and derivatives at `⟦g⟧`.
fn algebra_vector(space: &SymmetricSpaceModel, g: &GroupElement, r: &mut ChaCha8Rng) -> Vector {
    let u = rng::normal_vector(r, space.dim(), 1.0);
    space.algebra().conjugate(g.matrix(), g.inverse_matrix(), &u)
}

/// A field along a curve with prescribed value and first two covariant
/// derivatives in a parallel frame: `Y(t) = Y₀ + tY₁ + t²/2·Y₂`.
struct Probe {
    v0: Vector,
    v1: Vector,
    v2: Vector,
}

impl Probe {
    fn random(space: &SymmetricSpaceModel, r: &mut ChaCha8Rng) -> Self {
        Self::through(space.random_m_vector(r), space, r)
    }

    fn through(v0: Vector, space: &SymmetricSpaceModel, r: &mut ChaCha8Rng) -> Self {
        let v1 = space.random_m_vector(r);
        let v2 = space.random_m_vector(r);
        Self { v0, v1, v2 }
    }

    fn at(&self, t: f64) -> Vector {
        &self.v0 + &self.v1 * t + &self.v2 * (0.5 * t * t)
    }
}

fn geodesic(space: &SymmetricSpaceModel, g: &GroupElement, x: &Vector, t: f64) -> GroupElement {
    g.mul(&space.exp(&(x * t)))
}

/// `⟨II(X,Z),II(Y,W)⟩ − ⟨II(Y,Z),II(X,W)⟩`, the curvature 4-tensor through `II`.
pub fn gauss_tensor(imm: Imm, g: &GroupElement, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
    let form = imm.target_form();
    let ii = |a: &Vector, b: &Vector| imm.second_fundamental_form_raw(g, a, b);
    form.eval(&ii(x, z), &ii(y, w)) - form.eval(&ii(y, z), &ii(x, w))
}

/// Sectional curvature `−⟨R(X,Y)Y,X⟩/(|X|²|Y|² − ⟨X,Y⟩²)` from `II`.
pub fn sectional_curvature_gauss(imm: Imm, g: &GroupElement, x: &Vector, y: &Vector) -> f64 {
    let s = imm.space();
    -gauss_tensor(imm, g, x, y, y, x) / area2(s, x, y)
}

fn area2(s: &SymmetricSpaceModel, x: &Vector, y: &Vector) -> f64 {
    let xy = s.metric(x, y);
    s.metric(x, x) * s.metric(y, y) - xy * xy
}

/// `R(X,Y)Z` at `⟦g⟧` from `D^T = ∇`: with `f(s,t) = g·e^{sX}·e^{tY}` and the
/// field `⟦f, Z⟧`, which is parallel along every `t`-geodesic,
/// `R(X,Y)Z = ∇_t∇_s Z = (∂_t (∂_s Ω(Z))^T)^T`. Returned in algebra coordinates of `m`.
pub fn curvature_fd(
    imm: Imm,
    g: &GroupElement,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    h: f64,
    richardson: bool,
) -> Option<Vector> {
    let s = imm.space();
    let f = |a: f64, b: f64| g.mul(&s.exp(&(x * a))).mul(&s.exp(&(y * b)));
    let inner = |b: f64| -> Vector {
        let d = fd::derivative(|a| imm.omega_raw(&f(a, b), z), h, richardson);
        match splitter_at(imm, &f(0.0, b)) {
            Ok(sp) => sp.tangent_part(&d),
            Err(_) => Vector::from_element(d.len(), f64::NAN),
        }
    };
    let outer = fd::derivative(inner, h, richardson);
    let sp = splitter_at(imm, g).ok()?;
    Some(s.cartan().from_m_coords(&sp.tangent_coords(&outer)))
}

/// Sectional curvature `−g(R(X,Y)Y,X)/area²` through [`curvature_fd`].
pub fn sectional_curvature_fd(imm: Imm, g: &GroupElement, x: &Vector, y: &Vector, h: f64, richardson: bool) -> f64 {
    let s = imm.space();
    match curvature_fd(imm, g, x, y, y, h, richardson) {
        Some(r) => -s.metric(&r, x) / area2(s, x, y),
        None => f64::NAN,
    }
}

// ---------------------------------------------------------------- algebraic

pub fn verify_cartan_inclusions(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = s.cartan().inclusion_residuals(s.algebra());
    let worst = r.iter().cloned().fold(0.0, f64::max);
    record(imm, cfg, "cartan_inclusions", "[h,h] in h, [h,m] in m, [m,m] in h", worst, cfg.tol_algebraic)
}

pub fn verify_jacobi(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let r = imm.space().algebra().verify_jacobi();
    record(imm, cfg, "jacobi", "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0", r, cfg.tol_algebraic)
}

pub fn verify_condition_a(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let form = imm.target_form();
    let r = sweep(imm, cfg, "condition_a", |g, rng| {
        let x = s.random_m_vector(rng);
        let y = s.random_m_vector(rng);
        libm::fabs(form.eval(&imm.omega_raw(g, &x), &imm.omega_raw(g, &y)) - s.metric(&x, &y))
    });
    record(imm, cfg, "condition_a", "<Omega(X),Omega(Y)> = g(X,Y)", r, cfg.tol_algebraic)
}

/// Skewness of `II` for skew handles, symmetry for classical ones.
pub fn verify_ii_parity(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let skew = imm.has_skew_ii();
    let name = if skew { "ii_skew" } else { "ii_symmetric" };
    let r = sweep(imm, cfg, name, |g, rng| {
        let x = s.random_m_vector(rng);
        let y = s.random_m_vector(rng);
        let a = imm.second_fundamental_form_raw(g, &x, &y);
        let b = imm.second_fundamental_form_raw(g, &y, &x);
        max_abs_vec(&if skew { a + b } else { a - b })
    });
    let anchor = if skew { "II(X,Y) + II(Y,X) = 0" } else { "II(X,Y) - II(Y,X) = 0" };
    record(imm, cfg, name, anchor, r, ii_tol(imm, cfg))
}

pub fn verify_ii_normal(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let form = imm.target_form();
    let r = sweep(imm, cfg, "ii_normal", |g, rng| {
        let x = s.random_m_vector(rng);
        let y = s.random_m_vector(rng);
        let ii = imm.second_fundamental_form_raw(g, &x, &y);
        (0..s.dim_m())
            .map(|i| libm::fabs(form.eval(&ii, &imm.omega_raw(g, &s.m_basis(i)))))
            .fold(0.0, f64::max)
    });
    record(imm, cfg, "ii_normal", "<II(X,Y), Omega(Z)> = 0", r, cfg.tol_algebraic)
}

/// Canonical only: `II_{γg}(X,Y) = Ad_γ II_g(X,Y)`.
pub fn verify_ii_equivariance(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "ii_equivariance", |g, rng| {
        let gamma = s.exp(&rng::normal_vector(rng, s.dim(), 0.5));
        let x = s.random_m_vector(rng);
        let y = s.random_m_vector(rng);
        let lhs = imm.second_fundamental_form_raw(&gamma.mul(g), &x, &y);
        let ii = imm.second_fundamental_form_raw(g, &x, &y);
        let rhs = s.algebra().conjugate(gamma.matrix(), gamma.inverse_matrix(), &ii);
        max_abs_vec(&(lhs - rhs))
    });
    record(imm, cfg, "ii_equivariance", "II at [gamma g] = Ad_gamma II at [g]", r, cfg.tol_algebraic)
}

/// `n·Q·|Λ|^{-1/2}` from the eigendecomposition of the Gram matrix of `n`.
fn orthonormalize(imm: Imm, n: Matrix) -> Matrix {
    if n.ncols() == 0 {
        return n;
    }
    let eig = imm.target_form().restricted_gram(&n).symmetric_eigen();
    let scale = Matrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / libm::sqrt(libm::fabs(l))));
    n * eig.eigenvectors * scale
}

/// Frames of the normal blocks at `⟦g⟧`, each with `⟨η_i,η_j⟩ = ±δ_ij`.
fn unit_normal_blocks(imm: Imm, g: &GroupElement) -> Vec<Matrix> {
    let n = imm.normal_frame(g);
    let mut off = 0;
    let mut out = Vec::new();
    for k in imm.normal_blocks() {
        out.push(orthonormalize(imm, n.columns(off, k).into_owned()));
        off += k;
    }
    out
}

/// Normal frame at `⟦g⟧` with `⟨η_i,η_j⟩ = ±δ_ij`.
fn unit_normal_frame(imm: Imm, g: &GroupElement) -> Matrix {
    let blocks = unit_normal_blocks(imm, g);
    let cols: Vec<Vector> = blocks.iter().flat_map(|b| b.column_iter().map(|c| c.into_owned())).collect();
    if cols.is_empty() {
        Matrix::zeros(imm.target_form().dim(), 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

fn random_normal(imm: Imm, g: &GroupElement, rng: &mut ChaCha8Rng) -> Vector {
    let n = unit_normal_frame(imm, g);
    let c = rng::normal_vector(rng, n.ncols(), 1.0);
    n * c
}

/// `max_k |⟨v, η_k⟩|` over a unit normal frame: the normal part of `v`
/// measured against the target form.
fn normal_residual(imm: Imm, g: &GroupElement, v: &Vector) -> f64 {
    let n = unit_normal_frame(imm, g);
    let form = imm.target_form();
    n.column_iter()
        .map(|eta| libm::fabs(form.eval(v, &eta.into_owned())))
        .fold(0.0, f64::max)
}

pub fn verify_weingarten(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let form = imm.target_form();
    let r = sweep(imm, cfg, "weingarten", |g, rng| {
        let eta = random_normal(imm, g, rng);
        let x = s.random_m_vector(rng);
        let Ok(sx) = shape_operator_raw(imm, g, &eta, &x) else {
            return f64::INFINITY;
        };
        (0..s.dim_m())
            .map(|i| {
                let y = s.m_basis(i);
                let lhs = s.metric(&sx, &y);
                let rhs = form.eval(&imm.second_fundamental_form_raw(g, &x, &y), &eta);
                libm::fabs(lhs - rhs)
            })
            .fold(0.0, f64::max)
    });
    record(imm, cfg, "weingarten", "<S_eta X, Y> = <II(X,Y), eta>", r, cfg.tol_algebraic)
}

pub fn verify_gauss(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "gauss", |g, rng| {
        let v: Vec<Vector> = (0..4).map(|_| s.random_m_vector(rng)).collect();
        let lhs = s.metric(&s.curv(&v[0], &v[1], &v[2]), &v[3]);
        libm::fabs(lhs - gauss_tensor(imm, g, &v[0], &v[1], &v[2], &v[3]))
    });
    record(
        imm,
        cfg,
        "gauss",
        "<R(X,Y)Z,W> = <II(X,Z),II(Y,W)> - <II(Y,Z),II(X,W)>",
        r,
        ii_tol(imm, cfg),
    )
}

/// Skew handles only.
pub fn verify_locsym_a(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let form = imm.target_form();
    let r = sweep(imm, cfg, "locsym_a", |g, rng| {
        let v: Vec<Vector> = (0..4).map(|_| s.random_m_vector(rng)).collect();
        let lhs = form.eval(
            &imm.second_fundamental_form_raw(g, &v[0], &v[1]),
            &imm.second_fundamental_form_raw(g, &v[2], &v[3]),
        );
        libm::fabs(lhs - s.metric(&s.curv(&v[0], &v[1], &v[2]), &v[3]))
    });
    record(imm, cfg, "locsym_a", "<II(X,Y),II(Z,W)> = <R(X,Y)Z,W>", r, cfg.tol_algebraic)
}

pub fn verify_bianchi(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "bianchi", |_, rng| {
        let (x, y, z) = (s.random_m_vector(rng), s.random_m_vector(rng), s.random_m_vector(rng));
        max_abs_vec(&(s.curv(&x, &y, &z) + s.curv(&y, &z, &x) + s.curv(&z, &x, &y)))
    });
    record(imm, cfg, "bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", r, cfg.tol_algebraic)
}

pub fn verify_pair_symmetry(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "pair_symmetry", |_, rng| {
        let v: Vec<Vector> = (0..4).map(|_| s.random_m_vector(rng)).collect();
        let r4 = |a: usize, b: usize, c: usize, d: usize| s.metric(&s.curv(&v[a], &v[b], &v[c]), &v[d]);
        let base = r4(0, 1, 2, 3);
        libm::fabs(base + r4(1, 0, 2, 3))
            .max(libm::fabs(base - r4(2, 3, 0, 1)))
            .max(libm::fabs(base + r4(0, 1, 3, 2)))
    });
    record(
        imm,
        cfg,
        "pair_symmetry",
        "<R(X,Y)Z,W> = -<R(Y,X)Z,W> = -<R(X,Y)W,Z> = <R(Z,W)X,Y>",
        r,
        cfg.tol_algebraic,
    )
}

// ----------------------------------------------------------------------- FD

/// Determines `s` in `[X*,Y*] = s·[X,Y]*` from the flow commutator
/// `e^{-tY}e^{-tX}e^{tY}e^{tX}`, whose symmetrized second-order term at `⟦g⟧`
/// is the bracket of the action fields. Returns the sign and its record.
pub fn verify_action_field_bracket_sign(imm: Imm, cfg: &FDConfig) -> (f64, CheckRecord) {
    let s = imm.space();
    let alg = s.algebra();
    let mut votes = 0.0f64;
    let mut residual_plus = 0.0f64;
    let mut residual_minus = 0.0f64;
    sweep(imm, cfg, "action_field_bracket_sign", |g, rng| {
        let x = algebra_vector(s, g, rng);
        let y = algebra_vector(s, g, rng);
        let n = g.size();
        let est = |t: f64| -> Vector {
            let c = |t: f64| {
                let ex = s.exp(&(&x * t));
                let ey = s.exp(&(&y * t));
                ey.inverse().mul(&ex.inverse()).mul(&ey).mul(&ex)
            };
            let avg = (c(t).matrix() + c(-t).matrix()) * 0.5 - crate::linalg::Matrix::identity(n, n);
            let a = g.inverse_matrix() * avg * g.matrix() / (t * t);
            s.cartan().project_m(&alg.expand(&a).0)
        };
        let v = fd::extrapolate(est, cfg.nested_step(), cfg.richardson);
        let w = action_field(s, g, &alg.br(&x, &y));
        votes += s.metric(&v, &w);
        residual_plus = residual_plus.max(max_abs_vec(&(&v - &w)));
        residual_minus = residual_minus.max(max_abs_vec(&(&v + &w)));
        0.0
    });
    let (sign, r, anchor) = if votes < 0.0 {
        (-1.0, residual_minus, "[X*,Y*] = -[X,Y]*")
    } else {
        (1.0, residual_plus, "[X*,Y*] = +[X,Y]*")
    };
    (sign, record(imm, cfg, "action_field_bracket_sign", anchor, r, cfg.tol_fd))
}

/// `dΩ(X*,Y*) = D_{X*}Ω(Y*) − D_{Y*}Ω(X*) − Ω([X*,Y*])` at `⟦g⟧`.
fn d_omega(imm: Imm, cfg: &FDConfig, sign: f64, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
    let s = imm.space();
    let dxy = action_field_derivative_fd(imm, g, x, y, cfg.h, cfg.richardson);
    let dyx = action_field_derivative_fd(imm, g, y, x, cfg.h, cfg.richardson);
    let br = imm.omega_raw(g, &action_field(s, g, &s.algebra().br(x, y)));
    dxy - dyx - br * sign
}

pub fn verify_condition_b(imm: Imm, cfg: &FDConfig, sign: f64) -> CheckRecord {
    let s = imm.space();
    let form = imm.target_form();
    let r = sweep(imm, cfg, "condition_b", |g, rng| {
        let (x, y, z) = (algebra_vector(s, g, rng), algebra_vector(s, g, rng), algebra_vector(s, g, rng));
        let d = d_omega(imm, cfg, sign, g, &x, &y);
        libm::fabs(form.eval(&d, &imm.omega_raw(g, &action_field(s, g, &z))))
    });
    record(
        imm,
        cfg,
        "condition_b",
        "<dOmega(X,Y), Omega(Z)> = 0, dOmega(X,Y) = D_X Omega(Y) - D_Y Omega(X) - Omega([X,Y])",
        r,
        cfg.tol_fd,
    )
}

pub fn verify_domega_normal_part(imm: Imm, cfg: &FDConfig, sign: f64) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "domega_normal_part", |g, rng| {
        let (x, y) = (algebra_vector(s, g, rng), algebra_vector(s, g, rng));
        let d = d_omega(imm, cfg, sign, g, &x, &y);
        let (xs, ys) = (action_field(s, g, &x), action_field(s, g, &y));
        let expected = imm.second_fundamental_form_raw(g, &xs, &ys) - imm.second_fundamental_form_raw(g, &ys, &xs);
        normal_residual(imm, g, &(d - expected))
    });
    record(imm, cfg, "domega_normal_part", "dOmega(X,Y)^perp = II(X,Y) - II(Y,X)", r, cfg.tol_fd)
}

/// Classical handles: `dΩ = 0` entirely.
pub fn verify_closedness(imm: Imm, cfg: &FDConfig, sign: f64) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "closedness", |g, rng| {
        let (x, y) = (algebra_vector(s, g, rng), algebra_vector(s, g, rng));
        max_abs_vec(&d_omega(imm, cfg, sign, g, &x, &y))
    });
    record(imm, cfg, "closedness", "dOmega = 0", r, cfg.tol_fd)
}

/// Canonical handles: closed form of `D_{X*}Ω(Y*)` against central differences.
pub fn verify_action_field_derivative(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let canonical = CanonicalImmersion::new(s.clone());
    let r = sweep(imm, cfg, "action_field_derivative", |g, rng| {
        let (x, y) = (algebra_vector(s, g, rng), algebra_vector(s, g, rng));
        let fd = action_field_derivative_fd(imm, g, &x, &y, cfg.h, cfg.richardson);
        max_abs_vec(&(fd - canonical.action_field_derivative(g, &x, &y)))
    });
    record(
        imm,
        cfg,
        "action_field_derivative",
        "D_X* Omega(Y*) = Ad_g([Ad_g^-1 X, (Ad_g^-1 Y)_m] - (Ad_g^-1 [X,Y])_m)",
        r,
        cfg.tol_fd,
    )
}

/// Flat derivative of `Ω(Y(t))` along a geodesic with a probe field `Y`.
fn flat_derivative(imm: Imm, cfg: &FDConfig, g: &GroupElement, x: &Vector, p: &Probe) -> Vector {
    let s = imm.space();
    fd::derivative(|t| imm.omega_raw(&geodesic(s, g, x, t), &p.at(t)), cfg.h, cfg.richardson)
}

pub fn verify_levi_civita(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "levi_civita", |g, rng| {
        let x = s.random_m_vector(rng);
        let p = Probe::random(s, rng);
        let Ok(sp) = splitter_at(imm, g) else {
            return f64::INFINITY;
        };
        let d = flat_derivative(imm, cfg, g, &x, &p);
        max_abs_vec(&(sp.tangent_coords(&d) - s.cartan().m_coords(&p.v1)))
    });
    record(imm, cfg, "levi_civita", "(D_X Omega(Y))^T = Omega(nabla_X Y)", r, cfg.tol_fd)
}

pub fn verify_ii_fd(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "ii_fd", |g, rng| {
        let x = s.random_m_vector(rng);
        let p = Probe::random(s, rng);
        let d = flat_derivative(imm, cfg, g, &x, &p);
        normal_residual(imm, g, &(d - imm.second_fundamental_form_raw(g, &x, &p.v0)))
    });
    record(imm, cfg, "ii_fd", "II(X,Y) = (D_X Omega(Y))^perp", r, cfg.tol_fd)
}

/// Normal extension `p ↦ (η₀)^⊥_p` of a normal vector at one point.
fn normal_extension(imm: Imm, p: &GroupElement, eta0: &Vector) -> Vector {
    match splitter_at(imm, p) {
        Ok(sp) => sp.normal_part(eta0),
        Err(_) => Vector::from_element(eta0.len(), f64::NAN),
    }
}

pub fn verify_shape_operator_fd(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "shape_operator_fd", |g, rng| {
        let x = s.random_m_vector(rng);
        let eta = random_normal(imm, g, rng);
        let Ok(sp) = splitter_at(imm, g) else {
            return f64::INFINITY;
        };
        let Ok(sx) = shape_operator_raw(imm, g, &eta, &x) else {
            return f64::INFINITY;
        };
        let d = fd::derivative(
            |t| normal_extension(imm, &geodesic(s, g, &x, t), &eta),
            cfg.h,
            cfg.richardson,
        );
        max_abs_vec(&(sp.tangent_coords(&d) + s.cartan().m_coords(&sx)))
    });
    record(imm, cfg, "shape_operator_fd", "S_eta X = -(D_X eta)^T", r, cfg.tol_fd)
}

pub fn verify_ricci(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let form = imm.target_form();
    let (h, rich) = (cfg.nested_step(), cfg.richardson);
    let r = sweep(imm, cfg, "ricci", |g, rng| {
        let x = s.random_m_vector(rng);
        let y = s.random_m_vector(rng);
        let Ok(sp) = splitter_at(imm, g) else {
            return f64::INFINITY;
        };
        let f = |a: f64, b: f64| g.mul(&s.exp(&(&x * a))).mul(&s.exp(&(&y * b)));
        let normal_at = |p: &GroupElement, v: Vector| match splitter_at(imm, p) {
            Ok(sp) => sp.normal_part(&v),
            Err(_) => Vector::from_element(v.len(), f64::NAN),
        };
        let mut worst = 0.0f64;
        // both sides are skew in (eta, zeta) and vanish across blocks, so
        // only blocks of rank 2 or more carry content
        for block in unit_normal_blocks(imm, g).iter().filter(|b| b.ncols() >= 2) {
            let eta = block * rng::normal_vector(rng, block.ncols(), 1.0);
            let field = |a: f64, b: f64| normal_extension(imm, &f(a, b), &eta);
            // ∇^⊥_s η along t, then ∇^⊥_t η along s
            let ds = |b: f64| normal_at(&f(0.0, b), fd::derivative(|a| field(a, b), h, rich));
            let dt = |a: f64| normal_at(&f(a, 0.0), fd::derivative(|b| field(a, b), h, rich));
            let rperp = sp.normal_part(&(fd::derivative(ds, h, rich) - fd::derivative(dt, h, rich)));
            let (Ok(se_x), Ok(se_y)) = (shape_operator_raw(imm, g, &eta, &x), shape_operator_raw(imm, g, &eta, &y))
            else {
                return f64::INFINITY;
            };
            for zeta in block.column_iter().map(|c| c.into_owned()) {
                let (Ok(sz_x), Ok(sz_y)) = (
                    shape_operator_raw(imm, g, &zeta, &x),
                    shape_operator_raw(imm, g, &zeta, &y),
                ) else {
                    return f64::INFINITY;
                };
                let expected = s.metric(&se_x, &sz_y) - s.metric(&sz_x, &se_y);
                worst = worst.max(libm::fabs(form.eval(&rperp, &zeta) - expected));
            }
        }
        worst
    });
    record(
        imm,
        cfg,
        "ricci",
        "<R_perp(X,Y)eta,zeta> = -<(S_eta^t S_zeta - S_zeta^t S_eta)X,Y>, transpose w.r.t. g",
        r,
        cfg.tol_fd,
    )
}

/// `(D_X II)(Y,Z) = D_X(II(Y,Z)) − II(∇_X Y, Z) − II(Y, ∇_X Z)` along a geodesic.
fn d_ii(imm: Imm, cfg: &FDConfig, g: &GroupElement, x: &Vector, py: &Probe, pz: &Probe) -> Vector {
    let s = imm.space();
    let d = fd::derivative(
        |t| imm.second_fundamental_form_raw(&geodesic(s, g, x, t), &py.at(t), &pz.at(t)),
        ii_step(imm, cfg),
        cfg.richardson,
    );
    d - imm.second_fundamental_form_raw(g, &py.v1, &pz.v0) - imm.second_fundamental_form_raw(g, &py.v0, &pz.v1)
}

pub fn verify_codazzi(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "codazzi", |g, rng| {
        let x = s.random_m_vector(rng);
        let y = s.random_m_vector(rng);
        let z = s.random_m_vector(rng);
        let py = Probe::through(y.clone(), s, rng);
        let pz = Probe::through(z.clone(), s, rng);
        let px = Probe::through(x.clone(), s, rng);
        let pz2 = Probe::through(z, s, rng);
        let a = d_ii(imm, cfg, g, &x, &py, &pz);
        let b = d_ii(imm, cfg, g, &y, &px, &pz2);
        normal_residual(imm, g, &(a - b))
    });
    record(imm, cfg, "codazzi", "<(D_X II)(Y,Z),eta> = <(D_Y II)(X,Z),eta>", r, cfg.tol_fd)
}

/// Skew handles only.
pub fn verify_locsym_b(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "locsym_b", |g, rng| {
        let x = s.random_m_vector(rng);
        let py = Probe::random(s, rng);
        let pz = Probe::random(s, rng);
        let lhs = d_ii(imm, cfg, g, &x, &py, &pz);
        let rhs = imm.omega_raw(g, &s.curv(&py.v0, &pz.v0, &x));
        max_abs_vec(&(lhs + rhs))
    });
    record(imm, cfg, "locsym_b", "(D_X II)(Y,Z) = -R(Y,Z)X", r, cfg.tol_fd)
}

/// `∇R = 0` for the curvature tensor obtained from `II` at each point of a geodesic.
pub fn verify_locsym_c(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "locsym_c", |g, rng| {
        let x = s.random_m_vector(rng);
        let p: Vec<Probe> = (0..4).map(|_| Probe::random(s, rng)).collect();
        let d = fd::derivative(
            |t| {
                let q = geodesic(s, g, &x, t);
                let v: Vec<Vector> = p.iter().map(|pr| pr.at(t)).collect();
                Vector::from_element(1, gauss_tensor(imm, &q, &v[0], &v[1], &v[2], &v[3]))
            },
            ii_step(imm, cfg),
            cfg.richardson,
        )[0];
        let mut corr = 0.0;
        for k in 0..4 {
            let v: Vec<&Vector> = (0..4).map(|j| if j == k { &p[j].v1 } else { &p[j].v0 }).collect();
            corr += gauss_tensor(imm, g, v[0], v[1], v[2], v[3]);
        }
        libm::fabs(d - corr)
    });
    record(imm, cfg, "locsym_c", "(nabla_X R)(Y,Z,W,T) = 0", r, cfg.tol_fd)
}

pub fn verify_curvature_fd(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    let s = imm.space();
    let r = sweep(imm, cfg, "curvature_fd", |g, rng| {
        let (x, y, z) = (s.random_m_vector(rng), s.random_m_vector(rng), s.random_m_vector(rng));
        match curvature_fd(imm, g, &x, &y, &z, cfg.nested_step(), cfg.richardson) {
            Some(rf) => max_abs_vec(&(rf - s.curv(&x, &y, &z))),
            None => f64::INFINITY,
        }
    });
    record(
        imm,
        cfg,
        "curvature_fd",
        "R(X,Y)Z = [[X,Y],Z] with R(X,Y) = nabla_Y nabla_X - nabla_X nabla_Y + nabla_[X,Y]",
        r,
        cfg.tol_fd,
    )
}

/// Skew handles only: `D(Ω̂(Z,α)) = Ω̂(D̂(Z,α))` for constant-coefficient probes.
pub fn verify_hat_connection(imm: Imm, cfg: &FDConfig) -> CheckRecord {
    use super::rigidity::{hat_connection, hat_omega_at, HatElement};
    let s = imm.space();
    let dm = s.dim_m();
    let r = sweep(imm, cfg, "hat_connection", |g, rng| {
        let w = s.random_m_vector(rng);
        let z = s.random_m_vector(rng);
        let a = rng::normal_vector(rng, dm * dm, 1.0);
        let a = crate::linalg::Matrix::from_column_slice(dm, dm, a.as_slice());
        let alpha = &a - a.transpose();
        let Ok(el) = HatElement::new(s, z, alpha) else {
            return f64::INFINITY;
        };
        let Ok(next) = hat_connection(s, &w, &el) else {
            return f64::INFINITY;
        };
        let d = fd::derivative(|t| hat_omega_at(imm, &geodesic(s, g, &w, t), &el), cfg.h, cfg.richardson);
        max_abs_vec(&(d - hat_omega_at(imm, g, &next)))
    });
    record(
        imm,
        cfg,
        "hat_connection",
        "D_W Omega-hat(Z,alpha) = Omega-hat(-R(alpha)W, W^Z)",
        r,
        cfg.tol_fd,
    )
}
