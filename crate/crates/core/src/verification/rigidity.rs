//! The extended bundle `TM ⊕ Λ²TM` with its connection
//! `D̂_W(Z,α) = (∇_W Z − R(α)W, W∧Z + ∇_W α)` and the map
//! `Ω̂(Z,α) = Ω(Z) + II(α)`, used to compare two skew virtual immersions.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::immersion::{fullness, VirtualImmersion};
use crate::lie::GroupElement;
use crate::linalg::{max_abs, null_space, pinv, rank, span_mismatch, Matrix, Vector};
use crate::rng;
use crate::symmetric::SymmetricSpaceModel;

/// Antisymmetry tolerance of stored `α`.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Span-match tolerance for kernel comparisons.
pub const KERNEL_TOL: f64 = 1e-9;

/// `(Z, α)` with `Z ∈ m` in algebra coordinates and `α` an antisymmetric
/// matrix over the `m` basis, `α = Σ_{i<j} α_ij m_i∧m_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HatElement {
    z: Vector,
    alpha: Matrix,
}

impl HatElement {
    pub fn new(space: &SymmetricSpaceModel, z: Vector, alpha: Matrix) -> Result<Self> {
        space.check_in_m(&z)?;
        let d = space.dim_m();
        if alpha.nrows() != d || alpha.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: alpha.nrows(),
            });
        }
        let asym = max_abs(&(&alpha + alpha.transpose()));
        if asym > ANTISYMMETRY_TOL {
            return Err(Error::BadParams(format!("alpha is not antisymmetric ({asym:e})")));
        }
        Ok(Self { z, alpha })
    }

    /// `(Z, Σ c_u X_u∧Y_u)`.
    pub fn from_wedges(space: &SymmetricSpaceModel, z: Vector, terms: &[(f64, Vector, Vector)]) -> Result<Self> {
        let d = space.dim_m();
        let mut alpha = Matrix::zeros(d, d);
        for (c, x, y) in terms {
            space.check_in_m(x)?;
            space.check_in_m(y)?;
            alpha += wedge(space, x, y) * *c;
        }
        Self::new(space, z, alpha)
    }

    pub fn z(&self) -> &Vector {
        &self.z
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }
}

/// `W∧Z` as the antisymmetric matrix `w_i z_j − w_j z_i` in `m` coordinates.
pub fn wedge(space: &SymmetricSpaceModel, w: &Vector, z: &Vector) -> Matrix {
    let a = space.cartan().m_coords(w);
    let b = space.cartan().m_coords(z);
    &a * b.transpose() - &b * a.transpose()
}

/// Index pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn wedge_pairs(dim_m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..dim_m {
        for j in i + 1..dim_m {
            out.push((i, j));
        }
    }
    out
}

/// `R(α) = Σ_{i<j} α_ij R(m_i, m_j)` as an endomorphism in `m` coordinates.
pub fn curvature_operator(space: &SymmetricSpaceModel, alpha: &Matrix) -> Matrix {
    let d = space.dim_m();
    let mut out = Matrix::zeros(d, d);
    for (i, j) in wedge_pairs(d) {
        let c = alpha[(i, j)];
        if c != 0.0 {
            out += pair_operator(space, i, j) * c;
        }
    }
    out
}

fn pair_operator(space: &SymmetricSpaceModel, i: usize, j: usize) -> Matrix {
    let d = space.dim_m();
    let (mi, mj) = (space.m_basis(i), space.m_basis(j));
    let cols: Vec<Vector> = (0..d)
        .map(|k| space.cartan().m_coords(&space.curv(&mi, &mj, &space.m_basis(k))))
        .collect();
    Matrix::from_columns(&cols)
}

/// `(−R(α)W, W∧Z)`: the connection for constant coefficients in a parallel frame.
pub fn hat_connection(space: &SymmetricSpaceModel, w: &Vector, el: &HatElement) -> Result<HatElement> {
    space.check_in_m(w)?;
    let rw = curvature_operator(space, &el.alpha) * space.cartan().m_coords(w);
    let z = -space.cartan().from_m_coords(&rw);
    Ok(HatElement {
        z,
        alpha: wedge(space, w, &el.z),
    })
}

/// `Ω(Z) + Σ_{i<j} α_ij II(m_i, m_j)` at `⟦g⟧`.
pub fn hat_omega_at<I: VirtualImmersion + ?Sized>(imm: &I, g: &GroupElement, el: &HatElement) -> Vector {
    let s = imm.space();
    let mut v = imm.omega_raw(g, &el.z);
    for (i, j) in wedge_pairs(s.dim_m()) {
        let c = el.alpha[(i, j)];
        if c != 0.0 {
            v += imm.second_fundamental_form_raw(g, &s.m_basis(i), &s.m_basis(j)) * c;
        }
    }
    v
}

/// `Ω̂` at the base point.
pub fn hat_omega<I: VirtualImmersion + ?Sized>(imm: &I, el: &HatElement) -> Vector {
    hat_omega_at(imm, &imm.space().algebra().identity(), el)
}

/// Matrix of `Ω̂` at `⟦g⟧` on coordinates `(Z in m-basis, α_ij for i<j)`.
pub fn hat_matrix<I: VirtualImmersion + ?Sized>(imm: &I, g: &GroupElement) -> Matrix {
    let s = imm.space();
    let mut cols: Vec<Vector> = (0..s.dim_m()).map(|i| imm.omega_raw(g, &s.m_basis(i))).collect();
    for (i, j) in wedge_pairs(s.dim_m()) {
        cols.push(imm.second_fundamental_form_raw(g, &s.m_basis(i), &s.m_basis(j)));
    }
    Matrix::from_columns(&cols)
}

fn element_from_coords(space: &SymmetricSpaceModel, c: &Vector) -> HatElement {
    let d = space.dim_m();
    let z = space.cartan().from_m_coords(&c.rows(0, d).into_owned());
    let mut alpha = Matrix::zeros(d, d);
    for (k, (i, j)) in wedge_pairs(d).into_iter().enumerate() {
        alpha[(i, j)] = c[d + k];
        alpha[(j, i)] = -c[d + k];
    }
    HatElement { z, alpha }
}

/// Kernel of `Ω̂` at the base point compared with `{(0,α) : R(α) = 0}`.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub dim: usize,
    pub basis: Vec<HatElement>,
    /// `dim {α : R(α) = 0}` with `R(α)` read as an endomorphism.
    pub curvature_kernel_dim: usize,
    /// Span distance between `ker Ω̂` and `{(0,α) : R(α) = 0}`.
    pub span_mismatch: f64,
    /// `dim {α : ⟨R(α)·,·⟩ = 0}` with `R(α)` read through the pairing on `Λ²m`.
    pub pairing_kernel_dim: usize,
    /// Span distance between the two readings' kernels.
    pub pairing_mismatch: f64,
    /// Rank of `Ω̂`; equals `dim V` when onto.
    pub rank: usize,
    pub target_dim: usize,
}

impl KernelReport {
    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

/// Requires a full immersion.
pub fn kernel_of_hat_omega<I: VirtualImmersion + ?Sized>(imm: &I) -> Result<KernelReport> {
    require_full(imm)?;
    let target_dim = imm.target_form().dim();
    let s = imm.space();
    let d = s.dim_m();
    let pairs = wedge_pairs(d);
    let a = hat_matrix(imm, &s.algebra().identity());
    let ker = null_space(&a);
    let basis = (0..ker.ncols())
        .map(|k| element_from_coords(s, &ker.column(k).into_owned()))
        .collect();

    let ops: Vec<Matrix> = pairs.iter().map(|&(i, j)| pair_operator(s, i, j)).collect();
    let op_cols: Vec<Vector> = ops
        .iter()
        .map(|m| Vector::from_column_slice(m.as_slice()))
        .collect();
    let curv_kernel = if pairs.is_empty() {
        Matrix::zeros(0, 0)
    } else {
        null_space(&Matrix::from_columns(&op_cols))
    };
    let mut embedded = Matrix::zeros(d + pairs.len(), curv_kernel.ncols());
    embedded
        .view_mut((d, 0), (pairs.len(), curv_kernel.ncols()))
        .copy_from(&curv_kernel);

    let pairing = Matrix::from_fn(pairs.len(), pairs.len(), |p, q| {
        let (k, l) = pairs[q];
        let rk = s.cartan().from_m_coords(&ops[p].column(k).into_owned());
        s.metric(&rk, &s.m_basis(l))
    });
    let pairing_kernel = if pairs.is_empty() {
        Matrix::zeros(0, 0)
    } else {
        null_space(&pairing)
    };

    Ok(KernelReport {
        dim: ker.ncols(),
        basis,
        curvature_kernel_dim: curv_kernel.ncols(),
        span_mismatch: span_mismatch(&ker, &embedded),
        pairing_kernel_dim: pairing_kernel.ncols(),
        pairing_mismatch: span_mismatch(&curv_kernel, &pairing_kernel),
        rank: rank(&a),
        target_dim,
    })
}

/// `L` with `L·Ω̂₁ = Ω̂₂`, solved at the base point.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub l: Matrix,
    /// `max|Lᵀ G₂ L − G₁|`.
    pub isometry_residual: f64,
    /// `max_p ‖L_p − L‖∞` over sampled points.
    pub constancy_residual: f64,
}

/// Solves for the linear isometry relating two full skew immersions of the same space.
pub fn equivalence_map<I1, I2>(imm1: &I1, imm2: &I2, samples: usize, seed: u64) -> Result<Equivalence>
where
    I1: VirtualImmersion + ?Sized,
    I2: VirtualImmersion + ?Sized,
{
    let (s1, s2) = (imm1.space(), imm2.space());
    if s1.dim_m() != s2.dim_m() || s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim_m(),
            found: s2.dim_m(),
        });
    }
    if s1.descriptor() != s2.descriptor() {
        return Err(Error::KernelMismatch {
            detail: format!("immersions over {} and {}", s1.descriptor(), s2.descriptor()),
        });
    }
    require_full(imm1)?;
    require_full(imm2)?;
    let e = s1.algebra().identity();
    let a1 = hat_matrix(imm1, &e);
    let a2 = hat_matrix(imm2, &e);
    if a1.ncols() != a2.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a1.ncols(),
            found: a2.ncols(),
        });
    }
    let (k1, k2) = (null_space(&a1), null_space(&a2));
    if k1.ncols() != k2.ncols() {
        return Err(Error::KernelMismatch {
            detail: format!("kernel dimensions {} and {}", k1.ncols(), k2.ncols()),
        });
    }
    let mm = span_mismatch(&k1, &k2);
    if mm > KERNEL_TOL {
        return Err(Error::KernelMismatch {
            detail: format!("kernel spans differ by {mm:e}"),
        });
    }
    let l = &a2 * pinv(&a1);
    let isometry_residual = crate::bilinear::isometry_residual(imm1.target_form(), imm2.target_form(), &l)?;
    let stream = rng::stream_id("equivalence_constancy");
    let mut constancy = 0.0f64;
    for i in 0..samples as u64 {
        let g = s1.random_group_element(rng::sub_seed(seed, stream, i));
        let lp = hat_matrix(imm2, &g) * pinv(&hat_matrix(imm1, &g));
        constancy = constancy.max(max_abs(&(lp - &l)));
    }
    Ok(Equivalence {
        l,
        isometry_residual,
        constancy_residual: constancy,
    })
}

fn require_full<I: VirtualImmersion + ?Sized>(imm: &I) -> Result<()> {
    let (full, spanned) = fullness(imm);
    if full {
        Ok(())
    } else {
        Err(Error::NotFull {
            spanned,
            dim: imm.target_form().dim(),
        })
    }
}
