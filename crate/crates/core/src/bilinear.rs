//! Pseudo-Euclidean linear algebra: nondegenerate symmetric forms, their
//! signatures, orthogonal tangent/normal splittings and isometry residuals.
//!
//! All vectors are coordinate vectors in one fixed ambient basis.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, rank, Matrix, Vector};

/// Absolute symmetry tolerance accepted by [`BilinearForm::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative eigenvalue cutoff below which a form counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Counts of positive, negative and (numerically) zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn pair(&self) -> (usize, usize) {
        (self.positive, self.negative)
    }
}

impl core::fmt::Display for Signature {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// A symmetric bilinear form given by its Gram matrix.
///
/// Forms built through [`BilinearForm::new`] are nondegenerate. The only
/// degenerate forms in circulation are Killing forms of algebras with a
/// center, which carry the `degenerate` marker.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    gram: Matrix,
    degenerate: bool,
}

fn check_square(m: &Matrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

fn eigen_extremes(gram: &Matrix) -> (f64, f64) {
    if gram.nrows() == 0 {
        return (0.0, 0.0);
    }
    let ev = gram.clone().symmetric_eigenvalues();
    let min_abs = ev.iter().fold(f64::INFINITY, |a, v| a.min(libm::fabs(*v)));
    let max_abs = ev.iter().fold(0.0, |a: f64, v| a.max(libm::fabs(*v)));
    (min_abs, max_abs)
}

impl BilinearForm {
    /// Builds a nondegenerate form from a Gram matrix, symmetrizing it.
    pub fn new(gram: Matrix) -> Result<Self> {
        check_square(&gram)?;
        let asym = max_abs(&(&gram - gram.transpose()));
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let gram = symmetrize(&gram);
        let (min_abs, max_abs) = eigen_extremes(&gram);
        if gram.nrows() > 0 && !(min_abs > DEGENERACY_TOL * max_abs && max_abs > 0.0) {
            return Err(Error::Degenerate { min_abs, max_abs });
        }
        Ok(Self {
            gram,
            degenerate: false,
        })
    }

    /// Builds a symmetric form that may be degenerate (Killing forms).
    pub fn new_allow_degenerate(gram: Matrix) -> Result<Self> {
        check_square(&gram)?;
        let asym = max_abs(&(&gram - gram.transpose()));
        if asym > SYMMETRY_TOL * (1.0 + max_abs(&gram)) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let gram = symmetrize(&gram);
        let (min_abs, max_abs) = eigen_extremes(&gram);
        let degenerate =
            gram.nrows() > 0 && !(min_abs > DEGENERACY_TOL * max_abs && max_abs > 0.0);
        Ok(Self { gram, degenerate })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self {
            gram: Matrix::identity(dim, dim),
            degenerate: false,
        }
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diagonal(&Vector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Scales the form by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new_allow_degenerate(&self.gram * factor).and_then(|f| {
            if f.degenerate {
                let (min_abs, max_abs) = eigen_extremes(&f.gram);
                Err(Error::Degenerate { min_abs, max_abs })
            } else {
                Ok(f)
            }
        })
    }

    pub fn signature(&self) -> Signature {
        let ev = self.gram.clone().symmetric_eigenvalues();
        let max_abs = ev.iter().fold(0.0, |a: f64, v| a.max(libm::fabs(*v)));
        let cut = DEGENERACY_TOL * max_abs;
        let mut s = Signature {
            positive: 0,
            negative: 0,
            null: 0,
        };
        for v in ev.iter() {
            if *v > cut && max_abs > 0.0 {
                s.positive += 1;
            } else if *v < -cut && max_abs > 0.0 {
                s.negative += 1;
            } else {
                s.null += 1;
            }
        }
        s
    }

    /// `uᵀ · gram · v`.
    pub fn evaluate(&self, u: &Vector, v: &Vector) -> Result<f64> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
        }
        Ok(self.eval(u, v))
    }

    /// Unchecked evaluation; panics on dimension mismatch.
    pub(crate) fn eval(&self, u: &Vector, v: &Vector) -> f64 {
        // Pairing (u_i v_j + u_j v_i) makes eval(u,v) and eval(v,u)
        // bitwise identical.
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            acc += u[i] * v[i] * self.gram[(i, i)];
            for j in i + 1..n {
                acc += (u[i] * v[j] + u[j] * v[i]) * self.gram[(i, j)];
            }
        }
        acc
    }

    /// Gram matrix of the restriction to the span of `basis` columns.
    pub fn restricted_gram(&self, basis: &Matrix) -> Matrix {
        basis.transpose() * &self.gram * basis
    }

    /// Orthogonal direct sum.
    pub fn block_sum(forms: &[BilinearForm]) -> Self {
        let n: usize = forms.iter().map(BilinearForm::dim).sum();
        let mut gram = Matrix::zeros(n, n);
        let mut off = 0;
        for f in forms {
            let d = f.dim();
            gram.view_mut((off, off), (d, d)).copy_from(&f.gram);
            off += d;
        }
        let degenerate = forms.iter().any(|f| f.degenerate);
        Self { gram, degenerate }
    }
}

/// A linear subspace carried by an independent set of coordinate vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: Vec<Vector>) -> Result<Self> {
        for b in &basis {
            if b.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: b.len(),
                });
            }
        }
        if basis.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        Self::from_matrix(Matrix::from_columns(&basis))
    }

    /// Span of the columns of `basis`, which must be independent.
    pub fn from_matrix(basis: Matrix) -> Result<Self> {
        let r = rank(&basis);
        if r != basis.ncols() {
            return Err(Error::DependentBasis {
                rank: r,
                count: basis.ncols(),
            });
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> Vector {
        self.basis.column(i).into_owned()
    }
}

/// Precomputed orthogonal splitting `V = T ⊕ T^⊥` for a tangent subspace on
/// which the form is positive definite.
#[derive(Debug, Clone)]
pub struct TangentSplitter {
    basis: Matrix,
    /// `basisᵀ · gram`, the right-hand-side operator of the normal equations.
    pairing: Matrix,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl TangentSplitter {
    pub fn new(form: &BilinearForm, tangent: &Subspace) -> Result<Self> {
        if tangent.ambient_dim() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: tangent.ambient_dim(),
            });
        }
        Self::from_frame(form, tangent.matrix().clone())
    }

    /// Same as [`TangentSplitter::new`] for a frame assumed independent.
    pub(crate) fn from_frame(form: &BilinearForm, basis: Matrix) -> Result<Self> {
        let pairing = basis.transpose() * form.gram();
        let g = &pairing * &basis;
        let g = (&g + g.transpose()) * 0.5;
        if g.nrows() > 0 {
            let ev = g.clone().symmetric_eigenvalues();
            let max = ev.iter().fold(0.0, |a: f64, v| a.max(libm::fabs(*v)));
            if ev.iter().any(|&v| v <= DEGENERACY_TOL * max) || max == 0.0 {
                return Err(Error::TangentNotPositiveDefinite);
            }
        }
        let chol = g.cholesky().ok_or(Error::TangentNotPositiveDefinite)?;
        Ok(Self {
            basis,
            pairing,
            chol,
        })
    }

    pub fn tangent_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn frame(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates `c` of the tangent part `x_T = basis · c`.
    pub fn tangent_coords(&self, x: &Vector) -> Vector {
        self.chol.solve(&(&self.pairing * x))
    }

    pub fn tangent_part(&self, x: &Vector) -> Vector {
        &self.basis * self.tangent_coords(x)
    }

    pub fn normal_part(&self, x: &Vector) -> Vector {
        x - self.tangent_part(x)
    }

    pub fn split(&self, x: &Vector) -> (Vector, Vector) {
        let t = self.tangent_part(x);
        let n = x - &t;
        (t, n)
    }

    /// Solves `Gram_T · c = rhs`.
    pub fn solve_gram(&self, rhs: &Vector) -> Vector {
        self.chol.solve(rhs)
    }
}

/// Splits `x` into parts tangent and orthogonal to `tangent`.
pub fn split_tangent_normal(
    form: &BilinearForm,
    tangent: &Subspace,
    x: &Vector,
) -> Result<(Vector, Vector)> {
    if x.len() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: x.len(),
        });
    }
    Ok(TangentSplitter::new(form, tangent)?.split(x))
}

/// `max|Lᵀ·gram_b·L − gram_a|`; zero iff `l` is a linear isometry from
/// `form_a` into `form_b`.
pub fn isometry_residual(form_a: &BilinearForm, form_b: &BilinearForm, l: &Matrix) -> Result<f64> {
    if l.ncols() != form_a.dim() {
        return Err(Error::DimensionMismatch {
            expected: form_a.dim(),
            found: l.ncols(),
        });
    }
    if l.nrows() != form_b.dim() {
        return Err(Error::DimensionMismatch {
            expected: form_b.dim(),
            found: l.nrows(),
        });
    }
    Ok(max_abs(&(l.transpose() * form_b.gram() * l - form_a.gram())))
}
