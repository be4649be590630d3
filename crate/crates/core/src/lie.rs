//! Matrix Lie algebras with cached structure constants, adjoint
//! representations, Killing forms and the group exponential.

use alloc::vec;
use alloc::vec::Vec;

use crate::bilinear::BilinearForm;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::linalg::{max_abs, max_abs_vec, pinv, rank, Matrix, Vector};

/// Residual above which a matrix is considered to leave the algebra.
pub const CLOSURE_TOL: f64 = 1e-10;

/// A real matrix Lie algebra with an ordered basis `E_1..E_d`.
///
/// Structure constants `c[i][j][k]` with `[E_i,E_j] = Σ_k c[i][j][k] E_k` are
/// computed once at construction; the bracket and `ad` use only them.
#[derive(Debug, Clone)]
pub struct LieAlgebraModel {
    matrix_size: usize,
    basis: Vec<Matrix>,
    blocks: Vec<(usize, usize)>,
    structure: Vec<f64>,
    frame: Matrix,
    fit: Matrix,
    ad: Vec<Matrix>,
}

fn vectorize(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

/// `e_i e_jᵀ` in `n×n`.
pub fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

impl LieAlgebraModel {
    /// Builds the algebra spanned by `basis` (all `n×n`), checking
    /// independence and closure under the commutator.
    pub fn new(matrix_size: usize, basis: Vec<Matrix>) -> Result<Self> {
        Self::with_blocks(matrix_size, basis, vec![(0, matrix_size)])
    }

    pub(crate) fn with_blocks(
        matrix_size: usize,
        basis: Vec<Matrix>,
        blocks: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = matrix_size;
        for b in &basis {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.nrows().max(b.ncols()),
                });
            }
        }
        let d = basis.len();
        let frame = if d == 0 {
            Matrix::zeros(n * n, 0)
        } else {
            Matrix::from_columns(&basis.iter().map(vectorize).collect::<Vec<_>>())
        };
        let r = rank(&frame);
        if r != d {
            return Err(Error::BadParams(alloc::format!(
                "basis matrices are dependent (rank {r} < {d})"
            )));
        }
        let fit = pinv(&frame);
        let mut alg = Self {
            matrix_size,
            basis,
            blocks,
            structure: vec![0.0; d * d * d],
            frame,
            fit,
            ad: Vec::new(),
        };
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i + 1..d {
                let c = &alg.basis[i] * &alg.basis[j] - &alg.basis[j] * &alg.basis[i];
                let (coeffs, res) = alg.expand(&c);
                worst = worst.max(res);
                for k in 0..d {
                    alg.structure[(i * d + j) * d + k] = coeffs[k];
                    alg.structure[(j * d + i) * d + k] = -coeffs[k];
                }
            }
        }
        if worst > CLOSURE_TOL {
            return Err(Error::ClosureViolation { residual: worst });
        }
        alg.rebuild_ad();
        Ok(alg)
    }

    fn rebuild_ad(&mut self) {
        let d = self.dim();
        self.ad = (0..d)
            .map(|i| Matrix::from_fn(d, d, |k, j| self.structure[(i * d + j) * d + k]))
            .collect();
    }

    /// `so(n)` with basis `e_i e_jᵀ − e_j e_iᵀ`, `i < j`, in lexicographic order.
    pub fn so(n: usize) -> Result<Self> {
        Self::new(n, so_basis(n, n))
    }

    /// `sl(n,ℝ)` with basis `H_k = E_kk − E_{k+1,k+1}` followed by the
    /// off-diagonal `E_ij` for `i < j`, then `i > j`. For `n = 2` this is `H, E, F`.
    pub fn sl(n: usize) -> Result<Self> {
        let mut basis = Vec::new();
        for k in 0..n.saturating_sub(1) {
            basis.push(elementary(n, k, k) - elementary(n, k + 1, k + 1));
        }
        for i in 0..n {
            for j in i + 1..n {
                basis.push(elementary(n, i, j));
            }
        }
        for i in 0..n {
            for j in 0..i {
                basis.push(elementary(n, i, j));
            }
        }
        Self::new(n, basis)
    }

    /// Abelian `ℝ^r` realized by translation generators `e_k e_rᵀ` in
    /// `(r+1)×(r+1)` matrices.
    pub fn abelian(r: usize) -> Result<Self> {
        let basis = (0..r).map(|k| elementary(r + 1, k, r)).collect();
        Self::new(r + 1, basis)
    }

    /// Block-diagonal direct sum of algebras.
    pub fn direct_sum(parts: &[&LieAlgebraModel]) -> Result<Self> {
        let n: usize = parts.iter().map(|p| p.matrix_size).sum();
        let mut basis = Vec::new();
        let mut blocks = Vec::new();
        let mut off = 0;
        for p in parts {
            for b in &p.basis {
                let mut m = Matrix::zeros(n, n);
                m.view_mut((off, off), (p.matrix_size, p.matrix_size))
                    .copy_from(b);
                basis.push(m);
            }
            for (o, s) in &p.blocks {
                blocks.push((off + o, *s));
            }
            off += p.matrix_size;
        }
        Self::with_blocks(n, basis, blocks)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Diagonal blocks `(offset, size)` that group elements respect.
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// Copy with `c[i][j][k]` shifted by `delta` (and `c[j][i][k]` by
    /// `-delta`), bypassing the closure check. Used for fault injection.
    pub fn with_perturbed_structure(&self, i: usize, j: usize, k: usize, delta: f64) -> Self {
        let d = self.dim();
        let mut alg = self.clone();
        alg.structure[(i * d + j) * d + k] += delta;
        alg.structure[(j * d + i) * d + k] -= delta;
        alg.rebuild_ad();
        alg
    }

    fn check_len(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `Σ x_i E_i`.
    pub fn to_matrix(&self, x: &Vector) -> Matrix {
        let n = self.matrix_size;
        let v = &self.frame * x;
        Matrix::from_column_slice(n, n, v.as_slice())
    }

    /// Least-squares coordinates of `m` in the basis and the fit residual.
    pub fn expand(&self, m: &Matrix) -> (Vector, f64) {
        let v = vectorize(m);
        let c = &self.fit * &v;
        let res = max_abs_vec(&(&v - &self.frame * &c));
        (c, res)
    }

    /// Coordinates of `a·X·b` with no closure check; `b` is normally `a⁻¹`.
    pub(crate) fn conjugate(&self, a: &Matrix, b: &Matrix, x: &Vector) -> Vector {
        self.expand(&(a * self.to_matrix(x) * b)).0
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.br(x, y))
    }

    // Sums over i < j with the antisymmetrized weight, so `[x,y] = -[y,x]`
    // holds bitwise and `[x,x] = 0` exactly.
    pub(crate) fn br(&self, x: &Vector, y: &Vector) -> Vector {
        let d = self.dim();
        let mut out = Vector::zeros(d);
        for i in 0..d {
            for j in i + 1..d {
                let w = x[i] * y[j] - x[j] * y[i];
                if w == 0.0 {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += w * self.structure[base + k];
                }
            }
        }
        out
    }

    /// Matrix of `Y ↦ [X,Y]` in the basis.
    pub fn ad_operator(&self, x: &Vector) -> Result<Matrix> {
        self.check_len(x)?;
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (i, a) in self.ad.iter().enumerate() {
            if x[i] != 0.0 {
                m += a * x[i];
            }
        }
        Ok(m)
    }

    /// `B(E_i,E_j) = tr(ad_{E_i} ∘ ad_{E_j})`. Degenerate for algebras with
    /// a center; the returned form then carries the degenerate marker.
    pub fn killing_form(&self) -> BilinearForm {
        let d = self.dim();
        let gram = Matrix::from_fn(d, d, |i, j| (&self.ad[i] * &self.ad[j]).trace());
        BilinearForm::new_allow_degenerate(gram).expect("trace form is symmetric")
    }

    /// Matrix of `Ad_g` in the basis; fails if conjugation leaves the algebra.
    pub fn adjoint_matrix(&self, g: &GroupElement) -> Result<Matrix> {
        self.check_group(g)?;
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        let mut worst = 0.0f64;
        for (j, e) in self.basis.iter().enumerate() {
            let conj = &g.matrix * e * &g.inverse;
            let (c, res) = self.expand(&conj);
            worst = worst.max(res / (1.0 + max_abs(&conj)));
            out.set_column(j, &c);
        }
        if worst > CLOSURE_TOL {
            return Err(Error::ClosureViolation { residual: worst });
        }
        Ok(out)
    }

    /// Coordinates of `g·X·g⁻¹`.
    pub fn adjoint_action(&self, g: &GroupElement, x: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        self.check_group(g)?;
        let conj = &g.matrix * self.to_matrix(x) * &g.inverse;
        let (c, res) = self.expand(&conj);
        if res > CLOSURE_TOL * (1.0 + max_abs(&conj)) {
            return Err(Error::ClosureViolation { residual: res });
        }
        Ok(c)
    }

    /// `exp(t·Σ x_i E_i)`.
    pub fn group_exp(&self, x: &Vector, t: f64) -> Result<GroupElement> {
        self.check_len(x)?;
        Ok(self.exp_unchecked(&(x * t)))
    }

    pub(crate) fn exp_unchecked(&self, x: &Vector) -> GroupElement {
        let m = self.to_matrix(x);
        let e = expm(&m);
        let inv = expm(&(-m));
        GroupElement {
            matrix: e,
            inverse: inv,
            blocks: self.blocks.clone(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.matrix_size, self.blocks.clone())
    }

    fn check_group(&self, g: &GroupElement) -> Result<()> {
        if g.size() != self.matrix_size {
            return Err(Error::DimensionMismatch {
                expected: self.matrix_size,
                found: g.size(),
            });
        }
        Ok(())
    }

    /// Max over basis triples of `|[[E_i,E_j],E_k] + cyclic|`.
    pub fn verify_jacobi(&self) -> f64 {
        let d = self.dim();
        let e = |i: usize| {
            let mut v = Vector::zeros(d);
            v[i] = 1.0;
            v
        };
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (a, b, c) = (e(i), e(j), e(k));
                    let s = self.br(&self.br(&a, &b), &c)
                        + self.br(&self.br(&b, &c), &a)
                        + self.br(&self.br(&c, &a), &b);
                    worst = worst.max(max_abs_vec(&s));
                }
            }
        }
        worst
    }
}

/// `so` generators `e_i e_jᵀ − e_j e_iᵀ` for `i < j < k`, embedded in `n×n`.
pub(crate) fn so_basis(n: usize, k: usize) -> Vec<Matrix> {
    let mut basis = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            basis.push(elementary(n, i, j) - elementary(n, j, i));
        }
    }
    basis
}

/// An invertible matrix acting blockwise, with its inverse cached.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: Matrix,
    inverse: Matrix,
    blocks: Vec<(usize, usize)>,
}

/// Minimum `|det|` accepted for a group element.
pub const INVERTIBILITY_TOL: f64 = 1e-10;

impl GroupElement {
    pub fn new(matrix: Matrix, blocks: Vec<(usize, usize)>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let det = matrix.determinant();
        if !(libm::fabs(det) > INVERTIBILITY_TOL) {
            return Err(Error::NotInvertible { det });
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or(Error::NotInvertible { det })?;
        Ok(Self {
            matrix,
            inverse,
            blocks,
        })
    }

    pub fn identity(n: usize, blocks: Vec<(usize, usize)>) -> Self {
        Self {
            matrix: Matrix::identity(n, n),
            inverse: Matrix::identity(n, n),
            blocks,
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            blocks: self.blocks.clone(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
            blocks: self.blocks.clone(),
        }
    }

    /// Largest entry outside the diagonal blocks.
    pub fn off_block_magnitude(&self) -> f64 {
        let n = self.size();
        let block_of = |i: usize| self.blocks.iter().position(|(o, s)| i >= *o && i < o + s);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if block_of(i) != block_of(j) {
                    worst = worst.max(libm::fabs(self.matrix[(i, j)]));
                }
            }
        }
        worst
    }
}
