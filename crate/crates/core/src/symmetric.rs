//! Symmetric pairs `(G,H)` from a small catalog of irreducible factors,
//! their products, and the transvection geometry used as the reference for
//! geodesics, parallel transport and curvature.
//!
//! Each factor uses an adapted basis: the `m` generators first, then the `h`
//! generators. Points of `G/H` are always represented by a group element `g`
//! and tangent vectors by pairs `⟦g, X⟧` with `X ∈ m`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bilinear::{BilinearForm, Subspace};
use crate::error::{Error, Result};
use crate::lie::{elementary, so_basis, GroupElement, LieAlgebraModel};
use crate::linalg::{max_abs_vec, Matrix, Vector};
use crate::rng;

/// Inclusion and membership tolerance for the Cartan splitting.
pub const CARTAN_TOL: f64 = 1e-10;

/// Scale of the normal coefficients used by [`SymmetricSpaceModel::random_group_element`].
pub const SAMPLE_SCALE: f64 = 0.5;

/// Irreducible (or flat) factor types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    /// Flat `ℝ^r`.
    Euclidean(usize),
    /// Round `S^n = SO(n+1)/SO(n)`.
    Sphere(usize),
    /// Hyperbolic plane as `SL(2,ℝ)/SO(2)`.
    Hyperbolic2,
    /// `SL(n,ℝ)/SO(n)`.
    SlSo(usize),
    /// Hyperbolic space `SO⁺(n,1)/SO(n)`, the hyperboloid model.
    Hyperboloid(usize),
}

impl FactorKind {
    pub fn is_flat(&self) -> bool {
        matches!(self, FactorKind::Euclidean(_))
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, FactorKind::Sphere(_))
    }

    /// Default metric scaling; unit `|K|` except for `sl_so(n)`.
    pub fn default_lambda(&self) -> f64 {
        match *self {
            FactorKind::Euclidean(_) => 1.0,
            FactorKind::Sphere(n) => -1.0 / (2.0 * (n as f64 - 1.0)),
            FactorKind::Hyperbolic2 => 0.5,
            FactorKind::SlSo(n) => 1.0 / (4.0 * n as f64),
            FactorKind::Hyperboloid(n) => 1.0 / (2.0 * (n as f64 - 1.0)),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            FactorKind::Euclidean(r) => r >= 1,
            FactorKind::Sphere(n) | FactorKind::SlSo(n) | FactorKind::Hyperboloid(n) => n >= 2,
            FactorKind::Hyperbolic2 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadParams(format!("invalid factor parameter: {}", self.name())))
        }
    }

    /// Human-readable name, e.g. `sphere(2)`.
    pub fn name(&self) -> String {
        match *self {
            FactorKind::Euclidean(r) => format!("euclidean({r})"),
            FactorKind::Sphere(n) => format!("sphere({n})"),
            FactorKind::Hyperbolic2 => String::from("hyperbolic2"),
            FactorKind::SlSo(n) => format!("sl_so({n})"),
            FactorKind::Hyperboloid(n) => format!("hyperboloid({n})"),
        }
    }

    /// Shorthand accepted by the space grammar, e.g. `sphere:2`.
    pub fn shorthand(&self) -> String {
        match *self {
            FactorKind::Euclidean(r) => format!("euclidean:{r}"),
            FactorKind::Sphere(n) => format!("sphere:{n}"),
            FactorKind::Hyperbolic2 => String::from("hyperbolic2"),
            FactorKind::SlSo(n) => format!("sl_so:{n}"),
            FactorKind::Hyperboloid(n) => format!("hyperboloid:{n}"),
        }
    }
}

/// One factor with its metric scaling `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub lambda: f64,
}

impl Factor {
    pub fn new(kind: FactorKind, lambda: Option<f64>) -> Result<Self> {
        kind.validate()?;
        let lambda = lambda.unwrap_or_else(|| kind.default_lambda());
        let wrong = if kind.is_compact() {
            !(lambda < 0.0)
        } else {
            !(lambda > 0.0)
        };
        if wrong || !lambda.is_finite() {
            return Err(Error::WrongLambdaSign {
                factor: kind.name(),
                lambda,
            });
        }
        Ok(Self { kind, lambda })
    }
}

/// `g = h ⊕ m` as coordinate subspaces of the algebra, with the projector
/// onto `m` along `h`.
#[derive(Debug, Clone)]
pub struct CartanDecomposition {
    h: Subspace,
    m: Subspace,
    proj_m: Matrix,
    m_coords: Matrix,
}

impl CartanDecomposition {
    pub fn new(h: Subspace, m: Subspace) -> Result<Self> {
        let d = h.ambient_dim();
        if m.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.ambient_dim(),
            });
        }
        if h.dim() + m.dim() != d {
            return Err(Error::BadParams(format!(
                "dim h + dim m = {} but dim g = {d}",
                h.dim() + m.dim()
            )));
        }
        let mut cols: Vec<Vector> = (0..m.dim()).map(|i| m.vector(i)).collect();
        cols.extend((0..h.dim()).map(|i| h.vector(i)));
        let full = if d == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_columns(&cols)
        };
        let inv = full.try_inverse().ok_or_else(|| {
            Error::BadParams(String::from("h and m intersect nontrivially"))
        })?;
        let m_coords = inv.rows(0, m.dim()).into_owned();
        let proj_m = m.matrix() * &m_coords;
        Ok(Self {
            h,
            m,
            proj_m,
            m_coords,
        })
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn m(&self) -> &Subspace {
        &self.m
    }

    pub fn dim_h(&self) -> usize {
        self.h.dim()
    }

    pub fn dim_m(&self) -> usize {
        self.m.dim()
    }

    pub fn project_m(&self, x: &Vector) -> Vector {
        &self.proj_m * x
    }

    pub fn project_h(&self, x: &Vector) -> Vector {
        x - &self.proj_m * x
    }

    /// Coordinates of the `m`-component in the `m` basis.
    pub fn m_coords(&self, x: &Vector) -> Vector {
        &self.m_coords * x
    }

    pub fn from_m_coords(&self, c: &Vector) -> Vector {
        self.m.matrix() * c
    }

    /// Worst residuals of `[h,h] ⊆ h`, `[h,m] ⊆ m`, `[m,m] ⊆ h`.
    pub fn inclusion_residuals(&self, alg: &LieAlgebraModel) -> [f64; 3] {
        let mut out = [0.0f64; 3];
        let h: Vec<Vector> = (0..self.dim_h()).map(|i| self.h.vector(i)).collect();
        let m: Vec<Vector> = (0..self.dim_m()).map(|i| self.m.vector(i)).collect();
        for a in &h {
            for b in &h {
                out[0] = out[0].max(max_abs_vec(&self.project_m(&alg.br(a, b))));
            }
            for b in &m {
                out[1] = out[1].max(max_abs_vec(&self.project_h(&alg.br(a, b))));
            }
        }
        for a in &m {
            for b in &m {
                out[2] = out[2].max(max_abs_vec(&self.project_m(&alg.br(a, b))));
            }
        }
        out
    }
}

/// A tangent vector `⟦g, X⟧` of `G/H` with `X ∈ m` in algebra coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentRep {
    pub point: GroupElement,
    pub vector: Vector,
}

/// A product of catalog factors presented as one symmetric pair.
#[derive(Debug, Clone)]
pub struct SymmetricSpaceModel {
    factors: Vec<Factor>,
    algebra: LieAlgebraModel,
    cartan: CartanDecomposition,
    ambient_form: BilinearForm,
    metric_on_m: BilinearForm,
    factor_ranges: Vec<(usize, usize)>,
    h_blocks: Vec<usize>,
}

struct FactorData {
    algebra: LieAlgebraModel,
    dim_m: usize,
    form: Matrix,
}

fn build_factor(f: &Factor) -> Result<FactorData> {
    let (n, m, h) = match f.kind {
        FactorKind::Sphere(k) => {
            let n = k + 1;
            let m = (1..n)
                .map(|j| elementary(n, 0, j) - elementary(n, j, 0))
                .collect::<Vec<_>>();
            let h = so_basis(n, n)
                .into_iter()
                .enumerate()
                // drop the first-row generators, already in m
                .filter(|(i, _)| *i >= n - 1)
                .map(|(_, b)| b)
                .collect();
            (n, m, h)
        }
        FactorKind::Hyperbolic2 => {
            let hh = elementary(2, 0, 0) - elementary(2, 1, 1);
            let e = elementary(2, 0, 1);
            let fm = elementary(2, 1, 0);
            (2, vec![hh, &e + &fm], vec![&e - &fm])
        }
        FactorKind::SlSo(n) => {
            let mut m = Vec::new();
            for k in 0..n - 1 {
                m.push(elementary(n, k, k) - elementary(n, k + 1, k + 1));
            }
            for i in 0..n {
                for j in i + 1..n {
                    m.push(elementary(n, i, j) + elementary(n, j, i));
                }
            }
            (n, m, so_basis(n, n))
        }
        FactorKind::Hyperboloid(k) => {
            let n = k + 1;
            let t = k;
            let m = (0..k)
                .map(|j| elementary(n, j, t) + elementary(n, t, j))
                .collect::<Vec<_>>();
            (n, m, so_basis(n, k))
        }
        FactorKind::Euclidean(r) => {
            let alg = LieAlgebraModel::abelian(r)?;
            return Ok(FactorData {
                algebra: alg,
                dim_m: r,
                form: Matrix::identity(r, r) * f.lambda,
            });
        }
    };
    let dim_m = m.len();
    let mut basis = m;
    basis.extend(h);
    let algebra = LieAlgebraModel::new(n, basis)?;
    let form = algebra.killing_form().gram() * f.lambda;
    Ok(FactorData {
        algebra,
        dim_m,
        form,
    })
}

fn unit(d: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(d);
    v[i] = 1.0;
    v
}

impl SymmetricSpaceModel {
    /// One-factor model; `lambda` defaults per factor kind.
    pub fn make_factor(kind: FactorKind, lambda: Option<f64>) -> Result<Self> {
        Self::from_factors(vec![Factor::new(kind, lambda)?])
    }

    pub fn sphere(n: usize) -> Result<Self> {
        Self::make_factor(FactorKind::Sphere(n), None)
    }

    pub fn hyperbolic2() -> Result<Self> {
        Self::make_factor(FactorKind::Hyperbolic2, None)
    }

    pub fn sl_so(n: usize) -> Result<Self> {
        Self::make_factor(FactorKind::SlSo(n), None)
    }

    pub fn euclidean(r: usize) -> Result<Self> {
        Self::make_factor(FactorKind::Euclidean(r), None)
    }

    pub fn hyperboloid(n: usize) -> Result<Self> {
        Self::make_factor(FactorKind::Hyperboloid(n), None)
    }

    /// Product of models; Euclidean factors are merged into one.
    pub fn product(models: &[SymmetricSpaceModel]) -> Result<Self> {
        let factors: Vec<Factor> = models.iter().flat_map(|m| m.factors.iter().copied()).collect();
        Self::from_factors(factors)
    }

    /// Builds the product model of an explicit factor list.
    pub fn from_factors(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::BadParams(String::from("no factors")));
        }
        let factors = merge_flat(factors)?;
        let data = factors.iter().map(build_factor).collect::<Result<Vec<_>>>()?;
        let algebra = if data.len() == 1 {
            data[0].algebra.clone()
        } else {
            LieAlgebraModel::direct_sum(&data.iter().map(|d| &d.algebra).collect::<Vec<_>>())?
        };
        let d = algebra.dim();
        let mut m_idx = Vec::new();
        let mut h_idx = Vec::new();
        let mut gram = Matrix::zeros(d, d);
        let mut ranges = Vec::new();
        let mut h_blocks = Vec::new();
        let mut off = 0;
        for fd in &data {
            let k = fd.algebra.dim();
            m_idx.extend(off..off + fd.dim_m);
            h_idx.extend(off + fd.dim_m..off + k);
            gram.view_mut((off, off), (k, k)).copy_from(&fd.form);
            ranges.push((off, k));
            h_blocks.push(k - fd.dim_m);
            off += k;
        }
        let ambient_form = BilinearForm::new(gram)?;
        let m = Subspace::new(d, m_idx.iter().map(|&i| unit(d, i)).collect())?;
        let h = Subspace::new(d, h_idx.iter().map(|&i| unit(d, i)).collect())?;
        let cartan = CartanDecomposition::new(h, m)?;
        let names = ["[h,h] in h", "[h,m] in m", "[m,m] in h"];
        for (res, name) in cartan.inclusion_residuals(&algebra).iter().zip(names) {
            if *res > CARTAN_TOL {
                return Err(Error::CartanViolation {
                    inclusion: name,
                    residual: *res,
                });
            }
        }
        let metric_on_m = BilinearForm::new(ambient_form.restricted_gram(cartan.m().matrix()))?;
        let sig = metric_on_m.signature();
        if sig.pair() != (cartan.dim_m(), 0) {
            return Err(Error::BadParams(format!(
                "metric on m has signature {sig}, expected ({},0)",
                cartan.dim_m()
            )));
        }
        Ok(Self {
            factors,
            algebra,
            cartan,
            ambient_form,
            metric_on_m,
            factor_ranges: ranges,
            h_blocks,
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// `(offset, dim)` of each factor's block of algebra coordinates.
    pub fn factor_ranges(&self) -> &[(usize, usize)] {
        &self.factor_ranges
    }

    /// `dim h` of each factor, in the order of the `h` basis.
    pub fn h_block_dims(&self) -> &[usize] {
        &self.h_blocks
    }

    pub fn algebra(&self) -> &LieAlgebraModel {
        &self.algebra
    }

    pub fn cartan(&self) -> &CartanDecomposition {
        &self.cartan
    }

    pub fn ambient_form(&self) -> &BilinearForm {
        &self.ambient_form
    }

    pub fn metric_on_m(&self) -> &BilinearForm {
        &self.metric_on_m
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_m(&self) -> usize {
        self.cartan.dim_m()
    }

    pub fn dim_h(&self) -> usize {
        self.cartan.dim_h()
    }

    /// e.g. `sphere(2) x hyperbolic2`.
    pub fn descriptor(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.kind.name()).collect();
        parts.join(" x ")
    }

    /// The `i`-th `m` basis vector in algebra coordinates.
    pub fn m_basis(&self, i: usize) -> Vector {
        self.cartan.m().vector(i)
    }

    pub fn h_basis(&self, i: usize) -> Vector {
        self.cartan.h().vector(i)
    }

    /// The metric `g` on `m`, evaluated on algebra-coordinate vectors.
    pub fn metric(&self, x: &Vector, y: &Vector) -> f64 {
        self.ambient_form.eval(x, y)
    }

    /// Fails with `NotInM` when `x` has an `h`-component.
    pub fn check_in_m(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let r = max_abs_vec(&self.cartan.project_h(x));
        if r > CARTAN_TOL * (1.0 + max_abs_vec(x)) {
            return Err(Error::NotInM { residual: r });
        }
        Ok(())
    }

    /// Random vector of `m` with standard normal coordinates.
    pub fn random_m_vector<R: rand::Rng>(&self, rng: &mut R) -> Vector {
        self.cartan
            .from_m_coords(&rng::normal_vector(rng, self.dim_m(), 1.0))
    }

    /// Random vector of `h` with standard normal coordinates.
    pub fn random_h_vector<R: rand::Rng>(&self, rng: &mut R) -> Vector {
        let c = rng::normal_vector(rng, self.dim_h(), 1.0);
        self.cartan.h().matrix() * c
    }

    /// `exp(Z₁)·exp(Z₂)` with i.i.d. normal coefficients scaled by 0.5.
    pub fn random_group_element(&self, seed: u64) -> GroupElement {
        let mut r = rng::rng_for(seed, rng::stream_id("group-element"), 0);
        let z1 = rng::normal_vector(&mut r, self.dim(), SAMPLE_SCALE);
        let z2 = rng::normal_vector(&mut r, self.dim(), SAMPLE_SCALE);
        self.algebra
            .exp_unchecked(&z1)
            .mul(&self.algebra.exp_unchecked(&z2))
    }

    /// `g·exp(tX)`, the geodesic through `⟦g⟧` with initial velocity `⟦g,X⟧`.
    pub fn geodesic_point(&self, g: &GroupElement, x: &Vector, t: f64) -> Result<GroupElement> {
        self.check_in_m(x)?;
        Ok(g.mul(&self.algebra.exp_unchecked(&(x * t))))
    }

    /// The parallel field `⟦g·exp(tX), Y⟧` along the geodesic.
    pub fn parallel_field(&self, g: &GroupElement, x: &Vector, y: &Vector, t: f64) -> Result<TangentRep> {
        self.check_in_m(y)?;
        Ok(TangentRep {
            point: self.geodesic_point(g, x, t)?,
            vector: y.clone(),
        })
    }

    /// `R(X,Y)Z = [[X,Y],Z]`, with `R(X,Y)Z = ∇_Y∇_X Z − ∇_X∇_Y Z + ∇_[X,Y] Z`.
    pub fn curvature_tensor(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        for v in [x, y, z] {
            self.check_in_m(v)?;
        }
        Ok(self.curv(x, y, z))
    }

    pub(crate) fn curv(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        self.algebra.br(&self.algebra.br(x, y), z)
    }

    /// `exp(X)` for an arbitrary algebra vector.
    pub fn exp(&self, x: &Vector) -> GroupElement {
        self.algebra.exp_unchecked(x)
    }

    /// `Ad_g` as a matrix on algebra coordinates.
    pub fn ad_matrix(&self, g: &GroupElement) -> Matrix {
        self.algebra
            .adjoint_matrix(g)
            .expect("group elements of the model normalize the algebra")
    }
}

fn merge_flat(factors: Vec<Factor>) -> Result<Vec<Factor>> {
    let mut out: Vec<Factor> = Vec::new();
    let mut flat: Option<usize> = None;
    for f in factors {
        if let FactorKind::Euclidean(r) = f.kind {
            if let Some(i) = flat {
                let FactorKind::Euclidean(r0) = out[i].kind else {
                    unreachable!()
                };
                if out[i].lambda != f.lambda {
                    return Err(Error::BadParams(String::from(
                        "euclidean factors with different scalings cannot be merged",
                    )));
                }
                out[i].kind = FactorKind::Euclidean(r0 + r);
                continue;
            }
            flat = Some(out.len());
        }
        out.push(f);
    }
    Ok(out)
}
