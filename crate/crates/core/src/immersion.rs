//! Virtual immersions `Ω : TM → (V, ⟨,⟩)`: the canonical `⟦g,X⟧ ↦ Ad_g X`,
//! classical differentials of explicit embeddings, and compositions with
//! linear isometries of the target.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::bilinear::{BilinearForm, TangentSplitter};
use crate::error::{Error, Result};
use crate::fd;
use crate::lie::GroupElement;
use crate::linalg::{max_abs_vec, null_space, rank, Matrix, Vector};
use crate::rng;
use crate::symmetric::{FactorKind, SymmetricSpaceModel, TangentRep};

/// Normality tolerance for [`shape_operator`].
pub const NORMAL_TOL: f64 = 1e-9;

/// Internal step of the second-derivative oracle of classical embeddings.
pub const CLASSICAL_STEP: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImmersionKind {
    Canonical,
    ClassicalEmbedding,
    Composed,
}

impl ImmersionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ImmersionKind::Canonical => "canonical",
            ImmersionKind::ClassicalEmbedding => "classical-embedding",
            ImmersionKind::Composed => "composed",
        }
    }
}

/// Point-indexed evaluators of a virtual immersion.
///
/// Tangent vectors are passed as representatives `(g, X)` with `X ∈ m` in
/// algebra coordinates; the `_raw` methods skip membership checks.
pub trait VirtualImmersion {
    fn space(&self) -> &SymmetricSpaceModel;

    /// The codomain form `⟨,⟩` on `V`.
    fn target_form(&self) -> &BilinearForm;

    fn kind(&self) -> ImmersionKind;

    fn omega_raw(&self, g: &GroupElement, x: &Vector) -> Vector;

    fn second_fundamental_form_raw(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector;

    /// Whether `II` is skew by construction.
    fn has_skew_ii(&self) -> bool {
        false
    }

    /// Whether `II` comes from finite differences and not a closed form.
    fn numerical_ii(&self) -> bool {
        false
    }

    /// Columns spanning the normal space at `⟦g⟧`.
    fn normal_frame(&self, g: &GroupElement) -> Matrix {
        let t = tangent_frame(self, g);
        null_space(&(t.transpose() * self.target_form().gram()))
    }

    /// Sizes of consecutive column blocks of [`normal_frame`](Self::normal_frame)
    /// spanning mutually orthogonal, parallel subbundles.
    fn normal_blocks(&self) -> Vec<usize> {
        alloc::vec![self.target_form().dim() - self.space().dim_m()]
    }
}

impl<T: VirtualImmersion + ?Sized> VirtualImmersion for &T {
    fn space(&self) -> &SymmetricSpaceModel {
        (**self).space()
    }

    fn target_form(&self) -> &BilinearForm {
        (**self).target_form()
    }

    fn kind(&self) -> ImmersionKind {
        (**self).kind()
    }

    fn omega_raw(&self, g: &GroupElement, x: &Vector) -> Vector {
        (**self).omega_raw(g, x)
    }

    fn second_fundamental_form_raw(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
        (**self).second_fundamental_form_raw(g, x, y)
    }

    fn has_skew_ii(&self) -> bool {
        (**self).has_skew_ii()
    }

    fn numerical_ii(&self) -> bool {
        (**self).numerical_ii()
    }

    fn normal_frame(&self, g: &GroupElement) -> Matrix {
        (**self).normal_frame(g)
    }

    fn normal_blocks(&self) -> Vec<usize> {
        (**self).normal_blocks()
    }
}

/// Columns `Ω(g, m_i)` over the `m` basis.
pub fn tangent_frame<I: VirtualImmersion + ?Sized>(imm: &I, g: &GroupElement) -> Matrix {
    let s = imm.space();
    let cols: Vec<Vector> = (0..s.dim_m()).map(|i| imm.omega_raw(g, &s.m_basis(i))).collect();
    if cols.is_empty() {
        Matrix::zeros(imm.target_form().dim(), 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Tangent/normal splitting of `V` at `⟦g⟧`; tangent coordinates are `m`-coordinates.
pub fn splitter_at<I: VirtualImmersion + ?Sized>(imm: &I, g: &GroupElement) -> Result<TangentSplitter> {
    TangentSplitter::from_frame(imm.target_form(), tangent_frame(imm, g))
}

/// `(Ad_{g⁻¹}X)_m`, the action field `X*` at `⟦g⟧` for any `X ∈ g`.
pub fn action_field(space: &SymmetricSpaceModel, g: &GroupElement, x: &Vector) -> Vector {
    let y = space.algebra().conjugate(g.inverse_matrix(), g.matrix(), x);
    space.cartan().project_m(&y)
}

/// `Ω(v)` for a checked representative.
pub fn evaluate_omega<I: VirtualImmersion + ?Sized>(imm: &I, v: &TangentRep) -> Result<Vector> {
    imm.space().check_in_m(&v.vector)?;
    Ok(imm.omega_raw(&v.point, &v.vector))
}

/// `II(X,Y)` at `⟦g⟧` with membership checks.
pub fn second_fundamental_form<I: VirtualImmersion + ?Sized>(
    imm: &I,
    g: &GroupElement,
    x: &Vector,
    y: &Vector,
) -> Result<Vector> {
    imm.space().check_in_m(x)?;
    imm.space().check_in_m(y)?;
    Ok(imm.second_fundamental_form_raw(g, x, y))
}

/// `D_{X*}Ω(Y*)` at `⟦g⟧` by central differences of `t ↦ Ω(Y*⟦exp(tX)·g⟧)`.
pub fn action_field_derivative_fd<I: VirtualImmersion + ?Sized>(
    imm: &I,
    g: &GroupElement,
    x: &Vector,
    y: &Vector,
    h: f64,
    richardson: bool,
) -> Vector {
    let s = imm.space();
    fd::derivative(
        |t| {
            let p = s.exp(&(x * t)).mul(g);
            imm.omega_raw(&p, &action_field(s, &p, y))
        },
        h,
        richardson,
    )
}

/// The unique `S_η X ∈ m` with `g(S_η X, Y) = ⟨II(X,Y), η⟩` for all `Y ∈ m`.
pub fn shape_operator<I: VirtualImmersion + ?Sized>(
    imm: &I,
    g: &GroupElement,
    eta: &Vector,
    x: &Vector,
) -> Result<Vector> {
    let s = imm.space();
    s.check_in_m(x)?;
    let form = imm.target_form();
    if eta.len() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: eta.len(),
        });
    }
    let frame = tangent_frame(imm, g);
    let tangential = frame.transpose() * form.gram() * eta;
    let r = max_abs_vec(&tangential);
    if r > NORMAL_TOL * (1.0 + max_abs_vec(eta)) {
        return Err(Error::NotNormal { residual: r });
    }
    shape_operator_raw(imm, g, eta, x)
}

pub(crate) fn shape_operator_raw<I: VirtualImmersion + ?Sized>(
    imm: &I,
    g: &GroupElement,
    eta: &Vector,
    x: &Vector,
) -> Result<Vector> {
    let s = imm.space();
    let form = imm.target_form();
    let rhs = Vector::from_fn(s.dim_m(), |i, _| {
        form.eval(&imm.second_fundamental_form_raw(g, x, &s.m_basis(i)), eta)
    });
    let chol = s
        .metric_on_m()
        .gram()
        .clone()
        .cholesky()
        .ok_or(Error::SingularMetric)?;
    Ok(s.cartan().from_m_coords(&chol.solve(&rhs)))
}

/// Columns `Ω(e, m_i)` followed by `II_e(m_i, m_j)` for `i ≤ j`.
pub fn base_span_matrix<I: VirtualImmersion + ?Sized>(imm: &I) -> Matrix {
    let s = imm.space();
    let e = s.algebra().identity();
    let mut cols: Vec<Vector> = (0..s.dim_m()).map(|i| imm.omega_raw(&e, &s.m_basis(i))).collect();
    for i in 0..s.dim_m() {
        for j in i..s.dim_m() {
            cols.push(imm.second_fundamental_form_raw(&e, &s.m_basis(i), &s.m_basis(j)));
        }
    }
    Matrix::from_columns(&cols)
}

/// `(spanned_dim == dim V, spanned_dim)` for the span of `Ω` and `II` at the base point.
pub fn fullness<I: VirtualImmersion + ?Sized>(imm: &I) -> (bool, usize) {
    let r = rank(&base_span_matrix(imm));
    (r == imm.target_form().dim(), r)
}

/// `max ‖Ω(dγ v) − Ω(v)‖∞` over `samples` seeded representatives `v`.
pub fn check_invariance<I, F>(imm: &I, dgamma: F, samples: usize, seed: u64) -> f64
where
    I: VirtualImmersion + ?Sized,
    F: Fn(&TangentRep) -> TangentRep,
{
    let s = imm.space();
    let stream = rng::stream_id("invariance");
    let mut worst = 0.0f64;
    for i in 0..samples as u64 {
        let g = s.random_group_element(rng::sub_seed(seed, stream, i));
        let mut r = rng::rng_for(seed, stream, i);
        let v = TangentRep {
            point: g,
            vector: s.random_m_vector(&mut r),
        };
        let w = dgamma(&v);
        let d = imm.omega_raw(&w.point, &w.vector) - imm.omega_raw(&v.point, &v.vector);
        worst = worst.max(max_abs_vec(&d));
    }
    worst
}

/// Differential of the left translation by `gamma`, `⟦g,X⟧ ↦ ⟦γg,X⟧`.
///
/// Fails if `gamma` does not normalize the algebra.
pub fn deck_map(
    space: &SymmetricSpaceModel,
    gamma: &GroupElement,
) -> Result<impl Fn(&TangentRep) -> TangentRep> {
    space.algebra().adjoint_matrix(gamma)?;
    let gamma = gamma.clone();
    Ok(move |v: &TangentRep| TangentRep {
        point: gamma.mul(&v.point),
        vector: v.vector.clone(),
    })
}

/// `Ω₀⟦g,X⟧ = Ad_g X` into `(g, ⊕ λᵢ Bᵢ)`.
#[derive(Debug, Clone)]
pub struct CanonicalImmersion {
    space: SymmetricSpaceModel,
    form: BilinearForm,
}

/// The canonical immersion of `space`.
pub fn omega0(space: &SymmetricSpaceModel) -> CanonicalImmersion {
    CanonicalImmersion::new(space.clone())
}

impl CanonicalImmersion {
    pub fn new(space: SymmetricSpaceModel) -> Self {
        let form = space.ambient_form().clone();
        Self { space, form }
    }

    /// Same evaluators with a replaced codomain form; used for fault injection.
    pub fn with_target_form(mut self, form: BilinearForm) -> Result<Self> {
        if form.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: form.dim(),
            });
        }
        self.form = form;
        Ok(self)
    }

    fn ad(&self, g: &GroupElement, x: &Vector) -> Vector {
        self.space.algebra().conjugate(g.matrix(), g.inverse_matrix(), x)
    }

    /// `Ad_g([Ad_{g⁻¹}X, (Ad_{g⁻¹}Y)_m] − (Ad_{g⁻¹}[X,Y])_m)`.
    pub fn action_field_derivative(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
        let s = &self.space;
        let alg = s.algebra();
        let gi = g.inverse_matrix();
        let gm = g.matrix();
        let xi = alg.conjugate(gi, gm, x);
        let yi = s.cartan().project_m(&alg.conjugate(gi, gm, y));
        let xy = s.cartan().project_m(&alg.conjugate(gi, gm, &alg.br(x, y)));
        self.ad(g, &(alg.br(&xi, &yi) - xy))
    }
}

impl VirtualImmersion for CanonicalImmersion {
    fn space(&self) -> &SymmetricSpaceModel {
        &self.space
    }

    fn target_form(&self) -> &BilinearForm {
        &self.form
    }

    fn kind(&self) -> ImmersionKind {
        ImmersionKind::Canonical
    }

    fn has_skew_ii(&self) -> bool {
        true
    }

    fn omega_raw(&self, g: &GroupElement, x: &Vector) -> Vector {
        self.ad(g, x)
    }

    fn second_fundamental_form_raw(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
        self.ad(g, &self.space.algebra().br(x, y))
    }

    fn normal_frame(&self, g: &GroupElement) -> Matrix {
        let s = &self.space;
        let cols: Vec<Vector> = (0..s.dim_h()).map(|i| self.ad(g, &s.h_basis(i))).collect();
        if cols.is_empty() {
            Matrix::zeros(s.dim(), 0)
        } else {
            Matrix::from_columns(&cols)
        }
    }

    /// One block per factor.
    fn normal_blocks(&self) -> Vec<usize> {
        self.space.h_block_dims().to_vec()
    }
}

/// Embedded model spaces for which `Ω = dφ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalKind {
    /// Unit sphere `S^n ⊂ ℝ^{n+1}`.
    SphereInEuclidean(usize),
    /// Hyperboloid `H^n ⊂ ℝ^{n,1}`.
    HyperboloidInLorentz(usize),
}

/// `Ω(g,X) = g·X·o` for the orbit map `φ(g) = g·o` of a base point `o`.
#[derive(Debug, Clone)]
pub struct ClassicalImmersion {
    space: SymmetricSpaceModel,
    form: BilinearForm,
    origin: Vector,
    which: ClassicalKind,
}

/// Differential of the explicit embedding of a sphere or hyperboloid.
pub fn classical_immersion(which: ClassicalKind) -> Result<ClassicalImmersion> {
    let (space, form, origin) = match which {
        ClassicalKind::SphereInEuclidean(n) => {
            let space = SymmetricSpaceModel::make_factor(FactorKind::Sphere(n), None)?;
            let mut o = Vector::zeros(n + 1);
            o[0] = 1.0;
            (space, BilinearForm::euclidean(n + 1), o)
        }
        ClassicalKind::HyperboloidInLorentz(n) => {
            let space = SymmetricSpaceModel::make_factor(FactorKind::Hyperboloid(n), None)?;
            let mut d = alloc::vec![1.0; n + 1];
            d[n] = -1.0;
            let mut o = Vector::zeros(n + 1);
            o[n] = 1.0;
            (space, BilinearForm::diagonal(&d)?, o)
        }
    };
    Ok(ClassicalImmersion {
        space,
        form,
        origin,
        which,
    })
}

impl ClassicalImmersion {
    pub fn which(&self) -> ClassicalKind {
        self.which
    }

    /// `φ(g) = g·o`.
    pub fn embedding(&self, g: &GroupElement) -> Vector {
        g.matrix() * &self.origin
    }
}

impl VirtualImmersion for ClassicalImmersion {
    fn space(&self) -> &SymmetricSpaceModel {
        &self.space
    }

    fn target_form(&self) -> &BilinearForm {
        &self.form
    }

    fn kind(&self) -> ImmersionKind {
        ImmersionKind::ClassicalEmbedding
    }

    fn numerical_ii(&self) -> bool {
        true
    }

    fn omega_raw(&self, g: &GroupElement, x: &Vector) -> Vector {
        g.matrix() * (self.space.algebra().to_matrix(x) * &self.origin)
    }

    /// Normal part of `∂²φ(g·e^{sX}·e^{tY})/∂s∂t` at `s = t = 0`, by
    /// Richardson-extrapolated central differences of the embedding.
    fn second_fundamental_form_raw(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
        let s = &self.space;
        let d2 = fd::mixed_partial(
            |a, b| self.embedding(&g.mul(&s.exp(&(x * a))).mul(&s.exp(&(y * b)))),
            CLASSICAL_STEP,
            true,
        );
        match splitter_at(self, g) {
            Ok(sp) => sp.normal_part(&d2),
            Err(_) => d2,
        }
    }
}

/// `ι ∘ Ω` for a linear map `ι` of the target; an isometry when `ιᵀGι = G`.
pub struct ComposedImmersion<'a> {
    inner: Box<dyn VirtualImmersion + 'a>,
    iota: Matrix,
}

impl<'a> ComposedImmersion<'a> {
    pub fn new(inner: Box<dyn VirtualImmersion + 'a>, iota: Matrix) -> Result<Self> {
        let d = inner.target_form().dim();
        if iota.nrows() != d || iota.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: iota.nrows(),
            });
        }
        Ok(Self { inner, iota })
    }

    pub fn iota(&self) -> &Matrix {
        &self.iota
    }
}

impl VirtualImmersion for ComposedImmersion<'_> {
    fn space(&self) -> &SymmetricSpaceModel {
        self.inner.space()
    }

    fn target_form(&self) -> &BilinearForm {
        self.inner.target_form()
    }

    fn kind(&self) -> ImmersionKind {
        ImmersionKind::Composed
    }

    fn has_skew_ii(&self) -> bool {
        self.inner.has_skew_ii()
    }

    fn numerical_ii(&self) -> bool {
        self.inner.numerical_ii()
    }

    fn omega_raw(&self, g: &GroupElement, x: &Vector) -> Vector {
        &self.iota * self.inner.omega_raw(g, x)
    }

    fn second_fundamental_form_raw(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
        &self.iota * self.inner.second_fundamental_form_raw(g, x, y)
    }

    fn normal_frame(&self, g: &GroupElement) -> Matrix {
        &self.iota * self.inner.normal_frame(g)
    }

    fn normal_blocks(&self) -> Vec<usize> {
        self.inner.normal_blocks()
    }
}

/// Random linear isometry `exp(G⁻¹K)` of `(V, G)` with `K` antisymmetric.
pub fn random_isometry(form: &BilinearForm, seed: u64, scale: f64) -> Matrix {
    let d = form.dim();
    let mut r = rng::rng_for(seed, rng::stream_id("isometry"), 0);
    let a = rng::normal_vector(&mut r, d * d, scale);
    let a = Matrix::from_column_slice(d, d, a.as_slice());
    let k = &a - a.transpose();
    let ginv = form
        .gram()
        .clone()
        .try_inverse()
        .expect("nondegenerate form");
    crate::expm::expm(&(ginv * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::isometry_residual;
    use crate::linalg::max_abs;

    fn s2() -> SymmetricSpaceModel {
        SymmetricSpaceModel::sphere(2).unwrap()
    }

    #[test]
    fn canonical_at_identity_is_identity() {
        let s = s2();
        let o = omega0(&s);
        let e = s.algebra().identity();
        let x = s.m_basis(0) * 0.3 - s.m_basis(1);
        let v = TangentRep { point: e, vector: x.clone() };
        assert_eq!(evaluate_omega(&o, &v).unwrap(), x);
        let z = TangentRep {
            point: s.random_group_element(1),
            vector: Vector::zeros(3),
        };
        assert_eq!(evaluate_omega(&o, &z).unwrap(), Vector::zeros(3));
        let bad = TangentRep {
            point: s.random_group_element(1),
            vector: s.h_basis(0),
        };
        assert!(matches!(evaluate_omega(&o, &bad), Err(Error::NotInM { .. })));
    }

    #[test]
    fn canonical_constant_along_geodesic() {
        let s = s2();
        let o = omega0(&s);
        let g = s.random_group_element(2);
        let x = s.m_basis(0) * 0.8 + s.m_basis(1) * 0.1;
        let base = o.omega_raw(&g, &x);
        for t in [0.3, 1.1, -2.0] {
            let p = s.geodesic_point(&g, &x, t).unwrap();
            assert!(max_abs_vec(&(o.omega_raw(&p, &x) - &base)) < 1e-12);
        }
    }

    #[test]
    fn h_equivariance() {
        let s = SymmetricSpaceModel::sl_so(3).unwrap();
        let o = omega0(&s);
        let g = s.random_group_element(3);
        let x = s.m_basis(1) - s.m_basis(3) * 0.5;
        let hvec = s.h_basis(0) * 0.7 + s.h_basis(2) * 0.2;
        let h = s.exp(&hvec);
        let xh = s.algebra().conjugate(h.inverse_matrix(), h.matrix(), &x);
        let a = o.omega_raw(&g.mul(&h), &xh);
        assert!(max_abs_vec(&(a - o.omega_raw(&g, &x))) < 1e-9);
    }

    #[test]
    fn action_field_derivative_examples() {
        let s = s2();
        let o = omega0(&s);
        let e = s.algebra().identity();
        let (x, y) = (s.m_basis(0), s.m_basis(1));
        let d = o.action_field_derivative(&e, &x, &y);
        assert!(max_abs_vec(&(&d - s.algebra().br(&x, &y))) < 1e-14);
        assert!(max_abs_vec(&s.cartan().project_m(&d)) < 1e-14);
        assert_eq!(o.action_field_derivative(&e, &x, &x), Vector::zeros(3));
        let g = s.random_group_element(4);
        let xg = s.h_basis(0) + s.m_basis(1) * 0.4;
        let yg = s.m_basis(0) - s.h_basis(0) * 2.0;
        let fd = action_field_derivative_fd(&o, &g, &xg, &yg, 1e-4, true);
        assert!(max_abs_vec(&(fd - o.action_field_derivative(&g, &xg, &yg))) < 1e-6);
    }

    #[test]
    fn second_fundamental_form_examples() {
        let s = s2();
        let o = omega0(&s);
        let e = s.algebra().identity();
        let x = s.m_basis(0) + s.m_basis(1) * 2.0;
        assert_eq!(second_fundamental_form(&o, &e, &x, &x).unwrap(), Vector::zeros(3));
        let ii = second_fundamental_form(&o, &e, &s.m_basis(0), &s.m_basis(1)).unwrap();
        assert!(max_abs_vec(&s.cartan().project_m(&ii)) < 1e-15);
        assert!(second_fundamental_form(&o, &e, &s.h_basis(0), &x).is_err());
        let r = SymmetricSpaceModel::euclidean(2).unwrap();
        let or = omega0(&r);
        let g = r.random_group_element(0);
        assert_eq!(
            or.second_fundamental_form_raw(&g, &r.m_basis(0), &r.m_basis(1)),
            Vector::zeros(2)
        );
    }

    #[test]
    fn shape_operator_examples() {
        let s = s2();
        let o = omega0(&s);
        let e = s.algebra().identity();
        let x = s.m_basis(0) * 0.5 + s.m_basis(1);
        assert_eq!(shape_operator(&o, &e, &Vector::zeros(3), &x).unwrap(), Vector::zeros(3));
        let eta = s.h_basis(0) * 1.5;
        let so = shape_operator(&o, &e, &eta, &x).unwrap();
        assert!(max_abs_vec(&(so - s.algebra().br(&eta, &x))) < 1e-12);
        assert!(matches!(
            shape_operator(&o, &e, &s.m_basis(0), &x),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn classical_sphere_shape_operator_is_minus_identity() {
        // outward normal at φ(g) is φ(g) itself; D_X φ = Ω(X) so S = −id
        let c = classical_immersion(ClassicalKind::SphereInEuclidean(2)).unwrap();
        let s = c.space().clone();
        let g = s.random_group_element(6);
        let eta = c.embedding(&g);
        for i in 0..2 {
            let x = s.m_basis(i);
            let so = shape_operator(&c, &g, &eta, &x).unwrap();
            assert!(max_abs_vec(&(so + &x)) < 1e-7);
        }
    }

    #[test]
    fn classical_forms_and_symmetry() {
        let c = classical_immersion(ClassicalKind::SphereInEuclidean(2)).unwrap();
        assert_eq!(c.target_form().signature().pair(), (3, 0));
        let h = classical_immersion(ClassicalKind::HyperboloidInLorentz(2)).unwrap();
        assert_eq!(h.target_form().signature().pair(), (2, 1));
        for imm in [&c, &h] {
            let s = imm.space();
            let g = s.random_group_element(8);
            let mut r = rng::rng_for(8, 0, 0);
            let x = s.random_m_vector(&mut r);
            let y = s.random_m_vector(&mut r);
            let a = imm.second_fundamental_form_raw(&g, &x, &y);
            let b = imm.second_fundamental_form_raw(&g, &y, &x);
            assert!(max_abs_vec(&(&a - &b)) < 1e-7);
            // closed form: normal part of g·X·Y·o
            let alg = s.algebra();
            let exact = g.matrix() * alg.to_matrix(&x) * alg.to_matrix(&y) * &imm.origin;
            let exact = splitter_at(imm, &g).unwrap().normal_part(&exact);
            assert!(max_abs_vec(&(a - exact)) < 1e-8);
        }
        assert!(classical_immersion(ClassicalKind::SphereInEuclidean(1)).is_err());
    }

    #[test]
    fn fullness_examples() {
        assert_eq!(fullness(&omega0(&s2())), (true, 3));
        assert_eq!(fullness(&omega0(&SymmetricSpaceModel::euclidean(3).unwrap())), (true, 3));
        assert_eq!(fullness(&omega0(&SymmetricSpaceModel::sl_so(3).unwrap())), (true, 8));
    }

    #[test]
    fn invariance_examples() {
        let s = s2();
        let o = omega0(&s);
        let id = deck_map(&s, &s.algebra().identity()).unwrap();
        assert_eq!(check_invariance(&o, id, 10, 1), 0.0);
        let s3 = SymmetricSpaceModel::sphere(3).unwrap();
        let o3 = omega0(&s3);
        let minus = GroupElement::new(-Matrix::identity(4, 4), s3.algebra().blocks().to_vec()).unwrap();
        assert_eq!(check_invariance(&o3, deck_map(&s3, &minus).unwrap(), 20, 1), 0.0);
        // generic rotation about the h axis
        let rot = s.exp(&(s.h_basis(0) * 1.0));
        assert!(check_invariance(&o, deck_map(&s, &rot).unwrap(), 20, 1) > 0.1);
        let scale = GroupElement::new(
            Matrix::from_diagonal(&Vector::from_column_slice(&[2.0, 1.0, 1.0])),
            s.algebra().blocks().to_vec(),
        )
        .unwrap();
        assert!(matches!(deck_map(&s, &scale), Err(Error::ClosureViolation { .. })));
    }

    #[test]
    fn random_isometry_preserves_form() {
        let s = SymmetricSpaceModel::hyperbolic2().unwrap();
        let form = s.ambient_form();
        let iota = random_isometry(form, 5, 0.5);
        assert!(isometry_residual(form, form, &iota).unwrap() < 1e-12);
        assert!(max_abs(&(iota - Matrix::identity(3, 3))) > 1e-3);
    }

    #[test]
    fn composed_immersion_applies_iota() {
        let s = s2();
        let iota = random_isometry(s.ambient_form(), 9, 0.5);
        let c = ComposedImmersion::new(Box::new(omega0(&s)), iota.clone()).unwrap();
        let g = s.random_group_element(1);
        let x = s.m_basis(1);
        assert!(max_abs_vec(&(c.omega_raw(&g, &x) - &iota * omega0(&s).omega_raw(&g, &x))) < 1e-15);
        assert_eq!(fullness(&c), (true, 3));
    }
}
