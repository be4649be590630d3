use cartanvirt_core::immersion::random_isometry;
use cartanvirt_core::linalg::{max_abs, max_abs_vec, rank};
use cartanvirt_core::verification::{
    curvature_operator, equivalence_map, hat_connection, hat_omega, kernel_of_hat_omega, wedge, HatElement,
};
use cartanvirt_core::{
    omega0, BilinearForm, ComposedImmersion, Error, GroupElement, ImmersionKind, Matrix, SymmetricSpaceModel, Vector,
    VirtualImmersion,
};

fn s2() -> SymmetricSpaceModel {
    SymmetricSpaceModel::sphere(2).unwrap()
}

fn s2_r1() -> SymmetricSpaceModel {
    SymmetricSpaceModel::product(&[s2(), SymmetricSpaceModel::euclidean(1).unwrap()]).unwrap()
}

/// `dim{α ∈ Λ²m : Σ α_ij R(m_i,m_j) = 0}` by brute force over the curvature tensor.
fn flat_wedges(space: &SymmetricSpaceModel) -> usize {
    let d = space.dim_m();
    let mut cols = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut col = Vec::new();
            for k in 0..d {
                let r = space
                    .curvature_tensor(&space.m_basis(i), &space.m_basis(j), &space.m_basis(k))
                    .unwrap();
                col.extend(r.iter().cloned());
            }
            cols.push(Vector::from_vec(col));
        }
    }
    if cols.is_empty() {
        return 0;
    }
    cols.len() - rank(&Matrix::from_columns(&cols))
}

#[test]
fn kernel_dimensions() {
    for (space, expected) in [
        (s2(), 0),
        (SymmetricSpaceModel::euclidean(2).unwrap(), 1),
        (s2_r1(), 2),
        (SymmetricSpaceModel::sphere(3).unwrap(), 0),
        (SymmetricSpaceModel::sl_so(3).unwrap(), flat_wedges(&SymmetricSpaceModel::sl_so(3).unwrap())),
        (
            SymmetricSpaceModel::product(&[s2(), SymmetricSpaceModel::hyperbolic2().unwrap()]).unwrap(),
            4,
        ),
    ] {
        let k = kernel_of_hat_omega(&omega0(&space)).unwrap();
        assert_eq!(k.dim, expected, "{}", space.descriptor());
        assert_eq!(k.dim, flat_wedges(&space), "{}", space.descriptor());
        assert_eq!(k.curvature_kernel_dim, k.dim);
        assert_eq!(k.pairing_kernel_dim, k.dim);
        assert!(k.span_mismatch < 1e-9 && k.pairing_mismatch < 1e-9);
        assert!(k.surjective());
        for el in &k.basis {
            assert!(max_abs_vec(el.z()) < 1e-9);
            assert!(max_abs(&curvature_operator(&space, el.alpha())) < 1e-9);
        }
    }
}

#[test]
fn hat_connection_examples() {
    let space = s2();
    let (x, y) = (space.m_basis(0), space.m_basis(1));
    let zero = Matrix::zeros(2, 2);

    let el = HatElement::new(&space, y.clone(), zero.clone()).unwrap();
    let out = hat_connection(&space, &x, &el).unwrap();
    assert!(max_abs_vec(out.z()) < 1e-15);
    assert!(max_abs(&(out.alpha() - wedge(&space, &x, &y))) < 1e-15);

    let flat = SymmetricSpaceModel::euclidean(2).unwrap();
    let (a, b) = (flat.m_basis(0), flat.m_basis(1));
    let el = HatElement::from_wedges(&flat, Vector::zeros(2), &[(1.0, a.clone(), b)]).unwrap();
    let out = hat_connection(&flat, &a, &el).unwrap();
    assert!(max_abs_vec(out.z()) < 1e-15 && max_abs(out.alpha()) < 1e-15);

    let el = HatElement::from_wedges(&space, Vector::zeros(3), &[(0.7, x.clone(), y.clone())]).unwrap();
    let out = hat_connection(&space, &x, &el).unwrap();
    let expected = -space.curvature_tensor(&x, &y, &x).unwrap() * 0.7;
    assert!(max_abs_vec(&expected) > 0.1);
    assert!(max_abs_vec(&(out.z() - expected)) < 1e-14);
}

#[test]
fn hat_omega_examples() {
    let space = s2();
    let imm = omega0(&space);
    let (x, y) = (space.m_basis(0), space.m_basis(1));
    let z = &x * 0.4 - &y * 1.3;
    let el = HatElement::new(&space, z.clone(), Matrix::zeros(2, 2)).unwrap();
    assert!(max_abs_vec(&(hat_omega(&imm, &el) - &z)) < 1e-15);

    let el = HatElement::from_wedges(&space, Vector::zeros(3), &[(1.0, x.clone(), y.clone())]).unwrap();
    let bracket = space.algebra().bracket(&x, &y).unwrap();
    assert!(max_abs_vec(&(hat_omega(&imm, &el) - bracket)) < 1e-15);

    let el = HatElement::from_wedges(&space, Vector::zeros(3), &[(1.0, x.clone(), y.clone()), (1.0, y, x)]).unwrap();
    assert!(max_abs_vec(&hat_omega(&imm, &el)) < 1e-15);

    let bad = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    assert!(HatElement::new(&space, Vector::zeros(3), bad).is_err());
}

#[test]
fn equivalence_recovers_identity_and_isometries() {
    for space in [s2(), SymmetricSpaceModel::hyperbolic2().unwrap(), SymmetricSpaceModel::sl_so(3).unwrap()] {
        let imm = omega0(&space);
        let same = equivalence_map(&imm, &imm, 4, 0).unwrap();
        let v = space.dim();
        assert!(max_abs(&(same.l - Matrix::identity(v, v))) < 1e-12);
        assert!(same.isometry_residual < 1e-12 && same.constancy_residual < 1e-10);
        for seed in 0..5 {
            let iota = random_isometry(imm.target_form(), seed, 0.5);
            let composed = ComposedImmersion::new(Box::new(&imm), iota.clone()).unwrap();
            let eq = equivalence_map(&imm, &composed, 4, seed).unwrap();
            assert!(max_abs(&(&eq.l - &iota)) < 1e-8, "{}", space.descriptor());
            assert!(eq.isometry_residual < 1e-8 && eq.constancy_residual < 1e-8);
        }
    }
}

#[test]
fn different_spaces_are_not_equivalent() {
    let sphere = omega0(&s2());
    let flat = omega0(&SymmetricSpaceModel::euclidean(3).unwrap());
    assert!(matches!(equivalence_map(&sphere, &flat, 2, 0), Err(Error::DimensionMismatch { .. })));

    // Same dimensions and kernel dimensions, different spaces.
    let hyperbolic = omega0(&SymmetricSpaceModel::hyperbolic2().unwrap());
    assert!(matches!(equivalence_map(&sphere, &hyperbolic, 2, 0), Err(Error::KernelMismatch { .. })));
}

/// `Ω = Ad_g` on `S²×ℝ` with a second fundamental form pairing the sphere's
/// first direction with the line instead of with the sphere's second direction.
struct Twisted {
    space: SymmetricSpaceModel,
    form: BilinearForm,
    scale: f64,
}

impl Twisted {
    fn new(scale: f64) -> Self {
        let space = s2_r1();
        let form = space.ambient_form().clone();
        Self { space, form, scale }
    }
}

impl VirtualImmersion for Twisted {
    fn space(&self) -> &SymmetricSpaceModel {
        &self.space
    }

    fn target_form(&self) -> &BilinearForm {
        &self.form
    }

    fn kind(&self) -> ImmersionKind {
        ImmersionKind::Composed
    }

    fn has_skew_ii(&self) -> bool {
        true
    }

    fn omega_raw(&self, g: &GroupElement, x: &Vector) -> Vector {
        self.space.algebra().adjoint_action(g, x).unwrap()
    }

    fn second_fundamental_form_raw(&self, g: &GroupElement, x: &Vector, y: &Vector) -> Vector {
        let (a, b) = (self.space.cartan().m_coords(x), self.space.cartan().m_coords(y));
        let h = self.space.h_basis(0) * (self.scale * (a[0] * b[2] - a[2] * b[0]));
        self.space.algebra().adjoint_action(g, &h).unwrap()
    }
}

#[test]
fn kernel_mismatch_detected() {
    let canonical = omega0(&s2_r1());
    let twisted = Twisted::new(1.0);
    assert_eq!(kernel_of_hat_omega(&twisted).unwrap().dim, 2);
    match equivalence_map(&canonical, &twisted, 2, 0) {
        Err(Error::KernelMismatch { .. }) => {}
        other => panic!("expected a kernel mismatch, got {other:?}"),
    }
}

#[test]
fn non_full_immersion_rejected() {
    let degenerate = Twisted::new(0.0);
    assert!(matches!(kernel_of_hat_omega(&degenerate), Err(Error::NotFull { spanned: 3, dim: 4 })));
    let canonical = omega0(&s2_r1());
    assert!(matches!(equivalence_map(&canonical, &degenerate, 2, 0), Err(Error::NotFull { .. })));
}
