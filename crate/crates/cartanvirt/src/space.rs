//! `--space` arguments: catalog shorthand (`sphere:2`, `sl_so:3`,
//! `sphere:2,euclidean:1`, `classical:hyperboloid:2`), the word `catalog`,
//! or a path to a JSON space file.

use std::path::Path;

use cartanvirt_core::immersion::{classical_immersion, omega0, CanonicalImmersion, ClassicalImmersion};
use cartanvirt_core::{ClassicalKind, Factor, FactorKind, GroupElement, Matrix, SymmetricSpaceModel, VirtualImmersion};
use serde::Deserialize;

use crate::error::CliError;

/// Specs run by `--space catalog`.
pub const CATALOG: &[&str] = &[
    "sphere:2",
    "sphere:4",
    "hyperbolic2",
    "sl_so:2",
    "sl_so:3",
    "euclidean:3",
    "hyperboloid:3",
    "euclidean:1,sphere:2",
    "sphere:2,hyperbolic2",
    "sphere:2,hyperbolic2,euclidean:1",
    "classical:sphere:2",
    "classical:hyperboloid:2",
];

pub enum Handle {
    Canonical(CanonicalImmersion),
    Classical(ClassicalImmersion),
}

impl Handle {
    pub fn immersion(&self) -> &dyn VirtualImmersion {
        match self {
            Handle::Canonical(c) => c,
            Handle::Classical(c) => c,
        }
    }

    pub fn space(&self) -> &SymmetricSpaceModel {
        self.immersion().space()
    }
}

/// A resolved handle with the optional isometry from its space file.
pub struct Target {
    pub handle: Handle,
    pub isometry: Option<GroupElement>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    factors: Vec<FactorEntry>,
    #[serde(default)]
    immersion: Immersion,
    #[serde(default)]
    isometry: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum Immersion {
    #[default]
    Canonical,
    Classical,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FactorEntry {
    Sphere { n: usize, lambda: Option<f64> },
    Hyperbolic2 { lambda: Option<f64> },
    SlSo { n: usize, lambda: Option<f64> },
    Euclidean { r: usize, lambda: Option<f64> },
    Hyperboloid { n: usize, lambda: Option<f64> },
}

impl FactorEntry {
    fn split(&self) -> (FactorKind, Option<f64>) {
        match *self {
            FactorEntry::Sphere { n, lambda } => (FactorKind::Sphere(n), lambda),
            FactorEntry::Hyperbolic2 { lambda } => (FactorKind::Hyperbolic2, lambda),
            FactorEntry::SlSo { n, lambda } => (FactorKind::SlSo(n), lambda),
            FactorEntry::Euclidean { r, lambda } => (FactorKind::Euclidean(r), lambda),
            FactorEntry::Hyperboloid { n, lambda } => (FactorKind::Hyperboloid(n), lambda),
        }
    }
}

fn spec_error(spec: &str, reason: impl Into<String>) -> CliError {
    CliError::SpaceSpec {
        spec: spec.into(),
        reason: reason.into(),
    }
}

fn parse_factor(spec: &str, token: &str) -> Result<FactorKind, CliError> {
    let (name, param) = match token.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (token, None),
    };
    let param = match param {
        Some(p) => Some(
            p.parse::<usize>()
                .map_err(|_| spec_error(spec, format!("bad parameter {p:?} in {token:?}")))?,
        ),
        None => None,
    };
    let need = |p: Option<usize>| p.ok_or_else(|| spec_error(spec, format!("{name} needs a parameter, e.g. {name}:2")));
    Ok(match name {
        "sphere" => FactorKind::Sphere(need(param)?),
        "sl_so" => FactorKind::SlSo(need(param)?),
        "euclidean" => FactorKind::Euclidean(need(param)?),
        "hyperboloid" => FactorKind::Hyperboloid(need(param)?),
        "hyperbolic2" if param.is_none() => FactorKind::Hyperbolic2,
        "hyperbolic2" => return Err(spec_error(spec, "hyperbolic2 takes no parameter")),
        _ => return Err(spec_error(spec, format!("unknown factor kind {name:?}"))),
    })
}

fn classical_kind(spec: &str, kinds: &[(FactorKind, Option<f64>)]) -> Result<ClassicalKind, CliError> {
    match kinds {
        [(kind, lambda)] => {
            if lambda.is_some_and(|l| l != kind.default_lambda()) {
                return Err(spec_error(spec, "classical embeddings use the default lambda"));
            }
            match *kind {
                FactorKind::Sphere(n) => Ok(ClassicalKind::SphereInEuclidean(n)),
                FactorKind::Hyperboloid(n) => Ok(ClassicalKind::HyperboloidInLorentz(n)),
                _ => Err(spec_error(spec, "classical embeddings exist for sphere and hyperboloid only")),
            }
        }
        _ => Err(spec_error(spec, "classical embeddings take exactly one factor")),
    }
}

fn with_lambdas(
    spec: &str,
    kinds: Vec<(FactorKind, Option<f64>)>,
    lambdas: Option<&[f64]>,
) -> Result<Vec<(FactorKind, Option<f64>)>, CliError> {
    match lambdas {
        None => Ok(kinds),
        Some(ls) if ls.len() == kinds.len() => Ok(kinds.into_iter().zip(ls).map(|((k, _), l)| (k, Some(*l))).collect()),
        Some(ls) => Err(CliError::Usage(format!(
            "--lambda has {} values but {spec:?} has {} factors",
            ls.len(),
            kinds.len()
        ))),
    }
}

fn build(
    spec: &str,
    kinds: Vec<(FactorKind, Option<f64>)>,
    classical: bool,
    isometry: Option<Vec<Vec<f64>>>,
) -> Result<Target, CliError> {
    let handle = if classical {
        Handle::Classical(classical_immersion(classical_kind(spec, &kinds)?)?)
    } else {
        let factors = kinds
            .into_iter()
            .map(|(k, l)| Factor::new(k, l))
            .collect::<Result<Vec<_>, _>>()?;
        Handle::Canonical(omega0(&SymmetricSpaceModel::from_factors(factors)?))
    };
    let isometry = match isometry {
        Some(rows) => Some(group_element(spec, handle.space(), &rows)?),
        None => None,
    };
    Ok(Target { handle, isometry })
}

fn group_element(spec: &str, space: &SymmetricSpaceModel, rows: &[Vec<f64>]) -> Result<GroupElement, CliError> {
    let n = space.algebra().matrix_size();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(spec_error(spec, format!("isometry must be a {n}x{n} matrix")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let m = Matrix::from_row_slice(n, n, &flat);
    Ok(GroupElement::new(m, space.algebra().blocks().to_vec())?)
}

fn from_file(path: &Path, lambdas: Option<&[f64]>) -> Result<Target, CliError> {
    let spec = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let file: SpaceFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })?;
    if file.factors.is_empty() {
        return Err(spec_error(&spec, "no factors"));
    }
    let kinds = with_lambdas(&spec, file.factors.iter().map(FactorEntry::split).collect(), lambdas)?;
    build(&spec, kinds, file.immersion == Immersion::Classical, file.isometry)
}

fn from_shorthand(spec: &str, lambdas: Option<&[f64]>) -> Result<Target, CliError> {
    let (classical, body) = match spec.strip_prefix("classical:") {
        Some(rest) => (true, rest),
        None => (false, spec),
    };
    let kinds = body
        .split(',')
        .map(|t| parse_factor(spec, t.trim()).map(|k| (k, None)))
        .collect::<Result<Vec<_>, _>>()?;
    build(spec, with_lambdas(spec, kinds, lambdas)?, classical, None)
}

/// Resolves a `--space` argument to one or more handles.
pub fn resolve(spec: &str, lambdas: Option<&[f64]>) -> Result<Vec<Target>, CliError> {
    if spec == "catalog" {
        if lambdas.is_some() {
            return Err(CliError::Usage("--lambda cannot be combined with the catalog".into()));
        }
        return CATALOG.iter().map(|s| from_shorthand(s, None)).collect();
    }
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        return Ok(vec![from_file(path, lambdas)?]);
    }
    Ok(vec![from_shorthand(spec, lambdas)?])
}

/// One catalog factor kind as shown by `list`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KindInfo {
    pub kind: &'static str,
    pub shorthand: &'static str,
    pub parameter: &'static str,
    pub lambda_default: &'static str,
    pub algebra: &'static str,
    pub dim_m: &'static str,
    pub dim_g: &'static str,
}

pub fn kinds() -> Vec<KindInfo> {
    vec![
        KindInfo {
            kind: "sphere",
            shorthand: "sphere:n",
            parameter: "n >= 2",
            lambda_default: "-1/(2(n-1))",
            algebra: "so(n+1)",
            dim_m: "n",
            dim_g: "n(n+1)/2",
        },
        KindInfo {
            kind: "hyperbolic2",
            shorthand: "hyperbolic2",
            parameter: "none",
            lambda_default: "1/2",
            algebra: "sl(2)",
            dim_m: "2",
            dim_g: "3",
        },
        KindInfo {
            kind: "sl_so",
            shorthand: "sl_so:n",
            parameter: "n >= 2",
            lambda_default: "1/(4n)",
            algebra: "sl(n)",
            dim_m: "n(n+1)/2 - 1",
            dim_g: "n^2 - 1",
        },
        KindInfo {
            kind: "euclidean",
            shorthand: "euclidean:r",
            parameter: "r >= 1",
            lambda_default: "1",
            algebra: "abelian R^r",
            dim_m: "r",
            dim_g: "r",
        },
        KindInfo {
            kind: "hyperboloid",
            shorthand: "hyperboloid:n",
            parameter: "n >= 2",
            lambda_default: "1/(2(n-1))",
            algebra: "so(n,1)",
            dim_m: "n",
            dim_g: "n(n+1)/2",
        },
    ]
}
