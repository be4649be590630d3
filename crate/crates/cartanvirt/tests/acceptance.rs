//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::time::{Duration, Instant};

use cartanvirt::commands::{self, Format, Options};
use cartanvirt::space::{self, Target, CATALOG};
use cartanvirt_core::immersion::{omega0, random_isometry, ComposedImmersion, ImmersionKind};
use cartanvirt_core::linalg::{max_abs, rank};
use cartanvirt_core::verification::{equivalence_map, fd_convergence, kernel_of_hat_omega};
use cartanvirt_core::{FDConfig, Matrix, SymmetricSpaceModel, Vector, VerificationReport};

const TOL_A: f64 = 1e-9;
const TOL_FD: f64 = 1e-5;

struct Run {
    spec: &'static str,
    target: Target,
    report: VerificationReport,
}

impl Run {
    fn canonical(&self) -> bool {
        self.target.handle.immersion().kind() == ImmersionKind::Canonical
    }

    fn residual(&self, name: &str) -> Result<f64, String> {
        self.report
            .record(name)
            .map(|r| r.max_residual)
            .ok_or_else(|| format!("{}: no {name} record", self.spec))
    }
}

fn options(spec: &str) -> Options {
    Options {
        space: spec.into(),
        lambda: None,
        config: FDConfig::default(),
        format: Format::Json,
    }
}

fn run(spec: &'static str) -> Run {
    let opts = options(spec);
    let mut targets = space::resolve(spec, None).expect("catalog spec resolves");
    Run {
        spec,
        target: targets.remove(0),
        report: commands::verify_report(&opts).expect("suite runs"),
    }
}

/// `Ok(detail)` on pass, `Err(detail)` on the first violation.
type Outcome = Result<String, String>;

fn below(what: &str, value: f64, bound: f64) -> Result<(), String> {
    if value < bound {
        Ok(())
    } else {
        Err(format!("{what} = {value:e} not below {bound:e}"))
    }
}

fn worst<'a>(runs: impl Iterator<Item = &'a Run>, name: &str, bound: f64) -> Result<f64, String> {
    let mut w = 0.0f64;
    for r in runs {
        let v = r.residual(name)?;
        below(&format!("{} {name}", r.spec), v, bound)?;
        w = w.max(v);
    }
    Ok(w)
}

fn pick<'a>(runs: &'a [Run], specs: &'a [&str]) -> impl Iterator<Item = &'a Run> + Clone {
    runs.iter().filter(move |r| specs.contains(&r.spec))
}

fn criterion_1(runs: &[Run]) -> Outcome {
    let specs = [
        "sphere:2",
        "sphere:4",
        "hyperbolic2",
        "sl_so:2",
        "sl_so:3",
        "euclidean:3",
        "euclidean:1,sphere:2",
        "sphere:2,hyperbolic2",
    ];
    let sel = pick(runs, &specs);
    for r in sel.clone() {
        let n = r.report.record("condition_a").map(|c| c.samples).unwrap_or(0);
        if n != 100 {
            return Err(format!("{} condition_a used {n} samples", r.spec));
        }
    }
    let a = worst(sel.clone(), "condition_a", 1e-9)?;
    let b = worst(sel, "condition_b", 1e-5)?;
    Ok(format!("{} spaces, condition_a {a:.1e}, condition_b {b:.1e}", specs.len()))
}

fn criterion_2(runs: &[Run]) -> Outcome {
    let sym = worst(runs.iter().filter(|r| r.canonical()), "ii_skew", 1e-12)?;
    let classical = || runs.iter().filter(|r| !r.canonical());
    if classical().count() < 2 {
        return Err("classical sphere and hyperboloid handles missing".into());
    }
    let skew = worst(classical(), "ii_symmetric", 1e-7)?;
    let d = worst(classical(), "closedness", 1e-6)?;
    Ok(format!("canonical |II_sym| {sym:.1e}; classical |II_skew| {skew:.1e}, dOmega {d:.1e}"))
}

/// `dim m + dim [m,m]`, the span of `m ⊕ [m,m]` counted independently of `Ω`.
fn bracket_span(space: &SymmetricSpaceModel) -> usize {
    let alg = space.algebra();
    let mut cols: Vec<Vector> = (0..space.dim_m()).map(|i| space.m_basis(i)).collect();
    for i in 0..space.dim_m() {
        for j in i + 1..space.dim_m() {
            cols.push(alg.bracket(&space.m_basis(i), &space.m_basis(j)).expect("m is closed under the bracket into g"));
        }
    }
    rank(&Matrix::from_columns(&cols))
}

fn criterion_3(runs: &[Run]) -> Outcome {
    let mut detail = Vec::new();
    for r in runs {
        let imm = r.target.handle.immersion();
        let (full, spanned) = cartanvirt_core::immersion::fullness(imm);
        let dim_v = imm.target_form().dim();
        if !full || spanned != dim_v {
            return Err(format!("{}: spanned {spanned} of {dim_v}", r.spec));
        }
        if r.canonical() {
            let oracle = bracket_span(imm.space());
            if oracle != spanned {
                return Err(format!("{}: spanned {spanned}, rank of m + [m,m] is {oracle}", r.spec));
            }
        }
        if matches!(r.spec, "sphere:2" | "sl_so:3") {
            detail.push(format!("{} {spanned}", r.spec));
        }
    }
    Ok(format!("spanned = dim V on {} handles ({})", runs.len(), detail.join(", ")))
}

fn criterion_4(runs: &[Run]) -> Outcome {
    let canon = || runs.iter().filter(|r| r.canonical());
    let w = worst(canon(), "weingarten", TOL_A)?;
    let g = worst(canon(), "gauss", TOL_A)?;
    let ri = worst(runs.iter(), "ricci", TOL_FD)?;
    let c = worst(runs.iter(), "codazzi", TOL_FD)?;
    Ok(format!("weingarten {w:.1e}, gauss {g:.1e}, ricci {ri:.1e}, codazzi {c:.1e}"))
}

fn criterion_5(runs: &[Run]) -> Outcome {
    let cfg = FDConfig::default();
    let mut detail = Vec::new();
    for (spec, expected) in [("sphere:2", 1.0), ("hyperbolic2", -1.0)] {
        let r = runs.iter().find(|r| r.spec == spec).ok_or("missing space")?;
        let t = commands::curvature_table(&r.target, &cfg);
        for p in &t.planes {
            below(&format!("{spec} |K_gauss - ({expected})|"), (p.gauss.0 - expected).abs(), 1e-5)?;
            below(&format!("{spec} |K_gauss - K_fd|"), p.difference.0, 1e-5)?;
        }
        detail.push(format!("{spec} K {:+.6}", t.planes[0].gauss.0));
    }
    for spec in ["euclidean:3", "euclidean:1,sphere:2"] {
        let r = runs.iter().find(|r| r.spec == spec).ok_or("missing space")?;
        let t = commands::curvature_table(&r.target, &cfg);
        let flat = t.planes.iter().filter(|p| spec == "euclidean:3" || p.i == 0);
        for p in flat {
            if p.gauss.0 != 0.0 || p.fd.0 != 0.0 {
                return Err(format!("{spec} plane ({},{}): K = {} / {}", p.i, p.j, p.gauss.0, p.fd.0));
            }
        }
    }
    detail.push("euclidean planes exactly 0".into());
    Ok(detail.join(", "))
}

fn criterion_6(runs: &[Run]) -> Outcome {
    if !runs.iter().any(|r| r.spec == "sphere:2,hyperbolic2,euclidean:1") {
        return Err("S2 x H2 x R missing".into());
    }
    let canon = || runs.iter().filter(|r| r.canonical());
    let a = worst(canon(), "locsym_a", TOL_A)?;
    let b = worst(canon(), "locsym_b", TOL_FD)?;
    let c = worst(canon(), "locsym_c", TOL_FD)?;
    Ok(format!("(a) {a:.1e}, (b) {b:.1e}, (c) {c:.1e}"))
}

/// Number of independent wedges `X_i ∧ X_j` annihilated by the curvature tensor.
fn flat_wedges(space: &SymmetricSpaceModel) -> usize {
    let d = space.dim_m();
    let mut cols = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut col = Vec::new();
            for k in 0..d {
                let r = space
                    .curvature_tensor(&space.m_basis(i), &space.m_basis(j), &space.m_basis(k))
                    .expect("basis vectors lie in m");
                col.extend(r.iter().copied());
            }
            cols.push(Vector::from_vec(col));
        }
    }
    if cols.is_empty() {
        return 0;
    }
    cols.len() - rank(&Matrix::from_columns(&cols))
}

fn criterion_7() -> Outcome {
    let s2 = || SymmetricSpaceModel::sphere(2).unwrap();
    let cases = [
        ("sphere(2)", s2(), 0),
        ("euclidean(2)", SymmetricSpaceModel::euclidean(2).unwrap(), 1),
        (
            "sphere(2) x euclidean(1)",
            SymmetricSpaceModel::product(&[s2(), SymmetricSpaceModel::euclidean(1).unwrap()]).unwrap(),
            2,
        ),
    ];
    let mut dims = Vec::new();
    for (name, space, expected) in cases {
        let k = kernel_of_hat_omega(&omega0(&space)).map_err(|e| format!("{name}: {e}"))?;
        let brute = flat_wedges(&space);
        if k.dim != expected || brute != expected {
            return Err(format!("{name}: kernel {} brute force {brute} expected {expected}", k.dim));
        }
        dims.push(k.dim.to_string());
    }
    Ok(format!("kernel dims {} match brute force", dims.join("/")))
}

fn criterion_8(runs: &[Run]) -> Outcome {
    let mut worst_l = 0.0f64;
    let mut worst_c = 0.0f64;
    let mut spaces = 0;
    for r in runs.iter().filter(|r| r.canonical()) {
        let imm = r.target.handle.immersion();
        for seed in 0..20u64 {
            let iota = random_isometry(imm.target_form(), 1000 + seed, 0.5);
            let composed = ComposedImmersion::new(Box::new(imm), iota.clone()).map_err(|e| e.to_string())?;
            let eq = equivalence_map(imm, &composed, 5, seed).map_err(|e| format!("{}: {e}", r.spec))?;
            let l = max_abs(&(&eq.l - &iota));
            below(&format!("{} seed {seed} |L - iota|", r.spec), l, 1e-8)?;
            below(&format!("{} seed {seed} constancy", r.spec), eq.constancy_residual, 1e-8)?;
            worst_l = worst_l.max(l);
            worst_c = worst_c.max(eq.constancy_residual);
        }
        spaces += 1;
    }
    let h2 = runs.iter().find(|r| r.spec == "hyperbolic2").ok_or("hyperbolic2 missing")?;
    let sig = h2.target.handle.immersion().target_form().signature().pair();
    if sig != (2, 1) {
        return Err(format!("hyperbolic2 signature {sig:?}"));
    }
    Ok(format!(
        "20 isometries x {spaces} spaces, |L - iota| {worst_l:.1e}, constancy {worst_c:.1e}, hyperbolic2 signature (2,1)"
    ))
}

fn invariance_file(dir: &std::path::Path, name: &str, n: usize, gamma: &[Vec<f64>]) -> String {
    let path = dir.join(name);
    let body = serde_json::json!({ "factors": [{ "kind": "sphere", "n": n }], "isometry": gamma });
    std::fs::write(&path, body.to_string()).expect("temp file writes");
    path.display().to_string()
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let minus: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { -1.0 } else { 0.0 }).collect()).collect();
    let (c, s) = (0.7f64.cos(), 0.7f64.sin());
    let rot: Vec<Vec<f64>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| match (i, j) {
                    (0, 0) | (1, 1) => c,
                    (0, 1) => -s,
                    (1, 0) => s,
                    _ if i == j => 1.0,
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    let mut residuals = Vec::new();
    for (name, gamma, want) in [("rp3.json", minus, true), ("rot.json", rot, false)] {
        let mut opts = options(&invariance_file(dir.path(), name, 3, &gamma));
        opts.format = Format::Text;
        let targets = space::resolve(&opts.space, None).map_err(|e| e.to_string())?;
        let row = commands::invariance_row(&targets[0], &opts.config).map_err(|e| e.to_string())?;
        let out = commands::invariance(&opts).map_err(|e| e.to_string())?;
        let word = if want { "invariant: yes" } else { "invariant: no" };
        if row.invariant != want || !out.stdout.contains(word) || (out.code == 0) != want {
            return Err(format!("{name}: residual {:e}, exit {}", row.residual.0, out.code));
        }
        residuals.push(row.residual.0);
    }
    if residuals[0] != 0.0 {
        return Err(format!("-I4 residual {:e} is not 0", residuals[0]));
    }
    below("rotation residual reciprocal", 1.0 / residuals[1], 10.0)?;
    Ok(format!("-I4 residual {:e}, rotation residual {:.3}", residuals[0], residuals[1]))
}

fn criterion_10(runs: &[Run]) -> Outcome {
    let (mut lo, mut hi, mut checks, mut exact) = (f64::INFINITY, 0.0f64, 0, 0);
    for r in runs {
        let recs = fd_convergence(r.target.handle.immersion(), &FDConfig::default()).map_err(|e| e.to_string())?;
        for c in recs {
            if !c.pass() {
                return Err(format!("{} {}: {:e} -> {:e}, ratio {:.3}", r.spec, c.name, c.coarse, c.fine, c.ratio));
            }
            checks += 1;
            if c.exact {
                exact += 1;
            } else {
                lo = lo.min(c.ratio);
                hi = hi.max(c.ratio);
            }
        }
    }
    Ok(format!("{checks} FD checks, ratios in [{lo:.3}, {hi:.3}], {exact} exact"))
}

fn criterion_11() -> Outcome {
    let opts = options("catalog");
    let start = Instant::now();
    let first = commands::verify(&opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let second = commands::verify(&opts).map_err(|e| e.to_string())?;
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("catalog took {elapsed:?}"));
    }
    if first.stdout != second.stdout {
        return Err("JSON differs between runs".into());
    }
    if first.code != 0 {
        return Err(format!("catalog exit code {}", first.code));
    }
    Ok(format!("catalog in {:.2} s, {} JSON bytes identical", elapsed.as_secs_f64(), first.stdout.len()))
}

fn main() {
    let runs: Vec<Run> = CATALOG.iter().map(|s| run(s)).collect();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "virtual-immersion axioms", criterion_1(&runs)),
        (2, "skewness and classical contrast", criterion_2(&runs)),
        (3, "fullness", criterion_3(&runs)),
        (4, "fundamental equations", criterion_4(&runs)),
        (5, "curvature normalization", criterion_5(&runs)),
        (6, "locally symmetric identities", criterion_6(&runs)),
        (7, "kernel characterization", criterion_7()),
        (8, "rigidity recovery", criterion_8(&runs)),
        (9, "invariance", criterion_9()),
        (10, "FD convergence", criterion_10(&runs)),
        (11, "determinism and runtime", criterion_11()),
    ];
    let mut failed = 0;
    for (n, title, r) in &results {
        match r {
            Ok(d) => println!("criterion {n:>2} PASS  {title}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {title}: {d}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
