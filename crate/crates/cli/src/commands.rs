use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use ghlab::acceptance::{run_all, CriterionOutcome};
use ghlab::analysis::{analyze, assouad_estimate, doubling_profile, ud_constant, up_constant};
use ghlab::constructors::{
    cantor_beta, isosceles_triple, telescope, CubePoint, TailParts, TelescopeSpec,
};
use ghlab::geodesics::{
    bunch_distinctness, verify_geodesic, BranchSpec, GeodesicError, GeodesicFamily, GeodesicReport,
    StraightGeodesic, GEODESIC_TOLERANCE,
};
use ghlab::gh::{gh_exact, gh_lower, gh_upper_local, GhError, GhResult};
use ghlab::io::{read_space, space_from_json_value, space_to_json, space_to_json_value, write_space, SCHEMA_VERSION};
use ghlab::FiniteMetricSpace;

/// A check ran to completion and did not hold. Maps to exit code 1.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

/// The outputs of one command: a JSON document, maybe a CSV table, and
/// the reason verification failed if it did.
pub struct Artifact {
    pub json: Value,
    pub csv: Option<String>,
    pub failure: Option<String>,
}

impl Artifact {
    fn ok(json: Value) -> Self {
        Self {
            json,
            csv: None,
            failure: None,
        }
    }

    /// Writes the JSON to `out` (stdout when absent) and the CSV to `csv`,
    /// then reports a recorded failure.
    pub fn deliver(self, out: Option<&Path>, csv: Option<&Path>) -> anyhow::Result<()> {
        write_text(out, &to_pretty(&self.json))?;
        if let (Some(path), Some(table)) = (csv, &self.csv) {
            write_file(path, table)?;
        }
        match self.failure {
            Some(reason) => Err(VerificationFailed(reason).into()),
            None => Ok(()),
        }
    }
}

pub fn to_pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_text(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn load(path: &Path) -> anyhow::Result<FiniteMetricSpace> {
    read_space(path).with_context(|| format!("reading space {}", path.display()))
}

pub fn write_space_artifact(space: &FiniteMetricSpace, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            write_space(path, space).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            println!("{}", space_to_json(space));
            Ok(())
        }
    }
}

pub fn construct_cantor(c: f64, depth: u32) -> anyhow::Result<FiniteMetricSpace> {
    Ok(cantor_beta(c, depth)?)
}

pub fn construct_telescope(stages: &[PathBuf]) -> anyhow::Result<FiniteMetricSpace> {
    let stages = stages.iter().map(|p| load(p)).collect::<anyhow::Result<Vec<_>>>()?;
    Ok(telescope(&TelescopeSpec::new(stages)?)?)
}

pub fn construct_u_space(
    q: Vec<f64>,
    depth: Option<usize>,
    part_c: Option<f64>,
    part_depth: u32,
) -> anyhow::Result<FiniteMetricSpace> {
    let depth = depth.unwrap_or(q.len());
    let parts = match part_c {
        Some(c) => TailParts::cantor(depth, c, part_depth)?,
        None => TailParts::one_point(depth)?,
    };
    Ok(parts.u_space(&CubePoint::new(q)?)?)
}

pub fn construct_triple(stage: usize, q: f64) -> anyhow::Result<FiniteMetricSpace> {
    Ok(isosceles_triple(stage, q)?)
}

pub fn construct_product(a: &Path, b: &Path) -> anyhow::Result<FiniteMetricSpace> {
    Ok(load(a)?.linf_product(&load(b)?)?)
}

pub fn construct_scale(a: &Path, factor: f64) -> anyhow::Result<FiniteMetricSpace> {
    Ok(load(a)?.scale(factor)?)
}

fn gh_json(result: &GhResult) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "lower": result.lower,
        "upper": result.upper,
        "exact": result.exact,
        "witness_pairs": result.witness_pairs(),
    })
}

/// An exhausted budget is still a valid bracket, reported with `exact: false`.
pub fn gh_exact_cmd(a: &Path, b: &Path, budget: u64) -> anyhow::Result<Artifact> {
    let (x, y) = (load(a)?, load(b)?);
    let result = match gh_exact(&x, &y, budget) {
        Ok(r) => r,
        Err(GhError::BudgetExhausted(best)) => *best,
        Err(e) => return Err(e.into()),
    };
    Ok(Artifact::ok(gh_json(&result)))
}

pub fn gh_bound_cmd(a: &Path, b: &Path, restarts: usize, seed: u64) -> anyhow::Result<Artifact> {
    let (x, y) = (load(a)?, load(b)?);
    let mut result = gh_upper_local(&x, &y, restarts, seed);
    result.lower = result.lower.max(gh_lower(&x, &y));
    result.exact = result.upper <= result.lower;
    Ok(Artifact::ok(gh_json(&result)))
}

pub fn analyze_cmd(file: &Path, t: Option<f64>) -> anyhow::Result<Artifact> {
    let x = load(file)?;
    let t = match t {
        Some(t) => t,
        None if x.len() > 1 => x.separation()?,
        None => bail!("a single point has no resolution; pass --t"),
    };
    let report = analyze(&x, t)?;
    let mut value = serde_json::to_value(&report)?;
    value["schema"] = json!(SCHEMA_VERSION);
    Ok(Artifact::ok(value))
}

/// One row per depth `2..=max_depth` of `cantor_beta(c, depth)`, with the
/// perfectness constant taken at `t = c^{depth-1}`.
pub fn sweep_depth(c: f64, max_depth: u32) -> anyhow::Result<String> {
    if max_depth < 2 {
        bail!("--depth must be at least 2 for a sweep");
    }
    let mut csv = String::from("depth,points,ud_delta,up_c,assouad,doubling_C\n");
    for depth in 2..=max_depth {
        let x = cantor_beta(c, depth)?;
        let t = ghlab::constructors::cantor_powers(c, depth)[depth as usize - 1];
        let beta = assouad_estimate(&x)?.max(0.0);
        let doubling = doubling_profile(&x, beta)?;
        writeln!(
            csv,
            "{depth},{},{},{},{beta},{}",
            x.len(),
            ud_constant(&x)?,
            up_constant(&x, t)?,
            doubling.constant
        )?;
    }
    Ok(csv)
}

/// `n` evenly spaced parameters in `[0, 1]` merged with `extra`.
fn unit_grid(n: usize, extra: &[f64]) -> anyhow::Result<Vec<f64>> {
    if n < 2 {
        bail!("a grid needs at least 2 points, got {n}");
    }
    let mut grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    grid.extend_from_slice(extra);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

/// Runs the check and keeps the report even when it fails.
fn checked_report<G: GeodesicFamily + ?Sized>(
    family: &G,
    grid: &[f64],
) -> anyhow::Result<(GeodesicReport, Option<String>)> {
    match verify_geodesic(family, grid, GEODESIC_TOLERANCE) {
        Ok(report) => Ok((report, None)),
        Err(GeodesicError::GeodesicViolation { s, t, excess, report }) => Ok((
            *report,
            Some(format!("geodesic inequality off by {excess:e} at s={s}, t={t}")),
        )),
        Err(e) => Err(e.into()),
    }
}

fn write_samples(dir: &Path, samples: &[(String, FiniteMetricSpace)]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, space) in samples {
        write_file(&dir.join(name), &to_pretty(&space_to_json_value(space)))?;
    }
    Ok(())
}

pub fn straight_cmd(
    a: &Path,
    b: &Path,
    grid: usize,
    budget: u64,
    samples_dir: Option<&Path>,
) -> anyhow::Result<Artifact> {
    let (x, y) = (load(a)?, load(b)?);
    let geodesic = StraightGeodesic::optimal(x, y, budget)?;
    let grid = unit_grid(grid, &[])?;
    let (report, failure) = checked_report(&geodesic, &grid)?;
    if let Some(dir) = samples_dir {
        let samples = grid
            .iter()
            .map(|&s| Ok((format!("s_{s:.6}.json"), geodesic.point(s)?)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        write_samples(dir, &samples)?;
    }
    let mut csv = String::from("s,t,upper,lower,bound\n");
    for p in &report.pairs {
        writeln!(csv, "{},{},{},{},{}", p.s, p.t, p.upper, p.lower, p.bound)?;
    }
    let json = json!({
        "schema": SCHEMA_VERSION,
        "kind": "straight",
        "length": geodesic.length(),
        "witness_pairs": geodesic.correspondence().pairs(),
        "passed": failure.is_none(),
        "report": report,
    });
    Ok(Artifact { json, csv: Some(csv), failure })
}

/// A space given inline or as a path relative to the description file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpaceRef {
    Path(PathBuf),
    Inline(Value),
}

impl SpaceRef {
    fn resolve(self, base: &Path) -> anyhow::Result<FiniteMetricSpace> {
        match self {
            SpaceRef::Path(p) => load(&base.join(p)),
            SpaceRef::Inline(v) => Ok(space_from_json_value(v)?),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailFile {
    depth: usize,
    /// Scaled Cantor parts `{ "c": .., "depth": .. }`; one-point parts when absent.
    #[serde(default)]
    cantor: Option<CantorParts>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CantorParts {
    c: f64,
    depth: u32,
}

/// Description of a branching bunch.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BunchFile {
    #[serde(default)]
    schema: Option<u32>,
    x: SpaceRef,
    y: SpaceRef,
    /// Defaults to `cantor_beta(0.5, 3)`.
    #[serde(default)]
    factor: Option<SpaceRef>,
    branch_set: Vec<f64>,
    tail: TailFile,
    #[serde(default)]
    basepoint: usize,
    #[serde(default)]
    budget: Option<u64>,
}

fn load_bunch(path: &Path) -> anyhow::Result<BranchSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: BunchFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(v) = file.schema.filter(|&v| v != SCHEMA_VERSION) {
        bail!("unsupported schema version {v}");
    }
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let x = file.x.resolve(base_dir)?;
    let y = file.y.resolve(base_dir)?;
    let factor = match file.factor {
        Some(f) => f.resolve(base_dir)?,
        None => cantor_beta(0.5, 3)?,
    };
    let tail = match file.tail.cantor {
        Some(p) => TailParts::cantor(file.tail.depth, p.c, p.depth)?,
        None => TailParts::one_point(file.tail.depth)?,
    };
    let budget = file.budget.unwrap_or(ghlab::gh::DEFAULT_NODE_BUDGET);
    let base = StraightGeodesic::optimal(x, y, budget)?;
    Ok(BranchSpec::new(base, factor, file.branch_set, tail, file.basepoint)?)
}

/// Samples `q_samples` seeded cube points and checks, along each curve, the
/// endpoints, agreement on the branch set and the geodesic inequality; then
/// tries to certify the curves distinct at random off-branch parameters.
pub fn bunch_cmd(spec_path: &Path, s_grid: usize, q_samples: usize, seed: u64) -> anyhow::Result<Artifact> {
    let spec = load_bunch(spec_path)?;
    if q_samples == 0 {
        bail!("--q-samples must be positive");
    }
    let branch: Vec<f64> = spec.branch_set().zeros().to_vec();
    let grid = unit_grid(s_grid, &branch)?;
    let off_branch: Vec<f64> = grid.iter().copied().filter(|s| !spec.branch_set().contains(*s)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = spec.tail().depth();
    let qs: Vec<CubePoint> = (0..q_samples).map(|_| CubePoint::random(dim, &mut rng)).collect();

    let (x, y) = (spec.base().x().clone(), spec.base().y().clone());
    let mut failures = Vec::new();
    let mut curves = Vec::with_capacity(qs.len());
    let mut csv = String::from("q,s,t,upper,lower,bound\n");
    for (k, q) in qs.iter().enumerate() {
        if spec.point(0.0, q)? != x || spec.point(1.0, q)? != y {
            failures.push(format!("curve {k} does not join the endpoints"));
        }
        let (report, failure) = checked_report(&spec.along(q), &grid)?;
        if let Some(f) = failure {
            failures.push(format!("curve {k}: {f}"));
        }
        for p in &report.pairs {
            writeln!(csv, "{k},{},{},{},{},{}", p.s, p.t, p.upper, p.lower, p.bound)?;
        }
        curves.push(json!({
            "q": q.coords(),
            "max_excess": report.max_excess,
            "max_lower_gap": report.max_lower_gap,
        }));
    }
    let mut agreement = Vec::new();
    for &a in branch.iter().filter(|&&a| a > 0.0 && a < 1.0) {
        let first = spec.point(a, &qs[0])?;
        let agrees = qs[1..].iter().map(|q| spec.point(a, q)).collect::<Result<Vec<_>, _>>()?;
        let ok = agrees.iter().all(|p| *p == first);
        if !ok {
            failures.push(format!("curves disagree at branch parameter {a}"));
        }
        agreement.push(json!({ "s": a, "agree": ok }));
    }
    let distinctness = if off_branch.is_empty() {
        Value::Null
    } else {
        let samples: Vec<(f64, CubePoint)> = qs
            .iter()
            .map(|q| (*off_branch.choose(&mut rng).expect("nonempty"), q.clone()))
            .collect();
        let report = bunch_distinctness(&spec, &samples, GEODESIC_TOLERANCE)?;
        json!({
            "samples": samples.iter().map(|(s, q)| json!({ "s": s, "q": q.coords() })).collect::<Vec<_>>(),
            "report": report,
        })
    };
    let json = json!({
        "schema": SCHEMA_VERSION,
        "kind": "bunch",
        "length": spec.length(),
        "branch_set": branch,
        "grid": grid,
        "seed": seed,
        "passed": failures.is_empty(),
        "failures": failures,
        "curves": curves,
        "branch_agreement": agreement,
        "distinctness": distinctness,
    });
    let failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Artifact { json, csv: Some(csv), failure })
}

fn outcome_json(o: &CriterionOutcome) -> Value {
    json!({
        "id": o.id,
        "name": o.name,
        "passed": o.passed,
        "fault_injected": o.fault_injected,
        "detail": o.detail,
    })
}

/// Runs every acceptance criterion. Timings go to the text lines only so
/// that `summary.json` is reproducible.
pub fn reproduce(out_dir: Option<&Path>, fault: Option<u8>, as_json: bool) -> anyhow::Result<()> {
    if let Some(id) = fault.filter(|id| !(1..=10).contains(id)) {
        bail!("no criterion {id}; faults exist for 1 through 10");
    }
    let outcomes = run_all(fault);
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let summary = json!({
        "schema": SCHEMA_VERSION,
        "passed": failed.is_empty(),
        "inject_fault": fault,
        "criteria": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
    });
    if let Some(dir) = out_dir {
        write_file(&dir.join("summary.json"), &to_pretty(&summary))?;
    }
    if as_json {
        print!("{}", to_pretty(&summary));
    } else {
        for o in &outcomes {
            println!("{o}");
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(VerificationFailed(format!("criteria {failed:?} failed")).into())
    }
}
