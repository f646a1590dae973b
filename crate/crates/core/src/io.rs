//! Scene files, run configuration, command dispatch and report output.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cf::{from_polytopes, StratifiedCF};
use crate::error::Error;
use crate::ops::{convolve, pushforward, AffineMap, ConvolutionMethod};
use crate::polytope::{ConvexPolytope, PolytopeCombination};
use crate::scalar::{format_rational, parse_rational, Point};
use crate::sphere3::{
    ball_cf_valuation, convolve_balls, crofton_valuation, recover_d, table_tensor, verify_m_table,
    BallCF, GeodesicBall, UnitQuaternion,
};
use crate::valuations::{evaluate_valuation, flat_kinematic_tensor, rotation_average_convolution, square_grid};
use crate::rng;

pub const SCHEMA: &str = "euler-kinematics/v1";

/// Lower end of every radius grid.
pub const GRID_MIN: f64 = 0.01;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("validation error in {object}: {invariant}")]
    Validation { object: String, invariant: String },
    #[error("computation failed: {0}")]
    Compute(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl IoError {
    /// Process exit code: 2 for rejected input, 1 for environment failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Io(_) => 1,
            _ => 2,
        }
    }
}

fn invalid(object: &str, invariant: impl ToString) -> IoError {
    IoError::Validation {
        object: object.to_string(),
        invariant: invariant.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Euclidean(usize),
    Sphere3,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SceneObject {
    Cf(StratifiedCF),
    Polytopes(PolytopeCombination),
    Balls(BallCF),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub space: Space,
    pub objects: BTreeMap<String, SceneObject>,
    pub maps: BTreeMap<String, AffineMap>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SpaceFile {
    Euclidean(usize),
    Sphere3,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexFile {
    v: Vec<usize>,
    w: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CfFile {
    vertices: Vec<Vec<String>>,
    simplices: Vec<SimplexFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    w: i64,
    vertices: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallFile {
    c: [f64; 4],
    r: f64,
    w: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ObjectFile {
    Cf(CfFile),
    Polytopes(Vec<PolytopeFile>),
    Balls(Vec<BallFile>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    linear: Vec<Vec<String>>,
    translation: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    space: SpaceFile,
    objects: BTreeMap<String, ObjectFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    maps: BTreeMap<String, MapFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

fn parse_point(object: &str, coords: &[String], dim: usize) -> Result<Point, IoError> {
    if coords.len() != dim {
        return Err(invalid(object, format!("point has {} coordinates, expected {dim}", coords.len())));
    }
    coords
        .iter()
        .map(|c| parse_rational(c).ok_or_else(|| invalid(object, format!("'{c}' is not a rational p/q"))))
        .collect()
}

fn format_point(p: &[crate::ExactScalar]) -> Vec<String> {
    p.iter().map(format_rational).collect()
}

fn build_object(name: &str, space: Space, file: ObjectFile) -> Result<SceneObject, IoError> {
    match (space, file) {
        (Space::Euclidean(n), ObjectFile::Cf(cf)) => {
            let vertices = cf
                .vertices
                .iter()
                .map(|v| parse_point(name, v, n))
                .collect::<Result<Vec<_>, _>>()?;
            let simplices: Vec<(Vec<usize>, i64)> = cf.simplices.into_iter().map(|s| (s.v, s.w)).collect();
            let cf = StratifiedCF::from_simplices(n, vertices, simplices).map_err(|e| invalid(name, e))?;
            let weights = cf.weights().iter().filter(|(_, w)| **w != 0).map(|(k, w)| (*k, *w)).collect();
            Ok(SceneObject::Cf(StratifiedCF::new(cf.complex().clone(), weights)?))
        }
        (Space::Euclidean(n), ObjectFile::Polytopes(ps)) => {
            let mut terms = Vec::with_capacity(ps.len());
            for p in ps {
                let pts = p
                    .vertices
                    .iter()
                    .map(|v| parse_point(name, v, n))
                    .collect::<Result<Vec<_>, _>>()?;
                terms.push((p.w, ConvexPolytope::from_points(n, &pts).map_err(|e| invalid(name, e))?));
            }
            Ok(SceneObject::Polytopes(PolytopeCombination::new(n, terms)?))
        }
        (Space::Sphere3, ObjectFile::Balls(bs)) => {
            let mut terms = Vec::with_capacity(bs.len());
            for b in bs {
                let c = UnitQuaternion::from_array(b.c).map_err(|e| invalid(name, e))?;
                terms.push((b.w, GeodesicBall::new(c, b.r).map_err(|e| invalid(name, e))?));
            }
            Ok(SceneObject::Balls(BallCF::new(terms)))
        }
        (Space::Sphere3, _) => Err(invalid(name, "only ball objects live on sphere3")),
        (Space::Euclidean(_), ObjectFile::Balls(_)) => Err(invalid(name, "ball objects need space sphere3")),
    }
}

pub fn parse_scene_str(text: &str) -> Result<Scene, IoError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        reason: e.to_string(),
    })?;
    let space = match file.space {
        SpaceFile::Euclidean(n) if (1..=3).contains(&n) => Space::Euclidean(n),
        SpaceFile::Euclidean(n) => return Err(invalid("space", format!("euclidean dimension {n} not in 1..=3"))),
        SpaceFile::Sphere3 => Space::Sphere3,
    };
    let mut objects = BTreeMap::new();
    for (name, obj) in file.objects {
        let built = build_object(&name, space, obj)?;
        objects.insert(name, built);
    }
    let mut maps = BTreeMap::new();
    for (name, m) in file.maps {
        let Space::Euclidean(n) = space else {
            return Err(invalid(&name, "maps need a euclidean space"));
        };
        let source = m.linear.first().map_or(n, |r| r.len());
        let linear = m
            .linear
            .iter()
            .map(|r| parse_point(&name, r, source))
            .collect::<Result<Vec<_>, _>>()?;
        let translation = parse_point(&name, &m.translation, m.translation.len())?;
        if source != n {
            return Err(invalid(&name, format!("map source dimension {source} differs from space dimension {n}")));
        }
        let map = AffineMap::new(source, linear, translation).map_err(|e| invalid(&name, e))?;
        maps.insert(name, map);
    }
    Ok(Scene {
        space,
        objects,
        maps,
        metadata: file.metadata,
    })
}

pub fn parse_scene(path: &Path) -> Result<Scene, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
    parse_scene_str(&text)
}

/// Serializes a scene; rationals are written verbatim as `p/q` strings.
pub fn write_scene(scene: &Scene) -> String {
    let objects = scene
        .objects
        .iter()
        .map(|(name, obj)| {
            let file = match obj {
                SceneObject::Cf(cf) => {
                    let c = cf.complex();
                    ObjectFile::Cf(CfFile {
                        vertices: c.vertices().iter().map(|v| format_point(v)).collect(),
                        simplices: c
                            .simplices()
                            .iter()
                            .enumerate()
                            .map(|(id, s)| SimplexFile {
                                v: s.clone(),
                                w: cf.weights().get(&id).copied().unwrap_or(0),
                            })
                            .collect(),
                    })
                }
                SceneObject::Polytopes(pc) => ObjectFile::Polytopes(
                    pc.terms()
                        .iter()
                        .map(|(w, p)| PolytopeFile {
                            w: *w,
                            vertices: p.vertices().iter().map(|v| format_point(v)).collect(),
                        })
                        .collect(),
                ),
                SceneObject::Balls(b) => ObjectFile::Balls(
                    b.terms()
                        .iter()
                        .map(|(w, ball)| BallFile {
                            c: ball.center().to_array(),
                            r: ball.radius(),
                            w: *w,
                        })
                        .collect(),
                ),
            };
            (name.clone(), file)
        })
        .collect();
    let maps = scene
        .maps
        .iter()
        .map(|(name, m)| {
            let file = MapFile {
                linear: m.linear().iter().map(|r| format_point(r)).collect(),
                translation: format_point(m.translation()),
            };
            (name.clone(), file)
        })
        .collect();
    let file = SceneFile {
        space: match scene.space {
            Space::Euclidean(n) => SpaceFile::Euclidean(n),
            Space::Sphere3 => SpaceFile::Sphere3,
        },
        objects,
        maps,
        metadata: scene.metadata.clone(),
    };
    serde_json::to_string_pretty(&file).expect("scene serializes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Integrate,
    Convolve,
    Pushforward,
    Valuations,
    KinematicFlat,
    Crofton,
    VerifyS3,
    RecoverS3,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Integrate,
        Command::Convolve,
        Command::Pushforward,
        Command::Valuations,
        Command::KinematicFlat,
        Command::Crofton,
        Command::VerifyS3,
        Command::RecoverS3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Integrate => "integrate",
            Command::Convolve => "convolve",
            Command::Pushforward => "pushforward",
            Command::Valuations => "valuations",
            Command::KinematicFlat => "kinematic-flat",
            Command::Crofton => "crofton",
            Command::VerifyS3 => "verify-s3",
            Command::RecoverS3 => "recover-s3",
        }
    }

    pub fn needs_scene(self) -> bool {
        !matches!(self, Command::VerifyS3 | Command::RecoverS3)
    }
}

impl FromStr for Command {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| invalid("command", format!("unknown command '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(invalid("format", format!("unknown format '{s}'"))),
        }
    }
}

/// `count_r x count_s` radii in `[GRID_MIN, r_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub count_r: usize,
    pub count_s: usize,
    pub r_max: f64,
}

impl FromStr for GridSpec {
    type Err = IoError;

    /// `"nr,ns,rmax"`.
    fn from_str(s: &str) -> Result<Self, IoError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || invalid("grid", format!("expected nr,ns,rmax, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(GridSpec {
            count_r: parts[0].parse().map_err(|_| bad())?,
            count_s: parts[1].parse().map_err(|_| bad())?,
            r_max: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let at = |j: usize, m: usize| {
            if m == 1 {
                self.r_max
            } else {
                GRID_MIN + (self.r_max - GRID_MIN) * j as f64 / (m - 1) as f64
            }
        };
        (0..self.count_r)
            .flat_map(|a| (0..self.count_s).map(move |b| (at(a, self.count_r), at(b, self.count_s))))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub grid: GridSpec,
    pub tolerance: f64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000,
            grid: GridSpec {
                count_r: 20,
                count_s: 20,
                r_max: 0.78,
            },
            tolerance: 1e-9,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self, command: Command) -> Result<(), IoError> {
        if !(self.tolerance > 0.0) {
            return Err(invalid("config", "tolerance must be positive"));
        }
        if self.samples == 0 {
            return Err(invalid("config", "samples must be positive"));
        }
        if self.grid.count_r == 0 || self.grid.count_s == 0 {
            return Err(invalid("config", "grid counts must be positive"));
        }
        if !(self.grid.r_max > GRID_MIN) {
            return Err(invalid("config", format!("grid r_max must exceed {GRID_MIN}")));
        }
        if matches!(command, Command::VerifyS3 | Command::RecoverS3) && self.grid.r_max >= FRAC_PI_4 {
            return Err(invalid("config", "sphere grids need r_max < pi/4 so that r + s < pi/2"));
        }
        Ok(())
    }
}

/// One result line; unused index columns are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub name: String,
    pub i: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub value: f64,
    pub se: Option<f64>,
    pub residual: Option<f64>,
}

impl Row {
    fn value(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            i: None,
            k: None,
            l: None,
            value,
            se: None,
            residual: None,
        }
    }

    fn at(mut self, i: usize) -> Self {
        self.i = Some(i);
        self
    }

    fn with_se(mut self, se: f64) -> Self {
        self.se = Some(se);
        self
    }

    fn with_residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: Command,
    pub config: RunConfig,
    pub inputs: Vec<String>,
    pub metadata: BTreeMap<String, String>,
    pub passed: bool,
    pub results: Vec<Row>,
}

/// Monte Carlo agreement: within three standard errors plus the tolerance.
fn mc_agrees(diff: f64, se: f64, tol: f64) -> bool {
    diff.abs() <= 3.0 * se + tol
}

fn as_cf(name: &str, obj: &SceneObject) -> Result<StratifiedCF, IoError> {
    match obj {
        SceneObject::Cf(cf) => Ok(cf.clone()),
        SceneObject::Polytopes(pc) => Ok(from_polytopes(pc)),
        SceneObject::Balls(_) => Err(invalid(name, "expected a euclidean object")),
    }
}

fn as_polytopes(name: &str, obj: &SceneObject) -> Result<PolytopeCombination, IoError> {
    match obj {
        SceneObject::Cf(cf) => Ok(cf.to_polytope_combination()),
        SceneObject::Polytopes(pc) => Ok(pc.clone()),
        SceneObject::Balls(_) => Err(invalid(name, "expected a euclidean object")),
    }
}

fn as_balls<'a>(name: &str, obj: &'a SceneObject) -> Result<&'a BallCF, IoError> {
    match obj {
        SceneObject::Balls(b) => Ok(b),
        _ => Err(invalid(name, "expected a ball object on sphere3")),
    }
}

fn first_two(scene: &Scene) -> Result<[(&String, &SceneObject); 2], IoError> {
    let mut it = scene.objects.iter();
    match (it.next(), it.next()) {
        (Some(a), Some(b)) => Ok([a, b]),
        _ => Err(invalid("scene", "command needs at least two objects")),
    }
}

fn need_scene(scene: Option<&Scene>) -> Result<&Scene, IoError> {
    scene.ok_or_else(|| invalid("scene", "command needs a scene"))
}

/// Runs a command. The report depends only on `(scene, config)`.
pub fn run(command: Command, scene: Option<&Scene>, config: &RunConfig) -> Result<Report, IoError> {
    config.validate(command)?;
    let mut rows = Vec::new();
    let mut passed = true;
    match command {
        Command::Integrate => {
            for (name, obj) in &need_scene(scene)?.objects {
                let chi = match obj {
                    SceneObject::Cf(cf) => cf.euler_integral(),
                    SceneObject::Polytopes(pc) => pc.terms().iter().map(|(m, _)| m).sum(),
                    SceneObject::Balls(b) => b.euler_integral(),
                };
                rows.push(Row::value(name.clone(), chi as f64));
            }
        }
        Command::Convolve => {
            let s = need_scene(scene)?;
            let [(na, a), (nb, b)] = first_two(s)?;
            let label = format!("{na}*{nb}");
            match s.space {
                Space::Euclidean(n) => {
                    let c = convolve(&as_cf(na, a)?, &as_cf(nb, b)?, ConvolutionMethod::ConvexBilinear)?;
                    rows.push(Row::value(format!("chi({label})"), c.euler_integral() as f64));
                    for k in 0..=n {
                        rows.push(Row::value(format!("mu({label})"), evaluate_valuation(k, &c)).at(k));
                    }
                }
                Space::Sphere3 => {
                    let c = convolve_balls(as_balls(na, a)?, as_balls(nb, b)?)?;
                    for i in 0..4 {
                        rows.push(Row::value(format!("nu({label})"), ball_cf_valuation(i, &c)?).at(i));
                    }
                }
            }
        }
        Command::Pushforward => {
            let s = need_scene(scene)?;
            if s.maps.is_empty() {
                return Err(invalid("scene", "pushforward needs at least one map"));
            }
            for (mname, map) in &s.maps {
                for (name, obj) in &s.objects {
                    let cf = as_cf(name, obj)?;
                    let image = pushforward(&cf, map)?;
                    let fubini = (image.euler_integral() - cf.euler_integral()).abs() as f64;
                    passed &= fubini == 0.0;
                    rows.push(Row::value(format!("chi({mname}({name}))"), image.euler_integral() as f64).with_residual(fubini));
                }
            }
        }
        Command::Valuations => {
            let s = need_scene(scene)?;
            for (name, obj) in &s.objects {
                match s.space {
                    Space::Euclidean(n) => {
                        let pc = as_polytopes(name, obj)?;
                        for k in 0..=n {
                            rows.push(Row::value(format!("mu({name})"), evaluate_valuation(k, &pc)).at(k));
                        }
                    }
                    Space::Sphere3 => {
                        for i in 0..4 {
                            rows.push(Row::value(format!("nu({name})"), ball_cf_valuation(i, as_balls(name, obj)?)?).at(i));
                        }
                    }
                }
            }
        }
        Command::KinematicFlat => {
            let s = need_scene(scene)?;
            let Space::Euclidean(n) = s.space else {
                return Err(invalid("scene", "kinematic-flat needs a euclidean space"));
            };
            if n < 2 {
                return Err(invalid("scene", "kinematic-flat needs dimension 2 or 3"));
            }
            let [(na, a), (nb, b)] = first_two(s)?;
            let (pa, pb) = (as_polytopes(na, a)?, as_polytopes(nb, b)?);
            let grid = square_grid(config.grid.count_r, config.grid.count_s, GRID_MIN, config.grid.r_max);
            let c = flat_kinematic_tensor(n, &grid)?;
            push_tensor(&mut rows, "c", &c.entries, None);
            rows.push(Row::value("c_residual", c.residual));
            let mu_a: Vec<f64> = (0..=n).map(|k| evaluate_valuation(k, &pa)).collect();
            let mu_b: Vec<f64> = (0..=n).map(|k| evaluate_valuation(k, &pb)).collect();
            for i in 0..=n {
                let rhs: f64 = (0..=n)
                    .flat_map(|k| (0..=n).map(move |l| (k, l)))
                    .map(|(k, l)| c.get(i, k, l) * mu_a[k] * mu_b[l])
                    .sum();
                let (est, se) = rotation_average_convolution(&pa, &pb, i, config.samples, config.seed)?;
                passed &= mc_agrees(est - rhs, se, config.tolerance);
                rows.push(Row::value("rhs", rhs).at(i));
                rows.push(Row::value("mc", est).at(i).with_se(se).with_residual((est - rhs).abs()));
            }
        }
        Command::Crofton => {
            let s = need_scene(scene)?;
            for (idx, (name, obj)) in s.objects.iter().enumerate() {
                let balls = as_balls(name, obj)?;
                for i in 1..4 {
                    let seed = rng::child_seed(config.seed, "crofton-command", (idx * 4 + i) as u64);
                    let est = crofton_valuation(i, balls, config.samples, seed)?;
                    let exact = ball_cf_valuation(i, balls)?;
                    let diff = est.estimate - exact;
                    passed &= mc_agrees(diff, est.std_error, config.tolerance);
                    rows.push(
                        Row::value(format!("nu({name})"), est.estimate)
                            .at(i)
                            .with_se(est.std_error)
                            .with_residual(diff.abs()),
                    );
                }
            }
        }
        Command::VerifyS3 => {
            let res = verify_m_table(&config.grid.points())?;
            for (i, r) in res.iter().enumerate() {
                passed &= *r <= config.tolerance;
                rows.push(Row::value("m_table", *r).at(i).with_residual(*r));
            }
        }
        Command::RecoverS3 => {
            let t = recover_d(&config.grid.points())?;
            let table = table_tensor();
            push_tensor(&mut rows, "d", &t.entries, Some(&table.entries));
            passed &= rows.iter().all(|r| r.residual.unwrap_or(0.0) <= config.tolerance);
            rows.push(Row::value("ls_residual", t.residual));
        }
    }
    if let Some(s) = scene {
        if command.needs_scene() {
            check_space(command, s)?;
        }
    }
    Ok(Report {
        schema: SCHEMA.into(),
        command,
        config: config.clone(),
        inputs: scene.map(|s| s.objects.keys().cloned().collect()).unwrap_or_default(),
        metadata: scene.map(|s| s.metadata.clone()).unwrap_or_default(),
        passed,
        results: rows,
    })
}

fn check_space(command: Command, s: &Scene) -> Result<(), IoError> {
    if command == Command::Crofton && s.space != Space::Sphere3 {
        return Err(invalid("scene", "crofton needs space sphere3"));
    }
    Ok(())
}

fn push_tensor(rows: &mut Vec<Row>, name: &str, entries: &[Vec<Vec<f64>>], reference: Option<&Vec<Vec<Vec<f64>>>>) {
    for (i, plane) in entries.iter().enumerate() {
        for (k, row) in plane.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                let mut r = Row::value(name, *v).at(i);
                r.k = Some(k);
                r.l = Some(l);
                if let Some(t) = reference {
                    r.residual = Some((v - t[i][k][l]).abs());
                }
                rows.push(r);
            }
        }
    }
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_report(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("name,i,k,l,value,se,residual\n");
            let idx = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            for r in &report.results {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    csv_field(&r.name),
                    idx(r.i),
                    idx(r.k),
                    idx(r.l),
                    csv_float(r.value),
                    r.se.map(csv_float).unwrap_or_default(),
                    r.residual.map(csv_float).unwrap_or_default()
                );
            }
            out
        }
    }
}

pub fn write_report(report: &Report, path: &Path, format: OutputFormat) -> Result<(), IoError> {
    std::fs::write(path, render_report(report, format)).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))
}

pub fn parse_report_json(text: &str) -> Result<Report, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTERVAL: &str = r#"{"space":{"euclidean":1},"objects":{"u":{"cf":{"vertices":[["0"],["1"]],"simplices":[{"v":[0],"w":1},{"v":[1],"w":1},{"v":[0,1],"w":1}]}}}}"#;

    #[test]
    fn interval_scene() {
        let s = parse_scene_str(INTERVAL).unwrap();
        let SceneObject::Cf(cf) = &s.objects["u"] else { panic!() };
        let unit = StratifiedCF::closed_simplex(vec![crate::scalar::point(&[0]), crate::scalar::point(&[1])]).unwrap();
        assert!(cf.pointwise_eq(&unit));
        let r = run(Command::Integrate, Some(&s), &RunConfig::default()).unwrap();
        assert_eq!(r.results[0].value, 1.0);
        assert_eq!(parse_scene_str(&write_scene(&s)).unwrap(), s);
    }

    #[test]
    fn ball_scene() {
        let s = parse_scene_str(r#"{"space":"sphere3","objects":{"b":{"balls":[{"c":[1,0,0,0],"r":0.5,"w":1}]}}}"#).unwrap();
        let SceneObject::Balls(b) = &s.objects["b"] else { panic!() };
        assert_eq!(b.terms().len(), 1);
        assert_eq!(parse_scene_str(&write_scene(&s)).unwrap(), s);
    }

    #[test]
    fn validation_and_parse_errors() {
        let bad = r#"{"space":{"euclidean":2},"objects":{"u":{"cf":{"vertices":[["0"],["1"]],"simplices":[{"v":[0],"w":1}]}}}}"#;
        assert!(matches!(parse_scene_str(bad), Err(IoError::Validation { .. })));
        let broken = "{\n\"space\": \n}";
        assert!(matches!(parse_scene_str(broken), Err(IoError::Parse { line: 3, .. })));
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report {
            schema: SCHEMA.into(),
            command: Command::Integrate,
            config: RunConfig::default(),
            inputs: vec![],
            metadata: BTreeMap::new(),
            passed: true,
            results: vec![],
        };
        assert_eq!(render_report(&r, OutputFormat::Csv), "name,i,k,l,value,se,residual\n");
    }

    #[test]
    fn recover_report_has_cube_of_rows() {
        let mut cfg = RunConfig::default();
        cfg.grid = GridSpec {
            count_r: 15,
            count_s: 15,
            r_max: 0.78,
        };
        cfg.tolerance = 1e-6;
        let r = run(Command::RecoverS3, None, &cfg).unwrap();
        assert_eq!(r.results.iter().filter(|x| x.name == "d").count(), 64);
        assert!(r.passed);
        let json = render_report(&r, OutputFormat::Json);
        assert_eq!(parse_report_json(&json).unwrap(), r);
    }
}
