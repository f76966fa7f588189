//! Standard global-optimization test functions.
//!
//! Formulas and domains follow the usual test-function collections
//! (Molga & Smutnicki 2005; the Simon Fraser virtual library). Every
//! function is defined there for minimization and is negated here, so
//! optima are maxima.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::Objective;
use crate::space::SearchSpace;

/// Michalewicz steepness.
pub const MICHALEWICZ_M: f64 = 10.0;
/// Perm function offset.
pub const PERM_BETA: f64 = 0.5;

const MAX_DIM: usize = 1000;
const PERM_MAX_DIM: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ackley,
    BukinN6,
    Camel,
    Colville,
    Damavandi,
    DropWave,
    Eggholder,
    Hartmann6,
    Himmelblau,
    HolderTable,
    Michalewicz,
    Perm,
    Powell,
    Rastrigin,
    Rosenbrock,
    Schaffer,
    Schubert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dims {
    Fixed(usize),
    /// `min..=max`, `default` when no dimension is given.
    Any { min: usize, max: usize, default: usize },
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::Ackley,
        Family::BukinN6,
        Family::Camel,
        Family::Colville,
        Family::Damavandi,
        Family::DropWave,
        Family::Eggholder,
        Family::Hartmann6,
        Family::Himmelblau,
        Family::HolderTable,
        Family::Michalewicz,
        Family::Perm,
        Family::Powell,
        Family::Rastrigin,
        Family::Rosenbrock,
        Family::Schaffer,
        Family::Schubert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ackley => "ackley",
            Family::BukinN6 => "bukin_n6",
            Family::Camel => "camel",
            Family::Colville => "colville",
            Family::Damavandi => "damavandi",
            Family::DropWave => "drop_wave",
            Family::Eggholder => "eggholder",
            Family::Hartmann6 => "hartmann6",
            Family::Himmelblau => "himmelblau",
            Family::HolderTable => "holder_table",
            Family::Michalewicz => "michalewicz",
            Family::Perm => "perm",
            Family::Powell => "powell",
            Family::Rastrigin => "rastrigin",
            Family::Rosenbrock => "rosenbrock",
            Family::Schaffer => "schaffer",
            Family::Schubert => "schubert",
        }
    }

    fn aliases(self) -> &'static [&'static str] {
        match self {
            Family::BukinN6 => &["bukin", "bukin6"],
            Family::Camel => &["three_hump_camel", "camel3", "threehumpcamel"],
            Family::DropWave => &["dropwave"],
            Family::Hartmann6 => &["hartmann"],
            Family::HolderTable => &["holder", "holdertable", "hölder", "hölder_table"],
            Family::Schaffer => &["schaffer_n2", "schaffer2"],
            Family::Schubert => &["shubert"],
            _ => &[],
        }
    }

    fn dims(self) -> Dims {
        match self {
            Family::Colville => Dims::Fixed(4),
            Family::Hartmann6 => Dims::Fixed(6),
            Family::Ackley | Family::Michalewicz | Family::Rastrigin | Family::Rosenbrock => {
                Dims::Any { min: 2, max: MAX_DIM, default: 2 }
            }
            Family::Powell => Dims::Any { min: 2, max: MAX_DIM, default: 4 },
            Family::Perm => Dims::Any { min: 2, max: PERM_MAX_DIM, default: 2 },
            _ => Dims::Fixed(2),
        }
    }

    fn default_dim(self) -> usize {
        match self.dims() {
            Dims::Fixed(d) => d,
            Dims::Any { default, .. } => default,
        }
    }

    fn domain(self, d: usize) -> (Vec<f64>, Vec<f64>) {
        let cube = |lo: f64, hi: f64| (vec![lo; d], vec![hi; d]);
        match self {
            Family::Ackley => cube(-32.768, 32.768),
            Family::BukinN6 => (vec![-15.0, -3.0], vec![-5.0, 3.0]),
            Family::Camel | Family::Himmelblau => cube(-5.0, 5.0),
            Family::Colville | Family::HolderTable | Family::Schubert => cube(-10.0, 10.0),
            Family::Damavandi => cube(0.0, 14.0),
            Family::DropWave | Family::Rastrigin => cube(-5.12, 5.12),
            Family::Eggholder => cube(-512.0, 512.0),
            Family::Hartmann6 => cube(0.0, 1.0),
            Family::Michalewicz => cube(0.0, PI),
            Family::Perm => cube(-(d as f64), d as f64),
            Family::Powell => cube(-4.0, 5.0),
            Family::Rosenbrock => cube(-2.048, 2.048),
            Family::Schaffer => cube(-100.0, 100.0),
        }
    }

    /// A global minimizer and the minimum, in minimization form.
    fn optimum(self, d: usize) -> Option<(Vec<f64>, f64)> {
        Some(match self {
            Family::Ackley | Family::Rastrigin | Family::Powell => (vec![0.0; d], 0.0),
            Family::Camel | Family::Schaffer => (vec![0.0; 2], 0.0),
            Family::BukinN6 => (vec![-10.0, 1.0], 0.0),
            Family::Colville => (vec![1.0; 4], 0.0),
            Family::Damavandi => (vec![2.0, 2.0], 0.0),
            Family::DropWave => (vec![0.0, 0.0], -1.0),
            Family::Eggholder => (vec![512.0, 404.231_805_106_352_5], -959.640_662_720_850_8),
            Family::Hartmann6 => (
                vec![
                    0.201_689_509_093_657_46,
                    0.150_010_693_541_113_74,
                    0.476_873_972_925_099_8,
                    0.275_332_427_522_078_2,
                    0.311_651_617_239_568_6,
                    0.657_300_534_553_670_2,
                ],
                -3.322_368_011_415_514,
            ),
            Family::Himmelblau => (vec![3.0, 2.0], 0.0),
            Family::HolderTable => (
                vec![8.055_023_466_339_607, 9.664_590_027_738_118],
                -19.208_502_567_886_73,
            ),
            Family::Michalewicz if d == 2 => (
                vec![2.202_905_524_006_798_7, std::f64::consts::FRAC_PI_2],
                -1.801_303_410_098_552_3,
            ),
            Family::Michalewicz => return None,
            Family::Perm => ((1..=d).map(|j| j as f64).collect(), 0.0),
            Family::Rosenbrock => (vec![1.0; d], 0.0),
            Family::Schubert => (
                vec![-7.083_506_409_397_382, 4.858_056_877_022_195],
                -186.730_908_831_023_8,
            ),
        })
    }

    fn params(self) -> Vec<(String, f64)> {
        match self {
            Family::Michalewicz => vec![("m".into(), MICHALEWICZ_M)],
            Family::Perm => vec![("beta".into(), PERM_BETA)],
            _ => Vec::new(),
        }
    }

    /// Standard formula, minimization form.
    pub fn minimize_form(self, x: &[f64]) -> f64 {
        match self {
            Family::Ackley => ackley(x),
            Family::BukinN6 => 100.0 * (x[1] - 0.01 * x[0] * x[0]).abs().sqrt() + 0.01 * (x[0] + 10.0).abs(),
            Family::Camel => {
                let (a, b) = (x[0], x[1]);
                2.0 * a * a - 1.05 * a.powi(4) + a.powi(6) / 6.0 + a * b + b * b
            }
            Family::Colville => colville(x),
            Family::Damavandi => damavandi(x),
            Family::DropWave => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                -(1.0 + (12.0 * r2.sqrt()).cos()) / (0.5 * r2 + 2.0)
            }
            Family::Eggholder => {
                let (a, b) = (x[0], x[1]);
                -(b + 47.0) * (b + a / 2.0 + 47.0).abs().sqrt().sin() - a * (a - (b + 47.0)).abs().sqrt().sin()
            }
            Family::Hartmann6 => hartmann6(x),
            Family::Himmelblau => {
                let (a, b) = (x[0], x[1]);
                (a * a + b - 11.0).powi(2) + (a + b * b - 7.0).powi(2)
            }
            Family::HolderTable => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                -(x[0].sin() * x[1].cos() * (1.0 - r / PI).abs().exp()).abs()
            }
            Family::Michalewicz => michalewicz(x),
            Family::Perm => perm(x),
            Family::Powell => powell(x),
            Family::Rastrigin => rastrigin(x),
            Family::Rosenbrock => rosenbrock(x),
            Family::Schaffer => {
                let (a2, b2) = (x[0] * x[0], x[1] * x[1]);
                0.5 + ((a2 - b2).sin().powi(2) - 0.5) / (1.0 + 0.001 * (a2 + b2)).powi(2)
            }
            Family::Schubert => shubert_factor(x[0]) * shubert_factor(x[1]),
        }
    }
}

fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sq, cs) = x
        .iter()
        .fold((0.0, 0.0), |(s, c), v| (s + v * v, c + (2.0 * PI * v).cos()));
    -20.0 * (-0.2 * (sq / n).sqrt()).exp() - (cs / n).exp() + 20.0 + E
}

fn colville(x: &[f64]) -> f64 {
    let [a, b, c, d] = [x[0], x[1], x[2], x[3]];
    100.0 * (a * a - b).powi(2)
        + (a - 1.0).powi(2)
        + (c - 1.0).powi(2)
        + 90.0 * (c * c - d).powi(2)
        + 10.1 * ((b - 1.0).powi(2) + (d - 1.0).powi(2))
        + 19.8 * (b - 1.0) * (d - 1.0)
}

/// `sin(πu)/(πu)`, with its limit 1 at `u = 0`.
fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

fn damavandi(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let s = (sinc(a - 2.0) * sinc(b - 2.0)).abs();
    (1.0 - s.powi(5)) * (2.0 + (a - 7.0).powi(2) + 2.0 * (b - 7.0).powi(2))
}

const H6_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const H6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const H6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann6(x: &[f64]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..6).map(|j| H6_A[i][j] * (x[j] - H6_P[i][j]).powi(2)).sum();
            H6_ALPHA[i] * (-inner).exp()
        })
        .sum::<f64>()
}

fn michalewicz(x: &[f64]) -> f64 {
    -x.iter()
        .enumerate()
        .map(|(i, v)| v.sin() * ((i + 1) as f64 * v * v / PI).sin().powi(2 * MICHALEWICZ_M as i32))
        .sum::<f64>()
}

fn perm(x: &[f64]) -> f64 {
    let d = x.len();
    (1..=d)
        .map(|i| {
            let inner: f64 = x
                .iter()
                .enumerate()
                .map(|(j0, v)| {
                    let j = (j0 + 1) as f64;
                    (j.powi(i as i32) + PERM_BETA) * ((v / j).powi(i as i32) - 1.0)
                })
                .sum();
            inner * inner
        })
        .sum()
}

/// Groups of four; a trailing partial group is padded with zeros.
fn powell(x: &[f64]) -> f64 {
    x.chunks(4)
        .map(|c| {
            let g = |k: usize| c.get(k).copied().unwrap_or(0.0);
            let (a, b, p, q) = (g(0), g(1), g(2), g(3));
            (a + 10.0 * b).powi(2) + 5.0 * (p - q).powi(2) + (b - 2.0 * p).powi(4) + 10.0 * (a - q).powi(4)
        })
        .sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn shubert_factor(v: f64) -> f64 {
    (1..=5)
        .map(|i| {
            let i = i as f64;
            i * ((i + 1.0) * v + i).cos()
        })
        .sum()
}

/// Serializable description of a benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub name: String,
    pub family: Family,
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Maximizer, when known.
    pub known_opt_point: Option<Vec<f64>>,
    /// Maximum (negated literature minimum), when known.
    pub known_opt_value: Option<f64>,
    /// Fixed shape parameters, e.g. Michalewicz's steepness.
    pub params: Vec<(String, f64)>,
}

/// A benchmark ready to optimize.
#[derive(Debug, Clone)]
pub struct Benchmark {
    spec: BenchmarkSpec,
    space: SearchSpace,
}

impl Benchmark {
    pub fn new(family: Family, dim: Option<usize>) -> Result<Self> {
        let d = dim.unwrap_or_else(|| family.default_dim());
        match family.dims() {
            Dims::Fixed(f) if f != d => {
                return Err(Error::InvalidConfig(format!(
                    "{} is {f}-dimensional, got dimension {d}",
                    family.name()
                )))
            }
            Dims::Any { min, max, .. } if !(min..=max).contains(&d) => {
                return Err(Error::InvalidConfig(format!(
                    "{} supports dimensions {min}..={max}, got {d}",
                    family.name()
                )))
            }
            _ => {}
        }
        let (lower, upper) = family.domain(d);
        let space = SearchSpace::new(lower.clone(), upper.clone())?;
        let opt = family.optimum(d);
        let name = match family.dims() {
            Dims::Fixed(_) => family.name().to_string(),
            Dims::Any { .. } => format!("{}{d}", family.name()),
        };
        Ok(Self {
            spec: BenchmarkSpec {
                name,
                family,
                dim: d,
                lower,
                upper,
                known_opt_value: opt.as_ref().map(|(_, v)| negate(*v)),
                known_opt_point: opt.map(|(p, _)| p),
                params: family.params(),
            },
            space,
        })
    }

    pub fn spec(&self) -> &BenchmarkSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    /// Evaluates after checking that `x` lies in the domain.
    pub fn evaluate_checked(&self, x: &[f64]) -> Result<f64> {
        self.space.check(x)?;
        Ok(self.evaluate(x))
    }
}

impl Objective for Benchmark {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        negate(self.spec.family.minimize_form(x))
    }

    fn known_max(&self) -> Option<f64> {
        self.spec.known_opt_value
    }
}

/// Sign flip that maps a zero minimum to `+0.0`.
fn negate(v: f64) -> f64 {
    0.0 - v
}

fn normalize(name: &str) -> String {
    name.trim().to_lowercase().replace(['-', ' '], "_")
}

fn family_by_name(name: &str) -> Option<Family> {
    Family::ALL
        .into_iter()
        .find(|f| f.name() == name || f.aliases().contains(&name))
}

/// Resolves `name`, `name:dim` or `name<dim>` (e.g. `rosenbrock500`).
pub fn lookup(name: &str) -> Result<Benchmark> {
    let key = normalize(name);
    let unknown = || Error::UnknownBenchmark(name.to_string());
    if let Some((base, dim)) = key.split_once(':') {
        let family = family_by_name(base).ok_or_else(unknown)?;
        let d = dim
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad dimension in `{name}`")))?;
        return Benchmark::new(family, Some(d));
    }
    if let Some(family) = family_by_name(&key) {
        return Benchmark::new(family, None);
    }
    let digits = key.len() - key.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 {
        let (base, dim) = key.split_at(key.len() - digits);
        if let Some(family) = family_by_name(base.trim_end_matches('_')) {
            return Benchmark::new(family, Some(dim.parse().map_err(|_| unknown())?));
        }
    }
    Err(unknown())
}

/// Every family at its default dimension.
pub fn registry() -> Vec<BenchmarkSpec> {
    Family::ALL
        .into_iter()
        .map(|f| Benchmark::new(f, None).expect("default dimension is valid").spec)
        .collect()
}

/// The twelve low-dimensional benchmarks used for optimizer comparisons:
/// every fixed-dimension function of the collection plus 2-D Rastrigin.
pub fn standard_suite() -> Vec<Benchmark> {
    [
        Family::BukinN6,
        Family::Camel,
        Family::Colville,
        Family::Damavandi,
        Family::DropWave,
        Family::Eggholder,
        Family::Hartmann6,
        Family::Himmelblau,
        Family::HolderTable,
        Family::Schaffer,
        Family::Schubert,
        Family::Rastrigin,
    ]
    .into_iter()
    .map(|f| Benchmark::new(f, None).expect("default dimension is valid"))
    .collect()
}
