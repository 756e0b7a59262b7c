use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::datamodel::InstanceKey;
use crate::ela_lite::{Bounds, Objective};
use crate::error::Result;
use crate::rng::{derived_stream, normal, unit};

pub const BASE_SUITE: &str = "SYN";
pub const VARIANT_SUITE: &str = "ROT";
/// Search box used by every built-in problem.
pub const BOX: (f64, f64) = (-5.0, 5.0);

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub key: InstanceKey,
    pub bounds: Bounds,
    pub optimum_value: f64,
    /// A point attaining `optimum_value`.
    pub optimum_point: Vec<f64>,
    evaluator: Evaluator,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("key", &self.key)
            .field("optimum_value", &self.optimum_value)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        key: InstanceKey,
        bounds: Bounds,
        optimum_value: f64,
        optimum_point: Vec<f64>,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            key,
            bounds,
            optimum_value,
            optimum_point,
            evaluator: Arc::new(evaluator),
        }
    }

    pub fn dimension(&self) -> usize {
        self.bounds.dimension()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }
}

impl Objective for ProblemSpec {
    fn key(&self) -> &InstanceKey {
        &self.key
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.value(x)
    }
}

fn cond_weights(d: usize, cond: f64) -> Vec<f64> {
    (0..d)
        .map(|i| {
            if d == 1 {
                1.0
            } else {
                cond.powf(i as f64 / (d - 1) as f64)
            }
        })
        .collect()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = (sphere(x) / n).sqrt();
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    (-20.0 * (-0.2 * sq).exp() - cs.exp() + 20.0 + E).max(0.0)
}

fn griewank(x: &[f64]) -> f64 {
    let s = sphere(x) / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    s - p + 1.0
}

fn different_powers(x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, v)| {
            let e = if d == 1 { 2.0 } else { 2.0 + 4.0 * i as f64 / (d - 1) as f64 };
            v.abs().powf(e)
        })
        .sum::<f64>()
        .sqrt()
}

fn schwefel_12(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    x.iter()
        .map(|v| {
            prefix += v;
            prefix * prefix
        })
        .sum()
}

const STYBLINSKI_ARG: f64 = -2.903_534_018_185_960_3;

fn styblinski_tang(x: &[f64]) -> f64 {
    0.5 * x.iter().map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v).sum::<f64>()
}

fn styblinski_min(d: usize) -> f64 {
    styblinski_tang(&vec![STYBLINSKI_ARG; d])
}

fn zakharov(x: &[f64]) -> f64 {
    let s: f64 = x.iter().enumerate().map(|(i, v)| 0.5 * (i + 1) as f64 * v).sum();
    sphere(x) + s * s + s.powi(4)
}

/// The base functions: (name, evaluator, optimum point, optimum value).
fn base_functions(d: usize) -> Vec<(&'static str, Evaluator, Vec<f64>, f64)> {
    let w_ell = cond_weights(d, 1e6);
    let w_ell_f = w_ell.clone();
    let zeros = vec![0.0; d];
    vec![
        ("sphere", Arc::new(sphere), zeros.clone(), 0.0),
        (
            "ellipsoid",
            Arc::new(move |x: &[f64]| x.iter().zip(&w_ell_f).map(|(v, w)| w * v * v).sum()),
            zeros.clone(),
            0.0,
        ),
        ("rastrigin", Arc::new(rastrigin), zeros.clone(), 0.0),
        ("rosenbrock", Arc::new(rosenbrock), vec![1.0; d], 0.0),
        ("ackley", Arc::new(ackley), zeros.clone(), 0.0),
        ("griewank", Arc::new(griewank), zeros.clone(), 0.0),
        (
            "bent_cigar",
            Arc::new(|x: &[f64]| x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>()),
            zeros.clone(),
            0.0,
        ),
        (
            "discus",
            Arc::new(|x: &[f64]| 1e6 * x[0] * x[0] + x[1..].iter().map(|v| v * v).sum::<f64>()),
            zeros.clone(),
            0.0,
        ),
        ("different_powers", Arc::new(different_powers), zeros.clone(), 0.0),
        ("schwefel_1_2", Arc::new(schwefel_12), zeros.clone(), 0.0),
        (
            "styblinski_tang",
            Arc::new(styblinski_tang),
            vec![STYBLINSKI_ARG; d],
            styblinski_min(d),
        ),
        ("zakharov", Arc::new(zakharov), zeros, 0.0),
    ]
}

/// Twelve unshifted, unrotated problems on `[-5, 5]^d` (suite `SYN`,
/// problem ids `1..=12`).
pub fn builtin_problems(d: usize) -> Vec<ProblemSpec> {
    assert!(d >= 1, "dimension must be positive");
    let bounds = Bounds::uniform(d, BOX.0, BOX.1).expect("valid box");
    base_functions(d)
        .into_iter()
        .enumerate()
        .map(|(i, (name, f, xopt, fopt))| {
            let key = InstanceKey::new(BASE_SUITE, i as u32 + 1, 1, d as u32).expect("valid key");
            ProblemSpec {
                name: name.to_string(),
                key,
                bounds: bounds.clone(),
                optimum_value: fopt,
                optimum_point: xopt,
                evaluator: f,
            }
        })
        .collect()
}

/// Haar-distributed orthogonal matrix from the QR factorisation of a seeded
/// Gaussian matrix.
pub fn random_rotation(d: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = derived_stream(seed, &[0x0707]);
    let g = DMatrix::from_fn(d, d, |_, _| normal(&mut rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `f(R (x - s) + x*)`: optimum moved to `shift`, landscape rotated by `R`.
pub fn transformed(base: &ProblemSpec, key: InstanceKey, rotation: DMatrix<f64>, shift: Vec<f64>) -> Result<ProblemSpec> {
    let d = base.dimension();
    assert_eq!(rotation.nrows(), d);
    assert_eq!(shift.len(), d);
    let inner = base.evaluator.clone();
    let anchor = base.optimum_point.clone();
    let s = shift.clone();
    let evaluator = move |x: &[f64]| {
        let mut z = anchor.clone();
        for i in 0..d {
            for j in 0..d {
                z[i] += rotation[(i, j)] * (x[j] - s[j]);
            }
        }
        inner(&z)
    };
    Ok(ProblemSpec {
        name: format!("{}_rot", base.name),
        key,
        bounds: base.bounds.clone(),
        optimum_value: base.optimum_value,
        optimum_point: shift,
        evaluator: Arc::new(evaluator),
    })
}

/// Seeded rotated and shifted copies of every base problem (suite `ROT`,
/// instance ids `1..=instances`). Shifts are uniform in `[-4, 4]^d`.
pub fn rotated_variants(base: &[ProblemSpec], instances: u32, seed: u64) -> Vec<ProblemSpec> {
    let mut out = Vec::with_capacity(base.len() * instances as usize);
    for p in base {
        for inst in 1..=instances {
            let d = p.dimension();
            let s = crate::rng::derive_seed(seed, &[p.key.problem_id as u64, inst as u64]);
            let mut rng = derived_stream(s, &[1]);
            let shift = (0..d).map(|_| -4.0 + 8.0 * unit(&mut rng)).collect();
            let key = InstanceKey::new(VARIANT_SUITE, p.key.problem_id, inst, d as u32).expect("valid key");
            out.push(transformed(p, key, random_rotation(d, s), shift).expect("dimensions agree"));
        }
    }
    out
}

/// Base problems followed by their rotated variants.
pub fn harness_problems(d: usize, instances: u32, seed: u64) -> Vec<ProblemSpec> {
    let base = builtin_problems(d);
    let mut all = base.clone();
    all.extend(rotated_variants(&base, instances, seed));
    all
}
