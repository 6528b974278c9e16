//! Least-squares recovery of effective link parameters from trial records.
//!
//! Coarse tensor grid search over the free parameters (log-spaced for
//! lengths) followed by Nelder–Mead refinement inside the bounds. Both stages
//! work in box-normalized coordinates so every free parameter lives on
//! `[0, 1]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{link_probability, two_path_gain, LinkModelParams, LinkScenario, TrialRecord};
use crate::error::{Error, Result};

const GRID_POINTS: usize = 25;
const MAX_ITERATIONS: usize = 500;
const IMPROVEMENT_TOL: f64 = 1e-10;
/// Simplex diameter (normalized coordinates) below which refinement stops.
const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreeParam {
    #[serde(rename = "L_r")]
    LR,
    #[serde(rename = "L_z")]
    LZ,
    #[serde(rename = "coupling_db")]
    Coupling,
    #[serde(rename = "sigma_fade_db")]
    SigmaFade,
}

impl FreeParam {
    pub fn name(self) -> &'static str {
        match self {
            FreeParam::LR => "L_r",
            FreeParam::LZ => "L_z",
            FreeParam::Coupling => "coupling_db",
            FreeParam::SigmaFade => "sigma_fade_db",
        }
    }

    fn is_length(self) -> bool {
        matches!(self, FreeParam::LR | FreeParam::LZ)
    }

    fn must_be_positive(self) -> bool {
        !matches!(self, FreeParam::Coupling)
    }

    fn get(self, p: &LinkModelParams) -> f64 {
        match self {
            FreeParam::LR => p.l_r,
            FreeParam::LZ => p.l_z,
            FreeParam::Coupling => p.coupling_db,
            FreeParam::SigmaFade => p.sigma_fade_db,
        }
    }

    fn set(self, p: &mut LinkModelParams, v: f64) {
        match self {
            FreeParam::LR => p.l_r = v,
            FreeParam::LZ => p.l_z = v,
            FreeParam::Coupling => p.coupling_db = v,
            FreeParam::SigmaFade => p.sigma_fade_db = v,
        }
    }
}

impl fmt::Display for FreeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FreeParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L_r" => Ok(FreeParam::LR),
            "L_z" => Ok(FreeParam::LZ),
            "coupling_db" => Ok(FreeParam::Coupling),
            "sigma_fade_db" => Ok(FreeParam::SigmaFade),
            other => Err(Error::domain(format!(
                "unknown free parameter '{other}' (expected L_r, L_z, coupling_db or sigma_fade_db)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamBounds {
    pub lo: f64,
    pub hi: f64,
}

impl ParamBounds {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: LinkModelParams,
    pub objective: f64,
    /// Free parameters in declaration order with their fitted values.
    pub fitted: Vec<(FreeParam, f64)>,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Maps a free parameter between its box and `[0, 1]`.
#[derive(Debug, Clone, Copy)]
struct Axis {
    param: FreeParam,
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn value(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        if self.log {
            (self.lo.ln() + t * (self.hi.ln() - self.lo.ln())).exp()
        } else {
            self.lo + t * (self.hi - self.lo)
        }
    }
}

struct Problem<'a> {
    records: &'a [TrialRecord],
    base: LinkModelParams,
    axes: Vec<Axis>,
}

impl Problem<'_> {
    fn params(&self, t: &[f64]) -> LinkModelParams {
        let mut p = self.base;
        for (axis, &ti) in self.axes.iter().zip(t) {
            axis.param.set(&mut p, axis.value(ti));
        }
        p
    }

    fn objective(&self, t: &[f64]) -> f64 {
        let p = self.params(t);
        self.records
            .iter()
            .map(|r| {
                let s = LinkScenario {
                    tx_depth: r.depth,
                    rx_depth: r.depth,
                    range: r.range,
                };
                let e = link_probability(two_path_gain(&s, &p), &p) - r.success_rate();
                e * e
            })
            .sum()
    }

    fn values(&self, t: &[f64]) -> Vec<f64> {
        self.axes.iter().zip(t).map(|(a, &ti)| a.value(ti)).collect()
    }

    /// Objective first, then the parameter vector in declaration order.
    fn better(&self, a: (&[f64], f64), b: (&[f64], f64)) -> bool {
        match a.1.total_cmp(&b.1) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let (va, vb) = (self.values(a.0), self.values(b.0));
                va.iter()
                    .zip(&vb)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| *o != Ordering::Equal)
                    == Some(Ordering::Less)
            }
        }
    }
}

fn validate(records: &[TrialRecord], free: &[(FreeParam, ParamBounds)]) -> Result<Vec<Axis>> {
    if records.is_empty() {
        return Err(Error::domain("no trial records to fit"));
    }
    if free.is_empty() {
        return Err(Error::domain("no free parameters given"));
    }
    if records.len() < free.len() {
        return Err(Error::domain(format!(
            "{} records cannot constrain {} free parameters",
            records.len(),
            free.len()
        )));
    }
    let mut axes = Vec::with_capacity(free.len());
    for (i, &(param, b)) in free.iter().enumerate() {
        if free[..i].iter().any(|(q, _)| *q == param) {
            return Err(Error::domain(format!("{param} listed twice")));
        }
        if !(b.lo.is_finite() && b.hi.is_finite() && b.lo < b.hi) {
            return Err(Error::domain(format!("bounds for {param} must be finite with lo < hi")));
        }
        if param.must_be_positive() && b.lo <= 0.0 {
            return Err(Error::domain(format!("bounds for {param} must be positive")));
        }
        axes.push(Axis {
            param,
            lo: b.lo,
            hi: b.hi,
            log: param.is_length(),
        });
    }
    let all_one = records.iter().all(|r| r.successes == r.attempts);
    let all_zero = records.iter().all(|r| r.successes == 0);
    if (all_one || all_zero) && free.len() > 1 {
        return Err(Error::Unidentifiable(format!(
            "every record has success rate {}; {} free parameters cannot be separated",
            if all_one { 1 } else { 0 },
            free.len()
        )));
    }
    Ok(axes)
}

/// Fits the `free` parameters of `base` to the observed success rates.
///
/// Minimizes `Σ (p_model − successes/attempts)²` with divers at equal depth.
pub fn fit_parameters(
    records: &[TrialRecord],
    base: &LinkModelParams,
    free: &[(FreeParam, ParamBounds)],
) -> Result<FitResult> {
    base.validate()?;
    let axes = validate(records, free)?;
    let problem = Problem {
        records,
        base: *base,
        axes,
    };
    let dim = problem.axes.len();

    let cells = GRID_POINTS.pow(dim as u32);
    let point = |idx: usize| -> Vec<f64> {
        let mut rest = idx;
        let mut t = vec![0.0; dim];
        // Last axis varies fastest.
        for k in (0..dim).rev() {
            t[k] = (rest % GRID_POINTS) as f64 / (GRID_POINTS - 1) as f64;
            rest /= GRID_POINTS;
        }
        t
    };
    let scores: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|i| problem.objective(&point(i)))
        .collect();
    let mut best = point(0);
    let mut best_f = scores[0];
    for (i, &f) in scores.iter().enumerate().skip(1) {
        let t = point(i);
        if problem.better((&t, f), (&best, best_f)) {
            best = t;
            best_f = f;
        }
    }
    let mut evaluations = cells;

    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let (t, f, iterations, evals) = nelder_mead(&problem, best, best_f, step);
    evaluations += evals;

    let params = problem.params(&t);
    let fitted = problem
        .axes
        .iter()
        .map(|a| (a.param, a.param.get(&params)))
        .collect();
    Ok(FitResult {
        params,
        objective: f,
        fitted,
        iterations,
        evaluations,
    })
}

fn nelder_mead(problem: &Problem, start: Vec<f64>, start_f: f64, step: f64) -> (Vec<f64>, f64, usize, usize) {
    let dim = start.len();
    let clamp = |v: Vec<f64>| v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect::<Vec<_>>();
    let mut evals = 0;
    let mut eval = |t: &[f64]| {
        evals += 1;
        problem.objective(t)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.clone(), start_f)];
    for k in 0..dim {
        let mut v = start.clone();
        // Step inward when the grid optimum sits on the upper face.
        v[k] += if v[k] + step <= 1.0 { step } else { -step };
        let f = eval(&v);
        simplex.push((v, f));
    }

    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| {
            if problem.better((&a.0, a.1), (&b.0, b.1)) {
                Ordering::Less
            } else if problem.better((&b.0, b.1), (&a.0, a.1)) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    };

    let mut iterations = 0;
    order(&mut simplex);
    while iterations < MAX_ITERATIONS {
        let spread = simplex[dim].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread < IMPROVEMENT_TOL && diameter < SIMPLEX_TOL {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(v, _)| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let along = |c: f64| -> Vec<f64> {
            clamp(
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(m, w)| m + c * (m - w))
                    .collect(),
            )
        };

        let reflected = along(1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < simplex[dim].1 {
                let c = along(0.5);
                let f = eval(&c);
                (c, f)
            } else {
                let c = along(-0.5);
                let f = eval(&c);
                (c, f)
            };
            if fc < simplex[dim].1.min(fr) {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    let f = eval(&v);
                    *vertex = (v, f);
                }
            }
        }
        order(&mut simplex);
    }
    let (t, f) = simplex.swap_remove(0);
    (t, f, iterations, evals)
}
