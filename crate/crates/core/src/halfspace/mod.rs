//! Vertical electric dipole near a flat interface between two half-spaces.
//!
//! The upper medium fills `z > 0` (air by default), the lower medium fills
//! `z ≤ 0`. With the `exp(+jωt)` convention the dipole's Hertz potential in
//! its own medium `s` is `A·e^{-jk_s R}/R`, `A = Il/(4πjωε0ε_s)`, and
//! `E_z = (∂²/∂z² + k²)Π`. Reflected and transmitted parts are Sommerfeld
//! integrals over the radial wavenumber `λ`:
//!
//! ```text
//! same side:  E_z^r = A ∫ J0(λρ) λ³/u_s · R(λ) · e^{-u_s (d + h)}     dλ
//! other side: E_z^t = A ∫ J0(λρ) λ³/u_s · T(λ) · e^{-u_s h - u_o d}   dλ
//! R = (ε_o u_s − ε_s u_o)/(ε_o u_s + ε_s u_o),   T = ε_s (1 + R)/ε_o
//! ```
//!
//! where `u_i = sqrt(λ² − ε_i k0²)` with `Re u_i ≥ 0`, `h` is the source
//! distance and `d` the observer distance from the interface. The direct
//! wave is evaluated in closed form.
//!
//! The integration path is the real axis. The head `[0, λ_head]` is split at
//! the branch points `Re k_s`, `Re k_o`; each head panel is mapped through a
//! cubic smoothstep so inverse-square-root endpoint behaviour at lossless
//! branch points becomes integrable by Gauss–Legendre panels. The tail is
//! partitioned at the zeros of `J0(λρ)` and summed with iterated weighted
//! averages.

pub mod bessel;
pub mod quadrature;

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{complex_permittivity, Medium, RfContext, EPS0};
use quadrature::{adaptive, adaptive_panels, GaussLegendre, WeightedAverages};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Vertical electric dipole. `depth` is the signed `z` coordinate of the
/// source (negative below the interface).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleSource {
    pub depth: f64,
    /// Current–length product (A·m).
    pub moment: f64,
}

impl DipoleSource {
    pub fn new(depth: f64, moment: f64) -> Result<Self> {
        if !(moment.is_finite() && moment > 0.0) {
            return Err(Error::domain(format!("dipole moment must be positive, got {moment}")));
        }
        if !depth.is_finite() || depth == 0.0 {
            return Err(Error::domain(
                "source must lie strictly above or below the interface (depth != 0)",
            ));
        }
        Ok(Self { depth, moment })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceProblem {
    pub upper: Medium,
    pub lower: Medium,
    pub ctx: RfContext,
    pub source: DipoleSource,
}

impl HalfSpaceProblem {
    pub fn new(upper: Medium, lower: Medium, ctx: RfContext, source: DipoleSource) -> Result<Self> {
        let identical = upper.eps_r == lower.eps_r && upper.sigma == lower.sigma;
        if !(lower.sigma > 0.0 || identical) {
            return Err(Error::domain(
                "lower half-space must be lossy unless both media are identical",
            ));
        }
        Ok(Self {
            upper,
            lower,
            ctx,
            source,
        })
    }

    /// Air over lossy `lower`, source at signed depth `source_depth`.
    pub fn air_over(lower: Medium, freq: f64, source_depth: f64) -> Result<Self> {
        Self::new(
            Medium::air(),
            lower,
            RfContext::new(freq)?,
            DipoleSource::new(source_depth, 1.0)?,
        )
    }

    /// The same source embedded in `medium` everywhere.
    pub fn homogeneous(medium: Medium, freq: f64, source_depth: f64) -> Result<Self> {
        Self::new(
            medium.clone(),
            medium,
            RfContext::new(freq)?,
            DipoleSource::new(source_depth, 1.0)?,
        )
    }

    pub fn with_source(&self, source: DipoleSource) -> Self {
        Self {
            source,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_tail_intervals: usize,
    /// Gauss–Legendre nodes per panel.
    pub segment_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_tail_intervals: 60,
            segment_points: 12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-2) {
            return Err(Error::domain(format!("rel_tol must lie in (0, 1e-2), got {}", self.rel_tol)));
        }
        if self.max_tail_intervals < 8 {
            return Err(Error::domain("max_tail_intervals must be at least 8"));
        }
        if self.segment_points < 2 {
            return Err(Error::domain("segment_points must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Kernel evaluations that landed on a branch point and were nudged off it
    /// with an infinitesimal loss.
    pub branch_grazing: usize,
    pub head_panels: usize,
    pub head_converged: bool,
    pub tail_intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub range: f64,
    pub depth: f64,
    #[serde(with = "complex_serde")]
    pub ez: Complex64,
    /// `20·log10(|Ez|/reference)`.
    pub magnitude_db: f64,
    /// V/m.
    pub reference: f64,
    pub diagnostics: Diagnostics,
}

impl FieldSample {
    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference = reference;
        self.magnitude_db = 20.0 * (self.ez.norm() / reference).log10();
        self
    }
}

mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// `u = sqrt(λ² − k²)` on the branch `Re u ≥ 0` (`Im u ≥ 0` when `Re u = 0`),
/// i.e. outgoing/decaying under `exp(+jωt)`. `k` must be the root of `k²`
/// with `Re k ≥ 0`; the factored form keeps precision near `λ = k`.
fn vertical_wavenumber(lambda: f64, k: Complex64) -> Complex64 {
    let u = ((lambda - k) * (lambda + k)).sqrt();
    if u.re < 0.0 || (u.re == 0.0 && u.im < 0.0) {
        -u
    } else {
        u
    }
}

fn wavenumber(eps: Complex64, k0: f64) -> Complex64 {
    let k = k0 * eps.sqrt();
    if k.re < 0.0 {
        -k
    } else {
        k
    }
}

/// Fractional loss used to step off an exact branch point.
const GRAZING_LOSS: f64 = 1e-12;

fn vertical_wavenumber_guarded(lambda: f64, k: Complex64, grazing: &Cell<usize>) -> Complex64 {
    let u = vertical_wavenumber(lambda, k);
    if u.norm() > 1e-13 * k.norm() {
        return u;
    }
    grazing.set(grazing.get() + 1);
    vertical_wavenumber(lambda, k * Complex64::new(1.0, -GRAZING_LOSS))
}

fn tm_reflection(u_s: Complex64, u_o: Complex64, eps_s: Complex64, eps_o: Complex64) -> Complex64 {
    (eps_o * u_s - eps_s * u_o) / (eps_o * u_s + eps_s * u_o)
}

/// Which half-space is which, seen from the source.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    eps_s: Complex64,
    eps_o: Complex64,
    k_s: Complex64,
    k_o: Complex64,
    /// Source distance from the interface.
    h: f64,
    amplitude: Complex64,
}

impl Geometry {
    fn new(p: &HalfSpaceProblem) -> Self {
        let (src, other) = if p.source.depth > 0.0 {
            (&p.upper, &p.lower)
        } else {
            (&p.lower, &p.upper)
        };
        let eps_s = complex_permittivity(src, &p.ctx);
        let eps_o = complex_permittivity(other, &p.ctx);
        let k0 = p.ctx.k0();
        Self {
            eps_s,
            eps_o,
            k_s: wavenumber(eps_s, k0),
            k_o: wavenumber(eps_o, k0),
            h: p.source.depth.abs(),
            amplitude: p.source.moment / (4.0 * PI * J * p.ctx.omega() * EPS0 * eps_s),
        }
    }

    fn same_side(&self, p: &HalfSpaceProblem, z: f64) -> bool {
        (z > 0.0) == (p.source.depth > 0.0)
    }
}

/// TM plane-wave reflection coefficient at the interface for a wave incident
/// from the source's half-space, as a function of real radial wavenumber.
pub fn reflection_coefficient_tm(k_rho: f64, problem: &HalfSpaceProblem) -> Result<Complex64> {
    if !(k_rho.is_finite() && k_rho >= 0.0) {
        return Err(Error::domain(format!("k_rho must be real and >= 0, got {k_rho}")));
    }
    let g = Geometry::new(problem);
    let grazing = Cell::new(0);
    let u_s = vertical_wavenumber_guarded(k_rho, g.k_s, &grazing);
    let u_o = vertical_wavenumber_guarded(k_rho, g.k_o, &grazing);
    Ok(tm_reflection(u_s, u_o, g.eps_s, g.eps_o))
}

/// `(∂²/∂z² + k²)(e^{-jkR}/R)` at separation `(ρ, Δz)`.
pub fn direct_ez_kernel(k: Complex64, rho: f64, dz: f64) -> Complex64 {
    let r = rho.hypot(dz);
    let g = (-J * k * r).exp() / r;
    let a = J * k + 1.0 / r;
    let c2 = (dz / r).powi(2);
    g * (k * k + (a * a + 1.0 / (r * r)) * c2 - a / r * (1.0 - c2))
}

/// Vertical field of a vertical dipole in an unbounded medium.
pub fn free_space_ez(
    medium: &Medium,
    ctx: &RfContext,
    moment: f64,
    rho: f64,
    dz: f64,
) -> Complex64 {
    let eps = complex_permittivity(medium, ctx);
    let amplitude = moment / (4.0 * PI * J * ctx.omega() * EPS0 * eps);
    amplitude * direct_ez_kernel(wavenumber(eps, ctx.k0()), rho, dz)
}

/// Sommerfeld integral `∫₀^∞ J0(λρ) f(λ) dλ` for a spectral function whose
/// envelope decays at least like `e^{-ζλ}` beyond the head.
pub(crate) struct SommerfeldIntegral {
    pub rho: f64,
    /// Exponential decay rate of the spectral function.
    pub zeta: f64,
    /// Head panel boundaries in `λ`, starting at 0.
    pub head_breaks: Vec<f64>,
}

pub(crate) struct IntegralValue {
    pub value: Complex64,
    pub head_panels: usize,
    pub head_converged: bool,
    pub tail_intervals: usize,
}

impl SommerfeldIntegral {
    pub fn evaluate<F: Fn(f64) -> Complex64>(
        &self,
        spectral: &F,
        cfg: &QuadratureConfig,
    ) -> Result<IntegralValue> {
        let rule = GaussLegendre::new(cfg.segment_points);
        let rho = self.rho;
        let integrand = |lambda: f64| {
            let b = if rho > 0.0 { bessel::j0(lambda * rho) } else { 1.0 };
            spectral(lambda) * b
        };

        let breaks = &self.head_breaks;
        let pieces = breaks.len() - 1;
        let mapped = |t: f64| {
            let i = (t.floor() as usize).min(pieces - 1);
            let s = t - i as f64;
            let (a, b) = (breaks[i], breaks[i + 1]);
            let lambda = a + (b - a) * s * s * (3.0 - 2.0 * s);
            let jac = 6.0 * (b - a) * s * (1.0 - s);
            if jac == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                integrand(lambda) * jac
            }
        };
        let t_breaks: Vec<f64> = (0..=pieces).map(|i| i as f64).collect();
        let head = adaptive_panels(&rule, &mapped, &t_breaks, cfg.rel_tol * 0.1, 0.0, 4000);

        let tail_start = *breaks.last().expect("head has panels");
        let scale = |v: Complex64| (head.value + v).norm().max(f64::MIN_POSITIVE);
        let mut wa = WeightedAverages::new(12);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut previous = None;
        let mut x0 = tail_start;
        let first_zero = if rho > 0.0 {
            bessel::first_zero_above(tail_start * rho * (1.0 + 1e-14))
        } else {
            0
        };
        let step = if rho > 0.0 { 0.0 } else { 1.0 / self.zeta.max(1e-3) };
        for n in 0..cfg.max_tail_intervals {
            let x1 = if rho > 0.0 {
                bessel::j0_zero(first_zero + n) / rho
            } else {
                x0 + step
            };
            let piece = adaptive(&rule, &integrand, x0, x1, cfg.rel_tol * 0.1, 0.0, 64);
            sum += piece.value;
            wa.push(sum);
            x0 = x1;
            let est = wa.estimate();
            if let Some(prev) = previous {
                let diff: Complex64 = est - prev;
                if n >= 3 && diff.norm() <= cfg.rel_tol * scale(est) {
                    return Ok(IntegralValue {
                        value: head.value + est,
                        head_panels: head.panels,
                        head_converged: head.converged,
                        tail_intervals: n + 1,
                    });
                }
            }
            previous = Some(est);
        }
        let last = wa.estimate();
        Err(Error::Convergence {
            last: head.value + last,
            previous: head.value + previous.unwrap_or(last),
        })
    }
}

/// Vertical electric field at horizontal distance `range` and signed height
/// `depth` (negative below the interface).
pub fn field_at(
    problem: &HalfSpaceProblem,
    range: f64,
    depth: f64,
    cfg: &QuadratureConfig,
) -> Result<FieldSample> {
    cfg.validate()?;
    if !(range.is_finite() && range >= 0.0) || !depth.is_finite() {
        return Err(Error::domain(format!("invalid observation point ({range}, {depth})")));
    }
    if range == 0.0 && depth == problem.source.depth {
        return Err(Error::domain("observation point coincides with the source"));
    }
    let g = Geometry::new(problem);
    let same = g.same_side(problem, depth);
    let d = depth.abs();
    let zeta = g.h + d;
    let k0 = problem.ctx.k0();

    let grazing = Cell::new(0);
    let spectral = |lambda: f64| {
        let u_s = vertical_wavenumber_guarded(lambda, g.k_s, &grazing);
        let u_o = vertical_wavenumber_guarded(lambda, g.k_o, &grazing);
        let r = tm_reflection(u_s, u_o, g.eps_s, g.eps_o);
        let l3 = lambda * lambda * lambda;
        if same {
            l3 / u_s * r * (-u_s * zeta).exp()
        } else {
            let t = g.eps_s * (1.0 + r) / g.eps_o;
            l3 / u_s * t * (-u_s * g.h - u_o * d).exp()
        }
    };

    // Features of the other medium only matter while e^{-ζλ} is still alive.
    let reach = 2.0 * g.k_s.norm() + 40.0 / zeta;
    let mut head_end = (2.0 * g.k_s.norm()).max((2.0 * g.k_o.norm()).min(reach)).max(2.0 * k0);
    if range > 0.0 {
        head_end = bessel::j0_zero(bessel::first_zero_above(head_end * range)) / range;
    }
    let mut head_breaks = vec![0.0];
    let mut branch: Vec<f64> = [g.k_s.re, g.k_o.re]
        .into_iter()
        .filter(|&b| b > 0.0 && b < head_end)
        .collect();
    branch.sort_by(f64::total_cmp);
    branch.dedup();
    head_breaks.extend(branch);
    head_breaks.push(head_end);

    let integral = SommerfeldIntegral {
        rho: range,
        zeta,
        head_breaks,
    }
    .evaluate(&spectral, cfg)?;

    let mut ez = integral.value;
    if same {
        ez += direct_ez_kernel(g.k_s, range, depth - problem.source.depth);
    }
    ez *= g.amplitude;
    Ok(FieldSample {
        range,
        depth,
        ez,
        magnitude_db: 20.0 * ez.norm().log10(),
        reference: 1.0,
        diagnostics: Diagnostics {
            branch_grazing: grazing.get(),
            head_panels: integral.head_panels,
            head_converged: integral.head_converged,
            tail_intervals: integral.tail_intervals,
        },
    })
}

/// Field magnitudes on a (range × depth) grid, normalized to the grid maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub ranges: Vec<f64>,
    pub depths: Vec<f64>,
    /// Row-major, range outer and depth inner. `None` marks a failed point.
    pub magnitude_db: Vec<Option<f64>>,
    /// The failures behind the `None` cells, in the same order.
    pub failures: Vec<(usize, Error)>,
}

impl FieldMap {
    pub fn get(&self, range_index: usize, depth_index: usize) -> Option<f64> {
        self.magnitude_db[range_index * self.depths.len() + depth_index]
    }

    /// `(range, depth, dB)` rows in output order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        self.ranges.iter().enumerate().flat_map(move |(i, &r)| {
            self.depths
                .iter()
                .enumerate()
                .map(move |(j, &d)| (r, d, self.get(i, j)))
        })
    }
}

fn check_grid(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::domain(format!("{name} grid is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(format!("{name} grid must be finite and strictly increasing")));
    }
    Ok(())
}

pub fn field_map(
    problem: &HalfSpaceProblem,
    ranges: &[f64],
    depths: &[f64],
    cfg: &QuadratureConfig,
) -> Result<FieldMap> {
    check_grid("range", ranges)?;
    check_grid("depth", depths)?;
    cfg.validate()?;
    let n = ranges.len() * depths.len();
    let results: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / depths.len(), idx % depths.len());
            field_at(problem, ranges[i], depths[j], cfg).map(|s| s.ez.norm())
        })
        .collect();
    let peak = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .copied()
        .filter(|m| m.is_finite() && *m > 0.0)
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.max(m))));
    let Some(peak) = peak else {
        return Err(Error::MapFailed);
    };
    let mut failures = Vec::new();
    let magnitude_db = results
        .into_iter()
        .enumerate()
        .map(|(idx, r)| match r {
            Ok(m) if m.is_finite() && m > 0.0 => Some(20.0 * (m / peak).log10()),
            Ok(m) => {
                failures.push((idx, Error::domain(format!("non-finite field magnitude {m}"))));
                None
            }
            Err(e) => {
                failures.push((idx, e));
                None
            }
        })
        .collect();
    Ok(FieldMap {
        ranges: ranges.to_vec(),
        depths: depths.to_vec(),
        magnitude_db,
        failures,
    })
}
