//! Panel quadrature and partition extrapolation for Sommerfeld integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(mid + half * x) * *w;
        }
        s * half
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    halves: (Complex64, Complex64),
    error: f64,
    order: usize,
}

impl Panel {
    fn value(&self) -> Complex64 {
        self.halves.0 + self.halves.1
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest error first; creation order keeps the pop sequence deterministic.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Globally adaptive bisection over `[a, b]`.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    rule: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Estimate {
    adaptive_panels(rule, f, &[a, b], rel_tol, abs_tol, max_panels)
}

/// Globally adaptive bisection starting from the panels delimited by
/// `breaks`. A panel's error is the difference between the rule on the whole
/// panel and on its two halves; the panel with the largest error is split
/// until the summed error meets `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive_panels<F: Fn(f64) -> Complex64>(
    rule: &GaussLegendre,
    f: &F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Estimate {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut order = 0;
    let mut panel = |a: f64, b: f64, coarse: Complex64| {
        let m = 0.5 * (a + b);
        let halves = (rule.integrate(f, a, m), rule.integrate(f, m, b));
        order += 1;
        Panel {
            a,
            b,
            error: (halves.0 + halves.1 - coarse).norm(),
            halves,
            order,
        }
    };
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let p = panel(w[0], w[1], rule.integrate(f, w[0], w[1]));
        total += p.value();
        err += p.error;
        heap.push(p);
    }
    let mut panels = heap.len();
    while err > abs_tol.max(rel_tol * total.norm()) && panels < max_panels {
        let worst = heap.pop().expect("heap never empties");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            break;
        }
        total -= worst.value();
        err -= worst.error;
        let l = panel(worst.a, m, worst.halves.0);
        let r = panel(m, worst.b, worst.halves.1);
        total += l.value() + r.value();
        err += l.error + r.error;
        heap.push(l);
        heap.push(r);
        panels += 1;
    }
    // Sum in creation order so the result does not depend on heap layout and
    // running-sum cancellation is shed.
    let mut done: Vec<&Panel> = heap.iter().collect();
    done.sort_by_key(|p| p.order);
    let value = done.iter().fold(Complex64::new(0.0, 0.0), |s, p| s + p.value());
    let error: f64 = done.iter().map(|p| p.error).sum();
    Estimate {
        value,
        error,
        panels,
        converged: error <= abs_tol.max(rel_tol * value.norm()),
    }
}

/// Iterated weighted averages of a sequence of partial sums.
///
/// Each level replaces neighbouring estimates `S_n`, `S_{n+1}` by
/// `(ω_{n+1} S_n − ω_n S_{n+1}) / (ω_{n+1} − ω_n)`, where `ω_n` is the last
/// increment of that level. The transform is exact for remainders
/// proportional to the last increment, which covers alternating and
/// geometric tails.
#[derive(Debug, Default, Clone)]
pub struct WeightedAverages {
    sums: Vec<Complex64>,
    max_levels: usize,
}

impl WeightedAverages {
    pub fn new(max_levels: usize) -> Self {
        Self {
            sums: Vec::new(),
            max_levels,
        }
    }

    pub fn push(&mut self, partial_sum: Complex64) {
        self.sums.push(partial_sum);
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// Best extrapolated limit from the sums pushed so far.
    pub fn estimate(&self) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let mut row = self.sums.clone();
        // The sum before the first partition is zero, so level 0 has an
        // increment for every entry; deeper levels lose their first one.
        let mut first_inc = true;
        let mut best = *row.last().unwrap_or(&zero);
        for _ in 0..self.max_levels {
            let inc: Vec<Option<Complex64>> = (0..row.len())
                .map(|i| match i {
                    0 if first_inc => Some(row[0]),
                    0 => None,
                    _ => Some(row[i] - row[i - 1]),
                })
                .collect();
            let mut next = Vec::with_capacity(row.len());
            for i in 0..row.len().saturating_sub(1) {
                let (Some(w0), Some(w1)) = (inc[i], inc[i + 1]) else {
                    continue;
                };
                let denom = w1 - w0;
                let v = (w1 * row[i] - w0 * row[i + 1]) / denom;
                next.push(if denom.norm() > 0.0 && v.re.is_finite() && v.im.is_finite() {
                    v
                } else {
                    row[i + 1]
                });
            }
            if next.is_empty() {
                break;
            }
            best = *next.last().expect("checked non-empty");
            row = next;
            first_inc = false;
        }
        best
    }
}
