//! One-dimensional quadrature grids.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Abscissae and positive weights of a quadrature rule on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: (f64, f64),
}

impl Grid1D {
    /// Builds a grid from raw parts, checking the ordering and positivity
    /// invariants.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        let (a, b) = domain;
        if !(a < b) {
            return Err(Error::invalid(format!("empty interval [{a}, {b}]")));
        }
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::invalid("grid needs matching, non-empty nodes and weights"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("grid nodes must be strictly increasing"));
        }
        if nodes[0] < a || nodes[nodes.len() - 1] > b {
            return Err(Error::invalid("grid nodes must lie inside the domain"));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::invalid("grid weights must be positive"));
        }
        Ok(Grid1D { nodes, weights, domain })
    }

    /// `n`-point Gauss-Legendre rule on `[a, b]`, exact through degree `2n - 1`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("Gauss-Legendre rule needs at least one node"));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid(format!("invalid interval [{a}, {b}]")));
        }
        let (x, w) = legendre_rule(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = x.iter().map(|&t| mid + half * t).collect();
        let weights = w.iter().map(|&wt| half * wt).collect();
        Grid1D::new(nodes, weights, (a, b))
    }

    /// Gauss-Legendre rule with `per_panel` nodes on each interval between
    /// consecutive `breaks`.
    pub fn composite_gauss_legendre(breaks: &[f64], per_panel: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::invalid("composite rule needs at least two break points"));
        }
        if per_panel == 0 {
            return Err(Error::invalid("composite rule needs at least one node per panel"));
        }
        let (x, w) = legendre_rule(per_panel);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !(a < b) {
                return Err(Error::invalid("break points must be strictly increasing"));
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            nodes.extend(x.iter().map(|&t| mid + half * t));
            weights.extend(w.iter().map(|&wt| half * wt));
        }
        Grid1D::new(nodes, weights, (breaks[0], breaks[breaks.len() - 1]))
    }

    /// Radial grid on `[0, r_max]`: one panel on `[0, r_inner]` followed by
    /// `panels` geometrically growing panels out to `r_max`.
    pub fn geometric_radial(r_inner: f64, r_max: f64, panels: usize, per_panel: usize) -> Result<Self> {
        if !(r_inner > 0.0) || !(r_max > r_inner) || panels == 0 {
            return Err(Error::invalid(format!(
                "bad radial grid: r_inner={r_inner}, r_max={r_max}, panels={panels}"
            )));
        }
        let ratio = (r_max / r_inner).powf(1.0 / panels as f64);
        let mut breaks = Vec::with_capacity(panels + 2);
        breaks.push(0.0);
        breaks.push(r_inner);
        for i in 1..panels {
            breaks.push(r_inner * ratio.powi(i as i32));
        }
        breaks.push(r_max);
        Grid1D::composite_gauss_legendre(&breaks, per_panel)
    }

    /// Interior points `r_i = i h`, `i = 1..=n`, of a uniform grid on
    /// `[0, r_max]` with `h = r_max / (n + 1)`; the weights are the trapezoid
    /// weights for functions vanishing at both ends.
    pub fn uniform_interior(r_max: f64, n: usize) -> Result<Self> {
        if n == 0 || !(r_max > 0.0) {
            return Err(Error::invalid("uniform grid needs n >= 1 and r_max > 0"));
        }
        let h = r_max / (n + 1) as f64;
        let nodes = (1..=n).map(|i| i as f64 * h).collect();
        Grid1D::new(nodes, vec![h; n], (0.0, r_max))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weighted sum of samples taken at the grid nodes.
    pub fn integrate_samples(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// Nodes and weights of the Gauss-Legendre rule on `[-1, 1]`, ascending.
fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
