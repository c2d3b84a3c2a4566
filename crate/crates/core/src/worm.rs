//! Critical-value curves ("worms") of trinomial families
//! `f(z; x) = c₋₁(x) z⁻¹ + c₀(x) + c₁(x) z`, a raster test for whether
//! those curves enclose the origin, and the residue evaluation of the moment
//! generating function `F(t) = Σ_{n≥1} t^{n−1} ∫₀¹ ∫_𝕋 f^n`.
//!
//! Everything here is floating point except the series coefficients, which
//! come from the exact admissible moments.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::admissible::{Admissible, AdmissibleError, XPoly};
use crate::numeric::GaussRat;
use crate::quadrature::gauss_legendre_on;

/// Coefficient magnitude below which a sample counts as degenerate.
pub const DEGENERATE_EPS: f64 = 1e-12;
/// Roots closer than this to the unit circle, or to each other, make the
/// residue evaluation ambiguous.
pub const CONTOUR_EPS: f64 = 1e-8;
/// Samples closer than this to the origin make enclosure inconclusive.
pub const ORIGIN_EPS: f64 = 1e-9;
/// Raster sizes (cells along the longer side) used by [`encloses_origin`].
pub const ENCLOSURE_RESOLUTIONS: [usize; 2] = [256, 512];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WormError {
    #[error("trinomial coefficients must be univariate polynomials")]
    NotUnivariate,
    #[error("c₁ and c₋₁ are both identically zero")]
    NotATrinomial,
    #[error("admissible input is not a trinomial in one z and one x: {0}")]
    NotTrinomialShape(String),
    #[error("at least two samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("empty trace")]
    EmptyTrace,
    #[error("contour-ambiguous at x = {x}: {reason}")]
    ContourAmbiguous { x: f64, reason: String },
    #[error(transparent)]
    Admissible(#[from] AdmissibleError),
}

/// `c₋₁(x) z⁻¹ + c₀(x) + c₁(x) z` with univariate polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trinomial {
    pub c_minus: XPoly,
    pub c_zero: XPoly,
    pub c_plus: XPoly,
}

impl Trinomial {
    pub fn new(c_minus: XPoly, c_zero: XPoly, c_plus: XPoly) -> Result<Self, WormError> {
        if [&c_minus, &c_zero, &c_plus].iter().any(|p| p.arity() != 1) {
            return Err(WormError::NotUnivariate);
        }
        if c_minus.is_zero() && c_plus.is_zero() {
            return Err(WormError::NotATrinomial);
        }
        Ok(Trinomial { c_minus, c_zero, c_plus })
    }

    pub fn constant(c_minus: GaussRat, c_zero: GaussRat, c_plus: GaussRat) -> Result<Self, WormError> {
        Trinomial::new(XPoly::constant(c_minus, 1), XPoly::constant(c_zero, 1), XPoly::constant(c_plus, 1))
    }

    /// `c₁ = c₋₁ = u + i(1 − u²)`, `c₀ = u − i(1 − u²)` with `u = 2x − 1`.
    pub fn worm_family() -> Self {
        let outer =
            XPoly::univariate([GaussRat::from_ints(-1, 0), GaussRat::from_ints(2, 4), GaussRat::from_ints(0, -4)]);
        let middle =
            XPoly::univariate([GaussRat::from_ints(-1, 0), GaussRat::from_ints(2, -4), GaussRat::from_ints(0, 4)]);
        Trinomial::new(outer.clone(), middle, outer).expect("univariate, nonzero")
    }

    /// Reads a `k = 1, l = 1` admissible function with exponents in `{−1, 0, 1}`.
    pub fn from_admissible(h: &Admissible) -> Result<Self, WormError> {
        if h.z_arity() != 1 || h.x_arity() != 1 {
            return Err(WormError::NotTrinomialShape(format!("arities (k, l) = ({}, {})", h.z_arity(), h.x_arity())));
        }
        let mut coeffs = [XPoly::zero(1), XPoly::zero(1), XPoly::zero(1)];
        for (m, c) in h.terms() {
            match m[0] {
                -1 => coeffs[0] = c.clone(),
                0 => coeffs[1] = c.clone(),
                1 => coeffs[2] = c.clone(),
                e => return Err(WormError::NotTrinomialShape(format!("z exponent {e}"))),
            }
        }
        let [c_minus, c_zero, c_plus] = coeffs;
        Trinomial::new(c_minus, c_zero, c_plus)
    }

    pub fn to_admissible(&self) -> Admissible {
        Admissible::from_terms(
            1,
            1,
            [(vec![-1], self.c_minus.clone()), (vec![0], self.c_zero.clone()), (vec![1], self.c_plus.clone())],
        )
        .expect("arities fixed at (1, 1)")
    }

    /// `(c₋₁(x), c₀(x), c₁(x))`.
    pub fn coefficients_at(&self, x: f64) -> (Complex64, Complex64, Complex64) {
        (self.c_minus.eval(&[x]), self.c_zero.eval(&[x]), self.c_plus.eval(&[x]))
    }

    pub fn eval(&self, z: Complex64, x: f64) -> Complex64 {
        let (cm, c0, cp) = self.coefficients_at(x);
        cm / z + c0 + cp * z
    }

    /// `∂f/∂z`.
    pub fn derivative(&self, z: Complex64, x: f64) -> Complex64 {
        let (cm, _, cp) = self.coefficients_at(x);
        cp - cm / (z * z)
    }
}

/// Both critical values at one `x`, with the critical points producing them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValues {
    pub x: f64,
    pub tau_plus: Complex64,
    pub tau_minus: Complex64,
    pub z_plus: Complex64,
    pub z_minus: Complex64,
}

impl CriticalValues {
    /// Largest of `|f(z±) − τ±|` and `|f'(z±)|`.
    pub fn max_residual(&self, tri: &Trinomial) -> f64 {
        let value = (tri.eval(self.z_plus, self.x) - self.tau_plus)
            .norm()
            .max((tri.eval(self.z_minus, self.x) - self.tau_minus).norm());
        let slope = tri.derivative(self.z_plus, self.x).norm().max(tri.derivative(self.z_minus, self.x).norm());
        value.max(slope)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalSample {
    Regular(CriticalValues),
    /// `c₁(x)` or `c₋₁(x)` vanishes, so `f(·; x)` has no critical point.
    Degenerate {
        x: f64,
        coefficient: &'static str,
    },
}

/// `τ± = c₀ ± 2√(c₋₁ c₁)` at `x`, using the principal square root.
pub fn critical_values(tri: &Trinomial, x: f64) -> CriticalSample {
    critical_values_near(tri, x, None)
}

/// As [`critical_values`], choosing the root sign so that `τ₊` lands as
/// close as possible to `previous_plus`.
pub fn critical_values_near(tri: &Trinomial, x: f64, previous_plus: Option<Complex64>) -> CriticalSample {
    let (cm, c0, cp) = tri.coefficients_at(x);
    if cp.norm() < DEGENERATE_EPS {
        return CriticalSample::Degenerate { x, coefficient: "c_plus" };
    }
    if cm.norm() < DEGENERATE_EPS {
        return CriticalSample::Degenerate { x, coefficient: "c_minus" };
    }
    let mut s = (cm * cp).sqrt();
    if let Some(prev) = previous_plus {
        if (c0 - 2.0 * s - prev).norm() < (c0 + 2.0 * s - prev).norm() {
            s = -s;
        }
    }
    // c₁ z² = c₋₁ at the critical points, and there f = c₀ + 2 c₁ z.
    let z_plus = s / cp;
    CriticalSample::Regular(CriticalValues {
        x,
        tau_plus: c0 + 2.0 * s,
        tau_minus: c0 - 2.0 * s,
        z_plus,
        z_minus: -z_plus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WormSample {
    pub x: f64,
    pub tau_plus: Complex64,
    pub tau_minus: Complex64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WormTrace {
    pub samples: Vec<WormSample>,
    pub branch_continuous: bool,
    /// Per branch (`τ₊`, `τ₋`): largest step between consecutive samples.
    pub max_jump: [f64; 2],
    /// Per branch: the jump threshold used for `branch_continuous`.
    pub jump_threshold: [f64; 2],
    pub degenerate_samples: usize,
}

impl WormTrace {
    /// A single closed or open polyline posing as both branches.
    pub fn synthetic(points: &[Complex64]) -> Self {
        let n = points.len();
        let samples = points
            .iter()
            .enumerate()
            .map(|(i, &p)| WormSample {
                x: if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 },
                tau_plus: p,
                tau_minus: p,
                degenerate: false,
            })
            .collect();
        WormTrace::assemble(samples)
    }

    fn assemble(samples: Vec<WormSample>) -> Self {
        let n = samples.len();
        let degenerate_samples = samples.iter().filter(|s| s.degenerate).count();
        let mut max_jump = [0.0f64; 2];
        let mut length = [0.0f64; 2];
        for w in samples.windows(2) {
            let d = [(w[1].tau_plus - w[0].tau_plus).norm(), (w[1].tau_minus - w[0].tau_minus).norm()];
            for b in 0..2 {
                max_jump[b] = max_jump[b].max(d[b]);
                length[b] += d[b];
            }
        }
        let jump_threshold = length.map(|l| 10.0 * l / n.max(1) as f64);
        let continuous = (0..2).all(|b| max_jump[b] == 0.0 || max_jump[b] < jump_threshold[b]);
        WormTrace {
            samples,
            branch_continuous: continuous && degenerate_samples == 0,
            max_jump,
            jump_threshold,
            degenerate_samples,
        }
    }

    pub fn branch(&self, plus: bool) -> Vec<Complex64> {
        self.samples.iter().map(|s| if plus { s.tau_plus } else { s.tau_minus }).collect()
    }

    /// CSV with header `x,re_tau_plus,im_tau_plus,re_tau_minus,im_tau_minus`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re_tau_plus,im_tau_plus,re_tau_minus,im_tau_minus\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.x, s.tau_plus.re, s.tau_plus.im, s.tau_minus.re, s.tau_minus.im
            ));
        }
        out
    }

    /// Plot-ready `{"plus": [[re, im], …], "minus": […]}`.
    pub fn polyline_json(&self) -> serde_json::Value {
        let pts = |plus: bool| -> Vec<[f64; 2]> { self.branch(plus).iter().map(|z| [z.re, z.im]).collect() };
        serde_json::json!({ "plus": pts(true), "minus": pts(false) })
    }
}

/// Samples both critical values on a uniform grid of `[0, 1]`, carrying the
/// square-root branch along so each curve stays continuous.
pub fn trace_worms(tri: &Trinomial, n_samples: usize) -> Result<WormTrace, WormError> {
    if n_samples < 2 {
        return Err(WormError::TooFewSamples(n_samples));
    }
    let mut samples = Vec::with_capacity(n_samples);
    let mut previous = None;
    for i in 0..n_samples {
        let x = i as f64 / (n_samples - 1) as f64;
        match critical_values_near(tri, x, previous) {
            CriticalSample::Regular(cv) => {
                previous = Some(cv.tau_plus);
                samples.push(WormSample { x, tau_plus: cv.tau_plus, tau_minus: cv.tau_minus, degenerate: false });
            }
            CriticalSample::Degenerate { .. } => {
                let (_, c0, _) = tri.coefficients_at(x);
                samples.push(WormSample { x, tau_plus: c0, tau_minus: c0, degenerate: true });
            }
        }
    }
    Ok(WormTrace::assemble(samples))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Enclosed,
    NotEnclosed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RasterResult {
    pub cells_x: usize,
    pub cells_y: usize,
    /// `None` when the origin's own cell is crossed by the curves.
    pub enclosed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    pub verdict: Verdict,
    pub rasters: Vec<RasterResult>,
    /// Cell-centre path from the origin to the raster border, when one exists
    /// at the finest resolution.
    pub escape_path: Option<Vec<[f64; 2]>>,
    pub min_distance_to_origin: f64,
    pub notes: Vec<String>,
}

/// Decides whether the origin lies in a bounded complementary component of
/// the union of both branches, by flood fill from the raster border at each
/// of [`ENCLOSURE_RESOLUTIONS`].
pub fn encloses_origin(trace: &WormTrace) -> Result<Enclosure, WormError> {
    if trace.samples.is_empty() {
        return Err(WormError::EmptyTrace);
    }
    let polylines = vec![trace.branch(true), trace.branch(false)];
    let min_distance = polylines
        .iter()
        .flat_map(|line| {
            if line.len() == 1 {
                vec![line[0].norm()]
            } else {
                line.windows(2).map(|w| segment_distance(w[0], w[1])).collect()
            }
        })
        .fold(f64::INFINITY, f64::min);

    let mut notes = Vec::new();
    if !trace.branch_continuous {
        notes.push("trace is not branch-continuous".to_string());
    }
    let min_sample =
        trace.samples.iter().flat_map(|s| [s.tau_plus.norm(), s.tau_minus.norm()]).fold(f64::INFINITY, f64::min);
    if min_sample < ORIGIN_EPS {
        notes.push(format!("a sample lies within {ORIGIN_EPS:e} of the origin"));
    }

    let mut rasters = Vec::new();
    let mut escape_path = None;
    for &res in &ENCLOSURE_RESOLUTIONS {
        let (raster, path) = flood_fill(&polylines, res);
        if path.is_some() {
            escape_path = path;
        }
        rasters.push(raster);
    }
    let outcomes: Vec<Option<bool>> = rasters.iter().map(|r| r.enclosed).collect();
    let verdict = if !notes.is_empty() {
        Verdict::Inconclusive
    } else if outcomes.iter().any(Option::is_none) {
        notes.push("the curves cross the origin's raster cell".to_string());
        Verdict::Inconclusive
    } else if outcomes.windows(2).any(|w| w[0] != w[1]) {
        notes.push("raster resolutions disagree".to_string());
        Verdict::Inconclusive
    } else if outcomes[0] == Some(true) {
        Verdict::Enclosed
    } else {
        Verdict::NotEnclosed
    };
    if verdict == Verdict::Enclosed {
        escape_path = None;
    }
    Ok(Enclosure { verdict, rasters, escape_path, min_distance_to_origin: min_distance, notes })
}

fn segment_distance(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * t).norm()
}

fn flood_fill(polylines: &[Vec<Complex64>], resolution: usize) -> (RasterResult, Option<Vec<[f64; 2]>>) {
    let mut lo = Complex64::new(0.0, 0.0);
    let mut hi = Complex64::new(0.0, 0.0);
    for p in polylines.iter().flatten() {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-6);
    let cell = span / resolution as f64;
    // two free cells of padding on every side
    let x0 = lo.re - 2.0 * cell;
    let y0 = lo.im - 2.0 * cell;
    let nx = ((hi.re - lo.re) / cell).ceil() as usize + 5;
    let ny = ((hi.im - lo.im) / cell).ceil() as usize + 5;
    let index = |p: Complex64| -> (usize, usize) {
        let i = ((p.re - x0) / cell).floor().clamp(0.0, (nx - 1) as f64) as usize;
        let j = ((p.im - y0) / cell).floor().clamp(0.0, (ny - 1) as f64) as usize;
        (i, j)
    };

    let mut blocked = vec![false; nx * ny];
    for line in polylines {
        for p in line {
            let (i, j) = index(*p);
            blocked[j * nx + i] = true;
        }
        for w in line.windows(2) {
            let steps = (((w[1] - w[0]).norm() / cell) * 4.0).ceil() as usize;
            for s in 0..=steps {
                let t = if steps == 0 { 0.0 } else { s as f64 / steps as f64 };
                let (i, j) = index(w[0] + (w[1] - w[0]) * t);
                blocked[j * nx + i] = true;
            }
        }
    }

    let (oi, oj) = index(Complex64::new(0.0, 0.0));
    let raster = |enclosed| RasterResult { cells_x: nx, cells_y: ny, enclosed };
    if blocked[oj * nx + oi] {
        return (raster(None), None);
    }

    // BFS from the origin's cell; reaching the border means escape.
    let mut parent = vec![usize::MAX; nx * ny];
    let start = oj * nx + oi;
    parent[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        let (i, j) = (c % nx, c / nx);
        if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
            let mut path = Vec::new();
            let mut cur = c;
            loop {
                let (pi, pj) = (cur % nx, cur / nx);
                path.push([x0 + (pi as f64 + 0.5) * cell, y0 + (pj as f64 + 0.5) * cell]);
                if cur == start {
                    break;
                }
                cur = parent[cur];
            }
            path.reverse();
            return (raster(Some(false)), Some(path));
        }
        let neighbours = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
        for (a, b) in neighbours {
            if a >= nx || b >= ny {
                continue;
            }
            let n = b * nx + a;
            if !blocked[n] && parent[n] == usize::MAX {
                parent[n] = c;
                queue.push_back(n);
            }
        }
    }
    (raster(Some(true)), None)
}

/// Exact `[∫∫ f, ∫∫ f², …, ∫∫ f^pmax]` for `f` with one `z` and one `x`.
pub fn truncated_generating_function(f: &Admissible, pmax: u32) -> Result<Vec<GaussRat>, WormError> {
    if f.z_arity() != 1 || f.x_arity() != 1 {
        return Err(WormError::NotTrinomialShape(format!(
            "generating function needs (k, l) = (1, 1), got ({}, {})",
            f.z_arity(),
            f.x_arity()
        )));
    }
    let mut moments = f.power_moments(pmax);
    moments.remove(0);
    Ok(moments)
}

/// `Σ_n t^{n−1} c_n` for coefficients `[c_1, c_2, …]`.
pub fn evaluate_series(coefficients: &[GaussRat], t: Complex64) -> Complex64 {
    coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c.to_complex())
}

/// `F(t) = −1/t − (1/t²) ∫₀¹ Σ_j 1/(f'(ζ_j) ζ_j) dx`, summing over the
/// solutions `ζ_j` of `f(ζ; x) = 1/t` inside the unit disk.
///
/// The roots are those of `Q(ζ) = c₁ζ² + (c₀ − 1/t)ζ + c₋₁`, and
/// `f'(ζ) ζ = Q'(ζ)` at each of them. Using `Q'` keeps the formula valid where
/// `c₋₁(x) = 0`, when `ζ = 0` becomes a root and accounts for the pole of
/// `1/(z(1 − t f))` at the origin.
pub fn residue_formula_eval(tri: &Trinomial, t: Complex64, x_order: usize) -> Result<Complex64, WormError> {
    let tau = 1.0 / t;
    let (nodes, weights) = gauss_legendre_on(x_order.max(1), 0.0, 1.0);
    let mut integral = Complex64::new(0.0, 0.0);
    for (&x, &w) in nodes.iter().zip(&weights) {
        let (cm, c0, cp) = tri.coefficients_at(x);
        let b = c0 - tau;
        let roots: Vec<Complex64> = if cp.norm() < DEGENERATE_EPS {
            if b.norm() < DEGENERATE_EPS {
                Vec::new()
            } else {
                vec![-cm / b]
            }
        } else {
            let disc = (b * b - 4.0 * cp * cm).sqrt();
            // pick the sign that avoids cancellation, then use Vieta
            let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
            let r1 = q / cp;
            let r2 = if q.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { cm / q };
            if (r1 - r2).norm() < CONTOUR_EPS {
                return Err(WormError::ContourAmbiguous { x, reason: "1/t is (nearly) a critical value".to_string() });
            }
            vec![r1, r2]
        };
        let mut inner = Complex64::new(0.0, 0.0);
        for z in roots {
            if (z.norm() - 1.0).abs() < CONTOUR_EPS {
                return Err(WormError::ContourAmbiguous { x, reason: format!("root {z} on the unit circle") });
            }
            if z.norm() < 1.0 {
                let slope = 2.0 * cp * z + b;
                inner += 1.0 / slope;
            }
        }
        integral += inner * w;
    }
    Ok(-1.0 / t - integral / (t * t))
}
