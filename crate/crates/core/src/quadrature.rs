//! Floating-point integration oracles.
//!
//! Two independent numerical routes back the exact moment code:
//!
//! * admissible functions are integrated on a product of uniform torus
//!   grids and Gauss–Legendre rules on `[0,1]`. With enough torus nodes the
//!   trapezoid rule is exact for Laurent monomials, and with enough Legendre
//!   nodes the cube rule is exact for the polynomial coefficients, so the
//!   only error left is rounding;
//! * SU(2) functions are integrated in Euler angles `g = k(φ) a(θ) k(ψ)`
//!   with the `sin θ` density.
//!
//! The torus/cube route runs in double-double arithmetic, since moments that
//! vanish exactly are sums of terms many orders of magnitude larger.
//!
//! Node sums are accumulated in fixed-size blocks with pairwise summation, so
//! results do not depend on the number of worker threads.

use std::f64::consts::PI;

use std::ops::Add;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissible::Admissible;
use crate::numeric::{BigRat, GaussRat};
use crate::su2::SU2Function;
use twofloat::TwoFloat;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_EULER_NODES: (usize, usize, usize) = (32, 96, 64);

const BLOCK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("under-resolved {direction}: {given} nodes given, at least {required} required")]
    UnderResolved { direction: &'static str, given: usize, required: usize },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureSpec {
    /// Uniform nodes per torus variable; `None` picks the smallest exact count.
    pub torus_nodes: Option<usize>,
    /// Gauss–Legendre order per cube variable; `None` picks the smallest exact order.
    pub cube_order: Option<usize>,
    /// `(n_φ, n_θ, n_ψ)`.
    pub euler_nodes: (usize, usize, usize),
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            torus_nodes: None,
            cube_order: None,
            euler_nodes: DEFAULT_EULER_NODES,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if self.torus_nodes == Some(0) || self.cube_order == Some(0) {
            return Err(QuadratureError::InvalidSpec("node counts must be at least 1".into()));
        }
        let (a, b, c) = self.euler_nodes;
        if a == 0 || b == 0 || c == 0 {
            return Err(QuadratureError::InvalidSpec("Euler node counts must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(QuadratureError::InvalidSpec("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Same spec with every explicit node count doubled.
    pub fn doubled(&self) -> Self {
        let (a, b, c) = self.euler_nodes;
        QuadratureSpec {
            torus_nodes: self.torus_nodes.map(|n| 2 * n),
            cube_order: self.cube_order.map(|n| 2 * n),
            euler_nodes: (2 * a, 2 * b, 2 * c),
            tolerance: self.tolerance,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect())
}

/// Pairwise (cascade) sum.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    pairwise(values)
}

fn pairwise<T>(values: &[T]) -> T
where
    T: Copy + Zero + Add<Output = T>,
{
    match values.len() {
        0 => T::zero(),
        1 => values[0],
        n if n <= 8 => values.iter().fold(T::zero(), |a, &b| a + b),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise(a) + pairwise(b)
        }
    }
}

/// `Σ_{i<count} f(i)` evaluated in parallel over fixed blocks.
fn blocked_sum<T, F>(count: usize, f: F) -> T
where
    T: Copy + Zero + Add<Output = T> + Send,
    F: Fn(usize) -> T + Sync,
{
    let blocks = count.div_ceil(BLOCK);
    let partial: Vec<T> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(count);
            let vals: Vec<T> = (lo..hi).map(&f).collect();
            pairwise(&vals)
        })
        .collect();
    pairwise(&partial)
}

/// Numerical `∫_{[0,1]^l} ∫_{𝕋^k} h^P`.
pub fn numeric_moment_admissible(
    h: &Admissible,
    exponent: u32,
    spec: &QuadratureSpec,
) -> Result<Complex64, QuadratureError> {
    spec.validate()?;
    let p = exponent as u64;

    let torus_counts: Vec<usize> = h
        .z_extent()
        .iter()
        .map(|&ext| {
            let required = (p * ext + 1) as usize;
            match spec.torus_nodes {
                None => Ok(required),
                Some(n) if n >= required => Ok(n),
                Some(n) => Err(QuadratureError::UnderResolved { direction: "torus", given: n, required }),
            }
        })
        .collect::<Result<_, _>>()?;
    let cube_orders: Vec<usize> = h
        .x_degrees()
        .iter()
        .map(|&deg| {
            let degree = p * deg as u64;
            let required = (degree as usize + 2) / 2; // 2n − 1 ≥ degree
            let required = required.max(1);
            match spec.cube_order {
                None => Ok(required),
                Some(n) if n >= required => Ok(n),
                Some(n) => Err(QuadratureError::UnderResolved { direction: "cube", given: n, required }),
            }
        })
        .collect::<Result<_, _>>()?;

    let roots: Vec<Vec<DdComplex>> = torus_counts.iter().map(|&n| roots_of_unity(n)).collect();
    let cube_rules: Vec<(Vec<TwoFloat>, Vec<TwoFloat>)> =
        cube_orders.iter().map(|&n| gauss_legendre_unit_dd(n)).collect();
    let terms: Vec<(Vec<i64>, DdPoly)> = h
        .terms()
        .iter()
        .map(|(exps, poly)| {
            let coeffs = poly.terms().iter().map(|(xe, c)| (xe.clone(), gauss_dd(c))).collect();
            (exps.clone(), coeffs)
        })
        .collect();

    let mut radices: Vec<usize> = torus_counts.clone();
    radices.extend(cube_orders.iter().copied());
    let total: usize = radices.iter().product();
    let torus_weight = torus_counts.iter().fold(TwoFloat::from(1.0), |w, &n| w / TwoFloat::from(n as f64));
    let k = torus_counts.len();

    let sum = blocked_sum(total, |mut idx| {
        let mut z = Vec::with_capacity(k);
        let mut x = Vec::with_capacity(cube_rules.len());
        let mut w = torus_weight;
        for (d, &r) in radices.iter().enumerate() {
            let j = idx % r;
            idx /= r;
            if d < k {
                z.push(j);
            } else {
                let (nodes, weights) = &cube_rules[d - k];
                x.push(nodes[j]);
                w *= weights[j];
            }
        }
        let value: DdComplex = terms
            .iter()
            .map(|(exps, coeffs)| {
                let zm = exps.iter().enumerate().fold(DdComplex::one(), |acc, (d, &e)| {
                    let n = torus_counts[d] as i64;
                    acc * roots[d][(z[d] as i64 * e).rem_euclid(n) as usize]
                });
                let c = coeffs.iter().fold(DdComplex::zero(), |acc, (xe, c)| {
                    let m = xe.iter().zip(&x).fold(TwoFloat::from(1.0), |m, (&e, &xi)| m * xi.powi(e as i32));
                    acc + c.scale(m)
                });
                zm * c
            })
            .fold(DdComplex::zero(), |a, b| a + b);
        value.powu(exponent).scale(w)
    });
    Ok(Complex64::new(sum.re.into(), sum.im.into()))
}

type DdComplex = Complex<TwoFloat>;
type DdPoly = Vec<(Vec<u32>, DdComplex)>;

fn bigint_dd(n: &BigInt) -> TwoFloat {
    let hi = n.to_f64().unwrap_or(f64::NAN);
    match BigInt::from_f64(hi) {
        Some(h) => TwoFloat::new_add(hi, (n - h).to_f64().unwrap_or(0.0)),
        None => TwoFloat::from(hi),
    }
}

fn rational_dd(r: &BigRat) -> TwoFloat {
    let (n, d) = (bigint_dd(r.numer()), bigint_dd(r.denom()));
    if n.hi().is_finite() && d.hi().is_finite() {
        n / d
    } else {
        TwoFloat::from(r.to_f64())
    }
}

fn gauss_dd(c: &GaussRat) -> DdComplex {
    Complex::new(rational_dd(&c.re), rational_dd(&c.im))
}

/// The `n`-th roots of unity, refined by Newton steps on `ζⁿ = 1`.
fn roots_of_unity(n: usize) -> Vec<DdComplex> {
    (0..n)
        .map(|j| {
            let start = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            let mut r = DdComplex::new(start.re.into(), start.im.into());
            for _ in 0..2 {
                let rn = r.powu(n as u32);
                r = r - r * (rn - DdComplex::one()) / rn.scale(TwoFloat::from(n as f64));
            }
            r
        })
        .collect()
}

/// Gauss–Legendre rule on `[0, 1]` with nodes polished in double-double.
fn gauss_legendre_unit_dd(order: usize) -> (Vec<TwoFloat>, Vec<TwoFloat>) {
    let (nodes, _) = gauss_legendre(order);
    let one = TwoFloat::from(1.0);
    let half = TwoFloat::from(0.5);
    nodes
        .iter()
        .map(|&x0| {
            let mut x = TwoFloat::from(x0);
            let mut d = one;
            for _ in 0..3 {
                let (p, dp) = legendre_dd(order, x);
                d = dp;
                if dp != TwoFloat::from(0.0) {
                    x -= p / dp;
                }
            }
            let (_, dp) = legendre_dd(order, x);
            if dp != TwoFloat::from(0.0) {
                d = dp;
            }
            let w = TwoFloat::from(2.0) / ((one - x * x) * d * d);
            (half * (x + one), half * w)
        })
        .unzip()
}

fn legendre_dd(n: usize, x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let one = TwoFloat::from(1.0);
    if n == 0 {
        return (one, TwoFloat::from(0.0));
    }
    let (mut p0, mut p1) = (one, x);
    for k in 2..=n {
        let kf = TwoFloat::from(k as f64);
        let p2 = ((TwoFloat::from(2.0 * k as f64 - 1.0)) * x * p1 - (kf - one) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, TwoFloat::from(n as f64) * (x * p1 - p0) / (x * x - one))
}

/// Numerical `∫_{SU(2)} f^P` via the Euler-angle formula
/// `(1/16π²) ∫₀^{2π} ∫₀^π ∫_{−2π}^{2π} F sin θ dψ dθ dφ`, with
/// `a = cos(θ/2) e^{i(φ+ψ)/2}` and `b = i sin(θ/2) e^{i(ψ−φ)/2}`.
pub fn su2_euler_moment(f: &SU2Function, exponent: u32, spec: &QuadratureSpec) -> Result<Complex64, QuadratureError> {
    spec.validate()?;
    let (n_phi, n_theta, n_psi) = spec.euler_nodes;

    // φ carries frequency (k − n + m)/2 and ψ carries (k + n − m)/2.
    let (max_phi, max_psi) = f.terms().keys().fold((0u64, 0u64), |(a, b), m| {
        let k = m.a_exp;
        let d = m.b_exp as i64 - m.b_star_exp as i64;
        (a.max((k - d).unsigned_abs()), b.max((k + d).unsigned_abs()))
    });
    let p = exponent as u64;
    let phi_required = (p * max_phi / 2 + 1) as usize;
    let psi_required = (p * max_psi + 1) as usize;
    if n_phi < phi_required {
        return Err(QuadratureError::UnderResolved { direction: "phi", given: n_phi, required: phi_required });
    }
    if n_psi < psi_required {
        return Err(QuadratureError::UnderResolved { direction: "psi", given: n_psi, required: psi_required });
    }

    let (thetas, theta_w) = gauss_legendre_on(n_theta, 0.0, PI);
    let phi_step = 2.0 * PI / n_phi as f64;
    let psi_step = 4.0 * PI / n_psi as f64;
    let norm = phi_step * psi_step / (16.0 * PI * PI);
    let i = Complex64::new(0.0, 1.0);

    let total = n_phi * n_theta * n_psi;
    let sum = blocked_sum(total, |idx| {
        let a_idx = idx % n_phi;
        let t_idx = (idx / n_phi) % n_theta;
        let s_idx = idx / (n_phi * n_theta);
        let phi = a_idx as f64 * phi_step;
        let theta = thetas[t_idx];
        let psi = -2.0 * PI + s_idx as f64 * psi_step;
        let a = Complex64::from_polar((theta / 2.0).cos(), (phi + psi) / 2.0);
        let b = i * Complex64::from_polar((theta / 2.0).sin(), (psi - phi) / 2.0);
        f.eval(a, b).powu(exponent) * (theta.sin() * theta_w[t_idx])
    });
    Ok(sum * norm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub pass: bool,
    pub residual: f64,
}

/// Passes when `|numeric − exact| ≤ tolerance · max(1, |exact|)`.
pub fn compare_exact_numeric(exact: &GaussRat, numeric: Complex64, tolerance: f64) -> Comparison {
    let e = exact.to_complex();
    let residual = (numeric - e).norm();
    Comparison { pass: residual <= tolerance * e.norm().max(1.0), residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::{reduce_su2, XPoly};
    use crate::numeric::BigRat;
    use crate::su2::SU2Monomial;
    use num_traits::One;

    fn close(z: Complex64, re: f64, tol: f64) -> bool {
        (z - Complex64::new(re, 0.0)).norm() < tol
    }

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for n in 1..40 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn admissible_examples() {
        let spec = QuadratureSpec::default();
        let x = Admissible::term(vec![], XPoly::var(0, 1));
        assert!(close(numeric_moment_admissible(&x, 1, &spec).unwrap(), 0.5, 1e-12));
        let zz = Admissible::z_monomial(vec![1], GaussRat::one(), 0)
            .add(&Admissible::z_monomial(vec![-1], GaussRat::one(), 0))
            .unwrap();
        assert!(close(numeric_moment_admissible(&zz, 2, &spec).unwrap(), 2.0, 1e-12));
        let bbs = SU2Function::monomial(SU2Monomial::new(0, 1, 1), GaussRat::one());
        let reduced = reduce_su2(&bbs);
        assert!(close(numeric_moment_admissible(&reduced, 3, &spec).unwrap(), 0.25, 1e-12));
    }

    #[test]
    fn under_resolution_is_an_error() {
        let zz = Admissible::z_monomial(vec![3], GaussRat::one(), 0);
        let spec = QuadratureSpec { torus_nodes: Some(4), ..Default::default() };
        assert!(matches!(
            numeric_moment_admissible(&zz, 2, &spec),
            Err(QuadratureError::UnderResolved { direction: "torus", given: 4, required: 7 })
        ));
        let xp = Admissible::term(vec![], XPoly::var(0, 1).pow(5));
        let spec = QuadratureSpec { cube_order: Some(3), ..Default::default() };
        assert!(numeric_moment_admissible(&xp, 1, &spec).is_ok());
        assert!(numeric_moment_admissible(&xp, 2, &spec).is_err());
        let spec = QuadratureSpec { euler_nodes: (2, 8, 2), ..Default::default() };
        assert!(su2_euler_moment(&SU2Function::a(), 3, &spec).is_err());
        let bad = QuadratureSpec { tolerance: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn euler_examples() {
        let spec = QuadratureSpec::default();
        for p in 0..4 {
            assert!(close(su2_euler_moment(&SU2Function::one(), p, &spec).unwrap(), 1.0, 1e-12));
        }
        let bbs = SU2Function::monomial(SU2Monomial::new(0, 1, 1), GaussRat::one());
        assert!(close(su2_euler_moment(&bbs, 2, &spec).unwrap(), 1.0 / 3.0, 1e-10));
        assert!(su2_euler_moment(&SU2Function::a(), 1, &spec).unwrap().norm() < 1e-10);
        // a a* + b b* = 1 pointwise
        let one = &SU2Function::a().normal_multiply(&SU2Function::a_star()) + &bbs;
        assert!(close(su2_euler_moment(&one, 3, &spec).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn comparison_examples() {
        let quarter = GaussRat::from(BigRat::from_ratio(1, 4));
        let c = compare_exact_numeric(&quarter, Complex64::new(0.25, 0.0), 1e-10);
        assert!(c.pass);
        assert_eq!(c.residual, 0.0);
        assert!(compare_exact_numeric(&GaussRat::from_int(0), Complex64::new(1e-14, 0.0), 1e-10).pass);
        let third = GaussRat::from(BigRat::from_ratio(1, 3));
        let c = compare_exact_numeric(&third, Complex64::new(0.25, 0.0), 1e-10);
        assert!(!c.pass);
        assert!((c.residual - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_nodes_is_stable() {
        let f = SU2Function::from_terms([
            (SU2Monomial::new(1, 1, 0), GaussRat::from_ints(1, 2)),
            (SU2Monomial::new(-2, 0, 1), GaussRat::from_int(3)),
            (SU2Monomial::new(0, 2, 2), GaussRat::from_ints(0, -1)),
        ]);
        let spec = QuadratureSpec::default();
        for p in 1..=4 {
            let exact = f.power_moment_direct(p);
            let r1 = compare_exact_numeric(&exact, su2_euler_moment(&f, p, &spec).unwrap(), 1e-8);
            let r2 = compare_exact_numeric(&exact, su2_euler_moment(&f, p, &spec.doubled()).unwrap(), 1e-8);
            assert!(r1.pass && r2.pass, "P={p}: {r1:?} {r2:?}");
            assert!(r2.residual <= 10.0 * r1.residual.max(1e-15), "P={p}: {r1:?} {r2:?}");
        }
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<Complex64> = (0..1000).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        assert_eq!(pairwise_sum(&v), Complex64::new(499500.0, -499500.0));
        assert_eq!(pairwise_sum(&[]), Complex64::new(0.0, 0.0));
    }
}
