//! Exact membership of the origin in the convex hull of a lattice point set.
//!
//! Every decision is backed by integer linear functionals `u` with offset
//! `c = min_p ⟨u, p⟩`: the hull lies in `{y : ⟨u, y⟩ ≥ c}`, so any `c > 0`
//! excludes the origin. Dimensions one and two use the hull's own facets.
//! Higher dimensions search for the best separating functional in the box
//! `‖u‖∞ ≤ 1` by enumerating the vertices of that linear program.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};
use serde::Serialize;

use super::AdmissibleError;
use crate::numeric::BigRat;

/// Valid inequality `⟨normal, y⟩ ≥ offset` over the whole point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separator {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Separator {
    fn from_normal(normal: Vec<i64>, points: &[Vec<i64>]) -> Option<Self> {
        let normal = primitive(normal)?;
        let offset = points.iter().map(|p| dot(&normal, p)).min()?;
        Some(Separator { normal, offset })
    }

    /// `offset / ‖normal‖₁`, a lower bound on the ∞-norm of every hull point.
    pub fn margin(&self) -> BigRat {
        let l1: i64 = self.normal.iter().map(|v| v.abs()).sum();
        BigRat::from_ratio(self.offset, l1)
    }

    pub fn separates_origin(&self) -> bool {
        self.offset > 0
    }
}

/// `Sp(h)` together with the exact verdict on `0 ∈ conv(Sp(h))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumHull {
    pub points: Vec<Vec<i64>>,
    pub contains_zero: bool,
    /// Positive lower bound on `min_{y ∈ hull} ‖y‖∞`, present only when the
    /// origin is outside.
    pub margin: Option<BigRat>,
    /// Functionals with positive offset; empty when the origin is inside.
    pub separators: Vec<Separator>,
}

/// Decides `0 ∈ conv(points)` exactly.
pub fn zero_in_hull(points: &[Vec<i64>]) -> Result<bool, AdmissibleError> {
    Ok(analyze(points)?.contains_zero)
}

/// Full hull analysis: verdict, margin and separating functionals.
pub fn analyze(points: &[Vec<i64>]) -> Result<SpectrumHull, AdmissibleError> {
    let first = points.first().ok_or(AdmissibleError::EmptyPointSet)?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(AdmissibleError::ArityMismatch { what: "point dimension", expected: dim, actual: bad.len() });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let candidates = match dim {
        0 => Vec::new(),
        1 => vec![vec![1], vec![-1]],
        2 => planar_normals(&pts),
        _ => lp_vertex_normals(&pts),
    };
    let mut separators: Vec<Separator> = candidates
        .into_iter()
        .filter_map(|u| Separator::from_normal(u, &pts))
        .filter(Separator::separates_origin)
        .collect();
    separators.sort_by(|a, b| a.normal.cmp(&b.normal));
    separators.dedup();
    let margin = separators.iter().map(Separator::margin).max();
    Ok(SpectrumHull { points: pts, contains_zero: separators.is_empty(), margin, separators })
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn primitive(v: Vec<i64>) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        return None;
    }
    Some(v.into_iter().map(|x| x / g).collect())
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    let (ax, ay) = ((a[0] - o[0]) as i128, (a[1] - o[1]) as i128);
    let (bx, by) = ((b[0] - o[0]) as i128, (b[1] - o[1]) as i128);
    ax * by - ay * bx
}

/// Counter-clockwise hull vertices with collinear points removed
/// (monotone chain). Input must be sorted and deduplicated.
pub fn planar_hull(pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn planar_normals(pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let hull = planar_hull(pts);
    match hull.len() {
        1 => vec![hull[0].clone()],
        2 => {
            let d = vec![hull[1][0] - hull[0][0], hull[1][1] - hull[0][1]];
            let perp = vec![-d[1], d[0]];
            vec![d.clone(), d.iter().map(|v| -v).collect(), perp.clone(), perp.iter().map(|v| -v).collect()]
        }
        n => (0..n)
            .map(|i| {
                let p = &hull[i];
                let q = &hull[(i + 1) % n];
                // inward normal of a ccw edge
                vec![-(q[1] - p[1]), q[0] - p[0]]
            })
            .collect(),
    }
}

/// Normals `u` at feasible vertices of
/// `max t  s.t. ⟨u, p⟩ ≥ t for all p,  −1 ≤ u_i ≤ 1`.
fn lp_vertex_normals(pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = pts[0].len();
    let vars = k + 1;
    // rows: [coefficients of u..., coefficient of t] · (u, t) = rhs  (as equalities when tight)
    let mut rows: Vec<(Vec<i128>, i128)> = Vec::new();
    for p in pts {
        let mut row: Vec<i128> = p.iter().map(|&v| v as i128).collect();
        row.push(-1);
        rows.push((row, 0));
    }
    for i in 0..k {
        let mut upper = vec![0i128; vars];
        upper[i] = 1;
        rows.push((upper, 1));
        let mut lower = vec![0i128; vars];
        lower[i] = -1;
        rows.push((lower, 1));
    }
    let n_points = pts.len();

    let mut best: Option<(BigRat, Vec<Vec<i64>>)> = None;
    let mut chosen = Vec::with_capacity(vars);
    for_each_subset(rows.len(), vars, &mut chosen, 0, &mut |subset| {
        // a vertex needs at least one point constraint to pin t
        if subset.iter().all(|&r| r >= n_points) {
            return;
        }
        let matrix: Vec<Vec<i128>> = subset.iter().map(|&r| rows[r].0.clone()).collect();
        let rhs: Vec<i128> = subset.iter().map(|&r| rows[r].1).collect();
        let (numer, denom) = match cramer_small(&matrix, &rhs) {
            Small::Singular => return,
            Small::Solved(numer, denom) => {
                if !feasible_small(pts, &numer, denom) {
                    return;
                }
                (numer.into_iter().map(BigInt::from).collect::<Vec<_>>(), BigInt::from(denom))
            }
            Small::Overflow => {
                let Some((numer, denom)) = cramer(&matrix, &rhs) else {
                    return;
                };
                if !feasible(pts, &numer, &denom) {
                    return;
                }
                (numer, denom)
            }
        };
        let t = BigRat::new(numer[k].clone(), denom.clone()).expect("denominator positive");
        let normal = integer_direction(&numer[..k]);
        match &mut best {
            Some((bt, normals)) if *bt == t => normals.push(normal),
            Some((bt, _)) if *bt > t => {}
            _ => best = Some((t, vec![normal])),
        }
    });
    // keep every optimal vertex direction; all of them separate when t* > 0
    match best {
        Some((t, normals)) if t > BigRat::zero() => normals,
        _ => Vec::new(),
    }
}

enum Small {
    Singular,
    Solved(Vec<i128>, i128),
    Overflow,
}

/// Cramer's rule in `i128`, reporting overflow instead of wrapping.
fn cramer_small(a: &[Vec<i128>], b: &[i128]) -> Small {
    let Some(det) = bareiss(a.to_vec()) else { return Small::Overflow };
    if det == 0 {
        return Small::Singular;
    }
    let sign = det.signum();
    let mut numer = Vec::with_capacity(a.len());
    for col in 0..a.len() {
        let replaced: Vec<Vec<i128>> = a
            .iter()
            .zip(b)
            .map(|(row, &bi)| {
                let mut r = row.clone();
                r[col] = bi;
                r
            })
            .collect();
        match bareiss(replaced) {
            Some(d) => numer.push(d * sign),
            None => return Small::Overflow,
        }
    }
    Small::Solved(numer, det.abs())
}

/// `⟨u,p⟩ − t ≥ 0` for every point and `|u_i| ≤ 1`, all scaled by `denom > 0`.
fn feasible_small(pts: &[Vec<i64>], numer: &[i128], denom: i128) -> bool {
    let k = numer.len() - 1;
    if numer[..k].iter().any(|u| u.abs() > denom) {
        return false;
    }
    pts.iter().all(|p| {
        let lhs = p.iter().zip(numer).try_fold(-numer[k], |acc, (&pv, &u)| acc.checked_add(u.checked_mul(pv as i128)?));
        match lhs {
            Some(v) => v >= 0,
            None => feasible(std::slice::from_ref(p), &to_big(numer), &BigInt::from(denom)),
        }
    })
}

fn to_big(v: &[i128]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn feasible(pts: &[Vec<i64>], numer: &[BigInt], denom: &BigInt) -> bool {
    let k = numer.len() - 1;
    numer[..k].iter().all(|u| u.abs() <= *denom)
        && pts.iter().all(|p| {
            let lhs: BigInt = p.iter().zip(numer).map(|(&pv, u)| u * pv).sum::<BigInt>() - &numer[k];
            !lhs.is_negative()
        })
}

fn integer_direction(numer: &[BigInt]) -> Vec<i64> {
    let g = numer.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return vec![0; numer.len()];
    }
    numer.iter().map(|v| i64::try_from(v / &g).expect("direction entries bounded by the box")).collect()
}

fn for_each_subset<F: FnMut(&[usize])>(n: usize, size: usize, chosen: &mut Vec<usize>, start: usize, visit: &mut F) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    let needed = size - chosen.len();
    for i in start..=n.saturating_sub(needed) {
        if i >= n {
            break;
        }
        chosen.push(i);
        for_each_subset(n, size, chosen, i + 1, visit);
        chosen.pop();
    }
}

/// Solves `A x = b` by Cramer's rule over the integers. Returns numerators
/// and a positive common denominator, or `None` when `A` is singular.
fn cramer(a: &[Vec<i128>], b: &[i128]) -> Option<(Vec<BigInt>, BigInt)> {
    let det = determinant(a);
    if det.is_zero() {
        return None;
    }
    let sign = if det.is_negative() { -BigInt::one() } else { BigInt::one() };
    let numer = (0..a.len())
        .map(|col| {
            let replaced: Vec<Vec<i128>> = a
                .iter()
                .zip(b)
                .map(|(row, &bi)| {
                    let mut r = row.clone();
                    r[col] = bi;
                    r
                })
                .collect();
            determinant(&replaced) * &sign
        })
        .collect();
    Some((numer, det.abs()))
}

/// Fraction-free (Bareiss) determinant. Runs in `i128` and falls back to
/// big integers on overflow.
fn determinant(a: &[Vec<i128>]) -> BigInt {
    match bareiss(a.to_vec()) {
        Some(d) => BigInt::from(d),
        None => bareiss(a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .expect("big integer arithmetic does not overflow"),
    }
}

fn bareiss<T>(mut m: Vec<Vec<T>>) -> Option<T>
where
    T: Clone + Zero + One + CheckedMul + CheckedSub + std::ops::Div<Output = T> + std::ops::Neg<Output = T>,
{
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = m[i][j].checked_mul(&m[k][k])?;
                let rhs = m[i][k].checked_mul(&m[k][j])?;
                m[i][j] = lhs.checked_sub(&rhs)? / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Some(if sign_flip { -det } else { det })
}
