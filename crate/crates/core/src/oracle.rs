//! Brute-force reference implementations for the test suites. They share
//! only the number types with the main code paths.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::admissible::{Admissible, XPoly};
use crate::numeric::{BigRat, GaussRat};

/// `0 ∈ conv(points)` by trying every subset of at most `k + 1` points and
/// solving for barycentric coordinates exactly.
pub fn caratheodory_zero_in_hull(points: &[Vec<i64>]) -> bool {
    let Some(k) = points.first().map(Vec::len) else { return false };
    let mut subset = Vec::new();
    (1..=(k + 1).min(points.len())).any(|size| search_subsets(points, size, 0, &mut subset))
}

fn search_subsets(points: &[Vec<i64>], size: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == size {
        return origin_in_simplex(points, chosen);
    }
    for i in start..points.len() {
        chosen.push(i);
        if search_subsets(points, size, i + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Solves `Σ λ_j p_j = 0`, `Σ λ_j = 1` when the chosen points are affinely
/// independent, then checks `λ ≥ 0`.
fn origin_in_simplex(points: &[Vec<i64>], chosen: &[usize]) -> bool {
    let k = points[0].len();
    let n = chosen.len();
    // rows: k coordinate equations and the normalization; last column is the rhs
    let mut rows: Vec<Vec<BigRat>> = (0..=k)
        .map(|r| {
            let mut row: Vec<BigRat> = chosen
                .iter()
                .map(|&j| if r < k { BigRat::from_integer(points[j][r]) } else { BigRat::one() })
                .collect();
            row.push(if r < k { BigRat::zero() } else { BigRat::one() });
            row
        })
        .collect();

    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            // affinely dependent: a smaller subset covers this case
            return false;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip().expect("nonzero pivot");
        for c in 0..=n {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..=n {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= &delta;
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|row| !row[n].is_zero()) {
        return false;
    }
    (0..n).all(|i| rows[i][n] >= BigRat::zero())
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `∫∫ h^P` by summing over exponent counts `r` with `Σ r_j = P` and
/// `Σ r_j m_j = 0`: `P!/∏ r_j! · ∫ ∏ c_j^{r_j}`.
pub fn expansion_power_moment(h: &Admissible, p: u32) -> GaussRat {
    let terms: Vec<(&Vec<i64>, &XPoly)> = h.terms().iter().collect();
    let k = h.z_arity();
    let mut total = GaussRat::zero();
    let mut counts = vec![0u32; terms.len()];
    let p_fact = factorial(p);
    for_each_count(terms.len(), p, &mut counts, 0, &mut |r| {
        let mut sum = vec![0i64; k];
        for (j, &rj) in r.iter().enumerate() {
            for (s, e) in sum.iter_mut().zip(terms[j].0) {
                *s += rj as i64 * e;
            }
        }
        if sum.iter().any(|&v| v != 0) {
            return;
        }
        let denom = r.iter().fold(BigUint::one(), |acc, &rj| acc * factorial(rj));
        let multinomial = BigRat::from(&p_fact / denom);
        let product = r
            .iter()
            .enumerate()
            .fold(XPoly::one(h.x_arity()), |acc, (j, &rj)| acc.mul(&terms[j].1.pow(rj)).expect("same arity"));
        total += &product.integrate_cube().scale(&multinomial);
    });
    total
}

fn for_each_count(parts: usize, remaining: u32, counts: &mut Vec<u32>, at: usize, f: &mut impl FnMut(&[u32])) {
    if parts == 0 {
        if remaining == 0 {
            f(counts);
        }
        return;
    }
    if at == parts - 1 {
        counts[at] = remaining;
        f(counts);
        return;
    }
    for v in 0..=remaining {
        counts[at] = v;
        for_each_count(parts, remaining - v, counts, at + 1, f);
    }
    counts[at] = 0;
}

/// Every `Σ_{i=1}^{P} s_i` with `s_i ∈ points`.
pub fn reachable_sums(points: &[Vec<i64>], p: u32) -> BTreeSet<Vec<i64>> {
    let k = points.first().map_or(0, Vec::len);
    let mut current = BTreeSet::from([vec![0i64; k]]);
    for _ in 0..p {
        current = current
            .iter()
            .flat_map(|s| points.iter().map(move |q| s.iter().zip(q).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .collect();
    }
    current
}
