use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{HarnessError, Input};
use crate::admissible::{mathieu_bound, reduce_su2, Admissible, Separator};
use crate::numeric::{BigRat, GaussRat};
use crate::quadrature::{compare_exact_numeric, su2_euler_moment, QuadratureSpec};
use crate::su2::SU2Function;
use crate::worm::{
    evaluate_series, residue_formula_eval, truncated_generating_function, Enclosure, RasterResult, Trinomial, Verdict,
};

/// Fraction of swept `P` values re-derived from a fresh power.
const CROSS_CHECK_RATE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentTable {
    /// `∫ f^P` for `P = 1..=pmax`.
    pub moments: Vec<GaussRat>,
    pub nonzero_powers: Vec<u32>,
    /// `|nonzero_powers| / pmax` as an exact rational.
    pub nonzero_density: BigRat,
}

/// Exact moments of an SU(2) function (direct normal-form powers) or an
/// admissible function.
pub fn moment_table(input: &Input, pmax: u32) -> MomentTable {
    let moments: Vec<GaussRat> = match input {
        Input::Su2(f) => {
            let mut power = SU2Function::one();
            (1..=pmax)
                .map(|_| {
                    power = power.normal_multiply(f);
                    power.haar_functional()
                })
                .collect()
        }
        Input::Admissible(h) => h.power_moments(pmax).into_iter().skip(1).collect(),
    };
    let nonzero_powers: Vec<u32> = (1..=pmax).filter(|&p| !moments[p as usize - 1].is_zero()).collect();
    let nonzero_density =
        if pmax == 0 { BigRat::zero() } else { BigRat::from_ratio(nonzero_powers.len() as i64, pmax as i64) };
    MomentTable { moments, nonzero_powers, nonzero_density }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum SearchOutcome {
    Found { p: u32, value: GaussRat },
    Exhausted { pmax: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub zero_in_hull: bool,
    /// Exhausted with `0 ∈ hull(Sp(h))`: worth a closer look, not a
    /// counterexample.
    pub flagged: bool,
    /// Powers whose swept moment was recomputed from a fresh `h^P`.
    pub cross_checked: Vec<u32>,
}

/// Smallest `P ≤ pmax` with `∫∫ h^P ≠ 0`.
pub fn search_nonzero_moment(h: &Admissible, pmax: u32, seed: u64) -> Result<SearchResult, HarnessError> {
    if pmax == 0 {
        return Err(HarnessError::Refusal("pmax must be at least 1".into()));
    }
    let zero_in_hull = h.spectrum().contains_zero;
    let mut swept = Vec::new();
    let mut found = None;
    for (p, value) in h.power_moment_iter(pmax).skip(1) {
        let nonzero = !value.is_zero();
        swept.push((p, value));
        if nonzero {
            found = Some(p);
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cross_checked: Vec<u32> =
        swept.iter().map(|(p, _)| *p).filter(|_| rng.random_bool(CROSS_CHECK_RATE)).collect();
    if cross_checked.is_empty() {
        cross_checked.push(swept.last().expect("pmax ≥ 1").0);
    }
    for &p in &cross_checked {
        let fresh = h.ad_power(p).moment();
        if fresh != swept[p as usize - 1].1 {
            return Err(HarnessError::Inconsistent(format!("swept and fresh moments differ at P = {p}")));
        }
    }

    let outcome = match found {
        Some(p) => SearchOutcome::Found { p, value: swept[p as usize - 1].1.clone() },
        None => SearchOutcome::Exhausted { pmax },
    };
    let flagged = matches!(outcome, SearchOutcome::Exhausted { .. }) && zero_in_hull;
    Ok(SearchResult { outcome, zero_in_hull, flagged, cross_checked })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VanishingCertificate {
    pub pmax: u32,
    pub margin: Option<BigRat>,
    pub separators: Vec<Separator>,
    /// Powers with a nonzero moment; empty for a valid certificate.
    pub nonzero_powers: Vec<u32>,
    pub all_zero: bool,
}

fn refuse_if_zero_in_hull(h: &Admissible) -> Result<(), HarnessError> {
    if h.spectrum().contains_zero {
        return Err(HarnessError::Refusal("0 lies in the convex hull of Sp(h), so vanishing is not guaranteed".into()));
    }
    Ok(())
}

/// Checks `∫∫ h^P = 0` exactly for `1 ≤ P ≤ pmax` when `0 ∉ hull(Sp(h))`.
pub fn verify_vanishing(h: &Admissible, pmax: u32) -> Result<VanishingCertificate, HarnessError> {
    refuse_if_zero_in_hull(h)?;
    let hull = h.spectrum();
    let nonzero_powers: Vec<u32> =
        h.power_moment_iter(pmax).skip(1).filter(|(_, v)| !v.is_zero()).map(|(p, _)| p).collect();
    Ok(VanishingCertificate {
        pmax,
        margin: hull.margin,
        separators: hull.separators,
        all_zero: nonzero_powers.is_empty(),
        nonzero_powers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MathieuCertificate {
    pub p0: BigRat,
    pub window: u32,
    pub first: u32,
    pub last: u32,
    /// `(P, ∫∫ h^P g)` for every checked `P`.
    pub moments: Vec<(u32, GaussRat)>,
    pub all_zero: bool,
}

/// Computes `P₀ = mathieu_bound(h, g)` and checks `∫∫ h^P g = 0` for every
/// integer `P ∈ (P₀, P₀ + window]`.
pub fn verify_mathieu_window(h: &Admissible, g: &Admissible, window: u32) -> Result<MathieuCertificate, HarnessError> {
    let p0 = mathieu_bound(h, g)?.ok_or_else(|| HarnessError::Refusal("0 lies in the convex hull of Sp(h)".into()))?;
    let floor = p0.floor();
    let first = u32::try_from(floor + 1).map_err(|_| HarnessError::Refusal("P₀ out of range".into()))?;
    let last = first + window.saturating_sub(1);
    let moments = if window == 0 { Vec::new() } else { h.weighted_power_moments(g, first, last)? };
    let all_zero = moments.iter().all(|(_, v)| v.is_zero());
    Ok(MathieuCertificate { p0, window, first, last, moments, all_zero })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BridgeRow {
    pub p: u32,
    pub direct: GaussRat,
    pub combinatorial: GaussRat,
    pub reduced: GaussRat,
    pub euler: Complex64,
    pub euler_residual: f64,
    pub exact_agree: bool,
    pub euler_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BridgeReport {
    pub rows: Vec<BridgeRow>,
    pub all_exact_agree: bool,
    pub all_euler_pass: bool,
}

/// Four independent routes to `∫_{SU(2)} f^P` for `1 ≤ P ≤ pmax`.
pub fn run_bridge_check(f: &SU2Function, pmax: u32, spec: &QuadratureSpec) -> Result<BridgeReport, HarnessError> {
    let reduced = reduce_su2(f).power_moments(pmax);
    let mut rows = Vec::with_capacity(pmax as usize);
    let mut power = SU2Function::one();
    for p in 1..=pmax {
        power = power.normal_multiply(f);
        let direct = power.haar_functional();
        let combinatorial = f.power_moment_combinatorial(p);
        let euler = su2_euler_moment(f, p, spec)?;
        let cmp = compare_exact_numeric(&direct, euler, spec.tolerance);
        let reduced_p = reduced[p as usize].clone();
        rows.push(BridgeRow {
            p,
            exact_agree: direct == combinatorial && direct == reduced_p,
            direct,
            combinatorial,
            reduced: reduced_p,
            euler,
            euler_residual: cmp.residual,
            euler_pass: cmp.pass,
        });
    }
    Ok(BridgeReport {
        all_exact_agree: rows.iter().all(|r| r.exact_agree),
        all_euler_pass: rows.iter().all(|r| r.euler_pass),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HaarRow {
    pub n: u32,
    pub exact: GaussRat,
    pub matches_closed_form: bool,
    pub euler: Complex64,
    pub euler_residual: f64,
    pub euler_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HaarReport {
    pub rows: Vec<HaarRow>,
    pub all_match: bool,
    pub all_euler_pass: bool,
}

/// `∫ (b* b)^n = 1/(n+1)` for `0 ≤ n ≤ nmax`, exactly and by Euler-angle
/// quadrature.
pub fn haar_check(nmax: u32, spec: &QuadratureSpec) -> Result<HaarReport, HarnessError> {
    let bbs = SU2Function::b_star().normal_multiply(&SU2Function::b());
    let mut power = SU2Function::one();
    let mut rows = Vec::with_capacity(nmax as usize + 1);
    for n in 0..=nmax {
        if n > 0 {
            power = power.normal_multiply(&bbs);
        }
        let exact = power.haar_functional();
        let euler = su2_euler_moment(&bbs, n, spec)?;
        let cmp = compare_exact_numeric(&exact, euler, spec.tolerance);
        rows.push(HaarRow {
            n,
            matches_closed_form: exact == GaussRat::from(BigRat::recip_of(n as u64 + 1)),
            exact,
            euler,
            euler_residual: cmp.residual,
            euler_pass: cmp.pass,
        });
    }
    Ok(HaarReport {
        all_match: rows.iter().all(|r| r.matches_closed_form),
        all_euler_pass: rows.iter().all(|r| r.euler_pass),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesRow {
    pub t: f64,
    pub truncated_series: Complex64,
    pub residue_formula: Complex64,
    pub difference: f64,
}

/// Truncated generating function against the residue formula at each `t`.
pub fn series_check(tri: &Trinomial, pmax: u32, ts: &[f64], x_order: usize) -> Result<Vec<SeriesRow>, HarnessError> {
    let coeffs = truncated_generating_function(&tri.to_admissible(), pmax)?;
    ts.iter()
        .map(|&t| {
            let tc = Complex64::new(t, 0.0);
            let series = evaluate_series(&coeffs, tc);
            let residue = residue_formula_eval(tri, tc, x_order)?;
            Ok(SeriesRow {
                t,
                truncated_series: series,
                residue_formula: residue,
                difference: (series - residue).norm(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WormEnclosureReport {
    pub verdict: Verdict,
    pub consistent_across_resolutions: bool,
    pub rasters: Vec<RasterResult>,
    pub escape_path: Option<Vec<[f64; 2]>>,
    pub min_distance_to_origin: f64,
    pub notes: Vec<String>,
    /// The published assertion being compared against: the curves enclose
    /// the origin.
    pub claimed_enclosed: bool,
    /// `None` when the verdict is inconclusive.
    pub agrees_with_claim: Option<bool>,
    pub statement: String,
}

/// Wraps an enclosure verdict with an explicit comparison against the
/// claim that the curves enclose the origin completely.
pub fn worm_enclosure_report(enclosure: Enclosure) -> WormEnclosureReport {
    let outcomes: Vec<Option<bool>> = enclosure.rasters.iter().map(|r| r.enclosed).collect();
    let consistent = outcomes.windows(2).all(|w| w[0] == w[1]);
    let agrees = match enclosure.verdict {
        Verdict::Enclosed => Some(true),
        Verdict::NotEnclosed => Some(false),
        Verdict::Inconclusive => None,
    };
    let statement = match agrees {
        Some(true) => "AGREES with the claim that the critical-value curves enclose the origin completely".to_string(),
        Some(false) => "DISAGREES with the claim that the critical-value curves enclose the origin completely: \
                        an escape path from the origin to infinity avoids both curves"
            .to_string(),
        None => {
            "UNDETERMINED: the verdict is inconclusive, so no comparison with the enclosure claim is made".to_string()
        }
    };
    WormEnclosureReport {
        verdict: enclosure.verdict,
        consistent_across_resolutions: consistent,
        rasters: enclosure.rasters,
        escape_path: enclosure.escape_path,
        min_distance_to_origin: enclosure.min_distance_to_origin,
        notes: enclosure.notes,
        claimed_enclosed: true,
        agrees_with_claim: agrees,
        statement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::{one_minus, XPoly};
    use crate::corpus;
    use crate::harness::parse_input;
    use num_traits::One;

    fn z(exps: &[i64]) -> Admissible {
        Admissible::z_monomial(exps.to_vec(), GaussRat::one(), 0)
    }

    fn corpus_admissible(name: &str) -> Admissible {
        parse_input(corpus::get(name).unwrap()).unwrap().to_admissible()
    }

    #[test]
    fn search_examples() {
        let r = search_nonzero_moment(&corpus_admissible("z-plus-zinv"), 4, 0).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Found { p: 2, value: GaussRat::from_int(2) });
        assert!(r.zero_in_hull && !r.flagged);

        let r = search_nonzero_moment(&z(&[1]), 10, 0).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Exhausted { pmax: 10 });
        assert!(!r.zero_in_hull && !r.flagged);

        let r = search_nonzero_moment(&corpus_admissible("xz-mix"), 4, 3).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Found { p: 2, value: GaussRat::from(BigRat::from_ratio(1, 3)) });

        assert!(matches!(search_nonzero_moment(&z(&[1]), 0, 0), Err(HarnessError::Refusal(_))));
    }

    #[test]
    fn exhausted_inside_hull_is_flagged() {
        // z² + z⁻³ first returns to z⁰ at P = 5
        let h = z(&[2]).add(&z(&[-3])).unwrap();
        let r = search_nonzero_moment(&h, 4, 1).unwrap();
        assert!(r.flagged);
        let r = search_nonzero_moment(&h, 5, 1).unwrap();
        assert!(matches!(r.outcome, SearchOutcome::Found { p: 5, .. }));
    }

    #[test]
    fn vanishing_examples() {
        let h = Admissible::z_monomial(vec![1, 0], GaussRat::one(), 0)
            .add(&Admissible::z_monomial(vec![0, 1], GaussRat::one(), 0))
            .unwrap();
        let cert = verify_vanishing(&h, 12).unwrap();
        assert!(cert.all_zero && cert.margin.is_some());

        let one_plus_x = XPoly::one(1).add(&XPoly::var(0, 1)).unwrap();
        let cert = verify_vanishing(&Admissible::term(vec![2], one_plus_x), 12).unwrap();
        assert!(cert.all_zero);

        assert!(matches!(verify_vanishing(&corpus_admissible("z-plus-zinv"), 12), Err(HarnessError::Refusal(_))));
    }

    #[test]
    fn mathieu_examples() {
        let h = z(&[1]).add(&z(&[2])).unwrap();
        let cert = verify_mathieu_window(&h, &z(&[-5]), 20).unwrap();
        assert_eq!(cert.p0, BigRat::from_integer(5));
        assert_eq!((cert.first, cert.last), (6, 25));
        assert_eq!(cert.moments.len(), 20);
        assert!(cert.all_zero);

        let cert = verify_mathieu_window(&h, &Admissible::one(1, 0), 20).unwrap();
        assert!(cert.p0.is_zero() && cert.all_zero && cert.first == 1);

        let zz = z(&[1]).add(&z(&[-1])).unwrap();
        assert!(matches!(verify_mathieu_window(&zz, &z(&[0]), 5), Err(HarnessError::Refusal(_))));
        assert!(matches!(verify_mathieu_window(&h, &Admissible::one(2, 0), 5), Err(HarnessError::Admissible(_))));
    }

    #[test]
    fn bridge_examples() {
        let spec = QuadratureSpec::default();
        let bbs = SU2Function::b().normal_multiply(&SU2Function::b_star());
        let report = run_bridge_check(&bbs, 3, &spec).unwrap();
        let expected: Vec<GaussRat> = (2..=4).map(|d| GaussRat::from(BigRat::from_ratio(1, d))).collect();
        let got: Vec<GaussRat> = report.rows.iter().map(|r| r.direct.clone()).collect();
        assert_eq!(got, expected);
        assert!(report.all_exact_agree && report.all_euler_pass);
        assert!(report.rows.iter().all(|r| r.euler_residual < 1e-10));

        let report = run_bridge_check(&SU2Function::a(), 5, &spec).unwrap();
        assert!(report.rows.iter().all(|r| r.direct.is_zero() && r.reduced.is_zero()));
        assert!(report.all_exact_agree);
    }

    #[test]
    fn haar_small() {
        let report = haar_check(10, &QuadratureSpec::default()).unwrap();
        assert!(report.all_match && report.all_euler_pass);
    }

    #[test]
    fn moment_table_density() {
        let table = moment_table(&Input::Admissible(corpus_admissible("z-plus-zinv")), 6);
        assert_eq!(table.nonzero_powers, vec![2, 4, 6]);
        assert_eq!(table.nonzero_density, BigRat::from_ratio(1, 2));
        let x = XPoly::var(0, 1);
        let h = Admissible::term(vec![1], x.clone()).add(&Admissible::term(vec![-1], one_minus(&x))).unwrap();
        assert_eq!(moment_table(&Input::Admissible(h), 2).moments[1], GaussRat::from(BigRat::from_ratio(1, 3)));
    }

    #[test]
    fn series_rows() {
        let tri = Trinomial::from_admissible(&corpus_admissible("z-plus-zinv")).unwrap();
        let rows = series_check(&tri, 16, &[0.05, 0.1], 8).unwrap();
        assert!(rows.iter().all(|r| r.difference < 1e-6));
    }
}
