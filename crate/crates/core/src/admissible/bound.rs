use num_traits::Zero;

use super::{Admissible, AdmissibleError};
use crate::numeric::BigRat;

/// Exact threshold `P₀` with `∫∫ h^P g = 0` for every integer `P > P₀`.
///
/// A nonzero moment of `h^P g` needs exponent counts `r_j` summing to `P`
/// with `m' + Σ r_j m_j = 0` for some `m' ∈ Sp(g)`. Pairing with a
/// separator `⟨u, y⟩ ≥ c > 0` of `Sp(h)` gives `P·c ≤ ⟨u, −m'⟩`. The
/// smallest such bound over the available separators is returned.
///
/// Returns `Ok(None)` when `0 ∈ conv(Sp(h))`.
pub fn mathieu_bound(h: &Admissible, g: &Admissible) -> Result<Option<BigRat>, AdmissibleError> {
    if h.z_arity() != g.z_arity() {
        return Err(AdmissibleError::ArityMismatch { what: "z arity", expected: h.z_arity(), actual: g.z_arity() });
    }
    if h.x_arity() != g.x_arity() {
        return Err(AdmissibleError::ArityMismatch { what: "x arity", expected: h.x_arity(), actual: g.x_arity() });
    }
    let hull = h.spectrum();
    if hull.contains_zero {
        return Ok(None);
    }
    if h.is_zero() || g.is_zero() {
        return Ok(Some(BigRat::zero()));
    }
    let bound = hull
        .separators
        .iter()
        .map(|s| {
            let worst = g
                .terms()
                .keys()
                .map(|m| -m.iter().zip(&s.normal).map(|(a, b)| a * b).sum::<i64>())
                .max()
                .expect("g has terms");
            BigRat::from_ratio(worst.max(0), s.offset)
        })
        .min()
        .expect("origin outside hull implies a separator");
    Ok(Some(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::XPoly;
    use crate::numeric::GaussRat;
    use num_traits::One;

    fn z(exps: &[i64]) -> Admissible {
        Admissible::z_monomial(exps.to_vec(), GaussRat::one(), 1)
    }

    #[test]
    fn one_dimensional_examples() {
        let h = z(&[1]).add(&z(&[2])).unwrap();
        assert_eq!(mathieu_bound(&h, &z(&[-5])).unwrap(), Some(BigRat::from(5)));
        assert_eq!(mathieu_bound(&z(&[1]), &z(&[-3])).unwrap(), Some(BigRat::from(3)));
    }

    #[test]
    fn constant_weight_gives_zero() {
        let h = z(&[1, 0]).add(&z(&[0, 1])).unwrap();
        assert_eq!(mathieu_bound(&h, &z(&[0, 0])).unwrap(), Some(BigRat::zero()));
    }

    #[test]
    fn not_applicable_when_origin_inside() {
        let h = z(&[1]).add(&z(&[-1])).unwrap();
        assert_eq!(mathieu_bound(&h, &z(&[0])).unwrap(), None);
    }

    #[test]
    fn arity_mismatch() {
        assert!(mathieu_bound(&z(&[1]), &z(&[1, 1])).is_err());
        let g = Admissible::term(vec![1], XPoly::var(1, 2));
        assert!(mathieu_bound(&z(&[1]), &g).is_err());
    }

    #[test]
    fn bound_is_sharp_for_single_direction() {
        // h = z, g = z^-3: h^3 g = 1 has moment 1, h^4 g = z has moment 0
        let h = z(&[1]);
        let g = z(&[-3]);
        let p0 = mathieu_bound(&h, &g).unwrap().unwrap();
        assert_eq!(p0, BigRat::from(3));
        let moments = h.weighted_power_moments(&g, 0, 8).unwrap();
        for (p, v) in moments {
            assert_eq!(v.is_zero(), p != 3, "P={p}");
        }
    }
}
