use super::{Admissible, XPoly};
use crate::su2::SU2Function;

/// The admissible function `f̃(z₁, z₂; x)` attached to `f ∈ ℂ[SU(2)]`:
///
/// * `c · a^k b^n b*^m` (`k ≥ 0`) becomes `c · x^n (1−x)^k · z₁^{n−m} z₂^k`,
/// * `c' · (a*)^{k'} b^n b*^m` (`k' > 0`) becomes `c' · x^n · z₁^{n−m} z₂^{−k'}`.
///
/// Terms landing on the same `z` exponent are combined, so `Sp(f̃)` can be
/// smaller than the raw index set of `f`.
pub fn reduce_su2(f: &SU2Function) -> Admissible {
    let x = XPoly::var(0, 1);
    let one_minus_x = XPoly::one(1).sub(&x).expect("same arity");
    let terms = f.terms().iter().map(|(mono, c)| {
        let mut coeff = x.pow(mono.b_exp).scale(c);
        if mono.a_exp > 0 {
            coeff = coeff.mul_unchecked(&one_minus_x.pow(mono.a_exp as u32));
        }
        let z = vec![mono.b_exp as i64 - mono.b_star_exp as i64, mono.a_exp];
        (z, coeff)
    });
    Admissible::from_terms(2, 1, terms).expect("arities fixed at (2, 1)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussRat;
    use crate::su2::SU2Monomial;
    use num_traits::One;

    #[test]
    fn named_instances() {
        let bbs = SU2Function::monomial(SU2Monomial::new(0, 1, 1), GaussRat::one());
        assert_eq!(reduce_su2(&bbs), Admissible::term(vec![0, 0], XPoly::var(0, 1)));

        let a = reduce_su2(&SU2Function::a());
        let omx = XPoly::one(1).sub(&XPoly::var(0, 1)).unwrap();
        assert_eq!(a, Admissible::term(vec![0, 1], omx));

        let a_star = reduce_su2(&SU2Function::a_star());
        assert_eq!(a_star, Admissible::term(vec![0, -1], XPoly::one(1)));
    }

    #[test]
    fn like_exponents_combine() {
        // b b* and the constant both land on z⁰, giving x + 1
        let f = SU2Function::from_terms([
            (SU2Monomial::new(0, 1, 1), GaussRat::one()),
            (SU2Monomial::new(0, 0, 0), GaussRat::one()),
        ]);
        let g = reduce_su2(&f);
        assert_eq!(g.len(), 1);
        let expected = XPoly::var(0, 1).add(&XPoly::one(1)).unwrap();
        assert_eq!(g.coeff(&[0, 0]), Some(&expected));
    }
}
