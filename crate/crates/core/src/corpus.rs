//! Reproducible random inputs and the classical families used in tests,
//! benchmarks and the acceptance suite.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::invariants::{self, ResidueSeries};
use crate::numbertheory::Params;
use crate::poly::{SymCoeff, SymPoly};
use crate::Result;

/// Uniform `ê` over `F_p` with bound `D`.
pub fn random_ehat<R: Rng>(rng: &mut R, p: u64, degree_bound: usize) -> ResidueSeries {
    let mut coeffs = vec![1u64];
    coeffs.extend((0..degree_bound).map(|_| rng.gen_range(0..p)));
    ResidueSeries::new(p, coeffs).expect("constant term is 1")
}

/// A soluble polynomial: the lift of a random `ê`.
pub fn random_soluble<R: Rng>(rng: &mut R, params: &Params) -> Result<SymPoly> {
    let ehat = random_ehat(rng, params.p(), params.degree_bound());
    invariants::lift_symbolic(&ehat, params)
}

/// Sparse polynomial with coefficients `u p^s pi(j)`, `u` a small unit and
/// `s in {-1, 0, 1}`; a mix of soluble and insoluble equations.
pub fn random_poly<R: Rng>(rng: &mut R, params: &Params) -> Result<SymPoly> {
    let p = params.p() as i64;
    let dd = params.degree_bound();
    let mut terms = Vec::new();
    for i in 1..=dd {
        if !rng.gen_bool(0.5) && i != dd {
            continue;
        }
        let mut u = rng.gen_range(1..p.max(3));
        if u % p == 0 {
            u += 1;
        }
        if rng.gen_bool(0.5) {
            u = -u;
        }
        let q = match rng.gen_range(0..6) {
            0 => BigRational::new(BigInt::from(u), BigInt::from(p)),
            1 => BigRational::from_integer(BigInt::from(u * p)),
            _ => BigRational::from_integer(BigInt::from(u)),
        };
        let j = if rng.gen_bool(0.7) {
            params.d_i(i)
        } else {
            rng.gen_range(0..=params.ring().d())
        };
        terms.push((i, SymCoeff::rational(q).mul(&SymCoeff::pi(j))));
    }
    SymPoly::from_terms(terms, dd)
}

/// `e_k`: `P(T) = sum_(j<=k) pi_(k-j) T^(p^j) / p^j`, of index `1 - p^k`
/// at bound `p^k`.
pub fn pi_exponential(p: u64, k: u32) -> Result<SymPoly> {
    let dd = p.pow(k) as usize;
    let terms = (0..=k).map(|j| {
        let pj = p.pow(j);
        let c = SymCoeff::pi(k - j).scale(&BigRational::new(BigInt::from(1), BigInt::from(pj)));
        (pj as usize, c)
    });
    SymPoly::from_terms(terms, dd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_MARGIN;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pi_exponential_shape() {
        assert_eq!(pi_exponential(2, 1).unwrap().to_string(), "pi(1)*T + 1/2*pi(0)*T^2");
        assert_eq!(pi_exponential(3, 0).unwrap().to_string(), "pi(0)*T");
    }

    #[test]
    fn generators_are_reproducible() {
        let prm = Params::new(3, 7, DEFAULT_MARGIN).unwrap();
        let a = random_poly(&mut ChaCha8Rng::seed_from_u64(7), &prm).unwrap();
        let b = random_poly(&mut ChaCha8Rng::seed_from_u64(7), &prm).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 7);
        let s = random_soluble(&mut ChaCha8Rng::seed_from_u64(1), &prm).unwrap();
        assert!(invariants::is_soluble(&s.to_input(&prm).unwrap(), &prm).unwrap().soluble);
    }
}
