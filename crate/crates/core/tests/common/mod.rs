#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use piexp::{corpus, invariants, Params, SymCoeff, SymPoly, DEFAULT_MARGIN};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn params(p: u64, dd: usize) -> Params {
    Params::new(p, dd, DEFAULT_MARGIN).unwrap()
}

pub fn index(poly: &SymPoly, p: u64) -> i64 {
    let prm = params(p, poly.degree_bound());
    invariants::index(&poly.to_input(&prm).unwrap(), &prm).unwrap()
}

pub fn monomial(c: SymCoeff, deg: usize, dd: usize) -> SymPoly {
    SymPoly::monomial(c, deg, dd).unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The `e_k` family used across the law tests.
pub fn exponentials() -> Vec<(u64, u32, SymPoly)> {
    [(2u64, 0u32), (2, 1), (2, 2), (3, 0), (3, 1)]
        .into_iter()
        .map(|(p, k)| (p, k, corpus::pi_exponential(p, k).unwrap()))
        .collect()
}

/// Random mix (soluble and insoluble) plus lifted soluble inputs.
pub fn random_corpus(seed: u64, n: usize) -> Vec<(Params, SymPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let p = [2u64, 3, 5][i % 3];
            let prm = params(p, 1 + (i * 7) % 12);
            let poly = if i % 2 == 0 {
                corpus::random_poly(&mut rng, &prm).unwrap()
            } else {
                corpus::random_soluble(&mut rng, &prm).unwrap()
            };
            (prm, poly)
        })
        .collect()
}
