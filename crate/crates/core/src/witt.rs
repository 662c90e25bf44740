//! Artin-Hasse factorization `ê(T) = prod_n AH(u_n T^n)` over `F_p`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::invariants::{self, ResidueSeries};
use crate::numbertheory::{floor_log, Params};
use crate::poly::{split_p_part, InputPoly};
use crate::{Error, Result};

/// Coefficients of `AH(T) = exp(sum_i T^(p^i) / p^i)` reduced mod `p`.
///
/// Expanded over `Q` through `n A_n = sum_(p^i <= n) A_(n - p^i)`, which
/// avoids dividing by multiples of `p` in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhTable {
    p: u64,
    coeffs: Vec<u64>,
}

impl AhTable {
    pub fn new(p: u64, degree_bound: usize) -> Self {
        let mut exact = vec![BigRational::zero(); degree_bound + 1];
        exact[0] = BigRational::from_integer(1.into());
        for n in 1..=degree_bound {
            let mut acc = BigRational::zero();
            let mut pi = 1usize;
            while pi <= n {
                acc += &exact[n - pi];
                pi *= p as usize;
            }
            exact[n] = acc / BigInt::from(n);
        }
        let pb = BigInt::from(p);
        let coeffs = exact
            .iter()
            .map(|q| {
                let den = q.denom().mod_floor(&pb);
                let inv = den.modinv(&pb).expect("AH coefficients are p-integral");
                (q.numer() * inv).mod_floor(&pb).to_u64().expect("residue fits")
            })
            .collect();
        AhTable { p, coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `AH(u T^n)` modulo `T^(D+1)`.
    pub fn series(&self, u: u64, n: usize, degree_bound: usize) -> ResidueSeries {
        let p = self.p;
        let mut out = vec![0u64; degree_bound + 1];
        let mut upow = 1u64;
        for (j, a) in self.coeffs.iter().enumerate() {
            let deg = j * n;
            if deg > degree_bound {
                break;
            }
            out[deg] = a * upow % p;
            upow = upow * (u % p) % p;
        }
        ResidueSeries::new(p, out).expect("constant term is 1")
    }
}

/// `AH(u T^n) mod (T^(D+1), p)`.
pub fn ah_series(u: u64, n: usize, params: &Params) -> Result<ResidueSeries> {
    let dd = params.degree_bound();
    if n == 0 || n > dd {
        return Err(Error::DegreeExceedsBound { degree: n, bound: dd });
    }
    Ok(AhTable::new(params.p(), dd / n).series(u, n, dd))
}

/// Coordinates `u_n` with `ê = prod_n AH(u_n T^n)`; absent means zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittFactorization {
    pub p: u64,
    pub degree_bound: usize,
    pub factors: BTreeMap<usize, u64>,
}

impl WittFactorization {
    pub fn reconstruct(&self) -> ResidueSeries {
        let table = AhTable::new(self.p, self.degree_bound);
        self.factors
            .iter()
            .fold(ResidueSeries::one(self.p, self.degree_bound), |acc, (&n, &u)| {
                acc.mul(&table.series(u, n, self.degree_bound))
            })
    }

    /// `χ = 1 - max { m p^floor(log_p(D/n)) : u_n != 0, n = m p^e }`.
    pub fn index(&self) -> i64 {
        let weight = self
            .factors
            .keys()
            .map(|&n| {
                let (m, _) = split_p_part(n, self.p);
                m as i64 * self.p.pow(floor_log(self.p, (self.degree_bound / n) as u64)) as i64
            })
            .max()
            .unwrap_or(0);
        1 - weight
    }

    /// `u_(p^i)` for `p^i <= D`, the coordinates of the p-typical part.
    pub fn p_typical_coordinates(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = 1usize;
        while n <= self.degree_bound {
            out.push(self.factors.get(&n).copied().unwrap_or(0));
            n *= self.p as usize;
        }
        out
    }
}

/// Greedy peeling: `u_n` is the current coefficient of `T^n`, then divide by
/// `AH(u_n T^n)`.
pub fn witt_factorize(ehat: &ResidueSeries) -> Result<WittFactorization> {
    let p = ehat.p();
    let dd = ehat.degree_bound();
    let table = AhTable::new(p, dd);
    let mut rest = ehat.clone();
    let mut factors = BTreeMap::new();
    for n in 1..=dd {
        let u = rest.coeff(n);
        if u != 0 {
            factors.insert(n, u);
            rest = rest.mul(&table.series(u, n, dd).inverse());
        }
    }
    if !rest.is_one() {
        return Err(Error::inconsistency(format!("Witt peeling left {rest}")));
    }
    Ok(WittFactorization {
        p,
        degree_bound: dd,
        factors,
    })
}

/// The index through the Witt coordinates of `ê`.
pub fn index_via_witt(poly: &InputPoly, params: &Params) -> Result<i64> {
    let ehat = invariants::residue_invariant(poly, params)?;
    Ok(witt_factorize(&ehat)?.index())
}
