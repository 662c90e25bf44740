use std::sync::Arc;

use super::ring::CycRing;
use crate::{Error, Result};

pub const DEFAULT_MARGIN: u32 = 8;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// `floor(log_p(n))` for `n >= 1`, by integer comparison.
pub fn floor_log(p: u64, n: u64) -> u32 {
    debug_assert!(p >= 2 && n >= 1);
    let mut k = 0;
    let mut pk = p;
    while pk <= n {
        k += 1;
        pk = match pk.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    k
}

/// The arithmetic context: prime, degree bound, the `d_i` table and the
/// working precision, together with the shared cyclotomic ring.
#[derive(Clone, Debug)]
pub struct Params {
    p: u64,
    degree_bound: usize,
    d: u32,
    dtable: Vec<u32>,
    margin: u32,
    ring: Arc<CycRing>,
}

impl Params {
    /// Context for degree bound `degree_bound` with
    /// `A = ceil(D (p+1) / (p-1)) + margin`.
    pub fn new(p: u64, degree_bound: usize, margin: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if degree_bound < 1 {
            return Err(Error::InvalidDegreeBound(degree_bound));
        }
        let d = floor_log(p, degree_bound as u64);
        let base = (degree_bound as u64 * (p + 1)).div_ceil(p - 1);
        let precision = u32::try_from(base + margin as u64)
            .map_err(|_| Error::precision("working precision does not fit in 32 bits"))?;
        let ring = CycRing::new(p, d, precision);
        Ok(Self::assemble(p, degree_bound, margin, Arc::new(ring)))
    }

    fn assemble(p: u64, degree_bound: usize, margin: u32, ring: Arc<CycRing>) -> Self {
        let d = floor_log(p, degree_bound as u64);
        let dtable = (1..=degree_bound as u64)
            .map(|i| floor_log(p, degree_bound as u64 / i))
            .collect();
        Params {
            p,
            degree_bound,
            d,
            dtable,
            margin,
            ring,
        }
    }

    /// Same ring and precision, smaller degree bound. Used for the
    /// components of the p-typical decomposition, whose uniformizers are
    /// those of the ambient ring.
    pub fn restrict(&self, degree_bound: usize) -> Result<Self> {
        if degree_bound < 1 {
            return Err(Error::InvalidDegreeBound(degree_bound));
        }
        if floor_log(self.p, degree_bound as u64) > self.ring.d() {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::assemble(self.p, degree_bound, self.margin, self.ring.clone()))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// `floor(log_p(D))`.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `d_i = floor(log_p(D / i))` for `1 <= i <= D`.
    pub fn d_i(&self, i: usize) -> u32 {
        self.dtable[i - 1]
    }

    pub fn dtable(&self) -> &[u32] {
        &self.dtable
    }

    /// Ramification index of the working ring.
    pub fn e(&self) -> usize {
        self.ring.e()
    }

    /// Absolute `p`-adic working precision `A`.
    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn same_ring(&self, other: &Params) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }
}
