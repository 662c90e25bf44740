//! Truncated power series over the cyclotomic ring.
//!
//! `ẽ(T) = exp(P̃(T)) mod T^(D+1)` is obtained by solving `y' = L̃ y` on the
//! factorial-scaled coefficients `b_i = i! B_i`, after rescaling `T` so that
//! `P̃` is integral: every product in the recurrence then stays in the ring
//! of integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::numbertheory::{vp_factorial, CycElem, CycInt, Params, Valuation};
use crate::par::{self, Strategy};
use crate::poly::InputPoly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesForm {
    /// Entries are the coefficients `B_i`.
    Plain,
    /// Entries are `b_i = i! B_i`.
    FactorialScaled,
}

/// Coefficients of degrees `0..=D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub coeffs: Vec<CycElem>,
    pub form: SeriesForm,
    /// Ring multiplications spent producing this series.
    pub ring_mults: u64,
}

impl TruncSeries {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The series `1`.
    pub fn one(params: &Params) -> Self {
        let ring = params.ring();
        let mut coeffs = vec![ring.elem_zero(); params.degree_bound() + 1];
        coeffs[0] = ring.elem_one();
        TruncSeries {
            coeffs,
            form: SeriesForm::Plain,
            ring_mults: 0,
        }
    }

    /// Coefficientwise equality at the common precision.
    pub fn agrees_with(&self, other: &TruncSeries, params: &Params) -> bool {
        let ring = params.ring();
        self.form == other.form
            && self.len() == other.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| ring.elem_eq(a, b))
    }
}

/// `P̃ = sum a_i T^i / pi_(d_i)`.
pub fn tilde_transform(poly: &InputPoly, params: &Params) -> Result<InputPoly> {
    check_degree(poly, params)?;
    let ring = params.ring();
    poly.try_map(|i, a| {
        ring.check(a.num())?;
        let inv = ring.uniformizer_inverse(params.d_i(i))?;
        Ok(ring.elem_mul(a, inv))
    })?
    .with_degree_bound(params.degree_bound())
}

fn check_degree(poly: &InputPoly, params: &Params) -> Result<()> {
    if poly.degree() > params.degree_bound() {
        return Err(Error::DegreeExceedsBound {
            degree: poly.degree(),
            bound: params.degree_bound(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrepareMode {
    /// Smallest `k` (possibly negative) making the substitution integral.
    #[default]
    Minimal,
    /// As `Minimal`, but never scale up: `k >= 0`.
    ClampNonNegative,
}

/// `P̃(pi_d^k T)` with integral coefficients, and `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prepared {
    pub poly: InputPoly,
    pub k: i64,
}

/// Rescale `T` by `pi_d^k` with `k = max_i ceil(-v(ã_i) / i)`.
pub fn prepare(ptilde: &InputPoly, params: &Params, mode: PrepareMode) -> Result<Prepared> {
    if ptilde.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = params.ring();
    let k = ptilde
        .terms()
        .filter_map(|(i, c)| {
            ring.elem_valuation(c)
                .finite()
                .map(|v| Integer::div_ceil(&-v, &(i as i64)))
        })
        .max()
        .ok_or_else(|| Error::precision("every coefficient of P̃ is zero at working precision"))?;
    let k = match mode {
        PrepareMode::Minimal => k,
        PrepareMode::ClampNonNegative => k.max(0),
    };
    let poly = ptilde.try_map(|i, c| {
        let scaled = ring.elem_mul_pi_pow(c, i as i64 * k);
        let int = ring.elem_to_int(&scaled).map_err(|err| match err {
            Error::NonIntegral(_) => Error::NonIntegral(i),
            other => other,
        })?;
        Ok(ring.elem_from_int(int))
    })?;
    Ok(Prepared { poly, k })
}

/// Smallest coefficient valuation, the Gauss valuation of the polynomial.
pub fn gauss_valuation(poly: &InputPoly, params: &Params) -> Valuation {
    let ring = params.ring();
    poly.terms()
        .map(|(_, c)| ring.elem_valuation(c))
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// Coefficients `c_0, ..., c_(D-1)` of `L̃ = P̃'` for an integral `P̃`.
pub fn derivative(prepared: &InputPoly, params: &Params) -> Result<Vec<CycInt>> {
    let ring = params.ring();
    let mut c = vec![ring.zero(); params.degree_bound()];
    for (i, a) in prepared.terms() {
        let a = ring
            .elem_to_int(a)
            .map_err(|_| Error::NonIntegral(i))?;
        c[i - 1] = ring.scale(&a, &BigInt::from(i));
    }
    Ok(c)
}

/// Factorial-scaled exponential: `b_0 = 1` and
/// `b_(i+1) = sum_(k <= min(i, D-1)) c_k i!/(i-k)! b_(i-k)`.
///
/// Uses exactly `sum_(i<D) min(i+1, D) = D(D+1)/2` ring multiplications.
pub fn truncated_exp(ltilde: &[CycInt], params: &Params, strategy: Strategy) -> Result<TruncSeries> {
    let ring = params.ring();
    let dd = params.degree_bound();
    if ltilde.len() > dd {
        return Err(Error::DegreeExceedsBound {
            degree: ltilde.len(),
            bound: dd,
        });
    }
    let mut c: Vec<CycInt> = Vec::with_capacity(dd);
    for x in ltilde {
        ring.check(x)?;
        c.push(x.clone());
    }
    c.resize(dd, ring.zero());

    let mut b: Vec<CycInt> = Vec::with_capacity(dd + 1);
    b.push(ring.one());
    let mut mults = 0u64;
    for i in 0..dd {
        let kmax = i.min(dd - 1);
        let mut falling = Vec::with_capacity(kmax + 1);
        let mut f = BigInt::one();
        for k in 0..=kmax {
            if k > 0 {
                f *= i - k + 1;
            }
            falling.push(f.clone());
        }
        let terms = par::map_range(strategy, kmax + 1, |k| {
            ring.scale(&ring.mul(&c[k], &b[i - k]), &falling[k])
        });
        mults += terms.len() as u64;
        let next = terms
            .iter()
            .fold(ring.zero(), |acc, t| ring.add(&acc, t));
        b.push(next);
    }
    Ok(TruncSeries {
        coeffs: b.into_iter().map(|x| ring.elem_from_int(x)).collect(),
        form: SeriesForm::FactorialScaled,
        ring_mults: mults,
    })
}

/// `B_i = b_i / i!`.
pub fn to_plain(series: &TruncSeries, params: &Params) -> TruncSeries {
    if series.form == SeriesForm::Plain {
        return series.clone();
    }
    let ring = params.ring();
    let p = params.p();
    let mut fact = BigInt::one();
    let coeffs = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if i > 0 {
                fact *= i;
            }
            let v = vp_factorial(i as u64, p);
            let q = BigRational::new(BigInt::one(), fact.clone());
            let inv = ring.elem_from_rational(&q);
            debug_assert_eq!(inv.shift(), v * params.e() as u64);
            ring.elem_mul(b, &inv)
        })
        .collect();
    TruncSeries {
        coeffs,
        form: SeriesForm::Plain,
        ring_mults: series.ring_mults,
    }
}

/// Undo the substitution `T -> pi_d^k T`: coefficient `i` times `pi_d^(-ik)`.
pub fn unscale(series: &TruncSeries, k: i64, params: &Params) -> Result<TruncSeries> {
    let ring = params.ring();
    let plain = to_plain(series, params);
    let coeffs = plain
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| ring.canonical(&ring.elem_mul_pi_pow(c, -(i as i64) * k)))
        .collect();
    Ok(TruncSeries {
        coeffs,
        form: SeriesForm::Plain,
        ring_mults: plain.ring_mults,
    })
}

fn dense(poly: &InputPoly, params: &Params) -> Vec<CycElem> {
    let ring = params.ring();
    let mut v = vec![ring.elem_zero(); params.degree_bound() + 1];
    for (i, c) in poly.terms() {
        v[i] = c.clone();
    }
    v
}

/// Product of plain series modulo `T^(D+1)`.
pub fn series_mul(a: &TruncSeries, b: &TruncSeries, params: &Params) -> TruncSeries {
    let (coeffs, mults) = mul_dense(&a.coeffs, &b.coeffs, params);
    TruncSeries {
        coeffs,
        form: SeriesForm::Plain,
        ring_mults: mults,
    }
}

fn mul_dense(a: &[CycElem], b: &[CycElem], params: &Params) -> (Vec<CycElem>, u64) {
    let ring = params.ring();
    let n = a.len().min(b.len());
    let mut out = vec![ring.elem_zero(); n];
    let mut mults = 0;
    for i in 0..n {
        for j in 0..n - i {
            let prod = ring.elem_mul(&a[i], &b[j]);
            out[i + j] = ring.elem_add(&out[i + j], &prod);
            mults += 1;
        }
    }
    (out, mults)
}

/// `1 + P̃ + P̃^2/2 + ... + P̃^D/D!` by truncated powers.
pub fn truncated_exp_direct(ptilde: &InputPoly, params: &Params) -> Result<TruncSeries> {
    check_degree(ptilde, params)?;
    let ring = params.ring();
    let base = dense(ptilde, params);
    let mut acc = TruncSeries::one(params).coeffs;
    let mut power = base.clone();
    let mut mults = 0;
    let mut fact = BigInt::one();
    for k in 1..=params.degree_bound() {
        if k > 1 {
            let (next, m) = mul_dense(&power, &base, params);
            power = next;
            mults += m;
        }
        fact *= k;
        let inv = ring.elem_from_rational(&BigRational::new(BigInt::one(), fact.clone()));
        for (dst, term) in acc.iter_mut().zip(&power) {
            *dst = ring.elem_add(dst, &ring.elem_mul(term, &inv));
        }
    }
    Ok(TruncSeries {
        coeffs: acc,
        form: SeriesForm::Plain,
        ring_mults: mults,
    })
}

/// Every stage of the computation of `ẽ(T)` from `P(T)`.
#[derive(Clone, Debug)]
pub struct TildeExp {
    pub ptilde: InputPoly,
    /// `None` when `P̃ = 0`.
    pub prepared: Option<Prepared>,
    /// Factorial-scaled series of the prepared polynomial.
    pub scaled: Option<TruncSeries>,
    /// Plain coefficients of `ẽ(T)` for the original variable.
    pub series: TruncSeries,
}

impl TildeExp {
    pub fn k(&self) -> i64 {
        self.prepared.as_ref().map_or(0, |p| p.k)
    }

    pub fn ring_mults(&self) -> u64 {
        self.scaled.as_ref().map_or(0, |s| s.ring_mults)
    }
}

/// `P -> P̃ -> prepare -> truncated_exp -> unscale`.
pub fn tilde_exp(poly: &InputPoly, params: &Params, strategy: Strategy) -> Result<TildeExp> {
    let ptilde = tilde_transform(poly, params)?;
    if ptilde.is_zero() {
        return Ok(TildeExp {
            ptilde,
            prepared: None,
            scaled: None,
            series: TruncSeries::one(params),
        });
    }
    let prepared = prepare(&ptilde, params, PrepareMode::Minimal)?;
    let ltilde = derivative(&prepared.poly, params)?;
    let scaled = truncated_exp(&ltilde, params, strategy)?;
    let series = unscale(&scaled, prepared.k, params)?;
    Ok(TildeExp {
        ptilde,
        prepared: Some(prepared),
        scaled: Some(scaled),
        series,
    })
}
