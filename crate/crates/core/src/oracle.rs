//! Exact arithmetic in `Q(zeta)` used to cross-check the main pipeline.
//!
//! Nothing here knows about working precision, preparation or the
//! factorial-scaled recurrence: elements are rational vectors modulo the
//! Eisenstein polynomial and exponentials are expanded directly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::invariants;
use crate::numbertheory::{eisenstein_poly, vp_bigint, CycElem, Params, Valuation};
use crate::par::Strategy;
use crate::poly::{SymCoeff, SymPoly};
use crate::series;
use crate::{Error, Result};

/// `sum_j num[j] x^j / den` in `Q[x]/(E(x))`, with `den > 0` and the
/// fraction reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCyc {
    num: Vec<BigInt>,
    den: BigInt,
}

impl ExactCyc {
    fn normalize(mut self) -> Self {
        let g = self
            .num
            .iter()
            .fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in self.num.iter_mut() {
                *c /= &g;
            }
            self.den /= &g;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Coefficient of `x^j` as a rational.
    pub fn coeff(&self, j: usize) -> BigRational {
        BigRational::new(self.num[j].clone(), self.den.clone())
    }
}

/// `Q(zeta)` for `zeta` of order `p^(d+1)`, in the basis of powers of
/// `x = zeta - 1`.
#[derive(Clone, Debug)]
pub struct ExactField {
    p: u64,
    p_big: BigInt,
    e: usize,
    eisenstein: Vec<BigInt>,
    pis: Vec<ExactCyc>,
    pi_invs: Vec<ExactCyc>,
}

impl ExactField {
    pub fn new(p: u64, d: u32) -> Self {
        let eisenstein = eisenstein_poly(p, d);
        let e = eisenstein.len() - 1;
        let mut field = ExactField {
            p,
            p_big: BigInt::from(p),
            e,
            eisenstein,
            pis: Vec::new(),
            pi_invs: Vec::new(),
        };
        let x = field.x();
        let one = field.one();
        let zeta = field.add(&one, &x);
        let pis: Vec<ExactCyc> = (0..=d)
            .map(|i| {
                let power = field.pow(&zeta, p.pow(d - i));
                field.sub(&power, &one)
            })
            .collect();
        field.pi_invs = pis
            .iter()
            .map(|pi| field.inverse(pi).expect("uniformizers are nonzero"))
            .collect();
        field.pis = pis;
        field
    }

    /// Field for the working ring of `params`.
    pub fn for_params(params: &Params) -> Self {
        Self::new(params.p(), params.ring().d())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn zero(&self) -> ExactCyc {
        ExactCyc {
            num: vec![BigInt::zero(); self.e],
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> ExactCyc {
        self.rational(&BigRational::one())
    }

    pub fn rational(&self, q: &BigRational) -> ExactCyc {
        let mut x = self.zero();
        x.num[0] = q.numer().clone();
        x.den = q.denom().clone();
        x.normalize()
    }

    /// `x = zeta - 1`.
    pub fn x(&self) -> ExactCyc {
        if self.e == 1 {
            return self.rational(&BigRational::from_integer(-&self.p_big));
        }
        let mut x = self.zero();
        x.num[1] = BigInt::one();
        x
    }

    pub fn pi(&self, i: u32) -> Result<&ExactCyc> {
        let max = self.pis.len() as u32 - 1;
        self.pis.get(i as usize).ok_or(Error::IndexOutOfRange { index: i, max })
    }

    pub fn add(&self, a: &ExactCyc, b: &ExactCyc) -> ExactCyc {
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        ExactCyc {
            num,
            den: &a.den * &b.den,
        }
        .normalize()
    }

    pub fn neg(&self, a: &ExactCyc) -> ExactCyc {
        ExactCyc {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &ExactCyc, b: &ExactCyc) -> ExactCyc {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ExactCyc, b: &ExactCyc) -> ExactCyc {
        let e = self.e;
        let mut prod = vec![BigInt::zero(); 2 * e - 1];
        for (i, x) in a.num.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.num.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (j, ej) in self.eisenstein[..e].iter().enumerate() {
                prod[k - e + j] -= &c * ej;
            }
        }
        prod.truncate(e);
        ExactCyc {
            num: prod,
            den: &a.den * &b.den,
        }
        .normalize()
    }

    pub fn scale(&self, a: &ExactCyc, q: &BigRational) -> ExactCyc {
        ExactCyc {
            num: a.num.iter().map(|c| c * q.numer()).collect(),
            den: &a.den * q.denom(),
        }
        .normalize()
    }

    pub fn pow(&self, a: &ExactCyc, mut n: u64) -> ExactCyc {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse by Gaussian elimination on the matrix of multiplication by `a`.
    pub fn inverse(&self, a: &ExactCyc) -> Result<ExactCyc> {
        let e = self.e;
        // column j = a * x^j
        let x = self.x();
        let mut col = a.clone();
        let mut m = vec![vec![BigRational::zero(); e + 1]; e];
        for j in 0..e {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = self.mul(&col, &x);
        }
        m[0][e] = BigRational::one();
        for c in 0..e {
            let pivot = (c..e)
                .find(|&r| !m[r][c].is_zero())
                .ok_or_else(|| Error::inconsistency("inverse of zero in the exact field"))?;
            m.swap(c, pivot);
            let inv = m[c][c].recip();
            for v in m[c].iter_mut() {
                *v *= &inv;
            }
            for r in 0..e {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in c..=e {
                        let t = &m[c][k] * &f;
                        m[r][k] -= t;
                    }
                }
            }
        }
        let den = m.iter().fold(BigInt::one(), |l, row| l.lcm(row[e].denom()));
        let num = m
            .iter()
            .map(|row| row[e].numer() * (&den / row[e].denom()))
            .collect();
        Ok(ExactCyc { num, den }.normalize())
    }

    /// `pi_d`-adic valuation, `min_j (e v_p(c_j) + j)`.
    pub fn valuation(&self, a: &ExactCyc) -> Valuation {
        let e = self.e as i64;
        let vden = vp_bigint(&a.den, &self.p_big) as i64;
        a.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| Valuation::Finite(e * (vp_bigint(c, &self.p_big) as i64 - vden) + j as i64))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Reduction modulo `pi_d` of an integral element.
    pub fn residue(&self, a: &ExactCyc) -> Result<u64> {
        if self.valuation(a) < Valuation::Finite(0) {
            return Err(Error::NonIntegral(0));
        }
        let c = a.num[0].mod_floor(&self.p_big);
        let d = a.den.mod_floor(&self.p_big).modinv(&self.p_big).expect("integral element");
        Ok(num_traits::ToPrimitive::to_u64(&(c * d).mod_floor(&self.p_big)).expect("fits"))
    }

    pub fn eval(&self, c: &SymCoeff) -> Result<ExactCyc> {
        let mut acc = self.zero();
        for (m, q) in c.terms() {
            let mut term = self.rational(q);
            for (i, &k) in m.exponents().iter().enumerate() {
                let base = if k >= 0 {
                    self.pi(i as u32)?
                } else {
                    self.pi(i as u32)?;
                    &self.pi_invs[i]
                };
                for _ in 0..k.unsigned_abs() {
                    term = self.mul(&term, base);
                }
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Dense coefficients `0..=deg` of a symbolic polynomial.
    pub fn poly(&self, p: &SymPoly) -> Result<Vec<ExactCyc>> {
        let mut out = vec![self.zero(); p.degree() + 1];
        for (i, c) in p.terms() {
            out[i] = self.eval(c)?;
        }
        Ok(out)
    }

    /// `P̃`: coefficient `i` divided by `pi_(d_i)`.
    pub fn tilde(&self, p: &SymPoly, params: &Params) -> Result<Vec<ExactCyc>> {
        let mut out = self.poly(p)?;
        for (i, c) in out.iter_mut().enumerate().skip(1) {
            if !c.is_zero() {
                *c = self.mul(c, &self.pi_invs[params.d_i(i) as usize]);
            }
        }
        Ok(out)
    }

    /// Image in the working ring, at the ring's precision.
    pub fn to_elem(&self, a: &ExactCyc, params: &Params) -> CycElem {
        let ring = params.ring();
        let v = vp_bigint(&a.den, &self.p_big);
        let unit_den = &a.den / num_traits::pow(self.p_big.clone(), v as usize);
        let inv = unit_den
            .mod_floor(ring.modulus())
            .modinv(ring.modulus())
            .expect("p-free denominator is invertible");
        let coeffs: Vec<BigInt> = a.num.iter().map(|c| (c * &inv).mod_floor(ring.modulus())).collect();
        let num = ring.elem_from_int(ring.from_coeffs(&coeffs).expect("length e"));
        let scale = ring.elem_from_rational(&BigRational::new(
            BigInt::one(),
            num_traits::pow(self.p_big.clone(), v as usize),
        ));
        ring.elem_mul(&num, &scale)
    }
}

/// Coefficients `0..=n` of `exp(P(T))`, from `k E_k = sum_j j a_j E_(k-j)`.
pub fn exp_series_exact(field: &ExactField, poly: &[ExactCyc], n: usize) -> Vec<ExactCyc> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(field.one());
    for k in 1..=n {
        let mut acc = field.zero();
        for j in 1..=k.min(poly.len().saturating_sub(1)) {
            if poly[j].is_zero() || out[k - j].is_zero() {
                continue;
            }
            let term = field.scale(&field.mul(&poly[j], &out[k - j]), &BigRational::from_integer(j.into()));
            acc = field.add(&acc, &term);
        }
        out.push(field.scale(&acc, &BigRational::new(BigInt::one(), k.into())));
    }
    out
}

/// Outcome of a finite integrality probe of `exp(P(T))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub horizon: usize,
    /// First coefficient of negative valuation and that valuation.
    pub first_failure: Option<(usize, i64)>,
    /// Least `n0` such that every coefficient of degree in `n0..=horizon`
    /// is divisible by `pi_0`.
    pub divisible_from: Option<usize>,
}

impl Probe {
    pub fn integral(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks integrality of the coefficients of `exp(P)` up to `horizon`. A
/// falsifier only: integrality beyond the horizon is not established.
pub fn probe_integrality(field: &ExactField, poly: &[ExactCyc], horizon: usize) -> Probe {
    let coeffs = exp_series_exact(field, poly, horizon);
    let vals: Vec<Valuation> = coeffs.iter().map(|c| field.valuation(c)).collect();
    let first_failure = vals.iter().enumerate().find_map(|(i, v)| match v {
        Valuation::Finite(v) if *v < 0 => Some((i, *v)),
        _ => None,
    });
    let v_pi0 = Valuation::Finite(field.valuation(&field.pis[0]).finite().unwrap_or(0));
    let divisible_from = (1..=horizon)
        .rev()
        .take_while(|&i| vals[i] >= v_pi0)
        .last();
    Probe {
        horizon,
        first_failure,
        divisible_from,
    }
}

/// Result of [`crosscheck_pipeline`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub soluble: bool,
    /// Smallest value precision among the compared main-path coefficients.
    pub min_precision: i64,
    /// Whether the unprepared direct expansion was also compared.
    pub direct_compared: bool,
    pub probe: Probe,
}

/// Recomputes `ẽ(T)` exactly and compares it with the main pipeline; also
/// checks that the integrality probe of `exp(P)` does not contradict the
/// solubility decision.
pub fn crosscheck_pipeline(poly: &SymPoly, params: &Params, horizon: usize) -> Result<CrossCheck> {
    let field = ExactField::for_params(params);
    let dd = params.degree_bound();
    let input = poly.to_input(params)?;
    let solved = invariants::solve(&input, params, Strategy::default())?;
    let exact = exp_series_exact(&field, &field.tilde(poly, params)?, dd);
    let ring = params.ring();
    let mut min_precision = i64::MAX;
    for (i, (main, ex)) in solved.tilde.series.coeffs.iter().zip(&exact).enumerate() {
        min_precision = min_precision.min(main.value_precision());
        if !ring.elem_eq(main, &field.to_elem(ex, params)) {
            return Err(Error::inconsistency(format!(
                "ẽ differs from the exact expansion at degree {i}"
            )));
        }
    }
    let exact_soluble = exact
        .iter()
        .all(|c| field.valuation(c) >= Valuation::Finite(0));
    if exact_soluble != solved.solubility.soluble {
        return Err(Error::inconsistency(format!(
            "solubility {} but exact ẽ integrality {exact_soluble}",
            solved.solubility.soluble
        )));
    }
    let ptilde = series::tilde_transform(&input, params)?;
    let direct_compared = match series::truncated_exp_direct(&ptilde, params) {
        Ok(direct) => {
            for (i, (c, ex)) in direct.coeffs.iter().zip(&exact).enumerate() {
                if !ring.elem_eq(c, &field.to_elem(ex, params)) {
                    return Err(Error::inconsistency(format!(
                        "direct expansion differs from the exact one at degree {i}"
                    )));
                }
            }
            true
        }
        Err(Error::PrecisionExhausted(_)) => false,
        Err(err) => return Err(err),
    };
    let probe = probe_integrality(&field, &field.poly(poly)?, horizon);
    if solved.solubility.soluble && !probe.integral() {
        let (i, v) = probe.first_failure.expect("failure recorded");
        return Err(Error::inconsistency(format!(
            "soluble equation but exp(P) has valuation {v} at degree {i}"
        )));
    }
    Ok(CrossCheck {
        soluble: solved.solubility.soluble,
        min_precision,
        direct_compared,
        probe,
    })
}

/// Residue of every coefficient of the exact `ẽ(T)`; `None` when some
/// coefficient is not integral.
pub fn exact_ehat(poly: &SymPoly, params: &Params) -> Result<Option<Vec<u64>>> {
    let field = ExactField::for_params(params);
    let exact = exp_series_exact(&field, &field.tilde(poly, params)?, params.degree_bound());
    exact
        .iter()
        .map(|c| match field.residue(c) {
            Ok(r) => Ok(Some(r)),
            Err(Error::NonIntegral(_)) => Ok(None),
            Err(err) => Err(err),
        })
        .collect::<Result<Option<Vec<u64>>>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;
    use crate::DEFAULT_MARGIN;

    fn sym(terms: &[(usize, SymCoeff)], bound: usize) -> SymPoly {
        SymPoly::from_terms(terms.iter().cloned(), bound).unwrap()
    }

    fn rationals(f: &ExactField, v: &[ExactCyc]) -> Vec<BigRational> {
        v.iter()
            .map(|c| {
                assert!((1..f.e()).all(|j| c.coeff(j).is_zero()));
                c.coeff(0)
            })
            .collect()
    }

    #[test]
    fn exp_examples() {
        let f = ExactField::new(2, 0);
        let t = vec![f.zero(), f.one()];
        assert_eq!(
            rationals(&f, &exp_series_exact(&f, &t, 3)),
            vec![rational(1, 1), rational(1, 1), rational(1, 2), rational(1, 6)]
        );
        let pi0 = vec![f.zero(), f.pi(0).unwrap().clone()];
        assert_eq!(
            rationals(&f, &exp_series_exact(&f, &pi0, 2)),
            vec![rational(1, 1), rational(-2, 1), rational(2, 1)]
        );
    }

    #[test]
    fn product_law() {
        let f = ExactField::new(3, 1);
        let a = vec![f.zero(), f.pi(1).unwrap().clone(), f.one()];
        let b = vec![f.zero(), f.zero(), f.zero(), f.pi(0).unwrap().clone()];
        let sum: Vec<ExactCyc> = (0..4)
            .map(|i| f.add(a.get(i).unwrap_or(&f.zero()), &b[i]))
            .collect();
        let ea = exp_series_exact(&f, &a, 6);
        let eb = exp_series_exact(&f, &b, 6);
        let es = exp_series_exact(&f, &sum, 6);
        for n in 0..=6 {
            let conv = (0..=n).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&ea[k], &eb[n - k])));
            assert_eq!(conv, es[n]);
        }
    }

    #[test]
    fn exact_field_basics() {
        let f = ExactField::new(3, 1);
        assert_eq!(f.valuation(f.pi(0).unwrap()), Valuation::Finite(3));
        assert_eq!(f.valuation(f.pi(1).unwrap()), Valuation::Finite(1));
        let three = f.rational(&rational(3, 1));
        assert_eq!(f.valuation(&three), Valuation::Finite(6));
        let inv = f.inverse(f.pi(0).unwrap()).unwrap();
        assert_eq!(f.mul(&inv, f.pi(0).unwrap()), f.one());
        assert_eq!(f.valuation(&f.zero()), Valuation::Infinite);
    }

    #[test]
    fn probes() {
        let f = ExactField::new(2, 1);
        let pi0 = f.pi(0).unwrap().clone();
        let probe = probe_integrality(&f, &[f.zero(), pi0.clone()], 6);
        assert!(probe.integral());
        let bad = probe_integrality(&f, &[f.zero(), f.one()], 6);
        assert_eq!(bad.first_failure.map(|(i, _)| i), Some(2));
        let dwork = [f.zero(), f.neg(&pi0), pi0];
        let probe = probe_integrality(&f, &dwork, 6);
        assert!(probe.integral());
        assert!(probe.divisible_from.is_some());
    }

    #[test]
    fn crosscheck_examples() {
        for p in [2u64, 3, 5] {
            for dd in [1, p as usize - 1, p as usize].into_iter().filter(|&d| d >= 1) {
                let prm = Params::new(p, dd, DEFAULT_MARGIN).unwrap();
                let x = sym(&[(1, SymCoeff::pi(0))], dd);
                let cc = crosscheck_pipeline(&x, &prm, 3 * dd).unwrap();
                assert!(cc.soluble);
                assert!(cc.min_precision > 0);
            }
        }
        let prm = Params::new(2, 2, DEFAULT_MARGIN).unwrap();
        let t = sym(&[(1, SymCoeff::one())], 2);
        let cc = crosscheck_pipeline(&t, &prm, 6).unwrap();
        assert!(!cc.soluble);
        assert!(!cc.probe.integral());
    }

    #[test]
    fn exact_residues_agree_with_golden() {
        for p in [2u64, 3, 5] {
            let prm = Params::new(p, p as usize, DEFAULT_MARGIN).unwrap();
            let x = sym(&[(1, SymCoeff::pi(0))], p as usize);
            let e = exact_ehat(&x, &prm).unwrap().unwrap();
            assert_eq!(e[p as usize], 1);
        }
    }
}
