//! Polynomials `P(T) = sum a_i T^i` without constant term.
//!
//! [`SymPoly`] keeps coefficients exactly, as Laurent polynomials in the
//! uniformizers `pi(0), ..., pi(d)` over `Q`; it is what the parser produces
//! and what the exact oracle consumes. [`InputPoly`] is its image in the
//! working ring at a given precision.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numbertheory::{CycElem, Params};
use crate::{Error, Result};

/// Sparse polynomial in `T`, support in `1..=degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<C> {
    coeffs: BTreeMap<usize, C>,
    degree_bound: usize,
}

pub type InputPoly = Poly<CycElem>;
pub type SymPoly = Poly<SymCoeff>;

impl<C> Poly<C> {
    pub fn zero(degree_bound: usize) -> Self {
        Poly {
            coeffs: BTreeMap::new(),
            degree_bound,
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, C)>, degree_bound: usize) -> Result<Self> {
        let mut poly = Self::zero(degree_bound);
        for (i, c) in terms {
            if i == 0 {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: "constant term present".into(),
                });
            }
            if i > degree_bound {
                return Err(Error::DegreeExceedsBound {
                    degree: i,
                    bound: degree_bound,
                });
            }
            poly.coeffs.insert(i, c);
        }
        Ok(poly)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Actual degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(&i)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (usize, &C)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn with_degree_bound(mut self, degree_bound: usize) -> Result<Self> {
        if self.degree() > degree_bound {
            return Err(Error::DegreeExceedsBound {
                degree: self.degree(),
                bound: degree_bound,
            });
        }
        self.degree_bound = degree_bound;
        Ok(self)
    }

    pub fn map<D>(&self, mut f: impl FnMut(usize, &C) -> D) -> Poly<D> {
        Poly {
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, f(i, c))).collect(),
            degree_bound: self.degree_bound,
        }
    }

    pub fn try_map<D>(&self, mut f: impl FnMut(usize, &C) -> Result<D>) -> Result<Poly<D>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&i, c)| Ok((i, f(i, c)?)))
            .collect::<Result<_>>()?;
        Ok(Poly {
            coeffs,
            degree_bound: self.degree_bound,
        })
    }
}

impl<C: Clone> Poly<C> {
    /// Support contained in `{p^j : j >= 0}`.
    pub fn check_p_typical(&self, p: u64) -> Result<()> {
        match self.support().find(|&i| !is_power_of(i as u64, p)) {
            Some(i) => Err(Error::NotPTypical(i)),
            None => Ok(()),
        }
    }

    /// `P(T) = sum_m P_m(T^m)` over `m` prime to `p`; `P_m` carries the
    /// coefficient `a_(m p^j)` at `T^(p^j)` and has bound `floor(D/m)`.
    pub fn ptypical_components(&self, p: u64) -> BTreeMap<usize, Poly<C>> {
        let mut out: BTreeMap<usize, Poly<C>> = BTreeMap::new();
        for (i, c) in self.terms() {
            let (m, pj) = split_p_part(i, p);
            out.entry(m)
                .or_insert_with(|| Poly::zero(self.degree_bound / m))
                .coeffs
                .insert(pj, c.clone());
        }
        out
    }

    /// The shift `V`: coefficient of `T^(p^j)` becomes `a_(p^(j+1))`.
    pub fn shift_v(&self, p: u64) -> Result<Poly<C>> {
        self.check_p_typical(p)?;
        let p = p as usize;
        let coeffs = self
            .terms()
            .filter(|&(i, _)| i >= p)
            .map(|(i, c)| (i / p, c.clone()))
            .collect();
        Ok(Poly {
            coeffs,
            degree_bound: (self.degree_bound / p).max(1),
        })
    }

    /// `P(T^m)` with degree bound `m D`.
    pub fn substitute_power(&self, m: usize) -> Poly<C> {
        Poly {
            coeffs: self.terms().map(|(i, c)| (i * m, c.clone())).collect(),
            degree_bound: self.degree_bound * m,
        }
    }
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// `n = m p^j` with `p` not dividing `m`; returns `(m, p^j)`.
pub(crate) fn split_p_part(n: usize, p: u64) -> (usize, usize) {
    let p = p as usize;
    let (mut m, mut pj) = (n, 1);
    while m % p == 0 {
        m /= p;
        pj *= p;
    }
    (m, pj)
}

// ---------------------------------------------------------------------------

/// Exponents of `pi(0), pi(1), ...`, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn pi(i: u32) -> Self {
        let mut v = vec![0; i as usize + 1];
        v[i as usize] = 1;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn trimmed(mut v: Vec<i32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        Monomial::trimmed(v)
    }

    fn pow(&self, k: i64) -> Monomial {
        Monomial::trimmed(self.0.iter().map(|&x| x * k as i32).collect())
    }
}

/// Exact coefficient: a `Q`-linear combination of monomials in the uniformizers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymCoeff {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SymCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        let mut s = Self::zero();
        if !q.is_zero() {
            s.terms.insert(Monomial::default(), q);
        }
        s
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn pi(i: u32) -> Self {
        let mut s = Self::zero();
        s.terms.insert(Monomial::pi(i), BigRational::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The rational value when no uniformizer occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    /// Largest `i` such that `pi(i)` occurs.
    pub fn max_pi_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter(|m| !m.is_one())
            .map(|m| m.0.len() as u32 - 1)
            .max()
    }

    fn insert_add(&mut self, m: Monomial, q: BigRational) {
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &SymCoeff) -> SymCoeff {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.insert_add(m.clone(), q.clone());
        }
        out
    }

    pub fn neg(&self) -> SymCoeff {
        SymCoeff {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }

    pub fn sub(&self, other: &SymCoeff) -> SymCoeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SymCoeff) -> SymCoeff {
        let mut out = SymCoeff::zero();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                out.insert_add(m1.mul(m2), q1 * q2);
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> SymCoeff {
        self.mul(&SymCoeff::rational(q.clone()))
    }

    /// Integer power; negative exponents only for a single monomial.
    pub fn pow(&self, k: i64) -> Option<SymCoeff> {
        if k >= 0 {
            let mut acc = SymCoeff::one();
            for _ in 0..k {
                acc = acc.mul(self);
            }
            return Some(acc);
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (m, q) = self.terms.iter().next().unwrap();
        let mut out = SymCoeff::zero();
        out.terms.insert(m.pow(k), q.recip().pow(k.unsigned_abs() as i32));
        Some(out)
    }

    /// Value in the working ring.
    pub fn eval(&self, params: &Params) -> Result<CycElem> {
        let ring = params.ring();
        let mut acc = ring.elem_zero();
        for (m, q) in &self.terms {
            let mut term = ring.elem_from_rational(q);
            for (i, &k) in m.0.iter().enumerate() {
                let i = i as u32;
                let base = if k >= 0 {
                    ring.elem_from_int(ring.uniformizer(i)?.clone())
                } else {
                    ring.uniformizer_inverse(i)?.clone()
                };
                for _ in 0..k.unsigned_abs() {
                    term = ring.elem_mul(&term, &base);
                }
            }
            acc = ring.elem_add(&acc, &term);
        }
        Ok(acc)
    }

    /// Single term (no parentheses needed when used as a factor).
    fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.0.iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("pi({i})")
            } else {
                format!("pi({i})^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn fmt_term(m: &Monomial, q: &BigRational) -> String {
    let q = q.abs();
    if m.is_one() {
        return q.to_string();
    }
    if q.is_one() {
        fmt_monomial(m)
    } else {
        format!("{q}*{}", fmt_monomial(m))
    }
}

impl fmt::Display for SymCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, q)) in self.terms.iter().enumerate() {
            let t = fmt_term(m, q);
            match (k, q.is_negative()) {
                (0, true) => write!(f, "-{t}")?,
                (0, false) => f.write_str(&t)?,
                (_, true) => write!(f, " - {t}")?,
                (_, false) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

impl SymPoly {
    pub fn add(&self, other: &SymPoly) -> SymPoly {
        let mut coeffs = self.coeffs.clone();
        for (i, c) in other.terms() {
            let sum = coeffs.get(&i).map_or_else(|| c.clone(), |a| a.add(c));
            if sum.is_zero() {
                coeffs.remove(&i);
            } else {
                coeffs.insert(i, sum);
            }
        }
        Poly {
            coeffs,
            degree_bound: self.degree_bound.max(other.degree_bound),
        }
    }

    pub fn neg(&self) -> SymPoly {
        self.map(|_, c| c.neg())
    }

    pub fn sub(&self, other: &SymPoly) -> SymPoly {
        self.add(&other.neg())
    }

    /// `P(u T)`.
    pub fn scale_variable(&self, u: &BigRational) -> SymPoly {
        self.map(|i, c| c.scale(&u.pow(i as i32)))
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: &SymCoeff) -> SymPoly {
        let coeffs = self
            .terms()
            .map(|(i, a)| (i, a.mul(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Poly {
            coeffs,
            degree_bound: self.degree_bound,
        }
    }

    pub fn max_pi_index(&self) -> Option<u32> {
        self.terms().filter_map(|(_, c)| c.max_pi_index()).max()
    }

    /// Image in the working ring of `params`; the degree bound becomes
    /// `params.degree_bound()`.
    pub fn to_input(&self, params: &Params) -> Result<InputPoly> {
        let poly = self.try_map(|_, c| c.eval(params))?;
        poly.with_degree_bound(params.degree_bound())
    }

    /// `sum_i c_i T^i` with rational coefficients.
    pub fn from_rationals(coeffs: &[(usize, BigRational)], degree_bound: usize) -> Result<SymPoly> {
        Self::from_terms(
            coeffs
                .iter()
                .filter(|(_, q)| !q.is_zero())
                .map(|(i, q)| (*i, SymCoeff::rational(q.clone()))),
            degree_bound,
        )
    }

    pub fn monomial(c: SymCoeff, degree: usize, degree_bound: usize) -> Result<SymPoly> {
        Self::from_terms((!c.is_zero()).then_some((degree, c)), degree_bound)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.terms().enumerate() {
            let var = if i == 1 { "T".to_string() } else { format!("T^{i}") };
            let (negative, body) = if c.is_single_term() {
                let (m, q) = c.terms.iter().next().unwrap();
                let body = if m.is_one() && q.abs().is_one() {
                    var
                } else {
                    format!("{}*{var}", fmt_term(m, q))
                };
                (q.is_negative(), body)
            } else {
                (false, format!("({c})*{var}"))
            };
            match (k, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(terms: &[(usize, SymCoeff)], bound: usize) -> SymPoly {
        SymPoly::from_terms(terms.iter().cloned(), bound).unwrap()
    }

    #[test]
    fn ptypical_decomposition_p2() {
        let a: Vec<SymCoeff> = (0..5).map(SymCoeff::integer).collect();
        let p = sym(&[(1, a[1].clone()), (2, a[2].clone()), (3, a[3].clone()), (4, a[4].clone())], 4);
        let comps = p.ptypical_components(2);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&1], sym(&[(1, a[1].clone()), (2, a[2].clone()), (4, a[4].clone())], 4));
        assert_eq!(comps[&3], sym(&[(1, a[3].clone())], 1));
    }

    #[test]
    fn ptypical_decomposition_p3() {
        let p = sym(&[(5, SymCoeff::integer(7)), (15, SymCoeff::integer(11))], 15);
        let comps = p.ptypical_components(3);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&5], sym(&[(1, SymCoeff::integer(7)), (3, SymCoeff::integer(11))], 3));
    }

    #[test]
    fn ptypical_input_single_component() {
        let p = sym(&[(1, SymCoeff::pi(0)), (3, SymCoeff::integer(2)), (9, SymCoeff::one())], 9);
        let comps = p.ptypical_components(3);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&1], p);
    }

    #[test]
    fn decomposition_reassembles() {
        let p = sym(
            &(1..=12).map(|i| (i, SymCoeff::integer(i as i64))).collect::<Vec<_>>(),
            12,
        );
        for prime in [2, 3, 5] {
            let mut sum = SymPoly::zero(12);
            for (m, c) in p.ptypical_components(prime) {
                c.check_p_typical(prime).unwrap();
                assert_eq!(c.degree_bound(), 12 / m);
                sum = sum.add(&c.substitute_power(m));
            }
            assert_eq!(sum.with_degree_bound(12).unwrap(), p);
        }
    }

    #[test]
    fn shift_v() {
        let a1 = SymCoeff::integer(1);
        let ap = SymCoeff::integer(2);
        let app = SymCoeff::integer(3);
        let p = 3;
        assert!(sym(&[(1, a1.clone())], 1).shift_v(p).unwrap().is_zero());
        let vp = sym(&[(1, a1.clone()), (3, ap.clone())], 3).shift_v(p).unwrap();
        assert_eq!(vp, sym(&[(1, ap.clone())], 1));
        let vv = sym(&[(1, a1), (3, ap), (9, app.clone())], 9)
            .shift_v(p)
            .unwrap()
            .shift_v(p)
            .unwrap();
        assert_eq!(vv, sym(&[(1, app)], 1));
        assert_eq!(
            sym(&[(2, SymCoeff::one())], 2).shift_v(3),
            Err(Error::NotPTypical(2))
        );
    }

    #[test]
    fn display_forms() {
        let f = sym(&[(1, SymCoeff::pi(0)), (2, SymCoeff::pi(0).neg())], 2);
        assert_eq!(f.to_string(), "pi(0)*T - pi(0)*T^2");
        let g = sym(&[(2, SymCoeff::rational(rational(1, 3))), (3, SymCoeff::pi(1).add(&SymCoeff::one()))], 3);
        assert_eq!(g.to_string(), "1/3*T^2 + (1 + pi(1))*T^3");
        let h = sym(&[(1, SymCoeff::integer(-1)), (4, SymCoeff::pi(1).pow(-2).unwrap().scale(&rational(-2, 5)))], 4);
        assert_eq!(h.to_string(), "-T - 2/5*pi(1)^-2*T^4");
        assert_eq!(SymPoly::zero(3).to_string(), "0");
    }

    #[test]
    fn symbolic_arithmetic() {
        let a = SymCoeff::pi(0).add(&SymCoeff::one());
        let sq = a.mul(&a);
        assert_eq!(sq.to_string(), "1 + 2*pi(0) + pi(0)^2");
        assert!(a.sub(&a).is_zero());
        assert!(a.pow(-1).is_none());
        assert_eq!(SymCoeff::pi(2).max_pi_index(), Some(2));
        assert_eq!(SymCoeff::integer(5).max_pi_index(), None);
    }

    #[test]
    fn rejects_constant_and_excess_degree() {
        assert!(SymPoly::from_terms([(0, SymCoeff::one())], 2).is_err());
        assert_eq!(
            SymPoly::from_terms([(3, SymCoeff::one())], 2),
            Err(Error::DegreeExceedsBound { degree: 3, bound: 2 })
        );
    }

    #[test]
    fn eval_pi0_p2() {
        let prm = Params::new(2, 2, 4).unwrap();
        let v = SymCoeff::pi(0).eval(&prm).unwrap();
        let ring = prm.ring();
        assert!(ring.elem_eq(&v, &ring.elem_from_int(ring.from_i64(-2))));
        let inv = SymCoeff::pi(1).pow(-1).unwrap().eval(&prm).unwrap();
        assert_eq!(ring.elem_valuation(&inv), crate::Valuation::Finite(-1));
    }
}
