//! Solubility, the residue invariant `ê(T)` and everything read off it:
//! index, L-function degree, equivalence, the comparison criterion and the
//! removal of superfluous factors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::numbertheory::{floor_log, Params, Valuation};
use crate::par::{self, Strategy};
use crate::poly::{is_power_of, split_p_part, InputPoly, SymCoeff, SymPoly};
use crate::series::{self, TildeExp};
use crate::witt::{self, WittFactorization};
use crate::{Error, Result};

/// Truncated series over `F_p` with constant term `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueSeries {
    p: u64,
    coeffs: Vec<u64>,
}

impl ResidueSeries {
    /// Coefficients of degrees `0..=D`, reduced mod `p`; the constant term must be `1`.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.first() != Some(&1) {
            return Err(Error::inconsistency("residue series must start with 1"));
        }
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Ok(ResidueSeries { p, coeffs })
    }

    pub fn one(p: u64, degree_bound: usize) -> Self {
        let mut coeffs = vec![0; degree_bound + 1];
        coeffs[0] = 1;
        ResidueSeries { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs.get(n).copied().unwrap_or(0)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Order of vanishing of `ê - 1` at `0`; `None` when `ê = 1`.
    pub fn vt(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&n| self.coeffs[n] != 0)
    }

    pub fn mul(&self, other: &ResidueSeries) -> ResidueSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        ResidueSeries { p: self.p, coeffs: out }
    }

    /// Multiplicative inverse modulo `T^(D+1)`.
    pub fn inverse(&self) -> ResidueSeries {
        let p = self.p;
        let n = self.coeffs.len();
        let mut inv = vec![0u64; n];
        inv[0] = 1;
        for k in 1..n {
            let s = (1..=k).fold(0, |acc, j| (acc + self.coeffs[j] * inv[k - j]) % p);
            inv[k] = (p - s) % p;
        }
        ResidueSeries { p, coeffs: inv }
    }

    /// Same series at a smaller bound.
    pub fn truncate(&self, degree_bound: usize) -> ResidueSeries {
        ResidueSeries {
            p: self.p,
            coeffs: self.coeffs[..=degree_bound.min(self.degree_bound())].to_vec(),
        }
    }
}

impl fmt::Display for ResidueSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")?;
        for (n, &c) in self.coeffs.iter().enumerate().skip(1) {
            if c == 0 {
                continue;
            }
            let var = if n == 1 { "T".to_string() } else { format!("T^{n}") };
            if c == 1 {
                write!(f, " + {var}")?;
            } else {
                write!(f, " + {c}*{var}")?;
            }
        }
        Ok(())
    }
}

/// First coefficient of `ẽ(T)` that is not integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub degree: usize,
    /// `-v(B_degree)` in `pi_d` units.
    pub deficit: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solubility {
    pub soluble: bool,
    pub witness: Option<Witness>,
}

impl Solubility {
    fn to_error(self) -> Error {
        let w = self.witness.expect("insoluble equations carry a witness");
        Error::Insoluble {
            degree: w.degree,
            deficit: w.deficit,
        }
    }
}

/// `ẽ(T)` together with the decision read off its coefficients.
#[derive(Clone, Debug)]
pub struct Solved {
    pub tilde: TildeExp,
    pub solubility: Solubility,
}

impl Solved {
    /// `ê(T)`, or [`Error::Insoluble`].
    pub fn ehat(&self, params: &Params) -> Result<ResidueSeries> {
        if !self.solubility.soluble {
            return Err(self.solubility.to_error());
        }
        let ring = params.ring();
        let coeffs = self
            .tilde
            .series
            .coeffs
            .iter()
            .map(|c| ring.elem_residue(c))
            .collect::<Result<Vec<_>>>()?;
        ResidueSeries::new(params.p(), coeffs)
    }
}

fn normalized(poly: &InputPoly, params: &Params) -> Result<InputPoly> {
    poly.clone().with_degree_bound(params.degree_bound())
}

/// Runs the pipeline and certifies the sign of every coefficient valuation.
pub fn solve(poly: &InputPoly, params: &Params, strategy: Strategy) -> Result<Solved> {
    let poly = normalized(poly, params)?;
    let tilde = series::tilde_exp(&poly, params, strategy)?;
    let ring = params.ring();
    let mut witness = None;
    for (i, c) in tilde.series.coeffs.iter().enumerate().skip(1) {
        match ring.elem_valuation(c) {
            Valuation::Finite(v) if v < 0 => {
                witness = Some(Witness {
                    degree: i,
                    deficit: v.unsigned_abs(),
                });
                break;
            }
            Valuation::Finite(_) => {}
            Valuation::Infinite if c.value_precision() < 0 => {
                return Err(Error::precision(format!(
                    "sign of v(B_{i}) undecided: known only modulo pi^{}",
                    c.value_precision()
                )))
            }
            Valuation::Infinite => {}
        }
    }
    Ok(Solved {
        tilde,
        solubility: Solubility {
            soluble: witness.is_none(),
            witness,
        },
    })
}

/// Integrality of every coefficient of `ẽ(T)`.
pub fn is_soluble(poly: &InputPoly, params: &Params) -> Result<Solubility> {
    Ok(solve(poly, params, Strategy::default())?.solubility)
}

/// `ê(T)`, the reduction of `ẽ(T)` modulo the maximal ideal.
pub fn residue_invariant(poly: &InputPoly, params: &Params) -> Result<ResidueSeries> {
    solve(poly, params, Strategy::default())?.ehat(params)
}

/// `v_T(ê - 1)`; `None` stands for infinity.
pub fn vt(ehat: &ResidueSeries) -> Option<usize> {
    ehat.vt()
}

/// Components `P_m`, `p` not dividing `m`, with bound `floor(D/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTypDecomp {
    pub components: BTreeMap<usize, InputPoly>,
}

pub fn ptypical_decompose(poly: &InputPoly, params: &Params) -> Result<PTypDecomp> {
    let poly = normalized(poly, params)?;
    Ok(PTypDecomp {
        components: poly.ptypical_components(params.p()),
    })
}

/// `χ = 1 - p^d / v_T(ê - 1)` for a polynomial supported on powers of `p`.
pub fn index_p_typical(poly: &InputPoly, params: &Params) -> Result<i64> {
    poly.check_p_typical(params.p())?;
    let ehat = residue_invariant(poly, params)?;
    let Some(v) = ehat.vt() else {
        return Ok(1);
    };
    if !is_power_of(v as u64, params.p()) {
        return Err(Error::inconsistency(format!(
            "v_T(ê - 1) = {v} is not a power of {}",
            params.p()
        )));
    }
    let pd = params.p().pow(params.d()) as i64;
    Ok(1 - pd / v as i64)
}

/// Contribution of one p-typical component to the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub m: usize,
    pub degree_bound: usize,
    pub ehat: ResidueSeries,
    pub vt: Option<usize>,
    /// `m p^(d_m) / v_T(ê_m - 1)`, zero for a trivial component.
    pub weight: i64,
}

/// Residue invariants of all components, each at its own bound `floor(D/m)`.
pub fn components(poly: &InputPoly, params: &Params) -> Result<Vec<ComponentReport>> {
    let decomp = ptypical_decompose(poly, params)?;
    let parts: Vec<(usize, InputPoly)> = decomp.components.into_iter().collect();
    par::map(Strategy::default(), &parts, |(m, pm)| component(*m, pm, params))
        .into_iter()
        .collect()
}

fn component(m: usize, pm: &InputPoly, params: &Params) -> Result<ComponentReport> {
    let bound = params.degree_bound() / m;
    let sub = params.restrict(bound)?;
    let solved = solve(pm, &sub, Strategy::Sequential)?;
    if !solved.solubility.soluble {
        return Err(Error::inconsistency(format!(
            "component m = {m} is insoluble while the equation is soluble"
        )));
    }
    let ehat = solved.ehat(&sub)?;
    let vt = ehat.vt();
    let weight = match vt {
        None => 0,
        Some(v) => {
            if !is_power_of(v as u64, params.p()) {
                return Err(Error::inconsistency(format!(
                    "v_T(ê_{m} - 1) = {v} is not a power of {}",
                    params.p()
                )));
            }
            (m as i64) * params.p().pow(params.d_i(m)) as i64 / v as i64
        }
    };
    Ok(ComponentReport {
        m,
        degree_bound: bound,
        ehat,
        vt,
        weight,
    })
}

fn index_from_components(parts: &[ComponentReport]) -> i64 {
    1 - parts.iter().map(|c| c.weight).max().unwrap_or(0)
}

/// `χ = 1 - max_m m p^(d_m) / v_T(ê_m - 1)` over nontrivial components.
pub fn index(poly: &InputPoly, params: &Params) -> Result<i64> {
    let solubility = is_soluble(poly, params)?;
    if !solubility.soluble {
        return Err(solubility.to_error());
    }
    Ok(index_from_components(&components(poly, params)?))
}

/// Equality of residue invariants; `false` when exactly one equation is soluble.
pub fn equivalent(p1: &InputPoly, p2: &InputPoly, params: &Params) -> Result<bool> {
    let s1 = solve(p1, params, Strategy::default())?;
    let s2 = solve(p2, params, Strategy::default())?;
    match (s1.solubility.soluble, s2.solubility.soluble) {
        (true, true) => Ok(s1.ehat(params)? == s2.ehat(params)?),
        (false, false) => Err(s1.solubility.to_error()),
        _ => Ok(false),
    }
}

/// A polynomial whose residue invariant is `ehat`, with rational coefficients
/// times uniformizers: `P̃ = log(ê lifted to {0, ..., p-1})`.
pub fn lift_symbolic(ehat: &ResidueSeries, params: &Params) -> Result<SymPoly> {
    let dd = params.degree_bound();
    if ehat.degree_bound() != dd || ehat.p() != params.p() {
        return Err(Error::ContextMismatch);
    }
    let c: Vec<BigRational> = ehat
        .coeffs()
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    // n L_n = n c_n - sum_(k<n) k L_k c_(n-k)
    let mut log = vec![BigRational::zero(); dd + 1];
    for n in 1..=dd {
        let mut acc = &c[n] * BigInt::from(n);
        for k in 1..n {
            acc -= &log[k] * BigInt::from(k) * &c[n - k];
        }
        log[n] = acc / BigInt::from(n);
    }
    let terms = log
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| (i, SymCoeff::rational(q).mul(&SymCoeff::pi(params.d_i(i)))));
    SymPoly::from_terms(terms, dd)
}

pub fn lift(ehat: &ResidueSeries, params: &Params) -> Result<InputPoly> {
    lift_symbolic(ehat, params)?.to_input(params)
}

/// `Δ = 0` for a trivial equation and `-χ` otherwise.
pub fn lfunction_degree(poly: &InputPoly, params: &Params) -> Result<u64> {
    let ehat = residue_invariant(poly, params)?;
    if ehat.is_one() {
        return Ok(0);
    }
    let chi = index(poly, params)?;
    u64::try_from(-chi).map_err(|_| Error::inconsistency(format!("nontrivial equation with χ = {chi}")))
}

/// The three equivalent forms of the comparison criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub iso: bool,
    pub chi: i64,
    /// `D = m p^n` with `p` not dividing `m`.
    pub m: usize,
    pub n: u32,
    /// Coefficient of `T` in `ê_m` is nonzero.
    pub derivative_criterion: bool,
    /// `v(a_D) = v(pi_0)`, evaluated only when `p` does not divide `D`.
    pub innocuous: Option<bool>,
}

/// Whether rational and overconvergent cohomology agree, that is `χ = 1 - D`
/// with `D = deg P`. All criteria are evaluated and must agree.
pub fn comparison_iso(poly: &InputPoly, params: &Params) -> Result<Comparison> {
    let dd = params.degree_bound();
    if poly.degree() != dd {
        return Err(Error::DegreeMismatch {
            degree: poly.degree(),
            bound: dd,
        });
    }
    let chi = index(poly, params)?;
    let parts = components(poly, params)?;
    let (m, pn) = split_p_part(dd, params.p());
    let n = floor_log(params.p(), pn as u64);
    let derivative_criterion = parts
        .iter()
        .find(|c| c.m == m)
        .is_some_and(|c| c.ehat.coeff(1) != 0);
    let iso = chi == 1 - dd as i64;
    let innocuous = (pn == 1).then(|| {
        let ring = params.ring();
        let a = poly.coeff(dd).expect("degree coefficient is present");
        ring.elem_valuation(a) == Valuation::Finite(ring.uniformizer_valuation(0) as i64)
    });
    if derivative_criterion != iso || innocuous.is_some_and(|f| f != iso) {
        return Err(Error::inconsistency(format!(
            "comparison criteria disagree: χ-form {iso}, derivative {derivative_criterion}, innocuous {innocuous:?}"
        )));
    }
    Ok(Comparison {
        iso,
        chi,
        m,
        n,
        derivative_criterion,
        innocuous,
    })
}

/// `VP`: the coefficient of `T^(p^j)` becomes `a_(p^(j+1))`.
pub fn shift_v<C: Clone>(pm: &crate::Poly<C>, p: u64) -> Result<crate::Poly<C>> {
    pm.shift_v(p)
}

/// One removal of a superfluous factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    /// Degree of the polynomial before the step.
    pub degree: usize,
    pub m: usize,
    /// `F = P_m(T^m) - VP_m(T^m)`.
    pub factor: SymPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub reduced: SymPoly,
    pub steps: Vec<ReductionStep>,
    pub comparison: Option<Comparison>,
}

/// Strip trivial factors until the comparison map is an isomorphism.
///
/// Each step checks that the removed factor has `ê_F = 1`; the result is
/// checked to be equivalent to the input and to have the same index.
pub fn reduce_comparison(poly: &SymPoly, params: &Params) -> Result<Reduction> {
    let p = params.p();
    let input = poly.to_input(params)?;
    let chi = index(&input, params)?;
    let mut current = poly.clone();
    let mut steps = Vec::new();
    let comparison = loop {
        if current.is_zero() {
            break None;
        }
        let degree = current.degree();
        let sub = params.restrict(degree)?;
        let cur_input = current.to_input(&sub)?;
        let cmp = comparison_iso(&cur_input, &sub)?;
        if cmp.iso {
            break Some(cmp);
        }
        let sym = current.clone().with_degree_bound(degree)?;
        let pm = sym
            .ptypical_components(p)
            .remove(&cmp.m)
            .ok_or_else(|| Error::inconsistency("top component missing"))?;
        let factor = pm
            .substitute_power(cmp.m)
            .sub(&pm.shift_v(p)?.substitute_power(cmp.m))
            .with_degree_bound(degree)?;
        let ehat_f = residue_invariant(&factor.to_input(&sub)?, &sub)?;
        if !ehat_f.is_one() {
            return Err(Error::inconsistency(format!(
                "superfluous factor {factor} is not trivial: ê_F = {ehat_f}"
            )));
        }
        let next = sym.sub(&factor).with_degree_bound(params.degree_bound())?;
        if !next.is_zero() && next.degree() >= degree {
            return Err(Error::inconsistency("reduction step did not lower the degree"));
        }
        steps.push(ReductionStep { degree, m: cmp.m, factor });
        current = next;
    };
    let reduced = current.with_degree_bound(params.degree_bound())?;
    let reduced_input = reduced.to_input(params)?;
    if !equivalent(&input, &reduced_input, params)? {
        return Err(Error::inconsistency("reduced polynomial is not equivalent to the input"));
    }
    let chi_star = index(&reduced_input, params)?;
    if chi_star != chi {
        return Err(Error::inconsistency(format!(
            "reduction changed the index from {chi} to {chi_star}"
        )));
    }
    Ok(Reduction {
        reduced,
        steps,
        comparison,
    })
}

/// Invariants of a soluble equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolubleReport {
    pub ehat: ResidueSeries,
    pub trivial: bool,
    pub vt: Option<usize>,
    pub chi: i64,
    pub chi_witt: i64,
    pub delta: u64,
    pub comparison: Option<Comparison>,
    pub witt: WittFactorization,
    pub components: Vec<ComponentReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub p: u64,
    pub degree_bound: usize,
    pub d: u32,
    pub precision: u32,
    /// Preparation exponent `k`.
    pub k: i64,
    /// Gauss valuation of the prepared `P̃`; infinite when `P̃ = 0`.
    pub prepared_valuation: Valuation,
    pub ring_mults: u64,
    pub solubility: Solubility,
    pub details: Option<SolubleReport>,
}

/// Everything at once. `χ` is computed by both routes and they must agree;
/// the comparison criterion is evaluated when `D = deg P`.
pub fn analyze(poly: &InputPoly, params: &Params, strategy: Strategy) -> Result<AnalysisReport> {
    let solved = solve(poly, params, strategy)?;
    let prepared_valuation = solved
        .tilde
        .prepared
        .as_ref()
        .map_or(Valuation::Infinite, |pr| series::gauss_valuation(&pr.poly, params));
    let mut report = AnalysisReport {
        p: params.p(),
        degree_bound: params.degree_bound(),
        d: params.d(),
        precision: params.precision(),
        k: solved.tilde.k(),
        prepared_valuation,
        ring_mults: solved.tilde.ring_mults(),
        solubility: solved.solubility,
        details: None,
    };
    if !solved.solubility.soluble {
        return Ok(report);
    }
    let ehat = solved.ehat(params)?;
    let parts = components(poly, params)?;
    let chi = index_from_components(&parts);
    let witt = witt::witt_factorize(&ehat)?;
    let chi_witt = witt.index();
    if chi != chi_witt {
        return Err(Error::inconsistency(format!(
            "index {chi} from components differs from {chi_witt} from Witt coordinates"
        )));
    }
    let trivial = ehat.is_one();
    if trivial != (chi == 1) {
        return Err(Error::inconsistency(format!("ê = {ehat} with χ = {chi}")));
    }
    let comparison = if poly.degree() == params.degree_bound() {
        Some(comparison_iso(poly, params)?)
    } else {
        None
    };
    report.details = Some(SolubleReport {
        vt: ehat.vt(),
        delta: if trivial { 0 } else { chi.unsigned_abs() },
        ehat,
        trivial,
        chi,
        chi_witt,
        comparison,
        witt,
        components: parts,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;
    use crate::DEFAULT_MARGIN;

    fn params(p: u64, dd: usize) -> Params {
        Params::new(p, dd, DEFAULT_MARGIN).unwrap()
    }

    fn sym(terms: &[(usize, SymCoeff)], bound: usize) -> SymPoly {
        SymPoly::from_terms(terms.iter().cloned(), bound).unwrap()
    }

    fn pi0_t(dd: usize) -> SymPoly {
        sym(&[(1, SymCoeff::pi(0))], dd)
    }

    fn series(p: u64, c: &[u64]) -> ResidueSeries {
        ResidueSeries::new(p, c.to_vec()).unwrap()
    }

    #[test]
    fn residue_series_arithmetic() {
        let a = series(3, &[1, 2, 0, 1]);
        assert_eq!(a.mul(&a.inverse()), ResidueSeries::one(3, 3));
        assert_eq!(a.vt(), Some(1));
        assert_eq!(ResidueSeries::one(5, 4).vt(), None);
        assert_eq!(series(2, &[1, 0, 1]).vt(), Some(2));
        assert_eq!(a.to_string(), "1 + 2*T + T^3");
        assert!(ResidueSeries::new(3, vec![0, 1]).is_err());
    }

    #[test]
    fn golden_residue_invariants() {
        for p in [2u64, 3, 5] {
            let prm = params(p, 1);
            let e = residue_invariant(&pi0_t(1).to_input(&prm).unwrap(), &prm).unwrap();
            assert_eq!(e, series(p, &[1, 1]));

            if p >= 3 {
                let dd = p as usize - 1;
                let prm = params(p, dd);
                let e = residue_invariant(&pi0_t(dd).to_input(&prm).unwrap(), &prm).unwrap();
                let mut want = vec![1u64];
                let mut fact = 1u64;
                for i in 1..=dd as u64 {
                    fact = fact * i % p;
                    want.push((1..p).find(|x| x * fact % p == 1).unwrap());
                }
                assert_eq!(e, series(p, &want));
            }

            let dd = p as usize;
            let prm = params(p, dd);
            let e = residue_invariant(&pi0_t(dd).to_input(&prm).unwrap(), &prm).unwrap();
            // (pi_0/pi_1)^p / p! = pi_1^e (1 + ...) / p! reduces to -1/(p-1)! = 1
            let mut want = vec![0u64; dd + 1];
            want[0] = 1;
            want[dd] = 1;
            assert_eq!(e, series(p, &want), "p = {p}");
        }
    }

    #[test]
    fn solubility_examples() {
        let prm = params(2, 1);
        let t = sym(&[(1, SymCoeff::one())], 1).to_input(&prm).unwrap();
        let s = is_soluble(&t, &prm).unwrap();
        assert!(!s.soluble);
        assert_eq!(s.witness.unwrap().degree, 1);
        assert!(is_soluble(&InputPoly::zero(1), &prm).unwrap().soluble);
        assert!(matches!(residue_invariant(&t, &prm), Err(Error::Insoluble { .. })));
    }

    #[test]
    fn p_typical_indices() {
        for p in [2u64, 3, 5] {
            for dd in [1, p as usize] {
                let prm = params(p, dd);
                let x = pi0_t(dd).to_input(&prm).unwrap();
                assert_eq!(index_p_typical(&x, &prm).unwrap(), 0);
                assert_eq!(index(&x, &prm).unwrap(), 0);
            }
            let prm = params(p, 3);
            assert_eq!(index_p_typical(&InputPoly::zero(3), &prm).unwrap(), 1);
        }
        let prm = params(2, 3);
        let x = sym(&[(3, SymCoeff::pi(0))], 3).to_input(&prm).unwrap();
        assert!(matches!(index_p_typical(&x, &prm), Err(Error::NotPTypical(3))));
    }

    #[test]
    fn decomposition() {
        let prm = params(3, 15);
        let x = sym(&[(5, SymCoeff::pi(0)), (15, SymCoeff::pi(0))], 15)
            .to_input(&prm)
            .unwrap();
        let dec = ptypical_decompose(&x, &prm).unwrap();
        assert_eq!(dec.components.len(), 1);
        let p5 = &dec.components[&5];
        assert_eq!(p5.support().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(p5.degree_bound(), 3);
    }

    #[test]
    fn mixed_index_p2() {
        let prm = params(2, 3);
        let x = sym(&[(1, SymCoeff::pi(0)), (3, SymCoeff::pi(0))], 3)
            .to_input(&prm)
            .unwrap();
        assert_eq!(index(&x, &prm).unwrap(), -2);
        assert_eq!(witt::index_via_witt(&x, &prm).unwrap(), -2);
    }

    #[test]
    fn innocuous_monomials() {
        for (p, m) in [(5u64, 2usize), (5, 3), (7, 4), (3, 2)] {
            let prm = params(p, m);
            let x = sym(&[(m, SymCoeff::pi(0))], m).to_input(&prm).unwrap();
            let cmp = comparison_iso(&x, &prm).unwrap();
            assert!(cmp.iso);
            assert_eq!(cmp.chi, 1 - m as i64);
            assert_eq!(cmp.innocuous, Some(true));
        }
    }

    #[test]
    fn comparison_examples() {
        let prm = params(3, 1);
        assert!(comparison_iso(&pi0_t(1).to_input(&prm).unwrap(), &prm).unwrap().iso);
        for p in [2u64, 3] {
            let dd = p as usize;
            let prm = params(p, dd);
            let x = sym(&[(dd, SymCoeff::pi(0))], dd).to_input(&prm).unwrap();
            let cmp = comparison_iso(&x, &prm).unwrap();
            assert!(!cmp.iso);
            assert_eq!(cmp.chi, 0);
            assert_eq!(cmp.innocuous, None);
        }
        let prm = params(2, 3);
        assert!(matches!(
            comparison_iso(&pi0_t(3).to_input(&prm).unwrap(), &prm),
            Err(Error::DegreeMismatch { degree: 1, bound: 3 })
        ));
    }

    #[test]
    fn equivalence_examples() {
        let prm = params(2, 2);
        let x = sym(&[(2, SymCoeff::pi(0))], 2);
        let dwork = sym(&[(1, SymCoeff::pi(0).neg()), (2, SymCoeff::pi(0))], 2);
        let xi = x.to_input(&prm).unwrap();
        assert!(equivalent(&xi, &xi, &prm).unwrap());
        assert!(equivalent(&xi, &x.add(&dwork).to_input(&prm).unwrap(), &prm).unwrap());

        let prm = params(3, 1);
        let a = pi0_t(1);
        let b = a.scale(&SymCoeff::integer(2));
        assert!(!equivalent(&a.to_input(&prm).unwrap(), &b.to_input(&prm).unwrap(), &prm).unwrap());
        let bad = sym(&[(1, SymCoeff::one())], 1).to_input(&prm).unwrap();
        assert!(!equivalent(&a.to_input(&prm).unwrap(), &bad, &prm).unwrap());
        assert!(equivalent(&bad, &bad, &prm).is_err());
    }

    #[test]
    fn lift_examples() {
        let prm = params(2, 1);
        assert!(lift_symbolic(&ResidueSeries::one(2, 1), &prm).unwrap().is_zero());
        assert_eq!(lift_symbolic(&series(2, &[1, 1]), &prm).unwrap().to_string(), "pi(0)*T");
        let prm = params(3, 4);
        let e = series(3, &[1, 2, 0, 1, 1]);
        assert_eq!(residue_invariant(&lift(&e, &prm).unwrap(), &prm).unwrap(), e);
    }

    #[test]
    fn lfunction_degrees() {
        let prm = params(2, 2);
        assert_eq!(lfunction_degree(&InputPoly::zero(2), &prm).unwrap(), 0);
        let x = sym(&[(1, SymCoeff::pi(1)), (2, SymCoeff::pi(0).scale(&rational(1, 2)))], 2);
        assert_eq!(lfunction_degree(&x.to_input(&prm).unwrap(), &prm).unwrap(), 1);
        assert_eq!(lfunction_degree(&pi0_t(2).to_input(&prm).unwrap(), &prm).unwrap(), 0);
    }

    #[test]
    fn shift_examples() {
        let a = sym(&[(1, SymCoeff::integer(1))], 1);
        assert!(shift_v(&a, 2).unwrap().is_zero());
        let b = sym(&[(1, SymCoeff::integer(1)), (3, SymCoeff::integer(2))], 3);
        assert_eq!(shift_v(&b, 3).unwrap().to_string(), "2*T");
        let c = sym(
            &[(1, SymCoeff::integer(1)), (2, SymCoeff::integer(2)), (4, SymCoeff::integer(3))],
            4,
        );
        assert_eq!(shift_v(&shift_v(&c, 2).unwrap(), 2).unwrap().to_string(), "3*T");
        assert!(shift_v(&sym(&[(3, SymCoeff::one())], 3), 2).is_err());
    }

    #[test]
    fn dwork_reduction() {
        let prm = params(2, 2);
        let x = sym(&[(2, SymCoeff::pi(0))], 2);
        let red = reduce_comparison(&x, &prm).unwrap();
        assert_eq!(red.reduced.to_string(), "pi(0)*T");
        assert_eq!(red.steps.len(), 1);
        assert_eq!(red.steps[0].factor.to_string(), "-pi(0)*T + pi(0)*T^2");
        assert!(red.comparison.unwrap().iso);

        let iso = reduce_comparison(&pi0_t(2).with_degree_bound(2).unwrap(), &prm).unwrap();
        assert!(iso.steps.is_empty());
    }

    #[test]
    fn analysis_report() {
        let prm = params(2, 3);
        let x = sym(&[(1, SymCoeff::pi(0)), (3, SymCoeff::pi(0))], 3)
            .to_input(&prm)
            .unwrap();
        let r = analyze(&x, &prm, Strategy::default()).unwrap();
        let det = r.details.unwrap();
        assert_eq!((det.chi, det.chi_witt, det.delta), (-2, -2, 2));
        assert!(det.comparison.unwrap().iso);
        assert_eq!(det.components.len(), 2);
    }
}
