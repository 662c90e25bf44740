use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{vp_bigint, Valuation};
use crate::{Error, Result};

/// `E(x) = Phi_{p^(d+1)}(1 + x)`, coefficients from degree 0 to `e = p^d (p-1)`.
pub fn eisenstein_poly(p: u64, d: u32) -> Vec<BigInt> {
    let pd = p.pow(d) as usize;
    let e = pd * (p as usize - 1);
    let mut coeffs = vec![BigInt::zero(); e + 1];
    // Phi_{p^(d+1)}(y) = sum_{k<p} y^(k p^d)
    for k in 0..p as usize {
        let n = k * pd;
        let mut binom = BigInt::one();
        for (j, c) in coeffs.iter_mut().enumerate().take(n + 1) {
            *c += &binom;
            binom = binom * (n - j) / (j + 1);
        }
    }
    coeffs
}

/// Integer of `Q_p(zeta)` modulo `p^A`, in the `pi_d`-power basis.
///
/// `prec` is the absolute `pi_d`-adic precision: the element is known
/// modulo `pi_d^prec`, with `prec <= A e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycInt {
    pub(crate) coeffs: Vec<BigInt>,
    pub(crate) prec: u64,
}

impl CycInt {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }
}

/// Field element `num * pi_d^(-shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycElem {
    pub(crate) num: CycInt,
    pub(crate) shift: u64,
}

impl CycElem {
    pub fn num(&self) -> &CycInt {
        &self.num
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    /// The element is known modulo `pi_d^value_precision()`.
    pub fn value_precision(&self) -> i64 {
        self.num.prec as i64 - self.shift as i64
    }
}

/// `Z[x] / (E(x), p^A)` together with the uniformizers `pi_0, ..., pi_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRing {
    p: u64,
    d: u32,
    e: usize,
    a: u32,
    p_big: BigInt,
    modulus: BigInt,
    eisenstein: Vec<BigInt>,
    uniformizers: Vec<CycInt>,
    uniformizer_inverses: Vec<CycElem>,
    prec_floor: u64,
}

impl CycRing {
    pub fn new(p: u64, d: u32, a: u32) -> Self {
        let eisenstein = eisenstein_poly(p, d);
        let e = eisenstein.len() - 1;
        let p_big = BigInt::from(p);
        let modulus = num_traits::pow(p_big.clone(), a as usize);
        let mut ring = CycRing {
            p,
            d,
            e,
            a,
            p_big,
            modulus,
            eisenstein,
            uniformizers: Vec::new(),
            uniformizer_inverses: Vec::new(),
            prec_floor: 0,
        };
        // pi_i = (1 + pi_d)^(p^(d-i)) - 1, built from pi_d upward by p-th powers
        let one = ring.one();
        let mut zeta = ring.add(&one, &ring.pi_d());
        let mut pis = vec![ring.sub(&zeta, &one)];
        for _ in 0..d {
            zeta = ring.pow(&zeta, p);
            pis.push(ring.sub(&zeta, &one));
        }
        pis.reverse();
        let invs = pis
            .iter()
            .map(|pi| ring.elem_inverse(&ring.elem_from_int(pi.clone())))
            .collect::<Result<Vec<_>>>()
            .expect("uniformizers are nonzero");
        ring.uniformizers = pis;
        ring.uniformizer_inverses = invs;
        ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn precision(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn eisenstein(&self) -> &[BigInt] {
        &self.eisenstein
    }

    /// Maximal `pi_d`-adic precision, `A e`.
    pub fn cap(&self) -> u64 {
        self.a as u64 * self.e as u64
    }

    /// Results of [`CycRing::div_by_pi`] below this precision are rejected.
    pub fn set_precision_floor(&mut self, floor: u64) {
        self.prec_floor = floor;
    }

    pub fn zero(&self) -> CycInt {
        CycInt {
            coeffs: vec![BigInt::zero(); self.e],
            prec: self.cap(),
        }
    }

    pub fn one(&self) -> CycInt {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_bigint(&self, n: &BigInt) -> CycInt {
        let mut x = self.zero();
        x.coeffs[0] = n.mod_floor(&self.modulus);
        x
    }

    pub fn from_i64(&self, n: i64) -> CycInt {
        self.from_bigint(&BigInt::from(n))
    }

    /// Element from explicit basis coefficients (exact, full precision).
    pub fn from_coeffs(&self, coeffs: &[BigInt]) -> Result<CycInt> {
        if coeffs.len() > self.e {
            return Err(Error::ContextMismatch);
        }
        let mut x = self.zero();
        for (dst, c) in x.coeffs.iter_mut().zip(coeffs) {
            *dst = c.mod_floor(&self.modulus);
        }
        Ok(x)
    }

    pub fn check(&self, x: &CycInt) -> Result<()> {
        if x.coeffs.len() != self.e || x.prec > self.cap() {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// `pi_d` itself.
    pub fn pi_d(&self) -> CycInt {
        if self.e == 1 {
            // x = -p when E(x) = x + p
            return self.from_bigint(&-&self.p_big);
        }
        let mut x = self.zero();
        x.coeffs[1] = BigInt::one();
        x
    }

    /// `pi_i = zeta^(p^(d-i)) - 1`.
    pub fn uniformizer(&self, i: u32) -> Result<&CycInt> {
        self.uniformizers
            .get(i as usize)
            .ok_or(Error::IndexOutOfRange { index: i, max: self.d })
    }

    /// `1 / pi_i` as a field element.
    pub fn uniformizer_inverse(&self, i: u32) -> Result<&CycElem> {
        self.uniformizer_inverses
            .get(i as usize)
            .ok_or(Error::IndexOutOfRange { index: i, max: self.d })
    }

    /// `v(pi_i) = p^(d-i)`.
    pub fn uniformizer_valuation(&self, i: u32) -> u64 {
        self.p.pow(self.d - i)
    }

    fn reduce_in_place(&self, c: &mut BigInt) {
        if c.is_negative() || *c >= self.modulus {
            *c = c.mod_floor(&self.modulus);
        }
    }

    pub fn add(&self, x: &CycInt, y: &CycInt) -> CycInt {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(a, b)| {
                let mut s = a + b;
                self.reduce_in_place(&mut s);
                s
            })
            .collect();
        CycInt {
            coeffs,
            prec: x.prec.min(y.prec),
        }
    }

    pub fn neg(&self, x: &CycInt) -> CycInt {
        let coeffs = x
            .coeffs
            .iter()
            .map(|a| {
                let mut s = -a;
                self.reduce_in_place(&mut s);
                s
            })
            .collect();
        CycInt {
            coeffs,
            prec: x.prec,
        }
    }

    pub fn sub(&self, x: &CycInt, y: &CycInt) -> CycInt {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(a, b)| {
                let mut s = a - b;
                self.reduce_in_place(&mut s);
                s
            })
            .collect();
        CycInt {
            coeffs,
            prec: x.prec.min(y.prec),
        }
    }

    /// Schoolbook product followed by reduction modulo `E` and `p^A`.
    fn mul_raw(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let e = self.e;
        let mut prod = vec![BigInt::zero(); 2 * e - 1];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        for k in (e..2 * e - 1).rev() {
            let mut c = std::mem::take(&mut prod[k]);
            self.reduce_in_place(&mut c);
            if c.is_zero() {
                continue;
            }
            for (j, ej) in self.eisenstein[..e].iter().enumerate() {
                if !ej.is_zero() {
                    prod[k - e + j] -= &c * ej;
                }
            }
        }
        prod.truncate(e);
        for c in prod.iter_mut() {
            self.reduce_in_place(c);
        }
        prod
    }

    fn capped(&self, x: &CycInt) -> u64 {
        match self.valuation(x) {
            Valuation::Finite(v) => v as u64,
            Valuation::Infinite => x.prec,
        }
    }

    pub fn mul(&self, x: &CycInt, y: &CycInt) -> CycInt {
        let prec = (x.prec + self.capped(y))
            .min(y.prec + self.capped(x))
            .min(self.cap());
        CycInt {
            coeffs: self.mul_raw(&x.coeffs, &y.coeffs),
            prec,
        }
    }

    pub fn pow(&self, x: &CycInt, mut n: u64) -> CycInt {
        let mut acc = self.one();
        let mut base = x.clone();
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

    /// Multiplication by an exact rational integer.
    pub fn scale(&self, x: &CycInt, n: &BigInt) -> CycInt {
        let gain = if n.is_zero() {
            self.cap()
        } else {
            vp_bigint(n, &self.p_big).saturating_mul(self.e as u64)
        };
        let coeffs = x
            .coeffs
            .iter()
            .map(|a| {
                let mut s = a * n;
                self.reduce_in_place(&mut s);
                s
            })
            .collect();
        CycInt {
            coeffs,
            prec: x.prec.saturating_add(gain).min(self.cap()),
        }
    }

    /// `x * pi_d^m`.
    pub fn mul_pi_pow(&self, x: &CycInt, m: u64) -> CycInt {
        let e = self.e;
        let mut c = x.coeffs.clone();
        for _ in 0..m {
            let top = c.pop().expect("nonempty basis");
            c.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (j, ej) in self.eisenstein[..e].iter().enumerate() {
                    c[j] -= &top * ej;
                    self.reduce_in_place(&mut c[j]);
                }
            }
        }
        CycInt {
            coeffs: c,
            prec: x.prec.saturating_add(m).min(self.cap()),
        }
    }

    /// Valuation of the stored representative, ignoring precision.
    fn representative_valuation(&self, coeffs: &[BigInt]) -> Option<u64> {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| self.e as u64 * vp_bigint(c, &self.p_big) + j as u64)
            .min()
    }

    /// `min_j (e v_p(c_j) + j)`, or [`Valuation::Infinite`] when the element is
    /// zero at its precision.
    pub fn valuation(&self, x: &CycInt) -> Valuation {
        match self.representative_valuation(&x.coeffs) {
            Some(v) if v < x.prec => Valuation::Finite(v as i64),
            _ => Valuation::Infinite,
        }
    }

    pub fn is_zero(&self, x: &CycInt) -> bool {
        self.valuation(x).is_infinite()
    }

    /// Residue class modulo `pi_d`, an element of `F_p`.
    pub fn residue(&self, x: &CycInt) -> Result<u64> {
        if x.prec < 1 {
            return Err(Error::precision("residue of an element with no known digit"));
        }
        Ok(x.coeffs[0]
            .mod_floor(&self.p_big)
            .to_u64()
            .expect("residue fits"))
    }

    /// Inverse of a unit by Newton iteration `y <- y (2 - x y)`, starting
    /// from the inverse of the residue.
    pub fn unit_inverse(&self, x: &CycInt) -> Result<CycInt> {
        if self.valuation(x) != Valuation::Finite(0) {
            return Err(Error::NonUnit);
        }
        let c0 = x.coeffs[0].mod_floor(&self.p_big);
        let inv0 = c0
            .modinv(&self.p_big)
            .expect("unit residue is invertible");
        let mut y = self.from_bigint(&inv0).coeffs;
        let two = self.from_i64(2).coeffs;
        let mut known = 1u64;
        while known < self.cap() {
            let xy = self.mul_raw(&x.coeffs, &y);
            let correction: Vec<BigInt> = two
                .iter()
                .zip(&xy)
                .map(|(a, b)| (a - b).mod_floor(&self.modulus))
                .collect();
            y = self.mul_raw(&y, &correction);
            known *= 2;
        }
        Ok(CycInt {
            coeffs: y,
            prec: x.prec,
        })
    }

    /// One exact division by `pi_d`, using
    /// `p = -pi_d (pi_d^(e-1) + E_(e-1) pi_d^(e-2) + ... + E_1)`.
    fn div_pi_once(&self, c: &mut Vec<BigInt>) {
        let (q, r) = c[0].div_rem(&self.p_big);
        debug_assert!(r.is_zero(), "division by pi_d of a unit");
        c.remove(0);
        c.push(BigInt::zero());
        for (j, cj) in c.iter_mut().enumerate() {
            *cj -= &q * &self.eisenstein[j + 1];
            self.reduce_in_place(cj);
        }
    }

    /// Exact quotient `x / pi_d^m`; each step consumes one digit of precision.
    pub fn div_by_pi(&self, x: &CycInt, m: u64) -> Result<CycInt> {
        if m == 0 {
            return Ok(x.clone());
        }
        match self.valuation(x) {
            Valuation::Finite(v) if (v as u64) < m => {
                return Err(Error::ValuationTooSmall { need: m, have: v })
            }
            Valuation::Infinite if x.prec < m => {
                return Err(Error::precision(format!(
                    "dividing by pi^{m} an element known to pi^{}",
                    x.prec
                )))
            }
            _ => {}
        }
        let prec = x.prec - m;
        if prec < self.prec_floor {
            return Err(Error::precision(format!(
                "result precision {prec} below the floor {}",
                self.prec_floor
            )));
        }
        Ok(self.div_pi_unchecked(x, m, prec))
    }

    fn div_pi_unchecked(&self, x: &CycInt, m: u64, prec: u64) -> CycInt {
        let mut c = x.coeffs.clone();
        for _ in 0..m {
            self.div_pi_once(&mut c);
        }
        CycInt { coeffs: c, prec }
    }

    /// Lower the precision of `x` to at most `prec`.
    pub fn truncate_precision(&self, x: &CycInt, prec: u64) -> CycInt {
        CycInt {
            coeffs: x.coeffs.clone(),
            prec: x.prec.min(prec),
        }
    }

    // ---- field elements ------------------------------------------------

    pub fn elem_from_int(&self, x: CycInt) -> CycElem {
        CycElem { num: x, shift: 0 }
    }

    pub fn elem_zero(&self) -> CycElem {
        self.elem_from_int(self.zero())
    }

    pub fn elem_one(&self) -> CycElem {
        self.elem_from_int(self.one())
    }

    pub fn elem_from_rational(&self, q: &BigRational) -> CycElem {
        if q.is_zero() {
            return self.elem_zero();
        }
        let (num, den) = (q.numer(), q.denom());
        let vn = vp_bigint(num, &self.p_big);
        let vd = vp_bigint(den, &self.p_big);
        let pn = num_traits::pow(self.p_big.clone(), vn as usize);
        let pd = num_traits::pow(self.p_big.clone(), vd as usize);
        let unit_den = (den / pd).mod_floor(&self.modulus);
        let inv = unit_den
            .modinv(&self.modulus)
            .expect("p-free denominator is invertible");
        let unit = (num / pn * inv).mod_floor(&self.modulus);
        let unit = self.from_bigint(&unit);
        if vn >= vd {
            let pv = num_traits::pow(self.p_big.clone(), (vn - vd) as usize);
            self.elem_from_int(self.scale(&unit, &pv))
        } else {
            let pv = num_traits::pow(self.p_big.clone(), (vd - vn) as usize);
            let inv = self
                .elem_inverse(&self.elem_from_int(self.from_bigint(&pv)))
                .expect("powers of p are invertible");
            self.elem_mul(&self.elem_from_int(unit), &inv)
        }
    }

    /// Remove as many factors `pi_d^(-1)` as the numerator allows.
    pub fn canonical(&self, x: &CycElem) -> CycElem {
        if x.shift == 0 {
            return x.clone();
        }
        let t = x.shift.min(self.capped(&x.num));
        if t == 0 {
            return x.clone();
        }
        CycElem {
            num: self.div_pi_unchecked(&x.num, t, x.num.prec - t),
            shift: x.shift - t,
        }
    }

    pub fn elem_valuation(&self, x: &CycElem) -> Valuation {
        match self.valuation(&x.num) {
            Valuation::Finite(v) => Valuation::Finite(v - x.shift as i64),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// `x * pi_d^k` for any integer `k`.
    pub fn elem_mul_pi_pow(&self, x: &CycElem, k: i64) -> CycElem {
        if k >= 0 {
            let k = k as u64;
            if k <= x.shift {
                CycElem {
                    num: x.num.clone(),
                    shift: x.shift - k,
                }
            } else {
                CycElem {
                    num: self.mul_pi_pow(&x.num, k - x.shift),
                    shift: 0,
                }
            }
        } else {
            CycElem {
                num: x.num.clone(),
                shift: x.shift + k.unsigned_abs(),
            }
        }
    }

    fn align(&self, x: &CycElem, y: &CycElem) -> (CycInt, CycInt, u64) {
        let s = x.shift.max(y.shift);
        let xa = self.mul_pi_pow(&x.num, s - x.shift);
        let ya = self.mul_pi_pow(&y.num, s - y.shift);
        (xa, ya, s)
    }

    pub fn elem_add(&self, x: &CycElem, y: &CycElem) -> CycElem {
        let (a, b, shift) = self.align(x, y);
        self.canonical(&CycElem {
            num: self.add(&a, &b),
            shift,
        })
    }

    pub fn elem_sub(&self, x: &CycElem, y: &CycElem) -> CycElem {
        let (a, b, shift) = self.align(x, y);
        self.canonical(&CycElem {
            num: self.sub(&a, &b),
            shift,
        })
    }

    pub fn elem_neg(&self, x: &CycElem) -> CycElem {
        CycElem {
            num: self.neg(&x.num),
            shift: x.shift,
        }
    }

    pub fn elem_mul(&self, x: &CycElem, y: &CycElem) -> CycElem {
        self.canonical(&CycElem {
            num: self.mul(&x.num, &y.num),
            shift: x.shift + y.shift,
        })
    }

    pub fn elem_scale(&self, x: &CycElem, n: &BigInt) -> CycElem {
        self.canonical(&CycElem {
            num: self.scale(&x.num, n),
            shift: x.shift,
        })
    }

    pub fn elem_inverse(&self, x: &CycElem) -> Result<CycElem> {
        let x = self.canonical(x);
        let v = match self.valuation(&x.num) {
            Valuation::Finite(v) => v as u64,
            Valuation::Infinite => return Err(Error::precision("inverse of zero at precision")),
        };
        let unit = self.div_by_pi(&x.num, v)?;
        let inv = self.unit_inverse(&unit)?;
        Ok(self.canonical(&self.elem_mul_pi_pow(
            &self.elem_from_int(inv),
            x.shift as i64 - v as i64,
        )))
    }

    /// Integral element as a [`CycInt`], or an error if it has a
    /// denominator (or too little precision to tell).
    pub fn elem_to_int(&self, x: &CycElem) -> Result<CycInt> {
        let c = self.canonical(x);
        if c.shift == 0 {
            return Ok(c.num);
        }
        match self.valuation(&c.num) {
            Valuation::Finite(_) => Err(Error::NonIntegral(0)),
            Valuation::Infinite => Err(Error::precision(format!(
                "value known only modulo pi^{}",
                c.value_precision()
            ))),
        }
    }

    /// Residue modulo `pi_d` of an integral element.
    pub fn elem_residue(&self, x: &CycElem) -> Result<u64> {
        let c = self.elem_to_int(x)?;
        self.residue(&c)
    }

    /// Equality at the common precision of both operands.
    pub fn elem_eq(&self, x: &CycElem, y: &CycElem) -> bool {
        self.elem_valuation(&self.elem_sub(x, y)).is_infinite()
    }
}
