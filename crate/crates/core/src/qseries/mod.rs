//! Truncated Laurent series in q^{1/M} with exact coefficients.

mod eisenstein;
mod eta;
pub mod io;

pub use eisenstein::{bernoulli, char_eisenstein_q, delta, eisenstein_series, klein_j_minus_744};
pub use eta::{eta_expand, EtaKind, EtaQuotient};

use crate::error::{Error, Result};
use crate::exactfield::arith::lcm_u;
use crate::exactfield::{int, Coeff, CycNumber, Rational};
use num_integer::Integer;
use std::fmt;

/// Σ coeffs[i]·q^{(low+i)/denom} + O(q^{prec/denom}) with prec = low + coeffs.len().
#[derive(Clone, PartialEq)]
pub struct QSeries<C: Coeff = Rational> {
    denom: u64,
    low: i64,
    coeffs: Vec<C>,
}

impl<C: Coeff> QSeries<C> {
    /// Builds and normalizes: leading zeros are absorbed into `low`.
    pub fn new(denom: u64, low: i64, coeffs: Vec<C>) -> Self {
        assert!(denom >= 1);
        let mut s = QSeries { denom, low, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    /// Series with the given (exponent, coefficient) terms; exponents in units of 1/denom.
    pub fn from_terms(denom: u64, terms: &[(i64, C)], prec: i64) -> Self {
        let low = terms.iter().map(|t| t.0).min().unwrap_or(prec).min(prec);
        let mut coeffs = vec![C::zero(); (prec - low) as usize];
        for (e, c) in terms {
            if *e < prec {
                let i = (*e - low) as usize;
                coeffs[i] = coeffs[i].plus(c);
            }
        }
        Self::new(denom, low, coeffs)
    }

    pub fn zero(prec: i64) -> Self {
        QSeries { denom: 1, low: prec, coeffs: Vec::new() }
    }

    pub fn constant(c: C, prec: i64) -> Self {
        Self::from_terms(1, &[(0, c)], prec)
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(C::one(), prec)
    }

    pub fn monomial(exp: i64, c: C, prec: i64) -> Self {
        Self::from_terms(1, &[(exp, c)], prec)
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn prec(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.denom == 1
    }

    /// Coefficient at exponent e (units 1/denom); zero below `low`.
    pub fn coeff(&self, e: i64) -> C {
        assert!(e < self.prec(), "exponent {e} beyond precision {}", self.prec());
        if e < self.low {
            C::zero()
        } else {
            self.coeffs[(e - self.low) as usize].clone()
        }
    }

    pub fn try_coeff(&self, e: i64) -> Result<C> {
        if e >= self.prec() {
            return Err(Error::Precision(format!("coefficient at {e} requested, precision {}", self.prec())));
        }
        Ok(self.coeff(e))
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.coeffs.first().map(|c| (self.low, c))
    }

    /// Nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Same series written over q^{1/m}; m must be a multiple of denom.
    pub fn with_denom(&self, m: u64) -> Self {
        assert!(m % self.denom == 0);
        let s = (m / self.denom) as i64;
        if s == 1 {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() * s as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * s as usize] = c.clone();
        }
        QSeries { denom: m, low: self.low * s, coeffs }
    }

    /// Drops to the smallest denominator compatible with the support, rounding
    /// the precision down to the coarser lattice.
    pub fn reduce_denom(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.terms().fold(self.denom as i64, |acc, (e, _)| acc.gcd(&e));
        if g == 1 {
            return self.clone();
        }
        let low = self.low / g;
        let prec = Integer::div_floor(&self.prec(), &g);
        let coeffs = (low..prec).map(|i| self.coeff(i * g)).collect();
        QSeries::new(self.denom / g as u64, low, coeffs)
    }

    fn align(&self, o: &Self) -> (Self, Self) {
        let m = lcm_u(self.denom, o.denom);
        (self.with_denom(m), o.with_denom(m))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.low {
            return QSeries { denom: self.denom, low: prec, coeffs: Vec::new() };
        }
        let mut c = self.coeffs.clone();
        c.truncate((prec - self.low) as usize);
        QSeries::new(self.denom, self.low, c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        let prec = a.prec().min(b.prec());
        let low = a.low.min(b.low).min(prec);
        let mut coeffs = vec![C::zero(); (prec - low) as usize];
        for s in [&a, &b] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.low + i as i64;
                if e >= prec {
                    break;
                }
                let k = (e - low) as usize;
                coeffs[k] = coeffs[k].plus(c);
            }
        }
        QSeries::new(a.denom, low, coeffs)
    }

    pub fn neg(&self) -> Self {
        QSeries { denom: self.denom, low: self.low, coeffs: self.coeffs.iter().map(|c| c.negated()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        QSeries::new(self.denom, self.low, self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        QSeries::new(self.denom, self.low, self.coeffs.iter().map(|x| x.scale(r)).collect())
    }

    /// Product with prec = min(prec_a + low_b, prec_b + low_a).
    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        let prec = (a.prec() + b.low).min(b.prec() + a.low);
        let low = a.low + b.low;
        if a.is_zero() || b.is_zero() {
            return QSeries { denom: a.denom, low: prec, coeffs: Vec::new() };
        }
        let n = (prec - low).max(0) as usize;
        QSeries::new(a.denom, low, C::convolve(&a.coeffs, &b.coeffs, n))
    }

    /// Multiplies by q^{k/denom}.
    pub fn shift(&self, k: i64) -> Self {
        QSeries { denom: self.denom, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// 1/f, keeping the relative precision of f.
    pub fn invert(&self) -> Result<Self> {
        let Some((low, a0)) = self.leading() else {
            return Err(Error::ZeroSeries(self.prec()));
        };
        let inv0 = a0.try_inv()?;
        let n = self.coeffs.len();
        let mut b: Vec<C> = Vec::with_capacity(n);
        b.push(inv0.clone());
        for k in 1..n {
            let mut acc = C::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc = acc.plus(&a.times(&b[k - j]));
                }
            }
            b.push(acc.times(&inv0).negated());
        }
        Ok(QSeries::new(self.denom, -low, b))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let rel = base.coeffs.len() as i64;
        let mut result: Option<Self> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => sq.clone(),
                    Some(r) => r.mul(&sq),
                });
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result.unwrap_or_else(|| QSeries::from_terms(self.denom, &[(0, C::one())], rel)))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.invert()?))
    }

    /// q ↦ q^s: exponents and precision multiplied by s.
    pub fn rescale(&self, s: u64) -> Self {
        let s = s as usize;
        let mut coeffs = vec![C::zero(); self.coeffs.len() * s];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * s] = c.clone();
        }
        QSeries::new(self.denom, self.low * s as i64, coeffs)
    }

    /// Θ = q d/dq: the coefficient at exponent e/M is multiplied by e/M.
    pub fn theta(&self) -> Self {
        let m = self.denom as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::new((self.low + i as i64).into(), m.into())))
            .collect();
        QSeries::new(self.denom, self.low, coeffs)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        QSeries::new(self.denom, self.low, self.coeffs.iter().map(f).collect())
    }

    pub fn to_cyc(&self) -> QSeries<CycNumber> {
        self.map(|c| {
            if let Some(r) = c.as_rational() {
                CycNumber::rational(r)
            } else {
                panic!("only rational series can be promoted coefficientwise")
            }
        })
    }

    /// Rational series when every coefficient lies in ℚ.
    pub fn to_rational(&self) -> Option<QSeries<Rational>> {
        let coeffs: Option<Vec<Rational>> = self.coeffs.iter().map(|c| c.as_rational()).collect();
        coeffs.map(|c| QSeries::new(self.denom, self.low, c))
    }

    /// Principal part plus constant: all terms with exponent ≤ 0.
    pub fn principal_part(&self) -> Vec<(i64, C)> {
        self.terms().filter(|(e, _)| *e <= 0).map(|(e, c)| (e, c.clone())).collect()
    }

    /// Adds c·q^e in place of a term (e must be below precision).
    pub fn add_term(&self, e: i64, c: &C) -> Self {
        self.add(&QSeries::from_terms(self.denom, &[(e, c.clone())], self.prec()))
    }
}

impl QSeries<Rational> {
    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        QSeries::new(1, low, coeffs.iter().map(|&c| int(c)).collect())
    }
}

impl<C: Coeff> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.denom;
        let exp = |e: i64| {
            if m == 1 {
                e.to_string()
            } else {
                Rational::new(e.into(), (m as i64).into()).to_string()
            }
        };
        let mut first = true;
        for (e, c) in self.terms().take(12) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})q^{}", c.render(), exp(e))?;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q^{})", exp(self.prec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(low: i64, c: &[i64]) -> QSeries {
        QSeries::from_ints(low, c)
    }

    #[test]
    fn arithmetic_examples() {
        let a = s(0, &[1, 1, 0, 0]);
        let b = s(0, &[1, -1, 0, 0]);
        assert_eq!(a.mul(&b), s(0, &[1, 0, -1, 0]));
        let inv = s(0, &[1, -1, 0, 0]).invert().unwrap();
        assert_eq!(inv, s(0, &[1, 1, 1, 1]));
        let p = s(-1, &[1, 1, 0, 0]).pow(2).unwrap();
        assert_eq!(p, s(-2, &[1, 2, 1, 0]));
        assert_eq!(p.prec(), 2);
        assert!(QSeries::<Rational>::zero(5).invert().is_err());
    }

    #[test]
    fn precision_rules() {
        let a = s(-3, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 5]);
        let b = s(1, &[1, 2, 3]);
        let c = a.mul(&b);
        assert_eq!(c.low(), -2);
        assert_eq!(c.prec(), (a.prec() + 1).min(b.prec() - 3));
        assert_eq!(a.add(&b).prec(), 4);
        let inv = a.invert().unwrap();
        assert_eq!(inv.low(), 3);
        assert_eq!(inv.prec() - inv.low(), a.prec() - a.low());
    }

    #[test]
    fn theta_and_rescale() {
        let f = QSeries::from_terms(1, &[(-3, int(1)), (6, int(5))], 10);
        assert_eq!(f.theta(), QSeries::from_terms(1, &[(-3, int(-3)), (6, int(30))], 10));
        assert!(QSeries::<Rational>::one(10).theta().is_zero());
        assert_eq!(s(0, &[1, -24]).rescale(11), QSeries::from_terms(1, &[(0, int(1)), (11, int(-24))], 22));
        assert_eq!(QSeries::monomial(-1, int(1), 0).rescale(3).low(), -3);
    }

    #[test]
    fn fractional_exponents() {
        let a = QSeries::new(24, 1, vec![int(1)]);
        let b = QSeries::new(24, 23, vec![int(1)]);
        let p = a.mul(&b);
        assert_eq!(p.low(), 24);
        let r = p.reduce_denom();
        assert_eq!((r.denom(), r.low()), (1, 1));
        let half = QSeries::new(2, 1, vec![int(2), int(0)]);
        assert_eq!(half.theta().coeff(1), int(1));
    }

    #[test]
    fn pow_zero_is_one() {
        let f = s(2, &[3, 1, 4]);
        assert_eq!(f.pow(0).unwrap().coeff(0), int(1));
    }
}
