//! Exact arithmetic: rationals, cyclotomic numbers, Dirichlet characters.

pub mod arith;
mod character;
mod cyclotomic;

pub use character::{gauss_sum, primitive_characters, DirichletCharacter};
pub use cyclotomic::{inv_one_minus_cos, sqrt_minus_three, CycNumber};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero("rational literal"));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(big(s.parse().map_err(|_| bad())?)),
    }
}

/// Integer value of a rational, if it has denominator 1.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

pub fn as_i64(r: &Rational) -> Option<i64> {
    as_integer(r).and_then(|n| n.to_i64())
}

/// Coefficient ring for q-series and linear algebra.
pub trait Coeff: Zero + One + Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn try_inv(&self) -> Result<Self>;
    fn from_rational(r: &Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn to_complex(&self) -> Complex64;
    /// The rational value when the element lies in ℚ.
    fn as_rational(&self) -> Option<Rational>;
    fn render(&self) -> String;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    /// First n coefficients of the Cauchy product of a and b.
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].plus(&x.times(y));
                }
            }
        }
        out
    }
}

impl Coeff for Rational {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero("rational inverse"))
        } else {
            Ok(Rational::recip(self))
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn render(&self) -> String {
        self.to_string()
    }

    // clear denominators once and convolve over the integers
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let (ai, da) = to_integers(a);
        let (bi, db) = to_integers(b);
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in ai.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        let d = da * db;
        out.into_iter().map(|c| Rational::new(c, d.clone())).collect()
    }
}

/// Integer vector v and common denominator D with a = v / D.
pub fn to_integers(a: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = a.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let v = a.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (v, d)
}

/// Conversion that survives numerators and denominators beyond f64 range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits() as i64 - d.bits() as i64) - 60;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d << (shift as usize))
    } else {
        (n << ((-shift) as usize), d.clone())
    };
    let q = (n2 / d2).to_f64().unwrap_or(0.0);
    let sign = if r.is_negative() && q > 0.0 { -1.0 } else { 1.0 };
    sign * q * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap().render(), "7");
        assert_eq!(rat(-11, 60).render(), "-11/60");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn huge_rational_to_float() {
        let r = big(num_traits::pow(BigInt::from(10), 400)) / big(num_traits::pow(BigInt::from(10), 398));
        assert!((rational_to_f64(&r) - 100.0).abs() < 1e-9);
        let r = big(num_traits::pow(BigInt::from(3), 900)) / big(num_traits::pow(BigInt::from(3), 899));
        assert!((rational_to_f64(&-r) + 3.0).abs() < 1e-9);
    }
}
