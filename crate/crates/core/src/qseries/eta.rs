//! Classical and generalized (Yang) eta quotients.

use super::QSeries;
use crate::error::{Error, Result};
use crate::exactfield::arith::gcd;
use crate::exactfield::{big, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaKind {
    /// ∏ η(δτ)^{r_δ} over divisors δ of N.
    Classical,
    /// ∏ η_a(τ)^{r_a} with Yang's generalized η_a of level N.
    Generalized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotient {
    pub level: u64,
    pub kind: EtaKind,
    pub exponents: BTreeMap<i64, i64>,
}

impl EtaQuotient {
    pub fn classical(level: u64, exps: &[(i64, i64)]) -> Result<Self> {
        let q = EtaQuotient { level, kind: EtaKind::Classical, exponents: collect(exps) };
        q.validate()?;
        Ok(q)
    }

    pub fn generalized(level: u64, exps: &[(i64, i64)]) -> Result<Self> {
        let q = EtaQuotient { level, kind: EtaKind::Generalized, exponents: collect(exps) };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.level as i64;
        for &a in self.exponents.keys() {
            let ok = match self.kind {
                EtaKind::Classical => a > 0 && n % a == 0,
                EtaKind::Generalized => a.rem_euclid(n) != 0,
            };
            if !ok {
                return Err(Error::InvalidArgument(format!("eta index {a} invalid at level {n}")));
            }
        }
        Ok(())
    }

    /// Exponent of the leading power of q.
    pub fn leading_exponent(&self) -> Rational {
        let n = self.level as i64;
        self.exponents
            .iter()
            .map(|(&a, &r)| match self.kind {
                EtaKind::Classical => Rational::new(BigInt::from(a * r), BigInt::from(24)),
                EtaKind::Generalized => generalized_prefactor(a, n) * big(BigInt::from(r)),
            })
            .fold(Rational::zero(), |x, y| x + y)
    }

    /// Sign picked up by reducing every generalized index into 0 < a < N.
    pub fn sign(&self) -> i64 {
        if self.kind == EtaKind::Classical {
            return 1;
        }
        let n = self.level as i64;
        self.exponents
            .iter()
            .map(|(&a, &r)| {
                let k = a.div_euclid(n);
                if k.rem_euclid(2) == 1 && r.rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                }
            })
            .product()
    }

    /// Same quotient with every generalized index multiplied by s.
    pub fn scaled(&self, s: i64) -> Self {
        let mut exponents = BTreeMap::new();
        for (&a, &r) in &self.exponents {
            *exponents.entry(a * s).or_insert(0) += r;
        }
        exponents.retain(|_, r| *r != 0);
        EtaQuotient { level: self.level, kind: self.kind, exponents }
    }

    /// Yang's conditions Σr ≡ 0 (12), Σa·r ≡ 0 (2), Σa²r ≡ 0 (2N) on reduced indices.
    pub fn yang_conditions(&self) -> bool {
        let n = self.level as i64;
        let mut s0 = 0i64;
        let mut s1 = 0i64;
        let mut s2 = 0i64;
        for (&a, &r) in &self.exponents {
            let a = a.rem_euclid(n);
            s0 += r;
            s1 += a * r;
            s2 += a * a * r;
        }
        s0.rem_euclid(12) == 0 && s1.rem_euclid(2) == 0 && s2.rem_euclid(2 * n) == 0
    }

    /// Newman-type conditions for a classical quotient to be modular of even weight
    /// and trivial character on Γ₀(N).
    pub fn classical_modular(&self) -> bool {
        let n = self.level as i64;
        let s0: i64 = self.exponents.values().sum();
        let s1: i64 = self.exponents.iter().map(|(d, r)| d * r).sum();
        let s2: i64 = self.exponents.iter().map(|(d, r)| (n / d) * r).sum();
        let mut prod = Rational::one();
        for (&d, &r) in &self.exponents {
            prod *= Rational::from_integer(BigInt::from(d)).pow(r as i32);
        }
        s0 % 4 == 0 && s1 % 24 == 0 && s2 % 24 == 0 && is_rational_square(&prod)
    }

    /// Order at the cusp with denominator v, in the local uniformizer.
    pub fn cusp_order(&self, v: u64) -> Result<Rational> {
        if self.kind != EtaKind::Classical {
            return Err(Error::InvalidArgument("cusp orders need a classical eta quotient".into()));
        }
        let n = self.level as i64;
        let v = v as i64;
        let mut acc = Rational::zero();
        for (&d, &r) in &self.exponents {
            let g = gcd(v, d);
            acc += Rational::new(BigInt::from(g * g * r), BigInt::from(d));
        }
        let denom = 24 * gcd(v, n / v) * v;
        Ok(acc * Rational::new(BigInt::from(n), BigInt::from(denom)))
    }
}

fn collect(exps: &[(i64, i64)]) -> BTreeMap<i64, i64> {
    let mut m = BTreeMap::new();
    for &(a, r) in exps {
        *m.entry(a).or_insert(0) += r;
    }
    m.retain(|_, r| *r != 0);
    m
}

fn is_rational_square(r: &Rational) -> bool {
    let sq = |n: &BigInt| !n.is_negative() && n.sqrt().pow(2) == *n;
    sq(r.numer()) && sq(r.denom())
}

/// N·B(a/N)/2 = (6a² − 6aN + N²)/(12N) with a reduced mod N.
fn generalized_prefactor(a: i64, n: i64) -> Rational {
    let a = a.rem_euclid(n);
    Rational::new(BigInt::from(6 * a * a - 6 * a * n + n * n), BigInt::from(12 * n))
}

/// Multiplies v in place by (1 − q^e)^r.
fn apply_factor(v: &mut [BigInt], e: usize, r: i64) {
    if e == 0 || e >= v.len() {
        return;
    }
    if r > 0 {
        for _ in 0..r {
            for i in (e..v.len()).rev() {
                let t = v[i - e].clone();
                if !t.is_zero() {
                    v[i] -= t;
                }
            }
        }
    } else {
        for _ in 0..(-r) {
            for i in e..v.len() {
                let t = v[i - e].clone();
                if !t.is_zero() {
                    v[i] += t;
                }
            }
        }
    }
}

/// Exact expansion of the quotient with coefficients for all exponents below `prec`.
pub fn eta_expand(spec: &EtaQuotient, prec: i64) -> Result<QSeries> {
    spec.validate()?;
    let lead = spec.leading_exponent();
    let m = lead.denom().to_u64().expect("small denominator");
    let lead_num = lead.numer().to_i64().expect("small exponent");
    // number of integral steps of the product part needed below prec
    let start = lead.floor().to_integer().to_i64().expect("small exponent");
    let len = (prec - start).max(0) as usize;
    let mut v = vec![BigInt::zero(); len.max(1)];
    v[0] = BigInt::one();
    let n = spec.level as i64;
    match spec.kind {
        EtaKind::Classical => {
            for (&d, &r) in &spec.exponents {
                let mut e = d as usize;
                while e < v.len() {
                    apply_factor(&mut v, e, r);
                    e += d as usize;
                }
            }
        }
        EtaKind::Generalized => {
            for (&a, &r) in &spec.exponents {
                let a = a.rem_euclid(n) as usize;
                let n = n as usize;
                let mut base = 0usize;
                while base < v.len() {
                    apply_factor(&mut v, base + a, r);
                    apply_factor(&mut v, base + n - a, r);
                    base += n;
                }
            }
        }
    }
    let sign = BigInt::from(spec.sign());
    let coeffs: Vec<Rational> = v.into_iter().map(|c| big(c * &sign)).collect();
    // coefficient i sits at exponent lead + i, i.e. (lead_num + i·m)/m
    let mut spread = vec![Rational::zero(); coeffs.len() * m as usize];
    for (i, c) in coeffs.into_iter().enumerate() {
        spread[i * m as usize] = c;
    }
    let s = QSeries::new(m, lead_num, spread);
    // trim to the requested bound prec (units of q)
    Ok(s.truncate(prec * m as i64).reduce_denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{int, rat};

    #[test]
    fn delta_11() {
        let q = EtaQuotient::classical(11, &[(1, 2), (11, 2)]).unwrap();
        let s = eta_expand(&q, 7).unwrap();
        assert_eq!(s, QSeries::from_ints(1, &[1, -2, -1, 2, 1, 2]));
        assert!(q.classical_modular());
    }

    #[test]
    fn level_27_hauptmodul_part() {
        let q = EtaQuotient::classical(27, &[(3, 3), (27, -3)]).unwrap();
        let s = eta_expand(&q, 25).unwrap().add(&QSeries::constant(int(3), 25));
        let want = QSeries::from_terms(1, &[(-3, int(1)), (6, int(5)), (15, int(-7)), (24, int(3))], 25);
        assert_eq!(s, want);
        assert_eq!(q.cusp_order(27).unwrap(), int(-3));
        assert_eq!(q.cusp_order(1).unwrap(), int(1));
        assert_eq!(q.cusp_order(3).unwrap(), int(1));
        assert_eq!(q.cusp_order(9).unwrap(), int(0));
        assert!(q.classical_modular());
    }

    #[test]
    fn generalized_prefactors() {
        assert_eq!(generalized_prefactor(6, 31), rat(6 * 36 - 6 * 6 * 31 + 961, 12 * 31));
        let q = EtaQuotient::generalized(31, &[(6, 1), (26, 1), (30, 1), (2, -1), (10, -1), (12, -1)]).unwrap();
        assert!(q.yang_conditions());
        assert_eq!(q.leading_exponent(), int(3));
        let s = eta_expand(&q, 10).unwrap();
        assert!(s.is_integral());
        assert_eq!(s.low(), 3);
    }

    #[test]
    fn index_identities() {
        // η_{N−a} = η_a, η_{a+N} = −η_a
        let a = eta_expand(&EtaQuotient::generalized(7, &[(2, 1)]).unwrap(), 20).unwrap();
        let b = eta_expand(&EtaQuotient::generalized(7, &[(5, 1)]).unwrap(), 20).unwrap();
        let c = eta_expand(&EtaQuotient::generalized(7, &[(9, 1)]).unwrap(), 20).unwrap();
        let d = eta_expand(&EtaQuotient::generalized(7, &[(-2, 1)]).unwrap(), 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(c, a.neg());
        assert_eq!(d, a.neg());
        assert_eq!(a.denom(), 84);
    }

    #[test]
    fn bad_index() {
        assert!(EtaQuotient::classical(10, &[(3, 1)]).is_err());
        assert!(EtaQuotient::generalized(10, &[(20, 1)]).is_err());
    }
}
