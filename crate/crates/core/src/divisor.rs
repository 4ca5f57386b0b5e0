//! Product exponents, the Serre-derivative quotient, and divisor sums of basis values.

use crate::basis::BasisFamily;
use crate::eisenstein::{solve_ef, EfSolution};
use crate::error::{Error, Result};
use crate::exactfield::arith::{divisors, sigma};
use crate::exactfield::{big, int, Rational};
use crate::modcurve::{level_data, Cusp};
use crate::qseries::{eisenstein_series, EtaQuotient, QSeries};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// A meromorphic modular form given by its expansion at ∞ and its orders at the other cusps.
#[derive(Clone, Debug)]
pub struct FormInput {
    pub series: QSeries,
    pub weight: i64,
    pub level: u64,
    /// Orders in the local parameter at every cusp other than ∞.
    pub cusp_orders: BTreeMap<Cusp, Rational>,
    pub note: String,
}

impl FormInput {
    pub fn new(series: QSeries, weight: i64, level: u64, cusp_orders: BTreeMap<Cusp, Rational>) -> Result<Self> {
        let (low, lead) = series.leading().ok_or(Error::ZeroSeries(series.prec()))?;
        if !lead.is_one() {
            return Err(Error::NonMonic(format!("leading coefficient is {lead}, expected 1")));
        }
        if series.denom() != 1 {
            return Err(Error::NonIntegral(format!("leading exponent {low}/{} is not an integer", series.denom())));
        }
        if weight % 2 != 0 {
            return Err(Error::InvalidArgument(format!("weight {weight} must be even")));
        }
        Ok(FormInput { series, weight, level, cusp_orders, note: String::new() })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// h, the order at ∞.
    pub fn h(&self) -> i64 {
        self.series.low()
    }

    /// Largest n for which a(n) of q^{−h}f is known.
    pub fn known_terms(&self) -> i64 {
        self.series.prec() - self.h() - 1
    }
}

/// c(1..count) with q^{−h}f = ∏(1 − qⁿ)^{c(n)}.
pub fn product_exponents(f: &FormInput, count: usize) -> Result<Vec<Rational>> {
    let h = f.h();
    if (count as i64) > f.known_terms() {
        return Err(Error::Precision(format!(
            "{count} exponents need a(n) up to n = {count}; the series is known to n = {}",
            f.known_terms()
        )));
    }
    let a = |n: usize| f.series.coeff(h + n as i64);
    // b[k] = Σ_{u|k} u·c(u)
    let mut c = vec![Rational::zero(); count + 1];
    let mut b = vec![Rational::zero(); count + 1];
    for m in 1..=count {
        let mut div_part = Rational::zero();
        for u in divisors(m as u64) {
            let u = u as usize;
            if u < m {
                div_part += int(u as i64) * &c[u];
            }
        }
        let mut conv = Rational::zero();
        for k in 1..m {
            let am = a(m - k);
            if !am.is_zero() {
                conv += am * &b[k];
            }
        }
        c[m] = -a(m) - (div_part.clone() + conv) / int(m as i64);
        b[m] = int(m as i64) * &c[m] + div_part;
    }
    c.remove(0);
    Ok(c)
}

/// Σ_{d|n} c(d)·d for n = 0..len (index 0 unused).
fn divisor_weighted(c: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        for d in divisors(n as u64) {
            *slot += int(d as i64) * &c[d as usize - 1];
        }
    }
    out
}

/// ∂_k(f)/f = h − k/12 + Σ (−Σ_{d|n} c(d)d + 2kσ₁(n)) qⁿ below q^prec.
pub fn serre_quotient(f: &FormInput, prec: i64) -> Result<QSeries> {
    let count = (prec - 1).max(0) as usize;
    let c = product_exponents(f, count)?;
    let bw = divisor_weighted(&c, count + 1);
    let k = f.weight;
    let mut terms = vec![(0, int(f.h()) - Rational::new(k.into(), 12.into()))];
    for (n, bn) in bw.iter().enumerate().skip(1) {
        terms.push((n as i64, -bn.clone() + big(sigma(1, n as u64) * 2 * k)));
    }
    Ok(QSeries::from_terms(1, &terms, prec))
}

/// Θ(f)/f − kE₂/12 by direct series division, an oracle for `serre_quotient`.
pub fn serre_quotient_direct(f: &FormInput, prec: i64) -> Result<QSeries> {
    let e2 = eisenstein_series(2, prec)?;
    let q = f.series.theta().div(&f.series)?;
    Ok(q.sub(&e2.scale(&Rational::new(f.weight.into(), 12.into()))).truncate(prec))
}

/// Order of a classical eta quotient at a cusp, in the local parameter.
pub fn eta_cusp_orders(eq: &EtaQuotient) -> Result<BTreeMap<Cusp, Rational>> {
    let mut out = BTreeMap::new();
    for cusp in level_data(eq.level).cusps {
        out.insert(cusp, eq.cusp_order(cusp.v)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub level: u64,
    pub weight: i64,
    pub h: i64,
    #[serde(serialize_with = "ser_rationals")]
    pub c: Vec<Rational>,
    #[serde(skip)]
    pub f_theta: QSeries,
    #[serde(skip)]
    pub e_f: QSeries,
    #[serde(skip)]
    pub ef: EfSolution,
    #[serde(serialize_with = "ser_rational_map")]
    pub sums: BTreeMap<u64, Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub l1: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_rational_map<S: serde::Serializer>(m: &BTreeMap<u64, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v.to_string())))
}

/// Solves for E_f, then Σ e_{N,z}·ord_z(f)·𝔣_{N,n}(z) for g < n ≤ n_max and the point count L1.
pub fn divisor_sums(f: &FormInput, fam: &BasisFamily, n_max: u64) -> Result<DivisorReport> {
    if fam.level() != f.level {
        return Err(Error::InvalidArgument(format!("form has level {}, basis has level {}", f.level, fam.level())));
    }
    let g = fam.genus();
    let need = n_max.max(g) as i64 + 1;
    let f_theta = serre_quotient(f, need)?;
    let c = product_exponents(f, (need - 1) as usize)?;
    let ef = solve_ef(f.level, f.weight, &f.cusp_orders)?;
    let e_f = ef.series(need)?;
    // coefficient of qⁿ in −f_θ + E_f, n ≥ 1: Σ_{d|n}c(d)d − 2kσ₁(n) + ε_f(n)
    let core = |n: i64| -> Rational { -f_theta.coeff(n) + e_f.coeff(n) };
    let mut sums = BTreeMap::new();
    for n in g + 1..=n_max {
        let mut s = core(n as i64);
        for l in 1..=g as i64 {
            s += core(l) * fam.a(n, -l)?;
        }
        sums.insert(n, s);
    }
    let l1 = -int(f.h()) + Rational::new(f.weight.into(), 12.into()) + e_f.coeff(0);
    Ok(DivisorReport { level: f.level, weight: f.weight, h: f.h(), c, f_theta, e_f, ef, sums, l1 })
}

impl DivisorReport {
    /// Σ over the divisor of 𝔣_{N,n}, with n = 0 giving L1.
    pub fn sum(&self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Ok(self.l1.clone());
        }
        self.sums
            .get(&n)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("no divisor sum for n = {n}")))
    }
}

/// −f_θ + E_f + Σ_ℓ (−Σ_{d|ℓ}c(d)d + 2kσ₁(ℓ) − ε_f(ℓ))·𝔤_{N,−ℓ}; zero when f has
/// neither zeros nor poles in ℍ.
pub fn gtfne_residual(f: &FormInput, fam: &BasisFamily, prec: i64) -> Result<QSeries> {
    if (fam.m_max() as i64) < prec - 1 {
        return Err(Error::Precision(format!("the dual family is known below q^{}, requested q^{prec}", fam.m_max() + 1)));
    }
    let f_theta = serre_quotient(f, prec)?;
    let ef = solve_ef(f.level, f.weight, &f.cusp_orders)?;
    let e_f = ef.series(prec)?;
    let mut r = e_f.sub(&f_theta);
    for l in 1..=fam.genus() {
        let coef = f_theta.coeff(l as i64) - e_f.coeff(l as i64);
        r = r.add(&fam.dual_family(l)?.scale(&coef));
    }
    Ok(r.truncate(prec))
}
