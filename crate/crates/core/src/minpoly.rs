//! Exact minimal polynomials of basis values at the divisor points of a form.

use crate::basis::BasisFamily;
use crate::divisor::{divisor_sums, DivisorReport, FormInput};
use crate::error::{Error, Result};
use crate::exactfield::{as_integer, int, Rational};
use crate::qseries::QSeries;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// h ↦ Σ_z e_{N,z}·ord_z(f)·h(z) on functions with poles only at ∞.
pub struct DivisorFunctional<'a> {
    pub report: &'a DivisorReport,
    pub fam: &'a BasisFamily,
}

impl<'a> DivisorFunctional<'a> {
    pub fn new(report: &'a DivisorReport, fam: &'a BasisFamily) -> Self {
        DivisorFunctional { report, fam }
    }

    /// Writes h in the basis and applies linearity: Σ c_m·sums(m) + c₀·L1.
    pub fn apply(&self, h: &QSeries) -> Result<Rational> {
        let e = self.fam.expand_in_basis(h)?;
        let mut acc = e.constant * &self.report.l1;
        for (m, c) in e.coeffs {
            acc += c * self.report.sum(m)?;
        }
        Ok(acc)
    }

    /// p_r = L(𝔣_{N,m₀}^r) for r = 1..r_max.
    pub fn power_sums(&self, m0: u64, r_max: u32) -> Result<Vec<Rational>> {
        let base = self.fam.element(m0)?;
        let mut out = Vec::with_capacity(r_max as usize);
        let mut pw = base.clone();
        for r in 1..=r_max {
            if r > 1 {
                pw = pw.mul(&base);
            }
            out.push(self.apply(&pw)?);
        }
        Ok(out)
    }
}

/// Monic ∏(X − x_s) from power sums p₁..p_ℓ, coefficients lowest degree first.
pub fn newton_minpoly(p: &[Rational]) -> Vec<Rational> {
    let l = p.len();
    let mut e = vec![Rational::one()];
    for k in 1..=l {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let term = e[k - i].clone() * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / int(k as i64));
    }
    let mut coeffs = vec![Rational::zero(); l + 1];
    for (k, ek) in e.iter().enumerate() {
        coeffs[l - k] = if k % 2 == 0 { ek.clone() } else { -ek.clone() };
    }
    coeffs
}

/// Power sums of a multiset, the inverse of `newton_minpoly`.
pub fn power_sums_of(values: &[Rational], r_max: usize) -> Vec<Rational> {
    (1..=r_max)
        .map(|r| values.iter().map(|x| num_traits::pow(x.clone(), r)).fold(Rational::zero(), |a, b| a + b))
        .collect()
}

/// Number of divisor points: L1 when it is a nonnegative integer, else the override.
pub fn point_count(report: &DivisorReport, degree_override: Option<u64>) -> Result<u64> {
    if let Some(d) = degree_override {
        return Ok(d);
    }
    match as_integer(&report.l1) {
        Some(n) if !n.is_negative() => n.to_u64().ok_or_else(|| Error::InvalidArgument("point count too large".into())),
        _ => Err(Error::InvalidArgument(format!(
            "weighted point count L1 = {} is not a nonnegative integer; give the degree explicitly",
            report.l1
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct MinpolyResult {
    pub generator: u64,
    pub power_sums: Vec<Rational>,
    /// Lowest degree first, monic.
    pub coeffs: Vec<Rational>,
    pub report: DivisorReport,
}

/// The monic polynomial whose roots are 𝔣_{N,m₀}(z) over the divisor points of f.
pub fn minimal_polynomial(f: &FormInput, fam: &BasisFamily, m0: u64, degree_override: Option<u64>) -> Result<MinpolyResult> {
    let g = fam.genus();
    if m0 <= g {
        return Err(Error::InvalidArgument(format!("generator index {m0} lies in the gap 1..={g}")));
    }
    // L1 first, from a cheap report
    let probe = divisor_sums(f, fam, g + 1)?;
    let l = point_count(&probe, degree_override)?;
    if l == 0 {
        return Ok(MinpolyResult { generator: m0, power_sums: vec![], coeffs: vec![Rational::one()], report: probe });
    }
    let n_max = l * m0;
    if fam.m_max() < n_max {
        return Err(Error::Precision(format!("basis built to pole order {}, need {n_max}", fam.m_max())));
    }
    let report = divisor_sums(f, fam, n_max)?;
    let p = DivisorFunctional::new(&report, fam).power_sums(m0, l as u32)?;
    let coeffs = newton_minpoly(&p);
    Ok(MinpolyResult { generator: m0, power_sums: p, coeffs, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;

    #[test]
    fn newton_examples() {
        assert_eq!(newton_minpoly(&[int(-22), int(18)]), vec![int(233), int(22), int(1)]);
        assert_eq!(newton_minpoly(&[int(0), int(0), int(27)]), vec![int(-9), int(0), int(0), int(1)]);
        assert_eq!(newton_minpoly(&[int(0), int(0), int(0)]), vec![int(0), int(0), int(0), int(1)]);
        assert_eq!(newton_minpoly(&[]), vec![int(1)]);
    }

    #[test]
    fn round_trip() {
        let roots = [rat(1, 2), int(-3), rat(5, 7), int(2)];
        let p = power_sums_of(&roots, 4);
        let poly = newton_minpoly(&p);
        for x in roots {
            let v = poly.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c);
            assert!(v.is_zero());
        }
    }

    proptest::proptest! {
        #[test]
        fn newton_inverts_power_sums(roots in proptest::collection::vec((-20i64..20, 1i64..6), 0..6)) {
            let roots: Vec<Rational> = roots.into_iter().map(|(a, b)| rat(a, b)).collect();
            let poly = newton_minpoly(&power_sums_of(&roots, roots.len()));
            proptest::prop_assert_eq!(poly.len(), roots.len() + 1);
            for x in &roots {
                let v = poly.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
                proptest::prop_assert!(v.is_zero());
            }
        }
    }

    fn pipeline(name: &str, level: u64, m0: u64) -> MinpolyResult {
        let fam = BasisFamily::from_config(&crate::basis::LevelConfig::shipped(level).unwrap(), 60, 12).unwrap();
        let f = crate::forms::build_form(name, level, 60, None, &Default::default(), None).unwrap().input;
        minimal_polynomial(&f, &fam, m0, None).unwrap()
    }

    #[test]
    fn level11_quadratic() {
        let r = pipeline("example6_1", 11, 2);
        assert_eq!(r.report.l1, int(2));
        // the relation 𝔣₂² = 𝔣₄ + 4𝔣₃ + 4𝔣₂ + 36 gives p₂ = −34 + 4 − 88 + 72 = 90
        assert_eq!(r.power_sums, vec![int(-22), int(90)]);
        assert_eq!(r.coeffs, vec![int(197), int(22), int(1)]);
    }

    #[test]
    fn level27_cubics() {
        let r = pipeline("example6_3", 27, 2);
        assert_eq!(r.power_sums, vec![int(0), int(0), int(27)]);
        assert_eq!(r.coeffs, vec![int(-9), int(0), int(0), int(1)]);
        let r = pipeline("example6_3", 27, 3);
        assert_eq!(r.coeffs, vec![int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn functional_is_linear() {
        let fam = BasisFamily::from_config(&crate::basis::LevelConfig::shipped(11).unwrap(), 60, 12).unwrap();
        let f = crate::forms::build_form("example6_1", 11, 60, None, &Default::default(), None).unwrap().input;
        let rep = divisor_sums(&f, &fam, 8).unwrap();
        let l = DivisorFunctional::new(&rep, &fam);
        let (a, b) = (rat(3, 7), int(-5));
        let g = fam.element(2).unwrap().mul(&fam.element(3).unwrap());
        let h = fam.element(5).unwrap().add(&QSeries::constant(int(4), 60));
        let lhs = l.apply(&g.scale(&a).add(&h.scale(&b))).unwrap();
        assert_eq!(lhs, a * l.apply(&g).unwrap() + b * l.apply(&h).unwrap());
        assert_eq!(l.apply(&QSeries::one(60)).unwrap(), int(2));
    }
}
