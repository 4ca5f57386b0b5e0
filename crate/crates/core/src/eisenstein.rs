//! The weight 2 Eisenstein space of Γ₀(N): basis, constant terms at cusps, and E_f.

use crate::error::{Error, Result};
use crate::exactfield::arith::{divisors, gcd_u};
use crate::exactfield::{gauss_sum, int, inv_one_minus_cos, primitive_characters, CycNumber, DirichletCharacter, Rational};
use crate::linalg::solve;
use crate::modcurve::{level_data, reduce_cusp, Cusp};
use crate::qseries::{char_eisenstein_q, eisenstein_series, QSeries};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum EisKind {
    /// E₂(τ) − d·E₂(dτ)
    E2Diff { d: u64 },
    /// E₂^{φ,φ̄}(tτ) for φ primitive mod u; `index` is the position of φ in the
    /// enumeration of primitive characters mod u
    CharEis { phi: DirichletCharacter, t: u64, index: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EisElement {
    pub level: u64,
    pub kind: EisKind,
}

/// Basis of 𝓔₂(N): E2Diff by d ascending, then CharEis by (u, t, character index).
pub fn eis_basis(n: u64) -> Result<Vec<EisElement>> {
    if n < 2 {
        return Err(Error::InvalidArgument("the Eisenstein space needs N ≥ 2".into()));
    }
    let mut out: Vec<EisElement> =
        divisors(n).into_iter().filter(|&d| d > 1).map(|d| EisElement { level: n, kind: EisKind::E2Diff { d } }).collect();
    for u in 2..=n {
        if n % (u * u) != 0 {
            continue;
        }
        let chars = primitive_characters(u);
        for t in divisors(n / (u * u)) {
            for (index, phi) in chars.iter().enumerate() {
                out.push(EisElement { level: n, kind: EisKind::CharEis { phi: phi.clone(), t, index } });
            }
        }
    }
    Ok(out)
}

/// 1 − gcd(d, v)²/d, independent of e.
pub fn e2diff_const(d: u64, v: u64) -> Rational {
    let g = gcd_u(d, v) as i64;
    int(1) - Rational::new((g * g).into(), (d as i64).into())
}

/// Constant term of E₂^{φ,φ̄}(tτ) at the Γ₀(N)-cusp e/v, after moving the cusp to level t·u².
/// Nonzero only for v = u·s with s = gcd(v, t); then it is the level-u² value at
/// e·t₁/u scaled by 1/t₁², t₁ = t/s (the slash by diag(s, t₁) contributes s/t₁²).
pub fn char_eis_const(phi: &DirichletCharacter, t: u64, e: i64, v: u64, n: u64) -> Result<CycNumber> {
    let u = phi.modulus();
    let m = t * u * u;
    if phi.is_trivial() || n % m != 0 {
        return Err(Error::InvalidArgument(format!("need φ nontrivial primitive with t·u² | N (u={u}, t={t}, N={n})")));
    }
    let c = reduce_cusp(e, v, n, m)?;
    let s = gcd_u(c.v, t);
    if c.v != u * s {
        return Ok(CycNumber::zero());
    }
    let g = gauss_sum(phi)?;
    let mut acc = CycNumber::zero();
    for d in 1..u as i64 {
        if gcd_u(d as u64, u) != 1 {
            continue;
        }
        let arg = -c.e * (t / s) as i64 * d * d;
        acc = acc.add(&phi.value(arg).mul(&inv_one_minus_cos(d, u)?));
    }
    let t1 = (t / s) as i64;
    let denom = g.scale(&int(-2 * t1 * t1));
    Ok(acc.mul(&denom.inv()?).simplify())
}

impl EisElement {
    pub fn label(&self) -> String {
        match &self.kind {
            EisKind::E2Diff { d } => format!("E2diff({d})"),
            EisKind::CharEis { phi, t, index } => format!("CharEis(u={},t={t},chi#{index})", phi.modulus()),
        }
    }

    pub fn constant_at(&self, cusp: &Cusp) -> Result<CycNumber> {
        match &self.kind {
            EisKind::E2Diff { d } => Ok(CycNumber::rational(e2diff_const(*d, cusp.v))),
            EisKind::CharEis { phi, t, .. } => char_eis_const(phi, *t, cusp.e, cusp.v, self.level),
        }
    }

    /// q-expansion at ∞ below q^prec.
    pub fn expansion(&self, prec: i64) -> Result<QSeries<CycNumber>> {
        match &self.kind {
            EisKind::E2Diff { d } => {
                let e2 = eisenstein_series(2, prec)?;
                let sub = eisenstein_series(2, prec / *d as i64 + 1)?.rescale(*d).scale(&int(*d as i64));
                Ok(e2.sub(&sub).truncate(prec).to_cyc())
            }
            EisKind::CharEis { phi, t, .. } => {
                // the normalization of the constants is twice the divisor-sum series
                let s = char_eisenstein_q(phi, prec / *t as i64 + 1)?;
                Ok(s.rescale(*t).scale(&CycNumber::rational(int(2))).truncate(prec))
            }
        }
    }
}

/// The solved Eisenstein part of f_θ: constants match c_i at every finite cusp.
#[derive(Clone, Debug)]
pub struct EfSolution {
    pub level: u64,
    pub basis: Vec<EisElement>,
    pub cusps: Vec<Cusp>,
    pub c: Vec<Rational>,
    pub alphas: Vec<CycNumber>,
}

/// c_s = ord_s(f)/h_s − k/12 with ord_s in the local parameter at s.
pub fn ftheta_constant(cusp: &Cusp, ord: &Rational, weight: i64) -> Rational {
    ord / int(cusp.width() as i64) - Rational::new(weight.into(), 12.into())
}

/// Solves Σ α_j E^{(j)}(s_i) = c_i over the finite cusps.
pub fn solve_ef(n: u64, weight: i64, cusp_orders: &BTreeMap<Cusp, Rational>) -> Result<EfSolution> {
    let ld = level_data(n);
    let cusps = ld.finite_cusps();
    let mut c = Vec::with_capacity(cusps.len());
    for s in &cusps {
        let ord = cusp_orders
            .get(s)
            .ok_or_else(|| Error::CuspOrders(format!("no order given at cusp {s} of level {n}")))?;
        c.push(ftheta_constant(s, ord, weight));
    }
    solve_ef_constants(n, &c)
}

/// Same solve with the right-hand side c given directly (finite cusps in canonical order).
pub fn solve_ef_constants(n: u64, c: &[Rational]) -> Result<EfSolution> {
    let cusps = level_data(n).finite_cusps();
    if c.len() != cusps.len() {
        return Err(Error::InvalidArgument(format!("expected {} cusp constants, got {}", cusps.len(), c.len())));
    }
    if cusps.is_empty() {
        return Ok(EfSolution { level: n, basis: vec![], cusps, c: vec![], alphas: vec![] });
    }
    let basis = eis_basis(n)?;
    let a = cusps
        .iter()
        .map(|s| basis.iter().map(|b| b.constant_at(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let rhs: Vec<CycNumber> = c.iter().cloned().map(CycNumber::rational).collect();
    let alphas = solve(&a, &rhs)?.into_iter().map(|x| x.simplify()).collect();
    Ok(EfSolution { level: n, basis, cusps, c: c.to_vec(), alphas })
}

impl EfSolution {
    pub fn series_cyc(&self, prec: i64) -> Result<QSeries<CycNumber>> {
        let mut acc = QSeries::<CycNumber>::zero(prec);
        for (a, b) in self.alphas.iter().zip(&self.basis) {
            if !a.is_zero() {
                acc = acc.add(&b.expansion(prec)?.scale(a));
            }
        }
        Ok(acc)
    }

    /// E_f with rational coefficients; an error if the solve left irrational ones.
    pub fn series(&self, prec: i64) -> Result<QSeries> {
        self.series_cyc(prec)?
            .to_rational()
            .ok_or_else(|| Error::NonIntegral("E_f has non-rational coefficients".into()))
    }

    /// ε_f(n), the coefficient of qⁿ in E_f.
    pub fn epsilon(&self, n: i64) -> Result<Rational> {
        self.series(n + 1)?.try_coeff(n)
    }

    /// Constant term of E_f at a cusp of the level, ∞ included.
    pub fn constant_at(&self, cusp: &Cusp) -> Result<CycNumber> {
        let mut acc = CycNumber::zero();
        for (a, b) in self.alphas.iter().zip(&self.basis) {
            acc = acc.add(&a.mul(&b.constant_at(cusp)?));
        }
        Ok(acc.simplify())
    }
}

/// Σ over all cusps of width × constant term; zero for every element of 𝓔₂(N).
pub fn residue_sum(el: &EisElement) -> Result<CycNumber> {
    let mut acc = CycNumber::zero();
    for s in level_data(el.level).cusps {
        acc = acc.add(&el.constant_at(&s)?.scale(&int(s.width() as i64)));
    }
    Ok(acc.simplify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rat, sqrt_minus_three};
    use crate::modcurve::parse_cusp;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn labels(n: u64) -> Vec<String> {
        eis_basis(n).unwrap().iter().map(|e| e.label()).collect()
    }

    #[test]
    fn basis_shapes() {
        assert_eq!(labels(11), ["E2diff(11)"]);
        assert_eq!(
            labels(27),
            ["E2diff(3)", "E2diff(9)", "E2diff(27)", "CharEis(u=3,t=1,chi#0)", "CharEis(u=3,t=3,chi#0)"]
        );
        assert_eq!(labels(12).len(), 5);
        for n in 2..=60u64 {
            assert_eq!(eis_basis(n).unwrap().len() as u64, crate::modcurve::cusp_count(n) - 1, "N={n}");
        }
    }

    #[test]
    fn e2diff_values() {
        assert_eq!(e2diff_const(11, 1), rat(10, 11));
        assert_eq!(e2diff_const(9, 3), int(0));
        for d in [2u64, 3, 6] {
            let el = EisElement { level: 6, kind: EisKind::E2Diff { d } };
            let inf = parse_cusp("inf", 6).unwrap();
            assert_eq!(el.constant_at(&inf).unwrap(), CycNumber::rational(int(1 - d as i64)));
            assert_eq!(el.expansion(3).unwrap().coeff(0), CycNumber::rational(int(1 - d as i64)));
        }
    }

    #[test]
    fn char_eis_values_at_27() {
        let phi = primitive_characters(3).remove(0);
        let i_sqrt3 = sqrt_minus_three();
        let at = |t: u64, label: &str| {
            let c = parse_cusp(label, 27).unwrap();
            char_eis_const(&phi, t, c.e, c.v, 27).unwrap()
        };
        assert_eq!(at(1, "1/3"), i_sqrt3.scale(&rat(-2, 9)));
        assert_eq!(at(1, "2/3"), i_sqrt3.scale(&rat(2, 9)));
        assert_eq!(at(1, "0"), CycNumber::zero());
        // level 9 sees 1/9 as ∞, where the expansion has no constant term
        assert_eq!(at(1, "1/9"), CycNumber::zero());
        assert_eq!(at(1, "inf"), CycNumber::zero());
        assert_eq!(at(3, "1/9"), i_sqrt3.scale(&rat(-2, 9)));
        assert_eq!(at(3, "2/9"), i_sqrt3.scale(&rat(2, 9)));
        assert_eq!(at(3, "1/3"), CycNumber::zero());
    }

    #[test]
    fn conjugation_symmetry() {
        for n in [9u64, 16, 25, 27, 36, 45, 49, 50] {
            for el in eis_basis(n).unwrap() {
                // conjugation sends φ to φ̄ and e/v to −e/v
                let bar = match &el.kind {
                    EisKind::CharEis { phi, t, index } => {
                        EisElement { level: n, kind: EisKind::CharEis { phi: phi.conj(), t: *t, index: *index } }
                    }
                    _ => el.clone(),
                };
                for s in level_data(n).cusps {
                    let minus = crate::modcurve::canonical_cusp(-s.e, s.v, n).unwrap();
                    assert_eq!(bar.constant_at(&minus).unwrap(), el.constant_at(&s).unwrap().conj(), "{} at {s}", el.label());
                }
            }
        }
    }

    #[test]
    fn residue_identity() {
        for n in 2..=64u64 {
            for el in eis_basis(n).unwrap() {
                assert!(residue_sum(&el).unwrap().is_zero(), "N={n} {}", el.label());
            }
        }
    }

    #[test]
    fn level11_ef() {
        let inf = parse_cusp("0", 11).unwrap();
        let sol = solve_ef(11, 2, &BTreeMap::from([(inf, int(0))])).unwrap();
        assert_eq!(sol.alphas, vec![CycNumber::rational(rat(-11, 60))]);
        let want = [rat(11, 6), rat(22, 5), rat(66, 5), rat(88, 5), rat(154, 5)];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(&sol.epsilon(n as i64).unwrap(), w);
        }
    }

    #[test]
    fn ef_is_linear_and_vanishes_on_zero() {
        let zero = solve_ef_constants(27, &vec![int(0); 5]).unwrap();
        assert!(zero.alphas.iter().all(|a| a.is_zero()));
        let c1 = [rat(1, 2), int(-3), rat(2, 7), int(5), rat(-1, 3)];
        let c2 = [int(4), rat(1, 5), int(-1), rat(3, 4), int(2)];
        let sum: Vec<Rational> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
        let (s1, s2, s) = (
            solve_ef_constants(27, &c1).unwrap(),
            solve_ef_constants(27, &c2).unwrap(),
            solve_ef_constants(27, &sum).unwrap(),
        );
        for j in 0..5 {
            assert_eq!(s1.alphas[j].add(&s2.alphas[j]), s.alphas[j]);
        }
        for (i, cusp) in s.cusps.iter().enumerate() {
            assert_eq!(s.constant_at(cusp).unwrap(), CycNumber::rational(sum[i].clone()));
        }
    }

    /// (E|γ)(τ) averaged over one period of the cusp, with γ∞ = e/v.
    fn numeric_constant(el: &EisElement, cusp: &Cusp, terms: i64) -> Complex64 {
        let series = el.expansion(terms).unwrap();
        let coeffs: Vec<(i64, Complex64)> = series.terms().map(|(k, c)| (k, c.to_complex())).collect();
        let eval = |z: Complex64| -> Complex64 {
            let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut qp = Complex64::new(1.0, 0.0);
            let mut last = 0;
            for &(k, c) in &coeffs {
                qp *= q.powi((k - last) as i32);
                last = k;
                acc += c * qp;
            }
            acc
        };
        let (e, v) = (cusp.e, cusp.v as i64);
        let (e, v) = if cusp.is_infinity() { (1, 0) } else { (e, v) };
        // solve e·h − f·v = 1
        let (mut f, mut h) = (0i64, 1i64);
        if v != 0 {
            h = crate::exactfield::arith::mod_inverse(e.rem_euclid(v), v).unwrap_or(1);
            f = (e * h - 1) / v;
        }
        let w = cusp.width() as f64;
        let samples = 64;
        let y = 1.5;
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..samples {
            let tau = Complex64::new(w * j as f64 / samples as f64, y);
            let num = tau * e as f64 + f as f64;
            let den = tau * v as f64 + h as f64;
            total += eval(num / den) / (den * den);
        }
        total / samples as f64
    }

    fn check_numeric(n: u64, terms: i64, only_char: bool) {
        for el in eis_basis(n).unwrap() {
            if only_char && matches!(el.kind, EisKind::E2Diff { .. }) {
                continue;
            }
            for s in level_data(n).cusps {
                let exact = el.constant_at(&s).unwrap().to_complex();
                let num = numeric_constant(&el, &s, terms);
                assert!((exact - num).norm() < 1e-6, "{} at {s}: exact {exact} numeric {num}", el.label());
            }
        }
    }

    #[test]
    fn constants_match_numeric_slash() {
        check_numeric(27, 9000, false);
    }

    #[test]
    fn char_constants_match_numeric_slash_at_25() {
        check_numeric(25, 9000, true);
    }

    #[test]
    fn char_constants_match_numeric_slash_at_36() {
        check_numeric(36, 16000, true);
    }
}
