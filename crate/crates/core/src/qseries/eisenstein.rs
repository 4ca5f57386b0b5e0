use super::{eta_expand, EtaQuotient, QSeries};
use crate::error::{Error, Result};
use crate::exactfield::arith::{binomial, divisors, sigma};
use crate::exactfield::{big, int, CycNumber, DirichletCharacter, Rational};
use num_traits::{One, Zero};

/// Bernoulli number B_k with B_1 = −1/2.
pub fn bernoulli(k: u32) -> Rational {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=k as u64 {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += big(binomial(m + 1, j as u64)) * bj;
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b[k as usize].clone()
}

/// E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ, exponents below prec.
pub fn eisenstein_series(k: i64, prec: i64) -> Result<QSeries> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InvalidArgument(format!("Eisenstein weight must be even and at least 2, got {k}")));
    }
    let factor = -int(2 * k) / bernoulli(k as u32);
    let mut coeffs = vec![Rational::one()];
    for n in 1..prec.max(1) {
        coeffs.push(&factor * big(sigma(k as u32 - 1, n as u64)));
    }
    coeffs.truncate(prec.max(0) as usize);
    Ok(QSeries::new(1, 0, coeffs))
}

/// Δ = q∏(1 − qⁿ)²⁴.
pub fn delta(prec: i64) -> QSeries {
    eta_expand(&EtaQuotient::classical(1, &[(1, 24)]).expect("valid"), prec).expect("valid")
}

/// j − 744 = E_4³/Δ − 744, exponents below prec.
pub fn klein_j_minus_744(prec: i64) -> QSeries {
    let e4 = eisenstein_series(4, prec + 1).expect("weight 4");
    let j = e4.pow(3).expect("nonnegative power").div(&delta(prec + 2)).expect("Δ is a unit");
    j.add(&QSeries::constant(int(-744), prec)).truncate(prec)
}

/// Σ_{n≥1} (Σ_{d|n} d·φ(n/d)·φ̄(d)) qⁿ for primitive nontrivial φ.
pub fn char_eisenstein_q(phi: &DirichletCharacter, prec: i64) -> Result<QSeries<CycNumber>> {
    if phi.is_trivial() {
        return Err(Error::InvalidArgument("character must be nontrivial".into()));
    }
    let bar = phi.conj();
    let mut coeffs = vec![CycNumber::zero()];
    for n in 1..prec.max(1) {
        let mut acc = CycNumber::zero();
        for d in divisors(n as u64) {
            let d = d as i64;
            let t = phi.value(n / d).mul(&bar.value(d)).scale(&int(d));
            acc = acc.add(&t);
        }
        coeffs.push(acc);
    }
    coeffs.truncate(prec.max(0) as usize);
    Ok(QSeries::new(1, 0, coeffs))
}
