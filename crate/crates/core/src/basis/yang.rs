//! Generalized eta quotients: Yang's conditions, exponent search, orbit traces.

use crate::error::{Error, Result};
use crate::exactfield::CycNumber;
use crate::qseries::{eta_expand, EtaQuotient, QSeries};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangCheck {
    pub sum_r: i64,
    pub sum_ar: i64,
    pub sum_a2r: i64,
    pub ok: bool,
}

/// Conditions (i)–(iii) up to the choice of index representatives, with the three sums for diagnostics.
pub fn check_yang_conditions(exponents: &BTreeMap<i64, i64>, n: u64) -> Result<YangCheck> {
    let n = n as i64;
    let (mut s0, mut s1, mut s2) = (0i64, 0i64, 0i64);
    for (&a, &r) in exponents {
        if a.rem_euclid(n) == 0 {
            return Err(Error::InvalidArgument(format!("index {a} is divisible by {n}")));
        }
        let a = a.rem_euclid(n);
        s0 += r;
        s1 += a * r;
        s2 += a * a * r;
    }
    // η_{N−a} = η_a: replacing a by N − a under an odd exponent shifts
    // Σar by N·r and Σa²r by N·r mod 2N, so for odd N both may flip together
    let flippable = n % 2 == 1 && exponents.values().any(|r| r % 2 != 0);
    let plain = s1.rem_euclid(2) == 0 && s2.rem_euclid(2 * n) == 0;
    let flipped = flippable && s1.rem_euclid(2) == 1 && s2.rem_euclid(2 * n) == n;
    let ok = s0.rem_euclid(12) == 0 && (plain || flipped);
    Ok(YangCheck { sum_r: s0, sum_ar: s1, sum_a2r: s2, ok })
}

/// Smallest (lexicographic) x in [0, bound]^k with Σ x_i·T[i][0] = −target and
/// Σ x_i·T[i][j] ≥ −target for every other column j.
pub fn exponent_search(table: &[Vec<i64>], target: i64, bound: u32) -> Result<Vec<u32>> {
    let k = table.len();
    if k == 0 || table.iter().any(|r| r.len() != table[0].len() || r.is_empty()) {
        return Err(Error::InvalidArgument("cusp-order table must be a nonempty rectangle".into()));
    }
    let mut x = vec![0u32; k];
    loop {
        let col = |j: usize| -> i64 { (0..k).map(|i| x[i] as i64 * table[i][j]).sum() };
        if col(0) == -target && (1..table[0].len()).all(|j| col(j) >= -target) {
            return Ok(x);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Err(Error::NoSolution);
            }
            i -= 1;
            x[i] += 1;
            if x[i] <= bound {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Σ_j ε_j · F(scaled by orbit[j]), required to have rational coefficients.
/// Members keep the index-reduction signs relative to the product.
pub fn orbit_trace(
    product: &EtaQuotient,
    orbit: &[i64],
    multipliers: &[CycNumber],
    prec: i64,
) -> Result<QSeries> {
    if orbit.is_empty() {
        return Err(Error::Generator("orbit must be nonempty".into()));
    }
    let mut acc: Option<QSeries<CycNumber>> = None;
    for (j, &a) in orbit.iter().enumerate() {
        let member = product.scaled(a);
        let check = check_yang_conditions(&member.exponents, member.level)?;
        if !check.ok {
            return Err(Error::Generator(format!("orbit member {a} fails the modularity conditions: {check:?}")));
        }
        let s = eta_expand(&member, prec)?;
        if !s.is_integral() {
            return Err(Error::NonIntegral(format!("orbit member {a} has fractional exponents")));
        }
        let eps = multipliers.get(j).cloned().unwrap_or_else(<CycNumber as num_traits::One>::one);
        let term = s.to_cyc().scale(&eps);
        acc = Some(match acc {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    // the product itself is taken with positive leading coefficient
    let base = crate::exactfield::int(product.sign());
    acc.unwrap()
        .to_rational()
        .map(|t| t.scale(&base))
        .ok_or_else(|| Error::Generator("orbit trace has non-rational coefficients".into()))
}

/// ∏ f_{orbit[i]}^{x_i} with f_k the base quotient scaled by k.
pub fn orbit_product(base: &EtaQuotient, orbit: &[i64], x: &[u32]) -> EtaQuotient {
    let mut exps: BTreeMap<i64, i64> = BTreeMap::new();
    for (&k, &xi) in orbit.iter().zip(x) {
        for (&a, &r) in &base.scaled(k).exponents {
            *exps.entry(a).or_insert(0) += r * xi as i64;
        }
    }
    exps.retain(|_, r| *r != 0);
    EtaQuotient { level: base.level, kind: base.kind, exponents: exps }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> EtaQuotient {
        EtaQuotient::generalized(31, &[(6, 1), (26, 1), (30, 1), (2, -1), (10, -1), (12, -1)]).unwrap()
    }

    fn table() -> Vec<Vec<i64>> {
        vec![
            vec![3, 0, -4, 2, -1],
            vec![0, 2, 3, -1, -4],
            vec![-4, 3, -1, 0, 2],
            vec![2, -1, 0, -4, 3],
            vec![-1, -4, 2, 3, 0],
        ]
    }

    #[test]
    fn yang_examples() {
        assert!(check_yang_conditions(&f1().exponents, 31).unwrap().ok);
        let partial = EtaQuotient::generalized(31, &[(6, 1), (26, 1), (2, -1), (10, -1)]).unwrap();
        assert!(!check_yang_conditions(&partial.exponents, 31).unwrap().ok);
        assert!(check_yang_conditions(&BTreeMap::new(), 31).unwrap().ok);
    }

    #[test]
    fn search_examples() {
        assert_eq!(exponent_search(&table(), 3, 3).unwrap(), vec![0, 0, 1, 1, 1]);
        assert_eq!(exponent_search(&table(), 4, 3).unwrap(), vec![0, 0, 1, 0, 0]);
        assert_eq!(exponent_search(&table(), 5, 3).unwrap(), vec![0, 0, 1, 0, 1]);
        assert!(matches!(exponent_search(&table(), 1, 4), Err(Error::NoSolution)));
    }

    #[test]
    fn table_matches_leading_exponents() {
        // ord of f_k at the split cusp a/31 equals ord at ∞ of f_{ka}
        let orbit = [1i64, 2, 3, 4, 8];
        for (i, &k) in orbit.iter().enumerate() {
            for (j, &a) in orbit.iter().enumerate() {
                let lead = f1().scaled(k * a).leading_exponent();
                assert_eq!(lead, crate::exactfield::int(table()[i][j]), "k={k} a={a}");
            }
        }
    }

    #[test]
    fn traces_match_expansions() {
        let orbit = [1i64, 2, 3, 4, 8];
        let t = orbit_trace(&orbit_product(&f1(), &orbit, &[0, 0, 1, 1, 1]), &orbit, &[], 6).unwrap();
        assert_eq!(t, QSeries::from_ints(-3, &[1, 2, 0, 2, -1, 3, 2, 1, 2]));
        let t = orbit_trace(&orbit_product(&f1(), &orbit, &[0, 0, 1, 0, 0]), &orbit, &[], 5).unwrap();
        assert_eq!(t, QSeries::from_ints(-4, &[1, 1, 1, 1, -1, 1, 3, 1, 1]));
        let t = orbit_trace(&orbit_product(&f1(), &orbit, &[0, 0, 1, 0, 1]), &orbit, &[], 6).unwrap();
        assert_eq!(t, QSeries::from_ints(-5, &[1, 1, 1, 1, 0, 2, 1, 5, 2, -1, 2]));
    }
}
