use crate::exactfield::arith::{divisors, gcd};
use crate::exactfield::{int, Rational};
use crate::qseries::{klein_j_minus_744, QSeries};
use num_traits::Zero;

/// J_n = n·((j − 744)|T(n)): coefficient at m is n·Σ_{d|gcd(m,n)} a(mn/d²)/d.
/// J_0 = 1. Exponents below `prec`.
pub fn hecke_j(n: u64, prec: i64) -> QSeries {
    if n == 0 {
        return QSeries::one(prec);
    }
    let ni = n as i64;
    let j = klein_j_minus_744((prec.max(1) - 1) * ni + 1);
    let a = |k: i64| -> Rational {
        if k < -1 {
            Rational::zero()
        } else {
            j.coeff(k)
        }
    };
    let mut terms = Vec::new();
    for m in -ni..prec {
        let g = gcd(m, ni).unsigned_abs();
        let mut c = Rational::zero();
        for d in divisors(g) {
            let d = d as i64;
            let k = m * ni / (d * d);
            let v = a(k);
            if !v.is_zero() {
                c += v / int(d);
            }
        }
        terms.push((m, c * int(ni)));
    }
    QSeries::from_terms(1, &terms, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisFamily, LevelConfig};

    #[test]
    fn first_images() {
        assert_eq!(hecke_j(0, 5), QSeries::one(5));
        let j1 = hecke_j(1, 3);
        assert_eq!(j1, QSeries::from_ints(-1, &[1, 0, 196884, 21493760]));
    }

    #[test]
    fn agrees_with_faber_route() {
        let fam = BasisFamily::from_config(&LevelConfig::shipped(1).unwrap(), 12, 10).unwrap();
        for n in 1..=10u64 {
            let h = hecke_j(n, 12);
            assert_eq!(h, fam.element(n).unwrap().truncate(12), "n={n}");
        }
    }
}
