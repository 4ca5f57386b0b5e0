//! The echelon basis 𝔣_{N,m} = q^{−m} + Σ_{ℓ=1}^{g} a_N(m,−ℓ)q^{−ℓ} + O(q).

pub mod config;
pub mod generator;
mod hecke;
pub mod yang;

pub use config::{shipped_levels, LevelConfig};
pub use generator::{Generator, GeneratorRegistry};
pub use hecke::hecke_j;
pub use yang::{check_yang_conditions, exponent_search, orbit_trace, YangCheck};

use crate::error::{Error, Result};
use crate::exactfield::{Coeff, Rational};
use crate::modcurve::level_data;
use crate::qseries::QSeries;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct BasisFamily {
    level: u64,
    genus: u64,
    precision: i64,
    elements: BTreeMap<u64, QSeries>,
}

/// Result of writing f as Σ c_m 𝔣_{N,m} + c₀.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub coeffs: BTreeMap<u64, Rational>,
    pub constant: Rational,
    pub residual: QSeries,
}

impl BasisFamily {
    /// Gauss elimination on the generators and their products up to pole order m_max.
    /// Every element is exact for exponents below `prec`.
    pub fn build(level: u64, generators: &[Box<dyn Generator>], prec: i64, m_max: u64) -> Result<Self> {
        let g = level_data(level).genus;
        let first = g + 1;
        let m_max = m_max.max(2 * g + 1);
        let want = prec + m_max as i64 + 2 * g as i64 + 2;
        let mut pool: BTreeMap<u64, Vec<QSeries>> = BTreeMap::new();
        for gen in generators {
            let p = gen.max_prec().map_or(want, |mp| mp.min(want));
            let s = gen.expand(p)?;
            let (low, lead) = s
                .leading()
                .ok_or_else(|| Error::Generator(format!("{} generator vanishes to precision", gen.kind())))?;
            if low >= 0 {
                return Err(Error::Generator(format!("{} generator has no pole at infinity", gen.kind())));
            }
            let order = (-low) as u64;
            if order <= g {
                return Err(Error::GapViolation(format!("generator with pole order {order} at genus {g}")));
            }
            let monic = s.scale(&lead.try_inv()?);
            pool.entry(order).or_default().push(monic);
        }
        let mut fam = BasisFamily { level, genus: g, precision: prec, elements: BTreeMap::new() };
        for m in first..=m_max {
            let cand = match pool.get(&m).and_then(|v| v.first()) {
                Some(s) => s.clone(),
                None if m >= 2 * first => fam.elements[&(m - first)].mul(&fam.elements[&first]),
                None => return Err(Error::MissingPoleOrder(m)),
            };
            let reduced = fam.reduce_top(cand, m)?;
            if reduced.prec() < prec {
                return Err(Error::Precision(format!(
                    "element of pole order {m} known below q^{}, requested q^{prec}",
                    reduced.prec()
                )));
            }
            fam.elements.insert(m, reduced);
        }
        // surplus generators must be consistent with the family
        for (&order, list) in &pool {
            if order > m_max {
                continue;
            }
            for s in list.iter().skip(1) {
                let e = fam.expand_in_basis(s)?;
                if !e.residual.is_zero() {
                    return Err(Error::Generator(format!("generators of pole order {order} disagree")));
                }
            }
        }
        Ok(fam)
    }

    pub fn from_config(cfg: &LevelConfig, prec: i64, m_max: u64) -> Result<Self> {
        let gens = cfg.generators(&GeneratorRegistry::default())?;
        Self::build(cfg.level, &gens, prec, m_max)
    }

    /// Clears q^{−j} for g < j < m and the constant; leaves the gap terms.
    fn reduce_top(&self, mut s: QSeries, m: u64) -> Result<QSeries> {
        let g = self.genus;
        for j in (g + 1..m).rev() {
            let c = s.coeff(-(j as i64));
            if !c.is_zero() {
                s = s.sub(&self.elements[&j].scale(&c));
            }
        }
        let c0 = s.try_coeff(0)?;
        if !c0.is_zero() {
            s = s.sub(&QSeries::constant(c0, s.prec()));
        }
        match s.leading() {
            Some((low, c)) if low == -(m as i64) && c.is_one() => Ok(s),
            Some((low, _)) if low < 0 && (-low) as u64 <= g => {
                Err(Error::GapViolation(format!("elimination left a pole of order {} at genus {g}", -low)))
            }
            _ => Err(Error::Generator(format!("candidate for pole order {m} has the wrong leading term"))),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// Exponent bound below which every element is exact.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn m_max(&self) -> u64 {
        *self.elements.keys().last().unwrap()
    }

    pub fn orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.keys().copied()
    }

    /// 𝔣_{N,m}; m = 0 gives the constant 1.
    pub fn element(&self, m: u64) -> Result<QSeries> {
        if m == 0 {
            return Ok(QSeries::one(self.precision));
        }
        self.elements
            .get(&m)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("no basis element of pole order {m}")))
    }

    /// a_N(m, n), the coefficient of qⁿ in 𝔣_{N,m}.
    pub fn a(&self, m: u64, n: i64) -> Result<Rational> {
        if m == 0 {
            return Ok(if n == 0 { Rational::one() } else { Rational::zero() });
        }
        let e = self
            .elements
            .get(&m)
            .ok_or_else(|| Error::InvalidArgument(format!("no basis element of pole order {m}")))?;
        e.try_coeff(n)
    }

    /// Principal-part matching; the residual must vanish exactly.
    pub fn expand_in_basis(&self, f: &QSeries) -> Result<Expansion> {
        let g = self.genus as i64;
        let mut r = f.clone();
        let mut coeffs = BTreeMap::new();
        let top = (-f.low()).max(0) as u64;
        if top > self.m_max() {
            return Err(Error::InvalidArgument(format!(
                "pole order {top} exceeds the largest basis element {}",
                self.m_max()
            )));
        }
        for j in (self.genus + 1..=top).rev() {
            let c = r.coeff(-(j as i64));
            if !c.is_zero() {
                r = r.sub(&self.elements[&j].scale(&c));
                coeffs.insert(j, c);
            }
        }
        for l in 1..=g {
            if !r.coeff(-l).is_zero() {
                return Err(Error::GapViolation(format!("coefficient of q^-{l} does not match the basis")));
            }
        }
        let constant = r.try_coeff(0)?;
        let residual = r.sub(&QSeries::constant(constant.clone(), r.prec()));
        if !residual.is_zero() {
            return Err(Error::Residual(format!("expansion leaves {residual}")));
        }
        Ok(Expansion { coeffs, constant, residual })
    }

    /// 𝔤_{N,−ℓ} = q^ℓ + Σ_{m>g} (−a_N(m,−ℓ)) q^m, known below q^{m_max+1}.
    pub fn dual_family(&self, l: u64) -> Result<QSeries> {
        if l > self.genus {
            return Err(Error::InvalidArgument(format!("dual index {l} exceeds genus {}", self.genus)));
        }
        let prec = self.m_max() as i64 + 1;
        let mut terms = vec![(l as i64, Rational::one())];
        for m in self.orders() {
            terms.push((m as i64, -self.a(m, -(l as i64))?));
        }
        Ok(QSeries::from_terms(1, &terms, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::int;

    fn fam(n: u64, prec: i64, m_max: u64) -> BasisFamily {
        BasisFamily::from_config(&LevelConfig::shipped(n).unwrap(), prec, m_max).unwrap()
    }

    #[test]
    fn level27_list() {
        let f = fam(27, 16, 8);
        let e2 = f.element(2).unwrap();
        assert_eq!(e2.truncate(11), QSeries::from_terms(1, &[(-2, int(1)), (1, int(1)), (4, int(2)), (7, int(-1)), (10, int(1))], 11));
        let e3 = f.element(3).unwrap();
        assert_eq!(e3.truncate(16), QSeries::from_terms(1, &[(-3, int(1)), (6, int(5)), (15, int(-7))], 16));
        let e4 = f.element(4).unwrap();
        assert_eq!(e4.truncate(6), QSeries::from_terms(1, &[(-4, int(1)), (-1, int(2)), (2, int(5)), (5, int(2))], 6));
        let e5 = f.element(5).unwrap();
        assert_eq!(e5.truncate(8), QSeries::from_terms(1, &[(-5, int(1)), (1, int(1)), (4, int(2)), (7, int(7))], 8));
        let e6 = f.element(6).unwrap();
        assert_eq!(e6.truncate(13), QSeries::from_terms(1, &[(-6, int(1)), (3, int(10)), (12, int(11))], 13));
    }

    #[test]
    fn level27_cube_relation() {
        let f = fam(27, 30, 12);
        let cube = f.element(2).unwrap().pow(3).unwrap();
        let e = f.expand_in_basis(&cube).unwrap();
        assert_eq!(e.coeffs, BTreeMap::from([(6, int(1)), (3, int(3))]));
        assert_eq!(e.constant, int(9));
        let e1 = f.expand_in_basis(&QSeries::one(20)).unwrap();
        assert!(e1.coeffs.is_empty());
        assert_eq!(e1.constant, int(1));
    }

    #[test]
    fn level31_list() {
        let f = fam(31, 8, 10);
        let want3 = QSeries::from_ints(-3, &[1, 2, 0, 0, -1, 3, 2, 1, 2]);
        let want4 = QSeries::from_ints(-4, &[1, 0, -1, 1, 0, 2, 0, -1, 0, -2]);
        let want5 = QSeries::from_ints(-5, &[1, 0, 0, 0, -1, 0, 0, 2, 1, -2, 2]);
        assert_eq!(f.element(3).unwrap().truncate(6), want3);
        assert_eq!(f.element(4).unwrap().truncate(6), want4);
        assert_eq!(f.element(5).unwrap().truncate(6), want5);
    }

    #[test]
    fn echelon_shape() {
        for n in [2u64, 5, 10, 27, 31] {
            let f = fam(n, 10, 14);
            let g = f.genus();
            for m in f.orders() {
                let s = f.element(m).unwrap();
                for j in g + 1..=m {
                    let want = if j == m { int(1) } else { int(0) };
                    assert_eq!(s.coeff(-(j as i64)), want, "N={n} m={m} j={j}");
                }
                assert_eq!(s.coeff(0), int(0));
            }
        }
    }

    #[test]
    fn products_expand_exactly() {
        for n in [27u64, 31] {
            let f = fam(n, 12, 16);
            let first = f.genus() + 1;
            for a in first..=8 {
                for b in first..=8 {
                    let p = f.element(a).unwrap().mul(&f.element(b).unwrap());
                    f.expand_in_basis(&p).unwrap();
                }
            }
        }
    }

    #[test]
    fn duals() {
        let f = fam(27, 10, 20);
        let g1 = f.dual_family(1).unwrap();
        assert_eq!(g1.coeff(1), int(1));
        assert_eq!(g1.coeff(4), int(-2));
        let g0 = f.dual_family(0).unwrap();
        assert_eq!(g0, QSeries::one(21));
        assert!(f.dual_family(2).is_err());
    }

    #[test]
    fn level11_relations() {
        let f = fam(11, 40, 8);
        assert_eq!(f.genus(), 1);
        assert_eq!(f.a(2, -1).unwrap(), int(2));
        assert_eq!(f.a(3, -1).unwrap(), int(1));
        assert_eq!(f.a(4, -1).unwrap(), int(-2));
        let (f2, f3) = (f.element(2).unwrap(), f.element(3).unwrap());
        // 𝔣₂² − 4𝔣₃ − 4𝔣₂ has principal part q^{−4} and constant term 36
        let rel = f2.mul(&f2).sub(&f3.scale(&int(4))).sub(&f2.scale(&int(4)));
        let f4 = f.element(4).unwrap().add(&QSeries::constant(int(36), 40));
        assert_eq!(rel.truncate(30), f4.truncate(30));
        // the dual at q^1 is the cusp form η(τ)²η(11τ)²
        let delta11 = crate::qseries::eta_expand(
            &crate::qseries::EtaQuotient::classical(11, &[(1, 2), (11, 2)]).unwrap(),
            9,
        )
        .unwrap();
        assert_eq!(f.dual_family(1).unwrap(), delta11);
    }
}
