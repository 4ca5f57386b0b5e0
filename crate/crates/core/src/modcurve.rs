//! Cusps, widths, genus and elliptic point counts of X₀(N).

use crate::error::{Error, Result};
use crate::exactfield::arith::{divisors, euler_phi, factorize, gcd_u};
use serde::Serialize;
use std::fmt;

/// Canonical representative e/v of a Γ₀(N)-class of cusps, v | N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cusp {
    pub v: u64,
    pub e: i64,
    pub level: u64,
}

impl Cusp {
    pub fn width(&self) -> u64 {
        cusp_width(self.v, self.level)
    }

    pub fn is_infinity(&self) -> bool {
        self.v == self.level
    }

    /// Label used in reports and configs: "0", "1/3", "inf".
    pub fn label(&self) -> String {
        if self.is_infinity() {
            "inf".into()
        } else if self.v == 1 {
            "0".into()
        } else {
            format!("{}/{}", self.e, self.v)
        }
    }

    /// The cusp as a rational number e/v (∞ is represented by 1/N).
    pub fn as_fraction(&self) -> (i64, i64) {
        (self.e, self.v as i64)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn cusp_width(v: u64, n: u64) -> u64 {
    n / gcd_u(v * v, n)
}

/// Smallest nonnegative e ≡ class mod gcd(v, N/v) with gcd(e, v) = 1.
pub fn canonical_cusp(e: i64, v: u64, n: u64) -> Result<Cusp> {
    if v == 0 || n % v != 0 {
        return Err(Error::InvalidArgument(format!("cusp denominator {v} does not divide {n}")));
    }
    let g = gcd_u(v, n / v) as i64;
    let start = e.rem_euclid(g);
    if crate::exactfield::arith::gcd(start, g) != 1 && g > 1 {
        return Err(Error::InvalidArgument(format!("{e}/{v} is not a valid cusp at level {n}")));
    }
    let mut c = start;
    while crate::exactfield::arith::gcd(c, v as i64) != 1 {
        c += g;
    }
    Ok(Cusp { v, e: c, level: n })
}

/// Parses "0", "inf", "∞", "e/v" into the canonical cusp at level n.
pub fn parse_cusp(s: &str, n: u64) -> Result<Cusp> {
    let s = s.trim();
    match s {
        "inf" | "oo" | "∞" | "infinity" => return canonical_cusp(1, n, n),
        "0" => return canonical_cusp(0, 1, n),
        _ => {}
    }
    let (e, v) = s.split_once('/').ok_or_else(|| Error::Parse(format!("bad cusp {s:?}")))?;
    let e: i64 = e.trim().parse().map_err(|_| Error::Parse(format!("bad cusp {s:?}")))?;
    let v: u64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad cusp {s:?}")))?;
    if crate::exactfield::arith::gcd(e, v as i64) != 1 {
        return Err(Error::Parse(format!("cusp {s:?} is not in lowest terms")));
    }
    canonical_cusp(e, v, n)
}

/// Γ₀(M)-class of the Γ₀(N)-cusp e/v for M | N: the pair (m·e, v′) with
/// v′ = gcd(v, M) and m = v/v′, canonicalized at level M.
pub fn reduce_cusp(e: i64, v: u64, n: u64, m: u64) -> Result<Cusp> {
    if n % m != 0 || n % v != 0 {
        return Err(Error::InvalidArgument(format!("reduce_cusp needs v | N and M | N (v={v}, M={m}, N={n})")));
    }
    let vp = gcd_u(v, m);
    let mult = (v / vp) as i64;
    canonical_cusp(mult * e, vp, m)
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelData {
    pub level: u64,
    pub index: u64,
    pub genus: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub cusps: Vec<Cusp>,
    /// ∞ is assumed not to be a Weierstrass point.
    pub infinity_not_weierstrass: bool,
}

impl LevelData {
    pub fn infinity(&self) -> Cusp {
        *self.cusps.iter().find(|c| c.is_infinity()).expect("∞ is always a cusp")
    }

    /// Cusps other than ∞, in canonical order.
    pub fn finite_cusps(&self) -> Vec<Cusp> {
        self.cusps.iter().filter(|c| !c.is_infinity()).copied().collect()
    }

    pub fn cusp(&self, label: &str) -> Result<Cusp> {
        parse_cusp(label, self.level)
    }
}

pub fn level_data(n: u64) -> LevelData {
    assert!(n >= 1);
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let index = primes.iter().fold(n, |acc, &p| acc / p * (p + 1));
    let nu2 = if n % 4 == 0 {
        0
    } else {
        primes.iter().fold(1i64, |acc, &p| acc * (1 + kronecker_minus1(p)))
    };
    let nu3 = if n % 9 == 0 {
        0
    } else {
        primes.iter().fold(1i64, |acc, &p| acc * (1 + kronecker_minus3(p)))
    };
    let mut cusps = Vec::new();
    for v in divisors(n) {
        let g = gcd_u(v, n / v);
        for e in 0..g.max(1) as i64 {
            if crate::exactfield::arith::gcd(e, g as i64) == 1 || g == 1 {
                cusps.push(canonical_cusp(e, v, n).expect("v divides n"));
            }
        }
    }
    cusps.sort();
    cusps.dedup();
    // 12g = 12 + μ − 3ν₂ − 4ν₃ − 6c
    let twelve_g = 12 + index as i64 - 3 * nu2 - 4 * nu3 - 6 * cusps.len() as i64;
    debug_assert_eq!(twelve_g % 12, 0);
    LevelData {
        level: n,
        index,
        genus: (twelve_g / 12) as u64,
        nu2: nu2 as u64,
        nu3: nu3 as u64,
        cusps,
        infinity_not_weierstrass: true,
    }
}

pub fn cusp_count(n: u64) -> u64 {
    divisors(n).into_iter().map(|v| euler_phi(gcd_u(v, n / v))).sum()
}

fn kronecker_minus1(p: u64) -> i64 {
    match p {
        2 => 0,
        _ if p % 4 == 1 => 1,
        _ => -1,
    }
}

fn kronecker_minus3(p: u64) -> i64 {
    match p {
        3 => 0,
        _ if p % 3 == 1 => 1,
        _ => -1,
    }
}
