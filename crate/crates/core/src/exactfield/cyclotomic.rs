use super::arith::{euler_phi, lcm_u};
use super::{int, Coeff, Rational};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Integer coefficients of Φ_n, lowest degree first.
fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in super::arith::divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = poly_div_exact(&num, &den);
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = r[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                r[i + j] -= c * dj;
            }
        }
    }
    q
}

/// Element of ℚ(ζ_n) in the power basis 1, ζ, …, ζ^{φ(n)−1}.
#[derive(Clone, Debug)]
pub struct CycNumber {
    conductor: u64,
    coords: Vec<Rational>,
}

impl CycNumber {
    pub fn from_coords(conductor: u64, mut coords: Vec<Rational>) -> Self {
        assert!(conductor >= 1);
        let phi = euler_phi(conductor) as usize;
        if coords.len() > phi {
            coords = reduce(conductor, coords);
        }
        coords.resize(phi, Rational::zero());
        CycNumber { conductor, coords }
    }

    pub fn rational(r: Rational) -> Self {
        CycNumber { conductor: 1, coords: vec![r] }
    }

    pub fn zero_in(conductor: u64) -> Self {
        Self::from_coords(conductor, vec![])
    }

    /// ζ_n^k.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        Self::from_coords(n, c)
    }

    pub fn zeta(n: u64) -> Self {
        Self::zeta_pow(n, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn promote(&self, n: u64) -> Result<Self> {
        if n % self.conductor != 0 {
            return Err(Error::BadPromotion { from: self.conductor, to: n });
        }
        if n == self.conductor {
            return Ok(self.clone());
        }
        let step = (n / self.conductor) as usize;
        let mut c = vec![Rational::zero(); step * self.coords.len().max(1)];
        for (i, x) in self.coords.iter().enumerate() {
            c[i * step] = x.clone();
        }
        Ok(Self::from_coords(n, c))
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        let n = lcm_u(self.conductor, o.conductor);
        (self.promote(n).unwrap(), o.promote(n).unwrap())
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        CycNumber { conductor: a.conductor, coords }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        CycNumber { conductor: self.conductor, coords: self.coords.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let len = a.coords.len();
        let mut prod = vec![Rational::zero(); 2 * len - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_coords(a.conductor, prod)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNumber { conductor: self.conductor, coords: self.coords.iter().map(|x| x * r).collect() }
    }

    /// Multiplicative inverse via the multiplication-by-self matrix.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("cyclotomic inverse"));
        }
        let n = self.conductor;
        let d = self.coords.len();
        // column j = self * ζ^j
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self.mul(&Self::zeta_pow(n, j as i64));
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coords[i].clone();
            }
        }
        m[0][d] = Rational::one();
        let x = crate::linalg::solve_augmented(m)?;
        Ok(CycNumber { conductor: n, coords: x })
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.conductor;
        let mut acc = vec![Rational::zero(); n as usize];
        for (i, x) in self.coords.iter().enumerate() {
            let e = (n as usize - i) % n as usize;
            acc[e] += x;
        }
        Self::from_coords(n, acc)
    }

    /// Rational value if the element lies in ℚ.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coords.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| Complex64::from_polar(super::rational_to_f64(x), 2.0 * PI * i as f64 / n))
            .sum()
    }

    /// Smallest conductor representation when the value is rational.
    pub fn simplify(&self) -> Self {
        match self.to_rational() {
            Some(r) => Self::rational(r),
            None => self.clone(),
        }
    }
}

fn reduce(n: u64, mut c: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    for k in (d..c.len()).rev() {
        if c[k].is_zero() {
            continue;
        }
        let lead = std::mem::replace(&mut c[k], Rational::zero());
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                c[k - d + j] -= &lead * int(pj);
            }
        }
    }
    c.truncate(d);
    c
}

impl PartialEq for CycNumber {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.common(o);
        a.coords == b.coords
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]@{}", parts.join(","), self.conductor)
    }
}

impl Zero for CycNumber {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

impl One for CycNumber {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl std::ops::Add for CycNumber {
    type Output = CycNumber;
    fn add(self, o: Self) -> Self {
        CycNumber::add(&self, &o)
    }
}

impl std::ops::Mul for CycNumber {
    type Output = CycNumber;
    fn mul(self, o: Self) -> Self {
        CycNumber::mul(&self, &o)
    }
}

impl Coeff for CycNumber {
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn from_rational(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
    fn scale(&self, r: &Rational) -> Self {
        CycNumber::scale(self, r)
    }
    fn to_complex(&self) -> Complex64 {
        CycNumber::to_complex(self)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.to_rational()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// 2 / ((1 − ζ_u^d)(1 − ζ_u^{−d})), the exact value of 1/(1 − cos(2πd/u)).
pub fn inv_one_minus_cos(d: i64, u: u64) -> Result<CycNumber> {
    if d.rem_euclid(u as i64) == 0 {
        return Err(Error::Pole { d, u });
    }
    let one = CycNumber::rational(Rational::one());
    let a = one.sub(&CycNumber::zeta_pow(u, d));
    let b = one.sub(&CycNumber::zeta_pow(u, -d));
    Ok(a.mul(&b).inv()?.scale(&int(2)))
}

/// √−3 = ζ_3 − ζ_3² = 1 + 2ζ_3.
pub fn sqrt_minus_three() -> CycNumber {
    CycNumber::from_coords(3, vec![int(1), int(2)])
}
