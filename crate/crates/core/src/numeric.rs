//! Floating-point evaluation of q-series on ℍ, approximate zeros, and numerical
//! checks of exact minimal polynomials.

use crate::error::{Error, Result};
use crate::exactfield::{rational_to_f64, Rational};
use crate::qseries::QSeries;
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;

/// A q-series with f64 coefficients, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatSeries {
    denom: u64,
    low: i64,
    coeffs: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    /// Estimated size of the omitted tail; infinite when the coefficients outgrow |q|.
    pub tail: f64,
}

impl FloatSeries {
    pub fn new(f: &QSeries) -> Self {
        FloatSeries { denom: f.denom(), low: f.low(), coeffs: f.coeffs().iter().map(rational_to_f64).collect() }
    }

    /// q^{1/denom} at τ.
    fn root_q(&self, tau: Complex64) -> Complex64 {
        (Complex64::i() * 2.0 * PI * tau / self.denom as f64).exp()
    }

    /// Partial sum with a geometric tail estimate fitted to the last kept coefficients.
    pub fn eval(&self, tau: Complex64) -> Result<Evaluation> {
        if tau.im <= 0.0 {
            return Err(Error::Numeric(format!("τ = {tau} is not in the upper half-plane")));
        }
        let (value, _) = self.eval_with_derivative(tau);
        Ok(Evaluation { value, tail: self.tail_bound(tau.im) })
    }

    /// f(τ) and df/dτ.
    pub fn eval_with_derivative(&self, tau: Complex64) -> (Complex64, Complex64) {
        let x = self.root_q(tau);
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        // Horner in x from the top, then multiply by x^low
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            v = v * x + c;
            dv = dv * x + c * i as f64;
        }
        let xl = x.powi(self.low as i32);
        let scale = Complex64::i() * 2.0 * PI / self.denom as f64;
        let f = v * xl;
        // d/dτ Σ c_i x^{low+i} = (2πi/denom)·Σ (low+i) c_i x^{low+i}
        let df = scale * (dv * xl + f * self.low as f64);
        (f, df)
    }

    fn tail_bound(&self, im: f64) -> f64 {
        let len = self.coeffs.len();
        if len == 0 {
            return 0.0;
        }
        let r = (-2.0 * PI * im / self.denom as f64).exp();
        let w = (len / 8).max(1);
        let window_max = |lo: usize, hi: usize| self.coeffs[lo..hi].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let a1 = window_max(len.saturating_sub(w), len);
        let a0 = if len >= 2 * w { window_max(len - 2 * w, len - w) } else { a1 };
        let g = if a0 > 0.0 && a1 > a0 { (a1 / a0).powf(1.0 / w as f64) } else { 1.0 };
        if g * r >= 1.0 {
            return f64::INFINITY;
        }
        let prec = self.low + len as i64;
        a1.max(1.0) * g * r.powf(prec as f64) / (1.0 - g * r)
    }
}

/// f(τ) with its tail estimate.
pub fn eval_series(f: &QSeries, tau: Complex64) -> Result<Evaluation> {
    FloatSeries::new(f).eval(tau)
}

/// f(τ), or an error when the tail estimate exceeds `tol`.
pub fn eval_within(f: &QSeries, tau: Complex64, tol: f64) -> Result<Complex64> {
    let e = eval_series(f, tau)?;
    if !(e.tail <= tol) {
        return Err(Error::Numeric(format!("tail bound {:e} at τ = {tau} exceeds {tol:e}; raise the precision", e.tail)));
    }
    Ok(e.value)
}

/// Whether γz = w for some γ ∈ Γ₀(N).
pub fn gamma0_equivalent(z: Complex64, w: Complex64, n: u64, tol: f64) -> bool {
    let close = |a: Complex64, b: Complex64| {
        let dr = a.re - b.re;
        (a.im - b.im).abs() < tol && (dr - dr.round()).abs() < tol
    };
    if close(z, w) {
        return true;
    }
    let (y, yw) = (z.im, w.im);
    let kmax = (1.0 / (n as f64 * (y * yw).sqrt())).floor() as i64;
    let s = (y / yw).sqrt();
    for k in 1..=kmax {
        let c = k * n as i64;
        let cx = c as f64 * z.re;
        let d_lo = (-cx - s).floor() as i64;
        let d_hi = (-cx + s).ceil() as i64;
        for d in d_lo..=d_hi {
            let eg = c.extended_gcd(&d);
            if eg.gcd.abs() != 1 {
                continue;
            }
            // a·d − b·c = 1 from x·c + y·d = ±1
            let (a, b) = (eg.y * eg.gcd, -eg.x * eg.gcd);
            let zz = (z * a as f64 + b as f64) / (z * c as f64 + d as f64);
            if close(zz, w) {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct ZeroSearch {
    /// Lowest imaginary part searched.
    pub floor: f64,
    pub im_max: f64,
    pub re_steps: usize,
    /// Ratio between consecutive imaginary grid lines.
    pub im_ratio: f64,
    /// Accepted |f(z)| after refinement.
    pub tol: f64,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        ZeroSearch { floor: 0.05, im_max: 1.5, re_steps: 400, im_ratio: 1.02, tol: 1e-8 }
    }
}

fn newton(f: &FloatSeries, mut z: Complex64, floor: f64) -> Option<Complex64> {
    for _ in 0..60 {
        let (v, dv) = f.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            return None;
        }
        let step = v / dv;
        z -= step;
        if z.im < floor * 0.5 || !z.re.is_finite() {
            return None;
        }
        if step.norm() < 1e-14 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    Some(z)
}

/// Up to `count_hint` pairwise Γ₀(N)-inequivalent zeros in the band |Re τ| ≤ 1/2,
/// floor ≤ Im τ ≤ im_max; errors when fewer are found.
pub fn locate_zeros(f: &QSeries, n: u64, count_hint: usize, opts: &ZeroSearch) -> Result<Vec<Complex64>> {
    if count_hint == 0 {
        return Ok(Vec::new());
    }
    let fs = FloatSeries::new(f);
    // the floor rises until the truncation tail is negligible
    let mut floor = opts.floor;
    while !(fs.tail_bound(floor) < opts.tol * 1e-3) {
        floor *= 1.05;
        if floor > opts.im_max {
            return Err(Error::Numeric("precision too low for the whole search band".into()));
        }
    }
    let mut ims = vec![floor];
    while *ims.last().unwrap() < opts.im_max {
        let next = ims.last().unwrap() * opts.im_ratio;
        ims.push(next);
    }
    let res: Vec<f64> = (0..=opts.re_steps).map(|i| -0.5 + i as f64 / opts.re_steps as f64).collect();
    let grid: Vec<Vec<f64>> =
        ims.iter().map(|&y| res.iter().map(|&x| fs.eval_with_derivative(Complex64::new(x, y)).0.norm()).collect()).collect();
    let mut candidates = Vec::new();
    for i in 1..ims.len() - 1 {
        for j in 0..res.len() {
            let v = grid[i][j];
            let (jl, jr) = (if j == 0 { res.len() - 2 } else { j - 1 }, if j + 1 == res.len() { 1 } else { j + 1 });
            let neighbours = [grid[i - 1][j], grid[i + 1][j], grid[i][jl], grid[i][jr], grid[i - 1][jl], grid[i + 1][jr]];
            if neighbours.iter().all(|&u| v <= u) {
                candidates.push((v, Complex64::new(res[j], ims[i])));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut found: Vec<Complex64> = Vec::new();
    for (_, z0) in candidates {
        let Some(mut z) = newton(&fs, z0, floor) else { continue };
        z.re -= z.re.round();
        if fs.eval_with_derivative(z).0.norm() >= opts.tol {
            continue;
        }
        if found.iter().any(|&w| gamma0_equivalent(z, w, n, 1e-7)) {
            continue;
        }
        found.push(z);
        if found.len() == count_hint {
            break;
        }
    }
    if found.len() < count_hint {
        return Err(Error::Numeric(format!(
            "found {} of {count_hint} zeros above Im τ = {floor:.4}",
            found.len()
        )));
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(found)
}

/// P at a complex point; coefficients lowest degree first.
pub fn eval_poly(p: &[Rational], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + rational_to_f64(c))
}

#[derive(Clone, Debug)]
pub struct MinpolyCheck {
    pub values: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub ok: bool,
}

/// max_s |P(g(z_s))| < tol, with g the basis function evaluated at each point.
pub fn verify_minpoly(points: &[Complex64], g: &QSeries, p: &[Rational], tol: f64) -> Result<MinpolyCheck> {
    let gs = FloatSeries::new(g);
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    for &z in points {
        let e = gs.eval(z)?;
        if !(e.tail < tol) {
            return Err(Error::Numeric(format!("tail bound {:e} at τ = {z} exceeds {tol:e}", e.tail)));
        }
        values.push(e.value);
        residuals.push(eval_poly(p, e.value).norm());
    }
    let max_residual = residuals.iter().fold(0.0f64, |m, &r| m.max(r));
    Ok(MinpolyCheck { values, residuals, max_residual, ok: max_residual < tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::int;
    use crate::qseries::{delta, eisenstein_series};

    fn j(prec: i64) -> QSeries {
        let e4 = eisenstein_series(4, prec).unwrap();
        e4.mul(&e4).mul(&e4).div(&delta(prec + 1)).unwrap()
    }

    #[test]
    fn classical_values() {
        let e2 = eisenstein_series(2, 20).unwrap();
        let v = eval_within(&e2, Complex64::new(0.0, 10.0), 1e-12).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        let j = j(60);
        let at_i = eval_within(&j, Complex64::new(0.0, 1.0), 1e-8).unwrap();
        assert!((at_i - 1728.0).norm() < 1e-6, "{at_i}");
        let rho = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let at_rho = eval_within(&j, rho, 1e-8).unwrap();
        assert!(at_rho.norm() < 1e-6, "{at_rho}");
    }

    #[test]
    fn tail_shrinks_with_precision() {
        let tau = Complex64::new(0.1, 0.3);
        let tails: Vec<f64> = [20, 40, 80].iter().map(|&p| eval_series(&j(p), tau).unwrap().tail).collect();
        assert!(tails[0] > tails[1] && tails[1] > tails[2], "{tails:?}");
    }

    #[test]
    fn equivalence() {
        let z = Complex64::new(0.13, 0.41);
        // γ = (1 0; 11 1)
        let w = z / (z * 11.0 + 1.0);
        assert!(gamma0_equivalent(z, w, 11, 1e-9));
        assert!(gamma0_equivalent(w, z, 11, 1e-9));
        assert!(gamma0_equivalent(z, z + 3.0, 11, 1e-9));
        assert!(!gamma0_equivalent(z, Complex64::new(-0.13, 0.41), 11, 1e-9));
    }

    #[test]
    fn delta_has_no_zeros() {
        assert!(locate_zeros(&delta(40), 1, 0, &ZeroSearch::default()).unwrap().is_empty());
        assert!(locate_zeros(&delta(40), 1, 1, &ZeroSearch { re_steps: 60, ..Default::default() }).is_err());
    }

    #[test]
    fn poly_eval() {
        let p = [int(-9), int(0), int(0), int(1)];
        let x = Complex64::new(9f64.cbrt(), 0.0);
        assert!(eval_poly(&p, x).norm() < 1e-12);
    }
}
