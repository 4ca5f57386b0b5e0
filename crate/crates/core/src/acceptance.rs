//! The acceptance criteria as runnable checks, shared by the test suite and `selftest`.

use crate::basis::{exponent_search, orbit_trace, yang::orbit_product, BasisFamily, LevelConfig};
use crate::divisor::{divisor_sums, eta_cusp_orders, gtfne_residual, product_exponents, serre_quotient, serre_quotient_direct, FormInput};
use crate::eisenstein::{e2diff_const, eis_basis, solve_ef, solve_ef_constants, EisKind};
use crate::error::Result;
use crate::exactfield::{gauss_sum, int, primitive_characters, rat, sqrt_minus_three, CycNumber, Rational};
use crate::forms::build_form;
use crate::minpoly::{minimal_polynomial, newton_minpoly, power_sums_of};
use crate::modcurve::{parse_cusp, Cusp};
use crate::numeric::{locate_zeros, verify_minpoly, ZeroSearch};
use crate::qseries::{delta, eisenstein_series, eta_expand, klein_j_minus_744, EtaQuotient, QSeries};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Non-blocking criteria are reported but do not fail a run.
    pub blocking: bool,
    pub checks: Vec<Check>,
}

impl Criterion {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One summary line, then one indented line per check.
    pub fn report(&self) -> String {
        let tag = if self.pass() { "PASS" } else { "FAIL" };
        let nb = if self.blocking { "" } else { " (non-blocking)" };
        let mut s = format!("criterion {:>2} {tag}{nb}: {}", self.id, self.title);
        for c in &self.checks {
            let mark = if c.pass { "ok " } else { "BAD" };
            s.push_str(&format!("\n    [{mark}] {}: {}", c.name, c.detail));
        }
        s
    }
}

/// Compact rendering for report lines.
trait Show {
    fn show(&self) -> String;
}

impl Show for Rational {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for u32 {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for QSeries {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for CycNumber {
    fn show(&self) -> String {
        if let Some(r) = self.to_rational() {
            return r.to_string();
        }
        // r·√−3 is the common shape at level 27
        match self.mul(&sqrt_minus_three()).to_rational() {
            Some(r) => format!("{}·√-3", -r / int(3)),
            None => self.to_string(),
        }
    }
}

impl<T: Show> Show for Vec<T> {
    fn show(&self) -> String {
        let items: Vec<String> = self.iter().map(Show::show).collect();
        format!("[{}]", items.join(", "))
    }
}

impl<T: Show> Show for Option<T> {
    fn show(&self) -> String {
        self.as_ref().map_or("none".into(), Show::show)
    }
}

impl<A: Show, B: Show> Show for (A, B) {
    fn show(&self) -> String {
        format!("({}, {})", self.0.show(), self.1.show())
    }
}

fn clip(s: String) -> String {
    const MAX: usize = 160;
    if s.chars().count() <= MAX {
        s
    } else {
        format!("{}…", s.chars().take(MAX).collect::<String>())
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn eq<T: PartialEq + Show>(&mut self, name: &str, got: T, want: T) {
        let pass = got == want;
        let detail = if pass { clip(got.show()) } else { format!("got {}, expected {}", clip(got.show()), clip(want.show())) };
        self.0.push(Check { name: name.into(), pass, detail });
    }

    fn truth(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    /// Runs a fallible block; an error counts as a failed check.
    fn run(&mut self, name: &str, f: impl FnOnce(&mut Checks) -> Result<()>) {
        if let Err(e) = f(self) {
            self.truth(name, false, format!("error: {e}"));
        }
    }
}

fn family(n: u64, prec: i64, m_max: u64) -> Result<BasisFamily> {
    BasisFamily::from_config(&LevelConfig::shipped(n)?, prec, m_max)
}

fn named(name: &str, level: u64, prec: i64) -> Result<FormInput> {
    Ok(build_form(name, level, prec, None, &BTreeMap::new(), None)?.input)
}

fn terms(pairs: &[(i64, i64)], prec: i64) -> QSeries {
    let t: Vec<(i64, Rational)> = pairs.iter().map(|&(e, c)| (e, int(c))).collect();
    QSeries::from_terms(1, &t, prec)
}

fn criterion1() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 27", |c| {
        let f = family(27, 16, 6)?;
        let want: [(u64, &[(i64, i64)], i64); 5] = [
            (2, &[(-2, 1), (1, 1), (4, 2), (7, -1), (10, 1)], 11),
            (3, &[(-3, 1), (6, 5), (15, -7)], 16),
            (4, &[(-4, 1), (-1, 2), (2, 5), (5, 2)], 6),
            (5, &[(-5, 1), (1, 1), (4, 2), (7, 7)], 8),
            (6, &[(-6, 1), (3, 10), (12, 11)], 13),
        ];
        for (m, t, p) in want {
            c.eq(&format!("f_27,{m}"), f.element(m)?.truncate(p), terms(t, p));
        }
        Ok(())
    });
    c.run("level 31", |c| {
        let f = family(31, 8, 5)?;
        let want = [
            (3, QSeries::from_ints(-3, &[1, 2, 0, 0, -1, 3, 2, 1, 2])),
            (4, QSeries::from_ints(-4, &[1, 0, -1, 1, 0, 2, 0, -1, 0, -2])),
            (5, QSeries::from_ints(-5, &[1, 0, 0, 0, -1, 0, 0, 2, 1, -2, 2])),
        ];
        for (m, w) in want {
            c.eq(&format!("f_31,{m}"), f.element(m)?.truncate(6), w);
        }
        Ok(())
    });
    c.run("level 31 traces", |c| {
        let f1 = EtaQuotient::generalized(31, &[(6, 1), (26, 1), (30, 1), (2, -1), (10, -1), (12, -1)])?;
        let orbit = [1i64, 2, 3, 4, 8];
        let cases = [
            ([0, 0, 1, 1, 1], 6, QSeries::from_ints(-3, &[1, 2, 0, 2, -1, 3, 2, 1, 2])),
            ([0, 0, 1, 0, 0], 5, QSeries::from_ints(-4, &[1, 1, 1, 1, -1, 1, 3, 1, 1])),
            ([0, 0, 1, 0, 1], 6, QSeries::from_ints(-5, &[1, 1, 1, 1, 0, 2, 1, 5, 2, -1, 2])),
        ];
        for (x, p, w) in cases {
            c.eq(&format!("trace {x:?}"), orbit_trace(&orbit_product(&f1, &orbit, &x), &orbit, &[], p)?, w);
        }
        Ok(())
    });
    c.0
}

fn criterion2() -> Vec<Check> {
    let table = vec![
        vec![3, 0, -4, 2, -1],
        vec![0, 2, 3, -1, -4],
        vec![-4, 3, -1, 0, 2],
        vec![2, -1, 0, -4, 3],
        vec![-1, -4, 2, 3, 0],
    ];
    let mut c = Checks::new();
    c.run("search", |c| {
        c.eq("pole order 3", exponent_search(&table, 3, 3)?, vec![0, 0, 1, 1, 1]);
        Ok(())
    });
    c.0
}

fn criterion3() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 11 duality", |c| {
        let f = family(11, 40, 30)?;
        c.eq("a(2,-1)", f.a(2, -1)?, int(2));
        c.eq("a(3,-1)", f.a(3, -1)?, int(1));
        c.eq("a(4,-1)", f.a(4, -1)?, int(-2));
        let d11 = eta_expand(&EtaQuotient::classical(11, &[(1, 2), (11, 2)])?, 31)?;
        c.eq("g_11,-1 through q^30", f.dual_family(1)?, d11);
        Ok(())
    });
    c.0
}

fn criterion4() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 11 form", |c| {
        let f = named("example6_1", 11, 20)?;
        c.eq("c(1..4)", product_exponents(&f, 4)?, vec![int(0), int(-12), int(-12), int(66)]);
        Ok(())
    });
    c.run("level 27 form", |c| {
        let f = named("example6_3", 27, 20)?;
        let mut want = vec![int(0); 8];
        want.push(int(-5));
        c.eq("c(1..9)", product_exponents(&f, 9)?, want);
        Ok(())
    });
    c.run("Delta", |c| {
        let f = FormInput::new(delta(40), 12, 1, BTreeMap::new())?;
        c.eq("c(1..30)", product_exponents(&f, 30)?, vec![int(24); 30]);
        Ok(())
    });
    c.0
}

/// Cusps of Γ₀(27) in the order s₁..s₅ = 0, 1/3, 1/9, 2/3, 2/9.
fn cusps27() -> Result<Vec<Cusp>> {
    ["0", "1/3", "1/9", "2/3", "2/9"].iter().map(|l| parse_cusp(l, 27)).collect()
}

fn criterion5() -> Vec<Check> {
    let mut c = Checks::new();
    c.eq("E2diff(11) at 0", e2diff_const(11, 1), rat(10, 11));
    c.run("level 27 character constants", |c| {
        let basis = eis_basis(27)?;
        let cusps = cusps27()?;
        let s = |r: Rational| sqrt_minus_three().scale(&r);
        let z = CycNumber::zero;
        let e4 = basis.iter().find(|b| matches!(b.kind, EisKind::CharEis { t: 1, .. })).expect("E(4)");
        let e5 = basis.iter().find(|b| matches!(b.kind, EisKind::CharEis { t: 3, .. })).expect("E(5)");
        let got4 = cusps.iter().map(|s| e4.constant_at(s).map(|x| x.simplify())).collect::<Result<Vec<_>>>()?;
        let want4 = vec![z(), s(rat(-2, 9)), s(rat(-2, 9)), s(rat(2, 9)), s(rat(2, 9))];
        c.truth("E(4) vector", got4 == want4, format!("got {}; expected {}", got4.show(), want4.show()));
        let got5 = cusps.iter().map(|s| e5.constant_at(s).map(|x| x.simplify())).collect::<Result<Vec<_>>>()?;
        let want5 = vec![z(), z(), s(rat(-2, 27)), z(), s(rat(2, 27))];
        c.truth("E(5) vector", got5 == want5, format!("got {}; expected {}", got5.show(), want5.show()));
        Ok(())
    });
    c.0
}


/// Reference α-formulas in terms of c₁..c₅ at s₁..s₅ (α₃'s repeated c₁ read as c₂).
fn reference_alphas(c: &[Rational]) -> Vec<CycNumber> {
    let lin = |w: [Rational; 5]| w.iter().zip(c).fold(Rational::zero(), |a, (x, y)| a + x * y);
    let r = |n, d| rat(n, d);
    let q = CycNumber::rational;
    let a1 = lin([r(3, 8), r(-5, 24), r(1, 48), r(-5, 24), r(1, 48)]);
    let a2 = lin([r(-3, 8), r(1, 48), r(-1, 12), r(1, 48), r(-1, 12)]);
    let a3 = lin([r(9, 8), r(1, 8), r(1, 16), r(1, 8), r(1, 16)]);
    let a4 = lin([r(0, 1), r(3, 4), r(0, 1), r(-3, 4), r(0, 1)]);
    let a5 = lin([r(0, 1), r(-9, 4), r(9, 4), r(9, 4), r(-9, 4)]);
    vec![q(a1), q(a2), q(a3), sqrt_minus_three().scale(&a4), sqrt_minus_three().scale(&a5)]
}

fn criterion6() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 11", |c| {
        let f = named("example6_1", 11, 10)?;
        let ef = solve_ef(11, 2, &f.cusp_orders)?;
        c.eq("alpha", ef.alphas[0].to_rational(), Some(rat(-11, 60)));
        Ok(())
    });
    c.run("level 27 formulas", |c| {
        let listed = cusps27()?;
        let canonical = crate::modcurve::level_data(27).finite_cusps();
        let mut rng = StdRng::seed_from_u64(27);
        let mut mismatches = [0usize; 5];
        let mut example = String::new();
        for _ in 0..20 {
            let cs: Vec<Rational> = (0..5).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=12))).collect();
            let rhs: Vec<Rational> =
                canonical.iter().map(|s| cs[listed.iter().position(|p| p == s).expect("same cusps")].clone()).collect();
            let ef = solve_ef_constants(27, &rhs)?;
            let want = reference_alphas(&cs);
            for j in 0..5 {
                if ef.alphas[j] != want[j] {
                    mismatches[j] += 1;
                    if example.is_empty() {
                        example = format!("c = {}: alpha_{} solved {}, expected {}", cs.show(), j + 1, ef.alphas[j].show(), want[j].show());
                    }
                }
            }
        }
        for (j, m) in mismatches.iter().enumerate() {
            c.truth(&format!("alpha_{}", j + 1), *m == 0, format!("{m} of 20 right-hand sides disagree"));
        }
        if !example.is_empty() {
            c.truth("first disagreement", false, example);
        }
        Ok(())
    });
    c.0
}

fn criterion7() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 11", |c| {
        let fam = family(11, 60, 4)?;
        let r = divisor_sums(&named("example6_1", 11, 60)?, &fam, 4)?;
        c.eq("sums n=2,3,4", (2..=4).map(|n| r.sum(n)).collect::<Result<Vec<_>>>()?, vec![int(-22), int(-34), int(242)]);
        Ok(())
    });
    c.run("level 27", |c| {
        let fam = family(27, 60, 9)?;
        let r = divisor_sums(&named("example6_3", 27, 60)?, &fam, 9)?;
        let mut want = vec![int(0); 7];
        want.push(int(-45));
        c.eq("sums n=2..9", (2..=9).map(|n| r.sum(n)).collect::<Result<Vec<_>>>()?, want);
        Ok(())
    });
    c.0
}

fn poly_string(p: &[Rational]) -> String {
    p.to_vec().show()
}

fn criterion8() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 11 form", |c| {
        let fam = family(11, 60, 4)?;
        let r = minimal_polynomial(&named("example6_1", 11, 60)?, &fam, 2, None)?;
        let want = vec![int(233), int(22), int(1)];
        c.truth(
            "X^2+22X+233",
            r.coeffs == want,
            format!("computed {} from power sums {}", poly_string(&r.coeffs), poly_string(&r.power_sums)),
        );
        Ok(())
    });
    c.run("level 27 form", |c| {
        let fam = family(27, 60, 6)?;
        let r = minimal_polynomial(&named("example6_3", 27, 60)?, &fam, 2, None)?;
        c.eq("X^3-9", r.coeffs, vec![int(-9), int(0), int(0), int(1)]);
        Ok(())
    });
    c.0
}

fn criterion9() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("gtfne", |c| {
        let h = EtaQuotient::classical(27, &[(3, 3), (27, -3)])?;
        let f = FormInput::new(eta_expand(&h, 60)?, 0, 27, eta_cusp_orders(&h)?)?;
        c.truth("level 27", gtfne_residual(&f, &family(27, 10, 40)?, 40)?.is_zero(), "residual zero below q^40");
        let d = EtaQuotient::classical(11, &[(1, 2), (11, 2)])?;
        let f = FormInput::new(eta_expand(&d, 60)?, 2, 11, eta_cusp_orders(&d)?)?;
        c.truth("level 11", gtfne_residual(&f, &family(11, 10, 40)?, 40)?.is_zero(), "residual zero below q^40");
        Ok(())
    });
    c.run("theta", |c| {
        for (name, level) in [("example6_1", 11), ("example6_3", 27)] {
            let f = named(name, level, 50)?;
            let a = serre_quotient(&f, 40)?;
            c.eq(&format!("{name} recursion vs division"), a, serre_quotient_direct(&f, 40)?);
        }
        Ok(())
    });
    c.run("Ramanujan", |c| {
        let p = 50;
        let (e2, e4, e6) = (eisenstein_series(2, p)?, eisenstein_series(4, p)?, eisenstein_series(6, p)?);
        c.eq("theta E4", e4.theta(), e2.mul(&e4).sub(&e6).scale(&rat(1, 3)));
        c.eq("theta E6", e6.theta(), e2.mul(&e6).sub(&e4.mul(&e4)).scale(&rat(1, 2)));
        c.eq("Delta", delta(p), e4.pow(3)?.sub(&e6.mul(&e6)).scale(&rat(1, 1728)));
        Ok(())
    });
    c.run("duality", |c| {
        let cases = [(11u64, EtaQuotient::classical(11, &[(1, 2), (11, 2)])?), (27, EtaQuotient::classical(27, &[(3, 2), (9, 2)])?)];
        for (n, cusp_form) in cases {
            let f = family(n, 10, 20)?;
            let g = eta_expand(&cusp_form, 21)?;
            let ok = f.orders().all(|m| f.a(m, -1).map(|a| a == -g.coeff(m as i64)).unwrap_or(false));
            let zero = f.orders().all(|m| f.a(m, 0).map(|a| a.is_zero()).unwrap_or(false));
            c.truth(&format!("level {n}"), ok && zero, "a(m,-1) = -b(-1,m) and a(m,0) = 0 for m <= 20");
        }
        Ok(())
    });
    c.run("products", |c| {
        for n in [11u64, 27, 31] {
            let f = family(n, 14, 16)?;
            let first = f.genus() + 1;
            let mut all = true;
            for a in first..=8 {
                for b in a..=8 {
                    all &= f.expand_in_basis(&f.element(a)?.mul(&f.element(b)?)).is_ok();
                }
            }
            c.truth(&format!("level {n}"), all, "pairwise products up to 8 expand with zero residual");
        }
        Ok(())
    });
    c.run("Gauss sums", |c| {
        let mut all = true;
        for u in 3..=24u64 {
            for chi in primitive_characters(u) {
                let g = gauss_sum(&chi)?;
                all &= g.mul(&g.conj()).to_rational() == Some(int(u as i64));
            }
        }
        c.truth("norms", all, "g·conj(g) = u for primitive characters, u <= 24");
        Ok(())
    });
    let mut rng = StdRng::seed_from_u64(6);
    let mut all = true;
    for _ in 0..50 {
        let k = rng.gen_range(1..=6);
        let roots: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
        let p = newton_minpoly(&power_sums_of(&roots, k));
        all &= roots.iter().all(|x| p.iter().rev().fold(Rational::zero(), |a, c| a * x + c).is_zero());
    }
    c.truth("Newton round trip", all, "50 random multisets of size <= 6");
    c.0
}

fn criterion10() -> Vec<Check> {
    let mut c = Checks::new();
    c.run("level 1", |c| {
        let fam = family(1, 10, 40)?;
        let e4 = FormInput::new(eisenstein_series(4, 50)?, 4, 1, BTreeMap::new())?;
        let r4 = divisor_sums(&e4, &fam, 1)?;
        c.eq("E4: (1/3)J_1(rho), L1", (r4.sum(1)?, r4.l1.clone()), (int(-248), rat(1, 3)));
        let e6 = FormInput::new(eisenstein_series(6, 50)?, 6, 1, BTreeMap::new())?;
        let r6 = divisor_sums(&e6, &fam, 40)?;
        c.eq("E6: (1/2)J_1(i), L1", (r6.sum(1)?, r6.l1.clone()), (int(492), rat(1, 2)));
        // Σ J_n(i)qⁿ with J_0 = 1, times j − 1728, against 1728E₄²E₆/(E₄³ − E₆²)
        let mut t = vec![(0, Rational::one())];
        for n in 1..=40 {
            t.push((n, r6.sum(n as u64)? * int(2)));
        }
        let gen = QSeries::from_terms(1, &t, 41);
        let j = klein_j_minus_744(41).add(&QSeries::constant(int(744 - 1728), 41));
        let (e4s, e6s) = (eisenstein_series(4, 45)?, eisenstein_series(6, 45)?);
        let rhs = e4s.mul(&e4s).mul(&e6s).scale(&int(1728)).div(&e4s.pow(3)?.sub(&e6s.mul(&e6s)))?;
        c.eq("Asai-Kaneko-Ninomiya", gen.mul(&j).truncate(40), rhs.truncate(40));
        Ok(())
    });
    c.0
}

fn points(z: &[num_complex::Complex64]) -> String {
    let items: Vec<String> = z.iter().map(|p| format!("{:.5}{:+.5}i", p.re, p.im)).collect();
    items.join(", ")
}

fn criterion11() -> Vec<Check> {
    let mut c = Checks::new();
    let tol = 1e-5;
    c.run("level 11", |c| {
        let fam = family(11, 80, 4)?;
        let f = named("example6_1", 11, 80)?;
        let z = locate_zeros(&f.series, 11, 2, &ZeroSearch::default())?;
        let g = fam.element(2)?;
        let stated = verify_minpoly(&z, &g, &[int(233), int(22), int(1)], tol)?;
        c.truth("X^2+22X+233", stated.ok, format!("max residual {:.3e} at zeros {}", stated.max_residual, points(&z)));
        let exact = minimal_polynomial(&f, &fam, 2, None)?;
        let own = verify_minpoly(&z, &g, &exact.coeffs, tol)?;
        c.truth(&format!("computed {}", poly_string(&exact.coeffs)), own.ok, format!("max residual {:.3e}", own.max_residual));
        Ok(())
    });
    c.run("level 27", |c| {
        // zeros near Im τ = 0.032 need a lower floor and a long expansion
        let prec = 1700;
        let fam = family(27, prec, 3)?;
        let f = named("example6_3", 27, prec)?;
        let z = locate_zeros(&f.series, 27, 3, &ZeroSearch { floor: 0.02, ..Default::default() })?;
        let r = verify_minpoly(&z, &fam.element(2)?, &[int(-9), int(0), int(0), int(1)], tol)?;
        c.truth("X^3-9", r.ok, format!("max residual {:.3e}", r.max_residual));
        let r = verify_minpoly(&z, &fam.element(3)?, &[int(0), int(0), int(0), int(1)], tol)?;
        c.truth("X^3 at f_27,3", r.ok, format!("max residual {:.3e}", r.max_residual));
        Ok(())
    });
    c.0
}

pub const TITLES: [&str; 11] = [
    "basis reproduction",
    "integer program",
    "duality",
    "exponent recursion",
    "Eisenstein constants",
    "E_f solve",
    "divisor sums",
    "minimal polynomials",
    "property suite",
    "level 1 closed values",
    "numeric witness",
];

/// Runs criterion `id` (1..=11).
pub fn run(id: u8) -> Criterion {
    let checks = match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        10 => criterion10(),
        11 => criterion11(),
        _ => panic!("no criterion {id}"),
    };
    Criterion { id, title: TITLES[id as usize - 1], blocking: id != 11, checks }
}

pub fn run_all() -> Vec<Criterion> {
    (1..=11).map(run).collect()
}
