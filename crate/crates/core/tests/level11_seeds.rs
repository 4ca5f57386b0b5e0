//! Derives the level 11 seed series independently of the shipped files.
//! 𝔣_{11,m} = F/H with H = η(11τ)²²/η(τ)², which vanishes only at ∞ (order 10),
//! and F ∈ M₁₀(Γ₀(11)) fixed by the principal part q^{−m} + a·q^{−1} + 0.
//! Set MODVALS_WRITE_SEEDS=1 to rewrite the files under levels/.

use modvals::exactfield::{int, Rational};
use modvals::linalg::solve;
use modvals::qseries::io::{parse_series, write_series};
use modvals::qseries::{eisenstein_series, eta_expand, EtaQuotient, QSeries};
use num_traits::Zero;
use std::path::PathBuf;

const SEED_PREC: i64 = 400;

fn weight10_space(prec: i64) -> Vec<QSeries> {
    let e2 = eisenstein_series(2, prec).unwrap();
    let a = e2.sub(&eisenstein_series(2, prec / 11 + 1).unwrap().rescale(11).scale(&int(11)));
    let d = eta_expand(&EtaQuotient::classical(11, &[(1, 2), (11, 2)]).unwrap(), prec).unwrap();
    let e4 = eisenstein_series(4, prec).unwrap();
    let e4b = eisenstein_series(4, prec / 11 + 1).unwrap().rescale(11);
    let e6 = eisenstein_series(6, prec).unwrap();
    let e6b = eisenstein_series(6, prec / 11 + 1).unwrap().rescale(11);
    let gens = [(a, 2), (d, 2), (e4, 4), (e4b, 4), (e6, 6), (e6b, 6)];
    let mut out = Vec::new();
    let mut stack: Vec<(usize, i64, QSeries)> = vec![(0, 0, QSeries::one(prec))];
    while let Some((i, w, s)) = stack.pop() {
        if w == 10 {
            out.push(s.truncate(prec));
            continue;
        }
        for (j, (g, wg)) in gens.iter().enumerate().skip(i) {
            if w + wg <= 10 {
                stack.push((j, w + wg, s.mul(g)));
            }
        }
    }
    out
}

/// Greedy choice of forms whose coefficient vectors on q^0..q^{len−1} are independent.
fn independent(forms: &[QSeries], len: i64) -> Vec<QSeries> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    for f in forms {
        let mut v: Vec<Rational> = (0..len).map(|n| f.coeff(n)).collect();
        for (r, &p) in rows.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone() / r[p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= c.clone() * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            rows.push(v);
            pivots.push(p);
            chosen.push(f.clone());
        }
    }
    chosen
}

fn derive(m: i64, prec: i64) -> QSeries {
    let fprec = prec + 10 + m;
    let basis = independent(&weight10_space(fprec), 11);
    assert_eq!(basis.len(), 10, "dim M_10(Gamma0(11)) = 10");
    let h = eta_expand(&EtaQuotient::classical(11, &[(1, -2), (11, 22)]).unwrap(), fprec).unwrap();
    // unknowns x_1..x_10 and a; F(q^n) = [(q^{−m} + a q^{−1})·H](q^n) for n ≤ 10
    let mut a_mat = Vec::new();
    let mut b = Vec::new();
    for n in 0..=10 {
        let mut row: Vec<Rational> = basis.iter().map(|f| f.coeff(n)).collect();
        row.push(-h.coeff(n + 1));
        a_mat.push(row);
        b.push(h.coeff(n + m));
    }
    let x = solve(&a_mat, &b).unwrap();
    let mut f = QSeries::zero(fprec);
    for (c, g) in x.iter().zip(&basis) {
        f = f.add(&g.scale(c));
    }
    f.div(&h).unwrap().truncate(prec)
}

fn seed_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("levels").join(name)
}

#[test]
fn derived_seeds_match_shipped() {
    let f2 = derive(2, SEED_PREC);
    let f3 = derive(3, SEED_PREC);
    assert_eq!(f2.coeff(-1), int(2));
    assert_eq!(f3.coeff(-1), int(1));
    assert_eq!(f2.coeff(0), int(0));
    assert_eq!(f3.coeff(0), int(0));
    if std::env::var("MODVALS_WRITE_SEEDS").is_ok() {
        let note = "F/H with H = eta(11t)^22/eta(t)^2, F in M_10(Gamma0(11)) fixed by the principal part";
        std::fs::write(seed_path("level11_f2.series"), write_series(&f2, &["level 11, pole order 2", note])).unwrap();
        std::fs::write(seed_path("level11_f3.series"), write_series(&f3, &["level 11, pole order 3", note])).unwrap();
    }
    for (name, want) in [("level11_f2.series", &f2), ("level11_f3.series", &f3)] {
        let shipped = parse_series(&std::fs::read_to_string(seed_path(name)).unwrap()).unwrap();
        assert_eq!(shipped.prec(), SEED_PREC, "{name}");
        assert_eq!(&shipped, want, "{name}");
    }
}
