//! Textual form specifications: sums of products of eta quotients, Eisenstein
//! series, basis functions, constants and series files.
//!
//! Grammar: terms joined by `+`/`-`; a term is `*`-separated factors; a factor is
//! a rational (`-1/10`) or one of
//! `eta:3^3/27^3` (`.` separates factors, `/` starts the denominator),
//! `const:c`, `E4`, `E6`, `E4@d`, `E6@d`, `Delta`, `Delta@d`, `E2diff:d`, `f:m`,
//! `series:path`.
//! Names `example6_1` (level 11) and `example6_3` (level 27) expand to fixed specs.

use crate::basis::BasisFamily;
use crate::divisor::FormInput;
use crate::eisenstein::e2diff_const;
use crate::error::{Error, Result};
use crate::exactfield::{int, parse_rational, Rational};
use crate::modcurve::{level_data, Cusp};
use crate::qseries::io::parse_series;
use crate::qseries::{eisenstein_series, eta_expand, EtaQuotient, QSeries};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

const NAMED: &[(&str, u64, &str, &str)] = &[
    (
        "example6_1",
        11,
        "-1/10*E2diff:11-12/5*eta:1^2.11^2",
        "−(E₂ − 11E₂(11τ) + 24η(τ)²η(11τ)²)/10, weight 2 on Γ₀(11)",
    ),
    ("example6_3", 27, "eta:3^3/27^3+const:3", "η(3τ)³/η(27τ)³ + 3, weight 0 on Γ₀(27)"),
];

/// The spec text and level behind a named form, if `name` is one.
pub fn named_form(name: &str) -> Option<(u64, &'static str, &'static str)> {
    NAMED.iter().find(|(n, ..)| *n == name).map(|&(_, l, s, d)| (l, s, d))
}

#[derive(Clone, Debug, PartialEq)]
enum Atom {
    Eta(Vec<(i64, i64)>),
    Eis { k: i64, d: u64 },
    E2Diff(u64),
    Basis(u64),
    Series(String),
}

#[derive(Clone, Debug, PartialEq)]
struct Term {
    coeff: Rational,
    atoms: Vec<Atom>,
}

/// Lower bound on an order, exact unless cancellation is possible.
#[derive(Clone, Debug, PartialEq)]
enum Order {
    Exact(Rational),
    AtLeast(Rational),
}

impl Order {
    fn value(&self) -> &Rational {
        match self {
            Order::Exact(r) | Order::AtLeast(r) => r,
        }
    }
}

/// A parsed form, its inferred orders, and every assumption made on the way.
#[derive(Clone, Debug)]
pub struct BuiltForm {
    pub input: FormInput,
    pub assumptions: Vec<String>,
}

fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let rest: String = chars[i..].iter().collect();
        if rest.starts_with("series:") {
            // paths run to the next factor separator
            while i < chars.len() && chars[i] != '*' {
                cur.push(chars[i]);
                i += 1;
            }
            continue;
        }
        let prev = cur.chars().last();
        if (c == '+' || c == '-') && !matches!(prev, Some('^') | Some('*') | Some(':') | Some('/') | Some('.')) {
            if !cur.is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            }
            neg = c == '-';
        } else {
            cur.push(c);
        }
        i += 1;
    }
    if !cur.is_empty() {
        out.push((neg, cur));
    }
    out
}

fn parse_index(s: &str, what: &str) -> Result<u64> {
    s.parse::<u64>().ok().filter(|&d| d > 0).ok_or_else(|| Error::Parse(format!("bad {what} '{s}'")))
}

fn parse_eta(body: &str) -> Result<Vec<(i64, i64)>> {
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let mut exps = Vec::new();
    for (part, sign) in [(Some(num), 1i64), (den, -1)] {
        let Some(part) = part else { continue };
        for f in part.split('.').filter(|f| !f.is_empty()) {
            let (d, r) = match f.split_once('^') {
                Some((d, r)) => (d, r.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in '{f}'")))?),
                None => (f, 1),
            };
            exps.push((parse_index(d, "eta index")? as i64, sign * r));
        }
    }
    if exps.is_empty() {
        return Err(Error::Parse("empty eta quotient".into()));
    }
    Ok(exps)
}

fn parse_atom(s: &str) -> Result<Atom> {
    if let Some(body) = s.strip_prefix("eta:") {
        return parse_eta(body).map(Atom::Eta);
    }
    if let Some(d) = s.strip_prefix("E2diff:") {
        return Ok(Atom::E2Diff(parse_index(d, "E2diff index")?));
    }
    if let Some(m) = s.strip_prefix("f:") {
        return Ok(Atom::Basis(parse_index(m, "basis index")?));
    }
    if let Some(p) = s.strip_prefix("series:") {
        return Ok(Atom::Series(p.to_string()));
    }
    let (name, d) = match s.split_once('@') {
        Some((n, d)) => (n, parse_index(d, "scaling")?),
        None => (s, 1),
    };
    match name {
        "E4" => Ok(Atom::Eis { k: 4, d }),
        "E6" => Ok(Atom::Eis { k: 6, d }),
        "Delta" => Ok(Atom::Eta(vec![(d as i64, 24)])),
        _ => Err(Error::Parse(format!("unknown form term '{s}'"))),
    }
}

fn parse_terms(spec: &str) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    for (neg, t) in split_terms(spec) {
        let mut coeff = if neg { -Rational::one() } else { Rational::one() };
        let mut atoms = Vec::new();
        for f in t.split('*') {
            if let Some(c) = f.strip_prefix("const:") {
                coeff *= parse_rational(c)?;
            } else if f.starts_with(|c: char| c.is_ascii_digit()) {
                coeff *= parse_rational(f)?;
            } else {
                atoms.push(parse_atom(f)?);
            }
        }
        terms.push(Term { coeff, atoms });
    }
    if terms.is_empty() {
        return Err(Error::Parse("empty form".into()));
    }
    Ok(terms)
}

struct Ctx<'a> {
    level: u64,
    prec: i64,
    weight: Option<i64>,
    fam: Option<&'a BasisFamily>,
}

impl Ctx<'_> {
    fn divides(&self, d: u64) -> Result<()> {
        if self.level % d != 0 {
            return Err(Error::InvalidArgument(format!("{d} does not divide the level {}", self.level)));
        }
        Ok(())
    }

    fn atom_series(&self, a: &Atom) -> Result<QSeries> {
        let p = self.prec;
        match a {
            Atom::Eta(e) => eta_expand(&EtaQuotient::classical(self.level, e)?, p),
            Atom::Eis { k, d } => {
                self.divides(*d)?;
                Ok(eisenstein_series(*k, p / *d as i64 + 1)?.rescale(*d).truncate(p))
            }
            Atom::E2Diff(d) => {
                self.divides(*d)?;
                let e2 = eisenstein_series(2, p)?;
                let e2d = eisenstein_series(2, p / *d as i64 + 1)?.rescale(*d).truncate(p);
                Ok(e2.sub(&e2d.scale(&int(*d as i64))))
            }
            Atom::Basis(m) => {
                let fam = self.fam.ok_or_else(|| Error::InvalidArgument("f:m terms need a basis".into()))?;
                Ok(fam.element(*m)?.truncate(p))
            }
            Atom::Series(path) => parse_series(&std::fs::read_to_string(path)?),
        }
    }

    fn atom_weight(&self, a: &Atom) -> Result<i64> {
        Ok(match a {
            Atom::Eta(e) => {
                let s: i64 = e.iter().map(|(_, r)| r).sum();
                if s % 2 != 0 {
                    return Err(Error::InvalidArgument("eta quotient has odd Σr".into()));
                }
                s / 2
            }
            Atom::Eis { k, .. } => *k,
            Atom::E2Diff(_) => 2,
            Atom::Basis(_) => 0,
            Atom::Series(p) => self
                .weight
                .ok_or_else(|| Error::InvalidArgument(format!("series file {p} needs an explicit weight")))?,
        })
    }

    fn atom_order(&self, a: &Atom, cusp: &Cusp) -> Result<Order> {
        Ok(match a {
            Atom::Eta(e) => Order::Exact(EtaQuotient::classical(self.level, e)?.cusp_order(cusp.v)?),
            Atom::Eis { .. } => Order::Exact(Rational::zero()),
            Atom::E2Diff(d) => {
                if e2diff_const(*d, cusp.v).is_zero() {
                    Order::AtLeast(int(1))
                } else {
                    Order::Exact(Rational::zero())
                }
            }
            Atom::Basis(_) | Atom::Series(_) => Order::AtLeast(Rational::zero()),
        })
    }
}

/// Order of a sum: the minimum, exact when a single exact term attains it.
fn sum_order(orders: &[Order], cusp: &str, assumptions: &mut Vec<String>) -> Order {
    let min = orders.iter().map(|o| o.value().clone()).min().expect("nonempty");
    let at_min: Vec<&Order> = orders.iter().filter(|o| *o.value() == min).collect();
    if at_min.len() == 1 {
        return at_min[0].clone();
    }
    if at_min.iter().all(|o| matches!(o, Order::Exact(_))) {
        assumptions.push(format!("order {min} at cusp {cusp} assumed: leading terms of several summands could cancel"));
        return Order::Exact(min);
    }
    Order::AtLeast(min)
}

/// Builds the form from its spec. `overrides` wins over inferred orders; orders that
/// cannot be inferred must be given there.
pub fn build_form(
    spec: &str,
    level: u64,
    prec: i64,
    weight: Option<i64>,
    overrides: &BTreeMap<Cusp, Rational>,
    fam: Option<&BasisFamily>,
) -> Result<BuiltForm> {
    let (text, note) = match named_form(spec) {
        Some((l, text, desc)) => {
            if l != level {
                return Err(Error::InvalidArgument(format!("{spec} lives at level {l}, not {level}")));
            }
            (text, desc.to_string())
        }
        None => (spec, spec.to_string()),
    };
    let ctx = Ctx { level, prec, weight, fam };
    let terms = parse_terms(text)?;
    let mut k: Option<i64> = None;
    let mut series = QSeries::zero(prec);
    for t in &terms {
        let w = t.atoms.iter().map(|a| ctx.atom_weight(a)).sum::<Result<i64>>()?;
        match k {
            Some(k0) if k0 != w => return Err(Error::InvalidArgument(format!("summands have weights {k0} and {w}"))),
            _ => k = Some(w),
        }
        let mut s = QSeries::constant(t.coeff.clone(), prec);
        for a in &t.atoms {
            s = s.mul(&ctx.atom_series(a)?);
        }
        series = series.add(&s);
    }
    let k = k.expect("nonempty");
    if let Some(w) = weight {
        if w != k {
            return Err(Error::InvalidArgument(format!("form has weight {k}, but weight {w} was given")));
        }
    }
    let mut assumptions = Vec::new();
    let mut orders = BTreeMap::new();
    for cusp in level_data(level).finite_cusps() {
        if let Some(o) = overrides.get(&cusp) {
            orders.insert(cusp, o.clone());
            continue;
        }
        let mut per_term = Vec::new();
        for t in terms.iter().filter(|t| !t.coeff.is_zero()) {
            let mut acc = Order::Exact(Rational::zero());
            for a in &t.atoms {
                let o = ctx.atom_order(a, &cusp)?;
                let v = acc.value() + o.value();
                acc = match (acc, o) {
                    (Order::Exact(_), Order::Exact(_)) => Order::Exact(v),
                    _ => Order::AtLeast(v),
                };
            }
            per_term.push(acc);
        }
        match sum_order(&per_term, &cusp.label(), &mut assumptions) {
            Order::Exact(o) => {
                orders.insert(cusp, o);
            }
            Order::AtLeast(o) => {
                return Err(Error::CuspOrders(format!(
                    "order at cusp {} is only known to be ≥ {o}; pass it explicitly",
                    cusp.label()
                )))
            }
        }
    }
    let input = FormInput::new(series, k, level, orders)?.with_note(note);
    Ok(BuiltForm { input, assumptions })
}

/// Parses "0=0,1/3=1" into cusp orders.
pub fn parse_cusp_orders(s: &str, level: u64) -> Result<BTreeMap<Cusp, Rational>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (c, o) = item.split_once('=').ok_or_else(|| Error::Parse(format!("expected cusp=order, got '{item}'")))?;
        out.insert(crate::modcurve::parse_cusp(c.trim(), level)?, parse_rational(o.trim())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
    use crate::modcurve::parse_cusp;

    fn none() -> BTreeMap<Cusp, Rational> {
        BTreeMap::new()
    }

    #[test]
    fn parses_terms() {
        let t = parse_terms("eta:3^3/27^3+const:3").unwrap();
        assert_eq!(t[0].atoms, vec![Atom::Eta(vec![(3, 3), (27, -3)])]);
        assert_eq!(t[1], Term { coeff: int(3), atoms: vec![] });
        let t = parse_terms("-1/10*E2diff:11 - 12/5*eta:1^2.11^2").unwrap();
        assert_eq!(t[0].coeff, rat(-1, 10));
        assert_eq!(t[1].coeff, rat(-12, 5));
        assert_eq!(parse_terms("eta:1^-2.11^22").unwrap()[0].atoms, vec![Atom::Eta(vec![(1, -2), (11, 22)])]);
        assert!(parse_terms("E8").is_err());
    }

    #[test]
    fn example6_1_orders() {
        let b = build_form("example6_1", 11, 30, Some(2), &none(), None).unwrap();
        let f = &b.input;
        assert_eq!(f.series.truncate(5), QSeries::from_ints(0, &[1, 0, 12, 12, 12]));
        assert_eq!(f.cusp_orders[&parse_cusp("0", 11).unwrap()], int(0));
        assert!(b.assumptions.is_empty());
        assert!(build_form("example6_1", 27, 30, None, &none(), None).is_err());
    }

    #[test]
    fn example6_3_orders() {
        let b = build_form("example6_3", 27, 30, Some(0), &none(), None).unwrap();
        assert_eq!(b.input.series.truncate(7), QSeries::from_terms(1, &[(-3, int(1)), (6, int(5))], 7));
        assert_eq!(b.input.cusp_orders.len(), 5);
        assert!(b.input.cusp_orders.values().all(|o| o.is_zero()));
    }

    #[test]
    fn weights_and_orders() {
        assert!(build_form("E4+const:1", 1, 10, None, &none(), None).is_err());
        let d = build_form("Delta", 11, 10, Some(12), &none(), None).unwrap();
        // Δ vanishes to order width = 11 at the cusp 0 of Γ₀(11)
        assert_eq!(d.input.cusp_orders[&parse_cusp("0", 11).unwrap()], int(11));
        // E₂ − 4E₂(4τ) has constant term 0 at 1/2
        let e = build_form("-1/3*E2diff:4", 4, 10, None, &none(), None);
        assert!(matches!(e, Err(Error::CuspOrders(_))));
        let o = parse_cusp_orders("1/2=1", 4).unwrap();
        assert!(build_form("-1/3*E2diff:4", 4, 10, None, &o, None).is_ok());
    }
}
