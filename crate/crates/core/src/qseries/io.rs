//! Text format: one `exponent<TAB>coefficient` line per nonzero term.
//! Lines starting with `#` carry metadata; `# prec P` gives the exclusive bound.

use super::QSeries;
use crate::error::{Error, Result};
use crate::exactfield::{parse_rational, Coeff, CycNumber, Rational};
use num_integer::Integer;
use num_traits::ToPrimitive;

pub fn write_series<C: Coeff>(s: &QSeries<C>, comments: &[&str]) -> String {
    let m = s.denom() as i64;
    let exp = |e: i64| Rational::new(e.into(), m.into()).to_string();
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(&format!("# prec {}\n", exp(s.prec())));
    for (e, c) in s.terms() {
        out.push_str(&format!("{}\t{}\n", exp(e), c.render()));
    }
    out
}

pub fn parse_cyc(s: &str) -> Result<CycNumber> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('[') {
        let (body, cond) = rest
            .split_once("]@")
            .ok_or_else(|| Error::Parse(format!("bad cyclotomic literal {s:?}")))?;
        let n: u64 = cond.trim().parse().map_err(|_| Error::Parse(format!("bad conductor in {s:?}")))?;
        let coords = body.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        return Ok(CycNumber::from_coords(n, coords));
    }
    Ok(CycNumber::rational(parse_rational(s)?))
}

fn parse_lines(text: &str) -> Result<(Vec<(Rational, String)>, Option<Rational>)> {
    let mut prec = None;
    let mut terms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some(p) = meta.trim().strip_prefix("prec") {
                prec = Some(parse_rational(p)?);
            }
            continue;
        }
        let (e, c) = line
            .split_once('\t')
            .or_else(|| line.split_once(char::is_whitespace))
            .ok_or_else(|| Error::Parse(format!("line {}: expected exponent and coefficient", lineno + 1)))?;
        terms.push((parse_rational(e)?, c.trim().to_string()));
    }
    Ok((terms, prec))
}

fn assemble<C: Coeff>(terms: Vec<(Rational, C)>, prec: Option<Rational>) -> Result<QSeries<C>> {
    let m = terms
        .iter()
        .map(|(e, _)| e.denom().clone())
        .chain(prec.iter().map(|p| p.denom().clone()))
        .fold(num_bigint::BigInt::from(1), |a, b| a.lcm(&b));
    let m_i = m.to_i64().ok_or_else(|| Error::Parse("exponent denominator too large".into()))?;
    let scaled = |e: &Rational| (e * Rational::from_integer(m.clone())).to_integer().to_i64().unwrap();
    let prec = match prec {
        Some(p) => scaled(&p),
        None => terms.iter().map(|(e, _)| scaled(e)).max().map(|e| e + 1).unwrap_or(0),
    };
    let list: Vec<(i64, C)> = terms.iter().map(|(e, c)| (scaled(e), c.clone())).collect();
    if list.iter().any(|(e, _)| *e >= prec) {
        return Err(Error::Parse("term at or beyond the declared precision".into()));
    }
    Ok(QSeries::from_terms(m_i as u64, &list, prec))
}

pub fn parse_series(text: &str) -> Result<QSeries> {
    let (terms, prec) = parse_lines(text)?;
    let terms = terms
        .into_iter()
        .map(|(e, c)| Ok((e, parse_rational(&c)?)))
        .collect::<Result<Vec<_>>>()?;
    assemble(terms, prec)
}

pub fn parse_series_cyc(text: &str) -> Result<QSeries<CycNumber>> {
    let (terms, prec) = parse_lines(text)?;
    let terms = terms
        .into_iter()
        .map(|(e, c)| Ok((e, parse_cyc(&c)?)))
        .collect::<Result<Vec<_>>>()?;
    assemble(terms, prec)
}
