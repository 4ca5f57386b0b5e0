//! Exact Gauss–Jordan elimination over any coefficient field.

use crate::error::{Error, Result};
use crate::exactfield::Coeff;

/// Solves a square system given as rows [A | b].
pub fn solve_augmented<C: Coeff>(mut m: Vec<Vec<C>>) -> Result<Vec<C>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, piv);
        let inv = m[col][col].try_inv()?;
        for x in m[col].iter_mut().skip(col) {
            *x = x.times(&inv);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = x.minus(&f.times(p));
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Result<Vec<C>> {
    if a.len() != b.len() || a.iter().any(|r| r.len() != a.len()) {
        return Err(Error::InvalidArgument("system must be square".into()));
    }
    let m = a
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y.clone());
            r
        })
        .collect();
    solve_augmented(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{int, rat, Rational};

    #[test]
    fn two_by_two() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let s = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(matches!(solve::<Rational>(&s, &[int(1), int(1)]), Err(Error::Singular)));
    }
}
