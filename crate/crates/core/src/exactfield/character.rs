use super::arith::{factorize, gcd, lcm_u};
use super::{CycNumber, Rational};
use crate::error::{Error, Result};
use num_traits::Zero;

/// Dirichlet character mod u with values ζ_order^{log[a]} on units, 0 elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    logs: Vec<Option<u64>>,
}

/// Cyclic factors of (ℤ/u)^*: (generator lifted by CRT, its order).
fn unit_generators(u: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for (p, e) in factorize(u) {
        let pe = p.pow(e);
        let rest = u / pe;
        let lift = |g: u64| -> u64 {
            // x ≡ g mod p^e, x ≡ 1 mod rest
            (0..rest.max(1))
                .map(|k| g + k * pe)
                .find(|x| x % rest.max(1) == 1 % rest.max(1))
                .unwrap()
                % u
        };
        if p == 2 {
            if e >= 2 {
                gens.push((lift(pe - 1), 2));
            }
            if e >= 3 {
                gens.push((lift(5), pe / 4));
            }
        } else {
            let order = pe / p * (p - 1);
            let g = (2..pe)
                .find(|&g| multiplicative_order(g, pe) == order)
                .expect("odd prime powers have primitive roots");
            gens.push((lift(g), order));
        }
    }
    gens
}

fn multiplicative_order(a: u64, m: u64) -> u64 {
    if gcd(a as i64, m as i64) != 1 {
        return 0;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

impl DirichletCharacter {
    pub fn trivial(u: u64) -> Self {
        let logs = (0..u).map(|a| (gcd(a as i64, u as i64) == 1).then_some(0)).collect();
        DirichletCharacter { modulus: u, order: 1, logs }
    }

    /// Character sending the i-th CRT generator to ζ_{ord_i}^{k_i}.
    fn from_exponents(u: u64, gens: &[(u64, u64)], ks: &[u64]) -> Self {
        let expo = gens.iter().fold(1, |acc, &(_, o)| lcm_u(acc, o));
        let mut logs = vec![None; u as usize];
        // walk the group as a product of cyclic factors
        let mut elems: Vec<(u64, u64)> = vec![(1 % u, 0)];
        for (&(g, o), &k) in gens.iter().zip(ks) {
            let step = k * (expo / o);
            let mut next = Vec::with_capacity(elems.len() * o as usize);
            for &(x, l) in &elems {
                let mut y = x;
                let mut ly = l;
                for _ in 0..o {
                    next.push((y, ly % expo));
                    y = y * g % u;
                    ly += step;
                }
            }
            elems = next;
        }
        for (x, l) in elems {
            logs[x as usize] = Some(l);
        }
        // shrink to the true order of the character
        let g = logs.iter().flatten().fold(expo, |acc, &l| gcd(acc as i64, l as i64) as u64);
        let order = expo / g.max(1);
        let logs = logs.into_iter().map(|l| l.map(|l| l / (expo / order))).collect();
        DirichletCharacter { modulus: u, order, logs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the character as a group element.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent k with χ(a) = ζ_order^k, or None when gcd(a, u) > 1.
    pub fn log(&self, a: i64) -> Option<u64> {
        self.logs[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, a: i64) -> CycNumber {
        match self.log(a) {
            Some(k) => CycNumber::zeta_pow(self.order, k as i64).simplify(),
            None => CycNumber::rational(Rational::zero()),
        }
    }

    pub fn conj(&self) -> Self {
        let logs = self.logs.iter().map(|l| l.map(|k| (self.order - k) % self.order)).collect();
        DirichletCharacter { modulus: self.modulus, order: self.order, logs }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_even(&self) -> bool {
        self.log(-1) == Some(0)
    }

    /// Primitive iff for each p | u some unit a ≡ 1 mod u/p has χ(a) ≠ 1.
    pub fn is_primitive(&self) -> bool {
        let u = self.modulus;
        if u == 1 {
            return true;
        }
        factorize(u).into_iter().all(|(p, _)| {
            let m = u / p;
            (0..p).any(|k| {
                let a = 1 + k * m;
                matches!(self.log(a as i64), Some(l) if l != 0)
            })
        })
    }
}

/// All primitive characters with conductor exactly u; for u = 1 the trivial one.
pub fn primitive_characters(u: u64) -> Vec<DirichletCharacter> {
    if u == 1 {
        return vec![DirichletCharacter::trivial(1)];
    }
    let gens = unit_generators(u);
    let mut out = Vec::new();
    let mut ks = vec![0u64; gens.len()];
    loop {
        let chi = DirichletCharacter::from_exponents(u, &gens, &ks);
        if chi.is_primitive() {
            out.push(chi);
        }
        // odometer over exponent tuples
        let mut i = gens.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            ks[i] += 1;
            if ks[i] < gens[i].1 {
                break;
            }
            ks[i] = 0;
        }
    }
}

/// g(χ) = Σ_{n mod u} χ(n) ζ_u^n.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<CycNumber> {
    if !chi.is_primitive() {
        return Err(Error::NonPrimitive(chi.modulus));
    }
    let u = chi.modulus;
    let mut acc = CycNumber::zero_in(lcm_u(u, chi.order));
    for n in 0..u as i64 {
        if chi.log(n).is_some() {
            acc = acc.add(&chi.value(n).mul(&CycNumber::zeta_pow(u, n)));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{int, Coeff};
    use num_traits::One;

    #[test]
    fn small_conductors() {
        let c3 = primitive_characters(3);
        assert_eq!(c3.len(), 1);
        assert_eq!(c3[0].value(2), CycNumber::rational(int(-1)));
        let c4 = primitive_characters(4);
        assert_eq!(c4.len(), 1);
        assert!(!c4[0].is_even());
        assert_eq!(primitive_characters(1).len(), 1);
        assert!(primitive_characters(2).is_empty());
        assert!(primitive_characters(6).is_empty());
        // number of primitive characters mod 5, 8, 9, 12
        assert_eq!(primitive_characters(5).len(), 3);
        assert_eq!(primitive_characters(8).len(), 2);
        assert_eq!(primitive_characters(9).len(), 4);
        assert_eq!(primitive_characters(12).len(), 1);
    }

    #[test]
    fn gauss_examples() {
        let g3 = gauss_sum(&primitive_characters(3)[0]).unwrap();
        assert_eq!(g3, CycNumber::zeta(3).sub(&CycNumber::zeta_pow(3, 2)));
        let g4 = gauss_sum(&primitive_characters(4)[0]).unwrap();
        assert_eq!(g4, CycNumber::zeta(4).scale(&int(2)));
        assert!(gauss_sum(&DirichletCharacter::trivial(5)).is_err());
    }

    #[test]
    fn gauss_norm_up_to_24() {
        for u in 1..=24u64 {
            for chi in primitive_characters(u) {
                let g = gauss_sum(&chi).unwrap();
                assert_eq!(g.mul(&g.conj()), CycNumber::from_int(u as i64), "u={u}");
            }
        }
    }

    #[test]
    fn multiplicative() {
        for u in [7u64, 15, 16, 20] {
            for chi in primitive_characters(u) {
                assert_eq!(chi.value(1), CycNumber::one());
                for a in 0..u as i64 {
                    for b in 0..u as i64 {
                        assert_eq!(chi.value(a * b), chi.value(a).mul(&chi.value(b)));
                    }
                }
            }
        }
    }
}
