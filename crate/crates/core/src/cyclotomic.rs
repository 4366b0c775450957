//! Exact arithmetic in the cyclotomic field Q(ζ_n).

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

use crate::linalg::Rational;

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree
/// first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by every Φ_d with d a proper divisor of n.
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|&d| n.is_multiple_of(d)) {
        p = divide_exact(&p, &cyclotomic_polynomial(d));
    }
    p
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / lead;
        q[k] = c;
        for (j, &d) in den.iter().enumerate() {
            r[k + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Element of Q(ζ_n), stored reduced modulo Φ_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    n: usize,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(n: usize) -> Self {
        let deg = cyclotomic_polynomial(n).len() - 1;
        Cyclotomic {
            n,
            coeffs: vec![Rational::zero(); deg],
        }
    }

    pub fn from_integer(n: usize, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = Rational::from_integer(k.into());
        z
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: usize, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::reduce(n, raw)
    }

    fn reduce(n: usize, mut raw: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        while raw.len() > deg {
            let top = raw.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let k = raw.len() - deg;
            for (j, &c) in phi.iter().enumerate().take(deg) {
                raw[k + j] -= &top * Rational::from_integer(c.into());
            }
        }
        raw.resize(deg, Rational::zero());
        Cyclotomic { n, coeffs: raw }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: i64) -> Self {
        let c = Rational::from_integer(k.into());
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|x| x * &c).collect(),
        }
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.n, o.n);
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.n, o.n);
        let mut raw = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Cyclotomic::reduce(self.n, raw)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z{}", self.n),
                _ => format!("{c}*z{}^{k}", self.n),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
    }

    #[test]
    fn roots_of_unity() {
        let z = Cyclotomic::root_of_unity(2, 1);
        assert_eq!(z, Cyclotomic::from_integer(2, -1));
        let w = Cyclotomic::root_of_unity(3, 1);
        let sum = &(&Cyclotomic::from_integer(3, 1) + &w) + &(&w * &w);
        assert!(sum.is_zero());
        let cube = &(&w * &w) * &w;
        assert_eq!(cube, Cyclotomic::from_integer(3, 1));
    }
}
