//! Dense univariate polynomials and truncated power series over `Q`.

use num_traits::{One, Zero};

use crate::scalar::{qpow, Scalar};

/// Coefficients stored low degree first, with no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// `t - a`
    pub fn linear_root(a: &Scalar) -> Self {
        Poly::new(vec![-a.clone(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Poly::zero(), self.clone());
        };
        let mut quot = vec![Scalar::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &Scalar) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear_root(a);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }

    /// Coefficients of `p(a + x)` up to `x^order`.
    pub fn taylor_at(&self, a: &Scalar, order: usize) -> Vec<Scalar> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(Scalar::zero());
                continue;
            }
            // synthetic division by (t - a): remainder is the next Taylor coefficient
            let mut carry = Scalar::zero();
            for c in work.iter_mut().rev() {
                let next = &*c + &carry * a;
                *c = carry;
                carry = next;
            }
            work.pop();
            out.push(carry);
        }
        out
    }
}

/// Product of two power series truncated after `x^order`.
pub fn series_mul(a: &[Scalar], b: &[Scalar], order: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(c0 + c1 x)^e` truncated after `x^order`; `c0` must be nonzero.
pub fn binomial_series(c0: &Scalar, c1: &Scalar, e: i64, order: usize) -> Vec<Scalar> {
    let lead = qpow(c0, e);
    let ratio = c1 / c0;
    let mut out = Vec::with_capacity(order + 1);
    let mut term = Scalar::one();
    for j in 0..=order {
        out.push(&lead * &term);
        // binom(e, j+1) r^{j+1} = binom(e, j) r^j * (e - j) / (j + 1) * r
        term = term * Scalar::from_integer((e - j as i64).into())
            / Scalar::from_integer((j as i64 + 1).into())
            * &ratio;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn p(v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_products() {
        let common = p(&[-1, 1]).mul(&p(&[2, 1]));
        let a = common.mul(&p(&[5, 0, 1]));
        let b = common.mul(&p(&[-7, 1]));
        assert_eq!(a.gcd(&b), common.monic());
        assert_eq!(p(&[3]).gcd(&p(&[0, 1])), p(&[1]));
    }

    #[test]
    fn taylor_shift() {
        // (t)^3 at t = 2 + x: 8 + 12x + 6x^2 + x^3
        let t3 = p(&[0, 0, 0, 1]);
        assert_eq!(t3.taylor_at(&int(2), 4), vec![int(8), int(12), int(6), int(1), int(0)]);
    }

    #[test]
    fn binomial_negative_exponent() {
        // (2 + x)^{-1} = 1/2 - x/4 + x^2/8
        let s = binomial_series(&int(2), &int(1), -1, 2);
        assert_eq!(s, vec![ratio(1, 2), ratio(-1, 4), ratio(1, 8)]);
        let back = series_mul(&s, &[int(2), int(1)], 2);
        assert_eq!(back, vec![int(1), int(0), int(0)]);
    }

    #[test]
    fn multiplicity() {
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[3, 1]));
        assert_eq!(f.root_multiplicity(&int(1)), 2);
        assert_eq!(f.root_multiplicity(&int(-3)), 1);
        assert_eq!(f.root_multiplicity(&int(0)), 0);
    }
}
