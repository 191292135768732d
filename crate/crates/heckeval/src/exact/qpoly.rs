//! Dense univariate polynomials over Q. These carry number-field elements
//! (residues mod a fixed minimal polynomial) and the associated modular
//! arithmetic: inverses by extended gcd, composition, powering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::zpoly::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    pub c: Vec<BigRational>,
}

impl QPoly {
    #[must_use]
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().map_or(false, Zero::is_zero) {
            c.pop();
        }
        QPoly { c }
    }

    #[must_use]
    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    #[must_use]
    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    #[must_use]
    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    #[must_use]
    pub fn constant(a: BigRational) -> Self {
        QPoly::new(vec![a])
    }

    #[must_use]
    pub fn from_int(a: i64) -> Self {
        QPoly::constant(BigRational::from_integer(BigInt::from(a)))
    }

    #[must_use]
    pub fn from_zpoly(f: &ZPoly) -> Self {
        QPoly::new(
            f.c.iter()
                .map(|a| BigRational::from_integer(a.clone()))
                .collect(),
        )
    }

    /// Rational vector of fixed length n (pads with zeros); the coordinate
    /// view used by linear algebra over Q.
    #[must_use]
    pub fn coords(&self, n: usize) -> Vec<BigRational> {
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i));
        }
        assert!(self.c.len() <= n, "coords: polynomial longer than requested");
        v
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    #[must_use]
    pub fn deg(&self) -> usize {
        assert!(!self.c.is_empty(), "degree of zero polynomial");
        self.c.len() - 1
    }

    #[must_use]
    pub fn lc(&self) -> &BigRational {
        self.c.last().expect("lc of zero polynomial")
    }

    #[must_use]
    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    #[must_use]
    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    #[must_use]
    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    #[must_use]
    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| -a).collect())
    }

    #[must_use]
    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    #[must_use]
    pub fn mul_scalar(&self, a: &BigRational) -> QPoly {
        QPoly::new(self.c.iter().map(|b| a * b).collect())
    }

    #[must_use]
    pub fn derivative(&self) -> QPoly {
        if self.c.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    #[must_use]
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Quotient and remainder with field-coefficient division.
    #[must_use]
    pub fn divrem(&self, g: &QPoly) -> (QPoly, QPoly) {
        assert!(!g.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        if r.len() < g.c.len() {
            return (QPoly::zero(), QPoly::new(r));
        }
        let mut q = vec![BigRational::zero(); r.len() - g.c.len() + 1];
        let gl = g.lc().clone();
        while r.len() >= g.c.len() {
            let top = r.last().unwrap().clone();
            let shift = r.len() - g.c.len();
            if !top.is_zero() {
                let cq = &top / &gl;
                q[shift] = cq.clone();
                for (j, gc) in g.c.iter().enumerate() {
                    r[shift + j] -= &cq * gc;
                }
            }
            r.pop();
            while r.last().map_or(false, Zero::is_zero) {
                r.pop();
            }
            if r.len() < g.c.len() {
                break;
            }
        }
        (QPoly::new(q), QPoly::new(r))
    }

    #[must_use]
    pub fn rem(&self, g: &QPoly) -> QPoly {
        self.divrem(g).1
    }

    #[must_use]
    pub fn monic(&self) -> QPoly {
        assert!(!self.is_zero());
        let inv = BigRational::one() / self.lc();
        self.mul_scalar(&inv)
    }

    /// Monic gcd.
    #[must_use]
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// (g, s, t) with s*self + t*other = g = monic gcd.
    #[must_use]
    pub fn extended_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (QPoly::zero(), s0, t0);
        }
        let inv = BigRational::one() / r0.lc();
        (
            r0.mul_scalar(&inv),
            s0.mul_scalar(&inv),
            t0.mul_scalar(&inv),
        )
    }

    /// Inverse of self mod f; None when gcd(self, f) is nonconstant.
    #[must_use]
    pub fn inverse_mod(&self, f: &QPoly) -> Option<QPoly> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = self.extended_gcd(f);
        if g.is_zero() || g.deg() != 0 {
            return None;
        }
        Some(s.rem(f))
    }

    #[must_use]
    pub fn mul_mod(&self, other: &QPoly, f: &QPoly) -> QPoly {
        self.mul(other).rem(f)
    }

    #[must_use]
    pub fn pow_mod(&self, e: u64, f: &QPoly) -> QPoly {
        let mut result = QPoly::one();
        let mut base = self.rem(f);
        let mut exp = e;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul_mod(&base, f);
            }
            base = base.mul_mod(&base, f);
            exp >>= 1;
        }
        result
    }

    /// self(g) mod f: substitution inside the residue ring Q[x]/f.
    #[must_use]
    pub fn compose_mod(&self, g: &QPoly, f: &QPoly) -> QPoly {
        let gr = g.rem(f);
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_mod(&gr, f).add(&QPoly::constant(a.clone()));
        }
        acc.rem(f)
    }

    /// Plain composition self(g) without reduction.
    #[must_use]
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&QPoly::constant(a.clone()));
        }
        acc
    }

    /// (primitive integer polynomial, denominator) with
    /// self = zpoly / denominator exactly; denominator > 0.
    #[must_use]
    pub fn clear_denominators(&self) -> (ZPoly, BigInt) {
        if self.is_zero() {
            return (ZPoly::zero(), BigInt::one());
        }
        let mut den = BigInt::one();
        for a in &self.c {
            den = num_integer::lcm(den, a.denom().clone());
        }
        let z = ZPoly::new(
            self.c
                .iter()
                .map(|a| a.numer() * (&den / a.denom()))
                .collect(),
        );
        (z, den)
    }

    /// Exact integer polynomial when every coefficient is integral.
    #[must_use]
    pub fn to_zpoly(&self) -> Option<ZPoly> {
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            if !a.denom().is_one() {
                return None;
            }
            out.push(a.numer().clone());
        }
        Some(ZPoly::new(out))
    }

    /// Largest absolute value among numerators and denominators; a cheap
    /// height proxy for recognition sanity checks.
    #[must_use]
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for a in &self.c {
            h = h.max(a.numer().abs()).max(a.denom().abs());
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qp(v: &[(i64, i64)]) -> QPoly {
        QPoly::new(v.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let f = qp(&[(1, 2), (3, 1), (0, 1), (5, 7), (1, 1)]);
        let g = qp(&[(2, 3), (1, 1), (4, 1)]);
        let (quo, rem) = f.divrem(&g);
        assert_eq!(quo.mul(&g).add(&rem), f);
        assert!(rem.is_zero() || rem.deg() < g.deg());
    }

    #[test]
    fn inverse_mod_is_inverse() {
        // x^2 + 1 as modulus; invert x + 2: (x+2)(2-x)/5 = (4 - x^2)/5 = 1 mod x^2+1
        let f = qp(&[(1, 1), (0, 1), (1, 1)]);
        let a = qp(&[(2, 1), (1, 1)]);
        let inv = a.inverse_mod(&f).unwrap();
        assert_eq!(a.mul_mod(&inv, &f), QPoly::one());
    }

    #[test]
    fn inverse_of_zero_divisor_fails() {
        let f = qp(&[(-1, 1), (0, 1), (1, 1)]); // x^2 - 1
        let a = qp(&[(-1, 1), (1, 1)]); // x - 1
        assert!(a.inverse_mod(&f).is_none());
    }

    #[test]
    fn compose_mod_matches_direct() {
        let f = qp(&[(2, 1), (0, 1), (0, 1), (1, 1)]); // x^3 + 2
        let a = qp(&[(1, 1), (1, 1)]);
        let g = qp(&[(0, 1), (0, 1), (3, 1)]);
        let direct = a.compose(&g).rem(&f);
        assert_eq!(a.compose_mod(&g, &f), direct);
    }

    #[test]
    fn clear_denominators_roundtrip() {
        let f = qp(&[(1, 2), (2, 3), (5, 6)]);
        let (z, den) = f.clear_denominators();
        let back = QPoly::from_zpoly(&z)
            .mul_scalar(&BigRational::new(BigInt::one(), den));
        assert_eq!(back, f);
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication() {
        let f = qp(&[(1, 1), (1, 1), (1, 1)]);
        let a = qp(&[(3, 2), (1, 1)]);
        let mut acc = QPoly::one();
        for _ in 0..7 {
            acc = acc.mul_mod(&a, &f);
        }
        assert_eq!(a.pow_mod(7, &f), acc);
    }
}
