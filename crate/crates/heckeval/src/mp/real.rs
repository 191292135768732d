//! Real arbitrary-precision scaffolding over MPFR floats: precision
//! handling, conversions from the exact layer, and shared constants.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rug::float::Round;
use rug::ops::CompleteRound;
use rug::{Float, Integer, Rational};

pub const LOG2_10: f64 = 3.321928094887362;

/// Working precision in bits. Constructed from decimal digits with guard
/// bits so that requested-digit accuracy survives intermediate rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prec(pub u32);

impl Prec {
    #[must_use]
    pub fn from_digits(digits: u32) -> Prec {
        Prec((digits as f64 * LOG2_10).ceil() as u32 + 64)
    }

    #[must_use]
    pub fn bits(self) -> u32 {
        self.0
    }

    /// A coarser precision for throwaway estimates.
    #[must_use]
    pub fn coarse() -> Prec {
        Prec(96)
    }

    #[must_use]
    pub fn boosted(self, extra_bits: u32) -> Prec {
        Prec(self.0 + extra_bits)
    }
}

#[must_use]
pub fn big_to_rug(a: &BigInt) -> Integer {
    let (sign, digits) = a.to_u64_digits();
    let mut r = Integer::from_digits(&digits, rug::integer::Order::Lsf);
    if sign == Sign::Minus {
        r = -r;
    }
    r
}

#[must_use]
pub fn real_from_rational(q: &BigRational, prec: Prec) -> Float {
    let num = big_to_rug(q.numer());
    let den = big_to_rug(q.denom());
    let rat = Rational::from((num, den));
    Float::with_val(prec.bits(), &rat)
}

#[must_use]
pub fn real_from_bigint(a: &BigInt, prec: Prec) -> Float {
    Float::with_val(prec.bits(), big_to_rug(a))
}

#[must_use]
pub fn real(prec: Prec, v: f64) -> Float {
    Float::with_val(prec.bits(), v)
}

#[must_use]
pub fn real_zero(prec: Prec) -> Float {
    Float::with_val(prec.bits(), 0)
}

#[must_use]
pub fn pi(prec: Prec) -> Float {
    Float::with_val(prec.bits(), rug::float::Constant::Pi)
}

#[must_use]
pub fn euler_gamma(prec: Prec) -> Float {
    Float::with_val(prec.bits(), rug::float::Constant::Euler)
}

#[must_use]
pub fn ln2(prec: Prec) -> Float {
    Float::with_val(prec.bits(), rug::float::Constant::Log2)
}

/// 2^-bits as a Float, the canonical tolerance unit.
#[must_use]
pub fn epsilon_of(bits: u32, prec: Prec) -> Float {
    let mut e = Float::with_val(prec.bits(), 1);
    e >>= bits;
    e
}

/// Nearest integer together with the absolute distance to it.
#[must_use]
pub fn nearest_integer(x: &Float) -> (BigInt, Float) {
    let rounded = x.round_ref().complete(x.prec());
    let dist = (x - &rounded).complete(x.prec()).abs();
    let int = rounded
        .to_integer_round(Round::Nearest)
        .map(|(i, _)| i)
        .expect("finite float");
    (rug_to_bigint(&int), dist)
}

#[must_use]
pub fn rug_to_bigint(a: &Integer) -> BigInt {
    let digits = a.to_digits::<u64>(rug::integer::Order::Lsf);
    let mut mag = BigInt::from(0u32);
    for (i, d) in digits.iter().enumerate() {
        mag += BigInt::from(*d) << (64 * i);
    }
    if a.cmp0() == std::cmp::Ordering::Less {
        -mag
    } else {
        mag
    }
}

/// Exact rational value of a finite Float (m * 2^e).
#[must_use]
pub fn float_to_rational_exact(x: &Float) -> BigRational {
    assert!(x.is_finite(), "non-finite float");
    let (m, e) = x.to_integer_exp().expect("finite float");
    let mant = rug_to_bigint(&m);
    if e >= 0 {
        BigRational::from_integer(mant << (e as usize))
    } else {
        BigRational::new(mant, BigInt::from(1) << ((-e) as usize))
    }
}
