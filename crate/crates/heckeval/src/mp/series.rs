//! Truncated real power series in one formal variable eps, plus the
//! gamma-function expansions around integer points that the contour
//! kernel needs. All series in an expression must share length and
//! precision; operations truncate to that common length.

use crate::mp::real::{euler_gamma, real, Prec};
use rug::Float;

#[derive(Debug, Clone)]
pub struct RSeries {
    /// c[k] multiplies eps^k.
    pub c: Vec<Float>,
}

impl RSeries {
    #[must_use]
    pub fn zero(l: usize, prec: Prec) -> RSeries {
        assert!(l > 0);
        RSeries {
            c: (0..l).map(|_| Float::new(prec.bits())).collect(),
        }
    }

    #[must_use]
    pub fn one(l: usize, prec: Prec) -> RSeries {
        let mut s = RSeries::zero(l, prec);
        s.c[0] = Float::with_val(prec.bits(), 1);
        s
    }

    #[must_use]
    pub fn constant(v: Float, l: usize) -> RSeries {
        let prec = Prec(v.prec());
        let mut s = RSeries::zero(l, prec);
        s.c[0] = v;
        s
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.c.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    #[must_use]
    pub fn prec(&self) -> u32 {
        self.c[0].prec()
    }

    #[must_use]
    pub fn coeff(&self, k: usize) -> &Float {
        &self.c[k]
    }

    #[must_use]
    pub fn add(&self, o: &RSeries) -> RSeries {
        assert_eq!(self.len(), o.len());
        RSeries {
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| Float::with_val(self.prec(), a + b))
                .collect(),
        }
    }

    #[must_use]
    pub fn sub(&self, o: &RSeries) -> RSeries {
        assert_eq!(self.len(), o.len());
        RSeries {
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(a, b)| Float::with_val(self.prec(), a - b))
                .collect(),
        }
    }

    #[must_use]
    pub fn scale(&self, k: &Float) -> RSeries {
        RSeries {
            c: self.c.iter().map(|a| Float::with_val(self.prec(), a * k)).collect(),
        }
    }

    #[must_use]
    pub fn mul(&self, o: &RSeries) -> RSeries {
        assert_eq!(self.len(), o.len());
        let l = self.len();
        let prec = self.prec();
        let mut out = RSeries::zero(l, Prec(prec));
        for i in 0..l {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..l - i {
                out.c[i + j] += Float::with_val(prec, &self.c[i] * &o.c[j]);
            }
        }
        out
    }

    /// Multiply by the linear factor (v + eps) without growing length.
    #[must_use]
    pub fn mul_linear(&self, v: &Float) -> RSeries {
        let l = self.len();
        let prec = self.prec();
        let mut out = RSeries::zero(l, Prec(prec));
        for k in 0..l {
            out.c[k] += Float::with_val(prec, &self.c[k] * v);
            if k + 1 < l {
                out.c[k + 1] += self.c[k].clone();
            }
        }
        out
    }

    /// Reciprocal; requires a nonzero constant term.
    #[must_use]
    pub fn inverse(&self) -> RSeries {
        assert!(!self.c[0].is_zero(), "series not invertible");
        let l = self.len();
        let prec = self.prec();
        let inv0 = self.c[0].clone().recip();
        let mut d = RSeries::zero(l, Prec(prec));
        d.c[0] = inv0.clone();
        for n in 1..l {
            let mut acc = Float::new(prec);
            for k in 1..=n {
                acc += Float::with_val(prec, &self.c[k] * &d.c[n - k]);
            }
            d.c[n] = -(acc * &inv0);
        }
        d
    }

    /// exp of the series: e^{c0} times the exponential of the nilpotent
    /// tail, by the usual d' = t' d recurrence.
    #[must_use]
    pub fn exp(&self) -> RSeries {
        let l = self.len();
        let prec = self.prec();
        let lead = self.c[0].clone().exp();
        let mut d = RSeries::zero(l, Prec(prec));
        d.c[0] = Float::with_val(prec, 1);
        for n in 1..l {
            let mut acc = Float::new(prec);
            for k in 1..=n {
                acc += Float::with_val(prec, &self.c[k] * &d.c[n - k]) * (k as u32);
            }
            d.c[n] = acc / (n as u32);
        }
        d.scale(&lead)
    }

    /// Horner evaluation at a numeric eps.
    #[must_use]
    pub fn eval(&self, x: &Float) -> Float {
        let prec = self.prec().max(x.prec());
        let mut acc = Float::new(prec);
        for c in self.c.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

/// 1/(v + eps) as a truncated series, v != 0.
#[must_use]
pub fn inverse_linear(v: &Float, l: usize, prec: Prec) -> RSeries {
    assert!(!v.is_zero());
    let mut s = RSeries::zero(l, prec);
    let inv = Float::with_val(prec.bits(), v).recip();
    let mut term = inv.clone();
    for k in 0..l {
        s.c[k] = term.clone();
        term = -(term * &inv);
    }
    s
}

/// exp(t * eps) truncated: coefficients t^k / k!.
#[must_use]
pub fn exp_linear(t: &Float, l: usize, prec: Prec) -> RSeries {
    let mut s = RSeries::zero(l, prec);
    let mut term = Float::with_val(prec.bits(), 1);
    for k in 0..l {
        s.c[k] = term.clone();
        term = term * t / (k as u32 + 1);
    }
    s
}

/// Taylor coefficients of Gamma(1 + eps) from the classical logarithmic
/// expansion -gamma*eps + sum_{k>=2} (-1)^k zeta(k) eps^k / k.
#[must_use]
pub fn gamma_one_plus_eps(l: usize, prec: Prec) -> RSeries {
    let mut logg = RSeries::zero(l, prec);
    if l > 1 {
        logg.c[1] = -euler_gamma(prec);
    }
    for k in 2..l {
        let zk = Float::with_val(prec.bits(), k as u32).zeta() / (k as u32);
        logg.c[k] = if k % 2 == 0 { zk } else { -zk };
    }
    logg.exp()
}

/// Gamma(a + eps) for integer a, as eps^-pole * series. pole is 1 when
/// a <= 0 (simple pole of Gamma there), else 0.
#[must_use]
pub fn gamma_series_at_int(a: i64, l: usize, prec: Prec) -> (RSeries, u32) {
    let g1 = gamma_one_plus_eps(l, prec);
    if a >= 1 {
        let mut t = g1;
        for j in 1..a {
            t = t.mul_linear(&real(prec, j as f64));
        }
        (t, 0)
    } else {
        // Gamma(-m+eps) = Gamma(1+eps) / (eps * prod_{j=1..m} (eps - j))
        let m = -a;
        let mut t = g1;
        for j in 1..=m {
            t = t.mul(&inverse_linear(&real(prec, -(j as f64)), l, prec));
        }
        (t, 1)
    }
}
