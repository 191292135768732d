//! Chebyshev interpolation on finite intervals, with a piecewise model
//! for caching expensive smooth functions. Coefficients are computed at
//! the first-kind nodes; evaluation is Clenshaw recurrence.

use crate::mp::real::{pi, Prec};
use rug::ops::CompleteRound;
use rug::Float;

#[derive(Debug, Clone)]
pub struct ChebPiece {
    pub a: Float,
    pub b: Float,
    /// coef[0] carries the 1/N factor so evaluation is a plain sum.
    pub coef: Vec<Float>,
}

impl ChebPiece {
    /// Interpolate f on [a, b] with degree+1 nodes.
    pub fn fit<F>(f: F, a: &Float, b: &Float, degree: usize, prec: Prec) -> ChebPiece
    where
        F: Fn(&Float) -> Float,
    {
        let wp = prec.bits();
        let n = degree + 1;
        let mid = ((a + b).complete(wp)) / 2u32;
        let hw = ((b - a).complete(wp)) / 2u32;
        let pi_n = pi(Prec(wp)) / (n as u32);

        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let angle = pi_n.clone() * (2 * k + 1) as u32 / 2u32;
            let x = mid.clone() + hw.clone() * angle.cos();
            values.push(f(&x));
        }

        let mut coef = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = Float::new(wp);
            for (k, v) in values.iter().enumerate() {
                if j == 0 {
                    acc += v;
                } else {
                    let angle = pi_n.clone() * ((j * (2 * k + 1)) as u32) / 2u32;
                    acc += angle.cos() * v;
                }
            }
            if j == 0 {
                coef.push(acc / (n as u32));
            } else {
                coef.push(acc * 2u32 / (n as u32));
            }
        }
        ChebPiece {
            a: Float::with_val(wp, a),
            b: Float::with_val(wp, b),
            coef,
        }
    }

    #[must_use]
    pub fn eval(&self, x: &Float) -> Float {
        let wp = self.coef[0].prec();
        let span = (&self.b - &self.a).complete(wp);
        let t = ((x * 2u32).complete(wp) - &self.a - &self.b) / span;
        let t2 = t.clone() * 2u32;
        let n = self.coef.len();
        let mut b1 = Float::new(wp);
        let mut b2 = Float::new(wp);
        for k in (1..n).rev() {
            let bk = self.coef[k].clone() + t2.clone() * &b1 - &b2;
            b2 = std::mem::replace(&mut b1, bk);
        }
        self.coef[0].clone() + t * &b1 - &b2
    }

    /// Crude interpolation-error proxy: magnitude of the trailing
    /// coefficient pair. Meaningful only when coefficients decay.
    #[must_use]
    pub fn tail_bound(&self) -> Float {
        let wp = self.coef[0].prec();
        let n = self.coef.len();
        let mut t = Float::new(wp);
        for c in &self.coef[n.saturating_sub(2)..] {
            t += c.clone().abs();
        }
        t
    }

    #[must_use]
    pub fn contains(&self, x: &Float) -> bool {
        *x >= self.a && *x <= self.b
    }
}

/// Contiguous pieces covering [a, b], uniform subdivision.
#[derive(Debug, Clone)]
pub struct ChebModel {
    pub pieces: Vec<ChebPiece>,
}

impl ChebModel {
    pub fn fit_uniform<F>(
        f: F,
        a: &Float,
        b: &Float,
        n_pieces: usize,
        degree: usize,
        prec: Prec,
    ) -> ChebModel
    where
        F: Fn(&Float) -> Float,
    {
        assert!(n_pieces > 0);
        let wp = prec.bits();
        let width = ((b - a).complete(wp)) / (n_pieces as u32);
        let mut pieces = Vec::with_capacity(n_pieces);
        for i in 0..n_pieces {
            let lo = a.clone() + width.clone() * (i as u32);
            let hi = if i + 1 == n_pieces {
                Float::with_val(wp, b)
            } else {
                a.clone() + width.clone() * (i as u32 + 1)
            };
            pieces.push(ChebPiece::fit(&f, &lo, &hi, degree, prec));
        }
        ChebModel { pieces }
    }

    /// Evaluate; x must lie inside the covered interval.
    #[must_use]
    pub fn eval(&self, x: &Float) -> Option<Float> {
        let n = self.pieces.len();
        // binary search on piece start
        let mut lo = 0usize;
        let mut hi = n;
        while lo + 1 < hi {
            let m = (lo + hi) / 2;
            if *x >= self.pieces[m].a {
                lo = m;
            } else {
                hi = m;
            }
        }
        let piece = &self.pieces[lo];
        if piece.contains(x) {
            Some(piece.eval(x))
        } else {
            None
        }
    }

    #[must_use]
    pub fn max_tail_bound(&self) -> Float {
        let mut worst = Float::new(self.pieces[0].coef[0].prec());
        for p in &self.pieces {
            let t = p.tail_bound();
            if t > worst {
                worst = t;
            }
        }
        worst
    }
}
