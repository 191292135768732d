//! Numerical integration: tanh-sinh rule on finite intervals (handles
//! endpoint singularities, converges double-exponentially for analytic
//! integrands) and the trapezoid rule for smooth periodic integrands.

use crate::error::{Error, Result};
use crate::mp::real::{epsilon_of, pi, Prec};
use rug::ops::CompleteRound;
use rug::Float;

/// Integrate f over [a, b] to roughly `prec` bits. The integrand may be
/// singular at the endpoints as long as the integral converges.
pub fn tanh_sinh<F>(f: F, a: &Float, b: &Float, prec: Prec) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    let wp = prec.bits() + 48;
    let work = Prec(wp);
    let tol = epsilon_of(prec.bits(), work);
    let halfpi = pi(work) / 2u32;
    let mid = ((a + b).complete(wp)) / 2u32;
    let hw = ((b - a).complete(wp)) / 2u32;
    if hw.is_zero() {
        return Ok(Float::new(wp));
    }

    // contribution of the center node t = 0: weight (pi/2) * halfwidth
    let mut sum = f(&mid) * &halfpi * &hw;
    let mut prev = Float::new(wp);
    let mut h = Float::with_val(wp, 1);
    let max_level = 13u32;

    for level in 0..=max_level {
        if level > 0 {
            h = h / 2u32;
        }
        // at level 0 take all integer nodes; afterwards only odd ones
        let stride = if level == 0 { 1u32 } else { 2u32 };
        let mut j = 1u32;
        let mut tiny_streak = 0;
        loop {
            let t = h.clone() * j;
            let (sh, ch) = t.sinh_cosh(Float::new(wp));
            let arg = sh * &halfpi;
            // tanh and sech^2 of arg via exp, stable for large arg
            let e = (-(arg.clone().abs() * 2u32)).exp();
            let sech2 = {
                let c = arg.clone().cosh();
                c.square().recip()
            };
            let w = halfpi.clone() * ch * sech2 * &hw;
            if w.is_zero() || !w.is_finite() {
                break;
            }
            // node as exact distance from its endpoint: 1 - |tanh| =
            // 2e/(1+e), cancellation-free, so integrable endpoint
            // singularities keep full relative accuracy
            let dist = hw.clone() * e.clone() * 2u32 / (Float::with_val(wp, 1) + &e);
            let xp = (b - &dist).complete(wp);
            let xm = (a + &dist).complete(wp);
            let mut term = Float::new(wp);
            if xp < *b {
                term += f(&xp);
            }
            if xm > *a {
                term += f(&xm);
            }
            let contrib = term * &w;
            let size = contrib.clone().abs();
            sum += contrib;
            let scale = Float::with_val(wp, &sum).abs().max(&Float::with_val(wp, 1));
            if size < tol.clone() * scale {
                tiny_streak += 1;
                if tiny_streak >= 3 {
                    break;
                }
            } else {
                tiny_streak = 0;
            }
            j += stride;
            if j > 1u32 << 22 {
                return Err(Error::QuadratureFailed("node budget exhausted".into()));
            }
        }
        let estimate = sum.clone() * &h;
        if level >= 3 {
            let diff = (&estimate - &prev).complete(wp).abs();
            let scale = estimate.clone().abs().max(&Float::with_val(wp, 1));
            if diff < tol.clone() * scale * 16u32 {
                return Ok(estimate);
            }
        }
        prev = estimate;
    }
    Err(Error::QuadratureFailed(format!(
        "tanh-sinh did not stabilize within {max_level} levels"
    )))
}

/// Trapezoid rule for a smooth 2*pi-periodic integrand, doubling the
/// node count until two consecutive estimates agree.
pub fn periodic_quadrature<F>(f: F, prec: Prec) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    let wp = prec.bits() + 32;
    let work = Prec(wp);
    let tol = epsilon_of(prec.bits(), work);
    let tau = pi(work) * 2u32;
    let mut n = 8u32;
    let mut prev: Option<Float> = None;
    while n <= 1 << 16 {
        let mut sum = Float::new(wp);
        for j in 0..n {
            let theta = tau.clone() * j / n;
            sum += f(&theta);
        }
        let estimate = sum * &tau / n;
        if let Some(p) = &prev {
            let diff = (&estimate - p).complete(wp).abs();
            let scale = estimate.clone().abs().max(&Float::with_val(wp, 1));
            if diff < tol.clone() * scale * 4u32 {
                return Ok(estimate);
            }
        }
        prev = Some(estimate);
        n *= 2;
    }
    Err(Error::QuadratureFailed(
        "periodic trapezoid did not stabilize".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn assert_close(got: &Float, want: &Float, bits: u32) {
        let wp = got.prec();
        let d = (got - want).complete(wp).abs();
        let scale = Float::with_val(wp, want).abs().max(&Float::with_val(wp, 1));
        let mut tol = Float::with_val(wp, 1);
        tol >>= bits;
        assert!(d < tol * scale, "got={got} want={want}");
    }

    #[test]
    fn polynomial_integral() {
        let prec = Prec(200);
        let a = Float::with_val(256, 0);
        let b = Float::with_val(256, 1);
        let got = tanh_sinh(|x| x.clone().square(), &a, &b, prec).unwrap();
        let want = Float::with_val(256, 1) / 3u32;
        assert_close(&got, &want, 190);
    }

    #[test]
    fn endpoint_singularity() {
        // integral of 1/sqrt(x) over [0,1] is 2
        let prec = Prec(140);
        let a = Float::with_val(220, 0);
        let b = Float::with_val(220, 1);
        let got = tanh_sinh(|x| x.clone().sqrt().recip(), &a, &b, prec).unwrap();
        assert_close(&got, &Float::with_val(220, 2), 130);
    }

    #[test]
    fn gaussian_radial_moment() {
        // 2 * integral_0^R r^{2t-1} e^{-2 pi r^2} dr = (2 pi)^{-t} Gamma(t)
        let prec = Prec(160);
        let wp = 220u32;
        let a = Float::with_val(wp, 0);
        let twopi = pi(Prec(wp)) * 2u32;
        // truncation: e^{-2 pi R^2} < 2^-260 for R = 6
        let b = Float::with_val(wp, 6);
        for t in [0.5f64, 1.0, 1.5, 3.0] {
            let tf = Float::with_val(wp, t);
            let got = tanh_sinh(
                |r| {
                    let p = Float::with_val(wp, 2.0 * t - 1.0);
                    let radial = r.clone().pow(&p);
                    let gauss = (-(r.clone().square() * &twopi)).exp();
                    radial * gauss
                },
                &a,
                &b,
                prec,
            )
            .unwrap()
                * 2u32;
            let want = twopi.clone().pow(&(-tf.clone())) * tf.gamma();
            assert_close(&got, &want, 140);
        }
    }

    #[test]
    fn truncated_gamma() {
        let prec = Prec(180);
        let wp = 240u32;
        let a = Float::with_val(wp, 0);
        let b = Float::with_val(wp, 220);
        let s = Float::with_val(wp, 2.5);
        let got = tanh_sinh(
            |u| {
                let p = (&s - &Float::with_val(wp, 1)).complete(wp);
                u.clone().pow(&p) * (-u.clone()).exp()
            },
            &a,
            &b,
            prec,
        )
        .unwrap();
        let want = s.clone().gamma();
        assert_close(&got, &want, 170);
    }

    #[test]
    fn angular_orthogonality() {
        let prec = Prec(140);
        let wp = 200u32;
        // cos(3t)^2 integrates to pi over a period
        let got = periodic_quadrature(|t| (t.clone() * 3u32).cos().square(), prec).unwrap();
        assert_close(&got, &pi(Prec(wp)), 130);
        // mixed frequencies vanish
        let got0 = periodic_quadrature(
            |t| (t.clone() * 2u32).cos() * (t.clone() * 3u32).cos(),
            prec,
        )
        .unwrap();
        assert!(got0.clone().abs() < Float::with_val(wp, 1e-38), "{got0}");
    }
}
