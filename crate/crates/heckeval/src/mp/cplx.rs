//! Complex arithmetic helpers: polynomial evaluation over MPC, a
//! simultaneous (Aberth) root finder with a precision ladder, root
//! ordering and conjugate pairing, and continued-fraction recognition
//! of floats as small rationals.

use crate::error::{Error, Result};
use crate::exact::zpoly::ZPoly;
use crate::mp::real::{big_to_rug, epsilon_of, float_to_rational_exact, Prec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Euclid, Signed, Zero};
use rug::ops::CompleteRound;
use rug::{Complex, Float};

#[must_use]
pub fn cplx(re: Float, im: Float) -> Complex {
    let prec = re.prec().max(im.prec());
    Complex::with_val(prec, (re, im))
}

#[must_use]
pub fn cplx_zero(prec: Prec) -> Complex {
    Complex::with_val(prec.bits(), (0, 0))
}

#[must_use]
pub fn cplx_from_f64(prec: Prec, re: f64, im: f64) -> Complex {
    Complex::with_val(prec.bits(), (re, im))
}

#[must_use]
pub fn abs_c(z: &Complex) -> Float {
    z.real().clone().hypot(z.imag())
}

/// Compare with a dead band: values closer than tol count as equal. On
/// data whose distinct values are separated by much more than tol this is
/// a total order that is stable against recomputation noise.
#[must_use]
pub fn cmp_banded(x: &Float, y: &Float, tol: &Float) -> std::cmp::Ordering {
    let bits = x.prec().max(y.prec());
    let d = rug::ops::CompleteRound::complete(x - y, bits);
    if d.clone().abs() < *tol {
        std::cmp::Ordering::Equal
    } else if d.is_sign_negative() {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

/// Lexicographic (re, im) order with a dead band on both coordinates.
#[must_use]
pub fn cmp_complex_banded(a: &Complex, b: &Complex, tol: &Float) -> std::cmp::Ordering {
    cmp_banded(a.real(), b.real(), tol).then_with(|| cmp_banded(a.imag(), b.imag(), tol))
}

/// Determinant by LU elimination with partial pivoting. Consumes the
/// matrix; returns exact zero when a pivot column vanishes.
#[must_use]
pub fn det_complex(mat: &mut [Vec<Complex>]) -> Complex {
    let n = mat.len();
    if n == 0 {
        return Complex::with_val(64, (1, 0));
    }
    let prec = mat[0][0].prec().0;
    let mut det = Complex::with_val(prec, (1, 0));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| abs_c(&mat[a][col]).total_cmp(&abs_c(&mat[b][col])))
            .expect("nonempty pivot range");
        if mat[pivot][col].is_zero() {
            return Complex::with_val(prec, (0, 0));
        }
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        det *= &mat[col][col];
        let inv = mat[col][col].clone().recip();
        for row in col + 1..n {
            let factor = (&mat[row][col] * &inv).complete((prec, prec));
            for j in col + 1..n {
                let delta = (&factor * &mat[col][j]).complete((prec, prec));
                mat[row][j] -= delta;
            }
        }
    }
    det
}

/// Horner evaluation of an integer polynomial at a complex point.
#[must_use]
pub fn eval_zpoly_c(f: &ZPoly, z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::with_val(prec, (0, 0));
    for c in f.c.iter().rev() {
        acc *= z;
        acc += Float::with_val(prec, big_to_rug(c));
    }
    acc
}

/// Horner evaluation with rational coefficients given as (num, den) pairs
/// sharing one denominator is not needed; evaluate coordinates directly.
#[must_use]
pub fn eval_qpoly_c(f: &crate::exact::qpoly::QPoly, z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::with_val(prec, (0, 0));
    for c in f.c.iter().rev() {
        acc *= z;
        acc += crate::mp::real::real_from_rational(c, Prec(prec));
    }
    acc
}

/// Σ |a_i| |z|^i, the natural scale for backward-error bounds.
fn eval_abs_bound(f: &ZPoly, zabs: &Float) -> Float {
    let prec = zabs.prec();
    let mut acc = Float::with_val(prec, 0);
    for c in f.c.iter().rev() {
        acc *= zabs;
        let mag = Float::with_val(prec, big_to_rug(&c.abs()));
        acc += mag;
    }
    acc
}

/// All complex roots of a squarefree integer polynomial, each to the
/// requested precision, sorted by (re, im). Uses Aberth–Ehrlich
/// iteration on a simultaneous approximation, climbing a precision
/// ladder so early iterations are cheap.
pub fn complex_roots(f: &ZPoly, prec: Prec) -> Result<Vec<Complex>> {
    if f.is_zero() || f.deg() < 1 {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    let n = f.deg() as usize;
    let fp = f.derivative();

    // Cauchy bound: all roots lie in |z| <= 1 + max |a_i / a_n|.
    let coarse = Prec::coarse();
    let lead = Float::with_val(coarse.bits(), big_to_rug(&f.lc().abs()));
    let mut maxrel = Float::with_val(coarse.bits(), 0);
    for c in &f.c[..n] {
        let r = Float::with_val(coarse.bits(), big_to_rug(&c.abs())) / &lead;
        if r > maxrel {
            maxrel = r;
        }
    }
    let radius = Float::with_val(coarse.bits(), 1) + maxrel;

    // Initial guesses on a circle of that radius, angles offset from the
    // axes so real roots are not hit head-on with zero imaginary part.
    let mut zs: Vec<Complex> = Vec::with_capacity(n);
    let tau = crate::mp::real::pi(coarse) * 2u32;
    for i in 0..n {
        let angle = tau.clone() * (i as f64 + 0.354) / (n as f64);
        let (s, c) = angle.sin_cos(Float::new(coarse.bits()));
        let z = Complex::with_val(coarse.bits(), (c * &radius, s * &radius));
        zs.push(z);
    }

    // Precision ladder: converge at each level, then widen.
    let mut levels = vec![coarse.bits()];
    while *levels.last().unwrap() < prec.bits() + 32 {
        levels.push((levels.last().unwrap() * 2).min(prec.bits() + 32));
    }

    for &bits in &levels {
        let lvl = Prec(bits);
        for z in &mut zs {
            let mut w = Complex::new(bits);
            w += &*z;
            *z = w;
        }
        let tol = epsilon_of(bits.saturating_sub(24), lvl);
        let mut iter = 0usize;
        loop {
            let mut moved = Float::with_val(bits, 0);
            for i in 0..n {
                let fz = eval_zpoly_c(f, &zs[i]);
                let fpz = eval_zpoly_c(&fp, &zs[i]);
                if fpz.is_zero() {
                    // nudge off a critical point
                    zs[i] += Complex::with_val(bits, (1e-3, 1.3e-3));
                    continue;
                }
                let newton = fz / &fpz;
                let mut s = Complex::with_val(bits, (0, 0));
                for j in 0..n {
                    if j != i {
                        let d = (&zs[i] - &zs[j]).complete((bits, bits));
                        if d.is_zero() {
                            continue;
                        }
                        s += d.recip();
                    }
                }
                let denom = Complex::with_val(bits, (1, 0)) - (&newton * &s).complete((bits, bits));
                let step = if denom.is_zero() { newton } else { newton / denom };
                let sz = abs_c(&step);
                if sz > moved {
                    moved = sz;
                }
                zs[i] -= step;
            }
            iter += 1;
            let scale = zs
                .iter()
                .map(abs_c)
                .fold(Float::with_val(bits, 1), |a, b| if b > a { b } else { a });
            if moved < tol.clone() * scale {
                break;
            }
            if iter > 400 {
                return Err(Error::NotConverged(format!(
                    "root iteration stalled at {bits} bits after {iter} rounds"
                )));
            }
        }
    }

    // Backward-error acceptance: |f(z)| must be a tiny multiple of the
    // evaluation scale, else precision was insufficient.
    let bits = prec.bits() + 32;
    let check_tol = epsilon_of(prec.bits(), Prec(bits));
    for z in &zs {
        let fz = abs_c(&eval_zpoly_c(f, z));
        let scale = eval_abs_bound(f, &abs_c(z));
        if fz > check_tol.clone() * scale * 64u32 {
            return Err(Error::NotConverged(
                "root residual above backward-error tolerance".into(),
            ));
        }
    }

    zs.sort_by(|a, b| {
        a.real()
            .partial_cmp(b.real())
            .unwrap()
            .then(a.imag().partial_cmp(b.imag()).unwrap())
    });
    Ok(zs)
}

/// Aberth iteration for a squarefree polynomial given by complex
/// coefficients (ascending degree, nonzero leading coefficient), run at
/// the coefficients' own precision. Used for small auxiliary solves
/// where coefficients are themselves approximate.
pub fn complex_poly_roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 || coeffs[n].is_zero() {
        return Err(Error::InvalidInput("need nonzero leading coefficient".into()));
    }
    let bits = coeffs.iter().map(|c| c.prec().0).max().unwrap();
    let eval = |z: &Complex| -> Complex {
        let mut acc = Complex::with_val(bits, (0, 0));
        for c in coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    };
    let evald = |z: &Complex| -> Complex {
        let mut acc = Complex::with_val(bits, (0, 0));
        for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
            acc *= z;
            acc += (c * (k as u32)).complete((bits, bits));
        }
        acc
    };

    let lead = abs_c(&coeffs[n]);
    let mut maxrel = Float::with_val(bits, 0);
    for c in &coeffs[..n] {
        let r = abs_c(c) / &lead;
        if r > maxrel {
            maxrel = r;
        }
    }
    let radius = Float::with_val(bits, 1) + maxrel;
    let mut zs: Vec<Complex> = Vec::with_capacity(n);
    let tau = crate::mp::real::pi(Prec(bits)) * 2u32;
    for i in 0..n {
        let angle = tau.clone() * (i as f64 + 0.354) / (n as f64);
        let (s, c) = angle.sin_cos(Float::new(bits));
        zs.push(Complex::with_val(bits, (c * &radius, s * &radius)));
    }

    let tol = epsilon_of(bits.saturating_sub(16), Prec(bits));
    for iter in 0..500 {
        let mut moved = Float::with_val(bits, 0);
        for i in 0..n {
            let fz = eval(&zs[i]);
            let fpz = evald(&zs[i]);
            if fpz.is_zero() {
                zs[i] += Complex::with_val(bits, (1.1e-3, 0.9e-3));
                continue;
            }
            let newton = fz / &fpz;
            let mut s = Complex::with_val(bits, (0, 0));
            for j in 0..n {
                if j != i {
                    let d = (&zs[i] - &zs[j]).complete((bits, bits));
                    if d.is_zero() {
                        continue;
                    }
                    s += d.recip();
                }
            }
            let denom = Complex::with_val(bits, (1, 0)) - (&newton * &s).complete((bits, bits));
            let step = if denom.is_zero() { newton } else { newton / denom };
            let sz = abs_c(&step);
            if sz > moved {
                moved = sz;
            }
            zs[i] -= step;
        }
        let scale = zs
            .iter()
            .map(abs_c)
            .fold(Float::with_val(bits, 1), |a, b| if b > a { b } else { a });
        if moved < tol.clone() * scale {
            return Ok(zs);
        }
        let _ = iter;
    }
    Err(Error::NotConverged("complex root iteration stalled".into()))
}

/// Roots of a squarefree integer polynomial with the conjugation
/// involution made explicit: `pairing[i] = j` with conj(root_i) ≈ root_j
/// (j == i for real roots). Fails if the involution is ambiguous at the
/// working precision.
pub fn conjugation_pairing(roots: &[Complex]) -> Result<Vec<usize>> {
    let n = roots.len();
    let bits = roots.first().map_or(64, |z| z.prec().0);
    let mut pairing = vec![usize::MAX; n];
    for i in 0..n {
        let target = roots[i].conj_ref().complete((bits, bits));
        let mut best = usize::MAX;
        let mut best_d = Float::with_val(bits, 0);
        let mut second = Float::with_val(bits, 0);
        for (j, z) in roots.iter().enumerate() {
            let d = abs_c(&(z - &target).complete((bits, bits)));
            if best == usize::MAX || d < best_d {
                second = best_d.clone();
                best_d = d;
                best = j;
            } else if second.is_zero() || d < second {
                second = d;
            }
        }
        if n > 1 && !(best_d.clone() * 1000u32 < second) {
            return Err(Error::FiberInconstant(
                "conjugation pairing ambiguous at this precision".into(),
            ));
        }
        pairing[i] = best;
    }
    for i in 0..n {
        if pairing[pairing[i]] != i {
            return Err(Error::FiberInconstant("conjugation pairing not involutive".into()));
        }
    }
    Ok(pairing)
}

/// Recognize a float as a rational with denominator at most `max_den`,
/// requiring the match to hold to within 2^-tol_bits relative to scale.
#[must_use]
pub fn float_to_rational_bounded(x: &Float, max_den: &BigInt, tol_bits: u32) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let exact = float_to_rational_exact(x);
    let cand = best_rational_below(&exact, max_den);
    let err = (&exact - &cand).abs();
    let scale = BigRational::from_integer(BigInt::from(1))
        .max(exact.abs());
    let tol = BigRational::new(BigInt::from(1), BigInt::from(1) << (tol_bits as usize));
    if err <= tol * scale {
        Some(cand)
    } else {
        None
    }
}

/// Best rational approximation with bounded denominator, via the
/// continued-fraction convergents of the exact input.
#[must_use]
pub fn best_rational_below(q: &BigRational, max_den: &BigInt) -> BigRational {
    if q.denom() <= max_den {
        return q.clone();
    }
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (BigInt::from(0), BigInt::from(1));
    // invariant: p/q convergents of the continued fraction of q
    loop {
        if den.is_zero() {
            break;
        }
        let a = num.div_euclid(&den);
        let r = num - &a * &den;
        num = std::mem::replace(&mut den, r);
        let p2 = &a * &p0 + &p1;
        let q2 = &a * &q0 + &q1;
        if &q2 > max_den {
            // semiconvergent with largest admissible coefficient
            let t = (max_den - &q1).div_euclid(&q0.clone().max(BigInt::from(1)));
            let ps = &t * &p0 + &p1;
            let qs = &t * &q0 + &q1;
            let conv = BigRational::new(p0.clone(), q0.clone().max(BigInt::from(1)));
            if qs > BigInt::from(0) {
                let semi = BigRational::new(ps, qs);
                let d_semi = (q - &semi).abs();
                let d_conv = (q - &conv).abs();
                return if d_semi < d_conv { semi } else { conv };
            }
            return conv;
        }
        p1 = std::mem::replace(&mut p0, p2);
        q1 = std::mem::replace(&mut q0, q2);
    }
    BigRational::new(p0, q0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::zpoly::ZPoly;
    use num_bigint::BigInt;
    use std::str::FromStr;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    #[test]
    fn quadratic_roots_exact() {
        // x^2 + 1: roots ±i
        let f = zp(&[1, 0, 1]);
        let prec = Prec::from_digits(50);
        let roots = complex_roots(&f, prec).unwrap();
        assert_eq!(roots.len(), 2);
        let tol = epsilon_of(150, prec);
        for r in &roots {
            assert!(r.real().clone().abs() < tol);
            assert!((r.imag().clone().abs() - 1u32).abs() < tol);
        }
        // one root in each half plane
        assert!(roots[0].imag().is_sign_negative() != roots[1].imag().is_sign_negative());
    }

    #[test]
    fn desk_sextic_roots_verify() {
        // x^6 + 3x^4 - 4x^3 + 3x^2 + 12x + 5 has 6 distinct complex roots,
        // product of roots = 5 (up to sign), none real.
        let f = zp(&[5, 12, 3, -4, 3, 0, 1]);
        let prec = Prec::from_digits(60);
        let roots = complex_roots(&f, prec).unwrap();
        assert_eq!(roots.len(), 6);
        let bits = roots[0].prec().0;
        let mut prod = Complex::with_val(bits, (1, 0));
        for r in &roots {
            prod *= r;
            // no real roots for this polynomial
            assert!(r.imag().clone().abs() > Float::with_val(bits, 1e-10));
        }
        let tol = epsilon_of(prec.bits().saturating_sub(40), Prec(bits));
        assert!(abs_c(&(prod.clone() - Complex::with_val(bits, (5, 0)))) < tol, "prod={prod}");
        let pairing = conjugation_pairing(&roots).unwrap();
        for (i, &j) in pairing.iter().enumerate() {
            assert_ne!(i, j, "no real roots so no fixed points");
        }
    }

    #[test]
    fn wilkinson_fragment_separated() {
        // (x-1)(x-2)...(x-8): close but resolvable real roots
        let mut f = ZPoly::one();
        for k in 1..=8i64 {
            f = f.mul(&zp(&[-k, 1]));
        }
        let prec = Prec::from_digits(40);
        let roots = complex_roots(&f, prec).unwrap();
        for (i, r) in roots.iter().enumerate() {
            let bits = r.prec().0;
            let expect = Float::with_val(bits, (i + 1) as u32);
            let d = abs_c(&(r - &Complex::with_val(bits, (&expect, 0))).complete((bits, bits)));
            assert!(d < Float::with_val(bits, 1e-30), "root {i}: {r}");
        }
    }

    #[test]
    fn big_coefficient_polynomial() {
        // x^2 - 10^40: roots ±10^20, exercises magnitude handling
        let big = BigInt::from_str("10000000000000000000000000000000000000000").unwrap();
        let f = ZPoly::new(vec![-big, BigInt::from(0), BigInt::from(1)]);
        let prec = Prec::from_digits(50);
        let roots = complex_roots(&f, prec).unwrap();
        let bits = roots[0].prec().0;
        let expect = Float::with_val(bits, 1e20);
        let d = ((roots[1].real() - &expect).complete(bits)).abs() / &expect;
        assert!(d < Float::with_val(bits, 1e-45));
    }

    #[test]
    fn rational_recognition_roundtrip() {
        let prec = Prec::from_digits(50);
        let q = BigRational::new(BigInt::from(-355), BigInt::from(113));
        let x = crate::mp::real::real_from_rational(&q, prec);
        let got = float_to_rational_bounded(&x, &BigInt::from(1_000_000), 140).unwrap();
        assert_eq!(got, q);
    }

    #[test]
    fn rational_recognition_rejects_irrational() {
        let prec = Prec::from_digits(50);
        let x = Float::with_val(prec.bits(), 2).sqrt();
        assert!(float_to_rational_bounded(&x, &BigInt::from(1_000_000), 120).is_none());
    }

    #[test]
    fn best_rational_pi_convergent() {
        let prec = Prec(200);
        let p = crate::mp::real::pi(prec);
        let exact = float_to_rational_exact(&p);
        let approx = best_rational_below(&exact, &BigInt::from(150));
        assert_eq!(approx, BigRational::new(BigInt::from(355), BigInt::from(113)));
    }

    #[test]
    fn determinant_oracles() {
        let prec = Prec::from_digits(40);
        let c = |re: f64, im: f64| cplx_from_f64(prec, re, im);
        // det [[1,2],[3,4]] = -2 needs a row swap under partial pivoting
        let mut m = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]];
        let d = det_complex(&mut m);
        let diff = abs_c(&(d + c(2.0, 0.0)));
        assert!(diff < Float::with_val(prec.bits(), 1e-30));
        // det [[i,1],[1,i]] = i*i - 1 = -2
        let mut m = vec![vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 1.0)]];
        let d = det_complex(&mut m);
        let diff = abs_c(&(d + c(2.0, 0.0)));
        assert!(diff < Float::with_val(prec.bits(), 1e-30));
        // rank-deficient matrix collapses to zero
        let mut m = vec![vec![c(1.0, 2.0), c(2.0, 4.0)], vec![c(3.0, -1.0), c(6.0, -2.0)]];
        let d = det_complex(&mut m);
        assert!(abs_c(&d) < Float::with_val(prec.bits(), 1e-30));
    }
}
