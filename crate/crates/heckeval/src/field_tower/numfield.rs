//! Number fields presented as Q[x]/(f) with an exact maximal order and
//! canonically ordered complex embeddings.

use crate::error::{Error, Result};
use crate::exact::factor::is_irreducible;
use crate::exact::matrix::nullspace_q;
use crate::exact::qpoly::QPoly;
use crate::exact::zpoly::ZPoly;
use crate::field_tower::order::maximal_order;
use crate::mp::cplx::{abs_c, cmp_complex_banded, complex_roots, conjugation_pairing, eval_qpoly_c};
use crate::mp::real::Prec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rug::{Complex, Float};

#[derive(Debug, Clone)]
pub struct NumberField {
    /// Monic irreducible defining polynomial.
    pub poly: ZPoly,
    pub degree: usize,
    /// Integral basis in the power basis; basis[0] = 1.
    pub integral_basis: Vec<QPoly>,
    /// Field discriminant.
    pub disc: BigInt,
    /// Index of the equation order in the maximal order.
    pub index: BigInt,
}

impl NumberField {
    pub fn build(poly: ZPoly) -> Result<NumberField> {
        if poly.is_zero() || poly.deg() < 1 {
            return Err(Error::InvalidInput("defining polynomial must be nonconstant".into()));
        }
        if !poly.is_monic() {
            return Err(Error::NonMonic(format!(
                "leading coefficient {} is not 1",
                poly.lc()
            )));
        }
        if !is_irreducible(&poly) {
            return Err(Error::ReduciblePolynomial(
                "defining polynomial factors over the rationals".into(),
            ));
        }
        let degree = poly.deg() as usize;
        let od = maximal_order(&poly)?;
        Ok(NumberField {
            poly,
            degree,
            integral_basis: od.basis,
            disc: od.disc,
            index: od.index,
        })
    }

    #[must_use]
    pub fn poly_q(&self) -> QPoly {
        QPoly::from_zpoly(&self.poly)
    }

    /// Product of two elements in power-basis coordinates.
    #[must_use]
    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.mul_mod(b, &self.poly_q())
    }

    /// Inverse of a nonzero element.
    #[must_use]
    pub fn inv(&self, a: &QPoly) -> Option<QPoly> {
        a.inverse_mod(&self.poly_q())
    }

    /// Traces of theta^k for k = 0..degree-1 via Newton's identities.
    #[must_use]
    pub fn power_traces(&self) -> Vec<BigRational> {
        let n = self.degree;
        // monic f = x^n + a_{n-1} x^{n-1} + ... + a_0
        let a = |i: usize| -> BigRational { BigRational::from_integer(self.poly.coeff(i)) };
        let mut p = vec![BigRational::zero(); n.max(1)];
        p[0] = BigRational::from_integer(BigInt::from(n as i64));
        for k in 1..n {
            // p_k + sum_{i=1}^{k-1} a_{n-i} p_{k-i} + k a_{n-k} = 0
            let mut acc = BigRational::zero();
            for i in 1..k {
                acc += &a(n - i) * &p[k - i];
            }
            acc += a(n - k) * BigRational::from_integer(BigInt::from(k as i64));
            p[k] = -acc;
        }
        p
    }

    /// Trace of an element reduced to degree < n.
    #[must_use]
    pub fn trace(&self, e: &QPoly) -> BigRational {
        let n = self.degree;
        let r = e.rem(&self.poly_q());
        let p = self.power_traces();
        let coords = r.coords(n);
        let mut acc = BigRational::zero();
        for (c, pk) in coords.iter().zip(&p) {
            acc += c * pk;
        }
        acc
    }

    /// Gram matrix of the trace form on the integral basis; its
    /// determinant must equal the field discriminant.
    #[must_use]
    pub fn trace_gram(&self) -> Vec<Vec<BigRational>> {
        let n = self.degree;
        let mut g = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = self.mul(&self.integral_basis[i], &self.integral_basis[j]);
                let t = self.trace(&prod);
                g[i][j] = t.clone();
                g[j][i] = t;
            }
        }
        g
    }

    /// Complex embeddings as canonically ordered roots: conjugate pairs
    /// are made exactly conjugate bitwise, real roots exactly real, then
    /// sorted by (re, im). The order is stable across precisions.
    pub fn embeddings(&self, digits: u32) -> Result<Vec<Complex>> {
        if digits < 30 {
            return Err(Error::PrecisionTooLow(format!(
                "{digits} digits requested, need at least 30"
            )));
        }
        let prec = Prec::from_digits(digits);
        canonical_roots(&self.poly, prec)
    }

    /// Image of an element under the embedding with the given root.
    #[must_use]
    pub fn embed(&self, e: &QPoly, root: &Complex) -> Complex {
        eval_qpoly_c(&e.rem(&self.poly_q()), root)
    }

    /// Exact minimal polynomial of an element, found as the lowest-order
    /// linear dependency among its powers. Always monic with integer
    /// coefficients cleared.
    #[must_use]
    pub fn minpoly_of(&self, e: &QPoly) -> QPoly {
        minpoly_in(&self.poly_q(), e, self.degree)
    }
}

/// Complex roots of a squarefree integer polynomial in a canonical order:
/// conjugate pairs are made exactly conjugate bitwise, real roots exactly
/// real, then everything is sorted by (re, im) with a dead band so that
/// coordinates which agree exactly (but carry independent rounding noise)
/// compare equal and the next key decides. The order is stable across
/// precisions as long as genuinely distinct coordinates differ by more
/// than the band, which holds for fields of moderate height.
pub fn canonical_roots(f: &ZPoly, prec: Prec) -> Result<Vec<Complex>> {
    if f.deg() == 1 {
        let root = BigRational::new(-f.coeff(0), f.lc().clone());
        let re = crate::mp::real::real_from_rational(&root, prec);
        return Ok(vec![Complex::with_val(prec.bits(), (re, 0))]);
    }
    let mut roots = complex_roots(f, prec)?;
    let pairing = conjugation_pairing(&roots)?;
    let bits = roots[0].prec().0;
    for i in 0..roots.len() {
        let j = pairing[i];
        if j == i {
            // real root: drop the noise imaginary part
            let re = roots[i].real().clone();
            roots[i] = Complex::with_val(bits, (re, 0));
        } else if i < j {
            let master = if roots[i].imag().is_sign_positive() { i } else { j };
            let other = if master == i { j } else { i };
            let conj = roots[master].clone().conj();
            roots[other] = conj;
        }
    }
    let scale = roots
        .iter()
        .map(abs_c)
        .fold(Float::with_val(bits, 1), |a, b| a.max(&b));
    let tol = scale * Float::with_val(bits, 1e-25);
    roots.sort_by(|a, b| cmp_complex_banded(a, b, &tol));
    for w in roots.windows(2) {
        if cmp_complex_banded(&w[0], &w[1], &tol) == std::cmp::Ordering::Equal {
            return Err(Error::Internal(
                "two roots collide inside the ordering band".into(),
            ));
        }
    }
    Ok(roots)
}

/// Minimal polynomial of an element of Q[x]/(modulus) of degree n.
#[must_use]
pub fn minpoly_in(modulus: &QPoly, e: &QPoly, n: usize) -> QPoly {
    let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    let mut cur = QPoly::one();
    powers.push(cur.coords(n));
    for _ in 0..n {
        cur = cur.mul_mod(e, modulus);
        powers.push(cur.coords(n));
        // matrix with columns = powers so far; right kernel gives a
        // monic relation when one exists at this length
        let k = powers.len();
        let mut m = vec![vec![BigRational::zero(); k]; n];
        for (col, pw) in powers.iter().enumerate() {
            for (row, v) in pw.iter().enumerate() {
                m[row][col] = v.clone();
            }
        }
        let ker = nullspace_q(&m);
        if let Some(rel) = ker.first() {
            // normalize so the top coefficient is 1
            let top = rel
                .iter()
                .rposition(|c| !c.is_zero())
                .expect("nonzero kernel vector");
            let inv = rel[top].clone();
            let coeffs: Vec<BigRational> = rel[..=top]
                .iter()
                .map(|c| c / &inv)
                .collect();
            return QPoly::new(coeffs);
        }
    }
    unreachable!("element of a degree-n algebra has a degree <= n minpoly")
}

/// Express target as a Q-linear combination of 1, g, ..., g^(d-1) inside
/// Q[x]/(modulus); None when target is outside that subring.
#[must_use]
pub fn express_in_powers(
    modulus: &QPoly,
    g: &QPoly,
    d: usize,
    target: &QPoly,
    n: usize,
) -> Option<QPoly> {
    let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d + 1);
    let mut cur = QPoly::one();
    for _ in 0..d {
        cols.push(cur.coords(n));
        cur = cur.mul_mod(g, modulus);
    }
    cols.push(target.coords(n));
    let mut m = vec![vec![BigRational::zero(); d + 1]; n];
    for (col, c) in cols.iter().enumerate() {
        for (row, v) in c.iter().enumerate() {
            m[row][col] = v.clone();
        }
    }
    for rel in nullspace_q(&m) {
        if !rel[d].is_zero() {
            let scale = -rel[d].clone();
            let coeffs: Vec<BigRational> = rel[..d].iter().map(|c| c / &scale).collect();
            return Some(QPoly::new(coeffs));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::det_q;
    use crate::mp::cplx::abs_c;
    use crate::mp::real::epsilon_of;
    use num_traits::One;
    use rug::ops::CompleteRound;
    use rug::Float;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    #[test]
    fn build_oracles() {
        let f = NumberField::build(zp(&[1, 0, 1])).unwrap();
        assert_eq!(f.degree, 2);
        assert_eq!(f.disc, BigInt::from(-4));
        let g = NumberField::build(zp(&[-1, 1])).unwrap();
        assert_eq!(g.degree, 1);
        assert_eq!(g.disc, BigInt::one());
        let h = NumberField::build(zp(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(h.disc, BigInt::from(-108));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(
            NumberField::build(zp(&[1, 0, 2])),
            Err(Error::NonMonic(_))
        ));
        assert!(matches!(
            NumberField::build(zp(&[-1, 0, 1])),
            Err(Error::ReduciblePolynomial(_))
        ));
    }

    #[test]
    fn trace_gram_equals_discriminant() {
        for coeffs in [
            vec![1i64, 0, 1],
            vec![3, 0, 1],
            vec![-4, -1, 0, 1],
            vec![5, 12, 3, -4, 3, 0, 1],
        ] {
            let f = NumberField::build(zp(&coeffs)).unwrap();
            let gram = f.trace_gram();
            let det = det_q(&gram);
            assert!(det.is_integer());
            assert_eq!(det.to_integer(), f.disc, "coeffs {coeffs:?}");
        }
    }

    #[test]
    fn gaussian_embeddings() {
        let f = NumberField::build(zp(&[1, 0, 1])).unwrap();
        let em = f.embeddings(40).unwrap();
        assert_eq!(em.len(), 2);
        // exactly conjugate, imaginary parts -1 and +1
        assert!(em[0].real().is_zero() && em[1].real().is_zero());
        let s = (em[0].imag() + em[1].imag()).complete(em[0].prec().0);
        assert!(s.is_zero());
        assert!(em[0].imag().is_sign_negative());
    }

    #[test]
    fn precision_too_low_rejected() {
        let f = NumberField::build(zp(&[1, 0, 1])).unwrap();
        assert!(matches!(f.embeddings(10), Err(Error::PrecisionTooLow(_))));
    }

    #[test]
    fn cube_root_embedding_magnitudes() {
        let f = NumberField::build(zp(&[-2, 0, 0, 1])).unwrap();
        let em = f.embeddings(50).unwrap();
        assert_eq!(em.len(), 3);
        let bits = em[0].prec().0;
        let real_count = em.iter().filter(|z| z.imag().is_zero()).count();
        assert_eq!(real_count, 1);
        for z in &em {
            let m = abs_c(z);
            let want = Float::with_val(bits, 2).root(3);
            assert!((m - want).abs() < epsilon_of(120, Prec(bits)));
        }
    }

    #[test]
    fn embedding_multiplicativity() {
        // |tau(x*y) - tau(x)tau(y)| stays within the advertised bound
        let f = NumberField::build(zp(&[5, 12, 3, -4, 3, 0, 1])).unwrap();
        let digits = 40u32;
        let em = f.embeddings(digits).unwrap();
        let x = QPoly::new(
            [3, -1, 2, 0, 5, -2]
                .iter()
                .map(|&v: &i64| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        );
        let y = QPoly::new(
            [-2, 7, 1, 1, 0, 4]
                .iter()
                .map(|&v: &i64| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        );
        let xy = f.mul(&x, &y);
        for tau in &em {
            let bits = tau.prec().0;
            let lhs = f.embed(&xy, tau);
            let rhs = f.embed(&x, tau) * f.embed(&y, tau);
            let d = abs_c(&(lhs - rhs));
            // tolerance 10^(5-digits) relative to the product scale
            let scale = abs_c(&f.embed(&x, tau)) * abs_c(&f.embed(&y, tau))
                + Float::with_val(bits, 1);
            let tol = Float::with_val(bits, 10f64.powi(5 - digits as i32));
            assert!(d < tol * scale);
        }
    }

    #[test]
    fn minpoly_recovery() {
        // in Q(i): minpoly of 2i is x^2 + 4; of 1 + i is x^2 - 2x + 2
        let f = NumberField::build(zp(&[1, 0, 1])).unwrap();
        let two_i = QPoly::new(vec![
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(2)),
        ]);
        let mp = f.minpoly_of(&two_i);
        let (z, _) = mp.clear_denominators();
        assert_eq!(z.c, vec![BigInt::from(4), BigInt::zero(), BigInt::one()]);
        let one_plus_i = QPoly::new(vec![
            BigRational::one(),
            BigRational::one(),
        ]);
        let mp2 = f.minpoly_of(&one_plus_i);
        let (z2, _) = mp2.clear_denominators();
        assert_eq!(z2.c, vec![BigInt::from(2), BigInt::from(-2), BigInt::one()]);
    }

    #[test]
    fn express_in_powers_roundtrip() {
        // x^2 inside Q[x]/(x^4+1) lies in the span of powers of x^2
        let modu = QPoly::from_zpoly(&zp(&[1, 0, 0, 0, 1]));
        let g = QPoly::new(vec![
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        ]);
        let target = g.clone();
        let c = express_in_powers(&modu, &g, 2, &target, 4).unwrap();
        // coefficients (0, 1): target = g
        assert_eq!(c.coords(2)[1], BigRational::one());
        // x is not in Q(x^2) inside this field
        let x = QPoly::x();
        assert!(express_in_powers(&modu, &g, 2, &x, 4).is_none());
    }
}
