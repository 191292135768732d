//! Dense univariate polynomials over Z, with the modular-CRT resultant and
//! gcd routines the field-construction layer is built on.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{self, PolyP};
use super::primes::crt_prime_iter;

/// Coefficient of x^i at index i; no trailing zeros; zero polynomial = empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    pub c: Vec<BigInt>,
}

impl ZPoly {
    #[must_use]
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().map_or(false, Zero::is_zero) {
            c.pop();
        }
        ZPoly { c }
    }

    #[must_use]
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    #[must_use]
    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    #[must_use]
    pub fn constant(a: BigInt) -> Self {
        ZPoly::new(vec![a])
    }

    #[must_use]
    pub fn x() -> Self {
        ZPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    #[must_use]
    pub fn from_i64(v: &[i64]) -> Self {
        ZPoly::new(v.iter().map(|&a| BigInt::from(a)).collect())
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with deg 0 for nonzero constants; panics on the zero
    /// polynomial (callers must handle that case explicitly).
    #[must_use]
    pub fn deg(&self) -> usize {
        assert!(!self.c.is_empty(), "degree of zero polynomial");
        self.c.len() - 1
    }

    #[must_use]
    pub fn lc(&self) -> &BigInt {
        self.c.last().expect("lc of zero polynomial")
    }

    #[must_use]
    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lc().is_one()
    }

    #[must_use]
    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    #[must_use]
    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.c.len().max(other.c.len());
        let mut r = Vec::with_capacity(n);
        for i in 0..n {
            r.push(self.coeff(i) + other.coeff(i));
        }
        ZPoly::new(r)
    }

    #[must_use]
    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.c.len().max(other.c.len());
        let mut r = Vec::with_capacity(n);
        for i in 0..n {
            r.push(self.coeff(i) - other.coeff(i));
        }
        ZPoly::new(r)
    }

    #[must_use]
    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.c.iter().map(|a| -a).collect())
    }

    #[must_use]
    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut r = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        ZPoly::new(r)
    }

    #[must_use]
    pub fn mul_scalar(&self, a: &BigInt) -> ZPoly {
        if a.is_zero() {
            return ZPoly::zero();
        }
        ZPoly::new(self.c.iter().map(|b| a * b).collect())
    }

    /// Multiply by x^k.
    #[must_use]
    pub fn shift_up(&self, k: usize) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut r = vec![BigInt::zero(); k];
        r.extend(self.c.iter().cloned());
        ZPoly::new(r)
    }

    #[must_use]
    pub fn derivative(&self) -> ZPoly {
        if self.c.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    #[must_use]
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// f(a/b) * b^deg(f), the homogenized value; exact rational evaluation
    /// without a rational type.
    #[must_use]
    pub fn eval_homog(&self, a: &BigInt, b: &BigInt) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.c.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        // One b too many was multiplied into bpow on the last step; acc
        // accumulated deg+1 rounds, matching b^deg exactly.
        acc
    }

    /// Substitute x -> x + a.
    #[must_use]
    pub fn taylor_shift(&self, a: &BigInt) -> ZPoly {
        let mut r = ZPoly::zero();
        let xa = ZPoly::new(vec![a.clone(), BigInt::one()]);
        for c in self.c.iter().rev() {
            r = r.mul(&xa).add(&ZPoly::constant(c.clone()));
        }
        r
    }

    /// Substitute x -> a*x.
    #[must_use]
    pub fn scale_arg(&self, a: &BigInt) -> ZPoly {
        let mut pow = BigInt::one();
        let mut r = Vec::with_capacity(self.c.len());
        for c in &self.c {
            r.push(c * &pow);
            pow *= a;
        }
        ZPoly::new(r)
    }

    /// Composition f(g(x)).
    #[must_use]
    pub fn compose(&self, g: &ZPoly) -> ZPoly {
        let mut r = ZPoly::zero();
        for c in self.c.iter().rev() {
            r = r.mul(g).add(&ZPoly::constant(c.clone()));
        }
        r
    }

    /// gcd of all coefficients, nonnegative; zero for the zero polynomial.
    #[must_use]
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
        }
        g
    }

    #[must_use]
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        ZPoly::new(self.c.iter().map(|a| a / &g).collect())
    }

    /// Exact division; panics if the division is not exact (internal use on
    /// verified divisors only).
    #[must_use]
    pub fn div_exact(&self, d: &ZPoly) -> ZPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut rem = self.c.clone();
        assert!(rem.len() >= d.c.len(), "non-exact polynomial division");
        let mut q = vec![BigInt::zero(); rem.len() - d.c.len() + 1];
        let dl = d.lc().clone();
        for shift in (0..q.len()).rev() {
            let top = rem[shift + d.c.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (quo, r) = top.div_rem(&dl);
            assert!(r.is_zero(), "non-exact polynomial division (leading)");
            q[shift] = quo.clone();
            for (j, dc) in d.c.iter().enumerate() {
                rem[shift + j] -= &quo * dc;
            }
        }
        assert!(rem.iter().all(Zero::is_zero), "non-exact polynomial division (remainder)");
        ZPoly::new(q)
    }

    /// Reduce mod p into an F_p polynomial.
    #[must_use]
    pub fn reduce_mod(&self, p: u64) -> PolyP {
        let pb = BigInt::from(p);
        modp::trim(
            self.c
                .iter()
                .map(|a| {
                    let m = a.mod_floor(&pb);
                    m.to_u64_digits().1.first().copied().unwrap_or(0)
                })
                .collect(),
        )
    }

    /// Largest coefficient magnitude.
    #[must_use]
    pub fn height(&self) -> BigInt {
        self.c
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Squared l2 norm of the coefficient vector.
    #[must_use]
    pub fn norm2_sq(&self) -> BigInt {
        self.c.iter().map(|a| a * a).sum()
    }
}

/// Signed representative of r mod m in (-m/2, m/2].
fn symmetric_rep(r: &BigUint, m: &BigUint) -> BigInt {
    let half = m >> 1;
    if r > &half {
        BigInt::from_biguint(Sign::Minus, m - r)
    } else {
        BigInt::from_biguint(Sign::Plus, r.clone())
    }
}

/// CRT accumulator over pairwise-coprime u64 primes with signed lift.
pub struct CrtAccum {
    modulus: BigUint,
    value: BigUint,
}

impl CrtAccum {
    #[must_use]
    pub fn new() -> Self {
        CrtAccum {
            modulus: BigUint::one(),
            value: BigUint::zero(),
        }
    }

    pub fn push(&mut self, residue: u64, p: u64) {
        let pb = BigUint::from(p);
        if self.modulus.is_one() {
            self.value = BigUint::from(residue % p);
            self.modulus = pb;
            return;
        }
        // value' ≡ value (mod modulus), value' ≡ residue (mod p)
        let m_mod_p = (&self.modulus % &pb).to_u64_digits().first().copied().unwrap_or(0);
        let v_mod_p = (&self.value % &pb).to_u64_digits().first().copied().unwrap_or(0);
        let diff = modp::subm(residue % p, v_mod_p, p);
        let t = modp::mulm(diff, modp::invm(m_mod_p, p), p);
        self.value = &self.value + &self.modulus * BigUint::from(t);
        self.modulus *= pb;
    }

    #[must_use]
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    #[must_use]
    pub fn signed(&self) -> BigInt {
        symmetric_rep(&self.value, &self.modulus)
    }
}

impl Default for CrtAccum {
    fn default() -> Self {
        Self::new()
    }
}

/// Resultant of f and g by CRT over word-size primes, with the Hadamard
/// bound guaranteeing exactness. Primes dividing both leading coefficients
/// are skipped because they change the degree pattern.
#[must_use]
pub fn resultant(f: &ZPoly, g: &ZPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    if f.deg() == 0 {
        return f.c[0].pow(g.deg() as u32);
    }
    if g.deg() == 0 {
        return g.c[0].pow(f.deg() as u32);
    }
    // |res| <= ||f||_2^deg(g) * ||g||_2^deg(f); work with squares to stay
    // in integers, rounding the exponent up.
    let bound: BigUint = (f.norm2_sq().magnitude().pow(g.deg().div_ceil(2) as u32))
        * (g.norm2_sq().magnitude().pow(f.deg().div_ceil(2) as u32))
        * BigUint::from(4u32);
    let mut acc = CrtAccum::new();
    for p in crt_prime_iter() {
        if (f.lc() % BigInt::from(p)).is_zero() || (g.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let rf = f.reduce_mod(p);
        let rg = g.reduce_mod(p);
        acc.push(modp::resultant_p(&rf, &rg, p), p);
        if acc.modulus() > &bound {
            break;
        }
    }
    acc.signed()
}

/// Discriminant of f: (-1)^{d(d-1)/2} res(f, f') / lc(f).
#[must_use]
pub fn discriminant(f: &ZPoly) -> BigInt {
    let d = f.deg();
    assert!(d >= 1, "discriminant needs degree >= 1");
    if d == 1 {
        return BigInt::one();
    }
    let r = resultant(f, &f.derivative());
    let (q, rem) = r.div_rem(f.lc());
    assert!(rem.is_zero(), "resultant not divisible by leading coefficient");
    if (d * (d - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Primitive gcd over Z by the modular method: combine monic gcds mod
/// several primes, then verify divisibility exactly. Unlucky primes (which
/// raise the modular gcd degree) are filtered by keeping the lowest degree
/// seen and restarting when a smaller one appears.
#[must_use]
pub fn gcd(f: &ZPoly, g: &ZPoly) -> ZPoly {
    if f.is_zero() {
        return g.primitive_part();
    }
    if g.is_zero() {
        return f.primitive_part();
    }
    let fp = f.primitive_part();
    let gp = g.primitive_part();
    let lcg = fp.lc().gcd(gp.lc());

    let mut best_deg: Option<usize> = None;
    let mut acc = CrtAccum::new();
    let mut coeffs: Vec<CrtAccum> = Vec::new();
    // Mignotte-style bound on gcd coefficients: 2^min(deg) * min(height)*lcg,
    // padded by the usual factor for safety.
    let hbound: BigUint = (BigUint::one() << (fp.deg().min(gp.deg()) + 2))
        * fp.height().magnitude().min(gp.height().magnitude()).clone()
        * lcg.magnitude()
        * BigUint::from(4u32);

    for p in crt_prime_iter() {
        if (fp.lc() % BigInt::from(p)).is_zero() || (gp.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let hp = modp::gcd_p(&fp.reduce_mod(p), &gp.reduce_mod(p), p);
        let dh = hp.len().saturating_sub(1);
        if hp.is_empty() {
            continue;
        }
        if dh == 0 {
            return ZPoly::one();
        }
        match best_deg {
            Some(b) if dh > b => continue,
            Some(b) if dh < b => {
                best_deg = Some(dh);
                acc = CrtAccum::new();
                coeffs = (0..=dh).map(|_| CrtAccum::new()).collect();
            }
            None => {
                best_deg = Some(dh);
                coeffs = (0..=dh).map(|_| CrtAccum::new()).collect();
            }
            _ => {}
        }
        // Scale to leading coefficient lcg mod p so integer CRT is stable.
        let scale = (lcg.mod_floor(&BigInt::from(p))).to_u64_digits().1.first().copied().unwrap_or(0);
        let hs = modp::scale_p(&hp, scale, p);
        for (i, ca) in coeffs.iter_mut().enumerate() {
            ca.push(hs.get(i).copied().unwrap_or(0), p);
        }
        acc.push(1, p);
        if acc.modulus() > &hbound {
            let cand =
                ZPoly::new(coeffs.iter().map(CrtAccum::signed).collect()).primitive_part();
            // Verify; on failure keep accumulating with more primes.
            if divides(&cand, &fp) && divides(&cand, &gp) {
                return cand;
            }
        }
    }
    unreachable!("prime iterator is unbounded");
}

/// Whether d divides f exactly over Q (equivalently over Z after clearing
/// contents, since d is taken primitive).
#[must_use]
pub fn divides(d: &ZPoly, f: &ZPoly) -> bool {
    if d.is_zero() {
        return f.is_zero();
    }
    if f.is_zero() {
        return true;
    }
    if f.deg() < d.deg() {
        return false;
    }
    // Pseudo-division then check the scaled remainder vanishes.
    let mut rem = f.clone();
    let dl = d.lc().clone();
    while !rem.is_zero() && rem.deg() >= d.deg() {
        let shift = rem.deg() - d.deg();
        let top = rem.lc().clone();
        rem = rem.mul_scalar(&dl).sub(&d.mul_scalar(&top).shift_up(shift));
    }
    rem.is_zero()
}

/// f / gcd(f, f'), primitive; the radical of f up to sign.
#[must_use]
pub fn squarefree_part(f: &ZPoly) -> ZPoly {
    if f.is_zero() || f.deg() == 0 {
        return ZPoly::one();
    }
    let g = gcd(f, &f.derivative());
    if g.deg() == 0 {
        return f.primitive_part();
    }
    // Exact over Q: clear the content that primitive-part division leaves.
    let num = f.primitive_part();
    let mut q = pseudo_div_exact(&num, &g);
    q = q.primitive_part();
    q
}

/// Quotient of an exact division over Q returned as a primitive Z
/// polynomial; panics if d does not divide f over Q.
#[must_use]
pub fn pseudo_div_exact(f: &ZPoly, d: &ZPoly) -> ZPoly {
    // Scale f by lc(d)^(deg f - deg d + 1) so the division is integral.
    let k = f.deg() - d.deg() + 1;
    let scaled = f.mul_scalar(&d.lc().pow(k as u32));
    scaled.div_exact(d).primitive_part()
}

/// n-th cyclotomic polynomial by exact division of x^n - 1.
#[must_use]
pub fn cyclotomic(n: u32) -> ZPoly {
    assert!(n >= 1);
    let mut num = {
        let mut c = vec![BigInt::zero(); n as usize + 1];
        c[0] = -BigInt::one();
        c[n as usize] = BigInt::one();
        ZPoly::new(c)
    };
    for d in 1..n {
        if n % d == 0 {
            num = num.div_exact(&cyclotomic(d));
        }
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    /// Sylvester-matrix resultant with i128 Bareiss elimination, usable as an
    /// independent oracle for small instances.
    fn resultant_sylvester(f: &ZPoly, g: &ZPoly) -> i128 {
        let m = f.deg();
        let n = g.deg();
        let size = m + n;
        let mut a = vec![vec![0i128; size]; size];
        for row in 0..n {
            for (j, c) in f.c.iter().enumerate() {
                let v: i128 = c.to_string().parse().unwrap();
                a[row][row + (m - j)] = v;
            }
        }
        for row in 0..m {
            for (j, c) in g.c.iter().enumerate() {
                let v: i128 = c.to_string().parse().unwrap();
                a[n + row][row + (n - j)] = v;
            }
        }
        // Bareiss
        let mut denom: i128 = 1;
        let mut sign = 1i128;
        for k in 0..size {
            if a[k][k] == 0 {
                let mut found = false;
                for r in k + 1..size {
                    if a[r][k] != 0 {
                        a.swap(k, r);
                        sign = -sign;
                        found = true;
                        break;
                    }
                }
                if !found {
                    return 0;
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / denom;
                }
                a[i][k] = 0;
            }
            denom = a[k][k];
        }
        sign * a[size - 1][size - 1]
    }

    #[test]
    fn resultant_crt_matches_sylvester_oracle() {
        let cases = [
            (zp(&[2, -3, 1]), zp(&[-60, 47, -12, 1])),
            (zp(&[5, 12, 3, 0, 3, 1]), zp(&[7, -2, 1])),
            (zp(&[1, 1, 1, 1]), zp(&[-1, 2, -3, 4])),
            (zp(&[-4, 0, 0, 1]), zp(&[3, 1])),
        ];
        for (f, g) in &cases {
            let want = resultant_sylvester(f, g);
            let got = resultant(f, g);
            assert_eq!(got, BigInt::from(want), "f={:?} g={:?}", f, g);
        }
    }

    #[test]
    fn discriminant_quadratic_and_cubic_closed_forms() {
        // x^2 + bx + c -> b^2 - 4c
        for (b, c) in [(3i64, 1i64), (-7, 12), (0, -5)] {
            let f = zp(&[c, b, 1]);
            assert_eq!(discriminant(&f), BigInt::from(b * b - 4 * c));
        }
        // x^3 + px + q -> -4p^3 - 27q^2
        for (p, q) in [(1i64, 1i64), (-2, 5), (0, -2)] {
            let f = zp(&[q, p, 0, 1]);
            assert_eq!(
                discriminant(&f),
                BigInt::from(-4 * p.pow(3) - 27 * q.pow(2))
            );
        }
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let h = zp(&[-1, 0, 1]); // x^2 - 1
        let f = h.mul(&zp(&[3, 1, 7, 1]));
        let g = h.mul(&zp(&[-5, 2]));
        let got = gcd(&f, &g);
        assert_eq!(got, h);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let f = zp(&[1, 0, 1]);
        let g = zp(&[-2, 0, 1]);
        assert_eq!(gcd(&f, &g), ZPoly::one());
    }

    #[test]
    fn squarefree_part_strips_multiplicity() {
        // (x-1)^2 (x+2)
        let f = zp(&[-1, 1]).mul(&zp(&[-1, 1])).mul(&zp(&[2, 1]));
        let sf = squarefree_part(&f);
        assert_eq!(sf, zp(&[-1, 1]).mul(&zp(&[2, 1])));
    }

    #[test]
    fn eval_homog_matches_rational_evaluation() {
        let f = zp(&[2, -1, 0, 3]);
        // f(3/2) * 2^3 = (2 - 3/2 + 3*27/8) * 8 = 16 - 12 + 81 = 85
        assert_eq!(
            f.eval_homog(&BigInt::from(3), &BigInt::from(2)),
            BigInt::from(85)
        );
    }

    #[test]
    fn taylor_shift_and_scale() {
        let f = zp(&[0, 0, 1]); // x^2
        assert_eq!(f.taylor_shift(&BigInt::from(1)), zp(&[1, 2, 1]));
        assert_eq!(f.scale_arg(&BigInt::from(3)), zp(&[0, 0, 9]));
    }

    #[test]
    fn cyclotomic_small_values() {
        assert_eq!(cyclotomic(1), zp(&[-1, 1]));
        assert_eq!(cyclotomic(4), zp(&[1, 0, 1]));
        assert_eq!(cyclotomic(8), zp(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(12), zp(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(3), zp(&[1, 1, 1]));
    }

    #[test]
    fn div_exact_roundtrip() {
        let d = zp(&[1, 2, 3]);
        let q = zp(&[-4, 5, 1, 2]);
        let f = d.mul(&q);
        assert_eq!(f.div_exact(&d), q);
    }
}
