//! Arithmetic in prime fields F_p for p < 2^62, and dense polynomials over
//! them. This is the workhorse layer for modular gcds, resultants by CRT,
//! and polynomial factorization mod p.

/// Must hold for every modulus used here so that sums never overflow u64
/// before reduction.
pub const MAX_MODULUS: u64 = 1 << 62;

#[inline]
pub fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a mod p for prime p; panics on a ≡ 0.
pub fn invm(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "division by zero mod {p}");
    powm(a, p - 2, p)
}

/// Dense polynomial over F_p, coefficient of x^i at index i, no trailing
/// zeros (the zero polynomial is the empty vector).
pub type PolyP = Vec<u64>;

pub fn trim(mut f: PolyP) -> PolyP {
    while let Some(&c) = f.last() {
        if c == 0 {
            f.pop();
        } else {
            break;
        }
    }
    f
}

pub fn deg(f: &PolyP) -> isize {
    f.len() as isize - 1
}

pub fn add_p(f: &PolyP, g: &PolyP, p: u64) -> PolyP {
    let mut r = vec![0u64; f.len().max(g.len())];
    for (i, c) in f.iter().enumerate() {
        r[i] = *c;
    }
    for (i, c) in g.iter().enumerate() {
        r[i] = addm(r[i], *c, p);
    }
    trim(r)
}

pub fn sub_p(f: &PolyP, g: &PolyP, p: u64) -> PolyP {
    let mut r = vec![0u64; f.len().max(g.len())];
    for (i, c) in f.iter().enumerate() {
        r[i] = *c;
    }
    for (i, c) in g.iter().enumerate() {
        r[i] = subm(r[i], *c, p);
    }
    trim(r)
}

pub fn scale_p(f: &PolyP, a: u64, p: u64) -> PolyP {
    trim(f.iter().map(|&c| mulm(c, a, p)).collect())
}

pub fn mul_p(f: &PolyP, g: &PolyP, p: u64) -> PolyP {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            r[i + j] = addm(r[i + j], mulm(a, b, p), p);
        }
    }
    trim(r)
}

/// Quotient and remainder of f by g (g nonzero).
pub fn divrem_p(f: &PolyP, g: &PolyP, p: u64) -> (PolyP, PolyP) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut r = f.clone();
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - g.len() + 1];
    let glead_inv = invm(*g.last().unwrap(), p);
    while r.len() >= g.len() && !r.is_empty() {
        let c = mulm(*r.last().unwrap(), glead_inv, p);
        let shift = r.len() - g.len();
        q[shift] = c;
        for (j, &gc) in g.iter().enumerate() {
            r[shift + j] = subm(r[shift + j], mulm(c, gc, p), p);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem_p(f: &PolyP, g: &PolyP, p: u64) -> PolyP {
    divrem_p(f, g, p).1
}

/// Monic gcd.
pub fn gcd_p(f: &PolyP, g: &PolyP, p: u64) -> PolyP {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_empty() {
        let r = rem_p(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    let inv = invm(*a.last().unwrap(), p);
    scale_p(&a, inv, p)
}

pub fn derivative_p(f: &PolyP, p: u64) -> PolyP {
    if f.len() <= 1 {
        return Vec::new();
    }
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, (i as u64) % p, p))
            .collect(),
    )
}

pub fn eval_p(f: &PolyP, x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = addm(mulm(acc, x, p), c, p);
    }
    acc
}

/// x^e mod (f, p) by repeated squaring on polynomials.
pub fn pow_x_mod_p(e: &num_bigint::BigUint, f: &PolyP, p: u64) -> PolyP {
    use num_traits::Zero;
    let mut result: PolyP = vec![1];
    let mut base: PolyP = rem_p(&vec![0, 1], f, p);
    let mut exp = e.clone();
    let one: num_bigint::BigUint = 1u32.into();
    while !exp.is_zero() {
        if (&exp & &one) == one {
            result = rem_p(&mul_p(&result, &base, p), f, p);
        }
        base = rem_p(&mul_p(&base, &base, p), f, p);
        exp >>= 1;
    }
    result
}

/// Resultant of f and g over F_p by the Euclidean remainder sequence.
pub fn resultant_p(f: &PolyP, g: &PolyP, p: u64) -> u64 {
    let mut a = f.clone();
    let mut b = g.clone();
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut res = 1u64;
    loop {
        let da = deg(&a);
        let db = deg(&b);
        if db < 0 {
            return 0;
        }
        if db == 0 {
            res = mulm(res, powm(b[0], da as u64, p), p);
            return res;
        }
        let r = rem_p(&a, &b, p);
        let dr = deg(&r);
        // res(a,b) = (-1)^{da*db} lc(b)^{da-dr} res(b,r)
        let lb = *b.last().unwrap();
        if (da * db) % 2 == 1 {
            res = subm(0, res, p);
        }
        res = mulm(res, powm(lb, (da - dr.max(0)) as u64, p), p);
        if dr < 0 {
            // r = 0 with deg b > 0: resultant vanishes
            return 0;
        }
        a = b;
        b = r;
    }
}

/// Lagrange interpolation through (xs[i], ys[i]) with distinct xs, over F_p.
pub fn interpolate_p(xs: &[u64], ys: &[u64], p: u64) -> PolyP {
    let n = xs.len();
    assert_eq!(n, ys.len());
    // Newton form is O(n^2) and numerically exact over F_p.
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = subm(coef[i], coef[i - 1], p);
            let den = subm(xs[i] % p, xs[i - j] % p, p);
            coef[i] = mulm(num, invm(den, p), p);
        }
    }
    // Expand Newton form to the monomial basis.
    let mut poly: PolyP = Vec::new();
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let shifted = mul_p(&poly, &vec![subm(0, xs[i] % p, p), 1], p);
        poly = add_p(&shifted, &vec![coef[i]], p);
    }
    trim(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn divrem_reconstructs() {
        let f: PolyP = vec![3, 1, 4, 1, 5, 9, 2];
        let g: PolyP = vec![2, 7, 1];
        let (q, r) = divrem_p(&f, &g, P);
        let back = add_p(&mul_p(&q, &g, P), &r, P);
        assert_eq!(back, trim(f));
        assert!(deg(&r) < deg(&g));
    }

    #[test]
    fn resultant_matches_product_of_root_differences() {
        // f = (x-1)(x-2), g = (x-3)(x-4)(x-5):
        // res = prod over roots (ri - sj) with f monic, g monic:
        // (1-3)(1-4)(1-5)(2-3)(2-4)(2-5) = (-2)(-3)(-4)(-1)(-2)(-3) = 144
        let f: PolyP = vec![2, P - 3, 1];
        let g: PolyP = trim(vec![P - 60, 47, P - 12, 1]);
        assert_eq!(resultant_p(&f, &g, P), 144);
    }

    #[test]
    fn resultant_of_common_root_vanishes() {
        let f: PolyP = vec![P - 2, 1]; // x - 2
        let g: PolyP = vec![P - 4, 0, 1]; // x^2 - 4
        assert_eq!(resultant_p(&f, &g, P), 0);
    }

    #[test]
    fn interpolation_roundtrip() {
        let f: PolyP = vec![5, 0, 3, 11];
        let xs: Vec<u64> = (0..4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| eval_p(&f, x, P)).collect();
        assert_eq!(interpolate_p(&xs, &ys, P), f);
    }

    #[test]
    fn gcd_detects_common_factor() {
        // (x+1)(x+2) and (x+1)(x+3) share x+1
        let f = mul_p(&vec![1, 1], &vec![2, 1], P);
        let g = mul_p(&vec![1, 1], &vec![3, 1], P);
        assert_eq!(gcd_p(&f, &g, P), vec![1, 1]);
    }
}
