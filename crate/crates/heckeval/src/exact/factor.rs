//! Factorization of univariate polynomials over Z: Cantor-Zassenhaus mod p,
//! quadratic Hensel lifting of the factor list, and Mignotte-bounded subset
//! recombination. Degrees in scope stay below ~80 (splitting fields of sextic
//! generators and small compositums), so the classical pipeline is ample.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modp::{self, PolyP};
use super::primes::small_prime_iter;
use super::zpoly::{self, ZPoly};

// ---------------------------------------------------------------------------
// arithmetic on Vec<BigInt> coefficients modulo a BigInt (for Hensel lifting)
// ---------------------------------------------------------------------------

type PolyM = Vec<BigInt>;

fn trim_m(mut f: PolyM) -> PolyM {
    while f.last().map_or(false, Zero::is_zero) {
        f.pop();
    }
    f
}

fn red_m(f: &ZPoly, m: &BigInt) -> PolyM {
    trim_m(f.c.iter().map(|a| a.mod_floor(m)).collect())
}

fn add_m(f: &PolyM, g: &PolyM, m: &BigInt) -> PolyM {
    let n = f.len().max(g.len());
    let zero = BigInt::zero();
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.get(i).unwrap_or(&zero);
        let b = g.get(i).unwrap_or(&zero);
        r.push((a + b).mod_floor(m));
    }
    trim_m(r)
}

fn sub_m(f: &PolyM, g: &PolyM, m: &BigInt) -> PolyM {
    let n = f.len().max(g.len());
    let zero = BigInt::zero();
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.get(i).unwrap_or(&zero);
        let b = g.get(i).unwrap_or(&zero);
        r.push((a - b).mod_floor(m));
    }
    trim_m(r)
}

fn mul_m(f: &PolyM, g: &PolyM, m: &BigInt) -> PolyM {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            r[i + j] += a * b;
        }
    }
    trim_m(r.into_iter().map(|a| a.mod_floor(m)).collect())
}

/// Division by a monic divisor, coefficients mod m.
fn divrem_monic_m(f: &PolyM, g: &PolyM, m: &BigInt) -> (PolyM, PolyM) {
    assert!(g.last().map_or(false, One::is_one), "divisor must be monic");
    let mut r = f.clone();
    if r.len() < g.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - g.len() + 1];
    while r.len() >= g.len() {
        let c = r.last().unwrap().clone();
        let shift = r.len() - g.len();
        if !c.is_zero() {
            q[shift] = c.clone();
            for (j, gc) in g.iter().enumerate() {
                r[shift + j] = (&r[shift + j] - &c * gc).mod_floor(m);
            }
        }
        r.pop();
        r = trim_m(r);
    }
    (trim_m(q), r)
}

fn lift_signed(f: &PolyM, m: &BigInt) -> ZPoly {
    let half = m >> 1;
    ZPoly::new(
        f.iter()
            .map(|a| if a > &half { a - m } else { a.clone() })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// factorization mod p
// ---------------------------------------------------------------------------

/// g^e mod (f, p).
fn pow_poly_mod(g: &PolyP, e: &BigUint, f: &PolyP, p: u64) -> PolyP {
    let mut result: PolyP = vec![1];
    let mut base = modp::rem_p(g, f, p);
    let mut exp = e.clone();
    let one = BigUint::one();
    while !exp.is_zero() {
        if (&exp & &one) == one {
            result = modp::rem_p(&modp::mul_p(&result, &base, p), f, p);
        }
        base = modp::rem_p(&modp::mul_p(&base, &base, p), f, p);
        exp >>= 1;
    }
    result
}

/// Distinct-degree decomposition: list of (d, product of irreducibles of
/// degree d), for squarefree monic f mod p.
fn distinct_degree(f: &PolyP, p: u64) -> Vec<(usize, PolyP)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h: PolyP = vec![0, 1];
    let mut d = 0usize;
    while modp::deg(&rest) > 0 {
        d += 1;
        if (modp::deg(&rest) as usize) < 2 * d {
            let dd = modp::deg(&rest) as usize;
            out.push((dd, rest.clone()));
            break;
        }
        h = pow_poly_mod(&h, &BigUint::from(p), &rest, p);
        let hx = modp::sub_p(&h, &vec![0, 1], p);
        let g = modp::gcd_p(&hx, &rest, p);
        if modp::deg(&g) > 0 {
            out.push((d, g.clone()));
            let (q, r) = modp::divrem_p(&rest, &g, p);
            debug_assert!(r.is_empty());
            rest = q;
            h = modp::rem_p(&h, &rest, p);
        }
    }
    out
}

/// Split a product of distinct monic irreducibles of equal degree d
/// (Cantor-Zassenhaus). For odd p a random element is raised to
/// (p^d - 1)/2; for p = 2 the trace map to F_2 plays the same role.
/// Trial elements come from a fixed-seed xorshift stream so runs are
/// reproducible; each trial splits with probability at least one half.
fn equal_degree_split(f: &PolyP, d: usize, p: u64, out: &mut Vec<PolyP>) {
    let n = modp::deg(f) as usize;
    if n == d {
        out.push(f.clone());
        return;
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15
        ^ p.wrapping_mul(0xbf58_476d_1ce4_e5b9)
        ^ (n as u64).wrapping_mul(0x94d0_49bb_1331_11eb)
        ^ (d as u64);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..256 {
        let a = modp::trim((0..n).map(|_| next() % p).collect());
        if modp::deg(&a) < 1 {
            continue;
        }
        let bm1 = if p == 2 {
            // a + a^2 + a^4 + ... + a^(2^(d-1)) takes values 0 or 1 in
            // each residue field, so its gcd with f separates factors.
            let mut acc = modp::rem_p(&a, f, p);
            let mut cur = acc.clone();
            for _ in 1..d {
                cur = modp::rem_p(&modp::mul_p(&cur, &cur, p), f, p);
                acc = modp::add_p(&acc, &cur, p);
            }
            acc
        } else {
            let b = pow_poly_mod(&a, &e, f, p);
            modp::sub_p(&b, &vec![1], p)
        };
        let g = modp::gcd_p(&bm1, f, p);
        let dg = modp::deg(&g);
        if dg > 0 && (dg as usize) < n {
            equal_degree_split(&g, d, p, out);
            let (q, r) = modp::divrem_p(f, &g, p);
            debug_assert!(r.is_empty());
            equal_degree_split(&q, d, p, out);
            return;
        }
    }
    unreachable!("equal-degree split exhausted its trial budget");
}

fn factor_squarefree_mod_p(f: &PolyP, p: u64) -> Vec<PolyP> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        equal_degree_split(&g, d, p, &mut out);
    }
    out.sort();
    out
}

fn collect_factors_mod_p(f: &PolyP, p: u64, mult: u32, out: &mut Vec<(PolyP, u32)>) {
    if modp::deg(f) < 1 {
        return;
    }
    let df = modp::derivative_p(f, p);
    if df.is_empty() {
        // Vanishing derivative over F_p means f = g(x^p) = g(x)^p.
        let g = modp::trim(f.iter().step_by(p as usize).copied().collect());
        collect_factors_mod_p(&g, p, mult * p as u32, out);
        return;
    }
    // f / gcd(f, f') is squarefree and carries every irreducible factor
    // whose multiplicity is prime to p, each exactly once.
    let s = {
        let g = modp::gcd_p(f, &df, p);
        let (q, r) = modp::divrem_p(f, &g, p);
        debug_assert!(r.is_empty());
        q
    };
    let mut rest = f.clone();
    for q in factor_squarefree_mod_p(&s, p) {
        let mut e = 0u32;
        loop {
            let (quo, rem) = modp::divrem_p(&rest, &q, p);
            if !rem.is_empty() {
                break;
            }
            rest = quo;
            e += 1;
        }
        debug_assert!(e >= 1);
        out.push((q, mult * e));
    }
    // Factors with multiplicity divisible by p survive in rest and are
    // picked up by the vanishing-derivative branch.
    collect_factors_mod_p(&rest, p, mult, out);
}

/// Monic irreducible factors of a nonzero polynomial mod p together with
/// multiplicities, sorted by (degree, coefficients). The input need not be
/// monic or squarefree; the leading unit is discarded.
#[must_use]
pub fn factor_mod_p(f: &PolyP, p: u64) -> Vec<(PolyP, u32)> {
    let f = modp::trim(f.clone());
    assert!(!f.is_empty(), "factor_mod_p of zero polynomial");
    if modp::deg(&f) < 1 {
        return Vec::new();
    }
    let inv = modp::invm(*f.last().unwrap(), p);
    let f = modp::scale_p(&f, inv, p);
    let mut out = Vec::new();
    collect_factors_mod_p(&f, p, 1, &mut out);
    out.sort_by(|a, b| (modp::deg(&a.0), &a.0).cmp(&(modp::deg(&b.0), &b.0)));
    out
}

// ---------------------------------------------------------------------------
// Hensel lifting
// ---------------------------------------------------------------------------

/// One quadratic step: from f ≡ g h (mod m), s g + t h ≡ 1 (mod m), g and h
/// monic, to the same data mod m^2.
fn hensel_step(
    f: &ZPoly,
    m: &BigInt,
    g: &PolyM,
    h: &PolyM,
    s: &PolyM,
    t: &PolyM,
) -> (PolyM, PolyM, PolyM, PolyM) {
    let m2 = m * m;
    let fm = red_m(f, &m2);
    let e = sub_m(&fm, &mul_m(g, h, &m2), &m2);
    // delta_g = (t e) mod g keeps g' monic with the same degree.
    let te = mul_m(t, &e, &m2);
    let (_, dg) = divrem_monic_m(&te, g, &m2);
    let g2 = add_m(g, &dg, &m2);
    // The cofactor is the exact monic quotient (unique Hensel lift).
    let (h2, rem) = divrem_monic_m(&fm, &g2, &m2);
    assert!(rem.is_empty(), "hensel step: non-exact cofactor division");
    // Bezout update: with b = s g' + t h' - 1, multiply (s, t) by (1 - b)
    // and rebalance degrees by reducing s mod h'.
    let b = sub_m(
        &add_m(&mul_m(s, &g2, &m2), &mul_m(t, &h2, &m2), &m2),
        &vec![BigInt::one()],
        &m2,
    );
    let one_minus_b = sub_m(&vec![BigInt::one()], &b, &m2);
    let s2 = mul_m(s, &one_minus_b, &m2);
    let t2 = mul_m(t, &one_minus_b, &m2);
    let (q, s2r) = divrem_monic_m(&s2, &h2, &m2);
    let t2r = add_m(&t2, &mul_m(&q, &g2, &m2), &m2);
    (g2, h2, s2r, t2r)
}

/// Extended gcd of coprime g, h in F_p[x]: (s, t) with s g + t h = 1.
pub(crate) fn bezout_mod_p(g: &PolyP, h: &PolyP, p: u64) -> (PolyP, PolyP) {
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1): (PolyP, PolyP) = (vec![1], vec![]);
    let (mut t0, mut t1): (PolyP, PolyP) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = modp::divrem_p(&r0, &r1, p);
        let ns = modp::sub_p(&s0, &modp::mul_p(&q, &s1, p), p);
        let nt = modp::sub_p(&t0, &modp::mul_p(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    assert_eq!(modp::deg(&r0), 0, "bezout of non-coprime polynomials");
    let inv = modp::invm(r0[0], p);
    (modp::scale_p(&s0, inv, p), modp::scale_p(&t0, inv, p))
}

/// Lift the pair (g_p, h_p) with f ≡ g_p h_p mod p (all monic) to modulus
/// exactly `target_mod` (a power p^(2^j)), returning (g, h) mod target_mod.
fn lift_pair(f: &ZPoly, g_p: &PolyP, h_p: &PolyP, p: u64, target_mod: &BigInt) -> (PolyM, PolyM) {
    let (sp, tp) = bezout_mod_p(g_p, h_p, p);
    let to_m = |v: &PolyP| -> PolyM { trim_m(v.iter().map(|&a| BigInt::from(a)).collect()) };
    let mut g = to_m(g_p);
    let mut h = to_m(h_p);
    let mut s = to_m(&sp);
    let mut t = to_m(&tp);
    let mut cur = BigInt::from(p);
    while &cur < target_mod {
        let (g2, h2, s2, t2) = hensel_step(f, &cur, &g, &h, &s, &t);
        cur = &cur * &cur;
        g = g2;
        h = h2;
        s = s2;
        t = t2;
    }
    assert_eq!(&cur, target_mod, "lift_pair: modulus ladder mismatch");
    (g, h)
}

/// Lift all monic factors of monic f from mod p to a power of p >= target.
/// Returns (lifted factors, modulus actually used).
fn hensel_lift_list(
    f_monic: &ZPoly,
    factors_p: &[PolyP],
    p: u64,
    target: &BigInt,
) -> (Vec<PolyM>, BigInt) {
    let mut target_mod = BigInt::from(p);
    while &target_mod < target {
        target_mod = &target_mod * &target_mod;
    }
    let mut out: Vec<PolyM> = Vec::with_capacity(factors_p.len());
    let mut rest = f_monic.clone();
    let mut rest_p: Vec<PolyP> = factors_p.to_vec();
    while rest_p.len() > 1 {
        let g_p = rest_p.remove(0);
        let mut h_p: PolyP = vec![1];
        for q in &rest_p {
            h_p = modp::mul_p(&h_p, q, p);
        }
        let (g, h) = lift_pair(&rest, &g_p, &h_p, p, &target_mod);
        out.push(g);
        rest = lift_signed(&h, &target_mod);
    }
    out.push(red_m(&rest, &target_mod));
    (out, target_mod)
}

// ---------------------------------------------------------------------------
// recombination and the public interface
// ---------------------------------------------------------------------------

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + (size - i) < items.len() {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn int_sqrt_ceil(s: &BigInt) -> BigInt {
    let r = s.sqrt();
    if &(&r * &r) == s {
        r
    } else {
        r + 1
    }
}

/// Irreducible factors (primitive, positive leading coefficient) of a
/// squarefree f with deg >= 1.
#[must_use]
pub fn factor_squarefree_over_z(f: &ZPoly) -> Vec<ZPoly> {
    assert!(!f.is_zero() && f.deg() >= 1);
    let f = f.primitive_part();
    if f.deg() == 1 {
        return vec![f];
    }

    // Choose an odd prime keeping f squarefree, preferring few mod-p factors.
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut usable_seen = 0;
    for p in small_prime_iter().skip_while(|&p| p < 3) {
        if (f.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = f.reduce_mod(p);
        if modp::deg(&fp) != f.deg() as isize {
            continue;
        }
        let dfp = modp::derivative_p(&fp, p);
        if modp::deg(&modp::gcd_p(&fp, &dfp, p)) != 0 {
            continue;
        }
        let inv = modp::invm(*fp.last().unwrap(), p);
        let fp_monic = modp::scale_p(&fp, inv, p);
        let factors = factor_squarefree_mod_p(&fp_monic, p);
        let better = best
            .as_ref()
            .map_or(true, |(_, cur)| factors.len() < cur.len());
        if better {
            best = Some((p, factors));
        }
        usable_seen += 1;
        if usable_seen >= 4 || best.as_ref().map_or(false, |(_, v)| v.len() == 1) {
            break;
        }
    }
    let (p, factors_p) = best.expect("no usable prime found");
    if factors_p.len() == 1 {
        return vec![f];
    }

    // Monic transform: fstar(x) = lc^(n-1) f(x/lc) is monic over Z; its
    // factors pull back through x -> lc*x plus a primitive part.
    let n = f.deg();
    let lc = f.lc().clone();
    let fstar = {
        let mut c = Vec::with_capacity(n + 1);
        for (i, a) in f.c.iter().enumerate() {
            if i == n {
                c.push(BigInt::one());
            } else {
                c.push(a * lc.pow((n - 1 - i) as u32));
            }
        }
        ZPoly::new(c)
    };
    debug_assert!(fstar.is_monic());
    let lc_mod_p = {
        let r = lc.mod_floor(&BigInt::from(p));
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    // Transform the mod-p factors the same way: g*(x) = lc^{deg g} g(x/lc).
    let factors_star: Vec<PolyP> = factors_p
        .iter()
        .map(|g| {
            let d = modp::deg(g) as usize;
            let mut out = vec![0u64; d + 1];
            for (i, &a) in g.iter().enumerate() {
                out[i] = modp::mulm(a, modp::powm(lc_mod_p, (d - i) as u64, p), p);
            }
            modp::trim(out)
        })
        .collect();

    // Mignotte: any monic divisor of monic fstar has |coeffs| <= 2^n ||fstar||_2.
    let bound: BigInt = (BigInt::one() << (n + 1)) * int_sqrt_ceil(&fstar.norm2_sq());
    let target: BigInt = (&bound << 1) + 1;
    let (lifted, modulus) = hensel_lift_list(&fstar, &factors_star, p, &target);

    let k = lifted.len();
    let mut used = vec![false; k];
    let mut out: Vec<ZPoly> = Vec::new();
    let mut remaining = f.clone();
    let mut size = 1usize;
    while size <= k {
        let avail: Vec<usize> = (0..k).filter(|&i| !used[i]).collect();
        if avail.is_empty() || size > avail.len() {
            break;
        }
        let mut advanced = false;
        for subset in combinations(&avail, size) {
            if subset.iter().any(|&i| used[i]) {
                continue;
            }
            let mut prod: PolyM = vec![BigInt::one()];
            for &i in &subset {
                prod = mul_m(&prod, &lifted[i], &modulus);
            }
            let cand_star = lift_signed(&prod, &modulus);
            let cand = cand_star.scale_arg(&lc).primitive_part();
            if cand.deg() >= 1 && zpoly::divides(&cand, &remaining) {
                remaining = zpoly::pseudo_div_exact(&remaining, &cand);
                for &i in &subset {
                    used[i] = true;
                }
                out.push(cand);
                advanced = true;
                if remaining.deg() == 0 {
                    break;
                }
            }
        }
        if remaining.deg() == 0 {
            break;
        }
        if !advanced {
            size += 1;
        }
    }
    if remaining.deg() >= 1 {
        out.push(remaining.primitive_part());
    }
    out.sort_by(|a, b| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));
    out
}

/// Full factorization over Q up to constants: (irreducible primitive factor
/// with positive leading coefficient, multiplicity), sorted.
#[must_use]
pub fn factor(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    assert!(!f.is_zero(), "factor of zero polynomial");
    if f.deg() == 0 {
        return Vec::new();
    }
    let radical = zpoly::squarefree_part(f);
    let mut out = Vec::new();
    for irr in factor_squarefree_over_z(&radical) {
        let mut e = 0u32;
        let mut rest = f.primitive_part();
        while rest.deg() >= irr.deg() && zpoly::divides(&irr, &rest) {
            rest = zpoly::pseudo_div_exact(&rest, &irr);
            e += 1;
            if rest.deg() == 0 {
                break;
            }
        }
        out.push((irr, e));
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0.c).cmp(&(b.0.deg(), &b.0.c)));
    out
}

/// Irreducibility over Q for a nonconstant polynomial.
#[must_use]
pub fn is_irreducible(f: &ZPoly) -> bool {
    if f.is_zero() || f.deg() == 0 {
        return false;
    }
    if f.deg() == 1 {
        return true;
    }
    let sf = zpoly::squarefree_part(f);
    if sf.deg() != f.deg() {
        return false;
    }
    factor_squarefree_over_z(&sf).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    #[test]
    fn factors_product_of_linears() {
        let f = zp(&[-1, 1]).mul(&zp(&[-2, 1])).mul(&zp(&[3, 1]));
        let fs = factor_squarefree_over_z(&f);
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&zp(&[-1, 1])));
        assert!(fs.contains(&zp(&[-2, 1])));
        assert!(fs.contains(&zp(&[3, 1])));
    }

    #[test]
    fn factors_mixed_degrees() {
        let f = zp(&[1, 0, 1]).mul(&zp(&[-2, 0, 1])).mul(&zp(&[5, 1]));
        let fs = factor_squarefree_over_z(&f);
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&zp(&[1, 0, 1])));
        assert!(fs.contains(&zp(&[-2, 0, 1])));
        assert!(fs.contains(&zp(&[5, 1])));
    }

    #[test]
    fn keeps_irreducible_sextic_whole() {
        let f = zp(&[5, 12, 3, -4, 3, 0, 1]);
        let fs = factor_squarefree_over_z(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0], f);
        assert!(is_irreducible(&f));
    }

    #[test]
    fn handles_nontrivial_leading_coefficient() {
        let f = zp(&[1, 2]).mul(&zp(&[1, 1, 3]));
        let fs = factor_squarefree_over_z(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&zp(&[1, 2])));
        assert!(fs.contains(&zp(&[1, 1, 3])));
    }

    #[test]
    fn recombination_survives_extra_modular_splitting() {
        // x^4 + 1 is irreducible over Z but splits mod every prime.
        let f = zp(&[1, 0, 0, 0, 1]);
        let fs = factor_squarefree_over_z(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0], f);
    }

    #[test]
    fn full_factor_with_multiplicity() {
        let f = zp(&[-1, 1]).mul(&zp(&[-1, 1])).mul(&zp(&[1, 0, 1]));
        let fs = factor(&f);
        assert!(fs.contains(&(zp(&[-1, 1]), 2)));
        assert!(fs.contains(&(zp(&[1, 0, 1]), 1)));
    }

    #[test]
    fn cyclotomic_12_is_irreducible() {
        assert!(is_irreducible(&zpoly::cyclotomic(12)));
    }

    #[test]
    fn degree_12_product_splits_into_its_two_sextics() {
        let a = zp(&[5, 12, 3, -4, 3, 0, 1]);
        let b = zp(&[5, -12, 3, 4, 3, 0, 1]);
        let f = a.mul(&b);
        let fs = factor_squarefree_over_z(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a));
        assert!(fs.contains(&b));
    }

    fn rebuild(fs: &[(PolyP, u32)], p: u64) -> PolyP {
        let mut acc: PolyP = vec![1];
        for (q, e) in fs {
            for _ in 0..*e {
                acc = modp::mul_p(&acc, q, p);
            }
        }
        acc
    }

    #[test]
    fn mod_p_splits_x2_plus_1_by_residue_class() {
        // splits mod 5, irreducible mod 3, a ramified square mod 2
        let f: PolyP = vec![1, 0, 1];
        assert_eq!(factor_mod_p(&f, 5), vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        assert_eq!(factor_mod_p(&f, 3), vec![(vec![1, 0, 1], 1)]);
        assert_eq!(factor_mod_p(&f, 2), vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn mod_p_handles_vanishing_derivative() {
        // (x+1)^3 = x^3 + 1 mod 3 has derivative zero
        let f: PolyP = vec![1, 0, 0, 1];
        assert_eq!(factor_mod_p(&f, 3), vec![(vec![1, 1], 3)]);
        // (x^2+x+1)^2 = x^4 + x^2 + 1 mod 2, base factor irreducible
        let g: PolyP = vec![1, 0, 1, 0, 1];
        assert_eq!(factor_mod_p(&g, 2), vec![(vec![1, 1, 1], 2)]);
    }

    #[test]
    fn mod_p_mixed_multiplicities() {
        // (x+1)^2 (x+2)^3 (x^2+2) mod 5, assembled then refactored
        let p = 5;
        let parts: Vec<(PolyP, u32)> =
            vec![(vec![1, 1], 2), (vec![2, 1], 3), (vec![2, 0, 1], 1)];
        let f = rebuild(&parts, p);
        assert_eq!(factor_mod_p(&f, p), parts);
    }

    #[test]
    fn mod_p_totally_ramified_sextic_at_two() {
        // x^6+3x^4-4x^3+3x^2+12x+5 = (x+1)^6 mod 2
        let f = zp(&[5, 12, 3, -4, 3, 0, 1]).reduce_mod(2);
        assert_eq!(factor_mod_p(&f, 2), vec![(vec![1, 1], 6)]);
    }

    #[test]
    fn mod_p_factorizations_multiply_back() {
        let f = zp(&[5, 12, 3, -4, 3, 0, 1]);
        for p in [2u64, 3, 5, 7, 11, 13] {
            let fp = f.reduce_mod(p);
            let fs = factor_mod_p(&fp, p);
            assert_eq!(rebuild(&fs, p), fp, "p = {p}");
            let total: u32 = fs.iter().map(|(q, e)| modp::deg(q) as u32 * e).sum();
            assert_eq!(total, 6, "p = {p}");
        }
    }

    #[test]
    fn mod_p_eighth_cyclotomic_splits_into_quadratics() {
        let f = zpoly::cyclotomic(8);
        for p in [3u64, 5, 7, 11, 13] {
            let fs = factor_mod_p(&f.reduce_mod(p), p);
            if p % 8 == 1 {
                assert_eq!(fs.len(), 4);
            } else {
                assert_eq!(fs.len(), 2);
                assert!(fs.iter().all(|(q, e)| modp::deg(q) == 2 && *e == 1));
            }
        }
    }
}
