//! Splitting field of a monic irreducible integer polynomial, with exact
//! roots, the full automorphism group, and a tracked complex embedding.
//!
//! The field is grown by repeated root adjunction. Factoring over the
//! current field reduces to factoring over Q through shifted norms
//! (resultants against the current minimal polynomial), and each
//! adjunction rewrites the previous generator exactly inside the new
//! field through a gcd that picks out the shared root.

use crate::error::{Error, Result};
use crate::exact::factor::{factor_squarefree_over_z, is_irreducible};
use crate::exact::modp::{self, PolyP};
use crate::exact::primes::crt_prime_iter;
use crate::exact::qpoly::QPoly;
use crate::exact::zpoly::{CrtAccum, ZPoly};
use crate::field_tower::numfield::canonical_roots;
use crate::mp::cplx::{abs_c, complex_poly_roots, eval_qpoly_c};
use crate::mp::real::Prec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::{Complex, Float};

/// Polynomial with coefficients in Q[x]/(m), little-endian, trimmed.
pub(crate) type LPoly = Vec<QPoly>;

pub(crate) fn lp_trim(mut v: LPoly) -> LPoly {
    while v.last().map_or(false, QPoly::is_zero) {
        v.pop();
    }
    v
}

fn lp_is_zero(v: &LPoly) -> bool {
    v.is_empty()
}

pub(crate) fn lp_deg(v: &LPoly) -> usize {
    v.len().saturating_sub(1)
}

fn lp_add(a: &LPoly, b: &LPoly) -> LPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(QPoly::zero);
        let y = b.get(i).cloned().unwrap_or_else(QPoly::zero);
        out.push(x.add(&y));
    }
    lp_trim(out)
}

pub(crate) fn lp_mul(a: &LPoly, b: &LPoly, m: &QPoly) -> LPoly {
    if lp_is_zero(a) || lp_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![QPoly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&ai.mul_mod(bj, m));
        }
    }
    lp_trim(out)
}

fn lp_scale(a: &LPoly, e: &QPoly, m: &QPoly) -> LPoly {
    lp_trim(a.iter().map(|c| c.mul_mod(e, m)).collect())
}

/// Division with remainder; the divisor's leading coefficient must be a
/// unit of the residue field (m irreducible guarantees it).
pub(crate) fn lp_divrem(a: &LPoly, b: &LPoly, m: &QPoly) -> Result<(LPoly, LPoly)> {
    if lp_is_zero(b) {
        return Err(Error::Internal("division by zero polynomial".into()));
    }
    let db = lp_deg(b);
    let lc_inv = b[db]
        .inverse_mod(m)
        .ok_or_else(|| Error::Internal("leading coefficient not invertible".into()))?;
    let mut rem: Vec<QPoly> = a.clone();
    let mut quo = vec![QPoly::zero(); a.len().saturating_sub(db)];
    while rem.len() > db && !rem.is_empty() {
        let dr = rem.len() - 1;
        let top = rem[dr].clone();
        if top.is_zero() {
            rem.pop();
            continue;
        }
        let q = top.mul_mod(&lc_inv, m);
        quo[dr - db] = q.clone();
        for i in 0..=db {
            let t = q.mul_mod(&b[i], m);
            rem[dr - db + i] = rem[dr - db + i].sub(&t);
        }
        rem.pop();
    }
    Ok((lp_trim(quo), lp_trim(rem)))
}

fn lp_monic(a: &LPoly, m: &QPoly) -> Result<LPoly> {
    if lp_is_zero(a) {
        return Ok(Vec::new());
    }
    let lc = &a[lp_deg(a)];
    if lc.c == [BigRational::one()] {
        return Ok(a.clone());
    }
    let inv = lc
        .inverse_mod(m)
        .ok_or_else(|| Error::Internal("leading coefficient not invertible".into()))?;
    Ok(lp_scale(a, &inv, m))
}

fn lp_gcd(a: &LPoly, b: &LPoly, m: &QPoly) -> Result<LPoly> {
    let mut x = lp_monic(a, m)?;
    let mut y = lp_monic(b, m)?;
    while !lp_is_zero(&y) {
        let (_, r) = lp_divrem(&x, &y, m)?;
        x = y;
        y = lp_monic(&r, m)?;
    }
    Ok(x)
}

/// Divide by (y - root); returns the quotient and checks the remainder
/// vanishes, which certifies that root is exact.
fn lp_synth_div(g: &LPoly, root: &QPoly, m: &QPoly) -> Result<LPoly> {
    let d = lp_deg(g);
    let mut quo = vec![QPoly::zero(); d];
    let mut carry = QPoly::zero();
    for i in (0..=d).rev() {
        let cur = g[i].add(&carry);
        if i == 0 {
            if !cur.is_zero() {
                return Err(Error::Internal("claimed root leaves a remainder".into()));
            }
            break;
        }
        quo[i - 1] = cur.clone();
        carry = cur.mul_mod(root, m);
    }
    Ok(lp_trim(quo))
}

/// Deterministic ordering on field-coefficient polynomials.
fn lp_cmp(a: &LPoly, b: &LPoly) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let o = x.c.cmp(&y.c);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// Norm-style resultant N(y) = Res_x(m(x), sum_j g_j(x) (y - s*x)^j) for
/// monic m and monic g (g_top = 1), computed by modular evaluation and
/// interpolation with a root-bound certified number of primes. The result
/// is monic and integral because its roots are sums of algebraic integers.
fn shifted_norm(m: &ZPoly, g: &[QPoly], s: i64) -> Result<ZPoly> {
    let dm = m.deg();
    let dg = g.len() - 1;
    assert!(dg >= 1, "norm of a constant");
    let dn = dm * dg;

    // common denominator of all coefficients
    let mut dd = BigInt::one();
    for c in g {
        for q in &c.c {
            dd = dd.lcm(q.denom());
        }
    }
    let cj: Vec<ZPoly> = g
        .iter()
        .map(|c| {
            let scaled = c.mul_scalar(&BigRational::from_integer(dd.clone()));
            scaled.to_zpoly().expect("denominator cleared")
        })
        .collect();

    // coefficient-size target from a Cauchy-style bound on the roots
    // beta + s*theta, all in log2
    let rm_l = m
        .c
        .iter()
        .map(|c| c.bits() as f64)
        .fold(0.0f64, f64::max)
        + 1.0;
    let mut cb_l = 0.0f64;
    for c in &cj {
        let mb = c.c.iter().map(|x| x.bits() as f64).fold(0.0f64, f64::max);
        let v = mb + (dm as f64) * rm_l + (dm as f64).log2().max(0.0);
        cb_l = cb_l.max(v);
    }
    cb_l -= (dd.bits().saturating_sub(1)) as f64;
    let rb_l = cb_l.max(0.0) + 1.0;
    let r_l = rb_l.max((s.unsigned_abs().max(1) as f64).log2() + rm_l) + 1.0;
    let bits_needed = ((dn as f64) * (1.0 + r_l)).ceil() + 34.0;

    let mut acc: Vec<CrtAccum> = (0..=dn).map(|_| CrtAccum::new()).collect();
    let mut done = false;
    for p in crt_prime_iter() {
        if (&dd % BigInt::from(p)).is_zero() {
            continue;
        }
        let mp = m.reduce_mod(p);
        let cjp: Vec<PolyP> = cj.iter().map(|c| c.reduce_mod(p)).collect();
        let sp = {
            let r = BigInt::from(s).mod_floor(&BigInt::from(p));
            r.to_u64().expect("residue fits")
        };
        let neg_sp = if sp == 0 { 0 } else { p - sp };
        let xs: Vec<u64> = (0..=dn as u64).collect();
        let mut ys = Vec::with_capacity(dn + 1);
        for &y0 in &xs {
            // A(x) = sum_j cj(x) * (y0 - s x)^j mod (m, p)
            let lin: PolyP = modp::trim(vec![y0 % p, neg_sp]);
            let mut w: PolyP = vec![1];
            let mut a: PolyP = Vec::new();
            for c in &cjp {
                if !c.is_empty() {
                    a = modp::add_p(&a, &modp::mul_p(c, &w, p), p);
                }
                w = modp::rem_p(&modp::mul_p(&w, &lin, p), &mp, p);
            }
            a = modp::rem_p(&a, &mp, p);
            ys.push(modp::resultant_p(&mp, &a, p));
        }
        let vals = modp::interpolate_p(&xs, &ys, p);
        for (k, ac) in acc.iter_mut().enumerate() {
            ac.push(vals.get(k).copied().unwrap_or(0), p);
        }
        if acc[0].modulus().bits() as f64 > bits_needed {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::Internal("prime supply exhausted in norm".into()));
    }

    // divide out the denominator power; integrality certifies the bound
    let scale = dd.pow(dm as u32);
    let mut coeffs = Vec::with_capacity(dn + 1);
    for ac in &acc {
        let v = ac.signed();
        let (q, r) = v.div_rem(&scale);
        if !r.is_zero() {
            return Err(Error::Internal("shifted norm not integral".into()));
        }
        coeffs.push(q);
    }
    let n = ZPoly::new(coeffs);
    if n.deg() != dn || !n.is_monic() {
        return Err(Error::Internal("shifted norm has wrong shape".into()));
    }
    Ok(n)
}

fn shift_candidates() -> impl Iterator<Item = i64> {
    (1..=40i64).flat_map(|k| [k, -k])
}

/// Roots of the monic squarefree integer polynomial g inside Q[x]/(m),
/// m monic irreducible. Roots are reduced mod m, deterministically ordered.
pub fn roots_in_field(g: &ZPoly, m: &ZPoly) -> Result<Vec<QPoly>> {
    if g.deg() == 1 {
        let c0 = BigRational::from_integer(g.coeff(0));
        let c1 = BigRational::from_integer(g.coeff(1));
        return Ok(vec![QPoly::constant(-c0 / c1)]);
    }
    let lifted: LPoly = lp_trim(
        (0..=g.deg())
            .map(|i| QPoly::constant(BigRational::from_integer(g.coeff(i))))
            .collect(),
    );
    let factors = factor_over_field(&lifted, m)?;
    Ok(factors
        .iter()
        .filter(|f| lp_deg(f) == 1)
        .map(|f| f[0].neg())
        .collect())
}

/// Irreducible factorization of a monic squarefree g over Q[x]/(m),
/// m irreducible. Factors are monic, sorted deterministically.
pub(crate) fn factor_over_field(g: &LPoly, m: &ZPoly) -> Result<Vec<LPoly>> {
    let mq = QPoly::from_zpoly(m);
    let dg = lp_deg(g);
    if dg <= 1 {
        return Ok(vec![g.clone()]);
    }

    // shift until the norm is squarefree
    let mut found: Option<(i64, ZPoly)> = None;
    for s in shift_candidates() {
        let n = shifted_norm(m, g, s)?;
        let der = n.derivative();
        if crate::exact::zpoly::gcd(&n, &der).deg() == 0 {
            found = Some((s, n));
            break;
        }
    }
    let (s, norm) = found
        .ok_or_else(|| Error::Internal("no squarefree shift found".into()))?;

    let nfactors = factor_squarefree_over_z(&norm);
    if nfactors.len() == 1 {
        return Ok(vec![g.clone()]);
    }

    // each rational factor pulls back to gcd(g(y), N_k(y + s*theta))
    let s_theta = QPoly::x().mul_scalar(&BigRational::from_integer(BigInt::from(s)));
    let mut out: Vec<LPoly> = Vec::new();
    let mut product: LPoly = vec![QPoly::one()];
    for nk in &nfactors {
        // substitute y + s*theta by Horner in L[y]
        let shift_poly: LPoly = vec![s_theta.clone(), QPoly::one()];
        let mut sub: LPoly = Vec::new();
        for i in (0..=nk.deg()).rev() {
            sub = lp_mul(&sub, &shift_poly, &mq);
            let c = QPoly::constant(BigRational::from_integer(nk.coeff(i)));
            sub = lp_add(&sub, &vec![c]);
        }
        let f = lp_gcd(g, &sub, &mq)?;
        if lp_deg(&f) >= 1 {
            product = lp_mul(&product, &f, &mq);
            out.push(f);
        }
    }
    if &product != g {
        return Err(Error::Internal("field factorization does not multiply back".into()));
    }
    out.sort_by(lp_cmp);
    Ok(out)
}

/// Adjoin a root of the irreducible g (deg >= 2) to Q[x]/(m): returns the
/// new minimal polynomial H, the image P of the old generator inside the
/// new field, and the shift t with new_generator = root + t * old_generator.
fn adjoin_root(m: &ZPoly, g: &LPoly) -> Result<(ZPoly, QPoly, i64)> {
    for t in shift_candidates() {
        let h = shifted_norm(m, g, t)?;
        if !is_irreducible(&h) {
            continue;
        }
        let hq = QPoly::from_zpoly(&h);
        // in the new field, gcd of m(x) and g(x, w - t x) isolates x = old
        // generator; both arguments are polynomials in x over the new field
        let m_lp: LPoly = m
            .c
            .iter()
            .map(|c| QPoly::constant(BigRational::from_integer(c.clone())))
            .collect();
        let lin: LPoly = vec![
            QPoly::x(),
            QPoly::constant(BigRational::from_integer(BigInt::from(-t))),
        ];
        let mut ghat: LPoly = Vec::new();
        let mut w: LPoly = vec![QPoly::one()];
        for c in g {
            if !c.is_zero() {
                // coefficient of the old field, reread as a rational poly in x
                let cx: LPoly = c
                    .c
                    .iter()
                    .map(|q| QPoly::constant(q.clone()))
                    .collect();
                ghat = lp_add(&ghat, &lp_mul(&cx, &w, &hq));
            }
            w = lp_mul(&w, &lin, &hq);
        }
        let d = lp_gcd(&m_lp, &ghat, &hq)?;
        if lp_deg(&d) != 1 {
            continue;
        }
        let p = d[0].neg();
        // certify the embedding exactly
        let mq_check = QPoly::from_zpoly(m).compose_mod(&p, &hq);
        if !mq_check.is_zero() {
            return Err(Error::Internal("generator image fails its minimal polynomial".into()));
        }
        return Ok((h, p, t));
    }
    Err(Error::Internal("no shift yields an irreducible adjunction".into()))
}

#[derive(Debug, Clone)]
pub struct Automorphism {
    /// Image of the field generator.
    pub image: QPoly,
    /// Induced permutation of the canonical roots: sigma(roots[i]) =
    /// roots[perm[i]].
    pub perm: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SplittingData {
    /// The polynomial being split.
    pub base: ZPoly,
    /// Minimal polynomial of the splitting field generator over Q.
    pub min_poly: ZPoly,
    pub degree: usize,
    /// Roots of base inside the splitting field, indexed like the
    /// canonical complex roots of base.
    pub roots: Vec<QPoly>,
    /// The generator as an integer combination sum t_s * roots[j_s]; also
    /// fixes the tracked complex embedding.
    pub comb: Vec<(usize, i64)>,
    pub autos: Vec<Automorphism>,
    /// compose[a][b] = index of autos[a] after autos[b].
    pub compose: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl SplittingData {
    pub fn min_poly_q(&self) -> QPoly {
        QPoly::from_zpoly(&self.min_poly)
    }

    /// sigma(e) for an element e of the splitting field.
    pub fn apply(&self, auto: usize, e: &QPoly) -> QPoly {
        e.compose_mod(&self.autos[auto].image, &self.min_poly_q())
    }

    /// Complex value of the generator under the tracked embedding.
    pub fn generator_value(&self, prec: Prec) -> Result<Complex> {
        let roots = canonical_roots(&self.base, prec)?;
        let bits = roots[0].prec().0;
        let mut acc = Complex::with_val(bits, (0, 0));
        for &(j, t) in &self.comb {
            acc += roots[j].clone() * t;
        }
        Ok(acc)
    }

    /// Complex value of any element under the tracked embedding.
    pub fn element_value(&self, e: &QPoly, prec: Prec) -> Result<Complex> {
        let z = self.generator_value(prec)?;
        Ok(eval_qpoly_c(&e.rem(&self.min_poly_q()), &z))
    }
}

pub(crate) fn min_separation(roots: &[Complex]) -> Float {
    let bits = roots[0].prec().0;
    let mut sep = Float::with_val(bits, 1e300);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = abs_c(&(roots[i].clone() - &roots[j]));
            if d < sep {
                sep = d;
            }
        }
    }
    sep
}

pub(crate) fn nearest_root(z: &Complex, roots: &[Complex], sep: &Float) -> Option<usize> {
    let mut best = 0usize;
    let mut best_d: Option<Float> = None;
    for (i, r) in roots.iter().enumerate() {
        let d = abs_c(&(z.clone() - r));
        if best_d.as_ref().map_or(true, |b| d < *b) {
            best = i;
            best_d = Some(d);
        }
    }
    let d = best_d?;
    let quarter = sep.clone() / 4u32;
    if d < quarter {
        Some(best)
    } else {
        None
    }
}

/// Build the splitting field of a monic irreducible polynomial, with all
/// roots located against the canonical complex root order and the full
/// automorphism group realized as root permutations.
pub fn splitting_field(f: &ZPoly) -> Result<SplittingData> {
    assert!(f.is_monic(), "splitting field needs a monic polynomial");
    let mut digits = 64u32;
    let mut last_err = None;
    for _ in 0..3 {
        match splitting_field_at(f, digits) {
            Ok(d) => return Ok(d),
            Err(Error::NotConverged(msg)) => {
                last_err = Some(Error::NotConverged(msg));
                digits *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Internal("splitting field failed".into())))
}

fn splitting_field_at(f: &ZPoly, digits: u32) -> Result<SplittingData> {
    let df = f.deg();
    let prec = Prec::from_digits(digits);
    let croots = canonical_roots(f, prec)?;
    let sep = min_separation(&croots);

    // the tracked embedding starts by declaring the generator to be the
    // first canonical root
    let mut m = f.clone();
    let mut mq = QPoly::from_zpoly(&m);
    let mut roots: Vec<QPoly> = vec![QPoly::x().rem(&mq)];
    let mut comb: Vec<(usize, i64)> = vec![(0, 1)];
    let mut gamma = croots[0].clone();

    let mut pending: Vec<LPoly> = Vec::new();
    if df > 1 {
        let fq: LPoly = f
            .c
            .iter()
            .map(|c| QPoly::constant(BigRational::from_integer(c.clone())))
            .collect();
        pending.push(lp_synth_div(&fq, &roots[0], &mq)?);
    }

    while let Some(g) = pending.pop() {
        if lp_deg(&g) == 0 {
            continue;
        }
        let factors = factor_over_field(&g, &m)?;
        let mut nonlinear: Vec<LPoly> = Vec::new();
        for h in factors {
            if lp_deg(&h) == 1 {
                roots.push(h[0].neg().rem(&mq));
            } else {
                nonlinear.push(h);
            }
        }
        if nonlinear.is_empty() {
            continue;
        }
        nonlinear.sort_by(lp_cmp);
        let g_adj = nonlinear.remove(0);

        let (h, p, t) = adjoin_root(&m, &g_adj)?;
        let hq = QPoly::from_zpoly(&h);

        // numeric side: pick the root of g_adj under the tracked embedding
        // and identify it among the canonical roots
        let gnum: Vec<Complex> = g_adj.iter().map(|c| eval_qpoly_c(c, &gamma)).collect();
        let mut broots = complex_poly_roots(&gnum)?;
        broots.sort_by(|a, b| {
            a.real()
                .partial_cmp(b.real())
                .unwrap()
                .then(a.imag().partial_cmp(b.imag()).unwrap())
        });
        let beta_hat = broots[0].clone();
        let j_beta = nearest_root(&beta_hat, &croots, &sep).ok_or_else(|| {
            Error::NotConverged("adjoined root does not match a canonical root".into())
        })?;
        if comb.iter().any(|&(j, _)| j == j_beta) {
            return Err(Error::NotConverged(
                "adjoined root collides with the tracked combination".into(),
            ));
        }

        // move everything into the new field
        roots = roots
            .iter()
            .map(|r| r.compose_mod(&p, &hq))
            .collect();
        let beta = QPoly::x().sub(&p.mul_scalar(&BigRational::from_integer(BigInt::from(t))));
        let beta = beta.rem(&hq);

        let mut new_pending: Vec<LPoly> = Vec::new();
        for q in pending.iter().chain(nonlinear.iter()) {
            new_pending.push(q.iter().map(|c| c.compose_mod(&p, &hq)).collect());
        }
        let g_mapped: LPoly = g_adj.iter().map(|c| c.compose_mod(&p, &hq)).collect();
        let quotient = lp_synth_div(&g_mapped, &beta, &hq)?;
        if lp_deg(&quotient) >= 1 {
            new_pending.push(quotient);
        }

        roots.push(beta);
        for e in comb.iter_mut() {
            e.1 *= t;
        }
        comb.push((j_beta, 1));
        m = h;
        mq = hq;
        gamma = beta_hat + gamma * t;
        pending = new_pending;
    }

    if roots.len() != df {
        return Err(Error::Internal(format!(
            "found {} roots for degree {}",
            roots.len(),
            df
        )));
    }

    // match abstract roots to the canonical complex order
    let degree = m.deg();
    let mut gamma_exact = Complex::with_val(croots[0].prec().0, (0, 0));
    for &(j, t) in &comb {
        gamma_exact += croots[j].clone() * t;
    }
    let mut ordered: Vec<Option<QPoly>> = vec![None; df];
    for r in &roots {
        let val = eval_qpoly_c(r, &gamma_exact);
        let j = nearest_root(&val, &croots, &sep).ok_or_else(|| {
            Error::NotConverged("root does not match any canonical root".into())
        })?;
        if ordered[j].is_some() {
            return Err(Error::NotConverged("two roots match one canonical root".into()));
        }
        ordered[j] = Some(r.clone());
    }
    let roots: Vec<QPoly> = ordered.into_iter().map(Option::unwrap).collect();

    // the tracked combination must rebuild the generator exactly
    let mut rebuilt = QPoly::zero();
    for &(j, t) in &comb {
        rebuilt = rebuilt.add(&roots[j].mul_scalar(&BigRational::from_integer(BigInt::from(t))));
    }
    if rebuilt.rem(&mq) != QPoly::x().rem(&mq) {
        return Err(Error::NotConverged(
            "tracked combination does not rebuild the generator".into(),
        ));
    }

    // automorphisms: sigma(generator) = sum t_s roots[pi(j_s)] for an
    // injection pi, so testing every injection finds the whole group
    let idx: Vec<usize> = comb.iter().map(|&(j, _)| j).collect();
    let wts: Vec<i64> = comb.iter().map(|&(_, t)| t).collect();
    let mut images: Vec<QPoly> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(partial) = stack.pop() {
        if partial.len() == idx.len() {
            let mut w = QPoly::zero();
            for (s, &target) in partial.iter().enumerate() {
                w = w.add(
                    &roots[target].mul_scalar(&BigRational::from_integer(BigInt::from(wts[s]))),
                );
            }
            let w = w.rem(&mq);
            if QPoly::from_zpoly(&m).compose_mod(&w, &mq).is_zero()
                && !images.contains(&w)
            {
                images.push(w);
            }
            continue;
        }
        for cand in 0..df {
            if !partial.contains(&cand) {
                let mut next = partial.clone();
                next.push(cand);
                stack.push(next);
            }
        }
    }
    if images.len() != degree {
        return Err(Error::Internal(format!(
            "found {} automorphisms for degree {}",
            images.len(),
            degree
        )));
    }

    // induced root permutations, exact
    let mut autos: Vec<Automorphism> = Vec::new();
    for w in images {
        let mut perm = vec![0usize; df];
        for (i, r) in roots.iter().enumerate() {
            let img = r.compose_mod(&w, &mq);
            let j = roots
                .iter()
                .position(|cand| *cand == img)
                .ok_or_else(|| Error::Internal("automorphism does not permute roots".into()))?;
            perm[i] = j;
        }
        let mut seen = vec![false; df];
        for &j in &perm {
            if seen[j] {
                return Err(Error::Internal("root permutation not a bijection".into()));
            }
            seen[j] = true;
        }
        autos.push(Automorphism { image: w, perm });
    }
    let x_red = QPoly::x().rem(&mq);
    autos.sort_by(|a, b| {
        let ida = a.image == x_red;
        let idb = b.image == x_red;
        idb.cmp(&ida).then_with(|| a.perm.cmp(&b.perm))
    });
    let identity = 0usize;
    if autos[identity].image != x_red {
        return Err(Error::Internal("identity automorphism missing".into()));
    }

    // composition table from the faithful root action
    let n_auto = autos.len();
    let mut compose = vec![vec![usize::MAX; n_auto]; n_auto];
    for a in 0..n_auto {
        for b in 0..n_auto {
            let mut perm = vec![0usize; df];
            for i in 0..df {
                perm[i] = autos[a].perm[autos[b].perm[i]];
            }
            let c = autos
                .iter()
                .position(|cand| cand.perm == perm)
                .ok_or_else(|| Error::Internal("composition leaves the group".into()))?;
            compose[a][b] = c;
        }
    }
    let mut inverse = vec![usize::MAX; n_auto];
    for a in 0..n_auto {
        for b in 0..n_auto {
            if compose[a][b] == identity {
                inverse[a] = b;
            }
        }
        if inverse[a] == usize::MAX {
            return Err(Error::Internal("automorphism without inverse".into()));
        }
    }

    Ok(SplittingData {
        base: f.clone(),
        min_poly: m,
        degree,
        roots,
        comb,
        autos,
        compose,
        identity,
        inverse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    fn order_of(sd: &SplittingData, a: usize) -> usize {
        let mut k = 1;
        let mut cur = a;
        while cur != sd.identity {
            cur = sd.compose[a][cur];
            k += 1;
        }
        k
    }

    #[test]
    fn quadratic_splits_in_itself() {
        let sd = splitting_field(&zp(&[1, 0, 1])).unwrap();
        assert_eq!(sd.degree, 2);
        assert_eq!(sd.roots.len(), 2);
        assert_eq!(sd.autos.len(), 2);
        // canonical roots are -i then +i; roots[0] is the generator
        assert_eq!(sd.roots[0], QPoly::x());
        assert_eq!(sd.roots[1], QPoly::x().neg());
        assert_eq!(sd.autos[1].perm, vec![1, 0]);
        assert_eq!(sd.compose[1][1], sd.identity);
    }

    #[test]
    fn eighth_roots_of_unity() {
        let sd = splitting_field(&zp(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(sd.degree, 4);
        assert_eq!(sd.autos.len(), 4);
        // Klein four group: every element squares to the identity
        for a in 0..4 {
            assert_eq!(sd.compose[a][a], sd.identity);
        }
        // the action on roots is free away from the identity
        for (k, auto) in sd.autos.iter().enumerate() {
            if k != sd.identity {
                assert!(auto.perm.iter().enumerate().all(|(i, &j)| i != j));
            }
        }
    }

    #[test]
    fn cube_root_of_two_gives_s3() {
        let sd = splitting_field(&zp(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(sd.degree, 6);
        assert_eq!(sd.autos.len(), 6);
        let orders: Vec<usize> = (0..6).map(|a| order_of(&sd, a)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
        assert_eq!(orders.iter().filter(|&&o| o == 1).count(), 1);
    }

    #[test]
    fn composition_table_matches_generator_images() {
        let sd = splitting_field(&zp(&[1, 0, 0, 0, 1])).unwrap();
        let mq = sd.min_poly_q();
        for a in 0..sd.autos.len() {
            for b in 0..sd.autos.len() {
                let composed = sd.autos[b]
                    .image
                    .compose_mod(&sd.autos[a].image, &mq);
                let c = sd.compose[a][b];
                assert_eq!(sd.autos[c].image, composed);
            }
        }
    }

    #[test]
    fn roots_satisfy_base_polynomial() {
        let sd = splitting_field(&zp(&[-2, 0, 0, 1])).unwrap();
        let mq = sd.min_poly_q();
        let fq = QPoly::from_zpoly(&sd.base);
        for r in &sd.roots {
            assert!(fq.compose_mod(r, &mq).is_zero());
        }
        // sum of the three roots vanishes (no quadratic term)
        let sum = sd.roots.iter().fold(QPoly::zero(), |a, r| a.add(r));
        assert!(sum.rem(&mq).is_zero());
    }

    #[test]
    fn desk_tower_closure_has_order_twelve() {
        let f = zp(&[5, 12, 3, -4, 3, 0, 1]);
        let sd = splitting_field(&f).unwrap();
        assert_eq!(sd.degree, 12);
        assert_eq!(sd.autos.len(), 12);
        let orders: Vec<usize> = (0..12).map(|a| order_of(&sd, a)).collect();
        // direct product of an order-two group with the symmetric group on
        // three letters: seven involutions, center of size two
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 7);
        let center = (0..12)
            .filter(|&a| (0..12).all(|b| sd.compose[a][b] == sd.compose[b][a]))
            .count();
        assert_eq!(center, 2);
        // every root is reachable from any other: the action is transitive
        let mut reach = vec![false; 6];
        for auto in &sd.autos {
            reach[auto.perm[0]] = true;
        }
        assert!(reach.iter().all(|&r| r));
    }

    #[test]
    fn tracked_embedding_is_consistent() {
        let f = zp(&[5, 12, 3, -4, 3, 0, 1]);
        let sd = splitting_field(&f).unwrap();
        let prec = Prec::from_digits(100);
        let z = sd.generator_value(prec).unwrap();
        let bits = z.prec().0;
        // the generator value satisfies the minimal polynomial numerically,
        // relative to the evaluation scale of the polynomial
        let mqv = eval_qpoly_c(&sd.min_poly_q(), &z);
        let mut scale = Float::with_val(bits, 0);
        let za = abs_c(&z);
        for c in sd.min_poly.c.iter().rev() {
            scale = scale * &za + crate::mp::real::real_from_bigint(&c.abs(), Prec(bits));
        }
        assert!(abs_c(&mqv) < scale * Float::with_val(bits, 1e-50));
        // each abstract root evaluates to its canonical counterpart
        let croots = canonical_roots(&f, prec).unwrap();
        let sep = min_separation(&croots);
        for (j, r) in sd.roots.iter().enumerate() {
            let val = sd.element_value(r, prec).unwrap();
            let d = abs_c(&(val - &croots[j]));
            assert!(d < sep.clone() / 4u32, "root {j} off by {d}");
        }
    }
}
