//! Prime splitting through the residue algebra O/pO. Used when p divides
//! the index of the equation order, where the defining polynomial mod p
//! does not reflect the true factorization. The algebra is split into
//! local pieces by lifting the idempotents of its semisimple quotient.

use crate::error::{Error, Result};
use crate::exact::factor::{bezout_mod_p, factor_mod_p};
use crate::exact::matrix::kernel_mod_p;
use crate::exact::modp::{self, PolyP};
use crate::ideals::geometry::OrderCtx;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// One maximal ideal above p: residue degree, ramification index, and the
/// second generator as coordinates over the integral basis (mod p lift).
pub struct LocalPiece {
    pub f: u32,
    pub e: u32,
    pub gen_coords: Vec<BigInt>,
}

/// F_p-algebra structure on O/pO in integral-basis coordinates.
struct ResidueAlgebra {
    n: usize,
    p: u64,
    tensor: Vec<Vec<Vec<u64>>>,
}

impl ResidueAlgebra {
    fn new(ctx: &OrderCtx, p: u64) -> ResidueAlgebra {
        let n = ctx.degree();
        let pb = BigInt::from(p);
        let tensor = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        ctx.tensor[i][j]
                            .iter()
                            .map(|c| {
                                num_integer::Integer::mod_floor(c, &pb)
                                    .to_u64()
                                    .expect("reduced coordinate fits u64")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ResidueAlgebra { n, p, tensor }
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = 1;
        v
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| modp::addm(*x, *y, self.p))
            .collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| modp::subm(*x, *y, self.p))
            .collect()
    }

    fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|x| modp::mulm(*x, c, self.p)).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = modp::mulm(ai, bj, self.p);
                for (o, t) in out.iter_mut().zip(&self.tensor[i][j]) {
                    *o = modp::addm(*o, modp::mulm(c, *t, self.p), self.p);
                }
            }
        }
        out
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
}

/// Row space in reduced echelon form with pivot bookkeeping; supports
/// incremental spanning and membership tests over F_p.
struct Subspace {
    p: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(p: u64, width: usize) -> Subspace {
        Subspace {
            p,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if w[piv] != 0 {
                let c = w[piv];
                for j in 0..self.width {
                    w[j] = modp::subm(w[j], modp::mulm(c, row[j], self.p), self.p);
                }
            }
        }
        w
    }

    /// Add the vector to the span; returns false if it was already inside.
    fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = modp::invm(w[piv], self.p);
        for x in w.iter_mut() {
            *x = modp::mulm(*x, inv, self.p);
        }
        // Back-substitute into earlier rows to keep the form reduced.
        for row in self.rows.iter_mut() {
            if row[piv] != 0 {
                let c = row[piv];
                for j in 0..self.width {
                    row[j] = modp::subm(row[j], modp::mulm(c, w[j], self.p), self.p);
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(piv);
        true
    }

    fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// A subalgebra piece of the semisimple quotient: vectors live in O/pO,
/// equality is taken modulo the radical.
struct Component {
    basis: Vec<Vec<u64>>,
    ident: Vec<u64>,
}

/// Minimal polynomial of u inside the component (identity = comp.ident,
/// equality mod rad). Returns monic coefficients.
fn component_minpoly(
    alg: &ResidueAlgebra,
    rad: &Subspace,
    comp: &Component,
    u: &[u64],
) -> PolyP {
    // Augmented echelon: track the combination of powers for each row.
    let mut vec_rows: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut cur = comp.ident.clone();
    for k in 0..=comp.basis.len() {
        let mut w = rad.reduce(&cur);
        let mut combo = vec![0u64; comp.basis.len() + 1];
        combo[k] = 1;
        for (row, rc) in &vec_rows {
            let piv = row.iter().position(|&x| x != 0).expect("nonzero row");
            if w[piv] != 0 {
                let c = w[piv];
                for j in 0..alg.n {
                    w[j] = modp::subm(w[j], modp::mulm(c, row[j], alg.p), alg.p);
                }
                for j in 0..combo.len() {
                    combo[j] = modp::subm(combo[j], modp::mulm(c, rc[j], alg.p), alg.p);
                }
            }
        }
        if let Some(piv) = w.iter().position(|&x| x != 0) {
            let inv = modp::invm(w[piv], alg.p);
            for x in w.iter_mut() {
                *x = modp::mulm(*x, inv, alg.p);
            }
            for x in combo.iter_mut() {
                *x = modp::mulm(*x, inv, alg.p);
            }
            vec_rows.push((w, combo));
            cur = alg.mul(&cur, u);
        } else {
            // combo gives the monic relation sum combo[j] u^j = 0 after
            // rescaling so the top coefficient is 1.
            let top = combo.iter().rposition(|&x| x != 0).expect("monic relation");
            debug_assert_eq!(top, k);
            let inv = modp::invm(combo[top], alg.p);
            return modp::trim(combo[..=top].iter().map(|&c| modp::mulm(c, inv, alg.p)).collect());
        }
    }
    unreachable!("element of a finite algebra has a minimal polynomial")
}

/// Evaluate a polynomial at u inside the component (constant term scales
/// the component identity).
fn component_eval(alg: &ResidueAlgebra, comp: &Component, poly: &PolyP, u: &[u64]) -> Vec<u64> {
    let mut acc = vec![0u64; alg.n];
    for &c in poly.iter().rev() {
        acc = alg.mul(&acc, u);
        if c != 0 {
            acc = alg.add(&acc, &alg.scale(&comp.ident, c));
        }
    }
    acc
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

/// Split O/pO into its local factors and return (f, e, second generator)
/// for each maximal ideal above p. Valid for every prime p, in particular
/// index divisors.
pub fn index_divisor_primes(ctx: &OrderCtx, p: u64) -> Result<Vec<LocalPiece>> {
    let alg = ResidueAlgebra::new(ctx, p);
    let n = alg.n;

    // Radical = kernel of enough iterates of the p-power map (linear over
    // the prime field).
    let mut frob = vec![vec![0u64; n]; n];
    for c in 0..n {
        let mut unit = vec![0u64; n];
        unit[c] = 1;
        let img = alg.pow(&unit, p);
        for (r, row) in frob.iter_mut().enumerate() {
            row[c] = img[r];
        }
    }
    let mut iterate = frob.clone();
    let mut pk = p as u128;
    while pk < n as u128 {
        let mut next = vec![vec![0u64; n]; n];
        for r in 0..n {
            for k in 0..n {
                if iterate[r][k] == 0 {
                    continue;
                }
                for c in 0..n {
                    next[r][c] =
                        modp::addm(next[r][c], modp::mulm(iterate[r][k], frob[k][c], p), p);
                }
            }
        }
        iterate = next;
        pk *= p as u128;
    }
    let mut rad = Subspace::new(p, n);
    for v in kernel_mod_p(&iterate, p) {
        rad.insert(&v);
    }
    let rad_basis: Vec<Vec<u64>> = rad.rows.clone();

    // Initial component: the full semisimple quotient.
    let mut start_basis = Vec::new();
    let mut seen = Subspace::new(p, n);
    for v in &rad_basis {
        seen.insert(v);
    }
    for j in 0..n {
        let mut unit = vec![0u64; n];
        unit[j] = 1;
        if seen.insert(&unit) {
            start_basis.push(unit);
        }
    }
    let mut stack = vec![Component {
        basis: start_basis,
        ident: alg.one(),
    }];
    let mut fields: Vec<Component> = Vec::new();

    while let Some(comp) = stack.pop() {
        if comp.basis.len() == 1 {
            fields.push(comp);
            continue;
        }
        let mut state: u64 = 0x6c62_272e_07bb_0142
            ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            ^ (comp.basis.len() as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
        let mut split_done = false;
        for trial in 0..512 {
            let u = if trial < comp.basis.len() {
                comp.basis[trial].clone()
            } else {
                let mut v = vec![0u64; n];
                for b in &comp.basis {
                    let c = xorshift(&mut state) % p;
                    if c != 0 {
                        v = alg.add(&v, &alg.scale(b, c));
                    }
                }
                v
            };
            let mp = component_minpoly(&alg, &rad, &comp, &u);
            let deg = modp::deg(&mp) as usize;
            if deg < 1 {
                continue;
            }
            let factors = factor_mod_p(&mp, p);
            debug_assert!(factors.iter().all(|(_, m)| *m == 1), "etale quotient");
            if factors.len() == 1 {
                if deg == comp.basis.len() {
                    fields.push(comp);
                    split_done = true;
                    break;
                }
                continue;
            }
            for (q, _) in &factors {
                let (h, r) = modp::divrem_p(&mp, q, p);
                debug_assert!(r.is_empty());
                let (s, _) = bezout_mod_p(&h, q, p);
                let eps_poly = modp::rem_p(&modp::mul_p(&s, &h, p), &mp, p);
                let eps = component_eval(&alg, &comp, &eps_poly, &u);
                let mut sub_basis = Vec::new();
                let mut span = Subspace::new(p, n);
                for v in &rad_basis {
                    span.insert(v);
                }
                for b in &comp.basis {
                    let prod = alg.mul(&eps, b);
                    if span.insert(&prod) {
                        sub_basis.push(prod);
                    }
                }
                stack.push(Component {
                    basis: sub_basis,
                    ident: eps,
                });
            }
            split_done = true;
            break;
        }
        if !split_done {
            return Err(Error::Internal(format!(
                "residue algebra at p = {p} resisted idempotent splitting"
            )));
        }
    }

    // Lift each field identity to an idempotent of O/pO itself, then read
    // off e, f and a second generator.
    let one = alg.one();
    let mut pieces = Vec::with_capacity(fields.len());
    let mut dim_check = 0usize;
    for comp in &fields {
        let f = comp.basis.len();
        let mut eps = comp.ident.clone();
        let mut lifted = false;
        for _ in 0..10 {
            let sq = alg.mul(&eps, &eps);
            if sq == eps {
                lifted = true;
                break;
            }
            // eps <- 3 eps^2 - 2 eps^3 squares the idempotency defect.
            let cube = alg.mul(&sq, &eps);
            eps = alg.sub(&alg.scale(&sq, 3 % p), &alg.scale(&cube, 2 % p));
        }
        if !lifted {
            return Err(Error::Internal(format!(
                "idempotent lift did not converge at p = {p}"
            )));
        }
        // dim of eps*(O/pO) = e*f for this maximal ideal.
        let mut image = Subspace::new(p, n);
        for j in 0..n {
            let mut unit = vec![0u64; n];
            unit[j] = 1;
            image.insert(&alg.mul(&eps, &unit));
        }
        let dim = image.dim();
        if dim % f != 0 {
            return Err(Error::Internal(format!(
                "local dimension {dim} not divisible by residue degree {f} at p = {p}"
            )));
        }
        let e = dim / f;
        dim_check += dim;
        let x = if e == 1 {
            alg.sub(&one, &eps)
        } else {
            // Need an element of valuation exactly 1: a member of the
            // local maximal ideal outside its square, shifted to stay a
            // unit in the other components.
            let mut mi = Subspace::new(p, n);
            let mut mi_basis = Vec::new();
            for r in &rad_basis {
                let v = alg.mul(&eps, r);
                if mi.insert(&v) {
                    mi_basis.push(v);
                }
            }
            let mut mi2 = Subspace::new(p, n);
            for a in &mi_basis {
                for b in &mi_basis {
                    mi2.insert(&alg.mul(a, b));
                }
            }
            let y = mi_basis
                .iter()
                .find(|v| !mi2.contains(v))
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "ramified local piece at p = {p} has no depth-one element"
                    ))
                })?;
            alg.add(y, &alg.sub(&one, &eps))
        };
        let half = p / 2;
        let gen_coords: Vec<BigInt> = x
            .iter()
            .map(|&c| {
                if c > half {
                    BigInt::from(c) - BigInt::from(p)
                } else {
                    BigInt::from(c)
                }
            })
            .collect();
        pieces.push(LocalPiece {
            f: f as u32,
            e: e as u32,
            gen_coords,
        });
    }
    if dim_check != n {
        return Err(Error::Internal(format!(
            "local dimensions above p = {p} sum to {dim_check}, expected {n}"
        )));
    }
    Ok(pieces)
}
