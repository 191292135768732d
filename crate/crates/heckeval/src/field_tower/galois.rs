//! Galois-theoretic analysis of a number field through its splitting
//! field: the subgroup lattice over the field's stabilizer, the complex
//! conjugation element of the tracked embedding, detection of the maximal
//! CM subfield, and exact primitive elements for fixed fields.

use crate::error::{Error, Result};
use crate::exact::qpoly::QPoly;
use crate::exact::zpoly::ZPoly;
use crate::field_tower::closure::SplittingData;
use crate::field_tower::numfield::{canonical_roots, express_in_powers, minpoly_in};
use crate::mp::real::Prec;

/// Sorted, deduplicated closure of a generating set under the group table.
fn subgroup_closure(sd: &SplittingData, gens: &[usize]) -> Vec<usize> {
    let mut set: Vec<usize> = vec![sd.identity];
    let mut frontier: Vec<usize> = gens.to_vec();
    while let Some(g) = frontier.pop() {
        if set.contains(&g) {
            continue;
        }
        set.push(g);
        let snapshot = set.clone();
        for &a in &snapshot {
            for &(x, y) in &[(a, g), (g, a)] {
                let c = sd.compose[x][y];
                if !set.contains(&c) {
                    frontier.push(c);
                }
            }
        }
    }
    set.sort_unstable();
    set
}

/// All subgroups of the automorphism group containing the given subgroup,
/// found by closing under one extra generator at a time.
fn subgroups_containing(sd: &SplittingData, base: &[usize]) -> Vec<Vec<usize>> {
    let seed = subgroup_closure(sd, base);
    let mut out: Vec<Vec<usize>> = vec![seed.clone()];
    let mut queue: Vec<Vec<usize>> = vec![seed];
    while let Some(s) = queue.pop() {
        for g in 0..sd.autos.len() {
            if s.contains(&g) {
                continue;
            }
            let mut gens = s.clone();
            gens.push(g);
            let t = subgroup_closure(sd, &gens);
            if !out.contains(&t) {
                out.push(t.clone());
                queue.push(t);
            }
        }
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Automorphism realizing complex conjugation under the tracked embedding:
/// its root permutation equals the conjugation pairing of the canonical
/// roots.
pub fn conjugation_auto(sd: &SplittingData) -> Result<usize> {
    let prec = Prec::from_digits(40);
    let roots = canonical_roots(&sd.base, prec)?;
    let mut pairing = vec![usize::MAX; roots.len()];
    for (i, r) in roots.iter().enumerate() {
        let conj = r.clone().conj();
        let j = roots
            .iter()
            .position(|s| *s == conj)
            .ok_or_else(|| Error::Internal("canonical roots not conjugation closed".into()))?;
        pairing[i] = j;
    }
    sd.autos
        .iter()
        .position(|a| a.perm == pairing)
        .ok_or_else(|| Error::Internal("no automorphism matches conjugation".into()))
}

/// Test whether the fixed field of h is a CM field: conjugation must act
/// through every embedding as one and the same nontrivial automorphism,
/// which reduces to c not in h and every conjugate of c lying in c*h.
fn fixes_cm_field(sd: &SplittingData, h: &[usize], c: usize) -> bool {
    if h.contains(&c) {
        return false;
    }
    let coset: Vec<usize> = h.iter().map(|&x| sd.compose[c][x]).collect();
    for g in 0..sd.autos.len() {
        let cg = sd.compose[c][g];
        let x = sd.compose[sd.inverse[g]][cg];
        if !coset.contains(&x) {
            return false;
        }
    }
    true
}

/// sigma-orbit trace of an element over a subgroup.
fn orbit_trace(sd: &SplittingData, h: &[usize], w: &QPoly) -> QPoly {
    let mut acc = QPoly::zero();
    for &s in h {
        acc = acc.add(&sd.apply(s, w));
    }
    acc
}

/// Primitive element of the fixed field of h, as an algebraic integer with
/// its monic integer minimal polynomial over Q.
fn fixed_field_generator(sd: &SplittingData, h: &[usize]) -> Result<(QPoly, ZPoly)> {
    let target = sd.degree / h.len();
    let mq = sd.min_poly_q();
    let z = QPoly::x().rem(&mq);
    if target == 1 {
        return Ok((QPoly::one(), ZPoly::from_i64(&[-1, 1])));
    }
    // traces of the generator powers span the fixed field over Q, so for
    // small targets some power already generates; shifts cover the rest
    let mut candidates: Vec<QPoly> = Vec::new();
    for e in 1..sd.degree as u64 {
        candidates.push(z.pow_mod(e, &mq));
    }
    for a in 1..=4i64 {
        let shifted = z.add(&QPoly::from_int(a));
        for e in 2..=3u64 {
            candidates.push(shifted.pow_mod(e, &mq));
        }
    }
    for w in &candidates {
        let v = orbit_trace(sd, h, w);
        let mp = minpoly_in(&mq, &v, sd.degree);
        if mp.deg() != target {
            continue;
        }
        let zp = mp.to_zpoly().ok_or_else(|| {
            Error::Internal("integral orbit trace has a non-integral minimal polynomial".into())
        })?;
        return Ok((v, zp));
    }
    Err(Error::Internal(
        "no primitive element found for the fixed field".into(),
    ))
}

/// CM structure of a number field K given through the splitting field of
/// its defining polynomial. Group elements are automorphism indices; the
/// distinguished embedding of K sends its generator to roots[0].
#[derive(Debug, Clone)]
pub struct CmStructure {
    pub closure: SplittingData,
    /// Complex conjugation under the tracked embedding.
    pub conj: usize,
    /// Stabilizer of K, i.e. the automorphisms fixing roots[0].
    pub stab_k_field: Vec<usize>,
    /// Fixing group of the maximal CM subfield k.
    pub stab_cm: Vec<usize>,
    /// Fixing group of the maximal totally real subfield of k.
    pub stab_real: Vec<usize>,
    /// Primitive element of k inside the splitting field.
    pub cm_gen: QPoly,
    /// Monic integer minimal polynomial of cm_gen over Q.
    pub cm_poly: ZPoly,
    pub real_gen: QPoly,
    pub real_poly: ZPoly,
}

impl CmStructure {
    /// Degree of the maximal CM subfield.
    #[must_use]
    pub fn cm_degree(&self) -> usize {
        self.closure.degree / self.stab_cm.len()
    }

    #[must_use]
    pub fn real_degree(&self) -> usize {
        self.closure.degree / self.stab_real.len()
    }

    /// The CM generator expressed in powers of the field generator
    /// (roots[0]); exists because k is a subfield of K.
    pub fn cm_gen_in_field(&self) -> Result<QPoly> {
        let mq = self.closure.min_poly_q();
        express_in_powers(
            &mq,
            &self.closure.roots[0],
            self.closure.base.deg(),
            &self.cm_gen,
            self.closure.degree,
        )
        .ok_or_else(|| Error::Internal("CM subfield does not embed in the field".into()))
    }

    /// The totally real generator expressed in powers of the CM generator.
    pub fn real_gen_in_cm(&self) -> Result<QPoly> {
        let mq = self.closure.min_poly_q();
        express_in_powers(
            &mq,
            &self.cm_gen,
            self.cm_degree(),
            &self.real_gen,
            self.closure.degree,
        )
        .ok_or_else(|| Error::Internal("real subfield does not embed in the CM subfield".into()))
    }
}

/// Find the maximal CM subfield of the field defined by f (monic,
/// irreducible). The distinguished embedding of the field into its
/// splitting field sends the generator to roots[0].
pub fn analyze_cm(f: &ZPoly) -> Result<CmStructure> {
    let closure = crate::field_tower::closure::splitting_field(f)?;
    let conj = conjugation_auto(&closure)?;
    let stab: Vec<usize> = (0..closure.autos.len())
        .filter(|&a| closure.autos[a].perm[0] == 0)
        .collect();
    let stab = subgroup_closure(&closure, &stab);

    let candidates = subgroups_containing(&closure, &stab);
    let valid: Vec<&Vec<usize>> = candidates
        .iter()
        .filter(|h| fixes_cm_field(&closure, h, conj))
        .collect();
    if valid.is_empty() {
        return Err(Error::NoCMSubfield(
            "no subfield is a totally imaginary quadratic extension of a totally real field"
                .into(),
        ));
    }
    // the compositum of CM subfields is CM, so the intersection of all
    // valid fixing groups is the fixing group of the maximal one
    let mut stab_cm: Vec<usize> = valid[0].clone();
    for h in &valid[1..] {
        stab_cm.retain(|a| h.contains(a));
    }
    if !fixes_cm_field(&closure, &stab_cm, conj) {
        return Err(Error::Internal(
            "intersection of CM fixing groups is not CM".into(),
        ));
    }

    let (cm_gen, cm_poly) = if stab_cm == stab {
        // k = K: keep the field's own generator and polynomial
        (closure.roots[0].clone(), f.clone())
    } else {
        fixed_field_generator(&closure, &stab_cm)?
    };

    let mut real_gens = stab_cm.clone();
    real_gens.push(conj);
    let stab_real = subgroup_closure(&closure, &real_gens);
    let (real_gen, real_poly) = fixed_field_generator(&closure, &stab_real)?;

    Ok(CmStructure {
        closure,
        conj,
        stab_k_field: stab,
        stab_cm,
        stab_real,
        cm_gen,
        cm_poly,
        real_gen,
        real_poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::numfield::NumberField;
    use num_bigint::BigInt;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    #[test]
    fn gaussian_field_is_its_own_cm_subfield() {
        let cm = analyze_cm(&zp(&[1, 0, 1])).unwrap();
        assert_eq!(cm.cm_degree(), 2);
        assert_eq!(cm.cm_poly, zp(&[1, 0, 1]));
        assert_eq!(cm.real_degree(), 1);
        // conjugation is the nontrivial automorphism
        assert_ne!(cm.conj, cm.closure.identity);
    }

    #[test]
    fn eighth_cyclotomic_is_cm_over_sqrt2() {
        let cm = analyze_cm(&zp(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(cm.cm_degree(), 4);
        assert_eq!(cm.cm_poly, zp(&[1, 0, 0, 0, 1]));
        assert_eq!(cm.real_degree(), 2);
        // the real subfield is Q(sqrt(2)): field discriminant 8
        let nf = NumberField::build(cm.real_poly.clone()).unwrap();
        assert_eq!(nf.disc, BigInt::from(8));
    }

    #[test]
    fn real_quadratic_has_no_cm_subfield() {
        let err = analyze_cm(&zp(&[-2, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::NoCMSubfield(_)));
    }

    #[test]
    fn pure_cubic_has_no_cm_subfield() {
        // one real and two complex embeddings, but no CM structure
        let err = analyze_cm(&zp(&[-2, 0, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::NoCMSubfield(_)));
    }

    #[test]
    fn desk_field_cm_subfield_is_gaussian() {
        let cm = analyze_cm(&zp(&[5, 12, 3, -4, 3, 0, 1])).unwrap();
        assert_eq!(cm.cm_degree(), 2);
        assert_eq!(cm.real_degree(), 1);
        let nf = NumberField::build(cm.cm_poly.clone()).unwrap();
        assert_eq!(nf.degree, 2);
        assert_eq!(nf.disc, BigInt::from(-4));
        // the CM generator really lies inside K
        let in_k = cm.cm_gen_in_field().unwrap();
        let mq = cm.closure.min_poly_q();
        let rebuilt = in_k.compose_mod(&cm.closure.roots[0], &mq);
        assert_eq!(rebuilt, cm.cm_gen.rem(&mq));
    }

    #[test]
    fn stabilizer_and_fixing_groups_nest() {
        let cm = analyze_cm(&zp(&[5, 12, 3, -4, 3, 0, 1])).unwrap();
        // Gal(M/K) has order closure_degree / deg K = 12 / 6 = 2
        assert_eq!(cm.stab_k_field.len(), 2);
        assert_eq!(cm.stab_cm.len(), 6);
        assert_eq!(cm.stab_real.len(), 12);
        for a in &cm.stab_k_field {
            assert!(cm.stab_cm.contains(a));
        }
        for a in &cm.stab_cm {
            assert!(cm.stab_real.contains(a));
        }
    }

    #[test]
    fn real_generator_lies_in_cm_field() {
        let cm = analyze_cm(&zp(&[1, 0, 0, 0, 1])).unwrap();
        let in_cm = cm.real_gen_in_cm().unwrap();
        let mq = cm.closure.min_poly_q();
        let rebuilt = in_cm.compose_mod(&cm.cm_gen, &mq);
        assert_eq!(rebuilt, cm.real_gen.rem(&mq));
    }
}
