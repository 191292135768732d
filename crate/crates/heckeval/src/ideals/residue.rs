//! Residue rings modulo an ideal and ray class groups for totally
//! imaginary fields of class number one. The multiplicative group of the
//! residue ring is decomposed into a polycyclic generator sequence with
//! discrete logarithms, which makes its character group enumerable in
//! exact root-of-unity arithmetic.

use crate::error::{Error, Result};
use crate::exact::primes::primes_upto;
use crate::ideals::geometry::{principal_generator, IdealLattice, OrderCtx};
use crate::ideals::units::{unit_group, UnitGroup};
use crate::ideals::{enumerate_ideals, factor_rational_prime, Ideal};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use std::collections::BTreeMap;

/// Largest modulus norm handled by brute-force residue enumeration.
const MODULUS_NORM_BOUND: u64 = 10_000;

/// One step of the polycyclic generator sequence of the residue unit
/// group: g has the stated order relative to the subgroup generated by
/// the earlier steps, and g to that order has the recorded exponents.
#[derive(Debug)]
pub struct ResidueGen {
    pub element: usize,
    pub rel_order: u32,
    pub power_dlog: Vec<u32>,
}

/// (O/m)^x with full discrete-logarithm bookkeeping.
#[derive(Debug)]
pub struct ResidueUnits {
    pub lat: IdealLattice,
    /// Canonically reduced coordinates of the residues coprime to m.
    pub elements: Vec<Vec<BigInt>>,
    pub identity: usize,
    index: BTreeMap<Vec<BigInt>, usize>,
    pub gens: Vec<ResidueGen>,
    /// Exponent vector of each element over the generator sequence.
    pub dlog: Vec<Vec<u32>>,
    pub order: u64,
}

impl ResidueUnits {
    pub fn index_of(&self, reduced: &[BigInt]) -> Option<usize> {
        self.index.get(reduced).copied()
    }

    /// Reduce arbitrary integral coordinates and look them up; fails when
    /// the element shares a factor with the modulus.
    pub fn class_of(&self, coords: &[BigInt]) -> Result<usize> {
        self.index_of(&self.lat.reduce(coords)).ok_or_else(|| {
            Error::NotCoprime("element is not invertible modulo the modulus".into())
        })
    }

    pub fn mul_idx(&self, ctx: &OrderCtx, i: usize, j: usize) -> usize {
        let prod = self.lat.reduce(&ctx.mul_coords(&self.elements[i], &self.elements[j]));
        self.index_of(&prod)
            .expect("residue unit group is closed under multiplication")
    }
}

/// A character of the residue unit group, valued in M-th roots of unity
/// where M is the group order. Values are stored as exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCharacter {
    pub root_order: u64,
    pub gen_values: Vec<u64>,
}

impl ResidueCharacter {
    /// Exponent e with chi(element) = exp(2 pi i e / root_order).
    pub fn exponent(&self, units: &ResidueUnits, element: usize) -> u64 {
        let mut acc: u64 = 0;
        for (c, &d) in self.gen_values.iter().zip(&units.dlog[element]) {
            acc = (acc + c * d as u64) % self.root_order;
        }
        acc
    }

    pub fn is_trivial_on(&self, units: &ResidueUnits, subgroup: &[usize]) -> bool {
        subgroup.iter().all(|&i| self.exponent(units, i) == 0)
    }
}

/// Multiplicative group of O/m for a factored modulus of norm at most the
/// brute-force bound.
pub fn residue_units(ctx: &OrderCtx, modulus: &Ideal) -> Result<ResidueUnits> {
    let lat = modulus.lattice(ctx)?;
    let nm = lat
        .norm
        .to_u64()
        .filter(|&x| x <= MODULUS_NORM_BOUND)
        .ok_or_else(|| {
            Error::ModulusTooLarge(format!(
                "modulus norm {} exceeds the brute-force bound {MODULUS_NORM_BOUND}",
                lat.norm
            ))
        })?;
    let _ = nm;
    let prime_lats: Vec<IdealLattice> = modulus
        .factorization
        .iter()
        .map(|(pr, _)| pr.lattice(ctx))
        .collect::<Result<_>>()?;
    let mut elements: Vec<Vec<BigInt>> = Vec::new();
    for r in lat.residues() {
        if prime_lats.iter().all(|pl| !pl.contains(&r)) {
            elements.push(r);
        }
    }
    elements.sort();
    let index: BTreeMap<Vec<BigInt>, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let identity = *index
        .get(&lat.reduce(&ctx.scalar_coords(&BigInt::one())))
        .ok_or_else(|| Error::Internal("identity residue is missing".into()))?;
    let order = elements.len() as u64;

    let mul = |i: usize, j: usize| -> usize {
        let prod = lat.reduce(&ctx.mul_coords(&elements[i], &elements[j]));
        *index
            .get(&prod)
            .expect("residue unit group is closed under multiplication")
    };

    // Polycyclic decomposition with discrete logs: repeatedly take the
    // first unassigned element, find its order relative to the subgroup
    // assembled so far, and sweep out the new cosets.
    let mut dlog: Vec<Option<Vec<u32>>> = vec![None; elements.len()];
    dlog[identity] = Some(Vec::new());
    let mut gens: Vec<ResidueGen> = Vec::new();
    loop {
        let Some(g) = (0..elements.len()).find(|&i| dlog[i].is_none()) else {
            break;
        };
        let mut cur = g;
        let mut d = 1u32;
        while dlog[cur].is_none() {
            cur = mul(cur, g);
            d += 1;
        }
        let power_dlog = dlog[cur].clone().expect("loop exit condition");
        let assigned: Vec<usize> = (0..elements.len()).filter(|&i| dlog[i].is_some()).collect();
        for v in dlog.iter_mut().flatten() {
            v.push(0);
        }
        let mut gj = identity;
        for j in 1..d {
            gj = mul(gj, g);
            for &h in &assigned {
                let target = mul(h, gj);
                if dlog[target].is_some() {
                    return Err(Error::Internal(
                        "polycyclic sweep revisited an assigned residue".into(),
                    ));
                }
                let mut v = dlog[h].clone().expect("assigned snapshot");
                *v.last_mut().expect("padded vector is nonempty") = j;
                dlog[target] = Some(v);
            }
        }
        gens.push(ResidueGen {
            element: g,
            rel_order: d,
            power_dlog,
        });
    }
    let product: u64 = gens.iter().map(|g| g.rel_order as u64).product();
    if product != order {
        return Err(Error::Internal(format!(
            "polycyclic orders multiply to {product}, group order is {order}"
        )));
    }
    let dlog: Vec<Vec<u32>> = dlog
        .into_iter()
        .map(|v| v.expect("every residue was assigned"))
        .collect();
    Ok(ResidueUnits {
        lat,
        elements,
        identity,
        index,
        gens,
        dlog,
        order,
    })
}

/// Every character of the residue unit group, enumerated through the
/// polycyclic presentation. The count equals the group order.
pub fn all_characters(units: &ResidueUnits) -> Result<Vec<ResidueCharacter>> {
    let m = units.order;
    let mut partial: Vec<Vec<u64>> = vec![Vec::new()];
    for gen in &units.gens {
        let d = gen.rel_order as u64;
        let step = m / d;
        let mut next = Vec::with_capacity(partial.len() * d as usize);
        for c in &partial {
            let rhs: u64 = c
                .iter()
                .zip(&gen.power_dlog)
                .map(|(ci, &w)| (ci * w as u64) % m)
                .fold(0, |a, b| (a + b) % m);
            if rhs % d != 0 {
                return Err(Error::Internal(
                    "character extension constraint is unsolvable".into(),
                ));
            }
            let base = rhs / d;
            for t in 0..d {
                let mut cc = c.clone();
                cc.push((base + t * step) % m);
                next.push(cc);
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|gen_values| ResidueCharacter {
            root_order: m,
            gen_values,
        })
        .collect())
}

/// Group of ideals coprime to the modulus, modulo principal ideals with a
/// generator congruent to 1. Only class-number-one fields are supported;
/// the class number is verified by testing principality of every prime
/// ideal under the Minkowski bound.
#[derive(Debug)]
pub struct RayClassGroup {
    pub modulus: Ideal,
    pub class_representatives: Vec<Ideal>,
    pub composition_table: Vec<Vec<usize>>,
    /// Residue indices of the images of the unit-group generators,
    /// torsion generator first.
    pub unit_images: Vec<usize>,
    pub residues: ResidueUnits,
    /// Class index of each residue unit.
    pub class_of_residue: Vec<usize>,
    /// Residue index of the generator of each class representative.
    pub representative_residues: Vec<usize>,
    pub units: UnitGroup,
}

impl RayClassGroup {
    pub fn class_count(&self) -> usize {
        self.class_representatives.len()
    }

    /// Class of a factored ideal coprime to the modulus.
    pub fn class_of_ideal(&self, ctx: &OrderCtx, ideal: &Ideal) -> Result<usize> {
        if !ideal.coprime_to(&self.modulus) {
            return Err(Error::NotCoprime(
                "ideal shares a prime with the modulus".into(),
            ));
        }
        let gen = principal_generator(ctx, &ideal.lattice(ctx)?)?;
        let coords = ctx
            .int_coords(&gen)
            .ok_or_else(|| Error::Internal("principal generator left the order".into()))?;
        let idx = self.residues.class_of(&coords)?;
        Ok(self.class_of_residue[idx])
    }
}

/// Verify the class number is one by Minkowski's bound: every ideal class
/// contains an integral ideal of norm below the bound, so it suffices
/// that all prime ideals under the bound are principal.
fn verify_class_number_one(ctx: &OrderCtx) -> Result<()> {
    let n = ctx.degree() as f64;
    let r2 = ctx.degree() as f64 / 2.0;
    let mut fact = 1.0f64;
    for k in 2..=ctx.degree() {
        fact *= k as f64;
    }
    let disc = ctx.field.disc.to_f64().unwrap_or(f64::MAX).abs();
    let bound = (4.0 / std::f64::consts::PI).powf(r2) * fact / n.powf(n) * disc.sqrt();
    for p in primes_upto(bound.floor() as usize) {
        for (pr, _) in factor_rational_prime(ctx, p)? {
            if pr.norm.to_f64().unwrap_or(f64::MAX) <= bound {
                principal_generator(ctx, &pr.lattice(ctx)?)?;
            }
        }
    }
    Ok(())
}

pub fn ray_class_group(ctx: &OrderCtx, modulus: &Ideal) -> Result<RayClassGroup> {
    let emb = ctx.field.embeddings(50)?;
    if emb.iter().any(|z| z.imag().to_f64().abs() < 1e-12) {
        return Err(Error::NotTotallyImaginary(
            "field has a real embedding".into(),
        ));
    }
    verify_class_number_one(ctx)?;
    let units = unit_group(ctx)?;
    let residues = residue_units(ctx, modulus)?;

    let mut unit_gens: Vec<Vec<BigInt>> = vec![units.torsion_generator.clone()];
    unit_gens.extend(units.fundamental.iter().cloned());
    let unit_images: Vec<usize> = unit_gens
        .iter()
        .map(|u| residues.class_of(u))
        .collect::<Result<_>>()?;

    // Subgroup generated by the unit images, then its cosets.
    let mut in_subgroup = vec![false; residues.elements.len()];
    in_subgroup[residues.identity] = true;
    let mut frontier = vec![residues.identity];
    while let Some(x) = frontier.pop() {
        for &g in &unit_images {
            let y = residues.mul_idx(ctx, x, g);
            if !in_subgroup[y] {
                in_subgroup[y] = true;
                frontier.push(y);
            }
        }
    }
    let subgroup: Vec<usize> = (0..residues.elements.len())
        .filter(|&i| in_subgroup[i])
        .collect();

    let mut class_of_residue = vec![usize::MAX; residues.elements.len()];
    let mut class_count = 0usize;
    // The identity coset comes first so the principal class has index 0.
    for &u in &subgroup {
        class_of_residue[u] = 0;
    }
    class_count += 1;
    for e in 0..residues.elements.len() {
        if class_of_residue[e] != usize::MAX {
            continue;
        }
        for &u in &subgroup {
            class_of_residue[residues.mul_idx(ctx, e, u)] = class_count;
        }
        class_count += 1;
    }

    // Representatives: the first enumerated coprime ideal landing in each
    // class, searching outward in norm.
    let mut class_representatives: Vec<Option<Ideal>> = vec![None; class_count];
    let mut representative_residues: Vec<usize> = vec![usize::MAX; class_count];
    let base = residues.order.max(4);
    let mut x = base;
    loop {
        for ideal in enumerate_ideals(ctx, x)? {
            if !ideal.coprime_to(modulus) {
                continue;
            }
            let gen = principal_generator(ctx, &ideal.lattice(ctx)?)?;
            let coords = ctx
                .int_coords(&gen)
                .ok_or_else(|| Error::Internal("principal generator left the order".into()))?;
            let ridx = residues.class_of(&coords)?;
            let cls = class_of_residue[ridx];
            if class_representatives[cls].is_none() {
                class_representatives[cls] = Some(ideal);
                representative_residues[cls] = ridx;
            }
        }
        if class_representatives.iter().all(Option::is_some) {
            break;
        }
        x *= 2;
        if x > 256 * base {
            return Err(Error::Internal(
                "ray class representatives not found within the norm budget".into(),
            ));
        }
    }
    let class_representatives: Vec<Ideal> =
        class_representatives.into_iter().flatten().collect();

    let composition_table: Vec<Vec<usize>> = (0..class_count)
        .map(|i| {
            (0..class_count)
                .map(|j| {
                    let prod = residues.mul_idx(
                        ctx,
                        representative_residues[i],
                        representative_residues[j],
                    );
                    class_of_residue[prod]
                })
                .collect()
        })
        .collect();

    Ok(RayClassGroup {
        modulus: modulus.clone(),
        class_representatives,
        composition_table,
        unit_images,
        residues,
        class_of_residue,
        representative_residues,
        units,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::zpoly::ZPoly;
    use crate::field_tower::numfield::NumberField;
    use crate::ideals::Ideal;

    fn ctx_for(poly: &[i64]) -> OrderCtx {
        OrderCtx::new(NumberField::build(ZPoly::from_i64(poly)).unwrap()).unwrap()
    }

    fn prime_power_modulus(ctx: &OrderCtx, p: u64, which: usize, k: u32) -> Ideal {
        let pr = factor_rational_prime(ctx, p).unwrap()[which].0.clone();
        Ideal::from_factorization(vec![(pr, k)])
    }

    #[test]
    fn trivial_modulus_gives_the_trivial_ray_class_group() {
        let ctx = ctx_for(&[1, 0, 1]);
        let rc = ray_class_group(&ctx, &Ideal::unit()).unwrap();
        assert_eq!(rc.class_count(), 1);
        assert_eq!(rc.composition_table, vec![vec![0]]);
        assert!(rc.class_representatives[0].is_unit());
    }

    #[test]
    fn gaussian_modulus_three_has_two_ray_classes() {
        let ctx = ctx_for(&[1, 0, 1]);
        let modulus = prime_power_modulus(&ctx, 3, 0, 1);
        let rc = ray_class_group(&ctx, &modulus).unwrap();
        assert_eq!(rc.residues.order, 8);
        assert_eq!(rc.class_count(), 2);
        assert_eq!(rc.composition_table, vec![vec![0, 1], vec![1, 0]]);
        // The unit ideal lies in the identity class.
        assert!(rc.class_representatives[0].is_unit());
        assert_eq!(
            rc.class_of_ideal(&ctx, &rc.class_representatives[1].clone())
                .unwrap(),
            1
        );
    }

    #[test]
    fn residue_unit_group_multiplicativity_is_captured_by_dlogs() {
        let ctx = ctx_for(&[1, 0, 1]);
        let modulus = prime_power_modulus(&ctx, 3, 0, 1);
        let units = residue_units(&ctx, &modulus).unwrap();
        assert_eq!(units.order, 8);
        let chars = all_characters(&units).unwrap();
        assert_eq!(chars.len(), 8);
        for chi in &chars {
            for i in 0..units.elements.len() {
                for j in 0..units.elements.len() {
                    let k = units.mul_idx(&ctx, i, j);
                    let lhs = chi.exponent(&units, k);
                    let rhs =
                        (chi.exponent(&units, i) + chi.exponent(&units, j)) % chi.root_order;
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // Distinct characters stay distinct on the group.
        for a in 0..chars.len() {
            for b in a + 1..chars.len() {
                assert!((0..units.elements.len())
                    .any(|i| chars[a].exponent(&units, i) != chars[b].exponent(&units, i)));
            }
        }
    }

    #[test]
    fn ray_class_table_is_an_abelian_group_law() {
        let ctx = ctx_for(&[5, 12, 3, -4, 3, 0, 1]);
        let modulus = prime_power_modulus(&ctx, 5, 0, 1);
        let rc = ray_class_group(&ctx, &modulus).unwrap();
        let t = &rc.composition_table;
        let k = rc.class_count();
        for i in 0..k {
            assert_eq!(t[0][i], i);
            assert!((0..k).any(|j| t[i][j] == 0));
            for j in 0..k {
                assert_eq!(t[i][j], t[j][i]);
                for l in 0..k {
                    assert_eq!(t[t[i][j]][l], t[i][t[j][l]]);
                }
            }
        }
    }

    #[test]
    fn real_fields_are_rejected() {
        let ctx = ctx_for(&[-2, 0, 0, 1]);
        let err = ray_class_group(&ctx, &Ideal::unit()).unwrap_err();
        assert!(matches!(err, Error::NotTotallyImaginary(_)));
    }

    #[test]
    fn oversized_moduli_are_rejected() {
        let ctx = ctx_for(&[1, 0, 1]);
        let modulus = prime_power_modulus(&ctx, 101, 0, 2);
        let err = residue_units(&ctx, &modulus).unwrap_err();
        assert!(matches!(err, Error::ModulusTooLarge(_)));
    }
}
