//! Unit group of the maximal order: exact torsion subgroup and a
//! multiplicatively independent family spanning a finite-index subgroup of
//! the free part, harvested from short vectors of norm one. Consumers that
//! need the full unit group must tolerate the finite index; character
//! construction re-verifies well-definedness downstream.

use crate::error::{Error, Result};
use crate::exact::zpoly::ZPoly;
use crate::field_tower::closure::roots_in_field;
use crate::ideals::geometry::{short_elements, IdealLattice, OrderCtx};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Debug)]
pub struct UnitGroup {
    /// Number of roots of unity in the field.
    pub torsion_order: u32,
    /// Generator of the torsion subgroup, integral-basis coordinates.
    pub torsion_generator: Vec<BigInt>,
    /// Multiplicatively independent units of infinite order,
    /// integral-basis coordinates. Spans a finite-index subgroup of the
    /// free part; the index is not certified here.
    pub fundamental: Vec<Vec<BigInt>>,
}

/// x^(l^(a-1)) substituted into 1 + x + ... + x^(l-1): the cyclotomic
/// polynomial of the prime power l^a.
fn prime_power_cyclotomic(l: u64, a: u32) -> ZPoly {
    let step = l.pow(a - 1) as usize;
    let mut c = vec![BigInt::from(0); step * (l as usize - 1) + 1];
    for j in 0..l as usize {
        c[j * step] = BigInt::one();
    }
    ZPoly::new(c)
}

/// Multiplicative order of the element, if at most the bound.
fn order_of(ctx: &OrderCtx, coords: &[BigInt], bound: u32) -> Option<u32> {
    let one = ctx.scalar_coords(&BigInt::one());
    let mut cur = coords.to_vec();
    for k in 1..=bound {
        if cur == one {
            return Some(k);
        }
        cur = ctx.mul_coords(&cur, coords);
    }
    None
}

/// Radius schedule for the norm-one sweep, as multiples of the AM-GM lower
/// bound on the squared embedding length of a unit.
const UNIT_RADIUS_STEPS: [(f64, usize); 6] = [
    (2.0, 40_000),
    (5.0, 80_000),
    (12.0, 160_000),
    (30.0, 320_000),
    (70.0, 640_000),
    (160.0, 1_500_000),
];

pub fn unit_group(ctx: &OrderCtx) -> Result<UnitGroup> {
    let n = ctx.degree();

    // Torsion: for each prime power l^a with phi(l^a) dividing n, test
    // whether the cyclotomic polynomial has a root in the field. The
    // torsion subgroup is cyclic of order equal to the product of the
    // largest prime powers found.
    let mut torsion_order: u32 = 2;
    let mut torsion_generator = ctx.scalar_coords(&BigInt::from(-1));
    let mut l = 2u64;
    while l as usize <= n + 1 {
        if crate::exact::primes::is_prime_u64(l) && n % (l as usize - 1) == 0 {
            let mut a_max = 1u32;
            while (l.pow(a_max) - l.pow(a_max - 1)) as usize <= n {
                a_max += 1;
            }
            a_max -= 1;
            let a_min = if l == 2 { 2 } else { 1 };
            for a in (a_min..=a_max).rev() {
                let phi = (l.pow(a) - l.pow(a - 1)) as usize;
                if n % phi != 0 {
                    continue;
                }
                let roots = roots_in_field(&prime_power_cyclotomic(l, a), &ctx.field.poly)?;
                if let Some(root) = roots.first() {
                    let coords = ctx.int_coords(root).ok_or_else(|| {
                        Error::Internal("root of unity is not an algebraic integer".into())
                    })?;
                    let q = l.pow(a) as u32;
                    if l == 2 {
                        torsion_order = q;
                        torsion_generator = coords;
                    } else {
                        torsion_order *= q;
                        torsion_generator = ctx.mul_coords(&torsion_generator, &coords);
                    }
                    break;
                }
            }
        }
        l += 1;
    }
    match order_of(ctx, &torsion_generator, torsion_order) {
        Some(m) if m == torsion_order => {}
        other => {
            return Err(Error::Internal(format!(
                "torsion generator has order {other:?}, expected {torsion_order}"
            )))
        }
    }

    // Archimedean places: one representative per conjugate pair, weight 2
    // for complex places. The log map sends units into the trace-zero
    // hyperplane; its rank is the number of places minus one.
    let emb = ctx.field.embeddings(50)?;
    let mut places: Vec<(usize, f64)> = Vec::new();
    for (i, z) in emb.iter().enumerate() {
        let im = z.imag().to_f64();
        if im.abs() < 1e-12 {
            places.push((i, 1.0));
        } else if im > 0.0 {
            places.push((i, 2.0));
        }
    }
    let rank = places.len().saturating_sub(1);
    if rank == 0 {
        return Ok(UnitGroup {
            torsion_order,
            torsion_generator,
            fundamental: Vec::new(),
        });
    }

    let basis_emb = ctx.basis_embeddings_f64();
    let emb_t: Vec<Vec<(f64, f64)>> = (0..emb.len())
        .map(|e| basis_emb.iter().map(|row| row[e]).collect())
        .collect();
    let log_vector = |coords: &[BigInt]| -> Vec<f64> {
        places
            .iter()
            .map(|&(i, w)| {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (c, &(br, bi)) in coords.iter().zip(emb_t[i].iter()) {
                    let cf = c.to_f64().unwrap_or(f64::MAX);
                    re += cf * br;
                    im += cf * bi;
                }
                w * 0.5 * (re * re + im * im).ln()
            })
            .collect()
    };

    let whole = IdealLattice::whole(n);
    let one = BigInt::one();
    let mut fundamental: Vec<Vec<BigInt>> = Vec::new();
    let mut accepted_logs: Vec<Vec<f64>> = Vec::new();
    'sweep: for &(factor, limit) in &UNIT_RADIUS_STEPS {
        let radius = factor * n as f64;
        for coords in short_elements(ctx, &whole, radius, limit) {
            let lv = log_vector(&coords);
            let height: f64 = lv.iter().map(|x| x * x).sum::<f64>().sqrt();
            if height < 1e-7 {
                continue;
            }
            // Cheap float screen before the exact norm determinant.
            let log_norm: f64 = lv.iter().sum();
            if log_norm.abs() > 1e-6 {
                continue;
            }
            if ctx.norm(&ctx.elem(&coords)).to_integer().abs() != one {
                continue;
            }
            if !independent_from(&accepted_logs, &lv) {
                continue;
            }
            accepted_logs.push(lv);
            fundamental.push(coords);
            if fundamental.len() == rank {
                break 'sweep;
            }
        }
    }
    if fundamental.len() != rank {
        return Err(Error::NotConverged(format!(
            "unit sweep found {} independent units of the required {rank}",
            fundamental.len()
        )));
    }
    Ok(UnitGroup {
        torsion_order,
        torsion_generator,
        fundamental,
    })
}

/// Gaussian elimination residual test: does v leave the span of rows?
fn independent_from(rows: &[Vec<f64>], v: &[f64]) -> bool {
    let mut basis: Vec<Vec<f64>> = rows.to_vec();
    let mut w = v.to_vec();
    for b in basis.iter_mut() {
        let bb: f64 = b.iter().map(|x| x * x).sum();
        if bb < 1e-18 {
            continue;
        }
        let c: f64 = w.iter().zip(b.iter()).map(|(x, y)| x * y).sum::<f64>() / bb;
        for (x, y) in w.iter_mut().zip(b.iter()) {
            *x -= c * y;
        }
    }
    let res: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    res > 1e-6 * scale.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qpoly::QPoly;
    use crate::field_tower::numfield::NumberField;

    fn ctx_for(poly: &[i64]) -> OrderCtx {
        OrderCtx::new(NumberField::build(ZPoly::from_i64(poly)).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_units_are_the_fourth_roots_of_unity() {
        let ctx = ctx_for(&[1, 0, 1]);
        let ug = unit_group(&ctx).unwrap();
        assert_eq!(ug.torsion_order, 4);
        assert!(ug.fundamental.is_empty());
        // The generator is one of the two primitive fourth roots.
        let i_coords = ctx.int_coords(&QPoly::x()).unwrap();
        let minus_i = ctx.scalar_coords(&BigInt::from(-1));
        let minus_i = ctx.mul_coords(&minus_i, &i_coords);
        assert!(ug.torsion_generator == i_coords || ug.torsion_generator == minus_i);
    }

    #[test]
    fn eisenstein_units_are_the_sixth_roots_of_unity() {
        let ctx = ctx_for(&[1, 1, 1]);
        let ug = unit_group(&ctx).unwrap();
        assert_eq!(ug.torsion_order, 6);
        assert!(ug.fundamental.is_empty());
    }

    #[test]
    fn eighth_cyclotomic_field_has_one_fundamental_unit() {
        let ctx = ctx_for(&[1, 0, 0, 0, 1]);
        let ug = unit_group(&ctx).unwrap();
        assert_eq!(ug.torsion_order, 8);
        assert_eq!(ug.fundamental.len(), 1);
        // 1 + sqrt(2) generates the free part; any harvested unit has a
        // log vector proportional to it, so its height is a multiple of
        // log(1 + sqrt(2)) = 0.8813...
        let u = ctx.elem(&ug.fundamental[0]);
        let nrm = ctx.norm(&u).to_integer();
        assert_eq!(nrm.abs(), BigInt::one());
    }

    #[test]
    fn sextic_field_has_torsion_four_and_rank_two() {
        let ctx = ctx_for(&[5, 12, 3, -4, 3, 0, 1]);
        let ug = unit_group(&ctx).unwrap();
        assert_eq!(ug.torsion_order, 4);
        assert_eq!(ug.fundamental.len(), 2);
        for coords in &ug.fundamental {
            let nrm = ctx.norm(&ctx.elem(coords)).to_integer();
            assert_eq!(nrm.abs(), BigInt::one());
        }
    }

    #[test]
    fn quartic_cm_field_over_sqrt_five_has_rank_one() {
        let ctx = ctx_for(&[36, 0, -8, 0, 1]);
        let ug = unit_group(&ctx).unwrap();
        assert_eq!(ug.fundamental.len(), 1);
        let nrm = ctx.norm(&ctx.elem(&ug.fundamental[0])).to_integer();
        assert_eq!(nrm.abs(), BigInt::one());
    }
}
