//! Exact module arithmetic over the maximal order: integral-basis
//! coordinates, ideal lattices in Hermite form, and minimum search under
//! the complex-embedding metric (used for principality testing).

use crate::error::{Error, Result};
use crate::exact::lattice::F64Lattice;
use crate::exact::matrix::{det_q, hnf_row, inverse_q};
use crate::exact::qpoly::QPoly;
use crate::field_tower::numfield::NumberField;
use crate::mp::cplx::eval_qpoly_c;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A number field together with the precomputed coordinate change between
/// the power basis and the integral basis, and the multiplication tensor
/// of the maximal order. All ideal arithmetic goes through this.
#[derive(Debug, Clone)]
pub struct OrderCtx {
    pub field: NumberField,
    /// Maps power-basis coordinates to integral-basis coordinates.
    binv: Vec<Vec<BigRational>>,
    /// tensor[i][j] = integral-basis coordinates of basis[i]*basis[j].
    pub(crate) tensor: Vec<Vec<Vec<BigInt>>>,
    /// Flattened (re, im) embedding images of the integral basis, used by
    /// the short-vector search so it never touches multiprecision.
    emb_f64: Vec<Vec<f64>>,
}

impl OrderCtx {
    pub fn new(field: NumberField) -> Result<OrderCtx> {
        let n = field.degree;
        let mut b = vec![vec![BigRational::zero(); n]; n];
        for (col, w) in field.integral_basis.iter().enumerate() {
            for (row, c) in w.coords(n).into_iter().enumerate() {
                b[row][col] = c;
            }
        }
        let binv = inverse_q(&b).ok_or_else(|| {
            Error::Internal("integral basis is singular over the power basis".into())
        })?;
        let roots = field.embeddings(50)?;
        let mut emb_f64 = Vec::with_capacity(n);
        for w in &field.integral_basis {
            let mut flat = Vec::with_capacity(2 * n);
            for root in &roots {
                let v = eval_qpoly_c(w, root);
                flat.push(v.real().to_f64());
                flat.push(v.imag().to_f64());
            }
            emb_f64.push(flat);
        }
        let mut ctx = OrderCtx {
            field,
            binv,
            tensor: Vec::new(),
            emb_f64,
        };
        let mut tensor = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = ctx
                    .field
                    .mul(&ctx.field.integral_basis[i], &ctx.field.integral_basis[j]);
                let coords = ctx.int_coords(&prod).ok_or_else(|| {
                    Error::Internal("product of integral basis elements left the order".into())
                })?;
                tensor[i][j] = coords.clone();
                tensor[j][i] = coords;
            }
        }
        ctx.tensor = tensor;
        Ok(ctx)
    }

    pub fn degree(&self) -> usize {
        self.field.degree
    }

    /// Embedding images of the integral basis as (re, im) pairs, indexed
    /// by basis element then by embedding in the canonical root order.
    #[must_use]
    pub fn basis_embeddings_f64(&self) -> Vec<Vec<(f64, f64)>> {
        self.emb_f64
            .iter()
            .map(|flat| flat.chunks(2).map(|c| (c[0], c[1])).collect())
            .collect()
    }

    /// Integral-basis coordinates of an arbitrary field element.
    #[must_use]
    pub fn basis_coords(&self, e: &QPoly) -> Vec<BigRational> {
        let n = self.field.degree;
        let pc = e.rem(&self.field.poly_q()).coords(n);
        (0..n)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, c) in pc.iter().enumerate() {
                    acc += &self.binv[i][j] * c;
                }
                acc
            })
            .collect()
    }

    /// Coordinates over the integral basis when the element lies in the
    /// maximal order; None otherwise.
    #[must_use]
    pub fn int_coords(&self, e: &QPoly) -> Option<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.field.degree);
        for c in self.basis_coords(e) {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(out)
    }

    /// Field element from integral-basis coordinates.
    #[must_use]
    pub fn elem(&self, coords: &[BigInt]) -> QPoly {
        let mut acc = QPoly::zero();
        for (c, w) in coords.iter().zip(&self.field.integral_basis) {
            acc = acc.add(&w.mul_scalar(&BigRational::from_integer(c.clone())));
        }
        acc
    }

    /// Product in integral-basis coordinates via the multiplication tensor.
    #[must_use]
    pub fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.field.degree;
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (o, t) in out.iter_mut().zip(&self.tensor[i][j]) {
                    *o += &prod * t;
                }
            }
        }
        out
    }

    /// Field norm of an element, as the determinant of its multiplication
    /// matrix on the power basis.
    #[must_use]
    pub fn norm(&self, e: &QPoly) -> BigRational {
        let n = self.field.degree;
        let modulus = self.field.poly_q();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        let mut cur = e.rem(&modulus);
        let x = QPoly::x();
        for col in 0..n {
            for (row, c) in cur.coords(n).into_iter().enumerate() {
                m[row][col] = c;
            }
            if col + 1 < n {
                cur = cur.mul_mod(&x, &modulus);
            }
        }
        det_q(&m)
    }

    /// Coordinates of the rational integer m (m times the first basis
    /// element, which is 1).
    #[must_use]
    pub fn scalar_coords(&self, m: &BigInt) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.field.degree];
        v[0] = m.clone();
        v
    }
}

/// Full-rank sublattice of the maximal order in upper-triangular Hermite
/// form over the integral basis. Equal lattices have identical `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    pub basis: Vec<Vec<BigInt>>,
    /// Index in the maximal order = absolute ideal norm.
    pub norm: BigInt,
}

impl IdealLattice {
    /// The unit ideal (the whole maximal order).
    #[must_use]
    pub fn whole(n: usize) -> IdealLattice {
        let mut basis = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IdealLattice {
            basis,
            norm: BigInt::one(),
        }
    }

    /// O-module generated by the given elements (integral-basis coords):
    /// the row span of all products generator * basis element.
    pub fn from_generators(ctx: &OrderCtx, gens: &[Vec<BigInt>]) -> Result<IdealLattice> {
        let n = ctx.degree();
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in gens {
            for i in 0..n {
                let mut unit = vec![BigInt::zero(); n];
                unit[i] = BigInt::one();
                rows.push(ctx.mul_coords(g, &unit));
            }
        }
        Self::from_rows(rows, n)
    }

    fn from_rows(rows: Vec<Vec<BigInt>>, n: usize) -> Result<IdealLattice> {
        let h = hnf_row(&rows);
        if h.len() != n {
            return Err(Error::SingularInput(
                "ideal generators span a rank-deficient lattice".into(),
            ));
        }
        let norm = h.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        Ok(IdealLattice { basis: h, norm })
    }

    /// Membership by forward substitution against the triangular basis.
    #[must_use]
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let n = self.basis.len();
        let mut rem = v.to_vec();
        for i in 0..n {
            if rem[i].is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&rem[i], &self.basis[i][i]);
            if !r.is_zero() {
                return false;
            }
            for j in i..n {
                rem[j] = &rem[j] - &q * &self.basis[i][j];
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    /// Reduce a coordinate vector to the canonical representative of its
    /// residue class modulo this lattice (entries reduced by the Hermite
    /// rows from the first coordinate up).
    #[must_use]
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.basis.len();
        let mut rem = v.to_vec();
        for i in 0..n {
            let q = num_integer::Integer::div_floor(&rem[i], &self.basis[i][i]);
            if !q.is_zero() {
                for j in i..n {
                    rem[j] = &rem[j] - &q * &self.basis[i][j];
                }
            }
        }
        rem
    }

    /// Product ideal: span of pairwise products of the two Hermite bases.
    pub fn mul(&self, ctx: &OrderCtx, other: &IdealLattice) -> Result<IdealLattice> {
        let n = ctx.degree();
        let mut rows = Vec::with_capacity(n * n);
        for a in &self.basis {
            for b in &other.basis {
                rows.push(ctx.mul_coords(a, b));
            }
        }
        Self::from_rows(rows, n)
    }

    /// All residue-class representatives (diagonal-box enumeration).
    /// Count equals the norm; intended for small moduli only.
    #[must_use]
    pub fn residues(&self) -> Vec<Vec<BigInt>> {
        let n = self.basis.len();
        let mut out = vec![vec![BigInt::zero(); n]];
        for i in 0..n {
            let d = self.basis[i][i]
                .to_u64()
                .expect("residue enumeration on an oversized modulus");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                for c in 0..d {
                    let mut w = v.clone();
                    w[i] = BigInt::from(c);
                    next.push(self.reduce(&w));
                }
            }
            out = next;
        }
        out.sort();
        out.dedup();
        out
    }
}

/// All nonzero lattice elements with T2 norm at most `radius` (sum of
/// |tau(x)|^2 over every complex embedding), up to sign, as integral-basis
/// coordinate vectors. Truncated at `limit` vectors.
#[must_use]
pub fn short_elements(
    ctx: &OrderCtx,
    lat: &IdealLattice,
    radius: f64,
    limit: usize,
) -> Vec<Vec<BigInt>> {
    let n = ctx.degree();
    let mut real_basis = Vec::with_capacity(n);
    for row in &lat.basis {
        let mut flat = vec![0.0; 2 * n];
        for (c, emb) in row.iter().zip(&ctx.emb_f64) {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::MAX);
            for (f, v) in flat.iter_mut().zip(emb) {
                *f += cf * v;
            }
        }
        real_basis.push(flat);
    }
    let mut f64lat = F64Lattice::new(real_basis);
    f64lat.lll();
    let found = f64lat.enumerate(radius, limit);
    let mut out = Vec::with_capacity(found.len());
    for combo in found {
        let mut coords = vec![BigInt::zero(); n];
        for (c, row) in combo.iter().zip(&lat.basis) {
            if *c != 0 {
                let ci = BigInt::from(*c);
                for (o, r) in coords.iter_mut().zip(row) {
                    *o += &ci * r;
                }
            }
        }
        out.push(coords);
    }
    out
}

/// Schedule of T2 search radii relative to the arithmetic-geometric lower
/// bound n*N^(2/n); each step also bounds the enumeration count.
const RADIUS_STEPS: [(f64, usize); 7] = [
    (1.5, 20_000),
    (3.0, 40_000),
    (6.0, 80_000),
    (12.0, 160_000),
    (25.0, 320_000),
    (60.0, 640_000),
    (140.0, 1_280_000),
];

/// Search for a generator of the lattice as a principal O-ideal: a lattice
/// element whose norm equals the lattice norm in absolute value. Fails
/// with UnknownPrincipality when the radius schedule is exhausted, which
/// either means the ideal is not principal or the unit spread exceeds the
/// search budget.
pub fn principal_generator(ctx: &OrderCtx, lat: &IdealLattice) -> Result<QPoly> {
    let n = ctx.degree();
    let nf = lat
        .norm
        .to_f64()
        .ok_or_else(|| Error::InvalidInput("ideal norm too large for generator search".into()))?;
    let base = n as f64 * nf.powf(2.0 / n as f64);
    for (mult, limit) in RADIUS_STEPS {
        let candidates = short_elements(ctx, lat, mult * base, limit);
        let mut scored: Vec<(f64, Vec<BigInt>)> = candidates
            .into_iter()
            .map(|c| {
                let mag: f64 = c
                    .iter()
                    .map(|x| x.to_f64().unwrap_or(f64::MAX))
                    .map(|x| x * x)
                    .sum();
                (mag, c)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        for (_, coords) in scored {
            let e = ctx.elem(&coords);
            let nm = ctx.norm(&e);
            debug_assert!(nm.is_integer());
            if nm.to_integer().abs() == lat.norm {
                return Ok(e);
            }
        }
    }
    Err(Error::UnknownPrincipality(format!(
        "no generator of norm {} within the search radius schedule",
        lat.norm
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::zpoly::ZPoly;

    fn gaussian() -> OrderCtx {
        OrderCtx::new(NumberField::build(ZPoly::from_i64(&[1, 0, 1])).unwrap()).unwrap()
    }

    fn desk() -> OrderCtx {
        OrderCtx::new(NumberField::build(ZPoly::from_i64(&[5, 12, 3, -4, 3, 0, 1])).unwrap())
            .unwrap()
    }

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn tensor_matches_direct_multiplication() {
        let ctx = desk();
        let a: Vec<BigInt> = [3, -1, 2, 0, 5, -2].iter().map(|&v| bi(v)).collect();
        let b: Vec<BigInt> = [-2, 7, 1, 1, 0, 4].iter().map(|&v| bi(v)).collect();
        let via_tensor = ctx.mul_coords(&a, &b);
        let direct = ctx.field.mul(&ctx.elem(&a), &ctx.elem(&b));
        assert_eq!(ctx.int_coords(&direct).unwrap(), via_tensor);
    }

    #[test]
    fn norm_oracles_in_gaussian_field() {
        let ctx = gaussian();
        // N(2 + i) = 5, N(1 + i) = 2, N(i) = 1
        let n = |a: i64, b: i64| {
            ctx.norm(&QPoly::new(vec![
                BigRational::from_integer(bi(a)),
                BigRational::from_integer(bi(b)),
            ]))
        };
        assert_eq!(n(2, 1), BigRational::from_integer(bi(5)));
        assert_eq!(n(1, 1), BigRational::from_integer(bi(2)));
        assert_eq!(n(0, 1), BigRational::from_integer(bi(1)));
    }

    #[test]
    fn principal_lattice_norm_is_element_norm() {
        let ctx = desk();
        let coords: Vec<BigInt> = [1, 1, 0, 0, 1, 0].iter().map(|&v| bi(v)).collect();
        let lat = IdealLattice::from_generators(&ctx, &[coords.clone()]).unwrap();
        let want = ctx.norm(&ctx.elem(&coords)).to_integer().abs();
        assert_eq!(lat.norm, want);
        assert!(lat.contains(&coords));
        let outside = ctx.scalar_coords(&bi(1));
        assert!(!lat.contains(&outside) || lat.norm == BigInt::one());
    }

    #[test]
    fn lattice_product_multiplies_norms() {
        let ctx = gaussian();
        let a = IdealLattice::from_generators(&ctx, &[vec![bi(1), bi(1)]]).unwrap();
        let b = IdealLattice::from_generators(&ctx, &[vec![bi(2), bi(1)]]).unwrap();
        let ab = a.mul(&ctx, &b).unwrap();
        assert_eq!(ab.norm, &a.norm * &b.norm);
        // (1+i)(2+i) = 1 + 3i lies in the product
        assert!(ab.contains(&[bi(1), bi(3)]));
        assert!(!ab.contains(&[bi(1), bi(0)]));
    }

    #[test]
    fn residues_enumerate_the_full_quotient() {
        let ctx = gaussian();
        // modulus (3): 9 residues
        let lat = IdealLattice::from_generators(&ctx, &[vec![bi(3), bi(0)]]).unwrap();
        let res = lat.residues();
        assert_eq!(res.len(), 9);
        for v in &res {
            assert_eq!(lat.reduce(v), *v);
        }
    }

    #[test]
    fn generator_recovered_for_principal_ideal() {
        let ctx = gaussian();
        let lat = IdealLattice::from_generators(&ctx, &[vec![bi(2), bi(1)]]).unwrap();
        let g = principal_generator(&ctx, &lat).unwrap();
        let n = ctx.norm(&g);
        assert_eq!(n.to_integer().abs(), bi(5));
        // the generator regenerates the same lattice
        let coords = ctx.int_coords(&g).unwrap();
        let relat = IdealLattice::from_generators(&ctx, &[coords]).unwrap();
        assert_eq!(relat, lat);
    }

    #[test]
    fn desk_generator_search_handles_unit_rank_two() {
        let ctx = desk();
        // theta itself: N(theta) = -5 (constant term of the minimal
        // polynomial with sign), a norm-5 principal ideal
        let theta = ctx.int_coords(&QPoly::x()).unwrap();
        let lat = IdealLattice::from_generators(&ctx, &[theta]).unwrap();
        assert_eq!(lat.norm, bi(5));
        let g = principal_generator(&ctx, &lat).unwrap();
        assert_eq!(ctx.norm(&g).to_integer().abs(), bi(5));
        let relat =
            IdealLattice::from_generators(&ctx, &[ctx.int_coords(&g).unwrap()]).unwrap();
        assert_eq!(relat, lat);
    }
}
