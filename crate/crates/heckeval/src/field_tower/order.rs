//! Maximal order of a number field by the round-2 method: starting from
//! the equation order, enlarge at every prime whose square divides the
//! polynomial discriminant until each localization is maximal.

use crate::error::{Error, Result};
use crate::exact::matrix::{hnf_row, kernel_mod_p};
use crate::exact::primes::try_factor_bigint;
use crate::exact::qpoly::QPoly;
use crate::exact::zpoly::{discriminant, ZPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub struct OrderData {
    /// Basis of the maximal order in the power basis; first element is 1.
    pub basis: Vec<QPoly>,
    /// Field discriminant.
    pub disc: BigInt,
    /// Index of the equation order in the maximal order.
    pub index: BigInt,
}

/// Order lattice: rows of `mat` over denominator `den` give the basis in
/// power-basis coordinates. Kept lower triangular with row i of degree
/// exactly i, so row 0 is always the element 1.
struct Lattice {
    mat: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl Lattice {
    fn identity(n: usize) -> Lattice {
        let mut mat = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        Lattice { mat, den: BigInt::one() }
    }

    fn n(&self) -> usize {
        self.mat.len()
    }

    fn basis_poly(&self, i: usize) -> QPoly {
        let coords: Vec<BigRational> = self.mat[i]
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect();
        QPoly::new(coords)
    }

    /// Coordinates of a power-basis element in this lattice's basis.
    /// Column j of the lower-triangular basis involves rows i >= j, so
    /// substitute from the highest power down.
    fn coords_of(&self, v: &QPoly) -> Vec<BigRational> {
        let n = self.n();
        let w = v.coords(n);
        let mut c = vec![BigRational::zero(); n];
        for j in (0..n).rev() {
            let mut acc = &w[j] * BigRational::from_integer(self.den.clone());
            for (i, ci) in c.iter().enumerate().skip(j + 1) {
                acc -= ci * BigRational::from_integer(self.mat[i][j].clone());
            }
            c[j] = acc / BigRational::from_integer(self.mat[j][j].clone());
        }
        c
    }

    fn det(&self) -> BigInt {
        let mut d = BigInt::one();
        for i in 0..self.n() {
            d *= &self.mat[i][i];
        }
        d
    }

    /// Divide out any common content between the matrix and denominator.
    fn normalize(&mut self) {
        let mut g = self.den.clone();
        for row in &self.mat {
            for e in row {
                g = num_integer::Integer::gcd(&g, e);
                if g.is_one() {
                    return;
                }
            }
        }
        if g.is_one() || g.is_zero() {
            return;
        }
        for row in &mut self.mat {
            for e in row.iter_mut() {
                *e = &*e / &g;
            }
        }
        self.den = &self.den / &g;
    }
}

/// Canonical lower-triangular basis: run the HNF with columns reversed
/// (highest power first) and flip back, so row i ends up with degree
/// exactly i and row 0 spans the intersection with the rationals.
fn to_hnf_lattice(rows: Vec<Vec<BigInt>>, den: BigInt, n: usize) -> Result<Lattice> {
    let rev: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().rev().cloned().collect())
        .collect();
    let h = hnf_row(&rev);
    if h.len() != n {
        return Err(Error::Internal("order lattice lost rank".into()));
    }
    let mat: Vec<Vec<BigInt>> = h
        .into_iter()
        .rev()
        .map(|r| r.into_iter().rev().collect())
        .collect();
    for (i, row) in mat.iter().enumerate() {
        for (j, e) in row.iter().enumerate().skip(i + 1) {
            if !e.is_zero() {
                return Err(Error::Internal(format!(
                    "HNF not triangular at ({i},{j})"
                )));
            }
        }
        if row[i].is_zero() {
            return Err(Error::Internal("HNF pivot vanished".into()));
        }
    }
    let mut lat = Lattice { mat, den };
    lat.normalize();
    Ok(lat)
}

fn rational_is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// One enlargement step at p. Returns None when the lattice is already
/// p-maximal (multiplier ring of the p-radical equals the order itself).
fn enlarge_at(f: &QPoly, lat: &Lattice, p: u64) -> Result<Option<Lattice>> {
    let n = lat.n();
    let pb = BigInt::from(p);

    // q = p^e with p^e >= n, so x -> x^q is the e-fold Frobenius on O/pO
    let mut q: u64 = p;
    while (q as usize) < n {
        q = q.checked_mul(p).ok_or_else(|| {
            Error::Internal("frobenius exponent overflow".into())
        })?;
    }

    let basis: Vec<QPoly> = (0..n).map(|i| lat.basis_poly(i)).collect();

    // radical of pO: left kernel of the Frobenius-power matrix mod p
    let mut frob_t = vec![vec![0u64; n]; n]; // transposed: column i = coords of b_i^q
    for (i, b) in basis.iter().enumerate() {
        let bq = b.pow_mod(q, f);
        let coords = lat.coords_of(&bq);
        for (j, c) in coords.iter().enumerate() {
            if !rational_is_integer(c) {
                return Err(Error::Internal("order not closed under powers".into()));
            }
            let r = num_integer::Integer::mod_floor(c.numer(), &pb);
            frob_t[j][i] = r.to_u64().expect("residue fits");
        }
    }
    let rad_kernel = kernel_mod_p(&frob_t, p);

    // I = radical lattice in order coordinates: kernel lifts plus p*identity
    let mut rad_rows: Vec<Vec<BigInt>> = Vec::with_capacity(rad_kernel.len() + n);
    for v in &rad_kernel {
        rad_rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
    }
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n];
        row[i] = pb.clone();
        rad_rows.push(row);
    }
    let t = hnf_row(&rad_rows);
    if t.len() != n {
        return Err(Error::Internal("radical lattice lost rank".into()));
    }

    // radical generators as field elements
    let gens: Vec<QPoly> = t
        .iter()
        .map(|row| {
            let mut g = QPoly::zero();
            for (k, c) in row.iter().enumerate() {
                g = g.add(&basis[k].mul_scalar(&BigRational::from_integer(c.clone())));
            }
            g
        })
        .collect();

    // coords of v (order coords, integral) in the radical basis t:
    // forward substitution against triangular t
    let rad_coords = |v: &[BigRational]| -> Result<Vec<BigInt>> {
        let mut c = vec![BigRational::zero(); n];
        for j in 0..n {
            let mut acc = v[j].clone();
            for (i, ci) in c.iter().enumerate().take(j) {
                acc -= ci * BigRational::from_integer(t[i][j].clone());
            }
            c[j] = acc / BigRational::from_integer(t[j][j].clone());
        }
        c.into_iter()
            .map(|x| {
                if rational_is_integer(&x) {
                    Ok(x.numer().clone())
                } else {
                    Err(Error::Internal("radical coords not integral".into()))
                }
            })
            .collect()
    };

    // conditions on c in F_p^n for x = sum c_i b_i to satisfy x*I <= p*I
    let mut cond_rows: Vec<Vec<u64>> = Vec::with_capacity(n * n);
    let mut prods: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    for b in basis.iter() {
        let mut per_gen = Vec::with_capacity(n);
        for g in gens.iter() {
            let prod = b.mul_mod(g, f);
            let oc = lat.coords_of(&prod);
            per_gen.push(rad_coords(&oc)?);
        }
        prods.push(per_gen);
    }
    for j in 0..n {
        for l in 0..n {
            let mut row = vec![0u64; n];
            for (i, per_gen) in prods.iter().enumerate() {
                let r = num_integer::Integer::mod_floor(&per_gen[j][l], &pb);
                row[i] = r.to_u64().expect("residue fits");
            }
            cond_rows.push(row);
        }
    }
    let sols = kernel_mod_p(&cond_rows, p);
    if sols.is_empty() {
        return Ok(None);
    }

    // O' = O + (1/p) * solutions; in power coordinates over den*p
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + sols.len());
    for row in &lat.mat {
        rows.push(row.iter().map(|e| e * &pb).collect());
    }
    for c in &sols {
        // x = (1/p) sum c_i b_i = (1/(den*p)) sum c_i mat[i]
        let mut row = vec![BigInt::zero(); n];
        for (i, &ci) in c.iter().enumerate() {
            let cb = BigInt::from(ci);
            for (k, e) in lat.mat[i].iter().enumerate() {
                row[k] += e * &cb;
            }
        }
        rows.push(row);
    }
    let new_lat = to_hnf_lattice(rows, &lat.den * &pb, n)?;
    if new_lat.den == lat.den && new_lat.mat == lat.mat {
        return Ok(None);
    }
    Ok(Some(new_lat))
}

pub fn maximal_order(f: &ZPoly) -> Result<OrderData> {
    let n = f.deg() as usize;
    if n == 1 {
        return Ok(OrderData {
            basis: vec![QPoly::one()],
            disc: BigInt::one(),
            index: BigInt::one(),
        });
    }
    let disc_f = discriminant(f);
    if disc_f.is_zero() {
        return Err(Error::ReduciblePolynomial(
            "polynomial has repeated roots".into(),
        ));
    }
    let factors = try_factor_bigint(&disc_f).ok_or_else(|| {
        Error::InvalidInput(
            "polynomial discriminant too large to factor at desk scale".into(),
        )
    })?;

    let fq = QPoly::from_zpoly(f);
    let mut lat = Lattice::identity(n);
    for (p, e) in &factors {
        if *e < 2 {
            continue;
        }
        let p64 = p.to_u64().ok_or_else(|| {
            Error::InvalidInput("ramified prime exceeds u64".into())
        })?;
        loop {
            match enlarge_at(&fq, &lat, p64)? {
                Some(next) => lat = next,
                None => break,
            }
        }
    }

    // index = den^n / det(mat); disc = disc_f / index^2
    let den_pow = num_traits::pow(lat.den.clone(), n);
    let det = lat.det();
    let (index, rem) = num_integer::Integer::div_rem(&den_pow, &det);
    if !rem.is_zero() {
        return Err(Error::Internal("order index not integral".into()));
    }
    let index = index.abs();
    let index_sq = &index * &index;
    let (disc, rem2) = num_integer::Integer::div_rem(&disc_f, &index_sq);
    if !rem2.is_zero() {
        return Err(Error::Internal("discriminant defect not a square".into()));
    }
    let basis = (0..n).map(|i| lat.basis_poly(i)).collect();
    Ok(OrderData { basis, disc, index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> ZPoly {
        ZPoly::from_i64(v)
    }

    #[test]
    fn gaussian_integers_already_maximal() {
        let od = maximal_order(&zp(&[1, 0, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(-4));
        assert_eq!(od.index, BigInt::one());
        assert_eq!(od.basis.len(), 2);
    }

    #[test]
    fn eisenstein_enlargement() {
        // Q(sqrt(-3)): equation order Z[sqrt(-3)] has index 2
        let od = maximal_order(&zp(&[3, 0, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(-3));
        assert_eq!(od.index, BigInt::from(2));
        // basis is 1, (a + x)/2 with a odd
        let b0 = od.basis[0].coords(2);
        assert!(b0[0].is_one() && b0[1].is_zero());
        let b1 = od.basis[1].coords(2);
        assert_eq!(*b1[1].denom(), BigInt::from(2));
        assert_eq!(*b1[0].denom(), BigInt::from(2));
    }

    #[test]
    fn cubic_index_two() {
        // x^3 - x - 4: disc -428 = -4*107, maximal order has disc -107
        let od = maximal_order(&zp(&[-4, -1, 0, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(-107));
        assert_eq!(od.index, BigInt::from(2));
    }

    #[test]
    fn pure_cubic_maximal() {
        let od = maximal_order(&zp(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(-108));
        assert_eq!(od.index, BigInt::one());
    }

    #[test]
    fn golden_ratio_field() {
        let od = maximal_order(&zp(&[-1, -1, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(5));
        assert_eq!(od.index, BigInt::one());
    }

    #[test]
    fn desk_sextic_index_88() {
        // disc(f) = -2^14 3^6 11^2; field discriminant -2^8 3^6 = -186624
        let od = maximal_order(&zp(&[5, 12, 3, -4, 3, 0, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(-186624));
        assert_eq!(od.index, BigInt::from(88));
    }

    #[test]
    fn wild_index_prime_power() {
        // x^2 + 7 at 2: disc -28, field disc -7, index 2
        let od = maximal_order(&zp(&[7, 0, 1])).unwrap();
        assert_eq!(od.disc, BigInt::from(-7));
        assert_eq!(od.index, BigInt::from(2));
    }
}
