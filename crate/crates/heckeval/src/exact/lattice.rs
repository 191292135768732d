//! Lattice reduction and short-vector enumeration. Two regimes are needed:
//! fast f64 reduction + enumeration for ideal lattices under the trace form
//! (entries comfortably below 2^53, exactness restored by integer norm checks
//! downstream), and exact integer LLL for recognition lattices whose entries
//! are far beyond f64 range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Euclid, One, Zero};

// ---------------------------------------------------------------------------
// f64 lattices with integer coordinate tracking
// ---------------------------------------------------------------------------

/// Rows `real` are lattice basis vectors in R^m; `coords[i]` holds the
/// integer coordinates of real[i] with respect to the caller's original
/// basis, updated through every row operation.
#[derive(Debug, Clone)]
pub struct F64Lattice {
    pub real: Vec<Vec<f64>>,
    pub coords: Vec<Vec<i64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl F64Lattice {
    #[must_use]
    pub fn new(real: Vec<Vec<f64>>) -> Self {
        let n = real.len();
        let coords = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        F64Lattice { real, coords }
    }

    fn gram_schmidt(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
        let n = self.real.len();
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        let mut norms = vec![0.0; n];
        for i in 0..n {
            let mut v = self.real[i].clone();
            for j in 0..i {
                let m = if norms[j] > 0.0 {
                    dot(&self.real[i], &star[j]) / norms[j]
                } else {
                    0.0
                };
                mu[i][j] = m;
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= m * sk;
                }
            }
            norms[i] = dot(&v, &v);
            star.push(v);
        }
        (star, mu, norms)
    }

    fn row_sub(&mut self, i: usize, j: usize, q: i64) {
        if q == 0 {
            return;
        }
        let qf = q as f64;
        for k in 0..self.real[i].len() {
            self.real[i][k] -= qf * self.real[j][k];
        }
        for k in 0..self.coords[i].len() {
            self.coords[i][k] -= q * self.coords[j][k];
        }
    }

    /// Textbook LLL with delta = 0.99; f64 precision suffices for the
    /// small dimensions and moderate entries used here.
    pub fn lll(&mut self) {
        let n = self.real.len();
        if n <= 1 {
            return;
        }
        let delta = 0.99;
        let mut k = 1usize;
        let mut guard = 0usize;
        while k < n {
            guard += 1;
            if guard > 100_000 {
                // f64 rounding can in principle cycle; basis remains valid,
                // enumeration bounds just get slightly worse.
                break;
            }
            let (_, mu, norms) = self.gram_schmidt();
            // Size-reduce row k against previous rows.
            for j in (0..k).rev() {
                let q = mu[k][j].round();
                if q.abs() >= 1.0 {
                    self.row_sub(k, j, q as i64);
                }
            }
            let (_, mu2, norms2) = self.gram_schmidt();
            if norms2[k] >= (delta - mu2[k][k - 1] * mu2[k][k - 1]) * norms2[k - 1] {
                k += 1;
            } else {
                self.real.swap(k, k - 1);
                self.coords.swap(k, k - 1);
                k = k.max(2) - 1;
            }
            let _ = norms;
        }
    }

    /// All nonzero lattice vectors with squared length <= radius_sq, up to
    /// sign (the representative has positive first nonzero coordinate in the
    /// reduced basis), as coordinates in the caller's original basis.
    /// Stops early at `limit` vectors.
    #[must_use]
    pub fn enumerate(&self, radius_sq: f64, limit: usize) -> Vec<Vec<i64>> {
        let n = self.real.len();
        let (_, mu, norms) = self.gram_schmidt();
        if norms.iter().any(|&b| b <= 0.0) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        // Depth-first from the last coordinate; centers c_i depend on the
        // choices above.
        fn recurse(
            i: isize,
            n: usize,
            x: &mut Vec<i64>,
            mu: &Vec<Vec<f64>>,
            norms: &Vec<f64>,
            remaining: f64,
            lat: &F64Lattice,
            out: &mut Vec<Vec<i64>>,
            limit: usize,
        ) {
            if out.len() >= limit {
                return;
            }
            if i < 0 {
                if x.iter().any(|&v| v != 0) {
                    // Canonical sign: first nonzero coordinate positive.
                    let first = x.iter().find(|&&v| v != 0).copied().unwrap_or(0);
                    if first > 0 {
                        let m = lat.coords[0].len();
                        let mut c = vec![0i64; m];
                        for (xi, row) in x.iter().zip(&lat.coords) {
                            for (ck, rk) in c.iter_mut().zip(row) {
                                *ck += xi * rk;
                            }
                        }
                        out.push(c);
                    }
                }
                return;
            }
            let iu = i as usize;
            let center: f64 = -(iu + 1..n).map(|j| mu[j][iu] * x[j] as f64).sum::<f64>();
            let spread = (remaining / norms[iu]).max(0.0).sqrt();
            let lo = (center - spread - 1e-9).ceil() as i64;
            let hi = (center + spread + 1e-9).floor() as i64;
            for v in lo..=hi {
                x[iu] = v;
                let d = v as f64 - center;
                let used = norms[iu] * d * d;
                if used <= remaining + 1e-9 {
                    recurse(i - 1, n, x, mu, norms, remaining - used, lat, out, limit);
                }
            }
            x[iu] = 0;
        }
        recurse(
            n as isize - 1,
            n,
            &mut x,
            &mu,
            &norms,
            radius_sq,
            self,
            &mut out,
            limit,
        );
        out
    }
}

// ---------------------------------------------------------------------------
// exact integer LLL
// ---------------------------------------------------------------------------

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Exact LLL (delta = 3/4) on integer row vectors; returns the reduced rows.
/// Dimensions stay small (<= ~12) but the entries may be hundreds of digits,
/// so all Gram-Schmidt data is exact rational.
#[must_use]
pub fn lll_bigint(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    if n <= 1 {
        return rows.to_vec();
    }
    let mut b: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));

    let gram = |b: &Vec<Vec<BigRational>>| -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>) {
        let n = b.len();
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut norms = vec![BigRational::zero(); n];
        for i in 0..n {
            let mut v = b[i].clone();
            for j in 0..i {
                let m = if norms[j].is_zero() {
                    BigRational::zero()
                } else {
                    dot_q(&b[i], &star[j]) / &norms[j]
                };
                mu[i][j] = m.clone();
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &m * sk;
                }
            }
            norms[i] = dot_q(&v, &v);
            star.push(v);
        }
        (star, mu, norms)
    };

    let round_q = |x: &BigRational| -> BigInt {
        // Nearest integer, ties toward zero are fine for size reduction.
        let two = BigInt::from(2);
        let num = x.numer() * &two + x.denom();
        let den = x.denom() * &two;
        num.div_euclid(&den)
    };

    let mut k = 1usize;
    while k < n {
        let (_, mu, _) = gram(&b);
        for j in (0..k).rev() {
            let q = round_q(&mu[k][j]);
            if !q.is_zero() {
                let qq = BigRational::from_integer(q);
                for idx in 0..b[k].len() {
                    let s = &qq * &b[j][idx];
                    b[k][idx] = &b[k][idx] - s;
                }
            }
        }
        let (_, mu2, norms2) = gram(&b);
        let lhs = norms2[k].clone();
        let rhs = (&delta - &mu2[k][k - 1] * &mu2[k][k - 1]) * &norms2[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }

    b.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    assert!(x.denom().is_one(), "LLL left the integer lattice");
                    x.numer().clone()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn lll_f64_finds_short_vector() {
        // Lattice spanned by (201, 37) and (1648, 297): contains (5, -8)
        // since 8*(201,37) - (1648,297)*...; verify via brute force that the
        // reduced basis first vector is genuinely shortest.
        let mut lat = F64Lattice::new(vec![vec![201.0, 37.0], vec![1648.0, 297.0]]);
        lat.lll();
        let shortest_reduced = lat
            .real
            .iter()
            .map(|v| dot(v, v))
            .fold(f64::INFINITY, f64::min);
        // Brute force over small combinations of the original basis.
        let mut best = f64::INFINITY;
        for a in -50i64..=50 {
            for b in -50i64..=50 {
                if a == 0 && b == 0 {
                    continue;
                }
                let x = 201.0 * a as f64 + 1648.0 * b as f64;
                let y = 37.0 * a as f64 + 297.0 * b as f64;
                best = best.min(x * x + y * y);
            }
        }
        assert!((shortest_reduced - best).abs() < 1e-6,
            "reduced {shortest_reduced} vs brute {best}");
    }

    #[test]
    fn lll_transform_tracks_coordinates() {
        let rows = vec![vec![201.0, 37.0], vec![1648.0, 297.0]];
        let mut lat = F64Lattice::new(rows.clone());
        lat.lll();
        for (v, c) in lat.real.iter().zip(&lat.coords) {
            let x = c[0] as f64 * rows[0][0] + c[1] as f64 * rows[1][0];
            let y = c[0] as f64 * rows[0][1] + c[1] as f64 * rows[1][1];
            assert!((x - v[0]).abs() < 1e-6 && (y - v[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn enumerate_z2_disc() {
        let lat = F64Lattice::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        // Nonzero vectors with norm^2 <= 2, up to sign: (1,0), (0,1), (1,1),
        // (1,-1): exactly 4.
        let pts = lat.enumerate(2.0, 100);
        assert_eq!(pts.len(), 4);
        for p in &pts {
            let n2 = p[0] * p[0] + p[1] * p[1];
            assert!(n2 >= 1 && n2 <= 2);
        }
    }

    #[test]
    fn enumerate_respects_metric_after_lll() {
        let mut lat = F64Lattice::new(vec![vec![201.0, 37.0], vec![1648.0, 297.0]]);
        lat.lll();
        // The shortest vector has norm^2 = 1025 (found by the brute force in
        // the test above), so radius 2000 is nonempty.
        let pts = lat.enumerate(2000.0, 1000);
        for c in &pts {
            let x = 201.0 * c[0] as f64 + 1648.0 * c[1] as f64;
            let y = 37.0 * c[0] as f64 + 297.0 * c[1] as f64;
            assert!(x * x + y * y <= 2000.0 + 1e-6);
        }
        assert!(!pts.is_empty());
    }

    #[test]
    fn lll_bigint_knapsack_relation() {
        // a3 = a1 + a2 with a scaling column K forces the short relation
        // (1, 1, -1, 0).
        let k = BigInt::from(1_000_000_000_000i64);
        let a1 = BigInt::from(31415926i64);
        let a2 = BigInt::from(27182818i64);
        let a3 = &a1 + &a2;
        let rows = vec![
            vec![BigInt::one(), BigInt::zero(), BigInt::zero(), &a1 * &k],
            vec![BigInt::zero(), BigInt::one(), BigInt::zero(), &a2 * &k],
            vec![BigInt::zero(), BigInt::zero(), BigInt::one(), &a3 * &k],
        ];
        let red = lll_bigint(&rows);
        let has_relation = red.iter().any(|r| {
            r[3].is_zero()
                && r[0].abs() == BigInt::one()
                && r[1].abs() == BigInt::one()
                && r[2].abs() == BigInt::one()
        });
        assert!(has_relation, "reduced rows: {red:?}");
    }
}
