//! Towers k0 ⊂ k ⊂ K of number fields with a CM layer, their complex
//! embeddings in a canonical order, and the discriminant-type invariants
//! attached to a choice of relative basis.
//!
//! K is any number field containing a CM subfield; k is its maximal CM
//! subfield and k0 the maximal totally real subfield of k. Embeddings are
//! ordered so that restriction and complex conjugation act by position
//! arithmetic alone: the CM-field embeddings list the chosen
//! representatives of each conjugate pair first, then their conjugates in
//! the same order, and the embeddings of K are grouped into contiguous
//! fibers over that list.

pub mod closure;
pub mod galois;
pub mod numfield;
pub mod order;

use crate::error::{Error, Result};
use crate::exact::qpoly::QPoly;
use crate::exact::zpoly::ZPoly;
use crate::field_tower::closure::{min_separation, nearest_root, roots_in_field};
use crate::field_tower::galois::{analyze_cm, CmStructure};
use crate::field_tower::numfield::{canonical_roots, express_in_powers, minpoly_in, NumberField};
use crate::mp::cplx::{abs_c, conjugation_pairing, cplx, det_complex, eval_qpoly_c};
use crate::mp::real::{real_from_bigint, real_zero, Prec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::ops::Pow;
use rug::{Complex, Float};

/// Input description of a tower: the defining polynomial of K, optional
/// pinned polynomials for the CM and totally real layers, an optional
/// relative basis of K over the CM layer, and the working precision.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub poly: ZPoly,
    pub cm_poly: Option<ZPoly>,
    pub real_poly: Option<ZPoly>,
    pub basis: Option<Vec<QPoly>>,
    pub digits: u32,
}

impl TowerSpec {
    #[must_use]
    pub fn new(poly: ZPoly, digits: u32) -> TowerSpec {
        TowerSpec {
            poly,
            cm_poly: None,
            real_poly: None,
            basis: None,
            digits,
        }
    }
}

/// One complex embedding: the image of the field generator and the index
/// of that image in the canonical (value-sorted) root list.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub root: Complex,
    pub canonical: usize,
}

#[derive(Debug, Clone)]
pub struct FieldTower {
    pub top: NumberField,
    /// Maximal CM subfield of `top`.
    pub cm: NumberField,
    /// Maximal totally real subfield of `cm`.
    pub real: NumberField,
    /// Relative degree [K : k].
    pub n: usize,
    /// Absolute degree [k0 : Q]; also the number of conjugate pairs of k.
    pub r: usize,
    pub galois: CmStructure,
    /// Generator of the CM layer as a polynomial in the generator of K.
    pub cm_in_top: QPoly,
    /// Generator of the real layer as a polynomial in the CM generator.
    pub real_in_cm: QPoly,
    /// k-basis of K, as polynomials in the generator of K. Defaults to
    /// the power basis 1, x, ..., x^(n-1).
    pub relative_basis: Vec<QPoly>,
    pub digits: u32,
    /// Permutation applied to the ascending real embeddings of k0.
    pub seed_order: Vec<usize>,
    pub emb_real: Vec<Embedding>,
    pub emb_cm: Vec<Embedding>,
    /// Fiber-contiguous: positions i*n..(i+1)*n lie above emb_cm[i].
    pub emb_top: Vec<Embedding>,
}

impl FieldTower {
    pub fn build(spec: &TowerSpec) -> Result<FieldTower> {
        if spec.digits < 30 {
            return Err(Error::PrecisionTooLow(format!(
                "{} digits requested, at least 30 required",
                spec.digits
            )));
        }
        let top = NumberField::build(spec.poly.clone())?;
        let galois = analyze_cm(&spec.poly)?;
        let mq = galois.closure.min_poly_q();
        let deg_m = galois.closure.degree;
        let dk = galois.cm_degree();
        let dk0 = galois.real_degree();
        if dk != 2 * dk0 {
            return Err(Error::Internal(
                "CM degree is not twice the real degree".into(),
            ));
        }

        let (cm, cm_elem) = Self::pin_layer(
            &galois,
            spec.cm_poly.as_ref(),
            &galois.cm_poly,
            &galois.cm_gen,
            dk,
            &top,
            "CM",
        )?;
        let (real, real_elem) = Self::pin_layer(
            &galois,
            spec.real_poly.as_ref(),
            &galois.real_poly,
            &galois.real_gen,
            dk0,
            &top,
            "real",
        )?;

        let cm_in_top = express_in_powers(
            &mq,
            &galois.closure.roots[0],
            top.degree,
            &cm_elem,
            deg_m,
        )
        .ok_or_else(|| {
            Error::InconsistentTower("CM generator does not lie in the field".into())
        })?;
        let real_in_cm = express_in_powers(&mq, &cm_elem, dk, &real_elem, deg_m).ok_or_else(
            || Error::InconsistentTower("real generator does not lie in the CM subfield".into()),
        )?;

        let n = top.degree / dk;
        let r = dk0;
        let fq = top.poly_q();
        let relative_basis = match &spec.basis {
            Some(b) => {
                if b.len() != n {
                    return Err(Error::InconsistentTower(format!(
                        "relative basis has {} elements, the relative degree is {}",
                        b.len(),
                        n
                    )));
                }
                b.iter().map(|e| e.rem(&fq)).collect()
            }
            None => (0..n).map(|i| QPoly::x().pow_mod(i as u64, &fq)).collect(),
        };

        let mut tower = FieldTower {
            top,
            cm,
            real,
            n,
            r,
            galois,
            cm_in_top,
            real_in_cm,
            relative_basis,
            digits: spec.digits,
            seed_order: (0..r).collect(),
            emb_real: Vec::new(),
            emb_cm: Vec::new(),
            emb_top: Vec::new(),
        };
        tower.compute_embeddings()?;
        Ok(tower)
    }

    /// Resolve one subfield layer: honor a user-pinned polynomial when
    /// given, otherwise reduce the detected generator to a small one.
    fn pin_layer(
        galois: &CmStructure,
        pinned: Option<&ZPoly>,
        detected_poly: &ZPoly,
        detected_gen: &QPoly,
        want_deg: usize,
        top: &NumberField,
        label: &str,
    ) -> Result<(NumberField, QPoly)> {
        let mq = galois.closure.min_poly_q();
        match pinned {
            Some(up) => {
                let nf = NumberField::build(up.clone())?;
                if nf.degree != want_deg {
                    return Err(Error::InconsistentTower(format!(
                        "{label} polynomial has degree {}, the detected subfield has degree {}",
                        nf.degree, want_deg
                    )));
                }
                let elem = if *up == *detected_poly {
                    detected_gen.clone()
                } else {
                    let roots = roots_in_field(up, detected_poly)?;
                    let root = roots.into_iter().next().ok_or_else(|| {
                        Error::InconsistentTower(format!(
                            "{label} polynomial has no root in the detected subfield"
                        ))
                    })?;
                    root.compose_mod(detected_gen, &mq)
                };
                Ok((nf, elem))
            }
            None => {
                if *detected_poly == top.poly {
                    return Ok((top.clone(), detected_gen.clone()));
                }
                let (p, g) = reduce_generator(detected_poly)?;
                Ok((NumberField::build(p)?, g.compose_mod(detected_gen, &mq)))
            }
        }
    }

    /// New tower with embeddings ordered over the given permutation of the
    /// ascending real embeddings of k0.
    pub fn order_embeddings(&self, seed: &[usize]) -> Result<FieldTower> {
        let mut sorted = seed.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.r).collect::<Vec<usize>>() {
            return Err(Error::InvalidInput(format!(
                "seed order must be a permutation of 0..{}",
                self.r
            )));
        }
        let mut t = self.clone();
        t.seed_order = seed.to_vec();
        t.compute_embeddings()?;
        Ok(t)
    }

    /// New tower recomputed at a different working precision.
    pub fn with_digits(&self, digits: u32) -> Result<FieldTower> {
        if digits < 30 {
            return Err(Error::PrecisionTooLow(format!(
                "{digits} digits requested, at least 30 required"
            )));
        }
        let mut t = self.clone();
        t.digits = digits;
        t.compute_embeddings()?;
        Ok(t)
    }

    fn compute_embeddings(&mut self) -> Result<()> {
        let prec = Prec::from_digits(self.digits);
        let rt0 = canonical_roots(&self.real.poly, prec)?;
        for z in &rt0 {
            if !z.imag().is_zero() {
                return Err(Error::InconsistentTower(
                    "the real layer has a complex embedding".into(),
                ));
            }
        }
        self.emb_real = self
            .seed_order
            .iter()
            .map(|&j| Embedding {
                root: rt0[j].clone(),
                canonical: j,
            })
            .collect();

        let rtk = canonical_roots(&self.cm.poly, prec)?;
        if rtk.len() != 2 * self.r {
            return Err(Error::Internal("CM layer has the wrong degree".into()));
        }
        for z in &rtk {
            if z.imag().is_zero() {
                return Err(Error::InconsistentTower(
                    "the CM layer has a real embedding".into(),
                ));
            }
        }
        let sep0 = min_separation(&rt0);
        let mut fiber_cm: Vec<Vec<usize>> = vec![Vec::new(); self.r];
        for (i, z) in rtk.iter().enumerate() {
            let v = eval_qpoly_c(&self.real_in_cm, z);
            let j = nearest_root(&v, &rt0, &sep0).ok_or_else(|| {
                Error::InconsistentTower(
                    "restriction to the real layer missed every embedding".into(),
                )
            })?;
            fiber_cm[j].push(i);
        }
        let pair_cm = conjugation_pairing(&rtk)?;
        self.emb_cm = vec![
            Embedding {
                root: cplx(real_zero(prec), real_zero(prec)),
                canonical: usize::MAX,
            };
            2 * self.r
        ];
        for pos in 0..self.r {
            let f = &fiber_cm[self.seed_order[pos]];
            if f.len() != 2 || pair_cm[f[0]] != f[1] {
                return Err(Error::InconsistentTower(
                    "CM-layer fiber is not a conjugate pair".into(),
                ));
            }
            let rep = if rtk[f[0]].imag().is_sign_positive() {
                f[0]
            } else {
                f[1]
            };
            self.emb_cm[pos] = Embedding {
                root: rtk[rep].clone(),
                canonical: rep,
            };
            self.emb_cm[self.r + pos] = Embedding {
                root: rtk[pair_cm[rep]].clone(),
                canonical: pair_cm[rep],
            };
        }

        let rt_top = canonical_roots(&self.top.poly, prec)?;
        let sepk = min_separation(&rtk);
        let mut fiber_top: Vec<Vec<usize>> = vec![Vec::new(); rtk.len()];
        for (i, z) in rt_top.iter().enumerate() {
            let v = eval_qpoly_c(&self.cm_in_top, z);
            let j = nearest_root(&v, &rtk, &sepk).ok_or_else(|| {
                Error::InconsistentTower(
                    "restriction to the CM layer missed every embedding".into(),
                )
            })?;
            fiber_top[j].push(i);
        }
        let pair_top = conjugation_pairing(&rt_top)?;
        self.emb_top = Vec::with_capacity(rt_top.len());
        for pos in 0..self.r {
            let f = &fiber_top[self.emb_cm[pos].canonical];
            if f.len() != self.n {
                return Err(Error::InconsistentTower(
                    "embedding fiber has the wrong size".into(),
                ));
            }
            for &i in f {
                self.emb_top.push(Embedding {
                    root: rt_top[i].clone(),
                    canonical: i,
                });
            }
        }
        // conjugate fibers inherit the order of their representatives so
        // that conjugation is position preserving
        for pos in 0..self.r {
            let expected = &fiber_top[self.emb_cm[self.r + pos].canonical];
            for t in 0..self.n {
                let c = pair_top[self.emb_top[pos * self.n + t].canonical];
                if !expected.contains(&c) {
                    return Err(Error::InconsistentTower(
                        "conjugation does not permute the embedding fibers".into(),
                    ));
                }
                self.emb_top.push(Embedding {
                    root: rt_top[c].clone(),
                    canonical: c,
                });
            }
        }
        Ok(())
    }

    /// Embeddings of K above the CM-layer embedding at the given position.
    #[must_use]
    pub fn fiber(&self, iota: usize) -> &[Embedding] {
        &self.emb_top[iota * self.n..(iota + 1) * self.n]
    }

    /// Position of the conjugate of the CM-layer embedding at `pos`.
    #[must_use]
    pub fn conj_cm(&self, pos: usize) -> usize {
        (pos + self.r) % (2 * self.r)
    }

    /// Position of the conjugate of the K embedding at `pos`.
    #[must_use]
    pub fn conj_top(&self, pos: usize) -> usize {
        let (fib, off) = (pos / self.n, pos % self.n);
        self.conj_cm(fib) * self.n + off
    }

    /// CM-layer embedding under the K embedding at `pos`.
    #[must_use]
    pub fn restrict_top(&self, pos: usize) -> usize {
        pos / self.n
    }

    /// Position of the K embedding whose root has the given canonical
    /// index.
    #[must_use]
    pub fn position_of_canonical(&self, canonical: usize) -> usize {
        self.emb_top
            .iter()
            .position(|e| e.canonical == canonical)
            .expect("every canonical root index appears in the embedding order")
    }

    /// Square root of the discriminant of the real layer: the positive
    /// real root for positive discriminant, the positive imaginary root
    /// otherwise. The branch is fixed so downstream signs are coherent.
    #[must_use]
    pub fn delta0(&self) -> Complex {
        let prec = Prec::from_digits(self.digits);
        let d = real_from_bigint(&self.real.disc, prec);
        if self.real.disc.is_negative() {
            cplx(real_zero(prec), (-d).sqrt())
        } else {
            cplx(d.sqrt(), real_zero(prec))
        }
    }

    /// Determinant of the matrix [tau_i(alpha_j)] where tau_i runs over
    /// the fiber above the CM-layer embedding at position `iota` and
    /// alpha_j over the relative basis.
    pub fn delta(&self, iota: usize) -> Result<Complex> {
        if iota >= 2 * self.r {
            return Err(Error::InvalidInput(format!(
                "embedding position {iota} out of range 0..{}",
                2 * self.r
            )));
        }
        let prec = Prec::from_digits(self.digits);
        let mut m: Vec<Vec<Complex>> = self
            .fiber(iota)
            .iter()
            .map(|e| {
                self.relative_basis
                    .iter()
                    .map(|a| eval_qpoly_c(a, &e.root))
                    .collect()
            })
            .collect();
        let mut hadamard = real_zero(prec) + 1u32;
        for row in &m {
            let mut s = real_zero(prec);
            for z in row {
                s += abs_c(z).square();
            }
            hadamard *= s.sqrt();
        }
        let det = det_complex(&mut m);
        let tol = hadamard * Float::with_val(prec.bits(), 10u32).pow(8 - self.digits as i32);
        if abs_c(&det) <= tol {
            return Err(Error::SingularMatrix(
                "relative basis is linearly dependent over the CM layer at working precision"
                    .into(),
            ));
        }
        Ok(det)
    }
}

/// The maximal CM subfield as a standalone field, with a reduced defining
/// polynomial when the subfield is proper.
pub fn maximal_cm_subfield(f: &ZPoly) -> Result<NumberField> {
    let galois = analyze_cm(f)?;
    if galois.stab_cm == galois.stab_k_field {
        return NumberField::build(f.clone());
    }
    let (p, _) = reduce_generator(&galois.cm_poly)?;
    NumberField::build(p)
}

/// Replace the generator of Q[z]/(mp0) by an integral element whose
/// minimal polynomial has small height. Candidates are drawn from the
/// integral basis, centered by their trace; the choice is deterministic.
/// Returns the new polynomial and the new generator in powers of z.
fn reduce_generator(mp0: &ZPoly) -> Result<(ZPoly, QPoly)> {
    let d = mp0.deg();
    if d == 1 {
        return Ok((mp0.clone(), QPoly::x()));
    }
    let nf = NumberField::build(mp0.clone())?;
    let mp0q = QPoly::from_zpoly(mp0);
    let mut cands: Vec<QPoly> = vec![QPoly::x()];
    for i in 1..d {
        cands.push(nf.integral_basis[i].clone());
    }
    for i in 1..d {
        for j in (i + 1)..d {
            cands.push(nf.integral_basis[i].add(&nf.integral_basis[j]));
            cands.push(nf.integral_basis[i].sub(&nf.integral_basis[j]));
        }
    }
    let dq = BigRational::from_integer(BigInt::from(d as i64));
    let mut best: Option<(BigInt, Vec<BigInt>, ZPoly, QPoly)> = None;
    for c in cands {
        let mp = minpoly_in(&mp0q, &c, d);
        if mp.deg() != d {
            continue;
        }
        let mean = nf.trace(&c) / &dq;
        let fl = mean.floor().to_integer();
        for t in [fl.clone(), fl + BigInt::one()] {
            let tq = BigRational::from_integer(t);
            let shifted = mp.compose(&QPoly::new(vec![tq.clone(), BigRational::one()]));
            let Some(zp) = shifted.to_zpoly() else {
                continue;
            };
            let height = zp
                .c
                .iter()
                .map(num_traits::Signed::abs)
                .max()
                .unwrap_or_else(BigInt::zero);
            let better = match &best {
                None => true,
                Some((bh, bc, _, _)) => (&height, &zp.c) < (bh, bc),
            };
            if better {
                let gen = c.sub(&QPoly::constant(tq));
                best = Some((height, zp.c.clone(), zp.clone(), gen));
            }
        }
    }
    let (_, _, poly, gen) = best.ok_or_else(|| {
        Error::Internal("no full-degree generator candidate for the subfield".into())
    })?;
    Ok((poly, gen))
}
