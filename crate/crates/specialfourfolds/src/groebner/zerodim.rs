//! Zero-dimensional decomposition through a primitive element.
//!
//! A random linear form acts on the finite quotient algebra; its
//! characteristic polynomial factors into one irreducible power per closed
//! point (shape lemma), giving residue-field degree and multiplicity per
//! cluster. A second, independent form must reproduce the same cluster
//! shape or the projection is declared unlucky and retried with fresh
//! randomness, at most eight times.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use super::hilbert::hilbert;
use super::{buchberger_in, GroebnerBasis, Ideal, Selection};
use crate::polycore::unifactor::factor;
use crate::polycore::{MatFp, Mono, Poly, PolyRing};
use crate::rng::SeedStream;

/// One closed point of a finite scheme.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cluster {
    pub residue_degree: u32,
    pub multiplicity: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum ZeroDimError {
    #[error("scheme has positive dimension {0}")]
    PositiveDimensional(i64),
    #[error("no separating projection found after {0} attempts")]
    UnluckyProjection(u32),
}

/// The finite quotient algebra of a zero-dimensional affine ideal: a
/// monomial basis and normal forms against the Groebner basis.
struct QuotientAlgebra {
    ring: Arc<PolyRing>,
    gb: GroebnerBasis,
    basis: Vec<Mono>,
}

impl QuotientAlgebra {
    /// None if the quotient is not finite-dimensional (or exceeds `cap`).
    fn new(ring: Arc<PolyRing>, gb: GroebnerBasis, cap: usize) -> Option<Self> {
        if gb.gens.iter().any(|g| g.is_constant() && !g.is_zero()) {
            return Some(QuotientAlgebra { ring, gb, basis: Vec::new() });
        }
        let n = ring.nvars();
        // every variable must appear as a pure power among the leading terms
        for v in 0..n {
            let has_power = gb.lts.iter().any(|m| {
                m.e[v] > 0 && (0..n).all(|w| w == v || m.e[w] == 0)
            });
            if !has_power {
                return None;
            }
        }
        // enumerate standard monomials breadth-first
        let mut basis = vec![Mono::one()];
        let mut seen = std::collections::HashSet::new();
        seen.insert(Mono::one().e);
        let mut head = 0;
        while head < basis.len() {
            let m = basis[head];
            head += 1;
            for v in 0..n {
                let cand = m.mul(&Mono::var(v));
                if seen.contains(&cand.e) {
                    continue;
                }
                if gb.lts.iter().any(|lt| lt.divides(&cand)) {
                    continue;
                }
                seen.insert(cand.e);
                basis.push(cand);
                if basis.len() > cap {
                    return None;
                }
            }
        }
        basis.sort_by(|a, b| ring.order.cmp(a, b, n));
        Some(QuotientAlgebra { ring, gb, basis })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn index_of(&self, m: &Mono) -> usize {
        self.basis
            .binary_search_by(|b| self.ring.order.cmp(b, m, self.ring.nvars()))
            .expect("normal form left the standard-monomial span")
    }

    /// Matrix of multiplication by `g` on the quotient, columns indexed by
    /// the standard monomial basis.
    fn mult_matrix(&self, g: &Poly) -> MatFp {
        let n = self.dim();
        let mut out = MatFp::zero(self.ring.field, n, n);
        for (j, b) in self.basis.iter().enumerate() {
            let prod = g.mul(&Poly::monomial(&self.ring, *b, 1));
            let nf = self.gb.normal_form(&prod);
            for (m, c) in &nf.terms {
                out[(self.index_of(m), j)] = *c;
            }
        }
        out
    }

    fn random_linear_form(&self, rng: &mut ChaCha8Rng) -> Poly {
        let p = self.ring.field.characteristic();
        let mut acc = Poly::zero(&self.ring);
        for v in 0..self.ring.nvars() {
            acc = acc.add(&Poly::monomial(&self.ring, Mono::var(v), rng.gen_range(1..p)));
        }
        acc
    }
}

fn clusters_via_form(q: &QuotientAlgebra, rng: &mut ChaCha8Rng) -> Vec<Cluster> {
    let ell = q.random_linear_form(rng);
    let m = q.mult_matrix(&ell);
    let cp = m.charpoly();
    let mut out: Vec<Cluster> = factor(&cp, rng)
        .into_iter()
        .map(|(q, mult)| Cluster { residue_degree: q.deg() as u32, multiplicity: mult })
        .collect();
    out.sort();
    out
}

/// Dehomogenize at the last variable, after the linear change `x -> M x`.
fn affine_slice(ideal: &Ideal, change: Option<&MatFp>) -> (Arc<PolyRing>, Vec<Poly>) {
    let ring = &ideal.ring;
    let n = ring.nvars();
    let affine = PolyRing::grevlex(
        ring.field,
        &ring.vars[..n - 1].iter().map(|s| s.as_str()).collect::<Vec<_>>(),
    );
    let images: Vec<Poly> = (0..n)
        .map(|i| {
            let mut acc = Poly::zero(&affine);
            for j in 0..n {
                let c = match change {
                    Some(m) => m[(i, j)],
                    None => u64::from(i == j),
                };
                if c == 0 {
                    continue;
                }
                let term = if j + 1 == n {
                    Poly::constant(&affine, c)
                } else {
                    Poly::monomial(&affine, Mono::var(j), c)
                };
                acc = acc.add(&term);
            }
            acc
        })
        .collect();
    let gens = ideal.gens.iter().map(|g| g.substitute(&affine, &images)).collect();
    (affine, gens)
}

/// Decompose a zero-dimensional scheme into closed points.
///
/// Homogeneous input is read projectively: a random coordinate change is
/// applied and the last coordinate dehomogenized, with the cluster degrees
/// checked against the projective degree. Inhomogeneous input is taken as
/// an affine scheme in all variables, as-is.
pub fn decompose_zero_dim(ideal: &Ideal, seeds: &SeedStream) -> Result<Vec<Cluster>, ZeroDimError> {
    let homogeneous = ideal.gens.iter().all(|g| g.is_homogeneous());
    let expected = if homogeneous && !ideal.gens.is_empty() {
        let h = hilbert(ideal);
        if h.is_empty() {
            return Ok(Vec::new());
        }
        if h.dimension != 0 {
            return Err(ZeroDimError::PositiveDimensional(h.dimension));
        }
        Some(h.degree as usize)
    } else {
        None
    };

    const TRIES: u32 = 8;
    for attempt in 0..TRIES {
        let mut rng = seeds.stream(&format!("zerodim-{attempt}"));
        let (aring, agens, cap) = if homogeneous && !ideal.gens.is_empty() {
            let change = random_invertible(ideal.ring.field, ideal.ring.nvars(), &mut rng);
            let (r, g) = affine_slice(ideal, Some(&change));
            (r, g, expected.unwrap())
        } else {
            (ideal.ring.clone(), ideal.gens.clone(), 60_000)
        };
        let gb = buchberger_in(aring.clone(), &agens, Selection::Sugar);
        let Some(q) = QuotientAlgebra::new(aring, gb, cap) else {
            if homogeneous {
                continue; // chart missed structure; new coordinates
            }
            return Err(ZeroDimError::PositiveDimensional(1));
        };
        if let Some(exp) = expected {
            if q.dim() != exp {
                continue; // points at infinity in this chart
            }
        }
        let a = clusters_via_form(&q, &mut rng);
        let b = clusters_via_form(&q, &mut rng);
        if a == b {
            return Ok(a);
        }
    }
    Err(ZeroDimError::UnluckyProjection(TRIES))
}

/// Simple rational points of a zero-dimensional projective scheme, in the
/// original homogeneous coordinates (last coordinate normalized where
/// possible). Multiple points only appear once; non-rational or
/// non-reduced points are skipped.
pub fn rational_points(ideal: &Ideal, seeds: &SeedStream) -> Result<Vec<Vec<u64>>, ZeroDimError> {
    assert!(ideal.gens.iter().all(|g| g.is_homogeneous()));
    let h = hilbert(ideal);
    if h.is_empty() {
        return Ok(Vec::new());
    }
    if h.dimension != 0 {
        return Err(ZeroDimError::PositiveDimensional(h.dimension));
    }
    let f = ideal.ring.field;
    let n = ideal.ring.nvars();

    const TRIES: u32 = 8;
    for attempt in 0..TRIES {
        let mut rng = seeds.stream(&format!("ratpoints-{attempt}"));
        let change = random_invertible(f, n, &mut rng);
        let (aring, agens) = affine_slice(ideal, Some(&change));
        let gb = buchberger_in(aring.clone(), &agens, Selection::Sugar);
        let Some(q) = QuotientAlgebra::new(aring.clone(), gb, h.degree as usize) else {
            continue;
        };
        if q.dim() != h.degree as usize {
            continue;
        }
        let ell = q.random_linear_form(&mut rng);
        let m_ell = q.mult_matrix(&ell);
        let cp = m_ell.charpoly();
        let mt = transpose(&m_ell);
        let coord_mats: Vec<MatFp> = (0..aring.nvars())
            .map(|v| transpose(&q.mult_matrix(&Poly::var(&aring, v))))
            .collect();

        let mut pts = Vec::new();
        let mut ok = true;
        for (fac, mult) in factor(&cp, &mut rng) {
            if fac.deg() != 1 || mult != 1 {
                continue;
            }
            let lambda = f.neg(fac.c[0]);
            // eigenvector of the transpose: evaluation at the point
            let mut shifted = mt.clone();
            for i in 0..shifted.rows {
                shifted[(i, i)] = f.sub(shifted[(i, i)], lambda);
            }
            let ker = shifted.kernel();
            if ker.len() != 1 {
                ok = false;
                break;
            }
            let v = &ker[0];
            let k = v.iter().position(|&c| c != 0).unwrap();
            let vk_inv = f.inv(v[k]);
            let mut affine_pt: Vec<u64> = coord_mats
                .iter()
                .map(|m| f.mul(m.mul_vec(v)[k], vk_inv))
                .collect();
            affine_pt.push(1);
            // undo the coordinate change: x = change * y
            let pt: Vec<u64> = (0..n)
                .map(|i| {
                    let mut acc = 0;
                    for j in 0..n {
                        acc = f.add(acc, f.mul(change[(i, j)], affine_pt[j]));
                    }
                    acc
                })
                .collect();
            debug_assert!(ideal.gens.iter().all(|g| g.eval(&pt) == 0));
            pts.push(pt);
        }
        if ok {
            pts.sort();
            return Ok(pts);
        }
    }
    Err(ZeroDimError::UnluckyProjection(TRIES))
}

fn transpose(m: &MatFp) -> MatFp {
    let mut out = MatFp::zero(m.field, m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(j, i)] = m[(i, j)];
        }
    }
    out
}

pub fn random_invertible(f: crate::polycore::PrimeField, n: usize, rng: &mut ChaCha8Rng) -> MatFp {
    let p = f.characteristic();
    loop {
        let mut m = MatFp::zero(f, n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.gen_range(0..p);
            }
        }
        if m.rank() == n {
            return m;
        }
    }
}
