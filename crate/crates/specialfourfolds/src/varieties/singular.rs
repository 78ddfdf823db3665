//! Singular loci of projective schemes and `K²` of smooth surfaces.
//!
//! The singular subscheme comes from codimension-size minors of the
//! Jacobian. `K²` is read off the Segre class of the surface in its
//! linear span: the projective degrees of the rational map defined by the
//! ideal generators determine the pushed-forward Segre class, hence the
//! degree of `c₂(T_S)`, and Noether's formula closes the loop with
//! `K² = 12·χ(O_S) − e(S)`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use super::ideal_ops::{restrict_polys, saturate_irrelevant, saturate_poly};
use super::VarietyError;
use crate::groebner::hilbert::hilbert;
use crate::groebner::Ideal;
use crate::polycore::{MatFp, Mono, Poly, PolyRing};
use crate::rng::SeedStream;

/// Rows are generators, columns are partial derivatives.
pub fn jacobian(gens: &[Poly]) -> Vec<Vec<Poly>> {
    gens.iter()
        .map(|g| (0..g.ring.nvars()).map(|v| g.derivative(v)).collect())
        .collect()
}

/// Determinant by Bareiss elimination; exact in any polynomial ring.
pub fn poly_det(ring: &Arc<PolyRing>, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return Poly::one(ring);
    }
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut prev = Poly::one(ring);
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(pr) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Poly::zero(ring);
        };
        if pr != k {
            a.swap(pr, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that can still move
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All `k × k` minors of a polynomial matrix.
pub fn minors(ring: &Arc<PolyRing>, m: &[Vec<Poly>], k: usize) -> Vec<Poly> {
    if m.is_empty() || m[0].len() < k || m.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rows in subsets(m.len(), k) {
        for cols in subsets(m[0].len(), k) {
            let sub: Vec<Vec<Poly>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            let d = poly_det(ring, &sub);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The singular subscheme: the ideal plus codimension-size Jacobian
/// minors, saturated. When the full minor count is unreasonable, `c+1`
/// random combinations of the generators stand in for the generator rows;
/// that preserves the singular locus for generic coefficients.
pub fn singular_scheme(i: &Ideal, codim: usize, seeds: &SeedStream) -> Ideal {
    let ring = &i.ring;
    let k = i.gens.len();
    let n = ring.nvars();
    let rows: Vec<Poly> = if binom(k, codim) * binom(n, codim) <= 4_000 {
        i.gens.clone()
    } else {
        let mut rng = seeds.stream("jacobian-compress");
        let p = ring.field.characteristic();
        (0..codim + 1)
            .map(|_| {
                let mut acc = Poly::zero(ring);
                for g in &i.gens {
                    acc = acc.add(&g.scale(rng.gen_range(1..p)));
                }
                acc
            })
            .collect()
    };
    let jac = jacobian(&rows);
    let mut gens = i.gens.clone();
    gens.extend(minors(ring, &jac, codim));
    saturate_irrelevant(&Ideal::new(ring.clone(), gens), &seeds.child("singular-sat"))
}

/// Length of the singular subscheme of a surface with isolated
/// singularities: the node count δ when every singular point is a node.
pub fn singular_delta(i: &Ideal, dim: i64, seeds: &SeedStream) -> Result<u64, VarietyError> {
    let codim = (i.ring.nvars() as i64 - 1 - dim) as usize;
    if codim == 0 {
        return Ok(0); // the scheme is its whole ambient space
    }
    let sing = singular_scheme(i, codim, seeds);
    if sing.is_unit() {
        return Ok(0);
    }
    let h = hilbert(&sing);
    if h.is_empty() {
        Ok(0)
    } else if h.dimension == 0 {
        Ok(h.degree)
    } else {
        Err(VarietyError::PositiveDimensionalSingularLocus(h.dimension))
    }
}

/// Cut the ideal down to the linear span of its zero set: solve the
/// degree-one part and substitute, returning the ideal of the same scheme
/// inside its span.
pub fn trim_linear_span(i: &Ideal) -> Ideal {
    let ring = &i.ring;
    let n = ring.nvars();
    let lins: Vec<&Poly> = i.gb().gens.iter().filter(|g| g.degree() == 1).collect();
    if lins.is_empty() {
        return i.clone();
    }
    let mut m = MatFp::zero(ring.field, lins.len(), n);
    for (r, l) in lins.iter().enumerate() {
        for (mono, c) in &l.terms {
            let v = (0..n).find(|&v| mono.e[v] == 1).unwrap();
            m[(r, v)] = *c;
        }
    }
    let pivots = m.rref();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..n).filter(|v| !pivot_set.contains(v)).collect();
    assert!(!free.is_empty(), "ideal contains every linear form");
    let target = PolyRing::grevlex(
        ring.field,
        &free.iter().map(|&v| ring.vars[v].as_str()).collect::<Vec<_>>(),
    );
    let mut images: Vec<Poly> = vec![Poly::zero(&target); n];
    for (slot, &v) in free.iter().enumerate() {
        images[v] = Poly::var(&target, slot);
    }
    for (r, &pv) in pivots.iter().enumerate() {
        // x_pv = -sum over free columns
        let terms: Vec<(Mono, u64)> = free
            .iter()
            .enumerate()
            .filter(|(_, &fv)| m[(r, fv)] != 0)
            .map(|(slot, &fv)| (Mono::var(slot), ring.field.neg(m[(r, fv)])))
            .collect();
        images[pv] = Poly::from_terms(&target, terms);
    }
    let gens: Vec<Poly> = i
        .gens
        .iter()
        .map(|g| g.substitute(&target, &images))
        .filter(|g| !g.is_zero())
        .collect();
    Ideal::new(target, gens)
}

/// `K²` of a smooth surface, via the Segre class of the surface in its
/// linear span. Requires a saturated ideal; the caller established
/// smoothness. `chi` is `χ(O_S)` and `deg_s` the surface degree.
pub fn chern_k2(
    sat: &Ideal,
    deg_s: i64,
    chi: i64,
    seeds: &SeedStream,
) -> Result<i64, VarietyError> {
    let trimmed = trim_linear_span(sat);
    let ring = trimmed.ring.clone();
    let n = ring.nvars() as i64 - 1;
    if trimmed.gens.is_empty() {
        // the surface is its own span
        assert_eq!(n, 2);
        return Ok(9);
    }
    assert!(n >= 3);

    // sections: generators raised to the top generator degree
    let dmax = trimmed.gens.iter().map(|g| g.degree()).max().unwrap() as u16;
    let mut sections: Vec<Poly> = Vec::new();
    for g in &trimmed.gens {
        let gap = dmax - g.degree() as u16;
        if gap == 0 {
            sections.push(g.clone());
        } else {
            for u in ring.monomials_of_degree(gap) {
                sections.push(g.mul_mono(&u, 1));
            }
        }
    }
    let sys_dim = {
        let monos = ring.monomials_of_degree(dmax);
        let col: std::collections::HashMap<[u8; crate::polycore::MAX_VARS], usize> =
            monos.iter().enumerate().map(|(j, m)| (m.e, j)).collect();
        let mut m = MatFp::zero(ring.field, sections.len(), monos.len());
        for (r, s) in sections.iter().enumerate() {
            for (mono, c) in &s.terms {
                m[(r, col[&mono.e])] = *c;
            }
        }
        m.rank() as i64
    };
    let d = dmax as i64;

    'attempt: for attempt in 0..8 {
        let mut rng = seeds.stream(&format!("k2-{attempt}"));
        let mut g = [0i64; 3]; // projective degrees g_{n-2}, g_{n-1}, g_n
        for (slot, idx) in (n - 2..=n).enumerate() {
            if idx >= sys_dim {
                g[slot] = 0;
                continue;
            }
            match projective_degree(&trimmed, &sections, idx, &mut rng) {
                Some(v) => g[slot] = v,
                None => continue 'attempt,
            }
        }
        let pw = |e: u32| d.pow(e);
        let e2 = pw((n - 2) as u32) - g[0];
        if e2 != deg_s {
            continue; // projection missed the surface cleanly
        }
        let e1 = pw((n - 1) as u32) - g[1] - (n - 1) * d * e2;
        let e0 = pw(n as u32) - g[2] - n * (n - 1) / 2 * d * d * e2 - n * d * e1;
        let euler = (n + 1) * n / 2 * deg_s + (n + 1) * e1 + e0;
        return Ok(12 * chi - euler);
    }
    Err(VarietyError::UnluckyProjection)
}

/// Degree of the closure of `φ⁻¹(generic Pⁿ⁻ⁱ) ∩ generic Pⁱ` for the map
/// `φ` given by `sections`: cut with `n-i` generic hyperplanes by
/// substitution, impose `i` generic combinations, and remove the base
/// locus by saturating at one generic element of the ideal.
fn projective_degree(
    trimmed: &Ideal,
    sections: &[Poly],
    i: i64,
    rng: &mut ChaCha8Rng,
) -> Option<i64> {
    let ring = trimmed.ring.clone();
    let n = ring.nvars() as i64 - 1;
    let p = ring.field.characteristic();
    let mut cur_ring = ring.clone();
    let mut polys: Vec<Poly> = sections.to_vec();
    let split = polys.len();
    polys.extend(trimmed.gens.iter().cloned());
    for _ in 0..(n - i) {
        let (r2, p2) = restrict_polys(&cur_ring, &polys, rng);
        cur_ring = r2;
        polys = p2;
    }
    let combo = |polys: &[Poly], rng: &mut ChaCha8Rng| {
        let mut acc = Poly::zero(&cur_ring);
        for q in polys {
            acc = acc.add(&q.scale(rng.gen_range(1..p)));
        }
        acc
    };
    let cuts: Vec<Poly> = (0..i).map(|_| combo(&polys[..split], rng)).collect();
    let f = combo(&polys[split..], rng);
    if f.is_zero() {
        return None;
    }
    let residual = saturate_poly(&Ideal::new(cur_ring.clone(), cuts), &f);
    if residual.is_unit() {
        return Some(0);
    }
    let h = hilbert(&residual);
    if h.is_empty() {
        Some(0)
    } else if h.dimension == 0 {
        Some(h.degree as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_ideal, parse_poly, PrimeField};

    fn ring(vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::grevlex(PrimeField::default_field(), vars)
    }

    fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> Ideal {
        Ideal::new(r.clone(), parse_ideal(r, gens).unwrap())
    }

    #[test]
    fn determinant_of_polynomial_matrices() {
        let r = ring(&["x", "y"]);
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let m = vec![vec![p("x"), p("y")], vec![p("y"), p("x")]];
        assert_eq!(format!("{}", poly_det(&r, &m)), "x^2-y^2");
        // row swap flips the sign
        let m2 = vec![vec![p("y"), p("x")], vec![p("x"), p("y")]];
        assert_eq!(format!("{}", poly_det(&r, &m2)), "-x^2+y^2");
        let sing = vec![vec![p("x"), p("x")], vec![p("y"), p("y")]];
        assert!(poly_det(&r, &sing).is_zero());
        // 3x3 against the rule of Sarrus on a known matrix
        let m3 = vec![
            vec![p("x"), p("y"), p("0")],
            vec![p("0"), p("x"), p("y")],
            vec![p("y"), p("0"), p("x")],
        ];
        assert_eq!(format!("{}", poly_det(&r, &m3)), "x^3+y^3");
    }

    #[test]
    fn subset_enumeration_is_complete() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(5, 3).len(), 10);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn cayley_cubic_has_four_nodes() {
        let r = ring(&["x", "y", "z", "w"]);
        let i = ideal(&r, &["x*y*z+x*y*w+x*z*w+y*z*w"]);
        let d = singular_delta(&i, 2, &SeedStream::new(11)).unwrap();
        assert_eq!(d, 4);
    }

    #[test]
    fn smooth_surfaces_have_no_nodes() {
        let r = ring(&["x", "y", "z", "w"]);
        let i = ideal(&r, &["x*w-y*z"]);
        assert_eq!(singular_delta(&i, 2, &SeedStream::new(12)).unwrap(), 0);
        // the cubic scroll in P^4
        let r5 = ring(&["a", "b", "c", "d", "e"]);
        let scroll = ideal(&r5, &["a*c-b^2", "a*e-b*d", "b*e-c*d"]);
        assert_eq!(singular_delta(&scroll, 2, &SeedStream::new(13)).unwrap(), 0);
    }

    #[test]
    fn quadric_cone_singularity_is_one_point() {
        let r = ring(&["x", "y", "z", "w"]);
        let i = ideal(&r, &["x*y-z^2"]);
        assert_eq!(singular_delta(&i, 2, &SeedStream::new(14)).unwrap(), 1);
    }

    #[test]
    fn positive_dimensional_singular_locus_is_reported() {
        let r = ring(&["x", "y", "z", "w"]);
        // two planes meeting in a line
        let i = ideal(&r, &["x*y"]);
        match singular_delta(&i, 2, &SeedStream::new(15)) {
            Err(VarietyError::PositiveDimensionalSingularLocus(d)) => assert_eq!(d, 1),
            other => panic!("wanted a positive-dimensional report, got {other:?}"),
        }
    }

    #[test]
    fn linear_span_trim_drops_to_the_span() {
        let r = ring(&["x", "y", "z", "w", "v"]);
        // a conic in the plane {w = v = 0}
        let i = ideal(&r, &["w", "v", "x^2+y*z"]);
        let t = trim_linear_span(&i);
        assert_eq!(t.ring.nvars(), 3);
        assert_eq!(t.gens.len(), 1);
        assert_eq!(t.gens[0].degree(), 2);
    }

    #[test]
    fn k2_of_quadric_veronese_and_scroll() {
        // smooth quadric in P^3
        let r = ring(&["x", "y", "z", "w"]);
        let q = ideal(&r, &["x*w-y*z"]);
        assert_eq!(chern_k2(&q, 2, 1, &SeedStream::new(21)).unwrap(), 8);

        // Veronese surface in P^5, K^2 of P^2
        let r6 = ring(&["a", "b", "c", "d", "e", "f"]);
        let ver = ideal(
            &r6,
            &["b^2-a*c", "e^2-c*f", "d^2-a*f", "b*e-c*d", "d*e-b*f", "a*e-b*d"],
        );
        assert_eq!(chern_k2(&ver, 4, 1, &SeedStream::new(22)).unwrap(), 9);

        // cubic scroll in P^4, a Hirzebruch surface
        let r5 = ring(&["a", "b", "c", "d", "e"]);
        let scroll = ideal(&r5, &["a*c-b^2", "a*e-b*d", "b*e-c*d"]);
        assert_eq!(chern_k2(&scroll, 3, 1, &SeedStream::new(23)).unwrap(), 8);
    }

    #[test]
    fn k2_of_a_plane_embedded_linearly() {
        let r = ring(&["x", "y", "z", "w"]);
        let i = ideal(&r, &["w"]);
        assert_eq!(chern_k2(&i, 1, 1, &SeedStream::new(24)).unwrap(), 9);
    }
}
