//! Ideal-theoretic operations built on elimination: intersection, colon,
//! saturation, and variable elimination.
//!
//! Extra variables are always prepended so a `Block` order can eliminate
//! them; results come back re-embedded in the caller's ring (or in a
//! smaller ring for [`eliminate`]). Saturation by the irrelevant ideal
//! uses a generic linear form with an independent second form as witness,
//! falling back to the per-variable intersection if the two disagree.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::groebner::{buchberger_in, Ideal, Selection};
use crate::polycore::{Mono, MonomialOrder, Poly, PolyRing, MAX_VARS};
use crate::rng::SeedStream;

/// Ring with `k` fresh elimination variables in front of `ring`'s.
fn elim_ring(ring: &PolyRing, k: usize) -> Arc<PolyRing> {
    let mut vars: Vec<String> = (0..k).map(|i| format!("@{i}")).collect();
    vars.extend(ring.vars.iter().cloned());
    PolyRing::new(ring.field, vars, MonomialOrder::Block { elim: k })
}

/// Re-index variables: `map[i]` is the target slot for source variable `i`,
/// or `None` to require that the variable does not occur.
fn remap(p: &Poly, target: &Arc<PolyRing>, map: &[Option<usize>]) -> Poly {
    let n = p.ring.nvars();
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut e = [0u8; MAX_VARS];
            for i in 0..n {
                match map[i] {
                    Some(j) => e[j] = m.e[i],
                    None => assert_eq!(m.e[i], 0, "variable survives projection"),
                }
            }
            (Mono::from_exps(&e[..target.nvars()]), *c)
        })
        .collect();
    Poly::from_terms(target, terms)
}

fn shift_up(p: &Poly, er: &Arc<PolyRing>, k: usize) -> Poly {
    let map: Vec<Option<usize>> = (0..p.ring.nvars()).map(|i| Some(i + k)).collect();
    remap(p, er, &map)
}

fn shift_down(p: &Poly, ring: &Arc<PolyRing>, k: usize) -> Poly {
    let map: Vec<Option<usize>> = (0..p.ring.nvars())
        .map(|i| if i < k { None } else { Some(i - k) })
        .collect();
    remap(p, ring, &map)
}

fn uses_first(p: &Poly, k: usize) -> bool {
    p.terms.iter().any(|(m, _)| (0..k).any(|i| m.e[i] > 0))
}

/// `a ∩ b` via a single tag variable: `⟨t·a, (1-t)·b⟩ ∩ k[x]`.
pub fn intersect(a: &Ideal, b: &Ideal) -> Ideal {
    assert!(a.ring.same_vars(&b.ring), "intersect needs one ring");
    if a.gens.is_empty() || b.gens.is_empty() {
        return Ideal::zero(a.ring.clone());
    }
    let er = elim_ring(&a.ring, 1);
    let t = Poly::var(&er, 0);
    let one_minus_t = Poly::one(&er).sub(&t);
    let mut gens: Vec<Poly> = a.gens.iter().map(|g| t.mul(&shift_up(g, &er, 1))).collect();
    gens.extend(b.gens.iter().map(|g| one_minus_t.mul(&shift_up(g, &er, 1))));
    let gb = buchberger_in(er.clone(), &gens, Selection::Sugar);
    let kept: Vec<Poly> = gb
        .gens
        .iter()
        .filter(|g| !uses_first(g, 1))
        .map(|g| shift_down(g, &a.ring, 1))
        .collect();
    Ideal::new(a.ring.clone(), kept)
}

/// `i : f` for a single nonzero `f`, via `(i ∩ ⟨f⟩) / f`.
pub fn colon_poly(i: &Ideal, f: &Poly) -> Ideal {
    assert!(!f.is_zero());
    let fi = Ideal::new(i.ring.clone(), vec![f.clone()]);
    let inter = intersect(i, &fi);
    let gens = inter.gens.iter().map(|g| g.div_exact(f)).collect();
    Ideal::new(i.ring.clone(), gens)
}

/// `i : j`, the ideal quotient.
pub fn colon(i: &Ideal, j: &Ideal) -> Ideal {
    assert!(!j.gens.is_empty(), "colon by the zero ideal");
    let mut acc: Option<Ideal> = None;
    for f in &j.gens {
        let q = colon_poly(i, f);
        acc = Some(match acc {
            None => q,
            Some(a) => intersect(&a, &q),
        });
    }
    acc.unwrap()
}

/// `i : f^∞` by adjoining `t·f - 1` and eliminating `t`.
pub fn saturate_poly(i: &Ideal, f: &Poly) -> Ideal {
    assert!(!f.is_zero());
    let er = elim_ring(&i.ring, 1);
    let t = Poly::var(&er, 0);
    let mut gens: Vec<Poly> = i.gens.iter().map(|g| shift_up(g, &er, 1)).collect();
    gens.push(t.mul(&shift_up(f, &er, 1)).sub(&Poly::one(&er)));
    let gb = buchberger_in(er.clone(), &gens, Selection::Sugar);
    let kept: Vec<Poly> = gb
        .gens
        .iter()
        .filter(|g| !uses_first(g, 1))
        .map(|g| shift_down(g, &i.ring, 1))
        .collect();
    Ideal::new(i.ring.clone(), kept)
}

/// `i : j^∞`.
pub fn saturate(i: &Ideal, j: &Ideal) -> Ideal {
    assert!(!j.gens.is_empty(), "saturate by the zero ideal");
    let mut acc: Option<Ideal> = None;
    for f in &j.gens {
        let s = saturate_poly(i, f);
        acc = Some(match acc {
            None => s,
            Some(a) => intersect(&a, &s),
        });
    }
    acc.unwrap()
}

pub(crate) fn random_linear(ring: &Arc<PolyRing>, rng: &mut ChaCha8Rng) -> Poly {
    let p = ring.field.characteristic();
    let terms = (0..ring.nvars()).map(|v| (Mono::var(v), rng.gen_range(1..p))).collect();
    Poly::from_terms(ring, terms)
}

/// Saturation of a homogeneous ideal by the irrelevant maximal ideal.
///
/// Two saturations by independent generic linear forms must agree; a
/// generic form only ever lies in the irrelevant associated prime, so the
/// agreement certifies both. On repeated disagreement (vanishingly rare),
/// falls back to intersecting the saturations by every coordinate.
pub fn saturate_irrelevant(i: &Ideal, seeds: &SeedStream) -> Ideal {
    if i.gens.is_empty() {
        return i.clone();
    }
    let mut rng = seeds.stream("saturate-irrelevant");
    for _ in 0..4 {
        let l1 = random_linear(&i.ring, &mut rng);
        let l2 = random_linear(&i.ring, &mut rng);
        let s1 = saturate_poly(i, &l1);
        let s2 = saturate_poly(i, &l2);
        if s1.equals(&s2) {
            return s1;
        }
    }
    let mut acc: Option<Ideal> = None;
    for v in 0..i.ring.nvars() {
        let s = saturate_poly(i, &Poly::var(&i.ring, v));
        acc = Some(match acc {
            None => s,
            Some(a) => intersect(&a, &s),
        });
    }
    acc.unwrap()
}

/// Eliminate the listed variables, returning an ideal in a grevlex ring on
/// the remaining ones (in their original relative order).
pub fn eliminate(i: &Ideal, vars: &[usize]) -> Ideal {
    let n = i.ring.nvars();
    let k = vars.len();
    assert!(vars.iter().all(|&v| v < n));
    let mut in_block = vec![false; n];
    for &v in vars {
        assert!(!in_block[v], "repeated variable");
        in_block[v] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&v| !in_block[v]).collect();
    assert!(!kept.is_empty(), "cannot eliminate every variable");

    let mut names: Vec<String> = vars.iter().map(|&v| i.ring.vars[v].clone()).collect();
    names.extend(kept.iter().map(|&v| i.ring.vars[v].clone()));
    let er = PolyRing::new(i.ring.field, names, MonomialOrder::Block { elim: k });
    let mut map = vec![None; n];
    for (slot, &v) in vars.iter().chain(kept.iter()).enumerate() {
        map[v] = Some(slot);
    }
    let gens: Vec<Poly> = i.gens.iter().map(|g| remap(g, &er, &map)).collect();
    let gb = buchberger_in(er.clone(), &gens, Selection::Sugar);

    let out = PolyRing::grevlex(
        i.ring.field,
        &kept.iter().map(|&v| i.ring.vars[v].as_str()).collect::<Vec<_>>(),
    );
    let down: Vec<Option<usize>> =
        (0..n).map(|slot| if slot < k { None } else { Some(slot - k) }).collect();
    let projected: Vec<Poly> = gb
        .gens
        .iter()
        .filter(|g| !uses_first(g, k))
        .map(|g| remap(g, &out, &down))
        .collect();
    Ideal::new(out, projected)
}

/// Substitute a generic hyperplane into every polynomial, dropping the last
/// variable: the section of the scheme by that hyperplane, one dimension
/// down. Output order matches input order, zeros included.
pub fn restrict_polys(
    ring: &Arc<PolyRing>,
    polys: &[Poly],
    rng: &mut ChaCha8Rng,
) -> (Arc<PolyRing>, Vec<Poly>) {
    let n = ring.nvars();
    assert!(n >= 2, "nothing left to restrict");
    let p = ring.field.characteristic();
    let target = PolyRing::new(
        ring.field,
        ring.vars[..n - 1].to_vec(),
        MonomialOrder::GrevLex,
    );
    // x_{n-1} = sum c_v x_v for random c
    let sub: Vec<(Mono, u64)> =
        (0..n - 1).map(|v| (Mono::var(v), rng.gen_range(1..p))).collect();
    let last = Poly::from_terms(&target, sub);
    let mut images: Vec<Poly> = (0..n - 1).map(|v| Poly::var(&target, v)).collect();
    images.push(last);
    let out = polys.iter().map(|g| g.substitute(&target, &images)).collect();
    (target, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_ideal, parse_poly, PrimeField};

    fn ring2() -> Arc<PolyRing> {
        PolyRing::grevlex(PrimeField::default_field(), &["x", "y"])
    }

    fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> Ideal {
        Ideal::new(r.clone(), parse_ideal(r, gens).unwrap())
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = ring2();
        let got = intersect(&ideal(&r, &["x"]), &ideal(&r, &["y"]));
        assert!(got.equals(&ideal(&r, &["x*y"])));
    }

    #[test]
    fn colon_of_monomial_ideal() {
        let r = ring2();
        let i = ideal(&r, &["x^2", "x*y"]);
        let q = colon_poly(&i, &parse_poly(&r, "x").unwrap());
        assert!(q.equals(&ideal(&r, &["x", "y"])));
    }

    #[test]
    fn saturation_strips_the_divisor_part() {
        let r = ring2();
        let i = ideal(&r, &["x*y"]);
        let s = saturate(&i, &ideal(&r, &["x"]));
        assert!(s.equals(&ideal(&r, &["y"])));
        // and again: already saturated
        let s2 = saturate(&s, &ideal(&r, &["x"]));
        assert!(s2.equals(&s));
        // a pure power saturates to the unit ideal
        let u = saturate(&ideal(&r, &["x^2"]), &ideal(&r, &["x"]));
        assert!(u.is_unit());
    }

    #[test]
    fn irrelevant_saturation_removes_embedded_origin() {
        let r = ring2();
        // x * (x, y): the origin component is irrelevant in P^1
        let i = ideal(&r, &["x^2", "x*y"]);
        let s = saturate_irrelevant(&i, &SeedStream::new(3));
        assert!(s.equals(&ideal(&r, &["x"])));
        // saturating an already saturated ideal changes nothing
        let again = saturate_irrelevant(&s, &SeedStream::new(4));
        assert!(again.equals(&s));
    }

    #[test]
    fn elimination_projects_a_parameterized_curve() {
        let r = PolyRing::grevlex(PrimeField::default_field(), &["t", "x", "y"]);
        // x = t^2, y = t^3 projects to the cuspidal cubic
        let i = ideal(&r, &["x-t^2", "y-t^3"]);
        let out = eliminate(&i, &[0]);
        assert_eq!(out.ring.vars, vec!["x", "y"]);
        let expect = Ideal::new(
            out.ring.clone(),
            parse_ideal(&out.ring, &["y^2-x^3"]).unwrap(),
        );
        assert!(out.equals(&expect));
    }

    #[test]
    fn colon_against_full_ideal_matches_poly_colon_intersection() {
        let r = PolyRing::grevlex(PrimeField::default_field(), &["x", "y", "z"]);
        let i = ideal(&r, &["x*y", "x*z"]);
        let j = ideal(&r, &["y", "z"]);
        // x*(y,z) : (y,z) = (x) ∩ ((x*y,x*z):y etc.)
        let q = colon(&i, &j);
        assert!(q.contains(&parse_poly(&r, "x").unwrap()));
        assert!(!q.contains(&parse_poly(&r, "y").unwrap()));
    }

    #[test]
    fn restriction_drops_one_variable() {
        let r = PolyRing::grevlex(PrimeField::default_field(), &["x", "y", "z"]);
        let i = ideal(&r, &["x^2+y^2+z^2"]);
        let mut rng = SeedStream::new(7).stream("t");
        let (tring, polys) = restrict_polys(&r, &i.gens, &mut rng);
        assert_eq!(tring.nvars(), 2);
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].degree(), 2);
        assert!(polys[0].is_homogeneous());
    }
}
