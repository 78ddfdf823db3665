//! Buchberger's algorithm with the sugar selection strategy and
//! Gebauer-Moeller pair elimination.
//!
//! The output of [`buchberger`] is always the reduced Groebner basis:
//! monic, auto-reduced, pairwise non-divisible leading terms, sorted
//! ascending by leading term. Reduced bases are unique for a fixed ring
//! and order, which downstream code relies on for reproducibility.

use std::sync::Arc;

use crate::polycore::{Mono, Poly, PolyRing};

/// A (not necessarily reduced) Groebner basis together with its ring and
/// cached leading terms.
#[derive(Clone)]
pub struct GroebnerBasis {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<Poly>,
    pub lts: Vec<Mono>,
    pub reduced: bool,
}

impl GroebnerBasis {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Poly>, reduced: bool) -> Self {
        let lts = gens.iter().map(|g| g.lm()).collect();
        GroebnerBasis { ring, gens, lts, reduced }
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        assert!(
            self.ring.same_vars(&f.ring),
            "normal form of a polynomial from a different ring"
        );
        reduce_full(f, &self.gens)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }
}

impl std::fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroebnerBasis({} gens, reduced={})", self.gens.len(), self.reduced)
    }
}

/// How the next S-pair is chosen. `Sugar` is the default everywhere;
/// the alternatives exist so tests can confirm the reduced basis does not
/// depend on the strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Sugar,
    Degree,
    FirstIn,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u16,
}

/// `a - k * m * g` for term slices sorted descending; single merge pass.
fn merge_sub(
    ring: &PolyRing,
    a: &[(Mono, u64)],
    k: u64,
    m: Mono,
    g: &[(Mono, u64)],
) -> Vec<(Mono, u64)> {
    let f = ring.field;
    let n = ring.nvars();
    let mut out = Vec::with_capacity(a.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < g.len() {
        let gm = m.mul(&g[j].0);
        match ring.order.cmp(&a[i].0, &gm, n) {
            std::cmp::Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((gm, f.neg(f.mul(k, g[j].1))));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = f.sub(a[i].1, f.mul(k, g[j].1));
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &g[j..] {
        out.push((m.mul(&t.0), f.neg(f.mul(k, t.1))));
    }
    out
}

/// Full normal form: no term of the result is divisible by any leading term
/// of `gens`. Zero generators are skipped.
pub fn reduce_full(fp: &Poly, gens: &[Poly]) -> Poly {
    reduce_with_sugar(fp, 0, gens, &[], &mut 0)
}

/// `sugars[i]` is the sugar degree of `gens[i]`; pass an empty slice to fall
/// back to plain degrees (only the selection heuristic is affected).
fn reduce_with_sugar(
    fp: &Poly,
    fsugar: u16,
    gens: &[Poly],
    sugars: &[u16],
    sugar_out: &mut u16,
) -> Poly {
    let ring = fp.ring.clone();
    let field = ring.field;
    let mut sugar = fsugar;
    let mut work: Vec<(Mono, u64)> = fp.terms.clone();
    let mut done: Vec<(Mono, u64)> = Vec::new();
    let mut i = 0;
    'term: while i < work.len() {
        let (t, c) = work[i];
        for (gi, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let lt = g.lm();
            if lt.deg <= t.deg && lt.divides(&t) {
                let m = t.quot(&lt);
                let k = field.div(c, g.lc());
                let gsugar = sugars.get(gi).copied().unwrap_or(g.degree() as u16);
                sugar = sugar.max(gsugar + m.deg);
                let merged = merge_sub(&ring, &work[i + 1..], k, m, &g.terms[1..]);
                work.truncate(i);
                work.extend(merged);
                continue 'term;
            }
        }
        done.push((t, c));
        i += 1;
    }
    *sugar_out = sugar;
    Poly { ring, terms: done }
}

/// Gebauer-Moeller update: prune `pairs` against the new element `t` (index
/// `t_idx` in `bp`), then push the surviving new pairs.
fn update_pairs(bp: &[Poly], bs: &[u16], pairs: &mut Vec<Pair>, t_idx: usize) {
    let lt_t = bp[t_idx].lm();
    let sugar_t = bs[t_idx];

    let cand: Vec<Pair> = (0..t_idx)
        .map(|i| {
            let lt_i = bp[i].lm();
            let lcm = lt_i.lcm(&lt_t);
            let sugar = (bs[i] + (lcm.deg - lt_i.deg))
                .max(sugar_t + (lcm.deg - lt_t.deg));
            Pair { i, j: t_idx, lcm, sugar }
        })
        .collect();
    let coprime = |p: &Pair| p.lcm.deg == bp[p.i].lm().deg + lt_t.deg;

    // M criterion: drop candidates whose lcm is strictly refined by another
    let mut keep = vec![true; cand.len()];
    for a in 0..cand.len() {
        for b in 0..cand.len() {
            if a != b && cand[b].lcm != cand[a].lcm && cand[b].lcm.divides(&cand[a].lcm) {
                keep[a] = false;
                break;
            }
        }
    }
    // F criterion: one survivor per equal-lcm class, and none at all if the
    // class contains a coprime pair (its S-polynomial reduces to zero anyway)
    for a in 0..cand.len() {
        if !keep[a] {
            continue;
        }
        let class: Vec<usize> = (0..cand.len())
            .filter(|&b| keep[b] && cand[b].lcm == cand[a].lcm)
            .collect();
        let any_coprime = class.iter().any(|&b| coprime(&cand[b]));
        for (rank, &b) in class.iter().enumerate() {
            keep[b] = !any_coprime && rank == 0;
        }
    }
    // B criterion (Buchberger's first): drop coprime survivors
    for a in 0..cand.len() {
        if keep[a] && coprime(&cand[a]) {
            keep[a] = false;
        }
    }
    // chain criterion on the old pair set
    pairs.retain(|p| {
        !(lt_t.divides(&p.lcm)
            && bp[p.i].lm().lcm(&lt_t) != p.lcm
            && bp[p.j].lm().lcm(&lt_t) != p.lcm)
    });
    for (idx, p) in cand.into_iter().enumerate() {
        if keep[idx] {
            pairs.push(p);
        }
    }
}

fn select_pair(ring: &PolyRing, pairs: &mut Vec<Pair>, strategy: Selection) -> Pair {
    let n = ring.nvars();
    let mut best = 0;
    for k in 1..pairs.len() {
        let better = match strategy {
            Selection::Sugar => {
                let a = &pairs[k];
                let b = &pairs[best];
                (a.sugar, a.lcm.deg)
                    .cmp(&(b.sugar, b.lcm.deg))
                    .then_with(|| ring.order.cmp(&a.lcm, &b.lcm, n))
                    .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
                    .is_lt()
            }
            Selection::Degree => {
                let a = &pairs[k];
                let b = &pairs[best];
                a.lcm
                    .deg
                    .cmp(&b.lcm.deg)
                    .then_with(|| ring.order.cmp(&a.lcm, &b.lcm, n))
                    .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
                    .is_lt()
            }
            Selection::FirstIn => {
                (pairs[k].j, pairs[k].i).cmp(&(pairs[best].j, pairs[best].i)).is_lt()
            }
        };
        if better {
            best = k;
        }
    }
    pairs.swap_remove(best)
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Poly]) -> GroebnerBasis {
    buchberger_with(gens, Selection::Sugar)
}

pub fn buchberger_with(gens: &[Poly], strategy: Selection) -> GroebnerBasis {
    let ring = gens
        .first()
        .map(|g| g.ring.clone())
        .expect("buchberger needs at least the ring; pass the zero ideal explicitly");
    buchberger_in(ring, gens, strategy)
}

pub fn buchberger_in(ring: Arc<PolyRing>, gens: &[Poly], strategy: Selection) -> GroebnerBasis {
    let mut inputs: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    for g in &inputs {
        assert!(ring.same_vars(&g.ring), "generators from different rings");
    }
    // deterministic start: ascending by (degree, leading monomial)
    inputs.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| ring.order.cmp(&a.lm(), &b.lm(), ring.nvars()))
            .then_with(|| a.terms.len().cmp(&b.terms.len()))
    });

    let mut bp: Vec<Poly> = Vec::new();
    let mut bs: Vec<u16> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for g in inputs {
        // skip inputs already reducing to zero; keeps the pair set small
        let mut s = g.degree() as u16;
        let red = reduce_with_sugar(&g, s, &bp, &bs, &mut s);
        if red.is_zero() {
            continue;
        }
        bp.push(red);
        bs.push(s);
        update_pairs(&bp, &bs, &mut pairs, bp.len() - 1);
    }

    while !pairs.is_empty() {
        let p = select_pair(&ring, &mut pairs, strategy);
        let (fi, fj) = (&bp[p.i], &bp[p.j]);
        let mi = p.lcm.quot(&fi.lm());
        let mj = p.lcm.quot(&fj.lm());
        // lc_j * mi * fi - lc_i * mj * fj, leading terms cancel
        let a = fi.mul_mono(&mi, fj.lc());
        let spoly = Poly {
            ring: ring.clone(),
            terms: merge_sub(&ring, &a.terms, fi.lc(), mj, &fj.terms),
        };
        if spoly.is_zero() {
            continue;
        }
        let mut s = p.sugar;
        let red = reduce_with_sugar(&spoly, p.sugar, &bp, &bs, &mut s);
        if red.is_zero() {
            continue;
        }
        bp.push(red);
        bs.push(s);
        update_pairs(&bp, &bs, &mut pairs, bp.len() - 1);
    }

    let reduced = interreduce(&ring, bp);
    GroebnerBasis::new(ring, reduced, true)
}

/// Minimalize and tail-reduce a Groebner basis; result is the reduced basis,
/// monic, sorted ascending by leading term.
fn interreduce(ring: &Arc<PolyRing>, mut polys: Vec<Poly>) -> Vec<Poly> {
    let n = ring.nvars();
    polys.sort_by(|a, b| ring.order.cmp(&a.lm(), &b.lm(), n));
    let mut minimal: Vec<Poly> = Vec::new();
    for p in polys {
        if !minimal.iter().any(|q| q.lm().divides(&p.lm())) {
            minimal.push(p);
        }
    }
    let snapshot = minimal.clone();
    for i in 0..minimal.len() {
        let others: Vec<Poly> = snapshot
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        minimal[i] = reduce_full(&minimal[i], &others).monic();
    }
    minimal
}

/// Normal form of `f` against the reduced basis of the ideal generated by
/// `gens`; convenience wrapper used by membership checks in tests.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Poly {
    gb.normal_form(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_poly, MonomialOrder, PrimeField};

    fn ring2_lex() -> Arc<PolyRing> {
        PolyRing::new(
            PrimeField::default_field(),
            vec!["x".into(), "y".into()],
            MonomialOrder::Lex,
        )
    }

    fn ring(vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::grevlex(PrimeField::default_field(), vars)
    }

    #[test]
    fn normal_form_single_division() {
        // x^2 against {x - y} under lex x > y reduces to y^2
        let r = ring2_lex();
        let f = parse_poly(&r, "x^2").unwrap();
        let g = parse_poly(&r, "x-y").unwrap();
        let gb = buchberger(&[g]);
        assert_eq!(format!("{}", gb.normal_form(&f)), "y^2");
    }

    #[test]
    fn normal_form_of_member_is_zero_and_one_survives() {
        let r = ring(&["x", "y", "z"]);
        let g1 = parse_poly(&r, "x^2-y*z").unwrap();
        let g2 = parse_poly(&r, "x*y-z^2").unwrap();
        let gb = buchberger(&[g1.clone(), g2.clone()]);
        let h = parse_poly(&r, "y^2-x*z").unwrap();
        let member = g1.mul(&h).add(&g2.mul(&g2));
        assert!(gb.normal_form(&member).is_zero());
        let one = Poly::constant(&r, 1);
        assert_eq!(format!("{}", gb.normal_form(&one)), "1");
    }

    #[test]
    fn principal_and_monomial_ideals() {
        let r = ring(&["x", "y"]);
        let f = parse_poly(&r, "2*x^2-2*y^2").unwrap();
        let gb = buchberger(&[f]);
        assert_eq!(gb.gens.len(), 1);
        assert_eq!(format!("{}", gb.gens[0]), "x^2-y^2");
        let gb2 = buchberger(&[parse_poly(&r, "x").unwrap(), parse_poly(&r, "y").unwrap()]);
        let mut lts: Vec<String> = gb2.gens.iter().map(|g| format!("{g}")).collect();
        lts.sort();
        assert_eq!(lts, vec!["x", "y"]);
    }

    #[test]
    fn katsura_like_closure() {
        // a small non-trivial system; checks S-pair closure by asserting
        // every S-polynomial of the output reduces to zero
        let r = ring(&["x", "y", "z"]);
        let gens = vec![
            parse_poly(&r, "x^2+2*y^2+2*z^2-x").unwrap(),
            parse_poly(&r, "2*x*y+2*y*z-y").unwrap(),
            parse_poly(&r, "x+2*y+2*z-1").unwrap(),
        ];
        let gb = buchberger(&gens);
        for i in 0..gb.gens.len() {
            for j in i + 1..gb.gens.len() {
                let (fi, fj) = (&gb.gens[i], &gb.gens[j]);
                let lcm = fi.lm().lcm(&fj.lm());
                let a = fi.mul_mono(&lcm.quot(&fi.lm()), fj.lc());
                let b = fj.mul_mono(&lcm.quot(&fj.lm()), fi.lc());
                assert!(gb.normal_form(&a.sub(&b)).is_zero());
            }
        }
        // original generators are members
        for g in &gens {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn idempotent_on_reduced_output() {
        let r = ring(&["x", "y", "z", "w"]);
        let gens = vec![
            parse_poly(&r, "x*z-y^2").unwrap(),
            parse_poly(&r, "x*w-y*z").unwrap(),
            parse_poly(&r, "y*w-z^2").unwrap(),
        ];
        let gb = buchberger(&gens);
        let gb2 = buchberger(&gb.gens);
        let a: Vec<String> = gb.gens.iter().map(|g| format!("{g}")).collect();
        let b: Vec<String> = gb2.gens.iter().map(|g| format!("{g}")).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn strategies_agree_on_reduced_basis() {
        let r = ring(&["x", "y", "z"]);
        let gens = vec![
            parse_poly(&r, "x^2*y-z^3").unwrap(),
            parse_poly(&r, "x*z-y^2").unwrap(),
            parse_poly(&r, "y*z^2-x^2").unwrap(),
        ];
        let a = buchberger_with(&gens, Selection::Sugar);
        let b = buchberger_with(&gens, Selection::Degree);
        let c = buchberger_with(&gens, Selection::FirstIn);
        let fa: Vec<String> = a.gens.iter().map(|g| format!("{g}")).collect();
        let fb: Vec<String> = b.gens.iter().map(|g| format!("{g}")).collect();
        let fc: Vec<String> = c.gens.iter().map(|g| format!("{g}")).collect();
        assert_eq!(fa, fb);
        assert_eq!(fa, fc);
    }

    #[test]
    fn pluecker_quadrics_are_their_own_reduced_basis() {
        // sub-Pfaffians of a generic 5x5 antisymmetric matrix
        let vars = [
            "p01", "p02", "p03", "p04", "p12", "p13", "p14", "p23", "p24", "p34",
        ];
        let r = ring(&vars);
        let pf = [
            "p12*p34-p13*p24+p14*p23",
            "p02*p34-p03*p24+p04*p23",
            "p01*p34-p03*p14+p04*p13",
            "p01*p24-p02*p14+p04*p12",
            "p01*p23-p02*p13+p03*p12",
        ];
        let gens: Vec<Poly> = pf.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
        let gb = buchberger(&gens);
        assert_eq!(gb.gens.len(), 5);
        assert!(gb.gens.iter().all(|g| g.degree() == 2));
        for g in &gens {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn twisted_cubic_lex_eliminates() {
        // lex GB of the twisted cubic contains the equation in the last vars
        let f = PrimeField::default_field();
        let vars = ["s", "t", "x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
        let r = PolyRing::new(f, vars, MonomialOrder::Lex);
        let gens = vec![
            parse_poly(&r, "x-s^3").unwrap(),
            parse_poly(&r, "y-s^2*t").unwrap(),
            parse_poly(&r, "z-s*t^2").unwrap(),
            parse_poly(&r, "w-t^3").unwrap(),
        ];
        let gb = buchberger(&gens);
        let in_xyzw: Vec<&Poly> = gb
            .gens
            .iter()
            .filter(|g| g.terms.iter().all(|(m, _)| m.e[0] == 0 && m.e[1] == 0))
            .collect();
        // the three quadrics cutting out the twisted cubic must appear
        let q1 = parse_poly(&r, "x*z-y^2").unwrap();
        let q2 = parse_poly(&r, "x*w-y*z").unwrap();
        let q3 = parse_poly(&r, "y*w-z^2").unwrap();
        for q in [&q1, &q2, &q3] {
            assert!(gb.contains(q));
        }
        assert!(in_xyzw.len() >= 3);
    }
}
