//! First syzygies via Groebner bases of free modules.
//!
//! To get the syzygies of `g_1..g_k` we run Buchberger on the vectors
//! `v_i = g_i e_0 + e_i` in `R^{1+k}` under a position-over-term order in
//! which every component-0 term dominates the trailing components. Basis
//! elements whose component-0 part vanishes generate the syzygy module.
//! No product criterion here: it is not valid for module leads, so only the
//! same-component restriction and the chain criterion prune pairs.

use std::cmp::Ordering;

use crate::polycore::{Mono, Poly, PolyRing};

#[derive(Clone, Copy)]
struct MTerm {
    comp: u32,
    mono: Mono,
    c: u64,
}

/// Element of a free module with components 0..=k, terms sorted descending.
#[derive(Clone)]
struct ModVec {
    terms: Vec<MTerm>,
}

fn cmp_key(ring: &PolyRing, a: (u32, &Mono), b: (u32, &Mono)) -> Ordering {
    // lower component index wins, then the ring's monomial order
    b.0.cmp(&a.0).then_with(|| ring.order.cmp(a.1, b.1, ring.nvars()))
}

impl ModVec {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &MTerm {
        &self.terms[0]
    }

    /// `self - k * m * g`, one merge pass.
    fn sub_scaled(&self, ring: &PolyRing, skip: usize, k: u64, m: Mono, g: &ModVec) -> ModVec {
        let f = ring.field;
        let a = &self.terms[skip..];
        let b = &g.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let gm = m.mul(&b[j].mono);
            match cmp_key(ring, (a[i].comp, &a[i].mono), (b[j].comp, &gm)) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(MTerm { comp: b[j].comp, mono: gm, c: f.neg(f.mul(k, b[j].c)) });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.sub(a[i].c, f.mul(k, b[j].c));
                    if c != 0 {
                        out.push(MTerm { comp: a[i].comp, mono: gm, c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            out.push(MTerm { comp: t.comp, mono: m.mul(&t.mono), c: f.neg(f.mul(k, t.c)) });
        }
        ModVec { terms: out }
    }
}

/// Full normal form of `v` against `basis`.
fn reduce(ring: &PolyRing, v: &ModVec, basis: &[ModVec]) -> ModVec {
    let field = ring.field;
    let mut work = v.clone();
    let mut done: Vec<MTerm> = Vec::new();
    let mut i = 0;
    'term: while i < work.terms.len() {
        let t = work.terms[i];
        for g in basis {
            let lt = g.lead();
            if lt.comp == t.comp && lt.mono.divides(&t.mono) {
                let m = t.mono.quot(&lt.mono);
                let k = field.div(t.c, lt.c);
                let next = work.sub_scaled(ring, i + 1, k, m, &ModVec { terms: g.terms[1..].to_vec() });
                work.terms.truncate(i);
                work.terms.extend(next.terms);
                continue 'term;
            }
        }
        done.push(t);
        i += 1;
    }
    ModVec { terms: done }
}

struct MPair {
    i: usize,
    j: usize,
    lcm: Mono,
    comp: u32,
    degree: u16,
}

/// Generators of the first syzygy module of `gens`: vectors `v` with
/// `sum v_i * gens_i = 0`. Each returned vector has `gens.len()` entries.
/// Every vector is verified by substitution before being returned.
pub fn syzygies(gens: &[Poly]) -> Vec<Vec<Poly>> {
    let nonzero: Vec<&Poly> = gens.iter().filter(|g| !g.is_zero()).collect();
    assert!(!nonzero.is_empty(), "syzygies of an empty generator list");
    let ring = nonzero[0].ring.clone();
    let k = gens.len();
    // degree shifts keep graded inputs graded; zero gens never enter the run
    let shift: Vec<u16> = gens.iter().map(|g| g.degree().max(0) as u16).collect();

    let mut basis: Vec<ModVec> = Vec::new();
    let mut pairs: Vec<MPair> = Vec::new();
    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut terms: Vec<MTerm> =
            g.terms.iter().map(|&(m, c)| MTerm { comp: 0, mono: m, c }).collect();
        terms.push(MTerm { comp: idx as u32 + 1, mono: Mono::one(), c: 1 });
        push_element(&shift, &mut basis, &mut pairs, ModVec { terms });
    }

    while !pairs.is_empty() {
        // smallest (degree, lcm, j, i) first
        let mut best = 0;
        for t in 1..pairs.len() {
            let (a, b) = (&pairs[t], &pairs[best]);
            if a.degree
                .cmp(&b.degree)
                .then_with(|| ring.order.cmp(&a.lcm, &b.lcm, ring.nvars()))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
                .is_lt()
            {
                best = t;
            }
        }
        let p = pairs.swap_remove(best);
        let (vi, vj) = (&basis[p.i], &basis[p.j]);
        let (li, lj) = (vi.lead(), vj.lead());
        let mi = p.lcm.quot(&li.mono);
        let mj = p.lcm.quot(&lj.mono);
        let f = ring.field;
        // lc_j * mi * vi - lc_i * mj * vj
        let scaled: Vec<MTerm> = vi
            .terms
            .iter()
            .map(|t| MTerm { comp: t.comp, mono: mi.mul(&t.mono), c: f.mul(t.c, lj.c) })
            .collect();
        let spair = ModVec { terms: scaled }.sub_scaled(&ring, 0, li.c, mj, vj);
        let red = reduce(&ring, &spair, &basis);
        if !red.is_zero() {
            push_element(&shift, &mut basis, &mut pairs, red);
        }
    }

    let mut out = Vec::new();
    for v in &basis {
        if v.lead().comp == 0 {
            continue;
        }
        let mut comps: Vec<Vec<(Mono, u64)>> = vec![Vec::new(); k];
        for t in &v.terms {
            debug_assert!(t.comp >= 1);
            comps[t.comp as usize - 1].push((t.mono, t.c));
        }
        let vec: Vec<Poly> = comps
            .into_iter()
            .map(|terms| Poly { ring: ring.clone(), terms })
            .collect();
        let mut acc = Poly::zero(&ring);
        for (vi, gi) in vec.iter().zip(gens.iter()) {
            acc = acc.add(&vi.mul(gi));
        }
        assert!(acc.is_zero(), "syzygy failed substitution check");
        out.push(vec);
    }
    out
}

fn push_element(

    shift: &[u16],
    basis: &mut Vec<ModVec>,
    pairs: &mut Vec<MPair>,
    v: ModVec,
) {
    debug_assert!(!v.is_zero());
    basis.push(v);
    let t_idx = basis.len() - 1;
    let lt = *basis[t_idx].lead();
    let deg_of = |comp: u32, m: &Mono| -> u16 {
        m.deg + if comp == 0 { 0 } else { shift[comp as usize - 1] }
    };
    // chain criterion on existing same-component pairs
    pairs.retain(|p| {
        !(p.comp == lt.comp
            && lt.mono.divides(&p.lcm)
            && basis[p.i].lead().mono.lcm(&lt.mono) != p.lcm
            && basis[p.j].lead().mono.lcm(&lt.mono) != p.lcm)
    });
    for i in 0..t_idx {
        let li = basis[i].lead();
        if li.comp != lt.comp {
            continue;
        }
        let lcm = li.mono.lcm(&lt.mono);
        pairs.push(MPair {
            i,
            j: t_idx,
            lcm,
            comp: lt.comp,
            degree: deg_of(lt.comp, &lcm),
        });
    }
}
