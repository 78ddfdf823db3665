//! Projective subschemes and their numerical invariants.
//!
//! [`ProjVariety`] wraps a homogeneous ideal with lazily filled caches:
//! the saturated ideal and its Hilbert data. Dimension, degree, and
//! `χ(O)` fall out of the Hilbert polynomial; sectional genus comes from
//! an explicit generic hyperplane slice, re-saturated, so it behaves the
//! same for every input presentation.

pub mod ideal_ops;
pub mod singular;

use std::sync::Arc;
use std::sync::OnceLock;

use serde::Serialize;

use crate::groebner::hilbert::{hilbert, HilbertData};
use crate::groebner::zerodim::rational_points;
use crate::groebner::Ideal;
use crate::polycore::{MatFp, Mono, Poly, PolyRing, MAX_VARS};
use crate::rng::SeedStream;

pub use ideal_ops::{
    colon, colon_poly, eliminate, intersect, saturate, saturate_irrelevant, saturate_poly,
};
pub use singular::{chern_k2, jacobian, minors, poly_det, singular_delta, trim_linear_span};

#[derive(Debug, thiserror::Error)]
pub enum VarietyError {
    #[error("variety is empty")]
    Empty,
    #[error("expected a surface, found dimension {0}")]
    NotASurface(i64),
    #[error("singular locus has positive dimension {0}")]
    PositiveDimensionalSingularLocus(i64),
    #[error("surface is singular; supply K² of the normalization")]
    SingularNeedsSuppliedK2,
    #[error("no good projection found; randomness exhausted")]
    UnluckyProjection,
}

/// A closed subscheme of projective space, with cached saturation and
/// Hilbert data. Cheap to clone; clones share the caches.
#[derive(Clone)]
pub struct ProjVariety {
    raw: Ideal,
    seeds: SeedStream,
    saturated: Arc<OnceLock<Ideal>>,
    hilb: Arc<OnceLock<HilbertData>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyInvariants {
    pub dim: i64,
    pub degree: i64,
    pub sectional_genus: Option<i64>,
    pub chi: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum K2Source {
    Computed,
    Supplied,
}

/// The numbers a surface contributes to lattice computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceNumerics {
    pub degree: i64,
    pub sectional_genus: i64,
    pub chi: i64,
    pub delta: i64,
    pub k2: i64,
    pub k2_source: K2Source,
}

impl ProjVariety {
    /// Wrap a homogeneous ideal. `seeds` drives every randomized step so
    /// results are reproducible.
    pub fn new(ideal: Ideal, seeds: SeedStream) -> Self {
        for g in &ideal.gens {
            assert!(g.is_homogeneous(), "projective schemes need homogeneous ideals");
        }
        ProjVariety {
            raw: ideal,
            seeds,
            saturated: Arc::new(OnceLock::new()),
            hilb: Arc::new(OnceLock::new()),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.raw.ring
    }

    /// Generators as handed in, before saturation.
    pub fn raw_ideal(&self) -> &Ideal {
        &self.raw
    }

    /// The saturated ideal of the scheme.
    pub fn ideal(&self) -> &Ideal {
        self.saturated
            .get_or_init(|| saturate_irrelevant(&self.raw, &self.seeds.child("saturate")))
    }

    pub fn hilbert(&self) -> &HilbertData {
        self.hilb.get_or_init(|| hilbert(self.ideal()))
    }

    pub fn is_empty(&self) -> bool {
        self.hilbert().is_empty()
    }

    pub fn dim(&self) -> i64 {
        self.hilbert().dimension
    }

    pub fn degree(&self) -> i64 {
        self.hilbert().degree as i64
    }

    /// `χ(O_V) = HP(0)`.
    pub fn chi(&self) -> i64 {
        self.euler_char_twist(0)
    }

    /// `χ(O_V(t)) = HP(t)`, exactly.
    pub fn euler_char_twist(&self, t: i64) -> i64 {
        use num_traits::ToPrimitive;
        self.hilbert().hp_eval(t).to_i64().expect("χ overflow")
    }

    /// Slice by one generic hyperplane, re-embedding in one dimension less.
    pub fn hyperplane_section(&self, seeds: &SeedStream) -> ProjVariety {
        let mut rng = seeds.stream("hyperplane");
        let (ring, polys) = ideal_ops::restrict_polys(&self.ideal().ring, &self.ideal().gens, &mut rng);
        let gens = polys.into_iter().filter(|g| !g.is_zero()).collect();
        ProjVariety::new(Ideal::new(ring, gens), seeds.child("section"))
    }

    /// Genus of a generic curve section: slice down to dimension one,
    /// saturate, and read `g = 1 - HP(0)`. `None` for points.
    pub fn sectional_genus(&self) -> Option<i64> {
        let d = self.dim();
        if d < 1 {
            return None;
        }
        if d == 1 {
            return Some(1 - self.chi());
        }
        let expect_deg = self.degree();
        for attempt in 0..8 {
            let seeds = self.seeds.child(&format!("slice-{attempt}"));
            let mut cur = self.clone();
            for k in 0..d - 1 {
                cur = cur.hyperplane_section(&seeds.child(&format!("h{k}")));
            }
            let h = cur.hilbert();
            if h.dimension == 1 && h.degree as i64 == expect_deg {
                return Some(1 - cur.chi());
            }
        }
        None
    }

    /// Dimension, degree, sectional genus, `χ(O)`.
    pub fn invariants(&self) -> Result<VarietyInvariants, VarietyError> {
        if self.is_empty() {
            return Err(VarietyError::Empty);
        }
        Ok(VarietyInvariants {
            dim: self.dim(),
            degree: self.degree(),
            sectional_genus: self.sectional_genus(),
            chi: self.chi(),
        })
    }

    /// Node count of a surface with isolated singularities. Works in the
    /// linear span, where the Jacobian stays small.
    pub fn singular_delta(&self) -> Result<i64, VarietyError> {
        if self.dim() != 2 {
            return Err(VarietyError::NotASurface(self.dim()));
        }
        let trimmed = singular::trim_linear_span(self.ideal());
        singular::singular_delta(&trimmed, 2, &self.seeds.child("singular"))
            .map(|d| d as i64)
    }

    /// `K²` of a smooth surface; singular surfaces must have it supplied.
    pub fn chern_k2(&self) -> Result<i64, VarietyError> {
        if self.dim() != 2 {
            return Err(VarietyError::NotASurface(self.dim()));
        }
        if self.singular_delta()? != 0 {
            return Err(VarietyError::SingularNeedsSuppliedK2);
        }
        singular::chern_k2(self.ideal(), self.degree(), self.chi(), &self.seeds.child("k2"))
    }

    /// Everything Eq.-style lattice formulas need from a surface.
    pub fn surface_numerics(&self, supplied_k2: Option<i64>) -> Result<SurfaceNumerics, VarietyError> {
        if self.dim() != 2 {
            return Err(VarietyError::NotASurface(self.dim()));
        }
        let delta = self.singular_delta()?;
        let (k2, k2_source) = match supplied_k2 {
            Some(v) => (v, K2Source::Supplied),
            None if delta == 0 => (
                singular::chern_k2(self.ideal(), self.degree(), self.chi(), &self.seeds.child("k2"))?,
                K2Source::Computed,
            ),
            None => return Err(VarietyError::SingularNeedsSuppliedK2),
        };
        Ok(SurfaceNumerics {
            degree: self.degree(),
            sectional_genus: self.sectional_genus().ok_or(VarietyError::NotASurface(0))?,
            chi: self.chi(),
            delta,
            k2,
            k2_source,
        })
    }

    /// One random rational point, by slicing with generic hyperplanes and
    /// keeping a rational point of the resulting finite scheme.
    pub fn random_point(&self, seeds: &SeedStream) -> Option<Vec<u64>> {
        if self.is_empty() {
            return None;
        }
        let d = self.dim();
        let ideal = self.ideal();
        if ideal.gens.is_empty() {
            use rand::Rng;
            let mut rng = seeds.stream("free-point");
            let p = ideal.ring.field.characteristic();
            let mut pt: Vec<u64> =
                (0..ideal.ring.nvars()).map(|_| rng.gen_range(0..p)).collect();
            if pt.iter().all(|&c| c == 0) {
                pt[0] = 1;
            }
            return Some(pt);
        }
        for attempt in 0..24 {
            let sub = seeds.child(&format!("pt-{attempt}"));
            let mut rng = sub.stream("cuts");
            let mut gens = ideal.gens.clone();
            for _ in 0..d {
                gens.push(ideal_ops::random_linear(&ideal.ring, &mut rng));
            }
            let sliced = Ideal::new(ideal.ring.clone(), gens);
            match rational_points(&sliced, &sub.child("solve")) {
                Ok(pts) if !pts.is_empty() => {
                    let pt = pts[0].clone();
                    debug_assert!(ideal.gens.iter().all(|g| g.eval(&pt) == 0));
                    return Some(pt);
                }
                _ => continue,
            }
        }
        None
    }
}

fn monomial_count(nvars: usize, d: u16) -> usize {
    // C(d + n - 1, n - 1)
    let mut acc: u128 = 1;
    for i in 0..nvars - 1 {
        acc = acc * (d as u128 + 1 + i as u128) / (i as u128 + 1);
    }
    acc as usize
}

/// Vector-space dimension of the degree-`d` piece of a homogeneous ideal.
pub fn graded_piece_dim(i: &Ideal, d: u16) -> usize {
    monomial_count(i.ring.nvars(), d) - hilbert(i).hilbert_function(d as i64) as usize
}

/// Row-reduced basis of the degree-`d` piece of a homogeneous ideal.
pub fn graded_piece_basis(i: &Ideal, d: u16) -> Vec<Poly> {
    let ring = &i.ring;
    let monos = ring.monomials_of_degree(d);
    let col: std::collections::HashMap<[u8; MAX_VARS], usize> =
        monos.iter().enumerate().map(|(j, m)| (m.e, j)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for g in &i.gens {
        let dg = g.degree();
        if dg < 0 || dg as u16 > d {
            continue;
        }
        for u in ring.monomials_of_degree(d - dg as u16) {
            let prod = g.mul_mono(&u, 1);
            let mut row = vec![0u64; monos.len()];
            for (m, c) in &prod.terms {
                row[col[&m.e]] = *c;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Vec::new();
    }
    let mut mat = MatFp::from_rows(ring.field, rows);
    let pivots = mat.rref();
    (0..pivots.len())
        .map(|r| {
            let terms: Vec<(Mono, u64)> = (0..monos.len())
                .filter(|&c| mat[(r, c)] != 0)
                .map(|c| (monos[c], mat[(r, c)]))
                .collect();
            Poly::from_terms(ring, terms)
        })
        .collect()
}

/// Degree-`m` forms vanishing to order at least `e` along the scheme of
/// `s`: the degree-`m` piece of the saturated `e`-th power of its ideal.
/// With `modulo`, returns forms spanning the piece modulo that ideal's
/// own degree-`m` forms (sections of the system on the ambient scheme).
pub fn multiplicity_system(
    s: &ProjVariety,
    e: u32,
    m: u16,
    modulo: Option<&Ideal>,
) -> Vec<Poly> {
    assert!(e >= 1 && m >= 1);
    let base = s.ideal();
    let sat = saturate_irrelevant(&base.power(e), &s.seeds.child("mult-sat"));
    let basis = graded_piece_basis(&sat, m);
    let Some(v) = modulo else { return basis };

    // keep a subset whose normal forms against `v` stay independent
    let ring = &s.raw.ring;
    let monos = ring.monomials_of_degree(m);
    let col: std::collections::HashMap<[u8; MAX_VARS], usize> =
        monos.iter().enumerate().map(|(j, mo)| (mo.e, j)).collect();
    let mut kept: Vec<Poly> = Vec::new();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for f in basis {
        let nf = v.normal_form(&f);
        if nf.is_zero() {
            continue;
        }
        let mut row = vec![0u64; monos.len()];
        for (mo, cf) in &nf.terms {
            row[col[&mo.e]] = *cf;
        }
        rows.push(row);
        if MatFp::from_rows(ring.field, rows.clone()).rank() == rows.len() {
            kept.push(f);
        } else {
            rows.pop();
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{parse_ideal, PrimeField};

    fn variety(vars: &[&str], gens: &[&str], seed: u64) -> ProjVariety {
        let r = PolyRing::grevlex(PrimeField::default_field(), vars);
        ProjVariety::new(Ideal::new(r.clone(), parse_ideal(&r, gens).unwrap()), SeedStream::new(seed))
    }

    #[test]
    fn twisted_cubic_invariants() {
        let v = variety(&["x", "y", "z", "w"], &["x*z-y^2", "x*w-y*z", "y*w-z^2"], 1);
        let inv = v.invariants().unwrap();
        assert_eq!(inv, VarietyInvariants { dim: 1, degree: 3, sectional_genus: Some(0), chi: 1 });
    }

    #[test]
    fn quadric_surface_invariants_and_section() {
        let v = variety(&["x", "y", "z", "w"], &["x*w-y*z"], 2);
        let inv = v.invariants().unwrap();
        assert_eq!(inv, VarietyInvariants { dim: 2, degree: 2, sectional_genus: Some(0), chi: 1 });
        let c = v.hyperplane_section(&SeedStream::new(5));
        assert_eq!(c.dim(), 1);
        assert_eq!(c.degree(), 2);
        assert_eq!(c.ring().nvars(), 3);
    }

    #[test]
    fn grassmannian_of_lines_sectional_genus_one() {
        let vars = ["p01", "p02", "p03", "p04", "p12", "p13", "p14", "p23", "p24", "p34"];
        let v = variety(
            &vars,
            &[
                "p01*p23-p02*p13+p03*p12",
                "p01*p24-p02*p14+p04*p12",
                "p01*p34-p03*p14+p04*p13",
                "p02*p34-p03*p24+p04*p23",
                "p12*p34-p13*p24+p14*p23",
            ],
            3,
        );
        let inv = v.invariants().unwrap();
        assert_eq!(inv.dim, 6);
        assert_eq!(inv.degree, 5);
        assert_eq!(inv.chi, 1);
        // a curve section of the degree-5 fivefold ... threefold ... is elliptic
        assert_eq!(inv.sectional_genus, Some(1));
    }

    #[test]
    fn sectional_genus_is_slice_stable() {
        let r5 = PolyRing::grevlex(PrimeField::default_field(), &["a", "b", "c", "d", "e"]);
        let gens = parse_ideal(&r5, &["a*c-b^2", "a*e-b*d", "b*e-c*d"]).unwrap();
        for seed in [31, 32, 33] {
            let v = ProjVariety::new(Ideal::new(r5.clone(), gens.clone()), SeedStream::new(seed));
            assert_eq!(v.sectional_genus(), Some(0));
        }
    }

    #[test]
    fn euler_characteristic_twists() {
        let v = variety(&["x", "y", "z", "w"], &["x*w-y*z"], 4);
        // quadric surface: HP(t) = (t+1)^2
        assert_eq!(v.euler_char_twist(0), 1);
        assert_eq!(v.euler_char_twist(2), 9);
        assert_eq!(v.euler_char_twist(5), 36);
        assert_eq!(v.chi(), 1);
    }

    #[test]
    fn graded_pieces_of_the_twisted_cubic() {
        let r = PolyRing::grevlex(PrimeField::default_field(), &["x", "y", "z", "w"]);
        let i = Ideal::new(
            r.clone(),
            parse_ideal(&r, &["x*z-y^2", "x*w-y*z", "y*w-z^2"]).unwrap(),
        );
        assert_eq!(graded_piece_dim(&i, 1), 0);
        assert_eq!(graded_piece_dim(&i, 2), 3);
        // HF of the curve at 3 is 10, monomials C(6,3) = 20
        assert_eq!(graded_piece_dim(&i, 3), 10);
        for d in [2u16, 3] {
            assert_eq!(graded_piece_basis(&i, d).len(), graded_piece_dim(&i, d));
        }
        let unit = Ideal::new(r.clone(), vec![crate::polycore::Poly::one(&r)]);
        assert_eq!(graded_piece_dim(&unit, 1), 4);
    }

    #[test]
    fn double_point_systems_in_the_plane() {
        let v = variety(&["x", "y", "z"], &["x", "y"], 6);
        // conics singular at the point: x^2, xy, y^2
        assert_eq!(multiplicity_system(&v, 2, 2, None).len(), 3);
        // cubics with a double point: 10 - 3 = 7
        assert_eq!(multiplicity_system(&v, 2, 3, None).len(), 7);
        // all conics through the point: 5 of 6
        assert_eq!(multiplicity_system(&v, 1, 2, None).len(), 5);
    }

    #[test]
    fn multiplicity_system_modulo_an_ambient_quadric() {
        let r = PolyRing::grevlex(PrimeField::default_field(), &["x", "y", "z", "w"]);
        let point = ProjVariety::new(
            Ideal::new(r.clone(), parse_ideal(&r, &["x", "y", "z"]).unwrap()),
            SeedStream::new(7),
        );
        let q = Ideal::new(r.clone(), parse_ideal(&r, &["x*w-y*z"]).unwrap());
        // quadrics through the point: 9; minus the one cutting the ambient
        let abs = multiplicity_system(&point, 1, 2, None);
        assert_eq!(abs.len(), 9);
        let rel = multiplicity_system(&point, 1, 2, Some(&q));
        assert_eq!(rel.len(), 8);
    }

    #[test]
    fn tau_quadric_and_its_quadrics_modulo_the_fivefold() {
        // lines in a fixed P3 meeting two generic hyperplane conditions:
        // a quadric surface in G(1,4) with class s31 + s22
        let vars = ["p01", "p02", "p03", "p04", "p12", "p13", "p14", "p23", "p24", "p34"];
        let r = PolyRing::grevlex(PrimeField::default_field(), &vars);
        let pluecker = parse_ideal(
            &r,
            &[
                "p01*p23-p02*p13+p03*p12",
                "p01*p24-p02*p14+p04*p12",
                "p01*p34-p03*p14+p04*p13",
                "p02*p34-p03*p24+p04*p23",
                "p12*p34-p13*p24+p14*p23",
            ],
        )
        .unwrap();
        let mut sg = pluecker.clone();
        for extra in [
            "p04",
            "p14",
            "p24",
            "p34",
            "p01+2*p02+5*p03+11*p12+3*p13+7*p23",
            "3*p01+p02+4*p03+p12+9*p13+2*p23",
        ] {
            sg.push(crate::polycore::parse_poly(&r, extra).unwrap());
        }
        let s = ProjVariety::new(Ideal::new(r.clone(), sg), SeedStream::new(12));
        let inv = s.invariants().unwrap();
        assert_eq!(inv, VarietyInvariants { dim: 2, degree: 2, sectional_genus: Some(0), chi: 1 });
        assert_eq!(s.euler_char_twist(2), 9);
        assert_eq!(s.chern_k2().unwrap(), 8);

        // the quadrics through S, modulo those through a hyperplane
        // section of the Grassmannian containing S
        let mut wg = pluecker;
        wg.push(crate::polycore::parse_poly(&r, "p04+p14+6*p24+2*p34").unwrap());
        let w = Ideal::new(r.clone(), wg);
        assert_eq!(multiplicity_system(&s, 1, 2, Some(&w)).len(), 31);
    }

    #[test]
    fn random_points_land_on_the_variety() {
        let v = variety(&["x", "y", "z", "w"], &["x*z-y^2", "x*w-y*z", "y*w-z^2"], 8);
        let pt = v.random_point(&SeedStream::new(40)).expect("a rational point");
        for g in &v.raw_ideal().gens {
            assert_eq!(g.eval(&pt), 0);
        }
        let q = variety(&["x", "y", "z", "w"], &["x*w-y*z"], 9);
        let pt2 = q.random_point(&SeedStream::new(41)).expect("a rational point");
        assert_eq!(q.raw_ideal().gens[0].eval(&pt2), 0);
        assert!(pt2.iter().any(|&c| c != 0));
    }

    #[test]
    fn surface_numerics_of_smooth_fixtures() {
        let v = variety(&["x", "y", "z", "w"], &["x*w-y*z"], 10);
        let s = v.surface_numerics(None).unwrap();
        assert_eq!(
            s,
            SurfaceNumerics {
                degree: 2,
                sectional_genus: 0,
                chi: 1,
                delta: 0,
                k2: 8,
                k2_source: K2Source::Computed
            }
        );
        // supplied K² short-circuits the computation
        let s2 = v.surface_numerics(Some(8)).unwrap();
        assert_eq!(s2.k2_source, K2Source::Supplied);
    }
}
