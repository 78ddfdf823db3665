//! Rational maps between embedded projective varieties.
//!
//! A map is a list of equal-degree forms on its source. Images go through
//! the graph ideal in a product ring, saturated by one generic member of
//! the system and then eliminated; fibers never leave the source ring, so
//! birationality checks stay cheap even when the image is expensive.

use std::sync::Arc;
use std::sync::OnceLock;

use rand::Rng;

use crate::groebner::{decompose_zero_dim, Ideal};
use crate::polycore::{MatFp, Poly, PolyRing};
use crate::rng::SeedStream;
use crate::varieties::{
    saturate, saturate_irrelevant, saturate_poly, ideal_ops::eliminate, ProjVariety,
};

#[derive(Debug, thiserror::Error)]
pub enum MapError {
    #[error("forms must share one degree, found {0} and {1}")]
    MixedDegrees(i32, i32),
    #[error("every form vanishes on the source")]
    DegenerateSystem,
    #[error("fiber stayed positive-dimensional over every sampled point")]
    PositiveDimensionalFiber,
    #[error("no rational point found on the source")]
    NoSourcePoint,
}

pub struct RationalMap {
    source: ProjVariety,
    forms: Vec<Poly>,
    target: Arc<PolyRing>,
    seeds: SeedStream,
    image: Arc<OnceLock<ProjVariety>>,
    base: Arc<OnceLock<Ideal>>,
}

/// A map into a fresh `P^{m-1}` with coordinates `y0..y{m-1}`.
pub fn map_from_system(
    v: ProjVariety,
    forms: Vec<Poly>,
    seeds: SeedStream,
) -> Result<RationalMap, MapError> {
    let names: Vec<String> = (0..forms.len()).map(|i| format!("y{i}")).collect();
    let target = PolyRing::new(
        v.ring().field,
        names,
        crate::polycore::MonomialOrder::GrevLex,
    );
    map_into_ring(v, forms, target, seeds)
}

/// A map whose target carries the given coordinate ring (one variable per
/// form); used when the image should land in named coordinates such as
/// Pluecker ones.
pub fn map_into_ring(
    v: ProjVariety,
    forms: Vec<Poly>,
    target: Arc<PolyRing>,
    seeds: SeedStream,
) -> Result<RationalMap, MapError> {
    assert!(!forms.is_empty());
    assert_eq!(target.nvars(), forms.len());
    assert_eq!(target.field, v.ring().field);
    let d = forms[0].degree();
    for f in &forms {
        assert!(f.is_homogeneous(), "map forms must be homogeneous");
        assert!(v.ring().same_vars(&f.ring), "forms must live on the source ring");
        if f.degree() != d {
            return Err(MapError::MixedDegrees(d, f.degree()));
        }
    }
    if forms.iter().all(|f| v.ideal().normal_form(f).is_zero()) {
        return Err(MapError::DegenerateSystem);
    }
    Ok(RationalMap {
        source: v,
        forms,
        target,
        seeds,
        image: Arc::new(OnceLock::new()),
        base: Arc::new(OnceLock::new()),
    })
}

impl RationalMap {
    pub fn source(&self) -> &ProjVariety {
        &self.source
    }

    pub fn forms(&self) -> &[Poly] {
        &self.forms
    }

    pub fn target_ring(&self) -> &Arc<PolyRing> {
        &self.target
    }

    pub fn degree_of_forms(&self) -> i32 {
        self.forms[0].degree()
    }

    /// The same system, restricted to a subvariety of the source.
    pub fn restrict_to(&self, v: ProjVariety) -> Result<RationalMap, MapError> {
        assert!(v.ring().same_vars(&self.source.ring()));
        map_into_ring(
            v,
            self.forms.clone(),
            self.target.clone(),
            self.seeds.child("restricted"),
        )
    }

    /// Scheme of common zeros of the system on the source.
    pub fn base_locus(&self) -> &Ideal {
        self.base.get_or_init(|| {
            let src = self.source.ideal();
            let mut gens = src.gens.clone();
            gens.extend(self.forms.iter().cloned());
            saturate_irrelevant(
                &Ideal::new(src.ring.clone(), gens),
                &self.seeds.child("base-locus"),
            )
        })
    }

    /// A member of the system that does not vanish on the source.
    fn generic_member(&self) -> Poly {
        let src = self.source.ideal();
        let p = src.ring.field.characteristic();
        let mut rng = self.seeds.stream("generic-member");
        loop {
            let mut acc = Poly::zero(&src.ring);
            for f in &self.forms {
                acc = acc.add(&f.scale(rng.gen_range(1..p)));
            }
            if !src.normal_form(&acc).is_zero() {
                return acc;
            }
        }
    }

    /// Closure of the image, by eliminating the source variables from the
    /// graph ideal, saturated once by a generic member of the system.
    pub fn image(&self) -> &ProjVariety {
        self.image.get_or_init(|| {
            let src = self.source.ideal();
            let n = src.ring.nvars();
            let m = self.forms.len();
            for y in self.target.vars.iter() {
                assert!(!src.ring.vars.contains(y), "source and target share a variable name");
            }
            let mut names = src.ring.vars.clone();
            names.extend(self.target.vars.iter().cloned());
            let pr = PolyRing::new(
                src.ring.field,
                names,
                crate::polycore::MonomialOrder::GrevLex,
            );
            let fs: Vec<Poly> = self.forms.iter().map(|f| f.extend_to(&pr)).collect();
            let mut gens: Vec<Poly> = src.gens.iter().map(|g| g.extend_to(&pr)).collect();
            for i in 0..m {
                for j in i + 1..m {
                    let yi = Poly::var(&pr, n + i);
                    let yj = Poly::var(&pr, n + j);
                    gens.push(fs[i].mul(&yj).sub(&fs[j].mul(&yi)));
                }
            }
            let member = self.generic_member().extend_to(&pr);
            let graph = saturate_poly(&Ideal::new(pr, gens), &member);
            let img = eliminate(&graph, &(0..n).collect::<Vec<_>>());
            let moved = img.gens.iter().map(|g| g.reorder(&self.target)).collect();
            ProjVariety::new(
                Ideal::new(self.target.clone(), moved),
                self.seeds.child("image"),
            )
        })
    }

    /// Closure of the preimage of `V(z)`, away from the base locus.
    pub fn preimage(&self, z: &Ideal) -> ProjVariety {
        assert!(z.ring.same_vars(&self.target));
        let src = self.source.ideal();
        let mut gens = src.gens.clone();
        for g in &z.gens {
            gens.push(g.substitute(&src.ring, &self.forms));
        }
        let total = Ideal::new(src.ring.clone(), gens);
        let system = Ideal::new(src.ring.clone(), self.forms.clone());
        ProjVariety::new(saturate(&total, &system), self.seeds.child("preimage"))
    }

    /// Degree of the fiber over the image of a random source point; `1`
    /// certifies birationality onto the image, up to the usual seeded
    /// probabilistic caveat.
    pub fn generic_fiber_degree(&self) -> Result<u64, MapError> {
        let src = self.source.ideal();
        let mut sampled = false;
        for attempt in 0..6 {
            let sub = self.seeds.child(&format!("fiber-{attempt}"));
            let Some(pt) = self.source.random_point(&sub.child("sample")) else {
                continue;
            };
            sampled = true;
            let c: Vec<u64> = self.forms.iter().map(|f| f.eval(&pt)).collect();
            let Some(k) = c.iter().position(|&v| v != 0) else {
                continue; // landed in the base locus
            };
            let mut gens = src.gens.clone();
            for (i, f) in self.forms.iter().enumerate() {
                if i != k {
                    gens.push(f.scale(c[k]).sub(&self.forms[k].scale(c[i])));
                }
            }
            let fiber = saturate_poly(&Ideal::new(src.ring.clone(), gens), &self.forms[k]);
            match decompose_zero_dim(&fiber, &sub.child("decompose")) {
                Ok(clusters) => {
                    let d: u64 = clusters
                        .iter()
                        .map(|cl| cl.residue_degree as u64 * cl.multiplicity as u64)
                        .sum();
                    if d > 0 {
                        return Ok(d);
                    }
                }
                Err(_) => continue,
            }
        }
        if sampled {
            Err(MapError::PositiveDimensionalFiber)
        } else {
            Err(MapError::NoSourcePoint)
        }
    }
}

/// The ideal after an invertible linear change of coordinates `x -> M x`.
pub fn apply_projectivity(i: &Ideal, m: &MatFp) -> Ideal {
    let n = i.ring.nvars();
    assert_eq!(m.rows, n);
    assert_eq!(m.cols, n);
    assert_eq!(m.rank(), n, "projectivity matrix must be invertible");
    let images: Vec<Poly> = (0..n)
        .map(|row| {
            let terms = (0..n)
                .filter(|&col| m[(row, col)] != 0)
                .map(|col| (crate::polycore::Mono::var(col), m[(row, col)]))
                .collect();
            Poly::from_terms(&i.ring, terms)
        })
        .collect();
    let gens = i.gens.iter().map(|g| g.substitute(&i.ring, &images)).collect();
    Ideal::new(i.ring.clone(), gens)
}
