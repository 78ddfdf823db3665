//! Groebner engine: Buchberger with sugar selection and Gebauer-Moeller
//! pruning, module syzygies, Hilbert data, and zero-dimensional
//! decomposition.

pub mod buchberger;
pub mod hilbert;
pub mod module_gb;
pub mod zerodim;

use std::sync::Arc;
use std::sync::OnceLock;

use crate::polycore::{Poly, PolyRing};

pub use buchberger::{buchberger, buchberger_in, buchberger_with, normal_form, reduce_full, GroebnerBasis, Selection};
pub use zerodim::{decompose_zero_dim, rational_points, Cluster, ZeroDimError};

/// An ideal with a lazily computed reduced Groebner basis.
///
/// Cloning shares the cache; the generator list is immutable after
/// construction so the cache can never go stale.
#[derive(Clone)]
pub struct Ideal {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<Poly>,
    gb: Arc<OnceLock<GroebnerBasis>>,
}

impl Ideal {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Poly>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring, gens, gb: Arc::new(OnceLock::new()) }
    }

    pub fn zero(ring: Arc<PolyRing>) -> Self {
        Ideal::new(ring, Vec::new())
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.gb.get_or_init(|| {
            buchberger_in(self.ring.clone(), &self.gens, Selection::Sugar)
        })
    }

    /// Pre-populate the basis cache, e.g. when the generators are already a
    /// reduced basis from an elimination step.
    pub fn with_gb(ring: Arc<PolyRing>, gb: GroebnerBasis) -> Self {
        let cell = OnceLock::new();
        let gens = gb.gens.clone();
        let _ = cell.set(gb);
        Ideal { ring, gens, gb: Arc::new(cell) }
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        self.gb().normal_form(f)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit(&self) -> bool {
        self.gb().gens.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        assert!(self.ring.same_vars(&other.ring));
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        assert!(self.ring.same_vars(&other.ring));
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn power(&self, e: u32) -> Ideal {
        let mut out = Ideal::new(self.ring.clone(), vec![Poly::one(&self.ring)]);
        for _ in 0..e {
            out = out.product(self);
        }
        out
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal({} gens in {:?})", self.gens.len(), self.ring)
    }
}
