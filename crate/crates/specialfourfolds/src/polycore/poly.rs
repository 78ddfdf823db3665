//! Sparse multivariate polynomials over a prime field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::PrimeField;
use super::monomial::{Mono, MonomialOrder, MAX_VARS};

/// A polynomial ring `F_p[x_0..x_{n-1}]` with a fixed monomial order.
/// Rings are shared through `Arc`; two rings are compatible when their
/// structural data agree, so polynomials parsed from separate ring handles
/// mix freely.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: PrimeField,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: PrimeField, vars: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        assert!(!vars.is_empty() && vars.len() <= MAX_VARS, "bad variable count");
        if let MonomialOrder::Weighted { weights } = &order {
            assert_eq!(weights.len(), vars.len());
        }
        Arc::new(PolyRing { field, vars, order })
    }

    /// `F_p[x0..x{n-1}]` in grevlex.
    pub fn grevlex(field: PrimeField, names: &[&str]) -> Arc<Self> {
        PolyRing::new(field, names.iter().map(|s| s.to_string()).collect(), MonomialOrder::GrevLex)
    }

    /// Standard names `x0..x{n-1}` in grevlex.
    pub fn standard(field: PrimeField, n: usize) -> Arc<Self> {
        let vars = (0..n).map(|i| format!("x{i}")).collect();
        PolyRing::new(field, vars, MonomialOrder::GrevLex)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        self.order.cmp(a, b, self.vars.len())
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same ring up to the monomial order.
    pub fn same_vars(&self, other: &PolyRing) -> bool {
        self.field == other.field && self.vars == other.vars
    }

    /// All monomials of total degree `d`, in descending ring order.
    pub fn monomials_of_degree(&self, d: u16) -> Vec<Mono> {
        let n = self.vars.len();
        let mut out = Vec::new();
        let mut cur = [0u8; MAX_VARS];
        fn rec(out: &mut Vec<Mono>, cur: &mut [u8; MAX_VARS], var: usize, left: u16, n: usize) {
            if var == n - 1 {
                cur[var] = left as u8;
                let mut m = Mono { deg: 0, e: *cur };
                m.deg = cur[..n].iter().map(|&x| x as u16).sum();
                out.push(m);
                cur[var] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[var] = e as u8;
                rec(out, cur, var + 1, left - e, n);
            }
            cur[var] = 0;
        }
        assert!(d < 256);
        rec(&mut out, &mut cur, 0, d, n);
        out.sort_by(|a, b| self.cmp_mono(b, a));
        out
    }
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}[{}] ({:?})",
            self.field.characteristic(),
            self.vars.join(","),
            self.order
        )
    }
}

/// A sparse polynomial: terms sorted in descending monomial order,
/// coefficients nonzero canonical representatives.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub ring: Arc<PolyRing>,
    pub terms: Vec<(Mono, u64)>,
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: u64) -> Self {
        let c = c % ring.field.characteristic();
        let terms = if c == 0 { Vec::new() } else { vec![(Mono::one(), c)] };
        Poly { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Poly::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.nvars());
        Poly { ring: ring.clone(), terms: vec![(Mono::var(i), 1)] }
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Mono, c: u64) -> Self {
        let c = c % ring.field.characteristic();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Poly { ring: ring.clone(), terms }
    }

    /// Build from unsorted terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Mono, u64)>) -> Self {
        terms.sort_by(|a, b| ring.cmp_mono(&b.0, &a.0));
        let f = ring.field;
        let mut out: Vec<(Mono, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = f.add(last.1, c % f.characteristic());
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            let c = c % f.characteristic();
            if c != 0 {
                out.push((m, c));
            }
        }
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.first().map_or(true, |t| t.0.is_one())
    }

    /// Leading term (monomial, coefficient).
    pub fn lt(&self) -> (Mono, u64) {
        *self.terms.first().expect("leading term of zero polynomial")
    }

    pub fn lm(&self) -> Mono {
        self.lt().0
    }

    pub fn lc(&self) -> u64 {
        self.lt().1
    }

    /// Total degree; zero polynomial reports -1.
    pub fn degree(&self) -> i32 {
        self.terms.iter().map(|t| t.0.deg as i32).max().unwrap_or(-1)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|t| t.0.deg == m.deg),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.ring.same_vars(&other.ring));
        let f = self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.ring.cmp_mono(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(self.terms[i].1, other.terms[j].1);
                    if c != 0 {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Poly {
        let f = self.ring.field;
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.ring.field;
        let c = c % f.characteristic();
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
        }
    }

    /// `self - c * x^m * other`: the inner step of polynomial division.
    pub fn sub_scaled(&self, c: u64, m: &Mono, other: &Poly) -> Poly {
        let f = self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let oj = other.terms[j].0.mul(m);
            match self.ring.cmp_mono(&self.terms[i].0, &oj) {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((oj, f.neg(f.mul(c, other.terms[j].1))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(self.terms[i].1, f.mul(c, other.terms[j].1));
                    if v != 0 {
                        out.push((self.terms[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        while j < other.terms.len() {
            out.push((other.terms[j].0.mul(m), f.neg(f.mul(c, other.terms[j].1))));
            j += 1;
        }
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn mul_mono(&self, m: &Mono, c: u64) -> Poly {
        let f = self.ring.field;
        let c = c % f.characteristic();
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|&(t, a)| (t.mul(m), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.ring.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (m, c) = small.terms[0];
            return big.mul_mono(&m, c);
        }
        let mut acc: HashMap<Mono, u64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &small.terms {
            for &(mb, cb) in &big.terms {
                let m = ma.mul(&mb);
                let e = acc.entry(m).or_insert(0);
                *e = f.add(*e, f.mul(ca, cb));
            }
        }
        let mut terms: Vec<(Mono, u64)> = acc.into_iter().filter(|t| t.1 != 0).collect();
        terms.sort_by(|a, b| self.ring.cmp_mono(&b.0, &a.0));
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.ring.field.inv(self.lc()))
    }

    /// Partial derivative with respect to variable `i`.
    /// Quotient by a single exact divisor; panics if `f` does not divide.
    pub fn div_exact(&self, f: &Poly) -> Poly {
        assert!(!f.is_zero());
        let fld = self.ring.field;
        let (fm, fc) = f.lt();
        let finv = fld.inv(fc);
        let mut rem = self.clone();
        let mut q = Vec::new();
        while !rem.is_zero() {
            let (m, c) = rem.lt();
            assert!(fm.divides(&m), "inexact polynomial division");
            let k = fld.mul(c, finv);
            let u = m.quot(&fm);
            q.push((u, k));
            rem = rem.sub_scaled(k, &u, f);
        }
        Poly::from_terms(&self.ring, q)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let f = self.ring.field;
        let mut terms = Vec::new();
        for &(m, c) in &self.terms {
            let e = m.e[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m;
            m2.e[i] -= 1;
            m2.deg -= 1;
            let c2 = f.mul(c, e as u64 % f.characteristic());
            if c2 != 0 {
                terms.push((m2, c2));
            }
        }
        Poly { ring: self.ring.clone(), terms }
    }

    /// Evaluate at a point (canonical representatives).
    pub fn eval(&self, point: &[u64]) -> u64 {
        let f = self.ring.field;
        let n = self.ring.nvars();
        debug_assert_eq!(point.len(), n);
        let mut acc = 0u64;
        for &(m, c) in &self.terms {
            let mut v = c;
            for i in 0..n {
                let e = m.e[i];
                if e > 0 {
                    v = f.mul(v, f.pow(point[i], e as u64));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Substitute `images[i]` for variable `i`; images live in `target`.
    /// Both rings must share the same field.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        assert_eq!(self.ring.field, target.field);
        // cache powers of each image as they are needed
        let mut powers: Vec<Vec<Poly>> = (0..images.len())
            .map(|i| vec![Poly::one(target), images[i].clone()])
            .collect();
        let mut acc = Poly::zero(target);
        for &(m, c) in &self.terms {
            let mut t = Poly::constant(target, c);
            for i in 0..self.ring.nvars() {
                let e = m.e[i] as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Reinterpret in a ring with the same variables but a different order.
    pub fn reorder(&self, target: &Arc<PolyRing>) -> Poly {
        assert!(self.ring.same_vars(target));
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| target.cmp_mono(&b.0, &a.0));
        Poly { ring: target.clone(), terms }
    }

    /// Map into a larger ring whose first variables match this ring's.
    pub fn extend_to(&self, target: &Arc<PolyRing>) -> Poly {
        assert!(target.nvars() >= self.ring.nvars());
        assert_eq!(self.ring.field, target.field);
        debug_assert!(self
            .ring
            .vars
            .iter()
            .zip(target.vars.iter())
            .all(|(a, b)| a == b));
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| target.cmp_mono(&b.0, &a.0));
        Poly { ring: target.clone(), terms }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.ring.field;
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            let s = field.signed(c);
            let (sign, mag) = if s < 0 { ("-", (-s) as u64) } else { ("+", s as u64) };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{sign}")?;
            }
            let mut wrote = false;
            if mag != 1 || m.is_one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for i in 0..self.ring.nvars() {
                let e = m.e[i];
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.ring.vars[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::grevlex(PrimeField::default_field(), &["x", "y", "z"])
    }

    #[test]
    fn arithmetic_basics() {
        let r = ring();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let q = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "x^2-y^2");
    }

    #[test]
    fn display_roundtrip_shapes() {
        let r = ring();
        let x = Poly::var(&r, 0);
        let z = Poly::var(&r, 2);
        let p = x.pow(2).scale(3).sub(&z).add(&Poly::one(&r));
        assert_eq!(p.to_string(), "3*x^2-z+1");
        assert_eq!(Poly::zero(&r).to_string(), "0");
    }

    #[test]
    fn substitution_composes() {
        let r = ring();
        let s = PolyRing::grevlex(PrimeField::default_field(), &["t"]);
        let t = Poly::var(&s, 0);
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = x.mul(&y); // x*y -> t^3
        let images = vec![t.clone(), t.mul(&t), Poly::one(&s)];
        assert_eq!(p.substitute(&s, &images), t.pow(3));
    }

    #[test]
    fn derivative_and_eval() {
        let r = ring();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = x.pow(3).mul(&y); // x^3 y
        let dx = p.derivative(0);
        assert_eq!(dx.to_string(), "3*x^2*y");
        assert_eq!(p.eval(&[2, 5, 1]), 40);
    }

    #[test]
    fn graded_monomial_bases() {
        let r = ring();
        assert_eq!(r.monomials_of_degree(2).len(), 6);
        let ms = r.monomials_of_degree(2);
        for w in ms.windows(2) {
            assert_eq!(r.cmp_mono(&w[0], &w[1]), Ordering::Greater);
        }
    }
}
