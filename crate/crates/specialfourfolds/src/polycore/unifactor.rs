//! Dense univariate polynomials over `F_p` and their factorization.
//!
//! Used by the zero-dimensional decomposition (factoring characteristic
//! polynomials of multiplication maps) and by conic parameterization.
//! Factorization is squarefree + distinct-degree + Cantor-Zassenhaus; the
//! equal-degree splits draw from a caller-supplied seeded generator so runs
//! are reproducible.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::field::PrimeField;

/// Coefficients ascending, trimmed so the last entry is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub field: PrimeField,
    pub c: Vec<u64>,
}

impl std::fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*t")?,
                _ => write!(f, "{a}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, c: Vec::new() }
    }

    pub fn from_coeffs(field: PrimeField, c: Vec<u64>) -> Self {
        let p = field.characteristic();
        let mut u = UniPoly { field, c: c.into_iter().map(|x| x % p).collect() };
        u.trim();
        u
    }

    pub fn x(field: PrimeField) -> Self {
        UniPoly { field, c: vec![0, 1] }
    }

    pub fn constant(field: PrimeField, a: u64) -> Self {
        UniPoly::from_coeffs(field, vec![a])
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; zero polynomial reports -1.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().expect("leading coefficient of zero")
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for &a in self.c.iter().rev() {
            acc = f.add(f.mul(acc, x), a);
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c[i] = f.add(a, b);
        }
        let mut u = UniPoly { field: f, c };
        u.trim();
        u
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c[i] = f.sub(a, b);
        }
        let mut u = UniPoly { field: f, c };
        u.trim();
        u
    }

    pub fn scale(&self, k: u64) -> UniPoly {
        let f = self.field;
        let mut u = UniPoly {
            field: f,
            c: self.c.iter().map(|&a| f.mul(a, k)).collect(),
        };
        u.trim();
        u
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let f = self.field;
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        let mut u = UniPoly { field: f, c };
        u.trim();
        u
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()))
    }

    /// Quotient and remainder.
    pub fn divmod(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.field;
        if self.deg() < d.deg() {
            return (UniPoly::zero(f), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let dinv = f.inv(d.lc());
        let mut q = vec![0u64; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let coeff = f.mul(r[i + dl - 1], dinv);
            q[i] = coeff;
            if coeff == 0 {
                continue;
            }
            for j in 0..dl {
                r[i + j] = f.sub(r[i + j], f.mul(coeff, d.c[j]));
            }
        }
        let mut qq = UniPoly { field: f, c: q };
        let mut rr = UniPoly { field: f, c: r };
        qq.trim();
        rr.trim();
        (qq, rr)
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divmod(d).1
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        let p = f.characteristic();
        let c: Vec<u64> = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, i as u64 % p))
            .collect();
        let mut u = UniPoly { field: f, c };
        u.trim();
        u
    }

    /// `self^e mod m` with a big exponent.
    fn pow_mod(&self, e: &BigUint, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m);
        let mut acc = UniPoly::constant(self.field, 1);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }
}

/// Irreducible factors with multiplicities, leading coefficient discarded
/// (all factors monic). Factors are sorted by (degree, coefficients) so the
/// output is deterministic regardless of the random splitting order.
pub fn factor(poly: &UniPoly, rng: &mut ChaCha8Rng) -> Vec<(UniPoly, u32)> {
    assert!(!poly.is_zero());
    let f = poly.field;
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    let monic = poly.monic();
    if monic.deg() == 0 {
        return out;
    }
    let der = monic.derivative();
    assert!(
        !der.is_zero(),
        "inseparable polynomial: degree exceeds the characteristic"
    );
    let squarefree = {
        let g = monic.gcd(&der);
        monic.divmod(&g).0
    };
    for irr in factor_squarefree(&squarefree, rng) {
        // multiplicity by trial division of the original polynomial
        let mut m = 0u32;
        let mut rest = monic.clone();
        loop {
            let (q, r) = rest.divmod(&irr);
            if !r.is_zero() {
                break;
            }
            rest = q;
            m += 1;
        }
        out.push((irr, m));
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0.c).cmp(&(b.0.deg(), &b.0.c)));
    debug_assert_eq!(
        out.iter().map(|(p, m)| p.deg() * *m as i64).sum::<i64>(),
        monic.deg()
    );
    let _ = f;
    out
}

fn factor_squarefree(poly: &UniPoly, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let f = poly.field;
    let p = BigUint::from(f.characteristic());
    let mut out = Vec::new();
    let mut rest = poly.monic();
    let x = UniPoly::x(f);
    let mut h = x.clone(); // x^(p^d) mod rest, updated as d grows
    let mut d = 0i64;
    while rest.deg() > 0 {
        d += 1;
        if rest.deg() < 2 * d {
            out.push(rest.clone()); // what remains is irreducible
            break;
        }
        h = h.pow_mod(&p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            equal_degree_split(&g, d, rng, &mut out);
            rest = rest.divmod(&g).0;
            h = h.rem(&rest);
        }
    }
    out
}

/// Cantor-Zassenhaus split of a product of distinct irreducibles of degree `d`.
fn equal_degree_split(poly: &UniPoly, d: i64, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    if poly.deg() == d {
        out.push(poly.monic());
        return;
    }
    let f = poly.field;
    let p = f.characteristic();
    let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a = UniPoly::from_coeffs(
            f,
            (0..poly.deg() as usize).map(|_| rng.gen_range(0..p)).collect(),
        );
        if a.deg() < 1 {
            continue;
        }
        let b = a.pow_mod(&e, poly).sub(&UniPoly::constant(f, 1));
        let g = b.gcd(poly);
        if g.deg() > 0 && g.deg() < poly.deg() {
            equal_degree_split(&g, d, rng, out);
            equal_degree_split(&poly.divmod(&g).0, d, rng, out);
            return;
        }
    }
}

/// Roots in `F_p`, with multiplicity, sorted.
pub fn roots(poly: &UniPoly, rng: &mut ChaCha8Rng) -> Vec<(u64, u32)> {
    let f = poly.field;
    let mut out: Vec<(u64, u32)> = factor(poly, rng)
        .into_iter()
        .filter(|(q, _)| q.deg() == 1)
        .map(|(q, m)| (f.neg(q.c[0]), m))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn irreducibility_matches_brute_force_root_search() {
        // x^2 + 1 over F_7: no roots by exhaustion, so irreducible
        let f = PrimeField::new(7);
        for x in 0..7u64 {
            assert_ne!(f.add(f.mul(x, x), 1), 0);
        }
        let p = UniPoly::from_coeffs(f, vec![1, 0, 1]);
        let fac = factor(&p, &mut rng());
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].0.deg(), 2);
        assert_eq!(fac[0].1, 1);
    }

    #[test]
    fn splits_and_multiplicities() {
        let f = PrimeField::default_field();
        // (t - 3)^2 * (t^2 + 1) ... t^2+1 factors over F_65521 iff -1 is a square
        let lin = UniPoly::from_coeffs(f, vec![f.neg(3), 1]);
        let quad = UniPoly::from_coeffs(f, vec![1, 0, 1]);
        let prod = lin.mul(&lin).mul(&quad);
        let fac = factor(&prod, &mut rng());
        let total: i64 = fac.iter().map(|(p, m)| p.deg() * *m as i64).sum();
        assert_eq!(total, 4);
        assert!(fac.iter().any(|(p, m)| p.deg() == 1 && *m == 2 && p.eval(3) == 0));
        // 65521 = 1 mod 4, so -1 is a quadratic residue and t^2+1 splits
        assert_eq!(fac.len(), 3);
    }

    #[test]
    fn root_extraction() {
        let f = PrimeField::default_field();
        // t*(t-1)*(t-2)
        let p = UniPoly::from_coeffs(f, vec![0, 2, f.neg(3), 1]);
        assert_eq!(roots(&p, &mut rng()), vec![(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn random_products_refactor() {
        let f = PrimeField::default_field();
        let mut r = rng();
        for trial in 0..10u64 {
            let a = UniPoly::from_coeffs(f, vec![trial + 1, 1]);
            let b = UniPoly::from_coeffs(f, vec![3, trial, 1]);
            let c = UniPoly::from_coeffs(f, vec![1, 0, 0, 1]);
            let prod = a.mul(&b).mul(&c);
            let fac = factor(&prod, &mut r);
            let mut rebuilt = UniPoly::constant(f, 1);
            for (q, m) in &fac {
                for _ in 0..*m {
                    rebuilt = rebuilt.mul(q);
                }
            }
            assert_eq!(rebuilt, prod.monic());
        }
    }
}
