//! Hilbert series, polynomial, and function of a homogeneous ideal.
//!
//! Everything is read off the leading-term monomial ideal: the series
//! numerator comes from the pivot recursion
//! `N(M) = N(M + (v)) + t * N(M : v)`, memoized on the canonical bytes of
//! the generator set. Dimension and degree fall out by cancelling `(1-t)`
//! factors; the Hilbert polynomial is assembled exactly over the rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Ideal;
use crate::polycore::{Mono, MAX_VARS};

#[derive(Clone, Debug)]
pub struct HilbertData {
    /// Coefficients of the series numerator `N(t)`, ascending; the series is
    /// `N(t) / (1-t)^ambient_vars`.
    pub numerator: Vec<i64>,
    pub ambient_vars: usize,
    /// Projective dimension of the zero set; -1 for the empty scheme.
    pub dimension: i64,
    pub degree: u64,
    /// Hilbert polynomial coefficients in `t`, ascending, exact rationals.
    pub hilbert_polynomial: Vec<BigRational>,
}

impl HilbertData {
    pub fn is_empty(&self) -> bool {
        self.dimension < 0
    }

    /// Exact value of the Hilbert function at `d >= 0` (series coefficient,
    /// valid below the regularity bound where the polynomial takes over).
    pub fn hilbert_function(&self, d: i64) -> i64 {
        assert!(d >= 0);
        let n = self.ambient_vars as i64;
        let mut acc = BigInt::zero();
        for (j, &c) in self.numerator.iter().enumerate() {
            let j = j as i64;
            if j > d {
                break;
            }
            acc += BigInt::from(c) * binomial_int(d - j + n - 1, n - 1);
        }
        i64::try_from(acc).expect("hilbert function value overflows i64")
    }

    /// Hilbert polynomial evaluated at an arbitrary integer, exact.
    pub fn hp_eval(&self, t: i64) -> BigInt {
        let mut acc = BigRational::zero();
        let tv = BigRational::from(BigInt::from(t));
        for c in self.hilbert_polynomial.iter().rev() {
            acc = acc * &tv + c;
        }
        assert!(acc.denom().is_one(), "hilbert polynomial not integral at {t}");
        acc.to_integer()
    }
}

fn binomial_int(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(t + a, k)` as a rational-coefficient polynomial in `t`, ascending.
fn binomial_poly(a: i64, k: i64) -> Vec<BigRational> {
    assert!(k >= 0);
    let mut acc = vec![BigRational::one()];
    for i in 0..k {
        // multiply by (t + a - i)
        let c = BigRational::from(BigInt::from(a - i));
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (j, q) in acc.iter().enumerate() {
            next[j] += q * &c;
            next[j + 1] += q;
        }
        acc = next;
    }
    let kfact: BigInt = (1..=k).map(BigInt::from).product::<BigInt>().max(BigInt::one());
    let kf = BigRational::from(kfact);
    acc.into_iter().map(|q| q / &kf).collect()
}

fn poly_add(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i + shift] = a[i + shift].checked_add(c).expect("numerator overflow");
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(y).expect("numerator overflow")).expect("numerator overflow");
        }
    }
    out
}

fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|m| (m.deg, m.e));
    let mut out: Vec<Mono> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn memo_key(gens: &[Mono]) -> Vec<u8> {
    let mut k = Vec::with_capacity(gens.len() * MAX_VARS);
    for g in gens {
        k.extend_from_slice(&g.e);
    }
    k
}

/// Series numerator of a minimal monomial generating set, ascending coeffs.
fn numerator(gens: &[Mono], memo: &mut HashMap<Vec<u8>, Vec<i64>>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![0];
    }
    // pairwise coprime: N = prod (1 - t^deg)
    if gens.len() <= 16 {
        let coprime = (0..gens.len()).all(|i| {
            (i + 1..gens.len()).all(|j| gens[i].coprime(&gens[j]))
        });
        if coprime {
            let mut acc = vec![1i64];
            for g in gens {
                let mut f = vec![0i64; g.deg as usize + 1];
                f[0] = 1;
                f[g.deg as usize] = -1;
                acc = poly_mul(&acc, &f);
            }
            return acc;
        }
    }
    let key = memo_key(gens);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    // pivot on the most shared variable
    let mut counts = [0u32; MAX_VARS];
    for g in gens {
        for (v, &e) in g.e.iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let pivot = (0..MAX_VARS).max_by_key(|&v| counts[v]).unwrap();
    debug_assert!(counts[pivot] >= 2, "coprime case should have caught this");

    // M + (v)
    let mut plus: Vec<Mono> = gens.iter().filter(|g| g.e[pivot] == 0).cloned().collect();
    plus.push(Mono::var(pivot));
    let plus = minimalize(plus);
    // M : v
    let colon: Vec<Mono> = gens
        .iter()
        .map(|g| {
            let mut m = *g;
            if m.e[pivot] > 0 {
                m.e[pivot] -= 1;
                m.deg -= 1;
            }
            m
        })
        .collect();
    let colon = minimalize(colon);

    let mut acc = numerator(&plus, memo);
    let nc = numerator(&colon, memo);
    poly_add(&mut acc, &nc, 1);
    memo.insert(key, acc.clone());
    acc
}

/// Hilbert data of a homogeneous ideal, from its leading-term ideal.
pub fn hilbert(ideal: &Ideal) -> HilbertData {
    // an ideal is homogeneous iff its reduced basis is, so this accepts
    // homogeneous ideals handed over with inhomogeneous generators
    // (as elimination steps sometimes produce)
    let n = ideal.ring.nvars();
    let gb = ideal.gb();
    for g in &gb.gens {
        assert!(g.is_homogeneous(), "hilbert needs a homogeneous ideal");
    }
    let lts: Vec<Mono> = gb.lts.clone();
    hilbert_of_monomials(lts, n)
}

pub fn hilbert_of_monomials(lts: Vec<Mono>, n: usize) -> HilbertData {
    let gens = minimalize(lts);
    let mut memo = HashMap::new();
    let num = numerator(&gens, &mut memo);

    // cancel (1-t)^m out of the numerator
    let mut q: Vec<i64> = num.clone();
    let mut cancelled = 0usize;
    loop {
        if q.iter().all(|&c| c == 0) {
            // unit ideal: empty scheme
            return HilbertData {
                numerator: num,
                ambient_vars: n,
                dimension: -1,
                degree: 0,
                hilbert_polynomial: Vec::new(),
            };
        }
        if q.iter().sum::<i64>() != 0 || cancelled == n {
            break;
        }
        // q / (1-t): running prefix sums
        let mut acc = 0i64;
        let mut next = Vec::with_capacity(q.len());
        for &c in &q {
            acc += c;
            next.push(acc);
        }
        assert_eq!(next.pop(), Some(0));
        q = next;
        cancelled += 1;
    }
    let cone_dim = n - cancelled; // Krull dimension of R/I
    let dimension = cone_dim as i64 - 1;
    let degree_i = q.iter().sum::<i64>();
    assert!(degree_i > 0, "degree must be positive for a nonempty scheme");
    let degree = degree_i as u64;
    if dimension < 0 {
        // artinian quotient: projectively empty
        return HilbertData {
            numerator: num,
            ambient_vars: n,
            dimension: -1,
            degree: 0,
            hilbert_polynomial: Vec::new(),
        };
    }

    // HP(t) = sum_j q_j * C(t - j + D - 1, D - 1), D = cone_dim
    let d = cone_dim as i64;
    let mut hp = vec![BigRational::zero(); cone_dim];
    for (j, &c) in q.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = binomial_poly(d - 1 - j as i64, d - 1);
        let ci = BigRational::from(BigInt::from(c));
        for (k, t) in term.into_iter().enumerate() {
            hp[k] += t * &ci;
        }
    }
    while hp.last().map(|c| c.is_zero()).unwrap_or(false) {
        hp.pop();
    }
    HilbertData {
        numerator: num,
        ambient_vars: n,
        dimension,
        degree,
        hilbert_polynomial: hp,
    }
}
