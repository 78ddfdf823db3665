//! Prime-field arithmetic.
//!
//! All geometry in this crate runs over a prime field `F_p`. The default
//! characteristic is 65521, the largest prime below 2^16: products of two
//! canonical representatives fit comfortably in a `u64`, so no reduction
//! tricks are needed. Any odd prime below 2^31 is accepted.

use std::fmt;

/// Default characteristic: the largest prime below 2^16.
pub const DEFAULT_CHAR: u64 = 65521;

/// A prime field `F_p`. Elements are canonical representatives in `0..p`,
/// passed around as bare `u64` values; the field itself is just the modulus
/// plus the arithmetic on representatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

/// Deterministic Miller-Rabin, exact for all `n < 3.3 * 10^24`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut b: u64, mut e: u64| -> u64 {
        let m = n as u128;
        let mut acc: u128 = 1;
        let mut bb = b as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % m;
            }
            bb = bb * bb % m;
            e >>= 1;
        }
        b = acc as u64;
        b
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = pow(x, 2);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PrimeField {
    /// Field with the given odd prime characteristic.
    ///
    /// Panics if `p` is not an odd prime or `p >= 2^31`.
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 31), "characteristic out of range: {p}");
        assert!(is_prime(p), "characteristic must be prime, got {p}");
        PrimeField { p }
    }

    /// Field with the default characteristic 65521.
    pub fn default_field() -> Self {
        PrimeField { p: DEFAULT_CHAR }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Canonical representative of a signed integer.
    pub fn from_i64(&self, n: i64) -> u64 {
        let r = n % self.p as i64;
        if r < 0 {
            (r + self.p as i64) as u64
        } else {
            r as u64
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "division by zero in F_{}", self.p);
        let (mut old_r, mut r) = (a as i64, self.p as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        self.from_i64(old_s)
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    /// A square root of `a`, if one exists (Tonelli-Shanks).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if self.pow(a, (self.p - 1) / 2) != 1 {
            return None;
        }
        if self.p % 4 == 3 {
            return Some(self.pow(a, (self.p + 1) / 4));
        }
        // Tonelli-Shanks: write p-1 = q * 2^s with q odd.
        let mut q = self.p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // Smallest quadratic non-residue; a short deterministic scan suffices.
        let mut z = 2;
        while self.pow(z, (self.p - 1) / 2) == 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Balanced signed representative in `(-p/2, p/2]`, used by the printer.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_char_is_prime() {
        assert!(is_prime(DEFAULT_CHAR));
        assert!(!is_prime(65522));
        // largest prime below 2^16: everything in between is composite
        for n in 65522..65536 {
            assert!(!is_prime(n));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = PrimeField::default_field();
        for a in [1u64, 2, 3, 65520, 12345, 40000] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn sqrt_agrees_with_squaring() {
        // exhaustive square table over a small prime with p = 1 mod 4,
        // exercising the full Tonelli-Shanks branch
        let f = PrimeField::new(10009);
        assert_eq!(f.characteristic() % 4, 1);
        let mut squares = vec![false; 10009];
        for x in 0..10009u64 {
            squares[f.mul(x, x) as usize] = true;
        }
        for a in 0..10009u64 {
            match f.sqrt(a) {
                Some(r) => {
                    assert!(squares[a as usize]);
                    assert_eq!(f.mul(r, r), a);
                }
                None => assert!(!squares[a as usize]),
            }
        }
        // and spot checks on the working field
        let g = PrimeField::default_field();
        for a in [2u64, 3, 5, 65519, 12345] {
            if let Some(r) = g.sqrt(a) {
                assert_eq!(g.mul(r, r), a);
            }
        }
    }

    #[test]
    fn signed_representative() {
        let f = PrimeField::default_field();
        assert_eq!(f.signed(1), 1);
        assert_eq!(f.signed(65520), -1);
        assert_eq!(f.signed(0), 0);
    }
}
