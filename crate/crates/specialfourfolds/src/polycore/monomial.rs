//! Monomials and monomial orders.
//!
//! Exponent vectors live in a fixed-size array with the total degree cached,
//! so monomials are `Copy` and comparisons never allocate. The cap of 34
//! variables covers every ring this crate builds, including product rings
//! used for graph eliminations.

/// Hard cap on the number of variables in a ring.
pub const MAX_VARS: usize = 34;

/// A monomial: cached total degree plus the exponent vector.
/// Exponents beyond the ring's variable count are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono {
    pub deg: u16,
    pub e: [u8; MAX_VARS],
}

impl Mono {
    pub fn one() -> Self {
        Mono { deg: 0, e: [0; MAX_VARS] }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Mono::one();
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Mono::one();
        let mut d = 0u16;
        for (i, &x) in exps.iter().enumerate() {
            m.e[i] = x;
            d += x as u16;
        }
        m.deg = d;
        m
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAX_VARS {
            let s = m.e[i] as u16 + other.e[i] as u16;
            assert!(s < 256, "exponent overflow");
            m.e[i] = s as u8;
        }
        m.deg += other.deg;
        m
    }

    pub fn divides(&self, other: &Mono) -> bool {
        if self.deg > other.deg {
            return false;
        }
        self.e.iter().zip(other.e.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`; caller guarantees `other` divides `self`.
    pub fn quot(&self, other: &Mono) -> Mono {
        debug_assert!(other.divides(self));
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.e[i] -= other.e[i];
        }
        m.deg -= other.deg;
        m
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut m = Mono::one();
        let mut d = 0u16;
        for i in 0..MAX_VARS {
            let x = self.e[i].max(other.e[i]);
            m.e[i] = x;
            d += x as u16;
        }
        m.deg = d;
        m
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut m = Mono::one();
        let mut d = 0u16;
        for i in 0..MAX_VARS {
            let x = self.e[i].min(other.e[i]);
            m.e[i] = x;
            d += x as u16;
        }
        m.deg = d;
        m
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.e.iter().zip(other.e.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Total degree restricted to variables `0..k`.
    fn block_deg(&self, k: usize) -> u16 {
        self.e[..k].iter().map(|&x| x as u16).sum()
    }
}

impl std::fmt::Debug for Mono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M[")?;
        let last = self.e.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
        for i in 0..last {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.e[i])?;
        }
        write!(f, "]")
    }
}

/// Monomial orders. `GrevLex` is the default everywhere; `Block` is the
/// elimination order used for images and saturations (first `elim` variables
/// dominate, grevlex inside each block); `Weighted` breaks ties by grevlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    Block { elim: usize },
    Weighted { weights: Vec<i64> },
}

use std::cmp::Ordering;

fn grevlex(a: &Mono, b: &Mono, lo: usize, hi: usize, adeg: u16, bdeg: u16) -> Ordering {
    match adeg.cmp(&bdeg) {
        Ordering::Equal => {}
        o => return o,
    }
    // ties: the monomial with the smaller exponent at the last differing
    // variable is the larger one
    for i in (lo..hi).rev() {
        match a.e[i].cmp(&b.e[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Compare two monomials in a ring with `n` variables.
    pub fn cmp(&self, a: &Mono, b: &Mono, n: usize) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a, b, 0, n, a.deg, b.deg),
            MonomialOrder::Lex => {
                for i in 0..n {
                    match a.e[i].cmp(&b.e[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { elim } => {
                let k = (*elim).min(n);
                match grevlex(a, b, 0, k, a.block_deg(k), b.block_deg(k)) {
                    Ordering::Equal => {
                        grevlex(a, b, k, n, a.deg - a.block_deg(k), b.deg - b.block_deg(k))
                    }
                    o => o,
                }
            }
            MonomialOrder::Weighted { weights } => {
                let wa: i64 = (0..n).map(|i| a.e[i] as i64 * weights[i]).sum();
                let wb: i64 = (0..n).map(|i| b.e[i] as i64 * weights[i]).sum();
                match wa.cmp(&wb) {
                    Ordering::Equal => grevlex(a, b, 0, n, a.deg, b.deg),
                    o => o,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u8]) -> Mono {
        Mono::from_exps(e)
    }

    #[test]
    fn grevlex_classic() {
        let o = MonomialOrder::GrevLex;
        // x^2 > x*y > y^2 > x*z > y*z > z^2 in grevlex(x,y,z)
        let seq = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1], 3), Ordering::Greater);
        }
        // grevlex vs lex disagree on x^2*y*z vs x*y^3: deg 4 each,
        // grevlex compares from the back
        assert_eq!(o.cmp(&m(&[1, 3, 0]), &m(&[2, 1, 1]), 3), Ordering::Greater);
        assert_eq!(
            MonomialOrder::Lex.cmp(&m(&[1, 3, 0]), &m(&[2, 1, 1]), 3),
            Ordering::Less
        );
    }

    #[test]
    fn block_order_eliminates() {
        // any monomial using the first block beats any monomial that does not
        let o = MonomialOrder::Block { elim: 2 };
        assert_eq!(o.cmp(&m(&[1, 0, 0, 0]), &m(&[0, 0, 9, 9]), 4), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 3, 1]), &m(&[0, 0, 2, 1]), 4), Ordering::Greater);
    }

    #[test]
    fn lcm_gcd() {
        let a = m(&[2, 0, 1]);
        let b = m(&[1, 3, 0]);
        assert_eq!(a.lcm(&b), m(&[2, 3, 1]));
        assert_eq!(a.gcd(&b), m(&[1, 0, 0]));
        assert!(!a.coprime(&b));
        assert!(m(&[1, 0, 0]).coprime(&m(&[0, 2, 0])));
    }
}
