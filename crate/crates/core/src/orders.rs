//! The Sharkovsky order, the order `≫` on periods larger than 2, the order
//! `⋗` on over-rotation pairs, and the sets built from them.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::patterns::OrpPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("order (*) is defined on integers >= 3, got {0}")]
    BelowThree(usize),
    #[error("Sharkovsky order is defined on positive integers")]
    Zero,
    #[error("invalid Ovr cutoff {0}/{1}: need 0 < r/s <= 1/2")]
    BadCutoff(usize, usize),
}

/// A position in the Sharkovsky order: a positive integer or `2^∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShKey {
    Finite(usize),
    TwoInfinity,
}

impl fmt::Display for ShKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShKey::Finite(k) => write!(f, "{k}"),
            ShKey::TwoInfinity => f.write_str("2^inf"),
        }
    }
}

// Smaller key = earlier in the order. Numbers 2^e·o with odd o > 1 come
// first, sorted by (e, o); powers of two follow in descending order.
fn sharkovsky_key(m: usize) -> (u8, u32, usize) {
    let e = m.trailing_zeros();
    let odd = m >> e;
    if odd > 1 {
        (0, e, odd)
    } else {
        (1, u32::MAX - e, 0)
    }
}

/// `m ⊳ k`: m strictly precedes k in the Sharkovsky order.
pub fn sharkovsky_precedes(m: usize, k: usize) -> Result<bool, OrderError> {
    if m == 0 || k == 0 {
        return Err(OrderError::Zero);
    }
    Ok(sharkovsky_key(m) < sharkovsky_key(k))
}

/// `Sh(k) ∩ [1, cap]`, ascending.
pub fn sh_set(k: ShKey, cap: usize) -> Vec<usize> {
    match k {
        ShKey::TwoInfinity => (1..=cap).filter(|m| m.is_power_of_two()).collect(),
        ShKey::Finite(0) => Vec::new(),
        ShKey::Finite(k) => (1..=cap)
            .filter(|&m| m == k || sharkovsky_key(k) < sharkovsky_key(m))
            .collect(),
    }
}

/// Position in order (*): evens in natural order with each odd `x`
/// inserted right after `2x`.
#[inline]
pub fn star_rank(x: usize) -> usize {
    if x.is_multiple_of(2) {
        2 * x
    } else {
        4 * x + 1
    }
}

/// `m ≫ s` in order (*).
pub fn star_precedes(m: usize, s: usize) -> Result<bool, OrderError> {
    for x in [m, s] {
        if x < 3 {
            return Err(OrderError::BelowThree(x));
        }
    }
    Ok(star_rank(m) < star_rank(s))
}

/// `n_r ∩ [3, cap]`: `r` together with every `s` such that `r ≫ s`.
pub fn n_r(r: usize, cap: usize) -> Result<Vec<usize>, OrderError> {
    if r < 3 {
        return Err(OrderError::BelowThree(r));
    }
    Ok((3..=cap)
        .filter(|&s| s == r || star_rank(r) < star_rank(s))
        .collect())
}

/// The pair `η(m)`: `(s−1, 2s)` for `m = 2s`, `(n, 2n+1)` for `m = 2n+1`.
pub fn eta(m: usize) -> Result<OrpPair, OrderError> {
    if m < 3 {
        return Err(OrderError::BelowThree(m));
    }
    let (p, q) = if m.is_multiple_of(2) {
        (m / 2 - 1, m)
    } else {
        ((m - 1) / 2, m)
    };
    Ok(OrpPair { p, q })
}

/// `a ⋗ b`.
pub fn orp_precedes(a: OrpPair, b: OrpPair) -> bool {
    match a.ratio().cmp(&b.ratio()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => {
            let (_, _, ga) = a.reduced();
            let (_, _, gb) = b.reduced();
            sharkovsky_key(ga) < sharkovsky_key(gb)
        }
    }
}

/// Parameter of an `Ovr` set with a rational (or zero) cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OvrDescriptor {
    Zero,
    RationalTail { r: usize, s: usize, tail: ShKey },
}

impl OvrDescriptor {
    /// Builds a rational-tail descriptor, reducing `r/s`.
    pub fn rational(r: usize, s: usize, tail: ShKey) -> Result<Self, OrderError> {
        if r == 0 || s == 0 || 2 * r > s {
            return Err(OrderError::BadCutoff(r, s));
        }
        let g = r.gcd(&s);
        Ok(Self::RationalTail {
            r: r / g,
            s: s / g,
            tail,
        })
    }
}

/// Every pair `(p, q)` with `0 < p/q <= 1/2`, `q <= cap`.
pub fn all_pairs(cap: usize) -> impl Iterator<Item = OrpPair> {
    (2..=cap).flat_map(|q| (1..=q / 2).map(move |p| OrpPair { p, q }))
}

/// `Ovr(η)` truncated to periods `<= cap`, sorted ascending.
pub fn ovr(eta: OvrDescriptor, cap: usize) -> Vec<OrpPair> {
    let mut out: Vec<OrpPair> = match eta {
        OvrDescriptor::Zero => all_pairs(cap).collect(),
        OvrDescriptor::RationalTail { r, s, tail } => {
            let cutoff = Ratio::new(r as i64, s as i64);
            let mut v: Vec<OrpPair> = all_pairs(cap).filter(|o| o.ratio() > cutoff).collect();
            v.extend(
                sh_set(tail, cap / s)
                    .into_iter()
                    .map(|m| OrpPair { p: m * r, q: m * s }),
            );
            v
        }
    };
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orp(p: usize, q: usize) -> OrpPair {
        OrpPair::new(p, q).unwrap()
    }

    #[test]
    fn sharkovsky() {
        assert!(sharkovsky_precedes(3, 5).unwrap());
        assert!(sharkovsky_precedes(6, 4).unwrap());
        assert!(!sharkovsky_precedes(1, 1).unwrap());
        assert!(sharkovsky_precedes(2, 1).unwrap());
        assert!(sharkovsky_precedes(99, 6).unwrap());
        assert!(sharkovsky_precedes(12, 8).unwrap());
        assert!(sharkovsky_precedes(0, 1).is_err());
    }

    #[test]
    fn sh_sets() {
        assert_eq!(sh_set(ShKey::TwoInfinity, 10), vec![1, 2, 4, 8]);
        assert_eq!(sh_set(ShKey::Finite(3), 8), (1..=8).collect::<Vec<_>>());
        assert_eq!(sh_set(ShKey::Finite(2), 10), vec![1, 2]);
        assert_eq!(sh_set(ShKey::Finite(6), 12), vec![1, 2, 4, 6, 8, 10, 12]);
    }

    #[test]
    fn star_order() {
        assert!(star_precedes(4, 6).unwrap());
        assert!(star_precedes(6, 3).unwrap());
        assert!(star_precedes(10, 5).unwrap());
        assert!(!star_precedes(3, 3).unwrap());
        assert!(star_precedes(2, 3).is_err());
    }

    #[test]
    fn n_r_sets() {
        assert_eq!(n_r(3, 10).unwrap(), vec![3, 5, 7, 8, 9, 10]);
        assert_eq!(n_r(6, 10).unwrap(), vec![3, 5, 6, 7, 8, 9, 10]);
        assert_eq!(n_r(4, 6).unwrap(), vec![3, 4, 5, 6]);
    }

    #[test]
    fn eta_table() {
        assert_eq!(eta(7).unwrap(), orp(3, 7));
        assert_eq!(eta(6).unwrap(), orp(2, 6));
        assert_eq!(eta(4).unwrap(), orp(1, 4));
        assert!(eta(2).is_err());
    }

    #[test]
    fn orp_order() {
        assert!(orp_precedes(orp(1, 4), orp(1, 3)));
        assert!(orp_precedes(orp(2, 6), orp(1, 3)));
        assert!(!orp_precedes(orp(1, 3), orp(1, 3)));
        assert!(!orp_precedes(orp(1, 2), orp(1, 4)));
        assert!(orp_precedes(orp(2, 4), orp(1, 2)));
    }

    #[test]
    fn ovr_sets() {
        assert_eq!(
            ovr(OvrDescriptor::Zero, 4),
            vec![orp(1, 2), orp(1, 3), orp(1, 4), orp(2, 4)]
        );
        let mut expected = vec![
            orp(1, 2),
            orp(2, 4),
            orp(3, 6),
            orp(2, 5),
            orp(3, 7),
            orp(2, 6),
            orp(1, 3),
        ];
        expected.sort();
        let d = OvrDescriptor::rational(1, 3, ShKey::Finite(2)).unwrap();
        assert_eq!(ovr(d, 7), expected);
        let d = OvrDescriptor::rational(1, 2, ShKey::Finite(1)).unwrap();
        assert_eq!(ovr(d, 4), vec![orp(1, 2)]);
        assert!(OvrDescriptor::rational(2, 3, ShKey::Finite(1)).is_err());
    }

    // Ovr((r/s, n)) for finite n is the ⋗-down-set of (nr, ns) plus that pair.
    #[test]
    fn ovr_matches_down_set() {
        for (r, s) in [(1, 2), (1, 3), (1, 4), (2, 5), (1, 5), (3, 7)] {
            for tail in 1..=4 {
                let d = OvrDescriptor::rational(r, s, ShKey::Finite(tail)).unwrap();
                let top = orp(tail * r, tail * s);
                let cap = 12;
                let mut down: Vec<OrpPair> = all_pairs(cap)
                    .filter(|&o| o == top || orp_precedes(top, o))
                    .collect();
                down.sort();
                assert_eq!(ovr(d, cap), down, "r/s={r}/{s} tail={tail}");
            }
        }
    }
}
