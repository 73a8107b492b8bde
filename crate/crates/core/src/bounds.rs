//! Exact evaluation of the length and size bounds.

pub use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::{Error, Result};

/// `l_k(c) = 1 + sum_{i=0}^{k} c (c+1)^i`.
pub fn bound_lk(k: u32, c: &BigUint) -> BigUint {
    let mut total = BigUint::one();
    let mut power = BigUint::one();
    let step = c + 1u32;
    for _ in 0..=k {
        total += c * &power;
        power *= &step;
    }
    total
}

/// The exponent `p^2 + s^2 + 2s + q^(p+s) (4p + 2s) + q^(2s+1)`.
pub fn plength_exponent(p: u32, s: u32, q: u32) -> BigUint {
    let qb = BigUint::from(q);
    let (pb, sb) = (BigUint::from(p), BigUint::from(s));
    &pb * &pb + &sb * &sb + 2u32 * &sb + qb.pow(p + s) * (4u32 * &pb + 2u32 * &sb) + qb.pow(2 * s + 1)
}

/// `(2p + 1) * q^exponent`, bounding the length of non-redundant profiles.
pub fn bound_plength(p: u32, s: u32, q: u32) -> Result<BigUint> {
    let e = plength_exponent(p, s, q);
    let e32 = e
        .to_u32()
        .ok_or_else(|| Error::BoundTooLarge(format!("exponent {e} does not fit in 32 bits")))?;
    if e32 > 1 << 26 {
        return Err(Error::BoundTooLarge(format!("q^{e32} has more than 2^26 digits")));
    }
    Ok(BigUint::from(2 * p + 1) * BigUint::from(q).pow(e32))
}

/// Intermediate values of the obstruction size bound for linear rank-width `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainBound {
    pub p: u32,
    pub q: u32,
    /// Label dimension used for the boundary, `p + 1`.
    pub s: u32,
    pub exponent: BigUint,
    /// Length of non-redundant profiles, `bound_plength(p, p + 1, q)`.
    pub c: BigUint,
    /// `l_{p+1}(c)`.
    pub bound: BigUint,
}

pub fn bound_main(p: u32, q: u32) -> Result<MainBound> {
    let s = p + 1;
    let c = bound_plength(p, s, q)?;
    let bound = bound_lk(p + 1, &c);
    Ok(MainBound {
        p,
        q,
        s,
        exponent: plength_exponent(p, s, q),
        c,
        bound,
    })
}

/// `true` when `n >= l_k(c)`.
pub fn forces_sequence(n: usize, k: u32, c: u32) -> bool {
    BigUint::from(n) >= bound_lk(k, &BigUint::from(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lk_values() {
        assert_eq!(bound_lk(0, &BigUint::from(5u32)), BigUint::from(6u32));
        assert_eq!(bound_lk(1, &BigUint::from(2u32)), BigUint::from(9u32));
        assert_eq!(bound_lk(2, &BigUint::from(1u32)), BigUint::from(8u32));
    }

    #[test]
    fn plength_value() {
        assert_eq!(plength_exponent(1, 1, 2), BigUint::from(36u32));
        assert_eq!(bound_plength(1, 1, 2).unwrap(), BigUint::from(3u32) << 36);
    }

    #[test]
    fn main_bound_shape() {
        let b = bound_main(0, 2).unwrap();
        assert_eq!(b.s, 1);
        assert_eq!(b.c, bound_plength(0, 1, 2).unwrap());
        assert_eq!(b.bound, bound_lk(1, &b.c));
        assert!(bound_main(4, 16).is_err());
    }
}
