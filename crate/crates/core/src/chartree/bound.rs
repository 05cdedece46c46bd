use alloc::boxed::Box;
use core::cmp::Ordering;
use core::fmt;

use super::CharTreeError;

/// A natural number that may be far beyond `u128`: either a plain value or
/// `2^exponent + offset` with a (possibly symbolic) exponent of at least 128.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerNum {
    Finite(u128),
    Power { exponent: Box<TowerNum>, offset: u128 },
}

impl TowerNum {
    fn power(exponent: TowerNum, offset: u128) -> Option<TowerNum> {
        if let TowerNum::Finite(e) = exponent {
            if e < 128 {
                return (1u128 << e).checked_add(offset).map(TowerNum::Finite);
            }
        }
        Some(TowerNum::Power {
            exponent: Box::new(exponent),
            offset,
        })
    }

    /// `2^self`.
    pub fn exp2(self) -> Option<TowerNum> {
        TowerNum::power(self, 0)
    }

    pub fn add_small(self, k: u128) -> Option<TowerNum> {
        match self {
            TowerNum::Finite(v) => match v.checked_add(k) {
                Some(s) => Some(TowerNum::Finite(s)),
                // 2^128 + (v + k - 2^128)
                None => TowerNum::power(TowerNum::Finite(128), v.wrapping_add(k)),
            },
            TowerNum::Power { exponent, offset } => TowerNum::power(*exponent, offset.checked_add(k)?),
        }
    }

    /// `self · 2^s`.
    pub fn mul_pow2(self, s: u32) -> Option<TowerNum> {
        match self {
            TowerNum::Finite(v) => {
                if v == 0 {
                    return Some(TowerNum::Finite(0));
                }
                if v.leading_zeros() >= s {
                    return Some(TowerNum::Finite(v << s));
                }
                // only powers of two are carried past u128
                if v.is_power_of_two() {
                    TowerNum::power(TowerNum::Finite(u128::from(v.trailing_zeros() + s)), 0)
                } else {
                    None
                }
            }
            TowerNum::Power { exponent, offset } => {
                let offset = offset.checked_mul(1u128.checked_shl(s)?)?;
                TowerNum::power(exponent.add_small(u128::from(s))?, offset)
            }
        }
    }

    /// `self^(2^s)`, defined for plain values and exact powers of two.
    pub fn pow_pow2(self, s: u32) -> Option<TowerNum> {
        match self {
            TowerNum::Finite(v) => {
                let mut acc = v;
                for _ in 0..s {
                    match acc.checked_mul(acc) {
                        Some(x) => acc = x,
                        None => {
                            if !v.is_power_of_two() {
                                return None;
                            }
                            let e = u128::from(v.trailing_zeros()) << s;
                            return TowerNum::power(TowerNum::Finite(e), 0);
                        }
                    }
                }
                Some(TowerNum::Finite(acc))
            }
            TowerNum::Power { exponent, offset: 0 } => TowerNum::power(exponent.mul_pow2(s)?, 0),
            TowerNum::Power { .. } => None,
        }
    }

    pub fn as_u128(&self) -> Option<u128> {
        match self {
            TowerNum::Finite(v) => Some(*v),
            TowerNum::Power { .. } => None,
        }
    }
}

impl Ord for TowerNum {
    fn cmp(&self, other: &TowerNum) -> Ordering {
        match (self, other) {
            (TowerNum::Finite(a), TowerNum::Finite(b)) => a.cmp(b),
            (TowerNum::Finite(_), TowerNum::Power { .. }) => Ordering::Less,
            (TowerNum::Power { .. }, TowerNum::Finite(_)) => Ordering::Greater,
            (
                TowerNum::Power {
                    exponent: e1,
                    offset: o1,
                },
                TowerNum::Power {
                    exponent: e2,
                    offset: o2,
                },
            ) => e1.cmp(e2).then(o1.cmp(o2)),
        }
    }
}

impl PartialOrd for TowerNum {
    fn partial_cmp(&self, other: &TowerNum) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq<u128> for TowerNum {
    fn eq(&self, other: &u128) -> bool {
        self.as_u128() == Some(*other)
    }
}

impl PartialOrd<u128> for TowerNum {
    fn partial_cmp(&self, other: &u128) -> Option<Ordering> {
        Some(self.cmp(&TowerNum::Finite(*other)))
    }
}

impl fmt::Display for TowerNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerNum::Finite(v) => write!(f, "{v}"),
            TowerNum::Power { exponent, offset } => {
                write!(f, "2^({exponent})")?;
                if *offset > 0 {
                    write!(f, " + {offset}")?;
                }
                Ok(())
            }
        }
    }
}

/// `exp^(i)(x)`: `exp^(0)(x) = x`, `exp^(1)(x) = 2^x` and
/// `exp^(i)(x) = 2^(2 · exp^(i-1)(x))`.
pub fn tower(i: usize, x: u128) -> Option<TowerNum> {
    let mut v = TowerNum::Finite(x);
    for k in 0..i {
        if k > 0 {
            v = v.mul_pow2(1)?;
        }
        v = v.exp2()?;
    }
    Some(v)
}

/// Upper bounds on the number of distinct reduced characteristic trees of
/// depth `q` and on the size of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeBound {
    /// `|τ| · q^r + ⌈q log₂ q⌉ + q²`.
    pub exponent_base: u128,
    /// `exp^(q+1)` of the base.
    pub num_trees: TowerNum,
    /// `(exp^(q)` of the base`)^4`.
    pub tree_size: TowerNum,
}

/// `⌈log₂(q^q)⌉`.
fn ceil_q_log_q(q: u128) -> Option<u128> {
    let mut qq: u128 = 1;
    for _ in 0..q {
        qq = qq.checked_mul(q)?;
    }
    Some(u128::from(128 - (qq - 1).leading_zeros()) * u128::from(qq > 1))
}

/// The size bounds for a vocabulary of `tau_size` relations of arity at most
/// `arity` (graphs with `t` labels have `tau_size = t + 1`, `arity = 2`).
pub fn size_bound(q: usize, tau_size: usize, arity: u32) -> Result<SizeBound, CharTreeError> {
    let overflow = CharTreeError::BoundOverflow;
    let q128 = q as u128;
    let base = (tau_size as u128)
        .checked_mul(q128.checked_pow(arity).ok_or(overflow.clone())?)
        .and_then(|a| a.checked_add(ceil_q_log_q(q128)?))
        .and_then(|a| a.checked_add(q128.checked_mul(q128)?))
        .ok_or(overflow.clone())?;
    let num_trees = tower(q + 1, base).ok_or(overflow.clone())?;
    let tree_size = tower(q, base)
        .and_then(|t| t.pow_pow2(2))
        .ok_or(overflow)?;
    Ok(SizeBound {
        exponent_base: base,
        num_trees,
        tree_size,
    })
}
