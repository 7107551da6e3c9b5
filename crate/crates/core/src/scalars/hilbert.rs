//! Places of Q, Hilbert symbols and local square classes.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::{factorize, valuation, FactorBound};
use super::gf::is_prime_u64;
use super::Rational;
use crate::error::{invalid, Result};

/// A place of Q: the real place or a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Place::Prime(p))
        } else {
            Err(invalid!("{p} is not prime"))
        }
    }

    /// "inf" or a decimal prime.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(Place::Infinite),
            t => Place::prime(t.parse().map_err(|_| invalid!("bad place {s:?}"))?),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// How a place of Q behaves in a quadratic extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Integer in the same square class as a nonzero rational.
fn integral_class(r: &Rational) -> Result<BigInt> {
    if r.is_zero() {
        return Err(invalid!("zero has no square class"));
    }
    Ok(r.numer() * r.denom())
}

fn legendre(u: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let e = BigInt::from((p - 1) / 2);
    let r = u.mod_floor(&pb).modpow(&e, &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u32 {
    u.mod_floor(&BigInt::from(8)).to_u32().unwrap()
}

/// (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> Result<i8> {
    let a = integral_class(a)?;
    let b = integral_class(b)?;
    Ok(match v {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = valuation(&a, 2);
            let (beta, w) = valuation(&b, 2);
            let eps = |x: &BigInt| ((mod8(x) + 7) % 8 / 2) % 2; // (x-1)/2 mod 2
            let omega = |x: &BigInt| {
                let m = mod8(x);
                if m == 3 || m == 5 {
                    1
                } else {
                    0
                }
            };
            let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = valuation(&a, p);
            let (beta, w) = valuation(&b, p);
            let mut s: i8 = 1;
            if (alpha as u64 * beta as u64 * ((p - 1) / 2)) % 2 == 1 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&w, p);
            }
            s
        }
    })
}

/// Whether m is a square in Q_v.
pub fn is_local_square(m: &Rational, v: Place) -> Result<bool> {
    Ok(splitting(m, v)? == Splitting::Split)
}

/// Behaviour of v in Q(sqrt m); "split" also covers m a square.
pub fn splitting(m: &Rational, v: Place) -> Result<Splitting> {
    let m = integral_class(m)?;
    Ok(match v {
        Place::Infinite => {
            if m.is_positive() {
                Splitting::Split
            } else {
                Splitting::Ramified
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = valuation(&m, 2);
            if alpha % 2 == 1 {
                Splitting::Ramified
            } else {
                match mod8(&u) {
                    1 => Splitting::Split,
                    5 => Splitting::Inert,
                    _ => Splitting::Ramified,
                }
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = valuation(&m, p);
            if alpha % 2 == 1 {
                Splitting::Ramified
            } else if legendre(&u, p) == 1 {
                Splitting::Split
            } else {
                Splitting::Inert
            }
        }
    })
}

/// Places at which a symbol built from these entries can be nontrivial:
/// the real place, 2, and every prime dividing a numerator or denominator.
pub fn relevant_places(entries: &[Rational], bound: FactorBound) -> Result<Vec<Place>> {
    let mut set = BTreeSet::new();
    set.insert(Place::Infinite);
    set.insert(Place::Prime(2));
    for r in entries {
        if r.is_zero() {
            return Err(invalid!("zero symbol entry"));
        }
        for n in [r.numer(), r.denom()] {
            for (p, _) in factorize(n, bound)? {
                set.insert(Place::Prime(p));
            }
        }
    }
    Ok(set.into_iter().collect())
}
