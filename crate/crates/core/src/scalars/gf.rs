//! Finite fields GF(p^k) at desk scale.
//!
//! Elements are encoded as integers `0..q` whose base-p digits are the
//! coefficients of a polynomial in the generator, lowest degree first.
//! Multiplication goes through log/antilog tables built once per field.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug)]
pub struct GfCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Monic defining polynomial, coefficients lowest degree first (length k+1).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for GfCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for GfCtx {}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GfCtx {
    /// Builds GF(p^k) with the first irreducible monic polynomial found in
    /// enumeration order.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime_u64(p as u64) {
            return Err(invalid!("{p} is not prime"));
        }
        if k == 0 {
            return Err(invalid!("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(k).filter(|q| *q <= MAX_ORDER).ok_or_else(|| {
            crate::error::Error::InputTooLarge(alloc::format!("GF({p}^{k}) exceeds table bound"))
        })?;
        let modulus = first_irreducible(p, k);
        Self::with_modulus(p, k, q as u32, modulus)
    }

    /// Builds GF(p^k) from an explicit monic polynomial, which is checked for
    /// irreducibility by exhaustive division.
    pub fn with_polynomial(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime_u64(p as u64) {
            return Err(invalid!("{p} is not prime"));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(invalid!("defining polynomial must be monic of degree >= 1"));
        }
        if modulus.iter().any(|c| *c >= p) {
            return Err(invalid!("coefficients must be reduced mod {p}"));
        }
        let k = (modulus.len() - 1) as u32;
        if !is_irreducible(p, &modulus) {
            return Err(invalid!("defining polynomial is reducible over GF({p})"));
        }
        let q = (p as u64).checked_pow(k).filter(|q| *q <= MAX_ORDER).ok_or_else(|| {
            crate::error::Error::InputTooLarge(alloc::format!("GF({p}^{k}) exceeds table bound"))
        })?;
        Self::with_modulus(p, k, q as u32, modulus)
    }

    fn with_modulus(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> Result<Self> {
        let mut ctx = GfCtx { p, k, q, modulus, exp: Vec::new(), log: Vec::new() };
        // find a primitive element by brute force
        let order = q - 1;
        for g in 1..q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = ctx.slow_mul(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; q as usize];
                for (i, e) in exp.iter().enumerate() {
                    log[*e as usize] = i as u32;
                }
                ctx.exp = exp;
                ctx.log = log;
                return Ok(ctx);
            }
        }
        Err(invalid!("no primitive element found; defining polynomial not irreducible"))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, c| acc * self.p + c)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c != 0 {
                for (i, m) in self.modulus.iter().enumerate().take(k) {
                    let idx = deg - k + i;
                    prod[idx] = (prod[idx] + (p - c) * *m as u64) % p;
                }
                prod[deg] = 0;
            }
        }
        let d: Vec<u32> = prod[..k].iter().map(|c| *c as u32).collect();
        self.undigits(&d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.undigits(&d)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Some(self.exp[l as usize])
    }

    /// Integer n mapped into the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// x^((q-1)/2) == 1 for odd characteristic; everything is a square in char 2.
    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.p == 2 {
            return true;
        }
        self.log[a as usize] % 2 == 0
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        if self.p == 2 {
            // squaring is a bijection; halve the log modulo the odd group order
            let n = self.q - 1;
            let half = if l % 2 == 0 { l / 2 } else { (l + n) / 2 };
            return Some(self.exp[half as usize]);
        }
        if l % 2 == 0 {
            Some(self.exp[(l / 2) as usize])
        } else {
            None
        }
    }
}

fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = num.iter().map(|c| *c as u64).collect();
    let dd = den.len() - 1;
    let lead_inv = modinv(den[dd] as u64, p64);
    while r.len() > dd && !r.is_empty() {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p64;
        if c != 0 {
            for (i, dc) in den.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = (r[idx] + (p64 - c) * *dc as u64 % p64) % p64;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn modinv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg);
    (0..count).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            coeffs.push((idx % p as u64) as u32);
            idx /= p as u64;
        }
        coeffs.push(1);
        coeffs
    })
}

/// Exhaustive test: no monic factor of degree 1..=deg/2.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = (poly.len() - 1) as u32;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for f in monic_polys(p, d) {
            if poly_rem(p, poly, &f).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    monic_polys(p, k)
        .find(|f| is_irreducible(p, f))
        .expect("irreducible polynomials exist in every degree")
}
