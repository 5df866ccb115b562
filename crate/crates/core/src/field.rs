//! Finite fields `F_{p^m}` small enough to tabulate.
//!
//! Elements are encoded as integers `c_0 + c_1 p + … + c_{m−1} p^{m−1}` for
//! the residue polynomial `Σ c_k α^k`, where `α` is a root of the modulus.
//! The modulus is chosen primitive, so `α` generates the unit group and
//! multiplication goes through log/exp tables.

use std::fmt;

use serde::Serialize;

use crate::arith::{prime_factors, require_prime};
use crate::{Error, Result};

/// Default resource ceiling on the number of field elements.
pub const DEFAULT_FIELD_CEILING: u64 = 100_000;

pub type Elem = u32;

#[derive(Clone)]
pub struct FqField {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.m, self.modulus)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FqField {}

impl Serialize for FqField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            p: u64,
            degree: u32,
            modulus: &'a [u64],
        }
        Repr { p: self.p, degree: self.m, modulus: &self.modulus }.serialize(s)
    }
}

/// Polynomials over `F_p` as coefficient vectors, lowest degree first.
mod poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, f, p)
    }

    fn inv_mod_p(a: u64, p: u64) -> u64 {
        let mut r = 1;
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

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let f = trim(f.to_vec());
        let d = f.len() - 1;
        let lead_inv = inv_mod_p(f[d], p);
        while a.len() > d {
            let k = a.len() - 1 - d;
            let c = a[a.len() - 1] * lead_inv % p;
            for i in 0..=d {
                a[k + i] = (a[k + i] + p * p - c * f[i] % p) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^{p^k} mod f`.
    pub fn frobenius_power_of_x(f: &[u64], p: u64, k: u32) -> Vec<u64> {
        let mut x = rem(&[0, 1], f, p);
        for _ in 0..k {
            let base = x.clone();
            let mut r = vec![1];
            let mut e = p;
            let mut b = base;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul_mod(&r, &b, f, p);
                }
                b = mul_mod(&b, &b, f, p);
                e >>= 1;
            }
            x = r;
        }
        x
    }

    /// Rabin's test for a monic `f` of degree `m`.
    pub fn is_irreducible(f: &[u64], p: u64, m: u32, prime_divisors: &[u64]) -> bool {
        let x = vec![0, 1];
        if sub(&frobenius_power_of_x(f, p, m), &rem(&x, f, p), p) != Vec::<u64>::new() {
            return false;
        }
        prime_divisors.iter().all(|&r| {
            let h = sub(&frobenius_power_of_x(f, p, m / r as u32), &rem(&x, f, p), p);
            gcd(f, &h, p).len() == 1
        })
    }
}

impl FqField {
    /// The field with `p^m` elements, refusing sizes above the default ceiling.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_ceiling(p, m, DEFAULT_FIELD_CEILING)
    }

    pub fn with_ceiling(p: u64, m: u32, ceiling: u64) -> Result<Self> {
        require_prime(p)?;
        if m == 0 {
            return Err(Error::InvalidArgument("field degree must be positive".into()));
        }
        let q = p.checked_pow(m).filter(|&q| q <= ceiling).ok_or_else(|| Error::FieldCeiling {
            size: format!("{p}^{m}"),
            ceiling,
        })?;
        let divisors = prime_factors(m as u64);
        // Monic polynomials x^m + c_{m-1} x^{m-1} + … + c_0 in lexicographic order.
        for code in 0..q {
            let mut modulus: Vec<u64> = (0..m).map(|k| code / p.pow(k) % p).collect();
            modulus.push(1);
            if modulus[0] == 0 && m > 1 {
                continue;
            }
            if let Some(f) = Self::try_primitive(p, m, q, &modulus) {
                if !poly::is_irreducible(&modulus, p, m, &divisors) {
                    return Err(Error::InvalidArgument(format!("modulus {modulus:?} failed the irreducibility test")));
                }
                return Ok(f);
            }
        }
        Err(Error::InvalidArgument(format!("no primitive polynomial of degree {m} over F_{p}")))
    }

    /// Builds the tables if `α = x mod f` has order `q − 1`.
    fn try_primitive(p: u64, m: u32, q: u64, modulus: &[u64]) -> Option<Self> {
        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur: Vec<u64> = vec![0; m as usize];
        cur[0] = 1;
        for k in 0..n {
            let code = encode(&cur, p);
            if log[code as usize] != u32::MAX {
                return None;
            }
            log[code as usize] = k as u32;
            exp.push(code);
            // cur ← cur · x mod f
            let top = cur[m as usize - 1];
            for i in (1..m as usize).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for i in 0..m as usize {
                cur[i] = (cur[i] + p * p - top * modulus[i] % p) % p;
            }
        }
        if encode(&cur, p) != 1 {
            return None;
        }
        Some(FqField { p, m, q, modulus: modulus.to_vec(), exp, log })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// The primitive element `α`.
    pub fn generator(&self) -> Elem {
        self.exp[1 % self.exp.len()]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, a: i64) -> Elem {
        a.rem_euclid(self.p as i64) as Elem
    }

    pub fn coefficients(&self, x: Elem) -> Vec<u64> {
        let mut x = x as u64;
        (0..self.m)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, c: &[u64]) -> Elem {
        encode(c, self.p)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (p, mut a, mut b) = (self.p as u32, a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let (p, mut a) = (self.p as u32, a);
        let (mut out, mut place) = (0, 1);
        while a > 0 {
            out += (p - a % p) % p * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize] as u64) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete logarithm to base `α`.
    pub fn log(&self, a: Elem) -> Option<u64> {
        (a != 0).then(|| self.log[a as usize] as u64)
    }

    pub fn exp(&self, k: u64) -> Elem {
        self.exp[(k % (self.q - 1)) as usize]
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p)
    }

    /// `x ↦ x^{p^{m−1}}`, the inverse of Frobenius.
    pub fn frobenius_inv(&self, a: Elem) -> Elem {
        self.pow(a, self.q / self.p)
    }

    pub fn in_prime_field(&self, a: Elem) -> bool {
        self.frobenius(a) == a
    }

    /// Absolute trace to `F_p`, as an integer in `[0, p)`.
    pub fn trace(&self, a: Elem) -> u64 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.m {
            t = self.add(t, x);
            x = self.frobenius(x);
        }
        debug_assert!((t as u64) < self.p);
        t as u64
    }

    /// The subfield of elements fixed by `x ↦ x^{p^d}`, for `d | m`.
    pub fn subfield_elements(&self, d: u32) -> Vec<Elem> {
        let pd = self.p.pow(d);
        self.elements().filter(|&x| self.pow(x, pd) == x).collect()
    }

    /// A field embedding into `big`, sending `α` to the least root of the modulus.
    pub fn embedding_into(&self, big: &FqField) -> Result<Embedding> {
        if big.p != self.p || big.m % self.m != 0 {
            return Err(Error::InvalidArgument(format!("F_{}^{} does not embed in F_{}^{}", self.p, self.m, big.p, big.m)));
        }
        let root = big
            .elements()
            .find(|&x| {
                let mut acc = 0;
                for &c in self.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, x), big.from_int(c as i64));
                }
                acc == 0
            })
            .ok_or_else(|| Error::InvalidArgument("modulus has no root in the larger field".into()))?;
        let image: Vec<Elem> = self.elements().map(|x| if x == 0 { 0 } else { big.pow(root, self.log[x as usize] as u64) }).collect();
        Ok(Embedding { image })
    }
}

fn encode(c: &[u64], p: u64) -> Elem {
    c.iter().rev().fold(0u64, |acc, &x| acc * p + x) as Elem
}

/// A field embedding, tabulated.
#[derive(Clone, Debug)]
pub struct Embedding {
    image: Vec<Elem>,
}

impl Embedding {
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x as usize]
    }
}
