//! Table-driven arithmetic in a single finite field GF(p^e).
//!
//! Elements are stored by their wire encoding: the coefficient vector
//! c_0..c_{e-1} in the power basis of the generator, read as the base-p
//! integer sum c_i p^i (c_0 least significant). Multiplication goes through
//! discrete-log tables built from the least-encoding primitive element,
//! addition through Zech logarithms (or XOR / modular addition where the
//! field allows it).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly;
use crate::error::{Error, Result};

/// Largest field order for which arithmetic tables are built by default.
pub const DEFAULT_MAX_FIELD_ORDER: u64 = 1 << 22;

const NONE: u32 = u32::MAX;

/// An element of some [`FieldCtx`], stored by its base-p encoding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn encoding(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// GF(2^e): addition is XOR of encodings.
    Binary,
    /// GF(p), p odd: plain modular arithmetic.
    Prime,
    /// GF(p^e), p odd, e > 1: Zech logarithms.
    General,
}

pub struct FieldCtx {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    kind: Kind,
    /// exp[i] = g^i for 0 <= i < 2(order-1), so products of logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    primitive: FieldElem,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(p^e) with the least-encoding monic irreducible modulus.
    pub fn new(p: u64, degree: u32, max_order: u64) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if degree == 0 {
            return Err(Error::InvalidParameter("extension degree must be positive".into()));
        }
        check_order(p, degree, max_order)?;
        let modulus = poly::least_irreducible(p, degree);
        Self::with_modulus(p, &modulus, max_order)
    }

    /// Builds GF(p^e) from an explicit monic modulus c_0..c_e.
    pub fn with_modulus(p: u64, modulus: &[u64], max_order: u64) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus("coefficient out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulus("not monic".into()));
        }
        if !poly::is_irreducible(modulus, p) {
            return Err(Error::BadModulus("not irreducible".into()));
        }
        let degree = (modulus.len() - 1) as u32;
        check_order(p, degree, max_order)?;
        let order = p.pow(degree) as u32;
        let kind = if p == 2 {
            Kind::Binary
        } else if degree == 1 {
            Kind::Prime
        } else {
            Kind::General
        };
        let mut ctx = FieldCtx {
            p: p as u32,
            degree,
            order,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            kind,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            primitive: FieldElem::ONE,
        };
        ctx.build_tables();
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        let q1 = (self.order - 1) as u64;
        let primitive = (1..self.order)
            .map(FieldElem)
            .find(|&c| self.is_primitive_slow(c, q1))
            .expect("multiplicative group is cyclic");
        self.primitive = primitive;

        // Multiplication by the primitive element as a GF(p)-linear map.
        let e = self.degree as usize;
        let columns: Vec<Vec<u32>> = (0..e)
            .map(|j| {
                let basis = self.from_digits(&unit(e, j));
                self.digits(self.mul_slow(primitive, basis))
            })
            .collect();

        let q1 = q1 as usize;
        let mut exp = vec![0u32; 2 * q1.max(1)];
        let mut log = vec![NONE; self.order as usize];
        let mut cur = vec![0u32; e];
        cur[0] = 1;
        let p = self.p as u64;
        for i in 0..q1 {
            let enc = self.from_digits(&cur).0;
            exp[i] = enc;
            log[enc as usize] = i as u32;
            let mut next = vec![0u64; e];
            for (j, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (t, &v) in columns[j].iter().enumerate() {
                    next[t] = (next[t] + c as u64 * v as u64) % p;
                }
            }
            cur = next.into_iter().map(|v| v as u32).collect();
        }
        for i in 0..q1 {
            exp[q1 + i] = exp[i];
        }
        log[0] = 0;
        self.exp = exp;
        self.log = log;

        if self.kind == Kind::General {
            let mut zech = vec![NONE; q1];
            for (i, z) in zech.iter_mut().enumerate() {
                let x = self.exp[i];
                let d0 = x % self.p;
                let y = x - d0 + (d0 + 1) % self.p;
                if y != 0 {
                    *z = self.log[y as usize];
                }
            }
            self.zech = zech;
        }
    }

    fn is_primitive_slow(&self, c: FieldElem, q1: u64) -> bool {
        if q1 == 1 {
            return c == FieldElem::ONE;
        }
        let mut m = q1;
        let mut d = 2u64;
        let mut factors = Vec::new();
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        factors.into_iter().all(|r| self.pow_slow(c, q1 / r) != FieldElem::ONE)
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * da.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let e = self.degree as usize;
        for top in (e..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for i in 0..=e {
                let idx = top - e + i;
                prod[idx] = (prod[idx] + p * p - c * self.modulus[i] as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&v| v as u32).collect();
        self.from_digits(&digits)
    }

    fn pow_slow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut r = FieldElem::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Defining polynomial c_0..c_e (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The least-encoding generator of the multiplicative group.
    pub fn primitive(&self) -> FieldElem {
        self.primitive
    }

    /// Residue class of the indeterminate.
    pub fn generator(&self) -> FieldElem {
        if self.degree == 1 {
            // x ≡ -c_0 in GF(p)[x]/(x + c_0)
            FieldElem((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElem(self.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    pub fn check(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 < self.order {
            Ok(a)
        } else {
            Err(Error::ElementOutOfRange(a.0 as u64))
        }
    }

    pub fn from_u64(&self, v: u64) -> Result<FieldElem> {
        if v < self.order as u64 {
            Ok(FieldElem(v as u32))
        } else {
            Err(Error::ElementOutOfRange(v))
        }
    }

    /// Embedding of the integer `c` (mod p) into the field.
    pub fn from_int(&self, c: i64) -> FieldElem {
        FieldElem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.degree)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElem {
        let mut v = 0u32;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        FieldElem(v)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match self.kind {
            Kind::Binary => FieldElem(a.0 ^ b.0),
            Kind::Prime => {
                let s = a.0 + b.0;
                FieldElem(if s >= self.p { s - self.p } else { s })
            }
            Kind::General => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let la = self.log[a.0 as usize];
                let lb = self.log[b.0 as usize];
                let q1 = self.order - 1;
                let d = if lb >= la { lb - la } else { lb + q1 - la };
                let z = self.zech[d as usize];
                if z == NONE {
                    FieldElem::ZERO
                } else {
                    FieldElem(self.exp[(la + z) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match self.kind {
            Kind::Binary => a,
            Kind::Prime => FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 }),
            Kind::General => {
                if a.0 == 0 {
                    a
                } else {
                    let half = (self.order - 1) / 2;
                    FieldElem(self.exp[(self.log[a.0 as usize] + half) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.kind == Kind::Prime {
            return FieldElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let q1 = self.order - 1;
        let l = self.log[a.0 as usize];
        Some(FieldElem(self.exp[((q1 - l) % q1.max(1)) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let q1 = (self.order - 1) as u64;
        if q1 <= 1 {
            return a;
        }
        self.exp_log_scaled(a, e % q1)
    }

    /// a^(g-exponent) for a signed exponent.
    pub fn pow_signed(&self, a: FieldElem, e: i64) -> Option<FieldElem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(ai, e.unsigned_abs()))
        }
    }

    /// Discrete log base the primitive element; `None` for zero.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// primitive^i
    pub fn exp(&self, i: u64) -> FieldElem {
        let q1 = (self.order - 1) as u64;
        FieldElem(self.exp[(i % q1.max(1)) as usize])
    }

    /// a^(p^r), the r-th power of the absolute Frobenius.
    pub fn frobenius_p(&self, a: FieldElem, r: u32) -> FieldElem {
        if a.0 == 0 || r == 0 {
            return a;
        }
        let q1 = (self.order - 1) as u64;
        let e = poly::pow_mod(self.p as u64, r as u64, q1);
        self.exp_log_scaled(a, e)
    }

    /// exp(log(a) * e) for nonzero a with e already reduced mod (order - 1).
    #[inline]
    pub(crate) fn exp_log_scaled(&self, a: FieldElem, e: u64) -> FieldElem {
        if a.0 == 0 {
            return a;
        }
        let q1 = (self.order - 1) as u64;
        if q1 <= 1 {
            return a;
        }
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[((l * e) % q1) as usize])
    }

    pub fn sum<I: IntoIterator<Item = FieldElem>>(&self, it: I) -> FieldElem {
        it.into_iter().fold(FieldElem::ZERO, |acc, x| self.add(acc, x))
    }
}

fn unit(len: usize, j: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[j] = 1;
    v
}

fn check_order(p: u64, degree: u32, max_order: u64) -> Result<()> {
    let order = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
    if order > max_order as u128 || order > u32::MAX as u128 {
        return Err(Error::FieldTooLarge { order, limit: max_order });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, e: u32) -> FieldCtx {
        FieldCtx::new(p, e, DEFAULT_MAX_FIELD_ORDER).unwrap()
    }

    #[test]
    fn gf4_square_of_omega() {
        let f = gf(2, 2);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.generator();
        assert_eq!(w, FieldElem(2));
        // ω² = ω + 1 -> digits (1, 1) -> 3
        assert_eq!(f.mul(w, w), FieldElem(3));
    }

    #[test]
    fn gf16_modulus() {
        assert_eq!(gf(2, 4).modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn tables_agree_with_schoolbook_multiplication() {
        for (p, e) in [(2, 4), (3, 2), (3, 3), (5, 2), (7, 1), (2, 1)] {
            let f = gf(p, e);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b), "p={p} e={e}");
                    let da = f.digits(a);
                    let db = f.digits(b);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % f.p).collect();
                    assert_eq!(f.add(a, b), f.from_digits(&sum));
                    assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn frobenius_p_is_additive() {
        let f = gf(3, 3);
        for a in f.elements() {
            for b in f.elements().step_by(5) {
                assert_eq!(f.frobenius_p(f.add(a, b), 1), f.add(f.frobenius_p(a, 1), f.frobenius_p(b, 1)));
            }
            assert_eq!(f.frobenius_p(a, 3), a);
            assert_eq!(f.frobenius_p(a, 0), a);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(FieldCtx::new(4, 1, 1 << 20), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(2, 30, 1 << 20), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(FieldCtx::with_modulus(2, &[1, 0, 1], 1 << 20), Err(Error::BadModulus(_))));
    }
}
