//! Exact arithmetic in GF(p^m).
//!
//! A [`Field`] is a cheap-to-clone handle on an immutable field description.
//! Elements are stored by their canonical index `c0 + c1*p + ... + c(m-1)*p^(m-1)`
//! where `c0..c(m-1)` are the coefficients of the residue polynomial, low degree
//! first. Index order is the canonical enumeration order: `0, 1, 2, ...` for prime
//! fields and lexicographic on coefficient vectors (highest degree most
//! significant) for extensions, e.g. GF(4) enumerates as `0, 1, x, x+1`.
//!
//! Fields of order up to 2^16 carry log/antilog tables built from the smallest
//! primitive element; larger fields (up to 2^20) fall back to direct reduction.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
/// Largest order for which log/antilog tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 16;

#[derive(Debug)]
struct Tables {
    /// `exp[i] = g^i`, doubled in length so `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    /// `log[g^i] = i`; `log[0]` is unused.
    log: Vec<u32>,
}

#[derive(Debug)]
struct FieldInner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, `m + 1` coefficients low degree first. Empty for prime fields.
    modulus: Vec<u32>,
    primitive: u32,
    tables: Option<Tables>,
}

/// A finite field GF(p^m) with a fixed modulus.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl Field {
    /// Builds GF(p^m). When `modulus` is `None` and `m > 1`, the lexicographically
    /// first monic irreducible polynomial of degree `m` is used.
    ///
    /// `modulus` holds `m + 1` coefficients, low degree first, with leading 1.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidParams("field degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge {
                order: order.min(u64::MAX as u128) as u64,
            });
        }
        let p = p as u32;
        let modulus = if m == 1 {
            match modulus {
                None => Vec::new(),
                Some(c) if c.is_empty() => Vec::new(),
                Some(_) => {
                    return Err(Error::InvalidParams(
                        "prime fields take no modulus polynomial".into(),
                    ))
                }
            }
        } else {
            match modulus {
                Some(c) => {
                    if c.len() != m as usize + 1 || c[m as usize] != 1 {
                        return Err(Error::InvalidParams(format!(
                            "modulus must be monic with {} coefficients",
                            m + 1
                        )));
                    }
                    if c.iter().any(|&x| x >= p) {
                        return Err(Error::InvalidParams(
                            "modulus coefficients must be reduced mod p".into(),
                        ));
                    }
                    if !is_irreducible(c, p) {
                        return Err(Error::NotIrreducible {
                            characteristic: p,
                            degree: m,
                        });
                    }
                    c.to_vec()
                }
                None => first_irreducible(p, m),
            }
        };
        Ok(Self::build(p, m, modulus))
    }

    /// Builds the field of order `q` (a prime power) with the default modulus.
    pub fn with_order(q: u64) -> Result<Field> {
        match prime_power(q) {
            Some((p, m)) => Field::new(p, m, None),
            None if q > MAX_ORDER => Err(Error::FieldTooLarge { order: q }),
            None => Err(Error::InvalidParams(format!("{q} is not a prime power"))),
        }
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(m);
        let mut inner = FieldInner {
            p,
            m,
            q,
            modulus,
            primitive: 1,
            tables: None,
        };
        inner.primitive = find_primitive(&inner);
        if (q as u64) <= MAX_TABLE_ORDER {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for i in 0..n {
                exp[i] = x;
                exp[i + n] = x;
                log[x as usize] = i as u32;
                x = slow_mul(&inner, x, inner.primitive);
            }
            inner.tables = Some(Tables { exp, log });
        }
        Field(Arc::new(inner))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, low degree first. Empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_raw(self.clone(), 0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_raw(self.clone(), 1)
    }

    /// Element with the given canonical index.
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index >= self.0.q {
            return Err(Error::Parse(format!(
                "{index} is not an element index of GF({})",
                self.0.q
            )));
        }
        Ok(FieldElement::from_raw(self.clone(), index))
    }

    /// Image of an integer under the prime-subfield embedding.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let v = n.rem_euclid(self.0.p as i64) as u32;
        FieldElement::from_raw(self.clone(), v)
    }

    /// Element from residue coefficients, low degree first.
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.m as usize {
            return Err(Error::Parse(format!(
                "expected at most {} coefficients",
                self.0.m
            )));
        }
        let mut index = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(Error::Parse(format!("coefficient {c} not reduced mod {}", self.0.p)));
            }
            index = index * self.0.p + c;
        }
        Ok(FieldElement::from_raw(self.clone(), index))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.0.q)
            .map(|v| FieldElement::from_raw(self.clone(), v))
            .collect()
    }

    /// The smallest (by canonical index) generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement::from_raw(self.clone(), self.0.primitive)
    }

    /// An element of multiplicative order exactly `n`: `g^((q-1)/n)` for the
    /// primitive element `g`.
    pub fn nth_root_of_unity(&self, n: u64) -> Result<FieldElement> {
        let group = self.0.q as u64 - 1;
        if n == 0 || group % n != 0 {
            return Err(Error::NoSuchRoot {
                order: self.0.q as u64,
                n,
            });
        }
        let v = self.pow_raw(self.0.primitive, group / n);
        Ok(FieldElement::from_raw(self.clone(), v))
    }

    /// Parses an element in its text form: a decimal integer for prime fields,
    /// `c0,c1,...` for extensions.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if self.is_prime_field() {
            let v: u32 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad element '{s}'")))?;
            self.element(v)
        } else {
            let coeffs = s
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad element '{s}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            self.from_coefficients(&coeffs)
        }
    }

    pub(crate) fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    // Raw arithmetic on canonical indices. Callers guarantee the indices are < q.

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.m == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if f.p == 2 {
            a ^ b
        } else {
            digitwise(f.p, f.m, a, b, |x, y| (x + y) % f.p)
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.m == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else if f.p == 2 {
            a
        } else {
            digitwise(f.p, f.m, a, 0, |x, _| (f.p - x) % f.p)
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => slow_mul(&self.0, a, b),
        }
    }

    /// Inverse of a nonzero index.
    #[inline]
    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.0.tables {
            Some(t) => {
                let n = self.0.q - 1;
                Some(t.exp[((n - t.log[a as usize]) % n) as usize])
            }
            None => Some(self.pow_raw(a, self.0.q as u64 - 2)),
        }
    }

    pub(crate) fn pow_raw(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn pow_signed_raw(&self, a: u32, e: i64) -> Result<u32> {
        if e >= 0 {
            Ok(self.pow_raw(a, e as u64))
        } else {
            let inv = self.inv_raw(a).ok_or(Error::DivisionByZero)?;
            Ok(self.pow_raw(inv, e.unsigned_abs()))
        }
    }

    pub(crate) fn format_raw(&self, v: u32) -> String {
        if self.is_prime_field() {
            v.to_string()
        } else {
            digits(self.0.p, self.0.m, v)
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.m.hash(state);
        self.0.modulus.hash(state);
    }
}

/// Serialized as `p^m/c0,c1,...,cm` (modulus coefficients, low degree first).
/// Prime fields have an empty modulus list, e.g. `7^1/`.
impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self
            .0
            .modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{}^{}/{}", self.0.p, self.0.m, coeffs)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self)
    }
}

/// Accepts `p^m/coeffs`, `p^m` (default modulus) or a bare order `q`.
impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field spec '{s}'"));
        let (head, modulus) = match s.split_once('/') {
            Some((h, m)) => (h, Some(m.trim())),
            None => (s, None),
        };
        let (p, m) = match head.split_once('^') {
            Some((p, m)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                m.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => return Field::with_order(head.parse::<u64>().map_err(|_| bad())?),
        };
        match modulus {
            Some(list) if !list.is_empty() => {
                let coeffs = list
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Field::new(p, m, Some(&coeffs))
            }
            _ => Field::new(p, m, None),
        }
    }
}

/// An element of a [`Field`], held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub(crate) fn from_raw(field: Field, value: u32) -> Self {
        FieldElement { field, value }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Canonical index of the element.
    pub fn value(&self) -> u32 {
        self.value
    }

    /// Residue coefficients, low degree first, length `m`.
    pub fn coefficients(&self) -> Vec<u32> {
        digits(self.field.0.p, self.field.0.m, self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn try_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&rhs.field)?;
        Ok(self.with(self.field.add_raw(self.value, rhs.value)))
    }

    pub fn try_sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&rhs.field)?;
        Ok(self.with(self.field.sub_raw(self.value, rhs.value)))
    }

    pub fn try_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&rhs.field)?;
        Ok(self.with(self.field.mul_raw(self.value, rhs.value)))
    }

    pub fn try_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&rhs.field)?;
        let inv = self.field.inv_raw(rhs.value).ok_or(Error::DivisionByZero)?;
        Ok(self.with(self.field.mul_raw(self.value, inv)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv_raw(self.value)
            .map(|v| self.with(v))
            .ok_or(Error::DivisionByZero)
    }

    /// `self^e`. Negative exponents invert first; `0^0 = 1`.
    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(self.with(self.field.pow_signed_raw(self.value, e)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.order() as u64 - 1;
        let mut order = n;
        for r in prime_factors(n) {
            while order % r == 0 && self.field.pow_raw(self.value, order / r) == 1 {
                order /= r;
            }
        }
        Some(order)
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_raw(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods to get an error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("arithmetic on elements of different fields")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg_raw(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Smallest field of order at least `n`: a prime field when `prefer_prime`,
/// otherwise any prime power.
pub fn smallest_field_of_size_at_least(n: u64, prefer_prime: bool) -> Result<Field> {
    let start = n.max(2);
    for q in start..=MAX_ORDER {
        if prefer_prime {
            if is_prime(q) {
                return Field::new(q, 1, None);
            }
        } else if prime_power(q).is_some() {
            return Field::with_order(q);
        }
    }
    Err(Error::FieldTooLarge { order: n })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, m)` with `q = p^m`, if `q` is a prime power within the order limit.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if !(2..=MAX_ORDER).contains(&q) {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(p: u32, m: u32, mut v: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(p: u32, d: &[u32]) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

#[inline]
fn digitwise(p: u32, m: u32, mut a: u32, mut b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..m {
        out += op(a % p, b % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn slow_mul(f: &FieldInner, a: u32, b: u32) -> u32 {
    if f.m == 1 {
        return ((a as u64 * b as u64) % f.p as u64) as u32;
    }
    let p = f.p as u64;
    let m = f.m as usize;
    let da = digits(f.p, f.m, a);
    let db = digits(f.p, f.m, b);
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // Reduce with the monic modulus: x^m = -(c0 + ... + c(m-1) x^(m-1)).
    for deg in (m..prod.len()).rev() {
        let lead = prod[deg];
        if lead == 0 {
            continue;
        }
        prod[deg] = 0;
        for (k, &c) in f.modulus[..m].iter().enumerate() {
            let idx = deg - m + k;
            prod[idx] = (prod[idx] + p - (lead * c as u64) % p) % p;
        }
    }
    let reduced: Vec<u32> = prod[..m].iter().map(|&x| x as u32).collect();
    undigits(f.p, &reduced)
}

fn slow_pow(f: &FieldInner, mut base: u32, mut e: u64) -> u32 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(f, acc, base);
        }
        base = slow_mul(f, base, base);
        e >>= 1;
    }
    acc
}

fn find_primitive(f: &FieldInner) -> u32 {
    let n = f.q as u64 - 1;
    if n == 1 {
        return 1;
    }
    let factors = prime_factors(n);
    (1..f.q)
        .find(|&g| factors.iter().all(|&r| slow_pow(f, g, n / r) != 1))
        .expect("every finite field has a primitive element")
}

// Polynomials over GF(p) as coefficient vectors, low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &c) in b.iter().enumerate() {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Irreducibility by root search plus trial division by every monic polynomial
/// of degree `2..=m/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    let has_root = (0..p).any(|x| {
        modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
            == 0
    });
    if has_root {
        return false;
    }
    for d in 2..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut divisor = digits(p, d as u32, lower as u32);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = p.pow(m);
    (0..count)
        .map(|lower| {
            let mut c = digits(p, m, lower);
            c.push(1);
            c
        })
        .find(|c| is_irreducible(c, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    /// Brute-force irreducibility: no product of two monic polynomials of
    /// positive degree equals the modulus.
    fn irreducible_by_products(modulus: &[u32], p: u32) -> bool {
        let m = modulus.len() - 1;
        for d in 1..m {
            for a in 0..p.pow(d as u32) {
                for b in 0..p.pow((m - d) as u32) {
                    let mut fa = digits(p, d as u32, a);
                    fa.push(1);
                    let mut fb = digits(p, (m - d) as u32, b);
                    fb.push(1);
                    let mut prod = vec![0u32; m + 1];
                    for (i, &x) in fa.iter().enumerate() {
                        for (j, &y) in fb.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    if prod == modulus {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_construction() {
        let f = Field::new(5, 1, None).unwrap();
        assert_eq!(f.order(), 5);
        assert!(f.modulus().is_empty());
        assert_eq!(f.to_string(), "5^1/");
    }

    #[test]
    fn gf4_with_explicit_modulus() {
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f.order(), 4);
        assert_eq!(f, gf(4));
    }

    #[test]
    fn gf16_default_modulus_is_irreducible() {
        let f = Field::new(2, 4, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
        assert!(irreducible_by_products(f.modulus(), 2));
        // Deterministic across constructions.
        assert_eq!(Field::new(2, 4, None).unwrap().modulus(), f.modulus());
    }

    #[test]
    fn default_moduli_agree_with_brute_force() {
        for (p, m) in [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2), (2, 6)] {
            let f = Field::new(p, m, None).unwrap();
            assert!(irreducible_by_products(f.modulus(), p as u32), "{f}");
            // Every lexicographically earlier candidate is reducible.
            let idx = undigits(p as u32, &f.modulus()[..m as usize]);
            for lower in 0..idx {
                let mut c = digits(p as u32, m, lower);
                c.push(1);
                assert!(!irreducible_by_products(&c, p as u32));
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(6, 1, None).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(
            Field::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::NotIrreducible { .. })
        ));
        // x^4 + x^2 + 1 = (x^2+x+1)^2 has no roots but is reducible.
        assert!(matches!(
            Field::new(2, 4, Some(&[1, 0, 1, 0, 1])),
            Err(Error::NotIrreducible { .. })
        ));
        assert!(matches!(Field::new(2, 21, None), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(Field::new(1031, 2, None), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = gf(5);
        let e = |v| f.element(v).unwrap();
        assert_eq!(e(2) * e(3), e(1));
        assert_eq!(e(4) + e(4), e(3));
        assert_eq!(e(1) - e(3), e(3));
        assert_eq!(-e(2), e(3));
        assert_eq!(e(2).inv().unwrap(), e(3));
        assert_eq!(e(4).inv().unwrap(), e(4));
        assert_eq!(e(0).inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn gf4_matches_multiplication_table() {
        // Brute-force table of (a1 x + a0)(b1 x + b0) mod x^2+x+1 over GF(2).
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        for a in 0..4u32 {
            for b in 0..4u32 {
                let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
                let c0 = (a0 * b0 + a1 * b1) % 2;
                let c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2;
                let expect = c0 | (c1 << 1);
                assert_eq!(f.mul_raw(a, b), expect, "{a}*{b}");
            }
        }
        let x = f.from_coefficients(&[0, 1]).unwrap();
        let x1 = f.from_coefficients(&[1, 1]).unwrap();
        assert_eq!(&x * &x, x1);
        assert_eq!(x.inv().unwrap(), x1);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = gf(5).one();
        let b = gf(7).one();
        assert!(matches!(a.try_add(&b), Err(Error::MixedFields { .. })));
        assert!(matches!(a.try_mul(&b), Err(Error::MixedFields { .. })));
    }

    #[test]
    fn pow_conventions() {
        let f = gf(5);
        let e = |v| f.element(v).unwrap();
        assert_eq!(e(2).pow(4).unwrap(), e(1));
        assert_eq!(e(0).pow(0).unwrap(), e(1));
        assert_eq!(e(3).pow(-1).unwrap(), e(2));
        assert_eq!(e(0).pow(-1).unwrap_err(), Error::DivisionByZero);
        assert_eq!(e(0).pow(3).unwrap(), e(0));
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(format!("{:?}", gf(3).elements()), "[0, 1, 2]");
        assert_eq!(format!("{:?}", gf(5).elements()), "[0, 1, 2, 3, 4]");
        let coeffs: Vec<Vec<u32>> = gf(4).elements().iter().map(|e| e.coefficients()).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn roots_of_unity() {
        let f = gf(5);
        assert_eq!(f.nth_root_of_unity(4).unwrap().value(), 2);
        assert_eq!(f.nth_root_of_unity(2).unwrap().value(), 4);
        assert_eq!(
            f.nth_root_of_unity(3).unwrap_err(),
            Error::NoSuchRoot { order: 5, n: 3 }
        );
        for q in [7u64, 8, 9, 13, 16, 25, 27, 31] {
            let f = gf(q);
            for n in 1..q {
                if (q - 1) % n != 0 {
                    continue;
                }
                let z = f.nth_root_of_unity(n).unwrap();
                for k in 1..n {
                    assert!(!z.pow(k as i64).unwrap().is_one());
                }
                assert!(z.pow(n as i64).unwrap().is_one());
            }
        }
    }

    #[test]
    fn smallest_fields() {
        assert_eq!(smallest_field_of_size_at_least(6, true).unwrap().order(), 7);
        assert_eq!(smallest_field_of_size_at_least(8, false).unwrap().order(), 8);
        assert_eq!(smallest_field_of_size_at_least(4, false).unwrap().order(), 4);
        assert_eq!(smallest_field_of_size_at_least(4, true).unwrap().order(), 5);
        assert!(matches!(
            smallest_field_of_size_at_least(MAX_ORDER + 1, false),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn large_fields_without_tables() {
        // GF(2^17) and a prime above 2^16 take the slow path.
        for f in [Field::new(2, 17, None).unwrap(), Field::new(65537, 1, None).unwrap()] {
            let g = f.primitive_element();
            let a = g.pow(12345).unwrap();
            assert!((&a * &a.inv().unwrap()).is_one());
            assert!(a.pow(f.order() as i64 - 1).unwrap().is_one());
        }
    }

    #[test]
    fn text_forms() {
        let f: Field = "2^2/1,1,1".parse().unwrap();
        assert_eq!(f.to_string(), "2^2/1,1,1");
        let x = f.parse_element("0,1").unwrap();
        assert_eq!(x.to_string(), "0,1");
        assert_eq!("7".parse::<Field>().unwrap().to_string(), "7^1/");
        assert_eq!("3^2".parse::<Field>().unwrap().to_string(), "3^2/1,0,1");
        assert!(f.parse_element("2,0").is_err());
        assert!(gf(5).parse_element("5").is_err());
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81, 125, 251, 256, 1024, 3125])
            .prop_map(gf)
    }

    proptest! {
        #[test]
        fn field_axioms(f in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let q = f.order();
            let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &f.zero(), a.clone());
            prop_assert_eq!(&a * &f.one(), a.clone());
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert!(a.pow(q as i64 - 1).unwrap().is_one());
                prop_assert_eq!(a.pow(-2).unwrap(), a.inv().unwrap().pow(2).unwrap());
            }
        }

        #[test]
        fn enumeration_is_complete(f in field_strategy()) {
            let all = f.elements();
            let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
            prop_assert_eq!(all.len(), f.order() as usize);
            prop_assert_eq!(distinct.len(), f.order() as usize);
        }
    }
}
