//! Finite fields F_{p^m} as polynomial residues over F_p.
//!
//! An element is stored as the integer code `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! of its coefficient vector (constant term first), so the code always fits a
//! `u32` and equality of codes is equality of field elements. Fields of order at
//! most 256 cache full addition and multiplication tables.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::poly;

/// Largest field order for which full operation tables are cached.
pub const TABLE_LIMIT: u32 = 256;

pub struct FieldParams {
    p: u32,
    m: usize,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Shared handle to a finite field. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldParams>);

impl Deref for Field {
    type Target = FieldParams;
    fn deref(&self) -> &FieldParams {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.m == other.m && self.modulus == other.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.m)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn registry() -> &'static Mutex<HashMap<(u32, usize), Field>> {
    static REG: OnceLock<Mutex<HashMap<(u32, usize), Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// F_{p^m} with the lexicographically least monic irreducible modulus.
    ///
    /// Candidate moduli `x^m + c_{m-1} x^{m-1} + ... + c_0` are scanned in
    /// increasing order of the code `c_0 + c_1 p + ...`, so the result is
    /// identical across runs.
    pub fn new(p: u32, m: usize) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        if let Some(f) = registry().lock().unwrap().get(&(p, m)) {
            return Ok(f.clone());
        }
        if (p as u64).checked_pow(m as u32).is_none_or(|q| q > u32::MAX as u64) {
            return Err(Error::InvalidInput(format!("field order {p}^{m} too large")));
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            let prime = Field::new(p, 1)?;
            let q = p.pow(m as u32);
            let mut found = None;
            for code in 0..q {
                let mut coeffs = digits_of(code, p, m);
                coeffs.push(1);
                if poly::is_irreducible(&prime, &coeffs) {
                    found = Some(coeffs);
                    break;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };
        let field = Field(Arc::new(FieldParams::build(p, m, modulus)));
        registry().lock().unwrap().insert((p, m), field.clone());
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// F_p[x]/(modulus) for an explicit monic modulus (constant term first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let m = modulus.len().saturating_sub(1);
        if m == 0 || modulus[m] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::ReducibleModulus(modulus));
        }
        if m > 1 && !poly::is_irreducible(&*Field::prime(p)?, &modulus) {
            return Err(Error::ReducibleModulus(modulus));
        }
        if (p as u64).checked_pow(m as u32).is_none_or(|q| q > u32::MAX as u64) {
            return Err(Error::InvalidInput(format!("field order {p}^{m} too large")));
        }
        Ok(Field(Arc::new(FieldParams::build(p, m, modulus))))
    }

    pub fn scalar(&self, code: u32) -> FqScalar {
        assert!(code < self.q, "code {code} out of range for {self:?}");
        FqScalar { field: self.clone(), code }
    }

    pub fn scalar_from_coeffs(&self, coeffs: &[u32]) -> FqScalar {
        FqScalar { field: self.clone(), code: self.from_coeffs(coeffs) }
    }

    /// The prime subfield F_p.
    pub fn prime_subfield(&self) -> Field {
        Field::prime(self.p).expect("characteristic is prime")
    }
}

fn digits_of(mut code: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(code % p);
        code /= p;
    }
    out
}

impl FieldParams {
    fn build(p: u32, m: usize, modulus: Vec<u32>) -> FieldParams {
        let q = p.pow(m as u32);
        let mut f = FieldParams { p, m, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u8; n * n];
            let mut mul = vec![0u8; n * n];
            let mut neg = vec![0u8; n];
            let mut inv = vec![0u8; n];
            for a in 0..q {
                neg[a as usize] = f.slow_neg(a) as u8;
                for b in 0..q {
                    add[(a * q + b) as usize] = f.slow_add(a, b) as u8;
                    mul[(a * q + b) as usize] = f.slow_mul(a, b) as u8;
                }
            }
            for a in 1..q {
                for b in 1..q {
                    if mul[(a * q + b) as usize] == 1 {
                        inv[a as usize] = b as u8;
                        break;
                    }
                }
            }
            f.tables = Some(Tables { add, mul, neg, inv });
        }
        f
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn coeffs(&self, code: u32) -> Vec<u32> {
        digits_of(code, self.p, self.m)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> u32 {
        assert!(coeffs.len() <= self.m, "too many coefficients for F_{}^{}", self.p, self.m);
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.m == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let x = digits_of(a, self.p, self.m);
        let y = digits_of(b, self.p, self.m);
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        for k in (self.m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..self.m {
                let sub = c * self.modulus[i] as u64 % p;
                let t = k - self.m + i;
                prod[t] = (prod[t] + p - sub) % p;
            }
        }
        prod[..self.m].iter().rev().fold(0u32, |acc, &c| acc * self.p + c as u32)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize] as u32,
            None => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[a as usize] as u32,
            None => self.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize] as u32,
            None => self.slow_mul(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.inv[a as usize] as u32),
            None => Some(self.pow(a, self.q as u64 - 2)),
        }
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// `a * x + y`, the inner step of every elimination loop.
    #[inline]
    pub fn mul_add(&self, a: u32, x: u32, y: u32) -> u32 {
        self.add(self.mul(a, x), y)
    }

    /// Token for text formats: coefficient list joined by commas, constant term first.
    pub fn format_elem(&self, code: u32) -> String {
        if self.m == 1 {
            return code.to_string();
        }
        self.coeffs(code).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_elem(&self, token: &str) -> Result<u32> {
        let parts: Vec<&str> = token.split(',').collect();
        if parts.len() > self.m {
            return Err(Error::InvalidInput(format!("scalar token {token:?} has too many coefficients")));
        }
        let mut coeffs = Vec::with_capacity(parts.len());
        for part in parts {
            let c: i64 = part.trim().parse().map_err(|_| Error::InvalidInput(format!("bad scalar token {token:?}")))?;
            coeffs.push(c.rem_euclid(self.p as i64) as u32);
        }
        Ok(self.from_coeffs(&coeffs))
    }
}

/// A field element bundled with its field, for API-level arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FqScalar {
    field: Field,
    code: u32,
}

impl fmt::Debug for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.code))
    }
}

impl FqScalar {
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
    pub fn inv(&self) -> Option<FqScalar> {
        self.field.inv(self.code).map(|c| self.field.scalar(c))
    }
    pub fn pow(&self, e: u64) -> FqScalar {
        self.field.scalar(self.field.pow(self.code, e))
    }
    pub fn frobenius(&self) -> FqScalar {
        self.field.scalar(self.field.frobenius(self.code))
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl<'a> $tr<&'a FqScalar> for &'a FqScalar {
            type Output = FqScalar;
            fn $method(self, rhs: &FqScalar) -> FqScalar {
                assert_eq!(self.field, rhs.field, "mixed fields");
                FqScalar { field: self.field.clone(), code: self.field.$op(self.code, rhs.code) }
            }
        }
        impl $tr for FqScalar {
            type Output = FqScalar;
            fn $method(self, rhs: FqScalar) -> FqScalar {
                (&self).$method(&rhs)
            }
        }
    };
}
scalar_binop!(Add, add, add);
scalar_binop!(Sub, sub, sub);
scalar_binop!(Mul, mul, mul);

impl Neg for FqScalar {
    type Output = FqScalar;
    fn neg(self) -> FqScalar {
        let code = self.field.neg(self.code);
        FqScalar { field: self.field, code }
    }
}

/// A fixed embedding F_{p^a} ↪ F_{p^b}, determined by the image of the
/// generator `x` of the small field: the least root (by code) of the small
/// modulus in the big field. Computed once, reused for every element.
#[derive(Clone)]
pub struct FieldEmbedding {
    small: Field,
    big: Field,
    root: u32,
    powers: Vec<u32>,
}

impl fmt::Debug for FieldEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} (x -> {})", self.small, self.big, self.big.format_elem(self.root))
    }
}

impl FieldEmbedding {
    pub fn new(small: &Field, big: &Field) -> Result<FieldEmbedding> {
        if small.p != big.p || !big.m.is_multiple_of(small.m) {
            return Err(Error::FieldMismatch(format!("{small:?} does not embed in {big:?}")));
        }
        let root = if small.m == 1 {
            0
        } else {
            let lifted: Vec<u32> = small.modulus.clone();
            poly::roots(big, &lifted).into_iter().min().ok_or(Error::NoEmbeddingRoot)?
        };
        let mut powers = Vec::with_capacity(small.m);
        let mut acc = 1;
        for _ in 0..small.m {
            powers.push(acc);
            acc = big.mul(acc, root);
        }
        Ok(FieldEmbedding { small: small.clone(), big: big.clone(), root, powers })
    }

    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    /// Image of the small field's generator.
    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn map(&self, code: u32) -> u32 {
        if self.small.m == 1 {
            return code;
        }
        self.small.coeffs(code).iter().zip(&self.powers).fold(0, |acc, (&c, &pw)| self.big.mul_add(c, pw, acc))
    }
}

/// Embeds a scalar of F_{p^a} into F_{p^{ab}}.
pub fn embed_field(x: &FqScalar, target: &Field) -> Result<FqScalar> {
    let emb = FieldEmbedding::new(&x.field, target)?;
    Ok(target.scalar(emb.map(x.code)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(5, 1).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::with_modulus(2, vec![1, 0, 1]), Err(Error::ReducibleModulus(_))));
        assert!(Field::with_modulus(2, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn same_params_same_arithmetic() {
        let a = Field::new(3, 2).unwrap();
        let b = Field::with_modulus(3, vec![1, 0, 1]).unwrap();
        assert_eq!(a, b);
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(a.mul(x, y), b.mul(x, y));
                assert_eq!(a.add(x, y), b.add(x, y));
            }
        }
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        let f = Field::new(5, 3).unwrap();
        for a in (0..125).step_by(7) {
            for b in 0..125 {
                assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                assert_eq!(f.add(a, b), f.slow_add(a, b));
            }
        }
    }

    #[test]
    fn large_field_inverse() {
        let f = Field::new(5, 4).unwrap();
        assert!(f.tables.is_none());
        for a in [1u32, 2, 77, 311, 624] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 8), (3, 2), (3, 3), (3, 5), (5, 2), (5, 3), (7, 2)] {
            let f = Field::new(p, m).unwrap();
            if f.order() > 256 {
                continue;
            }
            let fixed: Vec<u32> = (0..f.order()).filter(|&a| f.frobenius(a) == a).collect();
            assert_eq!(fixed, (0..p).collect::<Vec<_>>(), "p={p} m={m}");
            let mut images: Vec<u32> = (0..f.order()).map(|a| f.frobenius(a)).collect();
            images.sort();
            assert_eq!(images, (0..f.order()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn embedding_constants_and_generator() {
        let f4 = Field::new(2, 2).unwrap();
        let f16 = Field::new(2, 4).unwrap();
        let emb = FieldEmbedding::new(&f4, &f16).unwrap();
        assert_eq!(emb.map(0), 0);
        assert_eq!(emb.map(1), 1);
        // image of x satisfies x^2 + x + 1 = 0
        let r = emb.root();
        assert_eq!(f16.add(f16.add(f16.mul(r, r), r), 1), 0);
        // Frobenius of order 2 fixes the image
        for a in 0..4 {
            let b = emb.map(a);
            assert_eq!(f16.pow(b, 4), b);
        }
        let f2 = Field::prime(2).unwrap();
        let e = embed_field(&f2.scalar(1), &Field::new(2, 2).unwrap()).unwrap();
        assert_eq!(e.code(), 1);
    }

    #[test]
    fn embedding_is_homomorphism() {
        let f9 = Field::new(3, 2).unwrap();
        let f729 = Field::new(3, 6).unwrap();
        let emb = FieldEmbedding::new(&f9, &f729).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(emb.map(f9.add(a, b)), f729.add(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(f9.mul(a, b)), f729.mul(emb.map(a), emb.map(b)));
            }
        }
        assert!(FieldEmbedding::new(&Field::new(3, 4).unwrap(), &f729).is_err());
    }

    #[test]
    fn tokens() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.format_elem(2), "0,1");
        assert_eq!(f.parse_elem("0,1").unwrap(), 2);
        assert_eq!(f.parse_elem("1").unwrap(), 1);
        assert!(f.parse_elem("1,1,1").is_err());
    }
}
