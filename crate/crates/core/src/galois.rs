//! Exact arithmetic in GF(p^m).
//!
//! An element is carried around as its integer code `Σ c_i·p^i`, where
//! `Σ c_i·x^i` is the reduced polynomial representative modulo the field's
//! defining polynomial. The default defining polynomials for characteristic 2
//! are fixed (see [`DEFAULT_BINARY_MODULI`]) so that codes, and every file
//! derived from them, are reproducible.
//!
//! Multiplication and inversion go through exp/log tables built from the
//! primitive element for q ≤ 2^16. The polynomial routines ([`Field::mul_poly`],
//! [`Field::inv_euclid`]) are always available and agree with the tables
//! bit for bit.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default moduli for p = 2 as coefficient bitmasks (bit i = coefficient of x^i),
/// indexed by degree m - 1.
///
/// | m  | modulus                         | integer |
/// |----|---------------------------------|---------|
/// | 1  | x                               | 2       |
/// | 2  | x²+x+1                          | 7       |
/// | 3  | x³+x+1                          | 11      |
/// | 4  | x⁴+x+1                          | 19      |
/// | 5  | x⁵+x²+1                         | 37      |
/// | 6  | x⁶+x+1                          | 67      |
/// | 7  | x⁷+x+1                          | 131     |
/// | 8  | x⁸+x⁴+x³+x²+1                   | 285     |
/// | 9  | x⁹+x⁴+1                         | 529     |
/// | 10 | x¹⁰+x³+1                        | 1033    |
/// | 11 | x¹¹+x²+1                        | 2053    |
/// | 12 | x¹²+x⁶+x⁴+x+1                   | 4179    |
/// | 13 | x¹³+x⁴+x³+x+1                   | 8219    |
/// | 14 | x¹⁴+x¹⁰+x⁶+x+1                  | 17475   |
/// | 15 | x¹⁵+x+1                         | 32771   |
/// | 16 | x¹⁶+x¹²+x³+x+1                  | 69643   |
pub const DEFAULT_BINARY_MODULI: [u64; 16] = [
    0b10,
    0b111,
    0b1011,
    0b1_0011,
    0b10_0101,
    0b100_0011,
    0b1000_0011,
    0b1_0001_1101,
    0b10_0001_0001,
    0b100_0000_1001,
    0b1000_0000_0101,
    0b1_0000_0101_0011,
    0b10_0000_0001_1011,
    0b100_0100_0100_0011,
    0b1000_0000_0000_0011,
    0b1_0001_0000_0000_1011,
];

/// Default moduli for a few odd-characteristic extension fields, as
/// `(p, m, coefficients low-to-high)`.
///
/// x²+1 over GF(3), x³+2x+1 over GF(3), x²+2 over GF(5), x²+1 over GF(7).
pub const DEFAULT_ODD_MODULI: &[(u32, u32, &[u32])] =
    &[(3, 2, &[1, 0, 1]), (3, 3, &[1, 2, 0, 1]), (5, 2, &[2, 0, 1]), (7, 2, &[1, 0, 1])];

const TABLE_LIMIT: u64 = 1 << 16;
const ORDER_LIMIT: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} is too large")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("no built-in modulus for GF({p}^{m}); supply one")]
    NoDefaultModulus { p: u32, m: u32 },
    #[error("modulus has degree {found}, expected {expected}")]
    WrongDegree { expected: u32, found: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} out of range for the characteristic")]
    BadCoefficient(u32),
    #[error("modulus is reducible (divisible by {divisor})")]
    Reducible { divisor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("element code {code} out of range for GF({q})")]
    CodeOutOfRange { code: u64, q: u32 },
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

/// Returns `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        // q itself is prime
        return Some((q as u32, 1));
    }
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
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

// Dense polynomials over GF(p), coefficient vectors low-to-high.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_prime(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c as u64 * bc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod_prime(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn poly_to_string(c: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let coef = if a == 1 && i > 0 { String::new() } else { a.to_string() };
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn check_irreducible(modulus: &[u32], p: u32) -> Result<(), FieldError> {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut t = low;
            for _ in 0..d {
                div.push((t % p as u64) as u32);
                t /= p as u64;
            }
            div.push(1);
            if poly_rem(modulus, &div, p).is_empty() {
                return Err(FieldError::Reducible { divisor: poly_to_string(&div) });
            }
        }
    }
    Ok(())
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    /// For p = 2: modulus as a bitmask.
    modulus_bits: u64,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field GF(p^m) with a fixed modulus. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{} mod {})", self.0.p, self.0.m, poly_to_string(&self.0.modulus))
    }
}

impl Field {
    /// Creates GF(p^m). Without an explicit modulus the built-in table is used.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q < ORDER_LIMIT);
        let q = q.ok_or(FieldError::TooLarge(u64::MAX))? as u32;
        let modulus: Vec<u32> = match modulus {
            Some(c) => c.to_vec(),
            None => default_modulus(p, m)?,
        };
        if modulus.len() != m as usize + 1 {
            let mut t = modulus.clone();
            poly_trim(&mut t);
            return Err(FieldError::WrongDegree { expected: m, found: t.len().saturating_sub(1) });
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::BadCoefficient(c));
        }
        if modulus[m as usize] != 1 {
            return Err(FieldError::NotMonic);
        }
        check_irreducible(&modulus, p)?;
        let modulus_bits = if p == 2 { modulus.iter().enumerate().map(|(i, &c)| (c as u64) << i).sum() } else { 0 };
        let mut inner = Inner { p, m, q, modulus, modulus_bits, primitive: 0, exp: Vec::new(), log: Vec::new() };
        inner.primitive = find_primitive(&inner);
        if (q as u64) <= TABLE_LIMIT {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for i in 0..q - 1 {
                exp.push(x);
                log[x as usize] = i;
                x = mul_poly_inner(&inner, x, inner.primitive);
            }
            inner.exp = exp;
            inner.log = log;
        }
        Ok(Field(Arc::new(inner)))
    }

    /// GF(q) with the default modulus.
    pub fn with_order(q: u64) -> Result<Field, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::new(p, m, None)
    }

    /// Rebuilds a field from `(p, m, modulus integer)` as written in file headers.
    pub fn from_header(p: u32, m: u32, modulus_code: u64) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let mut coeffs = Vec::new();
        let mut t = modulus_code;
        while t > 0 {
            coeffs.push((t % p as u64) as u32);
            t /= p as u64;
        }
        Field::new(p, m, Some(&coeffs))
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

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The modulus as the integer `Σ c_i·p^i` (including the leading term).
    pub fn modulus_code(&self) -> u64 {
        self.0.modulus.iter().rev().fold(0u64, |acc, &c| acc * self.0.p as u64 + c as u64)
    }

    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.0.modulus)
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    pub fn contains(&self, code: u32) -> bool {
        code < self.0.q
    }

    pub fn element(&self, code: u64) -> Result<FieldElement, FieldError> {
        if code >= self.0.q as u64 {
            return Err(FieldError::CodeOutOfRange { code, q: self.0.q });
        }
        Ok(FieldElement { field: self.clone(), code: code as u32 })
    }

    /// Embeds an integer via the prime subfield (n·1).
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.m == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.m == 1 {
            return (p - a) % p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
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
        let inner = &*self.0;
        if inner.exp.is_empty() {
            return mul_poly_inner(inner, a, b);
        }
        let s = inner.log[a as usize] as u64 + inner.log[b as usize] as u64;
        inner.exp[(s % (inner.q as u64 - 1)) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.0;
        if inner.exp.is_empty() {
            return self.inv_euclid(a);
        }
        let l = inner.log[a as usize];
        Some(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize])
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for any integer exponent; `None` for a negative power of zero.
    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        let base = if e < 0 { self.inv(a)? } else { a };
        let mut e = e.unsigned_abs();
        if a == 0 {
            return Some(if e == 0 { 1 } else { 0 });
        }
        // reduce by the group order
        e %= self.0.q as u64 - 1;
        let (mut acc, mut b) = (1u32, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        Some(acc)
    }

    /// Schoolbook multiplication modulo the defining polynomial.
    pub fn mul_poly(&self, a: u32, b: u32) -> u32 {
        mul_poly_inner(&self.0, a, b)
    }

    /// Inverse by the extended Euclidean algorithm on polynomials.
    pub fn inv_euclid(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let p = self.0.p;
        let (mut r0, mut r1) = (self.0.modulus.clone(), self.digits(a));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (vec![], vec![1]);
        poly_trim(&mut r1);
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1, p);
            let prod = poly_mul(&quot, &s1, p);
            let s2 = poly_sub(&s0, &prod, p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = inv_mod_prime(r0[0], p);
        let s: Vec<u32> = s0.iter().map(|&x| (x as u64 * c as u64 % p as u64) as u32).collect();
        let s = poly_rem(&s, &self.0.modulus, p);
        Some(self.from_digits(&s))
    }

    /// Base-p digits of a code, low-to-high, length m.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.m)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.0.p + c)
    }

    /// Smallest element (by code) of multiplicative order q - 1.
    pub fn primitive_element(&self) -> u32 {
        self.0.primitive
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| order_of(&self.0, a))
    }

    /// F*_q in generator-power order g^0, g^1, …, g^(q-2).
    pub fn nonzero_elements(&self) -> Vec<u32> {
        if !self.0.exp.is_empty() {
            return self.0.exp.clone();
        }
        let g = self.0.primitive;
        let mut out = Vec::with_capacity(self.0.q as usize - 1);
        let mut x = 1;
        for _ in 0..self.0.q - 1 {
            out.push(x);
            x = self.mul(x, g);
        }
        out
    }

    /// Discrete log to the primitive base (`None` for zero).
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if !self.0.exp.is_empty() {
            return Some(self.0.log[a as usize]);
        }
        self.nonzero_elements().iter().position(|&x| x == a).map(|i| i as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }
}

fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>, FieldError> {
    if m == 1 {
        return Ok(vec![0, 1]);
    }
    if p == 2 && m <= 16 {
        let bits = DEFAULT_BINARY_MODULI[m as usize - 1];
        return Ok((0..=m).map(|i| ((bits >> i) & 1) as u32).collect());
    }
    DEFAULT_ODD_MODULI
        .iter()
        .find(|(pp, mm, _)| *pp == p && *mm == m)
        .map(|(_, _, c)| c.to_vec())
        .ok_or(FieldError::NoDefaultModulus { p, m })
}

fn mul_poly_inner(f: &Inner, a: u32, b: u32) -> u32 {
    if f.m == 1 {
        return (a as u64 * b as u64 % f.p as u64) as u32;
    }
    if f.p == 2 {
        let (a, b) = (a as u64, b as u64);
        let mut prod = 0u64;
        for i in 0..f.m {
            if (b >> i) & 1 == 1 {
                prod ^= a << i;
            }
        }
        for i in (f.m..2 * f.m).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= f.modulus_bits << (i - f.m);
            }
        }
        return prod as u32;
    }
    let p = f.p;
    let split = |mut x: u32| -> Vec<u32> {
        (0..f.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    };
    let prod = poly_mul(&split(a), &split(b), p);
    let r = poly_rem(&prod, &f.modulus, p);
    r.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn order_of(f: &Inner, a: u32) -> u64 {
    let n = f.q as u64 - 1;
    let mut ord = n;
    for pf in prime_factors(n) {
        while ord % pf == 0 && pow_inner(f, a, ord / pf) == 1 {
            ord /= pf;
        }
    }
    ord
}

fn pow_inner(f: &Inner, a: u32, mut e: u64) -> u32 {
    let (mut acc, mut b) = (1u32, a);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_poly_inner(f, acc, b);
        }
        b = mul_poly_inner(f, b, b);
        e >>= 1;
    }
    acc
}

fn find_primitive(f: &Inner) -> u32 {
    if f.q == 2 {
        return 1;
    }
    (1..f.q).find(|&a| order_of(f, a) == f.q as u64 - 1).expect("multiplicative group is cyclic")
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    poly_trim(&mut out);
    out
}

fn poly_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![0u32; r.len() - db];
    let lead_inv = inv_mod_prime(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        quot[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c as u64 * bc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        poly_trim(&mut r);
    }
    poly_trim(&mut quot);
    (quot, r)
}

/// A field element bound to its field, with checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl FieldElement {
    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn wrap(&self, code: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), code }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.code, other.code)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        let c = self.field.div(self.code, other.code).ok_or(FieldError::DivisionByZero)?;
        Ok(self.wrap(c))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        let c = self.field.inv(self.code).ok_or(FieldError::DivisionByZero)?;
        Ok(self.wrap(c))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.code))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        let c = self.field.pow(self.code, e).ok_or(FieldError::DivisionByZero)?;
        Ok(self.wrap(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn gf8_default_modulus_and_arithmetic() {
        let f = gf(8);
        assert_eq!(f.modulus_code(), 11);
        assert_eq!(f.modulus_string(), "x^3+x+1");
        assert_eq!(f.add(3, 5), 6);
        assert_eq!(f.mul(2, 5), 1);
        assert_eq!(f.inv(2), Some(5));
        assert_eq!(f.pow(2, 7), Some(1));
        assert_eq!(f.pow(2, -1), Some(5));
    }

    #[test]
    fn prime_field_is_integers_mod_p() {
        let f = gf(7);
        assert_eq!(f.modulus_code(), 7);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.add(4, 5), 2);
        assert_eq!(f.neg(3), 4);
        assert_eq!(f.inv(3), Some(5));
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = Field::new(2, 3, Some(&[1, 1, 1, 1])).unwrap_err();
        assert_eq!(err, FieldError::Reducible { divisor: "x+1".into() });
        assert!(matches!(Field::new(2, 3, Some(&[1, 1, 0, 2])), Err(FieldError::BadCoefficient(2))));
        assert!(matches!(Field::new(3, 2, Some(&[1, 0, 2])), Err(FieldError::NotMonic)));
        assert!(matches!(Field::new(2, 3, Some(&[1, 1, 1])), Err(FieldError::WrongDegree { .. })));
        assert!(matches!(Field::new(4, 1, None), Err(FieldError::NotPrime(4))));
        assert!(matches!(Field::with_order(12), Err(FieldError::NotPrimePower(12))));
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(gf(8).primitive_element(), 2);
        assert_eq!(gf(2).primitive_element(), 1);
        let f4 = gf(4);
        assert_eq!(f4.modulus_string(), "x^2+x+1");
        assert_eq!(f4.primitive_element(), 2);
        assert_eq!(f4.pow(2, 2), Some(3));
        assert_eq!(f4.pow(2, 3), Some(1));
    }

    #[test]
    fn all_default_binary_moduli_are_valid() {
        for m in 1..=16 {
            let f = Field::new(2, m, None).unwrap();
            assert_eq!(f.modulus_code(), DEFAULT_BINARY_MODULI[m as usize - 1]);
        }
        for &(p, m, _) in DEFAULT_ODD_MODULI {
            Field::new(p, m, None).unwrap();
        }
    }

    #[test]
    fn tables_match_polynomial_routines() {
        for q in [4u64, 8, 9, 16, 25, 27, 32, 49, 64, 256] {
            let f = gf(q);
            for a in f.elements() {
                assert_eq!(f.inv(a), f.inv_euclid(a), "q={q} a={a}");
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b));
                }
            }
        }
    }

    #[test]
    fn frobenius_in_characteristic_two() {
        for m in 1..=8 {
            let f = Field::new(2, m, None).unwrap();
            let q = f.order();
            let step = if m <= 4 { 1 } else { 7 };
            for a in (0..q).step_by(step) {
                for b in 0..q {
                    let s = f.add(a, b);
                    assert_eq!(f.mul(s, s), f.add(f.mul(a, a), f.mul(b, b)));
                }
            }
        }
    }

    #[test]
    fn generator_powers_enumerate_group() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 64, 128, 256] {
            let f = gf(q);
            let mut seen = f.nonzero_elements();
            assert_eq!(seen.len() as u64, q - 1);
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len() as u64, q - 1);
            for a in f.elements() {
                assert_eq!(f.element(a as u64).unwrap().code(), a);
            }
        }
    }

    #[test]
    fn checked_element_ops() {
        let f8 = gf(8);
        let f4 = gf(4);
        let a = f8.element(2).unwrap();
        let b = f8.element(5).unwrap();
        assert_eq!(a.mul(&b).unwrap().code(), 1);
        assert_eq!(a.pow(7).unwrap().code(), 1);
        assert_eq!(a.pow(-2).unwrap().code(), f8.mul(5, 5));
        let z = f8.element(0).unwrap();
        assert_eq!(a.div(&z), Err(FieldError::DivisionByZero));
        assert_eq!(z.inv(), Err(FieldError::DivisionByZero));
        let c = f4.element(2).unwrap();
        assert_eq!(a.add(&c), Err(FieldError::MixedFields));
        assert!(f8.element(8).is_err());
    }

    #[test]
    fn header_round_trip() {
        for q in [2u64, 7, 8, 9, 16, 27, 1 << 12] {
            let f = gf(q);
            let g = Field::from_header(f.characteristic(), f.degree(), f.modulus_code()).unwrap();
            assert_eq!(f, g);
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(10), None);
        assert_eq!(prime_power(9973), Some((9973, 1)));
    }
}
