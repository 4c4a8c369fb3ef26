//! Arithmetic in GF(p^h).
//!
//! An element `Σ cᵢ αⁱ` (α a root of the field modulus) is encoded as the integer
//! `Σ cᵢ pⁱ`. The modulus is the primitive polynomial of degree h whose tail
//! `Σ mᵢ pⁱ` is smallest, so α always generates the multiplicative group and the
//! encoding is reproducible. For h = 1 this picks `x − g` with g the least
//! primitive root of p.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 30;
const DENSE_LIMIT: u32 = 256;
const LOG_LIMIT: u32 = 1 << 24;
const NO_LOG: u32 = u32::MAX;

/// Serializable description of a field model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub h: u32,
    /// Monic modulus, constant term first, length h + 1.
    pub modulus: Vec<u32>,
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[n] = log(1 + g^n), NO_LOG when 1 + g^n = 0. Unused for p = 2.
    zech: Vec<u32>,
}

struct DenseTables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

enum Backend {
    Dense(DenseTables, LogTables),
    Log(LogTables),
    Poly,
}

/// A finite field GF(p^h) with a fixed polynomial basis.
pub struct Field {
    desc: FieldDesc,
    q: u32,
    generator: u32,
    backend: Backend,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.desc.p, self.desc.h)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}
impl Eq for Field {}

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

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Parse `"p^h"`, `"p"` or a plain prime power such as `"8"`.
pub fn parse_prime_power(s: &str) -> Result<(u32, u32)> {
    let bad = |why: &str| Error::InvalidPrimePower(s.to_string(), why.to_string());
    let s = s.trim();
    let (p, h) = match s.split_once('^') {
        Some((a, b)) => (
            a.trim()
                .parse::<u64>()
                .map_err(|_| bad("base is not an integer"))?,
            b.trim()
                .parse::<u32>()
                .map_err(|_| bad("exponent is not an integer"))?,
        ),
        None => {
            let n = s.parse::<u64>().map_err(|_| bad("not an integer"))?;
            if n < 2 {
                return Err(bad("order must be at least 2"));
            }
            let p = (2..=n).find(|d| n % d == 0).unwrap();
            let mut h = 0u32;
            let mut m = n;
            while m % p == 0 {
                m /= p;
                h += 1;
            }
            if m != 1 {
                return Err(bad("not a prime power"));
            }
            (p, h)
        }
    };
    if !is_prime(p) {
        return Err(bad("base is not prime"));
    }
    if h == 0 {
        return Err(bad("exponent must be positive"));
    }
    match p.checked_pow(h) {
        Some(q) if q <= MAX_ORDER => Ok((p as u32, h)),
        _ => Err(bad("order too large")),
    }
}

// Polynomials over GF(p) as little-endian digit vectors.

fn digits(code: u32, p: u32, h: u32) -> Vec<u64> {
    let mut c = code;
    let mut out = vec![0u64; h as usize];
    for d in out.iter_mut() {
        *d = (c % p) as u64;
        c /= p;
    }
    out
}

fn undigits(d: &[u64], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * p + x as u32)
}

/// a·b mod f where f is monic of degree h = a.len().
fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let h = a.len();
    let mut prod = vec![0u64; 2 * h - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (h..2 * h - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..h {
            prod[i - h + j] = (prod[i - h + j] + (p - c) * f[j]) % p;
        }
    }
    prod.truncate(h);
    prod
}

fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let h = base.len();
    let mut r = vec![0u64; h];
    r[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        e >>= 1;
    }
    r
}

/// x reduced mod f.
fn x_mod(f: &[u64], p: u64) -> Vec<u64> {
    let h = f.len() - 1;
    let mut x = vec![0u64; h];
    if h == 1 {
        x[0] = (p - f[0]) % p;
    } else {
        x[1] = 1;
    }
    x
}

fn is_primitive(f: &[u64], p: u64, order: u64, factors: &[u64]) -> bool {
    if f[0] == 0 {
        return false;
    }
    let x = x_mod(f, p);
    let h = x.len();
    let mut one = vec![0u64; h];
    one[0] = 1;
    if powmod(&x, order - 1, f, p) != one {
        return false;
    }
    factors
        .iter()
        .all(|&l| powmod(&x, (order - 1) / l, f, p) != one)
}

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_sub_mul(a: &[u64], c: u64, shift: usize, b: &[u64], p: u64) -> Vec<u64> {
    // a − c·x^shift·b
    let mut out = a.to_vec();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, 0);
    }
    for (i, &y) in b.iter().enumerate() {
        out[i + shift] = (out[i + shift] + (p - c * y % p)) % p;
    }
    trim(&mut out);
    out
}

/// Inverse of a nonzero residue a mod f by the extended Euclidean algorithm.
fn poly_inverse(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let h = f.len() - 1;
    let mut r0 = f.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0 = vec![0u64];
    let mut s1 = vec![1u64];
    while r1.len() > 1 {
        let mut r = r0.clone();
        let mut s = s0.clone();
        let lead_inv = modpow(*r1.last().unwrap(), p - 2, p);
        while r.len() >= r1.len() && !(r.len() == 1 && r[0] == 0) {
            let shift = r.len() - r1.len();
            let c = r.last().unwrap() * lead_inv % p;
            r = poly_sub_mul(&r, c, shift, &r1, p);
            s = poly_sub_mul(&s, c, shift, &s1, p);
            if r.len() == 1 && r1.len() == 1 {
                break;
            }
        }
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c_inv = modpow(r1[0], p - 2, p);
    let mut out: Vec<u64> = s1.iter().map(|&x| x * c_inv % p).collect();
    out.resize(h, 0);
    out
}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Field>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical field of order p^h. Calls with the same arguments share one instance.
pub fn field_create(p: u32, h: u32) -> Result<Arc<Field>> {
    if let Some(f) = field_cache().lock().unwrap().get(&(p, h)) {
        return Ok(f.clone());
    }
    let f = Arc::new(Field::canonical(p, h)?);
    let mut cache = field_cache().lock().unwrap();
    Ok(cache.entry((p, h)).or_insert(f).clone())
}

/// Field for a prime power given as `"p^h"` or as an integer.
pub fn field_from_str(s: &str) -> Result<Arc<Field>> {
    let (p, h) = parse_prime_power(s)?;
    field_create(p, h)
}

fn check_order(p: u32, h: u32) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if h == 0 {
        return Err(Error::ZeroDegree);
    }
    match (p as u64).checked_pow(h) {
        Some(q) if q <= MAX_ORDER => Ok(q as u32),
        _ => Err(Error::FieldTooLarge { p: p as u64, h }),
    }
}

impl Field {
    fn canonical(p: u32, h: u32) -> Result<Field> {
        let q = check_order(p, h)?;
        let factors = prime_factors(q as u64 - 1);
        let pp = p as u64;
        for tail in 0..q {
            let mut f = digits(tail, p, h);
            f.push(1);
            if is_primitive(&f, pp, q as u64, &factors) {
                let modulus = f.iter().map(|&c| c as u32).collect();
                return Field::build(FieldDesc { p, h, modulus });
            }
        }
        Err(Error::Inconsistency(format!(
            "no primitive polynomial of degree {h} over GF({p})"
        )))
    }

    /// Field for an explicit primitive modulus.
    pub fn from_desc(desc: &FieldDesc) -> Result<Arc<Field>> {
        let q = check_order(desc.p, desc.h)?;
        if desc.modulus.len() != desc.h as usize + 1
            || *desc.modulus.last().unwrap() != 1
            || desc.modulus.iter().any(|&c| c >= desc.p)
        {
            return Err(Error::InvalidModulus(format!(
                "{:?} is not monic of degree {}",
                desc.modulus, desc.h
            )));
        }
        let canon = field_create(desc.p, desc.h)?;
        if canon.desc == *desc {
            return Ok(canon);
        }
        let f: Vec<u64> = desc.modulus.iter().map(|&c| c as u64).collect();
        if !is_primitive(&f, desc.p as u64, q as u64, &prime_factors(q as u64 - 1)) {
            return Err(Error::InvalidModulus(format!(
                "{:?} is not primitive",
                desc.modulus
            )));
        }
        Ok(Arc::new(Field::build(desc.clone())?))
    }

    fn build(desc: FieldDesc) -> Result<Field> {
        let (p, h) = (desc.p, desc.h);
        let q = p.pow(h);
        let f: Vec<u64> = desc.modulus.iter().map(|&c| c as u64).collect();
        let generator = undigits(&x_mod(&f, p as u64), p);
        let mut field = Field {
            desc,
            q,
            generator,
            backend: Backend::Poly,
        };
        if q <= LOG_LIMIT {
            let logs = field.log_tables()?;
            field.backend = Backend::Log(logs);
            if q <= DENSE_LIMIT {
                let n = q as usize;
                let mut add = vec![0u32; n * n];
                let mut mul = vec![0u32; n * n];
                for a in 0..q {
                    for b in 0..q {
                        add[a as usize * n + b as usize] = field.add(a, b);
                        mul[a as usize * n + b as usize] = field.mul(a, b);
                    }
                }
                if let Backend::Log(logs) = std::mem::replace(&mut field.backend, Backend::Poly) {
                    field.backend = Backend::Dense(DenseTables { add, mul }, logs);
                }
            }
        }
        Ok(field)
    }

    fn log_tables(&self) -> Result<LogTables> {
        let (p, h, q) = (self.desc.p, self.desc.h, self.q);
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![NO_LOG; q as usize];
        let m: Vec<u32> = self.desc.modulus.clone();
        let mut d = vec![0u32; h as usize];
        d[0] = 1;
        for (i, e) in exp.iter_mut().enumerate() {
            let code = d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
            if log[code as usize] != NO_LOG {
                return Err(Error::Inconsistency("modulus root is not primitive".into()));
            }
            *e = code;
            log[code as usize] = i as u32;
            // multiply by α
            let top = d[h as usize - 1] as u64;
            let pp = p as u64;
            for j in (1..h as usize).rev() {
                d[j] = ((d[j - 1] as u64 + pp - top * m[j] as u64 % pp) % pp) as u32;
            }
            d[0] = ((pp - top * m[0] as u64 % pp) % pp) as u32;
        }
        let mut zech = Vec::new();
        if p != 2 {
            zech = vec![NO_LOG; n];
            for (k, z) in zech.iter_mut().enumerate() {
                let c = exp[k];
                let one_plus = if c % p == p - 1 { c - (p - 1) } else { c + 1 };
                if one_plus != 0 {
                    *z = log[one_plus as usize];
                }
            }
        }
        Ok(LogTables { exp, log, zech })
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }
    pub fn p(&self) -> u32 {
        self.desc.p
    }
    pub fn h(&self) -> u32 {
        self.desc.h
    }
    /// Field order p^h.
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.desc.modulus
    }
    /// Code of the primitive element α.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn contains_code(&self, code: u64) -> bool {
        code < self.q as u64
    }

    /// All codes `0..q`.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    fn logs(&self) -> Option<&LogTables> {
        match &self.backend {
            Backend::Dense(_, l) | Backend::Log(l) => Some(l),
            Backend::Poly => None,
        }
    }

    fn poly_modulus(&self) -> Vec<u64> {
        self.desc.modulus.iter().map(|&c| c as u64).collect()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.desc.p;
        if p == 2 {
            return a ^ b;
        }
        if self.desc.h == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        match &self.backend {
            Backend::Dense(t, _) => t.add[(a * self.q + b) as usize],
            Backend::Log(l) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let n = self.q - 1;
                let (la, lb) = (l.log[a as usize], l.log[b as usize]);
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = l.zech[d as usize];
                if z == NO_LOG {
                    0
                } else {
                    let e = la + z;
                    l.exp[(if e >= n { e - n } else { e }) as usize]
                }
            }
            Backend::Poly => {
                let (mut x, mut y, mut r, mut place) = (a, b, 0u32, 1u32);
                while x > 0 || y > 0 {
                    r += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place = place.wrapping_mul(p);
                }
                r
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.desc.p;
        if p == 2 || a == 0 {
            return a;
        }
        if self.desc.h == 1 {
            return p - a;
        }
        let (mut x, mut r, mut place) = (a, 0u32, 1u32);
        while x > 0 {
            r += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        r
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
        if self.desc.h == 1 {
            return ((a as u64 * b as u64) % self.desc.p as u64) as u32;
        }
        match &self.backend {
            Backend::Dense(t, _) => t.mul[(a * self.q + b) as usize],
            Backend::Log(l) => {
                let n = self.q - 1;
                let e = l.log[a as usize] + l.log[b as usize];
                l.exp[(if e >= n { e - n } else { e }) as usize]
            }
            Backend::Poly => {
                let (p, h) = (self.desc.p, self.desc.h);
                let r = mulmod(
                    &digits(a, p, h),
                    &digits(b, p, h),
                    &self.poly_modulus(),
                    p as u64,
                );
                undigits(&r, p)
            }
        }
    }

    /// Inverse of a nonzero element. Panics on zero.
    #[inline]
    pub fn inv_nz(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        if let Some(l) = self.logs() {
            let n = self.q - 1;
            let la = l.log[a as usize];
            return l.exp[(if la == 0 { 0 } else { n - la }) as usize];
        }
        let p = self.desc.p;
        if self.desc.h == 1 {
            return modpow(a as u64, p as u64 - 2, p as u64) as u32;
        }
        let inv = poly_inverse(&digits(a, p, self.desc.h), &self.poly_modulus(), p as u64);
        undigits(&inv, p)
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nz(a))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^n; for a ≠ 0 the exponent is reduced mod q − 1. 0^0 = 1.
    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let ord = (self.q - 1) as u64;
        let e = n % ord;
        if let Some(l) = self.logs() {
            let idx = (l.log[a as usize] as u64 * e) % ord;
            return l.exp[idx as usize];
        }
        let (mut r, mut b, mut e) = (1u32, a, e);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// a^n for a signed exponent; negative powers of zero are an error.
    pub fn pow_signed(&self, a: u32, n: i64) -> Result<u32> {
        if n >= 0 {
            return Ok(self.pow(a, n as u64));
        }
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let ord = (self.q - 1) as i64;
        Ok(self.pow(a, n.rem_euclid(ord) as u64))
    }

    /// α^k.
    pub fn exp(&self, k: u64) -> u32 {
        self.pow(self.generator, k)
    }

    /// Discrete logarithm to base α of a nonzero element.
    pub fn log(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(l) = self.logs() {
            return Ok(l.log[a as usize]);
        }
        let mut x = 1u32;
        for k in 0..self.q - 1 {
            if x == a {
                return Ok(k);
            }
            x = self.mul(x, self.generator);
        }
        Err(Error::Inconsistency("element without logarithm".into()))
    }

    /// a^(p^k).
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let ord = (self.q - 1) as u64;
        let e = modpow(self.desc.p as u64, (k % self.desc.h) as u64, ord.max(1));
        let e = if ord == 1 { 0 } else { e };
        self.pow(a, e)
    }

    fn check_divisor(&self, sub: u32) -> Result<()> {
        if sub == 0 || !self.desc.h.is_multiple_of(sub) {
            return Err(Error::NotADivisor {
                sub,
                h: self.desc.h,
            });
        }
        Ok(())
    }

    /// True iff a^(p^sub) = a.
    pub fn in_subfield(&self, a: u32, sub: u32) -> Result<bool> {
        self.check_divisor(sub)?;
        Ok(self.frobenius(a, sub) == a)
    }

    /// Relative trace and norm from GF(p^h) down to GF(p^sub).
    pub fn trace_norm(&self, a: u32, sub: u32) -> Result<(u32, u32)> {
        self.check_divisor(sub)?;
        let m = self.desc.h / sub;
        let mut t = 0u32;
        let mut x = a;
        for _ in 0..m {
            t = self.add(t, x);
            x = self.frobenius(x, sub);
        }
        let small = (self.desc.p as u64).pow(sub);
        let norm = self.pow(a, (self.q as u64 - 1) / (small - 1));
        Ok((t, norm))
    }

    /// Codes of GF(p^sub) inside this field, ascending.
    pub fn subfield_elements(&self, sub: u32) -> Result<Vec<u32>> {
        self.check_divisor(sub)?;
        let small = (self.desc.p as u64).pow(sub);
        let step = (self.q as u64 - 1) / (small - 1);
        let mut out: Vec<u32> = std::iter::once(0)
            .chain((0..small - 1).map(|k| self.exp(k * step)))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Coefficients of a in the polynomial basis.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a, self.desc.p, self.desc.h)
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.desc.h as usize || c.iter().any(|&x| x >= self.desc.p) {
            return Err(Error::Malformed(format!("bad coefficient vector {c:?}")));
        }
        Ok(c.iter().rev().fold(0u32, |acc, &x| acc * self.desc.p + x))
    }

    pub fn element(self: &Arc<Self>, code: u32) -> Result<FieldElement> {
        FieldElement::new(self.clone(), code)
    }
}

/// Field element carrying its field; operations check that operands agree.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<Field>,
    code: u32,
}

impl FieldElement {
    pub fn new(field: Arc<Field>, code: u32) -> Result<Self> {
        if code >= field.order() {
            return Err(Error::CodeOutOfRange {
                code: code as u64,
                order: field.order(),
            });
        }
        Ok(FieldElement { field, code })
    }
    pub fn zero(field: &Arc<Field>) -> Self {
        FieldElement {
            field: field.clone(),
            code: 0,
        }
    }
    pub fn one(field: &Arc<Field>) -> Self {
        FieldElement {
            field: field.clone(),
            code: 1,
        }
    }
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }
    fn wrap(&self, code: u32) -> Self {
        FieldElement {
            field: self.field.clone(),
            code,
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.wrap(self.field.add(self.code, o.code)))
    }
    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.wrap(self.field.sub(self.code, o.code)))
    }
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.wrap(self.field.mul(self.code, o.code)))
    }
    pub fn div(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.wrap(self.field.div(self.code, o.code)?))
    }
    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.code))
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.code)?))
    }
    pub fn pow(&self, n: i64) -> Result<Self> {
        Ok(self.wrap(self.field.pow_signed(self.code, n)?))
    }
    pub fn frobenius(&self, k: u32) -> Self {
        self.wrap(self.field.frobenius(self.code, k))
    }
    pub fn in_subfield(&self, sub: u32) -> Result<bool> {
        self.field.in_subfield(self.code, sub)
    }
    /// (trace, norm) relative to GF(p^sub).
    pub fn trace_norm(&self, sub: u32) -> Result<(Self, Self)> {
        let (t, n) = self.field.trace_norm(self.code, sub)?;
        Ok((self.wrap(t), self.wrap(n)))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.same(other).is_ok()
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.code, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

/// Embedding of a canonical subfield into a canonical extension field.
///
/// The image of the subfield's α is the smallest-code root of the subfield
/// modulus inside the extension.
#[derive(Clone)]
pub struct Embedding {
    sub: Arc<Field>,
    sup: Arc<Field>,
    forward: Vec<u32>,
    backward: HashMap<u32, u32>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.sub, self.sup)
    }
}

impl Embedding {
    pub fn new(sub: &Arc<Field>, sup: &Arc<Field>) -> Result<Embedding> {
        if sub.p() != sup.p() {
            return Err(Error::MixedFields);
        }
        sup.check_divisor(sub.h())?;
        let qs = sub.order() as u64;
        let step = (sup.order() as u64 - 1) / (qs - 1);
        let eval = |x: u32| {
            sub.modulus()
                .iter()
                .rev()
                .fold(0u32, |acc, &c| sup.add(sup.mul(acc, x), c))
        };
        let root = (0..qs - 1)
            .map(|j| sup.exp(j * step))
            .filter(|&x| eval(x) == 0)
            .min()
            .ok_or_else(|| Error::Inconsistency("subfield modulus has no root".into()))?;
        let mut forward = Vec::with_capacity(qs as usize);
        let mut backward = HashMap::with_capacity(qs as usize);
        for code in sub.elements() {
            let img = sub
                .coefficients(code)
                .iter()
                .rev()
                .fold(0u32, |acc, &c| sup.add(sup.mul(acc, root), c));
            forward.push(img);
            backward.insert(img, code);
        }
        Ok(Embedding {
            sub: sub.clone(),
            sup: sup.clone(),
            forward,
            backward,
        })
    }

    pub fn sub(&self) -> &Arc<Field> {
        &self.sub
    }
    pub fn sup(&self) -> &Arc<Field> {
        &self.sup
    }
    #[inline]
    pub fn embed(&self, a: u32) -> u32 {
        self.forward[a as usize]
    }
    /// Preimage of b, or None if b lies outside the subfield.
    #[inline]
    pub fn restrict(&self, b: u32) -> Option<u32> {
        self.backward.get(&b).copied()
    }
}
