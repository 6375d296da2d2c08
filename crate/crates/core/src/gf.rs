//! Exact arithmetic in GF(p^h) for small q via lookup tables.
//!
//! Elements are dense indices in `[0, q)`: the index encodes the residue
//! polynomial in base p (index 0 is the additive identity, 1 the
//! multiplicative identity, p the residue class of x). For extension
//! fields the residue class of x is written `w`; with the default moduli
//! `w` is a primitive element and elements outside the prime subfield
//! print as `w^k`.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

static FIELD_SERIAL: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    /// Coefficients c_0..c_h of a monic degree-h irreducible over GF(p).
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, h: u32, modulus: Vec<u32>) -> FieldSpec {
        FieldSpec { p, h, modulus }
    }

    /// The spec for GF(q) with the default modulus. For q = 4, 8, 9 the
    /// defaults are x^2+x+1, x^3+x^2+1 and x^2+x+2, chosen so that printed
    /// powers of w match the usual generator conventions.
    pub fn for_order(q: u32) -> Result<FieldSpec, FieldError> {
        let (p, h) = factor_prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let modulus = default_modulus(p, h).ok_or(FieldError::NoDefaultModulus(q))?;
        Ok(FieldSpec { p, h, modulus })
    }
}

pub fn default_modulus(p: u32, h: u32) -> Option<Vec<u32>> {
    match (p, h) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 0, 1, 1]),
        (3, 2) => Some(vec![2, 1, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    for p in 2..=q {
        if !is_prime(p) {
            continue;
        }
        if q % p == 0 {
            let mut h = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                h += 1;
            }
            return if m == 1 { Some((p, h)) } else { None };
        }
    }
    None
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NonPrime(u32),
    NotPrimePower(u32),
    NoDefaultModulus(u32),
    DegreeMismatch { expected: u32, got: u32 },
    NotMonic,
    Reducible,
    OrderTooLarge(u32),
    DivisionByZero,
    MixedFields,
    BadElement(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NonPrime(p) => write!(f, "{} is not prime", p),
            FieldError::NotPrimePower(q) => write!(f, "{} is not a prime power", q),
            FieldError::NoDefaultModulus(q) => write!(f, "no default modulus for order {}", q),
            FieldError::DegreeMismatch { expected, got } => {
                write!(f, "modulus degree {} does not match extension degree {}", got, expected)
            }
            FieldError::NotMonic => write!(f, "modulus is not monic"),
            FieldError::Reducible => write!(f, "modulus is reducible"),
            FieldError::OrderTooLarge(q) => write!(f, "field order {} exceeds the supported range", q),
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::MixedFields => write!(f, "operands belong to different fields"),
            FieldError::BadElement(s) => write!(f, "bad field element: {}", s),
        }
    }
}

impl std::error::Error for FieldError {}

/// An element handle carrying the identity of its field, so that mixing
/// elements of distinct fields is caught at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub(crate) serial: u32,
    pub idx: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub struct Field {
    serial: u32,
    pub p: u32,
    pub h: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    add_t: Vec<u8>,
    mul_t: Vec<u8>,
    neg_t: Vec<u8>,
    inv_t: Vec<u8>,
    /// frob_t[k*q + a] = a^(p^k) for 0 <= k < h.
    frob_t: Vec<u8>,
    /// Discrete log base w (index p) when w is primitive.
    dlog: Option<Vec<u8>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(GF({}), p={}, h={})", self.q, self.p, self.h)
    }
}

impl Field {
    pub fn new(spec: &FieldSpec) -> Result<Field, FieldError> {
        let p = spec.p;
        let h = spec.h;
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if h == 0 || spec.modulus.len() != h as usize + 1 {
            return Err(FieldError::DegreeMismatch { expected: h, got: spec.modulus.len().saturating_sub(1) as u32 });
        }
        let q = p.checked_pow(h).filter(|&q| q <= 16).ok_or_else(|| FieldError::OrderTooLarge(p.saturating_pow(h)))?;
        let modulus: Vec<u32> = spec.modulus.iter().map(|&c| c % p).collect();
        if modulus[h as usize] != 1 {
            return Err(FieldError::NotMonic);
        }
        if h > 1 && !poly_irreducible(&modulus, p) {
            return Err(FieldError::Reducible);
        }

        let qs = q as usize;
        let to_digits = |idx: u32| -> Vec<u32> {
            let mut v = vec![0u32; h as usize];
            let mut m = idx;
            for d in v.iter_mut() {
                *d = m % p;
                m /= p;
            }
            v
        };
        let from_digits = |v: &[u32]| -> u32 {
            let mut idx = 0;
            for &d in v.iter().rev() {
                idx = idx * p + d;
            }
            idx
        };

        let mut add_t = vec![0u8; qs * qs];
        let mut mul_t = vec![0u8; qs * qs];
        for a in 0..q {
            let da = to_digits(a);
            for b in 0..q {
                let db = to_digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add_t[(a * q + b) as usize] = from_digits(&sum) as u8;
                let prod = poly_mul_mod(&da, &db, &modulus, p);
                mul_t[(a * q + b) as usize] = from_digits(&prod) as u8;
            }
        }
        let mut neg_t = vec![0u8; qs];
        for a in 0..q {
            let da = to_digits(a);
            let n: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
            neg_t[a as usize] = from_digits(&n) as u8;
        }
        let mut inv_t = vec![0u8; qs];
        for a in 1..q {
            let mut found = 0;
            for b in 1..q {
                if mul_t[(a * q + b) as usize] == 1 {
                    found = b;
                    break;
                }
            }
            if found == 0 {
                return Err(FieldError::Reducible);
            }
            inv_t[a as usize] = found as u8;
        }
        let mut frob_t = vec![0u8; qs * h as usize];
        let pow = |mut base: u32, mut e: u32| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_t[(acc * q + base) as usize] as u32;
                }
                base = mul_t[(base * q + base) as usize] as u32;
                e >>= 1;
            }
            acc
        };
        for k in 0..h as usize {
            let e = p.pow(k as u32);
            for a in 0..q {
                frob_t[k * qs + a as usize] = pow(a, e) as u8;
            }
        }

        // discrete logs base w = class of x, when primitive
        let dlog = if h > 1 {
            let w = p; // index of x
            let mut table = vec![0u8; qs];
            let mut seen = vec![false; qs];
            let mut acc = 1u32;
            let mut ok = true;
            for k in 0..q - 1 {
                if seen[acc as usize] {
                    ok = false;
                    break;
                }
                seen[acc as usize] = true;
                table[acc as usize] = k as u8;
                acc = mul_t[(acc * q + w) as usize] as u32;
            }
            if ok && acc == 1 {
                Some(table)
            } else {
                None
            }
        } else {
            None
        };

        Ok(Field {
            serial: FIELD_SERIAL.fetch_add(1, Ordering::Relaxed),
            p,
            h,
            q,
            modulus,
            add_t,
            mul_t,
            neg_t,
            inv_t,
            frob_t,
            dlog,
        })
    }

    pub fn with_order(q: u32) -> Result<Field, FieldError> {
        Field::new(&FieldSpec::for_order(q)?)
    }

    pub fn element(&self, idx: u8) -> FieldElement {
        assert!((idx as u32) < self.q);
        FieldElement { serial: self.serial, idx }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The residue class of x; only meaningful for h > 1.
    pub fn omega(&self) -> FieldElement {
        self.element(self.p.min(self.q - 1) as u8)
    }

    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        if a.serial != self.serial || b.serial != self.serial {
            return Err(FieldError::MixedFields);
        }
        let r = match op {
            ArithOp::Add => self.add(a.idx, b.idx),
            ArithOp::Sub => self.sub(a.idx, b.idx),
            ArithOp::Mul => self.mul(a.idx, b.idx),
            ArithOp::Div => {
                if b.idx == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                self.mul(a.idx, self.inv(b.idx))
            }
        };
        Ok(self.element(r))
    }

    /// a^(p^k) for 0 <= k < h.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> Result<FieldElement, FieldError> {
        if a.serial != self.serial {
            return Err(FieldError::MixedFields);
        }
        assert!(k < self.h, "frobenius exponent out of range");
        Ok(self.element(self.frob(a.idx, k as u8)))
    }

    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_t[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg_t[b as usize])
    }

    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg_t[a as usize]
    }

    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul_t[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv_t[a as usize]
    }

    #[inline(always)]
    pub fn frob(&self, a: u8, k: u8) -> u8 {
        let k = k as u32 % self.h;
        self.frob_t[k as usize * self.q as usize + a as usize]
    }

    pub fn mul_order(&self, a: u8) -> u32 {
        assert!(a != 0);
        let mut acc = a;
        let mut k = 1;
        while acc != 1 {
            acc = self.mul(acc, a);
            k += 1;
        }
        k
    }

    /// Textual form: prime-subfield elements print as integers, everything
    /// else as w^k with w the modulus root.
    pub fn format_elem(&self, a: u8) -> String {
        if (a as u32) < self.p {
            return a.to_string();
        }
        if let Some(dl) = &self.dlog {
            let k = dl[a as usize];
            if k == 1 {
                return "w".to_string();
            }
            return format!("w^{}", k);
        }
        // no discrete log available: raw base-p digit vector
        let mut digs = Vec::new();
        let mut m = a as u32;
        for _ in 0..self.h {
            digs.push((m % self.p).to_string());
            m /= self.p;
        }
        format!("[{}]", digs.join(","))
    }

    pub fn parse_elem(&self, s: &str) -> Result<u8, FieldError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(FieldError::BadElement("empty".into()));
        }
        if let Ok(v) = s.parse::<u32>() {
            // integers denote prime-subfield elements (sums of 1)
            if v < self.p {
                return Ok(v as u8);
            }
            if self.h == 1 {
                return Err(FieldError::BadElement(format!("{} is not reduced mod {}", v, self.p)));
            }
            return Err(FieldError::BadElement(format!(
                "{} is not in the prime subfield of GF({}); use w^k notation",
                v, self.q
            )));
        }
        let body = s.strip_prefix('w').or_else(|| s.strip_prefix('ω'));
        if let Some(rest) = body {
            let k: u32 = if rest.is_empty() {
                1
            } else {
                let e = rest.strip_prefix('^').ok_or_else(|| FieldError::BadElement(s.into()))?;
                e.parse().map_err(|_| FieldError::BadElement(s.into()))?
            };
            if self.h == 1 {
                return Err(FieldError::BadElement("w notation needs an extension field".into()));
            }
            if k >= self.q - 1 {
                return Err(FieldError::BadElement(format!(
                    "exponent {} out of range; powers of w are reduced mod {} (w^{} = 1)",
                    k,
                    self.q - 1,
                    self.q - 1
                )));
            }
            let dl = self.dlog.as_ref().ok_or_else(|| FieldError::BadElement("w is not primitive for this modulus".into()))?;
            let a = dl.iter().position(|&e| e as u32 == k).unwrap();
            return Ok(a as u8);
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let mut idx = 0u32;
            let digs: Vec<&str> = inner.split(',').collect();
            if digs.len() != self.h as usize {
                return Err(FieldError::BadElement(s.into()));
            }
            for d in digs.iter().rev() {
                let v: u32 = d.trim().parse().map_err(|_| FieldError::BadElement(s.into()))?;
                if v >= self.p {
                    return Err(FieldError::BadElement(s.into()));
                }
                idx = idx * self.p + v;
            }
            return Ok(idx as u8);
        }
        Err(FieldError::BadElement(s.into()))
    }

    /// Exhaustive field-axiom check, used by the property suites.
    pub fn check_axioms(&self) {
        let q = self.q as u8;
        for a in 0..q {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            assert_eq!(self.add(a, self.neg(a)), 0);
            if a != 0 {
                assert_eq!(self.mul(a, self.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..q {
                    assert_eq!(self.add(self.add(a, b), c), self.add(a, self.add(b, c)));
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                    assert_eq!(self.mul(a, self.add(b, c)), self.add(self.mul(a, b), self.mul(a, c)));
                }
            }
        }
        // multiplicative group is cyclic of order q-1
        let has_generator = (1..self.q).any(|a| self.mul_order(a as u8) == self.q - 1);
        assert!(has_generator, "multiplicative group of GF({}) has no generator", self.q);
        // frobenius is an automorphism
        if self.h > 1 {
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(self.frob(self.add(a, b), 1), self.add(self.frob(a, 1), self.frob(b, 1)));
                    assert_eq!(self.frob(self.mul(a, b), 1), self.mul(self.frob(a, 1), self.frob(b, 1)));
                }
            }
        }
    }
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let h = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce mod the monic modulus
    for d in (h..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..h {
            let sub = (c * modulus[k]) % p;
            prod[d - h + k] = (prod[d - h + k] + p * p - sub) % p;
        }
    }
    prod.truncate(h.max(1));
    prod.resize(h.max(1), 0);
    prod
}

fn poly_irreducible(modulus: &[u32], p: u32) -> bool {
    let h = modulus.len() - 1;
    // trial division by all monic polynomials of degree 1..=h/2
    for d in 1..=h / 2 {
        let count = p.pow(d as u32);
        for c in 0..count {
            let mut div = vec![0u32; d + 1];
            let mut m = c;
            for coeff in div.iter_mut().take(d) {
                *coeff = m % p;
                m /= p;
            }
            div[d] = 1;
            if poly_rem_is_zero(modulus, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], div: &[u32], p: u32) -> bool {
    let mut rem: Vec<u32> = num.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let deg = rem.len() - 1;
        if lead != 0 {
            for k in 0..=dd {
                let sub = (lead * div[k]) % p;
                rem[deg - dd + k] = (rem[deg - dd + k] + p * p - sub) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            if rem.len() == dd + 1 {
                break;
            }
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf7_is_integers_mod_7() {
        let f = Field::with_order(7).unwrap();
        assert_eq!(f.add(3, 5), 1);
        assert_eq!(f.mul(3, 5), 1);
        for a in 0..7u8 {
            assert_eq!(f.frob(a, 0), a);
        }
    }

    #[test]
    fn gf8_default_modulus_relation() {
        // x^3 + x^2 + 1 = 0, so w^3 = w^2 + 1
        let f = Field::with_order(8).unwrap();
        let w = f.omega().idx;
        let w2 = f.mul(w, w);
        let w3 = f.mul(w2, w);
        assert_eq!(w3, f.add(w2, 1));
        assert_eq!(f.mul(w2, w), f.add(w2, 1));
        // frobenius cubed is the identity
        for a in 0..8u8 {
            let b = f.frob(f.frob(f.frob(a, 1), 1), 1);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gf9_default_modulus_relation() {
        // x^2 + x + 2 = 0 over GF(3), so w^2 = 2w + 1 and w^2 - 2w - 1 = 0
        let f = Field::with_order(9).unwrap();
        let w = f.omega().idx;
        let w2 = f.mul(w, w);
        let two_w = f.mul(2, w);
        assert_eq!(w2, f.add(two_w, 1));
        // w is primitive of order 8, and w^4 = 2
        assert_eq!(f.mul_order(w), 8);
        let w4 = f.mul(w2, w2);
        assert_eq!(w4, 2);
    }

    #[test]
    fn gf9_frobenius_cubes() {
        let f = Field::with_order(9).unwrap();
        let w = f.omega().idx;
        let w3 = f.mul(f.mul(w, w), w);
        assert_eq!(f.frob(w, 1), w3);
    }

    #[test]
    fn axioms_all_scope_orders() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13] {
            Field::with_order(q).unwrap().check_axioms();
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(Field::new(&FieldSpec::new(6, 1, vec![0, 1])), Err(FieldError::NonPrime(6))));
        // x^2 + 1 is reducible over GF(2)
        assert!(matches!(Field::new(&FieldSpec::new(2, 2, vec![1, 0, 1])), Err(FieldError::Reducible)));
        assert!(matches!(Field::new(&FieldSpec::new(2, 2, vec![1, 1])), Err(FieldError::DegreeMismatch { .. })));
        assert!(matches!(Field::new(&FieldSpec::new(2, 2, vec![1, 1, 0])), Err(FieldError::NotMonic)));
    }

    #[test]
    fn checked_arith_errors() {
        let f = Field::with_order(5).unwrap();
        let g = Field::with_order(5).unwrap();
        let a = f.element(2);
        let b = g.element(3);
        assert_eq!(f.arith(a, b, ArithOp::Add), Err(FieldError::MixedFields));
        assert_eq!(f.arith(a, f.zero(), ArithOp::Div), Err(FieldError::DivisionByZero));
        assert_eq!(f.arith(a, f.element(3), ArithOp::Mul).unwrap().idx, 1);
    }

    #[test]
    fn element_text_round_trip() {
        for q in [4u32, 8, 9] {
            let f = Field::with_order(q).unwrap();
            for a in 0..q as u8 {
                let s = f.format_elem(a);
                assert_eq!(f.parse_elem(&s).unwrap(), a, "q={} elem {} printed {}", q, a, s);
            }
        }
        let f = Field::with_order(9).unwrap();
        assert!(f.parse_elem("w^8").is_err());
        assert!(f.parse_elem("w^9").is_err());
        assert_eq!(f.parse_elem("w^4").unwrap(), 2);
    }
}
