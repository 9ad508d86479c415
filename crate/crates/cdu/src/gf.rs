//! Exact arithmetic in GF(p^n).
//!
//! Elements are canonical integer indices in `[0, p^n)`: the base-p digits of
//! the index are the coefficients of the residue polynomial, constant
//! coefficient first. For p = 2 the index is a plain bit vector and addition
//! is XOR. A [`FieldCtx`] is immutable after construction and freely
//! shareable between threads; every operation is a pure function of
//! `(ctx, inputs)`.
//!
//! For q up to 2^20 the context carries exp/log tables with respect to a
//! fixed generator (plus Zech logarithms for addition in odd characteristic),
//! so multiplication, inversion, powers and Frobenius maps are O(1) lookups.
//! Beyond that everything falls back to polynomial arithmetic; those paths
//! are correct but not performance targets.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// exp/log (and Zech) tables are built when q does not exceed this.
pub const TABLE_THRESHOLD: u64 = 1 << 20;
/// Full per-k Frobenius lookup tables are built when q does not exceed this;
/// larger table-backed fields route Frobenius through exp/log instead.
const FROB_TABLE_THRESHOLD: u64 = 1 << 16;

const LOG_ZERO: u32 = u32::MAX;
const ZECH_ZERO: u32 = u32::MAX;

/// A field element, stored as its canonical index in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FieldElem(pub u64);

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Construction data for a field: characteristic, degree and the monic
/// irreducible modulus (coefficient list, constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn new(p: u64, n: u32, modulus: Vec<u64>) -> Self {
        FieldSpec { p, n, modulus }
    }

    /// Textual form used in CLI flags and report headers, e.g.
    /// `p=2,n=6,mod=1000011`. The modulus digits are most-significant
    /// first; for p > 2 they are comma-separated.
    pub fn to_flag_string(&self) -> String {
        format!("p={},n={},mod={}", self.p, self.n, modulus_string(self.p, &self.modulus))
    }

    pub fn parse_flag_string(s: &str) -> Result<FieldSpec> {
        let mut p: Option<u64> = None;
        let mut n: Option<u32> = None;
        let mut modstr: Option<String> = None;
        for part in s.split(',') {
            match part.split_once('=') {
                Some(("p", v)) => p = Some(parse_num(v)?),
                Some(("n", v)) => n = Some(parse_num(v)? as u32),
                Some(("mod", v)) => modstr = Some(v.to_string()),
                Some((k, _)) => return Err(Error::Parse(format!("unknown field key `{k}`"))),
                // Continuation of a comma-separated modulus digit list.
                None => match modstr {
                    Some(ref mut ms) => {
                        ms.push(',');
                        ms.push_str(part);
                    }
                    None => return Err(Error::Parse(format!("stray segment `{part}`"))),
                },
            }
        }
        let p = p.ok_or_else(|| Error::Parse("missing p=".into()))?;
        let n = n.ok_or_else(|| Error::Parse("missing n=".into()))?;
        let modulus = match modstr {
            Some(ms) => parse_modulus_digits(p, n, &ms)?,
            None => default_modulus(p, n)?,
        };
        Ok(FieldSpec { p, n, modulus })
    }
}

fn parse_num(s: &str) -> Result<u64> {
    s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

/// Most-significant-first digit rendering of a modulus.
pub fn modulus_string(p: u64, modulus: &[u64]) -> String {
    let digits: Vec<String> = modulus.iter().rev().map(|d| d.to_string()).collect();
    if p == 2 {
        digits.join("")
    } else {
        digits.join(",")
    }
}

/// Parses a most-significant-first digit string into a constant-first
/// coefficient list of length n+1.
pub fn parse_modulus_digits(p: u64, n: u32, s: &str) -> Result<Vec<u64>> {
    let digits: Vec<u64> = if s.contains(',') {
        s.split(',').map(parse_num).collect::<Result<_>>()?
    } else if p == 2 {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad bit `{ch}` in modulus"))),
            })
            .collect::<Result<_>>()?
    } else {
        // Single-digit-per-char form is accepted for p <= 9.
        s.chars()
            .map(|ch| {
                ch.to_digit(10).map(u64::from).ok_or_else(|| Error::Parse(format!("bad digit `{ch}`")))
            })
            .collect::<Result<_>>()?
    };
    if digits.len() != n as usize + 1 {
        return Err(Error::DegreeMismatch(format!(
            "modulus has {} coefficients, expected n+1 = {}",
            digits.len(),
            n + 1
        )));
    }
    if digits.iter().any(|&d| d >= p) {
        return Err(Error::Parse("modulus digit not reduced mod p".into()));
    }
    let mut coeffs: Vec<u64> = digits;
    coeffs.reverse();
    Ok(coeffs)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            while v % d == 0 {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

// --- dense polynomial arithmetic over F_p (coefficient vectors, constant first) ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let fd = poly_deg(f).expect("modulus must be nonzero");
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    while let Some(rd) = poly_deg(&r) {
        if rd < fd {
            break;
        }
        let lead = r[rd];
        for i in 0..fd {
            let sub = (lead * f[i]) % p;
            let idx = rd - fd + i;
            r[idx] = (r[idx] + p * p - sub) % p;
        }
        r[rd] = 0;
        poly_trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), f, p)
}

fn poly_pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, f, p);
        }
        b = poly_mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        // Make y monic so poly_rem applies.
        let lead = *y.last().unwrap();
        if lead != 1 {
            let inv = mod_inv_u64(lead, p);
            for c in y.iter_mut() {
                *c = (*c * inv) % p;
            }
        }
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a nonzero mod p.
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out = vec![0u64; len];
    for i in 0..len {
        let ai = a.get(i).copied().unwrap_or(0);
        let bi = b.get(i).copied().unwrap_or(0);
        out[i] = (ai + p - bi) % p;
    }
    poly_trim(&mut out);
    out
}

/// Rabin irreducibility test for a monic polynomial of degree n over F_p.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let n = match poly_deg(modulus) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let x = vec![0u64, 1];
    // x^{p^k} mod f for k = 1..n, built by repeated p-th powers.
    let mut frob_powers = Vec::with_capacity(n);
    let mut t = poly_rem(&x, modulus, p);
    for _ in 0..n {
        t = poly_pow_mod(&t, p, modulus, p);
        frob_powers.push(t.clone());
    }
    let x_red = poly_rem(&x, modulus, p);
    if frob_powers[n - 1] != x_red {
        return false;
    }
    for r in prime_factors(n as u64) {
        let k = n / r as usize;
        let diff = poly_sub(&frob_powers[k - 1], &x_red, p);
        let g = poly_gcd(modulus, &diff, p);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The deterministic default modulus: the monic irreducible of degree n over
/// F_p whose non-leading coefficient vector, read as a base-p integer with
/// the most significant digit at X^{n-1}, is smallest.
pub fn default_modulus(p: u64, n: u32) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if n == 0 {
        return Err(Error::DegreeMismatch("extension degree must be >= 1".into()));
    }
    let bound = p.checked_pow(n).ok_or_else(|| Error::DegreeMismatch("p^n overflows u64".into()))?;
    for t in 0..bound {
        let mut coeffs = vec![0u64; n as usize + 1];
        let mut v = t;
        for c in coeffs.iter_mut().take(n as usize) {
            *c = v % p;
            v /= p;
        }
        coeffs[n as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return Ok(coeffs);
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

struct Tables {
    /// exp[i] = index of g^i, doubled to 2(q-1) entries so log sums need no reduction.
    exp: Vec<u32>,
    /// log[x] for x != 0; LOG_ZERO sentinel at index 0.
    log: Vec<u32>,
    /// zech[i] = log(1 + g^i), ZECH_ZERO when 1 + g^i = 0. Used for odd p.
    zech: Vec<u32>,
    neg: Vec<u32>,
    /// Absolute trace of every element, as a value in 0..p.
    trace: Vec<u8>,
    /// frob[k][x] = x^{p^k}; empty above FROB_TABLE_THRESHOLD.
    frob: Vec<Vec<u32>>,
    /// p^k mod (q-1) for k in 0..n.
    frob_exp: Vec<u64>,
    generator: u64,
}

/// An immutable finite-field context: the spec plus whatever lookup tables
/// the field size allows.
pub struct FieldCtx {
    spec: FieldSpec,
    q: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.spec.to_flag_string())
    }
}

impl FieldCtx {
    /// Builds a field from an explicit spec, validating primality of p and
    /// irreducibility of the modulus.
    pub fn new(spec: FieldSpec) -> Result<FieldCtx> {
        if !is_prime(spec.p) {
            return Err(Error::NonPrimeCharacteristic(spec.p));
        }
        if spec.n == 0 {
            return Err(Error::DegreeMismatch("extension degree must be >= 1".into()));
        }
        if spec.modulus.len() != spec.n as usize + 1
            || spec.modulus.last() != Some(&1)
            || poly_deg(&spec.modulus) != Some(spec.n as usize)
        {
            return Err(Error::DegreeMismatch(format!(
                "modulus must be monic of degree exactly {}",
                spec.n
            )));
        }
        if spec.modulus.iter().any(|&c| c >= spec.p) {
            return Err(Error::DegreeMismatch("modulus coefficients must be reduced mod p".into()));
        }
        if !is_irreducible(&spec.modulus, spec.p) {
            return Err(Error::ReducibleModulus {
                p: spec.p,
                factor_hint: modulus_string(spec.p, &spec.modulus),
            });
        }
        let q = spec
            .p
            .checked_pow(spec.n)
            .ok_or_else(|| Error::DegreeMismatch("p^n overflows u64".to_string()))?;
        let mut ctx = FieldCtx { spec, q, tables: None };
        if q <= TABLE_THRESHOLD {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    /// Builds GF(p^n) with the deterministic default modulus.
    pub fn with_default_modulus(p: u64, n: u32) -> Result<FieldCtx> {
        let modulus = default_modulus(p, n)?;
        FieldCtx::new(FieldSpec { p, n, modulus })
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let p = self.spec.p;
        let n = self.spec.n as usize;
        let qm1 = q - 1;

        let generator = self.find_generator();
        let mut exp = vec![0u32; (2 * qm1.max(1)) as usize];
        let mut log = vec![LOG_ZERO; q as usize];
        let mut cur = FieldElem(1);
        for i in 0..qm1 as usize {
            exp[i] = cur.0 as u32;
            exp[i + qm1 as usize] = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_poly(cur, FieldElem(generator));
        }
        debug_assert_eq!(cur, FieldElem(1), "generator order must be q-1");

        let mut neg = vec![0u32; q as usize];
        for x in 0..q {
            neg[x as usize] = self.neg_digitwise(FieldElem(x)).0 as u32;
        }

        let mut zech = vec![ZECH_ZERO; qm1.max(1) as usize];
        if p > 2 {
            for (i, z) in zech.iter_mut().enumerate() {
                let s = self.add_digitwise(FieldElem(1), FieldElem(exp[i] as u64));
                *z = if s.0 == 0 { ZECH_ZERO } else { log[s.0 as usize] };
            }
        }

        let mut frob_exp = vec![0u64; n];
        let m = qm1.max(1);
        let mut acc = 1u64 % m;
        for fe in frob_exp.iter_mut() {
            *fe = acc;
            acc = (acc as u128 * p as u128 % m as u128) as u64;
        }

        // Absolute trace of the monomial basis, then extend additively.
        let mut basis_trace = vec![0u64; n];
        for (j, bt) in basis_trace.iter_mut().enumerate() {
            let e = FieldElem(p.pow(j as u32));
            let mut t = FieldElem(0);
            let mut y = e;
            for _ in 0..n {
                t = self.add_digitwise(t, y);
                y = self.pow_poly(y, p);
            }
            debug_assert!(t.0 < p, "absolute trace must land in the prime subfield");
            *bt = t.0;
        }
        let mut trace = vec![0u8; q as usize];
        for x in 0..q {
            let mut v = x;
            let mut acc = 0u64;
            for bt in basis_trace.iter() {
                acc += (v % p) * bt;
                v /= p;
            }
            trace[x as usize] = (acc % p) as u8;
        }

        let frob = if q <= FROB_TABLE_THRESHOLD {
            (0..n)
                .map(|k| {
                    (0..q)
                        .map(|x| {
                            if x == 0 {
                                0u32
                            } else {
                                let e = (log[x as usize] as u64 * frob_exp[k]) % m;
                                exp[e as usize]
                            }
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };

        Tables { exp, log, zech, neg, trace, frob, frob_exp, generator }
    }

    fn find_generator(&self) -> u64 {
        let qm1 = self.q - 1;
        if qm1 <= 1 {
            return 1;
        }
        let factors = prime_factors(qm1);
        'cand: for g in 2..self.q {
            for &r in &factors {
                if self.pow_poly(FieldElem(g), qm1 / r) == FieldElem(1) {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("F_q* is cyclic")
    }

    // --- basic accessors ---

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// The fixed generator the exp/log tables are built on, when present.
    pub fn generator(&self) -> Option<FieldElem> {
        self.tables.as_ref().map(|t| FieldElem(t.generator))
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn elem(&self, index: u64) -> FieldElem {
        assert!(index < self.q, "element index {index} out of range for q={}", self.q);
        FieldElem(index)
    }

    pub fn try_elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::Parse(format!("element index {index} out of range for q={}", self.q)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    /// Base-p digits of an element, constant coefficient first, length n.
    pub fn digits(&self, x: FieldElem) -> Vec<u64> {
        let mut out = vec![0u64; self.spec.n as usize];
        let mut v = x.0;
        for d in out.iter_mut() {
            *d = v % self.spec.p;
            v /= self.spec.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> FieldElem {
        assert!(digits.len() <= self.spec.n as usize);
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            debug_assert!(d < self.spec.p);
            v = v * self.spec.p + d;
        }
        FieldElem(v)
    }

    // --- arithmetic ---

    fn add_digitwise(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let p = self.spec.p;
        if p == 2 {
            return FieldElem(x.0 ^ y.0);
        }
        let mut a = x.0;
        let mut b = y.0;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.spec.n {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        FieldElem(out)
    }

    fn neg_digitwise(&self, x: FieldElem) -> FieldElem {
        let p = self.spec.p;
        if p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.spec.n {
            let d = a % p;
            out += if d == 0 { 0 } else { p - d } * place;
            place *= p;
            a /= p;
        }
        FieldElem(out)
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if self.spec.p == 2 {
            return FieldElem(x.0 ^ y.0);
        }
        match &self.tables {
            Some(t) => {
                if x.0 == 0 {
                    return y;
                }
                if y.0 == 0 {
                    return x;
                }
                let qm1 = self.q - 1;
                let lx = t.log[x.0 as usize] as u64;
                let ly = t.log[y.0 as usize] as u64;
                let d = (ly + qm1 - lx) % qm1;
                let z = t.zech[d as usize];
                if z == ZECH_ZERO {
                    FieldElem(0)
                } else {
                    FieldElem(t.exp[(lx + z as u64) as usize] as u64)
                }
            }
            None => self.add_digitwise(x, y),
        }
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.neg[x.0 as usize] as u64),
            None => self.neg_digitwise(x),
        }
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    /// Table-free multiplication: residue-polynomial product mod the modulus.
    /// Always available; the table-backed path must agree with it everywhere.
    pub fn mul_poly(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let a = self.digits(x);
        let b = self.digits(y);
        let prod = poly_mul(&a, &b, self.spec.p);
        let red = poly_rem(&prod, &self.spec.modulus, self.spec.p);
        let mut padded = red;
        padded.resize(self.spec.n as usize, 0);
        self.from_digits(&padded)
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => {
                if x.0 == 0 || y.0 == 0 {
                    return FieldElem(0);
                }
                let lx = t.log[x.0 as usize] as usize;
                let ly = t.log[y.0 as usize] as usize;
                FieldElem(t.exp[lx + ly] as u64)
            }
            None => self.mul_poly(x, y),
        }
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let qm1 = (self.q - 1) as usize;
                let lx = t.log[x.0 as usize] as usize;
                Ok(FieldElem(t.exp[qm1 - lx] as u64))
            }
            None => Ok(self.pow_poly(x, self.q - 2)),
        }
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    fn pow_poly(&self, x: FieldElem, mut e: u64) -> FieldElem {
        let mut acc = FieldElem(1);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, b);
            }
            b = self.mul_poly(b, b);
            e >>= 1;
        }
        acc
    }

    /// x^e with the empty-product convention 0^0 = 1. For nonzero bases the
    /// exponent is reduced mod q-1; 0^e = 0 for e > 0.
    pub fn pow(&self, x: FieldElem, e: u128) -> FieldElem {
        if x.0 == 0 {
            return if e == 0 { FieldElem(1) } else { FieldElem(0) };
        }
        if self.q == 2 {
            return FieldElem(1);
        }
        let qm1 = (self.q - 1) as u128;
        let r = (e % qm1) as u64;
        match &self.tables {
            Some(t) => {
                let lx = t.log[x.0 as usize] as u128;
                let idx = (lx * r as u128 % qm1) as usize;
                FieldElem(t.exp[idx] as u64)
            }
            None => self.pow_poly(x, r),
        }
    }

    /// x^{p^k}. Additive and multiplicative; k is reduced mod n.
    pub fn frobenius(&self, x: FieldElem, k: u32) -> FieldElem {
        let k = (k % self.spec.n) as usize;
        if k == 0 || x.0 == 0 {
            return x;
        }
        match &self.tables {
            Some(t) if !t.frob.is_empty() => FieldElem(t.frob[k][x.0 as usize] as u64),
            Some(t) => {
                let qm1 = self.q - 1;
                let e = (t.log[x.0 as usize] as u128 * t.frob_exp[k] as u128 % qm1 as u128) as usize;
                FieldElem(t.exp[e] as u64)
            }
            None => {
                let mut y = x;
                for _ in 0..k {
                    y = self.pow_poly(y, self.spec.p);
                }
                y
            }
        }
    }

    /// Relative trace onto F_{p^m}: sum of x^{p^{mi}} for i = 0..n/m.
    pub fn rel_trace(&self, x: FieldElem, m: u32) -> Result<FieldElem> {
        if m == 0 || self.spec.n % m != 0 {
            return Err(Error::NonDivisorSubfieldDegree { m, n: self.spec.n });
        }
        let steps = self.spec.n / m;
        let mut acc = FieldElem(0);
        let mut y = x;
        for _ in 0..steps {
            acc = self.add(acc, y);
            y = self.frobenius(y, m);
        }
        Ok(acc)
    }

    /// Absolute trace, as a field element of the prime subfield.
    pub fn abs_trace(&self, x: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.trace[x.0 as usize] as u64),
            None => self.rel_trace(x, 1).expect("1 divides n"),
        }
    }

    /// Absolute trace as an integer in 0..p (prime-subfield elements are
    /// exactly the indices below p).
    pub fn trace_val(&self, x: FieldElem) -> u64 {
        self.abs_trace(x).0
    }

    /// True iff x lies in the subfield F_{p^m}, i.e. x^{p^m} = x.
    pub fn in_subfield(&self, x: FieldElem, m: u32) -> Result<bool> {
        if m == 0 || self.spec.n % m != 0 {
            return Err(Error::NonDivisorSubfieldDegree { m, n: self.spec.n });
        }
        Ok(self.frobenius(x, m) == x)
    }

    /// True iff some y in this field satisfies y^d = x. Zero counts as a
    /// d-th power (0 = 0^d); for x != 0 this is x^{(q-1)/gcd(d, q-1)} = 1.
    pub fn is_dth_power(&self, x: FieldElem, d: u64) -> bool {
        assert!(d >= 1);
        if x.0 == 0 {
            return true;
        }
        let qm1 = self.q - 1;
        if qm1 == 0 {
            return true;
        }
        let g = d.gcd(&qm1);
        self.pow(x, (qm1 / g) as u128) == FieldElem(1)
    }

    /// Same test against the subfield F_{p^m}: x must lie in the subfield and
    /// be a d-th power of a subfield element.
    pub fn is_dth_power_in_subfield(&self, x: FieldElem, d: u64, m: u32) -> Result<bool> {
        if !self.in_subfield(x, m)? {
            return Ok(false);
        }
        if x.0 == 0 {
            return Ok(true);
        }
        let sub_order = self.spec.p.pow(m) - 1;
        if sub_order == 0 {
            return Ok(true);
        }
        let g = d.gcd(&sub_order);
        Ok(self.pow(x, (sub_order / g) as u128) == FieldElem(1))
    }

    /// All elements of the subfield F_{p^m}, in index order.
    pub fn subfield_elements(&self, m: u32) -> Result<Vec<FieldElem>> {
        let mut out = Vec::with_capacity(self.spec.p.pow(m) as usize);
        for x in self.elements() {
            if self.in_subfield(x, m)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

/// Builds a field context; `spec` may omit the modulus by way of
/// [`FieldCtx::with_default_modulus`]. Kept as a free function so call sites
/// read like the operation they perform.
pub fn build_field(spec: FieldSpec) -> Result<Arc<FieldCtx>> {
    Ok(Arc::new(FieldCtx::new(spec)?))
}

pub fn build_field_default(p: u64, n: u32) -> Result<Arc<FieldCtx>> {
    Ok(Arc::new(FieldCtx::with_default_modulus(p, n)?))
}
