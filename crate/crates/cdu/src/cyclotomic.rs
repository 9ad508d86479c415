//! Exact arithmetic in Z[w], w = e^{2*pi*i/p} a primitive p-th root of unity.
//!
//! Elements are integer vectors of length p-1 over the basis 1, w, ..,
//! w^{p-2}; the relation 1 + w + .. + w^{p-1} = 0 eliminates the w^{p-1}
//! coordinate, and since the p-th cyclotomic polynomial has degree p-1 this
//! canonical form is unique: equality is coefficient-wise. For p = 2 the
//! representation degenerates to a single signed integer.
//!
//! Coefficients are checked 128-bit integers. Character sums at desk scale
//! stay far below that; an overflow is a hard error, never a wrap.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// An element of Z[w] in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<i128>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(p={}, {})", self.p, self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 && !(j == 0 && self.coeffs.iter().all(|&x| x == 0)) {
                continue;
            }
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·w")?,
                _ => write!(f, "{c}·w^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::CoefficientOverflow)
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::CoefficientOverflow)
}

impl CycInt {
    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn zero(p: u64) -> CycInt {
        assert!(p >= 2);
        CycInt { p, coeffs: vec![0; (p - 1) as usize] }
    }

    pub fn one(p: u64) -> CycInt {
        Self::integer(p, 1)
    }

    pub fn integer(p: u64, v: i128) -> CycInt {
        let mut z = Self::zero(p);
        z.coeffs[0] = v;
        z
    }

    /// w^j, canonically reduced.
    pub fn omega_pow(p: u64, j: u64) -> CycInt {
        let mut counts = vec![0i128; p as usize];
        counts[(j % p) as usize] = 1;
        Self::from_exponent_counts(p, &counts).expect("unit coefficients cannot overflow")
    }

    /// Sum of `counts[e]` copies of w^e over e = 0..p, reduced with the
    /// vanishing-sum relation.
    pub fn from_exponent_counts(p: u64, counts: &[i128]) -> Result<CycInt> {
        assert_eq!(counts.len(), p as usize);
        let top = counts[(p - 1) as usize];
        let mut coeffs = Vec::with_capacity((p - 1) as usize);
        for &c in counts.iter().take((p - 1) as usize) {
            coeffs.push(c.checked_sub(top).ok_or(Error::CoefficientOverflow)?);
        }
        Ok(CycInt { p, coeffs })
    }

    fn check_order(&self, other: &CycInt) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::MixedCyclotomicOrder(self.p, other.p))
        }
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_order(other)?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            coeffs.push(checked_add(*a, *b)?);
        }
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_order(other)?;
        let p = self.p as usize;
        let mut counts = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let e = (i + j) % p;
                counts[e] = checked_add(counts[e], checked_mul(a, b)?)?;
            }
        }
        Self::from_exponent_counts(self.p, &counts)
    }

    pub fn mul_integer(&self, v: i128) -> Result<CycInt> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(checked_mul(c, v)?);
        }
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Complex conjugation w -> w^{p-1}; an involution.
    pub fn conjugate(&self) -> CycInt {
        let p = self.p as usize;
        let mut counts = vec![0i128; p];
        for (j, &c) in self.coeffs.iter().enumerate() {
            counts[(p - j) % p] = c;
        }
        Self::from_exponent_counts(self.p, &counts).expect("conjugation cannot overflow")
    }

    /// a * conjugate(a); lies in the real subring, and is a rational integer
    /// whenever the caller expects a squared magnitude.
    pub fn norm_squared(&self) -> Result<CycInt> {
        self.mul(&self.conjugate())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_rational_integer(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0)
    }

    pub fn rational_value(&self) -> Option<i128> {
        if self.is_rational_integer() {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

/// The canonical additive character sum over the whole field:
/// sum over x in F_q of w^{Tr(u x)}. Equals q at u = 0 and 0 otherwise.
pub fn char_sum(ctx: &FieldCtx, u: FieldElem) -> CycInt {
    let p = ctx.p();
    let mut counts = vec![0i128; p as usize];
    for x in ctx.elements() {
        counts[ctx.trace_val(ctx.mul(u, x)) as usize] += 1;
    }
    CycInt::from_exponent_counts(p, &counts).expect("counts bounded by q")
}
