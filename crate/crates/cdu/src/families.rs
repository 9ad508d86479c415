//! The five permutation-polynomial families under study.
//!
//! Every family has the shape F(X) = (X^{p^m} - X + delta)^s + X (in
//! characteristic 2 the inner minus is a plus) with a family-specific
//! exponent s:
//!
//! * `B1`: p = 2, n = 3m, s = 2^{2m} + 1
//! * `B2`: p = 2, n = 3m, s = 2^{2m-1} + 2^{m-1}         (m != 1 mod 3)
//! * `B3`: p = 2, n = 3m, s = 2^{3m-1} + 2^{m-1}        (2m != 1 mod 3)
//! * `T4`: p = 3, n = 2m, s = 3^{2m-1} + 2·3^{m-1}       (m even)
//! * `P5`: p odd, n = 2m, s = p^{m+1} + 1                (delta trace condition)

use std::fmt;
use std::sync::Arc;

use crate::analysis::FunctionTable;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    B1,
    B2,
    B3,
    T4,
    P5,
}

impl FamilyId {
    pub fn all() -> [FamilyId; 5] {
        [FamilyId::B1, FamilyId::B2, FamilyId::B3, FamilyId::T4, FamilyId::P5]
    }

    pub fn parse(s: &str) -> Result<FamilyId> {
        match s.to_ascii_lowercase().as_str() {
            "b1" => Ok(FamilyId::B1),
            "b2" => Ok(FamilyId::B2),
            "b3" => Ok(FamilyId::B3),
            "t4" => Ok(FamilyId::T4),
            "p5" => Ok(FamilyId::P5),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }

    /// Extension degree as a multiple of the subfield degree m.
    pub fn degree_multiplier(self) -> u32 {
        match self {
            FamilyId::B1 | FamilyId::B2 | FamilyId::B3 => 3,
            FamilyId::T4 | FamilyId::P5 => 2,
        }
    }

    /// The fixed characteristic, where the family pins one.
    pub fn fixed_p(self) -> Option<u64> {
        match self {
            FamilyId::B1 | FamilyId::B2 | FamilyId::B3 => Some(2),
            FamilyId::T4 => Some(3),
            FamilyId::P5 => None,
        }
    }

    /// The derived exponent s for subfield degree m (and characteristic p
    /// for P5).
    pub fn exponent(self, p: u64, m: u32) -> u64 {
        match self {
            FamilyId::B1 => (1u64 << (2 * m)) + 1,
            FamilyId::B2 => (1u64 << (2 * m - 1)) + (1u64 << (m - 1)),
            FamilyId::B3 => (1u64 << (3 * m - 1)) + (1u64 << (m - 1)),
            FamilyId::T4 => 3u64.pow(2 * m - 1) + 2 * 3u64.pow(m - 1),
            FamilyId::P5 => p.pow(m + 1) + 1,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyId::B1 => "b1",
            FamilyId::B2 => "b2",
            FamilyId::B3 => "b3",
            FamilyId::T4 => "t4",
            FamilyId::P5 => "p5",
        };
        write!(f, "{s}")
    }
}

/// Which reading of the P5 delta hypothesis a given delta satisfies. The
/// permutation lemma states (Tr(delta)+1)/Tr(delta), the uniformity theorem
/// (Tr(delta)-1)/Tr(delta); the harness records both and lets the data
/// decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P5Branches {
    pub trace_zero: bool,
    /// (Tr(delta)+1)/Tr(delta) is a (p-1)-th power in F_{p^m}, with zero
    /// counting as a power (0 = 0^{p-1}).
    pub power_plus: bool,
    /// (Tr(delta)-1)/Tr(delta) is a (p-1)-th power, zero allowed.
    pub power_minus: bool,
    /// Same conditions under the stricter reading that excludes zero.
    pub power_plus_nonzero: bool,
    pub power_minus_nonzero: bool,
}

impl P5Branches {
    pub fn any(&self) -> bool {
        self.trace_zero || self.power_plus || self.power_minus
    }
}

/// Evaluates both sign variants of the P5 (p-1)-th-power condition for
/// delta, against the subfield F_{p^m}.
pub fn p5_branches(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<P5Branches> {
    let tr = ctx.rel_trace(delta, m)?;
    if tr.0 == 0 {
        return Ok(P5Branches {
            trace_zero: true,
            power_plus: false,
            power_minus: false,
            power_plus_nonzero: false,
            power_minus_nonzero: false,
        });
    }
    let pm1 = ctx.p() - 1;
    let inv = ctx.inv(tr)?;
    let plus = ctx.mul(ctx.add(tr, ctx.one()), inv);
    let minus = ctx.mul(ctx.sub(tr, ctx.one()), inv);
    let power_plus = ctx.is_dth_power_in_subfield(plus, pm1, m)?;
    let power_minus = ctx.is_dth_power_in_subfield(minus, pm1, m)?;
    Ok(P5Branches {
        trace_zero: false,
        power_plus,
        power_minus,
        power_plus_nonzero: power_plus && plus.0 != 0,
        power_minus_nonzero: power_minus && minus.0 != 0,
    })
}

/// One family bound to a concrete field, subfield degree and delta.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub id: FamilyId,
    pub ctx: Arc<FieldCtx>,
    pub m: u32,
    pub delta: FieldElem,
    pub s: u64,
    /// Set when instantiated non-strictly with parameters the theorems do
    /// not cover; such instances are exploratory.
    pub outside_hypotheses: bool,
}

/// Binds a family to (ctx, m, delta). In strict mode the theorem-side
/// hypotheses must hold; non-strict mode permits exploratory parameters and
/// tags the instance instead.
pub fn instantiate(
    id: FamilyId,
    ctx: Arc<FieldCtx>,
    m: u32,
    delta: FieldElem,
    strict: bool,
) -> Result<FamilyInstance> {
    let p = ctx.p();
    let n = ctx.n();
    if let Some(fp) = id.fixed_p() {
        if p != fp {
            return Err(Error::ShapeMismatch {
                family: id.to_string(),
                reason: format!("requires p = {fp}, field has p = {p}"),
            });
        }
    }
    if id == FamilyId::P5 && p == 2 {
        return Err(Error::ShapeMismatch {
            family: id.to_string(),
            reason: "requires odd characteristic".into(),
        });
    }
    if m == 0 || n != id.degree_multiplier() * m {
        return Err(Error::ShapeMismatch {
            family: id.to_string(),
            reason: format!("requires n = {}m, got n = {n}, m = {m}", id.degree_multiplier()),
        });
    }
    if delta.0 >= ctx.q() {
        return Err(Error::ShapeMismatch {
            family: id.to_string(),
            reason: format!("delta index {} out of range", delta.0),
        });
    }

    let hypothesis_ok = match id {
        FamilyId::B1 => true,
        FamilyId::B2 => m % 3 != 1,
        FamilyId::B3 => (2 * m) % 3 != 1,
        FamilyId::T4 => m % 2 == 0,
        FamilyId::P5 => p5_branches(&ctx, m, delta)?.any(),
    };
    if strict && !hypothesis_ok {
        let reason = match id {
            FamilyId::B2 => format!("m = {m} is 1 mod 3"),
            FamilyId::B3 => format!("2m = {} is 1 mod 3", 2 * m),
            FamilyId::T4 => format!("m = {m} is odd"),
            FamilyId::P5 => "delta satisfies neither the trace-0 nor the power branch".into(),
            FamilyId::B1 => unreachable!(),
        };
        return Err(Error::HypothesisViolation { family: id.to_string(), reason });
    }

    let s = id.exponent(p, m);
    Ok(FamilyInstance { id, ctx, m, delta, s, outside_hypotheses: !hypothesis_ok })
}

impl FamilyInstance {
    /// F(x) from the closed trinomial form.
    pub fn evaluate(&self, x: FieldElem) -> FieldElem {
        let ctx = &self.ctx;
        // In characteristic 2 the inner subtraction is the paper's addition.
        let base = ctx.add(ctx.sub(ctx.frobenius(x, self.m), x), self.delta);
        ctx.add(ctx.pow(base, self.s as u128), x)
    }

    /// F(x) from the expanded multinomial form given in the proofs,
    /// evaluated term by term. Only B1, T4 and P5 have explicit expansions;
    /// B2 and B3 are handled through trace-form rewrites instead and report
    /// `UnsupportedFamily` here.
    pub fn evaluate_expanded(&self, x: FieldElem) -> Result<FieldElem> {
        let ctx = &self.ctx;
        let m = self.m;
        let d = self.delta;
        match self.id {
            FamilyId::B1 => {
                let e = |k: u32| 1u64 << k;
                let dq = ctx.pow(d, e(2 * m) as u128); // delta^{2^{2m}}
                let mut acc = ctx.pow(x, (e(2 * m) + e(m)) as u128);
                acc = ctx.add(acc, ctx.pow(x, (e(2 * m) + 1) as u128));
                acc = ctx.add(acc, ctx.pow(x, (e(m) + 1) as u128));
                acc = ctx.add(acc, ctx.mul(dq, ctx.pow(x, e(m) as u128)));
                acc = ctx.add(acc, ctx.mul(d, ctx.pow(x, e(2 * m) as u128)));
                acc = ctx.add(acc, ctx.pow(x, 2));
                let lin = ctx.add(ctx.add(dq, d), ctx.one());
                acc = ctx.add(acc, ctx.mul(lin, x));
                acc = ctx.add(acc, ctx.mul(dq, d));
                Ok(acc)
            }
            FamilyId::T4 => {
                let t = |k: u32| 3u64.pow(k);
                let e_lo = t(m - 1);
                let e_hi = t(2 * m - 1);
                let c1 = ctx.add(
                    ctx.pow(d, (2 * e_lo) as u128),
                    ctx.pow(d, (e_lo + e_hi) as u128),
                );
                let c2 = ctx.add(ctx.pow(d, e_lo as u128), ctx.pow(d, e_hi as u128));
                let mut acc = ctx.pow(x, t(m) as u128);
                acc = ctx.add(
                    acc,
                    ctx.mul(c1, ctx.sub(ctx.pow(x, e_lo as u128), ctx.pow(x, e_hi as u128))),
                );
                let quad = ctx.add(
                    ctx.add(ctx.pow(x, (2 * e_lo) as u128), ctx.pow(x, (2 * e_hi) as u128)),
                    ctx.pow(x, (e_lo + e_hi) as u128),
                );
                acc = ctx.add(acc, ctx.mul(c2, quad));
                acc = ctx.add(acc, ctx.pow(d, (e_hi + 2 * e_lo) as u128));
                Ok(acc)
            }
            FamilyId::P5 => {
                let p = ctx.p();
                let pm = p.pow(m);
                let pm1 = p.pow(m + 1);
                let dq = ctx.pow(d, pm1 as u128); // delta^{p^{m+1}}
                let mut acc = ctx.pow(x, (pm + p) as u128);
                acc = ctx.add(acc, ctx.pow(x, (pm1 + 1) as u128));
                acc = ctx.sub(acc, ctx.pow(x, (p + 1) as u128));
                acc = ctx.sub(acc, ctx.pow(x, (pm + pm1) as u128));
                acc = ctx.add(acc, ctx.mul(d, ctx.pow(x, p as u128)));
                acc = ctx.sub(acc, ctx.mul(d, ctx.pow(x, pm1 as u128)));
                acc = ctx.add(acc, ctx.mul(dq, ctx.pow(x, pm as u128)));
                acc = ctx.add(acc, ctx.mul(ctx.sub(ctx.one(), dq), x));
                acc = ctx.add(acc, ctx.mul(dq, d));
                Ok(acc)
            }
            FamilyId::B2 | FamilyId::B3 => Err(Error::UnsupportedFamily(self.id.to_string())),
        }
    }

    /// Dense lookup table of the instance; downstream analysis consumes
    /// only this.
    pub fn as_lut(&self) -> FunctionTable {
        let values = self.ctx.elements().map(|x| self.evaluate(x).0).collect();
        FunctionTable::new(self.ctx.clone(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::is_permutation;
    use crate::gf::build_field_default;

    #[test]
    fn exponents() {
        assert_eq!(FamilyId::B1.exponent(2, 1), 5);
        assert_eq!(FamilyId::B1.exponent(2, 2), 17);
        assert_eq!(FamilyId::B2.exponent(2, 2), 10);
        assert_eq!(FamilyId::B3.exponent(2, 1), 5);
        assert_eq!(FamilyId::T4.exponent(3, 2), 33);
        assert_eq!(FamilyId::P5.exponent(3, 1), 10);
        assert_eq!(FamilyId::P5.exponent(5, 1), 26);
    }

    #[test]
    fn strict_congruence_hypotheses() {
        let ctx12 = build_field_default(2, 12).unwrap();
        let err = instantiate(FamilyId::B2, ctx12.clone(), 4, FieldElem(0), true).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { .. }));
        let inst = instantiate(FamilyId::B2, ctx12, 4, FieldElem(0), false).unwrap();
        assert!(inst.outside_hypotheses);

        let ctx6 = build_field_default(2, 6).unwrap();
        let err = instantiate(FamilyId::B3, ctx6.clone(), 2, FieldElem(0), true).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { .. }));
        assert!(instantiate(FamilyId::B2, ctx6, 2, FieldElem(0), true).is_ok());
    }

    #[test]
    fn shape_mismatches() {
        let ctx = build_field_default(2, 6).unwrap();
        assert!(matches!(
            instantiate(FamilyId::B1, ctx.clone(), 3, FieldElem(0), true),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            instantiate(FamilyId::T4, ctx.clone(), 2, FieldElem(0), true),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            instantiate(FamilyId::P5, ctx, 3, FieldElem(0), true),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn b1_small_values() {
        let ctx = build_field_default(2, 3).unwrap();
        let inst = instantiate(FamilyId::B1, ctx.clone(), 1, ctx.zero(), true).unwrap();
        assert_eq!(inst.s, 5);
        assert_eq!(inst.evaluate(ctx.zero()), ctx.zero());
        // (1 + 1 + 0)^5 + 1 = 1 in characteristic 2
        assert_eq!(inst.evaluate(ctx.one()), ctx.one());
    }

    #[test]
    fn b1_luts_are_permutations() {
        for m in [1u32, 2] {
            let ctx = build_field_default(2, 3 * m).unwrap();
            for delta in ctx.elements() {
                let inst = instantiate(FamilyId::B1, ctx.clone(), m, delta, true).unwrap();
                assert!(is_permutation(&inst.as_lut()), "m={m} delta={delta}");
            }
        }
    }

    #[test]
    fn lut_matches_evaluate() {
        let ctx = build_field_default(3, 2).unwrap();
        let inst = instantiate(FamilyId::P5, ctx.clone(), 1, ctx.zero(), true).unwrap();
        let lut = inst.as_lut();
        for x in ctx.elements() {
            assert_eq!(lut.get(x), inst.evaluate(x));
        }
    }

    #[test]
    fn expanded_equals_direct_b1() {
        for (m, n) in [(1u32, 3u32), (2, 6)] {
            let ctx = build_field_default(2, n).unwrap();
            for delta in ctx.elements() {
                let inst = instantiate(FamilyId::B1, ctx.clone(), m, delta, true).unwrap();
                for x in ctx.elements() {
                    assert_eq!(inst.evaluate_expanded(x).unwrap(), inst.evaluate(x));
                }
            }
        }
    }

    #[test]
    fn expanded_equals_direct_t4() {
        let ctx = build_field_default(3, 4).unwrap();
        for delta in ctx.elements() {
            let inst = instantiate(FamilyId::T4, ctx.clone(), 2, delta, true).unwrap();
            for x in ctx.elements() {
                assert_eq!(inst.evaluate_expanded(x).unwrap(), inst.evaluate(x));
            }
        }
    }

    #[test]
    fn expanded_equals_direct_p5() {
        for (p, m) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let ctx = build_field_default(p, 2 * m).unwrap();
            for delta in ctx.elements() {
                let inst = instantiate(FamilyId::P5, ctx.clone(), m, delta, false).unwrap();
                for x in ctx.elements() {
                    assert_eq!(inst.evaluate_expanded(x).unwrap(), inst.evaluate(x));
                }
            }
        }
        // constant term of the expansion at x = 0 is delta^{s}
        let ctx = build_field_default(3, 2).unwrap();
        let inst = instantiate(FamilyId::P5, ctx.clone(), 1, ctx.zero(), true).unwrap();
        assert_eq!(inst.evaluate_expanded(ctx.zero()).unwrap(), ctx.zero());
    }

    #[test]
    fn expanded_unsupported_for_b2_b3() {
        let ctx = build_field_default(2, 3).unwrap();
        let inst = instantiate(FamilyId::B3, ctx.clone(), 1, ctx.zero(), true).unwrap();
        assert!(matches!(inst.evaluate_expanded(ctx.one()), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn t4_odd_m_is_exploratory_not_assumed() {
        let ctx = build_field_default(3, 2).unwrap();
        assert!(matches!(
            instantiate(FamilyId::T4, ctx.clone(), 1, ctx.zero(), true),
            Err(Error::HypothesisViolation { .. })
        ));
        let inst = instantiate(FamilyId::T4, ctx, 1, FieldElem(0), false).unwrap();
        assert!(inst.outside_hypotheses);
        // permutation status is recorded by the caller, never assumed
        let _ = is_permutation(&inst.as_lut());
    }
}
