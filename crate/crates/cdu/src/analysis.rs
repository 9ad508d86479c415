//! c-DDT entries, c-differential uniformity spectra, Walsh coefficients and
//! the character-sum counting oracle, for arbitrary function tables.
//!
//! The c-derivative of F in direction a is X -> F(X+a) - c·F(X); the c-DDT
//! entry at (a, b) counts its preimages of b, and the uniformity is the
//! maximum entry over all (a, b) with a != 0 required exactly when c = 1.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// Witness pairs retained per report, in lexicographic (a, b) order.
pub const WITNESS_CAP: usize = 16;

/// A dense table of a function F_q -> F_q: entry i is F(elem(i)).
#[derive(Clone)]
pub struct FunctionTable {
    ctx: Arc<FieldCtx>,
    values: Vec<u64>,
}

impl FunctionTable {
    pub fn new(ctx: Arc<FieldCtx>, values: Vec<u64>) -> FunctionTable {
        assert_eq!(values.len() as u64, ctx.q(), "table length must be q");
        debug_assert!(values.iter().all(|&v| v < ctx.q()));
        FunctionTable { ctx, values }
    }

    pub fn from_fn(ctx: Arc<FieldCtx>, mut f: impl FnMut(FieldElem) -> FieldElem) -> FunctionTable {
        let values = ctx.elements().map(|x| f(x).0).collect();
        FunctionTable::new(ctx, values)
    }

    pub fn identity(ctx: Arc<FieldCtx>) -> FunctionTable {
        let values = (0..ctx.q()).collect();
        FunctionTable::new(ctx, values)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn get(&self, x: FieldElem) -> FieldElem {
        FieldElem(self.values[x.0 as usize])
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// A dense table of a p-ary function F_q -> F_p, the input shape of the
/// Walsh transform.
#[derive(Clone)]
pub struct PAryFunction {
    ctx: Arc<FieldCtx>,
    values: Vec<u8>,
}

impl PAryFunction {
    pub fn new(ctx: Arc<FieldCtx>, values: Vec<u8>) -> PAryFunction {
        assert_eq!(values.len() as u64, ctx.q());
        assert!(values.iter().all(|&v| (v as u64) < ctx.p()));
        PAryFunction { ctx, values }
    }

    pub fn from_fn(ctx: Arc<FieldCtx>, mut f: impl FnMut(FieldElem) -> u64) -> PAryFunction {
        let p = ctx.p();
        let values = ctx
            .elements()
            .map(|x| {
                let v = f(x);
                assert!(v < p, "p-ary value out of range");
                v as u8
            })
            .collect();
        PAryFunction { ctx, values }
    }

    /// Tr(F(x)) for a field-valued table.
    pub fn trace_of(table: &FunctionTable) -> PAryFunction {
        let ctx = table.ctx().clone();
        let values = table.values().iter().map(|&v| ctx.trace_val(FieldElem(v)) as u8).collect();
        PAryFunction { ctx, values }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn get(&self, x: FieldElem) -> u64 {
        self.values[x.0 as usize] as u64
    }
}

/// Uniformity classification: PcN (max 1), APcN (max 2), or the max itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    PcN,
    APcN,
    Uniformity(u64),
}

impl Classification {
    pub fn from_max(max: u64) -> Classification {
        match max {
            1 => Classification::PcN,
            2 => Classification::APcN,
            k => Classification::Uniformity(k),
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::PcN => write!(f, "PcN"),
            Classification::APcN => write!(f, "APcN"),
            Classification::Uniformity(k) => write!(f, "Uniformity({k})"),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The c-DDT spectrum, maximum and classification for one (function, c).
#[derive(Clone, Debug, Serialize)]
pub struct CDdtReport {
    pub c: FieldElem,
    pub max_entry: u64,
    pub classification: Classification,
    /// entry value -> number of admissible (a, b) pairs attaining it.
    pub spectrum: BTreeMap<u64, u64>,
    /// The degenerate a = 0 row when c = 1, kept out of the max but recorded
    /// for transparency (entry value -> count of b attaining it).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded: Option<BTreeMap<u64, u64>>,
    /// Up to [`WITNESS_CAP`] (a, b) pairs attaining the maximum, in
    /// lexicographic order.
    pub witnesses: Vec<(FieldElem, FieldElem)>,
}

/// True iff the table's values are pairwise distinct.
pub fn is_permutation(table: &FunctionTable) -> bool {
    let q = table.ctx().q() as usize;
    let mut seen = vec![false; q];
    for &v in table.values() {
        if seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    true
}

/// Exact count of solutions X of F(X+a) - c·F(X) = b.
pub fn c_ddt_entry(table: &FunctionTable, c: FieldElem, a: FieldElem, b: FieldElem) -> u64 {
    let ctx = table.ctx();
    let mut count = 0;
    for x in ctx.elements() {
        let lhs = ctx.sub(table.get(ctx.add(x, a)), ctx.mul(c, table.get(x)));
        if lhs == b {
            count += 1;
        }
    }
    count
}

/// Full c-DDT scan for one c: spectrum, maximum (a != 0 enforced exactly
/// when c = 1), classification and capped witnesses. One histogram pass per
/// row a, O(q^2) overall.
pub fn c_uniformity(table: &FunctionTable, c: FieldElem) -> CDdtReport {
    let ctx = table.ctx();
    let q = ctx.q();
    let one = ctx.one();
    let mut spectrum: BTreeMap<u64, u64> = BTreeMap::new();
    let mut excluded = None;
    let mut witnesses: Vec<(FieldElem, FieldElem)> = Vec::new();
    let mut max_entry = 0u64;
    let mut hist = vec![0u64; q as usize];

    for a in ctx.elements() {
        for h in hist.iter_mut() {
            *h = 0;
        }
        for x in ctx.elements() {
            let b = ctx.sub(table.get(ctx.add(x, a)), ctx.mul(c, table.get(x)));
            hist[b.0 as usize] += 1;
        }
        if c == one && a.0 == 0 {
            let mut row = BTreeMap::new();
            for &h in hist.iter() {
                *row.entry(h).or_insert(0) += 1;
            }
            excluded = Some(row);
            continue;
        }
        for (b, &h) in hist.iter().enumerate() {
            *spectrum.entry(h).or_insert(0) += 1;
            if h > max_entry {
                max_entry = h;
                witnesses.clear();
            }
            if h == max_entry && witnesses.len() < WITNESS_CAP {
                witnesses.push((a, FieldElem(b as u64)));
            }
        }
    }

    CDdtReport {
        c,
        max_entry,
        classification: Classification::from_max(max_entry),
        spectrum,
        excluded,
        witnesses,
    }
}

/// One report per c. Work is partitioned over c and merged in input order,
/// so the result is identical regardless of parallel schedule.
pub fn full_c_sweep(table: &FunctionTable, cs: &[FieldElem]) -> Vec<CDdtReport> {
    cs.par_iter().map(|&c| c_uniformity(table, c)).collect()
}

/// Direct bijectivity test of every c-derivative row: F is PcN for c
/// exactly when x -> F(x+a) - c·F(x) is a bijection for every admissible a.
/// Independent route used to cross-check PcN verdicts from [`c_uniformity`].
pub fn pcn_by_row_bijectivity(table: &FunctionTable, c: FieldElem) -> bool {
    let ctx = table.ctx();
    let one = ctx.one();
    let mut seen = vec![false; ctx.q() as usize];
    for a in ctx.elements() {
        if c == one && a.0 == 0 {
            continue;
        }
        for s in seen.iter_mut() {
            *s = false;
        }
        for x in ctx.elements() {
            let b = ctx.sub(table.get(ctx.add(x, a)), ctx.mul(c, table.get(x)));
            if seen[b.0 as usize] {
                return false;
            }
            seen[b.0 as usize] = true;
        }
    }
    true
}

/// Exact Walsh coefficient of a p-ary function at v:
/// sum over x of w^{f(x) - Tr(v x)}.
pub fn walsh_coefficient(f: &PAryFunction, v: FieldElem) -> CycInt {
    let ctx = f.ctx();
    let p = ctx.p();
    let mut counts = vec![0i128; p as usize];
    for x in ctx.elements() {
        let e = (f.get(x) + p - ctx.trace_val(ctx.mul(v, x))) % p;
        counts[e as usize] += 1;
    }
    CycInt::from_exponent_counts(p, &counts).expect("counts bounded by q")
}

/// The character-sum counting oracle: evaluates
/// (1/q) · sum over X, beta of w^{Tr(beta·(F(X+a) - c F(X) - b))}
/// exactly in Z[w]. The inner sum must reduce to a rational integer exactly
/// divisible by q and equal to [`c_ddt_entry`] on the same inputs; anything
/// else is an implementation bug surfaced as `NonIntegralCount`.
pub fn charsum_count(
    table: &FunctionTable,
    c: FieldElem,
    a: FieldElem,
    b: FieldElem,
) -> Result<u64> {
    let ctx = table.ctx();
    let p = ctx.p();
    let q = ctx.q();
    let mut counts = vec![0i128; p as usize];
    for x in ctx.elements() {
        let g = ctx.sub(ctx.sub(table.get(ctx.add(x, a)), ctx.mul(c, table.get(x))), b);
        for beta in ctx.elements() {
            counts[ctx.trace_val(ctx.mul(beta, g)) as usize] += 1;
        }
    }
    let total = CycInt::from_exponent_counts(p, &counts)?;
    let value = total
        .rational_value()
        .ok_or_else(|| Error::NonIntegralCount(format!("sum is not rational: {total}")))?;
    if value < 0 || value % q as i128 != 0 {
        return Err(Error::NonIntegralCount(format!("sum {value} is not divisible by q={q}")));
    }
    Ok((value / q as i128) as u64)
}

/// CSV dump of a full c-DDT: header `a,b,count`, one row per (a, b).
pub fn write_ddt_csv<W: Write>(table: &FunctionTable, c: FieldElem, w: &mut W) -> Result<()> {
    let ctx = table.ctx();
    let q = ctx.q();
    writeln!(w, "a,b,count")?;
    let mut hist = vec![0u64; q as usize];
    for a in ctx.elements() {
        for h in hist.iter_mut() {
            *h = 0;
        }
        for x in ctx.elements() {
            let b = ctx.sub(table.get(ctx.add(x, a)), ctx.mul(c, table.get(x)));
            hist[b.0 as usize] += 1;
        }
        for (b, &h) in hist.iter().enumerate() {
            writeln!(w, "{},{},{}", a.0, b, h)?;
        }
    }
    Ok(())
}
