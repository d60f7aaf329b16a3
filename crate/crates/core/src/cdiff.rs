//! c-differential tables and uniformity.
//!
//! The entry `cΔ_F(a, b)` counts `x` with `F(x + a) - c F(x) = b`. A single
//! pass over `x` for fixed `(c, a)` fills every `b` bucket at once, so the
//! whole table costs `q^2` lookups per `c`. A character-sum evaluation of the
//! same entry is kept as an independent oracle, along with the boomerang
//! table of a permutation for comparison with its `(-1)`-differential table.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::funcspec::ValueTable;

/// Number of `(a, b)` pairs attaining the maximum kept in a summary.
pub const WITNESS_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    /// Uniformity 1 (PcN).
    Perfect,
    /// Uniformity 2 (APcN).
    AlmostPerfect,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDdtSummary {
    pub c: FieldElem,
    pub uniformity: u32,
    /// Entry value -> number of admissible `(a, b)` pairs with that value.
    pub histogram: BTreeMap<u32, u64>,
    /// Up to [`WITNESS_CAP`] `(a, b)` index pairs attaining the maximum, in
    /// increasing `(a, b)` order.
    pub witnesses: Vec<(u32, u32)>,
    /// Whether `a = 0` was left out (exactly when `c = 1`).
    pub excluded_a0: bool,
}

impl CDdtSummary {
    pub fn class(&self) -> Nonlinearity {
        classify(self.uniformity)
    }
}

pub fn classify(uniformity: u32) -> Nonlinearity {
    match uniformity {
        1 => Nonlinearity::Perfect,
        2 => Nonlinearity::AlmostPerfect,
        _ => Nonlinearity::Other,
    }
}

fn checked(ctx: &FieldCtx, f: &ValueTable, c: FieldElem) -> Result<u32> {
    f.check(ctx)?;
    ctx.owns(c)
}

/// `c F(x)` for every `x`.
fn scaled_values(ctx: &FieldCtx, f: &[u32], c: u32) -> Vec<u32> {
    f.iter().map(|&y| ctx.mul_idx(c, y)).collect()
}

/// Fills `buf[b] = cΔ_F(a, b)` and returns the row maximum. `buf` must be
/// zeroed and have `q` slots.
fn fill_row(ctx: &FieldCtx, f: &[u32], cf: &[u32], a: u32, buf: &mut [u32]) -> u32 {
    let mut max = 0;
    if ctx.characteristic() == 2 {
        for (x, &cfx) in cf.iter().enumerate() {
            let slot = &mut buf[(f[x ^ a as usize] ^ cfx) as usize];
            *slot += 1;
            max = max.max(*slot);
        }
    } else {
        for (x, &cfx) in cf.iter().enumerate() {
            let b = ctx.sub_idx(f[ctx.add_idx(x as u32, a) as usize], cfx);
            let slot = &mut buf[b as usize];
            *slot += 1;
            max = max.max(*slot);
        }
    }
    max
}

fn first_a(c: u32) -> u32 {
    if c == 1 {
        1
    } else {
        0
    }
}

pub fn cddt_entry(ctx: &FieldCtx, f: &ValueTable, c: FieldElem, a: FieldElem, b: FieldElem) -> Result<u64> {
    let c = checked(ctx, f, c)?;
    let (a, b) = (ctx.owns(a)?, ctx.owns(b)?);
    if c == 1 && a == 0 {
        return Err(Error::ExcludedDerivative);
    }
    let v = f.values();
    Ok((0..ctx.order())
        .filter(|&x| ctx.sub_idx(v[ctx.add_idx(x, a) as usize], ctx.mul_idx(c, v[x as usize])) == b)
        .count() as u64)
}

/// One row `b -> cΔ_F(a, b)`.
pub fn cddt_row(ctx: &FieldCtx, f: &ValueTable, c: FieldElem, a: FieldElem) -> Result<Vec<u32>> {
    let c = checked(ctx, f, c)?;
    let a = ctx.owns(a)?;
    if c == 1 && a == 0 {
        return Err(Error::ExcludedDerivative);
    }
    let cf = scaled_values(ctx, f.values(), c);
    let mut buf = vec![0u32; ctx.order() as usize];
    fill_row(ctx, f.values(), &cf, a, &mut buf);
    Ok(buf)
}

#[derive(Clone, Debug, Default)]
struct Partial {
    max: u32,
    /// `freq[v]` = number of entries equal to `v`.
    freq: Vec<u64>,
    witnesses: Vec<(u32, u32)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        if self.freq.len() < other.freq.len() {
            self.freq.resize(other.freq.len(), 0);
        }
        for (s, o) in self.freq.iter_mut().zip(&other.freq) {
            *s += o;
        }
        match self.max.cmp(&other.max) {
            std::cmp::Ordering::Less => {
                self.max = other.max;
                self.witnesses = other.witnesses;
            }
            std::cmp::Ordering::Equal => {
                let room = WITNESS_CAP - self.witnesses.len();
                self.witnesses.extend(other.witnesses.into_iter().take(room));
            }
            std::cmp::Ordering::Greater => {}
        }
        self
    }
}

/// Full sweep over admissible `(a, b)`: maximum, histogram and witnesses.
pub fn cdu(ctx: &FieldCtx, f: &ValueTable, c: FieldElem) -> Result<CDdtSummary> {
    let ci = checked(ctx, f, c)?;
    let q = ctx.order();
    let cf = scaled_values(ctx, f.values(), ci);
    let total = (first_a(ci)..q)
        .into_par_iter()
        .map_init(
            || vec![0u32; q as usize],
            |buf, a| {
                let max = fill_row(ctx, f.values(), &cf, a, buf);
                let mut part = Partial { max, freq: vec![0; max as usize + 1], witnesses: Vec::new() };
                for (b, slot) in buf.iter_mut().enumerate() {
                    part.freq[*slot as usize] += 1;
                    if *slot == max && part.witnesses.len() < WITNESS_CAP {
                        part.witnesses.push((a, b as u32));
                    }
                    *slot = 0;
                }
                part
            },
        )
        .reduce(Partial::default, Partial::merge);
    let histogram = total.freq.iter().enumerate().filter(|(_, &n)| n > 0).map(|(v, &n)| (v as u32, n)).collect();
    Ok(CDdtSummary { c, uniformity: total.max, histogram, witnesses: total.witnesses, excluded_a0: ci == 1 })
}

/// Uniformity only; the inner loop of the verification grids.
pub fn c_uniformity(ctx: &FieldCtx, f: &ValueTable, c: FieldElem) -> Result<u32> {
    let ci = checked(ctx, f, c)?;
    Ok(c_uniformity_idx(ctx, f.values(), ci))
}

/// Unchecked variant of [`c_uniformity`] on raw value indices.
pub fn c_uniformity_idx(ctx: &FieldCtx, f: &[u32], c: u32) -> u32 {
    let q = ctx.order();
    let cf = scaled_values(ctx, f, c);
    (first_a(c)..q)
        .into_par_iter()
        .map_init(
            || vec![0u32; q as usize],
            |buf, a| {
                let max = fill_row(ctx, f, &cf, a, buf);
                buf.fill(0);
                max
            },
        )
        .max()
        .unwrap_or(0)
}

/// Every admissible row of the table, for export.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDdtTable {
    pub c: FieldElem,
    /// `(a, row)` with `row[b] = cΔ_F(a, b)`, increasing in `a`.
    pub rows: Vec<(u32, Vec<u32>)>,
}

impl CDdtTable {
    pub const CSV_HEADER: &'static str = "c,a,b,count";

    /// Long format without header: one `c,a,b,count` line per entry, element
    /// indices throughout, so each `(c, a)` block has `q` lines summing to `q`.
    pub fn write_csv_rows(&self, out: &mut String) {
        use std::fmt::Write;
        let c = self.c.index();
        for (a, row) in &self.rows {
            for (b, n) in row.iter().enumerate() {
                let _ = writeln!(out, "{c},{a},{b},{n}");
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        self.write_csv_rows(&mut out);
        out
    }
}

pub fn cddt_table(ctx: &FieldCtx, f: &ValueTable, c: FieldElem) -> Result<CDdtTable> {
    let ci = checked(ctx, f, c)?;
    let q = ctx.order();
    let cf = scaled_values(ctx, f.values(), ci);
    let rows = (first_a(ci)..q)
        .into_par_iter()
        .map(|a| {
            let mut buf = vec![0u32; q as usize];
            fill_row(ctx, f.values(), &cf, a, &mut buf);
            (a, buf)
        })
        .collect();
    Ok(CDdtTable { c, rows })
}

/// The same entry as [`cddt_entry`], computed as
/// `(1/q) sum_beta sum_x w^Tr(beta (F(x+a) - c F(x) - b))` with the inner
/// character values tallied by trace residue.
pub fn count_via_charsum(ctx: &FieldCtx, f: &ValueTable, c: FieldElem, a: FieldElem, b: FieldElem) -> Result<u64> {
    let ci = checked(ctx, f, c)?;
    let (ai, bi) = (ctx.owns(a)?, ctx.owns(b)?);
    if ci == 1 && ai == 0 {
        return Err(Error::ExcludedDerivative);
    }
    let p = ctx.characteristic() as usize;
    let v = f.values();
    let diffs: Vec<u32> = (0..ctx.order())
        .map(|x| ctx.sub_idx(ctx.sub_idx(v[ctx.add_idx(x, ai) as usize], ctx.mul_idx(ci, v[x as usize])), bi))
        .collect();
    let mut tally = vec![0i64; p];
    if p == 2 {
        // Tr(beta y) is the parity of (mask(beta) & y) on coordinate vectors.
        let basis_traces =
            |beta: u32| (0..ctx.degree()).fold(0u32, |m, i| m | (ctx.trace_idx(ctx.mul_idx(beta, 1 << i)) << i));
        for beta in 0..ctx.order() {
            let mask = basis_traces(beta);
            for &d in &diffs {
                tally[((mask & d).count_ones() & 1) as usize] += 1;
            }
        }
    } else {
        for beta in 0..ctx.order() {
            for &d in &diffs {
                tally[ctx.trace_idx(ctx.mul_idx(beta, d)) as usize] += 1;
            }
        }
    }
    // sum_r T_r w^r is rational only when T_1 = ... = T_{p-1}; then it is T_0 - T_1.
    let total = tally[0] - tally[1];
    let q = i64::from(ctx.order());
    if tally[1..].iter().any(|&t| t != tally[1]) || total % q != 0 || total < 0 {
        return Err(Error::NonIntegralCharacterSum { total });
    }
    Ok((total / q) as u64)
}

/// Boomerang table of a permutation, indexed `[a][b]` over all of the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bct {
    pub table: Vec<Vec<u32>>,
    /// Maximum over `a, b != 0`.
    pub uniformity: u32,
}

pub fn bct(ctx: &FieldCtx, f: &ValueTable) -> Result<Bct> {
    f.check(ctx)?;
    let inv = f.inverse()?;
    let v = f.values();
    let q = ctx.order();
    let table: Vec<Vec<u32>> = (0..q)
        .into_par_iter()
        .map(|a| {
            (0..q)
                .map(|b| {
                    (0..q)
                        .filter(|&x| {
                            let left = inv[ctx.add_idx(v[ctx.add_idx(x, a) as usize], b) as usize];
                            let right = inv[ctx.add_idx(v[x as usize], b) as usize];
                            ctx.sub_idx(left, right) == a
                        })
                        .count() as u32
                })
                .collect()
        })
        .collect();
    let uniformity = table.iter().skip(1).flat_map(|row| row.iter().skip(1)).copied().max().unwrap_or(0);
    Ok(Bct { table, uniformity })
}

/// Boomerang uniformity next to the `(-1)`-differential uniformity restricted
/// to `a, b != 0`. Equality is reported, not assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoomerangCheck {
    pub is_permutation: bool,
    /// Classical differential uniformity is 2.
    pub is_apn: bool,
    pub boomerang_uniformity: u32,
    pub minus_one_uniformity: u32,
    pub equal: bool,
}

pub fn boomerang_cross_check(ctx: &FieldCtx, f: &ValueTable) -> Result<BoomerangCheck> {
    let table = bct(ctx, f)?;
    let ddt = c_uniformity(ctx, f, ctx.one())?;
    let minus_one = ctx.neg_idx(1);
    let mf = scaled_values(ctx, f.values(), minus_one);
    let mut buf = vec![0u32; ctx.order() as usize];
    let mut minus_one_uniformity = 0;
    for a in 1..ctx.order() {
        fill_row(ctx, f.values(), &mf, a, &mut buf);
        minus_one_uniformity = minus_one_uniformity.max(buf[1..].iter().copied().max().unwrap_or(0));
        buf.fill(0);
    }
    Ok(BoomerangCheck {
        is_permutation: true,
        is_apn: ddt == 2,
        boomerang_uniformity: table.uniformity,
        minus_one_uniformity,
        equal: table.uniformity == minus_one_uniformity,
    })
}
