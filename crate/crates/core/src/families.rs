//! Five permutation families built on `B(X) = X^(p^m) ± X + δ`:
//!
//! | id      | field       | F                                                  |
//! |---------|-------------|----------------------------------------------------|
//! | `zh31`  | GF(2^(2m))  | `B^(2^(2m-2) + 2^(m-2) + 1) + X`                    |
//! | `zh21`  | GF(2^(2m))  | `B^(3·2^(2m-2) + 2^(m-2)) + X`, `m ≢ 0 (mod 3)`     |
//! | `wbz31` | GF(2^(2m))  | `B^(3·2^(m-2) + 2^(2m-2)) + X`, `m ≢ 0 (mod 3)`     |
//! | `lwc8`  | GF(2^(3m))  | `B^(2^(2m+1) + 2^m) + B^(2^(2m) + 2^(m+1)) + X`     |
//! | `lwc10` | GF(3^(2m))  | `B^(3^m + 4) + B^5 + X` with `B = X^(3^m) - X + δ`  |
//!
//! Each constructor also evaluates the conditions on `δ` under which the
//! polynomial is known to permute its field. Instances whose conditions fail
//! are still built, so sweeps can look at every `δ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cubic::p_n_idx;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::funcspec::FuncSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    Zh31,
    Zh21,
    Wbz31,
    Lwc8,
    Lwc10,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [FamilyId::Zh31, FamilyId::Zh21, FamilyId::Wbz31, FamilyId::Lwc8, FamilyId::Lwc10];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Zh31 => "zh31",
            FamilyId::Zh21 => "zh21",
            FamilyId::Wbz31 => "wbz31",
            FamilyId::Lwc8 => "lwc8",
            FamilyId::Lwc10 => "lwc10",
        }
    }

    pub fn characteristic(self) -> u32 {
        if self == FamilyId::Lwc10 {
            3
        } else {
            2
        }
    }

    /// Extension degree of the field the family lives on.
    pub fn degree(self, m: u32) -> u32 {
        if self == FamilyId::Lwc8 {
            3 * m
        } else {
            2 * m
        }
    }

    fn check_m(self, m: u32) -> Result<()> {
        let min = match self {
            FamilyId::Zh31 | FamilyId::Zh21 | FamilyId::Wbz31 => 2,
            FamilyId::Lwc8 | FamilyId::Lwc10 => 1,
        };
        if m < min {
            return Err(Error::FamilyParameter(format!("{self} needs m >= {min}, got m = {m}")));
        }
        if matches!(self, FamilyId::Zh21 | FamilyId::Wbz31) && m.is_multiple_of(3) {
            return Err(Error::FamilyParameter(format!("{self} needs m not divisible by 3, got m = {m}")));
        }
        Ok(())
    }

    /// The exponents applied to `B(X)`, one per power term.
    pub fn exponents(self, m: u32) -> Result<Vec<u64>> {
        self.check_m(m)?;
        let t = |k: u32| 1u64 << k;
        Ok(match self {
            FamilyId::Zh31 => vec![t(2 * m - 2) + t(m - 2) + 1],
            FamilyId::Zh21 => vec![3 * t(2 * m - 2) + t(m - 2)],
            FamilyId::Wbz31 => vec![3 * t(m - 2) + t(2 * m - 2)],
            FamilyId::Lwc8 => vec![t(2 * m + 1) + t(m), t(2 * m) + t(m + 1)],
            FamilyId::Lwc10 => vec![3u64.pow(m) + 4, 5],
        })
    }

    /// The family's field with the default modulus.
    pub fn field(self, m: u32) -> Result<FieldCtx> {
        self.check_m(m)?;
        FieldCtx::new(self.characteristic(), self.degree(m), None)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::FamilyParameter(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precondition {
    pub name: String,
    pub holds: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family: FamilyId,
    pub m: u32,
    pub delta: FieldElem,
    pub spec: FuncSpec,
    pub preconditions: Vec<Precondition>,
    /// Whether the conditions that make `spec` a permutation are met.
    pub qualifies: bool,
}

impl FamilyInstance {
    pub fn precondition(&self, name: &str) -> Option<bool> {
        self.preconditions.iter().find(|p| p.name == name).map(|p| p.holds)
    }
}

pub fn build(ctx: &FieldCtx, family: FamilyId, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    match family {
        FamilyId::Zh31 => build_zh31(ctx, m, delta),
        FamilyId::Zh21 => build_zh21(ctx, m, delta),
        FamilyId::Wbz31 => build_wbz31(ctx, m, delta),
        FamilyId::Lwc8 => build_lwc8(ctx, m, delta),
        FamilyId::Lwc10 => build_lwc10(ctx, m, delta),
    }
}

fn check_shape(ctx: &FieldCtx, family: FamilyId, m: u32, delta: FieldElem) -> Result<u32> {
    family.check_m(m)?;
    let (p, n) = (family.characteristic(), family.degree(m));
    if ctx.characteristic() != p || ctx.degree() != n {
        return Err(Error::FamilyParameter(format!(
            "{family} with m = {m} lives on GF({p}^{n}), not GF({}^{})",
            ctx.characteristic(),
            ctx.degree()
        )));
    }
    ctx.owns(delta)
}

/// `X^(p^m) + s X + δ` with `s = 1` in characteristic 2 and `s = -1` otherwise.
fn base(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FuncSpec> {
    let sign = ctx.neg(ctx.one())?;
    let frob = FuncSpec::monomial(ctx, ctx.one(), u64::from(ctx.characteristic()).pow(m))?;
    frob.plus(FuncSpec::monomial(ctx, sign, 1)?)?.plus(FuncSpec::constant(ctx, delta)?)
}

fn assemble(ctx: &FieldCtx, family: FamilyId, m: u32, delta: FieldElem) -> Result<FuncSpec> {
    let b = base(ctx, m, delta)?;
    let mut spec = FuncSpec::identity(ctx);
    for e in family.exponents(m)? {
        spec = FuncSpec::composite_power(ctx, b.clone(), e)?.plus(spec)?;
    }
    Ok(spec)
}

fn cond(name: &str, holds: bool, evidence: String) -> Precondition {
    Precondition { name: name.to_string(), holds, evidence }
}

/// `δ + δ^(2^m)`, i.e. `Tr_m^(2m)(δ)`.
fn conj_sum(ctx: &FieldCtx, m: u32, d: u32) -> u32 {
    ctx.rel_trace_idx(d, m)
}

pub fn build_zh31(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    let d = check_shape(ctx, FamilyId::Zh31, m, delta)?;
    let in_sub = ctx.in_subfield_idx(d, m);
    let tr = ctx.trace_idx(d);
    let trace_ok = tr == m % 2;
    let s = conj_sum(ctx, m, d);
    let pm = if s == 0 { 0 } else { p_n_idx(ctx, m, ctx.inv_idx(s)) };
    let preconditions = vec![
        cond("delta_in_subfield", in_sub, format!("delta {} GF(2^{m})", if in_sub { "in" } else { "not in" })),
        cond("trace_matches", trace_ok, format!("Tr(delta) = {tr}, Tr_1^{m}(1) = {}", m % 2)),
        cond(
            "p_m_nonzero",
            !in_sub && pm != 0,
            if in_sub {
                "delta + delta^(2^m) = 0".to_string()
            } else {
                format!("p_{m}((delta + delta^(2^m))^-1) = {}", ctx.render_idx(pm))
            },
        ),
    ];
    Ok(FamilyInstance {
        family: FamilyId::Zh31,
        m,
        delta,
        spec: assemble(ctx, FamilyId::Zh31, m, delta)?,
        qualifies: in_sub || (trace_ok && pm != 0),
        preconditions,
    })
}

fn build_unconditional(ctx: &FieldCtx, family: FamilyId, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    check_shape(ctx, family, m, delta)?;
    Ok(FamilyInstance {
        family,
        m,
        delta,
        spec: assemble(ctx, family, m, delta)?,
        preconditions: vec![cond("m_not_divisible_by_3", true, format!("m = {m}"))],
        qualifies: true,
    })
}

pub fn build_zh21(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    build_unconditional(ctx, FamilyId::Zh21, m, delta)
}

pub fn build_wbz31(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    build_unconditional(ctx, FamilyId::Wbz31, m, delta)
}

pub fn build_lwc8(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    let d = check_shape(ctx, FamilyId::Lwc8, m, delta)?;
    let t = ctx.rel_trace_idx(d, m);
    Ok(FamilyInstance {
        family: FamilyId::Lwc8,
        m,
        delta,
        spec: assemble(ctx, FamilyId::Lwc8, m, delta)?,
        preconditions: vec![cond(
            "relative_trace_zero",
            t == 0,
            format!("Tr_{m}^{}(delta) = {}", 3 * m, ctx.render_idx(t)),
        )],
        qualifies: t == 0,
    })
}

/// `1 - Tr_m^(2m)(δ)^4`, an element of GF(3^m).
pub fn lwc10_discriminant(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FieldElem> {
    let d = check_shape(ctx, FamilyId::Lwc10, m, delta)?;
    let t4 = ctx.pow_idx(ctx.rel_trace_idx(d, m), 4);
    Ok(ctx.wrap(ctx.sub_idx(1, t4)))
}

/// Square in GF(3^m), zero included, by Euler's criterion.
fn is_subfield_square(ctx: &FieldCtx, m: u32, x: u32) -> bool {
    x == 0 || ctx.pow_idx(x, (3u64.pow(m) - 1) / 2) == 1
}

pub fn build_lwc10(ctx: &FieldCtx, m: u32, delta: FieldElem) -> Result<FamilyInstance> {
    let disc = lwc10_discriminant(ctx, m, delta)?.index();
    let square = is_subfield_square(ctx, m, disc);
    let shown = ctx.render_idx(disc);
    Ok(FamilyInstance {
        family: FamilyId::Lwc10,
        m,
        delta,
        spec: assemble(ctx, FamilyId::Lwc10, m, delta)?,
        preconditions: vec![
            cond("square_in_subfield", square, format!("1 - Tr_{m}^{}(delta)^4 = {shown}", 2 * m)),
            cond("nonzero_square_in_subfield", square && disc != 0, format!("1 - Tr_{m}^{}(delta)^4 = {shown}", 2 * m)),
        ],
        qualifies: square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_fixtures() {
        // expanded by hand
        assert_eq!(FamilyId::Zh31.exponents(2).unwrap(), [6]);
        assert_eq!(FamilyId::Zh31.exponents(3).unwrap(), [19]);
        assert_eq!(FamilyId::Zh31.exponents(4).unwrap(), [69]);
        assert_eq!(FamilyId::Zh21.exponents(2).unwrap(), [13]);
        assert_eq!(FamilyId::Zh21.exponents(4).unwrap(), [196]);
        assert_eq!(FamilyId::Wbz31.exponents(2).unwrap(), [7]);
        assert_eq!(FamilyId::Wbz31.exponents(5).unwrap(), [280]);
        assert_eq!(FamilyId::Lwc8.exponents(3).unwrap(), [136, 80]);
        assert_eq!(FamilyId::Lwc8.exponents(2).unwrap(), [36, 24]);
        assert_eq!(FamilyId::Lwc10.exponents(2).unwrap(), [13, 5]);
        assert_eq!(FamilyId::Lwc10.exponents(1).unwrap(), [7, 5]);
    }

    #[test]
    fn parameter_errors() {
        assert!(FamilyId::Zh31.exponents(1).is_err());
        assert!(FamilyId::Zh21.exponents(3).is_err());
        assert!(FamilyId::Wbz31.exponents(6).is_err());
        assert!(FamilyId::Lwc8.exponents(0).is_err());
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        assert!(build_zh31(&ctx, 2, ctx.one()).is_err());
        assert!(build_lwc10(&ctx, 3, ctx.one()).is_err());
        assert!(build_zh21(&ctx, 3, ctx.one()).is_err());
        assert_eq!("WBZ31".parse::<FamilyId>().unwrap(), FamilyId::Wbz31);
        assert!("zh99".parse::<FamilyId>().is_err());
    }

    #[test]
    fn base_matches_direct_evaluation() {
        let ctx = FieldCtx::new(3, 4, None).unwrap();
        let delta = ctx.gen_pow(10);
        let inst = build_lwc10(&ctx, 2, delta).unwrap();
        let vals = inst.spec.compile(&ctx).unwrap();
        for x in 0..ctx.order() {
            let b = ctx.add_idx(ctx.sub_idx(ctx.pow_idx(x, 9), x), delta.index());
            let want = ctx.add_idx(ctx.add_idx(ctx.pow_idx(b, 13), ctx.pow_idx(b, 5)), x);
            assert_eq!(vals.values()[x as usize], want);
        }
    }

    /// The ZH31 power form agrees with its expansion into relative traces:
    /// T(y) = y + y^(2^m), e = 2^(m-1), f = 2^(m-2),
    /// F = T(X^(e+1) + X^(2^(2m-1)+1)) + δ T(X^e) + (δ^(f+1) + δ^(2^(2m-2)+1)) T(X^f)
    ///   + T(δ^f) T(X^(f+1) + X^(2^(2m-2)+1)) + δ^(f + 2^(2m-2)) T(X) + X + δ^(2^(2m-2)+f+1).
    #[test]
    fn zh31_trace_expansion() {
        for m in 2..=4 {
            let ctx = FieldCtx::new(2, 2 * m, None).unwrap();
            let t = |y: u32| ctx.rel_trace_idx(y, m);
            let pw = |y: u32, e: u64| ctx.pow_idx(y, e);
            let (e, f, hi_e, hi_f) = (1u64 << (m - 1), 1u64 << (m - 2), 1u64 << (2 * m - 1), 1u64 << (2 * m - 2));
            for d in ctx.subfield_indices(m).unwrap().into_iter().chain([ctx.generator().index()]) {
                let vals = build_zh31(&ctx, m, ctx.wrap(d)).unwrap().spec.compile(&ctx).unwrap();
                for x in 0..ctx.order() {
                    let terms = [
                        t(ctx.add_idx(pw(x, e + 1), pw(x, hi_e + 1))),
                        ctx.mul_idx(d, t(pw(x, e))),
                        ctx.mul_idx(ctx.add_idx(pw(d, f + 1), pw(d, hi_f + 1)), t(pw(x, f))),
                        ctx.mul_idx(t(pw(d, f)), t(ctx.add_idx(pw(x, f + 1), pw(x, hi_f + 1)))),
                        ctx.mul_idx(pw(d, f + hi_f), t(x)),
                        x,
                        pw(d, hi_f + f + 1),
                    ];
                    let want = terms.iter().fold(0, |acc, &v| ctx.add_idx(acc, v));
                    assert_eq!(vals.values()[x as usize], want, "m={m} d={d} x={x}");
                }
            }
        }
    }

    #[test]
    fn zh31_preconditions() {
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        let mut off_subfield_pass = 0;
        for delta in ctx.elements() {
            let inst = build_zh31(&ctx, 3, delta).unwrap();
            let in_sub = ctx.in_subfield(delta, 3).unwrap();
            assert_eq!(inst.precondition("delta_in_subfield"), Some(in_sub));
            if inst.qualifies {
                assert!(inst.spec.compile(&ctx).unwrap().is_permutation());
                if !in_sub {
                    off_subfield_pass += 1;
                    assert_eq!(ctx.abs_trace(delta).unwrap(), 1);
                }
            }
        }
        assert!(off_subfield_pass > 0);
    }

    #[test]
    fn small_families_permute() {
        for (family, m) in [(FamilyId::Zh21, 2), (FamilyId::Wbz31, 2), (FamilyId::Lwc8, 2), (FamilyId::Lwc10, 1)] {
            let ctx = family.field(m).unwrap();
            let mut built = 0;
            for delta in ctx.elements() {
                let inst = build(&ctx, family, m, delta).unwrap();
                if inst.qualifies {
                    built += 1;
                    assert!(
                        inst.spec.compile(&ctx).unwrap().is_permutation(),
                        "{family} m={m} delta={}",
                        ctx.render(delta)
                    );
                }
            }
            assert!(built > 0);
        }
    }

    #[test]
    fn lwc8_trace_condition() {
        let ctx = FamilyId::Lwc8.field(2).unwrap();
        let passing = ctx.elements().filter(|&d| build_lwc8(&ctx, 2, d).unwrap().qualifies).count();
        assert_eq!(passing, 16);
    }

    #[test]
    fn lwc10_squares() {
        let ctx = FamilyId::Lwc10.field(1).unwrap();
        for delta in ctx.elements() {
            let inst = build_lwc10(&ctx, 1, delta).unwrap();
            if ctx.rel_trace(delta, 1).unwrap() == ctx.zero() {
                assert_eq!(inst.precondition("nonzero_square_in_subfield"), Some(true));
            }
            // squares of GF(3) are 0 and 1
            let disc = lwc10_discriminant(&ctx, 1, delta).unwrap().index();
            assert_eq!(inst.qualifies, disc != 2);
        }
    }
}
