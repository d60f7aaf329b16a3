//! Root counts of `X^3 + X + a` over GF(2^n).
//!
//! The count is decided by a trichotomy: one root iff `Tr(1/a + 1) = 1`,
//! three roots iff `p_n(a) = 0`, none otherwise, where `p_1 = p_2 = X` and
//! `p_k = p_{k-1} + X^(2^(k-3)) p_{k-2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// Which branch of the trichotomy decided the count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicCriterion {
    TraceOne,
    RecursionZero,
    Otherwise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicVerdict {
    pub root_count: usize,
    pub criterion: CubicCriterion,
    /// Roots in index order.
    pub roots: Vec<FieldElem>,
}

/// `p_k(x)` by the two-term recurrence.
pub fn p_n_eval(ctx: &FieldCtx, k: u32, x: FieldElem) -> Result<FieldElem> {
    let x = ctx.owns(x)?;
    Ok(ctx.wrap(p_n_idx(ctx, k, x)))
}

pub(crate) fn p_n_idx(ctx: &FieldCtx, k: u32, x: u32) -> u32 {
    let (mut prev, mut cur) = (x, x);
    // x^(2^(j-3)) for j = 3, 4, ..
    let mut frob = x;
    for _ in 3..=k {
        let next = ctx.add_idx(cur, ctx.mul_idx(frob, prev));
        prev = cur;
        cur = next;
        frob = ctx.mul_idx(frob, frob);
    }
    cur
}

/// All roots of `X^3 + X + a` by direct search.
pub fn cubic_roots(ctx: &FieldCtx, a: FieldElem) -> Result<Vec<FieldElem>> {
    let a = ctx.owns(a)?;
    Ok((0..ctx.order())
        .filter(|&x| ctx.add_idx(ctx.add_idx(ctx.pow_idx(x, 3), x), a) == 0)
        .map(|x| ctx.wrap(x))
        .collect())
}

pub fn classify_cubic(ctx: &FieldCtx, a: FieldElem) -> Result<CubicVerdict> {
    if ctx.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, found: ctx.characteristic() });
    }
    let ai = ctx.owns(a)?;
    if ai == 0 {
        return Err(Error::ZeroCubicParameter);
    }
    let (criterion, expected) = if ctx.trace_idx(ctx.add_idx(ctx.inv_idx(ai), 1)) == 1 {
        (CubicCriterion::TraceOne, 1)
    } else if p_n_idx(ctx, ctx.degree(), ai) == 0 {
        (CubicCriterion::RecursionZero, 3)
    } else {
        (CubicCriterion::Otherwise, 0)
    };
    let roots = cubic_roots(ctx, a)?;
    debug_assert_eq!(roots.len(), expected, "cubic criterion disagrees with root search for {}", ctx.render(a));
    Ok(CubicVerdict { root_count: roots.len(), criterion, roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_seeds() {
        let f = FieldCtx::new(2, 5, None).unwrap();
        for x in f.elements() {
            assert_eq!(p_n_eval(&f, 1, x).unwrap(), x);
            assert_eq!(p_n_eval(&f, 2, x).unwrap(), x);
            let want = f.add(x, f.mul(x, x).unwrap()).unwrap();
            assert_eq!(p_n_eval(&f, 3, x).unwrap(), want);
            // p_4 = p_3 + x^2 p_2
            let want4 = f.add(want, f.mul(f.pow(x, 2).unwrap(), x).unwrap()).unwrap();
            assert_eq!(p_n_eval(&f, 4, x).unwrap(), want4);
        }
    }

    #[test]
    fn gf2_and_gf4_with_a_one() {
        for n in [1, 2] {
            let f = FieldCtx::new(2, n, None).unwrap();
            let v = classify_cubic(&f, f.one()).unwrap();
            assert_eq!(v.root_count, 0);
            assert_eq!(v.criterion, CubicCriterion::Otherwise);
        }
    }

    #[test]
    fn gf16_trace_branch_has_one_root() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        let mut hits = 0;
        for a in f.elements().skip(1) {
            let t = f.abs_trace(f.add(f.inv(a).unwrap(), f.one()).unwrap()).unwrap();
            let v = classify_cubic(&f, a).unwrap();
            if t == 1 {
                hits += 1;
                assert_eq!(v.root_count, 1);
                assert_eq!(v.criterion, CubicCriterion::TraceOne);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn rejects_zero_and_odd_characteristic() {
        let f = FieldCtx::new(2, 3, None).unwrap();
        assert_eq!(classify_cubic(&f, f.zero()), Err(Error::ZeroCubicParameter));
        let g = FieldCtx::new(3, 2, None).unwrap();
        assert!(matches!(classify_cubic(&g, g.one()), Err(Error::WrongCharacteristic { .. })));
    }

    #[test]
    fn trichotomy_small_fields() {
        for n in 1..=8 {
            let f = FieldCtx::new(2, n, None).unwrap();
            // fibre sizes of x -> x^3 + x give the root count of X^3 + X + a
            let mut fibre = vec![0usize; f.order() as usize];
            for x in 0..f.order() {
                fibre[f.add_idx(f.pow_idx(x, 3), x) as usize] += 1;
            }
            for a in f.elements().skip(1) {
                let v = classify_cubic(&f, a).unwrap();
                assert_eq!(v.root_count, fibre[a.index() as usize]);
                assert_eq!(v.root_count == 3, p_n_eval(&f, n, a).unwrap() == f.zero());
            }
        }
    }
}
