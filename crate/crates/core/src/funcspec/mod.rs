//! Symbolic functions GF(p^n) -> GF(p^n) and their compiled value tables.

mod parse;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, FieldId};

pub use parse::parse_func;

/// Shape of one additive term; the term's value is `coeff * kind(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    /// The constant 1.
    Constant,
    /// `X^e` with `1 <= e <= q - 1`.
    Monomial { exponent: u64 },
    /// `Tr_m^n(inner(X))^e`.
    TracePower { inner: FuncSpec, m: u32, exponent: u64 },
    /// `base(X)^d` with the written exponent kept as is.
    CompositePower { base: FuncSpec, exponent: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: FieldElem,
    pub kind: TermKind,
}

/// A sum of terms over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncSpec {
    field: FieldId,
    terms: Vec<Term>,
}

/// Reduces a monomial exponent into `[1, q - 1]` without changing the value
/// of `X^e` anywhere, including at 0.
fn reduce_exponent(e: u128, q: u32) -> u64 {
    debug_assert!(e > 0);
    let q1 = u128::from(q - 1);
    ((e - 1) % q1 + 1) as u64
}

impl FuncSpec {
    pub fn zero(ctx: &FieldCtx) -> Self {
        FuncSpec { field: ctx.id(), terms: Vec::new() }
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 1).expect("own element")
    }

    pub fn constant(ctx: &FieldCtx, value: FieldElem) -> Result<Self> {
        ctx.owns(value)?;
        Ok(FuncSpec { field: ctx.id(), terms: vec![Term { coeff: value, kind: TermKind::Constant }] })
    }

    /// `coeff * X^e`; `e = 0` becomes the constant `coeff`.
    pub fn monomial(ctx: &FieldCtx, coeff: FieldElem, exponent: u64) -> Result<Self> {
        ctx.owns(coeff)?;
        let kind = if exponent == 0 {
            TermKind::Constant
        } else {
            TermKind::Monomial { exponent: reduce_exponent(exponent.into(), ctx.order()) }
        };
        Ok(FuncSpec { field: ctx.id(), terms: vec![Term { coeff, kind }] })
    }

    /// `base(X)^d`. `d = 0` is rejected since `0^0` is left undefined.
    pub fn composite_power(ctx: &FieldCtx, base: FuncSpec, exponent: u64) -> Result<Self> {
        base.check(ctx)?;
        if exponent == 0 {
            return Err(Error::ZeroExponent);
        }
        let kind = TermKind::CompositePower { base, exponent };
        Ok(FuncSpec { field: ctx.id(), terms: vec![Term { coeff: ctx.one(), kind }] })
    }

    /// `Tr_m^n(inner(X))^e`.
    pub fn trace_power(ctx: &FieldCtx, inner: FuncSpec, m: u32, exponent: u64) -> Result<Self> {
        inner.check(ctx)?;
        ctx.require_divisor(m)?;
        if exponent == 0 {
            return Err(Error::ZeroExponent);
        }
        let kind = TermKind::TracePower { inner, m, exponent };
        Ok(FuncSpec { field: ctx.id(), terms: vec![Term { coeff: ctx.one(), kind }] })
    }

    pub fn plus(mut self, other: FuncSpec) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        self.terms.extend(other.terms);
        Ok(self)
    }

    /// Multiplies every term coefficient by `c`.
    pub fn scaled(mut self, ctx: &FieldCtx, c: FieldElem) -> Result<Self> {
        self.check(ctx)?;
        ctx.owns(c)?;
        for t in &mut self.terms {
            t.coeff = ctx.mul(t.coeff, c)?;
        }
        Ok(self)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    fn check(&self, ctx: &FieldCtx) -> Result<()> {
        if self.field == ctx.id() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> Result<FieldElem> {
        self.check(ctx)?;
        let x = ctx.owns(x)?;
        Ok(ctx.wrap(self.eval_idx(ctx, x)))
    }

    /// Evaluation on a bare index. The caller guarantees the spec belongs to `ctx`.
    pub fn eval_idx(&self, ctx: &FieldCtx, x: u32) -> u32 {
        self.terms.iter().fold(0, |acc, t| {
            let v = match &t.kind {
                TermKind::Constant => 1,
                TermKind::Monomial { exponent } => ctx.pow_idx(x, *exponent),
                TermKind::TracePower { inner, m, exponent } => {
                    let y = ctx.rel_trace_idx(inner.eval_idx(ctx, x), *m);
                    ctx.pow_idx(y, *exponent)
                }
                TermKind::CompositePower { base, exponent } => ctx.pow_idx(base.eval_idx(ctx, x), *exponent),
            };
            ctx.add_idx(acc, ctx.mul_idx(t.coeff.index(), v))
        })
    }

    pub fn compile(&self, ctx: &FieldCtx) -> Result<ValueTable> {
        self.check(ctx)?;
        let values = (0..ctx.order()).into_par_iter().map(|x| self.eval_idx(ctx, x)).collect();
        Ok(ValueTable { field: ctx.id(), values })
    }

    /// Text form accepted back by [`parse_func`].
    pub fn render(&self, ctx: &FieldCtx) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|t| t.coeff.index() != 0)
            .map(|t| {
                let c = ctx.render(t.coeff);
                let body = match &t.kind {
                    TermKind::Constant => return c,
                    TermKind::Monomial { exponent: 1 } => "X".to_string(),
                    TermKind::Monomial { exponent } => format!("X^{exponent}"),
                    TermKind::TracePower { inner, m, exponent } => {
                        let tr = format!("Tr_{m}({})", inner.render(ctx));
                        if *exponent == 1 {
                            tr
                        } else {
                            format!("{tr}^{exponent}")
                        }
                    }
                    TermKind::CompositePower { base, exponent } => format!("({})^{exponent}", base.render(ctx)),
                };
                if t.coeff.index() == 1 {
                    body
                } else {
                    format!("{c}*{body}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Outcome of a bijectivity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bijectivity {
    Permutation,
    /// Two distinct inputs with the same image.
    Collision {
        first: u32,
        second: u32,
    },
}

impl Bijectivity {
    pub fn is_permutation(self) -> bool {
        self == Bijectivity::Permutation
    }
}

/// `values[x] = F(x)` for every element index `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    field: FieldId,
    values: Vec<u32>,
}

impl ValueTable {
    pub fn from_values(ctx: &FieldCtx, values: Vec<u32>) -> Result<Self> {
        let q = ctx.order() as usize;
        if values.len() != q {
            return Err(Error::LengthMismatch { expected: q, found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= ctx.order()) {
            return Err(Error::IndexOutOfRange { index: bad.into(), order: ctx.order() });
        }
        Ok(ValueTable { field: ctx.id(), values })
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check(&self, ctx: &FieldCtx) -> Result<()> {
        if self.field == ctx.id() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn bijectivity(&self) -> Bijectivity {
        let mut first = vec![u32::MAX; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            let slot = &mut first[y as usize];
            if *slot != u32::MAX {
                return Bijectivity::Collision { first: *slot, second: x as u32 };
            }
            *slot = x as u32;
        }
        Bijectivity::Permutation
    }

    pub fn is_permutation(&self) -> bool {
        self.bijectivity().is_permutation()
    }

    /// Inverse table of a permutation.
    pub fn inverse(&self) -> Result<Vec<u32>> {
        if let Bijectivity::Collision { first, second } = self.bijectivity() {
            return Err(Error::NotAPermutation { first, second });
        }
        let mut inv = vec![0u32; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(inv)
    }

    /// The table as GF(p)-values in `[0, p)`, failing if some value lies
    /// outside the prime field.
    pub fn to_prime_valued(&self, ctx: &FieldCtx) -> Result<Vec<u32>> {
        self.check(ctx)?;
        match self.values.iter().position(|&v| !ctx.is_prime_field(v)) {
            Some(index) => Err(Error::NotPrimeValued { index }),
            None => Ok(self.values.clone()),
        }
    }
}
