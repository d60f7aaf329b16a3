//! Recursive-descent parser for the function grammar in `docs/func-grammar.md`.

use super::{reduce_exponent, FuncSpec, Term, TermKind};
use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Parses text such as `(X^8 + X + g^54)^19 + X` into a [`FuncSpec`] over `ctx`.
pub fn parse_func(ctx: &FieldCtx, text: &str) -> Result<FuncSpec> {
    let src: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { ctx, src, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(match v {
        Value::Const(0) => FuncSpec::zero(ctx),
        Value::Const(c) => FuncSpec::constant(ctx, ctx.wrap(c))?,
        Value::Func(terms) => FuncSpec { field: ctx.id(), terms },
    })
}

enum Value {
    Const(u32),
    Func(Vec<Term>),
}

struct Parser<'a> {
    ctx: &'a FieldCtx,
    src: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::FuncParse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn sum(&mut self) -> Result<Value> {
        let negate_first = self.eat('-');
        let mut acc = self.product()?;
        if negate_first {
            acc = self.negate(acc);
        }
        loop {
            if self.eat('+') {
                let rhs = self.product()?;
                acc = self.add(acc, rhs);
            } else if self.eat('-') {
                let rhs = self.product()?;
                let rhs = self.negate(rhs);
                acc = self.add(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            acc = self.mul(acc, rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        if self.eat('-') {
            let e = self.exponent()?;
            return match base {
                Value::Const(0) => Err(self.err("negative power of zero")),
                Value::Const(c) => Ok(Value::Const(self.ctx.pow_idx(self.ctx.inv_idx(c), e))),
                Value::Func(_) => Err(self.err("negative exponents apply to constants only")),
            };
        }
        let e = self.exponent()?;
        self.power(base, e)
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.eat('{') {
            let v = self.int_sum()?;
            self.expect('}')?;
            Ok(v)
        } else {
            self.integer()
        }
    }

    fn int_sum(&mut self) -> Result<u64> {
        let mut acc = self.int_product()?;
        loop {
            if self.eat('+') {
                let r = self.int_product()?;
                acc = acc.checked_add(r).ok_or_else(|| self.err("exponent overflow"))?;
            } else if self.eat('-') {
                let r = self.int_product()?;
                acc = acc.checked_sub(r).ok_or_else(|| self.err("negative exponent"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn int_product(&mut self) -> Result<u64> {
        let mut acc = self.int_power()?;
        while self.eat('*') {
            let r = self.int_power()?;
            acc = acc.checked_mul(r).ok_or_else(|| self.err("exponent overflow"))?;
        }
        Ok(acc)
    }

    fn int_power(&mut self) -> Result<u64> {
        let base = if self.eat('(') {
            let v = self.int_sum()?;
            self.expect(')')?;
            v
        } else {
            self.integer()?
        };
        if self.eat('^') {
            let e = self.int_power()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent overflow"))?;
            base.checked_pow(e).ok_or_else(|| self.err("exponent overflow"))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Value> {
        match self.peek() {
            Some('X') | Some('x') => {
                self.pos += 1;
                let kind = TermKind::Monomial { exponent: 1 };
                Ok(Value::Func(vec![Term { coeff: self.ctx.one(), kind }]))
            }
            Some('g') => {
                self.pos += 1;
                Ok(Value::Const(self.ctx.generator().index()))
            }
            Some('T') => self.trace(),
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('[') => {
                self.pos += 1;
                let mut coords = vec![self.integer()?];
                while self.eat(',') {
                    coords.push(self.integer()?);
                }
                self.expect(']')?;
                let coords: Vec<u32> = coords.into_iter().map(|c| c as u32).collect();
                let e = self.ctx.from_coords(&coords).map_err(|_| self.err("invalid coordinate vector"))?;
                Ok(Value::Const(e.index()))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(Value::Const((v % u64::from(self.ctx.characteristic())) as u32))
            }
            _ => Err(self.err("expected X, g, Tr, a number, `[` or `(`")),
        }
    }

    fn trace(&mut self) -> Result<Value> {
        if !(self.eat('T') && self.eat('r')) {
            return Err(self.err("expected `Tr`"));
        }
        let m = if self.eat('_') { self.integer()? } else { 1 };
        let m = u32::try_from(m).map_err(|_| self.err("subfield degree out of range"))?;
        if self.ctx.require_divisor(m).is_err() {
            return Err(self.err("subfield degree does not divide the field degree"));
        }
        self.expect('(')?;
        let inner = self.sum()?;
        self.expect(')')?;
        Ok(match inner {
            Value::Const(c) => Value::Const(self.ctx.rel_trace_idx(c, m)),
            Value::Func(terms) => {
                let inner = FuncSpec { field: self.ctx.id(), terms };
                let kind = TermKind::TracePower { inner, m, exponent: 1 };
                Value::Func(vec![Term { coeff: self.ctx.one(), kind }])
            }
        })
    }

    fn negate(&self, v: Value) -> Value {
        let minus_one = Value::Const(self.ctx.neg_idx(1));
        self.mul(minus_one, v).expect("scaling by a constant always succeeds")
    }

    fn add(&self, a: Value, b: Value) -> Value {
        let ctx = self.ctx;
        match (a, b) {
            (Value::Const(x), Value::Const(y)) => Value::Const(ctx.add_idx(x, y)),
            (Value::Func(mut t), Value::Const(c)) | (Value::Const(c), Value::Func(mut t)) => {
                if c != 0 {
                    t.push(Term { coeff: ctx.wrap(c), kind: TermKind::Constant });
                }
                Value::Func(t)
            }
            (Value::Func(mut t), Value::Func(u)) => {
                t.extend(u);
                Value::Func(t)
            }
        }
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value> {
        let ctx = self.ctx;
        match (a, b) {
            (Value::Const(x), Value::Const(y)) => Ok(Value::Const(ctx.mul_idx(x, y))),
            (Value::Func(mut t), Value::Const(c)) | (Value::Const(c), Value::Func(mut t)) => {
                for term in &mut t {
                    term.coeff = ctx.wrap(ctx.mul_idx(term.coeff.index(), c));
                }
                Ok(Value::Func(t))
            }
            (Value::Func(_), Value::Func(_)) => {
                Err(self.err("products of two non-constant expressions are not supported"))
            }
        }
    }

    fn power(&self, base: Value, e: u64) -> Result<Value> {
        let ctx = self.ctx;
        if e == 1 {
            return Ok(base);
        }
        let mut terms = match base {
            Value::Const(c) => return Ok(Value::Const(ctx.pow_idx(c, e))),
            Value::Func(t) => t,
        };
        if e == 0 {
            return Err(self.err("exponent 0 on a non-constant expression"));
        }
        if terms.len() == 1 && terms[0].coeff.index() == 1 {
            match &mut terms[0].kind {
                TermKind::Monomial { exponent } => {
                    *exponent = reduce_exponent(u128::from(*exponent) * u128::from(e), ctx.order());
                    return Ok(Value::Func(terms));
                }
                TermKind::TracePower { exponent, .. } => {
                    *exponent = exponent.checked_mul(e).ok_or_else(|| self.err("exponent overflow"))?;
                    return Ok(Value::Func(terms));
                }
                _ => {}
            }
        }
        let base = FuncSpec { field: ctx.id(), terms };
        let kind = TermKind::CompositePower { base, exponent: e };
        Ok(Value::Func(vec![Term { coeff: ctx.one(), kind }]))
    }
}
