//! Table-driven arithmetic in GF(p^n).
//!
//! An element is stored as its dense coordinate index: the coordinates
//! `c_0, .., c_{n-1}` in the polynomial basis `1, X, .., X^{n-1}` are packed
//! as `c_0 + c_1 p + .. + c_{n-1} p^{n-1}`. For `p = 2` this is the usual
//! bitmask and addition is XOR; for odd `p` addition goes through a Zech
//! logarithm table. Multiplication always uses exp/log tables over a
//! verified primitive element.
//!
//! [`FieldElem`] carries the identity of its field and the checked methods
//! on [`FieldCtx`] reject mixed operands. The `*_idx` methods work on bare
//! indices for the sweep loops and trust the caller.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::poly;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of one constructed [`FieldCtx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldId(u64);

/// One element of a field, tagged with the field it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: FieldId,
    idx: u32,
}

impl FieldElem {
    /// Dense coordinate index of the element.
    pub fn index(self) -> u32 {
        self.idx
    }

    pub fn field(self) -> FieldId {
        self.field
    }
}

/// Immutable description of GF(p^n) together with its arithmetic tables.
#[derive(Clone)]
pub struct FieldCtx {
    id: FieldId,
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[k] = g^k`, stored twice over so that `exp[i + j]` needs no reduction.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`. Empty for p = 2.
    zech: Vec<u32>,
    trace: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &poly::render(&self.modulus))
            .field("generator", &self.generator)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
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

/// Arithmetic on dense indices that does not need tables, used while the
/// tables are being built.
struct Builder {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl Builder {
    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = vec![0; self.n as usize];
        for c in d.iter_mut() {
            *c = x % self.p;
            x /= self.p;
        }
        d
    }

    fn pack(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let n = self.n as usize;
        if self.p == 2 {
            let mut prod: u64 = 0;
            for i in 0..n {
                if (b >> i) & 1 == 1 {
                    prod ^= u64::from(a) << i;
                }
            }
            let m: u64 = self.modulus.iter().rev().fold(0, |acc, &c| (acc << 1) | u64::from(c));
            for d in (n..2 * n).rev() {
                if (prod >> d) & 1 == 1 {
                    prod ^= m << (d - n);
                }
            }
            return prod as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let p = u64::from(self.p);
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        for d in (n..2 * n).rev() {
            let c = prod[d] % p;
            if c == 0 {
                continue;
            }
            for (k, &mc) in self.modulus.iter().enumerate().take(n + 1) {
                let idx = d - n + k;
                prod[idx] = (prod[idx] + p * p - c * u64::from(mc) % p) % p;
            }
        }
        let low: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.pack(&low)
    }

    fn pow(&self, x: u32, mut e: u64) -> u32 {
        let (mut r, mut base) = (1u32, x);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }
}

impl FieldCtx {
    /// Builds GF(p^n). Without an explicit modulus the lexicographically least
    /// monic irreducible of degree `n` is used, comparing coefficients from the
    /// constant term upward.
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_ORDER);
        let q = q.ok_or(Error::OrderTooLarge { p, n })? as u32;

        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == n as usize + 1 && m[n as usize] == 1 && m.iter().all(|&c| c < p);
                if !ok {
                    return Err(Error::BadModulus { degree: n, p });
                }
                if poly::find_factor(m, p).is_some() {
                    return Err(Error::ReducibleModulus(poly::render(m)));
                }
                m.to_vec()
            }
            None => least_irreducible(p, n),
        };

        let b = Builder { p, n, modulus: modulus.clone() };
        let order = u64::from(q - 1);
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&x| b.pow(x, order) == 1 && factors.iter().all(|&r| b.pow(x, order / r) != 1))
            .ok_or(Error::NoPrimitiveElement)?;

        let q1 = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * q1];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for k in 0..q1 {
            if log[cur as usize] != NO_LOG {
                return Err(Error::NoPrimitiveElement);
            }
            exp[k] = cur;
            exp[k + q1] = cur;
            log[cur as usize] = k as u32;
            cur = b.mul(cur, generator);
        }
        if cur != 1 {
            return Err(Error::NoPrimitiveElement);
        }
        log[0] = 0;

        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..q1)
                .map(|k| {
                    let s = b.add(exp[k], 1);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        };

        let mut ctx = FieldCtx {
            id: FieldId(NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed)),
            p,
            n,
            q,
            modulus,
            generator,
            exp,
            log,
            zech,
            trace: Vec::new(),
        };
        let trace: Vec<u8> = (0..q)
            .map(|x| {
                let t = ctx.frobenius_sum(x, 1, n);
                debug_assert!(t < p, "absolute trace left the prime field");
                t as u8
            })
            .collect();
        ctx.trace = trace;
        Ok(ctx)
    }

    /// Parses `p,n[,c_0,..,c_n]` and builds the field it names.
    pub fn from_description(line: &str) -> Result<Self> {
        let bad = || Error::FieldDescription(line.to_string());
        let nums: Vec<u32> = line
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match nums.as_slice() {
            [p, n] => FieldCtx::new(*p, *n, None),
            [p, n, rest @ ..] if rest.len() == *n as usize + 1 => FieldCtx::new(*p, *n, Some(rest)),
            _ => Err(bad()),
        }
    }

    /// `p,n,c_0,..,c_n` with the modulus coefficients low to high.
    pub fn description(&self) -> String {
        let mut parts = vec![self.p.to_string(), self.n.to_string()];
        parts.extend(self.modulus.iter().map(|c| c.to_string()));
        parts.join(",")
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly::render(&self.modulus)
    }

    // ----- element construction -------------------------------------------

    pub fn elem(&self, idx: u32) -> Result<FieldElem> {
        if idx >= self.q {
            return Err(Error::IndexOutOfRange { index: idx.into(), order: self.q });
        }
        Ok(self.wrap(idx))
    }

    /// Wraps an index already known to be in range.
    pub fn wrap(&self, idx: u32) -> FieldElem {
        debug_assert!(idx < self.q);
        FieldElem { field: self.id, idx }
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// The primitive element `g` used by the tables: the least index of
    /// multiplicative order `q - 1`.
    pub fn generator(&self) -> FieldElem {
        self.wrap(self.generator)
    }

    /// `g^k` for any integer `k`.
    pub fn gen_pow(&self, k: i64) -> FieldElem {
        let q1 = i64::from(self.q - 1);
        self.wrap(self.exp[k.rem_euclid(q1) as usize])
    }

    /// Discrete logarithm to base `g` of a nonzero element.
    pub fn log(&self, x: FieldElem) -> Result<Option<u32>> {
        self.check(x)?;
        Ok(self.log_idx(x.idx))
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        if coords.len() > self.n as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::ElemParse(format!("{coords:?}")));
        }
        let idx = coords.iter().rev().fold(0u32, |acc, &c| acc * self.p + c);
        Ok(self.wrap(idx))
    }

    pub fn coords(&self, x: FieldElem) -> Vec<u32> {
        self.coords_idx(x.idx)
    }

    pub fn coords_idx(&self, mut x: u32) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    /// Whether `x` is `c * 1` for a prime-field constant `c`.
    pub fn is_prime_field(&self, x: u32) -> bool {
        x < self.p
    }

    /// `g^k` form, or `0` / `1`.
    pub fn render(&self, x: FieldElem) -> String {
        self.render_idx(x.idx)
    }

    pub fn render_idx(&self, x: u32) -> String {
        match x {
            0 => "0".into(),
            1 => "1".into(),
            _ => format!("g^{}", self.log[x as usize]),
        }
    }

    /// The element as a polynomial in the class of `X` modulo the modulus.
    pub fn poly_string(&self, x: FieldElem) -> String {
        crate::poly::render(&self.coords_idx(x.idx))
    }

    /// Elements of multiplicative order `q - 1`, in index order.
    pub fn primitive_elements(&self) -> Vec<FieldElem> {
        let q1 = self.q - 1;
        let gcd = |mut a: u32, mut b: u32| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        (1..self.q).filter(|&x| gcd(self.log[x as usize], q1) == 1).map(|x| self.wrap(x)).collect()
    }

    /// Parses `g`, `g^k`, `g^-k`, a prime-field integer, or a coordinate
    /// vector `[c_0,c_1,..]`.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::ElemParse(text.to_string());
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coords: Vec<u32> =
                inner.split(',').map(|c| c.parse::<u32>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            return self.from_coords(&coords).map_err(|_| bad());
        }
        if s == "g" {
            return Ok(self.generator());
        }
        if let Some(k) = s.strip_prefix("g^") {
            let k = k.trim_start_matches('{').trim_end_matches('}');
            let k: i64 = k.parse().map_err(|_| bad())?;
            return Ok(self.gen_pow(k));
        }
        let v: u64 = s.parse().map_err(|_| bad())?;
        Ok(self.wrap((v % u64::from(self.p)) as u32))
    }

    fn check(&self, x: FieldElem) -> Result<()> {
        if x.field == self.id {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Confirms that an element was produced by this field.
    pub fn owns(&self, x: FieldElem) -> Result<u32> {
        self.check(x).map(|_| x.idx)
    }

    // ----- checked arithmetic ---------------------------------------------

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add_idx(a.idx, b.idx)))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.sub_idx(a.idx, b.idx)))
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        Ok(self.wrap(self.neg_idx(a.idx)))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_idx(a.idx, b.idx)))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        if a.idx == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.wrap(self.inv_idx(a.idx)))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> Result<FieldElem> {
        self.check(a)?;
        Ok(self.wrap(self.pow_idx(a.idx, e)))
    }

    /// `x^(p^k)`.
    pub fn frobenius(&self, a: FieldElem, k: u32) -> Result<FieldElem> {
        self.check(a)?;
        Ok(self.wrap(self.frobenius_idx(a.idx, k)))
    }

    /// Absolute trace, returned as its prime-field value in `[0, p)`.
    pub fn abs_trace(&self, x: FieldElem) -> Result<u32> {
        self.check(x)?;
        Ok(self.trace_idx(x.idx))
    }

    /// Relative trace onto GF(p^m): `sum_{i < n/m} x^(p^(m i))`.
    pub fn rel_trace(&self, x: FieldElem, m: u32) -> Result<FieldElem> {
        self.check(x)?;
        self.require_divisor(m)?;
        Ok(self.wrap(self.rel_trace_idx(x.idx, m)))
    }

    pub fn in_subfield(&self, x: FieldElem, m: u32) -> Result<bool> {
        self.check(x)?;
        self.require_divisor(m)?;
        Ok(self.in_subfield_idx(x.idx, m))
    }

    /// The `p^m` elements of GF(p^m) inside this field, in index order.
    pub fn subfield_elements(&self, m: u32) -> Result<Vec<FieldElem>> {
        Ok(self.subfield_indices(m)?.into_iter().map(|i| self.wrap(i)).collect())
    }

    pub fn subfield_indices(&self, m: u32) -> Result<Vec<u32>> {
        self.require_divisor(m)?;
        let q1 = self.q - 1;
        let sub_order = self.p.pow(m) - 1;
        let step = q1 / sub_order;
        let mut out: Vec<u32> =
            std::iter::once(0).chain((0..sub_order).map(|k| self.exp[(k * step) as usize])).collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn require_divisor(&self, m: u32) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) {
            Err(Error::NotADivisor { m, n: self.n })
        } else {
            Ok(())
        }
    }

    // ----- unchecked index arithmetic -------------------------------------

    #[inline]
    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let (la, lb) = (self.log[a as usize], self.log[b as usize]);
        let k = if lb >= la { lb - la } else { lb + self.q - 1 - la };
        match self.zech[k as usize] {
            NO_LOG => 0,
            z => self.exp[(la + z) as usize],
        }
    }

    #[inline]
    pub fn neg_idx(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        self.exp[(self.log[a as usize] + (self.q - 1) / 2) as usize]
    }

    #[inline]
    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    #[inline]
    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Inverse of a nonzero element; returns 0 for 0.
    #[inline]
    pub fn inv_idx(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        self.exp[(self.q - 1 - self.log[a as usize]) as usize]
    }

    /// `a^e` with `0^0 = 1`.
    #[inline]
    pub fn pow_idx(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return u32::from(e == 0);
        }
        let q1 = u64::from(self.q - 1);
        let k = u64::from(self.log[a as usize]) * (e % q1) % q1;
        self.exp[k as usize]
    }

    #[inline]
    pub fn frobenius_idx(&self, a: u32, k: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let q1 = u64::from(self.q - 1);
        let e = (0..k % self.n).fold(1u64, |acc, _| acc * u64::from(self.p) % q1);
        self.pow_idx(a, e)
    }

    pub fn log_idx(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    #[inline]
    pub fn trace_idx(&self, a: u32) -> u32 {
        u32::from(self.trace[a as usize])
    }

    /// Absolute traces of all elements, indexed by element.
    pub fn trace_table(&self) -> &[u8] {
        &self.trace
    }

    /// `sum_{i < terms} x^(p^(step i))`.
    fn frobenius_sum(&self, x: u32, step: u32, terms: u32) -> u32 {
        if x == 0 {
            return 0;
        }
        let q1 = u64::from(self.q - 1);
        let mult = (0..step).fold(1u64, |acc, _| acc * u64::from(self.p) % q1);
        let mut l = u64::from(self.log[x as usize]);
        let mut acc = 0;
        for _ in 0..terms {
            acc = self.add_idx(acc, self.exp[l as usize]);
            l = l * mult % q1;
        }
        acc
    }

    pub fn rel_trace_idx(&self, x: u32, m: u32) -> u32 {
        self.frobenius_sum(x, m, self.n / m)
    }

    pub fn in_subfield_idx(&self, x: u32, m: u32) -> bool {
        self.frobenius_idx(x, m) == x
    }

    #[cfg(test)]
    pub(crate) fn corrupt_exp_entry(&mut self, k: usize, value: u32) {
        let q1 = (self.q - 1) as usize;
        self.exp[k % q1] = value;
        self.exp[k % q1 + q1] = value;
    }
}

fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for t in 0..count {
        // c_0 is the most significant digit of t, so t walks the candidates in
        // lexicographic order of (c_0, c_1, ..).
        let mut f = vec![0u32; n as usize + 1];
        let mut rest = t;
        for i in (0..n as usize).rev() {
            f[i] = (rest % u64::from(p)) as u32;
            rest /= u64::from(p);
        }
        f[n as usize] = 1;
        if n > 1 && f[0] == 0 {
            continue;
        }
        if poly::find_factor(&f, p).is_none() {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
