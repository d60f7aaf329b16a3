//! Exact Walsh spectra of GF(p)-valued functions on GF(p^n).
//!
//! A coefficient `sum_x w^(f(x) - Tr(v x))` is held as the residue counts
//! `N_j = #{x : f(x) - Tr(v x) = j}`. For p = 2 the coefficient is
//! `N_0 - N_1`; in general its squared magnitude is an integer exactly when
//! the cyclic autocorrelations `C_d = sum_j N_j N_{j+d}` agree for all
//! `d != 0`, and then it equals `C_0 - C_1`.
//!
//! Also here: kernels of the linearized maps attached to quadratic forms
//! `Tr(sum a_i x^(p^i + 1))`, whose squared Walsh values are `0` or
//! `p^(n + dim ker)`, and a one-sided predicate for the vanishing of Walsh
//! coefficients of Gold-type pairs `Tr(u x^(2^a+1) + u x^(2^b+1))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalshPoint {
    pub v: u32,
    pub counts: Vec<u64>,
}

impl WalshPoint {
    /// The (real, integer) coefficient for p = 2.
    pub fn coefficient(&self) -> Option<i64> {
        match self.counts.as_slice() {
            [n0, n1] => Some(*n0 as i64 - *n1 as i64),
            _ => None,
        }
    }

    /// `|W(v)|^2` when it is an integer; always the case for p = 2 and p = 3.
    pub fn squared_magnitude(&self) -> Option<i64> {
        let p = self.counts.len();
        let n: Vec<i64> = self.counts.iter().map(|&c| c as i64).collect();
        let corr = |d: usize| (0..p).map(|j| n[j] * n[(j + d) % p]).sum::<i64>();
        let c1 = if p > 1 { corr(1) } else { 0 };
        if (2..p).any(|d| corr(d) != c1) {
            return None;
        }
        Some(corr(0) - c1)
    }
}

fn check_prime_valued(ctx: &FieldCtx, f: &[u32]) -> Result<()> {
    let q = ctx.order() as usize;
    if f.len() != q {
        return Err(Error::LengthMismatch { expected: q, found: f.len() });
    }
    match f.iter().position(|&v| v >= ctx.characteristic()) {
        Some(index) => Err(Error::NotPrimeValued { index }),
        None => Ok(()),
    }
}

fn point_counts(ctx: &FieldCtx, f: &[u32], v: u32) -> WalshPoint {
    let p = ctx.characteristic();
    let mut counts = vec![0u64; p as usize];
    for (x, &fx) in f.iter().enumerate() {
        let t = ctx.trace_idx(ctx.mul_idx(v, x as u32));
        counts[((fx + p - t) % p) as usize] += 1;
    }
    WalshPoint { v, counts }
}

pub fn walsh_point(ctx: &FieldCtx, f: &[u32], v: FieldElem) -> Result<WalshPoint> {
    check_prime_valued(ctx, f)?;
    let v = ctx.owns(v)?;
    Ok(point_counts(ctx, f, v))
}

/// `Tr(v x) = <mask, coords(x)>` over GF(2).
fn trace_mask(ctx: &FieldCtx, v: u32) -> usize {
    (0..ctx.degree()).fold(0usize, |m, i| m | ((ctx.trace_idx(ctx.mul_idx(v, 1 << i)) as usize) << i))
}

/// All `q` points in index order of `v`.
pub fn walsh_spectrum(ctx: &FieldCtx, f: &[u32]) -> Result<Vec<WalshPoint>> {
    check_prime_valued(ctx, f)?;
    let q = ctx.order();
    if ctx.characteristic() != 2 {
        return Ok((0..q).into_par_iter().map(|v| point_counts(ctx, f, v)).collect());
    }
    // Hadamard transform over coordinate vectors, then read W(v) at the
    // coordinate functional that represents x -> Tr(v x).
    let mut h: Vec<i64> = f.iter().map(|&b| if b == 0 { 1 } else { -1 }).collect();
    let mut len = 1;
    while len < h.len() {
        for block in h.chunks_mut(2 * len) {
            let (lo, hi) = block.split_at_mut(len);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        len *= 2;
    }
    let q64 = i64::from(q);
    Ok((0..q)
        .map(|v| {
            let w = h[trace_mask(ctx, v)];
            let n0 = ((q64 + w) / 2) as u64;
            WalshPoint { v, counts: vec![n0, u64::from(q) - n0] }
        })
        .collect())
}

/// Absolute traces of a compiled function, i.e. `x -> Tr(F(x))`.
pub fn trace_of(ctx: &FieldCtx, values: &[u32]) -> Vec<u32> {
    values.iter().map(|&y| ctx.trace_idx(y)).collect()
}

// ----- quadratic forms -----------------------------------------------------

/// `x -> Tr(sum_i a_i x^(p^i + 1))` as a GF(p)-valued table.
pub fn quad_form_table(ctx: &FieldCtx, a: &[FieldElem]) -> Result<Vec<u32>> {
    let a: Vec<u32> = a.iter().map(|&c| ctx.owns(c)).collect::<Result<_>>()?;
    Ok((0..ctx.order())
        .into_par_iter()
        .map(|x| {
            let s = a.iter().enumerate().fold(0, |acc, (i, &ai)| {
                let xi = ctx.frobenius_idx(x, i as u32);
                ctx.add_idx(acc, ctx.mul_idx(ai, ctx.mul_idx(xi, x)))
            });
            ctx.trace_idx(s)
        })
        .collect())
}

/// `L(x) = sum_i (a_i x^(p^i) + (a_i x)^(p^(n-i)))` and its kernel over GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedMap {
    pub coeffs: Vec<u32>,
    /// Kernel basis as element indices.
    pub kernel: Vec<u32>,
    pub ell: u32,
}

impl LinearizedMap {
    pub fn apply(&self, ctx: &FieldCtx, x: u32) -> u32 {
        let n = ctx.degree();
        self.coeffs.iter().enumerate().fold(0, |acc, (i, &ai)| {
            let i = i as u32 % n;
            let t1 = ctx.mul_idx(ai, ctx.frobenius_idx(x, i));
            let t2 = ctx.frobenius_idx(ctx.mul_idx(ai, x), (n - i) % n);
            ctx.add_idx(acc, ctx.add_idx(t1, t2))
        })
    }

    /// Every element of the kernel, `p^ell` of them.
    pub fn kernel_elements(&self, ctx: &FieldCtx) -> Vec<u32> {
        let mut span = vec![0u32];
        for &b in &self.kernel {
            let mut next = Vec::with_capacity(span.len() * ctx.characteristic() as usize);
            for &s in &span {
                let mut cur = s;
                for _ in 0..ctx.characteristic() {
                    next.push(cur);
                    cur = ctx.add_idx(cur, b);
                }
            }
            span = next;
        }
        span
    }
}

/// Null space of an `rows x cols` matrix over GF(p), one basis vector per free column.
fn null_space(mut m: Vec<Vec<u32>>, cols: usize, p: u32) -> Vec<Vec<u32>> {
    let inv = |a: u32| (1..p).find(|&b| a * b % p == 1).expect("nonzero residue");
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let s = inv(m[r][c]);
        for v in m[r].iter_mut() {
            *v = *v * s % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                let pivot_row = m[r].clone();
                for (v, &pv) in m[i].iter_mut().zip(&pivot_row) {
                    *v = (*v + p * p - factor * pv % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[row][free]) % p;
            }
            v
        })
        .collect()
}

/// Builds `L` for coefficients `a_0..a_m` and finds its kernel by elimination
/// on its matrix in the polynomial basis.
pub fn quad_form_kernel(ctx: &FieldCtx, a: &[FieldElem]) -> Result<LinearizedMap> {
    let coeffs: Vec<u32> = a.iter().map(|&c| ctx.owns(c)).collect::<Result<_>>()?;
    let mut map = LinearizedMap { coeffs, kernel: Vec::new(), ell: 0 };
    let n = ctx.degree() as usize;
    let p = ctx.characteristic();
    let basis_idx = |j: usize| p.pow(j as u32);
    let columns: Vec<Vec<u32>> = (0..n).map(|j| ctx.coords_idx(map.apply(ctx, basis_idx(j)))).collect();
    let matrix: Vec<Vec<u32>> = (0..n).map(|row| columns.iter().map(|col| col[row]).collect()).collect();
    map.kernel =
        null_space(matrix, n, p).into_iter().map(|v| ctx.from_coords(&v).map(|e| e.index())).collect::<Result<_>>()?;
    map.ell = map.kernel.len() as u32;
    Ok(map)
}

/// Squared magnitude the quadratic law predicts at `v`: `p^(n + ell)` when
/// `f(z) - Tr(v z)` vanishes on the kernel, else 0. On the kernel that map is
/// additive, so checking the basis suffices.
fn predicted_square(ctx: &FieldCtx, f: &[u32], map: &LinearizedMap, v: u32) -> i64 {
    let p = ctx.characteristic();
    let vanishes = map.kernel.iter().all(|&z| (f[z as usize] + p - ctx.trace_idx(ctx.mul_idx(v, z))).is_multiple_of(p));
    if vanishes {
        i64::from(p).pow(ctx.degree() + map.ell)
    } else {
        0
    }
}

/// Result of checking the two-valued law at every `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadLawSweep {
    pub ell: u32,
    /// Points where the observed square differs from the prediction.
    pub violations: Vec<u32>,
}

/// Whether `|W_f(v)|^2` for `f = Tr(sum a_i x^(p^i+1))` matches the law at `v`.
pub fn quad_walsh_law_check(ctx: &FieldCtx, a: &[FieldElem], v: FieldElem) -> Result<bool> {
    let f = quad_form_table(ctx, a)?;
    let map = quad_form_kernel(ctx, a)?;
    let pt = walsh_point(ctx, &f, v)?;
    Ok(pt.squared_magnitude() == Some(predicted_square(ctx, &f, &map, v.index())))
}

pub fn quad_walsh_law_sweep(ctx: &FieldCtx, a: &[FieldElem]) -> Result<QuadLawSweep> {
    let f = quad_form_table(ctx, a)?;
    let map = quad_form_kernel(ctx, a)?;
    let spectrum = walsh_spectrum(ctx, &f)?;
    let violations = spectrum
        .iter()
        .filter(|pt| pt.squared_magnitude() != Some(predicted_square(ctx, &f, &map, pt.v)))
        .map(|pt| pt.v)
        .collect();
    Ok(QuadLawSweep { ell: map.ell, violations })
}

// ----- Gold-type pairs -------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoldVerdict {
    MustVanish,
    NoClaim,
}

/// Which rule the predicate applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoldRule {
    /// `W_{f_u}(alpha) = W_f(alpha / beta)` with `u = beta^(2^a+1)`, then the
    /// unscaled rule at `alpha / beta`.
    Rescaled,
    /// `alpha / u^(2^-b)` outside `S_{d1} ∩ S_{d2}`.
    TraceSets,
    /// `(L1 ∘ L2)(alpha / u^(2^-b)) != 0`.
    Composition,
    /// No `beta` with `beta^(2^a+1) = u` exists in GF(2^d1).
    NoRoot,
    /// `u = 0`: the function is zero and no rule applies.
    ZeroScale,
}

fn v2(x: u32) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        x.trailing_zeros()
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parameters of the vanishing rules for `f_u(x) = Tr(u x^(2^a+1) + u x^(2^b+1))`
/// over GF(2^k), fixed once per `(a, b, u)`.
#[derive(Clone, Debug)]
pub struct GoldPairPredicate {
    pub k: u32,
    pub a: u32,
    pub b: u32,
    pub d1: u32,
    pub d2: u32,
    pub nu: u32,
    pub rule: GoldRule,
    /// The `beta` used by [`GoldRule::Rescaled`].
    pub beta: Option<u32>,
    /// `u^(2^-b)` for the unscaled-argument rules.
    divisor: u32,
    /// Rules of the unscaled function: trace sets when `v2(k) <= nu`, the
    /// composition otherwise, and the composition at `alpha + 1` in the
    /// exceptional valuation case.
    plain_shifted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldPairAnalysis {
    pub d1: u32,
    pub d2: u32,
    pub nu: u32,
    pub rule: GoldRule,
    pub beta: Option<FieldElem>,
    pub verdict: GoldVerdict,
}

impl GoldPairPredicate {
    pub fn new(ctx: &FieldCtx, a: u32, b: u32, u: FieldElem) -> Result<Self> {
        if ctx.characteristic() != 2 {
            return Err(Error::WrongCharacteristic { expected: 2, found: ctx.characteristic() });
        }
        if a >= b {
            return Err(Error::InvalidArgument(format!("need a < b, got a = {a}, b = {b}")));
        }
        let k = ctx.degree();
        let u = ctx.owns(u)?;
        let d1 = gcd(b - a, k);
        let d2 = gcd(b + a, k);
        if !ctx.in_subfield_idx(u, d1) {
            return Err(Error::NotInSubfield { m: d1 });
        }
        let nu = v2(b - a).max(v2(b + a));
        let vk = v2(k);
        let plain_shifted = v2(b - a) == v2(b + a) && vk >= 1 && v2(b - a) == vk - 1;
        let mut pred =
            GoldPairPredicate { k, a, b, d1, d2, nu, rule: GoldRule::ZeroScale, beta: None, divisor: 1, plain_shifted };
        if u == 0 {
            return Ok(pred);
        }
        let same_valuation = v2(a) == v2(b) && v2(a) < vk;
        if !same_valuation {
            let e = (1u64 << a) + 1;
            let sub = ctx.subfield_indices(d1)?;
            pred.beta = sub.into_iter().find(|&beta| beta != 0 && ctx.pow_idx(beta, e) == u);
            pred.rule = if pred.beta.is_some() { GoldRule::Rescaled } else { GoldRule::NoRoot };
        } else {
            pred.divisor = ctx.frobenius_idx(u, (k - b % k) % k);
            pred.rule = if vk <= nu { GoldRule::TraceSets } else { GoldRule::Composition };
        }
        Ok(pred)
    }

    /// `L_d(x) = sum_{j < k/(2d)} x^(2^(j d))`.
    fn l_map(&self, ctx: &FieldCtx, d: u32, x: u32) -> u32 {
        debug_assert_eq!(self.k % (2 * d), 0);
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.k / (2 * d) {
            acc = ctx.add_idx(acc, y);
            y = ctx.frobenius_idx(y, d);
        }
        acc
    }

    fn composition(&self, ctx: &FieldCtx, x: u32) -> u32 {
        self.l_map(ctx, self.d1, self.l_map(ctx, self.d2, x))
    }

    fn outside_trace_sets(&self, ctx: &FieldCtx, x: u32) -> bool {
        !(ctx.rel_trace_idx(x, self.d1) == 0 && ctx.rel_trace_idx(x, self.d2) == 0)
    }

    /// Vanishing rule for the unscaled pair `Tr(x^(2^a+1) + x^(2^b+1))`.
    fn plain_vanishes(&self, ctx: &FieldCtx, y: u32) -> bool {
        if self.plain_shifted {
            self.composition(ctx, ctx.add_idx(y, 1)) != 0
        } else if v2(self.k) <= self.nu {
            self.outside_trace_sets(ctx, y)
        } else {
            self.composition(ctx, y) != 0
        }
    }

    pub fn verdict(&self, ctx: &FieldCtx, alpha: u32) -> GoldVerdict {
        let vanish = match self.rule {
            GoldRule::ZeroScale | GoldRule::NoRoot => false,
            GoldRule::Rescaled => {
                let beta = self.beta.expect("rescaled rule has a beta");
                self.plain_vanishes(ctx, ctx.mul_idx(alpha, ctx.inv_idx(beta)))
            }
            GoldRule::TraceSets => self.outside_trace_sets(ctx, ctx.mul_idx(alpha, ctx.inv_idx(self.divisor))),
            GoldRule::Composition => self.composition(ctx, ctx.mul_idx(alpha, ctx.inv_idx(self.divisor))) != 0,
        };
        if vanish {
            GoldVerdict::MustVanish
        } else {
            GoldVerdict::NoClaim
        }
    }
}

/// `Tr(u x^(2^a+1) + u x^(2^b+1))` as a GF(2)-valued table.
pub fn gold_pair_table(ctx: &FieldCtx, a: u32, b: u32, u: FieldElem) -> Result<Vec<u32>> {
    let u = ctx.owns(u)?;
    let (ea, eb) = ((1u64 << a) + 1, (1u64 << b) + 1);
    Ok((0..ctx.order())
        .map(|x| ctx.trace_idx(ctx.mul_idx(u, ctx.add_idx(ctx.pow_idx(x, ea), ctx.pow_idx(x, eb)))))
        .collect())
}

/// One-sided vanishing verdict for `W_{f_u}(alpha)`: `MustVanish` promises a
/// zero coefficient, `NoClaim` promises nothing.
pub fn gold_pair_vanishing(ctx: &FieldCtx, a: u32, b: u32, u: FieldElem, alpha: FieldElem) -> Result<GoldPairAnalysis> {
    let pred = GoldPairPredicate::new(ctx, a, b, u)?;
    let alpha = ctx.owns(alpha)?;
    Ok(GoldPairAnalysis {
        d1: pred.d1,
        d2: pred.d2,
        nu: pred.nu,
        rule: pred.rule,
        beta: pred.beta.map(|b| ctx.wrap(b)),
        verdict: pred.verdict(ctx, alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct signed sum for p = 2, independent of the residue counts.
    fn naive_coefficient(ctx: &FieldCtx, f: &[u32], v: u32) -> i64 {
        (0..ctx.order())
            .map(|x| {
                let e = f[x as usize] ^ ctx.trace_idx(ctx.mul_idx(v, x));
                if e == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    #[test]
    fn zero_function() {
        for (p, n) in [(2, 4), (3, 3)] {
            let ctx = FieldCtx::new(p, n, None).unwrap();
            let f = vec![0; ctx.order() as usize];
            let spec = walsh_spectrum(&ctx, &f).unwrap();
            let q = i64::from(ctx.order());
            assert_eq!(spec[0].squared_magnitude(), Some(q * q));
            assert_eq!(spec[0].counts[0], u64::from(ctx.order()));
            assert!(spec[1..].iter().all(|pt| pt.squared_magnitude() == Some(0)));
        }
    }

    #[test]
    fn fast_spectrum_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=10 {
            let ctx = FieldCtx::new(2, n, None).unwrap();
            let f: Vec<u32> = (0..ctx.order()).map(|_| rng.gen_range(0..2)).collect();
            let spec = walsh_spectrum(&ctx, &f).unwrap();
            for pt in &spec {
                assert_eq!(pt.coefficient().unwrap(), naive_coefficient(&ctx, &f, pt.v));
                assert_eq!(pt, &walsh_point(&ctx, &f, ctx.wrap(pt.v)).unwrap());
            }
        }
    }

    #[test]
    fn tr_x3_over_gf8() {
        let ctx = FieldCtx::new(2, 3, None).unwrap();
        let f: Vec<u32> = (0..8).map(|x| ctx.trace_idx(ctx.pow_idx(x, 3))).collect();
        let spec = walsh_spectrum(&ctx, &f).unwrap();
        let mut coeffs: Vec<i64> = spec.iter().map(|p| naive_coefficient(&ctx, &f, p.v)).collect();
        for (pt, &c) in spec.iter().zip(&coeffs) {
            assert_eq!(pt.coefficient(), Some(c));
        }
        // x^3 is a Gold function with a 1-dimensional kernel: values 0 and ±4.
        coeffs.sort_unstable();
        assert!(coeffs.iter().all(|c| [0, 4, -4].contains(c)));
        assert_eq!(coeffs.iter().filter(|&&c| c != 0).count(), 4);
    }

    #[test]
    fn invalid_tables() {
        let ctx = FieldCtx::new(2, 3, None).unwrap();
        assert!(matches!(walsh_spectrum(&ctx, &[0; 7]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(walsh_spectrum(&ctx, &[0, 0, 2, 0, 0, 0, 0, 0]), Err(Error::NotPrimeValued { index: 2 })));
    }

    #[test]
    fn squared_magnitude_p3() {
        let pt = WalshPoint { v: 0, counts: vec![3, 2, 4] };
        assert_eq!(pt.squared_magnitude(), Some(9 + 4 + 16 - 6 - 8 - 12));
    }

    #[test]
    fn kernel_trivial_cases() {
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        let zeros = quad_form_kernel(&ctx, &[ctx.zero(), ctx.zero()]).unwrap();
        assert_eq!(zeros.ell, 6);
        let a0 = quad_form_kernel(&ctx, &[ctx.one()]).unwrap();
        assert_eq!(a0.ell, 6);
    }

    #[test]
    fn kernel_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, n) in [(2, 4), (2, 6), (3, 2), (3, 4), (2, 8)] {
            let ctx = FieldCtx::new(p, n, None).unwrap();
            for _ in 0..10 {
                let a: Vec<FieldElem> = (0..=n / 2).map(|_| ctx.wrap(rng.gen_range(0..ctx.order()))).collect();
                let map = quad_form_kernel(&ctx, &a).unwrap();
                let brute: Vec<u32> = (0..ctx.order()).filter(|&x| map.apply(&ctx, x) == 0).collect();
                let mut listed = map.kernel_elements(&ctx);
                listed.sort_unstable();
                assert_eq!(listed, brute);
                for _ in 0..10 {
                    let (x, y) = (rng.gen_range(0..ctx.order()), rng.gen_range(0..ctx.order()));
                    assert_eq!(map.apply(&ctx, ctx.add_idx(x, y)), ctx.add_idx(map.apply(&ctx, x), map.apply(&ctx, y)));
                }
            }
        }
    }

    #[test]
    fn basis_check_agrees_with_full_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (p, n) in [(2, 6), (3, 4)] {
            let ctx = FieldCtx::new(p, n, None).unwrap();
            for _ in 0..10 {
                let a: Vec<FieldElem> = (0..=n / 2).map(|_| ctx.wrap(rng.gen_range(0..ctx.order()))).collect();
                let f = quad_form_table(&ctx, &a).unwrap();
                let map = quad_form_kernel(&ctx, &a).unwrap();
                let all = map.kernel_elements(&ctx);
                for v in 0..ctx.order() {
                    let full =
                        all.iter().all(|&z| (f[z as usize] + p - ctx.trace_idx(ctx.mul_idx(v, z))).is_multiple_of(p));
                    assert_eq!(predicted_square(&ctx, &f, &map, v) != 0, full);
                }
            }
        }
    }

    #[test]
    fn quadratic_law_examples() {
        let ctx = FieldCtx::new(3, 2, None).unwrap();
        let a = [ctx.one()];
        for v in ctx.elements() {
            assert!(quad_walsh_law_check(&ctx, &a, v).unwrap());
        }
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a: Vec<FieldElem> = (0..4).map(|_| ctx.wrap(rng.gen_range(0..64))).collect();
            assert!(quad_walsh_law_sweep(&ctx, &a).unwrap().violations.is_empty());
        }
        let zero = quad_walsh_law_sweep(&ctx, &[ctx.zero()]).unwrap();
        assert_eq!(zero.ell, 6);
        assert!(zero.violations.is_empty());
    }

    #[test]
    fn gold_pair_m3_vanishes_off_trace_zero() {
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        let f = gold_pair_table(&ctx, 2, 4, ctx.one()).unwrap();
        let spec = walsh_spectrum(&ctx, &f).unwrap();
        for alpha in ctx.elements() {
            let an = gold_pair_vanishing(&ctx, 2, 4, ctx.one(), alpha).unwrap();
            assert_eq!((an.d1, an.d2), (2, 6));
            if ctx.rel_trace(alpha, 3).unwrap() != ctx.zero() {
                assert_eq!(an.verdict, GoldVerdict::MustVanish, "alpha = {}", ctx.render(alpha));
            }
            if an.verdict == GoldVerdict::MustVanish {
                assert_eq!(spec[alpha.index() as usize].coefficient(), Some(0));
            }
        }
        let zero = gold_pair_vanishing(&ctx, 2, 4, ctx.one(), ctx.zero()).unwrap();
        assert_eq!(zero.verdict, GoldVerdict::NoClaim);
    }

    /// Every `alpha` the predicate claims, for `(a, b, u)`, whose coefficient is nonzero.
    fn unsound_points(ctx: &FieldCtx, a: u32, b: u32, u: FieldElem) -> Vec<u32> {
        let f = gold_pair_table(ctx, a, b, u).unwrap();
        let pred = GoldPairPredicate::new(ctx, a, b, u).unwrap();
        walsh_spectrum(ctx, &f)
            .unwrap()
            .into_iter()
            .filter(|pt| pred.verdict(ctx, pt.v) == GoldVerdict::MustVanish && pt.coefficient() != Some(0))
            .map(|pt| pt.v)
            .collect()
    }

    #[test]
    fn unscaled_pairs_are_sound() {
        for k in 1..=9 {
            let ctx = FieldCtx::new(2, k, None).unwrap();
            for b in 1..=k {
                for a in 0..b {
                    assert!(unsound_points(&ctx, a, b, ctx.one()).is_empty(), "k={k} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn rescaled_pairs_are_sound() {
        // the first rule: u = beta^(2^a+1) and W_{f_u}(alpha) = W_f(alpha / beta)
        for k in 1..=8 {
            let ctx = FieldCtx::new(2, k, None).unwrap();
            for b in 1..=k {
                for a in 0..b {
                    for u in ctx.subfield_indices(gcd(b - a, k)).unwrap().into_iter().skip(1).take(8) {
                        let u = ctx.wrap(u);
                        if GoldPairPredicate::new(&ctx, a, b, u).unwrap().rule == GoldRule::Rescaled {
                            assert!(unsound_points(&ctx, a, b, u).is_empty(), "k={k} a={a} b={b} u={}", u.index());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn same_valuation_rule_fails_for_nontrivial_scale() {
        // Over GF(16) with u in GF(4) \ GF(2), f_u = Tr(x^3) because
        // Tr(u x^9) = Tr(u^2 x^3). S_4 = {0}, so the trace-set rule claims every
        // nonzero coefficient vanishes, yet Tr(x^3) has three nonzero ones.
        let ctx = FieldCtx::new(2, 4, None).unwrap();
        let omega = ctx.subfield_elements(2).unwrap().into_iter().find(|&w| w != ctx.zero() && w != ctx.one()).unwrap();
        let pred = GoldPairPredicate::new(&ctx, 1, 3, omega).unwrap();
        assert_eq!(pred.rule, GoldRule::TraceSets);
        let tr_x3: Vec<u32> = (0..16).map(|x| ctx.trace_idx(ctx.pow_idx(x, 3))).collect();
        assert_eq!(gold_pair_table(&ctx, 1, 3, omega).unwrap(), tr_x3);
        assert_eq!(unsound_points(&ctx, 1, 3, omega).len(), 3);
    }

    #[test]
    fn gold_pair_shifted_case_k8() {
        // v2(b - a) = v2(b + a) = v2(k) - 1 needs a = 0 mod 4 here
        let ctx = FieldCtx::new(2, 8, None).unwrap();
        let pred = GoldPairPredicate::new(&ctx, 0, 4, ctx.one()).unwrap();
        assert!(pred.plain_shifted);
        assert!(!GoldPairPredicate::new(&ctx, 1, 5, ctx.one()).unwrap().plain_shifted);
        let f = gold_pair_table(&ctx, 0, 4, ctx.one()).unwrap();
        let spec = walsh_spectrum(&ctx, &f).unwrap();
        let mut claimed = 0;
        for pt in &spec {
            if pred.verdict(&ctx, pt.v) == GoldVerdict::MustVanish {
                claimed += 1;
                assert_eq!(pt.coefficient(), Some(0));
            }
        }
        assert!(claimed > 0);
    }

    #[test]
    fn gold_pair_argument_errors() {
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        assert!(GoldPairPredicate::new(&ctx, 3, 3, ctx.one()).is_err());
        // d1 = gcd(2, 6) = 2, and g is not in GF(4)
        assert_eq!(GoldPairPredicate::new(&ctx, 2, 4, ctx.generator()).unwrap_err(), Error::NotInSubfield { m: 2 });
        let zero = GoldPairPredicate::new(&ctx, 2, 4, ctx.zero()).unwrap();
        assert_eq!(zero.rule, GoldRule::ZeroScale);
    }
}
