//! Dense polynomials over a prime field, used only while constructing a field.

/// Coefficients low-degree first, reduced into `[0, p)`.
pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut f: Poly) -> Poly {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    f
}

pub(crate) fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut base, mut e) = (1u64, u64::from(a), p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        e >>= 1;
    }
    r as u32
}

/// Remainder of `f` modulo a nonzero divisor.
pub(crate) fn rem(f: &[u32], divisor: &[u32], p: u32) -> Poly {
    let dd = degree(divisor).expect("division by the zero polynomial");
    let lead_inv = u64::from(inv_mod(divisor[dd], p));
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    let p64 = u64::from(p);
    let mut top = r.iter().rposition(|&c| c % p64 != 0);
    while let Some(t) = top {
        if t < dd {
            break;
        }
        let factor = (r[t] % p64) * lead_inv % p64;
        let shift = t - dd;
        for (i, &dc) in divisor.iter().enumerate().take(dd + 1) {
            let sub = factor * u64::from(dc) % p64;
            r[shift + i] = (r[shift + i] + p64 - sub) % p64;
        }
        top = r.iter().rposition(|&c| c % p64 != 0);
    }
    trim(r.into_iter().map(|c| (c % p64) as u32).collect())
}

/// Returns a monic proper factor of `f` if one exists, by trial division
/// against every monic polynomial of degree at most `deg(f) / 2`.
pub(crate) fn find_factor(f: &[u32], p: u32) -> Option<Poly> {
    let d = degree(f)?;
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for low in 0..count {
            let mut g = vec![0u32; k + 1];
            let mut rest = low;
            for c in g.iter_mut().take(k) {
                *c = (rest % u64::from(p)) as u32;
                rest /= u64::from(p);
            }
            g[k] = 1;
            let r = rem(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return Some(g);
            }
        }
    }
    None
}

pub(crate) fn render(f: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remainder_over_gf2() {
        // X^3 + X^2 + X + 1 = (X + 1)^3
        assert_eq!(rem(&[1, 1, 1, 1], &[1, 1], 2), vec![0]);
        assert_eq!(rem(&[1, 1, 0, 1], &[1, 1], 2), vec![1]);
    }

    #[test]
    fn factor_search() {
        assert_eq!(find_factor(&[1, 1, 1, 1], 2), Some(vec![1, 1]));
        assert_eq!(find_factor(&[1, 1, 0, 1], 2), None);
        // X^2 + 1 over GF(3) is irreducible, X^2 + 2 = (X+1)(X+2) is not.
        assert_eq!(find_factor(&[1, 0, 1], 3), None);
        assert!(find_factor(&[2, 0, 1], 3).is_some());
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&[1, 1, 0, 1]), "X^3 + X + 1");
        assert_eq!(render(&[2, 0, 1]), "X^2 + 2");
    }
}
