//! Integer-valued comparison counts for top-down MergeSort.
//!
//! `B(n)` is the fewest key comparisons MergeSort can make on `n` keys and
//! `W(n)` the most. Each is available through more than one route so the
//! routes can be checked against each other:
//!
//! | quantity | routes |
//! |---|---|
//! | `B(n)` | [`b_recurrence`] (reference), [`b_zigzag`], [`b_alt`], [`digit_sum`] |
//! | `W(n)` | [`w_closed`], [`w_sum`] |
//! | per-level best case | [`level_comps`] (closed form), [`level_comps_direct`] |
//!
//! Formula evaluators run in exact [`Dyadic`] arithmetic and refuse to round:
//! a fractional residue is reported as [`Error::NonIntegral`].

use crate::dyadic::{ceil_lg, floor_lg, scaled_zigzag, Dyadic};
use crate::error::{domain, Error, Result};
use crate::fractal;

fn positive(n: u64, op: &'static str) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroArgument { op })
    } else {
        Ok(())
    }
}

fn to_count(op: &'static str, value: Dyadic) -> Result<u128> {
    match value.to_integer() {
        Some(v) if v >= 0 => Ok(v as u128),
        _ => Err(Error::NonIntegral { op, value }),
    }
}

fn as_i128(v: u128) -> Result<i128> {
    i128::try_from(v).map_err(|_| Error::Overflow)
}

/// `B(n)` from `B(1) = 0`, `B(n) = ⌊n/2⌋ + B(⌊n/2⌋) + B(⌈n/2⌉)`.
///
/// Only `⌊n/2^k⌋` and `⌊n/2^k⌋ + 1` are ever reached at depth `k`, so the
/// memo is two entries per level, filled from the bottom up.
pub fn b_recurrence(n: u64) -> Result<u128> {
    positive(n, "b_recurrence")?;
    let top = floor_lg(n)?;
    let n = u128::from(n);
    // (q, B(q), B(q + 1)) at the deepest level, where q = 1.
    let (mut q, mut b_q, mut b_q1) = (1u128, 0u128, 1u128);
    for k in (0..top).rev() {
        let lookup = |m: u128| -> u128 {
            if m == q {
                b_q
            } else {
                debug_assert_eq!(m, q + 1);
                b_q1
            }
        };
        let step = |m: u128| -> u128 {
            if m == 1 {
                0
            } else {
                m / 2 + lookup(m / 2) + lookup(m - m / 2)
            }
        };
        let next_q = n >> k;
        let (b0, b1) = (step(next_q), step(next_q + 1));
        q = next_q;
        b_q = b0;
        b_q1 = b1;
    }
    Ok(b_q)
}

/// `B(n) = (n/2)(⌊lg n⌋ + 1) − Σ_{k=0}^{⌊lg n⌋} 2^k·Zigzag(n/2^{k+1})`.
pub fn b_zigzag(n: u64) -> Result<u128> {
    positive(n, "b_zigzag")?;
    let top = floor_lg(n)?;
    let half_n = Dyadic::from(n).div_pow2(1)?;
    let mut total = half_n.checked_mul_int(i128::from(top) + 1)?;
    for k in 0..=top {
        let term = Dyadic::from(n).div_pow2(k + 1)?.zigzag().mul_pow2(k)?;
        total = total.checked_sub(&term)?;
    }
    to_count("b_zigzag", total)
}

/// `B(n) = n⌈lg n⌉/2 − ½·Σ_{k=1}^{⌈lg n⌉} 2^k·Zigzag(n/2^k)`.
pub fn b_alt(n: u64) -> Result<u128> {
    positive(n, "b_alt")?;
    let h = ceil_lg(n)?;
    let mut sum = Dyadic::ZERO;
    for k in 1..=h {
        let term = Dyadic::from(n).div_pow2(k)?.zigzag().mul_pow2(k)?;
        sum = sum.checked_add(&term)?;
    }
    let total = Dyadic::from(n)
        .checked_mul_int(i128::from(h))?
        .checked_sub(&sum)?
        .div_pow2(1)?;
    to_count("b_alt", total)
}

/// `W(n) = n⌈lg n⌉ − 2^⌈lg n⌉ + 1`.
pub fn w_closed(n: u64) -> Result<u128> {
    positive(n, "w_closed")?;
    let h = ceil_lg(n)?;
    Ok(u128::from(n) * u128::from(h) + 1 - (1u128 << h))
}

/// `W(n) = Σ_{i=1}^{n} ⌈lg i⌉`, summed term by term.
pub fn w_sum(n: u64) -> Result<u128> {
    positive(n, "w_sum")?;
    let mut total = 0u128;
    for i in 1..=n {
        total += u128::from(ceil_lg(i)?);
    }
    Ok(total)
}

/// Prefix table of [`w_sum`]: entry `n` is `Σ_{i=1}^{n} ⌈lg i⌉` (entry 0 is 0).
pub fn w_sum_table(max_n: u64) -> Result<Vec<u128>> {
    let mut table = Vec::with_capacity(max_n as usize + 1);
    table.push(0u128);
    let mut total = 0u128;
    for i in 1..=max_n {
        total += u128::from(ceil_lg(i)?);
        table.push(total);
    }
    Ok(table)
}

/// Best-case comparisons made by all merges at recursion level `k`:
/// `n/2 − 2^k·Zigzag(n/2^{k+1})`.
pub fn level_comps(n: u64, k: u32) -> Result<u128> {
    positive(n, "level_comps")?;
    let top = floor_lg(n)?;
    if k > top {
        return Err(domain(
            "level_comps",
            format!("level {k} exceeds floor_lg({n}) = {top}"),
        ));
    }
    let half_n = Dyadic::from(n).div_pow2(1)?;
    let term = Dyadic::from(n).div_pow2(k + 1)?.zigzag().mul_pow2(k)?;
    to_count("level_comps", half_n.checked_sub(&term)?)
}

/// `Σ_{i=0}^{2^k−1} ⌊(n+i)/2^{k+1}⌋`, summed term by term.
pub fn level_comps_direct(n: u64, k: u32) -> Result<u128> {
    positive(n, "level_comps_direct")?;
    if k >= 63 {
        return Err(Error::Overflow);
    }
    let width = 1u128 << k;
    let den = width << 1;
    Ok((0..width).map(|i| (u128::from(n) + i) / den).sum())
}

/// Both sides of `Σ_{i=m}^{2m−1}⌊(n+i)/2m⌋ − Σ_{i=0}^{m−1}⌊(n+i)/2m⌋ = 2m·Zigzag(n/2m)`.
///
/// The left side is summed directly; the right side is evaluated exactly as
/// `min(n mod 2m, 2m − n mod 2m)`.
pub fn identity_theorem_2_2(n: u64, m: u64) -> Result<(i128, Dyadic)> {
    positive(m, "identity_theorem_2_2")?;
    let (n, m) = (u128::from(n), u128::from(m));
    let den = 2 * m;
    let upper: u128 = (m..den).map(|i| (n + i) / den).sum();
    let lower: u128 = (0..m).map(|i| (n + i) / den).sum();
    let lhs = as_i128(upper)? - as_i128(lower)?;
    let rhs = Dyadic::from_int(as_i128(scaled_zigzag(n, den)?)?);
    Ok((lhs, rhs))
}

/// `Σ_{i=0}^{m−1}⌊(n+i)/m⌋`, summed directly. Always equals `n`.
pub fn identity_appendix_b(n: u64, m: u64) -> Result<u128> {
    positive(m, "identity_appendix_b")?;
    let (n, m) = (u128::from(n), u128::from(m));
    Ok((0..m).map(|i| (n + i) / m).sum())
}

/// `2B(n) − W(n)`.
pub fn diff_2b_w(n: u64) -> Result<i128> {
    positive(n, "diff_2b_w")?;
    let b = as_i128(b_recurrence(n)?)?;
    let w = as_i128(w_closed(n)?)?;
    Ok(2 * b - w)
}

/// Total number of 1-bits over the binary representations of `1..n`.
pub fn digit_sum(n: u64) -> Result<u128> {
    positive(n, "digit_sum")?;
    Ok((1..n).map(|i| u128::from(i.count_ones())).sum())
}

/// Prefix table of [`digit_sum`]: entry `n` is the 1-bit count over `1..n`
/// (entries 0 and 1 are 0).
pub fn digit_sum_table(max_n: u64) -> Vec<u128> {
    let mut table = Vec::with_capacity(max_n as usize + 1);
    table.push(0u128);
    let mut total = 0u128;
    for n in 1..=max_n {
        table.push(total);
        total += u128::from(n.count_ones());
    }
    table
}

/// Values `(2^{k+1} + (−1)^k)/3` for `k = 0..=max_k`, where `2B − W` hits its
/// lower bound `(n − 1)/2`. The expression is an integer for every `k`.
pub fn lower_bound_witnesses(max_k: u32) -> Vec<u64> {
    (0..=max_k.min(62))
        .filter_map(|k| {
            let p = 1i128 << (k + 1);
            let v = if k % 2 == 0 { p + 1 } else { p - 1 };
            (v % 3 == 0).then_some((v / 3) as u64)
        })
        .collect()
}

/// One row of the comparison-count table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisRow {
    pub n: u64,
    pub best: u128,
    pub worst: u128,
    pub fractal_at_n: Dyadic,
    pub two_b_minus_w: i128,
    pub digit_sum: u128,
}

impl AnalysisRow {
    /// Checks the cross-field relations every row must satisfy.
    pub fn is_consistent(&self) -> bool {
        let (Ok(b), Ok(w)) = (as_i128(self.best), as_i128(self.worst)) else {
            return false;
        };
        let residual = Dyadic::from_int(self.n as i128 - 1)
            .checked_sub(&self.fractal_at_n)
            .ok();
        self.two_b_minus_w == 2 * b - w
            && self.digit_sum == self.best
            && self.best <= self.worst
            && residual == Some(Dyadic::from_int(self.two_b_minus_w))
    }
}

/// `(n, B, W, F(n), 2B − W, A(n,2))` for one `n`.
pub fn analyze(n: u64) -> Result<AnalysisRow> {
    positive(n, "analyze")?;
    let best = b_recurrence(n)?;
    let worst = w_closed(n)?;
    Ok(AnalysisRow {
        n,
        best,
        worst,
        fractal_at_n: fractal::big_f(Dyadic::from(n))?,
        two_b_minus_w: diff_2b_w(n)?,
        digit_sum: digit_sum(n)?,
    })
}
