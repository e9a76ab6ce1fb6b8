//! The Blancmange family behind `B(n)`.
//!
//! * `F(x) = Σ_{k=1}^{⌊lg x⌋} 2^k·Zigzag(x/2^k)` for `x ≥ 1` ([`big_f`]).
//! * `f̃_k(x) = Σ_{i<k} 2^{−i}·Zigzag(2^i·x)` ([`f_tilde_partial`]).
//! * `F̃(x) = lim f̃_k(x)`, the Blancmange (Takagi) function. At a dyadic
//!   `p/2^e` every term past `i = e` vanishes, so [`takagi_dyadic`] is exact;
//!   [`takagi_approx`] encloses it at any other rational.
//! * `F̆(x) = 2^{⌊lg x⌋}·F̃(x/2^{⌊lg x⌋})` ([`breve_f`]), which agrees with
//!   `F` at the integers.
//!
//! The bridges [`takagi_from_b`], [`b_from_takagi`] and [`takagi_at_floor_lg`]
//! move between `F̃` at `n/2^k` and `B(n)`.

use crate::counts::b_recurrence;
use crate::dyadic::{floor_lg, Dyadic};
use crate::error::{domain, Error, Result};

/// A dyadic value with a guaranteed bound on its distance from the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxValue {
    pub value: Dyadic,
    /// `|true − value| ≤ error_bound`; zero for exact results.
    pub error_bound: Dyadic,
}

impl ApproxValue {
    pub fn exact(value: Dyadic) -> ApproxValue {
        ApproxValue {
            value,
            error_bound: Dyadic::ZERO,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.error_bound.is_zero()
    }

    pub fn lower(&self) -> Result<Dyadic> {
        self.value.checked_sub(&self.error_bound)
    }

    pub fn upper(&self) -> Result<Dyadic> {
        self.value.checked_add(&self.error_bound)
    }
}

/// `⌊lg x⌋` for a dyadic `x ≥ 1`.
fn floor_lg_dyadic(op: &'static str, x: &Dyadic) -> Result<u32> {
    if *x < Dyadic::ONE {
        return Err(domain(op, format!("argument {x} is below 1")));
    }
    let whole = u64::try_from(x.floor()).map_err(|_| Error::Overflow)?;
    floor_lg(whole)
}

/// `F(x) = Σ_{k=1}^{⌊lg x⌋} 2^k·Zigzag(x/2^k)`, for `x ≥ 1`.
pub fn big_f(x: Dyadic) -> Result<Dyadic> {
    let top = floor_lg_dyadic("big_f", &x)?;
    let mut total = Dyadic::ZERO;
    for k in 1..=top {
        let term = x.div_pow2(k)?.zigzag().mul_pow2(k)?;
        total = total.checked_add(&term)?;
    }
    Ok(total)
}

/// `f̃_k(x) = Σ_{i=0}^{k−1} 2^{−i}·Zigzag(2^i·x)`.
pub fn f_tilde_partial(k: u32, x: Dyadic) -> Result<Dyadic> {
    // 2^i·x is an integer once i reaches the exponent of x.
    let live = k.min(x.exponent());
    let mut total = Dyadic::ZERO;
    for i in 0..live {
        let term = x.mul_pow2(i)?.zigzag().div_pow2(i)?;
        total = total.checked_add(&term)?;
    }
    Ok(total)
}

/// Exact `F̃(x)` at a dyadic `x = p/2^e`: `f̃_e(x − ⌊x⌋)`.
pub fn takagi_dyadic(x: Dyadic) -> Result<Dyadic> {
    let frac = x.frac();
    f_tilde_partial(x.exponent(), frac)
}

/// `F̃(p/q)` for any rational, truncated after `terms` summands.
///
/// The partial sum is formed exactly over the denominator `q·2^{K−1}` and
/// then floored onto the grid `2^{−(K+2)}`. The result satisfies
/// `value ≤ F̃(p/q) ≤ value + 2^{−K}`, because the omitted tail equals
/// `2^{−K}·F̃(2^K·p/q) ≤ (2/3)·2^{−K}` and the flooring loses less than
/// `2^{−(K+2)}`. A power-of-two `q` takes the exact path instead.
pub fn takagi_approx(p: i64, q: u64, terms: u32) -> Result<ApproxValue> {
    const OP: &str = "takagi_approx";
    if q == 0 {
        return Err(Error::ZeroArgument { op: OP });
    }
    if terms == 0 {
        return Err(domain(OP, "at least one term is required"));
    }
    if q.is_power_of_two() {
        let x = Dyadic::try_new(i128::from(p), q.trailing_zeros())?;
        return Ok(ApproxValue::exact(takagi_dyadic(x)?));
    }
    let q = u128::from(q);
    let grid = terms.checked_add(2).ok_or(Error::Overflow)?;
    // r_i = 2^i·p mod q; the i-th term is min(r_i, q − r_i) / (q·2^i).
    let mut r = i128::from(p).rem_euclid(q as i128) as u128;
    let mut scaled = 0u128; // Σ min(r_i, q − r_i)·2^{K−1−i}
    for _ in 0..terms {
        scaled = scaled
            .checked_mul(2)
            .and_then(|s| s.checked_add(r.min(q - r)))
            .ok_or(Error::Overflow)?;
        r = (2 * r) % q;
    }
    // value = ⌊8·scaled / q⌋ / 2^{K+2}
    let floored = scaled.checked_mul(8).ok_or(Error::Overflow)? / q;
    let value = Dyadic::try_new(i128::try_from(floored).map_err(|_| Error::Overflow)?, grid)?;
    Ok(ApproxValue {
        value,
        error_bound: Dyadic::try_new(1, terms)?,
    })
}

/// `(n·k − 2B(n)) / 2^k` with no check on `n ≤ 2^k`.
///
/// Inside the domain this is `F̃(n/2^k)`; for `n > 2^k` it falls strictly
/// below `F̃(n/2^k)`.
pub fn bridge_expression(n: u64, k: u32) -> Result<Dyadic> {
    let b = i128::try_from(b_recurrence(n)?).map_err(|_| Error::Overflow)?;
    let nk = i128::from(n)
        .checked_mul(i128::from(k))
        .ok_or(Error::Overflow)?;
    let numerator = b
        .checked_mul(2)
        .and_then(|twice_b| nk.checked_sub(twice_b))
        .ok_or(Error::Overflow)?;
    Dyadic::try_new(numerator, k)
}

fn check_bridge_domain(op: &'static str, n: u64, k: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroArgument { op });
    }
    if k < 64 && n > (1u64 << k) {
        return Err(domain(op, format!("n = {n} exceeds 2^{k}")));
    }
    Ok(())
}

/// `F̃(n/2^k) = (n·k − 2B(n)) / 2^k`, valid for `n ≤ 2^k`.
pub fn takagi_from_b(n: u64, k: u32) -> Result<Dyadic> {
    check_bridge_domain("takagi_from_b", n, k)?;
    bridge_expression(n, k)
}

/// `B(n) = n·k/2 − 2^{k−1}·F̃(n/2^k)`, valid for `n ≤ 2^k`.
pub fn b_from_takagi(n: u64, k: u32) -> Result<u128> {
    const OP: &str = "b_from_takagi";
    check_bridge_domain(OP, n, k)?;
    let point = Dyadic::try_new(i128::from(n), k)?;
    let scaled = takagi_dyadic(point)?.mul_pow2(k)?.div_pow2(1)?;
    let value = Dyadic::from(n)
        .checked_mul_int(i128::from(k))?
        .div_pow2(1)?
        .checked_sub(&scaled)?;
    match value.to_integer() {
        Some(v) if v >= 0 => Ok(v as u128),
        _ => Err(Error::NonIntegral { op: OP, value }),
    }
}

/// `F̃(n/2^{⌊lg n⌋}) = (n(⌊lg n⌋ + 2) − 2B(n)) / 2^{⌊lg n⌋} − 2`.
pub fn takagi_at_floor_lg(n: u64) -> Result<Dyadic> {
    if n == 0 {
        return Err(Error::ZeroArgument {
            op: "takagi_at_floor_lg",
        });
    }
    let top = floor_lg(n)?;
    let b = i128::try_from(b_recurrence(n)?).map_err(|_| Error::Overflow)?;
    let numerator = i128::from(n)
        .checked_mul(i128::from(top) + 2)
        .and_then(|v| v.checked_sub(2 * b))
        .ok_or(Error::Overflow)?;
    Dyadic::try_new(numerator, top)?.checked_sub(&Dyadic::from_int(2))
}

/// `F̆(x) = 2^{⌊lg x⌋}·F̃(x/2^{⌊lg x⌋})`, for `x ≥ 1`.
pub fn breve_f(x: Dyadic) -> Result<Dyadic> {
    let top = floor_lg_dyadic("breve_f", &x)?;
    takagi_dyadic(x.div_pow2(top)?)?.mul_pow2(top)
}

/// `(i·⌊2^i·x⌋ − 2B(⌊2^i·x⌋)) / 2^i + 2x − 2` for `x = p/q ∈ [1, 2)`.
///
/// These values tend to `F̃(x)` as `i` grows. With `n = ⌊2^i·x⌋` the term
/// is `F̃(n/2^i) + 2(x − n/2^i)`; the second part is not dyadic unless `2^i·x`
/// is an integer, so the term comes back as an enclosure of half-width
/// `2^{−i}`.
pub fn takagi_limit_term(p: u64, q: u64, i: u32) -> Result<ApproxValue> {
    const OP: &str = "takagi_limit_term";
    if q == 0 {
        return Err(Error::ZeroArgument { op: OP });
    }
    let (pw, qw) = (u128::from(p), u128::from(q));
    if pw < qw || pw >= 2 * qw {
        return Err(domain(OP, format!("{p}/{q} is outside [1, 2)")));
    }
    if i >= 64 {
        return Err(Error::Overflow);
    }
    let scaled = (pw << i) / qw;
    let n = u64::try_from(scaled).map_err(|_| Error::Overflow)?;
    let head = bridge_expression(n, i)?;
    // x = n/2^i + δ with 0 ≤ δ < 2^{−i}
    let near = Dyadic::try_new(i128::from(n), i)?
        .mul_pow2(1)?
        .checked_sub(&Dyadic::from_int(2))?;
    let exact_part = head.checked_add(&near)?;
    if (pw << i).is_multiple_of(qw) {
        return Ok(ApproxValue::exact(exact_part));
    }
    // 2δ ∈ (0, 2^{1−i})
    let half_width = Dyadic::try_new(1, i)?;
    Ok(ApproxValue {
        value: exact_part.checked_add(&half_width)?,
        error_bound: half_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: i128, e: u32) -> Dyadic {
        Dyadic::new(p, e)
    }

    #[test]
    fn big_f_examples() {
        assert_eq!(big_f(Dyadic::ONE), Ok(Dyadic::ZERO));
        assert_eq!(big_f(Dyadic::from_int(5)), Ok(Dyadic::from_int(2)));
        assert_eq!(big_f(Dyadic::from_int(3)), Ok(Dyadic::ONE));
        assert!(matches!(big_f(Dyadic::HALF), Err(Error::Domain { .. })));
        assert!(big_f(Dyadic::from_int(-4)).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(f_tilde_partial(0, d(3, 3)), Ok(Dyadic::ZERO));
        assert_eq!(f_tilde_partial(1, Dyadic::HALF), Ok(Dyadic::HALF));
        assert_eq!(f_tilde_partial(2, d(1, 2)), Ok(Dyadic::HALF));
        // terms beyond the exponent are zero, so a huge k is harmless
        assert_eq!(f_tilde_partial(u32::MAX, d(1, 2)), Ok(Dyadic::HALF));
    }

    #[test]
    fn takagi_dyadic_examples() {
        assert_eq!(takagi_dyadic(Dyadic::HALF), Ok(Dyadic::HALF));
        assert_eq!(takagi_dyadic(d(3, 3)), Ok(d(5, 3)));
        assert_eq!(takagi_dyadic(Dyadic::from_int(7)), Ok(Dyadic::ZERO));
        assert_eq!(takagi_dyadic(d(11, 3)), takagi_dyadic(d(3, 3)));
        assert_eq!(takagi_dyadic(d(-5, 3)), takagi_dyadic(d(3, 3)));
    }

    fn brackets_two_thirds(a: &ApproxValue) -> bool {
        // value ≤ 2/3 ≤ value + bound, tested as 3·value ≤ 2 ≤ 3·(value + bound)
        let two = Dyadic::from_int(2);
        a.value.checked_mul_int(3).unwrap() <= two
            && a.upper().unwrap().checked_mul_int(3).unwrap() >= two
    }

    #[test]
    fn takagi_approx_examples() {
        let third = takagi_approx(1, 3, 20).unwrap();
        assert_eq!(third.error_bound, d(1, 20));
        assert!(brackets_two_thirds(&third));
        let two_thirds = takagi_approx(2, 3, 20).unwrap();
        assert!(brackets_two_thirds(&two_thirds));
        let zero = takagi_approx(0, 1, 5).unwrap();
        assert_eq!(zero.value, Dyadic::ZERO);
        assert!(zero.error_bound <= d(1, 5));
        assert!(zero.is_exact());
        assert!(matches!(
            takagi_approx(1, 0, 5),
            Err(Error::ZeroArgument { .. })
        ));
        assert!(takagi_approx(1, 3, 0).is_err());
        assert!(brackets_two_thirds(&takagi_approx(-2, 3, 25).unwrap()));
        assert!(brackets_two_thirds(&takagi_approx(7, 3, 25).unwrap()));
    }

    #[test]
    fn takagi_approx_power_of_two_q_is_exact() {
        let a = takagi_approx(3, 8, 4).unwrap();
        assert_eq!(a, ApproxValue::exact(d(5, 3)));
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(takagi_from_b(1, 4), Ok(d(1, 2)));
        assert_eq!(takagi_from_b(3, 2), Ok(Dyadic::HALF));
        assert_eq!(takagi_from_b(5, 3), Ok(d(5, 3)));
        assert!(matches!(takagi_from_b(5, 2), Err(Error::Domain { .. })));
        assert_eq!(b_from_takagi(5, 3), Ok(5));
        assert_eq!(b_from_takagi(1, 0), Ok(0));
        assert_eq!(b_from_takagi(8, 3), Ok(12));
        assert!(b_from_takagi(9, 3).is_err());
        assert!(takagi_from_b(0, 3).is_err());
    }

    #[test]
    fn floor_lg_bridge_examples() {
        assert_eq!(takagi_at_floor_lg(1), Ok(Dyadic::ZERO));
        assert_eq!(takagi_at_floor_lg(3), Ok(Dyadic::HALF));
        assert_eq!(takagi_at_floor_lg(5), Ok(Dyadic::HALF));
        assert_eq!(takagi_dyadic(d(3, 1)), Ok(Dyadic::HALF));
        assert_eq!(
            big_f(Dyadic::from_int(5)).unwrap().div_pow2(2),
            Ok(Dyadic::HALF)
        );
        assert!(takagi_at_floor_lg(0).is_err());
    }

    #[test]
    fn breve_examples() {
        assert_eq!(breve_f(Dyadic::from_int(5)), big_f(Dyadic::from_int(5)));
        assert_eq!(breve_f(Dyadic::from_int(4)), Ok(Dyadic::ZERO));
        // F̆(3/2) = F̃(3/2) = F̃(1/2)
        assert_eq!(breve_f(d(3, 1)), Ok(Dyadic::HALF));
        assert!(breve_f(d(1, 1)).is_err());
    }

    #[test]
    fn limit_term_domain() {
        assert!(takagi_limit_term(1, 3, 5).is_err());
        assert!(takagi_limit_term(6, 3, 5).is_err());
        assert!(takagi_limit_term(4, 0, 5).is_err());
        // dyadic x: exact once 2^i·x is an integer
        let t = takagi_limit_term(3, 2, 4).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.value, takagi_dyadic(d(3, 1)).unwrap());
    }
}
