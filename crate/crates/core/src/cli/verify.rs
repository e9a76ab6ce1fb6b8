//! Invariant sweeps behind `mergecount verify`.

use std::io::Write;

use clap::ValueEnum;

use super::{CmdResult, Failure, EXIT_FAILURE, EXIT_OK};
use crate::counts;
use crate::dyadic::{ceil_lg, floor_lg, Dyadic};
use crate::fractal;
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Formulas,
    Oracle,
    Takagi,
    Tree,
    All,
}

/// One named check: `Err` carries the first counterexample.
pub struct Outcome {
    pub name: &'static str,
    pub result: Result<(), String>,
}

type Check = std::result::Result<(), String>;

fn lib<T>(r: crate::Result<T>, ctx: impl FnOnce() -> String) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", ctx()))
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, lhs: T, rhs: T) -> Check {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs:?} != {rhs:?}"))
    }
}

fn for_each_n(max_n: u64, mut f: impl FnMut(u64) -> Check) -> Check {
    (1..=max_n).try_for_each(|n| f(n).map_err(|e| format!("n={n}: {e}")))
}

fn outcome(name: &'static str, result: Check) -> Outcome {
    Outcome { name, result }
}

pub fn identities(max_n: u64, max_m: u64) -> Vec<Outcome> {
    let two_m = (0..=max_n).try_for_each(|n| {
        (1..=max_m).try_for_each(|m| {
            let (lhs, rhs) = lib(counts::identity_theorem_2_2(n, m), || {
                format!("n={n} m={m}")
            })?;
            if Dyadic::from_int(lhs) == rhs {
                Ok(())
            } else {
                Err(format!("n={n} m={m}: lhs={lhs} rhs={rhs}"))
            }
        })
    });
    let shifted = (0..=max_n).try_for_each(|n| {
        (1..=max_m).try_for_each(|m| {
            let s = lib(counts::identity_appendix_b(n, m), || format!("n={n} m={m}"))?;
            expect_eq(&format!("n={n} m={m}"), s, u128::from(n))
        })
    });
    vec![
        outcome("floor-sum-difference-equals-scaled-zigzag", two_m),
        outcome("shifted-floor-sum-equals-n", shifted),
    ]
}

pub fn formulas(max_n: u64) -> Vec<Outcome> {
    let triple = for_each_n(max_n, |n| {
        let r = lib(counts::b_recurrence(n), || "recurrence".into())?;
        let z = lib(counts::b_zigzag(n), || "zigzag".into())?;
        let a = lib(counts::b_alt(n), || "alternative".into())?;
        expect_eq("recurrence vs zigzag", r, z)?;
        expect_eq("recurrence vs alternative", r, a)
    });
    let digits = counts::digit_sum_table(max_n);
    let digit_sum = for_each_n(max_n, |n| {
        let b = lib(counts::b_recurrence(n), || "recurrence".into())?;
        expect_eq("B vs A(n,2)", b, digits[n as usize])
    });
    let worst = lib(counts::w_sum_table(max_n), || "w_sum_table".into()).and_then(|table| {
        for_each_n(max_n, |n| {
            let w = lib(counts::w_closed(n), || "closed form".into())?;
            expect_eq("closed vs sum of ceil lg", w, table[n as usize])
        })
    });
    let levels = for_each_n(max_n, |n| {
        let top = floor_lg(n).map_err(|e| e.to_string())?;
        let mut total = 0u128;
        for k in 0..=top {
            let closed = lib(counts::level_comps(n, k), || format!("k={k}"))?;
            let direct = lib(counts::level_comps_direct(n, k), || format!("k={k}"))?;
            expect_eq(&format!("level k={k}"), closed, direct)?;
            total += closed;
        }
        let b = lib(counts::b_recurrence(n), || "recurrence".into())?;
        expect_eq("sum of levels vs B", total, b)
    });
    let witnesses = counts::lower_bound_witnesses(40);
    let band = for_each_n(max_n, |n| {
        let diff = lib(counts::diff_2b_w(n), || "2B-W".into())?;
        let f = lib(fractal::big_f(Dyadic::from(n)), || "F(n)".into())?;
        let n_i = i128::from(n);
        if Dyadic::from_int(n_i - 1 - diff) != f {
            return Err(format!(
                "2B-W={diff} but n-1-F(n)={}",
                Dyadic::from_int(n_i - 1) - f
            ));
        }
        if 2 * diff < n_i - 1 || diff > n_i - 1 {
            return Err(format!("2B-W={diff} outside [(n-1)/2, n-1]"));
        }
        expect_eq(
            "upper equality iff power of two",
            diff == n_i - 1,
            n.is_power_of_two(),
        )?;
        expect_eq(
            "lower equality iff witness",
            2 * diff == n_i - 1,
            witnesses.contains(&n),
        )
    });
    let monotone = for_each_n(max_n, |n| {
        let (b0, b1) = (counts::b_recurrence(n), counts::b_recurrence(n + 1));
        let (w0, w1) = (counts::w_closed(n), counts::w_closed(n + 1));
        match (b0, b1, w0, w1) {
            (Ok(b0), Ok(b1), Ok(w0), Ok(w1)) if b0 <= b1 && w0 <= w1 && b0 <= w0 => Ok(()),
            other => Err(format!("ordering broken: {other:?}")),
        }
    });
    vec![
        outcome("best-case-three-routes-agree", triple),
        outcome("best-case-equals-binary-digit-sum", digit_sum),
        outcome("worst-case-closed-form", worst),
        outcome("level-decomposition", levels),
        outcome("two-b-minus-w-band", band),
        outcome("counts-monotone", monotone),
    ]
}

pub fn oracle_suite(max_n: u64) -> Vec<Outcome> {
    let best = for_each_n(max_n, |n| {
        let input = lib(oracle::best_case_input(n as usize), || {
            "best_case_input".into()
        })?;
        let b = lib(counts::b_recurrence(n), || "recurrence".into())?;
        expect_eq(
            "comparisons vs B",
            u128::from(oracle::merge_sort_count(&input).comparisons),
            b,
        )
    });
    let worst = for_each_n(max_n, |n| {
        let input = lib(oracle::worst_case_input(n as usize), || {
            "worst_case_input".into()
        })?;
        let w = lib(counts::w_closed(n), || "closed form".into())?;
        expect_eq(
            "comparisons vs W",
            u128::from(oracle::merge_sort_count(&input).comparisons),
            w,
        )
    });
    let random = for_each_n(max_n, |n| {
        let b = lib(counts::b_recurrence(n), || "recurrence".into())?;
        let w = lib(counts::w_closed(n), || "closed form".into())?;
        for seed in 0..4 {
            let input = lib(oracle::random_input(n as usize, seed), || {
                "random_input".into()
            })?;
            let trace = oracle::merge_sort_count(&input);
            let c = u128::from(trace.comparisons);
            if c < b || c > w {
                return Err(format!("seed={seed}: comps={c} outside [{b}, {w}]"));
            }
            if trace.output != (0..n as i64).collect::<Vec<_>>() {
                return Err(format!("seed={seed}: output not sorted"));
            }
        }
        Ok(())
    });
    vec![
        outcome("sorted-input-costs-best-case", best),
        outcome("interleaved-input-costs-worst-case", worst),
        outcome("random-input-within-bounds", random),
    ]
}

pub fn takagi(max_n: u64) -> Vec<Outcome> {
    let bridge = for_each_n(max_n, |n| {
        let low = ceil_lg(n).map_err(|e| e.to_string())?;
        for k in low..=low + 3 {
            let via_b = lib(fractal::takagi_from_b(n, k), || format!("k={k}"))?;
            let direct = lib(
                Dyadic::try_new(i128::from(n), k).and_then(fractal::takagi_dyadic),
                || format!("k={k}"),
            )?;
            expect_eq(&format!("k={k} bridge"), via_b, direct)?;
            let b = lib(fractal::b_from_takagi(n, k), || format!("k={k}"))?;
            let expected = lib(counts::b_recurrence(n), || "recurrence".into())?;
            expect_eq(&format!("k={k} inverse bridge"), b, expected)?;
        }
        Ok(())
    });
    let strict = for_each_n(max_n, |n| {
        let k = floor_lg(n).map_err(|e| e.to_string())?;
        if n == 1 << k {
            return Ok(());
        }
        let expr = lib(fractal::bridge_expression(n, k), || "bridge".into())?;
        let actual = lib(
            Dyadic::try_new(i128::from(n), k).and_then(fractal::takagi_dyadic),
            || "takagi".into(),
        )?;
        if expr < actual {
            Ok(())
        } else {
            Err(format!("k={k}: bridge value {expr} is not below {actual}"))
        }
    });
    let floor_point = for_each_n(max_n, |n| {
        let k = floor_lg(n).map_err(|e| e.to_string())?;
        let lhs = lib(fractal::takagi_at_floor_lg(n), || "closed form".into())?;
        let rhs = lib(
            Dyadic::try_new(i128::from(n), k).and_then(fractal::takagi_dyadic),
            || "takagi".into(),
        )?;
        expect_eq("value at n/2^floor(lg n)", lhs, rhs)?;
        let breve = lib(fractal::breve_f(Dyadic::from(n)), || "breveF".into())?;
        let big = lib(fractal::big_f(Dyadic::from(n)), || "bigF".into())?;
        expect_eq("breveF(n) vs F(n)", breve, big)
    });
    let tails = for_each_n(max_n, |n| {
        let top = floor_lg(n).map_err(|e| e.to_string())?;
        let z = |k: u32| {
            lib(Dyadic::try_new(i128::from(n), k), || format!("k={k}")).map(|x| x.zigzag())
        };
        let mut partial = Dyadic::ZERO;
        let mut tail = Dyadic::ZERO;
        for k in 1..=top + 8 {
            let term = lib(z(k)?.mul_pow2(k), || format!("k={k}"))?;
            partial = partial + term;
            if k >= top + 2 {
                expect_eq(&format!("k={k}: 2^k Z(n/2^k)"), term, Dyadic::from(n))?;
                tail = tail + term;
                let expected =
                    Dyadic::from(n) * Dyadic::from_int(i128::from(k) - i128::from(top) - 1);
                expect_eq(&format!("k={k}: tail sum"), tail, expected)?;
            }
            let scaled = lib(
                Dyadic::try_new(i128::from(n), k)
                    .and_then(fractal::takagi_dyadic)
                    .and_then(|t| t.mul_pow2(k)),
                || format!("k={k}"),
            )?;
            expect_eq(&format!("k={k}: 2^k F~(n/2^k)"), scaled, partial)?;
        }
        Ok(())
    });
    let points = (1..=40u32).try_for_each(|k| {
        let at = |p: i128| {
            lib(
                Dyadic::try_new(p, k).and_then(fractal::takagi_dyadic),
                || format!("k={k}"),
            )
        };
        expect_eq(
            &format!("k={k}: F~(1/2^k)"),
            at(1)?,
            Dyadic::new(i128::from(k), k),
        )?;
        if k >= 2 {
            expect_eq(
                &format!("k={k}: F~(3/2^k)"),
                at(3)?,
                Dyadic::new(3 * i128::from(k) - 4, k),
            )?;
        }
        Ok(())
    });
    let third = [(1, 3), (2, 3)].iter().try_for_each(|&(p, q)| {
        let v = lib(fractal::takagi_approx(p, q, 60), || format!("{p}/{q}"))?;
        let lo = v.lower().map_err(|e| e.to_string())?;
        let hi = v.upper().map_err(|e| e.to_string())?;
        let two = Dyadic::from_int(2);
        // lo <= 2/3 <= hi  <=>  3lo <= 2 <= 3hi
        if lo * Dyadic::from_int(3) <= two && two <= hi * Dyadic::from_int(3) {
            Ok(())
        } else {
            Err(format!("{p}/{q}: enclosure [{lo}, {hi}] misses 2/3"))
        }
    });
    let bounded = {
        let e = floor_lg(max_n.max(1)).map_or(0, |v| v + 1).min(20);
        let max = Dyadic::from_int(2);
        (0..=1i128 << e).try_for_each(|p| {
            let y = lib(
                Dyadic::try_new(p, e).and_then(fractal::takagi_dyadic),
                || format!("p={p}"),
            )?;
            if y.is_negative() || y * Dyadic::from_int(3) > max {
                Err(format!("F~({p}/2^{e}) = {y} outside [0, 2/3]"))
            } else {
                Ok(())
            }
        })
    };
    vec![
        outcome("takagi-bridge-round-trip", bridge),
        outcome("bridge-fails-strictly-above-domain", strict),
        outcome("takagi-at-floor-lg", floor_point),
        outcome("scaled-zigzag-tail-sums", tails),
        outcome("takagi-point-values", points),
        outcome("takagi-at-thirds", third),
        outcome("takagi-range", bounded),
    ]
}

pub fn tree(max_n: u64) -> Vec<Outcome> {
    let shape = for_each_n(max_n, |n| {
        let t = lib(oracle::build_tree(n), || "build_tree".into())?;
        let h = ceil_lg(n).map_err(|e| e.to_string())?;
        expect_eq("depth", t.depth(), h)?;
        expect_eq("node count", t.node_count() as u64, 2 * n - 1)?;
        expect_eq("leaf count", t.leaf_count() as u64, n)?;
        if t.leaves().any(|l| l.size != 1) {
            return Err("a leaf has size other than 1".into());
        }
        for level in 0..=h as usize {
            let spread = t.level_spread(level);
            if spread > 1 {
                return Err(format!("level {level}: spread {spread}"));
            }
        }
        for level in 0..h as usize {
            expect_eq(
                &format!("level {level} width"),
                t.level_widths()[level],
                1 << level,
            )?;
            expect_eq(
                &format!("level {level} worst comparisons"),
                t.level_worst_comps(level),
                n - (1 << level),
            )?;
        }
        Ok(())
    });
    vec![outcome("recursion-tree-shape", shape)]
}

pub fn run_suite(suite: Suite, max_n: u64, max_m: u64) -> Vec<Outcome> {
    match suite {
        Suite::Identities => identities(max_n, max_m),
        Suite::Formulas => formulas(max_n),
        Suite::Oracle => oracle_suite(max_n),
        Suite::Takagi => takagi(max_n),
        Suite::Tree => tree(max_n),
        Suite::All => [
            identities(max_n, max_m),
            formulas(max_n),
            oracle_suite(max_n),
            takagi(max_n),
            tree(max_n),
        ]
        .into_iter()
        .flatten()
        .collect(),
    }
}

pub(super) fn cmd_verify(suite: Suite, max_n: u64, max_m: u64, out: &mut dyn Write) -> CmdResult {
    if max_n == 0 {
        return Err(Failure::Usage("--max-n must be at least 1".into()));
    }
    if max_m == 0 {
        return Err(Failure::Usage("--max-m must be at least 1".into()));
    }
    let mut failed = false;
    for o in run_suite(suite, max_n, max_m) {
        match o.result {
            Ok(()) => writeln!(out, "PASS {}", o.name)?,
            Err(counterexample) => {
                failed = true;
                writeln!(out, "FAIL {}: {counterexample}", o.name)?;
            }
        }
    }
    Ok(if failed { EXIT_FAILURE } else { EXIT_OK })
}
