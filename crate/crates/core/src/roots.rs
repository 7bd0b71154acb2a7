//! Root finding for monotone functions: a bracketed real solver and an
//! integer threshold search.

use crate::error::{Error, Result};

/// Finds `x` in `[lo, hi]` with `f(x) = 0` for a nondecreasing `f`.
///
/// Uses Illinois-modified regula falsi, falling back to bisection whenever the
/// secant step stalls. Terminates when the bracket is narrower than `x_tol`
/// or `|f(x)| <= f_tol`.
pub fn solve_increasing<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::Domain(format!(
            "root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    let mut side = 0i8;
    for _ in 0..400 {
        let width = hi - lo;
        let mut x = lo - f_lo * width / (f_hi - f_lo);
        if !(x > lo && x < hi) || !x.is_finite() {
            x = lo + 0.5 * width;
        }
        let fx = f(x)?;
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= x_tol {
            return Ok(if f_lo.abs() < f_hi.abs() { lo } else { hi });
        }
        // every few steps force a bisection so the bracket keeps shrinking
        if (hi - lo) > 0.5 * width {
            let mid = lo + 0.5 * (hi - lo);
            let fm = f(mid)?;
            if fm.abs() <= f_tol {
                return Ok(mid);
            }
            if fm < 0.0 {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
                f_hi = fm;
            }
            side = 0;
        }
    }
    Err(Error::Convergence("monotone root solver"))
}

/// Smallest integer `n` in `[floor, ceiling]` for which the monotone predicate
/// holds, starting the search near `guess`.
pub fn smallest_satisfying<P>(mut holds: P, guess: u64, floor: u64, ceiling: u64) -> Result<Option<u64>>
where
    P: FnMut(u64) -> Result<bool>,
{
    let guess = guess.clamp(floor, ceiling);
    let (mut bad, mut good);
    if holds(guess)? {
        good = guess;
        // walk down geometrically until the predicate fails
        let mut step = 1u64;
        loop {
            if good == floor {
                return Ok(Some(floor));
            }
            let probe = good.saturating_sub(step).max(floor);
            if holds(probe)? {
                good = probe;
                step = step.saturating_mul(2);
            } else {
                bad = probe;
                break;
            }
        }
    } else {
        bad = guess;
        let mut step = 1u64;
        loop {
            if bad == ceiling {
                return Ok(None);
            }
            let probe = bad.saturating_add(step).min(ceiling);
            if holds(probe)? {
                good = probe;
                break;
            }
            bad = probe;
            step = step.saturating_mul(2);
        }
    }
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if holds(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(Some(good))
}
