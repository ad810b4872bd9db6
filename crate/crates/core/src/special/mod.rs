//! Cylindrical Bessel functions of integer order, their zeros, and a
//! bracketed scalar root finder.

mod bessel;
mod modified;
mod roots;

pub use roots::{find_root, RootBracket};

pub(crate) use bessel::{j_triple, jn, y_triple, yn};
pub(crate) use modified::{i_n, k_n, k_triple};
pub(crate) use roots::{brent, scan_brackets};

use crate::error::{Error, Result};
use crate::scalar::{int, lit, Real};

/// Largest argument accepted by the checked J/Y entry points.
pub const MAX_ARGUMENT: f64 = 1.0e4;
/// Largest argument accepted by the checked I/K entry points.
pub const MAX_MODIFIED_ARGUMENT: f64 = 700.0;

fn check_real_axis<T: Real>(x: T, max: f64, name: &str) -> Result<()> {
    if !(x >= T::zero()) || x > lit(max) {
        return Err(Error::invalid(format!("{name}: argument {x} outside [0, {max}]")));
    }
    Ok(())
}

/// J_m(x) on `0 <= x <= 1e4`.
pub fn bessel_j<T: Real>(m: u32, x: T) -> Result<T> {
    check_real_axis(x, MAX_ARGUMENT, "bessel_j")?;
    Ok(jn(m, x))
}

/// Y_m(x) on `0 < x <= 1e4`.
pub fn bessel_y<T: Real>(m: u32, x: T) -> Result<T> {
    check_real_axis(x, MAX_ARGUMENT, "bessel_y")?;
    if x == T::zero() {
        return Err(Error::invalid("bessel_y: singular at x = 0"));
    }
    Ok(yn(m, x))
}

/// I_m(x) on `0 <= x <= 700`.
pub fn bessel_i<T: Real>(m: u32, x: T) -> Result<T> {
    check_real_axis(x, MAX_MODIFIED_ARGUMENT, "bessel_i")?;
    Ok(i_n(m, x))
}

/// K_m(x) on `0 < x <= 700`.
pub fn bessel_k<T: Real>(m: u32, x: T) -> Result<T> {
    check_real_axis(x, MAX_MODIFIED_ARGUMENT, "bessel_k")?;
    if x == T::zero() {
        return Err(Error::invalid("bessel_k: singular at x = 0"));
    }
    Ok(k_n(m, x))
}

/// k-th positive zero of J_m for `m <= 20`, `1 <= k <= 50`.
pub fn bessel_j_zero<T: Real>(m: u32, k: u32) -> Result<T> {
    if m > 20 || k == 0 || k > 50 {
        return Err(Error::invalid(format!("bessel_j_zero: (m = {m}, k = {k}) outside m <= 20, 1 <= k <= 50")));
    }
    Ok(j_zero(m, k))
}

/// Unchecked zero finder: scans from `m` in half-unit steps (zeros of J_m
/// are more than 2.4 apart) and polishes each sign change with Brent.
pub(crate) fn j_zero<T: Real>(m: u32, k: u32) -> T {
    zeros_of_j_below(m, T::infinity(), Some(k)).pop().expect("zero exists")
}

/// Ascending zeros of J_m below `limit`, at most `count` of them.
pub(crate) fn zeros_of_j_below<T: Real>(m: u32, limit: T, count: Option<u32>) -> Vec<T> {
    let step = lit::<T>(0.5);
    let mut out = Vec::new();
    // j_{m,1} > m, and J_m has no sign change on (0, m]
    let mut lo = int::<T>(m as i64).max(lit(0.5));
    let mut f_lo = jn(m, lo);
    loop {
        if count.is_some_and(|c| out.len() as u32 >= c) || lo >= limit {
            break;
        }
        let hi = lo + step;
        let f_hi = jn(m, hi);
        if (f_lo > T::zero()) != (f_hi > T::zero()) || f_hi == T::zero() {
            let bracket = RootBracket { lo, hi, f_lo, f_hi };
            let z = brent(|x| jn(m, x), bracket, T::epsilon() * hi * lit(4.0), T::zero());
            if z < limit {
                out.push(z);
            } else {
                break;
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    out
}
