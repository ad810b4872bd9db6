//! Integer-order Bessel functions of the first and second kind.
//!
//! * `x < 25`: Miller's backward recurrence normalised by
//!   `J0 + 2 (J2 + J4 + ...) = 1`; `Y0`, `Y1` from Neumann series over the
//!   same `J_k` array, so no power series with cancellation is needed.
//! * `x >= 25`: Hankel asymptotic expansions for orders 0 and 1, followed by
//!   forward recurrence (always for `Y`, for `J` only while `m <= x`).

use crate::scalar::{int, lit, Real};

const ASYMPTOTIC_FROM: f64 = 25.0;

/// Hankel expansion of (J0, J1, Y0, Y1) for large x.
fn hankel01<T: Real>(x: T) -> (T, T, T, T) {
    let (s, c) = x.sin_cos();
    let rt = (T::FRAC_2_PI() / x).sqrt();
    let mut out = [T::zero(); 4];
    for nu in 0..2 {
        let mu = lit::<T>(4.0 * (nu * nu) as f64);
        let eight_x = lit::<T>(8.0) * x;
        let mut p = T::one();
        let mut q = T::zero();
        let mut term = T::one();
        let mut last = T::infinity();
        for k in 1..60 {
            let odd = int::<T>(2 * k - 1);
            term = term * (mu - odd * odd) / (int::<T>(k) * eight_x);
            if term.abs() >= last {
                break;
            }
            last = term.abs();
            // terms alternate in pairs: +t0, +t1, -t2, -t3, +t4, ...
            let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
            if k % 2 == 0 {
                p += sign * term;
            } else {
                q += sign * term;
            }
            if term.abs() < T::epsilon() * lit(1e-3) {
                break;
            }
        }
        // chi = x - (nu/2 + 1/4) pi; expand cos/sin of the shift exactly
        let (cs, ss) = if nu == 0 {
            let h = T::FRAC_1_SQRT_2();
            (h * (c + s), h * (s - c))
        } else {
            let h = T::FRAC_1_SQRT_2();
            (h * (s - c), -h * (c + s))
        };
        out[nu] = rt * (p * cs - q * ss);
        out[nu + 2] = rt * (p * ss + q * cs);
    }
    (out[0], out[1], out[2], out[3])
}

/// Normalised `J_0 .. J_top` by Miller's algorithm (`x > 0`).
fn miller_table<T: Real>(top: usize, x: T) -> Vec<T> {
    let xf = x.to_f64().unwrap_or(0.0);
    let scale = top.max(xf.ceil() as usize) as f64;
    let start = {
        let s = (scale + 20.0 + (40.0 * scale).sqrt()) as usize;
        s + (s % 2)
    };
    let mut table = vec![T::zero(); start + 2];
    let two_over_x = lit::<T>(2.0) / x;
    let big = T::max_value().sqrt();
    let mut next = T::zero();
    let mut cur = T::min_positive_value().sqrt();
    table[start] = cur;
    for k in (1..=start).rev() {
        let prev = int::<T>(k as i64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        table[k - 1] = cur;
        if cur.abs() > big {
            let inv = T::one() / big;
            for v in table[k - 1..].iter_mut() {
                *v *= inv;
            }
            next *= inv;
            cur = table[k - 1];
        }
    }
    let mut norm = table[0];
    let two = lit::<T>(2.0);
    let mut k = 2;
    while k <= start {
        norm += two * table[k];
        k += 2;
    }
    let inv = T::one() / norm;
    table.truncate(top + 2);
    for v in table.iter_mut() {
        *v *= inv;
    }
    table
}

/// J_m(x) for x >= 0, without domain checks.
pub(crate) fn jn<T: Real>(m: u32, x: T) -> T {
    if x == T::zero() {
        return if m == 0 { T::one() } else { T::zero() };
    }
    let x = x.abs();
    if x >= lit(ASYMPTOTIC_FROM) {
        let (j0, j1, _, _) = hankel01(x);
        if m == 0 {
            return j0;
        }
        if int::<T>(m as i64) <= x {
            let two_over_x = lit::<T>(2.0) / x;
            let (mut prev, mut cur) = (j0, j1);
            for k in 1..m {
                let next = int::<T>(k as i64) * two_over_x * cur - prev;
                prev = cur;
                cur = next;
            }
            return cur;
        }
    }
    miller_table(m as usize, x)[m as usize]
}

/// (Y0, Y1) for x > 0.
fn y01<T: Real>(x: T) -> (T, T) {
    if x >= lit(ASYMPTOTIC_FROM) {
        let (_, _, y0, y1) = hankel01(x);
        return (y0, y1);
    }
    let xf = x.to_f64().unwrap();
    let top = (xf + 30.0 + (40.0 * (xf + 1.0)).sqrt()) as usize;
    let j = miller_table(top, x);
    let log_term = (x / lit(2.0)).ln() + T::euler_gamma();
    let frac_2_pi = T::FRAC_2_PI();
    let mut s0 = T::zero();
    let mut s1 = T::zero();
    let mut k = 1usize;
    while 2 * k + 1 < j.len() {
        let kf = int::<T>(k as i64);
        let sign = if k.is_multiple_of(2) { T::one() } else { -T::one() };
        s0 += sign * j[2 * k] / kf;
        s1 += sign * int::<T>(2 * k as i64 + 1) * j[2 * k + 1] / (kf * (kf + T::one()));
        k += 1;
    }
    let y0 = frac_2_pi * (log_term * j[0] - lit::<T>(2.0) * s0);
    // psi(2) = 1 - gamma
    let y1 = -frac_2_pi * j[0] / x + frac_2_pi * ((log_term - T::one()) * j[1] - s1);
    (y0, y1)
}

/// Y_m(x) for x > 0, without domain checks. Forward recurrence is stable for Y.
pub(crate) fn yn<T: Real>(m: u32, x: T) -> T {
    let (y0, y1) = y01(x);
    if m == 0 {
        return y0;
    }
    let two_over_x = lit::<T>(2.0) / x;
    let (mut prev, mut cur) = (y0, y1);
    for k in 1..m {
        let next = int::<T>(k as i64) * two_over_x * cur - prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return T::neg_infinity();
        }
    }
    cur
}

/// J_n for signed n (J_{-n} = (-1)^n J_n).
pub(crate) fn jn_signed<T: Real>(n: i64, x: T) -> T {
    let v = jn(n.unsigned_abs() as u32, x);
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Y_n for signed n (Y_{-n} = (-1)^n Y_n).
#[cfg(test)]
pub(crate) fn yn_signed<T: Real>(n: i64, x: T) -> T {
    let v = yn(n.unsigned_abs() as u32, x);
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// (J_{m-1}, J_m, J_{m+1}) sharing one evaluation where possible.
pub(crate) fn j_triple<T: Real>(m: u32, x: T) -> (T, T, T) {
    let mi = m as i64;
    if x == T::zero() {
        return (jn_signed(mi - 1, x), jn(m, x), jn(m + 1, x));
    }
    if x < lit(ASYMPTOTIC_FROM) || int::<T>(mi + 1) > x {
        let t = miller_table(m as usize + 1, x);
        let below = if m == 0 { -t[1] } else { t[m as usize - 1] };
        return (below, t[m as usize], t[m as usize + 1]);
    }
    let (j0, j1, _, _) = hankel01(x);
    let two_over_x = lit::<T>(2.0) / x;
    let mut v = vec![-j1, j0, j1];
    for k in 1..=mi {
        let next = int::<T>(k) * two_over_x * v[v.len() - 1] - v[v.len() - 2];
        v.push(next);
    }
    let i = m as usize + 1;
    (v[i - 1], v[i], v[i + 1])
}

/// (Y_{m-1}, Y_m, Y_{m+1}).
pub(crate) fn y_triple<T: Real>(m: u32, x: T) -> (T, T, T) {
    let (y0, y1) = y01(x);
    let two_over_x = lit::<T>(2.0) / x;
    let mut v = vec![-y1, y0, y1];
    for k in 1..=(m as i64) {
        let next = int::<T>(k) * two_over_x * v[v.len() - 1] - v[v.len() - 2];
        v.push(next);
    }
    let i = m as usize + 1;
    (v[i - 1], v[i], v[i + 1])
}
