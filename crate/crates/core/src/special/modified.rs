//! Modified Bessel functions I_m and K_m of integer order.

use crate::scalar::{int, lit, Real};

/// I_m(x) from its positive power series, accumulated with the exponential
/// scaled out so the terms stay representable up to x ~ 700.
pub(crate) fn i_n<T: Real>(m: u32, x: T) -> T {
    if x == T::zero() {
        return if m == 0 { T::one() } else { T::zero() };
    }
    let x = x.abs();
    let half = x / lit(2.0);
    let mut log_fact = T::zero();
    for k in 2..=m {
        log_fact += int::<T>(k as i64).ln();
    }
    let mut term = (int::<T>(m as i64) * half.ln() - log_fact - x).exp();
    let q = half * half;
    let mut sum = term;
    let mut k = 0i64;
    loop {
        k += 1;
        term = term * q / (int::<T>(k) * int::<T>(k + m as i64));
        sum += term;
        if term <= sum * T::epsilon() * lit(0.25) && int::<T>(k) > half {
            break;
        }
        if k > 100_000 {
            break;
        }
    }
    sum * x.exp()
}

/// (K0, K1) for x > 0.
fn k01<T: Real>(x: T) -> (T, T) {
    if x <= lit(2.0) {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    }
}

fn k01_series<T: Real>(x: T) -> (T, T) {
    let gamma = T::euler_gamma();
    let log_half = (x / lit(2.0)).ln();
    let q = x * x / lit(4.0);
    // K0 = -(ln(x/2) + gamma) I0 + sum_k q^k/(k!)^2 H_k
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_k (psi(k+1) + psi(k+2)) q^k/(k!(k+1)!)
    let mut i0 = T::one();
    let mut i1 = x / lit(2.0);
    let mut s0 = T::zero();
    let mut harmonic = T::zero();
    let mut psi_sum = -lit::<T>(2.0) * gamma + T::one();
    let mut s1 = psi_sum;
    let mut t0 = T::one();
    let mut t1 = T::one();
    for k in 1..200i64 {
        let kf = int::<T>(k);
        t0 = t0 * q / (kf * kf);
        t1 = t1 * q / (kf * (kf + T::one()));
        harmonic += T::one() / kf;
        i0 += t0;
        i1 += t1 * x / lit(2.0);
        s0 += t0 * harmonic;
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        psi_sum = -lit::<T>(2.0) * gamma + lit::<T>(2.0) * harmonic + T::one() / (kf + T::one());
        s1 += t1 * psi_sum;
        if t0 < T::epsilon() * lit(1e-3) && t1 < T::epsilon() * lit(1e-3) {
            break;
        }
    }
    let k0 = -(log_half + gamma) * i0 + s0;
    let k1 = T::one() / x + log_half * i1 - x / lit(4.0) * s1;
    (k0, k1)
}

/// Steed's continued fraction (CF2) for x > 2.
fn k01_continued_fraction<T: Real>(x: T) -> (T, T) {
    let two = lit::<T>(2.0);
    let a1 = lit::<T>(0.25);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 2..100_000i64 {
        a -= int::<T>(2 * (i - 1));
        c = -a * c / int::<T>(i);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < T::epsilon() * lit(0.5) {
            break;
        }
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + lit(0.5) - h) / x;
    (k0, k1)
}

/// K_m(x) for x > 0; forward recurrence in m is stable.
pub(crate) fn k_n<T: Real>(m: u32, x: T) -> T {
    let (k0, k1) = k01(x);
    if m == 0 {
        return k0;
    }
    let two_over_x = lit::<T>(2.0) / x;
    let (mut prev, mut cur) = (k0, k1);
    for k in 1..m {
        let next = prev + int::<T>(k as i64) * two_over_x * cur;
        prev = cur;
        cur = next;
    }
    cur
}

/// (K_{m-1}, K_m, K_{m+1}) with K_{-1} = K_1.
pub(crate) fn k_triple<T: Real>(m: u32, x: T) -> (T, T, T) {
    let (k0, k1) = k01(x);
    let two_over_x = lit::<T>(2.0) / x;
    let mut v = vec![k1, k0, k1];
    for k in 1..=(m as i64) {
        let next = v[v.len() - 2] + int::<T>(k) * two_over_x * v[v.len() - 1];
        v.push(next);
    }
    let i = m as usize + 1;
    (v[i - 1], v[i], v[i + 1])
}
