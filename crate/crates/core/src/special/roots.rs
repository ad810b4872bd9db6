use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// An interval known to contain a sign change of `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket<T> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> RootBracket<T> {
    pub fn new(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::invalid(format!("bracket needs lo < hi, got [{lo}, {hi}]")));
        }
        if !(f_lo * f_hi <= T::zero()) {
            return Err(bracket_error(lo, hi, f_lo, f_hi));
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Evaluates `f` at both ends and validates the sign change.
    pub fn around<F: FnMut(T) -> T>(mut f: F, lo: T, hi: T) -> Result<Self> {
        let (f_lo, f_hi) = (f(lo), f(hi));
        Self::new(lo, hi, f_lo, f_hi)
    }
}

fn bracket_error<T: Real>(lo: T, hi: T, f_lo: T, f_hi: T) -> Error {
    let g = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Error::Bracket { lo: g(lo), hi: g(hi), f_lo: g(f_lo), f_hi: g(f_hi) }
}

/// Bracketed root: returns `x` with `|f(x)| <= tol` or a final bracket no wider than `tol`.
///
/// Brent's method (inverse quadratic interpolation with bisection fallback).
pub fn find_root<T: Real, F: FnMut(T) -> T>(f: F, bracket: RootBracket<T>, tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::invalid("root tolerance must be positive"));
    }
    if !(bracket.f_lo * bracket.f_hi <= T::zero()) {
        return Err(bracket_error(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi));
    }
    Ok(brent(f, bracket, tol, tol))
}

/// Brent iteration; stops on half-width <= `xtol` (plus rounding slack) or `|f| <= ftol`.
pub(crate) fn brent<T: Real, F: FnMut(T) -> T>(mut f: F, bracket: RootBracket<T>, xtol: T, ftol: T) -> T {
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let eps = T::epsilon();
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if fa == T::zero() {
        return a;
    }
    if fb == T::zero() {
        return b;
    }
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..1000 {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() || fb.abs() <= ftol {
            return b;
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1.copysign(xm) };
        fb = f(b);
    }
    b
}

/// Scans `[lo, hi]` on `intervals` equal steps and returns every sign-change bracket in order.
pub(crate) fn scan_brackets<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    lo: T,
    hi: T,
    intervals: usize,
) -> Vec<RootBracket<T>> {
    let n = T::from_usize(intervals).unwrap();
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(lo);
    for i in 1..=intervals {
        let x1 = if i == intervals { hi } else { lo + (hi - lo) * T::from_usize(i).unwrap() / n };
        let f1 = f(x1);
        let finite = !f0.is_nan() && !f1.is_nan();
        if finite && (f0 == T::zero() || (f0 > T::zero()) != (f1 > T::zero()) && f1 != T::zero()) {
            out.push(RootBracket { lo: x0, hi: x1, f_lo: f0, f_hi: f1 });
        }
        x0 = x1;
        f0 = f1;
    }
    out
}
