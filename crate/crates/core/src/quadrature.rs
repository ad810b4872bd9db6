//! Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn rule<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = lit::<T>(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut kronrod = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = h * lit(XGK[j]);
        let pair = f(c - dx) + f(c + dx);
        kronrod += pair * lit(WGK[j]);
        if j % 2 == 1 {
            gauss += pair * lit(WG[j / 2]);
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integral of `f` over `[a, b]` to absolute tolerance `abs_tol` or relative `rel_tol`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate meets the tolerance; fails with an accuracy error after
/// `max_intervals` pieces.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let (v, e) = rule(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: T = pieces.iter().map(|p| p.2).sum();
        let err: T = pieces.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Accuracy(format!(
                "quadrature did not converge: estimate {total:e}, error {err:e} after {max_intervals} intervals"
            )));
        }
        let (worst, _) =
            pieces
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = lit::<T>(0.5) * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Err(Error::Accuracy("quadrature interval underflow".into()));
        }
        let (v1, e1) = rule(&mut f, lo, mid);
        let (v2, e2) = rule(&mut f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x: f64| x.powi(10), 0.0, 1.0, 1e-15, 1e-15, 10).unwrap();
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x: f64| (50.0 * x).sin() * x, 0.0, 3.0, 1e-13, 1e-13, 500).unwrap();
        let exact = ((150.0_f64).sin() - 150.0 * (150.0_f64).cos()) / 2500.0;
        assert!((v - exact).abs() < 1e-12, "{v} {exact}");
    }

    #[test]
    fn reports_non_convergence() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-16, 0.0, 4);
        assert!(matches!(r, Err(Error::Accuracy(_))));
    }
}
