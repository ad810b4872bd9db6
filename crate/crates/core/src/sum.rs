//! Deterministic compensated summation.
//!
//! State sums are reduced with a fixed pairwise tree over the input order,
//! each leaf block accumulated with Neumaier compensation. The result depends
//! only on the order of the slice, never on how work was split between threads.

use num_complex::Complex;

use crate::scalar::Real;

const LEAF: usize = 32;

fn neumaier<T: Real>(xs: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Pairwise tree sum with compensated leaves.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        return neumaier(xs);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    let re: Vec<T> = xs.iter().map(|z| z.re).collect();
    let im: Vec<T> = xs.iter().map(|z| z.im).collect();
    Complex::new(pairwise_sum(&re), pairwise_sum(&im))
}
