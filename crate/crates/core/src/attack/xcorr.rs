//! Circular cross-correlation `c[i] = sum_k u[(k + i) mod T] v[k]`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correlation {
    pub values: Vec<f64>,
    /// First index attaining the maximum (values within `1e-6` relative of
    /// each other count as equal).
    pub argmax: usize,
}

fn argmax(values: &[f64]) -> usize {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-6 * max.abs().max(1.0);
    values.iter().position(|&c| c >= max - tol).unwrap_or(0)
}

/// FFT cross-correlation in `O(T log T)`.
pub fn crosscorrelate(u: &[f64], v: &[f64]) -> Correlation {
    assert_eq!(u.len(), v.len(), "sequences must have equal length");
    if u.is_empty() {
        return Correlation { values: Vec::new(), argmax: 0 };
    }
    let mut c = Correlator::new(u);
    let values = c.correlate(v).to_vec();
    Correlation { argmax: argmax(&values), values }
}

/// `O(T^2)` reference.
pub fn crosscorrelate_direct(u: &[f64], v: &[f64]) -> Correlation {
    assert_eq!(u.len(), v.len(), "sequences must have equal length");
    let t = u.len();
    let values: Vec<f64> = (0..t)
        .map(|i| (0..t).map(|k| u[(k + i) % t] * v[k]).sum())
        .collect();
    Correlation { argmax: argmax(&values), values }
}

/// Correlates one fixed `u` against many `v`, reusing the FFT plans and the
/// transform of `u`.
pub struct Correlator {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    u_hat: Vec<Complex64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    out: Vec<f64>,
}

impl Correlator {
    pub fn new(u: &[f64]) -> Self {
        let len = u.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::default(); scratch_len];
        let mut u_hat: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        forward.process_with_scratch(&mut u_hat, &mut scratch);
        Correlator {
            len,
            forward,
            inverse,
            u_hat,
            buf: vec![Complex64::default(); len],
            scratch,
            out: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn correlate(&mut self, v: &[f64]) -> &[f64] {
        assert_eq!(v.len(), self.len, "sequences must have equal length");
        for (b, &x) in self.buf.iter_mut().zip(v) {
            *b = Complex64::new(x, 0.0);
        }
        self.forward.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (b, u) in self.buf.iter_mut().zip(&self.u_hat) {
            *b = u * b.conj();
        }
        self.inverse.process_with_scratch(&mut self.buf, &mut self.scratch);
        let scale = 1.0 / self.len as f64;
        for (o, b) in self.out.iter_mut().zip(&self.buf) {
            *o = b.re * scale;
        }
        &self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones() {
        let u = vec![1.0; 31];
        let c = crosscorrelate(&u, &u);
        assert!(c.values.iter().all(|&x| (x - 31.0).abs() < 1e-9));
        assert_eq!(c.argmax, 0);
    }

    #[test]
    fn impulse_rotates() {
        let t = 17;
        let mut u = vec![0.0; t];
        u[0] = 1.0;
        let v: Vec<f64> = (0..t).map(|k| (k * k % 7) as f64).collect();
        let c = crosscorrelate(&u, &v);
        for i in 0..t {
            assert!((c.values[i] - v[(t - i) % t]).abs() < 1e-9);
        }
    }

    #[test]
    fn matches_direct_on_integers() {
        let t = 127;
        let u: Vec<f64> = (0..t).map(|k| if (k * 37 + 11) % 5 < 2 { 1.0 } else { -1.0 }).collect();
        let v: Vec<f64> = (0..t).map(|k| ((k * 53 + 7) % 9) as f64 - 4.0).collect();
        let a = crosscorrelate(&u, &v);
        let b = crosscorrelate_direct(&u, &v);
        assert_eq!(a.argmax, b.argmax);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
