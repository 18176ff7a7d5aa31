//! Cached FFT plans for lane-wise transforms along chart axes.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct AxisFft {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
    pub len: usize,
}

impl AxisFft {
    pub fn new(planner: &mut FftPlanner<f64>, len: usize) -> Self {
        AxisFft {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            len,
        }
    }
}

/// Apply `op` to the spectrum of every lane of `data` along the axis with the
/// given stride and length. `op` receives the mode index and the coefficient.
pub fn transform_lanes(
    data: &mut [Complex64],
    stride: usize,
    fft: &AxisFft,
    op: impl Fn(usize, Complex64) -> Complex64,
) {
    let n = fft.len;
    let total = data.len();
    let mut lane = vec![Complex64::new(0.0, 0.0); n];
    let lane_span = stride * n;
    // Bases: indices whose coordinate along this axis is zero.
    let mut base = 0usize;
    while base < total {
        for off in 0..stride {
            let start = base + off;
            for t in 0..n {
                lane[t] = data[start + t * stride];
            }
            fft.forward.process(&mut lane);
            for (m, v) in lane.iter_mut().enumerate() {
                *v = op(m, *v);
            }
            fft.inverse.process(&mut lane);
            let scale = 1.0 / n as f64;
            for t in 0..n {
                data[start + t * stride] = lane[t] * scale;
            }
        }
        base += lane_span;
    }
}

/// Signed frequency for mode index `m` on an axis of length `n`; the Nyquist
/// mode derivative coefficient is zeroed to keep real fields real.
pub fn signed_freq(m: usize, n: usize) -> i64 {
    if 2 * m < n {
        m as i64
    } else if 2 * m == n {
        0
    } else {
        m as i64 - n as i64
    }
}
