//! Centered, unitary discrete Fourier transforms along tensor axes.

use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use crate::scalar::Real;

/// Layout of one transform axis inside a flat tensor: `outer × len × inner`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisLayout {
    pub outer: usize,
    pub len: usize,
    pub inner: usize,
}

/// Transforms every line of `data` along the described axis.
///
/// The forward direction maps position samples to wavevector samples with
/// kernel `exp(-i q_m x_j) / √n`, both grids centered on zero; the inverse
/// direction undoes it exactly. `len` must be even.
pub(crate) fn transform_axis<T: Real>(data: &mut [Complex<T>], layout: AxisLayout, forward: bool) {
    let AxisLayout { outer, len, inner } = layout;
    debug_assert_eq!(data.len(), outer * len * inner);
    debug_assert!(len % 2 == 0);

    let direction = if forward { FftDirection::Forward } else { FftDirection::Inverse };
    let fft = FftPlanner::<T>::new().plan_fft(len, direction);
    let scale = T::one() / T::from_usize_lossy(len).sqrt();
    let half = len / 2;

    let mut line = vec![Complex::new(T::zero(), T::zero()); len];
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    for o in 0..outer {
        let base = o * len * inner;
        for i in 0..inner {
            // centered index j maps to FFT slot (j - n/2) mod n
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[base + ((j + half) % len) * inner + i];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (m, v) in line.iter().enumerate() {
                data[base + ((m + half) % len) * inner + i] = *v * scale;
            }
        }
    }
}
