//! Complex discrete Fourier transform used by every spectral operation.
//!
//! Power-of-two lengths use an iterative radix-2 Cooley-Tukey kernel with a
//! precomputed twiddle table. Other even lengths fall back to a direct
//! O(n²) evaluation, which is only meant for small test grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone)]
enum Kernel {
    Radix2 { bitrev: Vec<u32> },
    Direct,
}

/// A transform plan for one length. Cheap to share behind an `Arc`.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    /// `twiddles[k] = exp(-2πik/len)` for `k < len`.
    twiddles: Vec<Complex64>,
    kernel: Kernel,
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let twiddles = (0..len)
            .map(|k| {
                let theta = -2.0 * PI * (k as f64) / (len as f64);
                Complex64::new(libm::cos(theta), libm::sin(theta))
            })
            .collect();
        let kernel = if len.is_power_of_two() {
            let bits = len.trailing_zeros();
            let bitrev = (0..len as u32)
                .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
                .collect();
            Kernel::Radix2 { bitrev }
        } else {
            Kernel::Direct
        };
        Self { len, twiddles, kernel }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized forward transform: `X[k] = Σ_j x[j] exp(-2πijk/n)`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    /// Unnormalized inverse transform: `x[j] = Σ_k X[k] exp(+2πijk/n)`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        match &self.kernel {
            Kernel::Radix2 { bitrev } => self.radix2(data, bitrev, inverse),
            Kernel::Direct => self.direct(data, inverse),
        }
    }

    fn twiddle(&self, k: usize, inverse: bool) -> Complex64 {
        let w = self.twiddles[k];
        if inverse {
            w.conj()
        } else {
            w
        }
    }

    fn radix2(&self, data: &mut [Complex64], bitrev: &[u32], inverse: bool) {
        let n = self.len;
        for (i, &j) in bitrev.iter().enumerate().take(n) {
            let j = j as usize;
            if j > i {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let span = half * 2;
            let stride = n / span;
            for start in (0..n).step_by(span) {
                for k in 0..half {
                    let w = self.twiddle(k * stride, inverse);
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half = span;
        }
    }

    fn direct(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.len;
        let input: Vec<Complex64> = data.to_vec();
        for (k, out) in data.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, x) in input.iter().enumerate() {
                acc += x * self.twiddle((j * k) % n, inverse);
            }
            *out = acc;
        }
    }
}
