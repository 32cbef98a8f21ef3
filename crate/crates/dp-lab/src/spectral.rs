//! FFT plumbing for the periodic grid: cached plans, Fourier multipliers,
//! spectral derivatives, dealiasing and the high-frequency filter.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, inverse: bool) -> Plan {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Forward DFT of real samples.
pub fn dft(values: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    plan(values.len(), false).process(&mut buf);
    buf
}

/// Inverse DFT, returning the real part (input is a spectrum of real data).
pub fn idft(mut spectrum: Vec<Complex<f64>>) -> Vec<f64> {
    let n = spectrum.len();
    plan(n, true).process(&mut spectrum);
    let scale = 1.0 / n as f64;
    spectrum.iter().map(|c| c.re * scale).collect()
}

/// Angular wavenumber of bin `k` on a periodic box of length `len`.
pub fn omega(k: usize, n: usize, len: f64) -> f64 {
    let k = k as isize;
    let n = n as isize;
    let signed = if 2 * k <= n { k } else { k - n };
    2.0 * std::f64::consts::PI * signed as f64 / len
}

/// Applies a real Fourier multiplier `m(omega)` to real samples.
pub fn apply_multiplier(values: &[f64], len: f64, m: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = values.len();
    let mut spec = dft(values);
    for (k, c) in spec.iter_mut().enumerate() {
        *c *= m(omega(k, n, len));
    }
    idft(spec)
}

/// Spectral derivative of the given order (1..=4). The Nyquist mode is
/// zeroed for odd orders.
pub fn derivative(values: &[f64], len: f64, order: usize) -> Vec<f64> {
    assert!((1..=4).contains(&order), "derivative order must lie in 1..=4");
    let n = values.len();
    let mut spec = dft(values);
    for (k, c) in spec.iter_mut().enumerate() {
        let w = omega(k, n, len);
        let factor = Complex::new(0.0, w).powu(order as u32);
        *c *= factor;
        if order % 2 == 1 && n % 2 == 0 && k == n / 2 {
            *c = Complex::new(0.0, 0.0);
        }
    }
    idft(spec)
}

/// Gaussian smoothing by multiplier `exp(-(w*omega)^2/2)` (unit-mass kernel).
pub fn gaussian_smooth(values: &[f64], len: f64, width: f64) -> Vec<f64> {
    apply_multiplier(values, len, |w| (-(width * w).powi(2) / 2.0).exp())
}

/// Zeroes modes above two thirds of the Nyquist wavenumber (Orszag rule),
/// in place on a spectrum.
pub fn dealias(spec: &mut [Complex<f64>]) {
    let n = spec.len();
    let cutoff = n / 3;
    for (k, c) in spec.iter_mut().enumerate() {
        let signed = if 2 * k <= n { k } else { n - k };
        if signed > cutoff {
            *c = Complex::new(0.0, 0.0);
        }
    }
}

/// Exponential high-frequency filter `exp(-strength (|k|/k_max)^36)`,
/// in place on a spectrum. Strength zero is the identity.
pub fn exp_filter(spec: &mut [Complex<f64>], strength: f64) {
    if strength == 0.0 {
        return;
    }
    let n = spec.len();
    let kmax = (n / 2) as f64;
    for (k, c) in spec.iter_mut().enumerate() {
        let signed = if 2 * k <= n { k } else { n - k } as f64;
        *c *= (-strength * (signed / kmax).powi(36)).exp();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_sine_is_exact() {
        let n = 256;
        let len = 10.0;
        let k0 = 2.0 * std::f64::consts::PI * 3.0 / len;
        let xs: Vec<f64> = (0..n).map(|k| k as f64 * len / n as f64).collect();
        let f: Vec<f64> = xs.iter().map(|&x| (k0 * x).sin()).collect();
        let d = derivative(&f, len, 1);
        for (x, d) in xs.iter().zip(&d) {
            assert!((d - k0 * (k0 * x).cos()).abs() < 1e-10);
        }
        let d3 = derivative(&f, len, 3);
        for (x, d) in xs.iter().zip(&d3) {
            assert!((d - (-k0.powi(3)) * (k0 * x).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn round_trip_and_filter() {
        let n = 128;
        let vals: Vec<f64> = (0..n).map(|k| (k as f64 * 0.37).sin() + 0.2).collect();
        let back = idft(dft(&vals));
        for (a, b) in vals.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut spec = dft(&vals);
        exp_filter(&mut spec, 0.0);
        let same = idft(spec);
        for (a, b) in vals.iter().zip(&same) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dealias_kills_top_third() {
        let n = 96;
        let mut spec: Vec<Complex<f64>> = (0..n).map(|_| Complex::new(1.0, 0.0)).collect();
        dealias(&mut spec);
        assert_eq!(spec[0].re, 1.0);
        assert_eq!(spec[n / 3].re, 1.0);
        assert_eq!(spec[n / 3 + 1].re, 0.0);
        assert_eq!(spec[n / 2].re, 0.0);
        assert_eq!(spec[n - n / 3].re, 1.0);
    }
}
