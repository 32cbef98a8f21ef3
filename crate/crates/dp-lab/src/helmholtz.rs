//! The nonlocal resolvents `(kappa^2 - d^2/dx^2)^{-1}` for kappa in {1, 2},
//! the forward operators, and their composition.
//!
//! On the periodic box both directions are Fourier multipliers. Inputs with
//! kink marks are peeled through the slope carrier first, whose resolvent is
//! known in closed form, so peaked profiles invert at closed-form accuracy
//! instead of suffering from the slow spectral decay of the kink.

use crate::carrier;
use crate::error::Result;
use crate::grid::{estimate_jumps, GridFunction};
use crate::spectral;

/// The two resolvent parameters that occur in the equation's structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kappa {
    One,
    Two,
}

impl Kappa {
    pub fn sq(self) -> f64 {
        match self {
            Kappa::One => 1.0,
            Kappa::Two => 4.0,
        }
    }
}

/// `(kappa^2 - d^2/dx^2)^{-1} f`. Output is smooth (two orders gained);
/// kink marks are retained as third-derivative break markers.
pub fn inverse(kappa: Kappa, f: &GridFunction) -> GridFunction {
    inverse_with_derivative(kappa, f).0
}

/// Resolvent and its first spatial derivative in one pass.
pub fn inverse_with_derivative(kappa: Kappa, f: &GridFunction) -> (GridFunction, GridFunction) {
    let grid = f.grid().clone();
    let len = grid.len();
    let ksq = kappa.sq();
    let mut work = f.values().to_vec();
    let mut peel: Vec<(f64, f64)> = Vec::new();
    for &z in f.kinks() {
        let Some((j1, _, _)) = estimate_jumps(&grid, &work, z) else {
            continue;
        };
        let a1 = -j1 / 2.0;
        for (k, w) in work.iter_mut().enumerate() {
            *w -= a1 * carrier::p(grid.node(k) - z, 0);
        }
        peel.push((z, a1));
    }
    let v_smooth = spectral::apply_multiplier(&work, len, |w| 1.0 / (ksq + w * w));
    let vx_smooth = {
        let n = work.len();
        let mut spec = spectral::dft(&work);
        for (k, c) in spec.iter_mut().enumerate() {
            let w = spectral::omega(k, n, len);
            *c *= rustfft::num_complex::Complex::new(0.0, w / (ksq + w * w));
            if n % 2 == 0 && k == n / 2 {
                *c = rustfft::num_complex::Complex::new(0.0, 0.0);
            }
        }
        spectral::idft(spec)
    };
    let assemble = |smooth: Vec<f64>, order: usize| {
        let mut vals = smooth;
        for (k, v) in vals.iter_mut().enumerate() {
            let x = grid.node(k);
            for &(z, a1) in &peel {
                *v += a1 * carrier::p_resolvent(ksq, x - z, order);
            }
        }
        let mut out = GridFunction::from_values(grid.clone(), vals);
        for &z in f.kinks() {
            out.add_kink(z);
        }
        out
    };
    (assemble(v_smooth, 0), assemble(vx_smooth, 1))
}

/// `(kappa^2 - d^2/dx^2) f`. Meaningful for data that is at least C^2 in the
/// resolved sense; curvature and third-derivative breaks at kink marks are
/// peeled so that resolvent outputs round-trip cleanly.
pub fn forward(kappa: Kappa, f: &GridFunction) -> GridFunction {
    let grid = f.grid().clone();
    let len = grid.len();
    let ksq = kappa.sq();
    let mut work = f.values().to_vec();
    let mut peel: Vec<(f64, f64, f64)> = Vec::new();
    for &z in f.kinks() {
        let Some((_, j2, j3)) = estimate_jumps(&grid, &work, z) else {
            continue;
        };
        let b2 = j2 / 2.0;
        let b3 = j3 / 2.0;
        for (k, w) in work.iter_mut().enumerate() {
            let t = grid.node(k) - z;
            *w -= b2 * carrier::c2(t, 0) + b3 * carrier::c3(t, 0);
        }
        peel.push((z, b2, b3));
    }
    let mut vals = spectral::apply_multiplier(&work, len, |w| ksq + w * w);
    for (k, v) in vals.iter_mut().enumerate() {
        let x = grid.node(k);
        for &(z, b2, b3) in &peel {
            let t = x - z;
            *v += b2 * carrier::c2_forward(ksq, t) + b3 * carrier::c3_forward(ksq, t);
        }
    }
    let mut out = GridFunction::from_values(grid, vals);
    for &z in f.kinks() {
        out.add_kink(z);
    }
    out
}

/// `(1 - d^2/dx^2)^{-1} (4 - d^2/dx^2)^{-1} f`, evaluated by composition.
/// Must agree with the partial-fraction form
/// `(1/3)(1-dxx)^{-1} f - (1/3)(4-dxx)^{-1} f` to near machine precision.
pub fn composed_inverse(f: &GridFunction) -> GridFunction {
    inverse(Kappa::One, &inverse(Kappa::Two, f))
}

/// Partial-fraction route for the same operator; kept as the cross-check
/// oracle for `composed_inverse`.
pub fn composed_inverse_partial_fraction(f: &GridFunction) -> GridFunction {
    let a = inverse(Kappa::One, f);
    let b = inverse(Kappa::Two, f);
    a.zip(&b, |x, y| (x - y) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use std::sync::Arc;

    fn grid() -> Arc<Grid> {
        Grid::new(40.0, 1 << 14).unwrap()
    }

    fn peakon(grid: &Arc<Grid>, c: f64, z: f64) -> GridFunction {
        GridFunction::from_fn_with_kinks(grid.clone(), |x| c * (-(x - z).abs()).exp(), &[z])
    }

    #[test]
    fn smooth_peakon_closed_form() {
        // (4 - dxx)^{-1} of the peakon is (c/3)e^{-|x|} - (c/6)e^{-2|x|}
        let g = grid();
        for &(c, z) in &[(1.0, 0.0), (2.0, 5.0), (3.0, -12.5)] {
            let v = inverse(Kappa::Two, &peakon(&g, c, z));
            let exact = GridFunction::from_fn(g.clone(), |x| {
                let a = (x - z).abs();
                c / 3.0 * (-a).exp() - c / 6.0 * (-2.0 * a).exp()
            });
            let err = v.zip(&exact, |a, b| a - b).sup_norm();
            assert!(err < 1e-8, "c={c} z={z} err={err}");
        }
    }

    #[test]
    fn kernel_self_value() {
        // value at the translate center: 1/3 - 1/6 = 1/6
        let g = grid();
        let z = g.node(10_000);
        let v = inverse(Kappa::Two, &peakon(&g, 1.0, z));
        assert!((v.eval(z) - (1.0 / 3.0 - 1.0 / 6.0)).abs() < 1e-8);
    }

    #[test]
    fn kappa_one_residual() {
        let g = grid();
        let f = GridFunction::from_fn_with_kinks(g.clone(), |x| (-2.0 * x.abs()).exp(), &[0.0]);
        let v = inverse(Kappa::One, &f);
        // closed form (2/3)e^{-|x|} - (1/3)e^{-2|x|}, value 1/3 at 0
        assert!((v.eval(0.0) - 1.0 / 3.0).abs() < 1e-8);
        let back = forward(Kappa::One, &v);
        let err = back.zip(&f, |a, b| a - b).sup_norm();
        assert!(err < 1e-6, "round trip err {err}");
    }

    #[test]
    fn forward_of_constant_is_scaled() {
        let g = grid();
        let one = GridFunction::from_fn(g, |_| 1.0);
        let out = forward(Kappa::One, &one);
        assert!(out.zip(&one, |a, b| a - b).sup_norm() < 1e-12);
    }

    #[test]
    fn forward_recovers_peakon_from_smooth_peakon() {
        let g = grid();
        let c = 1.0;
        let rho = GridFunction::from_fn_with_kinks(
            g.clone(),
            |x| c / 3.0 * (-x.abs()).exp() - c / 6.0 * (-2.0 * x.abs()).exp(),
            &[0.0],
        );
        let phi = forward(Kappa::Two, &rho);
        for k in (0..g.n_points()).step_by(7) {
            let x = g.node(k);
            if x.abs() < 1.0 || x.abs() > 30.0 {
                continue;
            }
            assert!((phi.values()[k] - c * (-x.abs()).exp()).abs() < 1e-6, "x={x}");
        }
        // (1 - dxx) rho = (1/2) e^{-2|x|} off the origin
        let y = forward(Kappa::One, &rho);
        for k in (0..g.n_points()).step_by(7) {
            let x = g.node(k);
            if x.abs() < 1.0 || x.abs() > 30.0 {
                continue;
            }
            assert!((y.values()[k] - 0.5 * (-2.0 * x.abs()).exp()).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn round_trip_smooth() {
        let g = grid();
        let f = GridFunction::from_fn(g, |x| (-0.02 * x * x).exp() * (0.5 * x).cos());
        for kappa in [Kappa::One, Kappa::Two] {
            let back = forward(kappa, &inverse(kappa, &f));
            let rel = back.zip(&f, |a, b| a - b).sup_norm() / f.sup_norm();
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn composition_orders_and_partial_fraction_agree() {
        let g = grid();
        let f = GridFunction::from_fn(g.clone(), |x| (-0.05 * (x - 3.0).powi(2)).exp());
        let a = composed_inverse(&f);
        let b = inverse(Kappa::Two, &inverse(Kappa::One, &f));
        let c = composed_inverse_partial_fraction(&f);
        let scale = a.sup_norm();
        assert!(a.zip(&b, |x, y| x - y).sup_norm() / scale < 1e-12);
        assert!(a.zip(&c, |x, y| x - y).sup_norm() / scale < 1e-12);
        // peakon input as well
        let p = peakon(&g, 1.0, 0.0);
        let ap = composed_inverse(&p);
        let cp = composed_inverse_partial_fraction(&p);
        assert!(ap.zip(&cp, |x, y| x - y).sup_norm() / ap.sup_norm() < 1e-12);
        // zero maps to zero
        let zero = GridFunction::zeros(g);
        assert_eq!(composed_inverse(&zero).sup_norm(), 0.0);
    }

    #[test]
    fn positivity_preserved() {
        let g = grid();
        let f = GridFunction::from_fn_with_kinks(
            g,
            |x| (-(x + 4.0).abs()).exp() + 0.5 * (-2.0 * (x - 6.0).abs()).exp(),
            &[-4.0, 6.0],
        );
        for kappa in [Kappa::One, Kappa::Two] {
            let v = inverse(kappa, &f);
            assert!(v.min_value() > 0.0);
        }
    }

    #[test]
    fn smoothing_bounds() {
        // sup |(4-dxx)^{-1} f| <= ||f||_2 / (4 sqrt 2), kappa=1 analog with 1/2
        let g = grid();
        let f = GridFunction::from_fn(g, |x| (0.3 * x).sin() * (-0.01 * x * x).exp());
        let l2 = f.l2_norm();
        assert!(inverse(Kappa::Two, &f).sup_norm() <= l2 / (4.0 * std::f64::consts::SQRT_2) + 1e-12);
        assert!(inverse(Kappa::One, &f).sup_norm() <= l2 / 2.0 + 1e-12);
    }

    #[test]
    fn derivative_domination() {
        // |d/dx (4-dxx)^{-1} f| <= 2 (4-dxx)^{-1} f for f >= 0,
        // |d/dx (1-dxx)^{-1} f| <= (1-dxx)^{-1} f
        let g = grid();
        let f = GridFunction::from_fn_with_kinks(
            g,
            |x: f64| (-(x - 2.0).abs()).exp() + 0.3 * (-0.5 * (x + 7.0).powi(2)).exp(),
            &[2.0],
        );
        let (v, vx) = inverse_with_derivative(Kappa::Two, &f);
        let margin = v.zip(&vx, |v, vx| 2.0 * v - vx.abs()).min_value();
        assert!(margin > -1e-10, "margin {margin}");
        let (h, hx) = inverse_with_derivative(Kappa::One, &f);
        let margin = h.zip(&hx, |h, hx| h - hx.abs()).min_value();
        assert!(margin > -1e-10, "margin {margin}");
    }
}
