//! Closed forms for the exponential kink carriers.
//!
//! A function with an isolated derivative discontinuity at `z` can be split
//! into a smooth remainder plus a combination of three decaying carriers
//! centered at `z`:
//!
//! * `p(t)  = e^{-|t|}`            carries a unit-slope-jump of -2,
//! * `c2(t) = (t|t|/2) e^{-|t|}`   carries a second-derivative jump of +2,
//! * `c3(t) = (|t|^3/6) e^{-|t|}`  carries a third-derivative jump of +2,
//!
//! with all lower-order jumps zero. The remainder is then smooth enough for
//! spectral work, and the carriers map through quadrature, differentiation
//! and the Helmholtz resolvents in closed form. Sign convention for a jump:
//! `[f^(q)] = f^(q)(z+) - f^(q)(z-)`.

/// Carrier values and derivatives up to order 4 at offset `t` from the kink.
/// Odd-symmetric orders evaluate to the two-sided average (zero) at `t = 0`.
pub fn p(t: f64, order: usize) -> f64 {
    let a = t.abs();
    let s = sign(t);
    let e = (-a).exp();
    match order {
        0 => e,
        1 => -s * e,
        2 => e,
        3 => -s * e,
        4 => e,
        _ => unreachable!("carrier derivatives go up to order 4"),
    }
}

pub fn c2(t: f64, order: usize) -> f64 {
    let a = t.abs();
    let s = sign(t);
    let e = (-a).exp();
    match order {
        0 => s * (a * a / 2.0) * e,
        1 => (a - a * a / 2.0) * e,
        2 => s * (1.0 - 2.0 * a + a * a / 2.0) * e,
        3 => (-3.0 + 3.0 * a - a * a / 2.0) * e,
        4 => s * (6.0 - 4.0 * a + a * a / 2.0) * e,
        _ => unreachable!("carrier derivatives go up to order 4"),
    }
}

pub fn c3(t: f64, order: usize) -> f64 {
    let a = t.abs();
    let s = sign(t);
    let e = (-a).exp();
    match order {
        0 => a * a * a / 6.0 * e,
        1 => s * (a * a / 2.0 - a * a * a / 6.0) * e,
        2 => (a - a * a + a * a * a / 6.0) * e,
        3 => s * (1.0 - 3.0 * a + 1.5 * a * a - a * a * a / 6.0) * e,
        4 => (-4.0 + 6.0 * a - 2.0 * a * a + a * a * a / 6.0) * e,
        _ => unreachable!("carrier derivatives go up to order 4"),
    }
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Exact integrals of the carriers over `[-d, d]` for a kink at `z`.
/// `z` must be well inside the box; the tails account for the truncation.
pub fn box_integral_p(d: f64, z: f64) -> f64 {
    2.0 - (-(d - z)).exp() - (-(d + z)).exp()
}

pub fn box_integral_c2(d: f64, z: f64) -> f64 {
    let g = |big_t: f64| 1.0 - (-big_t).exp() * (1.0 + big_t + big_t * big_t / 2.0);
    g(d - z) - g(d + z)
}

pub fn box_integral_c3(d: f64, z: f64) -> f64 {
    let h = |big_t: f64| {
        1.0 - (-big_t).exp() * (1.0 + big_t + big_t * big_t / 2.0 + big_t * big_t * big_t / 6.0)
    };
    h(d - z) + h(d + z)
}

/// `(kappa^2 - d^2/dx^2)^{-1} p` on the line, and its first derivative.
///
/// For kappa = 2 this is the smooth-peakon profile
/// `(1/3)e^{-|t|} - (1/6)e^{-2|t|}`; for kappa = 1 it is
/// `(1/2)(1+|t|)e^{-|t|}`.
pub fn p_resolvent(kappa_sq: f64, t: f64, order: usize) -> f64 {
    let a = t.abs();
    let s = sign(t);
    let e1 = (-a).exp();
    if kappa_sq == 4.0 {
        let e2 = (-2.0 * a).exp();
        match order {
            0 => e1 / 3.0 - e2 / 6.0,
            1 => -s * (e1 - e2) / 3.0,
            _ => unreachable!("resolvent derivatives beyond order 1 are unused"),
        }
    } else {
        debug_assert_eq!(kappa_sq, 1.0);
        match order {
            0 => 0.5 * (1.0 + a) * e1,
            1 => -s * (a / 2.0) * e1,
            _ => unreachable!("resolvent derivatives beyond order 1 are unused"),
        }
    }
}

/// `(kappa^2 - d^2/dx^2) c2` and `(kappa^2 - d^2/dx^2) c3`, pointwise.
pub fn c2_forward(kappa_sq: f64, t: f64) -> f64 {
    kappa_sq * c2(t, 0) - c2(t, 2)
}

pub fn c3_forward(kappa_sq: f64, t: f64) -> f64 {
    kappa_sq * c3(t, 0) - c3(t, 2)
}

/// Gaussian mollification of `p`: `(G_w * e^{-|.|})(t)` for a unit-mass
/// Gaussian of standard deviation `w`. Smooth, even, mass-preserving.
pub fn p_mollified(t: f64, w: f64) -> f64 {
    // e^{w^2/2} [ e^{-t} Phi(t/w - w) + e^{t} Phi(-t/w - w) ], Phi = normal CDF.
    let half = |t: f64| {
        let q = t / w - w;
        if -q > 38.0 {
            0.0
        } else {
            (w * w / 2.0 - t).exp() * normal_cdf(q)
        }
    };
    half(t) + half(-t)
}

fn normal_cdf(q: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-q / std::f64::consts::SQRT_2)
}
