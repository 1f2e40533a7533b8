//! C∞ cutoff functions shared by symbols, witnesses and quadrature amplitudes.

fn psi(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth step: 0 for `u ≤ 0`, 1 for `u ≥ 1`, C∞ in between.
pub fn smooth_step(u: f64) -> f64 {
    let a = psi(u);
    let b = psi(1.0 - u);
    if a + b == 0.0 {
        return if u >= 0.5 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// `exp(1 − 1/(1 − u²))` on `|u| < 1`, zero outside; equals 1 at the origin.
pub fn bump(u: f64) -> f64 {
    let r = 1.0 - u * u;
    if r <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / r).exp()
    }
}

/// Equal to 1 on `|u| ≤ inner`, decays smoothly to 0 at `|u| = 1`.
pub fn plateau(u: f64, inner: f64) -> f64 {
    let a = u.abs();
    if a <= inner {
        1.0
    } else if a >= 1.0 {
        0.0
    } else {
        1.0 - smooth_step((a - inner) / (1.0 - inner))
    }
}
