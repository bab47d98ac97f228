//! Small numeric helpers shared across modules.

use std::f64::consts::{PI, TAU};

/// Wrap an angle (radians) onto the principal branch `(-pi, pi]`.
///
/// Inputs on the branch cut resolve deterministically to `+pi`.
pub(crate) fn wrap_to_pi(x: f64) -> f64 {
    // f64 remainder is exact, so no precision is lost here.
    let mut r = x % TAU;
    if r > PI {
        r -= TAU;
    } else if r <= -PI {
        r += TAU;
    }
    r
}

/// `(cos, sin)` of `2*pi*x` where `x` is a phase in cycles.
///
/// Reducing the argument modulo one cycle *before* scaling by `2*pi` keeps
/// full precision even when the accumulated phase spans millions of cycles,
/// and makes the result exactly periodic in `x`.
pub(crate) fn cos_sin_cycles(x: f64) -> (f64, f64) {
    let r = x - x.round(); // r in [-0.5, 0.5]
    let a = TAU * r;
    (a.cos(), a.sin())
}

/// Euclidean distance between two 3-D points.
pub(crate) fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Median of a slice (not in place). Empty input yields `NaN`.
pub(crate) fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("median of NaN"));
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wrap_covers_principal_branch() {
        assert_relative_eq!(wrap_to_pi(0.0), 0.0);
        assert_relative_eq!(wrap_to_pi(PI + 0.1), -PI + 0.1, max_relative = 1e-12);
        assert_relative_eq!(wrap_to_pi(-PI - 0.1), PI - 0.1, max_relative = 1e-12);
        // Branch cut resolves to +pi from either side.
        assert_eq!(wrap_to_pi(PI), PI);
        assert_eq!(wrap_to_pi(-PI), PI);
    }

    #[test]
    fn cycles_are_periodic() {
        let (c0, s0) = cos_sin_cycles(0.25);
        let (c1, s1) = cos_sin_cycles(7.25);
        assert_eq!(c0, c1);
        assert_eq!(s0, s1);
        assert_relative_eq!(c0, 0.0, epsilon = 1e-15);
        assert_relative_eq!(s0, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
