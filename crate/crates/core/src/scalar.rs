//! Complex scalars and the circle group.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Default tolerance for unitarity, Hermiticity and unit-modulus checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default tolerance for the Schur scalar identification.
pub const SCALAR_TOL: f64 = 1e-8;

/// A complex number of modulus one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScalar(C64);

impl UnitScalar {
    pub fn new(value: C64, tol: f64) -> Option<Self> {
        ((value.norm() - 1.0).abs() <= tol).then_some(UnitScalar(value))
    }

    /// exp(2 pi i p / q)
    pub fn from_turns(p: i64, q: i64) -> Self {
        UnitScalar(turns(p, q))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

/// exp(2 pi i p / q), exact for the quarter turns.
pub fn turns(p: i64, q: i64) -> C64 {
    assert!(q != 0, "zero denominator");
    let r = p.rem_euclid(q);
    if r == 0 {
        return ONE;
    }
    if 2 * r == q {
        return C64::new(-1.0, 0.0);
    }
    if 4 * r == q {
        return C64::new(0.0, 1.0);
    }
    if 4 * r == 3 * q {
        return C64::new(0.0, -1.0);
    }
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / q as f64)
}

/// Finds p/q with q <= max_den such that `z` equals exp(2 pi i p/q) within `tol`.
pub fn snap_to_turns(z: C64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    for q in 1..=max_den {
        for p in 0..q {
            if num_integer_gcd(p, q) != 1 && !(p == 0 && q == 1) {
                continue;
            }
            if (turns(p, q) - z).norm() <= tol {
                return Some((p, q));
            }
        }
    }
    None
}

fn num_integer_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

/// Principal square root on the circle.
pub fn unit_sqrt(z: C64) -> C64 {
    C64::from_polar(1.0, z.arg() / 2.0)
}
