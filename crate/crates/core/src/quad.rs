//! Adaptive quadrature for expectations over parameter densities.

use std::f64::consts::PI;

use crate::families::{Domain, PdfSpec, Point};

const MAX_DEPTH: u32 = 40;
/// Levels always subdivided, so symmetric integrands cannot fool the
/// first error estimate.
const MIN_DEPTH: u32 = 4;

/// ∫ₐᵇ f by adaptive Simpson with Richardson correction.
pub fn integrate(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || (MAX_DEPTH - depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// ∬ over the unit disk in polar coordinates.
pub fn integrate_disk(f: &mut impl FnMut(f64, f64) -> f64, tol: f64) -> f64 {
    let mut radial = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        r * integrate(&mut |phi| f(r * phi.cos(), r * phi.sin()), 0.0, 2.0 * PI, tol)
    };
    integrate(&mut radial, 0.0, 1.0, tol)
}

/// Expectation of `g` under `pdf`.
pub fn expectation(pdf: &PdfSpec, g: &mut impl FnMut(Point) -> f64, tol: f64) -> f64 {
    match pdf.support() {
        Domain::Interval { lower, upper } => {
            integrate(&mut |x| pdf.density(Point::line(x)) * g(Point::line(x)), lower, upper, tol)
        }
        Domain::UnitDisk => integrate_disk(&mut |x, y| g(Point::plane(x, y)), tol) / PI,
    }
}
