//! Coordinate functionals on representations: complex length, trace, their
//! derivatives along paths of Möbius transformations, and the dimension
//! counts for the deformation space.

use crate::error::{Error, Result};
use crate::halfspace::Mobius;
use crate::killing::KillingField;
use num_complex::Complex64;
use std::f64::consts::PI;

const PARABOLIC_TOL: f64 = 1e-12;

type Mat = [[Complex64; 2]; 2];

fn sign_normalized_trace(tr: Complex64) -> Complex64 {
    if tr.re < 0.0 || (tr.re == 0.0 && tr.im < 0.0) {
        -tr
    } else {
        tr
    }
}

/// Complex length from a trace, on the principal branch: `Re L ≥ 0`,
/// `Im L ∈ (−π, π]`, and `Im L ≥ 0` when `L` is purely imaginary.
pub fn length_from_trace(tr: Complex64) -> Complex64 {
    let tr = sign_normalized_trace(tr);
    if (tr - 2.0).norm() < PARABOLIC_TOL {
        return Complex64::new(0.0, 0.0);
    }
    let mut l = ((tr - 2.0) / 4.0).sqrt().asinh() * 4.0;
    if l.re < 0.0 {
        l = -l;
    }
    if l.re.abs() <= 1e-14 * (1.0 + l.im.abs()) {
        l = Complex64::new(0.0, l.im.abs());
    }
    wrap_imaginary(l)
}

fn wrap_imaginary(mut l: Complex64) -> Complex64 {
    while l.im > PI {
        l.im -= 2.0 * PI;
    }
    while l.im <= -PI {
        l.im += 2.0 * PI;
    }
    l
}

/// The complex length `L` with `tr M = ±2 cosh(L/2)`. Parabolics have
/// length zero.
pub fn complex_length(m: &Mobius<f64>) -> Result<Complex64> {
    if m.distance(&Mobius::identity()) < PARABOLIC_TOL {
        return Err(Error::IdentityLength);
    }
    Ok(length_from_trace(m.trace()))
}

pub fn trace_from_length(l: Complex64) -> Complex64 {
    (l / 2.0).cosh() * 2.0
}

/// Derivative of the trace of `z ↦ z + β` under the deformation given by
/// the Killing field: `−β p₂`.
pub fn trace_derivative_parabolic(beta: Complex64, field: &KillingField<f64>) -> Complex64 {
    -beta * field.p2
}

fn mat_mul(p: &Mat, q: &Mat) -> Mat {
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    r
}

/// `exp(X)` for a traceless 2 × 2 matrix:
/// `cosh(μ) I + (sinh(μ)/μ) X` with `μ² = −det X`.
pub fn exp_traceless(x: &Mat) -> Mat {
    let mu2 = -(x[0][0] * x[1][1] - x[0][1] * x[1][0]);
    let mu = mu2.sqrt();
    let (c, s) = if mu.norm() < 1e-4 {
        // series in μ² to double precision
        let m = mu2;
        (
            1.0 + m / 2.0 + m * m / 24.0 + m * m * m / 720.0 + m * m * m * m / 40320.0,
            1.0 + m / 6.0 + m * m / 120.0 + m * m * m / 5040.0 + m * m * m * m / 362880.0,
        )
    } else {
        (mu.cosh(), mu.sinh() / mu)
    };
    let one = Complex64::new(1.0, 0.0);
    [[c * one + s * x[0][0], s * x[0][1]], [s * x[1][0], c * one + s * x[1][1]]]
}

/// The path `s ↦ exp(s X) γ₀` for the matrix `X` of a Killing field.
pub fn killing_path(field: &KillingField<f64>, gamma0: &Mobius<f64>) -> impl Fn(f64) -> Result<Mobius<f64>> {
    let x = field.matrix();
    let g = gamma0.matrix();
    move |s| {
        let sx = x.map(|row| row.map(|e| e * s));
        Mobius::from_matrix(mat_mul(&exp_traceless(&sx), &g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Trace,
    Length,
}

/// Options for [`path_derivatives`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOptions {
    pub h: f64,
    pub min_h: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions { h: 1e-2, min_h: 1e-12 }
    }
}

/// Chooses the sign of `tr` closest to `reference`.
fn align(tr: Complex64, reference: Complex64) -> Result<Complex64> {
    let plus = (tr - reference).norm();
    let minus = (tr + reference).norm();
    if reference.norm() < 1e-8 {
        // ±tr are indistinguishable near trace zero
        return Err(Error::Branch("trace too close to zero to fix its sign".into()));
    }
    Ok(if plus <= minus { tr } else { -tr })
}

/// The value of `kind` along the path at `s`, continued from `reference`.
fn sample(
    path: &impl Fn(f64) -> Result<Mobius<f64>>,
    kind: PathKind,
    s: f64,
    tr0: Complex64,
    l0: Complex64,
) -> Result<Complex64> {
    let tr = align(path(s)?.trace(), tr0)?;
    match kind {
        PathKind::Trace => Ok(tr),
        PathKind::Length => {
            let l = length_from_trace(tr);
            // continue the branch of L through ±L + 2πik
            let mut best = l;
            for sign in [1.0, -1.0] {
                for k in -2..=2 {
                    let cand = l * sign + Complex64::new(0.0, 2.0 * PI * k as f64);
                    if (cand - l0).norm() < (best - l0).norm() {
                        best = cand;
                    }
                }
            }
            Ok(best)
        }
    }
}

/// Derivative at `s = 0` of the trace or complex length along a path, by
/// central differences with two Richardson steps.
pub fn path_derivatives(
    path: impl Fn(f64) -> Result<Mobius<f64>>,
    kind: PathKind,
    opts: StepOptions,
) -> Result<Complex64> {
    if opts.h < opts.min_h || !(opts.h > 0.0) {
        return Err(Error::StepUnderflow);
    }
    let g0 = path(0.0)?;
    let tr0 = sign_normalized_trace(g0.trace());
    let l0 = match kind {
        PathKind::Trace => Complex64::new(0.0, 0.0),
        PathKind::Length => {
            let l = complex_length(&g0)?;
            if l.norm() == 0.0 {
                return Err(Error::InvalidParameter("length derivative at a parabolic".into()));
            }
            l
        }
    };
    let central = |h: f64| -> Result<Complex64> {
        let fp = sample(&path, kind, h, tr0, l0)?;
        let fm = sample(&path, kind, -h, tr0, l0)?;
        Ok((fp - fm) / (2.0 * h))
    };
    let h = opts.h;
    let d1 = central(h)?;
    let d2 = central(h / 2.0)?;
    let d4 = central(h / 4.0)?;
    Ok((d4 * 64.0 - d2 * 20.0 + d1) / 45.0)
}

/// Which dimension count to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionMode {
    /// `t − 3χ + 3`.
    LowerBound,
    /// `n + m − 3χ`.
    Smooth,
}

pub fn expected_dimension(n_cone: i64, m_cusp: i64, t_tori: i64, chi: i64, mode: DimensionMode) -> i64 {
    match mode {
        DimensionMode::LowerBound => t_tori - 3 * chi + 3,
        DimensionMode::Smooth => n_cone + m_cusp - 3 * chi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(l: Complex64) -> Mobius<f64> {
        Mobius::new((l / 2.0).exp(), c(0.0, 0.0), c(0.0, 0.0), (-l / 2.0).exp()).unwrap()
    }

    #[test]
    fn lengths() {
        assert!((complex_length(&diag(c(0.7, 0.0))).unwrap() - c(0.7, 0.0)).norm() < 1e-12);
        assert!((complex_length(&diag(c(0.7, 2.5))).unwrap() - c(0.7, 2.5)).norm() < 1e-12);
        assert_eq!(complex_length(&Mobius::translation(c(1.0, 0.0))).unwrap(), c(0.0, 0.0));
        assert_eq!(Mobius::translation(c(1.0, 0.0)).trace(), c(2.0, 0.0));
        let rot = diag(c(0.0, 1.2));
        assert!((complex_length(&rot).unwrap() - c(0.0, 1.2)).norm() < 1e-12);
        assert_eq!(complex_length(&Mobius::identity()), Err(Error::IdentityLength));
    }

    #[test]
    fn trace_round_trip() {
        for l in [c(0.3, 0.1), c(2.0, -3.0), c(0.0, 2.0), c(1.5, 3.1)] {
            let m = diag(l);
            let tr = trace_from_length(complex_length(&m).unwrap());
            let t = m.trace();
            assert!((tr - t).norm().min((tr + t).norm()) < 1e-10);
        }
    }

    #[test]
    fn exp_matches_series() {
        let x = [[c(0.1, 0.2), c(-0.3, 0.5)], [c(0.7, 0.0), c(-0.1, -0.2)]];
        let e = exp_traceless(&x);
        // truncated Taylor series
        let mut term = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let mut sum = term;
        for k in 1..30 {
            term = mat_mul(&term, &x).map(|r| r.map(|v| v / k as f64));
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!((e[i][j] - sum[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn path_derivative_examples() {
        let v = KillingField::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let g = Mobius::translation(c(1.0, 0.0));
        let d = path_derivatives(killing_path(&v, &g), PathKind::Trace, StepOptions::default()).unwrap();
        assert!((d - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((trace_derivative_parabolic(c(1.0, 0.0), &v) - d).norm() < 1e-10);
        let lox = |s: f64| Ok(diag(c(0.8 + 0.3 * s, 0.4 - 0.1 * s)));
        let dl = path_derivatives(lox, PathKind::Length, StepOptions::default()).unwrap();
        assert!((dl - c(0.3, -0.1)).norm() < 1e-10);
        let constant = |_s: f64| Ok(diag(c(0.8, 0.0)));
        assert_eq!(path_derivatives(constant, PathKind::Trace, StepOptions::default()).unwrap(), c(0.0, 0.0));
        let tiny = StepOptions { h: 1e-14, min_h: 1e-12 };
        assert_eq!(path_derivatives(constant, PathKind::Trace, tiny), Err(Error::StepUnderflow));
    }

    #[test]
    fn dimensions() {
        assert_eq!(expected_dimension(0, 0, 1, 0, DimensionMode::LowerBound), 4);
        assert_eq!(expected_dimension(1, 0, 0, -1, DimensionMode::Smooth), 4);
        assert_eq!(expected_dimension(0, 0, 0, 0, DimensionMode::Smooth), 0);
    }
}
