//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use hypdef_core::field::FieldExpr;
use hypdef_core::forms::{EForm, Fiber, MASKS};
use hypdef_core::horosphere::BoundaryField;
use hypdef_core::{HPoint, Jet};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

type JMat = [[Jet<f64>; 3]; 3];

/// `A(q)`: Killing coefficients `(p0, p1, p2)` to fiber coordinates, as
/// jets in `(x, y, t)`.
fn flat_frame(p: &HPoint<f64>) -> JMat {
    let [x, y, t] = p.coordinate_jets();
    let i = c(0.0, 1.0);
    let w = x + y * i;
    let ti = t.recip();
    let one = Jet::real(1.0);
    let zero = Jet::zero(4);
    let r1 = [ti, w * ti, w * w * ti - t];
    let r2 = [ti * (-i), w * ti * (-i), (w * w * ti + t) * (-i)];
    let r3 = [zero, one, w * c(2.0, 0.0)];
    [r1, r2, r3]
}

fn jinv(m: &JMat) -> JMat {
    let cof = |i: usize, j: usize| {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let (cc, d) = ((j + 1) % 3, (j + 2) % 3);
        m[a][cc] * m[b][d] - m[a][d] * m[b][cc]
    };
    let det = m[0][0] * cof(0, 0) + m[0][1] * cof(0, 1) + m[0][2] * cof(0, 2);
    let r = det.recip();
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) * r))
}

fn adjoint(m: &JMat) -> JMat {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].conj()))
}

fn apply(m: &JMat, v: &[Jet<f64>; 3]) -> [Jet<f64>; 3] {
    std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// Ordinary exterior derivative on coordinate forms `Σ β_I dx^I`, stored by
/// bitmask.
fn coordinate_d(beta: &[(u8, [Jet<f64>; 3])], degree: usize) -> Vec<(u8, [Jet<f64>; 3])> {
    let mut out = Vec::new();
    for &target in MASKS[degree + 1] {
        let mut acc: Option<[Jet<f64>; 3]> = None;
        for j in 0..3 {
            if target & (1 << j) == 0 {
                continue;
            }
            let src = target & !(1 << j);
            // dx^j ∧ dx^src = (-1)^{#(src below j)} dx^target
            let below = (src & ((1 << j) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            let b = &beta.iter().find(|(m, _)| *m == src).unwrap().1;
            let term: [Jet<f64>; 3] = std::array::from_fn(|k| b[k].d(j) * c(sign, 0.0));
            acc = Some(match acc {
                None => term,
                Some(a) => std::array::from_fn(|k| a[k] + term[k]),
            });
        }
        out.push((target, acc.unwrap()));
    }
    out
}

fn flat_derivative(a: &EForm<f64>, to_flat: &JMat, from_flat: &JMat) -> EForm<f64> {
    let p = *a.base();
    let k = a.degree();
    let t = Jet::variable(2, p.t);
    let tk = t.powi(k as i32).recip();
    let beta: Vec<(u8, [Jet<f64>; 3])> =
        a.coefficients().map(|(m, f)| (m, apply(to_flat, &f.0).map(|j| j * tk))).collect();
    let db = coordinate_d(&beta, k);
    let tk1 = t.powi(k as i32 + 1);
    let mut out = EForm::zero(k + 1, p, a.order() - 1);
    for (m, v) in db {
        out.set(m, Fiber(apply(from_flat, &v.map(|j| j * tk1))));
    }
    out
}

/// `d` through the flat trivialization by Killing fields.
pub fn flat_d(a: &EForm<f64>) -> EForm<f64> {
    let m = flat_frame(a.base());
    flat_derivative(a, &jinv(&m), &m)
}

/// `∂` through the conjugate-dual trivialization `A^{-*}`.
pub fn flat_del(a: &EForm<f64>) -> EForm<f64> {
    let m = flat_frame(a.base());
    let adj = adjoint(&m);
    flat_derivative(a, &adj, &jinv(&adj))
}

/// `δ = (-1)^k ∗∂∗` with the flat `∂`.
pub fn flat_delta(a: &EForm<f64>) -> EForm<f64> {
    let k = a.degree();
    let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    flat_del(&a.hodge()).hodge().scale(c(s, 0.0))
}

pub const FD_H: f64 = 1e-5;

/// Central-difference gradient `(f_x, f_y, f_t)` of an expression.
pub fn fd_gradient(f: &FieldExpr, p: &HPoint<f64>) -> [Complex64; 3] {
    let h = FD_H;
    let ev = |dx: f64, dy: f64, dt: f64| f.eval(c(p.x + dx, p.y + dy), p.t + dt);
    [
        (ev(h, 0.0, 0.0) - ev(-h, 0.0, 0.0)) / (2.0 * h),
        (ev(0.0, h, 0.0) - ev(0.0, -h, 0.0)) / (2.0 * h),
        (ev(0.0, 0.0, h) - ev(0.0, 0.0, -h)) / (2.0 * h),
    ]
}

/// Central-difference `t f_t − t²(f_xx + f_yy + f_tt)`.
pub fn fd_laplacian(f: &FieldExpr, p: &HPoint<f64>) -> Complex64 {
    // second differences lose more digits, so a larger step is used
    let h = 1e-3;
    let ev = |dx: f64, dy: f64, dt: f64| f.eval(c(p.x + dx, p.y + dy), p.t + dt);
    let f0 = ev(0.0, 0.0, 0.0);
    let second = |a: Complex64, b: Complex64| (a - f0 * 2.0 + b) / (h * h);
    let lap = second(ev(h, 0.0, 0.0), ev(-h, 0.0, 0.0))
        + second(ev(0.0, h, 0.0), ev(0.0, -h, 0.0))
        + second(ev(0.0, 0.0, h), ev(0.0, 0.0, -h));
    let ft = (ev(0.0, 0.0, h) - ev(0.0, 0.0, -h)) / (2.0 * h);
    ft * p.t - lap * (p.t * p.t)
}

/// A convex surface `t = 1 + ½((k₁−1)u² + (k₂−1)v²)` with principal
/// curvatures `(k₁, k₂)` at `(0,0,1)`, and its exact normal projection.
pub struct Quadric {
    pub k1: f64,
    pub k2: f64,
}

impl Quadric {
    fn surface(&self, u: f64, v: f64) -> [f64; 3] {
        [u, v, 1.0 + 0.5 * ((self.k1 - 1.0) * u * u + (self.k2 - 1.0) * v * v)]
    }

    /// Euclidean unit normal pointing towards `t → 0`.
    fn normal(&self, u: f64, v: f64) -> [f64; 3] {
        let n = [(self.k1 - 1.0) * u, (self.k2 - 1.0) * v, -1.0];
        let l = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        n.map(|x| x / l)
    }

    /// Point at distance `s` along the normal geodesic from `(u, v)`, and
    /// the geodesic's endpoint on the boundary.
    fn flow(&self, u: f64, v: f64, s: f64) -> ([f64; 3], Complex64) {
        let p = self.surface(u, v);
        let n = self.normal(u, v);
        let nh = (n[0] * n[0] + n[1] * n[1]).sqrt();
        let base = c(p[0], p[1]);
        if nh < 1e-300 {
            return ([p[0], p[1], p[2] * (-s).exp()], base);
        }
        let e = c(n[0] / nh, n[1] / nh);
        let phi = n[2].atan2(nh);
        let theta = phi - std::f64::consts::FRAC_PI_2;
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let zeta = c(0.0, s.exp());
        let g = (zeta * ch + sh) / (zeta * (-sh) + ch);
        let point = base + e * (g.re * p[2]);
        let end = base + e * (-(ch / sh) * p[2]);
        ([point.re, point.im, g.im * p[2]], end)
    }

    /// `Π(q)`: the endpoint of the normal geodesic through `q`.
    pub fn projection(&self, q: [f64; 3]) -> Complex64 {
        let mut x = [q[0], q[1], -q[2].ln()];
        for _ in 0..50 {
            let (f0, _) = self.flow(x[0], x[1], x[2]);
            let r = [f0[0] - q[0], f0[1] - q[1], f0[2] - q[2]];
            if r.iter().map(|a| a.abs()).fold(0.0, f64::max) < 1e-15 {
                break;
            }
            let h = 1e-7;
            let mut jac = [[0.0; 3]; 3];
            for k in 0..3 {
                let mut xp = x;
                xp[k] += h;
                let mut xm = x;
                xm[k] -= h;
                let (fp, _) = self.flow(xp[0], xp[1], xp[2]);
                let (fm, _) = self.flow(xm[0], xm[1], xm[2]);
                for i in 0..3 {
                    jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
                }
            }
            let dx = solve3(jac, r);
            for k in 0..3 {
                x[k] -= dx[k];
            }
        }
        self.flow(x[0], x[1], x[2]).1
    }

    /// `d̂G₃` at `(0,0,t)` with `G₃(q) = f''(w) − f''(Π(q))`, by central
    /// differences.
    pub fn dg3(&self, f: &BoundaryField, t: f64) -> [Complex64; 3] {
        let f2 = f.derivative(2, 0);
        let g3 = |q: [f64; 3]| f2.eval(c(q[0], q[1]), 0.0) - f2.eval(self.projection(q), 0.0);
        let h = FD_H;
        std::array::from_fn(|k| {
            let mut qp = [0.0, 0.0, t];
            let mut qm = qp;
            qp[k] += h;
            qm[k] -= h;
            (g3(qp) - g3(qm)) * (t / (2.0 * h))
        })
    }
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    std::array::from_fn(|k| {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        det(mk) / d
    })
}

/// Definitional inner product of two coordinate vectors in the hyperbolic
/// metric.
pub fn hyp_inner(p: &HPoint<f64>, u: [f64; 3], v: [f64; 3]) -> f64 {
    (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) / (p.t * p.t)
}

/// Largest difference over every Taylor coefficient both forms know.
pub fn jet_diff(a: &EForm<f64>, b: &EForm<f64>) -> f64 {
    (*a - *b).max_abs_jet()
}

/// The value field of a Killing field as a vector-field germ in the
/// orthonormal frame, from the infinitesimal Möbius action
/// `(p(w) − conj(p₂) t², t Re p'(w))` in coordinates.
pub fn killing_value_field(k: &hypdef_core::KillingField<f64>, p: HPoint<f64>) -> hypdef_core::VectorField<f64> {
    let [x, y, t] = p.coordinate_jets();
    let w = x + y * c(0.0, 1.0);
    let pw = Jet::constant(k.p0) + w * k.p1 + w * w * k.p2;
    let dpw = Jet::constant(k.p1) + w * (k.p2 * 2.0);
    let h = pw - t * t * k.p2.conj();
    let ti = t.recip();
    hypdef_core::VectorField::new(p, [h.re() * ti, h.im() * ti, dpw.re()])
}

pub type Mat2 = [[Complex64; 2]; 2];

fn mat_mul(p: &Mat2, q: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| p[i][0] * q[0][j] + p[i][1] * q[1][j]))
}

/// `exp(X)` by a 30-term Taylor series after scaling by `2⁻⁸`.
pub fn mat_exp(x: &Mat2) -> Mat2 {
    let s = 1.0 / 256.0;
    let xs: Mat2 = x.map(|r| r.map(|e| e * s));
    let mut term: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let mut sum = term;
    for n in 1..30 {
        term = mat_mul(&term, &xs).map(|r| r.map(|e| e / n as f64));
        sum = std::array::from_fn(|i| std::array::from_fn(|j| sum[i][j] + term[i][j]));
    }
    for _ in 0..8 {
        sum = mat_mul(&sum, &sum);
    }
    sum
}

/// `d/ds tr(exp(sX) γ₀)` at `s = 0` by a five-point central difference.
pub fn matrix_path_trace_derivative(x: &Mat2, gamma0: &Mat2) -> Complex64 {
    let tr = |s: f64| {
        let m = mat_mul(&mat_exp(&x.map(|r| r.map(|e| e * s))), gamma0);
        m[0][0] + m[1][1]
    };
    let h = 1e-3;
    (tr(-2.0 * h) - tr(-h) * 8.0 + tr(h) * 8.0 - tr(2.0 * h)) / (12.0 * h)
}
