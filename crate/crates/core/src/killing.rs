//! Killing fields of hyperbolic space as quadratic polynomial vector fields
//! `(p0 + p1 z + p2 z²) ∂z` on the boundary, their values at points of the
//! half-space, and the fiber coordinates of the bundle of Killing fields.
//!
//! A fiber element at `p` has complex coordinates `(a1, a2, a3)` on the
//! frame `(E1, E2, E3)`, where `E_i` is the Killing field with value `e_i`
//! and zero curl at `p`. The real part of `a` is the value of the Killing
//! field at `p` and `-Im a` its curl.

use crate::error::{Error, Result};
use crate::halfspace::{HPoint, Mobius};
use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KillingField<T> {
    pub p0: Complex<T>,
    pub p1: Complex<T>,
    pub p2: Complex<T>,
}

impl<T: Real> KillingField<T> {
    pub fn new(p0: Complex<T>, p1: Complex<T>, p2: Complex<T>) -> Self {
        KillingField { p0, p1, p2 }
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        KillingField { p0: z, p1: z, p2: z }
    }

    pub fn coefficients(&self) -> [Complex<T>; 3] {
        [self.p0, self.p1, self.p2]
    }

    /// `p(z)`.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.p0 + (self.p1 + self.p2 * z) * z
    }

    /// `p'(z)`.
    pub fn deriv(&self, z: Complex<T>) -> Complex<T> {
        self.p1 + self.p2 * z * T::lit(2.0)
    }

    /// Polynomial bracket `[p, q] = p q' - q p'`.
    pub fn bracket(&self, q: &Self) -> Self {
        let two = T::lit(2.0);
        KillingField {
            p0: self.p0 * q.p1 - q.p0 * self.p1,
            p1: (self.p0 * q.p2 - q.p0 * self.p2) * two,
            p2: self.p1 * q.p2 - q.p1 * self.p2,
        }
    }

    /// The traceless matrix `X` whose flow `exp(sX)` generates the field.
    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        let half = T::lit(0.5);
        [[self.p1 * half, self.p0], [-self.p2, -self.p1 * half]]
    }

    pub fn from_matrix(x: [[Complex<T>; 2]; 2]) -> Self {
        KillingField { p0: x[0][1], p1: x[0][0] - x[1][1], p2: -x[1][0] }
    }

    /// Push-forward by `M`, i.e. `M X M⁻¹` on matrices.
    pub fn adjoint(&self, m: &Mobius<T>) -> Self {
        let x = self.matrix();
        let a = m.matrix();
        // the exact inverse of this representative; `Mobius::inverse` may
        // pick the other sign
        let inv = [[m.d, -m.b], [-m.c, m.a]];
        let prod = |p: [[Complex<T>; 2]; 2], q: [[Complex<T>; 2]; 2]| {
            let mut r = [[Complex::new(T::zero(), T::zero()); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
                }
            }
            r
        };
        Self::from_matrix(prod(prod(a, x), inv))
    }

    /// Value of the Killing field at `p` as a coordinate vector
    /// `(dx, dy, dt)`, computed from the infinitesimal Möbius action.
    pub fn value_coords(&self, p: &HPoint<T>) -> [T; 3] {
        let w = p.w();
        let h = self.eval(w) - self.p2.conj() * (p.t * p.t);
        [h.re, h.im, p.t * self.deriv(w).re]
    }

    /// Value at `p` in the orthonormal frame.
    pub fn value_frame(&self, p: &HPoint<T>) -> [T; 3] {
        let v = self.value_coords(p);
        [v[0] / p.t, v[1] / p.t, v[2] / p.t]
    }

    /// Curl at `p` in the orthonormal frame; the curl of a Killing field is
    /// the Killing field multiplied by `i`.
    pub fn curl_frame(&self, p: &HPoint<T>) -> [T; 3] {
        (*self * Complex::new(T::zero(), T::one())).value_frame(p)
    }
}

impl<T: Real> Add for KillingField<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        KillingField { p0: self.p0 + o.p0, p1: self.p1 + o.p1, p2: self.p2 + o.p2 }
    }
}

impl<T: Real> Sub for KillingField<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        KillingField { p0: self.p0 - o.p0, p1: self.p1 - o.p1, p2: self.p2 - o.p2 }
    }
}

impl<T: Real> Neg for KillingField<T> {
    type Output = Self;
    fn neg(self) -> Self {
        KillingField { p0: -self.p0, p1: -self.p1, p2: -self.p2 }
    }
}

impl<T: Real> Mul<Complex<T>> for KillingField<T> {
    type Output = Self;
    fn mul(self, c: Complex<T>) -> Self {
        KillingField { p0: self.p0 * c, p1: self.p1 * c, p2: self.p2 * c }
    }
}

/// A Killing field germ at a point, in fiber coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberElement<T> {
    pub base: HPoint<T>,
    pub a: [Complex<T>; 3],
}

impl<T: Real> FiberElement<T> {
    pub fn new(base: HPoint<T>, a: [Complex<T>; 3]) -> Self {
        FiberElement { base, a }
    }

    pub fn zero(base: HPoint<T>) -> Self {
        FiberElement { base, a: [Complex::new(T::zero(), T::zero()); 3] }
    }

    /// Fiber element with value `value` and curl `curl` (orthonormal frame).
    pub fn from_value_curl(base: HPoint<T>, value: [T; 3], curl: [T; 3]) -> Self {
        let a = std::array::from_fn(|k| Complex::new(value[k], -curl[k]));
        FiberElement { base, a }
    }

    pub fn value(&self) -> [T; 3] {
        [self.a[0].re, self.a[1].re, self.a[2].re]
    }

    pub fn curl(&self) -> [T; 3] {
        [-self.a[0].im, -self.a[1].im, -self.a[2].im]
    }

    /// Multiplication by `i`.
    pub fn curl_fiber(&self) -> Self {
        let i = Complex::new(T::zero(), T::one());
        FiberElement { base: self.base, a: self.a.map(|x| x * i) }
    }

    /// The fiber inner product `Re Σ a_k conj(b_k)`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.base != other.base {
            return Err(Error::BasepointMismatch);
        }
        Ok((0..3).fold(T::zero(), |acc, k| acc + (self.a[k] * other.a[k].conj()).re))
    }

    pub fn norm(&self) -> T {
        self.a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_diff(&self, other: &Self) -> T {
        (0..3).fold(T::zero(), |acc, k| acc.max((self.a[k] - other.a[k]).norm()))
    }

    /// The Killing field whose germ at the basepoint this is.
    pub fn to_killing(&self) -> KillingField<T> {
        let t = self.base.t;
        let w = self.base.w();
        let i = Complex::new(T::zero(), T::one());
        let half = T::lit(0.5);
        // p(w) = t (a1 + i a2) / 2, p'(w) = a3, p''(w) = -(a1 - i a2) / t
        let pw = (self.a[0] + i * self.a[1]) * (t * half);
        let dpw = self.a[2];
        let p2 = -(self.a[0] - i * self.a[1]) * (half / t);
        let p1 = dpw - p2 * w * T::lit(2.0);
        let p0 = pw - p1 * w - p2 * w * w;
        KillingField { p0, p1, p2 }
    }
}

/// Fiber coordinates of the Killing field `k` at `p`:
/// `a1 = p/t - t p''/2`, `a2 = -i p/t - i t p''/2`, `a3 = p'`.
pub fn eval_killing<T: Real>(k: &KillingField<T>, p: &HPoint<T>) -> FiberElement<T> {
    let w = p.w();
    let t = p.t;
    let i = Complex::new(T::zero(), T::one());
    let pw = k.eval(w) / t;
    let half_pp = k.p2 * t;
    FiberElement { base: *p, a: [pw - half_pp, -i * (pw + half_pp), k.deriv(w)] }
}

/// `⟨v, w⟩_x` in the closed form `Re Σ a_k conj(b_k)`.
pub fn inner_product<T: Real>(v: &KillingField<T>, w: &KillingField<T>, x: &HPoint<T>) -> T {
    eval_killing(v, x).inner(&eval_killing(w, x)).unwrap()
}

/// `⟨v(x), w(x)⟩ + ⟨iv(x), iw(x)⟩` from the values of the Killing fields as
/// tangent vectors.
pub fn inner_product_definitional<T: Real>(v: &KillingField<T>, w: &KillingField<T>, x: &HPoint<T>) -> T {
    let i = Complex::new(T::zero(), T::one());
    x.metric(v.value_coords(x), w.value_coords(x)) + x.metric((*v * i).value_coords(x), (*w * i).value_coords(x))
}

/// The Killing field with prescribed value and curl at `p`, found by
/// solving the real 6 × 6 system of the value and curl maps.
pub fn canonical_lift_point<T: Real>(value: [T; 3], curl: [T; 3], p: &HPoint<T>) -> Result<KillingField<T>> {
    let mut m = [[T::zero(); 6]; 6];
    for col in 0..6 {
        let mut c = [Complex::new(T::zero(), T::zero()); 3];
        c[col / 2] = if col % 2 == 0 { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::one()) };
        let k = KillingField::new(c[0], c[1], c[2]);
        let v = k.value_frame(p);
        let cu = k.curl_frame(p);
        for r in 0..3 {
            m[r][col] = v[r];
            m[r + 3][col] = cu[r];
        }
    }
    let inv = invert6(&m).ok_or(Error::IllConditioned(f64::INFINITY))?;
    let norm1 =
        |a: &[[T; 6]; 6]| (0..6).map(|j| (0..6).fold(T::zero(), |acc, i| acc + a[i][j].abs())).fold(T::zero(), T::max);
    let cond = norm1(&m) * norm1(&inv);
    if cond.as_f64() > 1e8 {
        return Err(Error::IllConditioned(cond.as_f64()));
    }
    let rhs = [value[0], value[1], value[2], curl[0], curl[1], curl[2]];
    let mut x = [T::zero(); 6];
    for i in 0..6 {
        for j in 0..6 {
            x[i] += inv[i][j] * rhs[j];
        }
    }
    Ok(KillingField::new(Complex::new(x[0], x[1]), Complex::new(x[2], x[3]), Complex::new(x[4], x[5])))
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert6<T: Real>(m: &[[T; 6]; 6]) -> Option<[[T; 6]; 6]> {
    let mut a = *m;
    let mut inv = [[T::zero(); 6]; 6];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = T::one();
    }
    for col in 0..6 {
        let piv = (col..6).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col] == T::zero() {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..6 {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..6 {
            if i != col {
                let f = a[i][col];
                if f != T::zero() {
                    for j in 0..6 {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[i][j] -= f * ac;
                        inv[i][j] -= f * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}
