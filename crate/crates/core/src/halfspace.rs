//! The upper half-space model `{(x, y, t) : t > 0}` of hyperbolic space
//! and the action of `PSL(2, C)` on it and on its boundary sphere.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::Real;
use num_complex::Complex;
use std::ops::Mul;

/// A point of hyperbolic space in the upper half-space model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint<T> {
    pub x: T,
    pub y: T,
    pub t: T,
}

impl<T: Real> HPoint<T> {
    pub fn new(x: T, y: T, t: T) -> Result<Self> {
        if !(t > T::zero()) || !x.is_finite() || !y.is_finite() || !t.is_finite() {
            return Err(Error::NonPositiveHeight(t.as_f64()));
        }
        Ok(HPoint { x, y, t })
    }

    pub fn from_w(w: Complex<T>, t: T) -> Result<Self> {
        Self::new(w.re, w.im, t)
    }

    /// Boundary coordinate `w = x + iy`.
    #[inline]
    pub fn w(&self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }

    /// Coordinate jets `(x, y, t)` expanded at this point.
    pub fn coordinate_jets(&self) -> [Jet<T>; 3] {
        [Jet::variable(0, self.x), Jet::variable(1, self.y), Jet::variable(2, self.t)]
    }

    /// Jets of `z = x + iy` and `z̄` at this point.
    pub fn z_jets(&self) -> (Jet<T>, Jet<T>) {
        let [x, y, _] = self.coordinate_jets();
        let i = Complex::new(T::zero(), T::one());
        (x + y * i, x - y * i)
    }

    /// Hyperbolic inner product of two coordinate vectors at this point.
    pub fn metric(&self, u: [T; 3], v: [T; 3]) -> T {
        (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) / (self.t * self.t)
    }
}

/// The orthonormal frame `e_i = t ∂_i`, each row a coordinate vector.
pub fn frame_at<T: Real>(p: &HPoint<T>) -> [[T; 3]; 3] {
    let z = T::zero();
    [[p.t, z, z], [z, p.t, z], [z, z, p.t]]
}

pub fn hyp_distance<T: Real>(p: &HPoint<T>, q: &HPoint<T>) -> T {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let dt = p.t - q.t;
    let chord = (dx * dx + dy * dy + dt * dt).sqrt();
    let two = T::lit(2.0);
    two * (chord / (two * (p.t * q.t).sqrt())).asinh()
}

/// A point of the boundary sphere `C ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryPoint<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> BoundaryPoint<T> {
    pub fn finite(self) -> Option<Complex<T>> {
        match self {
            BoundaryPoint::Finite(z) => Some(z),
            BoundaryPoint::Infinity => None,
        }
    }
}

/// An element of `PSL(2, C)` stored as a normalized `SL(2, C)` matrix.
///
/// The representative has determinant one and its first entry of largest
/// modulus has positive real part (or zero real part and positive
/// imaginary part).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mobius<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > T::epsilon() * scale * scale) || !det.norm().is_finite() {
            return Err(Error::DegenerateMobius);
        }
        let s = det.sqrt().inv();
        Ok(Self::normalized(a * s, b * s, c * s, d * s))
    }

    fn normalized(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        let entries = [a, b, c, d];
        let mut best = 0;
        for k in 1..4 {
            if entries[k].norm() > entries[best].norm() {
                best = k;
            }
        }
        let lead = entries[best];
        let flip = lead.re < T::zero() || (lead.re == T::zero() && lead.im < T::zero());
        if flip {
            Mobius { a: -a, b: -b, c: -c, d: -d }
        } else {
            Mobius { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Mobius { a: one, b: zero, c: zero, d: one }
    }

    /// `z ↦ z + β`.
    pub fn translation(beta: Complex<T>) -> Self {
        let mut m = Self::identity();
        m.b = beta;
        m
    }

    /// `z ↦ λ z`.
    pub fn dilation(lambda: Complex<T>) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(lambda, zero, zero, one)
    }

    pub fn from_matrix(m: [[Complex<T>; 2]; 2]) -> Result<Self> {
        Self::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(self.d, -self.b, -self.c, self.a)
    }

    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    pub fn act(&self, z: Complex<T>) -> BoundaryPoint<T> {
        self.act_boundary(BoundaryPoint::Finite(z))
    }

    pub fn act_boundary(&self, z: BoundaryPoint<T>) -> BoundaryPoint<T> {
        let zero = Complex::new(T::zero(), T::zero());
        match z {
            BoundaryPoint::Infinity => {
                if self.c == zero {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == zero {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Derivative `M'(z) = 1 / (cz + d)^2`.
    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let den = self.c * z + self.d;
        (den * den).inv()
    }

    /// Poincaré extension of the boundary action to the half-space.
    pub fn act_halfspace(&self, p: &HPoint<T>) -> HPoint<T> {
        let w = p.w();
        let t2 = p.t * p.t;
        let cwd = self.c * w + self.d;
        let den = cwd.norm_sqr() + self.c.norm_sqr() * t2;
        let num = (self.a * w + self.b) * cwd.conj() + self.a * self.c.conj() * t2;
        HPoint { x: num.re / den, y: num.im / den, t: p.t / den }
    }

    /// Largest entrywise distance between representatives of `self` and
    /// `other` in `PSL(2, C)`.
    pub fn distance(&self, other: &Self) -> T {
        let plus = [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d];
        let minus = [self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d];
        let m = |v: [Complex<T>; 4]| v.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
        m(plus).min(m(minus))
    }
}

impl<T: Real> Mul for Mobius<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalized(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frame_scales_with_height() {
        let p = HPoint::new(0.0, 0.0, 2.0).unwrap();
        let f = frame_at(&p);
        assert_eq!(f[0], [2.0, 0.0, 0.0]);
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = p.metric(f[i], f[j]);
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_height() {
        assert!(HPoint::new(0.0, 0.0, 0.0).is_err());
        assert!(HPoint::new(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn vertical_distance() {
        let p = HPoint::new(0.0, 0.0, 1.0).unwrap();
        let q = HPoint::new(0.0, 0.0, std::f64::consts::E).unwrap();
        assert!((hyp_distance(&p, &q) - 1.0).abs() < 1e-14);
        assert_eq!(hyp_distance(&p, &p), 0.0);
    }

    #[test]
    fn translation_and_dilation() {
        let tau = c(0.3, 1.2);
        assert_eq!(Mobius::translation(tau).act(c(0.0, 0.0)), BoundaryPoint::Finite(tau));
        let p = HPoint::new(0.0, 0.0, 1.0).unwrap();
        let q = Mobius::translation(c(1.0, 0.0)).act_halfspace(&p);
        assert_eq!((q.x, q.y, q.t), (1.0, 0.0, 1.0));
        let q = Mobius::dilation(c(2.0, 0.0)).unwrap().act_halfspace(&p);
        assert!((q.t - 2.0).abs() < 1e-15 && q.x.abs() < 1e-15);
    }

    #[test]
    fn infinity_is_explicit() {
        let inv = Mobius::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(inv.act(c(0.0, 0.0)), BoundaryPoint::Infinity);
        assert_eq!(inv.act_boundary(BoundaryPoint::Infinity), BoundaryPoint::Finite(c(0.0, 0.0)));
    }

    #[test]
    fn identity_is_exact() {
        let p = HPoint::new(0.3, -0.7, 0.05).unwrap();
        assert_eq!(Mobius::identity().act_halfspace(&p), p);
    }

    #[test]
    fn parabolic_trace_is_plus_two() {
        let m = Mobius::new(c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert_eq!(m.trace(), c(2.0, 0.0));
    }

    #[test]
    fn degenerate_matrix_rejected() {
        let one = c(1.0, 0.0);
        assert_eq!(Mobius::new(one, one, one, one), Err(Error::DegenerateMobius));
    }
}
