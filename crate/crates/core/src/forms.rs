//! Differential form germs on the orthonormal coframe `(ω¹, ω², ω³)`.
//!
//! A form of degree `k` stores one coefficient per strictly increasing
//! multi-index, encoded as a bitmask (`ω¹ = 1`, `ω² = 2`, `ω³ = 4`).
//! Coefficients are either scalar jets ([`RForm`]) or fiber triples of jets
//! on `(E1, E2, E3)` ([`EForm`]). All jets are expanded at the form's
//! basepoint.

use crate::error::{Error, Result};
use crate::halfspace::HPoint;
use crate::jet::{Jet, MAX_ORDER};
use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, Mul, Neg, Sub};

/// Multi-indices of each degree in storage order.
pub const MASKS: [&[u8]; 4] = [&[0], &[1, 2, 4], &[3, 5, 6], &[7]];

pub fn count(degree: usize) -> usize {
    MASKS[degree].len()
}

pub fn slot(mask: u8) -> usize {
    match mask {
        0 | 1 | 3 | 7 => 0,
        2 | 5 => 1,
        4 | 6 => 2,
        _ => unreachable!("invalid multi-index mask {mask}"),
    }
}

fn parity(n: u32) -> i32 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `ω^j ∧ ω^I = sign · ω^{I ∪ j}`.
pub fn wedge_index(j: usize, mask: u8) -> Option<(i32, u8)> {
    let b = 1u8 << j;
    if mask & b != 0 {
        return None;
    }
    Some((parity((mask & (b - 1)).count_ones()), mask | b))
}

/// `i(e_j) ω^I = sign · ω^{I \ j}`.
pub fn interior_index(j: usize, mask: u8) -> Option<(i32, u8)> {
    let b = 1u8 << j;
    if mask & b == 0 {
        return None;
    }
    Some((parity((mask & (b - 1)).count_ones()), mask ^ b))
}

/// `ω^I ∧ ω^J = sign · ω^{I ∪ J}`.
pub fn merge_index(a: u8, b: u8) -> Option<(i32, u8)> {
    if a & b != 0 {
        return None;
    }
    let mut inv = 0;
    for i in 0..3 {
        if a & (1 << i) != 0 {
            inv += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    Some((parity(inv), a | b))
}

/// `*ω^I = sign · ω^{I^c}` for the orthonormal coframe.
pub fn hodge_index(mask: u8) -> (i32, u8) {
    let sign = match mask {
        2 | 5 => -1,
        _ => 1,
    };
    (sign, 7 ^ mask)
}

/// Replaces the factor `ω^i` of `ω^I` by `ω^k`.
fn replace_index(mask: u8, i: usize, k: usize) -> Option<(i32, u8)> {
    let rest = mask ^ (1 << i);
    if rest & (1 << k) != 0 {
        return None;
    }
    let (lo, hi) = if i < k { (i, k) } else { (k, i) };
    let between = (rest >> (lo + 1)) & ((1u8 << (hi - lo - 1)) - 1);
    Some((parity(between.count_ones()), rest | (1 << k)))
}

/// Levi-Civita connection of the half-space in the frame `e_i = t ∂_i`:
/// `∇_{e_j} e_k = Σ_i Γ[j][k][i] e_i`.
pub const GAMMA: [[[f64; 3]; 3]; 3] = [
    [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
    [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]],
    [[0.0; 3], [0.0; 3], [0.0; 3]],
];

/// Coefficient type of a form: a scalar jet or a fiber triple of jets.
pub trait Coeff<T: Real>:
    Copy + std::fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<Complex<T>, Output = Self>
{
    fn zero(order: usize) -> Self;
    fn order(&self) -> usize;
    fn map_jets(&self, f: impl Fn(&Jet<T>) -> Jet<T>) -> Self;
    fn jets(&self) -> &[Jet<T>];
    /// Action of `∇_{e_j}` on the frame of the coefficient bundle.
    fn fiber_connection(&self, j: usize) -> Self;
}

impl<T: Real> Coeff<T> for Jet<T> {
    fn zero(order: usize) -> Self {
        Jet::zero(order)
    }
    fn order(&self) -> usize {
        Jet::order(self)
    }
    fn map_jets(&self, f: impl Fn(&Jet<T>) -> Jet<T>) -> Self {
        f(self)
    }
    fn jets(&self) -> &[Jet<T>] {
        std::slice::from_ref(self)
    }
    fn fiber_connection(&self, _j: usize) -> Self {
        Jet::zero(self.order())
    }
}

/// Fiber coordinates `(a1, a2, a3)` on `(E1, E2, E3)` as jets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fiber<T>(pub [Jet<T>; 3]);

impl<T: Real> Fiber<T> {
    pub fn constant(a: [Complex<T>; 3]) -> Self {
        Fiber(a.map(Jet::constant))
    }

    pub fn value(&self) -> [Complex<T>; 3] {
        self.0.map(|j| j.value())
    }

    /// Applies a constant complex matrix acting on fiber coordinates.
    pub fn apply(&self, m: &[[Complex<T>; 3]; 3]) -> Self {
        let order = Coeff::order(self);
        Fiber(std::array::from_fn(|i| {
            let mut acc = Jet::zero(order);
            for k in 0..3 {
                if m[i][k] != Complex::new(T::zero(), T::zero()) {
                    acc += self.0[k] * m[i][k];
                }
            }
            acc
        }))
    }

    pub fn conj(&self) -> Self {
        Fiber(self.0.map(|j| j.conj()))
    }

    /// Real part of every coordinate, i.e. the projection to the span of
    /// the `E_i` (value part).
    pub fn re(&self) -> Self {
        Fiber(self.0.map(|j| j.re()))
    }

    pub fn im(&self) -> Self {
        Fiber(self.0.map(|j| j.im()))
    }
}

impl<T: Real> Add for Fiber<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fiber(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl<T: Real> Sub for Fiber<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fiber(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl<T: Real> Neg for Fiber<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Fiber(self.0.map(|j| -j))
    }
}

impl<T: Real> Mul<Complex<T>> for Fiber<T> {
    type Output = Self;
    fn mul(self, c: Complex<T>) -> Self {
        Fiber(self.0.map(|j| j * c))
    }
}

impl<T: Real> Coeff<T> for Fiber<T> {
    fn zero(order: usize) -> Self {
        Fiber([Jet::zero(order); 3])
    }
    fn order(&self) -> usize {
        self.0.iter().map(|j| j.order()).min().unwrap()
    }
    fn map_jets(&self, f: impl Fn(&Jet<T>) -> Jet<T>) -> Self {
        Fiber(self.0.each_ref().map(f))
    }
    fn jets(&self) -> &[Jet<T>] {
        &self.0
    }
    fn fiber_connection(&self, j: usize) -> Self {
        let order = Coeff::order(self);
        Fiber(std::array::from_fn(|i| {
            let mut acc = Jet::zero(order);
            for k in 0..3 {
                let g = GAMMA[j][k][i];
                if g != 0.0 {
                    acc += self.0[k].scale_re(T::lit(g));
                }
            }
            acc
        }))
    }
}

/// A form germ of a fixed degree at a basepoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Form<T, C> {
    degree: usize,
    base: HPoint<T>,
    coef: [C; 3],
}

/// Bundle-valued forms (coefficients in the bundle of Killing fields).
pub type EForm<T> = Form<T, Fiber<T>>;
/// Complex scalar forms.
pub type RForm<T> = Form<T, Jet<T>>;

impl<T: Real, C: Coeff<T>> Form<T, C> {
    pub fn zero(degree: usize, base: HPoint<T>, order: usize) -> Self {
        assert!(degree <= 3, "form degree must be at most 3");
        Form { degree, base, coef: [C::zero(order); 3] }
    }

    /// Builds a form from one coefficient per multi-index.
    pub fn from_fn(degree: usize, base: HPoint<T>, mut f: impl FnMut(u8) -> C) -> Self {
        let mut out = Self::zero(degree, base, MAX_ORDER);
        for &m in MASKS[degree] {
            out.coef[slot(m)] = f(m);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &HPoint<T> {
        &self.base
    }

    pub fn order(&self) -> usize {
        MASKS[self.degree].iter().map(|&m| self.coef[slot(m)].order()).min().unwrap()
    }

    pub fn get(&self, mask: u8) -> &C {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        &self.coef[slot(mask)]
    }

    pub fn set(&mut self, mask: u8, c: C) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        self.coef[slot(mask)] = c;
    }

    pub fn masks(&self) -> &'static [u8] {
        MASKS[self.degree]
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (u8, &C)> {
        MASKS[self.degree].iter().map(move |&m| (m, &self.coef[slot(m)]))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = *self;
        for &m in MASKS[self.degree] {
            out.coef[slot(m)] = f(&self.coef[slot(m)]);
        }
        out
    }

    pub fn require_order(&self, n: usize) -> Result<()> {
        let o = self.order();
        if o < n {
            return Err(Error::InsufficientOrder { required: n, available: o });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        assert_eq!(self.base, other.base, "adding forms at different basepoints");
    }

    /// `ω^j ∧ α`.
    pub fn wedge_coframe(&self, j: usize) -> Self {
        assert!(self.degree < 3);
        let mut out = Self::zero(self.degree + 1, self.base, self.order());
        for &m in MASKS[self.degree] {
            if let Some((s, n)) = wedge_index(j, m) {
                let c = self.coef[slot(m)];
                let cur = out.coef[slot(n)];
                out.coef[slot(n)] = if s > 0 { cur + c } else { cur - c };
            }
        }
        out
    }

    /// `i(e_j) α`.
    pub fn interior(&self, j: usize) -> Self {
        assert!(self.degree > 0);
        let mut out = Self::zero(self.degree - 1, self.base, self.order());
        for &m in MASKS[self.degree] {
            if let Some((s, n)) = interior_index(j, m) {
                let c = self.coef[slot(m)];
                let cur = out.coef[slot(n)];
                out.coef[slot(n)] = if s > 0 { cur + c } else { cur - c };
            }
        }
        out
    }

    /// Applies `e_j = t ∂_j` to every coefficient (order drops by one).
    pub fn frame_derivative(&self, j: usize) -> Self {
        let t = Jet::variable(2, self.base.t);
        self.map(|c| c.map_jets(|a| t * a.d(j)))
    }

    /// Covariant derivative `∇_{e_j}` on both the form and coefficient
    /// factors.
    pub fn nabla(&self, j: usize) -> Self {
        let mut out = self.frame_derivative(j);
        for &m in MASKS[self.degree] {
            let c = self.coef[slot(m)];
            out.coef[slot(m)] = out.coef[slot(m)] + c.fiber_connection(j);
        }
        // ∇_{e_j} ω^i = -Σ_k Γ[j][k][i] ω^k
        for &m in MASKS[self.degree] {
            let c = self.coef[slot(m)];
            for i in 0..3 {
                if m & (1 << i) == 0 {
                    continue;
                }
                for k in 0..3 {
                    let g = GAMMA[j][k][i];
                    if g == 0.0 {
                        continue;
                    }
                    if let Some((s, n)) = replace_index(m, i, k) {
                        let f = Complex::new(T::lit(-g * s as f64), T::zero());
                        out.coef[slot(n)] = out.coef[slot(n)] + c * f;
                    }
                }
            }
        }
        out
    }

    pub fn hodge(&self) -> Self {
        let mut out = Self::zero(3 - self.degree, self.base, self.order());
        for &m in MASKS[self.degree] {
            let (s, n) = hodge_index(m);
            let c = self.coef[slot(m)];
            out.coef[slot(n)] = if s > 0 { c } else { -c };
        }
        out
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|x| *x * c)
    }

    /// Multiplies every coefficient by a scalar jet.
    pub fn mul_jet(&self, f: &Jet<T>) -> Self {
        self.map(|c| c.map_jets(|a| *a * *f))
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|c| c.map_jets(|a| a.truncate(order)))
    }

    /// Largest modulus over all coefficient values at the basepoint.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for (_, c) in self.coefficients() {
            for j in c.jets() {
                m = m.max(j.value().norm());
            }
        }
        m
    }

    /// Largest coefficient modulus over all known Taylor coefficients.
    pub fn max_abs_jet(&self) -> T {
        let mut m = T::zero();
        for (_, c) in self.coefficients() {
            for j in c.jets() {
                m = m.max(j.max_abs());
            }
        }
        m
    }

    /// Largest difference of coefficient values at the basepoint.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!(self.degree, other.degree);
        let mut m = T::zero();
        for &mask in MASKS[self.degree] {
            let (a, b) = (self.coef[slot(mask)], other.coef[slot(mask)]);
            for (x, y) in a.jets().iter().zip(b.jets()) {
                m = m.max((x.value() - y.value()).norm());
            }
        }
        m
    }

    /// Pointwise norm squared: the sum of squared moduli of all coefficients.
    pub fn norm_sq(&self) -> T {
        let mut s = T::zero();
        for (_, c) in self.coefficients() {
            for j in c.jets() {
                s += j.value().norm_sqr();
            }
        }
        s
    }
}

impl<T: Real, C: Coeff<T>> Add for Form<T, C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check_same(&o);
        let mut out = self;
        for &m in MASKS[self.degree] {
            out.coef[slot(m)] = self.coef[slot(m)] + o.coef[slot(m)];
        }
        out
    }
}

impl<T: Real, C: Coeff<T>> Sub for Form<T, C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.check_same(&o);
        let mut out = self;
        for &m in MASKS[self.degree] {
            out.coef[slot(m)] = self.coef[slot(m)] - o.coef[slot(m)];
        }
        out
    }
}

impl<T: Real, C: Coeff<T>> Neg for Form<T, C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -*c)
    }
}

/// `(-1)^k`.
pub fn sign_power<T: Real>(k: usize) -> Complex<T> {
    Complex::new(if k.is_multiple_of(2) { T::one() } else { -T::one() }, T::zero())
}

impl<T: Real> EForm<T> {
    /// A section (degree-0 form).
    pub fn section(base: HPoint<T>, a: Fiber<T>) -> Self {
        Self::from_fn(0, base, |_| a)
    }

    /// Constant-coefficient form from fiber values indexed by multi-index.
    pub fn constant(degree: usize, base: HPoint<T>, f: impl Fn(u8) -> [Complex<T>; 3]) -> Self {
        Self::from_fn(degree, base, |m| Fiber::constant(f(m)))
    }

    /// Applies a constant matrix on fiber coordinates to every coefficient.
    pub fn apply(&self, m: &[[Complex<T>; 3]; 3]) -> Self {
        self.map(|c| c.apply(m))
    }

    pub fn re(&self) -> Self {
        self.map(|c| c.re())
    }

    pub fn im(&self) -> Self {
        self.map(|c| c.im())
    }

    /// Fiber coordinates of the coefficient of `mask` at the basepoint.
    pub fn value(&self, mask: u8) -> [Complex<T>; 3] {
        self.get(mask).value()
    }

    /// Imaginary-unit multiple `iα` (the curl of every coefficient).
    pub fn times_i(&self) -> Self {
        self.scale(Complex::new(T::zero(), T::one()))
    }

    /// The complex 3 × 3 matrix `N[k][j] = coefficient of E_k ⊗ ω^j` of a
    /// 1-form, evaluated at the basepoint.
    pub fn matrix_value(&self) -> [[Complex<T>; 3]; 3] {
        assert_eq!(self.degree, 1);
        let mut n = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for j in 0..3 {
            let v = self.value(1 << j);
            for k in 0..3 {
                n[k][j] = v[k];
            }
        }
        n
    }

    /// Trace of a 1-form viewed as a section of `Hom(TM, TM) ⊗ C`.
    pub fn trace_jet(&self) -> Jet<T> {
        assert_eq!(self.degree, 1);
        self.get(1).0[0] + self.get(2).0[1] + self.get(4).0[2]
    }
}

impl<T: Real> RForm<T> {
    pub fn function(base: HPoint<T>, f: Jet<T>) -> Self {
        Self::from_fn(0, base, |_| f)
    }

    /// Exterior derivative `d̂ = Σ ω^j ∧ ∇_j`.
    pub fn dhat(&self) -> Result<Self> {
        if self.degree >= 3 {
            return Err(Error::DegreeOutOfRange(self.degree));
        }
        self.require_order(1)?;
        let mut out = Self::zero(self.degree + 1, self.base, self.order() - 1);
        for j in 0..3 {
            out = out + self.nabla(j).wedge_coframe(j);
        }
        Ok(out)
    }

    /// Codifferential `δ̂ = -Σ i(e_j) ∇_j`.
    pub fn deltahat(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange(0));
        }
        self.require_order(1)?;
        let mut out = Self::zero(self.degree - 1, self.base, self.order() - 1);
        for j in 0..3 {
            out = out - self.nabla(j).interior(j);
        }
        Ok(out)
    }

    /// Hodge Laplacian `Δ̂ = d̂δ̂ + δ̂d̂`.
    pub fn laplacian_hat(&self) -> Result<Self> {
        self.require_order(2)?;
        let mut out = Self::zero(self.degree, self.base, self.order() - 2);
        if self.degree > 0 {
            out = out + self.deltahat()?.dhat()?;
        }
        if self.degree < 3 {
            out = out + self.dhat()?.deltahat()?;
        }
        Ok(out)
    }

    /// Wedge product `β ∧ α` of this scalar form with a coefficient form.
    pub fn wedge<C: Coeff<T>>(&self, alpha: &Form<T, C>) -> Result<Form<T, C>> {
        if self.base != alpha.base {
            return Err(Error::BasepointMismatch);
        }
        let deg = self.degree + alpha.degree;
        if deg > 3 {
            return Err(Error::DegreeOutOfRange(deg));
        }
        let order = self.order().min(alpha.order());
        let mut out = Form::<T, C>::zero(deg, self.base, order);
        for &a in MASKS[self.degree] {
            for &b in MASKS[alpha.degree] {
                if let Some((s, n)) = merge_index(a, b) {
                    let term = alpha.coef[slot(b)].map_jets(|x| *x * self.coef[slot(a)]);
                    let cur = out.coef[slot(n)];
                    out.coef[slot(n)] = if s > 0 { cur + term } else { cur - term };
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn pt() -> HPoint<f64> {
        HPoint::new(0.2, -0.3, 0.7).unwrap()
    }

    fn unit(mask: u8, degree: usize) -> RForm<f64> {
        RForm::from_fn(degree, pt(), |m| Jet::real(if m == mask { 1.0 } else { 0.0 }))
    }

    #[test]
    fn hodge_rules() {
        let s = unit(1, 1).hodge();
        assert_eq!(s.get(6).value(), Complex64::new(1.0, 0.0));
        let s = unit(2, 1).hodge();
        assert_eq!(s.get(5).value(), Complex64::new(-1.0, 0.0));
        for deg in 0..4 {
            for &m in MASKS[deg] {
                let f = unit(m, deg);
                assert_eq!(f.hodge().hodge(), f);
            }
        }
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_index(0, 2), Some((1, 3)));
        assert_eq!(wedge_index(1, 1), Some((-1, 3)));
        assert_eq!(wedge_index(1, 5), Some((-1, 7)));
        assert_eq!(wedge_index(0, 1), None);
        assert_eq!(interior_index(1, 7), Some((-1, 5)));
        assert_eq!(merge_index(2, 5), Some((-1, 7)));
        assert_eq!(merge_index(4, 3), Some((1, 7)));
    }

    #[test]
    fn replace_signs() {
        // ω1∧ω2 with ω2 -> ω3 gives ω1∧ω3
        assert_eq!(replace_index(3, 1, 2), Some((1, 5)));
        // ω2∧ω3 with ω3 -> ω1 gives ω2∧ω1 = -ω1∧ω2
        assert_eq!(replace_index(6, 2, 0), Some((-1, 3)));
        assert_eq!(replace_index(3, 0, 1), None);
    }

    #[test]
    fn coframe_derivatives() {
        let d1 = unit(1, 1).dhat().unwrap();
        assert_eq!(d1.get(5).value(), Complex64::new(1.0, 0.0));
        assert_eq!(d1.get(3).value(), Complex64::new(0.0, 0.0));
        let d2 = unit(2, 1).dhat().unwrap();
        assert_eq!(d2.get(6).value(), Complex64::new(1.0, 0.0));
        assert_eq!(unit(4, 1).dhat().unwrap().max_abs(), 0.0);
        let d12 = unit(3, 2).dhat().unwrap();
        assert_eq!(d12.get(7).value(), Complex64::new(-2.0, 0.0));
        assert_eq!(unit(5, 2).dhat().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn dhat_squares_to_zero() {
        let p = pt();
        let [x, y, t] = p.coordinate_jets();
        let f = x * y * t + t.powi(3) * x;
        let df = RForm::function(p, f).dhat().unwrap();
        assert!(df.dhat().unwrap().max_abs_jet() < 1e-13);
    }

    #[test]
    fn scalar_laplacian_matches_coordinates() {
        let p = pt();
        let [x, _, t] = p.coordinate_jets();
        let f = x * x * t + t.ln();
        let lap = RForm::function(p, f).laplacian_hat().unwrap();
        let sj = crate::field::ScalarJet::new(p, f);
        assert!((lap.get(0).value() - sj.laplacian_hat().unwrap()).norm() < 1e-13);
    }

    #[test]
    fn delta_of_function_is_error() {
        assert_eq!(unit(0, 0).deltahat(), Err(Error::DegreeOutOfRange(0)));
    }
}
