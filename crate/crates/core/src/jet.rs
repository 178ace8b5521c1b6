//! Truncated multivariate Taylor series ("jets") in three real variables.
//!
//! A [`Jet`] stores the Taylor coefficients `∂^α f / α!` of a complex valued
//! function of `(x, y, t)` for every multi-index with `|α| ≤ 4`. Arithmetic
//! is exact on truncated series, so every partial derivative through the
//! jet's order is propagated without finite differences.
//!
//! Differentiation lowers the order by one: a jet of order `n` knows the
//! function through total degree `n` only, and coefficients above the order
//! are kept at zero.

use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub const MAX_ORDER: usize = 4;
/// Number of multi-indices `(i, j, k)` with `i + j + k ≤ 4`.
pub const NCOEF: usize = 35;
const NPAIRS: usize = 210;

const fn build_exps() -> [[u8; 3]; NCOEF] {
    let mut out = [[0u8; 3]; NCOEF];
    let mut n = 0;
    let mut deg = 0;
    while deg <= MAX_ORDER {
        let mut i = deg as i32;
        while i >= 0 {
            let mut j = deg as i32 - i;
            while j >= 0 {
                let k = deg as i32 - i - j;
                out[n] = [i as u8, j as u8, k as u8];
                n += 1;
                j -= 1;
            }
            i -= 1;
        }
        deg += 1;
    }
    out
}

const EXPS: [[u8; 3]; NCOEF] = build_exps();

const fn build_index() -> [[[u8; 5]; 5]; 5] {
    let mut out = [[[u8::MAX; 5]; 5]; 5];
    let mut n = 0;
    while n < NCOEF {
        let e = EXPS[n];
        out[e[0] as usize][e[1] as usize][e[2] as usize] = n as u8;
        n += 1;
    }
    out
}

const INDEX: [[[u8; 5]; 5]; 5] = build_index();

const fn degree_of(e: [u8; 3]) -> usize {
    (e[0] + e[1] + e[2]) as usize
}

const fn build_pairs() -> [[u8; 3]; NPAIRS] {
    let mut out = [[0u8; 3]; NPAIRS];
    let mut n = 0;
    let mut a = 0;
    while a < NCOEF {
        let mut b = 0;
        while b < NCOEF {
            let ea = EXPS[a];
            let eb = EXPS[b];
            if degree_of(ea) + degree_of(eb) <= MAX_ORDER {
                let c = INDEX[(ea[0] + eb[0]) as usize][(ea[1] + eb[1]) as usize][(ea[2] + eb[2]) as usize];
                out[n] = [a as u8, b as u8, c];
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const PAIRS: [[u8; 3]; NPAIRS] = build_pairs();

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Position of the multi-index `e` in the coefficient table, if `|e| ≤ 4`.
pub fn index_of(e: [usize; 3]) -> Option<usize> {
    if e.iter().sum::<usize>() > MAX_ORDER {
        return None;
    }
    Some(INDEX[e[0]][e[1]][e[2]] as usize)
}

/// All multi-indices of total degree at most `order`, in storage order.
pub fn multi_indices(order: usize) -> impl Iterator<Item = [usize; 3]> {
    EXPS.iter().map(|e| [e[0] as usize, e[1] as usize, e[2] as usize]).filter(move |e| e.iter().sum::<usize>() <= order)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    coef: [Complex<T>; NCOEF],
    order: usize,
}

impl<T: Real> Jet<T> {
    pub fn zero(order: usize) -> Self {
        Jet { coef: [Complex::new(T::zero(), T::zero()); NCOEF], order: order.min(MAX_ORDER) }
    }

    pub fn constant(c: Complex<T>) -> Self {
        let mut j = Self::zero(MAX_ORDER);
        j.coef[0] = c;
        j
    }

    pub fn real(x: T) -> Self {
        Self::constant(Complex::new(x, T::zero()))
    }

    /// The coordinate function `x_var` expanded at `value`.
    pub fn variable(var: usize, value: T) -> Self {
        let mut j = Self::real(value);
        let mut e = [0usize; 3];
        e[var] = 1;
        j.coef[index_of(e).unwrap()] = Complex::new(T::one(), T::zero());
        j
    }

    /// Builds a jet from Taylor coefficients given in storage order.
    pub fn from_taylor(coef: &[Complex<T>], order: usize) -> Self {
        let mut j = Self::zero(order);
        for (n, c) in coef.iter().enumerate().take(NCOEF) {
            if degree_of(EXPS[n]) <= j.order {
                j.coef[n] = *c;
            }
        }
        j
    }

    /// Builds a jet from a table of partial derivatives `∂^α f`.
    pub fn from_partials(partials: impl Fn([usize; 3]) -> Complex<T>, order: usize) -> Self {
        let mut j = Self::zero(order);
        for e in multi_indices(j.order) {
            let n = index_of(e).unwrap();
            j.coef[n] = partials(e) / T::lit(FACT[e[0]] * FACT[e[1]] * FACT[e[2]]);
        }
        j
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.coef[0]
    }

    pub fn taylor(&self, e: [usize; 3]) -> Complex<T> {
        match index_of(e) {
            Some(n) if e.iter().sum::<usize>() <= self.order => self.coef[n],
            _ => Complex::new(T::zero(), T::zero()),
        }
    }

    /// The partial derivative `∂x^i ∂y^j ∂t^k f` at the expansion point.
    pub fn partial(&self, e: [usize; 3]) -> Complex<T> {
        self.taylor(e) * T::lit(FACT[e[0].min(4)] * FACT[e[1].min(4)] * FACT[e[2].min(4)])
    }

    pub fn coefficients(&self) -> &[Complex<T>; NCOEF] {
        &self.coef
    }

    /// Lowers the order, discarding coefficients above it.
    pub fn truncate(mut self, order: usize) -> Self {
        let order = order.min(self.order);
        for n in 0..NCOEF {
            if degree_of(EXPS[n]) > order {
                self.coef[n] = Complex::new(T::zero(), T::zero());
            }
        }
        self.order = order;
        self
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = t).
    pub fn d(&self, var: usize) -> Self {
        let mut out = Self::zero(self.order.saturating_sub(1));
        if self.order == 0 {
            return out;
        }
        for n in 0..NCOEF {
            let e = EXPS[n];
            if degree_of(e) > out.order {
                continue;
            }
            let mut up = [e[0] as usize, e[1] as usize, e[2] as usize];
            up[var] += 1;
            let m = index_of(up).unwrap();
            out.coef[n] = self.coef[m] * T::lit(up[var] as f64);
        }
        out
    }

    /// Wirtinger derivative `∂/∂z = ½(∂x − i∂y)`.
    pub fn dz(&self) -> Self {
        let half = T::lit(0.5);
        (self.d(0) - self.d(1) * Complex::new(T::zero(), T::one())) * Complex::new(half, T::zero())
    }

    /// Wirtinger derivative `∂/∂z̄ = ½(∂x + i∂y)`.
    pub fn dzbar(&self) -> Self {
        let half = T::lit(0.5);
        (self.d(0) + self.d(1) * Complex::new(T::zero(), T::one())) * Complex::new(half, T::zero())
    }

    /// `∂z^a ∂z̄^b ∂t^c f` at the expansion point.
    pub fn wirtinger(&self, a: usize, b: usize, c: usize) -> Complex<T> {
        let mut j = *self;
        for _ in 0..a {
            j = j.dz();
        }
        for _ in 0..b {
            j = j.dzbar();
        }
        for _ in 0..c {
            j = j.d(2);
        }
        if a + b + c > self.order {
            return Complex::new(T::zero(), T::zero());
        }
        j.value()
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in out.coef.iter_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn re(&self) -> Self {
        let mut out = *self;
        for c in out.coef.iter_mut() {
            *c = Complex::new(c.re, T::zero());
        }
        out
    }

    pub fn im(&self) -> Self {
        let mut out = *self;
        for c in out.coef.iter_mut() {
            *c = Complex::new(c.im, T::zero());
        }
        out
    }

    pub fn scale_re(&self, s: T) -> Self {
        let mut out = *self;
        for c in out.coef.iter_mut() {
            *c *= s;
        }
        out
    }

    /// Largest coefficient modulus among the known coefficients.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for n in 0..NCOEF {
            if degree_of(EXPS[n]) <= self.order {
                m = m.max(self.coef[n].norm());
            }
        }
        m
    }

    /// Applies a univariate function given its Taylor coefficients
    /// `f^(n)(a)/n!`, `n = 0..=4`, at `a = self.value()`.
    pub fn compose_series(&self, series: [Complex<T>; 5]) -> Self {
        let mut delta = *self;
        delta.coef[0] = Complex::new(T::zero(), T::zero());
        let mut out = Self::constant(series[0]).truncate(self.order);
        let mut pow = Self::constant(Complex::new(T::one(), T::zero())).truncate(self.order);
        for c in series.iter().skip(1) {
            pow = pow * delta;
            out += pow * *c;
        }
        out
    }

    pub fn recip(&self) -> Self {
        let a = self.value();
        let inv = a.inv();
        let mut series = [Complex::new(T::zero(), T::zero()); 5];
        let mut p = inv;
        for (n, s) in series.iter_mut().enumerate() {
            *s = if n % 2 == 0 { p } else { -p };
            p *= inv;
        }
        self.compose_series(series)
    }

    pub fn ln(&self) -> Self {
        let a = self.value();
        let inv = a.inv();
        let mut series = [a.ln(), inv, inv, inv, inv];
        let mut p = inv;
        for n in 2..5 {
            p *= inv;
            let sign = if n % 2 == 0 { -T::one() } else { T::one() };
            series[n] = p * (sign / T::lit(n as f64));
        }
        self.compose_series(series)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut series = [e; 5];
        for (n, s) in series.iter_mut().enumerate() {
            *s = e / T::lit(FACT[n]);
        }
        self.compose_series(series)
    }

    pub fn sinh(&self) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        (self.exp() - (-*self).exp()) * half
    }

    pub fn cosh(&self) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        (self.exp() + (-*self).exp()) * half
    }

    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut out = Self::constant(Complex::new(T::one(), T::zero())).truncate(self.order);
        let mut base = *self;
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                out = out * base;
            }
            base = base * base;
            k >>= 1;
        }
        out
    }

    /// Re-expands the jet in the Wirtinger variables `(δz, δz̄, δt)`.
    ///
    /// The result is stored with the same layout: slot `(a, b, c)` holds the
    /// coefficient of `δz^a δz̄^b δt^c`, so `∂z^a ∂z̄^b ∂t^c f = a! b! c!`
    /// times that coefficient.
    pub fn to_wirtinger(&self) -> Self {
        let half = T::lit(0.5);
        let z = Self::variable(0, T::zero());
        let zb = Self::variable(1, T::zero());
        let x = (z + zb) * Complex::new(half, T::zero());
        let y = (z - zb) * Complex::new(T::zero(), -half);
        self.substitute(&x, &y)
    }

    /// Inverse of [`Jet::to_wirtinger`].
    pub fn from_wirtinger(&self) -> Self {
        let x = Self::variable(0, T::zero());
        let y = Self::variable(1, T::zero());
        let z = x + y * Complex::new(T::zero(), T::one());
        let zb = x - y * Complex::new(T::zero(), T::one());
        self.substitute(&z, &zb)
    }

    fn substitute(&self, u: &Self, v: &Self) -> Self {
        let w = Self::variable(2, T::zero());
        let pows = |j: &Self| {
            let mut p = [Self::constant(Complex::new(T::one(), T::zero())); 5];
            for n in 1..5 {
                p[n] = p[n - 1] * *j;
            }
            p
        };
        let (pu, pv, pw) = (pows(u), pows(v), pows(&w));
        let mut out = Self::zero(MAX_ORDER);
        for n in 0..NCOEF {
            let e = EXPS[n];
            if degree_of(e) > self.order || self.coef[n] == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let mono = pu[e[0] as usize] * pv[e[1] as usize] * pw[e[2] as usize];
            out += mono * self.coef[n];
        }
        out.truncate(self.order)
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real> AddAssign for Jet<T> {
    fn add_assign(&mut self, rhs: Self) {
        let order = self.order.min(rhs.order);
        for n in 0..NCOEF {
            self.coef[n] = self.coef[n] + rhs.coef[n];
        }
        if order < self.order {
            *self = self.truncate(order);
        }
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<T: Real> SubAssign for Jet<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self += -rhs;
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.coef.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut out = Self::zero(order);
        for p in PAIRS.iter() {
            let c = p[2] as usize;
            if degree_of(EXPS[c]) <= order {
                out.coef[c] += self.coef[p[0] as usize] * rhs.coef[p[1] as usize];
            }
        }
        out
    }
}

impl<T: Real> Mul<Complex<T>> for Jet<T> {
    type Output = Self;
    fn mul(mut self, rhs: Complex<T>) -> Self {
        for c in self.coef.iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl<T: Real> Add<Complex<T>> for Jet<T> {
    type Output = Self;
    fn add(mut self, rhs: Complex<T>) -> Self {
        self.coef[0] += rhs;
        self
    }
}

impl<T: Real> std::iter::Sum for Jet<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(MAX_ORDER), |a, b| a + b)
    }
}
