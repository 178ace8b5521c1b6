//! Real vector fields in the orthonormal frame, `∇v` and its splitting into
//! divergence, strain and curl, and the real-part identities for sections
//! built from vector fields.

use crate::calculus::Ops;
use crate::error::{Error, Result};
use crate::forms::{EForm, Fiber, RForm};
use crate::halfspace::HPoint;
use crate::jet::Jet;
use crate::scalar::Real;
use num_complex::Complex;

/// A section of `Hom(TM, TM)`: `m[i][j]` is the coefficient of `e_i ⊗ ω^j`.
pub type Hom<T> = [[Jet<T>; 3]; 3];

/// A vector field germ `v = Σ v_i e_i` (components are real jets).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorField<T> {
    pub base: HPoint<T>,
    pub v: [Jet<T>; 3],
}

/// The three orthogonal parts of `∇v`.
#[derive(Clone, Copy, Debug)]
pub struct GradParts<T> {
    pub div: Jet<T>,
    pub strain: Hom<T>,
    pub skew: Hom<T>,
    /// `skew ∇v` converted to a vector, which is `curl v`.
    pub curl: [Jet<T>; 3],
}

impl<T: Real> VectorField<T> {
    /// Takes real parts of the given jets.
    pub fn new(base: HPoint<T>, v: [Jet<T>; 3]) -> Self {
        VectorField { base, v: v.map(|j| j.re()) }
    }

    pub fn order(&self) -> usize {
        self.v.iter().map(|j| j.order()).min().unwrap()
    }

    pub fn value(&self) -> [T; 3] {
        self.v.map(|j| j.value().re)
    }

    /// The real lift `V` (fiber coordinates equal to `v`).
    pub fn real_lift(&self) -> EForm<T> {
        EForm::section(self.base, Fiber(self.v))
    }

    /// The dual 1-form `v̂ = Σ v_i ω^i`.
    pub fn dual(&self) -> RForm<T> {
        RForm::from_fn(1, self.base, |m| self.v[m.trailing_zeros() as usize])
    }

    /// `∇v` in the orthonormal frame.
    pub fn nabla(&self) -> Result<Hom<T>> {
        if self.order() < 1 {
            return Err(Error::InsufficientOrder { required: 1, available: 0 });
        }
        let s = self.real_lift();
        let zero = Jet::zero(self.order() - 1);
        let mut m = [[zero; 3]; 3];
        for j in 0..3 {
            let col = s.nabla(j);
            for i in 0..3 {
                m[i][j] = col.get(0).0[i];
            }
        }
        Ok(m)
    }

    pub fn div(&self) -> Result<Jet<T>> {
        Ok(trace(&self.nabla()?))
    }

    pub fn curl(&self) -> Result<VectorField<T>> {
        Ok(VectorField { base: self.base, v: skew_to_vector(&skew(&self.nabla()?)) })
    }

    pub fn decompose(&self) -> Result<GradParts<T>> {
        let m = self.nabla()?;
        let sk = skew(&m);
        Ok(GradParts { div: trace(&m), strain: traceless(&sym(&m)), skew: sk, curl: skew_to_vector(&sk) })
    }

    /// The canonical lift `V − i curl V` (one order is lost to the curl).
    pub fn canonical_lift(&self) -> Result<EForm<T>> {
        let c = self.curl()?;
        let i = Complex::new(T::zero(), T::one());
        Ok(EForm::section(self.base, Fiber(std::array::from_fn(|k| self.v[k] - c.v[k] * i))))
    }
}

impl<T: Real> std::ops::Add for VectorField<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.base, o.base, "basepoint mismatch");
        VectorField { base: self.base, v: std::array::from_fn(|k| self.v[k] + o.v[k]) }
    }
}

pub fn trace<T: Real>(m: &Hom<T>) -> Jet<T> {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn transpose<T: Real>(m: &Hom<T>) -> Hom<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

pub fn sym<T: Real>(m: &Hom<T>) -> Hom<T> {
    let h = Complex::new(T::lit(0.5), T::zero());
    std::array::from_fn(|i| std::array::from_fn(|j| (m[i][j] + m[j][i]) * h))
}

pub fn skew<T: Real>(m: &Hom<T>) -> Hom<T> {
    let h = Complex::new(T::lit(0.5), T::zero());
    std::array::from_fn(|i| std::array::from_fn(|j| (m[i][j] - m[j][i]) * h))
}

pub fn traceless<T: Real>(m: &Hom<T>) -> Hom<T> {
    let third = trace(m) * Complex::new(T::lit(1.0 / 3.0), T::zero());
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { m[i][j] - third } else { m[i][j] }))
}

/// `e_i ↦ e_{i+1} ⊗ ω^{i+2} − e_{i+2} ⊗ ω^{i+1}` (indices mod 3).
pub fn vector_to_skew<T: Real>(w: &[Jet<T>; 3]) -> Hom<T> {
    let order = w.iter().map(|j| j.order()).min().unwrap();
    let mut m = [[Jet::zero(order); 3]; 3];
    for i in 0..3 {
        m[(i + 1) % 3][(i + 2) % 3] = w[i];
        m[(i + 2) % 3][(i + 1) % 3] = -w[i];
    }
    m
}

pub fn skew_to_vector<T: Real>(m: &Hom<T>) -> [Jet<T>; 3] {
    std::array::from_fn(|i| m[(i + 1) % 3][(i + 2) % 3])
}

/// Pointwise inner product `Σ m_ij conj(n_ij)` of values.
pub fn hom_inner<T: Real>(m: &Hom<T>, n: &Hom<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..3 {
        for j in 0..3 {
            acc += m[i][j].value() * n[i][j].value().conj();
        }
    }
    acc
}

/// Largest entrywise difference of values.
pub fn hom_diff<T: Real>(m: &Hom<T>, n: &Hom<T>) -> T {
    let mut out = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            out = out.max((m[i][j].value() - n[i][j].value()).norm());
        }
    }
    out
}

/// Hom-valued view of a 1-form: `(Re, Im)` of `N[k][j]` as jets.
pub fn form_to_hom<T: Real>(a: &EForm<T>) -> (Hom<T>, Hom<T>) {
    let order = a.order();
    let mut re = [[Jet::zero(order); 3]; 3];
    let mut im = re;
    for j in 0..3 {
        let c = a.get(1 << j);
        for k in 0..3 {
            re[k][j] = c.0[k].re();
            im[k][j] = c.0[k].im();
        }
    }
    (re, im)
}

/// Residual of `(ΔV)^ = Δ̂v̂ + 4v̂` for the real lift `V` of `v`.
pub fn real_weitzenbock_residual<T: Real>(v: &VectorField<T>) -> Result<T> {
    let ops = Ops::at(&v.base)?;
    let lap = ops.laplacian(&v.real_lift())?;
    let rhs = v.dual().laplacian_hat()?;
    let four = T::lit(4.0);
    let mut out = T::zero();
    for i in 0..3 {
        let expect = rhs.get(1 << i).value() + v.v[i].value() * four;
        out = out.max((lap.get(0).0[i].value() - expect).norm());
    }
    Ok(out)
}

/// Residuals for a section `s = V − i curl V + iW`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureReport<T> {
    /// `sym Re ds` against `sym ∇v`.
    pub sym: T,
    /// `skew Re ds` against `w` under the skew isomorphism.
    pub skew: T,
    /// `Re ds` against `str v` (meaningful when `div v = 0`, `v` is
    /// harmonic and `w = 0`).
    pub re_strain: T,
    /// `Im ds` against `−str curl v` (same hypotheses).
    pub im_strain: T,
}

pub fn structure_checks<T: Real>(v: &VectorField<T>, w: &VectorField<T>) -> Result<StructureReport<T>> {
    if v.base != w.base {
        return Err(Error::BasepointMismatch);
    }
    let i = Complex::new(T::zero(), T::one());
    let lift = v.canonical_lift()?;
    let s = lift + EForm::section(v.base, Fiber(w.v.map(|x| x * i)));
    let ds = Ops::at(&v.base)?.d(&s)?;
    let (re, im) = form_to_hom(&ds);
    let grad = v.nabla()?;
    let curl = v.curl()?;
    let strain_curl = traceless(&sym(&curl.nabla()?));
    let neg: Hom<T> = strain_curl.map(|row| row.map(|x| -x));
    Ok(StructureReport {
        sym: hom_diff(&sym(&re), &sym(&grad)),
        skew: hom_diff(&skew(&re), &vector_to_skew(&w.v)),
        re_strain: hom_diff(&re, &traceless(&sym(&grad))),
        im_strain: hom_diff(&im, &neg),
    })
}
