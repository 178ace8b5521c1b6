//! Exterior calculus of bundle-valued forms: `d`, `∂`, `δ`, the splitting
//! `d = D + T`, the Laplacians and the Weitzenböck identities.
//!
//! The primary route writes `d = Σ ω^j ∧ (∇_j + ad E_j)` and
//! `δ = −Σ i(e_j)(∇_j − ad E_j)`. A second route, [`Ops::d_frame`], uses
//! the tabulated derivatives of the frame sections instead of `ad`.

use crate::error::{Error, Result};
use crate::field::ScalarJet;
use crate::forms::{sign_power, EForm, Fiber, RForm, MASKS};
use crate::frame::{ad_matrices, d_table, split_matrix, FiberMatrix, FrameTable};
use crate::halfspace::HPoint;
use crate::scalar::Real;
use num_complex::Complex;

/// Operators at a fixed basepoint (the `ad(E_j)` matrices are computed
/// once per point).
#[derive(Clone, Debug)]
pub struct Ops<T> {
    base: HPoint<T>,
    ad: [FiberMatrix<T>; 3],
    ad_re: [FiberMatrix<T>; 3],
    ad_im: [FiberMatrix<T>; 3],
}

fn check_d<T: Real>(a: &EForm<T>) -> Result<()> {
    if a.degree() >= 3 {
        return Err(Error::DegreeOutOfRange(a.degree()));
    }
    a.require_order(1)
}

fn check_delta<T: Real>(a: &EForm<T>) -> Result<()> {
    if a.degree() == 0 {
        return Err(Error::DegreeOutOfRange(0));
    }
    a.require_order(1)
}

impl<T: Real> Ops<T> {
    pub fn at(base: &HPoint<T>) -> Result<Self> {
        let ad = ad_matrices(base)?;
        let mut ad_re = ad;
        let mut ad_im = ad;
        for j in 0..3 {
            let (r, i) = split_matrix(&ad[j]);
            ad_re[j] = r;
            ad_im[j] = i;
        }
        Ok(Ops { base: *base, ad, ad_re, ad_im })
    }

    pub fn ad(&self) -> &[FiberMatrix<T>; 3] {
        &self.ad
    }

    fn check_base(&self, a: &EForm<T>) -> Result<()> {
        if *a.base() != self.base {
            return Err(Error::BasepointMismatch);
        }
        Ok(())
    }

    /// `Σ ω^j ∧ (∇_j + m_j)`, or `Σ ω^j ∧ m_j` without the connection.
    fn raise(&self, a: &EForm<T>, m: &[FiberMatrix<T>; 3], with_nabla: bool) -> EForm<T> {
        let mut out = EForm::zero(a.degree() + 1, self.base, a.order());
        for j in 0..3 {
            let mut inner = a.apply(&m[j]);
            if with_nabla {
                inner = a.nabla(j) + inner;
            }
            out = out + inner.wedge_coframe(j);
        }
        out
    }

    /// `−Σ i(e_j)(∇_j − m_j)`, or `Σ i(e_j) m_j` without the connection.
    fn lower(&self, a: &EForm<T>, m: &[FiberMatrix<T>; 3], with_nabla: bool) -> EForm<T> {
        let mut out = EForm::zero(a.degree() - 1, self.base, a.order());
        for j in 0..3 {
            let alg = a.apply(&m[j]);
            let term = if with_nabla { -(a.nabla(j) - alg) } else { alg };
            out = out + term.interior(j);
        }
        out
    }

    /// Exterior derivative `d = Σ ω^j ∧ (∇_{e_j} + ad E_j)`.
    pub fn d(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        check_d(a)?;
        Ok(self.raise(a, &self.ad, true))
    }

    /// Exterior derivative from the frame table: the Leibniz rule applied to
    /// `a_I^k E_k ω^I` with tabulated `dE_k` and `dω^I`.
    pub fn d_frame(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        check_d(a)?;
        Ok(d_with_table(a, &d_table()))
    }

    /// Codifferential `δ = −Σ i(e_j)(∇_{e_j} − ad E_j)`.
    pub fn delta(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        check_delta(a)?;
        Ok(self.lower(a, &self.ad, true))
    }

    /// `D`: the part of `d` preserving the real span of the `E_i`.
    pub fn big_d(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        check_d(a)?;
        Ok(self.raise(a, &self.ad_re, true))
    }

    /// `T`: the algebraic part of `d` exchanging `E_i` and `R_i`.
    pub fn big_t(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        if a.degree() >= 3 {
            return Err(Error::DegreeOutOfRange(a.degree()));
        }
        Ok(self.raise(a, &self.ad_im, false))
    }

    pub fn big_d_star(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        check_delta(a)?;
        Ok(self.lower(a, &self.ad_re, true))
    }

    pub fn big_t_star(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.check_base(a)?;
        if a.degree() == 0 {
            return Err(Error::DegreeOutOfRange(0));
        }
        Ok(self.lower(a, &self.ad_im, false))
    }

    /// `∂ = D − T`.
    pub fn del(&self, a: &EForm<T>) -> Result<EForm<T>> {
        Ok(self.big_d(a)? - self.big_t(a)?)
    }

    /// `δ = (−1)^k ∗∂∗` on `k`-forms.
    pub fn delta_hodge(&self, a: &EForm<T>) -> Result<EForm<T>> {
        check_delta(a)?;
        Ok(self.del(&a.hodge())?.hodge().scale(sign_power(a.degree())))
    }

    /// Sum of `outer(inner(a))` and `inner(outer(a))` where defined, for a
    /// raising operator `outer` and a lowering operator `inner`.
    fn anticommutator(
        &self,
        a: &EForm<T>,
        raise: impl Fn(&EForm<T>) -> Result<EForm<T>>,
        lower: impl Fn(&EForm<T>) -> Result<EForm<T>>,
    ) -> Result<EForm<T>> {
        let mut out = EForm::zero(a.degree(), self.base, a.order());
        if a.degree() > 0 {
            out = out + raise(&lower(a)?)?;
        }
        if a.degree() < 3 {
            out = out + lower(&raise(a)?)?;
        }
        Ok(out)
    }

    /// `Δ = dδ + δd`.
    pub fn laplacian(&self, a: &EForm<T>) -> Result<EForm<T>> {
        a.require_order(2)?;
        self.anticommutator(a, |x| self.d(x), |x| self.delta(x))
    }

    /// `Δ_D = D*D + DD*`.
    pub fn laplacian_d(&self, a: &EForm<T>) -> Result<EForm<T>> {
        a.require_order(2)?;
        self.anticommutator(a, |x| self.big_d(x), |x| self.big_d_star(x))
    }

    /// `H = T*T + TT*`.
    pub fn h(&self, a: &EForm<T>) -> Result<EForm<T>> {
        self.anticommutator(a, |x| self.big_t(x), |x| self.big_t_star(x))
    }

    /// `T*D + D*T + TD* + DT*`.
    pub fn mm_operator(&self, a: &EForm<T>) -> Result<EForm<T>> {
        a.require_order(2)?;
        let mut out = EForm::zero(a.degree(), self.base, a.order());
        if a.degree() < 3 {
            out = out + self.big_t_star(&self.big_d(a)?)? + self.big_d_star(&self.big_t(a)?)?;
        }
        if a.degree() > 0 {
            out = out + self.big_t(&self.big_d_star(a)?)? + self.big_d(&self.big_t_star(a)?)?;
        }
        Ok(out)
    }
}

/// Applies the Leibniz rule with a table of frame derivatives
/// (`table[k][j]` = coefficient of `ω^j` in the derivative of `E_k`).
pub fn d_with_table<T: Real>(a: &EForm<T>, table: &FrameTable<T>) -> EForm<T> {
    let base = *a.base();
    let mut out = EForm::zero(a.degree() + 1, base, a.order());
    for j in 0..3 {
        let m: FiberMatrix<T> = std::array::from_fn(|i| std::array::from_fn(|k| table[k][j][i]));
        out = out + (a.frame_derivative(j) + a.apply(&m)).wedge_coframe(j);
    }
    // dω¹ = ω¹∧ω³, dω² = ω²∧ω³, dω³ = 0
    let mut coframe = EForm::zero(a.degree() + 1, base, a.order());
    for &mask in MASKS[a.degree()] {
        if mask == 0 || mask & 4 != 0 {
            continue;
        }
        let len = mask.count_ones() as f64;
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        let c = *a.get(mask) * Complex::new(T::lit(sign * len), T::zero());
        coframe.set(mask | 4, c);
    }
    out + coframe
}

pub fn ext_d<T: Real>(a: &EForm<T>) -> Result<EForm<T>> {
    Ops::at(a.base())?.d(a)
}

pub fn codifferential<T: Real>(a: &EForm<T>) -> Result<EForm<T>> {
    Ops::at(a.base())?.delta(a)
}

pub fn laplacian_e<T: Real>(a: &EForm<T>) -> Result<EForm<T>> {
    Ops::at(a.base())?.laplacian(a)
}

/// Generic recomputation of the frame tables: `dE_k` from `d` and `∂E_k`
/// from `D − T`, applied to the constant frame sections.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameTables<T> {
    pub d: FrameTable<T>,
    pub del: FrameTable<T>,
}

pub fn frame_killing_tables<T: Real>(p: &HPoint<T>) -> Result<FrameTables<T>> {
    let ops = Ops::at(p)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut d = [[[zero; 3]; 3]; 3];
    let mut del = d;
    for k in 0..3 {
        let mut v = [zero; 3];
        v[k] = Complex::new(T::one(), T::zero());
        let s = EForm::section(*p, Fiber::constant(v));
        let ds = ops.d(&s)?;
        let dels = ops.del(&s)?;
        for j in 0..3 {
            d[k][j] = ds.value(1 << j);
            del[k][j] = dels.value(1 << j);
        }
    }
    Ok(FrameTables { d, del })
}

/// Largest entry difference between two frame tables.
pub fn table_diff<T: Real>(a: &FrameTable<T>, b: &FrameTable<T>) -> T {
    let mut m = T::zero();
    for k in 0..3 {
        for j in 0..3 {
            for i in 0..3 {
                m = m.max((a[k][j][i] - b[k][j][i]).norm());
            }
        }
    }
    m
}

/// Residual of `Δ = Δ_D + H`.
pub fn weitzenbock_residual<T: Real>(a: &EForm<T>) -> Result<T> {
    let ops = Ops::at(a.base())?;
    let lhs = ops.laplacian(a)?;
    let rhs = ops.laplacian_d(a)? + ops.h(a)?;
    Ok(lhs.max_diff(&rhs))
}

/// Residual of `T*D + D*T + TD* + DT* = 0`.
pub fn mm_residual<T: Real>(a: &EForm<T>) -> Result<T> {
    Ok(Ops::at(a.base())?.mm_operator(a)?.max_abs())
}

/// Residual between the two routes to `δ`.
pub fn delta_routes_residual<T: Real>(a: &EForm<T>) -> Result<T> {
    let ops = Ops::at(a.base())?;
    Ok(ops.delta(a)?.max_diff(&ops.delta_hodge(a)?))
}

/// Residual of `H(f s) = f H(s)`.
pub fn h_algebraic_residual<T: Real>(f: &ScalarJet<T>, a: &EForm<T>) -> Result<T> {
    if f.base != *a.base() {
        return Err(Error::BasepointMismatch);
    }
    let ops = Ops::at(a.base())?;
    let lhs = ops.h(&a.mul_jet(&f.jet))?;
    let rhs = ops.h(a)?.mul_jet(&f.jet);
    Ok(lhs.max_diff(&rhs))
}

/// Residual of `Δ(fs) = (Δ̂f) s − 2∗(∗d̂f ∧ Ds) + f Δs` for a section `s`.
pub fn product_formula_residual<T: Real>(f: &ScalarJet<T>, s: &EForm<T>) -> Result<T> {
    if f.base != *s.base() {
        return Err(Error::BasepointMismatch);
    }
    if s.degree() != 0 {
        return Err(Error::DegreeOutOfRange(s.degree()));
    }
    let ops = Ops::at(s.base())?;
    let fs = s.mul_jet(&f.jet);
    let lhs = ops.laplacian(&fs)?;
    let fj = RForm::function(f.base, f.jet);
    let lap_f = *fj.laplacian_hat()?.get(0);
    let star_df = fj.dhat()?.hodge();
    let cross = star_df.wedge(&ops.big_d(s)?)?.hodge();
    let rhs = s.mul_jet(&lap_f) - cross.scale(Complex::new(T::lit(2.0), T::zero())) + ops.laplacian(s)?.mul_jet(&f.jet);
    Ok(lhs.max_diff(&rhs))
}
