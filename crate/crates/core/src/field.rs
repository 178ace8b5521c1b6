//! Polynomial field expressions in `z`, `z̄` and `t`, and scalar jets of
//! fields at points of the half-space.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' int)?
//! atom   := number ['i'] | 'i' | 'z' | 't' | 'conj' '(' expr ')' | '(' expr ')'
//! ```
//!
//! so `-0.3+1.2i` is read as the sum of a real and an imaginary literal.

use crate::error::{Error, Result};
use crate::halfspace::HPoint;
use crate::jet::Jet;
use crate::scalar::Real;
use num_complex::{Complex, Complex64};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq)]
pub enum FieldExpr {
    Const(Complex64),
    Z,
    ZBar,
    T,
    Add(Box<FieldExpr>, Box<FieldExpr>),
    Sub(Box<FieldExpr>, Box<FieldExpr>),
    Mul(Box<FieldExpr>, Box<FieldExpr>),
    Neg(Box<FieldExpr>),
    Pow(Box<FieldExpr>, u32),
    Conj(Box<FieldExpr>),
}

use FieldExpr as E;

fn zero() -> FieldExpr {
    E::Const(Complex64::new(0.0, 0.0))
}

fn constant(c: Complex64) -> FieldExpr {
    E::Const(c)
}

impl FieldExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn as_const(&self) -> Option<Complex64> {
        match self {
            E::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn sum(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => constant(x + y),
            (Some(x), _) if x == Complex64::new(0.0, 0.0) => b,
            (_, Some(y)) if y == Complex64::new(0.0, 0.0) => a,
            _ => E::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn difference(a: Self, b: Self) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => constant(x - y),
            (_, Some(y)) if y == Complex64::new(0.0, 0.0) => a,
            (Some(x), _) if x == Complex64::new(0.0, 0.0) => Self::negated(b),
            _ => E::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn product(a: Self, b: Self) -> Self {
        let zero_c = Complex64::new(0.0, 0.0);
        let one_c = Complex64::new(1.0, 0.0);
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => constant(x * y),
            (Some(x), _) | (_, Some(x)) if x == zero_c => zero(),
            (Some(x), _) if x == one_c => b,
            (_, Some(y)) if y == one_c => a,
            _ => E::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn negated(a: Self) -> Self {
        match a {
            E::Const(c) => constant(-c),
            E::Neg(inner) => *inner,
            other => E::Neg(Box::new(other)),
        }
    }

    pub fn pow(a: Self, n: u32) -> Self {
        match (n, a.as_const()) {
            (0, _) => constant(Complex64::new(1.0, 0.0)),
            (1, _) => a,
            (_, Some(c)) => constant(c.powu(n)),
            _ => E::Pow(Box::new(a), n),
        }
    }

    pub fn conj(a: Self) -> Self {
        match a {
            E::Const(c) => constant(c.conj()),
            E::Z => E::ZBar,
            E::ZBar => E::Z,
            E::T => E::T,
            E::Conj(inner) => *inner,
            other => E::Conj(Box::new(other)),
        }
    }

    /// Whether the expression mentions the height `t`.
    pub fn uses_t(&self) -> bool {
        match self {
            E::T => true,
            E::Const(_) | E::Z | E::ZBar => false,
            E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) => a.uses_t() || b.uses_t(),
            E::Neg(a) | E::Pow(a, _) | E::Conj(a) => a.uses_t(),
        }
    }

    /// Symbolic Wirtinger derivative `∂/∂z`.
    pub fn diff_z(&self) -> Self {
        self.diff(true)
    }

    /// Symbolic Wirtinger derivative `∂/∂z̄`.
    pub fn diff_zbar(&self) -> Self {
        self.diff(false)
    }

    fn diff(&self, holo: bool) -> Self {
        let one = constant(Complex64::new(1.0, 0.0));
        match self {
            E::Const(_) | E::T => zero(),
            E::Z => {
                if holo {
                    one
                } else {
                    zero()
                }
            }
            E::ZBar => {
                if holo {
                    zero()
                } else {
                    one
                }
            }
            E::Add(a, b) => Self::sum(a.diff(holo), b.diff(holo)),
            E::Sub(a, b) => Self::difference(a.diff(holo), b.diff(holo)),
            E::Neg(a) => Self::negated(a.diff(holo)),
            E::Mul(a, b) => {
                Self::sum(Self::product(a.diff(holo), (**b).clone()), Self::product((**a).clone(), b.diff(holo)))
            }
            E::Pow(a, n) => Self::product(
                Self::product(constant(Complex64::new(*n as f64, 0.0)), Self::pow((**a).clone(), n - 1)),
                a.diff(holo),
            ),
            E::Conj(a) => Self::conj(a.diff(!holo)),
        }
    }

    /// Replaces `z` by `z - β` (and `z̄` by `z̄ - β̄`).
    pub fn shift(&self, beta: Complex64) -> Self {
        match self {
            E::Z => Self::difference(E::Z, constant(beta)),
            E::ZBar => Self::difference(E::ZBar, constant(beta.conj())),
            E::Const(_) | E::T => self.clone(),
            E::Add(a, b) => Self::sum(a.shift(beta), b.shift(beta)),
            E::Sub(a, b) => Self::difference(a.shift(beta), b.shift(beta)),
            E::Mul(a, b) => Self::product(a.shift(beta), b.shift(beta)),
            E::Neg(a) => Self::negated(a.shift(beta)),
            E::Pow(a, n) => Self::pow(a.shift(beta), *n),
            E::Conj(a) => Self::conj(a.shift(beta)),
        }
    }

    /// Evaluates the expression on jets of `z`, `z̄` and `t`.
    pub fn eval_jets<T: Real>(&self, z: &Jet<T>, zbar: &Jet<T>, t: &Jet<T>) -> Jet<T> {
        match self {
            E::Const(c) => Jet::constant(Complex::new(T::lit(c.re), T::lit(c.im))).truncate(z.order()),
            E::Z => *z,
            E::ZBar => *zbar,
            E::T => *t,
            E::Add(a, b) => a.eval_jets(z, zbar, t) + b.eval_jets(z, zbar, t),
            E::Sub(a, b) => a.eval_jets(z, zbar, t) - b.eval_jets(z, zbar, t),
            E::Mul(a, b) => a.eval_jets(z, zbar, t) * b.eval_jets(z, zbar, t),
            E::Neg(a) => -a.eval_jets(z, zbar, t),
            E::Pow(a, n) => a.eval_jets(z, zbar, t).powi(*n as i32),
            E::Conj(a) => a.eval_jets(z, zbar, t).conj(),
        }
    }

    /// Plain evaluation at `z` and height `t`.
    pub fn eval(&self, z: Complex64, t: f64) -> Complex64 {
        match self {
            E::Const(c) => *c,
            E::Z => z,
            E::ZBar => z.conj(),
            E::T => Complex64::new(t, 0.0),
            E::Add(a, b) => a.eval(z, t) + b.eval(z, t),
            E::Sub(a, b) => a.eval(z, t) - b.eval(z, t),
            E::Mul(a, b) => a.eval(z, t) * b.eval(z, t),
            E::Neg(a) => -a.eval(z, t),
            E::Pow(a, n) => a.eval(z, t).powu(*n),
            E::Conj(a) => a.eval(z, t).conj(),
        }
    }

    /// The jet of the field at `p`, with all partials through order 4.
    pub fn jet_at<T: Real>(&self, p: &HPoint<T>) -> ScalarJet<T> {
        let (z, zb) = p.z_jets();
        let t = Jet::variable(2, p.t);
        ScalarJet { base: *p, jet: self.eval_jets(&z, &zb, &t) }
    }
}

impl FromStr for FieldExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Const(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else if c.re == 0.0 {
                    write!(f, "{}i", c.im)
                } else {
                    write!(f, "({}{:+}i)", c.re, c.im)
                }
            }
            E::Z => write!(f, "z"),
            E::ZBar => write!(f, "conj(z)"),
            E::T => write!(f, "t"),
            E::Add(a, b) => write!(f, "({a}+{b})"),
            E::Sub(a, b) => write!(f, "({a}-{b})"),
            E::Mul(a, b) => write!(f, "{a}*{b}"),
            E::Neg(a) => write!(f, "(-{a})"),
            E::Pow(a, n) => write!(f, "({a})^{n}"),
            E::Conj(a) => write!(f, "conj({a})"),
        }
    }
}

/// Shorthand for [`FieldExpr::jet_at`].
pub fn jet_of<T: Real>(expr: &FieldExpr, p: &HPoint<T>) -> ScalarJet<T> {
    expr.jet_at(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FieldExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = E::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = E::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<FieldExpr> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = E::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FieldExpr> {
        if self.eat(b'-') {
            return Ok(E::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<FieldExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: u32 = text.parse().map_err(|_| Error::Parse { pos: start, msg: "exponent out of range".into() })?;
            return Ok(E::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn keyword(&mut self, word: &str) -> bool {
        let w = word.as_bytes();
        if self.src[self.pos..].starts_with(w) {
            let next = self.src.get(self.pos + w.len());
            if next.is_none_or(|c| !c.is_ascii_alphanumeric() && *c != b'_') {
                self.pos += w.len();
                return true;
            }
        }
        false
    }

    fn atom(&mut self) -> Result<FieldExpr> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.err("unexpected end of input")),
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        if self.keyword("conj") {
            if !self.eat(b'(') {
                return Err(self.err("expected '(' after conj"));
            }
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(E::Conj(Box::new(e)));
        }
        if self.keyword("z") {
            return Ok(E::Z);
        }
        if self.keyword("t") {
            return Ok(E::T);
        }
        if self.keyword("i") {
            return Ok(E::Const(Complex64::new(0.0, 1.0)));
        }
        Err(self.err("expected a literal, z, conj(z), t or '('"))
    }

    fn number(&mut self) -> Result<FieldExpr> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        // optional exponent such as 1e-3
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = std::str::from_utf8(&bytes[start..end]).unwrap();
        let value: f64 = text.parse().map_err(|_| Error::Parse { pos: start, msg: format!("bad number '{text}'") })?;
        self.pos = end;
        if self.pos < bytes.len() && bytes[self.pos] == b'i' {
            let next = bytes.get(self.pos + 1);
            if next.is_none_or(|c| !c.is_ascii_alphanumeric()) {
                self.pos += 1;
                return Ok(E::Const(Complex64::new(0.0, value)));
            }
        }
        Ok(E::Const(Complex64::new(value, 0.0)))
    }
}

/// Value and partial derivatives through order 4 of a complex scalar field
/// at a basepoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarJet<T> {
    pub base: HPoint<T>,
    pub jet: Jet<T>,
}

impl<T: Real> ScalarJet<T> {
    pub fn new(base: HPoint<T>, jet: Jet<T>) -> Self {
        ScalarJet { base, jet }
    }

    pub fn value(&self) -> Complex<T> {
        self.jet.value()
    }

    /// `∂x^i ∂y^j ∂t^k f`.
    pub fn partial(&self, i: usize, j: usize, k: usize) -> Complex<T> {
        self.jet.partial([i, j, k])
    }

    /// `∂z^a ∂z̄^b ∂t^c f`.
    pub fn wirtinger(&self, a: usize, b: usize, c: usize) -> Complex<T> {
        self.jet.wirtinger(a, b, c)
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.jet.order() < n {
            return Err(Error::InsufficientOrder { required: n, available: self.jet.order() });
        }
        Ok(())
    }

    /// Coefficients of `d̂f` on the coframe: `(t f_x, t f_y, t f_t)`.
    pub fn dhat(&self) -> Result<[Complex<T>; 3]> {
        self.require(1)?;
        let t = self.base.t;
        Ok([self.partial(1, 0, 0) * t, self.partial(0, 1, 0) * t, self.partial(0, 0, 1) * t])
    }

    /// `Δ̂f = t f_t - t² (f_xx + f_yy + f_tt)`.
    pub fn laplacian_hat(&self) -> Result<Complex<T>> {
        self.require(2)?;
        let t = self.base.t;
        let lap = self.partial(2, 0, 0) + self.partial(0, 2, 0) + self.partial(0, 0, 2);
        Ok(self.partial(0, 0, 1) * t - lap * (t * t))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::BasepointMismatch);
        }
        Ok(ScalarJet { base: self.base, jet: self.jet * other.jet })
    }
}

/// Residual of `Δ̂(fg) = (Δ̂f) g - 2⟨d̂f, d̂g⟩ + f Δ̂g` at the common basepoint.
pub fn product_rule_residual<T: Real>(f: &ScalarJet<T>, g: &ScalarJet<T>) -> Result<T> {
    let fg = f.mul(g)?;
    let df = f.dhat()?;
    let dg = g.dhat()?;
    let cross = df[0] * dg[0] + df[1] * dg[1] + df[2] * dg[2];
    let rhs = f.laplacian_hat()? * g.value() - cross * T::lit(2.0) + f.value() * g.laplacian_hat()?;
    Ok((fg.laplacian_hat()? - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(x: f64, y: f64, t: f64) -> HPoint<f64> {
        HPoint::new(x, y, t).unwrap()
    }

    #[test]
    fn parses_literals() {
        assert_eq!(FieldExpr::parse("1").unwrap().eval(c(0.0, 0.0), 1.0), c(1.0, 0.0));
        assert_eq!(FieldExpr::parse("0.5i").unwrap().eval(c(0.0, 0.0), 1.0), c(0.0, 0.5));
        assert_eq!(FieldExpr::parse("-0.3+1.2i").unwrap().eval(c(0.0, 0.0), 1.0), c(-0.3, 1.2));
        assert_eq!(FieldExpr::parse("i*z").unwrap().eval(c(2.0, 0.0), 1.0), c(0.0, 2.0));
    }

    #[test]
    fn parse_errors_carry_position() {
        match FieldExpr::parse("z + * 2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(FieldExpr::parse("z^"), Err(Error::Parse { .. })));
        assert!(matches!(FieldExpr::parse("(z"), Err(Error::Parse { .. })));
        assert!(matches!(FieldExpr::parse("zz"), Err(Error::Parse { .. })));
        assert!(matches!(FieldExpr::parse("z)"), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn display_round_trips() {
        for src in ["z*conj(z)", "(z^3-z)*0.5", "-0.3+1.2i*t", "conj(z^2+i)"] {
            let e = FieldExpr::parse(src).unwrap();
            let again = FieldExpr::parse(&e.to_string()).unwrap();
            let z = c(0.3, -0.4);
            assert!((e.eval(z, 0.7) - again.eval(z, 0.7)).norm() < 1e-14);
        }
    }

    #[test]
    fn z_zbar_mixed_partial() {
        let e = FieldExpr::parse("z*conj(z)").unwrap();
        let j = e.jet_at(&pt(0.0, 0.0, 1.0));
        assert!((j.wirtinger(1, 1, 0) - c(1.0, 0.0)).norm() < 1e-15);
        for (a, b) in [(3, 0), (2, 1), (1, 2), (0, 3), (3, 1), (2, 2), (4, 0)] {
            assert!(j.wirtinger(a, b, 0).norm() < 1e-15);
        }
    }

    #[test]
    fn holomorphic_cube() {
        let e = FieldExpr::parse("z^3").unwrap();
        let j = e.jet_at(&pt(0.4, -0.2, 0.3));
        assert!((j.wirtinger(3, 0, 0) - c(6.0, 0.0)).norm() < 1e-14);
        assert!(j.wirtinger(0, 1, 0).norm() < 1e-15);
    }

    #[test]
    fn height_field() {
        let j = FieldExpr::parse("t").unwrap().jet_at(&pt(0.0, 0.0, 2.0));
        assert_eq!(j.partial(0, 0, 1), c(1.0, 0.0));
        assert_eq!(j.partial(0, 0, 2), c(0.0, 0.0));
        assert_eq!(j.dhat().unwrap(), [c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(j.laplacian_hat().unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn dhat_of_x() {
        let e = FieldExpr::parse("(z+conj(z))*0.5").unwrap();
        let j = e.jet_at(&pt(0.0, 0.0, 2.0));
        assert_eq!(j.dhat().unwrap(), [c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(j.laplacian_hat().unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn log_height_laplacian() {
        let p = pt(0.1, 0.2, 0.7);
        let j = ScalarJet::new(p, Jet::variable(2, 0.7).ln());
        assert!((j.laplacian_hat().unwrap() - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn symbolic_derivatives_match_jets() {
        let e = FieldExpr::parse("z^2*conj(z) + t*z - 2i*conj(z)^3").unwrap();
        let p = pt(0.3, 0.6, 0.9);
        let j = e.jet_at(&p);
        assert!((e.diff_z().jet_at(&p).value() - j.wirtinger(1, 0, 0)).norm() < 1e-14);
        assert!((e.diff_zbar().jet_at(&p).value() - j.wirtinger(0, 1, 0)).norm() < 1e-14);
        assert!(e.uses_t());
        assert!(!e.diff_z().diff_z().uses_t());
    }

    #[test]
    fn shift_translates() {
        let e = FieldExpr::parse("z^3-conj(z)").unwrap();
        let beta = c(0.5, -1.0);
        let z = c(0.2, 0.9);
        assert!((e.shift(beta).eval(z, 1.0) - e.eval(z - beta, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn insufficient_order_reported() {
        let j = ScalarJet::new(pt(0.0, 0.0, 1.0), Jet::variable(0, 0.0).truncate(1));
        assert!(j.dhat().is_ok());
        assert_eq!(j.laplacian_hat(), Err(Error::InsufficientOrder { required: 2, available: 1 }));
    }

    #[test]
    fn product_rule_basepoint_mismatch() {
        let f = FieldExpr::Z.jet_at(&pt(0.0, 0.0, 1.0));
        let g = FieldExpr::Z.jet_at(&pt(0.0, 0.0, 2.0));
        assert_eq!(product_rule_residual(&f, &g), Err(Error::BasepointMismatch));
    }
}
