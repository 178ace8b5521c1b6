//! The frame sections `E_i` of the bundle of Killing fields, their
//! adjoint action, and the tables of `dE_i` and `∂E_i`.

use crate::error::Result;
use crate::halfspace::HPoint;
use crate::killing::{canonical_lift_point, eval_killing, KillingField};
use crate::scalar::Real;
use num_complex::Complex;

/// `table[k][j]` is the fiber vector multiplying `ω^j` in `dE_k` (or `∂E_k`).
pub type FrameTable<T> = [[[Complex<T>; 3]; 3]; 3];

/// A constant complex matrix acting on fiber coordinates.
pub type FiberMatrix<T> = [[Complex<T>; 3]; 3];

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Tabulated `dE_k`:
///
/// ```text
/// dE1 =  E3 ω¹ + R3 ω² − R2 ω³
/// dE2 = −R3 ω¹ + E3 ω² + R1 ω³
/// dE3 = −(E1 − R2) ω¹ − (R1 + E2) ω²
/// ```
pub fn d_table<T: Real>() -> FrameTable<T> {
    let z = c(0.0, 0.0);
    [
        [[z, z, c(1.0, 0.0)], [z, z, c(0.0, 1.0)], [z, c(0.0, -1.0), z]],
        [[z, z, c(0.0, -1.0)], [z, z, c(1.0, 0.0)], [c(0.0, 1.0), z, z]],
        [[c(-1.0, 0.0), c(0.0, 1.0), z], [c(0.0, -1.0), c(-1.0, 0.0), z], [z, z, z]],
    ]
}

/// Tabulated `∂E_k`:
///
/// ```text
/// ∂E1 = E3 ω¹ − R3 ω² + R2 ω³
/// ∂E2 = R3 ω¹ + E3 ω² − R1 ω³
/// ∂E3 = −(E1 + R2) ω¹ + (R1 − E2) ω²
/// ```
pub fn del_table<T: Real>() -> FrameTable<T> {
    let z = c(0.0, 0.0);
    [
        [[z, z, c(1.0, 0.0)], [z, z, c(0.0, -1.0)], [z, c(0.0, 1.0), z]],
        [[z, z, c(0.0, 1.0)], [z, z, c(1.0, 0.0)], [c(0.0, -1.0), z, z]],
        [[c(-1.0, 0.0), c(0.0, -1.0), z], [c(0.0, 1.0), c(-1.0, 0.0), z], [z, z, z]],
    ]
}

/// The Killing fields `E1, E2, E3` at `p` (unit value `e_k`, zero curl),
/// obtained from the value/curl lift.
pub fn frame_killing_fields<T: Real>(p: &HPoint<T>) -> Result<[KillingField<T>; 3]> {
    let mut out = [KillingField::zero(); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut v = [T::zero(); 3];
        v[k] = T::one();
        *slot = canonical_lift_point(v, [T::zero(); 3], p)?;
    }
    Ok(out)
}

/// Matrices of `ad(E_j)` on fiber coordinates at `p`.
///
/// `ad(E_j) Y` is the matrix commutator `[E_j, Y]` in `sl(2, C)`, which on
/// polynomial fields is the bracket `[Y, E_j] = Y E_j' − E_j Y'`.
pub fn ad_matrices<T: Real>(p: &HPoint<T>) -> Result<[FiberMatrix<T>; 3]> {
    let e = frame_killing_fields(p)?;
    let mut out = [[[Complex::new(T::zero(), T::zero()); 3]; 3]; 3];
    for j in 0..3 {
        for k in 0..3 {
            let col = eval_killing(&e[k].bracket(&e[j]), p).a;
            for i in 0..3 {
                out[j][i][k] = col[i];
            }
        }
    }
    Ok(out)
}

/// Entrywise real part and `i·Im` part of a fiber matrix.
pub fn split_matrix<T: Real>(m: &FiberMatrix<T>) -> (FiberMatrix<T>, FiberMatrix<T>) {
    let re = m.map(|row| row.map(|z| Complex::new(z.re, T::zero())));
    let im = m.map(|row| row.map(|z| Complex::new(T::zero(), z.im)));
    (re, im)
}
