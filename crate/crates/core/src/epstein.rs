//! The osculating Möbius transformation of a conformal map and the map
//! `F(p) = M^f_z(p)` built from it.

use crate::error::{Error, Result};
use crate::halfspace::{HPoint, Mobius};
use crate::horosphere::BoundaryField;
use num_complex::Complex64;

/// The Möbius transformation whose 2-jet at `z0` is `(f0, f1, f2)`.
pub fn osculating_mobius(z0: Complex64, jet: [Complex64; 3]) -> Result<Mobius<f64>> {
    let [f0, f1, f2] = jet;
    let scale = 1.0 + f0.norm() + f2.norm();
    if f1.norm() <= 1e-14 * scale {
        return Err(Error::DegenerateJet);
    }
    let kappa = f2 / (f1 * 2.0);
    let a = f1 - f0 * kappa;
    let one = Complex64::new(1.0, 0.0);
    Mobius::new(a, f0 - a * z0, -kappa, kappa * z0 + one)
}

/// The endpoint in the upper half-plane of the geodesic through `p` that
/// meets the vertical plane over the real axis orthogonally.
pub fn foot_point(p: &HPoint<f64>) -> Complex64 {
    Complex64::new(p.x, (p.y * p.y + p.t * p.t).sqrt())
}

/// `F(p) = M^f_z(p)` with `z` the foot point of `p`, for a map given by
/// its 2-jet.
pub fn epstein_map_with(jet: impl Fn(Complex64) -> [Complex64; 3], p: &HPoint<f64>) -> Result<HPoint<f64>> {
    let z = foot_point(p);
    Ok(osculating_mobius(z, jet(z))?.act_halfspace(p))
}

pub fn epstein_map(f: &BoundaryField, p: &HPoint<f64>) -> Result<HPoint<f64>> {
    let z = foot_point(p);
    let probe = HPoint::new(z.re, z.im, 1.0)?;
    f.require_holomorphic(&probe)?;
    epstein_map_with(|w| [0, 1, 2].map(|a| f.wirtinger_at(a, 0, w)), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jet_of_cubic_perturbation() {
        let m = osculating_mobius(c(0.0, 0.0), [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(m.distance(&Mobius::identity()) < 1e-15);
        assert_eq!(osculating_mobius(c(0.0, 0.0), [c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]), Err(Error::DegenerateJet));
    }

    #[test]
    fn reproduces_the_jet() {
        let z0 = c(0.3, 0.8);
        let jet = [c(1.0, -0.5), c(0.2, 0.7), c(-1.1, 0.4)];
        let m = osculating_mobius(z0, jet).unwrap();
        let [[a, b], [cc, d]] = m.matrix();
        let den = cc * z0 + d;
        assert!(((a * z0 + b) / den - jet[0]).norm() < 1e-12);
        assert!((m.derivative(z0) - jet[1]).norm() < 1e-12);
        // M'' = -2c / (cz + d)^3
        assert!((-cc * 2.0 / (den * den * den) - jet[2]).norm() < 1e-12);
    }

    #[test]
    fn identity_field_gives_identity_map() {
        let f = BoundaryField::parse("z").unwrap();
        let p = HPoint::new(0.3, 0.4, 0.2).unwrap();
        let q = epstein_map(&f, &p).unwrap();
        assert!((q.x - p.x).abs() + (q.y - p.y).abs() + (q.t - p.t).abs() < 1e-14);
    }
}
