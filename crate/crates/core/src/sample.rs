//! Seeded random inputs: points with `w` uniform in the unit square and `t`
//! log-uniform in `[0.05, 2]`, Möbius maps, Killing fields and polynomial
//! form germs.

use crate::forms::{EForm, Fiber};
use crate::halfspace::{HPoint, Mobius};
use crate::jet::{Jet, NCOEF};
use crate::killing::KillingField;
use crate::vector::VectorField;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const T_MIN: f64 = 0.05;
pub const T_MAX: f64 = 2.0;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Real and imaginary parts uniform in `[-scale, scale]`.
    pub fn complex(&mut self, scale: f64) -> Complex64 {
        Complex64::new(self.uniform(-scale, scale), self.uniform(-scale, scale))
    }

    pub fn point(&mut self) -> HPoint<f64> {
        let x = self.uniform(0.0, 1.0);
        let y = self.uniform(0.0, 1.0);
        let t = self.uniform(T_MIN.ln(), T_MAX.ln()).exp();
        HPoint::new(x, y, t).expect("sampled height is positive")
    }

    pub fn killing_field(&mut self) -> KillingField<f64> {
        KillingField::new(self.complex(1.0), self.complex(1.0), self.complex(1.0))
    }

    /// A Möbius map with entries of size about one, resampled until it is
    /// comfortably nondegenerate.
    pub fn mobius(&mut self) -> Mobius<f64> {
        loop {
            let (a, b, c, d) = (self.complex(1.0), self.complex(1.0), self.complex(1.0), self.complex(1.0));
            if (a * d - b * c).norm() > 0.1 {
                return Mobius::new(a, b, c, d).expect("determinant bounded away from zero");
            }
        }
    }

    /// `Im τ` in `[0.5, 2]`, `Re τ` in `[-0.5, 0.5]`.
    pub fn tau(&mut self) -> Complex64 {
        Complex64::new(self.uniform(-0.5, 0.5), self.uniform(0.5, 2.0))
    }

    /// A jet of a degree-4 polynomial with Taylor coefficients in
    /// `[-0.5, 0.5]` (real or complex).
    pub fn poly_jet(&mut self, real: bool) -> Jet<f64> {
        let coef: Vec<Complex64> = (0..NCOEF)
            .map(|_| {
                let re = self.uniform(-0.5, 0.5);
                let im = if real { 0.0 } else { self.uniform(-0.5, 0.5) };
                Complex64::new(re, im)
            })
            .collect();
        Jet::from_taylor(&coef, 4)
    }

    pub fn eform(&mut self, degree: usize, p: HPoint<f64>) -> EForm<f64> {
        EForm::from_fn(degree, p, |_| Fiber(std::array::from_fn(|_| self.poly_jet(false))))
    }

    pub fn vector_field(&mut self, p: HPoint<f64>) -> VectorField<f64> {
        VectorField::new(p, std::array::from_fn(|_| self.poly_jet(true)))
    }
}
