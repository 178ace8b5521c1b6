//! Riemannian curvature of metrics given as jets, and the geometry of the
//! cone metric `dr² + sinh²r dθ² + cosh²r dz²` near a singular curve.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature::GaussLegendre;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A metric germ: `g[i][j]` as jets in three coordinates.
pub type MetricJet = [[Jet<f64>; 3]; 3];

/// Christoffel symbols `Γ^l_{ij}` stored as `gamma[l][i][j]`.
pub type Christoffel = [[[Jet<f64>; 3]; 3]; 3];

fn inverse(g: &MetricJet) -> MetricJet {
    let cof = |i: usize, j: usize| {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let (c, d) = ((j + 1) % 3, (j + 2) % 3);
        g[a][c] * g[b][d] - g[a][d] * g[b][c]
    };
    let det = g[0][0] * cof(0, 0) + g[0][1] * cof(0, 1) + g[0][2] * cof(0, 2);
    let inv_det = det.recip();
    // symmetric, so the adjugate is the cofactor matrix
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) * inv_det))
}

pub fn christoffel(g: &MetricJet) -> Christoffel {
    let gi = inverse(g);
    let half = Complex64::new(0.5, 0.0);
    std::array::from_fn(|l| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = Jet::zero(g[0][0].order().saturating_sub(1));
                for m in 0..3 {
                    let s = g[m][j].d(i) + g[m][i].d(j) - g[i][j].d(m);
                    acc += gi[l][m] * s;
                }
                acc * half
            })
        })
    })
}

/// `R^l_{ijk}`, the components of `R(∂_i, ∂_j)∂_k`, at the basepoint.
pub fn riemann(g: &MetricJet) -> [[[[f64; 3]; 3]; 3]; 3] {
    let gam = christoffel(g);
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut v = gam[l][j][k].d(i).value() - gam[l][i][k].d(j).value();
                    for m in 0..3 {
                        v += gam[l][i][m].value() * gam[m][j][k].value() - gam[l][j][m].value() * gam[m][i][k].value();
                    }
                    r[l][i][j][k] = v.re;
                }
            }
        }
    }
    r
}

/// Sectional curvature of the coordinate plane spanned by `∂_a`, `∂_b`.
pub fn sectional_curvature(g: &MetricJet, a: usize, b: usize) -> f64 {
    let r = riemann(g);
    let gv = |i: usize, j: usize| g[i][j].value().re;
    let num: f64 = (0..3).map(|l| gv(a, l) * r[l][a][b][b]).sum();
    num / (gv(a, a) * gv(b, b) - gv(a, b) * gv(a, b))
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// `diag(1, sinh²r, cosh²r)` in coordinates `(r, θ, z)`.
pub fn cone_metric_eval(r: f64) -> Result<[f64; 3]> {
    check_radius(r)?;
    Ok([1.0, r.sinh().powi(2), r.cosh().powi(2)])
}

/// The cone metric as a jet at radius `r`.
pub fn cone_metric_jet(r: f64) -> Result<MetricJet> {
    check_radius(r)?;
    let rj = Jet::variable(0, r);
    let (s, c) = (rj.sinh(), rj.cosh());
    let z = Jet::zero(4);
    Ok([[Jet::real(1.0), z, z], [z, s * s, z], [z, z, c * c]])
}

/// `max |K + 1|` over the three coordinate planes at radius `r`.
pub fn cone_curvature_check(r: f64) -> Result<f64> {
    let g = cone_metric_jet(r)?;
    Ok([(0, 1), (0, 2), (1, 2)].iter().map(|&(a, b)| (sectional_curvature(&g, a, b) + 1.0).abs()).fold(0.0, f64::max))
}

/// A tube of radius `ε` about a singular curve of cone angle `α` whose core
/// has complex length `longitude`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeTube {
    pub alpha: f64,
    pub eps: f64,
    pub longitude: Complex64,
}

impl ConeTube {
    pub fn new(alpha: f64, eps: f64, longitude: Complex64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("cone angle must be positive, got {alpha}")));
        }
        check_radius(eps)?;
        if !(longitude.re > 0.0) {
            return Err(Error::InvalidParameter(format!("longitude needs positive real part, got {longitude}")));
        }
        Ok(ConeTube { alpha, eps, longitude })
    }

    /// Cone angles above `2π` are accepted but fall outside the rigidity
    /// hypothesis.
    pub fn exceeds_two_pi(&self) -> bool {
        self.alpha > 2.0 * PI
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeGeometry {
    pub meridian_length: f64,
    pub longitude_length: f64,
    pub area: f64,
}

pub fn tube_boundary_geometry(tube: &ConeTube) -> TubeGeometry {
    let meridian_length = tube.alpha * tube.eps.sinh();
    let longitude_length = tube.longitude.re * tube.eps.cosh();
    TubeGeometry { meridian_length, longitude_length, area: meridian_length * longitude_length }
}

/// Area of the torus `r = ε` by quadrature of the induced area form
/// `√(g_θθ g_zz) dθ dz` over `[0, α] × [0, Re L]`.
pub fn tube_area_quadrature(tube: &ConeTube, rule: &GaussLegendre) -> Result<f64> {
    let g = cone_metric_eval(tube.eps)?;
    let mut total = 0.0;
    for (_, wa) in rule.on(0.0, tube.alpha) {
        for (_, wz) in rule.on(0.0, tube.longitude.re) {
            total += wa * wz * (g[1] * g[2]).sqrt();
        }
    }
    Ok(total)
}
