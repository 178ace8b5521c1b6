//! The verification suites. Each suite is a list of independent checks;
//! checks run in parallel, and every check draws its samples from its own
//! generator seeded with the run's seed, so output does not depend on
//! scheduling.

use crate::config::{ConfigError, SuiteConfig, JET_TOL, ORACLE_TOL, QUADRATURE_TOL};
use crate::report::{CheckReport, Detail, Status};
use hypdef_core::boundary::{boundary_norm_identity, Prism};
use hypdef_core::calculus::{
    d_with_table, delta_routes_residual, ext_d, frame_killing_tables, h_algebraic_residual, laplacian_e, mm_residual,
    product_formula_residual, table_diff, weitzenbock_residual,
};
use hypdef_core::cone::{cone_curvature_check, tube_area_quadrature, tube_boundary_geometry, ConeTube};
use hypdef_core::convex::{chain_rule_residual, decay_probe, parallel_curvature, DecayQuantity, SurfaceGerm};
use hypdef_core::cusp::{
    cusp_form, cusp_l2_integral, cusp_trace_derivatives, teichmuller_derivative, v1, v2, CuspDeformation, CuspTorus,
    L2Norm,
};
use hypdef_core::frame::{d_table, del_table};
use hypdef_core::horosphere::{ds_residual, horosphere_extend, laplacian_residual};
use hypdef_core::quadrature::GaussLegendre;
use hypdef_core::repvar::{
    killing_path, length_from_trace, path_derivatives, trace_derivative_parabolic, trace_from_length, PathKind,
    StepOptions,
};
use hypdef_core::sample::Sampler;
use hypdef_core::vector::real_weitzenbock_residual;
use hypdef_core::{jet_of, BoundaryField, FieldExpr, HPoint, Mobius, Ops};
use num_complex::Complex64;
use rayon::prelude::*;

type CoreResult<T> = hypdef_core::Result<T>;
type Check = Box<dyn Fn() -> CheckReport + Send + Sync>;

/// Heights of the decay grid.
pub const DECAY_GRID: [f64; 5] = [0.5, 0.2, 0.1, 0.05, 0.02];
/// Allowed growth of `norm/t²` below the reference height of the decay grid.
pub const DECAY_FACTOR: f64 = 10.0;

/// Runs one suite and returns its reports sorted by `check_id`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, ConfigError> {
    let checks = match cfg.suite.as_str() {
        "frame-tables" => frame_tables(cfg),
        "weitzenbock" => weitzenbock(cfg),
        "real-weitzenbock" => real_weitzenbock(cfg),
        "product-formula" => product_formula(cfg)?,
        "horosphere" => horosphere(cfg)?,
        "parallel" => parallel(cfg)?,
        "decay" => decay(cfg)?,
        "cusp" => cusp(cfg)?,
        "cone" => cone(cfg)?,
        "repvar" => repvar(cfg),
        other => return Err(ConfigError::UnknownSuite(other.to_string())),
    };
    let mut reports: Vec<CheckReport> = checks.par_iter().map(|c| c()).collect();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(reports)
}

fn label(p: &HPoint<f64>) -> String {
    format!("p=({:.6}, {:.6}, {:.6})", p.x, p.y, p.t)
}

fn infinite_on_error(r: CoreResult<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

/// A check that evaluates `residual` at `samples` points from the seeded
/// sampler. The closure gets the sampler too, for drawing the sample's data.
fn pointwise(
    cfg: &SuiteConfig,
    id: &'static str,
    default_tol: f64,
    residual: impl Fn(&mut Sampler, &HPoint<f64>) -> CoreResult<f64> + Send + Sync + 'static,
) -> Check {
    let (seed, n, tol) = (cfg.seed, cfg.samples, cfg.tolerance(default_tol));
    Box::new(move || {
        let mut s = Sampler::new(seed);
        let errors = (0..n)
            .map(|_| {
                let p = s.point();
                match residual(&mut s, &p) {
                    Ok(e) => (label(&p), e),
                    Err(err) => (format!("{}: {err}", label(&p)), f64::INFINITY),
                }
            })
            .collect();
        CheckReport::from_errors(id, tol, seed, errors)
    })
}

fn parse_field(src: &str) -> Result<FieldExpr, ConfigError> {
    FieldExpr::parse(src).map_err(|e| ConfigError::Field { expr: src.to_string(), reason: e.to_string() })
}

fn boundary_field(src: &str) -> Result<BoundaryField, ConfigError> {
    BoundaryField::new(parse_field(src)?)
        .map_err(|e| ConfigError::Field { expr: src.to_string(), reason: e.to_string() })
}

fn germ(cfg: &SuiteConfig) -> Result<SurfaceGerm<f64>, ConfigError> {
    SurfaceGerm::new(cfg.k1, cfg.k2).map_err(|e| ConfigError::Parameter(e.to_string()))
}

fn frame_tables(cfg: &SuiteConfig) -> Vec<Check> {
    vec![
        pointwise(cfg, "frame-tables.d", JET_TOL, |_, p| Ok(table_diff(&frame_killing_tables(p)?.d, &d_table()))),
        pointwise(cfg, "frame-tables.del", JET_TOL, |_, p| Ok(table_diff(&frame_killing_tables(p)?.del, &del_table()))),
        // the exterior derivative through the frame table against the operator
        pointwise(cfg, "frame-tables.ext-d", JET_TOL, |s, p| {
            let a = s.eform(1, *p);
            Ok(d_with_table(&a, &d_table()).max_diff(&ext_d(&a)?))
        }),
    ]
}

fn weitzenbock(cfg: &SuiteConfig) -> Vec<Check> {
    vec![
        pointwise(cfg, "weitzenbock.complex", JET_TOL, |s, p| weitzenbock_residual(&s.eform(1, *p))),
        pointwise(cfg, "weitzenbock.delta-routes", JET_TOL, |s, p| delta_routes_residual(&s.eform(1, *p))),
        pointwise(cfg, "weitzenbock.matsushima-murakami", JET_TOL, |s, p| mm_residual(&s.eform(1, *p))),
    ]
}

fn real_weitzenbock(cfg: &SuiteConfig) -> Vec<Check> {
    vec![pointwise(cfg, "real-weitzenbock", JET_TOL, |s, p| real_weitzenbock_residual(&s.vector_field(*p)))]
}

fn product_formula(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let f = parse_field(cfg.field.as_deref().unwrap_or("z^2*conj(z) + t^2"))?;
    let g = f.clone();
    Ok(vec![
        pointwise(cfg, "product-formula.h-algebraic", JET_TOL, move |s, p| {
            h_algebraic_residual(&jet_of(&g, p), &s.eform(1, *p))
        }),
        pointwise(cfg, "product-formula.laplacian", JET_TOL, move |s, p| {
            product_formula_residual(&jet_of(&f, p), &s.eform(0, *p))
        }),
    ])
}

fn horosphere(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let (general, holomorphic) = match cfg.field.as_deref() {
        Some(src) => (boundary_field(src)?, boundary_field(src)?),
        None => (boundary_field("z^2*conj(z)")?, boundary_field("z^3")?),
    };
    let mut checks = vec![pointwise(cfg, "horosphere.laplacian", JET_TOL, move |_, p| laplacian_residual(&general, p))];
    // the ds closed form and harmonicity need a holomorphic field
    let probe = HPoint::new(0.5, 0.5, 1.0).expect("valid point");
    if holomorphic.require_holomorphic(&probe).is_ok() {
        let h = holomorphic.clone();
        checks.push(pointwise(cfg, "horosphere.ds", JET_TOL, move |_, p| ds_residual(&h, p)));
        checks.push(pointwise(cfg, "horosphere.harmonic", JET_TOL, move |_, p| {
            Ok(laplacian_e(&horosphere_extend(&holomorphic, p))?.max_abs())
        }));
    }
    Ok(checks)
}

/// Heights for the parallel-surface flow, log-uniform in `[0.01, 1]`.
fn flow_heights(seed: u64, n: usize) -> Vec<f64> {
    let mut s = Sampler::new(seed);
    (0..n).map(|_| s.uniform(0.01f64.ln(), 0.0).exp()).collect()
}

fn heightwise(
    cfg: &SuiteConfig,
    id: &'static str,
    residual: impl Fn(f64) -> CoreResult<f64> + Send + Sync + 'static,
) -> Check {
    let (seed, n, tol) = (cfg.seed, cfg.samples, cfg.tolerance(JET_TOL));
    Box::new(move || {
        let errors = flow_heights(seed, n)
            .into_iter()
            .map(|t| match residual(t) {
                Ok(e) => (format!("t={t:.6}"), e),
                Err(err) => (format!("t={t:.6}: {err}"), f64::INFINITY),
            })
            .collect();
        CheckReport::from_errors(id, tol, seed, errors)
    })
}

fn parallel(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let g = germ(cfg)?;
    let (k1, k2) = (cfg.k1, cfg.k2);
    Ok(vec![
        heightwise(cfg, "parallel.chain-rule", move |t| chain_rule_residual(&g, t)),
        heightwise(cfg, "parallel.fixed-point", |t| Ok((parallel_curvature(1.0, t)? - 1.0).abs())),
        Box::new({
            let (seed, tol) = (cfg.seed, cfg.tolerance(JET_TOL));
            move || {
                let errors = [k1, k2]
                    .into_iter()
                    .map(|k| (format!("k={k}"), infinite_on_error(parallel_curvature(k, 1.0).map(|v| (v - k).abs()))))
                    .collect();
                CheckReport::from_errors("parallel.identity", tol, seed, errors)
            }
        }),
    ])
}

fn decay(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let f = boundary_field(cfg.field.as_deref().unwrap_or("z^3"))?;
    let g = germ(cfg)?;
    let (seed, tol) = (cfg.seed, cfg.tolerance(DECAY_FACTOR));
    Ok(DecayQuantity::ALL
        .into_iter()
        .map(|q| {
            let f = f.clone();
            Box::new(move || {
                let id = format!("decay.{}", q.name().replace('_', "-"));
                let rows = match decay_probe(q, &f, &g, &DECAY_GRID) {
                    Ok(rows) => rows,
                    Err(e) => return CheckReport::from_errors(&id, tol, seed, vec![(e.to_string(), f64::INFINITY)]),
                };
                // norm/t² relative to its value at the grid point nearest
                // t = 0.1, over the grid at or below that point
                let reference = rows
                    .iter()
                    .min_by(|a, b| (a.t - 0.1).abs().total_cmp(&(b.t - 0.1).abs()))
                    .copied()
                    .expect("non-empty grid");
                let errors = rows
                    .iter()
                    .filter(|r| r.t <= reference.t)
                    .map(|r| {
                        let e = if reference.ratio > 0.0 {
                            r.ratio / reference.ratio
                        } else if r.ratio <= 1e-12 {
                            0.0
                        } else {
                            f64::INFINITY
                        };
                        (format!("t={} norm={:.6e}", r.t, r.norm), e)
                    })
                    .collect();
                CheckReport::from_errors(&id, tol, seed, errors)
            }) as Check
        })
        .collect())
}

fn cusp(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let torus = CuspTorus::new(cfg.tau, 1.0).map_err(|e| ConfigError::Parameter(e.to_string()))?;
    let def = CuspDeformation { b1: cfg.b1, b2: cfg.b2 };
    let (seed, tau) = (cfg.seed, torus.tau);
    let l2_tol = cfg.tolerance(QUADRATURE_TOL);
    let trace_tol = cfg.tolerance(JET_TOL);
    let boundary_tol = cfg.tolerance(QUADRATURE_TOL);
    let checks: Vec<Check> = vec![
        pointwise(cfg, "cusp.harmonic", JET_TOL, move |_, p| {
            let om = cusp_form(&def, p);
            let ops = Ops::at(p)?;
            Ok(ops.d(&om)?.max_abs().max(ops.delta(&om)?.max_abs()).max(om.trace_jet().value().norm()))
        }),
        pointwise(cfg, "cusp.pointwise-norm", JET_TOL, move |_, p| {
            let want = def.b1.norm_sqr() + p.t.powi(4) * def.b2.norm_sqr();
            Ok((cusp_form(&def, p).norm_sq() - want).abs())
        }),
        Box::new(move || l2_check(&torus, &def, l2_tol, seed)),
        Box::new(move || {
            let region = Prism::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), tau, 1.0, 2.0);
            let r = region.and_then(|region| {
                boundary_norm_identity(&region, |p| Ok(cusp_form(&def, p)), &GaussLegendre::new(12), 1e-8)
            });
            let (sample, e) = match r {
                Ok(r) => (
                    format!("interior={:.12} boundary={:.12}", r.interior, r.boundary),
                    relative(r.boundary, r.interior),
                ),
                Err(e) => (e.to_string(), f64::INFINITY),
            };
            CheckReport::from_errors("cusp.boundary-identity", boundary_tol, seed, vec![(sample, e)])
        }),
        Box::new(move || {
            let printed = [[Complex64::new(0.0, 0.0); 2], [Complex64::new(-0.5, 0.0), -tau * tau / 2.0]];
            let mut errors = Vec::new();
            for (i, (name, v)) in [("v1", v1()), ("v2", v2())].into_iter().enumerate() {
                match cusp_trace_derivatives(&torus, &v) {
                    Ok(d) => {
                        for k in 0..2 {
                            errors.push((format!("{name} gamma{}", k + 1), (d[k] - printed[i][k]).norm()));
                        }
                    }
                    Err(e) => errors.push((e.to_string(), f64::INFINITY)),
                }
            }
            CheckReport::from_errors("cusp.trace-derivatives", trace_tol, seed, errors)
        }),
        Box::new(move || {
            let e = infinite_on_error(teichmuller_derivative(tau).map(|t| (t.length - 1.0).abs()));
            CheckReport::from_errors("cusp.teichmuller-length", trace_tol, seed, vec![(format!("tau={tau}"), e)])
        }),
    ];
    Ok(checks)
}

fn relative(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

/// The `L²` norm over the cusp: finite and equal to `|b₁|² Im τ / 2` when
/// `b₂ = 0`, divergent otherwise.
fn l2_check(torus: &CuspTorus, def: &CuspDeformation, tol: f64, seed: u64) -> CheckReport {
    const ID: &str = "cusp.l2";
    let expect_divergence = def.b2.norm() > 0.0;
    match cusp_l2_integral(torus, def, &GaussLegendre::new(8)) {
        Ok(L2Norm::Finite(v)) => {
            let want = def.b1.norm_sqr() * torus.tau.im / 2.0;
            let e = if expect_divergence { f64::INFINITY } else { relative(v, want) };
            CheckReport::from_errors(ID, tol, seed, vec![(format!("integral={v:.12} expected={want:.12}"), e)])
        }
        Ok(L2Norm::Diverges { exponent }) => CheckReport {
            check_id: ID.to_string(),
            status: if expect_divergence { Status::Diverges } else { Status::Fail },
            max_error: exponent,
            tolerance: tol,
            samples: 1,
            seed,
            details: vec![Detail { sample: format!("partial integrals grow like T^{exponent:.6}"), error: exponent }],
        },
        Err(e) => CheckReport::from_errors(ID, tol, seed, vec![(e.to_string(), f64::INFINITY)]),
    }
}

fn cone(cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    let tube = ConeTube::new(cfg.alpha, cfg.eps, Complex64::new(1.0, 0.0))
        .map_err(|e| ConfigError::Parameter(e.to_string()))?;
    let (seed, n) = (cfg.seed, cfg.samples.max(2));
    let curv_tol = cfg.tolerance(JET_TOL);
    let area_tol = cfg.tolerance(QUADRATURE_TOL);
    Ok(vec![
        Box::new(move || {
            let errors = (0..n)
                .map(|k| {
                    let r = 0.05 + (3.0 - 0.05) * k as f64 / (n - 1) as f64;
                    (format!("r={r:.6}"), infinite_on_error(cone_curvature_check(r)))
                })
                .collect();
            CheckReport::from_errors("cone.curvature", curv_tol, seed, errors)
        }),
        Box::new(move || {
            let exact = tube_boundary_geometry(&tube).area;
            let e = infinite_on_error(tube_area_quadrature(&tube, &GaussLegendre::new(6)).map(|a| relative(a, exact)));
            let sample = format!("alpha={} eps={} area={exact:.12}", tube.alpha, tube.eps);
            CheckReport::from_errors("cone.tube-area", area_tol, seed, vec![(sample, e)])
        }),
    ])
}

fn repvar(cfg: &SuiteConfig) -> Vec<Check> {
    let (seed, n) = (cfg.seed, cfg.samples);
    let trip_tol = cfg.tolerance(JET_TOL);
    let path_tol = cfg.tolerance(ORACLE_TOL);
    vec![
        Box::new(move || {
            let mut s = Sampler::new(seed);
            let errors = (0..n)
                .map(|k| {
                    // alternate loxodromic and elliptic lengths
                    let l = if k % 2 == 0 {
                        Complex64::new(s.uniform(0.01, 3.0), s.uniform(-3.0, 3.0))
                    } else {
                        Complex64::new(0.0, s.uniform(0.01, 3.1))
                    };
                    (format!("L={l:.6}"), (length_from_trace(trace_from_length(l)) - l).norm())
                })
                .collect();
            CheckReport::from_errors("repvar.round-trip", trip_tol, seed, errors)
        }),
        Box::new(move || {
            let mut s = Sampler::new(seed);
            let errors = (0..n)
                .map(|_| {
                    let beta = s.complex(1.0);
                    let field = s.killing_field();
                    let path = killing_path(&field, &Mobius::translation(beta));
                    let got = path_derivatives(path, PathKind::Trace, StepOptions::default());
                    let e = infinite_on_error(got.map(|d| (d - trace_derivative_parabolic(beta, &field)).norm()));
                    (format!("beta={beta:.6}"), e)
                })
                .collect();
            CheckReport::from_errors("repvar.parabolic-trace", path_tol, seed, errors)
        }),
    ]
}
