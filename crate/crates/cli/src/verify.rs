//! Full reproduction suite behind `volterra verify`.
//!
//! Expected constants are literals here rather than library values, so the
//! suite compares independent routes. Checks of the lower bounds on
//! `‖Re Vⁿ‖` (n ≥ 3), `‖Im Vⁿ‖` (n ≥ 4) and `‖(Re Vⁿ)²‖_HS` (n ≥ 2) are
//! recorded as known failures: those bounds exceed the true values.

use std::f64::consts::PI;

use clap::ValueEnum;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use volterra_core::accretivity::{boundary_distance, is_accretive_quadratic, AccretivityProbe, QuadCoeffs, Witness};
use volterra_core::analytic::{imv_eigenvalues, rev2_eigenvalues, solve_coth_eq, RootSolverConfig};
use volterra_core::combinatorics::factorial;
use volterra_core::norms::{
    double_integral_check, hs_exact, hs_re_im, hs_sq_diff, hs_sq_re_lower, hs_vn, opnorm_bounds,
};
use volterra_core::numerical_range::{discrete_rayleigh_point, hull_contains, inner_left_endpoint, range_interval, rayleigh_probe_re};
use volterra_core::pencil::{build_pencil, pencil_eigenpairs, pencil_eigenvalues};
use volterra_core::quadrature::integrate_unit_square;
use volterra_core::spectrum::by_modulus;
use volterra_core::tolerances::{
    ACCRETIVE_BOUNDARY_BAND, ACCRETIVE_SLACK, BROWN_REGION_TOL, CLOSED_FORM_ABS, CLOSED_FORM_BOUND, DISCRETIZED_REL,
    DOUBLE_INTEGRAL_REL, IDENTITY_ABS, IMV_SPECTRUM_REL, PENCIL_RESIDUAL, RAYLEIGH_PROBE_ABS, RESOLVENT_SLACK,
    ROOT_RESIDUAL, SANDWICH_SLACK,
};
use volterra_core::{assemble, Grid, KernelSpec, Part, PowerIndex, Spectrum, VolterraSplit};

use crate::report::{CheckRecord, Relation, ReportDoc};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    /// Grid for spectra and norms.
    pub fn m(self) -> usize {
        match self {
            Level::Fast => 500,
            Level::Full => 2000,
        }
    }

    /// Grid for the accretivity sweep (81 dense eigensolves).
    pub fn sweep_m(self) -> usize {
        match self {
            Level::Fast => 500,
            Level::Full => 1000,
        }
    }

    /// Factor applied to tolerances of discretized comparisons.
    fn tighten(self) -> f64 {
        match self {
            Level::Fast => 1.0,
            Level::Full => 0.5,
        }
    }
}

/// Closed-form values the suite compares against.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub re_v: f64,
    pub im_v: f64,
    pub im_v2: f64,
    pub re_v3: [f64; 3],
    pub im_v4: [f64; 2],
    pub rho: f64,
    pub re_v2_min: f64,
}

impl Default for Expected {
    fn default() -> Self {
        let s5 = 5f64.sqrt();
        let s345 = 345f64.sqrt();
        Expected {
            re_v: 0.5,
            im_v: 1.0 / PI,
            im_v2: 3f64.sqrt() / 12.0,
            re_v3: [-1.0 / 24.0, 1.0 / 48.0 - s5 / 80.0, 1.0 / 48.0 + s5 / 80.0],
            im_v4: [
                (1575.0 - 84.0 * s345).sqrt() / 5040.0,
                (1575.0 + 84.0 * s345).sqrt() / 5040.0,
            ],
            rho: 1.199678640,
            re_v2_min: -1.0 / (PI * PI),
        }
    }
}

fn p(n: u32) -> PowerIndex {
    PowerIndex::new(n).expect("small power")
}

fn part_name(part: Part) -> &'static str {
    match part {
        Part::FullV => "v",
        Part::FullVAdjoint => "v*",
        Part::RealPart => "re",
        Part::ImagPart => "im",
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn by_mod(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| by_modulus(*a, *b));
    v
}

struct Suite<'a> {
    doc: ReportDoc,
    level: Level,
    expected: &'a Expected,
}

impl Suite<'_> {
    fn check(&mut self, name: String, rel: Relation, expected: f64, actual: Option<f64>, tol: f64) {
        self.doc.check(CheckRecord::new(name, rel, expected, actual, tol));
    }

    fn pencil(&mut self) {
        let e = self.expected;
        let cases: [(u32, Part, Vec<f64>); 4] = [
            (1, Part::RealPart, vec![e.re_v]),
            (2, Part::ImagPart, vec![-e.im_v2, e.im_v2]),
            (3, Part::RealPart, e.re_v3.to_vec()),
            (4, Part::ImagPart, vec![-e.im_v4[1], -e.im_v4[0], e.im_v4[0], e.im_v4[1]]),
        ];
        for (n, part, want) in cases {
            let got = build_pencil(p(n))
                .and_then(|pp| pencil_eigenvalues(&pp))
                .map(|s| sorted(s.spectrum.values()))
                .unwrap_or_default();
            let want = sorted(want);
            let tag = format!("pencil {} n={n}", part_name(part));
            self.check(format!("{tag} count"), Relation::Abs, want.len() as f64, Some(got.len() as f64), 0.0);
            for (i, w) in want.iter().enumerate() {
                self.check(format!("{tag} λ{}", i + 1), Relation::Abs, *w, got.get(i).copied(), CLOSED_FORM_ABS);
            }
        }
        for n in 1..=10 {
            let pair = build_pencil(p(n)).expect("n ≤ 12");
            let count = pencil_eigenvalues(&pair).ok().map(|s| s.spectrum.len() as f64);
            self.check(format!("pencil n={n} count ≤ n"), Relation::Le, n as f64, count, 0.0);
            if n <= 6 {
                match pencil_eigenpairs(&pair) {
                    Ok(pairs) => {
                        for (i, ep) in pairs.iter().enumerate() {
                            self.check(
                                format!("pencil n={n} eigenfunction {} residual", i + 1),
                                Relation::Abs,
                                0.0,
                                Some(ep.residual),
                                PENCIL_RESIDUAL,
                            );
                        }
                    }
                    Err(_) => self.check(format!("pencil n={n} eigenfunctions"), Relation::Abs, 0.0, None, 0.0),
                }
            }
        }
    }

    fn roots(&mut self) {
        let rho = solve_coth_eq(&RootSolverConfig::default()).ok();
        self.check("rho".into(), Relation::Abs, self.expected.rho, rho, 1e-8);
        let residual = rho.map(|r| 1.0 / r.tanh() - r);
        self.check("coth rho - rho".into(), Relation::Abs, 0.0, residual, ROOT_RESIDUAL);
    }

    fn spectra(&mut self, re: &[Spectrum], im: &[Spectrum]) {
        let t = self.level.tighten();
        let imv = imv_eigenvalues(5).map(|f| f.values()).unwrap_or_default();
        let d = by_mod(im[0].values());
        for (i, a) in imv.iter().enumerate() {
            self.check(format!("im v spectrum #{}", i + 1), Relation::Rel, *a, d.get(i).copied(), IMV_SPECTRUM_REL * t);
        }
        let rev2 = rev2_eigenvalues(8).map(|f| f.values()).unwrap_or_default();
        let d = by_mod(re[1].values());
        for (i, a) in rev2.iter().enumerate() {
            self.check(format!("re v2 spectrum #{}", i + 1), Relation::Rel, *a, d.get(i).copied(), DISCRETIZED_REL * t);
        }
    }

    fn hilbert_schmidt(&mut self, grid: Grid) {
        let t = self.level.tighten();
        for n in 1..=20 {
            let r = hs_re_im(p(n)) / hs_vn(p(n));
            self.check(format!("hs ratio n={n}"), Relation::Abs, 0.5f64.sqrt(), Some(r), IDENTITY_ABS);
        }
        for n in 1..=6 {
            for part in [Part::FullV, Part::RealPart, Part::ImagPart] {
                let got = assemble(KernelSpec::new(part, p(n)), grid).hs_norm();
                self.check(
                    format!("hs {} n={n}", part_name(part)),
                    Relation::Rel,
                    hs_exact(part, p(n)),
                    Some(got),
                    DISCRETIZED_REL * t,
                );
            }
        }
        let re1 = assemble(KernelSpec::new(Part::RealPart, p(1)), grid).hs_norm();
        self.check("hs re n=1 exact".into(), Relation::Abs, self.expected.re_v, Some(re1), 0.0);
    }

    fn sandwiches(&mut self, re: &[Spectrum], im: &[Spectrum], v: &[f64]) {
        for n in 1..=8u32 {
            let i = n as usize - 1;
            for (part, got) in [(Part::FullV, v[i]), (Part::RealPart, re[i].max_abs()), (Part::ImagPart, im[i].max_abs())] {
                let (lo, hi) = opnorm_bounds(part, p(n));
                let slack = SANDWICH_SLACK * hi.max(1.0);
                let name = part_name(part);
                let lower = CheckRecord::new(format!("sandwich {name} n={n} lower"), Relation::Ge, lo, Some(got), slack);
                if lower_bound_is_false(part, n) {
                    self.doc.check_known_false(lower);
                } else {
                    self.doc.check(lower);
                }
                self.check(format!("sandwich {name} n={n} upper"), Relation::Le, hi, Some(got), slack);
            }
        }
        let e = self.expected;
        let table = [
            (Part::RealPart, 1, e.re_v),
            (Part::ImagPart, 1, e.im_v),
            (Part::ImagPart, 2, e.im_v2),
            (Part::RealPart, 3, e.re_v3[2]),
            (Part::ImagPart, 4, e.im_v4[1]),
        ];
        let rho = e.rho_exact();
        let table = table.into_iter().chain([(Part::RealPart, 2, 1.0 / (4.0 * rho * rho))]);
        for (part, n, value) in table {
            let (lo, hi) = opnorm_bounds(part, p(n));
            let name = format!("table {} n={n}", part_name(part));
            let lower = CheckRecord::new(format!("{name} lower"), Relation::Ge, lo, Some(value), CLOSED_FORM_BOUND);
            if lower_bound_is_false(part, n) {
                self.doc.check_known_false(lower);
            } else {
                self.doc.check(lower);
            }
            self.check(format!("{name} upper"), Relation::Le, hi, Some(value), CLOSED_FORM_BOUND);
            let disc = if part == Part::RealPart { re[n as usize - 1].max_abs() } else { im[n as usize - 1].max_abs() };
            self.check(format!("{name} discretized"), Relation::Rel, value, Some(disc), DISCRETIZED_REL * self.level.tighten());
        }
    }

    fn squared_norm_chain(&mut self, grid: Grid) {
        for n in 1..=10 {
            self.check(format!("hs sq diff n={n}"), Relation::Abs, hs_re_im(p(2 * n)), Some(hs_sq_diff(p(n))), IDENTITY_ABS);
        }
        for n in 1..=6 {
            let got = assemble(KernelSpec::new(Part::RealPart, p(n)), grid).squared().norm();
            let lower = hs_sq_re_lower(p(n));
            let c = CheckRecord::new(format!("hs sq re n={n}"), Relation::Ge, lower, Some(got), SANDWICH_SLACK * lower.max(1.0));
            if n >= 2 {
                self.doc.check_known_false(c);
            } else {
                self.doc.check(c);
            }
        }
    }

    fn symmetry(&mut self, re: &[Spectrum], im: &[Spectrum]) {
        for n in 1..=8 {
            let asc = im[n - 1].ascending();
            let worst = asc.iter().zip(asc.iter().rev()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
            self.check(format!("im n={n} symmetric"), Relation::Abs, 0.0, Some(worst), 0.0);
            self.check(format!("perron n={n}"), Relation::Gt, 0.0, re[n - 1].top(), 0.0);
        }
    }

    fn numerical_range(&mut self, m: usize) {
        let e = self.expected;
        let rho = e.rho_exact();
        let table = [
            (Part::RealPart, 1, 0.0, e.re_v),
            (Part::RealPart, 2, e.re_v2_min, 1.0 / (4.0 * rho * rho)),
            (Part::RealPart, 3, e.re_v3[0], e.re_v3[2]),
            (Part::ImagPart, 1, -e.im_v, e.im_v),
            (Part::ImagPart, 2, -e.im_v2, e.im_v2),
            (Part::ImagPart, 4, -e.im_v4[1], e.im_v4[1]),
        ];
        for (part, n, lo, hi) in table {
            let r = range_interval(part, p(n), m).ok().map(|r| r.interval);
            let name = format!("nrange {} n={n}", part_name(part));
            self.check(format!("{name} lo"), Relation::Abs, lo, r.map(|r| r.lo), CLOSED_FORM_ABS);
            self.check(format!("{name} hi"), Relation::Abs, hi, r.map(|r| r.hi), CLOSED_FORM_ABS);
        }

        let split = VolterraSplit::new(Grid::new(500).expect("grid"));
        let nodes = split.grid().nodes();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut inside = 0usize;
        for _ in 0..200 {
            let modes = rng.gen_range(1..=8);
            let coeffs: Vec<(f64, f64)> =
                (0..2 * modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let field = |x: f64, pick: fn(&(f64, f64)) -> f64| -> f64 {
                coeffs.iter().enumerate().map(|(k, c)| pick(c) * (k as f64 * PI * x + 0.3 * k as f64).cos()).sum()
            };
            let u = DVector::from_iterator(nodes.len(), nodes.iter().map(|&x| field(x, |c| c.0)));
            let w = DVector::from_iterator(nodes.len(), nodes.iter().map(|&x| field(x, |c| c.1)));
            if discrete_rayleigh_point(&split, &u, &w).is_ok_and(|pt| hull_contains(pt, BROWN_REGION_TOL)) {
                inside += 1;
            }
        }
        self.check("rayleigh points in W(V)".into(), Relation::Abs, 200.0, Some(inside as f64), 0.0);

        for n in 1..=6u32 {
            let nf = n as f64;
            let probe = rayleigh_probe_re(p(n)).ok();
            let closed = -3.0 * (nf - 1.0) / ((nf + 3.0) * factorial(n as usize + 1));
            self.check(format!("probe n={n}"), Relation::Abs, closed, probe, RAYLEIGH_PROBE_ABS);
            self.check(format!("probe n={n} ≤ endpoint"), Relation::Le, inner_left_endpoint(p(n)), probe, 0.0);
        }
    }

    fn accretivity(&mut self) {
        let probe = AccretivityProbe::new(Grid::new(self.level.sweep_m()).expect("grid"));
        let steps: Vec<f64> = (0..=8).map(|i| -2.0 + 0.5 * i as f64).collect();
        for &a in &steps {
            for &b in &steps {
                let q = QuadCoeffs::new(a, b).expect("finite");
                let Ok(v) = probe.certify(q) else {
                    self.check(format!("accretive a={a} b={b}"), Relation::Abs, 0.0, None, 0.0);
                    continue;
                };
                let tag = format!("accretive a={a} b={b}");
                if is_accretive_quadratic(q) {
                    self.check(format!("{tag} certificate"), Relation::Ge, 0.0, v.min_eig_certificate, ACCRETIVE_SLACK);
                } else if boundary_distance(q) > ACCRETIVE_BOUNDARY_BAND {
                    self.check(format!("{tag} certificate"), Relation::Lt, -ACCRETIVE_SLACK, v.min_eig_certificate, 0.0);
                    self.check(format!("{tag} witness"), Relation::Lt, 0.0, v.witness_value, 0.0);
                    let family_ok = match v.witness {
                        Some(Witness::XMinusHalf) => b > 0.0,
                        Some(Witness::Spike(_)) => b <= 0.0,
                        None => false,
                    };
                    self.check(format!("{tag} witness family"), Relation::Abs, 1.0, Some(f64::from(u8::from(family_ok))), 0.0);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in 0..20 {
            let b = -rng.gen_range(0.0..4.0);
            let a = -b / 2.0 + rng.gen_range(0.0..4.0);
            let r = QuadCoeffs::new(a, b).ok().and_then(|q| probe.resolvent_norm(q).ok());
            self.check(format!("resolvent point {}", i + 1), Relation::Le, 1.0, r, RESOLVENT_SLACK);
        }
    }

    fn double_integral(&mut self) {
        for n in 1..=6u32 {
            let e = 2 * n as i32 - 2;
            let q = integrate_unit_square(|x, t| (x - t).powi(e), 16);
            self.check(format!("double integral n={n}"), Relation::Rel, double_integral_check(p(n)), Some(q), DOUBLE_INTEGRAL_REL);
        }
    }
}

impl Expected {
    fn rho_exact(&self) -> f64 {
        solve_coth_eq(&RootSolverConfig::default()).unwrap_or(self.rho)
    }
}

fn lower_bound_is_false(part: Part, n: u32) -> bool {
    match part {
        Part::RealPart => n >= 3,
        Part::ImagPart => n >= 4,
        _ => false,
    }
}

pub fn run(level: Level, expected: &Expected) -> Result<ReportDoc, CliError> {
    let m = level.m();
    let grid = Grid::new(m)?;
    let mut doc = ReportDoc::new("verify");
    doc.input("level", format!("{level:?}").to_lowercase());
    doc.input("m", m);
    doc.input("sweep_m", level.sweep_m());
    let mut suite = Suite { doc, level, expected };

    let mut re = Vec::new();
    let mut im = Vec::new();
    let mut v = Vec::new();
    for n in 1..=8 {
        re.push(assemble(KernelSpec::new(Part::RealPart, p(n)), grid).spectrum()?);
        im.push(assemble(KernelSpec::new(Part::ImagPart, p(n)), grid).spectrum()?);
        v.push(assemble(KernelSpec::new(Part::FullV, p(n)), grid).op_norm());
    }
    suite.pencil();
    suite.roots();
    suite.spectra(&re, &im);
    suite.hilbert_schmidt(grid);
    suite.sandwiches(&re, &im, &v);
    suite.squared_norm_chain(grid);
    suite.symmetry(&re, &im);
    suite.numerical_range(m);
    suite.accretivity();
    suite.double_integral();
    Ok(suite.doc)
}
