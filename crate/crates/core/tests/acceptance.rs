//! Acceptance checks. Prints one line per criterion and exits non-zero on any
//! unexpected result.
//!
//! Criteria 6 and 7 are expected to fail: the published lower bounds on
//! `‖Re Vⁿ‖` (n ≥ 3), `‖Im Vⁿ‖` (n ≥ 4) and `‖(Re Vⁿ)²‖_HS` (n ≥ 2) exceed
//! the true values, which three independent routes agree on. They run at
//! full tolerance and print `[FAIL]`; the process only errors if the set of
//! failing criteria differs from `EXPECTED_RED`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use volterra_core::accretivity::{boundary_distance, is_accretive_quadratic, AccretivityProbe, QuadCoeffs, Witness};
use volterra_core::analytic::{imv_eigenvalues, rev2_eigenvalues, solve_coth_eq, RootSolverConfig};
use volterra_core::combinatorics::factorial;
use volterra_core::norms::{
    double_integral_check, hs_exact, hs_re_im, hs_sq_diff, hs_sq_re_lower, hs_vn, known_exact_opnorms, opnorm_bounds,
};
use volterra_core::numerical_range::{
    discrete_rayleigh_point, hull_contains, inner_left_endpoint, range_interval, rayleigh_probe_re,
};
use volterra_core::pencil::{build_pencil, pencil_eigenpairs, pencil_eigenvalues};
use volterra_core::quadrature::integrate_unit_square;
use volterra_core::spectrum::by_modulus;
use volterra_core::{assemble, Grid, KernelSpec, Part, PowerIndex, Spectrum, VolterraSplit};

const EXPECTED_RED: &[u8] = &[6, 7];

const M: usize = 1000;
const M_SMALL: usize = 500;

fn p(n: u32) -> PowerIndex {
    PowerIndex::new(n).unwrap()
}

fn op(part: Part, n: u32, m: usize) -> volterra_core::OperatorMatrix {
    assemble(KernelSpec::new(part, p(n)), Grid::new(m).unwrap())
}

#[derive(Default)]
struct Check {
    failures: Vec<String>,
    count: usize,
}

impl Check {
    fn that(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(msg());
        }
    }
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Per-power discretized data at m = 1000, computed once and shared.
struct Discretized {
    re: Vec<Spectrum>,
    im: Vec<Spectrum>,
    v_norm: Vec<f64>,
    re_hs: Vec<f64>,
    im_hs: Vec<f64>,
    v_hs: Vec<f64>,
    re_sq_hs: Vec<f64>,
}

fn discretize() -> Discretized {
    let per_n: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=8u32)
            .map(|n| {
                s.spawn(move || {
                    let re = op(Part::RealPart, n, M);
                    let im = op(Part::ImagPart, n, M);
                    let v = op(Part::FullV, n, M);
                    let re_sq_hs = if n <= 6 { re.squared().norm() } else { f64::NAN };
                    (
                        re.spectrum().unwrap(),
                        im.spectrum().unwrap(),
                        v.op_norm(),
                        re.hs_norm(),
                        im.hs_norm(),
                        v.hs_norm(),
                        re_sq_hs,
                    )
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut d = Discretized {
        re: vec![],
        im: vec![],
        v_norm: vec![],
        re_hs: vec![],
        im_hs: vec![],
        v_hs: vec![],
        re_sq_hs: vec![],
    };
    for (re, im, v, rh, ih, vh, sq) in per_n {
        d.re.push(re);
        d.im.push(im);
        d.v_norm.push(v);
        d.re_hs.push(rh);
        d.im_hs.push(ih);
        d.v_hs.push(vh);
        d.re_sq_hs.push(sq);
    }
    d
}

fn pencil_closed_forms(c: &mut Check) {
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let s345 = 345f64.sqrt();
    let im4 = |sign: f64| (1575.0 + sign * 84.0 * s345).sqrt() / 5040.0;
    let cases: [(u32, Vec<f64>); 4] = [
        (1, vec![0.5]),
        (2, vec![s3 / 12.0, -s3 / 12.0]),
        (3, vec![-1.0 / 24.0, 1.0 / 48.0 + s5 / 80.0, 1.0 / 48.0 - s5 / 80.0]),
        (4, vec![im4(1.0), -im4(1.0), im4(-1.0), -im4(-1.0)]),
    ];
    for (n, want) in cases {
        let got = sorted(pencil_eigenvalues(&build_pencil(p(n)).unwrap()).unwrap().spectrum.values());
        let want = sorted(want);
        c.that(got.len() == want.len(), || format!("n={n}: {} values, expected {}", got.len(), want.len()));
        for (g, w) in got.iter().zip(&want) {
            c.that((g - w).abs() <= 1e-10, || format!("n={n}: {g} vs {w}"));
        }
    }
}

fn pencil_counts(c: &mut Check) {
    for n in 1..=10 {
        let pair = build_pencil(p(n)).unwrap();
        match pencil_eigenvalues(&pair) {
            Ok(ps) => c.that(ps.spectrum.len() <= n as usize, || format!("n={n}: {} eigenvalues", ps.spectrum.len())),
            Err(e) => c.that(false, || format!("n={n}: {e}")),
        }
        if n <= 6 {
            match pencil_eigenpairs(&pair) {
                Ok(pairs) => {
                    for e in pairs {
                        c.that(e.residual < 1e-8, || format!("n={n} λ={}: residual {:e}", e.lambda, e.residual));
                    }
                }
                Err(e) => c.that(false, || format!("n={n} eigenpairs: {e}")),
            }
        }
    }
}

fn root_solver(c: &mut Check) {
    let rho = solve_coth_eq(&RootSolverConfig::default()).unwrap();
    c.that((rho - 1.199678640).abs() <= 1e-8, || format!("rho = {rho}"));
    let r = (1.0 / rho.tanh() - rho).abs();
    c.that(r < 1e-12, || format!("|coth rho - rho| = {r:e}"));
}

fn compare_top(c: &mut Check, label: &str, analytic: &[f64], discretized: &Spectrum, rel: f64) {
    let mut d = discretized.values();
    d.sort_by(|a, b| by_modulus(*a, *b));
    for (i, a) in analytic.iter().enumerate() {
        let got = d[i];
        c.that(rel_close(got, *a, rel), || format!("{label} #{i}: discretized {got} vs {a}"));
    }
}

fn spectral_cross_validation(c: &mut Check, d: &Discretized) {
    let imv = imv_eigenvalues(5).unwrap().values();
    compare_top(c, "Im V", &imv, &d.im[0], 2e-2);
    let rev2 = rev2_eigenvalues(8).unwrap().values();
    compare_top(c, "Re V^2", &rev2, &d.re[1], 1e-2);
}

fn hs_identities(c: &mut Check, d: &Discretized) {
    for n in 1..=20 {
        let r = hs_re_im(p(n)) / hs_vn(p(n));
        c.that((r - 0.5f64.sqrt()).abs() <= 1e-15, || format!("n={n}: ratio {r}"));
    }
    for n in 1..=6u32 {
        let i = n as usize - 1;
        for (part, got) in [(Part::RealPart, d.re_hs[i]), (Part::ImagPart, d.im_hs[i]), (Part::FullV, d.v_hs[i])] {
            let want = hs_exact(part, p(n));
            c.that(rel_close(got, want, 1e-2), || format!("{} n={n}: {got} vs {want}", part.name()));
        }
    }
    c.that(d.re_hs[0] == 0.5, || format!("discretized ‖Re V‖_HS = {}", d.re_hs[0]));
    c.that(hs_re_im(p(1)) == 0.5, || format!("‖Re V‖_HS = {}", hs_re_im(p(1))));
}

fn bound_sandwiches(c: &mut Check, d: &Discretized) {
    for n in 1..=8u32 {
        let i = n as usize - 1;
        for (part, got) in [
            (Part::FullV, d.v_norm[i]),
            (Part::RealPart, d.re[i].max_abs()),
            (Part::ImagPart, d.im[i].max_abs()),
        ] {
            let (lo, hi) = opnorm_bounds(part, p(n));
            let slack = 1e-3 * hi.max(1.0);
            c.that(got >= lo - slack, || format!("{} n={n}: {got:.6e} below lower {lo:.6e}", part.name()));
            c.that(got <= hi + slack, || format!("{} n={n}: {got:.6e} above upper {hi:.6e}", part.name()));
        }
    }
    for k in known_exact_opnorms().unwrap() {
        let (lo, hi) = opnorm_bounds(k.part, k.n);
        let label = format!("{} n={} = {}", k.part.name(), k.n, k.formula);
        c.that(k.value >= lo - 1e-12, || format!("{label}: {:.6e} below lower {lo:.6e}", k.value));
        c.that(k.value <= hi + 1e-12, || format!("{label}: {:.6e} above upper {hi:.6e}", k.value));
        let i = k.n.usize() - 1;
        let disc = match k.part {
            Part::RealPart => d.re[i].max_abs(),
            _ => d.im[i].max_abs(),
        };
        c.that(rel_close(disc, k.value, 1e-2), || format!("{label}: discretized {disc}"));
    }
}

fn squared_norm_chain(c: &mut Check, d: &Discretized) {
    for n in 1..=10 {
        let (a, b) = (hs_sq_diff(p(n)), hs_re_im(p(2 * n)));
        c.that((a - b).abs() <= 1e-15, || format!("n={n}: {a} vs {b}"));
    }
    for n in 1..=6u32 {
        let got = d.re_sq_hs[n as usize - 1];
        let lower = hs_sq_re_lower(p(n));
        let slack = 1e-3 * lower.max(1.0);
        c.that(got >= lower - slack, || format!("n={n}: ‖(Re V^n_h)²‖_HS = {got:.6e} < {lower:.6e} - {slack:e}"));
    }
}

fn symmetry_and_perron(c: &mut Check, d: &Discretized) {
    for n in 1..=8usize {
        let im = d.im[n - 1].ascending();
        let mirrored: Vec<f64> = im.iter().rev().map(|v| -v).collect();
        c.that(im == mirrored, || format!("Im n={n}: spectrum not symmetric"));
        let top = d.re[n - 1].top().unwrap();
        c.that(top > 0.0, || format!("Re n={n}: top eigenvalue {top}"));
    }
}

fn numerical_range(c: &mut Check) {
    let rho = solve_coth_eq(&RootSolverConfig::default()).unwrap();
    let s3 = 3f64.sqrt() / 12.0;
    let im4 = (1575.0 + 84.0 * 345f64.sqrt()).sqrt() / 5040.0;
    let table = [
        (Part::RealPart, 1, 0.0, 0.5),
        (Part::RealPart, 2, -1.0 / (PI * PI), 1.0 / (4.0 * rho * rho)),
        (Part::RealPart, 3, -1.0 / 24.0, 1.0 / 48.0 + 5f64.sqrt() / 80.0),
        (Part::ImagPart, 1, -1.0 / PI, 1.0 / PI),
        (Part::ImagPart, 2, -s3, s3),
        (Part::ImagPart, 4, -im4, im4),
    ];
    for (part, n, lo, hi) in table {
        let r = range_interval(part, p(n), M).unwrap().interval;
        c.that((r.lo - lo).abs() <= 1e-10 && (r.hi - hi).abs() <= 1e-10, || {
            format!("W({} n={n}) = [{}, {}], expected [{lo}, {hi}]", part.name(), r.lo, r.hi)
        });
    }

    let split = VolterraSplit::new(Grid::new(M_SMALL).unwrap());
    let nodes = split.grid().nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let modes = rng.gen_range(1..=8);
        let coeffs: Vec<(f64, f64)> = (0..2 * modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let field = |x: f64, pick: fn(&(f64, f64)) -> f64| -> f64 {
            coeffs.iter().enumerate().map(|(k, cf)| pick(cf) * (k as f64 * PI * x + 0.3 * k as f64).cos()).sum()
        };
        let u = DVector::from_iterator(M_SMALL, nodes.iter().map(|&x| field(x, |c| c.0)));
        let w = DVector::from_iterator(M_SMALL, nodes.iter().map(|&x| field(x, |c| c.1)));
        let pt = discrete_rayleigh_point(&split, &u, &w).unwrap();
        c.that(hull_contains(pt, 2e-2), || format!("sample {i}: ({}, {}) outside W(V)", pt.x, pt.y));
    }

    for n in 1..=6u32 {
        let nf = n as f64;
        let probe = rayleigh_probe_re(p(n)).unwrap();
        let closed = -3.0 * (nf - 1.0) / ((nf + 3.0) * factorial(n as usize + 1));
        c.that((probe - closed).abs() <= 1e-12, || format!("probe n={n}: {probe} vs {closed}"));
        let endpoint = inner_left_endpoint(p(n));
        c.that(probe <= endpoint, || format!("probe n={n}: {probe} > endpoint {endpoint}"));
        let r = range_interval(Part::RealPart, p(n), M).unwrap().interval;
        c.that(r.lo <= probe + 1e-12, || format!("n={n}: W(Re) starts at {} > probe {probe}", r.lo));
    }
}

fn accretivity(c: &mut Check) {
    let probe = AccretivityProbe::new(Grid::new(M_SMALL).unwrap());
    let steps: Vec<f64> = (0..=8).map(|i| -2.0 + 0.5 * i as f64).collect();
    for &a in &steps {
        for &b in &steps {
            let q = QuadCoeffs::new(a, b).unwrap();
            let v = probe.certify(q).unwrap();
            let e = v.min_eig_certificate.unwrap();
            c.that(v.predicate == is_accretive_quadratic(q), || format!("({a},{b}): predicate"));
            if v.predicate {
                c.that(e >= -1e-6, || format!("({a},{b}): accretive but min eig {e:e}"));
            } else {
                c.that(v.witness.is_some(), || format!("({a},{b}): no witness"));
                if boundary_distance(q) > 0.05 {
                    c.that(e < -1e-6, || format!("({a},{b}): not accretive but min eig {e:e}"));
                    let wv = v.witness_value.unwrap();
                    c.that(wv < 0.0, || format!("({a},{b}): witness {:?} value {wv:e}", v.witness));
                    let family_ok = match v.witness {
                        Some(Witness::XMinusHalf) => b > 0.0,
                        Some(Witness::Spike(_)) => b <= 0.0 && 2.0 * a + b < 0.0,
                        None => false,
                    };
                    c.that(family_ok, || format!("({a},{b}): witness {:?}", v.witness));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..20 {
        let b = -rng.gen_range(0.0..4.0);
        let a = -b / 2.0 + rng.gen_range(0.0..4.0);
        let r = probe.resolvent_norm(QuadCoeffs::new(a, b).unwrap()).unwrap();
        c.that(r <= 1.0 + 1e-6, || format!("point {i} ({a},{b}): resolvent norm {r}"));
    }
}

fn double_integral(c: &mut Check) {
    for n in 1..=6u32 {
        let e = 2 * n as i32 - 2;
        let q = integrate_unit_square(|x, t| (x - t).powi(e), 16);
        let want = double_integral_check(p(n));
        c.that(rel_close(q, want, 1e-6), || format!("n={n}: {q} vs {want}"));
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let d = discretize();
    println!("discretized spectra at m={M} in {:.1?}", start.elapsed());
    let criteria: Vec<(u8, &str, Box<dyn Fn(&mut Check) + '_>)> = vec![
        (1, "pencil closed forms", Box::new(pencil_closed_forms)),
        (2, "pencil eigenvalue count and eigenpair residuals", Box::new(pencil_counts)),
        (3, "root solver", Box::new(root_solver)),
        (4, "spectral cross-validation", Box::new(|c| spectral_cross_validation(c, &d))),
        (5, "Hilbert-Schmidt identities", Box::new(|c| hs_identities(c, &d))),
        (6, "operator norm bound sandwiches", Box::new(|c| bound_sandwiches(c, &d))),
        (7, "squared-norm chain", Box::new(|c| squared_norm_chain(c, &d))),
        (8, "symmetry and Perron", Box::new(|c| symmetry_and_perron(c, &d))),
        (9, "numerical range", Box::new(numerical_range)),
        (10, "accretivity", Box::new(accretivity)),
        (11, "double integral", Box::new(double_integral)),
    ];
    let mut red = Vec::new();
    for (id, name, run) in &criteria {
        let mut c = Check::default();
        let t = Instant::now();
        run(&mut c);
        let elapsed = t.elapsed();
        let passed = c.count - c.failures.len();
        if c.failures.is_empty() {
            println!("[PASS] {id:>2} {name} ({passed}/{} checks, {elapsed:.1?})", c.count);
        } else {
            red.push(*id);
            println!("[FAIL] {id:>2} {name} ({passed}/{} checks, {elapsed:.1?})", c.count);
            for f in &c.failures {
                println!("         {f}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.1?}", criteria.len() - red.len(), criteria.len(), start.elapsed());
    if red == EXPECTED_RED {
        println!("failing criteria {red:?} are the documented expected failures");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria {red:?} differ from the expected {EXPECTED_RED:?}");
        ExitCode::FAILURE
    }
}
