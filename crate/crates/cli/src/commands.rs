//! `eigs`, `norms`, `nrange` and `accretive`.

use std::path::Path;

use clap::ValueEnum;

use volterra_core::accretivity::{boundary_distance, AccretivityProbe, QuadCoeffs, Witness, MIN_CERTIFY_GRID};
use volterra_core::analytic::{imv_eigenvalues, rev2_eigenvalues};
use volterra_core::norms::NormReport;
use volterra_core::numerical_range::{
    brown_curve, inner_left_endpoint, range_interval, rayleigh_probe_closed_form, rayleigh_probe_re,
};
use volterra_core::pencil::{build_pencil, pencil_eigenpairs, pencil_eigenvalues};
use volterra_core::tolerances::{
    ACCRETIVE_BOUNDARY_BAND, ACCRETIVE_SLACK, CLOSED_FORM_BOUND, DISCRETIZED_REL, PENCIL_RESIDUAL, RAYLEIGH_PROBE_ABS,
    RESOLVENT_SLACK, SANDWICH_SLACK,
};
use volterra_core::{assemble, Grid, KernelSpec, Part, PowerIndex};

use crate::report::{CheckRecord, Record, Relation, ReportDoc};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Re,
    Im,
    V,
}

impl PartArg {
    pub fn part(self) -> Part {
        match self {
            PartArg::Re => Part::RealPart,
            PartArg::Im => Part::ImagPart,
            PartArg::V => Part::FullV,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Pencil,
    Analytic,
    Discretize,
}

pub fn power(n: u32) -> Result<PowerIndex, CliError> {
    PowerIndex::new(n).map_err(CliError::from)
}

fn label(part: Part, n: PowerIndex) -> String {
    match part {
        Part::FullV => format!("V^{n}"),
        Part::FullVAdjoint => format!("V*^{n}"),
        Part::RealPart => format!("Re V^{n}"),
        Part::ImagPart => format!("Im V^{n}"),
    }
}

fn pencil_applies(part: Part, n: PowerIndex) -> bool {
    (part == Part::RealPart && n.is_odd()) || (part == Part::ImagPart && !n.is_odd())
}

fn analytic_applies(part: Part, n: PowerIndex) -> bool {
    matches!((part, n.get()), (Part::ImagPart, 1) | (Part::RealPart, 2))
}

pub fn eigs(part_arg: PartArg, n: u32, method: Method, count: usize, m: usize) -> Result<ReportDoc, CliError> {
    let n = power(n)?;
    let part = part_arg.part();
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mut doc = ReportDoc::new("eigs");
    doc.input("part", format!("{part_arg:?}").to_lowercase());
    doc.input("n", n);
    doc.input("method", format!("{method:?}").to_lowercase());
    doc.input("count", count);

    if part == Part::FullV {
        if !matches!(method, Method::Auto | Method::Discretize) {
            return Err(CliError::Usage("V has no nonzero eigenvalues; only discretize applies".into()));
        }
        doc.input("m", m);
        let op = assemble(KernelSpec::new(part, n), Grid::new(m)?);
        doc.push(Record::new("spectral radius").kind("quasinilpotent").value("value", 0.0));
        for (i, s) in op.entries().singular_values().iter().take(count).enumerate() {
            doc.push(Record::new(format!("σ{}", i + 1)).kind("discretized singular value").value("value", *s));
        }
        return Ok(doc);
    }

    let chosen = match method {
        Method::Pencil if !pencil_applies(part, n) => {
            return Err(CliError::Usage(format!(
                "the pencil covers Re V^n for odd n and Im V^n for even n, not {}",
                label(part, n)
            )))
        }
        Method::Analytic if !analytic_applies(part, n) => {
            return Err(CliError::Usage(format!(
                "analytic families exist for Im V and Re V^2 only, not {}",
                label(part, n)
            )))
        }
        Method::Auto => {
            let pencil_ok = pencil_applies(part, n)
                && build_pencil(n).and_then(|p| pencil_eigenvalues(&p)).is_ok();
            if pencil_ok {
                Method::Pencil
            } else if analytic_applies(part, n) {
                Method::Analytic
            } else {
                Method::Discretize
            }
        }
        other => other,
    };

    match chosen {
        Method::Pencil => {
            let pair = build_pencil(n)?;
            let spec = pencil_eigenvalues(&pair)?;
            for (i, e) in spec.spectrum.entries().iter().take(count).enumerate() {
                doc.push(
                    Record::new(format!("λ{}", i + 1))
                        .kind("pencil")
                        .value("value", e.value)
                        .value("multiplicity", spec.multiplicity[i] as f64),
                );
            }
            if let Ok(pairs) = pencil_eigenpairs(&pair) {
                for (i, e) in pairs.iter().take(count).enumerate() {
                    doc.check(CheckRecord::new(
                        format!("eigenfunction residual λ{}", i + 1),
                        Relation::Abs,
                        0.0,
                        Some(e.residual),
                        PENCIL_RESIDUAL,
                    ));
                }
            }
        }
        Method::Analytic => {
            let family = if part == Part::ImagPart {
                imv_eigenvalues(count.div_ceil(2))?
            } else {
                rev2_eigenvalues(count)?
            };
            for (i, mem) in family.members().iter().take(count).enumerate() {
                doc.push(
                    Record::new(format!("λ{}", i + 1))
                        .kind(format!("analytic {:?}", mem.kind))
                        .value("value", mem.value)
                        .value("index", mem.index as f64),
                );
            }
        }
        Method::Discretize | Method::Auto => {
            doc.input("m", m);
            let op = assemble(KernelSpec::new(part, n), Grid::new(m)?);
            for (i, v) in op.spectrum()?.values().into_iter().take(count).enumerate() {
                doc.push(Record::new(format!("λ{}", i + 1)).kind("discretized").value("value", v));
            }
        }
    }
    Ok(doc)
}

pub fn norms(n: u32, m: usize) -> Result<ReportDoc, CliError> {
    let n = power(n)?;
    let grid = Grid::new(m)?;
    let mut doc = ReportDoc::new("norms");
    doc.input("n", n);
    doc.input("m", m);
    for part in [Part::FullV, Part::RealPart, Part::ImagPart] {
        let r = NormReport::build(part, n, Some(grid))?;
        let name = label(part, n);
        doc.push(
            Record::new(&name)
                .value("hs", r.hs_exact)
                .value("lower", r.op_lower)
                .value("upper", r.op_upper)
                .value("exact", r.op_exact)
                .value("discretized", r.op_discretized),
        );
        let slack = SANDWICH_SLACK * r.op_upper.max(1.0);
        let lower_is_false = match part {
            Part::RealPart => n.get() >= 3,
            Part::ImagPart => n.get() >= 4,
            _ => false,
        };
        let lower = CheckRecord::new(format!("{name} discretized ≥ lower"), Relation::Ge, r.op_lower, r.op_discretized, slack);
        if lower_is_false {
            doc.check_known_false(lower);
        } else {
            doc.check(lower);
        }
        doc.check(CheckRecord::new(format!("{name} discretized ≤ upper"), Relation::Le, r.op_upper, r.op_discretized, slack));
        if let Some(e) = r.op_exact {
            let lower = CheckRecord::new(format!("{name} exact ≥ lower"), Relation::Ge, r.op_lower, Some(e), CLOSED_FORM_BOUND);
            if lower_is_false {
                doc.check_known_false(lower);
            } else {
                doc.check(lower);
            }
            doc.check(CheckRecord::new(format!("{name} exact ≤ upper"), Relation::Le, r.op_upper, Some(e), CLOSED_FORM_BOUND));
            doc.check(CheckRecord::new(
                format!("{name} discretized ≈ exact"),
                Relation::Rel,
                e,
                r.op_discretized,
                DISCRETIZED_REL,
            ));
        }
    }
    Ok(doc)
}

pub fn nrange(n: u32, points: usize, m: usize, out: Option<&Path>) -> Result<ReportDoc, CliError> {
    let n = power(n)?;
    if out.is_some() && n.get() != 1 {
        return Err(CliError::Usage("the boundary curve of W(V^n) is only known for n = 1".into()));
    }
    let mut doc = ReportDoc::new("nrange");
    doc.input("n", n);
    doc.input("m", m);
    let re = range_interval(Part::RealPart, n, m)?;
    let im = range_interval(Part::ImagPart, n, m)?;
    doc.push(
        Record::new(format!("W(Re V^{n})"))
            .kind(re.source.name())
            .value("lo", re.interval.lo)
            .value("hi", re.interval.hi),
    );
    doc.push(
        Record::new(format!("W(Im V^{n})"))
            .kind(im.source.name())
            .value("lo", im.interval.lo)
            .value("hi", im.interval.hi),
    );
    let probe = rayleigh_probe_re(n)?;
    let endpoint = inner_left_endpoint(n);
    doc.push(Record::new("probe f=1-2x").kind("exact").value("value", probe));
    doc.push(Record::new("inner left endpoint").kind("closed form").value("value", endpoint));
    doc.check(CheckRecord::new(
        "probe closed form",
        Relation::Abs,
        rayleigh_probe_closed_form(n),
        Some(probe),
        RAYLEIGH_PROBE_ABS,
    ));
    doc.check(CheckRecord::new("probe ≤ inner endpoint", Relation::Le, endpoint, Some(probe), 0.0));
    doc.check(CheckRecord::new("probe in W(Re)", Relation::Ge, re.interval.lo, Some(probe), RAYLEIGH_PROBE_ABS));
    doc.check(CheckRecord::new("W(Im) symmetric", Relation::Abs, -im.interval.hi, Some(im.interval.lo), 0.0));

    if n.get() == 1 {
        doc.input("points", points);
        let curve = brown_curve(points)?;
        let top = curve.iter().map(|c| c.upper.y).fold(0.0, f64::max);
        let right = curve.iter().map(|c| c.upper.x).fold(0.0, f64::max);
        doc.push(Record::new("W(V) boundary").kind("curve").value("max x", right).value("max y", top));
        doc.check(CheckRecord::new("curve max x = max W(Re V)", Relation::Abs, re.interval.hi, Some(right), 1e-12));
        doc.check(CheckRecord::new("curve max y = max W(Im V)", Relation::Abs, im.interval.hi, Some(top), 1e-6));
        if let Some(path) = out {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_path(path)
                .map_err(|e| CliError::Io(e.to_string()))?;
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["t", "x", "y_upper", "y_lower"]).map_err(io)?;
            for c in &curve {
                w.write_record([c.t, c.upper.x, c.upper.y, c.lower.y].map(|v| format!("{v:e}")))
                    .map_err(io)?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
            doc.input("out", path.display());
        }
    }
    Ok(doc)
}

pub fn accretive(a: f64, b: f64, m: usize) -> Result<ReportDoc, CliError> {
    let q = QuadCoeffs::new(a, b)?;
    if m < MIN_CERTIFY_GRID {
        return Err(CliError::Usage(format!("--m must be at least {MIN_CERTIFY_GRID}")));
    }
    let probe = AccretivityProbe::new(Grid::new(m)?);
    let v = probe.certify(q)?;
    let dist = boundary_distance(q);
    let mut doc = ReportDoc::new("accretive");
    doc.input("a", a);
    doc.input("b", b);
    doc.input("m", m);
    let min_eig = v.min_eig_certificate;
    doc.push(
        Record::new("verdict")
            .kind(if v.predicate { "accretive" } else { "not accretive" })
            .value("predicate", if v.predicate { 1.0 } else { 0.0 })
            .value("min eig", min_eig)
            .value("boundary distance", dist),
    );
    if let (Some(w), Some(value)) = (v.witness, v.witness_value) {
        let (kind, k) = match w {
            Witness::XMinusHalf => ("x - 1/2".to_string(), None),
            Witness::Spike(k) => (format!("spike k={k}"), Some(k as f64)),
        };
        doc.push(Record::new("witness").kind(kind).value("rayleigh", value).value("k", k));
    }
    if v.predicate {
        doc.check(CheckRecord::new("certificate ≥ -slack", Relation::Ge, 0.0, min_eig, ACCRETIVE_SLACK));
    } else if dist > ACCRETIVE_BOUNDARY_BAND {
        doc.check(CheckRecord::new("certificate < -slack", Relation::Lt, -ACCRETIVE_SLACK, min_eig, 0.0));
        doc.check(CheckRecord::new("witness negative", Relation::Lt, 0.0, v.witness_value, 0.0));
    }
    if a >= -b / 2.0 && -b / 2.0 >= 0.0 {
        let r = probe.resolvent_norm(q)?;
        doc.push(Record::new("resolvent").value("norm", r));
        doc.check(CheckRecord::new("resolvent norm ≤ 1", Relation::Le, 1.0, Some(r), RESOLVENT_SLACK));
    }
    Ok(doc)
}
