use serde_json::{json, Value};
use sobolev_core::electrostatics::{classify, decompose_field, FieldDecomposition, PoleSource};
use sobolev_core::ladder::{
    build_ladder, ladder_residuals, leading_coefficient_law, ode_residual, q_cross_check, recurrence_check,
    structure_relation_defect, LadderData,
};
use sobolev_core::numkernel::{rel_diff, tol, BigReal, Complex, Poly};
use sobolev_core::sobolev::{
    build_family, gram_schmidt, is_sequentially_ordered, orthogonality_defect, zeros_of, SobolevFamily,
};

use crate::config::RunConfig;
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// A rendered command result.
pub struct Report {
    pub json: Value,
    pub csv: String,
    /// False when `verify` found a failing invariant.
    pub ok: bool,
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn dec(x: &BigReal) -> Value {
    Value::String(x.to_shortest_decimal())
}

fn coeffs(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(dec).collect())
}

fn complex(z: &Complex) -> Value {
    json!({ "re": dec(&z.re), "im": dec(&z.im) })
}

fn header(command: &str, cfg: &RunConfig, n: usize) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("n".into(), json!(n));
    m.insert("precision_bits".into(), json!(cfg.precision_bits));
    m.insert("config".into(), serde_json::to_value(cfg.to_raw()).expect("config serializes"));
    m
}

fn family(cfg: &RunConfig, n: usize) -> Result<SobolevFamily, CliError> {
    Ok(build_family(&cfg.product, n)?)
}

fn require_n(n: usize, min: usize, command: &str) -> Result<(), CliError> {
    if n < min {
        return Err(CliError::Config {
            line: None,
            field: "n".into(),
            message: format!("{command} needs n >= {min}, got {n}"),
        });
    }
    Ok(())
}

pub fn polys(cfg: &RunConfig, n: usize) -> Result<Report, CliError> {
    let fam = family(cfg, n)?;
    let mut out = header("polys", cfg, n);
    let list: Vec<Value> = (0..=n).map(|m| json!({ "degree": m, "coefficients": coeffs(fam.s(m)) })).collect();
    out.insert("polynomials".into(), Value::Array(list));
    let rows = (0..=n).flat_map(|m| {
        let s = fam.s(m);
        s.coeffs()
            .iter()
            .enumerate()
            .map(move |(i, c)| vec![m.to_string(), i.to_string(), c.to_shortest_decimal()])
            .collect::<Vec<_>>()
    });
    let csv = csv_text(&["degree", "power", "coefficient"], rows);
    Ok(Report { json: Value::Object(out), csv, ok: true })
}

pub fn zeros(cfg: &RunConfig, n: usize) -> Result<Report, CliError> {
    require_n(n, 1, "zeros")?;
    let fam = family(cfg, n)?;
    let z = zeros_of(&fam, n)?;
    let mut out = header("zeros", cfg, n);
    let list: Vec<Value> = z
        .roots
        .iter()
        .enumerate()
        .map(|(i, r)| json!({ "index": i, "re": dec(&r.re), "im": dec(&r.im) }))
        .collect();
    out.insert("zeros".into(), Value::Array(list));
    out.insert("real_count".into(), json!(z.real.len()));
    out.insert("inside_count".into(), json!(z.inside));
    out.insert("sign_changes".into(), json!(z.sign_changes));
    out.insert(
        "nearest_outside".into(),
        Value::Array(z.nearest_outside.iter().map(|o| o.as_ref().map_or(Value::Null, dec)).collect()),
    );
    out.insert("sequentially_ordered".into(), json!(is_sequentially_ordered(&cfg.product).ordered));
    let csv = csv_text(
        &["index", "re", "im"],
        z.roots
            .iter()
            .enumerate()
            .map(|(i, r)| vec![i.to_string(), r.re.to_shortest_decimal(), r.im.to_shortest_decimal()]),
    );
    Ok(Report { json: Value::Object(out), csv, ok: true })
}

fn ladder_json(ld: &LadderData) -> Value {
    json!({
        "a2": coeffs(&ld.a2), "b2": coeffs(&ld.b2), "a3": coeffs(&ld.a3), "b3": coeffs(&ld.b3),
        "c2": coeffs(&ld.c2), "d2": coeffs(&ld.d2), "c3": coeffs(&ld.c3), "d3": coeffs(&ld.d3),
        "big_delta": coeffs(&ld.big_delta),
        "delta": coeffs(&ld.delta),
        "q": ld.q.iter().map(coeffs).collect::<Vec<_>>(),
        "lambda_prev": dec(&ld.lambda.0),
        "lambda": dec(&ld.lambda.1),
    })
}

pub fn ode(cfg: &RunConfig, n: usize) -> Result<Report, CliError> {
    require_n(n, 1, "ode")?;
    let fam = family(cfg, n)?;
    let ld = build_ladder(&fam, n)?;
    let mut out = header("ode", cfg, n);
    out.insert("p2".into(), coeffs(&ld.p2));
    out.insert("p1".into(), coeffs(&ld.p1));
    out.insert("p0".into(), coeffs(&ld.p0));
    out.insert("residual".into(), dec(&ode_residual(&ld, fam.s(n))));
    out.insert("ladder".into(), ladder_json(&ld));
    let top = [&ld.p2, &ld.p1, &ld.p0].iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let csv = csv_text(
        &["power", "p2", "p1", "p0"],
        (0..=top).map(|i| {
            let mut row = vec![i.to_string()];
            row.extend([&ld.p2, &ld.p1, &ld.p0].iter().map(|p| p.coeff(i).to_shortest_decimal()));
            row
        }),
    );
    Ok(Report { json: Value::Object(out), csv, ok: true })
}

fn source_name(s: &PoleSource) -> String {
    match s {
        PoleSource::Right => "right_endpoint".into(),
        PoleSource::Left => "left_endpoint".into(),
        PoleSource::MassPoint(j) => format!("mass_point_{j}"),
        PoleSource::DeltaZero => "delta_zero".into(),
        PoleSource::Attractor => "attractor".into(),
    }
}

fn field_json(fd: &FieldDecomposition) -> Value {
    let charges: Vec<Value> = fd
        .charges
        .iter()
        .map(|c| {
            json!({
                "location": complex(&c.location),
                "weight": dec(&c.weight),
                "residue": complex(&c.residue),
                "conjugate_pair": c.is_pair(),
                "sources": c.sources.iter().map(source_name).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "ell1": dec(&fd.ell1),
        "ell2": dec(&fd.ell2),
        "ell3": fd.ell3.iter().map(dec).collect::<Vec<_>>(),
        "u": fd.u.iter().map(|(z, w)| json!({ "location": complex(z), "weight": dec(w) })).collect::<Vec<_>>(),
        "e": fd.e.iter().map(|(z, m)| json!({ "location": complex(z), "multiplicity": m })).collect::<Vec<_>>(),
        "r_right": dec(&fd.r_right),
        "r_left": dec(&fd.r_left),
        "r_points": fd.r_points.iter().map(dec).collect::<Vec<_>>(),
        "charges": charges,
        "reconstruction_defect": dec(&fd.reconstruction_defect()),
    })
}

pub fn electro(cfg: &RunConfig, n: usize) -> Result<Report, CliError> {
    require_n(n, 1, "electro")?;
    let fam = family(cfg, n)?;
    let ld = build_ladder(&fam, n)?;
    let fd = decompose_field(&ld, &fam)?;
    let rep = classify(&fd, &ld, &fam, n)?;
    let mut out = header("electro", cfg, n);
    let hessian: Vec<Value> = (0..rep.zeros.len())
        .map(|i| Value::Array((0..rep.zeros.len()).map(|j| dec(rep.hessian.get(i, j))).collect()))
        .collect();
    out.insert("zeros".into(), Value::Array(rep.zeros.iter().map(dec).collect()));
    out.insert("gradient".into(), Value::Array(rep.gradient.iter().map(dec).collect()));
    out.insert("grad_norm".into(), dec(&rep.grad_norm));
    out.insert("hessian".into(), Value::Array(hessian));
    out.insert("hessian_eigs".into(), Value::Array(rep.hessian_eigs.iter().map(dec).collect()));
    out.insert("classification".into(), json!(rep.classification.to_string()));
    out.insert("curvatures".into(), Value::Array(rep.curvatures.iter().map(dec).collect()));
    out.insert("negative_index_set".into(), json!(rep.negative_index_set));
    out.insert("truncated_eigs".into(), Value::Array(rep.truncated_eigs.iter().map(dec).collect()));
    out.insert("truncated_hessian_pd".into(), json!(rep.truncated_hessian_pd));
    out.insert("crit_point_defect".into(), dec(&rep.crit_point_defect));
    out.insert("energy".into(), dec(&rep.energy));
    out.insert("field".into(), field_json(&fd));
    out.insert("warnings".into(), json!(rep.warnings));
    let csv = csv_text(
        &["index", "zero", "gradient", "curvature", "eigenvalue_ascending"],
        (0..rep.zeros.len()).map(|i| {
            let mut row = vec![i.to_string()];
            row.extend(
                [&rep.zeros[i], &rep.gradient[i], &rep.curvatures[i], &rep.hessian_eigs[i]]
                    .iter()
                    .map(|x| x.to_shortest_decimal()),
            );
            row
        }),
    );
    Ok(Report { json: Value::Object(out), csv, ok: true })
}

struct Check {
    name: String,
    value: Value,
    tolerance: Value,
    pass: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn bound(&mut self, name: String, value: &BigReal, tolerance: &BigReal) {
        self.0.push(Check {
            name,
            value: dec(value),
            tolerance: dec(tolerance),
            pass: value <= tolerance,
        });
    }

    fn flag(&mut self, name: String, pass: bool) {
        self.0.push(Check {
            name,
            value: json!(pass),
            tolerance: Value::Null,
            pass,
        });
    }

    /// Records a pipeline error as a failed check named after the stage.
    fn error(&mut self, name: String, e: &sobolev_core::Error) {
        self.0.push(Check {
            name,
            value: json!(e.to_string()),
            tolerance: Value::Null,
            pass: false,
        });
    }
}

/// Oracle comparisons stop at this degree; Gram-Schmidt cost grows quickly.
const ORACLE_MAX_DEGREE: usize = 8;

pub fn verify(cfg: &RunConfig, n: usize) -> Result<Report, CliError> {
    require_n(n, 1, "verify")?;
    let fam = family(cfg, n)?;
    let mut checks = Checks::default();
    let min_k = fam.terms().iter().map(|t| t.k).min();
    let gs = gram_schmidt(&cfg.product, n.min(ORACLE_MAX_DEGREE));
    for m in 0..=n {
        checks.flag(format!("kernel_pd[{m}]"), fam.kernel_pd(m));
        if min_k.is_some_and(|k| m >= k) {
            checks.flag(format!("lambda_positive[{m}]"), fam.lambda(m).is_positive());
        }
        if m <= ORACLE_MAX_DEGREE {
            checks.bound(format!("gram_schmidt[{m}]"), &gs[m].rel_distance(fam.s(m)), &tol(4));
        }
        match fam.connection_reconstruct(m) {
            Ok(p) => checks.bound(format!("connection[{m}]"), &p.rel_distance(fam.s(m)), &tol(3)),
            Err(e) => checks.error(format!("connection[{m}]"), &e),
        }
    }
    checks.bound(format!("orthogonality[{n}]"), &orthogonality_defect(&fam, n), &tol(4));

    let rdn = cfg.product.rho_d_minus_n();
    for m in 2..=n {
        let ld = match build_ladder(&fam, m) {
            Ok(ld) => ld,
            Err(e) => {
                checks.error(format!("ladder[{m}]"), &e);
                continue;
            }
        };
        checks.bound(format!("ode_residual[{m}]"), &ode_residual(&ld, fam.s(m)), &tol(4));
        for (i, di) in ld.delta_i.iter().enumerate() {
            let r = match di.divrem(&rdn) {
                Ok((_, r)) => r.norm_inf() / di.norm_inf().max(BigReal::one()),
                Err(e) => {
                    checks.error(format!("divisibility[{m}][{}]", i + 1), &e);
                    continue;
                }
            };
            checks.bound(format!("divisibility[{m}][{}]", i + 1), &r, &tol(3));
        }
        let (actual, predicted) = leading_coefficient_law(&ld, &fam);
        checks.bound(format!("leading_law[{m}]"), &rel_diff(&actual, &predicted, &BigReal::one()), &tol(4));
        match q_cross_check(&ld, &fam) {
            Ok((a, b)) => checks.bound(format!("q_cross_check[{m}]"), &a.max(b), &tol(4)),
            Err(e) => checks.error(format!("q_cross_check[{m}]"), &e),
        }
        checks.bound(format!("structure_relation[{m}]"), &structure_relation_defect(&ld, &fam), &tol(4));
        let (lower, raise) = ladder_residuals(&ld, &fam);
        checks.bound(format!("ladder_residual[{m}]"), &lower.max(raise), &tol(4));
        if m < n {
            match recurrence_check(&fam, m) {
                Ok(rc) => checks.bound(format!("recurrence[{m}]"), &rc.with_q1_n, &tol(4)),
                Err(e) => checks.error(format!("recurrence[{m}]"), &e),
            }
        }
    }

    if n >= 2 {
        match build_ladder(&fam, n).and_then(|ld| decompose_field(&ld, &fam).map(|fd| (ld, fd))) {
            Ok((ld, fd)) => {
                checks.bound(format!("field_reconstruction[{n}]"), &fd.reconstruction_defect(), &tol(4));
                let z = zeros_of(&fam, n)?;
                if z.complex.is_empty() {
                    let defect = sobolev_core::electrostatics::crit_point_defect(&ld, &z.real);
                    checks.bound(format!("critical_point_identity[{n}]"), &defect, &tol(4));
                }
                if is_sequentially_ordered(&cfg.product).ordered {
                    let need = n.saturating_sub(cfg.product.n_points());
                    checks.flag(format!("sign_changes[{n}]"), z.sign_changes >= need);
                }
            }
            Err(e) => checks.error(format!("field_decomposition[{n}]"), &e),
        }
    }

    let ok = checks.0.iter().all(|c| c.pass);
    let mut out = header("verify", cfg, n);
    let list: Vec<Value> = checks
        .0
        .iter()
        .map(|c| json!({ "name": c.name, "value": c.value, "tolerance": c.tolerance, "pass": c.pass }))
        .collect();
    out.insert("checks".into(), Value::Array(list));
    out.insert("failed".into(), json!(checks.0.iter().filter(|c| !c.pass).map(|c| &c.name).collect::<Vec<_>>()));
    out.insert("passed".into(), json!(ok));
    let plain = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    let csv = csv_text(
        &["name", "value", "tolerance", "pass"],
        checks
            .0
            .iter()
            .map(|c| vec![c.name.clone(), plain(&c.value), plain(&c.tolerance), c.pass.to_string()]),
    );
    Ok(Report { json: Value::Object(out), csv, ok })
}
