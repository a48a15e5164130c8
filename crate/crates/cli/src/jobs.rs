//! One job = one command plus its input document. The subcommands and the
//! batch driver both go through [`run_job`].

use std::collections::BTreeMap;

use pencillab::arrangement::{
    build_combinatorics, canonical_counts, counts, validate, Arrangement, Combinatorics,
};
use pencillab::json::{ArrangementInput, OneFormJson, PolyJson};
use pencillab::lefschetz::{
    intersection_form, monodromy_generators, orbit_of_basis_cycle, radical_basis,
    saddle_span_certificate, to_int_rows, CycleKind, CycleLattice, OrbitSpan,
};
use pencillab::melnikov::{
    codim_and_cyclicity, francoise_recursion, log_decompose, logarithmic_deformation, partitions,
    pk_dimension_audit, CertificateJson, Deformation, Grouping, MelnikovOutcome,
};
use pencillab::milnor::{milnor_algebra, MilnorReport};
use pencillab::petrov::{kernel_basis, rank_in_h, ConnectionReport, PetrovModule, RelExactReport};
use pencillab::exact_algebra::ExteriorDerivative;
use pencillab::{random, Error, RMatrix, ROneForm, RPoly, Rational, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const DEFAULT_MAX_D: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Dynkin,
    Orbit,
    Connection,
    Kernel,
    Relexact,
    Melnikov,
    Bounds,
    Selftest,
}

/// A job as it appears in a batch file; the subcommands build the same
/// struct from their flags.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: Option<Command>,
    /// Input document, inline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    /// Generator matrices are elided above this `mu`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_matrix: Option<usize>,
}

/// Limits shared by every job of one invocation.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_d: usize,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) => 2,
        Error::Invariant(_) => 3,
        Error::Unsupported(_) => 4,
    }
}

fn bad_input(e: impl std::fmt::Display) -> Error {
    Error::validation(format!("malformed input: {e}"))
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(bad_input)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn check_d(d: usize, limits: Limits) -> Result<()> {
    if d > limits.max_d {
        return Err(Error::validation(format!(
            "d = {d} exceeds the cap {} (PENCILLAB_MAX_D)",
            limits.max_d
        )));
    }
    Ok(())
}

fn arrangement(job: &Job, limits: Limits) -> Result<Arrangement> {
    let source = match (job.canonical_d, &job.input) {
        (Some(d), _) => ArrangementInput::Canonical { canonical_d: d },
        (None, Some(v)) => parse(v)?,
        (None, None) => {
            return Err(Error::validation("need --canonical-d or an arrangement input"))
        }
    };
    if let ArrangementInput::Canonical { canonical_d } = source {
        check_d(canonical_d, limits)?;
    }
    let arr = source.build()?;
    check_d(arr.d, limits)?;
    Ok(arr)
}

fn input(job: &Job) -> Result<&Value> {
    job.input
        .as_ref()
        .ok_or_else(|| Error::validation("this command needs an input document"))
}

/// `f` from `{"f": <poly>}`, or the product of an arrangement given in the
/// same document or by `--canonical-d`.
fn function(job: &Job, limits: Limits) -> Result<(RPoly, Option<Arrangement>)> {
    if let Some(f) = job.input.as_ref().and_then(|v| v.get("f")) {
        return Ok((parse::<PolyJson>(f)?.to_poly()?, None));
    }
    let arr = arrangement(job, limits)?;
    Ok((arr.f.clone(), Some(arr)))
}

fn omega(job: &Job) -> Result<ROneForm> {
    let v = input(job)?
        .get("omega")
        .ok_or_else(|| Error::validation("input lacks \"omega\""))?;
    parse::<OneFormJson>(v)?.to_form()
}

fn combinatorics(arr: &Arrangement) -> Result<Combinatorics> {
    let v = validate(arr);
    if !v.is_ok() {
        let list: Vec<String> = v.violations.iter().map(ToString::to_string).collect();
        return Err(Error::validation(format!("arrangement not in general position: {}", list.join("; "))));
    }
    build_combinatorics(arr)
}

fn lines_json(arr: &Arrangement) -> Vec<[String; 3]> {
    arr.lines
        .iter()
        .map(|l| [l.a.to_string(), l.b.to_string(), l.c.to_string()])
        .collect()
}

fn analyze(job: &Job, limits: Limits) -> Result<Value> {
    let arr = arrangement(job, limits)?;
    let validation = validate(&arr);
    let comb = combinatorics(&arr)?;
    let (a1, a2, a3) = counts(&comb);
    let ma = milnor_algebra(&arr.f)?;
    let sd = ma.spectral_data()?;
    let vertices: Vec<String> = comb.vertices.iter().map(|v| v.point.to_string()).collect();
    let faces: Vec<Value> = comb
        .faces
        .iter()
        .zip(&comb.face_sign)
        .map(|(f, s)| json!({"vertices": f.vertices, "sign": s}))
        .collect();
    let mut report = json!({
        "d": arr.d,
        "lines": lines_json(&arr),
        "warnings": validation.warnings,
        "counts": {"a1": a1, "a2": a2, "a3": a3},
        "mu": ma.mu,
        "mu_matches_combinatorics": ma.mu == a1 + a2 + a3,
        "vertices": vertices,
        "faces": faces,
        "milnor": to_value(&MilnorReport::new(&ma, &sd)),
    });
    if job.canonical_d.is_some() || matches!(job.input.as_ref().map(parse::<ArrangementInput>), Some(Ok(ArrangementInput::Canonical { .. }))) {
        let (c1, c2, c3) = canonical_counts(arr.d);
        report["closed_form_counts"] = json!({"a1": c1, "a2": c2, "a3": c3});
    }
    Ok(report)
}

fn lattice(arr: &Arrangement) -> Result<CycleLattice> {
    intersection_form(&combinatorics(arr)?, arr.d)
}

fn int_vectors(vs: &[Vec<Rational>]) -> Vec<Vec<i64>> {
    to_int_rows(&RMatrix::from_rows(vs.to_vec()))
}

fn orbit_summary(o: &OrbitSpan) -> Value {
    json!({
        "start": o.start,
        "rank_total": o.rank_total,
        "rank_mod_radical": o.rank_mod_radical,
        "theorem_2_3": o.theorem_2_3,
    })
}

fn dynkin(job: &Job, limits: Limits) -> Result<Value> {
    let arr = arrangement(job, limits)?;
    let lat = lattice(&arr)?;
    let rad = radical_basis(&lat);
    let gens = monodromy_generators(&lat);
    let elide = lat.mu > job.max_matrix.unwrap_or(16);
    let generators: Vec<Value> = gens
        .iter()
        .map(|g| {
            let matrix = if elide { Value::Null } else { json!(to_int_rows(&g.matrix)) };
            json!({"label": g.label, "matrix": matrix})
        })
        .collect();
    let orbits: Vec<Value> = (0..lat.mu)
        .map(|i| orbit_summary(&orbit_of_basis_cycle(&lat, &gens, &rad, i)))
        .collect();
    Ok(json!({
        "d": lat.d,
        "mu": lat.mu,
        "labels": lat.labels,
        "form": lat.form_rows(),
        "rank": lat.rank(),
        "radical": int_vectors(&rad),
        "flipped": lat.flipped,
        "line_signs": lat.line_signs,
        "line_cycles": int_vectors(&lat.line_cycles),
        "saddle_span": saddle_span_certificate(&lat)?,
        "generators_elided": elide,
        "generators": generators,
        "orbits": orbits,
    }))
}

/// `face:i` (bounded face), `vertex:j`, `basis:k` or `all`.
fn start_indices(lat: &CycleLattice, start: &str) -> Result<Vec<usize>> {
    if start == "all" {
        return Ok((0..lat.mu).collect());
    }
    let bad = || Error::validation(format!("bad --start {start:?}: use face:i, vertex:j, basis:k or all"));
    let (kind, idx) = start.split_once(':').ok_or_else(bad)?;
    let idx: usize = idx.parse().map_err(|_| bad())?;
    let found = match kind {
        "face" => lat.face_index(idx),
        "vertex" => lat.basis_index(CycleKind::Saddle, idx),
        "basis" => (idx < lat.mu).then_some(idx),
        _ => return Err(bad()),
    };
    found
        .map(|i| vec![i])
        .ok_or_else(|| Error::validation(format!("no basis cycle for {start}")))
}

fn orbit(job: &Job, limits: Limits) -> Result<Value> {
    let arr = arrangement(job, limits)?;
    let lat = lattice(&arr)?;
    let rad = radical_basis(&lat);
    let gens = monodromy_generators(&lat);
    let starts = start_indices(&lat, job.start.as_deref().unwrap_or("all"))?;
    let orbits: Vec<OrbitSpan> = starts
        .into_iter()
        .map(|i| orbit_of_basis_cycle(&lat, &gens, &rad, i))
        .collect();
    Ok(json!({"d": lat.d, "mu": lat.mu, "orbits": orbits}))
}

fn connection(job: &Job, limits: Limits) -> Result<Value> {
    let (f, _) = function(job, limits)?;
    let w = omega(job)?;
    let n = job
        .n
        .or_else(|| input(job).ok()?.get("n")?.as_u64().map(|n| n as u32))
        .unwrap_or(2);
    let pm = PetrovModule::new(&f)?;
    Ok(to_value(&ConnectionReport::new(&pm, &w, n)?))
}

fn kernel(job: &Job, limits: Limits) -> Result<Value> {
    let (f, arr) = function(job, limits)?;
    let n = job.n.unwrap_or(2);
    let factors = match job.input.as_ref().and_then(|v| v.get("factors")) {
        Some(v) => parse::<Vec<PolyJson>>(v)?
            .iter()
            .map(PolyJson::to_poly)
            .collect::<Result<Vec<_>>>()?,
        None => match arr {
            Some(a) => a.forms.clone(),
            None => return Err(Error::validation("input needs \"factors\" alongside \"f\"")),
        },
    };
    let pm = PetrovModule::new(&f)?;
    let gens = kernel_basis(&pm, n, &factors)?;
    Ok(json!({
        "n": n,
        "generators": gens.iter().map(OneFormJson::from).collect::<Vec<_>>(),
        "rank_in_h": rank_in_h(&gens, &f),
    }))
}

fn relexact(job: &Job, limits: Limits) -> Result<Value> {
    let (f, _) = function(job, limits)?;
    Ok(to_value(&RelExactReport::new(&omega(job)?, &f)))
}

/// Unknown keys are tolerated here: serde cannot combine `flatten` with `deny_unknown_fields`.
#[derive(Deserialize)]
struct DeformationInput {
    #[serde(flatten)]
    arrangement: ArrangementInput,
    k: u32,
    forms: BTreeMap<String, OneFormJson>,
}

fn melnikov(job: &Job, limits: Limits) -> Result<Value> {
    let di: DeformationInput = parse(input(job)?)?;
    if let ArrangementInput::Canonical { canonical_d } = di.arrangement {
        check_d(canonical_d, limits)?;
    }
    let arr = di.arrangement.build()?;
    check_d(arr.d, limits)?;
    let mut forms = BTreeMap::new();
    for (key, w) in &di.forms {
        let i: u32 = key
            .parse()
            .map_err(|_| Error::validation(format!("form order {key:?} is not an integer")))?;
        forms.insert(i, w.to_form()?);
    }
    let outcome = francoise_recursion(&Deformation::new(di.k, forms), &arr)?;
    Ok(to_value(&CertificateJson::from(&outcome)))
}

fn bounds(job: &Job, limits: Limits) -> Result<Value> {
    let d = job.d.or(job.canonical_d).ok_or_else(|| Error::validation("bounds needs --d"))?;
    check_d(d, limits)?;
    if d < 2 {
        return Err(Error::validation("bounds needs d >= 2"));
    }
    let arr = pencillab::arrangement::canonical_arrangement(d)?;
    let parts = match &job.partition {
        Some(p) => vec![p.clone()],
        None => partitions(d + 1),
    };
    let results = parts
        .iter()
        .map(|p| {
            Ok(json!({
                "bounds": to_value(&codim_and_cyclicity(d, p)?),
                "pk_audit": to_value(&pk_dimension_audit(&arr, p)?),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"d": d, "results": results}))
}

/// Randomized round-trips through the library, reproducible from `seed`.
fn selftest(job: &Job) -> Result<Value> {
    let seed = job.seed.unwrap_or(0);
    let cases = job.cases.unwrap_or(10);
    let mut rng = random::rng(seed);
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let mut record = |name: &str, passed: usize| {
        if passed != cases {
            failures.push(format!("{name}: {passed}/{cases}"));
        }
        checks.push(json!({"name": name, "cases": cases, "passed": passed}));
    };
    for d in 2..=3usize {
        let arr = pencillab::arrangement::canonical_arrangement(d)?;
        let f = &arr.f;
        let mut ok = 0;
        for _ in 0..cases {
            let w = &random::poly(&mut rng, d as u32 + 2).d() + &f.d().mul_poly(&random::poly(&mut rng, 2));
            ok += usize::from(
                pencillab::petrov::relative_exact_decompose(&w, f).is_some_and(|wit| wit.expand(f) == w),
            );
        }
        record(&format!("relexact_round_trip_d{d}"), ok);
        let mut ok = 0;
        for _ in 0..cases {
            let cert = random::log_decomposition(&mut rng, d);
            ok += usize::from(log_decompose(&cert.expand(&arr), &arr)? == Some(cert));
        }
        record(&format!("log_round_trip_d{d}"), ok);
        let mut ok = 0;
        for _ in 0..cases {
            let forms = BTreeMap::from([(1, random::form(&mut rng, d as u32))]);
            let out = francoise_recursion(&Deformation::new(1, forms), &arr)?;
            ok += usize::from(matches!(out, MelnikovOutcome::Obstructed { order: 1, .. }));
        }
        record(&format!("random_deformation_obstructed_d{d}"), ok);
        let mut ok = 0;
        for _ in 0..cases {
            let g = Grouping::from_partition(&[1, d], &arr)?;
            let mu = vec![random::nonzero_rational(&mut rng, 4), Rational::from_integer(0.into())];
            let h = vec![random::poly(&mut rng, 1), random::poly(&mut rng, d as u32)];
            let def = logarithmic_deformation(&arr, &g, &mu, &h, 1)?;
            let out = francoise_recursion(&def, &arr)?;
            ok += usize::from(matches!(
                out,
                MelnikovOutcome::ObstructionFree { ref certificate, .. } if certificate.grouping.groups == g.groups
            ));
        }
        record(&format!("constructed_deformation_certified_d{d}"), ok);
    }
    if !failures.is_empty() {
        return Err(Error::invariant(format!("selftest failed: {}", failures.join(", "))));
    }
    Ok(json!({"seed": seed, "checks": checks}))
}

pub fn run_job(job: &Job, limits: Limits) -> Result<Value> {
    let command = job.command.ok_or_else(|| Error::validation("job lacks \"command\""))?;
    match command {
        Command::Analyze => analyze(job, limits),
        Command::Dynkin => dynkin(job, limits),
        Command::Orbit => orbit(job, limits),
        Command::Connection => connection(job, limits),
        Command::Kernel => kernel(job, limits),
        Command::Relexact => relexact(job, limits),
        Command::Melnikov => melnikov(job, limits),
        Command::Bounds => bounds(job, limits),
        Command::Selftest => selftest(job),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchInput {
    pub jobs: Vec<Job>,
}

/// Runs the jobs on `workers` threads; results come back in input order.
pub fn run_batch(batch: &BatchInput, limits: Limits, workers: usize) -> (Value, u8) {
    let n = batch.jobs.len();
    let mut slots: Vec<Option<Result<Value>>> = (0..n).map(|_| None).collect();
    let workers = workers.clamp(1, n.max(1));
    let chunk = n.div_ceil(workers).max(1);
    std::thread::scope(|s| {
        for (jobs, out) in batch.jobs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            s.spawn(move || {
                for (job, slot) in jobs.iter().zip(out) {
                    *slot = Some(run_job(job, limits));
                }
            });
        }
    });
    let mut code = 0;
    let results: Vec<Value> = batch
        .jobs
        .iter()
        .zip(slots)
        .map(|(job, r)| match r.expect("every slot is filled") {
            Ok(report) => json!({"command": job.command, "exit_code": 0, "report": report}),
            Err(e) => {
                let c = exit_code(&e);
                if code == 0 {
                    code = c;
                }
                json!({"command": job.command, "exit_code": c, "error": e.to_string()})
            }
        })
        .collect();
    (json!({"results": results}), code)
}
