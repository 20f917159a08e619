//! One function per subcommand. Each returns an [`Outcome`]; the caller
//! wraps it into the report line and picks the exit code.

use nnsft_core::admissibility::Cached;
use nnsft_core::solver::Budget;
use nnsft_core::{Admissibility, Language, LineExact, LocalSuffices, Nnsft, PeriodicExtension, PeriodicPoint};
use nnsft_gibbs::MODEL_NAMES;
use nnsft_mixing::{
    certificate_chain, check_tssm, default_periods, enumerate_first_offenders, find_periodic_point, pivot_sequence,
    search_tssm_violation, si_gap, spot_check_partial_boundaries, tssm_gap, MixingCertificate, MixingError, Property,
    Strategy, TssmBudget, TssmVerdict,
};
use nnsft_pressure::{friedland_upper_bounds, pressure_1d, pressure_estimate, PressureError, PressureJob, DEFAULT_SCHEDULE};
use nnsft_ssm::{andes_rate, rate_implies_tssm, rate_tssm_threshold, ssm_profile, wsm_profile, BoundaryFamily, ProfileBudget};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::input::{format_pattern, load, parse_pattern, Loaded};

/// How a computation ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// A positive answer or a plain computation.
    Computed,
    /// A successful negative answer: a refutation or an inadmissible pattern.
    Negative,
    /// Stopped by a budget; the result holds partial progress.
    Budget,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Computed => 0,
            Status::Negative => 2,
            Status::Budget => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub assumptions: Vec<String>,
    /// CSV text for series-producing subcommands.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(status: Status, result: Value) -> Outcome {
        Outcome { status, result, assumptions: Vec::new(), csv: None }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Admissible(a) => admissible(a),
        Command::Certify(a) => certify(a, cli.seed),
        Command::TssmSearch(a) => tssm_search(a),
        Command::Offenders(a) => offenders(a),
        Command::Periodic(a) => periodic(a),
        Command::Pivot(a) => pivot(a),
        Command::EntropyBounds(a) => entropy_bounds(a),
        Command::Pressure(a) => pressure(a),
        Command::SsmProfile(a) => profile(a),
        Command::RateBounds(a) => rate_bounds(a),
        Command::Models => Ok(models()),
    }
}

fn cert_json(c: &MixingCertificate) -> Value {
    json!({ "statement": c.to_string(), "property": c.property, "provenance": c.provenance })
}

/// The certificate behind a gap, as text for the assumptions list.
fn gap_statement(certs: &[MixingCertificate], pick: impl Fn(&Property) -> Option<u32>, gap: u32, what: &str) -> String {
    certs
        .iter()
        .find(|c| pick(&c.property) == Some(gap))
        .map(|c| c.to_string())
        .unwrap_or_else(|| format!("{what} {gap} (user asserted)"))
}

fn si_of(p: &Property) -> Option<u32> {
    match p {
        Property::StrongIrreducible { gap } => Some(*gap),
        _ => None,
    }
}

fn tssm_of(p: &Property) -> Option<u32> {
    match p {
        Property::Tssm { gap } => Some(*gap),
        _ => None,
    }
}

/// A periodic point of the shift: the given periods, or constants and then
/// period-2 points by default.
fn orbit(x: &Nnsft, periods: Option<&[usize]>, fallback: Vec<usize>) -> Result<PeriodicPoint, CliError> {
    let tries: Vec<Vec<usize>> = match periods {
        Some(p) => vec![p.to_vec()],
        None => vec![vec![1; x.dim()], fallback],
    };
    for p in &tries {
        if let Some(z) = find_periodic_point(x, p, Budget { max_nodes: 10_000_000 })? {
            return Ok(z);
        }
    }
    Err(CliError::input(format!("no periodic point with periods {tries:?}; pass --periods")))
}

/// The global-admissibility decider the certificates justify, and what it rests on.
pub struct Decider {
    pub adm: Box<dyn Admissibility>,
    pub certs: Vec<MixingCertificate>,
    pub assumptions: Vec<String>,
}

pub fn decider(x: &Nnsft, args: &DeciderArgs) -> Result<Decider, CliError> {
    let certs = certificate_chain(x)?;
    let mut assumptions = Vec::new();
    let adm: Box<dyn Admissibility> = if x.dim() == 1 {
        assumptions.push("exact one-dimensional reachability".into());
        Box::new(LineExact::new(x.clone())?)
    } else if certs.iter().any(|c| c.property == Property::Ssf) {
        let ssf = certs.iter().find(|c| c.property == Property::Ssf).expect("present");
        assumptions.push(format!("local admissibility suffices: {ssf}"));
        Box::new(LocalSuffices::assume_ssf(x.clone()))
    } else {
        let gap = args.si_gap.or_else(|| si_gap(&certs)).ok_or_else(|| {
            CliError::input("global admissibility needs a strong-irreducibility gap; none was derived, pass --si-gap")
        })?;
        if gap == 0 {
            return Err(CliError::input("--si-gap must be positive"));
        }
        let z = orbit(x, args.periods.as_deref(), default_periods(gap, x.dim()))?;
        let band = PeriodicExtension::new(x.clone(), gap, z)?;
        assumptions.push(gap_statement(&certs, si_of, gap, "strongly irreducible, gap"));
        assumptions.push(band.assumption());
        Box::new(band)
    };
    Ok(Decider { adm, certs, assumptions })
}

fn admissible(a: &AdmissibleArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let p = parse_pattern(&a.pattern, input.alphabet(), input.dim())?;
    let local = input.sft().is_locally_admissible(&p);
    let mut out = if local {
        let dec = decider(input.sft(), &a.decider)?;
        let global = dec.adm.is_admissible(&p);
        let mut o = Outcome::new(if global { Status::Computed } else { Status::Negative }, Value::Null);
        o.result = json!({
            "pattern": format_pattern(&p, input.alphabet()),
            "locally_admissible": true,
            "globally_admissible": global,
        });
        o.assumptions = dec.assumptions;
        o
    } else {
        Outcome::new(
            Status::Negative,
            json!({
                "pattern": format_pattern(&p, input.alphabet()),
                "locally_admissible": false,
                "globally_admissible": false,
            }),
        )
    };
    out.result["input"] = input.description;
    Ok(out)
}

fn certify(a: &CertifyArgs, seed: u64) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let x = input.sft();
    if a.budget_seconds.is_nan() || a.budget_seconds <= 0.0 {
        return Err(CliError::input("--budget-seconds must be positive"));
    }
    let mut certs = certificate_chain(x)?;
    let safe: Vec<&str> = certs
        .iter()
        .filter_map(|c| match c.property {
            Property::SafeSymbol { letter } => Some(input.alphabet().label(letter)),
            _ => None,
        })
        .collect();
    let ssf = certs.iter().any(|c| c.property == Property::Ssf);
    let mut status = Status::Computed;
    let mut result = json!({
        "input": input.description,
        "safe_symbols": safe,
        "ssf": ssf,
    });
    let mut assumptions = Vec::new();
    if let Some(g) = a.tssm_gap {
        let si = a.decider.si_gap.or_else(|| si_gap(&certs)).ok_or_else(|| {
            CliError::input("the exhaustive TSSM check needs a strong-irreducibility gap; none was derived, pass --si-gap")
        })?;
        let z = orbit(x, a.decider.periods.as_deref(), default_periods(si, x.dim()))?;
        assumptions.push(gap_statement(&certs, si_of, si, "strongly irreducible, gap"));
        let verdict = check_tssm(x, g, si, &z, TssmBudget::seconds(a.budget_seconds))?;
        let exhaustive = match &verdict {
            TssmVerdict::Certified { gap } => {
                certs.push(MixingCertificate::checked(Property::Tssm { gap: *gap }));
                json!({ "gap": gap, "verdict": "certified" })
            }
            TssmVerdict::Violation(v) => {
                status = Status::Negative;
                json!({ "gap": g, "verdict": "violation", "witness": {
                    "u": format_pattern(&v.u, input.alphabet()),
                    "s": format_pattern(&v.s, input.alphabet()),
                    "v": format_pattern(&v.v, input.alphabet()),
                }})
            }
            TssmVerdict::Exhausted(r) => {
                status = Status::Budget;
                json!({ "gap": g, "verdict": "exhausted", "progress": r })
            }
        };
        result["exhaustive_tssm"] = exhaustive;
    }
    if let Some(samples) = a.spot_check {
        let n = certs.iter().find_map(|c| match c.property {
            Property::NFillable { n } => Some(n),
            _ => None,
        });
        let n = n.ok_or_else(|| CliError::input("--spot-check needs an N-fillability certificate"))?;
        let report = spot_check_partial_boundaries(x, n, samples, seed)?;
        result["partial_boundary_spot_check"] = json!({
            "n": n,
            "sampled": report.sampled,
            "unfillable": report.unfillable.iter().map(|p| format_pattern(p, input.alphabet())).collect::<Vec<_>>(),
        });
    }
    result["tssm_gap"] = json!(tssm_gap(&certs));
    result["si_gap"] = json!(si_gap(&certs));
    result["top_mixing_1d"] = json!(certs.iter().any(|c| c.property == Property::TopMixing1D));
    result["certificates"] = certs.iter().map(cert_json).collect();
    assumptions.extend(certs.iter().filter(|c| !matches!(c.provenance, nnsft_mixing::Provenance::ExhaustiveCheck)).map(|c| c.to_string()));
    Ok(Outcome { status, result, assumptions, csv: None })
}

fn strategies(names: &[String]) -> Result<Vec<Strategy>, CliError> {
    if names.is_empty() {
        return Ok(Strategy::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| {
            let n = n.trim();
            // the singular forms read naturally on the command line
            let canonical = match n {
                "stripe" => "stripes",
                "row" => "rows",
                "comb" => "combs",
                "singleton" => "singletons",
                other => other,
            };
            canonical.parse::<Strategy>().map_err(CliError::from)
        })
        .collect()
}

fn tssm_search(a: &TssmSearchArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let strategies = strategies(&a.strategy)?;
    let dec = decider(input.sft(), &a.decider)?;
    let cached = Cached::new(dec.adm.as_ref());
    let hit = search_tssm_violation(&cached, a.gap, &strategies)?;
    let names: Vec<&str> = strategies.iter().map(|s| s.name()).collect();
    let mut out = match hit {
        Some(v) => {
            let us = v.u.union(&v.s)?;
            let sv = v.s.union(&v.v)?;
            let usv = us.union(&v.v)?;
            let alpha = input.alphabet();
            Outcome::new(
                Status::Negative,
                json!({
                    "gap": a.gap,
                    "strategies": names,
                    "found": true,
                    "witness": {
                        "u": format_pattern(&v.u, alpha),
                        "s": format_pattern(&v.s, alpha),
                        "v": format_pattern(&v.v, alpha),
                        "distance": v.distance().finite(),
                        "us_admissible": cached.contains(&us),
                        "sv_admissible": cached.contains(&sv),
                        "usv_admissible": cached.contains(&usv),
                    },
                }),
            )
        }
        None => Outcome::new(
            Status::Computed,
            json!({ "gap": a.gap, "strategies": names, "found": false,
                    "note": "no structured violation found; this does not certify TSSM" }),
        ),
    };
    out.result["input"] = input.description;
    out.assumptions = dec.assumptions;
    Ok(out)
}

fn offenders(a: &OffendersArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let dec = decider(input.sft(), &a.decider)?;
    let cached = Cached::new(dec.adm.as_ref());
    let found = enumerate_first_offenders(&cached, a.diameter, a.limit)?;
    let list: Vec<String> = found.iter().map(|p| format_pattern(p, input.alphabet())).collect();
    let mut out = Outcome::new(
        Status::Computed,
        json!({ "input": input.description, "diameter": a.diameter, "count": list.len(), "offenders": list }),
    );
    out.assumptions = dec.assumptions;
    Ok(out)
}

fn periodic(a: &PeriodicArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let x = input.sft();
    if a.max_nodes == 0 {
        return Err(CliError::input("--max-nodes must be positive"));
    }
    let periods = a.periods.clone().unwrap_or_else(|| default_periods(1, x.dim()));
    let found = match find_periodic_point(x, &periods, Budget { max_nodes: a.max_nodes }) {
        Ok(f) => f,
        Err(MixingError::Budget(m)) | Err(MixingError::Sft(nnsft_core::SftError::Budget(m))) => {
            let mut o = Outcome::new(Status::Budget, json!({ "input": input.description, "periods": periods, "found": null }));
            o.result["note"] = json!(m);
            return Ok(o);
        }
        Err(e) => return Err(e.into()),
    };
    let result = match &found {
        Some(z) => json!({
            "input": input.description,
            "periods": periods,
            "found": true,
            "cell": format_pattern(z.cell(), input.alphabet()),
        }),
        None => json!({ "input": input.description, "periods": periods, "found": false }),
    };
    Ok(Outcome::new(if found.is_some() { Status::Computed } else { Status::Negative }, result))
}

fn pivot(a: &PivotArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let x = input.sft();
    let w = parse_pattern(&a.from, input.alphabet(), input.dim())?;
    let w2 = parse_pattern(&a.to, input.alphabet(), input.dim())?;
    let dec = decider(x, &a.decider)?;
    let g = a.gap.or_else(|| tssm_gap(&dec.certs)).ok_or_else(|| CliError::input("no TSSM gap was derived; pass --gap"))?;
    let mut assumptions = vec![gap_statement(&dec.certs, tssm_of, g, "TSSM gap")];
    assumptions.extend(dec.assumptions.iter().cloned());
    let cached = Cached::new(dec.adm.as_ref());
    let mut out = match pivot_sequence(&cached, &w, &w2, g) {
        Ok(seq) => Outcome::new(
            Status::Computed,
            json!({
                "gap": g,
                "steps": seq.len() - 1,
                "sequence": seq.iter().map(|p| format_pattern(p, input.alphabet())).collect::<Vec<_>>(),
            }),
        ),
        // a failed step refutes the TSSM gap it relied on
        Err(e @ MixingError::PivotFailed { .. }) => Outcome::new(Status::Negative, json!({ "gap": g, "failed": e.to_string() })),
        Err(e) => return Err(e.into()),
    };
    out.result["input"] = input.description;
    out.assumptions = assumptions;
    Ok(out)
}

fn entropy_bounds(a: &EntropyArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    if a.n_max == 0 {
        return Err(CliError::input("--n-max must be at least 1"));
    }
    let bounds = friedland_upper_bounds(input.sft(), a.n_max)?;
    let mut csv = String::from("n,block_count_upper_bound\n");
    for (i, b) in bounds.iter().enumerate() {
        csv.push_str(&format!("{},{b}\n", i + 1));
    }
    let mut result = json!({
        "input": input.description,
        "block_count_upper_bounds": bounds.iter().enumerate().map(|(i, b)| json!({ "n": i + 1, "bound": b })).collect::<Vec<_>>(),
    });
    if input.dim() == 1 {
        result["entropy_1d"] = json!(nnsft_core::entropy_1d(input.sft())?);
        result["pressure_1d"] = json!(pressure_1d(&input.phi)?);
    }
    let mut o = Outcome::new(Status::Computed, result);
    o.csv = Some(csv);
    Ok(o)
}

fn pressure(a: &PressureArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    let x = input.sft().clone();
    if a.epsilon.is_nan() || a.epsilon <= 0.0 {
        return Err(CliError::input("--epsilon must be positive"));
    }
    let schedule = a.schedule.clone().unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec());
    if schedule.is_empty() || schedule.contains(&0) {
        return Err(CliError::input("--schedule entries must be positive"));
    }
    let mut certs = certificate_chain(&x)?;
    if let Some(g) = a.assume_tssm {
        if g == 0 {
            return Err(CliError::input("--assume-tssm must be positive"));
        }
        certs.push(MixingCertificate::asserted(Property::Tssm { gap: g }));
    }
    let z = orbit(&x, a.periods.as_deref(), vec![2; x.dim()])?;
    let job = PressureJob::new(input.phi.clone(), z.clone(), &certs)?.with_schedule(schedule).with_epsilon(a.epsilon);
    let (status, est) = match pressure_estimate(&job) {
        Ok(e) => (Status::Computed, e),
        Err(PressureError::NotConverged(e)) => (Status::Budget, *e),
        Err(e) => return Err(e.into()),
    };
    let mut csv = String::from("n,lower,upper,width,seconds\n");
    for b in &est.trace {
        csv.push_str(&format!("{},{},{},{},{}\n", b.n, b.lower, b.upper, b.width(), b.seconds));
    }
    let mut result = json!({
        "input": input.description,
        "orbit": format_pattern(z.cell(), input.alphabet()),
        "orbit_periods": z.periods(),
        "epsilon": a.epsilon,
        "converged": status == Status::Computed,
        "value": est.value,
        "lower": est.lower,
        "upper": est.upper,
        "width": est.width,
        "n_used": est.n_used,
        "trace": est.trace.iter().map(|b| json!({
            "n": b.n, "lower": b.lower, "upper": b.upper, "width": b.width(), "clamped": b.clamped,
        })).collect::<Vec<_>>(),
    });
    if input.dim() == 1 {
        result["exact_1d"] = json!(pressure_1d(&input.phi)?);
    }
    Ok(Outcome { status, result, assumptions: job.assumptions.clone(), csv: Some(csv) })
}

fn family(a: &ProfileArgs, input: &Loaded) -> Result<BoundaryFamily, CliError> {
    match a.family {
        FamilyName::Rhomboids => {
            if a.a.is_some() || a.b.is_some() {
                return Err(CliError::input("--a/--b only apply to the stripe family"));
            }
            Ok(BoundaryFamily::Rhomboids)
        }
        FamilyName::Stripe => {
            let labels = input.alphabet().labels();
            let a_label = a.a.clone().unwrap_or_else(|| labels[0].clone());
            let b_label = a.b.clone().or_else(|| labels.get(1).cloned()).ok_or_else(|| CliError::input("the stripe family needs two letters"))?;
            Ok(BoundaryFamily::Stripe { a: input.alphabet().index_of(&a_label)?, b: input.alphabet().index_of(&b_label)? })
        }
    }
}

fn profile(a: &ProfileArgs) -> Result<Outcome, CliError> {
    let input = load(&a.input)?;
    if a.n_min > a.n_max {
        return Err(CliError::input("--n-min must not exceed --n-max"));
    }
    if a.max_boundaries == 0 {
        return Err(CliError::input("--max-boundaries must be positive"));
    }
    let fam = family(a, &input)?;
    let dec = decider(input.sft(), &a.decider)?;
    let cached = Cached::new(dec.adm.as_ref());
    let budget = ProfileBudget { max_boundaries: a.max_boundaries };
    let range = a.n_min..=a.n_max;
    let mut profiles = Vec::new();
    if matches!(a.kind, ProfileKind::Ssm | ProfileKind::Both) {
        profiles.push(ssm_profile(&input.phi, &fam, range.clone(), &cached, budget)?);
    }
    if matches!(a.kind, ProfileKind::Wsm | ProfileKind::Both) {
        profiles.push(wsm_profile(&input.phi, &fam, range, &cached, budget)?);
    }
    let mut csv = String::from("kind,n,distance,max_discrepancy\n");
    for p in &profiles {
        for pt in &p.points {
            csv.push_str(&format!("{},{},{},{}\n", p.kind, pt.n, pt.distance, pt.max_discrepancy));
        }
    }
    let alpha = input.alphabet();
    let rendered: Vec<Value> = profiles
        .iter()
        .map(|p| {
            json!({
                "kind": p.kind,
                "note": p.note,
                "fit": p.fit,
                "points": p.points.iter().map(|pt| json!({
                    "n": pt.n,
                    "distance": pt.distance,
                    "max_discrepancy": pt.max_discrepancy,
                    "boundaries": pt.boundaries,
                    "witness": pt.witness.as_ref().map(|w| json!({
                        "letter": alpha.label(w.letter),
                        "boundary_1": format_pattern(&w.delta1, alpha),
                        "boundary_2": format_pattern(&w.delta2, alpha),
                        "p1": w.p1,
                        "p2": w.p2,
                    })),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut o = Outcome::new(Status::Computed, json!({ "input": input.description, "family": fam_name(&fam), "profiles": rendered }));
    o.assumptions = dec.assumptions;
    o.csv = Some(csv);
    Ok(o)
}

fn fam_name(f: &BoundaryFamily) -> &'static str {
    match f {
        BoundaryFamily::Rhomboids => "rhomboids",
        BoundaryFamily::Stripe { .. } => "stripe",
        BoundaryFamily::Custom { .. } => "custom",
    }
}

/// Decimal strings longer than this are replaced by their length.
const MAX_DECIMAL: usize = 200;

fn rate_bounds(a: &RateArgs) -> Result<Outcome, CliError> {
    let cert = andes_rate(a.g, a.d, a.lambda)?;
    let mut c = serde_json::to_value(&cert).map_err(|e| CliError::Internal(e.to_string()))?;
    for key in ["beta_threshold", "published_threshold"] {
        if let Some(Value::String(s)) = c.get(key) {
            if s.len() > MAX_DECIMAL {
                c[key] = json!({ "decimal_digits": s.len() });
            }
        }
    }
    let k = a.alphabet_size.unwrap_or(a.g as usize + 1);
    let alpha = a.alpha.unwrap_or(cert.alpha);
    let mut result = json!({ "certificate": c, "alphabet_size": k, "tssm_threshold": rate_tssm_threshold(k), "alpha_tested": alpha });
    result["implies_tssm"] = if a.d == 2 { json!(rate_implies_tssm(alpha, k, 2)?) } else { Value::Null };
    Ok(Outcome::new(Status::Computed, result))
}

fn models() -> Outcome {
    let params = |name: &str| -> Value {
        match name {
            "hard_core" => json!({ "lambda": 1.0, "d": 2 }),
            "ising" => json!({ "E": 0.0, "J": 1.0, "d": 2 }),
            "potts" => json!({ "q": "required", "J": 1.0, "d": 2 }),
            "checkerboard" => json!({ "k": "required", "d": 2 }),
            "iceberg" => json!({ "M": "required", "d": 2 }),
            "lipschitz" => json!({ "g": "required", "lambda": 1.0, "d": 2 }),
            _ => Value::Null,
        }
    };
    let list: Vec<Value> = MODEL_NAMES.iter().map(|n| json!({ "name": n, "params": params(n) })).collect();
    Outcome::new(Status::Computed, json!({ "models": list }))
}
