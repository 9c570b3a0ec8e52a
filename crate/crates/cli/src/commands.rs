use std::fmt::Write as _;
use std::path::Path;

use boolebell::bounds::{boole_bounds_with_witnesses, boole_intersection_bounds, boole_union_bounds, BoundTarget, BoundsReport};
use boolebell::game::{reduce_strategies, solve_mixing, CorrelationTarget, WEIGHT_NAMES};
use boolebell::montecarlo::{empirical_bell_effect, empirical_ch, empirical_ch_lhv, ChEstimate, RngSpec};
use boolebell::polytope::{check_membership, MembershipVerdict};
use boolebell::quantum::{
    scan_ch, singlet_ch, singlet_ch_exact, AngleConfig, ChBreakdown, ExactAngleConfig, LhvMixing, ScanRow,
};
use boolebell::rational::Rational;
use boolebell::{AtomDistribution, Error, LinearInequality};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::angles::AngleLiteral;
use crate::constraints::parse_constraints;
use crate::render::{self, float, float_json, rational_json};
use crate::{CliError, Command, McArgs, McModel, Report};

/// Absolute slack for "violated" on the floating path.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub const SCAN_HEADER: &str = "alpha1,alpha2,beta1,beta2,ch_value,lower_violation,upper_violation";

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Check { file, witness } => check(file, *witness),
        Command::Bounds { union, intersection, witnesses } => bounds(union.as_deref(), intersection.as_deref(), *witnesses),
        Command::Game { target } => game(target.as_deref()),
        Command::Bell { paper_angles: _, angles } => bell(angles.as_deref()),
        Command::Scan { steps, output } => scan(*steps, output.as_deref()),
        Command::Mc { model } => match model {
            McModel::Singlet { sampling, angles } => mc_singlet(sampling, angles.as_deref()),
            McModel::Lhv { sampling, mixing } => mc_lhv(sampling, mixing.as_deref()),
            McModel::BellEffect { sampling } => mc_bell_effect(sampling),
        },
    }
}

fn inequality_json(ineq: &LinearInequality) -> Value {
    json!({
        "inequality": ineq.to_string(),
        "terms": ineq
            .terms()
            .map(|(s, c)| json!({ "subset": s.indices(), "coefficient": rational_json(c) }))
            .collect::<Vec<_>>(),
        "constant": rational_json(ineq.constant()),
    })
}

fn write_distribution(text: &mut String, label: &str, d: &AtomDistribution) {
    let atoms: Vec<String> = render::support(d)
        .map(|(a, w)| format!("{}: {w}", render::atom(d.n(), a)))
        .collect();
    writeln!(text, "{label}{}", atoms.join(", ")).unwrap();
}

pub fn check(path: &Path, witness: bool) -> Result<Report, CliError> {
    let shown = path.display().to_string();
    let source = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let file = parse_constraints(&source).map_err(|diagnostics| CliError::Parse { path: shown, diagnostics })?;
    let assignment = file.to_assignment()?;
    let verdict = check_membership(&assignment);

    let mut text = String::new();
    writeln!(text, "events: {}", file.events).unwrap();
    writeln!(text, "assignments: {}", assignment.values().len()).unwrap();
    let mut json = json!({
        "command": "check",
        "events": file.events,
        "assignments": assignment.values().len(),
    });
    let code = match &verdict {
        MembershipVerdict::Inside { witness: w } => {
            writeln!(text, "verdict: inside").unwrap();
            json["verdict"] = json!("inside");
            if witness {
                write_distribution(&mut text, "witness: ", w);
                json["witness"] = render::distribution_json(w);
            }
            0
        }
        MembershipVerdict::Outside { certificate, violation } => {
            writeln!(text, "verdict: outside").unwrap();
            writeln!(text, "certificate: {certificate}").unwrap();
            writeln!(text, "violation: {violation}").unwrap();
            json["verdict"] = json!("outside");
            json["certificate"] = inequality_json(certificate);
            json["violation"] = rational_json(violation);
            1
        }
    };
    Ok(Report { text, json, code })
}

fn bound_report(target: BoundTarget, marginals: &[Rational], witnesses: bool) -> Result<BoundsReport, CliError> {
    Ok(match (target, witnesses) {
        (t, true) => boole_bounds_with_witnesses(t, marginals)?,
        (BoundTarget::Union, false) => boole_union_bounds(marginals)?,
        (BoundTarget::Intersection, false) => boole_intersection_bounds(marginals)?,
    })
}

pub fn bounds(union: Option<&[Rational]>, intersection: Option<&[Rational]>, witnesses: bool) -> Result<Report, CliError> {
    let mut text = String::new();
    let mut json = json!({ "command": "bounds" });
    for (name, target, marginals) in [
        ("union", BoundTarget::Union, union),
        ("intersection", BoundTarget::Intersection, intersection),
    ] {
        let Some(marginals) = marginals else { continue };
        let report = bound_report(target, marginals, witnesses)?;
        writeln!(text, "{name}: {}", report.interval).unwrap();
        let mut entry = json!({
            "lower": rational_json(report.interval.lower()),
            "upper": rational_json(report.interval.upper()),
        });
        if let Some((low, high)) = &report.attaining_witnesses {
            write_distribution(&mut text, "  lower witness: ", low);
            write_distribution(&mut text, "  upper witness: ", high);
            entry["lower_witness"] = render::distribution_json(low);
            entry["upper_witness"] = render::distribution_json(high);
        }
        json[name] = entry;
    }
    Ok(Report { text, json, code: 0 })
}

pub fn game(target: Option<&[Rational]>) -> Result<Report, CliError> {
    let target = match target {
        None => CorrelationTarget::entangled(),
        Some([e, ab, bc, ac]) => CorrelationTarget::new(e.clone(), ab.clone(), bc.clone(), ac.clone())?,
        Some(other) => return Err(CliError::Usage(format!("--target needs 4 values, got {}", other.len()))),
    };
    let solution = solve_mixing(&target)?;

    let mut text = String::new();
    writeln!(
        text,
        "target: same(equal) = {}, same(A,B) = {}, same(B,C) = {}, same(A,C) = {}",
        target.same_when_equal, target.same_ab, target.same_bc, target.same_ac
    )
    .unwrap();
    let classes = reduce_strategies();
    let mut weights = serde_json::Map::new();
    for ((name, class), w) in WEIGHT_NAMES.iter().zip(&classes).zip(&solution.weights) {
        writeln!(text, "{name} ({}/{}) = {w}", class.members[0], class.members[1]).unwrap();
        weights.insert(name.to_string(), rational_json(w));
    }
    if solution.feasible {
        writeln!(text, "feasible: all weights nonnegative").unwrap();
    }
    for (name, w) in WEIGHT_NAMES.iter().zip(&solution.weights) {
        if *w < Rational::zero() {
            writeln!(text, "infeasible: {name} = {w}").unwrap();
        }
    }
    let json = json!({
        "command": "game",
        "target": {
            "same_when_equal": rational_json(&target.same_when_equal),
            "same_ab": rational_json(&target.same_ab),
            "same_bc": rational_json(&target.same_bc),
            "same_ac": rational_json(&target.same_ac),
        },
        "weights": weights,
        "feasible": solution.feasible,
        "negative": solution.negative_components,
    });
    Ok(Report { text, json, code: if solution.feasible { 0 } else { 1 } })
}

const TERM_LABELS: [&str; 6] = [
    "p(alpha1,beta1|++)",
    "p(alpha1,beta2|++)",
    "p(alpha2,beta2|++)",
    "p(alpha2,beta1|++)",
    "p1(alpha1|+)",
    "p2(beta2|+)",
];

const TERM_KEYS: [&str; 6] = ["joint_11", "joint_12", "joint_22", "joint_21", "marginal_alpha1", "marginal_beta2"];

fn terms<T: Clone>(b: &ChBreakdown<T>) -> [T; 6] {
    [
        b.joint_11.clone(),
        b.joint_12.clone(),
        b.joint_22.clone(),
        b.joint_21.clone(),
        b.marginal_alpha1.clone(),
        b.marginal_beta2.clone(),
    ]
}

/// Text and JSON for a breakdown, with values already rendered.
fn breakdown_lines(text: &mut String, values: [String; 6], total: &str, lower: &str, upper: &str) {
    for (label, v) in TERM_LABELS.iter().zip(values) {
        writeln!(text, "{label} = {v}").unwrap();
    }
    writeln!(text, "total = {total}").unwrap();
    writeln!(text, "lower violation = {lower}").unwrap();
    writeln!(text, "upper violation = {upper}").unwrap();
}

fn violation_line(text: &mut String, lower: bool, upper: bool, total: &str) {
    if lower {
        writeln!(text, "violated: {total} < -1").unwrap();
    } else if upper {
        writeln!(text, "violated: {total} > 0").unwrap();
    } else {
        writeln!(text, "within [-1, 0]").unwrap();
    }
}

fn exact_config(angles: &[AngleLiteral]) -> Option<ExactAngleConfig> {
    let k: Vec<u32> = angles.iter().map(|a| a.exact.map(|e| e.k())).collect::<Option<_>>()?;
    ExactAngleConfig::from_twelfths([k[0], k[1], k[2], k[3]]).ok()
}

fn float_config(angles: &[AngleLiteral]) -> Result<AngleConfig, CliError> {
    Ok(AngleConfig::new(angles[0].radians, angles[1].radians, angles[2].radians, angles[3].radians)?)
}

fn four_angles(angles: &[AngleLiteral]) -> Result<(), CliError> {
    if angles.len() == 4 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--angles needs 4 values, got {}", angles.len())))
    }
}

fn angle_names<T: ToString>(values: [T; 4]) -> (String, Value) {
    let names = ["alpha1", "alpha2", "beta1", "beta2"];
    let text = names
        .iter()
        .zip(&values)
        .map(|(n, v)| format!("{n} = {}", v.to_string()))
        .collect::<Vec<_>>()
        .join(", ");
    let json = names
        .iter()
        .zip(&values)
        .map(|(n, v)| (n.to_string(), Value::String(v.to_string())))
        .collect::<serde_json::Map<_, _>>();
    (text, Value::Object(json))
}

fn bell_exact(config: &ExactAngleConfig) -> Result<Report, Error> {
    let b = singlet_ch_exact(config)?;
    let (angles_text, angles_json) = angle_names(config.as_array());
    let mut text = format!("angles: {angles_text}\npath: exact\n");
    let total = b.total.to_string();
    breakdown_lines(
        &mut text,
        terms(&b).map(|v| v.to_string()),
        &total,
        &b.lower_violation.to_string(),
        &b.upper_violation.to_string(),
    );
    violation_line(&mut text, b.lower_violation > Rational::zero(), b.upper_violation > Rational::zero(), &total);
    let term_json: serde_json::Map<_, _> = TERM_KEYS
        .iter()
        .zip(terms(&b))
        .map(|(k, v)| (k.to_string(), rational_json(&v)))
        .collect();
    let json = json!({
        "command": "bell",
        "path": "exact",
        "angles": angles_json,
        "terms": term_json,
        "total": rational_json(&b.total),
        "lower_violation": rational_json(&b.lower_violation),
        "upper_violation": rational_json(&b.upper_violation),
        "violated": b.is_violated(),
    });
    Ok(Report { text, json, code: b.is_violated() as u8 })
}

fn bell_float(config: &AngleConfig) -> Result<Report, CliError> {
    let b = singlet_ch(config)?;
    let (angles_text, angles_json) = angle_names(config.as_array().map(float));
    let mut text = format!("angles: {angles_text}\npath: floating\n");
    let total = float(b.total);
    breakdown_lines(&mut text, terms(&b).map(float), &total, &float(b.lower_violation), &float(b.upper_violation));
    let lower = b.lower_violation > FLOAT_TOLERANCE;
    let upper = b.upper_violation > FLOAT_TOLERANCE;
    violation_line(&mut text, lower, upper, &total);
    let term_json: serde_json::Map<_, _> = TERM_KEYS
        .iter()
        .zip(terms(&b))
        .map(|(k, v)| (k.to_string(), float_json(v)))
        .collect();
    let json = json!({
        "command": "bell",
        "path": "floating",
        "angles": angles_json,
        "terms": term_json,
        "total": float_json(b.total),
        "lower_violation": float_json(b.lower_violation),
        "upper_violation": float_json(b.upper_violation),
        "violated": lower || upper,
    });
    Ok(Report { text, json, code: (lower || upper) as u8 })
}

pub fn bell(angles: Option<&[AngleLiteral]>) -> Result<Report, CliError> {
    let Some(angles) = angles else {
        return Ok(bell_exact(&ExactAngleConfig::reference())?);
    };
    four_angles(angles)?;
    let config = float_config(angles)?;
    match exact_config(angles).map(|c| bell_exact(&c)) {
        Some(Ok(report)) => Ok(report),
        Some(Err(Error::Inexact(_))) | None => bell_float(&config),
        Some(Err(e)) => Err(e.into()),
    }
}

fn row_csv(row: &ScanRow) -> String {
    let c = row.config;
    format!(
        "{},{},{},{},{},{},{}\n",
        c.alpha1, c.alpha2, c.beta1, c.beta2, row.ch.total, row.ch.lower_violation, row.ch.upper_violation
    )
}

pub fn scan(steps: usize, output: Option<&Path>) -> Result<Report, CliError> {
    let report = scan_ch(steps)?;
    let mut csv = format!("{SCAN_HEADER}\n");
    for row in &report.rows {
        csv.push_str(&row_csv(row));
    }
    let lower = &report.rows[report.argmax_lower];
    let upper = &report.rows[report.argmax_upper];
    let violated = report.max_lower_violation > FLOAT_TOLERANCE || report.max_upper_violation > FLOAT_TOLERANCE;
    let mut json = json!({
        "command": "scan",
        "steps": steps,
        "rows": report.rows.len(),
        "max_lower_violation": float_json(report.max_lower_violation),
        "max_lower_at": angle_names(lower.config.as_array().map(float)).1,
        "max_upper_violation": float_json(report.max_upper_violation),
        "max_upper_at": angle_names(upper.config.as_array().map(float)).1,
        "violated": violated,
    });
    let text = match output {
        None => csv,
        Some(path) => {
            std::fs::write(path, &csv).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            json["output"] = json!(path.display().to_string());
            format!(
                "steps: {steps}\nrows: {}\nmax lower violation = {} at {}\nmax upper violation = {} at {}\nwrote {}\n",
                report.rows.len(),
                float(report.max_lower_violation),
                angle_names(lower.config.as_array().map(float)).0,
                float(report.max_upper_violation),
                angle_names(upper.config.as_array().map(float)).0,
                path.display()
            )
        }
    };
    Ok(Report { text, json, code: violated as u8 })
}

fn sampling_header(text: &mut String, model: &str, s: &McArgs) -> Value {
    writeln!(text, "model: {model}").unwrap();
    writeln!(text, "trials: {}", s.trials).unwrap();
    writeln!(text, "seed: {}", s.seed).unwrap();
    writeln!(text, "stream: {}", s.stream).unwrap();
    json!({ "command": "mc", "model": model, "trials": s.trials, "seed": s.seed, "stream": s.stream })
}

/// Exit 1 when the estimate leaves [-1, 0] by more than three standard errors.
fn estimate_report(mut text: String, mut json: Value, e: &ChEstimate) -> Report {
    let b = &e.breakdown;
    for (label, v) in TERM_LABELS.iter().zip(terms(b)) {
        writeln!(text, "{label} = {}", float(v)).unwrap();
    }
    writeln!(text, "estimate = {}", float(e.estimate)).unwrap();
    writeln!(text, "standard error = {}", float(e.standard_error)).unwrap();
    let margin = 3.0 * e.standard_error;
    let violated = b.lower_violation > margin || b.upper_violation > margin;
    if violated {
        let excess = b.lower_violation.max(b.upper_violation);
        writeln!(text, "violated: outside [-1, 0] by {} standard errors", float(excess / e.standard_error)).unwrap();
    } else {
        writeln!(text, "within [-1, 0] up to 3 standard errors").unwrap();
    }
    json["terms"] = TERM_KEYS
        .iter()
        .zip(terms(b))
        .map(|(k, v)| (k.to_string(), float_json(v)))
        .collect::<serde_json::Map<_, _>>()
        .into();
    json["estimate"] = float_json(e.estimate);
    json["standard_error"] = float_json(e.standard_error);
    json["violated"] = json!(violated);
    Report { text, json, code: violated as u8 }
}

pub fn mc_singlet(s: &McArgs, angles: Option<&[AngleLiteral]>) -> Result<Report, CliError> {
    let config = match angles {
        None => ExactAngleConfig::reference().to_radians(),
        Some(a) => {
            four_angles(a)?;
            float_config(a)?
        }
    };
    let mut text = String::new();
    let mut json = sampling_header(&mut text, "singlet", s);
    let (angles_text, angles_json) = angle_names(config.as_array().map(float));
    writeln!(text, "angles: {angles_text}").unwrap();
    json["angles"] = angles_json;
    let e = empirical_ch(&config, s.trials, &RngSpec::new(s.seed, s.stream))?;
    Ok(estimate_report(text, json, &e))
}

pub fn mc_lhv(s: &McArgs, mixing: Option<&[Rational]>) -> Result<Report, CliError> {
    let mixing = match mixing {
        None => LhvMixing::uniform(),
        Some(w) => LhvMixing::new(w.to_vec())?,
    };
    let mut text = String::new();
    let mut json = sampling_header(&mut text, "lhv", s);
    let exact = mixing.ch().total;
    writeln!(text, "exact = {exact}").unwrap();
    json["exact"] = rational_json(&exact);
    let e = empirical_ch_lhv(&mixing, s.trials, &RngSpec::new(s.seed, s.stream))?;
    Ok(estimate_report(text, json, &e))
}

pub fn mc_bell_effect(s: &McArgs) -> Result<Report, CliError> {
    let mut text = String::new();
    let mut json = sampling_header(&mut text, "bell-effect", s);
    let f = empirical_bell_effect(s.trials, &RngSpec::new(s.seed, s.stream))?;
    let pairs = [("A,A", "same_aa", f.aa), ("A,B", "same_ab", f.ab), ("B,C", "same_bc", f.bc), ("A,C", "same_ac", f.ac)];
    for (label, key, v) in pairs {
        writeln!(text, "same({label}) = {}", float(v)).unwrap();
        json[key] = float_json(v);
    }
    Ok(Report { text, json, code: 0 })
}
