//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! run with `--nocapture` to see them when everything passes.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use boolebell::bounds::generate_bonferroni_family;
use boolebell::event::{inclusion_exclusion_union, Atom};
use boolebell::game::{reduce_strategies, solve_mixing, strategy_profile, CorrelationTarget};
use boolebell::montecarlo::{empirical_bell_effect, empirical_ch, empirical_ch_lhv, RngSpec};
use boolebell::polytope::{check_membership, extremize_over_polytope, verify_certificate, AtomObjective, MembershipVerdict};
use boolebell::quantum::{
    all_local_assignments, ch_scenario, local_ch, singlet_ch, singlet_ch_exact, AngleConfig, ExactAngleConfig, LhvMixing,
};
use boolebell::rational::{int, rat, Rational};
use boolebell::{AtomDistribution, EventScenario, EventSet, LinearInequality, ProbabilityAssignment};
use boolebell_cli::DEFAULT_SEED;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIALS: u64 = 1_000_000;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn random_weights(g: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..len).map(|_| if g.gen_bool(0.3) { 0 } else { g.gen_range(1..=9) }).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return raw.into_iter().map(|w| rat(w, total)).collect();
        }
    }
}

/// Subset probabilities summed directly from atom weights.
fn brute_force(n: usize, weights: &[Rational], set: u32) -> Rational {
    (0..1u32 << n).filter(|a| a & set == set).map(|a| weights[a as usize].clone()).sum()
}

fn game_infeasibility() -> Outcome {
    let start = Instant::now();
    let target = CorrelationTarget::new(int(1), rat(3, 4), rat(3, 4), rat(1, 4)).map_err(|e| e.to_string())?;
    let s = solve_mixing(&target).map_err(|e| e.to_string())?;
    let expected = [rat(3, 8), rat(3, 8), rat(-1, 8), rat(3, 8)];
    ensure!(s.weights == expected, "weights {:?}", s.weights);
    ensure!(!s.feasible, "reported feasible");
    ensure!(s.negative_components == vec!["gamma"], "flagged {:?}", s.negative_components);
    // the weights must reproduce the target through the class profiles
    let mut reproduced = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (class, w) in reduce_strategies().iter().zip(&s.weights) {
        let p = strategy_profile(&class.representative);
        for (acc, same) in reproduced.iter_mut().zip([p.ab, p.bc, p.ac]) {
            *acc += w * int(same as i64);
        }
    }
    ensure!(reproduced == [rat(3, 4), rat(3, 4), rat(1, 4)], "reproduces {reproduced:?}");
    within(start, Duration::from_secs(1))
}

fn bell_violation() -> Outcome {
    let start = Instant::now();
    let exact = singlet_ch_exact(&ExactAngleConfig::reference()).map_err(|e| e.to_string())?;
    ensure!(exact.total == rat(-9, 8), "exact total {}", exact.total);
    ensure!(exact.lower_violation == rat(1, 8), "exact lower violation {}", exact.lower_violation);
    let pi = std::f64::consts::PI;
    let float = singlet_ch(&AngleConfig::new(pi / 3.0, pi, 0.0, 2.0 * pi / 3.0).unwrap()).map_err(|e| e.to_string())?;
    ensure!((float.total + 1.125).abs() < 1e-12, "floating total {}", float.total);
    ensure!((float.lower_violation - 0.125).abs() < 1e-12, "floating lower violation {}", float.lower_violation);
    // p(++) = sin²(Δ/2)/2, marginals 1/2
    let pp = |a: f64, b: f64| 0.5 * ((a - b) / 2.0).sin().powi(2);
    let oracle = pp(pi / 3.0, 0.0) + pp(pi / 3.0, 2.0 * pi / 3.0) + pp(pi, 2.0 * pi / 3.0) - pp(pi, 0.0) - 1.0;
    ensure!((float.total - oracle).abs() < 1e-12, "oracle {oracle}");
    within(start, Duration::from_secs(1))
}

/// CH value of a deterministic assignment: outcomes are +1/0 indicators.
fn local_oracle(a1: i64, a2: i64, b1: i64, b2: i64) -> Rational {
    int(a1 * b1 + a1 * b2 + a2 * b2 - a2 * b1 - a1 - b2)
}

fn classical_bound() -> Outcome {
    let lo = int(-1);
    let hi = Rational::zero();
    let mut values = Vec::new();
    for (index, assignment) in all_local_assignments().into_iter().enumerate() {
        let v = local_ch(&assignment).total;
        let bit = |k: usize| 1 - ((index >> (3 - k)) & 1) as i64;
        let oracle = local_oracle(bit(0), bit(1), bit(2), bit(3));
        ensure!(v == oracle, "{assignment}: {v} vs oracle {oracle}");
        ensure!(v >= lo && v <= hi, "{assignment}: {v}");
        values.push(v);
    }
    ensure!(values.len() == 16, "{} assignments", values.len());
    let mut g = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let weights = random_weights(&mut g, 16);
        let oracle: Rational = weights.iter().zip(&values).map(|(w, v)| w * v).sum();
        let v = LhvMixing::new(weights).map_err(|e| e.to_string())?.ch().total;
        ensure!(v == oracle, "mixture {v} vs oracle {oracle}");
        ensure!(v >= lo && v <= hi, "mixture {v}");
    }
    Ok(())
}

/// The assignment a distribution induces on `scenario`, computed by summation.
fn induced(scenario: &EventScenario, d: &AtomDistribution) -> ProbabilityAssignment {
    let values = scenario.family().iter().map(|s| brute_force(d.n(), d.weights(), s.mask())).collect();
    ProbabilityAssignment::new(scenario.clone(), values).unwrap()
}

fn accepted_with_exact_witness(a: &ProbabilityAssignment) -> Outcome {
    match check_membership(a) {
        MembershipVerdict::Inside { witness } => {
            ensure!(induced(a.scenario(), &witness) == *a, "witness does not reproduce {:?}", a.values());
            Ok(())
        }
        MembershipVerdict::Outside { certificate, .. } => Err(format!("rejected with {certificate}")),
    }
}

fn polytope_rejection() -> Outcome {
    let start = Instant::now();
    let half = rat(1, 2);
    let quantum = ProbabilityAssignment::from_pairs(
        4,
        [
            (EventSet::single(1), half.clone()),
            (EventSet::single(2), half.clone()),
            (EventSet::single(3), half.clone()),
            (EventSet::single(4), half.clone()),
            (EventSet::pair(1, 3), rat(1, 8)),
            (EventSet::pair(1, 4), rat(1, 8)),
            (EventSet::pair(2, 3), rat(1, 2)),
            (EventSet::pair(2, 4), rat(1, 8)),
        ],
    )
    .map_err(|e| e.to_string())?;
    ensure!(*quantum.scenario() == ch_scenario(), "scenario mismatch");
    match check_membership(&quantum) {
        MembershipVerdict::Inside { .. } => return Err("quantum point accepted".into()),
        MembershipVerdict::Outside { certificate, violation } => {
            ensure!(violation == rat(1, 8), "violation {violation}");
            ensure!(verify_certificate(&quantum, &certificate) == Ok(true), "certificate not verified");
            ensure!(holds_on_every_atom(&certificate), "certificate cuts a vertex");
            let lhs: Rational = certificate.terms().map(|(s, c)| c * quantum.get(s).unwrap()).sum();
            ensure!(lhs - certificate.constant() == rat(1, 8), "recomputed violation differs");
        }
    }
    let scenario = ch_scenario();
    for atom in 0..16 {
        let d = AtomDistribution::point_mass(4, atom).unwrap();
        accepted_with_exact_witness(&induced(&scenario, &d))?;
    }
    let mut g = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let d = AtomDistribution::new(4, random_weights(&mut g, 16)).unwrap();
        accepted_with_exact_witness(&induced(&scenario, &d))?;
    }
    within(start, Duration::from_secs(5))
}

fn boole_tightness() -> Outcome {
    let start = Instant::now();
    let mut g = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = g.gen_range(1..=4);
        let p: Vec<Rational> = (0..n)
            .map(|_| {
                let d = g.gen_range(1..=12);
                rat(g.gen_range(0..=d), d)
            })
            .collect();
        let sum: Rational = p.iter().sum();
        let max = p.iter().max().unwrap().clone();
        let min = p.iter().min().unwrap().clone();
        let one = Rational::one();
        let union = (max, sum.clone().min(one.clone()));
        let intersection = ((sum - int(n as i64 - 1)).max(Rational::zero()), min);
        let known = ProbabilityAssignment::new(EventScenario::singletons(n).unwrap(), p.clone()).unwrap();
        for (objective, (lo, hi)) in [
            (AtomObjective::union(n).unwrap(), union),
            (AtomObjective::intersection(n).unwrap(), intersection),
        ] {
            let e = extremize_over_polytope(&objective, &known).map_err(|e| e.to_string())?;
            let iv = e.interval().ok_or("marginals reported infeasible")?;
            ensure!(*iv.lower() == lo && *iv.upper() == hi, "{p:?}: {iv} vs [{lo}, {hi}]");
        }
    }
    within(start, Duration::from_secs(30))
}

fn holds_on_every_atom(ineq: &LinearInequality) -> bool {
    let n = ineq.scenario().n();
    (0..1u32 << n).all(|atom: Atom| {
        let lhs: Rational = ineq
            .terms()
            .filter(|(s, _)| atom & s.mask() == s.mask())
            .map(|(_, c)| c.clone())
            .sum();
        lhs <= *ineq.constant()
    })
}

fn bonferroni_family() -> Outcome {
    let mut problems = Vec::new();
    for n in 2..=4 {
        let family = generate_bonferroni_family(n).map_err(|e| e.to_string())?;
        if family.len() != 1 << n {
            problems.push(format!("n={n}: {} inequalities", family.len()));
        }
        for ineq in &family {
            if !ineq.is_canonical() {
                problems.push(format!("n={n}: {ineq} not canonical"));
            }
            if !holds_on_every_atom(ineq) {
                problems.push(format!("n={n}: {ineq} fails on an atom"));
            }
        }
        let mut distinct: Vec<String> = family.iter().map(|i| i.to_string()).collect();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != 1 << n {
            problems.push(format!("n={n}: only {} of {} distinct", distinct.len(), 1 << n));
        }
        if n == 3 {
            // S = {3} is mask 0b100
            let wigner = LinearInequality::from_terms(
                EventScenario::pairwise(3).unwrap(),
                [
                    (EventSet::pair(1, 3), int(1)),
                    (EventSet::pair(2, 3), int(1)),
                    (EventSet::pair(1, 2), int(-1)),
                    (EventSet::single(3), int(-1)),
                ],
                boolebell::event::Sense::Le,
                int(0),
            )
            .map_err(|e| e.to_string())?;
            if family[0b100] != wigner {
                problems.push(format!("n=3: S={{3}} gives {}", family[0b100]));
            }
        }
    }
    ensure!(problems.is_empty(), "{}", problems.join("; "));
    Ok(())
}

fn inclusion_exclusion() -> Outcome {
    let mut g = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let n = 1 + k % 6;
        let weights = random_weights(&mut g, 1 << n);
        let d = AtomDistribution::new(n, weights.clone()).unwrap();
        let a = induced(&EventScenario::complete(n).unwrap(), &d);
        let direct: Rational = weights.iter().skip(1).cloned().sum();
        let ie = inclusion_exclusion_union(&a).map_err(|e| e.to_string())?;
        ensure!(ie == direct, "n={n}: {ie} vs {direct}");
    }
    Ok(())
}

fn quantum_gap() -> Outcome {
    let start = Instant::now();
    let rng = RngSpec::new(DEFAULT_SEED, 0);
    let e = empirical_ch(&ExactAngleConfig::reference().to_radians(), TRIALS, &rng).map_err(|e| e.to_string())?;
    ensure!((e.estimate + 1.125).abs() < 0.005, "estimate {}", e.estimate);
    ensure!(e.estimate < -1.1, "estimate {}", e.estimate);
    let f = empirical_bell_effect(TRIALS, &rng).map_err(|e| e.to_string())?;
    ensure!(f.aa == 1.0, "(A,A) {}", f.aa);
    for (got, want) in [(f.ab, 0.75), (f.bc, 0.75), (f.ac, 0.25)] {
        ensure!((got - want).abs() < 0.005, "frequency {got} vs {want}");
    }
    within(start, Duration::from_secs(30))
}

fn classical_ceiling() -> Outcome {
    let mut g = ChaCha8Rng::seed_from_u64(9);
    for k in 0..50 {
        let mixing = LhvMixing::new(random_weights(&mut g, 16)).map_err(|e| e.to_string())?;
        let e = empirical_ch_lhv(&mixing, TRIALS, &RngSpec::new(DEFAULT_SEED + k, 0)).map_err(|e| e.to_string())?;
        ensure!(e.estimate >= -1.02, "mixing {k}: estimate {}", e.estimate);
    }
    Ok(())
}

fn cli_golden_files() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut codes = Vec::new();
    for (args, golden) in [
        (&["game"][..], "game.txt"),
        (&["bell", "--paper-angles"][..], "bell_paper_angles.txt"),
        (&["check", "tests/data/game_mapped.txt"][..], "check_game_mapped.txt"),
    ] {
        let out = Command::new(env!("CARGO_BIN_EXE_boolebell"))
            .args(args)
            .current_dir(root)
            .output()
            .map_err(|e| e.to_string())?;
        let expected = std::fs::read(root.join("tests/golden").join(golden)).map_err(|e| e.to_string())?;
        ensure!(out.stdout == expected, "{args:?} differs from {golden}");
        codes.push(out.status.code());
    }
    ensure!(codes == [Some(1), Some(1), Some(1)], "exit codes {codes:?}");
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("game infeasibility", game_infeasibility),
        ("bell violation", bell_violation),
        ("classical bound", classical_bound),
        ("polytope rejection", polytope_rejection),
        ("boole tightness", boole_tightness),
        ("bonferroni family", bonferroni_family),
        ("inclusion-exclusion oracle", inclusion_exclusion),
        ("monte carlo quantum gap", quantum_gap),
        ("monte carlo classical ceiling", classical_ceiling),
        ("cli golden files", cli_golden_files),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match &result {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", k + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
