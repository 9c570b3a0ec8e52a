//! Correlation-polytope membership.
//!
//! A probability assignment over a family of event subsets is classically
//! realizable iff it lies in the convex hull of the 0/1 vectors that the atoms
//! induce on the family. Membership is decided with the exact simplex over
//! atom weights: a feasible basis yields a realizing [`AtomDistribution`], and
//! an infeasible Phase I yields a Farkas vector that is turned into a linear
//! inequality valid on every vertex but violated by the assignment.

use num_traits::{One, Signed, Zero};

use crate::bounds::{bonferroni_inequality, complement_transform};
use crate::error::{Error, Result};
use crate::event::{
    check_event_count, Atom, AtomDistribution, EventScenario, EventSet, Interval, LinearInequality,
    ProbabilityAssignment, Sense,
};
use crate::rational::Rational;
use crate::simplex::{self, Direction, Feasibility, Optimum};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub atom: Atom,
    /// One 0/1 entry per family subset: 1 iff the atom makes the whole subset occur.
    pub coordinates: Vec<u8>,
}

pub fn vertex(scenario: &EventScenario, atom: Atom) -> Vertex {
    Vertex {
        atom,
        coordinates: scenario
            .family()
            .iter()
            .map(|s| s.occurs_in(atom) as u8)
            .collect(),
    }
}

/// One vertex per atom, in atom order.
pub fn enumerate_vertices(scenario: &EventScenario) -> Result<Vec<Vertex>> {
    check_event_count(scenario.n())?;
    Ok((0..1u32 << scenario.n()).map(|a| vertex(scenario, a)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipVerdict {
    Inside {
        witness: AtomDistribution,
    },
    Outside {
        certificate: LinearInequality,
        violation: Rational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Inside,
    Outside,
}

impl MembershipVerdict {
    pub fn status(&self) -> Status {
        match self {
            MembershipVerdict::Inside { .. } => Status::Inside,
            MembershipVerdict::Outside { .. } => Status::Outside,
        }
    }

    pub fn is_inside(&self) -> bool {
        self.status() == Status::Inside
    }

    pub fn witness(&self) -> Option<&AtomDistribution> {
        match self {
            MembershipVerdict::Inside { witness } => Some(witness),
            MembershipVerdict::Outside { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<(&LinearInequality, &Rational)> {
        match self {
            MembershipVerdict::Outside {
                certificate,
                violation,
            } => Some((certificate, violation)),
            MembershipVerdict::Inside { .. } => None,
        }
    }
}

/// Normalization row followed by one row per family subset; columns are atoms.
fn constraint_matrix(scenario: &EventScenario) -> Vec<Vec<Rational>> {
    let atoms = 1u32 << scenario.n();
    let mut rows = Vec::with_capacity(scenario.len() + 1);
    rows.push(vec![Rational::one(); atoms as usize]);
    for set in scenario.family() {
        rows.push(
            (0..atoms)
                .map(|a| if set.occurs_in(a) { Rational::one() } else { Rational::zero() })
                .collect(),
        );
    }
    rows
}

fn rhs(assignment: &ProbabilityAssignment) -> Vec<Rational> {
    std::iter::once(Rational::one())
        .chain(assignment.values().iter().cloned())
        .collect()
}

/// Turns a Farkas vector `(y0, y_S)` of the membership system into the
/// inequality `Σ y_S p_S ≤ max_v Σ y_S v_S`, scaled to coprime integers, and
/// its violation on `assignment`.
fn certificate_from_farkas(
    assignment: &ProbabilityAssignment,
    farkas: &[Rational],
) -> (LinearInequality, Rational) {
    let scenario = assignment.scenario();
    let coefficients = farkas[1..].to_vec();
    let raw = LinearInequality::new(scenario.clone(), coefficients, Sense::Le, Rational::zero())
        .expect("farkas vector matches family");
    let tight = (0..1u32 << scenario.n())
        .map(|a| raw.lhs_at_atom(a))
        .max()
        .expect("at least one atom");
    debug_assert!(tight <= -farkas[0].clone());
    let certificate = LinearInequality::new(
        scenario.clone(),
        raw.coefficients().to_vec(),
        Sense::Le,
        tight,
    )
    .expect("same family")
    .canonical();
    let violation = certificate
        .evaluate(assignment)
        .expect("same scenario")
        - certificate.constant();
    (certificate, violation)
}

fn distribution_from_weights(n: usize, weights: Vec<Rational>) -> AtomDistribution {
    AtomDistribution::new(n, weights).expect("basic feasible solution is a distribution")
}

/// Decides whether some distribution over atoms reproduces the assignment.
pub fn check_membership(assignment: &ProbabilityAssignment) -> MembershipVerdict {
    let scenario = assignment.scenario();
    let a = constraint_matrix(scenario);
    let b = rhs(assignment);
    match simplex::find_feasible(&a, &b) {
        Feasibility::Feasible(x) => MembershipVerdict::Inside {
            witness: distribution_from_weights(scenario.n(), x),
        },
        Feasibility::Infeasible { farkas, .. } => {
            let (certificate, violation) = certificate_from_farkas(assignment, &farkas);
            MembershipVerdict::Outside {
                certificate,
                violation,
            }
        }
    }
}

/// True iff `certificate` holds on every vertex and fails on `assignment`.
pub fn verify_certificate(
    assignment: &ProbabilityAssignment,
    certificate: &LinearInequality,
) -> Result<bool> {
    certificate.scenario().ensure_same(assignment.scenario())?;
    Ok(certificate.holds_on_all_atoms() && !certificate.holds(assignment)?)
}

/// The three-event Bell inequality obtained from the pairwise Bonferroni bound
/// by complementing event 3: `p13 + p23 − p12 ≤ p3`.
pub fn derive_bell_wigner() -> LinearInequality {
    let bonferroni = bonferroni_inequality(3).expect("n = 3 is in range");
    complement_transform(&bonferroni, &EventSet::single(3))
        .expect("pairwise inequality")
        .canonical()
}

/// A linear functional on atom weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomObjective {
    n: usize,
    coefficients: Vec<Rational>,
}

impl AtomObjective {
    pub fn new(n: usize, coefficients: Vec<Rational>) -> Result<Self> {
        check_event_count(n)?;
        if coefficients.len() != 1 << n {
            return Err(Error::Size {
                what: "objective length",
                value: coefficients.len(),
                min: 1 << n,
                max: 1 << n,
            });
        }
        Ok(AtomObjective { n, coefficients })
    }

    fn indicator(n: usize, pred: impl Fn(Atom) -> bool) -> Result<Self> {
        check_event_count(n)?;
        let coefficients = (0..1u32 << n)
            .map(|a| if pred(a) { Rational::one() } else { Rational::zero() })
            .collect();
        Self::new(n, coefficients)
    }

    /// `P(A_1 ∪ ... ∪ A_n)`.
    pub fn union(n: usize) -> Result<Self> {
        Self::indicator(n, |a| a != 0)
    }

    /// `P(A_1 ∩ ... ∩ A_n)`.
    pub fn intersection(n: usize) -> Result<Self> {
        let all = if n >= 32 { u32::MAX } else { (1u32 << n) - 1 };
        Self::indicator(n, move |a| a == all)
    }

    /// Probability of one simultaneous event.
    pub fn subset(n: usize, set: EventSet) -> Result<Self> {
        if set.max_index() > n {
            return Err(Error::InvalidSubset(format!("{set} beyond n = {n}")));
        }
        Self::indicator(n, move |a| set.occurs_in(a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn evaluate(&self, dist: &AtomDistribution) -> Rational {
        self.coefficients
            .iter()
            .zip(dist.weights())
            .map(|(c, w)| c * w)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extremum {
    Range {
        interval: Interval,
        argmin: AtomDistribution,
        argmax: AtomDistribution,
    },
    Infeasible {
        certificate: LinearInequality,
        violation: Rational,
    },
}

/// Exact minimum and maximum of `objective` over every distribution that
/// reproduces `known`. Inconsistent data yields a certificate instead.
pub fn extremize_over_polytope(objective: &AtomObjective, known: &ProbabilityAssignment) -> Result<Extremum> {
    let scenario = known.scenario();
    if objective.n() != scenario.n() {
        return Err(Error::ScenarioMismatch(format!(
            "objective over {} events, data over {}",
            objective.n(),
            scenario.n()
        )));
    }
    let a = constraint_matrix(scenario);
    let b = rhs(known);
    let mut ends = Vec::with_capacity(2);
    for direction in [Direction::Minimize, Direction::Maximize] {
        match simplex::optimize(&a, &b, objective.coefficients(), direction) {
            Optimum::Optimal { x, value } => {
                ends.push((value, distribution_from_weights(scenario.n(), x)))
            }
            Optimum::Infeasible { farkas, .. } => {
                let (certificate, violation) = certificate_from_farkas(known, &farkas);
                return Ok(Extremum::Infeasible {
                    certificate,
                    violation,
                });
            }
            Optimum::Unbounded => unreachable!("the probability simplex is bounded"),
        }
    }
    let (max, argmax) = ends.pop().expect("two ends");
    let (min, argmin) = ends.pop().expect("two ends");
    Ok(Extremum::Range {
        interval: Interval::new(min, max)?,
        argmin,
        argmax,
    })
}

impl Extremum {
    pub fn interval(&self) -> Option<&Interval> {
        match self {
            Extremum::Range { interval, .. } => Some(interval),
            Extremum::Infeasible { .. } => None,
        }
    }
}

/// Asserts the verdict's own soundness conditions: a witness must reproduce
/// the assignment, a certificate must pass [`verify_certificate`] with the
/// reported violation.
pub fn verdict_is_sound(assignment: &ProbabilityAssignment, verdict: &MembershipVerdict) -> bool {
    match verdict {
        MembershipVerdict::Inside { witness } => {
            crate::event::assignment_from_distribution(witness, assignment.scenario())
                .map(|a| a == *assignment)
                .unwrap_or(false)
        }
        MembershipVerdict::Outside {
            certificate,
            violation,
        } => {
            violation.is_positive()
                && verify_certificate(assignment, certificate).unwrap_or(false)
                && certificate
                    .evaluate(assignment)
                    .map(|lhs| lhs - certificate.constant() == *violation)
                    .unwrap_or(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::assignment_from_distribution;
    use crate::rational::{int, rat};

    fn pairwise3(singles: Rational, pairs: [Rational; 3]) -> ProbabilityAssignment {
        let mut v = vec![singles.clone(), singles.clone(), singles];
        v.extend(pairs);
        ProbabilityAssignment::new(EventScenario::pairwise(3).unwrap(), v).unwrap()
    }

    #[test]
    fn vertices_of_two_events() {
        let s = EventScenario::pairwise(2).unwrap();
        let vs = enumerate_vertices(&s).unwrap();
        assert_eq!(vs.len(), 4);
        assert_eq!(vs[0b11].coordinates, vec![1, 1, 1]);
        assert_eq!(vs[0b01].coordinates, vec![1, 0, 0]);
    }

    #[test]
    fn pair_coordinates_are_ands_of_singletons() {
        let s = EventScenario::pairwise(3).unwrap();
        for v in enumerate_vertices(&s).unwrap() {
            let bit = |i: usize| (v.atom >> (i - 1) & 1) as u8;
            for (k, set) in s.family().iter().enumerate() {
                let expected = set.indices().iter().map(|&i| bit(i)).product::<u8>();
                assert_eq!(v.coordinates[k], expected);
            }
        }
    }

    #[test]
    fn independent_coins_are_inside() {
        let a = pairwise3(rat(1, 2), [rat(1, 4), rat(1, 4), rat(1, 4)]);
        let verdict = check_membership(&a);
        assert!(verdict.is_inside());
        assert!(verdict_is_sound(&a, &verdict));
        let w = verdict.witness().unwrap();
        assert_eq!(assignment_from_distribution(w, a.scenario()).unwrap(), a);
    }

    #[test]
    fn disjoint_halves_are_outside_by_bonferroni() {
        let a = pairwise3(rat(1, 2), [int(0), int(0), int(0)]);
        let verdict = check_membership(&a);
        let (cert, violation) = verdict.certificate().expect("outside");
        assert!(verdict_is_sound(&a, &verdict));
        assert_eq!(*violation, rat(1, 2));
        assert_eq!(*cert, bonferroni_inequality(3).unwrap().canonical());
    }

    #[test]
    fn game_data_is_outside_by_wigner() {
        // events A, B, C = 1, 2, 3
        let a = pairwise3(rat(1, 2), [rat(3, 8), rat(1, 8), rat(3, 8)]);
        let verdict = check_membership(&a);
        let (cert, violation) = verdict.certificate().expect("outside");
        assert!(verdict_is_sound(&a, &verdict));
        assert_eq!(*violation, rat(1, 8));
        let expected = LinearInequality::from_terms(
            EventScenario::pairwise(3).unwrap(),
            [
                (EventSet::pair(1, 2), int(1)),
                (EventSet::pair(2, 3), int(1)),
                (EventSet::pair(1, 3), int(-1)),
                (EventSet::single(2), int(-1)),
            ],
            Sense::Le,
            int(0),
        )
        .unwrap();
        assert_eq!(*cert, expected);
    }

    #[test]
    fn certificate_checks() {
        let s = EventScenario::pairwise(2).unwrap();
        let inside = ProbabilityAssignment::new(s.clone(), vec![rat(1, 2), rat(1, 2), rat(1, 4)]).unwrap();
        let p12_le_p1 = LinearInequality::from_terms(
            s.clone(),
            [(EventSet::pair(1, 2), int(1)), (EventSet::single(1), int(-1))],
            Sense::Le,
            int(0),
        )
        .unwrap();
        assert!(!verify_certificate(&inside, &p12_le_p1).unwrap());

        let bogus = LinearInequality::from_terms(s.clone(), [(EventSet::single(1), int(1))], Sense::Le, int(0)).unwrap();
        assert!(!verify_certificate(&inside, &bogus).unwrap());

        let other = ProbabilityAssignment::new(EventScenario::singletons(2).unwrap(), vec![int(0), int(0)]).unwrap();
        assert!(verify_certificate(&other, &bogus).is_err());
    }

    #[test]
    fn wigner_form_from_bonferroni() {
        let w = derive_bell_wigner();
        assert_eq!(w.to_string(), "p13 + p23 <= p3 + p12");
        assert!(w.holds_on_all_atoms());
        let back = complement_transform(&w, &EventSet::single(3)).unwrap().canonical();
        assert_eq!(back, bonferroni_inequality(3).unwrap().canonical());
        // game data relabelled so that B plays the role of event 3
        let a = pairwise3(rat(1, 2), [rat(1, 8), rat(3, 8), rat(3, 8)]);
        assert_eq!(w.violation(&a).unwrap(), rat(1, 8));
    }

    #[test]
    fn union_pinned_by_full_data() {
        let known = ProbabilityAssignment::new(
            EventScenario::pairwise(2).unwrap(),
            vec![rat(1, 2), rat(1, 2), rat(1, 4)],
        )
        .unwrap();
        let ext = extremize_over_polytope(&AtomObjective::union(2).unwrap(), &known).unwrap();
        let iv = ext.interval().unwrap();
        assert_eq!((iv.lower(), iv.upper()), (&rat(3, 4), &rat(3, 4)));
    }

    #[test]
    fn extremize_reports_infeasibility() {
        let known = pairwise3(rat(1, 2), [int(0), int(0), int(0)]);
        match extremize_over_polytope(&AtomObjective::union(3).unwrap(), &known).unwrap() {
            Extremum::Infeasible { violation, certificate } => {
                assert_eq!(violation, rat(1, 2));
                assert!(verify_certificate(&known, &certificate).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }
}
