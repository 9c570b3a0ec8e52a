//! Boole's union and intersection bounds, the pairwise Bonferroni bound and
//! its complement variants.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::event::{
    check_event_count, AtomDistribution, EventScenario, EventSet, Interval, LinearInequality,
    ProbabilityAssignment, Sense,
};
use crate::polytope::{extremize_over_polytope, AtomObjective, Extremum};
use crate::rational::{int, is_probability, Rational};

pub const MIN_FAMILY_EVENTS: usize = 2;
pub const MAX_FAMILY_EVENTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundTarget {
    Union,
    Intersection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub target: BoundTarget,
    pub interval: Interval,
    /// Distributions attaining the lower and upper endpoint, when requested.
    pub attaining_witnesses: Option<(AtomDistribution, AtomDistribution)>,
}

fn check_marginals(marginals: &[Rational]) -> Result<()> {
    check_event_count(marginals.len())?;
    if let Some((i, p)) = marginals.iter().enumerate().find(|(_, p)| !is_probability(p)) {
        return Err(Error::Domain(format!("p{} = {p} is not in [0, 1]", i + 1)));
    }
    Ok(())
}

/// `max p_i ≤ P(∪ A_i) ≤ min(1, Σ p_i)`.
pub fn boole_union_bounds(marginals: &[Rational]) -> Result<BoundsReport> {
    check_marginals(marginals)?;
    let lower = marginals.iter().max().cloned().expect("nonempty");
    let sum: Rational = marginals.iter().sum();
    let upper = sum.min(Rational::one());
    Ok(BoundsReport {
        target: BoundTarget::Union,
        interval: Interval::new(lower, upper)?,
        attaining_witnesses: None,
    })
}

/// `max(0, Σ p_i − n + 1) ≤ P(∩ A_i) ≤ min p_i`.
pub fn boole_intersection_bounds(marginals: &[Rational]) -> Result<BoundsReport> {
    check_marginals(marginals)?;
    let n = marginals.len() as i64;
    let sum: Rational = marginals.iter().sum();
    let lower = (sum - int(n) + Rational::one()).max(Rational::zero());
    let upper = marginals.iter().min().cloned().expect("nonempty");
    Ok(BoundsReport {
        target: BoundTarget::Intersection,
        interval: Interval::new(lower, upper)?,
        attaining_witnesses: None,
    })
}

/// Same as the closed-form bounds, plus distributions that attain both
/// endpoints, found by exact LP over the atoms.
pub fn boole_bounds_with_witnesses(target: BoundTarget, marginals: &[Rational]) -> Result<BoundsReport> {
    let mut report = match target {
        BoundTarget::Union => boole_union_bounds(marginals)?,
        BoundTarget::Intersection => boole_intersection_bounds(marginals)?,
    };
    let n = marginals.len();
    let known = ProbabilityAssignment::new(EventScenario::singletons(n)?, marginals.to_vec())?;
    let objective = match target {
        BoundTarget::Union => AtomObjective::union(n)?,
        BoundTarget::Intersection => AtomObjective::intersection(n)?,
    };
    match extremize_over_polytope(&objective, &known)? {
        Extremum::Range {
            interval,
            argmin,
            argmax,
        } => {
            debug_assert_eq!(interval, report.interval);
            report.attaining_witnesses = Some((argmin, argmax));
            Ok(report)
        }
        Extremum::Infeasible { .. } => unreachable!("marginals in [0, 1] are always realizable"),
    }
}

/// `Σ p_i − Σ p_ij ≤ 1` over the pairwise family of `n` events: the pairwise
/// Bonferroni lower bound on the union with `P(∪) ≤ 1` folded in.
pub fn bonferroni_inequality(n: usize) -> Result<LinearInequality> {
    let scenario = EventScenario::pairwise(n)?;
    let coefficients = scenario
        .family()
        .iter()
        .map(|s| if s.len() == 1 { int(1) } else { int(-1) })
        .collect();
    LinearInequality::new(scenario, coefficients, Sense::Le, int(1))
}

/// Evaluates `Σ p_i − Σ p_ij` and returns it with the checkable inequality.
///
/// `pairs` is keyed by `(i, j)` with `1 ≤ i < j ≤ n`.
pub fn bonferroni_lower(
    singles: &[Rational],
    pairs: &BTreeMap<(usize, usize), Rational>,
) -> Result<(Rational, LinearInequality)> {
    let n = singles.len();
    check_marginals(singles)?;
    let ineq = bonferroni_inequality(n)?;
    let mut missing = Vec::new();
    let mut values = Vec::with_capacity(ineq.scenario().len());
    for set in ineq.scenario().family() {
        let idx = set.indices();
        let value = match idx[..] {
            [i] => Some(&singles[i - 1]),
            [i, j] => pairs.get(&(i, j)),
            _ => unreachable!("pairwise family"),
        };
        match value {
            Some(v) => values.push(v.clone()),
            None => missing.push(*set),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingData(missing));
    }
    if let Some(((i, j), v)) = pairs.iter().find(|(_, v)| !is_probability(v)) {
        return Err(Error::Domain(format!("p{i}{j} = {v} is not in [0, 1]")));
    }
    let assignment = ProbabilityAssignment::new(ineq.scenario().clone(), values)?;
    let value = ineq.evaluate(&assignment)?;
    Ok((value, ineq))
}

/// Rewrites `ineq` as the inequality it becomes when every event in
/// `complemented` is replaced by its complement, expressed back over the
/// original family:
///
/// - `p_i → 1 − p_i` for `i ∈ S`
/// - `p_ij → p_j − p_ij` for `i ∈ S`, `j ∉ S`
/// - `p_ij → 1 − p_i − p_j + p_ij` for `i, j ∈ S`
///
/// The result is valid on every distribution iff the input is. Applying the
/// same transform twice gives back the input.
pub fn complement_transform(ineq: &LinearInequality, complemented: &EventSet) -> Result<LinearInequality> {
    let scenario = ineq.scenario();
    if complemented.max_index() > scenario.n() {
        return Err(Error::Domain(format!(
            "complemented set {complemented} exceeds n = {}",
            scenario.n()
        )));
    }
    let mut terms: Vec<(EventSet, Rational)> = Vec::new();
    let mut shift = Rational::zero();
    for (set, c) in ineq.terms() {
        let c = c.clone();
        match set.indices()[..] {
            [i] => {
                if complemented.contains(i) {
                    shift += &c;
                    terms.push((set, -c));
                } else {
                    terms.push((set, c));
                }
            }
            [i, j] => match (complemented.contains(i), complemented.contains(j)) {
                (false, false) => terms.push((set, c)),
                (true, false) => {
                    terms.push((EventSet::single(j), c.clone()));
                    terms.push((set, -c));
                }
                (false, true) => {
                    terms.push((EventSet::single(i), c.clone()));
                    terms.push((set, -c));
                }
                (true, true) => {
                    shift += &c;
                    terms.push((EventSet::single(i), -c.clone()));
                    terms.push((EventSet::single(j), -c.clone()));
                    terms.push((set, c));
                }
            },
            _ => return Err(Error::UnsupportedOrder { order: set.len() }),
        }
    }
    LinearInequality::from_terms(scenario.clone(), terms, Sense::Le, ineq.constant() - shift)
}

/// The pairwise Bonferroni inequality and all its complement variants, one
/// per subset of `1..=n` (the empty subset giving the original), in subset
/// bitmask order and canonical form.
pub fn generate_bonferroni_family(n: usize) -> Result<Vec<LinearInequality>> {
    if !(MIN_FAMILY_EVENTS..=MAX_FAMILY_EVENTS).contains(&n) {
        return Err(Error::Size {
            what: "event count",
            value: n,
            min: MIN_FAMILY_EVENTS,
            max: MAX_FAMILY_EVENTS,
        });
    }
    let base = bonferroni_inequality(n)?;
    let mut family = Vec::with_capacity(1 << n);
    family.push(base.canonical());
    for mask in 1..1u32 << n {
        let s = EventSet::from_mask(mask).expect("nonzero mask");
        family.push(complement_transform(&base, &s)?.canonical());
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(r: &BoundsReport) -> (Rational, Rational) {
        (r.interval.lower().clone(), r.interval.upper().clone())
    }

    #[test]
    fn union_bounds_examples() {
        assert_eq!(iv(&boole_union_bounds(&[rat(3, 10), rat(2, 5)]).unwrap()), (rat(2, 5), rat(7, 10)));
        assert_eq!(iv(&boole_union_bounds(&vec![rat(1, 2); 3]).unwrap()), (rat(1, 2), int(1)));
        assert_eq!(iv(&boole_union_bounds(&[int(1)]).unwrap()), (int(1), int(1)));
    }

    #[test]
    fn intersection_bounds_examples() {
        assert_eq!(iv(&boole_intersection_bounds(&vec![rat(3, 4); 2]).unwrap()), (rat(1, 2), rat(3, 4)));
        assert_eq!(iv(&boole_intersection_bounds(&vec![rat(1, 4); 2]).unwrap()), (int(0), rat(1, 4)));
        assert_eq!(iv(&boole_intersection_bounds(&vec![rat(3, 4); 3]).unwrap()), (rat(1, 4), rat(3, 4)));
    }

    #[test]
    fn marginals_out_of_range() {
        assert!(matches!(boole_union_bounds(&[rat(3, 2)]), Err(Error::Domain(_))));
        assert!(matches!(boole_intersection_bounds(&[rat(-1, 2)]), Err(Error::Domain(_))));
        assert!(matches!(boole_union_bounds(&[]), Err(Error::Size { .. })));
    }

    #[test]
    fn witnesses_attain_endpoints() {
        let m = [rat(1, 3), rat(3, 4), rat(1, 2)];
        for target in [BoundTarget::Union, BoundTarget::Intersection] {
            let r = boole_bounds_with_witnesses(target, &m).unwrap();
            let (lo, hi) = r.attaining_witnesses.clone().unwrap();
            let eval = |d: &AtomDistribution| match target {
                BoundTarget::Union => d.union_probability(),
                BoundTarget::Intersection => d.intersection_probability(),
            };
            assert_eq!(&eval(&lo), r.interval.lower());
            assert_eq!(&eval(&hi), r.interval.upper());
            for (i, p) in m.iter().enumerate() {
                assert_eq!(&lo.subset_probability(EventSet::single(i + 1)), p);
                assert_eq!(&hi.subset_probability(EventSet::single(i + 1)), p);
            }
        }
    }

    #[test]
    fn bonferroni_values() {
        let pairs = BTreeMap::from([((1, 2), rat(1, 4))]);
        let (v, _) = bonferroni_lower(&[rat(1, 2), rat(1, 2)], &pairs).unwrap();
        assert_eq!(v, rat(3, 4));

        let pairs = BTreeMap::from([((1, 2), int(0)), ((1, 3), int(0)), ((2, 3), int(0))]);
        let (v, ineq) = bonferroni_lower(&vec![rat(1, 2); 3], &pairs).unwrap();
        assert_eq!(v, rat(3, 2));
        assert!(&v > ineq.constant());
    }

    #[test]
    fn bonferroni_missing_pair() {
        let pairs = BTreeMap::from([((1, 2), int(0)), ((2, 3), int(0))]);
        match bonferroni_lower(&vec![rat(1, 2); 3], &pairs) {
            Err(Error::MissingData(m)) => assert_eq!(m, vec![EventSet::pair(1, 3)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complement_examples() {
        let b3 = bonferroni_inequality(3).unwrap();
        let w = complement_transform(&b3, &EventSet::single(3)).unwrap().canonical();
        assert_eq!(w.to_string(), "p13 + p23 <= p3 + p12");

        let b2 = bonferroni_inequality(2).unwrap();
        let c = complement_transform(&b2, &EventSet::single(1)).unwrap().canonical();
        assert_eq!(c.to_string(), "p12 <= p1");
    }

    #[test]
    fn complement_is_an_involution() {
        let b4 = bonferroni_inequality(4).unwrap();
        for mask in 1..16 {
            let s = EventSet::from_mask(mask).unwrap();
            let twice = complement_transform(&complement_transform(&b4, &s).unwrap(), &s).unwrap();
            assert_eq!(twice, b4);
        }
    }

    #[test]
    fn complement_errors() {
        let b2 = bonferroni_inequality(2).unwrap();
        assert!(matches!(
            complement_transform(&b2, &EventSet::single(3)),
            Err(Error::Domain(_))
        ));
        let full = EventScenario::complete(3).unwrap();
        let triple = LinearInequality::from_terms(
            full,
            [(EventSet::new(&[1, 2, 3]).unwrap(), int(1))],
            Sense::Le,
            int(1),
        )
        .unwrap();
        assert_eq!(
            complement_transform(&triple, &EventSet::single(1)),
            Err(Error::UnsupportedOrder { order: 3 })
        );
        // pairs without their singletons cannot absorb the substitution
        let bare = EventScenario::new(2, [EventSet::pair(1, 2)]).unwrap();
        let ineq = LinearInequality::from_terms(bare, [(EventSet::pair(1, 2), int(1))], Sense::Le, int(1)).unwrap();
        assert!(matches!(
            complement_transform(&ineq, &EventSet::single(1)),
            Err(Error::MissingData(_))
        ));
    }

    #[test]
    fn family_sizes_and_range() {
        assert_eq!(generate_bonferroni_family(2).unwrap().len(), 4);
        assert!(generate_bonferroni_family(1).is_err());
        assert!(generate_bonferroni_family(11).is_err());
        let f3 = generate_bonferroni_family(3).unwrap();
        assert_eq!(f3[0b100].to_string(), "p13 + p23 <= p3 + p12");
    }
}
