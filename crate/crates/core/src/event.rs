//! Event algebra over atoms.
//!
//! Events are numbered `1..=n`. An atom is one of the `2^n` truth assignments
//! to the events, encoded as a bitmask with bit `i - 1` set iff event `A_i`
//! occurs. A subset of events `{i1 < i2 < ... < ik}` stands for the
//! simultaneous event `A_i1 ∩ ... ∩ A_ik` and is stored the same way.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, is_probability, Rational};

/// Largest event count for which atoms are enumerated.
pub const MAX_EVENTS: usize = 20;

pub type Atom = u32;

/// All atoms of `n` events, ascending.
pub fn enumerate_atoms(n: usize) -> Result<Vec<Atom>> {
    check_event_count(n)?;
    Ok((0..1u32 << n).collect())
}

pub(crate) fn check_event_count(n: usize) -> Result<()> {
    if (1..=MAX_EVENTS).contains(&n) {
        Ok(())
    } else {
        Err(Error::Size {
            what: "event count",
            value: n,
            min: 1,
            max: MAX_EVENTS,
        })
    }
}

/// A nonempty set of event indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EventSet(u32);

impl EventSet {
    /// Builds a subset from 1-based, strictly increasing indices.
    pub fn new(indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubset("empty subset".into()));
        }
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &i in indices {
            if i == 0 || i > MAX_EVENTS {
                return Err(Error::InvalidSubset(format!(
                    "index {i} outside 1..={MAX_EVENTS}"
                )));
            }
            if i <= prev {
                return Err(Error::InvalidSubset(format!(
                    "indices must be strictly increasing, got {indices:?}"
                )));
            }
            prev = i;
            mask |= 1 << (i - 1);
        }
        Ok(EventSet(mask))
    }

    pub fn single(i: usize) -> Self {
        Self::new(&[i]).expect("valid singleton")
    }

    pub fn pair(i: usize, j: usize) -> Self {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        Self::new(&[lo, hi]).expect("valid pair")
    }

    pub fn from_mask(mask: u32) -> Option<Self> {
        (mask != 0 && mask >> MAX_EVENTS == 0).then_some(EventSet(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        (1..=32).contains(&index) && self.0 >> (index - 1) & 1 == 1
    }

    /// True iff the atom makes every event of the set occur.
    pub fn occurs_in(self, atom: Atom) -> bool {
        atom & self.0 == self.0
    }

    /// Canonical family order: by size, then lexicographically by indices.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(&other.indices()))
    }

    /// Compact label: `p13` for `{1,3}`, `p[2,11]` once an index exceeds 9.
    pub fn label(self) -> String {
        let idx = self.indices();
        if idx.iter().all(|&i| i < 10) {
            format!("p{}", idx.iter().map(|i| i.to_string()).collect::<String>())
        } else {
            format!(
                "p[{}]",
                idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            )
        }
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}

/// `n` events together with the family of subsets whose probabilities are
/// known. The family is kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventScenario {
    n: usize,
    family: Vec<EventSet>,
}

impl EventScenario {
    pub fn new(n: usize, family: impl IntoIterator<Item = EventSet>) -> Result<Self> {
        check_event_count(n)?;
        let mut family: Vec<EventSet> = family.into_iter().collect();
        for s in &family {
            if s.max_index() > n {
                return Err(Error::InvalidSubset(format!(
                    "subset {s} references an event beyond n = {n}"
                )));
            }
        }
        family.sort_by(EventSet::canonical_cmp);
        if let Some(w) = family.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("duplicate subset {}", w[0])));
        }
        Ok(EventScenario { n, family })
    }

    /// Singletons only.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).map(EventSet::single))
    }

    /// Singletons plus every pair, the data of the Bonferroni bound.
    pub fn pairwise(n: usize) -> Result<Self> {
        let pairs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| EventSet::pair(i, j)));
        Self::new(n, (1..=n).map(EventSet::single).chain(pairs))
    }

    /// Every nonempty subset of `1..=n`.
    pub fn complete(n: usize) -> Result<Self> {
        check_event_count(n)?;
        Self::new(n, (1..1u32 << n).filter_map(EventSet::from_mask))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &[EventSet] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn position(&self, set: EventSet) -> Option<usize> {
        self.family.iter().position(|&s| s == set)
    }

    pub fn max_order(&self) -> usize {
        self.family.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    pub(crate) fn ensure_same(&self, other: &EventScenario) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ScenarioMismatch(format!(
                "n = {} with {} subsets vs n = {} with {} subsets",
                self.n,
                self.family.len(),
                other.n,
                other.family.len()
            )))
        }
    }
}

/// One probability per family subset, aligned with the scenario's family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityAssignment {
    scenario: EventScenario,
    values: Vec<Rational>,
}

impl ProbabilityAssignment {
    pub fn new(scenario: EventScenario, values: Vec<Rational>) -> Result<Self> {
        if values.len() != scenario.len() {
            return Err(Error::ScenarioMismatch(format!(
                "{} values for {} subsets",
                values.len(),
                scenario.len()
            )));
        }
        if let Some((s, v)) = scenario
            .family()
            .iter()
            .zip(&values)
            .find(|(_, v)| !is_probability(v))
        {
            return Err(Error::Domain(format!("P{s} = {v} is not in [0, 1]")));
        }
        Ok(ProbabilityAssignment { scenario, values })
    }

    /// Builds an assignment from `(subset, value)` pairs in any order.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (EventSet, Rational)>) -> Result<Self> {
        let mut pairs: Vec<(EventSet, Rational)> = pairs.into_iter().collect();
        let scenario = EventScenario::new(n, pairs.iter().map(|(s, _)| *s))?;
        pairs.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Self::new(scenario, pairs.into_iter().map(|(_, v)| v).collect())
    }

    pub fn scenario(&self) -> &EventScenario {
        &self.scenario
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, set: EventSet) -> Option<&Rational> {
        self.scenario.position(set).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (EventSet, &Rational)> {
        self.scenario.family().iter().copied().zip(&self.values)
    }
}

/// Weights over the `2^n` atoms of `n` events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomDistribution {
    n: usize,
    weights: Vec<Rational>,
}

impl AtomDistribution {
    pub fn new(n: usize, weights: Vec<Rational>) -> Result<Self> {
        check_event_count(n)?;
        if weights.len() != 1usize << n {
            return Err(Error::Size {
                what: "atom weight count",
                value: weights.len(),
                min: 1 << n,
                max: 1 << n,
            });
        }
        if let Some((a, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::Domain(format!("atom {a:#b} has negative weight {w}")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("atom weights sum to {total}, not 1")));
        }
        Ok(AtomDistribution { n, weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_event_count(n)?;
        let w = rational::rat(1, 1i64 << n);
        Self::new(n, vec![w; 1 << n])
    }

    pub fn point_mass(n: usize, atom: Atom) -> Result<Self> {
        check_event_count(n)?;
        if atom >> n != 0 {
            return Err(Error::Domain(format!("atom {atom:#b} outside {n} events")));
        }
        let mut weights = vec![Rational::zero(); 1 << n];
        weights[atom as usize] = Rational::one();
        Self::new(n, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: Atom) -> &Rational {
        &self.weights[atom as usize]
    }

    /// Total weight of atoms satisfying `pred`.
    pub fn probability_where(&self, pred: impl Fn(Atom) -> bool) -> Rational {
        self.weights
            .iter()
            .enumerate()
            .filter(|(a, _)| pred(*a as Atom))
            .map(|(_, w)| w)
            .sum()
    }

    /// `P(A_1 ∪ ... ∪ A_n)`: weight of every atom except the empty one.
    pub fn union_probability(&self) -> Rational {
        self.probability_where(|a| a != 0)
    }

    /// `P(A_1 ∩ ... ∩ A_n)`.
    pub fn intersection_probability(&self) -> Rational {
        self.weights.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn subset_probability(&self, set: EventSet) -> Rational {
        self.probability_where(|a| set.occurs_in(a))
    }
}

/// Marginalizes atom weights onto the scenario's family.
pub fn assignment_from_distribution(
    dist: &AtomDistribution,
    scenario: &EventScenario,
) -> Result<ProbabilityAssignment> {
    if dist.n() != scenario.n() {
        return Err(Error::ScenarioMismatch(format!(
            "distribution over {} events, scenario over {}",
            dist.n(),
            scenario.n()
        )));
    }
    let values = scenario
        .family()
        .iter()
        .map(|&s| dist.subset_probability(s))
        .collect();
    ProbabilityAssignment::new(scenario.clone(), values)
}

/// `P(A_1 ∪ ... ∪ A_n)` by inclusion–exclusion: singles minus pairs plus
/// triples and so on, with sign `(-1)^(k+1)` on subsets of size `k`.
///
/// Requires every nonempty subset of `1..=n` to be assigned.
pub fn inclusion_exclusion_union(assignment: &ProbabilityAssignment) -> Result<Rational> {
    let n = assignment.scenario().n();
    let missing: Vec<EventSet> = (1..1u32 << n)
        .filter_map(EventSet::from_mask)
        .filter(|s| assignment.get(*s).is_none())
        .collect();
    if !missing.is_empty() {
        let mut missing = missing;
        missing.sort_by(EventSet::canonical_cmp);
        return Err(Error::MissingData(missing));
    }
    let mut total = Rational::zero();
    for (set, value) in assignment.iter() {
        if set.len() % 2 == 1 {
            total += value;
        } else {
            total -= value;
        }
    }
    Ok(total)
}

/// Two-sided estimate `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lower: Rational,
    upper: Rational,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational) -> Result<Self> {
        if lower > upper {
            return Err(Error::Domain(format!("empty interval [{lower}, {upper}]")));
        }
        Ok(Interval { lower, upper })
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lower <= value && value <= &self.upper
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
}

/// `Σ coefficients[k] · p(family[k]) ≤ constant`.
///
/// Inequalities are always stored with sense `≤`; a `≥` input is negated on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInequality {
    scenario: EventScenario,
    coefficients: Vec<Rational>,
    constant: Rational,
}

impl LinearInequality {
    pub fn new(
        scenario: EventScenario,
        coefficients: Vec<Rational>,
        sense: Sense,
        constant: Rational,
    ) -> Result<Self> {
        if coefficients.len() != scenario.len() {
            return Err(Error::ScenarioMismatch(format!(
                "{} coefficients for {} subsets",
                coefficients.len(),
                scenario.len()
            )));
        }
        let (coefficients, constant) = match sense {
            Sense::Le => (coefficients, constant),
            Sense::Ge => (coefficients.into_iter().map(|c| -c).collect(), -constant),
        };
        Ok(LinearInequality {
            scenario,
            coefficients,
            constant,
        })
    }

    /// Builds from `(subset, coefficient)` terms; repeated subsets accumulate.
    pub fn from_terms(
        scenario: EventScenario,
        terms: impl IntoIterator<Item = (EventSet, Rational)>,
        sense: Sense,
        constant: Rational,
    ) -> Result<Self> {
        let mut coefficients = vec![Rational::zero(); scenario.len()];
        let mut missing = Vec::new();
        for (set, c) in terms {
            match scenario.position(set) {
                Some(k) => coefficients[k] += c,
                None => missing.push(set),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingData(missing));
        }
        Self::new(scenario, coefficients, sense, constant)
    }

    pub fn scenario(&self) -> &EventScenario {
        &self.scenario
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn sense(&self) -> Sense {
        Sense::Le
    }

    pub fn coefficient(&self, set: EventSet) -> Rational {
        self.scenario
            .position(set)
            .map(|k| self.coefficients[k].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (EventSet, &Rational)> {
        self.scenario
            .family()
            .iter()
            .copied()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
    }

    /// Left-hand side on raw values aligned with the family.
    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.coefficients.iter().zip(values).map(|(c, v)| c * v).sum()
    }

    pub fn lhs_at_atom(&self, atom: Atom) -> Rational {
        self.terms()
            .filter(|(s, _)| s.occurs_in(atom))
            .map(|(_, c)| c.clone())
            .sum()
    }

    pub fn evaluate(&self, assignment: &ProbabilityAssignment) -> Result<Rational> {
        self.scenario.ensure_same(assignment.scenario())?;
        Ok(self.lhs(assignment.values()))
    }

    pub fn holds(&self, assignment: &ProbabilityAssignment) -> Result<bool> {
        Ok(self.evaluate(assignment)? <= self.constant)
    }

    /// `max(0, lhs − constant)` on the assignment.
    pub fn violation(&self, assignment: &ProbabilityAssignment) -> Result<Rational> {
        let excess = self.evaluate(assignment)? - &self.constant;
        Ok(if excess.is_positive() { excess } else { Rational::zero() })
    }

    /// True iff the inequality holds on every atom point mass, and hence on
    /// every distribution.
    pub fn holds_on_all_atoms(&self) -> bool {
        (0..1u32 << self.scenario.n()).all(|a| self.lhs_at_atom(a) <= self.constant)
    }

    /// Scales by a positive factor so that all coefficients and the constant
    /// are coprime integers. Two inequalities describe the same half-space
    /// iff their canonical forms are equal (unless both are trivial).
    pub fn canonical(&self) -> LinearInequality {
        let factor = rational::content(self.coefficients.iter().chain(std::iter::once(&self.constant)));
        match factor {
            None => self.clone(),
            Some(g) => LinearInequality {
                scenario: self.scenario.clone(),
                coefficients: self.coefficients.iter().map(|c| c / &g).collect(),
                constant: &self.constant / &g,
            },
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Restates the inequality over another family that contains every
    /// subset with a nonzero coefficient.
    pub fn reexpress(&self, scenario: &EventScenario) -> Result<LinearInequality> {
        let terms: Vec<_> = self.terms().map(|(s, c)| (s, c.clone())).collect();
        Self::from_terms(scenario.clone(), terms, Sense::Le, self.constant.clone())
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, terms: &[(EventSet, Rational)], constant: &Rational) -> fmt::Result {
    let mut first = true;
    for (set, c) in terms {
        let mag = c.abs();
        let neg = c.is_negative();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        if mag.is_one() {
            write!(f, "{}", set.label())?;
        } else {
            write!(f, "{}*{}", mag, set.label())?;
        }
        first = false;
    }
    if !constant.is_zero() || first {
        if first {
            write!(f, "{constant}")?;
        } else {
            write!(
                f,
                " {} {}",
                if constant.is_negative() { '-' } else { '+' },
                constant.abs()
            )?;
        }
    }
    Ok(())
}

/// Prints with positive terms on the left and negated terms moved right,
/// e.g. `p13 + p23 <= p3 + p12`.
impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left: Vec<(EventSet, Rational)> = self
            .terms()
            .filter(|(_, c)| c.is_positive())
            .map(|(s, c)| (s, c.clone()))
            .collect();
        let right: Vec<(EventSet, Rational)> = self
            .terms()
            .filter(|(_, c)| c.is_negative())
            .map(|(s, c)| (s, -c.clone()))
            .collect();
        write_side(f, &left, &Rational::zero())?;
        write!(f, " <= ")?;
        write_side(f, &right, &self.constant)
    }
}
