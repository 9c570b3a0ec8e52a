//! Singlet statistics and the CH form of Bell's inequality.
//!
//! For a two-setting, two-outcome experiment on a pair of particles, every
//! local classical model satisfies
//!
//! ```text
//! -1 ≤ p(α1,β1|++) + p(α1,β2|++) + p(α2,β2|++) − p(α2,β1|++) − p1(α1|+) − p2(β2|+) ≤ 0
//! ```
//!
//! The singlet state gives `p(α,β|++) = p(α,β|−−) = ½ sin²((α−β)/2)`,
//! `p(α,β|+−) = p(α,β|−+) = ½ cos²((α−β)/2)` and every single-spin marginal ½.
//!
//! Two evaluation paths are provided. The floating path accepts any angles in
//! `[0, 2π]`. The exact path takes angles as multiples of π/12 and returns
//! [`Rational`]s whenever `cos(α − β)` is rational, which covers the standard
//! violating configuration `(π/3, π, 0, 2π/3)`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::event::{Atom, EventScenario, EventSet, LinearInequality, ProbabilityAssignment, Sense};
use crate::game::Question;
use crate::rational::{int, is_probability, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Plus, Spin::Minus];

    pub fn sign(self) -> char {
        match self {
            Spin::Plus => '+',
            Spin::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    First,
    Second,
}

/// The four measurement settings, two per particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings<A> {
    pub alpha1: A,
    pub alpha2: A,
    pub beta1: A,
    pub beta2: A,
}

impl<A: Copy> Settings<A> {
    pub fn alpha(&self, i: usize) -> A {
        if i == 0 {
            self.alpha1
        } else {
            self.alpha2
        }
    }

    pub fn beta(&self, j: usize) -> A {
        if j == 0 {
            self.beta1
        } else {
            self.beta2
        }
    }

    pub fn as_array(&self) -> [A; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }
}

/// Angles in radians.
pub type AngleConfig = Settings<f64>;

pub fn check_angle(angle: f64) -> Result<()> {
    if angle.is_finite() && (0.0..=TAU).contains(&angle) {
        Ok(())
    } else {
        Err(Error::Domain(format!("angle {angle} outside [0, 2π]")))
    }
}

impl AngleConfig {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        for a in [alpha1, alpha2, beta1, beta2] {
            check_angle(a)?;
        }
        Ok(Settings {
            alpha1,
            alpha2,
            beta1,
            beta2,
        })
    }

    /// `α1 = π/3, α2 = π, β1 = 0, β2 = 2π/3`.
    pub fn reference() -> Self {
        ExactAngleConfig::reference().to_radians()
    }

    pub fn uniform(angle: f64) -> Result<Self> {
        Self::new(angle, angle, angle, angle)
    }
}

/// An angle `k · π/12` with `0 ≤ k ≤ 24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactAngle(u32);

impl ExactAngle {
    pub fn twelfths(k: u32) -> Result<Self> {
        if k <= 24 {
            Ok(ExactAngle(k))
        } else {
            Err(Error::Domain(format!("{k}·π/12 outside [0, 2π]")))
        }
    }

    pub fn k(self) -> u32 {
        self.0
    }

    pub fn radians(self) -> f64 {
        PI * self.0 as f64 / 12.0
    }

    /// `cos(self − other)` when it is rational.
    pub fn cos_difference(self, other: ExactAngle) -> Result<Rational> {
        let d = (self.0 as i64 - other.0 as i64).rem_euclid(24);
        Ok(match d {
            0 => int(1),
            4 | 20 => rat(1, 2),
            6 | 18 => int(0),
            8 | 16 => rat(-1, 2),
            12 => int(-1),
            _ => {
                return Err(Error::Inexact(format!(
                    "cos({}π/12) is irrational",
                    self.0 as i64 - other.0 as i64
                )))
            }
        })
    }
}

impl fmt::Display for ExactAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_integer::Integer;
        let g = self.0.gcd(&12);
        let (num, den) = (self.0 / g.max(1), 12 / g.max(1));
        match (num, den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{n}pi"),
            (1, d) => write!(f, "pi/{d}"),
            (n, d) => write!(f, "{n}pi/{d}"),
        }
    }
}

pub type ExactAngleConfig = Settings<ExactAngle>;

impl ExactAngleConfig {
    pub fn from_twelfths(k: [u32; 4]) -> Result<Self> {
        Ok(Settings {
            alpha1: ExactAngle::twelfths(k[0])?,
            alpha2: ExactAngle::twelfths(k[1])?,
            beta1: ExactAngle::twelfths(k[2])?,
            beta2: ExactAngle::twelfths(k[3])?,
        })
    }

    pub fn reference() -> Self {
        Self::from_twelfths([4, 12, 0, 8]).expect("in range")
    }

    pub fn to_radians(&self) -> AngleConfig {
        Settings {
            alpha1: self.alpha1.radians(),
            alpha2: self.alpha2.radians(),
            beta1: self.beta1.radians(),
            beta2: self.beta2.radians(),
        }
    }
}

/// Singlet joint probability of outcomes `(x, y)` at angles `(alpha, beta)`.
pub fn singlet_joint(alpha: f64, beta: f64, x: Spin, y: Spin) -> Result<f64> {
    check_angle(alpha)?;
    check_angle(beta)?;
    let half = (alpha - beta) / 2.0;
    Ok(if x == y {
        0.5 * half.sin().powi(2)
    } else {
        0.5 * half.cos().powi(2)
    })
}

/// Every single-spin marginal of the singlet is ½.
pub fn singlet_marginal(angle: f64, _spin: Spin) -> Result<f64> {
    check_angle(angle)?;
    Ok(0.5)
}

/// Exact singlet joint probability: `(1 ∓ cos(α − β)) / 4`.
pub fn singlet_joint_exact(alpha: ExactAngle, beta: ExactAngle, x: Spin, y: Spin) -> Result<Rational> {
    let c = alpha.cos_difference(beta)?;
    Ok(if x == y {
        (Rational::one() - c) / int(4)
    } else {
        (Rational::one() + c) / int(4)
    })
}

pub fn singlet_marginal_exact(_angle: ExactAngle, _spin: Spin) -> Result<Rational> {
    Ok(rat(1, 2))
}

/// Same-answer probability `cos²((θi − θj)/2)` of the entangled question game.
pub fn bell_effect_same_prob(theta_i: f64, theta_j: f64) -> Result<f64> {
    check_angle(theta_i)?;
    check_angle(theta_j)?;
    Ok(((theta_i - theta_j) / 2.0).cos().powi(2))
}

pub fn bell_effect_same_prob_exact(theta_i: ExactAngle, theta_j: ExactAngle) -> Result<Rational> {
    Ok((Rational::one() + theta_i.cos_difference(theta_j)?) / int(2))
}

/// Measurement angle of each question: A = 0, B = π/3, C = 2π/3.
pub fn question_angle(q: Question) -> ExactAngle {
    match q {
        Question::A => ExactAngle(0),
        Question::B => ExactAngle(4),
        Question::C => ExactAngle(8),
    }
}

/// Numbers the CH expression can be evaluated in.
pub trait ChScalar:
    Clone + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
}

impl<T> ChScalar for T where
    T: Clone + PartialOrd + Zero + One + Add<Output = T> + Sub<Output = T> + Neg<Output = T>
{
}

/// The six summands of the CH expression and how far the total leaves `[-1, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChBreakdown<T> {
    /// `p(α1,β1|++)`
    pub joint_11: T,
    /// `p(α1,β2|++)`
    pub joint_12: T,
    /// `p(α2,β2|++)`
    pub joint_22: T,
    /// `p(α2,β1|++)`, subtracted
    pub joint_21: T,
    /// `p1(α1|+)`, subtracted
    pub marginal_alpha1: T,
    /// `p2(β2|+)`, subtracted
    pub marginal_beta2: T,
    pub total: T,
    /// `max(0, −1 − total)`
    pub lower_violation: T,
    /// `max(0, total)`
    pub upper_violation: T,
}

fn clamp_positive<T: ChScalar>(v: T) -> T {
    if v > T::zero() {
        v
    } else {
        T::zero()
    }
}

impl<T: ChScalar> ChBreakdown<T> {
    pub fn from_terms(joint_11: T, joint_12: T, joint_22: T, joint_21: T, marginal_alpha1: T, marginal_beta2: T) -> Self {
        let total = joint_11.clone() + joint_12.clone() + joint_22.clone()
            - joint_21.clone()
            - marginal_alpha1.clone()
            - marginal_beta2.clone();
        let lower_violation = clamp_positive(-T::one() - total.clone());
        let upper_violation = clamp_positive(total.clone());
        ChBreakdown {
            joint_11,
            joint_12,
            joint_22,
            joint_21,
            marginal_alpha1,
            marginal_beta2,
            total,
            lower_violation,
            upper_violation,
        }
    }

    pub fn is_violated(&self) -> bool {
        self.lower_violation > T::zero() || self.upper_violation > T::zero()
    }
}

/// Evaluates the CH expression for any model given by its `(+,+)` joint and
/// `+` marginal probabilities.
pub fn ch_value<A, T, J, M>(config: &Settings<A>, joint: J, marginal: M) -> Result<ChBreakdown<T>>
where
    A: Copy,
    T: ChScalar,
    J: Fn(A, A, Spin, Spin) -> Result<T>,
    M: Fn(Party, A, Spin) -> Result<T>,
{
    let pp = |a, b| joint(a, b, Spin::Plus, Spin::Plus);
    Ok(ChBreakdown::from_terms(
        pp(config.alpha1, config.beta1)?,
        pp(config.alpha1, config.beta2)?,
        pp(config.alpha2, config.beta2)?,
        pp(config.alpha2, config.beta1)?,
        marginal(Party::First, config.alpha1, Spin::Plus)?,
        marginal(Party::Second, config.beta2, Spin::Plus)?,
    ))
}

pub fn singlet_ch(config: &AngleConfig) -> Result<ChBreakdown<f64>> {
    ch_value(config, singlet_joint, |_, a, s| singlet_marginal(a, s))
}

pub fn singlet_ch_exact(config: &ExactAngleConfig) -> Result<ChBreakdown<Rational>> {
    ch_value(config, singlet_joint_exact, |_, a, s| singlet_marginal_exact(a, s))
}

/// Predetermined outcomes for both settings on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalAssignment {
    pub first: [Spin; 2],
    pub second: [Spin; 2],
}

impl LocalAssignment {
    /// Index `0..16` with bits `(a1, a2, b1, b2)` from most to least
    /// significant, `+` as 0. Index 0 is `(+,+,+,+)`.
    pub fn from_index(index: usize) -> Self {
        let spin = |bit: usize| if index >> bit & 1 == 0 { Spin::Plus } else { Spin::Minus };
        LocalAssignment {
            first: [spin(3), spin(2)],
            second: [spin(1), spin(0)],
        }
    }

    pub fn index(&self) -> usize {
        let bit = |s: Spin| (s == Spin::Minus) as usize;
        bit(self.first[0]) << 3 | bit(self.first[1]) << 2 | bit(self.second[0]) << 1 | bit(self.second[1])
    }

    /// Atom of the CH scenario: event `k` occurs iff the k-th outcome is `+`.
    pub fn atom(&self) -> Atom {
        let plus = |s: Spin| (s == Spin::Plus) as Atom;
        plus(self.first[0]) | plus(self.first[1]) << 1 | plus(self.second[0]) << 2 | plus(self.second[1]) << 3
    }

    pub fn outcome(&self, i: usize, j: usize) -> (Spin, Spin) {
        (self.first[i], self.second[j])
    }
}

impl fmt::Display for LocalAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.first[0].sign(),
            self.first[1].sign(),
            self.second[0].sign(),
            self.second[1].sign()
        )
    }
}

pub fn all_local_assignments() -> Vec<LocalAssignment> {
    (0..16).map(LocalAssignment::from_index).collect()
}

/// Setting indices used with the local-model evaluations.
pub const SETTING_INDICES: Settings<usize> = Settings {
    alpha1: 0,
    alpha2: 1,
    beta1: 0,
    beta2: 1,
};

fn indicator(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

pub fn local_ch(assignment: &LocalAssignment) -> ChBreakdown<Rational> {
    ch_value(
        &SETTING_INDICES,
        |i, j, x, y| Ok(indicator(assignment.outcome(i, j) == (x, y))),
        |party, k, s| {
            Ok(indicator(match party {
                Party::First => assignment.first[k] == s,
                Party::Second => assignment.second[k] == s,
            }))
        },
    )
    .expect("indicator model is total")
}

/// A probability mixture over the 16 local assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LhvMixing {
    weights: Vec<Rational>,
}

impl LhvMixing {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != 16 {
            return Err(Error::Size {
                what: "mixing weight count",
                value: weights.len(),
                min: 16,
                max: 16,
            });
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| !is_probability(w)) {
            return Err(Error::Domain(format!(
                "weight of {} is {w}",
                LocalAssignment::from_index(k)
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("mixing weights sum to {total}, not 1")));
        }
        Ok(LhvMixing { weights })
    }

    pub fn point(assignment: LocalAssignment) -> Self {
        let mut w = vec![Rational::zero(); 16];
        w[assignment.index()] = Rational::one();
        LhvMixing { weights: w }
    }

    pub fn uniform() -> Self {
        LhvMixing {
            weights: vec![rat(1, 16); 16],
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Exact CH breakdown of the mixture.
    pub fn ch(&self) -> ChBreakdown<Rational> {
        let mix = |f: &dyn Fn(&LocalAssignment) -> bool| -> Rational {
            all_local_assignments()
                .iter()
                .zip(&self.weights)
                .filter(|(a, _)| f(a))
                .map(|(_, w)| w.clone())
                .sum()
        };
        ch_value(
            &SETTING_INDICES,
            |i, j, x, y| Ok(mix(&|a| a.outcome(i, j) == (x, y))),
            |party, k, s| {
                Ok(mix(&|a| match party {
                    Party::First => a.first[k] == s,
                    Party::Second => a.second[k] == s,
                }))
            },
        )
        .expect("mixture model is total")
    }
}

/// Four events `a1+, a2+, b1+, b2+` (numbered 1..4) with the four single
/// probabilities and the four cross pairs `{a_i, b_j}`.
pub fn ch_scenario() -> EventScenario {
    EventScenario::new(
        4,
        [
            EventSet::single(1),
            EventSet::single(2),
            EventSet::single(3),
            EventSet::single(4),
            EventSet::pair(1, 3),
            EventSet::pair(1, 4),
            EventSet::pair(2, 3),
            EventSet::pair(2, 4),
        ],
    )
    .expect("valid scenario")
}

/// `p13 + p14 + p24 − p23 − p1 − p4 ≤ 0`.
pub fn ch_upper_inequality() -> LinearInequality {
    LinearInequality::from_terms(
        ch_scenario(),
        [
            (EventSet::pair(1, 3), int(1)),
            (EventSet::pair(1, 4), int(1)),
            (EventSet::pair(2, 4), int(1)),
            (EventSet::pair(2, 3), int(-1)),
            (EventSet::single(1), int(-1)),
            (EventSet::single(4), int(-1)),
        ],
        Sense::Le,
        int(0),
    )
    .expect("terms in family")
}

/// `−1 ≤ p13 + p14 + p24 − p23 − p1 − p4`, stored as `≤` form.
pub fn ch_lower_inequality() -> LinearInequality {
    let upper = ch_upper_inequality();
    LinearInequality::new(ch_scenario(), upper.coefficients().to_vec(), Sense::Ge, int(-1))
        .expect("same family")
}

/// The singlet statistics at exact angles as an assignment on [`ch_scenario`].
pub fn singlet_ch_assignment(config: &ExactAngleConfig) -> Result<ProbabilityAssignment> {
    let pp = |a, b| singlet_joint_exact(a, b, Spin::Plus, Spin::Plus);
    ProbabilityAssignment::from_pairs(
        4,
        [
            (EventSet::single(1), singlet_marginal_exact(config.alpha1, Spin::Plus)?),
            (EventSet::single(2), singlet_marginal_exact(config.alpha2, Spin::Plus)?),
            (EventSet::single(3), singlet_marginal_exact(config.beta1, Spin::Plus)?),
            (EventSet::single(4), singlet_marginal_exact(config.beta2, Spin::Plus)?),
            (EventSet::pair(1, 3), pp(config.alpha1, config.beta1)?),
            (EventSet::pair(1, 4), pp(config.alpha1, config.beta2)?),
            (EventSet::pair(2, 3), pp(config.alpha2, config.beta1)?),
            (EventSet::pair(2, 4), pp(config.alpha2, config.beta2)?),
        ],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    /// Grid indices `k` of `(α1, α2, β1, β2)`, each angle being `2πk/steps`.
    pub grid: [usize; 4],
    pub config: AngleConfig,
    pub ch: ChBreakdown<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub steps: usize,
    /// Ordered by grid index, `α1` varying slowest and `β2` fastest.
    pub rows: Vec<ScanRow>,
    /// Row index of the first maximal lower violation.
    pub argmax_lower: usize,
    pub max_lower_violation: f64,
    pub argmax_upper: usize,
    pub max_upper_violation: f64,
}

/// Evaluates the singlet CH expression on the grid `{2πk/steps : 0 ≤ k < steps}^4`.
pub fn scan_ch(steps: usize) -> Result<ScanReport> {
    if steps < 2 {
        return Err(Error::Size {
            what: "steps per angle",
            value: steps,
            min: 2,
            max: usize::MAX,
        });
    }
    let count = steps.checked_pow(4).ok_or(Error::Size {
        what: "steps per angle",
        value: steps,
        min: 2,
        max: 255,
    })?;
    let angle = |k: usize| TAU * k as f64 / steps as f64;
    let rows: Vec<ScanRow> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let grid = [idx / steps.pow(3), idx / steps.pow(2) % steps, idx / steps % steps, idx % steps];
            let config = AngleConfig::new(angle(grid[0]), angle(grid[1]), angle(grid[2]), angle(grid[3]))
                .expect("grid angles are below 2π");
            let ch = singlet_ch(&config).expect("angles validated");
            ScanRow { grid, config, ch }
        })
        .collect();
    let argmax = |f: fn(&ScanRow) -> f64| {
        rows.iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, r)| {
                let v = f(r);
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            })
    };
    let (argmax_lower, max_lower_violation) = argmax(|r| r.ch.lower_violation);
    let (argmax_upper, max_upper_violation) = argmax(|r| r.ch.upper_violation);
    Ok(ScanReport {
        steps,
        rows,
        argmax_lower,
        max_lower_violation,
        argmax_upper,
        max_upper_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::CorrelationTarget;

    #[test]
    fn singlet_joint_examples() {
        assert_eq!(singlet_joint(1.0, 1.0, Spin::Plus, Spin::Plus).unwrap(), 0.0);
        assert!((singlet_joint(PI, 0.0, Spin::Plus, Spin::Plus).unwrap() - 0.5).abs() < 1e-15);
        assert!(singlet_joint(-0.1, 0.0, Spin::Plus, Spin::Plus).is_err());
        assert!(singlet_joint(0.0, 7.0, Spin::Plus, Spin::Plus).is_err());
        assert!(singlet_joint(f64::NAN, 0.0, Spin::Plus, Spin::Plus).is_err());
    }

    #[test]
    fn marginals_are_one_half() {
        assert_eq!(singlet_marginal(0.0, Spin::Plus).unwrap(), 0.5);
        assert_eq!(singlet_marginal(PI, Spin::Minus).unwrap(), 0.5);
        assert!(singlet_marginal(7.0, Spin::Minus).is_err());
    }

    #[test]
    fn exact_angles() {
        assert!(ExactAngle::twelfths(25).is_err());
        let a = |k| ExactAngle::twelfths(k).unwrap();
        assert_eq!(a(4).cos_difference(a(0)).unwrap(), rat(1, 2));
        assert_eq!(a(0).cos_difference(a(8)).unwrap(), rat(-1, 2));
        assert_eq!(a(24).cos_difference(a(0)).unwrap(), int(1));
        assert!(matches!(a(1).cos_difference(a(0)), Err(Error::Inexact(_))));
        assert_eq!(a(4).to_string(), "pi/3");
        assert_eq!(a(12).to_string(), "pi");
        assert_eq!(a(8).to_string(), "2pi/3");
        assert_eq!(a(0).to_string(), "0");
        assert_eq!(a(24).to_string(), "2pi");
    }

    #[test]
    fn reference_configuration_both_paths() {
        let exact = singlet_ch_exact(&ExactAngleConfig::reference()).unwrap();
        assert_eq!(
            [&exact.joint_11, &exact.joint_12, &exact.joint_22, &exact.joint_21],
            [&rat(1, 8), &rat(1, 8), &rat(1, 8), &rat(1, 2)]
        );
        assert_eq!(exact.total, rat(-9, 8));
        assert_eq!(exact.lower_violation, rat(1, 8));
        assert_eq!(exact.upper_violation, int(0));

        let float = singlet_ch(&AngleConfig::reference()).unwrap();
        assert!((float.total + 1.125).abs() < 1e-12);
        assert!((float.lower_violation - 0.125).abs() < 1e-12);
    }

    #[test]
    fn equal_angles_sit_on_the_boundary() {
        let b = singlet_ch(&AngleConfig::uniform(1.3).unwrap()).unwrap();
        assert_eq!(b.total, -1.0);
        assert!(!b.is_violated());
    }

    #[test]
    fn local_assignments_respect_the_bound() {
        let all = all_local_assignments();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].to_string(), "(+,+,+,+)");
        for a in &all {
            assert_eq!(LocalAssignment::from_index(a.index()), *a);
            let ch = local_ch(a);
            assert!(ch.total >= int(-1) && ch.total <= int(0), "{a}: {}", ch.total);
        }
        assert_eq!(LhvMixing::uniform().ch().total, rat(-1, 2));
    }

    #[test]
    fn mixing_validation() {
        assert!(LhvMixing::new(vec![rat(1, 16); 15]).is_err());
        let mut w = vec![int(0); 16];
        w[0] = rat(1, 2);
        assert!(LhvMixing::new(w.clone()).is_err());
        w[1] = rat(1, 2);
        assert!(LhvMixing::new(w).is_ok());
    }

    #[test]
    fn ch_inequalities_match_breakdown() {
        let a = singlet_ch_assignment(&ExactAngleConfig::reference()).unwrap();
        assert_eq!(a.values()[4..], [rat(1, 8), rat(1, 8), rat(1, 2), rat(1, 8)]);
        assert_eq!(ch_upper_inequality().evaluate(&a).unwrap(), rat(-9, 8));
        assert_eq!(ch_lower_inequality().violation(&a).unwrap(), rat(1, 8));
        assert!(ch_lower_inequality().holds_on_all_atoms());
        assert!(ch_upper_inequality().holds_on_all_atoms());
        assert_eq!(ch_lower_inequality().to_string(), "p1 + p4 + p23 <= p13 + p14 + p24 + 1");
    }

    #[test]
    fn bell_effect_frequencies() {
        assert_eq!(bell_effect_same_prob(0.0, 0.0).unwrap(), 1.0);
        assert!((bell_effect_same_prob(0.0, PI / 3.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((bell_effect_same_prob(0.0, 2.0 * PI / 3.0).unwrap() - 0.25).abs() < 1e-15);
        let q = question_angle;
        let target = CorrelationTarget::new(
            bell_effect_same_prob_exact(q(Question::A), q(Question::A)).unwrap(),
            bell_effect_same_prob_exact(q(Question::A), q(Question::B)).unwrap(),
            bell_effect_same_prob_exact(q(Question::B), q(Question::C)).unwrap(),
            bell_effect_same_prob_exact(q(Question::A), q(Question::C)).unwrap(),
        )
        .unwrap();
        assert_eq!(target, CorrelationTarget::entangled());
    }

    #[test]
    fn scan_grid_contains_reference_point() {
        let r = scan_ch(24).unwrap();
        assert_eq!(r.rows.len(), 24usize.pow(4));
        assert!(r.max_lower_violation >= 0.125);
        let point = r.rows.iter().find(|row| row.grid == [4, 12, 0, 8]).unwrap();
        assert!((point.ch.total + 1.125).abs() < 1e-12);
        assert!(scan_ch(1).is_err());
    }
}
