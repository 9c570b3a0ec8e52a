//! The three-question, two-answer game played by two separated participants.
//!
//! Each participant is asked one of the questions A, B, C and answers R or S.
//! Giving equal answers to equal questions forces a joint strategy
//! `f : {A, B, C} → {R, S}`. A strategy and its complement agree and disagree
//! on exactly the same question pairs, which leaves four classes. Mixing the
//! classes with weights `(α, β, γ, δ)` must reproduce the target same-answer
//! frequencies; for `(3/4, 3/4, 1/4)` the unique solution has `γ = −1/8`.

use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::event::{EventScenario, EventSet, ProbabilityAssignment};
use crate::rational::{int, is_probability, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Question {
    A,
    B,
    C,
}

impl Question {
    pub const ALL: [Question; 3] = [Question::A, Question::B, Question::C];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Answer {
    R,
    S,
}

impl Answer {
    pub fn flip(self) -> Self {
        match self {
            Answer::R => Answer::S,
            Answer::S => Answer::R,
        }
    }
}

/// A total map from questions to answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    answers: [Answer; 3],
}

impl Strategy {
    pub fn new(a: Answer, b: Answer, c: Answer) -> Self {
        Strategy { answers: [a, b, c] }
    }

    pub fn answer(&self, q: Question) -> Answer {
        self.answers[q as usize]
    }

    pub fn complement(&self) -> Self {
        Strategy {
            answers: self.answers.map(Answer::flip),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.answers {
            write!(f, "{a:?}")?;
        }
        Ok(())
    }
}

/// The eight joint strategies, RRR first and SSS last, with A varying slowest.
pub fn enumerate_joint_strategies() -> Vec<Strategy> {
    let pick = |bit: u32| if bit == 0 { Answer::R } else { Answer::S };
    (0..8u32)
        .map(|k| Strategy::new(pick(k >> 2 & 1), pick(k >> 1 & 1), pick(k & 1)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyClass {
    /// The member answering R to A.
    pub representative: Strategy,
    pub members: [Strategy; 2],
}

impl StrategyClass {
    pub fn contains(&self, s: &Strategy) -> bool {
        self.members.contains(s)
    }
}

/// Pairs each strategy with its complement: rows (1, 8), (2, 7), (3, 6), (4, 5)
/// of the strategy table, ordered by representative RRR, RRS, RSR, RSS.
pub fn reduce_strategies() -> Vec<StrategyClass> {
    enumerate_joint_strategies()
        .into_iter()
        .filter(|s| s.answer(Question::A) == Answer::R)
        .map(|s| StrategyClass {
            representative: s,
            members: [s, s.complement()],
        })
        .collect()
}

/// 1 where the strategy answers both questions of the pair equally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SameProfile {
    pub ab: u8,
    pub bc: u8,
    pub ac: u8,
}

pub fn strategy_profile(s: &Strategy) -> SameProfile {
    let same = |x, y| (s.answer(x) == s.answer(y)) as u8;
    SameProfile {
        ab: same(Question::A, Question::B),
        bc: same(Question::B, Question::C),
        ac: same(Question::A, Question::C),
    }
}

pub fn same_result_profile(class: &StrategyClass) -> SameProfile {
    strategy_profile(&class.representative)
}

/// Required same-answer frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationTarget {
    pub same_when_equal: Rational,
    pub same_ab: Rational,
    pub same_bc: Rational,
    pub same_ac: Rational,
}

impl CorrelationTarget {
    pub fn new(same_when_equal: Rational, same_ab: Rational, same_bc: Rational, same_ac: Rational) -> Result<Self> {
        for (name, v) in [
            ("same_when_equal", &same_when_equal),
            ("same_ab", &same_ab),
            ("same_bc", &same_bc),
            ("same_ac", &same_ac),
        ] {
            if !is_probability(v) {
                return Err(Error::Domain(format!("{name} = {v} is not in [0, 1]")));
            }
        }
        Ok(CorrelationTarget {
            same_when_equal,
            same_ab,
            same_bc,
            same_ac,
        })
    }

    /// `(1, 3/4, 3/4, 1/4)`: the entangled-pair frequencies.
    pub fn entangled() -> Self {
        Self::new(int(1), rat(3, 4), rat(3, 4), rat(1, 4)).expect("valid target")
    }

    /// Maps the target onto three events "answer R to X" under answer
    /// symmetry: every single is 1/2 and `P(same on XY) = 2 · p_XY`.
    pub fn to_assignment(&self) -> Result<ProbabilityAssignment> {
        let half = rat(1, 2);
        ProbabilityAssignment::from_pairs(
            3,
            [
                (EventSet::single(1), half.clone()),
                (EventSet::single(2), half.clone()),
                (EventSet::single(3), half.clone()),
                (EventSet::pair(1, 2), &self.same_ab * &half),
                (EventSet::pair(1, 3), &self.same_ac * &half),
                (EventSet::pair(2, 3), &self.same_bc * &half),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingSolution {
    /// `(α, β, γ, δ)` over the classes RRR, RRS, RSR, RSS.
    pub weights: [Rational; 4],
    pub feasible: bool,
    /// Names (`alpha`, `beta`, `gamma`, `delta`) of negative weights.
    pub negative_components: Vec<&'static str>,
}

pub const WEIGHT_NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

/// Solves normalization plus the three same-answer equations for the class
/// weights.
///
/// The coefficient matrix depends only on the class profiles, not on the
/// target, and is nonsingular, so the solution is always unique.
pub fn solve_mixing(target: &CorrelationTarget) -> Result<MixingSolution> {
    if !target.same_when_equal.is_one() {
        return Err(Error::UnsupportedTarget(format!(
            "same-question agreement must be 1 for joint strategies, got {}",
            target.same_when_equal
        )));
    }
    let classes = reduce_strategies();
    let profiles: Vec<SameProfile> = classes.iter().map(same_result_profile).collect();
    let row = |f: fn(&SameProfile) -> u8| -> Vec<Rational> {
        profiles.iter().map(|p| int(f(p) as i64)).collect()
    };
    let matrix = vec![
        vec![Rational::one(); 4],
        row(|p| p.ab),
        row(|p| p.bc),
        row(|p| p.ac),
    ];
    let rhs = vec![
        Rational::one(),
        target.same_ab.clone(),
        target.same_bc.clone(),
        target.same_ac.clone(),
    ];
    let weights = solve_square(matrix, rhs).expect("class profile matrix is nonsingular");
    let weights: [Rational; 4] = weights.try_into().expect("four weights");
    let negative_components: Vec<&'static str> = weights
        .iter()
        .zip(WEIGHT_NAMES)
        .filter(|(w, _)| w.is_negative())
        .map(|(_, name)| name)
        .collect();
    Ok(MixingSolution {
        feasible: negative_components.is_empty(),
        weights,
        negative_components,
    })
}

/// Gauss–Jordan elimination; `None` if the matrix is singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        b[col] /= &p;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

/// The three-event scenario used by [`CorrelationTarget::to_assignment`].
pub fn game_scenario() -> EventScenario {
    EventScenario::pairwise(3).expect("n = 3")
}
