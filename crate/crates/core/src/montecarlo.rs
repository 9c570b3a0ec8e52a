//! Seeded, reproducible sampling.
//!
//! # Generator
//!
//! All randomness comes from PCG-XSH-RR 64/32 ([`Pcg32`]): a 64-bit LCG with
//! multiplier `6364136223846793005` and odd increment `2·stream + 1`, whose
//! 32-bit output is `rotr(((s >> 18) ^ s) >> 27, s >> 59)` of the pre-advance
//! state `s`. Seeding follows the reference implementation: state 0, advance,
//! add the seed, advance. A 64-bit word is two outputs, high word first, and
//! a uniform `f64` in `[0, 1)` is the top 53 bits of that word times `2^-53`.
//!
//! # Block/stream contract
//!
//! Trials are cut into blocks of [`BLOCK_TRIALS`]. Block `b` of a sampling
//! task with tag `t` (the setting or question pair) draws from its own PCG
//! stream, `splitmix64(splitmix64(splitmix64(stream) ^ t) ^ b)`, seeded with
//! the user's seed. Block results are plain counts merged by addition, so
//! the parallel and serial runs agree bit for bit.
//!
//! # Tolerances
//!
//! A frequency estimated from `N` trials with true value `p` has standard
//! error `sqrt(p(1 − p)/N)`; at `N = 10^6` that is at most `5·10^-4`, so the
//! `0.005` tolerances used in tests are about ten standard errors wide. The
//! CH estimate sums six such terms; its reported standard error is the
//! root-sum-square of the per-term errors.

use rayon::prelude::*;
use std::collections::BTreeMap;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::game::Question;
use crate::quantum::{
    bell_effect_same_prob, question_angle, singlet_joint, AngleConfig, ChBreakdown, LhvMixing,
    LocalAssignment, Spin,
};
use crate::rational::to_f64;

pub const BLOCK_TRIALS: u64 = 1 << 16;

/// Default trial count for "a large number of experiments".
pub const DEFAULT_TRIALS: u64 = 1_000_000;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Pcg32 {
    state: u64,
    increment: u64,
}

const PCG_MULTIPLIER: u64 = 6_364_136_223_846_793_005;

impl Pcg32 {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = Pcg32 {
            state: 0,
            increment: (stream << 1) | 1,
        };
        rng.next_u32();
        rng.state = rng.state.wrapping_add(seed);
        rng.next_u32();
        rng
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.state = old.wrapping_mul(PCG_MULTIPLIER).wrapping_add(self.increment);
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    pub fn next_u64(&mut self) -> u64 {
        let hi = self.next_u32() as u64;
        let lo = self.next_u32() as u64;
        hi << 32 | lo
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    /// Generator for block `block` of the sampling task tagged `tag`.
    pub fn block_rng(&self, tag: u64, block: u64) -> Pcg32 {
        let stream = splitmix64(splitmix64(splitmix64(self.stream) ^ tag) ^ block);
        Pcg32::new(self.seed, stream)
    }
}

/// Runs `trials` draws split into blocks, in parallel, and sums the results.
fn run_blocks<C, F>(rng: &RngSpec, tag: u64, trials: u64, sample: F) -> C
where
    C: Add<Output = C> + Default + Send,
    F: Fn(&mut Pcg32, u64) -> C + Sync,
{
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
            sample(&mut rng.block_rng(tag, b), n)
        })
        .reduce(C::default, |a, b| a + b)
}

/// Which `(α_i, β_j)` pair is measured; indices are 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setting {
    pub alpha: usize,
    pub beta: usize,
}

impl Setting {
    pub const ALL: [Setting; 4] = [
        Setting { alpha: 0, beta: 0 },
        Setting { alpha: 0, beta: 1 },
        Setting { alpha: 1, beta: 0 },
        Setting { alpha: 1, beta: 1 },
    ];

    pub fn new(alpha: usize, beta: usize) -> Result<Self> {
        if alpha > 1 || beta > 1 {
            return Err(Error::Domain(format!("setting ({alpha}, {beta}) must use indices 0 or 1")));
        }
        Ok(Setting { alpha, beta })
    }

    fn tag(self) -> u64 {
        (2 * self.alpha + self.beta) as u64
    }
}

/// Counts indexed `[x][y]` with `+` as 0 and `−` as 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountTable(pub [[u64; 2]; 2]);

impl CountTable {
    pub fn get(&self, x: Spin, y: Spin) -> u64 {
        self.0[x as usize][y as usize]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    fn record(&mut self, x: Spin, y: Spin) {
        self.0[x as usize][y as usize] += 1;
    }
}

impl Add for CountTable {
    type Output = CountTable;

    fn add(mut self, rhs: CountTable) -> CountTable {
        for x in 0..2 {
            for y in 0..2 {
                self.0[x][y] += rhs.0[x][y];
            }
        }
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutcomeCounts {
    pub tables: BTreeMap<Setting, CountTable>,
}

impl OutcomeCounts {
    pub fn single(setting: Setting, table: CountTable) -> Self {
        OutcomeCounts {
            tables: BTreeMap::from([(setting, table)]),
        }
    }

    pub fn table(&self, setting: Setting) -> Option<&CountTable> {
        self.tables.get(&setting)
    }

    pub fn trials(&self, setting: Setting) -> u64 {
        self.table(setting).map_or(0, CountTable::total)
    }

    pub fn merge(mut self, other: OutcomeCounts) -> OutcomeCounts {
        for (s, t) in other.tables {
            let e = self.tables.entry(s).or_default();
            *e = *e + t;
        }
        self
    }
}

fn check_trials(trials: u64, min: u64) -> Result<()> {
    if trials >= min {
        Ok(())
    } else {
        Err(Error::Size {
            what: "trials",
            value: trials as usize,
            min: min as usize,
            max: usize::MAX,
        })
    }
}

fn flip(s: Spin) -> Spin {
    match s {
        Spin::Plus => Spin::Minus,
        Spin::Minus => Spin::Plus,
    }
}

/// I.i.d. singlet outcomes at one setting: the first spin is a fair coin and
/// the second equals it with probability `sin²((α − β)/2)`.
pub fn sample_singlet(config: &AngleConfig, setting: Setting, trials: u64, rng: &RngSpec) -> Result<OutcomeCounts> {
    check_trials(trials, 1)?;
    let alpha = config.alpha(setting.alpha);
    let beta = config.beta(setting.beta);
    let p_same = 2.0 * singlet_joint(alpha, beta, Spin::Plus, Spin::Plus)?;
    let table = run_blocks(rng, setting.tag(), trials, |g, n| {
        let mut t = CountTable::default();
        for _ in 0..n {
            let x = if g.next_f64() < 0.5 { Spin::Plus } else { Spin::Minus };
            let y = if g.next_f64() < p_same { x } else { flip(x) };
            t.record(x, y);
        }
        t
    });
    Ok(OutcomeCounts::single(setting, table))
}

/// Per trial, draws one local assignment from the mixing and reads off the
/// outcomes at the setting. All four settings are sampled.
pub fn sample_lhv(mixing: &LhvMixing, trials_per_setting: u64, rng: &RngSpec) -> Result<OutcomeCounts> {
    check_trials(trials_per_setting, 1)?;
    let mut cumulative = Vec::with_capacity(16);
    let mut acc = 0.0;
    for w in mixing.weights() {
        acc += to_f64(w);
        cumulative.push(acc);
    }
    let last_positive = mixing
        .weights()
        .iter()
        .rposition(|w| *w > num_traits::Zero::zero())
        .expect("weights sum to one");
    let draw = |u: f64| -> LocalAssignment {
        let k = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(last_positive)
            .min(last_positive);
        LocalAssignment::from_index(k)
    };
    let mut counts = OutcomeCounts::default();
    for setting in Setting::ALL {
        let table = run_blocks(rng, setting.tag(), trials_per_setting, |g, n| {
            let mut t = CountTable::default();
            for _ in 0..n {
                let (x, y) = draw(g.next_f64()).outcome(setting.alpha, setting.beta);
                t.record(x, y);
            }
            t
        });
        counts.tables.insert(setting, table);
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChEstimate {
    pub breakdown: ChBreakdown<f64>,
    pub estimate: f64,
    pub standard_error: f64,
}

/// Plugs empirical frequencies into the CH expression.
///
/// Joint terms use their own setting; `p1(α1|+)` pools the two settings that
/// measure `α1`, `p2(β2|+)` the two that measure `β2`.
pub fn ch_from_counts(counts: &OutcomeCounts) -> Result<ChEstimate> {
    let table = |s: Setting| {
        counts
            .table(s)
            .filter(|t| t.total() > 0)
            .ok_or_else(|| Error::Domain(format!("no trials at setting ({}, {})", s.alpha, s.beta)))
    };
    let mut variance = 0.0;
    let mut freq = |hits: u64, n: u64| {
        let p = hits as f64 / n as f64;
        variance += p * (1.0 - p) / n as f64;
        p
    };
    let joint = |s: Setting, freq: &mut dyn FnMut(u64, u64) -> f64| -> Result<f64> {
        let t = table(s)?;
        Ok(freq(t.get(Spin::Plus, Spin::Plus), t.total()))
    };
    let s = |a, b| Setting { alpha: a, beta: b };
    let j11 = joint(s(0, 0), &mut freq)?;
    let j12 = joint(s(0, 1), &mut freq)?;
    let j22 = joint(s(1, 1), &mut freq)?;
    let j21 = joint(s(1, 0), &mut freq)?;
    let (t00, t01, t11) = (table(s(0, 0))?, table(s(0, 1))?, table(s(1, 1))?);
    let a1_plus = |t: &CountTable| t.get(Spin::Plus, Spin::Plus) + t.get(Spin::Plus, Spin::Minus);
    let b2_plus = |t: &CountTable| t.get(Spin::Plus, Spin::Plus) + t.get(Spin::Minus, Spin::Plus);
    let m_a1 = freq(a1_plus(t00) + a1_plus(t01), t00.total() + t01.total());
    let m_b2 = freq(b2_plus(t01) + b2_plus(t11), t01.total() + t11.total());
    let breakdown = ChBreakdown::from_terms(j11, j12, j22, j21, m_a1, m_b2);
    Ok(ChEstimate {
        estimate: breakdown.total,
        standard_error: variance.sqrt(),
        breakdown,
    })
}

/// Samples the singlet at all four settings and estimates the CH expression.
pub fn empirical_ch(config: &AngleConfig, trials_per_setting: u64, rng: &RngSpec) -> Result<ChEstimate> {
    check_trials(trials_per_setting, 100)?;
    let mut counts = OutcomeCounts::default();
    for setting in Setting::ALL {
        counts = counts.merge(sample_singlet(config, setting, trials_per_setting, rng)?);
    }
    ch_from_counts(&counts)
}

pub fn empirical_ch_lhv(mixing: &LhvMixing, trials_per_setting: u64, rng: &RngSpec) -> Result<ChEstimate> {
    check_trials(trials_per_setting, 100)?;
    ch_from_counts(&sample_lhv(mixing, trials_per_setting, rng)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellEffectFrequencies {
    pub aa: f64,
    pub ab: f64,
    pub bc: f64,
    pub ac: f64,
    pub trials: u64,
}

pub const QUESTION_PAIRS: [(Question, Question); 4] = [
    (Question::A, Question::A),
    (Question::A, Question::B),
    (Question::B, Question::C),
    (Question::A, Question::C),
];

#[derive(Default)]
struct Hits(u64);

impl Add for Hits {
    type Output = Hits;
    fn add(self, rhs: Hits) -> Hits {
        Hits(self.0 + rhs.0)
    }
}

/// Same-answer frequencies of the entangled question game for
/// (A,A), (A,B), (B,C), (A,C), with questions measured at 0, π/3, 2π/3.
pub fn empirical_bell_effect(trials_per_question_pair: u64, rng: &RngSpec) -> Result<BellEffectFrequencies> {
    check_trials(trials_per_question_pair, 1)?;
    let mut freqs = [0.0; 4];
    for (tag, (qi, qj)) in QUESTION_PAIRS.iter().enumerate() {
        let p = bell_effect_same_prob(question_angle(*qi).radians(), question_angle(*qj).radians())?;
        let hits = run_blocks(rng, tag as u64, trials_per_question_pair, |g, n| {
            Hits((0..n).filter(|_| g.next_f64() < p).count() as u64)
        });
        freqs[tag] = hits.0 as f64 / trials_per_question_pair as f64;
    }
    Ok(BellEffectFrequencies {
        aa: freqs[0],
        ab: freqs[1],
        bc: freqs[2],
        ac: freqs[3],
        trials: trials_per_question_pair,
    })
}
