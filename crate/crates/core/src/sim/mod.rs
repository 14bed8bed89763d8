//! Plays of the game resolved in the oracle's frame, and Monte Carlo batches
//! of them.
//!
//! Neither C's nor S's timeline can be simulated without an actual oracle.
//! The oracle's own timeline `1 → 3 → 5 → 2 → 6 → 7` visits C's move before
//! S's, so walking it in order only ever needs values that are already
//! known: C's move is fixed at (3), read back as the prediction at (5),
//! S responds at (2), and (6), (7) are resolved through entanglement.

mod rng;

use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decision::{expected_utility, Choice, PredictorProfile, SChoice, UtilityMatrix};
use crate::error::{Error, Result};
use crate::tlg::{self, EventKind, NodeId, Player, TLGraph};

pub use rng::{RngSpec, TrialRng, UniformSource};

/// What happened at one node of the oracle's timeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ResolvedEvent {
    OracleStart,
    CChoice(Choice),
    Prediction(Choice),
    SChoice(SChoice),
    EntangledCChoice(Choice),
    Outcome(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialTrace {
    entries: Vec<(NodeId, ResolvedEvent)>,
}

impl TrialTrace {
    pub fn entries(&self) -> &[(NodeId, ResolvedEvent)] {
        &self.entries
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.entries.iter().map(|(id, _)| *id).collect()
    }

    pub fn event_at(&self, id: NodeId) -> Option<ResolvedEvent> {
        self.entries.iter().find(|(n, _)| *n == id).map(|(_, e)| *e)
    }

    pub fn c_choice(&self) -> Choice {
        self.find(|e| match e {
            ResolvedEvent::CChoice(c) => Some(c),
            _ => None,
        })
    }

    pub fn s_choice(&self) -> SChoice {
        self.find(|e| match e {
            ResolvedEvent::SChoice(s) => Some(s),
            _ => None,
        })
    }

    pub fn utility(&self) -> f64 {
        self.find(|e| match e {
            ResolvedEvent::Outcome(u) => Some(u),
            _ => None,
        })
    }

    fn find<T>(&self, f: impl Fn(ResolvedEvent) -> Option<T>) -> T {
        self.entries
            .iter()
            .find_map(|(_, e)| f(*e))
            .expect("complete trace")
    }
}

/// How each node of the oracle's timeline gets resolved. Node references are
/// slots: positions in the timeline.
#[derive(Debug, Clone, Copy)]
enum Step {
    Start,
    /// C commits to its move.
    CMove,
    /// The oracle reads the value at the inspected node.
    Elaborate {
        inspected: usize,
    },
    /// S responds to the prediction made at `prediction`.
    SMove {
        prediction: usize,
    },
    /// A copied C move; its value comes from the entangled original.
    EntangledCMove {
        original: usize,
    },
    /// Scores the outcome from S's move and the preceding C move.
    Score {
        s_move: usize,
        c_move: usize,
    },
}

const MAX_STEPS: usize = 8;

/// The oracle's timeline compiled into resolution steps.
#[derive(Debug)]
struct OmegaFrame {
    steps: Vec<(NodeId, Step)>,
}

impl OmegaFrame {
    fn build(tlg: &TLGraph) -> Result<Self> {
        let timeline = tlg::player_timeline(tlg, Player::Omega)?;
        if !tlg::validate_linearity(&timeline, tlg)? {
            return Err(Error::Invariant("oracle timeline is not linear".into()));
        }
        if timeline.sequence.len() > MAX_STEPS {
            return Err(Error::Invariant("oracle timeline too long".into()));
        }
        let query = tlg
            .query()
            .ok_or_else(|| Error::Invariant("game graph has no oracle query".into()))?;
        let slot_of = |id: NodeId| {
            timeline
                .sequence
                .iter()
                .position(|&x| x == id)
                .ok_or_else(|| Error::Invariant(format!("node {id} is not on the oracle timeline")))
        };
        let mut steps = Vec::with_capacity(timeline.sequence.len());
        let mut last_s = None;
        let mut last_c = None;
        let mut last_prediction = None;
        for (slot, &id) in timeline.sequence.iter().enumerate() {
            let node = tlg.node(id).expect("timeline node");
            let step = match (node.kind, node.copy_of) {
                (EventKind::OracleStart, _) => Step::Start,
                (EventKind::CChoice, None) => Step::CMove,
                (EventKind::CChoice, Some(original)) => {
                    let original = slot_of(original)?;
                    if original > slot {
                        return Err(Error::Invariant(format!("copy {id} precedes its original")));
                    }
                    Step::EntangledCMove { original }
                }
                (EventKind::Elaboration, _) => {
                    let inspected = slot_of(query.to)?;
                    if inspected > slot {
                        return Err(Error::Invariant(
                            "oracle elaborates before inspecting".into(),
                        ));
                    }
                    last_prediction = Some(slot);
                    Step::Elaborate { inspected }
                }
                (EventKind::SChoice, _) => Step::SMove {
                    prediction: last_prediction
                        .ok_or_else(|| Error::Invariant("S moves before any prediction".into()))?,
                },
                (EventKind::Outcome, _) => Step::Score {
                    s_move: last_s
                        .ok_or_else(|| Error::Invariant("outcome before S's move".into()))?,
                    c_move: last_c
                        .ok_or_else(|| Error::Invariant("outcome before C's move".into()))?,
                },
                (kind, _) => {
                    return Err(Error::Invariant(format!(
                        "unexpected event kind {kind} on oracle timeline"
                    )))
                }
            };
            match node.kind {
                EventKind::SChoice => last_s = Some(slot),
                EventKind::CChoice => last_c = Some(slot),
                _ => {}
            }
            steps.push((id, step));
        }
        Ok(OmegaFrame { steps })
    }

    fn game() -> &'static OmegaFrame {
        static FRAME: OnceLock<OmegaFrame> = OnceLock::new();
        FRAME.get_or_init(|| OmegaFrame::build(&tlg::game_tlg()).expect("game graph compiles"))
    }
}

/// Plays the game once in the oracle's frame. Consumes exactly one uniform
/// draw: S picks S1 iff `u < P(S1 | C)`.
pub fn play_once(
    v: &UtilityMatrix,
    p: &PredictorProfile,
    c_choice: Choice,
    stream: &mut impl UniformSource,
) -> Result<TrialTrace> {
    let frame = OmegaFrame::game();
    let mut entries: Vec<(NodeId, ResolvedEvent)> = Vec::with_capacity(frame.steps.len());
    let mut choices: [Option<Choice>; MAX_STEPS] = [None; MAX_STEPS];
    let mut s_moves: [Option<SChoice>; MAX_STEPS] = [None; MAX_STEPS];
    let unresolved =
        |slot: usize| Error::Invariant(format!("step {slot} read before it was resolved"));

    for (slot, &(id, step)) in frame.steps.iter().enumerate() {
        let event = match step {
            Step::Start => ResolvedEvent::OracleStart,
            Step::CMove => {
                choices[slot] = Some(c_choice);
                ResolvedEvent::CChoice(c_choice)
            }
            Step::Elaborate { inspected } => {
                let seen = choices[inspected].ok_or_else(|| unresolved(inspected))?;
                choices[slot] = Some(seen);
                ResolvedEvent::Prediction(seen)
            }
            Step::SMove { prediction } => {
                let predicted = choices[prediction].ok_or_else(|| unresolved(prediction))?;
                let u = stream.next_uniform();
                let s = if u < p.prob_s1_given(predicted) {
                    SChoice::S1
                } else {
                    SChoice::S2
                };
                s_moves[slot] = Some(s);
                ResolvedEvent::SChoice(s)
            }
            Step::EntangledCMove { original } => {
                let c = choices[original].ok_or_else(|| unresolved(original))?;
                if c != c_choice {
                    return Err(Error::Invariant(format!(
                        "node {id} resolved to {c}, its entangled original holds {c_choice}"
                    )));
                }
                choices[slot] = Some(c);
                ResolvedEvent::EntangledCChoice(c)
            }
            Step::Score { s_move, c_move } => {
                let s = s_moves[s_move].ok_or_else(|| unresolved(s_move))?;
                let c = choices[c_move].ok_or_else(|| unresolved(c_move))?;
                ResolvedEvent::Outcome(v.get(s, c))
            }
        };
        entries.push((id, event));
    }

    let trace = TrialTrace { entries };
    let expected = v.get(trace.s_choice(), c_choice);
    if trace.utility() != expected {
        return Err(Error::Invariant(format!(
            "outcome {} differs from entangled outcome {expected}",
            trace.utility()
        )));
    }
    Ok(trace)
}

/// `|v1j - v2j| * sqrt(q (1 - q) / n)` with `q = P(S1 | Cj)`: the standard
/// error of the mean of `n` two-point outcomes.
pub fn standard_error(v: &UtilityMatrix, p: &PredictorProfile, c_choice: Choice, n: u64) -> f64 {
    let q = p.prob_s1_given(c_choice);
    let spread = (v.get(SChoice::S1, c_choice) - v.get(SChoice::S2, c_choice)).abs();
    // Clamp guards against 1 - q rounding to a tiny negative.
    spread * (q * (1.0 - q) / n as f64).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub c_choice: Choice,
    pub trials: u64,
    pub seed: u64,
    pub first_trial: u64,
    pub empirical_mean: f64,
    pub theoretical: f64,
    pub standard_error: f64,
    /// Number of trials in which S played S1.
    pub s1_count: u64,
    pub elapsed_seconds: f64,
}

impl SimulationReport {
    pub fn s1_frequency(&self) -> f64 {
        self.s1_count as f64 / self.trials as f64
    }
}

/// Trials per partial sum. Fixed so that the summation tree, and therefore
/// the floating-point result, does not depend on the thread count.
const CHUNK: u64 = 4096;

/// Runs `n` trials with streams `rng.stream(0..n)` on `parallelism` threads.
pub fn monte_carlo(
    v: &UtilityMatrix,
    p: &PredictorProfile,
    c_choice: Choice,
    n: u64,
    rng: RngSpec,
    parallelism: usize,
) -> Result<SimulationReport> {
    if n == 0 {
        return Err(Error::Argument(
            "number of trials must be at least 1".into(),
        ));
    }
    if parallelism == 0 {
        return Err(Error::Argument("parallelism must be at least 1".into()));
    }
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Argument(format!("cannot start {parallelism} worker threads: {e}")))?;

    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<(f64, u64)> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let start = chunk * CHUNK;
                let end = (start + CHUNK).min(n);
                let mut sum = 0.0;
                let mut s1 = 0;
                for i in start..end {
                    let trace = play_once(v, p, c_choice, &mut rng.stream(i))?;
                    sum += trace.utility();
                    s1 += u64::from(trace.s_choice() == SChoice::S1);
                }
                Ok((sum, s1))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let (sum, s1_count) = partials
        .iter()
        .fold((0.0, 0), |(sum, s1), &(ps, pc)| (sum + ps, s1 + pc));

    Ok(SimulationReport {
        c_choice,
        trials: n,
        seed: rng.seed,
        first_trial: rng.first_trial,
        empirical_mean: sum / n as f64,
        theoretical: expected_utility(v, p, c_choice),
        standard_error: standard_error(v, p, c_choice, n),
        s1_count,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Theoretical against empirical utilities for both of C's choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub c1: SimulationReport,
    pub c2: SimulationReport,
}

impl ComparisonTable {
    pub fn row(&self, c: Choice) -> &SimulationReport {
        match c {
            Choice::C1 => &self.c1,
            Choice::C2 => &self.c2,
        }
    }

    pub fn theoretical(&self) -> (f64, f64) {
        (self.c1.theoretical, self.c2.theoretical)
    }

    pub fn empirical(&self) -> (f64, f64) {
        (self.c1.empirical_mean, self.c2.empirical_mean)
    }
}

/// Runs both batches. C1 uses trial streams `[0, n)` and C2 `[n, 2n)`
/// relative to `rng.first_trial`, so the table depends only on `(seed, n)`.
pub fn compare(
    v: &UtilityMatrix,
    p: &PredictorProfile,
    n: u64,
    rng: RngSpec,
    parallelism: usize,
) -> Result<ComparisonTable> {
    let c2_start = rng
        .first_trial
        .checked_add(n)
        .ok_or_else(|| Error::Argument("trial index range overflows".into()))?;
    Ok(ComparisonTable {
        c1: monte_carlo(v, p, Choice::C1, n, rng, parallelism)?,
        c2: monte_carlo(v, p, Choice::C2, n, rng.starting_at(c2_start), parallelism)?,
    })
}
