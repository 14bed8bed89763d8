//! Closed-form expected-utility analysis of the two-choice game.
//!
//! Player S moves first (rows), player C second (columns). S's move is
//! correlated with C's through the predictor accuracies `p1 = P(S1 | C1)` and
//! `p2 = P(S2 | C2)`, which makes each of C's expected utilities an affine
//! function of one accuracy.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// C's move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Choice {
    C1,
    C2,
}

impl Choice {
    pub const ALL: [Choice; 2] = [Choice::C1, Choice::C2];

    pub fn index(self) -> usize {
        match self {
            Choice::C1 => 0,
            Choice::C2 => 1,
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Choice::C1 => "C1",
            Choice::C2 => "C2",
        })
    }
}

/// S's move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SChoice {
    S1,
    S2,
}

impl SChoice {
    pub fn index(self) -> usize {
        match self {
            SChoice::S1 => 0,
            SChoice::S2 => 1,
        }
    }
}

impl fmt::Display for SChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SChoice::S1 => "S1",
            SChoice::S2 => "S2",
        })
    }
}

/// 2×2 payoff table for C, in euros. Rows are indexed by S's move, columns
/// by C's move.
///
/// Entries must be finite and nonnegative. Zero is admitted because the
/// classic table has `v12 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityMatrix {
    rows: [[f64; 2]; 2],
}

impl UtilityMatrix {
    /// The classic Newcomb table.
    pub const CLASSIC: UtilityMatrix = UtilityMatrix {
        rows: [[10_000.0, 0.0], [1_010_000.0, 1_000_000.0]],
    };

    pub fn new(v11: f64, v12: f64, v21: f64, v22: f64) -> Result<Self> {
        Self::from_rows([[v11, v12], [v21, v22]])
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                let field = format!("utilities[{i}][{j}]");
                if !value.is_finite() {
                    return Err(Error::validation(field, format!("{value} is not finite")));
                }
                if value < 0.0 {
                    return Err(Error::validation(field, format!("{value} is negative")));
                }
            }
        }
        Ok(UtilityMatrix { rows })
    }

    pub fn classic() -> Self {
        Self::CLASSIC
    }

    /// Every entry equal to `value`.
    pub fn uniform(value: f64) -> Result<Self> {
        Self::new(value, value, value, value)
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        self.rows
    }

    pub fn get(&self, s: SChoice, c: Choice) -> f64 {
        self.rows[s.index()][c.index()]
    }

    pub fn v11(&self) -> f64 {
        self.rows[0][0]
    }
    pub fn v12(&self) -> f64 {
        self.rows[0][1]
    }
    pub fn v21(&self) -> f64 {
        self.rows[1][0]
    }
    pub fn v22(&self) -> f64 {
        self.rows[1][1]
    }

    /// Applies `f` to every entry and re-validates.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let r = self.rows;
        Self::from_rows([[f(r[0][0]), f(r[0][1])], [f(r[1][0]), f(r[1][1])]])
    }
}

/// Predictor accuracies `p1 = P(S1 | C1)` and `p2 = P(S2 | C2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorProfile {
    p1: f64,
    p2: f64,
}

impl PredictorProfile {
    pub const PERFECT: PredictorProfile = PredictorProfile { p1: 1.0, p2: 1.0 };
    pub const RANDOM: PredictorProfile = PredictorProfile { p1: 0.5, p2: 0.5 };

    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (i, p) in [p1, p2].into_iter().enumerate() {
            // NaN fails the range test too.
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(
                    format!("predictor[{i}]"),
                    format!("probability {p} outside [0, 1]"),
                ));
            }
        }
        Ok(PredictorProfile { p1, p2 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// `P(S = S1 | C = c)`: `p1` given C1, `1 - p2` given C2.
    pub fn prob_s1_given(&self, c: Choice) -> f64 {
        match c {
            Choice::C1 => self.p1,
            Choice::C2 => 1.0 - self.p2,
        }
    }
}

/// C's expected utilities `(U1, U2)`.
///
/// `U1 = v21 + p1 (v11 - v21)` and `U2 = v12 + p2 (v22 - v12)`.
pub fn expected_utilities(v: &UtilityMatrix, p: &PredictorProfile) -> (f64, f64) {
    let u1 = v.v21() + p.p1() * (v.v11() - v.v21());
    let u2 = v.v12() + p.p2() * (v.v22() - v.v12());
    (u1, u2)
}

/// Expected utility of a single choice.
pub fn expected_utility(v: &UtilityMatrix, p: &PredictorProfile, c: Choice) -> f64 {
    let (u1, u2) = expected_utilities(v, p);
    match c {
        Choice::C1 => u1,
        Choice::C2 => u2,
    }
}

/// C1 iff `U1 >= U2`. Ties go to C1; the comparison is exact, with no
/// tolerance band.
pub fn choose(v: &UtilityMatrix, p: &PredictorProfile) -> Choice {
    let (u1, u2) = expected_utilities(v, p);
    if u1 >= u2 {
        Choice::C1
    } else {
        Choice::C2
    }
}

/// The choice rule as an affine half-plane: C1 iff `a1 p1 + a2 p2 >= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionBoundary {
    pub a1: f64,
    pub a2: f64,
    pub b: f64,
}

impl DecisionBoundary {
    pub fn choice_at(&self, p1: f64, p2: f64) -> Choice {
        if self.a1 * p1 + self.a2 * p2 >= self.b {
            Choice::C1
        } else {
            Choice::C2
        }
    }
}

pub fn decision_boundary(v: &UtilityMatrix) -> DecisionBoundary {
    DecisionBoundary {
        a1: v.v11() - v.v21(),
        a2: v.v12() - v.v22(),
        b: v.v12() - v.v21(),
    }
}

/// Choices over an inclusive uniform grid of `[0, 1]²`.
///
/// Cells are stored row-major with `p1` varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionGrid {
    resolution: usize,
    cells: Vec<Choice>,
}

impl RegionGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cells(&self) -> &[Choice] {
        &self.cells
    }

    /// Grid coordinate of index `i`.
    pub fn coordinate(&self, i: usize) -> f64 {
        grid_coordinate(i, self.resolution)
    }

    /// Cell at `p1 = coordinate(i)`, `p2 = coordinate(j)`.
    pub fn cell(&self, i: usize, j: usize) -> Choice {
        assert!(
            i < self.resolution && j < self.resolution,
            "grid index out of range"
        );
        self.cells[j * self.resolution + i]
    }
}

fn grid_coordinate(i: usize, resolution: usize) -> f64 {
    i as f64 / (resolution - 1) as f64
}

pub fn region_grid(v: &UtilityMatrix, resolution: usize) -> Result<RegionGrid> {
    if resolution < 2 {
        return Err(Error::Argument(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let mut cells = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        let p2 = grid_coordinate(j, resolution);
        for i in 0..resolution {
            let p1 = grid_coordinate(i, resolution);
            let p = PredictorProfile { p1, p2 };
            cells.push(choose(v, &p));
        }
    }
    Ok(RegionGrid { resolution, cells })
}

/// The strictly dominant choice, if any: C1 when it beats C2 against both of
/// S's moves, C2 in the reverse case.
pub fn dominant_choice(v: &UtilityMatrix) -> Option<Choice> {
    if v.v11() > v.v12() && v.v21() > v.v22() {
        Some(Choice::C1)
    } else if v.v12() > v.v11() && v.v22() > v.v21() {
        Some(Choice::C2)
    } else {
        None
    }
}
