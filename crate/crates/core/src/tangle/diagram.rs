//! (1,1)-tangle diagrams in Morse position.
//!
//! A diagram is a word of events read from top to bottom. Each event acts
//! on the strand positions `at` (and `at + 1`) of the current level:
//!
//! | op       | effect                                   | weight        |
//! |----------|------------------------------------------|---------------|
//! | `xp`     | positive crossing of strands `at, at+1`  | `R`           |
//! | `xn`     | negative crossing                        | `R⁻¹`         |
//! | `cup_lr` | opens a pair at `at`, oriented up, down   | `μ`           |
//! | `cup_rl` | opens a pair at `at`, oriented down, up   | identity      |
//! | `cap_lr` | closes the pair at `at`, oriented down, up | `μ⁻¹`        |
//! | `cap_rl` | closes the pair at `at`, oriented up, down | identity      |
//!
//! The knot enters at the top as a single downward strand and leaves at the
//! bottom the same way. Both strands at a crossing must point down.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Xp,
    Xn,
    CupLr,
    CupRl,
    CapLr,
    CapRl,
}

impl Op {
    pub fn is_crossing(self) -> bool {
        matches!(self, Op::Xp | Op::Xn)
    }

    pub fn is_cup(self) -> bool {
        matches!(self, Op::CupLr | Op::CupRl)
    }

    pub fn is_cap(self) -> bool {
        matches!(self, Op::CapLr | Op::CapRl)
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Xp => "xp",
            Op::Xn => "xn",
            Op::CupLr => "cup_lr",
            Op::CupRl => "cup_rl",
            Op::CapLr => "cap_lr",
            Op::CapRl => "cap_rl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub op: Op,
    pub at: usize,
}

impl Event {
    pub fn new(op: Op, at: usize) -> Self {
        Event { op, at }
    }
}

/// Orientation of a strand at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleDiagram {
    pub name: String,
    pub events: Vec<Event>,
}

impl TangleDiagram {
    /// Builds and validates a diagram.
    pub fn new(name: impl Into<String>, events: Vec<Event>) -> Result<Self> {
        let d = TangleDiagram {
            name: name.into(),
            events,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: TangleDiagram = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }

    /// Checks the width and orientation rules and returns the width profile.
    pub fn validate(&self) -> Result<Vec<usize>> {
        use Direction::*;
        let mut dirs = vec![Down];
        let mut widths = vec![1];
        for (t, ev) in self.events.iter().enumerate() {
            let w = dirs.len();
            let i = ev.at;
            let fail = |why: String| Error::diagram(format!("event {t} ({} at {i}): {why}", ev.op.name()));
            match ev.op {
                Op::Xp | Op::Xn => {
                    if i + 1 >= w {
                        return Err(fail(format!("needs two strands, width is {w}")));
                    }
                    if dirs[i] != Down || dirs[i + 1] != Down {
                        return Err(fail("both strands must point down".into()));
                    }
                }
                Op::CupLr | Op::CupRl => {
                    if i > w {
                        return Err(fail(format!("position past width {w}")));
                    }
                    let pair = if ev.op == Op::CupLr {
                        [Up, Down]
                    } else {
                        [Down, Up]
                    };
                    dirs.splice(i..i, pair);
                }
                Op::CapLr | Op::CapRl => {
                    if i + 1 >= w {
                        return Err(fail(format!("needs two strands, width is {w}")));
                    }
                    let want = if ev.op == Op::CapLr {
                        [Down, Up]
                    } else {
                        [Up, Down]
                    };
                    if dirs[i..i + 2] != want {
                        return Err(fail("strand orientations do not match the cap".into()));
                    }
                    dirs.drain(i..i + 2);
                }
            }
            widths.push(dirs.len());
        }
        if dirs != [Down] {
            return Err(Error::diagram(format!(
                "diagram must end in a single downward strand, ends with width {}",
                dirs.len()
            )));
        }
        Ok(widths)
    }

    /// Width at each level; level `t` sits just above event `t`.
    pub fn width_profile(&self) -> Vec<usize> {
        self.validate().expect("validated on construction")
    }

    pub fn max_width(&self) -> usize {
        self.width_profile().into_iter().max().unwrap_or(1)
    }

    pub fn crossing_count(&self) -> usize {
        self.events.iter().filter(|e| e.op.is_crossing()).count()
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        self.events
            .iter()
            .map(|e| match e.op {
                Op::Xp => 1,
                Op::Xn => -1,
                _ => 0,
            })
            .sum()
    }

    /// The figure-eight knot as a width-5 tangle with crossings `+ - + -`.
    pub fn figure_eight() -> Self {
        use Op::*;
        let events = [
            (CupLr, 0),
            (CupRl, 3),
            (Xp, 1),
            (Xn, 2),
            (Xp, 1),
            (Xn, 2),
            (CapRl, 0),
            (CapLr, 1),
        ];
        Self::from_pairs("figure-eight", &events)
    }

    /// The trefoil as the closure of three positive half twists.
    pub fn trefoil() -> Self {
        use Op::*;
        let events = [(CupRl, 1), (Xp, 0), (Xp, 0), (Xp, 0), (CapLr, 1)];
        Self::from_pairs("trefoil", &events)
    }

    /// A crossing-free zigzag.
    pub fn unknot() -> Self {
        Self::from_pairs("unknot", &[(Op::CupLr, 1), (Op::CapLr, 0)])
    }

    /// The unknot with one kink of the given crossing.
    pub fn kink(crossing: Op) -> Self {
        assert!(crossing.is_crossing());
        Self::from_pairs("kink", &[(Op::CupRl, 1), (crossing, 0), (Op::CapLr, 1)])
    }

    pub const BUILTIN_NAMES: [&'static str; 4] = ["figure-eight", "trefoil", "unknot", "kink"];

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "figure-eight" | "4_1" => Ok(Self::figure_eight()),
            "trefoil" | "3_1" => Ok(Self::trefoil()),
            "unknot" => Ok(Self::unknot()),
            "kink" => Ok(Self::kink(Op::Xp)),
            _ => Err(Error::input(format!(
                "unknown builtin diagram {name:?}; known: {}",
                Self::BUILTIN_NAMES.join(", ")
            ))),
        }
    }

    fn from_pairs(name: &str, events: &[(Op, usize)]) -> Self {
        let events = events.iter().map(|&(op, at)| Event { op, at }).collect();
        TangleDiagram::new(name, events).expect("builtin diagrams are valid")
    }
}

pub fn figure_eight_diagram() -> TangleDiagram {
    TangleDiagram::figure_eight()
}

pub fn trefoil_diagram() -> TangleDiagram {
    TangleDiagram::trefoil()
}
