//! Small-step probabilistic reduction.
//!
//! `Rewriter::step` picks one redex with a fixed strategy: sums, scalings and
//! measurements reduce their children before themselves, every other node is
//! tried at the root before its children. `Rewriter::redexes` lists every
//! redex instead, for randomized strategies.

mod engine;
mod measure;
mod rules;

use crate::ast::{Dist, DistError, Term};
use std::fmt;
use thiserror::Error;

pub use engine::{normalize, step, trace, Chooser, Redex, Rewriter, StepResult, TraceStep};
pub use measure::{ket_sum, measure_project};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    BetaB,
    BetaN,
    LinR,
    LinRScal,
    LinRZero,
    LinL,
    LinLScal,
    LinLZero,
    IfOne,
    IfZero,
    Head,
    Tail,
    Neut,
    Unit,
    ZeroScal,
    Zero,
    Prod,
    DistScal,
    Fact,
    Fact1,
    Fact2,
    DistSumR,
    DistSumL,
    DistScalR,
    DistScalL,
    DistZeroR,
    DistZeroL,
    DistCastSum,
    DistCastScal,
    DistCastZeroR,
    DistCastZeroL,
    NeutCastZeroR,
    NeutCastZeroL,
    NeutCastR,
    NeutCastL,
    Proj,
    ProjZero,
}

impl RuleName {
    pub const ALL: [RuleName; 37] = [
        RuleName::BetaB,
        RuleName::BetaN,
        RuleName::LinR,
        RuleName::LinRScal,
        RuleName::LinRZero,
        RuleName::LinL,
        RuleName::LinLScal,
        RuleName::LinLZero,
        RuleName::IfOne,
        RuleName::IfZero,
        RuleName::Head,
        RuleName::Tail,
        RuleName::Neut,
        RuleName::Unit,
        RuleName::ZeroScal,
        RuleName::Zero,
        RuleName::Prod,
        RuleName::DistScal,
        RuleName::Fact,
        RuleName::Fact1,
        RuleName::Fact2,
        RuleName::DistSumR,
        RuleName::DistSumL,
        RuleName::DistScalR,
        RuleName::DistScalL,
        RuleName::DistZeroR,
        RuleName::DistZeroL,
        RuleName::DistCastSum,
        RuleName::DistCastScal,
        RuleName::DistCastZeroR,
        RuleName::DistCastZeroL,
        RuleName::NeutCastZeroR,
        RuleName::NeutCastZeroL,
        RuleName::NeutCastR,
        RuleName::NeutCastL,
        RuleName::Proj,
        RuleName::ProjZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleName::BetaB => "β_b",
            RuleName::BetaN => "β_n",
            RuleName::LinR => "lin_r",
            RuleName::LinRScal => "lin_r^α",
            RuleName::LinRZero => "lin_r^0",
            RuleName::LinL => "lin_l",
            RuleName::LinLScal => "lin_l^α",
            RuleName::LinLZero => "lin_l^0",
            RuleName::IfOne => "if₁",
            RuleName::IfZero => "if₀",
            RuleName::Head => "head",
            RuleName::Tail => "tail",
            RuleName::Neut => "neut",
            RuleName::Unit => "unit",
            RuleName::ZeroScal => "zero_α",
            RuleName::Zero => "zero",
            RuleName::Prod => "prod",
            RuleName::DistScal => "dist^α",
            RuleName::Fact => "fact",
            RuleName::Fact1 => "fact¹",
            RuleName::Fact2 => "fact²",
            RuleName::DistSumR => "dist_r^+",
            RuleName::DistSumL => "dist_l^+",
            RuleName::DistScalR => "dist_r^α",
            RuleName::DistScalL => "dist_l^α",
            RuleName::DistZeroR => "dist_r^0",
            RuleName::DistZeroL => "dist_l^0",
            RuleName::DistCastSum => "dist_⇑^+",
            RuleName::DistCastScal => "dist_⇑^α",
            RuleName::DistCastZeroR => "dist_⇑r^0",
            RuleName::DistCastZeroL => "dist_⇑l^0",
            RuleName::NeutCastZeroR => "neut_⇑r^0",
            RuleName::NeutCastZeroL => "neut_⇑l^0",
            RuleName::NeutCastR => "neut_r^⇑",
            RuleName::NeutCastL => "neut_l^⇑",
            RuleName::Proj => "proj",
            RuleName::ProjZero => "proj_0",
        }
    }

    /// Rules that change the probabilistic structure.
    pub fn is_measurement(self) -> bool {
        matches!(self, RuleName::Proj | RuleName::ProjZero)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("stuck on ill-typed subterm `{term}`: {detail}")]
    StuckIllTyped { term: String, detail: String },
    #[error("`{term}` is not a sum of scaled ket products")]
    NotAKetSum { term: String },
    #[error("`{term}` has norm zero")]
    ZeroNorm { term: String },
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { partial: Dist<Term>, steps: usize },
    #[error(transparent)]
    Dist(#[from] DistError),
}
