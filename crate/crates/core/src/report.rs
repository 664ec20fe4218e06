use serde::{Deserialize, Serialize};

use crate::HSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Holds,
    PreconditionUnmet,
    Violated,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Holds => "HOLDS",
            Status::PreconditionUnmet => "PRECONDITION_UNMET",
            Status::Violated => "VIOLATED",
        })
    }
}

/// Outcome of one verification, aggregated over its instances.
///
/// The status is the worst outcome seen: any violation makes the report `VIOLATED`; otherwise any
/// instance whose precondition failed makes it `PRECONDITION_UNMET`. The witness is the first
/// instance with the reported status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub axiom: String,
    pub status: Status,
    pub witness: Option<HSet>,
    pub instances_checked: u64,
    #[serde(skip)]
    pub violations: u64,
    #[serde(skip)]
    pub unmet: u64,
}

impl CheckReport {
    pub fn new(axiom: impl Into<String>) -> Self {
        CheckReport {
            axiom: axiom.into(),
            status: Status::Holds,
            witness: None,
            instances_checked: 0,
            violations: 0,
            unmet: 0,
        }
    }

    pub fn holds(&mut self) {
        self.instances_checked += 1;
    }

    pub fn unmet(&mut self, witness: HSet) {
        self.instances_checked += 1;
        self.unmet += 1;
        if self.status == Status::Holds {
            self.status = Status::PreconditionUnmet;
            self.witness = Some(witness);
        }
    }

    pub fn violated(&mut self, witness: HSet) {
        self.instances_checked += 1;
        self.violations += 1;
        if self.status != Status::Violated {
            self.status = Status::Violated;
            self.witness = Some(witness);
        }
    }

    /// Records a boolean instance; `witness` is only built on failure.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> HSet) {
        if ok {
            self.holds();
        } else {
            self.violated(witness());
        }
    }

    pub fn merge(&mut self, other: &CheckReport) {
        self.instances_checked += other.instances_checked;
        self.violations += other.violations;
        self.unmet += other.unmet;
        if other.status > self.status {
            self.status = other.status;
            self.witness = other.witness.clone();
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }
}
