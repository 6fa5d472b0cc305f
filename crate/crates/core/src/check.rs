//! Counters for families of exact identities, keeping a few witnesses per failure.

use serde::{Deserialize, Serialize};

use crate::arith::CycNum;

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Check {
        Check { name: name.into(), checked: 0, failed: 0, witnesses: Vec::new() }
    }

    /// Records one instance; the witness is only built on failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.record(false, || witness.into());
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    pub fn merge(&mut self, other: Check) {
        self.checked += other.checked;
        self.failed += other.failed;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        write!(f, "{status:4} {} ({}/{} failed)", self.name, self.failed, self.checked)?;
        if let Some(w) = self.witnesses.first() {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// `(N, [c_0, c_1, ...])`: conductor and power-basis coordinates.
pub fn cyc_witness(x: &CycNum) -> String {
    let coords: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
    format!("({}, [{}])", x.conductor(), coords.join(", "))
}
