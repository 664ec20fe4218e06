//! Finite-scale forcing: generic extensions `M[G]` of finite transitive models over finite
//! forcing posets, together with exhaustive checks of the equations and lemmas that make the
//! construction work (renaming and satisfaction, well-founded recursion for `val`, names for
//! Union/Separation/Powerset, and the fundamental lemmas of a semantic forcing relation).
//!
//! Module map:
//!
//! - [`hfset`]: canonical hereditarily finite sets, pairs, V-stages
//! - [`formula`]: de Bruijn formulas, arity, renaming, text syntax
//! - [`semantics`]: satisfaction in a finite model and relativized axiom checks
//! - [`wfrec`]: well-founded recursion over finite relations
//! - [`forcing`]: forcing notions, filters, density, genericity
//! - [`names`]: `val`, check names, `Ġ`, and the Union/Separation/Powerset names
//! - [`extension`]: `M[G]`, the forcing relation, and checks in the extension
//! - [`suite`]: batch verification runs and their reports

pub mod error;
pub mod extension;
pub mod forcing;
pub mod formula;
pub mod hfset;
pub mod names;
pub mod presets;
pub mod report;
pub mod semantics;
pub mod suite;
pub mod wfrec;

pub use error::{Error, Result};
pub use extension::{Extension, ForcingFrame};
pub use forcing::{ForcingNotion, GFilter};
pub use formula::{Formula, Renaming};
pub use hfset::{HRelation, HSet};
pub use names::NameContext;
pub use report::{CheckReport, Status};
pub use semantics::Model;

/// Size limits for the exhaustive computations.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    /// Largest V-stage index that may be built.
    pub max_stage: usize,
    /// Largest number of elements in a generated stage.
    pub element_cap: usize,
    /// Largest poset whose subsets are scanned for genericity.
    pub generic_scan_cap: usize,
    /// Largest number of candidate `χ` considered by the powerset name.
    pub pow_candidates: u64,
    /// Largest ground model accepted by the extension builder.
    pub model_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_stage: 5,
            element_cap: 70_000,
            generic_scan_cap: 14,
            pow_candidates: 1 << 20,
            model_cap: 70_000,
        }
    }
}

impl Caps {
    /// Parses overrides of the form `stage=5,elements=70000,generic=14,pow=1048576,model=70000`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Caps> {
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad cap override `{part}`")))?;
            let n: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad cap value `{value}`")))?;
            match key.trim() {
                "stage" => self.max_stage = n as usize,
                "elements" => self.element_cap = n as usize,
                "generic" => self.generic_scan_cap = n as usize,
                "pow" => self.pow_candidates = n,
                "model" => self.model_cap = n as usize,
                other => return Err(Error::Config(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_overrides() {
        let caps = Caps::default().with_overrides("stage=3, pow=16").unwrap();
        assert_eq!(caps.max_stage, 3);
        assert_eq!(caps.pow_candidates, 16);
        assert_eq!(caps.model_cap, 70_000);
        assert!(Caps::default().with_overrides("bogus=1").is_err());
        assert!(Caps::default().with_overrides("stage").is_err());
    }
}
