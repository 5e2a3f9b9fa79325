use serde::{Deserialize, Serialize};

use super::registry::{BlockName, Registry};
use super::sum::telescoping_sum;
use super::surgery::{botany_family_member, luttinger_surgery, ExponentConvention, ManifoldState, SurgerySpec};
use super::triple::TelescopingTriple;
use super::CalculusError;

/// One construction step. A provenance list is a program for a small stack
/// machine: `Block` pushes a triple, `Sum` pops two triples and pushes their
/// sum, `Surgery` and `Botany` transform the top of the stack.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Block {
        name: BlockName,
    },
    Sum,
    Surgery(SurgerySpec),
    Botany {
        n: u32,
        p: u32,
        convention: ExponentConvention,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Replayed {
    Triple(TelescopingTriple),
    State(ManifoldState),
}

impl Replayed {
    pub fn e_sigma(&self) -> (i64, i64) {
        match self {
            Replayed::Triple(t) => (t.e, t.sigma),
            Replayed::State(s) => (s.e, s.sigma),
        }
    }

    pub fn into_state(self) -> ManifoldState {
        match self {
            Replayed::Triple(t) => ManifoldState::from(t),
            Replayed::State(s) => s,
        }
    }
}

/// Rebuilds an object from its provenance.
pub fn replay(registry: &Registry, steps: &[Step]) -> Result<Replayed, CalculusError> {
    let mut stack: Vec<Replayed> = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let fail = |msg: &str| CalculusError::Replay(format!("step {i} ({step:?}): {msg}"));
        match step {
            Step::Block { name } => stack.push(Replayed::Triple(registry.load_block(*name)?)),
            Step::Sum => {
                let (Some(Replayed::Triple(b)), Some(Replayed::Triple(a))) = (stack.pop(), stack.pop())
                else {
                    return Err(fail("sum needs two triples on the stack"));
                };
                stack.push(Replayed::Triple(telescoping_sum(&a, &b)?));
            }
            Step::Surgery(spec) => {
                let top = stack.pop().ok_or_else(|| fail("empty stack"))?;
                stack.push(Replayed::State(luttinger_surgery(top.into_state(), spec)?));
            }
            Step::Botany { n, p, convention } => {
                let Some(Replayed::State(seed)) = stack.pop() else {
                    return Err(fail("botany needs a surgered seed on the stack"));
                };
                stack.push(Replayed::State(botany_family_member(&seed, *n, *p, *convention)?));
            }
        }
    }
    match (stack.pop(), stack.is_empty()) {
        (Some(out), true) => Ok(out),
        (None, _) => Err(CalculusError::Replay("empty provenance".into())),
        (Some(_), false) => Err(CalculusError::Replay(format!(
            "{} objects left on the stack",
            stack.len() + 1
        ))),
    }
}
