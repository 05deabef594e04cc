use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Task id of the unmodified captions.
pub const ORIGINAL_TASK_ID: &str = "original";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PerturbationKind {
    ObjAttrRemoval,
    ObjShift,
    ObjReplacement,
    ObjPartial,
    ActRemoval,
    ActNegation,
    ActReplacement,
    SynRemoval,
    Shuffle,
    Reverse,
}

impl PerturbationKind {
    /// All tasks in their fixed reporting order.
    pub const ALL: [PerturbationKind; 10] = [
        PerturbationKind::ObjAttrRemoval,
        PerturbationKind::ObjShift,
        PerturbationKind::ObjReplacement,
        PerturbationKind::ObjPartial,
        PerturbationKind::ActRemoval,
        PerturbationKind::ActNegation,
        PerturbationKind::ActReplacement,
        PerturbationKind::SynRemoval,
        PerturbationKind::Shuffle,
        PerturbationKind::Reverse,
    ];

    pub fn task_id(self) -> &'static str {
        match self {
            PerturbationKind::ObjAttrRemoval => "obj_attr_removal",
            PerturbationKind::ObjShift => "obj_shift",
            PerturbationKind::ObjReplacement => "obj_replacement",
            PerturbationKind::ObjPartial => "obj_partial",
            PerturbationKind::ActRemoval => "act_removal",
            PerturbationKind::ActNegation => "act_negation",
            PerturbationKind::ActReplacement => "act_replacement",
            PerturbationKind::SynRemoval => "syn_removal",
            PerturbationKind::Shuffle => "shuffle",
            PerturbationKind::Reverse => "reverse",
        }
    }

    pub fn uses_rng(self) -> bool {
        matches!(
            self,
            PerturbationKind::ObjReplacement
                | PerturbationKind::ObjPartial
                | PerturbationKind::ActReplacement
                | PerturbationKind::Shuffle
        )
    }

    pub fn needs_vocab(self) -> bool {
        matches!(
            self,
            PerturbationKind::ObjReplacement | PerturbationKind::ActReplacement
        )
    }

    /// Parses a comma-separated task list; `all` selects every task.
    pub fn parse_list(list: &str) -> Result<Vec<PerturbationKind>> {
        let mut out = Vec::new();
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Self::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.task_id())
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.task_id() == s)
            .ok_or_else(|| Error::UnknownTask(s.to_string()))
    }
}

impl TryFrom<String> for PerturbationKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PerturbationKind> for String {
    fn from(k: PerturbationKind) -> String {
        k.task_id().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ten_unique_task_ids() {
        let ids: HashSet<&str> = PerturbationKind::ALL.iter().map(|k| k.task_id()).collect();
        assert_eq!(ids.len(), 10);
        assert!(!ids.contains(ORIGINAL_TASK_ID));
        for k in PerturbationKind::ALL {
            assert_eq!(k.task_id().parse::<PerturbationKind>().unwrap(), k);
        }
    }

    #[test]
    fn task_lists() {
        assert_eq!(PerturbationKind::parse_list("all").unwrap().len(), 10);
        assert_eq!(
            PerturbationKind::parse_list("reverse, shuffle,reverse").unwrap(),
            vec![PerturbationKind::Shuffle, PerturbationKind::Reverse]
        );
        assert!(matches!(
            PerturbationKind::parse_list("reverse,bogus"),
            Err(Error::UnknownTask(_))
        ));
    }
}
