use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::audits::{audit_access, AuditSlacks};
use crate::analysis::decompose::{monotone_partition, side_alternations};
use crate::analysis::depth::halving_stats;
use crate::analysis::potential::AccessOutcome;
use crate::bst::Key;
use crate::error::{Error, Result};
use crate::transformers::Transformer;

/// One CSV row per access. Slack columns are empty when the audit was not
/// selected or had nothing to audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccessRecord {
    pub access_index: usize,
    pub key: Key,
    pub cost: usize,
    pub z: usize,
    pub leaves: usize,
    pub l_left: usize,
    pub l_right: usize,
    pub phi_before: f64,
    pub phi_after: f64,
    pub slack_lemma1: Option<f64>,
    pub slack_lemma2: Option<f64>,
    pub slack_zigzag: Option<f64>,
    pub slack_theorem: Option<f64>,
    pub lost_min_ratio: Option<f64>,
    pub gained_max: Option<usize>,
}

pub const CSV_HEADER: [&str; 15] = [
    "access_index",
    "key",
    "cost",
    "z",
    "leaves",
    "l_left",
    "l_right",
    "phi_before",
    "phi_after",
    "slack_lemma1",
    "slack_lemma2",
    "slack_zigzag",
    "slack_theorem",
    "lost_min_ratio",
    "gained_max",
];

/// Which audits to run per access.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSelection {
    pub lemma1: bool,
    pub lemma2: bool,
    pub zigzag: bool,
    pub theorem: bool,
    pub depth: bool,
}

impl AuditSelection {
    pub const ALL: AuditSelection = AuditSelection {
        lemma1: true,
        lemma2: true,
        zigzag: true,
        theorem: true,
        depth: true,
    };
    pub const NONE: AuditSelection = AuditSelection {
        lemma1: false,
        lemma2: false,
        zigzag: false,
        theorem: false,
        depth: false,
    };

    fn any_slack(&self) -> bool {
        self.lemma1 || self.lemma2 || self.zigzag || self.theorem
    }
}

impl FromStr for AuditSelection {
    type Err = Error;

    /// `all`, `none`, or a comma list of `lemma1,lemma2,zigzag,theorem,depth`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => return Ok(Self::ALL),
            "none" => return Ok(Self::NONE),
            _ => {}
        }
        let mut sel = Self::NONE;
        for part in s.split(',').map(str::trim) {
            match part {
                "lemma1" => sel.lemma1 = true,
                "lemma2" => sel.lemma2 = true,
                "zigzag" => sel.zigzag = true,
                "theorem" => sel.theorem = true,
                "depth" => sel.depth = true,
                other => return Err(Error::InvalidWorkload(format!("unknown audit `{other}`"))),
            }
        }
        Ok(sel)
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl AccessRecord {
    /// Builds the row for one access and returns the raw slacks alongside.
    pub fn build(
        index: usize,
        t: Transformer,
        out: &AccessOutcome,
        sel: AuditSelection,
    ) -> Result<(AccessRecord, Option<AuditSlacks>)> {
        let after = &*out.after;
        let mono = monotone_partition(after);
        let slacks = if sel.any_slack() {
            Some(audit_access(t, &out.weights, &out.path, after)?)
        } else {
            None
        };
        let pick = |on: bool, f: fn(&AuditSlacks) -> f64| {
            slacks.as_ref().filter(|_| on).and_then(|s| finite(f(s)))
        };
        let (ratio, gained) = if sel.depth {
            let (r, g) = halving_stats(&out.path, after)?;
            (Some(r), Some(g))
        } else {
            (None, None)
        };
        let rec = AccessRecord {
            access_index: index,
            key: out.path.accessed(),
            cost: out.path.len(),
            z: side_alternations(&out.path),
            leaves: after.leaves().len(),
            l_left: mono.l_left(),
            l_right: mono.l_right(),
            phi_before: out.phi_before,
            phi_after: out.phi_after,
            slack_lemma1: pick(sel.lemma1, |s| s.lemma1),
            slack_lemma2: pick(sel.lemma2, |s| s.lemma2),
            slack_zigzag: pick(sel.zigzag, AuditSlacks::zigzag),
            slack_theorem: pick(sel.theorem, AuditSlacks::theorem),
            lost_min_ratio: ratio,
            gained_max: gained,
        };
        Ok((rec, slacks))
    }
}
