//! Anatomy of a torsion burst.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::groups::AbelianGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurstRecord {
    pub lt: AbelianGroup,
    pub m0: usize,
    /// `G_{-1}, G_{-2}, ...` scanning down from `m0`, trivial excluded.
    pub subcritical: Vec<AbelianGroup>,
    /// `G_{+1}, G_{+2}, ...` scanning up from `m0`, trivial excluded.
    pub supercritical: Vec<AbelianGroup>,
    /// Length of the nontrivial block containing `m0`.
    pub duration: usize,
    pub phases: usize,
    pub unimodal: bool,
    /// Nontrivial blocks of the supplied sequence other than the burst.
    pub other_episodes: usize,
}

/// Scans outward from `m0` through `seq`, where `seq[i]` is the torsion at
/// step `base + i`.
///
/// A group is recorded whenever it differs from the last recorded one, so a
/// class can appear more than once on the same side. The scan on each side
/// must reach a trivial group inside `seq`.
pub fn burst_analysis(seq: &[AbelianGroup], base: usize, lt: &AbelianGroup, m0: usize) -> Result<BurstRecord> {
    let idx = m0
        .checked_sub(base)
        .filter(|&i| i < seq.len())
        .ok_or_else(|| invalid(format!("m0 = {m0} outside sequence starting at {base}")))?;
    if lt.is_trivial() {
        return Err(invalid("burst analysis needs a nontrivial LT"));
    }
    if &seq[idx] != lt {
        return Err(invalid(format!("torsion at m0 is {}, not {lt}", seq[idx])));
    }
    let record = |it: &mut dyn Iterator<Item = &AbelianGroup>| -> Result<Vec<AbelianGroup>> {
        let mut out: Vec<AbelianGroup> = Vec::new();
        for g in it {
            if g.is_trivial() {
                return Ok(out);
            }
            if g != out.last().unwrap_or(lt) {
                out.push(g.clone());
            }
        }
        Err(invalid("sequence ends before torsion vanishes"))
    };
    let subcritical = record(&mut seq[..idx].iter().rev())?;
    let supercritical = record(&mut seq[idx + 1..].iter())?;
    let mut start = idx;
    while start > 0 && !seq[start - 1].is_trivial() {
        start -= 1;
    }
    let mut end = idx;
    while end + 1 < seq.len() && !seq[end + 1].is_trivial() {
        end += 1;
    }
    let orders: Vec<_> = seq[start..=end].iter().map(AbelianGroup::order).collect();
    let peak = idx - start;
    let unimodal = orders[..=peak].windows(2).all(|w| w[0] <= w[1])
        && orders[peak..].windows(2).all(|w| w[0] >= w[1]);
    let mut blocks = 0;
    let mut inside = false;
    for g in seq {
        if !g.is_trivial() && !inside {
            blocks += 1;
        }
        inside = !g.is_trivial();
    }
    Ok(BurstRecord {
        lt: lt.clone(),
        m0,
        phases: subcritical.len() + supercritical.len() + 1,
        subcritical,
        supercritical,
        duration: end - start + 1,
        unimodal,
        other_episodes: blocks - 1,
    })
}
