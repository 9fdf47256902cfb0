//! Shadows, cores, homological giants and the hitting-time experiment.
//!
//! `f` is in the shadow of `Y` over `F_q` iff `∂f` lies in the column span of
//! `∂_d(Y)`, i.e. iff `y · ∂f = 0` for every `y` in the left null space. The
//! null space is computed on the core and extended across the collapsed pairs
//! in reverse order, so each candidate costs `O((d + 1) · dim)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::groups::AbelianGroup;
use crate::homology::{collapse_reduce, is_prime, rref_dense, smith_of_columns, top_homology};
use crate::lmprocess::{LTResult, ProcessTrace};
use crate::simplicial::{binomial, facets, unrank_into, ComplexState};

/// Default radius of the scan around `m0`.
pub const DEFAULT_SCAN_RADIUS: usize = 25;

/// A pure subcomplex in which every `(d-1)`-face lies in at least two `d`-faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreComplex {
    pub n: usize,
    pub d: usize,
    /// Top face ranks, sorted.
    pub faces: Vec<usize>,
    /// `(d-1)`-faces of the top faces, sorted.
    pub lower_faces: Vec<usize>,
    /// Vertices in some top face.
    pub support: Vec<usize>,
}

impl CoreComplex {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn spans(&self) -> bool {
        self.support.len() == self.n
    }

    /// `H_{d-1}` of the core as a subcomplex.
    pub fn lower_homology(&self) -> crate::homology::HomologySummary {
        let state = ComplexState::new(self.n, self.d, self.faces.clone()).expect("core faces are valid");
        let h = top_homology(&state);
        // cycles among the core's own (d-1)-faces
        let mut buf = Vec::new();
        let columns: Vec<Vec<(usize, i64)>> = self
            .lower_faces
            .iter()
            .map(|&f| {
                unrank_into(f, self.d - 1, &mut buf);
                if self.d == 1 {
                    Vec::new()
                } else {
                    facets(&buf).collect()
                }
            })
            .collect();
        let cycles = self.lower_faces.len() - smith_of_columns(binomial(self.n, self.d - 1), columns).rank();
        crate::homology::HomologySummary {
            betti: cycles - h.rank,
            torsion: h.lower.torsion,
        }
    }
}

/// Maximal core, by exhaustive free-face deletion.
pub fn core(state: &ComplexState) -> CoreComplex {
    let reduced = collapse_reduce(state);
    let faces = reduced.top_faces().to_vec();
    let mut lower: Vec<usize> = reduced.columns().iter().flatten().map(|e| e.0).collect();
    lower.sort_unstable();
    lower.dedup();
    let mut seen = vec![false; state.n()];
    let mut buf = Vec::new();
    for &f in &faces {
        unrank_into(f, state.d(), &mut buf);
        for &v in &buf {
            seen[v] = true;
        }
    }
    CoreComplex {
        n: state.n(),
        d: state.d(),
        faces,
        lower_faces: lower,
        support: (0..state.n()).filter(|&v| seen[v]).collect(),
    }
}

/// Left null space of `∂_d(Y)` over `F_q`, stored row-major by `(d-1)`-face.
struct Annihilator {
    q: u64,
    dim: usize,
    /// `values[r * dim + k]` = `y_k[r]`.
    values: Vec<u64>,
}

impl Annihilator {
    fn new(state: &ComplexState, q: u64) -> Self {
        let (n, d) = (state.n(), state.d());
        let lower = binomial(n, d);
        let reduced = collapse_reduce(state);
        let rows: Vec<usize> = (0..lower).filter(|&r| !reduced.is_lower_removed(r)).collect();
        let mut pos = vec![usize::MAX; lower];
        for (i, &r) in rows.iter().enumerate() {
            pos[r] = i;
        }
        // transpose of the core boundary, restricted to surviving rows
        let mut t: Vec<Vec<u64>> = reduced
            .columns()
            .iter()
            .map(|col| {
                let mut row = vec![0u64; rows.len()];
                for &(r, v) in col {
                    row[pos[r]] = if v >= 0 { v as u64 % q } else { q - (v.unsigned_abs() % q) };
                }
                row
            })
            .collect();
        let pivots = rref_dense(&mut t, q);
        let mut is_pivot = vec![false; rows.len()];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..rows.len()).filter(|&c| !is_pivot[c]).collect();
        let dim = free.len();
        let mut values = vec![0u64; lower * dim];
        for (k, &c) in free.iter().enumerate() {
            values[rows[c] * dim + k] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let a = t[i][c];
                if a != 0 {
                    values[rows[pc] * dim + k] = q - a;
                }
            }
        }
        // y · ∂g = 0 for each collapsed g fixes y at its free face
        let mut buf = Vec::new();
        for &(f, g) in reduced.pairs().iter().rev() {
            unrank_into(g, d, &mut buf);
            let mut acc = vec![0u64; dim];
            let mut sign_f = 1i64;
            for (h, s) in facets(&buf) {
                if h == f {
                    sign_f = s;
                    continue;
                }
                for k in 0..dim {
                    let y = values[h * dim + k];
                    acc[k] = if s > 0 { (acc[k] + y) % q } else { (acc[k] + q - y) % q };
                }
            }
            // s_f y_f = -acc
            for k in 0..dim {
                values[f * dim + k] = if sign_f > 0 { (q - acc[k]) % q } else { acc[k] };
            }
        }
        Annihilator { q, dim, values }
    }

    fn kills(&self, column: impl Iterator<Item = (usize, i64)>, acc: &mut [u64]) -> bool {
        let q = self.q;
        acc.iter_mut().for_each(|x| *x = 0);
        for (h, s) in column {
            let row = &self.values[h * self.dim..(h + 1) * self.dim];
            for (a, &y) in acc.iter_mut().zip(row) {
                *a = if s > 0 { (*a + y) % q } else { (*a + q - y) % q };
            }
        }
        acc.iter().all(|&x| x == 0)
    }
}

fn check_q(q: u64) -> Result<()> {
    if !is_prime(q) || q >= 1 << 32 {
        return Err(invalid(format!("{q} is not a prime below 2^32")));
    }
    Ok(())
}

/// Absent `d`-faces whose addition raises `β_d(·; F_q)`.
pub fn shadow(state: &ComplexState, q: u64) -> Result<Vec<usize>> {
    check_q(q)?;
    let ann = Annihilator::new(state, q);
    let mut acc = vec![0u64; ann.dim];
    let mut buf = Vec::new();
    let mut out = Vec::new();
    let present = state.faces();
    let mut next = 0;
    for f in 0..binomial(state.n(), state.d() + 1) {
        if next < present.len() && present[next] == f {
            next += 1;
            continue;
        }
        unrank_into(f, state.d(), &mut buf);
        if ann.kills(facets(&buf), &mut acc) {
            out.push(f);
        }
    }
    Ok(out)
}

pub fn shadow_size(state: &ComplexState, q: u64) -> Result<usize> {
    shadow(state, q).map(|s| s.len())
}

/// Whether the core spans all vertices, has finite `H_{d-1}`, and torsion `≅ lt`.
pub fn giant_check(state: &ComplexState, lt: &AbelianGroup) -> Result<bool> {
    if lt.is_trivial() {
        return Err(invalid("giant check needs a nontrivial group"));
    }
    let c = core(state);
    if c.is_empty() || !c.spans() {
        return Ok(false);
    }
    let h = c.lower_homology();
    Ok(h.betti == 0 && &h.torsion == lt)
}

/// Default giant-shadow threshold `n^{(d+2)/2}`.
pub fn default_threshold(n: usize, d: usize) -> f64 {
    (n as f64).powf((d as f64 + 2.0) / 2.0)
}

/// Event times around one burst.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingReport {
    pub m_burst: Option<usize>,
    pub m_giant: Option<usize>,
    pub m_shadow: Option<usize>,
    pub coincide: bool,
    pub threshold: f64,
    /// Scanned range, inclusive.
    pub scan: (usize, usize),
    /// Shadow sizes at `m_shadow - 1` and `m_shadow`.
    pub shadow_before: Option<usize>,
    pub shadow_at: Option<usize>,
}

/// Scans `m0 - radius ..= m0 + radius` for the first giant core and the first
/// shadow larger than `threshold`.
pub fn hitting_time_experiment(
    trace: &ProcessTrace,
    lt: &LTResult,
    threshold: f64,
    radius: usize,
    q: u64,
) -> Result<HittingReport> {
    check_q(q)?;
    let m0 = match (lt.trivial, lt.m0) {
        (false, Some(m0)) => m0,
        _ => return Err(invalid("hitting-time experiment needs a nontrivial LT")),
    };
    let lo = m0.saturating_sub(radius).max(1);
    let hi = (m0 + radius).min(trace.len());
    let mut m_giant = None;
    let mut m_shadow = None;
    let mut prev_size = None;
    let mut sizes = (None, None);
    for m in lo..=hi {
        let state = trace.state_at(m);
        if m_giant.is_none() && giant_check(&state, &lt.group)? {
            m_giant = Some(m);
        }
        if m_shadow.is_none() {
            let size = shadow_size(&state, q)?;
            if size as f64 > threshold {
                m_shadow = Some(m);
                sizes = (prev_size, Some(size));
            }
            prev_size = Some(size);
        }
        if m_giant.is_some() && m_shadow.is_some() {
            break;
        }
    }
    Ok(HittingReport {
        m_burst: Some(m0),
        coincide: m_giant == Some(m0) && m_shadow == Some(m0),
        m_giant,
        m_shadow,
        threshold,
        scan: (lo, hi),
        shadow_before: sizes.0,
        shadow_at: sizes.1,
    })
}
