//! Exhaustive hyperplane scans: cutting, minimality, t-fold blocking,
//! saturation and tangent counts.
//!
//! Scans split the hyperplanes into fixed rank ranges processed in parallel;
//! partial results are merged with min / sum, so every result is independent of
//! the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finfield::Field;
use crate::linalg::{self, Echelon};
use crate::projgeom::{
    count_normalized, next_normalized, span_points, unrank_normalized, Hyperplane, PointSet,
    ProjSpace,
};

const CHUNK: u64 = 1024;

/// Fold over all hyperplanes of `space` in parallel.
pub fn par_hyperplane_fold<T, I, F, M>(space: &ProjSpace, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, u64, &[u32]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let n = space.num_points();
    let q = space.q();
    let dim = space.dim();
    let nchunks = n.div_ceil(CHUNK);
    (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut v = unrank_normalized(dim, q, start);
            for k in start..end {
                fold(&mut acc, k, &v);
                if k + 1 < end {
                    next_normalized(&mut v, q);
                }
            }
            acc
        })
        .reduce(&init, &merge)
}

/// Points flattened for fast scanning.
pub(crate) struct Flat<'a> {
    pub f: &'a Field,
    pub dim: usize,
    pub coords: Vec<u32>,
}

impl<'a> Flat<'a> {
    pub fn new(x: &'a PointSet) -> Self {
        let coords = x
            .points()
            .iter()
            .flat_map(|p| p.0.iter().copied())
            .collect();
        Flat {
            f: x.space().field(),
            dim: x.space().dim(),
            coords,
        }
    }
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }
    #[inline]
    pub fn point(&self, i: usize) -> &[u32] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
    /// Indices of points on the hyperplane.
    #[inline]
    pub fn meet(&self, dual: &[u32], out: &mut Vec<usize>) {
        out.clear();
        for i in 0..self.len() {
            if linalg::dot(self.f, dual, self.point(i)) == 0 {
                out.push(i);
            }
        }
    }
    /// Rank of the points on the hyperplane, stopping once `cap` is reached.
    #[inline]
    pub fn meet_rank(&self, dual: &[u32], cap: usize, e: &mut Echelon) -> usize {
        e.clear();
        for i in 0..self.len() {
            let p = self.point(i);
            if linalg::dot(self.f, dual, p) == 0 && e.insert(self.f, p) && e.rank() == cap {
                break;
            }
        }
        e.rank()
    }
}

/// Outcome of a cutting scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuttingCertificate {
    pub verdict: bool,
    pub scanned: u64,
    pub min_rank: usize,
    /// Least hyperplane whose intersection fails to span it.
    pub witness: Option<Hyperplane>,
}

/// Checks that every hyperplane meets X in a spanning set of the hyperplane.
pub fn is_cutting(x: &PointSet) -> Result<CuttingCertificate> {
    if x.is_empty() {
        return Err(Error::Precondition("cutting check of an empty set".into()));
    }
    let space = x.space();
    let r = space.r();
    let flat = Flat::new(x);
    let (min_rank, wit) = par_hyperplane_fold(
        space,
        || (usize::MAX, None::<u64>),
        |acc, k, dual| {
            let mut e = Echelon::new(flat.dim);
            let rk = flat.meet_rank(dual, r, &mut e);
            acc.0 = acc.0.min(rk);
            if rk < r && acc.1.is_none_or(|w| k < w) {
                acc.1 = Some(k);
            }
        },
        |a, b| {
            (
                a.0.min(b.0),
                match (a.1, b.1) {
                    (Some(u), Some(v)) => Some(u.min(v)),
                    (u, v) => u.or(v),
                },
            )
        },
    );
    Ok(CuttingCertificate {
        verdict: wit.is_none(),
        scanned: space.num_points(),
        min_rank,
        witness: wit.map(|k| Hyperplane(space.point_at(k).0)),
    })
}

/// Least hyperplane on which X is not spanning, with early exit.
pub fn first_cutting_violation(x: &PointSet) -> Option<Hyperplane> {
    let space = x.space();
    let r = space.r();
    let flat = Flat::new(x);
    let n = space.num_points();
    let (dim, q) = (space.dim(), space.q());
    (0..n.div_ceil(CHUNK)).into_par_iter().find_map_first(|c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(n);
        let mut v = unrank_normalized(dim, q, start);
        let mut e = Echelon::new(dim);
        for k in start..end {
            if flat.meet_rank(&v, r, &mut e) < r {
                return Some(Hyperplane(v));
            }
            if k + 1 < end {
                next_normalized(&mut v, q);
            }
        }
        None
    })
}

/// Outcome of a minimality scan: per point, the least hyperplane showing it
/// cannot be removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub verdict: bool,
    pub witnesses: Vec<Option<Hyperplane>>,
}

impl MinimalityCertificate {
    /// Indices of points without a witness, i.e. removable points.
    pub fn removable(&self) -> Vec<usize> {
        self.witnesses
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Minimality of a cutting set. Errors if X is not cutting.
pub fn is_minimal_cutting(x: &PointSet) -> Result<MinimalityCertificate> {
    let space = x.space();
    let r = space.r();
    let flat = Flat::new(x);
    let npts = x.len();
    type Acc = (Vec<u64>, Option<u64>);
    let (best, bad): Acc = par_hyperplane_fold(
        space,
        || (vec![u64::MAX; npts], None),
        |acc, k, dual| {
            let mut idx = Vec::new();
            flat.meet(dual, &mut idx);
            let mut e = Echelon::new(flat.dim);
            let mut basis = Vec::with_capacity(r);
            for &i in &idx {
                if e.insert(flat.f, flat.point(i)) {
                    basis.push(i);
                }
            }
            if e.rank() < r {
                if acc.1.is_none_or(|w| k < w) {
                    acc.1 = Some(k);
                }
                return;
            }
            for &b in &basis {
                if acc.0[b] <= k {
                    continue;
                }
                e.clear();
                let mut full = false;
                for &i in &idx {
                    if i != b && e.insert(flat.f, flat.point(i)) && e.rank() == r {
                        full = true;
                        break;
                    }
                }
                if !full {
                    acc.0[b] = k;
                }
            }
        },
        |mut a, b| {
            for (x, y) in a.0.iter_mut().zip(b.0) {
                *x = (*x).min(y);
            }
            let bad = match (a.1, b.1) {
                (Some(u), Some(v)) => Some(u.min(v)),
                (u, v) => u.or(v),
            };
            (a.0, bad)
        },
    );
    if let Some(k) = bad {
        return Err(Error::Precondition(format!(
            "set is not cutting: hyperplane {:?} meets it in a non-spanning set",
            space.point_at(k).0
        )));
    }
    let witnesses: Vec<Option<Hyperplane>> = best
        .iter()
        .map(|&k| (k != u64::MAX).then(|| Hyperplane(space.point_at(k).0)))
        .collect();
    Ok(MinimalityCertificate {
        verdict: witnesses.iter().all(Option::is_some),
        witnesses,
    })
}

/// Number of hyperplanes meeting X in exactly i points, indexed by i.
pub fn intersection_histogram(x: &PointSet) -> Vec<u64> {
    let flat = Flat::new(x);
    let n = x.len();
    par_hyperplane_fold(
        x.space(),
        || vec![0u64; n + 1],
        |acc, _, dual| {
            let c = (0..flat.len())
                .filter(|&i| linalg::dot(flat.f, dual, flat.point(i)) == 0)
                .count();
            acc[c] += 1;
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )
}

/// True iff every hyperplane meets X in at least t points.
pub fn is_tfold_blocking(x: &PointSet, t: usize) -> Result<bool> {
    if t == 0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    let hist = intersection_histogram(x);
    Ok(hist.iter().take(t).all(|&c| c == 0))
}

/// Default work budget for saturation checks (subsets × span size).
pub const DEFAULT_SATURATION_BUDGET: u64 = 50_000_000;

/// Every ambient point lies in the span of some ρ+1 points of Y.
/// Minimality of ρ is not checked; see [`is_saturating_exact`].
pub fn is_saturating(y: &PointSet, rho: usize, budget: u64) -> Result<bool> {
    let space = y.space();
    let f = space.field();
    let n = y.len();
    let k = (rho + 1).min(n);
    if n == 0 {
        return Ok(false);
    }
    let subsets = binomial(n as u64, k as u64);
    let per = count_normalized(k, space.q() as u64);
    if subsets.saturating_mul(per) > budget {
        return Err(Error::BudgetExceeded(format!(
            "{subsets} subsets with up to {per} span points each exceed budget {budget}"
        )));
    }
    let total = space.num_points();
    let mut covered = vec![false; total as usize];
    let mut count = 0u64;
    let pts = y.points();
    for comb in Combinations::new(n, k) {
        let rows: Vec<Vec<u32>> = comb.iter().map(|&i| pts[i].0.clone()).collect();
        let (basis, _) = linalg::rref(f, &rows);
        for p in span_points(f, &basis) {
            let r = space.rank_of(&p) as usize;
            if !covered[r] {
                covered[r] = true;
                count += 1;
            }
        }
        if count == total {
            return Ok(true);
        }
    }
    Ok(count == total)
}

/// ρ-saturating with ρ minimal.
pub fn is_saturating_exact(y: &PointSet, rho: usize, budget: u64) -> Result<bool> {
    if !is_saturating(y, rho, budget)? {
        return Ok(false);
    }
    Ok(rho == 0 || !is_saturating(y, rho - 1, budget)?)
}

/// Maximum, over hyperplanes of PG(r,q), of the number of normal rational
/// curve tangent lines contained in the hyperplane.
pub fn max_tangents_in_hyperplane(r: usize, q_spec: &str, budget: u64) -> Result<usize> {
    let tangents = crate::constructions::nrc_tangent_lines(r, q_spec)?;
    let space = tangents.0;
    let lines = tangents.1;
    let work = space.num_points().saturating_mul(lines.len() as u64);
    if work > budget {
        return Err(Error::BudgetExceeded(format!(
            "{work} hyperplane-line tests exceed budget {budget}"
        )));
    }
    let f = space.field().clone();
    Ok(par_hyperplane_fold(
        &space,
        || 0usize,
        |acc, _, dual| {
            let c = lines
                .iter()
                .filter(|l| {
                    linalg::dot(&f, dual, &l.rows[0]) == 0 && linalg::dot(&f, dual, &l.rows[1]) == 0
                })
                .count();
            *acc = (*acc).max(c);
        },
        |a, b| a.max(b),
    ))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r.min(u64::MAX as u128) as u64
}

/// k-subsets of 0..n in lexicographic order.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            cur: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.take()?;
        let k = cur.len();
        let mut nxt = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if nxt[i] < self.n - k + i {
                nxt[i] += 1;
                for j in i + 1..k {
                    nxt[j] = nxt[j - 1] + 1;
                }
                self.cur = Some(nxt);
                break;
            }
        }
        Some(cur)
    }
}
