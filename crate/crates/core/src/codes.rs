//! Linear codes from projective systems: weights, minimality, covering radius.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finfield::{Field, FieldDesc};
use crate::linalg::{self, Matrix};
use crate::projgeom::{PointSet, ProjSpace};
use crate::verify::{self, par_hyperplane_fold};

/// Limit on q^k for direct codeword enumeration.
pub const DIRECT_LIMIT: u64 = 1 << 20;
/// Default limit on the number of syndromes for the covering radius.
pub const DEFAULT_SYNDROME_BUDGET: u64 = 1 << 24;
/// Default limit on projective codeword pairs for direct minimality.
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 32;

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<Field>,
    gen: Matrix,
}

/// w ↦ A_w, zero entries omitted.
pub type WeightDistribution = BTreeMap<usize, u64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldDesc,
    pub k: usize,
    pub n: usize,
    pub rows: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalityMode {
    Direct,
    Geometric,
}

impl LinearCode {
    /// Code generated by the rows of `gen`, which must be independent.
    pub fn new(field: Arc<Field>, gen: Matrix) -> Result<LinearCode> {
        let n = gen.first().map_or(0, Vec::len);
        if gen.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged generator matrix".into()));
        }
        if gen.iter().flatten().any(|&c| c >= field.order()) {
            return Err(Error::Malformed("generator entry out of range".into()));
        }
        if linalg::rank(&field, &gen) != gen.len() {
            return Err(Error::Degenerate("generator rows are dependent".into()));
        }
        Ok(LinearCode { field, gen })
    }

    /// The code with parity-check matrix `h`.
    pub fn from_parity_check(field: Arc<Field>, h: &Matrix) -> Result<LinearCode> {
        let n = h.first().map_or(0, Vec::len);
        let gen = linalg::nullspace(&field, h, n);
        LinearCode::new(field, gen)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn k(&self) -> usize {
        self.gen.len()
    }
    pub fn n(&self) -> usize {
        self.gen.first().map_or(0, Vec::len)
    }
    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    pub fn parity_check(&self) -> Matrix {
        linalg::nullspace(&self.field, &self.gen, self.n())
    }

    fn column(&self, j: usize) -> Vec<u32> {
        self.gen.iter().map(|r| r[j]).collect()
    }

    /// The code with coordinate j removed (dimension may drop).
    pub fn puncture(&self, j: usize) -> Result<LinearCode> {
        let rows: Matrix = self
            .gen
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &c)| c)
                    .collect()
            })
            .collect();
        let (red, _) = linalg::rref(&self.field, &rows);
        LinearCode::new(self.field.clone(), red)
    }

    /// Columns as points of PG(k−1,q), if they are nonzero and pairwise independent.
    pub fn column_points(&self) -> Result<PointSet> {
        if self.k() < 2 {
            return Err(Error::Precondition("projective systems need k ≥ 2".into()));
        }
        let space = ProjSpace::new(self.k() - 1, self.field.clone())?;
        let pts = (0..self.n())
            .map(|j| space.point(&self.column(j)))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(space, pts)
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            field: self.field.desc().clone(),
            k: self.k(),
            n: self.n(),
            rows: self.gen.clone(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<LinearCode> {
        let code = LinearCode::new(Field::from_desc(&j.field)?, j.rows.clone())?;
        if code.k() != j.k || code.n() != j.n {
            return Err(Error::Malformed("k or n disagrees with the matrix".into()));
        }
        Ok(code)
    }
}

/// The code whose generator columns are the points of Z in order.
pub fn code_from_pointset(z: &PointSet) -> Result<LinearCode> {
    let space = z.space();
    if space.span_rank(z.points())? != space.dim() {
        return Err(Error::Degenerate(
            "point set does not span the space".into(),
        ));
    }
    let gen: Matrix = (0..space.dim())
        .map(|i| z.points().iter().map(|p| p.0[i]).collect())
        .collect();
    LinearCode::new(space.field().clone(), gen)
}

/// A_w from hyperplane intersection sizes of the column multiset.
pub fn weight_distribution(c: &LinearCode) -> Result<WeightDistribution> {
    let k = c.k();
    let n = c.n();
    let f = c.field();
    let mut out = WeightDistribution::new();
    out.insert(0, 1);
    if k == 0 {
        return Ok(out);
    }
    let cols: Vec<Vec<u32>> = (0..n).map(|j| c.column(j)).collect();
    let hist = if k == 1 {
        let nz = cols.iter().filter(|v| v[0] != 0).count();
        let mut h = vec![0u64; n + 1];
        h[n - nz] = 1;
        h
    } else {
        let space = ProjSpace::new(k - 1, f.clone())?;
        par_hyperplane_fold(
            &space,
            || vec![0u64; n + 1],
            |acc, _, dual| {
                let m = cols.iter().filter(|v| linalg::dot(f, dual, v) == 0).count();
                acc[m] += 1;
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
    };
    let scal = f.order() as u64 - 1;
    for (m, &cnt) in hist.iter().enumerate() {
        if cnt > 0 && m < n {
            *out.entry(n - m).or_insert(0) += cnt * scal;
        }
    }
    // a hyperplane containing every column gives further zero codewords
    if hist[n] > 0 {
        return Err(Error::Degenerate(
            "generator matrix has rank below k".into(),
        ));
    }
    Ok(out)
}

/// A_w by enumerating all q^k codewords.
pub fn weight_distribution_direct(c: &LinearCode) -> Result<WeightDistribution> {
    let f = c.field();
    let q = f.order() as u64;
    let (k, n) = (c.k(), c.n());
    let total = q.checked_pow(k as u32).unwrap_or(u64::MAX);
    if total > DIRECT_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "{total} codewords exceed the direct limit {DIRECT_LIMIT}"
        )));
    }
    if k == 0 {
        return Ok(WeightDistribution::from([(0, 1)]));
    }
    let gen = c.generator();
    // split on the first message symbol; odometer over the rest
    let hist = (0..f.order())
        .into_par_iter()
        .map(|a0| {
            let mut hist = vec![0u64; n + 1];
            let mut msg = vec![0u32; k];
            msg[0] = a0;
            loop {
                let w = (0..n)
                    .filter(|&j| {
                        msg.iter()
                            .zip(gen)
                            .fold(0, |s, (&m, row)| f.add(s, f.mul(m, row[j])))
                            != 0
                    })
                    .count();
                hist[w] += 1;
                let mut i = k - 1;
                loop {
                    if i == 0 {
                        return hist;
                    }
                    msg[i] += 1;
                    if msg[i] < f.order() {
                        break;
                    }
                    msg[i] = 0;
                    i -= 1;
                }
            }
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist
        .into_iter()
        .enumerate()
        .filter(|&(_, a)| a > 0)
        .collect())
}

fn support_bits(f: &Field, gen: &Matrix, u: &[u32], n: usize) -> Vec<u64> {
    let mut bits = vec![0u64; n.div_ceil(64)];
    for j in 0..n {
        let v = u
            .iter()
            .zip(gen)
            .fold(0, |s, (&m, row)| f.add(s, f.mul(m, row[j])));
        if v != 0 {
            bits[j / 64] |= 1 << (j % 64);
        }
    }
    bits
}

/// Minimality by pairwise support containment over projective codeword classes.
pub fn is_minimal_code_direct(c: &LinearCode, pair_budget: u64) -> Result<bool> {
    let f = c.field();
    let (k, n) = (c.k(), c.n());
    if k == 0 {
        return Ok(true);
    }
    let classes = crate::projgeom::count_normalized(k, f.order() as u64);
    if classes.saturating_mul(classes) > pair_budget {
        return Err(Error::BudgetExceeded(format!(
            "{classes} codeword classes exceed the pair budget"
        )));
    }
    let gen = c.generator();
    let mut sups: Vec<(u32, Vec<u64>)> = crate::projgeom::NormIter::new(k, f.order())
        .map(|u| {
            let b = support_bits(f, gen, &u, n);
            (b.iter().map(|w| w.count_ones()).sum(), b)
        })
        .collect();
    sups.sort();
    let bad = (0..sups.len()).into_par_iter().any(|i| {
        let (wa, a) = &sups[i];
        sups[i + 1..]
            .iter()
            .any(|(wb, b)| wb >= wa && a.iter().zip(b).all(|(x, y)| x & !y == 0))
            || sups[..i].iter().any(|(wb, b)| wb == wa && a == b)
    });
    Ok(!bad)
}

pub fn is_minimal_code(c: &LinearCode, mode: MinimalityMode) -> Result<bool> {
    match mode {
        MinimalityMode::Direct => is_minimal_code_direct(c, DEFAULT_PAIR_BUDGET),
        MinimalityMode::Geometric => Ok(verify::is_cutting(&c.column_points()?)?.verdict),
    }
}

/// Minimal, and no longer minimal after deleting any one coordinate.
pub fn is_reduced_minimal(c: &LinearCode, mode: MinimalityMode) -> Result<bool> {
    if !is_minimal_code(c, mode)? {
        return Ok(false);
    }
    for j in 0..c.n() {
        let p = c.puncture(j)?;
        if p.k() == c.k() && is_minimal_code(&p, mode)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact covering radius by breadth-first search over syndromes.
pub fn covering_radius(c: &LinearCode, syndrome_budget: u64) -> Result<usize> {
    let f = c.field();
    let q = f.order() as u64;
    let h = c.parity_check();
    let m = h.len();
    let total = q
        .checked_pow(m as u32)
        .filter(|&t| t <= syndrome_budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "q^(n−k) = {q}^{m} syndromes exceed budget {syndrome_budget}"
            ))
        })?;
    if m == 0 {
        return Ok(0);
    }
    let encode = |v: &[u32]| v.iter().fold(0u64, |acc, &x| acc * q + x as u64);
    let decode = |mut s: u64| {
        let mut v = vec![0u32; m];
        for x in v.iter_mut().rev() {
            *x = (s % q) as u32;
            s /= q;
        }
        v
    };
    let steps: Vec<Vec<u32>> = (0..c.n())
        .flat_map(|j| {
            let col: Vec<u32> = h.iter().map(|r| r[j]).collect();
            (1..f.order()).map(move |a| col.iter().map(|&x| f.mul(a, x)).collect::<Vec<u32>>())
        })
        .filter(|v: &Vec<u32>| v.iter().any(|&x| x != 0))
        .collect();
    let mut dist = vec![u32::MAX; total as usize];
    dist[0] = 0;
    let mut frontier = vec![0u64];
    let mut seen = 1u64;
    let mut radius = 0usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            let v = decode(s);
            for st in &steps {
                let w: Vec<u32> = v.iter().zip(st).map(|(&a, &b)| f.add(a, b)).collect();
                let e = encode(&w) as usize;
                if dist[e] == u32::MAX {
                    dist[e] = radius as u32 + 1;
                    next.push(e as u64);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        radius += 1;
        seen += next.len() as u64;
        frontier = next;
    }
    if seen != total {
        return Err(Error::Degenerate(
            "parity-check columns do not span the syndrome space".into(),
        ));
    }
    Ok(radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::construct_pg3q_four_lines;
    use crate::finfield::field_create;
    use crate::projgeom::ProjPoint;

    #[test]
    fn four_lines_q3_weights() {
        let rep = construct_pg3q_four_lines(3, 1).unwrap();
        let c = code_from_pointset(&rep.set).unwrap();
        assert_eq!((c.n(), c.k()), (16, 4));
        let wd = weight_distribution(&c).unwrap();
        assert_eq!(wd, WeightDistribution::from([(0, 1), (9, 32), (12, 48)]));
        assert_eq!(weight_distribution_direct(&c).unwrap(), wd);
        assert!(is_minimal_code(&c, MinimalityMode::Direct).unwrap());
        assert!(is_minimal_code(&c, MinimalityMode::Geometric).unwrap());
        assert!(is_reduced_minimal(&c, MinimalityMode::Direct).unwrap());
    }

    #[test]
    fn line_code_is_not_minimal() {
        let f = field_create(3, 1).unwrap();
        let s = ProjSpace::new(2, f.clone()).unwrap();
        let line: Vec<ProjPoint> = s.points().filter(|p| p.0[0] == 0).collect();
        let set = PointSet::new(s.clone(), line.clone()).unwrap();
        assert!(code_from_pointset(&set).is_err());
        let mut pts = line;
        pts.push(ProjPoint(vec![1, 0, 0]));
        let c = code_from_pointset(&PointSet::new(s, pts).unwrap()).unwrap();
        assert!(!is_minimal_code(&c, MinimalityMode::Direct).unwrap());
        assert!(!is_minimal_code(&c, MinimalityMode::Geometric).unwrap());
        let dependent = vec![vec![1, 1, 1, 0], vec![2, 2, 2, 0]];
        assert!(LinearCode::new(f, dependent).is_err());
    }

    #[test]
    fn covering_radius_examples() {
        let f2 = field_create(2, 1).unwrap();
        let rep = LinearCode::new(f2.clone(), vec![vec![1, 1, 1]]).unwrap();
        assert_eq!(covering_radius(&rep, 1 << 10).unwrap(), 1);
        let id = LinearCode::new(f2.clone(), linalg::identity(3)).unwrap();
        assert_eq!(covering_radius(&id, 1 << 10).unwrap(), 0);
        // parity-check columns e1, e2, e3, (1,1,1)
        let h = vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]];
        let c = LinearCode::from_parity_check(f2, &h).unwrap();
        assert_eq!((c.n(), c.k()), (4, 1));
        assert_eq!(covering_radius(&c, 1 << 10).unwrap(), 2);
        assert!(covering_radius(&c, 4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = field_create(2, 2).unwrap();
        let c = LinearCode::new(f, vec![vec![1, 0, 1, 2], vec![0, 1, 3, 1]]).unwrap();
        let j = c.to_json();
        let back = LinearCode::from_json(
            &serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(back.generator(), c.generator());
    }

    proptest::proptest! {
        #[test]
        fn prop_weight_oracles_agree(rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 7), 3)) {
            let f = field_create(3, 1).unwrap();
            if let Ok(c) = LinearCode::new(f.clone(), rows) {
                let d = weight_distribution_direct(&c).unwrap();
                proptest::prop_assert_eq!(d.values().sum::<u64>(), 27);
                proptest::prop_assert!(d.iter().all(|(&w, &a)| w == 0 || a % 2 == 0));
                proptest::prop_assert_eq!(weight_distribution(&c).unwrap(), d);
            }
        }
    }
}
