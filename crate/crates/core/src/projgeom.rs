//! Projective spaces PG(r,q): points, hyperplanes, lines, point sets,
//! projectivities, and the Singer-cycle model of PG(3,q³).
//!
//! Points and hyperplanes are normalized so the first nonzero coordinate is 1.
//! Their lexicographic order (by element code) coincides with the integer rank
//! returned by [`ProjSpace::rank_of`].

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finfield::{field_create, prime_factors, Embedding, Field, FieldDesc};
use crate::linalg::{self, Echelon, Matrix};

/// PG(r,q).
#[derive(Clone, Debug)]
pub struct ProjSpace {
    r: usize,
    field: Arc<Field>,
}

impl PartialEq for ProjSpace {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && *self.field == *other.field
    }
}
impl Eq for ProjSpace {}

/// A point with normalized homogeneous coordinates (element codes).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint(pub Vec<u32>);

/// A hyperplane given by its normalized dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane(pub Vec<u32>);

/// A line stored as the reduced row echelon form of a 2-row generator matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjLine {
    pub rows: [Vec<u32>; 2],
}

impl ProjPoint {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl Hyperplane {
    pub fn dual(&self) -> &[u32] {
        &self.0
    }
    pub fn contains(&self, f: &Field, p: &ProjPoint) -> bool {
        linalg::dot(f, &self.0, &p.0) == 0
    }
}

impl ProjLine {
    /// The q+1 points, in lexicographic order.
    pub fn points(&self, f: &Field) -> Vec<ProjPoint> {
        let [u, v] = &self.rows;
        let mut out = Vec::with_capacity(f.order() as usize + 1);
        out.push(ProjPoint(v.clone()));
        for t in f.elements() {
            out.push(ProjPoint(
                u.iter()
                    .zip(v)
                    .map(|(&a, &b)| f.add(a, f.mul(t, b)))
                    .collect(),
            ));
        }
        out.sort_unstable();
        out
    }

    pub fn contains(&self, f: &Field, p: &ProjPoint) -> bool {
        let mut e = Echelon::new(p.0.len());
        e.insert(f, &self.rows[0]);
        e.insert(f, &self.rows[1]);
        e.contains(f, &p.0)
    }

    pub fn from_rows(f: &Field, a: &[u32], b: &[u32]) -> Result<ProjLine> {
        let (red, _) = linalg::rref(f, &[a.to_vec(), b.to_vec()]);
        if red.len() != 2 {
            return Err(Error::Degenerate("two rows do not span a line".into()));
        }
        Ok(ProjLine {
            rows: [red[0].clone(), red[1].clone()],
        })
    }
}

/// Number of normalized vectors of length n over GF(q).
pub fn count_normalized(n: usize, q: u64) -> u64 {
    (0..n).map(|i| q.pow(i as u32)).sum()
}

/// Lexicographic iterator over normalized vectors of a fixed length.
#[derive(Clone, Debug)]
pub struct NormIter {
    q: u32,
    cur: Option<Vec<u32>>,
}

impl NormIter {
    pub fn new(n: usize, q: u32) -> Self {
        let mut v = vec![0u32; n];
        let cur = if n == 0 {
            None
        } else {
            v[n - 1] = 1;
            Some(v)
        };
        NormIter { q, cur }
    }

    /// Start at the vector of the given rank.
    pub fn from_rank(n: usize, q: u32, rank: u64) -> Self {
        let cur = if rank < count_normalized(n, q as u64) {
            Some(unrank_normalized(n, q, rank))
        } else {
            None
        };
        NormIter { q, cur }
    }
}

/// Advance v to its lexicographic successor among normalized vectors.
pub fn next_normalized(v: &mut [u32], q: u32) -> bool {
    let n = v.len();
    let lead = v.iter().position(|&x| x != 0).expect("zero vector");
    for j in (lead + 1..n).rev() {
        if v[j] + 1 < q {
            v[j] += 1;
            return true;
        }
        v[j] = 0;
    }
    if lead == 0 {
        return false;
    }
    v[lead] = 0;
    v[lead - 1] = 1;
    true
}

impl Iterator for NormIter {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.cur.take()?;
        let mut nxt = cur.clone();
        if next_normalized(&mut nxt, self.q) {
            self.cur = Some(nxt);
        }
        Some(cur)
    }
}

pub fn rank_normalized(v: &[u32], q: u32) -> u64 {
    let n = v.len();
    let q = q as u64;
    let lead = v.iter().position(|&x| x != 0).expect("zero vector");
    let mut tail = 0u64;
    for &x in &v[lead + 1..] {
        tail = tail * q + x as u64;
    }
    count_normalized(n - 1 - lead, q) + tail
}

pub fn unrank_normalized(n: usize, q: u32, rank: u64) -> Vec<u32> {
    let mut rem = rank;
    let qq = q as u64;
    let mut v = vec![0u32; n];
    for lead in (0..n).rev() {
        let size = qq.pow((n - 1 - lead) as u32);
        if rem < size {
            v[lead] = 1;
            for j in (lead + 1..n).rev() {
                v[j] = (rem % qq) as u32;
                rem /= qq;
            }
            return v;
        }
        rem -= size;
    }
    panic!("rank out of range");
}

/// All normalized vectors in the row space of `basis` (given as independent rows).
pub fn span_points(f: &Field, basis: &[Vec<u32>]) -> Vec<ProjPoint> {
    let k = basis.len();
    let n = basis.first().map_or(0, |r| r.len());
    let mut out: Vec<ProjPoint> = NormIter::new(k, f.order())
        .map(|c| {
            let mut v = vec![0u32; n];
            for (ci, row) in c.iter().zip(basis) {
                if *ci != 0 {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(*ci, y));
                    }
                }
            }
            linalg::normalize(f, &mut v);
            ProjPoint(v)
        })
        .collect();
    out.sort_unstable();
    out
}

impl ProjSpace {
    pub fn new(r: usize, field: Arc<Field>) -> Result<ProjSpace> {
        if r == 0 {
            return Err(Error::Precondition(
                "projective dimension must be at least 1".into(),
            ));
        }
        Ok(ProjSpace { r, field })
    }

    pub fn r(&self) -> usize {
        self.r
    }
    pub fn dim(&self) -> usize {
        self.r + 1
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// (q^{r+1} − 1)/(q − 1); also the number of hyperplanes.
    pub fn num_points(&self) -> u64 {
        count_normalized(self.dim(), self.q() as u64)
    }

    pub fn rank_of(&self, p: &ProjPoint) -> u64 {
        rank_normalized(&p.0, self.q())
    }

    pub fn point_at(&self, rank: u64) -> ProjPoint {
        ProjPoint(unrank_normalized(self.dim(), self.q(), rank))
    }

    /// Validate and normalize coordinates.
    pub fn point(&self, coords: &[u32]) -> Result<ProjPoint> {
        Ok(ProjPoint(self.normalized(coords)?))
    }

    pub fn hyperplane(&self, dual: &[u32]) -> Result<Hyperplane> {
        Ok(Hyperplane(self.normalized(dual)?))
    }

    fn normalized(&self, coords: &[u32]) -> Result<Vec<u32>> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.q()) {
            return Err(Error::CodeOutOfRange {
                code: c as u64,
                order: self.q(),
            });
        }
        let mut v = coords.to_vec();
        if !linalg::normalize(&self.field, &mut v) {
            return Err(Error::Degenerate(
                "zero vector is not a projective point".into(),
            ));
        }
        Ok(v)
    }

    /// Normalize a known-valid nonzero vector.
    pub fn point_unchecked(&self, mut v: Vec<u32>) -> ProjPoint {
        let ok = linalg::normalize(&self.field, &mut v);
        debug_assert!(ok);
        ProjPoint(v)
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> {
        NormIter::new(self.dim(), self.q()).map(ProjPoint)
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = Hyperplane> {
        NormIter::new(self.dim(), self.q()).map(Hyperplane)
    }

    pub fn span_rank(&self, points: &[ProjPoint]) -> Result<usize> {
        let mut e = Echelon::new(self.dim());
        for p in points {
            if p.0.len() != self.dim() {
                return Err(Error::DimensionMismatch("point from another space".into()));
            }
            e.insert(&self.field, &p.0);
        }
        Ok(e.rank())
    }

    pub fn line_through(&self, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine> {
        if a.0.len() != self.dim() || b.0.len() != self.dim() {
            return Err(Error::DimensionMismatch("point from another space".into()));
        }
        if a == b {
            return Err(Error::Degenerate("a line needs two distinct points".into()));
        }
        ProjLine::from_rows(&self.field, &a.0, &b.0)
    }

    /// All lines, sorted by their reduced generator matrices.
    pub fn lines(&self) -> Vec<ProjLine> {
        let n = self.dim();
        let q = self.q();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let free0: Vec<usize> = (i + 1..n).filter(|&c| c != j).collect();
                let free1: Vec<usize> = (j + 1..n).collect();
                let slots = free0.len() + free1.len();
                let total = (q as u64).pow(slots as u32);
                for mut code in 0..total {
                    let mut u = vec![0u32; n];
                    let mut v = vec![0u32; n];
                    u[i] = 1;
                    v[j] = 1;
                    for &c in free1.iter().rev() {
                        v[c] = (code % q as u64) as u32;
                        code /= q as u64;
                    }
                    for &c in free0.iter().rev() {
                        u[c] = (code % q as u64) as u32;
                        code /= q as u64;
                    }
                    out.push(ProjLine { rows: [u, v] });
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Hyperplanes containing every given point, sorted.
    pub fn hyperplanes_through(&self, points: &[ProjPoint]) -> Vec<Hyperplane> {
        let rows: Matrix = points.iter().map(|p| p.0.clone()).collect();
        let ns = linalg::nullspace(&self.field, &rows, self.dim());
        if ns.is_empty() {
            return Vec::new();
        }
        span_points(&self.field, &ns)
            .into_iter()
            .map(|p| Hyperplane(p.0))
            .collect()
    }

    /// Points of a hyperplane, sorted.
    pub fn points_of_hyperplane(&self, h: &Hyperplane) -> Vec<ProjPoint> {
        let ns = linalg::nullspace(&self.field, std::slice::from_ref(&h.0), self.dim());
        span_points(&self.field, &ns)
    }
}

enum Membership {
    Bits(Vec<u64>),
    Hash(HashSet<u64>),
}

const BITSET_LIMIT: u64 = 1 << 28;

/// Ordered, duplicate-free set of points of one space.
pub struct PointSet {
    space: ProjSpace,
    points: Vec<ProjPoint>,
    members: Membership,
}

impl Clone for PointSet {
    fn clone(&self) -> Self {
        PointSet::new(self.space.clone(), self.points.clone()).expect("valid set")
    }
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PointSet(PG({},{}), {} points)",
            self.space.r,
            self.space.q(),
            self.points.len()
        )
    }
}

/// JSON layout of a point set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointSetJson {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
    pub r: usize,
    pub points: Vec<Vec<u32>>,
}

impl PointSet {
    /// Errors on duplicate or malformed points.
    pub fn new(space: ProjSpace, points: Vec<ProjPoint>) -> Result<PointSet> {
        let n = space.num_points();
        let mut members = if n <= BITSET_LIMIT {
            Membership::Bits(vec![0u64; n.div_ceil(64) as usize])
        } else {
            Membership::Hash(HashSet::new())
        };
        for p in &points {
            let v = space.normalized(&p.0)?;
            if v != p.0 {
                return Err(Error::Malformed(format!(
                    "point {:?} is not normalized",
                    p.0
                )));
            }
            let k = space.rank_of(p);
            let fresh = match &mut members {
                Membership::Bits(b) => {
                    let (w, m) = ((k / 64) as usize, 1u64 << (k % 64));
                    let fresh = b[w] & m == 0;
                    b[w] |= m;
                    fresh
                }
                Membership::Hash(s) => s.insert(k),
            };
            if !fresh {
                return Err(Error::Malformed(format!("duplicate point {:?}", p.0)));
            }
        }
        Ok(PointSet {
            space,
            points,
            members,
        })
    }

    /// Keeps the first occurrence of each point.
    pub fn from_points_dedup(
        space: ProjSpace,
        points: impl IntoIterator<Item = ProjPoint>,
    ) -> Result<PointSet> {
        let mut seen = HashSet::new();
        let pts: Vec<ProjPoint> = points
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .collect();
        PointSet::new(space, pts)
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        if p.0.len() != self.space.dim() {
            return false;
        }
        let k = self.space.rank_of(p);
        match &self.members {
            Membership::Bits(b) => {
                k < self.space.num_points() && b[(k / 64) as usize] & (1 << (k % 64)) != 0
            }
            Membership::Hash(s) => s.contains(&k),
        }
    }

    /// Points of the set lying on a line.
    pub fn meet_line(&self, l: &ProjLine) -> Vec<ProjPoint> {
        l.points(self.space.field())
            .into_iter()
            .filter(|p| self.contains(p))
            .collect()
    }

    pub fn without(&self, idx: usize) -> PointSet {
        let mut pts = self.points.clone();
        pts.remove(idx);
        PointSet::new(self.space.clone(), pts).expect("subset of a valid set")
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "union of sets from different spaces".into(),
            ));
        }
        PointSet::from_points_dedup(
            self.space.clone(),
            self.points.iter().chain(&other.points).cloned(),
        )
    }

    pub fn to_json(&self) -> PointSetJson {
        let d = self.space.field().desc();
        PointSetJson {
            p: d.p,
            h: d.h,
            modulus: d.modulus.clone(),
            r: self.space.r,
            points: self.points.iter().map(|p| p.0.clone()).collect(),
        }
    }

    pub fn from_json(j: &PointSetJson) -> Result<PointSet> {
        let field = Field::from_desc(&FieldDesc {
            p: j.p,
            h: j.h,
            modulus: j.modulus.clone(),
        })?;
        let space = ProjSpace::new(j.r, field)?;
        let pts = j
            .points
            .iter()
            .map(|c| space.point(c))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(space, pts)
    }
}

/// An invertible linear map of PG(r,q), normalized so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Projectivity {
    pub matrix: Matrix,
}

impl Projectivity {
    pub fn new(f: &Field, m: Matrix) -> Result<Projectivity> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "projectivity matrix must be square".into(),
            ));
        }
        if linalg::rank(f, &m) != n {
            return Err(Error::Degenerate("singular projectivity matrix".into()));
        }
        let mut flat: Vec<u32> = m.concat();
        linalg::normalize(f, &mut flat);
        Ok(Projectivity {
            matrix: flat.chunks(n).map(|c| c.to_vec()).collect(),
        })
    }

    pub fn identity(n: usize) -> Projectivity {
        Projectivity {
            matrix: linalg::identity(n),
        }
    }

    /// Unnormalized image vector M·v.
    pub fn apply_vec(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        linalg::mat_vec(f, &self.matrix, v)
    }

    pub fn apply(&self, f: &Field, p: &ProjPoint) -> ProjPoint {
        let mut v = self.apply_vec(f, &p.0);
        linalg::normalize(f, &mut v);
        ProjPoint(v)
    }

    pub fn apply_line(&self, f: &Field, l: &ProjLine) -> ProjLine {
        ProjLine::from_rows(
            f,
            &self.apply_vec(f, &l.rows[0]),
            &self.apply_vec(f, &l.rows[1]),
        )
        .expect("invertible map")
    }

    pub fn compose(&self, f: &Field, other: &Projectivity) -> Projectivity {
        Projectivity::new(f, linalg::mat_mul(f, &self.matrix, &other.matrix))
            .expect("product of invertible maps")
    }

    pub fn inverse(&self, f: &Field) -> Projectivity {
        Projectivity::new(f, linalg::inverse(f, &self.matrix).expect("invertible"))
            .expect("invertible")
    }

    /// Order in PGL.
    pub fn order(&self, f: &Field) -> u64 {
        let id = Projectivity::identity(self.matrix.len());
        let mut m = self.clone();
        let mut k = 1u64;
        while m != id {
            m = m.compose(f, self);
            k += 1;
        }
        k
    }
}

/// Subgeometry of order q0 with an optional projectivity from the canonical one.
#[derive(Clone, Debug)]
pub struct Subgeometry {
    pub q0: u32,
    pub points: PointSet,
    pub witness: Option<Projectivity>,
}

/// Point classes relative to a q-order subgeometry of PG(3,q³).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointClass {
    InSigma,
    O2,
    O3,
}

/// Line classes relative to a q-order subgeometry of PG(3,q³).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LineClass {
    L1,
    L2,
    L3,
    L4,
    L5,
}

/// PG(3,q³) with q-order subgeometries given by a Singer cycle of PG(3,q).
///
/// Coordinates live in K = GF(q³). For the least primitive quartic f over GF(q),
/// K⁴ is identified with K[X]/(f) ≅ GF(q¹²), so S (the companion matrix of f)
/// is multiplication by X, a generator of GF(q⁴)*. The rational points form Σ₁,
/// and the S-orbits are the cosets of GF(q⁴)*K* in GF(q¹²)*: a partition of
/// the points into q-order subgeometries.
pub struct SingerModel {
    pub base: Arc<Field>,
    pub emb: Embedding,
    pub space: ProjSpace,
    /// f over the base field, constant term first, monic.
    pub quartic: Vec<u32>,
    pub s: Projectivity,
    pub sigma1: Subgeometry,
}

fn poly_mulmod_field(f: &Field, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let d = m.len() - 1;
    let mut prod = vec![0u32; 2 * d - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    for i in (d..2 * d - 1).rev() {
        let c = prod[i];
        if c != 0 {
            for j in 0..d {
                prod[i - d + j] = f.sub(prod[i - d + j], f.mul(c, m[j]));
            }
        }
    }
    prod.truncate(d);
    prod
}

fn x_power_mod(f: &Field, e: u64, m: &[u32]) -> Vec<u32> {
    let d = m.len() - 1;
    let mut r = vec![0u32; d];
    r[0] = 1;
    let mut b = vec![0u32; d];
    b[1] = 1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod_field(f, &r, &b, m);
        }
        b = poly_mulmod_field(f, &b, &b, m);
        e >>= 1;
    }
    r
}

/// Least monic primitive polynomial of degree d ≥ 2 over `f`, ordered by `Σ mᵢ qⁱ`.
pub fn least_primitive_poly(f: &Field, d: usize) -> Vec<u32> {
    let q = f.order() as u64;
    let ord = q.pow(d as u32) - 1;
    let factors = prime_factors(ord);
    let mut one = vec![0u32; d];
    one[0] = 1;
    for tail in 0..q.pow(d as u32) {
        let mut m: Vec<u32> = (0..d)
            .map(|i| ((tail / q.pow(i as u32)) % q) as u32)
            .collect();
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        if x_power_mod(f, ord, &m) == one
            && factors.iter().all(|&l| x_power_mod(f, ord / l, &m) != one)
        {
            return m;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl SingerModel {
    /// Model over PG(3,q³) for q = p^h.
    pub fn new(p: u32, h: u32) -> Result<SingerModel> {
        let base = field_create(p, h)?;
        let k = field_create(p, 3 * h)?;
        let emb = Embedding::new(&base, &k)?;
        let quartic = least_primitive_poly(&base, 4);
        let space = ProjSpace::new(3, k.clone())?;
        // companion matrix: column j is X·X^j
        let mut m = vec![vec![0u32; 4]; 4];
        for j in 0..3 {
            m[j + 1][j] = 1;
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[3] = k.neg(emb.embed(quartic[i]));
        }
        let s = Projectivity::new(&k, m)?;
        let rational: Vec<ProjPoint> = NormIter::new(4, base.order())
            .map(|v| ProjPoint(v.iter().map(|&c| emb.embed(c)).collect()))
            .collect();
        let mut rational = rational;
        rational.sort_unstable();
        let sigma1 = Subgeometry {
            q0: base.order(),
            points: PointSet::new(space.clone(), rational)?,
            witness: Some(Projectivity::identity(4)),
        };
        Ok(SingerModel {
            base,
            emb,
            space,
            quartic,
            s,
            sigma1,
        })
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    pub fn k(&self) -> &Arc<Field> {
        self.space.field()
    }

    /// (q+1)(q²+1).
    pub fn theta(&self) -> u64 {
        count_normalized(4, self.q() as u64)
    }

    /// Orbit of a point under ⟨S⟩, in generation order.
    pub fn orbit(&self, p: &ProjPoint) -> Vec<ProjPoint> {
        let k = self.k();
        let mut out = vec![p.clone()];
        let mut cur = self.s.apply(k, p);
        while cur != *p {
            out.push(cur.clone());
            cur = self.s.apply(k, &cur);
        }
        out
    }

    /// The partition member containing p, as a subgeometry with witness.
    pub fn subgeometry_of(&self, p: &ProjPoint) -> Result<Subgeometry> {
        let k = self.k();
        let mut pts = self.orbit(p);
        pts.sort_unstable();
        let mut cols = vec![p.0.clone()];
        for _ in 0..3 {
            let last = cols.last().unwrap().clone();
            cols.push(self.s.apply_vec(k, &last));
        }
        let witness = Projectivity::new(k, linalg::transpose(&cols))?;
        Ok(Subgeometry {
            q0: self.q(),
            points: PointSet::new(self.space.clone(), pts)?,
            witness: Some(witness),
        })
    }

    /// The full partition, ordered by least point of each member.
    pub fn partition(&self) -> Result<Vec<Subgeometry>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in self.space.points() {
            if seen.contains(&p) {
                continue;
            }
            let sg = self.subgeometry_of(&p)?;
            seen.extend(sg.points.points().iter().cloned());
            out.push(sg);
        }
        Ok(out)
    }

    /// Coordinate-wise x ↦ x^q.
    pub fn iota(&self, v: &[u32]) -> Vec<u32> {
        let h = self.base.h();
        v.iter().map(|&x| self.k().frobenius(x, h)).collect()
    }

    fn is_rational(&self, v: &[u32]) -> bool {
        v.iter().all(|&x| self.emb.restrict(x).is_some())
    }

    fn to_canonical(&self, v: &[u32], sigma: &Subgeometry) -> Result<Vec<u32>> {
        let w = sigma
            .witness
            .as_ref()
            .ok_or_else(|| Error::Precondition("subgeometry has no witness projectivity".into()))?;
        if sigma.points.space() != &self.space {
            return Err(Error::DimensionMismatch(
                "subgeometry from another space".into(),
            ));
        }
        if w.matrix == linalg::identity(4) {
            return Ok(v.to_vec());
        }
        let inv = w.inverse(self.k());
        Ok(inv.apply(self.k(), &ProjPoint(v.to_vec())).0)
    }

    fn classify_canonical_point(&self, v: &[u32]) -> PointClass {
        if self.is_rational(v) {
            return PointClass::InSigma;
        }
        let a = self.iota(v);
        let b = self.iota(&a);
        if linalg::rank(self.k(), &[v.to_vec(), a, b]) == 2 {
            PointClass::O2
        } else {
            PointClass::O3
        }
    }

    pub fn classify_point(&self, p: &ProjPoint, sigma: &Subgeometry) -> Result<PointClass> {
        let v = self.to_canonical(&p.0, sigma)?;
        Ok(self.classify_canonical_point(&v))
    }

    pub fn classify_line(&self, l: &ProjLine, sigma: &Subgeometry) -> Result<LineClass> {
        let k = self.k();
        let (u, v) = if sigma
            .witness
            .as_ref()
            .is_some_and(|w| w.matrix == linalg::identity(4))
        {
            (l.rows[0].clone(), l.rows[1].clone())
        } else {
            let w = sigma.witness.as_ref().ok_or_else(|| {
                Error::Precondition("subgeometry has no witness projectivity".into())
            })?;
            let inv = w.inverse(k);
            (inv.apply_vec(k, &l.rows[0]), inv.apply_vec(k, &l.rows[1]))
        };
        let line = ProjLine::from_rows(k, &u, &v)?;
        if self.is_rational(&line.rows[0]) && self.is_rational(&line.rows[1]) {
            return Ok(LineClass::L1);
        }
        let meets = line.points(k).iter().any(|p| self.is_rational(&p.0));
        let (u1, v1) = (self.iota(&u), self.iota(&v));
        let (u2, v2) = (self.iota(&u1), self.iota(&v1));
        let in_plane = linalg::rank(k, &[u, v, u1, v1, u2, v2]) <= 3;
        Ok(match (meets, in_plane) {
            (true, true) => LineClass::L2,
            (true, false) => LineClass::L3,
            (false, true) => LineClass::L4,
            (false, false) => LineClass::L5,
        })
    }

    /// Lines of Σ₁ (extended to PG(3,q³)), sorted.
    pub fn rational_lines(&self) -> Vec<ProjLine> {
        let base_space = ProjSpace::new(3, self.base.clone()).expect("r = 3");
        let mut out: Vec<ProjLine> = base_space
            .lines()
            .into_iter()
            .map(|l| {
                let e = |r: &Vec<u32>| r.iter().map(|&c| self.emb.embed(c)).collect::<Vec<u32>>();
                ProjLine::from_rows(self.k(), &e(&l.rows[0]), &e(&l.rows[1]))
                    .expect("embedded line")
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Orbits of ⟨S⟩ on the lines of Σ₁.
    pub fn line_orbits(&self) -> LineOrbits {
        let k = self.k();
        let lines = self.rational_lines();
        let mut seen: HashSet<ProjLine> = HashSet::new();
        let mut orbits = Vec::new();
        for l in &lines {
            if seen.contains(l) {
                continue;
            }
            let mut orb = vec![l.clone()];
            let mut cur = self.s.apply_line(k, l);
            while cur != *l {
                orb.push(cur.clone());
                cur = self.s.apply_line(k, &cur);
            }
            seen.extend(orb.iter().cloned());
            orb.sort_unstable();
            orbits.push(orb);
        }
        let small = (self.q() as usize).pow(2) + 1;
        let (spread, mut others): (Vec<_>, Vec<_>) =
            orbits.into_iter().partition(|o| o.len() == small);
        others.sort_by(|a, b| a[0].cmp(&b[0]));
        LineOrbits {
            spread: spread.into_iter().next().unwrap_or_default(),
            others,
        }
    }
}

/// The spread orbit and the remaining q orbits (sorted by least line) of ⟨S⟩ on lines of Σ₁.
#[derive(Clone, Debug)]
pub struct LineOrbits {
    pub spread: Vec<ProjLine>,
    pub others: Vec<Vec<ProjLine>>,
}

/// Histogram helper keyed by class.
pub fn census<K: std::hash::Hash + Eq + Ord + Copy>(
    items: impl IntoIterator<Item = K>,
) -> Vec<(K, u64)> {
    let mut m: HashMap<K, u64> = HashMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    let mut v: Vec<(K, u64)> = m.into_iter().collect();
    v.sort_unstable();
    v
}
