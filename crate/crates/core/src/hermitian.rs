//! Degenerate (rank 2) Hermitian curves of PG(2,q²): cones with a point
//! vertex over a Baer subline of the pencil of lines through it.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finfield::{field_create, Field};
use crate::linalg::{self, Matrix};
use crate::projgeom::{PointSet, PointSetJson, ProjPoint, ProjSpace};
use crate::sublines::{det2, Pg1, Subline};

/// PG(2,q²) together with the pencil model PG(1,q²) ⊃ PG(1,q).
#[derive(Clone, Debug)]
pub struct HermitianPlane {
    plane: ProjSpace,
    pencil: Pg1,
    q: u32,
    sub_h: u32,
}

/// A degenerate Hermitian curve. `vertex` and `subline` (in pencil
/// coordinates of the vertex) determine the point set; `form` is a matrix h
/// with the curve given by Σ h_ij X_i^q X_j = 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegHermitianCurve {
    pub vertex: ProjPoint,
    pub subline: Subline,
    pub form: Matrix,
}

impl PartialEq for DegHermitianCurve {
    fn eq(&self, other: &Self) -> bool {
        self.vertex == other.vertex && self.subline == other.subline
    }
}
impl Eq for DegHermitianCurve {}

impl DegHermitianCurve {
    /// Point-set signature.
    pub fn key(&self) -> (&ProjPoint, &Subline) {
        (&self.vertex, &self.subline)
    }

    /// Membership through the cone description.
    pub fn contains(&self, hp: &HermitianPlane, p: &ProjPoint) -> bool {
        match hp.pencil_coord(&self.vertex, p) {
            None => true,
            Some(y) => self.subline.contains(&y),
        }
    }

    /// Membership through the equation.
    pub fn satisfies_form(&self, hp: &HermitianPlane, p: &ProjPoint) -> bool {
        hp.eval_form(&self.form, &p.0) == 0
    }

    /// All points, sorted: the vertex plus q+1 lines through it.
    pub fn points(&self, hp: &HermitianPlane) -> Vec<ProjPoint> {
        let f = hp.field();
        let v = &self.vertex.0;
        let i = lead(v);
        let mut out = vec![self.vertex.clone()];
        for y in &self.subline.points {
            let w = hp.lift(i, &y.0);
            out.push(hp.plane.point_unchecked(w.clone()));
            for lam in f.elements() {
                let pt: Vec<u32> = (0..3).map(|k| f.add(f.mul(lam, v[k]), w[k])).collect();
                out.push(hp.plane.point_unchecked(pt));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The catalog of curves through the frame, by family.
#[derive(Clone, Debug)]
pub struct FrameCatalog {
    pub type1: Vec<DegHermitianCurve>,
    pub type2: Vec<DegHermitianCurve>,
    pub type3: Vec<DegHermitianCurve>,
    pub type4: Vec<DegHermitianCurve>,
}

impl FrameCatalog {
    pub fn counts(&self) -> [usize; 4] {
        [
            self.type1.len(),
            self.type2.len(),
            self.type3.len(),
            self.type4.len(),
        ]
    }
    pub fn all(&self) -> impl Iterator<Item = &DegHermitianCurve> {
        self.type1
            .iter()
            .chain(&self.type2)
            .chain(&self.type3)
            .chain(&self.type4)
    }
    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }
}

/// Seven points of PG(2,q²) on no degenerate Hermitian curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SevenPointConfig {
    /// Parameters of the frame-plus-orbit family; None for a generic config.
    pub x: Option<u32>,
    pub xi: Option<u32>,
    pub generic: bool,
    /// Whether no three of the points are collinear.
    pub arc: bool,
    pub points: Vec<ProjPoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SevenPointJson {
    #[serde(flatten)]
    pub set: PointSetJson,
    pub x: Option<u32>,
    pub xi: Option<u32>,
    pub generic: bool,
}

impl SevenPointConfig {
    pub fn point_set(&self, hp: &HermitianPlane) -> Result<PointSet> {
        PointSet::new(hp.plane.clone(), self.points.clone())
    }
    pub fn to_json(&self, hp: &HermitianPlane) -> Result<SevenPointJson> {
        Ok(SevenPointJson {
            set: self.point_set(hp)?.to_json(),
            x: self.x,
            xi: self.xi,
            generic: self.generic,
        })
    }
}

fn lead(v: &[u32]) -> usize {
    v.iter().position(|&x| x != 0).expect("nonzero point")
}

impl HermitianPlane {
    /// PG(2,q²) for q = p^h.
    pub fn new(p: u32, h: u32) -> Result<HermitianPlane> {
        let big = field_create(p, 2 * h)?;
        let pencil = Pg1::over(big.clone(), h)?;
        Ok(HermitianPlane {
            plane: ProjSpace::new(2, big)?,
            q: pencil.q0,
            pencil,
            sub_h: h,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn plane(&self) -> &ProjSpace {
        &self.plane
    }
    pub fn pencil(&self) -> &Pg1 {
        &self.pencil
    }
    pub fn field(&self) -> &Field {
        self.plane.field()
    }

    /// a^q.
    #[inline]
    pub fn conj(&self, a: u32) -> u32 {
        self.field().frobenius(a, self.sub_h)
    }

    /// GF(q) as codes of GF(q²), sorted.
    pub fn subfield(&self) -> &[u32] {
        self.pencil.subfield()
    }

    /// (1,0,0), (0,1,0), (0,0,1), (1,1,1).
    pub fn frame(&self) -> [ProjPoint; 4] {
        [
            ProjPoint(vec![1, 0, 0]),
            ProjPoint(vec![0, 1, 0]),
            ProjPoint(vec![0, 0, 1]),
            ProjPoint(vec![1, 1, 1]),
        ]
    }

    /// Points with all coordinates in GF(q): the canonical Baer subplane.
    pub fn baer_subplane(&self) -> Vec<ProjPoint> {
        self.plane
            .points()
            .filter(|p| p.0.iter().all(|&c| self.pencil.in_sub(c)))
            .collect()
    }

    pub fn eval_form(&self, h: &Matrix, x: &[u32]) -> u32 {
        let f = self.field();
        let mut s = 0;
        for i in 0..3 {
            if x[i] == 0 {
                continue;
            }
            let xi = self.conj(x[i]);
            for j in 0..3 {
                if h[i][j] != 0 && x[j] != 0 {
                    s = f.add(s, f.mul(h[i][j], f.mul(xi, x[j])));
                }
            }
        }
        s
    }

    /// The line through the vertex v and p, as a point of PG(1,q²); None when p = v.
    pub fn pencil_coord(&self, v: &ProjPoint, p: &ProjPoint) -> Option<ProjPoint> {
        let f = self.field();
        let i = lead(&v.0);
        let pi = p.0[i];
        let y: Vec<u32> = (0..3)
            .filter(|&j| j != i)
            .map(|j| f.sub(p.0[j], f.mul(pi, v.0[j])))
            .collect();
        if y.iter().all(|&c| c == 0) {
            return None;
        }
        Some(self.pencil.space.point_unchecked(y))
    }

    /// A point on the pencil line y of a vertex with leading index i.
    fn lift(&self, i: usize, y: &[u32]) -> Vec<u32> {
        let mut w = vec![0u32; 3];
        let mut k = 0;
        for (j, wj) in w.iter_mut().enumerate() {
            if j != i {
                *wj = y[k];
                k += 1;
            }
        }
        w
    }

    /// The cone with vertex v over the subline through three pencil points.
    pub fn curve(
        &self,
        v: &ProjPoint,
        a: &ProjPoint,
        b: &ProjPoint,
        c: &ProjPoint,
    ) -> Result<DegHermitianCurve> {
        let f = self.field();
        let subline = self.pencil.subline_through(a, b, c)?;
        let d = det2(f, &a.0, &b.0);
        let lam = f.div(det2(f, &c.0, &b.0), d)?;
        let mu = f.div(det2(f, &a.0, &c.0), d)?;
        let m = vec![
            vec![f.mul(lam, a.0[0]), f.mul(mu, b.0[0])],
            vec![f.mul(lam, a.0[1]), f.mul(mu, b.0[1])],
        ];
        let i = lead(&v.0);
        let proj: Matrix = (0..3)
            .filter(|&j| j != i)
            .map(|j| {
                (0..3)
                    .map(|l| {
                        let mut e = u32::from(l == j);
                        if l == i {
                            e = f.sub(e, v.0[j]);
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let n = linalg::mat_mul(f, &linalg::inverse(f, &m)?, &proj);
        let form: Matrix = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        f.sub(
                            f.mul(self.conj(n[0][i]), n[1][j]),
                            f.mul(self.conj(n[1][i]), n[0][j]),
                        )
                    })
                    .collect()
            })
            .collect();
        Ok(DegHermitianCurve {
            vertex: v.clone(),
            subline,
            form,
        })
    }

    /// The curve cut out by a form, which must be degenerate of rank 2 with a
    /// Baer subline as base. The given form is kept.
    pub fn curve_from_form(&self, form: Matrix) -> Result<DegHermitianCurve> {
        let f = self.field();
        let ker = linalg::nullspace(f, &form, 3);
        if ker.len() != 1 {
            return Err(Error::Degenerate(format!(
                "form has rank {}, expected 2",
                3 - ker.len()
            )));
        }
        let v = self.plane.point_unchecked(ker[0].clone());
        let mut ys: Vec<ProjPoint> = self
            .plane
            .points()
            .filter(|p| self.eval_form(&form, &p.0) == 0)
            .filter_map(|p| self.pencil_coord(&v, &p))
            .collect();
        ys.sort_unstable();
        ys.dedup();
        if ys.len() != self.q as usize + 1 {
            return Err(Error::Degenerate(format!(
                "form meets the pencil in {} lines",
                ys.len()
            )));
        }
        let base = self.pencil.subline_through(&ys[0], &ys[1], &ys[2])?;
        if base.points != ys {
            return Err(Error::Degenerate("form base is not a Baer subline".into()));
        }
        Ok(DegHermitianCurve {
            vertex: v,
            subline: base,
            form,
        })
    }

    /// Every degenerate Hermitian curve, by vertex then subline.
    pub fn all_curves(&self) -> Vec<DegHermitianCurve> {
        let subs = self.pencil.sublines();
        self.plane
            .points()
            .flat_map(|v| {
                subs.iter()
                    .map(|s| {
                        let [a, b, c] = s.canonical_triple();
                        self.curve(&v, a, b, c).expect("distinct pencil points")
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn add_pair(&self, h: &mut Matrix, i: usize, j: usize, c1: u32, c2: u32) {
        // c1·X_i^q X_j + c2·X_i X_j^q
        let f = self.field();
        h[i][j] = f.add(h[i][j], c1);
        h[j][i] = f.add(h[j][i], c2);
    }

    fn form_of(&self, terms: &[(usize, usize, u32, u32)]) -> Matrix {
        let mut h = vec![vec![0u32; 3]; 3];
        for &(i, j, c1, c2) in terms {
            self.add_pair(&mut h, i, j, c1, c2);
        }
        h
    }

    /// The degenerate Hermitian curves through the frame, in four families.
    pub fn catalog_through_frame(&self) -> Result<FrameCatalog> {
        let f = self.field();
        let neg = |a| f.neg(a);
        let sub = |a, b| f.sub(a, b);
        let mul = |a, b| f.mul(a, b);
        let gfq: Vec<u32> = self.subfield().to_vec();
        let outer: Vec<u32> = f.elements().filter(|&a| !self.pencil.in_sub(a)).collect();

        let mut t1 = vec![self.form_of(&[(0, 1, 1, neg(1))])];
        for &a in &gfq {
            t1.push(self.form_of(&[(0, 1, a, neg(a)), (0, 2, neg(1), 1)]));
        }
        for &a in &gfq {
            for &b in &gfq {
                t1.push(self.form_of(&[(0, 1, b, neg(b)), (0, 2, neg(a), a), (1, 2, 1, neg(1))]));
            }
        }

        let mut t2 = Vec::new();
        for a in f
            .elements()
            .filter(|&a| a != 1 && mul(self.conj(a), a) == 1)
        {
            t2.push(self.form_of(&[(0, 2, 1, neg(a)), (1, 2, neg(1), a)]));
            t2.push(self.form_of(&[(0, 1, 1, neg(a)), (1, 2, a, neg(1))]));
            t2.push(self.form_of(&[(0, 1, 1, neg(a)), (0, 2, neg(1), a)]));
        }

        let mut t3 = Vec::new();
        for &a in &outer {
            let aq = self.conj(a);
            let n = mul(a, aq);
            let (u, uq) = (sub(1, a), sub(1, aq));
            t3.push(self.form_of(&[(0, 1, mul(uq, a), neg(mul(u, aq))), (0, 2, neg(uq), u)]));
            t3.push(self.form_of(&[(0, 1, mul(u, aq), neg(mul(uq, a))), (1, 2, uq, neg(u))]));
            t3.push(self.form_of(&[(0, 2, mul(u, aq), neg(mul(uq, a))), (1, 2, neg(u), uq)]));
            t3.push(self.form_of(&[(0, 1, n, neg(n)), (0, 2, neg(aq), a), (1, 2, aq, neg(a))]));
            t3.push(self.form_of(&[(0, 1, aq, neg(a)), (0, 2, neg(n), n), (1, 2, a, neg(aq))]));
            t3.push(self.form_of(&[(0, 1, a, neg(aq)), (0, 2, neg(a), aq), (1, 2, n, neg(n))]));
        }

        let mut t4 = Vec::new();
        for &d in gfq.iter().filter(|&&d| d > 1) {
            for &t in &outer {
                let tq = self.conj(t);
                let e = sub(1, d);
                let g = sub(1, mul(d, t));
                let gq = sub(1, mul(d, tq));
                t4.push(self.form_of(&[
                    (0, 1, mul(e, tq), neg(mul(e, t))),
                    (0, 2, neg(mul(g, tq)), mul(gq, t)),
                    (1, 2, g, neg(gq)),
                ]));
            }
        }

        let build = |forms: Vec<Matrix>| -> Result<Vec<DegHermitianCurve>> {
            forms.into_iter().map(|h| self.curve_from_form(h)).collect()
        };
        let mut type4 = build(t4)?;
        let mut seen = HashSet::new();
        type4.retain(|c| seen.insert((c.vertex.clone(), c.subline.clone())));
        let cat = FrameCatalog {
            type1: build(t1)?,
            type2: build(t2)?,
            type3: build(t3)?,
            type4,
        };
        for c in cat.all() {
            if !self.frame().iter().all(|p| c.contains(self, p)) {
                return Err(Error::Inconsistency(
                    "catalog curve misses a frame point".into(),
                ));
            }
        }
        Ok(cat)
    }

    /// Three pencil points spanning a subline through every pencil point of
    /// `pts` seen from v, if one exists.
    fn cover_from(&self, v: &ProjPoint, pts: &[ProjPoint]) -> Option<[ProjPoint; 3]> {
        let mut ys: Vec<ProjPoint> = Vec::with_capacity(pts.len());
        for p in pts {
            if let Some(y) = self.pencil_coord(v, p) {
                if !ys.contains(&y) {
                    if ys.len() >= 3 && !self.pencil.on_subline(&ys[0].0, &ys[1].0, &ys[2].0, &y.0)
                    {
                        return None;
                    }
                    ys.push(y);
                }
            }
        }
        if ys.len() < 3 {
            let mut extra = self.pencil.space.points();
            while ys.len() < 3 {
                let y = extra.next().expect("PG(1) has at least three points");
                if !ys.contains(&y) {
                    ys.push(y);
                }
            }
        }
        Some([ys[0].clone(), ys[1].clone(), ys[2].clone()])
    }

    /// A degenerate Hermitian curve through all the points, with least vertex.
    pub fn curve_cover(&self, pts: &[ProjPoint]) -> Option<DegHermitianCurve> {
        self.plane.points().find_map(|v| {
            let [a, b, c] = self.cover_from(&v, pts)?;
            Some(self.curve(&v, &a, &b, &c).expect("distinct pencil points"))
        })
    }

    pub fn is_covered(&self, pts: &[ProjPoint]) -> bool {
        self.plane
            .points()
            .any(|v| self.cover_from(&v, pts).is_some())
    }

    fn collinear(&self, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
        linalg::rank(self.field(), &[a.0.clone(), b.0.clone(), c.0.clone()]) < 3
    }

    /// No three of the points on a line.
    pub fn is_arc(&self, pts: &[ProjPoint]) -> bool {
        let n = pts.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| (j + 1..n).all(|k| !self.collinear(&pts[i], &pts[j], &pts[k])))
        })
    }

    /// (a,b,c) ↦ (c,a,b).
    pub fn cycle(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint(vec![p.0[2], p.0[0], p.0[1]])
    }

    /// The frame together with the orbit of (1, x, ξx) under the coordinate cycle.
    pub fn frame_with_orbit(&self, x: u32, xi: u32) -> Vec<ProjPoint> {
        let f = self.field();
        let p5 = ProjPoint(vec![1, x, f.mul(xi, x)]);
        let p6 = self.plane.point_unchecked(self.cycle(&p5).0);
        let p7 = self.plane.point_unchecked(self.cycle(&p6).0);
        let mut pts = self.frame().to_vec();
        pts.extend([p5, p6, p7]);
        pts
    }

    /// Values of ξ excluded for a given x.
    pub fn forbidden_xi(&self, x: u32) -> BTreeSet<u32> {
        let f = self.field();
        let q = self.q as u64;
        let m1 = f.neg(1);
        let mut out = BTreeSet::new();
        let unitary: Vec<u32> = f
            .elements()
            .filter(|&a| f.pow(a, q + 1) == 1 && a != 1 && a != m1)
            .collect();
        if x != 1 && x != m1 {
            for &a in &unitary {
                let den = f.mul(x, f.sub(a, 1));
                out.insert(f.mul(f.sub(a, x), f.inv_nz(den)));
            }
            let m2 = f.neg(f.add(1, 1));
            for a in f.elements().filter(|&a| a != 0 && a != m2) {
                let aq = self.conj(a);
                if f.add(f.add(f.mul(aq, a), aq), a) == 0 {
                    let den = f.mul(aq, f.add(1, x));
                    if den != 0 {
                        out.insert(f.neg(f.inv_nz(den)));
                    }
                }
            }
        } else if x == m1 && self.q % 2 == 1 {
            for &a in &unitary {
                out.insert(f.mul(f.add(1, a), f.inv_nz(f.sub(1, a))));
            }
        }
        out
    }

    /// Candidate (x, ξ) pairs in lexicographic order.
    pub fn seven_point_candidates(&self) -> Vec<(u32, u32)> {
        let f = self.field();
        let xs: Vec<u32> = self
            .subfield()
            .iter()
            .copied()
            .filter(|&x| x != 0 && f.pow(x, 3) != 1)
            .collect();
        let mut out = Vec::new();
        for x in xs {
            let bad = self.forbidden_xi(x);
            for xi in f
                .elements()
                .filter(|&a| !self.pencil.in_sub(a) && !bad.contains(&a))
            {
                out.push((x, xi));
            }
        }
        out
    }

    fn certified(&self, pts: &[ProjPoint], need_arc: bool) -> bool {
        let distinct = pts.iter().collect::<HashSet<_>>().len() == pts.len();
        distinct
            && self.plane.span_rank(pts).is_ok_and(|r| r == 3)
            && (!need_arc || self.is_arc(pts))
            && !self.is_covered(pts)
    }

    /// The first certified seven-point configuration.
    pub fn seven_point_search(&self) -> Result<SevenPointConfig> {
        let cands = self.seven_point_candidates();
        if !cands.is_empty() {
            let hit = cands.par_iter().find_map_first(|&(x, xi)| {
                let pts = self.frame_with_orbit(x, xi);
                self.certified(&pts, true).then_some((x, xi, pts))
            });
            return match hit {
                Some((x, xi, points)) => Ok(SevenPointConfig {
                    x: Some(x),
                    xi: Some(xi),
                    generic: false,
                    arc: true,
                    points,
                }),
                None => Err(Error::SearchExhausted(format!(
                    "no certified (x, xi) for q = {}",
                    self.q
                ))),
            };
        }
        self.generic_seven_point_search()
    }

    /// Frame plus a three-point orbit of the coordinate cycle; an arc is
    /// preferred, and when none exists the collinearity condition is dropped.
    pub fn generic_seven_point_search(&self) -> Result<SevenPointConfig> {
        let frame = self.frame();
        let orbits: Vec<Vec<ProjPoint>> = self
            .plane
            .points()
            .filter_map(|p| {
                let p2 = self.plane.point_unchecked(self.cycle(&p).0);
                let p3 = self.plane.point_unchecked(self.cycle(&p2).0);
                let orb = [p.clone(), p2.clone(), p3.clone()];
                let fresh = p < p2 && p < p3 && p2 != p3 && orb.iter().all(|o| !frame.contains(o));
                fresh.then(|| orb.to_vec())
            })
            .collect();
        for need_arc in [true, false] {
            let hit = orbits.par_iter().find_map_first(|orb| {
                let mut pts = frame.to_vec();
                pts.extend(orb.iter().cloned());
                self.certified(&pts, need_arc).then_some(pts)
            });
            if let Some(points) = hit {
                let arc = self.is_arc(&points);
                return Ok(SevenPointConfig {
                    x: None,
                    xi: None,
                    generic: true,
                    arc,
                    points,
                });
            }
        }
        Err(Error::SearchExhausted(format!(
            "no generic seven-point configuration for q = {}",
            self.q
        )))
    }

    /// Number of pairs (δ, t), δ ∈ GF(q)∖{0,1}, t ∈ GF(q²)∖GF(q), with
    /// δt^{q+1} + (δ−1)(t^q+t) − 1 = 0.
    pub fn sigma_count(&self) -> usize {
        let f = self.field();
        let mut n = 0;
        for &d in self.subfield().iter().filter(|&&d| d > 1) {
            for t in f.elements().filter(|&t| !self.pencil.in_sub(t)) {
                let tq = self.conj(t);
                let v = f.add(f.mul(d, f.mul(tq, t)), f.mul(f.sub(d, 1), f.add(tq, t)));
                if v == 1 {
                    n += 1;
                }
            }
        }
        n
    }
}
