//! Sublines, clubs and splashes of a projective line PG(1,q^e).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finfield::{field_create, Field};
use crate::linalg;
use crate::projgeom::{NormIter, ProjLine, ProjPoint, ProjSpace};

/// PG(1,Q) with Q = q^e, together with its subfield GF(q).
#[derive(Clone, Debug)]
pub struct Pg1 {
    pub space: ProjSpace,
    /// Degree of GF(q) over the prime field.
    pub sub_h: u32,
    pub q0: u32,
    sub: Vec<u32>,
    is_sub: Vec<bool>,
}

/// A q-order subline, points sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subline {
    pub points: Vec<ProjPoint>,
}

impl Subline {
    /// The three lexicographically least points.
    pub fn canonical_triple(&self) -> [&ProjPoint; 3] {
        [&self.points[0], &self.points[1], &self.points[2]]
    }
    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }
    pub fn meet(&self, other: &Subline) -> usize {
        self.points.iter().filter(|p| other.contains(p)).count()
    }
}

/// 2×2 determinant of two points of PG(1).
#[inline]
pub fn det2(f: &Field, a: &[u32], b: &[u32]) -> u32 {
    f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))
}

impl Pg1 {
    /// PG(1,q^e) for q = p^h.
    pub fn new(p: u32, h: u32, e: u32) -> Result<Pg1> {
        if e < 2 {
            return Err(Error::Precondition(
                "extension degree must be at least 2".into(),
            ));
        }
        let big = field_create(p, h * e)?;
        Pg1::over(big, h)
    }

    /// PG(1,F) with F a canonical field containing GF(p^sub_h).
    pub fn over(big: Arc<Field>, sub_h: u32) -> Result<Pg1> {
        let sub = big.subfield_elements(sub_h)?;
        let mut is_sub = vec![false; big.order() as usize];
        for &c in &sub {
            is_sub[c as usize] = true;
        }
        Ok(Pg1 {
            q0: sub.len() as u32,
            space: ProjSpace::new(1, big)?,
            sub_h,
            sub,
            is_sub,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        self.space.field()
    }
    pub fn subfield(&self) -> &[u32] {
        &self.sub
    }
    #[inline]
    pub fn in_sub(&self, a: u32) -> bool {
        self.is_sub[a as usize]
    }

    pub fn points(&self) -> Vec<ProjPoint> {
        self.space.points().collect()
    }

    /// Whether p4 lies on the subline through the distinct points p1, p2, p3
    /// (cross-ratio test).
    pub fn on_subline(&self, p1: &[u32], p2: &[u32], p3: &[u32], p4: &[u32]) -> bool {
        let f = self.field();
        let d14 = det2(f, p1, p4);
        if d14 == 0 {
            return true;
        }
        let num = f.mul(det2(f, p1, p3), det2(f, p2, p4));
        let den = f.mul(d14, det2(f, p2, p3));
        self.in_sub(f.mul(num, f.inv_nz(den)))
    }

    /// The unique subline through three distinct points.
    pub fn subline_through(&self, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<Subline> {
        let f = self.field();
        if a == b || a == c || b == c {
            return Err(Error::Degenerate(
                "a subline needs three distinct points".into(),
            ));
        }
        // c = λa + μb; the subline is {s·λa + t·μb : (s:t) ∈ PG(1,q)}
        let d = det2(f, &a.0, &b.0);
        let lam = f.div(det2(f, &c.0, &b.0), d)?;
        let mu = f.div(det2(f, &a.0, &c.0), d)?;
        let u: Vec<u32> = a.0.iter().map(|&x| f.mul(lam, x)).collect();
        let v: Vec<u32> = b.0.iter().map(|&x| f.mul(mu, x)).collect();
        let mut pts: Vec<ProjPoint> = NormIter::new(2, self.q0)
            .map(|st| {
                let (s, t) = (self.sub[st[0] as usize], self.sub[st[1] as usize]);
                self.space.point_unchecked(vec![
                    f.add(f.mul(s, u[0]), f.mul(t, v[0])),
                    f.add(f.mul(s, u[1]), f.mul(t, v[1])),
                ])
            })
            .collect();
        pts.sort_unstable();
        Ok(Subline { points: pts })
    }

    /// The subline {(1,a) : a ∈ GF(q)} ∪ {(0,1)}.
    pub fn canonical_subline(&self) -> Subline {
        let mut pts: Vec<ProjPoint> = self.sub.iter().map(|&a| ProjPoint(vec![1, a])).collect();
        pts.push(ProjPoint(vec![0, 1]));
        pts.sort_unstable();
        Subline { points: pts }
    }

    /// All q-order sublines, sorted.
    pub fn sublines(&self) -> Vec<Subline> {
        let pts = self.points();
        let n = pts.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = self
                        .subline_through(&pts[i], &pts[j], &pts[k])
                        .expect("distinct");
                    if s.points[0] == pts[i] && s.points[1] == pts[j] && s.points[2] == pts[k] {
                        out.push(s);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Sublines contained in a point set, sorted.
    pub fn sublines_in(&self, set: &[ProjPoint]) -> Vec<Subline> {
        let members: HashSet<&ProjPoint> = set.iter().collect();
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = self
                        .subline_through(&sorted[i], &sorted[j], &sorted[k])
                        .expect("distinct");
                    if s.points[0] == sorted[i]
                        && s.points[1] == sorted[j]
                        && s.points[2] == sorted[k]
                        && s.points.iter().all(|p| members.contains(p))
                    {
                        out.insert(s);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// All elements of PGL(2,Q) as normalized matrices [a, b, c, d].
    pub fn pgl2(&self) -> Vec<[u32; 4]> {
        let f = self.field();
        let q = f.order();
        let mut out = Vec::with_capacity((q as usize).pow(3));
        for b in 0..q {
            for c in 0..q {
                let bc = f.mul(b, c);
                for d in 0..q {
                    if d != bc {
                        out.push([1, b, c, d]);
                    }
                }
            }
        }
        for c in 1..q {
            for d in 0..q {
                out.push([0, 1, c, d]);
            }
        }
        out
    }

    #[inline]
    pub fn apply(&self, g: &[u32; 4], p: &ProjPoint) -> ProjPoint {
        let f = self.field();
        let (x, y) = (p.0[0], p.0[1]);
        self.space.point_unchecked(vec![
            f.add(f.mul(g[0], x), f.mul(g[1], y)),
            f.add(f.mul(g[2], x), f.mul(g[3], y)),
        ])
    }

    pub fn apply_set(&self, g: &[u32; 4], pts: &[ProjPoint]) -> Vec<ProjPoint> {
        let mut v: Vec<ProjPoint> = pts.iter().map(|p| self.apply(g, p)).collect();
        v.sort_unstable();
        v
    }
}

/// A splash with its two families of sublines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splash {
    pub points: Vec<ProjPoint>,
    pub f1: Vec<Subline>,
    pub f2: Vec<Subline>,
}

impl Splash {
    pub fn sublines(&self) -> impl Iterator<Item = &Subline> {
        self.f1.iter().chain(&self.f2)
    }

    /// The family opposite to s, if s is one of the splash's sublines.
    pub fn opposite_family(&self, s: &Subline) -> Option<&[Subline]> {
        if self.f1.binary_search(s).is_ok() {
            Some(&self.f2)
        } else if self.f2.binary_search(s).is_ok() {
            Some(&self.f1)
        } else {
            None
        }
    }

    pub fn has_subline(&self, s: &Subline) -> bool {
        self.opposite_family(s).is_some()
    }

    /// Counts of opposite-family sublines meeting s in 1, 2 and 0 points.
    pub fn profile(&self, s: &Subline) -> Option<(usize, usize, usize)> {
        let opp = self.opposite_family(s)?;
        let mut c = (0, 0, 0);
        for t in opp {
            match s.meet(t) {
                1 => c.0 += 1,
                2 => c.1 += 1,
                0 => c.2 += 1,
                _ => {}
            }
        }
        Some(c)
    }
}

/// The splash S_x of PG(1,q³) with families built from the r_ξ / r'_ξ
/// parametrizations. Requires x ∉ GF(q).
pub fn splash_construct(pg: &Pg1, x: u32) -> Result<Splash> {
    let f = pg.field().clone();
    if f.h() != 3 * pg.sub_h {
        return Err(Error::Precondition("splashes live on PG(1,q³)".into()));
    }
    if x >= f.order() {
        return Err(Error::CodeOutOfRange {
            code: x as u64,
            order: f.order(),
        });
    }
    if pg.in_sub(x) {
        return Err(Error::Precondition("x must lie outside GF(q)".into()));
    }
    let hq = pg.sub_h;
    let fr = |a: u32| f.frobenius(a, hq);
    let xq = fr(x);
    // φ(z) = (z − z^q, x z^q − x^q z),  ψ(w) = (w^q − w, x w − x^q w^q)
    let phi = |z: u32| {
        let zq = fr(z);
        pg.space
            .point_unchecked(vec![f.sub(z, zq), f.sub(f.mul(x, zq), f.mul(xq, z))])
    };
    let psi = |w: u32| {
        let wq = fr(w);
        pg.space
            .point_unchecked(vec![f.sub(wq, w), f.sub(f.mul(x, w), f.mul(xq, wq))])
    };
    let mut points: Vec<ProjPoint> = (1..f.order())
        .map(phi)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    points.sort_unstable();
    let family = |map: &dyn Fn(u32) -> ProjPoint| -> Vec<Subline> {
        let mut fam = BTreeSet::new();
        for xi in 1..f.order() {
            let mut pts: Vec<ProjPoint> = pg
                .subfield()
                .iter()
                .map(|&a| map(f.mul(xi, f.add(x, a))))
                .collect();
            pts.push(map(xi));
            pts.sort_unstable();
            pts.dedup();
            fam.insert(Subline { points: pts });
        }
        fam.into_iter().collect()
    };
    let f1 = family(&phi);
    let f2 = family(&psi);
    let s = Splash { points, f1, f2 };
    let q = pg.q0 as usize;
    let n = q * q + q + 1;
    if s.points.len() != n
        || s.f1.len() != n
        || s.f2.len() != n
        || s.sublines().any(|l| l.points.len() != q + 1)
    {
        return Err(Error::Inconsistency(
            "splash parametrization produced unexpected sizes".into(),
        ));
    }
    Ok(s)
}

/// Least x ∈ GF(q³) \ GF(q).
pub fn default_splash_parameter(pg: &Pg1) -> u32 {
    (0..pg.field().order())
        .find(|&a| !pg.in_sub(a))
        .expect("proper extension")
}

/// Recover the two families of a splash from its point set: sublines inside
/// the set meeting in 0 or 2 points are forced into opposite families, and
/// the resulting graph is 2-coloured. Returns None if the grouping is not
/// determined (e.g. for q = 2, where every triple of points is a subline).
pub fn families_by_profile(pg: &Pg1, points: &[ProjPoint]) -> Option<(Vec<Subline>, Vec<Subline>)> {
    let subs = pg.sublines_in(points);
    let q = pg.q0 as usize;
    if subs.len() != 2 * (q * q + q + 1) {
        return None;
    }
    let n = subs.len();
    let mut colour = vec![None::<bool>; n];
    colour[0] = Some(false);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let ci = colour[i].unwrap();
        for j in 0..n {
            if i == j {
                continue;
            }
            let m = subs[i].meet(&subs[j]);
            if m == 0 || m == 2 {
                match colour[j] {
                    None => {
                        colour[j] = Some(!ci);
                        stack.push(j);
                    }
                    Some(cj) if cj == ci => return None,
                    _ => {}
                }
            }
        }
    }
    if colour.iter().any(Option::is_none) {
        return None;
    }
    let (a, b): (Vec<_>, Vec<_>) = subs
        .into_iter()
        .zip(colour)
        .partition(|(_, c)| *c == Some(false));
    let a: Vec<Subline> = a.into_iter().map(|x| x.0).collect();
    let b: Vec<Subline> = b.into_iter().map(|x| x.0).collect();
    // same-family sublines meet in exactly one point
    for fam in [&a, &b] {
        for i in 0..fam.len() {
            for j in i + 1..fam.len() {
                if fam[i].meet(&fam[j]) != 1 {
                    return None;
                }
            }
        }
    }
    Some((a, b))
}

/// The PGL(2,q³)-orbit of a splash, deduplicated by point set, sorted.
pub fn splash_orbit(pg: &Pg1, base: &Splash, max_group: u64) -> Result<Vec<Splash>> {
    let q = pg.field().order() as u64;
    let order = q * (q * q - 1);
    if order > max_group {
        return Err(Error::BudgetExceeded(format!(
            "PGL(2,{q}) has {order} elements, budget {max_group}"
        )));
    }
    let mut seen: HashMap<Vec<ProjPoint>, Splash> = HashMap::new();
    for g in pg.pgl2() {
        let pts = pg.apply_set(&g, &base.points);
        if seen.contains_key(&pts) {
            continue;
        }
        let map_fam = |fam: &[Subline]| {
            let mut v: Vec<Subline> = fam
                .iter()
                .map(|s| Subline {
                    points: pg.apply_set(&g, &s.points),
                })
                .collect();
            v.sort_unstable();
            v
        };
        let s = Splash {
            points: pts.clone(),
            f1: map_fam(&base.f1),
            f2: map_fam(&base.f2),
        };
        seen.insert(pts, s);
    }
    let mut out: Vec<Splash> = seen.into_values().collect();
    out.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(out)
}

/// Default group-size budget for orbit enumeration (covers q ≤ 3).
pub const DEFAULT_GROUP_BUDGET: u64 = 100_000;

/// Number of splashes having s as one of their sublines.
pub fn count_splashes_through(pg: &Pg1, s: &Subline, max_group: u64) -> Result<usize> {
    let base = splash_construct(pg, default_splash_parameter(pg))?;
    let orbit = splash_orbit(pg, &base, max_group)?;
    Ok(orbit.iter().filter(|z| z.has_subline(s)).count())
}

/// Projection of a subplane of PG(2,q³) from a point onto a line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Club {
    /// Points of the target line in line coordinates, sorted.
    pub points: Vec<ProjPoint>,
    pub head: ProjPoint,
    /// Images of the subplane's lines other than the one through the centre.
    pub sublines: Vec<Subline>,
}

fn cross(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    vec![
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

/// Project the canonical q-order subplane π₀ of PG(2,q³) from `centre` onto `m`.
/// The centre must lie on exactly one extended line of π₀ and not on m.
pub fn club_by_projection(pg: &Pg1, centre: &ProjPoint, m: &ProjLine) -> Result<Club> {
    let f = pg.field().clone();
    let sub = pg.subfield();
    let emb = |v: &[u32]| v.iter().all(|&c| pg.in_sub(c));
    if centre.0.len() != 3 || m.rows[0].len() != 3 {
        return Err(Error::DimensionMismatch(
            "club data must live in PG(2,q³)".into(),
        ));
    }
    if m.contains(&f, centre) {
        return Err(Error::Precondition(
            "the centre lies on the target line".into(),
        ));
    }
    // rational points and lines of π₀, in the big field's codes
    let rational: Vec<ProjPoint> = NormIter::new(3, pg.q0)
        .map(|v| ProjPoint(v.iter().map(|&i| sub[i as usize]).collect()))
        .collect();
    let rational_lines: Vec<Vec<u32>> = rational.iter().map(|p| p.0.clone()).collect();
    if emb(&centre.0) {
        return Err(Error::Precondition(
            "the centre lies in the subplane".into(),
        ));
    }
    let through: Vec<&Vec<u32>> = rational_lines
        .iter()
        .filter(|l| linalg::dot(&f, l, &centre.0) == 0)
        .collect();
    if through.len() != 1 {
        return Err(Error::Precondition(format!(
            "the centre lies on {} extended lines of the subplane, not one",
            through.len()
        )));
    }
    let r_dual = through[0].clone();
    let m_dual = {
        let mut v = cross(&f, &m.rows[0], &m.rows[1]);
        linalg::normalize(&f, &mut v);
        v
    };
    let pu = m.rows[0].iter().position(|&c| c != 0).unwrap();
    let pv = m.rows[1].iter().position(|&c| c != 0).unwrap();
    let to_line = |x: &[u32]| pg.space.point_unchecked(vec![x[pu], x[pv]]);
    let project = |p: &[u32]| {
        let l = cross(&f, &centre.0, p);
        to_line(&cross(&f, &l, &m_dual))
    };
    let head = to_line(&cross(&f, &r_dual, &m_dual));
    let mut points: Vec<ProjPoint> = rational
        .iter()
        .map(|p| project(&p.0))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    points.sort_unstable();
    let mut sublines = Vec::new();
    for l in rational_lines.iter().filter(|l| **l != r_dual) {
        let pts: BTreeSet<ProjPoint> = rational
            .iter()
            .filter(|p| linalg::dot(&f, l, &p.0) == 0)
            .map(|p| project(&p.0))
            .collect();
        sublines.push(Subline {
            points: pts.into_iter().collect(),
        });
    }
    sublines.sort_unstable();
    Ok(Club {
        points,
        head,
        sublines,
    })
}
