//! Builders for the cutting blocking set families, with their certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finfield::{field_create, parse_prime_power, Embedding, Field};
use crate::hermitian::{HermitianPlane, SevenPointConfig};
use crate::projgeom::{
    LineClass, PointClass, PointSet, PointSetJson, ProjLine, ProjPoint, ProjSpace, SingerModel,
    Subgeometry,
};
use crate::verify::{self, Combinations, CuttingCertificate, MinimalityCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    FourLines,
    TripleSubgeometry,
    SevenLines,
    NrcTangents,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::FourLines => "pg3q-4lines",
            Family::TripleSubgeometry => "pg3q3-subgeo",
            Family::SevenLines => "pg5q-7lines",
            Family::NrcTangents => "nrc",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        [
            Family::FourLines,
            Family::TripleSubgeometry,
            Family::SevenLines,
            Family::NrcTangents,
        ]
        .into_iter()
        .find(|f| f.tag() == s)
        .ok_or_else(|| Error::Malformed(format!("unknown family {s:?}")))
    }
}

/// Cutting scan, and the minimality scan when the set is cutting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    pub cutting: CuttingCertificate,
    pub minimal: Option<MinimalityCertificate>,
}

impl Certificates {
    pub fn compute(set: &PointSet) -> Result<Certificates> {
        let cutting = verify::is_cutting(set)?;
        let minimal = if cutting.verdict {
            Some(verify::is_minimal_cutting(set)?)
        } else {
            None
        };
        Ok(Certificates { cutting, minimal })
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal.as_ref().is_some_and(|m| m.verdict)
    }

    pub fn to_json(&self) -> CertificatesJson {
        CertificatesJson {
            cutting: self.cutting.verdict,
            minimal: self.minimal.as_ref().map(|m| m.verdict),
            scan: ScanJson {
                hyperplanes: self.cutting.scanned,
                min_intersection_rank: self.cutting.min_rank,
            },
            cutting_witness: self.cutting.witness.as_ref().map(|h| h.0.clone()),
            minimality_witnesses: self.minimal.as_ref().map(|m| {
                m.witnesses
                    .iter()
                    .map(|w| w.as_ref().map(|h| h.0.clone()))
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanJson {
    pub hyperplanes: u64,
    pub min_intersection_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatesJson {
    pub cutting: bool,
    pub minimal: Option<bool>,
    pub scan: ScanJson,
    pub cutting_witness: Option<Vec<u32>>,
    pub minimality_witnesses: Option<Vec<Option<Vec<u32>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametersJson {
    pub q: String,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub choices: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub family: String,
    pub parameters: ParametersJson,
    pub set: PointSetJson,
    pub lines: Vec<[Vec<u32>; 2]>,
    pub subgeometries: Vec<PointSetJson>,
    pub certificates: CertificatesJson,
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub family: Family,
    pub q: String,
    pub r: usize,
    pub k: Option<usize>,
    /// Free choices made by the builder, for reproducibility.
    pub choices: BTreeMap<String, Value>,
    pub set: PointSet,
    pub lines: Vec<ProjLine>,
    pub subgeometries: Vec<PointSet>,
    pub certificates: Certificates,
}

impl ConstructionReport {
    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            family: self.family.tag().to_string(),
            parameters: ParametersJson {
                q: self.q.clone(),
                r: self.r,
                k: self.k,
                choices: self.choices.clone(),
            },
            set: self.set.to_json(),
            lines: self.lines.iter().map(|l| l.rows.clone()).collect(),
            subgeometries: self.subgeometries.iter().map(PointSet::to_json).collect(),
            certificates: self.certificates.to_json(),
        }
    }
}

fn q_label(f: &Field) -> String {
    format!("{}^{}", f.p(), f.h())
}

fn union_of_lines(space: &ProjSpace, lines: &[ProjLine]) -> Result<PointSet> {
    let f = space.field();
    PointSet::from_points_dedup(space.clone(), lines.iter().flat_map(|l| l.points(f)))
}

fn points_json(pts: &[ProjPoint]) -> Value {
    json!(pts.iter().map(|p| p.0.clone()).collect::<Vec<_>>())
}

// ---------------------------------------------------------------- field reduction

/// The map PG(2,q²) → lines of PG(5,q) induced by GF(q²) = GF(q) ⊕ GF(q)ε.
#[derive(Clone, Debug)]
pub struct FieldReduction {
    pub plane: ProjSpace,
    pub target: ProjSpace,
    emb: Embedding,
    /// The generator of GF(q²), as basis element.
    pub eps: u32,
    sub_h: u32,
    inv_diff: u32,
}

impl FieldReduction {
    pub fn new(p: u32, h: u32) -> Result<FieldReduction> {
        let small = field_create(p, h)?;
        let big = field_create(p, 2 * h)?;
        let emb = Embedding::new(&small, &big)?;
        let eps = big.generator();
        let diff = big.sub(eps, big.frobenius(eps, h));
        let inv_diff = big.inv(diff)?;
        Ok(FieldReduction {
            plane: ProjSpace::new(2, big)?,
            target: ProjSpace::new(5, small)?,
            emb,
            eps,
            sub_h: h,
            inv_diff,
        })
    }

    /// x = x₀ + x₁ε with x₀, x₁ ∈ GF(q), as codes of GF(q).
    pub fn split(&self, x: u32) -> (u32, u32) {
        let f = self.plane.field();
        let x1 = f.mul(f.sub(x, f.frobenius(x, self.sub_h)), self.inv_diff);
        let x0 = f.sub(x, f.mul(x1, self.eps));
        (
            self.emb.restrict(x0).expect("in GF(q)"),
            self.emb.restrict(x1).expect("in GF(q)"),
        )
    }

    /// (a,b,c) ↦ (a₀,a₁,b₀,b₁,c₀,c₁).
    pub fn expand(&self, v: &[u32]) -> Vec<u32> {
        v.iter()
            .flat_map(|&x| {
                let (a, b) = self.split(x);
                [a, b]
            })
            .collect()
    }

    /// φ(P): the GF(q)-span of P and εP.
    pub fn phi(&self, p: &ProjPoint) -> ProjLine {
        let f = self.plane.field();
        let ep: Vec<u32> = p.0.iter().map(|&x| f.mul(self.eps, x)).collect();
        ProjLine::from_rows(self.target.field(), &self.expand(&p.0), &self.expand(&ep))
            .expect("φ(P) is a line")
    }

    /// The Desarguesian spread, in the order of the points of PG(2,q²).
    pub fn spread(&self) -> Vec<ProjLine> {
        self.plane.points().map(|p| self.phi(&p)).collect()
    }
}

pub fn field_reduction(p: u32, h: u32) -> Result<(FieldReduction, Vec<ProjLine>)> {
    let fr = FieldReduction::new(p, h)?;
    let spread = fr.spread();
    Ok((fr, spread))
}

// ---------------------------------------------------------------- four lines

/// Three lines of one regulus of X₁X₄ = X₂X₃ together with the least
/// external line.
pub fn four_lines(p: u32, h: u32) -> Result<(ProjSpace, Vec<ProjLine>)> {
    let f = field_create(p, h)?;
    let space = ProjSpace::new(3, f.clone())?;
    let regulus_line = |a: u32, b: u32| {
        ProjLine::from_rows(&f, &[a, 0, b, 0], &[0, a, 0, b]).expect("regulus line")
    };
    let mut lines = vec![regulus_line(1, 0), regulus_line(0, 1), regulus_line(1, 1)];
    let on_quadric = |v: &[u32]| f.mul(v[0], v[3]) == f.mul(v[1], v[2]);
    let ext = space
        .lines()
        .into_iter()
        .find(|l| l.points(&f).iter().all(|pt| !on_quadric(&pt.0)))
        .ok_or_else(|| Error::Inconsistency("no line external to the hyperbolic quadric".into()))?;
    lines.push(ext);
    Ok((space, lines))
}

pub fn construct_pg3q_four_lines(p: u32, h: u32) -> Result<ConstructionReport> {
    let (space, lines) = four_lines(p, h)?;
    let set = union_of_lines(&space, &lines)?;
    let certificates = Certificates::compute(&set)?;
    let mut choices = BTreeMap::new();
    choices.insert("regulus".into(), json!([[1, 0], [0, 1], [1, 1]]));
    choices.insert("external_line".into(), json!(lines[3].rows));
    Ok(ConstructionReport {
        family: Family::FourLines,
        q: q_label(space.field()),
        r: 3,
        k: None,
        choices,
        set,
        lines,
        subgeometries: vec![],
        certificates,
    })
}

// ---------------------------------------------------------------- three subgeometries

/// The three subgeometries of PG(3,q³) and the choices leading to them.
pub struct TripleSubgeometry {
    pub model: SingerModel,
    /// Index of R₁ among the non-spread line orbits of Σ₁.
    pub orbit_index: usize,
    pub r1: Vec<ProjLine>,
    pub ell: ProjLine,
    pub l_point: ProjPoint,
    pub p_point: ProjPoint,
    /// Lines joining a point of Σ₁ to a point of Σ₂, outside Σ₁.
    pub joining: Vec<ProjLine>,
    pub sigma: [Subgeometry; 3],
}

impl TripleSubgeometry {
    pub fn union(&self) -> Result<PointSet> {
        let s = &self.sigma;
        s[0].points.union(&s[1].points)?.union(&s[2].points)
    }
}

/// Builds Σ₁ ∪ Σ₂ ∪ Σ₃ using the `orbit_index`-th non-spread line orbit.
pub fn triple_subgeometry(p: u32, h: u32, orbit_index: usize) -> Result<TripleSubgeometry> {
    let model = SingerModel::new(p, h)?;
    let k = model.k().clone();
    let orbits = model.line_orbits();
    let r1 = orbits.others.get(orbit_index).cloned().ok_or_else(|| {
        Error::Precondition(format!(
            "there are only {} non-spread orbits",
            orbits.others.len()
        ))
    })?;
    let ell = r1[0].clone();
    let sigma1 = model.sigma1.clone();
    let l_point = ell
        .points(&k)
        .into_iter()
        .find(|pt| !sigma1.points.contains(pt))
        .ok_or_else(|| Error::Inconsistency("extended line inside Σ₁".into()))?;
    let sigma2 = model.subgeometry_of(&l_point)?;

    let mut all: BTreeSet<ProjLine> = BTreeSet::new();
    for a in sigma1.points.points() {
        for b in sigma2.points.points() {
            all.insert(model.space.line_through(a, b)?);
        }
    }
    let rational: BTreeSet<ProjLine> = model.rational_lines().into_iter().collect();
    let joining: Vec<ProjLine> = all
        .iter()
        .filter(|l| !rational.contains(*l))
        .cloned()
        .collect();

    let n = model.space.num_points() as usize;
    let mut marked = vec![false; n];
    for l in r1.iter().chain(&joining) {
        for pt in l.points(&k) {
            marked[model.space.rank_of(&pt) as usize] = true;
        }
    }
    let mut p_point = None;
    for (i, pt) in model.space.points().enumerate() {
        if !marked[i] && model.classify_point(&pt, &sigma1)? == PointClass::O3 {
            p_point = Some(pt);
            break;
        }
    }
    let p_point = p_point.ok_or_else(|| {
        Error::Inconsistency("every O3 point lies on a line of R₁ or a joining line".into())
    })?;
    let sigma3 = model.subgeometry_of(&p_point)?;
    Ok(TripleSubgeometry {
        orbit_index,
        r1,
        ell,
        l_point,
        p_point,
        joining,
        sigma: [sigma1, sigma2, sigma3],
        model,
    })
}

pub fn construct_pg3q3_subgeometries(p: u32, h: u32) -> Result<ConstructionReport> {
    let t = triple_subgeometry(p, h, 0)?;
    let set = t.union()?;
    let certificates = Certificates::compute(&set)?;
    let mut choices = BTreeMap::new();
    choices.insert("quartic".into(), json!(t.model.quartic));
    choices.insert("orbit_index".into(), json!(t.orbit_index));
    choices.insert("ell".into(), json!(t.ell.rows));
    choices.insert("L".into(), json!(t.l_point.0));
    choices.insert("P".into(), json!(t.p_point.0));
    Ok(ConstructionReport {
        family: Family::TripleSubgeometry,
        q: format!("{p}^{h}"),
        r: 3,
        k: None,
        choices,
        set,
        lines: vec![],
        subgeometries: t.sigma.iter().map(|s| s.points.clone()).collect(),
        certificates,
    })
}

/// Class of a line relative to Σ₁ of the model (convenience for censuses).
pub fn line_class(model: &SingerModel, l: &ProjLine) -> Result<LineClass> {
    model.classify_line(l, &model.sigma1)
}

// ---------------------------------------------------------------- seven lines

/// The seven spread lines over a certified seven-point configuration.
pub fn seven_lines(p: u32, h: u32) -> Result<(SevenPointConfig, FieldReduction, Vec<ProjLine>)> {
    let hp = HermitianPlane::new(p, h)?;
    let cfg = hp.seven_point_search()?;
    let fr = FieldReduction::new(p, h)?;
    let lines = cfg.points.iter().map(|pt| fr.phi(pt)).collect();
    Ok((cfg, fr, lines))
}

pub fn construct_pg5q_seven_lines(p: u32, h: u32) -> Result<ConstructionReport> {
    let (cfg, fr, lines) = seven_lines(p, h)?;
    let set = union_of_lines(&fr.target, &lines)?;
    let certificates = Certificates::compute(&set)?;
    let mut choices = BTreeMap::new();
    choices.insert("eps".into(), json!(fr.eps));
    choices.insert("x".into(), json!(cfg.x));
    choices.insert("xi".into(), json!(cfg.xi));
    choices.insert("generic".into(), json!(cfg.generic));
    choices.insert("plane_points".into(), points_json(&cfg.points));
    Ok(ConstructionReport {
        family: Family::SevenLines,
        q: format!("{p}^{h}"),
        r: 5,
        k: Some(7),
        choices,
        set,
        lines,
        subgeometries: vec![],
        certificates,
    })
}

// ---------------------------------------------------------------- normal rational curve

/// Points (1,t,…,t^r) for t in code order, then (0,…,0,1).
pub fn nrc_points(space: &ProjSpace) -> Vec<ProjPoint> {
    let f = space.field();
    let r = space.r();
    let mut out: Vec<ProjPoint> = f
        .elements()
        .map(|t| ProjPoint((0..=r).map(|i| f.pow(t, i as u64)).collect()))
        .collect();
    let mut inf = vec![0u32; r + 1];
    inf[r] = 1;
    out.push(ProjPoint(inf));
    out
}

/// Tangent lines to the normal rational curve, indexed like [`nrc_points`].
pub fn nrc_tangents(space: &ProjSpace) -> Vec<ProjLine> {
    let f = space.field();
    let r = space.r();
    let int = |n: usize| (n as u32) % f.p();
    let mut out: Vec<ProjLine> = f
        .elements()
        .map(|t| {
            let pt: Vec<u32> = (0..=r).map(|i| f.pow(t, i as u64)).collect();
            let d: Vec<u32> = (0..=r)
                .map(|i| {
                    if i == 0 {
                        0
                    } else {
                        f.mul(int(i), f.pow(t, i as u64 - 1))
                    }
                })
                .collect();
            ProjLine::from_rows(f, &pt, &d).expect("tangent line")
        })
        .collect();
    let mut a = vec![0u32; r + 1];
    let mut b = vec![0u32; r + 1];
    a[r] = 1;
    b[r - 1] = 1;
    out.push(ProjLine::from_rows(f, &a, &b).expect("tangent at infinity"));
    out
}

pub fn nrc_tangent_lines(r: usize, q_spec: &str) -> Result<(ProjSpace, Vec<ProjLine>)> {
    let (p, h) = parse_prime_power(q_spec)?;
    if r < 2 {
        return Err(Error::Precondition("the curve needs r ≥ 2".into()));
    }
    let space = ProjSpace::new(r, field_create(p, h)?)?;
    if p as usize <= r {
        // derivative points collapse in small characteristic
        return Err(Error::Precondition(format!(
            "tangent lines need p > r (p = {p}, r = {r})"
        )));
    }
    let lines = nrc_tangents(&space);
    Ok((space, lines))
}

/// How to pick tangent lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangentSelection {
    /// The first 2r−1 tangents, under the hypotheses p > r and q > 2r−1.
    Guaranteed,
    Indices(Vec<usize>),
    /// First k-subset (lexicographic) whose union is a minimal cutting set.
    Search(usize),
}

pub fn construct_nrc_tangents(
    r: usize,
    q_spec: &str,
    sel: TangentSelection,
) -> Result<ConstructionReport> {
    let (space, tangents) = nrc_tangent_lines(r, q_spec)?;
    let q = space.q() as usize;
    let (idx, certificates, set) = match sel {
        TangentSelection::Guaranteed => {
            if q < 2 * r {
                return Err(Error::Precondition(format!(
                    "guaranteed mode needs q > 2r − 1 = {}",
                    2 * r - 1
                )));
            }
            let idx: Vec<usize> = (0..2 * r - 1).collect();
            let lines: Vec<ProjLine> = idx.iter().map(|&i| tangents[i].clone()).collect();
            let set = union_of_lines(&space, &lines)?;
            (idx, Certificates::compute(&set)?, set)
        }
        TangentSelection::Indices(idx) => {
            if idx.is_empty() || idx.iter().any(|&i| i >= tangents.len()) {
                return Err(Error::Precondition(format!(
                    "tangent indices must lie in 0..{}",
                    tangents.len()
                )));
            }
            let lines: Vec<ProjLine> = idx.iter().map(|&i| tangents[i].clone()).collect();
            let set = union_of_lines(&space, &lines)?;
            (idx, Certificates::compute(&set)?, set)
        }
        TangentSelection::Search(k) => {
            if k == 0 || k > tangents.len() {
                return Err(Error::Precondition(format!(
                    "k must lie in 1..={}",
                    tangents.len()
                )));
            }
            let mut found = None;
            for idx in Combinations::new(tangents.len(), k) {
                let lines: Vec<ProjLine> = idx.iter().map(|&i| tangents[i].clone()).collect();
                let set = union_of_lines(&space, &lines)?;
                if verify::first_cutting_violation(&set).is_some() {
                    continue;
                }
                let cert = Certificates::compute(&set)?;
                if cert.is_minimal() {
                    found = Some((idx, cert, set));
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::SearchExhausted(format!("no {k} tangent lines form a minimal cutting set"))
            })?
        }
    };
    let mut choices = BTreeMap::new();
    choices.insert("tangents".into(), json!(idx));
    Ok(ConstructionReport {
        family: Family::NrcTangents,
        q: q_label(space.field()),
        r,
        k: Some(idx.len()),
        choices,
        lines: idx.iter().map(|&i| tangents[i].clone()).collect(),
        set,
        subgeometries: vec![],
        certificates,
    })
}

/// Field handle of a report's ambient space.
pub fn report_field(rep: &ConstructionReport) -> &Arc<Field> {
    rep.set.space().field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn spread_partitions_pg5() {
        for (p, h) in [(2, 1), (3, 1)] {
            let (fr, spread) = field_reduction(p, h).unwrap();
            let q = fr.target.q() as u64;
            assert_eq!(spread.len() as u64, q.pow(4) + q * q + 1);
            let f = fr.target.field();
            let mut seen = BTreeSet::new();
            for l in &spread {
                for pt in l.points(f) {
                    assert!(seen.insert(pt));
                }
            }
            assert_eq!(seen.len() as u64, fr.target.num_points());
        }
    }

    #[test]
    fn expand_is_linear_and_injective() {
        let fr = FieldReduction::new(3, 1).unwrap();
        let big = fr.plane.field().clone();
        for x in big.elements() {
            let (a, b) = fr.split(x);
            let back = big.add(fr.emb.embed(a), big.mul(fr.emb.embed(b), fr.eps));
            assert_eq!(back, x);
        }
    }

    #[test]
    fn solid_of_two_spread_lines_holds_q2_plus_1() {
        let (fr, spread) = field_reduction(2, 1).unwrap();
        let f = fr.target.field();
        let (a, b) = (&spread[0], &spread[5]);
        let solid = [
            a.rows[0].clone(),
            a.rows[1].clone(),
            b.rows[0].clone(),
            b.rows[1].clone(),
        ];
        assert_eq!(linalg::rank(f, &solid), 4);
        let inside = spread
            .iter()
            .filter(|l| {
                let mut rows = solid.to_vec();
                rows.extend(l.rows.iter().cloned());
                linalg::rank(f, &rows) == 4
            })
            .count();
        assert_eq!(inside, 5);
    }

    #[test]
    fn four_lines_q3() {
        let rep = construct_pg3q_four_lines(3, 1).unwrap();
        assert_eq!(rep.set.len(), 16);
        assert!(rep.certificates.cutting.verdict);
        assert!(rep.certificates.is_minimal());
        let f = report_field(&rep).clone();
        // external line misses the quadric
        for pt in rep.lines[3].points(&f) {
            assert_ne!(f.mul(pt.0[0], pt.0[3]), f.mul(pt.0[1], pt.0[2]));
        }
    }

    #[test]
    fn four_lines_q2_is_cutting() {
        let rep = construct_pg3q_four_lines(2, 1).unwrap();
        assert_eq!(rep.set.len(), 12);
        assert!(rep.certificates.cutting.verdict);
    }

    #[test]
    fn transversals_lie_on_the_quadric() {
        let (space, lines) = four_lines(3, 1).unwrap();
        let f = space.field();
        let mut count = 0;
        for l in space.lines() {
            let meets_all = lines[..3].iter().all(|m| {
                let rows = [
                    l.rows[0].clone(),
                    l.rows[1].clone(),
                    m.rows[0].clone(),
                    m.rows[1].clone(),
                ];
                linalg::rank(f, &rows) == 3
            });
            if meets_all {
                count += 1;
                assert!(l
                    .points(f)
                    .iter()
                    .all(|pt| f.mul(pt.0[0], pt.0[3]) == f.mul(pt.0[1], pt.0[2])));
            }
        }
        assert_eq!(count, 4);
    }

    #[test]
    fn triple_subgeometry_q2() {
        let t = triple_subgeometry(2, 1, 0).unwrap();
        assert_eq!(t.r1.len() + t.joining.len(), 195);
        assert_eq!(t.joining.len(), 180);
        let k = t.model.k().clone();
        for l in &t.joining {
            assert_eq!(line_class(&t.model, l).unwrap(), LineClass::L2);
            assert_eq!(t.sigma[0].points.meet_line(l).len(), 1);
            assert_eq!(t.sigma[1].points.meet_line(l).len(), 1);
        }
        // lines of Σ₂ miss Σ₁
        let w = t.sigma[1].witness.as_ref().unwrap();
        for l in t.model.rational_lines() {
            let img = w.apply_line(&k, &l);
            assert!(t.sigma[0].points.meet_line(&img).is_empty());
        }
        let rep = construct_pg3q3_subgeometries(2, 1).unwrap();
        assert_eq!(rep.set.len(), 45);
        assert!(rep.certificates.cutting.verdict);
        assert!(rep.certificates.is_minimal());
    }

    #[test]
    fn seven_lines_q3() {
        let rep = construct_pg5q_seven_lines(3, 1).unwrap();
        assert_eq!(rep.set.len(), 28);
        assert!(rep.certificates.cutting.verdict);
        assert!(rep.certificates.is_minimal());
        let f = report_field(&rep).clone();
        for (i, a) in rep.lines.iter().enumerate() {
            for b in &rep.lines[i + 1..] {
                let rows = [
                    a.rows[0].clone(),
                    a.rows[1].clone(),
                    b.rows[0].clone(),
                    b.rows[1].clone(),
                ];
                assert_eq!(linalg::rank(&f, &rows), 4);
            }
        }
    }

    #[test]
    fn seven_lines_q2_has_no_configuration() {
        assert!(matches!(
            construct_pg5q_seven_lines(2, 1),
            Err(Error::SearchExhausted(_))
        ));
    }

    #[test]
    fn nrc_tangents_are_disjoint_and_general() {
        let (space, lines) = nrc_tangent_lines(4, "7").unwrap();
        let f = space.field();
        let mut seen = BTreeSet::new();
        for l in &lines {
            for pt in l.points(f) {
                assert!(seen.insert(pt));
            }
        }
        let pts = nrc_points(&space);
        for idx in Combinations::new(pts.len(), 5) {
            let rows: Vec<Vec<u32>> = idx.iter().map(|&i| pts[i].0.clone()).collect();
            assert_eq!(linalg::rank(f, &rows), 5);
        }
        for (pt, l) in pts.iter().zip(&lines) {
            assert!(l.contains(f, pt));
        }
    }

    #[test]
    fn nrc_guaranteed_small() {
        let rep = construct_nrc_tangents(3, "7", TangentSelection::Guaranteed).unwrap();
        assert_eq!(rep.set.len(), 5 * 8);
        assert!(rep.certificates.cutting.verdict);
        assert!(construct_nrc_tangents(3, "5", TangentSelection::Guaranteed).is_err());
        assert!(nrc_tangent_lines(3, "3").is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let rep = construct_pg3q_four_lines(3, 1).unwrap();
        let j = rep.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: ReportJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.family, "pg3q-4lines");
        let set = PointSet::from_json(&back.set).unwrap();
        assert_eq!(
            Certificates::compute(&set).unwrap().to_json(),
            j.certificates
        );
    }

    #[test]
    fn family_tags_parse() {
        for f in [
            Family::FourLines,
            Family::TripleSubgeometry,
            Family::SevenLines,
            Family::NrcTangents,
        ] {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
        }
        assert!("pg9".parse::<Family>().is_err());
    }
}
