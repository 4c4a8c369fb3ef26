//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons.
//!
//! Runs without the libtest harness, so the report is always printed.
//! Criteria listed in `UNATTAINABLE` are expected to fail and are reported as
//! FAIL; the test only asserts that every other criterion passes and that the
//! listed ones still fail (so a fix forces the list to be updated).

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use cutblock::codes::{self, LinearCode, MinimalityMode, WeightDistribution};
use cutblock::constructions::{self, TangentSelection};
use cutblock::finfield::{field_create, Embedding};
use cutblock::hermitian::HermitianPlane;
use cutblock::linalg;
use cutblock::projgeom::{
    LineClass, PointClass, PointSet, ProjLine, ProjPoint, ProjSpace, SingerModel,
};
use cutblock::sublines::{
    count_splashes_through, default_splash_parameter, splash_construct, splash_orbit, Pg1,
    DEFAULT_GROUP_BUDGET,
};
use cutblock::verify::{self, Combinations};

/// Criterion ids known not to be attainable, with the reason printed beside FAIL.
const UNATTAINABLE: &[(&str, &str)] = &[
    (
        "2",
        "q=3,4: planes of the third subgeometry meeting the other two in one point each give intersection \
         q^2+q+3, i.e. weight 3q^3+2q^2+2q, which the stated support omits (at q=2 it coincides with 3q+3)",
    ),
    (
    "3",
    "q=2: every 7-subset of PG(2,4) lies on a degenerate Hermitian curve, so no seven-line set exists; \
     the stated A_6q = 7(q^2-5)(q^2-1) is -21 at q=2",
    ),
];

type Outcome = std::result::Result<(), String>;

struct Report {
    rows: Vec<(String, String, bool, Duration, String)>,
}

impl Report {
    fn run(&mut self, id: &str, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let r = f();
        let el = t.elapsed();
        let (ok, detail) = match r {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e),
        };
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{id}] {name} ({:.2}s){}",
            el.as_secs_f64(),
            if ok {
                String::new()
            } else {
                format!(": {detail}")
            }
        );
        self.rows
            .push((id.to_string(), name.to_string(), ok, el, detail));
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Outcome {
    let el = t.elapsed();
    check(el <= limit, || {
        format!(
            "{what} took {:.2}s, limit {:.0}s",
            el.as_secs_f64(),
            limit.as_secs_f64()
        )
    })
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn wd(pairs: &[(usize, i64)]) -> std::result::Result<WeightDistribution, String> {
    let mut m = WeightDistribution::new();
    for &(w, a) in pairs {
        if a < 0 {
            return Err(format!("predicted A_{w} = {a} is negative"));
        }
        if a > 0 {
            *m.entry(w).or_insert(0) += a as u64;
        }
    }
    Ok(m)
}

// ------------------------------------------------------------------ 1

fn crit1() -> Outcome {
    for q in [3u32, 4, 5, 7] {
        let (p, h) = if q == 4 { (2, 2) } else { (q, 1) };
        let t = Instant::now();
        let rep = constructions::construct_pg3q_four_lines(p, h).map_err(e)?;
        let qi = q as i64;
        check(rep.set.len() == 4 * (q as usize + 1), || {
            format!("q={q}: size {}", rep.set.len())
        })?;
        check(rep.certificates.cutting.verdict, || {
            format!("q={q}: not cutting")
        })?;
        check(rep.certificates.is_minimal(), || {
            format!("q={q}: not minimal")
        })?;
        let c = codes::code_from_pointset(&rep.set).map_err(e)?;
        let got = codes::weight_distribution(&c).map_err(e)?;
        let want = wd(&[
            (0, 1),
            (3 * q as usize, 4 * (qi * qi - 1)),
            (4 * q as usize, (qi * qi - 3) * (qi * qi - 1)),
        ])?;
        check(got == want, || {
            format!("q={q}: weights {got:?}, expected {want:?}")
        })?;
        check(got.values().sum::<u64>() == (q as u64).pow(4), || {
            format!("q={q}: total")
        })?;
        within(t, Duration::from_secs(1), &format!("q={q}"))?;
    }
    Ok(())
}

// ------------------------------------------------------------------ 2

fn crit2_instance(q: u32, limit: Duration) -> Outcome {
    let (p, h) = if q == 4 { (2, 2) } else { (q, 1) };
    let t = Instant::now();
    let rep = constructions::construct_pg3q3_subgeometries(p, h).map_err(e)?;
    let qs = q as usize;
    check(rep.set.len() == 3 * (qs + 1) * (qs * qs + 1), || {
        format!("q={q}: size {}", rep.set.len())
    })?;
    check(rep.certificates.cutting.verdict, || {
        format!("q={q}: not cutting")
    })?;
    check(rep.certificates.is_minimal(), || {
        format!("q={q}: not minimal")
    })?;
    let allowed: BTreeSet<usize> = [
        3 * qs.pow(3) + 3 * qs * qs + 3 * qs,
        3 * qs.pow(3) + 3 * qs * qs + 2 * qs,
        3 * qs.pow(3) + 3 * qs * qs + qs,
        3 * qs.pow(3) + 3 * qs * qs,
        3 * qs.pow(3) + 2 * qs * qs + qs,
        3 * qs.pow(3) + 2 * qs * qs,
    ]
    .into();
    let c = codes::code_from_pointset(&rep.set).map_err(e)?;
    let got = codes::weight_distribution(&c).map_err(e)?;
    let bad: Vec<usize> = got
        .keys()
        .copied()
        .filter(|&w| w != 0 && !allowed.contains(&w))
        .collect();
    check(bad.is_empty(), || {
        format!("q={q}: weights {bad:?} outside the allowed set")
    })?;
    within(t, limit, &format!("q={q}"))
}

fn crit2() -> Outcome {
    let limits = [(2, 5), (3, 120), (4, 1800)];
    let errs: Vec<String> = limits
        .iter()
        .filter_map(|&(q, s)| crit2_instance(q, Duration::from_secs(s)).err())
        .collect();
    check(errs.is_empty(), || errs.join("; "))
}

// ------------------------------------------------------------------ 3

fn crit3() -> Outcome {
    let mut failures = Vec::new();
    for q in [2u32, 3, 4, 5, 7] {
        let (p, h) = if q == 4 { (2, 2) } else { (q, 1) };
        let t = Instant::now();
        let one = || -> Outcome {
            let qi = q as i64;
            let want = wd(&[
                (0, 1),
                (5 * q as usize, 21 * (qi * qi - 1)),
                (6 * q as usize, 7 * (qi * qi - 5) * (qi * qi - 1)),
                (
                    7 * q as usize,
                    (qi.pow(4) - 6 * qi * qi + 15) * (qi * qi - 1),
                ),
            ]);
            let rep = constructions::construct_pg5q_seven_lines(p, h).map_err(e)?;
            check(rep.set.len() == 7 * (q as usize + 1), || {
                format!("size {}", rep.set.len())
            })?;
            check(rep.certificates.cutting.verdict, || "not cutting".into())?;
            check(rep.certificates.is_minimal(), || "not minimal".into())?;
            let want = want?;
            let c = codes::code_from_pointset(&rep.set).map_err(e)?;
            let got = codes::weight_distribution(&c).map_err(e)?;
            check(got == want, || {
                format!("weights {got:?}, expected {want:?}")
            })?;
            check(got.values().sum::<u64>() == (q as u64).pow(6), || {
                "total".into()
            })?;
            if q <= 5 {
                within(t, Duration::from_secs(60), "construction")?;
            }
            Ok(())
        };
        if let Err(m) = one() {
            failures.push(format!("q={q}: {m}"));
        }
    }
    check(failures.is_empty(), || failures.join("; "))
}

// ------------------------------------------------------------------ 4

fn crit4() -> Outcome {
    let t = Instant::now();
    for q in [2u32, 3, 4, 5] {
        let (p, h) = if q == 4 { (2, 2) } else { (q, 1) };
        let hp = HermitianPlane::new(p, h).map_err(e)?;
        let cat = hp.catalog_through_frame().map_err(e)?;
        let qs = q as usize;
        let want = [
            qs * qs + qs + 1,
            3 * qs,
            6 * (qs * qs - qs),
            (qs - 2) * (qs * qs - qs),
        ];
        check(cat.counts() == want, || {
            format!("q={q}: counts {:?}, expected {want:?}", cat.counts())
        })?;
        check(cat.total() == qs.pow(3) + 4 * qs * qs + 1, || {
            format!("q={q}: total {}", cat.total())
        })?;
        if q <= 3 {
            // brute force: every cone over a Baer subline, filtered by the frame
            let frame = hp.frame();
            let brute: BTreeSet<(ProjPoint, Vec<ProjPoint>)> = hp
                .all_curves()
                .into_iter()
                .filter(|c| frame.iter().all(|pt| c.contains(&hp, pt)))
                .map(|c| (c.vertex.clone(), c.subline.points.clone()))
                .collect();
            let mine: BTreeSet<(ProjPoint, Vec<ProjPoint>)> = cat
                .all()
                .map(|c| (c.vertex.clone(), c.subline.points.clone()))
                .collect();
            check(brute == mine, || {
                format!("q={q}: catalog differs from brute force")
            })?;
            check(
                cat.all()
                    .all(|c| frame.iter().all(|pt| c.satisfies_form(&hp, pt))),
                || format!("q={q}: form test"),
            )?;
        }
    }
    within(t, Duration::from_secs(10), "catalog")
}

// ------------------------------------------------------------------ 5

fn crit5() -> Outcome {
    let t = Instant::now();
    let hp = HermitianPlane::new(2, 1).map_err(e)?;
    let pts: Vec<ProjPoint> = hp.plane().points().collect();
    check(pts.len() == 21, || "PG(2,4) size".into())?;
    let subsets: Vec<Vec<usize>> = Combinations::new(21, 6).collect();
    check(subsets.len() as u64 == verify::binomial(21, 6), || {
        "subset count".into()
    })?;
    use rayon::prelude::*;
    let bad = subsets.par_iter().find_any(|idx| {
        let s: Vec<ProjPoint> = idx.iter().map(|&i| pts[i].clone()).collect();
        match hp.curve_cover(&s) {
            Some(c) => !s.iter().all(|p| c.contains(&hp, p)),
            None => true,
        }
    });
    check(bad.is_none(), || format!("uncovered six points {bad:?}"))?;
    within(t, Duration::from_secs(30), "six-point sweep")
}

// ------------------------------------------------------------------ 6

fn crit6() -> Outcome {
    let t = Instant::now();
    for q in [2u32, 3] {
        let pg = Pg1::new(q, 1, 3).map_err(e)?;
        let qs = q as usize;
        let s = pg.canonical_subline();
        let n = count_splashes_through(&pg, &s, DEFAULT_GROUP_BUDGET).map_err(e)?;
        check(n == qs.pow(3) - qs, || {
            format!("q={q}: {n} splashes through a subline")
        })?;
        let sp = splash_construct(&pg, default_splash_parameter(&pg)).map_err(e)?;
        // census of sublines carried by the splash
        let fams: BTreeSet<_> = sp.sublines().cloned().collect();
        check(fams.len() == 2 * (qs * qs + qs + 1), || {
            format!("q={q}: {} family sublines", fams.len())
        })?;
        check(
            sp.sublines()
                .all(|l| l.points.iter().all(|x| sp.points.binary_search(x).is_ok())),
            || format!("q={q}: family subline leaves the splash"),
        )?;
        if q > 2 {
            // for q > 2 the families are exactly the sublines inside the splash
            let inside: BTreeSet<_> = pg.sublines_in(&sp.points).into_iter().collect();
            check(inside == fams, || {
                format!("q={q}: {} sublines inside the splash", inside.len())
            })?;
        }
        let want = (qs + 1, qs * (qs + 1) / 2, qs * (qs - 1) / 2);
        for l in sp.sublines() {
            let pr = sp.profile(l);
            check(pr == Some(want), || {
                format!("q={q}: profile {pr:?}, expected {want:?}")
            })?;
        }
    }
    // two splashes sharing a subline s share one of the opposite family of s
    let pg = Pg1::new(2, 1, 3).map_err(e)?;
    let base = splash_construct(&pg, default_splash_parameter(&pg)).map_err(e)?;
    let all = splash_orbit(&pg, &base, DEFAULT_GROUP_BUDGET).map_err(e)?;
    let mut pairs = 0u64;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            for s in all[i].sublines() {
                let (Some(oi), Some(oj)) = (all[i].opposite_family(s), all[j].opposite_family(s))
                else {
                    continue;
                };
                pairs += 1;
                check(oi.iter().any(|t| oj.contains(t)), || {
                    format!("splashes {i},{j} share no opposite subline")
                })?;
            }
        }
    }
    check(pairs > 0, || "no splash pairs share a subline".into())?;
    within(t, Duration::from_secs(120), "splash suite")
}

// ------------------------------------------------------------------ 7

fn dot(f: &cutblock::finfield::Field, a: &[u32], b: &[u32]) -> u32 {
    linalg::dot(f, a, b)
}

fn crit7() -> Outcome {
    let t = Instant::now();
    let m = SingerModel::new(2, 1).map_err(e)?;
    let k = m.k().clone();
    let sigma = m.sigma1.clone();
    let points: Vec<ProjPoint> = m.space.points().collect();
    let mut pc: BTreeMap<PointClass, u64> = BTreeMap::new();
    for p in &points {
        *pc.entry(m.classify_point(p, &sigma).map_err(e)?)
            .or_default() += 1;
    }
    let got: Vec<u64> = pc.values().copied().collect();
    check(got == [15, 210, 360], || format!("point classes {got:?}"))?;

    let lines = m.space.lines();
    check(lines.len() == 4745, || format!("{} lines", lines.len()))?;
    let mut classes = Vec::with_capacity(lines.len());
    for l in &lines {
        classes.push(m.classify_line(l, &sigma).map_err(e)?);
    }
    let mut lc: BTreeMap<LineClass, u64> = BTreeMap::new();
    for c in &classes {
        *lc.entry(*c).or_default() += 1;
    }
    let got: Vec<u64> = lc.values().copied().collect();
    check(got == [35, 630, 360, 360, 3360], || {
        format!("line classes {got:?}")
    })?;

    let orb = m.line_orbits();
    let mut sizes: Vec<usize> = std::iter::once(orb.spread.len())
        .chain(orb.others.iter().map(Vec::len))
        .collect();
    sizes.sort();
    check(sizes == [5, 15, 15], || {
        format!("line orbit sizes {sizes:?}")
    })?;

    // lines meeting both Σ₁ and Σ₂, recomputed from the partition
    let tri = constructions::triple_subgeometry(2, 1, 0).map_err(e)?;
    let s2 = &tri.sigma[1].points;
    let meeting: Vec<&ProjLine> = lines
        .iter()
        .filter(|l| {
            let pts = l.points(&k);
            pts.iter().any(|p| sigma.points.contains(p)) && pts.iter().any(|p| s2.contains(p))
        })
        .collect();
    let (inside, outside): (Vec<&ProjLine>, Vec<&ProjLine>) = meeting.iter().partition(|l| {
        l.points(&k)
            .iter()
            .filter(|p| sigma.points.contains(p))
            .count()
            == 3
    });
    check(
        meeting.len() == 195 && inside.len() == 15 && outside.len() == 180,
        || {
            format!(
                "lines meeting Σ₁ and Σ₂: {} = {} + {}",
                meeting.len(),
                inside.len(),
                outside.len()
            )
        },
    )?;
    let r1: BTreeSet<&ProjLine> = tri.r1.iter().collect();
    check(inside.iter().all(|l| r1.contains(l)), || {
        "Σ₁-lines meeting Σ₂ are not the chosen orbit".into()
    })?;
    check(
        outside.iter().all(|l| {
            let pts = l.points(&k);
            pts.iter().filter(|p| sigma.points.contains(p)).count() == 1
                && pts.iter().filter(|p| s2.contains(p)).count() == 1
        }),
        || "a joining line meets a subgeometry twice".into(),
    )?;

    // planes through a line of each class meeting Σ₁ in at least q+1 points
    let planes: Vec<Vec<u32>> = m.space.hyperplanes().map(|h| h.0).collect();
    let meet_sigma: Vec<usize> = planes
        .iter()
        .map(|h| {
            sigma
                .points
                .points()
                .iter()
                .filter(|p| dot(&k, h, &p.0) == 0)
                .count()
        })
        .collect();
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for &c in &meet_sigma {
        *hist.entry(c).or_default() += 1;
    }
    check(
        hist == BTreeMap::from([(1, 360), (3, 210), (7, 15)]),
        || format!("plane intersections with Σ₁ {hist:?}"),
    )?;
    let want = |c: LineClass| match c {
        LineClass::L1 => None,
        LineClass::L2 => Some(5),
        LineClass::L3 => Some(7),
        LineClass::L4 => Some(1),
        LineClass::L5 => Some(3),
    };
    for (l, &c) in lines.iter().zip(&classes) {
        let Some(w) = want(c) else { continue };
        let n = planes
            .iter()
            .zip(&meet_sigma)
            .filter(|(h, &s)| s >= 3 && dot(&k, h, &l.rows[0]) == 0 && dot(&k, h, &l.rows[1]) == 0)
            .count();
        check(n == w, || {
            format!("{c:?} line with {n} rich planes, expected {w}")
        })?;
    }

    // no plane meets two partition members in q²+q+1 points
    let part = m.partition().map_err(e)?;
    check(part.len() == 39, || {
        format!("{} partition members", part.len())
    })?;
    for h in &planes {
        let full = part
            .iter()
            .filter(|sg| {
                sg.points
                    .points()
                    .iter()
                    .filter(|p| dot(&k, h, &p.0) == 0)
                    .count()
                    == 7
            })
            .count();
        check(full <= 1, || {
            format!("plane {h:?} meets {full} members in a subplane")
        })?;
    }
    within(t, Duration::from_secs(60), "censuses")
}

// ------------------------------------------------------------------ 8

fn crit8() -> Outcome {
    for (r, q) in [(3usize, "7"), (4, "11"), (5, "11")] {
        let t = Instant::now();
        let n = verify::max_tangents_in_hyperplane(r, q, u64::MAX).map_err(e)?;
        check(n <= r - 2, || {
            format!("PG({r},{q}): {n} tangents in a hyperplane")
        })?;
        if r == 4 {
            within(t, Duration::from_secs(60), "PG(4,11) scan")?;
        }
    }
    for (r, q) in [(4usize, "11"), (5, "13")] {
        let rep =
            constructions::construct_nrc_tangents(r, q, TangentSelection::Guaranteed).map_err(e)?;
        check(rep.lines.len() == 2 * r - 1, || "line count".into())?;
        check(rep.certificates.cutting.verdict, || {
            format!("{} tangents of PG({r},{q}) not cutting", 2 * r - 1)
        })?;
    }
    let t = Instant::now();
    let rep =
        constructions::construct_nrc_tangents(4, "11", TangentSelection::Search(6)).map_err(e)?;
    check(
        rep.lines.len() == 6 && rep.certificates.cutting.verdict && rep.certificates.is_minimal(),
        || "6-tangent search result not minimal cutting".into(),
    )?;
    // independent re-check of the found set
    check(
        verify::is_minimal_cutting(&rep.set).map_err(e)?.verdict,
        || "re-check failed".into(),
    )?;
    within(t, Duration::from_secs(1800), "6-subset search")
}

// ------------------------------------------------------------------ 9

fn family_sets() -> std::result::Result<Vec<(String, PointSet)>, String> {
    let mut v = Vec::new();
    for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
        v.push((
            format!("four-lines {p}^{h}"),
            constructions::construct_pg3q_four_lines(p, h)
                .map_err(e)?
                .set,
        ));
    }
    for (p, h) in [(2, 1), (3, 1)] {
        v.push((
            format!("triple {p}^{h}"),
            constructions::construct_pg3q3_subgeometries(p, h)
                .map_err(e)?
                .set,
        ));
    }
    for (p, h) in [(3, 1), (2, 2), (5, 1), (7, 1)] {
        v.push((
            format!("seven-lines {p}^{h}"),
            constructions::construct_pg5q_seven_lines(p, h)
                .map_err(e)?
                .set,
        ));
    }
    v.push((
        "nrc 3 7".into(),
        constructions::construct_nrc_tangents(3, "7", TangentSelection::Guaranteed)
            .map_err(e)?
            .set,
    ));
    v.push((
        "nrc 4 11".into(),
        constructions::construct_nrc_tangents(4, "11", TangentSelection::Guaranteed)
            .map_err(e)?
            .set,
    ));
    Ok(v)
}

fn crit9() -> Outcome {
    let t = Instant::now();
    let sets = family_sets()?;
    let mut compared = 0;
    for (name, set) in &sets {
        let c = codes::code_from_pointset(set).map_err(e)?;
        let q = c.field().order() as u64;
        if q.checked_pow(c.k() as u32)
            .is_none_or(|n| n > codes::DIRECT_LIMIT)
        {
            continue;
        }
        compared += 1;
        let g = codes::weight_distribution(&c).map_err(e)?;
        let d = codes::weight_distribution_direct(&c).map_err(e)?;
        check(g == d, || {
            format!("{name}: geometric {g:?} vs direct {d:?}")
        })?;
    }
    check(compared >= 10, || {
        format!("only {compared} families compared")
    })?;

    // minimality verdicts at q ∈ {2,3}, including a non-minimal control
    let mut codes_small: Vec<(String, LinearCode, bool)> = Vec::new();
    for (name, set) in &sets {
        if name.ends_with(" 2^1") || name.ends_with(" 3^1") {
            let minimal_cutting = verify::is_minimal_cutting(set).map_err(e)?.verdict;
            codes_small.push((
                name.clone(),
                codes::code_from_pointset(set).map_err(e)?,
                minimal_cutting,
            ));
        }
    }
    for p in [2u32, 3] {
        let s = ProjSpace::new(2, field_create(p, 1).map_err(e)?).map_err(e)?;
        let mut pts: Vec<ProjPoint> = s.points().filter(|x| x.0[0] == 0).collect();
        pts.push(ProjPoint(vec![1, 0, 0]));
        let set = PointSet::new(s, pts).map_err(e)?;
        codes_small.push((
            format!("line+point {p}"),
            codes::code_from_pointset(&set).map_err(e)?,
            false,
        ));
    }
    let mut verdicts = BTreeSet::new();
    for (name, c, _) in &codes_small {
        let classes = cutblock::projgeom::count_normalized(c.k(), c.field().order() as u64);
        if classes > 20_000 {
            continue;
        }
        let g = codes::is_minimal_code(c, MinimalityMode::Geometric).map_err(e)?;
        let d = codes::is_minimal_code(c, MinimalityMode::Direct).map_err(e)?;
        check(g == d, || format!("{name}: geometric {g} vs direct {d}"))?;
        verdicts.insert(g);
    }
    check(verdicts.len() == 2, || {
        "minimality controls did not cover both verdicts".into()
    })?;

    // toy saturating code: parity-check columns e1, e2, e3, 1+1+1
    let f2 = field_create(2, 1).map_err(e)?;
    let hm = vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]];
    let toy = LinearCode::from_parity_check(f2, &hm).map_err(e)?;
    let rho = codes::covering_radius(&toy, codes::DEFAULT_SYNDROME_BUDGET).map_err(e)?;
    check(rho == 2, || format!("toy covering radius {rho}"))?;

    // reduced minimal code iff minimal cutting set; the families certified minimal must be reduced
    let mut reduced = 0;
    for (name, c, minimal_cutting) in &codes_small {
        let red = codes::is_reduced_minimal(c, MinimalityMode::Geometric).map_err(e)?;
        check(red == *minimal_cutting, || {
            format!("{name}: reduced {red}, minimal cutting {minimal_cutting}")
        })?;
        reduced += red as usize;
    }
    check(reduced >= 3, || format!("only {reduced} reduced families"))?;
    within(t, Duration::from_secs(300), "code oracles")
}

// ------------------------------------------------------------------ 10

fn crit10() -> Outcome {
    // complement of a point of PG(2,2), embedded in PG(2,4)
    let small = ProjSpace::new(2, field_create(2, 1).map_err(e)?).map_err(e)?;
    let cut: Vec<ProjPoint> = small.points().filter(|x| x.0 != [0, 0, 1]).collect();
    let cs = PointSet::new(small, cut.clone()).map_err(e)?;
    check(verify::is_minimal_cutting(&cs).map_err(e)?.verdict, || {
        "PG(2,2) set is not minimal cutting".into()
    })?;
    let f4 = field_create(2, 2).map_err(e)?;
    let emb = Embedding::new(cs.space().field(), &f4).map_err(e)?;
    let big = ProjSpace::new(2, f4.clone()).map_err(e)?;
    let y: Vec<ProjPoint> = cut
        .iter()
        .map(|p| ProjPoint(p.0.iter().map(|&c| emb.embed(c)).collect()))
        .collect();
    let ys = PointSet::new(big, y.clone()).map_err(e)?;
    check(
        verify::is_saturating(&ys, 1, verify::DEFAULT_SATURATION_BUDGET).map_err(e)?,
        || "not 1-saturating in PG(2,4)".into(),
    )?;
    check(
        verify::is_saturating_exact(&ys, 1, verify::DEFAULT_SATURATION_BUDGET).map_err(e)?,
        || "saturation degree is not exactly 1".into(),
    )?;
    // columns of a parity-check matrix: covering radius ρ+1 = 2
    let hm: Vec<Vec<u32>> = (0..3).map(|i| y.iter().map(|p| p.0[i]).collect()).collect();
    let c = LinearCode::from_parity_check(f4, &hm).map_err(e)?;
    let rho = codes::covering_radius(&c, codes::DEFAULT_SYNDROME_BUDGET).map_err(e)?;
    check(rho == 2, || format!("covering radius {rho}"))?;

    // a point off R₁ and the joining lines exists, q ∈ {2,3,4}
    for (p, h) in [(2, 1), (3, 1), (2, 2)] {
        let tri = constructions::triple_subgeometry(p, h, 0).map_err(e)?;
        let k = tri.model.k().clone();
        let pp = &tri.p_point;
        check(
            tri.model.classify_point(pp, &tri.model.sigma1).map_err(e)? == PointClass::O3,
            || "P is not in O3".into(),
        )?;
        let on = tri
            .r1
            .iter()
            .chain(&tri.joining)
            .any(|l| l.contains(&k, pp));
        check(!on, || format!("q={p}^{h}: P lies on a forbidden line"))?;
    }
    Ok(())
}

// ------------------------------------------------------------------ 11

fn cli(args: &[&str], threads: usize) -> std::result::Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cutblock"))
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .output()
        .map_err(e)?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn crit11() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let rep = dir.path().join("rep.json");
    let rep_s = rep.to_str().unwrap();
    let (_, code) = cli(
        &[
            "construct",
            "--family",
            "pg3q-4lines",
            "--q",
            "3",
            "--out",
            rep_s,
        ],
        1,
    )?;
    check(code == 0, || format!("construct exit {code}"))?;
    let cmds: Vec<Vec<&str>> = vec![
        vec!["construct", "--family", "pg3q-4lines", "--q", "4"],
        vec!["construct", "--family", "pg3q3-subgeo", "--q", "2"],
        vec!["construct", "--family", "pg5q-7lines", "--q", "3"],
        vec!["construct", "--family", "nrc", "--q", "7", "--r", "3"],
        vec!["verify", "--cutting", "--minimal", "--tfold", "2", rep_s],
        vec![
            "code",
            "--weights",
            "--minimal",
            "--covering",
            "--direct",
            rep_s,
        ],
        vec!["hermitian-catalog", "--q", "3"],
        vec!["splash-count", "--q", "2"],
        vec!["bounds", "--report", "--q", "3"],
    ];
    let n = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(4)
        .max(2);
    for c in &cmds {
        let a = cli(c, 1)?;
        let b = cli(c, 1)?;
        let d = cli(c, n)?;
        check(!a.0.is_empty(), || format!("{c:?}: empty output"))?;
        check(a == b && a == d, || {
            format!("{c:?}: output differs across runs or thread counts")
        })?;
    }
    Ok(())
}

fn main() {
    let mut rep = Report { rows: Vec::new() };
    rep.run("1", "PG(3,q) four-line sets, q in {3,4,5,7}", crit1);
    rep.run("2", "PG(3,q^3) triple subgeometry, q in {2,3,4}", crit2);
    rep.run("3", "PG(5,q) seven-line sets, q in {2,3,4,5,7}", crit3);
    rep.run("4", "Hermitian catalog, q in {2,3,4,5}", crit4);
    rep.run(
        "5",
        "six points of PG(2,4) always on a degenerate Hermitian curve",
        crit5,
    );
    rep.run("6", "splash suite, q in {2,3}", crit6);
    rep.run("7", "orbit censuses in PG(3,8)", crit7);
    rep.run("8", "normal rational curve tangents", crit8);
    rep.run("9", "code oracles", crit9);
    rep.run("10", "toy-scale saturation and point existence", crit10);
    rep.run("11", "determinism across runs and thread counts", crit11);

    let known: BTreeMap<&str, &str> = UNATTAINABLE.iter().copied().collect();
    let mut problems = Vec::new();
    for (id, name, ok, _, detail) in &rep.rows {
        match (ok, known.get(id.as_str())) {
            (false, Some(why)) => println!("  known failure [{id}]: {why}"),
            (false, None) => problems.push(format!("[{id}] {name}: {detail}")),
            (true, Some(_)) => problems.push(format!(
                "[{id}] {name} now passes; remove it from UNATTAINABLE"
            )),
            (true, None) => {}
        }
    }
    let passed = rep.rows.iter().filter(|r| r.2).count();
    println!("acceptance: {passed}/{} PASS", rep.rows.len());
    if !problems.is_empty() {
        eprintln!("{}", problems.join("\n"));
        std::process::exit(1);
    }
}
