//! Command-line front end. Exit status: 0 verified true, 1 verified false,
//! 2 error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::codes::{self, LinearCode, MinimalityMode};
use crate::constructions::{self, Certificates, Family, ReportJson, TangentSelection};
use crate::error::{Error, Result};
use crate::finfield::parse_prime_power;
use crate::hermitian::HermitianPlane;
use crate::projgeom::{PointSet, PointSetJson};
use crate::sublines::{count_splashes_through, Pg1, DEFAULT_GROUP_BUDGET};
use crate::verify;

#[derive(Parser, Debug)]
#[command(
    name = "cutblock",
    version,
    about = "Cutting blocking sets and minimal codes over finite fields"
)]
pub struct Cli {
    /// Worker threads (default: all cores; THREADS is also honoured).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Refuse hyperplane scans larger than this.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub max_hyperplanes: u64,
    /// Refuse covering-radius searches with more syndromes than this.
    #[arg(long, global = true, default_value_t = codes::DEFAULT_SYNDROME_BUDGET)]
    pub max_syndromes: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build one of the families and certify it.
    Construct {
        #[arg(long)]
        family: String,
        /// Field order, as p^h or a prime power.
        #[arg(long)]
        q: String,
        /// Ambient dimension (nrc only).
        #[arg(long)]
        r: Option<usize>,
        /// Number of tangent lines (nrc only).
        #[arg(long)]
        k: Option<usize>,
        /// Search k-subsets of tangents for a minimal cutting set (nrc only).
        #[arg(long)]
        search: bool,
        /// Comma-separated tangent indices (nrc only).
        #[arg(long, value_delimiter = ',')]
        tangents: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a point set or construction report.
    Verify {
        #[arg(long)]
        cutting: bool,
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        tfold: Option<usize>,
        file: PathBuf,
    },
    /// Code parameters of a point set, report or generator matrix.
    Code {
        #[arg(long)]
        weights: bool,
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        covering: bool,
        /// Also run the direct (codeword enumeration) oracles where feasible.
        #[arg(long)]
        direct: bool,
        file: PathBuf,
    },
    /// Degenerate Hermitian curves of PG(2,q²) through the frame, and a seven-point set.
    HermitianCatalog {
        #[arg(long)]
        q: String,
    },
    /// Number of splashes of PG(1,q³) through a fixed q-order subline.
    SplashCount {
        #[arg(long)]
        q: String,
    },
    /// Size bounds instantiated at q.
    Bounds {
        #[arg(long)]
        report: bool,
        #[arg(long, default_value = "2")]
        q: String,
    },
}

/// Parses argv, runs, writes JSON to `out`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("THREADS").ok().and_then(|s| s.parse().ok()));
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok((value, ok)) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            if writeln!(out, "{text}").is_err() {
                return 2;
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

fn check_scan(space_points: u64, budget: u64) -> Result<()> {
    if space_points > budget {
        return Err(Error::BudgetExceeded(format!(
            "{space_points} hyperplanes exceed --max-hyperplanes {budget}"
        )));
    }
    Ok(())
}

fn scan_size(family: Family, p: u32, h: u32, r: usize) -> u64 {
    let q = (p as u64).pow(h);
    let (qq, dim) = match family {
        Family::FourLines => (q, 4),
        Family::TripleSubgeometry => (q.pow(3), 4),
        Family::SevenLines => (q, 6),
        Family::NrcTangents => (q, r + 1),
    };
    crate::projgeom::count_normalized(dim, qq)
}

fn dispatch(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.command {
        Command::Construct {
            family,
            q,
            r,
            k,
            search,
            tangents,
            out,
        } => {
            let fam: Family = family.parse()?;
            let (p, h) = parse_prime_power(q)?;
            if fam != Family::NrcTangents
                && (r.is_some() || k.is_some() || *search || tangents.is_some())
            {
                return Err(Error::Precondition(
                    "--r, --k, --search and --tangents apply to the nrc family only".into(),
                ));
            }
            let rr = r.unwrap_or(3);
            check_scan(scan_size(fam, p, h, rr), cli.max_hyperplanes)?;
            let rep = match fam {
                Family::FourLines => constructions::construct_pg3q_four_lines(p, h)?,
                Family::TripleSubgeometry => constructions::construct_pg3q3_subgeometries(p, h)?,
                Family::SevenLines => constructions::construct_pg5q_seven_lines(p, h)?,
                Family::NrcTangents => {
                    let r = r.ok_or_else(|| Error::Precondition("nrc needs --r".into()))?;
                    let sel = match (tangents, search, k) {
                        (Some(t), false, None) => TangentSelection::Indices(t.clone()),
                        (None, true, Some(k)) => TangentSelection::Search(*k),
                        (None, false, Some(k)) => TangentSelection::Indices((0..*k).collect()),
                        (None, false, None) => TangentSelection::Guaranteed,
                        _ => {
                            return Err(Error::Precondition(
                                "use one of --tangents, --k, or --search --k".into(),
                            ))
                        }
                    };
                    constructions::construct_nrc_tangents(r, &format!("{p}^{h}"), sel)?
                }
            };
            let ok = rep.certificates.cutting.verdict;
            let value = serde_json::to_value(rep.to_json())?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&value)?;
                std::fs::write(path, text + "\n")?;
            }
            Ok((value, ok))
        }
        Command::Verify {
            cutting,
            minimal,
            tfold,
            file,
        } => {
            let (set, stored) = read_set(file)?;
            check_scan(set.space().num_points(), cli.max_hyperplanes)?;
            let mut res = serde_json::Map::new();
            let mut ok = true;
            let want_cutting = *cutting || (!*minimal && tfold.is_none());
            if want_cutting || *minimal {
                let cert = verify::is_cutting(&set)?;
                ok &= cert.verdict;
                res.insert("cutting".into(), serde_json::to_value(&cert)?);
                if *minimal {
                    if cert.verdict {
                        let m = verify::is_minimal_cutting(&set)?;
                        ok &= m.verdict;
                        res.insert("minimal".into(), serde_json::to_value(&m)?);
                    } else {
                        res.insert("minimal".into(), Value::Null);
                    }
                }
            }
            if let Some(t) = tfold {
                let v = verify::is_tfold_blocking(&set, *t)?;
                ok &= v;
                res.insert("tfold".into(), json!({"t": t, "verdict": v}));
            }
            if let Some(stored) = stored {
                let again = Certificates::compute(&set)?.to_json();
                res.insert("matches_report".into(), json!(again == stored.certificates));
            }
            Ok((Value::Object(res), ok))
        }
        Command::Code {
            weights,
            minimal,
            covering,
            direct,
            file,
        } => {
            let code = read_code(file)?;
            let mut res = serde_json::Map::new();
            res.insert("n".into(), json!(code.n()));
            res.insert("k".into(), json!(code.k()));
            let mut ok = true;
            let any = *weights || *minimal || *covering;
            if *weights || !any {
                if code.k() > 1 {
                    check_scan(
                        crate::projgeom::count_normalized(code.k(), code.field().order() as u64),
                        cli.max_hyperplanes,
                    )?;
                }
                let wd = codes::weight_distribution(&code)?;
                res.insert("weights".into(), weights_json(&wd));
                if *direct {
                    let d = codes::weight_distribution_direct(&code)?;
                    res.insert("weights_direct_agree".into(), json!(d == wd));
                    ok &= d == wd;
                }
            }
            if *minimal {
                let g = codes::is_minimal_code(&code, MinimalityMode::Geometric)?;
                res.insert("minimal".into(), json!(g));
                ok &= g;
                if *direct {
                    let d = codes::is_minimal_code(&code, MinimalityMode::Direct)?;
                    res.insert("minimal_direct".into(), json!(d));
                    ok &= d == g;
                }
            }
            if *covering {
                res.insert(
                    "covering_radius".into(),
                    json!(codes::covering_radius(&code, cli.max_syndromes)?),
                );
            }
            Ok((Value::Object(res), ok))
        }
        Command::HermitianCatalog { q } => {
            let (p, h) = parse_prime_power(q)?;
            let hp = HermitianPlane::new(p, h)?;
            let qq = hp.q() as usize;
            let cat = hp.catalog_through_frame()?;
            let counts = cat.counts();
            let expected = [
                qq * qq + qq + 1,
                3 * qq,
                6 * (qq * qq - qq),
                (qq - 2) * (qq * qq - qq),
            ];
            let total = cat.total();
            let mut ok = counts == expected && total == qq.pow(3) + 4 * qq * qq + 1;
            let mut res = json!({
                "q": format!("{p}^{h}"),
                "counts": counts,
                "expected": expected,
                "total": total,
                "sigma_count": hp.sigma_count(),
            });
            let seven = match hp.seven_point_search() {
                Ok(cfg) => serde_json::to_value(cfg.to_json(&hp)?)?,
                Err(e) => json!({"error": e.to_string()}),
            };
            res["seven_points"] = seven;
            if qq <= 3 {
                let frame = hp.frame();
                let mut brute: Vec<_> = hp
                    .all_curves()
                    .into_iter()
                    .filter(|c| frame.iter().all(|pt| c.contains(&hp, pt)))
                    .map(|c| (c.vertex, c.subline))
                    .collect();
                brute.sort();
                let mut mine: Vec<_> = cat
                    .all()
                    .map(|c| (c.vertex.clone(), c.subline.clone()))
                    .collect();
                mine.sort();
                let same = brute == mine;
                ok &= same;
                res["brute_force_match"] = json!(same);
            }
            Ok((res, ok))
        }
        Command::SplashCount { q } => {
            let (p, h) = parse_prime_power(q)?;
            let pg = Pg1::new(p, h, 3)?;
            let s = pg.canonical_subline();
            let n = count_splashes_through(&pg, &s, DEFAULT_GROUP_BUDGET)?;
            let qq = pg.q0 as usize;
            Ok((
                json!({"q": format!("{p}^{h}"), "splashes": n}),
                n == qq.pow(3) - qq,
            ))
        }
        Command::Bounds { report: _, q } => {
            let (p, h) = parse_prime_power(q)?;
            let qf = (p as f64).powi(h as i32);
            let qi = (p as u64).pow(h);
            let e = std::f64::consts::E;
            let q3 = qi.pow(3);
            Ok((
                json!({
                    "q": format!("{p}^{h}"),
                    "m(4,q^3)": {"lower": 3 * (q3 + 1), "upper": 3 * (qi + 1) * (qi * qi + 1), "previous_upper": 5 * (q3 + 1)},
                    "m(6,q)": {"lower": 5 * (qi + 1), "upper": 7 * (qi + 1), "previous_upper": 9 * (qi + 1)},
                    "s_{q^9}(3,2)": {"lower": 3.0 / e * qf.powi(3) + 1.0, "upper": 3 * (qi + 1) * (qi * qi + 1), "previous_upper": 5 * (q3 + 1)},
                    "s_{q^5}(5,4)": {"lower": 5.0 / e * qf + 2.0, "upper": 7 * (qi + 1), "previous_upper": 9 * (qi + 1)},
                }),
                true,
            ))
        }
    }
}

fn weights_json(wd: &codes::WeightDistribution) -> Value {
    Value::Object(wd.iter().map(|(w, a)| (w.to_string(), json!(a))).collect())
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn read_set(path: &PathBuf) -> Result<(PointSet, Option<ReportJson>)> {
    let v = read_json(path)?;
    if v.get("set").is_some() {
        let rep: ReportJson = serde_json::from_value(v)?;
        Ok((PointSet::from_json(&rep.set)?, Some(rep)))
    } else if v.get("points").is_some() {
        let j: PointSetJson = serde_json::from_value(v)?;
        Ok((PointSet::from_json(&j)?, None))
    } else {
        Err(Error::Malformed(
            "expected a point set or a construction report".into(),
        ))
    }
}

fn read_code(path: &PathBuf) -> Result<LinearCode> {
    let v = read_json(path)?;
    if v.get("rows").is_some() {
        LinearCode::from_json(&serde_json::from_value(v)?)
    } else {
        let (set, _) = read_set(path)?;
        codes::code_from_pointset(&set)
    }
}
