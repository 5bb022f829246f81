use std::collections::BTreeMap;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;

use hopf_chern::connection::{ell, idempotent, verify_connection, Family};
use hopf_chern::fredholm::{
    exact_pairing, lambda_boundary_holds, numeric_pairing, pi_minus, pi_plus, rank_pairing,
    rep_check, restriction_check, rho1, rho2, sigma1, sigma2, ExactPairing, NumericParams,
};
use hopf_chern::ncalg::{
    check_confluence, heegaard_presentation, podles_presentation, qsu2_presentation,
    s2pq_presentation,
};
use hopf_chern::paramfield::{BigRational, RationalFunction};
use hopf_chern::quantumhopf::{quotient_basis, QuotientBasis, SValue};

use crate::config::{Mode, RunArgs, Suite};

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct NumericOutcome {
    pub estimate: f64,
    pub tail_bound: f64,
    pub agrees: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct ReportRecord {
    pub family: Family,
    pub mu: i64,
    pub s: String,
    pub rank: Option<String>,
    pub chern: Option<i64>,
    pub exact_expr: Option<String>,
    pub numeric: Option<NumericOutcome>,
    pub verification: BTreeMap<Suite, bool>,
    pub error: Option<String>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl ReportRecord {
    pub fn passed(&self, mode: Mode) -> bool {
        let exact_ok = mode == Mode::Numeric || self.chern == Some(self.mu);
        let numeric_ok = self.numeric.as_ref().is_none_or(|n| n.agrees);
        self.error.is_none() && exact_ok && numeric_ok && self.verification.values().all(|v| *v)
    }

    pub fn verified(&self) -> bool {
        self.verification.values().all(|v| *v)
    }
}

const SAMPLES: [(i64, i64); 4] = [(0, 1), (1, 3), (1, 2), (1, 1)];

fn sample_values() -> Vec<SValue> {
    SAMPLES
        .iter()
        .map(|&(n, d)| SValue::Exact(BigRational::new(n.into(), d.into())))
        .collect()
}

struct Exact {
    s_label: String,
    pairing_text: String,
    chern: Option<i64>,
    rank: String,
}

fn as_i64(p: &ExactPairing) -> Option<i64> {
    p.chern().ok().and_then(|n| n.to_string().parse().ok())
}

fn exact_at(family: Family, mu: i64, s: &SValue) -> Result<Exact, String> {
    let p = exact_pairing(family, mu, s).map_err(|e| e.to_string())?;
    let rank = rank_pairing(family, mu, s).map_err(|e| e.to_string())?;
    Ok(Exact {
        s_label: s.to_string(),
        pairing_text: p.pairing.to_string(),
        chern: as_i64(&p),
        rank: rank.to_string(),
    })
}

/// Symbolic `s` under a time budget, falling back to sampled rationals.
fn exact_with_budget(
    family: Family,
    mu: i64,
    s: &SValue,
    budget: Duration,
) -> Result<Exact, String> {
    if family != Family::Podles || *s != SValue::Symbolic {
        return exact_at(family, mu, s);
    }
    let (tx, rx) = mpsc::channel();
    let sv = s.clone();
    thread::spawn(move || {
        let _ = tx.send(exact_at(family, mu, &sv));
    });
    match rx.recv_timeout(budget) {
        Ok(r) => r,
        Err(_) => {
            log::warn!(
                "mu={mu}: symbolic s exceeded {}s; sampling s at 0, 1/3, 1/2, 1",
                budget.as_secs()
            );
            let mut cherns = Vec::new();
            let mut ranks = Vec::new();
            for sv in sample_values() {
                let e = exact_at(family, mu, &sv)?;
                cherns.push(e.chern);
                ranks.push(e.rank);
            }
            let chern = if cherns.iter().all(|c| *c == cherns[0]) {
                cherns[0]
            } else {
                None
            };
            let rank = if ranks.iter().all(|r| *r == ranks[0]) {
                ranks[0].clone()
            } else {
                ranks.join(";")
            };
            let labels: Vec<String> = sample_values().iter().map(|v| v.to_string()).collect();
            Ok(Exact {
                s_label: format!("sampled:{}", labels.join(";")),
                pairing_text: cherns
                    .iter()
                    .map(|c| c.map_or("?".into(), |v| v.to_string()))
                    .collect::<Vec<_>>()
                    .join(";"),
                chern,
                rank,
            })
        }
    }
}

pub struct Context {
    pub quotient: Option<QuotientBasis>,
}

impl Context {
    pub fn new(args: &RunArgs) -> Result<Context, String> {
        let wants = args
            .verify
            .as_ref()
            .is_some_and(|v| v.contains(&Suite::Connection));
        let quotient = if wants && args.common.family == Family::Podles {
            let d = args.common.mu.max_abs().max(1) as usize;
            Some(quotient_basis(&args.common.s, d).map_err(|e| e.to_string())?)
        } else {
            None
        };
        Ok(Context { quotient })
    }
}

fn record_checks(args: &RunArgs, ctx: &Context, mu: i64) -> Result<BTreeMap<Suite, bool>, String> {
    let mut out = BTreeMap::new();
    let suites = args.verify.clone().unwrap_or_default();
    if suites.is_empty() {
        return Ok(out);
    }
    let c = ell(args.common.family, mu, &args.common.s);
    for suite in suites {
        let ok = match suite {
            Suite::Connection => verify_connection(&c, ctx.quotient.as_ref())
                .map_err(|e| e.to_string())?
                .passed(),
            Suite::Idempotent => idempotent(&c).idempotency_defect().is_empty(),
            _ => continue,
        };
        out.insert(suite, ok);
    }
    Ok(out)
}

fn numeric_params(args: &RunArgs) -> NumericParams {
    let half = BigRational::new(1.into(), 2.into());
    let s = match &args.common.s {
        SValue::Exact(r) => r.clone(),
        SValue::Symbolic => half.clone(),
    };
    NumericParams {
        p: args.p.as_ref().map_or(half.clone(), |r| r.0.clone()),
        q: args.q.as_ref().map_or(half, |r| r.0.clone()),
        s,
    }
}

pub fn compute_record(args: &RunArgs, ctx: &Context, mu: i64) -> ReportRecord {
    let start = Instant::now();
    let family = args.common.family;
    let mut rec = ReportRecord {
        family,
        mu,
        s: match family {
            Family::Heegaard => "-".into(),
            Family::Podles => args.common.s.to_string(),
        },
        rank: None,
        chern: None,
        exact_expr: None,
        numeric: None,
        verification: BTreeMap::new(),
        error: None,
        elapsed_ms: 0,
    };
    let fail = |rec: &mut ReportRecord, e: String| {
        log::error!("mu={mu}: {e}");
        rec.error.get_or_insert(e);
    };
    if args.mode != Mode::Numeric {
        let budget = Duration::from_secs(args.time_budget_secs);
        match exact_with_budget(family, mu, &args.common.s, budget) {
            Ok(e) => {
                if family == Family::Podles {
                    rec.s = e.s_label;
                }
                rec.rank = Some(e.rank);
                rec.chern = e.chern;
                rec.exact_expr = Some(e.pairing_text);
            }
            Err(e) => fail(&mut rec, e),
        }
    }
    if args.mode != Mode::Exact {
        match numeric_pairing(family, mu, &numeric_params(args), args.truncation) {
            Ok(n) => {
                let target = rec.chern.unwrap_or(mu) as f64;
                rec.numeric = Some(NumericOutcome {
                    estimate: n.estimate,
                    tail_bound: n.tail_bound,
                    agrees: (n.estimate - target).abs() <= n.tail_bound + 1e-9,
                });
            }
            Err(e) => fail(&mut rec, e.to_string()),
        }
    }
    match record_checks(args, ctx, mu) {
        Ok(v) => rec.verification = v,
        Err(e) => fail(&mut rec, e),
    }
    rec.elapsed_ms = start.elapsed().as_millis();
    log::info!("mu={mu} done in {} ms", rec.elapsed_ms);
    rec
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckRow {
    pub suite: Suite,
    pub item: String,
    pub passed: bool,
    pub detail: String,
}

fn row(suite: Suite, item: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckRow {
    CheckRow {
        suite,
        item: item.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_suite(
    suite: Suite,
    family: Family,
    mus: &[i64],
    s: &SValue,
    degree: usize,
) -> Vec<CheckRow> {
    match suite {
        Suite::Confluence => [
            heegaard_presentation(),
            qsu2_presentation(),
            s2pq_presentation(),
            podles_presentation(),
        ]
        .iter()
        .map(|p| {
            let n = check_confluence(p).len();
            row(suite, p.name(), n == 0, format!("{n} unresolved overlaps"))
        })
        .collect(),
        Suite::Connection => {
            let max = mus.iter().map(|m| m.abs()).max().unwrap_or(0).max(1) as usize;
            let qb = match family {
                Family::Podles => match quotient_basis(s, max) {
                    Ok(q) => Some(q),
                    Err(e) => return vec![row(suite, "quotient", false, e.to_string())],
                },
                Family::Heegaard => None,
            };
            mus.iter()
                .map(|&mu| {
                    let c = ell(family, mu, s);
                    match verify_connection(&c, qb.as_ref()) {
                        Ok(r) => row(
                            suite,
                            format!("{family} mu={mu}"),
                            r.passed(),
                            format!(
                                "unit={} m={} canonical={}",
                                r.unit_ok, r.m_contraction, r.canonical_ok
                            ),
                        ),
                        Err(e) => row(suite, format!("{family} mu={mu}"), false, e.to_string()),
                    }
                })
                .collect()
        }
        Suite::Idempotent => mus
            .iter()
            .map(|&mu| {
                let e = idempotent(&ell(family, mu, s));
                let defect = e.idempotency_defect();
                row(
                    suite,
                    format!("{family} mu={mu}"),
                    defect.is_empty(),
                    format!("size {}, {} defective entries", e.size(), defect.len()),
                )
            })
            .collect(),
        Suite::Representations => {
            let mut rows: Vec<CheckRow> =
                [rho1(), rho2(), sigma1(), sigma2(), pi_minus(), pi_plus()]
                    .iter()
                    .map(|r| match rep_check(r) {
                        Ok(n) => row(suite, r.name(), true, format!("{n} identities")),
                        Err(e) => row(suite, r.name(), false, e.to_string()),
                    })
                    .collect();
            rows.push(match restriction_check() {
                Ok(()) => row(suite, "restriction", true, "sigma_i restrict to rho_i"),
                Err(e) => row(suite, "restriction", false, e.to_string()),
            });
            rows.push(row(
                suite,
                "lambda_boundary",
                lambda_boundary_holds(),
                "lambda_0 = 0 for both signs",
            ));
            rows
        }
        Suite::Quotient => (0..=degree)
            .map(|d| match quotient_basis(s, d) {
                Ok(q) => {
                    let dump = q.dump();
                    row(
                        suite,
                        format!("s={s} d={d}"),
                        q.dimension() == 2 * d + 1,
                        format!(
                            "dimension {} representatives {}{}",
                            q.dimension(),
                            dump.representatives.join(", "),
                            if q.alpha_power_representatives() {
                                ""
                            } else {
                                " (not alpha powers)"
                            }
                        ),
                    )
                }
                Err(e) => row(suite, format!("s={s} d={d}"), false, e.to_string()),
            })
            .collect(),
    }
}

/// Whether the character pairing came out as exactly 1.
pub fn rank_is_one(rank: &Option<String>) -> bool {
    rank.as_deref() == Some(RationalFunction::one().to_string().as_str())
}
