//! Agreement suite: runs the infinitesimal and ε-δ checker families on the
//! same (function, site, notion) triples and tallies how their decided
//! verdicts relate.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nonstd_core::classical::{ed_continuity, ed_derivative, ed_limit, EdOptions, EpsSchedule};
use nonstd_core::expr::symbolic_diff;
use nonstd_core::nsa::{
    eq1_check, eq1_pairs, nsa_continuity, nsa_derivative, nsa_differentiable_two_point, nsa_limit, NsaConfig, ProbeSet,
};
use nonstd_core::rat::{self, Rat};
use nonstd_core::riemann::{classical_integral, default_mesh_probes, nsa_integral};
use nonstd_core::verdict::{Status, Verdict};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Entry, Notion, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    BothProved,
    BothRefuted,
    Disagreement,
    Undecided,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::BothProved => "both-PROVED",
            Outcome::BothRefuted => "both-REFUTED",
            Outcome::Disagreement => "DISAGREE",
            Outcome::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub expr: String,
    pub site: String,
    pub notion: &'static str,
    pub nsa: Status,
    pub classical: Status,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_point: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq1: Option<Status>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub both_proved: usize,
    pub both_refuted: usize,
    pub disagreement: usize,
    pub undecided: usize,
}

impl Tally {
    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::BothProved => self.both_proved += 1,
            Outcome::BothRefuted => self.both_refuted += 1,
            Outcome::Disagreement => self.disagreement += 1,
            Outcome::Undecided => self.undecided += 1,
        }
    }

    pub fn decided(&self) -> usize {
        self.both_proved + self.both_refuted + self.disagreement
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub entries: usize,
    pub total: Tally,
    pub by_notion: BTreeMap<&'static str, Tally>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct XcheckConfig {
    pub nsa: NsaConfig,
    pub ed: EdOptions,
    pub schedule: EpsSchedule,
    pub probes: Option<ProbeSet>,
    /// Forces `f(a) = 0` at undefined points for every entry.
    pub extend_zero: bool,
}

impl Default for XcheckConfig {
    fn default() -> Self {
        XcheckConfig {
            nsa: NsaConfig::default(),
            ed: EdOptions::default(),
            schedule: EpsSchedule::default(),
            probes: None,
            extend_zero: false,
        }
    }
}

fn outcome(nsa: &Verdict, classical: &Verdict) -> Outcome {
    match (nsa.status, classical.status) {
        (Status::Proved, Status::Proved) => Outcome::BothProved,
        (Status::Refuted, Status::Refuted) => Outcome::BothRefuted,
        (Status::Proved, Status::Refuted) | (Status::Refuted, Status::Proved) => Outcome::Disagreement,
        _ => Outcome::Undecided,
    }
}

/// The value the classical side is asked to confirm: the exact NSA value, the
/// midpoint of its enclosure, or zero when the NSA side produced nothing.
fn candidate(v: &Verdict) -> Rat {
    match (&v.value, &v.enclosure) {
        (Some(x), _) => x.clone(),
        (None, Some(e)) => e.mid(),
        _ => rat::int(0),
    }
}

fn shown(v: &Verdict) -> Option<String> {
    match (&v.value, &v.enclosure) {
        (Some(x), _) => Some(x.to_string()),
        (None, Some(e)) => Some(e.to_string()),
        _ => None,
    }
}

/// Short decimal rendering of an exact value or enclosure for the table.
fn approx(s: &str) -> String {
    let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) else {
        return s.to_string();
    };
    let mid = inner
        .split_once(", ")
        .and_then(|(a, b)| Some((rat::parse_rat(a)? + rat::parse_rat(b)?) / rat::int(2)))
        .and_then(|m| m.to_f64());
    match mid {
        Some(m) => format!("~{:.12}", m),
        None => s.to_string(),
    }
}

fn run_one(e: &Entry, notion: Notion, cfg: &XcheckConfig) -> Row {
    let extend = cfg.extend_zero || e.extend_zero;
    let nsa_cfg = cfg.nsa.clone().extend_zero(extend);
    let ed = cfg.ed.clone().extend_zero(extend);
    let probes = cfg.probes.clone().unwrap_or_else(|| nsa_cfg.probes());
    let prec = cfg.nsa.eval.prec;
    let f = &e.f;
    let mut two_point = None;
    let mut eq1 = None;
    let (nsa, classical) = match (&e.site, notion) {
        (Site::Point(a), Notion::Limit) => {
            let n = nsa_limit(f, a, &probes, &nsa_cfg);
            let c = ed_limit(f, a, &candidate(&n), &cfg.schedule, &ed);
            (n, c)
        }
        (Site::Point(a), Notion::Continuity) => {
            (nsa_continuity(f, a, &probes, &nsa_cfg), ed_continuity(f, a, &cfg.schedule, &ed))
        }
        (Site::Point(a), Notion::Derivative) => {
            let n = nsa_derivative(f, a, &probes, &nsa_cfg);
            let c = ed_derivative(f, &candidate(&n), a, &cfg.schedule, &ed);
            two_point = Some(nsa_differentiable_two_point(f, a, &probes.pairs(), &nsa_cfg).status);
            if let Ok(fp) = symbolic_diff(f) {
                let pairs = match &cfg.probes {
                    Some(p) => p.pairs(),
                    None => eq1_pairs(&nsa_cfg.eval.trunc_order),
                };
                eq1 = Some(eq1_check(f, &fp, a, &pairs, &nsa_cfg).status);
            }
            (n, c)
        }
        (Site::Range(a, b), Notion::Integral) => {
            let mesh = default_mesh_probes(&nsa_cfg.eval.trunc_order);
            let n = nsa_integral(f, a, b, &mesh, &cfg.schedule, prec);
            let c = classical_integral(f, a, b, &cfg.schedule, prec);
            (n, c)
        }
        _ => unreachable!("corpus parser pairs notions with sites"),
    };
    let mut out = outcome(&nsa, &classical);
    if out == Outcome::BothProved && notion == Notion::Integral {
        let enc = |v: &Verdict| match (&v.value, &v.enclosure) {
            (Some(x), _) => nonstd_core::interval::RatInterval::point(x.clone()),
            (None, Some(e)) => e.clone(),
            _ => unreachable!("proved integrals carry a value"),
        };
        if !enc(&nsa).intersects(&enc(&classical)) {
            out = Outcome::Disagreement;
        }
    }
    Row {
        expr: e.source.clone(),
        site: e.site.to_string(),
        notion: notion.as_str(),
        nsa: nsa.status,
        classical: classical.status,
        outcome: out,
        value: shown(&nsa),
        two_point,
        eq1,
    }
}

/// Runs every (entry, notion) pair. Rows come back in corpus order whatever
/// the thread count.
pub fn run_xcheck(corpus: &[Entry], cfg: &XcheckConfig) -> AgreementReport {
    let jobs: Vec<(&Entry, Notion)> = corpus.iter().flat_map(|e| e.notions.iter().map(move |n| (e, *n))).collect();
    let rows: Vec<Row> = jobs.par_iter().map(|(e, n)| run_one(e, *n, cfg)).collect();
    let mut total = Tally::default();
    let mut by_notion = BTreeMap::new();
    for n in Notion::ALL {
        by_notion.insert(n.as_str(), Tally::default());
    }
    for r in &rows {
        total.add(r.outcome);
        by_notion.get_mut(r.notion).expect("known notion").add(r.outcome);
    }
    AgreementReport {
        entries: corpus.len(),
        total,
        by_notion,
        rows,
    }
}

impl AgreementReport {
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let opt = |o: Option<Status>| o.map_or("-", Status::as_str);
        writeln!(s, "{:<22} {:<9} {:<11} {:<10} {:<10} {:<13} {:<10} {:<10} value", "expr", "site", "notion", "nsa", "classical", "outcome", "two-point", "eq1").unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{:<22} {:<9} {:<11} {:<10} {:<10} {:<13} {:<10} {:<10} {}",
                r.expr,
                r.site,
                r.notion,
                r.nsa.as_str(),
                r.classical.as_str(),
                r.outcome.as_str(),
                opt(r.two_point),
                opt(r.eq1),
                r.value.as_deref().map(approx).unwrap_or_default()
            )
            .unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "{:<11} {:>12} {:>13} {:>9} {:>10}", "notion", "both-PROVED", "both-REFUTED", "disagree", "undecided").unwrap();
        let line = |s: &mut String, name: &str, t: &Tally| {
            writeln!(s, "{:<11} {:>12} {:>13} {:>9} {:>10}", name, t.both_proved, t.both_refuted, t.disagreement, t.undecided).unwrap();
        };
        for (n, t) in &self.by_notion {
            line(&mut s, n, t);
        }
        line(&mut s, "total", &self.total);
        s
    }
}
