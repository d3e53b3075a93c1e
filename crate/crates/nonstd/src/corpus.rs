//! Cross-check corpus: one entry per line, `expr ; point-or-range ; notions`.
//!
//! A point is a rational `p/q`; a range is `[a, b]`. Notions are a comma
//! list drawn from `limit`, `continuity`, `derivative`, `integral`, plus the
//! marker `extend-zero`. Blank lines and `#` comments are skipped.

use std::fmt;

use nonstd_core::expr::{parse, Expr};
use nonstd_core::rat::{self, Rat};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    Limit,
    Continuity,
    Derivative,
    Integral,
}

impl Notion {
    pub const ALL: [Notion; 4] = [Notion::Limit, Notion::Continuity, Notion::Derivative, Notion::Integral];

    pub fn as_str(self) -> &'static str {
        match self {
            Notion::Limit => "limit",
            Notion::Continuity => "continuity",
            Notion::Derivative => "derivative",
            Notion::Integral => "integral",
        }
    }

    fn needs_range(self) -> bool {
        self == Notion::Integral
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    Point(Rat),
    Range(Rat, Rat),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Point(a) => write!(f, "{}", a),
            Site::Range(a, b) => write!(f, "[{}, {}]", a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub source: String,
    pub f: Expr,
    pub site: Site,
    pub notions: Vec<Notion>,
    pub extend_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "corpus line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for CorpusError {}

fn parse_site(s: &str) -> Option<Site> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (a, b) = inner.split_once(',')?;
        let (a, b) = (rat::parse_rat(a.trim())?, rat::parse_rat(b.trim())?);
        return (a < b).then_some(Site::Range(a, b));
    }
    rat::parse_rat(s).map(Site::Point)
}

pub fn parse_entry(line: &str) -> Result<Entry, String> {
    let fields: Vec<&str> = line.split(';').map(str::trim).collect();
    let [src, site, notions] = fields[..] else {
        return Err(format!("expected 3 ';'-separated fields, found {}", fields.len()));
    };
    let f = parse(src).map_err(|e| format!("{}: {}", src, e))?;
    let site = parse_site(site).ok_or_else(|| format!("bad point or range '{}'", site))?;
    let mut out = Vec::new();
    let mut extend_zero = false;
    for n in notions.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        let notion = match n {
            "extend-zero" => {
                extend_zero = true;
                continue;
            }
            "limit" => Notion::Limit,
            "continuity" => Notion::Continuity,
            "derivative" => Notion::Derivative,
            "integral" => Notion::Integral,
            other => return Err(format!("unknown notion '{}'", other)),
        };
        if notion.needs_range() != matches!(site, Site::Range(..)) {
            return Err(format!("notion '{}' does not fit site {}", n, site));
        }
        if !out.contains(&notion) {
            out.push(notion);
        }
    }
    if out.is_empty() {
        return Err("no notions given".into());
    }
    Ok(Entry {
        source: src.to_string(),
        f,
        site,
        notions: out,
        extend_zero,
    })
}

pub fn parse_corpus(text: &str) -> Result<Vec<Entry>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_entry(line).map_err(|msg| CorpusError { line: i + 1, msg })?);
    }
    Ok(out)
}

pub const BUILTIN: &str = "\
x^2 ; 3 ; limit, continuity, derivative
x^3 ; 2 ; limit, continuity, derivative
(x^2 - 1)/(x - 1) ; 1 ; limit, continuity
1/x ; 0 ; limit, continuity, derivative
1/x ; 2 ; limit, continuity, derivative
abs(x) ; 0 ; limit, continuity, derivative
abs(x)/x ; 0 ; limit
x^2*sin(1/x) ; 0 ; continuity, derivative, extend-zero
x*sin(1/x) ; 0 ; continuity, derivative, extend-zero
sin(1/x) ; 0 ; continuity, extend-zero
sin(x)/x ; 0 ; limit
sin(x) ; 0 ; limit, continuity, derivative
cos(x) ; 1/2 ; limit, continuity, derivative
exp(x) ; 0 ; limit, continuity, derivative
ln(x) ; 1 ; limit, continuity, derivative
sqrt(x) ; 1/4 ; continuity, derivative
sqrt(abs(x)) ; 0 ; continuity, derivative
(x^3 - 8)/(x - 2) ; 2 ; limit
x^2 ; [0, 1] ; integral
5 ; [2, 7] ; integral
x ; [0, 1] ; integral
sin(x) ; [0, 3] ; integral
sqrt(x) ; [0, 1] ; integral
1/x ; [1, 2] ; integral
exp(x) ; [-1, 1] ; integral
abs(x) ; [-1, 1] ; integral
x^3 - x ; [-2, 2] ; integral
1/x ; [-1, 1] ; integral
";

pub fn builtin() -> Vec<Entry> {
    parse_corpus(BUILTIN).expect("built-in corpus parses")
}

fn small_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    rat::ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32) -> String {
    let deg = rng.gen_range(1..=max_deg);
    let mut out = String::new();
    for k in (0..=deg).rev() {
        let mut c = small_rat(rng, 9, 4);
        if k == deg && c == rat::int(0) {
            c = rat::int(1);
        }
        if c == rat::int(0) {
            continue;
        }
        let neg = c < rat::int(0);
        let mag = if neg { -c } else { c };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        let coeff = if mag == rat::int(1) && k > 0 { String::new() } else { format!("{}", mag) };
        let sep = if coeff.is_empty() { "" } else { "*" };
        out.push_str(&match k {
            0 => coeff,
            1 => format!("{}{}x", coeff, sep),
            _ => format!("{}{}x^{}", coeff, sep, k),
        });
    }
    out
}

/// Seeded random polynomial entries: half pointwise, half integrals.
pub fn random_entries(seed: u64, count: usize) -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let poly = random_poly(&mut rng, 4);
            let line = if i % 2 == 0 {
                format!("{} ; {} ; limit, continuity, derivative", poly, small_rat(&mut rng, 12, 4))
            } else {
                let a = small_rat(&mut rng, 8, 4);
                let b = &a + rat::ratio(rng.gen_range(1..=12), rng.gen_range(1..=4));
                format!("{} ; [{}, {}] ; integral", poly, a, b)
            };
            parse_entry(&line).expect("generated entry parses")
        })
        .collect()
}
