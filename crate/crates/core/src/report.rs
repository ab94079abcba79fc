//! Named checks with expected values, the acceptance criteria built from
//! them, and the JSON report.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coset::{coset_table, presentation_certificate, CertificateKind, Strategy, DEFAULT_MAX_COSETS};
use crate::error::{Error, Result};
use crate::families::{lysenok_image, relator_family, FamilyKind};
use crate::limits::{invariant_hom_dim, limit_bound as find_bound, st3_rank_bound, LimitSystem};
use crate::linalg::{abelianization as ab_invariants, minors_diagonal, snf, IntMatrix};
use crate::nilq4::{independence_labels, listed_images, listed_orders, parse_commutator, qn_build, QnGroup};
use crate::perm::Perm;
use crate::pquot::{cocycle_h2_dim, multiplier_report, p_cover, pquotient, MultiplierReport, DEFAULT_MAX_CLASS};
use crate::presentation::Presentation;
use crate::quotients::{branch_subgroup_checks, expected_log2_kernel, expected_log2_order, kernel_data, quotient_group};
use crate::stab::{pair_identity_check, PairFamily, MAX_PAIR_INDEX};
use crate::tree::{is_trivial_g, level_perm, nucleus_depth};
use crate::word::{letter, Alphabet, FreeWord};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_SEED: u64 = 20_050_301;

/// Index of `K` in `Gₙ`, constant for `n ≥ 3`.
pub const GOLDEN_K_INDEX: u32 = 16;

/// Coset bound for the level-5 enumerations of the deep profile (`|G₅| = 2²²`).
pub const DEEP_MAX_COSETS: usize = 8_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Default,
    Deep,
}

impl Profile {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "default" => Some(Profile::Default),
            "deep" => Some(Profile::Deep),
            _ => None,
        }
    }

    /// `GQUOT_PROFILE`, falling back to the default profile.
    pub fn from_env() -> Self {
        std::env::var("GQUOT_PROFILE").ok().and_then(|s| Profile::from_name(&s)).unwrap_or(Profile::Default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Resource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The statement being checked.
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    /// Passes iff the two renderings agree.
    pub fn compare(name: impl Into<String>, anchor: &str, expected: impl Display, computed: impl Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let verdict = if expected == computed { Verdict::Pass } else { Verdict::Fail };
        Check { name: name.into(), anchor: anchor.into(), expected, computed, verdict, detail: None }
    }

    /// A check whose computation returned an error.
    pub fn from_error(name: impl Into<String>, anchor: &str, expected: impl Display, e: &Error) -> Self {
        let verdict = if e.is_resource() { Verdict::Resource } else { Verdict::Fail };
        Check {
            name: name.into(),
            anchor: anchor.into(),
            expected: expected.to_string(),
            computed: format!("error: {e}"),
            verdict,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    /// Milliseconds per check group. The only field that changes between identical runs.
    pub timings: BTreeMap<String, u64>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, parameters: BTreeMap<String, String>) -> Self {
        Report { command: command.into(), parameters, checks: Vec::new(), timings: BTreeMap::new(), version: VERSION.into() }
    }

    pub fn push_group(&mut self, group: &str, elapsed: Duration, checks: Vec<Check>) {
        self.timings.insert(group.into(), elapsed.as_millis() as u64);
        self.checks.extend(checks);
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// 0 when every check passes, 1 on any failure, 2 when only resource limits were hit.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            1
        } else if self.checks.iter().any(|c| c.verdict == Verdict::Resource) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON with `timings` emptied, for comparing runs.
    pub fn stable_json(&self) -> String {
        let mut r = self.clone();
        r.timings.clear();
        r.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Resource => "LIMIT",
            };
            out.push_str(&format!("{v:5} {}: expected {}, computed {}\n", c.name, c.expected, c.computed));
        }
        out
    }
}

/// Runs `f`, turning an error into a single failing or resource-limited check.
fn guarded(name: &str, anchor: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    match f() {
        Ok(v) => v,
        Err(e) => vec![Check::from_error(name, anchor, "no error", &e)],
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn time_check(name: &str, anchor: &str, elapsed: Duration, limit_secs: u64) -> Check {
    let want = format!("under {limit_secs} s");
    let got = if elapsed < Duration::from_secs(limit_secs) { want.clone() } else { format!("{:.1} s", elapsed.as_secs_f64()) };
    Check::compare(name, anchor, want, got)
}

fn pow2(e: u64) -> String {
    format!("2^{e}")
}

fn order_string(n: usize) -> String {
    if n.is_power_of_two() {
        pow2(n.trailing_zeros() as u64)
    } else {
        n.to_string()
    }
}

fn abcd_word(w: &FreeWord) -> Result<FreeWord> {
    FreeWord::from_letters(Alphabet::Abcd, w.letters().to_vec())
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "true"
    } else {
        "false"
    }
}

const ORDER_ANCHOR: &str = "|G_n| = 2^(5*2^(n-3)+2) for n >= 3, |G_1| = 2, |G_2| = 8";

/// `|Gₙ|` from the stabilizer chain.
pub fn order(level: usize) -> Result<Vec<Check>> {
    let g = quotient_group(level)?;
    let got = g.log2_order().map(pow2).unwrap_or_else(|| g.order().to_string());
    Ok(vec![Check::compare(format!("order.{level}"), ORDER_ANCHOR, pow2(expected_log2_order(level)), got)])
}

const RELATOR_ANCHOR: &str = "relators of the presentations act trivially on the tree levels";

/// Whether every relator of the family acts trivially on level `level`.
pub fn check_relators(kind: FamilyKind, param: usize, level: usize) -> Result<Vec<Check>> {
    let fam = relator_family(kind, param)?;
    let mut out = Vec::new();
    for lw in &fam.words {
        let p = level_perm(&abcd_word(&lw.word)?, level)?;
        let got = if p.is_identity() { "identity" } else { "nonidentity" };
        out.push(Check::compare(format!("relators.{kind}.{param}.{}.level{level}", lw.label), RELATOR_ANCHOR, "identity", got));
    }
    Ok(out)
}

const ENUM_ANCHOR: &str = "coset enumeration over the trivial subgroup returns |G_n|";

/// Todd–Coxeter certificate for one of the presentations.
pub fn enumerate(kind: CertificateKind, level: usize, max_cosets: usize) -> Result<Vec<Check>> {
    let name = format!("enumerate.{}.{level}", kind_name(kind));
    let c = presentation_certificate(kind, level, max_cosets)?;
    let want = pow2(c.expected_log2_order);
    let order_check = match c.enumerated_order {
        Some(o) => Check::compare(format!("{name}.order"), ENUM_ANCHOR, want, order_string(o)),
        None => Check::from_error(
            format!("{name}.order"),
            ENUM_ANCHOR,
            want,
            &Error::Resource(format!("coset bound {max_cosets} exceeded")),
        ),
    };
    Ok(vec![
        order_check,
        Check::compare(format!("{name}.relators_vanish"), "the presentation maps onto G_n", "true", mark(c.relators_vanish)),
    ])
}

fn kind_name(kind: CertificateKind) -> &'static str {
    match kind {
        CertificateKind::Thm1 => "thm1",
        CertificateKind::Thm4 => "thm4",
        CertificateKind::Wreath => "wreath",
    }
}

fn invariants_string(inv: &[BigInt], free_rank: usize) -> String {
    let mut parts: Vec<String> = inv.iter().map(|d| format!("C{d}")).collect();
    if free_rank > 0 {
        parts.push(format!("Z^{free_rank}"));
    }
    if parts.is_empty() {
        "trivial".into()
    } else {
        parts.join(" x ")
    }
}

/// Abelian invariants of a presented group.
pub fn abelianization(kind: FamilyKind, level: usize) -> Result<Vec<Check>> {
    let p = Presentation::from_family(&relator_family(kind, level)?);
    let a = ab_invariants(&p);
    Ok(vec![Check::compare(
        format!("abelianization.{kind}.{level}"),
        "G_n^ab = C2 x C2 x C2",
        "C2 x C2 x C2",
        invariants_string(&a.nontrivial(), a.free_rank()),
    )])
}

const H2_ANCHOR: &str = "dim H^2(G_n, F2) = 2n+1 and M(G_n) has 2-rank 2n-2";
const INDEP_ANCHOR: &str = "the 2n+1 relators of the three-generator presentation are independent";

fn multiplier_checks(m: &MultiplierReport) -> Vec<Check> {
    let n = m.level;
    let pre = format!("multiplier.{n}");
    vec![
        Check::compare(format!("{pre}.h2_dim"), H2_ANCHOR, 2 * n + 1, m.h2_dim),
        Check::compare(format!("{pre}.schur_mod2_rank"), H2_ANCHOR, 2 * n - 2, m.schur_mod2_rank),
        Check::compare(format!("{pre}.relator_image_rank"), INDEP_ANCHOR, 2 * n + 1, m.relator_image_rank),
        Check::compare(format!("{pre}.independent"), INDEP_ANCHOR, "true", mark(m.relators_independent)),
    ]
}

/// Mod-2 multiplicator data of the three-generator presentation.
pub fn multiplier(level: usize) -> Result<Vec<Check>> {
    let m = multiplier_report(level)?;
    let detail = serde_json::to_value(&m).expect("serializes");
    let mut out = multiplier_checks(&m);
    out[0].detail = Some(detail);
    Ok(out)
}

const QN_ANCHOR: &str = "images of the capital relators in Q_n = K_n / [K_n, F] gamma_5(F) F''";

fn listed_image_names(n: usize) -> [&'static str; 4] {
    if n == 3 {
        ["[b,c]", "[a,d]^2", "[a,c]^2", "[a,b,c]^-2"]
    } else {
        ["[b,c]", "[a,d]^2", "[a,c]^4", "[a,d]^2[a,c,d]^2"]
    }
}

fn qn_image_checks(q: &QnGroup, n: usize) -> Result<Vec<Check>> {
    let fam = relator_family(FamilyKind::Hopf, n)?;
    let labels = independence_labels(n);
    let names = listed_image_names(n);
    let mut out = Vec::new();
    let mut words = Vec::new();
    for ((label, want), listed) in labels.iter().zip(names).zip(listed_images(n)) {
        let w = fam.get(label).expect("label in family").clone();
        let got = if q.equal(&w, &listed)? {
            want.to_string()
        } else {
            let c = q.image(&w)?;
            format!("{:?} mod {:?}", c.values, c.moduli)
        };
        out.push(Check::compare(format!("qn.{n}.image.{label}"), QN_ANCHOR, want, got));
        words.push(w);
    }
    out.push(
        Check::compare(format!("qn.{n}.joint_rank"), QN_ANCHOR, 4, q.rank_of(&words)?)
            .with_detail(json!({ "invariant_factors": q.invariant_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>() })),
    );
    Ok(out)
}

fn qn_order_checks(q: &QnGroup, n: usize, weight2_only: bool) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, want) in listed_orders(n) {
        if weight2_only && name.matches(',').count() > 1 {
            continue;
        }
        let got = q.order_of(&parse_commutator(name)?)?;
        out.push(Check::compare(format!("qn.{n}.order.{name}"), QN_ANCHOR, want, got));
    }
    Ok(out)
}

/// Structure of `Qₙ` against the listed images and orders.
pub fn qn(level: usize) -> Result<Vec<Check>> {
    let q = qn_build(level)?;
    let mut out = qn_image_checks(&q, level)?;
    out.extend(qn_order_checks(&q, level, false)?);
    Ok(out)
}

const PAIR_ANCHOR: &str = "psi(x_i) = (1, x_(i-1)) for the recursive relator families";

/// The pair identities for one family over its full index range.
pub fn pair_identities(family: PairFamily, max_index: usize) -> Result<Vec<Check>> {
    let mut bad = Vec::new();
    for i in family.min_index()..=max_index {
        if !pair_identity_check(family, i)?.holds() {
            bad.push(i);
        }
    }
    let range = format!("{}..={max_index}", family.min_index());
    let got = if bad.is_empty() { format!("holds for {range}") } else { format!("fails at {bad:?}") };
    Ok(vec![Check::compare(format!("pair.{}", family.symbol()), PAIR_ANCHOR, format!("holds for {range}"), got)])
}

const KERNEL_ANCHOR: &str = "Ker(G_n -> G_(n-1)) is elementary abelian of order 2^(5*2^(n-4))";

pub fn kernels(level: usize) -> Result<Vec<Check>> {
    let k = kernel_data(level)?;
    Ok(vec![
        Check::compare(format!("kernel.{level}.order"), KERNEL_ANCHOR, pow2(expected_log2_kernel(level)), pow2(k.log2_order)),
        Check::compare(format!("kernel.{level}.elementary_abelian"), KERNEL_ANCHOR, "true", mark(k.elementary_abelian)),
    ])
}

const K_ANCHOR: &str = "St(3) <= K = <(ab)^2>^G, with [G : K] = 16";

pub fn branch_subgroup(level: usize) -> Result<Vec<Check>> {
    let b = branch_subgroup_checks(level)?;
    Ok(vec![
        Check::compare(format!("branch.{level}.st3_in_k"), K_ANCHOR, "true", mark(b.st3_in_k)),
        Check::compare(format!("branch.{level}.k_index"), K_ANCHOR, GOLDEN_K_INDEX, b.k_index),
    ])
}

const WP_LEVEL: usize = 12;

fn verdict_word(b: bool) -> &'static str {
    if b {
        "trivial"
    } else {
        "nontrivial"
    }
}

/// Branch algorithm against triviality on level 12, with the recursion trace.
pub fn branch_wp(w: &FreeWord) -> Result<Vec<Check>> {
    let cert = is_trivial_g(w)?;
    let oracle = level_perm(w, WP_LEVEL)?.is_identity();
    let depth = nucleus_depth(w)?;
    Ok(vec![Check::compare(
        "branch_wp",
        "the section recursion decides the word problem",
        verdict_word(oracle),
        verdict_word(cert.verdict),
    )
    .with_detail(json!({ "word": w.to_string(), "nucleus_depth": depth, "trace": cert.trace }))])
}

fn h2_dim(n: usize) -> Result<usize> {
    Ok(multiplier_report(n)?.h2_dim)
}

const FIVE_TERM_ANCHOR: &str = "dim H^2(G_(n+k)) >= dim H^2(G_n) - dim Hom(Ker, F2)^(G_n), and the latter is bounded by d(St(3))";

/// The five-term bookkeeping at one grid point against the St(3) bound.
pub fn invariant_homs(n: usize, k: usize, bound: u64) -> Result<Vec<Check>> {
    let d = invariant_hom_dim(n, k)?;
    let (lo, hi) = (h2_dim(n)? as i64, h2_dim(n + k)? as i64);
    let pre = format!("invariant_homs.{n}.{k}");
    Ok(vec![
        Check::compare(format!("{pre}.exactness"), FIVE_TERM_ANCHOR, "true", mark(hi >= lo - d as i64))
            .with_detail(json!({ "invariant_hom_dim": d, "h2_n": lo, "h2_n_plus_k": hi })),
        Check::compare(format!("{pre}.bounded"), FIVE_TERM_ANCHOR, "true", mark(d <= bound))
            .with_detail(json!({ "invariant_hom_dim": d, "st3_bound": bound })),
    ])
}

/// Least index by linear scan.
pub fn limit_scan(sys: &LimitSystem, m: u64) -> Option<usize> {
    let target = sys.kernel_bound.checked_mul(m)?;
    sys.dims.iter().position(|&d| d > target).map(|i| sys.offset + i)
}

fn bound_string(r: &Result<usize>) -> String {
    match r {
        Ok(i) => i.to_string(),
        Err(Error::Exhausted) => "exhausted".into(),
        Err(e) => format!("error: {e}"),
    }
}

const LIMIT_ANCHOR: &str = "select i with dim(G_i) > N*M";

pub fn limit_bound(sys: &LimitSystem, m: u64) -> Vec<Check> {
    let want = limit_scan(sys, m).map(|i| i.to_string()).unwrap_or_else(|| "exhausted".into());
    vec![Check::compare(format!("limit_bound.{m}"), LIMIT_ANCHOR, want, bound_string(&find_bound(sys, m)))
        .with_detail(json!({ "kernel_bound": sys.kernel_bound, "offset": sys.offset }))]
}

pub const CRITERIA: [&str; 14] = [
    "orders of G_n via stabilizer chains",
    "relators act trivially on the tree",
    "coset enumeration of the presentations",
    "abelianization of the presentations",
    "mod-2 multiplier",
    "relator independence",
    "Q_n images, joint rank and orders",
    "pair identities",
    "level kernels",
    "branch subgroup K",
    "branch word problem",
    "oracle equivalences",
    "five-term bookkeeping",
    "limit calculator",
];

/// The checks of acceptance criterion `id` (1-based), with names prefixed `cNN.`.
pub fn criterion(id: usize, profile: Profile, seed: u64) -> Vec<Check> {
    let prefix = format!("c{id:02}");
    let checks = match id {
        1 => c01_orders(),
        2 => c02_relators(),
        3 => c03_enumeration(profile),
        4 => c04_abelianization(),
        5 => c05_multiplier(),
        6 => c06_independence(),
        7 => c07_qn(),
        8 => c08_pairs(),
        9 => c09_kernels(),
        10 => c10_branch_subgroup(),
        11 => c11_word_problem(seed),
        12 => c12_oracles(profile, seed),
        13 => c13_five_term(),
        14 => c14_limits(seed),
        _ => vec![Check::compare("unknown", "", "criterion 1..=14", id)],
    };
    checks.into_iter().map(|c| c.prefixed(&prefix)).collect()
}

/// All criteria, run concurrently and ordered by check name.
pub fn report_all(profile: Profile, seed: u64) -> Report {
    let mut params = BTreeMap::new();
    params.insert("profile".into(), format!("{profile:?}").to_lowercase());
    params.insert("seed".into(), seed.to_string());
    let mut report = Report::new("report-all", params);
    let groups: Vec<(usize, Vec<Check>, Duration)> = (1..=CRITERIA.len())
        .into_par_iter()
        .map(|id| {
            let (checks, t) = timed(|| criterion(id, profile, seed));
            (id, checks, t)
        })
        .collect();
    for (id, checks, t) in groups {
        report.push_group(&format!("c{id:02}"), t, checks);
    }
    report.checks.sort_by(|a, b| a.name.cmp(&b.name));
    report
}

fn c01_orders() -> Vec<Check> {
    let (mut out, t) = timed(|| (1..=8).flat_map(|n| guarded(&format!("order.{n}"), ORDER_ANCHOR, || order(n))).collect::<Vec<_>>());
    out.push(time_check("order.time", ORDER_ANCHOR, t, 10));
    out
}

/// Whether a relator holds in the whole group (as opposed to only in `Gₙ`).
fn holds_in_g(label: &str) -> bool {
    !(label.starts_with("w_") || label.starts_with("t_"))
}

fn relator_sweep(kind: FamilyKind, param: usize) -> Result<Check> {
    let fam = relator_family(kind, param)?;
    let mut total = 0;
    let mut bad = Vec::new();
    for lw in &fam.words {
        let w = abcd_word(&lw.word)?;
        let top = if kind == FamilyKind::Lysenok || holds_in_g(&lw.label) { 8 } else { param };
        for m in 1..=top {
            total += 1;
            if !level_perm(&w, m)?.is_identity() {
                bad.push(format!("{}@{m}", lw.label));
            }
        }
    }
    let got = if bad.is_empty() { format!("{total} of {total} identity") } else { format!("{} of {total} identity", total - bad.len()) };
    let check = Check::compare(format!("relators.{kind}.{param}"), RELATOR_ANCHOR, format!("{total} of {total} identity"), got);
    Ok(if bad.is_empty() { check } else { check.with_detail(json!({ "nonidentity": bad })) })
}

fn c02_relators() -> Vec<Check> {
    let (mut out, t) = timed(|| {
        let mut out = Vec::new();
        for kind in [FamilyKind::Thm1, FamilyKind::Thm4] {
            for n in 3..=8 {
                out.extend(guarded(&format!("relators.{kind}.{n}"), RELATOR_ANCHOR, || Ok(vec![relator_sweep(kind, n)?])));
            }
        }
        out.extend(guarded("relators.lysenok.10", RELATOR_ANCHOR, || Ok(vec![relator_sweep(FamilyKind::Lysenok, 10)?])));
        out
    });
    out.push(time_check("relators.time", RELATOR_ANCHOR, t, 10));
    out
}

fn c03_enumeration(profile: Profile) -> Vec<Check> {
    let mut out = Vec::new();
    let top = if profile == Profile::Deep { 5 } else { 4 };
    for n in 3..=top {
        let cap = if n == 5 { DEEP_MAX_COSETS } else { DEFAULT_MAX_COSETS };
        for kind in [CertificateKind::Thm1, CertificateKind::Thm4] {
            let name = format!("enumerate.{}.{n}", kind_name(kind));
            let (checks, t) = timed(|| guarded(&name, ENUM_ANCHOR, || enumerate(kind, n, cap)));
            out.extend(checks);
            if n == 4 {
                out.push(time_check(&format!("{name}.time"), ENUM_ANCHOR, t, 60));
            }
        }
    }
    out
}

fn c04_abelianization() -> Vec<Check> {
    let mut out = Vec::new();
    for kind in [FamilyKind::Thm1, FamilyKind::Thm4] {
        for n in 3..=6 {
            out.extend(guarded(&format!("abelianization.{kind}.{n}"), "G_n^ab", || abelianization(kind, n)));
        }
    }
    out
}

fn c05_multiplier() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 3..=5 {
        let (r, t) = timed(|| multiplier_report(n));
        match r {
            Ok(m) => out.extend(multiplier_checks(&m).into_iter().take(2)),
            Err(e) => out.push(Check::from_error(format!("multiplier.{n}"), H2_ANCHOR, "no error", &e)),
        }
        if n == 5 {
            out.push(time_check("multiplier.5.time", H2_ANCHOR, t, 300));
        }
    }
    out
}

fn c06_independence() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 3..=5 {
        match multiplier_report(n) {
            Ok(m) => out.extend(multiplier_checks(&m).into_iter().skip(2).take(1)),
            Err(e) => out.push(Check::from_error(format!("multiplier.{n}"), INDEP_ANCHOR, "no error", &e)),
        }
    }
    out
}

fn c07_qn() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 3..=5 {
        out.extend(guarded(&format!("qn.{n}"), QN_ANCHOR, || {
            let q = qn_build(n)?;
            let mut v = qn_image_checks(&q, n)?;
            if n == 3 {
                v.extend(qn_order_checks(&q, n, true)?);
            }
            Ok(v)
        }));
    }
    out
}

fn c08_pairs() -> Vec<Check> {
    let mut out = Vec::new();
    for f in [PairFamily::LowerU, PairFamily::LowerV] {
        out.extend(guarded(&format!("pair.{}.eq", f.symbol()), PAIR_ANCHOR, || {
            Ok(pair_identities(f, 10)?.into_iter().map(|c| Check { name: format!("{}.first10", c.name), ..c }).collect())
        }));
    }
    for f in PairFamily::ALL {
        out.extend(guarded(&format!("pair.{}", f.symbol()), PAIR_ANCHOR, || pair_identities(f, MAX_PAIR_INDEX)));
    }
    out
}

fn c09_kernels() -> Vec<Check> {
    (4..=7).flat_map(|n| guarded(&format!("kernel.{n}"), KERNEL_ANCHOR, || kernels(n))).collect()
}

fn c10_branch_subgroup() -> Vec<Check> {
    (4..=8).flat_map(|n| guarded(&format!("branch.{n}"), K_ANCHOR, || branch_subgroup(n))).collect()
}

/// Words of length ≤ 64: half uniform, half products of conjugates of relators.
pub fn random_test_words(seed: u64, count: usize) -> Vec<FreeWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rels: Vec<FreeWord> = ["a^2", "b^2", "c^2", "d^2", "bcd", "(ad)^4", "(ac)^8", "(ab)^16", "(adacac)^4"]
        .iter()
        .map(|s| FreeWord::parse(Alphabet::Abcd, s).unwrap())
        .chain([lysenok_image("(ad)^4", 1), lysenok_image("(ad)^4", 2)])
        .collect();
    let random_word = |rng: &mut ChaCha8Rng, len: usize| {
        let letters = (0..len).map(|_| letter(rng.gen_range(0..4), rng.gen_bool(0.5))).collect();
        FreeWord::from_letters(Alphabet::Abcd, letters).unwrap()
    };
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let len = rng.gen_range(0..=64);
                random_word(&mut rng, len)
            } else {
                let mut w = FreeWord::empty(Alphabet::Abcd);
                loop {
                    let r = &rels[rng.gen_range(0..rels.len())];
                    let u_len = rng.gen_range(0..=8);
                    let u = random_word(&mut rng, u_len);
                    let piece = r.conjugate(&u);
                    if w.len() + piece.len() > 64 {
                        break w;
                    }
                    w = w.concat(&piece);
                }
            }
        })
        .collect()
}

fn c11_word_problem(seed: u64) -> Vec<Check> {
    const COUNT: usize = 1000;
    const ANCHOR: &str = "sections contract into {1, a, b, c, d}; the recursion agrees with the level action";
    guarded("word_problem", ANCHOR, || {
        let words = random_test_words(seed, COUNT);
        let (mut agree, mut shallow, mut trivial) = (0, 0, 0);
        let mut disagreements = Vec::new();
        for w in &words {
            let oracle = level_perm(w, WP_LEVEL)?.is_identity();
            if is_trivial_g(w)?.verdict == oracle {
                agree += 1;
            } else {
                disagreements.push(w.to_string());
            }
            trivial += oracle as usize;
            let bound = (w.len().max(1) as f64).log2().ceil() as usize + 3;
            shallow += (nucleus_depth(w)? <= bound) as usize;
        }
        Ok(vec![
            Check::compare("word_problem.agreement", ANCHOR, format!("{COUNT}/{COUNT}"), format!("{agree}/{COUNT}"))
                .with_detail(json!({ "trivial_words": trivial, "disagreements": disagreements })),
            Check::compare("word_problem.contraction", ANCHOR, format!("{COUNT}/{COUNT}"), format!("{shallow}/{COUNT}")),
        ])
    })
}

/// Multiplication table of the group generated by `gens`, identity first.
fn closure_table(gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut els = vec![Perm::identity(gens[0].degree())];
    let mut index = std::collections::HashMap::new();
    index.insert(els[0].clone(), 0usize);
    let mut i = 0;
    while i < els.len() {
        for g in gens {
            let p = els[i].compose(g);
            if !index.contains_key(&p) {
                index.insert(p.clone(), els.len());
                els.push(p);
            }
        }
        i += 1;
    }
    els.iter().map(|x| els.iter().map(|y| index[&x.compose(y)]).collect()).collect()
}

/// The 2-groups of order at most 8, by presentation.
pub const SMALL_TWO_GROUPS: [(&str, &str); 8] = [
    ("C2", "gens: x\nx^2\n"),
    ("C4", "gens: x\nx^4\n"),
    ("C2xC2", "gens: x y\nx^2\ny^2\nXYxy\n"),
    ("C8", "gens: x\nx^8\n"),
    ("C4xC2", "gens: x y\nx^4\ny^2\nXYxy\n"),
    ("C2^3", "gens: x y z\nx^2\ny^2\nz^2\nXYxy\nXZxz\nYZyz\n"),
    ("D8", "gens: x y\nx^2\ny^2\n(xy)^4\n"),
    ("Q8", "gens: x y\nx^4\nx^2Y^2\nYxyx\n"),
];

fn cover_vs_cocycles(name: &str, text: &str) -> Result<Vec<Check>> {
    const ANCHOR: &str = "the 2-cover has dim H^2(G, F2) multiplicator generators beyond d(G)";
    let p = Presentation::parse(text)?;
    let table = coset_table(&p, 1000, Strategy::Felsch);
    let gens: Vec<Perm> = (0..p.rank()).map(|g| table.generator_perm(g)).collect();
    let mult = closure_table(&gens);
    let pc = pquotient(&p, DEFAULT_MAX_CLASS)?;
    let cover = p_cover(&pc, &p)?;
    Ok(vec![
        Check::compare(format!("cover.{name}.order"), ANCHOR, order_string(mult.len()), pow2(pc.log2_order() as u64)),
        Check::compare(format!("cover.{name}.h2"), ANCHOR, cocycle_h2_dim(&mult), cover.mstar),
    ])
}

fn c12_oracles(profile: Profile, seed: u64) -> Vec<Check> {
    const ORDERS: &str = "coset enumeration, stabilizer chain and 2-quotient give the same order";
    const SNF: &str = "Smith normal form diagonal equals quotients of gcds of minors";
    let mut out = Vec::new();
    for n in 3..=6 {
        for (kind, cert) in [(FamilyKind::Thm1, CertificateKind::Thm1), (FamilyKind::Thm4, CertificateKind::Thm4)] {
            let name = format!("orders.{kind}.{n}");
            out.extend(guarded(&name, ORDERS, || {
                let bsgs = quotient_group(n)?.log2_order().map(pow2).unwrap_or_default();
                let p = Presentation::from_family(&relator_family(kind, n)?);
                let pq = pow2(pquotient(&p, DEFAULT_MAX_CLASS)?.log2_order() as u64);
                let mut v = vec![Check::compare(format!("{name}.pquotient"), ORDERS, &bsgs, pq)];
                let tc_levels = if profile == Profile::Deep { 5 } else { 4 };
                if n <= tc_levels {
                    let cap = if n == 5 { DEEP_MAX_COSETS } else { DEFAULT_MAX_COSETS };
                    let tc = presentation_certificate(cert, n, cap)?.enumerated_order.map(order_string).unwrap_or("overflow".into());
                    v.push(Check::compare(format!("{name}.coset"), ORDERS, &bsgs, tc));
                }
                Ok(v)
            }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = 0;
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let d: Vec<i64> = snf(&IntMatrix::from_rows(&a)).diagonal().iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect();
        agree += (d == minors_diagonal(&a)) as usize;
    }
    out.push(Check::compare("snf.minors", SNF, "200/200", format!("{agree}/200")));
    for (name, text) in SMALL_TWO_GROUPS {
        out.extend(guarded(&format!("cover.{name}"), "", || cover_vs_cocycles(name, text)));
    }
    out
}

fn c13_five_term() -> Vec<Check> {
    guarded("invariant_homs", FIVE_TERM_ANCHOR, || {
        let bound = st3_rank_bound(6)?;
        let mut out = Vec::new();
        for n in 3..=4 {
            for k in 1..=2 {
                out.extend(invariant_homs(n, k, bound)?);
            }
        }
        Ok(out)
    })
}

/// Monotone dimension sequences for the limit calculator.
pub fn random_limit_systems(seed: u64, count: usize, kernel_bound: u64) -> Vec<(LimitSystem, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=60);
            let mut d = rng.gen_range(0..10u64);
            let dims = (0..len)
                .map(|_| {
                    d += rng.gen_range(0..6);
                    d
                })
                .collect();
            let offset = rng.gen_range(0..5);
            let m = rng.gen_range(0..30);
            (LimitSystem::new(dims, kernel_bound, offset).expect("monotone"), m)
        })
        .collect()
}

fn c14_limits(seed: u64) -> Vec<Check> {
    guarded("limit_bound", LIMIT_ANCHOR, || {
        let n = st3_rank_bound(6)?;
        let h2 = LimitSystem::h2_dims(3, 10_000, n);
        let mut out = Vec::new();
        let (mut agree, mut total) = (0, 0);
        for m in 0..=20 {
            total += 1;
            agree += (limit_scan(&h2, m).ok_or(Error::Exhausted) == find_bound(&h2, m)) as usize;
        }
        out.push(
            Check::compare("limit_bound.h2_dims", LIMIT_ANCHOR, format!("{total}/{total}"), format!("{agree}/{total}"))
                .with_detail(json!({ "kernel_bound": n })),
        );
        let systems = random_limit_systems(seed, 100, n);
        let agree = systems.iter().filter(|(s, m)| limit_scan(s, *m).ok_or(Error::Exhausted) == find_bound(s, *m)).count();
        out.push(Check::compare("limit_bound.random", LIMIT_ANCHOR, "100/100", format!("{agree}/100")));
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_follow_strings() {
        assert!(Check::compare("x", "", 7, "7").passed());
        assert!(!Check::compare("x", "", 7, 8).passed());
        let r = Check::from_error("x", "", 1, &Error::Resource("cap".into()));
        assert_eq!(r.verdict, Verdict::Resource);
    }

    #[test]
    fn exit_codes() {
        let mut r = Report::new("t", BTreeMap::new());
        assert_eq!(r.exit_code(), 0);
        r.checks.push(Check::from_error("x", "", 1, &Error::Resource("cap".into())));
        assert_eq!(r.exit_code(), 2);
        r.checks.push(Check::compare("y", "", 1, 2));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn order_example() {
        let c = order(5).unwrap();
        assert_eq!(c[0].computed, "2^22");
        assert!(c[0].passed());
    }

    #[test]
    fn scan_matches_example() {
        let sys = LimitSystem::h2_dims(3, 100, 5);
        assert_eq!(limit_scan(&sys, 10), Some(25));
        assert!(limit_bound(&sys, 10)[0].passed());
    }

    #[test]
    fn test_words_are_bounded() {
        let ws = random_test_words(1, 200);
        assert!(ws.iter().all(|w| w.len() <= 64));
        assert_eq!(ws, random_test_words(1, 200));
    }
}
