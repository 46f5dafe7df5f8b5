//! Mechanical hypothesis checkers for the classical limit-cycle uniqueness
//! criteria of planar and Liénard systems.
//!
//! Each checker examines the hypotheses of one criterion on a bounded sample
//! domain, reports per-hypothesis verdicts with witnesses, and asserts the
//! criterion's conclusion only when every hypothesis is satisfied. Asymptotic
//! hypotheses are decided exactly for polynomial data and are otherwise left
//! undetermined with growth evidence, never claimed from samples.

use crate::expr::{Expr, Var};
use crate::field::{FieldError, LienardSpec, PlanarField};
use crate::integrate::Section;
use crate::numeric;
use crate::operators::{self, Region, ScanOperator, SignVerdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, thiserror::Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{part} is not {degree}-homogeneous: {detail}")]
    NotHomogeneous { part: String, degree: i64, detail: String },
    #[error(
        "family closed form disagrees with alpha at ({x}, {y}): \
         alpha = {alpha}, -x f'(x) l(y) k(y) = {closed} (mis-specified decomposition?)"
    )]
    ClosedFormMismatch { x: f64, y: f64, alpha: f64, closed: f64 },
}

/// Sample domain and tolerances shared by the one-dimensional checkers.
#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    /// Hypotheses are verified on |x| <= x_max.
    pub x_max: f64,
    /// Number of sample points across [-x_max, x_max].
    pub points: usize,
    /// Strict inequalities must clear this margin.
    pub strict_tol: f64,
    /// Growth threshold for the sampled asymptotic evidence.
    pub growth_threshold: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { x_max: 10.0, points: 4001, strict_tol: 1e-12, growth_threshold: 1e3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Thm5,
    Thm6,
    Cor1,
}

impl CriterionId {
    pub const ALL: [CriterionId; 7] = [
        CriterionId::Thm1,
        CriterionId::Thm2,
        CriterionId::Thm3,
        CriterionId::Thm4,
        CriterionId::Thm5,
        CriterionId::Thm6,
        CriterionId::Cor1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionId::Thm1 => "thm1",
            CriterionId::Thm2 => "thm2",
            CriterionId::Thm3 => "thm3",
            CriterionId::Thm4 => "thm4",
            CriterionId::Thm5 => "thm5",
            CriterionId::Thm6 => "thm6",
            CriterionId::Cor1 => "cor1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    AtMostOneCycle,
    ExactlyOneStableCycle,
    ExactlyOneCycle,
    NotApplicable,
}

/// A concrete point (and value) reproducing a hypothesis violation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    pub value: f64,
    pub detail: String,
}

impl Witness {
    fn on_axis(x: f64, value: f64, detail: impl Into<String>) -> Self {
        Witness { x, y: None, value, detail: detail.into() }
    }

    fn planar(x: f64, y: f64, value: f64, detail: impl Into<String>) -> Self {
        Witness { x, y: Some(y), value, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Satisfied,
    Violated { witness: Witness },
    Undetermined { reason: String },
}

impl Status {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Status::Satisfied)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Exact,
    Sampled { domain: [f64; 2], points: usize },
    Grid { region: Region, resolution: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub statement: String,
    pub status: Status,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Interval endpoints, bound radii and zero locations discovered while
/// checking hypotheses.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DiscoveredWitnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: CriterionId,
    pub system: String,
    pub hypotheses: Vec<HypothesisReport>,
    pub witnesses: DiscoveredWitnesses,
    pub conclusion: Conclusion,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(criterion: CriterionId, system: &str) -> Self {
        CriterionReport {
            criterion,
            system: system.to_string(),
            hypotheses: Vec::new(),
            witnesses: DiscoveredWitnesses::default(),
            conclusion: Conclusion::NotApplicable,
            notes: Vec::new(),
        }
    }

    fn push(&mut self, statement: &str, status: Status, method: Method) {
        self.hypotheses.push(HypothesisReport {
            statement: statement.to_string(),
            status,
            method,
            note: None,
        });
    }

    fn push_with_note(&mut self, statement: &str, status: Status, method: Method, note: String) {
        self.hypotheses.push(HypothesisReport {
            statement: statement.to_string(),
            status,
            method,
            note: Some(note),
        });
    }

    /// Issue `conclusion` when every hypothesis is satisfied.
    fn conclude(&mut self, conclusion: Conclusion) {
        if self.hypotheses.iter().all(|h| h.status.is_satisfied()) && !self.hypotheses.is_empty() {
            self.conclusion = conclusion;
        } else {
            self.conclusion = Conclusion::NotApplicable;
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.hypotheses.iter().all(|h| h.status.is_satisfied())
    }
}

// ---- shared helpers -----------------------------------------------------------

fn eval_x(e: &Expr, x: f64) -> f64 {
    e.eval(x, 0.0)
}

fn sampled_method(cfg: &ScanConfig) -> Method {
    Method::Sampled { domain: [-cfg.x_max, cfg.x_max], points: cfg.points }
}

/// Sample the open interval (a, b), endpoints excluded by half a grid step.
fn open_interval_samples(a: f64, b: f64, cfg: &ScanConfig) -> Vec<f64> {
    let frac = (b - a) / (2.0 * cfg.x_max);
    let n = ((cfg.points as f64 * frac).ceil() as usize).clamp(32, cfg.points);
    (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect()
}

/// First point in the open interval where `f` is not strictly positive.
fn strict_positive_violation(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &ScanConfig,
) -> Option<(f64, f64)> {
    open_interval_samples(a, b, cfg)
        .into_iter()
        .map(|x| (x, f(x)))
        .find(|&(_, v)| !(v > cfg.strict_tol))
}

/// First point in the open interval where `f` drops below -strict_tol.
fn nonnegative_violation(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &ScanConfig,
) -> Option<(f64, f64)> {
    open_interval_samples(a, b, cfg)
        .into_iter()
        .map(|x| (x, f(x)))
        .find(|&(_, v)| v < -cfg.strict_tol)
}

/// The maximal interval (a, b) containing 0 on which `f` is negative,
/// with the endpoints refined to sign-change points of `f`. `None` when
/// f(0) >= 0 or the interval extends beyond the scan domain.
fn negative_interval_around_zero(
    f: impl Fn(f64) -> f64 + Copy,
    cfg: &ScanConfig,
) -> Option<(f64, f64)> {
    if !(f(0.0) < 0.0) {
        return None;
    }
    let dx = cfg.x_max / (cfg.points / 2) as f64;
    let mut right = None;
    let mut x = 0.0;
    while x < cfg.x_max {
        let next = (x + dx).min(cfg.x_max);
        if f(next) >= 0.0 {
            right = numeric::bisect(x, next, f, 1e-12, 0.0);
            break;
        }
        x = next;
    }
    let mut left = None;
    let mut x = 0.0;
    while x > -cfg.x_max {
        let next = (x - dx).max(-cfg.x_max);
        if f(next) >= 0.0 {
            left = numeric::bisect(next, x, f, 1e-12, 0.0);
            break;
        }
        x = next;
    }
    Some((left?, right?))
}

/// Zeros of `f` strictly inside (a, b), located by sign changes on the grid
/// and refined by bisection.
fn zeros_in(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, cfg: &ScanConfig) -> Vec<f64> {
    let n = cfg.points.max(64);
    let mut out = Vec::new();
    let mut prev_x = a;
    let mut prev_v = f(a);
    for i in 1..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let v = f(x);
        if prev_v == 0.0 {
            out.push(prev_x);
        } else if (prev_v < 0.0) != (v < 0.0) {
            if let Some(z) = numeric::bisect(prev_x, x, f, 1e-12, 0.0) {
                out.push(z);
            }
        }
        prev_x = x;
        prev_v = v;
    }
    out
}

/// Sign of a polynomial's limit.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Limit {
    PlusInfinity,
    MinusInfinity,
    Finite,
}

fn poly_limit(coeffs: &[f64], towards_plus: bool) -> Limit {
    let mut deg = coeffs.len();
    while deg > 1 && coeffs[deg - 1] == 0.0 {
        deg -= 1;
    }
    if deg == 1 {
        return Limit::Finite;
    }
    let lead = coeffs[deg - 1];
    let sign = if towards_plus || (deg - 1) % 2 == 0 { lead } else { -lead };
    if sign > 0.0 {
        Limit::PlusInfinity
    } else {
        Limit::MinusInfinity
    }
}

/// Antiderivative coefficients of a polynomial.
fn antideriv_coeffs(coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    for (k, &c) in coeffs.iter().enumerate() {
        out.push(c / (k + 1) as f64);
    }
    out
}

/// Decide `F -> expected at the given end`, where F is the antiderivative of
/// `integrand` starting at 0. Exact for polynomial integrands; otherwise the
/// status is undetermined with sampled growth evidence.
fn antiderivative_limit_status(
    integrand: &Expr,
    antideriv_at: impl Fn(f64) -> f64,
    towards_plus: bool,
    expected: Limit,
    cfg: &ScanConfig,
) -> (Status, Method) {
    if let Some(coeffs) = integrand.polynomial(Var::X) {
        let limit = poly_limit(&antideriv_coeffs(&coeffs), towards_plus);
        let status = if limit == expected {
            Status::Satisfied
        } else {
            let x = if towards_plus { cfg.x_max } else { -cfg.x_max };
            Status::Violated {
                witness: Witness::on_axis(
                    x,
                    antideriv_at(x),
                    format!("leading-coefficient analysis gives {limit:?}, wanted {expected:?}"),
                ),
            }
        };
        return (status, Method::Exact);
    }
    // sampled growth evidence only; never satisfied-exact
    let end = if towards_plus { cfg.x_max } else { -cfg.x_max };
    let value = antideriv_at(end);
    let wanted_sign = match expected {
        Limit::PlusInfinity => 1.0,
        Limit::MinusInfinity => -1.0,
        Limit::Finite => 0.0,
    };
    let tail_monotone = {
        let a = 0.75 * end;
        let samples = open_interval_samples(a.min(end), a.max(end), cfg);
        samples.iter().all(|&x| {
            let direction = if towards_plus { 1.0 } else { -1.0 };
            let v = eval_x(integrand, x) * wanted_sign * direction;
            v >= -cfg.strict_tol
        })
    };
    let grows = value * wanted_sign > cfg.growth_threshold;
    let reason = format!(
        "asymptotic limit cannot be certified from samples; evidence: F({end}) = {value:.6e}, \
         monotone tail: {tail_monotone}, exceeds threshold {}: {grows}",
        cfg.growth_threshold
    );
    (Status::Undetermined { reason }, sampled_method(cfg))
}

/// True when g(x) is exactly the identity (polynomial check, with a sampled
/// fallback for non-polynomial forms that still evaluate to x).
fn g_is_identity(spec: &LienardSpec, cfg: &ScanConfig) -> bool {
    if let Some(coeffs) = spec.g.polynomial(Var::X) {
        return coeffs == vec![0.0, 1.0];
    }
    open_interval_samples(-cfg.x_max, cfg.x_max, cfg)
        .iter()
        .all(|&x| (spec.g.eval(x, 0.0) - x).abs() < 1e-12 * (1.0 + x.abs()))
}

const CF_HINT: &str = "restoring force is not the identity; apply the energy-normalising \
     transform (see the transform subcommand) and re-check";

// ---- Liénard checkers ----------------------------------------------------------

/// Sign condition x g(x) > 0 off the origin, sampled.
fn check_xg_positive(spec: &LienardSpec, report: &mut CriterionReport, cfg: &ScanConfig) {
    let g = |x: f64| eval_x(&spec.g, x);
    let bad = strict_positive_violation(|x| x * g(x), 0.0, cfg.x_max, cfg)
        .or_else(|| strict_positive_violation(|x| x * g(x), -cfg.x_max, 0.0, cfg));
    let status = match bad {
        Some((x, v)) => Status::Violated {
            witness: Witness::on_axis(x, v, "x*g(x) is not strictly positive here"),
        },
        None => Status::Satisfied,
    };
    report.push("x*g(x) > 0 for x != 0", status, sampled_method(cfg));
}

/// Damping well around the origin: f < 0 on (delta-, delta+), f's sign
/// changes refined. Returns the interval when found.
fn check_negative_well(
    spec: &LienardSpec,
    report: &mut CriterionReport,
    cfg: &ScanConfig,
    statement: &str,
) -> Option<(f64, f64)> {
    let f = |x: f64| eval_x(&spec.f, x);
    match negative_interval_around_zero(f, cfg) {
        Some((lo, hi)) => {
            report.push(statement, Status::Satisfied, sampled_method(cfg));
            report.witnesses.delta_minus = Some(lo);
            report.witnesses.delta_plus = Some(hi);
            Some((lo, hi))
        }
        None => {
            report.push(
                statement,
                Status::Violated {
                    witness: Witness::on_axis(
                        0.0,
                        f(0.0),
                        "no interval (delta-, delta+) containing 0 with f < 0 inside the \
                         scan domain",
                    ),
                },
                sampled_method(cfg),
            );
            None
        }
    }
}

/// Checker for the sign-compensated damping criterion (distinct delta- and
/// delta+ balanced through G).
pub fn check_thm1(spec: &LienardSpec, system: &str, cfg: &ScanConfig) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Thm1, system);
    check_xg_positive(spec, &mut report, cfg);
    let well = check_negative_well(
        spec,
        &mut report,
        cfg,
        "there exist delta- < 0 < delta+ with f(x) < 0 on (delta-, delta+)",
    );
    match well {
        Some((lo, hi)) => {
            let g_lo = spec.big_g(lo);
            let g_hi = spec.big_g(hi);
            let tol = 1e-9 * (1.0 + g_hi.abs());
            let status = if (g_lo - g_hi).abs() <= tol {
                Status::Satisfied
            } else {
                Status::Violated {
                    witness: Witness::on_axis(
                        lo,
                        g_lo - g_hi,
                        format!("G(delta-) = {g_lo} differs from G(delta+) = {g_hi}"),
                    ),
                }
            };
            report.push("G(delta-) = G(delta+)", status, sampled_method(cfg));

            let f = |x: f64| eval_x(&spec.f, x);
            let outside = nonnegative_violation(f, hi, cfg.x_max, cfg)
                .or_else(|| nonnegative_violation(f, -cfg.x_max, lo, cfg));
            let status = match outside {
                Some((x, v)) => Status::Violated {
                    witness: Witness::on_axis(x, v, "f < 0 outside [delta-, delta+]"),
                },
                None => Status::Satisfied,
            };
            report.push(
                "f(x) >= 0 on (-inf, delta-] and [delta+, +inf)",
                status,
                sampled_method(cfg),
            );
        }
        None => {
            report.push(
                "G(delta-) = G(delta+)",
                Status::Undetermined { reason: "no delta interval found".into() },
                sampled_method(cfg),
            );
            report.push(
                "f(x) >= 0 on (-inf, delta-] and [delta+, +inf)",
                Status::Undetermined { reason: "no delta interval found".into() },
                sampled_method(cfg),
            );
        }
    }
    let (g_plus, m1) = antiderivative_limit_status(
        &spec.g,
        |x| spec.big_g(x),
        true,
        Limit::PlusInfinity,
        cfg,
    );
    let (g_minus, _) = antiderivative_limit_status(
        &spec.g,
        |x| spec.big_g(x),
        false,
        Limit::PlusInfinity,
        cfg,
    );
    let (f_plus, _) = antiderivative_limit_status(
        &spec.f,
        |x| spec.big_f(x),
        true,
        Limit::PlusInfinity,
        cfg,
    );
    let status = [&g_plus, &g_minus, &f_plus]
        .into_iter()
        .find(|s| !s.is_satisfied())
        .cloned()
        .unwrap_or(Status::Satisfied);
    report.push("G(-inf) = G(+inf) = F(+inf) = +inf", status, m1);
    report.conclude(Conclusion::ExactlyOneCycle);
    report
}

/// Checker for the symmetric criterion: f even, g odd, with a single
/// positive zero of F.
pub fn check_thm2(spec: &LienardSpec, system: &str, cfg: &ScanConfig) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Thm2, system);
    let f = |x: f64| eval_x(&spec.f, x);
    let g = |x: f64| eval_x(&spec.g, x);

    // evenness / oddness: exact through coefficients for polynomials
    let even_status = if let Some(coeffs) = spec.f.polynomial(Var::X) {
        match coeffs.iter().enumerate().find(|&(k, &c)| k % 2 == 1 && c != 0.0) {
            Some((k, &c)) => (
                Status::Violated {
                    witness: Witness::on_axis(
                        1.0,
                        f(1.0) - f(-1.0),
                        format!("odd-degree coefficient c{k} = {c} is nonzero"),
                    ),
                },
                Method::Exact,
            ),
            None => (Status::Satisfied, Method::Exact),
        }
    } else {
        match open_interval_samples(0.0, cfg.x_max, cfg)
            .iter()
            .find(|&&x| (f(x) - f(-x)).abs() >= 1e-10)
        {
            Some(&x) => (
                Status::Violated {
                    witness: Witness::on_axis(x, f(x) - f(-x), "f(x) - f(-x) is nonzero"),
                },
                sampled_method(cfg),
            ),
            None => (Status::Satisfied, sampled_method(cfg)),
        }
    };
    report.push("f is even", even_status.0, even_status.1);

    let odd_status = if let Some(coeffs) = spec.g.polynomial(Var::X) {
        match coeffs.iter().enumerate().find(|&(k, &c)| k % 2 == 0 && c != 0.0) {
            Some((k, &c)) => (
                Status::Violated {
                    witness: Witness::on_axis(
                        1.0,
                        g(1.0) + g(-1.0),
                        format!("even-degree coefficient c{k} = {c} is nonzero"),
                    ),
                },
                Method::Exact,
            ),
            None => (Status::Satisfied, Method::Exact),
        }
    } else {
        match open_interval_samples(0.0, cfg.x_max, cfg)
            .iter()
            .find(|&&x| (g(x) + g(-x)).abs() >= 1e-10)
        {
            Some(&x) => (
                Status::Violated {
                    witness: Witness::on_axis(x, g(x) + g(-x), "g(x) + g(-x) is nonzero"),
                },
                sampled_method(cfg),
            ),
            None => (Status::Satisfied, sampled_method(cfg)),
        }
    };
    report.push("g is odd", odd_status.0, odd_status.1);

    check_xg_positive(spec, &mut report, cfg);

    // x0 = first positive zero of F, with F < 0 before it
    let big_f = |x: f64| spec.big_f(x);
    let zeros = zeros_in(big_f, 1e-9, cfg.x_max, cfg);
    match zeros.first().copied() {
        Some(x0) => {
            report.witnesses.x0 = Some(x0);
            let status = match strict_positive_violation(|x| -big_f(x), 0.0, x0, cfg) {
                Some((x, v)) => Status::Violated {
                    witness: Witness::on_axis(x, -v, "F is not strictly negative on (0, x0)"),
                },
                None => Status::Satisfied,
            };
            report.push(
                "there exists x0 > 0 with F(x) < 0 on (0, x0)",
                status,
                sampled_method(cfg),
            );
            let positive = strict_positive_violation(big_f, x0, cfg.x_max, cfg);
            let increasing = nonnegative_violation(f, x0, cfg.x_max, cfg);
            let status = match (positive, increasing) {
                (Some((x, v)), _) => Status::Violated {
                    witness: Witness::on_axis(x, v, "F is not strictly positive beyond x0"),
                },
                (None, Some((x, v))) => Status::Violated {
                    witness: Witness::on_axis(x, v, "F' = f is negative beyond x0"),
                },
                (None, None) => Status::Satisfied,
            };
            report.push("F(x) > 0 and increasing on (x0, +inf)", status, sampled_method(cfg));
        }
        None => {
            report.push(
                "there exists x0 > 0 with F(x) < 0 on (0, x0)",
                Status::Violated {
                    witness: Witness::on_axis(
                        cfg.x_max,
                        big_f(cfg.x_max),
                        "F has no zero on (0, x_max]",
                    ),
                },
                sampled_method(cfg),
            );
            report.push(
                "F(x) > 0 and increasing on (x0, +inf)",
                Status::Undetermined { reason: "x0 not found".into() },
                sampled_method(cfg),
            );
        }
    }

    let (g_plus, method) = antiderivative_limit_status(
        &spec.g,
        |x| spec.big_g(x),
        true,
        Limit::PlusInfinity,
        cfg,
    );
    let (f_plus, _) = antiderivative_limit_status(
        &spec.f,
        |x| spec.big_f(x),
        true,
        Limit::PlusInfinity,
        cfg,
    );
    let status = [&g_plus, &f_plus]
        .into_iter()
        .find(|s| !s.is_satisfied())
        .cloned()
        .unwrap_or(Status::Satisfied);
    report.push("G(+inf) = F(+inf) = +inf", status, method);
    report.conclude(Conclusion::ExactlyOneCycle);
    report
}

/// Shared gate for the checkers that require g(x) = x.
fn require_identity_g(
    spec: &LienardSpec,
    report: &mut CriterionReport,
    cfg: &ScanConfig,
) -> bool {
    if g_is_identity(spec, cfg) {
        true
    } else {
        report.push(
            "g(x) = x",
            Status::Violated {
                witness: Witness::on_axis(
                    1.0,
                    spec.g.eval(1.0, 0.0) - 1.0,
                    "g is not the identity",
                ),
            },
            Method::Exact,
        );
        report.notes.push(CF_HINT.to_string());
        report.conclusion = Conclusion::NotApplicable;
        false
    }
}

/// "Either f > 0 on the right tail or on the left tail"; records which
/// branch held.
fn either_tail_positive(
    spec: &LienardSpec,
    lo: f64,
    hi: f64,
    report: &mut CriterionReport,
    cfg: &ScanConfig,
) {
    let f = |x: f64| eval_x(&spec.f, x);
    let right = strict_positive_violation(f, hi, cfg.x_max, cfg);
    let left = strict_positive_violation(f, -cfg.x_max, lo, cfg);
    let statement = "f(x) > 0 on (delta+, +inf) or f(x) > 0 on (-inf, delta-)";
    match (right, left) {
        (None, None) => report.push_with_note(
            statement,
            Status::Satisfied,
            sampled_method(cfg),
            "both tails are positive".into(),
        ),
        (None, Some(_)) => report.push_with_note(
            statement,
            Status::Satisfied,
            sampled_method(cfg),
            "right tail (delta+, +inf) is positive".into(),
        ),
        (Some(_), None) => report.push_with_note(
            statement,
            Status::Satisfied,
            sampled_method(cfg),
            "left tail (-inf, delta-) is positive".into(),
        ),
        (Some((x, v)), Some(_)) => report.push(
            statement,
            Status::Violated {
                witness: Witness::on_axis(x, v, "neither tail keeps f strictly positive"),
            },
            sampled_method(cfg),
        ),
    }
}

/// Checker for the energy-balance criterion: F vanishes at a symmetric pair
/// +-Delta and grows at one infinity.
pub fn check_thm3(spec: &LienardSpec, system: &str, cfg: &ScanConfig) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Thm3, system);
    if !require_identity_g(spec, &mut report, cfg) {
        return report;
    }
    let well = check_negative_well(
        spec,
        &mut report,
        cfg,
        "there exist delta- < 0 < delta+ with f(x) < 0 on (delta-, delta+)",
    );
    if let Some((lo, hi)) = well {
        either_tail_positive(spec, lo, hi, &mut report, cfg);
    } else {
        report.push(
            "f(x) > 0 on (delta+, +inf) or f(x) > 0 on (-inf, delta-)",
            Status::Undetermined { reason: "no delta interval found".into() },
            sampled_method(cfg),
        );
    }

    // Delta > 0 with F(Delta) = F(-Delta) = 0
    let big_f = |x: f64| spec.big_f(x);
    let pos_zeros = zeros_in(big_f, 1e-9, cfg.x_max, cfg);
    let neg_zeros = zeros_in(big_f, -cfg.x_max, -1e-9, cfg);
    let matched = pos_zeros.iter().find_map(|&a| {
        neg_zeros
            .iter()
            .find(|&&b| (a + b).abs() <= 1e-9 * (1.0 + a.abs()))
            .map(|&b| (a, b))
    });
    match matched {
        Some((a, _b)) => {
            report.witnesses.big_delta = Some(a);
            report.push(
                "there exists Delta > 0 with F(Delta) = F(-Delta) = 0",
                Status::Satisfied,
                sampled_method(cfg),
            );
        }
        None => {
            let witness = match pos_zeros.first() {
                Some(&a) => Witness::on_axis(
                    -a,
                    big_f(-a),
                    "F vanishes at +Delta but F(-Delta) is nonzero",
                ),
                None => Witness::on_axis(
                    cfg.x_max,
                    big_f(cfg.x_max),
                    "F has no positive zero in the scan domain",
                ),
            };
            report.push(
                "there exists Delta > 0 with F(Delta) = F(-Delta) = 0",
                Status::Violated { witness },
                sampled_method(cfg),
            );
        }
    }

    let (f_plus, method) = antiderivative_limit_status(
        &spec.f,
        |x| spec.big_f(x),
        true,
        Limit::PlusInfinity,
        cfg,
    );
    let (f_minus, _) = antiderivative_limit_status(
        &spec.f,
        |x| spec.big_f(x),
        false,
        Limit::MinusInfinity,
        cfg,
    );
    let statement = "F(+inf) = +inf or F(-inf) = -inf";
    match (&f_plus, &f_minus) {
        (Status::Satisfied, _) => report.push_with_note(
            statement,
            Status::Satisfied,
            method,
            "F(+inf) = +inf holds".into(),
        ),
        (_, Status::Satisfied) => report.push_with_note(
            statement,
            Status::Satisfied,
            method,
            "F(-inf) = -inf holds".into(),
        ),
        (Status::Undetermined { reason }, _) => {
            report.push(statement, Status::Undetermined { reason: reason.clone() }, method)
        }
        (s, _) => report.push(statement, s.clone(), method),
    }
    report.conclude(Conclusion::ExactlyOneStableCycle);
    report
}

/// Checker for the symmetric-well divergence criterion: one delta with f
/// negative inside and positive outside.
pub fn check_thm4(spec: &LienardSpec, system: &str, cfg: &ScanConfig) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Thm4, system);
    if !require_identity_g(spec, &mut report, cfg) {
        return report;
    }
    let f = |x: f64| eval_x(&spec.f, x);
    let statement = "there exists delta > 0 with f(x) < 0 on (-delta, delta) and f(x) > 0 \
                     on (-inf, -delta) and (delta, +inf)";
    let well = negative_interval_around_zero(f, cfg);
    let mut delta_ok = false;
    match well {
        Some((lo, hi)) => {
            // candidate radii: the two refined zeros
            let mut satisfied = None;
            for delta in [hi, -lo] {
                if delta <= 0.0 {
                    continue;
                }
                let inside = strict_positive_violation(|x| -f(x), -delta, delta, cfg);
                let right = strict_positive_violation(f, delta, cfg.x_max, cfg);
                let left = strict_positive_violation(f, -cfg.x_max, -delta, cfg);
                if inside.is_none() && right.is_none() && left.is_none() {
                    satisfied = Some(delta);
                    break;
                }
            }
            match satisfied {
                Some(delta) => {
                    report.witnesses.delta = Some(delta);
                    report.witnesses.delta_minus = Some(lo);
                    report.witnesses.delta_plus = Some(hi);
                    report.push(statement, Status::Satisfied, sampled_method(cfg));
                    delta_ok = true;
                }
                None => {
                    // report the concrete failure for delta = hi
                    let delta = hi;
                    let witness = strict_positive_violation(|x| -f(x), -delta, delta, cfg)
                        .map(|(x, v)| {
                            Witness::on_axis(x, -v, "f is not strictly negative inside (-delta, delta)")
                        })
                        .or_else(|| {
                            strict_positive_violation(f, delta, cfg.x_max, cfg).map(|(x, v)| {
                                Witness::on_axis(x, v, "f is not strictly positive beyond delta")
                            })
                        })
                        .or_else(|| {
                            strict_positive_violation(f, -cfg.x_max, -delta, cfg).map(|(x, v)| {
                                Witness::on_axis(x, v, "f is not strictly positive below -delta")
                            })
                        })
                        .unwrap_or_else(|| {
                            Witness::on_axis(delta, f(delta), "no symmetric delta works")
                        });
                    report.push(statement, Status::Violated { witness }, sampled_method(cfg));
                }
            }
        }
        None => {
            report.push(
                statement,
                Status::Violated {
                    witness: Witness::on_axis(0.0, f(0.0), "f is not negative at the origin"),
                },
                sampled_method(cfg),
            );
        }
    }
    let _ = delta_ok;
    let (f_plus, method) = antiderivative_limit_status(
        &spec.f,
        |x| spec.big_f(x),
        true,
        Limit::PlusInfinity,
        cfg,
    );
    let (f_minus, _) = antiderivative_limit_status(
        &spec.f,
        |x| spec.big_f(x),
        false,
        Limit::MinusInfinity,
        cfg,
    );
    let statement = "F(+inf) = +inf or F(-inf) = -inf";
    match (&f_plus, &f_minus) {
        (Status::Satisfied, _) | (_, Status::Satisfied) => {
            report.push(statement, Status::Satisfied, method)
        }
        (Status::Undetermined { reason }, _) => {
            report.push(statement, Status::Undetermined { reason: reason.clone() }, method)
        }
        (s, _) => report.push(statement, s.clone(), method),
    }
    report.conclude(Conclusion::ExactlyOneStableCycle);
    report
}

/// Checker for the polar-coordinate criterion: bounded damping |f| < 2 with
/// monotone tails.
pub fn check_thm5(spec: &LienardSpec, system: &str, cfg: &ScanConfig) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Thm5, system);
    if !require_identity_g(spec, &mut report, cfg) {
        return report;
    }
    let f = |x: f64| eval_x(&spec.f, x);
    let well = check_negative_well(
        spec,
        &mut report,
        cfg,
        "there exist delta- < 0 < delta+ with f(x) < 0 on (delta-, delta+)",
    );
    if let Some((lo, hi)) = well {
        either_tail_positive(spec, lo, hi, &mut report, cfg);
        let status = if f(lo).abs() < 1e-9 && f(hi).abs() < 1e-9 {
            Status::Satisfied
        } else {
            let (x, v) = if f(lo).abs() >= f(hi).abs() { (lo, f(lo)) } else { (hi, f(hi)) };
            Status::Violated {
                witness: Witness::on_axis(x, v, "f does not vanish at the interval endpoint"),
            }
        };
        report.push("f(delta-) = f(delta+) = 0", status, sampled_method(cfg));
    } else {
        for statement in
            ["f(x) > 0 on (delta+, +inf) or f(x) > 0 on (-inf, delta-)", "f(delta-) = f(delta+) = 0"]
        {
            report.push(
                statement,
                Status::Undetermined { reason: "no delta interval found".into() },
                sampled_method(cfg),
            );
        }
    }

    // global bound |f| < 2: exact for polynomials (nonconstant ones are
    // unbounded), sampled otherwise
    let bound_statement = "|f(x)| < 2 for all x";
    if let Some(coeffs) = spec.f.polynomial(Var::X) {
        let degree = {
            let mut d = coeffs.len();
            while d > 1 && coeffs[d - 1] == 0.0 {
                d -= 1;
            }
            d - 1
        };
        if degree == 0 {
            let c = coeffs.first().copied().unwrap_or(0.0);
            let status = if c.abs() < 2.0 {
                Status::Satisfied
            } else {
                Status::Violated {
                    witness: Witness::on_axis(0.0, c, "|f| = |c| >= 2 everywhere"),
                }
            };
            report.push(bound_statement, status, Method::Exact);
        } else {
            // a nonconstant polynomial is unbounded; scan outward for a witness
            let mut x = 0.0;
            let witness = loop {
                if f(x).abs() >= 2.0 {
                    break Witness::on_axis(x, f(x), "|f| >= 2 here; the bound is global");
                }
                if f(-x).abs() >= 2.0 {
                    break Witness::on_axis(-x, f(-x), "|f| >= 2 here; the bound is global");
                }
                x += 0.1;
                if x > 1e6 {
                    break Witness::on_axis(x, f(x), "unbounded polynomial damping");
                }
            };
            report.push(bound_statement, Status::Violated { witness }, Method::Exact);
        }
    } else {
        let bad = open_interval_samples(-cfg.x_max, cfg.x_max, cfg)
            .into_iter()
            .find(|&x| f(x).abs() >= 2.0);
        let status = match bad {
            Some(x) => Status::Violated {
                witness: Witness::on_axis(x, f(x), "|f| >= 2 at this sample"),
            },
            None => Status::Satisfied,
        };
        report.push(bound_statement, status, sampled_method(cfg));
    }

    // monotone tails via the exact derivative
    if let Some((lo, hi)) = well {
        let fp = spec.f.differentiate(Var::X);
        let fpv = |x: f64| fp.eval(x, 0.0);
        let left_bad = open_interval_samples(-cfg.x_max, lo, cfg)
            .into_iter()
            .find(|&x| fpv(x) > cfg.strict_tol);
        let right_bad = open_interval_samples(hi, cfg.x_max, cfg)
            .into_iter()
            .find(|&x| fpv(x) < -cfg.strict_tol);
        let status = match (left_bad, right_bad) {
            (Some(x), _) => Status::Violated {
                witness: Witness::on_axis(x, fpv(x), "f' > 0 left of delta-: f increases"),
            },
            (None, Some(x)) => Status::Violated {
                witness: Witness::on_axis(x, fpv(x), "f' < 0 right of delta+: f decreases"),
            },
            (None, None) => Status::Satisfied,
        };
        report.push(
            "f is non-increasing on (-inf, delta-] and non-decreasing on [delta+, +inf)",
            status,
            sampled_method(cfg),
        );
    } else {
        report.push(
            "f is non-increasing on (-inf, delta-] and non-decreasing on [delta+, +inf)",
            Status::Undetermined { reason: "no delta interval found".into() },
            sampled_method(cfg),
        );
    }
    report.conclude(Conclusion::ExactlyOneCycle);
    report
}

// ---- planar checkers ------------------------------------------------------------

/// The curve along which the angular-speed condition is tested.
#[derive(Debug, Clone)]
pub enum EtaCurve {
    /// A ray from the origin; sampled from 1e-3 out to the region edge.
    Ray(Section),
    /// An explicit polyline from near the origin to the region edge.
    Points(Vec<(f64, f64)>),
}

impl Default for EtaCurve {
    fn default() -> Self {
        EtaCurve::Ray(Section::default())
    }
}

impl EtaCurve {
    fn samples(&self, region: &Region, n: usize) -> Vec<(f64, f64)> {
        match self {
            EtaCurve::Ray(section) => {
                let (dx, dy) = section.direction;
                // distance to the region boundary along the ray
                let mut s_max = f64::INFINITY;
                if dx > 0.0 {
                    s_max = s_max.min(region.x_max / dx);
                }
                if dx < 0.0 {
                    s_max = s_max.min(region.x_min / dx);
                }
                if dy > 0.0 {
                    s_max = s_max.min(region.y_max / dy);
                }
                if dy < 0.0 {
                    s_max = s_max.min(region.y_min / dy);
                }
                if !s_max.is_finite() {
                    s_max = 1.0;
                }
                (0..n)
                    .map(|i| {
                        let s = 1e-3 + (s_max - 1e-3) * i as f64 / (n - 1) as f64;
                        (s * dx, s * dy)
                    })
                    .collect()
            }
            EtaCurve::Points(pts) => pts.clone(),
        }
    }
}

/// Locate equilibria in the region by Newton refinement from every grid
/// point, using the exact Jacobian. Returns deduplicated roots.
fn find_equilibria(field: &PlanarField, region: &Region, resolution: usize) -> Vec<(f64, f64)> {
    let mut roots: Vec<(f64, f64)> = Vec::new();
    let inside = |x: f64, y: f64| {
        x >= region.x_min - 1e-9
            && x <= region.x_max + 1e-9
            && y >= region.y_min - 1e-9
            && y <= region.y_max + 1e-9
    };
    for i in 0..resolution {
        let x0 =
            region.x_min + (region.x_max - region.x_min) * i as f64 / (resolution - 1) as f64;
        for j in 0..resolution {
            let y0 =
                region.y_min + (region.y_max - region.y_min) * j as f64 / (resolution - 1) as f64;
            let (mut x, mut y) = (x0, y0);
            let mut converged = false;
            for _ in 0..30 {
                let (p, q) = field.eval(x, y);
                if !p.is_finite() || !q.is_finite() {
                    break;
                }
                if (p * p + q * q).sqrt() < 1e-12 {
                    converged = true;
                    break;
                }
                let a = field.p_x.eval(x, y);
                let b = field.p_y.eval(x, y);
                let c = field.q_x.eval(x, y);
                let d = field.q_y.eval(x, y);
                let det = a * d - b * c;
                if det.abs() < 1e-14 {
                    break;
                }
                let dx = (p * d - b * q) / det;
                let dy = (a * q - p * c) / det;
                x -= dx;
                y -= dy;
                if !inside(x, y) {
                    break;
                }
                if dx.abs() + dy.abs() < 1e-14 * (1.0 + x.abs() + y.abs()) {
                    let (p, q) = field.eval(x, y);
                    converged = (p * p + q * q).sqrt() < 1e-10;
                    break;
                }
            }
            if converged
                && inside(x, y)
                && !roots.iter().any(|&(rx, ry)| (rx - x).hypot(ry - y) < 1e-6)
            {
                roots.push((x, y));
            }
        }
    }
    roots
}

/// Checker for the planar rotation criterion: unique equilibrium at the
/// origin, one-signed alpha, and either ray independence of the field or a
/// transversal curve with one-signed angular speed.
pub fn check_thm6(
    field: &PlanarField,
    region: Region,
    eta: &EtaCurve,
    resolution: usize,
    system: &str,
) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Thm6, system);
    let grid = Method::Grid { region, resolution };

    // unique equilibrium at the origin
    let equilibria = find_equilibria(field, &region, resolution);
    let off_origin: Vec<&(f64, f64)> = equilibria
        .iter()
        .filter(|&&(x, y)| (x * x + y * y).sqrt() > 1e-4)
        .collect();
    let status = match off_origin.first() {
        Some(&&(x, y)) => {
            let (p, q) = field.eval(x, y);
            Status::Violated {
                witness: Witness::planar(
                    x,
                    y,
                    (p * p + q * q).sqrt(),
                    "a second equilibrium lies off the origin",
                ),
            }
        }
        None => Status::Satisfied,
    };
    report.push("the origin is the only equilibrium in the region", status, grid.clone());

    // one-signed alpha (constant-sign reading of the ray-rotation condition)
    let alpha_scan = operators::sign_scan(field, ScanOperator::Alpha, region, resolution);
    let statement = "alpha(x, y) does not change sign in the region";
    if alpha_scan.identically_zero {
        report.push(
            statement,
            Status::Undetermined {
                reason: "alpha vanishes identically; the ray-rotation condition is degenerate"
                    .into(),
            },
            grid.clone(),
        );
    } else {
        match alpha_scan.verdict {
            SignVerdict::Mixed => {
                let w = &alpha_scan.witnesses[0];
                report.push(
                    statement,
                    Status::Violated {
                        witness: Witness::planar(w.x, w.y, w.value, "alpha changes sign"),
                    },
                    grid.clone(),
                );
            }
            verdict => {
                let sign =
                    if verdict == SignVerdict::Nonnegative { "alpha >= 0" } else { "alpha <= 0" };
                report.push_with_note(
                    statement,
                    Status::Satisfied,
                    grid.clone(),
                    format!("{sign} on the sampled region"),
                );
            }
        }
    }

    // condition (1) or condition (2)
    let ray_scan = operators::sign_scan(field, ScanOperator::RayIndependence, region, resolution);
    let cond1 = ray_scan.witnesses.is_empty();
    let eta_samples = eta.samples(&region, 200);
    let speeds: Vec<(f64, f64, f64)> = eta_samples
        .iter()
        .map(|&(x, y)| (x, y, operators::angular_speed(field, x, y)))
        .collect();
    let first_sign = speeds
        .iter()
        .find(|&&(_, _, v)| v.abs() > 1e-12)
        .map(|&(_, _, v)| v.signum());
    let cond2_violation = match first_sign {
        Some(sign) => speeds
            .iter()
            .find(|&&(_, _, v)| v.abs() <= 1e-12 || v.signum() != sign)
            .copied(),
        None => speeds.first().copied(),
    };
    let statement = "either V(x, y) and V(tau x, tau y) are linearly independent for every \
                     tau > 0, or the angular speed keeps one sign along a curve running from \
                     the origin to the region edge";
    match (cond1, &cond2_violation) {
        (true, _) => {
            let note = if cond2_violation.is_none() {
                "both the ray-independence and transversal-curve conditions hold".to_string()
            } else {
                "ray independence holds (no dependence found on the sampled grid)".to_string()
            };
            report.push_with_note(statement, Status::Satisfied, grid.clone(), note);
        }
        (false, None) => {
            report.push_with_note(
                statement,
                Status::Satisfied,
                grid.clone(),
                "the transversal curve keeps one angular-speed sign; ray independence fails"
                    .to_string(),
            );
        }
        (false, Some((x, y, v))) => {
            let (x, y, v) = (*x, *y, *v);
            report.push(
                statement,
                Status::Violated {
                    witness: Witness::planar(
                        x,
                        y,
                        v,
                        "angular speed changes sign (or vanishes) along the curve, and a ray \
                         dependence was found",
                    ),
                },
                grid.clone(),
            );
        }
    }
    report.conclude(Conclusion::AtMostOneCycle);
    report
}

// ---- homogeneous family ----------------------------------------------------------

/// Validated decomposition x' = k(y), y' = -f(x) l(y) - sum_j h_j(x) m_j(y)
/// with k, l homogeneous of a common degree d, h_j of degree j and m_j of
/// degree d - j.
#[derive(Debug, Clone)]
pub struct HomogeneousFamily {
    pub k: Expr,
    pub l: Expr,
    pub f: Expr,
    pub d: u32,
    pub terms: Vec<(Expr, Expr, u32)>,
}

fn homogeneity_check(
    e: &Expr,
    var: Var,
    degree: i64,
    part: &str,
) -> Result<(), CriteriaError> {
    let mut state = 0x853c49e6748fea9bu64;
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        (z ^ (z >> 31)) as f64 / u64::MAX as f64 * 3.6 + 0.2
    };
    let eval = |v: f64| match var {
        Var::X => e.eval(v, 0.0),
        Var::Y => e.eval(0.0, v),
    };
    for t in [2.0f64, 3.0, 0.5] {
        for _ in 0..20 {
            let sign = if next() > 2.0 { -1.0 } else { 1.0 };
            let v = sign * next();
            let scaled = eval(t * v);
            let expected = t.powi(degree as i32) * eval(v);
            if (scaled - expected).abs() > 1e-9 * (1.0 + expected.abs()) {
                return Err(CriteriaError::NotHomogeneous {
                    part: part.to_string(),
                    degree,
                    detail: format!(
                        "at {var:?} = {v}, t = {t}: got {scaled}, expected {expected}"
                    ),
                });
            }
        }
    }
    Ok(())
}

impl HomogeneousFamily {
    pub fn new(
        k: Expr,
        l: Expr,
        f: Expr,
        d: u32,
        terms: Vec<(Expr, Expr, u32)>,
    ) -> Result<Self, CriteriaError> {
        homogeneity_check(&k, Var::Y, d as i64, "k")?;
        homogeneity_check(&l, Var::Y, d as i64, "l")?;
        for (idx, (h, m, j)) in terms.iter().enumerate() {
            homogeneity_check(h, Var::X, *j as i64, &format!("h[{idx}]"))?;
            homogeneity_check(m, Var::Y, d as i64 - *j as i64, &format!("m[{idx}]"))?;
        }
        let family = HomogeneousFamily { k, l, f, d, terms };
        family.verify_closed_form()?;
        Ok(family)
    }

    /// The planar field of the family.
    pub fn field(&self) -> PlanarField {
        let mut q = crate::expr::neg(crate::expr::mul(self.f.clone(), self.l.clone()));
        for (h, m, _) in &self.terms {
            q = crate::expr::sub(q, crate::expr::mul(h.clone(), m.clone()));
        }
        PlanarField::new(self.k.clone(), q, "homogeneous family")
    }

    /// alpha collapses to -x f'(x) l(y) k(y) for this family.
    pub fn alpha_closed_form(&self, x: f64, y: f64) -> f64 {
        let fp = self.f.differentiate(Var::X);
        -x * fp.eval(x, 0.0) * self.l.eval(0.0, y) * self.k.eval(0.0, y)
    }

    /// Consistency gate: the closed form must match alpha from the partials
    /// on a grid before any verdict is issued.
    fn verify_closed_form(&self) -> Result<(), CriteriaError> {
        self.verify_against(&self.field())
    }

    /// Check that this decomposition actually describes `field`: alpha of the
    /// field (from its exact partials) must equal -x f'(x) l(y) k(y) on a
    /// grid. A mismatch signals a mis-specified decomposition.
    pub fn verify_against(&self, field: &PlanarField) -> Result<(), CriteriaError> {
        let n = 41;
        for i in 0..n {
            let x = -2.0 + 4.0 * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let y = -2.0 + 4.0 * j as f64 / (n - 1) as f64;
                let a = operators::alpha(field, x, y);
                let c = self.alpha_closed_form(x, y);
                if (a - c).abs() > f64::max(1e-10, 1e-12 * c.abs()) {
                    return Err(CriteriaError::ClosedFormMismatch { x, y, alpha: a, closed: c });
                }
            }
        }
        Ok(())
    }
}

/// Checker for the homogeneous-family criterion: k and l carry the sign of y
/// and x f'(x) keeps one sign.
pub fn check_cor1(
    family: &HomogeneousFamily,
    system: &str,
    cfg: &ScanConfig,
) -> CriterionReport {
    let mut report = CriterionReport::new(CriterionId::Cor1, system);
    report.notes.push(
        "sign convention: the two classical readings (alpha >= 0 versus x f'(x) >= 0) \
         conflict through the identity alpha = -x f'(x) l(y) k(y); this checker requires a \
         constant sign and records which one holds"
            .into(),
    );

    for (name, e) in [("k", &family.k), ("l", &family.l)] {
        let ev = |y: f64| e.eval(0.0, y);
        let bad = strict_positive_violation(|y| y * ev(y), 0.0, cfg.x_max, cfg)
            .or_else(|| strict_positive_violation(|y| y * ev(y), -cfg.x_max, 0.0, cfg));
        let status = match bad {
            Some((y, v)) => Status::Violated {
                witness: Witness { x: 0.0, y: Some(y), value: v, detail: format!("y*{name}(y) <= 0") },
            },
            None => Status::Satisfied,
        };
        report.push(&format!("y*{name}(y) > 0 for y != 0"), status, sampled_method(cfg));
    }

    let fp = family.f.differentiate(Var::X);
    let xfp = |x: f64| x * fp.eval(x, 0.0);
    let samples = open_interval_samples(-cfg.x_max, cfg.x_max, cfg);
    let mut pos = None;
    let mut neg = None;
    for &x in &samples {
        let v = xfp(x);
        if v > cfg.strict_tol && pos.is_none() {
            pos = Some((x, v));
        }
        if v < -cfg.strict_tol && neg.is_none() {
            neg = Some((x, v));
        }
    }
    let statement = "x*f'(x) does not change sign";
    match (pos, neg) {
        (Some(_), Some((x, v))) => report.push(
            statement,
            Status::Violated {
                witness: Witness::on_axis(x, v, "x f'(x) takes both signs"),
            },
            sampled_method(cfg),
        ),
        (None, None) => report.push(
            statement,
            Status::Undetermined {
                reason: "alpha vanishes identically; the ray-rotation condition is degenerate"
                    .into(),
            },
            sampled_method(cfg),
        ),
        (Some(_), None) => report.push_with_note(
            statement,
            Status::Satisfied,
            sampled_method(cfg),
            "x f'(x) >= 0: alpha <= 0 on the family".into(),
        ),
        (None, Some(_)) => report.push_with_note(
            statement,
            Status::Satisfied,
            sampled_method(cfg),
            "x f'(x) <= 0: alpha >= 0 on the family".into(),
        ),
    }
    report.conclude(Conclusion::AtMostOneCycle);
    report
}

/// Report stating that a criterion does not apply to the system at hand.
pub fn not_applicable(id: CriterionId, system: &str, reason: &str) -> CriterionReport {
    let mut report = CriterionReport::new(id, system);
    report.notes.push(reason.to_string());
    report
}

/// Parse and validate a JSON family decomposition.
pub fn family_from_spec(spec: &crate::field::FamilySpec) -> Result<HomogeneousFamily, CriteriaError> {
    let parse = |text: &str, context: &str| {
        crate::expr::parse(text).map_err(|source| {
            CriteriaError::Field(FieldError::Parse { context: context.into(), source })
        })
    };
    let mut terms = Vec::with_capacity(spec.terms.len());
    for (i, term) in spec.terms.iter().enumerate() {
        terms.push((
            parse(&term.h, &format!("family.terms[{i}].h"))?,
            parse(&term.m, &format!("family.terms[{i}].m"))?,
            term.j,
        ));
    }
    HomogeneousFamily::new(
        parse(&spec.k, "family.k")?,
        parse(&spec.l, "family.l")?,
        parse(&spec.f, "family.f")?,
        spec.d,
        terms,
    )
}

/// Run every checker that applies to the system: the Liénard criteria when
/// the spec is in Liénard form, the planar rotation criterion on the built
/// field, and the family criterion when a decomposition is supplied.
pub fn run_all(
    spec: &crate::field::SystemSpec,
    region: Region,
    resolution: usize,
    cfg: &ScanConfig,
) -> Result<Vec<CriterionReport>, CriteriaError> {
    let system = spec.label();
    let mut out = Vec::new();
    match spec.lienard()? {
        Some(lienard) => {
            out.push(check_thm1(&lienard, &system, cfg));
            out.push(check_thm2(&lienard, &system, cfg));
            out.push(check_thm3(&lienard, &system, cfg));
            out.push(check_thm4(&lienard, &system, cfg));
            out.push(check_thm5(&lienard, &system, cfg));
        }
        None => {
            for id in [
                CriterionId::Thm1,
                CriterionId::Thm2,
                CriterionId::Thm3,
                CriterionId::Thm4,
                CriterionId::Thm5,
            ] {
                out.push(not_applicable(
                    id,
                    &system,
                    "the system is not given in Liénard form (no f and g)",
                ));
            }
        }
    }
    let field = spec.build()?;
    out.push(check_thm6(&field, region, &EtaCurve::default(), resolution, &system));
    match &spec.family {
        Some(family_spec) => {
            let family = family_from_spec(family_spec)?;
            // the decomposition must describe this very system, not merely
            // be internally consistent
            family.verify_against(&field)?;
            out.push(check_cor1(&family, &system, cfg));
        }
        None => out.push(not_applicable(
            CriterionId::Cor1,
            &system,
            "no homogeneous-family decomposition supplied",
        )),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::field::LienardForm;

    fn lienard(f: &str, g: &str) -> LienardSpec {
        LienardSpec::from_strings(f, g, LienardForm::PhasePlane).unwrap()
    }

    fn cfg() -> ScanConfig {
        ScanConfig::default()
    }

    #[test]
    fn thm1_van_der_pol_satisfied() {
        let report = check_thm1(&lienard("x^2-1", "x"), "vdp", &cfg());
        assert!(report.all_satisfied(), "{report:#?}");
        assert_eq!(report.conclusion, Conclusion::ExactlyOneCycle);
        assert!((report.witnesses.delta_minus.unwrap() + 1.0).abs() < 1e-10);
        assert!((report.witnesses.delta_plus.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn thm1_positive_f_violated() {
        let report = check_thm1(&lienard("1", "x"), "const damping", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        let violated = report
            .hypotheses
            .iter()
            .find(|h| matches!(h.status, Status::Violated { .. }))
            .expect("some hypothesis must be violated");
        assert!(violated.statement.contains("delta"));
    }

    #[test]
    fn thm1_cubic_g_satisfied() {
        let report = check_thm1(&lienard("x^2-1", "x^3"), "cubic restoring", &cfg());
        assert!(report.all_satisfied(), "{report:#?}");
        assert_eq!(report.conclusion, Conclusion::ExactlyOneCycle);
    }

    #[test]
    fn thm2_van_der_pol_x0() {
        let report = check_thm2(&lienard("x^2-1", "x"), "vdp", &cfg());
        assert!(report.all_satisfied(), "{report:#?}");
        assert_eq!(report.conclusion, Conclusion::ExactlyOneCycle);
        assert!((report.witnesses.x0.unwrap() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn thm2_odd_f_violated_with_witness() {
        let report = check_thm2(&lienard("x", "x"), "odd damping", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        let h = &report.hypotheses[0];
        assert_eq!(h.statement, "f is even");
        match &h.status {
            Status::Violated { witness } => {
                // witness reproduces: f(x) - f(-x) = 2x != 0
                let f = parse("x").unwrap();
                let diff = f.eval(witness.x, 0.0) - f.eval(-witness.x, 0.0);
                assert!(diff.abs() > 1e-10);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn thm2_quartic_example() {
        let report = check_thm2(&lienard("x^4-x^2", "x^3"), "quartic", &cfg());
        assert!(report.all_satisfied(), "{report:#?}");
        assert!((report.witnesses.x0.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn thm3_thm4_van_der_pol() {
        let r3 = check_thm3(&lienard("x^2-1", "x"), "vdp", &cfg());
        assert!(r3.all_satisfied(), "{r3:#?}");
        assert_eq!(r3.conclusion, Conclusion::ExactlyOneStableCycle);
        assert!((r3.witnesses.big_delta.unwrap() - 3f64.sqrt()).abs() < 1e-9);

        let r4 = check_thm4(&lienard("x^2-1", "x"), "vdp", &cfg());
        assert!(r4.all_satisfied(), "{r4:#?}");
        assert_eq!(r4.conclusion, Conclusion::ExactlyOneStableCycle);
        assert!((r4.witnesses.delta.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn thm3_requires_identity_g() {
        let report = check_thm3(&lienard("x^2-1", "x^3"), "cubic g", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        assert!(report.notes.iter().any(|n| n.contains("energy-normalising")));
    }

    #[test]
    fn thm4_two_well_pattern_violated() {
        // f = -(x^2-1)(x^2-4): negative on (-1,1), positive on (1,2),
        // negative again beyond 2
        let report = check_thm4(&lienard("-(x^2-1)*(x^2-4)", "x"), "double well", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        let h = &report.hypotheses[0];
        match &h.status {
            Status::Violated { witness } => {
                // the witness reproduces a sign violation of the pattern
                let f = parse("-(x^2-1)*(x^2-4)").unwrap();
                assert!((f.eval(witness.x, 0.0) - witness.value).abs() < 1e-9);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn thm5_scaled_vdp_bound_violated() {
        let report = check_thm5(&lienard("0.5*(x^2-1)", "x"), "half vdp", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        let bound = report
            .hypotheses
            .iter()
            .find(|h| h.statement.contains("|f(x)| < 2"))
            .unwrap();
        match &bound.status {
            Status::Violated { witness } => {
                let f = parse("0.5*(x^2-1)").unwrap();
                assert!(f.eval(witness.x, 0.0).abs() >= 2.0, "witness fails to reproduce");
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn thm5_bounded_rational_satisfied() {
        let report =
            check_thm5(&lienard("1.5*x^2/(1+x^2)-0.5", "x"), "bounded rational", &cfg());
        assert!(report.all_satisfied(), "{report:#?}");
        assert_eq!(report.conclusion, Conclusion::ExactlyOneCycle);
    }

    #[test]
    fn thm5_vdp_unbounded_violated() {
        let report = check_thm5(&lienard("x^2-1", "x"), "vdp", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
    }

    #[test]
    fn thm6_system11_satisfied_via_curve_condition() {
        let field =
            PlanarField::from_strings("y^3", "(5*x^2-1)*y^3-x^3-x*y^2", "system11").unwrap();
        let report =
            check_thm6(&field, Region::square(3.0), &EtaCurve::default(), 41, "system11");
        assert!(report.all_satisfied(), "{report:#?}");
        assert_eq!(report.conclusion, Conclusion::AtMostOneCycle);
    }

    #[test]
    fn thm6_system8_not_applicable() {
        let field = PlanarField::from_strings(
            "y*(x^2+y^2-(x^2+y^2)^2)+x*(1-3*(x^2+y^2)+(x^2+y^2)^2)",
            "-x*(x^2+y^2-(x^2+y^2)^2)+y*(1-3*(x^2+y^2)+(x^2+y^2)^2)",
            "system8",
        )
        .unwrap();
        let report =
            check_thm6(&field, Region::square(3.0), &EtaCurve::default(), 41, "system8");
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        // the disjunction hypothesis is the violated one: the default curve
        // crosses the rotation reversal at r = 1
        let h = report.hypotheses.last().unwrap();
        assert!(matches!(h.status, Status::Violated { .. }), "{report:#?}");
    }

    #[test]
    fn thm6_vdp_satisfied() {
        let field = lienard("x^2-1", "x").phase_plane();
        let report = check_thm6(&field, Region::square(3.0), &EtaCurve::default(), 41, "vdp");
        assert!(report.all_satisfied(), "{report:#?}");
    }

    #[test]
    fn thm6_detects_second_equilibrium() {
        // g(x) = x(1-x): equilibria at (0,0) and (1,0)
        let field = lienard("x^2-1", "x*(1-x)").phase_plane();
        let report = check_thm6(&field, Region::square(3.0), &EtaCurve::default(), 41, "two eq");
        let h = &report.hypotheses[0];
        match &h.status {
            Status::Violated { witness } => {
                assert!((witness.x - 1.0).abs() < 1e-6 && witness.y.unwrap().abs() < 1e-6);
            }
            other => panic!("expected a second equilibrium, got {other:?}"),
        }
    }

    #[test]
    fn cor1_system11_family() {
        let family = HomogeneousFamily::new(
            parse("y^3").unwrap(),
            parse("y^3").unwrap(),
            parse("1-5*x^2").unwrap(),
            3,
            vec![
                (parse("x^3").unwrap(), parse("1").unwrap(), 3),
                (parse("x").unwrap(), parse("y^2").unwrap(), 1),
            ],
        )
        .unwrap();
        // the family reconstructs the system field
        let field = family.field();
        assert_eq!(field.eval(1.0, 1.0), (1.0, 2.0));
        let report = check_cor1(&family, "system11", &cfg());
        assert!(report.all_satisfied(), "{report:#?}");
        assert_eq!(report.conclusion, Conclusion::AtMostOneCycle);
        // the recorded sign is x f'(x) <= 0 (alpha >= 0)
        let h = report.hypotheses.last().unwrap();
        assert!(h.note.as_deref().unwrap().contains("alpha >= 0"));
    }

    #[test]
    fn cor1_mixed_degrees_rejected() {
        let err = HomogeneousFamily::new(
            parse("y^3").unwrap(),
            parse("y").unwrap(),
            parse("1-5*x^2").unwrap(),
            3,
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, CriteriaError::NotHomogeneous { .. }));
    }

    #[test]
    fn cor1_constant_f_undetermined() {
        let family = HomogeneousFamily::new(
            parse("y").unwrap(),
            parse("y").unwrap(),
            parse("2").unwrap(),
            1,
            vec![(parse("x").unwrap(), parse("1").unwrap(), 1)],
        )
        .unwrap();
        let report = check_cor1(&family, "constant damping", &cfg());
        assert_eq!(report.conclusion, Conclusion::NotApplicable);
        let h = report.hypotheses.last().unwrap();
        assert!(matches!(&h.status, Status::Undetermined { reason } if reason.contains("identically")));
    }

    #[test]
    fn cor1_closed_form_gate_rejects_wrong_decomposition() {
        // a homogeneous but wrong f for the system11 right-hand side: the
        // family is internally consistent, so construction succeeds...
        let family = HomogeneousFamily::new(
            parse("y^3").unwrap(),
            parse("y^3").unwrap(),
            parse("1-4*x^2").unwrap(),
            3,
            vec![
                (parse("x^3").unwrap(), parse("1").unwrap(), 3),
                (parse("x").unwrap(), parse("y^2").unwrap(), 1),
            ],
        )
        .unwrap();
        // ...but it does not describe the actual system
        let sys11 =
            PlanarField::from_strings("y^3", "(5*x^2-1)*y^3-x^3-x*y^2", "system11").unwrap();
        let err = family.verify_against(&sys11).unwrap_err();
        assert!(matches!(err, CriteriaError::ClosedFormMismatch { .. }));
        // and the correct decomposition does
        let good = HomogeneousFamily::new(
            parse("y^3").unwrap(),
            parse("y^3").unwrap(),
            parse("1-5*x^2").unwrap(),
            3,
            vec![
                (parse("x^3").unwrap(), parse("1").unwrap(), 3),
                (parse("x").unwrap(), parse("y^2").unwrap(), 1),
            ],
        )
        .unwrap();
        assert!(good.verify_against(&sys11).is_ok());
    }

    #[test]
    fn report_json_contains_hypothesis_fields() {
        let report = check_thm4(&lienard("x^2-1", "x"), "vdp", &cfg());
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["criterion"], "thm4");
        assert_eq!(json["conclusion"], "exactly_one_stable_cycle");
        assert!(json["hypotheses"].as_array().unwrap().len() >= 2);
        assert!(json["witnesses"]["delta"].as_f64().is_some());
    }
}
