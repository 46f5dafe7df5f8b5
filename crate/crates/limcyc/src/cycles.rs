//! Poincaré return map on the positive y-axis, limit-cycle detection and
//! refinement, stability classification, and geometric cycle tests.

use crate::field::PlanarField;
use crate::integrate::{integrate, next_crossing, Section, Trajectory};
use crate::numeric;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, thiserror::Error)]
pub enum CycleError {
    #[error("return map is undefined at y0 = {y0}")]
    NoReturn { y0: f64 },
    #[error(
        "stability indicators disagree on the cycle at y* = {y_star}: \
         multiplier {multiplier} vs divergence integral {div_integral} \
         (integration accuracy failure)"
    )]
    InconsistentIndicators { y_star: f64, multiplier: f64, div_integral: f64 },
    #[error("y range must satisfy 0 < y_min < y_max (got {y_min}..{y_max})")]
    BadRange { y_min: f64, y_max: f64 },
}

/// Tunables of the cycle search. The integration tolerances are tighter than
/// the general-purpose defaults: the residual and center thresholds below
/// need return-map noise well under 1e-9.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Give up on a return after this much time.
    pub t_max: f64,
    /// Fixed-point refinement target |R(y) - y|.
    pub residual_tol: f64,
    /// Fixed points closer than this are merged.
    pub dedupe_tol: f64,
    /// |D| below this counts as "zero" for center detection.
    pub center_tol: f64,
    /// Relative step of the multiplier finite difference.
    pub multiplier_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            rtol: 1e-11,
            atol: 1e-13,
            t_max: 1e4,
            residual_tol: 1e-10,
            dedupe_tol: 1e-6,
            center_tol: 1e-9,
            multiplier_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationSense {
    Clockwise,
    Counterclockwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    Undetermined,
}

impl Stability {
    pub fn reversed(self) -> Stability {
        match self {
            Stability::Attracting => Stability::Repelling,
            Stability::Repelling => Stability::Attracting,
            Stability::Undetermined => Stability::Undetermined,
        }
    }
}

/// A refined closed orbit through `(0, y_star)` with period `period`.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub y_star: f64,
    pub period: f64,
    pub orientation: OrientationSense,
    /// |R'(y*)| from a finite difference of the return map.
    pub multiplier: f64,
    /// Integral of the divergence over one period.
    pub div_integral: f64,
    pub stability: Stability,
    pub star_shaped: bool,
    /// Closed sample list (t, x, y) over one period.
    pub samples: Vec<(f64, f64, f64)>,
    /// Dense one-period trajectory backing quadrature along the cycle.
    pub trajectory: Trajectory,
}

/// JSON shape of a cycle:
/// `{y_star, period, orientation, multiplier, div_integral, stability,
///   star_shaped, samples: [[t,x,y],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleReport {
    pub y_star: f64,
    pub period: f64,
    pub orientation: OrientationSense,
    pub multiplier: f64,
    pub div_integral: f64,
    pub stability: Stability,
    pub star_shaped: bool,
    pub samples: Vec<[f64; 3]>,
}

impl Cycle {
    pub fn report(&self) -> CycleReport {
        CycleReport {
            y_star: self.y_star,
            period: self.period,
            orientation: self.orientation,
            multiplier: self.multiplier,
            div_integral: self.div_integral,
            stability: self.stability,
            star_shaped: self.star_shaped,
            samples: self.samples.iter().map(|&(t, x, y)| [t, x, y]).collect(),
        }
    }

    /// Mean distance of the samples from the origin.
    pub fn mean_radius(&self) -> f64 {
        let sum: f64 = self.samples.iter().map(|&(_, x, y)| (x * x + y * y).sqrt()).sum();
        sum / self.samples.len() as f64
    }

    /// Standard deviation of the sample radii.
    pub fn radius_std(&self) -> f64 {
        let mean = self.mean_radius();
        let var: f64 = self
            .samples
            .iter()
            .map(|&(_, x, y)| {
                let r = (x * x + y * y).sqrt();
                (r - mean) * (r - mean)
            })
            .sum::<f64>()
            / self.samples.len() as f64;
        var.sqrt()
    }
}

/// A run of seeds on which the displacement vanished identically: evidence of
/// a continuum of periodic orbits rather than isolated cycles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CenterRegion {
    pub y_lo: f64,
    pub y_hi: f64,
    pub note: String,
}

/// Outcome of [`find_cycles`].
#[derive(Debug, Clone, Default)]
pub struct CycleSearch {
    pub cycles: Vec<Cycle>,
    /// Seeds whose return map was undefined within the time budget.
    pub skipped_seeds: Vec<f64>,
    pub center_regions: Vec<CenterRegion>,
}

/// One application of the Poincaré return map: integrate from `(0, y0)` until
/// the orbit next crosses the positive y-axis, in any direction. `None` when
/// the orbit escapes, stalls, or does not return within `t_max`.
pub fn return_map(field: &PlanarField, y0: f64, cfg: &SearchConfig) -> Option<(f64, f64)> {
    assert!(y0 > 0.0, "return map seeds must lie on the positive y-axis");
    let section = Section::default();
    let c = next_crossing(field, (0.0, y0), &section, cfg.t_max, cfg.rtol, cfg.atol)?;
    Some((c.point[1], c.t))
}

fn displacement(field: &PlanarField, y0: f64, cfg: &SearchConfig) -> Option<f64> {
    return_map(field, y0, cfg).map(|(y1, _)| y1 - y0)
}

/// Detect and refine the limit cycles crossing the positive y-axis between
/// `y_min` and `y_max`, from `n_seeds` geometrically spaced seeds.
///
/// Sign changes of D(y) = R(y) - y are bracketed and refined by bisection
/// plus secant polish. A transition between seeds where the map is defined
/// and seeds where the orbit escapes is also refined (bisection on
/// definedness): strongly repelling cycles can be escape boundaries whose
/// returns exist on one side only. Runs of at least five consecutive seeds
/// with |D| below the center threshold are reported as a center region, not
/// as cycles.
pub fn find_cycles(
    field: &PlanarField,
    y_min: f64,
    y_max: f64,
    n_seeds: usize,
    cfg: &SearchConfig,
) -> Result<CycleSearch, CycleError> {
    if !(y_min > 0.0 && y_min < y_max) {
        return Err(CycleError::BadRange { y_min, y_max });
    }
    let n_seeds = n_seeds.max(2);
    let ratio = (y_max / y_min).powf(1.0 / (n_seeds - 1) as f64);
    let seeds: Vec<f64> = (0..n_seeds).map(|i| y_min * ratio.powi(i as i32)).collect();
    let values: Vec<Option<f64>> = seeds.iter().map(|&y| displacement(field, y, cfg)).collect();

    let mut out = CycleSearch::default();
    for (&seed, d) in seeds.iter().zip(values.iter()) {
        if d.is_none() {
            out.skipped_seeds.push(seed);
        }
    }

    // center runs: >= 5 consecutive seeds with |D| below the threshold
    let mut in_center = vec![false; n_seeds];
    let mut run_start = None;
    for i in 0..=n_seeds {
        let near_zero = i < n_seeds && matches!(values[i], Some(d) if d.abs() < cfg.center_tol);
        match (near_zero, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                if i - s >= 5 {
                    in_center[s..i].iter_mut().for_each(|f| *f = true);
                    out.center_regions.push(CenterRegion {
                        y_lo: seeds[s],
                        y_hi: seeds[i - 1],
                        note: "continuum of periodic orbits".into(),
                    });
                }
                run_start = None;
            }
            _ => {}
        }
    }

    let mut fixed_points: Vec<(f64, f64)> = Vec::new(); // (y*, |D| residual)
    for i in 0..n_seeds - 1 {
        if in_center[i] || in_center[i + 1] {
            continue;
        }
        match (values[i], values[i + 1]) {
            (Some(da), Some(db)) => {
                if (da < 0.0) != (db < 0.0) && da.abs().max(db.abs()) > cfg.center_tol {
                    if let Some(fp) =
                        refine_sign_bracket(field, seeds[i], seeds[i + 1], cfg, true)
                    {
                        fixed_points.push(fp);
                    }
                }
            }
            (Some(_), None) => {
                if let Some(fp) = refine_escape_boundary(field, seeds[i], seeds[i + 1], cfg) {
                    fixed_points.push(fp);
                }
            }
            (None, Some(_)) => {
                if let Some(fp) = refine_escape_boundary(field, seeds[i + 1], seeds[i], cfg) {
                    fixed_points.push(fp);
                }
            }
            (None, None) => {}
        }
    }

    fixed_points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut unique: Vec<(f64, f64)> = Vec::new();
    for fp in fixed_points {
        match unique.last_mut() {
            Some(last) if (fp.0 - last.0).abs() < cfg.dedupe_tol => {
                if fp.1 < last.1 {
                    *last = fp;
                }
            }
            _ => unique.push(fp),
        }
    }

    for (y_star, _) in unique {
        let mut cycle = trace_cycle(field, y_star, cfg)?;
        classify(field, &mut cycle, cfg)?;
        out.cycles.push(cycle);
    }
    Ok(out)
}

/// Residual above which a refined candidate is rejected outright. Strongly
/// repelling cycles amplify return-map noise by exp of the divergence
/// integral; residuals between `residual_tol` and this gate are accepted only
/// when the bracket is exhausted at f64 resolution.
const ACCEPT_RESIDUAL: f64 = 1e-7;

/// Refine a sign change of D by bisection followed by secant polish.
///
/// Stops when |D| drops below the residual target or the bracket is exhausted
/// at f64 resolution. A cycle whose divergence integral is large and positive
/// makes the displacement effectively discontinuous at the fixed point, so
/// when the direct refinement stalls the same bracket is refined on the
/// time-reversed field, where that cycle is attracting and the residual
/// collapses; the fixed point carries over unchanged.
fn refine_sign_bracket(
    field: &PlanarField,
    a0: f64,
    b0: f64,
    cfg: &SearchConfig,
    allow_reversal: bool,
) -> Option<(f64, f64)> {
    // The steeper D is at the root, the more precisely a small-residual point
    // pins the location; prefer the direct result whenever its residual is
    // acceptable at all, and resort to the reversed field only when the
    // direct refinement stalls far from zero.
    let direct = refine_sign_bracket_direct(field, a0, b0, cfg);
    if let Some(best) = direct {
        if best.1 <= ACCEPT_RESIDUAL {
            return Some(best);
        }
    }
    if allow_reversal {
        if let Some(rev) = refine_sign_bracket(&field.reversed(), a0, b0, cfg, false) {
            if rev.1 <= cfg.residual_tol {
                return Some(rev);
            }
        }
    }
    None
}

fn refine_sign_bracket_direct(
    field: &PlanarField,
    mut a: f64,
    mut b: f64,
    cfg: &SearchConfig,
) -> Option<(f64, f64)> {
    let mut fa = displacement(field, a, cfg)?;
    let fb = displacement(field, b, cfg)?;
    if fa == 0.0 {
        return Some((a, 0.0));
    }
    if fb == 0.0 {
        return Some((b, 0.0));
    }
    if (fa < 0.0) == (fb < 0.0) {
        return None;
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa.abs()) } else { (b, fb.abs()) };
    for _ in 0..25 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            return Some(best);
        }
        let fm = displacement(field, mid, cfg)?;
        if fm.abs() < best.1 {
            best = (mid, fm.abs());
        }
        if fm == 0.0 || fm.abs() < cfg.residual_tol {
            return Some((mid, fm.abs()));
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    // secant polish inside the bracket
    let (mut x0, mut x1) = (a, b);
    let mut f0 = displacement(field, x0, cfg)?;
    let mut f1 = displacement(field, x1, cfg)?;
    for _ in 0..60 {
        let denom = f1 - f0;
        let mut x2 = if denom != 0.0 { x1 - f1 * (x1 - x0) / denom } else { 0.5 * (a + b) };
        if !(x2 > a && x2 < b) {
            x2 = 0.5 * (a + b);
        }
        if x2 == a || x2 == b {
            return Some(best);
        }
        let f2 = displacement(field, x2, cfg)?;
        if f2.abs() < best.1 {
            best = (x2, f2.abs());
        }
        if f2 == 0.0 || f2.abs() < cfg.residual_tol {
            return Some((x2, f2.abs()));
        }
        if (f2 < 0.0) == (fa < 0.0) {
            a = x2;
            fa = f2;
        } else {
            b = x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    Some(best)
}

/// Refine the boundary between seeds whose orbits return and seeds whose
/// orbits escape.
///
/// A repelling cycle hides inside such a pair: just beyond the cycle the map
/// may still be defined for a few amplification factors before orbits escape
/// within a single revolution, so the seed grid sees only defined-vs-escaped.
/// The bisection keeps a defined endpoint whose displacement has the sign of
/// the defined seed; as soon as it uncovers a defined point on the other sign
/// it hands over to the sign-bracket refinement. A boundary where the
/// displacement does not tend to zero (a plain time-budget cutoff, say) is
/// rejected.
fn refine_escape_boundary(
    field: &PlanarField,
    defined: f64,
    undefined: f64,
    cfg: &SearchConfig,
) -> Option<(f64, f64)> {
    let mut def = defined;
    let mut undef = undefined;
    let mut d_def = displacement(field, def, cfg)?;
    let start_sign = d_def < 0.0;
    for _ in 0..90 {
        if d_def.abs() < cfg.residual_tol {
            return Some((def, d_def.abs()));
        }
        let mid = 0.5 * (def + undef);
        if mid == def || mid == undef {
            break;
        }
        match displacement(field, mid, cfg) {
            Some(d) if (d < 0.0) == start_sign => {
                def = mid;
                d_def = d;
            }
            Some(_) => {
                // sign change inside the defined region: the fixed point
                // lies between def and mid
                let (a, b) = if def < mid { (def, mid) } else { (mid, def) };
                return refine_sign_bracket(field, a, b, cfg, true);
            }
            None => undef = mid,
        }
    }
    (d_def.abs() < ACCEPT_RESIDUAL).then_some((def, d_def.abs()))
}

/// Mismatch between the first and last sample beyond which a traced orbit is
/// not accepted as the cycle.
const CLOSURE_TOL: f64 = 1e-7;

fn closure_gap(traj: &Trajectory) -> f64 {
    let start = traj.start;
    let end = traj.end();
    ((end[0] - start[0]).powi(2) + (end[1] - start[1]).powi(2)).sqrt()
}

/// Integrate one period from `(0, y_star)` and package the closed orbit.
/// The stability fields are left for [`classify`].
///
/// A strongly repelling cycle cannot be traced in forward time (the orbit is
/// thrown off the curve within one period); when the forward trace fails to
/// close, the cycle is traced on the time-reversed field instead and the
/// samples are mapped back to forward time. Quadrature of a scalar along the
/// period is independent of the traversal direction, so the stored dense
/// trajectory remains valid for [`integrate_along`] either way.
pub fn trace_cycle(
    field: &PlanarField,
    y_star: f64,
    cfg: &SearchConfig,
) -> Result<Cycle, CycleError> {
    let direct = return_map(field, y_star, cfg).map(|(_, period)| {
        let traj = integrate(field, (0.0, y_star), period, cfg.rtol, cfg.atol);
        (period, traj)
    });
    let (period, trajectory, samples) = match direct {
        Some((period, traj)) if closure_gap(&traj) <= CLOSURE_TOL => {
            let samples = traj.samples();
            (period, traj, samples)
        }
        direct => {
            let reversed = field.reversed();
            let rev = return_map(&reversed, y_star, cfg).map(|(_, period)| {
                let traj = integrate(&reversed, (0.0, y_star), period, cfg.rtol, cfg.atol);
                (period, traj)
            });
            match rev {
                Some((period, traj)) if closure_gap(&traj) <= CLOSURE_TOL => {
                    // map the backward trace onto the forward flow
                    let mut samples: Vec<(f64, f64, f64)> = traj
                        .samples()
                        .into_iter()
                        .map(|(t, x, y)| (period - t, x, y))
                        .collect();
                    samples.reverse();
                    (period, traj, samples)
                }
                _ => {
                    // keep the better-closing trace rather than fail outright
                    let (period, traj) =
                        direct.ok_or(CycleError::NoReturn { y0: y_star })?;
                    let samples = traj.samples();
                    (period, traj, samples)
                }
            }
        }
    };
    let orientation = orientation_of(&samples);
    let star_shaped = matches!(star_shape_of_cycle(field, &samples), StarShape::StarShaped);
    Ok(Cycle {
        y_star,
        period,
        orientation,
        multiplier: f64::NAN,
        div_integral: f64::NAN,
        stability: Stability::Undetermined,
        star_shaped,
        samples,
        trajectory,
    })
}

/// Orientation from the total winding of the sample polygon around the origin.
fn orientation_of(samples: &[(f64, f64, f64)]) -> OrientationSense {
    let mut total = 0.0;
    for w in samples.windows(2) {
        let (_, x0, y0) = w[0];
        let (_, x1, y1) = w[1];
        total += (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
    }
    if total >= 0.0 {
        OrientationSense::Counterclockwise
    } else {
        OrientationSense::Clockwise
    }
}

/// Verdict of the star-shapedness scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StarShape {
    StarShaped,
    /// Angular momentum vanished or changed sign at the witness sample.
    NotStarShaped { witness: (f64, f64), value: f64 },
}

/// Scan (position, velocity) samples of a closed curve for constant-sign
/// angular momentum x*vy - y*vx. Requires |value| > 1e-10 at every sample.
pub fn star_shape(points: &[(f64, f64, f64, f64)]) -> StarShape {
    const TOL: f64 = 1e-10;
    let mut sign = 0.0f64;
    for &(x, y, vx, vy) in points {
        let m = x * vy - y * vx;
        if m.abs() <= TOL {
            return StarShape::NotStarShaped { witness: (x, y), value: m };
        }
        if sign == 0.0 {
            sign = m.signum();
        } else if m.signum() != sign {
            return StarShape::NotStarShaped { witness: (x, y), value: m };
        }
    }
    StarShape::StarShaped
}

/// Star-shapedness of a detected cycle, with velocities taken from the field.
pub fn star_shape_of_cycle(field: &PlanarField, samples: &[(f64, f64, f64)]) -> StarShape {
    let pts: Vec<(f64, f64, f64, f64)> = samples
        .iter()
        .map(|&(_, x, y)| {
            let (p, q) = field.eval(x, y);
            (x, y, p, q)
        })
        .collect();
    star_shape(&pts)
}

/// Integral of `f(x, y)` along one period of the cycle, using 5-point
/// Gauss-Legendre quadrature on every dense-output segment.
pub fn integrate_along<F: Fn(f64, f64) -> f64>(cycle: &Cycle, f: F) -> f64 {
    let mut total = 0.0;
    for step in &cycle.trajectory.steps {
        total += numeric::gauss5(step.t0, step.t0 + step.h, |t| {
            let p = step.eval(t);
            f(p[0], p[1])
        });
    }
    total
}

/// Indicator thresholds below which a stability indicator is inconclusive.
pub const CONCLUSIVE_LOG_MULTIPLIER: f64 = 1e-4;
pub const CONCLUSIVE_DIV_INTEGRAL: f64 = 1e-4;

/// Fill the stability fields of a cycle: the return-map multiplier by a
/// central finite difference (one-sided when the opposite orbit escapes),
/// the divergence integral by quadrature along the stored period, and the
/// stability verdict from whichever indicators are conclusive. Errors when
/// both indicators are conclusive and disagree.
pub fn classify(
    field: &PlanarField,
    cycle: &mut Cycle,
    cfg: &SearchConfig,
) -> Result<(), CycleError> {
    let y = cycle.y_star;
    let h = cfg.multiplier_step * y;
    let above = return_map(field, y + h, cfg).map(|(v, _)| v);
    let below = return_map(field, y - h, cfg).map(|(v, _)| v);
    let slope = match (above, below) {
        (Some(a), Some(b)) => Some((a - b) / (2.0 * h)),
        (Some(a), None) => Some((a - y) / h),
        (None, Some(b)) => Some((y - b) / h),
        (None, None) => None,
    };
    cycle.multiplier = slope.map_or(f64::NAN, |s| s.abs());
    cycle.div_integral = integrate_along(cycle, |x, yy| field.divergence(x, yy));

    let log_mult = if cycle.multiplier.is_nan() {
        None
    } else if cycle.multiplier == 0.0 {
        Some(f64::NEG_INFINITY)
    } else {
        Some(cycle.multiplier.ln())
    };
    let mult_verdict = log_mult.and_then(|l| {
        (l.abs() > CONCLUSIVE_LOG_MULTIPLIER).then_some(if l < 0.0 {
            Stability::Attracting
        } else {
            Stability::Repelling
        })
    });
    let div_verdict = (cycle.div_integral.abs() > CONCLUSIVE_DIV_INTEGRAL).then_some(
        if cycle.div_integral < 0.0 { Stability::Attracting } else { Stability::Repelling },
    );
    cycle.stability = match (mult_verdict, div_verdict) {
        (Some(m), Some(d)) if m == d => m,
        (Some(_), Some(_)) => {
            return Err(CycleError::InconsistentIndicators {
                y_star: y,
                multiplier: cycle.multiplier,
                div_integral: cycle.div_integral,
            })
        }
        (Some(m), None) => m,
        (None, Some(d)) => d,
        (None, None) => Stability::Undetermined,
    };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{LienardForm, LienardSpec, PlanarField};

    fn vdp() -> PlanarField {
        LienardSpec::from_strings("x^2-1", "x", LienardForm::PhasePlane).unwrap().phase_plane()
    }

    fn harmonic() -> PlanarField {
        LienardSpec::from_strings("0", "x", LienardForm::PhasePlane).unwrap().phase_plane()
    }

    fn system8() -> PlanarField {
        PlanarField::from_strings(
            "y*(x^2+y^2-(x^2+y^2)^2)+x*(1-3*(x^2+y^2)+(x^2+y^2)^2)",
            "-x*(x^2+y^2-(x^2+y^2)^2)+y*(1-3*(x^2+y^2)+(x^2+y^2)^2)",
            "system8",
        )
        .unwrap()
    }

    #[test]
    fn harmonic_return_map_is_identity() {
        let cfg = SearchConfig::default();
        for y0 in [0.5, 1.0, 2.0, 5.0] {
            let (y1, t) = return_map(&harmonic(), y0, &cfg).unwrap();
            assert!((y1 - y0).abs() < 1e-9, "R({y0}) = {y1}");
            assert!((t - 2.0 * std::f64::consts::PI).abs() < 1e-7);
        }
    }

    #[test]
    fn harmonic_center_flagged_no_cycles() {
        let cfg = SearchConfig::default();
        let found = find_cycles(&harmonic(), 0.5, 5.0, 10, &cfg).unwrap();
        assert!(found.cycles.is_empty());
        assert_eq!(found.center_regions.len(), 1);
        assert!(found.center_regions[0].note.contains("continuum"));
    }

    #[test]
    fn vdp_return_map_brackets_cycle() {
        let cfg = SearchConfig::default();
        let (r_small, _) = return_map(&vdp(), 0.5, &cfg).unwrap();
        assert!(r_small > 0.5);
        let (r_large, _) = return_map(&vdp(), 4.0, &cfg).unwrap();
        assert!(r_large < 4.0);
    }

    #[test]
    fn vdp_single_attracting_cycle() {
        let cfg = SearchConfig::default();
        let found = find_cycles(&vdp(), 0.1, 8.0, 20, &cfg).unwrap();
        assert_eq!(found.cycles.len(), 1);
        let c = &found.cycles[0];
        assert_eq!(c.stability, Stability::Attracting);
        assert!(c.multiplier < 1.0);
        assert!(c.div_integral < 0.0);
        assert_eq!(c.orientation, OrientationSense::Clockwise);
        assert!(c.star_shaped);
        // fixed-point residual and closure invariants
        let (r, _) = return_map(&vdp(), c.y_star, &cfg).unwrap();
        assert!((r - c.y_star).abs() < 1e-8);
        let first = c.samples.first().unwrap();
        let last = c.samples.last().unwrap();
        assert!((first.1 - last.1).abs() < 1e-7 && (first.2 - last.2).abs() < 1e-7);
    }

    #[test]
    fn system8_two_circular_cycles() {
        let cfg = SearchConfig::default();
        let found = find_cycles(&system8(), 0.1, 3.0, 40, &cfg).unwrap();
        assert_eq!(found.cycles.len(), 2);
        let inner = &found.cycles[0];
        let outer = &found.cycles[1];
        let r_inner = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        let r_outer = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
        assert!((inner.mean_radius() - r_inner).abs() < 1e-6);
        assert!((outer.mean_radius() - r_outer).abs() < 1e-6);
        assert!(inner.radius_std() < 1e-6);
        assert!(outer.radius_std() < 1e-6);
        assert_eq!(inner.stability, Stability::Attracting);
        assert_eq!(outer.stability, Stability::Repelling);
        assert_eq!(inner.orientation, OrientationSense::Clockwise);
        assert_eq!(outer.orientation, OrientationSense::Counterclockwise);
        assert!(inner.star_shaped && outer.star_shaped);
        // periods against the analytic angular speeds on the two circles
        let t_inner = 2.0 * std::f64::consts::PI / (5f64.sqrt() - 2.0);
        let t_outer = 2.0 * std::f64::consts::PI / (2.0 + 5f64.sqrt());
        assert!((inner.period - t_inner).abs() < 1e-6 * t_inner);
        assert!((outer.period - t_outer).abs() < 1e-6 * t_outer);
    }

    #[test]
    fn system8_spiral_from_inside_reaches_inner_cycle() {
        let cfg = SearchConfig::default();
        let traj = integrate(&system8(), (0.0, 0.2), 80.0, cfg.rtol, cfg.atol);
        let end = traj.end();
        let r = (end[0] * end[0] + end[1] * end[1]).sqrt();
        let r_inner = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        assert!((r - r_inner).abs() < 1e-4, "r = {r}");
    }

    #[test]
    fn reintegration_returns_to_start() {
        let cfg = SearchConfig::default();
        let found = find_cycles(&system8(), 0.4, 2.0, 16, &cfg).unwrap();
        for c in &found.cycles {
            let end = integrate(&system8(), (0.0, c.y_star), c.period, cfg.rtol, cfg.atol).end();
            let dist = (end[0].powi(2) + (end[1] - c.y_star).powi(2)).sqrt();
            assert!(dist < 1e-6, "cycle at {} reintegration misses by {dist}", c.y_star);
        }
    }

    #[test]
    fn time_reversal_swaps_stability() {
        let cfg = SearchConfig::default();
        let forward = find_cycles(&system8(), 0.1, 3.0, 40, &cfg).unwrap();
        let backward = find_cycles(&system8().reversed(), 0.1, 3.0, 40, &cfg).unwrap();
        assert_eq!(forward.cycles.len(), backward.cycles.len());
        for (f, b) in forward.cycles.iter().zip(backward.cycles.iter()) {
            assert!((f.y_star - b.y_star).abs() < 1e-6);
            assert_eq!(b.stability, f.stability.reversed());
        }
    }

    #[test]
    fn synthetic_offset_circle_not_star_shaped() {
        // circle of radius 1 centred at (5, 0), traversed counterclockwise
        let pts: Vec<(f64, f64, f64, f64)> = (0..256)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 256.0;
                (5.0 + t.cos(), t.sin(), -t.sin(), t.cos())
            })
            .collect();
        match star_shape(&pts) {
            StarShape::NotStarShaped { witness, value } => {
                // witness reproduces the reported angular momentum
                let (x, y) = witness;
                let i = (0..256)
                    .min_by(|&a, &b| {
                        let ta = 2.0 * std::f64::consts::PI * a as f64 / 256.0;
                        let tb = 2.0 * std::f64::consts::PI * b as f64 / 256.0;
                        let da = (5.0 + ta.cos() - x).hypot(ta.sin() - y);
                        let db = (5.0 + tb.cos() - x).hypot(tb.sin() - y);
                        da.total_cmp(&db)
                    })
                    .unwrap();
                let t = 2.0 * std::f64::consts::PI * i as f64 / 256.0;
                let again = (5.0 + t.cos()) * t.cos() - t.sin() * (-t.sin());
                assert!((again - value).abs() < 1e-12);
            }
            StarShape::StarShaped => panic!("offset circle cannot be star-shaped"),
        }
    }

    #[test]
    fn circle_at_origin_is_star_shaped() {
        let pts: Vec<(f64, f64, f64, f64)> = (0..128)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 128.0;
                (t.cos(), t.sin(), -t.sin(), t.cos())
            })
            .collect();
        assert_eq!(star_shape(&pts), StarShape::StarShaped);
    }

    #[test]
    fn bad_range_rejected() {
        let cfg = SearchConfig::default();
        assert!(matches!(
            find_cycles(&vdp(), -1.0, 2.0, 10, &cfg),
            Err(CycleError::BadRange { .. })
        ));
        assert!(matches!(
            find_cycles(&vdp(), 2.0, 1.0, 10, &cfg),
            Err(CycleError::BadRange { .. })
        ));
    }

    #[test]
    fn cycle_report_json_shape() {
        let cfg = SearchConfig::default();
        let found = find_cycles(&vdp(), 0.5, 4.0, 12, &cfg).unwrap();
        let report = found.cycles[0].report();
        let json = serde_json::to_value(&report).unwrap();
        for key in [
            "y_star",
            "period",
            "orientation",
            "multiplier",
            "div_integral",
            "stability",
            "star_shaped",
            "samples",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(json["stability"], "attracting");
        assert_eq!(json["orientation"], "clockwise");
    }
}
