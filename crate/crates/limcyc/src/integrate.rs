//! Adaptive Dormand-Prince 5(4) integration of planar orbits with dense
//! output and root-refined section crossings.

use crate::field::PlanarField;
use std::io::Write;

pub const DEFAULT_RTOL: f64 = 1e-9;
pub const DEFAULT_ATOL: f64 = 1e-12;
/// State norm beyond which the orbit is declared blown up.
pub const BLOWUP_NORM: f64 = 1e8;
/// Step size below which the integration is abandoned.
pub const MIN_STEP: f64 = 1e-14;
/// Crossings earlier than this after the start are treated as the departure.
pub const T_MIN_GUARD: f64 = 1e-6;
/// Section-crossing refinement target on the section coordinate.
pub const CROSSING_TOL: f64 = 1e-11;

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Difference between the 5th- and 4th-order weights (error estimator).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output coefficients of the 4th-order interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State = [f64; 2];

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached the requested end time.
    TEnd,
    /// Stopped by an event (section crossing).
    Event,
    /// State norm exceeded [`BLOWUP_NORM`] or became non-finite.
    Blowup,
    /// Step size fell below [`MIN_STEP`].
    StepUnderflow,
}

/// One accepted step with everything needed for dense interpolation.
#[derive(Debug, Clone)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    pub y0: State,
    pub y1: State,
    cont: [[f64; 2]; 5],
}

impl DenseStep {
    /// Interpolated state at `t`, for `t` within the step.
    pub fn eval(&self, t: f64) -> State {
        let theta = (t - self.t0) / self.h;
        self.eval_theta(theta)
    }

    fn eval_theta(&self, theta: f64) -> State {
        let th1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for i in 0..2 {
            let c = &self.cont;
            out[i] = c[0][i]
                + theta * (c[1][i] + th1 * (c[2][i] + theta * (c[3][i] + th1 * c[4][i])));
        }
        out
    }
}

/// Time-stamped orbit with dense output between the accepted steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    pub start: State,
    pub steps: Vec<DenseStep>,
    pub termination: Termination,
}

impl Trajectory {
    /// Final time reached.
    pub fn t_end(&self) -> f64 {
        self.steps.last().map_or(self.t0, |s| s.t0 + s.h)
    }

    /// Final state.
    pub fn end(&self) -> State {
        self.steps.last().map_or(self.start, |s| s.y1)
    }

    /// `(t, x, y)` at every accepted step, including the initial point.
    pub fn samples(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push((self.t0, self.start[0], self.start[1]));
        for s in &self.steps {
            out.push((s.t0 + s.h, s.y1[0], s.y1[1]));
        }
        out
    }

    /// Dense-output state at any `t` within the covered interval.
    pub fn sample(&self, t: f64) -> Option<State> {
        if self.steps.is_empty() {
            return (t == self.t0).then_some(self.start);
        }
        if t < self.t0 - 1e-12 || t > self.t_end() + 1e-12 {
            return None;
        }
        let idx = self
            .steps
            .partition_point(|s| s.t0 + s.h < t)
            .min(self.steps.len() - 1);
        Some(self.steps[idx].eval(t))
    }

    /// Write `t,x,y` CSV, one row per accepted step.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,y")?;
        for (t, x, y) in self.samples() {
            writeln!(w, "{t},{x},{y}")?;
        }
        Ok(())
    }
}

/// Orientation filter for section crossings: which way the transversal
/// coordinate must move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Any,
    IncreasingX,
    DecreasingX,
}

/// A ray section anchored at the origin. The default is the positive y-axis,
/// which every cycle encircling an equilibrium at the origin must cross.
#[derive(Debug, Clone, Copy)]
pub struct Section {
    /// Unit direction of the ray.
    pub direction: (f64, f64),
    pub orientation: Orientation,
}

impl Default for Section {
    fn default() -> Self {
        Section::positive_y_axis(Orientation::Any)
    }
}

impl Section {
    pub fn new(direction: (f64, f64), orientation: Orientation) -> Self {
        let norm = (direction.0 * direction.0 + direction.1 * direction.1).sqrt();
        assert!(norm > 0.0, "section direction must be non-zero");
        Section { direction: (direction.0 / norm, direction.1 / norm), orientation }
    }

    pub fn positive_y_axis(orientation: Orientation) -> Self {
        Section { direction: (0.0, 1.0), orientation }
    }

    /// Signed transversal coordinate; zero on the section line. For the
    /// positive y-axis this is simply x.
    pub fn coord(&self, p: State) -> f64 {
        p[0] * self.direction.1 - p[1] * self.direction.0
    }

    /// True when `p` lies on the ray side of the anchor.
    pub fn on_ray(&self, p: State) -> bool {
        p[0] * self.direction.0 + p[1] * self.direction.1 > 0.0
    }

    fn accepts(&self, before: f64, after: f64) -> bool {
        match self.orientation {
            Orientation::Any => true,
            Orientation::IncreasingX => before < after,
            Orientation::DecreasingX => before > after,
        }
    }
}

/// A refined section crossing.
#[derive(Debug, Clone, Copy)]
pub struct Crossing {
    pub t: f64,
    pub point: State,
    /// Sign of d(coord)/dt at the crossing: +1 for increasing x.
    pub increasing: bool,
}

struct Stepper<'a> {
    field: &'a PlanarField,
    t: f64,
    y: State,
    h: f64,
    rtol: f64,
    atol: f64,
    k1: State,
    err_old: f64,
}

fn rhs(field: &PlanarField, y: State) -> State {
    let (p, q) = field.eval(y[0], y[1]);
    [p, q]
}

impl<'a> Stepper<'a> {
    fn new(field: &'a PlanarField, t0: f64, y0: State, rtol: f64, atol: f64) -> Self {
        let k1 = rhs(field, y0);
        let h = initial_step(field, y0, k1, rtol, atol);
        Stepper { field, t: t0, y: y0, h, rtol, atol, k1, err_old: 1e-4 }
    }

    /// Advance one accepted step, not past `t_limit`.
    fn step(&mut self, t_limit: f64) -> Result<DenseStep, Termination> {
        const SAFE: f64 = 0.9;
        const BETA: f64 = 0.04;
        const EXPO: f64 = 0.2 - BETA * 0.75;
        const MAX_GROW: f64 = 10.0;
        const MAX_SHRINK: f64 = 0.2;

        loop {
            let mut h = self.h.min(t_limit - self.t);
            if h <= 0.0 {
                return Err(Termination::TEnd);
            }
            if h < MIN_STEP {
                return Err(Termination::StepUnderflow);
            }
            let mut k = [[0.0; 2]; 7];
            k[0] = self.k1;
            for s in 1..7 {
                let mut ys = self.y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    for i in 0..2 {
                        ys[i] += h * A[s][j] * kj[i];
                    }
                }
                k[s] = rhs(self.field, ys);
                let _ = C[s];
            }
            // k[6] is f(t+h, y1) because the last row of A equals the weights
            let mut y1 = self.y;
            for (j, kj) in k.iter().enumerate().take(6) {
                for i in 0..2 {
                    y1[i] += h * A[6][j] * kj[i];
                }
            }
            let mut err = 0.0;
            for i in 0..2 {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                e *= h;
                let scale = self.atol + self.rtol * self.y[i].abs().max(y1[i].abs());
                err += (e / scale) * (e / scale);
            }
            err = (err / 2.0).sqrt();

            if !err.is_finite() {
                self.h = h * MAX_SHRINK;
                if self.h < MIN_STEP {
                    return Err(Termination::StepUnderflow);
                }
                continue;
            }

            if err <= 1.0 {
                // accepted: build dense output and the PI-controlled next step
                let mut cont = [[0.0; 2]; 5];
                for i in 0..2 {
                    let ydiff = y1[i] - self.y[i];
                    let bspl = h * k[0][i] - ydiff;
                    cont[0][i] = self.y[i];
                    cont[1][i] = ydiff;
                    cont[2][i] = bspl;
                    cont[3][i] = ydiff - h * k[6][i] - bspl;
                    let mut d = 0.0;
                    for (j, kj) in k.iter().enumerate() {
                        d += D[j] * kj[i];
                    }
                    cont[4][i] = h * d;
                }
                let step = DenseStep { t0: self.t, h, y0: self.y, y1, cont };

                let fac = (err.powf(EXPO) * self.err_old.powf(-BETA) / SAFE)
                    .clamp(1.0 / MAX_GROW, 1.0 / MAX_SHRINK);
                self.err_old = err.max(1e-4);
                self.t += h;
                self.y = y1;
                self.k1 = k[6];
                self.h = h / fac;

                if !y1[0].is_finite()
                    || !y1[1].is_finite()
                    || y1[0].abs() > BLOWUP_NORM
                    || y1[1].abs() > BLOWUP_NORM
                {
                    return Err(Termination::Blowup);
                }
                return Ok(step);
            }
            // rejected: shrink without growth
            let fac = (err.powf(0.2) / SAFE).clamp(1.0, 1.0 / MAX_SHRINK);
            h /= fac;
            self.h = h;
            if self.h < MIN_STEP {
                return Err(Termination::StepUnderflow);
            }
        }
    }
}

/// Standard starting-step heuristic for an order-5 method.
fn initial_step(field: &PlanarField, y0: State, f0: State, rtol: f64, atol: f64) -> f64 {
    let sc = |v: f64| atol + rtol * v.abs();
    let d0 = ((y0[0] / sc(y0[0])).powi(2) + (y0[1] / sc(y0[1])).powi(2)).sqrt();
    let d1 = ((f0[0] / sc(y0[0])).powi(2) + (f0[1] / sc(y0[1])).powi(2)).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = [y0[0] + h0 * f0[0], y0[1] + h0 * f0[1]];
    let f1 = rhs(field, y1);
    let d2 = (((f1[0] - f0[0]) / sc(y0[0])).powi(2) + ((f1[1] - f0[1]) / sc(y0[1])).powi(2)).sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    h1.min(100.0 * h0).max(MIN_STEP)
}

/// Integrate from `p0` until `t_end` (relative times start at 0). Violated
/// tolerances never abort: blowup and step underflow terminate the
/// trajectory with the reason recorded.
pub fn integrate(
    field: &PlanarField,
    p0: (f64, f64),
    t_end: f64,
    rtol: f64,
    atol: f64,
) -> Trajectory {
    assert!(rtol > 0.0 && atol > 0.0, "tolerances must be positive");
    let y0 = [p0.0, p0.1];
    let mut stepper = Stepper::new(field, 0.0, y0, rtol, atol);
    let mut steps = Vec::new();
    let termination = loop {
        match stepper.step(t_end) {
            Ok(step) => steps.push(step),
            Err(reason) => break reason,
        }
        if stepper.t >= t_end {
            break Termination::TEnd;
        }
    };
    Trajectory { t0: 0.0, start: y0, steps, termination }
}

/// Fixed-step integration with the same Runge-Kutta stages, used for
/// convergence-order studies. No step control, no dense output.
pub fn integrate_fixed(field: &PlanarField, p0: (f64, f64), t_end: f64, n_steps: usize) -> State {
    let h = t_end / n_steps as f64;
    let mut y = [p0.0, p0.1];
    for _ in 0..n_steps {
        let mut k = [[0.0; 2]; 7];
        k[0] = rhs(field, y);
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..2 {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            k[s] = rhs(field, ys);
        }
        for (j, kj) in k.iter().enumerate().take(6) {
            for i in 0..2 {
                y[i] += h * A[6][j] * kj[i];
            }
        }
    }
    y
}

/// Scan one dense step for a crossing of `section` after `t_after`,
/// returning the earliest refined crossing that lies on the ray and matches
/// the requested orientation.
fn crossing_in_step(step: &DenseStep, section: &Section, t_after: f64) -> Option<Crossing> {
    const SUBDIV: usize = 8;
    let t_lo = step.t0.max(t_after);
    let t_hi = step.t0 + step.h;
    if t_lo >= t_hi {
        return None;
    }
    let coord_at = |t: f64| section.coord(step.eval(t));
    let mut prev_t = t_lo;
    let mut prev_c = coord_at(prev_t);
    for i in 1..=SUBDIV {
        let t = t_lo + (t_hi - t_lo) * i as f64 / SUBDIV as f64;
        let c = coord_at(t);
        if prev_c == 0.0 || (prev_c < 0.0) != (c < 0.0) {
            let t_star = if prev_c == 0.0 {
                prev_t
            } else {
                crate::numeric::bisect(prev_t, t, coord_at, 0.0, CROSSING_TOL)?
            };
            let point = step.eval(t_star);
            let increasing = c > prev_c;
            if section.on_ray(point) && section.accepts(prev_c, c) {
                return Some(Crossing { t: t_star, point, increasing });
            }
            // crossing rejected by the ray/orientation filter: keep scanning
        }
        prev_t = t;
        prev_c = c;
    }
    None
}

/// First crossing of `section` strictly after the departure guard, within
/// `t_max` time units. `None` when the orbit escapes, stalls or never crosses.
pub fn next_crossing(
    field: &PlanarField,
    p0: (f64, f64),
    section: &Section,
    t_max: f64,
    rtol: f64,
    atol: f64,
) -> Option<Crossing> {
    let mut stepper = Stepper::new(field, 0.0, [p0.0, p0.1], rtol, atol);
    loop {
        match stepper.step(t_max) {
            Ok(step) => {
                if let Some(c) = crossing_in_step(&step, section, T_MIN_GUARD) {
                    return Some(c);
                }
            }
            Err(_) => return None,
        }
        if stepper.t >= t_max {
            return None;
        }
    }
}
