//! Built-in example systems with reference results for the self-test.

use crate::criteria::{self, Conclusion, CriterionId, ScanConfig};
use crate::cycles::{find_cycles, OrientationSense, SearchConfig, Stability};
use crate::field::{FamilySpec, FamilyTermSpec, SystemKind, SystemSpec};
use crate::operators::Region;
use std::io::Write;

/// Reference results a gallery entry must reproduce.
#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub cycle_count: usize,
    /// Section ordinates of the cycles, ascending; empty when not pinned.
    pub y_stars: Vec<f64>,
    /// Mean radii for circular cycles; empty when not applicable.
    pub radii: Vec<f64>,
    pub stabilities: Vec<Stability>,
    pub orientations: Vec<OrientationSense>,
    /// The search must flag a continuum of periodic orbits.
    pub center: bool,
    /// Criteria whose hypotheses must all be satisfied.
    pub satisfied: Vec<CriterionId>,
    /// Criteria that must come back violated or not applicable.
    pub rejected: Vec<CriterionId>,
}

#[derive(Debug, Clone)]
pub struct GallerySystem {
    pub name: String,
    pub spec: SystemSpec,
    pub y_range: (f64, f64),
    pub seeds: usize,
    pub region: Region,
    pub expected: Expected,
}

fn fmt_num(v: f64) -> String {
    // plain decimal so the expression grammar can parse it back
    let s = format!("{v}");
    if s.contains('e') || s.contains('E') {
        format!("{v:.17}")
    } else {
        s
    }
}

/// The Van der Pol oscillator x'' + eps (x^2 - 1) x' + x = 0 in the phase
/// plane, with the damping scale substituted into the expression text.
pub fn vdp(eps: f64) -> GallerySystem {
    let f = format!("{}*(x^2-1)", fmt_num(eps));
    let expected = if eps == 1.0 {
        Expected {
            cycle_count: 1,
            y_stars: vec![2.1727136926],
            stabilities: vec![Stability::Attracting],
            orientations: vec![OrientationSense::Clockwise],
            satisfied: vec![
                CriterionId::Thm1,
                CriterionId::Thm2,
                CriterionId::Thm3,
                CriterionId::Thm4,
                CriterionId::Thm6,
                CriterionId::Cor1,
            ],
            rejected: vec![CriterionId::Thm5],
            ..Expected::default()
        }
    } else {
        Expected { cycle_count: 1, stabilities: vec![Stability::Attracting], ..Expected::default() }
    };
    GallerySystem {
        name: if eps == 1.0 { "vdp".into() } else { format!("vdp(eps={eps})") },
        spec: SystemSpec {
            kind: SystemKind::LienardPhase,
            f: Some(f.clone()),
            g: Some("x".into()),
            p: None,
            q: None,
            label: Some("vdp".into()),
            family: Some(FamilySpec {
                k: "y".into(),
                l: "y".into(),
                f,
                d: 1,
                terms: vec![FamilyTermSpec { h: "x".into(), m: "1".into(), j: 1 }],
            }),
        },
        y_range: (0.1, 8.0),
        seeds: 20,
        region: Region::square(3.0),
        expected,
    }
}

/// The two-cycle counterexample: both circles x^2 + y^2 = (3 -+ sqrt 5)/2 are
/// limit cycles, rotating in opposite senses.
pub fn system8() -> GallerySystem {
    let r_inner = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
    let r_outer = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
    GallerySystem {
        name: "system8".into(),
        spec: SystemSpec {
            kind: SystemKind::General,
            f: None,
            g: None,
            p: Some("y*(x^2+y^2-(x^2+y^2)^2)+x*(1-3*(x^2+y^2)+(x^2+y^2)^2)".into()),
            q: Some("-x*(x^2+y^2-(x^2+y^2)^2)+y*(1-3*(x^2+y^2)+(x^2+y^2)^2)".into()),
            label: Some("system8".into()),
            family: None,
        },
        y_range: (0.1, 3.0),
        seeds: 40,
        region: Region::square(3.0),
        expected: Expected {
            cycle_count: 2,
            y_stars: vec![r_inner, r_outer],
            radii: vec![r_inner, r_outer],
            stabilities: vec![Stability::Attracting, Stability::Repelling],
            orientations: vec![OrientationSense::Clockwise, OrientationSense::Counterclockwise],
            rejected: CriterionId::ALL.to_vec(),
            ..Expected::default()
        },
    }
}

/// The cubic-in-y' system x' = y^3, y' = (5x^2 - 1) y^3 - x^3 - x y^2 with a
/// single (repelling) limit cycle, supplied with its homogeneous-family
/// decomposition k = l = y^3, f = 1 - 5x^2, terms x^3 * 1 and x * y^2.
pub fn system11() -> GallerySystem {
    GallerySystem {
        name: "system11".into(),
        spec: SystemSpec {
            kind: SystemKind::General,
            f: None,
            g: None,
            p: Some("y^3".into()),
            q: Some("(5*x^2-1)*y^3-x^3-x*y^2".into()),
            label: Some("system11".into()),
            family: Some(FamilySpec {
                k: "y^3".into(),
                l: "y^3".into(),
                f: "1-5*x^2".into(),
                d: 3,
                terms: vec![
                    FamilyTermSpec { h: "x^3".into(), m: "1".into(), j: 3 },
                    FamilyTermSpec { h: "x".into(), m: "y^2".into(), j: 1 },
                ],
            }),
        },
        y_range: (0.5, 2.0),
        seeds: 30,
        region: Region::square(3.0),
        expected: Expected {
            cycle_count: 1,
            y_stars: vec![1.2574320369],
            stabilities: vec![Stability::Repelling],
            orientations: vec![OrientationSense::Clockwise],
            satisfied: vec![CriterionId::Thm6, CriterionId::Cor1],
            rejected: vec![
                CriterionId::Thm1,
                CriterionId::Thm2,
                CriterionId::Thm3,
                CriterionId::Thm4,
                CriterionId::Thm5,
            ],
            ..Expected::default()
        },
    }
}

/// The cubic-damping family x'' + (a x^3 + b x^2 + c x + d) x' + x = 0.
///
/// The default instance (1, 0, -1, 0) has odd damping with f(0) = 0, which
/// makes the system reversible under (x, y, t) -> (-x, y, -t): every orbit
/// around the origin is closed, so the search must report a center, not an
/// isolated cycle, while no uniqueness criterion applies.
pub fn cubic(a: f64, b: f64, c: f64, d: f64) -> GallerySystem {
    let f = format!(
        "{}*x^3+{}*x^2+{}*x+{}",
        fmt_num(a),
        fmt_num(b),
        fmt_num(c),
        fmt_num(d)
    );
    let default_instance = (a, b, c, d) == (1.0, 0.0, -1.0, 0.0);
    let expected = if default_instance {
        Expected {
            cycle_count: 0,
            center: true,
            rejected: CriterionId::ALL.to_vec(),
            ..Expected::default()
        }
    } else {
        Expected::default()
    };
    GallerySystem {
        name: if default_instance {
            "cubic".into()
        } else {
            format!("cubic({a},{b},{c},{d})")
        },
        spec: SystemSpec {
            kind: SystemKind::LienardPhase,
            f: Some(f.clone()),
            g: Some("x".into()),
            p: None,
            q: None,
            label: Some("cubic".into()),
            family: Some(FamilySpec {
                k: "y".into(),
                l: "y".into(),
                f,
                d: 1,
                terms: vec![FamilyTermSpec { h: "x".into(), m: "1".into(), j: 1 }],
            }),
        },
        y_range: (0.5, 5.0),
        seeds: 20,
        region: Region::square(3.0),
        expected,
    }
}

/// The harmonic oscillator x'' + x = 0: a center, no limit cycles.
pub fn harmonic() -> GallerySystem {
    GallerySystem {
        name: "harmonic".into(),
        spec: SystemSpec {
            kind: SystemKind::LienardPhase,
            f: Some("0".into()),
            g: Some("x".into()),
            p: None,
            q: None,
            label: Some("harmonic".into()),
            family: None,
        },
        y_range: (0.5, 5.0),
        seeds: 10,
        region: Region::square(3.0),
        expected: Expected {
            cycle_count: 0,
            center: true,
            rejected: CriterionId::ALL.to_vec(),
            ..Expected::default()
        },
    }
}

/// All gallery entries at their default parameters.
pub fn gallery() -> Vec<GallerySystem> {
    vec![harmonic(), vdp(1.0), system8(), system11(), cubic(1.0, 0.0, -1.0, 0.0)]
}

/// Look up a gallery system by name, with the tunable parameters applied.
pub fn build_system(name: &str, eps: f64, coeffs: [f64; 4]) -> Option<GallerySystem> {
    match name {
        "harmonic" => Some(harmonic()),
        "vdp" => Some(vdp(eps)),
        "system8" => Some(system8()),
        "system11" => Some(system11()),
        "cubic" => Some(cubic(coeffs[0], coeffs[1], coeffs[2], coeffs[3])),
        _ => None,
    }
}

/// Verify one gallery entry against its expected results; returns the list
/// of mismatches (empty = pass).
pub fn verify_entry(entry: &GallerySystem) -> Vec<String> {
    let mut mismatches = Vec::new();
    let field = match entry.spec.build() {
        Ok(f) => f,
        Err(e) => return vec![format!("construction failed: {e}")],
    };
    let cfg = SearchConfig::default();
    let search = match find_cycles(&field, entry.y_range.0, entry.y_range.1, entry.seeds, &cfg) {
        Ok(s) => s,
        Err(e) => return vec![format!("cycle search failed: {e}")],
    };
    let e = &entry.expected;
    if search.cycles.len() != e.cycle_count {
        mismatches.push(format!(
            "expected {} cycles, found {}",
            e.cycle_count,
            search.cycles.len()
        ));
    }
    if e.center && search.center_regions.is_empty() {
        mismatches.push("expected a continuum of periodic orbits to be flagged".into());
    }
    for (i, cycle) in search.cycles.iter().enumerate() {
        if let Some(&y) = e.y_stars.get(i) {
            if (cycle.y_star - y).abs() > 1e-6 {
                mismatches.push(format!("cycle {i}: y* = {} vs expected {y}", cycle.y_star));
            }
        }
        if let Some(&r) = e.radii.get(i) {
            if (cycle.mean_radius() - r).abs() > 1e-6 {
                mismatches
                    .push(format!("cycle {i}: radius {} vs expected {r}", cycle.mean_radius()));
            }
        }
        if let Some(&s) = e.stabilities.get(i) {
            if cycle.stability != s {
                mismatches.push(format!("cycle {i}: stability {:?} vs {s:?}", cycle.stability));
            }
        }
        if let Some(&o) = e.orientations.get(i) {
            if cycle.orientation != o {
                mismatches
                    .push(format!("cycle {i}: orientation {:?} vs {o:?}", cycle.orientation));
            }
        }
    }
    if !e.satisfied.is_empty() || !e.rejected.is_empty() {
        let scan = ScanConfig::default();
        match criteria::run_all(&entry.spec, entry.region, 41, &scan) {
            Ok(reports) => {
                for report in &reports {
                    if e.satisfied.contains(&report.criterion) && !report.all_satisfied() {
                        mismatches.push(format!(
                            "criterion {} expected satisfied, got {:?}",
                            report.criterion.name(),
                            report.conclusion
                        ));
                    }
                    if e.rejected.contains(&report.criterion)
                        && report.conclusion != Conclusion::NotApplicable
                    {
                        mismatches.push(format!(
                            "criterion {} expected violated/not-applicable, got {:?}",
                            report.criterion.name(),
                            report.conclusion
                        ));
                    }
                }
            }
            Err(err) => mismatches.push(format!("criteria run failed: {err}")),
        }
    }
    mismatches
}

/// Run every gallery entry against its expected results, printing one
/// pass/fail line per entry. Returns true when everything passed.
pub fn self_test<W: Write>(mut out: W) -> std::io::Result<bool> {
    let mut all_ok = true;
    for entry in gallery() {
        let mismatches = verify_entry(&entry);
        if mismatches.is_empty() {
            writeln!(out, "PASS {}", entry.name)?;
        } else {
            all_ok = false;
            writeln!(out, "FAIL {}", entry.name)?;
            for m in &mismatches {
                writeln!(out, "     {m}")?;
            }
        }
    }
    Ok(all_ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_constructs() {
        for entry in gallery() {
            assert!(entry.spec.build().is_ok(), "{} fails to build", entry.name);
            if let Some(family) = &entry.spec.family {
                assert!(
                    criteria::family_from_spec(family).is_ok(),
                    "{} family invalid",
                    entry.name
                );
            }
        }
    }

    #[test]
    fn lookup_by_name() {
        assert!(build_system("vdp", 0.5, [0.0; 4]).is_some());
        assert!(build_system("nonsense", 1.0, [0.0; 4]).is_none());
        let c = build_system("cubic", 1.0, [1.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(c.spec.f.as_deref(), Some("1*x^3+0*x^2+-1*x+0"));
        assert!(c.spec.build().is_ok());
    }

    #[test]
    fn vdp_eps_substitution() {
        let entry = vdp(0.5);
        let field = entry.spec.build().unwrap();
        // Q(0, 1) = -0 - 0.5(0 - 1) * 1 = 0.5
        let (_, q) = field.eval(0.0, 1.0);
        assert!((q - 0.5).abs() < 1e-15);
    }
}
