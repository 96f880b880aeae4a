//! Check execution. Each check maps to one library operation; checks run
//! in parallel and the report keeps declaration order.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::families::{Claim, ClaimKind, ClaimOutcome, FamilySpec, Object, Payload, Source, Verdict};
use crate::matgroup::{closure, fingerprint, ProjTransform};
use crate::multipoly::Form;
use crate::projgeom::{is_node, NodeVerdict, ProjPoint};
use crate::quadpencil::{numeric_base_points, numeric_singular_points, NumericOptions, NumericPoints, Pencil};

use super::eval::{instantiate, Instance};
use super::fixture::{CheckDecl, CheckKind, FpExpect};
use super::parse::{Expr, NameRef};
use super::report::{CheckRecord, Report};
use super::Fixture;

#[derive(Clone, Debug)]
pub struct Options {
    /// Cross-check exact node and base-point verdicts numerically.
    pub numeric_oracle: bool,
    pub param_overrides: BTreeMap<String, Expr>,
    pub numeric: NumericOptions,
    pub closure_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            numeric_oracle: false,
            param_overrides: BTreeMap::new(),
            numeric: NumericOptions::default(),
            closure_cap: 10_000,
        }
    }
}

/// Numeric point sets computed once per run and shared read-only.
#[derive(Default)]
struct NumericData {
    singular: BTreeMap<String, Result<NumericPoints, String>>,
    base: BTreeMap<String, Result<NumericPoints, String>>,
}

pub fn run_verification(f: &Fixture, opts: &Options) -> Report {
    let start = Instant::now();
    let inst: Cow<Instance> = if opts.param_overrides.is_empty() {
        Cow::Borrowed(&f.instance)
    } else {
        match instantiate(&f.source, &opts.param_overrides) {
            Ok(i) => Cow::Owned(i),
            Err(e) => {
                let records = f
                    .source
                    .checks
                    .iter()
                    .map(|c| CheckRecord {
                        id: c.id.clone(),
                        kind: c.kind.label().into(),
                        verdict: Verdict::Fail,
                        detail: format!("instantiation failed: {}", e),
                    })
                    .collect();
                return Report { records, elapsed: Some(start.elapsed()) };
            }
        }
    };
    let numeric = numeric_data(&inst, &f.source.checks, opts);
    let records = f
        .source
        .checks
        .par_iter()
        .map(|c| {
            let outcome = catch_unwind(AssertUnwindSafe(|| run_check(&inst, c, opts, &numeric)))
                .unwrap_or_else(|_| ClaimOutcome { verdict: Verdict::Fail, detail: "internal error while checking".into() });
            CheckRecord { id: c.id.clone(), kind: c.kind.label().into(), verdict: outcome.verdict, detail: outcome.detail }
        })
        .collect();
    Report { records, elapsed: Some(start.elapsed()) }
}

fn numeric_data(inst: &Instance, checks: &[CheckDecl], opts: &Options) -> NumericData {
    let mut quartics = Vec::new();
    let mut pencils = Vec::new();
    for c in checks {
        match &c.kind {
            CheckKind::NodesNumeric { on, .. } => quartics.push(on.name.clone()),
            CheckKind::Node { on, .. } | CheckKind::Singular { on, .. } if opts.numeric_oracle => {
                quartics.push(on.name.clone())
            }
            CheckKind::BasePointCount { pencil, .. } => pencils.push(pencil.name.clone()),
            CheckKind::BasePoints { pencil, .. } if opts.numeric_oracle => pencils.push(pencil.name.clone()),
            _ => {}
        }
    }
    quartics.sort();
    quartics.dedup();
    pencils.sort();
    pencils.dedup();
    let spec = &inst.spec;
    let singular = quartics
        .par_iter()
        .map(|n| {
            let r = match spec.objects.get(n) {
                Some(Object::Poly(f)) => numeric_singular_points(f, &opts.numeric).map_err(|e| e.to_string()),
                _ => Err(format!("no polynomial named '{}'", n)),
            };
            (n.clone(), r)
        })
        .collect();
    let base = pencils
        .par_iter()
        .map(|n| {
            let r = match spec.objects.get(n) {
                Some(Object::Pencil(p)) => numeric_base_points(p, &opts.numeric).map_err(|e| e.to_string()),
                _ => Err(format!("no pencil named '{}'", n)),
            };
            (n.clone(), r)
        })
        .collect();
    NumericData { singular, base }
}

fn names(v: &[NameRef]) -> Vec<String> {
    v.iter().map(|n| n.name.clone()).collect()
}

/// Generators named by `using`, or every matrix in the fixture.
fn generators(spec: &FamilySpec, gens: &Option<Vec<NameRef>>) -> Vec<String> {
    match gens {
        Some(v) => names(v),
        None => spec.objects.iter().filter(|(_, o)| matches!(o, Object::Matrix(_))).map(|(k, _)| k.clone()).collect(),
    }
}

/// The fixture seen with `on` as its working quartic.
fn view<'a>(spec: &'a FamilySpec, on: &NameRef) -> Result<Cow<'a, FamilySpec>, String> {
    if on.name == "Q" {
        return Ok(Cow::Borrowed(spec));
    }
    match spec.objects.get(&on.name) {
        Some(Object::Poly(f)) => {
            let mut s = spec.clone();
            s.quartic = f.clone();
            s.payload = Payload::Quartic(f.clone());
            Ok(Cow::Owned(s))
        }
        _ => Err(format!("no polynomial named '{}'", on.name)),
    }
}

fn derived(spec: &FamilySpec, kind: ClaimKind, cap: usize) -> ClaimOutcome {
    spec.evaluate(&Claim { id: String::new(), source: Source::Derived, kind }, cap)
}

fn fail(detail: String) -> ClaimOutcome {
    ClaimOutcome { verdict: Verdict::Fail, detail }
}

fn prefixed(call: String, o: ClaimOutcome) -> ClaimOutcome {
    ClaimOutcome { verdict: o.verdict, detail: format!("{}: {}", call, o.detail) }
}

fn complex_point(p: &ProjPoint) -> Option<[Complex64; 4]> {
    if p.coords().iter().any(|c| !c.is_numeric()) {
        return None;
    }
    let c: Vec<Complex64> = p.coords().iter().map(|c| c.to_complex()).collect();
    c.try_into().ok()
}

fn point<'a>(spec: &'a FamilySpec, n: &str) -> Result<&'a ProjPoint, String> {
    match spec.objects.get(n) {
        Some(Object::Point(p)) => Ok(p),
        _ => Err(format!("no point named '{}'", n)),
    }
}

fn pencil<'a>(spec: &'a FamilySpec, n: &str) -> Result<&'a Pencil, String> {
    match spec.objects.get(n) {
        Some(Object::Pencil(p)) => Ok(p),
        _ => Err(format!("no pencil named '{}'", n)),
    }
}

/// Numeric cross-check: every named point must appear in the numeric set.
fn oracle(o: ClaimOutcome, set: Option<&Result<NumericPoints, String>>, pts: &[&ProjPoint], tol: f64) -> ClaimOutcome {
    let Some(set) = set else { return o };
    let note = match set {
        Err(e) => format!("numeric oracle unavailable ({})", e),
        Ok(s) => {
            let mut missing = 0;
            let mut symbolic = false;
            for p in pts {
                match complex_point(p) {
                    Some(x) if !s.contains(&x, tol) => missing += 1,
                    Some(_) => {}
                    None => symbolic = true,
                }
            }
            if symbolic {
                "numeric oracle skipped for symbolic points".into()
            } else if missing > 0 {
                let detail = format!("{}; numeric oracle misses {} of {} points", o.detail, missing, pts.len());
                return ClaimOutcome { verdict: Verdict::Fail, detail };
            } else {
                format!("numeric oracle agrees ({} points, max residual {:.1e})", s.points.len(), s.max_residual())
            }
        }
    };
    ClaimOutcome { verdict: o.verdict, detail: format!("{}; {}", o.detail, note) }
}

fn run_check(inst: &Instance, c: &CheckDecl, opts: &Options, numeric: &NumericData) -> ClaimOutcome {
    let spec = &inst.spec;
    let cap = opts.closure_cap;
    let tol = opts.numeric.dedup_tol;
    let orc = |kind: &str, name: &str| {
        if !opts.numeric_oracle {
            return None;
        }
        match kind {
            "singular" => numeric.singular.get(name),
            _ => numeric.base.get(name),
        }
    };
    match &c.kind {
        CheckKind::Singular { point: p, on } => {
            let call = format!("is_node({}, {})", on.name, p.name);
            let run = || -> Result<ClaimOutcome, String> {
                let v = view(spec, on)?;
                let pt = point(spec, &p.name)?;
                let verdict = is_node(&v.quartic, pt).map_err(|e| e.to_string())?;
                let ok = matches!(verdict, NodeVerdict::NodeCertified | NodeVerdict::DegenerateSingular);
                let o = ClaimOutcome {
                    verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                    detail: format!("{} at {}", verdict, pt),
                };
                if verdict == NodeVerdict::DegenerateSingular && opts.numeric_oracle {
                    // Path tracking is not reliable at non-nodal singular points.
                    let detail = format!("{}; numeric oracle not applied to a non-nodal point", o.detail);
                    return Ok(ClaimOutcome { verdict: o.verdict, detail });
                }
                Ok(oracle(o, orc("singular", &on.name), &[pt], tol))
            };
            prefixed(call, run().unwrap_or_else(fail))
        }
        CheckKind::Node { point: p, on } => {
            let call = format!("is_node({}, {})", on.name, p.name);
            let run = || -> Result<ClaimOutcome, String> {
                let v = view(spec, on)?;
                let o = derived(&v, ClaimKind::Node(p.name.clone()), cap);
                Ok(oracle(o, orc("singular", &on.name), &[point(spec, &p.name)?], tol))
            };
            prefixed(call, run().unwrap_or_else(fail))
        }
        CheckKind::Trope { plane, on } => {
            let call = format!("trope_check({}, {})", on.name, plane.name);
            let o = view(spec, on).map(|v| derived(&v, ClaimKind::Trope(plane.name.clone()), cap));
            prefixed(call, o.unwrap_or_else(fail))
        }
        CheckKind::SemiInvariant { matrix, on } => {
            let call = format!("semi_invariant_factor({}, {})", matrix.name, on.name);
            let o = view(spec, on).map(|v| derived(&v, ClaimKind::SemiInvariant(matrix.name.clone()), cap));
            prefixed(call, o.unwrap_or_else(fail))
        }
        CheckKind::GroupOrder { order, gens } => {
            let g = generators(spec, gens);
            let call = format!("closure([{}])", g.join(", "));
            prefixed(call, derived(spec, ClaimKind::GroupOrder { gens: g, order: *order }, cap))
        }
        CheckKind::Fingerprint { expect, gens } => {
            let g = generators(spec, gens);
            let call = format!("fingerprint(closure([{}]))", g.join(", "));
            let o = match expect {
                FpExpect::Named(group) => {
                    derived(spec, ClaimKind::Fingerprint { gens: g, group: group.clone(), geiser: false }, cap)
                }
                FpExpect::Fields { order, hist, center, derived: der, abelian } => {
                    fingerprint_fields(spec, &g, cap, *order, hist.as_ref(), *center, *der, *abelian)
                        .unwrap_or_else(fail)
                }
            };
            prefixed(call, o)
        }
        CheckKind::Orbits { lengths, points, gens } => {
            let g = generators(spec, gens);
            let call = format!("orbits_on_points(closure([{}]), [{}])", g.join(", "), names(points).join(", "));
            let kind = ClaimKind::Orbits { gens: g, points: names(points), lengths: lengths.clone() };
            prefixed(call, derived(spec, kind, cap))
        }
        CheckKind::BasePoints { points, pencil: pn } => {
            let call = format!("verify_base_points({}, [{}])", pn.name, names(points).join(", "));
            let run = || -> Result<ClaimOutcome, String> {
                let o = derived(spec, ClaimKind::BasePoints { pencil: pn.name.clone(), points: names(points) }, cap);
                let pts: Vec<&ProjPoint> = points.iter().map(|p| point(spec, &p.name)).collect::<Result<_, _>>()?;
                Ok(oracle(o, orc("base", &pn.name), &pts, tol))
            };
            prefixed(call, run().unwrap_or_else(fail))
        }
        CheckKind::BasePointCount { count, pencil: pn } => {
            let call = format!("numeric_base_points({})", pn.name);
            let run = || -> Result<ClaimOutcome, String> {
                let p = pencil(spec, &pn.name)?;
                let set = numeric.base.get(&pn.name).cloned().unwrap_or_else(|| Err("not computed".into()))?;
                let transversal = set.points.iter().filter(|x| numeric_transversal(p, x)).count();
                let ok = set.points.len() == *count
                    && transversal == *count
                    && set.max_residual() < opts.numeric.residual_tol;
                Ok(ClaimOutcome {
                    verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                    detail: format!(
                        "{} points, {} transversal, max residual {:.1e} (expected {})",
                        set.points.len(),
                        transversal,
                        set.max_residual(),
                        count
                    ),
                })
            };
            prefixed(call, run().unwrap_or_else(fail))
        }
        CheckKind::DoubleRoots { count, pencil: pn } => {
            let call = format!("singular_members({})", pn.name);
            let kind = ClaimKind::DoubleRoots { pencil: pn.name.clone(), count: *count, vertices: Vec::new() };
            prefixed(call, derived(spec, kind, cap))
        }
        CheckKind::NodesNumeric { count, on } => {
            let call = format!("numeric_singular_points({})", on.name);
            let run = || -> Result<ClaimOutcome, String> {
                let set = numeric.singular.get(&on.name).cloned().unwrap_or_else(|| Err("not computed".into()))?;
                let ok = set.points.len() == *count && set.max_residual() < opts.numeric.residual_tol;
                Ok(ClaimOutcome {
                    verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                    detail: format!(
                        "{} singular points, max residual {:.1e} (expected {})",
                        set.points.len(),
                        set.max_residual(),
                        count
                    ),
                })
            };
            prefixed(call, run().unwrap_or_else(fail))
        }
        CheckKind::MatchesPaper { key } => {
            let call = format!("{} claim {}", spec.name, key.name);
            let o = match spec.claim(&key.name) {
                Some(cl) => spec.evaluate(cl, cap),
                None => fail(format!("no claim '{}' at these parameters", key.name)),
            };
            prefixed(call, o)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fingerprint_fields(
    spec: &FamilySpec,
    gens: &[String],
    cap: usize,
    order: Option<usize>,
    hist: Option<&BTreeMap<usize, usize>>,
    center: Option<usize>,
    derived: Option<usize>,
    abelian: Option<bool>,
) -> Result<ClaimOutcome, String> {
    let g: Vec<ProjTransform> = gens
        .iter()
        .map(|n| match spec.objects.get(n) {
            Some(Object::Matrix(m)) => Ok(m.clone()),
            _ => Err(format!("no matrix named '{}'", n)),
        })
        .collect::<Result<_, _>>()?;
    let cl = closure(&g, cap).map_err(|e| e.to_string())?;
    let fp = fingerprint(&cl).map_err(|e| e.to_string())?;
    let ok = order.is_none_or(|o| o == fp.order)
        && hist.is_none_or(|h| *h == fp.histogram)
        && center.is_none_or(|c| c == fp.center_order)
        && derived.is_none_or(|d| d == fp.derived_order)
        && abelian.is_none_or(|a| a == fp.abelian);
    Ok(ClaimOutcome { verdict: if ok { Verdict::Pass } else { Verdict::Fail }, detail: format!("closure {}", fp) })
}

fn eval_complex(f: &Form, x: &[Complex64; 4]) -> Complex64 {
    f.terms()
        .map(|(e, c)| e.iter().zip(x).fold(c.to_complex(), |acc, (&k, xi)| acc * xi.powu(k)))
        .sum()
}

/// Rank 3 of the numeric Jacobian, judged by the largest 3x3 minor
/// relative to the row norms.
fn numeric_transversal(p: &Pencil, x: &[Complex64; 4]) -> bool {
    let rows: Vec<[Complex64; 4]> = p
        .q
        .iter()
        .map(|f| {
            let mut r = [Complex64::new(0.0, 0.0); 4];
            for (i, ri) in r.iter_mut().enumerate() {
                *ri = eval_complex(&f.partial(i), x);
            }
            r
        })
        .collect();
    let norm: f64 = rows.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product();
    if norm == 0.0 {
        return false;
    }
    let det3 = |c: [usize; 3]| {
        let m = |i: usize, j: usize| rows[i][c[j]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    let best = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].iter().map(|&c| det3(c).norm()).fold(0.0, f64::max);
    best / norm > 1e-8
}
