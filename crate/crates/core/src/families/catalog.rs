//! Named catalog entries. Each entry carries its payload, the named objects
//! the verifier can refer to, and the claims made about it, stored as
//! expectations that are re-checked rather than assumed.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactfield::{sqrt_or_adjoin, Tower, TowerElem};
use crate::linalg::{kernel_basis_sparse, Matrix};
use crate::matgroup::{closure, fingerprint, orbits_on_points, semi_invariant_factor, Fingerprint, ProjTransform};
use crate::multipoly::{monomials, power_sum, power_sum_basis, power_sum_quartic, xvars, Form};
use crate::projgeom::{is_node, symmetric_matrix, trope_check, NodeVerdict, ProjPoint};
use crate::quadpencil::{det_binary_form, discriminant_quartic, singular_members, verify_base_points, Pencil};

use super::constraints::{solve_singularity_constraints, twisted_cubic_solution, vanish_on_twisted_cubic, weight_monomials};
use super::incidence::{derive_incidence_pencil, swap_symmetric_members, IncidenceData};
use super::sys::{sys_build, system_map, SysParams};
use super::FamilyError;

const KEYS: [&str; 12] = [
    "pr2", "pr5", "pr6", "eq5", "pr8", "pr10", "pr11", "eq4", "pr13", "pr14", "sec11", "sysZero",
];

pub fn catalog_keys() -> &'static [&'static str] {
    &KEYS
}

#[derive(Clone, Debug)]
pub enum Payload {
    Quartic(Form),
    Pencil(Pencil),
}

/// A named object exported by a family.
#[derive(Clone, Debug)]
pub enum Object {
    Poly(Form),
    Point(ProjPoint),
    Matrix(ProjTransform),
    Pencil(Pencil),
}

/// Where a claim comes from: a statement printed in the source (a failure
/// is a MISMATCH) or a property of the re-derived data (a failure is a FAIL).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Printed,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Mismatch,
    Skip,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Mismatch => "MISMATCH",
            Verdict::Skip => "SKIP",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "PASS" => Ok(Verdict::Pass),
            "FAIL" => Ok(Verdict::Fail),
            "MISMATCH" => Ok(Verdict::Mismatch),
            "SKIP" => Ok(Verdict::Skip),
            _ => Err(format!("unknown verdict '{}'", s)),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ClaimKind {
    /// The named point is a node of the quartic.
    Node(String),
    /// The named plane cuts the quartic in a double conic.
    Trope(String),
    /// The named matrix preserves the quartic up to a scalar.
    SemiInvariant(String),
    GroupOrder { gens: Vec<String>, order: usize },
    /// Closure of the generators matches a stored fingerprint. With `geiser`
    /// the full automorphism group is this group times the deck involution.
    Fingerprint { gens: Vec<String>, group: String, geiser: bool },
    Orbits { gens: Vec<String>, points: Vec<String>, lengths: Vec<usize> },
    /// Each member `Q_(p:q)` has rank 3 with vertex at the paired point.
    Incidences { pencil: String, data: IncidenceData },
    /// Two quartics agree up to a nonzero scalar.
    Proportional { printed: String, derived: String },
    /// Two sets of coefficient vectors span the same space.
    SameSpan { printed: Vec<Vec<TowerElem>>, derived: Vec<Vec<TowerElem>> },
    DeterminantForm { pencil: String, expected: Form },
    DoubleRoots { pencil: String, count: usize, vertices: Vec<String> },
    BasePoints { pencil: String, points: Vec<String> },
    WeightMonomials { n: u32, weights: [u32; 4], target: u32, expected: Vec<Vec<u32>> },
    /// The named quartic is singular along the whole twisted cubic.
    TwistedCubic(String),
    /// A printed statement that cannot be checked as stated.
    Unverifiable(String),
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub id: String,
    pub source: Source,
    pub kind: ClaimKind,
}

impl Claim {
    fn printed(id: &str, kind: ClaimKind) -> Self {
        Claim { id: id.into(), source: Source::Printed, kind }
    }

    fn derived(id: &str, kind: ClaimKind) -> Self {
        Claim { id: id.into(), source: Source::Derived, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimOutcome {
    pub verdict: Verdict,
    pub detail: String,
}

/// A printed family kept next to the derived one for comparison.
#[derive(Clone, Debug)]
pub struct PrintedFamily {
    pub label: String,
    pub printed: Payload,
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub name: String,
    pub parameters: BTreeMap<String, TowerElem>,
    pub payload: Payload,
    /// The branch quartic: the payload itself or the pencil discriminant.
    pub quartic: Form,
    pub objects: BTreeMap<String, Object>,
    pub printed: Vec<PrintedFamily>,
    pub claims: Vec<Claim>,
}

/// Stored fingerprints of the groups named in the catalog. Test code
/// re-derives each from an abstract construction.
pub fn named_fingerprint(name: &str) -> Option<Fingerprint> {
    let fp = |order: usize, hist: &[(usize, usize)], center: usize, derived: usize| Fingerprint {
        order,
        histogram: hist.iter().copied().collect(),
        abelian: false,
        center_order: center,
        derived_order: derived,
    };
    Some(match name {
        "C2^2:S4" => fp(96, &[(1, 1), (2, 27), (3, 32), (4, 36)], 1, 48),
        "C2^3:S4" => fp(192, &[(1, 1), (2, 43), (3, 32), (4, 84), (6, 32)], 1, 48),
        "(C2^2:S4):C3" => fp(288, &[(1, 1), (2, 27), (3, 80), (4, 36), (6, 144)], 1, 48),
        "S4" => fp(24, &[(1, 1), (2, 9), (3, 8), (4, 6)], 1, 12),
        "S4xC2" => fp(48, &[(1, 1), (2, 19), (3, 8), (4, 12), (6, 8)], 2, 12),
        "D8xC2" => fp(16, &[(1, 1), (2, 11), (4, 4)], 4, 2),
        "A4" => fp(12, &[(1, 1), (2, 3), (3, 8)], 1, 4),
        "S5" => fp(120, &[(1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20)], 1, 60),
        _ => return None,
    })
}

pub const NAMED_GROUPS: [&str; 8] = ["C2^2:S4", "C2^3:S4", "(C2^2:S4):C3", "S4", "S4xC2", "D8xC2", "A4", "S5"];

fn n(k: i64) -> TowerElem {
    TowerElem::from_int(k)
}

fn q(a: i64, b: i64) -> TowerElem {
    TowerElem::frac(a, b)
}

fn mono(e: [u32; 4], c: TowerElem) -> Form {
    Form::monomial(xvars(), e.to_vec(), c)
}

fn pt(c: Vec<TowerElem>) -> Result<ProjPoint, FamilyError> {
    Ok(ProjPoint::new(c)?)
}

fn ipt(c: [i64; 4]) -> ProjPoint {
    ProjPoint::from_ints(&c)
}

fn mat(rows: Vec<Vec<TowerElem>>) -> Result<ProjTransform, FamilyError> {
    Ok(ProjTransform::new(Matrix::from_rows(rows))?)
}

fn imat(rows: [[i64; 4]; 4]) -> ProjTransform {
    let r: Vec<&[i64]> = rows.iter().map(|r| &r[..]).collect();
    ProjTransform::from_ints(&r)
}

fn diag(d: [i64; 4]) -> ProjTransform {
    let mut rows = [[0; 4]; 4];
    for i in 0..4 {
        rows[i][i] = d[i];
    }
    imat(rows)
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{}{}", prefix, i)).collect()
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Parameter lookup with defaults and a check that nothing unknown was passed.
struct Params<'a> {
    family: &'a str,
    given: &'a BTreeMap<String, TowerElem>,
    used: BTreeMap<String, TowerElem>,
}

impl<'a> Params<'a> {
    fn new(family: &'a str, given: &'a BTreeMap<String, TowerElem>, allowed: &[&str]) -> Result<Self, FamilyError> {
        if let Some(k) = given.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(FamilyError::ConstraintViolated(format!(
                "{} has no parameter '{}' (expected one of {})",
                family,
                k,
                allowed.join(", ")
            )));
        }
        Ok(Params { family, given, used: BTreeMap::new() })
    }

    fn get(&mut self, name: &str, default: TowerElem) -> TowerElem {
        let v = self.given.get(name).cloned().unwrap_or(default);
        self.used.insert(name.to_string(), v.clone());
        v
    }

    fn symbolic(&mut self, name: &str) -> TowerElem {
        self.get(name, TowerElem::param(name))
    }

    fn require(&self, ok: bool, what: &str) -> Result<(), FamilyError> {
        if ok {
            Ok(())
        } else {
            Err(FamilyError::ConstraintViolated(format!("{}: {}", self.family, what)))
        }
    }
}

struct Builder {
    objects: BTreeMap<String, Object>,
    printed: Vec<PrintedFamily>,
    claims: Vec<Claim>,
}

impl Builder {
    fn new() -> Self {
        Builder { objects: BTreeMap::new(), printed: Vec::new(), claims: Vec::new() }
    }

    fn point(&mut self, name: &str, p: ProjPoint) {
        self.objects.insert(name.into(), Object::Point(p));
    }

    fn poly(&mut self, name: &str, f: Form) {
        self.objects.insert(name.into(), Object::Poly(f));
    }

    fn matrix(&mut self, name: &str, m: ProjTransform) {
        self.objects.insert(name.into(), Object::Matrix(m));
    }

    fn pencil(&mut self, name: &str, p: Pencil) {
        self.objects.insert(name.into(), Object::Pencil(p));
    }

    fn claim(&mut self, c: Claim) {
        self.claims.push(c);
    }

    /// Node claims for each named point.
    fn nodes(&mut self, pts: &[String], source: Source) {
        for p in pts {
            self.claims.push(Claim { id: format!("node-{}", p), source, kind: ClaimKind::Node(p.clone()) });
        }
    }

    fn finish(
        mut self,
        name: &str,
        parameters: BTreeMap<String, TowerElem>,
        payload: Payload,
    ) -> Result<FamilySpec, FamilyError> {
        let quartic = match &payload {
            Payload::Quartic(f) => f.clone(),
            Payload::Pencil(p) => {
                self.objects.insert("P".into(), Object::Pencil(p.clone()));
                discriminant_quartic(p)?
            }
        };
        self.objects.insert("Q".into(), Object::Poly(quartic.clone()));
        Ok(FamilySpec {
            name: name.into(),
            parameters,
            payload,
            quartic,
            objects: self.objects,
            printed: self.printed,
            claims: self.claims,
        })
    }
}

/// Construct a catalog entry. Missing parameters default to the value used in
/// the source or, where the family is continuous, to a free symbol.
pub fn build_family(name: &str, params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    match name {
        "pr2" => build_pr2(params),
        "pr5" => build_pr5(params),
        "pr6" => build_pr6(params),
        "eq4" => build_eq4(params),
        "eq5" => build_eq5(params),
        "pr8" => build_pr8(params),
        "pr10" => build_pr10(params),
        "pr11" => build_pr11(params),
        "pr13" => build_pr13(params),
        "pr14" => build_pr14(params),
        "sec11" => build_sec11(params),
        "sysZero" => build_sys_zero(params),
        _ => Err(FamilyError::UnknownFamily(name.to_string())),
    }
}

/// Transposition of x0, x1 and the 4-cycle of the coordinates.
fn s4_generators() -> [ProjTransform; 2] {
    [
        imat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        imat([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]]),
    ]
}

fn build_pr2(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let p = Params::new("pr2", params, &[])?;
    let v = xvars();
    let x: Vec<Form> = (0..4).map(|i| Form::var(v.clone(), i)).collect();
    let x4 = x.iter().fold(Form::zero(v.clone(), 1), |a, b| a.sub(b));
    let all: Vec<Form> = x.iter().cloned().chain(std::iter::once(x4)).collect();
    let s4 = all.iter().fold(Form::zero(v.clone(), 4), |a, b| a.add(&b.pow(4)));
    let s2 = all.iter().fold(Form::zero(v.clone(), 2), |a, b| a.add(&b.pow(2)));
    let quartic = s4.scale(&n(4)).sub(&s2.pow(2));
    let mut b = Builder::new();
    // Points of type (1, 1, -1, -1, 0) in five coordinates, up to sign.
    let mut pts: Vec<ProjPoint> = Vec::new();
    for zero in 0..5 {
        let rest: Vec<usize> = (0..5).filter(|&i| i != zero).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                let mut c = [-1i64; 5];
                c[zero] = 0;
                c[rest[i]] = 1;
                c[rest[j]] = 1;
                let point = ipt([c[0], c[1], c[2], c[3]]);
                if !pts.contains(&point) {
                    pts.push(point);
                }
            }
        }
    }
    let node_names = names("n", pts.len());
    for (nm, point) in node_names.iter().zip(pts) {
        b.point(nm, point);
    }
    b.nodes(&node_names, Source::Printed);
    // Standard representation: x_i -> x_{pi(i)} with x4 = -(x0+x1+x2+x3).
    b.matrix("T", imat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]));
    b.matrix("C5", imat([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]]));
    let gens = strs(&["T", "C5"]);
    for g in &gens {
        b.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
    }
    b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens: gens.clone(), group: "S5".into(), geiser: true }));
    b.claim(Claim::printed("orbits", ClaimKind::Orbits { gens, points: node_names, lengths: vec![15] }));
    b.finish("pr2", p.used, Payload::Quartic(quartic))
}

/// Symmetric sums `sum x_i^4`, `sum x_i^3 x_j`, `sum x_i^2 x_j^2`,
/// `sum x_i^2 x_j x_k` over distinct monomials, and `x0 x1 x2 x3`.
fn symmetric_quartic_basis() -> Vec<Form> {
    let mut basis = vec![Form::zero(xvars(), 4); 5];
    for e in monomials(4, 4) {
        let mut shape: Vec<u32> = e.iter().copied().filter(|&k| k > 0).collect();
        shape.sort_unstable_by(|a, b| b.cmp(a));
        let k = match shape.as_slice() {
            [4] => 0,
            [3, 1] => 1,
            [2, 2] => 2,
            [2, 1, 1] => 3,
            [1, 1, 1, 1] => 4,
            _ => unreachable!(),
        };
        basis[k] = basis[k].add(&Form::monomial(xvars(), e, TowerElem::one()));
    }
    basis
}

fn build_pr5(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("pr5", params, &["b", "d"])?;
    let bb = p.symbolic("b");
    let dd = p.symbolic("d");
    let basis = symmetric_quartic_basis();
    let node = ipt([1, 1, 0, 2]);
    let trope = Form::linear(xvars(), &[n(3), n(-1), n(-1), n(-1)]);
    let space = solve_singularity_constraints(&basis, &[node.clone()], &[trope.clone()])?;
    // Chart with the coefficients of the x_i^3 x_j and x_i^2 x_j x_k sums free.
    let dirs = match space.linear_chart(&[1, 3])? {
        Some(d) => d,
        None => return Err(FamilyError::Derivation("solution space is not a graph over (b, d)".into())),
    };
    let coeffs: Vec<TowerElem> = (0..5).map(|i| &(&dirs[0][i] * &bb) + &(&dirs[1][i] * &dd)).collect();
    let quartic = space.form_of(&coeffs);
    let printed = vec![
        vec![q(-29, 72), n(1), q(-59, 36), n(0), n(-5)],
        vec![q(5, 72), n(0), q(-37, 36), n(1), n(-7)],
    ];
    let mut b = Builder::new();
    b.point("node", node);
    b.poly("trope", trope);
    b.nodes(&strs(&["node"]), Source::Derived);
    b.claim(Claim::derived("trope", ClaimKind::Trope("trope".into())));
    b.claim(Claim::printed("relations", ClaimKind::SameSpan { printed, derived: space.kernel.clone() }));
    b.finish("pr5", p.used, Payload::Quartic(quartic))
}

fn build_pr6(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let allowed = ["a", "a01", "a02", "a03", "a12", "a13", "a23"];
    let mut p = Params::new("pr6", params, &allowed)?;
    let a = p.get("a", n(1));
    let aij: Vec<TowerElem> = allowed[1..].iter().map(|k| p.get(k, n(0))).collect();
    let mut quad = (0..4).fold(Form::zero(xvars(), 2), |acc, i| {
        let mut e = [0; 4];
        e[i] = 2;
        acc.add(&mono(e, n(1)))
    });
    for ((i, j), c) in PAIRS.iter().zip(&aij) {
        let mut e = [0; 4];
        e[*i] = 1;
        e[*j] = 1;
        quad = quad.add(&mono(e, c.clone()));
    }
    let quartic = quad.pow(2).add(&mono([1, 1, 1, 1], a.clone()));
    p.require(!a.is_zero(), "a must be nonzero")?;
    let mut b = Builder::new();
    let [t, c4] = s4_generators();
    b.matrix("T", t);
    b.matrix("C4", c4);
    b.matrix("N", diag([1, 1, -1, -1]));
    if aij.iter().all(|c| c.is_zero()) {
        let gens = strs(&["T", "C4", "N"]);
        for g in &gens {
            b.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
        }
        b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "C2^2:S4".into(), geiser: true }));
    } else if aij.iter().all(|c| *c == aij[0]) {
        let gens = strs(&["T", "C4"]);
        for g in &gens {
            b.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
        }
        b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "S4".into(), geiser: true }));
    } else {
        b.claim(Claim::printed(
            "group",
            ClaimKind::Unverifiable("the group is only stated for all a_ij zero or all equal".into()),
        ));
    }
    b.finish("pr6", p.used, Payload::Quartic(quartic))
}

/// Shared part of the two power-sum families: the line of quartics
/// singular at `node`, with `s1 = 0` as a trope.
fn power_sum_family(
    name: &str,
    params: &BTreeMap<String, TowerElem>,
    node: [i64; 4],
    printed: [[TowerElem; 4]; 2],
) -> Result<(Builder, BTreeMap<String, TowerElem>, Form), FamilyError> {
    let mut p = Params::new(name, params, &["A"])?;
    let a = p.symbolic("A");
    p.require(a != n(1), "A must differ from 1")?;
    let node_pt = ipt(node);
    let s1 = power_sum(1);
    let space = solve_singularity_constraints(&power_sum_basis(), &[node_pt.clone()], &[s1.clone()])?;
    let (base, dirs) = space
        .affine_chart(0, &[3])?
        .ok_or_else(|| FamilyError::Derivation("solution line is not a graph over the s1^4 coefficient".into()))?;
    let coeffs: Vec<TowerElem> = (0..4).map(|i| &base[i] + &(&dirs[0][i] * &a)).collect();
    let quartic = space.form_of(&coeffs);
    let printed_coeffs: [TowerElem; 4] = std::array::from_fn(|i| &printed[0][i] + &(&printed[1][i] * &a));
    let printed_quartic = power_sum_quartic(&printed_coeffs);
    let mut b = Builder::new();
    b.point("node", node_pt);
    b.poly("trope", s1);
    b.poly("Q_printed", printed_quartic.clone());
    b.printed.push(PrintedFamily { label: "coefficients".into(), printed: Payload::Quartic(printed_quartic) });
    b.nodes(&strs(&["node"]), Source::Derived);
    b.claim(Claim::derived("trope", ClaimKind::Trope("trope".into())));
    b.claim(Claim::printed(
        "coefficients",
        ClaimKind::Proportional { printed: "Q_printed".into(), derived: "Q".into() },
    ));
    Ok((b, p.used, quartic))
}

fn build_eq4(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let printed = [[n(1), n(-2), n(1), n(0)], [n(0), n(2), n(-3), n(1)]];
    let (mut b, used, quartic) = power_sum_family("eq4", params, [0, 0, 0, 1], printed)?;
    let [t, c4] = s4_generators();
    b.matrix("T", t);
    b.matrix("C4", c4);
    let gens = strs(&["T", "C4"]);
    b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "S4".into(), geiser: true }));
    b.finish("eq4", used, Payload::Quartic(quartic))
}

fn build_eq5(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let printed = [[n(1), n(-1), q(1, 4), n(0)], [n(0), n(8), n(-6), n(1)]];
    let (mut b, used, quartic) = power_sum_family("eq5", params, [1, 1, 0, 0], printed)?;
    let [t, c4] = s4_generators();
    b.matrix("T", t);
    b.matrix("C4", c4);
    let gens = strs(&["T", "C4"]);
    b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "S4".into(), geiser: true }));
    b.finish("eq5", used, Payload::Quartic(quartic))
}

fn is_eisenstein(t: &TowerElem) -> bool {
    (&(t * t) - &(t - &n(1))).is_zero()
}

fn build_pr8(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("pr8", params, &["t"])?;
    let t = p.symbolic("t");
    p.require(!t.is_zero() && t != n(1), "t must avoid 0 and 1")?;
    p.require(
        t != n(2) && t != q(1, 2),
        "t = 2 and t = 1/2 are equivalent to t = -1 under a change of (p:q); use t = -1",
    )?;
    let pencil = sys_build(&SysParams::zero(t.clone()))?;
    let mut tower = Tower::base();
    let alpha = sqrt_or_adjoin(&mut tower, &-&t, "alpha")?;
    let beta = sqrt_or_adjoin(&mut tower, &(&t - &n(1)), "beta")?;
    let half = q(1, 2);
    let h = |x: &TowerElem| -> Result<TowerElem, FamilyError> { Ok(x.checked_div(&n(2))?) };
    let ia = alpha.inv()?;
    let ib = beta.inv()?;
    let e = mat(vec![
        vec![half.clone(), h(&alpha)?, h(&-&beta)?, h(&(&alpha * &beta))?],
        vec![h(&ia)?, half.clone(), h(&(&beta * &ia))?, h(&-&beta)?],
        vec![h(&ib)?, h(&-&(&alpha * &ib))?, -&half, h(&-&alpha)?],
        vec![h(&(&ia * &ib))?, h(&-&ib)?, h(&ia)?, half.clone()],
    ])?;
    let mut b = Builder::new();
    b.matrix("D1", diag([1, -1, 1, 1]));
    b.matrix("D2", diag([1, 1, -1, 1]));
    b.matrix("D3", diag([1, 1, 1, -1]));
    b.matrix("L1", system_map("swap-t", &t)?.coord);
    b.matrix("L2", system_map("cross-t", &t)?.coord);
    b.matrix("E", e);
    let mut gens = strs(&["D1", "D2", "D3", "L1", "L2", "E"]);
    let group = if t == n(-1) {
        b.matrix("L4", system_map("order4", &t)?.coord);
        gens.push("L4".into());
        "C2^3:S4"
    } else if is_eisenstein(&t) {
        b.matrix("L3", system_map("order3", &t)?.coord);
        gens.push("L3".into());
        "(C2^2:S4):C3"
    } else {
        "C2^2:S4"
    };
    let ab = &alpha * &beta;
    let mut pts = Vec::new();
    for s0 in [1, -1] {
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                pts.push(pt(vec![&ab * &n(s0), &beta * &n(s1), &alpha * &n(s2), n(1)])?);
            }
        }
    }
    let base = names("b", 8);
    for (nm, x) in base.iter().zip(pts) {
        b.point(nm, x);
    }
    let verts = names("v", 4);
    for (i, nm) in verts.iter().enumerate() {
        let mut c = [0; 4];
        c[i] = 1;
        b.point(nm, ipt(c));
    }
    b.nodes(&base, Source::Derived);
    b.nodes(&verts, Source::Derived);
    b.claim(Claim::derived("base-points", ClaimKind::BasePoints { pencil: "P".into(), points: base }));
    for g in &gens {
        b.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
    }
    b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: group.into(), geiser: true }));
    b.finish("pr8", p.used, Payload::Pencil(pencil))
}

fn build_pr10(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("pr10", params, &["a23", "c01"])?;
    let a23 = p.get("a23", q(20, 17));
    let c01 = p.get("c01", q(34, 25));
    p.require(!a23.is_zero() && !c01.is_zero(), "a23 and c01 must be nonzero")?;
    p.require(a23 != c01 && a23 != -&c01, "a23 must differ from +-c01")?;
    let t = n(-1);
    let s = SysParams::new(t, [n(0), n(0), a23.clone(), n(0), n(0), c01.clone()]);
    let pencil = sys_build(&s)?;
    let mut b = Builder::new();
    b.matrix("pi", diag([-1, -1, 1, 1]));
    b.matrix("sigma", imat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]));
    b.matrix("tau", imat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]));
    b.matrix("tau_fixed", imat([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]));
    for g in ["pi", "sigma", "tau"] {
        b.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.into())));
    }
    b.claim(Claim::derived("semi-tau_fixed", ClaimKind::SemiInvariant("tau_fixed".into())));
    let verts = names("v", 4);
    for (i, nm) in verts.iter().enumerate() {
        let mut c = [0; 4];
        c[i] = 1;
        b.point(nm, ipt(c));
    }
    if a23 == q(20, 17) && c01 == q(34, 25) {
        // Base points: x3 = 1, x2 = z, x0^2 = (a23 - s k) z, x1 = 2(z^2 - 1)/(c01 x0).
        let k = q(5, 2);
        let mut tower = Tower::base();
        let mut pts = Vec::new();
        for (sg, zs) in [(1, [n(2), q(1, 2)]), (-1, [n(-2), q(-1, 2)])] {
            for z in zs {
                let r = &(&a23 - &(&n(sg) * &k)) * &z;
                let x0 = sqrt_or_adjoin(&mut tower, &r, "r")?;
                for x0 in [x0.clone(), -&x0] {
                    let x1 = (&n(2) * &(&(&z * &z) - &n(1))).checked_div(&(&c01 * &x0))?;
                    pts.push(pt(vec![x0, x1, z.clone(), n(1)])?);
                }
            }
        }
        let base = names("b", 8);
        for (nm, x) in base.iter().zip(pts) {
            b.point(nm, x);
        }
        b.claim(Claim::derived("base-points", ClaimKind::BasePoints { pencil: "P".into(), points: base.clone() }));
        let all: Vec<String> = verts.iter().chain(&base).cloned().collect();
        b.nodes(&all, Source::Derived);
        b.claim(Claim::printed(
            "orbits-printed",
            ClaimKind::Orbits { gens: strs(&["pi", "sigma", "tau"]), points: all.clone(), lengths: vec![2, 2, 8] },
        ));
        b.claim(Claim::derived(
            "orbits",
            ClaimKind::Orbits { gens: strs(&["pi", "sigma", "tau_fixed"]), points: all, lengths: vec![2, 2, 8] },
        ));
    } else {
        b.nodes(&verts, Source::Derived);
        b.claim(Claim::printed(
            "orbits-printed",
            ClaimKind::Unverifiable("node coordinates are stored only for a23 = 20/17, c01 = 34/25".into()),
        ));
    }
    b.claim(Claim::derived(
        "group",
        ClaimKind::GroupOrder { gens: strs(&["pi", "sigma", "tau_fixed"]), order: 8 },
    ));
    b.finish("pr10", p.used, Payload::Pencil(pencil))
}

/// `base` composed with the sign change that makes it preserve `f`, if any.
fn with_sign_fix(base: &ProjTransform, f: &Form) -> Result<Option<ProjTransform>, FamilyError> {
    for mask in 0..8u32 {
        let d = diag([1, 1 - 2 * (mask & 1) as i64, 1 - 2 * ((mask >> 1) & 1) as i64, 1 - 2 * ((mask >> 2) & 1) as i64]);
        for g in [base.mul(&d)?, d.mul(base)?] {
            if semi_invariant_factor(&g, f).is_some() {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

fn build_pr11(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("pr11", params, &["a"])?;
    let a = p.symbolic("a");
    let mut tower = Tower::base();
    let r = sqrt_or_adjoin(&mut tower, &n(-3), "r3")?;
    let t = (&n(1) + &r).checked_div(&n(2))?;
    let s = SysParams::new(t.clone(), [a.clone(), a.clone(), a.clone(), a.clone(), &t * &a, -&a]);
    let pencil = sys_build(&s)?;
    let quartic = discriminant_quartic(&pencil)?;
    let mut b = Builder::new();
    let mut gens = Vec::new();
    for (nm, label) in [("R", "order3"), ("S", "order3-partner")] {
        let m = system_map(label, &t)?;
        match with_sign_fix(&m.coord, &quartic)? {
            Some(g) => {
                b.matrix(nm, g);
                gens.push(nm.to_string());
            }
            None => b.claim(Claim::derived(
                &format!("lift-{}", nm),
                ClaimKind::Unverifiable(format!("no sign change makes the {} map preserve Q", label)),
            )),
        }
    }
    for g in &gens {
        b.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
    }
    b.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "A4".into(), geiser: true }));
    b.finish("pr11", p.used, Payload::Pencil(pencil))
}

fn member_singular_at(p: &Pencil, root: &(TowerElem, TowerElem), v: &ProjPoint) -> Result<bool, FamilyError> {
    let m = p.member(&root.0, &root.1);
    if m.is_zero() {
        return Ok(false);
    }
    let s = symmetric_matrix(&m);
    Ok(s.mul_vec(v.coords()).iter().all(|c| c.is_zero()) && kernel_basis_sparse(&s)?.len() == 1)
}

fn pencil_from(q1: Form, q2: Form, q3: Form) -> Pencil {
    Pencil::new(q1, q2, q3)
}

/// Pick the swap-symmetric member of the incidence space.
fn derive_symmetric_pencil(data: &IncidenceData, sigma: &Matrix) -> Result<Pencil, FamilyError> {
    let basis = derive_incidence_pencil(data)?;
    let members = swap_symmetric_members(&basis, sigma)?;
    Ok(members.into_iter().next().map(|(_, p)| p).expect("two members"))
}

fn build_pr13(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("pr13", params, &["a", "b", "m", "n"])?;
    let one = n(1);
    let mut tower = Tower::base();
    // Rational parametrization of a, b and the radicals sqrt(a - a^2),
    // sqrt(b), sqrt(b - 1) by (m, n).
    let (m, nn) = if params.contains_key("a") || params.contains_key("b") {
        p.require(!params.contains_key("m") && !params.contains_key("n"), "give either (a, b) or (m, n)")?;
        let a = p.get("a", q(1, 3));
        let b = p.get("b", n(2));
        p.require(!a.is_zero() && a != one && a != q(1, 2), "a must avoid 0, 1 and 1/2")?;
        p.require(!b.is_zero() && b != one, "b must avoid 0 and 1")?;
        let m = sqrt_or_adjoin(&mut tower, &(&one - &a).checked_div(&a)?, "m")?;
        let sb = sqrt_or_adjoin(&mut tower, &b, "sb")?;
        let sb1 = sqrt_or_adjoin(&mut tower, &(&b - &one), "sb1")?;
        (m, &sb - &sb1)
    } else {
        (p.symbolic("m"), p.symbolic("n"))
    };
    let m2 = &m * &m;
    let n2 = &nn * &nn;
    let a = (&one + &m2).inv()?;
    let s = &m * &a;
    let sb = (&one + &n2).checked_div(&(&n(2) * &nn))?;
    let sb1 = (&one - &n2).checked_div(&(&n(2) * &nn))?;
    let b = &sb * &sb;
    p.require(!m.is_zero() && !a.is_zero() && a != one && a != q(1, 2), "a must avoid 0, 1 and 1/2")?;
    p.require(!b.is_zero() && b != one, "b must avoid 0 and 1")?;
    let two_s = &n(2) * &s;
    p.require(
        (&two_s + &one).is_zero() || b != (&two_s - &one).checked_div(&(&two_s + &one))?,
        "b must differ from (2 sqrt(a - a^2) - 1)/(2 sqrt(a - a^2) + 1)",
    )?;
    let i = sqrt_or_adjoin(&mut tower, &n(-1), "i")?;
    let roots = vec![
        (one.clone(), n(0)),
        (n(0), one.clone()),
        (a.clone(), one.clone()),
        (one.clone(), one.clone()),
        (a.clone(), &a - &s),
        (&a - &s, one.clone()),
        (a.clone(), &a + &s),
        (&a + &s, one.clone()),
    ];
    let vertices = vec![
        ipt([1, 0, 0, 0]),
        ipt([0, 0, 1, 0]),
        ipt([0, 1, 0, 0]),
        ipt([0, 0, 0, 1]),
        ipt([1, 1, 0, 0]),
        ipt([0, 0, 1, 1]),
        pt(vec![b.clone(), one.clone(), n(0), n(0)])?,
        pt(vec![n(0), n(0), b.clone(), one.clone()])?,
    ];
    let data = IncidenceData { roots, vertices };
    let sigma = Matrix::from_rows(vec![vec![n(0), a.clone()], vec![one.clone(), n(0)]]);
    let pencil = derive_symmetric_pencil(&data, &sigma)?;

    // The printed quadrics.
    let bm1 = &b - &one;
    let bp1 = &b + &one;
    let two_a1 = &(&n(2) * &a) - &one;
    let k = (&(&(&n(2) * &a) * &(&(&a - &one) + &(&b * &s))) - &(&bm1 * &s)).checked_div(&(&a - &s))?;
    let u = &(&b * &(&(&a * &bm1) + &(&s * &bp1)));
    let w = &(&(&n(2) * &(&a - &(&a * &a))) * &bm1) + &(&s * &bp1);
    let z = &b * &(&(&(&n(2) * &(&a * &a)) * &bm1) + &(&s * &bp1));
    let fbs = &n(4) * &(&b * &s);
    let q1 = mono([0, 2, 0, 0], &(&two_a1 * &bm1) * &b)
        .add(&mono([0, 0, 2, 0], k.clone()))
        .add(&mono([0, 0, 0, 2], u.clone()))
        .add(&mono([0, 0, 1, 1], -&fbs));
    let q2 = mono([2, 0, 0, 0], -&w)
        .add(&mono([0, 2, 0, 0], -&z))
        .add(&mono([0, 0, 2, 0], -&w))
        .add(&mono([0, 0, 0, 2], -&z))
        .add(&mono([1, 1, 0, 0], -&fbs))
        .add(&mono([0, 0, 1, 1], -&fbs));
    let q3 = mono([2, 0, 0, 0], &a * &k)
        .add(&mono([0, 2, 0, 0], &a * u))
        .add(&mono([0, 0, 0, 2], &(&a * &two_a1) * &(&bm1 * &b)))
        .add(&mono([1, 1, 0, 0], -&(&a * &fbs)));
    let printed = pencil_from(q1, q2, q3);

    let r = sb.checked_div(&sb1)?;
    let mm = mat(vec![
        vec![n(0), n(0), r.clone(), -&r],
        vec![n(0), n(0), (&sb * &sb1).inv()?, -&r],
        vec![i.checked_div(&sb1)?, -&(&i * &b).checked_div(&sb1)?, n(0), n(0)],
        vec![i.checked_div(&sb1)?, -&i.checked_div(&sb1)?, n(0), n(0)],
    ])?;
    let mut bld = Builder::new();
    bld.matrix("neg", diag([1, 1, -1, -1]));
    bld.matrix("swap", imat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]));
    bld.matrix("M", mm);
    bld.pencil("P_printed", printed.clone());
    bld.printed.push(PrintedFamily { label: "pencil".into(), printed: Payload::Pencil(printed) });
    let vnames = names("v", 8);
    for (nm, v) in vnames.iter().zip(&data.vertices) {
        bld.point(nm, v.clone());
    }
    bld.claim(Claim::derived("incidences", ClaimKind::Incidences { pencil: "P".into(), data: data.clone() }));
    bld.claim(Claim::printed("printed-pencil", ClaimKind::Incidences { pencil: "P_printed".into(), data }));
    let gens = strs(&["neg", "swap", "M"]);
    for g in &gens {
        bld.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
    }
    bld.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "D8xC2".into(), geiser: true }));
    bld.finish("pr13", p.used, Payload::Pencil(pencil))
}

fn build_pr14(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let p = Params::new("pr14", params, &[])?;
    let one = n(1);
    let mut tower = Tower::base();
    let r3 = sqrt_or_adjoin(&mut tower, &n(-3), "r3")?;
    let al = (&one + &r3).checked_div(&n(2))?;
    let be = al.inv()?;
    let al2 = &al * &al;
    let roots = vec![
        (one.clone(), n(0)),
        (al2.clone(), one.clone()),
        (n(0), one.clone()),
        (&al + &one, one.clone()),
        (one.clone(), one.clone()),
        ((&n(2) - &al).inv()?, one.clone()),
        (al.clone(), one.clone()),
        (be.clone(), one.clone()),
    ];
    let vertices = vec![
        ipt([1, 0, 0, 0]),
        ipt([0, 0, 1, 0]),
        ipt([0, 1, 0, 0]),
        ipt([0, 0, 0, 1]),
        ipt([1, 1, 0, 0]),
        ipt([0, 0, 1, 1]),
        pt(vec![be.clone(), one.clone(), n(0), n(0)])?,
        pt(vec![n(0), n(0), be.clone(), one.clone()])?,
    ];
    let data = IncidenceData { roots, vertices };
    let sigma = Matrix::from_rows(vec![vec![al2.clone(), &one - &al2], vec![one.clone(), -&al2]]);
    let pencil = derive_symmetric_pencil(&data, &sigma)?;

    let opa = &one + &al;
    let q1 = mono([0, 2, 0, 0], one.clone())
        .add(&mono([0, 0, 0, 2], one.clone()))
        .add(&mono([0, 0, 1, 1], &be - &one))
        .add(&mono([0, 0, 2, 0], -&be));
    let q2 = mono([2, 0, 0, 0], al2.clone())
        .add(&mono([0, 0, 1, 1], opa.clone()))
        .add(&mono([0, 0, 2, 0], al.clone()));
    let q3 = mono([2, 0, 0, 0], &n(-2) * &r3)
        .add(&mono([0, 2, 0, 0], -&opa))
        .add(&mono([1, 1, 0, 0], &n(2) * &al))
        .add(&mono([0, 0, 2, 0], one.clone()))
        .add(&mono([0, 0, 0, 2], -&opa))
        .add(&mono([0, 0, 1, 1], &n(2) * &al2));
    let printed = pencil_from(q1, q2, q3);

    let m = mat(vec![
        vec![one.clone(), -&be, n(0), n(0)],
        vec![n(0), -&be, n(0), n(0)],
        vec![n(0), n(0), be.clone(), al.clone()],
        vec![n(0), n(0), one.clone(), n(0)],
    ])?;
    let mut bld = Builder::new();
    bld.matrix("neg", diag([1, 1, -1, -1]));
    bld.matrix("swap", imat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]));
    bld.matrix("M", m);
    bld.pencil("P_printed", printed.clone());
    bld.printed.push(PrintedFamily { label: "pencil".into(), printed: Payload::Pencil(printed) });
    let vnames = names("v", 8);
    for (nm, v) in vnames.iter().zip(&data.vertices) {
        bld.point(nm, v.clone());
    }
    bld.claim(Claim::derived("incidences", ClaimKind::Incidences { pencil: "P".into(), data: data.clone() }));
    bld.claim(Claim::printed("printed-pencil", ClaimKind::Incidences { pencil: "P_printed".into(), data }));
    let gens = strs(&["neg", "swap", "M"]);
    for g in &gens {
        bld.claim(Claim::printed(&format!("semi-{}", g), ClaimKind::SemiInvariant(g.clone())));
    }
    bld.claim(Claim::printed("group", ClaimKind::Fingerprint { gens, group: "S4xC2".into(), geiser: true }));
    bld.finish("pr14", p.used, Payload::Pencil(pencil))
}

fn build_sec11(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("sec11", params, &["alpha", "beta"])?;
    let al = p.symbolic("alpha");
    let be = p.symbolic("beta");
    let space = twisted_cubic_solution()?;
    let first = mono([2, 0, 0, 2], n(1))
        .add(&mono([0, 2, 2, 0], n(3)))
        .add(&mono([1, 0, 3, 0], n(-2)))
        .add(&mono([0, 3, 0, 1], n(-2)));
    let c = mono([1, 0, 0, 1], n(1)).sub(&mono([0, 1, 1, 0], n(1)));
    let second = c.pow(2);
    let quartic = first.scale(&al).add(&second.scale(&be));
    let coords = |f: &Form| -> Vec<TowerElem> { space.basis.iter().map(|m| f.coeff(m.terms().next().unwrap().0)).collect() };
    let printed = vec![coords(&first), coords(&second)];
    let expected = vec![vec![2, 0, 0, 2], vec![1, 1, 1, 1], vec![1, 0, 3, 0], vec![0, 3, 0, 1], vec![0, 2, 2, 0]];
    let mut b = Builder::new();
    b.claim(Claim::printed(
        "monomials",
        ClaimKind::WeightMonomials { n: 11, weights: [0, 1, 2, 3], target: 6, expected },
    ));
    b.claim(Claim::printed("family", ClaimKind::SameSpan { printed, derived: space.kernel.clone() }));
    b.claim(Claim::printed("twisted-cubic", ClaimKind::TwistedCubic("Q".into())));
    b.finish("sec11", p.used, Payload::Quartic(quartic))
}

fn build_sys_zero(params: &BTreeMap<String, TowerElem>) -> Result<FamilySpec, FamilyError> {
    let mut p = Params::new("sysZero", params, &["t"])?;
    let t = p.get("t", n(2));
    let pencil = sys_build(&SysParams::zero(t.clone()))?;
    let mut tower = Tower::base();
    let alpha = sqrt_or_adjoin(&mut tower, &-&t, "alpha")?;
    let beta = sqrt_or_adjoin(&mut tower, &(&t - &n(1)), "beta")?;
    let ab = &alpha * &beta;
    let mut b = Builder::new();
    let base = names("b", 8);
    let mut k = 0;
    for s0 in [1, -1] {
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                b.point(&base[k], pt(vec![&ab * &n(s0), &beta * &n(s1), &alpha * &n(s2), n(1)])?);
                k += 1;
            }
        }
    }
    let verts = names("v", 4);
    for (i, nm) in verts.iter().enumerate() {
        let mut c = [0; 4];
        c[i] = 1;
        b.point(nm, ipt(c));
    }
    let pv = crate::multipoly::pqvars();
    let lin = |a: TowerElem, c: TowerElem| Form::linear(pv.clone(), &[a, c]);
    let det = lin(n(1), n(0))
        .mul(&lin(n(0), n(1)))
        .mul(&lin(n(1), n(-1)))
        .mul(&lin(n(1), -&t))
        .pow(2);
    b.claim(Claim::derived("determinant", ClaimKind::DeterminantForm { pencil: "P".into(), expected: det }));
    b.claim(Claim::derived(
        "double-roots",
        ClaimKind::DoubleRoots { pencil: "P".into(), count: 4, vertices: verts.clone() },
    ));
    b.claim(Claim::derived("base-points", ClaimKind::BasePoints { pencil: "P".into(), points: base.clone() }));
    b.nodes(&base, Source::Derived);
    b.nodes(&verts, Source::Derived);
    b.finish("sysZero", p.used, Payload::Pencil(pencil))
}

impl FamilySpec {
    pub fn object(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    fn poly(&self, name: &str) -> Result<&Form, String> {
        match self.objects.get(name) {
            Some(Object::Poly(f)) => Ok(f),
            _ => Err(format!("no polynomial named '{}'", name)),
        }
    }

    fn point(&self, name: &str) -> Result<&ProjPoint, String> {
        match self.objects.get(name) {
            Some(Object::Point(p)) => Ok(p),
            _ => Err(format!("no point named '{}'", name)),
        }
    }

    fn matrix(&self, name: &str) -> Result<&ProjTransform, String> {
        match self.objects.get(name) {
            Some(Object::Matrix(m)) => Ok(m),
            _ => Err(format!("no matrix named '{}'", name)),
        }
    }

    fn pencil(&self, name: &str) -> Result<&Pencil, String> {
        match self.objects.get(name) {
            Some(Object::Pencil(p)) => Ok(p),
            _ => Err(format!("no pencil named '{}'", name)),
        }
    }

    /// Re-check one claim. Computation errors give FAIL; a false printed
    /// claim gives MISMATCH; a false derived property gives FAIL.
    pub fn evaluate(&self, claim: &Claim, closure_cap: usize) -> ClaimOutcome {
        let miss = match claim.source {
            Source::Printed => Verdict::Mismatch,
            Source::Derived => Verdict::Fail,
        };
        match self.check(&claim.kind, closure_cap) {
            Ok(None) => ClaimOutcome { verdict: Verdict::Skip, detail: skip_reason(&claim.kind) },
            Ok(Some((true, d))) => ClaimOutcome { verdict: Verdict::Pass, detail: d },
            Ok(Some((false, d))) => ClaimOutcome { verdict: miss, detail: d },
            Err(e) => ClaimOutcome { verdict: Verdict::Fail, detail: e },
        }
    }

    /// `Q(g x)`. For a pencil this is built from the moved quadrics, which is
    /// much cheaper than substituting into the quartic.
    pub fn moved_quartic(&self, g: &ProjTransform) -> Result<Form, String> {
        match &self.payload {
            Payload::Quartic(f) => Ok(f.compose_matrix(g.matrix())),
            Payload::Pencil(p) => {
                let [a, b, c] = p.q.clone().map(|f| f.compose_matrix(g.matrix()));
                Ok(b.mul(&b).sub(&a.mul(&c).scale(&n(4))))
            }
        }
    }

    fn gens(&self, names: &[String]) -> Result<Vec<ProjTransform>, String> {
        names.iter().map(|g| self.matrix(g).cloned()).collect()
    }

    fn check(&self, kind: &ClaimKind, cap: usize) -> Result<Option<(bool, String)>, String> {
        let err = |e: &dyn fmt::Display| e.to_string();
        let q = &self.quartic;
        Ok(Some(match kind {
            ClaimKind::Node(p) => {
                let v = is_node(q, self.point(p)?).map_err(|e| err(&e))?;
                (v == NodeVerdict::NodeCertified, format!("{} at {}", v, self.point(p)?))
            }
            ClaimKind::Trope(h) => match trope_check(q, self.poly(h)?).map_err(|e| err(&e))? {
                Some(c) => (true, format!("restriction is ({})^2 up to scalar", c)),
                None => (false, "restriction is not a double conic".into()),
            },
            ClaimKind::SemiInvariant(m) => match self.moved_quartic(self.matrix(m)?)?.proportional_to(q) {
                Some(l) => (true, format!("Q(g x) = ({}) Q(x)", l)),
                None => (false, format!("{} does not preserve Q", m)),
            },
            ClaimKind::GroupOrder { gens, order } => {
                let g = closure(&self.gens(gens)?, cap).map_err(|e| err(&e))?;
                (g.order() == *order, format!("closure order {} (expected {})", g.order(), order))
            }
            ClaimKind::Fingerprint { gens, group, geiser } => {
                let expected = named_fingerprint(group).ok_or_else(|| format!("no stored fingerprint for {}", group))?;
                let g = closure(&self.gens(gens)?, cap).map_err(|e| err(&e))?;
                let fp = fingerprint(&g).map_err(|e| err(&e))?;
                let ok = fp == expected;
                let tail = if *geiser { format!("; with the deck involution: {} x C2, order {}", group, 2 * fp.order) } else { String::new() };
                (ok, format!("closure {} vs {} {}{}", fp, group, expected, tail))
            }
            ClaimKind::Orbits { gens, points, lengths } => {
                let g = closure(&self.gens(gens)?, cap).map_err(|e| err(&e))?;
                let pts: Vec<ProjPoint> = points.iter().map(|p| self.point(p).cloned()).collect::<Result<_, _>>()?;
                match orbits_on_points(&g, &pts) {
                    Ok(o) => {
                        let mut want = lengths.clone();
                        want.sort_unstable();
                        let got = o.lengths();
                        (got == want, format!("order {}, orbit lengths {:?} (expected {:?})", g.order(), got, want))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }
            ClaimKind::Incidences { pencil, data } => {
                let p = self.pencil(pencil)?;
                let mut bad = Vec::new();
                for (k, (r, v)) in data.roots.iter().zip(&data.vertices).enumerate() {
                    if !member_singular_at(p, r, v).map_err(|e| err(&e))? {
                        bad.push(k + 1);
                    }
                }
                let held = data.roots.len() - bad.len();
                let mut d = format!("{} of {} incidences hold", held, data.roots.len());
                if !bad.is_empty() {
                    d += &format!("; failing pairs {:?}", bad);
                }
                (bad.is_empty(), d)
            }
            ClaimKind::Proportional { printed, derived } => {
                let a = self.poly(printed)?;
                let b = self.poly(derived)?;
                match a.proportional_to(b) {
                    Some(k) => (true, format!("printed = ({}) * derived", k)),
                    None => (false, format!("printed {} vs derived {}", a, b)),
                }
            }
            ClaimKind::SameSpan { printed, derived } => {
                let rank = |rows: &[Vec<TowerElem>]| Matrix::from_rows(rows.to_vec()).rank().map_err(|e| err(&e));
                let rp = rank(printed)?;
                let rd = rank(derived)?;
                let both: Vec<Vec<TowerElem>> = printed.iter().chain(derived).cloned().collect();
                let rb = rank(&both)?;
                (rp == rd && rb == rd, format!("ranks printed {}, derived {}, joint {}", rp, rd, rb))
            }
            ClaimKind::DeterminantForm { pencil, expected } => {
                let d = det_binary_form(self.pencil(pencil)?).map_err(|e| err(&e))?;
                match d.proportional_to(expected) {
                    Some(k) => (true, format!("D = ({}) * ({})", k, expected)),
                    None => (false, format!("D = {}", d)),
                }
            }
            ClaimKind::DoubleRoots { pencil, count, vertices } => {
                let (_, members) = singular_members(self.pencil(pencil)?, &[]).map_err(|e| err(&e))?;
                let want: Vec<ProjPoint> = vertices.iter().map(|v| self.point(v).cloned()).collect::<Result<_, _>>()?;
                let doubles: Vec<_> = members.iter().filter(|m| m.multiplicity == 2).collect();
                let found: Vec<&ProjPoint> = doubles.iter().filter_map(|m| m.vertex.as_ref()).collect();
                let all_found = want.iter().all(|w| found.contains(&w));
                let ok = doubles.len() == *count && found.len() == *count && all_found;
                let vs: Vec<String> = found.iter().map(|p| p.to_string()).collect();
                (ok, format!("{} double roots, vertices [{}]", doubles.len(), vs.join(", ")))
            }
            ClaimKind::BasePoints { pencil, points } => {
                let pts: Vec<ProjPoint> = points.iter().map(|p| self.point(p).cloned()).collect::<Result<_, _>>()?;
                let v = verify_base_points(self.pencil(pencil)?, &pts).map_err(|e| err(&e))?;
                let good = v.iter().filter(|x| x.transversal()).count();
                (good == pts.len(), format!("{} of {} transversal", good, pts.len()))
            }
            ClaimKind::WeightMonomials { n, weights, target, expected } => {
                let mut got = weight_monomials(*n, *weights, *target);
                let mut want = expected.clone();
                got.sort();
                want.sort();
                (got == want, format!("{} monomials {:?}", got.len(), got))
            }
            ClaimKind::TwistedCubic(f) => {
                let ok = vanish_on_twisted_cubic(self.poly(f)?);
                (ok, if ok { "singular along the twisted cubic".into() } else { "not singular along the twisted cubic".into() })
            }
            ClaimKind::Unverifiable(_) => return Ok(None),
        }))
    }
}

fn skip_reason(kind: &ClaimKind) -> String {
    match kind {
        ClaimKind::Unverifiable(s) => s.clone(),
        _ => "not evaluated".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> BTreeMap<String, TowerElem> {
        BTreeMap::new()
    }

    fn with(kv: &[(&str, TowerElem)]) -> BTreeMap<String, TowerElem> {
        kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn outcome(f: &FamilySpec, id: &str) -> ClaimOutcome {
        f.evaluate(f.claim(id).unwrap_or_else(|| panic!("no claim {}", id)), 2000)
    }

    #[test]
    fn unknown_family() {
        assert_eq!(build_family("nosuch", &none()).unwrap_err(), FamilyError::UnknownFamily("nosuch".into()));
    }

    #[test]
    fn unknown_parameter() {
        assert!(matches!(build_family("pr2", &with(&[("t", n(1))])), Err(FamilyError::ConstraintViolated(_))));
    }

    #[test]
    fn eq4_at_zero() {
        let f = build_family("eq4", &with(&[("A", n(0))])).unwrap();
        assert_eq!(f.quartic, power_sum_quartic(&[n(1), n(-2), n(1), n(0)]));
        for c in &f.claims {
            assert_eq!(f.evaluate(c, 2000).verdict, Verdict::Pass, "{}", c.id);
        }
    }

    #[test]
    fn eq4_rejects_a_one() {
        assert!(matches!(build_family("eq4", &with(&[("A", n(1))])), Err(FamilyError::ConstraintViolated(_))));
    }

    #[test]
    fn eq5_mismatch() {
        let f = build_family("eq5", &none()).unwrap();
        assert_eq!(outcome(&f, "coefficients").verdict, Verdict::Mismatch);
        assert_eq!(outcome(&f, "trope").verdict, Verdict::Pass);
    }

    #[test]
    fn pr5_relations_match() {
        let f = build_family("pr5", &none()).unwrap();
        assert_eq!(outcome(&f, "relations").verdict, Verdict::Pass);
        assert_eq!(outcome(&f, "trope").verdict, Verdict::Pass);
    }

    #[test]
    fn pr6_group() {
        let f = build_family("pr6", &none()).unwrap();
        let o = outcome(&f, "group");
        assert_eq!(o.verdict, Verdict::Pass, "{}", o.detail);
    }

    #[test]
    fn sys_zero_claims() {
        let f = build_family("sysZero", &none()).unwrap();
        for c in &f.claims {
            let o = f.evaluate(c, 10);
            assert_eq!(o.verdict, Verdict::Pass, "{}: {}", c.id, o.detail);
        }
    }

    #[test]
    fn sec11_claims() {
        let f = build_family("sec11", &none()).unwrap();
        for c in &f.claims {
            assert_eq!(f.evaluate(c, 10).verdict, Verdict::Pass, "{}", c.id);
        }
    }

    #[test]
    fn pr8_rejects_two() {
        assert!(matches!(build_family("pr8", &with(&[("t", n(2))])), Err(FamilyError::ConstraintViolated(_))));
    }

    #[test]
    fn pr10_printed_tau_mismatch() {
        let f = build_family("pr10", &none()).unwrap();
        assert_eq!(outcome(&f, "semi-tau").verdict, Verdict::Mismatch);
        assert_eq!(outcome(&f, "semi-tau_fixed").verdict, Verdict::Pass);
        let o = outcome(&f, "orbits");
        assert_eq!(o.verdict, Verdict::Pass, "{}", o.detail);
    }

    #[test]
    fn pr8_eisenstein() {
        let mut tower = Tower::base();
        let r = sqrt_or_adjoin(&mut tower, &n(-3), "r3").unwrap();
        let t = (&n(1) + &r).checked_div(&n(2)).unwrap();
        let f = build_family("pr8", &with(&[("t", t)])).unwrap();
        for id in ["semi-E", "semi-L3", "group"] {
            let o = outcome(&f, id);
            assert_eq!(o.verdict, Verdict::Pass, "{}: {}", id, o.detail);
        }
    }

    #[test]
    fn pr14_claims() {
        let f = build_family("pr14", &none()).unwrap();
        assert_eq!(outcome(&f, "printed-pencil").verdict, Verdict::Mismatch);
        for id in ["incidences", "semi-neg", "semi-swap", "semi-M", "group"] {
            let o = outcome(&f, id);
            assert_eq!(o.verdict, Verdict::Pass, "{}: {}", id, o.detail);
        }
    }

    #[test]
    fn pr13_at_a_third_and_two() {
        let f = build_family("pr13", &with(&[("a", q(1, 3)), ("b", n(2))])).unwrap();
        assert_eq!(outcome(&f, "printed-pencil").verdict, Verdict::Mismatch);
        for id in ["incidences", "semi-neg", "semi-swap", "semi-M", "group"] {
            let o = outcome(&f, id);
            assert_eq!(o.verdict, Verdict::Pass, "{}: {}", id, o.detail);
        }
    }

    #[test]
    fn pr13_constraints() {
        for (a, b) in [(q(1, 2), n(2)), (q(1, 3), n(1)), (n(0), n(2))] {
            let r = build_family("pr13", &with(&[("a", a), ("b", b)]));
            assert!(matches!(r, Err(FamilyError::ConstraintViolated(_))));
        }
    }

    #[test]
    fn pr11_group() {
        let f = build_family("pr11", &with(&[("a", n(1))])).unwrap();
        let o = outcome(&f, "group");
        assert_eq!(o.verdict, Verdict::Pass, "{}", o.detail);
    }

    #[test]
    fn fingerprints_named() {
        for g in NAMED_GROUPS {
            let fp = named_fingerprint(g).unwrap();
            assert_eq!(fp.histogram.values().sum::<usize>(), fp.order, "{}", g);
        }
        assert!(named_fingerprint("C7").is_none());
    }
}
