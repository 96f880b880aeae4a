//! Fixture files, the verification runner and its reports.
//!
//! A fixture has up to three sections:
//!
//! ```text
//! [field]
//! param t              # symbolic parameter
//! a = 1/3              # parameter with a value
//! tower i = sqrt(-1)   # adjoined square root
//!
//! [objects]
//! family = pr13(a = a, b = 2)
//! poly F = x0^4 + x1^4 - i*x2^2*x3^2
//! plane H = x0 + x1
//! point v = (1:0:i:0)
//! matrix M = [0,1,0,0; 1,0,0,0; 0,0,1,0; 0,0,0,1]
//! pencil R = {x0^2, x1^2 - x2^2, x3^2}
//!
//! [checks]
//! check node at v on F
//! check group order = 16 using [M, neg]
//! check matches paper printed-pencil
//! ```
//!
//! Names are validated when the fixture is parsed. The working quartic is
//! `Q`: the family quartic, a `poly Q`, or the discriminant of a `pencil P`.

mod eval;
mod fixture;
mod parse;
mod report;
mod run;

use std::collections::BTreeMap;

pub use eval::Instance;
pub use fixture::{CheckDecl, CheckKind, FieldItem, FixtureSource, FpExpect, ObjectBody, ObjectDecl, VARIABLES};
pub use parse::{Expr, NameRef};
pub use report::{emit_report, parse_machine_report, CheckRecord, Format, Report, Summary, EXIT_ERROR, EXIT_FAILED, EXIT_OK};
pub use run::{run_verification, Options};

use crate::families::{FamilySpec, Object};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VcliError {
    #[error("line {line}, column {col}: expected {expected}, found {found}")]
    Parse { line: usize, col: usize, expected: String, found: String },
    #[error("line {line}, column {col}: unknown identifier '{name}'")]
    UnknownIdentifier { line: usize, col: usize, name: String },
    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("option: {0}")]
    Option(String),
}

/// A parsed fixture together with its evaluation at the declared values.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub source: FixtureSource,
    pub instance: Instance,
}

impl Fixture {
    /// The catalog family the fixture embeds, if any.
    pub fn family(&self) -> Option<&FamilySpec> {
        self.instance.has_family.then_some(&self.instance.spec)
    }

    pub fn check_count(&self) -> usize {
        self.source.checks.len()
    }

    /// Every override must name a declared parameter.
    pub fn check_overrides(&self, opts: &Options) -> Result<(), VcliError> {
        for k in opts.param_overrides.keys() {
            let declared = self.source.field.iter().any(|i| matches!(i, FieldItem::Param { name, .. } if &name.name == k));
            if !declared {
                return Err(VcliError::Option(format!("--param {}: no such parameter in the fixture", k)));
            }
        }
        eval::instantiate(&self.source, &opts.param_overrides).map(|_| ())
    }
}

pub fn parse_fixture(text: &str) -> Result<Fixture, VcliError> {
    let source = fixture::parse_source(text)?;
    let instance = eval::instantiate(&source, &BTreeMap::new())?;
    validate_references(&source, &instance.spec)?;
    Ok(Fixture { source, instance })
}

/// Parse `name=expr` from the command line.
pub fn parse_override(s: &str) -> Result<(String, Expr), VcliError> {
    let (k, v) = s.split_once('=').ok_or_else(|| VcliError::Option(format!("--param {}: expected name=value", s)))?;
    let k = k.trim();
    if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(VcliError::Option(format!("--param {}: bad parameter name", s)));
    }
    let toks = parse::lex(v, 1).map_err(|e| VcliError::Option(format!("--param {}: {}", s, e)))?;
    let mut c = parse::Cursor::new(&toks, 1, v);
    let e = c.expr().and_then(|e| c.end().map(|_| e)).map_err(|e| VcliError::Option(format!("--param {}: {}", s, e)))?;
    Ok((k.to_string(), e))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Want {
    Poly,
    Point,
    Matrix,
    Pencil,
}

fn validate_references(src: &FixtureSource, spec: &FamilySpec) -> Result<(), VcliError> {
    let check = |n: &NameRef, want: Want| -> Result<(), VcliError> {
        let found = match spec.objects.get(&n.name) {
            None => return Err(VcliError::UnknownIdentifier { line: n.line, col: n.col, name: n.name.clone() }),
            Some(Object::Poly(_)) => Want::Poly,
            Some(Object::Point(_)) => Want::Point,
            Some(Object::Matrix(_)) => Want::Matrix,
            Some(Object::Pencil(_)) => Want::Pencil,
        };
        if found == want {
            Ok(())
        } else {
            let what = match want {
                Want::Poly => "a polynomial",
                Want::Point => "a point",
                Want::Matrix => "a matrix",
                Want::Pencil => "a pencil",
            };
            Err(VcliError::Parse { line: n.line, col: n.col, expected: what.into(), found: format!("'{}'", n.name) })
        }
    };
    let all = |v: &[NameRef], w: Want| v.iter().try_for_each(|n| check(n, w));
    for c in &src.checks {
        match &c.kind {
            CheckKind::Singular { point, on } | CheckKind::Node { point, on } => {
                check(point, Want::Point)?;
                check(on, Want::Poly)?;
            }
            CheckKind::Trope { plane, on } => {
                check(plane, Want::Poly)?;
                check(on, Want::Poly)?;
            }
            CheckKind::SemiInvariant { matrix, on } => {
                check(matrix, Want::Matrix)?;
                check(on, Want::Poly)?;
            }
            CheckKind::GroupOrder { gens, .. } | CheckKind::Fingerprint { gens, .. } => {
                if let Some(g) = gens {
                    all(g, Want::Matrix)?;
                }
            }
            CheckKind::Orbits { points, gens, .. } => {
                all(points, Want::Point)?;
                if let Some(g) = gens {
                    all(g, Want::Matrix)?;
                }
            }
            CheckKind::BasePoints { points, pencil } => {
                all(points, Want::Point)?;
                check(pencil, Want::Pencil)?;
            }
            CheckKind::BasePointCount { pencil, .. } | CheckKind::DoubleRoots { pencil, .. } => check(pencil, Want::Pencil)?,
            CheckKind::NodesNumeric { on, .. } => check(on, Want::Poly)?,
            CheckKind::MatchesPaper { key } => {
                if spec.claim(&key.name).is_none() {
                    return Err(VcliError::UnknownIdentifier { line: key.line, col: key.col, name: key.name.clone() });
                }
            }
        }
        if let CheckKind::Fingerprint { expect: FpExpect::Named(g), .. } = &c.kind {
            if crate::families::named_fingerprint(g).is_none() {
                return Err(VcliError::UnknownIdentifier { line: c.line, col: 1, name: g.clone() });
            }
        }
    }
    Ok(())
}
