//! Fixture grammar: sections, declarations and checks.

use std::collections::{BTreeMap, BTreeSet};

use super::parse::{lex, Cursor, Expr, NameRef, Tok};
use super::VcliError;

/// Reserved variable names usable in polynomial expressions.
pub const VARIABLES: [&str; 6] = ["x0", "x1", "x2", "x3", "p", "q"];

#[derive(Clone, Debug, PartialEq)]
pub enum FieldItem {
    /// A parameter, symbolic unless it has a value.
    Param { name: NameRef, value: Option<Expr> },
    /// A square root adjoined to the coefficient field.
    Tower { name: NameRef, radicand: Expr },
}

impl FieldItem {
    pub fn name(&self) -> &NameRef {
        match self {
            FieldItem::Param { name, .. } | FieldItem::Tower { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObjectBody {
    Poly(Expr),
    Plane(Expr),
    Point(Vec<Expr>),
    Matrix(Vec<Vec<Expr>>),
    Pencil(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectDecl {
    pub name: NameRef,
    pub body: ObjectBody,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyDecl {
    pub key: NameRef,
    pub args: Vec<(NameRef, Expr)>,
}

/// Expected group fingerprint: a stored named group or explicit fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FpExpect {
    Named(String),
    Fields {
        order: Option<usize>,
        hist: Option<BTreeMap<usize, usize>>,
        center: Option<usize>,
        derived: Option<usize>,
        abelian: Option<bool>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckKind {
    Singular { point: NameRef, on: NameRef },
    Node { point: NameRef, on: NameRef },
    Trope { plane: NameRef, on: NameRef },
    GroupOrder { order: usize, gens: Option<Vec<NameRef>> },
    Fingerprint { expect: FpExpect, gens: Option<Vec<NameRef>> },
    Orbits { lengths: Vec<usize>, points: Vec<NameRef>, gens: Option<Vec<NameRef>> },
    SemiInvariant { matrix: NameRef, on: NameRef },
    BasePoints { points: Vec<NameRef>, pencil: NameRef },
    BasePointCount { count: usize, pencil: NameRef },
    DoubleRoots { count: usize, pencil: NameRef },
    NodesNumeric { count: usize, on: NameRef },
    MatchesPaper { key: NameRef },
}

impl CheckKind {
    /// Kind label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            CheckKind::Singular { .. } => "singular",
            CheckKind::Node { .. } => "node",
            CheckKind::Trope { .. } => "trope",
            CheckKind::GroupOrder { .. } => "group_order",
            CheckKind::Fingerprint { .. } => "fingerprint",
            CheckKind::Orbits { .. } => "orbits",
            CheckKind::SemiInvariant { .. } => "semi_invariant",
            CheckKind::BasePoints { .. } | CheckKind::BasePointCount { .. } => "base_points",
            CheckKind::DoubleRoots { .. } => "double_roots",
            CheckKind::NodesNumeric { .. } => "nodes_numeric",
            CheckKind::MatchesPaper { .. } => "matches_paper",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckDecl {
    pub id: String,
    pub line: usize,
    pub kind: CheckKind,
}

/// Everything in a fixture file before evaluation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FixtureSource {
    pub field: Vec<FieldItem>,
    pub objects: Vec<ObjectDecl>,
    pub family: Option<FamilyDecl>,
    pub checks: Vec<CheckDecl>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Field,
    Objects,
    Checks,
}

pub fn parse_source(text: &str) -> Result<FixtureSource, VcliError> {
    let mut src = FixtureSource::default();
    let mut section: Option<Section> = None;
    let mut seen = BTreeSet::new();
    let mut anonymous = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = lex(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(&toks, line, raw);
        if c.eat_sym('[') {
            let name = c.ident("a section name")?;
            section = Some(match name.name.as_str() {
                "field" => Section::Field,
                "objects" => Section::Objects,
                "checks" => Section::Checks,
                _ => {
                    return Err(VcliError::Parse {
                        line,
                        col: name.col,
                        expected: "one of 'field', 'objects', 'checks'".into(),
                        found: format!("'{}'", name.name),
                    })
                }
            });
            c.expect_sym(']')?;
            c.end()?;
            continue;
        }
        match section {
            None => return Err(c.err("a section header such as [objects]")),
            Some(Section::Field) => {
                let item = field_line(&mut c, &mut anonymous)?;
                match item {
                    FieldLine::One(i) => {
                        fresh(&mut seen, i.name())?;
                        src.field.push(i);
                    }
                    FieldLine::Many(v) => {
                        for i in v {
                            fresh(&mut seen, i.name())?;
                            src.field.push(i);
                        }
                    }
                }
            }
            Some(Section::Objects) => {
                if c.eat_word("family") {
                    if let Some(f) = &src.family {
                        return Err(VcliError::Parse {
                            line,
                            col: 1,
                            expected: "at most one family declaration".into(),
                            found: format!("second family (first at line {})", f.key.line),
                        });
                    }
                    src.family = Some(family_line(&mut c)?);
                } else {
                    let o = object_line(&mut c)?;
                    fresh(&mut seen, &o.name)?;
                    src.objects.push(o);
                }
            }
            Some(Section::Checks) => {
                c.expect_word("check")?;
                let kind = check_line(&mut c, raw)?;
                let id = (src.checks.len() + 1).to_string();
                src.checks.push(CheckDecl { id, line, kind });
            }
        }
        c.end()?;
    }
    validate_scopes(&src)?;
    Ok(src)
}

fn fresh(seen: &mut BTreeSet<String>, n: &NameRef) -> Result<(), VcliError> {
    if VARIABLES.contains(&n.name.as_str()) || n.name == "sqrt" || n.name == "family" {
        return Err(VcliError::Parse {
            line: n.line,
            col: n.col,
            expected: "a name that is not reserved".into(),
            found: format!("'{}'", n.name),
        });
    }
    if !seen.insert(n.name.clone()) {
        return Err(VcliError::Parse {
            line: n.line,
            col: n.col,
            expected: "a name not declared before".into(),
            found: format!("'{}'", n.name),
        });
    }
    Ok(())
}

enum FieldLine {
    One(FieldItem),
    Many(Vec<FieldItem>),
}

fn field_line(c: &mut Cursor, anonymous: &mut usize) -> Result<FieldLine, VcliError> {
    if c.eat_word("tower") {
        let name = if matches!(c.peek(), Some(Tok::Sym('='))) {
            *anonymous += 1;
            NameRef { name: format!("r{}", anonymous), line: c.line, col: c.col() }
        } else {
            c.ident("a radical name or '='")?
        };
        c.expect_sym('=')?;
        let e = c.expr()?;
        let Expr::Sqrt(radicand) = e else {
            return Err(VcliError::Parse {
                line: c.line,
                col: name.col,
                expected: "'sqrt(...)' on the right of a tower declaration".into(),
                found: "another expression".into(),
            });
        };
        return Ok(FieldLine::One(FieldItem::Tower { name, radicand: *radicand }));
    }
    if c.eat_word("param") {
        let name = c.ident("a parameter name")?;
        let value = if c.eat_sym('=') { Some(c.expr()?) } else { None };
        return Ok(FieldLine::One(FieldItem::Param { name, value }));
    }
    let key = c.ident("'param', 'params', 'tower' or a parameter name")?;
    c.expect_sym('=')?;
    if key.name == "params" {
        let mut v = vec![FieldItem::Param { name: c.ident("a parameter name")?, value: None }];
        while c.eat_sym(',') {
            v.push(FieldItem::Param { name: c.ident("a parameter name")?, value: None });
        }
        return Ok(FieldLine::Many(v));
    }
    Ok(FieldLine::One(FieldItem::Param { name: key, value: Some(c.expr()?) }))
}

fn family_line(c: &mut Cursor) -> Result<FamilyDecl, VcliError> {
    c.expect_sym('=')?;
    let key = c.ident("a catalog key")?;
    let mut args = Vec::new();
    if c.eat_sym('(') {
        if !c.eat_sym(')') {
            loop {
                let k = c.ident("an argument name")?;
                c.expect_sym('=')?;
                args.push((k, c.expr()?));
                if c.eat_sym(')') {
                    break;
                }
                c.expect_sym(',')?;
            }
        }
    }
    Ok(FamilyDecl { key, args })
}

fn object_line(c: &mut Cursor) -> Result<ObjectDecl, VcliError> {
    let kw = c.ident("'poly', 'plane', 'point', 'matrix', 'pencil' or 'family'")?;
    let name = c.ident("an object name")?;
    c.expect_sym('=')?;
    let body = match kw.name.as_str() {
        "poly" => ObjectBody::Poly(c.expr()?),
        "plane" => ObjectBody::Plane(c.expr()?),
        "point" => {
            c.expect_sym('(')?;
            let mut v = vec![c.expr()?];
            while c.eat_sym(':') {
                v.push(c.expr()?);
            }
            if v.len() != 4 {
                return Err(c.err("four coordinates separated by ':'"));
            }
            c.expect_sym(')')?;
            ObjectBody::Point(v)
        }
        "matrix" => {
            c.expect_sym('[')?;
            let mut rows = Vec::new();
            loop {
                let mut row = vec![c.expr()?];
                while c.eat_sym(',') {
                    row.push(c.expr()?);
                }
                if row.len() != 4 {
                    return Err(c.err("four entries per row"));
                }
                rows.push(row);
                if c.eat_sym(']') {
                    break;
                }
                c.expect_sym(';')?;
            }
            if rows.len() != 4 {
                return Err(c.err("four rows"));
            }
            ObjectBody::Matrix(rows)
        }
        "pencil" => {
            c.expect_sym('{')?;
            let mut v = vec![c.expr()?];
            while c.eat_sym(',') {
                v.push(c.expr()?);
            }
            if v.len() != 3 {
                return Err(c.err("three quadrics"));
            }
            c.expect_sym('}')?;
            ObjectBody::Pencil(v)
        }
        _ => {
            return Err(VcliError::Parse {
                line: kw.line,
                col: kw.col,
                expected: "'poly', 'plane', 'point', 'matrix', 'pencil' or 'family'".into(),
                found: format!("'{}'", kw.name),
            })
        }
    };
    Ok(ObjectDecl { name, body })
}

fn default_ref(c: &Cursor, name: &str) -> NameRef {
    NameRef { name: name.into(), line: c.line, col: c.col() }
}

fn opt_named(c: &mut Cursor, word: &str, default: &str) -> Result<NameRef, VcliError> {
    if c.eat_word(word) {
        c.ident("a name")
    } else {
        Ok(default_ref(c, default))
    }
}

fn opt_using(c: &mut Cursor) -> Result<Option<Vec<NameRef>>, VcliError> {
    if c.eat_word("using") {
        Ok(Some(c.name_list()?))
    } else {
        Ok(None)
    }
}

const CHECK_KINDS: &str = "a check kind (singular, node, trope, group, fingerprint, orbits, semi_invariant, \
                           base_points, double_roots, nodes, matches)";

fn check_line(c: &mut Cursor, raw: &str) -> Result<CheckKind, VcliError> {
    let kw = c.ident(CHECK_KINDS)?;
    Ok(match kw.name.as_str() {
        "singular" => {
            c.expect_word("at")?;
            let point = c.ident("a point name")?;
            CheckKind::Singular { point, on: opt_named(c, "on", "Q")? }
        }
        "node" => {
            c.expect_word("at")?;
            let point = c.ident("a point name")?;
            CheckKind::Node { point, on: opt_named(c, "on", "Q")? }
        }
        "trope" => {
            let plane = c.ident("a plane name")?;
            CheckKind::Trope { plane, on: opt_named(c, "on", "Q")? }
        }
        "group" => {
            c.expect_word("order")?;
            c.expect_sym('=')?;
            let order = c.count()?;
            CheckKind::GroupOrder { order, gens: opt_using(c)? }
        }
        "fingerprint" => {
            c.expect_sym('=')?;
            let expect = match c.string() {
                Some(s) => FpExpect::Named(s),
                None => fingerprint_fields(c)?,
            };
            CheckKind::Fingerprint { expect, gens: opt_using(c)? }
        }
        "orbits" => {
            c.expect_sym('=')?;
            let lengths = c.count_list()?;
            c.expect_word("on")?;
            let points = c.name_list()?;
            CheckKind::Orbits { lengths, points, gens: opt_using(c)? }
        }
        "semi_invariant" => {
            let matrix = c.ident("a matrix name")?;
            CheckKind::SemiInvariant { matrix, on: opt_named(c, "on", "Q")? }
        }
        "base_points" => {
            c.expect_word("transversal")?;
            c.expect_sym('=')?;
            if matches!(c.peek(), Some(Tok::Int(_))) {
                let count = c.count()?;
                CheckKind::BasePointCount { count, pencil: opt_named(c, "of", "P")? }
            } else {
                let points = c.name_list()?;
                CheckKind::BasePoints { points, pencil: opt_named(c, "of", "P")? }
            }
        }
        "double_roots" => {
            c.expect_sym('=')?;
            let count = c.count()?;
            CheckKind::DoubleRoots { count, pencil: opt_named(c, "of", "P")? }
        }
        "nodes" => {
            c.expect_word("numeric")?;
            c.expect_sym('=')?;
            let count = c.count()?;
            CheckKind::NodesNumeric { count, on: opt_named(c, "on", "Q")? }
        }
        "matches" => {
            c.expect_word("paper")?;
            let col = c.col();
            let rest: String = raw.chars().skip(col - 1).collect();
            let key = rest.split('#').next().unwrap_or("").trim().to_string();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(c.err("a claim key"));
            }
            while !c.at_end() {
                c.skip();
            }
            CheckKind::MatchesPaper { key: NameRef { name: key, line: c.line, col } }
        }
        _ => {
            return Err(VcliError::Parse {
                line: kw.line,
                col: kw.col,
                expected: CHECK_KINDS.into(),
                found: format!("'{}'", kw.name),
            })
        }
    })
}

fn fingerprint_fields(c: &mut Cursor) -> Result<FpExpect, VcliError> {
    let (mut order, mut hist, mut center, mut derived, mut abelian) = (None, None, None, None, None);
    c.expect_sym('{')?;
    loop {
        let key = c.ident("one of order, hist, center, derived, abelian")?;
        c.expect_sym(':')?;
        match key.name.as_str() {
            "order" => order = Some(c.count()?),
            "center" => center = Some(c.count()?),
            "derived" => derived = Some(c.count()?),
            "abelian" => {
                abelian = Some(if c.eat_word("true") {
                    true
                } else if c.eat_word("false") {
                    false
                } else {
                    return Err(c.err("true or false"));
                })
            }
            "hist" => {
                let mut h = BTreeMap::new();
                c.expect_sym('{')?;
                loop {
                    let k = c.count()?;
                    c.expect_sym(':')?;
                    h.insert(k, c.count()?);
                    if c.eat_sym('}') {
                        break;
                    }
                    c.expect_sym(',')?;
                }
                hist = Some(h);
            }
            _ => {
                return Err(VcliError::Parse {
                    line: key.line,
                    col: key.col,
                    expected: "one of order, hist, center, derived, abelian".into(),
                    found: format!("'{}'", key.name),
                })
            }
        }
        if c.eat_sym('}') {
            break;
        }
        c.expect_sym(',')?;
    }
    Ok(FpExpect::Fields { order, hist, center, derived, abelian })
}

/// Expressions may use variables, earlier field names and, in objects,
/// earlier polynomial objects.
fn validate_scopes(src: &FixtureSource) -> Result<(), VcliError> {
    let mut field: BTreeSet<String> = BTreeSet::new();
    let check = |e: &Expr, scope: &BTreeSet<String>, vars: bool| -> Result<(), VcliError> {
        let mut names = Vec::new();
        e.names(&mut names);
        for (n, line, col) in names {
            let ok = scope.contains(&n) || (vars && VARIABLES.contains(&n.as_str()));
            if !ok {
                return Err(VcliError::UnknownIdentifier { line, col, name: n });
            }
        }
        Ok(())
    };
    for item in &src.field {
        match item {
            FieldItem::Param { value: Some(e), .. } => check(e, &field, false)?,
            FieldItem::Tower { radicand, .. } => check(radicand, &field, false)?,
            FieldItem::Param { value: None, .. } => {}
        }
        field.insert(item.name().name.clone());
    }
    if let Some(f) = &src.family {
        for (_, e) in &f.args {
            check(e, &field, false)?;
        }
    }
    let mut scope = field.clone();
    for o in &src.objects {
        let exprs: Vec<&Expr> = match &o.body {
            ObjectBody::Poly(e) | ObjectBody::Plane(e) => vec![e],
            ObjectBody::Point(v) | ObjectBody::Pencil(v) => v.iter().collect(),
            ObjectBody::Matrix(rows) => rows.iter().flatten().collect(),
        };
        let vars = matches!(o.body, ObjectBody::Poly(_) | ObjectBody::Plane(_) | ObjectBody::Pencil(_));
        for e in exprs {
            check(e, &scope, vars)?;
        }
        if matches!(o.body, ObjectBody::Poly(_) | ObjectBody::Plane(_)) {
            scope.insert(o.name.name.clone());
        }
    }
    Ok(())
}
