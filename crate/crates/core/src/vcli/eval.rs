//! Evaluation of fixture declarations into exact objects.

use std::collections::{BTreeMap, HashMap};

use crate::exactfield::{sqrt_or_adjoin, Tower, TowerElem};
use crate::families::{build_family, FamilySpec, Object, Payload};
use crate::linalg::Matrix;
use crate::matgroup::ProjTransform;
use crate::multipoly::{xvars, Form};
use crate::projgeom::ProjPoint;
use crate::quadpencil::{discriminant_quartic, Pencil};

use super::fixture::{FieldItem, FixtureSource, ObjectBody};
use super::parse::{BinOp, Expr};
use super::VcliError;

/// Polynomial in x0..x3, p, q with exponents in that order.
type Poly = BTreeMap<[u32; 6], TowerElem>;

fn constant(c: TowerElem) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert([0; 6], c);
    }
    p
}

fn as_constant(p: &Poly) -> Option<TowerElem> {
    match p.len() {
        0 => Some(TowerElem::zero()),
        1 => p.get(&[0; 6]).cloned(),
        _ => None,
    }
}

fn add_into(acc: &mut Poly, e: [u32; 6], c: TowerElem) {
    let next = match acc.remove(&e) {
        Some(old) => &old + &c,
        None => c,
    };
    if !next.is_zero() {
        acc.insert(e, next);
    }
}

fn add(a: &Poly, b: &Poly, sign: bool) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        add_into(&mut out, *e, if sign { c.clone() } else { -c });
    }
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = [0; 6];
            for i in 0..6 {
                e[i] = ea[i] + eb[i];
            }
            add_into(&mut out, e, ca * cb);
        }
    }
    out
}

/// Names in scope while evaluating, plus the growing coefficient tower.
pub(crate) struct Env {
    pub tower: Tower,
    scalars: HashMap<String, TowerElem>,
    polys: HashMap<String, Poly>,
    inline: usize,
}

impl Env {
    fn new() -> Self {
        Env { tower: Tower::base(), scalars: HashMap::new(), polys: HashMap::new(), inline: 0 }
    }

    fn eval(&mut self, e: &Expr) -> Result<Poly, String> {
        Ok(match e {
            Expr::Int(n) => constant(TowerElem::from_rational(n.clone().into())),
            Expr::Name { name, .. } => {
                if let Some(i) = super::fixture::VARIABLES.iter().position(|v| v == name) {
                    let mut m = [0; 6];
                    m[i] = 1;
                    Poly::from([(m, TowerElem::one())])
                } else if let Some(c) = self.scalars.get(name) {
                    constant(c.clone())
                } else if let Some(p) = self.polys.get(name) {
                    p.clone()
                } else {
                    return Err(format!("unknown name '{}'", name));
                }
            }
            Expr::Neg(a) => add(&Poly::new(), &self.eval(a)?, false),
            Expr::Bin(op, a, b) => {
                let a = self.eval(a)?;
                let b = self.eval(b)?;
                match op {
                    BinOp::Add => add(&a, &b, true),
                    BinOp::Sub => add(&a, &b, false),
                    BinOp::Mul => mul(&a, &b),
                    BinOp::Div => {
                        let d = as_constant(&b).ok_or("division by a non-constant polynomial")?;
                        let inv = d.inv().map_err(|e| format!("division: {}", e))?;
                        mul(&a, &constant(inv))
                    }
                }
            }
            Expr::Pow(a, n) => {
                let a = self.eval(a)?;
                let mut out = constant(TowerElem::one());
                for _ in 0..*n {
                    out = mul(&out, &a);
                }
                out
            }
            Expr::Sqrt(a) => {
                let x = self.scalar(a)?;
                self.inline += 1;
                let name = format!("s{}", self.inline);
                constant(self.adjoin(&x, &name)?)
            }
        })
    }

    fn adjoin(&mut self, x: &TowerElem, name: &str) -> Result<TowerElem, String> {
        sqrt_or_adjoin(&mut self.tower, x, name).map_err(|e| format!("sqrt: {}", e))
    }

    fn scalar(&mut self, e: &Expr) -> Result<TowerElem, String> {
        as_constant(&self.eval(e)?).ok_or_else(|| "expected a constant, found a polynomial".into())
    }

    fn form(&mut self, e: &Expr, degree: Option<u32>) -> Result<Form, String> {
        let p = self.eval(e)?;
        if p.keys().any(|m| m[4] != 0 || m[5] != 0) {
            return Err("p and q are not allowed in a form in x0..x3".into());
        }
        let degs: Vec<u32> = p.keys().map(|m| m.iter().sum()).collect();
        let d = match (degs.first(), degree) {
            (None, Some(d)) => d,
            (None, None) => return Err("the polynomial is zero".into()),
            (Some(&d), _) => d,
        };
        if degs.iter().any(|&x| x != d) {
            return Err("the polynomial is not homogeneous".into());
        }
        if let Some(want) = degree {
            if want != d {
                return Err(format!("expected degree {}, found degree {}", want, d));
            }
        }
        Ok(Form::from_terms(xvars(), d, p.into_iter().map(|(m, c)| (m[..4].to_vec(), c))))
    }
}

/// A fixture after evaluation: every object by name, the working quartic,
/// and the family claims when a catalog key is referenced.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: FamilySpec,
    pub has_family: bool,
}

fn config(line: usize, msg: impl Into<String>) -> VcliError {
    VcliError::Config { line, msg: msg.into() }
}

/// Evaluate a parsed fixture. `overrides` replace parameter values.
pub(crate) fn instantiate(src: &FixtureSource, overrides: &BTreeMap<String, Expr>) -> Result<Instance, VcliError> {
    let mut env = Env::new();
    for item in &src.field {
        match item {
            FieldItem::Param { name, value } => {
                let line = name.line;
                let v = match overrides.get(&name.name).or(value.as_ref()) {
                    Some(e) => env.scalar(e).map_err(|m| config(line, format!("parameter {}: {}", name.name, m)))?,
                    None => TowerElem::param(&name.name),
                };
                env.scalars.insert(name.name.clone(), v);
            }
            FieldItem::Tower { name, radicand } => {
                let line = name.line;
                let x = env.scalar(radicand).map_err(|m| config(line, format!("tower {}: {}", name.name, m)))?;
                let r = env.adjoin(&x, &name.name).map_err(|m| config(line, m))?;
                env.scalars.insert(name.name.clone(), r);
            }
        }
    }
    let family = match &src.family {
        Some(f) => {
            let mut args = BTreeMap::new();
            for (k, e) in &f.args {
                let v = env.scalar(e).map_err(|m| config(k.line, format!("argument {}: {}", k.name, m)))?;
                args.insert(k.name.clone(), v);
            }
            Some(build_family(&f.key.name, &args).map_err(|e| config(f.key.line, format!("family {}: {}", f.key.name, e)))?)
        }
        None => None,
    };
    let mut objects: BTreeMap<String, Object> = BTreeMap::new();
    for o in &src.objects {
        let line = o.name.line;
        let err = |m: String| config(line, format!("{}: {}", o.name.name, m));
        let obj = match &o.body {
            ObjectBody::Poly(e) => {
                let f = env.form(e, None).map_err(err)?;
                let v = env.eval(e).map_err(err)?;
                env.polys.insert(o.name.name.clone(), v);
                Object::Poly(f)
            }
            ObjectBody::Plane(e) => {
                let f = env.form(e, Some(1)).map_err(err)?;
                let v = env.eval(e).map_err(err)?;
                env.polys.insert(o.name.name.clone(), v);
                Object::Poly(f)
            }
            ObjectBody::Point(v) => {
                let c: Vec<TowerElem> = v.iter().map(|e| env.scalar(e)).collect::<Result<_, _>>().map_err(err)?;
                Object::Point(ProjPoint::new(c).map_err(|e| err(e.to_string()))?)
            }
            ObjectBody::Matrix(rows) => {
                let mut m = Vec::new();
                for r in rows {
                    m.push(r.iter().map(|e| env.scalar(e)).collect::<Result<Vec<_>, _>>().map_err(err)?);
                }
                let m = Matrix::from_rows(m);
                let det = m.det().map_err(|e| err(e.to_string()))?;
                if det.is_zero() {
                    return Err(err("matrix is singular".into()));
                }
                Object::Matrix(ProjTransform::new(m).map_err(|e| err(e.to_string()))?)
            }
            ObjectBody::Pencil(v) => {
                let q: Vec<Form> = v.iter().map(|e| env.form(e, Some(2))).collect::<Result<_, _>>().map_err(err)?;
                let [a, b, c]: [Form; 3] = q.try_into().expect("three quadrics");
                Object::Pencil(Pencil::new(a, b, c))
            }
        };
        if family.as_ref().is_some_and(|f| f.objects.contains_key(&o.name.name)) {
            return Err(config(line, format!("'{}' is already exported by the family", o.name.name)));
        }
        objects.insert(o.name.name.clone(), obj);
    }
    let spec = match family {
        Some(mut f) => {
            f.objects.extend(objects);
            f
        }
        None => {
            let (payload, quartic) = match (objects.get("Q").cloned(), objects.get("P").cloned()) {
                (Some(Object::Poly(q)), _) => (Payload::Quartic(q.clone()), q),
                (_, Some(Object::Pencil(p))) => {
                    let d = discriminant_quartic(&p).map_err(|e| config(0, format!("discriminant of P: {}", e)))?;
                    objects.entry("Q".into()).or_insert_with(|| Object::Poly(d.clone()));
                    (Payload::Pencil(p), d)
                }
                _ => {
                    let z = Form::zero(xvars(), 4);
                    (Payload::Quartic(z.clone()), z)
                }
            };
            FamilySpec {
                name: "fixture".into(),
                parameters: BTreeMap::new(),
                payload,
                quartic,
                objects,
                printed: Vec::new(),
                claims: Vec::new(),
            }
        }
    };
    Ok(Instance { spec, has_family: src.family.is_some() })
}
