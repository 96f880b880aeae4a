use std::fmt;

use crate::exactfield::TowerElem;
use crate::linalg::Matrix;
use crate::matgroup::ProjTransform;
use crate::multipoly::{xvars, Form};
use crate::quadpencil::Pencil;

use super::FamilyError;

/// Parameters of the normal form `Sys(t; a12, a13, a23, b02, b03, c01)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SysParams {
    pub t: TowerElem,
    pub a12: TowerElem,
    pub a13: TowerElem,
    pub a23: TowerElem,
    pub b02: TowerElem,
    pub b03: TowerElem,
    pub c01: TowerElem,
}

pub const SYS_PARAM_NAMES: [&str; 6] = ["a12", "a13", "a23", "b02", "b03", "c01"];

impl SysParams {
    pub fn new(t: TowerElem, c: [TowerElem; 6]) -> Self {
        let [a12, a13, a23, b02, b03, c01] = c;
        SysParams { t, a12, a13, a23, b02, b03, c01 }
    }

    /// All six coefficients zero.
    pub fn zero(t: TowerElem) -> Self {
        Self::new(t, std::array::from_fn(|_| TowerElem::zero()))
    }

    /// `t` and the six coefficients as free parameters of the same names.
    pub fn symbolic() -> Self {
        Self::new(TowerElem::param("t"), SYS_PARAM_NAMES.map(TowerElem::param))
    }

    /// Symbolic coefficients over a fixed `t`.
    pub fn symbolic_at(t: TowerElem) -> Self {
        Self::new(t, SYS_PARAM_NAMES.map(TowerElem::param))
    }

    pub fn coefficients(&self) -> [&TowerElem; 6] {
        [&self.a12, &self.a13, &self.a23, &self.b02, &self.b03, &self.c01]
    }
}

impl fmt::Display for SysParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coefficients().iter().map(|x| x.to_string()).collect();
        write!(f, "Sys({}; {})", self.t, c.join(", "))
    }
}

fn x(e: [u32; 4], c: TowerElem) -> (Vec<u32>, TowerElem) {
    (e.to_vec(), c)
}

/// The three quadrics of the normal form, literally.
pub fn sys_build(s: &SysParams) -> Result<Pencil, FamilyError> {
    let t = &s.t;
    let one = TowerElem::one();
    if t.is_zero() || (t - &one).is_zero() {
        return Err(FamilyError::DegenerateT(t.to_string()));
    }
    let v = xvars();
    let q1 = Form::from_terms(
        v.clone(),
        2,
        [
            x([0, 2, 0, 0], one.clone()),
            x([0, 0, 2, 0], one.clone()),
            x([0, 0, 0, 2], one.clone()),
            x([0, 1, 1, 0], s.a12.clone()),
            x([0, 1, 0, 1], s.a13.clone()),
            x([0, 0, 1, 1], s.a23.clone()),
        ],
    );
    let q3 = Form::from_terms(
        v.clone(),
        2,
        [
            x([2, 0, 0, 0], one.clone()),
            x([0, 0, 2, 0], one.clone()),
            x([0, 0, 0, 2], t * t),
            x([1, 0, 1, 0], s.b02.clone()),
            x([1, 0, 0, 1], s.b03.clone()),
            x([0, 0, 1, 1], t * &s.a23),
        ],
    );
    let q2 = Form::from_terms(
        v,
        2,
        [
            x([0, 0, 2, 0], TowerElem::from_int(-2)),
            x([0, 0, 0, 2], &TowerElem::from_int(-2) * t),
            x([1, 1, 0, 0], s.c01.clone()),
            x([1, 0, 1, 0], -&s.b02),
            x([1, 0, 0, 1], -&s.b03.checked_div(t)?),
            x([0, 1, 1, 0], -&s.a12),
            x([0, 1, 0, 1], -&(t * &s.a13)),
            x([0, 0, 1, 1], -&((t + &one) * &s.a23)),
        ],
    );
    Ok(Pencil::new(q1, q2, q3))
}

/// A simultaneous change of the pencil parameter and of the coordinates:
/// `(p, q) -> pq * (p, q)` and `x -> coord * x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMap {
    pub label: String,
    pub pq: Matrix,
    pub coord: ProjTransform,
}

pub const SYSTEM_MAP_LABELS: [&str; 9] = [
    "identity",
    "order3",
    "order3-partner",
    "order4",
    "flip-x0",
    "involution",
    "swap01",
    "swap-t",
    "cross-t",
];

/// The named maps, with `t` as given.
pub fn system_map(label: &str, t: &TowerElem) -> Result<SystemMap, FamilyError> {
    let one = TowerElem::one();
    let z = TowerElem::zero;
    let n = TowerElem::from_int;
    let tm1 = t - &one;
    let inv = |e: &TowerElem| e.inv().map_err(FamilyError::from);
    // Coordinate maps are written as the images of x0..x3: entry (i, j) is
    // the coefficient of x_j in the i-th image.
    let perm = |images: [(usize, TowerElem); 4]| {
        let mut m = Matrix::zeros(4, 4);
        for (i, (j, c)) in images.into_iter().enumerate() {
            m[(i, j)] = c;
        }
        m
    };
    let (pq, coord) = match label {
        "identity" => (Matrix::identity(2), Matrix::identity(4)),
        "order3" => {
            let k = inv(&tm1)?;
            (
                Matrix::from_rows(vec![vec![one.clone(), k.clone()], vec![z(), k]]),
                perm([(0, inv(t)?), (3, one.clone()), (1, one.clone()), (2, one.clone())]),
            )
        }
        "order3-partner" => (
            Matrix::from_rows(vec![vec![one.clone(), n(-1)], vec![inv(t)?, n(-1)]]),
            perm([(3, inv(&(t * t))?), (2, one.clone()), (1, inv(t)?), (0, t.clone())]),
        ),
        "order4" => (
            Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![n(-1), one.clone()]]),
            perm([(2, one.clone()), (3, one.clone()), (1, TowerElem::frac(1, 2)), (0, TowerElem::frac(1, 2))]),
        ),
        "flip-x0" => (
            Matrix::diag(&[n(-1), one.clone()]),
            perm([(0, n(-1)), (1, one.clone()), (3, one.clone()), (2, one.clone())]),
        ),
        "involution" => (
            Matrix::diag(&[n(-1), one.clone()]),
            perm([(0, one.clone()), (1, one.clone()), (3, one.clone()), (2, one.clone())]),
        ),
        "swap01" => (
            Matrix::from_rows(vec![vec![z(), one.clone()], vec![one.clone(), z()]]),
            perm([(1, one.clone()), (0, one.clone()), (2, one.clone()), (3, one.clone())]),
        ),
        "swap-t" => (
            Matrix::from_rows(vec![vec![z(), t.clone()], vec![one.clone(), z()]]),
            perm([(1, one.clone()), (0, inv(t)?), (3, one.clone()), (2, inv(t)?)]),
        ),
        "cross-t" => (
            Matrix::from_rows(vec![vec![t.clone(), -t], vec![one.clone(), -t]]),
            perm([
                (3, one.clone()),
                (2, -&inv(t)?),
                (1, -&inv(&tm1)?),
                (0, inv(&(t * &tm1))?),
            ]),
        ),
        _ => return Err(FamilyError::UnknownMap(label.to_string())),
    };
    Ok(SystemMap {
        label: label.to_string(),
        pq,
        coord: ProjTransform::new(coord)?,
    })
}

/// Rewrite `P(pq * (p, q); coord * x)` as a new pencil and try to read it
/// back as a normal form, up to an overall scalar.
pub fn apply_system_map(p: &Pencil, m: &SystemMap) -> Result<(Pencil, Option<SysParams>), FamilyError> {
    if m.pq.det()?.is_zero() || m.coord.matrix().det()?.is_zero() {
        return Err(FamilyError::SingularMatrix);
    }
    let a = |i: usize, j: usize| m.pq[(i, j)].clone();
    let (a00, a01, a10, a11) = (a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    let two = TowerElem::from_int(2);
    // p' = a00 p + a01 q, q' = a10 p + a11 q.
    let weights = [
        [&a00 * &a00, &a00 * &a10, &a10 * &a10],
        [&two * &(&a00 * &a01), &(&a00 * &a11) + &(&a01 * &a10), &two * &(&a10 * &a11)],
        [&a01 * &a01, &a01 * &a11, &a11 * &a11],
    ];
    let moved: Vec<Form> = p.q.iter().map(|f| f.compose_matrix(m.coord.matrix())).collect();
    let mut out = Vec::with_capacity(3);
    for w in &weights {
        let mut acc = Form::zero(xvars(), 2);
        for (k, c) in w.iter().enumerate() {
            acc = acc.add(&moved[k].scale(c));
        }
        out.push(acc);
    }
    let [q1, q2, q3]: [Form; 3] = out.try_into().unwrap();
    let pencil = Pencil::new(q1, q2, q3);
    let recognized = recognize_sys(&pencil);
    Ok((pencil, recognized))
}

/// Read a pencil as `Sys(t; ...)` up to an overall scalar.
pub fn recognize_sys(p: &Pencil) -> Option<SysParams> {
    let s = p.q[0].coeff(&[0, 2, 0, 0]);
    if s.is_zero() {
        return None;
    }
    let inv = s.inv().ok()?;
    let q: Vec<Form> = p.q.iter().map(|f| f.scale(&inv)).collect();
    let t = &q[1].coeff(&[0, 0, 0, 2]) * &TowerElem::frac(-1, 2);
    if t.is_zero() || t.is_one() {
        return None;
    }
    let params = SysParams::new(
        t,
        [
            q[0].coeff(&[0, 1, 1, 0]),
            q[0].coeff(&[0, 1, 0, 1]),
            q[0].coeff(&[0, 0, 1, 1]),
            q[2].coeff(&[1, 0, 1, 0]),
            q[2].coeff(&[1, 0, 0, 1]),
            q[1].coeff(&[1, 1, 0, 0]),
        ],
    );
    let rebuilt = sys_build(&params).ok()?;
    (rebuilt.q[..] == q[..]).then_some(params)
}
