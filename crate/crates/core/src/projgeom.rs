//! Points, planes, node certification and tropes in projective 3-space.

use std::fmt;
use std::sync::Arc;

use crate::exactfield::{FieldError, TowerElem};
use crate::linalg::{kernel_basis, Matrix};
use crate::multipoly::{monomials, perfect_square_root, restrict_to_hyperplane, xvars, Form, FormError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("the plane is contained in the surface")]
    IdenticallyZeroRestriction,
    #[error("point {0} does not lie on the plane")]
    PointOffPlane(usize),
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of projective space, stored with its first nonzero coordinate 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<TowerElem>,
}

impl ProjPoint {
    pub fn new(coords: Vec<TowerElem>) -> Result<Self, GeomError> {
        let k = coords.iter().position(|c| !c.is_zero()).ok_or(GeomError::ZeroPoint)?;
        let inv = coords[k].inv()?;
        let coords = coords.iter().map(|c| c * &inv).collect();
        Ok(ProjPoint { coords })
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| TowerElem::from_int(x)).collect()).expect("nonzero point")
    }

    pub fn coords(&self) -> &[TowerElem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Image under `x -> M x`.
    pub fn transform(&self, m: &Matrix) -> Result<ProjPoint, GeomError> {
        ProjPoint::new(m.mul_vec(&self.coords))
    }

    pub fn specialize(&self, sp: &crate::exactfield::Specializer) -> Result<ProjPoint, GeomError> {
        let c: Result<Vec<_>, _> = self.coords.iter().map(|c| sp.apply(c)).collect();
        ProjPoint::new(c?)
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeVerdict {
    SmoothOnSurface,
    SmoothOffSurface,
    NodeCertified,
    DegenerateSingular,
}

impl fmt::Display for NodeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NodeVerdict::SmoothOnSurface => "smooth-on-surface",
            NodeVerdict::SmoothOffSurface => "smooth-off-surface",
            NodeVerdict::NodeCertified => "node",
            NodeVerdict::DegenerateSingular => "degenerate-singular",
        };
        f.write_str(s)
    }
}

/// Symmetric matrix of a quadratic form: off-diagonal entries are half the
/// mixed coefficients.
pub fn symmetric_matrix(q: &Form) -> Matrix {
    assert_eq!(q.degree(), 2, "quadratic form expected");
    let n = q.nvars();
    let half = TowerElem::frac(1, 2);
    let mut m = Matrix::zeros(n, n);
    for (e, c) in q.terms() {
        let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        if idx.len() == 1 {
            m[(idx[0], idx[0])] = c.clone();
        } else {
            let h = c * &half;
            m[(idx[0], idx[1])] = h.clone();
            m[(idx[1], idx[0])] = h;
        }
    }
    m
}

/// Quadratic form of a symmetric matrix.
pub fn form_of_symmetric(m: &Matrix, vars: Arc<[String]>) -> Form {
    let n = m.rows();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut e = vec![0; n];
            e[i] += 1;
            e[j] += 1;
            let c = if i == j { m[(i, i)].clone() } else { &m[(i, j)] + &m[(j, i)] };
            terms.push((e, c));
        }
    }
    Form::from_terms(vars, 2, terms)
}

pub fn hessian_at(f: &Form, p: &[TowerElem]) -> Matrix {
    let n = f.nvars();
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        let fi = f.partial(i);
        for j in i..n {
            let v = fi.partial(j).eval(p);
            h[(i, j)] = v.clone();
            h[(j, i)] = v;
        }
    }
    h
}

/// Node test in the affine chart `x_chart = 1`.
pub fn is_node_in_chart(q: &Form, p: &ProjPoint, chart: usize) -> Result<NodeVerdict, GeomError> {
    let inv = p.coords[chart].inv()?;
    let pt: Vec<TowerElem> = p.coords.iter().map(|c| c * &inv).collect();
    let grad_zero = (0..q.nvars()).all(|i| q.partial(i).eval(&pt).is_zero());
    if !grad_zero {
        return Ok(if q.eval(&pt).is_zero() {
            NodeVerdict::SmoothOnSurface
        } else {
            NodeVerdict::SmoothOffSurface
        });
    }
    // By Euler's identity a vanishing gradient forces Q(p) = 0.
    let h = hessian_at(q, &pt);
    let keep: Vec<usize> = (0..q.nvars()).filter(|&i| i != chart).collect();
    let mut local = Matrix::zeros(keep.len(), keep.len());
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            local[(a, b)] = h[(i, j)].clone();
        }
    }
    Ok(if local.det()?.is_zero() {
        NodeVerdict::DegenerateSingular
    } else {
        NodeVerdict::NodeCertified
    })
}

/// Classify a point of a surface: smooth, ordinary double point or worse.
pub fn is_node(q: &Form, p: &ProjPoint) -> Result<NodeVerdict, GeomError> {
    let chart = p.coords.iter().position(|c| !c.is_zero()).ok_or(GeomError::ZeroPoint)?;
    is_node_in_chart(q, p, chart)
}

fn solve_var(plane: &Form) -> usize {
    (0..plane.nvars())
        .find(|&i| {
            let mut e = vec![0; plane.nvars()];
            e[i] = 1;
            !plane.coeff(&e).is_zero()
        })
        .expect("nonzero plane")
}

/// If the plane section is a double conic, return the conic in the
/// variables other than the first one with a nonzero plane coefficient.
pub fn trope_check(q: &Form, plane: &Form) -> Result<Option<Form>, GeomError> {
    let r = restrict_to_hyperplane(q, plane, solve_var(plane))?;
    if r.is_zero() {
        return Err(GeomError::IdenticallyZeroRestriction);
    }
    Ok(perfect_square_root(&r).map(|(root, _)| root))
}

pub fn on_plane(plane: &Form, p: &ProjPoint) -> bool {
    plane.eval(&p.coords).is_zero()
}

#[derive(Debug, Clone)]
pub struct ConicSpace {
    pub dimension: usize,
    /// Ternary quadrics in the plane coordinates.
    pub basis: Vec<Form>,
    pub ranks: Vec<usize>,
}

/// Conics in the plane through the given points.
pub fn conic_space_through(plane: &Form, points: &[ProjPoint]) -> Result<ConicSpace, GeomError> {
    let sv = solve_var(plane);
    for (i, p) in points.iter().enumerate() {
        if !on_plane(plane, p) {
            return Err(GeomError::PointOffPlane(i));
        }
    }
    let keep: Vec<usize> = (0..plane.nvars()).filter(|&i| i != sv).collect();
    let vars: Arc<[String]> = Arc::from(keep.iter().map(|&i| xvars()[i].clone()).collect::<Vec<_>>());
    let mons = monomials(3, 2);
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let loc: Vec<TowerElem> = keep.iter().map(|&i| p.coords[i].clone()).collect();
        rows.push(
            mons.iter()
                .map(|e| {
                    let mut v = TowerElem::one();
                    for (k, &d) in e.iter().enumerate() {
                        v = v * loc[k].pow(d);
                    }
                    v
                })
                .collect(),
        );
    }
    let kernel = if rows.is_empty() {
        (0..mons.len())
            .map(|i| (0..mons.len()).map(|j| if i == j { TowerElem::one() } else { TowerElem::zero() }).collect())
            .collect()
    } else {
        kernel_basis(&Matrix::from_rows(rows))?
    };
    let mut basis = Vec::new();
    let mut ranks = Vec::new();
    for v in kernel {
        let f = Form::from_terms(vars.clone(), 2, mons.iter().cloned().zip(v));
        ranks.push(symmetric_matrix(&f).rank()?);
        basis.push(f);
    }
    Ok(ConicSpace {
        dimension: basis.len(),
        basis,
        ranks,
    })
}

/// Rank of the coordinate matrix: 2 collinear, 3 coplanar, 4 spanning.
pub fn configuration_rank(points: &[ProjPoint]) -> Result<usize, GeomError> {
    let m = Matrix::from_rows(points.iter().map(|p| p.coords.clone()).collect());
    Ok(m.rank()?)
}
