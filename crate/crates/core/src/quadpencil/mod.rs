//! Pencils `p^2 Q1 + p q Q2 + q^2 Q3` of quadrics in four variables.

pub mod numeric;

use crate::exactfield::{FieldError, Specializer, TowerElem};
use crate::linalg::{kernel_basis, Matrix};
use crate::multipoly::{binary_squarefree, pqvars, BinaryFactorization, Form};
use crate::projgeom::{symmetric_matrix, GeomError, ProjPoint};

pub use numeric::{numeric_base_points, numeric_singular_points, NumericError, NumericOptions, NumericPoints};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PencilError {
    #[error("discriminant quartic is identically zero")]
    ZeroDiscriminant,
    #[error("determinant form is identically zero")]
    IdenticallyZeroDeterminant,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    pub q: [Form; 3],
}

impl Pencil {
    pub fn new(q1: Form, q2: Form, q3: Form) -> Self {
        for q in [&q1, &q2, &q3] {
            assert!(q.is_zero() || q.degree() == 2, "pencil members must be quadrics");
            assert_eq!(q.nvars(), 4);
        }
        Pencil { q: [q1, q2, q3] }
    }

    /// Member `p^2 Q1 + p q Q2 + q^2 Q3` at a point `(p:q)`.
    pub fn member(&self, p: &TowerElem, q: &TowerElem) -> Form {
        self.q[0]
            .scale(&(p * p))
            .add(&self.q[1].scale(&(p * q)))
            .add(&self.q[2].scale(&(q * q)))
    }

    pub fn matrices(&self) -> [Matrix; 3] {
        self.q.clone().map(|f| {
            if f.is_zero() {
                Matrix::zeros(4, 4)
            } else {
                symmetric_matrix(&f)
            }
        })
    }

    pub fn specialize(&self, sp: &Specializer) -> Result<Pencil, FieldError> {
        Ok(Pencil {
            q: [self.q[0].specialize(sp)?, self.q[1].specialize(sp)?, self.q[2].specialize(sp)?],
        })
    }

    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> = self.q.iter().flat_map(|f| f.params()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `Q(x)` as a binary form in `(p, q)` at a fixed point.
    pub fn restricted_to_point(&self, x: &[TowerElem]) -> Form {
        let v = self.q.clone().map(|f| f.eval(x));
        Form::from_terms(pqvars(), 2, [(vec![2, 0], v[0].clone()), (vec![1, 1], v[1].clone()), (vec![0, 2], v[2].clone())])
    }
}

/// `Q2^2 - 4 Q1 Q3`.
pub fn discriminant_quartic(p: &Pencil) -> Result<Form, PencilError> {
    let d = p.q[1].mul(&p.q[1]).sub(&p.q[0].mul(&p.q[2]).scale(&TowerElem::from_int(4)));
    if d.is_zero() {
        return Err(PencilError::ZeroDiscriminant);
    }
    Ok(d)
}

fn det_forms(m: &[Vec<Form>]) -> Form {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<Form> = None;
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Form>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, f)| f.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det_forms(&minor));
        let term = if j % 2 == 1 { term.neg() } else { term };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.unwrap_or_else(|| Form::zero(pqvars(), 2 * n as u32))
}

/// Symmetric matrix of the pencil with entries binary quadratic forms.
pub fn pencil_matrix(p: &Pencil) -> Vec<Vec<Form>> {
    let ms = p.matrices();
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    Form::from_terms(
                        pqvars(),
                        2,
                        [
                            (vec![2, 0], ms[0][(i, j)].clone()),
                            (vec![1, 1], ms[1][(i, j)].clone()),
                            (vec![0, 2], ms[2][(i, j)].clone()),
                        ],
                    )
                })
                .collect()
        })
        .collect()
}

/// The degree-8 determinant form `D(p:q)`.
pub fn det_binary_form(p: &Pencil) -> Result<Form, PencilError> {
    let d = det_forms(&pencil_matrix(p));
    if d.is_zero() {
        return Err(PencilError::IdenticallyZeroDeterminant);
    }
    Ok(d)
}

#[derive(Debug, Clone)]
pub struct SingularMember {
    /// Root `(p:q)`, absent for an unsplit factor.
    pub root: Option<(TowerElem, TowerElem)>,
    pub factor: Form,
    pub multiplicity: u32,
    pub rank: Option<usize>,
    pub vertex: Option<ProjPoint>,
}

/// Roots of `D` with multiplicities, member ranks and vertices.
pub fn singular_members(
    p: &Pencil,
    hints: &[(TowerElem, TowerElem)],
) -> Result<(BinaryFactorization, Vec<SingularMember>), PencilError> {
    let d = det_binary_form(p)?;
    let fac = binary_squarefree(&d, hints)?;
    let mut out = Vec::new();
    for f in &fac.factors {
        let mut sm = SingularMember {
            root: f.root(),
            factor: f.form.clone(),
            multiplicity: f.multiplicity,
            rank: None,
            vertex: None,
        };
        if let Some((a, b)) = &sm.root {
            let member = p.member(a, b);
            let m = if member.is_zero() { Matrix::zeros(4, 4) } else { symmetric_matrix(&member) };
            let r = m.rank()?;
            sm.rank = Some(r);
            if r == 3 {
                let k = kernel_basis(&m)?;
                sm.vertex = Some(ProjPoint::new(k[0].clone())?);
            }
        }
        out.push(sm);
    }
    Ok((fac, out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasePointVerdict {
    pub on_all: bool,
    pub jacobian_rank: usize,
}

impl BasePointVerdict {
    pub fn transversal(&self) -> bool {
        self.on_all && self.jacobian_rank == 3
    }
}

pub fn jacobian_at(p: &Pencil, x: &[TowerElem]) -> Matrix {
    Matrix::from_rows(
        p.q.iter()
            .map(|f| (0..4).map(|i| f.partial(i).eval(x)).collect())
            .collect(),
    )
}

/// Check that points lie on all three quadrics with a rank-3 Jacobian.
pub fn verify_base_points(p: &Pencil, pts: &[ProjPoint]) -> Result<Vec<BasePointVerdict>, PencilError> {
    pts.iter()
        .map(|x| {
            let on_all = p.q.iter().all(|f| f.eval(x.coords()).is_zero());
            let jacobian_rank = jacobian_at(p, x.coords()).rank()?;
            Ok(BasePointVerdict { on_all, jacobian_rank })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{tower_adjoin, Tower};
    use crate::multipoly::xvars;
    use crate::projgeom::{is_node, NodeVerdict};

    fn x(i: usize) -> Form {
        Form::var(xvars(), i)
    }

    fn c(n: i64) -> TowerElem {
        TowerElem::from_int(n)
    }

    fn sq(i: usize, k: i64) -> Form {
        x(i).pow(2).scale(&c(k))
    }

    /// Zero-parameter system at t = 2.
    fn sys_zero() -> Pencil {
        Pencil::new(
            sq(1, 1).add(&sq(2, 1)).add(&sq(3, 1)),
            sq(2, -2).add(&sq(3, -4)),
            sq(0, 1).add(&sq(2, 1)).add(&sq(3, 4)),
        )
    }

    fn pq(a: i64, b: i64) -> Form {
        Form::var(pqvars(), 0).scale(&c(a)).add(&Form::var(pqvars(), 1).scale(&c(b)))
    }

    #[test]
    fn discriminant_examples() {
        let p = Pencil::new(sq(0, 1), Form::zero(xvars(), 2), sq(1, 1));
        assert_eq!(discriminant_quartic(&p).unwrap(), x(0).pow(2).mul(&x(1).pow(2)).scale(&c(-4)));
        let d = discriminant_quartic(&sys_zero()).unwrap();
        let m = |i: usize, j: usize, k: i64| x(i).pow(2).mul(&x(j).pow(2)).scale(&c(k));
        let expect = m(0, 1, 1).add(&m(1, 2, 1)).add(&m(1, 3, 4)).add(&m(0, 2, 1)).add(&m(0, 3, 1)).add(&m(2, 3, 1));
        assert_eq!(d, expect.scale(&c(-4)));
    }

    #[test]
    fn determinant_examples() {
        let s2 = (0..4).fold(Form::zero(xvars(), 2), |a, i| a.add(&sq(i, 1)));
        let p = Pencil::new(Form::zero(xvars(), 2), s2, Form::zero(xvars(), 2));
        assert_eq!(det_binary_form(&p).unwrap(), pq(1, 0).pow(4).mul(&pq(0, 1).pow(4)));
        let d = det_binary_form(&sys_zero()).unwrap();
        let expect = pq(1, 0).mul(&pq(0, 1)).mul(&pq(1, -1)).mul(&pq(1, -2)).pow(2);
        assert_eq!(d, expect);
        assert_eq!(d.degree(), 8);
    }

    #[test]
    fn singular_members_of_zero_system() {
        let p = sys_zero();
        let (fac, members) = singular_members(&p, &[]).unwrap();
        assert_eq!(fac.double_roots(), 4);
        let mut verts: Vec<ProjPoint> = members.iter().filter_map(|m| m.vertex.clone()).collect();
        verts.sort_by_key(|v| v.to_string());
        let mut expect: Vec<ProjPoint> = (0..4)
            .map(|i| {
                let mut e = [0; 4];
                e[i] = 1;
                ProjPoint::from_ints(&e)
            })
            .collect();
        expect.sort_by_key(|v| v.to_string());
        assert_eq!(verts, expect);
        let disc = discriminant_quartic(&p).unwrap();
        for v in &verts {
            assert_eq!(is_node(&disc, v).unwrap(), NodeVerdict::NodeCertified);
        }
        // the member at (1:0) is Q1, and its vertex lies on Q2
        let m10 = members.iter().find(|m| m.root.as_ref().is_some_and(|(_, b)| b.is_zero())).unwrap();
        assert!(p.q[1].eval(m10.vertex.as_ref().unwrap().coords()).is_zero());
    }

    #[test]
    fn rank_two_member_has_no_vertex() {
        let p = Pencil::new(sq(0, 1), sq(1, 1), sq(2, 1).add(&sq(3, 1)));
        let (_, members) = singular_members(&p, &[]).unwrap();
        let m = members.iter().find(|m| m.root.as_ref().is_some_and(|(_, b)| b.is_zero())).unwrap();
        assert_eq!(m.rank, Some(1));
        assert!(m.vertex.is_none());
    }

    #[test]
    fn base_points_of_zero_system() {
        let tw = tower_adjoin(&Tower::base(), &c(-2), "s").unwrap();
        let s = TowerElem::radical(&tw, 0);
        let p = sys_zero();
        let mut pts = Vec::new();
        for a in [1, -1] {
            for b in [1, -1] {
                for d in [1, -1] {
                    pts.push(ProjPoint::new(vec![&s * &c(a), c(b), &s * &c(d), c(1)]).unwrap());
                }
            }
        }
        let v = verify_base_points(&p, &pts).unwrap();
        assert!(v.iter().all(|b| b.transversal()));
        let j = jacobian_at(&p, &[s.clone(), c(1), s.clone(), c(1)]);
        let minor = Matrix::from_rows((0..3).map(|r| (0..3).map(|k| j[(r, k)].clone()).collect()).collect());
        assert_eq!(minor.det().unwrap(), c(32));
        let disc = discriminant_quartic(&p).unwrap();
        for pt in &pts {
            assert!((0..4).all(|i| disc.partial(i).eval(pt.coords()).is_zero()));
        }
        let off = verify_base_points(&p, &[ProjPoint::from_ints(&[1, 0, 0, 0])]).unwrap();
        assert!(!off[0].on_all);
    }
}
