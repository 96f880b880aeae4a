use std::sync::Arc;

use crate::exactfield::TowerElem;
use crate::linalg::{kernel_basis, Matrix};
use crate::multipoly::{gradient, monomials, xvars, Form};
use crate::projgeom::{trope_check, ProjPoint};

use super::FamilyError;

/// Coefficient vectors `c` (one entry per basis form) such that
/// `sum c_k B_k` is singular at every prescribed point.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub basis: Vec<Form>,
    /// A basis of the solution space; each vector has one entry per basis form.
    pub kernel: Vec<Vec<TowerElem>>,
    /// For each requested trope: does the generic member restrict to a
    /// double conic there.
    pub trope_ok: Vec<bool>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }

    pub fn form_of(&self, coeffs: &[TowerElem]) -> Form {
        let mut acc = Form::zero(self.basis[0].vars().clone(), self.basis[0].degree());
        for (b, c) in self.basis.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// `sum_j u_j K_j` with the given parameter names.
    pub fn generic_member(&self, names: &[&str]) -> Form {
        assert_eq!(names.len(), self.dimension());
        let n = self.basis.len();
        let coeffs: Vec<TowerElem> = (0..n)
            .map(|k| {
                let mut c = TowerElem::zero();
                for (v, name) in self.kernel.iter().zip(names) {
                    c = &c + &(&v[k] * &TowerElem::param(name));
                }
                c
            })
            .collect();
        self.form_of(&coeffs)
    }

    /// Basis of the solution space adapted to the coordinates `free`: vector
    /// `j` has coordinate `free[j]` equal to 1 and the other free
    /// coordinates zero. `None` if those coordinates do not parametrize it.
    pub fn linear_chart(&self, free: &[usize]) -> Result<Option<Vec<Vec<TowerElem>>>, FamilyError> {
        if self.dimension() != free.len() {
            return Ok(None);
        }
        let m = Matrix::from_rows(free.iter().map(|&i| self.kernel.iter().map(|v| v[i].clone()).collect()).collect());
        if m.det()?.is_zero() {
            return Ok(None);
        }
        let inv = m.inverse()?;
        Ok(Some(
            (0..free.len())
                .map(|col| {
                    let w = inv.col(col);
                    (0..self.basis.len())
                        .map(|i| {
                            let mut s = TowerElem::zero();
                            for (v, c) in self.kernel.iter().zip(&w) {
                                s = &s + &(&v[i] * c);
                            }
                            s
                        })
                        .collect()
                })
                .collect(),
        ))
    }

    /// Affine chart of the solution space: the vector with coordinate
    /// `fixed` equal to 1 and the `free` coordinates zero, plus one
    /// direction per free coordinate (that coordinate 1, the others and
    /// `fixed` zero). `None` if the chart does not cover the space.
    pub fn affine_chart(
        &self,
        fixed: usize,
        free: &[usize],
    ) -> Result<Option<(Vec<TowerElem>, Vec<Vec<TowerElem>>)>, FamilyError> {
        let k = self.dimension();
        if k != free.len() + 1 {
            return Ok(None);
        }
        let pins: Vec<usize> = std::iter::once(fixed).chain(free.iter().copied()).collect();
        // Square system: rows are pinned coordinates, columns kernel vectors.
        let m = Matrix::from_rows(pins.iter().map(|&i| self.kernel.iter().map(|v| v[i].clone()).collect()).collect());
        if m.det()?.is_zero() {
            return Ok(None);
        }
        let inv = m.inverse()?;
        let combine = |col: usize| -> Vec<TowerElem> {
            let w = inv.col(col);
            (0..self.basis.len())
                .map(|i| {
                    let mut s = TowerElem::zero();
                    for (v, c) in self.kernel.iter().zip(&w) {
                        s = &s + &(&v[i] * c);
                    }
                    s
                })
                .collect()
        };
        let particular = combine(0);
        let directions = (1..pins.len()).map(combine).collect();
        Ok(Some((particular, directions)))
    }
}

/// Impose `F(p) = 0` and `grad F(p) = 0` at each point on combinations of
/// the basis forms. Trope conditions are quadratic in the coefficients and
/// are evaluated on the generic member of the linear solution space.
pub fn solve_singularity_constraints(
    basis: &[Form],
    points: &[ProjPoint],
    tropes: &[Form],
) -> Result<SolutionSpace, FamilyError> {
    assert!(!basis.is_empty());
    let d = basis[0].degree();
    assert!(basis.iter().all(|b| b.degree() == d), "basis forms must share a degree");
    let grads: Vec<Vec<Form>> = basis.iter().map(gradient).collect();
    let mut rows = Vec::new();
    for p in points {
        let x = p.coords();
        rows.push(basis.iter().map(|b| b.eval(x)).collect::<Vec<_>>());
        for i in 0..x.len() {
            rows.push(grads.iter().map(|g| g[i].eval(x)).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| if i == j { TowerElem::one() } else { TowerElem::zero() }).collect())
            .collect()
    } else {
        kernel_basis(&Matrix::from_rows(rows))?
    };
    let mut space = SolutionSpace {
        basis: basis.to_vec(),
        kernel,
        trope_ok: Vec::new(),
    };
    if !tropes.is_empty() {
        let names: Vec<String> = (1..=space.dimension()).map(|i| format!("u{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let generic = if space.dimension() == 0 { None } else { Some(space.generic_member(&refs)) };
        space.trope_ok = tropes
            .iter()
            .map(|h| match &generic {
                None => true,
                Some(f) => matches!(trope_check(f, h), Ok(Some(_))),
            })
            .collect();
    }
    Ok(space)
}

/// Exponent map `e -> 2 - e` on a quartic of degree at most 2 in each variable.
pub fn cremona_quartic(f: &Form) -> Result<Form, FamilyError> {
    let mut terms = Vec::with_capacity(f.num_terms());
    for (e, c) in f.terms() {
        if let Some(i) = e.iter().position(|&k| k > 2) {
            return Err(FamilyError::DegreeTooHighInVariable(f.vars()[i].clone()));
        }
        terms.push((e.iter().map(|&k| 2 - k).collect(), c.clone()));
    }
    let degree = 2 * f.nvars() as u32 - f.degree();
    Ok(Form::from_terms(f.vars().clone(), degree, terms))
}

/// Quartic monomials in x0..x3 whose weighted exponent sum is `target` mod `n`.
pub fn weight_monomials(n: u32, weights: [u32; 4], target: u32) -> Vec<Vec<u32>> {
    assert!(n >= 1);
    monomials(4, 4)
        .into_iter()
        .filter(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum::<u32>() % n == target % n)
        .collect()
}

/// Does `F` vanish to order two along `(u^3 : u^2 v : u v^2 : v^3)`?
pub fn vanish_on_twisted_cubic(f: &Form) -> bool {
    let uv: Arc<[String]> = Arc::from(vec!["u".to_string(), "v".to_string()]);
    let images: Vec<Form> = (0..4u32)
        .map(|i| Form::monomial(uv.clone(), vec![3 - i, i], TowerElem::one()))
        .collect();
    f.compose(&images).is_zero() && gradient(f).iter().all(|g| g.compose(&images).is_zero())
}

/// The weight-6 monomials for the order-11 diagonal action, constrained to be
/// singular at `(1:1:1:1)`.
pub fn twisted_cubic_solution() -> Result<SolutionSpace, FamilyError> {
    let basis: Vec<Form> = weight_monomials(11, [0, 1, 2, 3], 6)
        .into_iter()
        .map(|e| Form::monomial(xvars(), e, TowerElem::one()))
        .collect();
    solve_singularity_constraints(&basis, &[ProjPoint::from_ints(&[1, 1, 1, 1])], &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::{power_sum, power_sum_basis};

    fn q(n: i64, d: i64) -> TowerElem {
        TowerElem::frac(n, d)
    }

    #[test]
    fn eq4_line() {
        let s = solve_singularity_constraints(&power_sum_basis(), &[ProjPoint::from_ints(&[0, 0, 0, 1])], &[power_sum(1)])
            .unwrap();
        assert_eq!(s.dimension(), 2);
        let (p, d) = s.affine_chart(0, &[3]).unwrap().unwrap();
        assert_eq!(p, vec![q(1, 1), q(-2, 1), q(1, 1), q(0, 1)]);
        assert_eq!(d, vec![vec![q(0, 1), q(2, 1), q(-3, 1), q(1, 1)]]);
        assert_eq!(s.trope_ok, vec![true]);
    }

    #[test]
    fn eq5_line() {
        let s = solve_singularity_constraints(&power_sum_basis(), &[ProjPoint::from_ints(&[1, 1, 0, 0])], &[]).unwrap();
        let (p, d) = s.affine_chart(0, &[3]).unwrap().unwrap();
        assert_eq!(p, vec![q(1, 1), q(-2, 1), q(1, 2), q(0, 1)]);
        assert_eq!(d, vec![vec![q(0, 1), q(8, 1), q(-6, 1), q(1, 1)]]);
    }

    #[test]
    fn unconstrained_point() {
        let b = vec![Form::monomial(xvars(), vec![4, 0, 0, 0], TowerElem::one())];
        let s = solve_singularity_constraints(&b, &[ProjPoint::from_ints(&[0, 1, 0, 0])], &[]).unwrap();
        assert_eq!(s.dimension(), 1);
    }

    #[test]
    fn members_are_singular() {
        let pts = [ProjPoint::from_ints(&[1, 2, 0, 1])];
        let basis: Vec<Form> = monomials(4, 4)
            .into_iter()
            .map(|e| Form::monomial(xvars(), e, TowerElem::one()))
            .collect();
        let s = solve_singularity_constraints(&basis, &pts, &[]).unwrap();
        assert_eq!(s.dimension(), 35 - 4);
        for v in &s.kernel {
            let f = s.form_of(v);
            assert!(gradient(&f).iter().all(|g| g.eval(pts[0].coords()).is_zero()));
        }
    }

    #[test]
    fn weights() {
        assert_eq!(weight_monomials(1, [0, 1, 2, 3], 0).len(), 35);
        let mut six = weight_monomials(11, [0, 1, 2, 3], 6);
        six.sort();
        let mut expect = vec![vec![2, 0, 0, 2], vec![1, 1, 1, 1], vec![1, 0, 3, 0], vec![0, 3, 0, 1], vec![0, 2, 2, 0]];
        expect.sort();
        assert_eq!(six, expect);
        let mut zero = weight_monomials(11, [0, 1, 2, 3], 0);
        zero.sort();
        assert_eq!(zero, vec![vec![0, 0, 1, 3], vec![4, 0, 0, 0]]);
    }

    #[test]
    fn cremona() {
        let f = Form::from_terms(xvars(), 4, [(vec![2, 2, 0, 0], TowerElem::one()), (vec![0, 0, 2, 2], TowerElem::one())]);
        assert_eq!(cremona_quartic(&f).unwrap(), f);
        let g = Form::monomial(xvars(), vec![3, 1, 0, 0], TowerElem::one());
        assert_eq!(cremona_quartic(&g).unwrap_err(), FamilyError::DegreeTooHighInVariable("x0".into()));
        let h = Form::monomial(xvars(), vec![2, 1, 1, 0], q(3, 1));
        assert_eq!(cremona_quartic(&cremona_quartic(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn twisted_cubic() {
        let v = xvars();
        let m = |e: [u32; 4], c: i64| Form::monomial(v.clone(), e.to_vec(), TowerElem::from_int(c));
        let conic = m([1, 0, 0, 1], 1).sub(&m([0, 1, 1, 0], 1));
        assert!(vanish_on_twisted_cubic(&conic.mul(&conic)));
        let fermat = m([4, 0, 0, 0], 1).add(&m([0, 4, 0, 0], 1)).add(&m([0, 0, 4, 0], 1)).add(&m([0, 0, 0, 4], 1));
        assert!(!vanish_on_twisted_cubic(&fermat));
        let s = twisted_cubic_solution().unwrap();
        assert_eq!(s.dimension(), 2);
        assert!(vanish_on_twisted_cubic(&s.generic_member(&["alpha", "beta"])));
    }
}
