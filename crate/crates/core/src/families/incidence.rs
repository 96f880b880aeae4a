//! Pencils determined by prescribed singular members: `Q_(p_i:q_i)` is
//! singular at `v_i` for each pair.

use crate::exactfield::TowerElem;
use crate::linalg::{kernel_basis_sparse, Matrix};
use crate::matgroup::ProjTransform;
use crate::multipoly::{monomials, xvars, Form};
use crate::projgeom::ProjPoint;
use crate::quadpencil::Pencil;

use super::sys::{apply_system_map, SystemMap};
use super::FamilyError;

#[derive(Clone, Debug)]
pub struct IncidenceData {
    pub roots: Vec<(TowerElem, TowerElem)>,
    pub vertices: Vec<ProjPoint>,
}

/// Basis of all pencils satisfying the incidences, as a linear system in the
/// 30 quadric coefficients.
pub fn derive_incidence_pencil(data: &IncidenceData) -> Result<Vec<Pencil>, FamilyError> {
    let mons = monomials(4, 2);
    let mut rows = Vec::new();
    for ((p, q), v) in data.roots.iter().zip(&data.vertices) {
        let w = [p * p, p * q, q * q];
        let x = v.coords();
        for j in 0..4 {
            let mut row = Vec::with_capacity(30);
            for wk in &w {
                for e in &mons {
                    // d/dx_j of the monomial at x
                    let d = if e[j] == 0 {
                        TowerElem::zero()
                    } else {
                        let mut val = TowerElem::from_int(e[j] as i64);
                        for (i, &k) in e.iter().enumerate() {
                            let k = if i == j { k - 1 } else { k };
                            if k > 0 {
                                val = &val * &x[i].pow(k);
                            }
                        }
                        val
                    };
                    row.push(wk * &d);
                }
            }
            rows.push(row);
        }
    }
    let kernel = kernel_basis_sparse(&Matrix::from_rows(rows))?;
    Ok(kernel
        .into_iter()
        .map(|v| {
            let q: Vec<Form> = (0..3)
                .map(|k| Form::from_terms(xvars(), 2, mons.iter().cloned().zip(v[10 * k..10 * k + 10].iter().cloned())))
                .collect();
            Pencil::new(q[0].clone(), q[1].clone(), q[2].clone())
        })
        .collect())
}

/// `a = r b` for pencils, member by member.
pub fn pencil_ratio(a: &Pencil, b: &Pencil) -> Option<TowerElem> {
    let mut r: Option<TowerElem> = None;
    for (x, y) in a.q.iter().zip(&b.q) {
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let k = x.proportional_to(y)?;
        match &r {
            Some(r0) if *r0 != k => return None,
            _ => r = Some(k),
        }
    }
    r
}

fn split_blocks(p: &Pencil) -> Result<(Pencil, Pencil), FamilyError> {
    let part = |f: &Form, lo: bool| {
        Form::from_terms(
            xvars(),
            2,
            f.terms()
                .filter(|(e, _)| if lo { e[2] + e[3] == 0 } else { e[0] + e[1] == 0 })
                .map(|(e, c)| (e.to_vec(), c.clone())),
        )
    };
    for f in &p.q {
        if f.terms().any(|(e, _)| e[0] + e[1] > 0 && e[2] + e[3] > 0) {
            return Err(FamilyError::Derivation("incidence pencils mix the coordinate blocks".into()));
        }
    }
    let lo = Pencil::new(part(&p.q[0], true), part(&p.q[1], true), part(&p.q[2], true));
    let hi = Pencil::new(part(&p.q[0], false), part(&p.q[1], false), part(&p.q[2], false));
    Ok((lo, hi))
}

fn is_zero_pencil(p: &Pencil) -> bool {
    p.q.iter().all(|f| f.is_zero())
}

/// For a two-dimensional incidence space spanned by a pencil `P1` in
/// `x0, x1` and a pencil `P2` in `x2, x3`, find the members `P1 + lambda P2`
/// mapped to themselves by the block swap paired with the pencil map
/// `sigma`. Returns `(lambda, pencil)` for both roots `lambda^2 = r1 / r2`.
pub fn swap_symmetric_members(
    basis: &[Pencil],
    sigma: &Matrix,
) -> Result<Vec<(TowerElem, Pencil)>, FamilyError> {
    if basis.len() != 2 {
        return Err(FamilyError::Derivation(format!(
            "incidence space has dimension {}, expected 2",
            basis.len()
        )));
    }
    let mut lo = None;
    let mut hi = None;
    for b in basis {
        let (l, h) = split_blocks(b)?;
        if lo.is_none() && !is_zero_pencil(&l) {
            lo = Some(l);
        }
        if hi.is_none() && !is_zero_pencil(&h) {
            hi = Some(h);
        }
    }
    let (p1, p2) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(FamilyError::Derivation("incidence space does not split into blocks".into())),
    };
    let swap = SystemMap {
        label: "block-swap".into(),
        pq: sigma.clone(),
        coord: ProjTransform::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
    };
    let (t1, _) = apply_system_map(&p1, &swap)?;
    let (t2, _) = apply_system_map(&p2, &swap)?;
    let r1 = pencil_ratio(&t1, &p2).ok_or_else(|| FamilyError::Derivation("swap does not map P1 onto P2".into()))?;
    let r2 = pencil_ratio(&t2, &p1).ok_or_else(|| FamilyError::Derivation("swap does not map P2 onto P1".into()))?;
    let lam_sq = r1.checked_div(&r2)?;
    let lam = lam_sq
        .sqrt_in_tower()
        .ok_or_else(|| FamilyError::Derivation(format!("lambda^2 = {} has no root in the tower", lam_sq)))?;
    let build = |l: &TowerElem| {
        let q: Vec<Form> = (0..3).map(|k| p1.q[k].add(&p2.q[k].scale(l))).collect();
        Pencil::new(q[0].clone(), q[1].clone(), q[2].clone())
    };
    let neg = -&lam;
    Ok(vec![(lam.clone(), build(&lam)), (neg.clone(), build(&neg))])
}
