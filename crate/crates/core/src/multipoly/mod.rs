//! Homogeneous forms over tower elements.

mod binary;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;

use crate::exactfield::{FieldError, Mono, TowerElem};
use crate::linalg::Matrix;

pub use binary::{binary_squarefree, BinaryFactor, BinaryFactorization};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("plane has zero coefficient on the chosen variable")]
    BadSolveVar,
    #[error("form is not divisible")]
    NotDivisible,
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub fn xvars() -> Arc<[String]> {
    static V: OnceLock<Arc<[String]>> = OnceLock::new();
    V.get_or_init(|| Arc::from((0..4).map(|i| format!("x{}", i)).collect::<Vec<_>>()))
        .clone()
}

pub fn pqvars() -> Arc<[String]> {
    static V: OnceLock<Arc<[String]>> = OnceLock::new();
    V.get_or_init(|| Arc::from(vec!["p".to_string(), "q".to_string()])).clone()
}

/// Sparse homogeneous polynomial; only nonzero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    vars: Arc<[String]>,
    degree: u32,
    terms: BTreeMap<Mono, TowerElem>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn add_term(terms: &mut BTreeMap<Mono, TowerElem>, m: Mono, c: TowerElem) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn mono_add(a: &Mono, b: &Mono) -> Mono {
    Mono(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

impl Form {
    pub fn zero(vars: Arc<[String]>, degree: u32) -> Self {
        Form {
            vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<[String]>, c: TowerElem) -> Self {
        let mut f = Self::zero(vars.clone(), 0);
        add_term(&mut f.terms, Mono(vec![0; vars.len()]), c);
        f
    }

    pub fn var(vars: Arc<[String]>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, TowerElem::one())
    }

    pub fn monomial(vars: Arc<[String]>, exps: Vec<u32>, c: TowerElem) -> Self {
        assert_eq!(exps.len(), vars.len());
        let degree = exps.iter().sum();
        let mut f = Self::zero(vars, degree);
        add_term(&mut f.terms, Mono(exps), c);
        f
    }

    /// Linear form with the given coefficients.
    pub fn linear(vars: Arc<[String]>, coeffs: &[TowerElem]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        let mut f = Self::zero(vars.clone(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            add_term(&mut f.terms, Mono(e), c.clone());
        }
        f
    }

    pub fn from_terms(vars: Arc<[String]>, degree: u32, terms: impl IntoIterator<Item = (Vec<u32>, TowerElem)>) -> Self {
        let mut f = Self::zero(vars, degree);
        for (e, c) in terms {
            assert_eq!(e.iter().sum::<u32>(), degree, "inhomogeneous term");
            add_term(&mut f.terms, Mono(e), c);
        }
        f
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &TowerElem)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> TowerElem {
        self.terms
            .get(&Mono(exps.to_vec()))
            .cloned()
            .unwrap_or_else(TowerElem::zero)
    }

    pub fn leading(&self) -> Option<(&[u32], &TowerElem)> {
        self.terms.iter().next_back().map(|(m, c)| (m.0.as_slice(), c))
    }

    fn check_compatible(&self, other: &Form) {
        assert!(self.vars[..] == other.vars[..], "forms over different variables");
    }

    pub fn add(&self, other: &Form) -> Form {
        self.check_compatible(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "sum of forms of different degree");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Form {
            vars: self.vars.clone(),
            degree: self.degree,
            terms,
        }
    }

    pub fn neg(&self) -> Form {
        Form {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &TowerElem) -> Form {
        let mut f = Form::zero(self.vars.clone(), self.degree);
        if k.is_zero() {
            return f;
        }
        for (m, c) in &self.terms {
            add_term(&mut f.terms, m.clone(), c * k);
        }
        f
    }

    pub fn scale_q(&self, k: &BigRational) -> Form {
        self.scale(&TowerElem::from_rational(k.clone()))
    }

    pub fn mul(&self, other: &Form) -> Form {
        self.check_compatible(other);
        let mut f = Form::zero(self.vars.clone(), self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                add_term(&mut f.terms, mono_add(ma, mb), ca * cb);
            }
        }
        f
    }

    pub fn pow(&self, n: u32) -> Form {
        let mut acc = Form::constant(self.vars.clone(), TowerElem::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs<E>(&self, f: impl Fn(&TowerElem) -> Result<TowerElem, E>) -> Result<Form, E> {
        let mut out = Form::zero(self.vars.clone(), self.degree);
        for (m, c) in &self.terms {
            add_term(&mut out.terms, m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[TowerElem]) -> TowerElem {
        assert_eq!(point.len(), self.nvars());
        let mut acc = TowerElem::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * point[i].pow(e);
                }
                if t.is_zero() {
                    break;
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Form {
        let mut f = Form::zero(self.vars.clone(), self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = m.0.clone();
            n[i] -= 1;
            add_term(&mut f.terms, Mono(n), c * &TowerElem::from_int(e as i64));
        }
        f
    }

    /// Substitute a form for every variable; the images must share a ring.
    pub fn compose(&self, images: &[Form]) -> Form {
        assert_eq!(images.len(), self.nvars());
        let target = images[0].vars.clone();
        let img_deg = images[0].degree;
        let mut powers: Vec<Vec<Form>> = images
            .iter()
            .map(|g| vec![Form::constant(target.clone(), TowerElem::one()), g.clone()])
            .collect();
        let mut out = Form::zero(target.clone(), self.degree * img_deg);
        for (m, c) in &self.terms {
            let mut t = Form::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            for (tm, tc) in t.terms {
                add_term(&mut out.terms, tm, tc);
            }
        }
        out
    }

    /// `F(M x)` without an invertibility check.
    pub fn compose_matrix(&self, m: &Matrix) -> Form {
        assert_eq!(m.rows(), self.nvars());
        let images: Vec<Form> = (0..m.rows())
            .map(|r| Form::linear(self.vars.clone(), &m.row(r)))
            .collect();
        self.compose(&images)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == self.degree)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// `self = lambda * other`, returning lambda.
    pub fn proportional_to(&self, other: &Form) -> Option<TowerElem> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some(TowerElem::one())
            } else {
                None
            };
        }
        if self.terms.len() != other.terms.len() || self.degree != other.degree {
            return None;
        }
        let (m, c) = other.terms.iter().next_back()?;
        let lam = self.terms.get(m)?.checked_div(c).ok()?;
        for (m, c) in &other.terms {
            if self.terms.get(m)? != &(c * &lam) {
                return None;
            }
        }
        Some(lam)
    }

    /// Specialize all coefficients.
    pub fn specialize(&self, sp: &crate::exactfield::Specializer) -> Result<Form, FieldError> {
        self.map_coeffs(|c| sp.apply(c))
    }

    /// Union of the towers of the coefficients.
    pub fn tower(&self) -> crate::exactfield::Tower {
        let mut t = crate::exactfield::Tower::base();
        for c in self.terms.values() {
            t = t.common(c.tower()).expect("incompatible towers in form");
        }
        t
    }

    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.values().flat_map(|c| c.params()).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            let cs = c.to_string();
            let simple = !cs[1..].contains([' ', '/', '*']) || (c.as_base().is_some() && !cs.contains(' '));
            let (neg, body) = if let Some(rest) = cs.strip_prefix('-').filter(|_| simple) {
                (true, rest.to_string())
            } else {
                (false, cs.clone())
            };
            let body = if simple { body } else { format!("({})", body) };
            if !first {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", body)?;
            } else if body == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", body, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        Form::add(self, rhs)
    }
}

impl std::ops::Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        Form::sub(self, rhs)
    }
}

impl std::ops::Mul<&Form> for &Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        Form::mul(self, rhs)
    }
}

pub fn gradient(f: &Form) -> Vec<Form> {
    (0..f.nvars()).map(|i| f.partial(i)).collect()
}

/// `F(M x)`; fails on a singular matrix.
pub fn substitute_linear(f: &Form, m: &Matrix) -> Result<Form, FormError> {
    if m.det()?.is_zero() {
        return Err(FormError::SingularMatrix);
    }
    Ok(f.compose_matrix(m))
}

/// Eliminate variable `solve_var` using the linear relation `plane = 0`.
/// The result is a form in the remaining variables, in their original order.
pub fn restrict_to_hyperplane(f: &Form, plane: &Form, solve_var: usize) -> Result<Form, FormError> {
    assert_eq!(plane.degree(), 1);
    let n = f.nvars();
    let mut e = vec![0; n];
    e[solve_var] = 1;
    let a = plane.coeff(&e);
    if a.is_zero() {
        return Err(FormError::BadSolveVar);
    }
    let rest: Vec<String> = (0..n).filter(|&i| i != solve_var).map(|i| f.vars()[i].clone()).collect();
    let rest: Arc<[String]> = Arc::from(rest);
    let mut images = Vec::with_capacity(n);
    let mut solved = vec![TowerElem::zero(); n - 1];
    let mut k = 0;
    for i in 0..n {
        if i == solve_var {
            continue;
        }
        let mut ei = vec![0; n];
        ei[i] = 1;
        solved[k] = -(plane.coeff(&ei).checked_div(&a)?);
        k += 1;
    }
    k = 0;
    for i in 0..n {
        if i == solve_var {
            images.push(Form::linear(rest.clone(), &solved));
        } else {
            images.push(Form::var(rest.clone(), k));
            k += 1;
        }
    }
    Ok(f.compose(&images))
}

/// Find `R` and `lambda` with `R^2 = lambda * F`, if `F` is a square up to
/// a scalar. `R` is normalized to leading coefficient 1, so `lambda` is the
/// reciprocal of the leading coefficient of `F`.
pub fn perfect_square_root(f: &Form) -> Option<(Form, TowerElem)> {
    if f.degree() % 2 != 0 {
        return None;
    }
    if f.is_zero() {
        return Some((Form::zero(f.vars.clone(), f.degree / 2), TowerElem::one()));
    }
    let (lm, lc) = f.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
    if lm.0.iter().any(|e| e % 2 != 0) {
        return None;
    }
    let lambda = lc.inv().ok()?;
    let half = TowerElem::frac(1, 2);
    let m0 = Mono(lm.0.iter().map(|e| e / 2).collect());
    let mut root: BTreeMap<Mono, TowerElem> = BTreeMap::new();
    root.insert(m0.clone(), TowerElem::one());
    // remainder = lambda*F - R^2
    let mut rem: BTreeMap<Mono, TowerElem> = f.terms.iter().map(|(m, c)| (m.clone(), c * &lambda)).collect();
    rem.remove(&lm);
    while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        if rm.0.iter().zip(&m0.0).any(|(a, b)| a < b) {
            return None;
        }
        let qm = Mono(rm.0.iter().zip(&m0.0).map(|(a, b)| a - b).collect());
        if qm >= m0 {
            return None;
        }
        let qc = &rc * &half;
        for (m, c) in &root {
            add_term(&mut rem, mono_add(m, &qm), -(c * &qc * TowerElem::from_int(2)));
        }
        add_term(&mut rem, mono_add(&qm, &qm), -(&qc * &qc));
        root.insert(qm, qc);
    }
    let r = Form {
        vars: f.vars.clone(),
        degree: f.degree / 2,
        terms: root,
    };
    Some((r, lambda))
}

/// Exact quotient `F / G`.
pub fn divide_exact(f: &Form, g: &Form) -> Result<Form, FormError> {
    f.check_compatible(g);
    let (gm, gc) = g.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).ok_or(FormError::NotDivisible)?;
    let mut rem = f.terms.clone();
    let mut quot: BTreeMap<Mono, TowerElem> = BTreeMap::new();
    let inv = gc.inv()?;
    while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        if rm.0.iter().zip(&gm.0).any(|(a, b)| a < b) {
            return Err(FormError::NotDivisible);
        }
        let qm = Mono(rm.0.iter().zip(&gm.0).map(|(a, b)| a - b).collect());
        let qc = &rc * &inv;
        for (m, c) in &g.terms {
            add_term(&mut rem, mono_add(m, &qm), -(c * &qc));
        }
        quot.insert(qm, qc);
    }
    Ok(Form {
        vars: f.vars.clone(),
        degree: f.degree.saturating_sub(g.degree),
        terms: quot,
    })
}

/// Power sums `s_j = sum x_i^j` in four variables.
pub fn power_sum(j: u32) -> Form {
    let v = xvars();
    let mut f = Form::zero(v.clone(), j);
    for i in 0..4 {
        let mut e = vec![0; 4];
        e[i] = j;
        add_term(&mut f.terms, Mono(e), TowerElem::one());
    }
    f
}

/// `c0 s2^2 + c1 s1 s3 + c2 s1^2 s2 + c3 s1^4`.
pub fn power_sum_quartic(c: &[TowerElem; 4]) -> Form {
    let s1 = power_sum(1);
    let s2 = power_sum(2);
    let s3 = power_sum(3);
    let basis = power_sum_basis_from(&s1, &s2, &s3);
    let mut acc = Form::zero(xvars(), 4);
    for (k, b) in basis.iter().enumerate() {
        acc = acc.add(&b.scale(&c[k]));
    }
    acc
}

/// The forms `s2^2, s1 s3, s1^2 s2, s1^4`.
pub fn power_sum_basis() -> [Form; 4] {
    power_sum_basis_from(&power_sum(1), &power_sum(2), &power_sum(3))
}

fn power_sum_basis_from(s1: &Form, s2: &Form, s3: &Form) -> [Form; 4] {
    [s2.mul(s2), s1.mul(s3), s1.mul(s1).mul(s2), s1.pow(4)]
}

/// All monomials of a degree in `n` variables, in increasing grlex order.
pub fn monomials(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| Mono(a.clone()).cmp(&Mono(b.clone())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: usize) -> Form {
        Form::var(xvars(), i)
    }

    fn c(n: i64) -> TowerElem {
        TowerElem::from_int(n)
    }

    fn fermat() -> Form {
        (0..4).fold(Form::zero(xvars(), 4), |acc, i| acc.add(&x(i).pow(4)))
    }

    #[test]
    fn derivative_and_smooth_point() {
        let f = x(0).pow(2).mul(&x(1).pow(2));
        assert_eq!(f.partial(0), x(0).mul(&x(1).pow(2)).scale(&c(2)));
        let g = gradient(&fermat());
        let p = [c(1), c(0), c(0), c(0)];
        let vals: Vec<TowerElem> = g.iter().map(|d| d.eval(&p)).collect();
        assert_eq!(vals, vec![c(4), c(0), c(0), c(0)]);
    }

    #[test]
    fn linear_substitution_examples() {
        let f = fermat();
        assert_eq!(substitute_linear(&f, &Matrix::identity(4)).unwrap(), f);
        let swap = Matrix::from_ints(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(substitute_linear(&f, &swap).unwrap(), f);
        let sing = Matrix::from_ints(&[&[1, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(substitute_linear(&f, &sing), Err(FormError::SingularMatrix));
    }

    #[test]
    fn restriction_examples() {
        let r = restrict_to_hyperplane(&fermat(), &x(0), 0).unwrap();
        let v3: Arc<[String]> = Arc::from(vec!["x1".to_string(), "x2".to_string(), "x3".to_string()]);
        let expect = (0..3).fold(Form::zero(v3.clone(), 4), |acc, i| acc.add(&Form::var(v3.clone(), i).pow(4)));
        assert_eq!(r, expect);
        // (sum x_i^2)^2 + x0x1x2x3 restricted to x0 = 0 is a square
        let s2 = power_sum(2);
        let q = s2.mul(&s2).add(&x(0).mul(&x(1)).mul(&x(2)).mul(&x(3)));
        let r = restrict_to_hyperplane(&q, &x(0), 0).unwrap();
        let (root, lam) = perfect_square_root(&r).unwrap();
        assert!(lam.is_one());
        let sq = (0..3).fold(Form::zero(v3.clone(), 2), |acc, i| acc.add(&Form::var(v3.clone(), i).pow(2)));
        assert_eq!(root, sq);
        assert_eq!(restrict_to_hyperplane(&q, &x(1), 0), Err(FormError::BadSolveVar));
    }

    #[test]
    fn power_sum_family_restricts_to_square() {
        let q = power_sum_quartic(&[c(1), c(-2), c(1), c(0)]);
        let plane = power_sum(1);
        let r = restrict_to_hyperplane(&q, &plane, 0).unwrap();
        assert!(perfect_square_root(&r).is_some());
        assert_eq!(power_sum_quartic(&[c(0), c(0), c(0), c(1)]), power_sum(1).pow(4));
        assert_eq!(power_sum_quartic(&[c(1), c(0), c(0), c(0)]), power_sum(2).pow(2));
    }

    #[test]
    fn square_root_examples() {
        let f = x(0).pow(4).add(&x(1).pow(4));
        assert!(perfect_square_root(&f).is_none());
        let r = x(0).pow(2).add(&x(1).pow(2)).add(&x(2).pow(2));
        let (root, lam) = perfect_square_root(&r.mul(&r).scale(&c(9))).unwrap();
        assert_eq!(root, r);
        assert_eq!(lam, TowerElem::frac(1, 9));
    }

    #[test]
    fn exact_division_examples() {
        let f = x(0).pow(2).mul(&x(1).pow(2));
        assert_eq!(divide_exact(&f, &x(0).pow(2)).unwrap(), x(1).pow(2));
        assert_eq!(divide_exact(&x(0).pow(4), &x(1)), Err(FormError::NotDivisible));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(4, 4).len(), 35);
        assert_eq!(monomials(3, 2).len(), 6);
    }

    fn form_strategy(degree: u32) -> impl Strategy<Value = Form> {
        let mons = monomials(4, degree);
        let n = mons.len();
        proptest::collection::vec(-3i64..=3, n).prop_map(move |cs| {
            Form::from_terms(xvars(), degree, mons.iter().cloned().zip(cs.into_iter().map(TowerElem::from_int)))
        })
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-2i64..=2, 16).prop_map(|v| {
            Matrix::from_rows(v.chunks(4).map(|r| r.iter().map(|&x| TowerElem::from_int(x)).collect()).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn euler_identity(f in form_strategy(4)) {
            let g = gradient(&f);
            let mut acc = Form::zero(xvars(), 4);
            for (i, d) in g.iter().enumerate() {
                acc = acc.add(&x(i).mul(d));
            }
            prop_assert_eq!(acc, f.scale(&c(4)));
        }

        #[test]
        fn square_root_roundtrip(r in form_strategy(2)) {
            prop_assume!(!r.is_zero());
            let (root, lam) = perfect_square_root(&r.mul(&r)).unwrap();
            prop_assert!(root.proportional_to(&r).is_some());
            prop_assert_eq!(root.mul(&root), r.mul(&r).scale(&lam));
        }

        #[test]
        fn exact_division_roundtrip(f in form_strategy(2), g in form_strategy(2)) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!(divide_exact(&f.mul(&g), &g).unwrap(), f);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn substitution_respects_products(f in form_strategy(2), g in form_strategy(1), m in matrix_strategy()) {
            prop_assert_eq!(f.mul(&g).compose_matrix(&m), f.compose_matrix(&m).mul(&g.compose_matrix(&m)));
        }

        #[test]
        fn substitution_is_functorial(f in form_strategy(2), m in matrix_strategy(), n in matrix_strategy()) {
            prop_assert_eq!(f.compose_matrix(&m.mul(&n)), f.compose_matrix(&m).compose_matrix(&n));
        }
    }
}
