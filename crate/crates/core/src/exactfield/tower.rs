//! Towers of formal quadratic radical extensions over Q(params).
//!
//! An element over a tower with `k` levels is a vector of `2^k` rational
//! functions; bit `j` of an index marks the presence of the level-`j`
//! radical in the corresponding basis product.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::func::ParamFunction;
use super::FieldError;

pub struct Level {
    parent: Tower,
    name: String,
    radicand: TowerElem,
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}=sqrt({})", self.name, self.radicand)
    }
}

/// A tower of quadratic radical extensions; cheap to clone.
#[derive(Clone, Default)]
pub struct Tower(Option<Arc<Level>>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.levels().iter()).finish()
    }
}

impl Tower {
    pub fn base() -> Self {
        Tower(None)
    }

    pub fn depth(&self) -> usize {
        let mut d = 0;
        let mut cur = &self.0;
        while let Some(l) = cur {
            d += 1;
            cur = &l.parent.0;
        }
        d
    }

    /// Levels from the bottom up.
    pub fn levels(&self) -> Vec<Arc<Level>> {
        let mut out = Vec::new();
        let mut cur = self.0.clone();
        while let Some(l) = cur {
            cur = l.parent.0.clone();
            out.push(l);
        }
        out.reverse();
        out
    }

    pub fn names(&self) -> Vec<String> {
        self.levels().iter().map(|l| l.name.clone()).collect()
    }

    pub fn level_index(&self, name: &str) -> Option<usize> {
        self.levels().iter().position(|l| l.name == name)
    }

    pub fn radicand(&self, k: usize) -> TowerElem {
        self.levels()[k].radicand.clone()
    }

    pub fn same(&self, other: &Tower) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    fn ancestor(&self, depth: usize) -> Tower {
        let mut d = self.depth();
        let mut cur = self.clone();
        while d > depth {
            cur = cur.0.as_ref().unwrap().parent.clone();
            d -= 1;
        }
        cur
    }

    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        let d = self.depth();
        d <= other.depth() && other.ancestor(d).same(self)
    }

    pub fn parent(&self) -> Option<Tower> {
        self.0.as_ref().map(|l| l.parent.clone())
    }

    /// Adjoin `sqrt(radicand)` as a new top level.
    pub fn adjoin(&self, radicand: &TowerElem, name: &str) -> Result<Tower, FieldError> {
        let r = radicand.lift(self)?;
        if r.is_zero() {
            return Err(FieldError::ZeroRadicand(name.to_string()));
        }
        Ok(Tower(Some(Arc::new(Level {
            parent: self.clone(),
            name: name.to_string(),
            radicand: r,
        }))))
    }

    /// The deeper of two towers when one extends the other.
    pub fn common(&self, other: &Tower) -> Result<Tower, FieldError> {
        if self.is_prefix_of(other) {
            Ok(other.clone())
        } else if other.is_prefix_of(self) {
            Ok(self.clone())
        } else {
            Err(FieldError::IncompatibleTowers)
        }
    }

    /// Principal complex values of the radicals under the numeric embedding.
    pub fn radical_values(&self, params: &dyn Fn(&str) -> Complex64) -> Vec<Complex64> {
        let mut vals: Vec<Complex64> = Vec::new();
        for l in self.levels() {
            let rho = l.radicand.embed_with(&vals, params);
            vals.push(principal_sqrt(rho));
        }
        vals
    }
}

pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Complex64::new(z.re, im).sqrt()
}

#[derive(Clone)]
pub struct TowerElem {
    tower: Tower,
    coeffs: Vec<ParamFunction>,
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl TowerElem {
    pub fn zero() -> Self {
        Self::from_func(ParamFunction::zero())
    }

    pub fn one() -> Self {
        Self::from_func(ParamFunction::one())
    }

    pub fn from_func(f: ParamFunction) -> Self {
        TowerElem {
            tower: Tower::base(),
            coeffs: vec![f],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_func(ParamFunction::from_int(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_func(ParamFunction::from_rational(q))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(name: &str) -> Self {
        Self::from_func(ParamFunction::param(name))
    }

    /// The radical of level `k` of `tower`.
    pub fn radical(tower: &Tower, k: usize) -> Self {
        let d = tower.depth();
        assert!(k < d, "radical level out of range");
        let mut coeffs = vec![ParamFunction::zero(); 1 << d];
        coeffs[1 << k] = ParamFunction::one();
        TowerElem {
            tower: tower.clone(),
            coeffs,
        }
    }

    pub fn from_coeffs(tower: &Tower, coeffs: Vec<ParamFunction>) -> Self {
        assert_eq!(coeffs.len(), 1 << tower.depth());
        TowerElem {
            tower: tower.clone(),
            coeffs,
        }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[ParamFunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The element as a rational function if it has no radical part.
    pub fn as_base(&self) -> Option<&ParamFunction> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_base().and_then(|f| f.as_rational())
    }

    /// True when no symbolic parameter occurs in any coefficient.
    pub fn is_numeric(&self) -> bool {
        self.coeffs.iter().all(|c| c.vars().is_empty())
    }

    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> = self.coeffs.iter().flat_map(|c| c.vars()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn lift(&self, tower: &Tower) -> Result<TowerElem, FieldError> {
        if self.tower.same(tower) {
            return Ok(self.clone());
        }
        if !self.tower.is_prefix_of(tower) {
            return Err(FieldError::IncompatibleTowers);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(1 << tower.depth(), ParamFunction::zero());
        Ok(TowerElem {
            tower: tower.clone(),
            coeffs,
        })
    }

    fn unify(&self, other: &TowerElem) -> (Tower, Vec<ParamFunction>, Vec<ParamFunction>) {
        if self.tower.same(&other.tower) {
            return (self.tower.clone(), self.coeffs.clone(), other.coeffs.clone());
        }
        let t = self
            .tower
            .common(&other.tower)
            .expect("arithmetic between elements of incompatible towers");
        let a = self.lift(&t).unwrap().coeffs;
        let b = other.lift(&t).unwrap().coeffs;
        (t, a, b)
    }

    pub fn add_ref(&self, other: &TowerElem) -> TowerElem {
        if self.tower.same(&other.tower) {
            return TowerElem {
                tower: self.tower.clone(),
                coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
            };
        }
        let (t, a, b) = self.unify(other);
        TowerElem {
            tower: t,
            coeffs: a.iter().zip(&b).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn neg_ref(&self) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub_ref(&self, other: &TowerElem) -> TowerElem {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &TowerElem) -> TowerElem {
        if let Some(a) = self.as_base() {
            if let Some(b) = other.as_base() {
                let t = self.tower.common(&other.tower).expect("incompatible towers");
                let mut coeffs = vec![ParamFunction::zero(); 1 << t.depth()];
                coeffs[0] = a.mul(b);
                return TowerElem { tower: t, coeffs };
            }
            return other.scale_func(a).lift_into(&self.tower);
        }
        if let Some(b) = other.as_base() {
            return self.scale_func(b).lift_into(&other.tower);
        }
        let (t, a, b) = self.unify(other);
        let levels = t.levels();
        TowerElem {
            coeffs: mul_coeffs(&levels, &a, &b),
            tower: t,
        }
    }

    fn lift_into(self, t: &Tower) -> TowerElem {
        if t.depth() > self.tower.depth() {
            self.lift(t).expect("incompatible towers")
        } else {
            self
        }
    }

    pub fn scale_func(&self, k: &ParamFunction) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(k)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn square(&self) -> TowerElem {
        self.mul_ref(self)
    }

    pub fn pow(&self, n: u32) -> TowerElem {
        let mut acc = TowerElem::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc.lift_into(&self.tower)
    }

    /// Multiplicative inverse by iterated conjugate norms.
    pub fn inv(&self) -> Result<TowerElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(b) = self.as_base() {
            let mut coeffs = vec![ParamFunction::zero(); self.coeffs.len()];
            coeffs[0] = b.inv().unwrap();
            return Ok(TowerElem {
                tower: self.tower.clone(),
                coeffs,
            });
        }
        let levels = self.tower.levels();
        let coeffs = inv_coeffs(&levels, &self.coeffs)?;
        Ok(TowerElem {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    pub fn checked_div(&self, other: &TowerElem) -> Result<TowerElem, FieldError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Total number of polynomial terms in the coefficients: a cheap
    /// measure of how bulky the element is.
    pub fn size(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.numer().num_terms() + c.denom().num_terms())
            .sum()
    }

    /// A square root inside the current tower, if one exists.
    pub fn sqrt_in_tower(&self) -> Option<TowerElem> {
        let levels = self.tower.levels();
        let coeffs = sqrt_coeffs(&levels, &self.coeffs)?;
        Some(TowerElem {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    /// The square root in the current tower with the principal sign.
    pub fn principal_sqrt_in_tower(&self) -> Option<TowerElem> {
        self.sqrt_in_tower().map(principal)
    }

    /// Conjugate with respect to the top `level` radical: flips its sign.
    pub fn conjugate(&self, level: usize) -> TowerElem {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i >> level & 1 == 1 { c.neg() } else { c.clone() })
            .collect();
        TowerElem {
            tower: self.tower.clone(),
            coeffs,
        }
    }

    fn embed_with(&self, radicals: &[Complex64], params: &dyn Fn(&str) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut v = c.eval_f64(params);
            for (k, r) in radicals.iter().enumerate() {
                if i >> k & 1 == 1 {
                    v *= r;
                }
            }
            acc += v;
        }
        acc
    }

    /// Numeric embedding: parameters through `params`, radicals as principal
    /// square roots of their embedded radicands.
    pub fn embed(&self, params: &dyn Fn(&str) -> Complex64) -> Complex64 {
        let radicals = self.tower.radical_values(params);
        self.embed_with(&radicals, params)
    }

    /// Embedding of a parameter-free element.
    pub fn to_complex(&self) -> Complex64 {
        self.embed(&|_| Complex64::new(f64::NAN, f64::NAN))
    }

    fn trimmed(&self) -> &[ParamFunction] {
        let mut n = self.coeffs.len();
        while n > 1 && self.coeffs[n - 1].is_zero() {
            n -= 1;
        }
        &self.coeffs[..n]
    }
}

fn split(v: &[ParamFunction]) -> (&[ParamFunction], &[ParamFunction]) {
    v.split_at(v.len() / 2)
}

fn is_zero_vec(v: &[ParamFunction]) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn add_vec(a: &[ParamFunction], b: &[ParamFunction]) -> Vec<ParamFunction> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_vec(a: &[ParamFunction], b: &[ParamFunction]) -> Vec<ParamFunction> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn neg_vec(a: &[ParamFunction]) -> Vec<ParamFunction> {
    a.iter().map(|x| x.neg()).collect()
}

fn mul_coeffs(levels: &[Arc<Level>], a: &[ParamFunction], b: &[ParamFunction]) -> Vec<ParamFunction> {
    let k = levels.len();
    if k == 0 {
        return vec![a[0].mul(&b[0])];
    }
    let (a0, a1) = split(a);
    let (b0, b1) = split(b);
    let lower = &levels[..k - 1];
    let a1z = is_zero_vec(a1);
    let b1z = is_zero_vec(b1);
    let mut out = Vec::with_capacity(a.len());
    if a1z && b1z {
        out.extend(mul_coeffs(lower, a0, b0));
        out.extend(std::iter::repeat(ParamFunction::zero()).take(a0.len()));
        return out;
    }
    if a1z {
        out.extend(mul_coeffs(lower, a0, b0));
        out.extend(mul_coeffs(lower, a0, b1));
        return out;
    }
    if b1z {
        out.extend(mul_coeffs(lower, a0, b0));
        out.extend(mul_coeffs(lower, a1, b0));
        return out;
    }
    let rho = &levels[k - 1].radicand.coeffs;
    let ac = mul_coeffs(lower, a0, b0);
    let bd = mul_coeffs(lower, a1, b1);
    let bd_rho = mul_coeffs(lower, &bd, rho);
    let cross = mul_coeffs(lower, &add_vec(a0, a1), &add_vec(b0, b1));
    let mixed = sub_vec(&sub_vec(&cross, &ac), &bd);
    out.extend(add_vec(&ac, &bd_rho));
    out.extend(mixed);
    out
}

fn inv_coeffs(levels: &[Arc<Level>], a: &[ParamFunction]) -> Result<Vec<ParamFunction>, FieldError> {
    let k = levels.len();
    if k == 0 {
        return a[0].inv().map(|x| vec![x]).ok_or(FieldError::DivisionByZero);
    }
    let (a0, a1) = split(a);
    let lower = &levels[..k - 1];
    if is_zero_vec(a1) {
        let mut out = inv_coeffs(lower, a0)?;
        out.extend(std::iter::repeat(ParamFunction::zero()).take(a0.len()));
        return Ok(out);
    }
    let rho = &levels[k - 1].radicand.coeffs;
    let n = sub_vec(
        &mul_coeffs(lower, a0, a0),
        &mul_coeffs(lower, &mul_coeffs(lower, a1, a1), rho),
    );
    if is_zero_vec(&n) {
        return Err(FieldError::ZeroDivisor(levels[k - 1].name.clone()));
    }
    let ninv = inv_coeffs(lower, &n).map_err(|e| match e {
        FieldError::DivisionByZero => FieldError::ZeroDivisor(levels[k - 1].name.clone()),
        other => other,
    })?;
    let mut out = mul_coeffs(lower, a0, &ninv);
    out.extend(mul_coeffs(lower, &neg_vec(a1), &ninv));
    Ok(out)
}

fn sqrt_coeffs(levels: &[Arc<Level>], a: &[ParamFunction]) -> Option<Vec<ParamFunction>> {
    let k = levels.len();
    if k == 0 {
        return a[0].sqrt().map(|s| vec![s]);
    }
    let (a0, a1) = split(a);
    let lower = &levels[..k - 1];
    let rho = &levels[k - 1].radicand.coeffs;
    let zeros = || vec![ParamFunction::zero(); a0.len()];
    if is_zero_vec(a1) {
        if let Some(c) = sqrt_coeffs(lower, a0) {
            let mut out = c;
            out.extend(zeros());
            return Some(out);
        }
        // a0 = d^2 * rho
        let q = mul_coeffs(lower, a0, &inv_coeffs(lower, rho).ok()?);
        let d = sqrt_coeffs(lower, &q)?;
        let mut out = zeros();
        out.extend(d);
        return Some(out);
    }
    let norm = sub_vec(
        &mul_coeffs(lower, a0, a0),
        &mul_coeffs(lower, &mul_coeffs(lower, a1, a1), rho),
    );
    let n = sqrt_coeffs(lower, &norm)?;
    let half = BigRational::new(1.into(), 2.into());
    for cand in [add_vec(a0, &n), sub_vec(a0, &n)] {
        let c2: Vec<ParamFunction> = cand.iter().map(|x| x.scale(&half)).collect();
        if is_zero_vec(&c2) {
            continue;
        }
        if let Some(c) = sqrt_coeffs(lower, &c2) {
            let two_c: Vec<ParamFunction> = c.iter().map(|x| x.add(x)).collect();
            let Ok(inv) = inv_coeffs(lower, &two_c) else { continue };
            let d = mul_coeffs(lower, a1, &inv);
            let mut out = c;
            out.extend(d);
            return Some(out);
        }
    }
    None
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        if self.tower.same(&other.tower) {
            return self.coeffs == other.coeffs;
        }
        self.trimmed() == other.trimmed()
            && (self.tower.is_prefix_of(&other.tower) || other.tower.is_prefix_of(&self.tower))
    }
}

impl Eq for TowerElem {}

impl Hash for TowerElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.tower.names();
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let rad: Vec<&str> = names
                .iter()
                .enumerate()
                .filter(|(k, _)| i >> k & 1 == 1)
                .map(|(_, n)| n.as_str())
                .collect();
            let cs = c.to_string();
            if rad.is_empty() {
                parts.push(cs);
            } else if c.is_one() {
                parts.push(rad.join("*"));
            } else if cs == "-1" {
                parts.push(format!("-{}", rad.join("*")));
            } else {
                let wrapped = if c.is_polynomial() && c.numer().num_terms() == 1 {
                    cs
                } else {
                    format!("({})", cs)
                };
                parts.push(format!("{}*{}", wrapped, rad.join("*")));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        write!(f, "{}", s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: &TowerElem) -> TowerElem {
                self.$f(rhs)
            }
        }
        impl std::ops::$tr<TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: TowerElem) -> TowerElem {
                self.$f(&rhs)
            }
        }
        impl std::ops::$tr<&TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: &TowerElem) -> TowerElem {
                self.$f(rhs)
            }
        }
        impl std::ops::$tr<TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: TowerElem) -> TowerElem {
                self.$f(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl std::ops::Neg for TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        self.neg_ref()
    }
}

impl std::ops::Neg for &TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        self.neg_ref()
    }
}

/// Division that panics on a zero divisor; use [`TowerElem::checked_div`]
/// where failure is expected.
impl std::ops::Div<&TowerElem> for &TowerElem {
    type Output = TowerElem;
    fn div(self, rhs: &TowerElem) -> TowerElem {
        self.checked_div(rhs).expect("division in tower")
    }
}

impl std::ops::Div<TowerElem> for TowerElem {
    type Output = TowerElem;
    fn div(self, rhs: TowerElem) -> TowerElem {
        self.checked_div(&rhs).expect("division in tower")
    }
}

/// How radicals with a square root in the target are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CollapsePolicy {
    /// Replace the radical by the principal root found in the target.
    #[default]
    Principal,
    /// Always keep a formal level, even for perfect squares.
    KeepRadicals,
}

/// Homomorphism sending parameters to tower elements. Radicals whose
/// specialized radicand has a square root in the target collapse to the
/// principal root; the others become new levels of the target tower.
#[derive(Clone, Debug)]
pub struct Specializer {
    policy: CollapsePolicy,
    assignment: BTreeMap<String, TowerElem>,
    target: Tower,
    images: Vec<TowerElem>,
    collapsed: Vec<bool>,
}

impl Specializer {
    pub fn new(source: &Tower, assignment: &BTreeMap<String, TowerElem>) -> Result<Self, FieldError> {
        Self::with_target(source, assignment, &Tower::base())
    }

    pub fn with_target(
        source: &Tower,
        assignment: &BTreeMap<String, TowerElem>,
        target: &Tower,
    ) -> Result<Self, FieldError> {
        Self::with_policy(source, assignment, target, CollapsePolicy::Principal)
    }

    pub fn with_policy(
        source: &Tower,
        assignment: &BTreeMap<String, TowerElem>,
        target: &Tower,
        policy: CollapsePolicy,
    ) -> Result<Self, FieldError> {
        let mut t = target.clone();
        for v in assignment.values() {
            t = t.common(v.tower())?;
        }
        let mut sp = Specializer {
            policy,
            assignment: assignment
                .iter()
                .map(|(k, v)| (k.clone(), v.lift(&t).unwrap()))
                .collect(),
            target: t,
            images: Vec::new(),
            collapsed: Vec::new(),
        };
        for level in source.levels() {
            let rho = sp.apply_partial(&level.radicand)?;
            if rho.is_zero() {
                return Err(FieldError::InconsistentCollapse(level.name.clone()));
            }
            let root = match sp.policy {
                CollapsePolicy::Principal => rho.sqrt_in_tower(),
                CollapsePolicy::KeepRadicals => None,
            };
            match root {
                Some(s) => {
                    sp.images.push(principal(s));
                    sp.collapsed.push(true);
                }
                None => {
                    let name = sp.fresh_name(&level.name);
                    sp.target = sp.target.adjoin(&rho, &name)?;
                    let k = sp.target.depth() - 1;
                    sp.images.push(TowerElem::radical(&sp.target, k));
                    sp.collapsed.push(false);
                }
            }
        }
        Ok(sp)
    }

    fn fresh_name(&self, base: &str) -> String {
        let names = self.target.names();
        if !names.iter().any(|n| n == base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{}_{}", base, i))
            .find(|n| !names.contains(n))
            .unwrap()
    }

    pub fn target(&self) -> &Tower {
        &self.target
    }

    /// Which source levels collapsed into the target tower.
    pub fn collapsed(&self) -> &[bool] {
        &self.collapsed
    }

    fn eval_func(&self, f: &ParamFunction) -> Result<TowerElem, FieldError> {
        if !f.vars().iter().any(|v| self.assignment.contains_key(v)) {
            return TowerElem::from_func(f.clone()).lift(&self.target);
        }
        let lookup = |v: &str| -> TowerElem {
            self.assignment
                .get(v)
                .cloned()
                .unwrap_or_else(|| TowerElem::param(v))
        };
        let num = f.numer().eval_with(
            lookup,
            TowerElem::zero(),
            TowerElem::one(),
            |q| TowerElem::from_rational(q.clone()),
        );
        let den = f.denom().eval_with(
            lookup,
            TowerElem::zero(),
            TowerElem::one(),
            |q| TowerElem::from_rational(q.clone()),
        );
        if den.is_zero() {
            let culprits: Vec<String> = f
                .denom()
                .vars()
                .iter()
                .filter_map(|v| self.assignment.get(v).map(|x| format!("{}={}", v, x)))
                .collect();
            return Err(FieldError::DenominatorVanishes(format!(
                "{} at {}",
                f.denom(),
                culprits.join(", ")
            )));
        }
        Ok(num.checked_div(&den)?.lift(&self.target).unwrap())
    }

    fn apply_partial(&self, x: &TowerElem) -> Result<TowerElem, FieldError> {
        let mut acc = TowerElem::zero().lift(&self.target).unwrap();
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = self.eval_func(c)?;
            for (k, img) in self.images.iter().enumerate() {
                if i >> k & 1 == 1 {
                    term = term.mul_ref(img);
                }
            }
            acc = acc.add_ref(&term);
        }
        Ok(acc)
    }

    pub fn apply(&self, x: &TowerElem) -> Result<TowerElem, FieldError> {
        let d = x.tower.depth();
        if d > self.images.len() {
            return Err(FieldError::IncompatibleTowers);
        }
        self.apply_partial(x)
    }
}

/// Choose the sign of a square root: positive real part, or positive
/// imaginary part on the imaginary axis. Symbolic roots get a positive
/// leading coefficient in their first nonzero component.
fn principal(s: TowerElem) -> TowerElem {
    if s.is_numeric() {
        let z = s.to_complex();
        let scale = z.norm().max(1e-300);
        let flip = if z.re.abs() > 1e-12 * scale {
            z.re < 0.0
        } else {
            z.im < 0.0
        };
        if flip {
            return s.neg_ref();
        }
        return s;
    }
    let first = s.coeffs.iter().find(|c| !c.is_zero());
    match first {
        Some(c) if num_traits::Signed::is_negative(&c.numer().leading_coeff()) => s.neg_ref(),
        _ => s,
    }
}
