//! Exact arithmetic: rationals, rational functions in named parameters and
//! towers of quadratic radical extensions.

mod func;
mod poly;
mod tower;

use std::collections::BTreeMap;

pub use func::ParamFunction;
pub use num_rational::BigRational as Rational;
pub use poly::{gcd, rational_sqrt, Mono, ParamPoly};
pub use tower::{principal_sqrt, CollapsePolicy, Specializer, Tower, TowerElem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero conjugate norm at level '{0}': the extension is reducible, restructure the tower")]
    ZeroDivisor(String),
    #[error("radicand of '{0}' is zero")]
    ZeroRadicand(String),
    #[error("denominator vanishes: {0}")]
    DenominatorVanishes(String),
    #[error("specialized radicand of '{0}' is zero")]
    InconsistentCollapse(String),
    #[error("elements belong to incompatible towers")]
    IncompatibleTowers,
}

/// Extend `spec` by `sqrt(radicand)`.
pub fn tower_adjoin(spec: &Tower, radicand: &TowerElem, name: &str) -> Result<Tower, FieldError> {
    spec.adjoin(radicand, name)
}

/// Principal square root of `x`, adjoining a new radical named `name` to
/// `tower` when none exists there. Returns the root in the (possibly
/// extended) tower.
pub fn sqrt_or_adjoin(tower: &mut Tower, x: &TowerElem, name: &str) -> Result<TowerElem, FieldError> {
    let t = tower.common(x.tower())?;
    let x = x.lift(&t)?;
    if let Some(r) = x.principal_sqrt_in_tower() {
        *tower = t;
        return Ok(r);
    }
    let ext = t.adjoin(&x, name)?;
    let r = TowerElem::radical(&ext, ext.depth() - 1);
    *tower = ext;
    Ok(r)
}

pub fn divide(x: &TowerElem, y: &TowerElem) -> Result<TowerElem, FieldError> {
    x.checked_div(y)
}

/// Specialize parameters to exact values (rationals or tower elements).
pub fn specialize(
    x: &TowerElem,
    assignment: &BTreeMap<String, TowerElem>,
    policy: CollapsePolicy,
) -> Result<TowerElem, FieldError> {
    let sp = Specializer::with_policy(x.tower(), assignment, &Tower::base(), policy)?;
    sp.apply(x)
}

/// Parse a rational literal such as `-3/4` or `7`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if num_traits::Zero::is_zero(&d) {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: num_bigint::BigInt = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}
