//! Multiplicity analysis of binary forms in `p, q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{pqvars, Form};
use crate::exactfield::{FieldError, TowerElem};

/// A factor of a binary form with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryFactor {
    pub form: Form,
    pub multiplicity: u32,
}

impl BinaryFactor {
    /// Root `(p:q)` of a linear factor.
    pub fn root(&self) -> Option<(TowerElem, TowerElem)> {
        if self.form.degree() != 1 {
            return None;
        }
        let a = self.form.coeff(&[1, 0]);
        let b = self.form.coeff(&[0, 1]);
        Some((-b, a))
    }
}

#[derive(Debug, Clone)]
pub struct BinaryFactorization {
    pub scalar: TowerElem,
    pub factors: Vec<BinaryFactor>,
    /// The product of the factors times the scalar reproduces the input.
    pub certified: bool,
}

impl BinaryFactorization {
    /// Number of distinct roots of multiplicity exactly `m`.
    pub fn roots_of_multiplicity(&self, m: u32) -> u32 {
        self.factors
            .iter()
            .filter(|f| f.multiplicity == m)
            .map(|f| f.form.degree())
            .sum()
    }

    pub fn double_roots(&self) -> u32 {
        self.roots_of_multiplicity(2)
    }

    /// Linear factors as roots `(p:q)` with multiplicity.
    pub fn linear_roots(&self) -> Vec<((TowerElem, TowerElem), u32)> {
        self.factors
            .iter()
            .filter_map(|f| f.root().map(|r| (r, f.multiplicity)))
            .collect()
    }

    pub fn product(&self) -> Form {
        let mut acc = Form::constant(pqvars(), self.scalar.clone());
        for f in &self.factors {
            acc = acc.mul(&f.form.pow(f.multiplicity));
        }
        acc
    }
}

type Upoly = Vec<TowerElem>;

fn trim(mut a: Upoly) -> Upoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn deg(a: &Upoly) -> usize {
    a.len().saturating_sub(1)
}

fn monic(a: &Upoly) -> Result<Upoly, FieldError> {
    let inv = a.last().ok_or(FieldError::DivisionByZero)?.inv()?;
    Ok(a.iter().map(|c| c * &inv).collect())
}

fn divrem(a: &Upoly, b: &Upoly) -> Result<(Upoly, Upoly), FieldError> {
    let b = trim(b.clone());
    let lead_inv = b.last().ok_or(FieldError::DivisionByZero)?.inv()?;
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![TowerElem::zero(); r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(bc * &c);
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    Ok((trim(q), r))
}

fn ugcd(a: &Upoly, b: &Upoly) -> Result<Upoly, FieldError> {
    let mut a = trim(a.clone());
    let mut b = trim(b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b)?;
        a = b;
        b = r;
    }
    if a.is_empty() {
        return Ok(a);
    }
    monic(&a)
}

fn derivative(a: &Upoly) -> Upoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &TowerElem::from_int(i as i64))
            .collect(),
    )
}

fn eval(a: &Upoly, x: &TowerElem) -> TowerElem {
    a.iter().rev().fold(TowerElem::zero(), |acc, c| acc * x + c)
}

fn usub(a: &Upoly, b: &Upoly) -> Upoly {
    let zero = TowerElem::zero();
    trim(
        (0..a.len().max(b.len()))
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

/// Yun's algorithm: monic squarefree parts `a_1, a_2, ...` with
/// `a = lc * prod a_i^i`.
fn yun(a: &Upoly) -> Result<Vec<Upoly>, FieldError> {
    let mut out = Vec::new();
    if deg(a) == 0 {
        return Ok(out);
    }
    let da = derivative(a);
    let b = ugcd(a, &da)?;
    let mut c = divrem(a, &b)?.0;
    let mut d = usub(&divrem(&da, &b)?.0, &derivative(&c));
    while deg(&c) > 0 {
        let ai = ugcd(&c, &d)?;
        c = divrem(&c, &ai)?.0;
        d = usub(&divrem(&d, &ai)?.0, &derivative(&c));
        out.push(ai);
    }
    Ok(out)
}

fn small_divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64()?;
    if n == 0 || n > 1_000_000 {
        return None;
    }
    Some((1..=n).filter(|d| n % d == 0).collect())
}

/// Candidate rational roots of a polynomial with rational coefficients.
fn rational_root_candidates(a: &Upoly) -> Vec<TowerElem> {
    let qs: Option<Vec<BigRational>> = a.iter().map(|c| c.as_rational()).collect();
    let Some(qs) = qs else { return Vec::new() };
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let lo = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let (Some(ps), Some(ds)) = (small_divisors(&ints[lo]), small_divisors(ints.last().unwrap())) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for p in &ps {
        for d in &ds {
            if p.gcd(d) == 1 {
                out.push(TowerElem::frac(*p, *d));
                out.push(TowerElem::frac(-*p, *d));
            }
        }
    }
    out
}

/// Split a monic squarefree polynomial into linear factors where possible.
/// Returns the roots found and the unsplit remainder.
fn split(a: &Upoly, hints: &[TowerElem]) -> Result<(Vec<TowerElem>, Upoly), FieldError> {
    let mut rest = a.clone();
    let mut roots: Vec<TowerElem> = Vec::new();
    let try_root = |rest: &mut Upoly, r: &TowerElem, roots: &mut Vec<TowerElem>| -> Result<(), FieldError> {
        if deg(rest) >= 1 && !roots.contains(r) && eval(rest, r).is_zero() {
            *rest = divrem(rest, &vec![-r, TowerElem::one()])?.0;
            roots.push(r.clone());
        }
        Ok(())
    };
    let simple: Vec<TowerElem> = [0, 1, -1, 2, -2].iter().map(|&n| TowerElem::from_int(n)).collect();
    for r in hints.iter().chain(simple.iter()) {
        try_root(&mut rest, r, &mut roots)?;
    }
    if deg(&rest) > 2 {
        for r in rational_root_candidates(&rest) {
            try_root(&mut rest, &r, &mut roots)?;
        }
    }
    if deg(&rest) == 1 {
        roots.push(-&rest[0]);
        rest = vec![TowerElem::one()];
    } else if deg(&rest) == 2 {
        // monic: x^2 + b x + c
        let b = &rest[1];
        let c = &rest[0];
        let disc = b * b - TowerElem::from_int(4) * c;
        if let Some(s) = disc.sqrt_in_tower() {
            let half = TowerElem::frac(1, 2);
            roots.push((&s - b) * &half);
            roots.push((-&s - b) * &half);
            rest = vec![TowerElem::one()];
        }
    }
    Ok((roots, rest))
}

fn linear_form(root: &TowerElem) -> Form {
    Form::from_terms(pqvars(), 1, [(vec![1, 0], TowerElem::one()), (vec![0, 1], -root)])
}

fn homogenize(a: &Upoly) -> Form {
    let d = deg(a) as u32;
    Form::from_terms(pqvars(), d, a.iter().enumerate().map(|(i, c)| (vec![i as u32, d - i as u32], c.clone())))
}

/// Squarefree decomposition of a binary form, with linear and quadratic
/// factors split over the active tower. `hints` are candidate roots `(p:q)`.
pub fn binary_squarefree(
    f: &Form,
    hints: &[(TowerElem, TowerElem)],
) -> Result<BinaryFactorization, FieldError> {
    assert_eq!(f.nvars(), 2, "binary form expected");
    assert!(!f.is_zero(), "zero binary form");
    let d = f.degree() as usize;
    let mut u: Upoly = (0..=d).map(|i| f.coeff(&[i as u32, (d - i) as u32])).collect();
    u = trim(u);
    let q_mult = (d - deg(&u)) as u32;
    let lc = u.last().unwrap().clone();
    let u = monic(&u)?;
    let mut affine_hints = Vec::new();
    for (p, q) in hints {
        if !q.is_zero() {
            affine_hints.push(p.checked_div(q)?);
        }
    }
    let mut factors = Vec::new();
    if q_mult > 0 {
        factors.push(BinaryFactor {
            form: Form::var(pqvars(), 1),
            multiplicity: q_mult,
        });
    }
    for (i, part) in yun(&u)?.into_iter().enumerate() {
        if deg(&part) == 0 {
            continue;
        }
        let (roots, rest) = split(&part, &affine_hints)?;
        for r in roots {
            factors.push(BinaryFactor {
                form: linear_form(&r),
                multiplicity: i as u32 + 1,
            });
        }
        if deg(&rest) > 0 {
            factors.push(BinaryFactor {
                form: homogenize(&rest),
                multiplicity: i as u32 + 1,
            });
        }
    }
    let mut out = BinaryFactorization {
        scalar: lc,
        factors,
        certified: false,
    };
    out.certified = out.product() == *f;
    Ok(out)
}
