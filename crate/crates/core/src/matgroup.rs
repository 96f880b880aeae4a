//! Finite subgroups of PGL(4): closure, fingerprints, semi-invariance and
//! orbits on point sets.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;

use crate::exactfield::{FieldError, TowerElem};
use crate::linalg::Matrix;
use crate::multipoly::Form;
use crate::projgeom::{GeomError, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("closure exceeded the cap of {cap} elements (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("element {element} maps point {point} outside the set")]
    NotInvariantSet { element: String, point: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// An invertible matrix up to scalars, stored with its first nonzero entry
/// (row-major) equal to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjTransform {
    m: Matrix,
}

impl ProjTransform {
    pub fn new(m: Matrix) -> Result<Self, GroupError> {
        assert_eq!(m.rows(), m.cols());
        let lead = m.entries().iter().find(|c| !c.is_zero()).ok_or(GroupError::Singular)?;
        let inv = lead.inv()?;
        Ok(ProjTransform { m: m.scale(&inv) })
    }

    pub fn identity(n: usize) -> Self {
        ProjTransform { m: Matrix::identity(n) }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::new(Matrix::from_ints(rows)).expect("nonzero matrix")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn mul(&self, other: &ProjTransform) -> Result<ProjTransform, GroupError> {
        ProjTransform::new(self.m.mul(&other.m))
    }

    pub fn inverse(&self) -> Result<ProjTransform, GroupError> {
        let inv = self.m.inverse().map_err(|_| GroupError::Singular)?;
        ProjTransform::new(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.m == Matrix::identity(self.dim())
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, GroupError> {
        Ok(p.transform(&self.m)?)
    }

    /// Order in PGL, searched up to `limit`.
    pub fn order(&self, limit: usize) -> Result<Option<usize>, GroupError> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = acc.mul(self)?;
        }
        Ok(None)
    }
}

impl fmt::Debug for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

impl fmt::Display for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

#[derive(Debug, Clone)]
pub struct GroupClosure {
    pub elements: Vec<ProjTransform>,
    pub generators: Vec<ProjTransform>,
    index: HashMap<ProjTransform, usize>,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &ProjTransform) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &ProjTransform) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Closed under products with every element and under inverses.
    pub fn verify_group(&self) -> Result<bool, GroupError> {
        for a in &self.elements {
            if !self.contains(&a.inverse()?) {
                return Ok(false);
            }
            for b in &self.generators {
                if !self.contains(&a.mul(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(self.contains(&ProjTransform::identity(self.elements[0].dim())))
    }
}

/// Breadth-first closure of the generators under multiplication.
pub fn closure(gens: &[ProjTransform], cap: usize) -> Result<GroupClosure, GroupError> {
    let n = gens.first().map(|g| g.dim()).unwrap_or(4);
    let id = ProjTransform::identity(n);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = elements[i].mul(g)?;
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded {
                        cap,
                        reached: elements.len() + 1,
                    });
                }
                index.insert(h.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
    }
    Ok(GroupClosure {
        elements,
        generators: gens.to_vec(),
        index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub abelian: bool,
    pub center_order: usize,
    pub derived_order: usize,
}

impl Fingerprint {
    /// Fingerprint of the direct product with a cyclic group of order 2.
    pub fn times_c2(&self) -> Fingerprint {
        let mut h = BTreeMap::new();
        for (&k, &c) in &self.histogram {
            *h.entry(k).or_insert(0) += c;
            *h.entry(k.lcm(&2)).or_insert(0) += c;
        }
        Fingerprint {
            order: self.order * 2,
            histogram: h,
            abelian: self.abelian,
            center_order: self.center_order * 2,
            derived_order: self.derived_order,
        }
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hist: Vec<String> = self.histogram.iter().map(|(k, v)| format!("{}:{}", k, v)).collect();
        write!(
            f,
            "{{order:{}, hist:{{{}}}, abelian:{}, center:{}, derived:{}}}",
            self.order,
            hist.join(","),
            self.abelian,
            self.center_order,
            self.derived_order
        )
    }
}

fn subgroup_closure(
    g: &GroupClosure,
    seeds: &[usize],
    mul: &mut impl FnMut(usize, usize) -> Result<usize, GroupError>,
) -> Result<Vec<bool>, GroupError> {
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut queue: VecDeque<usize> = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for &s in seeds {
            let b = mul(a, s)?;
            if !member[b] {
                member[b] = true;
                queue.push_back(b);
            }
        }
    }
    Ok(member)
}

/// Order histogram, center and derived subgroup of a closed group.
pub fn fingerprint(g: &GroupClosure) -> Result<Fingerprint, GroupError> {
    let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mul = |a: usize, b: usize| -> Result<usize, GroupError> {
        if let Some(&c) = cache.get(&(a, b)) {
            return Ok(c);
        }
        let p = g.elements[a].mul(&g.elements[b])?;
        let c = g.position(&p).ok_or(GroupError::Singular)?;
        cache.insert((a, b), c);
        Ok(c)
    };
    let n = g.order();
    let mut histogram = BTreeMap::new();
    let mut inverse = vec![0usize; n];
    for i in 0..n {
        // walk the powers of i; the last one before the identity is i^-1
        let mut k = 1;
        let mut prev = 0;
        let mut j = i;
        while j != 0 {
            prev = j;
            j = mul(j, i)?;
            k += 1;
        }
        inverse[i] = prev;
        *histogram.entry(k).or_insert(0) += 1;
    }
    let gens: Vec<usize> = g
        .generators
        .iter()
        .map(|x| g.position(x).ok_or(GroupError::Singular))
        .collect::<Result<_, _>>()?;
    let mut center_order = 0;
    for i in 0..n {
        let mut central = true;
        for &s in &gens {
            if mul(i, s)? != mul(s, i)? {
                central = false;
                break;
            }
        }
        if central {
            center_order += 1;
        }
    }
    // derived subgroup: normal closure of the generator commutators
    let mut seeds = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let ab = mul(a, b)?;
            let ba = mul(b, a)?;
            let c = mul(ab, inverse[ba])?;
            if c != 0 && !seeds.contains(&c) {
                seeds.push(c);
            }
        }
    }
    let mut member = subgroup_closure(g, &seeds, &mut mul)?;
    loop {
        let mut grew = false;
        let current: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
        for &x in &current {
            for &s in &gens {
                let sx = mul(s, x)?;
                let conj = mul(sx, inverse[s])?;
                if !member[conj] {
                    seeds.push(conj);
                    grew = true;
                }
            }
            if grew {
                break;
            }
        }
        if !grew {
            break;
        }
        member = subgroup_closure(g, &seeds, &mut mul)?;
    }
    let derived_order = member.iter().filter(|&&b| b).count();
    Ok(Fingerprint {
        order: n,
        histogram,
        abelian: center_order == n,
        center_order,
        derived_order,
    })
}

/// `lambda` with `F(g x) = lambda F(x)`, if `g` preserves `F` projectively.
pub fn semi_invariant_factor(g: &ProjTransform, f: &Form) -> Option<TowerElem> {
    f.compose_matrix(g.matrix()).proportional_to(f)
}

#[derive(Debug, Clone)]
pub struct Orbits {
    pub orbits: Vec<Vec<usize>>,
    /// Orbits whose length is 1, 2, 3 or 5.
    pub forbidden: Vec<bool>,
}

impl Orbits {
    pub fn lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.orbits.iter().map(|o| o.len()).collect();
        v.sort();
        v
    }
}

/// Orbit partition of a point set permuted by the group.
pub fn orbits_on_points(g: &GroupClosure, pts: &[ProjPoint]) -> Result<Orbits, GroupError> {
    let index: HashMap<&ProjPoint, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut image = Vec::with_capacity(g.generators.len());
    for gen in &g.generators {
        let mut row = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let q = gen.apply(p)?;
            let j = *index.get(&q).ok_or_else(|| GroupError::NotInvariantSet {
                element: gen.to_string(),
                point: i,
            })?;
            row.push(j);
        }
        image.push(row);
    }
    let mut seen = vec![false; pts.len()];
    let mut orbits = Vec::new();
    for start in 0..pts.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for row in &image {
                let y = row[x];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort();
        orbits.push(orbit);
    }
    let forbidden = orbits.iter().map(|o| matches!(o.len(), 1 | 2 | 3 | 5)).collect();
    Ok(Orbits { orbits, forbidden })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::xvars;
    use proptest::prelude::*;

    fn perm(p: [usize; 4]) -> ProjTransform {
        let mut m = Matrix::zeros(4, 4);
        for (i, &j) in p.iter().enumerate() {
            m[(i, j)] = TowerElem::one();
        }
        ProjTransform::new(m).unwrap()
    }

    fn diag(d: [i64; 4]) -> ProjTransform {
        ProjTransform::new(Matrix::diag(&d.map(TowerElem::from_int))).unwrap()
    }

    fn sym4() -> GroupClosure {
        closure(&[perm([1, 0, 2, 3]), perm([1, 2, 3, 0])], 1024).unwrap()
    }

    fn hist(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().cloned().collect()
    }

    #[test]
    fn normalization_is_projective() {
        let a = ProjTransform::new(Matrix::diag(&[TowerElem::from_int(2), TowerElem::from_int(-2), TowerElem::from_int(2), TowerElem::from_int(2)])).unwrap();
        assert_eq!(a, diag([1, -1, 1, 1]));
        assert_eq!(ProjTransform::new(a.matrix().clone()).unwrap(), a);
        assert_eq!(diag([-1, -1, -1, -1]), ProjTransform::identity(4));
    }

    #[test]
    fn sym4_closure_and_fingerprint() {
        let g = sym4();
        assert_eq!(g.order(), 24);
        assert!(g.verify_group().unwrap());
        let f = fingerprint(&g).unwrap();
        assert_eq!(f.histogram, hist(&[(1, 1), (2, 9), (3, 8), (4, 6)]));
        assert_eq!(f.center_order, 1);
        assert_eq!(f.derived_order, 12);
        assert!(!f.abelian);
    }

    #[test]
    fn klein_and_dihedral() {
        let v = closure(&[diag([1, -1, 1, 1]), diag([1, 1, -1, 1])], 1024).unwrap();
        let f = fingerprint(&v).unwrap();
        assert_eq!((f.order, f.abelian), (4, true));
        assert_eq!(f.histogram, hist(&[(1, 1), (2, 3)]));
        // symmetries of a square acting on four points
        let d8 = closure(&[perm([1, 2, 3, 0]), perm([0, 3, 2, 1])], 1024).unwrap();
        let f = fingerprint(&d8).unwrap();
        assert_eq!(f.histogram, hist(&[(1, 1), (2, 5), (4, 2)]));
        assert_eq!((f.center_order, f.derived_order), (2, 2));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            closure(&[perm([1, 2, 3, 0])], 3).unwrap_err(),
            GroupError::CapExceeded { cap: 3, reached: 4 }
        );
        // an element of infinite order
        let u = ProjTransform::from_ints(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(matches!(closure(&[u], 50), Err(GroupError::CapExceeded { .. })));
    }

    #[test]
    fn direct_product_with_commuting_involution() {
        // I - J/2 commutes with permutation matrices and is not one
        let half = TowerElem::frac(-1, 2);
        let mut m = Matrix::identity(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = &m[(i, j)] + &half;
            }
        }
        let a = ProjTransform::new(m).unwrap();
        let g = closure(&[perm([1, 0, 2, 3]), perm([1, 2, 3, 0]), a], 1024).unwrap();
        let f = fingerprint(&g).unwrap();
        assert_eq!(f, fingerprint(&sym4()).unwrap().times_c2());
    }

    #[test]
    fn semi_invariance() {
        let x = |i: usize| Form::var(xvars(), i);
        let f = x(0).mul(&x(1)).mul(&x(2)).mul(&x(3));
        assert!(semi_invariant_factor(&ProjTransform::identity(4), &f).unwrap().is_one());
        assert_eq!(semi_invariant_factor(&diag([1, 1, 1, -1]), &f).unwrap(), TowerElem::from_int(-1));
        let g = x(0).pow(4).add(&x(1).pow(4));
        assert!(semi_invariant_factor(&perm([0, 2, 1, 3]), &g).is_none());
    }

    #[test]
    fn orbits() {
        let pts: Vec<ProjPoint> = (0..4)
            .map(|i| {
                let mut e = [0; 4];
                e[i] = 1;
                ProjPoint::from_ints(&e)
            })
            .collect();
        let triv = closure(&[ProjTransform::identity(4)], 8).unwrap();
        assert_eq!(orbits_on_points(&triv, &pts).unwrap().lengths(), vec![1; 4]);
        let g = closure(&[perm([1, 0, 2, 3]), perm([0, 1, 3, 2])], 8).unwrap();
        let o = orbits_on_points(&g, &pts).unwrap();
        assert_eq!(o.lengths(), vec![2, 2]);
        assert!(o.forbidden.iter().all(|&b| b));
        let err = orbits_on_points(&g, &pts[..3]).unwrap_err();
        assert!(matches!(err, GroupError::NotInvariantSet { point: 2, .. }));
    }

    fn sym4_elem() -> impl Strategy<Value = usize> {
        0usize..24
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn closure_is_a_group(a in sym4_elem(), b in sym4_elem()) {
            let g = sym4();
            let x = &g.elements[a];
            let y = &g.elements[b];
            prop_assert!(g.contains(&x.mul(y).unwrap()));
            prop_assert!(g.contains(&x.inverse().unwrap()));
            prop_assert!(x.mul(&x.inverse().unwrap()).unwrap().is_identity());
        }

        #[test]
        fn orbit_lengths_divide_order(gens in proptest::collection::vec(sym4_elem(), 1..3)) {
            let s = sym4();
            let g = closure(&gens.iter().map(|&i| s.elements[i].clone()).collect::<Vec<_>>(), 64).unwrap();
            let pts: Vec<ProjPoint> = (0..4).map(|i| { let mut e = [0; 4]; e[i] = 1; ProjPoint::from_ints(&e) }).collect();
            let o = orbits_on_points(&g, &pts).unwrap();
            prop_assert_eq!(o.lengths().iter().sum::<usize>(), 4);
            for l in o.lengths() {
                prop_assert_eq!(g.order() % l, 0);
            }
        }
    }
}
