//! Each stored group fingerprint is re-derived from an abstract construction
//! (permutations or semidirect products) that shares no code with the
//! matrix groups.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use quartic_solids::families::{named_fingerprint, NAMED_GROUPS};
use quartic_solids::matgroup::Fingerprint;

/// Closure of the generators under `mul`, identity first.
fn generate<T: Clone + Eq + Hash>(id: T, gens: &[T], mul: &impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut seen: HashSet<T> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for g in gens {
            let b = mul(&a, g);
            if seen.insert(b.clone()) {
                out.push(b.clone());
                queue.push_back(b);
            }
        }
    }
    out
}

fn abstract_fingerprint<T: Clone + Eq + Hash>(id: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> Fingerprint {
    let elems = generate(id.clone(), gens, &mul);
    let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elems.len();
    let table: Vec<Vec<usize>> = elems.iter().map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect()).collect();
    let inv: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();
    let mut histogram = BTreeMap::new();
    for a in 0..n {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = table[x][a];
            k += 1;
        }
        *histogram.entry(k).or_insert(0) += 1;
    }
    let center_order = (0..n).filter(|&a| (0..n).all(|b| table[a][b] == table[b][a])).count();
    let mut commutators: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    for a in 0..n {
        for b in 0..n {
            let c = table[table[inv[a]][inv[b]]][table[a][b]];
            if !seen[c] {
                seen[c] = true;
                commutators.push(c);
            }
        }
    }
    let derived = generate(0usize, &commutators, &|a: &usize, b: &usize| table[*a][*b]);
    Fingerprint {
        order: n,
        histogram,
        abelian: center_order == n,
        center_order,
        derived_order: derived.len(),
    }
}

type Perm = Vec<u8>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn perm_group(degree: usize, gens: &[&[u8]]) -> Fingerprint {
    let id: Perm = (0..degree as u8).collect();
    let gens: Vec<Perm> = gens.iter().map(|g| g.to_vec()).collect();
    abstract_fingerprint(id, &gens, compose)
}

/// Sign vectors in `F2^4` extended by S4 permuting coordinates. `seed`
/// generates the sign part under S4; with `quotient` vectors are taken
/// modulo the all-ones vector.
fn signs_by_s4(seed: u8, quotient: bool) -> Fingerprint {
    type E = (u8, [u8; 4]);
    let canon = move |m: u8| if quotient { m.min(m ^ 0b1111) } else { m };
    let act = |p: &[u8; 4], m: u8| (0..4).fold(0u8, |acc, i| acc | (((m >> i) & 1) << p[i]));
    let mul = move |a: &E, b: &E| -> E {
        let p: [u8; 4] = std::array::from_fn(|i| a.1[b.1[i] as usize]);
        (canon(a.0 ^ act(&a.1, b.0)), p)
    };
    let gens: Vec<E> = vec![(0, [1, 0, 2, 3]), (0, [1, 2, 3, 0]), (canon(seed), [0, 1, 2, 3])];
    abstract_fingerprint((0, [0, 1, 2, 3]), &gens, mul)
}

fn oracle(name: &str) -> Fingerprint {
    match name {
        "C2^2:S4" => signs_by_s4(0b0011, true),
        "C2^3:S4" => signs_by_s4(0b0001, true),
        // A4 wreath C2 on two blocks of four points.
        "(C2^2:S4):C3" => perm_group(8, &[&[1, 2, 0, 3, 4, 5, 6, 7], &[1, 0, 3, 2, 4, 5, 6, 7], &[4, 5, 6, 7, 0, 1, 2, 3]]),
        "S4" => perm_group(4, &[&[1, 0, 2, 3], &[1, 2, 3, 0]]),
        "S4xC2" => perm_group(6, &[&[1, 0, 2, 3, 4, 5], &[1, 2, 3, 0, 4, 5], &[0, 1, 2, 3, 5, 4]]),
        "D8xC2" => perm_group(6, &[&[1, 2, 3, 0, 4, 5], &[0, 3, 2, 1, 4, 5], &[0, 1, 2, 3, 5, 4]]),
        "A4" => perm_group(4, &[&[1, 2, 0, 3], &[1, 0, 3, 2]]),
        "S5" => perm_group(5, &[&[1, 0, 2, 3, 4], &[1, 2, 3, 4, 0]]),
        _ => panic!("no oracle for {}", name),
    }
}

#[test]
fn stored_fingerprints_match_abstract_constructions() {
    for g in NAMED_GROUPS {
        assert_eq!(named_fingerprint(g).unwrap(), oracle(g), "{}", g);
    }
}

#[test]
fn center_separates_order_192_candidates() {
    let quotient = signs_by_s4(0b0001, true);
    let even = signs_by_s4(0b0011, false);
    assert_eq!((quotient.order, even.order), (192, 192));
    assert_eq!(quotient.histogram, even.histogram);
    assert_eq!((quotient.center_order, even.center_order), (1, 2));
}

#[test]
fn times_c2_agrees_with_direct_product() {
    let s4 = oracle("S4");
    assert_eq!(s4.times_c2(), oracle("S4xC2"));
}
