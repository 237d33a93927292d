//! Shared independent oracles for the integration tests. Everything here
//! recomputes from first principles (dot products, exhaustive enumeration)
//! and never calls into the structures or search paths it is checking.

#![allow(dead_code)]

use kslab::geometry::{QuadExt, Ray};
use kslab::ks::DirectionSet;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

/// Counts valid colorings by brute force over all 2^n assignments, with
/// orthogonality recomputed from dot products on every check.
pub fn brute_force_count(set: &DirectionSet) -> u64 {
    let n = set.len();
    assert!(n <= 20, "brute force oracle is for small sets");
    let orthogonal = |i: usize, j: usize| set.ray(i).is_orthogonal_to(set.ray(j));

    let mut count = 0;
    for mask in 0..(1u64 << n) {
        let one = |i: usize| mask >> i & 1 == 1;
        let mut ok = true;

        'pairs: for i in 0..n {
            for j in i + 1..n {
                if !one(i) && !one(j) && orthogonal(i, j) {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            'triples: for i in 0..n {
                for j in i + 1..n {
                    if !orthogonal(i, j) {
                        continue;
                    }
                    for k in j + 1..n {
                        if orthogonal(i, k) && orthogonal(j, k) {
                            let zeros = [i, j, k].iter().filter(|&&r| !one(r)).count();
                            if zeros != 1 {
                                ok = false;
                                break 'triples;
                            }
                        }
                    }
                }
            }
        }
        if ok {
            count += 1;
        }
    }
    count
}

/// Model count of a DIMACS document by exhaustive assignment enumeration.
/// Parses the text from scratch so the whole export path is under test.
pub fn cnf_model_count(dimacs: &str) -> u64 {
    let mut num_vars = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for line in dimacs.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let mut it = rest.split_whitespace();
            num_vars = Some(it.next().unwrap().parse::<usize>().unwrap());
            continue;
        }
        let lits: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().unwrap())
            .take_while(|&l| l != 0)
            .collect();
        clauses.push(lits);
    }
    let n = num_vars.expect("missing problem line");
    assert!(n <= 20, "cnf enumeration oracle is for small instances");

    let mut count = 0;
    for mask in 0..(1u64 << n) {
        let satisfied = clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                let value = mask >> var & 1 == 1;
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        });
        if satisfied {
            count += 1;
        }
    }
    count
}

/// Random sub-multiset of the 33-ray catalog set with `1..=max_size` rays,
/// preserving the load order of the chosen indices.
pub fn random_peres_subset<R: Rng>(rng: &mut R, max_size: usize) -> DirectionSet {
    let full = kslab::catalog::peres_33();
    let size = rng.random_range(1..=max_size);
    let mut indices: Vec<usize> = (0..full.len()).collect();
    indices.shuffle(rng);
    indices.truncate(size);
    indices.sort_unstable();
    let rays = indices.iter().map(|&i| full.ray(i).clone()).collect();
    DirectionSet::new(format!("peres-subset-{size}"), rays).unwrap()
}

/// Rank by exhaustive minor expansion, for sets of up to 5 rays.
pub fn rank_by_minors(rays: &[Ray]) -> usize {
    let rows: Vec<&[QuadExt; 3]> = rays.iter().map(|r| r.components()).collect();
    let n = rows.len();

    let det2 = |r0: &[QuadExt; 3], r1: &[QuadExt; 3], c0: usize, c1: usize| {
        &r0[c0] * &r1[c1] - &r0[c1] * &r1[c0]
    };

    // Any nonzero 3x3 minor?
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let d = &rows[i][0] * &det2(rows[j], rows[k], 1, 2)
                    - &rows[i][1] * &det2(rows[j], rows[k], 0, 2)
                    + &rows[i][2] * &det2(rows[j], rows[k], 0, 1);
                if !d.is_zero() {
                    return 3;
                }
            }
        }
    }
    // Any nonzero 2x2 minor?
    for i in 0..n {
        for j in i + 1..n {
            for (c0, c1) in [(0, 1), (0, 2), (1, 2)] {
                if !det2(rows[i], rows[j], c0, c1).is_zero() {
                    return 2;
                }
            }
        }
    }
    usize::from(n > 0)
}
