//! Orthogonality structure over finite direction sets and the existence /
//! counting problem for {0,1} value assignments.
//!
//! A coloring assigns each ray the value of its squared spin component.
//! Validity means: every orthogonal triad inside the set has exactly one
//! ray valued 0, and no orthogonal pair has both rays valued 0. The pair
//! rule is enforced on *all* internal orthogonal pairs, not only those
//! completed to a triad inside the set: any orthogonal pair extends to a
//! triad on the full sphere, which forces "not both 0" regardless of
//! whether the completing third direction was loaded.

mod cnf;
mod search;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::Ray;

pub use cnf::{
    export_cnf, import_cnf_result, parse_solver_output, Agreement, CnfDocument, ExternalResult,
};
pub use search::{search_colorings, SearchMode, SearchReport};

/// An ordered set of distinct canonical rays. The load/generation order is
/// the deterministic tie-break order everywhere downstream.
#[derive(Clone, Debug)]
pub struct DirectionSet {
    name: String,
    rays: Vec<Ray>,
}

impl DirectionSet {
    pub fn new(name: impl Into<String>, rays: Vec<Ray>) -> Result<Self, Error> {
        let mut seen = HashSet::new();
        for (index, ray) in rays.iter().enumerate() {
            if !seen.insert(ray.clone()) {
                return Err(Error::DuplicateRay { index });
            }
        }
        Ok(DirectionSet {
            name: name.into(),
            rays,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray(&self, index: usize) -> &Ray {
        &self.rays[index]
    }

    /// Copy of the set with one ray removed; indices above `index` shift
    /// down by one.
    pub fn without_ray(&self, index: usize) -> Result<DirectionSet, Error> {
        if index >= self.rays.len() {
            return Err(Error::IndexOutOfRange {
                what: "ray",
                index,
                limit: self.rays.len(),
            });
        }
        let mut rays = self.rays.clone();
        rays.remove(index);
        DirectionSet::new(format!("{}-minus-{}", self.name, index), rays)
    }
}

/// All orthogonal pairs and triads internal to a direction set, with
/// adjacency indexes derived once at build time.
#[derive(Clone, Debug)]
pub struct OrthoStructure {
    ray_count: usize,
    pairs: Vec<(usize, usize)>,
    triads: Vec<[usize; 3]>,
    partners: Vec<Vec<usize>>,
    triad_membership: Vec<Vec<usize>>,
}

/// Enumerates every orthogonal pair `i < j` and every pairwise-orthogonal
/// triple `i < j < k`, in lexicographic order.
pub fn build_structure(set: &DirectionSet) -> OrthoStructure {
    let n = set.len();
    let mut pairs = Vec::new();
    let mut partners = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if set.ray(i).is_orthogonal_to(set.ray(j)) {
                pairs.push((i, j));
                partners[i].push(j);
                partners[j].push(i);
            }
        }
    }

    let mut triads = Vec::new();
    let mut triad_membership = vec![Vec::new(); n];
    for &(i, j) in &pairs {
        // partners lists are ascending, so k > j keeps triads lexicographic.
        for &k in &partners[j] {
            if k > j && partners[i].binary_search(&k).is_ok() {
                let t = triads.len();
                triads.push([i, j, k]);
                triad_membership[i].push(t);
                triad_membership[j].push(t);
                triad_membership[k].push(t);
            }
        }
    }

    OrthoStructure {
        ray_count: n,
        pairs,
        triads,
        partners,
        triad_membership,
    }
}

impl OrthoStructure {
    pub fn ray_count(&self) -> usize {
        self.ray_count
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn triads(&self) -> &[[usize; 3]] {
        &self.triads
    }

    /// Indices orthogonal to `ray`, ascending.
    pub fn partners_of(&self, ray: usize) -> &[usize] {
        &self.partners[ray]
    }

    /// Triad indices containing `ray`, ascending.
    pub fn triads_of(&self, ray: usize) -> &[usize] {
        &self.triad_membership[ray]
    }
}

/// A total {0,1} assignment; `true` means the squared spin value 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    values: Vec<bool>,
}

impl Coloring {
    pub fn new(values: Vec<bool>) -> Self {
        Coloring { values }
    }

    /// All rays valued 1 except the listed zeros.
    pub fn all_ones_except(len: usize, zeros: &[usize]) -> Self {
        let mut values = vec![true; len];
        for &z in zeros {
            values[z] = false;
        }
        Coloring { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_one(&self, index: usize) -> bool {
        self.values[index]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn to_u8_vec(&self) -> Vec<u8> {
        self.values.iter().map(|&v| u8::from(v)).collect()
    }
}

/// One failed constraint, by kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    PairBothZero { i: usize, j: usize },
    TriadZeroCount { triad: [usize; 3], zeros: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Vec<Violation>),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Validity::Valid => &[],
            Validity::Invalid(v) => v,
        }
    }
}

/// Checks a total coloring against every pair and triad constraint and
/// lists each failure. A partial coloring is a domain error.
pub fn validate_coloring(
    structure: &OrthoStructure,
    coloring: &Coloring,
) -> Result<Validity, Error> {
    if coloring.len() != structure.ray_count() {
        return Err(Error::PartialColoring {
            expected: structure.ray_count(),
            got: coloring.len(),
        });
    }
    let mut violations = Vec::new();
    for &(i, j) in structure.pairs() {
        if !coloring.is_one(i) && !coloring.is_one(j) {
            violations.push(Violation::PairBothZero { i, j });
        }
    }
    for &triad in structure.triads() {
        let zeros = triad.iter().filter(|&&r| !coloring.is_one(r)).count();
        if zeros != 1 {
            violations.push(Violation::TriadZeroCount { triad, zeros });
        }
    }
    Ok(if violations.is_empty() {
        Validity::Valid
    } else {
        Validity::Invalid(violations)
    })
}

/// Search outcome, serialized as `SAT` / `UNSAT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
}
