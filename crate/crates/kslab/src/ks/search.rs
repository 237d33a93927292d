use std::time::{Duration, Instant};

use serde::Serialize;

use super::{build_structure, validate_coloring, Coloring, DirectionSet, OrthoStructure, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first valid coloring.
    FirstWitness,
    /// Visit the whole tree and count every valid coloring exactly.
    CountAll,
}

/// Result of an exhaustive coloring search.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub status: Status,
    /// Exact count in [`SearchMode::CountAll`]; always `Some(0)` on UNSAT.
    pub count: Option<u64>,
    /// A valid coloring whenever the status is SAT.
    pub witness: Option<Coloring>,
    /// Branch decisions explored.
    pub nodes: u64,
    /// Wall-clock time; excluded from serialized reports so identical
    /// inputs yield byte-identical documents.
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct ReportWire<'a> {
    status: Status,
    count: Option<u64>,
    witness: Option<Vec<u8>>,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<&'a str>,
}

impl SearchReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ReportWire {
            status: self.status,
            count: self.count,
            witness: self.witness.as_ref().map(Coloring::to_u8_vec),
            nodes: self.nodes,
            set: None,
        })
        .expect("report serialization cannot fail")
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

/// Complete backtracking search over {0,1} colorings of `set`.
///
/// Propagation: a ray valued 0 forces 1 on every orthogonal partner; a
/// triad with two rays valued 1 forces 0 on the third; a triad with three
/// rays valued 1, or an orthogonal pair valued (0,0), is a dead branch.
/// Branching picks the unassigned ray with the most incident triads (ties:
/// lowest index) and tries value 0 first, so runs are deterministic.
///
/// ```
/// use kslab::{catalog, search_colorings, SearchMode, Status};
///
/// let report = search_colorings(&catalog::single_triad(), SearchMode::CountAll);
/// assert_eq!((report.status, report.count), (Status::Sat, Some(3)));
/// ```
pub fn search_colorings(set: &DirectionSet, mode: SearchMode) -> SearchReport {
    let structure = build_structure(set);
    search_with_structure(&structure, mode)
}

/// Same as [`search_colorings`] with a prebuilt structure.
pub fn search_with_structure(structure: &OrthoStructure, mode: SearchMode) -> SearchReport {
    let start = Instant::now();
    let mut searcher = Searcher::new(structure, mode);
    searcher.dfs();

    let status = if searcher.witness.is_some() {
        Status::Sat
    } else {
        Status::Unsat
    };
    let count = match (mode, status) {
        (SearchMode::CountAll, _) => Some(searcher.count),
        (SearchMode::FirstWitness, Status::Unsat) => Some(0),
        (SearchMode::FirstWitness, Status::Sat) => None,
    };
    let witness = searcher.witness.map(Coloring::new);
    if let Some(w) = &witness {
        debug_assert!(validate_coloring(structure, w).unwrap().is_valid());
    }

    SearchReport {
        status,
        count,
        witness,
        nodes: searcher.nodes,
        elapsed: start.elapsed(),
    }
}

struct Searcher<'a> {
    structure: &'a OrthoStructure,
    mode: SearchMode,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    /// Ray indices in branch order: most incident triads first, then index.
    branch_order: Vec<usize>,
    count: u64,
    witness: Option<Vec<bool>>,
    nodes: u64,
    done: bool,
}

struct Conflict;

impl<'a> Searcher<'a> {
    fn new(structure: &'a OrthoStructure, mode: SearchMode) -> Self {
        let n = structure.ray_count();
        let mut branch_order: Vec<usize> = (0..n).collect();
        branch_order.sort_by_key(|&i| (std::cmp::Reverse(structure.triads_of(i).len()), i));
        Searcher {
            structure,
            mode,
            values: vec![None; n],
            trail: Vec::with_capacity(n),
            branch_order,
            count: 0,
            witness: None,
            nodes: 0,
            done: false,
        }
    }

    fn dfs(&mut self) {
        if self.done {
            return;
        }
        let Some(ray) = self.pick_branch_ray() else {
            // Total assignment; propagation keeps it conflict-free.
            self.count += 1;
            if self.witness.is_none() {
                self.witness = Some(self.values.iter().map(|v| v.unwrap()).collect());
            }
            if self.mode == SearchMode::FirstWitness {
                self.done = true;
            }
            return;
        };

        self.nodes += 1;
        for value in [false, true] {
            let mark = self.trail.len();
            if self.assign(ray, value).is_ok() && self.propagate(mark).is_ok() {
                self.dfs();
            }
            self.undo_to(mark);
            if self.done {
                return;
            }
        }
    }

    fn pick_branch_ray(&self) -> Option<usize> {
        self.branch_order
            .iter()
            .copied()
            .find(|&i| self.values[i].is_none())
    }

    fn assign(&mut self, ray: usize, value: bool) -> Result<(), Conflict> {
        match self.values[ray] {
            Some(v) if v == value => Ok(()),
            Some(_) => Err(Conflict),
            None => {
                self.values[ray] = Some(value);
                self.trail.push(ray);
                Ok(())
            }
        }
    }

    /// Drains consequences of everything on the trail from `from` onward.
    fn propagate(&mut self, from: usize) -> Result<(), Conflict> {
        let mut head = from;
        while head < self.trail.len() {
            let ray = self.trail[head];
            head += 1;
            match self.values[ray] {
                Some(false) => {
                    // A 0 forces 1 on every orthogonal partner.
                    for p in 0..self.structure.partners_of(ray).len() {
                        let partner = self.structure.partners_of(ray)[p];
                        self.assign(partner, true)?;
                    }
                }
                Some(true) => {
                    // A triad with two 1s forces the third ray to 0.
                    for t in 0..self.structure.triads_of(ray).len() {
                        let triad = self.structure.triads()[self.structure.triads_of(ray)[t]];
                        let ones = triad
                            .iter()
                            .filter(|&&r| self.values[r] == Some(true))
                            .count();
                        if ones == 3 {
                            return Err(Conflict);
                        }
                        if ones == 2 {
                            if let Some(&open) = triad.iter().find(|&&r| self.values[r].is_none()) {
                                self.assign(open, false)?;
                            }
                        }
                    }
                }
                None => unreachable!("trail holds only assigned rays"),
            }
        }
        Ok(())
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let ray = self.trail.pop().unwrap();
            self.values[ray] = None;
        }
    }
}
