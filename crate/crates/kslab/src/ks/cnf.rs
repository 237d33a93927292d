use std::fmt::Write as _;

use super::{
    build_structure, validate_coloring, Coloring, DirectionSet, OrthoStructure, SearchReport,
    Status,
};
use crate::error::Error;

/// A propositional encoding of the coloring problem in DIMACS CNF form.
///
/// Variable `i + 1` stands for "ray `i` is valued 1". Clauses: `(i ∨ j)`
/// for every orthogonal pair, and `(¬i ∨ ¬j ∨ ¬k)` for every triad; the
/// triad's positive pair clauses are already covered by the pair set, so
/// satisfying assignments are in bijection with valid colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
}

pub fn export_cnf(set: &DirectionSet) -> CnfDocument {
    let structure = build_structure(set);
    export_cnf_with_structure(set, &structure)
}

pub fn export_cnf_with_structure(set: &DirectionSet, structure: &OrthoStructure) -> CnfDocument {
    let mut clauses = Vec::with_capacity(structure.pairs().len() + structure.triads().len());
    for &(i, j) in structure.pairs() {
        clauses.push(vec![i as i32 + 1, j as i32 + 1]);
    }
    for &[i, j, k] in structure.triads() {
        clauses.push(vec![-(i as i32 + 1), -(j as i32 + 1), -(k as i32 + 1)]);
    }
    CnfDocument {
        num_vars: set.len(),
        clauses,
        comments: vec![
            format!("direction set: {} ({} rays)", set.name(), set.len()),
            "var i+1 true <=> ray i valued 1".to_string(),
        ],
    }
}

impl CnfDocument {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            writeln!(out, "c {c}").unwrap();
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            writeln!(out, "0").unwrap();
        }
        out
    }
}

/// Verdict from an external solver run on the exported CNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExternalResult {
    Unsat,
    /// One boolean per variable, index `i` for variable `i + 1`.
    Model(Vec<bool>),
}

/// Parses common solver output: a DIMACS-style `s SATISFIABLE` /
/// `s UNSATISFIABLE` status with `v` literal lines, or the terse
/// `SAT` / `UNSAT` first-line form followed by literals.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<ExternalResult, Error> {
    let mut sat: Option<bool> = None;
    let mut literals: Vec<i64> = Vec::new();

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r),
            None => (line, ""),
        };
        match head {
            "s" => match rest.trim() {
                "SATISFIABLE" => sat = Some(true),
                "UNSATISFIABLE" => sat = Some(false),
                other => {
                    return Err(Error::parse(
                        line_no + 1,
                        1,
                        format!("unknown status `{other}`"),
                    ))
                }
            },
            "SAT" | "SATISFIABLE" => {
                sat = Some(true);
                parse_literals(rest, line_no, &mut literals)?;
            }
            "UNSAT" | "UNSATISFIABLE" => sat = Some(false),
            "v" => parse_literals(rest, line_no, &mut literals)?,
            _ => parse_literals(line, line_no, &mut literals)?,
        }
    }

    match sat {
        Some(false) => Ok(ExternalResult::Unsat),
        Some(true) | None => {
            if sat.is_none() && literals.is_empty() {
                return Err(Error::parse(
                    1,
                    1,
                    "no status and no literals in solver output",
                ));
            }
            let mut model = vec![None; num_vars];
            for lit in literals {
                let var = lit.unsigned_abs() as usize;
                if var == 0 || var > num_vars {
                    return Err(Error::parse(
                        1,
                        1,
                        format!("literal {lit} outside 1..={num_vars}"),
                    ));
                }
                model[var - 1] = Some(lit > 0);
            }
            let mut assignment = Vec::with_capacity(num_vars);
            for (i, v) in model.into_iter().enumerate() {
                match v {
                    Some(v) => assignment.push(v),
                    None => {
                        return Err(Error::parse(
                            1,
                            1,
                            format!("assignment does not mention variable {}", i + 1),
                        ))
                    }
                }
            }
            Ok(ExternalResult::Model(assignment))
        }
    }
}

fn parse_literals(chunk: &str, line_no: usize, literals: &mut Vec<i64>) -> Result<(), Error> {
    for tok in chunk.split_whitespace() {
        let lit: i64 = tok
            .parse()
            .map_err(|_| Error::parse(line_no + 1, 1, format!("invalid literal `{tok}`")))?;
        if lit != 0 {
            literals.push(lit);
        }
    }
    Ok(())
}

/// How the external run relates to our own search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Both sides report UNSAT.
    BothUnsat,
    /// The external model maps back to a coloring that validates.
    WitnessValidated(Coloring),
}

/// Maps an external satisfying assignment back to a coloring and validates
/// it, or records UNSAT agreement. Any mismatch is an integrity error: it
/// signals a bug in the encoder or in one of the solvers.
pub fn import_cnf_result(
    structure: &OrthoStructure,
    ours: &SearchReport,
    external: &ExternalResult,
) -> Result<Agreement, Error> {
    match external {
        ExternalResult::Unsat => match ours.status {
            Status::Unsat => Ok(Agreement::BothUnsat),
            Status::Sat => Err(Error::Integrity(
                "external solver reports UNSAT but the search found a witness".to_string(),
            )),
        },
        ExternalResult::Model(assignment) => {
            if assignment.len() != structure.ray_count() {
                return Err(Error::Integrity(format!(
                    "external model has {} variables, set has {} rays",
                    assignment.len(),
                    structure.ray_count()
                )));
            }
            let coloring = Coloring::new(assignment.clone());
            let validity = validate_coloring(structure, &coloring)?;
            if !validity.is_valid() {
                return Err(Error::Integrity(format!(
                    "external model violates {} constraint(s); first: {:?}",
                    validity.violations().len(),
                    validity.violations()[0]
                )));
            }
            if ours.status == Status::Unsat {
                return Err(Error::Integrity(
                    "external solver found a valid coloring but the search reported UNSAT"
                        .to_string(),
                ));
            }
            Ok(Agreement::WitnessValidated(coloring))
        }
    }
}
