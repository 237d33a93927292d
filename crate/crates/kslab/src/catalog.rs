//! Built-in direction-set generators and the on-disk set format.
//!
//! File format: UTF-8 text, `#` starts a comment, one ray per line, three
//! whitespace-separated components, each component `a,b` meaning `a + b·√2`
//! with `a`, `b` rationals written `p` or `p/q` (optional leading `-`).
//! The line for (0, 1, √2) is `0,0 1,0 0,1`.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;
use serde::Serialize;

use crate::error::Error;
use crate::geometry::{QuadExt, Ray};
use crate::ks::{DirectionSet, Status};

/// Regression metadata for a built-in set; the claimed status is never
/// trusted, the test suite re-proves it from the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExpectedStatus {
    Sat,
    Unsat,
    Unknown,
}

impl ExpectedStatus {
    pub fn matches(self, status: Status) -> bool {
        match self {
            ExpectedStatus::Sat => status == Status::Sat,
            ExpectedStatus::Unsat => status == Status::Unsat,
            ExpectedStatus::Unknown => true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub expected_status: ExpectedStatus,
}

pub fn entries() -> &'static [CatalogEntry] {
    &[
        CatalogEntry {
            name: "single-triad",
            description: "the standard basis: one orthogonal triad",
            expected_status: ExpectedStatus::Sat,
        },
        CatalogEntry {
            name: "coplanar-fan",
            description: "rays in the z=0 plane; accepts a size suffix, e.g. coplanar-fan-10",
            expected_status: ExpectedStatus::Sat,
        },
        CatalogEntry {
            name: "peres-33",
            description: "the 33-ray set over {0, ±1, ±√2} with no valid coloring",
            expected_status: ExpectedStatus::Unsat,
        },
    ]
}

/// Resolves a catalog name, including parametrized fans like
/// `coplanar-fan-10` (`coplanar-fan` defaults to 5 rays).
pub fn generate(name: &str) -> Result<DirectionSet, Error> {
    match name {
        "single-triad" => Ok(single_triad()),
        "peres-33" => Ok(peres_33()),
        "coplanar-fan" => coplanar_fan(5),
        _ => {
            if let Some(k) = name.strip_prefix("coplanar-fan-") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad fan size in `{name}`")))?;
                coplanar_fan(k)
            } else {
                Err(Error::InvalidArgument(format!(
                    "unknown catalog entry `{name}`"
                )))
            }
        }
    }
}

/// The standard basis {e1, e2, e3}.
pub fn single_triad() -> DirectionSet {
    DirectionSet::new(
        "single-triad",
        vec![Ray::basis(0), Ray::basis(1), Ray::basis(2)],
    )
    .expect("basis rays are distinct")
}

/// `k ≥ 2` distinct rays in the z = 0 plane. Every ray is perpendicular to
/// the z axis, so one apparatus context serves the whole set, and no
/// orthogonal triad fits inside the plane.
pub fn coplanar_fan(k: usize) -> Result<DirectionSet, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "coplanar fan needs k >= 2, got {k}"
        )));
    }
    let mut rays = vec![Ray::basis(0), Ray::basis(1)];
    for j in 2..k {
        // (1, (j−1) + √2, 0): pairwise distinct slopes, √2 keeps the
        // components honest quadratic-field elements.
        rays.push(
            Ray::new([
                QuadExt::from_parts(1, 0),
                QuadExt::from_parts(j as i64 - 1, 1),
                QuadExt::zero(),
            ])
            .expect("fan rays are nonzero"),
        );
    }
    DirectionSet::new(format!("coplanar-fan-{k}"), rays)
}

/// The 33-ray set with components in {0, ±1, ±√2}: the basis rays, the
/// diagonal rays of the coordinate planes, the (0, 1, ±√2) family and the
/// (±1, ±1, √2) family, projectively de-duplicated.
pub fn peres_33() -> DirectionSet {
    let mut rays: Vec<Ray> = Vec::with_capacity(33);
    let mut push = |a: [i64; 3], b: [i64; 3]| {
        rays.push(Ray::from_parts(a, b).expect("catalog rays are nonzero"));
    };

    // Permutations of (0, 0, 1): 3 rays.
    push([1, 0, 0], [0; 3]);
    push([0, 1, 0], [0; 3]);
    push([0, 0, 1], [0; 3]);

    // Permutations with relative sign of (0, 1, ±1): 6 rays.
    for zero_pos in 0..3 {
        for sign in [1, -1] {
            let mut a = [0i64; 3];
            let (p, q) = other_positions(zero_pos);
            a[p] = 1;
            a[q] = sign;
            push(a, [0; 3]);
        }
    }

    // Permutations with relative sign of (0, 1, ±√2): 12 rays.
    for zero_pos in 0..3 {
        for swap in [false, true] {
            for sign in [1, -1] {
                let (p, q) = other_positions(zero_pos);
                let (one_pos, root_pos) = if swap { (q, p) } else { (p, q) };
                let mut a = [0i64; 3];
                let mut b = [0i64; 3];
                a[one_pos] = 1;
                b[root_pos] = sign;
                push(a, b);
            }
        }
    }

    // (±1, ±1, √2) with the √2 entry in each position: 12 rays. The global
    // sign is projective, so the √2 coefficient stays positive.
    for root_pos in 0..3 {
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                let (p, q) = other_positions(root_pos);
                let mut a = [0i64; 3];
                let mut b = [0i64; 3];
                a[p] = s1;
                a[q] = s2;
                b[root_pos] = 1;
                push(a, b);
            }
        }
    }

    DirectionSet::new("peres-33", rays).expect("the 33 rays are projectively distinct")
}

fn other_positions(pos: usize) -> (usize, usize) {
    match pos {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Parses the direction-set file format. `name` is attached to the set;
/// loaders usually pass the file stem.
pub fn parse_direction_set(text: &str, name: &str) -> Result<DirectionSet, Error> {
    let mut rays = Vec::new();
    let mut line_of_ray = Vec::new();
    for (line_idx, raw) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let data = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if data.trim().is_empty() {
            continue;
        }

        let mut fields = Vec::with_capacity(3);
        for (col, token) in tokens_with_columns(data) {
            let q: QuadExt = token
                .parse()
                .map_err(|msg: String| Error::parse(line_no, col, msg))?;
            fields.push((col, q));
        }
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                1,
                format!("expected 3 components, got {}", fields.len()),
            ));
        }
        let v = [
            fields[0].1.clone(),
            fields[1].1.clone(),
            fields[2].1.clone(),
        ];
        let ray = Ray::new(v).map_err(|e| Error::parse(line_no, fields[0].0, e.to_string()))?;
        rays.push(ray);
        line_of_ray.push(line_no);
    }

    DirectionSet::new(name, rays).map_err(|e| match e {
        Error::DuplicateRay { index } => Error::parse(
            line_of_ray[index],
            1,
            "ray is projectively equal to an earlier ray".to_string(),
        ),
        other => other,
    })
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        // Column of the token start, 1-based; split_whitespace yields
        // subslices of `line`, so offsets are exact.
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, tok)
    })
}

pub fn load_direction_set(path: &Path) -> Result<DirectionSet, Error> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string());
    parse_direction_set(&text, &name)
}

/// Renders a set in the file format, with a short comment header.
pub fn write_direction_set(set: &DirectionSet) -> String {
    let mut out = String::new();
    writeln!(out, "# {} ({} rays)", set.name(), set.len()).unwrap();
    writeln!(out, "# component syntax: a,b meaning a + b*sqrt(2)").unwrap();
    for ray in set.rays() {
        let c = ray.components();
        writeln!(
            out,
            "{},{} {},{} {},{}",
            c[0].rational_part(),
            c[0].sqrt2_coeff(),
            c[1].rational_part(),
            c[1].sqrt2_coeff(),
            c[2].rational_part(),
            c[2].sqrt2_coeff()
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rank;
    use crate::ks::{build_structure, search_colorings, SearchMode};

    #[test]
    fn single_triad_shape() {
        let set = single_triad();
        assert_eq!(set.len(), 3);
        let st = build_structure(&set);
        assert_eq!(st.triads().len(), 1);
    }

    #[test]
    fn fan_is_coplanar_and_triad_free() {
        for k in [2, 3, 5, 10] {
            let set = coplanar_fan(k).unwrap();
            assert_eq!(set.len(), k);
            assert_eq!(rank(set.rays()), 2);
            assert!(build_structure(&set).triads().is_empty());
        }
        assert!(coplanar_fan(1).is_err());
    }

    #[test]
    fn fan_is_satisfiable() {
        let report = search_colorings(&coplanar_fan(5).unwrap(), SearchMode::FirstWitness);
        assert_eq!(report.status, Status::Sat);
    }

    #[test]
    fn peres_set_has_33_distinct_rays() {
        let set = peres_33();
        assert_eq!(set.len(), 33);
    }

    #[test]
    fn generators_are_stable_across_runs() {
        assert_eq!(
            write_direction_set(&peres_33()),
            write_direction_set(&peres_33())
        );
        assert_eq!(
            write_direction_set(&coplanar_fan(7).unwrap()),
            write_direction_set(&coplanar_fan(7).unwrap())
        );
    }

    #[test]
    fn file_format_round_trips() {
        for set in [single_triad(), coplanar_fan(6).unwrap(), peres_33()] {
            let text = write_direction_set(&set);
            let back = parse_direction_set(&text, set.name()).unwrap();
            assert_eq!(back.rays(), set.rays());
        }
    }

    #[test]
    fn parse_reports_line_and_column() {
        let err = parse_direction_set("0,0 1,0 0,1\n1,0 oops 0,0\n", "bad").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 5);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicates_with_position() {
        let err = parse_direction_set("1,0 0,0 0,0\n-1,0 0,0 0,0\n", "dup").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_handles_comments_and_blanks() {
        let text = "# heading\n\n1,0 0,0 0,0  # trailing note\n0,0 1,0 0,0\n";
        let set = parse_direction_set(text, "c").unwrap();
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn expected_statuses_hold() {
        for entry in entries() {
            let set = generate(entry.name).unwrap();
            let status = search_colorings(&set, SearchMode::FirstWitness).status;
            assert!(
                entry.expected_status.matches(status),
                "{}: expected {:?}, searched {:?}",
                entry.name,
                entry.expected_status,
                status
            );
        }
    }

    #[test]
    fn generate_resolves_names() {
        assert_eq!(generate("single-triad").unwrap().len(), 3);
        assert_eq!(generate("coplanar-fan-7").unwrap().len(), 7);
        assert_eq!(generate("peres-33").unwrap().len(), 33);
        assert!(generate("nope").is_err());
        assert!(generate("coplanar-fan-x").is_err());
    }
}
