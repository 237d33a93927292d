//! Context-dependent value assignments and the twin-argument pipeline.
//!
//! A "context" is the apparatus descriptor that, besides the measured
//! direction `n`, pins down a spin-measuring device: modeled as the beam
//! axis, valid only when perpendicular to `n`. A contextual model tables a
//! value for every (hidden state, ray, context) cell. Letting the value
//! depend on the context evades the no-coloring result, since each
//! orthogonal triad can be served by its own per-context assignment; the
//! pipeline in [`run_conway_kochen_argument`] shows why twin correlations
//! plus causality close that escape route.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{rank, Ray};
use crate::ks::{
    build_structure, validate_coloring, Coloring, DirectionSet, OrthoStructure, Violation,
};
use crate::spacetime::{causally_independent, CausalVerdict, Observer, Scenario};

/// An apparatus context: the beam axis, constrained to be perpendicular to
/// the measured direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    axis: Ray,
}

impl Context {
    pub fn new(axis: Ray) -> Self {
        Context { axis }
    }

    pub fn axis(&self) -> &Ray {
        &self.axis
    }
}

/// True iff `r` is a usable apparatus axis for measuring direction `n`.
pub fn valid_context(n: &Ray, r: &Ray) -> bool {
    n.is_orthogonal_to(r)
}

/// True iff no single axis is perpendicular to every ray of the set, i.e.
/// the set spans all of R³. Coplanar sets (rank ≤ 2) admit one shared
/// context; anything of full rank forces at least two context values.
pub fn requires_multiple_contexts(set: &DirectionSet) -> bool {
    rank(set.rays()) >= 3
}

/// A finite contextual value table `F(hidden state, ray, context)`.
///
/// Hidden states are opaque labels; contexts are declared per ray and the
/// table must be total over its declared domain.
#[derive(Clone, Debug)]
pub struct ContextualModel {
    states: Vec<String>,
    contexts: Vec<Vec<Context>>,
    /// `values[state][ray][context]`, `true` meaning value 1.
    values: Vec<Vec<Vec<bool>>>,
}

impl ContextualModel {
    /// Builds and validates a model against its direction set: context
    /// lists must align with the set, every axis must be perpendicular to
    /// its ray, and `rows` (state, ray, context, value) must cover every
    /// cell exactly once.
    pub fn new(
        set: &DirectionSet,
        states: Vec<String>,
        contexts: Vec<Vec<Context>>,
        rows: &[(usize, usize, usize, bool)],
    ) -> Result<Self, Error> {
        if states.is_empty() {
            return Err(Error::ModelInvalid("no hidden states declared".to_string()));
        }
        if contexts.len() != set.len() {
            return Err(Error::ModelInvalid(format!(
                "context lists cover {} rays, set has {}",
                contexts.len(),
                set.len()
            )));
        }
        for (ray, ctxs) in contexts.iter().enumerate() {
            if ctxs.is_empty() {
                return Err(Error::ModelInvalid(format!(
                    "ray {ray} has no declared context"
                )));
            }
            for (context, ctx) in ctxs.iter().enumerate() {
                if !valid_context(set.ray(ray), ctx.axis()) {
                    return Err(Error::InvalidContext { ray, context });
                }
            }
        }

        let mut values: Vec<Vec<Vec<Option<bool>>>> = contexts
            .iter()
            .map(|ctxs| vec![vec![None; ctxs.len()]; states.len()])
            .collect();
        // values is indexed [ray][state][context] here to keep row checks
        // simple; transposed to [state][ray][context] below.
        for &(state, ray, context, value) in rows {
            if state >= states.len() {
                return Err(Error::IndexOutOfRange {
                    what: "hidden state",
                    index: state,
                    limit: states.len(),
                });
            }
            if ray >= set.len() {
                return Err(Error::IndexOutOfRange {
                    what: "ray",
                    index: ray,
                    limit: set.len(),
                });
            }
            if context >= contexts[ray].len() {
                return Err(Error::IndexOutOfRange {
                    what: "context",
                    index: context,
                    limit: contexts[ray].len(),
                });
            }
            let cell = &mut values[ray][state][context];
            if cell.is_some() {
                return Err(Error::ModelInvalid(format!(
                    "duplicate table row for state {state}, ray {ray}, context {context}"
                )));
            }
            *cell = Some(value);
        }

        let mut table = vec![Vec::with_capacity(set.len()); states.len()];
        for (ray, per_state) in values.iter().enumerate() {
            for (state, cells) in per_state.iter().enumerate() {
                let mut row = Vec::with_capacity(cells.len());
                for (context, cell) in cells.iter().enumerate() {
                    row.push(cell.ok_or_else(|| {
                        Error::ModelInvalid(format!(
                            "table is not total: missing state {state}, ray {ray}, context {context}"
                        ))
                    })?);
                }
                table[state].push(row);
            }
        }

        Ok(ContextualModel {
            states,
            contexts,
            values: table,
        })
    }

    /// Context-free model from a single coloring: one hidden state, one
    /// (deterministically chosen) perpendicular context per ray, values
    /// copied from the coloring.
    pub fn from_coloring(
        set: &DirectionSet,
        state: impl Into<String>,
        coloring: &Coloring,
    ) -> Result<Self, Error> {
        if coloring.len() != set.len() {
            return Err(Error::PartialColoring {
                expected: set.len(),
                got: coloring.len(),
            });
        }
        let contexts: Vec<Vec<Context>> = set
            .rays()
            .iter()
            .map(|r| vec![Context::new(r.perpendicular())])
            .collect();
        let rows: Vec<(usize, usize, usize, bool)> = (0..set.len())
            .map(|i| (0, i, 0, coloring.is_one(i)))
            .collect();
        ContextualModel::new(set, vec![state.into()], contexts, &rows)
    }

    pub fn state_labels(&self) -> &[String] {
        &self.states
    }

    pub fn contexts_of(&self, ray: usize) -> &[Context] {
        &self.contexts[ray]
    }

    pub fn value(&self, state: usize, ray: usize, context: usize) -> bool {
        self.values[state][ray][context]
    }

    pub fn ray_count(&self) -> usize {
        self.contexts.len()
    }
}

/// Outcome of one twin-consistency comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwinCheck {
    Equal(bool),
    Unequal { value_a: bool, value_b: bool },
}

/// Compares the tabled value for one direction under two apparatus
/// contexts, for a fixed hidden state. `Equal` certifies that twin
/// observers using contexts `context_a` and `context_b` would agree on
/// this direction; `Unequal` exhibits a twin violation of the model.
pub fn twin_consistency(
    model: &ContextualModel,
    state: usize,
    ray: usize,
    context_a: usize,
    context_b: usize,
) -> Result<TwinCheck, Error> {
    if state >= model.states.len() {
        return Err(Error::IndexOutOfRange {
            what: "hidden state",
            index: state,
            limit: model.states.len(),
        });
    }
    if ray >= model.ray_count() {
        return Err(Error::IndexOutOfRange {
            what: "ray",
            index: ray,
            limit: model.ray_count(),
        });
    }
    let limit = model.contexts_of(ray).len();
    for context in [context_a, context_b] {
        if context >= limit {
            return Err(Error::IndexOutOfRange {
                what: "context",
                index: context,
                limit,
            });
        }
    }
    let value_a = model.value(state, ray, context_a);
    let value_b = model.value(state, ray, context_b);
    Ok(if value_a == value_b {
        TwinCheck::Equal(value_a)
    } else {
        TwinCheck::Unequal { value_a, value_b }
    })
}

/// Per-triad choice of the 0-valued ray: the loophole witness. Each triad
/// is treated as its own measurement context, so a shared ray may be 0 in
/// one triad and 1 in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriadLocalAssignment {
    /// `zero_of[t]` is the ray index valued 0 in triad `t`.
    zero_of: Vec<usize>,
}

/// Assigns every triad its lowest-index member as the 0-valued ray. Every
/// single-triad measurement check passes by construction, for any set,
/// including sets with no global coloring at all.
pub fn build_loophole_model(structure: &OrthoStructure) -> TriadLocalAssignment {
    TriadLocalAssignment {
        zero_of: structure.triads().iter().map(|t| t[0]).collect(),
    }
}

impl TriadLocalAssignment {
    pub fn zero_ray(&self, triad: usize) -> usize {
        self.zero_of[triad]
    }

    pub fn len(&self) -> usize {
        self.zero_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zero_of.is_empty()
    }

    /// Checks every triad in isolation: exactly one 0, two 1s.
    pub fn passes_per_triad_checks(&self, structure: &OrthoStructure) -> bool {
        self.zero_of.len() == structure.triads().len()
            && structure
                .triads()
                .iter()
                .zip(&self.zero_of)
                .all(|(t, z)| t.contains(z))
    }

    /// Lifts the per-triad assignment into a contextual model with one
    /// hidden state. Each triad containing a ray contributes one context
    /// for it (the lowest-index other member, which is perpendicular by
    /// construction); the tabled value is 0 exactly when this triad chose
    /// the ray as its 0. Rays in no triad get a default perpendicular
    /// context and the value 1.
    pub fn lift(
        &self,
        set: &DirectionSet,
        structure: &OrthoStructure,
    ) -> Result<ContextualModel, Error> {
        let mut contexts: Vec<Vec<Context>> = Vec::with_capacity(set.len());
        let mut rows: Vec<(usize, usize, usize, bool)> = Vec::new();
        for ray in 0..set.len() {
            let triads = structure.triads_of(ray);
            if triads.is_empty() {
                contexts.push(vec![Context::new(set.ray(ray).perpendicular())]);
                rows.push((0, ray, 0, true));
                continue;
            }
            let mut ctxs = Vec::with_capacity(triads.len());
            for (slot, &t) in triads.iter().enumerate() {
                let triad = structure.triads()[t];
                let other = *triad
                    .iter()
                    .find(|&&m| m != ray)
                    .expect("triads have three distinct members");
                ctxs.push(Context::new(set.ray(other).clone()));
                rows.push((0, ray, slot, self.zero_of[t] != ray));
            }
            contexts.push(ctxs);
        }
        ContextualModel::new(set, vec!["h0".to_string()], contexts, &rows)
    }
}

/// A twin-consistency counterexample inside a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinWitness {
    pub state: String,
    pub ray: usize,
    pub context_a: usize,
    pub context_b: usize,
    pub value_a: u8,
    pub value_b: u8,
}

/// Scans the model's whole domain and returns every (state, ray, context
/// pair) on which the tabled values disagree. Empty output means the
/// collapsed context-free table is well defined.
pub fn twin_violations(model: &ContextualModel) -> Vec<TwinWitness> {
    let mut out = Vec::new();
    for state in 0..model.states.len() {
        for ray in 0..model.ray_count() {
            let ctxs = model.contexts_of(ray).len();
            for a in 0..ctxs {
                for b in a + 1..ctxs {
                    if let Ok(TwinCheck::Unequal { value_a, value_b }) =
                        twin_consistency(model, state, ray, a, b)
                    {
                        out.push(TwinWitness {
                            state: model.states[state].clone(),
                            ray,
                            context_a: a,
                            context_b: b,
                            value_a: u8::from(value_a),
                            value_b: u8::from(value_b),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A causality counterexample: one observer's context choice can reach
/// the other observer's measurement window.
#[derive(Clone, Debug, Serialize)]
pub struct CausalWitness {
    pub window_a: usize,
    pub window_b: usize,
    pub choice: EventJson,
    pub reached: EventJson,
}

/// Rational event coordinates rendered as strings for reports.
#[derive(Clone, Debug, Serialize)]
pub struct EventJson {
    pub t: String,
    pub x: [String; 3],
}

impl EventJson {
    fn from_event(e: &crate::spacetime::Event) -> Self {
        EventJson {
            t: e.t.to_string(),
            x: [e.x[0].to_string(), e.x[1].to_string(), e.x[2].to_string()],
        }
    }
}

/// Final verdict of the twin-argument pipeline.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    /// Collapse succeeded and the context-free coloring validates; only
    /// possible when the set admits a coloring at all.
    #[serde(rename = "CONSISTENT")]
    Consistent,
    /// Collapse succeeded but the coloring violates the constraints: the
    /// original no-coloring contradiction, now with contexts eliminated.
    #[serde(rename = "CONTRADICTION")]
    Contradiction {
        state: String,
        violations: Vec<Violation>,
    },
    /// The model's tabled values disagree across contexts somewhere, so it
    /// cannot reproduce perfect twin correlations.
    #[serde(rename = "TWIN-VIOLATION")]
    TwinViolation { witnesses: Vec<TwinWitness> },
    /// The scenario does not enforce independence: some context choice is
    /// causally connected to the other observer's window.
    #[serde(rename = "CAUSAL-DEPENDENCE-ALLOWED")]
    CausalDependenceAllowed { witness: CausalWitness },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Contradiction { .. } => "CONTRADICTION",
            Verdict::TwinViolation { .. } => "TWIN-VIOLATION",
            Verdict::CausalDependenceAllowed { .. } => "CAUSAL-DEPENDENCE-ALLOWED",
        }
    }
}

/// The full pipeline:
///
/// 1. every cross-observer window pair must be causally independent, so
///    neither context choice can inform the other side's outcome;
/// 2. the model must be twin-consistent on its whole domain;
/// 3. the model then collapses to a context-free coloring per hidden
///    state, which is validated against the set's constraints.
///
/// The schedule must cover every direction with at least one window per
/// observer, with context indices valid for the model.
pub fn run_conway_kochen_argument(
    set: &DirectionSet,
    model: &ContextualModel,
    scenario: &Scenario,
) -> Result<Verdict, Error> {
    if model.ray_count() != set.len() {
        return Err(Error::ModelInvalid(format!(
            "model covers {} rays, set has {}",
            model.ray_count(),
            set.len()
        )));
    }

    // Schedule coverage and index hygiene.
    let mut covered = vec![(false, false); set.len()];
    for w in &scenario.schedule {
        if w.direction >= set.len() {
            return Err(Error::IndexOutOfRange {
                what: "window direction",
                index: w.direction,
                limit: set.len(),
            });
        }
        if w.context >= model.contexts_of(w.direction).len() {
            return Err(Error::IndexOutOfRange {
                what: "window context",
                index: w.context,
                limit: model.contexts_of(w.direction).len(),
            });
        }
        match w.observer {
            Observer::A => covered[w.direction].0 = true,
            Observer::B => covered[w.direction].1 = true,
        }
    }
    if let Some(ray) = covered.iter().position(|&(a, b)| !(a && b)) {
        return Err(Error::ScheduleMissingDirection { ray });
    }

    // Step 1: context choices must be causally independent.
    for (ia, wa) in scenario.schedule.iter().enumerate() {
        if wa.observer != Observer::A {
            continue;
        }
        for (ib, wb) in scenario.schedule.iter().enumerate() {
            if wb.observer != Observer::B {
                continue;
            }
            if let CausalVerdict::Connected { choice, reached } =
                causally_independent(scenario, wa, wb)
            {
                return Ok(Verdict::CausalDependenceAllowed {
                    witness: CausalWitness {
                        window_a: ia,
                        window_b: ib,
                        choice: EventJson::from_event(&choice),
                        reached: EventJson::from_event(&reached),
                    },
                });
            }
        }
    }

    // Step 2: twin consistency over the model's whole domain.
    let witnesses = twin_violations(model);
    if !witnesses.is_empty() {
        return Ok(Verdict::TwinViolation { witnesses });
    }

    // Step 3: the common value per (state, ray) is now well defined;
    // collapse and validate.
    let structure = build_structure(set);
    for state in 0..model.state_labels().len() {
        let coloring = Coloring::new(
            (0..set.len())
                .map(|ray| model.value(state, ray, 0))
                .collect(),
        );
        let validity = validate_coloring(&structure, &coloring)?;
        if !validity.is_valid() {
            return Ok(Verdict::Contradiction {
                state: model.state_labels()[state].clone(),
                violations: validity.violations().to_vec(),
            });
        }
    }
    Ok(Verdict::Consistent)
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModelWire {
    schema_version: u32,
    hidden_states: Vec<String>,
    /// Per-ray context axes in the direction-set component syntax.
    contexts: Vec<Vec<String>>,
    /// Rows (state label, ray index, context index, value).
    table: Vec<(String, usize, usize, u8)>,
}

impl ContextualModel {
    pub fn from_json(text: &str, set: &DirectionSet) -> Result<Self, Error> {
        let wire: ModelWire = serde_json::from_str(text)?;
        let contexts = wire
            .contexts
            .iter()
            .map(|axes| {
                axes.iter()
                    .map(|s| {
                        s.parse::<Ray>()
                            .map(Context::new)
                            .map_err(Error::ModelInvalid)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let state_index = |label: &str| {
            wire.hidden_states
                .iter()
                .position(|s| s == label)
                .ok_or_else(|| Error::ModelInvalid(format!("unknown hidden state `{label}`")))
        };
        let rows = wire
            .table
            .iter()
            .map(|(label, ray, context, value)| {
                let value = match value {
                    0 => false,
                    1 => true,
                    other => {
                        return Err(Error::ModelInvalid(format!(
                            "table value must be 0 or 1, got {other}"
                        )))
                    }
                };
                Ok((state_index(label)?, *ray, *context, value))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        ContextualModel::new(set, wire.hidden_states, contexts, &rows)
    }

    pub fn to_json_string(&self) -> String {
        let contexts = self
            .contexts
            .iter()
            .map(|ctxs| {
                ctxs.iter()
                    .map(|c| {
                        let comp = c.axis().components();
                        format!(
                            "{},{} {},{} {},{}",
                            comp[0].rational_part(),
                            comp[0].sqrt2_coeff(),
                            comp[1].rational_part(),
                            comp[1].sqrt2_coeff(),
                            comp[2].rational_part(),
                            comp[2].sqrt2_coeff()
                        )
                    })
                    .collect()
            })
            .collect();
        let mut table = Vec::new();
        for (state, label) in self.states.iter().enumerate() {
            for ray in 0..self.ray_count() {
                for context in 0..self.contexts_of(ray).len() {
                    table.push((
                        label.clone(),
                        ray,
                        context,
                        u8::from(self.value(state, ray, context)),
                    ));
                }
            }
        }
        let wire = ModelWire {
            schema_version: 1,
            hidden_states: self.states.clone(),
            contexts,
            table,
        };
        serde_json::to_string_pretty(&wire).expect("model serialization cannot fail")
    }
}
