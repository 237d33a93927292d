//! Exact special-relativistic causality checks for twin scenarios.
//!
//! Everything here is arbitrary-precision rational arithmetic; cone
//! membership and spacelike separation compare squared intervals, so no
//! square roots or tolerances ever appear. Lightlike separation counts as
//! causally connected, which is the conservative convention for
//! independence claims.

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::geometry::{parse_rational, Rational};

/// A spacetime point with exact rational coordinates; times and lengths
/// are in natural units with the signal speed `c` supplied per scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub t: Rational,
    pub x: [Rational; 3],
}

impl Event {
    pub fn new(t: Rational, x: [Rational; 3]) -> Self {
        Event { t, x }
    }

    pub fn from_ints(t: i64, x: [i64; 3]) -> Self {
        Event {
            t: Rational::from_integer(t.into()),
            x: x.map(|c| Rational::from_integer(c.into())),
        }
    }
}

/// Inertial worldline: a straight line through `origin` with constant
/// `velocity` (same units as the scenario's `c`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Worldline {
    pub origin: Event,
    pub velocity: [Rational; 3],
}

impl Worldline {
    pub fn new(origin: Event, velocity: [Rational; 3]) -> Self {
        Worldline { origin, velocity }
    }

    pub fn position_at(&self, t: &Rational) -> [Rational; 3] {
        let dt = t - &self.origin.t;
        [
            &self.origin.x[0] + &self.velocity[0] * &dt,
            &self.origin.x[1] + &self.velocity[1] * &dt,
            &self.origin.x[2] + &self.velocity[2] * &dt,
        ]
    }

    pub fn event_at(&self, t: &Rational) -> Event {
        Event::new(t.clone(), self.position_at(t))
    }

    pub fn speed_squared(&self) -> Rational {
        norm_squared(&self.velocity)
    }

    /// True when the speed equals `c` exactly.
    pub fn is_lightlike(&self, c: &Rational) -> bool {
        self.speed_squared() == c * c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observer {
    A,
    B,
}

/// One scheduled measurement: `observer` measures direction `direction`
/// (an index into the companion direction set) with apparatus context
/// `context` (an index into that ray's declared context list) over the
/// closed time window `[start, start + duration]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementWindow {
    pub observer: Observer,
    pub direction: usize,
    pub context: usize,
    pub start: Rational,
    pub duration: Rational,
}

impl MeasurementWindow {
    pub fn new(
        observer: Observer,
        direction: usize,
        context: usize,
        start: Rational,
        duration: Rational,
    ) -> Self {
        MeasurementWindow {
            observer,
            direction,
            context,
            start,
            duration,
        }
    }

    pub fn end(&self) -> Rational {
        &self.start + &self.duration
    }
}

/// A full twin-measurement scenario: signal speed, common source event,
/// two observer worldlines, the measurement schedule and any external
/// signal events whose reach is being analyzed.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub c: Rational,
    pub source: Event,
    pub worldline_a: Worldline,
    pub worldline_b: Worldline,
    pub schedule: Vec<MeasurementWindow>,
    pub signals: Vec<Event>,
}

impl Scenario {
    /// Validates speeds and window shapes. Twin geometry (worldlines
    /// emanating from the source) is required only by the closed-form
    /// cone-intersection operations, which check it themselves, so lab
    /// frames with separated static observers are accepted here.
    pub fn new(
        c: Rational,
        source: Event,
        worldline_a: Worldline,
        worldline_b: Worldline,
        schedule: Vec<MeasurementWindow>,
        signals: Vec<Event>,
    ) -> Result<Self, Error> {
        if !c.is_positive() {
            return Err(Error::ScenarioInvalid("c must be positive".to_string()));
        }
        let c2 = &c * &c;
        for (label, w) in [("A", &worldline_a), ("B", &worldline_b)] {
            if w.speed_squared() > c2 {
                return Err(Error::ScenarioInvalid(format!(
                    "worldline {label} is faster than c"
                )));
            }
        }
        for (i, w) in schedule.iter().enumerate() {
            if !w.duration.is_positive() {
                return Err(Error::ScenarioInvalid(format!(
                    "window {i} has non-positive duration"
                )));
            }
        }
        Ok(Scenario {
            c,
            source,
            worldline_a,
            worldline_b,
            schedule,
            signals,
        })
    }

    /// Symmetric twin configuration: observers leave the source with
    /// velocities `±speed` along the given coordinate axis.
    pub fn symmetric_twin(
        c: Rational,
        source: Event,
        speed: Rational,
        axis: usize,
        schedule: Vec<MeasurementWindow>,
        signals: Vec<Event>,
    ) -> Result<Self, Error> {
        let mut va = [Rational::zero(), Rational::zero(), Rational::zero()];
        va[axis] = speed;
        let vb = [-va[0].clone(), -va[1].clone(), -va[2].clone()];
        Scenario::new(
            c,
            source.clone(),
            Worldline::new(source.clone(), va),
            Worldline::new(source, vb),
            schedule,
            signals,
        )
    }

    pub fn worldline(&self, observer: Observer) -> &Worldline {
        match observer {
            Observer::A => &self.worldline_a,
            Observer::B => &self.worldline_b,
        }
    }

    /// Latest window end in the schedule.
    pub fn latest_window_end(&self) -> Result<Rational, Error> {
        self.schedule
            .iter()
            .map(MeasurementWindow::end)
            .max()
            .ok_or(Error::EmptySchedule)
    }

    /// The symmetric collinear speed when the scenario is a twin
    /// configuration along one axis, else an unsupported-configuration
    /// error. Returns the absolute rational speed.
    fn symmetric_axis_speed(&self) -> Result<Rational, Error> {
        if self.worldline_a.origin != self.source || self.worldline_b.origin != self.source {
            return Err(Error::UnsupportedConfiguration(
                "worldlines do not emanate from the source".to_string(),
            ));
        }
        let va = &self.worldline_a.velocity;
        let vb = &self.worldline_b.velocity;
        for i in 0..3 {
            if va[i] != -&vb[i] {
                return Err(Error::UnsupportedConfiguration(
                    "worldlines are not symmetric about the source".to_string(),
                ));
            }
        }
        let nonzero: Vec<usize> = (0..3).filter(|&i| !va[i].is_zero()).collect();
        match nonzero.len() {
            0 => Ok(Rational::zero()),
            1 => Ok(va[nonzero[0]].abs()),
            _ => Err(Error::UnsupportedConfiguration(
                "twin velocity is not along a single coordinate axis".to_string(),
            )),
        }
    }
}

fn norm_squared(v: &[Rational; 3]) -> Rational {
    &v[0] * &v[0] + &v[1] * &v[1] + &v[2] * &v[2]
}

fn displacement_squared(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    let d = [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]];
    norm_squared(&d)
}

/// True iff `e` can influence `apex`: `t_e ≤ t_apex` and
/// `c²(t_apex − t_e)² ≥ ‖x_apex − x_e‖²`. The lightlike boundary is
/// included.
pub fn in_past_cone(e: &Event, apex: &Event, c: &Rational) -> bool {
    if e.t > apex.t {
        return false;
    }
    let dt = &apex.t - &e.t;
    c * c * &dt * &dt >= displacement_squared(&apex.x, &e.x)
}

/// Exactly spacelike: neither event can influence the other.
pub fn spacelike_separated(a: &Event, b: &Event, c: &Rational) -> bool {
    let dt = &a.t - &b.t;
    c * c * &dt * &dt < displacement_squared(&a.x, &b.x)
}

/// Latest time contained in both past cones of the twins observed at
/// coordinate time `t`, for the symmetric collinear configuration:
/// `t − (v/c)(t − t_source)`, attained on the midline. For `v = c` this is
/// the source time at every `t`.
pub fn intersection_apex_time(scenario: &Scenario, t: &Rational) -> Result<Rational, Error> {
    let speed = scenario.symmetric_axis_speed()?;
    if *t < scenario.source.t {
        return Err(Error::UnsupportedConfiguration(
            "observation time precedes the source event".to_string(),
        ));
    }
    let dt = t - &scenario.source.t;
    Ok(t - speed / &scenario.c * dt)
}

/// Outcome of a causal-independence check between two measurement windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CausalVerdict {
    Independent,
    /// A choice event of one window is lightlike- or timelike-connected to
    /// an event inside the other observer's window.
    Connected {
        choice: Box<Event>,
        reached: Box<Event>,
    },
}

impl CausalVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, CausalVerdict::Independent)
    }
}

/// Checks that the choice event of each window (its observer's position at
/// the window start) is spacelike-separated from *every* event of the
/// other observer's full window. The separation margin is a quadratic in
/// the window parameter with non-positive leading coefficient (speeds are
/// ≤ c), so checking both window endpoints is exact.
pub fn causally_independent(
    scenario: &Scenario,
    wa: &MeasurementWindow,
    wb: &MeasurementWindow,
) -> CausalVerdict {
    if let Some(v) = choice_reaches_window(scenario, wa, wb) {
        return v;
    }
    if let Some(v) = choice_reaches_window(scenario, wb, wa) {
        return v;
    }
    CausalVerdict::Independent
}

fn choice_reaches_window(
    scenario: &Scenario,
    chooser: &MeasurementWindow,
    window: &MeasurementWindow,
) -> Option<CausalVerdict> {
    let choice = scenario
        .worldline(chooser.observer)
        .event_at(&chooser.start);
    let other = scenario.worldline(window.observer);
    for endpoint in [window.start.clone(), window.end()] {
        let reached = other.event_at(&endpoint);
        if !spacelike_separated(&choice, &reached, &scenario.c) {
            return Some(CausalVerdict::Connected {
                choice: Box::new(choice),
                reached: Box::new(reached),
            });
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionMembership {
    Inside,
    Outside,
}

/// Membership in the common-past region at the latest scheduled time:
/// `e` is inside iff it lies in both past cones with apexes at the
/// observers' positions at T*, the latest window end in the schedule.
pub fn h_prime_region_check(scenario: &Scenario, e: &Event) -> Result<RegionMembership, Error> {
    let t_star = scenario.latest_window_end()?;
    let apex_a = scenario.worldline_a.event_at(&t_star);
    let apex_b = scenario.worldline_b.event_at(&t_star);
    let inside = in_past_cone(e, &apex_a, &scenario.c) && in_past_cone(e, &apex_b, &scenario.c);
    Ok(if inside {
        RegionMembership::Inside
    } else {
        RegionMembership::Outside
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbePattern {
    Increasing,
    Constant,
    Violation,
}

/// Evaluates [`intersection_apex_time`] at each probe time and classifies
/// the sequence. Subluminal twins must produce a strictly increasing
/// sequence and lightlike twins a constant one; anything else signals an
/// implementation bug.
pub fn monotonicity_probe(
    scenario: &Scenario,
    times: &[Rational],
) -> Result<(Vec<Rational>, ProbePattern), Error> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("no probe times given".to_string()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "probe times must be strictly increasing".to_string(),
        ));
    }
    let apexes = times
        .iter()
        .map(|t| intersection_apex_time(scenario, t))
        .collect::<Result<Vec<_>, _>>()?;
    let increasing = apexes.windows(2).all(|w| w[0] < w[1]);
    let constant = apexes.windows(2).all(|w| w[0] == w[1]);
    let pattern = if apexes.len() == 1 || constant {
        ProbePattern::Constant
    } else if increasing {
        ProbePattern::Increasing
    } else {
        ProbePattern::Violation
    };
    Ok((apexes, pattern))
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub(crate) struct EventWire {
    pub t: String,
    pub x: [String; 3],
}

#[derive(Serialize, Deserialize)]
struct WorldlineWire {
    #[serde(skip_serializing_if = "Option::is_none")]
    origin: Option<EventWire>,
    velocity: [String; 3],
}

#[derive(Serialize, Deserialize)]
struct WindowWire {
    observer: Observer,
    direction: usize,
    context: usize,
    start: String,
    duration: String,
}

#[derive(Serialize, Deserialize)]
struct ScenarioWire {
    schema_version: u32,
    c: String,
    source: EventWire,
    worldline_a: WorldlineWire,
    worldline_b: WorldlineWire,
    #[serde(default)]
    schedule: Vec<WindowWire>,
    #[serde(default)]
    signals: Vec<EventWire>,
}

fn wire_rational(s: &str, what: &str) -> Result<Rational, Error> {
    parse_rational(s).map_err(|msg| Error::ScenarioInvalid(format!("{what}: {msg}")))
}

impl EventWire {
    pub(crate) fn to_event(&self, what: &str) -> Result<Event, Error> {
        Ok(Event::new(
            wire_rational(&self.t, what)?,
            [
                wire_rational(&self.x[0], what)?,
                wire_rational(&self.x[1], what)?,
                wire_rational(&self.x[2], what)?,
            ],
        ))
    }

    pub(crate) fn from_event(e: &Event) -> EventWire {
        EventWire {
            t: e.t.to_string(),
            x: [e.x[0].to_string(), e.x[1].to_string(), e.x[2].to_string()],
        }
    }
}

fn wire_worldline(w: &WorldlineWire, source: &Event, what: &str) -> Result<Worldline, Error> {
    let origin = match &w.origin {
        Some(e) => e.to_event(what)?,
        None => source.clone(),
    };
    Ok(Worldline::new(
        origin,
        [
            wire_rational(&w.velocity[0], what)?,
            wire_rational(&w.velocity[1], what)?,
            wire_rational(&w.velocity[2], what)?,
        ],
    ))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let wire: ScenarioWire = serde_json::from_str(text)?;
        let source = wire.source.to_event("source")?;
        let worldline_a = wire_worldline(&wire.worldline_a, &source, "worldline_a")?;
        let worldline_b = wire_worldline(&wire.worldline_b, &source, "worldline_b")?;
        let schedule = wire
            .schedule
            .iter()
            .enumerate()
            .map(|(i, w)| {
                Ok(MeasurementWindow::new(
                    w.observer,
                    w.direction,
                    w.context,
                    wire_rational(&w.start, &format!("window {i} start"))?,
                    wire_rational(&w.duration, &format!("window {i} duration"))?,
                ))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let signals = wire
            .signals
            .iter()
            .enumerate()
            .map(|(i, e)| e.to_event(&format!("signal {i}")))
            .collect::<Result<Vec<_>, Error>>()?;
        Scenario::new(
            wire_rational(&wire.c, "c")?,
            source,
            worldline_a,
            worldline_b,
            schedule,
            signals,
        )
    }

    pub fn to_json_string(&self) -> String {
        let wire = ScenarioWire {
            schema_version: 1,
            c: self.c.to_string(),
            source: EventWire::from_event(&self.source),
            worldline_a: WorldlineWire {
                origin: (self.worldline_a.origin != self.source)
                    .then(|| EventWire::from_event(&self.worldline_a.origin)),
                velocity: self.worldline_a.velocity.clone().map(|v| v.to_string()),
            },
            worldline_b: WorldlineWire {
                origin: (self.worldline_b.origin != self.source)
                    .then(|| EventWire::from_event(&self.worldline_b.origin)),
                velocity: self.worldline_b.velocity.clone().map(|v| v.to_string()),
            },
            schedule: self
                .schedule
                .iter()
                .map(|w| WindowWire {
                    observer: w.observer,
                    direction: w.direction,
                    context: w.context,
                    start: w.start.to_string(),
                    duration: w.duration.to_string(),
                })
                .collect(),
            signals: self.signals.iter().map(EventWire::from_event).collect(),
        };
        serde_json::to_string_pretty(&wire).expect("scenario serialization cannot fail")
    }
}
