//! Per-component up/down chronologies and their merged event stream.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::sampling::{sample_repair_time, sample_time_to_failure, ComponentReliability, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Branch,
    CommSwitch,
    Controller,
    Server,
}

/// Components order by kind first, which fixes the tie-break for
/// simultaneous events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId {
    pub kind: ComponentKind,
    pub id: u32,
}

impl ComponentId {
    pub fn branch(id: u32) -> Self {
        Self {
            kind: ComponentKind::Branch,
            id,
        }
    }

    pub fn comm_switch(id: u32) -> Self {
        Self {
            kind: ComponentKind::CommSwitch,
            id,
        }
    }

    pub fn controller(id: u32) -> Self {
        Self {
            kind: ComponentKind::Controller,
            id,
        }
    }

    pub fn server(id: u32) -> Self {
        Self {
            kind: ComponentKind::Server,
            id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentState {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Hours since the start of the horizon.
    pub time: f64,
    pub state: ComponentState,
}

/// Alternating up/down history of one component over `[0, horizon]`,
/// starting up at time 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTransitionVector {
    pub component: ComponentId,
    pub horizon: f64,
    pub events: Vec<Transition>,
}

impl StateTransitionVector {
    /// A vector that never leaves the up state.
    pub fn always_up(component: ComponentId, horizon: f64) -> Self {
        Self {
            component,
            horizon,
            events: Vec::new(),
        }
    }

    /// Builds a vector from explicit `(fail, repair)` times; `None` repair
    /// means still down at the horizon.
    pub fn from_outages(
        component: ComponentId,
        horizon: f64,
        outages: &[(f64, Option<f64>)],
    ) -> Self {
        let mut events = Vec::with_capacity(outages.len() * 2);
        for &(fail, repair) in outages {
            events.push(Transition {
                time: fail,
                state: ComponentState::Down,
            });
            if let Some(r) = repair {
                events.push(Transition {
                    time: r,
                    state: ComponentState::Up,
                });
            }
        }
        Self {
            component,
            horizon,
            events,
        }
    }

    /// State after every event at or before `t`.
    pub fn state_at(&self, t: f64) -> Result<ComponentState> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::TimeOutOfRange {
                time: t,
                horizon: self.horizon,
            });
        }
        let applied = self.events.partition_point(|e| e.time <= t);
        Ok(if applied == 0 {
            ComponentState::Up
        } else {
            self.events[applied - 1].state
        })
    }

    /// First repair strictly after `t`, if any falls inside the horizon.
    pub fn next_up_after(&self, t: f64) -> Option<f64> {
        let from = self.events.partition_point(|e| e.time <= t);
        self.events[from..]
            .iter()
            .find(|e| e.state == ComponentState::Up)
            .map(|e| e.time)
    }

    /// `(fail, repair)` pairs; the repair is clamped to the horizon for an
    /// outage still open at the end.
    pub fn outages(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.events.chunks(2).map(move |pair| {
            let end = pair.get(1).map_or(self.horizon, |e| e.time);
            (pair[0].time, end)
        })
    }

    pub fn failure_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.state == ComponentState::Down)
            .count()
    }

    pub fn down_time(&self) -> f64 {
        self.outages().map(|(a, b)| b - a).sum()
    }

    pub fn up_time(&self) -> f64 {
        self.horizon - self.down_time()
    }
}

/// Samples a chronology: exponential times to failure alternating with
/// normal repair times, until `horizon_hours` is passed. An outage still
/// running at the horizon is truncated there.
pub fn generate_transition_vector(
    component: ComponentId,
    params: &ComponentReliability,
    horizon_hours: f64,
    stream: &mut RandomStream,
) -> Result<StateTransitionVector> {
    if !(horizon_hours.is_finite() && horizon_hours > 0.0) {
        return Err(Error::Parameter(format!(
            "horizon must be > 0, got {horizon_hours}"
        )));
    }
    let mut vector = StateTransitionVector::always_up(component, horizon_hours);
    if params.lambda == 0.0 {
        return Ok(vector);
    }
    let mut t = 0.0;
    loop {
        t += sample_time_to_failure(params.lambda, stream)?;
        if t >= horizon_hours {
            break;
        }
        vector.events.push(Transition {
            time: t,
            state: ComponentState::Down,
        });
        t += sample_repair_time(params, stream);
        if t >= horizon_hours {
            break;
        }
        vector.events.push(Transition {
            time: t,
            state: ComponentState::Up,
        });
    }
    Ok(vector)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    Fail,
    Repair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub component: ComponentId,
    pub kind: TransitionKind,
}

pub type EventStream = Vec<Event>;

/// Merges vectors into one time-ordered stream. Equal times are ordered by
/// component kind (branch, comm switch, controller, server) then id.
pub fn merge_streams(vectors: &[StateTransitionVector]) -> Result<EventStream> {
    if let Some(first) = vectors.first() {
        if let Some(bad) = vectors.iter().find(|v| v.horizon != first.horizon) {
            return Err(Error::HorizonMismatch {
                expected: first.horizon,
                found: bad.horizon,
            });
        }
    }
    let mut events: EventStream = vectors
        .iter()
        .flat_map(|v| {
            v.events.iter().map(move |e| Event {
                time: e.time,
                component: v.component,
                kind: match e.state {
                    ComponentState::Down => TransitionKind::Fail,
                    ComponentState::Up => TransitionKind::Repair,
                },
            })
        })
        .collect();
    // Stable, so one component's own events keep their order.
    events.sort_by(|a, b| match a.time.total_cmp(&b.time) {
        Ordering::Equal => a.component.cmp(&b.component),
        other => other,
    });
    Ok(events)
}
