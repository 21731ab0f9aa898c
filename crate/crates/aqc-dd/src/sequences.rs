//! Compilation of CDD, UDD and QDD into explicit pulse schedules and the
//! toggled-propagator assembly.
//!
//! CDD level `l` symmetrizes over the decoupling group
//! `G = (I, X, Y, Z)` recursively: the sweep is split into `4^l` equal
//! segments and segment `m` (multi-index `k_1..k_l`, base-4 digits of
//! `m-1`) is conjugated by the dressing operator
//! `C_m = g_{k_1} g_{k_2} ... g_{k_l}`. Flattening the recursion leaves a
//! single net pulse `C_{m+1}† C_m` at each interior boundary and the
//! residual `C_{4^l}` as the end-of-sequence frame correction, so the
//! schedule composed with free segments reproduces the recursion as an
//! exact matrix product. Net pulses that coalesce to a phased identity
//! are elided with their phase folded into the frame correction (scalars
//! commute through everything).
//!
//! QDD nests an inner single-axis UDD sequence into every interval of an
//! outer one; each inner block carries its own endpoint factor, so
//! coincident pulses at interval boundaries multiply into a single
//! phase-tracked Pauli string.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{unitarity_error, Operator};
use crate::pauli::{Pauli, PauliString};

/// Segment unitaries fed to [`toggled_propagator`] must satisfy
/// `max|U†U - I|` below this bound.
const SEGMENT_UNITARITY_TOL: f64 = 1e-8;

/// One zero-width pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseEvent {
    pub time: f64,
    pub pulse: PauliString,
}

/// Which construction produced a schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceFamily {
    /// No pulses: plain (possibly faulty) evolution.
    None,
    Cdd { level: u32 },
    Udd { order: u32, axis: Pauli },
    Qdd { inner: u32, outer: u32 },
}

/// An ordered pulse schedule over `[0, T]` plus the frame correction
/// applied at `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    events: Vec<PulseEvent>,
    total_time: f64,
    frame_correction: PauliString,
    family: SequenceFamily,
    expected_order: u32,
}

impl PulseSchedule {
    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn frame_correction(&self) -> &PauliString {
        &self.frame_correction
    }

    pub fn family(&self) -> SequenceFamily {
        self.family
    }

    /// Decoupling order the construction aims for.
    pub fn expected_order(&self) -> u32 {
        self.expected_order
    }

    pub fn n_qubits(&self) -> usize {
        self.frame_correction.len()
    }

    pub fn is_free(&self) -> bool {
        self.events.is_empty() && self.frame_correction.is_identity_label()
    }

    /// Number of DD-free evolution intervals the construction divides
    /// `[0, T]` into (before coalescing): `4^l` for CDD,
    /// `(M1+1)(M2+1)` for QDD, `M+1` for UDD.
    pub fn base_interval_count(&self) -> usize {
        match self.family {
            SequenceFamily::None => 1,
            SequenceFamily::Cdd { level } => 4usize.pow(level),
            SequenceFamily::Udd { order, .. } => order as usize + 1,
            SequenceFamily::Qdd { inner, outer } => {
                (inner as usize + 1) * (outer as usize + 1)
            }
        }
    }

    /// Shortest gap between consecutive pulse boundaries (per base
    /// interval), used to pick noise grids.
    pub fn shortest_interval(&self) -> f64 {
        self.total_time / self.base_interval_count() as f64
    }

    pub fn label(&self) -> String {
        match self.family {
            SequenceFamily::None => "faulty".to_string(),
            SequenceFamily::Cdd { level } => format!("cdd{level}"),
            SequenceFamily::Udd { order, .. } => format!("udd{order}"),
            SequenceFamily::Qdd { inner, outer } => format!("qdd{inner},{outer}"),
        }
    }
}

/// Interior Uhrig times `δ_k = T sin²[kπ / (2M+2)]` for `k = 1..M`,
/// strictly increasing inside `(0, T)`.
pub fn uhrig_times(order: u32, total_time: f64) -> Vec<f64> {
    let m = order as usize;
    (1..=m)
        .map(|k| {
            let arg = k as f64 * std::f64::consts::PI / (2.0 * m as f64 + 2.0);
            total_time * arg.sin().powi(2)
        })
        .collect()
}

/// Schedule with no pulses at all.
pub fn free_schedule(n_qubits: usize, total_time: f64) -> PulseSchedule {
    PulseSchedule {
        events: Vec::new(),
        total_time,
        frame_correction: PauliString::identity(n_qubits),
        family: SequenceFamily::None,
        expected_order: 0,
    }
}

/// The decoupling group in its fixed symmetrization order.
fn group_elements(n_qubits: usize) -> [PauliString; 4] {
    [
        PauliString::identity(n_qubits),
        PauliString::uniform(n_qubits, Pauli::X),
        PauliString::uniform(n_qubits, Pauli::Y),
        PauliString::uniform(n_qubits, Pauli::Z),
    ]
}

/// Flattened concatenated-DD schedule at the given level.
pub fn cdd_schedule(n_qubits: usize, level: u32, total_time: f64) -> PulseSchedule {
    let group = group_elements(n_qubits);
    let segments = 4usize.pow(level);
    let tau = total_time / segments as f64;

    // dressing operator of segment m (1-based): product of group
    // elements over the base-4 digits of m-1, most significant first
    let dressing = |m: usize| -> PauliString {
        let mut acc = PauliString::identity(n_qubits);
        let mut rem = m - 1;
        for digit_pos in (0..level).rev() {
            let digit = (rem / 4usize.pow(digit_pos)) % 4;
            rem %= 4usize.pow(digit_pos);
            acc = acc.mul(&group[digit]).expect("equal lengths");
        }
        acc
    };

    let mut events = Vec::new();
    let mut frame = dressing(segments);
    for m in 1..segments {
        let net = dressing(m + 1)
            .adjoint()
            .mul(&dressing(m))
            .expect("equal lengths");
        if net.is_identity_label() {
            // a scalar commutes with every factor; keep it on the frame
            frame = frame.times_phase(net.phase());
        } else {
            events.push(PulseEvent {
                time: m as f64 * tau,
                pulse: net,
            });
        }
    }

    PulseSchedule {
        events,
        total_time,
        frame_correction: frame,
        family: SequenceFamily::Cdd { level },
        expected_order: level,
    }
}

/// Single-axis Uhrig schedule: pulses at the interior Uhrig times, with
/// the endpoint factors folded into the frame correction.
pub fn udd_schedule(
    n_qubits: usize,
    order: u32,
    axis: Pauli,
    total_time: f64,
) -> PulseSchedule {
    let omega = PauliString::uniform(n_qubits, axis);
    let events = uhrig_times(order, total_time)
        .into_iter()
        .map(|time| PulseEvent {
            time,
            pulse: omega.clone(),
        })
        .collect();
    // net operator at T: Ω from the last interval times the Ω^{M+1}
    // endpoint factor; Ω² = +I, so only the parity of M survives
    let frame = if order % 2 == 1 {
        omega
    } else {
        PauliString::identity(n_qubits)
    };
    PulseSchedule {
        events,
        total_time,
        frame_correction: frame,
        family: SequenceFamily::Udd { order, axis },
        expected_order: order,
    }
}

/// Quadratic DD with the default nesting: inner X-axis UDD of order
/// `inner` inside every interval of an outer Z-axis UDD of order `outer`.
pub fn qdd_schedule(
    n_qubits: usize,
    inner: u32,
    outer: u32,
    total_time: f64,
) -> PulseSchedule {
    qdd_schedule_with_axes(n_qubits, inner, outer, total_time, Pauli::X, Pauli::Z)
}

/// QDD with explicit inner/outer pulse axes (`inner_axis != outer_axis`).
pub fn qdd_schedule_with_axes(
    n_qubits: usize,
    inner: u32,
    outer: u32,
    total_time: f64,
    inner_axis: Pauli,
    outer_axis: Pauli,
) -> PulseSchedule {
    let omega1 = PauliString::uniform(n_qubits, inner_axis);
    let omega2 = PauliString::uniform(n_qubits, outer_axis);
    // each inner block ends with Ω1^{M1+2}; parity decides the leftover
    let inner_end = if inner % 2 == 1 {
        omega1.clone()
    } else {
        PauliString::identity(n_qubits)
    };

    let mut bounds = vec![0.0];
    bounds.extend(uhrig_times(outer, total_time));
    bounds.push(total_time);

    let mut events = Vec::new();
    let mut frame = PauliString::identity(n_qubits);
    for k in 0..=outer as usize {
        let (a, b) = (bounds[k], bounds[k + 1]);
        for t in uhrig_times(inner, b - a) {
            events.push(PulseEvent {
                time: a + t,
                pulse: omega1.clone(),
            });
        }
        // at the interval end: inner leftover, then the outer pulse
        let boundary = omega2.mul(&inner_end).expect("equal lengths");
        if k < outer as usize {
            if boundary.is_identity_label() {
                frame = frame.times_phase(boundary.phase());
            } else {
                events.push(PulseEvent {
                    time: b,
                    pulse: boundary,
                });
            }
        } else {
            // k = outer: the last interval's boundary operator combines
            // with the Ω2^{M2+1} endpoint factor (Ω2² = +I, so only the
            // parity of M2+1 survives)
            let endpoint = if (outer + 1) % 2 == 1 {
                omega2.clone()
            } else {
                PauliString::identity(n_qubits)
            };
            frame = endpoint
                .mul(&boundary)
                .expect("equal lengths")
                .mul(&frame)
                .expect("equal lengths");
        }
    }

    PulseSchedule {
        events,
        total_time,
        frame_correction: frame,
        family: SequenceFamily::Qdd { inner, outer },
        expected_order: inner.min(outer),
    }
}

/// Assembles the toggled propagator: the frame correction times segment
/// evolutions interleaved with pulse matrices, ordered right-to-left in
/// time. `segment_evolver(t_later, t_earlier)` must return unitaries.
///
/// With segments produced by the DD-free evolution this equals the
/// defining recursive/nested matrix products of the sequence families.
pub fn toggled_propagator(
    schedule: &PulseSchedule,
    segment_evolver: &mut dyn FnMut(f64, f64) -> Result<Operator>,
) -> Result<Operator> {
    let n = schedule.n_qubits();
    let mut evolve = |later: f64, earlier: f64| -> Result<Operator> {
        let u = segment_evolver(later, earlier)?;
        let err = unitarity_error(&u);
        if err > SEGMENT_UNITARITY_TOL {
            return Err(Error::integrity(format!(
                "segment [{earlier}, {later}] is not unitary: max|U†U - I| = {err:.3e}"
            )));
        }
        Ok(u)
    };

    let mut prev = 0.0;
    let mut acc: Option<Operator> = None;
    for event in &schedule.events {
        let seg = evolve(event.time, prev)?;
        let pulse = event.pulse.matrix(n)?;
        let step = pulse * seg;
        acc = Some(match acc {
            Some(u) => step * u,
            None => step,
        });
        prev = event.time;
    }
    let last = evolve(schedule.total_time, prev)?;
    let mut u = match acc {
        Some(u) => last * u,
        None => last,
    };
    if !schedule.frame_correction.is_identity_label()
        || schedule.frame_correction.phase() != crate::pauli::Phase::ONE
    {
        u = schedule.frame_correction.matrix(n)? * u;
    }
    Ok(u)
}

/// Text export: header lines followed by one `event` line per pulse.
/// Times use the shortest exact decimal representation, so parsing the
/// output reproduces the schedule bit for bit.
pub fn export_schedule(schedule: &PulseSchedule) -> String {
    let mut out = String::new();
    let family = match schedule.family {
        SequenceFamily::None => "none".to_string(),
        SequenceFamily::Cdd { level } => format!("cdd {level}"),
        SequenceFamily::Udd { order, axis } => {
            format!("udd {order} {}", PauliString::uniform(1, axis))
        }
        SequenceFamily::Qdd { inner, outer } => format!("qdd {inner} {outer}"),
    };
    let _ = writeln!(out, "family {family}");
    let _ = writeln!(out, "qubits {}", schedule.n_qubits());
    let _ = writeln!(out, "total_time {}", schedule.total_time);
    let _ = writeln!(out, "expected_order {}", schedule.expected_order);
    let _ = writeln!(out, "frame {}", schedule.frame_correction);
    for event in &schedule.events {
        let _ = writeln!(out, "event {} {}", event.time, event.pulse);
    }
    out
}

/// Parses the [`export_schedule`] format.
pub fn parse_schedule(text: &str) -> Result<PulseSchedule> {
    let mut family = None;
    let mut qubits = None;
    let mut total_time = None;
    let mut expected_order = None;
    let mut frame: Option<PauliString> = None;
    let mut events = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let bad =
            |what: &str| Error::input(format!("schedule line {}: {what}: '{line}'", lineno + 1));
        match key {
            "family" => {
                family = Some(match rest.as_slice() {
                    ["none"] => SequenceFamily::None,
                    ["cdd", l] => SequenceFamily::Cdd {
                        level: l.parse().map_err(|_| bad("bad level"))?,
                    },
                    ["udd", m, axis] => {
                        let p: PauliString = axis.parse()?;
                        SequenceFamily::Udd {
                            order: m.parse().map_err(|_| bad("bad order"))?,
                            axis: p.factors()[0],
                        }
                    }
                    ["qdd", m1, m2] => SequenceFamily::Qdd {
                        inner: m1.parse().map_err(|_| bad("bad order"))?,
                        outer: m2.parse().map_err(|_| bad("bad order"))?,
                    },
                    _ => return Err(bad("unknown family")),
                });
            }
            "qubits" => qubits = Some(rest[0].parse::<usize>().map_err(|_| bad("bad count"))?),
            "total_time" => {
                total_time = Some(rest[0].parse::<f64>().map_err(|_| bad("bad time"))?)
            }
            "expected_order" => {
                expected_order = Some(rest[0].parse::<u32>().map_err(|_| bad("bad order"))?)
            }
            "frame" => frame = Some(rest[0].parse()?),
            "event" => {
                if rest.len() != 2 {
                    return Err(bad("expected 'event <time> <pulse>'"));
                }
                let time: f64 = rest[0].parse().map_err(|_| bad("bad time"))?;
                let pulse: PauliString = rest[1].parse()?;
                events.push(PulseEvent { time, pulse });
            }
            _ => return Err(bad("unknown key")),
        }
    }

    let total_time = total_time.ok_or_else(|| Error::input("schedule missing total_time"))?;
    let frame = frame.ok_or_else(|| Error::input("schedule missing frame"))?;
    let n = qubits.ok_or_else(|| Error::input("schedule missing qubit count"))?;
    if frame.len() != n || events.iter().any(|e| e.pulse.len() != n) {
        return Err(Error::input("schedule pulse length mismatch".to_string()));
    }
    if events.windows(2).any(|w| w[0].time >= w[1].time)
        || events
            .iter()
            .any(|e| e.time <= 0.0 || e.time >= total_time)
    {
        return Err(Error::input(
            "schedule times must be strictly increasing inside (0, T)".to_string(),
        ));
    }
    Ok(PulseSchedule {
        events,
        total_time,
        frame_correction: frame,
        family: family.ok_or_else(|| Error::input("schedule missing family"))?,
        expected_order: expected_order.unwrap_or(0),
    })
}
