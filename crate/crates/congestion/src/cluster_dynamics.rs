//! Sticky dynamics of finite congested clusters in vacuum.
//!
//! A cluster is a block `[a, b]` at maximal density moving rigidly with speed
//! `cosθ`. When two blocks meet they merge into one block whose length is the
//! sum of the lengths and whose angle satisfies the conservation of
//! `∫Ψ(cosθ)dx`: the merged `Ψ` is the length-weighted average. The pressure
//! at the collision is impulsive, `p̄ = π(x)·δ(t − t_c)`, with `π` piecewise
//! linear, zero at both ends of the merged block and kinked at the contact
//! point `m`.

use crate::error::{Error, Result};
use crate::pressure_law::{angle_of_psi, check_angle, psi_of_angle, PressureLaw};
use serde::{Deserialize, Serialize};

/// Collision times closer than this are treated as simultaneous; the
/// leftmost pair merges first.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest gap between edges that still counts as touching.
pub const CONTACT_TOLERANCE: f64 = 1e-9;

/// A congested block `[a, b]` moving with speed `cosθ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
}

impl Cluster {
    /// Validates `a < b` and the angle.
    pub fn new(a: f64, b: f64, theta: f64) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cluster edges must satisfy a < b, got [{a}, {b}]"
            )));
        }
        check_angle(theta)?;
        Ok(Self { a, b, theta })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn speed(&self) -> f64 {
        self.theta.cos()
    }

    /// `Ψ(cosθ)`.
    pub fn psi(&self) -> f64 {
        psi_of_angle(self.theta)
    }

    /// The same block after moving for `dt`.
    pub fn translated(&self, dt: f64) -> Self {
        let shift = self.speed() * dt;
        Self {
            a: self.a + shift,
            b: self.b + shift,
            theta: self.theta,
        }
    }
}

/// The impulsive pressure weight `π` of a collision, stored as the
/// breakpoints `(a, 0)`, `(m, π(m))`, `(b, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiProfile {
    pub breakpoints: [(f64, f64); 3],
}

impl PiProfile {
    /// Linear interpolation between the breakpoints; zero outside `[a, b]`.
    pub fn eval(&self, x: f64) -> f64 {
        let [(a, _), (m, peak), (b, _)] = self.breakpoints;
        if x <= a || x >= b {
            0.0
        } else if x <= m {
            peak * (x - a) / (m - a)
        } else {
            peak * (b - x) / (b - m)
        }
    }

    pub fn peak(&self) -> f64 {
        self.breakpoints[1].1
    }
}

/// A merge of two adjacent clusters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub t_c: f64,
    /// Contact point of the two blocks.
    pub m: f64,
    pub theta_tilde: f64,
    pub pi_profile: PiProfile,
    /// Value of `π` at the left end from the left-branch formula; zero up to
    /// rounding when the merged angle is consistent.
    pub left_end_residual: f64,
    /// `L·Ψ̃ − (Lℓ·Ψℓ + Lr·Ψr)` with the merged angle as stored.
    pub psi_balance_residual: f64,
}

/// Merges two clusters that touch at `t_c`. Both clusters are given at their
/// positions at time `t_c`.
///
/// The merged block starts at `left.a` and has length `Lℓ + Lr` exactly; its
/// `Ψ` is the length-weighted average and `θ̃ ∈ (0, π)`. The profile is
/// `π(x) = (Ψ̃ − Ψr)(b − x)` on `[m, b]` and
/// `π(x) = (Ψ̃ − Ψℓ)(m − x) + (Ψ̃ − Ψr)(b − m)` on `[a, m]`.
pub fn collide(left: &Cluster, right: &Cluster, t_c: f64) -> Result<(Cluster, CollisionEvent)> {
    let gap = right.a - left.b;
    if gap.abs() > CONTACT_TOLERANCE {
        return Err(Error::Geometry { gap });
    }
    let (length_left, length_right) = (left.length(), right.length());
    let length = length_left + length_right;
    let (psi_left, psi_right) = (left.psi(), right.psi());
    let psi_merged = (length_left * psi_left + length_right * psi_right) / length;
    let theta_tilde = angle_of_psi(psi_merged);
    let a = left.a;
    let m = left.b;
    let b = a + length;
    let peak = (psi_merged - psi_right) * (b - m);
    let left_end_residual = (psi_merged - psi_left) * (m - a) + peak;
    let merged = Cluster {
        a,
        b,
        theta: theta_tilde,
    };
    let psi_balance_residual =
        length * merged.psi() - (length_left * psi_left + length_right * psi_right);
    let event = CollisionEvent {
        t_c,
        m,
        theta_tilde,
        pi_profile: PiProfile {
            breakpoints: [(a, 0.0), (m, peak), (b, 0.0)],
        },
        left_end_residual,
        psi_balance_residual,
    };
    Ok((merged, event))
}

/// Ordered, pairwise disjoint clusters at time `time`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSystem {
    pub clusters: Vec<Cluster>,
    pub law: PressureLaw,
    pub time: f64,
}

impl ClusterSystem {
    /// Validates ordering and disjointness.
    pub fn new(clusters: Vec<Cluster>, law: PressureLaw, time: f64) -> Result<Self> {
        for pair in clusters.windows(2) {
            if pair[0].b > pair[1].a {
                return Err(Error::InvalidParameter(format!(
                    "clusters must be sorted and disjoint: [{}, {}] overlaps [{}, {}]",
                    pair[0].a, pair[0].b, pair[1].a, pair[1].b
                )));
            }
        }
        Ok(Self {
            clusters,
            law,
            time,
        })
    }

    /// Sum of the block lengths.
    pub fn total_length(&self) -> f64 {
        self.clusters.iter().map(Cluster::length).sum()
    }

    /// `Σ L·Ψ(cosθ)`, conserved by every merge.
    pub fn psi_moment(&self) -> f64 {
        self.clusters.iter().map(|c| c.length() * c.psi()).sum()
    }

    fn advance(&mut self, dt: f64) {
        for cluster in &mut self.clusters {
            *cluster = cluster.translated(dt);
        }
        self.time += dt;
    }
}

/// Earliest upcoming collision `(index of the left block, t_c, m)` among
/// adjacent approaching pairs, or `None`. Ties within [`TIE_TOLERANCE`] go
/// to the leftmost pair.
pub fn next_collision(system: &ClusterSystem) -> Option<(usize, f64, f64)> {
    let mut best: Option<(usize, f64, f64)> = None;
    for (i, pair) in system.clusters.windows(2).enumerate() {
        let closing = pair[0].speed() - pair[1].speed();
        if closing <= 0.0 {
            continue;
        }
        let dt = ((pair[1].a - pair[0].b) / closing).max(0.0);
        let t_c = system.time + dt;
        if best.is_none_or(|(_, t_best, _)| t_c < t_best - TIE_TOLERANCE) {
            best = Some((i, t_c, pair[0].b + pair[0].speed() * dt));
        }
    }
    best
}

/// Positions of all clusters at one time; ids are stable between merges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub clusters: Vec<(usize, Cluster)>,
}

/// Output of [`simulate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simulation {
    /// Initial state, the state right after each event, and the final state.
    pub snapshots: Vec<Snapshot>,
    pub events: Vec<CollisionEvent>,
    pub final_system: ClusterSystem,
}

/// Event-driven integration up to `horizon`: all blocks move freely to the
/// next collision, the colliding pair merges, and so on.
pub fn simulate(system: &ClusterSystem, horizon: f64) -> Result<Simulation> {
    let mut current = system.clone();
    let mut ids: Vec<usize> = (0..current.clusters.len()).collect();
    let mut next_id = ids.len();
    let snapshot = |s: &ClusterSystem, ids: &[usize]| Snapshot {
        t: s.time,
        clusters: ids
            .iter()
            .copied()
            .zip(s.clusters.iter().copied())
            .collect(),
    };
    let mut snapshots = vec![snapshot(&current, &ids)];
    let mut events = Vec::new();
    while let Some((i, t_c, _)) = next_collision(&current) {
        if t_c > horizon {
            break;
        }
        current.advance(t_c - current.time);
        let (merged, event) = collide(&current.clusters[i], &current.clusters[i + 1], t_c)?;
        current.clusters.splice(i..=i + 1, [merged]);
        ids.splice(i..=i + 1, [next_id]);
        next_id += 1;
        events.push(event);
        snapshots.push(snapshot(&current, &ids));
    }
    if horizon > current.time {
        current.advance(horizon - current.time);
        snapshots.push(snapshot(&current, &ids));
    }
    Ok(Simulation {
        snapshots,
        events,
        final_system: current,
    })
}
