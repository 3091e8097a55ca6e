use congestion::cluster_dynamics::{collide, next_collision, simulate, Cluster, ClusterSystem};
use congestion::pressure_law::{angle_of_psi, PressureLaw};
use congestion::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn unit() -> PressureLaw {
    PressureLaw::new(1.0, 2.0).unwrap()
}

/// `Ψ(cosθ) = −ln tan(θ/2)`.
fn psi_oracle(theta: f64) -> f64 {
    -(theta / 2.0).tan().ln()
}

fn block(a: f64, b: f64, theta: f64) -> Cluster {
    Cluster::new(a, b, theta).unwrap()
}

#[test]
fn parallel_blocks_never_collide() {
    let system = ClusterSystem::new(
        vec![block(0.0, 1.0, 0.8), block(2.0, 3.0, 0.8)],
        unit(),
        0.0,
    )
    .unwrap();
    assert!(next_collision(&system).is_none());
    let separating = ClusterSystem::new(
        vec![block(0.0, 1.0, 2.0), block(2.0, 3.0, 1.0)],
        unit(),
        0.0,
    )
    .unwrap();
    assert!(next_collision(&separating).is_none());
}

#[test]
fn earliest_pair_is_returned() {
    let clusters = vec![
        block(0.0, 1.0, 0.5),
        block(3.0, 3.5, 1.5),
        block(4.0, 5.0, 2.5),
        block(5.2, 6.0, 2.0),
    ];
    let system = ClusterSystem::new(clusters.clone(), unit(), 0.5).unwrap();
    let brute = clusters
        .windows(2)
        .enumerate()
        .filter_map(|(i, pair)| {
            let closing = pair[0].theta.cos() - pair[1].theta.cos();
            (closing > 0.0).then(|| (i, (pair[1].a - pair[0].b) / closing))
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    let (index, t_c, m) = next_collision(&system).unwrap();
    assert_eq!(index, brute.0);
    assert!((t_c - 0.5 - brute.1).abs() <= 1e-14);
    let expected_m = clusters[index].b + clusters[index].theta.cos() * brute.1;
    assert!((m - expected_m).abs() <= 1e-14);
}

#[test]
fn symmetric_merge_comes_to_rest() {
    let (left, right) = (block(-2.0, 0.0, 0.9), block(0.0, 2.0, PI - 0.9));
    let (merged, event) = collide(&left, &right, 1.0).unwrap();
    assert!((merged.theta - PI / 2.0).abs() <= 1e-12);
    assert_eq!((merged.a, merged.b), (-2.0, 2.0));
    let peak = event.pi_profile.peak();
    let expected = (psi_oracle(merged.theta) - psi_oracle(right.theta)) * right.length();
    assert!((peak - expected).abs() <= 1e-12);
    for k in 0..=100 {
        let x = -2.0 + 0.04 * k as f64;
        assert!(event.pi_profile.eval(x) <= peak + 1e-15);
    }
}

#[test]
fn weighted_potentials_that_cancel_give_a_resting_block() {
    let left = block(0.0, 2.0, angle_of_psi(0.3));
    let right = block(2.0, 3.0, angle_of_psi(-0.6));
    let (merged, event) = collide(&left, &right, 0.0).unwrap();
    assert!((merged.theta - PI / 2.0).abs() <= 1e-12);
    assert!(event.left_end_residual.abs() <= 1e-12);
    assert!(event.psi_balance_residual.abs() <= 1e-12);
}

#[test]
fn merged_speed_lies_between_the_incoming_speeds() {
    let (left, right) = (block(0.0, 0.5, 0.4), block(0.5, 2.0, 2.2));
    let (merged, _) = collide(&left, &right, 0.0).unwrap();
    let speed = merged.theta.cos();
    assert!(speed < left.theta.cos() && speed > right.theta.cos());
    assert!(merged.theta > 0.0 && merged.theta < PI);
}

#[test]
fn separated_blocks_cannot_merge() {
    let result = collide(&block(0.0, 1.0, 0.5), &block(1.1, 2.0, 2.0), 0.0);
    assert!(matches!(result, Err(Error::Geometry { .. })));
}

#[test]
fn single_block_translates() {
    let system = ClusterSystem::new(vec![block(0.0, 1.0, 1.0)], unit(), 0.0).unwrap();
    let simulation = simulate(&system, 3.0).unwrap();
    assert!(simulation.events.is_empty());
    let last = simulation.final_system.clusters[0];
    assert!((last.a - 3.0 * 1f64.cos()).abs() <= 1e-14);
    assert!((last.length() - 1.0).abs() <= 1e-14);
}

#[test]
fn head_on_collision_stops_both_blocks() {
    let system = ClusterSystem::new(
        vec![block(-3.0, -1.0, 0.6), block(1.0, 3.0, PI - 0.6)],
        unit(),
        0.0,
    )
    .unwrap();
    let simulation = simulate(&system, 10.0).unwrap();
    assert_eq!(simulation.events.len(), 1);
    let event = &simulation.events[0];
    assert!((event.t_c - 1.0 / 0.6f64.cos()).abs() <= 1e-12);
    assert!(event.m.abs() <= 1e-12);
    assert!((event.theta_tilde - PI / 2.0).abs() <= 1e-12);
    assert_eq!(simulation.final_system.clusters.len(), 1);
    assert!(simulation.final_system.clusters[0].speed().abs() <= 1e-12);
    assert!((simulation.final_system.total_length() - 4.0).abs() <= 1e-12);
}

#[test]
fn invalid_systems_are_rejected() {
    assert!(Cluster::new(1.0, 0.0, 1.0).is_err());
    assert!(Cluster::new(0.0, 1.0, 0.0).is_err());
    let overlapping = vec![block(0.0, 1.0, 1.0), block(0.5, 2.0, 1.0)];
    assert!(ClusterSystem::new(overlapping, unit(), 0.0).is_err());
}

fn random_system() -> impl Strategy<Value = Vec<Cluster>> {
    prop::collection::vec((0.05f64..1.0, 0.1f64..2.0, 0.1f64..(PI - 0.1)), 2..7).prop_map(|specs| {
        let mut x = 0.0;
        specs
            .into_iter()
            .map(|(gap, length, theta)| {
                let cluster = block(x + gap, x + gap + length, theta);
                x = cluster.b;
                cluster
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn merges_conserve_length_and_weighted_potential(clusters in random_system()) {
        let law = unit();
        let system = ClusterSystem::new(clusters.clone(), law, 0.0).unwrap();
        let length: f64 = clusters.iter().map(|c| c.b - c.a).sum();
        let moment: f64 = clusters.iter().map(|c| (c.b - c.a) * psi_oracle(c.theta)).sum();
        let simulation = simulate(&system, 50.0).unwrap();
        let last = &simulation.final_system;
        let final_length: f64 = last.clusters.iter().map(|c| c.b - c.a).sum();
        let final_moment: f64 = last.clusters.iter().map(|c| (c.b - c.a) * psi_oracle(c.theta)).sum();
        prop_assert!((final_length - length).abs() <= 1e-12);
        prop_assert!((final_moment - moment).abs() <= 1e-12 * moment.abs().max(1.0));
        prop_assert!(simulation.events.windows(2).all(|w| w[0].t_c <= w[1].t_c));
        prop_assert!(last.clusters.windows(2).all(|w| w[0].b <= w[1].a + 1e-9));
        for event in &simulation.events {
            prop_assert!(event.psi_balance_residual.abs() <= 1e-12);
            prop_assert!(event.left_end_residual.abs() <= 1e-12);
            let [(a, start), (m, peak), (b, end)] = event.pi_profile.breakpoints;
            prop_assert!(start == 0.0 && end == 0.0);
            prop_assert!(a < m && m < b);
            prop_assert!(peak >= 0.0);
        }
    }
}
