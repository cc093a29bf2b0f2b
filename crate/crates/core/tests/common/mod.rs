#![allow(dead_code)]

use qnetkey::clifford::LocalClifford;
use qnetkey::graph::Graph;
use qnetkey::pauli::Basis;
use qnetkey::state::GraphState;

pub const FID_TOL: f64 = 1e-10;

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Every labeled simple graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = pair_list(n);
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

pub fn connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    all_graphs(n).filter(|g| g.is_connected())
}

/// One representative of every (graph, vertex) pair on `n` vertices up to
/// relabeling: the vertex is 0, its neighbours are `1..=d`, and the edges
/// among vertices `1..n` are arbitrary.
pub fn rooted_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let rest: Vec<(usize, usize)> = pair_list(n - 1)
        .into_iter()
        .map(|(u, v)| (u + 1, v + 1))
        .collect();
    (0..n).flat_map(move |d| {
        let rest = rest.clone();
        (0u64..1 << rest.len()).map(move |mask| {
            let mut edges: Vec<_> = (1..=d).map(|u| (0, u)).collect();
            edges.extend(
                rest.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e),
            );
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// Deterministic pseudo-random frame (splitmix-style hash of `seed`).
pub fn scrambled_frame(n: usize, seed: u64) -> Vec<LocalClifford> {
    let mut x = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    (0..n)
        .map(|_| {
            x ^= x >> 30;
            x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
            x ^= x >> 27;
            x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
            x ^= x >> 31;
            LocalClifford::from_index((x % 24) as usize).unwrap()
        })
        .collect()
}

/// Compares the graph-rule measurement of `v` in `basis` against dense
/// projection for both outcomes, and checks the byproduct relation between
/// the two branches.
pub fn check_measurement(gs: &GraphState, v: usize, basis: Basis) -> Result<(), String> {
    let probs = gs.outcome_probabilities(v, basis).map_err(|e| e.to_string())?;
    if ((probs[0] + probs[1]) - 1.0).abs() > 1e-12 {
        return Err(format!("probabilities {probs:?} do not sum to 1"));
    }
    let dense = gs.to_dense().map_err(|e| e.to_string())?;
    let mut branches = [None, None];
    for o in 0..2u8 {
        let p_dense = dense.outcome_probability(v, basis, o);
        if (p_dense - probs[o as usize]).abs() > 1e-10 {
            return Err(format!(
                "outcome {o}: rule probability {} vs dense {p_dense}",
                probs[o as usize]
            ));
        }
        if p_dense < 1e-12 {
            if gs.measure_vertex(basis, v, o).is_ok() {
                return Err(format!("outcome {o} has probability 0 but was accepted"));
            }
            continue;
        }
        let mut projected = dense.clone();
        projected.project(v, basis, o).map_err(|e| e.to_string())?;
        let (after, record) = gs.measure_vertex(basis, v, o).map_err(|e| e.to_string())?;
        if !after.graph().is_symmetric_without_loops() || after.graph().neighbors(v) != 0 {
            return Err("graph invariant broken".into());
        }
        if record.byproduct.iter().any(|&(u, _)| !after.is_active(u)) {
            return Err("byproduct on a removed vertex".into());
        }
        let f = after
            .to_dense()
            .and_then(|d| d.fidelity(&projected))
            .map_err(|e| e.to_string())?;
        if (f - 1.0).abs() > FID_TOL {
            return Err(format!("outcome {o}: fidelity {f}"));
        }
        branches[o as usize] = Some((after, record));
    }
    if let [Some((b0, r0)), Some((b1, r1))] = &branches {
        if !r0.byproduct.is_empty() {
            return Err("reference branch carries a byproduct".into());
        }
        let mut corrected = b1.clone();
        corrected.apply_byproduct(&r1.byproduct).map_err(|e| e.to_string())?;
        let rest = b0.active_mask();
        let f = corrected
            .to_dense_subset(rest)
            .and_then(|a| b0.to_dense_subset(rest).and_then(|b| a.fidelity(&b)))
            .map_err(|e| e.to_string())?;
        if (f - 1.0).abs() > FID_TOL {
            return Err(format!("byproduct does not relate branches: fidelity {f}"));
        }
    }
    Ok(())
}

/// GHZ plan for users 1, 2, 5, 6 and the two-copy Bell schedule
/// {1-2, 5-6}, {2-5} on the six-user network state.
pub fn six_user_plans() -> qnetkey::qcka::PlanSet {
    use qnetkey::fixtures::network_state;
    use qnetkey::router::{find_bell_multicast_plan_for, find_ghz_plan_for, PlanOptions};
    let st = network_state();
    let o = PlanOptions::default();
    qnetkey::qcka::PlanSet {
        ghz: find_ghz_plan_for(&st, &[0, 1, 4, 5], o).unwrap(),
        bell: vec![
            find_bell_multicast_plan_for(&st, &[(0, 1), (4, 5)], o)
                .unwrap()
                .unwrap(),
            find_bell_multicast_plan_for(&st, &[(1, 4)], o).unwrap().unwrap(),
        ],
    }
}

/// Binary entropy straight from the definition.
pub fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}
