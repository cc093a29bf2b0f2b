//! Breadth-first enumeration of the labeled local-complementation orbit.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Largest vertex count accepted by orbit enumeration.
pub const ORBIT_CAP: usize = 12;

/// A member of an LC orbit with the shortest (then lexicographically
/// smallest) sequence of local complementations reaching it from the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMember {
    pub graph: Graph,
    pub path: Vec<Vertex>,
}

/// Orbit members in discovery order, each with its LC path.
pub fn lc_orbit_with_paths(g: &Graph, cap: usize) -> Result<Vec<OrbitMember>> {
    if g.n() > cap {
        return Err(Error::OrbitCapExceeded { n: g.n(), cap });
    }
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut members = vec![OrbitMember {
        graph: g.clone(),
        path: Vec::new(),
    }];
    index.insert(g.adjacency().to_vec(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for v in 0..g.n() {
            // LC at an isolated vertex or a leaf is the identity
            if members[i].graph.degree(v) < 2 {
                continue;
            }
            let mut next = members[i].graph.clone();
            next.local_complement(v);
            if index.contains_key(next.adjacency()) {
                continue;
            }
            let mut path = members[i].path.clone();
            path.push(v);
            index.insert(next.adjacency().to_vec(), members.len());
            queue.push_back(members.len());
            members.push(OrbitMember { graph: next, path });
        }
    }
    Ok(members)
}

/// All graphs reachable from `g` by local complementations, source first.
pub fn lc_orbit(g: &Graph) -> Result<Vec<Graph>> {
    Ok(lc_orbit_with_paths(g, ORBIT_CAP)?
        .into_iter()
        .map(|m| m.graph)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orbits() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(lc_orbit(&k2).unwrap().len(), 1);
        let path = Graph::path(3).unwrap();
        let orbit = lc_orbit(&path).unwrap();
        assert_eq!(orbit.len(), 4);
        let mut edge_sets: Vec<_> = orbit.iter().map(|g| g.edges()).collect();
        edge_sets.sort();
        assert_eq!(
            edge_sets,
            vec![
                vec![(0, 1), (0, 2)],
                vec![(0, 1), (0, 2), (1, 2)],
                vec![(0, 1), (1, 2)],
                vec![(0, 2), (1, 2)],
            ]
        );
    }

    #[test]
    fn paths_reach_their_members() {
        let ring = Graph::ring(5).unwrap();
        for m in lc_orbit_with_paths(&ring, ORBIT_CAP).unwrap() {
            let mut g = ring.clone();
            for &v in &m.path {
                g.local_complement(v);
            }
            assert_eq!(g, m.graph);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::empty(13).unwrap();
        assert!(matches!(
            lc_orbit(&g),
            Err(Error::OrbitCapExceeded { n: 13, cap: 12 })
        ));
    }
}
