//! Choosing the Bell pairs each network copy carries for the pairwise
//! protocol: a spanning tree of links over the users, packed into as few
//! copies as the graph allows.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{bits, mask_of, Vertex};
use crate::router::accounting::links_span;
use crate::router::plan::{find_bell_multicast_plan_for, ExtractionPlan, PlanOptions};
use crate::state::GraphState;

/// Largest user set for which every spanning tree is tried.
pub const PAIRWISE_USER_CAP: usize = 6;

type Link = (Vertex, Vertex);

/// One plan per copy, fewest copies first. Among equally short schedules
/// the one with the fewest nonparticipant measurements plus LC steps wins,
/// then the first tree in lexicographic link order.
pub fn plan_pairwise(
    state: &GraphState,
    users: &[Vertex],
    options: PlanOptions,
) -> Result<Option<Vec<ExtractionPlan>>> {
    let mask = mask_of(users);
    let users: Vec<Vertex> = bits(mask).collect();
    if users.len() < 2 {
        return Err(Error::InvalidTask("pairwise keys need at least two users".into()));
    }
    if users.len() > PAIRWISE_USER_CAP {
        return Err(Error::InvalidArgument(format!(
            "pairwise planning limited to {PAIRWISE_USER_CAP} users, got {}",
            users.len()
        )));
    }
    if let Some(&v) = users.iter().find(|&&v| v >= state.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: state.n() });
    }
    let links: Vec<Link> = users
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| users[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    let mut cache = PlanCache {
        state,
        options,
        plans: BTreeMap::new(),
    };
    let mut best: Option<(usize, usize, Vec<ExtractionPlan>)> = None;
    for tree in combinations(links.len(), users.len() - 1) {
        let tree: Vec<Link> = tree.iter().map(|&i| links[i]).collect();
        if !links_span(mask, &tree) {
            continue;
        }
        let Some(copies) = cache.cover(&tree, best.as_ref().map(|b| b.0))? else {
            continue;
        };
        let cost = copies
            .iter()
            .map(|p| p.measurements.len() + p.lc_sequence.len())
            .sum();
        if best
            .as_ref()
            .is_none_or(|b| (copies.len(), cost) < (b.0, b.1))
        {
            best = Some((copies.len(), cost, copies));
        }
    }
    Ok(best.map(|b| b.2))
}

struct PlanCache<'a> {
    state: &'a GraphState,
    options: PlanOptions,
    plans: BTreeMap<Vec<Link>, Option<ExtractionPlan>>,
}

impl PlanCache<'_> {
    fn plan(&mut self, pairs: &[Link]) -> Result<Option<ExtractionPlan>> {
        if let Some(p) = self.plans.get(pairs) {
            return Ok(p.clone());
        }
        let p = find_bell_multicast_plan_for(self.state, pairs, self.options)?;
        self.plans.insert(pairs.to_vec(), p.clone());
        Ok(p)
    }

    /// Fewest extractable matchings covering `tree`, in at most `limit` copies.
    fn cover(&mut self, tree: &[Link], limit: Option<usize>) -> Result<Option<Vec<ExtractionPlan>>> {
        let mut best = None;
        let mut stack = Vec::new();
        self.search(tree, 0, &mut stack, limit.unwrap_or(tree.len()), &mut best)?;
        Ok(best)
    }

    fn search(
        &mut self,
        tree: &[Link],
        covered: u32,
        stack: &mut Vec<ExtractionPlan>,
        limit: usize,
        best: &mut Option<Vec<ExtractionPlan>>,
    ) -> Result<()> {
        let full = (1u32 << tree.len()) - 1;
        if covered == full {
            if best.as_ref().is_none_or(|b| stack.len() < b.len()) {
                *best = Some(stack.clone());
            }
            return Ok(());
        }
        let cap = best.as_ref().map_or(limit, |b| b.len().saturating_sub(1).min(limit));
        if stack.len() >= cap {
            return Ok(());
        }
        let first = (!covered & full).trailing_zeros() as usize;
        let rest = !covered & full & !(1 << first);
        // Every subset of the remaining links that, with the first uncovered
        // link, forms a matching.
        let mut sub = rest;
        loop {
            let chosen = sub | (1 << first);
            let pairs: Vec<Link> = bits(chosen).map(|i| tree[i]).collect();
            if is_matching(&pairs) {
                if let Some(plan) = self.plan(&pairs)? {
                    stack.push(plan);
                    self.search(tree, covered | chosen, stack, limit, best)?;
                    stack.pop();
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        Ok(())
    }
}

fn is_matching(pairs: &[Link]) -> bool {
    let mut seen = 0u32;
    for &(a, b) in pairs {
        let m = (1 << a) | (1 << b);
        if seen & m != 0 {
            return false;
        }
        seen |= m;
    }
    true
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn two_users_one_copy() {
        let st = GraphState::new(Graph::path(3).unwrap());
        let plans = plan_pairwise(&st, &[0, 2], PlanOptions::default()).unwrap().unwrap();
        assert_eq!(plans.len(), 1);
        assert_eq!(plans[0].pairs(), Some(&[(0, 2)][..]));
    }

    #[test]
    fn matching_check() {
        assert!(is_matching(&[(0, 1), (2, 3)]));
        assert!(!is_matching(&[(0, 1), (1, 3)]));
    }
}
