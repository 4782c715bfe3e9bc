//! Level dependency graph: closure in deterministic topological order and
//! cycle detection.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use crate::error::{Error, Result};

/// Returns `start` followed by every level it transitively depends on, each
/// dependent listed before its dependencies. Ties are broken by ascending id.
///
/// `deps` returns `None` for a level that does not exist.
pub fn dependency_closure<F>(start: &str, deps: F) -> Result<Vec<String>>
where
    F: Fn(&str) -> Option<Vec<String>>,
{
    let mut edges: HashMap<String, Vec<String>> = HashMap::new();
    let root = deps(start).ok_or_else(|| Error::UnknownLevel(start.to_string()))?;
    edges.insert(start.to_string(), root);
    let mut pending = vec![start.to_string()];
    while let Some(level) = pending.pop() {
        let targets = edges[&level].clone();
        for target in targets {
            if edges.contains_key(&target) {
                continue;
            }
            let next = deps(&target).ok_or_else(|| Error::UnknownDependency {
                level: level.clone(),
                target: target.clone(),
            })?;
            edges.insert(target.clone(), next);
            pending.push(target);
        }
    }

    let mut indegree: HashMap<&str, usize> = edges.keys().map(|k| (k.as_str(), 0)).collect();
    for targets in edges.values() {
        for target in targets.iter().collect::<BTreeSet<_>>() {
            *indegree
                .get_mut(target.as_str())
                .expect("closure is complete") += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<&str>> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(k, _)| Reverse(*k))
        .collect();
    let mut order = Vec::with_capacity(edges.len());
    while let Some(Reverse(level)) = ready.pop() {
        order.push(level.to_string());
        for target in edges[level].iter().collect::<BTreeSet<_>>() {
            let d = indegree
                .get_mut(target.as_str())
                .expect("closure is complete");
            *d -= 1;
            if *d == 0 {
                ready.push(Reverse(target.as_str()));
            }
        }
    }
    if order.len() != edges.len() {
        let stuck: BTreeSet<&str> = indegree
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(k, _)| *k)
            .collect();
        let cycle = stuck
            .iter()
            .find_map(|k| find_cycle_from(k, |id| edges.get(id).cloned()))
            .unwrap_or_else(|| stuck.iter().map(|s| s.to_string()).collect());
        return Err(Error::DependencyCycle(cycle));
    }
    Ok(order)
}

/// Returns a cycle reachable from `start`, as a path that starts and ends at
/// the same level, if one exists. Unknown levels are treated as sinks.
pub fn find_cycle_from<F>(start: &str, deps: F) -> Option<Vec<String>>
where
    F: Fn(&str) -> Option<Vec<String>>,
{
    fn visit<F>(
        node: &str,
        deps: &F,
        path: &mut Vec<String>,
        done: &mut HashSet<String>,
    ) -> Option<Vec<String>>
    where
        F: Fn(&str) -> Option<Vec<String>>,
    {
        if let Some(pos) = path.iter().position(|p| p == node) {
            let mut cycle = path[pos..].to_vec();
            cycle.push(node.to_string());
            return Some(cycle);
        }
        if done.contains(node) {
            return None;
        }
        path.push(node.to_string());
        let mut targets = deps(node).unwrap_or_default();
        targets.sort();
        for target in targets {
            if let Some(cycle) = visit(&target, deps, path, done) {
                return Some(cycle);
            }
        }
        path.pop();
        done.insert(node.to_string());
        None
    }
    visit(start, &deps, &mut Vec::new(), &mut HashSet::new())
}
