use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::AnalysisError;

/// Breadth-first search from `init` for a node satisfying `accept`.
///
/// Nodes are tested when discovered, so the search stops as soon as the
/// first accepting node appears and successor iterators are only consumed
/// up to that point. Returns the edge/node steps of a shortest path (empty
/// when `init` itself is accepting).
pub(crate) fn shortest_path<N, E, I>(
    init: N,
    mut successors: impl FnMut(&N) -> I,
    accept: impl Fn(&N) -> bool,
    max_states: usize,
) -> Result<Option<Vec<(E, N)>>, AnalysisError>
where
    N: Clone + Eq + Hash,
    E: Clone,
    I: Iterator<Item = (E, N)>,
{
    if accept(&init) {
        return Ok(Some(Vec::new()));
    }
    let mut nodes = vec![init.clone()];
    let mut parent: Vec<Option<(usize, E)>> = vec![None];
    let mut index = HashMap::from([(init, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let node = nodes[id].clone();
        for (edge, next) in successors(&node) {
            if index.contains_key(&next) {
                continue;
            }
            if nodes.len() >= max_states {
                return Err(AnalysisError::StateLimit(max_states));
            }
            let next_id = nodes.len();
            index.insert(next.clone(), next_id);
            nodes.push(next.clone());
            parent.push(Some((id, edge)));
            if accept(&next) {
                return Ok(Some(trace(&nodes, &parent, next_id)));
            }
            queue.push_back(next_id);
        }
    }
    Ok(None)
}

fn trace<N: Clone, E: Clone>(
    nodes: &[N],
    parent: &[Option<(usize, E)>],
    mut id: usize,
) -> Vec<(E, N)> {
    let mut path = Vec::new();
    while let Some((prev, edge)) = &parent[id] {
        path.push((edge.clone(), nodes[id].clone()));
        id = *prev;
    }
    path.reverse();
    path
}

/// Reachable nodes and `(src, edge, dst)` index triples.
pub(crate) type Graph<N, E> = (Vec<N>, Vec<(usize, E, usize)>);

/// Every node reachable from `init` (in BFS order, `init` first) and every
/// edge between them as `(src, edge, dst)` indices.
pub(crate) fn explore<N, E, I>(
    init: N,
    mut successors: impl FnMut(&N) -> I,
    max_states: usize,
) -> Result<Graph<N, E>, AnalysisError>
where
    N: Clone + Eq + Hash,
    I: Iterator<Item = (E, N)>,
{
    let mut nodes = vec![init.clone()];
    let mut index = HashMap::from([(init, 0usize)]);
    let mut edges = Vec::new();
    let mut cursor = 0;
    while cursor < nodes.len() {
        let node = nodes[cursor].clone();
        for (edge, next) in successors(&node) {
            let next_id = match index.get(&next) {
                Some(&i) => i,
                None => {
                    if nodes.len() >= max_states {
                        return Err(AnalysisError::StateLimit(max_states));
                    }
                    let i = nodes.len();
                    index.insert(next.clone(), i);
                    nodes.push(next);
                    i
                }
            };
            edges.push((cursor, edge, next_id));
        }
        cursor += 1;
    }
    Ok((nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: &u32) -> std::vec::IntoIter<(char, u32)> {
        let mut v = vec![('+', n + 1)];
        if *n > 0 {
            v.push(('-', n - 1));
        }
        v.into_iter()
    }

    #[test]
    fn finds_shortest_path() {
        let path = shortest_path(0u32, line, |&n| n == 3, 100)
            .unwrap()
            .unwrap();
        assert_eq!(path, vec![('+', 1), ('+', 2), ('+', 3)]);
        assert_eq!(
            shortest_path(5u32, line, |&n| n == 5, 100)
                .unwrap()
                .unwrap(),
            vec![]
        );
    }

    #[test]
    fn respects_the_state_limit() {
        assert_eq!(
            shortest_path(0u32, line, |_| false, 10),
            Err(AnalysisError::StateLimit(10))
        );
    }

    #[test]
    fn explores_everything() {
        let (nodes, edges) =
            explore(0u32, |&n| (n < 3).then_some(((), n + 1)).into_iter(), 100).unwrap();
        assert_eq!(nodes, vec![0, 1, 2, 3]);
        assert_eq!(edges.len(), 3);
    }
}
