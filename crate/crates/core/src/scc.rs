//! Tarjan's strongly connected components over small adjacency lists.

/// Components in reverse topological order (sinks of the condensation first).
pub fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    // Iterative to keep deep chains off the call stack.
    fn visit(st: &mut State<'_>, root: usize) {
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        st.index[root] = Some(st.next);
        st.low[root] = st.next;
        st.next += 1;
        st.stack.push(root);
        st.on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = work.last_mut() {
            if let Some(&w) = st.adj[v].get(*edge) {
                *edge += 1;
                match st.index[w] {
                    None => {
                        st.index[w] = Some(st.next);
                        st.low[w] = st.next;
                        st.next += 1;
                        st.stack.push(w);
                        st.on_stack[w] = true;
                        work.push((w, 0));
                    }
                    Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                    Some(_) => {}
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                st.low[parent] = st.low[parent].min(st.low[v]);
            }
            if Some(st.low[v]) == st.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = st.stack.pop().expect("tarjan stack underflow");
                    st.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                st.out.push(comp);
            }
        }
    }

    let n = adj.len();
    let mut st = State {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(&mut st, v);
        }
    }
    st.out
}

/// Whether a component carries at least one edge (size > 1 or a self-loop).
pub fn is_cyclic(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]].contains(&comp[0])
}

pub fn has_cycle(adj: &[Vec<usize>]) -> bool {
    tarjan(adj).iter().any(|c| is_cyclic(adj, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![]];
        let mut comps = tarjan(&adj);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
        assert!(has_cycle(&adj));
    }

    #[test]
    fn self_loop_and_dag() {
        assert!(has_cycle(&[vec![0]]));
        assert!(!has_cycle(&[vec![1], vec![2], vec![]]));
        assert!(!has_cycle(&[]));
    }

    #[test]
    fn long_chain_does_not_overflow() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![0] }).collect();
        assert_eq!(tarjan(&adj).len(), 1);
    }
}
