use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Checks that `adj` is a square 0/1 matrix.
pub fn validate_adjacency(adj: &DMatrix<f64>) -> Result<()> {
    if !adj.is_square() {
        return Err(Error::domain("adjacency matrix must be square"));
    }
    if let Some(x) = adj.iter().find(|&&x| x != 0.0 && x != 1.0) {
        return Err(Error::domain(format!("adjacency entries must be 0 or 1, found {x}")));
    }
    Ok(())
}

/// Component label of every vertex (labels in order of completion) and the component count.
pub fn scc_labels(adj: &DMatrix<f64>) -> Result<(Vec<usize>, usize)> {
    validate_adjacency(adj)?;
    let n = adj.nrows();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| adj[(i, j)] != 0.0).collect())
        .collect();

    // Iterative Tarjan.
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut label = vec![UNSEEN; n];
    let mut next_index = 0;
    let mut count = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(*edge) {
                *edge += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("vertex on stack");
                    on_stack[w] = false;
                    label[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    Ok((label, count))
}

/// (strongly connected, number of strongly connected components).
pub fn strongly_connected(adj: &DMatrix<f64>) -> Result<(bool, usize)> {
    let (_, count) = scc_labels(adj)?;
    Ok((count == 1, count))
}
