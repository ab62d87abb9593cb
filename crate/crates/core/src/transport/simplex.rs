//! Transportation simplex on a dense cost matrix.
//!
//! The basis is a spanning tree of the bipartite (rows + columns) graph with
//! exactly `m + n - 1` cells, degenerate zero-flow cells included. Entering
//! cells use Dantzig's rule; after a run of degenerate pivots the solver
//! switches to Bland's rule (lowest index entering and leaving), which cannot cycle.

const DEGENERATE_RUN_BEFORE_BLAND: usize = 64;

#[derive(Debug, Clone, Copy)]
struct Cell {
    row: usize,
    col: usize,
    flow: f64,
}

/// Optimal flows `(row, col, mass)` with positive mass, and the optimal cost.
pub(crate) fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> (Vec<(usize, usize, f64)>, f64) {
    let (m, n) = (supply.len(), demand.len());
    debug_assert_eq!(cost.len(), m * n);
    let c = |i: usize, j: usize| cost[i * n + j];

    let mut basis = northwest_corner(supply, demand);
    let scale = cost.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    let tol = 1e-12 * scale;

    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut degenerate_run = 0;
    // Generous cap; Bland's rule guarantees termination well before it.
    let max_iter = 50 * (m + n) * (m + n) + 1000;
    for _ in 0..max_iter {
        let tree = Tree::new(&basis, m, n);
        tree.potentials(&basis, &c, &mut u, &mut v);

        let bland = degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND;
        let mut entering: Option<(usize, usize, f64)> = None;
        'scan: for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                let reduced = c(i, j) - ui - vj;
                if reduced < -tol {
                    if bland {
                        entering = Some((i, j, reduced));
                        break 'scan;
                    }
                    if entering.is_none_or(|(_, _, best)| reduced < best) {
                        entering = Some((i, j, reduced));
                    }
                }
            }
        }
        let Some((ei, ej, _)) = entering else { break };

        // Tree path from row ei to column ej; its edges alternate -, +, -, ...
        let path = tree.path(ei, m + ej);
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for (k, &cell) in path.iter().enumerate() {
            if k % 2 == 0 {
                let f = basis[cell].flow;
                let better = f < theta
                    || (f == theta && bland && cell_key(&basis[cell], n) < cell_key(&basis[leave], n));
                if better {
                    theta = f;
                    leave = cell;
                }
            }
        }
        for (k, &cell) in path.iter().enumerate() {
            if k % 2 == 0 {
                basis[cell].flow -= theta;
            } else {
                basis[cell].flow += theta;
            }
        }
        basis[leave] = Cell { row: ei, col: ej, flow: theta };
        degenerate_run = if theta == 0.0 { degenerate_run + 1 } else { 0 };
    }

    let flows: Vec<(usize, usize, f64)> = basis
        .iter()
        .filter(|cell| cell.flow > 0.0)
        .map(|cell| (cell.row, cell.col, cell.flow))
        .collect();
    let total = flows.iter().map(|&(i, j, f)| f * c(i, j)).sum();
    (flows, total)
}

fn cell_key(cell: &Cell, n: usize) -> usize {
    cell.row * n + cell.col
}

fn northwest_corner(supply: &[f64], demand: &[f64]) -> Vec<Cell> {
    let (m, n) = (supply.len(), demand.len());
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let mut basis = Vec::with_capacity(m + n - 1);
    let (mut i, mut j) = (0, 0);
    loop {
        let flow = a[i].min(b[j]).max(0.0);
        a[i] -= flow;
        b[j] -= flow;
        basis.push(Cell { row: i, col: j, flow });
        if i == m - 1 && j == n - 1 {
            break;
        }
        if i == m - 1 {
            j += 1;
        } else if j == n - 1 || a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    debug_assert_eq!(basis.len(), m + n - 1);
    basis
}

/// Adjacency of the basis tree; nodes `0..m` are rows, `m..m+n` columns.
struct Tree {
    adj: Vec<Vec<(usize, usize)>>,
    m: usize,
}

impl Tree {
    fn new(basis: &[Cell], m: usize, n: usize) -> Self {
        let mut adj = vec![Vec::new(); m + n];
        for (k, cell) in basis.iter().enumerate() {
            adj[cell.row].push((m + cell.col, k));
            adj[m + cell.col].push((cell.row, k));
        }
        Tree { adj, m }
    }

    fn potentials(&self, basis: &[Cell], c: &impl Fn(usize, usize) -> f64, u: &mut [f64], v: &mut [f64]) {
        let total = self.adj.len();
        let mut seen = vec![false; total];
        let mut stack = vec![0];
        seen[0] = true;
        u[0] = 0.0;
        while let Some(node) = stack.pop() {
            for &(next, k) in &self.adj[node] {
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                let cell = basis[k];
                if next >= self.m {
                    v[cell.col] = c(cell.row, cell.col) - u[cell.row];
                } else {
                    u[cell.row] = c(cell.row, cell.col) - v[cell.col];
                }
                stack.push(next);
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "basis is not a spanning tree");
    }

    /// Basis cells on the tree path from `from` to `to`, starting at `from`.
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let total = self.adj.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; total];
        let mut seen = vec![false; total];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(node) = stack.pop() {
            if node == to {
                break;
            }
            for &(next, k) in &self.adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, k));
                    stack.push(next);
                }
            }
        }
        let mut cells = Vec::new();
        let mut node = to;
        while node != from {
            let (prev, k) = parent[node].expect("tree is connected");
            cells.push(k);
            node = prev;
        }
        cells.reverse();
        cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_picks_cheaper_matching() {
        let (flows, total) = solve(&[0.5, 0.5], &[0.5, 0.5], &[4.0, 1.0, 1.0, 4.0]);
        assert_eq!(total, 1.0);
        assert!(flows.iter().all(|&(i, j, _)| i != j));
    }

    #[test]
    fn handles_zero_supply_and_degenerate_ties() {
        let supply = [0.25, 0.0, 0.25, 0.5];
        let demand = [0.5, 0.25, 0.25];
        let cost: Vec<f64> = (0..12).map(|k| ((k * 7) % 5) as f64).collect();
        let (flows, total) = solve(&supply, &demand, &cost);
        let mut rows = [0.0; 4];
        let mut cols = [0.0; 3];
        for &(i, j, f) in &flows {
            rows[i] += f;
            cols[j] += f;
        }
        assert_eq!(rows, supply);
        assert_eq!(cols, demand);
        let attained: f64 = flows.iter().map(|&(i, j, f)| f * cost[i * 3 + j]).sum();
        assert_eq!(total, attained);
    }
}
