use super::Graph;

pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-9;
const MAX_ITERS: usize = 20_000;

/// Certified upper estimate of the adjacency spectral norm `||A||_2`.
pub fn spectral_norm_upper(graph: &Graph) -> f64 {
    spectral_norm_upper_with(graph, DEFAULT_SPECTRAL_TOL, MAX_ITERS)
}

/// Power iteration on `A + I` from the all-ones vector.
///
/// For a non-negative symmetric `A` the norm equals the Perron root, and for any
/// positive `v` the Collatz–Wielandt quotient `max_i (Av)_i / v_i` bounds it from
/// above while the Rayleigh quotient bounds it from below. Iteration stops once
/// the two agree to relative `tol`; the returned value is the upper quotient,
/// capped by the maximum degree. Positivity of `v` is preserved by the shift.
pub fn spectral_norm_upper_with(graph: &Graph, tol: f64, max_iters: usize) -> f64 {
    let n = graph.node_count();
    let dmax = graph.max_degree() as f64;
    if graph.edge_count() == 0 {
        return 0.0;
    }
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; n];
    let mut upper = dmax;
    for _ in 0..max_iters {
        for (i, out) in av.iter_mut().enumerate() {
            *out = graph.neighbors(i).iter().map(|&j| v[j]).sum();
        }
        let vv: f64 = v.iter().map(|a| a * a).sum();
        let rayleigh: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum::<f64>() / vv;
        let cw = v
            .iter()
            .zip(&av)
            .map(|(&vi, &avi)| avi / vi)
            .fold(0.0f64, f64::max);
        upper = upper.min(cw);
        if upper - rayleigh <= tol * rayleigh.max(f64::MIN_POSITIVE) {
            break;
        }
        let mut norm = 0.0;
        for (vi, &avi) in v.iter_mut().zip(&av) {
            *vi += avi;
            norm += *vi * *vi;
        }
        let norm = norm.sqrt();
        v.iter_mut().for_each(|vi| *vi /= norm);
    }
    upper.min(dmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_zero() {
        assert_eq!(spectral_norm_upper(&Graph::empty(5)), 0.0);
    }

    #[test]
    fn star_converges_to_sqrt_leaves() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = spectral_norm_upper(&g);
        assert!((s - 3f64.sqrt()).abs() < 1e-6, "{s}");
        assert!(s >= 3f64.sqrt());
    }

    #[test]
    fn regular_graph_hits_degree() {
        let g = super::super::gen_ws(12, 4, 0.0, 0).unwrap();
        assert!((spectral_norm_upper(&g) - 4.0).abs() < 1e-9);
    }
}
