use nalgebra::DMatrix;

use super::WeightedGraph;
use crate::error::{Error, Result};

/// Directed k-nearest-neighbour lists under Euclidean distance. Row `i` of
/// `latent` is item `i`; ties in distance go to the lower index.
pub fn knn_lists(latent: &DMatrix<f64>, k: usize) -> Result<Vec<Vec<usize>>> {
    let m = latent.nrows();
    if k == 0 || k >= m {
        return Err(Error::param(format!("k must satisfy 0 < k < {m}, got {k}")));
    }
    let mut lists = Vec::with_capacity(m);
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(m - 1);
    for i in 0..m {
        cand.clear();
        let xi = latent.row(i);
        for j in 0..m {
            if j == i {
                continue;
            }
            let d2 = (xi - latent.row(j)).norm_squared();
            cand.push((d2, j));
        }
        cand.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut nearest: Vec<(f64, usize)> = cand[..k].to_vec();
        nearest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        lists.push(nearest.into_iter().map(|(_, j)| j).collect());
    }
    Ok(lists)
}

/// Unit-weight k-NN graph, symmetrised by union.
pub fn knn_graph(latent: &DMatrix<f64>, k: usize) -> Result<WeightedGraph> {
    let lists = knn_lists(latent, k)?;
    let m = latent.nrows();
    let mut pairs: Vec<(usize, usize)> = lists
        .iter()
        .enumerate()
        .flat_map(|(i, js)| js.iter().map(move |&j| if i < j { (i, j) } else { (j, i) }))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    WeightedGraph::new(m, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn collinear_points() {
        let latent = DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 10.0]);
        let g = knn_graph(&latent, 1).unwrap();
        let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn k_m_minus_one_is_complete() {
        let latent = DMatrix::from_fn(6, 2, |i, j| (i * 3 + j) as f64 * 0.7);
        let g = knn_graph(&latent, 5).unwrap();
        assert_eq!(g.n_edges(), 15);
    }

    #[test]
    fn ties_prefer_lower_index() {
        // item 1 is equidistant from 0 and 2
        let latent = DMatrix::from_column_slice(3, 1, &[-1.0, 0.0, 1.0]);
        assert_eq!(knn_lists(&latent, 1).unwrap()[1], vec![0]);
    }

    #[test]
    fn duplicate_rows_are_nearest() {
        let latent = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 5.0, 5.0, 1.0, 1.0]);
        assert_eq!(knn_lists(&latent, 1).unwrap()[0], vec![2]);
    }

    #[test]
    fn random_points_match_brute_force() {
        let mut rng = crate::rng::seeded(5);
        let latent = DMatrix::from_fn(20, 3, |_, _| rng.random::<f64>());
        let lists = knn_lists(&latent, 5).unwrap();
        for (i, list) in lists.iter().enumerate() {
            assert_eq!(list.len(), 5);
            // brute force: full sort of all distances
            let mut all: Vec<(f64, usize)> = (0..20)
                .filter(|&j| j != i)
                .map(|j| {
                    let d: f64 = (0..3)
                        .map(|c| (latent[(i, c)] - latent[(j, c)]).powi(2))
                        .sum();
                    (d, j)
                })
                .collect();
            all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let expected: Vec<usize> = all[..5].iter().map(|p| p.1).collect();
            assert_eq!(list, &expected);
        }
        let g = knn_graph(&latent, 5).unwrap();
        assert!(g.degrees().iter().all(|&d| d >= 5.0));
    }

    #[test]
    fn rejects_bad_k() {
        let latent = DMatrix::zeros(4, 2);
        assert!(knn_graph(&latent, 4).is_err());
        assert!(knn_graph(&latent, 0).is_err());
    }
}
