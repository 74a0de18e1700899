//! Lloyd's k-means with k-means++ initialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::embed::sgns::stream_seed;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances to assigned centroids.
    pub distortion: f64,
    pub iterations: usize,
    /// Distortion measured after each assignment phase.
    pub distortion_trace: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn count_distinct(points: &[Vec<f64>]) -> usize {
    let mut seen: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    seen.len()
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total <= 0.0 {
            // All remaining mass sits on the chosen centers; with at
            // least k distinct points this cannot happen before k picks.
            rng.random_range(0..points.len())
        } else {
            let mut target = rng.random::<f64>() * total;
            let mut pick = points.len() - 1;
            for (i, &d) in d2.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        };
        centroids.push(points[next].clone());
        let newest = centroids.last().unwrap();
        for (i, p) in points.iter().enumerate() {
            let d = sq_dist(p, newest);
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

/// One k-means run: k-means++ seeding then Lloyd iterations until the
/// assignment stabilizes or `max_iter` is reached. Empty clusters are
/// re-seeded from the point farthest from its centroid.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, max_iter: usize) -> Result<KmeansResult> {
    if k < 2 {
        return Err(Error::config("k must be >= 2"));
    }
    if points.len() < k || count_distinct(points) < k {
        return Err(Error::data(format!(
            "k-means needs at least {k} distinct vectors, got {}",
            count_distinct(points)
        )));
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut assignment = vec![usize::MAX; points.len()];
    let mut trace = Vec::new();
    let mut iterations = 0;

    for _ in 0..max_iter.max(1) {
        iterations += 1;
        // Assignment phase; ties resolve to the lowest centroid index.
        let new_assignment: Vec<usize> = points
            .par_iter()
            .map(|p| {
                let mut best = 0;
                let mut best_d = f64::INFINITY;
                for (c, centroid) in centroids.iter().enumerate() {
                    let d = sq_dist(p, centroid);
                    if d < best_d {
                        best_d = d;
                        best = c;
                    }
                }
                best
            })
            .collect();
        let distortion: f64 = points
            .iter()
            .zip(&new_assignment)
            .map(|(p, &c)| sq_dist(p, &centroids[c]))
            .sum();
        trace.push(distortion);
        let converged = new_assignment == assignment;
        assignment = new_assignment;
        if converged {
            break;
        }

        // Update phase: means of the assigned points.
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for s in sums[c].iter_mut() {
                    *s /= counts[c] as f64;
                }
                centroids[c] = sums[c].clone();
            }
        }
        // Re-seed any empty cluster from the farthest point.
        for c in 0..k {
            if counts[c] == 0 {
                let farthest = points
                    .iter()
                    .zip(&assignment)
                    .enumerate()
                    .max_by(|&(_, (p, &ca)), &(_, (q, &cb))| {
                        sq_dist(p, &centroids[ca])
                            .partial_cmp(&sq_dist(q, &centroids[cb]))
                            .unwrap()
                    })
                    .map(|(i, _)| i)
                    .unwrap();
                centroids[c] = points[farthest].clone();
            }
        }
    }

    let distortion = *trace.last().unwrap();
    Ok(KmeansResult {
        assignment,
        centroids,
        distortion,
        iterations,
        distortion_trace: trace,
    })
}

/// Best of `restarts` runs by distortion; restart seeds derive from the
/// base seed.
pub fn kmeans_best_of(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> Result<KmeansResult> {
    let mut best: Option<KmeansResult> = None;
    for r in 0..restarts.max(1) {
        let run = kmeans(points, k, stream_seed(seed, 0xC1A5, r as u64), max_iter)?;
        if best.as_ref().is_none_or(|b| run.distortion < b.distortion) {
            best = Some(run);
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cluster_around(center: &[f64], n: usize, spread: f64, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                center
                    .iter()
                    .map(|&c| c + rng.random_range(-spread..spread))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn separable_pairs_cluster_together() {
        let mut points = cluster_around(&[0.0, 0.0], 2, 0.1, 1);
        points.extend(cluster_around(&[10.0, 10.0], 2, 0.1, 2));
        let result = kmeans(&points, 2, 7, 50).unwrap();
        assert_eq!(result.assignment[0], result.assignment[1]);
        assert_eq!(result.assignment[2], result.assignment[3]);
        assert_ne!(result.assignment[0], result.assignment[2]);
    }

    #[test]
    fn k_equal_to_point_count_gives_zero_distortion() {
        let points = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![5.0, 5.0],
        ];
        let result = kmeans(&points, 4, 3, 50).unwrap();
        assert!(result.distortion < 1e-24, "distortion {}", result.distortion);
        let mut clusters: Vec<usize> = result.assignment.clone();
        clusters.sort_unstable();
        clusters.dedup();
        assert_eq!(clusters.len(), 4);
    }

    #[test]
    fn fewer_distinct_points_than_k_is_an_error() {
        let points = vec![vec![1.0, 1.0]; 5];
        assert!(kmeans(&points, 2, 1, 10).is_err());
        let two = vec![vec![0.0], vec![1.0], vec![0.0]];
        assert!(kmeans(&two, 3, 1, 10).is_err());
    }

    #[test]
    fn distortion_trace_is_non_increasing() {
        let mut points = cluster_around(&[0.0, 0.0, 0.0], 30, 2.0, 11);
        points.extend(cluster_around(&[4.0, 1.0, -2.0], 30, 2.0, 12));
        points.extend(cluster_around(&[-3.0, 5.0, 1.0], 30, 2.0, 13));
        let result = kmeans(&points, 3, 5, 100).unwrap();
        for w in result.distortion_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "trace increased: {:?}", result.distortion_trace);
        }
    }

    /// Restart oracle: a seeded run must do at least as well as the worst
    /// of 100 naive random-restart runs.
    #[test]
    fn seeded_run_beats_worst_of_random_restarts() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let points: Vec<Vec<f64>> = (0..50)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let ours = kmeans(&points, 3, 42, 100).unwrap();
        let worst = (0..100)
            .map(|r| kmeans(&points, 3, 1000 + r, 100).unwrap().distortion)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            ours.distortion <= worst + 1e-12,
            "ours {} worst {}",
            ours.distortion,
            worst
        );
    }

    #[test]
    fn best_of_restarts_never_worse_than_single_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let points: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let single = kmeans(&points, 4, stream_seed(42, 0xC1A5, 0), 100).unwrap();
        let best = kmeans_best_of(&points, 4, 42, 100, 10).unwrap();
        assert!(best.distortion <= single.distortion + 1e-12);
    }
}
