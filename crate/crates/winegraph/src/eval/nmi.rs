//! Normalized mutual information between a clustering and ground truth.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// How mutual information is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmiVariant {
    /// I / sqrt(H(a) * H(b)) — the default.
    Geometric,
    /// 2I / (H(a) + H(b)).
    Arithmetic,
    /// I / min(H(a), H(b)).
    Min,
}

impl NmiVariant {
    pub fn parse(s: &str) -> Result<NmiVariant> {
        match s {
            "geometric" | "sqrt" => Ok(NmiVariant::Geometric),
            "arithmetic" => Ok(NmiVariant::Arithmetic),
            "min" => Ok(NmiVariant::Min),
            other => Err(Error::config(format!("unknown NMI variant `{other}`"))),
        }
    }
}

fn entropy(counts: &HashMap<usize, usize>, n: f64) -> f64 {
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Whether the two labelings induce the same partition up to relabeling.
fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut bwd: HashMap<usize, usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        if *fwd.entry(x).or_insert(y) != y || *bwd.entry(y).or_insert(x) != x {
            return false;
        }
    }
    true
}

/// NMI over two parallel label arrays, natural log. Identical partitions
/// (up to relabeling) score 1; if either side has zero entropy while the
/// partitions differ, the score is 0.
pub fn nmi(pred: &[usize], truth: &[usize], variant: NmiVariant) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::data(format!(
            "nmi: item-set mismatch, {} vs {} items",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::data("nmi: empty item set"));
    }
    if same_partition(pred, truth) {
        return Ok(1.0);
    }
    let n = pred.len() as f64;
    let mut pred_counts: HashMap<usize, usize> = HashMap::new();
    let mut truth_counts: HashMap<usize, usize> = HashMap::new();
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&p, &t) in pred.iter().zip(truth) {
        *pred_counts.entry(p).or_insert(0) += 1;
        *truth_counts.entry(t).or_insert(0) += 1;
        *joint.entry((p, t)).or_insert(0) += 1;
    }
    let h_pred = entropy(&pred_counts, n);
    let h_truth = entropy(&truth_counts, n);
    if h_pred == 0.0 || h_truth == 0.0 {
        return Ok(0.0);
    }
    let mut mutual = 0.0;
    for (&(p, t), &c) in &joint {
        let p_joint = c as f64 / n;
        let p_pred = pred_counts[&p] as f64 / n;
        let p_truth = truth_counts[&t] as f64 / n;
        mutual += p_joint * (p_joint / (p_pred * p_truth)).ln();
    }
    let denom = match variant {
        NmiVariant::Geometric => (h_pred * h_truth).sqrt(),
        NmiVariant::Arithmetic => (h_pred + h_truth) / 2.0,
        NmiVariant::Min => h_pred.min(h_truth),
    };
    Ok((mutual / denom).clamp(0.0, 1.0))
}

/// NMI over keyed maps; the item sets must match exactly.
pub fn nmi_labeled(
    pred: &std::collections::BTreeMap<String, usize>,
    truth: &std::collections::BTreeMap<String, String>,
    variant: NmiVariant,
) -> Result<f64> {
    if pred.len() != truth.len() || !pred.keys().eq(truth.keys()) {
        return Err(Error::data("nmi: prediction and truth cover different items"));
    }
    let mut label_ids: HashMap<&str, usize> = HashMap::new();
    let mut pred_vec = Vec::with_capacity(pred.len());
    let mut truth_vec = Vec::with_capacity(truth.len());
    for (item, &cluster) in pred {
        pred_vec.push(cluster);
        let label = truth[item].as_str();
        let next = label_ids.len();
        truth_vec.push(*label_ids.entry(label).or_insert(next));
    }
    nmi(&pred_vec, &truth_vec, variant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_partition_scores_one() {
        let truth = vec![0, 0, 1, 1, 2];
        let relabeled = vec![7, 7, 3, 3, 9];
        assert_eq!(nmi(&truth, &truth, NmiVariant::Geometric).unwrap(), 1.0);
        assert_eq!(nmi(&relabeled, &truth, NmiVariant::Geometric).unwrap(), 1.0);
    }

    #[test]
    fn single_cluster_against_balanced_truth_scores_zero() {
        let pred = vec![0, 0, 0, 0];
        let truth = vec![0, 0, 1, 1];
        assert_eq!(nmi(&pred, &truth, NmiVariant::Geometric).unwrap(), 0.0);
    }

    /// Hand contingency on 4 items: pred {a,b|c,d}, truth {a,c|b,d}.
    /// Every joint cell is 1/4 = product of marginals, so I = 0.
    #[test]
    fn crossed_four_item_partition_scores_zero() {
        let pred = vec![0, 0, 1, 1];
        let truth = vec![0, 1, 0, 1];
        let v = nmi(&pred, &truth, NmiVariant::Geometric).unwrap();
        assert!(v.abs() < 1e-12, "got {v}");
    }

    /// Hand-computed non-trivial value on 4 items: pred {a,b,c|d},
    /// truth {a,b|c,d}.
    /// Joint: (0,0)=2/4, (0,1)=1/4, (1,1)=1/4.
    /// I = 1/2 ln(4/3) + 1/4 ln(2/3) + 1/4 ln 2
    /// H(pred) = H(3/4,1/4), H(truth) = ln 2.
    #[test]
    fn hand_computed_contingency_value() {
        let pred = vec![0, 0, 0, 1];
        let truth = vec![0, 0, 1, 1];
        let i = 0.5 * (4.0f64 / 3.0).ln() + 0.25 * (2.0f64 / 3.0).ln() + 0.25 * 2.0f64.ln();
        let h_pred = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        let h_truth = 2.0f64.ln();
        let expected = i / (h_pred * h_truth).sqrt();
        let got = nmi(&pred, &truth, NmiVariant::Geometric).unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got} expected {expected}");
        let arith = nmi(&pred, &truth, NmiVariant::Arithmetic).unwrap();
        assert!((arith - 2.0 * i / (h_pred + h_truth)).abs() < 1e-12);
        let min = nmi(&pred, &truth, NmiVariant::Min).unwrap();
        assert!((min - i / h_pred.min(h_truth)).abs() < 1e-12);
    }

    #[test]
    fn symmetric_and_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.random_range(4..40);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let ab = nmi(&a, &b, NmiVariant::Geometric).unwrap();
            let ba = nmi(&b, &a, NmiVariant::Geometric).unwrap();
            assert!((ab - ba).abs() < 1e-12);
            // Permute cluster indices.
            let perm = [3usize, 0, 2, 1];
            let a_perm: Vec<usize> = a.iter().map(|&x| perm[x]).collect();
            let permuted = nmi(&a_perm, &b, NmiVariant::Geometric).unwrap();
            assert!((ab - permuted).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&ab));
        }
    }

    #[test]
    fn item_set_mismatch_is_an_error() {
        assert!(nmi(&[0, 1], &[0, 1, 1], NmiVariant::Geometric).is_err());
        let pred: std::collections::BTreeMap<String, usize> =
            [("a".to_string(), 0), ("b".to_string(), 1)].into();
        let truth: std::collections::BTreeMap<String, String> =
            [("a".to_string(), "x".to_string()), ("c".to_string(), "y".to_string())].into();
        assert!(nmi_labeled(&pred, &truth, NmiVariant::Geometric).is_err());
    }

    #[test]
    fn labeled_wrapper_matches_indexed() {
        let pred: std::collections::BTreeMap<String, usize> = [
            ("a".to_string(), 0),
            ("b".to_string(), 0),
            ("c".to_string(), 1),
            ("d".to_string(), 1),
        ]
        .into();
        let truth: std::collections::BTreeMap<String, String> = [
            ("a".to_string(), "dairy".to_string()),
            ("b".to_string(), "dairy".to_string()),
            ("c".to_string(), "fruit".to_string()),
            ("d".to_string(), "meat".to_string()),
        ]
        .into();
        let v = nmi_labeled(&pred, &truth, NmiVariant::Geometric).unwrap();
        let direct = nmi(&[0, 0, 1, 1], &[0, 0, 1, 2], NmiVariant::Geometric).unwrap();
        assert!((v - direct).abs() < 1e-12);
    }
}
