mod common;

use captionprobe::retrieval::{ranks_for, MetricsReport};
use captionprobe::{SeededRng, SimilarityMatrix};
use common::{gt, oracle_metrics, oracle_ranks, random_case};

#[test]
fn ranks_and_metrics_match_brute_force() {
    let mut rng = SeededRng::from_state(2024);
    for case in 0..1000 {
        let (sim, truth) = random_case(&mut rng);
        let got = ranks_for(&sim, &gt(&truth)).unwrap();
        let want = oracle_ranks(&sim, &truth);
        assert_eq!(got, want, "case {case}");
        let report = MetricsReport::from_ranks("t", captionprobe::Direction::T2v, &got).unwrap();
        let o = oracle_metrics(&want);
        assert_eq!(
            (report.r1, report.r5, report.r10, report.median_rank, report.mean_rank),
            (o.r1, o.r5, o.r10, o.median, o.mean),
            "case {case}"
        );
    }
}

#[test]
fn invariant_to_candidate_permutation_and_monotone_rescaling() {
    let mut rng = SeededRng::from_state(7);
    for _ in 0..200 {
        let (sim, truth) = random_case(&mut rng);
        let base = ranks_for(&sim, &gt(&truth)).unwrap();

        let c = sim.candidate_ids().len();
        let mut perm: Vec<usize> = (0..c).collect();
        rng.shuffle(&mut perm);
        let cids: Vec<String> = perm.iter().map(|&j| sim.candidate_ids()[j].clone()).collect();
        let mut values = Vec::new();
        let mut scaled = Vec::new();
        for i in 0..sim.query_ids().len() {
            for &j in &perm {
                let v = sim.get(i, j);
                values.push(v);
                scaled.push(v * 0.5 + 0.25);
            }
        }
        let permuted = SimilarityMatrix::new(sim.query_ids().to_vec(), cids.clone(), values).unwrap();
        assert_eq!(ranks_for(&permuted, &gt(&truth)).unwrap(), base);
        let rescaled = SimilarityMatrix::new(sim.query_ids().to_vec(), cids, scaled).unwrap();
        assert_eq!(ranks_for(&rescaled, &gt(&truth)).unwrap(), base);
    }
}

#[test]
fn raising_a_truth_score_never_worsens_its_rank() {
    let mut rng = SeededRng::from_state(11);
    for _ in 0..200 {
        let (sim, truth) = random_case(&mut rng);
        let base = ranks_for(&sim, &gt(&truth)).unwrap();
        let cids = sim.candidate_ids().to_vec();
        let mut values = Vec::new();
        for (i, q) in sim.query_ids().iter().enumerate() {
            for (j, c) in cids.iter().enumerate() {
                let v = sim.get(i, j);
                values.push(if truth[q].contains(c) { v + 0.3 } else { v });
            }
        }
        let raised = SimilarityMatrix::new(sim.query_ids().to_vec(), cids, values).unwrap();
        let after = ranks_for(&raised, &gt(&truth)).unwrap();
        assert!(after.iter().zip(&base).all(|(a, b)| a <= b));
    }
}
