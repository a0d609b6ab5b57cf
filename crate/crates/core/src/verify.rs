//! Verification sweeps: pipeline-versus-oracle agreement and the contraction
//! lemma checks, over deterministic generated corpora.

use std::fmt;

use rayon::prelude::*;

use crate::decomp::{expander_decompose_with, CertStatus, DecompConfig};
use crate::graph::{cut_size, is_connected, MultiGraph, SimpleGraph, VertexSet};
use crate::generate;
use crate::oracle::{all_min_cuts, exhaustive_min_cut, stoer_wagner, EXHAUSTIVE_LIMIT};
use crate::pipeline::{contract, edge_connectivity_with, trim_and_shave, verify_cut, PipelineConfig, PHI_NUMERATOR};

/// Graphs at or below this size are also compared with the exhaustive oracle.
pub const EXHAUSTIVE_COMPARE_LIMIT: usize = 14;

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: SimpleGraph,
}

/// Deliberate defect for exercising the harness itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Reports one more than the pipeline's answer.
    AnswerOffByOne,
}

const GNP_P: [f64; 3] = [0.1, 0.3, 0.6];

/// `trials` graphs with `min_n ≤ n ≤ max_n`, cycling through gnp at three
/// densities, cycles, hypercubes and clique pairs.
pub fn standard_corpus(trials: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    assert!(min_n >= 3 && max_n >= min_n, "corpus needs 3 <= min_n <= max_n");
    let span = (max_n - min_n + 1) as u64;
    let pick_n = |i: usize, salt: u64| min_n + (crate::spectral::mix64(seed ^ (i as u64) << 8 ^ salt) % span) as usize;
    (0..trials)
        .map(|i| {
            let instance_seed = crate::spectral::mix64(seed.wrapping_add(i as u64));
            let (name, graph) = match i % 8 {
                0..=4 => {
                    let p = GNP_P[i % 3];
                    let n = pick_n(i, 1);
                    (format!("gnp n={n} p={p} seed={instance_seed}"), generate::gnp(n, p, instance_seed).unwrap())
                }
                5 => {
                    let n = pick_n(i, 2);
                    (format!("cycle n={n}"), generate::cycle(n).unwrap())
                }
                6 => {
                    let max_d = (usize::BITS - 1 - max_n.leading_zeros()) as usize;
                    let min_d = (usize::BITS - min_n.next_power_of_two().leading_zeros() - 1) as usize;
                    let d = if max_d <= min_d.max(2) {
                        max_d.max(2)
                    } else {
                        min_d.max(2) + (instance_seed % (max_d - min_d.max(2) + 1) as u64) as usize
                    };
                    if (1 << d) > max_n || (1 << d) < min_n {
                        let n = pick_n(i, 3);
                        (format!("gnp n={n} p=0.6 seed={instance_seed}"), generate::gnp(n, 0.6, instance_seed).unwrap())
                    } else {
                        (format!("hypercube d={d}"), generate::hypercube(d).unwrap())
                    }
                }
                _ => {
                    let q = (pick_n(i, 4) / 2).max(2);
                    let t = 1 + (instance_seed % q as u64) as usize;
                    (format!("clique-pair q={q} t={t}"), generate::clique_pair(q, t).unwrap())
                }
            };
            Instance { name, graph }
        })
        .collect()
}

/// Clique pairs above the trivial-degree threshold with a few intra-clique
/// edges removed, kept only when the planted cut is provably the unique
/// minimum cut (each side's own connectivity exceeds the number of joining
/// edges).
pub fn planted_dense_corpus(count: usize, seed: u64) -> Vec<(Instance, u64, Vec<VertexSet>)> {
    let mut out = Vec::new();
    let mut attempt = 0u64;
    while out.len() < count && attempt < 20 * count as u64 + 20 {
        let s = crate::spectral::mix64(seed ^ attempt.wrapping_mul(0x9e37));
        attempt += 1;
        let q = 90 + (s % 21) as usize;
        let t = 1 + (s >> 8) as usize % 20;
        let drop = 0.01 + 0.03 * ((s >> 16) % 100) as f64 / 100.0;
        let g = generate::perturbed_clique_pair(q, t, drop, s).unwrap();
        if g.min_degree() <= crate::pipeline::TRIVIAL_DEGREE {
            continue;
        }
        let side = VertexSet::new(g.n(), 0..q).unwrap();
        let unique = [side.clone(), side.complement()].iter().all(|half| {
            let (sub, _) = induced(&g, half);
            stoer_wagner(&MultiGraph::from_simple(&sub)).map(|c| c.value > t as u64).unwrap_or(false)
        });
        if unique {
            out.push((Instance { name: format!("perturbed-clique-pair q={q} t={t} drop={drop:.3}"), graph: g }, t as u64, vec![side]));
        }
    }
    out
}

fn induced(g: &SimpleGraph, s: &VertexSet) -> (SimpleGraph, Vec<usize>) {
    let ids = s.ids();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .filter_map(|(u, v)| Some((ids.binary_search(&u).ok()?, ids.binary_search(&v).ok()?)))
        .collect();
    (SimpleGraph::from_edges(ids.len(), &edges, true).unwrap().0, ids.to_vec())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceSummary {
    pub instances: usize,
    pub stoer_wagner_equal: usize,
    pub exhaustive_checked: usize,
    pub exhaustive_equal: usize,
    pub cuts_verified: usize,
    pub failures: Vec<String>,
}

impl EquivalenceSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.stoer_wagner_equal == self.instances
            && self.exhaustive_equal == self.exhaustive_checked
    }
}

impl fmt::Display for EquivalenceSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} oracle-equal (stoer-wagner), {}/{} exhaustive-equal, {}/{} cuts verified",
            self.stoer_wagner_equal,
            self.instances,
            self.exhaustive_equal,
            self.exhaustive_checked,
            self.cuts_verified,
            self.instances
        )
    }
}

enum Outcome {
    Checked { sw_ok: bool, exhaustive: Option<bool>, cut_ok: bool, failure: Option<String> },
}

pub fn oracle_equivalence(instances: &[Instance], cfg: &PipelineConfig, fault: Fault) -> EquivalenceSummary {
    let outcomes: Vec<Outcome> = instances.par_iter().map(|inst| check_instance(inst, cfg, fault)).collect();
    let mut summary = EquivalenceSummary { instances: instances.len(), ..Default::default() };
    for Outcome::Checked { sw_ok, exhaustive, cut_ok, failure } in outcomes {
        summary.stoer_wagner_equal += sw_ok as usize;
        if let Some(ok) = exhaustive {
            summary.exhaustive_checked += 1;
            summary.exhaustive_equal += ok as usize;
        }
        summary.cuts_verified += cut_ok as usize;
        summary.failures.extend(failure);
    }
    summary
}

fn check_instance(inst: &Instance, cfg: &PipelineConfig, fault: Fault) -> Outcome {
    let g = &inst.graph;
    let (cut, report) = match edge_connectivity_with(g, cfg) {
        Ok(r) => r,
        Err(e) => {
            return Outcome::Checked {
                sw_ok: false,
                exhaustive: None,
                cut_ok: false,
                failure: Some(format!("{}: pipeline error: {e}", inst.name)),
            }
        }
    };
    let answer = match fault {
        Fault::None => cut.lambda,
        Fault::AnswerOffByOne => cut.lambda + 1,
    };
    let h = MultiGraph::from_simple(g);
    let sw = stoer_wagner(&h).expect("n >= 2").value;
    let exhaustive = (g.n() <= EXHAUSTIVE_COMPARE_LIMIT).then(|| exhaustive_min_cut(&h).expect("small graph").value);
    let cut_ok = verify_cut(g, &cut);
    let report_ok = report.answer == report.lambda_prime.min(report.delta as u64) && report.answer == cut.lambda;
    let sw_ok = answer == sw;
    let ex_ok = exhaustive.map(|e| e == answer);
    let failure = (!sw_ok || ex_ok == Some(false) || !cut_ok || !report_ok).then(|| {
        format!(
            "{}: pipeline {answer}, stoer-wagner {sw}, exhaustive {exhaustive:?}, cut verified {cut_ok}, report consistent {report_ok}",
            inst.name
        )
    });
    Outcome::Checked { sw_ok, exhaustive: ex_ok, cut_ok, failure }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaSummary {
    pub instances: usize,
    /// Instances with at least one non-trivial minimum cut.
    pub nonvacuous_instances: usize,
    /// Instances skipped because some part was not certified by enumeration
    /// or as a singleton.
    pub skipped_uncertified: usize,
    /// (part, non-trivial minimum cut) pairs checked.
    pub checks: usize,
    /// Checks whose part had at least two vertices.
    pub multi_vertex_checks: usize,
    pub violations: Vec<String>,
}

impl LemmaSummary {
    pub fn merge(&mut self, other: LemmaSummary) {
        self.instances += other.instances;
        self.nonvacuous_instances += other.nonvacuous_instances;
        self.skipped_uncertified += other.skipped_uncertified;
        self.checks += other.checks;
        self.multi_vertex_checks += other.multi_vertex_checks;
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for LemmaSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} lemma checks on {}/{} non-vacuous instances ({} with multi-vertex parts), {} violations, {} skipped uncertified",
            self.checks,
            self.nonvacuous_instances,
            self.instances,
            self.multi_vertex_checks,
            self.violations.len(),
            self.skipped_uncertified
        )
    }
}

/// Lemma checks on small graphs, with every minimum cut found by enumeration.
pub fn lemma_suite(instances: &[Instance], cfg: &DecompConfig) -> LemmaSummary {
    let results: Vec<LemmaSummary> = instances
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            if g.n() > EXHAUSTIVE_LIMIT || g.n() < 2 || !is_connected(g) {
                return LemmaSummary { instances: 1, ..Default::default() };
            }
            let (lambda, sides) = all_min_cuts(&MultiGraph::from_simple(g)).expect("small graph");
            check_lemma(inst, lambda, &sides, cfg, true)
        })
        .collect();
    let mut total = LemmaSummary::default();
    results.into_iter().for_each(|r| total.merge(r));
    total
}

/// Lemma checks on graphs whose non-trivial minimum cuts are known.
pub fn lemma_suite_known(instances: &[(Instance, u64, Vec<VertexSet>)], cfg: &DecompConfig) -> LemmaSummary {
    let results: Vec<LemmaSummary> =
        instances.par_iter().map(|(inst, lambda, cuts)| check_lemma(inst, *lambda, cuts, cfg, false)).collect();
    let mut total = LemmaSummary::default();
    results.into_iter().for_each(|r| total.merge(r));
    total
}

fn check_lemma(inst: &Instance, lambda: u64, min_cuts: &[VertexSet], cfg: &DecompConfig, require_enumerated: bool) -> LemmaSummary {
    let g = &inst.graph;
    let mut summary = LemmaSummary { instances: 1, ..Default::default() };
    let nontrivial: Vec<&VertexSet> = min_cuts.iter().filter(|c| c.len() >= 2 && g.n() - c.len() >= 2).collect();
    if nontrivial.is_empty() {
        return summary;
    }
    summary.nonvacuous_instances = 1;
    let delta = g.min_degree();
    let phi = PHI_NUMERATOR / delta as f64;
    let (partition, _) = expander_decompose_with(g, phi, cfg).expect("valid phi");
    if require_enumerated && partition.cert().iter().any(|c| !matches!(c, CertStatus::Exhaustive | CertStatus::Singleton)) {
        summary.skipped_uncertified = 1;
        return summary;
    }
    let (trimmed, shaved) = trim_and_shave(g, &partition);
    let contracted = contract(g, &shaved).expect("shaved sets are disjoint");
    for c in &nontrivial {
        for ((x, x1), x2) in partition.parts().iter().zip(&trimmed).zip(&shaved) {
            summary.checks += 1;
            if x.len() >= 2 {
                summary.multi_vertex_checks += 1;
            }
            let split = |s: &VertexSet| {
                let inside = s.intersection_len(c);
                inside.min(s.len() - inside)
            };
            let (s0, s1, s2) = (split(x), split(x1), split(x2));
            if 40 * s0 as u64 > lambda {
                summary.violations.push(format!("{}: part {:?} splits {s0} across a min cut, λ = {lambda}", inst.name, x.ids()));
            }
            if s1 > 2 {
                summary.violations.push(format!("{}: trimmed part {:?} splits {s1} across a min cut", inst.name, x1.ids()));
            }
            if s2 != 0 {
                summary.violations.push(format!("{}: shaved part {:?} straddles a min cut", inst.name, x2.ids()));
            }
        }
        let image = VertexSet::new(contracted.n(), c.ids().iter().map(|&v| contracted.origin_map()[v])).unwrap();
        let preserved = image.len() < contracted.n()
            && cut_size(&contracted, &image, &image.complement()).is_ok_and(|w| w == lambda)
            && contracted.expand(&image) == **c;
        if !preserved {
            summary.violations.push(format!("{}: min cut {:?} not preserved by contraction", inst.name, c.ids()));
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_in_range() {
        let a = standard_corpus(64, 4, 30, 9);
        let b = standard_corpus(64, 4, 30, 9);
        assert_eq!(a.len(), 64);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.graph, y.graph);
            assert!((3..=30).contains(&x.graph.n()), "{}", x.name);
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let corpus = standard_corpus(16, 4, 10, 1);
        let ok = oracle_equivalence(&corpus, &PipelineConfig::default(), Fault::None);
        assert!(ok.passed(), "{:?}", ok.failures);
        let bad = oracle_equivalence(&corpus, &PipelineConfig::default(), Fault::AnswerOffByOne);
        assert!(!bad.passed());
        assert_eq!(bad.failures.len(), 16);
    }
}
