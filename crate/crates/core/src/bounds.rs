//! Minimum sum-rate: exact values by partition enumeration and cheap lower
//! bounds.
//!
//! The exact PS value is the maximum over partitions `{X_i}` of `C` with at
//! least two blocks of `Σ_i g(C∖X_i) / (|I| − 1)`; the NPS value is the
//! maximum of the per-partition ceilings. Enumeration is exponential (Bell
//! numbers), so every exact routine is guarded by a client-count limit.

use thiserror::Error;

use crate::instance::{
    for_each_partition_blocks, ClientSubset, CutFunction, CutTable, Instance, Partition,
};
use crate::rate::{ceil_div, Rate};

/// Default client-count limit for partition enumeration. Bell(14) ≈ 1.9×10⁸.
pub const DEFAULT_MAX_CLIENTS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RateError {
    #[error(
        "K = {clients} exceeds the partition-enumeration limit of {limit}; use the lower bounds instead"
    )]
    GuardExceeded { clients: usize, limit: usize },
}

/// Limits for the exact (enumerating) routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    pub max_clients: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_clients: DEFAULT_MAX_CLIENTS,
        }
    }
}

/// The rational maximum and the maximum of ceilings from one enumeration
/// pass, each with the first
/// maximizing partition in enumeration order.
#[derive(Debug, Clone)]
struct PartitionMaxima {
    ps: Rate,
    ps_witness: Partition,
    nps: u64,
    nps_witness: Partition,
}

impl ExactConfig {
    pub fn check(&self, inst: &Instance) -> Result<(), RateError> {
        let k = inst.num_clients();
        if k > self.max_clients {
            return Err(RateError::GuardExceeded {
                clients: k,
                limit: self.max_clients,
            });
        }
        Ok(())
    }

    fn maxima(&self, cf: &CutFunction<'_>) -> Result<PartitionMaxima, RateError> {
        self.check(cf.instance())?;
        let k = cf.num_clients();
        let table = cf.table();
        // (sum, blocks - 1) of the current best
        let mut ps_best: Option<(u64, u64, Vec<ClientSubset>)> = None;
        let mut nps_best: Option<(u64, Vec<ClientSubset>)> = None;
        for_each_partition_blocks(k, 2, |blocks| {
            let sum: u64 = blocks.iter().map(|&b| table.get_complement(b)).sum();
            let denom = blocks.len() as u64 - 1;
            let better = match &ps_best {
                None => true,
                Some((s, d, _)) => sum * d > s * denom,
            };
            if better {
                ps_best = Some((sum, denom, blocks.to_vec()));
            }
            let ceil = ceil_div(sum, denom);
            if nps_best.as_ref().is_none_or(|(c, _)| ceil > *c) {
                nps_best = Some((ceil, blocks.to_vec()));
            }
        });
        // K ≥ 2 guarantees at least one partition with two blocks.
        let (s, d, ps_blocks) = ps_best.expect("K >= 2");
        let (c, nps_blocks) = nps_best.expect("K >= 2");
        Ok(PartitionMaxima {
            ps: Rate::new(s as i64, d as i64),
            ps_witness: Partition::new(k, ps_blocks).expect("enumerated partition"),
            nps: c,
            nps_witness: Partition::new(k, nps_blocks).expect("enumerated partition"),
        })
    }

    pub fn min_sum_rate_ps(&self, inst: &Instance) -> Result<(Rate, Partition), RateError> {
        let m = self.maxima(&inst.cut())?;
        Ok((m.ps, m.ps_witness))
    }

    pub fn min_sum_rate_nps(&self, inst: &Instance) -> Result<(u64, Partition), RateError> {
        let m = self.maxima(&inst.cut())?;
        Ok((m.nps, m.nps_witness))
    }

    /// `L − min_P (Σ_i |⋃_{j∈X_i} H_j| − L) / (|I| − 1)`, evaluated from
    /// block unions of the has-sets without going through `g`.
    pub fn min_sum_rate_chan(&self, inst: &Instance) -> Result<Rate, RateError> {
        self.check(inst)?;
        let k = inst.num_clients();
        let l = inst.num_packets() as u64;
        let unions: Vec<u64> = (0..1u64 << k)
            .map(|m| inst.union_size(ClientSubset::from_mask(m)) as u64)
            .collect();
        let mut best: Option<(u64, u64)> = None;
        for_each_partition_blocks(k, 2, |blocks| {
            let total: u64 = blocks.iter().map(|b| unions[b.mask() as usize]).sum();
            // the blocks jointly cover every packet, so total ≥ L
            let num = total - l;
            let den = blocks.len() as u64 - 1;
            if best.is_none_or(|(n, d)| num * d < n * den) {
                best = Some((num, den));
            }
        });
        let (n, d) = best.expect("K >= 2");
        Ok(Rate::from_integer(l as i64) - Rate::new(n as i64, d as i64))
    }

    /// Minimum integer sum-rate under the chunk-scaled cut function
    /// `ĝ = (K−1)g`, and that value divided by `K − 1`.
    pub fn alpha_hat(&self, inst: &Instance) -> Result<(u64, Rate), RateError> {
        let k = inst.num_clients() as u64;
        let scaled = CutFunction::new(inst, k - 1);
        let m = self.maxima(&scaled)?;
        Ok((m.nps, Rate::new(m.nps as i64, k as i64 - 1)))
    }

    pub fn bound_report(&self, inst: &Instance) -> Result<BoundReport, RateError> {
        let m = self.maxima(&inst.cut())?;
        let (beta, _) = algorithm1_beta(inst, false);
        Ok(BoundReport {
            alpha_star_ps: m.ps,
            alpha_star_nps: m.nps,
            beta,
            lb_roua: lb_roua(inst),
            lb_sprint: lb_sprint(inst),
            argmax_partition: m.ps_witness,
        })
    }
}

/// Exact PS minimum sum-rate with a maximizing partition.
pub fn exact_min_sum_rate_ps(inst: &Instance) -> Result<(Rate, Partition), RateError> {
    ExactConfig::default().min_sum_rate_ps(inst)
}

/// Exact NPS minimum sum-rate with a maximizing partition.
pub fn exact_min_sum_rate_nps(inst: &Instance) -> Result<(u64, Partition), RateError> {
    ExactConfig::default().min_sum_rate_nps(inst)
}

/// The PS minimum sum-rate through the block-union formula.
pub fn exact_min_sum_rate_chan(inst: &Instance) -> Result<Rate, RateError> {
    ExactConfig::default().min_sum_rate_chan(inst)
}

pub fn alpha_hat(inst: &Instance) -> Result<(u64, Rate), RateError> {
    ExactConfig::default().alpha_hat(inst)
}

pub fn bound_report(inst: &Instance) -> Result<BoundReport, RateError> {
    ExactConfig::default().bound_report(inst)
}

/// `Σ_i g(C∖X_i) / (|I| − 1)` for a single partition; `None` for the
/// one-block partition.
pub fn partition_value(cf: &CutFunction<'_>, p: &Partition) -> Option<Rate> {
    if p.num_blocks() < 2 {
        return None;
    }
    let sum: u64 = p.blocks().iter().map(|&b| cf.eval_complement(b)).sum();
    Some(Rate::new(sum as i64, p.num_blocks() as i64 - 1))
}

fn singleton_complements(cf: &CutFunction<'_>) -> Vec<u64> {
    (0..cf.num_clients())
        .map(|j| cf.eval_complement(ClientSubset::singleton(j)))
        .collect()
}

/// `max_j |H_j^c|`.
pub fn lb_roua(inst: &Instance) -> u64 {
    singleton_complements(&inst.cut())
        .into_iter()
        .max()
        .unwrap_or(0)
}

/// `⌈Σ_j |H_j^c| / (K − 1)⌉`.
pub fn lb_sprint(inst: &Instance) -> u64 {
    let total: u64 = singleton_complements(&inst.cut()).iter().sum();
    ceil_div(total, inst.num_clients() as u64 - 1)
}

/// One greedy extension of a chain: `selected` joined, giving `chain`, and the
/// bound `candidate` evaluated on the partition `{chain} ∪ singletons`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub selected: usize,
    pub chain: ClientSubset,
    pub candidate: u64,
}

/// The greedy chain grown from one start client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algorithm1Trace {
    pub start_client: usize,
    pub steps: Vec<ChainStep>,
}

impl Algorithm1Trace {
    /// Largest candidate along this chain, if it has any steps.
    pub fn contribution(&self) -> Option<u64> {
        self.steps.iter().map(|s| s.candidate).max()
    }
}

/// Deterministic lower bound `β ≤ α*_NPS` built from Queyranne-style greedy
/// chains.
///
/// `β` starts at the all-singletons value `⌈Σ_j g(C∖{j}) / (K−1)⌉`. For each
/// start client `k`, the chain `W` grows one client at a time, always adding
/// the `u ∉ W` maximizing `g(C∖(W∪{u})) − g(C∖{u})` (smallest index on
/// ties), and after each growth step `β` absorbs
/// `⌈(g(C∖W) + Σ_{j∉W} g(C∖{j})) / |C∖W|⌉` until `|W| = K − 1`.
/// With `K = 2` there are no growth steps and the initial value is returned.
pub fn algorithm1_beta(inst: &Instance, trace: bool) -> (u64, Option<Vec<Algorithm1Trace>>) {
    let cf = inst.cut();
    let k = inst.num_clients();
    let all = inst.clients();
    let singles = singleton_complements(&cf);
    let mut beta = ceil_div(singles.iter().sum(), k as u64 - 1);
    let mut traces = trace.then(Vec::new);

    // g(C∖Y) through a table when small enough, otherwise direct evaluation
    let table: Option<CutTable> = (k <= 16).then(|| cf.table());
    let g_without = |y: ClientSubset| match &table {
        Some(t) => t.get_complement(y),
        None => cf.eval_complement(y),
    };

    for start in 0..k {
        let mut chain = ClientSubset::singleton(start);
        let mut steps = Vec::new();
        for _m in 2..k {
            let mut pick: Option<(usize, i64)> = None;
            for u in all.difference(chain).clients() {
                let gain = g_without(chain.with(u)) as i64 - singles[u] as i64;
                if pick.is_none_or(|(_, best)| gain > best) {
                    pick = Some((u, gain));
                }
            }
            let (u, _) = pick.expect("chain smaller than K - 1 leaves candidates");
            chain = chain.with(u);
            let rest = all.difference(chain);
            let numer = g_without(chain) + rest.clients().map(|j| singles[j]).sum::<u64>();
            let candidate = ceil_div(numer, rest.len() as u64);
            beta = beta.max(candidate);
            if traces.is_some() {
                steps.push(ChainStep {
                    selected: u,
                    chain,
                    candidate,
                });
            }
        }
        if let Some(t) = traces.as_mut() {
            t.push(Algorithm1Trace {
                start_client: start,
                steps,
            });
        }
    }
    (beta, traces)
}

/// Every bound for one instance plus the exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub alpha_star_ps: Rate,
    pub alpha_star_nps: u64,
    pub beta: u64,
    pub lb_roua: u64,
    pub lb_sprint: u64,
    pub argmax_partition: Partition,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::enumerate_partitions;
    use crate::instance::fixtures::sample;

    fn brute_ps(inst: &Instance) -> Rate {
        let cf = inst.cut();
        enumerate_partitions(inst.num_clients(), 2)
            .filter_map(|p| partition_value(&cf, &p))
            .max()
            .unwrap()
    }

    fn small() -> Instance {
        Instance::new(2, &[vec![0], vec![1], vec![0, 1]]).unwrap()
    }

    fn pair() -> Instance {
        Instance::new(2, &[vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn sample_exact_values() {
        let inst = sample();
        let (ps, witness) = exact_min_sum_rate_ps(&inst).unwrap();
        assert_eq!(ps, Rate::new(7, 2));
        assert_eq!(partition_value(&inst.cut(), &witness), Some(ps));
        let (nps, w) = exact_min_sum_rate_nps(&inst).unwrap();
        assert_eq!(nps, 4);
        assert_eq!(partition_value(&inst.cut(), &w).unwrap().ceil(), 4);
        assert_eq!(exact_min_sum_rate_chan(&inst).unwrap(), Rate::new(7, 2));
    }

    #[test]
    fn sample_witness_is_the_singletons() {
        // {1},{2},{3}: (1+3+3)/2 = 7/2, and no other partition reaches it
        let (_, w) = exact_min_sum_rate_ps(&sample()).unwrap();
        assert_eq!(w, Partition::singletons(3));
    }

    #[test]
    fn two_client_exchange() {
        let inst = pair();
        assert_eq!(
            exact_min_sum_rate_ps(&inst).unwrap().0,
            Rate::from_integer(2)
        );
        assert_eq!(exact_min_sum_rate_nps(&inst).unwrap().0, 2);
        assert_eq!(lb_roua(&inst), 1);
        assert_eq!(lb_sprint(&inst), 2);
        let (beta, traces) = algorithm1_beta(&inst, true);
        assert_eq!(beta, 2);
        let traces = traces.unwrap();
        assert_eq!(traces.len(), 2);
        assert!(traces.iter().all(|t| t.steps.is_empty()));
    }

    #[test]
    fn three_clients_one_full() {
        // brute force over the four partitions with ≥ 2 blocks:
        // {1}{2}{3}: (1+1+0)/2 = 1; {1,2}{3}: 0+0 = 0; {1,3}{2}: 0+1 = 1; {1}{2,3}: 1+0 = 1
        let inst = small();
        assert_eq!(brute_ps(&inst), Rate::from_integer(1));
        assert_eq!(
            exact_min_sum_rate_ps(&inst).unwrap().0,
            Rate::from_integer(1)
        );
        assert_eq!(exact_min_sum_rate_nps(&inst).unwrap().0, 1);
        assert_eq!(algorithm1_beta(&inst, false).0, 1);
    }

    #[test]
    fn all_full_is_zero_everywhere() {
        for k in 2..=6 {
            let inst = Instance::all_full(k, 4).unwrap();
            assert_eq!(exact_min_sum_rate_ps(&inst).unwrap().0, Rate::ZERO);
            assert_eq!(exact_min_sum_rate_nps(&inst).unwrap().0, 0);
            assert_eq!(exact_min_sum_rate_chan(&inst).unwrap(), Rate::ZERO);
            assert_eq!(alpha_hat(&inst).unwrap(), (0, Rate::ZERO));
            assert_eq!(lb_roua(&inst), 0);
            assert_eq!(lb_sprint(&inst), 0);
            assert_eq!(algorithm1_beta(&inst, false).0, 0);
        }
    }

    #[test]
    fn sample_bounds() {
        let inst = sample();
        assert_eq!(lb_roua(&inst), 3);
        assert_eq!(lb_sprint(&inst), 4);
        let (beta, traces) = algorithm1_beta(&inst, true);
        assert_eq!(beta, 4);
        // every chain's single growth step yields 3
        let traces = traces.unwrap();
        assert_eq!(traces.len(), 3);
        for t in &traces {
            assert_eq!(t.steps.len(), 1);
            assert_eq!(t.steps[0].candidate, 3);
            assert_eq!(t.steps[0].chain.len(), 2);
            assert!(t.steps[0].chain.contains(t.start_client));
        }
    }

    #[test]
    fn sample_chain_selection_breaks_ties_low() {
        // From client 2: u=1 gains g({3})-g({2,3}) = -1, u=3 gains
        // g({1})-g({1,2}) = -2, so client 1 is chosen.
        let (_, traces) = algorithm1_beta(&sample(), true);
        let t = &traces.unwrap()[1];
        assert_eq!(t.steps[0].selected, 0);
        // From client 1: u=2 gives g({3})-g({1,3}) = -3, u=3 gives
        // g({2})-g({1,2}) = -3; tie goes to client 2.
        let (_, traces) = algorithm1_beta(&sample(), true);
        assert_eq!(traces.unwrap()[0].steps[0].selected, 1);
    }

    #[test]
    fn sample_alpha_hat() {
        assert_eq!(alpha_hat(&sample()).unwrap(), (7, Rate::new(7, 2)));
    }

    #[test]
    fn guard_refuses_large_instances() {
        let inst = Instance::all_full(15, 1).unwrap();
        let err = exact_min_sum_rate_ps(&inst).unwrap_err();
        assert_eq!(
            err,
            RateError::GuardExceeded {
                clients: 15,
                limit: 14
            }
        );
        assert!(err.to_string().contains("lower bounds"));
        let small = ExactConfig { max_clients: 3 };
        assert!(small
            .min_sum_rate_nps(&Instance::all_full(4, 1).unwrap())
            .is_err());
        // bounds do not need enumeration
        assert_eq!(algorithm1_beta(&inst, false).0, 0);
    }

    #[test]
    fn report_is_consistent() {
        let r = bound_report(&sample()).unwrap();
        assert_eq!(r.alpha_star_ps, Rate::new(7, 2));
        assert_eq!(
            (r.alpha_star_nps, r.beta, r.lb_roua, r.lb_sprint),
            (4, 4, 3, 4)
        );
        assert!(r.lb_sprint <= r.beta && r.beta <= r.alpha_star_nps);
    }
}
