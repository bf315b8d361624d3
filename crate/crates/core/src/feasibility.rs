//! Ground-truth feasibility: direct checks of the cut constraints
//! `r(X) ≥ g(X)` for every proper subset `X ⊂ C`, the partition criterion
//! for a target sum-rate, and exhaustive integer strategy search.

use std::fmt;
use std::ops::ControlFlow;

use num_rational::Ratio;
use thiserror::Error;

use crate::bounds::{ExactConfig, RateError};
use crate::instance::{
    enumerate_subsets, for_each_partition_blocks, ClientSubset, CutFunction, Instance, Partition,
};
use crate::rate::Rate;

/// Client-count limit for the brute-force strategy search.
pub const BRUTE_FORCE_MAX_CLIENTS: usize = 6;
/// The brute-force sum-rate cap may not exceed this multiple of `L`.
pub const BRUTE_FORCE_CAP_FACTOR: u64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("strategy has {got} entries but the instance has {expected} clients")]
    LengthMismatch { expected: usize, got: usize },
    #[error("K = {clients} exceeds the brute-force limit of {BRUTE_FORCE_MAX_CLIENTS} clients")]
    TooManyClients { clients: usize },
    #[error("sum-rate cap {cap} exceeds the brute-force limit of {limit}")]
    CapTooLarge { cap: u64, limit: u64 },
    #[error("no integer strategy with sum-rate at most {cap} achieves recovery")]
    CapExceeded { cap: u64 },
    #[error("negative sum-rate {0}")]
    NegativeAlpha(Rate),
    #[error(transparent)]
    Guard(#[from] RateError),
}

/// Packet splitting allowed (rational rates) or not (integer rates).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ps,
    Nps,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ps" => Ok(Mode::Ps),
            "nps" => Ok(Mode::Nps),
            other => Err(format!("unknown mode `{other}` (expected ps or nps)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Integer,
    Rational,
}

/// Per-client transmission counts `r = (r_1, …, r_K)`, all nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    rates: Vec<Rate>,
    kind: StrategyKind,
}

impl Strategy {
    pub fn integer(rates: &[u64]) -> Self {
        Strategy {
            rates: rates
                .iter()
                .map(|&r| Rate::from_integer(r as i64))
                .collect(),
            kind: StrategyKind::Integer,
        }
    }

    /// Returns `None` if any entry is negative.
    pub fn rational(rates: Vec<Rate>) -> Option<Self> {
        if rates.iter().any(|r| r.numerator() < 0) {
            return None;
        }
        Some(Strategy {
            rates,
            kind: StrategyKind::Rational,
        })
    }

    pub fn rates(&self) -> &[Rate] {
        &self.rates
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Integer entries, if every entry is integral.
    pub fn as_integers(&self) -> Option<Vec<u64>> {
        self.rates
            .iter()
            .map(|r| r.is_integer().then(|| r.numerator() as u64))
            .collect()
    }

    /// `r(X) = Σ_{j∈X} r_j`.
    pub fn rate_of(&self, x: ClientSubset) -> Rate {
        Rate::from(
            x.clients()
                .map(|j| self.rates[j].as_ratio())
                .sum::<Ratio<i64>>(),
        )
    }

    /// The sum-rate `r(C)`.
    pub fn sum_rate(&self) -> Rate {
        Rate::from(self.rates.iter().map(|r| r.as_ratio()).sum::<Ratio<i64>>())
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rates.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Why a verdict is negative when no subset or partition is to blame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleReason {
    /// An NPS query with a fractional sum-rate.
    NonIntegral,
}

/// Membership evidence for the constant sum-rate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub violated_subset: Option<ClientSubset>,
    pub violated_partition: Option<Partition>,
    pub witness_strategy: Option<Strategy>,
    pub reason: Option<InfeasibleReason>,
}

impl FeasibilityVerdict {
    fn feasible(witness: Option<Strategy>) -> Self {
        FeasibilityVerdict {
            feasible: true,
            violated_subset: None,
            violated_partition: None,
            witness_strategy: witness,
            reason: None,
        }
    }

    fn subset(x: ClientSubset) -> Self {
        FeasibilityVerdict {
            feasible: false,
            violated_subset: Some(x),
            violated_partition: None,
            witness_strategy: None,
            reason: None,
        }
    }

    fn partition(p: Partition) -> Self {
        FeasibilityVerdict {
            feasible: false,
            violated_subset: None,
            violated_partition: Some(p),
            witness_strategy: None,
            reason: None,
        }
    }

    fn non_integral() -> Self {
        FeasibilityVerdict {
            feasible: false,
            violated_subset: None,
            violated_partition: None,
            witness_strategy: None,
            reason: Some(InfeasibleReason::NonIntegral),
        }
    }
}

/// Checks `r(X) ≥ g(X)` for every `X ⊂ C`. On failure the violating subset
/// with the lexicographically smallest label list is reported.
pub fn strategy_achieves_recovery(
    inst: &Instance,
    s: &Strategy,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    check_recovery(&inst.cut(), s)
}

fn check_recovery(
    cf: &CutFunction<'_>,
    s: &Strategy,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    let k = cf.num_clients();
    if s.len() != k {
        return Err(FeasibilityError::LengthMismatch {
            expected: k,
            got: s.len(),
        });
    }
    let worst = enumerate_subsets(k, true, false)
        .filter(|&x| s.rate_of(x) < Rate::from_integer(cf.eval(x) as i64))
        .min_by_key(|x| x.labels());
    Ok(match worst {
        Some(x) => FeasibilityVerdict::subset(x),
        None => FeasibilityVerdict::feasible(Some(s.clone())),
    })
}

/// Decides whether some strategy with sum-rate `alpha` achieves recovery.
///
/// `alpha` is feasible iff `alpha ≥ Σ_i g(C∖X_i) / (|I| − 1)` for every
/// partition with at least two blocks; NPS additionally requires `alpha`
/// to be an integer. A negative verdict carries the first offending
/// partition in enumeration order. Positive verdicts carry an explicit
/// witness when the instance is small enough for the brute-force search.
pub fn alpha_feasible(
    inst: &Instance,
    alpha: Rate,
    mode: Mode,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    alpha_feasible_with(inst, alpha, mode, &ExactConfig::default())
}

pub fn alpha_feasible_with(
    inst: &Instance,
    alpha: Rate,
    mode: Mode,
    config: &ExactConfig,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    if alpha.numerator() < 0 {
        return Err(FeasibilityError::NegativeAlpha(alpha));
    }
    config.check(inst)?;
    if mode == Mode::Nps && !alpha.is_integer() {
        return Ok(FeasibilityVerdict::non_integral());
    }
    if let Some(p) = first_violating_partition(&inst.cut(), alpha) {
        return Ok(FeasibilityVerdict::partition(p));
    }
    let witness = if inst.num_clients() <= BRUTE_FORCE_MAX_CLIENTS {
        match mode {
            Mode::Nps => first_integer_strategy(&inst.cut(), alpha.numerator() as u64),
            Mode::Ps => ps_witness(inst, alpha, config),
        }
    } else {
        None
    };
    Ok(FeasibilityVerdict::feasible(witness))
}

// First partition P (≥ 2 blocks) with Σ g(C∖X_i) > alpha · (|I| − 1).
fn first_violating_partition(cf: &CutFunction<'_>, alpha: Rate) -> Option<Partition> {
    let (an, ad) = (alpha.numerator() as i128, alpha.denominator() as i128);
    let table = cf.table();
    let mut found = None;
    for_each_partition_blocks(cf.num_clients(), 2, |blocks| {
        if found.is_some() {
            return;
        }
        let sum: u64 = blocks.iter().map(|&b| table.get_complement(b)).sum();
        if sum as i128 * ad > an * (blocks.len() as i128 - 1) {
            found = Some(blocks.to_vec());
        }
    });
    found.map(|b| Partition::new(cf.num_clients(), b).expect("enumerated partition"))
}

// A rational witness from an integer strategy for the (K−1)-scaled cut
// function, normalized and padded on client 1 up to `alpha`.
fn ps_witness(inst: &Instance, alpha: Rate, config: &ExactConfig) -> Option<Strategy> {
    let k = inst.num_clients() as i64;
    let (hat, normalized) = config.alpha_hat(inst).ok()?;
    if normalized > alpha {
        return None;
    }
    let scaled = CutFunction::new(inst, k as u64 - 1);
    let chunks = first_integer_strategy(&scaled, hat)?.as_integers()?;
    let mut rates: Vec<Rate> = chunks.iter().map(|&c| Rate::new(c as i64, k - 1)).collect();
    rates[0] = Rate::from(rates[0].as_ratio() + (alpha - normalized).as_ratio());
    Strategy::rational(rates)
}

// Integer strategies summing to `alpha`, visited in lexicographic order;
// the visitor may stop the search.
fn search_strategies<F>(cf: &CutFunction<'_>, alpha: u64, mut visit: F)
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    struct Search<'t, F> {
        k: usize,
        alpha: u64,
        g: &'t [u64],
        // partial sums r(X) for X within the assigned prefix, by mask
        sums: Vec<u64>,
        rates: Vec<u64>,
        visit: F,
    }

    impl<F: FnMut(&[u64]) -> ControlFlow<()>> Search<'_, F> {
        // Extends the prefix sums with client i at rate v and checks every
        // subset that contains i. `Err(true)` means larger v cannot help.
        fn place(&mut self, i: usize, v: u64) -> Result<(), bool> {
            let bit = 1usize << i;
            let full = (1usize << self.k) - 1;
            for low in 0..bit {
                let x = low | bit;
                let r = self.sums[low] + v;
                self.sums[x] = r;
                let g_x = if x == full { 0 } else { self.g[x] };
                let g_rest = self.g[full ^ x];
                // r(C∖X) = alpha − r(X) must cover g(C∖X)
                if r + g_rest > self.alpha {
                    return Err(true);
                }
                if r < g_x {
                    return Err(false);
                }
            }
            Ok(())
        }

        fn rec(&mut self, i: usize, remaining: u64) -> ControlFlow<()> {
            if i + 1 == self.k {
                self.rates[i] = remaining;
                if self.place(i, remaining).is_ok() {
                    return (self.visit)(&self.rates);
                }
                return ControlFlow::Continue(());
            }
            for v in 0..=remaining {
                match self.place(i, v) {
                    Err(true) => break,
                    Err(false) => continue,
                    Ok(()) => {
                        self.rates[i] = v;
                        self.rec(i + 1, remaining - v)?;
                    }
                }
            }
            ControlFlow::Continue(())
        }
    }

    let k = cf.num_clients();
    let g: Vec<u64> = (0..1u64 << k)
        .map(|m| cf.eval(ClientSubset::from_mask(m)))
        .collect();
    let mut search = Search {
        k,
        alpha,
        g: &g,
        sums: vec![0; 1 << k],
        rates: vec![0; k],
        visit: &mut visit,
    };
    let _ = search.rec(0, alpha);
}

fn first_integer_strategy(cf: &CutFunction<'_>, alpha: u64) -> Option<Strategy> {
    let mut found = None;
    search_strategies(cf, alpha, |r| {
        found = Some(Strategy::integer(r));
        ControlFlow::Break(())
    });
    found
}

fn check_brute_guard(inst: &Instance, cap: u64) -> Result<(), FeasibilityError> {
    let k = inst.num_clients();
    if k > BRUTE_FORCE_MAX_CLIENTS {
        return Err(FeasibilityError::TooManyClients { clients: k });
    }
    let limit = BRUTE_FORCE_CAP_FACTOR * inst.num_packets() as u64;
    if cap > limit {
        return Err(FeasibilityError::CapTooLarge { cap, limit });
    }
    Ok(())
}

/// Smallest integer sum-rate admitting a recovering integer strategy, by
/// exhaustive search in increasing sum-rate order, with the
/// lexicographically first witness.
///
/// `alpha_cap` defaults to `min(K·L, 3L)`; some holder sending each packet
/// once always succeeds, so any cap of at least `L` suffices.
pub fn brute_force_min_sum_rate_nps(
    inst: &Instance,
    alpha_cap: Option<u64>,
) -> Result<(u64, Strategy), FeasibilityError> {
    let l = inst.num_packets() as u64;
    let k = inst.num_clients() as u64;
    let cap = alpha_cap.unwrap_or((k * l).min(BRUTE_FORCE_CAP_FACTOR * l));
    check_brute_guard(inst, cap)?;
    let cf = inst.cut();
    (0..=cap)
        .find_map(|alpha| first_integer_strategy(&cf, alpha).map(|s| (alpha, s)))
        .ok_or(FeasibilityError::CapExceeded { cap })
}

/// Every recovering integer strategy with sum-rate `alpha`, in
/// lexicographic order.
pub fn enumerate_strategies(
    inst: &Instance,
    alpha: u64,
) -> Result<Vec<Strategy>, FeasibilityError> {
    check_brute_guard(inst, alpha)?;
    let mut out = Vec::new();
    search_strategies(&inst.cut(), alpha, |r| {
        out.push(Strategy::integer(r));
        ControlFlow::Continue(())
    });
    Ok(out)
}
