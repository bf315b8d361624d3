//! Cooperative data exchange instances, client subsets, partitions and the
//! cut function `g`.
//!
//! Clients are indexed from 0 internally and in the file format. Every
//! human-facing rendering (`Display` on [`ClientSubset`] and [`Partition`])
//! uses 1-based labels.

use std::fmt;

use thiserror::Error;

/// Hard upper bound on the number of clients, fixed by the `u64` subset mask.
pub const MAX_CLIENTS: usize = 63;

/// The first condition an instance description fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("K = {0} < 2: at least two clients are required")]
    TooFewClients(usize),
    #[error("K = {0} exceeds the supported maximum of {MAX_CLIENTS} clients")]
    TooManyClients(usize),
    #[error("L = 0: the packet universe is empty")]
    NoPackets,
    #[error(
        "client {client} holds packet {packet}, outside the universe of {num_packets} packets"
    )]
    PacketOutOfRange {
        client: usize,
        packet: usize,
        num_packets: usize,
    },
    #[error("packet {packet} held by no client")]
    UncoveredPacket { packet: usize },
}

/// Checks the system-model assumptions on a raw has-set description.
///
/// `has_sets[j]` lists the 0-based packet indices held by client `j`.
/// Empty has-sets and has-sets equal to the whole universe are both
/// accepted; only coverage of the universe is required. Reported client and
/// packet numbers in the violation are 1-based.
pub fn validate_instance(num_packets: usize, has_sets: &[Vec<usize>]) -> Result<(), Violation> {
    let k = has_sets.len();
    if k < 2 {
        return Err(Violation::TooFewClients(k));
    }
    if k > MAX_CLIENTS {
        return Err(Violation::TooManyClients(k));
    }
    if num_packets == 0 {
        return Err(Violation::NoPackets);
    }
    let mut covered = vec![false; num_packets];
    for (client, set) in has_sets.iter().enumerate() {
        for &packet in set {
            if packet >= num_packets {
                return Err(Violation::PacketOutOfRange {
                    client: client + 1,
                    packet: packet + 1,
                    num_packets,
                });
            }
            covered[packet] = true;
        }
    }
    match covered.iter().position(|c| !c) {
        Some(p) => Err(Violation::UncoveredPacket { packet: p + 1 }),
        None => Ok(()),
    }
}

/// Fixed-width packet bitset over `{0, …, L−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PacketSet {
    words: Vec<u64>,
}

impl PacketSet {
    pub fn empty(num_packets: usize) -> Self {
        PacketSet {
            words: vec![0; num_packets.div_ceil(64)],
        }
    }

    pub fn full(num_packets: usize) -> Self {
        let mut s = Self::empty(num_packets);
        for p in 0..num_packets {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, packet: usize) {
        self.words[packet / 64] |= 1 << (packet % 64);
    }

    pub fn contains(&self, packet: usize) -> bool {
        self.words
            .get(packet / 64)
            .is_some_and(|w| w & (1 << (packet % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| i * 64 + b)
        })
    }

    fn words(&self) -> &[u64] {
        &self.words
    }
}

/// A set of clients as a bitmask; bit `j` is client `j` (label `j + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClientSubset(u64);

impl ClientSubset {
    pub const EMPTY: ClientSubset = ClientSubset(0);

    pub fn from_mask(mask: u64) -> Self {
        ClientSubset(mask)
    }

    /// The whole client set `C = {0, …, K−1}`.
    pub fn full(num_clients: usize) -> Self {
        debug_assert!(num_clients <= MAX_CLIENTS);
        ClientSubset((1u64 << num_clients) - 1)
    }

    pub fn singleton(client: usize) -> Self {
        ClientSubset(1 << client)
    }

    /// Builds a subset from 0-based client indices.
    pub fn from_clients<I: IntoIterator<Item = usize>>(clients: I) -> Self {
        ClientSubset(clients.into_iter().fold(0, |m, c| m | (1 << c)))
    }

    /// Builds a subset from 1-based client labels.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_clients(labels.into_iter().map(|l| l - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, client: usize) -> bool {
        self.0 & (1 << client) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn with(self, client: usize) -> Self {
        ClientSubset(self.0 | (1 << client))
    }

    pub fn union(self, other: Self) -> Self {
        ClientSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ClientSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ClientSubset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// `C ∖ self` within a `num_clients`-client system.
    pub fn complement(self, num_clients: usize) -> Self {
        ClientSubset::full(num_clients).difference(self)
    }

    /// 0-based client indices in ascending order.
    pub fn clients(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |b| mask & (1 << b) != 0)
    }

    /// 1-based client labels in ascending order.
    pub fn labels(self) -> Vec<usize> {
        self.clients().map(|c| c + 1).collect()
    }
}

impl fmt::Display for ClientSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, label) in self.labels().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "}}")
    }
}

/// A division of the client set into disjoint nonempty blocks.
///
/// Blocks are kept in order of their smallest member, which is the order a
/// restricted growth string assigns them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<ClientSubset>,
}

impl Partition {
    /// Builds a partition of `{0, …, K−1}`; returns `None` unless the blocks
    /// are nonempty, pairwise disjoint and cover every client.
    pub fn new(num_clients: usize, mut blocks: Vec<ClientSubset>) -> Option<Self> {
        let mut seen = ClientSubset::EMPTY;
        for &b in &blocks {
            if b.is_empty() || !b.intersection(seen).is_empty() {
                return None;
            }
            seen = seen.union(b);
        }
        if seen != ClientSubset::full(num_clients) {
            return None;
        }
        blocks.sort_by_key(|b| b.mask().trailing_zeros());
        Some(Partition { blocks })
    }

    /// Decodes a restricted growth string (`rgs[j]` is the block of client `j`).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let n = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![ClientSubset::EMPTY; n];
        for (client, &b) in rgs.iter().enumerate() {
            blocks[b] = blocks[b].with(client);
        }
        Partition { blocks }
    }

    /// The partition of `C` into `K` singletons.
    pub fn singletons(num_clients: usize) -> Self {
        Partition {
            blocks: (0..num_clients).map(ClientSubset::singleton).collect(),
        }
    }

    pub fn blocks(&self) -> &[ClientSubset] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A validated cooperative data exchange system: `K` clients and their
/// has-sets over an `L`-packet universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    num_packets: usize,
    has_sets: Vec<PacketSet>,
    missing: Vec<PacketSet>,
}

impl Instance {
    /// Builds an instance from 0-based packet index lists, one per client.
    pub fn new(num_packets: usize, has_sets: &[Vec<usize>]) -> Result<Self, Violation> {
        validate_instance(num_packets, has_sets)?;
        let has: Vec<PacketSet> = has_sets
            .iter()
            .map(|set| {
                let mut s = PacketSet::empty(num_packets);
                set.iter().for_each(|&p| s.insert(p));
                s
            })
            .collect();
        let missing = has
            .iter()
            .map(|h| {
                let mut m = PacketSet::empty(num_packets);
                (0..num_packets)
                    .filter(|&p| !h.contains(p))
                    .for_each(|p| m.insert(p));
                m
            })
            .collect();
        Ok(Instance {
            num_packets,
            has_sets: has,
            missing,
        })
    }

    /// Every client holds every packet.
    pub fn all_full(num_clients: usize, num_packets: usize) -> Result<Self, Violation> {
        let full: Vec<usize> = (0..num_packets).collect();
        Self::new(num_packets, &vec![full; num_clients])
    }

    pub fn num_clients(&self) -> usize {
        self.has_sets.len()
    }

    pub fn num_packets(&self) -> usize {
        self.num_packets
    }

    pub fn has_set(&self, client: usize) -> &PacketSet {
        &self.has_sets[client]
    }

    pub fn missing_set(&self, client: usize) -> &PacketSet {
        &self.missing[client]
    }

    /// Has-sets as sorted 0-based index lists.
    pub fn has_set_lists(&self) -> Vec<Vec<usize>> {
        self.has_sets.iter().map(|s| s.iter().collect()).collect()
    }

    /// The client set `C`.
    pub fn clients(&self) -> ClientSubset {
        ClientSubset::full(self.num_clients())
    }

    /// The cut function `g` (multiplier 1).
    pub fn cut(&self) -> CutFunction<'_> {
        CutFunction::new(self, 1)
    }

    /// `|⋃_{j∈X} H_j|`, computed from the has-sets directly.
    pub fn union_size(&self, x: ClientSubset) -> usize {
        let words = self.num_packets.div_ceil(64);
        (0..words)
            .map(|w| {
                x.clients()
                    .fold(0u64, |acc, j| acc | self.has_sets[j].words()[w])
                    .count_ones() as usize
            })
            .sum()
    }
}

/// `X ↦ c · |⋂_{j∈C∖X} H_j^c|`.
///
/// With `c = 1` this is `g`; with `c = K − 1` it is the chunk-scaled `ĝ`.
/// The intersection over an empty family is the whole universe, so the value
/// on `C` itself is `c · L`.
#[derive(Debug, Clone, Copy)]
pub struct CutFunction<'a> {
    instance: &'a Instance,
    multiplier: u64,
}

impl<'a> CutFunction<'a> {
    pub fn new(instance: &'a Instance, multiplier: u64) -> Self {
        assert!(multiplier >= 1, "cut function multiplier must be positive");
        CutFunction {
            instance,
            multiplier,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn num_clients(&self) -> usize {
        self.instance.num_clients()
    }

    pub fn eval(&self, x: ClientSubset) -> u64 {
        let inst = self.instance;
        let outside = x.complement(inst.num_clients());
        if outside.is_empty() {
            return self.multiplier * inst.num_packets as u64;
        }
        let words = inst.num_packets.div_ceil(64);
        let count: u64 = (0..words)
            .map(|w| {
                outside
                    .clients()
                    .fold(u64::MAX, |acc, j| acc & inst.missing[j].words()[w])
                    .count_ones() as u64
            })
            .sum();
        self.multiplier * count
    }

    /// `g(C ∖ x)`.
    pub fn eval_complement(&self, x: ClientSubset) -> u64 {
        self.eval(x.complement(self.num_clients()))
    }

    /// Values on every subset, indexed by mask. Only sensible for small `K`.
    pub fn table(&self) -> CutTable {
        let k = self.num_clients();
        CutTable {
            values: (0..1u64 << k)
                .map(|m| self.eval(ClientSubset::from_mask(m)))
                .collect(),
            num_clients: k,
        }
    }
}

/// Precomputed `g` values for all `2^K` subsets.
#[derive(Debug, Clone)]
pub struct CutTable {
    values: Vec<u64>,
    num_clients: usize,
}

impl CutTable {
    pub fn get(&self, x: ClientSubset) -> u64 {
        self.values[x.mask() as usize]
    }

    pub fn get_complement(&self, x: ClientSubset) -> u64 {
        self.values[x.complement(self.num_clients).mask() as usize]
    }
}

/// Client subsets of a `K`-client system in ascending mask order.
pub fn enumerate_subsets(
    num_clients: usize,
    include_empty: bool,
    include_full: bool,
) -> impl Iterator<Item = ClientSubset> {
    assert!((1..=MAX_CLIENTS).contains(&num_clients));
    let full = ClientSubset::full(num_clients).mask();
    let start = if include_empty { 0 } else { 1 };
    let end = if include_full { full } else { full - 1 };
    (start..=end)
        .filter(move |&m| m <= full)
        .map(ClientSubset::from_mask)
}

/// Lazily enumerates partitions of `{0, …, K−1}` with at least `min_blocks`
/// blocks, in lexicographic restricted-growth-string order.
#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<usize>,
    // max_prefix[i] = 1 + max(rgs[0..i]), the largest value rgs[i] may take
    max_prefix: Vec<usize>,
    min_blocks: usize,
    done: bool,
}

impl Partitions {
    pub fn new(num_clients: usize, min_blocks: usize) -> Self {
        assert!(num_clients >= 1, "need at least one client");
        assert!(
            (1..=num_clients).contains(&min_blocks),
            "min_blocks must lie in 1..=K"
        );
        let mut p = Partitions {
            rgs: vec![0; num_clients],
            max_prefix: vec![0; num_clients],
            min_blocks,
            done: false,
        };
        p.fill_from(1);
        if p.blocks() < min_blocks && !p.advance() {
            p.done = true;
        }
        p
    }

    fn blocks(&self) -> usize {
        let n = self.rgs.len();
        self.max_prefix[n - 1].max(self.rgs[n - 1] + 1)
    }

    // Recomputes max_prefix from position `from` onward, zeroing the tail.
    fn fill_from(&mut self, from: usize) {
        for i in from..self.rgs.len() {
            self.rgs[i] = 0;
            self.max_prefix[i] = self.max_prefix[i - 1].max(self.rgs[i - 1] + 1);
        }
    }

    // Steps to the next restricted growth string with enough blocks.
    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        loop {
            let Some(i) = (1..n).rev().find(|&i| self.rgs[i] < self.max_prefix[i]) else {
                return false;
            };
            self.rgs[i] += 1;
            self.fill_from(i + 1);
            if self.blocks() >= self.min_blocks {
                return true;
            }
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_rgs(&self.rgs);
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}

/// Partitions of `{0, …, K−1}` with at least `min_blocks` blocks.
pub fn enumerate_partitions(num_clients: usize, min_blocks: usize) -> Partitions {
    Partitions::new(num_clients, min_blocks)
}

/// Visits the block masks of every partition with at least `min_blocks`
/// blocks, in the same order as [`enumerate_partitions`], without
/// allocating a [`Partition`] per step.
pub(crate) fn for_each_partition_blocks<F: FnMut(&[ClientSubset])>(
    num_clients: usize,
    min_blocks: usize,
    mut visit: F,
) {
    fn rec<F: FnMut(&[ClientSubset])>(
        client: usize,
        n: usize,
        min_blocks: usize,
        blocks: &mut Vec<ClientSubset>,
        visit: &mut F,
    ) {
        if client == n {
            if blocks.len() >= min_blocks {
                visit(blocks);
            }
            return;
        }
        if blocks.len() + (n - client) < min_blocks {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] = blocks[b].with(client);
            rec(client + 1, n, min_blocks, blocks, visit);
            blocks[b] = blocks[b].difference(ClientSubset::singleton(client));
        }
        blocks.push(ClientSubset::singleton(client));
        rec(client + 1, n, min_blocks, blocks, visit);
        blocks.pop();
    }
    let mut blocks = Vec::with_capacity(num_clients);
    rec(0, num_clients, min_blocks, &mut blocks, &mut visit);
}

/// Exhaustively checks `g(X) + g(Y) ≤ g(X∩Y) + g(X∪Y)` over crossing pairs
/// (`X∩Y ≠ ∅`, `X∖Y ≠ ∅`, `Y∖X ≠ ∅`, `X∪Y ≠ C`). Returns the first
/// violating pair in mask order.
pub fn check_crossing_supermodular(
    cf: &CutFunction<'_>,
) -> Result<(), (ClientSubset, ClientSubset)> {
    let k = cf.num_clients();
    let full = ClientSubset::full(k);
    let table = cf.table();
    for x in enumerate_subsets(k, false, false) {
        for y in enumerate_subsets(k, false, false) {
            let (meet, join) = (x.intersection(y), x.union(y));
            if meet.is_empty()
                || x.difference(y).is_empty()
                || y.difference(x).is_empty()
                || join == full
            {
                continue;
            }
            if table.get(x) + table.get(y) > table.get(meet) + table.get(join) {
                return Err((x, y));
            }
        }
    }
    Ok(())
}

/// Exhaustively checks `g(X∪Y) ≥ g(X) + g(Y)` for disjoint nonempty `X`, `Y`.
pub fn check_superadditive(cf: &CutFunction<'_>) -> Result<(), (ClientSubset, ClientSubset)> {
    let k = cf.num_clients();
    let table = cf.table();
    for x in enumerate_subsets(k, false, true) {
        let rest = x.complement(k).mask();
        // Nonempty submasks of the complement of x.
        let mut sub = rest;
        while sub != 0 {
            let y = ClientSubset::from_mask(sub);
            if table.get(x.union(y)) < table.get(x) + table.get(y) {
                return Err((x, y));
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Instance;

    /// Three clients, six packets: H_1 = {p1..p5}, H_2 = {p1,p2,p6}, H_3 = {p3,p4,p6}.
    pub fn sample() -> Instance {
        Instance::new(6, &[vec![0, 1, 2, 3, 4], vec![0, 1, 5], vec![2, 3, 5]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::sample;
    use super::*;

    fn s(labels: &[usize]) -> ClientSubset {
        ClientSubset::from_labels(labels.iter().copied())
    }

    #[test]
    fn sample_cut_values() {
        let inst = sample();
        let g = inst.cut();
        let expected = [
            (s(&[]), 0),
            (s(&[1]), 1),
            (s(&[2]), 0),
            (s(&[3]), 0),
            (s(&[1, 2]), 3),
            (s(&[1, 3]), 3),
            (s(&[2, 3]), 1),
        ];
        for (x, v) in expected {
            assert_eq!(g.eval(x), v, "g({x})");
        }
        assert_eq!(CutFunction::new(&inst, 2).eval(s(&[1, 2])), 6);
    }

    #[test]
    fn cut_on_full_set_is_scaled_universe() {
        let inst = sample();
        assert_eq!(inst.cut().eval(inst.clients()), 6);
        assert_eq!(CutFunction::new(&inst, 2).eval(inst.clients()), 12);
    }

    #[test]
    fn all_full_cut_is_zero_on_proper_subsets() {
        let inst = Instance::all_full(4, 5).unwrap();
        for x in enumerate_subsets(4, true, false) {
            assert_eq!(inst.cut().eval(x), 0);
        }
    }

    #[test]
    fn validation() {
        assert!(validate_instance(6, &sample().has_set_lists()).is_ok());
        assert_eq!(
            validate_instance(2, &[vec![0], vec![0]]),
            Err(Violation::UncoveredPacket { packet: 2 })
        );
        assert_eq!(
            validate_instance(1, &[vec![0]]),
            Err(Violation::TooFewClients(1))
        );
        assert_eq!(
            validate_instance(0, &[vec![], vec![]]),
            Err(Violation::NoPackets)
        );
        assert!(matches!(
            validate_instance(2, &[vec![0, 2], vec![1]]),
            Err(Violation::PacketOutOfRange {
                client: 1,
                packet: 3,
                ..
            })
        ));
        assert_eq!(
            validate_instance(1, &vec![vec![0]; 64]),
            Err(Violation::TooManyClients(64))
        );
        // empty has-sets are fine as long as the union covers
        assert!(validate_instance(2, &[vec![], vec![0, 1]]).is_ok());
    }

    #[test]
    fn violation_message_names_packet() {
        let err = validate_instance(4, &[vec![0, 1], vec![2]]).unwrap_err();
        assert_eq!(err.to_string(), "packet 4 held by no client");
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(enumerate_subsets(3, false, false).count(), 6);
        let two: Vec<_> = enumerate_subsets(2, false, false).collect();
        assert_eq!(two, vec![s(&[1]), s(&[2])]);
        assert_eq!(enumerate_subsets(4, true, true).count(), 16);
        assert_eq!(enumerate_subsets(1, true, true).count(), 2);
        assert_eq!(enumerate_subsets(1, false, false).count(), 0);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(3, 1).count(), 5);
        assert_eq!(enumerate_partitions(3, 2).count(), 4);
        assert_eq!(enumerate_partitions(4, 1).count(), 15);
        assert_eq!(enumerate_partitions(1, 1).count(), 1);
        assert_eq!(enumerate_partitions(4, 4).count(), 1);
    }

    // Bell numbers via the Bell triangle, and Stirling numbers of the second
    // kind by recurrence, as independent counts.
    fn bell(n: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for &v in &row {
                let last = *next.last().unwrap();
                next.push(last + v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    fn stirling2(n: usize, k: usize) -> usize {
        let mut t = vec![vec![0usize; n + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=i {
                t[i][j] = j * t[i - 1][j] + t[i - 1][j - 1];
            }
        }
        t[n][k]
    }

    #[test]
    fn bell_counts_up_to_ten() {
        for k in 1..=10 {
            assert_eq!(enumerate_partitions(k, 1).count(), bell(k), "K = {k}");
        }
    }

    #[test]
    fn min_blocks_counts_match_stirling_sums() {
        for k in 1..=7 {
            for min in 1..=k {
                let expected: usize = (min..=k).map(|b| stirling2(k, b)).sum();
                assert_eq!(
                    enumerate_partitions(k, min).count(),
                    expected,
                    "K={k} min={min}"
                );
            }
        }
    }

    #[test]
    fn partitions_are_valid_distinct_and_match_visitor_order() {
        for k in 1..=6 {
            for min in 1..=k {
                let listed: Vec<Partition> = enumerate_partitions(k, min).collect();
                let mut visited = Vec::new();
                for_each_partition_blocks(k, min, |b| visited.push(b.to_vec()));
                assert_eq!(listed.len(), visited.len());
                let mut seen = std::collections::HashSet::new();
                for (p, v) in listed.iter().zip(&visited) {
                    assert_eq!(p.blocks(), v.as_slice());
                    assert!(Partition::new(k, p.blocks().to_vec()).is_some());
                    assert!(p.num_blocks() >= min);
                    assert!(seen.insert(p.clone()));
                }
            }
        }
    }

    #[test]
    fn partition_constructor_rejects_bad_blocks() {
        assert!(Partition::new(3, vec![s(&[1]), s(&[2, 3])]).is_some());
        assert!(Partition::new(3, vec![s(&[1]), s(&[2])]).is_none());
        assert!(Partition::new(3, vec![s(&[1, 2]), s(&[2, 3])]).is_none());
        assert!(Partition::new(3, vec![s(&[]), s(&[1, 2, 3])]).is_none());
    }

    #[test]
    fn display_uses_one_based_labels() {
        let p = Partition::new(3, vec![s(&[2, 3]), s(&[1])]).unwrap();
        assert_eq!(p.to_string(), "{1},{2,3}");
        assert_eq!(ClientSubset::EMPTY.to_string(), "{}");
    }

    #[test]
    fn sample_structural_checks() {
        let inst = sample();
        assert!(check_crossing_supermodular(&inst.cut()).is_ok());
        assert!(check_superadditive(&inst.cut()).is_ok());
        let full = Instance::all_full(5, 3).unwrap();
        assert!(check_crossing_supermodular(&full.cut()).is_ok());
        assert!(check_superadditive(&full.cut()).is_ok());
    }

    #[test]
    fn union_size_matches_cut_identity() {
        let inst = sample();
        for x in enumerate_subsets(3, false, true) {
            let via_g = 6 - inst.cut().eval_complement(x) as usize;
            assert_eq!(inst.union_size(x), via_g);
        }
    }
}
