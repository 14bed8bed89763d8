//! Time-lines graphs (TLG).
//!
//! Nodes are events and directed edges are temporal causality (cause →
//! effect). A plain sequence of actions gives a chain. When an oracle looks
//! ahead from the chain's start to a future event and delivers its answer at
//! an earlier event, the chain is unfolded: an elaboration node is inserted
//! on the detour `target → E → delivery`, and every event after the delivery
//! point is split into a copy that is entangled with its original.
//! Entanglement is an equivalence relation on nodes and propagates to
//! same-kind consequences.

mod dot;
mod partition;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dot::to_dot;
use partition::DisjointSet;
pub use partition::Partition;

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    /// S starts the oracle.
    OracleStart,
    /// S receives the prediction and moves.
    SChoice,
    /// C moves.
    CChoice,
    /// The game's result.
    Outcome,
    /// The oracle elaborates its answer.
    Elaboration,
    /// Generic action at the given 1-based chain position.
    Action(u32),
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::OracleStart => f.write_str("OracleStart"),
            EventKind::SChoice => f.write_str("SChoice"),
            EventKind::CChoice => f.write_str("CChoice"),
            EventKind::Outcome => f.write_str("Outcome"),
            EventKind::Elaboration => f.write_str("Elaboration"),
            EventKind::Action(i) => write!(f, "Action{i}"),
        }
    }
}

/// Kinds of the four-action game chain.
pub const GAME_KINDS: [EventKind; 4] = [
    EventKind::OracleStart,
    EventKind::SChoice,
    EventKind::CChoice,
    EventKind::Outcome,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EventNode {
    pub id: NodeId,
    pub kind: EventKind,
    /// Set iff this node is a retrocausal copy of another node.
    pub copy_of: Option<NodeId>,
}

impl EventNode {
    pub fn new(id: NodeId, kind: EventKind) -> Self {
        EventNode {
            id,
            kind,
            copy_of: None,
        }
    }

    pub fn copy(id: NodeId, original: &EventNode) -> Self {
        EventNode {
            id,
            kind: original.kind,
            copy_of: Some(original.id),
        }
    }
}

/// The oracle's look-ahead: it starts at `from` and inspects `to`.
///
/// This is a step of the oracle's own walk, not a causal edge, so it is kept
/// apart from the edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OracleQuery {
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TLGraph {
    nodes: BTreeMap<NodeId, EventNode>,
    edges: BTreeSet<(NodeId, NodeId)>,
    entanglement: Partition,
    query: Option<OracleQuery>,
}

impl TLGraph {
    /// Builds a graph and checks its structural invariants. Nodes missing
    /// from `classes` become singleton classes.
    pub fn new(
        nodes: impl IntoIterator<Item = EventNode>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        classes: impl IntoIterator<Item = Vec<NodeId>>,
        query: Option<OracleQuery>,
    ) -> Result<Self> {
        let mut node_map = BTreeMap::new();
        for node in nodes {
            if node.id == 0 {
                return Err(Error::Structure("node ids must be positive".into()));
            }
            if node_map.insert(node.id, node).is_some() {
                return Err(Error::Structure(format!("duplicate node id {}", node.id)));
            }
        }
        for node in node_map.values() {
            if let Some(orig) = node.copy_of {
                match node_map.get(&orig) {
                    Some(o) if o.kind == node.kind && orig != node.id => {}
                    Some(_) => {
                        return Err(Error::Structure(format!(
                            "node {} is not a valid copy of node {orig}",
                            node.id
                        )))
                    }
                    None => {
                        return Err(Error::Structure(format!(
                            "node {} copies unknown node {orig}",
                            node.id
                        )))
                    }
                }
            }
        }

        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &(a, b) in &edges {
            if !node_map.contains_key(&a) || !node_map.contains_key(&b) {
                return Err(Error::Structure(format!(
                    "edge ({a}, {b}) references an unknown node"
                )));
            }
            if a == b {
                return Err(Error::Structure(format!("self-loop on node {a}")));
            }
        }

        let mut seen = BTreeSet::new();
        let mut all_classes = Vec::new();
        for class in classes {
            let first_kind = class
                .first()
                .and_then(|id| node_map.get(id))
                .map(|n| n.kind);
            for id in &class {
                let Some(node) = node_map.get(id) else {
                    return Err(Error::Structure(format!(
                        "entangled node {id} does not exist"
                    )));
                };
                if !seen.insert(*id) {
                    return Err(Error::Structure(format!(
                        "node {id} appears in two entanglement classes"
                    )));
                }
                if Some(node.kind) != first_kind {
                    return Err(Error::Structure(format!(
                        "entanglement class {class:?} mixes event kinds"
                    )));
                }
            }
            all_classes.push(class);
        }
        all_classes.extend(
            node_map
                .keys()
                .filter(|id| !seen.contains(id))
                .map(|&id| vec![id]),
        );

        if let Some(q) = query {
            if !node_map.contains_key(&q.from) || !node_map.contains_key(&q.to) {
                return Err(Error::Structure(
                    "oracle query references an unknown node".into(),
                ));
            }
        }

        Ok(TLGraph {
            nodes: node_map,
            edges,
            entanglement: Partition::from_classes(all_classes),
            query,
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &EventNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: NodeId) -> Option<&EventNode> {
        self.nodes.get(&id)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.edges
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn entanglement(&self) -> &Partition {
        &self.entanglement
    }

    pub fn query(&self) -> Option<OracleQuery> {
        self.query
    }

    pub fn successors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges
            .range((id, 0)..=(id, NodeId::MAX))
            .map(|&(_, b)| b)
    }

    pub fn out_degree(&self, id: NodeId) -> usize {
        self.successors(id).count()
    }

    pub fn in_degree(&self, id: NodeId) -> usize {
        self.edges.iter().filter(|&&(_, b)| b == id).count()
    }

    /// A step a player's timeline may take: a causal edge, or the oracle's
    /// look-ahead.
    pub fn is_step(&self, from: NodeId, to: NodeId) -> bool {
        self.has_edge(from, to) || self.query == Some(OracleQuery { from, to })
    }

    /// The node order if the graph is a single simple path covering every
    /// node, otherwise `None`.
    pub fn chain_order(&self) -> Option<Vec<NodeId>> {
        let n = self.nodes.len();
        if n == 0 || self.edges.len() != n - 1 {
            return None;
        }
        let mut indeg: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&id| (id, 0)).collect();
        for &(a, b) in &self.edges {
            *indeg.get_mut(&b)? += 1;
            if self.out_degree(a) > 1 {
                return None;
            }
        }
        let mut sources = indeg.iter().filter(|(_, &d)| d == 0).map(|(&id, _)| id);
        let start = sources.next()?;
        if sources.next().is_some() || indeg.values().any(|&d| d > 1) {
            return None;
        }
        let mut order = vec![start];
        let mut cur = start;
        while let Some(next) = self.successors(cur).next() {
            order.push(next);
            cur = next;
            if order.len() > n {
                return None;
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_chain(&self) -> bool {
        self.chain_order().is_some()
    }
}

/// A chain `1 → 2 → … → n`. For `n = 4` the nodes get the game's event kinds,
/// otherwise generic [`EventKind::Action`] kinds.
pub fn base_chain(n: usize) -> Result<TLGraph> {
    if n == 0 {
        return Err(Error::Argument("chain length must be at least 1".into()));
    }
    let n =
        NodeId::try_from(n).map_err(|_| Error::Argument(format!("chain length {n} too large")))?;
    let kind = |id: NodeId| {
        if n == 4 {
            GAME_KINDS[(id - 1) as usize]
        } else {
            EventKind::Action(id)
        }
    };
    TLGraph::new(
        (1..=n).map(|id| EventNode::new(id, kind(id))),
        (1..n).map(|id| (id, id + 1)),
        std::iter::empty(),
        None,
    )
}

/// Where the oracle's answer lands in a chain of length `chain_len`: it
/// inspects the event at position `target` and delivers at `query_at`.
/// Positions are 1-based and satisfy `1 <= query_at < target <= chain_len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnfoldSpec {
    pub chain_len: usize,
    pub query_at: usize,
    pub target: usize,
}

impl UnfoldSpec {
    /// The game: the oracle looks at C's move (3) and answers S at (2).
    pub const GAME: UnfoldSpec = UnfoldSpec {
        chain_len: 4,
        query_at: 2,
        target: 3,
    };

    pub fn new(chain_len: usize, query_at: usize, target: usize) -> Result<Self> {
        let spec = UnfoldSpec {
            chain_len,
            query_at,
            target,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let UnfoldSpec {
            chain_len: n,
            query_at: k,
            target: m,
        } = *self;
        if 1 <= k && k < m && m <= n {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "unfold needs 1 <= query_at < target <= chain_len, got query_at={k}, target={m}, chain_len={n}"
            )))
        }
    }

    pub fn unfolded_len(&self) -> usize {
        2 * self.chain_len - self.query_at + 1
    }
}

/// Unfolds a chain around one oracle query.
///
/// With chain order `c1 … cn`, the elaboration node `E` gets id `max + 1`
/// and the copies of `c(k+1) … cn` get ids `max + 2 …` in chain order.
/// Edges added: `cm → E`, `E → ck`, `ck → c(k+1)'` and `cj' → c(j+1)'`. Each
/// copy is entangled with its original, then [`entanglement_closure`] is
/// applied.
pub fn unfold(chain: &TLGraph, spec: &UnfoldSpec) -> Result<TLGraph> {
    spec.check()?;
    if chain
        .nodes()
        .any(|n| n.copy_of.is_some() || n.kind == EventKind::Elaboration)
        || chain.entanglement().entangled_classes().next().is_some()
        || chain.query().is_some()
    {
        return Err(Error::Structure("graph has already been unfolded".into()));
    }
    let order = chain
        .chain_order()
        .ok_or_else(|| Error::Structure("unfold input is not a chain".into()))?;
    if order.len() != spec.chain_len {
        return Err(Error::Argument(format!(
            "unfold spec is for a chain of length {}, graph has {} nodes",
            spec.chain_len,
            order.len()
        )));
    }

    let at = |pos: usize| order[pos - 1];
    let max_id = *order.iter().max().expect("non-empty chain");
    let elaboration = max_id + 1;

    let mut nodes: Vec<EventNode> = chain.nodes().copied().collect();
    let mut edges: Vec<(NodeId, NodeId)> = chain.edges().iter().copied().collect();
    let mut seeds = Vec::new();

    nodes.push(EventNode::new(elaboration, EventKind::Elaboration));
    edges.push((at(spec.target), elaboration));
    edges.push((elaboration, at(spec.query_at)));

    let mut prev = at(spec.query_at);
    for (offset, pos) in (spec.query_at + 1..=spec.chain_len).enumerate() {
        let original = chain.node(at(pos)).expect("chain node");
        let id = elaboration + 1 + offset as NodeId;
        nodes.push(EventNode::copy(id, original));
        edges.push((prev, id));
        seeds.push(vec![original.id, id]);
        prev = id;
    }

    let seeded = TLGraph::new(
        nodes,
        edges,
        seeds,
        Some(OracleQuery {
            from: order[0],
            to: at(spec.target),
        }),
    )?;
    Ok(entanglement_closure(&seeded))
}

/// The game's unfolded graph: seven nodes with `E = 5`, `3' = 6`, `4' = 7`.
pub fn game_tlg() -> TLGraph {
    let chain = base_chain(4).expect("valid chain length");
    unfold(&chain, &UnfoldSpec::GAME).expect("valid game unfold")
}

/// Smallest coarsening of the entanglement partition closed under
/// transmission: if `a ↔ b` with `a ≠ b`, `a → c`, `b → d` and `c`, `d` have the
/// same kind, then `c ↔ d`. Idempotent.
pub fn entanglement_closure(tlg: &TLGraph) -> TLGraph {
    let mut sets = DisjointSet::new(tlg.node_ids());
    for class in tlg.entanglement().classes() {
        for pair in class.windows(2) {
            sets.union(pair[0], pair[1]);
        }
    }

    loop {
        let mut changed = false;
        let ids: Vec<NodeId> = tlg.node_ids().collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                if sets.find(a) != sets.find(b) {
                    continue;
                }
                for c in tlg.successors(a) {
                    for d in tlg.successors(b) {
                        if tlg.nodes[&c].kind == tlg.nodes[&d].kind {
                            changed |= sets.union(c, d);
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    TLGraph {
        entanglement: sets.into_partition(),
        ..tlg.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    C,
    S,
    Omega,
}

impl Player {
    pub const ALL: [Player; 3] = [Player::C, Player::S, Player::Omega];
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::C => "C",
            Player::S => "S",
            Player::Omega => "Omega",
        })
    }
}

/// One player's walk through a TLG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeline {
    pub player: Player,
    pub sequence: Vec<NodeId>,
}

impl Timeline {
    pub fn new(player: Player, sequence: Vec<NodeId>) -> Self {
        Timeline { player, sequence }
    }
}

/// The three timelines of the game graph.
///
/// C never sees the oracle's detour; S waits for the answer and continues on
/// the copied branch; the oracle visits C's move before S's.
pub fn player_timeline(tlg: &TLGraph, player: Player) -> Result<Timeline> {
    if *tlg != game_tlg() {
        return Err(Error::UnsupportedGraph(
            "player timelines are only defined for the unfolded game graph".into(),
        ));
    }
    let sequence = match player {
        Player::C => vec![1, 2, 3, 4],
        Player::S => vec![1, 2, 6, 7],
        Player::Omega => vec![1, 3, 5, 2, 6, 7],
    };
    Ok(Timeline::new(player, sequence))
}

/// Checks that a timeline is a chain inside `tlg`: it visits distinct nodes
/// and every consecutive pair is a step of the graph, so its steps form one
/// path from a starting cause to a final effect.
pub fn validate_linearity(timeline: &Timeline, tlg: &TLGraph) -> Result<bool> {
    if let Some(id) = timeline.sequence.iter().find(|id| tlg.node(**id).is_none()) {
        return Err(Error::Argument(format!(
            "timeline references unknown node {id}"
        )));
    }
    if timeline.sequence.is_empty() {
        return Ok(false);
    }
    let distinct: BTreeSet<_> = timeline.sequence.iter().collect();
    if distinct.len() != timeline.sequence.len() {
        return Ok(false);
    }
    Ok(timeline
        .sequence
        .windows(2)
        .all(|w| tlg.is_step(w[0], w[1])))
}

/// Base-chain positions used for twist detection. Copies take their
/// original's position; elaboration nodes have none and are skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseOrder {
    positions: BTreeMap<NodeId, Option<usize>>,
}

impl BaseOrder {
    /// Derives positions from an unfolded graph: the original nodes form a
    /// chain through the original edges.
    pub fn from_graph(tlg: &TLGraph) -> Result<Self> {
        let originals: BTreeSet<NodeId> = tlg
            .nodes()
            .filter(|n| n.copy_of.is_none() && n.kind != EventKind::Elaboration)
            .map(|n| n.id)
            .collect();
        let sub = TLGraph::new(
            originals.iter().map(|id| *tlg.node(*id).expect("node")),
            tlg.edges()
                .iter()
                .copied()
                .filter(|(a, b)| originals.contains(a) && originals.contains(b)),
            std::iter::empty(),
            None,
        )?;
        let order = sub
            .chain_order()
            .ok_or_else(|| Error::Structure("original events do not form a chain".into()))?;
        let copies: BTreeMap<NodeId, NodeId> = tlg
            .nodes()
            .filter_map(|n| n.copy_of.map(|o| (n.id, o)))
            .collect();
        let elaborations = tlg
            .nodes()
            .filter(|n| n.kind == EventKind::Elaboration)
            .map(|n| n.id);
        Self::new(&order, &copies, elaborations)
    }

    /// `order` is the base chain; `copies` maps copy ids to originals.
    pub fn new(
        order: &[NodeId],
        copies: &BTreeMap<NodeId, NodeId>,
        excluded: impl IntoIterator<Item = NodeId>,
    ) -> Result<Self> {
        let mut positions: BTreeMap<NodeId, Option<usize>> = order
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, Some(i)))
            .collect();
        for (&copy, &orig) in copies {
            let pos = positions.get(&orig).copied().flatten().ok_or_else(|| {
                Error::Argument(format!("copy {copy} of {orig} has no base position"))
            })?;
            positions.insert(copy, Some(pos));
        }
        for id in excluded {
            positions.insert(id, None);
        }
        Ok(BaseOrder { positions })
    }

    pub fn position(&self, id: NodeId) -> Option<usize> {
        self.positions.get(&id).copied().flatten()
    }
}

/// All pairs `(a, b)` where `a` comes before `b` in the timeline but after it
/// in the base order. Empty means the timeline respects causal order.
pub fn detect_twist(timeline: &Timeline, base: &BaseOrder) -> Result<Vec<(NodeId, NodeId)>> {
    let mut placed = Vec::with_capacity(timeline.sequence.len());
    for &id in &timeline.sequence {
        match base.positions.get(&id) {
            None => {
                return Err(Error::Argument(format!(
                    "node {id} has no base-chain position"
                )))
            }
            Some(None) => {}
            Some(Some(pos)) => placed.push((id, *pos)),
        }
    }
    let mut twists = Vec::new();
    for (i, &(a, pa)) in placed.iter().enumerate() {
        for &(b, pb) in &placed[i + 1..] {
            if pb < pa {
                twists.push((a, b));
            }
        }
    }
    Ok(twists)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(pairs: &[(NodeId, NodeId)]) -> BTreeSet<(NodeId, NodeId)> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn chains() {
        let g = base_chain(4).unwrap();
        assert_eq!(g.node_ids().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(g.edges(), &edge_set(&[(1, 2), (2, 3), (3, 4)]));
        assert_eq!(g.node(3).unwrap().kind, EventKind::CChoice);
        assert_eq!(g.chain_order(), Some(vec![1, 2, 3, 4]));

        let one = base_chain(1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.edges().is_empty());
        assert!(one.is_chain());

        let three = base_chain(3).unwrap();
        assert_eq!(three.edges(), &edge_set(&[(1, 2), (2, 3)]));
        assert_eq!(three.node(2).unwrap().kind, EventKind::Action(2));

        assert!(matches!(base_chain(0), Err(Error::Argument(_))));
    }

    #[test]
    fn game_unfold() {
        let g = game_tlg();
        assert_eq!(
            g.node_ids().collect::<Vec<_>>(),
            (1..=7).collect::<Vec<_>>()
        );
        assert_eq!(
            g.edges(),
            &edge_set(&[(1, 2), (2, 3), (3, 4), (3, 5), (5, 2), (2, 6), (6, 7)])
        );
        assert_eq!(
            g.entanglement().entangled_classes().collect::<Vec<_>>(),
            vec![&[3, 6][..], &[4, 7][..]]
        );
        assert_eq!(g.node(5).unwrap().kind, EventKind::Elaboration);
        assert_eq!(g.node(6).unwrap().copy_of, Some(3));
        assert_eq!(g.node(7).unwrap().copy_of, Some(4));
        assert_eq!(g.query(), Some(OracleQuery { from: 1, to: 3 }));
        assert!(!g.is_chain());
        assert_eq!((g.in_degree(2), g.out_degree(2)), (2, 2));
    }

    #[test]
    fn smallest_unfold_by_hand() {
        let spec = UnfoldSpec::new(2, 1, 2).unwrap();
        let g = unfold(&base_chain(2).unwrap(), &spec).unwrap();
        // E = 3, 2' = 4.
        assert_eq!(g.len(), 4);
        assert_eq!(g.edges(), &edge_set(&[(1, 2), (2, 3), (3, 1), (1, 4)]));
        assert_eq!(g.node(3).unwrap().kind, EventKind::Elaboration);
        assert_eq!(g.node(4).unwrap().copy_of, Some(2));
        assert_eq!(
            g.entanglement().entangled_classes().collect::<Vec<_>>(),
            vec![&[2, 4][..]]
        );
    }

    #[test]
    fn unfold_after_first_event() {
        let spec = UnfoldSpec::new(4, 1, 4).unwrap();
        let g = unfold(&base_chain(4).unwrap(), &spec).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.node(5).unwrap().kind, EventKind::Elaboration);
        assert_eq!(
            g.entanglement().entangled_classes().collect::<Vec<_>>(),
            vec![&[2, 6][..], &[3, 7][..], &[4, 8][..]]
        );
        assert!(g.has_edge(4, 5) && g.has_edge(5, 1) && g.has_edge(1, 6) && g.has_edge(7, 8));
    }

    #[test]
    fn unfold_rejects_bad_input() {
        let chain = base_chain(4).unwrap();
        for (n, k, m) in [(4, 0, 2), (4, 2, 2), (4, 3, 2), (4, 2, 5)] {
            assert!(matches!(UnfoldSpec::new(n, k, m), Err(Error::Argument(_))));
        }
        let wrong_len = UnfoldSpec::new(5, 2, 3).unwrap();
        assert!(matches!(
            unfold(&chain, &wrong_len),
            Err(Error::Argument(_))
        ));
        // Second query on an already unfolded graph.
        assert!(matches!(
            unfold(&game_tlg(), &UnfoldSpec::GAME),
            Err(Error::Structure(_))
        ));
        let fork = TLGraph::new(
            (1..=4).map(|id| EventNode::new(id, EventKind::Action(id))),
            [(1, 2), (1, 3), (3, 4)],
            std::iter::empty(),
            None,
        )
        .unwrap();
        assert!(matches!(
            unfold(&fork, &UnfoldSpec::GAME),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn graph_validation() {
        let n = |id| EventNode::new(id, EventKind::Action(id));
        assert!(TLGraph::new([n(1), n(1)], [], [], None).is_err());
        assert!(TLGraph::new([n(1)], [(1, 1)], [], None).is_err());
        assert!(TLGraph::new([n(1)], [(1, 2)], [], None).is_err());
        assert!(
            TLGraph::new([n(1), n(2)], [], [vec![1, 2]], None).is_err(),
            "mixed kinds"
        );
        assert!(TLGraph::new([n(1), n(2)], [], [vec![1], vec![1]], None).is_err());
        let bad_copy = EventNode {
            id: 2,
            kind: EventKind::Outcome,
            copy_of: Some(1),
        };
        assert!(TLGraph::new([n(1), bad_copy], [], [], None).is_err());
        assert!(TLGraph::new([n(0)], [], [], None).is_err());
    }

    #[test]
    fn closure_from_seed() {
        let seeded = TLGraph::new(
            game_tlg().nodes().copied(),
            game_tlg().edges().iter().copied(),
            [vec![3, 6]],
            None,
        )
        .unwrap();
        let closed = entanglement_closure(&seeded);
        assert_eq!(
            closed
                .entanglement()
                .entangled_classes()
                .collect::<Vec<_>>(),
            vec![&[3, 6][..], &[4, 7][..]]
        );
        assert_eq!(entanglement_closure(&closed), closed);
    }

    #[test]
    fn closure_without_seeds_is_identity() {
        for n in 1..6 {
            let chain = base_chain(n).unwrap();
            assert_eq!(entanglement_closure(&chain), chain);
        }
    }

    #[test]
    fn closure_fixed_point_brute_force() {
        let g = unfold(&base_chain(4).unwrap(), &UnfoldSpec::new(4, 1, 4).unwrap()).unwrap();
        let part = g.entanglement();
        let ids: Vec<_> = g.node_ids().collect();
        for &a in &ids {
            for &b in &ids {
                if a == b || !part.same_class(a, b) {
                    continue;
                }
                for &(x, c) in g.edges() {
                    for &(y, d) in g.edges() {
                        if x == a && y == b && g.node(c).unwrap().kind == g.node(d).unwrap().kind {
                            assert!(part.same_class(c, d), "{a}~{b} but {c}!~{d}");
                        }
                    }
                }
            }
        }
        assert_eq!(entanglement_closure(&g), g);
    }

    #[test]
    fn timelines_of_the_game() {
        let g = game_tlg();
        let seq = |p| player_timeline(&g, p).unwrap().sequence;
        assert_eq!(seq(Player::C), vec![1, 2, 3, 4]);
        assert_eq!(seq(Player::S), vec![1, 2, 6, 7]);
        assert_eq!(seq(Player::Omega), vec![1, 3, 5, 2, 6, 7]);
        for p in Player::ALL {
            assert!(validate_linearity(&player_timeline(&g, p).unwrap(), &g).unwrap());
        }
        assert!(matches!(
            player_timeline(&base_chain(4).unwrap(), Player::C),
            Err(Error::UnsupportedGraph(_))
        ));
    }

    #[test]
    fn linearity_failures() {
        let g = game_tlg();
        let t = |s: Vec<NodeId>| Timeline::new(Player::C, s);
        assert!(!validate_linearity(&t(vec![1, 2, 3, 4, 1]), &g).unwrap());
        assert!(!validate_linearity(&t(vec![1, 3, 2]), &g).unwrap());
        assert!(!validate_linearity(&t(vec![]), &g).unwrap());
        assert!(validate_linearity(&t(vec![4]), &g).unwrap());
        assert!(matches!(
            validate_linearity(&t(vec![1, 9]), &g),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn twists() {
        let g = game_tlg();
        let base = BaseOrder::from_graph(&g).unwrap();
        assert_eq!(base.position(6), Some(2));
        assert_eq!(base.position(5), None);
        let twist = |p| detect_twist(&player_timeline(&g, p).unwrap(), &base).unwrap();
        assert_eq!(twist(Player::Omega), vec![(3, 2)]);
        assert!(twist(Player::C).is_empty());
        assert!(twist(Player::S).is_empty());
        let unknown = Timeline::new(Player::C, vec![1, 42]);
        assert!(matches!(
            detect_twist(&unknown, &base),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn explicit_base_order() {
        let copies = BTreeMap::from([(6, 3), (7, 4)]);
        let base = BaseOrder::new(&[1, 2, 3, 4], &copies, [5]).unwrap();
        assert_eq!(base, BaseOrder::from_graph(&game_tlg()).unwrap());
        assert!(BaseOrder::new(&[1, 2], &BTreeMap::from([(6, 3)]), []).is_err());
    }
}
