use std::collections::BTreeMap;

use super::NodeId;

/// Union-find over a fixed set of node ids.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSet {
    index: BTreeMap<NodeId, usize>,
    ids: Vec<NodeId>,
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub(crate) fn new(ids: impl IntoIterator<Item = NodeId>) -> Self {
        let ids: Vec<NodeId> = ids.into_iter().collect();
        let index = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let n = ids.len();
        DisjointSet {
            index,
            ids,
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find_index(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn find(&mut self, id: NodeId) -> usize {
        let i = self.index[&id];
        self.find_index(i)
    }

    /// Returns true if two distinct classes were merged.
    pub(crate) fn union(&mut self, a: NodeId, b: NodeId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub(crate) fn into_partition(mut self) -> Partition {
        let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for i in 0..self.ids.len() {
            let root = self.find_index(i);
            groups.entry(root).or_default().push(self.ids[i]);
        }
        Partition::from_classes(groups.into_values())
    }
}

/// A partition of node ids into equivalence classes, kept in canonical form:
/// members sorted within each class, classes sorted by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    classes: Vec<Vec<NodeId>>,
}

impl Partition {
    pub fn singletons(ids: impl IntoIterator<Item = NodeId>) -> Self {
        Self::from_classes(ids.into_iter().map(|id| vec![id]))
    }

    pub(crate) fn from_classes(classes: impl IntoIterator<Item = Vec<NodeId>>) -> Self {
        let mut classes: Vec<Vec<NodeId>> = classes
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        classes.sort();
        Partition { classes }
    }

    pub fn classes(&self) -> &[Vec<NodeId>] {
        &self.classes
    }

    /// Classes with more than one member.
    pub fn entangled_classes(&self) -> impl Iterator<Item = &[NodeId]> {
        self.classes
            .iter()
            .filter(|c| c.len() > 1)
            .map(Vec::as_slice)
    }

    pub fn class_of(&self, id: NodeId) -> Option<&[NodeId]> {
        self.classes
            .iter()
            .find(|c| c.binary_search(&id).is_ok())
            .map(Vec::as_slice)
    }

    pub fn same_class(&self, a: NodeId, b: NodeId) -> bool {
        self.class_of(a)
            .is_some_and(|c| c.binary_search(&b).is_ok())
    }

    pub fn node_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// True if every class of `self` lies inside some class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.classes.iter().all(|c| {
            coarser
                .class_of(c[0])
                .is_some_and(|big| c.iter().all(|id| big.binary_search(id).is_ok()))
        })
    }
}
