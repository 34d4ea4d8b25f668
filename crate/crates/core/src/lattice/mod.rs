//! Finite families of non-empty subgraphs ordered by containment.
//!
//! Vertex-induced and edge-subset families are complete Boolean lattices with
//! the empty set removed. Their elements are bit masks over the ground set
//! (vertices or edges) and the element id of mask `s` is `s - 1`, so ids are
//! ascending in the integer value of the bit pattern. Explicit families carry
//! an arbitrary finite partial order loaded from a file.

mod bitrow;
mod graph;
mod transform;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::guard::Guards;

use bitrow::BitRow;
pub use graph::{Graph, MAX_VERTICES};
pub use transform::Extremum;

pub type ElementId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KindTag {
    VertexInduced,
    EdgeSubsets,
    Explicit,
}

impl KindTag {
    pub fn name(self) -> &'static str {
        match self {
            KindTag::VertexInduced => "vertex-induced",
            KindTag::EdgeSubsets => "edge-subsets",
            KindTag::Explicit => "explicit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "vertex-induced" => Some(KindTag::VertexInduced),
            "edge-subsets" => Some(KindTag::EdgeSubsets),
            "explicit" => Some(KindTag::Explicit),
            _ => None,
        }
    }
}

/// An explicit poset as listed in a family file: element labels, generating
/// containment pairs `(i, j)` meaning `i ⊆ j`, and optionally the top element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPoset {
    pub labels: Vec<String>,
    pub leq: Vec<(usize, usize)>,
    pub top: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    VertexInduced,
    EdgeSubsets,
    Explicit(ExplicitPoset),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extent {
    Vertices(u64),
    Edges(u64),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElementId,
    pub extent: Extent,
}

#[derive(Debug, Clone)]
pub struct Family {
    repr: Repr,
    guards: Guards,
    fingerprint: u64,
}

#[derive(Debug, Clone)]
enum Repr {
    Boolean { tag: KindTag, ground: usize },
    Explicit(Poset),
}

#[derive(Debug, Clone)]
struct Poset {
    labels: Vec<String>,
    index: HashMap<String, ElementId>,
    // up[i] = { j : i ≤ j }, down[i] = { j : j ≤ i }
    up: Vec<BitRow>,
    down: Vec<BitRow>,
    down_count: Vec<usize>,
    top: Option<ElementId>,
}

/// Materializes the family of `kind` over `graph`. Explicit families ignore
/// the graph.
pub fn build_family(graph: &Graph, kind: FamilyKind, guards: Guards) -> Result<Family> {
    match kind {
        FamilyKind::VertexInduced => {
            Family::boolean(KindTag::VertexInduced, graph.vertex_count(), guards)
        }
        FamilyKind::EdgeSubsets => {
            Family::boolean(KindTag::EdgeSubsets, graph.edge_count(), guards)
        }
        FamilyKind::Explicit(poset) => Family::explicit(poset, guards),
    }
}

fn fnv1a(state: &mut u64, bytes: &[u8]) {
    for &b in bytes {
        *state ^= b as u64;
        *state = state.wrapping_mul(0x0000_0100_0000_01b3);
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

impl Family {
    /// Vertex-induced family of `graph` under default guards.
    pub fn vertex_induced(graph: &Graph) -> Result<Self> {
        build_family(graph, FamilyKind::VertexInduced, Guards::default())
    }

    fn boolean(tag: KindTag, ground: usize, guards: Guards) -> Result<Self> {
        if ground == 0 {
            return Err(Error::InvalidFamily(match tag {
                KindTag::EdgeSubsets => {
                    "edge-subset family of a graph without edges is empty".into()
                }
                _ => "vertex-induced family of the empty graph is empty".into(),
            }));
        }
        Guards::check("family construction", ground, guards.family)?;
        let mut fp = FNV_OFFSET;
        fnv1a(&mut fp, tag.name().as_bytes());
        fnv1a(&mut fp, &(ground as u64).to_le_bytes());
        Ok(Family {
            repr: Repr::Boolean { tag, ground },
            guards,
            fingerprint: fp,
        })
    }

    pub fn explicit(poset: ExplicitPoset, guards: Guards) -> Result<Self> {
        let m = poset.labels.len();
        if m == 0 {
            return Err(Error::InvalidFamily(
                "explicit family has no elements".into(),
            ));
        }
        Guards::check("family construction", bit_length(m), guards.family)?;
        let mut index = HashMap::with_capacity(m);
        for (i, label) in poset.labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::InvalidFamily(format!(
                    "element {i} has an empty label"
                )));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidFamily(format!("duplicate label {label:?}")));
            }
        }
        let mut up: Vec<BitRow> = (0..m)
            .map(|i| {
                let mut r = BitRow::new(m);
                r.set(i);
                r
            })
            .collect();
        for &(i, j) in &poset.leq {
            if i >= m || j >= m {
                return Err(Error::InvalidFamily(format!(
                    "containment pair ({i},{j}) refers to a missing element"
                )));
            }
            up[i].set(j);
        }
        // Warshall closure on rows
        for k in 0..m {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.or_assign(&row_k);
                }
            }
        }
        let mut down: Vec<BitRow> = (0..m).map(|_| BitRow::new(m)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row.iter_ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::NotAPoset(format!(
                        "{:?} and {:?} contain each other",
                        poset.labels[i], poset.labels[j]
                    )));
                }
                down[j].set(i);
            }
        }
        let down_count: Vec<usize> = down.iter().map(BitRow::count).collect();
        let greatest = (0..m).find(|&t| down_count[t] == m);
        let top = match poset.top {
            Some(t) if t >= m => {
                return Err(Error::InvalidFamily(format!("top index {t} out of range")));
            }
            Some(t) if greatest != Some(t) => {
                return Err(Error::InvalidFamily(format!(
                    "declared top {:?} is not above every element",
                    poset.labels[t]
                )));
            }
            _ => greatest,
        };
        let mut fp = FNV_OFFSET;
        fnv1a(&mut fp, b"explicit");
        for (label, row) in poset.labels.iter().zip(&up) {
            fnv1a(&mut fp, label.as_bytes());
            fnv1a(&mut fp, &[0]);
            for w in row.words() {
                fnv1a(&mut fp, &w.to_le_bytes());
            }
        }
        Ok(Family {
            repr: Repr::Explicit(Poset {
                labels: poset.labels,
                index,
                up,
                down,
                down_count,
                top,
            }),
            guards,
            fingerprint: fp,
        })
    }

    /// Same family under different guards.
    pub fn with_guards(mut self, guards: Guards) -> Self {
        self.guards = guards;
        self
    }

    pub fn guards(&self) -> &Guards {
        &self.guards
    }

    pub(crate) fn guard(
        &self,
        operation: &'static str,
        limit: impl Fn(&Guards) -> usize,
    ) -> Result<()> {
        Guards::check(operation, self.ground_size(), limit(&self.guards))
    }

    pub fn kind(&self) -> KindTag {
        match &self.repr {
            Repr::Boolean { tag, .. } => *tag,
            Repr::Explicit(_) => KindTag::Explicit,
        }
    }

    /// Size used by the guards: ground set size for Boolean families, bit
    /// length of the element count for explicit ones.
    pub fn ground_size(&self) -> usize {
        match &self.repr {
            Repr::Boolean { ground, .. } => *ground,
            Repr::Explicit(p) => bit_length(p.labels.len()),
        }
    }

    /// Ground set size when the family is a Boolean lattice minus the empty set.
    pub fn boolean_ground(&self) -> Option<usize> {
        match &self.repr {
            Repr::Boolean { ground, .. } => Some(*ground),
            Repr::Explicit(_) => None,
        }
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Boolean { ground, .. } => (1usize << ground) - 1,
            Repr::Explicit(p) => p.labels.len(),
        }
    }

    /// Always false: families are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> std::ops::Range<ElementId> {
        0..self.len()
    }

    pub fn top(&self) -> Option<ElementId> {
        match &self.repr {
            Repr::Boolean { .. } => Some(self.len() - 1),
            Repr::Explicit(p) => p.top,
        }
    }

    pub fn check_id(&self, id: ElementId) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(id))
        }
    }

    /// Bit mask of a Boolean-family element.
    pub fn mask(&self, id: ElementId) -> Option<u64> {
        match self.repr {
            Repr::Boolean { .. } => Some(id as u64 + 1),
            Repr::Explicit(_) => None,
        }
    }

    /// Element id of a non-empty mask in a Boolean family.
    pub fn id_of_mask(&self, mask: u64) -> Option<ElementId> {
        match self.repr {
            Repr::Boolean { ground, .. } if mask != 0 && mask >> ground == 0 => {
                Some(mask as usize - 1)
            }
            _ => None,
        }
    }

    pub fn element(&self, id: ElementId) -> Element {
        assert!(id < self.len(), "element id {id} out of range");
        let extent = match &self.repr {
            Repr::Boolean {
                tag: KindTag::EdgeSubsets,
                ..
            } => Extent::Edges(id as u64 + 1),
            Repr::Boolean { .. } => Extent::Vertices(id as u64 + 1),
            Repr::Explicit(p) => Extent::Label(p.labels[id].clone()),
        };
        Element { id, extent }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.ids().map(|id| self.element(id))
    }

    /// Canonical file key: ascending ground indices joined by commas, or the
    /// label of an explicit element.
    pub fn element_key(&self, id: ElementId) -> String {
        match &self.repr {
            Repr::Boolean { .. } => {
                let mask = id as u64 + 1;
                (0..64)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
            Repr::Explicit(p) => p.labels[id].clone(),
        }
    }

    /// Inverse of [`Family::element_key`]. Boolean keys may list indices in
    /// any order but must not repeat one.
    pub fn find_key(&self, key: &str) -> Option<ElementId> {
        match &self.repr {
            Repr::Boolean { ground, .. } => {
                let mut mask = 0u64;
                for part in key.split(',') {
                    let i: usize = part.trim().parse().ok()?;
                    if i >= *ground || mask >> i & 1 == 1 {
                        return None;
                    }
                    mask |= 1 << i;
                }
                self.id_of_mask(mask)
            }
            Repr::Explicit(p) => p.index.get(key).copied(),
        }
    }

    /// `a ⊆ b`. Panics if either id is out of range.
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        assert!(a < self.len() && b < self.len(), "element id out of range");
        match &self.repr {
            Repr::Boolean { .. } => {
                let (a, b) = (a as u64 + 1, b as u64 + 1);
                a & !b == 0
            }
            Repr::Explicit(p) => p.up[a].contains(b),
        }
    }

    /// Least upper bound of `a` and `b`.
    pub fn join(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        self.check_id(a)?;
        self.check_id(b)?;
        match &self.repr {
            Repr::Boolean { .. } => Ok((((a as u64 + 1) | (b as u64 + 1)) - 1) as usize),
            Repr::Explicit(p) => p.join(a, b).ok_or(Error::NoJoin(a, b)),
        }
    }

    /// Succeeds when every pair of elements has a join.
    pub fn check_join_closed(&self) -> Result<()> {
        match &self.repr {
            Repr::Boolean { .. } => Ok(()),
            Repr::Explicit(p) => {
                for a in 0..p.labels.len() {
                    for b in a + 1..p.labels.len() {
                        if p.join(a, b).is_none() {
                            return Err(Error::NoJoin(a, b));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Elements strictly above `a`, ascending.
    pub fn strict_up(&self, a: ElementId) -> Box<dyn Iterator<Item = ElementId> + '_> {
        match &self.repr {
            Repr::Boolean { ground, .. } => {
                let full = (1u64 << ground) - 1;
                Box::new(strict_supersets(full, a as u64 + 1).map(|m| m as usize - 1))
            }
            Repr::Explicit(p) => Box::new(p.up[a].iter_ones().filter(move |&b| b != a)),
        }
    }

    /// Elements strictly below `b`, ascending.
    pub fn strict_down(&self, b: ElementId) -> Box<dyn Iterator<Item = ElementId> + '_> {
        match &self.repr {
            Repr::Boolean { .. } => {
                let mask = b as u64 + 1;
                let mut subs: Vec<ElementId> =
                    proper_submasks_desc(mask).map(|s| s as usize - 1).collect();
                subs.reverse();
                Box::new(subs.into_iter())
            }
            Repr::Explicit(p) => Box::new(p.down[b].iter_ones().filter(move |&a| a != b)),
        }
    }

    /// Every `(a, b)` with `a ⊂ b`, ordered by `a` then `b`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.ids()
            .flat_map(move |a| self.strict_up(a).map(move |b| (a, b)))
    }

    /// Every `(a, b, c)` with `a ⊂ b ⊂ c`, lexicographically ordered.
    pub fn strict_triples(&self) -> impl Iterator<Item = (ElementId, ElementId, ElementId)> + '_ {
        self.strict_pairs()
            .flat_map(move |(a, b)| self.strict_up(b).map(move |c| (a, b, c)))
    }

    /// Elements covering `a` (strictly above, nothing in between), ascending.
    pub fn upper_covers(&self, a: ElementId) -> Vec<ElementId> {
        match &self.repr {
            Repr::Boolean { ground, .. } => {
                let mask = a as u64 + 1;
                (0..*ground)
                    .filter(|&i| mask >> i & 1 == 0)
                    .map(|i| (mask | 1 << i) as usize - 1)
                    .collect()
            }
            Repr::Explicit(p) => {
                let mut strict = p.up[a].clone();
                strict.unset(a);
                // c covers a when c is the only strict upper bound of a below c
                strict
                    .iter_ones()
                    .filter(|&c| p.down[c].and(&strict).count() == 1)
                    .collect()
            }
        }
    }

    pub fn minimal_elements(&self) -> Vec<ElementId> {
        match &self.repr {
            Repr::Boolean { ground, .. } => (0..*ground).map(|i| (1usize << i) - 1).collect(),
            Repr::Explicit(p) => (0..p.labels.len())
                .filter(|&i| p.down_count[i] == 1)
                .collect(),
        }
    }

    /// All maximal chains, each ascending from a minimal to a maximal element
    /// through covering steps. Chains are listed in depth-first order with
    /// ascending ids at every branch.
    pub fn maximal_chains(&self) -> Result<Vec<Vec<ElementId>>> {
        self.guard("maximal chain enumeration", |g| g.chains)?;
        let covers: Vec<Vec<ElementId>> = self.ids().map(|a| self.upper_covers(a)).collect();
        let mut chains = Vec::new();
        let mut stack = Vec::new();
        fn walk(
            covers: &[Vec<ElementId>],
            at: ElementId,
            stack: &mut Vec<ElementId>,
            out: &mut Vec<Vec<ElementId>>,
        ) {
            stack.push(at);
            if covers[at].is_empty() {
                out.push(stack.clone());
            } else {
                for &next in &covers[at] {
                    walk(covers, next, stack, out);
                }
            }
            stack.pop();
        }
        for start in self.minimal_elements() {
            walk(&covers, start, &mut stack, &mut chains);
        }
        Ok(chains)
    }

    /// For every element `h`, the minimum of `values` over elements below `h`
    /// (`⊆`, or `⊂` when `strict`). Ties go to the smallest id; `None` when no
    /// element qualifies.
    pub fn down_min(&self, values: &[f64], strict: bool) -> Vec<Option<Extremum>> {
        assert_eq!(values.len(), self.len());
        match &self.repr {
            Repr::Boolean { ground, .. } => transform::down_min(*ground, values, strict),
            Repr::Explicit(p) => p.extremes(&p.down, values, strict),
        }
    }

    /// Superset counterpart of [`Family::down_min`].
    pub fn up_min(&self, values: &[f64], strict: bool) -> Vec<Option<Extremum>> {
        assert_eq!(values.len(), self.len());
        match &self.repr {
            Repr::Boolean { ground, .. } => transform::up_min(*ground, values, strict),
            Repr::Explicit(p) => p.extremes(&p.up, values, strict),
        }
    }

    /// Ids ordered so that every element comes after everything below it.
    pub(crate) fn linear_extension(&self) -> Vec<ElementId> {
        match &self.repr {
            Repr::Boolean { .. } => self.ids().collect(),
            Repr::Explicit(p) => {
                let mut ids: Vec<ElementId> = self.ids().collect();
                ids.sort_by_key(|&i| (p.down_count[i], i));
                ids
            }
        }
    }
}

impl Poset {
    fn join(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        let common = self.up[a].and(&self.up[b]);
        // the least upper bound, if any, has the fewest elements below it
        let candidate = common
            .iter_ones()
            .min_by_key(|&u| (self.down_count[u], u))?;
        common.is_subset(&self.up[candidate]).then_some(candidate)
    }

    fn extremes(&self, rows: &[BitRow], values: &[f64], strict: bool) -> Vec<Option<Extremum>> {
        rows.iter()
            .enumerate()
            .map(|(h, row)| {
                row.iter_ones()
                    .filter(|&x| !strict || x != h)
                    .map(|x| Extremum {
                        value: values[x],
                        at: x,
                    })
                    .reduce(transform::better)
            })
            .collect()
    }
}

fn bit_length(m: usize) -> usize {
    (usize::BITS - m.leading_zeros()) as usize
}

/// Non-empty proper submasks of `mask`, descending.
pub(crate) fn proper_submasks_desc(mask: u64) -> impl Iterator<Item = u64> {
    let first = (mask.wrapping_sub(1)) & mask;
    std::iter::successors((first != 0).then_some(first), move |&s| {
        let next = (s - 1) & mask;
        (next != 0).then_some(next)
    })
}

/// Strict supersets of `mask` inside `full`, ascending.
fn strict_supersets(full: u64, mask: u64) -> impl Iterator<Item = u64> {
    let comp = full & !mask;
    let first = comp & comp.wrapping_neg();
    std::iter::successors((first != 0).then_some(first), move |&t| {
        let next = (t | !comp).wrapping_add(1) & comp;
        (next != 0).then_some(next)
    })
    .map(move |t| mask | t)
}
