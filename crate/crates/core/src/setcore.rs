//! Combinatorial primitives shared by every complex in the crate: atoms
//! (k-subsets of `[l]`), canonically ordered atom sets, closure partitions
//! via union-find, complement families, free vertices, pivot-set candidates,
//! independence, and inversion counts.
//!
//! Everything here is a pure function on immutable values; all canonical
//! orders are lexicographic on sorted element lists so that downstream sign
//! conventions are deterministic.

use itertools::Itertools;

use crate::error::{Error, Result};

/// A single subspace label: a sorted set of distinct positive integers.
/// The arity (the `k` of the arrangement) is the length of the set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    elements: Vec<u32>,
}

impl Atom {
    /// Builds an atom from its elements. Rejects empty, unsorted, duplicated
    /// or non-positive input.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::malformed("atom", "must contain at least one element"));
        }
        check_sorted_set("atom", &elements)?;
        Ok(Atom { elements })
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// The arity `k` of this atom.
    pub fn arity(&self) -> usize {
        self.elements.len()
    }

    pub fn max_element(&self) -> u32 {
        *self.elements.last().expect("atom is nonempty")
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.elements.iter().join(","))
    }
}

fn check_sorted_set(what: &'static str, elements: &[u32]) -> Result<()> {
    for pair in elements.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::malformed(
                what,
                format!("elements must be strictly increasing, got {pair:?}"),
            ));
        }
    }
    if elements.first().is_some_and(|&x| x == 0) {
        return Err(Error::malformed(what, "elements must be positive"));
    }
    Ok(())
}

/// Sorts and validates a not-necessarily-sorted element list.
pub(crate) fn canonical_elements(what: &'static str, mut elements: Vec<u32>) -> Result<Vec<u32>> {
    elements.sort_unstable();
    elements.dedup();
    if elements.first().is_some_and(|&x| x == 0) {
        return Err(Error::malformed(what, "elements must be positive"));
    }
    Ok(elements)
}

/// A duplicate-free set of atoms in canonical (lexicographic) order together
/// with the ambient size `l`. Indexes the generator `a_S` of a finite complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomSet {
    atoms: Vec<Atom>,
    ambient: u32,
}

impl AtomSet {
    /// Builds a canonically ordered atom set. The input may be in any order;
    /// duplicates are rejected, as are atoms exceeding the ambient `l` or
    /// mixing arities.
    pub fn new(mut atoms: Vec<Atom>, ambient: u32) -> Result<Self> {
        atoms.sort();
        for pair in atoms.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::malformed(
                    "atom set",
                    format!("duplicate atom {}", pair[0]),
                ));
            }
        }
        if let Some(first) = atoms.first() {
            let k = first.arity();
            for atom in &atoms {
                if atom.arity() != k {
                    return Err(Error::malformed(
                        "atom set",
                        format!("mixed arities {} and {}", k, atom.arity()),
                    ));
                }
                if atom.max_element() > ambient {
                    return Err(Error::malformed(
                        "atom set",
                        format!("atom {} exceeds ambient {}", atom, ambient),
                    ));
                }
            }
        }
        Ok(AtomSet { atoms, ambient })
    }

    pub fn empty(ambient: u32) -> Self {
        AtomSet {
            atoms: Vec::new(),
            ambient,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Arity of the atoms, if the set is nonempty.
    pub fn arity(&self) -> Option<usize> {
        self.atoms.first().map(Atom::arity)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.binary_search(atom).is_ok()
    }

    /// The set with one atom removed (by value).
    pub fn without(&self, atom: &Atom) -> Result<AtomSet> {
        let idx = self
            .atoms
            .binary_search(atom)
            .map_err(|_| Error::AtomNotInSet {
                atom: atom.to_string(),
            })?;
        let mut atoms = self.atoms.clone();
        atoms.remove(idx);
        Ok(AtomSet {
            atoms,
            ambient: self.ambient,
        })
    }

    /// The set with one atom inserted, keeping canonical order.
    pub fn with(&self, atom: Atom) -> Result<AtomSet> {
        let mut atoms = self.atoms.clone();
        atoms.push(atom);
        AtomSet::new(atoms, self.ambient)
    }

    /// Union as sets of atoms, canonically reordered.
    pub fn union(&self, other: &AtomSet) -> Result<AtomSet> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        atoms.sort();
        atoms.dedup();
        AtomSet::new(atoms, self.ambient)
    }

    /// Sorted union of all atom elements.
    pub fn support(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .atoms
            .iter()
            .flat_map(|a| a.elements().iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Sorted intersection of all atom elements; `None` for the empty set.
    pub fn common_elements(&self) -> Option<Vec<u32>> {
        let first = self.atoms.first()?;
        let mut common: Vec<u32> = first.elements().to_vec();
        for atom in &self.atoms[1..] {
            common.retain(|x| atom.contains(*x));
        }
        Some(common)
    }
}

impl std::fmt::Display for AtomSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.atoms.iter().map(|a| a.to_string()).join(","))
    }
}

/// A partition of `[l]` into sorted disjoint blocks; the canonical form of
/// the subspace `X(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<u32>>,
    ambient: u32,
}

impl Partition {
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// A family of equal-size subsets of the positive integers in canonical
/// order; the complement-side index `Lambda = S^c`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplementFamily {
    members: Vec<Vec<u32>>,
}

impl ComplementFamily {
    /// Builds a canonically ordered family. Members are sorted internally,
    /// duplicates among members are rejected, and all members must share one
    /// cardinality. The family itself may be empty; a size-zero member is
    /// only representable as the one-member family `{{}}`.
    pub fn new(members: Vec<Vec<u32>>) -> Result<Self> {
        let mut members = members
            .into_iter()
            .map(|m| canonical_elements("complement family member", m))
            .collect::<Result<Vec<_>>>()?;
        members.sort();
        for pair in members.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::malformed(
                    "complement family",
                    format!("duplicate member {:?}", pair[0]),
                ));
            }
        }
        if let Some(first) = members.first() {
            let q = first.len();
            if members.iter().any(|m| m.len() != q) {
                return Err(Error::malformed(
                    "complement family",
                    "members must share one cardinality",
                ));
            }
        }
        Ok(ComplementFamily { members })
    }

    pub fn empty() -> Self {
        ComplementFamily {
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The common cardinality of the members, if the family is nonempty.
    pub fn member_size(&self) -> Option<usize> {
        self.members.first().map(Vec::len)
    }

    /// Sorted intersection of all members; `None` for the empty family.
    pub fn core(&self) -> Option<Vec<u32>> {
        let first = self.members.first()?;
        let mut core = first.clone();
        for member in &self.members[1..] {
            core.retain(|x| member.binary_search(x).is_ok());
        }
        Some(core)
    }

    /// Sorted union of all members.
    pub fn support(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.members.iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The family with the member at canonical position `idx` removed.
    pub fn without_index(&self, idx: usize) -> ComplementFamily {
        let mut members = self.members.clone();
        members.remove(idx);
        ComplementFamily { members }
    }
}

impl std::fmt::Display for ComplementFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.members
                .iter()
                .map(|m| format!("{{{}}}", m.iter().join(",")))
                .join(",")
        )
    }
}

/// All `C(l,k)` k-subsets of `[l]` in lexicographic order.
pub fn atoms_of(k: u32, l: u32) -> Result<Vec<Atom>> {
    if k < 2 || k > l {
        return Err(Error::InvalidArity { k, l });
    }
    Ok((1..=l)
        .combinations(k as usize)
        .map(|elements| Atom { elements })
        .collect())
}

/// Small union-find over `1..=n`, used for closure partitions.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..=n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            // Smaller root wins so that representatives are stable.
            let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
            self.parent[hi] = lo;
        }
    }
}

/// The connected components of the hypergraph on `[l]` whose edges are the
/// atoms of `S`, singletons included: the canonical form of `X(S)`.
pub fn closure_partition(s: &AtomSet) -> Partition {
    let l = s.ambient() as usize;
    let mut uf = UnionFind::new(l);
    for atom in s.atoms() {
        let first = atom.elements()[0] as usize;
        for &x in &atom.elements()[1..] {
            uf.union(first, x as usize);
        }
    }
    let mut blocks_by_root: std::collections::BTreeMap<usize, Vec<u32>> =
        std::collections::BTreeMap::new();
    for x in 1..=l {
        blocks_by_root.entry(uf.find(x)).or_default().push(x as u32);
    }
    Partition {
        blocks: blocks_by_root.into_values().collect(),
        ambient: s.ambient(),
    }
}

/// `codim X(S)`: the ambient size minus the number of closure blocks.
pub fn codim(s: &AtomSet) -> u32 {
    s.ambient() - closure_partition(s).block_count() as u32
}

/// The complement family `Lambda` with `lambda_j = [l] \ sigma_j`,
/// re-sorted canonically. Involutive at fixed `l`.
pub fn complement(s: &AtomSet) -> ComplementFamily {
    let l = s.ambient();
    let members = s
        .atoms()
        .iter()
        .map(|atom| (1..=l).filter(|x| !atom.contains(*x)).collect())
        .collect();
    ComplementFamily::new(members).expect("complements of distinct atoms are distinct")
}

/// Recovers the atom set `S` with `sigma_j = [l] \ lambda_j` from a
/// complement family. Inverse of [`complement`].
pub fn complement_of_family(family: &ComplementFamily, l: u32) -> Result<AtomSet> {
    let atoms = family
        .members()
        .iter()
        .map(|member| {
            if member.last().is_some_and(|&x| x > l) {
                return Err(Error::malformed(
                    "complement family",
                    format!("member exceeds ambient {l}"),
                ));
            }
            Atom::new((1..=l).filter(|x| member.binary_search(x).is_err()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    AtomSet::new(atoms, l)
}

/// `F(sigma)`: the elements of `sigma` contained in no other atom of `S`.
pub fn free_vertices(sigma: &Atom, s: &AtomSet) -> Result<Vec<u32>> {
    if !s.contains(sigma) {
        return Err(Error::AtomNotInSet {
            atom: sigma.to_string(),
        });
    }
    Ok(sigma
        .elements()
        .iter()
        .copied()
        .filter(|&x| {
            s.atoms()
                .iter()
                .all(|tau| tau == sigma || !tau.contains(x))
        })
        .collect())
}

/// All candidate pivot sets `P(S)`: subsets `P` of the support of `S` with
/// `|P| = k-1`, containing the common intersection of `S`, such that no
/// `F(sigma)` is swallowed whole (`F(sigma) \ P` stays nonempty for every
/// atom; an empty `F(sigma)` fails this vacuously). Enumerated exhaustively;
/// the list may be empty.
pub fn pset_candidates(s: &AtomSet, k: u32) -> Vec<Vec<u32>> {
    if s.is_empty() || k == 0 {
        return Vec::new();
    }
    s.support()
        .into_iter()
        .combinations((k - 1) as usize)
        .filter(|p| is_pset_candidate(s, k, p))
        .collect()
}

/// Checks the pivot-set conditions for one candidate `P`: `|P| = k-1`
/// inside the support, the common intersection of `S` inside `P`, and no
/// `F(sigma)` swallowed whole. A single atom forces nothing in common, so
/// it imposes no core constraint (a k-set cannot fit in a (k-1)-set).
pub fn is_pset_candidate(s: &AtomSet, k: u32, p: &[u32]) -> bool {
    if s.is_empty() || k == 0 || p.len() != (k - 1) as usize {
        return false;
    }
    if p.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let support = s.support();
    if p.iter().any(|x| support.binary_search(x).is_err()) {
        return false;
    }
    if s.len() >= 2 {
        let core = s.common_elements().unwrap_or_default();
        if core.iter().any(|c| p.binary_search(c).is_err()) {
            return false;
        }
    }
    s.atoms().iter().all(|sigma| {
        let free = free_vertices(sigma, s).expect("sigma drawn from s");
        !free.is_empty() && free.iter().any(|x| p.binary_search(x).is_err())
    })
}

/// True iff dropping any single atom changes the closure partition
/// (`X(S \ sigma) != X(S)` for every `sigma in S`). Vacuously true for
/// `|S| <= 1`.
pub fn is_independent(s: &AtomSet) -> bool {
    let full = closure_partition(s);
    s.atoms().iter().all(|sigma| {
        let reduced = s.without(sigma).expect("sigma drawn from s");
        closure_partition(&reduced) != full
    })
}

/// The number of pairs `(a, b) in A x B` with `b < a`: the transposition
/// count of the shuffle moving all of `B` after all of `A`. Inputs must be
/// sorted, duplicate-free and disjoint.
pub fn inversion_count(a: &[u32], b: &[u32]) -> Result<u64> {
    // Walk the merge of the two sorted lists; every b passed over counts one
    // inversion against each remaining a.
    let mut count = 0u64;
    let mut i = 0usize;
    for &x in b {
        while i < a.len() && a[i] < x {
            i += 1;
        }
        if i < a.len() && a[i] == x {
            return Err(Error::NotDisjoint { shared: x });
        }
        count += (a.len() - i) as u64;
    }
    Ok(count)
}

/// Inversion count for general ordered items (used for atom-level product
/// signs), with the same disjointness contract.
pub(crate) fn inversion_count_orderable<T: Ord>(a: &[T], b: &[T]) -> Result<u64> {
    let mut count = 0u64;
    let mut i = 0usize;
    for x in b {
        while i < a.len() && a[i] < *x {
            i += 1;
        }
        if i < a.len() && a[i] == *x {
            return Err(Error::NotDisjoint { shared: 0 });
        }
        count += (a.len() - i) as u64;
    }
    Ok(count)
}
