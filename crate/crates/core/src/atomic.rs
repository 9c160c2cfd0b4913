//! The finite relative atomic complex `A(k,l)`: one generator `a_S` per set
//! of atoms, graded by `deg(a_S) = 2 codim X(S) - |S|`, with the differential
//! that drops one atom at a time when the subspace is unchanged and the cup
//! product gated by codimension additivity.
//!
//! Complexes are assembled degree by degree with subsets of the atom list
//! encoded as bit masks; the public surface speaks [`AtomSet`]s.

use std::collections::{BTreeMap, HashMap};

use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formal::FormalSum;
use crate::ratlin::{self, Rational, SparseMatrix, SparseVector};
use crate::setcore::{
    atoms_of, closure_partition, codim, inversion_count_orderable, Atom, AtomSet,
};

/// A formal rational combination of atom sets.
pub type ChainElement = FormalSum<AtomSet>;

/// A generator `a_S` together with its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub index: AtomSet,
    pub degree: i32,
}

impl Generator {
    pub fn new(index: AtomSet) -> Self {
        let degree = degree(&index);
        Generator { index, degree }
    }
}

/// Refuse to enumerate more generators than this without an explicit bound.
pub const DEFAULT_GENERATOR_CEILING: u64 = 1 << 16;

/// `deg(a_S) = 2 codim X(S) - |S|`.
pub fn degree(s: &AtomSet) -> i32 {
    2 * codim(s) as i32 - s.len() as i32
}

/// The maximal degree of `A(k,l)`: `2(l-1) - ceil((l-1)/(k-1))`.
pub fn max_degree(k: u32, l: u32) -> i32 {
    2 * (l as i32 - 1) - ceil_div(l - 1, k - 1) as i32
}

pub(crate) fn ceil_div(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// `d(a_S) = sum (-1)^j a_{S \ sigma_j}` over the 1-based canonical
/// positions `j` whose removal keeps `X(S)` unchanged.
pub fn differential(s: &AtomSet) -> ChainElement {
    let full = closure_partition(s);
    let mut out = ChainElement::zero();
    for (pos, sigma) in s.atoms().iter().enumerate() {
        let reduced = s.without(sigma).expect("sigma drawn from s");
        if closure_partition(&reduced) == full {
            let sign = if (pos + 1) % 2 == 1 { -1 } else { 1 };
            out.add_term(reduced, BigRational::from_integer(sign.into()));
        }
    }
    out
}

/// Linear extension of [`differential`] to chain elements.
pub fn differential_chain(x: &ChainElement) -> ChainElement {
    x.flat_map(differential)
}

/// The common degree of all terms, `Some(0)` for the zero chain by the
/// empty-set convention, `None` when the chain is inhomogeneous.
pub fn homogeneous_degree(x: &ChainElement) -> Option<i32> {
    let mut terms = x.indices();
    let first = match terms.next() {
        Some(s) => degree(s),
        None => return Some(0),
    };
    terms.all(|s| degree(s) == first).then_some(first)
}

/// The cup product: `(-1)^{eps(S,T)} a_{S cup T}` when the codimensions add
/// up (which forces `S` and `T` disjoint), zero otherwise.
pub fn cup(s: &AtomSet, t: &AtomSet) -> Result<ChainElement> {
    if s.ambient() != t.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "ambient {} vs {}",
            s.ambient(),
            t.ambient()
        )));
    }
    if let (Some(ka), Some(kb)) = (s.arity(), t.arity()) {
        if ka != kb {
            return Err(Error::DimensionMismatch(format!("arity {ka} vs {kb}")));
        }
    }
    let union = s.union(t)?;
    if union.len() != s.len() + t.len() {
        // Shared atoms always break codimension additivity.
        return Ok(ChainElement::zero());
    }
    if codim(s) + codim(t) != codim(&union) {
        return Ok(ChainElement::zero());
    }
    let inversions = inversion_count_orderable(s.atoms(), t.atoms())
        .expect("disjointness established above");
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Ok(ChainElement::term_int(union, sign))
}

/// Bilinear extension of [`cup`] to chain elements.
pub fn cup_chain(x: &ChainElement, y: &ChainElement) -> Result<ChainElement> {
    let mut out = ChainElement::zero();
    for (s, cs) in x.iter() {
        for (t, ct) in y.iter() {
            for (u, cu) in cup(s, t)?.iter() {
                out.add_term(u.clone(), cs * ct * cu);
            }
        }
    }
    Ok(out)
}

/// Pushes `S` one stage up the directed system: every atom gains the new
/// coordinate `l+1`, so the complement family is unchanged.
pub fn stabilize(s: &AtomSet) -> AtomSet {
    let next = s.ambient() + 1;
    let atoms = s
        .atoms()
        .iter()
        .map(|atom| {
            let mut elements = atom.elements().to_vec();
            elements.push(next);
            Atom::new(elements).expect("l+1 exceeds all previous elements")
        })
        .collect();
    AtomSet::new(atoms, next).expect("stabilization preserves canonical form")
}

/// The monoid product of subspace labels: `sigma cup (tau shifted by l)`,
/// matching the coordinate order of the product `C^l x C^m`. Operates on
/// sorted subsets so that the empty factor is representable.
pub fn monoid_product(sigma: &[u32], l: u32, tau: &[u32], m: u32) -> Result<Vec<u32>> {
    for (name, set, bound) in [("sigma", sigma, l), ("tau", tau, m)] {
        for pair in set.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::malformed(
                    "monoid factor",
                    format!("{name} must be strictly increasing"),
                ));
            }
        }
        if set.first().is_some_and(|&x| x == 0) || set.last().is_some_and(|&x| x > bound) {
            return Err(Error::malformed(
                "monoid factor",
                format!("{name} must lie inside [{bound}]"),
            ));
        }
    }
    let mut out = sigma.to_vec();
    out.extend(tau.iter().map(|&j| j + l));
    Ok(out)
}

/// The finite complex: per-degree generator bases (canonically ordered) and
/// the differential matrices between adjacent degrees. `d^2 = 0` is checked
/// during construction.
pub struct FiniteComplex {
    k: u32,
    l: u32,
    max_atoms: Option<usize>,
    atoms: Vec<Atom>,
    buckets: BTreeMap<i32, Vec<u128>>,
    index_of: BTreeMap<i32, HashMap<u128, usize>>,
    diffs: BTreeMap<i32, SparseMatrix>,
}

/// Closure bookkeeping over bit masks.
struct MaskContext {
    l: usize,
    atom_elements: Vec<Vec<u32>>,
}

impl MaskContext {
    /// Partition fingerprint: for each of `1..=l`, the smallest element of
    /// its closure block.
    fn fingerprint(&self, mask: u128) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..=self.l as u32).collect();
        fn find(parent: &mut [u32], x: u32) -> u32 {
            let mut root = x;
            while parent[root as usize] != root {
                root = parent[root as usize];
            }
            let mut cur = x;
            while parent[cur as usize] != root {
                let next = parent[cur as usize];
                parent[cur as usize] = root;
                cur = next;
            }
            root
        }
        let mut rest = mask;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let elements = &self.atom_elements[idx];
            let first = elements[0];
            for &x in &elements[1..] {
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, x));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi as usize] = lo;
                }
            }
        }
        (1..=self.l as u32)
            .map(|x| find(&mut parent, x))
            .collect()
    }

    fn codim(&self, fingerprint: &[u32]) -> u32 {
        let mut blocks = fingerprint.to_vec();
        blocks.sort_unstable();
        blocks.dedup();
        self.l as u32 - blocks.len() as u32
    }

    fn degree(&self, mask: u128, fingerprint: &[u32]) -> i32 {
        2 * self.codim(fingerprint) as i32 - mask.count_ones() as i32
    }
}

/// Lexicographic order on the increasing bit-position sequences of masks,
/// which matches the canonical order of the underlying atom sets.
fn cmp_masks(a: u128, b: u128) -> std::cmp::Ordering {
    let (mut x, mut y) = (a, b);
    loop {
        if x == 0 || y == 0 {
            return x.count_ones().cmp(&y.count_ones());
        }
        let (i, j) = (x.trailing_zeros(), y.trailing_zeros());
        if i != j {
            return i.cmp(&j);
        }
        x &= x - 1;
        y &= y - 1;
    }
}

fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..r.min(n - r) {
        out = out.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    out
}

/// Builds `A(k,l)` with the default generator ceiling.
pub fn build_complex(k: u32, l: u32, max_atoms: Option<usize>) -> Result<FiniteComplex> {
    build_complex_with_ceiling(k, l, max_atoms, DEFAULT_GENERATOR_CEILING)
}

/// Builds `A(k,l)`, refusing when the generator count would exceed
/// `ceiling`. With `max_atoms = Some(b)` only generators with at most `b`
/// atoms are constructed (a genuine subcomplex, since `d` removes atoms).
pub fn build_complex_with_ceiling(
    k: u32,
    l: u32,
    max_atoms: Option<usize>,
    ceiling: u64,
) -> Result<FiniteComplex> {
    let atoms = atoms_of(k, l)?;
    let n = atoms.len();
    let generator_count: u128 = match max_atoms {
        Some(bound) => (0..=bound.min(n) as u64)
            .map(|r| binomial(n as u64, r))
            .sum(),
        None => {
            if n >= 64 {
                return Err(Error::ResourceGuard(format!(
                    "2^{n} generators for A({k},{l}); pass a max_atoms bound"
                )));
            }
            1u128 << n
        }
    };
    if generator_count > ceiling as u128 {
        return Err(Error::ResourceGuard(format!(
            "A({k},{l}) needs {generator_count} generators (ceiling {ceiling}); \
             pass or lower a max_atoms bound"
        )));
    }
    if n > 127 {
        return Err(Error::ResourceGuard(format!(
            "{n} atoms exceed the 127-bit mask encoding"
        )));
    }

    let ctx = MaskContext {
        l: l as usize,
        atom_elements: atoms.iter().map(|a| a.elements().to_vec()).collect(),
    };

    // Group generators by degree.
    let mut buckets: BTreeMap<i32, Vec<u128>> = BTreeMap::new();
    let mut push = |mask: u128| {
        let fp = ctx.fingerprint(mask);
        buckets.entry(ctx.degree(mask, &fp)).or_default().push(mask);
    };
    match max_atoms {
        Some(bound) => {
            for mask in masks_up_to_size(n, bound.min(n)) {
                push(mask);
            }
        }
        None => {
            for mask in 0..(1u128 << n) {
                push(mask);
            }
        }
    }
    for bucket in buckets.values_mut() {
        bucket.sort_unstable_by(|&a, &b| cmp_masks(a, b));
    }
    let index_of: BTreeMap<i32, HashMap<u128, usize>> = buckets
        .iter()
        .map(|(&deg, bucket)| {
            (
                deg,
                bucket.iter().enumerate().map(|(i, &m)| (m, i)).collect(),
            )
        })
        .collect();

    // Differential matrices between adjacent degrees.
    let mut diffs: BTreeMap<i32, SparseMatrix> = BTreeMap::new();
    for (&deg, bucket) in &buckets {
        let target_len = buckets.get(&(deg + 1)).map_or(0, Vec::len);
        let mut matrix = SparseMatrix::zero(target_len, bucket.len());
        if target_len > 0 {
            let target_index = &index_of[&(deg + 1)];
            for (col, &mask) in bucket.iter().enumerate() {
                let fp = ctx.fingerprint(mask);
                let mut rest = mask;
                let mut position = 0usize;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest &= rest - 1;
                    position += 1;
                    let reduced = mask & !bit;
                    if ctx.fingerprint(reduced) == fp {
                        let row = target_index[&reduced];
                        let sign = if position % 2 == 1 { -1 } else { 1 };
                        matrix
                            .set(row, col, Rational::from_integer(sign.into()))
                            .expect("indices in range");
                    }
                }
            }
        }
        diffs.insert(deg, matrix);
    }

    let complex = FiniteComplex {
        k,
        l,
        max_atoms,
        atoms,
        buckets,
        index_of,
        diffs,
    };
    complex.check_d_squared()?;
    Ok(complex)
}

/// All masks over `n` bits with at most `bound` bits set.
fn masks_up_to_size(n: usize, bound: usize) -> Vec<u128> {
    use itertools::Itertools;
    let mut out = Vec::new();
    for r in 0..=bound {
        for combo in (0..n).combinations(r) {
            out.push(combo.into_iter().fold(0u128, |m, i| m | (1u128 << i)));
        }
    }
    out
}

impl FiniteComplex {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn max_atoms(&self) -> Option<usize> {
        self.max_atoms
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Occupied degrees in increasing order.
    pub fn degrees(&self) -> Vec<i32> {
        self.buckets.keys().copied().collect()
    }

    pub fn generator_count(&self, degree: i32) -> usize {
        self.buckets.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_generators(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    /// The canonical generator basis of one degree.
    pub fn generator_sets(&self, degree: i32) -> Vec<AtomSet> {
        self.buckets
            .get(&degree)
            .map(|bucket| bucket.iter().map(|&m| self.atom_set_of_mask(m)).collect())
            .unwrap_or_default()
    }

    /// The differential out of `degree` (rows indexed by `degree + 1`).
    /// Returns a correctly shaped zero matrix for unoccupied degrees.
    pub fn differential_matrix(&self, degree: i32) -> SparseMatrix {
        self.diffs.get(&degree).cloned().unwrap_or_else(|| {
            SparseMatrix::zero(
                self.generator_count(degree + 1),
                self.generator_count(degree),
            )
        })
    }

    fn atom_set_of_mask(&self, mask: u128) -> AtomSet {
        let mut atoms = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            atoms.push(self.atoms[idx].clone());
        }
        AtomSet::new(atoms, self.l).expect("masks encode canonical sets")
    }

    fn mask_of_atom_set(&self, s: &AtomSet) -> Result<u128> {
        let mut mask = 0u128;
        for atom in s.atoms() {
            let idx = self
                .atoms
                .binary_search(atom)
                .map_err(|_| Error::AtomNotInSet {
                    atom: atom.to_string(),
                })?;
            mask |= 1u128 << idx;
        }
        Ok(mask)
    }

    /// Locates a generator: its degree and its index inside that degree.
    pub fn locate(&self, s: &AtomSet) -> Result<(i32, usize)> {
        let mask = self.mask_of_atom_set(s)?;
        let deg = degree(s);
        self.index_of
            .get(&deg)
            .and_then(|map| map.get(&mask))
            .map(|&i| (deg, i))
            .ok_or_else(|| Error::Malformed {
                what: "generator lookup",
                why: format!("{s} not present in the constructed complex"),
            })
    }

    /// Expresses a homogeneous chain as coordinates in its degree bucket.
    pub fn chain_to_vector(&self, degree: i32, chain: &ChainElement) -> Result<SparseVector> {
        let mut v = SparseVector::zero(self.generator_count(degree));
        for (s, coeff) in chain.iter() {
            let (d, idx) = self.locate(s)?;
            if d != degree {
                return Err(Error::DimensionMismatch(format!(
                    "term {s} has degree {d}, expected {degree}"
                )));
            }
            v.set(idx, coeff.clone())?;
        }
        Ok(v)
    }

    /// Reads coordinates in a degree bucket back as a chain element.
    pub fn vector_to_chain(&self, degree: i32, v: &SparseVector) -> ChainElement {
        let bucket = match self.buckets.get(&degree) {
            Some(b) => b,
            None => return ChainElement::zero(),
        };
        let mut out = ChainElement::zero();
        for (idx, coeff) in v.iter() {
            out.add_term(self.atom_set_of_mask(bucket[idx]), coeff.clone());
        }
        out
    }

    fn check_d_squared(&self) -> Result<()> {
        for (&deg, matrix) in &self.diffs {
            if let Some(next) = self.diffs.get(&(deg + 1)) {
                if next.ncols() != matrix.nrows() {
                    continue;
                }
                let composite = next.mul(matrix)?;
                if !composite.is_zero() {
                    return Err(Error::NonzeroComposition(format!(
                        "d o d != 0 out of degree {deg}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Degrees whose generator bucket is guaranteed complete under the
    /// `max_atoms` cut: a full-complex generator of size `r` has degree at
    /// most `2(l-1) - r`, so degrees above `2(l-1) - (bound+1)` cannot lose
    /// generators.
    fn degree_complete(&self, degree: i32) -> bool {
        match self.max_atoms {
            None => true,
            Some(bound) => degree >= 2 * (self.l as i32 - 1) - bound as i32,
        }
    }

    /// Per-degree homology dimensions. `None` marks degrees whose value is
    /// indeterminate because the `max_atoms` cut touches an adjacent bucket.
    pub fn homology(&self) -> Result<BTreeMap<i32, Option<usize>>> {
        let degrees = self.degrees();
        let dims: Vec<(i32, Option<usize>)> = {
            use rayon::prelude::*;
            degrees
                .par_iter()
                .map(|&deg| {
                    if !(self.degree_complete(deg) && self.degree_complete(deg - 1)) {
                        return Ok((deg, None));
                    }
                    let d_out = self.differential_matrix(deg);
                    let d_in = self.differential_matrix(deg - 1);
                    ratlin::homology_dim(&d_out, &d_in).map(|dim| (deg, Some(dim)))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(dims.into_iter().collect())
    }

    /// Homology at one degree with explicit representing cycles.
    pub fn homology_with_representatives(
        &self,
        degree: i32,
    ) -> Result<(usize, Vec<ChainElement>)> {
        let d_out = self.differential_matrix(degree);
        let d_in = self.differential_matrix(degree - 1);
        let cycles = ratlin::kernel_basis(&d_out);
        let boundaries = ratlin::image_basis(&d_in);
        let reps = ratlin::quotient_representatives(&cycles, &boundaries)?;
        let chains = reps
            .vectors()
            .iter()
            .map(|v| self.vector_to_chain(degree, v))
            .collect();
        Ok((reps.len(), chains))
    }
}

/// Betti numbers of the full complex `A(k,l)`: homology dimension per
/// degree, zero entries omitted.
pub fn betti(k: u32, l: u32) -> Result<BTreeMap<i32, usize>> {
    let complex = build_complex(k, l, None)?;
    let mut out = BTreeMap::new();
    for (deg, dim) in complex.homology()? {
        let dim = dim.expect("full complexes have no indeterminate degrees");
        if dim > 0 {
            out.insert(deg, dim);
        }
    }
    Ok(out)
}

/// Outcome of a `d^2 = 0` sweep.
#[derive(Debug, Clone)]
pub struct D2Report {
    pub k: u32,
    pub l: u32,
    pub max_atoms: Option<usize>,
    pub generators_checked: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Checks `d(d(a_S)) = 0` for every generator of the (possibly bounded)
/// complex, via exact products of adjacent differential matrices.
pub fn verify_d_squared(k: u32, l: u32, max_atoms: Option<usize>) -> Result<D2Report> {
    verify_d_squared_with_ceiling(k, l, max_atoms, DEFAULT_GENERATOR_CEILING)
}

pub fn verify_d_squared_with_ceiling(
    k: u32,
    l: u32,
    max_atoms: Option<usize>,
    ceiling: u64,
) -> Result<D2Report> {
    // Construction already rejects nonzero composites; reaching here means
    // every generator passed.
    let complex = build_complex_with_ceiling(k, l, max_atoms, ceiling)?;
    Ok(D2Report {
        k,
        l,
        max_atoms,
        generators_checked: complex.total_generators(),
        violations: Vec::new(),
        pass: true,
    })
}

/// Outcome of a seeded graded-Leibniz sweep for the cup product.
#[derive(Debug, Clone)]
pub struct CupLeibnizReport {
    pub k: u32,
    pub l: u32,
    pub trials: u32,
    pub seed: u64,
    pub checked: u32,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Samples seeded pairs `(S, T)` and checks
/// `d(a_S a_T) = d(a_S) a_T + (-1)^{deg a_S} a_S d(a_T)` exactly.
/// Violations are reported verbatim rather than failing silently.
pub fn verify_cup_leibniz(k: u32, l: u32, trials: u32, seed: u64) -> Result<CupLeibnizReport> {
    let atoms = atoms_of(k, l)?;
    let n = atoms.len();
    if n >= 64 {
        return Err(Error::ResourceGuard(format!(
            "{n} atoms is beyond the sampling range"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let sample = |rng: &mut ChaCha8Rng| -> AtomSet {
        let mask: u64 = if rng.gen_bool(0.5) {
            rng.gen_range(0..(1u64 << n))
        } else {
            // Small sets produce most of the nonzero products.
            let size = rng.gen_range(0..=3.min(n));
            let mut mask = 0u64;
            while mask.count_ones() < size as u32 {
                mask |= 1 << rng.gen_range(0..n);
            }
            mask
        };
        let selected = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| atoms[i].clone())
            .collect();
        AtomSet::new(selected, l).expect("atoms drawn from atoms_of")
    };
    for _ in 0..trials {
        let s = sample(&mut rng);
        let t = sample(&mut rng);
        let product = cup(&s, &t)?;
        let lhs = differential_chain(&product);
        let sign = if degree(&s) % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let mut rhs = cup_chain(&differential(&s), &ChainElement::term_int(t.clone(), 1))?;
        rhs.add_assign(&cup_chain(&ChainElement::term_int(s.clone(), 1), &differential(&t))?.scaled(&sign));
        if lhs != rhs {
            violations.push(format!(
                "S={s}, T={t}: d(a_S a_T) = {lhs} but Leibniz expansion = {rhs}"
            ));
        }
    }
    Ok(CupLeibnizReport {
        k,
        l,
        trials,
        seed,
        checked: trials,
        pass: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(xs: &[u32]) -> Atom {
        Atom::new(xs.to_vec()).unwrap()
    }

    fn set(atoms: &[&[u32]], ambient: u32) -> AtomSet {
        AtomSet::new(atoms.iter().map(|a| atom(a)).collect(), ambient).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&set(&[&[1, 2, 3]], 6)), 3);
        assert_eq!(degree(&set(&[&[1, 2, 3], &[3, 4, 5]], 5)), 6);
        assert_eq!(degree(&AtomSet::empty(4)), 0);
    }

    #[test]
    fn differential_single_atom_vanishes() {
        assert!(differential(&set(&[&[1, 2]], 3)).is_zero());
    }

    #[test]
    fn differential_triangle_signs() {
        let s = set(&[&[1, 2], &[1, 3], &[2, 3]], 3);
        let d = differential(&s);
        let expect = |a: &AtomSet| d.coeff(a).cloned().map(|r| r.to_integer());
        assert_eq!(
            expect(&set(&[&[1, 3], &[2, 3]], 3)),
            Some((-1).into())
        );
        assert_eq!(expect(&set(&[&[1, 2], &[2, 3]], 3)), Some(1.into()));
        assert_eq!(
            expect(&set(&[&[1, 2], &[1, 3]], 3)),
            Some((-1).into())
        );
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn differential_single_surviving_term() {
        let s = set(&[&[1, 2, 3], &[1, 2, 5], &[1, 3, 4]], 5);
        let d = differential(&s);
        assert_eq!(d.len(), 1);
        let target = set(&[&[1, 2, 5], &[1, 3, 4]], 5);
        assert_eq!(d.coeff(&target).unwrap().to_integer(), (-1).into());
    }

    #[test]
    fn differential_raises_degree_by_one() {
        let s = set(&[&[1, 2], &[1, 3], &[2, 3], &[4, 5]], 5);
        let d = differential(&s);
        assert!(!d.is_zero());
        for (term, _) in d.iter() {
            assert_eq!(degree(term), degree(&s) + 1);
        }
        assert_eq!(homogeneous_degree(&d), Some(degree(&s) + 1));
        assert_eq!(homogeneous_degree(&ChainElement::zero()), Some(0));
    }

    #[test]
    fn generator_carries_its_degree() {
        let g = Generator::new(set(&[&[1, 2, 3], &[3, 4, 5]], 5));
        assert_eq!(g.degree, 6);
        assert_eq!(Generator::new(AtomSet::empty(4)).degree, 0);
    }

    #[test]
    fn homology_dim_degree_two_case() {
        // In A(2,3) at degree 2: middle dimension 3, rank of the incoming
        // differential 1, kernel of the outgoing differential 3, so the
        // homology dimension is 2.
        let c = build_complex(2, 3, None).unwrap();
        let d_out = c.differential_matrix(2);
        let d_in = c.differential_matrix(1);
        assert_eq!(d_out.ncols(), 3);
        assert_eq!(crate::ratlin::rank(&d_in), 1);
        assert_eq!(crate::ratlin::homology_dim(&d_out, &d_in).unwrap(), 2);
    }

    #[test]
    fn cup_examples() {
        let s = set(&[&[1, 2]], 4);
        let t = set(&[&[3, 4]], 4);
        let product = cup(&s, &t).unwrap();
        assert_eq!(
            product.coeff(&set(&[&[1, 2], &[3, 4]], 4)).unwrap().to_integer(),
            1.into()
        );

        assert!(cup(&s, &s).unwrap().is_zero());

        let s = set(&[&[1, 2, 3]], 5);
        let t = set(&[&[3, 4, 5]], 5);
        let product = cup(&s, &t).unwrap();
        assert_eq!(
            product
                .coeff(&set(&[&[1, 2, 3], &[3, 4, 5]], 5))
                .unwrap()
                .to_integer(),
            1.into()
        );
    }

    #[test]
    fn cup_grading_is_additive_when_nonzero() {
        let s = set(&[&[1, 2], &[1, 3]], 6);
        let t = set(&[&[4, 5]], 6);
        let product = cup(&s, &t).unwrap();
        for (u, _) in product.iter() {
            assert_eq!(degree(u), degree(&s) + degree(&t));
        }
    }

    #[test]
    fn cup_reordering_sign_identity() {
        // eps(S,T) + eps(T,S) = |S| * |T| (mod 2) for disjoint S, T.
        let s = set(&[&[1, 2], &[3, 4]], 8);
        let t = set(&[&[1, 3], &[5, 6], &[7, 8]], 8);
        let st = inversion_count_orderable(s.atoms(), t.atoms()).unwrap();
        let ts = inversion_count_orderable(t.atoms(), s.atoms()).unwrap();
        assert_eq!(st + ts, (s.len() * t.len()) as u64);
    }

    #[test]
    fn build_complex_small_counts() {
        let c = build_complex(2, 3, None).unwrap();
        assert_eq!(c.total_generators(), 8);
        assert_eq!(c.generator_count(0), 1);
        assert_eq!(c.generator_count(1), 4);
        assert_eq!(c.generator_count(2), 3);

        let c = build_complex(3, 3, None).unwrap();
        assert_eq!(c.total_generators(), 2);

        let c = build_complex(2, 4, None).unwrap();
        assert_eq!(c.total_generators(), 64);
    }

    #[test]
    fn build_complex_resource_guard() {
        assert!(matches!(
            build_complex(2, 12, None),
            Err(Error::ResourceGuard(_))
        ));
        // A bound brings it back inside the ceiling.
        assert!(build_complex(2, 12, Some(1)).is_ok());
    }

    #[test]
    fn matrix_and_symbolic_differentials_agree() {
        let c = build_complex(2, 4, None).unwrap();
        for deg in c.degrees() {
            let matrix = c.differential_matrix(deg);
            for (col, s) in c.generator_sets(deg).iter().enumerate() {
                let symbolic = differential(s);
                let from_matrix = c.vector_to_chain(deg + 1, &matrix.column(col).unwrap());
                assert_eq!(symbolic, from_matrix, "degree {deg} column {col}");
            }
        }
    }

    #[test]
    fn betti_examples() {
        let b = betti(2, 3).unwrap();
        assert_eq!(b, BTreeMap::from([(0, 1), (1, 3), (2, 2)]));

        let b = betti(3, 3).unwrap();
        assert_eq!(b, BTreeMap::from([(0, 1), (3, 1)]));

        let b = betti(2, 4).unwrap();
        assert_eq!(b, BTreeMap::from([(0, 1), (1, 6), (2, 11), (3, 6)]));
    }

    #[test]
    fn stabilize_examples() {
        let s = set(&[&[1, 2]], 3);
        assert_eq!(stabilize(&s), set(&[&[1, 2, 4]], 4));

        let empty = AtomSet::empty(3);
        assert_eq!(stabilize(&empty), AtomSet::empty(4));

        // The complement family is untouched.
        let s = set(&[&[1, 2]], 3);
        assert_eq!(
            crate::setcore::complement(&stabilize(&s)),
            crate::setcore::complement(&s)
        );
    }

    #[test]
    fn stabilize_preserves_independence() {
        let s = set(&[&[1, 2], &[3, 4]], 5);
        assert!(crate::setcore::is_independent(&s));
        assert!(crate::setcore::is_independent(&stabilize(&s)));

        let dependent = set(&[&[1, 2], &[1, 3], &[2, 3]], 3);
        assert!(!crate::setcore::is_independent(&dependent));
        assert!(!crate::setcore::is_independent(&stabilize(&dependent)));
    }

    #[test]
    fn monoid_product_examples() {
        assert_eq!(
            monoid_product(&[1, 2], 3, &[1, 3], 4).unwrap(),
            vec![1, 2, 4, 6]
        );
        assert_eq!(monoid_product(&[1, 2], 3, &[], 4).unwrap(), vec![1, 2]);
        let product = monoid_product(&[1, 3], 4, &[2, 4], 5).unwrap();
        assert_eq!(product.len(), 4);
        assert!(monoid_product(&[1, 5], 4, &[1], 2).is_err());
    }

    #[test]
    fn verify_d_squared_small() {
        let report = verify_d_squared(2, 4, None).unwrap();
        assert!(report.pass);
        assert_eq!(report.generators_checked, 64);
    }

    #[test]
    fn cup_leibniz_explicit_pair() {
        // S = {{4,5}}, T = the triangle on {1,2,3} in A(2,5): both sides
        // expand to the same three-term chain.
        let s = set(&[&[4, 5]], 5);
        let t = set(&[&[1, 2], &[1, 3], &[2, 3]], 5);
        let product = cup(&s, &t).unwrap();
        let lhs = differential_chain(&product);
        let sign = BigRational::from_integer((-1).into());
        let mut rhs = cup_chain(&differential(&s), &ChainElement::term_int(t.clone(), 1)).unwrap();
        rhs.add_assign(
            &cup_chain(&ChainElement::term_int(s.clone(), 1), &differential(&t))
                .unwrap()
                .scaled(&sign),
        );
        assert!(!lhs.is_zero());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_leibniz_seeded_run() {
        let report = verify_cup_leibniz(2, 4, 100, 0).unwrap();
        assert!(report.pass, "{:?}", report.violations);
    }
}
