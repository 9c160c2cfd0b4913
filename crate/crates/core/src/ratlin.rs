//! Exact rational sparse linear algebra: ranks, kernels, images, quotient
//! dimensions and span membership over the rationals.
//!
//! The public types carry `BigRational` entries. Internally every reduction
//! clears denominators and runs a fraction-free column echelon over `BigInt`
//! with content-gcd normalization, which keeps entry growth tame on the
//! near-incidence matrices the complexes produce. Pivot selection is the
//! leading (smallest) row index of each column and columns are processed in
//! input order, so every result is deterministic across runs and thread
//! counts.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Sorted sparse integer vector: `(index, coefficient)` pairs, no zeros.
type IntVec = Vec<(usize, BigInt)>;

/// A sparse vector with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVector {
    dim: usize,
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn zero(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self> {
        let mut v = SparseVector::zero(dim);
        for (index, value) in entries {
            v.set(index, value)?;
        }
        Ok(v)
    }

    pub fn set(&mut self, index: usize, value: Rational) -> Result<()> {
        if index >= self.dim {
            return Err(Error::DimensionMismatch(format!(
                "index {index} out of range for dimension {}",
                self.dim
            )));
        }
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
        Ok(())
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.entries.get(&index)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(&i, r)| (i, r))
    }

    fn to_int_vec(&self) -> IntVec {
        scale_to_integers(self.entries.iter().map(|(&i, r)| (i, r))).0
    }

    fn from_int_vec(dim: usize, v: &IntVec) -> Self {
        SparseVector {
            dim,
            entries: v
                .iter()
                .map(|(i, c)| (*i, Rational::from_integer(c.clone())))
                .collect(),
        }
    }
}

/// Clears denominators by the (positive) lcm, returning the integer vector
/// and the scale factor so callers can keep combination tracking exact.
fn scale_to_integers<'a>(
    entries: impl Iterator<Item = (usize, &'a Rational)>,
) -> (IntVec, BigInt) {
    let entries: Vec<(usize, &Rational)> = entries.collect();
    let mut lcm = BigInt::one();
    for (_, r) in &entries {
        lcm = lcm.lcm(r.denom());
    }
    let out: IntVec = entries
        .into_iter()
        .map(|(i, r)| (i, r.numer() * (&lcm / r.denom())))
        .collect();
    (out, lcm)
}

/// Divides matrix and companion parts by their common content and fixes the
/// sign so the leading matrix coefficient (or combo coefficient for zero
/// matrix parts) is positive.
fn normalize_content(main: &mut IntVec, combo: &mut IntVec) {
    let mut gcd = BigInt::zero();
    for (_, c) in main.iter().chain(combo.iter()) {
        gcd = gcd.gcd(c);
        if gcd.is_one() {
            break;
        }
    }
    if gcd.is_zero() || gcd.is_one() {
        // Still normalize sign below when gcd is one.
    } else {
        for (_, c) in main.iter_mut().chain(combo.iter_mut()) {
            *c = &*c / &gcd;
        }
    }
    let lead_negative = main
        .first()
        .or(combo.first())
        .is_some_and(|(_, c)| c.is_negative());
    if lead_negative {
        for (_, c) in main.iter_mut().chain(combo.iter_mut()) {
            *c = -c.clone();
        }
    }
}

/// `a*x + b*y` over sorted sparse integer vectors.
fn axpy(a: &BigInt, x: &IntVec, b: &BigInt, y: &IntVec) -> IntVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((y[j].0, b * &y[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = a * &x[i].1 + b * &y[j].1;
                if !c.is_zero() {
                    out.push((x[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    for (idx, c) in &x[i..] {
        out.push((*idx, a * c));
    }
    for (idx, c) in &y[j..] {
        out.push((*idx, b * c));
    }
    out
}

/// Incremental column echelon with an optional combination tracker.
/// Each installed column has a unique leading (smallest) row index.
struct ColumnEchelon {
    pivots: HashMap<usize, usize>,
    columns: Vec<(IntVec, IntVec)>,
}

impl ColumnEchelon {
    fn new() -> Self {
        ColumnEchelon {
            pivots: HashMap::new(),
            columns: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.columns.len()
    }

    /// Reduces `(main, combo)` against the installed columns. Returns the
    /// residual pair; a zero main part means the input was in the span.
    fn reduce(&self, mut main: IntVec, mut combo: IntVec) -> (IntVec, IntVec) {
        while let Some((lead, coeff)) = main.first().cloned() {
            let Some(&at) = self.pivots.get(&lead) else {
                break;
            };
            let (piv_main, piv_combo) = &self.columns[at];
            let piv_coeff = piv_main[0].1.clone();
            main = axpy(&piv_coeff, &main, &(-&coeff), piv_main);
            combo = axpy(&piv_coeff, &combo, &(-&coeff), piv_combo);
            normalize_content(&mut main, &mut combo);
        }
        (main, combo)
    }

    /// Reduces and installs if independent. Returns the reduced pair and
    /// whether a new pivot was created.
    fn insert(&mut self, main: IntVec, combo: IntVec) -> (bool, IntVec) {
        let (mut main, mut combo) = self.reduce(main, combo);
        if main.is_empty() {
            return (false, combo);
        }
        normalize_content(&mut main, &mut combo);
        let lead = main[0].0;
        self.pivots.insert(lead, self.columns.len());
        self.columns.push((main, combo));
        (true, Vec::new())
    }
}

/// A sparse matrix with exact rational entries; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rational::one());
        }
        m
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut m = SparseMatrix::zero(nrows, ncols);
        for (r, c, v) in triplets {
            m.set(r, c, v)?;
        }
        Ok(m)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) -> Result<()> {
        if row >= self.nrows || col >= self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "entry ({row},{col}) out of range for {}x{}",
                self.nrows, self.ncols
            )));
        }
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Rational> {
        self.entries.get(&(row, col))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            entries.insert((c, r), v.clone());
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            entries,
        }
    }

    /// Integer-scaled columns in index order, each with its scale factor.
    fn int_columns(&self) -> Vec<(IntVec, BigInt)> {
        let mut rational_cols: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); self.ncols];
        for (&(r, c), v) in &self.entries {
            rational_cols[c].push((r, v));
        }
        rational_cols
            .into_iter()
            .map(|col| {
                let (mut v, scale) = scale_to_integers(col.into_iter());
                v.sort_by_key(|&(i, _)| i);
                (v, scale)
            })
            .collect()
    }

    pub fn column(&self, col: usize) -> Result<SparseVector> {
        if col >= self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "column {col} out of range for {} columns",
                self.ncols
            )));
        }
        let entries = self
            .entries
            .range((0, col)..(self.nrows, col + 1))
            .filter(|(&(_, c), _)| c == col)
            .map(|(&(r, _), v)| (r, v.clone()));
        SparseVector::from_entries(self.nrows, entries)
    }

    /// `self * rhs` as a sparse product.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        // Column-major walk over the left factor.
        let mut left_cols: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); self.ncols];
        for (&(r, c), v) in &self.entries {
            left_cols[c].push((r, v));
        }
        let mut out = SparseMatrix::zero(self.nrows, rhs.ncols);
        for (&(mid, c), v) in &rhs.entries {
            for (r, left) in &left_cols[mid] {
                let product = *left * v;
                match out.entries.entry((*r, c)) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(product);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        let sum = slot.get() + product;
                        if sum.is_zero() {
                            slot.remove();
                        } else {
                            *slot.get_mut() = sum;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A list of linearly independent sparse rational vectors of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSpaceBasis {
    dim: usize,
    vectors: Vec<SparseVector>,
}

impl VectorSpaceBasis {
    /// Builds a basis, verifying the vectors are independent.
    pub fn new(vectors: Vec<SparseVector>, dim: usize) -> Result<Self> {
        let mut echelon = ColumnEchelon::new();
        for (index, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector {index} has dimension {} in a basis of dimension {dim}",
                    v.dim()
                )));
            }
            let (installed, _) = echelon.insert(v.to_int_vec(), Vec::new());
            if !installed {
                return Err(Error::malformed(
                    "vector space basis",
                    format!("vector {index} depends on earlier vectors"),
                ));
            }
        }
        Ok(VectorSpaceBasis { dim, vectors })
    }

    pub fn empty(dim: usize) -> Self {
        VectorSpaceBasis {
            dim,
            vectors: Vec::new(),
        }
    }

    /// Construction for vectors known independent (echelon outputs).
    fn from_independent(vectors: Vec<SparseVector>, dim: usize) -> Self {
        VectorSpaceBasis { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    fn echelon(&self) -> ColumnEchelon {
        let mut echelon = ColumnEchelon::new();
        for v in &self.vectors {
            echelon.insert(v.to_int_vec(), Vec::new());
        }
        echelon
    }
}

/// The rank of `M` over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut echelon = ColumnEchelon::new();
    for (col, _) in m.int_columns() {
        echelon.insert(col, Vec::new());
    }
    echelon.rank()
}

/// A basis of the null space of `M`; its size is `ncols - rank`.
pub fn kernel_basis(m: &SparseMatrix) -> VectorSpaceBasis {
    let mut echelon = ColumnEchelon::new();
    let mut kernel = Vec::new();
    for (j, (col, scale)) in m.int_columns().into_iter().enumerate() {
        // The tracked combination must reproduce the scaled column exactly.
        let combo = vec![(j, scale)];
        let (installed, residual_combo) = echelon.insert(col, combo);
        if !installed {
            kernel.push(SparseVector::from_int_vec(m.ncols(), &residual_combo));
        }
    }
    VectorSpaceBasis::from_independent(kernel, m.ncols())
}

/// A basis of the column space of `M`: the original columns that create
/// pivots, in column order.
pub fn image_basis(m: &SparseMatrix) -> VectorSpaceBasis {
    let mut echelon = ColumnEchelon::new();
    let mut image = Vec::new();
    for (j, (col, _)) in m.int_columns().into_iter().enumerate() {
        let (installed, _) = echelon.insert(col, Vec::new());
        if installed {
            image.push(m.column(j).expect("column index in range"));
        }
    }
    VectorSpaceBasis::from_independent(image, m.nrows())
}

/// `dim ker(d_out) - rank(d_in)` for a composable pair: `d_in` maps into the
/// middle space, `d_out` maps out of it. Rejects pairs whose composition is
/// nonzero, which signals a differential bug upstream.
pub fn homology_dim(d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<usize> {
    if d_out.ncols() != d_in.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "middle space {} vs {}",
            d_out.ncols(),
            d_in.nrows()
        )));
    }
    let composite = d_out.mul(d_in)?;
    if !composite.is_zero() {
        return Err(Error::NonzeroComposition(format!(
            "{} nonzero entries in the composite",
            composite.nnz()
        )));
    }
    let cycles = d_out.ncols() - rank(d_out);
    let boundaries = rank(d_in);
    Ok(cycles - boundaries)
}

/// True iff `v` lies in the span of `basis`.
pub fn in_span(v: &SparseVector, basis: &VectorSpaceBasis) -> Result<bool> {
    if v.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector dimension {} vs basis dimension {}",
            v.dim(),
            basis.dim()
        )));
    }
    let echelon = basis.echelon();
    let (residual, _) = echelon.reduce(v.to_int_vec(), Vec::new());
    Ok(residual.is_empty())
}

/// A basis of the span of an arbitrary (possibly dependent) vector list:
/// the greedy independent subset in input order.
pub fn span_basis<'a>(
    vectors: impl IntoIterator<Item = &'a SparseVector>,
    dim: usize,
) -> Result<VectorSpaceBasis> {
    let mut echelon = ColumnEchelon::new();
    let mut kept = Vec::new();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "vector dimension {} vs span dimension {dim}",
                v.dim()
            )));
        }
        let (installed, _) = echelon.insert(v.to_int_vec(), Vec::new());
        if installed {
            kept.push(v.clone());
        }
    }
    Ok(VectorSpaceBasis::from_independent(kept, dim))
}

/// Representatives completing `boundaries` to a basis of `cycles`: the
/// cycle vectors (in input order) that are independent modulo the
/// boundaries. Requires `boundaries` to lie inside the span of `cycles`.
pub fn quotient_representatives(
    cycles: &VectorSpaceBasis,
    boundaries: &VectorSpaceBasis,
) -> Result<VectorSpaceBasis> {
    if cycles.dim() != boundaries.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cycles dimension {} vs boundaries dimension {}",
            cycles.dim(),
            boundaries.dim()
        )));
    }
    let cycle_echelon = cycles.echelon();
    for (index, b) in boundaries.vectors().iter().enumerate() {
        let (residual, _) = cycle_echelon.reduce(b.to_int_vec(), Vec::new());
        if !residual.is_empty() {
            return Err(Error::BoundaryOutsideCycles { index });
        }
    }
    let mut echelon = boundaries.echelon();
    let mut representatives = Vec::new();
    for v in cycles.vectors() {
        let (installed, _) = echelon.insert(v.to_int_vec(), Vec::new());
        if installed {
            representatives.push(v.clone());
        }
    }
    Ok(VectorSpaceBasis::from_independent(
        representatives,
        cycles.dim(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn matrix(nrows: usize, ncols: usize, triplets: &[(usize, usize, i64)]) -> SparseMatrix {
        SparseMatrix::from_triplets(
            nrows,
            ncols,
            triplets.iter().map(|&(r, c, v)| (r, c, rat(v))),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zero(3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(4)), 4);
        let proportional = matrix(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(rank(&proportional), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());

        let m = matrix(1, 2, &[(0, 0, 1), (0, 1, -1)]);
        let kernel = kernel_basis(&m);
        assert_eq!(kernel.len(), 1);
        let v = &kernel.vectors()[0];
        assert_eq!(v.get(0), v.get(1));
        assert!(!v.is_zero());

        let proportional = matrix(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        let kernel = kernel_basis(&proportional);
        assert_eq!(kernel.len(), 1);
        let v = &kernel.vectors()[0];
        // Proportional to (2, -1).
        assert_eq!(v.get(0).unwrap() * rat(-1), v.get(1).unwrap() * rat(2));
    }

    #[test]
    fn image_examples() {
        assert!(image_basis(&SparseMatrix::zero(3, 2)).is_empty());
        assert_eq!(image_basis(&SparseMatrix::identity(3)).len(), 3);
        let column = matrix(2, 1, &[(0, 0, 1), (1, 0, 1)]);
        let image = image_basis(&column);
        assert_eq!(image.len(), 1);
        assert_eq!(image.vectors()[0].get(0), image.vectors()[0].get(1));
    }

    #[test]
    fn homology_dim_examples() {
        // Zero maps around a 5-dimensional middle space.
        let d_in = SparseMatrix::zero(5, 2);
        let d_out = SparseMatrix::zero(3, 5);
        assert_eq!(homology_dim(&d_out, &d_in).unwrap(), 5);

        // Exact pair: image of d_in equals kernel of d_out.
        let d_in = matrix(2, 1, &[(0, 0, 1), (1, 0, 1)]);
        let d_out = matrix(1, 2, &[(0, 0, 1), (0, 1, -1)]);
        assert_eq!(homology_dim(&d_out, &d_in).unwrap(), 0);

        // Non-composing pair is rejected.
        let d_in = matrix(2, 1, &[(0, 0, 1)]);
        let d_out = matrix(1, 2, &[(0, 0, 1)]);
        assert!(matches!(
            homology_dim(&d_out, &d_in),
            Err(Error::NonzeroComposition(_))
        ));
    }

    #[test]
    fn in_span_examples() {
        let basis = VectorSpaceBasis::new(
            vec![SparseVector::from_entries(2, [(1, rat(1))]).unwrap()],
            2,
        )
        .unwrap();
        assert!(in_span(&SparseVector::zero(2), &basis).unwrap());
        let e0 = SparseVector::from_entries(2, [(0, rat(1))]).unwrap();
        assert!(!in_span(&e0, &basis).unwrap());

        let ones = VectorSpaceBasis::new(
            vec![SparseVector::from_entries(2, [(0, rat(1)), (1, rat(1))]).unwrap()],
            2,
        )
        .unwrap();
        let twos = SparseVector::from_entries(2, [(0, rat(2)), (1, rat(2))]).unwrap();
        assert!(in_span(&twos, &ones).unwrap());
    }

    #[test]
    fn quotient_examples() {
        let e0 = SparseVector::from_entries(2, [(0, rat(1))]).unwrap();
        let e1 = SparseVector::from_entries(2, [(1, rat(1))]).unwrap();
        let diag = SparseVector::from_entries(2, [(0, rat(1)), (1, rat(1))]).unwrap();
        let cycles = VectorSpaceBasis::new(vec![e0.clone(), e1.clone()], 2).unwrap();

        let reps = quotient_representatives(&cycles, &VectorSpaceBasis::empty(2)).unwrap();
        assert_eq!(reps.len(), 2);

        let all = VectorSpaceBasis::new(vec![e0.clone(), e1.clone()], 2).unwrap();
        assert!(quotient_representatives(&cycles, &all).unwrap().is_empty());

        let boundaries = VectorSpaceBasis::new(vec![diag], 2).unwrap();
        let reps = quotient_representatives(&cycles, &boundaries).unwrap();
        assert_eq!(reps.len(), 1);

        let outside = VectorSpaceBasis::new(
            vec![SparseVector::from_entries(3, [(2, rat(1))]).unwrap()],
            3,
        )
        .unwrap();
        assert!(quotient_representatives(&outside, &boundaries).is_err());
    }

    #[test]
    fn rational_entries_are_cleared_exactly() {
        let mut m = SparseMatrix::zero(2, 2);
        m.set(0, 0, Rational::new(1.into(), 3.into())).unwrap();
        m.set(1, 0, Rational::new(1.into(), 6.into())).unwrap();
        m.set(0, 1, Rational::new(2.into(), 3.into())).unwrap();
        m.set(1, 1, Rational::new(1.into(), 3.into())).unwrap();
        // Second column is twice the first.
        assert_eq!(rank(&m), 1);
        assert_eq!(kernel_basis(&m).len(), 1);
    }

    #[test]
    fn basis_construction_rejects_dependence() {
        let e0 = SparseVector::from_entries(2, [(0, rat(1))]).unwrap();
        let e0_scaled = SparseVector::from_entries(2, [(0, rat(7))]).unwrap();
        assert!(VectorSpaceBasis::new(vec![e0, e0_scaled], 2).is_err());
    }

    #[test]
    fn transpose_preserves_rank() {
        let m = matrix(
            3,
            4,
            &[(0, 0, 1), (0, 1, 2), (1, 1, 3), (2, 3, -5), (2, 0, 4)],
        );
        assert_eq!(rank(&m), rank(&m.transpose()));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
            (1usize..7, 1usize..7).prop_flat_map(|(nrows, ncols)| {
                proptest::collection::vec(
                    ((0..nrows, 0..ncols), -4i64..=4),
                    0..=(nrows * ncols),
                )
                .prop_map(move |entries| {
                    let mut m = SparseMatrix::zero(nrows, ncols);
                    for ((r, c), v) in entries {
                        m.set(r, c, rat(v)).unwrap();
                    }
                    m
                })
            })
        }

        proptest! {
            #[test]
            fn rank_nullity(m in arb_matrix()) {
                prop_assert_eq!(rank(&m) + kernel_basis(&m).len(), m.ncols());
            }

            #[test]
            fn rank_transpose(m in arb_matrix()) {
                prop_assert_eq!(rank(&m), rank(&m.transpose()));
            }

            #[test]
            fn kernel_vectors_annihilate(m in arb_matrix()) {
                for v in kernel_basis(&m).vectors() {
                    let mut image: Vec<Rational> = vec![Rational::from_integer(0.into()); m.nrows()];
                    for (col, coeff) in v.iter() {
                        for (row, cv) in m.column(col).unwrap().iter() {
                            image[row] += cv * coeff;
                        }
                    }
                    prop_assert!(image.iter().all(num::Zero::is_zero));
                }
            }
        }
    }
}
