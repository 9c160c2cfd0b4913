//! Formal rational linear combinations of generator indices.

use std::collections::BTreeMap;

use num::{BigRational, Signed, Zero};

/// A finite map from generator indices to nonzero rational coefficients.
/// Zero coefficients are never stored, so equality of values is equality of
/// formal combinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum<I: Ord> {
    terms: BTreeMap<I, BigRational>,
}

impl<I: Ord> Default for FormalSum<I> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<I: Ord> FormalSum<I> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(index: I, coeff: BigRational) -> Self {
        let mut sum = Self::zero();
        sum.add_term(index, coeff);
        sum
    }

    /// A single term with integer coefficient; `0` gives the zero sum.
    pub fn term_int(index: I, coeff: i64) -> Self {
        Self::term(index, BigRational::from_integer(coeff.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: &I) -> Option<&BigRational> {
        self.terms.get(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&I, &BigRational)> {
        self.terms.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = &I> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> BTreeMap<I, BigRational> {
        self.terms
    }

    /// Adds `coeff * index` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, index: I, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self)
    where
        I: Clone,
    {
        for (index, coeff) in &other.terms {
            self.add_term(index.clone(), coeff.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self)
    where
        I: Clone,
    {
        for (index, coeff) in &other.terms {
            self.add_term(index.clone(), -coeff.clone());
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Self
    where
        I: Clone,
    {
        if factor.is_zero() {
            return Self::zero();
        }
        FormalSum {
            terms: self
                .terms
                .iter()
                .map(|(index, coeff)| (index.clone(), coeff * factor))
                .collect(),
        }
    }

    pub fn negated(&self) -> Self
    where
        I: Clone,
    {
        FormalSum {
            terms: self
                .terms
                .iter()
                .map(|(index, coeff)| (index.clone(), -coeff.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every index, summing collisions.
    pub fn map_indices<J: Ord>(&self, mut f: impl FnMut(&I) -> J) -> FormalSum<J>
    where
        I: Clone,
    {
        let mut out = FormalSum::zero();
        for (index, coeff) in &self.terms {
            out.add_term(f(index), coeff.clone());
        }
        out
    }

    /// Linear extension of a generator-level map `f` (indices to sums).
    pub fn flat_map(&self, mut f: impl FnMut(&I) -> FormalSum<I>) -> FormalSum<I>
    where
        I: Clone,
    {
        let mut out = FormalSum::zero();
        for (index, coeff) in &self.terms {
            for (target, inner) in f(index).terms {
                out.add_term(target, inner * coeff);
            }
        }
        out
    }
}

impl<I: Ord + Clone> std::ops::Add for FormalSum<I> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign(&rhs);
        self
    }
}

impl<I: Ord + Clone> std::ops::Sub for FormalSum<I> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.sub_assign(&rhs);
        self
    }
}

impl<I: Ord + Clone> std::ops::Neg for FormalSum<I> {
    type Output = Self;
    fn neg(self) -> Self {
        self.negated()
    }
}

impl<I: Ord + std::fmt::Display> std::fmt::Display for FormalSum<I> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (index, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            let magnitude = coeff.abs();
            if pos == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if magnitude != BigRational::from_integer(1.into()) {
                write!(f, "{magnitude}*")?;
            }
            write!(f, "{index}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancelling_terms_vanish() {
        let mut sum = FormalSum::term_int("x", 2);
        sum.add_term("x", BigRational::from_integer((-2).into()));
        assert!(sum.is_zero());
    }

    #[test]
    fn display_renders_signs() {
        let mut sum = FormalSum::term_int("a", -1);
        sum.add_term("b", BigRational::from_integer(1.into()));
        assert_eq!(sum.to_string(), "-a + b");
        assert_eq!(FormalSum::<&str>::zero().to_string(), "0");
    }

    #[test]
    fn flat_map_is_linear() {
        let sum = FormalSum::term_int(1u32, 3) + FormalSum::term_int(2u32, -1);
        let doubled = sum.flat_map(|&i| FormalSum::term_int(i, 2));
        assert_eq!(doubled.coeff(&1).unwrap(), &BigRational::from_integer(6.into()));
        assert_eq!(doubled.coeff(&2).unwrap(), &BigRational::from_integer((-2).into()));
    }
}
