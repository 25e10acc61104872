//! Truncated series over words of noncommuting symbols.
//!
//! A `WordSeries` is a finite linear combination of words with coefficients
//! in a [`Scalar`] domain, truncated at a maximum word length `order`.
//! Multiplication concatenates words and silently drops products longer than
//! the truncation order, so a series of truncation order `n` represents an
//! operator modulo terms of order `n + 1` in the step size (the step-size
//! power of a term equals its word length; step-size factors are folded into
//! the letter coefficients).

use super::word::{Letter, Word};
use super::AlgebraError;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct WordSeries<L: Letter, C: Scalar> {
    order: usize,
    terms: BTreeMap<Word<L>, C>,
}

impl<L: Letter, C: Scalar> WordSeries<L, C> {
    pub fn zero(order: usize) -> Self {
        WordSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator: coefficient 1 on the empty word.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(Word::empty(), C::one());
        s
    }

    pub fn from_single(letter: L, coeff: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.add_term(Word::single(letter), coeff);
        s
    }

    pub fn from_terms(
        order: usize,
        terms: impl IntoIterator<Item = (Word<L>, C)>,
    ) -> Self {
        let mut s = Self::zero(order);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `word`, zero if absent.
    pub fn coefficient(&self, word: &Word<L>) -> C {
        self.terms.get(word).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&Word::empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word<L>, &C)> {
        self.terms.iter()
    }

    /// Adds `coeff * word`, pruning the entry if the sum is exactly zero.
    /// Words longer than the truncation order are dropped.
    pub fn add_term(&mut self, word: Word<L>, coeff: C) {
        if word.len() > self.order || coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order, "series truncation orders differ");
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c.clone())
    }

    pub fn scale(&self, factor: &C) -> Self {
        if factor.is_zero() {
            return Self::zero(self.order);
        }
        self.map_coefficients(|c| c.clone() * factor.clone())
    }

    fn map_coefficients(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Truncating product: concatenates words, drops products longer than
    /// the truncation order.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order, "series truncation orders differ");
        let mut out = Self::zero(self.order);
        for (wl, cl) in self.terms() {
            if wl.len() > self.order {
                continue;
            }
            for (wr, cr) in rhs.terms() {
                if wl.len() + wr.len() > self.order {
                    continue;
                }
                out.add_term(wl.concat(wr), cl.clone() * cr.clone());
            }
        }
        out
    }

    /// Exponential of a series with zero constant term:
    /// `sum_{j=0..order} self^j / j!`, truncated at the series order.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.constant_term().is_zero() {
            return Err(AlgebraError::NonzeroConstantTerm);
        }
        let mut result = Self::identity(self.order);
        let mut power = Self::identity(self.order);
        for j in 1..=self.order {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            power = power.scale(&C::from_ratio(1, j as i64));
            result = result.add(&power);
        }
        Ok(result)
    }

    /// Inverse of a series with unit constant term, by the Neumann series
    /// `(I + N)^{-1} = I - N + N^2 - ...` truncated at the series order.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.constant_term() != C::one() {
            return Err(AlgebraError::NonunitConstantTerm);
        }
        let nilpotent = self.sub(&Self::identity(self.order));
        let mut result = Self::identity(self.order);
        let mut power = Self::identity(self.order);
        for _ in 1..=self.order {
            power = power.mul(&nilpotent).neg();
            if power.is_zero() {
                break;
            }
            result = result.add(&power);
        }
        Ok(result)
    }

    /// The sub-series of words of exactly the given length.
    pub fn part_of_length(&self, len: usize) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in self.terms() {
            if w.len() == len {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Negates the coefficients of odd-length words; this is the effect of
    /// flipping the sign of the step size when each letter carries one
    /// step-size factor.
    pub fn alternate_signs(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (w, c) in self.terms() {
            let c = if w.len() % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(w.clone(), c);
        }
        out
    }

    /// Re-truncates to a (possibly smaller) order.
    pub fn truncated(&self, order: usize) -> Self {
        let mut out = Self::zero(order);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// Largest absolute coefficient value, seen as f64. Zero for the empty
    /// series.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
    }

    /// Inner product of coefficient vectors over the common word support.
    pub fn dot(&self, rhs: &Self) -> C {
        let mut acc = C::zero();
        for (w, c) in self.terms() {
            let other = rhs.coefficient(w);
            if !other.is_zero() {
                acc = acc + c.clone() * other;
            }
        }
        acc
    }

    pub fn map_scalar<D: Scalar>(&self, f: impl Fn(&C) -> D) -> WordSeries<L, D> {
        let mut out = WordSeries::zero(self.order);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl<L: Letter> WordSeries<L, num_rational::BigRational> {
    /// Double-precision view of an exact series.
    pub fn to_f64(&self) -> WordSeries<L, f64> {
        self.map_scalar(|c| c.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::word::{word, Ab};
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn letter(l: Ab, order: usize) -> WordSeries<Ab, BigRational> {
        WordSeries::from_single(l, ratio(1, 1), order)
    }

    #[test]
    fn multiplication_concatenates_and_truncates() {
        let a = letter(Ab::A, 2);
        let b = letter(Ab::B, 2);
        let ab = a.mul(&b);
        assert_eq!(ab.coefficient(&word("AB")), ratio(1, 1));
        // Truncation drops the length-3 product.
        let abb = ab.mul(&b);
        assert!(abb.is_zero());
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let zero: WordSeries<Ab, BigRational> = WordSeries::zero(4);
        assert_eq!(zero.exp().unwrap(), WordSeries::identity(4));
    }

    #[test]
    fn exp_of_scaled_letter() {
        // exp(cA) at order 2 = 1 + cA + (c^2/2) AA
        let c = ratio(3, 2);
        let s = WordSeries::from_single(Ab::A, c.clone(), 2);
        let e = s.exp().unwrap();
        assert_eq!(e.coefficient(&Word::empty()), ratio(1, 1));
        assert_eq!(e.coefficient(&word("A")), c.clone());
        assert_eq!(e.coefficient(&word("AA")), c.clone() * c / ratio(2, 1));
    }

    #[test]
    fn exp_of_sum_mixed_word_coefficient() {
        // coefficient of AB in exp(A + B) at order 3 is 1/2, from (A+B)^2/2
        let s = letter(Ab::A, 3).add(&letter(Ab::B, 3));
        let e = s.exp().unwrap();
        assert_eq!(e.coefficient(&word("AB")), ratio(1, 2));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = WordSeries::<Ab, BigRational>::identity(3);
        assert!(matches!(s.exp(), Err(AlgebraError::NonzeroConstantTerm)));
    }

    #[test]
    fn inverse_of_near_identity() {
        let s = WordSeries::identity(3).add(&letter(Ab::A, 3));
        let inv = s.inverse().unwrap();
        assert_eq!(s.mul(&inv), WordSeries::identity(3));
        assert_eq!(inv.mul(&s), WordSeries::identity(3));
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let mut s: WordSeries<Ab, BigRational> = WordSeries::zero(2);
        s.add_term(word("AB"), ratio(1, 3));
        s.add_term(word("AB"), ratio(-1, 3));
        assert!(s.is_zero());
        assert_eq!(s.num_terms(), 0);
    }
}
