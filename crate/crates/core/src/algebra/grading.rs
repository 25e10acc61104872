//! Scale-separation grading of the two-letter expansion.
//!
//! The fast-subsystem generator B is the sum of a drift part X and a fast
//! force part V, where V carries the large prefactor 1/eps^2; the slow kick
//! A is renamed F. Expanding every B produces a series over `{X, V, F}` in
//! which the eps-exponent of a word is `-2 * (number of V letters)`.
//!
//! V and F commute (both only differentiate with respect to velocities), so
//! within any maximal block of letters drawn from `{V, F}` a word can be
//! rewritten to the canonical form with all V letters first. Cancellations
//! that happen under this rewrite are exactly what lowers the apparent
//! eps-order of a combination.

use super::series::WordSeries;
use super::word::{Ab, Word, Xvf};
use crate::scalar::Scalar;

/// eps-exponent of a graded word: each V letter contributes one factor of
/// 1/eps^2.
pub fn epsilon_exponent(word: &Word<Xvf>) -> i32 {
    -2 * word.letters().iter().filter(|&&l| l == Xvf::V).count() as i32
}

/// Substitutes B -> X + V and A -> F in every word, producing the graded
/// series over `{X, V, F}`.
pub fn graded_expand<C: Scalar>(series: &WordSeries<Ab, C>) -> WordSeries<Xvf, C> {
    let mut out = WordSeries::zero(series.order());
    for (w, coeff) in series.terms() {
        // Every B independently becomes X or V.
        let b_positions: Vec<usize> = w
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Ab::B)
            .map(|(i, _)| i)
            .collect();
        let choices = 1usize << b_positions.len();
        for mask in 0..choices {
            let expanded = Word::from_letters(w.letters().iter().enumerate().map(|(i, &l)| {
                match l {
                    Ab::A => Xvf::F,
                    Ab::B => {
                        let slot = b_positions.iter().position(|&p| p == i).unwrap();
                        if mask & (1 << slot) != 0 {
                            Xvf::V
                        } else {
                            Xvf::X
                        }
                    }
                }
            }));
            out.add_term(expanded, coeff.clone());
        }
    }
    out
}

/// The part of a graded series with the given eps-exponent.
pub fn epsilon_component<C: Scalar>(
    series: &WordSeries<Xvf, C>,
    exponent: i32,
) -> WordSeries<Xvf, C> {
    let mut out = WordSeries::zero(series.order());
    for (w, c) in series.terms() {
        if epsilon_exponent(w) == exponent {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

fn canonical_word(word: &Word<Xvf>) -> Word<Xvf> {
    let mut letters = Vec::with_capacity(word.len());
    let mut v_run = 0usize;
    let mut f_run = 0usize;
    let flush = |letters: &mut Vec<Xvf>, v_run: &mut usize, f_run: &mut usize| {
        letters.extend(std::iter::repeat_n(Xvf::V, *v_run));
        letters.extend(std::iter::repeat_n(Xvf::F, *f_run));
        *v_run = 0;
        *f_run = 0;
    };
    for &l in word.letters() {
        match l {
            Xvf::V => v_run += 1,
            Xvf::F => f_run += 1,
            Xvf::X => {
                flush(&mut letters, &mut v_run, &mut f_run);
                letters.push(Xvf::X);
            }
        }
    }
    flush(&mut letters, &mut v_run, &mut f_run);
    Word::from_letters(letters)
}

/// Canonical form under the commutation rule FV -> VF: within every maximal
/// block of letters from `{V, F}`, all V letters precede all F letters.
/// Like words are merged and exact zeros pruned.
pub fn normalize_commuting<C: Scalar>(series: &WordSeries<Xvf, C>) -> WordSeries<Xvf, C> {
    let mut out = WordSeries::zero(series.order());
    for (w, c) in series.terms() {
        out.add_term(canonical_word(w), c.clone());
    }
    out
}

/// Formal eps-order of a two-letter combination: the series is graded,
/// normalized, and the most negative eps-exponent with a surviving term is
/// returned. `O(eps^e)` is reported as `e`; a series that cancels entirely
/// is reported as [`EpsilonOrder::Vanishes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonOrder {
    /// The graded series normalizes to zero: the combination vanishes
    /// identically for generic forces.
    Vanishes,
    /// Leading behavior `O(eps^exponent)` with `exponent <= 0`.
    Order(i32),
}

pub fn epsilon_order<C: Scalar>(series: &WordSeries<Ab, C>) -> EpsilonOrder {
    let normalized = normalize_commuting(&graded_expand(series));
    normalized
        .terms()
        .map(|(w, _)| epsilon_exponent(w))
        .min()
        .map_or(EpsilonOrder::Vanishes, EpsilonOrder::Order)
}
