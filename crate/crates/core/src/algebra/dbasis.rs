//! The reference commutator combinations spanning the low-order error terms.
//!
//! With A the slow-kick generator and B the fast-subsystem generator, the
//! length-3 part of any consistent splitting remainder lies in the span of
//!
//! ```text
//! D31 = BBA - 2 BAB + ABB   (= [[A,B],B])
//! D32 = BAA - 2 ABA + AAB   (= [A,[A,B]])
//! ```
//!
//! and the length-4 part decomposes over
//!
//! ```text
//! D41 = BBBA - ABBB + 3 BABB - 3 BBAB   (= [B,[[A,B],B]])
//! D42 = AABB - BBAA + 2 BABA - 2 ABAB   (= [A,[[A,B],B]])
//! D43 = BAAA - AAAB + 3 AABA - 3 ABAA   (= [[A,[A,B]],A])
//! ```
//!
//! plus, for schemes whose length-2 term does not vanish, a non-Lie square
//! of the length-2 commutator; the projection below reports that part as a
//! residual. The length-2 term itself is a multiple of `D21 = AB - BA`.

use super::series::WordSeries;
use super::word::{word, Ab};
use crate::scalar::Scalar;

fn combination<C: Scalar>(order: usize, terms: &[(i64, &str)]) -> WordSeries<Ab, C> {
    WordSeries::from_terms(
        order,
        terms
            .iter()
            .map(|&(k, w)| (word::<Ab>(w), C::from_int(k))),
    )
}

pub fn d21<C: Scalar>(order: usize) -> WordSeries<Ab, C> {
    combination(order, &[(1, "AB"), (-1, "BA")])
}

pub fn d31<C: Scalar>(order: usize) -> WordSeries<Ab, C> {
    combination(order, &[(1, "BBA"), (-2, "BAB"), (1, "ABB")])
}

pub fn d32<C: Scalar>(order: usize) -> WordSeries<Ab, C> {
    combination(order, &[(1, "BAA"), (-2, "ABA"), (1, "AAB")])
}

pub fn d41<C: Scalar>(order: usize) -> WordSeries<Ab, C> {
    combination(order, &[(1, "BBBA"), (-1, "ABBB"), (3, "BABB"), (-3, "BBAB")])
}

pub fn d42<C: Scalar>(order: usize) -> WordSeries<Ab, C> {
    combination(order, &[(1, "AABB"), (-1, "BBAA"), (2, "BABA"), (-2, "ABAB")])
}

pub fn d43<C: Scalar>(order: usize) -> WordSeries<Ab, C> {
    combination(order, &[(1, "BAAA"), (-1, "AAAB"), (3, "AABA"), (-3, "ABAA")])
}

/// The length-3 basis `[D31, D32]`.
pub fn order3_basis<C: Scalar>(order: usize) -> Vec<WordSeries<Ab, C>> {
    vec![d31(order), d32(order)]
}

/// The length-4 basis `[D41, D42, D43]`.
pub fn order4_basis<C: Scalar>(order: usize) -> Vec<WordSeries<Ab, C>> {
    vec![d41(order), d42(order), d43(order)]
}

/// Result of a least-squares projection onto a D-basis: the basis
/// coefficients and whatever part of the input they do not account for.
#[derive(Debug, Clone)]
pub struct Projection<C: Scalar> {
    pub coefficients: Vec<C>,
    pub residual: WordSeries<Ab, C>,
}

impl<C: Scalar> Projection<C> {
    /// Euclidean norm of the residual coefficient vector, as f64.
    pub fn residual_norm(&self) -> f64 {
        let sum_of_squares: f64 = self
            .residual
            .terms()
            .map(|(_, c)| {
                let v = c.to_f64();
                v * v
            })
            .sum();
        // An empty sum is -0.0; keep the norm a plain zero.
        (sum_of_squares + 0.0).sqrt()
    }
}

/// Least-squares projection of `part` onto the span of `basis`, over word
/// coefficients. Solves the (tiny) normal equations by Gaussian elimination
/// in the coefficient domain, so the result is exact in rational mode.
pub fn project<C: Scalar>(part: &WordSeries<Ab, C>, basis: &[WordSeries<Ab, C>]) -> Projection<C> {
    let n = basis.len();
    let mut gram = vec![vec![C::zero(); n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = basis[i].dot(&basis[j]);
        }
        gram[i][n] = basis[i].dot(part);
    }

    // Gaussian elimination with partial (f64-magnitude) pivoting.
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                gram[a][col]
                    .abs_f64()
                    .partial_cmp(&gram[b][col].abs_f64())
                    .unwrap()
            })
            .unwrap();
        gram.swap(col, pivot_row);
        assert!(
            !gram[col][col].is_zero(),
            "degenerate D-basis Gram matrix"
        );
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = gram[row][col].clone() / gram[col][col].clone();
            if factor.is_zero() {
                continue;
            }
            let pivot_row = gram[col].clone();
            for (entry, pivot) in gram[row].iter_mut().zip(&pivot_row).skip(col) {
                *entry = entry.clone() - factor.clone() * pivot.clone();
            }
        }
    }
    let coefficients: Vec<C> = (0..n)
        .map(|i| gram[i][n].clone() / gram[i][i].clone())
        .collect();

    let mut residual = part.clone();
    for (coeff, basis_elem) in coefficients.iter().zip(basis) {
        residual = residual.sub(&basis_elem.scale(coeff));
    }
    Projection {
        coefficients,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn d21_is_the_order_of_the_displayed_words() {
        let d = d21::<BigRational>(2);
        assert_eq!(d.coefficient(&word("AB")), ratio(1, 1));
        assert_eq!(d.coefficient(&word("BA")), ratio(-1, 1));
        assert_eq!(d.num_terms(), 2);
    }

    #[test]
    fn projection_recovers_exact_combination() {
        let target = d31::<BigRational>(4)
            .scale(&ratio(1, 12))
            .add(&d32(4).scale(&ratio(-1, 24)));
        let p = project(&target, &order3_basis(4));
        assert_eq!(p.coefficients, vec![ratio(1, 12), ratio(-1, 24)]);
        assert!(p.residual.is_zero());
    }

    #[test]
    fn projection_of_zero_is_zero() {
        let zero = WordSeries::<Ab, BigRational>::zero(4);
        let p = project(&zero, &order4_basis(4));
        assert!(p.coefficients.iter().all(|c| c.is_zero()));
        assert!(p.residual.is_zero());
    }

    #[test]
    fn projection_reports_out_of_span_residual() {
        // AAA is orthogonal to both D31 and D32.
        let mut target = d31::<BigRational>(3).scale(&ratio(2, 1));
        target.add_term(word("AAA"), ratio(1, 1));
        let p = project(&target, &order3_basis(3));
        assert_eq!(p.coefficients[0], ratio(2, 1));
        assert_eq!(p.coefficients[1], ratio(0, 1));
        assert_eq!(p.residual.coefficient(&word("AAA")), ratio(1, 1));
        assert_eq!(p.residual.num_terms(), 1);
    }
}
