//! Splitting-error expansion of a fractional-step product.
//!
//! For a scheme `(c_1..c_k; d_1..d_k)` acting through the product
//! `prod_i exp(c_i A) exp(d_i B)` with `A + B` the full generator, the
//! remainder is the near-identity operator
//!
//! ```text
//! R = [prod_i exp(c_i A) exp(d_i B)] * exp(-(A + B))
//! ```
//!
//! whose expansion `R - I` collects, at word length `n`, the coefficient of
//! the n-th power of the outer step size. This module computes that
//! expansion exactly, extracts the low-order coefficients on the D-basis,
//! and evaluates the closed-form two-pair coefficient formulas used to
//! cross-check the product route.

use super::dbasis::{self, Projection};
use super::grading::{epsilon_exponent, graded_expand, normalize_commuting};
use super::series::WordSeries;
use super::word::{Ab, Xvf};
use super::AlgebraError;
use crate::scalar::{format_scalar, Scalar};
use crate::schemes::SplittingScheme;
use std::fmt::Write as _;

fn check_consistent<C: Scalar>(scheme: &SplittingScheme<C>) -> Result<(), AlgebraError> {
    match scheme.validate().first() {
        Some(violation) => Err(AlgebraError::InconsistentScheme(violation.to_string())),
        None => Ok(()),
    }
}

/// Remainder expansion `R - I` of a consistent scheme, truncated at word
/// length `order` (at least 2). The empty-word and length-1 parts cancel
/// exactly for consistent schemes.
pub fn remainder<C: Scalar>(
    scheme: &SplittingScheme<C>,
    order: usize,
) -> Result<WordSeries<Ab, C>, AlgebraError> {
    if order < 2 {
        return Err(AlgebraError::OrderTooSmall(order));
    }
    check_consistent(scheme)?;

    let mut product = WordSeries::identity(order);
    for (ci, di) in scheme
        .kick_coefficients()
        .iter()
        .zip(scheme.flow_coefficients())
    {
        if !ci.is_zero() {
            let kick = WordSeries::from_single(Ab::A, ci.clone(), order).exp()?;
            product = product.mul(&kick);
        }
        if !di.is_zero() {
            let flow = WordSeries::from_single(Ab::B, di.clone(), order).exp()?;
            product = product.mul(&flow);
        }
    }
    let full = WordSeries::from_terms(
        order,
        [
            (super::word::Word::single(Ab::A), -C::one()),
            (super::word::Word::single(Ab::B), -C::one()),
        ],
    )
    .exp()?;
    Ok(product.mul(&full).sub(&WordSeries::identity(order)))
}

/// Coefficient of `D21` in the length-2 part of the remainder. The length-2
/// part of a consistent remainder is always a multiple of `D21`, so the
/// projection residual is zero.
pub fn order2_coefficient<C: Scalar>(scheme: &SplittingScheme<C>) -> Result<C, AlgebraError> {
    let rem = remainder(scheme, 2)?;
    let projection = dbasis::project(&rem.part_of_length(2), &[dbasis::d21(2)]);
    debug_assert!(projection.residual.is_zero());
    Ok(projection.coefficients.into_iter().next().unwrap())
}

/// Length-3 coefficients of the remainder on `(D31, D32)`.
#[derive(Debug, Clone)]
pub struct Order3Coefficients<C: Scalar> {
    pub d31: C,
    pub d32: C,
    pub residual_norm: f64,
}

pub fn order3_coefficients<C: Scalar>(
    scheme: &SplittingScheme<C>,
) -> Result<Order3Coefficients<C>, AlgebraError> {
    let rem = remainder(scheme, 3)?;
    let projection = dbasis::project(&rem.part_of_length(3), &dbasis::order3_basis(3));
    let residual_norm = projection.residual_norm();
    let mut coeffs = projection.coefficients.into_iter();
    Ok(Order3Coefficients {
        d31: coeffs.next().unwrap(),
        d32: coeffs.next().unwrap(),
        residual_norm,
    })
}

/// Length-4 coefficients of the remainder on `(D41, D42, D43)`. The
/// residual need not vanish: schemes whose length-2 term survives leave a
/// non-Lie component at length 4, which is reported, not rejected.
#[derive(Debug, Clone)]
pub struct Order4Coefficients<C: Scalar> {
    pub d41: C,
    pub d42: C,
    pub d43: C,
    pub residual_norm: f64,
}

pub fn order4_coefficients<C: Scalar>(
    scheme: &SplittingScheme<C>,
) -> Result<Order4Coefficients<C>, AlgebraError> {
    let rem = remainder(scheme, 4)?;
    let projection = dbasis::project(&rem.part_of_length(4), &dbasis::order4_basis(4));
    let residual_norm = projection.residual_norm();
    let mut coeffs = projection.coefficients.into_iter();
    Ok(Order4Coefficients {
        d41: coeffs.next().unwrap(),
        d42: coeffs.next().unwrap(),
        d43: coeffs.next().unwrap(),
        residual_norm,
    })
}

/// Closed-form error coefficients of a consistent two-pair scheme
/// `(c1, 1-c1; d1, 1-d1)`:
///
/// ```text
/// D21: (c1 - 1) d1 + 1/2
/// D31: d1^2 (1 - c1) / 2 - 1/6
/// D32: d1 (c1^2 - 1) / 2 + 1/3
/// ```
///
/// These must agree exactly with the product-route projection.
pub fn k2_closed_form<C: Scalar>(
    scheme: &SplittingScheme<C>,
) -> Result<(C, C, C), AlgebraError> {
    if scheme.k() != 2 {
        return Err(AlgebraError::NotTwoPairs(scheme.k()));
    }
    check_consistent(scheme)?;
    let c1 = scheme.kick_coefficients()[0].clone();
    let d1 = scheme.flow_coefficients()[0].clone();
    let half = C::from_ratio(1, 2);
    let d21 = (c1.clone() - C::one()) * d1.clone() + half.clone();
    let d31 = d1.clone() * d1.clone() * (C::one() - c1.clone()) * half.clone()
        - C::from_ratio(1, 6);
    let d32 = d1 * (c1.clone() * c1 - C::one()) * half + C::from_ratio(1, 3);
    Ok((d21, d31, d32))
}

/// Full projection of one length part onto a D-basis, exposed for reports.
pub fn project_length_part<C: Scalar>(
    rem: &WordSeries<Ab, C>,
    length: usize,
) -> Option<Projection<C>> {
    let basis = match length {
        2 => vec![dbasis::d21(rem.order())],
        3 => dbasis::order3_basis(rem.order()),
        4 => dbasis::order4_basis(rem.order()),
        _ => return None,
    };
    Some(dbasis::project(&rem.part_of_length(length), &basis))
}

/// Serializes a graded series, one line per term: `coeff  epsilon_exp  word`.
pub fn graded_report_lines<C: Scalar>(series: &WordSeries<Xvf, C>) -> String {
    let mut out = String::new();
    let mut terms: Vec<_> = series.terms().collect();
    terms.sort_by_key(|(w, _)| (w.len(), epsilon_exponent(w), (*w).clone()));
    for (w, c) in terms {
        let _ = writeln!(out, "{} {} {}", format_scalar(c), epsilon_exponent(w), w);
    }
    out
}

/// Serializes a two-letter series, one line per term: `coeff  epsilon_exp
/// word`, with the grading exponent fixed at 0 (the grading only applies
/// after the fast generator is split; see [`graded_report_lines`]).
pub fn report_lines<C: Scalar>(series: &WordSeries<Ab, C>) -> String {
    let mut out = String::new();
    let mut terms: Vec<_> = series.terms().collect();
    terms.sort_by_key(|(w, _)| (w.len(), (*w).clone()));
    for (w, c) in terms {
        let _ = writeln!(out, "{} 0 {}", format_scalar(c), w);
    }
    out
}

/// Plain-text expansion report for a scheme: remainder terms grouped by
/// step-size power, D-basis projections with residuals, the eps-orders of
/// the D-basis, and the graded normal form of the remainder.
pub fn expansion_report<C: Scalar>(
    scheme: &SplittingScheme<C>,
    order: usize,
) -> Result<String, AlgebraError> {
    use super::grading::{epsilon_order, EpsilonOrder};

    let rem = remainder(scheme, order)?;
    let mut out = String::new();
    let name = scheme.name().unwrap_or("custom");
    let _ = writeln!(out, "# expansion of scheme {name} ({scheme}) to order {order}");
    let _ = writeln!(out, "# term format: coeff epsilon_exp word");
    for len in 2..=order {
        let part = rem.part_of_length(len);
        let _ = writeln!(out, "# -- dt^{len} --");
        if part.is_zero() {
            let _ = writeln!(out, "# (vanishes)");
        } else {
            out.push_str(&report_lines(&part));
        }
        if let Some(projection) = project_length_part(&rem, len) {
            let labels: &[&str] = match len {
                2 => &["D21"],
                3 => &["D31", "D32"],
                _ => &["D41", "D42", "D43"],
            };
            let coeffs = labels
                .iter()
                .zip(&projection.coefficients)
                .map(|(l, c)| format!("{l}: {}", format_scalar(c)))
                .collect::<Vec<_>>()
                .join("  ");
            let _ = writeln!(out, "# projection {coeffs}  residual: {:e}", projection.residual_norm());
        }
    }
    let _ = writeln!(out, "# -- epsilon orders of the D-basis --");
    let labeled: [(&str, WordSeries<Ab, C>); 6] = [
        ("D21", dbasis::d21(2)),
        ("D31", dbasis::d31(3)),
        ("D32", dbasis::d32(3)),
        ("D41", dbasis::d41(4)),
        ("D42", dbasis::d42(4)),
        ("D43", dbasis::d43(4)),
    ];
    for (label, series) in labeled {
        let order_text = match epsilon_order(&series) {
            EpsilonOrder::Vanishes => "vanishes".to_string(),
            EpsilonOrder::Order(0) => "O(1)".to_string(),
            EpsilonOrder::Order(e) => format!("O(eps^{e})"),
        };
        let _ = writeln!(out, "# {label}: {order_text}");
    }
    let _ = writeln!(out, "# -- graded normal form of the remainder --");
    let graded = normalize_commuting(&graded_expand(&rem));
    if graded.is_zero() {
        let _ = writeln!(out, "# (vanishes)");
    } else {
        out.push_str(&graded_report_lines(&graded));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::word::word;
    use crate::scalar::ratio;
    use crate::schemes::{self, impulse_i, impulse_ii, impulse_iii, impulse_iv};
    use num_rational::BigRational;

    #[test]
    fn lie_splitting_leading_commutator() {
        // Single-pair splitting: length-2 part is (AB - BA) / 2.
        let scheme =
            SplittingScheme::new(vec![ratio(1, 1)], vec![ratio(1, 1)]).unwrap();
        let rem = remainder(&scheme, 2).unwrap();
        assert!(rem.part_of_length(0).is_zero());
        assert!(rem.part_of_length(1).is_zero());
        assert_eq!(rem.coefficient(&word("AB")), ratio(1, 2));
        assert_eq!(rem.coefficient(&word("BA")), ratio(-1, 2));
        assert_eq!(rem.num_terms(), 2);
    }

    #[test]
    fn impulse_i_leading_error() {
        let rem = remainder(&impulse_i(), 3).unwrap();
        assert!(rem.part_of_length(2).is_zero());
        let o3 = order3_coefficients(&impulse_i()).unwrap();
        assert_eq!(o3.d31, ratio(1, 12));
        assert_eq!(o3.d32, ratio(-1, 24));
        assert_eq!(o3.residual_norm, 0.0);
        // The length-3 part equals D31/12 - D32/24 term by term.
        let expected = dbasis::d31::<BigRational>(3)
            .scale(&ratio(1, 12))
            .add(&dbasis::d32(3).scale(&ratio(-1, 24)));
        assert_eq!(rem.part_of_length(3), expected);
    }

    #[test]
    fn impulse_ii_kills_the_fast_weighted_term() {
        assert_eq!(order2_coefficient(&impulse_ii()).unwrap(), ratio(0, 1));
        let o3 = order3_coefficients(&impulse_ii()).unwrap();
        assert_eq!(o3.d31, ratio(0, 1));
        assert_eq!(o3.d32, ratio(1, 48));
        assert_eq!(o3.residual_norm, 0.0);
    }

    #[test]
    fn impulse_iii_leading_error() {
        let o3 = order3_coefficients(&impulse_iii()).unwrap();
        assert_eq!(o3.d31, ratio(0, 1));
        assert_eq!(o3.d32, ratio(1, 72));
        assert_eq!(o3.residual_norm, 0.0);
    }

    #[test]
    fn impulse_iv_annihilates_through_length_four() {
        let scheme = impulse_iv();
        let o3 = order3_coefficients(&scheme).unwrap();
        assert!(o3.d31.abs() < 1e-12);
        assert!(o3.d32.abs() < 1e-12);
        let o4 = order4_coefficients(&scheme).unwrap();
        assert!(o4.d41.abs() < 1e-12);
        assert!(o4.d42.abs() < 1e-12);
        assert!(o4.d43.abs() < 1e-12);
        assert!(o4.residual_norm < 1e-12);
    }

    #[test]
    fn degenerate_two_pair_scheme_order2() {
        // c = (1, 0), d = (1, 0): closed form gives (c1-1)d1 + 1/2 = 1/2.
        let scheme = SplittingScheme::new(
            vec![ratio(1, 1), ratio(0, 1)],
            vec![ratio(1, 1), ratio(0, 1)],
        )
        .unwrap();
        assert_eq!(order2_coefficient(&scheme).unwrap(), ratio(1, 2));
        let (d21, _, _) = k2_closed_form(&scheme).unwrap();
        assert_eq!(d21, ratio(1, 2));
    }

    #[test]
    fn closed_form_matches_product_route_for_the_catalog() {
        for scheme in [impulse_i(), impulse_ii()] {
            let (cf21, cf31, cf32) = k2_closed_form(&scheme).unwrap();
            assert_eq!(order2_coefficient(&scheme).unwrap(), cf21);
            let o3 = order3_coefficients(&scheme).unwrap();
            assert_eq!(o3.d31, cf31);
            assert_eq!(o3.d32, cf32);
        }
    }

    #[test]
    fn symmetric_k4_family_projection_matches_order_conditions() {
        // Symmetric four-pair scheme with c1 = 1/4, d1 = 1/2; its D41
        // coefficient equals the order-condition formula value 1/96.
        let c1 = ratio(1, 4);
        let d1 = ratio(1, 2);
        let scheme = SplittingScheme::new(
            vec![c1.clone(), ratio(1, 4), ratio(1, 4), c1],
            vec![d1.clone(), ratio(0, 1), d1, ratio(0, 1)],
        )
        .unwrap();
        let o4 = order4_coefficients(&scheme).unwrap();
        let (g41, g42) = schemes::k4_order_conditions(0.25, 0.5);
        assert_eq!(o4.d41, ratio(1, 96));
        assert!((o4.d41.to_f64() - g41).abs() < 1e-15);
        assert!((o4.d42.to_f64() - g42).abs() < 1e-15);
        assert_eq!(o4.residual_norm, 0.0);
    }

    #[test]
    fn inconsistent_scheme_is_rejected_with_the_violated_sum() {
        let scheme = SplittingScheme::new(
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 2), ratio(0, 1)],
        )
        .unwrap();
        let err = remainder(&scheme, 3).unwrap_err();
        assert_eq!(
            err.to_string(),
            "inconsistent scheme: D_k = 0.5 != 1"
        );
    }

    #[test]
    fn report_contains_projection_lines() {
        let report = expansion_report(&impulse_i(), 3).unwrap();
        assert!(report.contains("D31: 1/12"));
        assert!(report.contains("D32: -1/24"));
        assert!(report.contains("1/12 0 ABB"));
    }
}
