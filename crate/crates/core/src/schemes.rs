//! Splitting-coefficient sets for the generalized impulse methods.
//!
//! A scheme is the coefficient pair `(c_1..c_k; d_1..d_k)` of the fractional
//! step product: for each `i`, a slow-force kick over `c_i * dt` followed by
//! a fast-subsystem flow over `d_i * dt`. Consistency of the one-step method
//! requires both coefficient sums to equal 1. Trailing `d_k = 0` entries are
//! stored explicitly and skipped at execution time.

use crate::scalar::{ratio, Scalar};
use num_rational::BigRational;
use std::fmt;
use thiserror::Error;

pub const CONSISTENCY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingScheme<C: Scalar> {
    name: Option<String>,
    c: Vec<C>,
    d: Vec<C>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("scheme must have at least one fractional step pair")]
    Empty,
    #[error("coefficient lists have different lengths: {c} kicks vs {d} flows")]
    MismatchedLengths { c: usize, d: usize },
    #[error("failed to parse scheme text: {0}")]
    Parse(String),
}

/// A violated validity condition, reported by [`SplittingScheme::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    KickSum(f64),
    FlowSum(f64),
    NonfiniteCoefficient,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::KickSum(s) => write!(f, "C_k = {s} != 1"),
            Violation::FlowSum(s) => write!(f, "D_k = {s} != 1"),
            Violation::NonfiniteCoefficient => write!(f, "nonfinite coefficient"),
        }
    }
}

impl<C: Scalar> SplittingScheme<C> {
    pub fn new(c: Vec<C>, d: Vec<C>) -> Result<Self, SchemeError> {
        if c.is_empty() || d.is_empty() {
            return Err(SchemeError::Empty);
        }
        if c.len() != d.len() {
            return Err(SchemeError::MismatchedLengths {
                c: c.len(),
                d: d.len(),
            });
        }
        Ok(SplittingScheme { name: None, c, d })
    }

    pub fn named(name: impl Into<String>, c: Vec<C>, d: Vec<C>) -> Result<Self, SchemeError> {
        let mut s = Self::new(c, d)?;
        s.name = Some(name.into());
        Ok(s)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of fractional step pairs.
    pub fn k(&self) -> usize {
        self.c.len()
    }

    pub fn kick_coefficients(&self) -> &[C] {
        &self.c
    }

    pub fn flow_coefficients(&self) -> &[C] {
        &self.d
    }

    /// Partial sums `C_i = c_1 + ... + c_i`.
    pub fn kick_partial_sums(&self) -> Vec<C> {
        partial_sums(&self.c)
    }

    /// Partial sums `D_i = d_1 + ... + d_i`.
    pub fn flow_partial_sums(&self) -> Vec<C> {
        partial_sums(&self.d)
    }

    /// Checks the consistency sums and coefficient finiteness. An empty list
    /// means the scheme is valid. Exact domains are checked exactly; the
    /// float domain within [`CONSISTENCY_TOL`].
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self
            .c
            .iter()
            .chain(self.d.iter())
            .any(|x| !x.to_f64().is_finite())
        {
            violations.push(Violation::NonfiniteCoefficient);
            return violations;
        }
        let c_sum: C = sum(&self.c);
        let d_sum: C = sum(&self.d);
        if !sum_is_one(&c_sum) {
            violations.push(Violation::KickSum(c_sum.to_f64()));
        }
        if !sum_is_one(&d_sum) {
            violations.push(Violation::FlowSum(d_sum.to_f64()));
        }
        violations
    }

    pub fn is_consistent(&self) -> bool {
        self.validate().is_empty()
    }

    /// A scheme is symmetric iff the interleaved coefficient sequence
    /// `c_1, d_1, ..., c_k, d_k`, with a trailing zero flow dropped, reads
    /// the same in both directions.
    pub fn is_symmetric(&self) -> bool {
        let mut seq: Vec<f64> = Vec::with_capacity(2 * self.k());
        for (ci, di) in self.c.iter().zip(&self.d) {
            seq.push(ci.to_f64());
            seq.push(di.to_f64());
        }
        if let Some(&last) = seq.last() {
            if last == 0.0 {
                seq.pop();
            }
        }
        seq.iter()
            .zip(seq.iter().rev())
            .all(|(a, b)| (a - b).abs() <= CONSISTENCY_TOL)
    }

    /// Double-precision view, keeping the name.
    pub fn to_f64(&self) -> SplittingScheme<f64> {
        SplittingScheme {
            name: self.name.clone(),
            c: self.c.iter().map(Scalar::to_f64).collect(),
            d: self.d.iter().map(Scalar::to_f64).collect(),
        }
    }
}

fn sum<C: Scalar>(values: &[C]) -> C {
    values.iter().cloned().fold(C::zero(), |acc, x| acc + x)
}

fn partial_sums<C: Scalar>(values: &[C]) -> Vec<C> {
    values
        .iter()
        .scan(C::zero(), |acc, x| {
            *acc = acc.clone() + x.clone();
            Some(acc.clone())
        })
        .collect()
}

fn sum_is_one<C: Scalar>(s: &C) -> bool {
    if C::EXACT {
        s == &C::one()
    } else {
        (s.to_f64() - 1.0).abs() <= CONSISTENCY_TOL
    }
}

/// The classical impulse method: half kick, full fast flow, half kick.
pub fn impulse_i() -> SplittingScheme<BigRational> {
    SplittingScheme::named(
        "impulse1",
        vec![ratio(1, 2), ratio(1, 2)],
        vec![ratio(1, 1), ratio(0, 1)],
    )
    .unwrap()
}

/// Non-symmetric two-pair method that removes both the length-2 error term
/// and the 1/eps^2-weighted length-3 term.
pub fn impulse_ii() -> SplittingScheme<BigRational> {
    SplittingScheme::named(
        "impulse2",
        vec![ratio(1, 4), ratio(3, 4)],
        vec![ratio(2, 3), ratio(1, 3)],
    )
    .unwrap()
}

/// Symmetric three-pair method with the 1/eps^2-weighted length-3 term
/// removed; its leading error is `1/72 D32`.
pub fn impulse_iii() -> SplittingScheme<BigRational> {
    SplittingScheme::named(
        "impulse3",
        vec![ratio(1, 6), ratio(2, 3), ratio(1, 6)],
        vec![ratio(1, 2), ratio(1, 2), ratio(0, 1)],
    )
    .unwrap()
}

/// Leading kick coefficient of the symmetric four-pair method, in closed
/// form: `2^(1/3)/6 + 4^(1/3)/12 + 1/3`, equivalently `1/(2(2 - 2^(1/3)))`.
pub fn impulse_iv_c1() -> f64 {
    2f64.cbrt() / 6.0 + 4f64.cbrt() / 12.0 + 1.0 / 3.0
}

/// Symmetric four-pair method whose length-3 and length-4 error terms all
/// vanish. The kick coefficients coincide with the classical fourth-order
/// composition coefficients, although the underlying split is fast/slow
/// rather than kinetic/potential.
pub fn impulse_iv() -> SplittingScheme<f64> {
    let c1 = impulse_iv_c1();
    let d1 = 2.0 * c1;
    SplittingScheme::named(
        "impulse4",
        vec![c1, 0.5 - c1, 0.5 - c1, c1],
        vec![d1, 1.0 - 2.0 * d1, d1, 0.0],
    )
    .unwrap()
}

/// All four cataloged methods in double precision, in order.
pub fn catalog() -> Vec<SplittingScheme<f64>> {
    vec![
        impulse_i().to_f64(),
        impulse_ii().to_f64(),
        impulse_iii().to_f64(),
        impulse_iv(),
    ]
}

/// Residuals of the two order conditions behind the four-pair symmetric
/// method, as functions of `(c1, d1)`: the coefficients of the
/// 1/eps^4-weighted and 1/eps^2-weighted length-4 error terms.
pub fn k4_order_conditions(c1: f64, d1: f64) -> (f64, f64) {
    let g41 = 0.5 * c1 * d1 - 0.25 * d1 - 0.5 * c1 * d1 * d1 + 0.25 * d1 * d1 + 1.0 / 24.0;
    let g42 = c1 * d1 - 0.375 * d1 - 0.5 * c1 * d1 * d1 - 0.5 * c1 * c1 * d1 + 0.25 * d1 * d1
        + 1.0 / 16.0;
    (g41, g42)
}

fn cubic(z: f64) -> f64 {
    6.0 * z.powi(3) - 12.0 * z.powi(2) + 6.0 * z - 1.0
}

/// Solves the order conditions of the symmetric four-pair method. They
/// reduce to `6 z^3 - 12 z^2 + 6 z - 1 = 0` for `d1`, with `c1 = d1 / 2`;
/// the cubic has exactly one real root and it lies in (1, 2). Solved by
/// Newton iteration safeguarded with bisection on that bracket.
pub fn solve_k4_equations() -> (f64, f64) {
    // Sign checks pinning the single real root to (1, 2).
    debug_assert!(cubic(0.0) < 0.0 && cubic(1.0) < 0.0 && cubic(2.0) > 0.0);
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    let mut z = 1.5f64;
    for _ in 0..100 {
        let f = cubic(z);
        if f.abs() < 1e-15 {
            break;
        }
        if f < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let df = 18.0 * z * z - 24.0 * z + 6.0;
        let newton = z - f / df;
        z = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    let d1 = z;
    (d1 / 2.0, d1)
}

impl<C: Scalar> fmt::Display for SplittingScheme<C> {
    /// Text form `k;c=...;d=...` accepted back by [`parse_scheme`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[C]| {
            v.iter()
                .map(|x| crate::scalar::format_scalar(x))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};c={};d={}", self.k(), join(&self.c), join(&self.d))
    }
}

/// A scheme selector resolved to its natural coefficient domain: exact for
/// the rational catalog entries and for inline fraction/integer text, double
/// precision otherwise.
#[derive(Debug, Clone)]
pub enum SchemeSelector {
    Exact(SplittingScheme<BigRational>),
    Real(SplittingScheme<f64>),
}

impl SchemeSelector {
    pub fn to_f64(&self) -> SplittingScheme<f64> {
        match self {
            SchemeSelector::Exact(s) => s.to_f64(),
            SchemeSelector::Real(s) => s.clone(),
        }
    }
}

fn parse_coefficient_exact(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(ratio(n, d))
    } else {
        text.parse::<i64>().ok().map(|n| ratio(n, 1))
    }
}

/// Parses a scheme selector, keeping exact arithmetic when the text allows
/// it: catalog names `impulse1..impulse3` and inline coefficients written as
/// integers or fractions stay rational; `impulse4` and decimal coefficients
/// fall back to double precision.
pub fn parse_selector(text: &str) -> Result<SchemeSelector, SchemeError> {
    match text.trim() {
        "impulse1" => return Ok(SchemeSelector::Exact(impulse_i())),
        "impulse2" => return Ok(SchemeSelector::Exact(impulse_ii())),
        "impulse3" => return Ok(SchemeSelector::Exact(impulse_iii())),
        "impulse4" => return Ok(SchemeSelector::Real(impulse_iv())),
        _ => {}
    }
    let real = parse_scheme(text)?;
    let parts: Vec<&str> = text.split(';').collect();
    let exact_lists: Option<(Vec<BigRational>, Vec<BigRational>)> = (|| {
        let c = parts[1]
            .trim()
            .strip_prefix('c')?
            .trim_start()
            .strip_prefix('=')?
            .split(',')
            .map(parse_coefficient_exact)
            .collect::<Option<Vec<_>>>()?;
        let d = parts[2]
            .trim()
            .strip_prefix('d')?
            .trim_start()
            .strip_prefix('=')?
            .split(',')
            .map(parse_coefficient_exact)
            .collect::<Option<Vec<_>>>()?;
        Some((c, d))
    })();
    match exact_lists {
        Some((c, d)) => Ok(SchemeSelector::Exact(
            SplittingScheme::new(c, d).expect("lengths already validated"),
        )),
        None => Ok(SchemeSelector::Real(real)),
    }
}

fn parse_coefficient(text: &str) -> Result<f64, SchemeError> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: f64 = n
            .trim()
            .parse()
            .map_err(|_| SchemeError::Parse(format!("bad numerator in {text:?}")))?;
        let d: f64 = d
            .trim()
            .parse()
            .map_err(|_| SchemeError::Parse(format!("bad denominator in {text:?}")))?;
        if d == 0.0 {
            return Err(SchemeError::Parse(format!("zero denominator in {text:?}")));
        }
        Ok(n / d)
    } else {
        text.parse()
            .map_err(|_| SchemeError::Parse(format!("bad coefficient {text:?}")))
    }
}

fn parse_list(part: &str, tag: char) -> Result<Vec<f64>, SchemeError> {
    let part = part.trim();
    let body = part
        .strip_prefix(tag)
        .and_then(|r| r.trim_start().strip_prefix('='))
        .ok_or_else(|| SchemeError::Parse(format!("expected `{tag}=...`, found {part:?}")))?;
    body.split(',').map(parse_coefficient).collect()
}

/// Parses a scheme selector: one of the catalog names `impulse1` ..
/// `impulse4`, or the inline form `k;c=...;d=...` with coefficients given
/// as decimals or fractions `p/q`.
pub fn parse_scheme(text: &str) -> Result<SplittingScheme<f64>, SchemeError> {
    match text.trim() {
        "impulse1" => return Ok(impulse_i().to_f64()),
        "impulse2" => return Ok(impulse_ii().to_f64()),
        "impulse3" => return Ok(impulse_iii().to_f64()),
        "impulse4" => return Ok(impulse_iv()),
        _ => {}
    }
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(SchemeError::Parse(format!(
            "expected a scheme name or `k;c=...;d=...`, found {text:?}"
        )));
    }
    let k: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| SchemeError::Parse(format!("bad pair count {:?}", parts[0])))?;
    let c = parse_list(parts[1], 'c')?;
    let d = parse_list(parts[2], 'd')?;
    if c.len() != k || d.len() != k {
        return Err(SchemeError::Parse(format!(
            "pair count {k} does not match list lengths {} and {}",
            c.len(),
            d.len()
        )));
    }
    SplittingScheme::new(c, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_i_coefficients_and_consistency() {
        let s = impulse_i();
        assert_eq!(s.kick_coefficients(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(s.flow_coefficients(), &[ratio(1, 1), ratio(0, 1)]);
        assert_eq!(*s.kick_partial_sums().last().unwrap(), ratio(1, 1));
        assert_eq!(*s.flow_partial_sums().last().unwrap(), ratio(1, 1));
        assert!(s.validate().is_empty());
    }

    #[test]
    fn impulse_ii_coefficients() {
        let s = impulse_ii();
        assert_eq!(s.kick_coefficients(), &[ratio(1, 4), ratio(3, 4)]);
        assert_eq!(s.flow_coefficients(), &[ratio(2, 3), ratio(1, 3)]);
        assert!(s.is_consistent());
    }

    #[test]
    fn impulse_iii_coefficients() {
        let s = impulse_iii();
        assert_eq!(
            s.kick_coefficients(),
            &[ratio(1, 6), ratio(2, 3), ratio(1, 6)]
        );
        assert_eq!(
            s.flow_coefficients(),
            &[ratio(1, 2), ratio(1, 2), ratio(0, 1)]
        );
        assert!(s.is_consistent());
    }

    #[test]
    fn impulse_iv_closed_forms_agree() {
        let c1 = impulse_iv_c1();
        let alt = 1.0 / (2.0 * (2.0 - 2f64.cbrt()));
        assert!((c1 - alt).abs() < 1e-14);
        assert!((c1 - 0.6756035959798289).abs() < 1e-15);
    }

    #[test]
    fn impulse_iv_is_consistent_with_negative_middle_flow() {
        let s = impulse_iv();
        let d = s.flow_coefficients();
        assert!((d[1] + 1.7024143839193153).abs() < 1e-12);
        assert!(s.validate().is_empty());
    }

    #[test]
    fn cubic_root_matches_closed_form() {
        let (c1, d1) = solve_k4_equations();
        assert!((d1 - 1.3512071919596578).abs() < 1e-12);
        assert!(cubic(d1).abs() < 1e-12);
        assert!((c1 - impulse_iv_c1()).abs() < 1e-12);
        let (g41, g42) = k4_order_conditions(c1, d1);
        assert!(g41.abs() < 1e-12, "first order condition: {g41}");
        assert!(g42.abs() < 1e-12, "second order condition: {g42}");
    }

    #[test]
    fn validate_reports_bad_flow_sum() {
        let s = SplittingScheme::new(vec![0.5, 0.5], vec![0.5, 0.0]).unwrap();
        let violations = s.validate();
        assert_eq!(violations, vec![Violation::FlowSum(0.5)]);
        assert_eq!(violations[0].to_string(), "D_k = 0.5 != 1");
    }

    #[test]
    fn symmetry_predicate_matches_catalog() {
        assert!(impulse_i().is_symmetric());
        assert!(!impulse_ii().is_symmetric());
        assert!(impulse_iii().is_symmetric());
        assert!(impulse_iv().is_symmetric());
    }

    #[test]
    fn parse_round_trip_and_names() {
        let s = parse_scheme("2;c=1/2,0.5;d=1,0").unwrap();
        assert_eq!(s.kick_coefficients(), &[0.5, 0.5]);
        assert_eq!(s.flow_coefficients(), &[1.0, 0.0]);
        let named = parse_scheme("impulse3").unwrap();
        assert_eq!(named.name(), Some("impulse3"));
        let reparsed = parse_scheme(&named.to_string()).unwrap();
        assert_eq!(reparsed.kick_coefficients(), named.kick_coefficients());
    }

    #[test]
    fn parse_rejects_malformed_text() {
        assert!(parse_scheme("linear").is_err());
        assert!(parse_scheme("2;c=1,0").is_err());
        assert!(parse_scheme("3;c=1,0;d=1,0").is_err());
    }

    #[test]
    fn selector_keeps_rational_text_exact() {
        match parse_selector("2;c=1/2,1/2;d=1,0").unwrap() {
            SchemeSelector::Exact(s) => {
                assert_eq!(s.kick_coefficients(), impulse_i().kick_coefficients());
            }
            SchemeSelector::Real(_) => panic!("expected exact selector"),
        }
        match parse_selector("2;c=0.25,0.75;d=2/3,1/3").unwrap() {
            SchemeSelector::Real(s) => assert_eq!(s.kick_coefficients(), &[0.25, 0.75]),
            SchemeSelector::Exact(_) => panic!("decimal text should fall back to f64"),
        }
        assert!(matches!(
            parse_selector("impulse4").unwrap(),
            SchemeSelector::Real(_)
        ));
    }
}
