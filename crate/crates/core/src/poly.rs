//! Exact multilinear expected-payoff polynomials.
//!
//! Expected payoffs of binary-move games are degree ≤ 1 in every parameter,
//! so they are represented exactly as maps from parameter sets (monomials)
//! to rational coefficients. The analytic gradient is exact; a
//! finite-difference oracle over the directly-summed expectation is provided
//! for verification.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::game::OutcomeGame;
use crate::rational::{to_f64, Rational};
use crate::space::{FactorKind, JointSpace, ParamPoint};

/// A squarefree product of parameters; the empty monomial is the constant
/// term. Ordered by (degree, lexicographic parameter ids), which fixes the
/// canonical term order everywhere polynomials are printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(Vec<String>);

impl Monomial {
    pub fn constant() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_params<S: Into<String>>(params: impl IntoIterator<Item = S>) -> Self {
        let mut list: Vec<String> = params.into_iter().map(Into::into).collect();
        list.sort();
        list.dedup();
        Monomial(list)
    }

    pub fn params(&self) -> &[String] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, param: &str) -> bool {
        self.0.iter().any(|p| p == param)
    }

    fn without(&self, param: &str) -> Monomial {
        Monomial(self.0.iter().filter(|p| *p != param).cloned().collect())
    }

    /// Disjoint union; `None` when the factors share a parameter (the
    /// product would leave the multilinear ring).
    fn disjoint_union(&self, other: &Monomial) -> Option<Monomial> {
        if self.0.iter().any(|p| other.contains(p)) {
            return None;
        }
        Some(Monomial::from_params(
            self.0.iter().chain(other.0.iter()).cloned(),
        ))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An exact polynomial of degree ≤ 1 per parameter, in canonical form:
/// zero-coefficient monomials are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultilinearPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultilinearPoly {
    pub fn zero() -> Self {
        MultilinearPoly::default()
    }

    pub fn constant(value: Rational) -> Self {
        let mut poly = MultilinearPoly::zero();
        poly.add_term(Monomial::constant(), value);
        poly
    }

    /// The polynomial consisting of a single parameter.
    pub fn parameter(id: &str) -> Self {
        let mut poly = MultilinearPoly::zero();
        poly.add_term(Monomial::from_params([id]), Rational::one());
        poly
    }

    /// Builds a polynomial from (parameter set, coefficient) pairs.
    pub fn from_terms<S: Into<String>>(
        terms: impl IntoIterator<Item = (Vec<S>, Rational)>,
    ) -> Self {
        let mut poly = MultilinearPoly::zero();
        for (params, coefficient) in terms {
            poly.add_term(Monomial::from_params(params), coefficient);
        }
        poly
    }

    fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Occupied(mut entry) => {
                *entry.get_mut() += coefficient;
                if entry.get().is_zero() {
                    entry.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(entry) => {
                entry.insert(coefficient);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (degree, lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    /// All parameters appearing with nonzero coefficient, sorted.
    pub fn params(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.params().iter().cloned())
            .collect()
    }

    pub fn add(&self, other: &MultilinearPoly) -> MultilinearPoly {
        let mut sum = self.clone();
        for (monomial, coefficient) in &other.terms {
            sum.add_term(monomial.clone(), coefficient.clone());
        }
        sum
    }

    pub fn sub(&self, other: &MultilinearPoly) -> MultilinearPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> MultilinearPoly {
        let mut scaled = MultilinearPoly::zero();
        for (monomial, coefficient) in &self.terms {
            scaled.add_term(monomial.clone(), coefficient * factor);
        }
        scaled
    }

    /// Product of two multilinear polynomials over disjoint parameter sets.
    ///
    /// Panics if the factors share a parameter: the product would have
    /// degree 2 in it, which this representation rejects by construction.
    pub fn mul(&self, other: &MultilinearPoly) -> MultilinearPoly {
        let mut product = MultilinearPoly::zero();
        for (left, left_coefficient) in &self.terms {
            for (right, right_coefficient) in &other.terms {
                let monomial = left.disjoint_union(right).unwrap_or_else(|| {
                    panic!("product is not multilinear: factors share a parameter")
                });
                product.add_term(monomial, left_coefficient * right_coefficient);
            }
        }
        product
    }

    /// Exact value at a point covering all parameters of the polynomial.
    pub fn eval(&self, point: &ParamPoint) -> Result<Rational, Error> {
        let mut total = Rational::zero();
        for (monomial, coefficient) in &self.terms {
            let mut term = coefficient.clone();
            for param in monomial.params() {
                let value = point
                    .get(param)
                    .ok_or_else(|| Error::MissingParameter(param.clone()))?;
                term *= value;
            }
            total += term;
        }
        Ok(total)
    }

    /// Exact partial derivative; a parameter absent from the polynomial
    /// yields the zero polynomial.
    pub fn partial(&self, param: &str) -> MultilinearPoly {
        let mut derivative = MultilinearPoly::zero();
        for (monomial, coefficient) in &self.terms {
            if monomial.contains(param) {
                derivative.add_term(monomial.without(param), coefficient.clone());
            }
        }
        derivative
    }

    /// Exact gradient at a point, one entry per parameter of the
    /// polynomial in sorted order.
    pub fn gradient(&self, point: &ParamPoint) -> Result<Vec<(String, Rational)>, Error> {
        self.params()
            .into_iter()
            .map(|param| {
                let value = self.partial(&param).eval(point)?;
                Ok((param, value))
            })
            .collect()
    }

    /// Partially evaluates one parameter, leaving the rest symbolic.
    pub fn substitute(&self, param: &str, value: &Rational) -> MultilinearPoly {
        let mut result = MultilinearPoly::zero();
        for (monomial, coefficient) in &self.terms {
            if monomial.contains(param) {
                result.add_term(monomial.without(param), coefficient * value);
            } else {
                result.add_term(monomial.clone(), coefficient.clone());
            }
        }
        result
    }
}

impl fmt::Display for MultilinearPoly {
    /// Canonical human-readable form, e.g. `3 - 2*p - q + p*q + 3*p*r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (monomial, coefficient)) in self.terms.iter().enumerate() {
            let negative = coefficient.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = coefficient.abs();
            if monomial.degree() == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                write!(f, "{}", monomial.params().join("*"))?;
            }
        }
        Ok(())
    }
}

/// The exact expected payoff of `player` under `joint`, as a function of
/// the joint space's parameters over `[0,1]^k`.
///
/// Equals the sum over complete outcomes of leaf payoff times the product
/// of conditional move probabilities, with `1 - θ` factors expanded.
pub fn expected_payoff(
    game: &OutcomeGame,
    joint: &JointSpace,
    player: &str,
) -> Result<MultilinearPoly, Error> {
    let player_idx = game.player_index(player)?;
    let mut total = MultilinearPoly::zero();

    'outcomes: for outcome in game.outcomes() {
        let payoffs = game.leaf_payoffs(&outcome)?;
        let mut term = MultilinearPoly::constant(payoffs[player_idx].clone());
        for (i, &bit) in outcome.bits().iter().enumerate() {
            let history = outcome.history(i);
            let factor = match joint.resolved_rule(i).outcome_factor(history) {
                FactorKind::Fixed(one_bit) => {
                    if one_bit == bit {
                        continue; // probability 1
                    } else {
                        continue 'outcomes; // probability 0
                    }
                }
                FactorKind::Parameter(param) => {
                    let theta = MultilinearPoly::parameter(param);
                    if bit == 1 {
                        theta
                    } else {
                        MultilinearPoly::constant(Rational::one()).sub(&theta)
                    }
                }
            };
            term = term.mul(&factor);
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// A flattened numeric evaluator for the directly-summed expected payoff.
///
/// Used by the finite-difference and grid-search oracles; deliberately does
/// not expand into polynomial form.
pub(crate) struct CompiledExpectation {
    params: Vec<String>,
    used: Vec<bool>,
    terms: Vec<(f64, Vec<CompiledFactor>)>,
}

pub(crate) enum CompiledFactor {
    Theta(usize),
    OneMinusTheta(usize),
}

impl CompiledExpectation {
    pub(crate) fn new(
        game: &OutcomeGame,
        joint: &JointSpace,
        player: &str,
    ) -> Result<Self, Error> {
        let player_idx = game.player_index(player)?;
        let params: Vec<String> = joint.params().to_vec();
        let slot = |param: &str| params.iter().position(|p| p == param).unwrap();
        let mut used = vec![false; params.len()];
        let mut terms = Vec::new();

        'outcomes: for outcome in game.outcomes() {
            let payoffs = game.leaf_payoffs(&outcome)?;
            let mut factors = Vec::new();
            for (i, &bit) in outcome.bits().iter().enumerate() {
                match joint.resolved_rule(i).outcome_factor(outcome.history(i)) {
                    FactorKind::Fixed(one_bit) => {
                        if one_bit != bit {
                            continue 'outcomes;
                        }
                    }
                    FactorKind::Parameter(param) => {
                        let index = slot(param);
                        used[index] = true;
                        factors.push(if bit == 1 {
                            CompiledFactor::Theta(index)
                        } else {
                            CompiledFactor::OneMinusTheta(index)
                        });
                    }
                }
            }
            terms.push((to_f64(&payoffs[player_idx]), factors));
        }
        Ok(CompiledExpectation { params, used, terms })
    }

    pub(crate) fn params(&self) -> &[String] {
        &self.params
    }

    /// Whether the expectation actually reads the parameter at `index`.
    pub(crate) fn is_used(&self, index: usize) -> bool {
        self.used[index]
    }

    /// Slot values for a point; parameters the expectation does not read
    /// may be absent, all others must be present.
    pub(crate) fn slots(&self, point: &ParamPoint) -> Result<Vec<f64>, Error> {
        self.params
            .iter()
            .zip(&self.used)
            .map(|(param, &used)| match point.get(param) {
                Some(value) => Ok(to_f64(value)),
                None if !used => Ok(0.0),
                None => Err(Error::MissingParameter(param.clone())),
            })
            .collect()
    }

    pub(crate) fn value(&self, slots: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(payoff, factors)| {
                payoff
                    * factors
                        .iter()
                        .map(|factor| match factor {
                            CompiledFactor::Theta(i) => slots[*i],
                            CompiledFactor::OneMinusTheta(i) => 1.0 - slots[*i],
                        })
                        .product::<f64>()
            })
            .sum()
    }
}

/// Finite-difference gradient of the directly-summed expected payoff.
///
/// Central differences with step `h`, clamped to `[0,1]` (one-sided at the
/// boundary). One entry per joint-space parameter, in joint order. This is
/// the verification oracle for [`MultilinearPoly::gradient`].
pub fn fd_gradient(
    game: &OutcomeGame,
    joint: &JointSpace,
    player: &str,
    point: &ParamPoint,
    h: f64,
) -> Result<Vec<(String, f64)>, Error> {
    if !(h > 0.0) {
        return Err(Error::BadGridStep(h));
    }
    let compiled = CompiledExpectation::new(game, joint, player)?;
    let slots = compiled.slots(point)?;

    let mut gradient = Vec::with_capacity(slots.len());
    for (index, param) in compiled.params().iter().enumerate() {
        let center = slots[index];
        let low = (center - h).max(0.0);
        let high = (center + h).min(1.0);
        let mut probe = slots.clone();
        probe[index] = high;
        let above = compiled.value(&probe);
        probe[index] = low;
        let below = compiled.value(&probe);
        gradient.push((param.clone(), (above - below) / (high - low)));
    }
    Ok(gradient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{chain_store, example_game};
    use crate::rational::{rat, ratio};
    use crate::space::{standard_catalog, MeasureSpace};

    fn catalog_joint(game: &OutcomeGame, x_label: &str, y_label: &str) -> JointSpace {
        let find = |player: &str, label: &str| -> MeasureSpace {
            standard_catalog(game, player)
                .unwrap()
                .into_iter()
                .find(|s| s.label() == label)
                .unwrap()
        };
        JointSpace::new(game, vec![find("X", x_label), find("Y", y_label)]).unwrap()
    }

    fn example_x_poly() -> MultilinearPoly {
        // 3 - 2p - q + pq + 3pr
        MultilinearPoly::from_terms([
            (vec![], rat(3)),
            (vec!["p"], rat(-2)),
            (vec!["q"], rat(-1)),
            (vec!["p", "q"], rat(1)),
            (vec!["p", "r"], rat(3)),
        ])
    }

    #[test]
    fn example_game_behavioural_polynomials() {
        let game = example_game();
        let joint = catalog_joint(&game, "X0", "Y0");
        assert_eq!(expected_payoff(&game, &joint, "X").unwrap(), example_x_poly());
        // 1 + q + 3p - pq - pr
        let expected_y = MultilinearPoly::from_terms([
            (vec![], rat(1)),
            (vec!["q"], rat(1)),
            (vec!["p"], rat(3)),
            (vec!["p", "q"], rat(-1)),
            (vec!["p", "r"], rat(-1)),
        ]);
        assert_eq!(expected_payoff(&game, &joint, "Y").unwrap(), expected_y);
    }

    #[test]
    fn example_game_copy_coupling_polynomials() {
        let game = example_game();
        let joint = catalog_joint(&game, "X0", "Y+");
        let expected_x =
            MultilinearPoly::from_terms([(vec![], rat(3)), (vec!["p"], rat(1))]);
        let expected_y =
            MultilinearPoly::from_terms([(vec![], rat(1)), (vec!["p"], rat(2))]);
        assert_eq!(expected_payoff(&game, &joint, "X").unwrap(), expected_x);
        assert_eq!(expected_payoff(&game, &joint, "Y").unwrap(), expected_y);
    }

    #[test]
    fn chain_store_polynomials() {
        let game = chain_store();
        let behavioural = catalog_joint(&game, "X0", "Y0");
        let x_poly = expected_payoff(&game, &behavioural, "X").unwrap();
        assert_eq!(
            x_poly,
            MultilinearPoly::from_terms([(vec!["p"], rat(1)), (vec!["p", "r"], rat(-2))])
        );
        let y_poly = expected_payoff(&game, &behavioural, "Y").unwrap();
        assert_eq!(
            y_poly,
            MultilinearPoly::from_terms([
                (vec![], rat(1)),
                (vec!["p"], rat(-1)),
                (vec!["p", "r"], rat(-1)),
            ])
        );

        let correlated = catalog_joint(&game, "X0", "Y+");
        assert_eq!(
            expected_payoff(&game, &correlated, "X").unwrap(),
            MultilinearPoly::from_terms([(vec!["p"], rat(-1))])
        );
        assert_eq!(
            expected_payoff(&game, &correlated, "Y").unwrap(),
            MultilinearPoly::from_terms([(vec![], rat(1)), (vec!["p"], rat(-2))])
        );

        let anti = catalog_joint(&game, "X0", "Y-");
        assert_eq!(
            expected_payoff(&game, &anti, "X").unwrap(),
            MultilinearPoly::from_terms([(vec!["p"], rat(1))])
        );
        assert_eq!(
            expected_payoff(&game, &anti, "Y").unwrap(),
            MultilinearPoly::from_terms([(vec![], rat(1)), (vec!["p"], rat(-1))])
        );
    }

    #[test]
    fn eval_matches_known_values() {
        let point =
            ParamPoint::from_pairs([("p", rat(0)), ("q", rat(1)), ("r", rat(0))]).unwrap();
        assert_eq!(example_x_poly().eval(&point).unwrap(), rat(2));

        let constant = MultilinearPoly::constant(rat(5));
        assert_eq!(constant.eval(&ParamPoint::empty()).unwrap(), rat(5));

        let linear = MultilinearPoly::from_terms([(vec![], rat(1)), (vec!["p"], rat(2))]);
        let at_one = ParamPoint::from_pairs([("p", rat(1))]).unwrap();
        assert_eq!(linear.eval(&at_one).unwrap(), rat(3));
    }

    #[test]
    fn eval_reports_missing_parameters() {
        let point = ParamPoint::from_pairs([("p", rat(0))]).unwrap();
        assert_eq!(
            example_x_poly().eval(&point),
            Err(Error::MissingParameter("q".into()))
        );
    }

    #[test]
    fn partial_derivatives_are_exact() {
        let dp = example_x_poly().partial("p");
        assert_eq!(
            dp,
            MultilinearPoly::from_terms([
                (vec![], rat(-2)),
                (vec!["q"], rat(1)),
                (vec!["r"], rat(3)),
            ])
        );
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let y_poly = expected_payoff(&game, &joint, "Y").unwrap();
        assert_eq!(
            y_poly.partial("r"),
            MultilinearPoly::from_terms([(vec!["p"], rat(-1))])
        );
        assert!(MultilinearPoly::constant(rat(7)).partial("p").is_zero());
    }

    #[test]
    fn gradient_values_match_paper_slopes() {
        let game = chain_store();
        let behavioural = catalog_joint(&game, "X0", "Y0");
        let x_poly = expected_payoff(&game, &behavioural, "X").unwrap();
        let point =
            ParamPoint::from_pairs([("p", ratio(1, 2)), ("r", rat(0))]).unwrap();
        let gradient = x_poly.gradient(&point).unwrap();
        assert_eq!(gradient, vec![("p".into(), rat(1)), ("r".into(), rat(-1))]);

        let correlated = catalog_joint(&game, "X0", "Y+");
        let coupled_poly = expected_payoff(&game, &correlated, "X").unwrap();
        let anywhere = ParamPoint::from_pairs([("p", ratio(1, 3))]).unwrap();
        assert_eq!(
            coupled_poly.gradient(&anywhere).unwrap(),
            vec![("p".into(), rat(-1))]
        );

        let example = example_game();
        let example_copy = catalog_joint(&example, "X0", "Y+");
        let example_poly = expected_payoff(&example, &example_copy, "X").unwrap();
        assert_eq!(
            example_poly.gradient(&anywhere).unwrap(),
            vec![("p".into(), rat(1))]
        );
    }

    #[test]
    fn substitution_fixes_one_parameter() {
        let poly = example_x_poly();
        let fixed = poly.substitute("p", &rat(1));
        // 3 - 2 - q + q + 3r = 1 + 3r
        assert_eq!(
            fixed,
            MultilinearPoly::from_terms([(vec![], rat(1)), (vec!["r"], rat(3))])
        );
    }

    #[test]
    fn display_uses_canonical_ordering() {
        assert_eq!(example_x_poly().to_string(), "3 - 2*p - q + p*q + 3*p*r");
        assert_eq!(MultilinearPoly::zero().to_string(), "0");
        assert_eq!(
            MultilinearPoly::from_terms([(vec!["p"], rat(-1))]).to_string(),
            "-p"
        );
        assert_eq!(
            MultilinearPoly::from_terms([(vec![], ratio(1, 2)), (vec!["p", "q"], ratio(-3, 4))])
                .to_string(),
            "1/2 - 3/4*p*q"
        );
    }

    #[test]
    fn fd_gradient_matches_analytic_at_spot_points() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let point = ParamPoint::from_pairs([
            ("p", ratio(1, 2)),
            ("q", ratio(1, 4)),
            ("r", ratio(1, 3)),
        ])
        .unwrap();
        let analytic = expected_payoff(&game, &joint, "X").unwrap();
        let numeric = fd_gradient(&game, &joint, "X", &point, 1e-5).unwrap();
        for (param, value) in numeric {
            let exact = analytic.partial(&param).eval(&point).unwrap();
            assert!((value - to_f64(&exact)).abs() < 1e-6, "{param}");
        }
    }

    #[test]
    fn fd_gradient_at_copy_coupling_is_minus_one() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y+");
        let point = ParamPoint::from_pairs([("p", ratio(1, 2))]).unwrap();
        let gradient = fd_gradient(&game, &joint, "X", &point, 1e-5).unwrap();
        assert_eq!(gradient.len(), 1);
        assert!((gradient[0].1 + 1.0).abs() < 1e-9);
    }

    #[test]
    fn fd_gradient_of_fully_deterministic_space_is_empty() {
        let game = chain_store();
        let x = MeasureSpace::new("Xc", "X", vec![crate::space::Rule::constant("x", 1)]);
        let y = MeasureSpace::new("Yc", "Y", vec![crate::space::Rule::copy("y", "x")]);
        let joint = JointSpace::new(&game, vec![x, y]).unwrap();
        let gradient =
            fd_gradient(&game, &joint, "X", &ParamPoint::empty(), 1e-5).unwrap();
        assert!(gradient.is_empty());
    }
}
