//! Sparse bivariate polynomials over the rationals in the fibre coordinate
//! `x` and the base coordinate `t`, together with the local primitives the
//! blow-up engine relies on.

mod parse;
mod profile;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exact::Rational;

pub use parse::parse_poly;
pub use profile::{fiber_intersection_profile, IntersectionProfile, Location, ProfileEntry};
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name:?} at position {pos} (only x and t are allowed)")]
    UnknownVariable { pos: usize, name: String },
    #[error("exponent at position {pos} is not a nonnegative integer")]
    BadExponent { pos: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("the fibre t = {t0} is contained in the divisor")]
    FibreContained { t0: Rational },
    #[error("x-degree {degree} of the restriction exceeds the fibre degree {fiber_degree}")]
    DegreeExceedsFibre { degree: u32, fiber_degree: u32 },
    #[error("cannot factor {0} to locate rational roots")]
    RootSearchTooLarge(String),
}

/// Which affine chart of a point blow-up centred at the local origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `(x, t) <- (x, x*t)`; the exceptional curve is `{x = 0}`.
    X,
    /// `(x, t) <- (x*t, t)`; the exceptional curve is `{t = 0}`.
    T,
}

/// Exponent pair `(deg_x, deg_t)`.
pub type Exponent = (u32, u32);

/// Sparse polynomial in `x` and `t`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exponent, Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        BiPoly::monomial(Rational::one(), 1, 0)
    }

    pub fn t() -> Self {
        BiPoly::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(c: Rational, deg_x: u32, deg_t: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term((deg_x, deg_t), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(terms: I) -> Self {
        let mut p = BiPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `c * x^0 + ... ` from a univariate polynomial in `x`.
    pub fn from_uni_x(u: &UniPoly) -> Self {
        BiPoly::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| ((i as u32, 0), c.clone())),
        )
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, deg_x: u32, deg_t: u32) -> Rational {
        self.terms
            .get(&(deg_x, deg_t))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn deg_t(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).max()
    }

    /// Lowest total degree among the terms, i.e. the multiplicity at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).min()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = BiPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * &x.pow(i) * t.pow(j))
            .sum()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&(0, 0))
    }

    /// `f(x + dx, t + dt)`.
    pub fn translate(&self, dx: &Rational, dt: &Rational) -> Self {
        if dx.is_zero() && dt.is_zero() {
            return self.clone();
        }
        let max_deg = self.total_degree().unwrap_or(0) as usize;
        let binom = binomial_table(max_deg);
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let xs = shifted_powers(&binom, i as usize, dx);
            let ts = shifted_powers(&binom, j as usize, dt);
            for (a, ca) in xs.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                let cca = c * ca;
                for (b, cb) in ts.iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    out.add_term((a as u32, b as u32), &cca * cb);
                }
            }
        }
        out
    }

    /// Minimum total degree after moving `(px, pt)` to the origin; zero iff
    /// `f(px, pt) != 0`.
    pub fn multiplicity_at(&self, px: &Rational, pt: &Rational) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.translate(px, pt).order().unwrap_or(0))
    }

    /// Substitute the chart coordinates without removing any factor.
    pub fn chart_substitute(&self, chart: Chart) -> Self {
        let terms = self.terms.iter().map(|(&(i, j), c)| {
            let e = match chart {
                Chart::X => (i + j, j),
                Chart::T => (i, i + j),
            };
            (e, c.clone())
        });
        BiPoly {
            terms: terms.collect(),
        }
    }

    /// Blow up the origin and return the strict transform in `chart` together
    /// with the power of the exceptional coordinate that was removed.
    pub fn blowup_chart(&self, chart: Chart) -> Result<(BiPoly, u32), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let m = self.order().unwrap_or(0);
        let terms = self.terms.iter().map(|(&(i, j), c)| {
            let e = match chart {
                Chart::X => (i + j - m, j),
                Chart::T => (i, i + j - m),
            };
            (e, c.clone())
        });
        Ok((
            BiPoly {
                terms: terms.collect(),
            },
            m,
        ))
    }

    /// `h(x) = f(x, t0)`.
    pub fn restrict_t(&self, t0: &Rational) -> UniPoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let i = i as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Rational::zero());
            }
            coeffs[i] += c * &t0.pow(j);
        }
        UniPoly::new(coeffs)
    }

    /// `g(t) = f(x0, t)`.
    pub fn restrict_x(&self, x0: &Rational) -> UniPoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let j = j as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, Rational::zero());
            }
            coeffs[j] += c * &x0.pow(i);
        }
        UniPoly::new(coeffs)
    }

    /// Coefficients of `x` and `t` in the linear part at the origin.
    pub fn linear_part(&self) -> (Rational, Rational) {
        (self.coeff(1, 0), self.coeff(0, 1))
    }

    /// True when `t` divides the polynomial.
    pub fn divisible_by_t(&self) -> bool {
        !self.is_zero() && self.terms.keys().all(|e| e.1 > 0)
    }

    /// Same zero set up to a nonzero constant: scale so the leading term
    /// in canonical order has coefficient one.
    pub fn monic(&self) -> Self {
        match self.sorted_terms().first() {
            Some((_, c)) => self.scale(&c.recip()),
            None => BiPoly::zero(),
        }
    }

    /// Terms in canonical order: `(deg_t, deg_x)` descending.
    pub fn sorted_terms(&self) -> Vec<(Exponent, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by_key(|b| std::cmp::Reverse((b.0 .1, b.0 .0)));
        v
    }
}

fn binomial_table(n: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![Rational::one(); i + 1];
        for k in 1..i {
            row[k] = &rows[i - 1][k - 1] + &rows[i - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Coefficients of `(z + a)^n` in ascending powers of `z`.
fn shifted_powers(binom: &[Vec<Rational>], n: usize, a: &Rational) -> Vec<Rational> {
    (0..=n)
        .map(|k| &binom[n][k] * &a.pow((n - k) as u32))
        .collect()
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, i: u32, j: u32) -> fmt::Result {
    let mut first = true;
    for (name, d) in [("x", i), ("t", j)] {
        if d == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if d == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{d}")?;
        }
    }
    Ok(())
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((i, j), c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let constant = *i == 0 && *j == 0;
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_monomial(f, *i, *j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&Rational::integer(-1))
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn multiplicity_examples() {
        let zero = Rational::zero();
        assert_eq!(p("t^2 - x^3").multiplicity_at(&zero, &zero), Ok(2));
        assert_eq!(p("t - x^5 - x^9").multiplicity_at(&zero, &zero), Ok(1));
        assert_eq!(
            p("t - x^5 - x^9").multiplicity_at(&Rational::one(), &zero),
            Ok(0)
        );
        assert_eq!(
            BiPoly::zero().multiplicity_at(&zero, &zero),
            Err(PolyError::ZeroPolynomial)
        );
        // node at (1, 2)
        let node = p("(x-1)^2 - (t-2)^2 + (x-1)^3");
        assert_eq!(node.multiplicity_at(&q(1, 1), &q(2, 1)), Ok(2));
    }

    #[test]
    fn blowup_examples() {
        assert_eq!(p("t - x^5").blowup_chart(Chart::X), Ok((p("t - x^4"), 1)));
        assert_eq!(p("t^2 - x^3").blowup_chart(Chart::X), Ok((p("t^2 - x"), 2)));
        assert_eq!(p("x").blowup_chart(Chart::T), Ok((p("x"), 1)));
        assert_eq!(p("x").blowup_chart(Chart::X), Ok((p("1"), 1)));
        assert_eq!(
            BiPoly::zero().blowup_chart(Chart::T),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(p("t - x^5 - x^9").to_string(), "t - x^9 - x^5");
        assert_eq!(p("(t-1)*(t-2)").to_string(), "t^2 - 3*t + 2");
        assert_eq!(p("-2/3*x*t + 1/2").to_string(), "-2/3*x*t + 1/2");
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn translate_matches_evaluation() {
        let f = p("t^3 - 2*x^2*t + 5*x - 7");
        let g = f.translate(&q(3, 2), &q(-1, 3));
        for (a, b) in [(q(0, 1), q(0, 1)), (q(2, 1), q(5, 7)), (q(-1, 2), q(3, 1))] {
            assert_eq!(g.eval(&a, &b), f.eval(&(&a + &q(3, 2)), &(&b + &q(-1, 3))));
        }
    }

    #[test]
    fn restrictions() {
        let f = p("(1+x+x^2+x^3+x^4)*(t-1)*(t-2) + (x^5+x^6)*(t-2) + x^7");
        assert_eq!(
            f.restrict_t(&q(2, 1)),
            UniPoly::monomial(Rational::one(), 7)
        );
        assert!(f.restrict_x(&Rational::zero()).eval(&q(1, 1)).is_zero());
        assert!(p("t*x - t").divisible_by_t());
        assert!(!p("t - x").divisible_by_t());
    }

    fn sparse_poly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec(((0u32..7, 0u32..7), -9i64..10, 1i64..5), 0..7)
            .prop_map(|terms| BiPoly::from_terms(terms.into_iter().map(|(e, n, d)| (e, q(n, d)))))
    }

    proptest! {
        #[test]
        fn chart_identity(f in sparse_poly(), use_x in any::<bool>()) {
            prop_assume!(!f.is_zero());
            let chart = if use_x { Chart::X } else { Chart::T };
            let (strict, m) = f.blowup_chart(chart).unwrap();
            let exc = match chart { Chart::X => BiPoly::x(), Chart::T => BiPoly::t() };
            prop_assert_eq!(&exc.pow(m) * &strict, f.chart_substitute(chart));
            prop_assert_eq!(m, f.multiplicity_at(&Rational::zero(), &Rational::zero()).unwrap());
        }

        #[test]
        fn multiplicity_is_additive(f in sparse_poly(), g in sparse_poly(),
                                    px in -2i64..3, pt in -2i64..3) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let (px, pt) = (Rational::integer(px), Rational::integer(pt));
            let fg = &f * &g;
            prop_assert_eq!(
                fg.multiplicity_at(&px, &pt).unwrap(),
                f.multiplicity_at(&px, &pt).unwrap() + g.multiplicity_at(&px, &pt).unwrap()
            );
        }

        #[test]
        fn display_reparses(f in sparse_poly()) {
            prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
        }
    }
}
