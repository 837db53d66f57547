//! Generators and verifiers for explicit fibration families.
//!
//! Every family lives on `P^1 x P^1 -> P^1` with a single horizontal
//! component `D` of fibre degree `d` and coefficient `2/d`. Germs are written
//! in the `y = 1` chart with the marked point moved to the origin. A
//! [`Recipe`] carries its predictions, computed from the parameters alone;
//! [`verify_recipe`] runs the full pipeline and compares.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::blowup::LctMode;
use crate::bounds::{h_exponent, reduced_bound, s_exponent, BoundsError};
use crate::exact::{gcd_u64, min_multiplier, primes_upto, Rational};
use crate::fibration::{
    denominator_report, discriminant, parse_fibration_file, Component, DiscriminantOptions,
    DiscriminantReport, FibrationError, FibrationSpec, GermSource, MarkedPoint, PointGerm,
    ProfileCheck,
};
use crate::poly::{fiber_intersection_profile, BiPoly, PolyError};

/// Shifted base points tried by [`multipoint_recipe`] before giving up.
const MAX_OFFSET_RETRIES: i64 = 32;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("profile check failed at t = {o}: {reason}")]
    ProfileFailure { o: Rational, reason: String },
    #[error("no tuple of {n} values for d = {d} satisfies the multipoint conditions")]
    SearchExhausted { d: u64, n: usize },
    #[error("generated file does not parse back to the same fibration")]
    RoundTrip,
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl ConstructionError {
    pub fn is_engine_limitation(&self) -> bool {
        match self {
            ConstructionError::Fibration(e) => e.is_engine_limitation(),
            _ => false,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParameters(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecipeKind {
    Cex,
    Sharp,
    Multipoint,
    Mainteo3,
}

impl fmt::Display for RecipeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecipeKind::Cex => "cex",
            RecipeKind::Sharp => "sharp",
            RecipeKind::Multipoint => "multipoint",
            RecipeKind::Mainteo3 => "mainteo3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecipeParams {
    Cex {
        l: u64,
        d: u64,
    },
    Sharp {
        r: u64,
    },
    Multipoint {
        d: u64,
        ls: Vec<u64>,
        os: Vec<Rational>,
    },
    Mainteo3 {
        r: u64,
        ls: Vec<u64>,
        excluded: Option<u64>,
        os: Vec<Rational>,
    },
}

/// The check applied to `V = den(B_Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Equals(BigUint),
    AtLeast(BigUint),
}

impl Expectation {
    pub fn holds(&self, v: &BigUint) -> bool {
        match self {
            Expectation::Equals(e) => v == e,
            Expectation::AtLeast(e) => v >= e,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Equals(e) => write!(f, "expected={e}"),
            Expectation::AtLeast(e) => write!(f, "expected>={e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub label: String,
    pub contact: u64,
    pub gamma: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub kind: RecipeKind,
    pub params: RecipeParams,
    pub generated: FibrationSpec,
    pub predictions: Vec<Prediction>,
    /// Value of `V` implied by the predicted thresholds.
    pub predicted_v: BigUint,
    pub expectation: Expectation,
    pub flags: Vec<String>,
}

fn single_component(d: u64) -> Component {
    Component {
        id: "D".into(),
        coefficient: Rational::new(2, d as i64),
        fiber_degree: d as u32,
    }
}

fn explicit_point(label: &str, germ: BiPoly) -> MarkedPoint {
    MarkedPoint {
        label: label.into(),
        germs: vec![PointGerm {
            component: "D".into(),
            source: GermSource::Explicit(germ),
        }],
    }
}

fn predicted_gamma(l: u64, d: u64) -> Rational {
    let g = Rational::one() + Rational::new(1, l as i64) - Rational::new(2, d as i64);
    g.min(Rational::one())
}

fn implied_v(predictions: &[Prediction]) -> BigUint {
    if predictions.is_empty() {
        return BigUint::one();
    }
    let coeffs: Vec<Rational> = predictions
        .iter()
        .map(|p| Rational::one() - &p.gamma)
        .collect();
    min_multiplier(&coeffs).expect("non-empty")
}

fn cartier_of(d: u64) -> u64 {
    if d.is_multiple_of(2) {
        d / 2
    } else {
        d
    }
}

/// `t - x^l - x^d` on a component of degree `d` and coefficient `2/d`.
pub fn cex_family(l: u64, d: u64) -> Result<Recipe, ConstructionError> {
    if d < 2 || l == 0 || 2 * l < d || l > d {
        return Err(invalid(format!(
            "need d >= 2 and d/2 <= l <= d, got l = {l}, d = {d}"
        )));
    }
    let mut flags = Vec::new();
    if l == d {
        flags.push(format!("l = d = {d}: tangency block is degenerate"));
    }
    let germ = BiPoly::from_terms([
        ((0, 1), Rational::one()),
        ((l as u32, 0), Rational::integer(-1)),
        ((d as u32, 0), Rational::integer(-1)),
    ]);
    let spec = FibrationSpec::new(
        vec![single_component(d)],
        vec![explicit_point("o", germ)],
        Vec::new(),
        Some(cartier_of(d)),
    )?;
    let predictions = vec![Prediction {
        label: "o".into(),
        contact: l,
        gamma: predicted_gamma(l, d),
    }];
    let v = implied_v(&predictions);
    Ok(Recipe {
        kind: RecipeKind::Cex,
        params: RecipeParams::Cex { l, d },
        generated: spec,
        expectation: Expectation::Equals(v.clone()),
        predicted_v: v,
        predictions,
        flags,
    })
}

/// `cex_family(2r - 1, 2r)`, whose denominator is `2r^2 - r`.
pub fn sharp_family(r: u64) -> Result<Recipe, ConstructionError> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(invalid(format!("r must be odd and at least 3, got {r}")));
    }
    let mut recipe = cex_family(2 * r - 1, 2 * r)?;
    recipe.kind = RecipeKind::Sharp;
    recipe.params = RecipeParams::Sharp { r };
    recipe.expectation = Expectation::Equals(BigUint::from(2 * r * r - r));
    Ok(recipe)
}

/// `x^a + x^(a+1) + ... + x^(b-1)`
fn block(a: u64, b: u64) -> BiPoly {
    BiPoly::from_terms((a..b).map(|k| ((k as u32, 0), Rational::one())))
}

/// The divisor `D_0`: a sum of blocks `x^(l_(k-1)) + ... + x^(l_k - 1)`
/// times `prod_{i >= k} (t - o_i)`, with `l_0 = 0` and `l_(N+1) = d`.
/// Its restriction to `t = o_i` has valuation exactly `l_i`, which is
/// checked together with simplicity of every other intersection.
pub fn multipoint_polynomial(
    d: u64,
    ls: &[u64],
    os: &[Rational],
) -> Result<BiPoly, ConstructionError> {
    if ls.len() != os.len() {
        return Err(invalid("ls and os differ in length"));
    }
    if ls.first().is_some_and(|&l| l == 0) || ls.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("ls must be positive and strictly increasing"));
    }
    if ls.last().is_some_and(|&l| l >= d) {
        return Err(invalid(format!("every l_i must be below d = {d}")));
    }
    for (i, a) in os.iter().enumerate() {
        if os[..i].contains(a) {
            return Err(invalid(format!("base point {a} repeated")));
        }
    }

    let n = ls.len();
    let bounds: Vec<u64> = std::iter::once(0)
        .chain(ls.iter().copied())
        .chain(std::iter::once(d))
        .collect();
    let mut poly = BiPoly::zero();
    // tail = prod_{i >= k} (t - o_i), built from the right
    let mut tail = BiPoly::one();
    for k in (1..=n + 1).rev() {
        poly = &poly + &(&block(bounds[k - 1], bounds[k]) * &tail);
        if k >= 2 {
            tail = &tail * &(&BiPoly::t() - &BiPoly::constant(os[k - 2].clone()));
        }
    }

    for (l, o) in ls.iter().zip(os) {
        let profile = fiber_intersection_profile(&poly, o, d as u32)?;
        if u64::from(profile.contact_at_origin()) != *l {
            return Err(ConstructionError::ProfileFailure {
                o: o.clone(),
                reason: format!("contact {} instead of {l}", profile.contact_at_origin()),
            });
        }
        if let Some(reason) = profile.failure() {
            return Err(ConstructionError::ProfileFailure {
                o: o.clone(),
                reason: reason.into(),
            });
        }
    }
    Ok(poly)
}

fn integer_points(n: usize, offset: i64) -> Vec<Rational> {
    (1..=n as i64)
        .map(|i| Rational::integer(i + offset))
        .collect()
}

/// Build `D_0` on the default points `1..N`, shifting them by `1, 2, ...`
/// when a residual fails to be squarefree.
fn multipoint_with_retry(
    d: u64,
    ls: &[u64],
    os: Option<Vec<Rational>>,
) -> Result<(BiPoly, Vec<Rational>), ConstructionError> {
    if let Some(os) = os {
        let poly = multipoint_polynomial(d, ls, &os)?;
        return Ok((poly, os));
    }
    let mut last_err = None;
    for offset in 0..MAX_OFFSET_RETRIES {
        let os = integer_points(ls.len(), offset);
        match multipoint_polynomial(d, ls, &os) {
            Ok(poly) => return Ok((poly, os)),
            Err(e @ ConstructionError::ProfileFailure { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn multipoint_spec(
    d: u64,
    ls: &[u64],
    poly: &BiPoly,
    os: &[Rational],
) -> Result<(FibrationSpec, Vec<Prediction>), ConstructionError> {
    let mut points = Vec::new();
    let mut predictions = Vec::new();
    for (i, (l, o)) in ls.iter().zip(os).enumerate() {
        let label = format!("o{}", i + 1);
        points.push(explicit_point(&label, poly.translate(&Rational::zero(), o)));
        predictions.push(Prediction {
            label,
            contact: *l,
            gamma: predicted_gamma(*l, d),
        });
    }
    let spec = FibrationSpec::new(
        vec![single_component(d)],
        points,
        Vec::new(),
        Some(cartier_of(d)),
    )?;
    Ok((spec, predictions))
}

/// Outcome of the multipoint conditions, with one reason per violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiegoneCheck {
    pub pass: bool,
    pub reasons: Vec<String>,
}

/// `d` even, `2 l_i >= d`, the `l_i` pairwise coprime and each coprime to `d`.
pub fn spiegone_check(d: u64, ls: &[u64]) -> SpiegoneCheck {
    let mut reasons = Vec::new();
    if !d.is_multiple_of(2) {
        reasons.push(format!("d = {d} is odd"));
    }
    for &l in ls {
        if 2 * l < d {
            reasons.push(format!("2*{l} < d = {d}"));
        }
        if gcd_u64(l, d) != 1 {
            reasons.push(format!("gcd({l}, {d}) = {}", gcd_u64(l, d)));
        }
    }
    for (i, &a) in ls.iter().enumerate() {
        for &b in &ls[i + 1..] {
            if gcd_u64(a, b) != 1 {
                reasons.push(format!("gcd({a}, {b}) = {}", gcd_u64(a, b)));
            }
        }
    }
    SpiegoneCheck {
        pass: reasons.is_empty(),
        reasons,
    }
}

/// The multipoint family. Under the multipoint conditions the check is
/// `V >= r^(N+1)`; otherwise `V` must equal the value implied by the
/// predicted thresholds.
pub fn multipoint_recipe(
    d: u64,
    ls: &[u64],
    os: Option<Vec<Rational>>,
) -> Result<Recipe, ConstructionError> {
    if ls.is_empty() {
        return Err(invalid("at least one tangency order is required"));
    }
    if d < 2 {
        return Err(invalid("d must be at least 2"));
    }
    let (poly, os) = multipoint_with_retry(d, ls, os)?;
    let (spec, predictions) = multipoint_spec(d, ls, &poly, &os)?;
    let v = implied_v(&predictions);
    let check = spiegone_check(d, ls);
    let expectation = if check.pass {
        let r = BigUint::from(d / 2);
        Expectation::AtLeast(r.pow(ls.len() as u32 + 1))
    } else {
        Expectation::Equals(v.clone())
    };
    let flags = check
        .reasons
        .into_iter()
        .map(|r| format!("multipoint condition fails: {r}"))
        .collect();
    Ok(Recipe {
        kind: RecipeKind::Multipoint,
        params: RecipeParams::Multipoint {
            d,
            ls: ls.to_vec(),
            os,
        },
        generated: spec,
        predictions,
        predicted_v: v,
        expectation,
        flags,
    })
}

fn search_tuple(d: u64, n: usize) -> Option<Vec<u64>> {
    fn extend(d: u64, n: usize, start: u64, acc: &mut Vec<u64>) -> bool {
        if acc.len() == n {
            return true;
        }
        for l in start..d {
            if gcd_u64(l, d) == 1 && acc.iter().all(|&a| gcd_u64(a, l) == 1) {
                acc.push(l);
                if extend(d, n, l + 1, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    extend(d, n, d.div_ceil(2), &mut acc).then_some(acc)
}

/// Lexicographically smallest `l_1 < ... < l_N < d` with `d = 2r` passing
/// [`spiegone_check`].
pub fn find_l_tuple(r: u64, n: usize) -> Result<Vec<u64>, ConstructionError> {
    if r == 0 || n == 0 {
        return Err(invalid("r and N must be positive"));
    }
    search_tuple(2 * r, n).ok_or(ConstructionError::SearchExhausted { d: 2 * r, n })
}

/// Like [`find_l_tuple`] but tries every even `d` from `2r` up to `d_max`.
pub fn find_l_tuple_raising_d(
    r: u64,
    n: usize,
    d_max: u64,
) -> Result<(u64, Vec<u64>), ConstructionError> {
    if r == 0 || n == 0 {
        return Err(invalid("r and N must be positive"));
    }
    (2 * r..=d_max)
        .step_by(2)
        .find_map(|d| search_tuple(d, n).map(|ls| (d, ls)))
        .ok_or(ConstructionError::SearchExhausted { d: d_max, n })
}

/// Values `2^h(q) q^s(q)` over primes `q < 2r`, sorted, split into the
/// retained ones and the degenerate value `2r` if present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSet {
    pub r: u64,
    pub d: u64,
    pub values: Vec<u64>,
    pub retained: Vec<u64>,
    pub excluded: Option<u64>,
}

pub fn mainteo3_l_set(r: u64) -> Result<LSet, ConstructionError> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(invalid(format!("r must be odd and at least 3, got {r}")));
    }
    let d = 2 * r;
    let mut values = Vec::new();
    for q in primes_upto(d - 1) {
        let h = h_exponent(q, r)?;
        values.push((1u64 << h) * q.pow(s_exponent(q, r)?));
    }
    values.sort_unstable();
    let retained: Vec<u64> = values.iter().copied().filter(|&l| l != d).collect();
    let excluded = values.iter().copied().find(|&l| l == d);
    Ok(LSet {
        r,
        d,
        values,
        retained,
        excluded,
    })
}

pub fn mainteo3_recipe(r: u64) -> Result<Recipe, ConstructionError> {
    let set = mainteo3_l_set(r)?;
    let (poly, os) = multipoint_with_retry(set.d, &set.retained, None)?;
    let (spec, predictions) = multipoint_spec(set.d, &set.retained, &poly, &os)?;
    let mut flags = Vec::new();
    if let Some(x) = set.excluded {
        flags.push(format!(
            "l = {x} = d is degenerate and excluded from the divisor"
        ));
    }
    Ok(Recipe {
        kind: RecipeKind::Mainteo3,
        params: RecipeParams::Mainteo3 {
            r,
            ls: set.retained.clone(),
            excluded: set.excluded,
            os,
        },
        generated: spec,
        predicted_v: implied_v(&predictions),
        predictions,
        expectation: Expectation::Equals(reduced_bound(r)?),
        flags,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCheck {
    pub label: String,
    pub predicted: Rational,
    pub engine: Rational,
    pub contact: u64,
    /// Contact order and transversality confirmed on the fibre.
    pub profile_ok: bool,
}

impl PointCheck {
    pub fn matches(&self) -> bool {
        self.predicted == self.engine
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub kind: RecipeKind,
    pub points: Vec<PointCheck>,
    pub v: BigUint,
    pub expectation: Expectation,
    pub witnesses_ok: bool,
    /// Kind-specific facts, as `(key, value)` pairs, that do not affect
    /// the verdict.
    pub extras: Vec<(String, String)>,
    pub flags: Vec<String>,
    pub discriminant: DiscriminantReport,
}

impl VerificationReport {
    pub fn v_ok(&self) -> bool {
        self.expectation.holds(&self.v)
    }

    pub fn passed(&self) -> bool {
        self.v_ok() && self.witnesses_ok && self.points.iter().all(|p| p.matches() && p.profile_ok)
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "V={} {} {}",
            self.v,
            self.expectation,
            if self.passed() { "pass" } else { "fail" }
        )
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "recipe {}", self.kind).unwrap();
        for f in &self.flags {
            writeln!(s, "  flag: {f}").unwrap();
        }
        for p in &self.points {
            writeln!(
                s,
                "  {}: contact {}, predicted gamma {}, engine gamma {}{}{}",
                p.label,
                p.contact,
                p.predicted,
                p.engine,
                if p.matches() { "" } else { "  MISMATCH" },
                if p.profile_ok { "" } else { "  PROFILE FAILED" },
            )
            .unwrap();
        }
        if !self.witnesses_ok {
            writeln!(s, "  witness check failed").unwrap();
        }
        for (k, v) in &self.extras {
            writeln!(s, "  {k} = {v}").unwrap();
        }
        writeln!(s, "{}", self.verdict_line()).unwrap();
        s
    }

    pub fn porcelain(&self) -> Vec<String> {
        let mut out = vec![format!("recipe.kind={}", self.kind)];
        for p in &self.points {
            let k = format!("recipe.point.{}", p.label);
            out.push(format!("{k}.contact={}", p.contact));
            out.push(format!("{k}.predicted={}", p.predicted));
            out.push(format!("{k}.engine={}", p.engine));
            out.push(format!("{k}.match={}", p.matches()));
            out.push(format!("{k}.profile_ok={}", p.profile_ok));
        }
        out.push(format!("recipe.V={}", self.v));
        match &self.expectation {
            Expectation::Equals(e) => out.push(format!("recipe.expected_eq={e}")),
            Expectation::AtLeast(e) => out.push(format!("recipe.expected_ge={e}")),
        }
        out.push(format!("recipe.witnesses_ok={}", self.witnesses_ok));
        for (k, v) in &self.extras {
            out.push(format!("recipe.{k}={v}"));
        }
        out.push(format!("recipe.pass={}", self.passed()));
        out
    }
}

/// Round-trip the generated spec through the file format, compute the
/// discriminant with cross-checked thresholds and compare against the
/// recipe.
pub fn verify_recipe(
    recipe: &Recipe,
    jobs: usize,
) -> Result<VerificationReport, ConstructionError> {
    let parsed = parse_fibration_file(&recipe.generated.to_file_text())?;
    if parsed != recipe.generated {
        return Err(ConstructionError::RoundTrip);
    }
    let opts = DiscriminantOptions {
        mode: LctMode::CrossCheck,
        max_steps: None,
        jobs: jobs.max(1),
    };
    let report = denominator_report(discriminant(&parsed, &opts)?);

    let mut points = Vec::new();
    for pred in &recipe.predictions {
        let Some(p) = report.point(&pred.label) else {
            return Err(invalid(format!("point {} missing from report", pred.label)));
        };
        let profile_ok = p.profiles.iter().all(|(_, check)| match check {
            ProfileCheck::Local => true,
            ProfileCheck::Computed(prof) => {
                u64::from(prof.contact_at_origin()) == pred.contact && prof.others_simple()
            }
            ProfileCheck::Failed(_) => false,
        });
        points.push(PointCheck {
            label: pred.label.clone(),
            predicted: pred.gamma.clone(),
            engine: p.gamma.clone(),
            contact: pred.contact,
            profile_ok,
        });
    }
    let witnesses_ok = report
        .points
        .iter()
        .all(|p| p.witness.as_ref().is_some_and(|w| w.ok));
    let v = report.den_bz.clone().expect("filled by denominator_report");
    let r = report.r;

    let mut extras = Vec::new();
    match &recipe.params {
        RecipeParams::Cex { .. } | RecipeParams::Sharp { .. } => {
            if let Some(p) = report.points.first() {
                let scaled = &p.coefficient * &Rational::from(12 * r);
                extras.push(("twelve_r_coeff".into(), scaled.to_string()));
                extras.push((
                    "twelve_r_coeff_integral".into(),
                    scaled.is_integer().to_string(),
                ));
            }
        }
        RecipeParams::Multipoint { ls, .. } => {
            let strong = BigUint::from(2u32) * BigUint::from(r).pow(ls.len() as u32 + 1);
            extras.push(("strong_bound".into(), strong.to_string()));
            extras.push(("strong_bound_holds".into(), (v >= strong).to_string()));
        }
        RecipeParams::Mainteo3 { excluded, .. } => {
            if let Some(x) = excluded {
                let excluded_den = (Rational::one() - predicted_gamma(*x, 2 * r))
                    .denom()
                    .magnitude()
                    .clone();
                let with = v.lcm(&excluded_den);
                extras.push(("excluded_l".into(), x.to_string()));
                extras.push(("excluded_den".into(), excluded_den.to_string()));
                extras.push(("V_with_excluded".into(), with.to_string()));
                extras.push(("exclusion_changes_V".into(), (with != v).to_string()));
            }
            extras.push(("reduced_bound".into(), reduced_bound(r)?.to_string()));
        }
    }

    Ok(VerificationReport {
        kind: recipe.kind,
        points,
        v,
        expectation: recipe.expectation.clone(),
        witnesses_ok,
        extras,
        flags: recipe.flags.clone(),
        discriminant: report,
    })
}

/// Every recipe exercised by the built-in verification suite.
pub fn standard_recipes() -> Result<Vec<Recipe>, ConstructionError> {
    let mut out = vec![cex_family(5, 9)?, cex_family(13, 25)?];
    for r in [3, 5, 7] {
        out.push(sharp_family(r)?);
    }
    out.push(multipoint_recipe(8, &[5, 7], None)?);
    out.push(multipoint_recipe(6, &[5], None)?);
    for r in [3, 5, 7] {
        out.push(mainteo3_recipe(r)?);
    }
    Ok(out)
}
