//! lc-trivial fibrations with rational fibres over a curve: Cartier index,
//! discriminant `B_Z = sum_p (1 - gamma_p) p`, per-point denominator
//! witnesses and the denominator facts about the moduli part that follow
//! from those of `B_Z`.

mod file;
mod report;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::blowup::{lct_at_fiber_point, BlowupError, Branch, LctMode, WeightedGerm};
use crate::exact::{min_multiplier, Rational};
use crate::poly::{fiber_intersection_profile, BiPoly, IntersectionProfile, PolyError};

pub use file::parse_fibration_file;
pub use report::{moduli_transfer_facts, DiscriminantReport, ModuliFacts, PointReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("degree condition violated: sum of coeff * fiber_degree is {0}, expected 2")]
    DegreeCondition(Rational),
    #[error("coefficient {0} outside the allowed range")]
    CoefficientRange(String),
    #[error("unknown component {0:?}")]
    UnknownComponent(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("declared r = {declared} but the horizontal coefficients give {computed}")]
    CartierMismatch { declared: u64, computed: u64 },
    #[error("no horizontal components")]
    NoComponents,
    #[error("point {label}: {source}")]
    Engine {
        label: String,
        #[source]
        source: BlowupError,
    },
    #[error(
        "point {label}: coefficient {coefficient} of B_Z exceeds 1, the pair is not lc over it"
    )]
    NotLc {
        label: String,
        coefficient: Rational,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

impl FibrationError {
    pub fn is_engine_limitation(&self) -> bool {
        matches!(self, FibrationError::Engine { source, .. } if source.is_engine_limitation())
    }
}

/// A horizontal component `b_k B_k` with `B_k . F = fiber_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub coefficient: Rational,
    pub fiber_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GermSource {
    Explicit(BiPoly),
    /// Shorthand for `t - x^l - x^(l+1)`.
    Tangency(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointGerm {
    pub component: String,
    pub source: GermSource,
}

impl PointGerm {
    pub fn equation(&self) -> BiPoly {
        match &self.source {
            GermSource::Explicit(eq) => eq.clone(),
            GermSource::Tangency(l) => tangency_germ(*l),
        }
    }
}

/// `t - x^l - x^(l+1)`
pub fn tangency_germ(l: u32) -> BiPoly {
    let minus_one = Rational::integer(-1);
    BiPoly::from_terms([
        ((0, 1), Rational::one()),
        ((l, 0), minus_one.clone()),
        ((l + 1, 0), minus_one),
    ])
}

/// A marked base point; every germ sits at `(x, t) = (0, 0)` of the local
/// chart around it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoint {
    pub label: String,
    pub germs: Vec<PointGerm>,
}

/// Vertical part `B^v = f^* Delta`, one entry per base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertical {
    pub label: String,
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationSpec {
    pub components: Vec<Component>,
    pub points: Vec<MarkedPoint>,
    pub vertical: Vec<Vertical>,
    pub declared_r: Option<u64>,
    r: u64,
}

impl FibrationSpec {
    pub fn new(
        components: Vec<Component>,
        points: Vec<MarkedPoint>,
        vertical: Vec<Vertical>,
        declared_r: Option<u64>,
    ) -> Result<Self, FibrationError> {
        if components.is_empty() {
            return Err(FibrationError::NoComponents);
        }
        for c in &components {
            if !c.coefficient.is_positive() || c.coefficient > Rational::one() {
                return Err(FibrationError::CoefficientRange(format!(
                    "{} of component {}",
                    c.coefficient, c.id
                )));
            }
        }
        let degree: Rational = components
            .iter()
            .map(|c| &c.coefficient * &Rational::from(u64::from(c.fiber_degree)))
            .sum();
        if degree != Rational::integer(2) {
            return Err(FibrationError::DegreeCondition(degree));
        }
        for p in &points {
            for g in &p.germs {
                if !components.iter().any(|c| c.id == g.component) {
                    return Err(FibrationError::UnknownComponent(g.component.clone()));
                }
            }
        }
        for v in &vertical {
            if !v.coefficient.is_positive() {
                return Err(FibrationError::CoefficientRange(format!(
                    "{} of vertical {}",
                    v.coefficient, v.label
                )));
            }
        }
        let mut spec = FibrationSpec {
            components,
            points,
            vertical,
            declared_r,
            r: 0,
        };
        spec.r = cartier_index(&spec)?;
        Ok(spec)
    }

    /// Cartier index, resolved at construction.
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn vertical_at(&self, label: &str) -> Rational {
        self.vertical
            .iter()
            .find(|v| v.label == label)
            .map_or_else(Rational::zero, |v| v.coefficient.clone())
    }

    /// Copy with `delta` added to the vertical part.
    pub fn with_vertical_shift(&self, delta: &[Vertical]) -> Result<Self, FibrationError> {
        let mut vertical = self.vertical.clone();
        for d in delta {
            match vertical.iter_mut().find(|v| v.label == d.label) {
                Some(v) => v.coefficient += &d.coefficient,
                None => vertical.push(d.clone()),
            }
        }
        FibrationSpec::new(
            self.components.clone(),
            self.points.clone(),
            vertical,
            self.declared_r,
        )
    }

    fn germ_at(&self, point: &MarkedPoint) -> Result<WeightedGerm, FibrationError> {
        let branches = point
            .germs
            .iter()
            .map(|g| Branch {
                equation: g.equation(),
                coefficient: self
                    .component(&g.component)
                    .expect("validated component")
                    .coefficient
                    .clone(),
            })
            .collect();
        WeightedGerm::new(branches).map_err(|source| FibrationError::Engine {
            label: point.label.clone(),
            source,
        })
    }
}

/// lcm of the reduced denominators of the horizontal coefficients; must
/// agree with a declared value.
pub fn cartier_index(spec: &FibrationSpec) -> Result<u64, FibrationError> {
    let computed = min_multiplier(spec.components.iter().map(|c| &c.coefficient))
        .map_err(|_| FibrationError::NoComponents)?
        .to_u64()
        .expect("Cartier index fits in u64");
    match spec.declared_r {
        Some(declared) if declared != computed => {
            Err(FibrationError::CartierMismatch { declared, computed })
        }
        _ => Ok(computed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscriminantOptions {
    pub mode: LctMode,
    pub max_steps: Option<usize>,
    /// Worker threads for per-point work; 1 runs inline.
    pub jobs: usize,
}

impl Default for DiscriminantOptions {
    fn default() -> Self {
        DiscriminantOptions {
            mode: LctMode::CrossCheck,
            max_steps: None,
            jobs: 1,
        }
    }
}

/// Outcome of the profile check of one explicit germ against its fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileCheck {
    /// Tangency shorthand: a purely local datum, nothing to check globally.
    Local,
    Computed(IntersectionProfile),
    Failed(PolyError),
}

fn point_report(
    spec: &FibrationSpec,
    point: &MarkedPoint,
    opts: &DiscriminantOptions,
) -> Result<PointReport, FibrationError> {
    let germ = spec.germ_at(point)?;
    let result = lct_at_fiber_point(&germ, opts.mode, opts.max_steps).map_err(|source| {
        FibrationError::Engine {
            label: point.label.clone(),
            source,
        }
    })?;
    let profiles = point
        .germs
        .iter()
        .map(|g| {
            let check = match &g.source {
                GermSource::Tangency(_) => ProfileCheck::Local,
                GermSource::Explicit(eq) => {
                    let d = spec
                        .component(&g.component)
                        .expect("validated")
                        .fiber_degree;
                    match fiber_intersection_profile(eq, &Rational::zero(), d) {
                        Ok(p) => ProfileCheck::Computed(p),
                        Err(e) => ProfileCheck::Failed(e),
                    }
                }
            };
            (g.component.clone(), check)
        })
        .collect();
    let horizontal = Rational::one() - &result.gamma;
    Ok(PointReport::new(
        point.label.clone(),
        result.gamma,
        horizontal,
        spec.vertical_at(&point.label),
        result.closed_form,
        result.chain.map(|c| c.len()),
        profiles,
    ))
}

/// Per marked point the threshold `gamma_p` and the coefficient of `B_Z`,
/// shifted by the vertical part; vertical-only labels follow with
/// `gamma = 1`. Denominator fields are filled by [`denominator_report`].
pub fn discriminant(
    spec: &FibrationSpec,
    opts: &DiscriminantOptions,
) -> Result<DiscriminantReport, FibrationError> {
    let results: Vec<Result<PointReport, FibrationError>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| FibrationError::Pool(e.to_string()))?;
        pool.install(|| {
            spec.points
                .par_iter()
                .map(|p| point_report(spec, p, opts))
                .collect()
        })
    } else {
        spec.points
            .iter()
            .map(|p| point_report(spec, p, opts))
            .collect()
    };
    let mut points = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    for v in &spec.vertical {
        if !spec.points.iter().any(|p| p.label == v.label) {
            points.push(PointReport::new(
                v.label.clone(),
                Rational::one(),
                Rational::zero(),
                v.coefficient.clone(),
                None,
                None,
                Vec::new(),
            ));
        }
    }
    for p in &points {
        if p.coefficient > Rational::one() {
            return Err(FibrationError::NotLc {
                label: p.label.clone(),
                coefficient: p.coefficient.clone(),
            });
        }
    }
    Ok(DiscriminantReport::new(spec.r(), points))
}

/// Fill in per-point witnesses and the global denominators.
pub fn denominator_report(mut report: DiscriminantReport) -> DiscriminantReport {
    let r = report.r;
    let r_big = BigUint::from(r);
    for p in &mut report.points {
        let v = p.coefficient.denom().magnitude().clone();
        let witness_l = &v / v.gcd(&r_big);
        let scaled = &p.coefficient * &Rational::from_bigint((&r_big * &witness_l).into());
        p.witness = Some(Witness {
            denominator: v.clone(),
            ok: witness_l <= BigUint::from(2 * r) && scaled.is_integer(),
            within_2r2: v <= BigUint::from(2 * r * r),
            applies: (&p.vertical * &Rational::from(r)).is_integer(),
            l: witness_l,
        });
    }
    let den = if report.points.is_empty() {
        BigUint::one()
    } else {
        min_multiplier(report.points.iter().map(|p| &p.coefficient)).expect("non-empty")
    };
    report.moduli = Some(moduli_transfer_facts(&den, r));
    report.den_bz = Some(den);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn run(text: &str) -> DiscriminantReport {
        let spec = parse_fibration_file(text).unwrap();
        denominator_report(discriminant(&spec, &DiscriminantOptions::default()).unwrap())
    }

    const CEX: &str = "\
component D coeff=2/9 fiber_degree=9
point label=o component=D germ=\"t - x^5 - x^9\"
";

    #[test]
    fn cartier_examples() {
        let spec = parse_fibration_file(CEX).unwrap();
        assert_eq!(cartier_index(&spec), Ok(9));
        let spec = parse_fibration_file("component D coeff=1/3 fiber_degree=6\n").unwrap();
        assert_eq!(cartier_index(&spec), Ok(3));
        let four = "\
component A coeff=1/2 fiber_degree=1
component B coeff=1/2 fiber_degree=1
component C coeff=1/2 fiber_degree=1
component E coeff=1/2 fiber_degree=1
";
        assert_eq!(cartier_index(&parse_fibration_file(four).unwrap()), Ok(2));
    }

    #[test]
    fn cex_discriminant() {
        let rep = run(CEX);
        assert_eq!(rep.r, 9);
        let o = &rep.points[0];
        assert_eq!(o.gamma, q(44, 45));
        assert_eq!(o.coefficient, q(1, 45));
        let w = o.witness.as_ref().unwrap();
        assert_eq!(w.l, BigUint::from(5u32));
        assert!(w.ok && w.within_2r2);
        assert_eq!(rep.den_bz, Some(BigUint::from(45u32)));
        let m = rep.moduli.as_ref().unwrap();
        assert_eq!(m.den_mz_divides, BigUint::from(405u32));
        assert_eq!(m.den_mz_multiple_of, BigUint::from(5u32));
        assert!(rep.verified());
    }

    #[test]
    fn transversal_only_gives_zero() {
        let rep = run("\
component D coeff=1/2 fiber_degree=4
point label=a component=D germ=\"t - x\"
point label=b component=D germ=\"x + 2*t\"
");
        assert!(rep.points.iter().all(|p| p.coefficient.is_zero()));
        assert_eq!(rep.den_bz, Some(BigUint::one()));
    }

    #[test]
    fn vertical_shift() {
        let rep = run(&format!(
            "{CEX}vertical label=o coeff=1/3\nvertical label=z coeff=1/2\n"
        ));
        assert_eq!(rep.points[0].coefficient, q(16, 45));
        assert_eq!(rep.points[1].label, "z");
        assert_eq!(rep.points[1].gamma, q(1, 1));
        assert_eq!(rep.points[1].coefficient, q(1, 2));
        assert_eq!(rep.den_bz, Some(BigUint::from(90u32)));
    }

    #[test]
    fn vertical_overflow_is_not_lc() {
        let spec = parse_fibration_file(&format!("{CEX}vertical label=o coeff=1\n")).unwrap();
        assert!(matches!(
            discriminant(&spec, &DiscriminantOptions::default()),
            Err(FibrationError::NotLc { .. })
        ));
    }

    #[test]
    fn tangency_shorthand_and_parallel() {
        let text = "\
component D coeff=1/3 fiber_degree=6
point label=p5 component=D tangency=5
point label=p4 component=D tangency=4
point label=p3 component=D tangency=3
";
        let spec = parse_fibration_file(text).unwrap();
        let serial = discriminant(&spec, &DiscriminantOptions::default()).unwrap();
        let parallel = discriminant(
            &spec,
            &DiscriminantOptions {
                jobs: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(serial, parallel);
        let gammas: Vec<_> = serial.points.iter().map(|p| p.gamma.clone()).collect();
        assert_eq!(gammas, vec![q(13, 15), q(11, 12), q(1, 1)]);
        let rep = denominator_report(serial);
        assert_eq!(rep.den_bz, Some(BigUint::from(60u32)));
    }

    #[test]
    fn engine_errors_are_labelled() {
        let text = "\
component D coeff=1/2 fiber_degree=4
point label=bad component=D germ=\"(t^2 - 2*x^2)^2 + x^5\"
";
        let spec = parse_fibration_file(text).unwrap();
        let err = discriminant(&spec, &DiscriminantOptions::default()).unwrap_err();
        assert!(err.is_engine_limitation());
        assert!(err.to_string().starts_with("point bad:"));
    }

    #[test]
    fn witness_examples() {
        let spec = parse_fibration_file(
            "component D coeff=1/3 fiber_degree=6\npoint label=o component=D tangency=5\n",
        )
        .unwrap();
        let rep = denominator_report(discriminant(&spec, &DiscriminantOptions::default()).unwrap());
        let w = rep.points[0].witness.as_ref().unwrap();
        assert_eq!(w.denominator, BigUint::from(15u32));
        assert_eq!(w.l, BigUint::from(5u32));
        assert!(w.ok);
        // 15 = 2r^2 - r
        assert_eq!(w.denominator, BigUint::from(2 * 9 - 3u32));
    }
}
