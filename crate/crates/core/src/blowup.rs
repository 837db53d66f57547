//! Infinitely-near points over a fibre point and the log canonical
//! threshold of the fibre.
//!
//! Every exceptional divisor `E_i` produced while resolving carries the
//! triple `(e_i, a_i, alpha_i)`: its coefficient in the relative canonical
//! divisor, in the pullback of the fibre, and in the pullback of the
//! boundary. Blowing up a point `p` gives
//!
//! ```text
//! e     = 1 + sum of e_j over exceptional E_j through p
//! a     = mult_p(fibre) + sum of a_j
//! alpha = sum_k b_k mult_p(branch_k) + sum of alpha_j
//! ```
//!
//! and once the total transform is simple normal crossing the threshold is
//! `min { 1, min_i (1 + e_i - alpha_i) / a_i }`.

use std::fmt;

use thiserror::Error;

use crate::exact::Rational;
use crate::poly::{BiPoly, Chart, PolyError, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("branch coefficient {0} is outside (0, 1]")]
    CoefficientOutOfRange(Rational),
    #[error("branch {0} does not pass through the origin")]
    BranchMissesOrigin(BiPoly),
    #[error("branch {0} contains the fibre t = 0")]
    BranchContainsFibre(BiPoly),
    #[error("germ has no branches")]
    EmptyGerm,
    #[error("branches {0} and {1} share a component")]
    RepeatedBranch(usize, usize),
    #[error("blow-up centre is not over the base point: {0}")]
    CentreNotOverBasePoint(String),
    #[error("resolution did not reach simple normal crossings within {0} blow-ups")]
    IterationCap(usize),
    #[error("blow-up centre with non-rational coordinates on E{exceptional} (roots of {locus})")]
    NonRationalCentre { exceptional: usize, locus: UniPoly },
    #[error("closed form needs a single branch smooth at the origin")]
    ClosedFormNotApplicable,
    #[error("tangency order must be positive")]
    ZeroTangency,
    #[error("closed form gives {closed}, resolution gives {engine}")]
    CrossCheckMismatch {
        closed: Box<Rational>,
        engine: Box<Rational>,
    },
    #[error("threshold {0} is not positive: the boundary alone is not klt over the point")]
    NonPositiveThreshold(Rational),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl BlowupError {
    /// Limitations of the engine rather than bad input.
    pub fn is_engine_limitation(&self) -> bool {
        matches!(
            self,
            BlowupError::NonRationalCentre { .. }
                | BlowupError::IterationCap(_)
                | BlowupError::Poly(PolyError::RootSearchTooLarge(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub equation: BiPoly,
    pub coefficient: Rational,
}

/// Boundary germ `sum b_k B_k` at the origin; the fibre is `{t = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGerm {
    branches: Vec<Branch>,
}

impl WeightedGerm {
    pub fn new(branches: Vec<Branch>) -> Result<Self, BlowupError> {
        if branches.is_empty() {
            return Err(BlowupError::EmptyGerm);
        }
        for b in &branches {
            if !b.coefficient.is_positive() || b.coefficient > Rational::one() {
                return Err(BlowupError::CoefficientOutOfRange(b.coefficient.clone()));
            }
            if b.equation.is_zero() || !b.equation.vanishes_at_origin() {
                return Err(BlowupError::BranchMissesOrigin(b.equation.clone()));
            }
            if b.equation.divisible_by_t() {
                return Err(BlowupError::BranchContainsFibre(b.equation.clone()));
            }
        }
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                if branches[i].equation.monic() == branches[j].equation.monic() {
                    return Err(BlowupError::RepeatedBranch(i, j));
                }
            }
        }
        Ok(WeightedGerm { branches })
    }

    pub fn single(equation: BiPoly, coefficient: Rational) -> Result<Self, BlowupError> {
        WeightedGerm::new(vec![Branch {
            equation,
            coefficient,
        }])
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Sum over branches of the intersection multiplicity with the fibre at
    /// the origin.
    pub fn total_contact(&self) -> u32 {
        self.branches
            .iter()
            .map(|b| contact_order(&b.equation).unwrap_or(0))
            .sum()
    }

    /// `10 * total contact`, at least 10.
    pub fn default_step_cap(&self) -> usize {
        10 * self.total_contact().max(1) as usize
    }

    /// Contact order of the only branch when it is smooth at the origin.
    pub fn smooth_single_contact(&self) -> Option<(u32, &Rational)> {
        match self.branches.as_slice() {
            [b] if b.equation.order() == Some(1) => {
                contact_order(&b.equation).map(|l| (l, &b.coefficient))
            }
            _ => None,
        }
    }
}

/// x-adic valuation of `g(x, 0)`.
pub fn contact_order(g: &BiPoly) -> Option<u32> {
    g.restrict_t(&Rational::zero())
        .valuation()
        .map(|v| v as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRecord {
    /// 1-based.
    pub index: usize,
    /// Exceptional divisors through the blown-up point (at most two).
    pub parents: Vec<usize>,
    pub on_fibre: bool,
    pub e: u64,
    pub a: u64,
    pub alpha: Rational,
}

impl ChainRecord {
    /// `(1 + e - alpha) / a`, the bound this divisor puts on the threshold.
    pub fn threshold_bound(&self) -> Option<Rational> {
        if self.a == 0 {
            return None;
        }
        let num = Rational::from(1 + self.e) - &self.alpha;
        Some(num / Rational::from(self.a))
    }
}

impl fmt::Display for ChainRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E{}: (e, a, alpha) = ({}, {}, {})",
            self.index, self.e, self.a, self.alpha
        )?;
        if !self.parents.is_empty() {
            let ps: Vec<String> = self.parents.iter().map(|p| format!("E{p}")).collect();
            write!(f, " via {}", ps.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionChain {
    pub records: Vec<ChainRecord>,
    pub snc_reached: bool,
    pub lct: Rational,
}

impl Default for ResolutionChain {
    fn default() -> Self {
        ResolutionChain::new()
    }
}

impl ResolutionChain {
    pub fn new() -> Self {
        ResolutionChain {
            records: Vec::new(),
            snc_reached: false,
            lct: Rational::one(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `(e, a, alpha)` per record.
    pub fn triples(&self) -> Vec<(u64, u64, Rational)> {
        self.records
            .iter()
            .map(|r| (r.e, r.a, r.alpha.clone()))
            .collect()
    }

    /// Record achieving the minimum in the threshold, if it lies below one.
    pub fn minimizer(&self) -> Option<&ChainRecord> {
        self.records
            .iter()
            .filter_map(|r| r.threshold_bound().map(|b| (b, r)))
            .filter(|(b, _)| *b < Rational::one())
            .min_by(|x, y| x.0.cmp(&y.0))
            .map(|(_, r)| r)
    }
}

/// `min { 1, min over a_i > 0 of (1 + e_i - alpha_i) / a_i }`.
pub fn lct_from_records(records: &[ChainRecord]) -> Rational {
    records
        .iter()
        .filter_map(ChainRecord::threshold_bound)
        .fold(Rational::one(), Rational::min)
}

/// Local data at a blow-up centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Centre {
    /// Exceptional divisors through the point, by 1-based index.
    pub parents: Vec<usize>,
    /// Multiplicity of the fibre's strict transform at the point (0 or 1).
    pub fibre_multiplicity: u32,
    /// `(b_k, mult_p(B_k))` for branches through the point.
    pub branch_multiplicities: Vec<(Rational, u32)>,
}

/// Append the record of blowing up `centre`.
pub fn extend_chain(
    chain: &ResolutionChain,
    centre: &Centre,
) -> Result<ResolutionChain, BlowupError> {
    if chain.records.is_empty() {
        if !centre.parents.is_empty() {
            return Err(BlowupError::CentreNotOverBasePoint(
                "first centre cannot lie on an exceptional divisor".into(),
            ));
        }
        if centre.fibre_multiplicity == 0 {
            return Err(BlowupError::CentreNotOverBasePoint(
                "first centre must lie on the fibre".into(),
            ));
        }
    } else {
        if centre.parents.is_empty() || centre.parents.len() > 2 {
            return Err(BlowupError::CentreNotOverBasePoint(format!(
                "a later centre lies on one or two exceptional divisors, got {}",
                centre.parents.len()
            )));
        }
        if let Some(bad) = centre
            .parents
            .iter()
            .find(|&&p| p == 0 || p > chain.records.len())
        {
            return Err(BlowupError::CentreNotOverBasePoint(format!(
                "no exceptional divisor E{bad}"
            )));
        }
    }
    let mut out = chain.clone();
    let record = make_record(&chain.records, centre);
    out.records.push(record);
    out.snc_reached = false;
    out.lct = lct_from_records(&out.records);
    Ok(out)
}

fn make_record(records: &[ChainRecord], centre: &Centre) -> ChainRecord {
    let mut e = 1u64;
    let mut a = u64::from(centre.fibre_multiplicity);
    let mut alpha: Rational = centre
        .branch_multiplicities
        .iter()
        .map(|(b, m)| b * &Rational::integer(i64::from(*m)))
        .sum();
    for &p in &centre.parents {
        let parent = &records[p - 1];
        e += parent.e;
        a += parent.a;
        alpha += &parent.alpha;
    }
    ChainRecord {
        index: records.len() + 1,
        parents: centre.parents.clone(),
        on_fibre: centre.fibre_multiplicity > 0,
        e,
        a,
        alpha,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Branch(usize),
    Fibre,
    Exceptional(usize),
}

#[derive(Debug, Clone)]
struct Curve {
    tag: Tag,
    eq: BiPoly,
}

/// A point of the current surface with the curves through it, in local
/// coordinates centred at the point.
#[derive(Debug, Clone)]
struct LocalPoint {
    curves: Vec<Curve>,
}

impl LocalPoint {
    fn is_snc(&self) -> bool {
        if self.curves.len() > 2 {
            return false;
        }
        if self.curves.iter().any(|c| c.eq.order() != Some(1)) {
            return false;
        }
        if let [c1, c2] = self.curves.as_slice() {
            let (a1, b1) = c1.eq.linear_part();
            let (a2, b2) = c2.eq.linear_part();
            return !(a1 * &b2 - a2 * &b1).is_zero();
        }
        true
    }

    fn centre(&self, germ: &WeightedGerm) -> Centre {
        let mut parents = Vec::new();
        let mut fibre_multiplicity = 0;
        let mut branch_multiplicities = Vec::new();
        for c in &self.curves {
            let m = c.eq.order().unwrap_or(0);
            match c.tag {
                Tag::Exceptional(j) => parents.push(j),
                Tag::Fibre => fibre_multiplicity = m,
                Tag::Branch(k) => {
                    branch_multiplicities.push((germ.branches[k].coefficient.clone(), m))
                }
            }
        }
        parents.sort_unstable();
        Centre {
            parents,
            fibre_multiplicity,
            branch_multiplicities,
        }
    }

    /// Points on the new exceptional curve `E_index` that still need work,
    /// in a fixed order: affine chart roots ascending, then the chart at
    /// infinity.
    fn children(&self, index: usize) -> Result<Vec<LocalPoint>, BlowupError> {
        let mut out = Vec::new();

        // x-chart: E = {x = 0}, points parametrised by t
        let mut x_curves = Vec::with_capacity(self.curves.len() + 1);
        let mut restriction = UniPoly::constant(Rational::one());
        for c in &self.curves {
            let (strict, _) = c.eq.blowup_chart(Chart::X)?;
            let on_e = strict.restrict_x(&Rational::zero());
            if on_e.degree().unwrap_or(0) > 0 {
                restriction = restriction.mul(&on_e);
            }
            x_curves.push(Curve {
                tag: c.tag,
                eq: strict,
            });
        }
        if restriction.degree().unwrap_or(0) > 0 {
            // multiple roots are exactly the points where a strict transform
            // is singular, tangent to E, or meets another curve on E
            let bad = restriction.gcd(&restriction.derivative()).squarefree_part();
            let roots = bad.rational_roots()?;
            if roots.len() < bad.degree().unwrap_or(0) {
                return Err(BlowupError::NonRationalCentre {
                    exceptional: index,
                    locus: bad,
                });
            }
            for root in roots {
                let mut curves = vec![Curve {
                    tag: Tag::Exceptional(index),
                    eq: BiPoly::x(),
                }];
                for c in &x_curves {
                    let moved = c.eq.translate(&Rational::zero(), &root);
                    if moved.vanishes_at_origin() {
                        curves.push(Curve {
                            tag: c.tag,
                            eq: moved,
                        });
                    }
                }
                out.push(LocalPoint { curves });
            }
        }

        // t-chart origin: the one point of E not seen by the x-chart
        let mut curves = vec![Curve {
            tag: Tag::Exceptional(index),
            eq: BiPoly::t(),
        }];
        for c in &self.curves {
            let (strict, _) = c.eq.blowup_chart(Chart::T)?;
            if strict.vanishes_at_origin() {
                curves.push(Curve {
                    tag: c.tag,
                    eq: strict,
                });
            }
        }
        out.push(LocalPoint { curves });
        Ok(out)
    }
}

/// Resolve the boundary plus fibre over the origin by point blow-ups until
/// the total transform is simple normal crossing. The origin itself is
/// always blown up once so every chain has at least one record.
pub fn resolve_germ(
    germ: &WeightedGerm,
    max_steps: Option<usize>,
) -> Result<ResolutionChain, BlowupError> {
    let cap = max_steps.unwrap_or_else(|| germ.default_step_cap());
    let mut curves: Vec<Curve> = germ
        .branches
        .iter()
        .enumerate()
        .map(|(k, b)| Curve {
            tag: Tag::Branch(k),
            eq: b.equation.clone(),
        })
        .collect();
    curves.push(Curve {
        tag: Tag::Fibre,
        eq: BiPoly::t(),
    });

    let mut chain = ResolutionChain::new();
    let mut stack = vec![LocalPoint { curves }];
    while let Some(point) = stack.pop() {
        if !chain.is_empty() && point.is_snc() {
            continue;
        }
        if chain.len() >= cap {
            return Err(BlowupError::IterationCap(cap));
        }
        chain = extend_chain(&chain, &point.centre(germ))?;
        let mut children = point.children(chain.len())?;
        children.reverse();
        stack.extend(children);
    }
    chain.snc_reached = true;
    if !chain.lct.is_positive() {
        return Err(BlowupError::NonPositiveThreshold(chain.lct.clone()));
    }
    Ok(chain)
}

/// `min { 1, 1 + 1/l - b }` for one smooth branch of coefficient `b` with
/// contact order `l` against the fibre.
pub fn lct_tangent_branch(l: u32, b: &Rational) -> Result<Rational, BlowupError> {
    if l == 0 {
        return Err(BlowupError::ZeroTangency);
    }
    if !b.is_positive() || *b > Rational::one() {
        return Err(BlowupError::CoefficientOutOfRange(b.clone()));
    }
    let value = Rational::one() + Rational::new(1, i64::from(l)) - b;
    Ok(value.min(Rational::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LctMode {
    ClosedForm,
    Engine,
    #[default]
    CrossCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LctResult {
    pub gamma: Rational,
    pub closed_form: Option<Rational>,
    pub chain: Option<ResolutionChain>,
}

/// Log canonical threshold of the fibre against the germ.
///
/// `CrossCheck` runs both routes when the closed form applies and fails on
/// any disagreement; with several branches, or a singular one, only the
/// resolution route is available.
pub fn lct_at_fiber_point(
    germ: &WeightedGerm,
    mode: LctMode,
    max_steps: Option<usize>,
) -> Result<LctResult, BlowupError> {
    let closed = match germ.smooth_single_contact() {
        Some((l, b)) if mode != LctMode::Engine => Some(lct_tangent_branch(l, b)?),
        _ => None,
    };
    match mode {
        LctMode::ClosedForm => {
            let gamma = closed.ok_or(BlowupError::ClosedFormNotApplicable)?;
            Ok(LctResult {
                gamma: gamma.clone(),
                closed_form: Some(gamma),
                chain: None,
            })
        }
        LctMode::Engine | LctMode::CrossCheck => {
            let chain = resolve_germ(germ, max_steps)?;
            if let Some(c) = &closed {
                if *c != chain.lct {
                    return Err(BlowupError::CrossCheckMismatch {
                        closed: Box::new(c.clone()),
                        engine: Box::new(chain.lct.clone()),
                    });
                }
            }
            Ok(LctResult {
                gamma: chain.lct.clone(),
                closed_form: closed,
                chain: Some(chain),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn germ(eq: &str, b: Rational) -> WeightedGerm {
        WeightedGerm::single(parse_poly(eq).unwrap(), b).unwrap()
    }

    #[test]
    fn extend_chain_examples() {
        // tangency chain with coefficient 2/9: (i, i, 2i/9)
        let mut chain = ResolutionChain::new();
        let first = Centre {
            parents: vec![],
            fibre_multiplicity: 1,
            branch_multiplicities: vec![(q(2, 9), 1)],
        };
        chain = extend_chain(&chain, &first).unwrap();
        for i in 2..=5 {
            let c = Centre {
                parents: vec![i - 1],
                fibre_multiplicity: 1,
                branch_multiplicities: vec![(q(2, 9), 1)],
            };
            chain = extend_chain(&chain, &c).unwrap();
        }
        for (i, (e, a, alpha)) in chain.triples().into_iter().enumerate() {
            let i = i as u64 + 1;
            assert_eq!((e, a, alpha), (i, i, q(2 * i as i64, 9)));
        }

        let transversal = Centre {
            parents: vec![],
            fibre_multiplicity: 1,
            branch_multiplicities: vec![(q(1, 3), 1)],
        };
        let c = extend_chain(&ResolutionChain::new(), &transversal).unwrap();
        assert_eq!(c.triples(), vec![(1, 1, q(1, 3))]);

        let empty = Centre {
            parents: vec![],
            fibre_multiplicity: 1,
            branch_multiplicities: vec![],
        };
        let c = extend_chain(&ResolutionChain::new(), &empty).unwrap();
        assert_eq!(c.triples(), vec![(1, 1, q(0, 1))]);
    }

    #[test]
    fn extend_chain_rejects_stray_centres() {
        let c = extend_chain(
            &ResolutionChain::new(),
            &Centre {
                parents: vec![],
                fibre_multiplicity: 1,
                branch_multiplicities: vec![],
            },
        )
        .unwrap();
        let orphan = Centre {
            parents: vec![],
            fibre_multiplicity: 1,
            branch_multiplicities: vec![],
        };
        assert!(matches!(
            extend_chain(&c, &orphan),
            Err(BlowupError::CentreNotOverBasePoint(_))
        ));
        let dangling = Centre {
            parents: vec![4],
            fibre_multiplicity: 0,
            branch_multiplicities: vec![],
        };
        assert!(matches!(
            extend_chain(&c, &dangling),
            Err(BlowupError::CentreNotOverBasePoint(_))
        ));
    }

    #[test]
    fn resolve_examples() {
        let chain = resolve_germ(&germ("t - x^5 - x^9", q(2, 9)), None).unwrap();
        assert_eq!(chain.len(), 5);
        assert_eq!(chain.lct, q(44, 45));
        assert!(chain.snc_reached);

        let chain = resolve_germ(&germ("t - x^2", q(1, 1)), None).unwrap();
        assert_eq!(chain.triples(), vec![(1, 1, q(1, 1)), (2, 2, q(2, 1))]);
        assert_eq!(chain.lct, q(1, 2));

        let chain = resolve_germ(&germ("x", q(1, 2)), None).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.lct, q(1, 1));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(lct_tangent_branch(5, &q(2, 9)), Ok(q(44, 45)));
        assert_eq!(lct_tangent_branch(3, &q(1, 3)), Ok(q(1, 1)));
        assert_eq!(lct_tangent_branch(9, &q(2, 9)), Ok(q(8, 9)));
        assert_eq!(
            lct_tangent_branch(0, &q(1, 2)),
            Err(BlowupError::ZeroTangency)
        );
        assert!(lct_tangent_branch(2, &q(3, 2)).is_err());
        // engine agrees on the l = 9 case
        let chain = resolve_germ(&germ("t - x^9 - x^10", q(2, 9)), None).unwrap();
        assert_eq!(chain.lct, q(8, 9));
    }

    #[test]
    fn lct_modes() {
        let g = germ("t - x^5 - x^9", q(2, 9));
        let r = lct_at_fiber_point(&g, LctMode::CrossCheck, None).unwrap();
        assert_eq!(r.gamma, q(44, 45));
        assert_eq!(r.closed_form, Some(q(44, 45)));

        let sharp = germ("t - x^5 - x^6", q(1, 3));
        assert_eq!(
            lct_at_fiber_point(&sharp, LctMode::CrossCheck, None)
                .unwrap()
                .gamma,
            q(13, 15)
        );

        let tr = germ("t - x", q(2, 9));
        let r = lct_at_fiber_point(&tr, LctMode::ClosedForm, None).unwrap();
        assert_eq!(r.gamma, q(1, 1));
        assert!(r.chain.is_none());

        let cusp = germ("t^2 - x^3", q(1, 2));
        assert_eq!(
            lct_at_fiber_point(&cusp, LctMode::ClosedForm, None),
            Err(BlowupError::ClosedFormNotApplicable)
        );
    }

    #[test]
    fn cusp_against_fibre() {
        // hand resolution: E1 (1,1,2b), E2 (2,2,3b) via E1, E3 (4,3,6b)
        // via E1,E2; ord of t along E1..E3 is 1, 2, 3
        let chain = resolve_germ(&germ("t^2 - x^3", q(1, 2)), None).unwrap();
        assert_eq!(
            chain.triples(),
            vec![(1, 1, q(1, 1)), (2, 2, q(3, 2)), (4, 3, q(3, 1))]
        );
        assert_eq!(chain.records[2].parents, vec![1, 2]);
        assert!(!chain.records[2].on_fibre);
        // bounds 1, 3/4, 2/3
        assert_eq!(chain.lct, q(2, 3));
        // b = 5/6 is the cusp's own threshold: E3 bound drops to 0
        assert!(matches!(
            resolve_germ(&germ("t^2 - x^3", q(5, 6)), None),
            Err(BlowupError::NonPositiveThreshold(_))
        ));
    }

    #[test]
    fn two_branches() {
        // two transversal lines through the origin, neither along the fibre
        let g = WeightedGerm::new(vec![
            Branch {
                equation: parse_poly("t - x").unwrap(),
                coefficient: q(1, 2),
            },
            Branch {
                equation: parse_poly("t + x").unwrap(),
                coefficient: q(1, 2),
            },
        ])
        .unwrap();
        let chain = resolve_germ(&g, None).unwrap();
        assert_eq!(chain.triples(), vec![(1, 1, q(1, 1))]);
        assert_eq!(chain.lct, q(1, 1));
        assert_eq!(
            lct_at_fiber_point(&g, LctMode::ClosedForm, None),
            Err(BlowupError::ClosedFormNotApplicable)
        );
    }

    #[test]
    fn non_rational_centre() {
        // two irrational tangent directions t = +-sqrt(2) x, each branch
        // meeting E1 transversally: nothing to locate
        let node = germ("t^2 - 2*x^2 + x^3", q(1, 2));
        assert_eq!(resolve_germ(&node, None).unwrap().len(), 1);
        // tangent to E1 at t = +-sqrt(2) x: centres are irrational
        let g = germ("(t^2 - 2*x^2)^2 + x^5", q(1, 4));
        let err = resolve_germ(&g, None).unwrap_err();
        assert!(matches!(err, BlowupError::NonRationalCentre { .. }));
        assert!(err.is_engine_limitation());
    }

    #[test]
    fn germ_validation() {
        assert!(matches!(
            WeightedGerm::single(parse_poly("t*x - t").unwrap(), q(1, 2)),
            Err(BlowupError::BranchContainsFibre(_))
        ));
        assert!(matches!(
            WeightedGerm::single(parse_poly("t - x").unwrap(), q(3, 2)),
            Err(BlowupError::CoefficientOutOfRange(_))
        ));
        assert!(matches!(
            WeightedGerm::single(parse_poly("t - x - 1").unwrap(), q(1, 2)),
            Err(BlowupError::BranchMissesOrigin(_))
        ));
    }

    #[test]
    fn non_positive_threshold() {
        // cusp with coefficient one: E1 gives 1 + 1 - 2 = 0
        let g = germ("t^2 - x^3", q(1, 1));
        assert!(matches!(
            resolve_germ(&g, None),
            Err(BlowupError::NonPositiveThreshold(_))
        ));
    }

    #[test]
    fn iteration_cap() {
        let g = germ("t - x^5 - x^9", q(2, 9));
        assert_eq!(resolve_germ(&g, Some(3)), Err(BlowupError::IterationCap(3)));
    }
}
