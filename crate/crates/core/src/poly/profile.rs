use std::fmt;

use super::{BiPoly, PolyError, UniPoly};
use crate::exact::Rational;

/// Where on the fibre an intersection sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// The marked point `x = 0`.
    Origin,
    /// `points` distinct affine points away from `x = 0`, never located
    /// individually since they may be irrational.
    Residual { points: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileEntry {
    pub location: Location,
    /// Contact order at each point of the entry.
    pub contact_order: u32,
    pub simple: bool,
}

/// How a divisor meets the fibre `{t = t0}` of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub entries: Vec<ProfileEntry>,
    pub infinity_multiplicity: u32,
    pub squarefree_residual: bool,
    /// `h(x) / x^l` where `h = f(., t0)`.
    pub residual: UniPoly,
    pub fiber_degree: u32,
}

impl IntersectionProfile {
    /// x-adic valuation of the restriction.
    pub fn contact_at_origin(&self) -> u32 {
        self.entries
            .iter()
            .find(|e| e.location == Location::Origin)
            .map_or(0, |e| e.contact_order)
    }

    pub fn residual_degree(&self) -> u32 {
        self.residual.degree().unwrap_or(0) as u32
    }

    /// All intersections other than the marked one are simple, including
    /// the point at infinity.
    pub fn others_simple(&self) -> bool {
        self.squarefree_residual && self.infinity_multiplicity <= 1
    }

    /// Reason the profile cannot certify transversality away from the
    /// marked point, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.squarefree_residual {
            Some("residual not squarefree")
        } else if self.infinity_multiplicity > 1 {
            Some("unverified at infinity")
        } else {
            None
        }
    }

    /// Sum of all contact orders including infinity; equals the fibre degree.
    pub fn total_intersection(&self) -> u32 {
        let affine: u32 = self
            .entries
            .iter()
            .map(|e| match e.location {
                Location::Origin => e.contact_order,
                Location::Residual { points } => points as u32 * e.contact_order,
            })
            .sum();
        affine + self.infinity_multiplicity
    }
}

impl fmt::Display for IntersectionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contact={} residual_degree={} squarefree_residual={} infinity_multiplicity={}",
            self.contact_at_origin(),
            self.residual_degree(),
            self.squarefree_residual,
            self.infinity_multiplicity
        )
    }
}

/// Restrict `f` to the fibre `t = t0` and describe how it meets that fibre.
pub fn fiber_intersection_profile(
    f: &BiPoly,
    t0: &Rational,
    d: u32,
) -> Result<IntersectionProfile, PolyError> {
    let h = f.restrict_t(t0);
    let Some(deg) = h.degree() else {
        return Err(PolyError::FibreContained { t0: t0.clone() });
    };
    let deg = deg as u32;
    if deg > d {
        return Err(PolyError::DegreeExceedsFibre {
            degree: deg,
            fiber_degree: d,
        });
    }
    let l = h.valuation().unwrap_or(0);
    let residual = h.shift_down(l);
    // the cofactor is nonzero at 0 by construction
    let squarefree_residual = residual.is_squarefree();

    let mut entries = Vec::new();
    if l > 0 {
        entries.push(ProfileEntry {
            location: Location::Origin,
            contact_order: l as u32,
            simple: l == 1,
        });
    }
    for (mult, factor) in residual.squarefree_decomposition() {
        entries.push(ProfileEntry {
            location: Location::Residual {
                points: factor.degree().unwrap_or(0),
            },
            contact_order: mult as u32,
            simple: mult == 1,
        });
    }
    Ok(IntersectionProfile {
        entries,
        infinity_multiplicity: d - deg,
        squarefree_residual,
        residual,
        fiber_degree: d,
    })
}
