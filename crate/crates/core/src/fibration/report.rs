use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;

use super::ProfileCheck;
use crate::exact::Rational;

/// Denominator witness for one coefficient `beta = u/v`: the least `l` with
/// `v | l r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub denominator: BigUint,
    pub l: BigUint,
    /// `l <= 2r` and `r l beta` is an integer.
    pub ok: bool,
    /// `v <= 2 r^2`.
    pub within_2r2: bool,
    /// The vertical coefficient lies in `(1/r) Z`, so the bound `l <= 2r`
    /// is expected to hold.
    pub applies: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointReport {
    pub label: String,
    pub gamma: Rational,
    /// `1 - gamma`.
    pub horizontal: Rational,
    pub vertical: Rational,
    /// `1 - gamma + vertical`, the coefficient of `B_Z` at this point.
    pub coefficient: Rational,
    pub closed_form: Option<Rational>,
    pub chain_length: Option<usize>,
    pub profiles: Vec<(String, ProfileCheck)>,
    pub witness: Option<Witness>,
}

impl PointReport {
    pub(super) fn new(
        label: String,
        gamma: Rational,
        horizontal: Rational,
        vertical: Rational,
        closed_form: Option<Rational>,
        chain_length: Option<usize>,
        profiles: Vec<(String, ProfileCheck)>,
    ) -> Self {
        let coefficient = &horizontal + &vertical;
        PointReport {
            label,
            gamma,
            horizontal,
            vertical,
            coefficient,
            closed_form,
            chain_length,
            profiles,
            witness: None,
        }
    }
}

/// What the denominator of `B_Z` says about that of `M_Z`.
///
/// `I r B_Z` is integral exactly when `I r M_Z` is, so with
/// `L = den(B_Z) / gcd(den(B_Z), r)` both `L | den(M_Z)` and
/// `den(M_Z) | r L | r den(B_Z)` hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliFacts {
    pub r: u64,
    pub den_bz: BigUint,
    /// `r * den(B_Z)`.
    pub den_mz_divides: BigUint,
    /// `den(B_Z) / gcd(den(B_Z), r)`, also a lower bound.
    pub den_mz_multiple_of: BigUint,
}

impl ModuliFacts {
    /// Whether a candidate `den(M_Z)` is compatible: `I r M_Z` integral for
    /// exactly the same `I` as `I r B_Z`.
    pub fn admits(&self, den_mz: &BigUint) -> bool {
        let r = BigUint::from(self.r);
        den_mz / den_mz.gcd(&r) == self.den_mz_multiple_of
    }
}

pub fn moduli_transfer_facts(den_bz: &BigUint, r: u64) -> ModuliFacts {
    let rb = BigUint::from(r);
    ModuliFacts {
        r,
        den_bz: den_bz.clone(),
        den_mz_divides: &rb * den_bz,
        den_mz_multiple_of: den_bz / den_bz.gcd(&rb),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantReport {
    pub r: u64,
    pub points: Vec<PointReport>,
    pub den_bz: Option<BigUint>,
    pub moduli: Option<ModuliFacts>,
}

impl DiscriminantReport {
    pub(super) fn new(r: u64, points: Vec<PointReport>) -> Self {
        DiscriminantReport {
            r,
            points,
            den_bz: None,
            moduli: None,
        }
    }

    pub fn point(&self, label: &str) -> Option<&PointReport> {
        self.points.iter().find(|p| p.label == label)
    }

    /// Every witness is present, and within its bounds wherever those apply.
    pub fn verified(&self) -> bool {
        self.points.iter().all(|p| {
            p.witness
                .as_ref()
                .is_some_and(|w| !w.applies || (w.ok && w.within_2r2))
        })
    }

    /// Stable `key=value` lines.
    pub fn porcelain(&self) -> Vec<String> {
        let mut out = vec![format!("global.r={}", self.r)];
        for p in &self.points {
            let k = format!("point.{}", p.label);
            out.push(format!("{k}.gamma={}", p.gamma));
            if let Some(c) = &p.closed_form {
                out.push(format!("{k}.gamma_closed_form={c}"));
            }
            if let Some(n) = p.chain_length {
                out.push(format!("{k}.chain_length={n}"));
            }
            out.push(format!("{k}.horizontal={}", p.horizontal));
            out.push(format!("{k}.vertical={}", p.vertical));
            out.push(format!("{k}.coeff={}", p.coefficient));
            if let Some(w) = &p.witness {
                out.push(format!("{k}.den={}", w.denominator));
                out.push(format!("{k}.witness_l={}", w.l));
                out.push(format!("{k}.witness_ok={}", w.ok));
                out.push(format!("{k}.den_le_2r2={}", w.within_2r2));
                out.push(format!("{k}.witness_applies={}", w.applies));
            }
            for (comp, check) in &p.profiles {
                let pk = format!("{k}.profile.{comp}");
                match check {
                    ProfileCheck::Local => out.push(format!("{pk}=local")),
                    ProfileCheck::Failed(e) => out.push(format!("{pk}=error: {e}")),
                    ProfileCheck::Computed(prof) => {
                        out.push(format!("{pk}.contact={}", prof.contact_at_origin()));
                        out.push(format!(
                            "{pk}.squarefree_residual={}",
                            prof.squarefree_residual
                        ));
                        out.push(format!(
                            "{pk}.infinity_multiplicity={}",
                            prof.infinity_multiplicity
                        ));
                        out.push(format!("{pk}.others_simple={}", prof.others_simple()));
                    }
                }
            }
        }
        if let Some(d) = &self.den_bz {
            out.push(format!("global.den_BZ={d}"));
        }
        if let Some(m) = &self.moduli {
            out.push(format!("global.den_MZ_divides={}", m.den_mz_divides));
            out.push(format!(
                "global.den_MZ_multiple_of={}",
                m.den_mz_multiple_of
            ));
        }
        out.push(format!("global.verified={}", self.verified()));
        out
    }

    /// Human-readable summary.
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "Cartier index r = {}", self.r).unwrap();
        for p in &self.points {
            write!(
                s,
                "  {}: gamma = {}, B_Z coefficient = {}",
                p.label, p.gamma, p.coefficient
            )
            .unwrap();
            if !p.vertical.is_zero() {
                write!(
                    s,
                    " (horizontal {} + vertical {})",
                    p.horizontal, p.vertical
                )
                .unwrap();
            }
            if let Some(w) = &p.witness {
                write!(
                    s,
                    ", denominator {}, witness l = {} (l <= 2r: {})",
                    w.denominator, w.l, w.ok
                )
                .unwrap();
            }
            writeln!(s).unwrap();
        }
        if let Some(d) = &self.den_bz {
            writeln!(s, "den(B_Z) = {d}").unwrap();
        }
        if let Some(m) = &self.moduli {
            writeln!(
                s,
                "den(M_Z) divides {} and is a multiple of {}",
                m.den_mz_divides, m.den_mz_multiple_of
            )
            .unwrap();
        }
        s
    }
}
