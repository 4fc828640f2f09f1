//! Heisenberg-picture algebra of Gaussian-affine operator expressions.
//!
//! Every expression is a c-number plus a finite linear combination of labeled
//! bosonic creation and annihilation operators. All circuit elements used
//! here (displacement, single- and two-mode squeezing, beam splitter, the
//! Unruh/Rindler basis change) map this class into itself, so expectation
//! values on the Unruh vacuum reduce to pairwise contractions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::UnruhFactors;

/// Coefficients at or below this magnitude are dropped by [`OperatorExpr::simplify`].
pub const PRUNE_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    UnruhC,
    UnruhD,
    /// Right movers in the future light cone / left Rindler wedge.
    RindlerI,
    /// Left movers in the past light cone / left Rindler wedge.
    RindlerII,
    /// Right movers in the past light cone / right Rindler wedge.
    RindlerIII,
    /// Left movers in the right Rindler wedge / future light cone.
    RindlerIV,
    AuxVacuum,
}

impl Sector {
    pub fn is_rindler(self) -> bool {
        matches!(
            self,
            Sector::RindlerI | Sector::RindlerII | Sector::RindlerIII | Sector::RindlerIV
        )
    }

    /// Sectors whose annihilators kill the reference (Minkowski) vacuum.
    pub fn is_vacuum_basis(self) -> bool {
        !self.is_rindler()
    }

    /// Region II and IV operators are left movers, I and III right movers.
    pub fn rindler_chirality(self) -> Option<Chirality> {
        match self {
            Sector::RindlerII | Sector::RindlerIV => Some(Chirality::Left),
            Sector::RindlerI | Sector::RindlerIII => Some(Chirality::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chirality {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub sector: Sector,
    pub chirality: Chirality,
    pub bin: u32,
}

impl ModeLabel {
    pub const fn new(sector: Sector, chirality: Chirality, bin: u32) -> Self {
        ModeLabel {
            sector,
            chirality,
            bin,
        }
    }

    pub const fn unruh_c(chirality: Chirality, bin: u32) -> Self {
        Self::new(Sector::UnruhC, chirality, bin)
    }

    pub const fn unruh_d(chirality: Chirality, bin: u32) -> Self {
        Self::new(Sector::UnruhD, chirality, bin)
    }

    /// Rindler label with the chirality implied by its region.
    ///
    /// # Panics
    /// If `sector` is not a Rindler region.
    pub fn rindler(sector: Sector, bin: u32) -> Self {
        let chirality = sector
            .rindler_chirality()
            .unwrap_or_else(|| panic!("{sector:?} is not a Rindler region"));
        Self::new(sector, chirality, bin)
    }

    pub const fn aux(bin: u32) -> Self {
        Self::new(Sector::AuxVacuum, Chirality::Left, bin)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chi = match self.chirality {
            Chirality::Left => 'l',
            Chirality::Right => 'r',
        };
        match self.sector {
            Sector::UnruhC => write!(f, "c[{chi},{}]", self.bin),
            Sector::UnruhD => write!(f, "d[{chi},{}]", self.bin),
            Sector::RindlerI => write!(f, "b_I[{}]", self.bin),
            Sector::RindlerII => write!(f, "b_II[{}]", self.bin),
            Sector::RindlerIII => write!(f, "b_III[{}]", self.bin),
            Sector::RindlerIV => write!(f, "b_IV[{}]", self.bin),
            Sector::AuxVacuum => write!(f, "v[{}]", self.bin),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub label: ModeLabel,
    pub dagger: bool,
}

/// Local-oscillator amplitude carried symbolically as `p * alpha + q * conj(alpha)`.
///
/// Keeping it apart from the signal displacement lets the strong-LO expansion
/// select terms by their order in `|alpha|` exactly, without evaluating with a
/// huge numeric amplitude.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LoChannel {
    pub alpha: Complex64,
    pub alpha_conj: Complex64,
}

impl LoChannel {
    pub const UNIT: LoChannel = LoChannel {
        alpha: Complex64::new(1.0, 0.0),
        alpha_conj: Complex64::new(0.0, 0.0),
    };

    pub fn is_zero(&self) -> bool {
        self.alpha == Complex64::new(0.0, 0.0) && self.alpha_conj == Complex64::new(0.0, 0.0)
    }

    pub fn evaluate(&self, alpha: Complex64) -> Complex64 {
        self.alpha * alpha + self.alpha_conj * alpha.conj()
    }

    pub fn adjoint(&self) -> LoChannel {
        LoChannel {
            alpha: self.alpha_conj.conj(),
            alpha_conj: self.alpha.conj(),
        }
    }

    fn scaled(&self, k: Complex64) -> LoChannel {
        LoChannel {
            alpha: self.alpha * k,
            alpha_conj: self.alpha_conj * k,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorExpr {
    displacement: Complex64,
    lo: LoChannel,
    terms: BTreeMap<Term, Complex64>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(value: Complex64) -> Self {
        OperatorExpr {
            displacement: value,
            ..Self::default()
        }
    }

    /// Annihilation operator of `label`.
    pub fn mode(label: ModeLabel) -> Self {
        let mut e = Self::zero();
        e.add_term(label, false, Complex64::new(1.0, 0.0));
        e
    }

    /// Creation operator of `label`.
    pub fn creation(label: ModeLabel) -> Self {
        let mut e = Self::zero();
        e.add_term(label, true, Complex64::new(1.0, 0.0));
        e
    }

    pub fn displacement(&self) -> Complex64 {
        self.displacement
    }

    pub fn lo(&self) -> LoChannel {
        self.lo
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, label: ModeLabel, dagger: bool) -> Complex64 {
        self.terms
            .get(&Term { label, dagger })
            .copied()
            .unwrap_or_default()
    }

    pub fn labels(&self) -> BTreeSet<ModeLabel> {
        self.terms.keys().map(|t| t.label).collect()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Adds `coeff` to the coefficient of one operator, removing exact zeros.
    pub fn add_term(&mut self, label: ModeLabel, dagger: bool, coeff: Complex64) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        let key = Term { label, dagger };
        let entry = self.terms.entry(key).or_default();
        *entry += coeff;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        }
    }

    pub fn add_displacement(&mut self, value: Complex64) {
        self.displacement += value;
    }

    pub fn add_lo(&mut self, lo: LoChannel) {
        self.lo.alpha += lo.alpha;
        self.lo.alpha_conj += lo.alpha_conj;
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &OperatorExpr, k: Complex64) {
        if k == Complex64::new(0.0, 0.0) {
            return;
        }
        self.displacement += other.displacement * k;
        let lo = other.lo.scaled(k);
        self.add_lo(lo);
        for (t, c) in &other.terms {
            self.add_term(t.label, t.dagger, c * k);
        }
    }

    pub fn scaled(&self, k: Complex64) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn adjoint(&self) -> OperatorExpr {
        OperatorExpr {
            displacement: self.displacement.conj(),
            lo: self.lo.adjoint(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    (
                        Term {
                            label: t.label,
                            dagger: !t.dagger,
                        },
                        c.conj(),
                    )
                })
                .collect(),
        }
    }

    /// Drops coefficients at or below [`PRUNE_THRESHOLD`].
    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_THRESHOLD);
    }

    pub fn simplified(mut self) -> Self {
        self.simplify();
        self
    }

    /// `[self, other]`, a c-number for linear expressions.
    pub fn commutator(&self, other: &OperatorExpr) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, c) in &self.terms {
            let partner = other.coefficient(t.label, !t.dagger);
            if t.dagger {
                // [a^dag, a] = -1
                acc -= c * partner;
            } else {
                acc += c * partner;
            }
        }
        acc
    }

    /// Replaces every mode that has an image in `images` by that image (and
    /// creation operators by its adjoint). Other modes are left untouched.
    pub fn substitute(&self, images: &BTreeMap<ModeLabel, OperatorExpr>) -> OperatorExpr {
        let mut out = OperatorExpr {
            displacement: self.displacement,
            lo: self.lo,
            terms: BTreeMap::new(),
        };
        for (t, c) in &self.terms {
            match images.get(&t.label) {
                Some(image) if t.dagger => out.add_scaled(&image.adjoint(), *c),
                Some(image) => out.add_scaled(image, *c),
                None => out.add_term(t.label, t.dagger, *c),
            }
        }
        out
    }

    /// Folds the local-oscillator channel into the displacement at amplitude `alpha`.
    pub fn resolve_lo(&self, alpha: Complex64) -> OperatorExpr {
        let mut out = self.clone();
        out.displacement += self.lo.evaluate(alpha);
        out.lo = LoChannel::default();
        out
    }

    /// The operator part alone: no displacement, no local oscillator.
    pub fn fluctuation(&self) -> OperatorExpr {
        self.restricted(|_| true)
    }

    /// Operator terms whose label satisfies `keep`; scalars are dropped.
    pub fn restricted<P: Fn(ModeLabel) -> bool>(&self, keep: P) -> OperatorExpr {
        OperatorExpr {
            displacement: Complex64::new(0.0, 0.0),
            lo: LoChannel::default(),
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| keep(t.label))
                .map(|(t, c)| (*t, *c))
                .collect(),
        }
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(mut self, rhs: OperatorExpr) -> OperatorExpr {
        self.add_scaled(&rhs, Complex64::new(1.0, 0.0));
        self
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(mut self, rhs: OperatorExpr) -> OperatorExpr {
        self.add_scaled(&rhs, Complex64::new(-1.0, 0.0));
        self
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scaled(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, k: f64) -> OperatorExpr {
        self.scaled(Complex64::new(k, 0.0))
    }
}

impl Mul<Complex64> for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, k: Complex64) -> OperatorExpr {
        self.scaled(k)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.displacement)?;
        if !self.lo.is_zero() {
            write!(f, " + ({})α + ({})α*", self.lo.alpha, self.lo.alpha_conj)?;
        }
        for (t, c) in &self.terms {
            let dag = if t.dagger { "†" } else { "" };
            write!(f, " + ({c}){}{dag}", t.label)?;
        }
        Ok(())
    }
}

/// Two-mode gates need commuting inputs; overlapping labels are fine when
/// the expressions are orthogonal combinations.
fn check_independent(a1: &OperatorExpr, a2: &OperatorExpr) -> Result<()> {
    const TOL: f64 = 1e-10;
    if a1.commutator(a2).norm() <= TOL && a1.commutator(&a2.adjoint()).norm() <= TOL {
        return Ok(());
    }
    let l2 = a2.labels();
    let shared = a1.labels().into_iter().find(|l| l2.contains(l));
    Err(Error::SharedMode(
        shared.expect("non-commuting expressions share a mode"),
    ))
}

pub fn displace(expr: &OperatorExpr, alpha: Complex64) -> OperatorExpr {
    let mut out = expr.clone();
    out.add_displacement(alpha);
    out
}

/// Adds the unit local-oscillator amplitude `alpha` symbolically.
pub fn displace_lo(expr: &OperatorExpr) -> OperatorExpr {
    let mut out = expr.clone();
    out.add_lo(LoChannel::UNIT);
    out
}

/// Heisenberg images of two independent modes under two-mode squeezing:
/// `a1 -> a1 cosh r + e^{i phase} a2^dag sinh r` and symmetrically for `a2`.
pub fn two_mode_squeeze(
    a1: &OperatorExpr,
    a2: &OperatorExpr,
    r: f64,
    phase: f64,
) -> Result<(OperatorExpr, OperatorExpr)> {
    check_independent(a1, a2)?;
    let ch = Complex64::new(r.cosh(), 0.0);
    let sh = Complex64::from_polar(r.sinh(), phase);
    let mut out1 = a1.scaled(ch);
    out1.add_scaled(&a2.adjoint(), sh);
    let mut out2 = a2.scaled(ch);
    out2.add_scaled(&a1.adjoint(), sh);
    Ok((out1.simplified(), out2.simplified()))
}

/// `a -> a cosh r_s + a^dag sinh r_s`.
pub fn single_mode_squeeze(a: &OperatorExpr, r_s: f64) -> OperatorExpr {
    let mut out = a.scaled(Complex64::new(r_s.cosh(), 0.0));
    out.add_scaled(&a.adjoint(), Complex64::new(r_s.sinh(), 0.0));
    out.simplified()
}

/// Beam splitter of transmissivity `eta`:
/// `a1 -> sqrt(eta) a1 - sqrt(1 - eta) a2`, `a2 -> sqrt(1 - eta) a1 + sqrt(eta) a2`.
pub fn beam_splitter(
    a1: &OperatorExpr,
    a2: &OperatorExpr,
    eta: f64,
) -> Result<(OperatorExpr, OperatorExpr)> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "transmissivity must lie in [0, 1]",
        });
    }
    check_independent(a1, a2)?;
    let t = Complex64::new(eta.sqrt(), 0.0);
    let s = Complex64::new((1.0 - eta).sqrt(), 0.0);
    let mut out1 = a1.scaled(t);
    out1.add_scaled(a2, -s);
    let mut out2 = a1.scaled(s);
    out2.add_scaled(a2, t);
    Ok((out1.simplified(), out2.simplified()))
}

/// `<0| L_first L_second |0>` for the operator parts of two expressions.
pub fn contraction(first: &OperatorExpr, second: &OperatorExpr) -> Complex64 {
    // Only (annihilator in first) x (creator of the same mode in second) survives.
    first
        .terms
        .iter()
        .filter(|(t, _)| !t.dagger)
        .filter_map(|(t, c)| {
            second
                .terms
                .get(&Term {
                    label: t.label,
                    dagger: true,
                })
                .map(|p| c * p)
        })
        .sum()
}

/// Vacuum expectation of an ordered product by Wick's theorem.
///
/// Displacements factor out; operator parts contract pairwise in the given
/// order, and only `<a a^dag> = 1` survives on the vacuum.
pub fn wick_expectation(product: &[OperatorExpr]) -> Result<Complex64> {
    if !matches!(product.len(), 1 | 2 | 4) {
        return Err(Error::ProductLength(product.len()));
    }
    for e in product {
        if !e.lo.is_zero() {
            return Err(Error::UnresolvedLocalOscillator);
        }
        if let Some(t) = e.terms.keys().find(|t| !t.label.sector.is_vacuum_basis()) {
            return Err(Error::NonVacuumMode(t.label));
        }
    }
    let idx: Vec<usize> = (0..product.len()).collect();
    Ok(expand(product, &idx))
}

fn expand(product: &[OperatorExpr], remaining: &[usize]) -> Complex64 {
    let Some((&head, rest)) = remaining.split_first() else {
        return Complex64::new(1.0, 0.0);
    };
    let mut total = product[head].displacement * expand(product, rest);
    if product[head].is_empty() {
        return total;
    }
    for (k, &partner) in rest.iter().enumerate() {
        let c = contraction(&product[head], &product[partner]);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let others: Vec<usize> = rest
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &i)| i)
            .collect();
        total += c * expand(product, &others);
    }
    total
}

/// `X(phi) = e^{-i phi} a + e^{i phi} a^dag`.
pub fn quadrature(expr: &OperatorExpr, phi: f64) -> OperatorExpr {
    let mut x = expr.scaled(Complex64::from_polar(1.0, -phi));
    x.add_scaled(&expr.adjoint(), Complex64::from_polar(1.0, phi));
    x
}

/// Vacuum variance of `X(phi)` for an expression in the vacuum basis.
pub fn quadrature_variance(expr: &OperatorExpr, phi: f64) -> Result<f64> {
    let x = quadrature(expr, phi);
    let second = wick_expectation(&[x.clone(), x.clone()])?;
    let first = wick_expectation(&[x])?;
    Ok((second - first * first).re)
}

/// Basis change from Rindler to Unruh operators, bin by bin.
///
/// Region IV pairs `(c_l, d_l^dag)`, region II `(d_l, c_l^dag)`, region I
/// `(c_r, d_r^dag)` and region III `(d_r, c_r^dag)`, each with the two-mode
/// squeezing factors of the bin frequency.
pub fn rindler_to_unruh(expr: &OperatorExpr, a: f64, grid: &[f64]) -> Result<OperatorExpr> {
    rindler_to_unruh_with(expr, |bin| bin_factors(bin, a, grid))
}

/// Inverse of [`rindler_to_unruh`].
pub fn unruh_to_rindler(expr: &OperatorExpr, a: f64, grid: &[f64]) -> Result<OperatorExpr> {
    unruh_to_rindler_with(expr, |bin| bin_factors(bin, a, grid))
}

fn bin_factors(bin: u32, a: f64, grid: &[f64]) -> Result<UnruhFactors> {
    let omega = grid.get(bin as usize).copied().ok_or_else(|| {
        Error::GridMismatch(format!("bin {bin} outside a grid of {} bins", grid.len()))
    })?;
    UnruhFactors::new(omega, a)
}

/// Image of a Rindler annihilator `(cosh, partner, sinh, partner-conjugate)`.
fn rindler_image(label: ModeLabel, u: &UnruhFactors) -> Result<OperatorExpr> {
    if label.sector.rindler_chirality() != Some(label.chirality) {
        return Err(Error::UnmappedSector(label));
    }
    let chi = label.chirality;
    let (primary, partner) = match label.sector {
        Sector::RindlerIV | Sector::RindlerI => (
            ModeLabel::unruh_c(chi, label.bin),
            ModeLabel::unruh_d(chi, label.bin),
        ),
        Sector::RindlerII | Sector::RindlerIII => (
            ModeLabel::unruh_d(chi, label.bin),
            ModeLabel::unruh_c(chi, label.bin),
        ),
        _ => return Err(Error::UnmappedSector(label)),
    };
    let mut e = OperatorExpr::zero();
    e.add_term(primary, false, Complex64::new(u.cosh(), 0.0));
    e.add_term(partner, true, Complex64::new(u.sinh(), 0.0));
    Ok(e)
}

/// Image of an Unruh annihilator in the Rindler basis.
fn unruh_image(label: ModeLabel, u: &UnruhFactors) -> Result<OperatorExpr> {
    let (primary, partner) = match (label.sector, label.chirality) {
        (Sector::UnruhC, Chirality::Left) => (Sector::RindlerIV, Sector::RindlerII),
        (Sector::UnruhD, Chirality::Left) => (Sector::RindlerII, Sector::RindlerIV),
        (Sector::UnruhC, Chirality::Right) => (Sector::RindlerI, Sector::RindlerIII),
        (Sector::UnruhD, Chirality::Right) => (Sector::RindlerIII, Sector::RindlerI),
        _ => return Err(Error::UnmappedSector(label)),
    };
    let mut e = OperatorExpr::zero();
    e.add_term(
        ModeLabel::rindler(primary, label.bin),
        false,
        Complex64::new(u.cosh(), 0.0),
    );
    e.add_term(
        ModeLabel::rindler(partner, label.bin),
        true,
        Complex64::new(-u.sinh(), 0.0),
    );
    Ok(e)
}

pub(crate) fn rindler_to_unruh_with<F>(expr: &OperatorExpr, factors: F) -> Result<OperatorExpr>
where
    F: Fn(u32) -> Result<UnruhFactors>,
{
    map_basis(
        expr,
        |l| l.sector.is_rindler(),
        |l| rindler_image(l, &factors(l.bin)?),
    )
}

pub(crate) fn unruh_to_rindler_with<F>(expr: &OperatorExpr, factors: F) -> Result<OperatorExpr>
where
    F: Fn(u32) -> Result<UnruhFactors>,
{
    map_basis(
        expr,
        |l| matches!(l.sector, Sector::UnruhC | Sector::UnruhD),
        |l| unruh_image(l, &factors(l.bin)?),
    )
}

fn map_basis<P, I>(expr: &OperatorExpr, selected: P, image: I) -> Result<OperatorExpr>
where
    P: Fn(ModeLabel) -> bool,
    I: Fn(ModeLabel) -> Result<OperatorExpr>,
{
    let mut out = OperatorExpr {
        displacement: expr.displacement,
        lo: expr.lo,
        terms: BTreeMap::new(),
    };
    for (t, c) in &expr.terms {
        if !selected(t.label) {
            out.add_term(t.label, t.dagger, *c);
            continue;
        }
        let img = image(t.label)?;
        if t.dagger {
            out.add_scaled(&img.adjoint(), *c);
        } else {
            out.add_scaled(&img, *c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn vac(bin: u32) -> OperatorExpr {
        OperatorExpr::mode(ModeLabel::aux(bin))
    }

    #[test]
    fn displacements_add() {
        let b = vac(0);
        assert_eq!(displace(&b, c(0.0)), b);
        let d = displace(&displace(&b, Complex64::new(2.0, 1.0)), c(0.1));
        assert!((d.displacement() - Complex64::new(2.1, 1.0)).norm() < 1e-15);
        assert_eq!(d.coefficient(ModeLabel::aux(0), false), c(1.0));
    }

    #[test]
    fn displaced_vacuum_quadrature_mean() {
        let alpha = 0.7;
        let x = quadrature(&displace(&vac(0), c(alpha)), 0.0);
        let mean = wick_expectation(&[x]).unwrap();
        assert!((mean - c(2.0 * alpha)).norm() < 1e-15);
    }

    #[test]
    fn two_mode_squeeze_coefficients() {
        let (o1, o2) = two_mode_squeeze(&vac(0), &vac(1), 0.0, 0.0).unwrap();
        assert_eq!(o1, vac(0));
        assert_eq!(o2, vac(1));

        let (o1, _) = two_mode_squeeze(&vac(0), &vac(1), 1.0, 0.0).unwrap();
        // sinh 1 = 1.1752011936438014569
        assert!(
            (o1.coefficient(ModeLabel::aux(1), true).re - 1.175_201_193_643_801_4).abs() < 1e-15
        );
        assert!((o1.commutator(&o1.adjoint()) - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn two_mode_squeeze_rejects_shared_modes() {
        let e = vac(0) + vac(1);
        assert_eq!(
            two_mode_squeeze(&e, &vac(1), 0.3, 0.0).unwrap_err(),
            Error::SharedMode(ModeLabel::aux(1))
        );
        // orthogonal combinations of the same modes commute
        let f = vac(0) - vac(1);
        assert!(beam_splitter(&e, &f, 0.5).is_ok());
    }

    #[test]
    fn single_mode_squeezed_vacuum_variances() {
        let rs = 0.4;
        let s = single_mode_squeeze(&vac(0), 0.0);
        assert_eq!(s, vac(0));
        let s = single_mode_squeeze(&vac(0), rs);
        let v0 = quadrature_variance(&s, 0.0).unwrap();
        let v90 = quadrature_variance(&s, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((v0 - (2.0 * rs).exp()).abs() < 1e-14);
        assert!((v90 - (-2.0 * rs).exp()).abs() < 1e-14);
    }

    #[test]
    fn beam_splitter_limits_and_domain() {
        let (o1, _) = beam_splitter(&vac(0), &vac(1), 1.0).unwrap();
        assert_eq!(o1, vac(0));
        let (o1, _) = beam_splitter(&vac(0), &vac(1), 0.0).unwrap();
        assert_eq!(o1, -vac(1));
        assert!(beam_splitter(&vac(0), &vac(1), 1.5).is_err());
        assert!(beam_splitter(&vac(0), &vac(1), -0.1).is_err());
    }

    #[test]
    fn attenuated_amplifier_has_tanh_structure() {
        let r: f64 = 1.3;
        let eta = r.cosh().powi(-2);
        let (a_in, a_j, a_i) = (vac(0), vac(2), vac(1));
        let (bs, _) = beam_splitter(&a_in, &a_j, eta).unwrap();
        let (amp_in, amp_i) = two_mode_squeeze(&a_in, &a_i, r, 0.0).unwrap();
        let images = BTreeMap::from([(ModeLabel::aux(0), amp_in), (ModeLabel::aux(1), amp_i)]);
        let out = bs.substitute(&images);
        assert!((out.coefficient(ModeLabel::aux(0), false) - c(1.0)).norm() < 1e-15);
        assert!((out.coefficient(ModeLabel::aux(1), true) - c(r.tanh())).norm() < 1e-15);
    }

    #[test]
    fn wick_basic_contractions() {
        let a = vac(0);
        let ad = a.adjoint();
        assert_eq!(wick_expectation(&[a.clone(), ad.clone()]).unwrap(), c(1.0));
        assert_eq!(wick_expectation(&[ad, a]).unwrap(), c(0.0));
    }

    #[test]
    fn wick_quartic_position_moment() {
        // <x^4> = 3 for x = c + c^dag; independently checked in the Fock
        // representation (see oracle::fock tests).
        let x = vac(0) + vac(0).adjoint();
        let v = wick_expectation(&[x.clone(), x.clone(), x.clone(), x]).unwrap();
        assert!((v - c(3.0)).norm() < 1e-15);
    }

    #[test]
    fn wick_rejects_rindler_and_bad_lengths() {
        let b = OperatorExpr::mode(ModeLabel::rindler(Sector::RindlerIV, 0));
        assert!(matches!(
            wick_expectation(&[b.clone(), b.adjoint()]),
            Err(Error::NonVacuumMode(_))
        ));
        let a = vac(0);
        assert_eq!(
            wick_expectation(&[a.clone(), a.clone(), a]).unwrap_err(),
            Error::ProductLength(3)
        );
        assert_eq!(
            wick_expectation(&[displace_lo(&vac(0))]).unwrap_err(),
            Error::UnresolvedLocalOscillator
        );
    }

    #[test]
    fn rindler_unruh_round_trip() {
        let grid = [0.3, 1.0, 2.5];
        let a = 2.0;
        let mut e = OperatorExpr::zero();
        e.add_term(ModeLabel::rindler(Sector::RindlerIV, 0), false, c(0.5));
        e.add_term(
            ModeLabel::rindler(Sector::RindlerIII, 2),
            true,
            Complex64::new(0.1, 0.2),
        );
        e.add_term(ModeLabel::rindler(Sector::RindlerI, 1), false, c(-0.7));
        let u = rindler_to_unruh(&e, a, &grid).unwrap();
        assert!(u.labels().iter().all(|l| l.sector.is_vacuum_basis()));
        let back = unruh_to_rindler(&u, a, &grid).unwrap().simplified();
        assert_eq!(back.labels(), e.labels());
        for (t, k) in e.terms() {
            assert!((back.coefficient(t.label, t.dagger) - k).norm() < 1e-12);
        }
    }

    #[test]
    fn rindler_to_unruh_reference_bin() {
        // omega / a = ln 2 / pi gives tanh r = 1/2, so (cosh, sinh) = (2/sqrt3, 1/sqrt3)
        let grid = [std::f64::consts::LN_2 / std::f64::consts::PI];
        let b = OperatorExpr::mode(ModeLabel::rindler(Sector::RindlerIV, 0));
        let u = rindler_to_unruh(&b, 1.0, &grid).unwrap();
        let ch = u
            .coefficient(ModeLabel::unruh_c(Chirality::Left, 0), false)
            .re;
        let sh = u
            .coefficient(ModeLabel::unruh_d(Chirality::Left, 0), true)
            .re;
        assert!((ch - 1.154_700_538_379_251_5).abs() < 1e-14);
        assert!((sh - 0.577_350_269_189_625_8).abs() < 1e-14);
        assert!((u.commutator(&u.adjoint()) - c(1.0)).norm() < 1e-10);
    }

    #[test]
    fn rindler_to_unruh_small_acceleration_is_relabeling() {
        let grid = [1.0];
        let b = OperatorExpr::mode(ModeLabel::rindler(Sector::RindlerI, 0)) * 0.8;
        let u = rindler_to_unruh(&b, 0.01, &grid).unwrap();
        assert!(
            (u.coefficient(ModeLabel::unruh_c(Chirality::Right, 0), false) - c(0.8)).norm() < 1e-12
        );
        assert!(
            u.coefficient(ModeLabel::unruh_d(Chirality::Right, 0), true)
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn rindler_to_unruh_errors() {
        let wrong = OperatorExpr::mode(ModeLabel::new(Sector::RindlerIV, Chirality::Right, 0));
        assert!(matches!(
            rindler_to_unruh(&wrong, 1.0, &[1.0]),
            Err(Error::UnmappedSector(_))
        ));
        let off_grid = OperatorExpr::mode(ModeLabel::rindler(Sector::RindlerIV, 5));
        assert!(matches!(
            rindler_to_unruh(&off_grid, 1.0, &[1.0]),
            Err(Error::GridMismatch(_))
        ));
    }
}
