//! The free graded-commutative algebra on the Maurer–Cartan forms of G₂,
//! with the differential given by the structure equations
//!
//! ```text
//! dθ_i    = −κ_{il̄}∧θ_l + ε_{ijk} θ̄_j∧θ̄_k
//! dκ_{ij̄} = −κ_{ik̄}∧κ_{kj̄} + 3 θ_i∧θ̄_j − δ_{ij} θ_k∧θ̄_k
//! ```
//!
//! The fourteen generators are `θ₁,θ₂,θ₃`, their conjugates, and the eight
//! `κ_{ij̄}` with `(i,j) ≠ (3,3)`; `κ_{33̄} = −κ_{11̄} − κ_{22̄}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{format_rational, qi, ComplexField, Cq, Field, Q};

pub const NUM_GENERATORS: usize = 14;

/// A monomial is a set of generators, written in increasing order.
pub type Word = u16;

/// One of the fourteen degree-one generators, by position in the fixed order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u8);

const KAPPA_PAIRS: [(u8, u8); 8] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)];

impl Generator {
    pub fn theta(i: usize) -> Self {
        assert!((1..=3).contains(&i));
        Self(i as u8 - 1)
    }

    pub fn theta_bar(i: usize) -> Self {
        assert!((1..=3).contains(&i));
        Self(i as u8 + 2)
    }

    /// `κ_{ij̄}` for `(i,j) ≠ (3,3)`.
    pub fn kappa(i: usize, j: usize) -> Option<Self> {
        KAPPA_PAIRS.iter().position(|&p| p == (i as u8, j as u8)).map(|k| Self(6 + k as u8))
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..NUM_GENERATORS as u8).map(Self)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn bit(self) -> Word {
        1 << self.0
    }

    /// ASCII name used in reports: `theta1`, `theta1bar`, `kappa12bar`.
    pub fn name(self) -> String {
        match self.0 {
            0..=2 => format!("theta{}", self.0 + 1),
            3..=5 => format!("theta{}bar", self.0 - 2),
            k => {
                let (i, j) = KAPPA_PAIRS[(k - 6) as usize];
                format!("kappa{i}{j}bar")
            }
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::all().find(|g| g.name() == name).ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))
    }

    /// The conjugate as a signed generator: `conj θ_i = θ̄_i` and
    /// `conj κ_{ij̄} = −κ_{jī}`.
    fn conj(self) -> (Self, i8) {
        match self.0 {
            0..=2 => (Self(self.0 + 3), 1),
            3..=5 => (Self(self.0 - 3), 1),
            k => {
                let (i, j) = KAPPA_PAIRS[(k - 6) as usize];
                (Self::kappa(j as usize, i as usize).expect("transpose of a listed pair"), -1)
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sign of `a·b` reordered into increasing order, or `None` if they share a
/// generator.
fn word_product_sign(a: Word, b: Word) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        // generators of a sitting above y must move past it
        inversions += (a >> (y + 1)).count_ones();
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

fn word_generators(w: Word) -> Vec<Generator> {
    (0..NUM_GENERATORS as u8).filter(|i| w & (1 << i) != 0).map(Generator).collect()
}

/// Human-readable word, e.g. `theta2bar*theta3`.
pub fn word_name(w: Word) -> String {
    if w == 0 {
        return "1".into();
    }
    word_generators(w).iter().map(|g| g.name()).collect::<Vec<_>>().join("*")
}

/// A finite sum of words with Gaussian-rational coefficients. The
/// representation is canonical: sorted words, nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DgaElement {
    terms: BTreeMap<Word, Cq>,
}

impl fmt::Debug for DgaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({} + {}i) {}", format_rational(&c.re), format_rational(&c.im), word_name(*w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl DgaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Cq::one())
    }

    pub fn scalar(c: Cq) -> Self {
        let mut e = Self::zero();
        e.add_term(0, c);
        e
    }

    pub fn generator(g: Generator) -> Self {
        let mut e = Self::zero();
        e.add_term(g.bit(), Cq::one());
        e
    }

    pub fn theta(i: usize) -> Self {
        Self::generator(Generator::theta(i))
    }

    pub fn theta_bar(i: usize) -> Self {
        Self::generator(Generator::theta_bar(i))
    }

    /// `κ_{ij̄}` for any `i, j`, expanding `κ_{33̄} = −κ_{11̄} − κ_{22̄}`.
    pub fn kappa(i: usize, j: usize) -> Self {
        match Generator::kappa(i, j) {
            Some(g) => Self::generator(g),
            None => Self::generator(Generator::kappa(1, 1).unwrap())
                .add(&Self::generator(Generator::kappa(2, 2).unwrap()))
                .neg(),
        }
    }

    /// Builds an element from `(generators in any order, coefficient)` pairs.
    pub fn from_words(words: &[(Vec<Generator>, Cq)]) -> Self {
        let mut out = Self::zero();
        for (gens, c) in words {
            let mut term = Self::scalar(c.clone());
            for g in gens {
                term = term.mul(&Self::generator(*g));
            }
            out = out.add(&term);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: Cq) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&w) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Word, &Cq)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coefficient(&self, gens: &[Generator]) -> Cq {
        let probe = Self::from_words(&[(gens.to_vec(), Cq::one())]);
        match probe.terms.iter().next() {
            Some((w, sign)) => self.terms.get(w).map(|c| c.clone() * sign.clone()).unwrap_or_else(Cq::zero),
            None => Cq::zero(),
        }
    }

    /// The degree, when every word has the same length.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|w| w.count_ones());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Cq::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Cq) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(*w, c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if let Some(sign) = word_product_sign(*wa, *wb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(wa | wb, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Complex conjugation, an involution of the algebra.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut term = Self::scalar(c.conj());
            for g in word_generators(*w) {
                let (h, sign) = g.conj();
                let gh = Self::generator(h);
                term = term.mul(&if sign < 0 { gh.neg() } else { gh });
            }
            out = out.add(&term);
        }
        out
    }

    /// Sets the generators in `set` to zero.
    pub fn reduce_mod(&self, set: &[Generator]) -> Self {
        let mask: Word = set.iter().fold(0, |m, g| m | g.bit());
        Self { terms: self.terms.iter().filter(|(w, _)| *w & mask == 0).map(|(w, c)| (*w, c.clone())).collect() }
    }

    pub fn residual_terms(&self) -> Vec<ResidualTerm> {
        self.terms
            .iter()
            .map(|(w, c)| ResidualTerm { word: word_name(*w), re: format_rational(&c.re), im: format_rational(&c.im) })
            .collect()
    }
}

/// Coefficients of the structure equations. [`StructureRules::standard`] is
/// the Lie algebra of G₂; the others are corruptions used as controls.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureRules {
    /// Coefficient of `κ_{il̄}∧θ_l` in `dθ_i` (standard `−1`).
    pub theta_kappa: Q,
    /// Coefficient of `ε_{ijk} θ̄_j∧θ̄_k` in `dθ_i` (standard `1`).
    pub theta_eps: Q,
    /// Coefficient of `κ_{ik̄}∧κ_{kj̄}` in `dκ_{ij̄}` (standard `−1`).
    pub kappa_quadratic: Q,
    /// Coefficient of `θ_i∧θ̄_j` in `dκ_{ij̄}` (standard `3`).
    pub kappa_theta: Q,
    /// Coefficient of `δ_{ij} θ_k∧θ̄_k` in `dκ_{ij̄}` (standard `−1`).
    pub kappa_trace: Q,
}

impl Default for StructureRules {
    fn default() -> Self {
        Self::standard()
    }
}

/// Named corruptions of the structure equations.
pub const MUTATIONS: [&str; 5] = ["dkappa-coeff", "dkappa-trace", "dkappa-quadratic", "dtheta-eps", "dtheta-kappa"];

impl StructureRules {
    pub fn standard() -> Self {
        Self { theta_kappa: qi(-1), theta_eps: qi(1), kappa_quadratic: qi(-1), kappa_theta: qi(3), kappa_trace: qi(-1) }
    }

    /// A corrupted rule set; see [`MUTATIONS`].
    pub fn mutated(name: &str) -> Result<Self> {
        let mut r = Self::standard();
        match name {
            "dkappa-coeff" => r.kappa_theta = qi(4),
            "dkappa-trace" => r.kappa_trace = qi(-2),
            "dkappa-quadratic" => r.kappa_quadratic = qi(1),
            "dtheta-eps" => r.theta_eps = qi(2),
            "dtheta-kappa" => r.theta_kappa = qi(1),
            other => {
                return Err(Error::Usage(format!(
                    "unknown mutation {other:?}; expected one of {}",
                    MUTATIONS.join(", ")
                )))
            }
        }
        Ok(r)
    }

    fn d_theta(&self, i: usize) -> DgaElement {
        let mut out = DgaElement::zero();
        for l in 1..=3 {
            let t = DgaElement::kappa(i, l).mul(&DgaElement::theta(l));
            out = out.add(&t.scale(&Cq::from_real(self.theta_kappa.clone())));
        }
        // ε_{ijk} θ̄_j θ̄_k = 2 θ̄_j θ̄_k for the cyclic successors of i
        let (j, k) = (i % 3 + 1, (i + 1) % 3 + 1);
        let eps = DgaElement::theta_bar(j).mul(&DgaElement::theta_bar(k));
        out.add(&eps.scale(&Cq::from_real(self.theta_eps.clone() * qi(2))))
    }

    fn d_kappa(&self, i: usize, j: usize) -> DgaElement {
        let mut out = DgaElement::zero();
        for k in 1..=3 {
            let t = DgaElement::kappa(i, k).mul(&DgaElement::kappa(k, j));
            out = out.add(&t.scale(&Cq::from_real(self.kappa_quadratic.clone())));
        }
        let tt = DgaElement::theta(i).mul(&DgaElement::theta_bar(j));
        out = out.add(&tt.scale(&Cq::from_real(self.kappa_theta.clone())));
        if i == j {
            out = out.add(&theta_theta_bar_trace().scale(&Cq::from_real(self.kappa_trace.clone())));
        }
        out
    }

    /// `d` of a single generator.
    pub fn d_generator(&self, g: Generator) -> DgaElement {
        match g.0 {
            0..=2 => self.d_theta(g.index() + 1),
            3..=5 => self.d_theta(g.index() - 2).conj(),
            k => {
                let (i, j) = KAPPA_PAIRS[(k - 6) as usize];
                self.d_kappa(i as usize, j as usize)
            }
        }
    }

    /// The graded Leibniz extension of the generator rules.
    pub fn d(&self, e: &DgaElement) -> DgaElement {
        let dg: Vec<DgaElement> = Generator::all().map(|g| self.d_generator(g)).collect();
        let mut out = DgaElement::zero();
        for (w, c) in &e.terms {
            let gens = word_generators(*w);
            for (pos, g) in gens.iter().enumerate() {
                let before = gens[..pos]
                    .iter()
                    .fold(DgaElement::scalar(c.clone()), |acc, h| acc.mul(&DgaElement::generator(*h)));
                let after =
                    gens[pos + 1..].iter().fold(DgaElement::one(), |acc, h| acc.mul(&DgaElement::generator(*h)));
                let term = before.mul(&dg[g.index()]).mul(&after);
                out = out.add(&if pos % 2 == 1 { term.neg() } else { term });
            }
        }
        out
    }
}

/// `d` with the standard structure equations.
pub fn d(e: &DgaElement) -> DgaElement {
    StructureRules::standard().d(e)
}

/// `Σ_k θ_k∧θ̄_k`.
fn theta_theta_bar_trace() -> DgaElement {
    (1..=3).fold(DgaElement::zero(), |acc, k| acc.add(&DgaElement::theta(k).mul(&DgaElement::theta_bar(k))))
}

/// `ω = 2i ᵗθ∧θ̄`.
pub fn omega() -> DgaElement {
    theta_theta_bar_trace().scale(&Cq::new(qi(0), qi(2)))
}

/// `Υ = 8 θ₁∧θ₂∧θ₃`.
pub fn upsilon() -> DgaElement {
    upsilon_scaled(qi(8))
}

fn upsilon_scaled(c: Q) -> DgaElement {
    DgaElement::theta(1).mul(&DgaElement::theta(2)).mul(&DgaElement::theta(3)).scale(&Cq::from_real(c))
}

/// `Im x = (x − x̄)/2i`.
pub fn imaginary_part(e: &DgaElement) -> DgaElement {
    e.sub(&e.conj()).scale(&Cq::new(qi(0), Q::new((-1).into(), 2.into())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualTerm {
    pub word: String,
    pub re: String,
    pub im: String,
}

/// One line of a DGA report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgaCheck {
    pub check: String,
    pub generator: String,
    pub residual_terms: Vec<ResidualTerm>,
    pub pass: bool,
}

impl DgaCheck {
    fn zero_residual(check: &str, generator: &str, residual: &DgaElement) -> Self {
        Self {
            check: check.into(),
            generator: generator.into(),
            residual_terms: residual.residual_terms(),
            pass: residual.is_zero(),
        }
    }
}

/// `d(d(g))` for all fourteen generators.
pub fn verify_d_squared(rules: &StructureRules) -> Vec<DgaCheck> {
    Generator::all().map(|g| DgaCheck::zero_residual("d_squared", &g.name(), &rules.d(&rules.d_generator(g)))).collect()
}

/// `dω − 3 Im Υ`, `dΥ − 2ω²` and `ω∧Υ`, with `Υ = c·θ₁θ₂θ₃` (`c = 8`
/// normally; other values are a control).
pub fn verify_invariant_form_identities_with(rules: &StructureRules, upsilon_coeff: Q) -> Vec<DgaCheck> {
    let w = omega();
    let u = upsilon_scaled(upsilon_coeff);
    let d_omega = rules.d(&w).sub(&imaginary_part(&u).scale(&Cq::from_i64(3)));
    let d_upsilon = rules.d(&u).sub(&w.mul(&w).scale(&Cq::from_i64(2)));
    let primitive = w.mul(&u);
    vec![
        DgaCheck::zero_residual("d_omega_eq_3_im_upsilon", "omega", &d_omega),
        DgaCheck::zero_residual("d_upsilon_eq_2_omega_squared", "upsilon", &d_upsilon),
        DgaCheck::zero_residual("omega_wedge_upsilon", "omega*upsilon", &primitive),
    ]
}

pub fn verify_invariant_form_identities(rules: &StructureRules) -> Vec<DgaCheck> {
    verify_invariant_form_identities_with(rules, qi(8))
}

/// The system `θ₁ = θ̄₂ = θ̄₃ = κ_{12̄} = κ_{13̄} = 0`.
pub fn frobenius_set() -> Vec<Generator> {
    vec![
        Generator::theta(1),
        Generator::theta_bar(2),
        Generator::theta_bar(3),
        Generator::kappa(1, 2).unwrap(),
        Generator::kappa(1, 3).unwrap(),
    ]
}

/// Checks `d(s) ∈ (S)` for each `s ∈ S` by reducing modulo `S`.
pub fn verify_closed_system(rules: &StructureRules, set: &[Generator]) -> Vec<DgaCheck> {
    set.iter()
        .map(|g| DgaCheck::zero_residual("frobenius", &g.name(), &rules.d_generator(*g).reduce_mod(set)))
        .collect()
}

pub fn verify_frobenius_system(rules: &StructureRules) -> Vec<DgaCheck> {
    verify_closed_system(rules, &frobenius_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::cq;

    fn g_kappa(i: usize, j: usize) -> Generator {
        Generator::kappa(i, j).unwrap()
    }

    #[test]
    fn generator_names_round_trip() {
        for g in Generator::all() {
            assert_eq!(Generator::parse(&g.name()).unwrap(), g);
        }
        assert_eq!(Generator::theta_bar(2).name(), "theta2bar");
        assert_eq!(g_kappa(3, 2).name(), "kappa32bar");
        assert!(Generator::kappa(3, 3).is_none());
    }

    #[test]
    fn anticommutation() {
        let a = DgaElement::theta(1);
        let b = DgaElement::kappa(2, 3);
        assert_eq!(a.mul(&b), b.mul(&a).neg());
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn d_theta1_example() {
        let expected = DgaElement::from_words(&[
            (vec![g_kappa(1, 1), Generator::theta(1)], cq(-1, 0)),
            (vec![g_kappa(1, 2), Generator::theta(2)], cq(-1, 0)),
            (vec![g_kappa(1, 3), Generator::theta(3)], cq(-1, 0)),
            (vec![Generator::theta_bar(2), Generator::theta_bar(3)], cq(2, 0)),
        ]);
        assert_eq!(d(&DgaElement::theta(1)), expected);
        assert!(d(&DgaElement::one()).is_zero());
    }

    #[test]
    fn d_of_theta123() {
        let t = Generator::theta;
        let tb = Generator::theta_bar;
        let expected = DgaElement::from_words(&[
            (vec![tb(2), tb(3), t(2), t(3)], cq(2, 0)),
            (vec![tb(3), tb(1), t(3), t(1)], cq(2, 0)),
            (vec![tb(1), tb(2), t(1), t(2)], cq(2, 0)),
        ]);
        let x = DgaElement::theta(1).mul(&DgaElement::theta(2)).mul(&DgaElement::theta(3));
        assert_eq!(d(&x), expected);
    }

    #[test]
    fn kappa_conjugation_rules() {
        assert_eq!(DgaElement::kappa(1, 1).conj(), DgaElement::kappa(1, 1).neg());
        assert_eq!(DgaElement::kappa(1, 3).conj(), DgaElement::kappa(3, 1).neg());
        assert_eq!(DgaElement::kappa(3, 3).conj(), DgaElement::kappa(3, 3).neg());
        let x = DgaElement::theta(1).mul(&DgaElement::kappa(2, 1)).scale(&cq(1, 2));
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn d_squared_vanishes() {
        for c in verify_d_squared(&StructureRules::standard()) {
            assert!(c.pass, "{}: {:?}", c.generator, c.residual_terms);
        }
    }

    #[test]
    fn every_mutation_breaks_d_squared() {
        for m in MUTATIONS {
            let rules = StructureRules::mutated(m).unwrap();
            assert!(verify_d_squared(&rules).iter().any(|c| !c.pass), "{m}");
        }
        assert!(StructureRules::mutated("nope").is_err());
    }

    #[test]
    fn invariant_form_identities_hold() {
        for c in verify_invariant_form_identities(&StructureRules::standard()) {
            assert!(c.pass, "{}: {:?}", c.check, c.residual_terms);
        }
        let bad = verify_invariant_form_identities_with(&StructureRules::standard(), qi(7));
        assert!(!bad[0].pass && !bad[1].pass);
    }

    #[test]
    fn frobenius_system_closes() {
        for c in verify_frobenius_system(&StructureRules::standard()) {
            assert!(c.pass, "{}", c.generator);
        }
        let control = verify_closed_system(&StructureRules::standard(), &[Generator::theta(1)]);
        assert!(!control[0].pass);
    }
}
