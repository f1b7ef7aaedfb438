//! Finite-dimensional graded-commutative rings over GF(2), presented as
//! truncated polynomial rings: one generator per variable, with the single
//! relation g^truncation = 0. Over GF(2) graded commutativity coincides with
//! strict commutativity, so no sign bookkeeping is needed.
//!
//! A monomial is an exponent vector e with 0 <= e_i < truncation_i. Monomials
//! are ordered lexicographically on exponent vectors in generator order; this
//! order is the canonical basis order everywhere (matrices, kernel bases,
//! golden output).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::Error;

/// Hard cap on the monomial count of a presentation; beyond this the dense
/// per-monomial tables stop being reasonable.
pub const MAX_TOTAL_DIM: usize = 1 << 22;

/// One ring generator: `degree >= 1` and `truncation >= 2`, the smallest
/// power that vanishes. Truncation 2 models exterior (square-zero)
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    pub truncation: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32, truncation: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            truncation,
        }
    }
}

/// A truncated-polynomial presentation with dense monomial tables.
///
/// `code` below always means the mixed-radix index of an exponent vector,
/// most significant digit first, so increasing code order is lexicographic
/// order on exponents.
pub struct RingPresentation {
    gens: Vec<GeneratorSpec>,
    total_dim: usize,
    top_degree: u32,
    strides: Vec<usize>,
    exponents: Vec<u16>, // total_dim * gens.len(), row per code
    code_degree: Vec<u32>,
    code_index: Vec<u32>,
    degree_bases: Vec<Vec<usize>>, // codes per degree, ascending
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}
impl Eq for RingPresentation {}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RingPresentation({} gens, dim {}, top degree {})",
            self.gens.len(),
            self.total_dim,
            self.top_degree
        )
    }
}

/// Validates the generator list and builds the monomial tables.
pub fn make_presentation(gens: Vec<GeneratorSpec>) -> Result<Arc<RingPresentation>, Error> {
    let mut seen = BTreeSet::new();
    for g in &gens {
        if g.name.is_empty() || !seen.insert(g.name.clone()) {
            return Err(Error::InvalidGenerator(format!(
                "duplicate or empty generator name {:?}",
                g.name
            )));
        }
        if g.degree == 0 {
            return Err(Error::InvalidGenerator(format!(
                "generator {:?} must have degree >= 1",
                g.name
            )));
        }
        if g.truncation < 2 {
            return Err(Error::InvalidGenerator(format!(
                "generator {:?} must have truncation >= 2",
                g.name
            )));
        }
        if g.truncation > u16::MAX as u32 {
            return Err(Error::InvalidGenerator(format!(
                "generator {:?}: truncation too large",
                g.name
            )));
        }
    }
    let mut total_dim: usize = 1;
    for g in &gens {
        total_dim = total_dim
            .checked_mul(g.truncation as usize)
            .filter(|&d| d <= MAX_TOTAL_DIM)
            .ok_or_else(|| {
                Error::InvalidGenerator(format!("presentation exceeds {MAX_TOTAL_DIM} monomials"))
            })?;
    }
    let top_degree: u32 = gens.iter().map(|g| g.degree * (g.truncation - 1)).sum();

    let n = gens.len();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * gens[i + 1].truncation as usize;
    }

    let mut exponents = vec![0u16; total_dim * n];
    let mut code_degree = vec![0u32; total_dim];
    let mut code_index = vec![0u32; total_dim];
    let mut degree_bases = vec![Vec::new(); top_degree as usize + 1];

    let mut exp = vec![0u16; n];
    for code in 0..total_dim {
        let d: u32 = exp
            .iter()
            .zip(&gens)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum();
        exponents[code * n..(code + 1) * n].copy_from_slice(&exp);
        code_degree[code] = d;
        degree_bases[d as usize].push(code);
        // next exponent vector in code order
        for i in (0..n).rev() {
            exp[i] += 1;
            if (exp[i] as u32) < gens[i].truncation {
                break;
            }
            exp[i] = 0;
        }
    }
    // Degree bases list the lexicographically greatest exponent vector
    // first (leading-monomial-first, the usual polynomial display order).
    for bucket in &mut degree_bases {
        bucket.reverse();
        for (i, &code) in bucket.iter().enumerate() {
            code_index[code] = i as u32;
        }
    }

    Ok(Arc::new(RingPresentation {
        gens,
        total_dim,
        top_degree,
        strides,
        exponents,
        code_degree,
        code_index,
        degree_bases,
    }))
}

impl RingPresentation {
    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// All monomial codes of total degree exactly `d`, lexicographic order.
    /// Empty above the top degree.
    pub fn degree_basis(&self, d: u32) -> &[usize] {
        if d > self.top_degree {
            &[]
        } else {
            &self.degree_bases[d as usize]
        }
    }

    pub fn degree_dim(&self, d: u32) -> usize {
        self.degree_basis(d).len()
    }

    pub fn monomial_exponents(&self, code: usize) -> &[u16] {
        let n = self.gens.len();
        &self.exponents[code * n..(code + 1) * n]
    }

    pub fn degree_of_code(&self, code: usize) -> u32 {
        self.code_degree[code]
    }

    /// Position of a monomial inside its degree basis.
    pub fn index_in_degree(&self, code: usize) -> usize {
        self.code_index[code] as usize
    }

    pub fn code_of_exponents(&self, exp: &[u16]) -> usize {
        debug_assert_eq!(exp.len(), self.gens.len());
        exp.iter()
            .zip(&self.strides)
            .map(|(&e, &s)| e as usize * s)
            .sum()
    }

    /// Product of two monomials: `None` when some exponent reaches its
    /// truncation.
    pub fn mul_codes(&self, a: usize, b: usize) -> Option<usize> {
        let n = self.gens.len();
        let ea = &self.exponents[a * n..(a + 1) * n];
        let eb = &self.exponents[b * n..(b + 1) * n];
        let mut code = 0usize;
        for i in 0..n {
            let e = ea[i] as u32 + eb[i] as u32;
            if e >= self.gens[i].truncation {
                return None;
            }
            code += e as usize * self.strides[i];
        }
        Some(code)
    }

    pub fn render_monomial(&self, code: usize) -> String {
        let exp = self.monomial_exponents(code);
        let mut parts = Vec::new();
        for (g, &e) in self.gens.iter().zip(exp) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// (totalDim, topDegree) of a presentation.
pub fn ring_metrics(ring: &RingPresentation) -> (usize, u32) {
    (ring.total_dim, ring.top_degree)
}

fn same_ring(a: &Arc<RingPresentation>, b: &Arc<RingPresentation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element: a set of monomials (codes) with implicit coefficient 1.
/// The empty set is zero; the empty exponent vector (code 0) is the unit.
/// Terms may mix degrees.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    ring: Arc<RingPresentation>,
    terms: BTreeSet<usize>,
}

// Hash only the term set; collections never mix rings in practice and Eq
// still compares presentations.
impl std::hash::Hash for Element {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Element {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeSet::new(),
        }
    }

    pub fn unit(ring: &Arc<RingPresentation>) -> Self {
        Self::from_codes(ring, [0])
    }

    pub fn generator(ring: &Arc<RingPresentation>, i: usize) -> Self {
        assert!(i < ring.gen_count());
        let mut exp = vec![0u16; ring.gen_count()];
        exp[i] = 1;
        let code = ring.code_of_exponents(&exp);
        Self::from_codes(ring, [code])
    }

    pub fn from_codes(
        ring: &Arc<RingPresentation>,
        codes: impl IntoIterator<Item = usize>,
    ) -> Self {
        let terms: BTreeSet<usize> = codes.into_iter().collect();
        debug_assert!(terms.iter().all(|&c| c < ring.total_dim()));
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_exponent_vectors(
        ring: &Arc<RingPresentation>,
        monomials: &[Vec<u16>],
    ) -> Result<Self, Error> {
        let mut terms = BTreeSet::new();
        for exp in monomials {
            if exp.len() != ring.gen_count() {
                return Err(Error::DimensionMismatch {
                    expected: ring.gen_count(),
                    found: exp.len(),
                });
            }
            for (e, g) in exp.iter().zip(ring.generators()) {
                if *e as u32 >= g.truncation {
                    return Err(Error::InvalidGenerator(format!(
                        "exponent {} of {:?} reaches truncation {}",
                        e, g.name, g.truncation
                    )));
                }
            }
            // toggling matches mod-2 addition of repeated monomials
            let code = ring.code_of_exponents(exp);
            if !terms.insert(code) {
                terms.remove(&code);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            terms,
        })
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().copied()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(d)` when every term has degree `d`. Zero is homogeneous of
    /// every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.iter();
        let first = self.ring.degree_of_code(*it.next()?);
        it.all(|&c| self.ring.degree_of_code(c) == first)
            .then_some(first)
    }

    /// The degree-`d` slice of the element.
    pub fn homogeneous_part(&self, d: u32) -> Element {
        Element {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|&c| self.ring.degree_of_code(c) == d)
                .collect(),
        }
    }

    pub fn occupied_degrees(&self) -> BTreeSet<u32> {
        self.terms
            .iter()
            .map(|&c| self.ring.degree_of_code(c))
            .collect()
    }

    /// Symmetric difference of term sets (mod-2 addition).
    pub fn add(&self, other: &Element) -> Result<Element, Error> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut terms = self.terms.clone();
        for &c in &other.terms {
            if !terms.insert(c) {
                terms.remove(&c);
            }
        }
        Ok(Element {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Mod-2 expansion with exponent addition; any monomial reaching a
    /// truncation is dropped.
    pub fn mul(&self, other: &Element) -> Result<Element, Error> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut terms = BTreeSet::new();
        for &a in &self.terms {
            for &b in &other.terms {
                if let Some(c) = self.ring.mul_codes(a, b) {
                    if !terms.insert(c) {
                        terms.remove(&c);
                    }
                }
            }
        }
        Ok(Element {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Element {
        let mut acc = Element::unit(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // leading monomial first, matching the degree basis order
        let rendered: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|&c| self.ring.render_monomial(c))
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Künneth tensor product: the concatenated generator list, with names
/// suffixed ".k" by 1-based factor position. `offsets[k]` is the index of
/// factor k's first generator in the product presentation.
pub struct TensorProduct {
    pub ring: Arc<RingPresentation>,
    pub offsets: Vec<usize>,
    pub factors: Vec<Arc<RingPresentation>>,
}

pub fn tensor(factors: &[Arc<RingPresentation>]) -> Result<TensorProduct, Error> {
    if factors.is_empty() {
        return Err(Error::InvalidGenerator("tensor of no factors".into()));
    }
    let mut gens = Vec::new();
    let mut offsets = Vec::with_capacity(factors.len());
    for (k, f) in factors.iter().enumerate() {
        offsets.push(gens.len());
        for g in f.generators() {
            gens.push(GeneratorSpec::new(
                format!("{}.{}", g.name, k + 1),
                g.degree,
                g.truncation,
            ));
        }
    }
    Ok(TensorProduct {
        ring: make_presentation(gens)?,
        offsets,
        factors: factors.to_vec(),
    })
}

impl TensorProduct {
    /// Image of a factor element under the canonical embedding (exponent
    /// splice; no ring map machinery needed).
    pub fn embed(&self, factor: usize, e: &Element) -> Result<Element, Error> {
        let src = &self.factors[factor];
        if !same_ring(e.ring(), src) {
            return Err(Error::RingMismatch);
        }
        let n = self.ring.gen_count();
        let off = self.offsets[factor];
        let codes = e.terms().map(|c| {
            let mut exp = vec![0u16; n];
            exp[off..off + src.gen_count()].copy_from_slice(src.monomial_exponents(c));
            self.ring.code_of_exponents(&exp)
        });
        Ok(Element::from_codes(&self.ring, codes))
    }
}
