//! Unital degree-preserving ring homomorphisms given on generators, their
//! per-degree matrices and kernels, and the two derived maps the bound
//! machinery needs: the diagonal-evaluation homomorphism and factor-wise
//! powers.

use std::sync::Arc;

use crate::f2::BitMatrix;
use crate::ring::{tensor, Element, RingPresentation};
use crate::Error;

/// A homomorphism determined by one homogeneous image per source generator.
///
/// Construction validates degree preservation and truncation compatibility:
/// for each generator g, images(g)^truncation(g) must vanish in the target,
/// otherwise the map is not well defined on the quotient.
#[derive(Clone)]
pub struct RingMap {
    source: Arc<RingPresentation>,
    target: Arc<RingPresentation>,
    images: Vec<Element>,
    // images[i]^k for k = 0..truncation_i, so apply can look powers up
    image_powers: Vec<Vec<Element>>,
}

impl std::fmt::Debug for RingMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RingMap({:?} -> {:?})", self.source, self.target)
    }
}

pub fn make_map(
    source: &Arc<RingPresentation>,
    target: &Arc<RingPresentation>,
    images: Vec<Element>,
) -> Result<RingMap, Error> {
    if images.len() != source.gen_count() {
        return Err(Error::InvalidMap(format!(
            "expected {} generator images, got {}",
            source.gen_count(),
            images.len()
        )));
    }
    let mut image_powers = Vec::with_capacity(images.len());
    for (g, img) in source.generators().iter().zip(&images) {
        if img.ring() != target {
            return Err(Error::RingMismatch);
        }
        match img.homogeneous_degree() {
            None if img.is_zero() => {}
            Some(d) if d == g.degree => {}
            _ => {
                return Err(Error::InvalidMap(format!(
                    "image of {:?} is not homogeneous of degree {}",
                    g.name, g.degree
                )));
            }
        }
        let mut powers = Vec::with_capacity(g.truncation as usize + 1);
        let mut acc = Element::unit(target);
        powers.push(acc.clone());
        for _ in 0..g.truncation {
            acc = acc.mul(img)?;
            powers.push(acc.clone());
        }
        if !powers[g.truncation as usize].is_zero() {
            return Err(Error::InvalidMap(format!(
                "image of {:?} violates truncation: image^{} is nonzero",
                g.name, g.truncation
            )));
        }
        powers.pop();
        image_powers.push(powers);
    }
    Ok(RingMap {
        source: source.clone(),
        target: target.clone(),
        images,
        image_powers,
    })
}

pub fn identity_map(ring: &Arc<RingPresentation>) -> RingMap {
    let images = (0..ring.gen_count())
        .map(|i| Element::generator(ring, i))
        .collect();
    make_map(ring, ring, images).expect("identity is always well defined")
}

/// The pullback of a constant map: unit to unit, every generator to zero.
pub fn zero_map(source: &Arc<RingPresentation>, target: &Arc<RingPresentation>) -> RingMap {
    let images = vec![Element::zero(target); source.gen_count()];
    make_map(source, target, images).expect("zero images are always well defined")
}

impl RingMap {
    pub fn source(&self) -> &Arc<RingPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Image of a single monomial, as the product of generator image powers.
    fn apply_code(&self, code: usize) -> Element {
        let exp = self.source.monomial_exponents(code);
        let mut acc = Element::unit(&self.target);
        for (i, &e) in exp.iter().enumerate() {
            if e > 0 {
                acc = acc
                    .mul(&self.image_powers[i][e as usize])
                    .expect("same ring");
            }
        }
        acc
    }

    /// Additive, multiplicative extension of the generator images.
    pub fn apply(&self, e: &Element) -> Result<Element, Error> {
        if e.ring() != &self.source {
            return Err(Error::RingMismatch);
        }
        let mut acc = Element::zero(&self.target);
        for code in e.terms() {
            acc = acc.add(&self.apply_code(code))?;
        }
        Ok(acc)
    }

    /// Matrix of the map restricted to the degree-`d` graded pieces, in the
    /// canonical monomial bases: rows index the target basis, columns the
    /// source basis.
    pub fn matrix_of_degree(&self, d: u32) -> BitMatrix {
        let src_basis = self.source.degree_basis(d);
        let tgt_dim = self.target.degree_dim(d);
        let mut m = BitMatrix::zeros(tgt_dim, src_basis.len());
        // Enumerate source monomials of degree d recursively, sharing the
        // running image product across the subtree.
        let n = self.source.gen_count();
        let gens = self.source.generators();
        let mut stack_exp = vec![0u16; n];
        let unit = Element::unit(&self.target);
        self.fill_matrix(d, 0, 0, &unit, &mut stack_exp, gens, &mut m);
        m
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_matrix(
        &self,
        d: u32,
        gen_idx: usize,
        deg_so_far: u32,
        image_so_far: &Element,
        exp: &mut [u16],
        gens: &[crate::ring::GeneratorSpec],
        out: &mut BitMatrix,
    ) {
        if deg_so_far > d {
            return;
        }
        if gen_idx == gens.len() {
            if deg_so_far == d {
                let code = self.source.code_of_exponents(exp);
                let col = self.source.index_in_degree(code);
                for t in image_so_far.terms() {
                    debug_assert_eq!(self.target.degree_of_code(t), d);
                    out.set(self.target.index_in_degree(t), col);
                }
            }
            return;
        }
        let mut img = image_so_far.clone();
        let g = &gens[gen_idx];
        for e in 0..g.truncation as u16 {
            exp[gen_idx] = e;
            let deg = deg_so_far + e as u32 * g.degree;
            if deg > d {
                break;
            }
            if img.is_zero() && e > 0 {
                // the whole subtree maps to zero; nothing to record
                break;
            }
            self.fill_matrix(d, gen_idx + 1, deg, &img, exp, gens, out);
            if e + 1 < g.truncation as u16 {
                img = img.mul(&self.images[gen_idx]).expect("same ring");
            }
        }
        exp[gen_idx] = 0;
    }

    /// Basis of the degree-`d` kernel, as elements, derived from the kernel
    /// of `matrix_of_degree`.
    pub fn kernel_basis(&self, d: u32) -> Vec<Element> {
        let basis = self.source.degree_basis(d);
        self.matrix_of_degree(d)
            .kernel_space()
            .into_iter()
            .map(|v| Element::from_codes(&self.source, v.ones().map(|i| basis[i])))
            .collect()
    }
}

/// The evaluation homomorphism of the composite "diagonal, then map on the
/// last s coordinates": from the Künneth ring of X^(r-s) x Y^s to the ring
/// of X. Generators of X factors map to themselves, generators of Y factors
/// map through f*.
///
/// `f` is the pullback f*: H(Y) -> H(X), so `f.source()` is the codomain
/// ring and `f.target()` the domain ring of the underlying map.
pub fn diagonal_evaluation_map(f: &RingMap, r: u32, s: u32) -> Result<RingMap, Error> {
    if r < 2 || s < 1 || s > r {
        return Err(Error::InvalidMap(format!(
            "diagonal evaluation needs 2 <= r and 1 <= s <= r, got r={r}, s={s}"
        )));
    }
    let x_ring = f.target();
    let y_ring = f.source();
    let mut factors = Vec::with_capacity(r as usize);
    factors.extend(std::iter::repeat_with(|| x_ring.clone()).take((r - s) as usize));
    factors.extend(std::iter::repeat_with(|| y_ring.clone()).take(s as usize));
    let t = tensor(&factors)?;
    let mut images = Vec::with_capacity(t.ring.gen_count());
    for k in 0..(r - s) as usize {
        let _ = k;
        for i in 0..x_ring.gen_count() {
            images.push(Element::generator(x_ring, i));
        }
    }
    for _ in 0..s as usize {
        for img in f.images() {
            images.push(img.clone());
        }
    }
    make_map(&t.ring, x_ring, images)
}

/// Applies `first`, then `then`; for pullbacks this realizes the pullback
/// of the composed underlying maps in the opposite order.
pub fn compose(first: &RingMap, then: &RingMap) -> Result<RingMap, Error> {
    if first.target() != then.source() {
        return Err(Error::RingMismatch);
    }
    let images = first
        .images()
        .iter()
        .map(|img| then.apply(img))
        .collect::<Result<Vec<_>, _>>()?;
    make_map(first.source(), then.target(), images)
}

/// The tensor product of two maps on the Künneth rings of source and
/// target pairs.
pub fn tensor_map(left: &RingMap, right: &RingMap) -> Result<RingMap, Error> {
    let src = tensor(&[left.source().clone(), right.source().clone()])?;
    let tgt = tensor(&[left.target().clone(), right.target().clone()])?;
    let mut images = Vec::with_capacity(src.ring.gen_count());
    for img in left.images() {
        images.push(tgt.embed(0, img)?);
    }
    for img in right.images() {
        images.push(tgt.embed(1, img)?);
    }
    make_map(&src.ring, &tgt.ring, images)
}

/// (f^s)*: the factor-wise tensor power of f*, from tensor([H(Y); s]) to
/// tensor([H(X); s]).
pub fn power_map(f: &RingMap, s: u32) -> Result<RingMap, Error> {
    if s < 1 {
        return Err(Error::InvalidMap("power_map needs s >= 1".into()));
    }
    let src_factors: Vec<_> = std::iter::repeat_with(|| f.source().clone())
        .take(s as usize)
        .collect();
    let tgt_factors: Vec<_> = std::iter::repeat_with(|| f.target().clone())
        .take(s as usize)
        .collect();
    let src = tensor(&src_factors)?;
    let tgt = tensor(&tgt_factors)?;
    let mut images = Vec::with_capacity(src.ring.gen_count());
    for k in 0..s as usize {
        for img in f.images() {
            images.push(tgt.embed(k, img)?);
        }
    }
    make_map(&src.ring, &tgt.ring, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_presentation, GeneratorSpec};

    fn sphere_ring(n: u32) -> Arc<RingPresentation> {
        make_presentation(vec![GeneratorSpec::new("i", n, 2)]).unwrap()
    }

    fn rp_ring(n: u32) -> Arc<RingPresentation> {
        make_presentation(vec![GeneratorSpec::new("a", 1, n + 1)]).unwrap()
    }

    /// p_n*: H(RP^n) -> H(S^n), trivial in positive degrees.
    fn cover_pullback(n: u32) -> RingMap {
        zero_map(&rp_ring(n), &sphere_ring(n))
    }

    #[test]
    fn cover_pullback_is_valid_and_trivial() {
        let p1 = cover_pullback(1);
        let a = Element::generator(p1.source(), 0);
        assert!(p1.apply(&a).unwrap().is_zero());

        let p3 = cover_pullback(3);
        let a = Element::generator(p3.source(), 0);
        assert!(p3.apply(&a.pow(2)).unwrap().is_zero());
    }

    #[test]
    fn identity_applies_as_identity() {
        let rp3 = rp_ring(3);
        let id = identity_map(&rp3);
        let a = Element::generator(&rp3, 0);
        let e = a.pow(2).add(&Element::unit(&rp3)).unwrap();
        assert_eq!(id.apply(&e).unwrap(), e);
    }

    #[test]
    fn truncation_violation_is_rejectedformal() {
        // a square-zero generator cannot map to a class with nonzero square
        let src = make_presentation(vec![GeneratorSpec::new("x", 1, 2)]).unwrap();
        let rp3 = rp_ring(3);
        let a = Element::generator(&rp3, 0);
        let err = make_map(&src, &rp3, vec![a]).unwrap_err();
        assert!(matches!(err, Error::InvalidMap(_)));

        // while a truncation-4 generator may map to a truncation-4 one
        let src = make_presentation(vec![GeneratorSpec::new("x", 1, 4)]).unwrap();
        let a = Element::generator(&rp_ring(3), 0);
        assert!(make_map(&src, &rp_ring(3), vec![a]).is_ok());
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let src = rp_ring(2);
        let tgt = rp_ring(3);
        let a2 = Element::generator(&tgt, 0).pow(2);
        assert!(matches!(
            make_map(&src, &tgt, vec![a2]),
            Err(Error::InvalidMap(_))
        ));
    }

    #[test]
    fn exterior_image_multiplies_consistently() {
        // x -> i with x^2 = 0 and i^2 = 0
        let src = rp_ring(1);
        let s1 = sphere_ring(1);
        let i = Element::generator(&s1, 0);
        let m = make_map(&src, &s1, vec![i.clone()]).unwrap();
        let x = Element::generator(&src, 0);
        assert_eq!(m.apply(&x).unwrap(), i);
        assert!(m.apply(&x.pow(2)).unwrap().is_zero());
    }

    #[test]
    fn matrices_of_identity_and_cover() {
        let rp3 = rp_ring(3);
        let id = identity_map(&rp3);
        for d in 0..=3 {
            let m = id.matrix_of_degree(d);
            assert_eq!(m, crate::f2::BitMatrix::identity(rp3.degree_dim(d)));
        }
        let p3 = cover_pullback(3);
        for d in 1..=3 {
            let m = p3.matrix_of_degree(d);
            assert_eq!(m.rank(), 0);
        }
    }

    #[test]
    fn diagonal_evaluation_degree_one_matrix() {
        // (Delta_1, ^1 p_1)*: basis {u, a} of degree 1 maps to {i}: [1 0]
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 2, 1).unwrap();
        let mat = m.matrix_of_degree(1);
        assert_eq!((mat.rows(), mat.cols()), (1, 2));
        assert!(mat.get(0, 0));
        assert!(!mat.get(0, 1));
    }

    #[test]
    fn diagonal_evaluation_kernels() {
        // (Delta_2, ^1 p_1)* on degree 1: u1, u2 -> i, a -> 0; kernel {u1+u2, a}
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 3, 1).unwrap();
        let k = m.kernel_basis(1);
        assert_eq!(k.len(), 2);
        let rendered: Vec<String> = k.iter().map(|e| e.to_string()).collect();
        assert_eq!(rendered, ["i.1 + i.2", "a.3"]);

        // identity map: empty kernels everywhere
        let id = identity_map(&rp_ring(3));
        for d in 1..=3 {
            assert!(id.kernel_basis(d).is_empty());
        }
    }

    #[test]
    fn diagonal_evaluation_with_identity_is_r_fold_diagonal() {
        // with f the identity, every choice of s yields the same map
        let rp2 = rp_ring(2);
        let id = identity_map(&rp2);
        let d1 = diagonal_evaluation_map(&id, 3, 1).unwrap();
        let d2 = diagonal_evaluation_map(&id, 3, 2).unwrap();
        let d3 = diagonal_evaluation_map(&id, 3, 3).unwrap();
        for d in 0..=d1.source().top_degree() {
            let m1 = d1.matrix_of_degree(d);
            assert_eq!(m1, d2.matrix_of_degree(d));
            assert_eq!(m1, d3.matrix_of_degree(d));
        }
    }

    #[test]
    fn power_map_of_cover_kills_generators() {
        let p2 = cover_pullback(2);
        let sq = power_map(&p2, 2).unwrap();
        for i in 0..sq.source().gen_count() {
            let g = Element::generator(sq.source(), i);
            assert!(sq.apply(&g).unwrap().is_zero());
        }
        // s = 1 reproduces the original map on generators (up to renaming)
        let single = power_map(&p2, 1).unwrap();
        assert_eq!(single.source().total_dim(), p2.source().total_dim());
    }

    #[test]
    fn power_of_identity_is_identity() {
        let rp2 = rp_ring(2);
        let id = identity_map(&rp2);
        let sq = power_map(&id, 2).unwrap();
        for d in 0..=sq.source().top_degree() {
            let m = sq.matrix_of_degree(d);
            assert_eq!(m, crate::f2::BitMatrix::identity(sq.source().degree_dim(d)));
        }
    }

    #[test]
    fn multiplicativity_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let p2 = cover_pullback(2);
        let m = diagonal_evaluation_map(&p2, 3, 2).unwrap();
        let ring = m.source().clone();
        for _ in 0..200 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.gen_range(0..=3);
                Element::from_codes(&ring, (0..k).map(|_| rng.gen_range(0..ring.total_dim())))
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let lhs = m.apply(&a.mul(&b).unwrap()).unwrap();
            let rhs = m.apply(&a).unwrap().mul(&m.apply(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kernel_elements_map_to_zero_and_rank_nullity_holds() {
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 3, 1).unwrap();
        for d in 1..=m.source().top_degree() {
            let mat = m.matrix_of_degree(d);
            let kernel = m.kernel_basis(d);
            assert_eq!(
                m.source().degree_dim(d),
                mat.rank() + kernel.len(),
                "rank-nullity at degree {d}"
            );
            for k in kernel {
                assert!(m.apply(&k).unwrap().is_zero());
            }
        }
    }
}
