//! Index of nilpotence of kernel ideals via iterated ideal powers, plus
//! cup-length, with an exhaustive product-search oracle for cross-checking.
//!
//! Kernels of ring maps are ideals, so the span of pairwise products of two
//! per-degree bases is again the ideal-theoretic product; nilpotence is
//! decided by iterating that product. Every kernel element has positive
//! degree and rings are finite dimensional, which bounds the iteration by
//! the top degree.
//!
//! Subspace pieces spanned purely by monomials (the common case for the
//! built-in covering and quotient maps, whose pullbacks vanish in positive
//! degrees) are kept as monomial marker sets; echelon rows are only
//! materialized once a genuinely mixed element shows up. This keeps the
//! large product rings (tens of thousands of monomials) cheap.

use std::collections::HashSet;
use std::sync::Arc;

use crate::f2::BitVec;
use crate::hom::RingMap;
use crate::ring::{Element, RingPresentation};
use crate::Error;

/// A homogeneous element in degree-basis coordinates.
#[derive(Clone)]
pub(crate) struct HomElem {
    pub degree: u32,
    pub bits: BitVec,
}

enum Piece {
    /// Span of a set of basis monomials; the marker has one bit per
    /// monomial of the degree.
    Monomials(BitVec),
    /// Echelon rows sorted by pivot (leading basis index).
    General {
        rows: Vec<BitVec>,
        pivots: Vec<usize>,
    },
}

impl Piece {
    fn dim(&self) -> usize {
        match self {
            Piece::Monomials(m) => m.count_ones(),
            Piece::General { rows, .. } => rows.len(),
        }
    }

    fn contains(&self, row: &BitVec) -> bool {
        match self {
            Piece::Monomials(marker) => row.ones().all(|i| marker.get(i)),
            Piece::General { rows, pivots } => {
                let mut r = row.clone();
                reduce_row(&mut r, rows, pivots);
                r.is_zero()
            }
        }
    }

    /// Inserts a vector, returning true when the span grew.
    fn insert(&mut self, row: BitVec) -> bool {
        match self {
            Piece::Monomials(marker) => {
                let survivors: Vec<usize> = row.ones().filter(|&i| !marker.get(i)).collect();
                match survivors.len() {
                    0 => false,
                    1 => {
                        marker.set(survivors[0]);
                        true
                    }
                    _ => {
                        // a mixed element arrived: switch to echelon rows
                        let width = marker.len();
                        let mut rows = Vec::with_capacity(marker.count_ones() + 1);
                        let mut pivots = Vec::with_capacity(rows.capacity());
                        for b in marker.ones() {
                            rows.push(BitVec::from_indices(width, [b]));
                            pivots.push(b);
                        }
                        *self = Piece::General { rows, pivots };
                        self.insert(row)
                    }
                }
            }
            Piece::General { rows, pivots } => {
                let mut r = row;
                loop {
                    let Some(p) = r.lowest_set_bit() else {
                        return false;
                    };
                    match pivots.binary_search(&p) {
                        Ok(i) => r.xor_assign(&rows[i]),
                        Err(at) => {
                            pivots.insert(at, p);
                            rows.insert(at, r);
                            return true;
                        }
                    }
                }
            }
        }
    }

    /// Canonical reduced-echelon rows, leading monomial first.
    fn canonical_rows(&self, width: usize) -> Vec<BitVec> {
        match self {
            Piece::Monomials(marker) => marker
                .ones()
                .map(|b| BitVec::from_indices(width, [b]))
                .collect(),
            Piece::General { rows, pivots } => {
                let mut out = rows.clone();
                for i in (0..out.len()).rev() {
                    for j in 0..i {
                        if out[j].get(pivots[i]) {
                            let (a, b) = out.split_at_mut(i);
                            a[j].xor_assign(&b[0]);
                        }
                    }
                }
                out
            }
        }
    }

    fn for_each_row(&self, width: usize, mut f: impl FnMut(&BitVec)) {
        match self {
            Piece::Monomials(marker) => {
                for b in marker.ones() {
                    f(&BitVec::from_indices(width, [b]));
                }
            }
            Piece::General { rows, .. } => {
                for r in rows {
                    f(r);
                }
            }
        }
    }
}

fn reduce_row(r: &mut BitVec, rows: &[BitVec], pivots: &[usize]) {
    while let Some(p) = r.lowest_set_bit() {
        match pivots.binary_search(&p) {
            Ok(i) => r.xor_assign(&rows[i]),
            Err(_) => break,
        }
    }
}

/// A graded subspace of the positive-degree part of a ring, one basis per
/// degree, unique reduced-echelon representation with respect to the
/// canonical monomial order.
pub struct GradedSubspace {
    ring: Arc<RingPresentation>,
    pieces: Vec<Option<Piece>>, // indexed by degree
}

impl GradedSubspace {
    pub fn empty(ring: &Arc<RingPresentation>) -> Self {
        Self {
            ring: ring.clone(),
            pieces: (0..=ring.top_degree()).map(|_| None).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn dim(&self, degree: u32) -> usize {
        self.pieces
            .get(degree as usize)
            .and_then(|p| p.as_ref())
            .map_or(0, Piece::dim)
    }

    pub fn total_dim(&self) -> usize {
        (0..self.pieces.len()).map(|d| self.dim(d as u32)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.is_none())
    }

    pub fn occupied_degrees(&self) -> Vec<u32> {
        (1..self.pieces.len() as u32)
            .filter(|&d| self.dim(d) > 0)
            .collect()
    }

    /// Canonical basis of the degree-`d` piece as elements, leading
    /// monomial first.
    pub fn basis(&self, degree: u32) -> Vec<Element> {
        let width = self.ring.degree_dim(degree);
        let codes = self.ring.degree_basis(degree);
        match self.pieces.get(degree as usize).and_then(|p| p.as_ref()) {
            None => Vec::new(),
            Some(p) => p
                .canonical_rows(width)
                .into_iter()
                .map(|r| Element::from_codes(&self.ring, r.ones().map(|i| codes[i])))
                .collect(),
        }
    }

    pub fn contains_element(&self, e: &Element) -> Result<bool, Error> {
        if e.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        for d in e.occupied_degrees() {
            let part = e.homogeneous_part(d);
            let row = self.row_of(&part, d);
            let ok = match self.pieces.get(d as usize).and_then(|p| p.as_ref()) {
                None => row.is_zero(),
                Some(p) => p.contains(&row),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn row_of(&self, homogeneous: &Element, degree: u32) -> BitVec {
        let mut row = BitVec::zeros(self.ring.degree_dim(degree));
        for code in homogeneous.terms() {
            row.flip(self.ring.index_in_degree(code));
        }
        row
    }

    pub(crate) fn insert_row(&mut self, degree: u32, row: BitVec) -> bool {
        if degree == 0 || degree as usize >= self.pieces.len() || row.is_zero() {
            return false;
        }
        let slot = &mut self.pieces[degree as usize];
        match slot {
            None => {
                let width = self.ring.degree_dim(degree);
                let mut piece = if row.count_ones() == 1 {
                    Piece::Monomials(BitVec::zeros(width))
                } else {
                    Piece::General {
                        rows: Vec::new(),
                        pivots: Vec::new(),
                    }
                };
                let grew = piece.insert(row);
                debug_assert!(grew);
                *slot = Some(piece);
                true
            }
            Some(piece) => piece.insert(row),
        }
    }

    pub fn insert_element(&mut self, e: &Element) -> Result<bool, Error> {
        if e.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let mut grew = false;
        for d in e.occupied_degrees() {
            if d == 0 {
                return Err(Error::InvalidMap(
                    "graded subspaces hold positive degrees only".into(),
                ));
            }
            let row = self.row_of(&e.homogeneous_part(d), d);
            grew |= self.insert_row(d, row);
        }
        Ok(grew)
    }

    /// Product of a homogeneous vector with a homogeneous vector, in
    /// degree-basis coordinates.
    fn mul_rows(&self, da: u32, a: &BitVec, db: u32, b: &BitVec) -> Option<(u32, BitVec)> {
        let d = da + db;
        if d > self.ring.top_degree() {
            return None;
        }
        let basis_a = self.ring.degree_basis(da);
        let basis_b = self.ring.degree_basis(db);
        let mut out = BitVec::zeros(self.ring.degree_dim(d));
        for i in a.ones() {
            let ca = basis_a[i];
            for j in b.ones() {
                if let Some(c) = self.ring.mul_codes(ca, basis_b[j]) {
                    out.flip(self.ring.index_in_degree(c));
                }
            }
        }
        Some((d, out))
    }
}

/// The graded kernel ideal of a map: the union over positive degrees of the
/// per-degree kernels.
pub fn kernel_ideal(m: &RingMap) -> GradedSubspace {
    let ring = m.source();
    let mut out = GradedSubspace::empty(ring);
    for d in 1..=ring.top_degree() {
        if ring.degree_dim(d) == 0 {
            continue;
        }
        for v in m.matrix_of_degree(d).kernel_space() {
            out.insert_row(d, v);
        }
    }
    out
}

/// The ideal-theoretic product I*P as the span of pairwise products of the
/// two per-degree bases, reduced per degree.
pub fn ideal_power_step(i: &GradedSubspace, p: &GradedSubspace) -> Result<GradedSubspace, Error> {
    if i.ring() != p.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = i.ring();
    let top = ring.top_degree();
    let mut out = GradedSubspace::empty(ring);
    for da in i.occupied_degrees() {
        let pa = i.pieces[da as usize].as_ref().expect("occupied");
        for db in p.occupied_degrees() {
            if da + db > top {
                continue;
            }
            let pb = p.pieces[db as usize].as_ref().expect("occupied");
            pa.for_each_row(ring.degree_dim(da), |ra| {
                pb.for_each_row(ring.degree_dim(db), |rb| {
                    if let Some((d, row)) = i.mul_rows(da, ra, db, rb) {
                        out.insert_row(d, row);
                    }
                });
            });
        }
    }
    Ok(out)
}

/// A minimal homogeneous ideal generating set of a graded ideal, found
/// degree by degree: generators in degree d are a lift of a basis of the
/// quotient of the degree-d piece by what lower generators already span.
pub(crate) fn minimal_ideal_generators(k: &GradedSubspace) -> Vec<HomElem> {
    let ring = k.ring();
    let top = ring.top_degree();
    let mut gens: Vec<HomElem> = Vec::new();
    let mut spanned = GradedSubspace::empty(ring);
    for d in 1..=top {
        // close the span of the ideal generated so far at degree d
        for (gi, g) in ring.generators().iter().enumerate() {
            if g.degree >= d {
                continue;
            }
            let src = d - g.degree;
            if spanned.dim(src) == 0 {
                continue;
            }
            let gen_elem = Element::generator(ring, gi);
            let gen_row = spanned.row_of(&gen_elem, g.degree);
            let piece = spanned.pieces[src as usize].take().expect("occupied");
            piece.for_each_row(ring.degree_dim(src), |row| {
                if let Some((deg, out)) = spanned.mul_rows(g.degree, &gen_row, src, row) {
                    spanned.insert_row(deg, out);
                }
            });
            spanned.pieces[src as usize] = Some(piece);
        }
        if k.dim(d) == 0 {
            continue;
        }
        let piece = k.pieces[d as usize].as_ref().expect("occupied");
        let mut fresh = Vec::new();
        piece.for_each_row(ring.degree_dim(d), |row| fresh.push(row.clone()));
        for row in fresh {
            if spanned.insert_row(d, row.clone()) {
                gens.push(HomElem {
                    degree: d,
                    bits: row,
                });
            }
        }
    }
    gens
}

/// One multiplication sweep of the power iteration: span of g*b over ideal
/// generators g and basis vectors b. Because the kernel is an ideal
/// generated by `gens`, this equals the full basis-by-basis ideal product.
fn step_by_generators(
    ring: &Arc<RingPresentation>,
    gens: &[HomElem],
    j: &GradedSubspace,
) -> GradedSubspace {
    let top = ring.top_degree();
    let mut out = GradedSubspace::empty(ring);
    for g in gens {
        for d in j.occupied_degrees() {
            if g.degree + d > top {
                continue;
            }
            let piece = j.pieces[d as usize].as_ref().expect("occupied");
            piece.for_each_row(ring.degree_dim(d), |row| {
                if let Some((deg, out_row)) = j.mul_rows(g.degree, &g.bits, d, row) {
                    out.insert_row(deg, out_row);
                }
            });
        }
    }
    out
}

/// A nonzero element of the last nonzero kernel power, with the product
/// length it witnesses.
pub struct NilWitness {
    pub element: Element,
    pub degree: u32,
    pub length: u32,
}

/// The index of nilpotence of Ker(m): the least n >= 1 such that every
/// product of n kernel elements vanishes. Ker(0) has index 1.
pub fn nil_index(m: &RingMap) -> u32 {
    nil_index_with_witness(m).0
}

pub fn nil_index_with_witness(m: &RingMap) -> (u32, Option<NilWitness>) {
    let ring = m.source().clone();
    let kernel = kernel_ideal(m);
    if kernel.is_zero() {
        return (1, None);
    }
    let gens = minimal_ideal_generators(&kernel);
    let mut power = kernel;
    let mut n = 1u32;
    loop {
        let next = step_by_generators(&ring, &gens, &power);
        if next.is_zero() {
            // report the deepest surviving class as the witness
            let degree = *power.occupied_degrees().last().expect("nonzero power");
            let element = power.basis(degree).into_iter().next().expect("nonzero");
            return (
                n + 1,
                Some(NilWitness {
                    element,
                    degree,
                    length: n,
                }),
            );
        }
        power = next;
        n += 1;
        assert!(
            n <= ring.top_degree() + 1,
            "power iteration must terminate by the top degree"
        );
    }
}

/// Cup-length: the largest k with a nonzero k-fold product of positive
/// degree elements; equivalently nil(positive-degree ideal) - 1. For a
/// truncated-polynomial presentation the extreme product is the product of
/// all g^(truncation-1) split into single-generator factors, so the value
/// is the sum of (truncation - 1) over the generators. The equivalence with
/// the iterated-power route is covered by tests.
pub fn cup_length(ring: &RingPresentation) -> u32 {
    ring.generators().iter().map(|g| g.truncation - 1).sum()
}

/// Exhaustively searches products of kernel-basis elements over all lengths
/// and factor choices up to `max_len`; returns the longest nonzero product
/// length + 1, capped at `max_len` + 1. Independent of the ideal-power
/// machinery; guarded to small sources.
pub fn brute_force_nil_oracle(m: &RingMap, max_len: u32) -> Result<u32, Error> {
    const GUARD: usize = 64;
    if m.source().total_dim() > GUARD {
        return Err(Error::OracleGuard {
            dim: m.source().total_dim(),
            guard: GUARD,
        });
    }
    let ring = m.source().clone();
    let mut basis: Vec<Element> = Vec::new();
    for d in 1..=ring.top_degree() {
        basis.extend(m.kernel_basis(d));
    }
    if basis.is_empty() || max_len == 0 {
        return Ok(1);
    }
    let mut level: HashSet<Element> = basis.iter().cloned().collect();
    let mut len = 1u32;
    while len < max_len {
        let mut next = HashSet::new();
        for p in &level {
            for b in &basis {
                let prod = p.mul(b)?;
                if !prod.is_zero() {
                    next.insert(prod);
                }
            }
        }
        if next.is_empty() {
            return Ok(len + 1);
        }
        level = next;
        len += 1;
    }
    Ok(max_len + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{diagonal_evaluation_map, identity_map, zero_map};
    use crate::ring::{make_presentation, tensor, GeneratorSpec};

    fn sphere_ring(n: u32) -> Arc<RingPresentation> {
        make_presentation(vec![GeneratorSpec::new("i", n, 2)]).unwrap()
    }

    fn rp_ring(n: u32) -> Arc<RingPresentation> {
        make_presentation(vec![GeneratorSpec::new("a", 1, n + 1)]).unwrap()
    }

    fn cover_pullback(n: u32) -> RingMap {
        zero_map(&rp_ring(n), &sphere_ring(n))
    }

    fn trivial_ring() -> Arc<RingPresentation> {
        make_presentation(vec![]).unwrap()
    }

    /// nil of the positive-degree ideal, via the iterated-power route.
    fn nil_of_positive_ideal(ring: &Arc<RingPresentation>) -> u32 {
        nil_index(&zero_map(ring, &trivial_ring()))
    }

    #[test]
    fn kernel_ideal_of_identity_is_zero() {
        let id = identity_map(&rp_ring(3));
        assert!(kernel_ideal(&id).is_zero());
        assert_eq!(nil_index(&id), 1);
    }

    #[test]
    fn kernel_ideal_of_trivial_cover_pullback() {
        // the whole positive part of the source: {a, a^2, a^3}
        let p3 = cover_pullback(3);
        let k = kernel_ideal(&p3);
        assert_eq!(k.total_dim(), 3);
        for d in 1..=3 {
            assert_eq!(k.dim(d), 1);
        }
    }

    #[test]
    fn diagonal_evaluation_kernel_pieces() {
        // (Delta_2, ^1 p_1)*: degree 1 kernel {u1+u2, v}; top degree kernel
        // is the single class u1 u2 v.
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 3, 1).unwrap();
        let k = kernel_ideal(&m);
        assert_eq!(k.dim(1), 2);
        assert_eq!(k.dim(3), 1);
        let rendered: Vec<String> = k.basis(1).iter().map(|e| e.to_string()).collect();
        assert_eq!(rendered, ["i.1 + i.2", "a.3"]);
        assert_eq!(k.basis(3)[0].to_string(), "i.1*i.2*a.3");
    }

    #[test]
    fn ideal_power_step_on_empty_is_empty() {
        let ring = rp_ring(3);
        let empty = GradedSubspace::empty(&ring);
        let p3 = zero_map(&ring, &trivial_ring());
        let k = kernel_ideal(&p3);
        assert!(ideal_power_step(&k, &empty).unwrap().is_zero());
    }

    #[test]
    fn ideal_power_step_of_augmentation_ideal() {
        // I = (a, a^2, a^3) in Z2[a]/(a^4): I^2 = span{a^2, a^3}
        let ring = rp_ring(3);
        let k = kernel_ideal(&zero_map(&ring, &trivial_ring()));
        let sq = ideal_power_step(&k, &k).unwrap();
        assert_eq!(sq.dim(1), 0);
        assert_eq!(sq.dim(2), 1);
        assert_eq!(sq.dim(3), 1);
    }

    #[test]
    fn ideal_square_contains_nontrivial_product() {
        // I = Ker((Delta_2, ^1 p_1)*): (u1+u2)(u2 v) = u1 u2 v != 0 lies in I^2
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 3, 1).unwrap();
        let k = kernel_ideal(&m);
        let sq = ideal_power_step(&k, &k).unwrap();
        assert_eq!(sq.dim(3), 1);
        let cube = ideal_power_step(&k, &sq).unwrap();
        assert!(cube.is_zero());
        assert_eq!(nil_index(&m), 3);
    }

    #[test]
    fn generator_step_matches_basis_step() {
        let cases: Vec<RingMap> = vec![
            diagonal_evaluation_map(&cover_pullback(1), 3, 1).unwrap(),
            diagonal_evaluation_map(&cover_pullback(2), 3, 2).unwrap(),
            diagonal_evaluation_map(&identity_map(&rp_ring(2)), 2, 1).unwrap(),
            zero_map(&rp_ring(4), &trivial_ring()),
        ];
        for m in &cases {
            let ring = m.source().clone();
            let k = kernel_ideal(m);
            let gens = minimal_ideal_generators(&k);
            let mut by_basis = k.clone_shallow();
            let mut by_gens = k.clone_shallow();
            for _ in 0..3 {
                by_basis = ideal_power_step(&k, &by_basis).unwrap();
                by_gens = step_by_generators(&ring, &gens, &by_gens);
                for d in 1..=ring.top_degree() {
                    assert_eq!(by_basis.dim(d), by_gens.dim(d));
                    for e in by_basis.basis(d) {
                        assert!(by_gens.contains_element(&e).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_generators_of_mixed_kernel() {
        // Ker((Delta_2, ^1 p_1)*) is generated by v and u1+u2
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 3, 1).unwrap();
        let gens = minimal_ideal_generators(&kernel_ideal(&m));
        assert_eq!(gens.len(), 2);
        assert!(gens.iter().all(|g| g.degree == 1));
    }

    #[test]
    fn nil_for_diagonal_cover_cases() {
        // s = r: the nil index is r*n + 1
        for (n, r) in [(1u32, 2u32), (1, 3), (2, 2), (2, 3), (3, 2)] {
            let p = cover_pullback(n);
            let m = diagonal_evaluation_map(&p, r, r).unwrap();
            assert_eq!(nil_index(&m), r * n + 1, "n={n}, r={r}");
        }
    }

    #[test]
    fn nil_for_mixed_cover_cases() {
        // s < r: the nil index is s*n + r - s
        for (n, r, s) in [
            (1u32, 3u32, 1u32),
            (1, 3, 2),
            (2, 3, 1),
            (1, 4, 2),
            (2, 4, 3),
        ] {
            let p = cover_pullback(n);
            let m = diagonal_evaluation_map(&p, r, s).unwrap();
            assert_eq!(nil_index(&m), s * n + r - s, "n={n}, r={r}, s={s}");
        }
    }

    #[test]
    fn nil_of_zero_divisor_cases() {
        // identity on RP^2, r = 2: z = a x 1 + 1 x a, z^2 (a^2 x 1 + a x a)
        // = a^2 x a^2 != 0 and every 4-fold product vanishes
        let m = diagonal_evaluation_map(&identity_map(&rp_ring(2)), 2, 1).unwrap();
        let (nil, witness) = nil_index_with_witness(&m);
        assert_eq!(nil, 4);
        let w = witness.unwrap();
        assert_eq!(w.length, 3);
        assert_eq!(w.degree, 4);
        assert_eq!(w.element.to_string(), "a.1^2*a.2^2");

        // identity on S^2, r = 2: (i x 1 + 1 x i)^2 = 0 mod 2, so only 2;
        // this is the documented mod-2 coefficient limitation for even
        // spheres (the catalog carries their true values instead).
        let m = diagonal_evaluation_map(&identity_map(&sphere_ring(2)), 2, 1).unwrap();
        assert_eq!(nil_index(&m), 2);
    }

    #[test]
    fn witness_for_mixed_case() {
        let p1 = cover_pullback(1);
        let m = diagonal_evaluation_map(&p1, 3, 1).unwrap();
        let (nil, witness) = nil_index_with_witness(&m);
        assert_eq!(nil, 3);
        let w = witness.unwrap();
        assert_eq!(w.degree, 3);
        assert_eq!(w.element.to_string(), "i.1*i.2*a.3");
    }

    #[test]
    fn cup_length_values() {
        assert_eq!(cup_length(&sphere_ring(5)), 1);
        assert_eq!(cup_length(&rp_ring(3)), 3);
        let t = tensor(&[rp_ring(2), rp_ring(2), rp_ring(2)]).unwrap();
        assert_eq!(cup_length(&t.ring), 6);
        assert_eq!(cup_length(&trivial_ring()), 0);
    }

    #[test]
    fn cup_length_agrees_with_positive_ideal_nil() {
        let rings = [
            sphere_ring(2),
            rp_ring(3),
            rp_ring(4),
            tensor(&[rp_ring(2), sphere_ring(1)]).unwrap().ring,
            tensor(&[rp_ring(1), rp_ring(2), sphere_ring(2)])
                .unwrap()
                .ring,
            trivial_ring(),
        ];
        for ring in rings {
            assert_eq!(cup_length(&ring) + 1, nil_of_positive_ideal(&ring));
        }
    }

    #[test]
    fn cup_length_superadditive_under_tensor() {
        let pairs = [
            (rp_ring(2), rp_ring(3)),
            (sphere_ring(2), rp_ring(1)),
            (rp_ring(4), sphere_ring(3)),
        ];
        for (a, b) in pairs {
            let t = tensor(&[a.clone(), b.clone()]).unwrap();
            assert!(cup_length(&t.ring) >= cup_length(&a) + cup_length(&b));
        }
    }

    #[test]
    fn oracle_trivial_cases() {
        let id = identity_map(&rp_ring(3));
        assert_eq!(brute_force_nil_oracle(&id, 10).unwrap(), 1);

        // constant-map style pullback on RP^4: a^4 != 0, a^5 = 0
        let m = zero_map(&rp_ring(4), &trivial_ring());
        assert_eq!(brute_force_nil_oracle(&m, 10).unwrap(), 5);
    }

    #[test]
    fn oracle_cap_and_guard() {
        let m = zero_map(&rp_ring(4), &trivial_ring());
        assert_eq!(brute_force_nil_oracle(&m, 2).unwrap(), 3);

        let big = tensor(&[rp_ring(7), rp_ring(7), rp_ring(7)]).unwrap();
        let m = zero_map(&big.ring, &trivial_ring());
        assert!(matches!(
            brute_force_nil_oracle(&m, 3),
            Err(Error::OracleGuard { .. })
        ));
    }

    #[test]
    fn oracle_matches_nil_index_on_worked_examples() {
        let cases: Vec<RingMap> = vec![
            diagonal_evaluation_map(&cover_pullback(1), 2, 1).unwrap(),
            diagonal_evaluation_map(&cover_pullback(1), 3, 1).unwrap(),
            diagonal_evaluation_map(&identity_map(&rp_ring(2)), 2, 1).unwrap(),
            diagonal_evaluation_map(&identity_map(&sphere_ring(2)), 2, 1).unwrap(),
        ];
        let expected = [2, 3, 4, 2];
        for (m, want) in cases.iter().zip(expected) {
            let top = m.source().top_degree();
            assert_eq!(nil_index(m), want);
            assert_eq!(brute_force_nil_oracle(m, top + 1).unwrap(), want);
        }
    }

    #[test]
    fn ideal_powers_shrink_monotonically() {
        let m = diagonal_evaluation_map(&cover_pullback(2), 3, 2).unwrap();
        let ring = m.source().clone();
        let k = kernel_ideal(&m);
        let mut prev = k.clone_shallow();
        let mut zero_seen = false;
        for _ in 0..ring.top_degree() + 1 {
            let next = ideal_power_step(&k, &prev).unwrap();
            for d in 1..=ring.top_degree() {
                assert!(next.dim(d) <= prev.dim(d), "powers must shrink per degree");
            }
            if zero_seen {
                assert!(next.is_zero(), "zero powers must stay zero");
            }
            zero_seen = next.is_zero();
            prev = next;
        }
        assert!(zero_seen);
    }

    impl GradedSubspace {
        /// Test helper: rebuild from canonical bases.
        fn clone_shallow(&self) -> GradedSubspace {
            let mut out = GradedSubspace::empty(&self.ring);
            for d in self.occupied_degrees() {
                for e in self.basis(d) {
                    out.insert_element(&e).unwrap();
                }
            }
            out
        }
    }
}
