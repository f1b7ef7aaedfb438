//! Built-in spaces and maps with their mod-2 cohomology presentations,
//! semantic flags, and seeded facts.

use std::sync::Arc;

use crate::hom::{identity_map, make_map, zero_map, RingMap};
use crate::ring::{make_presentation, tensor, Element, GeneratorSpec, RingPresentation};
use crate::Error;

/// A space: optional cohomology presentation plus the flags the rule
/// guards read. All catalog spaces are normal (metrizable) and
/// path-connected; user-defined spaces default to normal with an override.
#[derive(Clone)]
pub struct SpaceSpec {
    pub name: String,
    pub ring: Option<Arc<RingPresentation>>,
    pub contractible: bool,
    pub h_space: bool,
    /// Some(n) for the n-sphere; parity drives the seeded TC facts.
    pub sphere_dim: Option<u32>,
    pub normal: bool,
    /// Exact category when classically known, with its justification.
    pub cat_fact: Option<(u32, u32, String)>,
    /// Product decomposition, for category subadditivity.
    pub factors: Option<Vec<Arc<SpaceSpec>>>,
}

impl SpaceSpec {
    fn base(name: String) -> Self {
        Self {
            name,
            ring: None,
            contractible: false,
            h_space: false,
            sphere_dim: None,
            normal: true,
            cat_fact: None,
            factors: None,
        }
    }
}

impl std::fmt::Debug for SpaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SpaceSpec({})", self.name)
    }
}

/// S^n. Carries exact TC_r facts (r for odd n, r+1 for even n) and
/// cat = 2. S^1, S^3, S^7 are H-spaces.
pub fn sphere(n: u32) -> Result<Arc<SpaceSpec>, Error> {
    if n < 1 {
        return Err(Error::InvalidSpace("sphere dimension must be >= 1".into()));
    }
    let mut s = SpaceSpec::base(format!("S^{n}"));
    s.ring = Some(make_presentation(vec![GeneratorSpec::new("i", n, 2)])?);
    s.sphere_dim = Some(n);
    s.h_space = matches!(n, 1 | 3 | 7);
    s.cat_fact = Some((2, 2, "cat(S^n) = 2".into()));
    Ok(Arc::new(s))
}

/// RP^n with the truncated polynomial ring on one degree-1 generator.
/// H-space exactly for n in {1, 3, 7}; cat = n + 1.
pub fn real_projective(n: u32) -> Result<Arc<SpaceSpec>, Error> {
    if n < 1 {
        return Err(Error::InvalidSpace(
            "projective dimension must be >= 1".into(),
        ));
    }
    let mut s = SpaceSpec::base(format!("RP^{n}"));
    s.ring = Some(make_presentation(vec![GeneratorSpec::new("a", 1, n + 1)])?);
    s.h_space = matches!(n, 1 | 3 | 7);
    s.cat_fact = Some((n + 1, n + 1, format!("cat(RP^{n}) = {}", n + 1)));
    Ok(Arc::new(s))
}

/// CP^n with one degree-2 generator truncated at n + 1; cat = n + 1.
pub fn complex_projective(n: u32) -> Result<Arc<SpaceSpec>, Error> {
    if n < 1 {
        return Err(Error::InvalidSpace(
            "projective dimension must be >= 1".into(),
        ));
    }
    let mut s = SpaceSpec::base(format!("CP^{n}"));
    s.ring = Some(make_presentation(vec![GeneratorSpec::new("b", 2, n + 1)])?);
    s.cat_fact = Some((n + 1, n + 1, format!("cat(CP^{n}) = {}", n + 1)));
    Ok(Arc::new(s))
}

/// The one-point space: the trivial one-dimensional ring, contractible.
pub fn point() -> Arc<SpaceSpec> {
    let mut s = SpaceSpec::base("pt".into());
    s.ring = Some(make_presentation(vec![]).expect("empty presentation"));
    s.contractible = true;
    s.h_space = true;
    s.cat_fact = Some((1, 1, "cat of a contractible space is 1".into()));
    Arc::new(s)
}

/// T^k as the k-fold product of circles (so category subadditivity over
/// the factors applies); a topological group, hence an H-space.
pub fn torus(k: u32) -> Result<Arc<SpaceSpec>, Error> {
    if k < 1 {
        return Err(Error::InvalidSpace("torus rank must be >= 1".into()));
    }
    let circles: Result<Vec<_>, _> = (0..k).map(|_| sphere(1)).collect();
    let mut s = product_space(&circles?)?;
    Arc::get_mut(&mut s).expect("fresh product").name = format!("T^{k}");
    Ok(s)
}

/// An abstract space: no ring, flags only.
pub fn abstract_space(name: impl Into<String>) -> Arc<SpaceSpec> {
    Arc::new(SpaceSpec::base(name.into()))
}

/// A user space presented by explicit generators.
pub fn custom_space(
    name: impl Into<String>,
    gens: Vec<GeneratorSpec>,
) -> Result<Arc<SpaceSpec>, Error> {
    let mut s = SpaceSpec::base(name.into());
    s.ring = Some(make_presentation(gens)?);
    Ok(Arc::new(s))
}

/// Product with the Künneth tensor ring. Every factor must carry a ring.
/// Contractible (resp. H-space) iff every factor is.
pub fn product_space(factors: &[Arc<SpaceSpec>]) -> Result<Arc<SpaceSpec>, Error> {
    if factors.is_empty() {
        return Err(Error::InvalidSpace("product of no factors".into()));
    }
    if factors.len() == 1 {
        return Ok(factors[0].clone());
    }
    let rings: Vec<Arc<RingPresentation>> = factors
        .iter()
        .map(|f| {
            f.ring
                .clone()
                .ok_or_else(|| Error::InvalidSpace(format!("{} has no ring", f.name)))
        })
        .collect::<Result<_, _>>()?;
    let t = tensor(&rings)?;
    let mut s = SpaceSpec::base(
        factors
            .iter()
            .map(|f| f.name.clone())
            .collect::<Vec<_>>()
            .join(" x "),
    );
    s.ring = Some(t.ring);
    s.contractible = factors.iter().all(|f| f.contractible);
    s.h_space = factors.iter().all(|f| f.h_space);
    s.normal = factors.iter().all(|f| f.normal);
    s.factors = Some(factors.to_vec());
    Ok(Arc::new(s))
}

/// A seeded exact fact about a space, with its justification.
pub struct SpaceFact {
    pub target: FactTarget,
    pub lo: u32,
    pub hi: u32,
    pub statement: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FactTarget {
    Cat,
    TCr(u32),
}

/// All seeded facts for a space, TC facts up to `r_max`.
pub fn known_facts(space: &SpaceSpec, r_max: u32) -> Vec<SpaceFact> {
    let mut out = Vec::new();
    if let Some((lo, hi, statement)) = &space.cat_fact {
        out.push(SpaceFact {
            target: FactTarget::Cat,
            lo: *lo,
            hi: *hi,
            statement: statement.clone(),
        });
    }
    if let Some(n) = space.sphere_dim {
        for r in 2..=r_max {
            let (v, statement) = if n % 2 == 1 {
                (r, format!("TC_{r}(S^{n}) = {r}, the odd-sphere value"))
            } else {
                (
                    r + 1,
                    format!("TC_{r}(S^{n}) = {}, the even-sphere value", r + 1),
                )
            };
            out.push(SpaceFact {
                target: FactTarget::TCr(r),
                lo: v,
                hi: v,
                statement,
            });
        }
    }
    out
}

/// A map: domain, codomain, optional pullback f*: H(codomain) -> H(domain),
/// and the flags the rule guards read. Surjectivity is trusted, never
/// detected.
#[derive(Clone)]
pub struct MapSpec {
    pub name: String,
    pub domain: Arc<SpaceSpec>,
    pub codomain: Arc<SpaceSpec>,
    pub pullback: Option<RingMap>,
    pub fibration: bool,
    pub has_section: bool,
    pub has_homotopy_section: bool,
    pub identity: bool,
    pub null_homotopic: bool,
}

impl MapSpec {
    fn base(name: String, domain: Arc<SpaceSpec>, codomain: Arc<SpaceSpec>) -> Self {
        Self {
            name,
            domain,
            codomain,
            pullback: None,
            fibration: false,
            has_section: false,
            has_homotopy_section: false,
            identity: false,
            null_homotopic: false,
        }
    }

    /// A strict section is in particular a homotopy section.
    pub fn normalize_flags(&mut self) {
        if self.has_section {
            self.has_homotopy_section = true;
        }
    }
}

impl std::fmt::Debug for MapSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MapSpec({}: {} -> {})",
            self.name, self.domain.name, self.codomain.name
        )
    }
}

/// The identity of a space: a fibration with a section.
pub fn identity_map_spec(name: impl Into<String>, space: &Arc<SpaceSpec>) -> MapSpec {
    let mut m = MapSpec::base(name.into(), space.clone(), space.clone());
    m.pullback = space.ring.as_ref().map(identity_map);
    m.fibration = true;
    m.has_section = true;
    m.identity = true;
    m.normalize_flags();
    m
}

/// The double covering p_n: S^n -> RP^n, a fibration whose pullback is
/// trivial in positive degrees.
pub fn double_cover(n: u32) -> Result<MapSpec, Error> {
    let domain = sphere(n)?;
    let codomain = real_projective(n)?;
    let pullback = zero_map(
        codomain.ring.as_ref().expect("catalog ring"),
        domain.ring.as_ref().expect("catalog ring"),
    );
    let mut m = MapSpec::base(format!("p_{n}"), domain, codomain);
    m.pullback = Some(pullback);
    m.fibration = true;
    Ok(m)
}

/// The quotient q: S^(2n+1) -> CP^n, a fibration whose pullback is
/// trivial in positive degrees.
pub fn complex_quotient(n: u32) -> Result<MapSpec, Error> {
    let domain = sphere(2 * n + 1)?;
    let codomain = complex_projective(n)?;
    let pullback = zero_map(
        codomain.ring.as_ref().expect("catalog ring"),
        domain.ring.as_ref().expect("catalog ring"),
    );
    let mut m = MapSpec::base(format!("q_{n}"), domain, codomain);
    m.pullback = Some(pullback);
    m.fibration = true;
    Ok(m)
}

/// The projection X x F -> X, a fibration with a section; its pullback is
/// the embedding of H(X) into the Künneth ring.
pub fn projection(base: &Arc<SpaceSpec>, fiber: &Arc<SpaceSpec>) -> Result<MapSpec, Error> {
    let domain = product_space(&[base.clone(), fiber.clone()])?;
    let base_ring = base.ring.as_ref().expect("product required a ring");
    let domain_ring = domain.ring.clone().expect("product has a ring");
    let images = (0..base_ring.gen_count())
        .map(|i| Element::generator(&domain_ring, i))
        .collect();
    let pullback = make_map(base_ring, &domain_ring, images)?;
    let mut m = MapSpec::base(
        format!("pr({}, {})", base.name, fiber.name),
        domain,
        base.clone(),
    );
    m.pullback = Some(pullback);
    m.fibration = true;
    m.has_section = true;
    m.normalize_flags();
    Ok(m)
}

/// A constant map: null-homotopic; its pullback kills positive degrees.
/// Not a fibration and not surjective in general.
pub fn constant_map(domain: &Arc<SpaceSpec>, codomain: &Arc<SpaceSpec>) -> Result<MapSpec, Error> {
    let pullback = match (&domain.ring, &codomain.ring) {
        (Some(d), Some(c)) => Some(zero_map(c, d)),
        _ => None,
    };
    let mut m = MapSpec::base(
        format!("const({}, {})", domain.name, codomain.name),
        domain.clone(),
        codomain.clone(),
    );
    m.pullback = pullback;
    m.null_homotopic = true;
    Ok(m)
}

/// An abstract map with explicit flags and no cohomology data.
pub fn abstract_map(
    name: impl Into<String>,
    domain: &Arc<SpaceSpec>,
    codomain: &Arc<SpaceSpec>,
) -> MapSpec {
    MapSpec::base(name.into(), domain.clone(), codomain.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nil::cup_length;

    #[test]
    fn sphere_facts() {
        let s3 = sphere(3).unwrap();
        let facts = known_facts(&s3, 4);
        let tc: Vec<_> = facts
            .iter()
            .filter_map(|f| match f.target {
                FactTarget::TCr(r) => Some((r, f.lo)),
                _ => None,
            })
            .collect();
        assert_eq!(tc, [(2, 2), (3, 3), (4, 4)]);

        let s2 = sphere(2).unwrap();
        let facts = known_facts(&s2, 3);
        let tc3 = facts
            .iter()
            .find(|f| f.target == FactTarget::TCr(3))
            .unwrap();
        assert_eq!((tc3.lo, tc3.hi), (4, 4));

        let s4 = sphere(4).unwrap();
        let tc3 = known_facts(&s4, 3)
            .into_iter()
            .find(|f| f.target == FactTarget::TCr(3))
            .unwrap();
        assert_eq!((tc3.lo, tc3.hi), (4, 4));
    }

    #[test]
    fn projective_spaces() {
        let rp3 = real_projective(3).unwrap();
        assert!(rp3.h_space);
        assert_eq!(rp3.cat_fact.as_ref().unwrap().0, 4);
        assert_eq!(cup_length(rp3.ring.as_ref().unwrap()) + 1, 4);

        let rp2 = real_projective(2).unwrap();
        assert!(!rp2.h_space);

        let rp7 = real_projective(7).unwrap();
        assert_eq!(rp7.cat_fact.as_ref().unwrap().0, 8);

        let cp2 = complex_projective(2).unwrap();
        let occupied: Vec<u32> = (0..=4)
            .filter(|&d| cp2.ring.as_ref().unwrap().degree_dim(d) > 0)
            .collect();
        assert_eq!(occupied, [0, 2, 4]);
    }

    #[test]
    fn point_and_products() {
        let pt = point();
        assert!(pt.contractible);
        assert_eq!(pt.ring.as_ref().unwrap().total_dim(), 1);

        let t = product_space(&[sphere(1).unwrap(), sphere(1).unwrap()]).unwrap();
        assert!(t.h_space);
        assert_eq!(t.ring.as_ref().unwrap().total_dim(), 4);

        let p = product_space(&[real_projective(2).unwrap(), real_projective(2).unwrap()]).unwrap();
        assert_eq!(p.ring.as_ref().unwrap().total_dim(), 9);
        assert!(!p.h_space);

        // the point is a unit for products up to ring size
        let px = product_space(&[point(), sphere(2).unwrap()]).unwrap();
        assert_eq!(px.ring.as_ref().unwrap().total_dim(), 2);
    }

    #[test]
    fn torus_is_product_of_circles() {
        let t3 = torus(3).unwrap();
        assert_eq!(t3.name, "T^3");
        assert!(t3.h_space);
        assert_eq!(t3.factors.as_ref().unwrap().len(), 3);
        assert_eq!(t3.ring.as_ref().unwrap().total_dim(), 8);
    }

    #[test]
    fn double_cover_pullback_kills_positive_degrees() {
        let p5 = double_cover(5).unwrap();
        assert!(p5.fibration && !p5.has_section);
        let f = p5.pullback.as_ref().unwrap();
        let a = Element::generator(f.source(), 0);
        for k in 1..=5 {
            assert!(f.apply(&a.pow(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn identity_flags() {
        let rp2 = real_projective(2).unwrap();
        let id = identity_map_spec("id(RP^2)", &rp2);
        assert!(id.identity && id.fibration && id.has_section && id.has_homotopy_section);
        let f = id.pullback.as_ref().unwrap();
        let a = Element::generator(f.source(), 0);
        assert_eq!(f.apply(&a).unwrap(), a);
    }

    #[test]
    fn projection_has_section_and_embedding_pullback() {
        let m = projection(&sphere(3).unwrap(), &sphere(1).unwrap()).unwrap();
        assert!(m.fibration && m.has_section);
        let f = m.pullback.as_ref().unwrap();
        let i = Element::generator(f.source(), 0);
        let img = f.apply(&i).unwrap();
        assert_eq!(img.to_string(), "i.1");
    }

    #[test]
    fn constant_map_is_null_homotopic() {
        let c = constant_map(&sphere(2).unwrap(), &real_projective(3).unwrap()).unwrap();
        assert!(c.null_homotopic && !c.fibration);
        let f = c.pullback.as_ref().unwrap();
        let a = Element::generator(f.source(), 0);
        assert!(f.apply(&a).unwrap().is_zero());
    }

    #[test]
    fn seeded_cat_matches_cup_length_bound() {
        // the cohomological route reproduces every seeded category fact
        for space in [
            real_projective(3).unwrap(),
            real_projective(7).unwrap(),
            complex_projective(2).unwrap(),
            sphere(4).unwrap(),
        ] {
            let cup = cup_length(space.ring.as_ref().unwrap());
            let (lo, hi, _) = space.cat_fact.as_ref().unwrap().clone();
            assert_eq!(cup + 1, lo);
            assert_eq!(lo, hi);
        }
    }
}
