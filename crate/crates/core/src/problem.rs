//! The JSON problem format: space/map declarations, user facts, queries.
//!
//! Space and map declarations either name a catalog kind with parameters or
//! give explicit data (generators for spaces; domain, codomain, generator
//! images and flags for maps). Maps may also be declared as composites or
//! products of other maps in the file, which activates the corresponding
//! rules. Quantity strings follow the grammar
//!
//! ```text
//! cat(<space>) | tc(<space>, r=<int>) | tcrs(<map>, r=<int>, s=<int>)
//! | htcrs(<map>, r=<int>, s=<int>) | sec(<map>, s=<int>)
//! | secat(<map>, s=<int>) | evalsec(<map>, r=<int>, s=<int>)
//! ```
//!
//! Catalog space names (S^n, RP^n, CP^n, T^k, pt) referenced anywhere are
//! resolved automatically; map names must be declared.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::catalog::{self, MapSpec, SpaceSpec};
use crate::engine::{self, ProblemMap, QuantityId, State};
use crate::hom::{compose, make_map, tensor_map};
use crate::ring::{Element, GeneratorSpec};
use crate::Error;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(default)]
    spaces: Vec<SpaceDecl>,
    #[serde(default)]
    maps: Vec<MapDecl>,
    #[serde(default)]
    facts: Vec<FactDecl>,
    #[serde(default)]
    queries: Vec<String>,
    r_max: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDecl {
    name: String,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    params: Option<serde_json::Value>,
    #[serde(default)]
    generators: Option<Vec<GenDecl>>,
    #[serde(default)]
    flags: Option<SpaceFlags>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenDecl {
    name: String,
    degree: u32,
    truncation: u32,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SpaceFlags {
    #[serde(default)]
    contractible: Option<bool>,
    #[serde(default)]
    h_space: Option<bool>,
    #[serde(default)]
    normal: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDecl {
    name: String,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    params: Option<serde_json::Value>,
    #[serde(default)]
    domain: Option<String>,
    #[serde(default)]
    codomain: Option<String>,
    /// Generator images of the pullback: for each codomain ring generator,
    /// a list of monomials of the domain ring as exponent vectors.
    #[serde(default)]
    images: Option<BTreeMap<String, Vec<Vec<u16>>>>,
    #[serde(default)]
    flags: Option<MapFlags>,
    /// [inner, outer]: this map is outer composed after inner.
    #[serde(default)]
    composite: Option<[String; 2]>,
    /// [left, right]: this map is the product of two declared maps.
    #[serde(default)]
    product: Option<[String; 2]>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MapFlags {
    #[serde(default)]
    fibration: Option<bool>,
    #[serde(default)]
    section: Option<bool>,
    #[serde(default)]
    homotopy_section: Option<bool>,
    #[serde(default)]
    null_homotopic: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactDecl {
    quantity: String,
    lo: u32,
    #[serde(default)]
    hi: Option<u32>,
    #[serde(default)]
    note: String,
}

/// A parsed quantity reference, resolved against the engine state later.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantityRef {
    pub kind: QuantityKind,
    pub name: String,
    pub r: u32,
    pub s: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuantityKind {
    Cat,
    TCr,
    TCrs,
    HTCrs,
    SecPow,
    SecatPow,
    EvalSec,
}

pub struct UserFact {
    pub quantity: QuantityRef,
    pub lo: u32,
    pub hi: Option<u32>,
    pub note: String,
}

/// A fully resolved problem, ready for the engine.
pub struct Problem {
    pub spaces: Vec<Arc<SpaceSpec>>,
    pub maps: Vec<ProblemMap>,
    pub facts: Vec<UserFact>,
    pub queries: Vec<QuantityRef>,
    pub r_max: u32,
}

/// Recognizes the built-in space names: S^n, RP^n, CP^n, T^k, pt.
pub fn catalog_space_by_name(name: &str) -> Option<Result<Arc<SpaceSpec>, Error>> {
    if name == "pt" {
        return Some(Ok(catalog::point()));
    }
    let (prefix, rest) = name.split_once('^')?;
    let n: u32 = rest.parse().ok()?;
    match prefix {
        "S" => Some(catalog::sphere(n)),
        "RP" => Some(catalog::real_projective(n)),
        "CP" => Some(catalog::complex_projective(n)),
        "T" => Some(catalog::torus(n)),
        _ => None,
    }
}

/// Recognizes the built-in map names used by the nil command: p_n, q_n,
/// `id(<space>)`.
pub fn catalog_map_by_name(name: &str) -> Option<Result<MapSpec, Error>> {
    if let Some(rest) = name.strip_prefix("p_") {
        let n: u32 = rest.parse().ok()?;
        return Some(catalog::double_cover(n));
    }
    if let Some(rest) = name.strip_prefix("q_") {
        let n: u32 = rest.parse().ok()?;
        return Some(catalog::complex_quotient(n));
    }
    if let Some(inner) = name.strip_prefix("id(").and_then(|s| s.strip_suffix(')')) {
        let space = match catalog_space_by_name(inner)? {
            Ok(s) => s,
            Err(e) => return Some(Err(e)),
        };
        return Some(Ok(catalog::identity_map_spec(name, &space)));
    }
    None
}

fn params_u32(params: &Option<serde_json::Value>, key: &str) -> Result<u32, Error> {
    params
        .as_ref()
        .and_then(|p| p.get(key))
        .and_then(|v| v.as_u64())
        .map(|v| v as u32)
        .ok_or_else(|| Error::Parse(format!("missing integer parameter {key:?}")))
}

fn params_str(params: &Option<serde_json::Value>, key: &str) -> Result<String, Error> {
    params
        .as_ref()
        .and_then(|p| p.get(key))
        .and_then(|v| v.as_str())
        .map(str::to_string)
        .ok_or_else(|| Error::Parse(format!("missing string parameter {key:?}")))
}

struct Resolver {
    spaces: Vec<Arc<SpaceSpec>>,
}

impl Resolver {
    fn lookup_space(&mut self, name: &str) -> Result<Arc<SpaceSpec>, Error> {
        if let Some(s) = self.spaces.iter().find(|s| s.name == name) {
            return Ok(s.clone());
        }
        match catalog_space_by_name(name) {
            Some(Ok(s)) => {
                self.spaces.push(s.clone());
                Ok(s)
            }
            Some(Err(e)) => Err(e),
            None => Err(Error::UnknownName(format!("space {name:?}"))),
        }
    }
}

/// Parses and resolves a problem document.
pub fn parse_problem_file(text: &str) -> Result<Problem, Error> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.r_max < 2 {
        return Err(Error::Parse("r_max must be >= 2".into()));
    }

    let mut resolver = Resolver { spaces: Vec::new() };

    for decl in &file.spaces {
        if resolver.spaces.iter().any(|s| s.name == decl.name) {
            return Err(Error::Parse(format!("duplicate space {:?}", decl.name)));
        }
        let space = build_space(decl, &mut resolver)?;
        resolver.spaces.push(space);
    }

    // first pass: plain maps; composites and products resolve second
    let mut maps: Vec<Option<ProblemMap>> = Vec::with_capacity(file.maps.len());
    for decl in &file.maps {
        if file
            .maps
            .iter()
            .filter(|other| other.name == decl.name)
            .count()
            > 1
        {
            return Err(Error::Parse(format!("duplicate map {:?}", decl.name)));
        }
        if decl.composite.is_some() || decl.product.is_some() {
            maps.push(None);
        } else {
            maps.push(Some(ProblemMap {
                spec: build_map(decl, &mut resolver)?,
                composite: None,
                product: None,
            }));
        }
    }
    let index_of = |name: &str, decls: &[MapDecl]| -> Result<usize, Error> {
        decls
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Error::UnknownName(format!("map {name:?}")))
    };
    for (i, decl) in file.maps.iter().enumerate() {
        if maps[i].is_some() {
            continue;
        }
        let built = if let Some([inner, outer]) = &decl.composite {
            let inner_idx = index_of(inner, &file.maps)?;
            let outer_idx = index_of(outer, &file.maps)?;
            let (Some(inner_pm), Some(outer_pm)) = (&maps[inner_idx], &maps[outer_idx]) else {
                return Err(Error::Parse(
                    "composite and product maps may only reference plain maps".into(),
                ));
            };
            let mut spec = build_composite(&decl.name, &inner_pm.spec, &outer_pm.spec)?;
            apply_map_flags(&mut spec, &decl.flags);
            ProblemMap {
                spec,
                composite: Some((inner_idx, outer_idx)),
                product: None,
            }
        } else if let Some([left, right]) = &decl.product {
            let left_idx = index_of(left, &file.maps)?;
            let right_idx = index_of(right, &file.maps)?;
            let (Some(left_pm), Some(right_pm)) = (&maps[left_idx], &maps[right_idx]) else {
                return Err(Error::Parse(
                    "composite and product maps may only reference plain maps".into(),
                ));
            };
            let mut spec = build_product(&decl.name, &left_pm.spec, &right_pm.spec)?;
            apply_map_flags(&mut spec, &decl.flags);
            ProblemMap {
                spec,
                composite: None,
                product: Some((left_idx, right_idx)),
            }
        } else {
            unreachable!("first pass handled plain maps");
        };
        maps[i] = Some(built);
    }
    let maps: Vec<ProblemMap> = maps.into_iter().map(|m| m.expect("resolved")).collect();

    let mut facts = Vec::new();
    for f in &file.facts {
        if f.lo < 1 {
            return Err(Error::Parse(format!(
                "fact on {:?}: lo must be >= 1",
                f.quantity
            )));
        }
        if let Some(hi) = f.hi {
            if hi < f.lo {
                return Err(Error::Parse(format!(
                    "fact on {:?}: needs lo <= hi",
                    f.quantity
                )));
            }
        }
        facts.push(UserFact {
            quantity: parse_quantity(&f.quantity)?,
            lo: f.lo,
            hi: f.hi,
            note: f.note.clone(),
        });
    }

    let mut queries = Vec::new();
    for q in &file.queries {
        queries.push(parse_quantity(q)?);
    }

    // catalog spaces referenced only through quantity strings
    for qr in facts.iter().map(|f| &f.quantity).chain(queries.iter()) {
        if matches!(qr.kind, QuantityKind::Cat | QuantityKind::TCr)
            && !resolver.spaces.iter().any(|s| s.name == qr.name)
        {
            resolver.lookup_space(&qr.name)?;
        }
    }

    Ok(Problem {
        spaces: resolver.spaces,
        maps,
        facts,
        queries,
        r_max: file.r_max,
    })
}

fn build_space(decl: &SpaceDecl, resolver: &mut Resolver) -> Result<Arc<SpaceSpec>, Error> {
    let mut space = match (&decl.kind, &decl.generators) {
        (Some(kind), None) => match kind.as_str() {
            "sphere" => catalog::sphere(params_u32(&decl.params, "n")?)?,
            "real_projective" => catalog::real_projective(params_u32(&decl.params, "n")?)?,
            "complex_projective" => catalog::complex_projective(params_u32(&decl.params, "n")?)?,
            "torus" => catalog::torus(params_u32(&decl.params, "k")?)?,
            "point" => catalog::point(),
            "abstract" => catalog::abstract_space(decl.name.clone()),
            "product" => {
                let names = decl
                    .params
                    .as_ref()
                    .and_then(|p| p.get("factors"))
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| Error::Parse("product needs params.factors".into()))?;
                let mut factors = Vec::new();
                for v in names {
                    let name = v
                        .as_str()
                        .ok_or_else(|| Error::Parse("factor names must be strings".into()))?;
                    factors.push(resolver.lookup_space(name)?);
                }
                catalog::product_space(&factors)?
            }
            other => return Err(Error::Parse(format!("unknown space kind {other:?}"))),
        },
        (None, Some(gens)) => {
            let specs = gens
                .iter()
                .map(|g| GeneratorSpec::new(g.name.clone(), g.degree, g.truncation))
                .collect();
            catalog::custom_space(decl.name.clone(), specs)?
        }
        _ => {
            return Err(Error::Parse(format!(
                "space {:?} needs exactly one of kind or generators",
                decl.name
            )))
        }
    };
    {
        let s = Arc::make_mut(&mut space);
        s.name = decl.name.clone();
        if let Some(flags) = &decl.flags {
            if let Some(v) = flags.contractible {
                s.contractible = v;
            }
            if let Some(v) = flags.h_space {
                s.h_space = v;
            }
            if let Some(v) = flags.normal {
                s.normal = v;
            }
        }
        // a contractible space has the one-dimensional trivial ring
        if s.contractible {
            if let Some(ring) = &s.ring {
                if ring.total_dim() != 1 {
                    return Err(Error::Parse(format!(
                        "space {:?} is flagged contractible but presents a                          ring of dimension {}",
                        s.name,
                        ring.total_dim()
                    )));
                }
            }
        }
    }
    Ok(space)
}

fn build_map(decl: &MapDecl, resolver: &mut Resolver) -> Result<MapSpec, Error> {
    let mut spec = match &decl.kind {
        Some(kind) => match kind.as_str() {
            "double_cover" => catalog::double_cover(params_u32(&decl.params, "n")?)?,
            "complex_quotient" => catalog::complex_quotient(params_u32(&decl.params, "n")?)?,
            "identity" => {
                let space = resolver.lookup_space(&params_str(&decl.params, "space")?)?;
                catalog::identity_map_spec(decl.name.clone(), &space)
            }
            "projection" => {
                let base = resolver.lookup_space(&params_str(&decl.params, "base")?)?;
                let fiber = resolver.lookup_space(&params_str(&decl.params, "fiber")?)?;
                catalog::projection(&base, &fiber)?
            }
            "constant" => {
                let domain = resolver.lookup_space(&params_str(&decl.params, "domain")?)?;
                let codomain = resolver.lookup_space(&params_str(&decl.params, "codomain")?)?;
                catalog::constant_map(&domain, &codomain)?
            }
            other => return Err(Error::Parse(format!("unknown map kind {other:?}"))),
        },
        None => {
            let domain_name = decl
                .domain
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("map {:?} needs a domain", decl.name)))?;
            let codomain_name = decl
                .codomain
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("map {:?} needs a codomain", decl.name)))?;
            let domain = resolver.lookup_space(domain_name)?;
            let codomain = resolver.lookup_space(codomain_name)?;
            let mut spec = catalog::abstract_map(decl.name.clone(), &domain, &codomain);
            if let Some(images) = &decl.images {
                let src = codomain
                    .ring
                    .as_ref()
                    .ok_or_else(|| Error::Parse(format!("{codomain_name:?} has no ring")))?;
                let dst = domain
                    .ring
                    .as_ref()
                    .ok_or_else(|| Error::Parse(format!("{domain_name:?} has no ring")))?;
                let mut elems = Vec::with_capacity(src.gen_count());
                for g in src.generators() {
                    let monomials = images.get(&g.name).ok_or_else(|| {
                        Error::Parse(format!("missing image for generator {:?}", g.name))
                    })?;
                    elems.push(Element::from_exponent_vectors(dst, monomials)?);
                }
                spec.pullback = Some(make_map(src, dst, elems)?);
            }
            spec
        }
    };
    spec.name = decl.name.clone();
    apply_map_flags(&mut spec, &decl.flags);
    Ok(spec)
}

fn apply_map_flags(spec: &mut MapSpec, flags: &Option<MapFlags>) {
    if let Some(flags) = flags {
        if let Some(v) = flags.fibration {
            spec.fibration = v;
        }
        if let Some(v) = flags.section {
            spec.has_section = v;
        }
        if let Some(v) = flags.homotopy_section {
            spec.has_homotopy_section = v;
        }
        if let Some(v) = flags.null_homotopic {
            spec.null_homotopic = v;
        }
    }
    spec.normalize_flags();
}

/// outer o inner: domain and codomain from the ends, the pullback composed
/// the other way around, fibration/section flags inherited when both
/// factors have them.
fn build_composite(name: &str, inner: &MapSpec, outer: &MapSpec) -> Result<MapSpec, Error> {
    if inner.codomain.name != outer.domain.name {
        return Err(Error::Parse(format!(
            "composite {name:?}: codomain of inner ({}) differs from domain of outer ({})",
            inner.codomain.name, outer.domain.name
        )));
    }
    let mut spec = catalog::abstract_map(name, &inner.domain, &outer.codomain);
    if let (Some(fi), Some(fo)) = (&inner.pullback, &outer.pullback) {
        spec.pullback = Some(compose(fo, fi)?);
    }
    spec.fibration = inner.fibration && outer.fibration;
    spec.has_section = inner.has_section && outer.has_section;
    spec.has_homotopy_section = inner.has_homotopy_section && outer.has_homotopy_section;
    spec.normalize_flags();
    Ok(spec)
}

fn build_product(name: &str, left: &MapSpec, right: &MapSpec) -> Result<MapSpec, Error> {
    let domain = catalog::product_space(&[left.domain.clone(), right.domain.clone()]).ok();
    let codomain = catalog::product_space(&[left.codomain.clone(), right.codomain.clone()]).ok();
    let (Some(domain), Some(codomain)) = (domain, codomain) else {
        return Err(Error::Parse(format!(
            "product map {name:?} requires rings on all four spaces"
        )));
    };
    let mut spec = catalog::abstract_map(name, &domain, &codomain);
    if let (Some(fl), Some(fr)) = (&left.pullback, &right.pullback) {
        spec.pullback = Some(tensor_map(fl, fr)?);
    }
    spec.fibration = left.fibration && right.fibration;
    spec.has_section = left.has_section && right.has_section;
    spec.has_homotopy_section = left.has_homotopy_section && right.has_homotopy_section;
    spec.normalize_flags();
    Ok(spec)
}

/// Parses one quantity string of the grammar.
pub fn parse_quantity(text: &str) -> Result<QuantityRef, Error> {
    let bad = |msg: &str| Error::InvalidQuantity(format!("{text:?}: {msg}"));
    let trimmed = text.trim();
    let open = trimmed
        .find('(')
        .ok_or_else(|| bad("expected kind(arguments)"))?;
    if !trimmed.ends_with(')') {
        return Err(bad("missing closing parenthesis"));
    }
    let kind_text = &trimmed[..open];
    let args: Vec<&str> = trimmed[open + 1..trimmed.len() - 1]
        .split(',')
        .map(str::trim)
        .collect();
    if args.is_empty() || args[0].is_empty() {
        return Err(bad("missing name argument"));
    }
    let name = args[0].to_string();
    let keyed = |key: &str| -> Result<u32, Error> {
        for a in &args[1..] {
            if let Some((k, v)) = a.split_once('=') {
                if k.trim() == key {
                    return v
                        .trim()
                        .parse()
                        .map_err(|_| bad(&format!("{key} must be an integer")));
                }
            }
        }
        Err(bad(&format!("missing {key}=<int>")))
    };
    let (kind, r, s) = match kind_text {
        "cat" => {
            if args.len() != 1 {
                return Err(bad("cat takes a single space name"));
            }
            (QuantityKind::Cat, 0, 0)
        }
        "tc" => (QuantityKind::TCr, keyed("r")?, 0),
        "tcrs" => (QuantityKind::TCrs, keyed("r")?, keyed("s")?),
        "htcrs" => (QuantityKind::HTCrs, keyed("r")?, keyed("s")?),
        "sec" => (QuantityKind::SecPow, 0, keyed("s")?),
        "secat" => (QuantityKind::SecatPow, 0, keyed("s")?),
        "evalsec" => (QuantityKind::EvalSec, keyed("r")?, keyed("s")?),
        other => return Err(bad(&format!("unknown quantity kind {other:?}"))),
    };
    match kind {
        QuantityKind::TCr if r < 2 => return Err(bad("needs r >= 2")),
        QuantityKind::TCrs | QuantityKind::HTCrs | QuantityKind::EvalSec => {
            if r < 2 || s < 1 || s > r {
                return Err(bad("needs 2 <= r and 1 <= s <= r"));
            }
        }
        QuantityKind::SecPow | QuantityKind::SecatPow if s < 1 => return Err(bad("needs s >= 1")),
        _ => {}
    }
    Ok(QuantityRef { kind, name, r, s })
}

/// Resolves a parsed quantity against an instantiated state.
pub fn resolve_quantity(state: &State, qr: &QuantityRef) -> Result<QuantityId, Error> {
    let space = |name: &str| {
        state
            .space_id(name)
            .ok_or_else(|| Error::UnknownName(format!("space {name:?}")))
    };
    let map = |name: &str| {
        state
            .map_id(name)
            .ok_or_else(|| Error::UnknownName(format!("map {name:?}")))
    };
    let check_r = |r: u32| {
        if r > state.r_max() {
            Err(Error::UnknownQuantity(format!(
                "r={r} exceeds r_max={}",
                state.r_max()
            )))
        } else {
            Ok(r)
        }
    };
    Ok(match qr.kind {
        QuantityKind::Cat => QuantityId::Cat(space(&qr.name)?),
        QuantityKind::TCr => QuantityId::TCr(space(&qr.name)?, check_r(qr.r)?),
        QuantityKind::TCrs => QuantityId::TCrs(map(&qr.name)?, check_r(qr.r)?, qr.s),
        QuantityKind::HTCrs => QuantityId::HTCrs(map(&qr.name)?, check_r(qr.r)?, qr.s),
        QuantityKind::SecPow => QuantityId::SecPow(map(&qr.name)?, check_r(qr.s)?),
        QuantityKind::SecatPow => QuantityId::SecatPow(map(&qr.name)?, check_r(qr.s)?),
        QuantityKind::EvalSec => QuantityId::EvalSec(map(&qr.name)?, check_r(qr.r)?, qr.s),
    })
}

/// Instantiates, seeds user facts, and propagates to the fixpoint.
pub fn solve(problem: &Problem) -> Result<State, Error> {
    let mut state = engine::instantiate(&problem.spaces, &problem.maps, problem.r_max)?;
    for fact in &problem.facts {
        let q = resolve_quantity(&state, &fact.quantity)?;
        state.apply_user_fact(q, fact.lo, fact.hi, &fact.note)?;
    }
    state.propagate()?;
    Ok(state)
}

/// The whole pipeline on a problem document, returning the canonical
/// report JSON text.
pub fn bound_pipeline_json(text: &str, include_trace: bool) -> Result<String, Error> {
    let problem = parse_problem_file(text)?;
    let state = solve(&problem)?;
    let report = crate::report::bound_report(&state, &problem)?;
    let value = crate::report::bound_report_json(&state, &report, include_trace);
    Ok(serde_json::to_string_pretty(&value).expect("serializable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_minimal_cover_problem() {
        let text = r#"{
            "spaces": [],
            "maps": [{"name": "p", "kind": "double_cover", "params": {"n": 2}}],
            "queries": ["tcrs(p, r=3, s=3)"],
            "r_max": 3
        }"#;
        let problem = parse_problem_file(text).unwrap();
        assert_eq!(problem.maps.len(), 1);
        assert_eq!(problem.maps[0].spec.name, "p");
        assert!(problem.maps[0].spec.fibration);
        let st = solve(&problem).unwrap();
        let q = resolve_quantity(&st, &problem.queries[0]).unwrap();
        let iv = st.query(q).unwrap();
        assert_eq!((iv.lo, iv.hi), (7, Some(7)));
    }

    #[test]
    fn custom_space_with_generators() {
        let text = r#"{
            "spaces": [{"name": "C", "generators": [{"name": "a", "degree": 1, "truncation": 2}]}],
            "queries": ["cat(C)"],
            "r_max": 2
        }"#;
        let problem = parse_problem_file(text).unwrap();
        let ring = problem.spaces[0].ring.as_ref().unwrap();
        assert_eq!(ring.total_dim(), 2);
    }

    #[test]
    fn contractible_spaces_must_present_the_trivial_ring() {
        let text = r#"{
            "spaces": [{"name": "C",
                        "generators": [{"name": "a", "degree": 1, "truncation": 2}],
                        "flags": {"contractible": true}}],
            "r_max": 2
        }"#;
        assert!(matches!(parse_problem_file(text), Err(Error::Parse(_))));
    }

    #[test]
    fn truncation_one_is_rejected() {
        let text = r#"{
            "spaces": [{"name": "C", "generators": [{"name": "a", "degree": 1, "truncation": 1}]}],
            "r_max": 2
        }"#;
        assert!(matches!(
            parse_problem_file(text),
            Err(Error::InvalidGenerator(_))
        ));
    }

    #[test]
    fn quantity_grammar() {
        let q = parse_quantity("tcrs(p_2, r=3, s=2)").unwrap();
        assert_eq!(q.kind, QuantityKind::TCrs);
        assert_eq!((q.r, q.s), (3, 2));
        assert_eq!(q.name, "p_2");

        assert!(parse_quantity("cat(S^2)").is_ok());
        assert!(parse_quantity("tc(S^2, r=5)").is_ok());
        assert!(parse_quantity("sec(p, s=2)").is_ok());
        assert!(matches!(
            parse_quantity("tcrs(p, r=1, s=1)"),
            Err(Error::InvalidQuantity(_))
        ));
        assert!(matches!(
            parse_quantity("tcrs(p, r=2, s=3)"),
            Err(Error::InvalidQuantity(_))
        ));
        assert!(matches!(
            parse_quantity("frob(p)"),
            Err(Error::InvalidQuantity(_))
        ));
        assert!(matches!(
            parse_quantity("tc(S^2)"),
            Err(Error::InvalidQuantity(_))
        ));
    }

    #[test]
    fn unknown_names_are_distinct_errors() {
        let text = r#"{
            "maps": [{"name": "f", "domain": "E", "codomain": "S^2"}],
            "r_max": 2
        }"#;
        // abstract domains must be declared; E is not a catalog name
        assert!(matches!(
            parse_problem_file(text),
            Err(Error::UnknownName(_))
        ));

        let text = r#"{"queries": ["tcrs(nosuch, r=2, s=1)"], "r_max": 2}"#;
        let problem = parse_problem_file(text).unwrap();
        let st = solve(&problem).unwrap();
        assert!(matches!(
            resolve_quantity(&st, &problem.queries[0]),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn abstract_fibration_problem() {
        let text = r#"{
            "spaces": [{"name": "E", "kind": "abstract"}],
            "maps": [{"name": "f", "domain": "E", "codomain": "S^3",
                      "flags": {"fibration": true}}],
            "queries": ["tcrs(f, r=4, s=3)"],
            "r_max": 4
        }"#;
        let problem = parse_problem_file(text).unwrap();
        let st = solve(&problem).unwrap();
        let q = resolve_quantity(&st, &problem.queries[0]).unwrap();
        let iv = st.query(q).unwrap();
        assert_eq!((iv.lo, iv.hi), (4, Some(4)));
    }

    #[test]
    fn custom_pullback_images() {
        // a formal degree-1 map a -> i between a truncation-2 line and a
        // circle
        let text = r#"{
            "spaces": [
                {"name": "C", "generators": [{"name": "a", "degree": 1, "truncation": 2}]}
            ],
            "maps": [{"name": "f", "domain": "C", "codomain": "S^1",
                      "images": {"i": [[1]]}}],
            "queries": ["htcrs(f, r=2, s=1)"],
            "r_max": 2
        }"#;
        let problem = parse_problem_file(text).unwrap();
        let f = problem.maps[0].spec.pullback.as_ref().unwrap();
        let i = Element::generator(f.source(), 0);
        assert_eq!(f.apply(&i).unwrap().to_string(), "a");
    }

    #[test]
    fn composite_inherits_structure() {
        let text = r#"{
            "maps": [
                {"name": "pr", "kind": "projection", "params": {"base": "S^3", "fiber": "S^1"}},
                {"name": "idb", "kind": "identity", "params": {"space": "S^3"}},
                {"name": "c", "composite": ["pr", "idb"]}
            ],
            "r_max": 2
        }"#;
        let problem = parse_problem_file(text).unwrap();
        let c = &problem.maps[2];
        assert_eq!(c.composite, Some((0, 1)));
        assert!(c.spec.fibration);
        assert!(c.spec.has_section);
        assert!(c.spec.pullback.is_some());
        assert_eq!(c.spec.domain.name, "S^3 x S^1");
        assert_eq!(c.spec.codomain.name, "S^3");
    }

    #[test]
    fn product_map_of_covers() {
        let text = r#"{
            "maps": [
                {"name": "p1", "kind": "double_cover", "params": {"n": 1}},
                {"name": "p2", "kind": "double_cover", "params": {"n": 2}},
                {"name": "pp", "product": ["p1", "p2"]}
            ],
            "queries": ["tcrs(pp, r=2, s=2)"],
            "r_max": 2
        }"#;
        let problem = parse_problem_file(text).unwrap();
        let pp = &problem.maps[2];
        assert!(pp.spec.fibration);
        assert_eq!(pp.spec.domain.name, "S^1 x S^2");
        let st = solve(&problem).unwrap();
        // nil on the product pullback gives 2(1+2)+... the product rule
        // caps the upper bound by TC(p1) + TC(p2) - 1 = 3 + 5 - 1
        let q = resolve_quantity(&st, &problem.queries[0]).unwrap();
        let iv = st.query(q).unwrap();
        assert_eq!((iv.lo, iv.hi), (7, Some(7)));
    }

    #[test]
    fn user_fact_validation() {
        let text = r#"{
            "maps": [{"name": "p", "kind": "double_cover", "params": {"n": 1}}],
            "facts": [{"quantity": "tcrs(p, r=2, s=2)", "lo": 3, "hi": 2}],
            "r_max": 2
        }"#;
        assert!(matches!(parse_problem_file(text), Err(Error::Parse(_))));
    }
}
