//! Interval fixpoint propagation over the inequality rule set.
//!
//! Quantities (TC_{r,s}, HTC_{r,s}, TC_r, cat, sec, secat, and the relative
//! sectional numbers of the evaluation fibration) are instantiated over a
//! problem, seeded from catalog facts and the cohomological lower bounds,
//! and tightened by monotone rules until nothing moves. Every tightening
//! carries a trace entry naming the rule, its statement, and the premise
//! intervals it used, so each reported bound is auditable.
//!
//! Endpoints only tighten (lo never decreases, hi never increases) and all
//! conclusions are monotone in their premises, so the fixpoint exists, the
//! loop terminates, and the result does not depend on rule order; the
//! order-independence is exercised by the shuffle tests.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::catalog::{known_facts, FactTarget, MapSpec, SpaceSpec};
use crate::hom::{diagonal_evaluation_map, power_map};
use crate::nil::{cup_length, nil_index};
use crate::Error;

pub type SpaceId = usize;
pub type MapId = usize;

/// An invariant instance tracked by the engine.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum QuantityId {
    Cat(SpaceId),
    TCr(SpaceId, u32),
    TCrs(MapId, u32, u32),
    HTCrs(MapId, u32, u32),
    SecPow(MapId, u32),
    SecatPow(MapId, u32),
    EvalSec(MapId, u32, u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Endpoint {
    Lo,
    Hi,
}

/// One tightening event: which rule fired, its statement, the premise
/// snapshots it used, and the endpoint it moved.
#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub rule: &'static str,
    pub statement: String,
    pub premises: Vec<(QuantityId, u32, Option<u32>)>,
    pub produced: Endpoint,
    pub value: u32,
}

/// Integer bounds [lo, hi] with 1 <= lo <= hi; hi = None is unbounded.
/// Updates only tighten; lo > hi is surfaced as a contradiction error,
/// never clamped.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: u32,
    pub hi: Option<u32>,
    pub trace: Vec<TraceEntry>,
}

impl Interval {
    fn fresh() -> Self {
        Interval {
            lo: 1,
            hi: None,
            trace: Vec::new(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.hi == Some(self.lo)
    }
}

#[derive(Clone, Copy, Debug)]
enum UpdateKind {
    /// lo(target) >= max of premise los.
    LoFromMaxLo,
    /// hi(target) <= min of finite premise his; no-op if none finite.
    HiFromMinHi,
    /// hi(target) <= sum of premise his - (count - 1); needs all finite.
    HiFromSumMinusCountPlus1,
    /// hi(target) <= a + a*b - 1 for premises [a, b]; needs both finite.
    HiFromCatSecProduct,
}

struct RuleInstance {
    rule: &'static str,
    statement: &'static str,
    target: QuantityId,
    premises: Vec<QuantityId>,
    update: UpdateKind,
}

struct SpaceEntry {
    spec: Arc<SpaceSpec>,
    /// Product decomposition over base spaces, sorted by id; None for base
    /// spaces themselves.
    product_of: Option<Vec<(SpaceId, u32)>>,
    cup: Option<u32>,
    name: String,
    contractible: bool,
    h_space: bool,
    normal: bool,
}

struct MapEntry {
    name: String,
    domain: SpaceId,
    codomain: SpaceId,
    fibration: bool,
    has_section: bool,
    has_homotopy_section: bool,
    identity: bool,
    null_homotopic: bool,
}

/// A problem map plus structural links to other maps in the problem.
pub struct ProblemMap {
    pub spec: MapSpec,
    /// (inner, outer) indices: this map is outer after inner.
    pub composite: Option<(usize, usize)>,
    /// (left, right) indices: this map is the product left x right.
    pub product: Option<(usize, usize)>,
}

/// Counters reported by propagation, used by the convergence tests.
#[derive(Debug, Default, Clone, Copy)]
pub struct PropagationStats {
    pub sweeps: u32,
    pub updates: u32,
}

pub struct State {
    spaces: Vec<SpaceEntry>,
    maps: Vec<MapEntry>,
    product_index: HashMap<Vec<(SpaceId, u32)>, SpaceId>,
    quantities: BTreeMap<QuantityId, Interval>,
    rules: Vec<RuleInstance>,
    equalities: Vec<(QuantityId, QuantityId, &'static str)>,
    r_max: u32,
}

// rule statements, phrased as the mathematical facts they encode
const ST_R1: &str = "HTC_{r,s}(f) <= TC_{r,s}(f) for any map f";
const ST_R2: &str = "TC_{r,s}(f) = HTC_{r,s}(f) for any fibration f";
const ST_R3: &str = "TC_{r,s}(f) <= min{TC_{r+1,s}(f), TC_{r+1,s+1}(f)}";
const ST_R4_LT: &str =
    "TC_{r,s}(f) >= max{sec(f^s), sec^{1 x f^s}(e_r), cat(X^{r-s-1} x Y^s)} for s < r";
const ST_R4_EQ: &str = "TC_{r,r}(f) >= max{sec(f^r), sec^{f^r}(e_r), TC_r(Y)}";
const ST_R5: &str = "secat(g) <= sec(g) for any map g";
const ST_R6_UP: &str = "TC_{r,s}(f) <= cat(X^{r-s} x Y^s) for a fibration f, s < r";
const ST_R6_DIAG: &str = "max{sec(f^r), TC_r(Y)} <= TC_{r,r}(f) <= cat(Y^r) for a fibration f";
const ST_R7: &str =
    "TC_{r,s}(f x f') <= TC_{r,s}(f) + TC_{r,s}(f') - 1 when the target product is normal";
const ST_R8A: &str = "TC_{r,s}(f o h) <= TC_{r,s}(h) when f admits a section";
const ST_R8A_H: &str = "HTC_{r,s}(f o h) <= HTC_{r,s}(h) when f admits a homotopy section";
const ST_R8B_H: &str = "HTC_{r,s}(g) <= HTC_{r,s}(g o f) when f admits a homotopy section";
const ST_R8B: &str = "TC_{r,s}(g) <= TC_{r,s}(g o f) when f admits a homotopy section and s < r";
const ST_R9A: &str = "TC_r(Y) <= HTC_{r,r}(f) for any map f: X -> Y";
const ST_R9_SEC: &str = "TC_r(Y) = TC_{r,r}(f) when f admits a section";
const ST_R9_HSEC: &str = "TC_r(Y) = HTC_{r,r}(f) when f admits a homotopy section";
const ST_R9B: &str = "TC_{r,r}(g) <= TC_{r,r}(g o f) for any maps f, g";
const ST_R9B_H: &str = "HTC_{r,r}(g) <= HTC_{r,r}(g o f) for any maps f, g";
const ST_R9B_SEC: &str = "TC_{r,r}(g) = TC_{r,r}(g o f) when f admits a section";
const ST_R9B_HSEC: &str = "HTC_{r,r}(g) = HTC_{r,r}(g o f) when f admits a homotopy section";
const ST_R10: &str = "TC_{r,r-1}(f) <= TC_r(Y) for a fibration f";
const ST_R10C: &str = "TC_{r,r-1}(f' o f) <= TC_{r,r-1}(f') when f is a fibration";
const ST_R11: &str = "TC_{r,r-1}(f) = TC_r(Y) for a fibration f with a homotopy section";
const ST_R12: &str = "TC_{r,r-1}(f) = cat(Y^{r-1}) = TC_r(Y) for a fibration f over an H-space Y";
const ST_R13: &str = "TC_{r,s}(f) = cat(Y^s) = sec(f^s) for a fibration f with contractible domain";
const ST_R13B: &str = "TC_{r,s}(f) = sec(f^s) when the domain is contractible";
const ST_R14: &str =
    "TC_{2s,s}(f) <= cat(X^s) + cat(X^s) * sec(f^s) - 1 for path-connected X, normal product";
const ST_R15: &str = "nil(Ker of the diagonal-evaluation pullback) <= HTC_{r,s}(f)";
const ST_R16_4: &str = "sec(g o f) >= sec(g)";
const ST_R16_5: &str = "sec(p) <= cat(B) for a fibration p: E -> B";
const ST_R16_6: &str = "secat(c) = cat(Y) for a null-homotopic c: X -> Y";
const ST_R17: &str = "nil(Ker((f^s)*)) <= secat(f^s)";
const ST_R18: &str = "sec(f x f') <= sec(f) + sec(f') - 1 over a normal codomain product";
const ST_R19: &str = "cat(A x B) <= cat(A) + cat(B) - 1 for a normal product";
const ST_R21A: &str = "sec^{1 x f^s}(e_r) <= sec(e_r) = TC_r(X)";
const ST_R21B: &str = "TC_{r,s}(f) = sec^{1 x f^s}(e_r) when f admits a section";
const ST_R0: &str = "TC_{r,s} of the identity of X equals TC_r(X)";
const ST_S1_LO: &str = "cat(Z^{r-1}) <= TC_r(Z)";
const ST_S1_HI: &str = "TC_r(Z) <= cat(Z^r)";
const ST_S2: &str = "TC_r(Z) = cat(Z^{r-1}) for an H-space Z";
const ST_CUP: &str = "cup-length(Z) + 1 <= cat(Z)";
const ST_CONTRACTIBLE: &str = "cat of a contractible space is 1";
const ST_USER: &str = "user-supplied fact";

/// Builds the quantity graph for a problem: interns spaces (including the
/// derived products the rules mention), creates all quantities for
/// 2 <= r <= r_max + 1 (one-step lookahead so the monotonicity rules can
/// tighten values at r_max), registers the rule instances whose guards
/// hold, and applies the seeds: catalog facts, cup-length lower bounds for
/// categories, nilpotence lower bounds for HTC and secat, and user facts.
pub fn instantiate(
    spaces: &[Arc<SpaceSpec>],
    maps: &[ProblemMap],
    r_max: u32,
) -> Result<State, Error> {
    if r_max < 2 {
        return Err(Error::InvalidProblem("r_max must be >= 2".into()));
    }
    let mut st = State {
        spaces: Vec::new(),
        maps: Vec::new(),
        product_index: HashMap::new(),
        quantities: BTreeMap::new(),
        rules: Vec::new(),
        equalities: Vec::new(),
        r_max,
    };
    let lookahead = r_max + 1;

    for s in spaces {
        st.intern_space(s);
    }
    let mut map_ids = Vec::new();
    for m in maps {
        let domain = st.intern_space(&m.spec.domain);
        let codomain = st.intern_space(&m.spec.codomain);
        let id = st.maps.len();
        st.maps.push(MapEntry {
            name: m.spec.name.clone(),
            domain,
            codomain,
            fibration: m.spec.fibration,
            has_section: m.spec.has_section,
            has_homotopy_section: m.spec.has_homotopy_section || m.spec.has_section,
            identity: m.spec.identity,
            null_homotopic: m.spec.null_homotopic,
        });
        map_ids.push(id);
    }

    // quantities for spaces (category and sequential TC)
    for sid in 0..st.spaces.len() {
        st.touch(QuantityId::Cat(sid));
        for r in 2..=lookahead {
            st.touch(QuantityId::TCr(sid, r));
        }
    }
    // quantities for maps
    for &f in &map_ids {
        for r in 2..=lookahead {
            for s in 1..=r {
                st.touch(QuantityId::TCrs(f, r, s));
                st.touch(QuantityId::HTCrs(f, r, s));
                st.touch(QuantityId::EvalSec(f, r, s));
            }
        }
        for s in 1..=lookahead {
            st.touch(QuantityId::SecPow(f, s));
            st.touch(QuantityId::SecatPow(f, s));
        }
    }

    st.build_map_rules(lookahead);
    st.build_link_rules(maps, &map_ids, lookahead);
    st.build_space_rules(lookahead);

    st.apply_seeds(maps, &map_ids, r_max)?;
    Ok(st)
}

impl State {
    fn touch(&mut self, q: QuantityId) {
        self.quantities.entry(q).or_insert_with(Interval::fresh);
    }

    fn intern_space(&mut self, spec: &Arc<SpaceSpec>) -> SpaceId {
        if let Some(found) = self
            .spaces
            .iter()
            .position(|e| e.product_of.is_none() && e.name == spec.name)
        {
            return found;
        }
        // spaces declared as products intern through their factors so that
        // structurally equal products unify
        if let Some(factors) = &spec.factors {
            let parts: Vec<(SpaceId, u32)> =
                factors.iter().map(|f| (self.intern_space(f), 1)).collect();
            let sid = self.product_space_id(&parts);
            // keep the declared name for rendering
            self.spaces[sid].name = spec.name.clone();
            return sid;
        }
        self.spaces.push(SpaceEntry {
            cup: spec.ring.as_ref().map(|r| cup_length(r)),
            name: spec.name.clone(),
            contractible: spec.contractible,
            h_space: spec.h_space,
            normal: spec.normal,
            spec: spec.clone(),
            product_of: None,
        });
        self.spaces.len() - 1
    }

    /// Interns the product of base-space powers, normalizing by sorting on
    /// id and merging repeats. A single factor to the first power is the
    /// base space itself.
    fn product_space_id(&mut self, parts: &[(SpaceId, u32)]) -> SpaceId {
        let mut key: Vec<(SpaceId, u32)> = Vec::new();
        let mut sorted: Vec<(SpaceId, u32)> = parts.iter().copied().filter(|p| p.1 > 0).collect();
        sorted.sort_unstable();
        for (id, k) in sorted {
            // flatten nested products
            if let Some(sub) = self.spaces[id].product_of.clone() {
                for (f, j) in sub {
                    merge_power(&mut key, f, j * k);
                }
            } else {
                merge_power(&mut key, id, k);
            }
        }
        if key.len() == 1 && key[0].1 == 1 {
            return key[0].0;
        }
        if let Some(&sid) = self.product_index.get(&key) {
            return sid;
        }
        let name = key
            .iter()
            .map(|&(id, k)| {
                if k == 1 {
                    self.spaces[id].name.clone()
                } else {
                    format!("({})^{}", self.spaces[id].name, k)
                }
            })
            .collect::<Vec<_>>()
            .join(" x ");
        let cup = key
            .iter()
            .map(|&(id, k)| self.spaces[id].cup.map(|c| c * k))
            .sum::<Option<u32>>();
        let contractible = key.iter().all(|&(id, _)| self.spaces[id].contractible);
        let h_space = key.iter().all(|&(id, _)| self.spaces[id].h_space);
        let normal = key.iter().all(|&(id, _)| self.spaces[id].normal);
        let spec = self.spaces[key[0].0].spec.clone(); // placeholder spec; rings stay lazy
        let sid = self.spaces.len();
        self.spaces.push(SpaceEntry {
            spec,
            product_of: Some(key.clone()),
            cup,
            name,
            contractible,
            h_space,
            normal,
        });
        self.product_index.insert(key, sid);
        self.touch(QuantityId::Cat(sid));
        // category rules for the new product
        self.seed_cat_rules(sid);
        sid
    }

    /// Cat quantity support for one space: cup seed comes later (seeds run
    /// after rule construction), subadditivity applies to products.
    fn seed_cat_rules(&mut self, sid: SpaceId) {
        if let Some(parts) = self.spaces[sid].product_of.clone() {
            if self.spaces[sid].normal {
                let mut premises = Vec::new();
                for (f, k) in parts {
                    for _ in 0..k {
                        premises.push(QuantityId::Cat(f));
                    }
                }
                self.rules.push(RuleInstance {
                    rule: "R19",
                    statement: ST_R19,
                    target: QuantityId::Cat(sid),
                    premises,
                    update: UpdateKind::HiFromSumMinusCountPlus1,
                });
            }
        }
    }

    fn ineq(
        &mut self,
        rule: &'static str,
        statement: &'static str,
        le: QuantityId,
        ge: QuantityId,
    ) {
        self.rules.push(RuleInstance {
            rule,
            statement,
            target: ge,
            premises: vec![le],
            update: UpdateKind::LoFromMaxLo,
        });
        self.rules.push(RuleInstance {
            rule,
            statement,
            target: le,
            premises: vec![ge],
            update: UpdateKind::HiFromMinHi,
        });
    }

    fn equate(
        &mut self,
        rule: &'static str,
        statement: &'static str,
        a: QuantityId,
        b: QuantityId,
    ) {
        self.ineq(rule, statement, a, b);
        self.ineq(rule, statement, b, a);
        self.equalities.push((a, b, rule));
    }

    fn build_map_rules(&mut self, lookahead: u32) {
        for f in 0..self.maps.len() {
            let m = &self.maps[f];
            let (x, y) = (m.domain, m.codomain);
            let (fibration, has_section, has_homotopy_section, identity, null_homotopic) = (
                m.fibration,
                m.has_section,
                m.has_homotopy_section,
                m.identity,
                m.null_homotopic,
            );
            let domain_contractible = self.spaces[x].contractible;
            let y_h_space = self.spaces[y].h_space;
            let normal_pair = self.spaces[x].normal && self.spaces[y].normal;

            for r in 2..=lookahead {
                for s in 1..=r {
                    let t = QuantityId::TCrs(f, r, s);
                    let h = QuantityId::HTCrs(f, r, s);
                    let e = QuantityId::EvalSec(f, r, s);
                    let sec_s = QuantityId::SecPow(f, s);

                    self.ineq("R1", ST_R1, h, t);
                    if fibration {
                        self.equate("R2", ST_R2, t, h);
                    }
                    if r < lookahead {
                        self.ineq("R3", ST_R3, t, QuantityId::TCrs(f, r + 1, s));
                        self.ineq("R3", ST_R3, t, QuantityId::TCrs(f, r + 1, s + 1));
                    }
                    if s < r {
                        self.ineq("R4", ST_R4_LT, sec_s, t);
                        self.ineq("R4", ST_R4_LT, e, t);
                        let minor = self.product_space_id(&[(x, r - s - 1), (y, s)]);
                        self.ineq("R4", ST_R4_LT, QuantityId::Cat(minor), t);
                        if fibration {
                            let major = self.product_space_id(&[(x, r - s), (y, s)]);
                            self.ineq("R6", ST_R6_UP, t, QuantityId::Cat(major));
                        }
                    } else {
                        self.ineq("R4", ST_R4_EQ, sec_s, t);
                        self.ineq("R4", ST_R4_EQ, e, t);
                        self.ineq("R4", ST_R4_EQ, QuantityId::TCr(y, r), t);
                        if fibration {
                            let yr = self.product_space_id(&[(y, r)]);
                            self.ineq("R6", ST_R6_DIAG, t, QuantityId::Cat(yr));
                        }
                    }
                    if s == r {
                        self.ineq("R9", ST_R9A, QuantityId::TCr(y, r), h);
                        if has_section {
                            self.equate("R9", ST_R9_SEC, t, QuantityId::TCr(y, r));
                        }
                        if has_homotopy_section {
                            self.equate("R9", ST_R9_HSEC, h, QuantityId::TCr(y, r));
                        }
                    }
                    if s + 1 == r && fibration {
                        self.ineq("R10", ST_R10, t, QuantityId::TCr(y, r));
                        if has_homotopy_section {
                            self.equate("R11", ST_R11, t, QuantityId::TCr(y, r));
                        }
                        if y_h_space {
                            let ypow = self.product_space_id(&[(y, r - 1)]);
                            self.equate("R12", ST_R12, t, QuantityId::Cat(ypow));
                            self.equate("R12", ST_R12, t, QuantityId::TCr(y, r));
                        }
                    }
                    if domain_contractible {
                        if fibration {
                            let ys = self.product_space_id(&[(y, s)]);
                            self.equate("R13", ST_R13, t, QuantityId::Cat(ys));
                        }
                        self.equate("R13", ST_R13B, t, sec_s);
                    }
                    self.ineq("R21", ST_R21A, e, QuantityId::TCr(x, r));
                    if has_section {
                        self.equate("R21", ST_R21B, t, e);
                    }
                    if identity {
                        self.equate("R0", ST_R0, t, QuantityId::TCr(x, r));
                        self.equate("R0", ST_R0, h, QuantityId::TCr(x, r));
                    }
                }
                // R14 at (2s, s): guarded on normality of the pair
                if r % 2 == 0 && normal_pair {
                    let s = r / 2;
                    let xs = self.product_space_id(&[(x, s)]);
                    self.rules.push(RuleInstance {
                        rule: "R14",
                        statement: ST_R14,
                        target: QuantityId::TCrs(f, r, s),
                        premises: vec![QuantityId::Cat(xs), QuantityId::SecPow(f, s)],
                        update: UpdateKind::HiFromCatSecProduct,
                    });
                }
            }

            for s in 1..=lookahead {
                self.ineq(
                    "R5",
                    ST_R5,
                    QuantityId::SecatPow(f, s),
                    QuantityId::SecPow(f, s),
                );
                if fibration {
                    let ys = self.product_space_id(&[(y, s)]);
                    self.ineq(
                        "R16",
                        ST_R16_5,
                        QuantityId::SecPow(f, s),
                        QuantityId::Cat(ys),
                    );
                }
                if null_homotopic {
                    let ys = self.product_space_id(&[(y, s)]);
                    self.equate(
                        "R16",
                        ST_R16_6,
                        QuantityId::SecatPow(f, s),
                        QuantityId::Cat(ys),
                    );
                }
                if s >= 2 && self.spaces[y].normal {
                    self.rules.push(RuleInstance {
                        rule: "R18",
                        statement: ST_R18,
                        target: QuantityId::SecPow(f, s),
                        premises: vec![QuantityId::SecPow(f, s - 1), QuantityId::SecPow(f, 1)],
                        update: UpdateKind::HiFromSumMinusCountPlus1,
                    });
                }
            }
        }
    }

    /// Rules activated by declared composite and product structure.
    fn build_link_rules(&mut self, maps: &[ProblemMap], map_ids: &[MapId], lookahead: u32) {
        for (idx, pm) in maps.iter().enumerate() {
            let c = map_ids[idx];
            if let Some((inner_idx, outer_idx)) = pm.composite {
                let i = map_ids[inner_idx];
                let o = map_ids[outer_idx];
                let inner_fib = self.maps[i].fibration;
                let inner_sec = self.maps[i].has_section;
                let inner_hsec = self.maps[i].has_homotopy_section;
                let outer_sec = self.maps[o].has_section;
                let outer_hsec = self.maps[o].has_homotopy_section;
                for r in 2..=lookahead {
                    for s in 1..=r {
                        if outer_sec {
                            self.ineq(
                                "R8",
                                ST_R8A,
                                QuantityId::TCrs(c, r, s),
                                QuantityId::TCrs(i, r, s),
                            );
                        }
                        if outer_hsec {
                            self.ineq(
                                "R8",
                                ST_R8A_H,
                                QuantityId::HTCrs(c, r, s),
                                QuantityId::HTCrs(i, r, s),
                            );
                        }
                        if inner_hsec {
                            self.ineq(
                                "R8",
                                ST_R8B_H,
                                QuantityId::HTCrs(o, r, s),
                                QuantityId::HTCrs(c, r, s),
                            );
                            if s < r {
                                self.ineq(
                                    "R8",
                                    ST_R8B,
                                    QuantityId::TCrs(o, r, s),
                                    QuantityId::TCrs(c, r, s),
                                );
                            }
                        }
                    }
                    // diagonal composite rules
                    self.ineq(
                        "R9",
                        ST_R9B,
                        QuantityId::TCrs(o, r, r),
                        QuantityId::TCrs(c, r, r),
                    );
                    self.ineq(
                        "R9",
                        ST_R9B_H,
                        QuantityId::HTCrs(o, r, r),
                        QuantityId::HTCrs(c, r, r),
                    );
                    if inner_sec {
                        self.equate(
                            "R9",
                            ST_R9B_SEC,
                            QuantityId::TCrs(o, r, r),
                            QuantityId::TCrs(c, r, r),
                        );
                    }
                    if inner_hsec {
                        self.equate(
                            "R9",
                            ST_R9B_HSEC,
                            QuantityId::HTCrs(o, r, r),
                            QuantityId::HTCrs(c, r, r),
                        );
                    }
                    if inner_fib {
                        self.ineq(
                            "R10",
                            ST_R10C,
                            QuantityId::TCrs(c, r, r - 1),
                            QuantityId::TCrs(o, r, r - 1),
                        );
                    }
                }
                for s in 1..=lookahead {
                    self.ineq(
                        "R16",
                        ST_R16_4,
                        QuantityId::SecPow(o, s),
                        QuantityId::SecPow(c, s),
                    );
                }
            }
            if let Some((left_idx, right_idx)) = pm.product {
                let l = map_ids[left_idx];
                let rgt = map_ids[right_idx];
                let all_normal = [l, rgt].iter().all(|&mid| {
                    self.spaces[self.maps[mid].domain].normal
                        && self.spaces[self.maps[mid].codomain].normal
                });
                if all_normal {
                    for r in 2..=lookahead {
                        for s in 1..=r {
                            self.rules.push(RuleInstance {
                                rule: "R7",
                                statement: ST_R7,
                                target: QuantityId::TCrs(c, r, s),
                                premises: vec![
                                    QuantityId::TCrs(l, r, s),
                                    QuantityId::TCrs(rgt, r, s),
                                ],
                                update: UpdateKind::HiFromSumMinusCountPlus1,
                            });
                        }
                    }
                    self.rules.push(RuleInstance {
                        rule: "R18",
                        statement: ST_R18,
                        target: QuantityId::SecPow(c, 1),
                        premises: vec![QuantityId::SecPow(l, 1), QuantityId::SecPow(rgt, 1)],
                        update: UpdateKind::HiFromSumMinusCountPlus1,
                    });
                }
            }
        }
    }

    fn build_space_rules(&mut self, lookahead: u32) {
        // TCr-bearing spaces were interned before rule construction; the
        // sandwich cat(Z^{r-1}) <= TC_r(Z) <= cat(Z^r) holds uncondition-
        // ally because the r-fold evaluation map is a fibration over Z^r
        // deformable onto the diagonal copy of Z^{r-1} slices.
        let with_tcr: Vec<SpaceId> = (0..self.spaces.len())
            .filter(|&sid| self.quantities.contains_key(&QuantityId::TCr(sid, 2)))
            .collect();
        for sid in with_tcr {
            let h_space = self.spaces[sid].h_space;
            for r in 2..=lookahead {
                let low = self.product_space_id(&[(sid, r - 1)]);
                let high = self.product_space_id(&[(sid, r)]);
                self.ineq(
                    "S1",
                    ST_S1_LO,
                    QuantityId::Cat(low),
                    QuantityId::TCr(sid, r),
                );
                self.ineq(
                    "S1",
                    ST_S1_HI,
                    QuantityId::TCr(sid, r),
                    QuantityId::Cat(high),
                );
                if h_space {
                    self.equate("S2", ST_S2, QuantityId::TCr(sid, r), QuantityId::Cat(low));
                }
            }
        }
    }

    fn apply_seeds(
        &mut self,
        maps: &[ProblemMap],
        map_ids: &[MapId],
        r_max: u32,
    ) -> Result<(), Error> {
        // category and TC facts for base spaces; cup-length and
        // contractibility for every space with the data
        for sid in 0..self.spaces.len() {
            if let Some(cup) = self.spaces[sid].cup {
                self.seed(QuantityId::Cat(sid), cup + 1, None, "cup", ST_CUP)?;
            }
            if self.spaces[sid].contractible {
                self.seed(
                    QuantityId::Cat(sid),
                    1,
                    Some(1),
                    "contractible",
                    ST_CONTRACTIBLE,
                )?;
            }
            if self.spaces[sid].product_of.is_some() {
                continue;
            }
            let spec = self.spaces[sid].spec.clone();
            for fact in known_facts(&spec, r_max + 1) {
                let q = match fact.target {
                    FactTarget::Cat => QuantityId::Cat(sid),
                    FactTarget::TCr(r) => QuantityId::TCr(sid, r),
                };
                self.seed(q, fact.lo, Some(fact.hi), "fact", &fact.statement)?;
            }
        }
        // nilpotence seeds; capped at r_max because lower bounds only flow
        // upward in r, so lookahead-level seeds cannot tighten reported
        // quantities
        for (idx, pm) in maps.iter().enumerate() {
            let f = map_ids[idx];
            let Some(pullback) = &pm.spec.pullback else {
                continue;
            };
            for r in 2..=r_max {
                if pm.spec.identity {
                    // every s yields the same diagonal map
                    let m = diagonal_evaluation_map(pullback, r, r)?;
                    let nil = nil_index(&m);
                    for s in 1..=r {
                        self.seed(QuantityId::HTCrs(f, r, s), nil, None, "R15", ST_R15)?;
                    }
                } else {
                    for s in 1..=r {
                        let m = diagonal_evaluation_map(pullback, r, s)?;
                        let nil = nil_index(&m);
                        self.seed(QuantityId::HTCrs(f, r, s), nil, None, "R15", ST_R15)?;
                    }
                }
            }
            if !pm.spec.identity {
                for s in 1..=r_max {
                    let m = power_map(pullback, s)?;
                    let nil = nil_index(&m);
                    self.seed(QuantityId::SecatPow(f, s), nil, None, "R17", ST_R17)?;
                }
            }
        }
        Ok(())
    }

    fn seed(
        &mut self,
        q: QuantityId,
        lo: u32,
        hi: Option<u32>,
        rule: &'static str,
        statement: &str,
    ) -> Result<(), Error> {
        self.touch(q);
        self.tighten(q, Endpoint::Lo, lo, rule, statement, Vec::new())?;
        if let Some(h) = hi {
            self.tighten(q, Endpoint::Hi, h, rule, statement, Vec::new())?;
        }
        Ok(())
    }

    fn tighten(
        &mut self,
        q: QuantityId,
        endpoint: Endpoint,
        value: u32,
        rule: &'static str,
        statement: &str,
        premises: Vec<(QuantityId, u32, Option<u32>)>,
    ) -> Result<bool, Error> {
        let cur = self.quantities.get(&q).expect("quantity instantiated");
        let improves = match endpoint {
            Endpoint::Lo => value > cur.lo,
            Endpoint::Hi => cur.hi.is_none_or(|h| value < h),
        };
        if !improves {
            return Ok(false);
        }
        let contradiction = match endpoint {
            Endpoint::Lo => cur.hi.is_some_and(|h| value > h),
            Endpoint::Hi => value < cur.lo,
        };
        if contradiction {
            return Err(self.contradiction_error(q, endpoint, value, rule, statement));
        }
        let entry = TraceEntry {
            rule,
            statement: statement.to_string(),
            premises,
            produced: endpoint,
            value,
        };
        let cur = self.quantities.get_mut(&q).expect("quantity instantiated");
        match endpoint {
            Endpoint::Lo => cur.lo = value,
            Endpoint::Hi => cur.hi = Some(value),
        }
        cur.trace.push(entry);
        Ok(true)
    }

    fn contradiction_error(
        &self,
        q: QuantityId,
        endpoint: Endpoint,
        value: u32,
        rule: &'static str,
        statement: &str,
    ) -> Error {
        let cur = &self.quantities[&q];
        let opposing = cur
            .trace
            .iter()
            .rev()
            .find(|t| t.produced != endpoint)
            .map(|t| format!("{} ({})", t.rule, t.statement))
            .unwrap_or_else(|| "initial bound".to_string());
        let (kind, existing) = match endpoint {
            Endpoint::Lo => ("lower", format!("upper bound {}", render_hi(cur.hi))),
            Endpoint::Hi => ("upper", format!("lower bound {}", cur.lo)),
        };
        Error::Contradiction(format!(
            "{}: new {kind} bound {value} from {rule} ({statement}) conflicts with {existing} from {opposing}",
            self.render_quantity(q)
        ))
    }

    /// Seeds a user-asserted fact; contradictions with existing bounds are
    /// reported immediately.
    pub fn apply_user_fact(
        &mut self,
        q: QuantityId,
        lo: u32,
        hi: Option<u32>,
        note: &str,
    ) -> Result<(), Error> {
        if !self.quantities.contains_key(&q) {
            return Err(Error::UnknownQuantity(self.render_quantity(q)));
        }
        let statement = if note.is_empty() {
            ST_USER.to_string()
        } else {
            format!("{ST_USER}: {note}")
        };
        self.seed(q, lo, hi, "user", &statement)
    }

    /// Applies rules until no endpoint moves. Terminates because endpoints
    /// are integers in a bounded range moving monotonically.
    pub fn propagate(&mut self) -> Result<PropagationStats, Error> {
        let order: Vec<usize> = (0..self.rules.len()).collect();
        self.propagate_in_order(&order)
    }

    /// Propagation with an explicit rule application order; the fixpoint
    /// must not depend on it (confluence), which the tests exercise.
    pub fn propagate_in_order(&mut self, order: &[usize]) -> Result<PropagationStats, Error> {
        let mut stats = PropagationStats::default();
        let sweep_limit = self.sweep_limit();
        loop {
            let mut moved = 0u32;
            for &i in order {
                moved += u32::from(self.apply_rule(i)?);
            }
            stats.sweeps += 1;
            stats.updates += moved;
            if moved == 0 {
                return Ok(stats);
            }
            assert!(
                stats.sweeps <= sweep_limit,
                "propagation exceeded the monotone convergence bound"
            );
        }
    }

    /// Endpoints move at most (finite value range) times each, so the
    /// sweep count is bounded by quantities x range plus the final
    /// no-change sweep.
    fn sweep_limit(&self) -> u32 {
        let range: u32 = 4 * (self.r_max + 2) * (self.max_seeded() + 2);
        (self.quantities.len() as u32) * range + 2
    }

    fn max_seeded(&self) -> u32 {
        self.quantities
            .values()
            .map(|iv| iv.hi.unwrap_or(iv.lo).max(iv.lo))
            .max()
            .unwrap_or(1)
    }

    fn apply_rule(&mut self, idx: usize) -> Result<bool, Error> {
        let (target, update, rule, statement) = {
            let r = &self.rules[idx];
            (r.target, r.update, r.rule, r.statement)
        };
        let snapshot: Vec<(QuantityId, u32, Option<u32>)> = self.rules[idx]
            .premises
            .iter()
            .map(|p| {
                let iv = &self.quantities[p];
                (*p, iv.lo, iv.hi)
            })
            .collect();
        let (endpoint, value) = match update {
            UpdateKind::LoFromMaxLo => {
                let cand = snapshot.iter().map(|p| p.1).max().unwrap_or(1);
                (Endpoint::Lo, cand)
            }
            UpdateKind::HiFromMinHi => {
                let Some(cand) = snapshot.iter().filter_map(|p| p.2).min() else {
                    return Ok(false);
                };
                (Endpoint::Hi, cand)
            }
            UpdateKind::HiFromSumMinusCountPlus1 => {
                let mut sum = 0u32;
                for p in &snapshot {
                    let Some(h) = p.2 else { return Ok(false) };
                    sum += h;
                }
                (Endpoint::Hi, sum - (snapshot.len() as u32 - 1))
            }
            UpdateKind::HiFromCatSecProduct => {
                let (Some(a), Some(b)) = (snapshot[0].2, snapshot[1].2) else {
                    return Ok(false);
                };
                (Endpoint::Hi, a + a * b - 1)
            }
        };
        self.tighten(target, endpoint, value, rule, statement, snapshot)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn quantity_count(&self) -> usize {
        self.quantities.len()
    }

    pub fn r_max(&self) -> u32 {
        self.r_max
    }

    /// Current interval and full trace; errors on unknown quantities.
    pub fn query(&self, q: QuantityId) -> Result<&Interval, Error> {
        self.quantities
            .get(&q)
            .ok_or_else(|| Error::UnknownQuantity(self.render_quantity(q)))
    }

    pub fn space_id(&self, name: &str) -> Option<SpaceId> {
        self.spaces.iter().position(|s| s.name == name)
    }

    pub fn map_id(&self, name: &str) -> Option<MapId> {
        self.maps.iter().position(|m| m.name == name)
    }

    pub fn map_name(&self, id: MapId) -> &str {
        &self.maps[id].name
    }

    pub fn render_quantity(&self, q: QuantityId) -> String {
        match q {
            QuantityId::Cat(s) => format!("cat({})", self.spaces[s].name),
            QuantityId::TCr(s, r) => format!("tc({}, r={r})", self.spaces[s].name),
            QuantityId::TCrs(m, r, s) => {
                format!("tcrs({}, r={r}, s={s})", self.maps[m].name)
            }
            QuantityId::HTCrs(m, r, s) => {
                format!("htcrs({}, r={r}, s={s})", self.maps[m].name)
            }
            QuantityId::SecPow(m, s) => format!("sec({}, s={s})", self.maps[m].name),
            QuantityId::SecatPow(m, s) => format!("secat({}, s={s})", self.maps[m].name),
            QuantityId::EvalSec(m, r, s) => {
                format!("evalsec({}, r={r}, s={s})", self.maps[m].name)
            }
        }
    }

    /// Verifies every interval and the guard-implied equalities; report
    /// valued, never errors.
    pub fn check_consistency(&self) -> ConsistencyReport {
        let mut problems = Vec::new();
        for (q, iv) in &self.quantities {
            if let Some(h) = iv.hi {
                if iv.lo > h {
                    problems.push(format!(
                        "{}: lo {} exceeds hi {h}",
                        self.render_quantity(*q),
                        iv.lo
                    ));
                }
            }
        }
        for (a, b, rule) in &self.equalities {
            let ia = &self.quantities[a];
            let ib = &self.quantities[b];
            if ia.lo != ib.lo || ia.hi != ib.hi {
                problems.push(format!(
                    "{rule}: {} = {} expected, got [{},{}] vs [{},{}]",
                    self.render_quantity(*a),
                    self.render_quantity(*b),
                    ia.lo,
                    render_hi(ia.hi),
                    ib.lo,
                    render_hi(ib.hi),
                ));
            }
        }
        ConsistencyReport { problems }
    }

    /// The unification report for a map: when the map is a fibration with a
    /// homotopy section the named variants collapse onto TC_{r,r}; other-
    /// wise only the comparison chain between the homotopy and strict
    /// variants is available.
    pub fn alias_report(&self, map: MapId) -> AliasReport {
        let m = &self.maps[map];
        let unified = m.fibration && m.has_homotopy_section;
        let mut rows = Vec::new();
        for r in 2..=self.r_max {
            let tc = &self.quantities[&QuantityId::TCrs(map, r, r)];
            let htc = &self.quantities[&QuantityId::HTCrs(map, r, r)];
            if unified {
                let names = vec![
                    format!("TC^RS_{r}(f)"),
                    format!("TC^MW_{r}(f)"),
                    format!("sec_(f^{r})(e_{r})"),
                    format!("HTC_{{{r},{r}}}(f)"),
                    format!("TC_{{{r},{r}}}(f)"),
                    format!("TC_{{{r},{}}}(f)", r - 1),
                    format!("TC_{r}(Y)"),
                ];
                rows.push(AliasRow {
                    r,
                    equality: true,
                    names,
                    lo: tc.lo,
                    hi: tc.hi,
                    chain: None,
                });
            } else {
                rows.push(AliasRow {
                    r,
                    equality: false,
                    names: vec![
                        format!("sec_(f^{r})(e_{r})"),
                        format!("HTC_{{{r},{r}}}(f)"),
                        format!("TC_{{{r},{r}}}(f)"),
                    ],
                    lo: htc.lo,
                    hi: tc.hi,
                    chain: Some(((htc.lo, htc.hi), (tc.lo, tc.hi))),
                });
            }
        }
        AliasReport {
            map: m.name.clone(),
            unified,
            rows,
        }
    }
}

fn merge_power(key: &mut Vec<(SpaceId, u32)>, id: SpaceId, k: u32) {
    if k == 0 {
        return;
    }
    if let Some(last) = key.iter_mut().find(|e| e.0 == id) {
        last.1 += k;
    } else {
        key.push((id, k));
        key.sort_unstable();
    }
}

pub fn render_hi(hi: Option<u32>) -> String {
    match hi {
        Some(h) => h.to_string(),
        None => "inf".to_string(),
    }
}

pub struct ConsistencyReport {
    pub problems: Vec<String>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// The equality chain (or comparison chain) of the named TC variants of a
/// map, per r.
pub struct AliasReport {
    pub map: String,
    pub unified: bool,
    pub rows: Vec<AliasRow>,
}

/// An interval endpoint pair (lo, hi); hi = None is unbounded.
pub type Bounds = (u32, Option<u32>);

pub struct AliasRow {
    pub r: u32,
    pub equality: bool,
    pub names: Vec<String>,
    pub lo: u32,
    pub hi: Option<u32>,
    /// (HTC bounds, TC bounds) when only the chain is known.
    pub chain: Option<(Bounds, Bounds)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cover_problem(n: u32) -> ProblemMap {
        ProblemMap {
            spec: catalog::double_cover(n).unwrap(),
            composite: None,
            product: None,
        }
    }

    fn solved_cover(n: u32, r_max: u32) -> State {
        let mut st = instantiate(&[], &[cover_problem(n)], r_max).unwrap();
        st.propagate().unwrap();
        st
    }

    fn interval(st: &State, q: QuantityId) -> (u32, Option<u32>) {
        let iv = st.query(q).unwrap();
        (iv.lo, iv.hi)
    }

    #[test]
    fn cover_diagonal_is_exact() {
        // TC_{r,r}(p_n) = rn + 1
        for n in 1..=3u32 {
            let st = solved_cover(n, 3);
            for r in 2..=3u32 {
                assert_eq!(
                    interval(&st, QuantityId::TCrs(0, r, r)),
                    (r * n + 1, Some(r * n + 1)),
                    "n={n}, r={r}"
                );
            }
        }
    }

    #[test]
    fn cover_off_diagonal_two_point_interval() {
        // s < r away from the H-space sharpening: [sn+r-s, sn+r-s+1]
        let st = solved_cover(2, 4);
        for r in 2..=4u32 {
            for s in 1..r {
                assert_eq!(
                    interval(&st, QuantityId::TCrs(0, r, s)),
                    (s * 2 + r - s, Some(s * 2 + r - s + 1)),
                    "r={r}, s={s}"
                );
            }
        }
    }

    #[test]
    fn cover_h_space_sharpening() {
        // n in {1,3,7}: TC_{r,r-1}(p_n) = (r-1)n + 1 exactly
        for n in [1u32, 3] {
            let st = solved_cover(n, 4);
            for r in 2..=4u32 {
                assert_eq!(
                    interval(&st, QuantityId::TCrs(0, r, r - 1)),
                    ((r - 1) * n + 1, Some((r - 1) * n + 1)),
                    "n={n}, r={r}"
                );
            }
        }
        // and the engine reports the two-point interval for p_1 at s < r-1
        let st = solved_cover(1, 3);
        assert_eq!(interval(&st, QuantityId::TCrs(0, 3, 1)), (3, Some(4)));
    }

    #[test]
    fn cover_sec_power_is_exact() {
        // sec(p_n^s) = sn + 1: nilpotence from below, cat of the base from
        // above
        let st = solved_cover(2, 3);
        for s in 1..=3u32 {
            assert_eq!(
                interval(&st, QuantityId::SecPow(0, s)),
                (2 * s + 1, Some(2 * s + 1))
            );
        }
    }

    #[test]
    fn quotient_intervals() {
        // TC_{r,s}(q_n) = [sn+r-s, sn+r-s+1] for s < r; the diagonal
        // tightens to rn+1 exactly via the nilpotence seed
        let q = ProblemMap {
            spec: catalog::complex_quotient(2).unwrap(),
            composite: None,
            product: None,
        };
        let mut st = instantiate(&[], &[q], 3).unwrap();
        st.propagate().unwrap();
        for r in 2..=3u32 {
            for s in 1..r {
                assert_eq!(
                    interval(&st, QuantityId::TCrs(0, r, s)),
                    (2 * s + r - s, Some(2 * s + r - s + 1)),
                    "r={r}, s={s}"
                );
            }
            assert_eq!(
                interval(&st, QuantityId::TCrs(0, r, r)),
                (2 * r + 1, Some(2 * r + 1))
            );
        }
    }

    #[test]
    fn abstract_fibration_over_spheres() {
        // flags only, no cohomology of the total space
        for (n, odd) in [(3u32, true), (5, true), (2, false), (4, false)] {
            let e = catalog::abstract_space("E");
            let sph = catalog::sphere(n).unwrap();
            let mut f = catalog::abstract_map("f", &e, &sph);
            f.fibration = true;
            let pm = ProblemMap {
                spec: f,
                composite: None,
                product: None,
            };
            let mut st = instantiate(&[], &[pm], 4).unwrap();
            st.propagate().unwrap();
            for r in 2..=4u32 {
                if odd {
                    assert_eq!(
                        interval(&st, QuantityId::TCrs(0, r, r - 1)),
                        (r, Some(r)),
                        "odd n={n}, r={r}"
                    );
                } else {
                    assert_eq!(
                        interval(&st, QuantityId::TCrs(0, r, r)),
                        (r + 1, Some(r + 1)),
                        "even n={n}, r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_aliases_to_space_tc() {
        let rp3 = catalog::real_projective(3).unwrap();
        let pm = ProblemMap {
            spec: catalog::identity_map_spec("id(RP^3)", &rp3),
            composite: None,
            product: None,
        };
        let mut st = instantiate(&[], &[pm], 3).unwrap();
        st.propagate().unwrap();
        let sid = st.space_id("RP^3").unwrap();
        for r in 2..=3u32 {
            let tc_space = interval(&st, QuantityId::TCr(sid, r));
            for s in 1..=r {
                assert_eq!(interval(&st, QuantityId::TCrs(0, r, s)), tc_space);
            }
            // RP^3 is an H-space: TC_r = cat((RP^3)^(r-1)) = 3(r-1)+1
            assert_eq!(tc_space, (3 * (r - 1) + 1, Some(3 * (r - 1) + 1)));
        }
    }

    #[test]
    fn projection_unifies_all_aliases() {
        let pm = ProblemMap {
            spec: catalog::projection(&catalog::sphere(3).unwrap(), &catalog::sphere(1).unwrap())
                .unwrap(),
            composite: None,
            product: None,
        };
        let mut st = instantiate(&[], &[pm], 3).unwrap();
        st.propagate().unwrap();
        let report = st.alias_report(0);
        assert!(report.unified);
        let sid = st.space_id("S^3").unwrap();
        for row in &report.rows {
            let tc = interval(&st, QuantityId::TCr(sid, row.r));
            assert_eq!((row.lo, row.hi), tc);
            assert_eq!(row.names.len(), 7);
        }
        // the cover admits no section: chain report only
        let st = solved_cover(2, 3);
        assert!(!st.alias_report(0).unified);
    }

    #[test]
    fn point_quantities_collapse() {
        let pt = catalog::point();
        let mut st = instantiate(&[pt], &[], 3).unwrap();
        st.propagate().unwrap();
        let sid = st.space_id("pt").unwrap();
        assert_eq!(interval(&st, QuantityId::Cat(sid)), (1, Some(1)));
        for r in 2..=3 {
            assert_eq!(interval(&st, QuantityId::TCr(sid, r)), (1, Some(1)));
        }
    }

    #[test]
    fn user_fact_contradiction_is_reported() {
        let err = instantiate(&[], &[cover_problem(1)], 2)
            .and_then(|mut st| {
                st.apply_user_fact(QuantityId::TCrs(0, 2, 2), 2, Some(2), "impossible")?;
                st.propagate().map(|_| ())
            })
            .expect_err("the nilpotence lower bound 3 contradicts hi = 2");
        assert!(matches!(err, Error::Contradiction(_)), "got {err:?}");
    }

    #[test]
    fn consistency_report_is_clean_on_catalog_problems() {
        for st in [solved_cover(1, 3), solved_cover(2, 3)] {
            let report = st.check_consistency();
            assert!(report.ok(), "{:?}", report.problems);
        }
    }

    #[test]
    fn propagation_is_confluent_under_shuffled_orders() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let reference = solved_cover(2, 3);
        let baseline: Vec<(QuantityId, u32, Option<u32>)> = reference
            .quantities
            .iter()
            .map(|(q, iv)| (*q, iv.lo, iv.hi))
            .collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut st = instantiate(&[], &[cover_problem(2)], 3).unwrap();
            let mut order: Vec<usize> = (0..st.rule_count()).collect();
            order.shuffle(&mut rng);
            st.propagate_in_order(&order).unwrap();
            let got: Vec<(QuantityId, u32, Option<u32>)> = st
                .quantities
                .iter()
                .map(|(q, iv)| (*q, iv.lo, iv.hi))
                .collect();
            assert_eq!(got, baseline);
        }
    }

    #[test]
    fn propagation_converges_within_bound() {
        let mut st = instantiate(&[], &[cover_problem(3)], 4).unwrap();
        let stats = st.propagate().unwrap();
        assert!(stats.sweeps <= st.sweep_limit());
        // a second propagation is a no-op fixpoint check
        let again = st.propagate().unwrap();
        assert_eq!(again.updates, 0);
    }

    #[test]
    fn traces_carry_rules_and_statements() {
        let st = solved_cover(2, 3);
        let iv = st.query(QuantityId::TCrs(0, 3, 3)).unwrap();
        assert!(!iv.trace.is_empty());
        let rules: Vec<&str> = iv.trace.iter().map(|t| t.rule).collect();
        assert!(rules.iter().any(|r| *r == "R2" || *r == "R6" || *r == "R4"));
        for t in &iv.trace {
            assert!(!t.statement.is_empty());
        }
    }

    #[test]
    fn sec_subadditivity_binds_through_user_facts() {
        // a plain map has no intrinsic upper bound on sec(f^s); a fact on
        // sec(f, s=1) propagates to higher powers through subadditivity
        let x = catalog::sphere(2).unwrap();
        let y = catalog::real_projective(3).unwrap();
        let pm = ProblemMap {
            spec: catalog::abstract_map("f", &x, &y),
            composite: None,
            product: None,
        };
        let mut st = instantiate(&[], &[pm], 3).unwrap();
        st.apply_user_fact(QuantityId::SecPow(0, 1), 1, Some(3), "assumed").unwrap();
        st.propagate().unwrap();
        let (_, hi) = interval(&st, QuantityId::SecPow(0, 2));
        assert_eq!(hi, Some(5), "sec(f^2) <= 2 sec(f) - 1");
        let (_, hi) = interval(&st, QuantityId::SecPow(0, 3));
        assert_eq!(hi, Some(7));
    }

    #[test]
    fn cat_sec_product_bounds_even_diagonal_of_plain_maps() {
        // without the fibration flag the category sandwich is silent, so
        // the cat * sec product bound is the only finite upper route
        let x = catalog::sphere(2).unwrap();
        let y = catalog::sphere(2).unwrap();
        let pm = ProblemMap {
            spec: catalog::abstract_map("f", &x, &y),
            composite: None,
            product: None,
        };
        let mut st = instantiate(&[], &[pm], 2).unwrap();
        st.apply_user_fact(QuantityId::SecPow(0, 1), 1, Some(1), "assumed section")
            .unwrap();
        st.propagate().unwrap();
        // cat(S^2) = 2: TC_{2,1}(f) <= 2 + 2*1 - 1 = 3, lo = cat(S^2) = 2
        assert_eq!(interval(&st, QuantityId::TCrs(0, 2, 1)), (2, Some(3)));
    }

    #[test]
    fn constant_maps_collapse_secat_and_keep_sec_open() {
        // null-homotopic: secat(c^s) = cat(Y^s) exactly; the domain is
        // contractible so TC_{r,s}(c) = sec(c^s), whose upper end stays
        // open (constants are not surjective)
        let pm = ProblemMap {
            spec: catalog::constant_map(&catalog::point(), &catalog::real_projective(3).unwrap())
                .unwrap(),
            composite: None,
            product: None,
        };
        let mut st = instantiate(&[], &[pm], 3).unwrap();
        st.propagate().unwrap();
        assert_eq!(interval(&st, QuantityId::SecatPow(0, 2)), (7, Some(7)));
        let tc = interval(&st, QuantityId::TCrs(0, 3, 2));
        let sec = interval(&st, QuantityId::SecPow(0, 2));
        assert_eq!(tc, sec, "contractible domain equates the TC interval to sec");
        assert_eq!(tc, (7, None));
    }

    #[test]
    fn empty_problem_is_consistent() {
        let mut st = instantiate(&[], &[], 2).unwrap();
        st.propagate().unwrap();
        assert!(st.check_consistency().ok());
    }

    #[test]
    fn nil_seed_feeds_lower_bound_through_fibration_equality() {
        let st = solved_cover(2, 3);
        let h = st.query(QuantityId::HTCrs(0, 3, 3)).unwrap();
        assert!(h.trace.iter().any(|t| t.rule == "R15"));
        assert_eq!(h.lo, 7);
    }
}
