//! Exhaustive verification suites.
//!
//! Each suite enumerates every instance up to a size bound and checks one
//! family of properties against the library predicates. Failures carry enough
//! data (collections, spaces, functions) to be replayed through the library.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::categories::{
    amnestic_representative, coreflect, fiber_compare, initial_structure, reflect,
    verify_coreflection, verify_initial, verify_reflection, Cone, Leg, COREFLECTIONS, REFLECTIONS,
};
use crate::coincidence::{
    all_functions, analyze_functions, analyze_relation, centered_functions_at, coincidence_set,
    germ_class, germ_partition, witness_triple_filter, witness_triple_filterbase, FiniteFunction,
    FunctionCap, FunctionSpace, RelationMode,
};
use crate::document::{CollectionDocument, SpaceDocument};
use crate::error::{Error, Result};
use crate::setalgebra::{
    cap_closure, classify_collection, enumerate_collections, every_three_partition_has_one_member,
    finer, generated_filter, is_ultrafilter, is_ultrafilter_by_complement, satisfies_f0,
    up_closure, CollectionClass, CollectionKind, EnumerationCap, SubsetCollection, Universe,
};
use crate::spaces::{
    converges, enumerate_raw_structures, enumerate_spaces, is_centered, validate_space,
    CenteredSpace, EventuallyPeriodicSequence, SpaceClass, SPACE_ENUM_MAX_POINTS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteId {
    FilterBiconditional,
    FilterbaseBiconditional,
    SharpnessCard3,
    WitnessIdentities,
    ClosureLaws,
    Ultrafilter,
    Reflections,
    InitialStructures,
    Amnesticity,
    ConvergenceGerms,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::FilterBiconditional,
        SuiteId::FilterbaseBiconditional,
        SuiteId::SharpnessCard3,
        SuiteId::WitnessIdentities,
        SuiteId::ClosureLaws,
        SuiteId::Ultrafilter,
        SuiteId::Reflections,
        SuiteId::InitialStructures,
        SuiteId::Amnesticity,
        SuiteId::ConvergenceGerms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::FilterBiconditional => "filter-biconditional",
            SuiteId::FilterbaseBiconditional => "filterbase-biconditional",
            SuiteId::SharpnessCard3 => "sharpness-card3",
            SuiteId::WitnessIdentities => "witness-identities",
            SuiteId::ClosureLaws => "closure-laws",
            SuiteId::Ultrafilter => "ultrafilter",
            SuiteId::Reflections => "reflections",
            SuiteId::InitialStructures => "initial-structures",
            SuiteId::Amnesticity => "amnesticity",
            SuiteId::ConvergenceGerms => "convergence-germs",
        }
    }

    /// Default `(max_points, max_colors)`.
    pub fn defaults(self) -> (usize, usize) {
        match self {
            SuiteId::FilterBiconditional => (3, 3),
            SuiteId::FilterbaseBiconditional => (3, 2),
            SuiteId::SharpnessCard3 => (4, 2),
            SuiteId::WitnessIdentities => (4, 3),
            SuiteId::ClosureLaws => (3, 0),
            SuiteId::Ultrafilter => (4, 0),
            SuiteId::Reflections => (2, 0),
            SuiteId::InitialStructures => (2, 0),
            SuiteId::Amnesticity => (3, 0),
            SuiteId::ConvergenceGerms => (3, 2),
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|s| s.name()).collect()
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown suite `{s}`; available: {}",
                    Self::names().join(", ")
                )
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    pub max_points: Option<usize>,
    pub max_colors: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_points: usize,
    pub max_colors: usize,
    pub cases: u64,
    /// Counts by sub-sweep, e.g. `points=3`, plus auxiliary tallies.
    pub breakdown: BTreeMap<String, u64>,
    pub failures: Vec<Value>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(id: SuiteId, max_points: usize, max_colors: usize) -> Self {
        SuiteReport {
            suite: id.name().to_string(),
            max_points,
            max_colors,
            cases: 0,
            breakdown: BTreeMap::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn case(&mut self, bucket: impl Into<String>) {
        self.cases += 1;
        *self.breakdown.entry(bucket.into()).or_default() += 1;
    }

    fn fail(&mut self, failure: Value) {
        self.failures.push(failure);
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite: {}\nmax-points: {}\nmax-colors: {}\ncases: {}\n",
            self.suite, self.max_points, self.max_colors, self.cases
        );
        for (k, v) in &self.breakdown {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        out.push_str(&format!("failures: {}\n", self.failures.len()));
        for f in &self.failures {
            out.push_str(&format!("  {f}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(if self.passed() {
            "result: pass\n"
        } else {
            "result: FAIL\n"
        });
        out
    }
}

pub fn run_suite(id: SuiteId, options: SuiteOptions) -> Result<SuiteReport> {
    let (dp, dc) = id.defaults();
    let max_points = options.max_points.unwrap_or(dp);
    let max_colors = options.max_colors.unwrap_or(dc);
    if max_points == 0 {
        return Err(Error::InvalidUniverse {
            size: 0,
            max: Universe::MAX_SIZE,
        });
    }
    let mut report = SuiteReport::new(id, max_points, max_colors);
    match id {
        SuiteId::FilterBiconditional => biconditional(&mut report, RelationMode::Exact, 3)?,
        SuiteId::FilterbaseBiconditional => biconditional(&mut report, RelationMode::Weak, 2)?,
        SuiteId::SharpnessCard3 => sharpness(&mut report)?,
        SuiteId::WitnessIdentities => witness_identities(&mut report)?,
        SuiteId::ClosureLaws => closure_laws(&mut report)?,
        SuiteId::Ultrafilter => ultrafilters(&mut report)?,
        SuiteId::Reflections => reflections(&mut report)?,
        SuiteId::InitialStructures => initial_structures(&mut report)?,
        SuiteId::Amnesticity => amnesticity(&mut report)?,
        SuiteId::ConvergenceGerms => convergence_germs(&mut report)?,
    }
    Ok(report)
}

fn universe(n: usize) -> Result<Universe> {
    Universe::new(n)
}

fn collection_json(p: &SubsetCollection) -> Value {
    json!({ "points": p.universe().size(), "collection": p.to_point_sets() })
}

fn space_json(s: &CenteredSpace) -> Value {
    let doc = SpaceDocument::from_space(s);
    let nu: serde_json::Map<String, Value> = doc
        .nu
        .iter()
        .enumerate()
        .map(|(x, sets)| (x.to_string(), json!(sets)))
        .collect();
    json!({ "points": doc.points, "nu": nu })
}

fn collections(n: usize, kind: Option<CollectionKind>) -> Result<Vec<SubsetCollection>> {
    Ok(enumerate_collections(universe(n)?, kind, EnumerationCap::from_env())?.collect())
}

fn require_colors(report: &SuiteReport, needed: usize) -> Result<Universe> {
    if report.max_colors < needed {
        return Err(Error::CodomainTooSmall {
            needed,
            size: report.max_colors,
        });
    }
    universe(report.max_colors)
}

/// `class(P)` against "the induced relation is a nontrivial equivalence".
fn biconditional(report: &mut SuiteReport, mode: RelationMode, min_colors: usize) -> Result<()> {
    let codomain = require_colors(report, min_colors)?;
    for n in 1..=report.max_points {
        for p in collections(n, None)? {
            let class = classify_collection(&p)?;
            let expected = match mode {
                RelationMode::Exact => class.is_filter,
                RelationMode::Weak => class.is_filterbase,
            };
            let relation = analyze_relation(&p, codomain, mode, FunctionCap::default())?;
            report.case(format!("points={n}"));
            if expected != relation.is_nontrivial_equivalence() {
                report.fail(json!({
                    "collection": collection_json(&p),
                    "class": class,
                    "relation": relation,
                }));
            }
        }
    }
    Ok(())
}

/// The four-point collection put forward as evidence that the filter
/// biconditional needs at least three colors.
pub fn sharpness_instance() -> SubsetCollection {
    let x = Universe::new(4).expect("4 points");
    SubsetCollection::from_point_sets(x, &[[0, 1], [0, 2], [0, 3]]).expect("valid sets")
}

fn sharpness(report: &mut SuiteReport) -> Result<()> {
    let p = sharpness_instance();
    let two = universe(2)?;
    let class = classify_collection(&p)?;
    let relation = analyze_relation(&p, two, RelationMode::Exact, FunctionCap::default())?;
    report.case("literal");
    if class.is_filterbase || class.is_filter || !relation.is_nontrivial_equivalence() {
        report.fail(json!({
            "collection": collection_json(&p),
            "class": class,
            "relation": relation,
        }));
    }
    // with X added the exact relation is reflexive
    let with_x = p.with_members([p.universe().full()])?;
    let aug_class = classify_collection(&with_x)?;
    let aug2 = analyze_relation(&with_x, two, RelationMode::Exact, FunctionCap::default())?;
    let aug3 = analyze_relation(
        &with_x,
        universe(3)?,
        RelationMode::Exact,
        FunctionCap::default(),
    )?;
    report.notes.push(format!(
        "{p} is not reflexive under the exact relation since X is not a member; \
         {with_x}: filterbase={}, nontrivial equivalence with 2 colors={}, with 3 colors={}",
        aug_class.is_filterbase,
        aug2.is_nontrivial_equivalence(),
        aug3.is_nontrivial_equivalence()
    ));
    Ok(())
}

fn witness_identities(report: &mut SuiteReport) -> Result<()> {
    let codomain = require_colors(report, 3)?;
    let k = codomain.size();
    let triples: Vec<[usize; 3]> = (0..k)
        .flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |c| [a, b, c])))
        .filter(|[a, b, c]| a != b && b != c && a != c)
        .collect();
    let pairs: Vec<[usize; 2]> = (0..k)
        .flat_map(|a| (0..k).map(move |b| [a, b]))
        .filter(|[a, b]| a != b)
        .collect();
    for n in 1..=report.max_points {
        let x = universe(n)?;
        for a in x.subsets() {
            for b in x.subsets() {
                let meet = a.intersection(b);
                for &colors in &triples {
                    let (f, g, h) = witness_triple_filter(x, codomain, a, b, colors)?;
                    report.case(format!("filter points={n}"));
                    if coincidence_set(&f, &h)? != a
                        || coincidence_set(&h, &g)? != b
                        || coincidence_set(&f, &g)? != meet
                    {
                        report.fail(json!({
                            "construction": "filter", "points": n,
                            "a": a.to_points(), "b": b.to_points(), "colors": colors,
                            "f": f, "g": g, "h": h,
                        }));
                    }
                }
                for &colors in &pairs {
                    let (f, g, h) = witness_triple_filterbase(x, codomain, a, b, colors)?;
                    report.case(format!("filterbase points={n}"));
                    if coincidence_set(&g, &h)? != a
                        || !b.is_subset_of(coincidence_set(&f, &g)?)
                        || coincidence_set(&f, &h)? != meet
                    {
                        report.fail(json!({
                            "construction": "filterbase", "points": n,
                            "a": a.to_points(), "b": b.to_points(), "colors": colors,
                            "f": f, "g": g, "h": h,
                        }));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `candidate` is the least member of `family` containing `p`.
fn is_least_containing(
    candidate: &SubsetCollection,
    p: &SubsetCollection,
    family: &[SubsetCollection],
) -> bool {
    family.contains(candidate)
        && p.is_subcollection_of(candidate)
        && family
            .iter()
            .filter(|q| p.is_subcollection_of(q))
            .all(|q| candidate.is_subcollection_of(q))
}

fn closure_laws(report: &mut SuiteReport) -> Result<()> {
    for n in 1..=report.max_points {
        let all = collections(n, None)?;
        let classes: Vec<CollectionClass> =
            all.iter().map(classify_collection).collect::<Result<_>>()?;
        let pick = |f: fn(&CollectionClass) -> bool| -> Vec<SubsetCollection> {
            all.iter()
                .zip(&classes)
                .filter(|(_, c)| f(c))
                .map(|(p, _)| p.clone())
                .collect()
        };
        let rasters = pick(|c| c.is_raster);
        let filterbases = pick(|c| c.is_filterbase);
        let filters = pick(|c| c.is_filter);

        for (p, class) in all.iter().zip(&classes) {
            let up = up_closure(p);
            let cap = cap_closure(p);
            let mut broken: Vec<&str> = Vec::new();
            let mut check = |ok: bool, name: &'static str| {
                if !ok {
                    broken.push(name);
                }
            };
            check(p.is_subcollection_of(&up), "P ⊆ P↑");
            check(p.is_subcollection_of(&cap), "P ⊆ P∩");
            check(up_closure(&up) == up, "P↑↑ = P↑");
            check(cap_closure(&cap) == cap, "P∩∩ = P∩");
            check(cap_closure(&up) == up_closure(&cap), "P↑∩ = P∩↑");
            report.case(format!("formulas points={n}"));

            if satisfies_f0(p)? {
                let filter = generated_filter(p)?;
                check(class.is_raster == (*p == up), "raster iff P = P↑");
                check(
                    class.is_filterbase == finer(p, &cap),
                    "filterbase iff P ⪯ P∩",
                );
                check(class.is_filter == (*p == filter), "filter iff P = P∩↑");
                check(is_least_containing(&up, p, &rasters), "P↑ smallest raster");
                check(
                    is_least_containing(&cap, p, &filterbases),
                    "P∩ smallest filterbase",
                );
                check(
                    is_least_containing(&filter, p, &filters),
                    "P↑∩ smallest filter",
                );
                if class.is_raster {
                    check(
                        is_least_containing(&cap, p, &filters),
                        "raster: P∩ smallest filter",
                    );
                }
                if class.is_filterbase {
                    check(
                        is_least_containing(&up, p, &filters),
                        "filterbase: P↑ smallest filter",
                    );
                }
                report.case(format!("characterizations points={n}"));
            }
            if !broken.is_empty() {
                report.fail(json!({ "collection": collection_json(p), "broken": broken }));
            }
        }
    }
    Ok(())
}

fn ultrafilters(report: &mut SuiteReport) -> Result<()> {
    for n in 1..=report.max_points {
        let filters = collections(n, Some(CollectionKind::Filter))?;
        let mut maximal = filters.clone();
        maximal.retain(|f| !filters.iter().any(|g| g != f && f.is_subcollection_of(g)));
        for p in collections(n, None)? {
            let three = is_ultrafilter(&p);
            let complement = is_ultrafilter_by_complement(&p);
            let max = maximal.contains(&p);
            let bare = every_three_partition_has_one_member(&p);
            report.case(format!("points={n}"));
            if three != complement || three != max || three != bare {
                report.fail(json!({
                    "collection": collection_json(&p),
                    "three_partition": three,
                    "complement": complement,
                    "maximal_filter": max,
                    "three_partition_without_filter_check": bare,
                }));
            }
        }
    }
    Ok(())
}

fn spaces_up_to(max: usize, class: SpaceClass) -> Result<Vec<CenteredSpace>> {
    if max > SPACE_ENUM_MAX_POINTS {
        return Err(Error::CapExceeded {
            what: "space enumeration universe size",
            requested: max as u64,
            limit: SPACE_ENUM_MAX_POINTS as u64,
        });
    }
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_spaces(universe(n)?, class)?);
    }
    Ok(out)
}

fn reflections(report: &mut SuiteReport) -> Result<()> {
    let max = report.max_points;
    for (from, into) in REFLECTIONS {
        let probes = spaces_up_to(max, into)?;
        let bucket = format!("reflect {from}->{into}");
        let mut refused = 0u64;
        for s in spaces_up_to(max, from)? {
            match reflect(&s, from, into) {
                Ok(r) => {
                    let verdict = verify_reflection(&s, &r, into, &probes)?;
                    report.case(bucket.clone());
                    if !verdict.holds() {
                        report.fail(json!({
                            "arrow": bucket, "space": space_json(&s),
                            "result": space_json(&r), "verdict": verdict,
                        }));
                    }
                }
                Err(Error::NoReflection { .. }) => refused += 1,
                Err(e) => return Err(e),
            }
        }
        if refused > 0 {
            report.notes.push(format!(
                "{bucket}: {refused} spaces with an empty collection have no reflection and were refused"
            ));
        }
    }
    for (from, into) in COREFLECTIONS {
        let probes = spaces_up_to(max, into)?;
        let bucket = format!("coreflect {from}->{into}");
        for s in spaces_up_to(max, from)? {
            let c = coreflect(&s, from, into)?;
            let verdict = verify_coreflection(&s, &c, into, &probes)?;
            report.case(bucket.clone());
            if !verdict.holds() {
                report.fail(json!({
                    "arrow": bucket, "space": space_json(&s),
                    "result": space_json(&c), "verdict": verdict,
                }));
            }
        }
    }
    Ok(())
}

/// The finest structure of a category on `x`.
fn finest(x: Universe, class: SpaceClass) -> CenteredSpace {
    match class {
        SpaceClass::Centered | SpaceClass::Filterbase => CenteredSpace::discrete(x),
        _ => CenteredSpace::discrete_topology(x),
    }
}

fn initial_structures(report: &mut SuiteReport) -> Result<()> {
    let max = report.max_points;
    for class in SpaceClass::ALL {
        let probes = spaces_up_to(max, class)?;
        let mut mutations = 0u64;
        for n in 1..=max {
            let apex = universe(n)?;
            let legs: Vec<Leg> = probes
                .iter()
                .flat_map(|space| {
                    FunctionSpace::new(apex, space.universe()).map(move |map| Leg {
                        space: space.clone(),
                        map,
                    })
                })
                .collect();
            let mut families: Vec<Vec<Leg>> = vec![Vec::new()];
            for (i, a) in legs.iter().enumerate() {
                families.push(vec![a.clone()]);
                for b in &legs[i..] {
                    families.push(vec![a.clone(), b.clone()]);
                }
            }
            for family in families {
                let cone = Cone::new(apex, family)?;
                let init = initial_structure(&cone, class)?;
                let verdict = verify_initial(&cone, &init, class, &probes)?;
                report.case(format!("{class} apex={n}"));
                if !verdict.holds() {
                    report.fail(json!({
                        "category": class, "apex": n, "legs": cone_json(&cone),
                        "candidate": space_json(&init), "verdict": verdict,
                    }));
                }
                let mutated = finest(apex, class);
                if !fiber_compare(&init, &mutated)?.leq {
                    mutations += 1;
                    let verdict = verify_initial(&cone, &mutated, class, &probes)?;
                    if verdict.holds() {
                        report.fail(json!({
                            "category": class, "apex": n, "legs": cone_json(&cone),
                            "mutated_candidate_accepted": space_json(&mutated),
                        }));
                    }
                }
            }
        }
        report
            .breakdown
            .insert(format!("{class} mutations"), mutations);
        if mutations == 0 {
            report.fail(
                json!({ "category": class, "error": "no strictly finer mutation was exercised" }),
            );
        }
    }
    Ok(())
}

fn cone_json(cone: &Cone) -> Value {
    Value::Array(
        cone.legs()
            .iter()
            .map(|leg| json!({ "space": space_json(&leg.space), "map": leg.map }))
            .collect(),
    )
}

fn amnesticity(report: &mut SuiteReport) -> Result<()> {
    // mutual refinement forces equality for rasters and for filters
    for n in 1..=report.max_points {
        for kind in [CollectionKind::Raster, CollectionKind::Filter] {
            let family = collections(n, Some(kind))?;
            for (i, p1) in family.iter().enumerate() {
                for p2 in &family[i..] {
                    report.case(format!("{kind:?} pairs points={n}"));
                    if finer(p1, p2) && finer(p2, p1) && p1 != p2 {
                        report.fail(json!({
                            "kind": format!("{kind:?}"),
                            "p1": collection_json(p1), "p2": collection_json(p2),
                        }));
                    }
                }
            }
        }
    }

    let x = universe(2)?;
    for class in SpaceClass::ALL {
        let fiber = enumerate_spaces(x, class)?;
        let mut unequal_equivalent = 0u64;
        for (i, s1) in fiber.iter().enumerate() {
            for s2 in &fiber[i + 1..] {
                if fiber_compare(s1, s2)?.is_equivalent() {
                    unequal_equivalent += 1;
                }
            }
        }
        report.breakdown.insert(
            format!("{class} fiber unequal equivalent pairs"),
            unequal_equivalent,
        );
        let amnestic = matches!(
            class,
            SpaceClass::Raster | SpaceClass::PreTop | SpaceClass::Top
        );
        if amnestic != (unequal_equivalent == 0) {
            report.fail(json!({
                "fiber": class, "points": 2,
                "unequal_equivalent_pairs": unequal_equivalent,
                "expected_amnestic": amnestic,
            }));
        }
    }

    // both sides of each non-amnestic category against its canonical form
    for (source, target) in [
        (SpaceClass::Filterbase, SpaceClass::PreTop),
        (SpaceClass::Centered, SpaceClass::Raster),
    ] {
        let fiber: Vec<CenteredSpace> = enumerate_spaces(x, source)?
            .into_iter()
            .filter(|s| s.structure().iter().all(|p| !p.is_empty()))
            .collect();
        let reps: Vec<CenteredSpace> = fiber
            .iter()
            .map(|s| amnestic_representative(s, target))
            .collect::<Result<_>>()?;
        for (s, rep) in fiber.iter().zip(&reps) {
            report.case(format!("{source}->{target} representatives"));
            let up = s.map_points(up_closure);
            let ok = target.contains(rep)
                && amnestic_representative(rep, target)? == *rep
                && fiber_compare(s, rep)?.is_equivalent()
                && fiber_compare(s, &up)?.is_equivalent();
            if !ok {
                report.fail(json!({ "space": space_json(s), "representative": space_json(rep) }));
            }
        }
        for i in 0..fiber.len() {
            for j in i + 1..fiber.len() {
                if fiber_compare(&fiber[i], &fiber[j])?.is_equivalent() && reps[i] != reps[j] {
                    report.fail(json!({
                        "s1": space_json(&fiber[i]), "s2": space_json(&fiber[j]),
                        "error": "equivalent spaces with different representatives",
                    }));
                }
            }
        }
    }
    Ok(())
}

fn convergence_germs(report: &mut SuiteReport) -> Result<()> {
    // centering ⟺ constant sequences converge to their value, over all
    // assignments including non-centered ones
    for n in 1..=2usize.min(report.max_points) {
        let x = universe(n)?;
        for s in enumerate_raw_structures(x)? {
            let mut all_converge = true;
            for p in x.points() {
                let seq = EventuallyPeriodicSequence::constant(x, p)?;
                all_converge &= converges(&s, &seq, p)?;
            }
            report.case(format!("constant sequences points={n}"));
            if validate_space(&s).is_ok() != all_converge {
                report.fail(
                    json!({ "space": space_json(&s), "constant_sequences_converge": all_converge }),
                );
            }
        }
    }

    let colors = require_colors(report, 2)?;
    let target = CenteredSpace::discrete(colors);
    let cap = FunctionCap::default();
    let n = report.max_points.min(SPACE_ENUM_MAX_POINTS);
    let x = universe(n)?;
    for s in enumerate_spaces(x, SpaceClass::Centered)? {
        for p in x.points() {
            let base = classify_collection(s.nu(p))
                .map(|c| c.is_filterbase)
                .unwrap_or(false);
            report.case(format!("germs points={n}"));
            let centered = centered_functions_at(&s, p, &target, cap)?;
            let equivalence = !s.nu(p).is_empty()
                && analyze_functions(s.nu(p), RelationMode::Weak, &centered)?
                    .is_nontrivial_equivalence();
            if base != equivalence {
                report.fail(json!({
                    "space": space_json(&s), "point": p, "filterbase": base,
                    "nontrivial_equivalence_on_centered_functions": equivalence,
                }));
            }
            if !base {
                if germ_partition(&s, p, &target, cap) != Err(Error::NotFilterbase { point: p }) {
                    report.fail(json!({ "space": space_json(&s), "point": p, "error": "germ request not refused" }));
                }
                continue;
            }
            let classes = germ_partition(&s, p, &target, cap)?;
            let mut members: Vec<&FiniteFunction> = classes.iter().flatten().collect();
            members.sort();
            let total: usize = classes.iter().map(Vec::len).sum();
            let mut ok = total == centered.len() && members.iter().copied().eq(centered.iter());
            for class in &classes {
                ok &= germ_class(&s, p, &class[0], &target, cap)? == *class;
            }
            if !ok {
                report.fail(json!({ "space": space_json(&s), "point": p, "error": "germ classes do not partition C_x" }));
            }
        }
    }
    Ok(())
}

/// Results of relating `ν(x)` being a filterbase to the weak relation on a
/// chosen function set, across every space on a universe.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GermExperiment {
    pub points: usize,
    pub colors: usize,
    pub function_set: String,
    pub cases: u64,
    /// `ν(x)` a filterbase, relation not a nontrivial equivalence.
    pub filterbase_but_not_equivalence: u64,
    /// Relation a nontrivial equivalence, `ν(x)` not a filterbase.
    pub equivalence_but_not_filterbase: u64,
    pub first_mismatch: Option<Value>,
}

/// Which functions the weak relation is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionSet {
    /// Every function.
    All,
    /// Functions centered at the point.
    CenteredAt,
    /// Functions centered at every point.
    Everywhere,
}

impl FromStr for FunctionSet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(FunctionSet::All),
            "centered-at" => Ok(FunctionSet::CenteredAt),
            "everywhere" => Ok(FunctionSet::Everywhere),
            other => Err(format!(
                "unknown function set `{other}` (expected all, centered-at or everywhere)"
            )),
        }
    }
}

/// Compares "`ν(x)` is a filterbase" with "the weak `ν(x)` relation on the
/// chosen functions into the discrete space on `colors` points is a nontrivial
/// equivalence", for every space on `points` points and every `x`.
///
/// This records what happens; no outcome is asserted.
pub fn germ_experiment(points: usize, colors: usize, set: FunctionSet) -> Result<GermExperiment> {
    let x = universe(points)?;
    let y = universe(colors)?;
    let target = CenteredSpace::discrete(y);
    let all = all_functions(x, y, FunctionCap::default())?;
    let mut out = GermExperiment {
        points,
        colors,
        function_set: format!("{set:?}"),
        ..Default::default()
    };
    for s in enumerate_spaces(x, SpaceClass::Centered)? {
        let everywhere: Vec<FiniteFunction> = match set {
            FunctionSet::Everywhere => all
                .iter()
                .filter(|f| is_centered(f, &s, &target).unwrap_or(false))
                .cloned()
                .collect(),
            _ => Vec::new(),
        };
        for p in x.points() {
            let functions = match set {
                FunctionSet::All => all.clone(),
                FunctionSet::CenteredAt => {
                    centered_functions_at(&s, p, &target, FunctionCap::default())?
                }
                FunctionSet::Everywhere => everywhere.clone(),
            };
            let base = classify_collection(s.nu(p))
                .map(|c| c.is_filterbase)
                .unwrap_or(false);
            let equivalence = !s.nu(p).is_empty()
                && analyze_functions(s.nu(p), RelationMode::Weak, &functions)?
                    .is_nontrivial_equivalence();
            out.cases += 1;
            if base != equivalence {
                if base {
                    out.filterbase_but_not_equivalence += 1;
                } else {
                    out.equivalence_but_not_filterbase += 1;
                }
                if out.first_mismatch.is_none() {
                    out.first_mismatch = Some(json!({ "space": space_json(&s), "point": p }));
                }
            }
        }
    }
    Ok(out)
}

/// Re-serializes a collection failure entry for replay.
pub fn failure_collection(failure: &Value) -> Option<SubsetCollection> {
    let c = failure.get("collection")?;
    let text = serde_json::to_string(c).ok()?;
    CollectionDocument::parse(&text).ok()?.to_collection().ok()
}
