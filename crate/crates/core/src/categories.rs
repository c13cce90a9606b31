//! The five categories of centered spaces as structure classes over a fixed
//! carrier: initial structures, identity-carried reflections and
//! coreflections, the fiber preorder, and amnestic canonicalization.
//!
//! Universal properties are checked by brute force: every probe space and
//! every function between tiny universes is tried.

use serde::Serialize;

use crate::coincidence::{FiniteFunction, FunctionSpace};
use crate::error::{Error, Result};
use crate::setalgebra::{cap_closure, up_closure, SubsetCollection, Universe};
use crate::spaces::{
    first_uncentered_point, is_centered, neighborhood_space, open_sets, CenteredSpace, SpaceClass,
};

/// Universes larger than this are refused by the `verify_*` checks.
pub const VERIFY_MAX_POINTS: usize = 3;

/// Arrows `(from, into)` along which [`reflect`] is defined.
pub const REFLECTIONS: [(SpaceClass, SpaceClass); 3] = [
    (SpaceClass::PreTop, SpaceClass::Top),
    (SpaceClass::Filterbase, SpaceClass::PreTop),
    (SpaceClass::Centered, SpaceClass::Raster),
];

/// Arrows `(from, into)` along which [`coreflect`] is defined.
pub const COREFLECTIONS: [(SpaceClass, SpaceClass); 4] = [
    (SpaceClass::Centered, SpaceClass::Filterbase),
    (SpaceClass::Raster, SpaceClass::PreTop),
    (SpaceClass::Filterbase, SpaceClass::PreTop),
    (SpaceClass::Centered, SpaceClass::Raster),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub space: CenteredSpace,
    pub map: FiniteFunction,
}

/// A family of maps out of one carrier into structured spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    apex: Universe,
    legs: Vec<Leg>,
}

impl Cone {
    pub fn new(apex: Universe, legs: Vec<Leg>) -> Result<Self> {
        for leg in &legs {
            if leg.map.domain() != apex {
                return Err(Error::UniverseMismatch {
                    expected: apex.size(),
                    found: leg.map.domain().size(),
                });
            }
            if leg.map.codomain() != leg.space.universe() {
                return Err(Error::UniverseMismatch {
                    expected: leg.space.universe().size(),
                    found: leg.map.codomain().size(),
                });
            }
        }
        Ok(Cone { apex, legs })
    }

    pub fn apex(&self) -> Universe {
        self.apex
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// `{f_i⁻¹(N) | N ∈ ν_i(f_i(x)), i ∈ I}`.
    pub fn preimages_at(&self, x: usize) -> SubsetCollection {
        let members = self.legs.iter().flat_map(|leg| {
            leg.space
                .nu(leg.map.apply(x))
                .iter()
                .map(|&n| leg.map.preimage(n))
        });
        SubsetCollection::new(self.apex, members).expect("preimages lie in the apex")
    }
}

/// The coarsest structure in `category` making every leg a morphism.
///
/// An empty cone gives the coarsest object of the fiber: empty collections in
/// `Centered`, `ν(x) = {X}` elsewhere.
pub fn initial_structure(cone: &Cone, category: SpaceClass) -> Result<CenteredSpace> {
    for (i, leg) in cone.legs.iter().enumerate() {
        if !category.contains(&leg.space) {
            return Err(Error::LegOutsideCategory {
                leg: i,
                class: category,
            });
        }
    }
    let apex = cone.apex;
    if cone.legs.is_empty() {
        return Ok(match category {
            SpaceClass::Centered => {
                CenteredSpace::new(apex, vec![SubsetCollection::empty(apex); apex.size()])?
            }
            _ => CenteredSpace::indiscrete(apex),
        });
    }
    let nu = apex
        .points()
        .map(|x| {
            let raw = cone.preimages_at(x);
            match category {
                SpaceClass::Centered => raw,
                SpaceClass::Filterbase => cap_closure(&raw),
                SpaceClass::Raster => up_closure(&raw),
                SpaceClass::PreTop | SpaceClass::Top => up_closure(&cap_closure(&raw)),
            }
        })
        .collect();
    CenteredSpace::new(apex, nu)
}

/// Why a universal property failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// The candidate is not an object of the category.
    NotInCategory,
    /// A leg is not a morphism out of the candidate.
    LegNotMorphism { leg: usize, point: usize },
    /// The identity carrier map is not a morphism in the required direction.
    IdentityNotMorphism { point: usize },
    /// For a probe space and a map, being a morphism into the candidate
    /// disagrees with every composite being a morphism.
    MorphismMismatch {
        probe: usize,
        map: FiniteFunction,
        into_candidate: bool,
    },
    /// A morphism that does not factor through the identity carrier map.
    NonFactoring { probe: usize, map: FiniteFunction },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Universality {
    Holds,
    Fails(Obstruction),
}

impl Universality {
    pub fn holds(&self) -> bool {
        matches!(self, Universality::Holds)
    }
}

fn check_scale(universe: Universe) -> Result<()> {
    if universe.size() > VERIFY_MAX_POINTS {
        return Err(Error::CapExceeded {
            what: "verification universe size",
            requested: universe.size() as u64,
            limit: VERIFY_MAX_POINTS as u64,
        });
    }
    Ok(())
}

fn check_probes(probes: &[CenteredSpace], category: SpaceClass) -> Result<()> {
    for z in probes {
        check_scale(z.universe())?;
        if !category.contains(z) {
            return Err(Error::NotInCategory { class: category });
        }
    }
    Ok(())
}

/// Checks that `candidate` is the initial structure of `cone` in `category`:
/// every leg is a morphism out of it, and for every probe `Z` and every
/// function `g: Z → X`, `g` is a morphism into the candidate exactly when
/// every composite `f_i ∘ g` is a morphism.
pub fn verify_initial(
    cone: &Cone,
    candidate: &CenteredSpace,
    category: SpaceClass,
    probes: &[CenteredSpace],
) -> Result<Universality> {
    check_scale(cone.apex)?;
    if candidate.universe() != cone.apex {
        return Err(Error::UniverseMismatch {
            expected: cone.apex.size(),
            found: candidate.universe().size(),
        });
    }
    for (i, leg) in cone.legs.iter().enumerate() {
        check_scale(leg.space.universe())?;
        if !category.contains(&leg.space) {
            return Err(Error::LegOutsideCategory {
                leg: i,
                class: category,
            });
        }
    }
    check_probes(probes, category)?;

    if !category.contains(candidate) {
        return Ok(Universality::Fails(Obstruction::NotInCategory));
    }
    for (i, leg) in cone.legs.iter().enumerate() {
        if let Some(point) = first_uncentered_point(&leg.map, candidate, &leg.space)? {
            return Ok(Universality::Fails(Obstruction::LegNotMorphism {
                leg: i,
                point,
            }));
        }
    }
    for (k, z) in probes.iter().enumerate() {
        for g in FunctionSpace::new(z.universe(), cone.apex) {
            let into_candidate = is_centered(&g, z, candidate)?;
            let mut via_legs = true;
            for leg in &cone.legs {
                if !is_centered(&leg.map.compose(&g)?, z, &leg.space)? {
                    via_legs = false;
                    break;
                }
            }
            if into_candidate != via_legs {
                return Ok(Universality::Fails(Obstruction::MorphismMismatch {
                    probe: k,
                    map: g,
                    into_candidate,
                }));
            }
        }
    }
    Ok(Universality::Holds)
}

fn require_class(s: &CenteredSpace, class: SpaceClass) -> Result<()> {
    if class.contains(s) {
        Ok(())
    } else {
        Err(Error::NotInCategory { class })
    }
}

fn with_empty_as_top(
    s: &CenteredSpace,
    op: impl Fn(&SubsetCollection) -> SubsetCollection,
) -> CenteredSpace {
    let universe = s.universe();
    s.map_points(|p| {
        if p.is_empty() {
            SubsetCollection::singleton(universe, universe.full()).expect("full set is valid")
        } else {
            op(p)
        }
    })
}

/// The reflection of `s` along a supported arrow `from → into`; the identity
/// on the carrier is the reflection morphism `s → result`.
///
/// * `PreTop → Top`: open sets `τ = {U | ∀x ∈ U, U ∈ ν(x)}`, then the
///   neighborhood filters of `τ`.
/// * `Filterbase → PreTop` and `Centered → Raster`: `ν↑` pointwise.
///
/// A point with an empty collection admits no raster reflection, since no
/// nonempty collection is coarser than the empty one.
pub fn reflect(s: &CenteredSpace, from: SpaceClass, into: SpaceClass) -> Result<CenteredSpace> {
    if !REFLECTIONS.contains(&(from, into)) {
        return Err(Error::UnsupportedArrow {
            kind: "reflection",
            from,
            into,
        });
    }
    require_class(s, from)?;
    match into {
        SpaceClass::Top => Ok(neighborhood_space(&open_sets(s))),
        _ => {
            if let Some(point) = s.structure().iter().position(|p| p.is_empty()) {
                return Err(Error::NoReflection { point, into });
            }
            Ok(s.map_points(up_closure))
        }
    }
}

/// The coreflection of `s` along a supported arrow `from → into`; the
/// identity on the carrier is the coreflection morphism `result → s`.
///
/// * `Centered → Filterbase` and `Raster → PreTop`: `ν∩` pointwise.
/// * `Filterbase → PreTop` and `Centered → Raster`: `ν↑` pointwise.
///
/// Empty collections become `{X}`, the coarsest admissible collection.
pub fn coreflect(s: &CenteredSpace, from: SpaceClass, into: SpaceClass) -> Result<CenteredSpace> {
    if !COREFLECTIONS.contains(&(from, into)) {
        return Err(Error::UnsupportedArrow {
            kind: "coreflection",
            from,
            into,
        });
    }
    require_class(s, from)?;
    Ok(match (from, into) {
        (SpaceClass::Centered, SpaceClass::Filterbase)
        | (SpaceClass::Raster, SpaceClass::PreTop) => with_empty_as_top(s, cap_closure),
        _ => with_empty_as_top(s, up_closure),
    })
}

/// Checks the reflection law for `reflected` against probes in `into`: the
/// identity `s → reflected` is a morphism, and every morphism from `s` to a
/// probe is also a morphism from `reflected`.
pub fn verify_reflection(
    s: &CenteredSpace,
    reflected: &CenteredSpace,
    into: SpaceClass,
    probes: &[CenteredSpace],
) -> Result<Universality> {
    check_pair_scale(s, reflected)?;
    check_probes(probes, into)?;
    if !into.contains(reflected) {
        return Ok(Universality::Fails(Obstruction::NotInCategory));
    }
    let id = FiniteFunction::identity(s.universe());
    if let Some(point) = first_uncentered_point(&id, s, reflected)? {
        return Ok(Universality::Fails(Obstruction::IdentityNotMorphism {
            point,
        }));
    }
    for (k, t) in probes.iter().enumerate() {
        for f in FunctionSpace::new(s.universe(), t.universe()) {
            if is_centered(&f, s, t)? && !is_centered(&f, reflected, t)? {
                return Ok(Universality::Fails(Obstruction::NonFactoring {
                    probe: k,
                    map: f,
                }));
            }
        }
    }
    Ok(Universality::Holds)
}

/// Dual of [`verify_reflection`]: the identity `coreflected → s` is a
/// morphism, and every morphism from a probe into `s` is also a morphism
/// into `coreflected`.
pub fn verify_coreflection(
    s: &CenteredSpace,
    coreflected: &CenteredSpace,
    into: SpaceClass,
    probes: &[CenteredSpace],
) -> Result<Universality> {
    check_pair_scale(s, coreflected)?;
    check_probes(probes, into)?;
    if !into.contains(coreflected) {
        return Ok(Universality::Fails(Obstruction::NotInCategory));
    }
    let id = FiniteFunction::identity(s.universe());
    if let Some(point) = first_uncentered_point(&id, coreflected, s)? {
        return Ok(Universality::Fails(Obstruction::IdentityNotMorphism {
            point,
        }));
    }
    for (k, z) in probes.iter().enumerate() {
        for g in FunctionSpace::new(z.universe(), s.universe()) {
            if is_centered(&g, z, s)? && !is_centered(&g, z, coreflected)? {
                return Ok(Universality::Fails(Obstruction::NonFactoring {
                    probe: k,
                    map: g,
                }));
            }
        }
    }
    Ok(Universality::Holds)
}

fn check_pair_scale(a: &CenteredSpace, b: &CenteredSpace) -> Result<()> {
    check_scale(a.universe())?;
    if a.universe() != b.universe() {
        return Err(Error::UniverseMismatch {
            expected: a.universe().size(),
            found: b.universe().size(),
        });
    }
    Ok(())
}

/// Position of two structures on one carrier in the fiber preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberComparison {
    /// `id: s1 → s2` is a morphism.
    pub leq: bool,
    /// `id: s2 → s1` is a morphism.
    pub geq: bool,
}

impl FiberComparison {
    /// Mutually comparable, i.e. isomorphic through the identity.
    pub fn is_equivalent(&self) -> bool {
        self.leq && self.geq
    }
}

pub fn fiber_compare(s1: &CenteredSpace, s2: &CenteredSpace) -> Result<FiberComparison> {
    if s1.universe() != s2.universe() {
        return Err(Error::UniverseMismatch {
            expected: s1.universe().size(),
            found: s2.universe().size(),
        });
    }
    let id = FiniteFunction::identity(s1.universe());
    Ok(FiberComparison {
        leq: is_centered(&id, s1, s2)?,
        geq: is_centered(&id, s2, s1)?,
    })
}

/// The canonical member of `s`'s mutual-comparability class: `ν↑` pointwise.
/// Supported for `Filterbase → PreTop` and `Centered → Raster`.
pub fn amnestic_representative(s: &CenteredSpace, target: SpaceClass) -> Result<CenteredSpace> {
    let from = match target {
        SpaceClass::PreTop => SpaceClass::Filterbase,
        SpaceClass::Raster => SpaceClass::Centered,
        other => {
            return Err(Error::UnsupportedArrow {
                kind: "amnestic modification",
                from: other,
                into: other,
            })
        }
    };
    require_class(s, from)?;
    if let Some(point) = s.structure().iter().position(|p| p.is_empty()) {
        return Err(Error::NoReflection {
            point,
            into: target,
        });
    }
    Ok(s.map_points(up_closure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalgebra::{principal_filter, SubsetMask};
    use crate::spaces::enumerate_spaces;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn coll(n: usize, sets: &[&[usize]]) -> SubsetCollection {
        SubsetCollection::from_point_sets(u(n), sets).unwrap()
    }

    fn probes(class: SpaceClass, max: usize) -> Vec<CenteredSpace> {
        (1..=max)
            .flat_map(|n| enumerate_spaces(u(n), class).unwrap())
            .collect()
    }

    #[test]
    fn identity_cone_recovers_space() {
        for class in SpaceClass::ALL {
            for s in enumerate_spaces(u(2), class).unwrap() {
                if class != SpaceClass::Centered && s.structure().iter().any(|p| p.is_empty()) {
                    continue;
                }
                let cone = Cone::new(
                    u(2),
                    vec![Leg {
                        space: s.clone(),
                        map: FiniteFunction::identity(u(2)),
                    }],
                )
                .unwrap();
                assert_eq!(initial_structure(&cone, class).unwrap(), s, "{class}");
            }
        }
    }

    #[test]
    fn indiscrete_legs_give_indiscrete_structure() {
        let legs = (0..2)
            .map(|i| Leg {
                space: CenteredSpace::indiscrete(u(2)),
                map: FiniteFunction::new(u(3), u(2), vec![i, 1 - i, 0]).unwrap(),
            })
            .collect();
        let cone = Cone::new(u(3), legs).unwrap();
        assert_eq!(
            initial_structure(&cone, SpaceClass::PreTop).unwrap(),
            CenteredSpace::indiscrete(u(3))
        );
    }

    #[test]
    fn product_cone_is_initial() {
        // 4 points as pairs (a, b) with projections onto two discrete 2-point topologies
        let x = u(2);
        let d = CenteredSpace::discrete_topology(x);
        let pr1 = FiniteFunction::new(x, x, vec![0, 1]).unwrap();
        let pr2 = FiniteFunction::new(x, x, vec![1, 0]).unwrap();
        let cone = Cone::new(
            x,
            vec![
                Leg {
                    space: d.clone(),
                    map: pr1,
                },
                Leg {
                    space: d.clone(),
                    map: pr2,
                },
            ],
        )
        .unwrap();
        let init = initial_structure(&cone, SpaceClass::PreTop).unwrap();
        assert_eq!(init, d);
        let probes = probes(SpaceClass::PreTop, 2);
        assert!(verify_initial(&cone, &init, SpaceClass::PreTop, &probes)
            .unwrap()
            .holds());
    }

    #[test]
    fn empty_cone() {
        let cone = Cone::new(u(2), vec![]).unwrap();
        let centered = initial_structure(&cone, SpaceClass::Centered).unwrap();
        assert!(centered.structure().iter().all(|p| p.is_empty()));
        for class in SpaceClass::ALL {
            let init = initial_structure(&cone, class).unwrap();
            if class != SpaceClass::Centered {
                assert_eq!(init, CenteredSpace::indiscrete(u(2)));
            }
            assert!(verify_initial(&cone, &init, class, &probes(class, 2))
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn finer_candidate_is_not_initial() {
        let cone = Cone::new(
            u(2),
            vec![Leg {
                space: CenteredSpace::indiscrete(u(1)),
                map: FiniteFunction::constant(u(2), u(1), 0).unwrap(),
            }],
        )
        .unwrap();
        let candidate = CenteredSpace::discrete_topology(u(2));
        let verdict = verify_initial(
            &cone,
            &candidate,
            SpaceClass::PreTop,
            &probes(SpaceClass::PreTop, 2),
        )
        .unwrap();
        assert!(matches!(
            verdict,
            Universality::Fails(Obstruction::MorphismMismatch {
                into_candidate: false,
                ..
            })
        ));
    }

    #[test]
    fn leg_outside_category_rejected() {
        let cone = Cone::new(
            u(2),
            vec![Leg {
                space: CenteredSpace::discrete(u(2)),
                map: FiniteFunction::identity(u(2)),
            }],
        )
        .unwrap();
        assert_eq!(
            initial_structure(&cone, SpaceClass::Raster),
            Err(Error::LegOutsideCategory {
                leg: 0,
                class: SpaceClass::Raster
            })
        );
    }

    #[test]
    fn reflection_examples() {
        let d = CenteredSpace::discrete(u(2));
        let r = reflect(&d, SpaceClass::Filterbase, SpaceClass::PreTop).unwrap();
        assert_eq!(r, CenteredSpace::discrete_topology(u(2)));
        assert_eq!(
            reflect(&r, SpaceClass::Filterbase, SpaceClass::PreTop).unwrap(),
            r
        );
        assert!(reflect(&d, SpaceClass::Centered, SpaceClass::Top).is_err());

        // ν(0) = ↑{0,1}, ν(1) = ↑{1,2}, ν(2) = ↑{2}: only 0's filter is defective
        let x = u(3);
        let s = CenteredSpace::new(
            x,
            vec![
                principal_filter(SubsetMask::from_points(x, &[0, 1]).unwrap(), x).unwrap(),
                principal_filter(SubsetMask::from_points(x, &[1, 2]).unwrap(), x).unwrap(),
                principal_filter(x.singleton(2).unwrap(), x).unwrap(),
            ],
        )
        .unwrap();
        let top = reflect(&s, SpaceClass::PreTop, SpaceClass::Top).unwrap();
        assert_eq!(top.nu(0), &coll(3, &[&[0, 1, 2]]));
        assert_eq!(top.nu(1), s.nu(1));
        assert_eq!(top.nu(2), s.nu(2));
        assert!(SpaceClass::Top.contains(&top));
    }

    #[test]
    fn empty_point_has_no_raster_reflection() {
        let s = CenteredSpace::new(u(2), vec![coll(2, &[&[0]]), coll(2, &[])]).unwrap();
        assert_eq!(
            reflect(&s, SpaceClass::Centered, SpaceClass::Raster),
            Err(Error::NoReflection {
                point: 1,
                into: SpaceClass::Raster
            })
        );
        let co = coreflect(&s, SpaceClass::Centered, SpaceClass::Raster).unwrap();
        assert_eq!(co.nu(1), &coll(2, &[&[0, 1]]));
    }

    #[test]
    fn coreflection_examples() {
        let x = u(3);
        let s = CenteredSpace::new(
            x,
            vec![
                coll(3, &[&[0, 1], &[0, 2]]),
                coll(3, &[&[1]]),
                coll(3, &[&[2]]),
            ],
        )
        .unwrap();
        let c = coreflect(&s, SpaceClass::Centered, SpaceClass::Filterbase).unwrap();
        assert_eq!(c.nu(0), &coll(3, &[&[0], &[0, 1], &[0, 2]]));
        let raster = CenteredSpace::new(
            x,
            vec![
                coll(3, &[&[0, 1], &[0, 2], &[0, 1, 2]]),
                principal_filter(x.singleton(1).unwrap(), x).unwrap(),
                principal_filter(x.singleton(2).unwrap(), x).unwrap(),
            ],
        )
        .unwrap();
        let pre = coreflect(&raster, SpaceClass::Raster, SpaceClass::PreTop).unwrap();
        assert_eq!(
            pre.nu(0),
            &principal_filter(x.singleton(0).unwrap(), x).unwrap()
        );
        assert_eq!(
            coreflect(&pre, SpaceClass::Raster, SpaceClass::PreTop).unwrap(),
            pre
        );
    }

    #[test]
    fn wrong_reflection_is_caught() {
        // using ν∩ where ν↑ is required leaves a non-filter behind
        let probes = probes(SpaceClass::PreTop, 2);
        let s = CenteredSpace::discrete(u(2));
        let wrong = s.map_points(cap_closure);
        assert_eq!(
            verify_reflection(&s, &wrong, SpaceClass::PreTop, &probes).unwrap(),
            Universality::Fails(Obstruction::NotInCategory)
        );
        // a filter structure that is too fine: discrete topology is not the
        // reflection of the indiscrete space
        let coarse = CenteredSpace::indiscrete(u(2));
        let verdict = verify_reflection(
            &coarse,
            &CenteredSpace::discrete_topology(u(2)),
            SpaceClass::PreTop,
            &probes,
        )
        .unwrap();
        assert_eq!(
            verdict,
            Universality::Fails(Obstruction::IdentityNotMorphism { point: 0 })
        );
        // a too-coarse candidate misses the factorization
        let verdict = verify_reflection(&s, &coarse, SpaceClass::PreTop, &probes).unwrap();
        assert!(matches!(
            verdict,
            Universality::Fails(Obstruction::NonFactoring { .. })
        ));
    }

    #[test]
    fn fiber_examples() {
        let d = CenteredSpace::discrete(u(2));
        assert_eq!(
            fiber_compare(&d, &d).unwrap(),
            FiberComparison {
                leq: true,
                geq: true
            }
        );
        let up = d.map_points(up_closure);
        assert!(fiber_compare(&d, &up).unwrap().is_equivalent());
        assert_ne!(d, up);
        assert_eq!(
            fiber_compare(&d, &CenteredSpace::indiscrete(u(2))).unwrap(),
            FiberComparison {
                leq: true,
                geq: false
            }
        );
        assert!(fiber_compare(&d, &CenteredSpace::discrete(u(3))).is_err());
    }

    #[test]
    fn amnestic_examples() {
        let d = CenteredSpace::discrete(u(2));
        let rep = amnestic_representative(&d, SpaceClass::PreTop).unwrap();
        assert_eq!(rep, CenteredSpace::discrete_topology(u(2)));
        assert_eq!(
            amnestic_representative(&rep, SpaceClass::PreTop).unwrap(),
            rep
        );
        assert!(amnestic_representative(&d, SpaceClass::Top).is_err());
        let centered_only =
            CenteredSpace::new(u(2), vec![coll(2, &[&[0], &[0, 1]]), coll(2, &[])]).unwrap();
        assert!(amnestic_representative(&centered_only, SpaceClass::Raster).is_err());
    }
}
