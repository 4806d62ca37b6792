"""Registered checks. Each returns None when it passes and a counterexample description otherwise."""

import itertools

import numpy as np

from exchci.config import GAUSSIAN_TOL
from exchci.core import (
    Dyad,
    NodePermutation,
    VarSet,
    bit,
    dyad_universe,
    iter_bits,
    submasks,
    vector_universe,
)
from exchci.dist import (
    Equicorrelation,
    OrbitWeighting,
    canonical_state,
    closed_form_partial_covariance,
    condition,
    equicorrelation_ci,
    induced_model_of_table,
    is_exchangeable_table,
    marginalize,
    partial_covariance_by_inversion,
    product_table,
    table_from_orbits,
)
from exchci.exchange import (
    GraphOracle,
    RegimeTag,
    Semantics,
    SkeletonClass,
    TableOracle,
    characterization_check,
    classify_regime,
    faithfulness_report,
    is_exchangeable_model,
    node_sharing_pattern,
    orbit_closure,
    skeleton_class,
    structured_assumption_check,
)
from exchci.graphs import (
    Edge,
    EdgeKind,
    MixedGraph,
    SeparatorMode,
    complement_graph,
    complete_graph,
    coseparator,
    empty_graph,
    enumerate_separators,
    family,
    incidence_graph,
    induced_model,
    is_maximal,
    markov_equivalent,
    pair_separator,
    separates,
    separator_families,
    unshielded_collider_trisections,
)
from exchci.imodel import (
    IndependenceModel,
    Property,
    Statement,
    check_property,
    closure_with,
    dual,
    holds,
    semigraphoid_closure,
    skeleton_of_model,
)
from exchci.verify.generators import (
    random_closed_model,
    random_exchangeable_model,
    random_mixed_graph,
    random_model,
    random_network_table,
    random_undirected_graph,
    random_vector_table,
)
from exchci.verify.oracles import (
    general_triples,
    naive_semigraphoid,
    nx_bidirected_separated,
    nx_undirected_separated,
    walk_separated,
)
from exchci.verify.registry import register


def _rng(seed: int, *salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, *salt])


def _random_perm(rng: np.random.Generator, n: int) -> NodePermutation:
    return NodePermutation(tuple(int(x) + 1 for x in rng.permutation(n)))


def _arcs(g: MixedGraph) -> MixedGraph:
    return MixedGraph.build(g.ground, (Edge(*e.pair, EdgeKind.ARC) for e in g.edges))


def _pair_index(n: int, *pairs: tuple[int, int]) -> list[int]:
    ground = dyad_universe(n)
    return [ground.index(Dyad(*p)) for p in pairs]


# ---------------------------------------------------------------------------
# core
# ---------------------------------------------------------------------------


@register("action-homomorphism", "core", nmin=5)
def check_action(seed: int) -> str | None:
    rng = _rng(seed)
    for ground in (vector_universe(5), dyad_universe(4), dyad_universe(5)):
        for _ in range(25):
            p, q = _random_perm(rng, ground.n), _random_perm(rng, ground.n)
            s = int(rng.integers(0, ground.full_mask + 1))
            if ground.act(p.compose(q), s) != ground.act(p, ground.act(q, s)):
                return f"{p} after {q} on {ground.format_set(s)} disagrees with acting twice"
            for k, element in enumerate(ground.elements):
                if ground.act(p, bit(k)) != bit(ground.index(p.image(element))):
                    return f"{p} moves {element} inconsistently"
            if ground.act(p.inverse(), ground.act(p, s)) != s:
                return f"{p} is not undone by its inverse on {ground.format_set(s)}"
    return None


@register("closure-vs-naive-fixpoint", "core", nmin=4)
def check_oracle_equivalence(seed: int) -> str | None:
    """Elementary closure plus the holds() reduction equals the naive general-triple fixpoint."""
    rng = _rng(seed)
    ground = vector_universe(4)
    triples = general_triples(ground.size)
    for trial in range(100):
        m = random_model(rng, ground, int(rng.integers(1, 6)))
        closed = semigraphoid_closure(m)
        naive = naive_semigraphoid(ground.size, ((bit(u), bit(v), c) for u, v, c in m.elementary))
        for a, b, c in triples:
            if holds(closed, a, b, c) != ((a, b, c) in naive):
                return f"trial {trial}: {Statement(a, b, c).format(ground)} differs between the two closures"
    return None


@register("closure-idempotent-monotone", "core", nmin=5)
def check_closure_laws(seed: int) -> str | None:
    rng = _rng(seed)
    ground = vector_universe(5)
    rule_sets = [frozenset(r) for k in range(3) for r in itertools.combinations(sorted(
        (Property.INTERSECTION, Property.COMPOSITION, Property.UPWARD_STABILITY, Property.DOWNWARD_STABILITY)), k)]
    for trial in range(30):
        rules = rule_sets[trial % len(rule_sets)]
        small = random_model(rng, ground, int(rng.integers(1, 4)))
        large = IndependenceModel(ground, small.elementary | random_model(rng, ground, 2).elementary)
        closed = closure_with(small, rules)
        if not small.elementary <= closed.elementary:
            return f"trial {trial}: closure under {sorted(rules)} dropped statements"
        if closure_with(closed, rules) != closed:
            return f"trial {trial}: closure under {sorted(rules)} is not idempotent"
        if not closed.elementary <= closure_with(large, rules).elementary:
            return f"trial {trial}: closure under {sorted(rules)} is not monotone"
    return None


@register("general-vs-elementary-forms", "core", nmin=5)
def check_quantifier_forms(seed: int) -> str | None:
    rng = _rng(seed)
    props = (
        Property.DECOMPOSITION,
        Property.WEAK_UNION,
        Property.CONTRACTION,
        Property.INTERSECTION,
        Property.COMPOSITION,
    )
    for size in (4, 5):
        ground = vector_universe(size)
        for trial in range(10):
            m = random_closed_model(rng, ground, int(rng.integers(1, 5)))
            for p in props:
                general = check_property(m, p, general=True)
                elementary = check_property(m, p, general=False)
                if general.holds != elementary.holds:
                    return f"size {size} trial {trial}: {p.value} general={general.holds} elementary={elementary.holds}"
                for report in (general, elementary):
                    if report.witness is not None and not report.witness.recheck(m):
                        return f"size {size} trial {trial}: {p.value} witness does not recheck"
    return None


@register("stability-implies-composition-intersection", "core", nmin=5)
def check_stability_consequences(seed: int) -> str | None:
    rng = _rng(seed)
    ground = vector_universe(5)
    for trial in range(20):
        seed_model = random_model(rng, ground, int(rng.integers(1, 4)))
        upward = closure_with(seed_model, {Property.UPWARD_STABILITY})
        if not check_property(upward, Property.COMPOSITION).holds:
            return f"trial {trial}: upward-stable closure fails composition"
        downward = closure_with(seed_model, {Property.DOWNWARD_STABILITY})
        if not check_property(downward, Property.INTERSECTION).holds:
            return f"trial {trial}: downward-stable closure fails intersection"
    return None


# ---------------------------------------------------------------------------
# vector
# ---------------------------------------------------------------------------


@register("exchangeable-singleton-transitivity", "vector", sizes=(4, 5))
def check_exchangeable_transitivity(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    ground = vector_universe(n)
    for trial in range(20):
        m = random_exchangeable_model(rng, ground, int(rng.integers(1, 4)))
        report = check_property(m, Property.SINGLETON_TRANSITIVITY)
        if not report.holds:
            return f"trial {trial}: {report.witness.describe(ground)}"
    return None


@register("exchangeable-skeleton-trivial", "vector", sizes=(4, 5))
def check_vector_skeleton(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    ground = vector_universe(n)
    every = n * (n - 1) // 2
    for trial in range(20):
        m = random_exchangeable_model(rng, ground, int(rng.integers(0, 4)))
        edges = len(skeleton_of_model(m).edges)
        if edges not in (0, every):
            return f"trial {trial}: skeleton has {edges} of {every} edges"
    return None


@register("upward-iff-composition", "vector", sizes=(4, 5))
def check_upward_composition(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    ground = vector_universe(n)
    rule_sets = (
        frozenset(),
        frozenset({Property.COMPOSITION}),
        frozenset({Property.INTERSECTION}),
        frozenset({Property.UPWARD_STABILITY}),
        frozenset({Property.DOWNWARD_STABILITY}),
    )
    for trial in range(10):
        orbit = orbit_closure(random_model(rng, ground, int(rng.integers(1, 3))))
        for rules in rule_sets:
            m = closure_with(orbit, rules)
            up = check_property(m, Property.UPWARD_STABILITY).holds
            comp = check_property(m, Property.COMPOSITION).holds
            down = check_property(m, Property.DOWNWARD_STABILITY).holds
            inter = check_property(m, Property.INTERSECTION).holds
            if up != comp or down != inter:
                return (
                    f"trial {trial} rules {sorted(rules)}: upward={up} composition={comp} "
                    f"downward={down} intersection={inter}"
                )
    return None


@register("orbit-seed-closures", "vector", sizes=(4, 5))
def check_orbit_seed(seed: int, n: int) -> str | None:
    """Seed <1,2|{3}>: the orbit is closed; intersection adds every marginal and composition every full statement."""
    ground = vector_universe(n)
    orbit = orbit_closure(IndependenceModel.of(ground, [(0, 1, bit(2))]))
    expected = n * (n - 1) * (n - 2) // 2
    if len(orbit) != expected:
        return f"orbit has {len(orbit)} statements, expected {expected}"
    if semigraphoid_closure(orbit) != orbit:
        return "semi-graphoid closure of the orbit adds statements"
    with_intersection = closure_with(orbit, {Property.INTERSECTION})
    with_composition = closure_with(orbit, {Property.COMPOSITION})
    for u, v in itertools.combinations(range(n), 2):
        if not with_intersection.contains(u, v, 0):
            return f"intersection closure lacks {Statement.elementary(u, v).format(ground)}"
        rest = ground.full_mask & ~(bit(u) | bit(v))
        if not with_composition.contains(u, v, rest):
            return f"composition closure lacks {Statement.elementary(u, v, rest).format(ground)}"
    return None


@register("exchangeable-faithfulness", "vector", sizes=(4, 5))
def check_vector_faithfulness(seed: int, n: int) -> str | None:
    """With intersection and composition an exchangeable model is faithful to the empty or the complete graph."""
    rng = _rng(seed, n)
    ground = vector_universe(n)
    models = [IndependenceModel.empty(ground)]
    for _ in range(8):
        orbit = orbit_closure(random_model(rng, ground, int(rng.integers(1, 3))))
        models.append(closure_with(orbit, {Property.INTERSECTION, Property.COMPOSITION}))
    for trial, m in enumerate(models):
        for kind in (EdgeKind.LINE, EdgeKind.ARC):
            candidates = (empty_graph(ground), complete_graph(ground, kind))
            if not any(faithfulness_report(m, g).faithful for g in candidates):
                return f"model {trial} with {len(m)} statements is faithful to neither trivial {kind.value} graph"
        for semantics in Semantics:
            report = characterization_check(m, semantics)
            if not (report.all_hold and report.consistent):
                return f"model {trial}: {semantics.value} characterization disagrees with faithfulness"
    return None


EQUICORRELATION_GRID = 50


@register("equicorrelation-grid", "vector", nmin=5)
def check_equicorrelation(seed: int) -> str | None:
    """Schur complement, closed form and inversion agree on a grid over the regular interval."""
    for n in range(2, 7):
        # endpoints are singular
        grid = np.linspace(-1.0 / (n - 1), 1.0, EQUICORRELATION_GRID + 2)[1:-1]
        for rho in grid.tolist():
            e = Equicorrelation(n, rho)
            cov = e.covariance()
            for i, j in itertools.combinations(range(1, n + 1), 2):
                rest = [x for x in range(1, n + 1) if x not in (i, j)]
                for size in range(len(rest) + 1):
                    for c in itertools.combinations(rest, size):
                        independent, value = equicorrelation_ci(e, i, j, c)
                        if independent != (abs(rho) <= GAUSSIAN_TOL):
                            return f"n={n}, rho={rho!r}: {i} ⊥ {j} | {list(c)} is {independent}"
                        closed = closed_form_partial_covariance(rho, size)
                        inverted = partial_covariance_by_inversion(cov, i - 1, j - 1, [x - 1 for x in c])
                        if abs(value - closed) > 1e-12 or abs(value - inverted) > 1e-12:
                            return (
                                f"n={n}, rho={rho!r}, C={list(c)}: {value!r} vs closed form {closed!r}"
                                f" vs inversion {inverted!r}"
                            )
    return None


@register("marginal-independence", "vector", sizes=(4, 5))
def check_marginal_independence(seed: int, n: int) -> str | None:
    """Exchangeable, intersection-closed and non-empty implies every pairwise marginal independence."""
    rng = _rng(seed, n)
    ground = vector_universe(n)
    for trial in range(10):
        orbit = orbit_closure(random_model(rng, ground, int(rng.integers(1, 3))))
        m = closure_with(orbit, {Property.INTERSECTION})
        for u, v in itertools.combinations(range(n), 2):
            if not m.contains(u, v, 0):
                return f"trial {trial}: missing {Statement.elementary(u, v).format(ground)}"
    # strictly positive exchangeable tables: random orbit weightings and iid products
    tables = [random_vector_table(rng, n) for _ in range(3)]
    tables += [product_table(ground, float(rng.uniform(0.05, 0.95))) for _ in range(3)]
    for trial, t in enumerate(tables):
        if not np.all(t.probs > 0):
            return f"table {trial} is not strictly positive"
        m = induced_model_of_table(t)
        if not m:
            continue
        for u, v in itertools.combinations(range(n), 2):
            if not m.contains(u, v, 0):
                return f"table {trial}: has {len(m)} statements but misses {Statement.elementary(u, v).format(ground)}"
    return None


@register("marginal-conditional-exchangeable", "vector", sizes=(3, 4))
def check_vector_reductions(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    for trial in range(5):
        t = random_vector_table(rng, n)
        full = t.ground.full_mask
        for m in submasks(full):
            if m == full:
                continue
            if not is_exchangeable_table(marginalize(t, m)):
                return f"trial {trial}: marginal without {t.ground.format_set(m)} is not exchangeable"
            if m == 0:
                continue
            for values in itertools.product((0, 1), repeat=m.bit_count()):
                mass = float(t.probs[t.codes(m) == sum(x << k for k, x in enumerate(values))].sum())
                if mass <= 0:
                    continue
                if not is_exchangeable_table(condition(t, m, values)):
                    return f"trial {trial}: conditioning on {t.ground.format_set(m)} = {list(values)} breaks exchangeability"
    return None


@register("table-skeleton-trivial", "vector", sizes=(3, 4))
def check_table_skeleton(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    every = n * (n - 1) // 2
    for trial in range(5):
        m = induced_model_of_table(random_vector_table(rng, n))
        edges = len(skeleton_of_model(m).edges)
        if edges not in (0, every):
            return f"trial {trial}: induced skeleton has {edges} of {every} edges"
    return None


# ---------------------------------------------------------------------------
# network
# ---------------------------------------------------------------------------


@register("incidence-graph-shape", "network", nmin=4)
def check_incidence_shape(seed: int) -> str | None:
    g = incidence_graph(4)
    if g.ground.size != 6 or len(g.edges) != 12:
        return f"incidence graph of 4 nodes has {g.ground.size} vertices and {len(g.edges)} edges"
    if any(g.degree(v) != 4 for v in range(6)):
        return "incidence graph of 4 nodes is not 4-regular"
    complement = complement_graph(g)
    elements = g.ground.elements
    if len(complement.edges) != 3 or any(elements[e.u].shares_node(elements[e.v]) for e in complement.edges):
        return "complement of the incidence graph is not the three disjoint-dyad edges"
    return None


def _bounds(seps: list[VarSet], bound: int, exact: set[VarSet], at_least: bool) -> VarSet | None:
    """First separator violating the size bound, or meeting it without being one of `exact`."""
    for c in seps:
        size = c.bit_count()
        if at_least and (size < bound or (size == bound and c not in exact)):
            return c
        if not at_least and (size > bound or (size == bound and c not in exact)):
            return c
    return None


@register("incidence-separator-bounds", "network", sizes=(4, 5, 6))
def check_incidence_bounds(seed: int, n: int) -> str | None:
    g = incidence_graph(n)
    ground = g.ground
    ij, kl = _pair_index(n, (1, 2), (3, 4))
    c_ij, c_kl = pair_separator(ground, 1, 2), pair_separator(ground, 3, 4)
    seps = enumerate_separators(g, ij, kl).separators
    if c_ij not in seps:
        return f"{ground.format_set(c_ij)} does not separate 1-2 from 3-4"
    bad = _bounds(seps, 2 * (n - 2), {c_ij, c_kl}, at_least=True)
    if bad is not None:
        return f"separator {ground.format_set(bad)} breaks the size bound {2 * (n - 2)}"
    return None


@register("incidence-dual-separators", "network", sizes=(4, 5))
def check_bidirected_incidence(seed: int, n: int) -> str | None:
    h = incidence_graph(n, EdgeKind.ARC)
    ground = h.ground
    ij, kl = _pair_index(n, (1, 2), (3, 4))
    direct = enumerate_separators(h, ij, kl).separators
    via_dual = {c for u, v, c in dual(induced_model(incidence_graph(n))).elementary if (u, v) == (ij, kl)}
    if set(direct) != via_dual:
        return f"direct enumeration finds {len(direct)} separators, the dual model {len(via_dual)}"
    cd_ij, cd_kl = coseparator(ground, (1, 2)), coseparator(ground, (3, 4))
    target = cd_ij & ~bit(kl)
    if target not in direct:
        return f"{ground.format_set(target)} does not separate 1-2 from 3-4"
    bad = _bounds(direct, cd_ij.bit_count() - 1, {target, cd_kl & ~bit(ij)}, at_least=False)
    if bad is not None:
        return f"separator {ground.format_set(bad)} breaks the size bound {cd_ij.bit_count() - 1}"
    return None


@register("complement-separator-bounds", "network", sizes=(5, 6))
def check_complement_bounds(seed: int, n: int) -> str | None:
    ground = dyad_universe(n)
    ij, ik = _pair_index(n, (1, 2), (1, 3))
    undirected = complement_graph(incidence_graph(n))
    cd_ij, cd_ik = coseparator(ground, (1, 2)), coseparator(ground, (1, 3))
    seps = enumerate_separators(undirected, ij, ik).separators
    if cd_ij not in seps:
        return f"{ground.format_set(cd_ij)} does not separate 1-2 from 1-3 with lines"
    bad = _bounds(seps, cd_ij.bit_count(), {cd_ij, cd_ik}, at_least=True)
    if bad is not None:
        return f"line separator {ground.format_set(bad)} breaks the size bound {cd_ij.bit_count()}"

    bidirected = complement_graph(incidence_graph(n), EdgeKind.ARC)
    c_ij, c_ik = pair_separator(ground, 1, 2), pair_separator(ground, 1, 3)
    target = c_ij & ~bit(ik)
    seps = enumerate_separators(bidirected, ij, ik).separators
    if target not in seps:
        return f"{ground.format_set(target)} does not separate 1-2 from 1-3 with arcs"
    bad = _bounds(seps, c_ij.bit_count() - 1, {target, c_ik & ~bit(ij)}, at_least=False)
    if bad is not None:
        return f"arc separator {ground.format_set(bad)} breaks the size bound {c_ij.bit_count() - 1}"
    return None


def _inclusion_minimal(g: MixedGraph, u: int, v: int, c: VarSet) -> bool:
    return separates(g, bit(u), bit(v), c) and not any(separates(g, bit(u), bit(v), c & ~bit(x)) for x in iter_bits(c))


@register("named-minimal-separators", "network", nmin=6)
def check_named_separators(seed: int) -> str | None:
    g6 = incidence_graph(6)
    named = g6.ground.parse_set("1-3,1-4,1-5,2-3,2-4,2-5,3-6,4-6,5-6")
    ij, kl = _pair_index(6, (1, 2), (3, 4))
    if not _inclusion_minimal(g6, ij, kl, named):
        return f"{g6.ground.format_set(named)} is not a minimal separator of 1-2 and 3-4"
    g5 = complement_graph(incidence_graph(5))
    named = g5.ground.parse_set("3-4,2-4,1-4,4-5")
    ij, ik = _pair_index(5, (1, 2), (1, 3))
    if not _inclusion_minimal(g5, ij, ik, named):
        return f"{g5.ground.format_set(named)} is not a minimal separator of 1-2 and 1-3"
    return None


def upward_orbit_model(n: int = 5) -> IndependenceModel:
    """Orbit of <1-2,3-4 | {1-3,1-4,2-3,2-4}> closed under upward-stability."""
    fam = separator_families(n)
    ij, kl = _pair_index(n, (1, 2), (3, 4))
    seed_model = IndependenceModel.of(dyad_universe(n), [(ij, kl, fam.c_ijkl)])
    return closure_with(orbit_closure(seed_model), {Property.UPWARD_STABILITY})


@register("upward-orbit-counterexample", "network", nmin=5)
def check_upward_orbit(seed: int) -> str | None:
    """Intersection and composition hold, yet the model is not faithful to its incidence skeleton."""
    m = upward_orbit_model()
    for p in (Property.COMPOSITION, Property.INTERSECTION):
        report = check_property(m, p)
        if not report.holds:
            return f"{p.value} fails: {report.witness.describe(m.ground)}"
    report = check_property(m, Property.SINGLETON_TRANSITIVITY)
    if report.holds or not report.witness.recheck(m):
        return "singleton-transitivity should fail with a recheckable witness"
    if skeleton_class(m) is not SkeletonClass.INCIDENCE:
        return f"skeleton is {skeleton_class(m).value}, expected incidence"
    if faithfulness_report(m, incidence_graph(5)).faithful:
        return "model is faithful to the incidence graph"
    if not characterization_check(m, Semantics.UNDIRECTED).consistent:
        return "undirected characterization disagrees with faithfulness"
    assumptions = {h.name: h for h in structured_assumption_check(m, RegimeTag.UNDIRECTED_INCIDENCE).hypotheses}
    if not assumptions["containment"].holds or assumptions["swap-invariance"].holds:
        return "expected containment to hold and swap-invariance to fail"
    return None


REGIMES = {
    "empty": RegimeTag.EMPTY,
    "complete": RegimeTag.COMPLETE,
    "L-": RegimeTag.UNDIRECTED_INCIDENCE,
    "Lbi": RegimeTag.BIDIRECTED_INCIDENCE,
    "Lc-": RegimeTag.UNDIRECTED_COMPLEMENT,
    "Lcbi": RegimeTag.BIDIRECTED_COMPLEMENT,
}


@register("regime-classifier", "network", nmin=5)
def check_classifier(seed: int) -> str | None:
    for name, expected in REGIMES.items():
        regime = classify_regime(GraphOracle(family(name, 5)), 5, seed)
        if regime.tag is not expected:
            return f"{name}:5 classified as {regime.tag.value}, expected {expected.value}"
    regime = classify_regime(TableOracle(product_table(dyad_universe(5))), 5, seed)
    if regime.tag is not RegimeTag.EMPTY:
        return f"product table classified as {regime.tag.value}"
    return None


@register("skeleton-classes", "network", sizes=(4, 5))
def check_skeleton_classes(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    ground = dyad_universe(n)
    for trial in range(10 if n == 4 else 4):
        m = random_exchangeable_model(rng, ground, int(rng.integers(1, 3)))
        if skeleton_class(m) is SkeletonClass.OTHER:
            return f"trial {trial}: exchangeable model has a non-canonical skeleton"
    # the empty graph separates everything, so its model has an empty skeleton
    expected = {
        "empty": SkeletonClass.EMPTY,
        "complete": SkeletonClass.COMPLETE,
        "L-": SkeletonClass.INCIDENCE,
        "Lbi": SkeletonClass.INCIDENCE,
        "Lc-": SkeletonClass.COMPLEMENT,
        "Lcbi": SkeletonClass.COMPLEMENT,
    }
    for name, cls in expected.items():
        found = skeleton_class(induced_model(family(name, n)))
        if found is not cls:
            return f"{name}:{n} model skeleton is {found.value}, expected {cls.value}"
    return None


@register("node-sharing-pattern", "network", sizes=(4, 5))
def check_node_sharing(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    ground = dyad_universe(n)
    models = [induced_model(family(name, n)) for name in ("L-", "Lbi", "Lc-", "Lcbi")]
    models.extend(random_exchangeable_model(rng, ground, 1) for _ in range(4 if n == 4 else 2))
    for trial, m in enumerate(models):
        report = node_sharing_pattern(m)
        if report.skeleton is not SkeletonClass.OTHER and not report.conforms:
            return f"model {trial}: {report.offending.format(ground)} breaks the {report.skeleton.value} pattern"
    return None


@register("orbit-table-exchangeable", "network", nmin=4)
def check_orbit_tables(seed: int) -> str | None:
    rng = _rng(seed)
    for trial in range(10):
        t = random_network_table(rng, 4)
        if not is_exchangeable_table(t):
            return f"trial {trial}: orbit table is not exchangeable"
        if not is_exchangeable_model(induced_model_of_table(t)):
            return f"trial {trial}: induced model of an orbit table is not exchangeable"
    return None


@register("node-disjoint-conditioning", "network", sizes=(4, 5))
def check_node_disjoint(seed: int, n: int) -> str | None:
    rng = _rng(seed, n)
    ground = dyad_universe(n)
    kept = ground.mask_of(d for d in ground.elements if d.j <= n - 2)
    given = ground.mask_of([Dyad(n - 1, n)])
    for trial in range(5):
        t = random_network_table(rng, n)
        reduced = marginalize(t, ground.full_mask & ~(kept | given))
        if not is_exchangeable_table(marginalize(t, ground.full_mask & ~kept)):
            return f"trial {trial}: marginal over {ground.format_set(kept)} is not exchangeable"
        for value in (0, 1):
            conditional = condition(reduced, reduced.ground.mask_of([Dyad(n - 1, n)]), [value])
            if not is_exchangeable_table(conditional):
                return f"trial {trial}: conditioning on {n - 1}-{n} = {value} breaks exchangeability"
    return None


def shared_node_table():
    """Perfect matchings at 1/6 each and triangles at 1/8 each on four nodes."""
    ground = dyad_universe(4)
    matching = canonical_state(ground.mask_of([Dyad(1, 2), Dyad(3, 4)]), ground)
    triangle = canonical_state(ground.mask_of([Dyad(1, 2), Dyad(1, 3), Dyad(2, 3)]), ground)
    return table_from_orbits(OrbitWeighting(ground, {matching: 1 / 6, triangle: 1 / 8}))


@register("shared-node-conditioning", "network", nmin=4)
def check_shared_node(seed: int) -> str | None:
    t = shared_node_table()
    if not is_exchangeable_table(t):
        return "matching/triangle table is not exchangeable"
    conditional = condition(t, t.ground.mask_of([Dyad(1, 2)]), [1])
    if is_exchangeable_table(conditional):
        return "conditioning on 1-2 = 1 should break exchangeability of the remaining dyads"
    return None


DUAL_PAIRS = (
    (Property.INTERSECTION, Property.COMPOSITION),
    (Property.COMPOSITION, Property.INTERSECTION),
    (Property.SINGLETON_TRANSITIVITY, Property.SINGLETON_TRANSITIVITY),
    (Property.UPWARD_STABILITY, Property.DOWNWARD_STABILITY),
    (Property.DOWNWARD_STABILITY, Property.UPWARD_STABILITY),
)


@register("duality-properties", "network", nmin=5)
def check_duality(seed: int) -> str | None:
    rng = _rng(seed)
    models = []
    for _ in range(200):
        ground = vector_universe(int(rng.integers(3, 6)))
        models.append(random_closed_model(rng, ground, int(rng.integers(1, 5))))
    models.extend(induced_model(family(name, n)) for n in (4, 5) for name in ("L-", "Lbi", "Lc-", "Lcbi"))
    for trial, m in enumerate(models):
        d = dual(m)
        if not d.is_semigraphoid:
            return f"model {trial}: dual is not a semi-graphoid"
        if dual(d) != m:
            return f"model {trial}: dual is not an involution"
        for p, q in DUAL_PAIRS:
            if check_property(m, p, general=False).holds != check_property(d, q, general=False).holds:
                return f"model {trial}: {p.value} on the model disagrees with {q.value} on its dual"
    return None


@register("dual-graph-models", "network", nmin=5)
def check_dual_graphs(seed: int) -> str | None:
    rng = _rng(seed)
    graphs = [incidence_graph(n) for n in (4, 5)]
    graphs.extend(complement_graph(incidence_graph(n)) for n in (4, 5))
    graphs.extend(random_undirected_graph(rng, int(rng.integers(3, 6))) for _ in range(20))
    for trial, g in enumerate(graphs):
        if induced_model(_arcs(g)) != dual(induced_model(g)):
            return f"graph {trial}: bidirected model differs from the dual of the undirected one"
    return None


# ---------------------------------------------------------------------------
# appendix
# ---------------------------------------------------------------------------


@register("collider-free-skeleton", "appendix", nmin=5)
def check_collider_free(seed: int) -> str | None:
    rng = _rng(seed)
    for trial in range(100):
        g = random_mixed_graph(rng, int(rng.integers(3, 6)))
        if not unshielded_collider_trisections(g) and not markov_equivalent(g, g.skeleton()):
            return f"graph {trial} has no unshielded collider trisection but differs from its skeleton"
    return None


def _collider_endpoints(g: MixedGraph) -> set[tuple[int, int]]:
    return {t.endpoints for t in unshielded_collider_trisections(g)}


@register("equivalent-collider-endpoints", "appendix", nmin=5)
def check_equivalent_colliders(seed: int) -> str | None:
    rng = _rng(seed)
    for trial in range(100):
        size = int(rng.integers(3, 6))
        g = random_mixed_graph(rng, size)
        for h in (g.skeleton(), _arcs(g), random_mixed_graph(rng, size)):
            if not (is_maximal(g) and is_maximal(h) and markov_equivalent(g, h)):
                continue
            if _collider_endpoints(g) != _collider_endpoints(h):
                return f"graph {trial}: equivalent maximal graphs with different unshielded colliders"
    return None


@register("permuted-graph-model", "appendix", nmin=5)
def check_permuted_graphs(seed: int) -> str | None:
    rng = _rng(seed)
    for trial in range(100):
        g = random_mixed_graph(rng, 5)
        perm = _random_perm(rng, 5)
        if induced_model(g.permuted(perm)) != induced_model(g).permuted(perm):
            return f"graph {trial}: relabeling by {perm} does not relabel the model"
    for name in ("L-", "Lbi", "Lc-", "Lcbi"):
        g = family(name, 5)
        perm = _random_perm(rng, 5)
        if not markov_equivalent(g, g.permuted(perm)):
            return f"{name}:5 is not equivalent to its relabeling by {perm}"
    return None


WALK_TRIALS = {3: 20, 4: 20, 5: 10, 6: 6}


@register("walk-enumeration", "appendix", nmin=4)
def check_walks(seed: int) -> str | None:
    """Walk reachability agrees with enumerating every walk of at most 2|V| edges."""
    rng = _rng(seed)
    for size, trials in WALK_TRIALS.items():
        for trial in range(trials):
            g = random_mixed_graph(rng, size)
            full = g.ground.full_mask
            for u, v in itertools.combinations(range(size), 2):
                for c in submasks(full & ~(bit(u) | bit(v))):
                    fast = separates(g, bit(u), bit(v), c)
                    if walk_separated(g, u, v, c, 2 * size) != fast:
                        return (
                            f"{size}-vertex graph {trial}: {u} and {v} given {g.ground.format_set(c)}"
                            f" are {'separated' if fast else 'connected'} but walk enumeration disagrees"
                        )
    for trial in range(40):
        g = random_undirected_graph(rng, int(rng.integers(3, 7)))
        full = g.ground.full_mask
        for u, v in itertools.combinations(range(g.ground.size), 2):
            for c in submasks(full & ~(bit(u) | bit(v))):
                a, b = bit(u), bit(v)
                if separates(g, a, b, c) != nx_undirected_separated(g, a, b, c):
                    return f"undirected graph {trial}: path-blocking disagrees at {u}, {v}"
                arcs = _arcs(g)
                if separates(arcs, a, b, c) != nx_bidirected_separated(arcs, a, b, c):
                    return f"bidirected graph {trial}: path criterion disagrees at {u}, {v}"
    return None
