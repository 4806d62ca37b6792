"""Independence statements and models: derivability, closures, property checkers and duality.

A model stores only elementary statements <u,v|C> as index triples (u, v, C)
with u < v; a general statement <A,B|C> holds iff every <u,v|C∪A'∪B'> with
u in A, v in B, A' ⊆ A∖u and B' ⊆ B∖v is stored. Statements with an empty side
hold implicitly.
"""

import itertools
import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property
from typing import TYPE_CHECKING

from exchci.config import GENERAL_QUANTIFIER_LIMIT, MAX_ELEMENTS
from exchci.core import GroundSet, NodePermutation, VarSet, bit, iter_bits, submasks
from exchci.errors import CapacityError, InvalidArgumentError, PreconditionError

if TYPE_CHECKING:
    from exchci.graphs import MixedGraph

logger = logging.getLogger(__name__)

Triple = tuple[int, int, VarSet]


class Property(StrEnum):
    SYMMETRY = "symmetry"
    DECOMPOSITION = "decomposition"
    WEAK_UNION = "weak-union"
    CONTRACTION = "contraction"
    INTERSECTION = "intersection"
    COMPOSITION = "composition"
    SINGLETON_TRANSITIVITY = "singleton-transitivity"
    UPWARD_STABILITY = "upward-stability"
    DOWNWARD_STABILITY = "downward-stability"


SEMIGRAPHOID_AXIOMS = (Property.SYMMETRY, Property.DECOMPOSITION, Property.WEAK_UNION, Property.CONTRACTION)
CLOSURE_RULES = frozenset(
    {Property.INTERSECTION, Property.COMPOSITION, Property.UPWARD_STABILITY, Property.DOWNWARD_STABILITY}
)


def parse_properties(text: str) -> frozenset[Property]:
    """Parse a comma-separated property list such as 'intersection,composition'."""
    names = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return frozenset(Property(name) for name in names)
    except ValueError as e:
        raise InvalidArgumentError(f"Unknown property in {text!r}; expected one of {[p.value for p in Property]}") from e


@dataclass(frozen=True)
class Statement:
    """A general triple <a,b|c> of masks; the side with the smaller encoding is stored as a."""

    a: VarSet
    b: VarSet
    c: VarSet = 0

    def __post_init__(self) -> None:
        if self.a & self.b or self.a & self.c or self.b & self.c:
            raise InvalidArgumentError(
                f"Statement sets must be pairwise disjoint, got {self.a:#x}, {self.b:#x}, {self.c:#x}"
            )
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @classmethod
    def elementary(cls, u: int, v: int, c: VarSet = 0) -> "Statement":
        return cls(bit(u), bit(v), c)

    @property
    def is_elementary(self) -> bool:
        return self.a.bit_count() == 1 and self.b.bit_count() == 1

    @property
    def is_trivial(self) -> bool:
        return not self.a or not self.b

    def format(self, ground: GroundSet) -> str:
        return f"{_side(ground, self.a)} ⊥ {_side(ground, self.b)} | {ground.format_set(self.c)}"


def _side(ground: GroundSet, mask: VarSet) -> str:
    if mask.bit_count() == 1:
        return ground.token(ground.members(mask)[0])
    return ground.format_set(mask)


def _key(u: int, v: int, c: VarSet) -> Triple:
    return (u, v, c) if u < v else (v, u, c)


@dataclass(frozen=True)
class IndependenceModel:
    ground: GroundSet
    elementary: frozenset[Triple]

    @classmethod
    def of(cls, ground: GroundSet, triples: Iterable[tuple[int, int, VarSet]]) -> "IndependenceModel":
        """Build a model from elementary index triples, validating and canonicalizing each."""
        canonical = set()
        for u, v, c in triples:
            if u == v or not (0 <= u < ground.size and 0 <= v < ground.size):
                raise InvalidArgumentError(f"Bad elementary pair ({u}, {v}) for a {ground.size}-element ground")
            ground.check_mask(c)
            if c & (bit(u) | bit(v)):
                raise InvalidArgumentError(f"Conditioning set {ground.format_set(c)} overlaps its pair")
            canonical.add(_key(u, v, c))
        return cls(ground, frozenset(canonical))

    @classmethod
    def from_statements(cls, ground: GroundSet, statements: Iterable[Statement]) -> "IndependenceModel":
        """Seed a model with every elementary statement a general statement stands for."""
        triples: set[Triple] = set()
        for s in statements:
            for mask in (s.a, s.b, s.c):
                ground.check_mask(mask)
            triples.update(_expand(s))
        return cls(ground, frozenset(triples))

    @classmethod
    def empty(cls, ground: GroundSet) -> "IndependenceModel":
        return cls(ground, frozenset())

    @classmethod
    def full(cls, ground: GroundSet) -> "IndependenceModel":
        """Every elementary statement over the ground set."""
        triples = set()
        for u, v in itertools.combinations(range(ground.size), 2):
            rest = ground.full_mask & ~(bit(u) | bit(v))
            triples.update((u, v, c) for c in submasks(rest))
        return cls(ground, frozenset(triples))

    def __len__(self) -> int:
        return len(self.elementary)

    def contains(self, u: int, v: int, c: VarSet) -> bool:
        return _key(u, v, c) in self.elementary

    def holds(self, a: VarSet, b: VarSet, c: VarSet) -> bool:
        return holds(self, a, b, c)

    def statements(self) -> list[Statement]:
        """Stored statements in deterministic (u, v, C-members) order."""
        return [Statement.elementary(u, v, c) for u, v, c in sorted(self.elementary, key=triple_order)]

    def permuted(self, perm: NodePermutation) -> "IndependenceModel":
        relabel = self.ground.relabeling(perm)
        index_map = relabel.index_map
        return IndependenceModel(
            self.ground,
            frozenset(_key(index_map[u], index_map[v], relabel(c)) for u, v, c in self.elementary),
        )

    @cached_property
    def is_semigraphoid(self) -> bool:
        return _close(self.ground, self.elementary, frozenset()) == self.elementary


def triple_order(triple: Triple) -> tuple[int, int, list[int]]:
    u, v, c = triple
    return (u, v, list(iter_bits(c)))


def _expand(s: Statement) -> Iterator[Triple]:
    for u in iter_bits(s.a):
        rest_a = s.a & ~bit(u)
        for v in iter_bits(s.b):
            extra = rest_a | (s.b & ~bit(v))
            for sub in submasks(extra):
                yield _key(u, v, s.c | sub)


def holds(m: IndependenceModel, a: VarSet, b: VarSet, c: VarSet) -> bool:
    """Whether <a,b|c> is derivable in m under the elementary reduction."""
    if a & b or a & c or b & c:
        raise InvalidArgumentError(f"holds() needs pairwise disjoint sets, got {a:#x}, {b:#x}, {c:#x}")
    if not a or not b:
        return True
    stored = m.elementary
    for u in iter_bits(a):
        rest_a = a & ~bit(u)
        for v in iter_bits(b):
            extra = rest_a | (b & ~bit(v))
            lo, hi = (u, v) if u < v else (v, u)
            for sub in submasks(extra):
                if (lo, hi, c | sub) not in stored:
                    return False
    return True


# ---------------------------------------------------------------------------
# Closure
# ---------------------------------------------------------------------------


def _close(ground: GroundSet, seed: Iterable[Triple], rules: frozenset[Property]) -> frozenset[Triple]:
    """Worklist closure of elementary triples under the semi-graphoid rule plus `rules`."""
    intersection = Property.INTERSECTION in rules
    composition = Property.COMPOSITION in rules
    upward = Property.UPWARD_STABILITY in rules
    downward = Property.DOWNWARD_STABILITY in rules
    full = ground.full_mask
    known: set[Triple] = set()
    queue: deque[Triple] = deque()

    def add(u: int, v: int, c: VarSet) -> None:
        key = (u, v, c) if u < v else (v, u, c)
        if key not in known:
            known.add(key)
            queue.append(key)

    def has(u: int, v: int, c: VarSet) -> bool:
        return ((u, v, c) if u < v else (v, u, c)) in known

    for u, v, c in seed:
        add(u, v, c)

    while queue:
        u, v, c = queue.popleft()
        free = full & ~(c | bit(u) | bit(v))
        for i, j in ((u, v), (v, u)):
            bj = bit(j)
            for l in iter_bits(c):
                k = c & ~bit(l)
                # <i,j|K+l> and <i,l|K> give <i,l|K+j> and <i,j|K>
                if has(i, l, k):
                    add(i, l, k | bj)
                    add(i, j, k)
                if intersection and has(i, l, k | bj):
                    add(i, j, k)
                    add(i, l, k)
            for x in iter_bits(free):
                bx = bit(x)
                if has(i, x, c | bj):
                    add(i, j, c | bx)
                    add(i, x, c)
                if composition and has(i, x, c):
                    add(i, j, c | bx)
                    add(i, x, c | bj)
        if upward:
            for x in iter_bits(free):
                add(u, v, c | bit(x))
        if downward:
            for l in iter_bits(c):
                add(u, v, c & ~bit(l))

    return frozenset(known)


def _check_capacity(m: IndependenceModel) -> None:
    if m.ground.size > MAX_ELEMENTS:
        raise CapacityError(f"Model over {m.ground.size} elements exceeds the {MAX_ELEMENTS}-element bound")


def semigraphoid_closure(m: IndependenceModel) -> IndependenceModel:
    """Smallest semi-graphoid containing m."""
    return closure_with(m, frozenset())


def closure_with(m: IndependenceModel, extra: Iterable[Property]) -> IndependenceModel:
    """Smallest model containing m closed under the semi-graphoid axioms and each extra rule.

    Singleton-transitivity has a disjunctive conclusion, so no least closure
    exists for it and it is rejected.
    """
    rules = frozenset(extra)
    if Property.SINGLETON_TRANSITIVITY in rules:
        raise InvalidArgumentError("singleton-transitivity is disjunctive and cannot be used as a closure rule")
    unknown = rules - CLOSURE_RULES
    if unknown:
        raise InvalidArgumentError(f"Not a closure rule: {sorted(p.value for p in unknown)}")
    _check_capacity(m)
    closed = _close(m.ground, m.elementary, rules)
    logger.debug("closure %s: %d -> %d elementary statements", sorted(rules), len(m), len(closed))
    result = IndependenceModel(m.ground, closed)
    # every closure includes the semi-graphoid rule
    result.__dict__["is_semigraphoid"] = True
    return result


# ---------------------------------------------------------------------------
# Property checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A violating instance: every antecedent holds and none of `missing` does."""

    property: Property
    antecedents: tuple[Statement, ...]
    missing: tuple[Statement, ...]

    def recheck(self, m: IndependenceModel) -> bool:
        return all(holds(m, s.a, s.b, s.c) for s in self.antecedents) and not any(
            holds(m, s.a, s.b, s.c) for s in self.missing
        )

    def describe(self, ground: GroundSet) -> str:
        given = " and ".join(s.format(ground) for s in self.antecedents)
        absent = " nor ".join(s.format(ground) for s in self.missing)
        return f"{given} but not {absent}"


@dataclass(frozen=True)
class PropertyReport:
    property: Property
    holds: bool
    witness: Witness | None = None


def check_property(m: IndependenceModel, p: Property, general: bool | None = None) -> PropertyReport:
    """Search m for a violation of p.

    m must already be semi-graphoid closed. With `general` unset, the
    subset-quantified forms run when the ground has at most
    GENERAL_QUANTIFIER_LIMIT elements and the equivalent elementary forms above.
    """
    p = Property(p)
    if not m.is_semigraphoid:
        raise PreconditionError(f"check_property({p.value}) needs a semi-graphoid closed model")
    if general is None:
        general = m.ground.size <= GENERAL_QUANTIFIER_LIMIT
    if p is Property.SINGLETON_TRANSITIVITY:
        witness = _singleton_transitivity(m)
    elif p is Property.UPWARD_STABILITY:
        witness = _stability(m, upward=True)
    elif p is Property.DOWNWARD_STABILITY:
        witness = _stability(m, upward=False)
    elif general:
        witness = next(_general_violations(m, p), None)
    else:
        witness = next(_elementary_violations(m, p), None)
    return PropertyReport(p, witness is None, witness)


def _singleton_transitivity(m: IndependenceModel) -> Witness | None:
    full = m.ground.full_mask
    for u, v, c in sorted(m.elementary, key=triple_order):
        for w in iter_bits(full & ~(c | bit(u) | bit(v))):
            if m.contains(u, v, c | bit(w)) and not m.contains(u, w, c) and not m.contains(v, w, c):
                return Witness(
                    Property.SINGLETON_TRANSITIVITY,
                    (Statement.elementary(u, v, c), Statement.elementary(u, v, c | bit(w))),
                    (Statement.elementary(u, w, c), Statement.elementary(v, w, c)),
                )
    return None


def _stability(m: IndependenceModel, upward: bool) -> Witness | None:
    prop = Property.UPWARD_STABILITY if upward else Property.DOWNWARD_STABILITY
    full = m.ground.full_mask
    for u, v, c in sorted(m.elementary, key=triple_order):
        candidates = full & ~(c | bit(u) | bit(v)) if upward else c
        for w in iter_bits(candidates):
            target = c | bit(w) if upward else c & ~bit(w)
            if not m.contains(u, v, target):
                return Witness(prop, (Statement.elementary(u, v, c),), (Statement.elementary(u, v, target),))
    return None


def _elementary_violations(m: IndependenceModel, p: Property) -> Iterator[Witness]:
    """Violations of the elementary form of p over stored statements."""
    full = m.ground.full_mask
    for u, v, c in sorted(m.elementary, key=triple_order):
        for i, j in ((u, v), (v, u)):
            bj = bit(j)
            if p is Property.INTERSECTION:
                for l in iter_bits(c):
                    k = c & ~bit(l)
                    if m.contains(i, l, k | bj) and not holds(m, bit(i), bj | bit(l), k):
                        yield Witness(
                            p,
                            (Statement.elementary(i, j, c), Statement.elementary(i, l, k | bj)),
                            (Statement(bit(i), bj | bit(l), k),),
                        )
            elif p is Property.COMPOSITION:
                for x in iter_bits(full & ~(c | bit(u) | bit(v))):
                    if m.contains(i, x, c) and not holds(m, bit(i), bj | bit(x), c):
                        yield Witness(
                            p,
                            (Statement.elementary(i, j, c), Statement.elementary(i, x, c)),
                            (Statement(bit(i), bj | bit(x), c),),
                        )
            elif p is not Property.SYMMETRY:
                for l in iter_bits(c):
                    k = c & ~bit(l)
                    if m.contains(i, l, k) and not holds(m, bit(i), bj | bit(l), k):
                        yield Witness(
                            p,
                            (Statement.elementary(i, j, c), Statement.elementary(i, l, k)),
                            (Statement(bit(i), bj | bit(l), k),),
                        )


def _assignments(size: int) -> Iterator[tuple[VarSet, VarSet, VarSet, VarSet]]:
    """Every split of the ground into disjoint A, B, D, C (and the unused rest)."""
    for labels in itertools.product(range(5), repeat=size):
        sets = [0, 0, 0, 0, 0]
        for k, label in enumerate(labels):
            sets[label] |= 1 << k
        _, a, b, d, c = sets
        yield a, b, d, c


def _general_violations(m: IndependenceModel, p: Property) -> Iterator[Witness]:
    """Violations of p quantified over all disjoint subsets A, B, D, C."""
    for a, b, d, c in _assignments(m.ground.size):
        if not a or not b:
            continue
        if p is Property.SYMMETRY:
            if d == 0 and holds(m, a, b, c) != holds(m, b, a, c):
                yield Witness(p, (Statement(a, b, c),), (Statement(a, b, c),))
            continue
        if not d:
            continue
        if p is Property.DECOMPOSITION:
            antecedents = (Statement(a, b | d, c),)
            consequents = (Statement(a, b, c),)
        elif p is Property.WEAK_UNION:
            antecedents = (Statement(a, b | d, c),)
            consequents = (Statement(a, b, c | d),)
        elif p is Property.CONTRACTION:
            antecedents = (Statement(a, b, c | d), Statement(a, d, c))
            consequents = (Statement(a, b | d, c),)
        elif p is Property.INTERSECTION:
            antecedents = (Statement(a, b, c | d), Statement(a, d, c | b))
            consequents = (Statement(a, b | d, c),)
        else:
            antecedents = (Statement(a, b, c), Statement(a, d, c))
            consequents = (Statement(a, b | d, c),)
        if not all(holds(m, s.a, s.b, s.c) for s in antecedents):
            continue
        for s in consequents:
            if not holds(m, s.a, s.b, s.c):
                yield Witness(p, antecedents, (s,))
                break


# ---------------------------------------------------------------------------
# Duality and skeleton
# ---------------------------------------------------------------------------


def dual(m: IndependenceModel) -> IndependenceModel:
    """<u,v|C> is in the dual iff <u,v|V∖({u,v}∪C)> is in m."""
    full = m.ground.full_mask
    return IndependenceModel(
        m.ground, frozenset((u, v, full & ~(c | bit(u) | bit(v))) for u, v, c in m.elementary)
    )


def skeleton_of_model(m: IndependenceModel) -> "MixedGraph":
    """Undirected graph joining u and v iff no <u,v|C> is in m."""
    from exchci.graphs import Edge, EdgeKind, MixedGraph

    separated = {(u, v) for u, v, _ in m.elementary}
    edges = [
        Edge(u, v, EdgeKind.LINE)
        for u, v in itertools.combinations(range(m.ground.size), 2)
        if (u, v) not in separated
    ]
    return MixedGraph.build(m.ground, edges)
