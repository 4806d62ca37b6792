"""Exact distribution oracles: binary joint tables and exchangeable Gaussian (equicorrelation) models.

A table over a ground set of k elements holds 2**k probabilities indexed by
state; bit k of the state index is the value of ground element k. Conditional
tables remember the conditioned elements and their values as `evidence`.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from exchci.config import CI_TOL, GAUSSIAN_TOL, MAX_TABLE_ELEMENTS, NORMALIZATION_TOL, SYMMETRY_TOL
from exchci.core import Element, GroundSet, Kind, NodePermutation, VarSet, bit, iter_bits, subsets_by_size
from exchci.errors import CapacityError, InvalidArgumentError, PreconditionError
from exchci.imodel import IndependenceModel, semigraphoid_closure

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8192)
def _codes(size: int, mask: VarSet) -> np.ndarray:
    """For every state, the compact code of its restriction to mask."""
    states = np.arange(1 << size, dtype=np.int64)
    codes = np.zeros(1 << size, dtype=np.int64)
    for position, index in enumerate(iter_bits(mask)):
        codes |= ((states >> index) & 1) << position
    codes.setflags(write=False)
    return codes


@dataclass(frozen=True, eq=False)
class JointTable:
    ground: GroundSet
    probs: np.ndarray
    evidence: tuple[tuple[Element, int], ...] = ()

    def __post_init__(self) -> None:
        if self.ground.size > MAX_TABLE_ELEMENTS:
            raise CapacityError(
                f"Joint table over {self.ground.size} elements exceeds the {MAX_TABLE_ELEMENTS}-element bound"
            )
        probs = np.array(self.probs, dtype=np.float64)
        expected = 1 << self.ground.size
        if probs.shape != (expected,):
            raise InvalidArgumentError(f"Table over {self.ground.size} elements needs {expected} entries, got {probs.shape}")
        if np.any(probs < 0):
            raise InvalidArgumentError(f"Negative probability at state {int(np.argmin(probs))}")
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidArgumentError(f"Probabilities sum to {total!r}, residual {total - 1.0:.3e}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def codes(self, mask: VarSet) -> np.ndarray:
        self.ground.check_mask(mask)
        return _codes(self.ground.size, mask)

    def probability(self, state: int) -> float:
        return float(self.probs[state])


def product_table(ground: GroundSet, p: float | Sequence[float] = 0.5) -> JointTable:
    """Independent binary elements with P(X_e = 1) = p (or p[e] per element)."""
    marginals = np.broadcast_to(np.asarray(p, dtype=np.float64), (ground.size,))
    if np.any((marginals < 0) | (marginals > 1)):
        raise InvalidArgumentError(f"Element probabilities must lie in [0, 1], got {p!r}")
    states = np.arange(1 << ground.size, dtype=np.int64)
    bits = (states[:, None] >> np.arange(ground.size)) & 1
    probs = np.prod(np.where(bits == 1, marginals, 1.0 - marginals), axis=1)
    return JointTable(ground, probs)


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------


def _state_image(ground: GroundSet, perm: NodePermutation, evidence: Mapping[Element, int]) -> np.ndarray | None:
    """Index array y(x) with y_d = x_{perm(d)}, or None when perm sends an element outside table and evidence."""
    states = np.arange(1 << ground.size, dtype=np.int64)
    image = np.zeros_like(states)
    for position, element in enumerate(ground.elements):
        source = perm.image(element)
        if source in ground:
            image |= ((states >> ground.index(source)) & 1) << position
        elif source in evidence:
            if evidence[source]:
                image |= 1 << position
        else:
            return None
    return image


def _permutations_of(nodes: Sequence[int], n: int) -> Iterator[NodePermutation]:
    """Permutations of the listed nodes fixing every other node of 1..n."""
    for order in itertools.permutations(nodes):
        mapping = list(range(1, n + 1))
        for src, dst in zip(nodes, order):
            mapping[src - 1] = dst
        yield NodePermutation(tuple(mapping))


def _relabelings(ground: GroundSet, evidence: Mapping[Element, int]) -> Iterator[np.ndarray]:
    nodes = sorted(ground.nodes_of(ground.full_mask))
    if ground.kind is Kind.VECTOR or (ground.is_full and not evidence):
        # vector tables only ever see their own ids, so the group is the full symmetric group on them
        if len(nodes) < 2:
            return
        perms: Iterable[NodePermutation] = [
            NodePermutation.transposition(ground.n, nodes[0], nodes[1]),
            NodePermutation.cycle(ground.n, nodes),
        ]
    else:
        perms = _permutations_of(nodes, ground.n)
    for perm in perms:
        image = _state_image(ground, perm, evidence)
        if image is not None:
            yield image


def is_exchangeable_table(t: JointTable, tol: float = SYMMETRY_TOL) -> bool:
    """P(x) = P(y) for every applicable node permutation, y_d = x_{perm(d)}.

    A permutation of the nodes occurring in the table (fixing the rest) is
    applicable when it sends every table element into the table or the
    evidence; evidence supplies the conditioned values.
    """
    evidence = dict(t.evidence)
    for image in _relabelings(t.ground, evidence):
        if np.max(np.abs(t.probs - t.probs[image])) > tol:
            return False
    return True


def _bitstring_keys(size: int) -> np.ndarray:
    """Bit-reversed state indices: integer order on them is lexicographic order on written bitstrings."""
    states = np.arange(1 << size, dtype=np.int64)
    keys = np.zeros_like(states)
    for k in range(size):
        keys |= ((states >> k) & 1) << (size - 1 - k)
    return keys


def _canonical_states(ground: GroundSet) -> np.ndarray:
    """The state with the lexicographically least bitstring in each state's orbit."""
    states = np.arange(1 << ground.size, dtype=np.int64)
    if ground.kind is Kind.VECTOR:
        counts = np.array([int(x).bit_count() for x in states], dtype=np.int64)
        return ((np.int64(1) << counts) - 1) << (ground.size - counts)
    keys = _bitstring_keys(ground.size)
    least = keys.copy()
    for perm in ground.symmetry_group():
        image = _state_image(ground, perm, {})
        np.minimum(least, keys[image], out=least)
    # the key map is an involution
    return keys[least]


def canonical_state(state: int, ground: GroundSet) -> int:
    if not 0 <= state < 1 << ground.size:
        raise InvalidArgumentError(f"State {state} out of range for {ground.size} elements")
    return int(_canonical_states(ground)[state])


def state_orbits(ground: GroundSet) -> dict[int, list[int]]:
    """Map each canonical state to the states of its orbit."""
    orbits: dict[int, list[int]] = {}
    for state, rep in enumerate(_canonical_states(ground).tolist()):
        orbits.setdefault(rep, []).append(state)
    return orbits


@dataclass(frozen=True)
class OrbitWeighting:
    """Per-state weights keyed by canonical state; every state of an orbit gets its orbit's weight."""

    ground: GroundSet
    weights: Mapping[int, float]

    def __post_init__(self) -> None:
        if not self.ground.is_full:
            raise InvalidArgumentError("Orbit weightings need a full ground set")
        orbits = state_orbits(self.ground)
        total = 0.0
        for rep, weight in self.weights.items():
            if rep not in orbits:
                raise InvalidArgumentError(f"State {rep} is not the canonical state of its orbit")
            if weight < 0:
                raise InvalidArgumentError(f"Negative weight {weight!r} on orbit {rep}")
            total += len(orbits[rep]) * weight
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidArgumentError(f"Orbit weights normalize to {total!r}, residual {total - 1.0:.3e}")


def table_from_orbits(w: OrbitWeighting) -> JointTable:
    canonical = _canonical_states(w.ground)
    lookup = np.zeros(1 << w.ground.size, dtype=np.float64)
    for rep, weight in w.weights.items():
        lookup[rep] = weight
    return JointTable(w.ground, lookup[canonical])


def orbits_of_table(t: JointTable) -> OrbitWeighting:
    """The orbit weighting of an exchangeable table over a full ground; orbits of zero mass are left out."""
    if t.evidence or not is_exchangeable_table(t):
        raise PreconditionError("Orbit weightings exist only for exchangeable tables over a full ground")
    weights = {rep: float(t.probs[rep]) for rep in state_orbits(t.ground) if t.probs[rep] > 0}
    return OrbitWeighting(t.ground, weights)


# ---------------------------------------------------------------------------
# Conditional independence
# ---------------------------------------------------------------------------


def _check_disjoint(t: JointTable, a: VarSet, b: VarSet, c: VarSet) -> None:
    for mask in (a, b, c):
        t.ground.check_mask(mask)
    if a & b or a & c or b & c:
        raise InvalidArgumentError("CI queries need pairwise disjoint sets")


def ci_holds(t: JointTable, a: VarSet, b: VarSet, c: VarSet, tol: float = CI_TOL) -> bool:
    """Exact CI test; conditioning states of probability zero are skipped."""
    if tol <= 0:
        raise InvalidArgumentError(f"Tolerance must be positive, got {tol!r}")
    _check_disjoint(t, a, b, c)
    if not a or not b:
        return True
    ka, kb, kc = a.bit_count(), b.bit_count(), c.bit_count()
    code = (t.codes(a) << (kb + kc)) | (t.codes(b) << kc) | t.codes(c)
    joint = np.bincount(code, weights=t.probs, minlength=1 << (ka + kb + kc)).reshape(1 << ka, 1 << kb, 1 << kc)
    pc = joint.sum(axis=(0, 1))
    live = pc > 0
    cond = joint[:, :, live] / pc[live]
    pa = cond.sum(axis=1, keepdims=True)
    pb = cond.sum(axis=0, keepdims=True)
    return bool(np.all(np.abs(cond - pa * pb) <= tol))


def cross_product_ci(t: JointTable, u: int, v: int, c: VarSet, tol: float = CI_TOL) -> bool:
    """Singleton CI through the odds-ratio identity p11 p00 = p10 p01 within each live stratum."""
    _check_disjoint(t, bit(u), bit(v), c)
    kc = c.bit_count()
    code = (t.codes(bit(u)) << (kc + 1)) | (t.codes(bit(v)) << kc) | t.codes(c)
    joint = np.bincount(code, weights=t.probs, minlength=4 << kc).reshape(2, 2, 1 << kc)
    pc = joint.sum(axis=(0, 1))
    for stratum in np.flatnonzero(pc > 0):
        cell = joint[:, :, stratum]
        residual = cell[1, 1] * cell[0, 0] - cell[1, 0] * cell[0, 1]
        if abs(residual) > tol * pc[stratum] ** 2:
            return False
    return True


def induced_model_of_table(t: JointTable, tol: float = CI_TOL) -> IndependenceModel:
    """All elementary <u,v|C> that hold in t."""
    full = t.ground.full_mask
    triples = []
    for u, v in itertools.combinations(range(t.ground.size), 2):
        rest = full & ~(bit(u) | bit(v))
        triples.extend((u, v, c) for c in subsets_by_size(rest) if ci_holds(t, bit(u), bit(v), c, tol))
    model = IndependenceModel(t.ground, frozenset(triples))
    if not model.is_semigraphoid:
        missing = len(semigraphoid_closure(model)) - len(model)
        logger.warning("Induced model misses %d statements its closure derives; tolerance %.1e may be too loose", missing, tol)
    return model


# ---------------------------------------------------------------------------
# Marginalization and conditioning
# ---------------------------------------------------------------------------


def marginalize(t: JointTable, m: VarSet) -> JointTable:
    """Sum out the elements in m."""
    t.ground.check_mask(m)
    keep = t.ground.full_mask & ~m
    probs = np.bincount(t.codes(keep), weights=t.probs, minlength=1 << keep.bit_count())
    return JointTable(t.ground.restrict(keep), probs, t.evidence)


def condition(t: JointTable, c: VarSet, values: Sequence[int]) -> JointTable:
    """Condition on X_c = values (one value per member of c, ground order)."""
    members = t.ground.members(c)
    if len(values) != len(members):
        raise InvalidArgumentError(f"Conditioning on {len(members)} elements needs as many values, got {len(values)}")
    if any(value not in (0, 1) for value in values):
        raise InvalidArgumentError(f"Conditioning values must be 0 or 1, got {list(values)}")
    target = sum(value << position for position, value in enumerate(values))
    selected = t.codes(c) == target
    mass = float(t.probs[selected].sum())
    if mass <= 0:
        raise InvalidArgumentError(f"Conditioning on a null event: P({t.ground.format_set(c)} = {list(values)}) = 0")
    keep = t.ground.full_mask & ~c
    probs = np.bincount(t.codes(keep)[selected], weights=t.probs[selected] / mass, minlength=1 << keep.bit_count())
    evidence = tuple(sorted(t.evidence + tuple(zip(members, values)), key=lambda pair: pair[0]))
    return JointTable(t.ground.restrict(keep), probs, evidence)


# ---------------------------------------------------------------------------
# Gaussian equicorrelation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Equicorrelation:
    """Unit variances and a common correlation rho; regular iff -1/(n-1) < rho < 1."""

    n: int
    rho: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidArgumentError(f"Equicorrelation needs n >= 2, got {self.n}")
        lower = -1.0 / (self.n - 1)
        if not lower < self.rho < 1.0:
            raise InvalidArgumentError(f"rho={self.rho!r} outside the regular interval ({lower:.6g}, 1)")

    def covariance(self) -> np.ndarray:
        return (1.0 - self.rho) * np.eye(self.n) + self.rho * np.ones((self.n, self.n))


def partial_covariance(cov: np.ndarray, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> np.ndarray:
    """Conditional cross-covariance of X_a and X_b given X_c by Schur complement (0-based indices)."""
    cov = np.asarray(cov, dtype=np.float64)
    a, b, c = list(a), list(b), list(c)
    block = cov[np.ix_(a, b)]
    if not c:
        return block
    return block - cov[np.ix_(a, c)] @ np.linalg.solve(cov[np.ix_(c, c)], cov[np.ix_(c, b)])


def partial_covariance_by_inversion(cov: np.ndarray, i: int, j: int, c: Sequence[int]) -> float:
    """Same quantity via the inverse of the precision block of {i, j}."""
    index = [i, j, *c]
    precision = np.linalg.inv(np.asarray(cov, dtype=np.float64)[np.ix_(index, index)])
    return float(np.linalg.inv(precision[:2, :2])[0, 1])


def closed_form_partial_covariance(rho: float, m: int) -> float:
    return rho * (1.0 - rho) / (1.0 + (m - 1) * rho)


def equicorrelation_ci(e: Equicorrelation, i: int, j: int, c: Sequence[int] = ()) -> tuple[bool, float]:
    """Whether X_i and X_j are independent given X_c (1-based ids), with the partial covariance."""
    members = list(c)
    ids = [i, j, *members]
    if i == j or len(set(ids)) != len(ids):
        raise InvalidArgumentError(f"Need distinct i, j outside the conditioning set, got {i}, {j}, {members}")
    if not all(1 <= x <= e.n for x in ids):
        raise InvalidArgumentError(f"Indices must lie in 1..{e.n}, got {ids}")
    value = float(partial_covariance(e.covariance(), [i - 1], [j - 1], [x - 1 for x in members])[0, 0])
    return abs(value) <= GAUSSIAN_TOL, value
