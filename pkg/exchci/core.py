"""Ground sets, bit-mask subsets, dyads and node-permutation actions.

Every other module addresses elements by dense index into a GroundSet and
encodes subsets as plain ``int`` bit masks (bit k set means element k is in
the set). Node ids are 1-based.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from functools import lru_cache

from exchci.config import MAX_ELEMENTS
from exchci.errors import CapacityError, InvalidArgumentError

logger = logging.getLogger(__name__)

VarSet = int


class Kind(StrEnum):
    VECTOR = "vector"
    NETWORK = "network"


@dataclass(frozen=True, order=True)
class Dyad:
    """An unordered node pair, stored with i < j."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise InvalidArgumentError(f"Dyad needs two distinct nodes, got {self.i}-{self.j}")
        if self.i < 1 or self.j < 1:
            raise InvalidArgumentError(f"Node ids are 1-based, got {self.i}-{self.j}")
        if self.i > self.j:
            lo, hi = self.j, self.i
            object.__setattr__(self, "i", lo)
            object.__setattr__(self, "j", hi)

    def __str__(self) -> str:
        return f"{self.i}-{self.j}"

    @property
    def nodes(self) -> tuple[int, int]:
        return (self.i, self.j)

    def shares_node(self, other: "Dyad") -> bool:
        return bool(set(self.nodes) & set(other.nodes))

    @classmethod
    def parse(cls, text: str) -> "Dyad":
        left, sep, right = text.strip().partition("-")
        if not sep:
            raise InvalidArgumentError(f"Not a dyad token: {text!r}")
        try:
            return cls(int(left), int(right))
        except ValueError as e:
            raise InvalidArgumentError(f"Not a dyad token: {text!r}") from e


Element = int | Dyad


# ---------------------------------------------------------------------------
# Bit-mask helpers
# ---------------------------------------------------------------------------


def bit(index: int) -> VarSet:
    return 1 << index


def iter_bits(mask: VarSet) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: VarSet) -> Iterator[VarSet]:
    """Yield every subset of mask, mask itself first and 0 last."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_by_size(mask: VarSet, sizes: Iterable[int] | None = None) -> Iterator[VarSet]:
    """Yield subsets of mask by increasing cardinality, lexicographic by index within a size."""
    indices = list(iter_bits(mask))
    for size in sizes if sizes is not None else range(len(indices) + 1):
        for combo in itertools.combinations(indices, size):
            yield sum(1 << k for k in combo)


# ---------------------------------------------------------------------------
# NodePermutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodePermutation:
    """A bijection on nodes 1..n; mapping[x - 1] is the image of x."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise InvalidArgumentError(f"Not a permutation of 1..{len(self.mapping)}: {self.mapping!r}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, node: int) -> int:
        return self.mapping[node - 1]

    @classmethod
    def identity(cls, n: int) -> "NodePermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "NodePermutation":
        images = list(range(1, n + 1))
        images[a - 1], images[b - 1] = b, a
        return cls(tuple(images))

    @classmethod
    def cycle(cls, n: int, nodes: Iterable[int]) -> "NodePermutation":
        """The cyclic permutation sending each listed node to the next one."""
        order = list(nodes)
        images = list(range(1, n + 1))
        for src, dst in zip(order, order[1:] + order[:1]):
            images[src - 1] = dst
        return cls(tuple(images))

    def compose(self, other: "NodePermutation") -> "NodePermutation":
        """Return self after other: x -> self(other(x))."""
        if other.n != self.n:
            raise InvalidArgumentError(f"Cannot compose permutations of {self.n} and {other.n} nodes")
        return NodePermutation(tuple(self(other(x)) for x in range(1, self.n + 1)))

    def inverse(self) -> "NodePermutation":
        images = [0] * self.n
        for x, y in enumerate(self.mapping, start=1):
            images[y - 1] = x
        return NodePermutation(tuple(images))

    def is_identity(self) -> bool:
        return self.mapping == tuple(range(1, self.n + 1))

    def image(self, element: Element) -> Element:
        if isinstance(element, Dyad):
            return Dyad(self(element.i), self(element.j))
        return self(element)

    def __str__(self) -> str:
        return "(" + " ".join(str(x) for x in self.mapping) + ")"


def all_permutations(n: int) -> list[NodePermutation]:
    return [NodePermutation(p) for p in itertools.permutations(range(1, n + 1))]


# ---------------------------------------------------------------------------
# GroundSet
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Relabeling:
    """An element-index map induced by a node permutation, with byte lookup tables for masks."""

    index_map: tuple[int, ...]
    _tables: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        tables = []
        for offset in range(0, len(self.index_map), 8):
            chunk = self.index_map[offset:offset + 8]
            table = []
            for byte in range(256):
                image = 0
                for k, target in enumerate(chunk):
                    if byte >> k & 1:
                        image |= 1 << target
                table.append(image)
            tables.append(tuple(table))
        object.__setattr__(self, "_tables", tuple(tables))

    def __call__(self, mask: VarSet) -> VarSet:
        image = 0
        for table in self._tables:
            image |= table[mask & 0xFF]
            mask >>= 8
        return image


@dataclass(frozen=True)
class GroundSet:
    """An indexed element universe: node ids for vectors, dyads for networks.

    `n` is the node count; `elements` may be a subset of the full universe
    (marginal and conditional tables), always kept in lexicographic order.
    """

    kind: Kind
    n: int
    elements: tuple[Element, ...]
    _index: dict[Element, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidArgumentError(f"Ground set needs n >= 1, got {self.n}")
        if len(self.elements) > MAX_ELEMENTS:
            raise CapacityError(
                f"Ground set of {len(self.elements)} elements exceeds the {MAX_ELEMENTS}-element bound"
            )
        expected = Dyad if self.kind is Kind.NETWORK else int
        for element in self.elements:
            if not isinstance(element, expected) or isinstance(element, bool):
                raise InvalidArgumentError(f"{element!r} is not a {self.kind} element")
            nodes = element.nodes if isinstance(element, Dyad) else (element,)
            if max(nodes) > self.n:
                raise InvalidArgumentError(f"Element {element} refers to a node beyond n={self.n}")
        if list(self.elements) != sorted(set(self.elements)):
            raise InvalidArgumentError("Ground elements must be distinct and in lexicographic order")
        object.__setattr__(self, "_index", {e: k for k, e in enumerate(self.elements)})

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> VarSet:
        return (1 << len(self.elements)) - 1

    @property
    def is_full(self) -> bool:
        if self.kind is Kind.NETWORK:
            return self.size == self.n * (self.n - 1) // 2
        return self.size == self.n

    def index(self, element: Element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise InvalidArgumentError(f"{element} is not in the ground set") from None

    def __contains__(self, element: object) -> bool:
        return element in self._index

    def mask_of(self, elements: Iterable[Element]) -> VarSet:
        mask = 0
        for element in elements:
            mask |= 1 << self.index(element)
        return mask

    def members(self, mask: VarSet) -> list[Element]:
        self.check_mask(mask)
        return [self.elements[k] for k in iter_bits(mask)]

    def check_mask(self, mask: VarSet) -> None:
        if mask < 0 or mask & ~self.full_mask:
            raise InvalidArgumentError(f"Mask {mask:#x} reaches outside the {self.size}-element ground set")

    def token(self, element: Element) -> str:
        return str(element)

    def parse_token(self, text: str) -> Element:
        text = text.strip()
        if self.kind is Kind.NETWORK:
            element: Element = Dyad.parse(text)
        else:
            try:
                element = int(text)
            except ValueError as e:
                raise InvalidArgumentError(f"Not a vector element token: {text!r}") from e
        self.index(element)
        return element

    def format_set(self, mask: VarSet) -> str:
        return "{" + ",".join(self.token(e) for e in self.members(mask)) + "}"

    def parse_set(self, text: str) -> VarSet:
        """Parse '{1-2,1-3}', '1-2,1-3' or '' into a mask."""
        body = text.strip()
        if body.startswith("{") and body.endswith("}"):
            body = body[1:-1]
        tokens = [t for t in (part.strip() for part in body.split(",")) if t]
        return self.mask_of(self.parse_token(t) for t in tokens)

    def restrict(self, mask: VarSet) -> "GroundSet":
        """The sub-ground holding exactly the masked elements, order kept."""
        return GroundSet(self.kind, self.n, tuple(self.members(mask)))

    def nodes_of(self, mask: VarSet) -> set[int]:
        nodes: set[int] = set()
        for element in self.members(mask):
            nodes.update(element.nodes if isinstance(element, Dyad) else (element,))
        return nodes

    def relabeling(self, perm: NodePermutation) -> Relabeling:
        """Element-index map of perm; every image must stay inside this ground set."""
        if perm.n != self.n:
            raise InvalidArgumentError(f"Permutation over {perm.n} nodes applied to a ground over {self.n}")
        return _relabeling(self, perm)

    def act(self, perm: NodePermutation, mask: VarSet) -> VarSet:
        self.check_mask(mask)
        return self.relabeling(perm)(mask)

    def symmetry_group(self) -> list[NodePermutation]:
        """All node permutations mapping the element set onto itself."""
        if self.is_full:
            return all_permutations(self.n)
        return [p for p in all_permutations(self.n) if {p.image(e) for e in self.elements} == set(self.elements)]

    def generators(self) -> list[NodePermutation]:
        """A generating set of symmetry_group(); a transposition plus a full cycle on full grounds."""
        if self.n < 2:
            return []
        if self.is_full:
            return [NodePermutation.transposition(self.n, 1, 2), NodePermutation.cycle(self.n, range(1, self.n + 1))]
        return [p for p in self.symmetry_group() if not p.is_identity()]


@lru_cache(maxsize=4096)
def _relabeling(ground: GroundSet, perm: NodePermutation) -> Relabeling:
    targets = []
    for element in ground.elements:
        image = perm.image(element)
        if image not in ground:
            raise InvalidArgumentError(f"Permutation {perm} sends {element} to {image}, outside the ground set")
        targets.append(ground.index(image))
    return Relabeling(tuple(targets))


def vector_universe(n: int) -> GroundSet:
    if n < 1:
        raise InvalidArgumentError(f"Vector ground set needs n >= 1, got {n}")
    if n > MAX_ELEMENTS:
        raise CapacityError(f"Vector ground set of {n} elements exceeds the {MAX_ELEMENTS}-element bound")
    return GroundSet(Kind.VECTOR, n, tuple(range(1, n + 1)))


def dyad_universe(n: int) -> GroundSet:
    """All dyads i-j, 1 <= i < j <= n, in lexicographic order."""
    if n < 1:
        raise InvalidArgumentError(f"Network ground set needs n >= 1, got {n}")
    count = n * (n - 1) // 2
    if count > MAX_ELEMENTS:
        raise CapacityError(f"Network on {n} nodes has {count} dyads, beyond the {MAX_ELEMENTS}-element bound")
    return GroundSet(Kind.NETWORK, n, tuple(Dyad(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)))


def universe(kind: Kind, n: int) -> GroundSet:
    return dyad_universe(n) if kind is Kind.NETWORK else vector_universe(n)


def act(perm: NodePermutation, s: VarSet, g: GroundSet) -> VarSet:
    """Apply the action induced by perm to the subset s of g."""
    return g.act(perm, s)
