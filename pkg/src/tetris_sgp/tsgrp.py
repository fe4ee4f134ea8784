"""Transformation semigroups given by generator tables.

Transformations act on the right: ``compose(a, b)`` is "apply ``a``, then
``b``", so ``compose(a, b).map[i] == b.map[a.map[i]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EnumerationLimitError, InvariantError, TetrisSgpError

DEFAULT_ELEMENT_CAP = 5_000_000
DEFAULT_MAX_BYTES = 1_500_000_000


class Transformation:
    """A total map on ``range(n)``, stored as a read-only integer array."""

    __slots__ = ("map", "_key")

    def __init__(self, mapping):
        arr = np.array(mapping, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("a transformation is a 1-d array")
        if arr.size and (arr.min() < 0 or arr.max() >= arr.size):
            raise ValueError("transformation entries must lie in [0, n)")
        arr.setflags(write=False)
        self.map = arr
        self._key = None

    @classmethod
    def identity(cls, n: int) -> "Transformation":
        return cls(np.arange(n))

    @classmethod
    def constant(cls, n: int, c: int) -> "Transformation":
        return cls(np.full(n, c))

    def __len__(self):
        return self.map.size

    def __call__(self, i: int) -> int:
        return int(self.map[i])

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.map.tobytes()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Transformation):
            return NotImplemented
        return np.array_equal(self.map, other.map)

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        return compose(self, other)

    def image(self) -> tuple:
        return tuple(np.unique(self.map).tolist())

    def __repr__(self):
        return f"Transformation({self.map.tolist()})"


def compose(a: Transformation, b: Transformation) -> Transformation:
    if len(a) != len(b):
        raise ValueError(f"cannot compose maps on {len(a)} and {len(b)} points")
    return Transformation(b.map[a.map])


def power(t: Transformation, m: int) -> Transformation:
    result = Transformation.identity(len(t))
    base = t
    while m:
        if m & 1:
            result = compose(result, base)
        base = compose(base, base)
        m >>= 1
    return result


def element_is_aperiodic(t: Transformation) -> bool:
    """True iff the powers of ``t`` settle on a single idempotent.

    Walks t, t^2, ... until a power repeats; the element is aperiodic
    exactly when the cycle it falls into has length one.
    """
    seen = {}
    p = t
    e = 1
    while p.key() not in seen:
        seen[p.key()] = e
        p = compose(p, t)
        e += 1
    return e - seen[p.key()] == 1


def _omega_exponent(n: int) -> int:
    # any exponent >= n is past the tail of every map on n points
    e = 1
    while e < n:
        e <<= 1
    return e


def batch_aperiodic(maps: np.ndarray, chunk: int = 20_000) -> np.ndarray:
    """Vectorized aperiodicity test for the rows of ``maps``.

    Squares each row up to ``t^E`` with ``E >= n`` and checks ``t^E t == t^E``.
    """
    maps = np.asarray(maps)
    m, n = maps.shape
    out = np.empty(m, dtype=bool)
    squarings = _omega_exponent(n).bit_length() - 1
    for lo in range(0, m, chunk):
        t = maps[lo:lo + chunk].astype(np.intp)
        p = t
        for _ in range(squarings):
            p = np.take_along_axis(p, p, axis=1)
        q = np.take_along_axis(t, p, axis=1)
        out[lo:lo + chunk] = (q == p).all(axis=1)
    return out


@dataclass(frozen=True)
class ActionTables:
    """Bare generator tables, for semigroups that do not come from a game."""

    tables: np.ndarray
    generator_labels: tuple

    def __post_init__(self):
        tables = np.array(self.tables, dtype=np.int32)
        if tables.ndim != 2:
            raise ValueError("tables must be a 2-d array (generators x states)")
        tables.setflags(write=False)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "generator_labels", tuple(self.generator_labels))

    @property
    def n_states(self) -> int:
        return self.tables.shape[1]

    @property
    def n_generators(self) -> int:
        return self.tables.shape[0]


def flip_flop() -> ActionTables:
    """The flip-flop monoid on two states: two resets and the identity."""
    return ActionTables(np.array([[0, 0], [1, 1], [0, 1]]), ("A", "B", "I"))


def _dtype_for(n: int):
    return np.uint8 if n <= 256 else np.uint16 if n <= 65536 else np.uint32


@dataclass(frozen=True, eq=False)
class SemigroupEnumeration:
    """All elements of the semigroup generated by some tables.

    ``elements[i]`` is a map array; element ``i`` is ``parent[i]`` followed
    by generator ``letter[i]`` (``parent == -1`` for the generators).
    """

    elements: np.ndarray
    parent: np.ndarray
    letter: np.ndarray
    n_generators: int
    truncated: bool = False

    @property
    def size(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.size

    def element(self, i: int) -> Transformation:
        return Transformation(self.elements[i])

    def witness(self, i: int) -> tuple:
        word = []
        while i >= 0:
            word.append(int(self.letter[i]))
            i = int(self.parent[i])
        return tuple(reversed(word))

    @property
    def witnesses(self) -> list:
        return [self.witness(i) for i in range(self.size)]

    def index_of(self, t: Transformation):
        key = np.asarray(t.map, dtype=self.elements.dtype).tobytes()
        lookup = self.__dict__.get("_lookup")
        if lookup is None:
            width = self.elements.shape[1] * self.elements.itemsize
            raw = self.elements.tobytes()
            lookup = {raw[i * width:(i + 1) * width]: i for i in range(self.size)}
            object.__setattr__(self, "_lookup", lookup)
        return lookup.get(key)


def _tables_of(source) -> np.ndarray:
    return np.asarray(getattr(source, "tables", source))


def evaluate_letters(source, word, n=None) -> Transformation:
    """Transformation of a word given as generator indices; empty word is the identity."""
    tables = _tables_of(source)
    f = np.arange(tables.shape[1] if n is None else n)
    for g in word:
        f = tables[g][f]
    return Transformation(f)


def enumerate_semigroup(source, cap: int = DEFAULT_ELEMENT_CAP,
                        max_bytes: int = DEFAULT_MAX_BYTES, chunk: int = 4096) -> SemigroupEnumeration:
    """Breadth-first closure of the generators under right multiplication.

    Elements are deduplicated on their full map bytes.  Order: distinct
    generators first, then each BFS level with elements in order and
    generators in order within an element.  Raises EnumerationLimitError
    once ``cap`` elements, or ``max_bytes`` of element storage, is reached.
    """
    tables = _tables_of(source)
    n_gen, n = tables.shape
    dtype = _dtype_for(n)
    tables = tables.astype(dtype)
    width = n * np.dtype(dtype).itemsize
    cap = min(cap, max(1, max_bytes // (2 * width + 120)))

    seen: dict[bytes, int] = {}
    parent: list[int] = []
    letter: list[int] = []

    def add(key, p, g):
        if len(seen) >= cap:
            raise EnumerationLimitError("element", cap, len(seen))
        seen[key] = len(seen)
        parent.append(p)
        letter.append(g)

    frontier = []
    for g in range(n_gen):
        key = tables[g].tobytes()
        if key not in seen:
            add(key, -1, g)
            frontier.append(len(seen) - 1)

    keys = None
    while frontier:
        keys = list(seen)  # insertion order == element index
        nxt = []
        for lo in range(0, len(frontier), chunk):
            idx = frontier[lo:lo + chunk]
            block = np.frombuffer(b"".join(keys[i] for i in idx), dtype=dtype).reshape(len(idx), n)
            # prod[e, g] = block[e] followed by generator g
            prod = np.ascontiguousarray(np.moveaxis(tables[:, block], 0, 1))
            raw = prod.tobytes()
            pos = 0
            for e in idx:
                for g in range(n_gen):
                    key = raw[pos:pos + width]
                    pos += width
                    if key not in seen:
                        add(key, e, g)
                        nxt.append(len(seen) - 1)
        frontier = nxt
    elements = np.frombuffer(b"".join(seen), dtype=dtype).reshape(len(seen), n).copy()
    elements.setflags(write=False)
    return SemigroupEnumeration(elements, np.array(parent, dtype=np.int64),
                                np.array(letter, dtype=np.int32), n_gen)


def semigroup_is_aperiodic_elementwise(enum: SemigroupEnumeration) -> bool:
    if enum.truncated:
        raise TetrisSgpError("aperiodicity needs a complete enumeration")
    return bool(batch_aperiodic(enum.elements).all())


def check_closure(enum: SemigroupEnumeration, tables) -> None:
    """Raise InvariantError unless every element times every generator is listed."""
    tables = _tables_of(tables)
    for g in range(tables.shape[0]):
        for i in range(enum.size):
            if enum.index_of(Transformation(tables[g][enum.elements[i]])) is None:
                raise InvariantError(f"element {i} times generator {g} is not enumerated")
