"""Small permutation groups: closure, invariants and name lookup.

Permutations are tuples ``p`` with ``p[i]`` the image of point ``i``, and
they compose left to right like transformations do.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from ..errors import InvariantError


def perm_mul(p, q):
    """Apply ``p`` then ``q``."""
    return tuple(q[i] for i in p)


def perm_inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def identity_perm(n):
    return tuple(range(n))


def cycles(p, include_fixed=False):
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen:
            continue
        cyc = []
        j = i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        if len(cyc) > 1 or include_fixed:
            out.append(tuple(cyc))
    return out


def cycle_type(p):
    """Sorted lengths of the non-trivial cycles, longest first."""
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def perm_order(p):
    return lcm(*(len(c) for c in cycles(p, include_fixed=True))) if p else 1


def closure(generators, degree=None):
    """The group generated by ``generators`` (identity included)."""
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = len(gens[0])
    ident = identity_perm(degree)
    group = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = perm_mul(p, g)
            if q not in group:
                group.add(q)
                queue.append(q)
    return group


def is_group(perms) -> bool:
    perms = set(perms)
    if not perms:
        return False
    degree = len(next(iter(perms)))
    if identity_perm(degree) not in perms:
        return False
    return all(perm_mul(p, q) in perms for p in perms for q in perms)


@dataclass(frozen=True)
class GroupFingerprint:
    degree: int
    order: int
    element_orders: tuple  # sorted (element order, count) pairs
    abelian: bool
    name: str

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def order_multiset(self) -> dict:
        return dict(self.element_orders)


def _invariants(perms):
    perms = list(perms)
    orders = Counter(perm_order(p) for p in perms)
    abelian = all(perm_mul(p, q) == perm_mul(q, p) for i, p in enumerate(perms) for q in perms[i + 1:])
    return len(perms), tuple(sorted(orders.items())), abelian


def _quaternion_generators():
    # regular representation of Q8 on {1,-1,i,-i,j,-j,k,-k}
    units = ["1", "i", "j", "k"]
    table = {
        ("1", x): (1, x) for x in units
    }
    table.update({(x, "1"): (1, x) for x in units})
    table.update({
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    })
    elems = [(s, u) for u in units for s in (1, -1)]
    index = {e: n for n, e in enumerate(elems)}

    def right(unit):
        out = []
        for s, u in elems:
            t, v = table[(u, unit)]
            out.append(index[(s * t, v)])
        return tuple(out)

    return [right("i"), right("j")]


# name -> generating permutations
_CATALOG_GENERATORS = {
    "trivial": [(0,)],
    "C2": [(1, 0)],
    "C3": [(1, 2, 0)],
    "C4": [(1, 2, 3, 0)],
    "C2xC2": [(1, 0, 3, 2), (2, 3, 0, 1)],
    "C5": [(1, 2, 3, 4, 0)],
    "C6": [(1, 2, 3, 4, 5, 0)],
    "S3": [(1, 0, 2), (1, 2, 0)],
    "C7": [(1, 2, 3, 4, 5, 6, 0)],
    "C8": [(1, 2, 3, 4, 5, 6, 7, 0)],
    "C4xC2": [(1, 2, 3, 0, 4, 5), (0, 1, 2, 3, 5, 4)],
    "C2xC2xC2": [(1, 0, 2, 3, 4, 5), (0, 1, 3, 2, 4, 5), (0, 1, 2, 3, 5, 4)],
    "D4": [(1, 2, 3, 0), (0, 3, 2, 1)],
    "Q8": _quaternion_generators(),
    "C9": [tuple((i + 1) % 9 for i in range(9))],
    "C3xC3": [(1, 2, 0, 3, 4, 5), (0, 1, 2, 4, 5, 3)],
    "C10": [tuple((i + 1) % 10 for i in range(10))],
    "D5": [(1, 2, 3, 4, 0), (0, 4, 3, 2, 1)],
    "C12": [tuple((i + 1) % 12 for i in range(12))],
    "C6xC2": [(1, 2, 3, 4, 5, 0, 6, 7), (0, 1, 2, 3, 4, 5, 7, 6)],
    "A4": [(1, 2, 0, 3), (1, 0, 3, 2)],
    "D6": [(1, 2, 3, 4, 5, 0), (0, 5, 4, 3, 2, 1)],
    "Dic3": [(1, 2, 0, 3, 4, 5, 6), (0, 2, 1, 4, 5, 6, 3)],
    "S4": [(1, 0, 2, 3), (1, 2, 3, 0)],
    "A5": [(1, 2, 0, 3, 4), (0, 1, 3, 4, 2)],
    "S5": [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)],
}


@lru_cache(maxsize=None)
def group_catalog() -> dict:
    """Map (order, element_orders, abelian) -> name, built by closing the generators."""
    catalog = {}
    for name, gens in _CATALOG_GENERATORS.items():
        key = _invariants(closure(gens))
        if key in catalog:
            raise InvariantError(f"catalog fingerprints of {name} and {catalog[key]} collide")
        catalog[key] = name
    return catalog


def identify_group(perms, check=True) -> GroupFingerprint:
    """Fingerprint a permutation group and look its name up in the catalog."""
    perms = set(tuple(p) for p in perms)
    if not perms:
        raise InvariantError("empty permutation set")
    degree = len(next(iter(perms)))
    if check and not is_group(perms):
        raise InvariantError("permutation set is not closed under composition")
    order, element_orders, abelian = key = _invariants(perms)
    name = group_catalog().get(key, f"unidentified(order={order})")
    return GroupFingerprint(degree, order, element_orders, abelian, name)
