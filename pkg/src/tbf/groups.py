"""Finite groups as dense multiplication tables, and their endomorphisms.

Elements are the integers ``0..N-1`` with the identity normalized to 0.
All objects are immutable once built.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from tbf.config import get_caps
from tbf.errors import (
    CapExceeded,
    GroupMismatch,
    NotAGroup,
    NotAHomomorphism,
    NotGenerating,
    NotNormal,
    ParseError,
)


class FiniteGroup:
    """A validated finite group.

    Build through :func:`build_from_cayley` or :func:`build_from_permutations`;
    the constructor itself does not validate.
    """

    def __init__(self, mul, inv, element_labels=None):
        self.mul = tuple(tuple(row) for row in mul)
        self.inv = tuple(inv)
        self.order = len(self.mul)
        self.identity = 0
        self.element_labels = tuple(element_labels) if element_labels is not None else None

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def __len__(self):
        return self.order

    def label(self, x):
        if self.element_labels is None:
            return str(x)
        return self.element_labels[x]

    @cached_property
    def table(self) -> np.ndarray:
        t = np.array(self.mul, dtype=np.int64).reshape(self.order, self.order)
        t.setflags(write=False)
        return t

    @cached_property
    def inv_array(self) -> np.ndarray:
        a = np.array(self.inv, dtype=np.int64)
        a.setflags(write=False)
        return a

    def power(self, x, k):
        r = 0
        mul = self.mul
        if k < 0:
            x, k = self.inv[x], -k
        while k:
            if k & 1:
                r = mul[r][x]
            x = mul[x][x]
            k >>= 1
        return r

    @cached_property
    def element_orders(self) -> tuple:
        out = []
        mul = self.mul
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = mul[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*self.element_orders)

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, chosen greedily by least index."""
        gens = []
        sub = {0}
        for x in range(1, self.order):
            if x not in sub:
                gens.append(x)
                sub = set(subgroup_closure(self, gens))
            if len(sub) == self.order:
                break
        return tuple(gens)

    @cached_property
    def conjugacy_classes(self) -> "ClassPartition":
        return conjugacy_classes(self)

    def is_abelian(self):
        t = self.table
        return bool((t == t.T).all())


@dataclass(frozen=True)
class FiniteEndo:
    group: FiniteGroup
    map: tuple

    def __call__(self, x):
        return self.map[x]

    def __eq__(self, other):
        if not isinstance(other, FiniteEndo):
            return NotImplemented
        return self.group is other.group and self.map == other.map

    def __hash__(self):
        return hash((id(self.group), self.map))

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.map, dtype=np.int64)
        a.setflags(write=False)
        return a

    def kernel(self):
        return tuple(x for x in range(self.group.order) if self.map[x] == 0)

    def image(self):
        return tuple(sorted(set(self.map)))

    def fixed_points(self):
        return tuple(x for x in range(self.group.order) if self.map[x] == x)

    def is_injective(self):
        return len(set(self.map)) == self.group.order


@dataclass(frozen=True)
class ClassPartition:
    """Partition of ``0..N-1``; class ids are ordered by least element."""

    carrier_size: int
    class_of: tuple
    reps: tuple

    @property
    def count(self):
        return len(self.reps)

    def classes(self):
        out = [[] for _ in self.reps]
        for x, c in enumerate(self.class_of):
            out[c].append(x)
        return out

    def same_class(self, x, y):
        return self.class_of[x] == self.class_of[y]

    @classmethod
    def from_labels(cls, labels):
        """Canonicalize arbitrary class labels to contiguous ids by least element."""
        relabel = {}
        reps = []
        class_of = []
        for x, lab in enumerate(labels):
            if lab not in relabel:
                relabel[lab] = len(reps)
                reps.append(x)
            class_of.append(relabel[lab])
        return cls(len(class_of), tuple(class_of), tuple(reps))


# construction ---------------------------------------------------------------


def _check_table_shape(table):
    n = len(table)
    if n == 0:
        raise ParseError("empty table", field="table")
    for x, row in enumerate(table):
        if len(row) != n:
            raise ParseError(f"row {x} has length {len(row)}, expected {n}", field="table")
        for y, v in enumerate(row):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise ParseError(f"entry {v!r} out of range", field=f"table[{x}][{y}]")
    return n


def _relabel_identity_to_zero(t, e, labels):
    if e == 0:
        return t, labels
    n = len(t)
    perm = np.arange(n)
    perm[0], perm[e] = e, 0          # new index -> old index (an involution)
    t = perm[t[np.ix_(perm, perm)]]
    if labels is not None:
        labels = [labels[perm[i]] for i in range(n)]
    return t, labels


def _first_mismatch(a, b):
    idx = np.argwhere(a != b)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


def build_from_cayley(table, identity=None, labels=None, exhaustive=False) -> FiniteGroup:
    """Validate a Cayley table and return the group it defines.

    ``identity`` may be given; otherwise it is located. Associativity is checked
    on every triple up to the ``assoc_exhaustive`` cap (or always with
    ``exhaustive=True``) and on ``10*N**2`` seeded random triples above it.
    """
    n = _check_table_shape(table)
    if labels is not None and len(labels) != n:
        raise ParseError(f"expected {n} labels, got {len(labels)}", field="labels")
    t = np.array(table, dtype=np.int64)
    full = np.arange(n)

    srt = np.sort(t, axis=1)
    bad = np.nonzero((srt != full).any(axis=1))[0]
    if len(bad):
        x = int(bad[0])
        raise NotAGroup("latin-square", witness=("row", x))
    srt = np.sort(t, axis=0)
    bad = np.nonzero((srt != full[:, None]).any(axis=0))[0]
    if len(bad):
        raise NotAGroup("latin-square", witness=("column", int(bad[0])))

    if identity is None:
        cands = [e for e in range(n) if (t[e] == full).all() and (t[:, e] == full).all()]
        if not cands:
            raise NotAGroup("identity", witness=None)
        e = cands[0]
    else:
        e = identity
        if not 0 <= e < n:
            raise ParseError(f"identity {e} out of range", field="identity")
        row_bad = np.nonzero(t[e] != full)[0]
        col_bad = np.nonzero(t[:, e] != full)[0]
        if len(row_bad) or len(col_bad):
            x = int(row_bad[0]) if len(row_bad) else int(col_bad[0])
            raise NotAGroup("identity", witness=(e, x))

    right_inv = np.argmax(t == e, axis=1)
    left_check = t[right_inv, full]
    bad = np.nonzero(left_check != e)[0]
    if len(bad):
        x = int(bad[0])
        raise NotAGroup("inverses", witness=(x, int(right_inv[x])))

    caps = get_caps()
    if exhaustive or n <= caps.assoc_exhaustive:
        for x in range(n):
            lhs = t[t[x]]            # (x y) z over (y, z)
            rhs = t[x][t]            # x (y z)
            w = _first_mismatch(lhs, rhs)
            if w is not None:
                raise NotAGroup("associativity", witness=(x, w[0], w[1]))
    else:
        rng = np.random.default_rng(0)
        m = 10 * n * n
        for start in range(0, m, 1 << 20):
            k = min(1 << 20, m - start)
            x, y, z = (rng.integers(0, n, size=k) for _ in range(3))
            bad = np.nonzero(t[t[x, y], z] != t[x, t[y, z]])[0]
            if len(bad):
                i = int(bad[0])
                raise NotAGroup("associativity", witness=(int(x[i]), int(y[i]), int(z[i])))

    t, labels = _relabel_identity_to_zero(t, e, labels)
    inv = np.argmax(t == 0, axis=1)
    return FiniteGroup(t.tolist(), inv.tolist(), labels)


def perm_from_cycles(cycles, degree) -> tuple:
    """Permutation of ``range(degree)`` from 1-based cycles, e.g. ``[(1, 2, 3)]``."""
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def cycle_string(perm) -> str:
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = []
        j = i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = perm[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def build_from_permutations(generators, cap=None) -> FiniteGroup:
    """Close a set of permutations under composition.

    The product ``x*y`` is the composite map ``i -> x[y[i]]``. Element 0 is the
    identity; distinct non-identity generators get the next indices in order.
    """
    gens = [tuple(int(v) for v in g) for g in generators]
    if not gens:
        raise ParseError("no generators", field="generators")
    degree = len(gens[0])
    for k, g in enumerate(gens):
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ParseError("not a permutation of a common set", field=f"generators[{k}]")
    cap = get_caps().closure if cap is None else cap

    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    queue = deque([ident])
    for g in gens:
        if g not in index:
            index[g] = len(elements)
            elements.append(g)
            queue.append(g)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)      # g * x
            if y not in index:
                if len(elements) >= cap:
                    raise CapExceeded("permutation closure", cap)
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)

    n = len(elements)
    perms = np.array(elements, dtype=np.int64)
    if degree <= 15:
        weights = degree ** np.arange(degree, dtype=np.int64)
        keys = perms @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]
        table = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            comp = perms[x][perms]          # row y: x[y[i]]
            table[x] = order[np.searchsorted(sorted_keys, comp @ weights)]
        table = table.tolist()
    else:
        table = [[index[tuple(x[i] for i in y)] for y in elements] for x in elements]
    inv = [0] * n
    for x in range(n):
        inv[x] = table[x].index(0)
    return FiniteGroup(table, inv, [cycle_string(p) for p in elements])


# subgroups, conjugacy, quotients -------------------------------------------------


def subgroup_closure(G: FiniteGroup, elems) -> tuple:
    """Sorted elements of the subgroup generated by ``elems``."""
    mul = G.mul
    gens = [g for g in set(elems) if g != 0]
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return tuple(sorted(seen))


def is_subgroup(G: FiniteGroup, H) -> bool:
    hs = set(H)
    if 0 not in hs:
        return False
    return all(G.mul[x][G.inv[y]] in hs for x in hs for y in hs)


def is_normal(G: FiniteGroup, H) -> bool:
    hs = set(H)
    mul, inv = G.mul, G.inv
    return is_subgroup(G, H) and all(
        mul[mul[g][h]][inv[g]] in hs for g in G.generators for h in hs
    )


def conjugacy_classes(G: FiniteGroup) -> ClassPartition:
    """Ordinary conjugacy classes by direct orbit scan."""
    mul, inv = G.mul, G.inv
    label = [-1] * G.order
    k = 0
    for x in range(G.order):
        if label[x] >= 0:
            continue
        for g in range(G.order):
            label[mul[mul[g][x]][inv[g]]] = k
        k += 1
    return ClassPartition.from_labels(label)


def center(G: FiniteGroup) -> tuple:
    mul = G.mul
    return tuple(z for z in range(G.order) if all(mul[z][g] == mul[g][z] for g in G.generators))


def quotient(G: FiniteGroup, H) -> tuple[FiniteGroup, tuple]:
    """Quotient by a normal subgroup.

    Cosets are materialized as sorted index sets and numbered by least element,
    so the coset ``H`` itself is 0. Returns ``(G/H, projection)``.
    """
    if not is_normal(G, H):
        raise NotNormal(f"subgroup of order {len(set(H))} is not normal")
    hs = sorted(set(H))
    mul = G.mul
    proj = [-1] * G.order
    reps = []
    for x in range(G.order):
        if proj[x] >= 0:
            continue
        for h in hs:
            proj[mul[x][h]] = len(reps)
        reps.append(x)
    table = [[proj[mul[a][b]] for b in reps] for a in reps]
    labels = [G.label(r) + "H" for r in reps] if G.element_labels else None
    Q = build_from_cayley(table, identity=0, labels=labels)
    return Q, tuple(proj)


# endomorphisms -------------------------------------------------------------------


def validate_endo(G: FiniteGroup, map) -> FiniteEndo:
    m = [int(v) for v in map]
    if len(m) != G.order:
        raise ParseError(f"map has length {len(m)}, expected {G.order}", field="map")
    if any(not 0 <= v < G.order for v in m):
        raise ParseError("map entry out of range", field="map")
    a = np.array(m, dtype=np.int64)
    t = G.table
    w = _first_mismatch(a[t], t[np.ix_(a, a)])
    if w is not None:
        raise NotAHomomorphism(*w)
    return FiniteEndo(G, tuple(m))


def identity_endo(G: FiniteGroup) -> FiniteEndo:
    return FiniteEndo(G, tuple(range(G.order)))


def trivial_endo(G: FiniteGroup) -> FiniteEndo:
    return FiniteEndo(G, (0,) * G.order)


def inner_auto(G: FiniteGroup, g) -> FiniteEndo:
    """``x -> g x g^-1``."""
    mul, gi = G.mul, G.inv[g]
    return FiniteEndo(G, tuple(mul[mul[g][x]][gi] for x in range(G.order)))


def compose(f: FiniteEndo, g: FiniteEndo) -> FiniteEndo:
    """``f o g``, i.e. ``x -> f(g(x))``."""
    if f.group is not g.group:
        raise GroupMismatch("endomorphisms live on different groups")
    fm = f.map
    return FiniteEndo(f.group, tuple(fm[y] for y in g.map))


def iterate(f: FiniteEndo, n: int) -> FiniteEndo:
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = identity_endo(f.group)
    base = f
    while n:
        if n & 1:
            result = compose(base, result)
        base = compose(base, base)
        n >>= 1
    return result


def induced_endo(f: FiniteEndo, Q: FiniteGroup, proj) -> FiniteEndo:
    """Endomorphism of ``G/H`` induced by ``f``; requires ``f(H) <= H``."""
    from tbf.errors import NotInvariant

    G = f.group
    image = [-1] * Q.order
    for x in range(G.order):
        q, fq = proj[x], proj[f.map[x]]
        if image[q] < 0:
            image[q] = fq
        elif image[q] != fq:
            raise NotInvariant(f"f does not preserve the kernel of the projection (element {x})")
    return validate_endo(Q, image)


def _spanning_plan(G: FiniteGroup, gens):
    """BFS tree and relations of ``<gens>`` over right multiplication by generators.

    Returns ``(tree, relations, elements)`` where ``tree`` lists
    ``(parent, gen_pos, child)`` in discovery order and ``relations`` lists
    ``(y, gen_pos, target)`` for the remaining Cayley graph edges.
    """
    mul = G.mul
    seen = {0}
    tree, relations = [], []
    queue = deque([0])
    while queue:
        y = queue.popleft()
        for i, g in enumerate(gens):
            z = mul[y][g]
            if z in seen:
                relations.append((y, i, z))
            else:
                seen.add(z)
                tree.append((y, i, z))
                queue.append(z)
    return tree, relations, seen


def extend_generator_images(G: FiniteGroup, gens, images):
    """Extend ``gens[i] -> images[i]`` to a homomorphism on ``<gens>``.

    Returns a dict element -> image, or None when the assignment violates
    a relation.
    """
    tree, relations, _ = _spanning_plan(G, gens)
    return _apply_plan(G, tree, relations, images)


def _apply_plan(G, tree, relations, images):
    mul = G.mul
    f = {0: 0}
    for y, i, z in tree:
        f[z] = mul[f[y]][images[i]]
    for y, i, z in relations:
        if mul[f[y]][images[i]] != f[z]:
            return None
    return f


def enumerate_endomorphisms(G: FiniteGroup, generator_set=None) -> Iterator[FiniteEndo]:
    """All endomorphisms of ``G``, by backtracking over generator images.

    Each prefix of generators is checked against the relations of the
    subgroup it generates, so inconsistent partial assignments are pruned early.
    Emission order is lexicographic in the generator images.
    """
    gens = list(G.generators if generator_set is None else generator_set)
    if len(subgroup_closure(G, gens)) != G.order:
        raise NotGenerating(f"{gens} does not generate a group of order {G.order}")
    gens = [g for g in gens if g != 0]
    plans = [_spanning_plan(G, gens[: k + 1])[:2] for k in range(len(gens))]
    orders = G.element_orders
    candidates = [[y for y in range(G.order) if orders[g] % orders[y] == 0] for g in gens]

    def rec(k, images):
        if k == len(gens):
            f = _apply_plan(G, *plans[-1], images) if gens else {0: 0}
            yield validate_endo(G, [f[x] for x in range(G.order)])
            return
        for y in candidates[k]:
            images.append(y)
            if _apply_plan(G, *plans[k], images) is not None:
                yield from rec(k + 1, images)
            images.pop()

    yield from rec(0, [])


def endo_from_generator_images(G: FiniteGroup, assignment: dict) -> FiniteEndo:
    gens = [g for g in assignment if g != 0]
    if len(subgroup_closure(G, gens)) != G.order:
        raise NotGenerating("generator_images keys do not generate the group")
    f = extend_generator_images(G, gens, [assignment[g] for g in gens])
    if f is None:
        # locate a concrete witness through the exhaustive check
        tree, _, _ = _spanning_plan(G, gens)
        mul = G.mul
        partial = {0: 0}
        for y, i, z in tree:
            partial[z] = mul[partial[y]][assignment[gens[i]]]
        return validate_endo(G, [partial[x] for x in range(G.order)])
    return validate_endo(G, [f[x] for x in range(G.order)])
