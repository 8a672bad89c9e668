"""Standard small groups used by the test corpus."""

import re

from tbf.groups import FiniteGroup, build_from_cayley, build_from_permutations, perm_from_cycles


def cyclic(n) -> FiniteGroup:
    table = [[(x + y) % n for y in range(n)] for x in range(n)]
    return build_from_cayley(table, identity=0, labels=[str(x) for x in range(n)])


def dihedral(n) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n. Element ``k + n*b`` is r^k s^b."""
    def mul(x, y):
        a, b = x % n, x // n
        c, d = y % n, y // n
        return (a + (c if b == 0 else -c)) % n + n * ((b + d) % 2)

    N = 2 * n
    table = [[mul(x, y) for y in range(N)] for x in range(N)]
    labels = [f"r{x % n}" + ("s" if x >= n else "") for x in range(N)]
    return build_from_cayley(table, identity=0, labels=labels)


def dicyclic(n) -> FiniteGroup:
    """``<a, x | a^(2n), x^2 = a^n, x a x^-1 = a^-1>``, order 4n; n=2 is Q8."""
    m = 2 * n

    def mul(u, v):
        k, b = u % m, u // m
        j, d = v % m, v // m
        if b == 0:
            return (k + j) % m + m * d
        if d == 0:
            return (k - j) % m + m
        return (k - j + n) % m

    N = 2 * m
    table = [[mul(x, y) for y in range(N)] for x in range(N)]
    labels = [f"a{x % m}" + ("x" if x >= m else "") for x in range(N)]
    return build_from_cayley(table, identity=0, labels=labels)


def quaternion() -> FiniteGroup:
    return dicyclic(2)


def symmetric(n) -> FiniteGroup:
    if n < 2:
        return cyclic(1)
    gens = [perm_from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(perm_from_cycles([tuple(range(1, n + 1))], n))
    return build_from_permutations(gens)


def alternating(n) -> FiniteGroup:
    if n < 3:
        return cyclic(1)
    gens = [perm_from_cycles([(1, 2, k)], n) for k in range(3, n + 1)]
    return build_from_permutations(gens)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Element ``g*|H| + h`` is the pair (g, h)."""
    m = H.order
    N = G.order * m
    table = [
        [G.mul[x // m][y // m] * m + H.mul[x % m][y % m] for y in range(N)] for x in range(N)
    ]
    labels = [f"({G.label(x // m)},{H.label(x % m)})" for x in range(N)]
    return build_from_cayley(table, identity=0, labels=labels)


def corpus_groups() -> dict:
    """The finite test corpus: Z/n for n <= 12, S3, D4, Q8, A4, D6."""
    out = {f"Z{n}": cyclic(n) for n in range(1, 13)}
    out["S3"] = symmetric(3)
    out["D4"] = dihedral(4)
    out["Q8"] = quaternion()
    out["A4"] = alternating(4)
    out["D6"] = dihedral(6)
    return out


_NAMED = {
    "Z": cyclic,
    "C": cyclic,
    "S": symmetric,
    "A": alternating,
    "D": dihedral,
    "Dic": dicyclic,
}


def named_group(name: str) -> FiniteGroup:
    """``Z12``, ``S4``, ``A5``, ``D6`` (order 12), ``Dic3``, ``Q8``."""
    if name == "Q8":
        return quaternion()
    m = re.fullmatch(r"(Dic|Z|C|S|A|D)(\d+)", name.strip())
    if not m:
        raise KeyError(f"unknown group name {name!r}")
    return _NAMED[m.group(1)](int(m.group(2)))
