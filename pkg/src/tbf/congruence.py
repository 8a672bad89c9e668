"""Moebius inversion of Reidemeister sequences and the Gauss congruences.

For a sequence ``R_n = R(phi^n)`` the sums ``S_n = sum_{d | n} mu(d) R_{n/d}``
count points of least period ``n`` and should be divisible by ``n``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from tbf.errors import InfiniteTerm, NegativePeriodCount, NonDivisible, VerificationError
from tbf.intlinalg import INFINITE


def mobius(d: int) -> int:
    if d < 1:
        raise ValueError("mobius is defined for positive integers")
    k = 0
    p = 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            k += 1
        p += 1
    if d > 1:
        k += 1
    return -1 if k % 2 else 1


def divisors(n: int) -> list:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@dataclass(frozen=True)
class ReidemeisterSequence:
    values: tuple              # R(phi^n) for n = 1..N, ints or INFINITE
    source: str = "finite"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def from_function(cls, R, N, source="finite"):
        """Sequence ``R(1), ..., R(N)``."""
        return cls(tuple(R(n) for n in range(1, N + 1)), source)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        """``R(phi^n)``, 1-based."""
        if not 1 <= n <= len(self.values):
            raise IndexError(n)
        return self.values[n - 1]

    def pairs(self):
        return [(n, v) for n, v in enumerate(self.values, start=1)]


@dataclass
class CongruenceReport:
    per_n: list                # (n, S_n, S_n mod n, pass)
    P: list                    # P_n = S_n

    @property
    def passed(self):
        return all(ok for *_, ok in self.per_n)

    def to_json(self):
        return {
            "passed": self.passed,
            "rows": [{"n": n, "S": s, "S_mod_n": r, "pass": ok} for n, s, r, ok in self.per_n],
        }


def _require_finite(seq):
    for n, v in seq.pairs():
        if v is INFINITE:
            raise InfiniteTerm(n)


def gauss_congruence_check(seq: ReidemeisterSequence) -> CongruenceReport:
    _require_finite(seq)
    rows, P = [], []
    for n in range(1, len(seq) + 1):
        s = sum(mobius(d) * seq[n // d] for d in divisors(n))
        rows.append((n, s, s % n, s % n == 0))
        P.append(s)
    return CongruenceReport(rows, P)


def periodic_orbit_decomposition(seq: ReidemeisterSequence) -> list:
    """``[(d, P_d / d)]``: number of orbits of exact period ``d``.

    ``sum_{d | n} P_d = R(phi^n)`` is re-checked for every ``n``.
    """
    rep = gauss_congruence_check(seq)
    out = []
    for d, p in enumerate(rep.P, start=1):
        if p < 0:
            raise NegativePeriodCount(d, p)
        if p % d:
            raise NonDivisible(d, p)
        out.append((d, p // d))
    for n in range(1, len(seq) + 1):
        if sum(rep.P[d - 1] for d in divisors(n)) != seq[n]:
            raise VerificationError(f"periodic counts do not rebuild R(phi^{n})")
    return out


def congruence_csv(seq: ReidemeisterSequence) -> str:
    """CSV with columns ``n, R, S_n, S_n mod n, P_n, P_n/n``."""
    rep = gauss_congruence_check(seq)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "R", "S_n", "S_n_mod_n", "P_n", "P_n_over_n"])
    for n, s, r, _ in rep.per_n:
        w.writerow([n, seq[n], s, r, s, s // n if r == 0 else ""])
    return buf.getvalue()
