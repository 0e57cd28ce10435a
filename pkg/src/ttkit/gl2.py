"""Exact 2x2 integer matrices and bounded membership checks in GL(2, Z)."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .verdict import Verdict

ENTRY_BOUND = 5
POWER_BOUND = 12


class GL2Error(ValueError):
    pass


@dataclass(frozen=True)
class IntMat2:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, rows) -> "IntMat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, o: "IntMat2") -> "IntMat2":
        return IntMat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self) -> "IntMat2":
        return IntMat2(-self.a, -self.b, -self.c, -self.d)

    def inv(self) -> "IntMat2":
        det = self.det
        if det not in (1, -1):
            raise GL2Error("matrix is not invertible over the integers")
        return IntMat2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def __pow__(self, k: int) -> "IntMat2":
        base = self if k >= 0 else self.inv()
        k = abs(k)
        out = I
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def max_abs(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def is_hyperbolic(self) -> bool:
        if self.det == 1:
            return abs(self.trace) > 2
        if self.det == -1:
            return self.trace != 0
        return False

    def spectral_radius(self) -> float:
        t, det = self.trace, self.det
        return (abs(t) + math.sqrt(t * t - 4 * det)) / 2

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


I = IntMat2(1, 0, 0, 1)
A = IntMat2(0, 1, 1, 1)
B = IntMat2(1, 1, 1, 2)
P = IntMat2(0, 1, -1, 0)


def conj(g: IntMat2, a: IntMat2) -> IntMat2:
    """``g a g^-1``"""
    return g @ a @ g.inv()


def _require_hyperbolic(a: IntMat2) -> None:
    if not a.is_hyperbolic():
        raise GL2Error(f"{a} is not hyperbolic")


def in_cyclic(m: IntMat2, a: IntMat2, up_to_sign: bool = False) -> int | None:
    """k with ``m = a^k`` (or ``m = -a^k`` when ``up_to_sign``), else None.

    If ``m = +-a^k`` then ``|tr m| = |tr a^k| >= rho^|k| - 1`` where rho is
    the spectral radius of a, and ``|tr m| <= 2 max|m|``; that caps |k|.
    """
    _require_hyperbolic(a)
    rho = a.spectral_radius()
    cap = 2 * m.max_abs()
    pos, neg = I, I
    ainv = a.inv()
    k = 0
    while True:
        for cand, kk in ((pos, k), (neg, -k)):
            if cand == m:
                return kk
            if up_to_sign and -cand == m:
                return kk
        k += 1
        if rho ** k - 1 > cap + 1:
            return None
        pos, neg = pos @ a, neg @ ainv


@dataclass(frozen=True)
class Membership:
    verdict: Verdict
    witness: object = None
    note: str = ""

    def __bool__(self):
        return self.verdict is Verdict.YES


def centralizes(g: IntMat2, a: IntMat2) -> Membership:
    return Membership(Verdict.of(g @ a == a @ g), g @ a @ g.inv())


def normalizes(g: IntMat2, a: IntMat2, k: int = 1) -> Membership:
    """Whether g normalizes ``<a^k>``: ``g a^k g^-1`` is ``a^k`` or ``a^-k``."""
    _require_hyperbolic(a)
    ak = a ** k
    c = conj(g, ak)
    j = in_cyclic(c, ak)
    return Membership(Verdict.of(j in (1, -1)), (c, j))


def commensurates(g: IntMat2, a: IntMat2, bound: int = POWER_BOUND) -> Membership:
    """Search ``1 <= n <= bound`` with ``g a^n g^-1 = a^m``; witness ``(n, m)``.

    A NO comes with a certificate: if g commensurated ``<a>`` then
    ``g a g^-1`` would commute with a power of a, hence with a.
    """
    _require_hyperbolic(a)
    ga = conj(g, a)
    if ga @ a != a @ ga:
        return Membership(Verdict.NO, ga, "g a g^-1 does not commute with a")
    for n in range(1, bound + 1):
        c = conj(g, a ** n)
        m = in_cyclic(c, a)
        if m is not None:
            return Membership(Verdict.YES, (n, m))
    return Membership(Verdict.INCONCLUSIVE, None, f"no witness with n <= {bound}")


def box(bound: int = ENTRY_BOUND):
    """All integer matrices of determinant +-1 with entries in [-bound, bound]."""
    r = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(r, r, r, r):
        if a * d - b * c in (1, -1):
            yield IntMat2(a, b, c, d)


@dataclass(frozen=True)
class EnumerationReport:
    box_size: int
    centralizing: tuple[IntMat2, ...]
    cyclic_in_box: tuple[IntMat2, ...]
    commensurating: tuple[IntMat2, ...]
    inconclusive: tuple[IntMat2, ...]
    coset_signs: tuple[int, ...]
    normalizes_square: bool

    @property
    def centralizer_matches(self) -> bool:
        return set(self.centralizing) == set(self.cyclic_in_box)

    @property
    def cosets(self) -> int:
        return len(self.coset_signs)


def enumerate_box(a: IntMat2 = A, bound: int = ENTRY_BOUND, power_bound: int = POWER_BOUND) -> EnumerationReport:
    """Centralizing and commensurating elements of the box, with coset data.

    Cosets of the centralizer inside the commensurating set are told apart
    by the sign ``m / n`` of the witness: two elements with the same sign
    differ by an element centralizing a power of a, hence a.
    """
    members = list(box(bound))
    cen = tuple(g for g in members if g @ a == a @ g)
    cyc = tuple(g for g in members if in_cyclic(g, a, up_to_sign=True) is not None)
    com, unknown, signs = [], [], set()
    norm_sq = True
    for g in members:
        res = commensurates(g, a, power_bound)
        if res.verdict is Verdict.YES:
            com.append(g)
            n, m = res.witness
            signs.add(m // n if m % n == 0 else 0)
            norm_sq = norm_sq and bool(normalizes(g, a, 2))
        elif res.verdict is Verdict.INCONCLUSIVE:
            unknown.append(g)
    return EnumerationReport(len(members), cen, cyc, tuple(com), tuple(unknown),
                             tuple(sorted(signs)), norm_sq)


def example1_narrative() -> list[str]:
    """Lines printed by ``gl2 --demo example1``."""
    lines = [
        f"A = {A}   B = {B}   P = {P}",
        f"A^2 = {A ** 2}   equals B: {A ** 2 == B}",
        f"P^2 = {P ** 2}",
    ]
    cpa = conj(P, A)
    lines.append(f"P A P^-1 = {cpa}   equals -A^-1: {cpa == -A.inv()}")
    lines.append(f"P A P^-1 in <A>: {in_cyclic(cpa, A) is not None}   "
                 f"(up to sign: k = {in_cyclic(cpa, A, up_to_sign=True)})")
    lines.append(f"P normalizes <A>: {normalizes(P, A).verdict}")
    cpa2 = conj(P, A ** 2)
    lines.append(f"P A^2 P^-1 = {cpa2}   equals A^-2: {cpa2 == A ** -2}")
    lines.append(f"P normalizes <A^2>: {normalizes(P, A, 2).verdict}")
    res = commensurates(P, A)
    lines.append(f"P commensurates <A>: {res.verdict} with (n, m) = {res.witness}")
    rep = enumerate_box()
    lines.append(f"box |entries| <= {ENTRY_BOUND}: {rep.box_size} elements of GL(2,Z)")
    lines.append(f"centralizing A: {len(rep.centralizing)}, all in <A, -I>: {rep.centralizer_matches}")
    lines.append(f"commensurating <A>: {len(rep.commensurating)} in {rep.cosets} coset(s) of the "
                 f"centralizer; inconclusive: {len(rep.inconclusive)}")
    lines.append(f"every commensurating element normalizes <A^2>: {rep.normalizes_square}")
    return lines
