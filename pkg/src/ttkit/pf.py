"""Perron-Frobenius data of nonnegative integer matrices.

The eigenpair comes from deterministic power iteration in double precision;
the integer characteristic polynomial is computed exactly and used as an
independent certificate for the eigenvalue.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np
import sympy

from .graphmap import Matrix

DEFAULT_TOL = 1e-9


class PFError(ValueError):
    pass


def _as_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    rows = tuple(tuple(int(x) for x in r) for r in m)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise PFError("matrix must be square and nonempty")
    if any(x < 0 for r in rows for x in r):
        raise PFError("matrix has a negative entry")
    return rows


def is_irreducible(m: Sequence[Sequence[int]]) -> bool:
    rows = _as_matrix(m)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(len(rows)))
    dg.add_edges_from((i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if x)
    return nx.is_strongly_connected(dg)


def _bool_mul(a, b):
    n = len(a)
    return [[any(a[i][k] and b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def is_primitive(m: Sequence[Sequence[int]]) -> bool:
    """Irreducible and the boolean power of index (n-1)^2 + 1 is positive."""
    rows = _as_matrix(m)
    if not is_irreducible(rows):
        return False
    n = len(rows)
    e = (n - 1) ** 2 + 1
    base = [[bool(x) for x in r] for r in rows]
    acc = None
    while e:
        if e & 1:
            acc = base if acc is None else _bool_mul(acc, base)
        e >>= 1
        if e:
            base = _bool_mul(base, base)
    return all(all(r) for r in acc)


def char_poly(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Coefficients of det(xI - M), leading coefficient first."""
    x = sympy.Symbol("x")
    return tuple(int(c) for c in sympy.Matrix(_as_matrix(m)).charpoly(x).all_coeffs())


def irreducible_factors(coeffs: Sequence[int]) -> list[tuple[int, ...]]:
    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(sympy.Poly(list(coeffs), x))
    return [tuple(int(c) for c in f.all_coeffs()) for f, _ in factors]


def _horner(coeffs: Sequence, x):
    acc = 0 * x
    for c in coeffs:
        acc = acc * x + c
    return acc


def _relative_residual(coeffs: Sequence[int], lam: float) -> float:
    """|p(lam)| scaled by the sum of |c_i| lam^i, evaluated exactly."""
    x = Fraction(lam)
    num = abs(_horner(coeffs, x))
    den = _horner([abs(c) for c in coeffs], x)
    return float(num / den) if den else 0.0


def _sign_change(coeffs: Sequence[int], lam: float, rel: float) -> bool:
    x = Fraction(lam)
    d = x * Fraction(rel)
    lo, hi = _horner(coeffs, x - d), _horner(coeffs, x + d)
    return lo == 0 or hi == 0 or (lo < 0) != (hi < 0)


@dataclass(frozen=True)
class PFData:
    lam: float
    log_lambda: float
    lengths: tuple[float, ...]
    residual: float
    char_poly: tuple[int, ...]
    min_poly: tuple[int, ...]
    char_residual: float
    root_certified: bool
    iterations: int

    @property
    def volume(self) -> float:
        return float(sum(self.lengths))


def pf_eigen(m: Sequence[Sequence[int]], tol: float = DEFAULT_TOL,
             max_iter: int = 100_000) -> PFData:
    """Left PF eigenpair: ``lengths @ M = lam * lengths`` with sum(lengths) = 1."""
    rows = _as_matrix(m)
    if not is_primitive(rows):
        raise PFError("pf_eigen needs a primitive matrix")
    n = len(rows)
    top = max(max(r) for r in rows)
    s = np.array([[x / top for x in r] for r in rows], dtype=float)

    v = np.ones(n) / n
    best = math.inf
    stall = 0
    it = 0
    for it in range(1, max_iter + 1):
        w = v @ s
        w /= w.sum()
        delta = float(np.max(np.abs(w - v)))
        v = w
        if delta < best * 0.999:
            best = delta
            stall = 0
        else:
            stall += 1
        if delta == 0.0 or (best < 1e-13 and stall >= 5):
            break
    else:
        raise PFError("power iteration did not converge")
    w = v @ s
    lam_s = float(w.sum() / v.sum())
    residual = float(np.max(np.abs(w - lam_s * v)) / (lam_s * np.max(v)))
    if residual > tol:
        raise PFError(f"eigenpair residual {residual:.3g} exceeds tolerance {tol:g}")

    log_lambda = math.log(lam_s) + math.log(top)
    try:
        lam = lam_s * top
    except OverflowError:
        lam = math.inf

    cp = char_poly(rows)
    factors = irreducible_factors(cp)
    if math.isfinite(lam):
        mp = min(factors, key=lambda f: _relative_residual(f, lam))
        lam = _polish(mp, lam)
        log_lambda = math.log(lam)
        char_res = _relative_residual(cp, lam)
        certified = _sign_change(mp, lam, max(tol, 1e-12)) and char_res <= tol
    else:
        mp = cp
        char_res = math.nan
        certified = False
    lengths = tuple(float(x) for x in v / v.sum())
    return PFData(lam, log_lambda, lengths, residual, cp, mp, char_res, certified, it)


def _polish(coeffs: Sequence[int], lam: float) -> float:
    """A few Newton steps on the minimal factor; keeps lam if nothing improves."""
    deriv = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
    if not deriv:
        return lam
    best, best_res = lam, _relative_residual(coeffs, lam)
    x = lam
    for _ in range(6):
        try:
            dp = float(_horner(deriv, Fraction(x)))
            if dp == 0:
                break
            x = x - float(_horner(coeffs, Fraction(x))) / dp
        except (OverflowError, ZeroDivisionError):
            break
        if not math.isfinite(x) or x <= 0:
            break
        res = _relative_residual(coeffs, x)
        if res < best_res:
            best, best_res = x, res
    if abs(best - lam) > 1e-6 * lam:
        return lam
    return best


@dataclass(frozen=True)
class TranslationLength:
    """Signed translation length ``k * log(lambda)`` along the axis."""
    k: int
    log_lambda: float

    @property
    def rho(self) -> float:
        return self.k * self.log_lambda

    def __add__(self, other: "TranslationLength") -> "TranslationLength":
        if other.log_lambda != self.log_lambda:
            raise ValueError("translation lengths over different base maps")
        return TranslationLength(self.k + other.k, self.log_lambda)

    def __neg__(self) -> "TranslationLength":
        return TranslationLength(-self.k, self.log_lambda)


def translation_length(pf: PFData, k: int) -> TranslationLength:
    return TranslationLength(int(k), pf.log_lambda)


def discreteness_defect(rho: float, base_log: float) -> float:
    """Distance of rho / log(lambda) from the nearest integer."""
    q = rho / base_log
    return abs(q - round(q))
