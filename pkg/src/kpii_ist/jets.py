"""Truncated multivariate Taylor (jet) arithmetic in three variables.

A jet of degree ``d`` at a point stores the Taylor coefficients
``c_l = (1/l!) * d^l f`` for every 3-index multi-index ``|l| <= d``.  All the
exact derivatives in this package come from jets of finite exponential sums:
each term ``w * exp(p . h)`` has the closed-form coefficients
``w * p1^l1 p2^l2 p3^l3 / (l1! l2! l3!)``, and ratios/logarithms of such jets
stay exact to machine rounding.  No symbolic engine, no finite differences.

Coefficients live in a flat numpy vector aligned with ``multi_indices(degree)``
(graded ordering); real and complex dtypes both work.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np


@lru_cache(maxsize=None)
def multi_indices(degree: int) -> tuple:
    """All multi-indices (l1, l2, l3) with l1+l2+l3 <= degree, graded order."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    out = []
    for total in range(degree + 1):
        for l1 in range(total, -1, -1):
            for l2 in range(total - l1, -1, -1):
                out.append((l1, l2, total - l1 - l2))
    return tuple(out)


@lru_cache(maxsize=None)
def _positions(degree: int) -> dict:
    return {l: i for i, l in enumerate(multi_indices(degree))}


@lru_cache(maxsize=None)
def _product_table(degree: int) -> tuple:
    # For each output slot: index arrays (ia, ib) with idx[ia] + idx[ib] = idx[out].
    idx = multi_indices(degree)
    pos = _positions(degree)
    pairs = [[] for _ in idx]
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            s = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
            k = pos.get(s)
            if k is not None:
                pairs[k].append((i, j))
    return tuple(
        (np.array([p[0] for p in ps]), np.array([p[1] for p in ps]))
        for ps in pairs
    )


@lru_cache(maxsize=None)
def _factorial_scale(degree: int) -> np.ndarray:
    # l! per slot, as floats (largest is 6! = 720, exactly representable).
    return np.array(
        [float(factorial(a) * factorial(b) * factorial(c))
         for a, b, c in multi_indices(degree)]
    )


@dataclass(frozen=True)
class Jet:
    """Taylor coefficients of a scalar function of (h1, h2, h3), truncated."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if coeffs.shape != (len(multi_indices(self.degree)),):
            raise ValueError("coefficient vector does not match the degree")
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(value, degree: int) -> "Jet":
        coeffs = np.zeros(len(multi_indices(degree)), dtype=np.result_type(value, 1.0))
        coeffs[0] = value
        return Jet(degree, coeffs)

    @staticmethod
    def affine(value, grad, degree: int) -> "Jet":
        """Jet of value + grad[0] h1 + grad[1] h2 + grad[2] h3."""
        if degree < 1:
            raise ValueError("affine jet needs degree >= 1")
        coeffs = np.zeros(len(multi_indices(degree)), dtype=np.result_type(value, *grad, 1.0))
        coeffs[0] = value
        pos = _positions(degree)
        coeffs[pos[(1, 0, 0)]] = grad[0]
        coeffs[pos[(0, 1, 0)]] = grad[1]
        coeffs[pos[(0, 0, 1)]] = grad[2]
        return Jet(degree, coeffs)

    # -- accessors ---------------------------------------------------------

    @property
    def value(self):
        return self.coeffs[0]

    def coeff(self, l):
        i = _positions(self.degree).get(tuple(int(v) for v in l))
        if i is None:
            raise ValueError(f"multi-index {l} outside degree {self.degree}")
        return self.coeffs[i]

    def derivative(self, l):
        """Partial derivative d^l f = l! * coeff(l)."""
        l = tuple(int(v) for v in l)
        return self.coeff(l) * float(factorial(l[0]) * factorial(l[1]) * factorial(l[2]))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Jet"):
        if other.degree != self.degree:
            raise ValueError("jet degrees differ")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.degree, self.coeffs + other.coeffs)
        coeffs = self.coeffs.astype(np.result_type(self.coeffs, other), copy=True)
        coeffs[0] += other
        return Jet(self.degree, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.degree, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.degree, self.coeffs * other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        out = np.empty(len(a), dtype=np.result_type(a, b))
        for k, (ia, ib) in enumerate(_product_table(self.degree)):
            out[k] = np.dot(a[ia], b[ib])
        return Jet(self.degree, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.degree, self.coeffs / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet":
        """1/f as a jet; needs a nonzero constant term."""
        v = self.value
        if v == 0:
            raise ZeroDivisionError("jet has zero constant term")
        u = Jet(self.degree, self.coeffs / v)  # 1 + nilpotent part
        u = u - 1.0
        acc = Jet.constant(1.0, self.degree)
        power = Jet.constant(1.0, self.degree)
        for _ in range(self.degree):
            power = power * u
            acc = acc - power if _ % 2 == 0 else acc + power
        return acc * (1.0 / v)

    def log(self) -> "Jet":
        """log f as a jet; the constant term must be positive (real) or nonzero (complex)."""
        v = self.value
        if np.iscomplexobj(self.coeffs):
            if v == 0:
                raise ValueError("log of a jet with zero constant term")
        elif v <= 0:
            raise ValueError("log of a jet with nonpositive constant term")
        u = Jet(self.degree, self.coeffs / v) - 1.0
        acc = Jet.constant(np.log(v), self.degree)
        power = Jet.constant(1.0, self.degree)
        for k in range(1, self.degree + 1):
            power = power * u
            acc = acc + power * ((-1.0) ** (k + 1) / k)
        return acc


def exp_sum_jet(weights, powers, degree: int) -> Jet:
    """Jet at h = 0 of f(h) = sum_j weights[j] * exp(powers[j] . h).

    ``powers`` is (n, 3); ``weights`` may be real or complex.  Used for tau
    functions and eigenfunction numerators, whose derivatives are then exact.
    """
    weights = np.asarray(weights)
    powers = np.asarray(powers, dtype=float)
    if powers.ndim != 2 or powers.shape[1] != 3 or powers.shape[0] != weights.shape[0]:
        raise ValueError("powers must be (n, 3) matching weights")
    idx = multi_indices(degree)
    out = np.empty(len(idx), dtype=np.result_type(weights, 1.0))
    p1, p2, p3 = powers[:, 0], powers[:, 1], powers[:, 2]
    scale = _factorial_scale(degree)
    for k, (l1, l2, l3) in enumerate(idx):
        out[k] = np.dot(weights, p1 ** l1 * p2 ** l2 * p3 ** l3) / scale[k]
    return Jet(degree, out)
