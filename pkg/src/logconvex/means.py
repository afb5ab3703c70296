"""Weighted area integral means over the disk of radius ``r``.

For a weight ``(1 - |z|**2)**alpha`` the mean of ``|f|**p`` over ``|z| < r`` is

    M_{p,alpha}(f, r) = int_{|z|<r} |f|**p dA_alpha / int_{|z|<r} dA_alpha.

Three routes are provided: the monomial ratio of kernel integrals, the
exact coefficient sum for ``p = 2``, and nested polar quadrature for any
``p``.  Internally the radius enters through ``x = r**2``.

Infinite series are not accepted.  Since the mean of ``z**k`` is at most
``r**(2k)``, truncating after degree ``K`` changes ``M_{2,alpha}`` by at most
``sum_{k>K} |a_k|**2 r**(2k)`` (see :func:`tail_bound`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import AccuracyError, DomainError
from .kernels import DEFAULT_TOL, KernelParams, eval_f_lambda
from .quadrature import geometric_breaks, gk_integrate


@dataclass(frozen=True)
class TaylorCoefficients:
    """Coefficients ``a_0 .. a_K`` of a polynomial ``sum a_k z**k``."""

    coeffs: tuple

    def __post_init__(self):
        vals = tuple(complex(c) for c in self.coeffs)
        if not vals:
            raise DomainError("coefficient list must not be empty")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in vals):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coeffs", vals)

    @classmethod
    def of(cls, *coeffs) -> "TaylorCoefficients":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def moduli_sq(self) -> np.ndarray:
        return np.array([abs(c) ** 2 for c in self.coeffs])

    @property
    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __call__(self, z):
        # Horner; accepts complex arrays
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in reversed(self.coeffs):
            out = out * z + c
        return out


def read_coefficients(path) -> TaylorCoefficients:
    """Parse a coefficient file: one ``re im`` pair per line, line index = power.

    Blank lines and lines starting with ``#`` are skipped.
    """
    coeffs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"{path}:{lineno}: expected 're im', got {line!r}")
        try:
            coeffs.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: {exc}") from None
    return TaylorCoefficients(tuple(coeffs))


def format_coefficients(f: TaylorCoefficients) -> str:
    return "".join(f"{c.real!r} {c.imag!r}\n" for c in f.coeffs)


def _check_r(r):
    if not 0 < r < 1:
        raise DomainError(f"r must lie in (0, 1), got {r!r}")


def _check_p(p):
    if not p > 0:
        raise DomainError(f"p must be positive, got {p!r}")


# ---------------------------------------------------------------------------
# monomials and p = 2 series

def monomial_mean_x(p: float, alpha: float, k: int, x: float, tol: float = DEFAULT_TOL) -> float:
    """Mean of ``|z**k|**p`` as a function of ``x = r**2``: ``f_{pk/2}(x) / f_0(x)``."""
    _check_p(p)
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if k == 0:
        return 1.0
    num = eval_f_lambda(KernelParams(p * k / 2.0, alpha), x, tol)
    den = eval_f_lambda(KernelParams(0.0, alpha), x, tol)
    return num / den


def monomial_mean(p: float, alpha: float, k: int, r: float, tol: float = DEFAULT_TOL) -> float:
    """``M_{p,alpha}(z**k, r)``."""
    _check_r(r)
    return monomial_mean_x(p, alpha, k, r * r, tol)


def series_mean_p2_x(f: TaylorCoefficients, alpha: float, x: float, tol: float = DEFAULT_TOL) -> float:
    w = f.moduli_sq
    return math.fsum(w[k] * monomial_mean_x(2.0, alpha, k, x, tol)
                     for k in range(len(w)) if w[k] != 0)


def series_mean_p2(f: TaylorCoefficients, alpha: float, r: float, tol: float = DEFAULT_TOL) -> float:
    """``M_{2,alpha}(f, r) = sum_k |a_k|**2 M_{2,alpha}(z**k, r)``."""
    if not isinstance(f, TaylorCoefficients):
        f = TaylorCoefficients(tuple(f))
    _check_r(r)
    return series_mean_p2_x(f, alpha, r * r, tol)


def circle_mean_p2(f: TaylorCoefficients, r: float) -> float:
    """Hardy circle mean ``(1/2pi) int |f(r e^{it})|**2 dt = sum |a_k|**2 r**(2k)``."""
    _check_r(r)
    w = f.moduli_sq
    return math.fsum(w[k] * r ** (2 * k) for k in range(len(w)))


def tail_bound(tail: TaylorCoefficients, first_power: int, r: float) -> float:
    """Upper bound on the ``p = 2`` mean contributed by terms ``a_k z**k``, ``k >= first_power``.

    ``tail.coeffs[i]`` is the coefficient of ``z**(first_power + i)``.
    """
    _check_r(r)
    w = tail.moduli_sq
    return math.fsum(w[i] * r ** (2 * (first_power + i)) for i in range(len(w)))


# ---------------------------------------------------------------------------
# polar quadrature

def _angular_means(f, rho, p, tol, n0=16, max_nodes=2 ** 14):
    """Angular means of ``|f(rho e^{it})|**p`` for an array of radii."""
    def sample(theta):
        z = rho[:, None] * np.exp(1j * theta)[None, :]
        return np.abs(np.asarray(f(z))) ** p

    n = n0
    prev = sample(2 * np.pi * np.arange(n) / n).mean(axis=1)
    while n < max_nodes:
        odd = sample(2 * np.pi * (np.arange(n) + 0.5) / n).mean(axis=1)
        cur = 0.5 * (prev + odd)
        n *= 2
        if np.all(np.abs(cur - prev) <= tol * np.maximum(np.abs(cur), 1e-300)):
            return cur
        prev = cur
    raise AccuracyError(f"angular means did not settle with {n} nodes", estimate=prev)


def quad_mean(f: Callable, p: float, alpha: float, r: float, tol: float = 1e-10,
              max_panels: int = 4000) -> float:
    """``M_{p,alpha}(f, r)`` by nested polar quadrature.

    ``f`` must accept complex numpy arrays.  The angular integral is a
    periodic trapezoid sum doubled to convergence; the radial integral,
    taken in ``x = rho**2``, is adaptive Gauss-Kronrod.  Raises
    :class:`AccuracyError` (with the achieved estimate) on non-convergence.
    """
    _check_p(p)
    _check_r(r)
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    x_top = r * r
    ang_tol = 0.1 * tol

    def integrand(xs):
        shape = xs.shape
        xs = xs.ravel()
        vals = _angular_means(f, np.sqrt(xs), p, ang_tol)
        return (vals * np.exp(alpha * np.log1p(-xs))).reshape(shape)

    den = eval_f_lambda(KernelParams(0.0, alpha), x_top, min(tol, DEFAULT_TOL))
    breaks = geometric_breaks(0.0, x_top, left=True, depth=20)
    try:
        num, _ = gk_integrate(integrand, breaks, rtol=0.5 * tol, max_panels=max_panels)
    except AccuracyError as exc:
        # the angular stage reports per-radius arrays; only scalar estimates are rescaled
        def scaled(v):
            return v / den if isinstance(v, float) else None
        raise AccuracyError(f"radial quadrature did not converge: {exc}",
                            estimate=scaled(exc.estimate), error=scaled(exc.error)) from None
    return num / den
