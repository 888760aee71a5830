"""Computable upper bounds on the Green's function and matrix exponential.

The central quantity is the two-sided exponential envelope

    h(t) = exp(-gamma_minus * t)  for t >= 0,
           exp( gamma_plus * t)   for t <= 0,

whose k-fold self-convolution h^{*k} has an exact closed form: h(t) times a
polynomial of degree k-1 in |t|.  The same quantity can be written with a
modified Bessel function of the second kind of half-integer order; both paths
are implemented and must agree, but the polynomial is authoritative (the
Bessel prefactor is 0/0 at t = 0 and overflows for large gamma*|t|).

Bounds provided:
  * triangular_bound  - sum_k ||N||^k h^{*(k+1)}(t), the main estimate for an
    upper triangular coefficient B = D + N;
  * entrywise_bound   - the same with |N|^k matrices instead of ||N||^k;
  * van_loan_bound    - e^{alpha t} sum_k ||N t||^k / k!  for ||e^{At}||;
  * qtds18_bound      - a comparison double-sum bound using ||A|| and the
    half-plane eigenvalue counts m, l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, Inapplicable, UndefinedAtZero
from .matcore import abs_power, induced_norm, norm_kind, require_strictly_triangular

INF = float("inf")


@dataclass(frozen=True)
class BoundParams:
    """Scalars feeding the triangular bound."""

    n: int
    norm_n: float
    gamma_minus: float
    gamma_plus: float
    norm_p: object = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.norm_n < 0:
            raise ValueError("||N|| must be nonnegative")

    @property
    def gamma(self) -> float:
        return self.gamma_minus + self.gamma_plus


@dataclass(frozen=True)
class QtdsParams:
    """Scalars feeding the comparison bound (needs m >= 1 and l >= 1)."""

    norm_a: float
    m: int
    l: int
    gamma_minus: float
    gamma_plus: float

    @property
    def gamma(self) -> float:
        return self.gamma_minus + self.gamma_plus


def h_eval(t: float, gamma_minus: float, gamma_plus: float) -> float:
    """The two-sided exponential envelope; both branches give 1 at t = 0."""
    if t >= 0:
        return math.exp(-gamma_minus * t)
    return math.exp(gamma_plus * t)


def bessel_k_half(m: int, x: float) -> float:
    """K_{m+1/2}(x) via the exact finite sum for half-integer order."""
    if x <= 0:
        raise DomainError("bessel_k_half requires x > 0")
    if m < 0:
        raise DomainError("order index must be nonnegative")
    total = 0.0
    for j in range(m + 1):
        total += (
            math.factorial(m + j)
            / (math.factorial(j) * math.factorial(m - j) * (2.0 * x) ** j)
        )
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * total


def conv_power_poly(k: int, u: float, gamma: float) -> float:
    """The degree-(k-1) polynomial factor P_{k-1}(u) of h^{*k}.

    Coefficient of u^(k-1-j) is (k-1+j)! / ((k-1)! j! (k-1-j)! gamma^j);
    Horner in u from the constant (j = k-1) term upward.  The leading
    coefficient is 1/(k-1)!.
    """
    km1 = k - 1
    coeffs = [
        math.factorial(km1 + j)
        / (math.factorial(km1) * math.factorial(j) * math.factorial(km1 - j)
           * gamma ** j)
        for j in range(k)
    ]
    poly = 0.0
    for c in coeffs:
        poly = poly * u + c
    return poly


def conv_power_closed(
    k: int, t: float, gamma_minus: float, gamma_plus: float, method: str = "poly"
) -> float:
    """h^{*k}(t), the k-fold self-convolution of the envelope, in closed form.

    ``method="poly"`` evaluates h(t) * P_{k-1}(|t|) with

        P_{k-1}(u) = sum_{j=0}^{k-1} (k-1+j)! u^{k-1-j}
                     / ((k-1)! j! (k-1-j)! gamma^j),

    which is exact for every real t including 0.  ``method="bessel"``
    evaluates the equivalent Bessel-product form (cross-check only; singular
    at t = 0).
    """
    if k < 1:
        raise DomainError("convolution power must be >= 1")
    if gamma_minus <= 0 or gamma_plus <= 0 or gamma_minus == INF or gamma_plus == INF:
        raise DomainError("both gaps must be finite and positive")
    gamma = gamma_minus + gamma_plus
    at = abs(t)
    hv = h_eval(t, gamma_minus, gamma_plus)
    if method == "poly":
        return hv * conv_power_poly(k, at, gamma)
    if method == "bessel":
        if at == 0:
            raise DomainError("Bessel path is singular at t = 0")
        x = 0.5 * gamma * at
        return (
            hv
            * at ** (k - 1)
            * math.sqrt(gamma * at)
            * math.exp(x)
            * bessel_k_half(k - 1, x)
            / (math.sqrt(math.pi) * math.factorial(k - 1))
        )
    raise ValueError(f"unknown method {method!r}")


def _one_sided_sum(n: int, norm_n: float, at: float) -> float:
    """Truncated exponential series sum_{k<n} (||N|| |t|)^k / k!."""
    return sum((norm_n * at) ** k / math.factorial(k) for k in range(n))


def triangular_bound(params: BoundParams, t: float) -> float:
    """Upper bound on ||G(B, t)||: sum_k ||N||^k h^{*(k+1)}(t).

    One-sided spectra degrade gracefully: with gamma_plus = +inf and t > 0 the
    bound becomes the truncated-exponential (Van Loan style) form; the side
    with no spectrum returns 0.
    """
    if t == 0:
        raise UndefinedAtZero("bound undefined at t = 0")
    gm, gp = params.gamma_minus, params.gamma_plus
    at = abs(t)
    if t > 0:
        if gm == INF:  # no left spectrum: G vanishes for t > 0
            return 0.0
        if gp == INF:
            return math.exp(-gm * t) * _one_sided_sum(params.n, params.norm_n, at)
    else:
        if gp == INF:
            return 0.0
        if gm == INF:
            return math.exp(gp * t) * _one_sided_sum(params.n, params.norm_n, at)
    return sum(
        params.norm_n ** k * conv_power_closed(k + 1, t, gm, gp)
        for k in range(params.n)
    )


def entrywise_bound(
    d, n_mat, gamma_minus: float, gamma_plus: float, t: float
) -> np.ndarray:
    """Entrywise bound matrix: sum_k |N|^k h^{*(k+1)}(t).

    Dominates |G(B, t)| entrywise (1- and inf-norm contexts).  The series
    stops at the nilpotency index of |N|.
    """
    if t == 0:
        raise UndefinedAtZero("bound undefined at t = 0")
    strict = require_strictly_triangular(n_mat)
    n = strict.shape[0]
    nabs = np.abs(strict)
    at = abs(t)
    if t > 0 and gamma_minus == INF:
        return np.zeros((n, n))
    if t < 0 and gamma_plus == INF:
        return np.zeros((n, n))
    one_sided = (t > 0 and gamma_plus == INF) or (t < 0 and gamma_minus == INF)
    hv = h_eval(t, 0.0 if gamma_minus == INF else gamma_minus,
                0.0 if gamma_plus == INF else gamma_plus)
    total = np.zeros((n, n))
    power = np.eye(n)
    for k in range(n):
        if one_sided:
            term = hv * at ** k / math.factorial(k)
        else:
            term = conv_power_closed(k + 1, t, gamma_minus, gamma_plus)
        total += power * term
        power = power @ nabs
        if not power.any():
            break
    return total


def van_loan_bound(alpha: float, norm_n: float, n: int, t: float) -> float:
    """||e^{At}|| <= e^{alpha t} sum_{k<n} ||N t||^k / k!  for t >= 0."""
    if t < 0:
        raise DomainError("van_loan_bound requires t >= 0")
    return math.exp(alpha * t) * _one_sided_sum(n, norm_n, t)


def qtds18_bound(params: QtdsParams, t: float) -> float:
    """Comparison bound from the half-plane eigenvalue counts.

    For t > 0:
        e^{-gamma_minus t} sum_{j<m} sum_{i<=j} C(l+i-1, l-1)
            t^{j-i}/(j-i)! (2||A||)^{l+j} / gamma^{l+i}
    and the mirrored formula (m <-> l, t -> -t) for t < 0.
    """
    if t == 0:
        raise UndefinedAtZero("bound undefined at t = 0")
    m, l = params.m, params.l
    if m < 1 or l < 1:
        raise Inapplicable("bound requires eigenvalues in both half-planes")
    gamma = params.gamma
    if not math.isfinite(gamma):
        raise Inapplicable("bound requires finite gaps on both sides")
    two_a = 2.0 * params.norm_a
    if t > 0:
        outer, inner, gap = m, l, params.gamma_minus
        u = t
    else:
        outer, inner, gap = l, m, params.gamma_plus
        u = -t
    total = 0.0
    for j in range(outer):
        for i in range(j + 1):
            total += (
                math.comb(inner + i - 1, inner - 1)
                * u ** (j - i) / math.factorial(j - i)
                * two_a ** (inner + j) / gamma ** (inner + i)
            )
    return math.exp(-gap * u) * total


def bound_params_for(b, p, gamma_minus: float, gamma_plus: float) -> BoundParams:
    """Assemble BoundParams for a triangular matrix B = D + N in norm p."""
    from .matcore import split_triangular

    _, n_mat = split_triangular(b)
    return BoundParams(
        n=n_mat.shape[0],
        norm_n=induced_norm(n_mat, p),
        gamma_minus=gamma_minus,
        gamma_plus=gamma_plus,
        norm_p=norm_kind(p),
    )
