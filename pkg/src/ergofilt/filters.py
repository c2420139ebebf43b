"""Polynomial filters on the Laplacian of a reversible chain.

All four filters approximate the projection of a signal onto its stationary
mean: the running (Birkhoff) average, plus three degree-``K`` designs that
pass the zero frequency with unit gain while damping everything above a known
positive frequency bound ``lambda_low`` — Bernstein smoothing of an ideal
triangular low-pass response, a sup-norm-optimal normalized Chebyshev design,
and an L2-optimal Legendre design. Each vector recursion has a scalar
evaluator mirroring it for spectral-domain testing, and two exact references
ship alongside: a frequency-zeroing projector (with the explicit coefficients
of its annihilating polynomial) and an exact-rational constrained
least-squares oracle for the L2 problem.

Polynomial coefficient vectors are in ascending monomial order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import densela, markov

_BAND_SLOP = 1e-9
_ORACLE_DEGREE_CAP = 20


def _check_context(k: int, lambda_low: float):
    if int(k) != k or k < 0:
        raise ValueError(f"filter degree must be a nonnegative integer, got {k}")
    if not 0.0 < lambda_low < 2.0:
        raise ValueError(f"lambda_low must lie in (0, 2), got {lambda_low}")


def _band_values(z) -> np.ndarray:
    """Validate frequencies against [0, 2] (with round-off slop) and clip."""
    values = np.atleast_1d(np.asarray(z, dtype=float))
    if values.size and (values.min() < -_BAND_SLOP or values.max() > 2.0 + _BAND_SLOP):
        raise ValueError("frequency outside the Laplacian band [0, 2]")
    return np.clip(values, 0.0, 2.0)


def _mapped_operator(laplacian: np.ndarray, lambda_low: float) -> np.ndarray:
    """Affine map sending the stopband [lambda_low, 2] onto [-1, 1]."""
    n = laplacian.shape[0]
    return (2.0 * laplacian - (2.0 + lambda_low) * np.eye(n)) / (2.0 - lambda_low)


def _m0(lambda_low: float) -> float:
    """Image of frequency 0 under the stopband map; always < -1."""
    return -(2.0 + lambda_low) / (2.0 - lambda_low)


def _signal_for(chain: markov.ChainModel, f) -> np.ndarray:
    values = np.asarray(f, dtype=float)
    if values.shape != (chain.n,):
        raise ValueError(f"signal has shape {values.shape}, expected ({chain.n},)")
    return values


# ---------------------------------------------------------------------------
# running (Birkhoff) average
# ---------------------------------------------------------------------------


def ergodic_apply(chain: markov.ChainModel, f, t: int) -> np.ndarray:
    """Average of the first ``t`` powers of P applied to ``f`` (t-1 matvecs)."""
    if int(t) != t or t < 1:
        raise ValueError(f"averaging horizon must be a positive integer, got {t}")
    values = _signal_for(chain, f)
    acc = values.copy()
    power = values
    for _ in range(t - 1):
        power = chain.transition @ power
        acc += power
    return acc / t


def ergodic_scalar(z, t: int) -> np.ndarray:
    """Frequency response of the running average: ``(1/t) sum_k (1-z)^k``."""
    if int(t) != t or t < 1:
        raise ValueError(f"averaging horizon must be a positive integer, got {t}")
    values = np.atleast_1d(np.asarray(z, dtype=float))
    acc = np.zeros_like(values)
    term = np.ones_like(values)
    for _ in range(t):
        acc += term
        term = term * (1.0 - values)
    return acc / t


def ergodic_laplacian_coeffs(t: int) -> np.ndarray:
    """The running average written as a polynomial in the Laplacian.

    Returns ``a[k] = (1/t) C(t, k+1) (-1)^k`` for ``k = 0..t-1``, i.e. the
    coefficients with ``sum_k a[k] L^k f`` equal to ``ergodic_apply(f, t)``.
    The alternating binomial terms lose float precision past t around 15, so
    this form is for testing the identity, not for applying the filter.
    """
    if int(t) != t or t < 1:
        raise ValueError(f"averaging horizon must be a positive integer, got {t}")
    return np.array([comb(t, k + 1) * (-1.0) ** k / t for k in range(t)])


# ---------------------------------------------------------------------------
# Bernstein filter
# ---------------------------------------------------------------------------


def triangle(z, lambda_low: float):
    """Ideal low-pass target: 1 at frequency 0, linear down to 0 at
    ``lambda_low``, 0 across the rest of the band."""
    _check_context(0, lambda_low)
    values = _band_values(z)
    result = np.where(values < lambda_low, 1.0 - values / lambda_low, 0.0)
    return float(result[0]) if np.ndim(z) == 0 else result


def bernstein_scalar(z, K: int, lambda_low: float):
    """Degree-``K`` Bernstein polynomial of the triangle target on [0, 2].

    Only coefficients with ``2l/K`` inside the passband contribute (the
    target vanishes elsewhere), so the sum is short even for large ``K``.
    """
    _check_context(K, lambda_low)
    values = _band_values(z)
    if K == 0:
        result = np.ones_like(values)
    else:
        half = values / 2.0
        result = np.zeros_like(values)
        l_cap = min(K, int(np.ceil(K * lambda_low / 2.0)))
        for l in range(l_cap + 1):
            weight = triangle(2.0 * l / K, lambda_low)
            if weight == 0.0:
                continue
            result += weight * comb(K, l) * half**l * (1.0 - half) ** (K - l)
    return float(result[0]) if np.ndim(z) == 0 else result


def bernstein_apply(chain: markov.ChainModel, f, K: int, lambda_low: float) -> np.ndarray:
    """Apply the Bernstein filter by the de Casteljau vector recursion.

    Starts from the control signals ``g(2l/K) f`` and repeatedly blends
    neighbors with ``(I - L/2)`` and ``L/2``; numerically stable for any
    degree, unlike expanding the binomial coefficients.
    """
    _check_context(K, lambda_low)
    values = _signal_for(chain, f)
    if K == 0:
        return values.copy()
    blend_lo = np.eye(chain.n) - chain.laplacian / 2.0
    blend_hi = chain.laplacian / 2.0
    weights = triangle(2.0 * np.arange(K + 1) / K, lambda_low)
    columns = values[:, None] * weights[None, :]
    for _ in range(K):
        columns = blend_lo @ columns[:, :-1] + blend_hi @ columns[:, 1:]
    return columns[:, 0]


# ---------------------------------------------------------------------------
# Chebyshev filter
# ---------------------------------------------------------------------------


def chebyshev_scalar_at_zero(K: int, lambda_low: float) -> np.ndarray:
    """Values at frequency 0 of the stopband-mapped Chebyshev family,
    ``T_k(m0)`` for ``k = 0..K``; strictly growing in magnitude since
    ``|m0| > 1``."""
    _check_context(K, lambda_low)
    m0 = _m0(lambda_low)
    seq = np.empty(K + 1)
    seq[0] = 1.0
    if K >= 1:
        seq[1] = m0
    for k in range(1, K):
        seq[k + 1] = 2.0 * m0 * seq[k] - seq[k - 1]
    return seq


def chebyshev_scalar(z, K: int, lambda_low: float):
    """Normalized mapped Chebyshev response ``T_K(m(z)) / T_K(m(0))``."""
    _check_context(K, lambda_low)
    values = _band_values(z)
    if K == 0:
        result = np.ones_like(values)
    else:
        mapped = (2.0 * values - 2.0 - lambda_low) / (2.0 - lambda_low)
        prev = np.ones_like(mapped)
        curr = mapped.copy()
        for _ in range(1, K):
            prev, curr = curr, 2.0 * mapped * curr - prev
        result = curr / chebyshev_scalar_at_zero(K, lambda_low)[K]
    return float(result[0]) if np.ndim(z) == 0 else result


def chebyshev_apply(chain: markov.ChainModel, f, K: int, lambda_low: float) -> np.ndarray:
    """Apply the normalized Chebyshev filter by its three-term vector recursion.

    With ``u_k`` the degree-``k`` filtered signal and ``T_k`` the values from
    ``chebyshev_scalar_at_zero``:
    ``u_{k+1} = 2 (T_k/T_{k+1}) M u_k - (T_{k-1}/T_{k+1}) u_{k-1}``
    where ``M`` is the stopband-mapped Laplacian.
    """
    _check_context(K, lambda_low)
    values = _signal_for(chain, f)
    if K == 0:
        return values.copy()
    mapped = _mapped_operator(chain.laplacian, lambda_low)
    at_zero = chebyshev_scalar_at_zero(K, lambda_low)
    prev = values.copy()
    curr = (mapped @ values) / at_zero[1]
    for k in range(1, K):
        alpha = at_zero[k] / at_zero[k + 1]
        beta = at_zero[k - 1] / at_zero[k + 1]
        prev, curr = curr, 2.0 * alpha * (mapped @ curr) - beta * prev
    return curr


# ---------------------------------------------------------------------------
# Legendre filter
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LegendreScalars:
    """Zero-frequency bookkeeping for the Legendre design at degree ``K``:
    basis values ``L~_k(0)``, their running squared sums ``S_k``, the final
    mixing weights ``xi_k = L~_k(0) / S_K``, and the carry factors
    ``gamma_k = S_k / S_{k+1}`` used by the coupled recursion."""

    values_at_zero: np.ndarray
    partial_sums: np.ndarray
    xi: np.ndarray
    gamma: np.ndarray


def _legendre_recursion_factors(n: int) -> tuple[float, float, float]:
    """Coefficients (a_next, b, a) of the orthonormal-Legendre three-term
    recursion ``a_next P_{n+1} = b x P_n - a P_{n-1}`` on [-1, 1]."""
    a_next = np.sqrt(2.0 * (n + 1) ** 2 / (2 * n + 3))
    b = np.sqrt(2.0 * (2 * n + 1))
    a = np.sqrt(2.0 * n**2 / (2 * n - 1))
    return a_next, b, a


def legendre_scalar_at_zero(K: int, lambda_low: float) -> LegendreScalars:
    """Zero-frequency values of the stopband-orthonormal Legendre basis.

    The basis is the orthonormal Legendre family mapped onto the stopband and
    rescaled by ``sqrt(2 / (2 - lambda_low))`` so it stays orthonormal under
    the plain Lebesgue measure on ``[lambda_low, 2]``.
    """
    _check_context(K, lambda_low)
    scale = np.sqrt(2.0 / (2.0 - lambda_low))
    m0 = _m0(lambda_low)
    seq = np.empty(K + 1)
    seq[0] = scale * np.sqrt(0.5)
    if K >= 1:
        seq[1] = scale * np.sqrt(1.5) * m0
    for n in range(1, K):
        a_next, b, a = _legendre_recursion_factors(n)
        seq[n + 1] = (b * m0 * seq[n] - a * seq[n - 1]) / a_next
    partial = np.cumsum(seq * seq)
    gamma = partial[:-1] / partial[1:] if K >= 1 else np.empty(0)
    return LegendreScalars(
        values_at_zero=seq, partial_sums=partial, xi=seq / partial[K], gamma=gamma
    )


def legendre_scalar(z, K: int, lambda_low: float):
    """L2-optimal response: mix of stopband Legendre basis values with the
    final weights from ``legendre_scalar_at_zero``; equals 1 at frequency 0."""
    _check_context(K, lambda_low)
    values = _band_values(z)
    scalars = legendre_scalar_at_zero(K, lambda_low)
    scale = np.sqrt(2.0 / (2.0 - lambda_low))
    mapped = (2.0 * values - 2.0 - lambda_low) / (2.0 - lambda_low)
    prev = np.full_like(mapped, scale * np.sqrt(0.5))
    result = scalars.xi[0] * prev
    if K >= 1:
        curr = scale * np.sqrt(1.5) * mapped
        result = result + scalars.xi[1] * curr
        for n in range(1, K):
            a_next, b, a = _legendre_recursion_factors(n)
            prev, curr = curr, (b * mapped * curr - a * prev) / a_next
            result = result + scalars.xi[n + 1] * curr
    return float(result[0]) if np.ndim(z) == 0 else result


def legendre_apply(chain: markov.ChainModel, f, K: int, lambda_low: float) -> np.ndarray:
    """Apply the L2-optimal filter by the coupled vector recursion.

    Carries the running filtered signal together with the last two basis
    signals: ``q_{k+1} = gamma_k q_k + xi_{k+1}^{(k+1)} v_{k+1}`` where the
    ``v`` sequence follows the same three-term recursion as the scalars.
    """
    _check_context(K, lambda_low)
    values = _signal_for(chain, f)
    scalars = legendre_scalar_at_zero(K, lambda_low)
    scale = np.sqrt(2.0 / (2.0 - lambda_low))
    prev = scale * np.sqrt(0.5) * values
    result = (scalars.values_at_zero[0] / scalars.partial_sums[0]) * prev
    if K == 0:
        return result
    mapped = _mapped_operator(chain.laplacian, lambda_low)
    curr = scale * np.sqrt(1.5) * (mapped @ values)
    for k in range(K):
        if k >= 1:
            a_next, b, a = _legendre_recursion_factors(k)
            prev, curr = curr, (b * (mapped @ curr) - a * prev) / a_next
        carry = scalars.partial_sums[k] / scalars.partial_sums[k + 1]
        weight = scalars.values_at_zero[k + 1] / scalars.partial_sums[k + 1]
        result = carry * result + weight * curr
    return result


# ---------------------------------------------------------------------------
# exact references
# ---------------------------------------------------------------------------


def lagrange_coefficients(eigenvalues) -> np.ndarray:
    """Ascending monomial coefficients of the annihilating polynomial
    ``q(z) = prod (1 - z/lam)`` over the distinct nonzero eigenvalues.

    ``q`` is 1 at frequency 0 and 0 at every other eigenvalue; eigenvalues
    closer than 1e-12 collapse to a single node.
    """
    ordered = np.sort(np.asarray(eigenvalues, dtype=float))
    nodes: list[float] = []
    for lam in ordered:
        if abs(lam) <= 1e-12:
            continue
        if nodes and abs(lam - nodes[-1]) <= 1e-12:
            continue
        nodes.append(float(lam))
    coeffs = np.array([1.0])
    for lam in nodes:
        coeffs = np.convolve(coeffs, np.array([1.0, -1.0 / lam]))
    return coeffs


def lagrange_exact_apply(
    spec: markov.SpectralDecomposition, f, pi
) -> np.ndarray:
    """Exact stationary projection: zero every nonzero-frequency coefficient.

    Equivalent to evaluating the annihilating polynomial of the spectrum on
    the Laplacian; returns the constant signal at the stationary mean of ``f``.
    """
    fhat = markov.gft(f, spec, pi)
    keep = np.abs(spec.eigenvalues) <= markov.ZERO_EIGENVALUE_TOL
    return markov.igft(np.where(keep, fhat, 0.0), spec)


@dataclass(frozen=True)
class L2Oracle:
    """Solution of the constrained least-squares design problem: ascending
    monomial coefficients and the attained squared L2 objective."""

    coefficients: np.ndarray
    objective: float


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over exact rationals (first-nonzero pivoting)."""
    n = len(matrix)
    aug = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise densela.SingularMatrixError("exact elimination met an all-zero column")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        for r in range(col + 1, n):
            if aug[r][col] == 0:
                continue
            factor = aug[r][col] / aug[col][col]
            aug[r] = [aug[r][j] - factor * aug[col][j] for j in range(n + 1)]
    solution = [Fraction(0)] * n
    for row in range(n - 1, -1, -1):
        acc = aug[row][n] - sum(aug[row][j] * solution[j] for j in range(row + 1, n))
        solution[row] = acc / aug[row][row]
    return solution


def l2_optimal_oracle(K: int, lambda_low: float) -> L2Oracle:
    """Independent reference for the L2 design problem.

    Minimizes the integral of ``p(z)^2`` over ``[lambda_low, 2]`` subject to
    ``p(0) = 1`` over polynomials of degree at most ``K``, using the exact
    analytic monomial moments ``(2^(i+j+1) - lambda_low^(i+j+1)) / (i+j+1)``.
    The stationarity system is solved in exact rational arithmetic — the
    moment matrix is far too ill-conditioned for float64 beyond degree ~8
    (floats are dyadic rationals, so converting ``lambda_low`` is lossless).
    Degrees above 20 are rejected.
    """
    _check_context(K, lambda_low)
    if K > _ORACLE_DEGREE_CAP:
        raise ValueError(f"oracle degree capped at {_ORACLE_DEGREE_CAP}, got {K}")
    lam = Fraction(lambda_low)
    two = Fraction(2)
    moments = [
        [(two ** (i + j + 1) - lam ** (i + j + 1)) / (i + j + 1) for j in range(K + 1)]
        for i in range(K + 1)
    ]
    rhs = [Fraction(1)] + [Fraction(0)] * K
    scaled = _solve_exact(moments, rhs)
    if scaled[0] <= 0:
        raise densela.SingularMatrixError("moment system produced a non-positive leading value")
    coeffs = [value / scaled[0] for value in scaled]
    return L2Oracle(
        coefficients=np.array([float(value) for value in coeffs]),
        objective=float(1 / scaled[0]),
    )


def max_abs_error(filtered, f, pi) -> float:
    """Largest pointwise deviation of a filtered signal from the constant
    signal at the stationary mean of ``f``."""
    out = np.asarray(filtered, dtype=float)
    target = markov.pi_expectation(f, pi)
    if out.shape != np.asarray(f, dtype=float).shape:
        raise ValueError("filtered signal and input signal differ in shape")
    return float(np.abs(out - target).max())
