"""Constructors for the two bundled reversible chains.

* simple random walk on an odd cycle of ``p`` vertices, and
* single-site heat-bath (Glauber) dynamics for an Ising ring of ``p`` spins,

each with its analytic stationary distribution and a positive lower bound
``lambda_low`` on the smallest nonzero eigenvalue of ``L = I - P``.

Ising states are encoded as bitmasks: state index ``x`` has spin ``+1`` at
site ``w`` iff bit ``w`` of ``x`` is set, and the 2^p x 2^p transition matrix
is ordered by that integer index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import densela, markov

MAX_SPIN_SITES = 20  # full-enumeration cap: 2^20 states


@dataclass(frozen=True)
class GlauberParams:
    """Ring size, inverse temperature, and per-edge couplings ``J_i`` for the
    edge between sites ``i`` and ``i+1 (mod p)``."""

    p: int
    beta: float
    couplings: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.p < 3:
            raise ValueError(f"ring size must be at least 3, got {self.p}")
        if not self.beta > 0.0:
            raise ValueError(f"inverse temperature must be positive, got {self.beta}")
        couplings = np.array(
            np.ones(self.p) if self.couplings is None else self.couplings, dtype=float
        )
        if couplings.shape != (self.p,) or not np.all(np.isfinite(couplings)):
            raise ValueError("couplings must be p finite reals")
        couplings.setflags(write=False)
        object.__setattr__(self, "couplings", couplings)

    @staticmethod
    def uniform(p: int, beta: float, coupling: float = 1.0) -> "GlauberParams":
        return GlauberParams(p=p, beta=beta, couplings=np.full(p, float(coupling)))


def build_cycle_walk(p: int) -> markov.ChainModel:
    """Nearest-neighbor random walk on a cycle of odd length ``p``.

    Each step moves to either neighbor with probability 1/2; the stationary
    law is uniform. Even ``p`` is rejected (the walk would be periodic).
    """
    if p < 3:
        raise ValueError(f"cycle length must be at least 3, got {p}")
    if p % 2 == 0:
        raise ValueError(f"cycle length must be odd, got {p}")
    transition = np.zeros((p, p))
    for i in range(p):
        transition[i, (i + 1) % p] = 0.5
        transition[i, (i - 1) % p] = 0.5
    pi = np.full(p, 1.0 / p)
    return markov.make_chain(transition, pi, cycle_lambda_low(p))


def cycle_lambda_low(p: int) -> float:
    """Closed-form gap bound ``8p / ((p-1)^2 (p+1))`` for the odd cycle walk."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"cycle length must be odd and at least 3, got {p}")
    return 8.0 * p / ((p - 1) ** 2 * (p + 1))


def random_walk_stationary(adjacency) -> np.ndarray:
    """Degree-proportional stationary law ``deg(x) / (2 |E|)`` of the simple
    random walk on an undirected graph given by a 0/1 adjacency matrix."""
    adj = np.asarray(adjacency, dtype=float)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError(f"adjacency must be square, got {adj.shape}")
    if np.abs(adj - adj.T).max() > 0.0:
        raise ValueError("adjacency must be symmetric")
    degrees = adj.sum(axis=1)
    if degrees.min() <= 0:
        raise ValueError("every vertex needs at least one edge")
    return degrees / degrees.sum()


def _spin(x: int, w: int, p: int) -> float:
    return 1.0 if (x >> (w % p)) & 1 else -1.0


def glauber_energy(x: int, params: GlauberParams) -> float:
    """Ising ring energy ``-sum_i J_i s(i) s(i+1)``, each edge counted once."""
    p = params.p
    total = 0.0
    for i in range(p):
        total += params.couplings[i] * _spin(x, i, p) * _spin(x, i + 1, p)
    return -total


def gibbs_distribution(params: GlauberParams) -> np.ndarray:
    """Boltzmann law ``exp(-beta H(x)) / Z`` by full enumeration of 2^p states."""
    if params.p > MAX_SPIN_SITES:
        raise ValueError(f"enumeration capped at 2^{MAX_SPIN_SITES} states, got p={params.p}")
    n = 1 << params.p
    energies = np.array([glauber_energy(x, params) for x in range(n)])
    weights = np.exp(-params.beta * energies)
    return weights / weights.sum()


def _local_field(x: int, w: int, params: GlauberParams) -> float:
    # couplings[i] sits on the edge (i, i+1), so site w couples to w-1 via
    # couplings[w-1] and to w+1 via couplings[w]
    p = params.p
    return params.couplings[(w - 1) % p] * _spin(x, w - 1, p) + params.couplings[w] * _spin(
        x, w + 1, p
    )


def build_glauber_cycle(params: GlauberParams) -> markov.ChainModel:
    """Heat-bath single-spin-flip dynamics on the Ising ring.

    A step picks a site uniformly and resamples its spin from the conditional
    Boltzmann law given the neighbors, so each row mixes single-flip moves
    with a lazy diagonal part and rows sum to 1 exactly.
    """
    if params.p > MAX_SPIN_SITES:
        raise ValueError(f"enumeration capped at 2^{MAX_SPIN_SITES} states, got p={params.p}")
    p = params.p
    n = 1 << p
    transition = np.zeros((n, n))
    for x in range(n):
        for w in range(p):
            field_w = _local_field(x, w, params)
            y = x ^ (1 << w)
            # e^a / (e^a + e^-a) written as a sigmoid so large fields cannot overflow
            flip = params.beta * _spin(y, w, p) * field_w
            keep = params.beta * _spin(x, w, p) * field_w
            transition[x, y] += 1.0 / (p * (1.0 + np.exp(-2.0 * flip)))
            transition[x, x] += 1.0 / (p * (1.0 + np.exp(-2.0 * keep)))
    return markov.make_chain(transition, gibbs_distribution(params), glauber_lambda_low(params))


def glauber_m_matrix(params: GlauberParams) -> np.ndarray:
    """Cyclic two-band matrix whose top eigenvalue controls the chain's gap.

    With ``s_i = sinh(2 beta J_i)`` and ``c_i = cosh(2 beta J_i)`` the bands
    are ``M(i, i-1) = s_{i-1} / (c_{i-1} + c_i)`` and
    ``M(i, i+1) = s_i / (c_{i-1} + c_i)``, indices mod p.
    """
    p = params.p
    s = np.sinh(2.0 * params.beta * params.couplings)
    c = np.cosh(2.0 * params.beta * params.couplings)
    m = np.zeros((p, p))
    for i in range(p):
        denom = c[(i - 1) % p] + c[i]
        m[i, (i - 1) % p] = s[(i - 1) % p] / denom
        m[i, (i + 1) % p] = s[i] / denom
    return m


def glauber_lambda_low(params: GlauberParams) -> float:
    """Gap bound ``(1 - gamma_1) / p`` where ``gamma_1`` is the largest
    eigenvalue of the band matrix from ``glauber_m_matrix``.

    Non-uniform couplings make the band matrix asymmetric; it is then brought
    to symmetric form by a diagonal similarity before eigensolving. The two
    band entries that face each other share the same sinh factor, so their
    ratio is a positive ratio of cosh sums and the scaling is well defined
    whenever every coupling is nonzero.
    """
    m = glauber_m_matrix(params)
    p = params.p
    if np.abs(m - m.T).max() <= 1e-14 * max(1.0, float(np.abs(m).max())):
        sym = m
    else:
        if np.any(params.couplings == 0.0):
            raise ValueError("gap bound needs nonzero couplings on every edge")
        d = np.ones(p)
        for i in range(p - 1):
            # geometric-mean scaling: (d_{i+1}/d_i)^2 = M(i,i+1)/M(i+1,i); the
            # cyclic closure ratio telescopes to 1, so the wrap edge symmetrizes too
            d[i + 1] = d[i] * np.sqrt(m[i, i + 1] / m[i + 1, i])
        sym = d[:, None] * m / d[None, :]
        if np.abs(sym - sym.T).max() > 1e-10 * max(1.0, float(np.abs(sym).max())):
            raise densela.AsymmetricMatrixError("similarity scaling failed to symmetrize")
    eigenvalues, _ = densela.symmetric_eigen(sym, tol=1e-12)
    gamma1 = float(eigenvalues[-1])
    if gamma1 >= 1.0:
        raise ValueError(f"gap bound degenerates: top band eigenvalue {gamma1} >= 1")
    return (1.0 - gamma1) / p
