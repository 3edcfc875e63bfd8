"""Closed-form spectra of Werner-Wolf operators and norm maximization.

With all measurement directions in the x-y plane of each qubit, ``W_f``
is block diagonal on the pairs ``{|w>, |-w>}`` and its eigenvalues are
``+-|P_f(w * theta)|`` where::

    P_f(t) = sum_s beta_f(s) exp(i (t^1_{s_1} + ... + t^n_{s_n}))
           = sum_eps f(eps) g_eps(t)

Maximizing ``|P_f|`` over the ``2n`` angles gives the largest norm over
all directions.  Each one-party subproblem ``max |v0 e^{i a} + v1 e^{i b}|``
is solved exactly, so coordinate ascent is monotone.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .boolfn import SignFunction, WalshSpectrum, bit_matrix, is_trivial_facet, walsh_beta
from .errors import ConstructionInvalid, DidNotConverge, TooLarge

TWO_PI = 2 * math.pi
FULL_SPECTRUM_MAX_N = 14
MAXIMIZE_MAX_N = 20
DEFAULT_RESTARTS = 32
DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 10_000

# directions reaching the CHSH maximum sqrt(2) at omega = (+1, +1)
CHSH_OPTIMAL_THETA = ((0.0, math.pi / 2), (-math.pi / 4, math.pi / 4))


@dataclass(frozen=True, eq=False)
class AngleConfig:
    """Angles ``theta[j] = (theta_0^j, theta_1^j)`` in ``[0, 2pi)``."""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        if theta.ndim != 2 or theta.shape[1] != 2 or theta.shape[0] < 1:
            raise ValueError(f"theta must have shape (n, 2), got {theta.shape}")
        if not np.all(np.isfinite(theta)):
            raise ValueError("angles must be finite")
        theta = np.mod(theta, TWO_PI)
        theta[theta >= TWO_PI] = 0.0  # mod can round up to exactly 2pi
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return self.theta.shape[0]

    def __eq__(self, other):
        if not isinstance(other, AngleConfig):
            return NotImplemented
        return np.array_equal(self.theta, other.theta)

    @classmethod
    def zeros(cls, n: int) -> "AngleConfig":
        return cls(np.zeros((n, 2)))

    @classmethod
    def random(cls, n: int, seed) -> "AngleConfig":
        return cls(_rng.stream(seed, n, 2).uniform(0, TWO_PI, size=(n, 2)))

    def to_list(self) -> list[list[float]]:
        return [[float(a), float(b)] for a, b in self.theta]

    @classmethod
    def from_list(cls, pairs) -> "AngleConfig":
        return cls(np.asarray(pairs, dtype=float))

    def scaled(self, omega) -> "AngleConfig":
        """Angles ``omega_j * theta_s^j`` entering the eigenvalue for ``omega``."""
        return AngleConfig(self.theta * np.asarray(omega, dtype=float)[:, None])


def chsh_optimal_angles() -> AngleConfig:
    return AngleConfig(np.array(CHSH_OPTIMAL_THETA))


def _check_omega(omega, n):
    omega = np.asarray(omega, dtype=int)
    if omega.shape != (n,) or not np.all(np.abs(omega) == 1):
        raise ValueError(f"omega must be {n} entries of +-1")
    return omega


def omega_list(n: int) -> np.ndarray:
    """All ``omega`` in lexicographic order with ``-1 < +1``."""
    bits = bit_matrix(n)[:, ::-1]  # big-endian bit order enumerates lexicographically
    return (2 * bits - 1).astype(int)


def _phases(theta: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.asarray(theta, dtype=float))


def _kron_rows(factors: list[np.ndarray], batch: int) -> np.ndarray:
    """Row-wise Kronecker product; ``factors[0]`` is most significant."""
    out = np.ones((batch, 1), dtype=complex)
    for u in factors:
        out = (out[:, :, None] * u[:, None, :]).reshape(batch, -1)
    return out


def _g_rows(theta: np.ndarray) -> np.ndarray:
    """``g`` vectors for a batch of raw angle arrays of shape ``(batch, n, 2)``."""
    u = _phases(theta)
    n = theta.shape[1]
    pairs = [np.stack([(u[:, j, 0] + u[:, j, 1]) / 2, (u[:, j, 0] - u[:, j, 1]) / 2], axis=1) for j in range(n)]
    return _kron_rows(pairs[::-1], theta.shape[0])


def g_vector(t: AngleConfig) -> np.ndarray:
    """``g_eps(t) = 2**-n prod_j (e^{i t_0^j} + (-1)^{eps_j} e^{i t_1^j})``.

    Built as a Kronecker product of the per-party pairs ``(c_j, d_j) / 2``
    in ``O(2**n)``; party 1 is the least significant index bit.
    """
    return _g_rows(t.theta[None])[0]


def bell_polynomial_beta(spec: WalshSpectrum, t: AngleConfig) -> complex:
    """``sum_s beta(s) exp(i sum_j t^j_{s_j})`` by direct summation."""
    if spec.n != t.n:
        raise ValueError(f"n mismatch: spectrum {spec.n}, angles {t.n}")
    bits = bit_matrix(t.n)
    phase = t.theta[np.arange(t.n), bits].sum(axis=1)
    return complex(np.dot(spec.beta, np.exp(1j * phase)))


def bell_polynomial(f: SignFunction, t: AngleConfig) -> complex:
    """``sum_eps f(eps) g_eps(t)``; equals :func:`bell_polynomial_beta`."""
    if f.n != t.n:
        raise ValueError(f"n mismatch: function {f.n}, angles {t.n}")
    return complex(np.dot(f.values, g_vector(t)))


def eigenvalue(f: SignFunction, angles: AngleConfig, omega) -> tuple[float, float]:
    """Magnitude and phase ``Theta(omega)`` of the GHZ-block eigenvalue.

    ``Theta = -arg P`` so that ``e^{i Theta} P = |P| >= 0``.
    """
    omega = _check_omega(omega, f.n)
    if angles.n != f.n:
        raise ValueError(f"n mismatch: function {f.n}, angles {angles.n}")
    # raw omega * theta rather than angles.scaled(): keeps P(-omega) == conj P(omega)
    g = _g_rows((omega[:, None] * angles.theta)[None])[0]
    value = complex(np.dot(f.values, g))
    return abs(value), _phase_of(value)


def _phase_of(value):
    phase = np.mod(-np.angle(value), TWO_PI)
    return np.where(phase >= TWO_PI, 0.0, phase) if np.ndim(phase) else float(phase % TWO_PI)


@dataclass(frozen=True)
class SpectrumResult:
    omegas: np.ndarray
    magnitudes: np.ndarray
    phases: np.ndarray
    norm: float
    argmax_omega: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n": int(self.omegas.shape[1]),
            "norm": float(self.norm),
            "argmax_omega": list(self.argmax_omega),
            "entries": [
                {"omega": [int(w) for w in om], "magnitude": float(m), "phase": float(p)}
                for om, m, p in zip(self.omegas, self.magnitudes, self.phases)
            ],
        }


def full_spectrum(f: SignFunction, angles: AngleConfig, max_n: int = FULL_SPECTRUM_MAX_N) -> SpectrumResult:
    """All ``2**n`` eigenvalue magnitudes and phases, ``O(4**n)``."""
    n = f.n
    if n > max_n:
        raise TooLarge(f"full_spectrum limited to n <= {max_n}, got {n}")
    if angles.n != n:
        raise ValueError(f"n mismatch: function {n}, angles {angles.n}")
    omegas = omega_list(n)
    half = len(omegas) // 2
    # the second half of omega_list is the negation of the first, reversed,
    # and P(-omega) = conj P(omega) because beta is real
    g = _g_rows(omegas[:half, :, None] * angles.theta[None, :, :])
    first = g @ f.values.astype(float)
    values = np.concatenate([first, np.conj(first[::-1])])
    mags = np.abs(values)
    phases = _phase_of(values)
    k = int(np.argmax(mags))
    return SpectrumResult(omegas, mags, phases, float(mags[k]), tuple(int(w) for w in omegas[k]))


# optimization ---------------------------------------------------------------


@dataclass
class OptimizeReport:
    best_angles: AngleConfig
    best_norm: float
    restarts_used: int
    sweeps: int
    converged: bool
    history: list[float] = field(default_factory=list)
    best_restart: int = 0

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.best_angles.n,
            "best_norm": float(self.best_norm),
            "best_angles": self.best_angles.to_list(),
            "restarts_used": int(self.restarts_used),
            "best_restart": int(self.best_restart),
            "sweeps": int(self.sweeps),
            "converged": bool(self.converged),
            "history": [float(h) for h in self.history],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _party_environment(beta_t: np.ndarray, u: np.ndarray, j: int) -> np.ndarray:
    """Contract ``beta`` with every party's phase pair except party ``j``.

    ``beta_t`` has shape ``(2**(n-1-j), 2, 2**j)`` (higher parties first);
    ``u`` is ``(batch, n, 2)``.  Returns ``v`` of shape ``(batch, 2)`` with
    ``P = v[:, 0] e^{i t_0^j} + v[:, 1] e^{i t_1^j}``.
    """
    batch, n, _ = u.shape
    left = _kron_rows([u[:, k] for k in range(n - 1, j, -1)], batch)
    right = _kron_rows([u[:, k] for k in range(j - 1, -1, -1)], batch)
    hi, _, lo = beta_t.shape
    tmp = left @ beta_t.reshape(hi, 2 * lo)
    return np.einsum("bsc,bc->bs", tmp.reshape(batch, 2, lo), right)


def _ascend(beta: np.ndarray, n: int, theta: np.ndarray, tol: float, max_sweeps: int):
    """Batched coordinate ascent from the starting angles ``theta`` (batch, n, 2).

    Returns final angles, per-restart histories, sweep counts and convergence flags.
    """
    batch = theta.shape[0]
    theta = theta.copy()
    reshaped = [beta.reshape(2 ** (n - 1 - j), 2, 2**j) for j in range(n)]
    u = np.exp(1j * theta)
    start = np.abs(_kron_rows([u[:, k] for k in range(n - 1, -1, -1)], batch) @ beta)
    histories = [[float(v)] for v in start]
    current = start.copy()
    sweeps = np.zeros(batch, dtype=int)
    converged = np.zeros(batch, dtype=bool)
    active = np.arange(batch)
    while active.size:
        th = theta[active]
        uu = np.exp(1j * th)
        before = current[active]
        value = before
        for j in range(n):
            v = _party_environment(reshaped[j], uu, j)
            new_value = np.abs(v[:, 0]) + np.abs(v[:, 1])
            # |v0 e^{ia} + v1 e^{ib}| <= |v0| + |v1| with equality iff phases align
            if np.any(new_value < value - 1e-12 * np.maximum(1.0, value)):
                raise AssertionError("coordinate update decreased the objective")
            th[:, j, 0] = -np.angle(v[:, 0])
            th[:, j, 1] = -np.angle(v[:, 1])
            uu[:, j] = np.exp(1j * th[:, j])
            value = new_value
        theta[active] = th
        current[active] = value
        sweeps[active] += 1
        done = (value - before) < tol
        for idx, val in zip(active, value):
            histories[idx].append(float(val))
        converged[active[done]] = True
        capped = sweeps[active] >= max_sweeps
        active = active[~(done | capped)]
    return theta, histories, sweeps, converged


def maximize_norm(
    f: SignFunction,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    seed=0,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    max_n: int = MAXIMIZE_MAX_N,
) -> OptimizeReport:
    """Lower bound on ``max_theta |P_f(theta)|`` by multi-start coordinate ascent.

    Restarts run as one batch; the best restart wins, lowest index on ties.
    Emits :class:`DidNotConverge` when the best restart hit ``max_sweeps``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = f.n
    if n > max_n:
        raise TooLarge(f"maximize_norm limited to n <= {max_n}, got {n}")
    if is_trivial_facet(f):
        return OptimizeReport(AngleConfig.zeros(n), 1.0, restarts, 0, True, [1.0], 0)

    beta = walsh_beta(f).beta
    start = _rng.stream(seed, n, restarts).uniform(0, TWO_PI, size=(restarts, n, 2))
    theta, histories, sweeps, converged = _ascend(beta, n, start, tol, max_sweeps)
    finals = np.array([h[-1] for h in histories])
    best = int(np.flatnonzero(finals == finals.max())[0])
    report = OptimizeReport(
        best_angles=AngleConfig(theta[best]),
        best_norm=float(finals[best]),
        restarts_used=restarts,
        sweeps=int(sweeps[best]),
        converged=bool(converged[best]),
        history=histories[best],
        best_restart=best,
    )
    if not report.converged:
        warnings.warn(
            f"coordinate ascent hit {max_sweeps} sweeps without reaching tol={tol}",
            DidNotConverge,
            stacklevel=2,
        )
    return report


def mermin_klyshko_norm(n: int) -> float:
    return math.sqrt(2 ** (n - 1))


def certify_mermin_klyshko(f: SignFunction, restarts: int = 64, seed=0, tol: float = 1e-6) -> OptimizeReport:
    """Check that ``f`` reaches ``sqrt(2**(n-1))``; raise ConstructionInvalid otherwise."""
    report = maximize_norm(f, restarts=restarts, seed=seed)
    target = mermin_klyshko_norm(f.n)
    if abs(report.best_norm - target) > tol:
        raise ConstructionInvalid(
            f"candidate reaches {report.best_norm:.12g}, expected {target:.12g} (n={f.n})"
        )
    return report
