"""Brute-force dense ground truth for Werner-Wolf operators.

Everything here works on explicit ``2**n x 2**n`` matrices built from
Kronecker products of spin operators, independently of the closed-form
route in :mod:`wernerwolf.spectrum`.  Party 1 is the least significant
bit of a basis index and bit value 0 is spin-up (``omega_j = +1``).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from . import _rng
from .boolfn import SignFunction, walsh_beta
from .errors import BoundViolated, DidNotConverge, NumericalFailure, TooLarge
from .spectrum import AngleConfig, eigenvalue, omega_list

DENSE_MAX_N = 10
RESIDUAL_RTOL = 1e-10
SEPARABLE_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class DenseHermitian:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = m.shape[0]
        if m.shape != (dim, dim) or dim < 1 or dim & (dim - 1):
            raise ValueError(f"expected a square matrix of power-of-two size, got {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(m).max())):
            raise ValueError("matrix is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    def op_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def to_json(self) -> str:
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]
        return json.dumps({"schema": 1, "dim": self.dim, "entries": rows})

    @classmethod
    def from_json(cls, text: str) -> "DenseHermitian":
        payload = json.loads(text)
        arr = np.array(payload["entries"], dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1])


def spin_operator(theta: float) -> np.ndarray:
    """``cos(theta) sigma_x + sin(theta) sigma_y``."""
    return np.array([[0, np.exp(-1j * theta)], [np.exp(1j * theta), 0]], dtype=complex)


def _check_n(n: int, max_n: int = DENSE_MAX_N):
    if n > max_n:
        raise TooLarge(f"dense operators limited to n <= {max_n}, got {n}")


def build_dense(f: SignFunction, angles: AngleConfig, max_n: int = DENSE_MAX_N) -> DenseHermitian:
    """``W_f = sum_s beta(s) sigma(a^n_{s_n}) (x) ... (x) sigma(a^1_{s_1})``.

    The sum is split on the highest party and built recursively, so the
    cost is ``O(4**n)`` rather than ``2**n`` full Kronecker products.
    """
    n = f.n
    _check_n(n, max_n)
    if angles.n != n:
        raise ValueError(f"n mismatch: function {n}, angles {angles.n}")
    beta = walsh_beta(f).beta
    ops = [[spin_operator(angles.theta[j, s]) for s in (0, 1)] for j in range(n)]

    def partial(coeffs: np.ndarray, parties: int) -> np.ndarray:
        # coeffs are indexed little-endian over the first `parties` parties
        if parties == 0:
            return np.array([[coeffs[0]]], dtype=complex)
        half = len(coeffs) // 2
        out = np.zeros((2**parties, 2**parties), dtype=complex)
        for s in (0, 1):
            block = coeffs[s * half:(s + 1) * half]
            if np.any(block):
                out += np.kron(ops[parties - 1][s], partial(block, parties - 1))
        return out

    return DenseHermitian(partial(beta, n))


def eigen_magnitudes(h: DenseHermitian, return_vectors: bool = False):
    """``|eigenvalues|`` of ``h`` in descending order.

    Uses LAPACK ``eigh`` and checks every residual against
    ``1e-10 * ||h||``.  With ``return_vectors`` also returns the signed
    eigenvalues and eigenvectors in the same order.
    """
    vals, vecs = np.linalg.eigh(h.matrix)
    scale = max(float(np.abs(vals).max()), 1.0)
    residual = np.linalg.norm(h.matrix @ vecs - vecs * vals, axis=0).max()
    if residual > RESIDUAL_RTOL * scale:
        raise NumericalFailure(f"eigen residual {residual:.3g} exceeds {RESIDUAL_RTOL} * {scale:.3g}")
    order = np.argsort(-np.abs(vals), kind="stable")
    mags = np.abs(vals)[order]
    if return_vectors:
        return mags, vals[order], vecs[:, order]
    return mags


def basis_index(omega) -> int:
    """Computational-basis index of ``|omega_1 ... omega_n>``."""
    return sum((1 if w == -1 else 0) << j for j, w in enumerate(omega))


def ghz_vector(omega, phase: float) -> np.ndarray:
    """``(e^{i phase} |omega> + |-omega>) / sqrt 2``."""
    omega = np.asarray(omega)
    vec = np.zeros(2 ** len(omega), dtype=complex)
    vec[basis_index(omega)] += np.exp(1j * phase) / np.sqrt(2)
    vec[basis_index(-omega)] += 1 / np.sqrt(2)
    return vec


def ghz_basis(f: SignFunction, angles: AngleConfig):
    """Orthonormal eigenbasis predicted by the closed form.

    One ``(+|lambda|, -|lambda|)`` pair per block ``{omega, -omega}``, using
    the representative with ``omega_1 = +1``.  Returns ``(vectors, eigvals)``
    with vectors as columns.
    """
    cols, eigs = [], []
    for omega in omega_list(f.n):
        if omega[0] != 1:
            continue
        mag, theta = eigenvalue(f, angles, omega)
        cols += [ghz_vector(omega, theta), ghz_vector(omega, theta + np.pi)]
        eigs += [mag, -mag]
    return np.array(cols).T, np.array(eigs)


def verify_ghz_eigenvectors(f: SignFunction, angles: AngleConfig, max_n: int = DENSE_MAX_N) -> float:
    """Largest ``||W psi - lambda psi||`` over every predicted GHZ eigenpair."""
    _check_n(f.n, max_n)
    w = build_dense(f, angles, max_n).matrix
    worst = 0.0
    for omega in omega_list(f.n):
        mag, theta = eigenvalue(f, angles, omega)
        for phase, lam in ((theta, mag), (theta + np.pi, -mag)):
            psi = ghz_vector(omega, phase)
            worst = max(worst, float(np.linalg.norm(w @ psi - lam * psi)))
    return worst


def haar_qubits(rng: np.random.Generator, shape) -> np.ndarray:
    """Haar-random single-qubit states, shape ``(*shape, 2)``."""
    z = rng.standard_normal((*shape, 2)) + 1j * rng.standard_normal((*shape, 2))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def product_vectors(local: np.ndarray) -> np.ndarray:
    """Assemble ``(batch, n, 2)`` local states into ``(batch, 2**n)`` product vectors."""
    batch, n, _ = local.shape
    out = np.ones((batch, 1), dtype=complex)
    for j in range(n - 1, -1, -1):
        out = (out[:, :, None] * local[:, j, None, :]).reshape(batch, -1)
    return out


@dataclass(frozen=True, eq=False)
class ProductState:
    local: np.ndarray

    def __post_init__(self):
        local = np.asarray(self.local, dtype=complex)
        if local.ndim != 2 or local.shape[1] != 2:
            raise ValueError("local states must have shape (n, 2)")
        if not np.allclose(np.linalg.norm(local, axis=1), 1.0, rtol=0, atol=1e-14):
            raise ValueError("local states must have unit norm")
        object.__setattr__(self, "local", local)

    @property
    def vector(self) -> np.ndarray:
        return product_vectors(self.local[None])[0]


def separable_bound_check(
    f: SignFunction,
    angles: AngleConfig,
    samples: int = 10_000,
    seed=0,
    max_n: int = DENSE_MAX_N,
    chunk: int = 2048,
) -> float:
    """Max ``|<phi|W_f|phi>|`` over random Haar product states.

    Raises BoundViolated above ``1 + 1e-9``; the bound holds for every
    separable state, so a violation means a bug.
    """
    n = f.n
    _check_n(n, max_n)
    w = build_dense(f, angles, max_n).matrix
    rng = _rng.stream(seed, n, samples)
    worst = 0.0
    for start in range(0, samples, chunk):
        size = min(chunk, samples - start)
        phi = product_vectors(haar_qubits(rng, (size, n)))
        expect = np.einsum("bi,ij,bj->b", phi.conj(), w, phi)
        worst = max(worst, float(np.abs(expect).max()))
    if worst > 1 + SEPARABLE_ATOL:
        raise BoundViolated(f"product-state expectation {worst!r} exceeds 1")
    return worst


def product_norm(
    h: DenseHermitian,
    restarts: int = 8,
    seed=0,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    max_n: int = DENSE_MAX_N,
) -> float:
    """Lower bound on ``[[h]] = sup ||h |a_1>...|a_n>||`` over unit product vectors.

    Alternating ascent: with all sites but ``j`` fixed, ``||h phi||**2`` is a
    2x2 Hermitian form in ``a_j``; its principal eigenvector is the update.
    """
    n = h.n
    _check_n(n, max_n)
    m = h.matrix
    rng = _rng.stream(seed, n, restarts)
    best = 0.0
    all_converged = True
    for _ in range(restarts):
        local = haar_qubits(rng, (n,))
        value = np.linalg.norm(m @ product_vectors(local[None])[0])
        converged = False
        for _ in range(max_iter):
            prev = value
            for j in range(n):
                k = _site_map(m, local, j)
                evals, evecs = np.linalg.eigh(k.conj().T @ k)
                local[j] = evecs[:, -1]
                new = float(np.sqrt(max(evals[-1], 0.0)))
                if new < value - 1e-12 * max(1.0, value):
                    raise AssertionError("product-norm ascent decreased")
                value = new
            if value - prev < tol:
                converged = True
                break
        all_converged &= converged
        best = max(best, value)
    if not all_converged:
        warnings.warn("product_norm hit max_iter before converging", DidNotConverge, stacklevel=2)
    return best


def _site_map(m: np.ndarray, local: np.ndarray, j: int) -> np.ndarray:
    """``K`` with ``h phi = K a_j`` when every other site is held fixed."""
    n = local.shape[0]
    hi = product_vectors(local[None, j + 1:])[0] if j < n - 1 else np.ones(1)
    lo = product_vectors(local[None, :j])[0] if j > 0 else np.ones(1)
    m4 = m.reshape(m.shape[0], 2 ** (n - 1 - j), 2, 2**j)
    return np.einsum("xabc,a,c->xb", m4, hi, lo)
