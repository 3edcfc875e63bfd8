"""The classical correlation polytope ``C_n`` and its facets.

Vertices come from deterministic assignments ``X^j_s = +-1``; each sign
function ``f`` labels the facet ``|sum_s beta_f(s) q(s)| <= 1``.  All facet
arithmetic on vertices is exact (integer numerators over ``2**n``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .boolfn import (
    SignFunction,
    bit_matrix,
    fwht,
    inverse_walsh,
    is_trivial_facet,
    orbit,
    WalshSpectrum,
    walsh_beta,
)
from .errors import TooLarge

VERTEX_MAX_N = 4
MEMBERSHIP_MAX_N = 4
MEMBERSHIP_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class ClassicalVertex:
    """A deterministic assignment ``assignments[j] = (X_0^j, X_1^j)``."""

    assignments: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.assignments)

    @property
    def vector(self) -> np.ndarray:
        """``a(s) = prod_j X^j_{s_j}``, little-endian over ``s``."""
        x = np.array(self.assignments, dtype=np.int64)
        bits = bit_matrix(self.n)
        return np.prod(x[np.arange(self.n), bits], axis=1)


@dataclass(frozen=True)
class VertexEnumeration:
    vertices: list
    distinct_vectors: int

    @property
    def assignments(self) -> int:
        return len(self.vertices)


def enumerate_vertices(n: int, max_n: int = VERTEX_MAX_N) -> VertexEnumeration:
    """All ``2**(2n)`` assignment vertices plus the count of distinct vectors."""
    if n > max_n:
        raise TooLarge(f"vertex enumeration limited to n <= {max_n}, got {n}")
    pairs = list(itertools.product((1, -1), repeat=2))
    verts = [ClassicalVertex(tuple(a)) for a in itertools.product(pairs, repeat=n)]
    distinct = {v.vector.tobytes() for v in verts}
    return VertexEnumeration(verts, len(distinct))


def facet_value(f: SignFunction, v: ClassicalVertex) -> int:
    """``sum_s beta_f(s) a(s)``; always exactly +1 or -1."""
    if f.n != v.n:
        raise ValueError(f"n mismatch: function {f.n}, vertex {v.n}")
    spec = walsh_beta(f)
    total = int(np.dot(spec.numer, v.vector))
    if total not in (spec.denom, -spec.denom):
        raise AssertionError(f"facet value {Fraction(total, spec.denom)} is not +-1")
    return total // spec.denom


def _n_from_len(size: int) -> int:
    n = size.bit_length() - 1
    if n < 1 or 2**n != size:
        raise ValueError(f"correlation vectors need 2**n coordinates, got {size}")
    return n


def facet_matrix(n: int, max_n: int = MEMBERSHIP_MAX_N) -> np.ndarray:
    """Integer numerators ``2**n beta_f(s)`` for all ``2**(2**n)`` functions ``f``.

    Row ``w`` is the function whose sign vector has bit ``i`` of ``w`` set
    where ``f = +1`` (the hex encoding of :class:`SignFunction`).
    """
    if n > max_n:
        raise TooLarge(f"facet enumeration limited to n <= {max_n}, got {n}")
    size = 2**n
    words = np.arange(2**size, dtype=np.int64)
    signs = np.where((words[:, None] >> np.arange(size)) & 1, 1, -1).astype(np.int64)
    return fwht(signs)


def facet_values(q) -> np.ndarray:
    """``sum_s beta_f(s) q(s)`` for every ``f``, as floats."""
    q = np.asarray(q, dtype=float)
    n = _n_from_len(len(q))
    return facet_matrix(n) @ q / 2**n


def first_violated_facet(q, atol: float = MEMBERSHIP_ATOL):
    """The first ``f`` (in hex order) with ``|<beta_f, q>| > 1``, or None.

    Inputs made of ints or Fractions are checked exactly; floats use ``atol``.
    """
    q = list(q)
    n = _n_from_len(len(q))
    mat = facet_matrix(n)
    if all(isinstance(x, Rational) for x in q):
        scale = 2**n
        for w, row in enumerate(mat):
            if abs(sum(int(c) * Fraction(x) for c, x in zip(row, q))) > scale:
                return _function_from_word(n, w)
        return None
    values = mat @ np.asarray(q, dtype=float) / 2**n
    bad = np.flatnonzero(np.abs(values) > 1 + atol)
    return _function_from_word(n, int(bad[0])) if bad.size else None


def membership(q, atol: float = MEMBERSHIP_ATOL) -> bool:
    """True iff ``q`` satisfies every facet inequality of ``C_n``."""
    return first_violated_facet(q, atol) is None


def _function_from_word(n: int, word: int) -> SignFunction:
    return SignFunction(n, np.array([1 if (word >> i) & 1 else -1 for i in range(2**n)]))


def quantum_point(f: SignFunction, angles, omega=None) -> np.ndarray:
    """Correlations ``q(s) = <psi|A^1_{s_1} ... A^n_{s_n}|psi>`` in a GHZ eigenvector.

    ``<beta_f, q>`` is then the eigenvalue ``|lambda_f(omega)|``.  Defaults
    to the maximizing ``omega``.
    """
    from .oracle import ghz_vector, spin_operator
    from .spectrum import eigenvalue, full_spectrum

    if omega is None:
        omega = full_spectrum(f, angles).argmax_omega
    _, theta = eigenvalue(f, angles, omega)
    psi = ghz_vector(omega, theta)
    n = f.n
    q = np.empty(2**n)
    for idx, s in enumerate(bit_matrix(n)):
        op = np.ones((1, 1), dtype=complex)
        for j in range(n - 1, -1, -1):
            op = np.kron(op, spin_operator(angles.theta[j, s[j]]))
        q[idx] = float(np.real(psi.conj() @ op @ psi))
    return q


@dataclass(frozen=True)
class ChshClassification:
    total: int
    trivial: frozenset
    chsh: frozenset
    relabel_family: frozenset
    in_chsh_orbit: bool
    matches_relabel_family: bool


def chsh_base() -> SignFunction:
    """The CHSH facet ``(A0B0 + A0B1 + A1B0 - A1B1) / 2``."""
    return SignFunction(2, [1, 1, 1, -1])


def _chsh_family() -> frozenset:
    """CHSH and the variants obtained by exchanging the two X or the two Y settings.

    Built directly from the coefficient table ``c[x][y]``, with both signs
    because ``f`` and ``-f`` label the same two-sided inequality.
    """
    base = {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}
    out = set()
    for px, py in itertools.product((0, 1), repeat=2):
        coeffs = {(x, y): base[(x ^ px, y ^ py)] for x, y in base}
        numer = np.array([coeffs[(s & 1, s >> 1)] for s in range(4)], dtype=np.int64) * 2
        f = inverse_walsh(WalshSpectrum(2, numer))
        out.update({f, -f})
    return frozenset(out)


def chsh_facets_n2() -> ChshClassification:
    funcs = [_function_from_word(2, w) for w in range(16)]
    trivial = frozenset(f for f in funcs if is_trivial_facet(f))
    chsh = frozenset(f for f in funcs if not is_trivial_facet(f))
    family = _chsh_family()
    return ChshClassification(
        total=len(funcs),
        trivial=trivial,
        chsh=chsh,
        relabel_family=family,
        in_chsh_orbit=chsh <= orbit(chsh_base()),
        matches_relabel_family=chsh == family,
    )

