"""Sign functions on {0,1}^n and their Walsh-Hadamard spectra.

A facet of the classical correlation polytope is labelled by a function
``f: {0,1}^n -> {-1,+1}``.  We store ``f`` as a length ``2**n`` vector
indexed little-endian: bit ``j-1`` of the index holds ``eps_j``.  The same
convention indexes the Walsh coefficients ``beta(s)``.

Walsh coefficients are kept exact as integer numerators over ``2**n``::

    beta(s) = 2**-n * sum_eps (-1)**(eps . s) * f(eps)
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _rng
from .errors import NotASignFunction, TooLarge

ORBIT_MAX_N = 3


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis.

    Works on integer arrays without any rounding; ``fwht(fwht(x)) == 2**n * x``.
    """
    out = np.array(values, copy=True)
    size = out.shape[-1]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    lead = out.shape[:-1]
    h = 1
    while h < size:
        blocks = out.reshape(*lead, size // (2 * h), 2, h)
        a = blocks[..., 0, :].copy()
        b = blocks[..., 1, :]
        blocks[..., 0, :] += b
        blocks[..., 1, :] = a - b
        h *= 2
    return out


@dataclass(frozen=True, eq=False)
class SignFunction:
    """``f: {0,1}^n -> {-1,+1}`` as an immutable sign vector."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        vals = np.asarray(self.values)
        if vals.shape != (2**self.n,):
            raise NotASignFunction(
                f"expected {2**self.n} entries for n={self.n}, got shape {vals.shape}"
            )
        if not np.all((vals == 1) | (vals == -1)):
            raise NotASignFunction("entries must be exactly +1 or -1")
        object.__setattr__(self, "values", _frozen(vals.astype(np.int8)))

    @classmethod
    def from_signs(cls, signs) -> "SignFunction":
        signs = np.asarray(signs)
        n = int(np.log2(len(signs))) if len(signs) else 0
        if n < 1 or 2**n != len(signs):
            raise NotASignFunction(f"length {len(signs)} is not 2**n with n >= 1")
        return cls(n, signs)

    @classmethod
    def constant(cls, n: int, sign: int = 1) -> "SignFunction":
        return cls(n, np.full(2**n, sign))

    @classmethod
    def from_callable(cls, n: int, func) -> "SignFunction":
        """Build from ``func(eps)`` where ``eps`` is a tuple ``(eps_1, ..., eps_n)``."""
        return cls(n, np.array([func(eps) for eps in bit_tuples(n)]))

    def __eq__(self, other):
        if not isinstance(other, SignFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __repr__(self):
        return f"SignFunction(n={self.n}, hex={self.to_hex()!r})"

    def __call__(self, eps) -> int:
        return int(self.values[bits_to_index(eps)])

    def __neg__(self) -> "SignFunction":
        return SignFunction(self.n, -self.values)

    # serialization ------------------------------------------------------

    def to_hex(self) -> str:
        """Hex of the bit pattern (bit i set iff ``values[i] == +1``)."""
        word = sum(1 << i for i, v in enumerate(self.values) if v == 1)
        width = max(1, (2**self.n + 3) // 4)
        return format(word, f"0{width}x")

    @classmethod
    def from_hex(cls, text: str, n: int) -> "SignFunction":
        try:
            word = int(text, 16)
        except ValueError as exc:
            raise NotASignFunction(f"not a hex string: {text!r}") from exc
        size = 2**n
        if word >> size:
            raise NotASignFunction(f"hex {text!r} has bits beyond 2**{n} entries")
        return cls(n, np.array([1 if (word >> i) & 1 else -1 for i in range(size)]))

    def to_dict(self) -> dict:
        return {"schema": 1, "n": self.n, "signs": [int(v) for v in self.values]}

    @classmethod
    def from_dict(cls, payload: dict) -> "SignFunction":
        if "signs" in payload:
            f = cls.from_signs(payload["signs"])
            if "n" in payload and int(payload["n"]) != f.n:
                raise NotASignFunction(f"n={payload['n']} does not match {len(payload['signs'])} signs")
            return f
        if "hex" in payload and "n" in payload:
            return cls.from_hex(payload["hex"], int(payload["n"]))
        raise NotASignFunction("payload needs 'signs' or ('hex', 'n')")

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SignFunction":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """Walsh coefficients ``beta(s) = numer[s] / 2**n``."""

    n: int
    numer: np.ndarray

    def __post_init__(self):
        numer = np.asarray(self.numer)
        if numer.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} numerators, got shape {numer.shape}")
        if not np.issubdtype(numer.dtype, np.integer):
            raise TypeError("numerators must be integers")
        object.__setattr__(self, "numer", _frozen(numer.astype(np.int64)))

    def __eq__(self, other):
        if not isinstance(other, WalshSpectrum):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.numer, other.numer)

    def __hash__(self):
        return hash((self.n, self.numer.tobytes()))

    @property
    def denom(self) -> int:
        return 2**self.n

    @property
    def beta(self) -> np.ndarray:
        """Float view of the coefficients."""
        return self.numer / self.denom

    def fractions(self) -> list[Fraction]:
        return [Fraction(int(k), self.denom) for k in self.numer]

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.numer)

    def sum_of_squares(self) -> Fraction:
        """Exact ``sum_s beta(s)**2``."""
        return Fraction(sum(int(k) * int(k) for k in self.numer), self.denom**2)

    def l1(self) -> float:
        return float(np.abs(self.numer).sum()) / self.denom

    @classmethod
    def from_fractions(cls, n: int, betas) -> "WalshSpectrum":
        numer = []
        for b in betas:
            k = Fraction(b) * 2**n
            if k.denominator != 1:
                raise NotASignFunction(f"beta={b} is not a multiple of 2**-{n}")
            numer.append(int(k))
        return cls(n, np.array(numer, dtype=np.int64))


def bits_to_index(eps) -> int:
    return sum(int(b) << j for j, b in enumerate(eps))


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(n))


def bit_tuples(n: int):
    """All ``eps`` in index order (little-endian)."""
    return [index_to_bits(i, n) for i in range(2**n)]


def bit_matrix(n: int) -> np.ndarray:
    """``(2**n, n)`` array whose row ``i`` is ``index_to_bits(i, n)``."""
    idx = np.arange(2**n)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)


def walsh_beta(f: SignFunction) -> WalshSpectrum:
    return WalshSpectrum(f.n, fwht(f.values.astype(np.int64)))


def inverse_walsh(spec: WalshSpectrum) -> SignFunction:
    """Invert :func:`walsh_beta`; raise if the result is not a sign vector."""
    vals = fwht(spec.numer)
    denom = spec.denom
    if np.any(vals % denom):
        raise NotASignFunction("inverse transform is not integral")
    vals = vals // denom
    if not np.all(np.abs(vals) == 1):
        bad = int(np.flatnonzero(np.abs(vals) != 1)[0])
        raise NotASignFunction(
            f"inverse transform gives {int(vals[bad])} at eps={index_to_bits(bad, spec.n)}"
        )
    return SignFunction(spec.n, vals)


def is_trivial_facet(f: SignFunction) -> bool:
    """True iff ``f`` is a signed character ``+-(-1)**(delta . eps)``.

    The facet inequality then collapses to ``-1 <= X...X <= 1``, which
    every operator with squared-to-identity factors satisfies.
    """
    return len(walsh_beta(f).support()) == 1


def signed_characters(n: int) -> list[SignFunction]:
    bits = bit_matrix(n).astype(np.int64)
    out = []
    for delta in range(2**n):
        chi = 1 - 2 * ((bits @ np.array(index_to_bits(delta, n))) % 2)
        out.append(SignFunction(n, chi))
        out.append(SignFunction(n, -chi))
    return out


def trivial_facet_counts(n: int) -> dict:
    """Both readings of the trivial-facet count.

    ``signed_characters`` is what an exhaustive Walsh-support scan finds;
    ``stated`` is the figure ``2**n`` quoted in the literature this package
    follows.  They disagree by a factor of two because ``f`` and ``-f`` label
    the same two-sided inequality.
    """
    return {
        "signed_characters": 2 ** (n + 1),
        "stated": 2**n,
        "distinct_inequalities": 2**n,
        "discrepancy": 2 ** (n + 1) != 2**n,
    }


def all_sign_functions(n: int):
    if n > ORBIT_MAX_N + 1:
        raise TooLarge(f"2**(2**{n}) functions is too many to enumerate")
    size = 2**n
    for word in range(2**size):
        yield SignFunction(n, np.array([1 if (word >> i) & 1 else -1 for i in range(size)]))


# symmetry group -----------------------------------------------------------


@dataclass(frozen=True)
class SymmetryElement:
    """A symmetry of the correlation polytope.

    ``perm[k]`` is the old party that becomes party ``k`` (0-based).
    ``swap[j]`` exchanges the two settings of party ``j``; ``flip[j]``
    negates the outcome of setting 1 at party ``j``; ``sign`` negates the
    whole inequality.  On sign functions the action is::

        f'(eps) = sign * (-1)**(swap . eps) * f(P eps xor flip)

    with ``(P eps)[perm[k]] = eps[k]``.
    """

    perm: tuple[int, ...]
    swap: tuple[int, ...]
    flip: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"{self.perm} is not a permutation of range({n})")
        if len(self.swap) != n or len(self.flip) != n:
            raise ValueError("swap and flip need one bit per party")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SymmetryElement":
        return cls(tuple(range(n)), (0,) * n, (0,) * n, 1)

    def _move(self, bits) -> tuple[int, ...]:
        out = [0] * self.n
        for k, b in enumerate(bits):
            out[self.perm[k]] = b
        return tuple(out)

    def _unmove(self, bits) -> tuple[int, ...]:
        return tuple(bits[self.perm[k]] for k in range(self.n))

    def compose(self, other: "SymmetryElement") -> "SymmetryElement":
        """``self.compose(other)`` acts as ``other`` first, then ``self``."""
        g, h = self, other
        if g.n != h.n:
            raise ValueError("party counts differ")
        # P = P_h P_g, i.e. (P eps)[p] = eps[perm_g^-1 perm_h^-1 p]
        perm = tuple(h.perm[g.perm[k]] for k in range(g.n))
        swap = tuple(a ^ b for a, b in zip(g.swap, g._unmove(h.swap)))
        flip = tuple(a ^ b for a, b in zip(h._move(g.flip), h.flip))
        parity = sum(a & b for a, b in zip(h.swap, g.flip)) % 2
        return SymmetryElement(perm, swap, flip, g.sign * h.sign * (-1) ** parity)

    def inverse(self) -> "SymmetryElement":
        for cand in symmetry_group(self.n):
            if cand.compose(self) == SymmetryElement.identity(self.n):
                return cand
        raise AssertionError("group is not closed")  # pragma: no cover


def symmetry_group(n: int):
    """All ``n! * 2**(2n+1)`` elements, in a fixed order."""
    for perm in itertools.permutations(range(n)):
        for swap in itertools.product((0, 1), repeat=n):
            for flip in itertools.product((0, 1), repeat=n):
                for sign in (1, -1):
                    yield SymmetryElement(perm, swap, flip, sign)


def apply_symmetry(g: SymmetryElement, f: SignFunction) -> SignFunction:
    """Image of ``f``'s facet under ``g``, computed on the Walsh side.

    In coefficient space ``beta'(s) = sign * (-1)**(flip . u) * beta(u)``
    with ``u = P(s xor swap)``: the swap exchanges the ``s_j = 0/1`` halves,
    the flip multiplies by a character, the permutation relabels axes.
    """
    if g.n != f.n:
        raise ValueError(f"element acts on n={g.n}, function has n={f.n}")
    n = f.n
    numer = walsh_beta(f).numer
    bits = bit_matrix(n)
    shifted = bits ^ np.array(g.swap, dtype=np.int8)
    moved = np.empty_like(shifted)
    moved[:, list(g.perm)] = shifted
    src = moved.astype(np.int64) @ (1 << np.arange(n))
    phase = 1 - 2 * ((moved.astype(np.int64) @ np.array(g.flip)) % 2)
    new = g.sign * phase * numer[src]
    return inverse_walsh(WalshSpectrum(n, new))


def apply_symmetry_direct(g: SymmetryElement, f: SignFunction) -> SignFunction:
    """Same action evaluated pointwise on ``f``; used to cross-check."""
    out = []
    for eps in bit_tuples(f.n):
        target = tuple(a ^ b for a, b in zip(g._move(eps), g.flip))
        chi = (-1) ** (sum(a & b for a, b in zip(g.swap, eps)) % 2)
        out.append(g.sign * chi * f(target))
    return SignFunction(f.n, np.array(out))


def orbit(f: SignFunction, max_n: int = ORBIT_MAX_N) -> frozenset:
    if f.n > max_n:
        raise TooLarge(f"exhaustive orbit limited to n <= {max_n}, got n={f.n}")
    return frozenset(apply_symmetry(g, f) for g in symmetry_group(f.n))


def random_f(n: int, seed) -> SignFunction:
    """Uniform random sign function; deterministic in ``(n, seed)``.

    ``seed`` may be an int or a tuple of ints (e.g. ``(master, index)``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng.stream(seed, n)
    return SignFunction(n, 1 - 2 * rng.integers(0, 2, size=2**n, dtype=np.int8))


def random_sign_matrix(n: int, samples: int, seed) -> np.ndarray:
    """Rows are ``random_f(n, (seed, i)).values`` for ``i < samples``."""
    return np.stack([random_f(n, (*_rng.as_key(seed), i)).values for i in range(samples)])


def mermin_klyshko_candidate(n: int) -> SignFunction:
    """``+1`` iff the Hamming weight of ``eps`` is 0 or 1 mod 4."""
    if n < 2:
        raise ValueError("n must be >= 2")
    weights = bit_matrix(n).sum(axis=1)
    return SignFunction(n, np.where(weights % 4 <= 1, 1, -1))


def mermin_klyshko_f(n: int, restarts: int = 64, seed=0, tol: float = 1e-6) -> SignFunction:
    """Mermin-Klyshko facet, certified to reach ``sqrt(2**(n-1))``.

    Raises ConstructionInvalid when the optimizer cannot reproduce that value.
    """
    from .spectrum import certify_mermin_klyshko

    f = mermin_klyshko_candidate(n)
    certify_mermin_klyshko(f, restarts=restarts, seed=seed, tol=tol)
    return f
