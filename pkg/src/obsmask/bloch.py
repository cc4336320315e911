"""Generator bases of SU(d), Bloch-vector codecs for states and observables,
and positivity constraints evaluated through Newton's identities."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .algebra import require_hermitian
from .errors import NotUnitTraceError

# Condition values this far below zero still count as positive (absorbs
# roundoff at the pure-state boundary).
POSITIVITY_ATOL = 1e-9

_basis_cache: dict[int, "GeneratorBasis"] = {}
_tensor_cache: dict[int, "SymmetricTensor"] = {}
_cache_lock = threading.Lock()


@dataclass(frozen=True)
class GeneratorBasis:
    """The d^2 - 1 Hermitian, traceless generators with Tr(g_i g_j) = 2 delta_ij.

    Ordering: symmetric off-diagonal pairs (real), then antisymmetric pairs
    (imaginary), then diagonal generators, each block in index-lexicographic
    order.  For d = 2 this is exactly (sigma_1, sigma_2, sigma_3).
    """

    dimension: int
    matrices: np.ndarray  # shape (d^2 - 1, d, d), read-only

    def __len__(self) -> int:
        return self.matrices.shape[0]


@dataclass(frozen=True)
class SymmetricTensor:
    """Totally symmetric structure constants g_ijk = Tr({g_i, g_j} g_k) / 4."""

    dimension: int
    values: np.ndarray  # shape (d^2-1,) * 3, real, read-only


@dataclass(frozen=True)
class BlochVector:
    """Real coordinates b of a state rho = I/d + sum_i b_i g_i."""

    dimension: int
    b: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.b))


@dataclass(frozen=True)
class ObservableCoeffs:
    """Real coordinates (a0, a) of an observable O = a0 I + sum_i a_i g_i."""

    dimension: int
    a0: float
    a: np.ndarray

    def a_norm(self) -> float:
        return float(np.linalg.norm(self.a))


def _build_generators(d: int) -> np.ndarray:
    gens = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            gens.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            gens.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[np.arange(l), np.arange(l)] = 1.0
        m[l, l] = -float(l)
        gens.append(m * np.sqrt(2.0 / (l * (l + 1))))
    return np.stack(gens)


def generator_basis(d: int) -> GeneratorBasis:
    """Return (and memoize) the generator basis for dimension d >= 2."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    with _cache_lock:
        basis = _basis_cache.get(d)
        if basis is None:
            mats = _build_generators(d)
            mats.setflags(write=False)
            basis = GeneratorBasis(dimension=d, matrices=mats)
            _basis_cache[d] = basis
    return basis


def symmetric_tensor(d: int) -> SymmetricTensor:
    """Return (and memoize) g_ijk = Tr({g_i, g_j} g_k) / 4 for dimension d."""
    with _cache_lock:
        cached = _tensor_cache.get(d)
    if cached is not None:
        return cached
    g = generator_basis(d).matrices
    prod = np.einsum("iab,jbc->ijac", g, g)
    traces = np.einsum("ijab,kba->ijk", prod, g)
    values = np.real(traces + traces.transpose(1, 0, 2)) / 4.0
    values.setflags(write=False)
    tensor = SymmetricTensor(dimension=d, values=values)
    with _cache_lock:
        _tensor_cache[d] = tensor
    return tensor


def state_to_bloch(rho) -> BlochVector:
    """Bloch coordinates b_i = Tr(rho g_i) / 2 of a unit-trace Hermitian matrix."""
    arr = require_hermitian(rho)
    d = arr.shape[0]
    tr = np.trace(arr).real
    if abs(tr - 1.0) > 1e-10:
        raise NotUnitTraceError(f"trace is {tr!r}, not 1")
    g = generator_basis(d).matrices
    b = np.einsum("kab,ba->k", g, arr).real / 2.0
    return BlochVector(dimension=d, b=b)


def bloch_to_state(b: BlochVector) -> np.ndarray:
    """Matrix I/d + sum_i b_i g_i; Hermitian unit-trace, positivity not implied."""
    g = generator_basis(b.dimension).matrices
    return np.eye(b.dimension) / b.dimension + np.einsum("k,kab->ab", b.b, g)


def observable_coeffs(obs) -> ObservableCoeffs:
    """Coefficients a0 = Tr(O)/d, a_i = Tr(O g_i)/2 of a Hermitian matrix."""
    arr = require_hermitian(obs)
    d = arr.shape[0]
    g = generator_basis(d).matrices
    a = np.einsum("kab,ba->k", g, arr).real / 2.0
    return ObservableCoeffs(dimension=d, a0=float(np.trace(arr).real) / d, a=a)


def coeffs_to_observable(c: ObservableCoeffs) -> np.ndarray:
    """Matrix a0 I + sum_i a_i g_i."""
    g = generator_basis(c.dimension).matrices
    return c.a0 * np.eye(c.dimension) + np.einsum("k,kab->ab", np.asarray(c.a, float), g)


def _elementary_symmetric(power_sums: np.ndarray) -> np.ndarray:
    """e_1..e_n from power sums p_1..p_n via Newton's identities."""
    n = len(power_sums)
    e = np.zeros(n + 1)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1.0) ** (i - 1) * e[k - i] * power_sums[i - 1]
        e[k] = acc / k
    return e[1:]


def positivity_conditions(b: BlochVector, tol: float = POSITIVITY_ATOL):
    """Elementary symmetric polynomials e_2..e_d of the reconstructed matrix.

    Computed from the power sums Tr(rho^p), p = 1..d, through Newton's
    identities; no eigensolve.  The matrix is positive semidefinite exactly
    when every value is nonnegative (checked against -tol).  The first value
    relates to the ball constraint by 2 e_2 = (d-1)/d - 2|b|^2.
    """
    d = b.dimension
    rho = bloch_to_state(b)
    power_sums = np.empty(d)
    power_sums[0] = 1.0
    acc = rho
    for p in range(2, d + 1):
        acc = acc @ rho
        power_sums[p - 1] = np.trace(acc).real
    values = _elementary_symmetric(power_sums)[1:]
    return values, bool(np.all(values >= -tol))


def cubic_condition_value(b: BlochVector) -> float:
    """The cubic positivity combination built from the symmetric tensor.

    Equals (d-1)(d-2)/d^2 - 6 (d-2)/d |b|^2 + 4 sum_ijk g_ijk b_i b_j b_k,
    which coincides with 6 e_3 of the reconstructed matrix.  Exposed as a
    read-only cross-check of the g_ijk normalization (vacuously zero at d=2).
    """
    d = b.dimension
    g = symmetric_tensor(d).values
    bb = float(np.dot(b.b, b.b))
    cubic = float(np.einsum("ijk,i,j,k->", g, b.b, b.b, b.b))
    return (d - 1) * (d - 2) / d**2 - 6.0 * (d - 2) / d * bb + 4.0 * cubic
