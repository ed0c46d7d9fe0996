"""Dense complex linear algebra for composite quantum systems.

Everything here operates on plain square ``numpy`` arrays of ``complex``
dtype. The subsystem convention used throughout the package is that the
leftmost tensor factor is the slowest-varying (most significant) index,
which is exactly ``numpy.kron`` ordering.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg

TOL_HERM = 1e-10
TOL_PSD = 1e-9
TOL_CLOSURE = 1e-9

# einsum supports 52 distinct subscripts; each subsystem uses two.
_MAX_FACTORS = 26


def as_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex array and reject non-finite entries."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a.T)


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def herm_deviation(a: np.ndarray) -> float:
    """Max-norm distance from Hermiticity, ``max |a - a^dag|``."""
    return max_abs(a - dagger(a))


def check_subsystem_dims(dims: Sequence[int], total_dim: int) -> tuple[int, ...]:
    """Validate a subsystem dimension list against a matrix dimension."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("subsystem dims must be non-empty")
    if any(d < 2 for d in dims):
        raise ValueError(f"every subsystem dim must be >= 2, got {dims}")
    prod = int(np.prod(dims))
    if prod != total_dim:
        raise ValueError(f"subsystem dims {dims} have product {prod}, expected {total_dim}")
    if len(dims) > _MAX_FACTORS:
        raise ValueError(f"at most {_MAX_FACTORS} subsystems supported, got {len(dims)}")
    return dims


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two square operators, left factor most significant."""
    a = as_square(a, "kron left factor")
    b = as_square(b, "kron right factor")
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of a non-empty sequence of square operators."""
    if len(factors) == 0:
        raise ValueError("kron_all needs at least one factor")
    out = as_square(factors[0], "kron factor 0")
    for i, f in enumerate(factors[1:], start=1):
        out = np.kron(out, as_square(f, f"kron factor {i}"))
    return out


def kron_sum(terms: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker sum: sum_n I x ... x term_n x ... x I.

    The result acts on the tensor product of the terms' spaces; its
    eigenvalues are all sums of one eigenvalue per term.
    """
    if len(terms) == 0:
        raise ValueError("kron_sum of an empty term list has no defined dimension")
    mats = [as_square(t, f"kron_sum term {i}") for i, t in enumerate(terms)]
    dims = [m.shape[0] for m in mats]
    total = int(np.prod(dims))
    out = np.zeros((total, total), dtype=complex)
    for n, m in enumerate(mats):
        left = int(np.prod(dims[:n])) if n > 0 else 1
        right = int(np.prod(dims[n + 1:])) if n + 1 < len(dims) else 1
        term = np.kron(np.kron(np.eye(left), m), np.eye(right))
        out += term
    return out


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` lists per-subsystem dimensions (leftmost factor first); the kept
    subsystems retain their relative order. Trace is preserved exactly.
    """
    rho = as_square(rho, "partial_trace input")
    dims = check_subsystem_dims(dims, rho.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if not keep:
        raise ValueError("must keep at least one subsystem")
    tensor = rho.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out_sub = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out_sub, tensor)
    d_keep = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(d_keep, d_keep)


def herm_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises if the input deviates from Hermiticity by more than ``TOL_HERM``
    in max-norm.
    """
    a = as_square(a, "herm_eig input")
    dev = herm_deviation(a)
    if dev > TOL_HERM:
        raise ValueError(
            f"matrix is not Hermitian within tol_herm={TOL_HERM:g} "
            f"(max deviation {dev:.3e})"
        )
    w, v = np.linalg.eigh(a)
    return w.astype(float), v


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential via scipy's scaling-and-squaring Pade scheme."""
    a = as_square(a, "matrix_exp input")
    return scipy.linalg.expm(a)


def psd_sqrt(a: np.ndarray, tol_psd: float = TOL_PSD) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues in ``[-tol_psd, 0)`` are clamped to zero; anything below
    ``-tol_psd`` is rejected as not positive semi-definite.
    """
    w, v = herm_eig(a)
    if w[0] < -tol_psd:
        raise ValueError(
            f"matrix is not PSD within tol_psd={tol_psd:g} (min eigenvalue {w[0]:.3e})"
        )
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (root + dagger(root))


def reorder_subsystems(rho: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Permute tensor factors: new factor ``i`` is old factor ``perm[i]``.

    Equivalent to ``R rho R^dag`` for the permutation matrix ``R``; applying
    ``perm`` followed by its inverse restores the input exactly.
    """
    rho = as_square(rho, "reorder_subsystems input")
    dims = check_subsystem_dims(dims, rho.shape[0])
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{n - 1}")
    tensor = rho.reshape(dims + dims)
    axes = perm + [n + p for p in perm]
    new_dims = [dims[p] for p in perm]
    total = int(np.prod(new_dims))
    return np.transpose(tensor, axes).reshape(total, total)


def inverse_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv
