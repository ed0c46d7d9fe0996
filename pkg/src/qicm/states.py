"""Hierarchical Hilbert-space layouts and state construction.

A percept feature is encoded as a bank of truth-value oscillators: one
oscillator per (attribute, truth value) pair, whose excitation level is the
relevance assigned to that conjunction. Observer features work the same way
with one oscillator per feature level. A :class:`HilbertLayout` records the
ordered oscillator factors so basis indices can be mapped back to labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .linalg import TOL_HERM, TOL_PSD

TOL_TRACE = 1e-9

SENSORY = "sensory"
OBSERVER = "observer"


# ---------------------------------------------------------------------------
# feature specifications


@dataclass(frozen=True)
class FeatureSpec:
    """One sensory feature: attributes x truth values, each a relevance oscillator."""

    name: str
    attributes: tuple[str, ...]
    truth_values: tuple[float, ...]
    relevance_levels: int
    frequency: float

    def validate(self) -> list[str]:
        errs = []
        where = f"sensory feature {self.name!r}"
        if len(self.attributes) < 2:
            errs.append(f"{where}: needs at least 2 attributes, got {len(self.attributes)}")
        if len(set(self.attributes)) != len(self.attributes):
            errs.append(f"{where}: attribute labels must be unique")
        if len(self.truth_values) < 2:
            errs.append(f"{where}: needs at least 2 truth values, got {len(self.truth_values)}")
        tv = self.truth_values
        if any(not (0.0 <= x <= 1.0) for x in tv):
            errs.append(f"{where}: truth values must lie in [0, 1], got {tv}")
        if any(b <= a for a, b in zip(tv, tv[1:])):
            errs.append(f"{where}: truth values must be strictly increasing, got {tv}")
        if self.relevance_levels < 2:
            errs.append(f"{where}: needs at least 2 relevance levels, got {self.relevance_levels}")
        if self.frequency <= 0:
            errs.append(f"{where}: frequency must be positive, got {self.frequency}")
        return errs

    @property
    def oscillator_count(self) -> int:
        return len(self.attributes) * len(self.truth_values)

    @property
    def dim(self) -> int:
        """Feature subspace dimension, relevance ** (attributes * truth values)."""
        return self.relevance_levels ** self.oscillator_count


@dataclass(frozen=True)
class ObserverFeatureSpec:
    """One observer feature (Trust, Accept, ...) with one oscillator per level."""

    name: str
    levels: int
    relevance_levels: int
    frequency: float

    def validate(self) -> list[str]:
        errs = []
        where = f"observer feature {self.name!r}"
        if self.levels < 2:
            errs.append(f"{where}: needs at least 2 levels, got {self.levels}")
        if self.relevance_levels < 2:
            errs.append(f"{where}: needs at least 2 relevance levels, got {self.relevance_levels}")
        if self.frequency <= 0:
            errs.append(f"{where}: frequency must be positive, got {self.frequency}")
        return errs

    @property
    def oscillator_count(self) -> int:
        return self.levels

    @property
    def dim(self) -> int:
        return self.relevance_levels ** self.levels


def sensory_dim(features: Sequence[FeatureSpec]) -> int:
    """Total sensory dimension by pure integer arithmetic (no matrices)."""
    out = 1
    for f in features:
        out *= f.dim
    return out


def observer_dim(features: Sequence[ObserverFeatureSpec]) -> int:
    out = 1
    for f in features:
        out *= f.dim
    return out


# ---------------------------------------------------------------------------
# layouts


@dataclass(frozen=True)
class LayoutFactor:
    """One tensor factor: an oscillator (or a coarse feature block)."""

    owner: str
    feature: str
    part: tuple
    dim: int


@dataclass(frozen=True, eq=False)
class HilbertLayout:
    """Ordered tensor factors; leftmost factor is the most significant index."""

    factors: tuple[LayoutFactor, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("layout needs at least one factor")
        for f in self.factors:
            if f.dim < 2:
                raise ValueError(f"layout factor {f} has dim < 2")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def owner_indices(self, owner: str) -> list[int]:
        return [i for i, f in enumerate(self.factors) if f.owner == owner]

    def restrict(self, indices: Sequence[int]) -> "HilbertLayout":
        return HilbertLayout(tuple(self.factors[i] for i in indices))

    def concat(self, other: "HilbertLayout") -> "HilbertLayout":
        return HilbertLayout(self.factors + other.factors)

    def feature_blocks(self) -> list[tuple[str, list[int], int]]:
        """Contiguous runs of factors per feature as (feature, indices, dim)."""
        blocks: list[tuple[str, list[int], int]] = []
        seen: set[str] = set()
        for i, f in enumerate(self.factors):
            if blocks and blocks[-1][0] == f.feature:
                blocks[-1][1].append(i)
            else:
                if f.feature in seen:
                    raise ValueError(f"factors of feature {f.feature!r} are not contiguous")
                seen.add(f.feature)
                blocks.append((f.feature, [i], 1))
        return [
            (name, idx, int(np.prod([self.factors[i].dim for i in idx])))
            for name, idx, _ in blocks
        ]

    def feature_dims(self) -> dict[str, int]:
        return {name: dim for name, _, dim in self.feature_blocks()}

    def basis_index(self, levels: Sequence[int]) -> int:
        """Map per-factor excitation levels to the flat basis index."""
        if len(levels) != len(self.factors):
            raise ValueError("one level per factor required")
        idx = 0
        for lv, f in zip(levels, self.factors):
            if not (0 <= lv < f.dim):
                raise ValueError(f"level {lv} out of range for factor {f}")
            idx = idx * f.dim + lv
        return idx

    def basis_levels(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`basis_index`."""
        if not (0 <= index < self.total_dim):
            raise ValueError(f"basis index {index} out of range")
        levels = []
        for f in reversed(self.factors):
            levels.append(index % f.dim)
            index //= f.dim
        return tuple(reversed(levels))


def build_layout(
    sensory: Sequence[FeatureSpec], observer: Sequence[ObserverFeatureSpec]
) -> HilbertLayout:
    """Full composite layout: sensory oscillators first, then observer ones."""
    if not sensory or not observer:
        raise ValueError("build_layout needs non-empty sensory and observer feature lists")
    errs = [e for spec in list(sensory) + list(observer) for e in spec.validate()]
    if errs:
        raise ValueError("; ".join(errs))
    return sensory_layout(sensory).concat(observer_layout(observer))


def sensory_layout(features: Sequence[FeatureSpec]) -> HilbertLayout:
    factors = []
    for spec in features:
        errs = spec.validate()
        if errs:
            raise ValueError("; ".join(errs))
        for attr in spec.attributes:
            for tv in spec.truth_values:
                factors.append(LayoutFactor(SENSORY, spec.name, (attr, tv), spec.relevance_levels))
    return HilbertLayout(tuple(factors))


def observer_layout(features: Sequence[ObserverFeatureSpec]) -> HilbertLayout:
    factors = []
    for spec in features:
        errs = spec.validate()
        if errs:
            raise ValueError("; ".join(errs))
        for level in range(spec.levels):
            factors.append(LayoutFactor(OBSERVER, spec.name, (level,), spec.relevance_levels))
    return HilbertLayout(tuple(factors))


def feature_layout(
    feature_dims: Mapping[str, int], owner: str = SENSORY, sort: bool = True
) -> HilbertLayout:
    """Coarse layout with one factor per feature (canonical lexicographic order)."""
    names = sorted(feature_dims) if sort else list(feature_dims)
    return HilbertLayout(
        tuple(LayoutFactor(owner, name, (), int(feature_dims[name])) for name in names)
    )


# ---------------------------------------------------------------------------
# density matrices


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, PSD operator with an optional layout reference."""

    matrix: np.ndarray
    layout: HilbertLayout | None = None
    psd_tol: float = field(default=TOL_PSD, repr=False)

    def __post_init__(self):
        m = linalg.as_square(self.matrix, "density matrix")
        object.__setattr__(self, "matrix", m)
        dev = linalg.herm_deviation(m)
        if dev > TOL_HERM:
            raise ValueError(
                f"density matrix not Hermitian within {TOL_HERM:g} (deviation {dev:.3e})"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TOL_TRACE:
            raise ValueError(
                f"density matrix trace {tr:.12g} differs from 1 beyond {TOL_TRACE:g}"
            )
        wmin = float(np.linalg.eigvalsh(m)[0])
        if wmin < -self.psd_tol:
            raise ValueError(
                f"density matrix has eigenvalue {wmin:.3e} below -{self.psd_tol:g}"
            )
        if self.layout is not None and self.layout.total_dim != m.shape[0]:
            raise ValueError(
                f"layout dim {self.layout.total_dim} does not match matrix dim {m.shape[0]}"
            )
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def reduce(self, keep: Sequence[int], psd_tol: float | None = None) -> "DensityMatrix":
        """Partial trace onto the kept layout factors."""
        if self.layout is None:
            raise ValueError("reduce() needs a layout")
        out = linalg.partial_trace(self.matrix, self.layout.dims, keep)
        return DensityMatrix(
            out, self.layout.restrict(sorted(set(keep))),
            psd_tol=self.psd_tol if psd_tol is None else psd_tol,
        )


def pure_state(amplitudes: Sequence[complex], layout: HilbertLayout | None = None) -> DensityMatrix:
    """Projector onto the normalized amplitude vector."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if layout is not None and psi.size != layout.total_dim:
        raise ValueError(f"amplitude length {psi.size} does not match layout dim {layout.total_dim}")
    norm = np.linalg.norm(psi)
    if norm <= 0 or not np.isfinite(norm):
        raise ValueError("amplitude vector must have positive finite norm")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, np.conj(psi)), layout)


def oscillator_hamiltonian(
    frequencies: Sequence[float], levels_per_oscillator: Sequence[int]
) -> np.ndarray:
    """Kronecker sum of truncated number operators, omega * (n + 1/2) per mode."""
    if len(frequencies) != len(levels_per_oscillator):
        raise ValueError("frequencies and level counts must have the same length")
    if len(frequencies) == 0:
        raise ValueError("at least one oscillator required")
    terms = []
    for w, n in zip(frequencies, levels_per_oscillator):
        if w <= 0:
            raise ValueError(f"oscillator frequency must be positive, got {w}")
        if n < 2:
            raise ValueError(f"oscillator needs at least 2 levels, got {n}")
        terms.append(np.diag([w * (m + 0.5) for m in range(n)]).astype(complex))
    return linalg.kron_sum(terms)


def layout_hamiltonian(layout: HilbertLayout, frequencies: Mapping[str, float]) -> np.ndarray:
    """Free Hamiltonian for a layout, one frequency per feature."""
    freqs = [frequencies[f.feature] for f in layout.factors]
    levels = [f.dim for f in layout.factors]
    return oscillator_hamiltonian(freqs, levels)


def thermal_state(
    h: np.ndarray,
    temperature: float,
    layout: HilbertLayout | None = None,
    sign: str = "minus",
) -> DensityMatrix:
    """Gibbs state of ``h`` at the given temperature (Boltzmann constant 1).

    ``sign="minus"`` is the physical exp(-H/T) form where low temperature
    selects the ground state; ``sign="paper"`` flips the exponent for
    comparison with the literal inverted-population reading.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if sign not in ("minus", "paper"):
        raise ValueError(f"gibbs sign must be 'minus' or 'paper', got {sign!r}")
    w, v = linalg.herm_eig(h)
    exponent = -(w - w.min()) / temperature if sign == "minus" else (w - w.max()) / temperature
    weights = np.exp(exponent)
    weights /= weights.sum()
    rho = (v * weights) @ linalg.dagger(v)
    rho = 0.5 * (rho + linalg.dagger(rho))
    return DensityMatrix(rho, layout)


def compose_sensory(per_oscillator_states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Tensor product of oscillator states in layout order."""
    if not per_oscillator_states:
        raise ValueError("compose_sensory needs at least one factor state")
    layouts = [s.layout for s in per_oscillator_states]
    for s, lay in zip(per_oscillator_states, layouts):
        if lay is not None and lay.total_dim != s.dim:
            raise ValueError("factor state layout does not match its matrix dimension")
    matrix = linalg.kron_all([s.matrix for s in per_oscillator_states])
    layout = None
    if all(lay is not None for lay in layouts):
        combined = layouts[0]
        for lay in layouts[1:]:
            combined = combined.concat(lay)
        layout = combined
    return DensityMatrix(matrix, layout)


def ground_projector(dim: int) -> np.ndarray:
    """Projector onto the ground (all oscillators unexcited) basis state."""
    p = np.zeros((dim, dim), dtype=complex)
    p[0, 0] = 1.0
    return p
