"""Independent certification of claimed spectra.

Nothing here re-derives a spectrum: the adjacency matrix is rebuilt
directly from the group operation and the color function, and every
claimed eigenpair is checked by residual, the claimed basis by its Gram
matrix, and the eigenvalue multiset by trace identities.  No general
eigensolver is involved, so a certified result never relies on the code
paths that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cayley import AdjacencyMatrix, ColorFunction
from .errors import CapacityExceeded, DimensionMismatch
from .groups import FiniteGroup
from .irreps import IrrepSet, build_p_matrix, fourier_transform
from .spectra import Spectrum, chain_groups

RECONSTRUCTION_CAPACITY = 500


@dataclass
class VerificationReport:
    """Deviations of one certification run; ``passed`` applies tolerances.

    Component tolerances: residuals against ``tolerance * max(1, |A|_inf)``,
    Gram deviation against ``tolerance``, trace identities against
    ``tolerance * n``.  Components left as None (not requested) are skipped.
    """

    n: int
    tolerance: float
    scale: float
    max_residual: Optional[float] = None
    per_line_residuals: Optional[tuple] = None
    gram_deviation: Optional[float] = None
    vector_count: Optional[int] = None
    complete: Optional[bool] = None
    trace_deviation: Optional[float] = None
    trace_sq_deviation: Optional[float] = None

    @property
    def passed(self) -> bool:
        if self.max_residual is not None:
            if self.max_residual > self.tolerance * self.scale:
                return False
        if self.gram_deviation is not None:
            if self.gram_deviation > self.tolerance:
                return False
        if self.complete is not None and not self.complete:
            return False
        for dev in (self.trace_deviation, self.trace_sq_deviation):
            if dev is not None and dev > self.tolerance * self.n:
                return False
        return True


def _as_matrix(adjacency) -> np.ndarray:
    if isinstance(adjacency, AdjacencyMatrix):
        return adjacency.matrix
    return np.asarray(adjacency, dtype=complex)


def verify_eigenpairs(adjacency, spectrum: Spectrum,
                      tol: float = 1e-9) -> VerificationReport:
    """Residual-check every claimed eigenpair against the adjacency."""
    matrix = _as_matrix(adjacency)
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise DimensionMismatch(f"adjacency must be square, got {matrix.shape}")
    if spectrum.n != n:
        raise DimensionMismatch(
            f"spectrum claims n={spectrum.n}, adjacency has n={n}"
        )
    scale = max(1.0, float(np.max(np.sum(np.abs(matrix), axis=1), initial=0.0)))
    residuals = []
    for line in spectrum.lines:
        if line.eigenvectors is None:
            raise ValueError(
                f"line ({line.u}, {line.v}) carries no eigenvectors to certify"
            )
        vectors = line.eigenvectors
        if vectors.shape[1] != n:
            raise DimensionMismatch(
                f"line ({line.u}, {line.v}) vectors have length "
                f"{vectors.shape[1]}, expected {n}"
            )
        residual_block = matrix @ vectors.T - line.eigenvalue * vectors.T
        residuals.append(float(np.max(np.abs(residual_block), initial=0.0)))
    max_residual = max(residuals, default=0.0)
    return VerificationReport(
        n=n,
        tolerance=tol,
        scale=scale,
        max_residual=max_residual,
        per_line_residuals=tuple(residuals),
    )


def verify_basis(spectrum: Spectrum, tol: float = 1e-9) -> tuple:
    """Gram deviation of the stacked eigenvectors and the completeness flag.

    Returns ``(gram_deviation, complete)`` where completeness means the
    claimed multiplicities sum to n and one vector backs each of them.
    """
    stacked = spectrum.eigenvector_matrix()
    count = stacked.shape[1]
    gram = stacked.conj().T @ stacked - np.eye(count)
    gram_deviation = float(np.max(np.abs(gram), initial=0.0))
    complete = (
        count == spectrum.n and spectrum.total_multiplicity == spectrum.n
    )
    return gram_deviation, complete


def trace_identities(adjacency, color: ColorFunction) -> tuple:
    """Deviations |tr A - n alpha(e)| and |tr A^2 - n sum_g alpha(g) alpha(g^{-1})|."""
    matrix = _as_matrix(adjacency)
    n = matrix.shape[0]
    group = color.group
    if group.order != n:
        raise DimensionMismatch(
            f"color lives on a group of order {group.order}, adjacency has n={n}"
        )
    expected_trace = n * color(group.identity)
    trace_dev = abs(complex(np.trace(matrix)) - expected_trace)
    pair_sum = sum(
        value * color(group.inv(g)) for g, value in color.items()
    )
    trace_sq = complex(np.sum(matrix * matrix.T))
    trace_sq_dev = abs(trace_sq - n * pair_sum)
    return float(trace_dev), float(trace_sq_dev)


def certify(adjacency, spectrum: Spectrum, color: ColorFunction,
            tol: float = 1e-9) -> VerificationReport:
    """Full certification: residuals, basis, completeness, trace identities."""
    report = verify_eigenpairs(adjacency, spectrum, tol=tol)
    gram_deviation, complete = verify_basis(spectrum, tol=tol)
    trace_dev, trace_sq_dev = trace_identities(adjacency, color)
    report.gram_deviation = gram_deviation
    report.vector_count = spectrum.eigenvector_matrix().shape[1]
    report.complete = complete
    report.trace_deviation = trace_dev
    report.trace_sq_deviation = trace_sq_dev
    return report


def compare_spectra(first: Spectrum, second: Spectrum,
                    tol: float = 1e-9) -> tuple:
    """Compare eigenvalue multisets; returns (equal, witness_pair_or_None).

    Values are grouped by chaining pairs closer than ``tol``, then each
    group must contribute equally often to both sides.  Pairing sorted
    positions instead would misalign values that differ only by rounding
    noise in one coordinate, e.g. a conjugate pair with dusty real parts.
    """
    left = list(first.eigenvalues_expanded())
    right = list(second.eigenvalues_expanded())
    if len(left) != len(right):
        raise DimensionMismatch(
            f"multisets have sizes {len(left)} and {len(right)}"
        )
    values = [complex(v) for v in left + right]
    surplus, deficit = [], []
    for indices in chain_groups(values, tol):
        balance = sum(1 if idx < len(left) else -1 for idx in indices)
        if balance > 0:
            surplus.append(values[indices[0]])
        elif balance < 0:
            deficit.append(values[indices[0]])
    if not surplus:
        return True, None
    order = lambda z: (z.real, z.imag)
    return False, (min(surplus, key=order), min(deficit, key=order))


def regular_rep_matrix(group: FiniteGroup, g,
                       ordering: Optional[Sequence] = None) -> np.ndarray:
    """Permutation matrix of left translation by g: M[a, b] = [g g_b = g_a]."""
    elems = list(ordering) if ordering is not None else group.elements()
    n = len(elems)
    position = {elem: idx for idx, elem in enumerate(elems)}
    out = np.zeros((n, n), dtype=complex)
    for b, gb in enumerate(elems):
        out[position[group.mul(g, gb)], b] = 1.0
    out.flags.writeable = False
    return out


def verify_block_reconstruction(group: FiniteGroup, color: ColorFunction,
                                irrep_set: IrrepSet,
                                capacity: int = RECONSTRUCTION_CAPACITY) -> float:
    """Max deviation between the regular-representation adjacency and its
    coefficient-basis reconstruction.

    The left side is the transpose of sum_g alpha(g) * M(g) over left
    translation matrices; the right side conjugates the per-irrep blocks
    diag(I_{d_k} (x) block_k^T) back through the coefficient basis.
    """
    n = group.order
    if n > capacity:
        raise CapacityExceeded(
            f"reconstruction check is quadratic in n; {n} exceeds {capacity}"
        )
    elems = group.elements()
    transform = np.zeros((n, n), dtype=complex)
    for g, value in color.items():
        for b, gb in enumerate(elems):
            transform[group.index(group.mul(g, gb)), b] += value
    adjacency = transform.T
    p_matrix = build_p_matrix(group, irrep_set)
    diag = np.zeros((n, n), dtype=complex)
    offset = 0
    for rho in irrep_set:
        block = fourier_transform(color, rho)
        d = block.degree
        diag[offset:offset + d * d, offset:offset + d * d] = np.kron(
            np.eye(d), block.matrix.T
        )
        offset += d * d
    recon = p_matrix.matrix @ diag @ p_matrix.matrix.conj().T
    return float(np.max(np.abs(adjacency - recon)))
