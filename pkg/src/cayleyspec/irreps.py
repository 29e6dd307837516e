"""Unitary irreducible representations for the supported group kinds.

Built-in constructions cover cyclic groups, abelian products, dihedral
groups, and split extensions of a cyclic complement acting on a cyclic
normal part (which includes the metacyclic family).  Arbitrary groups are
served through user-supplied tables validated by ``validate_irrep_set``.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CapacityExceeded, IrrepValidationFailed, IrrepsUnavailable
from .groups import (
    DEFAULT_CAPACITY,
    AbelianProductGroup,
    CyclicGroup,
    DihedralGroup,
    FiniteGroup,
    MetacyclicGroup,
    SplitExtensionGroup,
)


_QUARTER_TURNS = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}


def unit_root(numerator: int, denominator: int) -> complex:
    """e^{2 pi i numerator/denominator} with the exponent reduced into [0, 1).

    Quarter turns come out exact so that real character tables stay real.
    """
    if denominator <= 0:
        raise ValueError(f"denominator must be positive, got {denominator}")
    t = numerator % denominator
    quadrupled, remainder = divmod(4 * t, denominator)
    if remainder == 0:
        return _QUARTER_TURNS[quadrupled]
    return cmath.exp(2j * cmath.pi * (t / denominator))


def _frozen(matrix: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(matrix, dtype=complex)
    out.flags.writeable = False
    return out


class UnitaryIrrep:
    """One unitary matrix representation, stored elementwise, with characters."""

    def __init__(self, label: str, matrices: dict):
        if not matrices:
            raise ValueError("irrep needs at least one matrix")
        self.label = label
        self.matrices = {g: _frozen(M) for g, M in matrices.items()}
        first = next(iter(self.matrices.values()))
        self.degree = int(first.shape[0])
        for g, M in self.matrices.items():
            if M.shape != (self.degree, self.degree):
                raise ValueError(
                    f"irrep {label!r}: matrix at {g!r} has shape {M.shape}, "
                    f"expected {(self.degree, self.degree)}"
                )
        self._characters = {g: complex(np.trace(M)) for g, M in self.matrices.items()}

    def matrix(self, g) -> np.ndarray:
        return self.matrices[g]

    def character(self, g) -> complex:
        return self._characters[g]

    def __repr__(self):
        return f"<UnitaryIrrep {self.label!r} degree={self.degree}>"


class IrrepSet:
    """A complete system of pairwise inequivalent unitary irreps of a group.

    ``trusted`` marks sets whose construction is proven (built-ins) or that
    already passed ``validate_irrep_set``; untrusted sets are re-validated
    before they feed spectrum or basis computations.
    """

    def __init__(self, group: FiniteGroup, irreps: Iterable[UnitaryIrrep],
                 trusted: bool = False):
        self.group = group
        self.irreps = list(irreps)
        self.trusted = trusted

    def __iter__(self):
        return iter(self.irreps)

    def __len__(self):
        return len(self.irreps)

    def __getitem__(self, i) -> UnitaryIrrep:
        return self.irreps[i]

    def labels(self) -> list:
        return [rho.label for rho in self.irreps]

    def degrees(self) -> list:
        return [rho.degree for rho in self.irreps]

    def __repr__(self):
        return f"<IrrepSet of {self.group!r}: degrees {self.degrees()}>"


def irreps_cyclic(n: int) -> IrrepSet:
    """Characters chi_v(k^s) = e^{2 pi i v s / n}, ordered by v."""
    group = CyclicGroup(n)
    irreps = []
    for v in range(n):
        mats = {s: np.array([[unit_root(v * s, n)]]) for s in range(n)}
        irreps.append(UnitaryIrrep(f"chi_{v}", mats))
    return IrrepSet(group, irreps, trusted=True)


def irreps_abelian(orders: Sequence[int], capacity: int = DEFAULT_CAPACITY) -> IrrepSet:
    """Product characters of a direct product of cyclic groups."""
    group = AbelianProductGroup(orders, capacity=capacity)
    irreps = []
    for exps in itertools.product(*(range(o) for o in group.orders)):
        mats = {}
        for g in group.elements():
            value = 1.0 + 0j
            for v, s, o in zip(exps, g, group.orders):
                value *= unit_root(v * s, o)
            mats[g] = np.array([[value]])
        label = "chi_" + "_".join(str(v) for v in exps)
        irreps.append(UnitaryIrrep(label, mats))
    return IrrepSet(group, irreps, trusted=True)


def irreps_dihedral(n: int) -> IrrepSet:
    """Irreps of D_n for n >= 3.

    Linear characters send the rotation and the reflection to signs; the
    two-dimensional irrep E_j sends the rotation to diag(w^j, w^-j) with
    w = e^{2 pi i / n} and the reflection to the coordinate swap.
    """
    if n < 3:
        raise ValueError(f"dihedral irreps need n >= 3, got {n}")
    group = DihedralGroup(n)
    irreps = []
    linear = [("A1", 1.0, 1.0), ("A2", -1.0, 1.0)]
    if n % 2 == 0:
        linear += [("B1", 1.0, -1.0), ("B2", -1.0, -1.0)]
    for label, s_val, rho_val in linear:
        mats = {
            (ref, rot): np.array([[(s_val ** ref) * (rho_val ** rot)]])
            for ref in range(2)
            for rot in range(n)
        }
        irreps.append(UnitaryIrrep(label, mats))
    swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    for j in range(1, (n + 1) // 2 if n % 2 else n // 2):
        mats = {}
        for rot in range(n):
            r_mat = np.diag([unit_root(j * rot, n), unit_root(-j * rot, n)])
            mats[(0, rot)] = r_mat
            mats[(1, rot)] = swap @ r_mat
        irreps.append(UnitaryIrrep(f"E{j}", mats))
    return IrrepSet(group, irreps, trusted=True)


def _cyclic_complement_irreps(group: SplitExtensionGroup) -> IrrepSet:
    """Irreps of C_m x| C_l built by inducing characters of the normal part.

    For each orbit of v -> v*r on Z_m (size t, t | l) and each w < l/t the
    irrep of degree t sends k to diag over the orbit's characters and h to
    the cyclic down-shift whose wrap-around entry carries e^{2 pi i w t / l}.
    """
    if not isinstance(group.h_group, CyclicGroup):
        raise IrrepsUnavailable(
            "induced construction needs a cyclic complement, got "
            f"{group.h_group.kind!r}"
        )
    m, l = group.m, group.l
    r = group.units[1] if l > 1 else 1 % m
    seen: set = set()
    orbits = []
    for v in range(m):
        if v in seen:
            continue
        orbit = [v]
        x = v * r % m
        while x != v:
            orbit.append(x)
            x = x * r % m
        seen.update(orbit)
        orbits.append(orbit)
    entries = []
    for orbit in orbits:
        t = len(orbit)
        if l % t != 0:
            raise IrrepsUnavailable(
                f"orbit size {t} does not divide complement order {l}"
            )
        d_mat = np.diag([unit_root(s, m) for s in orbit]).astype(complex)
        for w in range(l // t):
            a_mat = np.zeros((t, t), dtype=complex)
            a_mat[t - 1, 0] = unit_root(w * t, l)
            for j in range(1, t):
                a_mat[j - 1, j] = 1.0
            a_pows = [np.eye(t, dtype=complex)]
            for _ in range(l - 1):
                a_pows.append(a_pows[-1] @ a_mat)
            d_pows = [np.eye(t, dtype=complex)]
            for _ in range(m - 1):
                d_pows.append(d_pows[-1] @ d_mat)
            mats = {
                (a, b): a_pows[a] @ d_pows[b]
                for a in range(l)
                for b in range(m)
            }
            entries.append((t, orbit[0], w, UnitaryIrrep(f"X{orbit[0]}.{w}", mats)))
    entries.sort(key=lambda item: item[:3])
    return IrrepSet(group, [item[3] for item in entries], trusted=True)


def irreps_metacyclic(m: int, l: int, r: int) -> IrrepSet:
    """Irreps of the split metacyclic group C_m x| C_l with h k h^{-1} = k^r."""
    return _cyclic_complement_irreps(MetacyclicGroup(m, l, r))


def builtin_irreps(group: FiniteGroup) -> IrrepSet:
    """The built-in irrep system for this group kind, or IrrepsUnavailable."""
    if isinstance(group, CyclicGroup):
        return irreps_cyclic(group.m)
    if isinstance(group, AbelianProductGroup):
        return irreps_abelian(group.orders, capacity=group.order)
    if isinstance(group, DihedralGroup):
        if group.n >= 3:
            return irreps_dihedral(group.n)
        return _cyclic_complement_irreps(group)
    if isinstance(group, SplitExtensionGroup) and isinstance(group.h_group, CyclicGroup):
        return _cyclic_complement_irreps(group)
    raise IrrepsUnavailable(
        f"no built-in irreps for group kind {group.kind!r} "
        "(supply a validated table instead)"
    )


@dataclass(frozen=True)
class ValidationIssue:
    check: str
    labels: tuple
    witness: object
    deviation: float

    def __str__(self):
        who = ",".join(self.labels)
        return (f"{self.check}[{who}] witness={self.witness!r} "
                f"deviation={self.deviation:.3e}")


@dataclass
class IrrepValidationReport:
    issues: list

    @property
    def passed(self) -> bool:
        return not self.issues

    def raise_if_failed(self) -> None:
        if self.issues:
            raise IrrepValidationFailed(self)


def validate_irrep_set(group: FiniteGroup, irrep_set: IrrepSet,
                       hom_tol: float = 1e-10, unitary_tol: float = 1e-10,
                       irreducible_tol: float = 1e-9,
                       orthogonality_tol: float = 1e-9) -> IrrepValidationReport:
    """Exhaustively check an irrep table against the group.

    Checks coverage, the homomorphism property over all element pairs,
    unitarity, irreducibility and pairwise orthogonality of characters,
    and completeness (sum of squared degrees equals the group order).
    The homomorphism sweep is quadratic in the group order.
    """
    issues = []
    elems = group.elements()
    n = group.order
    for rho in irrep_set:
        missing = [g for g in elems if g not in rho.matrices]
        if missing:
            issues.append(ValidationIssue(
                "coverage", (rho.label,), missing[0], float(len(missing))))
            continue
        ident = rho.matrix(group.identity)
        dev = float(np.max(np.abs(ident - np.eye(rho.degree))))
        if dev > hom_tol:
            issues.append(ValidationIssue(
                "identity", (rho.label,), group.identity, dev))
        worst = 0.0
        worst_pair = None
        for x in elems:
            mx = rho.matrix(x)
            for y in elems:
                dev = float(np.max(np.abs(
                    rho.matrix(group.mul(x, y)) - mx @ rho.matrix(y))))
                if dev > worst:
                    worst, worst_pair = dev, (x, y)
        if worst > hom_tol:
            issues.append(ValidationIssue(
                "homomorphism", (rho.label,), worst_pair, worst))
        worst = 0.0
        worst_g = None
        eye = np.eye(rho.degree)
        for g in elems:
            mg = rho.matrix(g)
            dev = float(np.max(np.abs(mg.conj().T @ mg - eye)))
            if dev > worst:
                worst, worst_g = dev, g
        if worst > unitary_tol:
            issues.append(ValidationIssue("unitarity", (rho.label,), worst_g, worst))
        norm = sum(abs(rho.character(g)) ** 2 for g in elems) / n
        if abs(norm - 1.0) > irreducible_tol:
            issues.append(ValidationIssue(
                "irreducibility", (rho.label,), None, float(abs(norm - 1.0))))
    for i, rho in enumerate(irrep_set):
        for tau in irrep_set.irreps[i + 1:]:
            if any(g not in rho.matrices or g not in tau.matrices for g in elems):
                continue
            inner = sum(
                rho.character(g) * tau.character(g).conjugate() for g in elems
            ) / n
            if abs(inner) > orthogonality_tol:
                issues.append(ValidationIssue(
                    "orthogonality", (rho.label, tau.label), None, float(abs(inner))))
    total = sum(rho.degree ** 2 for rho in irrep_set)
    if total != n:
        issues.append(ValidationIssue(
            "completeness", tuple(irrep_set.labels()), None, float(abs(total - n))))
    report = IrrepValidationReport(issues)
    if report.passed:
        irrep_set.trusted = True
    return report


def ensure_trusted(group: FiniteGroup, irrep_set: IrrepSet) -> None:
    """Validate an untrusted irrep set, raising on failure."""
    if irrep_set.trusted:
        return
    validate_irrep_set(group, irrep_set).raise_if_failed()


@dataclass(frozen=True)
class FourierBlock:
    """One block sum_g f(g) rho(g) of the transform at a single irrep."""

    label: str
    matrix: np.ndarray

    @property
    def degree(self) -> int:
        return int(self.matrix.shape[0])


def fourier_transform(f, irrep: UnitaryIrrep) -> FourierBlock:
    """sum over the group of f(g) * rho(g); f is any callable on elements."""
    total = np.zeros((irrep.degree, irrep.degree), dtype=complex)
    for g, mat in irrep.matrices.items():
        value = complex(f(g))
        if value != 0:
            total += value * mat
    return FourierBlock(label=irrep.label, matrix=_frozen(total))


@dataclass(frozen=True)
class PMatrix:
    """Scaled matrix-coefficient basis, one column per coefficient.

    Column order: irreps in set order; within an irrep of degree d the
    column for coefficient (i, j) sits at offset j*d + i (column-major over
    the matrix entry), and each column holds sqrt(d/n) * rho(g)_{ij} over
    the element ordering.
    """

    matrix: np.ndarray
    ordering: tuple
    column_labels: tuple

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    def column_span(self, label: str) -> range:
        lo = None
        hi = None
        for idx, (lbl, _, _) in enumerate(self.column_labels):
            if lbl == label:
                if lo is None:
                    lo = idx
                hi = idx
        if lo is None:
            raise KeyError(f"no columns for irrep {label!r}")
        return range(lo, hi + 1)


def build_p_matrix(group: FiniteGroup, irrep_set: IrrepSet,
                   ordering: Optional[Sequence] = None) -> PMatrix:
    """Assemble the unitary change of basis from matrix coefficients."""
    ensure_trusted(group, irrep_set)
    elems = list(ordering) if ordering is not None else group.elements()
    n = group.order
    if len(elems) != n:
        raise ValueError(f"ordering has {len(elems)} entries for order {n}")
    total = sum(rho.degree ** 2 for rho in irrep_set)
    if total != n:
        raise IrrepValidationFailed(IrrepValidationReport([
            ValidationIssue("completeness", tuple(irrep_set.labels()), None,
                            float(abs(total - n)))
        ]))
    p_mat = np.zeros((n, n), dtype=complex)
    labels = []
    col = 0
    for rho in irrep_set:
        d = rho.degree
        scale = sqrt(d / n)
        stack = np.stack([rho.matrix(g) for g in elems])
        for j in range(d):
            for i in range(d):
                p_mat[:, col] = scale * stack[:, i, j]
                labels.append((rho.label, i, j))
                col += 1
    return PMatrix(matrix=_frozen(p_mat), ordering=tuple(elems),
                   column_labels=tuple(labels))
