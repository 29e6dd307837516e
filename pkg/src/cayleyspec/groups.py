"""Finite groups with canonical normal-form element encodings.

Supported kinds and their encodings:

* ``cyclic``: integers ``0..m-1`` under addition mod ``m``.
* ``abelian``: exponent tuples, one slot per factor.
* split extensions of a complement ``H`` acting on a normal cyclic part
  ``K = C_m`` (kinds ``dihedral``, ``metacyclic``, ``semidirect``): pairs
  ``(a, b)`` encoding ``h_a * k^b``, where ``h_a`` is the ``a``-th element
  of ``H`` in its canonical order and ``k`` generates ``K``.  The induced
  vertex order is ``a*m + b``.
* ``permutation``: image tuples on ``{0..degree-1}``; products compose
  right-to-left, ``(p*q)(x) = p(q(x))``.

All encodings are canonical: two equal group elements are equal Python
objects, so elements can key dictionaries directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import CapacityExceeded, ConfigError, InvalidAction

Element = Hashable

DEFAULT_CAPACITY = 10_000


@dataclass(frozen=True)
class ConjugacyClass:
    """One conjugacy class; members are sorted by canonical element index."""

    representative: Element
    members: tuple

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Transversal:
    """Coset representatives h_0 = e, h_1, ..., h_{l-1} and the vertex order.

    Vertex ``a*m + b`` is the element ``h_a * k^b``.
    """

    representatives: tuple
    m: int
    ordering: tuple

    @property
    def l(self) -> int:
        return len(self.representatives)

    def vertex_index(self, g) -> int:
        a, b = g
        return a * self.m + b

    def vertex_element(self, index: int):
        return self.ordering[index]


class FiniteGroup:
    """Immutable finite group over hashable normal-form encodings.

    Subclasses fix the element encoding and implement ``mul``/``inv``;
    enumeration, indexing and conjugacy machinery are shared.
    """

    kind = "abstract"

    def __init__(self, order: int):
        order = int(order)
        if order <= 0:
            raise ValueError(f"group order must be positive, got {order}")
        self.order = order
        self._elements: Optional[list] = None
        self._element_index: Optional[dict] = None
        self._classes: Optional[list] = None

    # -- operations every subclass provides --------------------------------

    @property
    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def _enumerate(self) -> list:
        raise NotImplementedError

    def coerce_element(self, raw):
        """Convert raw (JSON-ish) input into the canonical encoding."""
        raise NotImplementedError

    def signature(self) -> tuple:
        raise NotImplementedError

    # -- shared machinery ---------------------------------------------------

    def elements(self) -> list:
        if self._elements is None:
            self._elements = self._enumerate()
        return self._elements

    def index(self, g) -> int:
        if self._element_index is None:
            self._element_index = {g: i for i, g in enumerate(self.elements())}
        try:
            return self._element_index[g]
        except (KeyError, TypeError):
            raise KeyError(f"{g!r} is not an element of {self!r}") from None

    def contains(self, g) -> bool:
        try:
            self.index(g)
        except KeyError:
            return False
        return True

    def conjugate(self, g, by):
        """Return ``by * g * by^{-1}``."""
        return self.mul(self.mul(by, g), self.inv(by))

    def power(self, g, exponent: int):
        if exponent < 0:
            return self.power(self.inv(g), -exponent)
        result = self.identity
        base = g
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def conjugacy_classes(self) -> list:
        if self._classes is None:
            self._classes = _conjugation_orbits(self, self.elements(), self.elements())
        return self._classes

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"<{type(self).__name__} order={self.order}>"


def _conjugation_orbits(group, seeds, conjugators) -> list:
    """Orbits of ``seeds`` under conjugation by ``conjugators``."""
    seen = set()
    orbits = []
    for g in seeds:
        if g in seen:
            continue
        orbit = {group.conjugate(g, x) for x in conjugators}
        members = tuple(sorted(orbit, key=group.index))
        seen |= orbit
        orbits.append(ConjugacyClass(representative=members[0], members=members))
    return orbits


class CyclicGroup(FiniteGroup):
    """Cyclic group C_m; elements are exponents under addition mod m."""

    kind = "cyclic"

    def __init__(self, m: int):
        super().__init__(m)
        self.m = self.order

    @property
    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.m

    def inv(self, a):
        return -a % self.m

    def _enumerate(self):
        return list(range(self.m))

    def coerce_element(self, raw):
        if isinstance(raw, (list, tuple)):
            if len(raw) != 1:
                raise ConfigError(f"cyclic element takes one exponent, got {raw!r}")
            raw = raw[0]
        if not isinstance(raw, int) or isinstance(raw, bool):
            raise ConfigError(f"cyclic element must be an integer, got {raw!r}")
        return raw % self.m

    def signature(self):
        return ("cyclic", self.m)

    # generator data, used when this group acts as a complement
    @property
    def generator_orders(self):
        return (self.m,)

    def generator_exponents(self, g):
        return (g,)


class AbelianProductGroup(FiniteGroup):
    """Direct product of cyclic groups; elements are exponent tuples."""

    kind = "abelian"

    def __init__(self, orders: Sequence[int], capacity: int = DEFAULT_CAPACITY):
        orders = tuple(int(o) for o in orders)
        if not orders or any(o <= 0 for o in orders):
            raise ValueError(f"factor orders must be positive, got {orders}")
        total = 1
        for o in orders:
            total *= o
            if total > capacity:
                raise CapacityExceeded(
                    f"abelian product of orders {orders} exceeds capacity {capacity}"
                )
        super().__init__(total)
        self.orders = orders

    @property
    def identity(self):
        return (0,) * len(self.orders)

    def mul(self, a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, self.orders))

    def inv(self, a):
        return tuple(-x % o for x, o in zip(a, self.orders))

    def _enumerate(self):
        return list(itertools.product(*(range(o) for o in self.orders)))

    def coerce_element(self, raw):
        if not isinstance(raw, (list, tuple)) or len(raw) != len(self.orders):
            raise ConfigError(
                f"abelian element needs {len(self.orders)} exponents, got {raw!r}"
            )
        if any(not isinstance(x, int) or isinstance(x, bool) for x in raw):
            raise ConfigError(f"abelian exponents must be integers, got {raw!r}")
        return tuple(x % o for x, o in zip(raw, self.orders))

    def signature(self):
        return ("abelian", self.orders)

    @property
    def generator_orders(self):
        return self.orders

    def generator_exponents(self, g):
        return g


class SplitExtensionGroup(FiniteGroup):
    """Split extension of a complement H by a normal cyclic K = C_m.

    Elements are pairs ``(a, b)`` for ``h_a * k^b``.  The complement acts on
    K through units mod m: ``h_a k h_a^{-1} = k^{units[a]}``.  Constructors
    are responsible for supplying a unit list that is multiplicative over H.
    """

    kind = "semidirect"

    def __init__(self, m: int, h_group: FiniteGroup, units: Sequence[int]):
        m = int(m)
        if m <= 0:
            raise ValueError(f"normal part order must be positive, got {m}")
        super().__init__(m * h_group.order)
        self.m = m
        self.h_group = h_group
        self.l = h_group.order
        self.units = tuple(int(u) % m for u in units)
        if len(self.units) != self.l:
            raise InvalidAction(
                f"need one conjugation unit per complement element "
                f"({self.l}), got {len(self.units)}"
            )
        for u in self.units:
            if gcd(u, m) != 1:
                raise InvalidAction(f"conjugation exponent {u} is not a unit mod {m}")
        if h_group.index(h_group.identity) != 0:
            raise InvalidAction("complement enumeration must start at the identity")
        self._h_elts = h_group.elements()
        self._inv_units = tuple(pow(u, -1, m) for u in self.units)
        self._h_inv_index = tuple(
            h_group.index(h_group.inv(h)) for h in self._h_elts
        )

    @property
    def identity(self):
        return (0, 0)

    def mul(self, x, y):
        a1, b1 = x
        a2, b2 = y
        a3 = self.h_group.index(
            self.h_group.mul(self._h_elts[a1], self._h_elts[a2])
        )
        return (a3, (b1 * self._inv_units[a2] + b2) % self.m)

    def inv(self, x):
        a, b = x
        return (self._h_inv_index[a], (-b * self.units[a]) % self.m)

    def _enumerate(self):
        return [(a, b) for a in range(self.l) for b in range(self.m)]

    def index(self, g) -> int:
        try:
            a, b = g
        except (TypeError, ValueError):
            raise KeyError(f"{g!r} is not an element of {self!r}") from None
        if not (isinstance(a, int) and isinstance(b, int)
                and 0 <= a < self.l and 0 <= b < self.m):
            raise KeyError(f"{g!r} is not an element of {self!r}")
        return a * self.m + b

    def coerce_element(self, raw):
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise ConfigError(f"split-extension element must be a pair, got {raw!r}")
        a, b = raw
        if any(not isinstance(x, int) or isinstance(x, bool) for x in (a, b)):
            raise ConfigError(f"element exponents must be integers, got {raw!r}")
        return (a % self.l, b % self.m)

    def k_elements(self) -> list:
        return [(0, b) for b in range(self.m)]

    def h_elements(self) -> list:
        return [(a, 0) for a in range(self.l)]

    def embed_h(self, h):
        """Lift an element of the complement group into G."""
        return (self.h_group.index(h), 0)

    def embed_k(self, exponent: int):
        return (0, exponent % self.m)

    def split_parts(self):
        return self.k_elements(), self.h_elements()

    def signature(self):
        return ("split", self.m, self.h_group.signature(), self.units)


class MetacyclicGroup(SplitExtensionGroup):
    """Split metacyclic group C_m x| C_l with h k h^{-1} = k^r."""

    kind = "metacyclic"

    def __init__(self, m: int, l: int, r: int):
        m, l = int(m), int(l)
        if m <= 0 or l <= 0:
            raise ValueError(f"need positive m and l, got m={m}, l={l}")
        r = int(r) % m
        if gcd(r, m) != 1:
            raise InvalidAction(f"r={r} is not a unit mod m={m}")
        if pow(r, l, m) != 1 % m:
            raise InvalidAction(
                f"r^l must be 1 mod m: r={r}, l={l}, m={m} gives {pow(r, l, m)}"
            )
        super().__init__(m, CyclicGroup(l), [pow(r, a, m) for a in range(l)])
        self.r = r

    def signature(self):
        return ("metacyclic", self.m, self.l, self.r)


class DihedralGroup(SplitExtensionGroup):
    """Dihedral group D_n of order 2n; ``(ref, rot)`` encodes s^ref * rho^rot."""

    kind = "dihedral"

    def __init__(self, n: int):
        n = int(n)
        if n <= 0:
            raise ValueError(f"need positive n, got {n}")
        super().__init__(n, CyclicGroup(2), [1, (n - 1) % n])
        self.n = n

    def signature(self):
        return ("dihedral", self.n)

    # generator data for (s, rho), used when this group acts as a complement
    @property
    def generator_orders(self):
        return (2, self.n)

    def generator_exponents(self, g):
        return g


def _validate_action_images(h_group, images, m: int) -> None:
    """Check generator images against H's defining relations mod m."""
    if not hasattr(h_group, "generator_orders"):
        raise InvalidAction(
            f"complement kind {h_group.kind!r} is not supported for actions"
        )
    orders = h_group.generator_orders
    if len(images) != len(orders):
        raise InvalidAction(
            f"need {len(orders)} generator images for {h_group.kind} complement, "
            f"got {len(images)}"
        )
    for img, o in zip(images, orders):
        if gcd(img % m, m) != 1:
            raise InvalidAction(f"generator image {img} is not a unit mod {m}")
        if pow(img, o, m) != 1 % m:
            raise InvalidAction(
                f"generator image {img} of order-{o} generator breaks its "
                f"relation mod {m}"
            )
    if isinstance(h_group, DihedralGroup):
        # s rho s^{-1} = rho^{-1} forces the rotation image to square to 1
        e_rho = images[1] % m
        if e_rho * e_rho % m != 1 % m:
            raise InvalidAction(
                f"rotation image {e_rho} breaks the reflection relation mod {m}"
            )


class SemidirectProductGroup(SplitExtensionGroup):
    """C_m x| H with the action given by unit images of H's generators."""

    kind = "semidirect"

    def __init__(self, m: int, h_group: FiniteGroup, generator_images: Sequence[int]):
        m = int(m)
        if m <= 0:
            raise ValueError(f"normal part order must be positive, got {m}")
        images = [int(e) for e in generator_images]
        _validate_action_images(h_group, images, m)
        units = []
        for h in h_group.elements():
            u = 1
            for img, e in zip(images, h_group.generator_exponents(h)):
                u = u * pow(img, e, m) % m
            units.append(u)
        super().__init__(m, h_group, units)
        self.generator_images = tuple(img % m for img in images)

    def signature(self):
        return ("semidirect", self.m, self.h_group.signature(), self.generator_images)


def _compose(p, q):
    """Right-to-left composition of image tuples: (p*q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def _perm_closure(generators, degree: int, capacity: int) -> set:
    identity = tuple(range(degree))
    closed = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for p in frontier:
            for g in generators:
                q = _compose(p, g)
                if q not in closed:
                    closed.add(q)
                    fresh.append(q)
                    if len(closed) > capacity:
                        raise CapacityExceeded(
                            f"permutation closure exceeds capacity {capacity}"
                        )
        frontier = fresh
    return closed


class PermutationGroup(FiniteGroup):
    """Permutation group generated by image tuples, enumerated sorted.

    An optional split structure (generators of a normal subgroup K plus a
    complement H) marks the group for invariance checking; it is validated
    at construction.
    """

    kind = "permutation"

    def __init__(self, generators: Iterable[Sequence[int]],
                 normal_generators: Optional[Iterable[Sequence[int]]] = None,
                 complement_generators: Optional[Iterable[Sequence[int]]] = None,
                 capacity: int = DEFAULT_CAPACITY):
        gens = [tuple(g) for g in generators]
        if not gens:
            raise ValueError("need at least one generator")
        degree = len(gens[0])
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"{g!r} is not a permutation of 0..{degree - 1}")
        members = _perm_closure(gens, degree, capacity)
        super().__init__(len(members))
        self.degree = degree
        self.generators = tuple(gens)
        self._elements = sorted(members)
        self.normal_members: Optional[tuple] = None
        self.complement_members: Optional[tuple] = None
        if (normal_generators is None) != (complement_generators is None):
            raise ValueError("normal and complement generators come together")
        if normal_generators is not None:
            self._install_split(normal_generators, complement_generators, capacity)

    def _install_split(self, normal_generators, complement_generators, capacity):
        n_gens = [self.coerce_element(g) for g in normal_generators]
        c_gens = [self.coerce_element(g) for g in complement_generators]
        k_part = _perm_closure(n_gens, self.degree, capacity)
        h_part = _perm_closure(c_gens, self.degree, capacity)
        for g in self.generators:
            g_inv = self.inv(g)
            for k in k_part:
                if _compose(_compose(g, k), g_inv) not in k_part:
                    raise InvalidAction(
                        f"designated normal part is not normal: conjugating "
                        f"{k} by generator {g} escapes it"
                    )
        if len(k_part) * len(h_part) != self.order:
            raise InvalidAction(
                f"|K|*|H| = {len(k_part)}*{len(h_part)} != group order {self.order}"
            )
        if k_part & h_part != {self.identity}:
            raise InvalidAction("normal part and complement overlap beyond identity")
        self.normal_members = tuple(sorted(k_part))
        self.complement_members = tuple(sorted(h_part))

    @property
    def identity(self):
        return tuple(range(self.degree))

    def mul(self, a, b):
        return _compose(a, b)

    def inv(self, a):
        out = [0] * self.degree
        for i, image in enumerate(a):
            out[image] = i
        return tuple(out)

    def _enumerate(self):
        return self._elements

    def coerce_element(self, raw):
        if not isinstance(raw, (list, tuple)) or len(raw) != self.degree:
            raise ConfigError(
                f"permutation element needs {self.degree} images, got {raw!r}"
            )
        g = tuple(raw)
        if sorted(g) != list(range(self.degree)):
            raise ConfigError(f"{raw!r} is not a permutation of 0..{self.degree - 1}")
        if not self.contains(g):
            raise ConfigError(f"{raw!r} is not in the generated group")
        return g

    def split_parts(self):
        if self.normal_members is None:
            return None
        return list(self.normal_members), list(self.complement_members)

    def signature(self):
        return ("permutation", self.degree, tuple(self.elements()))


# -- module-level operations -------------------------------------------------


def construct_group(config: Mapping, capacity: int = DEFAULT_CAPACITY) -> FiniteGroup:
    """Build a group from a structured description (the CLI config schema)."""
    if not isinstance(config, Mapping):
        raise ConfigError(f"group description must be a mapping, got {config!r}")
    kind = config.get("type")
    fields = {
        "cyclic": {"n"},
        "abelian": {"orders"},
        "dihedral": {"n"},
        "metacyclic": {"m", "l", "r"},
        "semidirect": {"m", "h", "action"},
        "permutation": {"generators", "normal_generators", "complement_generators"},
    }
    if kind not in fields:
        raise ConfigError(
            f"unknown group type {kind!r}; expected one of {sorted(fields)}"
        )
    stray = set(config) - fields[kind] - {"type"}
    if stray:
        raise ConfigError(f"group type {kind!r} has stray fields {sorted(stray)}")

    def need(key, types=int):
        if key not in config:
            raise ConfigError(f"group type {kind!r} needs field {key!r}")
        value = config[key]
        if types is int and (not isinstance(value, int) or isinstance(value, bool)):
            raise ConfigError(f"group field {key!r} must be an integer, got {value!r}")
        return value

    if kind == "cyclic":
        n = need("n")
        _check_capacity(n, capacity)
        return CyclicGroup(n)
    if kind == "abelian":
        orders = need("orders", types=None)
        if not isinstance(orders, (list, tuple)):
            raise ConfigError(f"group field 'orders' must be a list, got {orders!r}")
        return AbelianProductGroup(orders, capacity=capacity)
    if kind == "dihedral":
        n = need("n")
        _check_capacity(2 * n, capacity)
        return DihedralGroup(n)
    if kind == "metacyclic":
        m, l, r = need("m"), need("l"), need("r")
        _check_capacity(m * l, capacity)
        return MetacyclicGroup(m, l, r)
    if kind == "semidirect":
        m = need("m")
        h_config = need("h", types=None)
        action = need("action", types=None)
        if not isinstance(action, (list, tuple)):
            raise ConfigError(f"group field 'action' must be a list, got {action!r}")
        h_group = construct_group(h_config, capacity=capacity)
        if not hasattr(h_group, "generator_orders"):
            raise ConfigError(
                f"complement type {h_group.kind!r} is not supported in semidirect "
                "products (use cyclic, abelian, or dihedral)"
            )
        _check_capacity(m * h_group.order, capacity)
        return SemidirectProductGroup(m, h_group, action)
    # permutation
    gens = need("generators", types=None)
    if not isinstance(gens, (list, tuple)) or not gens:
        raise ConfigError("group field 'generators' must be a non-empty list")
    try:
        return PermutationGroup(
            gens,
            normal_generators=config.get("normal_generators"),
            complement_generators=config.get("complement_generators"),
            capacity=capacity,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _check_capacity(order: int, capacity: int) -> None:
    if order > capacity:
        raise CapacityExceeded(f"group order {order} exceeds capacity {capacity}")


def conjugacy_classes(group: FiniteGroup) -> list:
    """Conjugacy classes in canonical order (sorted by representative index)."""
    return group.conjugacy_classes()


def conjugation_orbits_on_k(group: FiniteGroup) -> list:
    """Orbits of the whole group's conjugation action on the normal part K."""
    if isinstance(group, SplitExtensionGroup):
        unit_set = sorted(set(group.units))
        seen: set = set()
        orbits = []
        for b in range(group.m):
            if b in seen:
                continue
            exponents = sorted({b * u % group.m for u in unit_set})
            seen.update(exponents)
            orbits.append([(0, s) for s in exponents])
        return orbits
    parts = group.split_parts() if hasattr(group, "split_parts") else None
    if parts is None:
        raise ValueError("group has no distinguished normal part")
    k_members, _ = parts
    return [
        list(cls.members)
        for cls in _conjugation_orbits(group, k_members, group.elements())
    ]


def left_transversal_ordering(group: FiniteGroup) -> Transversal:
    """The coset representatives and vertex order of a split group.

    Groups without a distinguished split are viewed as the whole normal
    part (l = 1): the single representative is the identity and the vertex
    order is the canonical enumeration.
    """
    if not isinstance(group, SplitExtensionGroup):
        return Transversal(
            representatives=(group.identity,),
            m=group.order,
            ordering=tuple(group.elements()),
        )
    return Transversal(
        representatives=tuple(group.h_elements()),
        m=group.m,
        ordering=tuple(group.elements()),
    )


def is_generating_set(group: FiniteGroup, subset: Iterable) -> tuple:
    """Whether the multiplicative closure of ``subset`` is the whole group.

    Returns ``(generates, closure_size)``.
    """
    closed = set(subset)
    for g in closed:
        group.index(g)
    frontier = list(closed)
    while frontier:
        fresh = set()
        snapshot = list(closed)
        for x in frontier:
            for y in snapshot:
                for p in (group.mul(x, y), group.mul(y, x)):
                    if p not in closed and p not in fresh:
                        fresh.add(p)
        closed |= fresh
        frontier = list(fresh)
    return len(closed) == group.order, len(closed)
