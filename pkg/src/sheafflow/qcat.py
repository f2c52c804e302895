"""Categories enriched in a commutative quantale.

A category here is a set of objects with a hom(x, y) valued in the quantale,
satisfying hom(x, x) >= unit and hom(x, y) * hom(y, z) <= hom(x, z).
Finite categories carry an explicit hom matrix; analytic ones (the quantale
itself as a category, powers of it, opposites, products) compute homs by
formula and may have non-enumerable object sets.
"""
from __future__ import annotations

import math
from itertools import product as iproduct
from typing import Any, Callable, Iterable, Mapping

from .quantale import Quantale
from .report import LawReport


class QCategoryError(ValueError):
    pass


class NotEnumerableError(QCategoryError):
    """Raised when an exhaustive operation meets a formula-only category."""


def object_sort_key(x: Any) -> str:
    """Stable textual key used for deterministic tie-breaks."""
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(object_sort_key(e) for e in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(object_sort_key(e) for e in x) + ")"
    if isinstance(x, float):
        return f"f{x:.12g}"
    return f"{type(x).__name__[0]}{x}"


class QCategory:
    quantale: Quantale

    def hom(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    @property
    def is_enumerable(self) -> bool:
        return False

    def objects(self) -> list[Any]:
        raise NotEnumerableError(
            f"{type(self).__name__} has no enumerable object set; "
            "exhaustive operations need a finite category"
        )

    def has_object(self, x: Any) -> bool:
        raise NotImplementedError

    def require_object(self, *xs: Any) -> None:
        for x in xs:
            if not self.has_object(x):
                raise QCategoryError(f"{x!r} is not an object of {self!r}")

    # level-q order and equivalence on objects
    def hom_leq(self, x: Any, y: Any, q: Any) -> bool:
        return self.quantale.leq(q, self.hom(x, y))

    def approx(self, x: Any, y: Any, q: Any) -> bool:
        return self.hom_leq(x, y, q) and self.hom_leq(y, x, q)

    def iso(self, x: Any, y: Any) -> bool:
        return self.approx(x, y, self.quantale.unit)


class FiniteQCategory(QCategory):
    """Explicit objects plus a hom matrix."""

    def __init__(self, quantale: Quantale, objects: Iterable[Any], hom: Mapping | list):
        self.quantale = quantale
        self._objects = list(objects)
        if len(set(map(object_sort_key, self._objects))) != len(self._objects):
            raise QCategoryError("object identifiers must be distinct")
        self._index = {x: i for i, x in enumerate(self._objects)}
        n = len(self._objects)
        if isinstance(hom, Mapping):
            matrix = [[None] * n for _ in range(n)]
            for (x, y), v in hom.items():
                matrix[self._index[x]][self._index[y]] = v
            missing = [(i, j) for i in range(n) for j in range(n) if matrix[i][j] is None]
            if missing:
                raise QCategoryError(f"hom table is missing {len(missing)} entries, e.g. {missing[0]}")
            self._hom = matrix
        else:
            hom = [list(row) for row in hom]
            if len(hom) != n or any(len(row) != n for row in hom):
                raise QCategoryError("hom matrix must be square over the object list")
            self._hom = hom
        for row in self._hom:
            for v in row:
                quantale.require(v)

    @property
    def is_enumerable(self):
        return True

    def objects(self):
        return list(self._objects)

    def has_object(self, x):
        return x in self._index

    def hom(self, x, y):
        return self._hom[self._index[x]][self._index[y]]

    def to_payload(self) -> dict:
        return {"objects": list(self._objects), "hom": [list(r) for r in self._hom]}

    @classmethod
    def from_payload(cls, quantale: Quantale, payload: dict) -> "FiniteQCategory":
        for field in ("objects", "hom"):
            if field not in payload:
                raise QCategoryError(f"category payload requires field {field!r}")
        return cls(quantale, payload["objects"], payload["hom"])

    def __repr__(self):
        return f"FiniteQCategory({len(self._objects)} objects, {self.quantale.kind})"


class UnderlineQ(QCategory):
    """The quantale as a category over itself: hom(p, q) = [p, q]."""

    def __init__(self, quantale: Quantale):
        self.quantale = quantale

    @property
    def is_enumerable(self):
        return self.quantale.is_enumerable

    def objects(self):
        if not self.quantale.is_enumerable:
            raise NotEnumerableError(f"{self.quantale.kind} carrier is not enumerable")
        return self.quantale.elements()

    def has_object(self, x):
        return self.quantale.contains(x)

    def hom(self, x, y):
        return self.quantale.hom(x, y)

    def __repr__(self):
        return f"UnderlineQ({self.quantale.kind})"


class OppositeCategory(QCategory):
    """Transpose of a base category.  Opposite of an opposite unwraps."""

    def __init__(self, base: QCategory):
        self.base = base
        self.quantale = base.quantale

    @property
    def is_enumerable(self):
        return self.base.is_enumerable

    def objects(self):
        return self.base.objects()

    def has_object(self, x):
        return self.base.has_object(x)

    def hom(self, x, y):
        return self.base.hom(y, x)

    def __repr__(self):
        return f"OppositeCategory({self.base!r})"


class ProductCategory(QCategory):
    """Objects are tuples; hom is the meet of coordinate homs."""

    def __init__(self, factors: Iterable[QCategory]):
        self.factors = list(factors)
        if not self.factors:
            raise QCategoryError("product needs at least one factor")
        qs = {f.quantale for f in self.factors}
        if len(qs) != 1:
            raise QCategoryError("product factors must share one quantale instance kind")
        self.quantale = self.factors[0].quantale

    @property
    def is_enumerable(self):
        return all(f.is_enumerable for f in self.factors)

    def objects(self):
        return [tuple(t) for t in iproduct(*(f.objects() for f in self.factors))]

    def has_object(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(f.has_object(c) for f, c in zip(self.factors, x))
        )

    def hom(self, x, y):
        return self.quantale.meet(f.hom(a, b) for f, a, b in zip(self.factors, x, y))

    def __repr__(self):
        return f"ProductCategory({len(self.factors)} factors, {self.quantale.kind})"


class PresheafPower(QCategory):
    """Length-m tuples of quantale elements, hom computed coordinatewise.

    With op=False, hom(x, y) = meet_i [x_i, y_i]; with op=True the arguments
    swap, which for extended-real costs gives hom(x, y) = max_i (x_i - y_i)_+.
    """

    def __init__(self, quantale: Quantale, m: int, op: bool = False):
        if not isinstance(m, int) or m < 1:
            raise QCategoryError("power size must be a positive integer")
        self.quantale = quantale
        self.m = m
        self.op = op

    @property
    def is_enumerable(self):
        return self.quantale.is_enumerable

    def objects(self):
        if not self.quantale.is_enumerable:
            raise NotEnumerableError(f"{self.quantale.kind} carrier is not enumerable")
        return [tuple(t) for t in iproduct(self.quantale.elements(), repeat=self.m)]

    def has_object(self, x):
        return isinstance(x, tuple) and len(x) == self.m and all(self.quantale.contains(c) for c in x)

    def hom(self, x, y):
        Q = self.quantale
        if self.op:
            x, y = y, x
        return Q.meet(Q.hom(a, b) for a, b in zip(x, y))

    def __repr__(self):
        return f"PresheafPower({self.quantale.kind}, m={self.m}, op={self.op})"


class QFunctor:
    """Object map between categories; functoriality is a checked property."""

    def __init__(self, domain: QCategory, codomain: QCategory, mapping, name: str = ""):
        self.domain = domain
        self.codomain = codomain
        self._mapping = mapping
        self.name = name or ("{...}" if isinstance(mapping, Mapping) else getattr(mapping, "__name__", "fn"))

    def __call__(self, x: Any) -> Any:
        if isinstance(self._mapping, Mapping):
            try:
                return self._mapping[x]
            except KeyError:
                raise QCategoryError(f"functor {self.name} is undefined on {x!r}") from None
        return self._mapping(x)

    @classmethod
    def identity(cls, category: QCategory) -> "QFunctor":
        return cls(category, category, lambda x: x, name="id")

    def compose(self, inner: "QFunctor") -> "QFunctor":
        """self after inner."""
        return QFunctor(inner.domain, self.codomain, lambda x: self(inner(x)),
                        name=f"{self.name}.{inner.name}")

    def to_payload(self) -> dict:
        if not isinstance(self._mapping, Mapping):
            raise QCategoryError("only table functors serialize")
        return {"map": dict(self._mapping)}

    def __repr__(self):
        return f"QFunctor({self.name})"


def validate_category(C: QCategory, objects: Iterable[Any] | None = None) -> LawReport:
    """Check unit and composition laws, exhaustively or on a given object list."""
    rep = LawReport(title="category laws")
    Q = C.quantale
    obs = list(objects) if objects is not None else C.objects()
    for x in obs:
        rep.check("hom-unit", Q.leq(Q.unit, C.hom(x, x)), x,
                  f"hom(x,x)={C.hom(x, x)!r}")
    for x, y, z in iproduct(obs, obs, obs):
        composite = Q.mul(C.hom(x, y), C.hom(y, z))
        rep.check("hom-composition", Q.leq(composite, C.hom(x, z)), (x, y, z),
                  f"{composite!r} not below {C.hom(x, z)!r}")
    return rep


def underlying_preorder(C: QCategory, objects: Iterable[Any] | None = None) -> set[tuple]:
    """Pairs (x, y) with hom(x, y) at the unit: the level-1 order."""
    Q = C.quantale
    obs = list(objects) if objects is not None else C.objects()
    return {(x, y) for x in obs for y in obs if Q.leq(Q.unit, C.hom(x, y))}


def opposite(C: QCategory) -> QCategory:
    if isinstance(C, OppositeCategory):
        return C.base
    if isinstance(C, FiniteQCategory):
        obs = C.objects()
        return FiniteQCategory(C.quantale, obs, {(x, y): C.hom(y, x) for x in obs for y in obs})
    return OppositeCategory(C)


def product(factors: Iterable[QCategory]) -> ProductCategory:
    return ProductCategory(factors)


def functor_category_hom(F: QFunctor, G: QFunctor, sample: Iterable[Any] | None = None) -> Any:
    """hom in the functor category: meet over objects of hom(Fx, Gx)."""
    if F.domain is not G.domain and F.domain != G.domain:
        raise QCategoryError("functors must share a domain")
    cod = F.codomain
    obs = list(sample) if sample is not None else F.domain.objects()
    return cod.quantale.meet(cod.hom(F(x), G(x)) for x in obs)


def functor_defect(F: QFunctor, sample: Iterable[tuple] | None = None) -> Any:
    """Largest q at which F is a q-fuzzy functor.

    Meet over object pairs of [hom(x, y), hom(Fx, Fy)]; unit means genuine.
    sample is a list of pairs, or None for the exhaustive product.
    """
    Q = F.domain.quantale
    if sample is None:
        obs = F.domain.objects()
        pairs: Iterable[tuple] = iproduct(obs, obs)
    else:
        pairs = sample
    return Q.meet(Q.hom(F.domain.hom(x, y), F.codomain.hom(F(x), F(y))) for x, y in pairs)


def is_functor(F: QFunctor, sample: Iterable[tuple] | None = None) -> bool:
    Q = F.domain.quantale
    return Q.eq(functor_defect(F, sample), Q.unit)


def skeleton(C: FiniteQCategory) -> tuple[FiniteQCategory, dict]:
    """Quotient by unit-level isomorphism, keeping lowest-key representatives.

    Returns the quotient category and the object -> representative map.
    """
    obs = sorted(C.objects(), key=object_sort_key)
    rep_of: dict = {}
    reps: list = []
    for x in obs:
        for r in reps:
            if C.iso(x, r):
                rep_of[x] = r
                break
        else:
            reps.append(x)
            rep_of[x] = x
    quotient = FiniteQCategory(C.quantale, reps, {(a, b): C.hom(a, b) for a in reps for b in reps})
    return quotient, rep_of
