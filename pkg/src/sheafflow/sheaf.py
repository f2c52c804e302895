"""Network sheaves of weighted lattices and their harmonic flow.

A sheaf assigns a weighted lattice to every vertex and edge of a simple
undirected graph, a restriction functor stalk(v) -> stalk(e) to every
incidence, and a corestriction stalk(e) -> stalk(v) back.  Each incidence
records the level at which corestriction is right adjoint to restriction;
the meet of those levels is the fuzziness of the transport Laplacian

    (L x)_v = crisp meet over neighbors w of  W(v, w) -|> g_v(f_w(x_w)),

with f_w the restriction of the far endpoint and g_v the corestriction back
into v.  Harmonic flow iterates x <- omega1 -|> Lx  meet  omega2 -|> x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from random import Random
from typing import Any, Callable, Iterable, Mapping

from .qcat import FiniteQCategory, QCategoryError, QFunctor, object_sort_key
from .quantale import LawvereRealsQuantale, Quantale
from .report import LawReport
from .wlattice import WeightedLattice

Cochain = dict  # vertex -> stalk object


class SheafError(QCategoryError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are sorted vertex pairs."""

    vertices: tuple
    edges: tuple

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable) -> "Graph":
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise SheafError("duplicate vertices")
        vset = set(vs)
        out = []
        seen = set()
        for e in edges:
            u, w = e
            if u == w:
                raise SheafError(f"loop edge at {u!r}")
            if u not in vset or w not in vset:
                raise SheafError(f"edge {e!r} mentions an unknown vertex")
            key = tuple(sorted((u, w), key=object_sort_key))
            if key in seen:
                raise SheafError(f"duplicate edge {key!r}")
            seen.add(key)
            out.append(key)
        vs_sorted = tuple(sorted(vs, key=object_sort_key))
        return cls(vs_sorted, tuple(sorted(out, key=lambda e: (object_sort_key(e[0]), object_sort_key(e[1])))))

    def edge_between(self, v, w):
        key = tuple(sorted((v, w), key=object_sort_key))
        if key not in self.edges:
            raise SheafError(f"no edge between {v!r} and {w!r}")
        return key

    def neighbors(self, v) -> list[tuple]:
        """Sorted (neighbor, edge) pairs."""
        out = []
        for e in self.edges:
            if v == e[0]:
                out.append((e[1], e))
            elif v == e[1]:
                out.append((e[0], e))
        return sorted(out, key=lambda p: object_sort_key(p[0]))

    def adjacent_pairs(self) -> list[tuple]:
        """All ordered adjacent (v, w, edge) triples, deterministic order."""
        out = []
        for e in self.edges:
            out.append((e[0], e[1], e))
            out.append((e[1], e[0], e))
        return out


class Weighting:
    """Edge weighting: a quantale value for each ordered adjacent pair."""

    def __init__(self, graph: Graph, quantale: Quantale, table: Mapping | None = None,
                 constant: Any = None):
        self.graph = graph
        self.quantale = quantale
        pairs = {(v, w) for v, w, _ in graph.adjacent_pairs()}
        if table is None:
            if constant is None:
                constant = quantale.unit
            quantale.require(constant)
            self.table = {p: constant for p in pairs}
        else:
            self.table = dict(table)
            extra = set(self.table) - pairs
            missing = pairs - set(self.table)
            if extra:
                raise SheafError(f"weighting defined off the graph: {sorted(extra, key=str)[:3]}")
            if missing:
                raise SheafError(f"weighting missing pairs: {sorted(missing, key=str)[:3]}")
            for val in self.table.values():
                quantale.require(val)

    def __call__(self, v, w):
        try:
            return self.table[(v, w)]
        except KeyError:
            raise SheafError(f"({v!r}, {w!r}) is not an adjacent pair") from None

    def is_symmetric(self) -> bool:
        return all(self.quantale.eq(self.table[(v, w)], self.table[(w, v)])
                   for (v, w) in self.table)


class NetworkSheaf:
    """Stalks plus restriction/corestriction transports over a graph.

    Adjunction levels per incidence are measured on construction: over all
    stalk objects when the stalks are enumerable, otherwise over a documented
    sample whose edge-side objects are images of a vertex-side grid under the
    incidence's own restriction (the objects a flow actually transports).
    """

    def __init__(
        self,
        graph: Graph,
        quantale: Quantale,
        vertex_lattices: Mapping[Any, WeightedLattice],
        edge_lattices: Mapping[Any, WeightedLattice],
        restrictions: Mapping[tuple, QFunctor],
        corestrictions: Mapping[tuple, QFunctor],
        adjunction_levels: Mapping[tuple, Any] | None = None,
        sample_seed: int = 7,
        sample_size: int = 8,
    ):
        self.graph = graph
        self.quantale = quantale
        self.vertex_lattices = dict(vertex_lattices)
        self.edge_lattices = dict(edge_lattices)
        self.restrictions = dict(restrictions)
        self.corestrictions = dict(corestrictions)
        for v in graph.vertices:
            if v not in self.vertex_lattices:
                raise SheafError(f"missing stalk at vertex {v!r}")
        for e in graph.edges:
            if e not in self.edge_lattices:
                raise SheafError(f"missing stalk at edge {e!r}")
            for v in e:
                if (v, e) not in self.restrictions:
                    raise SheafError(f"missing restriction for incidence ({v!r}, {e!r})")
                if (e, v) not in self.corestrictions:
                    raise SheafError(f"missing corestriction for incidence ({v!r}, {e!r})")
        if adjunction_levels is not None:
            self.adjunction_levels = dict(adjunction_levels)
            for lvl in self.adjunction_levels.values():
                quantale.require(lvl)
        else:
            self.adjunction_levels = {}
            rng = Random(sample_seed)
            for e in graph.edges:
                for v in e:
                    self.adjunction_levels[(v, e)] = self._measure_level(v, e, rng, sample_size)

    def _incidence_samples(self, v, e, rng: Random, size: int) -> tuple[list, list]:
        lat_v = self.vertex_lattices[v]
        lat_e = self.edge_lattices[e]
        f = self.restrictions[(v, e)]
        if lat_v.is_enumerable and lat_e.is_enumerable:
            return lat_v.objects(), lat_e.objects()
        xs = [lat_v.sample_object(rng) for _ in range(size)]
        ys = [f(x) for x in xs]
        return xs, ys

    def _measure_level(self, v, e, rng: Random, size: int):
        xs, ys = self._incidence_samples(v, e, rng, size)
        return adjunction_defect_on(
            self.quantale, self.vertex_lattices[v].category, self.edge_lattices[e].category,
            self.restrictions[(v, e)], self.corestrictions[(e, v)], xs, ys,
        )

    def level(self):
        """Meet of all per-incidence adjunction levels: the Laplacian's fuzziness."""
        return self.quantale.meet(self.adjunction_levels.values())

    def is_crisp(self) -> bool:
        return self.quantale.eq(self.level(), self.quantale.unit)

    def transport(self, w, v, e, obj):
        """Carry a stalk object of w across e into v's stalk."""
        return self.corestrictions[(e, v)](self.restrictions[(w, e)](obj))

    def check_cochain(self, x: Cochain) -> None:
        for v in self.graph.vertices:
            if v not in x:
                raise SheafError(f"cochain missing vertex {v!r}")
            if not self.vertex_lattices[v].category.has_object(x[v]):
                raise SheafError(f"cochain value {x[v]!r} is not in the stalk at {v!r}")


def adjunction_defect_on(Q, dom, cod, F, G, xs, ys):
    """Meet over sample pairs of the two-sided transposition residual."""
    vals = []
    for x in xs:
        for y in ys:
            a = cod.hom(F(x), y)
            b = dom.hom(x, G(y))
            vals.append(Q.meet2(Q.hom(a, b), Q.hom(b, a)))
    return Q.meet(vals)


def cochain_hom(F: NetworkSheaf, x: Cochain, y: Cochain):
    """Hom in the cochain category: meet over vertices of stalk homs."""
    return F.quantale.meet(
        F.vertex_lattices[v].hom(x[v], y[v]) for v in F.graph.vertices
    )


def cochain_iso(F: NetworkSheaf, x: Cochain, y: Cochain) -> bool:
    Q = F.quantale
    return Q.leq(Q.unit, cochain_hom(F, x, y)) and Q.leq(Q.unit, cochain_hom(F, y, x))


@dataclass
class SectionCheck:
    ok: bool
    worst_edge: tuple | None  # (v, w, edge)
    slack: Any                # residual [W(v,w), hom_e] at the worst edge
    report: LawReport


def is_fuzzy_global_section(F: NetworkSheaf, W: Weighting, x: Cochain) -> SectionCheck:
    """Does x agree across every edge at least to the edge's weight?

    Checks hom_e(f_v(x_v), f_w(x_w)) >= W(v, w) for both orientations of
    every edge and reports the orientation with the least residual slack.
    """
    Q = F.quantale
    F.check_cochain(x)
    rep = LawReport(title="fuzzy global section")
    worst = None
    for v, w, e in F.graph.adjacent_pairs():
        h = F.edge_lattices[e].hom(
            F.restrictions[(v, e)](x[v]), F.restrictions[(w, e)](x[w])
        )
        bound = W(v, w)
        slack = Q.hom(bound, h)
        rep.check("edge-agreement", Q.leq(bound, h), (v, w, e),
                  f"hom={h!r} below weight={bound!r}")
        if worst is None or Q.leq(slack, worst[1]) and not Q.eq(slack, worst[1]):
            worst = ((v, w, e), slack)
    if worst is None:
        return SectionCheck(True, None, Q.unit, rep)
    return SectionCheck(rep.ok, worst[0], worst[1], rep)


def global_sections(F: NetworkSheaf, W: Weighting) -> tuple[list[Cochain], FiniteQCategory]:
    """All fuzzy global sections (enumerable stalks) plus their hom category."""
    vs = F.graph.vertices
    per_vertex = []
    for v in vs:
        lat = F.vertex_lattices[v]
        per_vertex.append(sorted(lat.objects(), key=object_sort_key))
    sections = []
    for combo in iproduct(*per_vertex):
        x = dict(zip(vs, combo))
        if is_fuzzy_global_section(F, W, x).ok:
            sections.append(x)
    objs = [tuple(x[v] for v in vs) for x in sections]
    hom = {}
    for a, xa in zip(objs, sections):
        for b, xb in zip(objs, sections):
            hom[(a, b)] = cochain_hom(F, xa, xb)
    return sections, FiniteQCategory(F.quantale, objs, hom)


def laplacian(F: NetworkSheaf, W: Weighting, x: Cochain) -> Cochain:
    """Weighted transport meet at every vertex; stalk top at isolated vertices."""
    F.check_cochain(x)
    out = {}
    for v in F.graph.vertices:
        lat = F.vertex_lattices[v]
        entries = [
            lat.cotensor(W(v, w), F.transport(w, v, e, x[w]))
            for w, e in F.graph.neighbors(v)
        ]
        out[v] = lat.crisp_meet(entries)
    return out


def flow_step(
    F: NetworkSheaf, W: Weighting, x: Cochain,
    omega1: Callable | None = None, omega2: Callable | None = None,
    Lx: Cochain | None = None,
) -> Cochain:
    """One damped diffusion update: omega1 -|> Lx meet omega2 -|> x."""
    if Lx is None:
        Lx = laplacian(F, W, x)
    unit = F.quantale.unit
    w1 = _omega_fn(omega1, unit)
    w2 = _omega_fn(omega2, unit)
    out = {}
    for v in F.graph.vertices:
        lat = F.vertex_lattices[v]
        out[v] = lat.crisp_meet([lat.cotensor(w1(v), Lx[v]), lat.cotensor(w2(v), x[v])])
    return out


def _omega_fn(omega, unit):
    if omega is None:
        return lambda v: unit
    if callable(omega):
        return omega
    if isinstance(omega, Mapping):
        return lambda v: omega[v]
    return lambda v: omega  # constant


@dataclass
class FlowStep:
    t: int
    cochain: Cochain
    suffix_level: Any


@dataclass
class FlowTrace:
    iterations: list[FlowStep] = field(default_factory=list)
    status: str = "max_iter_reached"  # converged | max_iter_reached | diverging
    converged_at: int | None = None

    @property
    def final(self) -> Cochain:
        return self.iterations[-1].cochain

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def _magnitude(obj) -> float | None:
    if isinstance(obj, (int, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, tuple) and all(isinstance(c, (int, float)) for c in obj):
        finite = [float(c) for c in obj if math.isfinite(c)]
        return max(finite) if finite else None
    return None


def harmonic_flow(
    F: NetworkSheaf, W: Weighting, x0: Cochain, *,
    max_iter: int = 200,
    omega_schedule: Callable[[int, Cochain], tuple] | None = None,
    weight_schedule: Callable[[int, Cochain], Weighting] | None = None,
    divergence_window: int = 5,
) -> FlowTrace:
    """Iterate the damped diffusion update and record the trajectory.

    omega_schedule(t, x) -> (omega1, omega2) lets callers freeze or release
    vertices over time; weight_schedule(t, x) recomputes the weighting from
    the current state.  Divergence is only flagged for extended-real stalks:
    the suffix level must strictly degrade for `divergence_window` straight
    steps while finite component magnitudes grow.
    """
    Q = F.quantale
    F.check_cochain(x0)
    trace = FlowTrace()
    x = x0
    lawvere = isinstance(Q, LawvereRealsQuantale)
    degrade_run = 0
    prev_suffix = None
    prev_mag = None
    for t in range(max_iter + 1):
        Wt = weight_schedule(t, x) if weight_schedule is not None else W
        Lx = laplacian(F, Wt, x)
        suffix = cochain_hom(F, x, Lx)
        trace.iterations.append(FlowStep(t, x, suffix))
        if lawvere and prev_suffix is not None:
            mag = max((m for m in (_magnitude(x[v]) for v in F.graph.vertices) if m is not None),
                      default=None)
            strictly_worse = Q.leq(suffix, prev_suffix) and not Q.eq(suffix, prev_suffix)
            growing = mag is not None and prev_mag is not None and mag > prev_mag
            degrade_run = degrade_run + 1 if (strictly_worse and growing) else 0
            prev_mag = mag
            if degrade_run >= divergence_window:
                trace.status = "diverging"
                return trace
        elif lawvere:
            prev_mag = max((m for m in (_magnitude(x[v]) for v in F.graph.vertices) if m is not None),
                           default=None)
        prev_suffix = suffix
        if t == max_iter:
            break
        omega1, omega2 = omega_schedule(t, x) if omega_schedule is not None else (None, None)
        nxt = flow_step(F, Wt, x, omega1, omega2, Lx=Lx)
        if all(F.vertex_lattices[v].iso(nxt[v], x[v]) for v in F.graph.vertices):
            trace.status = "converged"
            trace.converged_at = t
            return trace
        x = nxt
    trace.status = "max_iter_reached"
    return trace


def check_suffix_section_lemmas(
    F: NetworkSheaf, W: Weighting, q, cochains: Iterable[Cochain],
    level=None,
) -> LawReport:
    """One-sided descent lemmas linking edge agreement to flow descent.

    (a) edge homs >= W * q forces hom(x, Lx) >= level * q;
    (b) hom(x, Lx) >= q forces edge homs >= W * level * q;
    (c) when the level is idempotent, membership at level * q is equivalent
        to edge homs >= W * level * q.
    The recorded per-incidence adjunction levels must be at or above `level`;
    the transposition inequality is re-verified on the pairs each cochain
    actually induces, so a stale recorded level is caught rather than trusted.
    """
    Q = F.quantale
    eps = level if level is not None else F.level()
    rep = LawReport(title="suffix/section lemmas")
    idem = Q.eq(Q.mul(eps, eps), eps)
    for x in cochains:
        F.check_cochain(x)
        # premise: transposition at the pairs this cochain exercises
        for v, w, e in F.graph.adjacent_pairs():
            y = F.restrictions[(w, e)](x[w])
            d = adjunction_defect_on(
                Q, F.vertex_lattices[v].category, F.edge_lattices[e].category,
                F.restrictions[(v, e)], F.corestrictions[(e, v)], [x[v]], [y],
            )
            rep.check("adjunction-level-premise", Q.leq(eps, d), (v, w, e),
                      f"defect {d!r} at level {eps!r}")
        homs = {
            (v, w): F.edge_lattices[e].hom(
                F.restrictions[(v, e)](x[v]), F.restrictions[(w, e)](x[w]))
            for v, w, e in F.graph.adjacent_pairs()
        }
        Lx = laplacian(F, W, x)
        sx = cochain_hom(F, x, Lx)
        agree_q = all(Q.leq(Q.mul(W(v, w), q), h) for (v, w), h in homs.items())
        if agree_q:
            rep.check("agreement-implies-descent", Q.leq(Q.mul(eps, q), sx), _key(x),
                      f"suffix level {sx!r} below {Q.mul(eps, q)!r}")
        if Q.leq(q, sx):
            for (v, w), h in homs.items():
                rep.check("descent-implies-agreement",
                          Q.leq(Q.mul(W(v, w), Q.mul(eps, q)), h), (_key(x), v, w),
                          f"edge hom {h!r} below {Q.mul(W(v, w), Q.mul(eps, q))!r}")
        if idem:
            member = Q.leq(Q.mul(eps, q), sx)
            agree = all(Q.leq(Q.mul(W(v, w), Q.mul(eps, q)), h) for (v, w), h in homs.items())
            rep.check("idempotent-biconditional", member == agree, _key(x),
                      f"membership {member} vs agreement {agree}")
    return rep


def _key(x: Cochain) -> tuple:
    return tuple(sorted(((object_sort_key(v), object_sort_key(o)) for v, o in x.items())))


def check_projection_property(
    F: NetworkSheaf, W: Weighting, x0: Cochain, *, max_iter: int = 400,
) -> LawReport:
    """Converged unweighted flow preserves homs from every global section.

    Needs a crisp sheaf and finite convergence; then hom(y, x0) equals
    hom(y, x[t*]) for every section y.
    """
    Q = F.quantale
    rep = LawReport(title="projection property")
    if not rep.check("crisp-laplacian", F.is_crisp(), F.level(),
                     "projection property needs a crisp sheaf"):
        return rep
    trace = harmonic_flow(F, W, x0, max_iter=max_iter)
    if not rep.check("finite-convergence", trace.converged, trace.status):
        return rep
    xf = trace.final
    sections, _ = global_sections(F, W)
    for y in sections:
        before = cochain_hom(F, y, x0)
        after = cochain_hom(F, y, xf)
        rep.check("hom-preserved", Q.eq(before, after), _key(y),
                  f"hom before {before!r} vs after {after!r}")
    return rep
