"""Discrete-event synchronization on max-plus timing stalks.

Each vertex runs m periodic events; the delay matrix A_v(i, j) is the lag
event j's next firing must leave after event i's current firing.  Timing
vectors live in the opposite-order power of extended-real costs, where
hom(x, y) = max_i (x_i - y_i)_+ and tightening a schedule is a meet.  The
restriction of an incidence applies the vertex's max-plus matrix; the
corestriction is the clipped min-plus transpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Any, Iterable, Mapping, Sequence

from ..qcat import PresheafPower, QFunctor
from ..quantale import LawvereRealsQuantale
from ..report import LawReport
from ..sheaf import Graph, NetworkSheaf, Weighting, laplacian
from ..wlattice import AnalyticLattice, analytic_ops_for

TimingVector = tuple  # m nonnegative extended reals


def _sub_clipped(y: float, a: float) -> float:
    """(y - a)_+ under the cost conventions: a = inf gives 0, y = inf gives inf."""
    if math.isinf(a):
        return 0.0
    if math.isinf(y):
        return math.inf
    return max(y - a, 0.0)


def maxplus_apply(A: Sequence[Sequence[float]], x: TimingVector) -> TimingVector:
    """j |-> max_i (x_i + A[i][j]).  A is rows-in, columns-out."""
    m_in = len(A)
    if len(x) != m_in:
        raise ValueError(f"timing vector of length {len(x)} against {m_in} matrix rows")
    m_out = len(A[0])
    return tuple(max(x[i] + A[i][j] for i in range(m_in)) for j in range(m_out))


def minplus_transpose_apply(A: Sequence[Sequence[float]], y: TimingVector) -> TimingVector:
    """i |-> min_j (y_j - A[i][j])_+ with the clipping inside the min."""
    m_in = len(A)
    m_out = len(A[0])
    if len(y) != m_out:
        raise ValueError(f"timing vector of length {len(y)} against {m_out} matrix columns")
    return tuple(min(_sub_clipped(y[j], A[i][j]) for j in range(m_out)) for i in range(m_in))


@dataclass
class DesSystem:
    """Per-vertex delay matrices over a shared event count and graph."""

    m: int
    delays: dict  # vertex -> m x m matrix (tuple of tuples)
    graph: Graph
    weights: dict | None = None  # ordered adjacent pair -> bound; None = all unit

    def __post_init__(self):
        self.delays = {v: tuple(tuple(float(c) for c in row) for row in M)
                       for v, M in self.delays.items()}
        for v in self.graph.vertices:
            M = self.delays.get(v)
            if M is None:
                raise ValueError(f"no delay matrix for vertex {v!r}")
            if len(M) != self.m or any(len(row) != self.m for row in M):
                raise ValueError(f"delay matrix at {v!r} must be {self.m}x{self.m}")
            for i, row in enumerate(M):
                for j, c in enumerate(row):
                    if math.isnan(c) or c < 0:
                        raise ValueError(f"delay[{v!r}][{i}][{j}] must be nonnegative, got {c!r}")

    def span(self) -> float:
        finite = [c for M in self.delays.values() for row in M for c in row if math.isfinite(c)]
        return max(finite, default=1.0)


def des_sheaf(sys: DesSystem) -> tuple[NetworkSheaf, Weighting]:
    """Sheaf of timing stalks with max-plus transports.

    The per-incidence adjunction level is measured on a finite timing grid
    whose edge-side points are restriction images, the objects flows
    transport; there the min-plus transpose is an exact right adjoint, so
    the recorded levels are crisp.
    """
    R = LawvereRealsQuantale()
    cat = PresheafPower(R, sys.m, op=True)
    ops = analytic_ops_for(cat)
    span = sys.span()

    def finite_sampler(rng: Random) -> TimingVector:
        return tuple(rng.uniform(0.0, 2.0 * span + 1.0) for _ in range(sys.m))

    ops.sampler = finite_sampler
    lat = AnalyticLattice(cat, ops)
    rest, corest = {}, {}
    for e in sys.graph.edges:
        for v in e:
            A = sys.delays[v]
            rest[(v, e)] = QFunctor(cat, cat, lambda x, A=A: maxplus_apply(A, x),
                                    name=f"maxplus[{v}]")
            corest[(e, v)] = QFunctor(cat, cat, lambda y, A=A: minplus_transpose_apply(A, y),
                                      name=f"minplusT[{v}]")
    F = NetworkSheaf(
        sys.graph, R,
        {v: lat for v in sys.graph.vertices},
        {e: lat for e in sys.graph.edges},
        rest, corest,
    )
    W = Weighting(sys.graph, R, table=sys.weights, constant=None if sys.weights else R.unit)
    return F, W


def des_laplacian_closed_form(sys: DesSystem, W: Weighting, x: Mapping) -> dict:
    """The one-shot displayed formula for the timing Laplacian, verbatim:

        (L x)_v(i') = min_w [ W(v,w) + min_j ( A_v(i',j) - max_i (A_w(i,j) + x_w(i)) )_+ ]

    Kept exactly as displayed for cross-checking; the generic
    corestriction-of-restriction pipeline is authoritative for flows.
    """
    out = {}
    for v in sys.graph.vertices:
        Av = sys.delays[v]
        vals = []
        for w, _e in sys.graph.neighbors(v):
            Aw = sys.delays[w]
            bound = W(v, w)
            vec = []
            for ip in range(sys.m):
                inner = min(
                    _sub_clipped(Av[ip][j], max(Aw[i][j] + x[w][i] for i in range(sys.m)))
                    for j in range(sys.m)
                )
                vec.append(bound + inner)
            vals.append(tuple(vec))
        if vals:
            out[v] = tuple(min(t[i] for t in vals) for i in range(sys.m))
        else:
            out[v] = (math.inf,) * sys.m
    return out


def closed_form_crosscheck(
    sys: DesSystem, F: NetworkSheaf, W: Weighting, cochains: Iterable[Mapping],
) -> LawReport:
    """Compare the displayed closed form against the generic transport meet.

    A disagreement is reported with a (vertex, coordinate, both values)
    witness rather than patched over.
    """
    rep = LawReport(title="closed-form timing Laplacian crosscheck")
    R = F.quantale
    for x in cochains:
        generic = laplacian(F, W, x)
        closed = des_laplacian_closed_form(sys, W, x)
        for v in sys.graph.vertices:
            for i in range(sys.m):
                rep.check("closed-form-agrees", R.eq(generic[v][i], closed[v][i]),
                          (v, i, generic[v][i], closed[v][i]),
                          f"generic {generic[v][i]!r} vs displayed {closed[v][i]!r}")
    return rep


def agreement_slacks(sys: DesSystem, W: Weighting, x: Mapping) -> list[dict]:
    """Per-orientation slack of the displayed synchronization inequalities:

        min_j ( F_w x_w (j) - F_v x_v (j) )_+  <=  W(v, w)

    evaluated directly from the delay matrices, independent of the sheaf
    machinery.  slack = bound - lhs (nonnegative means satisfied).
    """
    out = []
    fired = {v: maxplus_apply(sys.delays[v], tuple(x[v])) for v in sys.graph.vertices}
    for v, w, e in sys.graph.adjacent_pairs():
        lhs = min(_sub_clipped(fired[w][j], fired[v][j]) for j in range(sys.m))
        bound = W(v, w)
        slack = math.inf if math.isinf(bound) else bound - lhs
        out.append({"v": v, "w": w, "edge": e, "lhs": lhs, "bound": bound, "slack": slack})
    return out


def perturbed_des_sheaf(
    sys: DesSystem, noise: Mapping[Any, Sequence[float]],
) -> tuple[NetworkSheaf, Weighting]:
    """Sheaf whose restrictions carry per-source-event noise:
    x |-> max_i (x_i + A(i,j) + eta_i).  Corestrictions stay the base
    transposes, so the measured adjunction levels quantify the perturbation.
    """
    base_F, W = des_sheaf(sys)
    cat = base_F.vertex_lattices[sys.graph.vertices[0]].category
    rest = {}
    for (v, e), f in base_F.restrictions.items():
        A = sys.delays[v]
        eta = tuple(noise[v])
        if len(eta) != sys.m:
            raise ValueError(f"noise at {v!r} must have {sys.m} entries")
        Aeta = tuple(tuple(A[i][j] + eta[i] for j in range(sys.m)) for i in range(sys.m))
        rest[(v, e)] = QFunctor(cat, cat, lambda x, M=Aeta: maxplus_apply(M, x),
                                name=f"maxplus~[{v}]")
    F = NetworkSheaf(
        sys.graph, base_F.quantale, base_F.vertex_lattices, base_F.edge_lattices,
        rest, base_F.corestrictions,
    )
    return F, W
