"""Fuzzy adjunctions: transposition defects, unit/counit criteria,
perturbation bounds, interchange with weighted (co)limits, and synthesis of
right adjoints by the join formula.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Any, Iterable

from .qcat import FiniteQCategory, QCategoryError, QFunctor, functor_defect, skeleton
from .report import LawReport
from .wlattice import EnumerableLattice, WeightedDiagram, WeightedLattice, lattice_for


def _pairs(F: QFunctor, G: QFunctor, sample: Iterable[tuple] | None):
    if sample is not None:
        return list(sample)
    return list(iproduct(F.domain.objects(), G.domain.objects()))


def adjunction_defect(F: QFunctor, G: QFunctor, sample: Iterable[tuple] | None = None):
    """Largest q with hom(Fx, y) and hom(x, Gy) q-equivalent on the sample.

    sample: (x, y) pairs with x in F's domain, y in G's domain; None scans
    the exhaustive product (enumerable categories only).
    """
    Q = F.domain.quantale
    vals = []
    for x, y in _pairs(F, G, sample):
        a = F.codomain.hom(F(x), y)
        b = F.domain.hom(x, G(y))
        vals.append(Q.meet2(Q.hom(a, b), Q.hom(b, a)))
    return Q.meet(vals)


def check_unit_counit(
    F: QFunctor, G: QFunctor, q,
    x_sample: Iterable | None = None, y_sample: Iterable | None = None,
) -> LawReport:
    """Unit/counit criterion for an adjunction at level q.

    Both maps must be genuine functors; then hom(x, GFx) >= q and
    hom(FGy, y) >= q, re-expressed against the transposition defect on the
    same sample, which must also clear q.
    """
    Q = F.domain.quantale
    rep = LawReport(title="unit/counit criterion")
    xs = list(x_sample) if x_sample is not None else F.domain.objects()
    ys = list(y_sample) if y_sample is not None else G.domain.objects()
    df = functor_defect(F, None if x_sample is None else list(iproduct(xs, xs)))
    dg = functor_defect(G, None if y_sample is None else list(iproduct(ys, ys)))
    rep.check("left-is-functor", Q.eq(df, Q.unit), df)
    rep.check("right-is-functor", Q.eq(dg, Q.unit), dg)
    for x in xs:
        h = F.domain.hom(x, G(F(x)))
        rep.check("unit-level", Q.leq(q, h), x, f"hom(x, GFx)={h!r}")
    for y in ys:
        h = F.codomain.hom(F(G(y)), y)
        rep.check("counit-level", Q.leq(q, h), y, f"hom(FGy, y)={h!r}")
    defect = adjunction_defect(F, G, list(iproduct(xs, ys)))
    rep.check("matches-transposition-defect", Q.leq(q, defect), defect,
              "unit/counit level must agree with the transposition defect")
    return rep


def functor_distance(F: QFunctor, G: QFunctor, sample: Iterable | None = None):
    """Largest q with Fx and Gx q-isomorphic for every sampled x."""
    Q = F.codomain.quantale
    xs = list(sample) if sample is not None else F.domain.objects()
    return Q.meet(
        Q.meet2(F.codomain.hom(F(x), G(x)), F.codomain.hom(G(x), F(x))) for x in xs
    )


def perturbed_adjunction(
    F: QFunctor, G: QFunctor, Ftilde: QFunctor, q,
    sample: Iterable[tuple] | None = None, perturbed: str = "left",
) -> LawReport:
    """A q-perturbation of one leg of a genuine adjunction is a q-adjoint.

    Premises (checked): the base pair transposes exactly on the sample, and
    Ftilde is within q of the named leg.  Conclusion (checked): the perturbed
    pair's defect still clears q.
    """
    Q = F.domain.quantale
    rep = LawReport(title="perturbed adjunction")
    pairs = _pairs(F, G, sample)
    base = adjunction_defect(F, G, pairs)
    rep.check("base-pair-crisp", Q.eq(base, Q.unit), base,
              "premise: the unperturbed pair must transpose exactly")
    if perturbed == "left":
        dist = functor_distance(F, Ftilde, sorted({x for x, _ in pairs}, key=str))
        conclusion = adjunction_defect(Ftilde, G, pairs)
    elif perturbed == "right":
        dist = functor_distance(G, Ftilde, sorted({y for _, y in pairs}, key=str))
        conclusion = adjunction_defect(F, Ftilde, pairs)
    else:
        raise QCategoryError(f"perturbed must be 'left' or 'right', got {perturbed!r}")
    rep.check("perturbation-within-q", Q.leq(q, dist), dist,
              "premise: the perturbed leg must stay within q of the original")
    rep.check("perturbed-defect-clears-q", Q.leq(q, conclusion), conclusion,
              f"defect {conclusion!r} at level {q!r}")
    return rep


def check_colim_inequality(
    F: QFunctor, D: WeightedDiagram, q,
    dom_lattice: WeightedLattice | None = None,
    cod_lattice: WeightedLattice | None = None,
) -> LawReport:
    """For a q-fuzzy functor, the image join sits q-below the join's image."""
    Q = F.domain.quantale
    rep = LawReport(title="colimit inequality")
    LC = dom_lattice if dom_lattice is not None else lattice_for(F.domain)
    LD = cod_lattice if cod_lattice is not None else lattice_for(F.codomain)
    df = functor_defect(F)
    rep.check("functor-at-level-q", Q.leq(q, df), df)
    jC = LC.weighted_join(D)
    FD = WeightedDiagram(tuple(F(s) for s in D.objects), D.weights)
    jD = LD.weighted_join(FD)
    h = F.codomain.hom(jD, F(jC))
    rep.check("image-join-below-join-image", Q.leq(q, h), (jD, F(jC)),
              f"hom={h!r} at level {q!r}")
    return rep


def adjoint_limit_interchange(
    F: QFunctor, G: QFunctor, q,
    D_dom: WeightedDiagram | None = None, D_cod: WeightedDiagram | None = None,
    sample: Iterable[tuple] | None = None,
) -> LawReport:
    """q-adjoints move weighted joins (left leg) and meets (right leg)
    across, up to level q*q."""
    Q = F.domain.quantale
    rep = LawReport(title="adjoint limit interchange")
    defect = adjunction_defect(F, G, sample)
    rep.check("pair-at-level-q", Q.leq(q, defect), defect)
    qq = Q.mul(q, q)
    if D_dom is not None:
        LC = lattice_for(F.domain)
        LD = lattice_for(F.codomain)
        lhs = F(LC.weighted_join(D_dom))
        rhs = LD.weighted_join(WeightedDiagram(tuple(F(s) for s in D_dom.objects), D_dom.weights))
        ok = Q.leq(qq, Q.meet2(F.codomain.hom(lhs, rhs), F.codomain.hom(rhs, lhs)))
        rep.check("join-interchange", ok, None,
                  f"F(join D) vs join F(D) not {qq!r}-equivalent")
    if D_cod is not None:
        LC = lattice_for(F.domain)
        LD = lattice_for(F.codomain)
        lhs = G(LD.weighted_meet(D_cod))
        rhs = LC.weighted_meet(WeightedDiagram(tuple(G(s) for s in D_cod.objects), D_cod.weights))
        ok = Q.leq(qq, Q.meet2(F.domain.hom(lhs, rhs), F.domain.hom(rhs, lhs)))
        rep.check("meet-interchange", ok, None,
                  f"G(meet D) vs meet G(D) not {qq!r}-equivalent")
    return rep


@dataclass
class SynthesisResult:
    right: QFunctor
    defect: Any
    domain: FiniteQCategory
    codomain: FiniteQCategory
    quotiented: bool


def synthesize_right_adjoint(F: QFunctor) -> SynthesisResult:
    """Candidate right adjoint G(y) = join of {x : Fx <= y at level 1}.

    Works over enumerable skeletal categories; non-skeletal inputs are first
    quotiented by unit-level isomorphism with lowest-identifier
    representatives.  The achieved transposition defect is reported; it is
    the unit exactly when F preserves weighted joins.
    """
    dom, cod = F.domain, F.codomain
    Q = dom.quantale
    quotiented = False
    f_map = {x: F(x) for x in dom.objects()}
    if not isinstance(dom, FiniteQCategory):
        dom = FiniteQCategory(Q, dom.objects(), {(a, b): F.domain.hom(a, b)
                                                 for a in dom.objects() for b in dom.objects()})
    if not isinstance(cod, FiniteQCategory):
        cod = FiniteQCategory(Q, cod.objects(), {(a, b): F.codomain.hom(a, b)
                                                 for a in cod.objects() for b in cod.objects()})
    dom_sk, dom_rep = skeleton(dom)
    cod_sk, cod_rep = skeleton(cod)
    if len(dom_sk.objects()) != len(dom.objects()) or len(cod_sk.objects()) != len(cod.objects()):
        quotiented = True
    Fq = QFunctor(dom_sk, cod_sk, {x: cod_rep[f_map[x]] for x in dom_sk.objects()},
                  name=f"{F.name}~")
    LC = EnumerableLattice(dom_sk)
    table = {}
    for y in cod_sk.objects():
        below = [x for x in dom_sk.objects() if Q.leq(Q.unit, cod_sk.hom(Fq(x), y))]
        table[y] = LC.crisp_join(below)
    G = QFunctor(cod_sk, dom_sk, table, name=f"{F.name}^r")
    return SynthesisResult(
        right=G,
        defect=adjunction_defect(Fq, G),
        domain=dom_sk,
        codomain=cod_sk,
        quotiented=quotiented,
    )
