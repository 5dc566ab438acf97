"""Reverse translation: approximate colorings of the gadget graph back to
game strategies.

This is the constructive half of the equivalence.  A coloring strategy is
first symmetrized so every color-indexed quantity becomes invariant under
relabeling the three colors.  The control-triangle projections are then
compressed into six sandwich operators (one per color permutation), the
answer-carrying block cells are squeezed between them, and the resulting
6m positive contractions per question are rounded into an exact PVM whose
permutation-grouped sums are the recovered measurement operators.

Quality is tracked by four diagnostic families over the graph's named
triangles, prisms and edges (zeta, eta, xi, theta), and the explicit
constants tying commutators against the sandwich operators to those
diagnostics are certified on demand.  Constants that the analysis leaves
implicit are evaluated left-hand-side only and logged.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolation, ValidationError
from .forward import coloring_value
from .games import ColoringStrategy, GameStrategy, SyncGame
from .graphs import DELTA, GadgetGraph, vhat
from .linalg import commutator, identity, require_positive_contraction, two_norm
from .rounding import PERM3, InequalityReport, perturb_pvm

log = logging.getLogger(__name__)

#: Largest tolerated drift of the coloring value under symmetrization.
SYMMETRIZE_TOL = 1e-10

#: Largest tolerated spread between per-color evaluations of a diagnostic.
COLOR_SPREAD_TOL = 1e-10

#: Clamp window for the sandwich operators' spectra.
CONTRACTION_TOL = 1e-10


def _require_coverage(graph: GadgetGraph, cs: ColoringStrategy) -> None:
    missing = [v for v in graph.vertices if v not in cs.pvms]
    if missing:
        raise ValidationError(
            f"coloring strategy lacks PVMs for {len(missing)} graph "
            f"vertices, first {missing[0]!r}"
        )


def symmetrize(cs: ColoringStrategy, graph: GadgetGraph | None = None) -> ColoringStrategy:
    """Average over color relabelings by stacking permuted copies.

    The output acts on a space six times larger; its block for permutation
    sigma plays color `c` with the input's color `sigma(c)`.  Same-color
    products, joint probabilities and sum defects then agree for all three
    colors by construction.  When the target graph is supplied, the
    coloring value before and after is compared and must agree within
    SYMMETRIZE_TOL.
    """
    d = cs.d
    big = 6 * d
    pvms = {}
    for name, mats in cs.pvms.items():
        out = []
        for c in (1, 2, 3):
            stacked = np.zeros((big, big), dtype=np.complex128)
            for slot, perm in enumerate(PERM3):
                lo = slot * d
                stacked[lo:lo + d, lo:lo + d] = mats[perm[c - 1] - 1]
            out.append(stacked)
        pvms[name] = out
    result = ColoringStrategy(d=big, pvms=pvms)
    if graph is not None:
        _require_coverage(graph, cs)
        before = coloring_value(graph, cs).value
        after = coloring_value(graph, result).value
        if abs(after - before) > SYMMETRIZE_TOL:
            raise BoundViolation(
                f"symmetrization moved the coloring value from {before!r} "
                f"to {after!r}"
            )
    return result


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True, eq=False)
class Diagnostics:
    """Coloring-quality functionals of a symmetrized strategy.

    zeta maps each named triangle to the sum of same-color products over
    its ordered vertex pairs, eta to its three-projection sum defect, xi
    maps each named prism to the sum of its three rung products, and theta
    maps each graph edge to the product norm of its endpoint projections.
    Everything is evaluated at color 1 after checking that colors 2 and 3
    agree within COLOR_SPREAD_TOL.
    """

    zeta: dict
    eta: dict
    xi: dict
    theta: dict

    def theta_edge(self, u: str, v: str) -> float:
        """Theta for an edge named in either endpoint order."""
        for pair in ((u, v), (v, u)):
            if pair in self.theta:
                return self.theta[pair]
        raise ValidationError(f"no edge between {u!r} and {v!r}")


def _edge_products(graph: GadgetGraph, cs: ColoringStrategy) -> dict:
    """Color-1 product norm per edge, with color independence enforced."""
    theta = {}
    for u, v in graph.edges:
        pu, pv = cs.pvms[u], cs.pvms[v]
        vals = [two_norm(pu[c] @ pv[c]) for c in range(3)]
        spread = max(vals) - min(vals)
        if spread > COLOR_SPREAD_TOL:
            raise ValidationError(
                f"edge products at {u!r}~{v!r} depend on the color "
                f"(spread {spread:.3e}); symmetrize the strategy first"
            )
        theta[(u, v)] = vals[0]
    return theta


def _theta_at(theta: dict, u: str, v: str) -> float:
    for pair in ((u, v), (v, u)):
        if pair in theta:
            return theta[pair]
    raise AssertionError(f"gadget edge {u}~{v} missing from the edge table")


def _named_triangles(graph: GadgetGraph):
    yield ("delta",), DELTA
    for b in graph.blocks:
        for i in (1, 2, 3):
            yield ("row", i, b.alpha, b.x), b.row(i)
        for j in (1, 2, 3):
            yield ("col", j, b.alpha, b.x), b.col(j)
        yield ("top", b.alpha, b.x), b.t_triangle()
    for o in graph.orthos:
        for i in (1, 2, 3):
            yield ("qrow", i) + o.tup, o.row(i)
        for j in (1, 2, 3):
            yield ("qcol", j) + o.tup, o.col(j)


def _named_prisms(graph: GadgetGraph):
    for b in graph.blocks:
        yield ("top", b.alpha, b.x), tuple(zip(b.row(1), b.t_triangle()))
        for i, j in ((1, 2), (1, 3), (2, 3)):
            yield ("rows", i, j, b.alpha, b.x), tuple(zip(b.row(i), b.row(j)))


def compute_diagnostics(graph: GadgetGraph, cs: ColoringStrategy) -> Diagnostics:
    """Evaluate zeta/eta/xi/theta over the graph's named substructures.

    Expects a symmetrized strategy; a color-dependent input fails the
    independence checks with a ValidationError.  For every triangle the
    sum defect eta is certified against 3*sqrt(zeta).
    """
    _require_coverage(graph, cs)
    theta = _edge_products(graph, cs)
    one = identity(cs.d)
    zeta, eta, xi = {}, {}, {}
    for label, (u, v, w) in _named_triangles(graph):
        z = 2.0 * (
            _theta_at(theta, u, v) + _theta_at(theta, u, w) + _theta_at(theta, v, w)
        )
        sums = [
            two_norm(one - (cs.pvms[u][c] + cs.pvms[v][c] + cs.pvms[w][c]))
            for c in range(3)
        ]
        spread = max(sums) - min(sums)
        if spread > COLOR_SPREAD_TOL:
            raise ValidationError(
                f"triangle defect at {label!r} depends on the color "
                f"(spread {spread:.3e}); symmetrize the strategy first"
            )
        zeta[label] = z
        eta[label] = sums[0]
        InequalityReport(
            f"triangle sum defect at {label!r}", sums[0], 3.0 * math.sqrt(z)
        ).require()
    for label, rungs in _named_prisms(graph):
        xi[label] = math.fsum(_theta_at(theta, u, v) for u, v in rungs)
    return Diagnostics(zeta=zeta, eta=eta, xi=xi, theta=theta)


# ---------------------------------------------------------------------------
# control compressions


@dataclass(frozen=True, eq=False)
class ControlCompressions:
    """The six control sandwiches P_iA P_jB P_kC P_jB P_iA.

    Keyed by the color permutation (i, j, k); each operator is validated
    as a positive contraction, and the family's three almost-PVM bounds
    (sum defect, projection defect, cross products) are certified at
    construction time against the color-averaged control-triangle zeta.
    """

    operators: dict
    reports: tuple

    def operator(self, perm) -> np.ndarray:
        return self.operators[tuple(perm)]


def _zeta_color_average(cs: ColoringStrategy, names) -> float:
    """Color-averaged zeta of a triangle; defined for any strategy and
    equal to the color-1 zeta once the strategy is symmetrized."""
    u, v, w = names
    terms = [
        two_norm(cs.pvms[p][c] @ cs.pvms[q][c])
        for c in range(3)
        for p, q in ((u, v), (u, w), (v, w))
    ]
    return 2.0 * math.fsum(terms) / 3.0


def control_compressions(cs: ColoringStrategy) -> ControlCompressions:
    for letter in DELTA:
        if letter not in cs.pvms:
            raise ValidationError(
                f"coloring strategy lacks a PVM for control vertex {letter!r}"
            )
    operators = {}
    for perm in PERM3:
        i, j, k = perm
        pa = cs.pvms["A"][i - 1]
        pb = cs.pvms["B"][j - 1]
        pc = cs.pvms["C"][k - 1]
        s = pa @ pb @ pc @ pb @ pa
        require_positive_contraction(
            s, tol=CONTRACTION_TOL, what=f"control sandwich {perm}"
        )
        operators[perm] = s
    z_delta = _zeta_color_average(cs, DELTA)
    one = identity(cs.d)
    total = sum(operators[perm] for perm in PERM3)
    sum_report = InequalityReport(
        "control sandwich sum-to-1",
        two_norm(one - total),
        238.5 * z_delta,
    ).require()
    proj_report = InequalityReport(
        "control sandwich projection defect",
        math.fsum(
            two_norm(operators[perm] @ operators[perm] - operators[perm])
            for perm in PERM3
        ),
        72.0 * z_delta,
    ).require()
    cross_report = InequalityReport(
        "control sandwich cross products",
        math.fsum(
            two_norm(operators[p1] @ operators[p2])
            for p1 in PERM3
            for p2 in PERM3
            if p1 != p2
        ),
        36.0 * z_delta,
    ).require()
    return ControlCompressions(
        operators=operators, reports=(sum_report, proj_report, cross_report)
    )


# ---------------------------------------------------------------------------
# lemma certification


def _commutator_rhs(graph: GadgetGraph, diag: Diagnostics, m: int, a: int, x: int) -> float:
    """Explicit bound on ||[P_{i,vhat(a,x)}, S_{i,j,k}]||_2, by answer class."""
    sd = math.sqrt(diag.zeta[("delta",)])
    th = diag.theta_edge
    res = graph.resolve
    if a == 1:
        return (
            54.0 * sd
            + 48.0 * math.sqrt(diag.zeta[("row", 1, 1, x)])
            + 32.0 * diag.xi[("top", 1, x)]
            + 36.0 * th(res(vhat(1, x, m)), "B")
        )
    if a < m:
        al = a - 1
        return (
            24.0 * sd
            + 72.0 * math.sqrt(diag.zeta[("row", 1, al, x)])
            + 84.0 * math.sqrt(diag.zeta[("row", 2, al, x)])
            + 56.0 * diag.xi[("rows", 1, 2, al, x)]
            + 16.0 * th(res(vhat(a, x, m)), "C")
        )
    al = m - 2
    cells = graph.block(al, x).cells
    return (
        66.0 * sd
        + 66.0 * math.sqrt(diag.zeta[("row", 2, al, x)])
        + 84.0 * math.sqrt(diag.zeta[("row", 1, al, x)])
        + 32.0 * diag.xi[("rows", 1, 2, al, x)]
        + 4.0 * th(res(vhat(m - 1, x, m)), "C")
        + 18.0 * math.sqrt(diag.zeta[("col", 3, al, x)])
        + 32.0 * diag.xi[("top", al, x)]
        + 12.0 * th(cells[(2, 1)], "C")
        + 2.0 * th(cells[(3, 3)], "A")
        + 24.0 * th(res(vhat(m, x, m)), "B")
    )


def _question_sandwiches(
    graph: GadgetGraph, cs: ColoringStrategy, cc: ControlCompressions, x: int, m: int
):
    """The 6m operators S P_{i,vhat(a,x)} S, ordered by (answer, permutation)."""
    ops = []
    for a in range(1, m + 1):
        block = cs.pvms[graph.resolve(vhat(a, x, m))]
        for perm in PERM3:
            s = cc.operators[perm]
            ops.append(s @ block[perm[0] - 1] @ s)
    return ops


def certify_reverse_lemmas(
    game: SyncGame, graph: GadgetGraph, cs: ColoringStrategy
) -> list:
    """Measure every reverse-direction inequality on one coloring strategy.

    Returns the control-sandwich family bounds, one commutator report per
    (answer, question) pair with its explicit diagnostic-based constant,
    and per-question lhs-only reports (rhs infinity) for the quantities
    whose constants the analysis leaves implicit.  Explicit bounds are
    certified; a violation raises BoundViolation.
    """
    if graph.game != game:
        raise ValidationError("graph was compiled from a different game")
    _require_coverage(graph, cs)
    sym = symmetrize(cs, graph)
    diag = compute_diagnostics(graph, sym)
    cc = control_compressions(sym)
    reports = list(cc.reports)
    m = game.m
    for x in range(1, game.n + 1):
        for a in range(1, m + 1):
            target = sym.pvms[graph.resolve(vhat(a, x, m))]
            lhs = max(
                two_norm(commutator(target[perm[0] - 1], cc.operators[perm]))
                for perm in PERM3
            )
            reports.append(
                InequalityReport(
                    f"sandwich commutator (answer {a}, question {x})",
                    lhs,
                    _commutator_rhs(graph, diag, m, a, x),
                ).require()
            )
    one = identity(sym.d)
    for x in range(1, game.n + 1):
        ops = _question_sandwiches(graph, sym, cc, x, m)
        total = sum(ops)
        quantities = (
            ("sandwich family sum defect", two_norm(one - total)),
            (
                "sandwich family projection defect",
                math.fsum(two_norm(op @ op - op) for op in ops),
            ),
            (
                "sandwich family cross products",
                math.fsum(
                    two_norm(ops[p] @ ops[q])
                    for p in range(len(ops))
                    for q in range(len(ops))
                    if p != q
                ),
            ),
        )
        for label, value in quantities:
            log.info("question %d: %s %.12g", x, label, value)
            reports.append(
                InequalityReport(f"{label} (question {x}; lhs only)", value, math.inf)
            )
    return reports


# ---------------------------------------------------------------------------
# the translation itself


def reverse_translate(
    game: SyncGame, graph: GadgetGraph, cs: ColoringStrategy
) -> GameStrategy:
    """Round a coloring strategy into measurements for the original game.

    Pipeline: symmetrize, build the control sandwiches, squeeze each
    answer cell between them (6m positive contractions per question,
    ordered by answer then permutation), round the family into an exact
    PVM, and sum each answer's six permutation blocks into one projection.
    The output satisfies the exact PVM invariants for every question.
    """
    if graph.game != game:
        raise ValidationError("graph was compiled from a different game")
    _require_coverage(graph, cs)
    sym = symmetrize(cs, graph)
    cc = control_compressions(sym)
    m = game.m
    pvms = {}
    for x in range(1, game.n + 1):
        ops = _question_sandwiches(graph, sym, cc, x, m)
        total = sum(ops)
        top = float(np.linalg.eigvalsh(0.5 * (total + total.conj().T))[-1])
        log.info("question %d: sandwich sum max eigenvalue %.12g", x, top)
        rounded = perturb_pvm(ops)
        pvms[x] = [
            sum(rounded[(a - 1) * len(PERM3) + r] for r in range(len(PERM3)))
            for a in range(1, m + 1)
        ]
    return GameStrategy(d=sym.d, pvms=pvms)


def aggregate_offcolor_estimate(
    graph: GadgetGraph, cs: ColoringStrategy
) -> InequalityReport:
    """Certify the root-sum of edge defects against the coloring loss.

    For a symmetrized strategy with coloring value 1 - eps, the sum over
    edges of theta^(1/2) is at most 2|E| eps^(1/4).
    """
    _require_coverage(graph, cs)
    theta = _edge_products(graph, cs)
    value = coloring_value(graph, cs).value
    eps = max(0.0, 1.0 - value)
    lhs = math.fsum(math.sqrt(theta[edge]) for edge in graph.edges)
    rhs = 2.0 * graph.n_edges * eps**0.25
    return InequalityReport("aggregate off-color estimate", lhs, rhs).require()
