"""Invasion relays over the siphon lattice.

A cover (lower, upper) of lattice nodes is read as a possible hand-off: a
community resting on the upper face (more coordinates zero) is invaded along
the directions sigma = upper - lower, and the question is whether a stable
community on the lower face is there to receive it. relay_test_cover answers
this per resident equilibrium with exact arithmetic and aggregates the
verdicts; relay_graph repeats the test over every cover and assembles the
directed hand-off structure.

relay_test_cover_strict reproduces a more conservative convention some
reference analyses use: only rational equilibria participate, the invasion
abscissa must be a rational number (an irrational leading eigenvalue aborts
the whole test as Undecided, even though the sign would be computable), and
a successor counts only when the full Jacobian passes the Hurwitz test in
one piece. Keep it for cross-checking; prefer the refined test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .equilibria import (FaceEquilibrium, _deflate, _rational_root,
                         face_equilibria, positivity_check)
from .errors import BadCover
from .linalg import UniPoly, char_poly, hurwitz_test, quad_solve
from .network import Model
from .scalars import ExactScalar, exact
from .stability import (invasion_number, jacobian_at, las_test,
                        transversal_block, _scc)

_PRIORITY = ("RelayHolds", "Undecided", "SuccessorExistsUnstable",
             "NoSuccessor", "NoInvasion")


@dataclass(frozen=True)
class ResidentReport:
    resident: FaceEquilibrium
    abscissa: str                     # sign of the invasion abscissa
    rho: Optional[ExactScalar]
    verdict: str
    stable_successor: Optional[FaceEquilibrium] = None
    successors: tuple[FaceEquilibrium, ...] = ()
    tangential: Optional[str] = None  # within-face stability, evaluated lazily
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class RelayReport:
    sigma: frozenset                  # resident face (upper node)
    sigma_prime: frozenset            # successor face (lower node)
    invading: tuple[str, ...]
    verdict: str
    residents: tuple[ResidentReport, ...]
    notes: tuple[str, ...] = ()


def _check_cover(m: Model, sigma, sigma_prime) -> tuple[frozenset, frozenset]:
    lat = m.lattice()
    up = frozenset(sigma)
    low = frozenset(sigma_prime)
    if (low, up) not in lat.covers:
        raise BadCover(f"({lat.label(low)}, {lat.label(up)}) is not a cover "
                       "of the siphon lattice")
    return up, low


def relay_test_cover(m: Model, sigma, sigma_prime,
                     params: Mapping[str, Fraction] | None = None) -> RelayReport:
    '''Exact relay test for one lattice cover.

    For every inhabited equilibrium on the upper face: if the invading block
    has negative abscissa the resident repels the invader (NoInvasion); if it
    is positive, the lower face is searched for an inhabited equilibrium, and
    the verdict reports whether a locally stable one exists (RelayHolds),
    only unstable ones do (SuccessorExistsUnstable), or none at all
    (NoSuccessor, in which case the resident's within-face stability is also
    evaluated and reported).
    '''
    up, low = _check_cover(m, sigma, sigma_prime)
    sdiff = tuple(m.sort_vars(up - low))
    notes: list[str] = []
    all_up = face_equilibria(m, up, params)
    residents = [e for e in all_up if e.is_decided and positivity_check(e).exists]
    undecided_up = [e for e in all_up if not e.is_decided]
    reports: list[ResidentReport] = []
    lower_cache: Optional[list[FaceEquilibrium]] = None

    for e in undecided_up:
        reports.append(ResidentReport(e, "Unknown", None, "Undecided",
                                      notes=(e.reason or "undecided resident",)))
    if not residents and not undecided_up:
        notes.append("resident face is uninhabited")

    for e in residents:
        inv = invasion_number(m, sdiff, e, params)
        rnotes = list(inv.notes)
        if inv.abscissa_sign == "Negative":
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "NoInvasion", notes=tuple(rnotes)))
            continue
        if inv.abscissa_sign == "Zero":
            rnotes.append("invasion block sits on the stability boundary")
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "NoInvasion", notes=tuple(rnotes)))
            continue
        if inv.abscissa_sign == "Unknown":
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "Undecided", notes=tuple(rnotes)))
            continue
        if lower_cache is None:
            lower_cache = face_equilibria(m, low, params)
        succ = [s for s in lower_cache
                if s.is_decided and positivity_check(s).exists]
        undecided_low = [s for s in lower_cache if not s.is_decided]
        stable = None
        for s in succ:
            if las_test(m, s, params).verdict == "LAS":
                stable = s
                break
        if stable is not None:
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "RelayHolds", stable, tuple(succ),
                                          notes=tuple(rnotes)))
        elif succ:
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "SuccessorExistsUnstable", None,
                                          tuple(succ), notes=tuple(rnotes)))
        elif undecided_low:
            rnotes.append("successor face has undecided candidates")
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "Undecided", notes=tuple(rnotes)))
        else:
            tang = _tangential_verdict(m, e, sdiff, params)
            reports.append(ResidentReport(e, inv.abscissa_sign, inv.rho,
                                          "NoSuccessor", None, (),
                                          tang, tuple(rnotes)))

    verdict = "NoInvasion"
    for v in _PRIORITY:
        if any(r.verdict == v for r in reports):
            verdict = v
            break
    return RelayReport(up, low, sdiff, verdict, tuple(reports), tuple(notes))


def _tangential_verdict(m: Model, e: FaceEquilibrium, sdiff,
                        params: Mapping[str, Fraction] | None) -> str:
    '''Stability of the resident within its own face: the Jacobian restricted
    to the non-invading directions, split into strongly connected blocks.'''
    keep = [i for i, v in enumerate(m.variables) if v not in sdiff]
    J = jacobian_at(m, e.coords, params)
    sub = [[J[i][j] for j in keep] for i in keep]
    comps = _scc([[not x.is_zero for x in row] for row in sub])
    verdicts = []
    for comp in comps:
        idx = sorted(comp)
        block = [[sub[i][j] for j in idx] for i in idx]
        verdicts.append(hurwitz_test(char_poly(block)).verdict)
    if any(v == "NotHurwitz" for v in verdicts):
        return "Unstable"
    if any(v == "Boundary" for v in verdicts):
        return "Boundary"
    return "Stable"


# ---------------------------------------------------------------------------
# strict reference emulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrictRelayReport:
    sigma: frozenset
    sigma_prime: frozenset
    verdict: str                      # "RelayHolds" | "NoRelay" | "Undecided"
    trace: tuple[str, ...]


def relay_test_cover_strict(m: Model, sigma, sigma_prime,
                            params: Mapping[str, Fraction] | None = None
                            ) -> StrictRelayReport:
    '''Conservative relay test restricted to rational data (see module
    docstring). An irrational leading eigenvalue of the invasion block stops
    the test immediately with Undecided.'''
    up, low = _check_cover(m, sigma, sigma_prime)
    sdiff = tuple(m.sort_vars(up - low))
    trace: list[str] = []
    residents = [e for e in face_equilibria(m, up, params)
                 if e.is_decided and e.classification == "Rational"
                 and positivity_check(e).exists]
    if not residents:
        trace.append("no rational inhabited resident on the upper face")
    successors = None
    for e in residents:
        M = transversal_block(m, sdiff, e.coords, params)
        alpha = _rational_abscissa(M)
        if alpha is None:
            trace.append(f"{e.name or 'resident'}: leading eigenvalue of the "
                         "invasion block is not rational")
            return StrictRelayReport(up, low, "Undecided", tuple(trace))
        if alpha.sign() <= 0:
            trace.append(f"{e.name or 'resident'}: abscissa {alpha} <= 0")
            continue
        trace.append(f"{e.name or 'resident'}: abscissa {alpha} > 0")
        if successors is None:
            successors = [s for s in face_equilibria(m, low, params)
                          if s.is_decided and s.classification == "Rational"
                          and positivity_check(s).exists
                          and all(s.coords[v].sign() > 0 for v in sdiff)]
        for s in successors:
            rep = hurwitz_test(char_poly(jacobian_at(m, s.coords, params)))
            if rep.is_hurwitz:
                trace.append(f"successor {s.name or '?'} passes the full "
                             "Hurwitz test")
                return StrictRelayReport(up, low, "RelayHolds", tuple(trace))
            trace.append(f"successor {s.name or '?'} fails the full Hurwitz test")
        if not successors:
            trace.append("no rational successor with positive invading coordinates")
    return StrictRelayReport(up, low, "NoRelay", tuple(trace))


def _rational_abscissa(M) -> Optional[ExactScalar]:
    '''Largest real eigenvalue part, but only when it is rational; None as
    soon as an irrational candidate could be the leading one.'''
    p = char_poly(M)
    if not all(c.is_rational for c in p.coeffs):
        return None
    coeffs = [c.to_fraction() for c in p.coeffs]
    roots: list[Fraction] = []
    while len(coeffs) - 1 > 2:
        r = _rational_root(coeffs)
        if r is None:
            return None
        roots.append(r)
        coeffs = _deflate(coeffs, r)
    if len(coeffs) - 1 >= 1:
        rs = quad_solve(UniPoly.make(coeffs))
        if rs.kind == "NoRealRoot":
            roots.append(Fraction(-coeffs[1], 2 * coeffs[2]))
        elif rs.kind == "QuadExt":
            return None
        else:
            roots.extend(r.to_fraction() for r in rs.roots)
    if not roots:
        return None
    return exact(max(roots))


# ---------------------------------------------------------------------------
# the relay graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphNode:
    face: frozenset
    label: str
    residents: tuple[str, ...]
    inhabited: bool


@dataclass(frozen=True)
class GraphEdge:
    source: frozenset
    target: frozenset
    invading: tuple[str, ...]
    residents: tuple[str, ...]        # residents whose invasion is positive
    kind: str                         # "full" | "multiple" | "cross-branch"


@dataclass(frozen=True)
class RelayGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]

    def node(self, face) -> GraphNode:
        face = frozenset(face)
        for n in self.nodes:
            if n.face == face:
                return n
        raise KeyError(face)

    def to_dot(self) -> str:
        style = {"full": "solid", "multiple": "dashed", "cross-branch": "dotted"}
        lines = ["digraph relay {", "  rankdir=LR;"]
        for n in self.nodes:
            attrs = [f'label="{n.label}"']
            if not n.inhabited:
                attrs.append('color="gray"')
                attrs.append('fontcolor="gray"')
            lines.append(f'  "{n.label}" [{" ".join(attrs)}];')
        for e in self.edges:
            src = self.node(e.source).label
            dst = self.node(e.target).label
            lines.append(f'  "{src}" -> "{dst}" [style={style[e.kind]} '
                         f'label="{",".join(e.invading)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def relay_graph(m: Model, params: Mapping[str, Fraction] | None = None) -> RelayGraph:
    '''Hand-off structure over all lattice covers at one parameter point.

    Nodes are the lattice faces plus the interior; an edge runs along a cover
    whenever an inhabited resident on the upper face is invadable. Edge kinds:
    "full" when that resident has exactly one unstable transversal direction,
    "multiple" when it has several, and "cross-branch" when the invading
    directions lie outside every multi-species minimal siphon while the
    resident already carries multi-species content (the hand-off switches the
    platform branch and drags the standing community along).
    '''
    lat = m.lattice()
    faces = list(lat.nodes) + [frozenset()]
    strain_union = frozenset().union(*[s for s in lat.minimal if len(s) >= 2]) \
        if any(len(s) >= 2 for s in lat.minimal) else frozenset()

    residents: dict[frozenset, list[FaceEquilibrium]] = {}
    for face in faces:
        residents[face] = [e for e in face_equilibria(m, face, params)
                           if e.is_decided and positivity_check(e).exists]

    # count unstable transversal directions per resident
    unstable: dict[tuple[frozenset, int], list[tuple[frozenset, tuple[str, ...]]]] = {}
    for low, up in lat.covers:
        if up not in residents:
            continue
        sdiff = tuple(m.sort_vars(up - low))
        for k, e in enumerate(residents[up]):
            inv = invasion_number(m, sdiff, e, params)
            if inv.abscissa_sign == "Positive":
                unstable.setdefault((up, k), []).append((low, sdiff))

    def facekey(f):
        return (-len(f), lat.label(f))

    nodes = []
    for face in sorted(faces, key=facekey):
        names = tuple(e.name or lat.label(face) for e in residents[face])
        label = "/".join(dict.fromkeys(names)) if names else lat.label(face)
        nodes.append(GraphNode(face, label, names, bool(names)))

    edges = []
    for low, up in sorted(lat.covers, key=lambda c: (facekey(c[1]), facekey(c[0]))):
        sdiff = tuple(m.sort_vars(up - low))
        contributing = []
        kinds = []
        for k, e in enumerate(residents.get(up, [])):
            hits = unstable.get((up, k), [])
            if not any(l == low for l, _ in hits):
                continue
            contributing.append(e.name or lat.label(up))
            cross = (not (set(sdiff) & strain_union)
                     and any(e.coords[v].sign() > 0 for v in strain_union))
            kinds.append("cross-branch" if cross
                         else ("full" if len(hits) == 1 else "multiple"))
        if contributing:
            edges.append(GraphEdge(up, low, sdiff, tuple(contributing), kinds[0]))
    return RelayGraph(tuple(nodes), tuple(edges))
