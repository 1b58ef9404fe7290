"""Coloring of special links, the surgery invariant, and Kirby moves.

The canonical coloring transports a base simple label around each
component from a coupon site: arc labels are the transported images,
crossing colors are the canonical phi_2-composites attached to the
accumulated transport word, and the coupon absorbs the holonomy so the
associated endomorphism is the identity (times an optional scalar).
The transport closes up exactly because the flat structure is special.

The invariant of a surgered manifold is

    tau = Delta_-^sigma * D^(-sigma - #components - 1) * F

with F the omega-colored link form (the dimension-weighted sum of the
canonical-coloring evaluations over base labels of the grades cut out
by the flat structure), sigma the signature of the linking matrix, and
D the chosen rank.

Kirby moves operate on skeletons: adding a distant +-1-framed unknot
with trivial structure, the negative handle-slide move (full left twist
of a bundle of upward strands plus a -1-framed circle around it, with
the flat structure transported through the surgery), and orientation
reversal of a component.  The transported structures are re-verified;
a failure to re-verify is reported as an error rather than patched.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .category import CategoryData
from .cyclotomic import CycNumber
from .diagram import ColoredDiagram, Piece, coupon, crossing_block, id_piece, tensor
from .evaluate import evaluate
from .fusion import modular_report
from .links import (
    End,
    GLinkPresentation,
    LinkError,
    SPiece,
    check_flat_structure,
    component_walk,
    linking_data,
    signature_of_symmetric,
    skel_cap_l,
    skel_cap_r,
    skel_cross,
    skel_cup_l,
    skel_cup_r,
    skel_id,
)


# ---------------------------------------------------------------------
# Canonical coloring
# ---------------------------------------------------------------------


def coupon_site(link: GLinkPresentation, comp: int, override: str | None = None) -> str:
    """The arc carrying the component's coupon: the override, or the
    first arc of the component (document order) that crosses a slice
    boundary upward; failing that, the first that crosses at all."""
    if override is not None:
        if link.arc_comp.get(override) != comp:
            raise LinkError(f"override arc {override} is not on component {comp}")
        return override
    arcs = [a for a in link.arcs() if link.arc_comp[a] == comp]
    levels: list[tuple[End, ...]] = [()]
    for sl in link.slices:
        nxt: list[End] = []
        for p in sl:
            nxt.extend(p.target())
        levels.append(tuple(nxt))
    for a in arcs:
        if any((a, +1) in level for level in levels):
            return a
    return arcs[0]


def _site_position(link: GLinkPresentation, arc: str) -> tuple[int, int, int]:
    """(level, position, direction) of the first boundary crossing of
    the arc, preferring upward crossings."""
    levels: list[tuple[End, ...]] = [()]
    for sl in link.slices:
        nxt: list[End] = []
        for p in sl:
            nxt.extend(p.target())
        levels.append(tuple(nxt))
    fallback: tuple[int, int, int] | None = None
    for k, level in enumerate(levels):
        for i, (a, d) in enumerate(level):
            if a == arc:
                if d > 0:
                    return k, i, d
                if fallback is None:
                    fallback = (k, i, d)
    if fallback is None:
        raise LinkError(f"arc {arc} never crosses a slice boundary")
    return fallback


def transport(
    link: GLinkPresentation, data: CategoryData, sites: dict[int, str]
) -> tuple[dict[str, str], dict[int, list[tuple[SPiece, str]]]]:
    """For each component, walk from its coupon site and accumulate the
    transport word.  Returns (g(delta) per arc, per-component passage
    list of (crossing piece, g(delta) on the relevant over side))."""
    G = data.group
    gdelta: dict[str, str] = {}
    passages: dict[int, list[tuple[SPiece, str]]] = {}
    for comp in link.components():
        site = sites[comp]
        gdelta[site] = G.unit
        cur = G.unit
        steps = []
        for arc_entered, piece, sign in component_walk(link, comp, start_arc=site):
            (_, _), under = piece.over_under()
            gu = link.arc_g[under]
            before = cur
            cur = G.mul(G.inv(gu) if sign > 0 else gu, cur)
            if arc_entered != site:
                if arc_entered in gdelta and gdelta[arc_entered] != cur:
                    raise LinkError("inconsistent transport (arc revisited)")
                gdelta[arc_entered] = cur
            # the canonical crossing color is attached to the side the
            # phi_2 composite reads: in-side for positive, out for negative
            steps.append((piece, before if sign > 0 else cur))
        passages[comp] = steps
    return gdelta, passages


def canonical_coloring(
    link: GLinkPresentation,
    base: dict[int, str],
    data: CategoryData,
    site_overrides: dict[int, str] | None = None,
    coupon_scalars: dict[int, CycNumber] | None = None,
) -> ColoredDiagram:
    """Insert one identity coupon per component and color the diagram
    by transporting the base labels; the result passes validation and
    is ready for evaluation."""
    report = check_flat_structure(link, data)
    if not report.passed:
        raise LinkError(
            "link is not a special flat structure: "
            + "; ".join(str(v) for v in report.violations[:3])
        )
    G, L = data.group, data.labels
    overrides = site_overrides or {}
    sites = {c: coupon_site(link, c, overrides.get(c)) for c in link.components()}
    for comp, site in sites.items():
        x = base[comp]
        if data.grade[x] != link.arc_g[site]:
            raise LinkError(
                f"base label {x} has grade {data.grade[x]} but the coupon "
                f"site arc {site} carries {link.arc_g[site]}"
            )
    gdelta, passages = transport(link, data, sites)

    def label(arc: str) -> str:
        comp = link.arc_comp[arc]
        return data.act(G.inv(gdelta[arc]), base[comp])

    # crossing colors, keyed by identity of the crossing piece instance
    chi: dict[int, CycNumber] = {}
    for comp, steps in passages.items():
        for piece, gside in steps:
            (_, _), under = piece.over_under()
            gu = link.arc_g[under]
            chi[id(piece)] = data.p2(gu, G.inv(gside), base[comp]).inverse()

    scalars = coupon_scalars or {}
    site_pos = {c: _site_position(link, sites[c]) for c in link.components()}

    out = ColoredDiagram.identity(data, ())
    for k, sl in enumerate(link.slices):
        # coupons scheduled at this boundary level
        for comp in sorted(site_pos, key=lambda c: site_pos[c][1]):
            lvl, pos, dr = site_pos[comp]
            if lvl != k:
                continue
            b = out.target
            x = base[comp]
            pieces: list[Piece] = [id_piece(a, s) for a, s in b]
            pieces[pos] = coupon(
                ((x, dr),), ((x, dr),), scalars.get(comp, data.one())
            )
            out = ColoredDiagram.from_slices(data, out.source, list(out.slices) + [pieces])
        row = None
        for p in sl:
            block = _compile_piece(p, data, label, chi)
            row = block if row is None else tensor(row, block)
        if row is not None:
            out = ColoredDiagram.from_slices(
                data, out.source, list(out.slices) + list(row.slices)
            )
    return out


def _compile_piece(
    p: SPiece, data: CategoryData, label, chi: dict[int, CycNumber]
) -> ColoredDiagram:
    k = p.kind
    if k == "id":
        piece = id_piece(label(p.arc), p.dir)
    elif k == "capR":
        piece = Piece("capR", (label(p.arc),))
    elif k == "capL":
        piece = Piece("capL", (label(p.arc),))
    elif k == "cupR":
        piece = Piece("cupR", (label(p.arc),))
    elif k == "cupL":
        piece = Piece("cupL", (label(p.arc),))
    elif k == "cross":
        left = (label(p.lb[0]), p.lb[1])
        right = (label(p.rb[0]), p.rb[1])
        return crossing_block(data, p.sign, left, right, chi[id(p)])
    else:
        raise LinkError(f"unknown skeleton piece {k!r}")
    return ColoredDiagram.from_slices(data, piece.source(data), [[piece]])


# ---------------------------------------------------------------------
# The link form and the invariant
# ---------------------------------------------------------------------


def link_form_terms(
    link: GLinkPresentation,
    data: CategoryData,
    site_overrides: dict[int, str] | None = None,
) -> list[tuple[dict[int, str], CycNumber]]:
    """All coloring terms of F(link, g, omega): one row per base-label
    tuple, with the dimension-weighted evaluation."""
    comps = link.components()
    overrides = site_overrides or {}
    sites = {c: coupon_site(link, c, overrides.get(c)) for c in comps}
    choices: list[list[str]] = []
    for c in comps:
        grade_needed = link.arc_g[sites[c]]
        labels = data.labels_of_grade(grade_needed)
        if not labels:
            raise LinkError(f"no simple labels of grade {grade_needed}")
        choices.append(labels)
    rows: list[tuple[dict[int, str], CycNumber]] = []

    def rec(i: int, assignment: dict[int, str]) -> None:
        if i == len(comps):
            weight = data.one()
            for c in comps:
                weight = weight * data.d(assignment[c])
            value = evaluate(
                canonical_coloring(link, assignment, data, site_overrides)
            ).value
            rows.append((dict(assignment), weight * value))
            return
        for x in choices[i]:
            assignment[comps[i]] = x
            rec(i + 1, assignment)
        del assignment[comps[i]]

    rec(0, {})
    return rows


def link_form(
    link: GLinkPresentation,
    data: CategoryData,
    site_overrides: dict[int, str] | None = None,
) -> CycNumber:
    total = data.zero()
    for _, v in link_form_terms(link, data, site_overrides):
        total = total + v
    return total


@dataclass(frozen=True)
class SurgeryInvariantReport:
    F_value: CycNumber
    tau: CycNumber
    sigma: int
    num_components: int
    linking_matrix: tuple[tuple[int, ...], ...]
    terms: tuple[tuple[tuple[tuple[int, str], ...], CycNumber], ...] = ()


def tau(
    link: GLinkPresentation,
    data: CategoryData,
    with_terms: bool = False,
) -> SurgeryInvariantReport:
    """tau = Delta_-^sigma * D^(-sigma - n - 1) * F(link, g, omega)."""
    B, sigma, n = linking_data(link)
    rows = link_form_terms(link, data)
    F = data.zero()
    for _, v in rows:
        F = F + v
    mr = modular_report(data)
    value = mr.delta_minus**sigma * data.rankD ** (-sigma - n - 1) * F
    terms = ()
    if with_terms:
        terms = tuple(
            (tuple(sorted(a.items())), v) for a, v in rows
        )
    return SurgeryInvariantReport(
        F_value=F,
        tau=value,
        sigma=sigma,
        num_components=n,
        linking_matrix=tuple(tuple(r) for r in B),
        terms=terms,
    )


# ---------------------------------------------------------------------
# Link builders
# ---------------------------------------------------------------------


def empty_link() -> GLinkPresentation:
    return GLinkPresentation((), {}, {})


def unknot(framing: int, g: str = "e", comp: int = 0, prefix: str = "a") -> GLinkPresentation:
    """A framed unknot presented with |framing| curls of the matching
    sign; the meridian carries the G-element ``g``."""
    p = abs(framing)
    sign = 1 if framing > 0 else -1
    if p == 0:
        a = f"{prefix}0"
        slices = ((skel_cup_l(a),), (skel_cap_r(a),))
        return GLinkPresentation(slices, {a: comp}, {a: g})
    arcs = [f"{prefix}{i}" for i in range(p)]
    slices: list[tuple[SPiece, ...]] = [(skel_cup_l(arcs[0]),)]
    for j in range(p):
        cur, nxt = arcs[j], arcs[(j + 1) % p]
        under = cur if sign > 0 else nxt
        slices.append((skel_id(arcs[0], -1), skel_cup_l(under), skel_id(cur, +1)))
        slices.append(
            (
                skel_id(arcs[0], -1),
                skel_id(under, -1),
                skel_cross(sign, cur, nxt, under, +1, +1),
            )
        )
        slices.append((skel_id(arcs[0], -1), skel_cap_r(under), skel_id(nxt, +1)))
    slices.append((skel_cap_r(arcs[0]),))
    return GLinkPresentation(
        tuple(slices), {a: comp for a in arcs}, {a: g for a in arcs}
    )


def hopf_link(
    g1: str = "e", g2: str = "e", comp_ids: tuple[int, int] = (0, 1)
) -> GLinkPresentation:
    """The positive Hopf link with 0-framed components."""
    a, b = "a0", "b0"
    slices = (
        (skel_cup_l(a),),
        (skel_id(a, -1), skel_id(a, +1), skel_cup_r(b)),
        (skel_id(a, -1), skel_cross(+1, a, a, b, +1, +1), skel_id(b, -1)),
        (skel_id(a, -1), skel_cross(+1, b, b, a, +1, +1), skel_id(b, -1)),
        (skel_id(a, -1), skel_id(a, +1), skel_cap_l(b)),
        (skel_cap_r(a),),
    )
    return GLinkPresentation(
        slices,
        {a: comp_ids[0], b: comp_ids[1]},
        {a: g1, b: g2},
    )


def disjoint_union(l1: GLinkPresentation, l2: GLinkPresentation) -> GLinkPresentation:
    """Stack two closed skeletons (distant disjoint union)."""
    used = set(l1.arcs())
    ren = {}
    for a in l2.arcs():
        na = a
        while na in used:
            na = na + "'"
        ren[a] = na
        used.add(na)
    comp_shift = (max(l1.components()) + 1) if l1.components() else 0

    def rn(e: End) -> End:
        return (ren[e[0]], e[1]) if e[0] else e

    new_slices = []
    for sl in l2.slices:
        row = []
        for p in sl:
            if p.kind == "cross":
                row.append(
                    SPiece(
                        "cross",
                        sign=p.sign,
                        lb=rn(p.lb),
                        rb=rn(p.rb),
                        lt=rn(p.lt),
                        rt=rn(p.rt),
                    )
                )
            else:
                row.append(SPiece(p.kind, arc=ren[p.arc], dir=p.dir))
        new_slices.append(tuple(row))
    slices = l1.slices + tuple(new_slices)
    arc_comp = dict(l1.arc_comp)
    arc_g = dict(l1.arc_g)
    for a in l2.arcs():
        arc_comp[ren[a]] = l2.arc_comp[a] + comp_shift
        arc_g[ren[a]] = l2.arc_g[a]
    return GLinkPresentation(slices, arc_comp, arc_g)
