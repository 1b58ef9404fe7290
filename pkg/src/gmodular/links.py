"""Framed links with flat G-structures, presented as sliced closed
diagram skeletons.

A skeleton is a sliced word like a colored diagram, but the strands
carry arc names instead of labels.  Arcs are the maximal strand
segments between overcrossing points: a strand keeps its arc while
passing under, and changes arc exactly where it passes over another
strand (this is where its transported color, and its G-value, jump).
Each arc belongs to a link component and carries a G-element; the
family of G-elements encodes the flat structure, evaluated on the
arcs' meridians.

Wirtinger consistency: along the over-strand of a crossing of sign s,
  g(out-arc) = g(under)^(-s) * g(in-arc) * g(under)^(s).
The framed-longitude word of a component collects g(under)^(-s) by left
multiplication at the component's over-passages, in walk order; with
blackboard framing the self-passages contribute the framing.  The
structure is special when every framed longitude maps to 1, which is
exactly the condition for the color transport to close up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .category import CategoryData
from .checks import AxiomReport
from .cyclotomic import CycNumber
from .diagram import (
    ColoredDiagram,
    Piece,
    cap_l,
    cap_r,
    coupon,
    crossing_block,
    cup_l,
    cup_r,
    id_piece,
    tensor,
)

End = tuple[str, int]  # (arc name, direction: +1 up, -1 down)

# (sign, left dir, right dir) combinations where the over-strand is the
# one entering at the bottom left
_OVER_LEFT = {(+1, +1, +1), (-1, -1, +1), (-1, +1, -1), (+1, -1, -1)}


class LinkError(ValueError):
    pass


@dataclass(frozen=True)
class SPiece:
    """Skeleton piece.  For ``cross`` the four strand ends are explicit:
    lb/rb bottom, lt/rt top; strands swap sides (lt continues rb, rt
    continues lb)."""

    kind: str  # id, capR, capL, cupR, cupL, cross
    arc: str = ""
    dir: int = +1
    sign: int = 0
    lb: End = ("", 0)
    rb: End = ("", 0)
    lt: End = ("", 0)
    rt: End = ("", 0)

    def source(self) -> tuple[End, ...]:
        k = self.kind
        if k == "id":
            return ((self.arc, self.dir),)
        if k == "capR":
            return ((self.arc, -1), (self.arc, +1))
        if k == "capL":
            return ((self.arc, +1), (self.arc, -1))
        if k in ("cupR", "cupL"):
            return ()
        if k == "cross":
            return (self.lb, self.rb)
        raise LinkError(f"unknown skeleton piece {k!r}")

    def target(self) -> tuple[End, ...]:
        k = self.kind
        if k == "id":
            return ((self.arc, self.dir),)
        if k in ("capR", "capL"):
            return ()
        if k == "cupR":
            return ((self.arc, +1), (self.arc, -1))
        if k == "cupL":
            return ((self.arc, -1), (self.arc, +1))
        if k == "cross":
            return (self.lt, self.rt)
        raise LinkError(f"unknown skeleton piece {k!r}")

    def over_left(self) -> bool:
        assert self.kind == "cross"
        return (self.sign, self.lb[1], self.rb[1]) in _OVER_LEFT

    def over_under(self) -> tuple[tuple[str, str], str]:
        """((over_in_arc, over_out_arc), under_arc); in/out taken along
        the over-strand's own direction."""
        assert self.kind == "cross"
        if self.over_left():
            under = self.rb[0]
            dl = self.lb[1]
            pair = (self.lb[0], self.rt[0]) if dl > 0 else (self.rt[0], self.lb[0])
        else:
            under = self.lb[0]
            dr = self.rb[1]
            pair = (self.rb[0], self.lt[0]) if dr > 0 else (self.lt[0], self.rb[0])
        return pair, under


def skel_id(arc: str, dir: int = +1) -> SPiece:
    return SPiece("id", arc=arc, dir=dir)


def skel_cap_r(arc: str) -> SPiece:
    return SPiece("capR", arc=arc)


def skel_cap_l(arc: str) -> SPiece:
    return SPiece("capL", arc=arc)


def skel_cup_r(arc: str) -> SPiece:
    return SPiece("cupR", arc=arc)


def skel_cup_l(arc: str) -> SPiece:
    return SPiece("cupL", arc=arc)


def skel_cross(
    sign: int, over_in: str, over_out: str, under: str, dl: int, dr: int
) -> SPiece:
    """Crossing from the over-strand's in/out arcs (along its own
    direction), the under arc, and the two bottom-end directions."""
    over_l = (sign, dl, dr) in _OVER_LEFT
    if over_l:
        ob, ot = (over_in, over_out) if dl > 0 else (over_out, over_in)
        lb, rb = (ob, dl), (under, dr)
        lt, rt = (under, dr), (ot, dl)
    else:
        ob, ot = (over_in, over_out) if dr > 0 else (over_out, over_in)
        lb, rb = (under, dl), (ob, dr)
        lt, rt = (ot, dr), (under, dl)
    return SPiece("cross", sign=sign, lb=lb, rb=rb, lt=lt, rt=rt)


@dataclass(frozen=True)
class GLinkPresentation:
    """A framed oriented link diagram skeleton with per-arc G-elements."""

    slices: tuple[tuple[SPiece, ...], ...]
    arc_comp: dict[str, int]
    arc_g: dict[str, str]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        b: tuple[End, ...] = ()
        for k, sl in enumerate(self.slices):
            need: list[End] = []
            nxt: list[End] = []
            for p in sl:
                need.extend(p.source())
                nxt.extend(p.target())
            if tuple(need) != b:
                raise LinkError(f"skeleton slice {k} does not chain")
            b = tuple(nxt)
        if b != ():
            raise LinkError("skeleton is not closed")
        arcs = self.arcs()
        missing = set(arcs) - set(self.arc_comp)
        if missing:
            raise LinkError(f"arcs without component tags: {sorted(missing)}")
        missing = set(arcs) - set(self.arc_g)
        if missing:
            raise LinkError(f"arcs without G-elements: {sorted(missing)}")

    def arcs(self) -> list[str]:
        seen: list[str] = []
        for sl in self.slices:
            for p in sl:
                for a, _ in p.source() + p.target():
                    if a not in seen:
                        seen.append(a)
        return seen

    def components(self) -> list[int]:
        return sorted(set(self.arc_comp.values()))

    def num_components(self) -> int:
        return len(self.components())

    def crossings(self) -> list[SPiece]:
        return [p for sl in self.slices for p in sl if p.kind == "cross"]

    def conjugated(self, eta: str, group) -> GLinkPresentation:
        """The flat structure conjugated by eta: g -> eta^-1 g eta."""
        newg = {a: group.conj(g, eta) for a, g in self.arc_g.items()}
        return GLinkPresentation(self.slices, dict(self.arc_comp), newg, self.name)


# ---------------------------------------------------------------------
# Component walks
# ---------------------------------------------------------------------

Port = tuple[str, int, int]


def _flow_map(link: GLinkPresentation) -> dict[Port, tuple[Port, SPiece | None]]:
    """Directed strand flow: each port maps to the next port along the
    strand direction, tagged with the crossing piece when the hop is an
    over-passage (where the strand changes arc)."""
    succ: dict[Port, tuple[Port, SPiece | None]] = {}

    def add(frm: Port, to: Port, over_x: SPiece | None = None) -> None:
        succ[frm] = (to, over_x)

    for k, sl in enumerate(link.slices):
        bpos = tpos = 0
        for p in sl:
            nb, nt = len(p.source()), len(p.target())
            B = [(k, bpos + i) for i in range(nb)]
            T = [(k + 1, tpos + j) for j in range(nt)]
            kind = p.kind
            if kind == "id":
                if p.dir > 0:
                    add(("p", *B[0]), ("p", *T[0]))
                else:
                    add(("p", *T[0]), ("p", *B[0]))
            elif kind == "capR":
                add(("p", *B[1]), ("p", *B[0]))
            elif kind == "capL":
                add(("p", *B[0]), ("p", *B[1]))
            elif kind == "cupR":
                add(("p", *T[1]), ("p", *T[0]))
            elif kind == "cupL":
                add(("p", *T[0]), ("p", *T[1]))
            elif kind == "cross":
                dl, dr = p.lb[1], p.rb[1]
                over_l = p.over_left()
                ltag = p if over_l else None
                rtag = p if not over_l else None
                if dl > 0:
                    add(("p", *B[0]), ("p", *T[1]), ltag)
                else:
                    add(("p", *T[1]), ("p", *B[0]), ltag)
                if dr > 0:
                    add(("p", *B[1]), ("p", *T[0]), rtag)
                else:
                    add(("p", *T[0]), ("p", *B[1]), rtag)
            else:
                raise LinkError(f"unknown skeleton piece {kind!r}")
            bpos += nb
            tpos += nt
    return succ


def _levels(link: GLinkPresentation) -> list[tuple[End, ...]]:
    levels: list[tuple[End, ...]] = [()]
    for sl in link.slices:
        nxt: list[End] = []
        for p in sl:
            nxt.extend(p.target())
        levels.append(tuple(nxt))
    return levels


def _start_port(link: GLinkPresentation, arc: str) -> Port:
    for k, level in enumerate(_levels(link)):
        for i, (a, _) in enumerate(level):
            if a == arc:
                return ("p", k, i)
    raise LinkError(f"arc {arc} never crosses a slice boundary")


def component_walk(
    link: GLinkPresentation, comp: int, start_arc: str | None = None
) -> list[tuple[str, SPiece, int]]:
    """Traverse the component along its orientation starting on
    ``start_arc`` (default: its first arc in document order), returning
    (arc entered, crossing, sign) at each over-passage."""
    if start_arc is None:
        start_arc = next(a for a in link.arcs() if link.arc_comp[a] == comp)
    succ = _flow_map(link)
    start = _start_port(link, start_arc)
    out: list[tuple[str, SPiece, int]] = []
    cur = start
    guard = 0
    while True:
        nxt, over_x = succ[cur]
        if over_x is not None:
            (_, oout), _ = over_x.over_under()
            out.append((oout, over_x, over_x.sign))
        cur = nxt
        guard += 1
        if cur == start:
            break
        if guard > 10_000_000:
            raise LinkError("runaway component walk")
    return out


# ---------------------------------------------------------------------
# Flat structure checks
# ---------------------------------------------------------------------


def check_flat_structure(link: GLinkPresentation, data: CategoryData) -> AxiomReport:
    """Wirtinger consistency at every crossing and triviality of every
    framed longitude (specialness)."""
    rep = AxiomReport("flat-structure")
    G = data.group
    one = data.one()
    for a in sorted(link.arc_g):
        rep.require("arc-g-known", (a,), one if link.arc_g[a] in G else data.zero(), one)
    for idx, p in enumerate(link.crossings()):
        (oin, oout), under = p.over_under()
        gu = link.arc_g[under]
        gi = link.arc_g[oin]
        if p.sign > 0:
            want = G.mul(G.mul(G.inv(gu), gi), gu)
        else:
            want = G.mul(G.mul(gu, gi), G.inv(gu))
        rep.require(
            "wirtinger",
            (str(idx), oin, oout, under),
            one if link.arc_g[oout] == want else data.zero(),
            one,
        )
    for comp in link.components():
        g = longitude_value(link, comp, data)
        rep.require(
            "special-longitude", (str(comp),), one if g == G.unit else data.zero(), one
        )
    return rep.finish()


def longitude_value(link: GLinkPresentation, comp: int, data: CategoryData) -> str:
    """g-image of the framed longitude: left-multiplied g(under)^(-sign)
    factors at the component's over-passages."""
    G = data.group
    g = G.unit
    for _, piece, sign in component_walk(link, comp):
        (_, _), under = piece.over_under()
        gu = link.arc_g[under]
        g = G.mul(gu if sign < 0 else G.inv(gu), g)
    return g


def is_special(link: GLinkPresentation, data: CategoryData) -> bool:
    return check_flat_structure(link, data).passed


# ---------------------------------------------------------------------
# Linking matrix and signature
# ---------------------------------------------------------------------


def linking_data(link: GLinkPresentation) -> tuple[list[list[int]], int, int]:
    """(matrix B, signature, component count): B_rr is the writhe of
    component r under blackboard framing, B_rs the linking number."""
    comps = link.components()
    index = {c: i for i, c in enumerate(comps)}
    n = len(comps)
    raw = [[0] * n for _ in range(n)]
    for p in link.crossings():
        (oin, _), under = p.over_under()
        r = index[link.arc_comp[oin]]
        s = index[link.arc_comp[under]]
        raw[r][s] += p.sign
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        B[i][i] = raw[i][i]
        for j in range(i + 1, n):
            total = raw[i][j] + raw[j][i]
            if total % 2 != 0:
                raise LinkError("odd signed crossing count between components")
            B[i][j] = B[j][i] = total // 2
    return B, signature_of_symmetric(B), n


def signature_of_symmetric(rows: list[list[int]]) -> int:
    """Exact signature of a symmetric integer matrix over Q.  Nonzero
    diagonal entries are used as pivots; a fully isotropic pair
    contributes one positive and one negative square; zero blocks
    contribute nothing."""
    m = [[Fraction(v) for v in row] for row in rows]
    idx = list(range(len(rows)))
    sig = 0
    while idx:
        pivot = next((i for i in idx if m[i][i] != 0), None)
        if pivot is not None:
            d = m[pivot][pivot]
            sig += 1 if d > 0 else -1
            rest = [i for i in idx if i != pivot]
            for a in rest:
                for b in rest:
                    m[a][b] -= m[a][pivot] * m[pivot][b] / d
            idx = rest
            continue
        off = next(
            ((i, j) for i in idx for j in idx if i != j and m[i][j] != 0), None
        )
        if off is None:
            break
        i, j = off
        d = m[i][j]
        rest = [k for k in idx if k not in (i, j)]
        # eliminate the hyperbolic block [[0,d],[d,0]]; net signature 0
        for a in rest:
            for b in rest:
                m[a][b] -= (m[a][i] * m[j][b] + m[a][j] * m[i][b]) / d
        idx = rest
    return sig


# ---------------------------------------------------------------------
# Skeleton surgery helpers
# ---------------------------------------------------------------------


def reverse_component(link: GLinkPresentation, comp: int, group) -> GLinkPresentation:
    """Reverse the orientation of one component.  Strand directions and
    meridian G-elements invert; crossing signs flip where exactly one of
    the two strands is reversed; the over/under pattern is unchanged."""
    def on(arc: str) -> bool:
        return link.arc_comp[arc] == comp

    new_slices: list[tuple[SPiece, ...]] = []
    for sl in link.slices:
        row: list[SPiece] = []
        for p in sl:
            if p.kind == "id":
                row.append(SPiece("id", arc=p.arc, dir=-p.dir if on(p.arc) else p.dir))
            elif p.kind in ("capR", "capL"):
                if on(p.arc):
                    row.append(SPiece("capL" if p.kind == "capR" else "capR", arc=p.arc))
                else:
                    row.append(p)
            elif p.kind in ("cupR", "cupL"):
                if on(p.arc):
                    row.append(SPiece("cupL" if p.kind == "cupR" else "cupR", arc=p.arc))
                else:
                    row.append(p)
            elif p.kind == "cross":
                on_l = on(p.lb[0])
                on_r = on(p.rb[0])
                (oin, oout), under = p.over_under()
                over_on = on(oin)
                sign = p.sign * (-1 if on_l != on_r else +1)
                dl = -p.lb[1] if on_l else p.lb[1]
                dr = -p.rb[1] if on_r else p.rb[1]
                if over_on:
                    oin, oout = oout, oin
                row.append(skel_cross(sign, oin, oout, under, dl, dr))
            else:
                raise LinkError(f"unknown skeleton piece {p.kind!r}")
        new_slices.append(tuple(row))
    new_g = {
        a: (group.inv(g) if link.arc_comp[a] == comp else g)
        for a, g in link.arc_g.items()
    }
    return GLinkPresentation(tuple(new_slices), dict(link.arc_comp), new_g, link.name)


def hop_slots(link: GLinkPresentation):
    """For each flow hop, the piece-end slots it traverses, keyed by the
    FROM port: (slice index, piece index, (end, offset) in, (end, offset) out).
    Ends are 'b' for a source slot and 't' for a target slot."""
    slots: dict[Port, tuple[int, int, tuple[str, int], tuple[str, int]]] = {}
    for k, sl in enumerate(link.slices):
        bpos = tpos = 0
        for pi, p in enumerate(sl):
            nb, nt = len(p.source()), len(p.target())
            B = [(k, bpos + i) for i in range(nb)]
            T = [(k + 1, tpos + j) for j in range(nt)]
            kind = p.kind
            if kind == "id":
                if p.dir > 0:
                    slots[("p", *B[0])] = (k, pi, ("b", 0), ("t", 0))
                else:
                    slots[("p", *T[0])] = (k, pi, ("t", 0), ("b", 0))
            elif kind == "capR":
                slots[("p", *B[1])] = (k, pi, ("b", 1), ("b", 0))
            elif kind == "capL":
                slots[("p", *B[0])] = (k, pi, ("b", 0), ("b", 1))
            elif kind == "cupR":
                slots[("p", *T[1])] = (k, pi, ("t", 1), ("t", 0))
            elif kind == "cupL":
                slots[("p", *T[0])] = (k, pi, ("t", 0), ("t", 1))
            elif kind == "cross":
                dl, dr = p.lb[1], p.rb[1]
                if dl > 0:
                    slots[("p", *B[0])] = (k, pi, ("b", 0), ("t", 1))
                else:
                    slots[("p", *T[1])] = (k, pi, ("t", 1), ("b", 0))
                if dr > 0:
                    slots[("p", *B[1])] = (k, pi, ("b", 1), ("t", 0))
                else:
                    slots[("p", *T[0])] = (k, pi, ("t", 0), ("b", 1))
            bpos += nb
            tpos += nt
    return slots


def _piece_with_slot_arc(p: SPiece, slot: tuple[str, int], arc: str) -> SPiece:
    """Rewrite the arc name at one end slot of a piece."""
    if p.kind != "cross":
        return SPiece(p.kind, arc=arc, dir=p.dir)
    end, off = slot
    fields = dict(sign=p.sign, lb=p.lb, rb=p.rb, lt=p.lt, rt=p.rt)
    key = {("b", 0): "lb", ("b", 1): "rb", ("t", 0): "lt", ("t", 1): "rt"}[(end, off)]
    old = fields[key]
    fields[key] = (arc, old[1])
    return SPiece("cross", **fields)


def rename_forward_segment(
    slices: list[list[SPiece]],
    link: GLinkPresentation,
    start: Port,
    new_arc: str,
) -> bool:
    """Walk the strand forward from ``start`` in the original link,
    renaming every traversed end slot to ``new_arc``, stopping after the
    first over-passage (its in-slot is renamed, its out-slot is not).
    Returns True if the walk wrapped back to ``start`` without meeting
    an over-passage (the old arc had no overcrossing outside)."""
    succ = _flow_map(link)
    slot_table = hop_slots(link)
    cur = start
    guard = 0
    while True:
        nxt, over_x = succ[cur]
        k, pi, s_in, s_out = slot_table[cur]
        slices[k][pi] = _piece_with_slot_arc(slices[k][pi], s_in, new_arc)
        if over_x is None:
            slices[k][pi] = _piece_with_slot_arc(slices[k][pi], s_out, new_arc)
        cur = nxt
        if over_x is not None:
            return False
        if cur == start:
            return True
        guard += 1
        if guard > 10_000_000:
            raise LinkError("runaway rename walk")
