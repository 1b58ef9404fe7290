"""Colored diagrams as sliced words of elementary pieces.

A diagram is a list of slices read bottom to top; each slice is a list
of pieces read left to right.  Boundaries between slices are sequences
of signed labels (label, +1/-1), + for a strand oriented upward at that
level and - for downward.  The pieces are the elementary generators:

* ``id``      a vertical strand of either orientation;
* ``capR``    ev:    (x,-),(x,+) -> ()        * ``cupR``  coev:  () -> (x,+),(x,-)
* ``capL``    ev~:   (x,+),(x,-) -> ()        * ``cupL``  coev~: () -> (x,-),(x,+)
* ``crossP``  positive crossing of two upward strands: the over-strand
  enters bottom-left colored x and leaves top-right colored
  x' = phi_{|y|}(x); the under-strand y runs bottom-right to top-left.
  The crossing color psi is an isomorphism X' -> phi_{|Y|}(X), a nonzero
  scalar here.
* ``crossN``  negative crossing: the over-strand enters bottom-right
  colored y and leaves top-left colored y' with y = phi_{|x|}(y'); the
  under-strand x runs bottom-left to top-right; psi: Y -> phi_{|X|}(Y').
* ``coupon``  a box with signed input and output lists and a scalar color.

Crossings between strands of other orientations are not primitive; they
expand into cap/cup-rotated compositions of crossP/crossN (see
``crossing_block``), exactly as the mixed-orientation generators are
expanded in the underlying calculus.

Diagrams are immutable values; all operations return new diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .category import CategoryData
from .checks import AxiomReport
from .cyclotomic import CycNumber, parse_scalar

Boundary = tuple[tuple[str, int], ...]


class DiagramError(ValueError):
    pass


def _fmt_boundary(b: Boundary) -> str:
    return "(" + " ".join(f"{x}{'+' if s > 0 else '-'}" for x, s in b) + ")"


@dataclass(frozen=True)
class Piece:
    kind: str  # id, capR, capL, cupR, cupL, crossP, crossN, coupon
    labels: tuple[str, ...] = ()
    signs: tuple[int, ...] = ()
    psi: CycNumber | None = None
    coupon_in: Boundary = ()
    coupon_out: Boundary = ()
    value: CycNumber | None = None

    def source(self, data: CategoryData) -> Boundary:
        k = self.kind
        if k == "id":
            return ((self.labels[0], self.signs[0]),)
        if k == "capR":
            x = self.labels[0]
            return ((x, -1), (x, +1))
        if k == "capL":
            x = self.labels[0]
            return ((x, +1), (x, -1))
        if k in ("cupR", "cupL"):
            return ()
        if k in ("crossP", "crossN"):
            x, y = self.labels
            return ((x, +1), (y, +1))
        if k == "coupon":
            return self.coupon_in
        raise DiagramError(f"unknown piece kind {k!r}")

    def target(self, data: CategoryData) -> Boundary:
        k = self.kind
        if k == "id":
            return ((self.labels[0], self.signs[0]),)
        if k in ("capR", "capL"):
            return ()
        if k == "cupR":
            x = self.labels[0]
            return ((x, +1), (x, -1))
        if k == "cupL":
            x = self.labels[0]
            return ((x, -1), (x, +1))
        if k == "crossP":
            x, y = self.labels
            xp = data.act(data.grade[y], x)
            return ((y, +1), (xp, +1))
        if k == "crossN":
            x, y = self.labels
            yp = data.act(data.group.inv(data.grade[x]), y)
            return ((yp, +1), (x, +1))
        if k == "coupon":
            return self.coupon_out
        raise DiagramError(f"unknown piece kind {k!r}")

    def scalar(self, data: CategoryData) -> CycNumber:
        k = self.kind
        if k in ("id", "capR", "cupR"):
            return data.one()
        if k in ("capL", "cupL"):
            return data.d(self.labels[0])
        if k == "crossP":
            x, y = self.labels
            assert self.psi is not None
            return data.t(x, y) * self.psi.inverse()
        if k == "crossN":
            x, y = self.labels
            yp = data.act(data.group.inv(data.grade[x]), y)
            assert self.psi is not None
            return self.psi * data.t(yp, x).inverse()
        if k == "coupon":
            assert self.value is not None
            return self.value
        raise DiagramError(f"unknown piece kind {k!r}")


def id_piece(x: str, sign: int = +1) -> Piece:
    return Piece("id", (x,), (sign,))


def cap_r(x: str) -> Piece:
    return Piece("capR", (x,))


def cap_l(x: str) -> Piece:
    return Piece("capL", (x,))


def cup_r(x: str) -> Piece:
    return Piece("cupR", (x,))


def cup_l(x: str) -> Piece:
    return Piece("cupL", (x,))


def cross_p(x: str, y: str, psi: CycNumber) -> Piece:
    return Piece("crossP", (x, y), psi=psi)


def cross_n(x: str, y: str, psi: CycNumber) -> Piece:
    return Piece("crossN", (x, y), psi=psi)


def coupon(ins: Boundary, outs: Boundary, value: CycNumber) -> Piece:
    return Piece("coupon", coupon_in=tuple(ins), coupon_out=tuple(outs), value=value)


@dataclass(frozen=True)
class ColoredDiagram:
    """A well-chained sliced diagram word over a fixed category."""

    data: CategoryData
    source: Boundary
    target: Boundary
    slices: tuple[tuple[Piece, ...], ...]

    @staticmethod
    def from_slices(
        data: CategoryData, source: Boundary, slices: Iterable[Iterable[Piece]]
    ) -> ColoredDiagram:
        boundary = tuple(source)
        packed: list[tuple[Piece, ...]] = []
        for k, slice_ in enumerate(slices):
            pieces = tuple(slice_)
            expect: list[tuple[str, int]] = []
            nxt: list[tuple[str, int]] = []
            for p in pieces:
                expect.extend(p.source(data))
                nxt.extend(p.target(data))
            if tuple(expect) != boundary:
                raise DiagramError(
                    f"slice {k} does not chain: needs {_fmt_boundary(tuple(expect))}, "
                    f"have {_fmt_boundary(boundary)}"
                )
            boundary = tuple(nxt)
            packed.append(pieces)
        return ColoredDiagram(data, tuple(source), boundary, tuple(packed))

    @staticmethod
    def identity(data: CategoryData, boundary: Boundary) -> ColoredDiagram:
        return ColoredDiagram(data, tuple(boundary), tuple(boundary), ())

    def is_closed(self) -> bool:
        return not self.source and not self.target


def compose(top: ColoredDiagram, bottom: ColoredDiagram) -> ColoredDiagram:
    """Glue ``top`` onto ``bottom`` (bottom first)."""
    if top.data is not bottom.data and top.data != bottom.data:
        raise DiagramError("diagrams over different categories")
    if bottom.target != top.source:
        for i, (a, b) in enumerate(zip(bottom.target, top.source)):
            if a != b:
                raise DiagramError(
                    f"boundary mismatch at position {i}: {a} vs {b}"
                )
        raise DiagramError(
            f"boundary length mismatch: {_fmt_boundary(bottom.target)} vs "
            f"{_fmt_boundary(top.source)}"
        )
    return ColoredDiagram(
        bottom.data, bottom.source, top.target, bottom.slices + top.slices
    )


def tensor(left: ColoredDiagram, right: ColoredDiagram) -> ColoredDiagram:
    """Place ``right`` to the right of ``left`` (pad with identities)."""
    if left.data is not right.data and left.data != right.data:
        raise DiagramError("diagrams over different categories")
    data = left.data
    slices: list[tuple[Piece, ...]] = []
    pad_right = tuple(id_piece(x, s) for x, s in right.source)
    for sl in left.slices:
        slices.append(sl + pad_right)
    pad_left = tuple(id_piece(x, s) for x, s in left.target)
    for sl in right.slices:
        slices.append(pad_left + sl)
    return ColoredDiagram(
        data,
        left.source + right.source,
        left.target + right.target,
        tuple(slices),
    )


def dual_boundary(data: CategoryData, b: Boundary) -> Boundary:
    """U* = ((U_k, -e_k), ..., (U_1, -e_1))."""
    return tuple((x, -s) for x, s in reversed(b))


# ---------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------


def validate_coloring(
    d: ColoredDiagram, data: CategoryData | None = None, allow_circles: bool = False
) -> AxiomReport:
    """Checks every crossing grade relation and scalar, every coupon's
    label- and grade-product equality, slice chaining (already enforced
    on construction, re-verified here), and the absence of circle
    components unless ``allow_circles``."""
    data = data or d.data
    rep = AxiomReport("coloring")
    one = data.one()
    boundary = d.source
    for k, sl in enumerate(d.slices):
        expect: list[tuple[str, int]] = []
        for p in sl:
            expect.extend(p.source(data))
        rep.require(
            "slice-chain",
            (str(k),),
            one if tuple(expect) == boundary else data.zero(),
            one,
        )
        pos = 0
        for p in sl:
            tag = (str(k), str(pos))
            if p.kind in ("crossP", "crossN"):
                x, y = p.labels
                assert p.psi is not None
                rep.require(
                    "crossing-psi-nonzero",
                    tag,
                    one if not p.psi.is_zero() else data.zero(),
                    one,
                )
                if p.kind == "crossP":
                    # |X'| = |Y|^-1 |X| |Y| for the over-strand
                    xp = data.act(data.grade[y], x)
                    rep.require(
                        "crossing-grade",
                        tag,
                        one
                        if data.grade[xp] == data.group.conj(data.grade[x], data.grade[y])
                        else data.zero(),
                        one,
                    )
                else:
                    yp = data.act(data.group.inv(data.grade[x]), y)
                    rep.require(
                        "crossing-grade",
                        tag,
                        one
                        if data.grade[y]
                        == data.group.conj(data.grade[yp], data.grade[x])
                        else data.zero(),
                        one,
                    )
            elif p.kind == "coupon":
                assert p.value is not None
                rep.require(
                    "coupon-value-nonzero",
                    tag,
                    one if not p.value.is_zero() else data.zero(),
                    one,
                )
                lin = _signed_label_product(data, p.coupon_in)
                lout = _signed_label_product(data, p.coupon_out)
                rep.require(
                    "coupon-hom-nonzero",
                    tag,
                    one if lin == lout else data.zero(),
                    one,
                )
                gin = _signed_grade_product(data, p.coupon_in)
                gout = _signed_grade_product(data, p.coupon_out)
                rep.require(
                    "coupon-grade-product",
                    tag,
                    one if gin == gout else data.zero(),
                    one,
                )
            pos += len(p.source(data))
        nxt: list[tuple[str, int]] = []
        for p in sl:
            nxt.extend(p.target(data))
        boundary = tuple(nxt)
    rep.require(
        "target-boundary",
        (),
        one if boundary == d.target else data.zero(),
        one,
    )
    if not allow_circles:
        rep.require(
            "no-circle-components",
            (),
            one if count_circles(d) == 0 else data.zero(),
            one,
        )
    return rep.finish()


def _signed_label_product(data: CategoryData, b: Boundary) -> str:
    out = data.labels.unit
    for x, s in b:
        out = data.labels.mul(out, x if s > 0 else data.labels.inv(x))
    return out


def _signed_grade_product(data: CategoryData, b: Boundary) -> str:
    out = data.group.unit
    for x, s in b:
        g = data.grade[x]
        out = data.group.mul(out, g if s > 0 else data.group.inv(g))
    return out


def _piece_connections(p: Piece, data: CategoryData) -> list[tuple[int, int]]:
    """Pairs (bottom offset, top offset) of strand pass-throughs, and
    bottom-bottom / top-top pairs encoded as (i, ~j) / (~i, j).

    Coupons do not connect; strands terminate there.
    """
    k = p.kind
    if k == "id":
        return [(0, 0)]
    if k in ("capR", "capL"):
        return [(0, ~1)]  # joins bottom 0 to bottom 1
    if k in ("cupR", "cupL"):
        return [(~0, 1)]  # joins top 0 to top 1
    if k in ("crossP", "crossN"):
        return [(0, 1), (1, 0)]
    if k == "coupon":
        return []
    raise DiagramError(f"unknown piece kind {k!r}")


def count_circles(d: ColoredDiagram) -> int:
    """Number of circle components: closed strand loops meeting no
    coupon and no diagram boundary."""
    data = d.data
    # ports: ('b', k, i) = position i on the source boundary of slice k;
    # level k target = level k+1 source.
    parent: dict[tuple[str, int, int], tuple[str, int, int]] = {}
    touches: dict[tuple[str, int, int], bool] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b, touched=False):
        for node in (a, b):
            if node not in parent:
                parent[node] = node
                touches[node] = False
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
        root = find(rb)
        touches[root] = touches.get(root, False) or touches[ra] or touches[rb] or touched

    n = len(d.slices)
    for k, sl in enumerate(d.slices):
        base_b = 0
        base_t = 0
        for p in sl:
            nb = len(p.source(data))
            nt = len(p.target(data))
            if p.kind == "coupon":
                for i in range(nb):
                    union(("b", k, base_b + i), ("b", k, base_b + i), True)
                    touches[find(("b", k, base_b + i))] = True
                for j in range(nt):
                    union(("b", k + 1, base_t + j), ("b", k + 1, base_t + j), True)
                    touches[find(("b", k + 1, base_t + j))] = True
            else:
                for a, b in _piece_connections(p, data):
                    if a >= 0 and b >= 0:
                        union(("b", k, base_b + a), ("b", k + 1, base_t + b))
                    elif a >= 0 and b < 0:
                        union(("b", k, base_b + a), ("b", k, base_b + (~b)))
                    else:
                        union(("b", k + 1, base_t + (~a)), ("b", k + 1, base_t + b))
            base_b += nb
            base_t += nt
    # mark boundary contacts
    for i in range(len(d.source)):
        node = ("b", 0, i)
        if node in parent:
            touches[find(node)] = True
    for i in range(len(d.target)):
        node = ("b", n, i)
        if node in parent:
            touches[find(node)] = True
    roots = {find(a) for a in parent}
    return sum(1 for r in roots if not touches[r])


# ---------------------------------------------------------------------
# Elementary builders (single-piece diagrams) and rotated blocks
# ---------------------------------------------------------------------


def elementary(data: CategoryData, piece: Piece) -> ColoredDiagram:
    return ColoredDiagram.from_slices(data, piece.source(data), [[piece]])


def _wrap(data: CategoryData, source: Boundary, slices: list[list[Piece]]) -> ColoredDiagram:
    return ColoredDiagram.from_slices(data, source, slices)


def crossing_block(
    data: CategoryData,
    sign: int,
    left: tuple[str, int],
    right: tuple[str, int],
    psi: CycNumber,
) -> ColoredDiagram:
    """A geometric crossing of the two adjacent strands ``left`` and
    ``right`` (label, orientation), of the given sign, expanded into
    elementary pieces.  The strands swap sides; the moving colors follow
    the underpass rules.  ``psi`` is the color of the unique elementary
    crossing inside the block.

    Orientation key (sign, left dir, right dir) -> expansion:
      (+,u,u) crossP        (-,u,u) crossN
      (+,d,u) sigma'+       (-,d,u) sigma''-
      (+,u,d) sigma''+      (-,u,d) sigma'-
      (+,d,d) sigma'''+     (-,d,d) sigma'''-
    """
    (xl, sl), (xr, sr) = left, right
    up, down = +1, -1
    key = (sign, sl, sr)
    if key == (+1, up, up):
        return elementary(data, cross_p(xl, xr, psi))
    if key == (-1, up, up):
        return elementary(data, cross_n(xl, xr, psi))
    if key == (+1, down, up):
        # sigma'_+(X=xl down, Y=xr up): cupR on x right, crossP(y, x), capR left
        x, y = xl, xr
        src: Boundary = ((x, -1), (y, +1))
        yp = data.act(data.grade[x], y)
        return _wrap(
            data,
            src,
            [
                [id_piece(x, -1), id_piece(y, +1), cup_r(x)],
                [id_piece(x, -1), cross_p(y, x, psi), id_piece(x, -1)],
                [cap_r(x), id_piece(yp, +1), id_piece(x, -1)],
            ],
        )
    if key == (-1, up, down):
        # sigma'_-(X=xl up, Y=xr down): cupL on y left, crossN(y, x), capL right
        x, y = xl, xr
        src = ((x, +1), (y, -1))
        xp = data.act(data.group.inv(data.grade[y]), x)
        return _wrap(
            data,
            src,
            [
                [cup_l(y), id_piece(x, +1), id_piece(y, -1)],
                [id_piece(y, -1), cross_n(y, x, psi), id_piece(y, -1)],
                [id_piece(y, -1), id_piece(xp, +1), cap_l(y)],
            ],
        )
    if key == (+1, up, down):
        # sigma''_+(X=xl up, Y=xr down): over-strand is y
        x, y = xl, xr
        yp = data.act(data.group.inv(data.grade[x]), y)
        src = ((x, +1), (y, -1))
        return _wrap(
            data,
            src,
            [
                [cup_l(yp), id_piece(x, +1), id_piece(y, -1)],
                [id_piece(yp, -1), cross_p(yp, x, psi), id_piece(y, -1)],
                [id_piece(yp, -1), id_piece(x, +1), cap_l(y)],
            ],
        )
    if key == (-1, down, up):
        # sigma''_-(X=xl down, Y=xr up): over-strand is x
        x, y = xl, xr
        xp = data.act(data.grade[y], x)
        src = ((x, -1), (y, +1))
        return _wrap(
            data,
            src,
            [
                [id_piece(x, -1), id_piece(y, +1), cup_r(xp)],
                [id_piece(x, -1), cross_n(y, xp, psi), id_piece(xp, -1)],
                [cap_r(x), id_piece(y, +1), id_piece(xp, -1)],
            ],
        )
    if key == (+1, down, down):
        # sigma'''_+: dual rotation of crossP(x', y) with x' the label
        # entering at the top right
        x, y = xl, xr
        xp = data.act(data.group.inv(data.grade[y]), x)
        inner = elementary(data, cross_p(xp, y, psi))
        return _rotate_both_down(data, inner)
    if key == (-1, down, down):
        x, y = xl, xr
        yp = data.act(data.grade[x], y)
        inner = elementary(data, cross_n(x, yp, psi))
        return _rotate_both_down(data, inner)
    raise DiagramError(f"unsupported crossing orientation {key}")


def _rotate_both_down(data: CategoryData, m: ColoredDiagram) -> ColoredDiagram:
    """The 180-degree rotation of a 2-in 2-out upward diagram
    ((a,+),(b,+)) -> ((c,+),(d,+)), yielding ((d,-),(c,-)) -> ((b,-),(a,-))."""
    (a, _), (b, _) = m.source
    (c, _), (d, _) = m.target
    src: Boundary = ((d, -1), (c, -1))
    slices: list[list[Piece]] = [
        [id_piece(d, -1), id_piece(c, -1), cup_r(a)],
        [id_piece(d, -1), id_piece(c, -1), id_piece(a, +1), cup_r(b), id_piece(a, -1)],
    ]
    for sl in m.slices:
        slices.append(
            [id_piece(d, -1), id_piece(c, -1), *sl, id_piece(b, -1), id_piece(a, -1)]
        )
    slices.append(
        [id_piece(d, -1), cap_r(c), id_piece(d, +1), id_piece(b, -1), id_piece(a, -1)]
    )
    slices.append([cap_r(d), id_piece(b, -1), id_piece(a, -1)])
    return _wrap(data, src, slices)


def kink(
    data: CategoryData,
    sign: int,
    x: str,
    psi: CycNumber,
    side: str = "left",
    orient: int = +1,
) -> ColoredDiagram:
    """A single curl of the given crossing sign on a strand colored x.

    For upward strands these are the twist diagrams T_+/T_- (loop on the
    left) and T'_+/T'_- (loop on the right); downward strands get the
    180-degree rotation.  In the pointed setting the strand color is
    preserved around the curl (phi_{|x|}(x) = x).
    """
    if data.act(data.grade[x], x) != x:
        raise DiagramError(f"label {x} is not fixed by its own grade")
    if orient == +1:
        cross = cross_p(x, x, psi) if sign > 0 else cross_n(x, x, psi)
        if side == "left":
            return _wrap(
                data,
                ((x, +1),),
                [
                    [cup_l(x), id_piece(x, +1)],
                    [id_piece(x, -1), cross],
                    [cap_r(x), id_piece(x, +1)],
                ],
            )
        return _wrap(
            data,
            ((x, +1),),
            [
                [id_piece(x, +1), cup_r(x)],
                [cross, id_piece(x, -1)],
                [id_piece(x, +1), cap_l(x)],
            ],
        )
    up = kink(data, sign, x, psi, side=side, orient=+1)
    return _rotate_strand_down(data, up)


def _rotate_strand_down(data: CategoryData, m: ColoredDiagram) -> ColoredDiagram:
    """Rotate a 1-in 1-out upward diagram (x,+)->(x,+) to (x,-)->(x,-)."""
    (x, _), = m.source
    slices: list[list[Piece]] = [[id_piece(x, -1), cup_r(x)]]
    for sl in m.slices:
        slices.append([id_piece(x, -1), *sl, id_piece(x, -1)])
    slices.append([cap_r(x), id_piece(x, -1)])
    return _wrap(data, ((x, -1),), slices)


# ---------------------------------------------------------------------
# Text format: one line per slice, pieces separated by whitespace at
# paren depth zero.
#   id(x,+) capR(x) capL(x) cupR(x) cupL(x)
#   crossP(x,y;psi=SCALAR) crossN(x,y;psi=SCALAR)
#   coupon(in=x:+,y:-;out=z:+;v=SCALAR)
# ---------------------------------------------------------------------


def _split_pieces(line: str) -> list[str]:
    out: list[str] = []
    depth = 0
    cur: list[str] = []
    for ch in line:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DiagramError(f"unbalanced parens in {line!r}")
        if ch.isspace() and depth == 0:
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise DiagramError(f"unbalanced parens in {line!r}")
    if cur:
        out.append("".join(cur))
    return out


def _parse_signed(tok: str) -> tuple[str, int]:
    label, _, sign = tok.partition(":")
    sign = sign.strip()
    if sign == "+":
        return label.strip(), +1
    if sign == "-":
        return label.strip(), -1
    raise DiagramError(f"bad signed label {tok!r}")


def parse_piece(text: str, order: int) -> Piece:
    m = text.strip()
    open_ = m.find("(")
    if open_ < 0 or not m.endswith(")"):
        raise DiagramError(f"bad piece {text!r}")
    kind = m[:open_]
    body = m[open_ + 1 : -1]
    if kind == "id":
        label, _, sign = body.partition(",")
        sign = sign.strip()
        if sign not in ("+", "-"):
            raise DiagramError(f"bad id piece {text!r}")
        return id_piece(label.strip(), +1 if sign == "+" else -1)
    if kind in ("capR", "capL", "cupR", "cupL"):
        fn = {"capR": cap_r, "capL": cap_l, "cupR": cup_r, "cupL": cup_l}[kind]
        return fn(body.strip())
    if kind in ("crossP", "crossN"):
        head, _, psitxt = body.partition(";")
        x, _, y = head.partition(",")
        psi = CycNumber.one(order)
        if psitxt:
            key, _, val = psitxt.partition("=")
            if key.strip() != "psi":
                raise DiagramError(f"bad crossing piece {text!r}")
            psi = parse_scalar(val, order)
        fn = cross_p if kind == "crossP" else cross_n
        return fn(x.strip(), y.strip(), psi)
    if kind == "coupon":
        ins: Boundary = ()
        outs: Boundary = ()
        value = CycNumber.one(order)
        for part in body.split(";"):
            key, _, val = part.partition("=")
            key = key.strip()
            if key == "in":
                ins = tuple(_parse_signed(t) for t in val.split(",") if t.strip())
            elif key == "out":
                outs = tuple(_parse_signed(t) for t in val.split(",") if t.strip())
            elif key == "v":
                value = parse_scalar(val, order)
            else:
                raise DiagramError(f"bad coupon field {part!r}")
        return coupon(ins, outs, value)
    raise DiagramError(f"unknown piece kind {kind!r}")


def format_piece(p: Piece) -> str:
    k = p.kind
    if k == "id":
        return f"id({p.labels[0]},{'+' if p.signs[0] > 0 else '-'})"
    if k in ("capR", "capL", "cupR", "cupL"):
        return f"{k}({p.labels[0]})"
    if k in ("crossP", "crossN"):
        assert p.psi is not None
        return f"{k}({p.labels[0]},{p.labels[1]};psi={p.psi})"
    if k == "coupon":
        ins = ",".join(f"{x}:{'+' if s > 0 else '-'}" for x, s in p.coupon_in)
        outs = ",".join(f"{x}:{'+' if s > 0 else '-'}" for x, s in p.coupon_out)
        assert p.value is not None
        return f"coupon(in={ins};out={outs};v={p.value})"
    raise DiagramError(f"unknown piece kind {k!r}")


def parse_diagram(text: str, data: CategoryData) -> ColoredDiagram:
    slices: list[list[Piece]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        slices.append([parse_piece(tok, data.root_order) for tok in _split_pieces(line)])
    if not slices:
        return ColoredDiagram.identity(data, ())
    source: list[tuple[str, int]] = []
    for p in slices[0]:
        source.extend(p.source(data))
    return ColoredDiagram.from_slices(data, tuple(source), slices)


def format_diagram(d: ColoredDiagram) -> str:
    return "\n".join(" ".join(format_piece(p) for p in sl) for sl in d.slices) + "\n"
