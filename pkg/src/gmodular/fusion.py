"""The G-graded fusion algebra of a loaded category and its modular data.

The fusion algebra is the free module on the simple labels with the
label-group multiplication extended bilinearly.  The involution sends a
label to its inverse, and the crossing acts through the label action.
For an invertible simple, the multiplicity numbers are 0/1 counting
whether two labels coincide.

Modular data: the S-matrix over neutral labels, the Gauss sums
Delta_+/Delta_-, the global dimension of the neutral part, and exact
invertibility of S by fraction-free (Bareiss) determinant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import CategoryData
from .checks import AxiomReport
from .cyclotomic import CycNumber


class FusionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FusionElement:
    """A vector in the fusion algebra, keyed by label symbols.

    ``grade`` is an optional homogeneity tag; when present, the support
    is confined to labels of that grade.
    """

    data: CategoryData = field(compare=False)
    coeffs: tuple[tuple[str, CycNumber], ...] = ()
    grade: str | None = None

    @staticmethod
    def make(
        data: CategoryData,
        coeffs: dict[str, CycNumber],
        grade: str | None = None,
    ) -> FusionElement:
        clean = {x: c for x, c in coeffs.items() if not c.is_zero()}
        for x in clean:
            if x not in data.labels:
                raise FusionError(f"unknown label {x}")
            if grade is not None and data.grade[x] != grade:
                raise FusionError(f"label {x} is not of grade {grade}")
        return FusionElement(data, tuple(sorted(clean.items())), grade)

    @staticmethod
    def basis(data: CategoryData, x: str) -> FusionElement:
        return FusionElement.make(data, {x: data.one()}, data.grade[x])

    def as_dict(self) -> dict[str, CycNumber]:
        return dict(self.coeffs)

    def coeff(self, x: str) -> CycNumber:
        return self.as_dict().get(x, self.data.zero())

    def _check(self, other: FusionElement) -> None:
        if self.data is not other.data and self.data != other.data:
            raise FusionError("fusion elements over different categories")

    def __add__(self, other: FusionElement) -> FusionElement:
        self._check(other)
        out = self.as_dict()
        for x, c in other.coeffs:
            out[x] = out.get(x, self.data.zero()) + c
        grade = self.grade if self.grade == other.grade else None
        return FusionElement.make(self.data, out, grade)

    def scale(self, k: CycNumber) -> FusionElement:
        return FusionElement.make(
            self.data, {x: c * k for x, c in self.coeffs}, self.grade
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FusionElement) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})<{x}>" for x, c in self.coeffs)


def fusion_mul(a: FusionElement, b: FusionElement) -> FusionElement:
    """Bilinear extension of label multiplication; grades multiply."""
    a._check(b)
    data = a.data
    out: dict[str, CycNumber] = {}
    for x, cx in a.coeffs:
        for y, cy in b.coeffs:
            z = data.labels.mul(x, y)
            out[z] = out.get(z, data.zero()) + cx * cy
    grade = None
    if a.grade is not None and b.grade is not None:
        grade = data.group.mul(a.grade, b.grade)
    return FusionElement.make(data, out, grade)


def fusion_star(a: FusionElement) -> FusionElement:
    """The involutive anti-automorphism <x> -> <x^-1>."""
    data = a.data
    out: dict[str, CycNumber] = {}
    for x, c in a.coeffs:
        xi = data.labels.inv(x)
        out[xi] = out.get(xi, data.zero()) + c
    grade = data.group.inv(a.grade) if a.grade is not None else None
    return FusionElement.make(data, out, grade)


def fusion_conj(alpha: str, a: FusionElement) -> FusionElement:
    """The crossing action <x> -> <phi_alpha(x)> on the fusion algebra."""
    data = a.data
    out: dict[str, CycNumber] = {}
    for x, c in a.coeffs:
        y = data.act(alpha, x)
        out[y] = out.get(y, data.zero()) + c
    grade = data.group.conj(a.grade, alpha) if a.grade is not None else None
    return FusionElement.make(data, out, grade)


def omega(data: CategoryData, alpha: str) -> FusionElement:
    """The canonical surgery color: sum of dim(x) <x> over grade-alpha labels."""
    return FusionElement.make(
        data, {x: data.d(x) for x in data.labels_of_grade(alpha)}, alpha
    )


def multiplicity(data: CategoryData, x: str, i: str) -> int:
    """N^i_{X_x}: 1 if the labels agree, else 0 (pointed case)."""
    return 1 if x == i else 0


def bareiss_determinant(matrix: list[list[CycNumber]], order: int) -> CycNumber:
    """Fraction-free determinant over Q(zeta).  Exact; no pivoted row
    scaling is needed because the entries form a field."""
    n = len(matrix)
    if n == 0:
        return CycNumber.one(order)
    m = [row[:] for row in matrix]
    sign = 1
    prev = CycNumber.one(order)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return CycNumber.zero(order)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


@dataclass(frozen=True)
class ModularReport:
    neutral_labels: tuple[str, ...]
    s_matrix: tuple[tuple[CycNumber, ...], ...]
    delta_plus: CycNumber
    delta_minus: CycNumber
    global_dim: CycNumber
    s_determinant: CycNumber
    invertible: bool


def s_entry(data: CategoryData, x: str, y: str) -> CycNumber:
    """S_{x,y} = tr(c_{y,x} c_{x,y}) with the neutral braiding
    c_{x,y} = (id (x) (phi_0)^-1) tau_{x,y}."""
    double = (
        data.p0(x).inverse()
        * data.p0(y).inverse()
        * data.t(x, y)
        * data.t(y, x)
    )
    return double * data.d(x) * data.d(y)


def modular_report(data: CategoryData) -> ModularReport:
    neutral = sorted(data.neutral_labels())
    s = tuple(tuple(s_entry(data, x, y) for y in neutral) for x in neutral)
    dplus = data.zero()
    dminus = data.zero()
    gdim = data.zero()
    for x in neutral:
        d2 = data.d(x) * data.d(x)
        v = data.neutral_twist(x)
        dplus = dplus + v * d2
        dminus = dminus + v.inverse() * d2
        gdim = gdim + d2
    det = bareiss_determinant([list(row) for row in s], data.root_order)
    return ModularReport(
        neutral_labels=tuple(neutral),
        s_matrix=s,
        delta_plus=dplus,
        delta_minus=dminus,
        global_dim=gdim,
        s_determinant=det,
        invertible=not det.is_zero(),
    )


def check_omega_properties(data: CategoryData) -> AxiomReport:
    """omega is conjugation invariant and star-compatible; the Gauss
    sums multiply to the global dimension (for a chosen rank, to D^2)."""
    rep = AxiomReport("omega")
    for alpha in sorted(data.group.elements):
        w = omega(data, alpha)
        for beta in sorted(data.group.elements):
            # phi_beta carries grade alpha to beta^-1 alpha beta
            conj = fusion_conj(beta, w)
            target = omega(data, data.group.conj(alpha, beta))
            rep.require(
                "omega-conjugation",
                (alpha, beta),
                _as_vector_scalar(conj, target),
                data.one(),
            )
        rep.require(
            "omega-star",
            (alpha,),
            _as_vector_scalar(fusion_star(w), omega(data, data.group.inv(alpha))),
            data.one(),
        )
    report = modular_report(data)
    rep.require(
        "delta-product",
        (),
        report.delta_plus * report.delta_minus,
        data.rankD * data.rankD,
    )
    return rep.finish()


def _as_vector_scalar(a: FusionElement, b: FusionElement) -> CycNumber:
    """1 if the two vectors are equal, else 0 (tuples compare exactly)."""
    return a.data.one() if a.coeffs == b.coeffs else a.data.zero()
