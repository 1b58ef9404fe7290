"""Exhaustive axiom checkers for loaded category data.

Every coherence diagram of the pointed theory collapses to one scalar
equation per instance tuple, because all hom spaces have dimension at
most one.  A check enumerates its equations over all tuples and returns
an AxiomReport listing each violated instance as
(axiom id, instance, lhs, rhs); an empty report means the axiom holds.

Instances are enumerated in sorted order so reports are deterministic
and reproducible one equation at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import CategoryData
from .cyclotomic import CycNumber


@dataclass
class Violation:
    axiom: str
    instance: tuple[str, ...]
    lhs: CycNumber
    rhs: CycNumber

    def __str__(self) -> str:
        inst = ",".join(self.instance)
        return f"{self.axiom}[{inst}]: {self.lhs} != {self.rhs}"


@dataclass
class AxiomReport:
    name: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def require(self, axiom: str, instance: tuple[str, ...], lhs: CycNumber, rhs: CycNumber) -> None:
        self.checked += 1
        if lhs != rhs:
            self.violations.append(Violation(axiom, instance, lhs, rhs))

    def finish(self) -> AxiomReport:
        self.violations.sort(key=lambda v: (v.axiom, v.instance))
        return self

    def summary(self) -> str:
        status = "pass" if self.passed else f"FAIL ({len(self.violations)} violations)"
        return f"{self.name}: {self.checked} equations, {status}"


def check_pivotal(data: CategoryData) -> AxiomReport:
    """Duality axioms under the normalization ev = coev = 1,
    ev~ = coev~ = dim: both zig-zags, left dual = right dual, the two
    monoidal constraints, unit duality, and dim_l = dim_r = dim."""
    rep = AxiomReport("pivotal")
    L = data.labels
    one = data.one()
    for x in sorted(L.elements):
        d = data.d(x)
        # zig-zag with ev/coev is 1 = 1; the tilde zig-zag forces dim^2 = 1
        rep.require("zigzag-left", (x,), one * one, one)
        rep.require("zigzag-right", (x,), d * d, one)
        # left dual of id_x vs right dual of id_x
        rep.require("dual-left-right", (x,), one * one, d * d)
        # spherical dimensions
        rep.require("dim-left", (x,), one * d, d)
        rep.require("dim-right", (x,), d * one, d)
    for x in sorted(L.elements):
        for y in sorted(L.elements):
            # monoidal constraint: left vs right comparison of (y x)* with x* y*
            lhs = one * one * one
            rhs = data.d(y) * data.d(x) * data.d(L.mul(y, x))
            rep.require("monoidal-constraint", (x, y), lhs, rhs)
    rep.require("unit-duality", (), one, data.d(L.unit))
    return rep.finish()


def check_crossing(data: CategoryData) -> AxiomReport:
    """The seven coherence diagrams of the crossing, the unit condition
    (phi_0)_1 = (phi_1)_0, and pivotality of every crossing functor."""
    rep = AxiomReport("crossing")
    G, L = data.group, data.labels
    gs = sorted(G.elements)
    ls = sorted(L.elements)
    for a in gs:
        for x in ls:
            for y in ls:
                for z in ls:
                    rep.require(
                        "crossing1",
                        (a, x, y, z),
                        data.pA2(a, x, y) * data.pA2(a, L.mul(x, y), z),
                        data.pA2(a, y, z) * data.pA2(a, x, L.mul(y, z)),
                    )
    for a in gs:
        for x in ls:
            rep.require(
                "crossing2-right", (a, x), data.pA0(a) * data.pA2(a, x, L.unit), data.one()
            )
            rep.require(
                "crossing2-left", (a, x), data.pA0(a) * data.pA2(a, L.unit, x), data.one()
            )
    for a in gs:
        for b in gs:
            ba = G.mul(b, a)
            for x in ls:
                for y in ls:
                    rep.require(
                        "crossing3",
                        (a, b, x, y),
                        data.pA2(ba, x, y) * data.p2(a, b, x) * data.p2(a, b, y),
                        data.p2(a, b, L.mul(x, y))
                        * data.pA2(b, x, y)
                        * data.pA2(a, data.act(b, x), data.act(b, y)),
                    )
    for a in gs:
        for b in gs:
            rep.require(
                "crossing4",
                (a, b),
                data.pA0(G.mul(b, a)),
                data.p2(a, b, L.unit) * data.pA0(b) * data.pA0(a),
            )
    for x in ls:
        for y in ls:
            rep.require(
                "crossing7",
                (x, y),
                data.p0(L.mul(x, y)),
                data.pA2(G.unit, x, y) * data.p0(x) * data.p0(y),
            )
    for a in gs:
        for b in gs:
            for c in gs:
                for x in ls:
                    rep.require(
                        "crossing5",
                        (a, b, c, x),
                        data.p2(b, c, x) * data.p2(a, G.mul(c, b), x),
                        data.p2(a, b, data.act(c, x)) * data.p2(G.mul(b, a), c, x),
                    )
    for a in gs:
        for x in ls:
            rep.require(
                "crossing6-right", (a, x), data.p0(x) * data.p2(a, G.unit, x), data.one()
            )
            rep.require(
                "crossing6-left",
                (a, x),
                data.p0(data.act(a, x)) * data.p2(G.unit, a, x),
                data.one(),
            )
    rep.require("phi0-unit", (), data.p0(L.unit), data.pA0(G.unit))
    # pivotal crossing: phi_a^l(x) = phi_a^r(x)
    for a in gs:
        for x in ls:
            lhs = data.pA0(a).inverse() * data.pA2(a, L.inv(x), x)
            rhs = (
                data.pA0(a).inverse()
                * data.pA2(a, x, L.inv(x))
                * data.d(x)
                * data.d(data.act(a, x))
            )
            rep.require("crossing-pivotal", (a, x), lhs, rhs)
    return rep.finish()


def check_braiding(data: CategoryData) -> AxiomReport:
    """The three braiding axioms, plus the derived unit laws and the
    quantum Yang-Baxter equation as redundant cross-checks."""
    rep = AxiomReport("braiding")
    G, L = data.group, data.labels
    ls = sorted(L.elements)
    for x in ls:
        for y in ls:
            gy = data.grade[y]
            for z in ls:
                gz = data.grade[z]
                rep.require(
                    "eq-braiding1",
                    (x, y, z),
                    data.t(x, L.mul(y, z)),
                    data.p2(gz, gy, x) * data.t(x, y) * data.t(data.act(gy, x), z),
                )
                rep.require(
                    "eq-braiding2",
                    (x, y, z),
                    data.t(L.mul(x, y), z),
                    data.pA2(gz, x, y) * data.t(x, z) * data.t(y, z),
                )
    for a in sorted(G.elements):
        for x in ls:
            for y in ls:
                b = data.grade[y]
                rep.require(
                    "eq-braiding3",
                    (a, x, y),
                    data.t(x, y) * data.pA2(a, x, y),
                    data.pA2(a, y, data.act(b, x))
                    * data.p2(a, b, x).inverse()
                    * data.p2(G.conj(b, a), a, x)
                    * data.t(data.act(a, x), data.act(a, y)),
                )
    # lem-braiding (a): tau_{x,1} = (phi_0)_x
    for x in ls:
        rep.require("braid-unit-right", (x,), data.t(x, L.unit), data.p0(x))
        # lem-braiding (b): tau_{1,x} = id (x) (phi_|x|)_0
        rep.require("braid-unit-left", (x,), data.t(L.unit, x), data.pA0(data.grade[x]))
    # lem-braiding (c): Yang-Baxter
    for x in ls:
        for y in ls:
            b = data.grade[y]
            for z in ls:
                c = data.grade[z]
                rep.require(
                    "yang-baxter",
                    (x, y, z),
                    data.t(x, y) * data.t(data.act(b, x), z),
                    data.p2(c, b, x).inverse()
                    * data.p2(G.conj(b, c), c, x)
                    * data.t(data.act(c, x), data.act(c, y))
                    * data.t(x, z),
                )
    return rep.finish()


def check_ribbon(data: CategoryData) -> AxiomReport:
    """Self-duality of the twist, with the two-sided-inverse law,
    twist multiplicativity, and twist conjugation as redundant checks."""
    rep = AxiomReport("ribbon")
    G, L = data.group, data.labels
    ls = sorted(L.elements)
    one = data.one()
    for x in ls:
        a = data.grade[x]
        ai = G.inv(a)
        # (theta_x)* = (phi_0)_x (phi_2(a^-1,a)_x)^-1 phi_{a^-1}^1(phi_a x) theta_{(phi_a x)*}
        rep.require(
            "ribbon-self-dual",
            (x,),
            data.twist(x),
            data.p0(x)
            * data.p2(ai, a, x).inverse()
            * data.pankle(ai, x)
            * data.twist(L.inv(x)),
        )
        rep.require(
            "twist-two-sided-inverse",
            (x,),
            data.twist(x) * data.twist_inverse(x),
            one,
        )
    for x in ls:
        a = data.grade[x]
        for y in ls:
            b = data.grade[y]
            rep.require(
                "twist-mult",
                (x, y),
                data.twist(L.mul(x, y)),
                data.pA2(G.mul(a, b), x, y)
                * data.p2(b, a, x)
                * data.p2(G.conj(a, b), b, y)
                * data.twist(x)
                * data.twist(y)
                * data.t(x, y)
                * data.t(data.act(b, y), data.act(b, x)),
            )
    for b in sorted(G.elements):
        for x in ls:
            a = data.grade[x]
            rep.require(
                "twist-conj",
                (b, x),
                data.twist(x),
                data.p2(b, a, x).inverse()
                * data.p2(G.conj(a, b), b, x)
                * data.twist(data.act(b, x)),
            )
    return rep.finish()


def check_psibar(data: CategoryData) -> AxiomReport:
    """Coherence of the bar/minus transforms: bar is an involution and
    commutes with minus (bar of psi^- equals (bar psi)^-)."""
    rep = AxiomReport("psibar")
    psi_samples = [data.one(), CycNumber.zeta(data.root_order) + 1]
    for a in sorted(data.group.elements):
        for y in sorted(data.labels.elements):
            for k, psi in enumerate(psi_samples):
                if psi.is_zero():
                    continue
                tag = (a, y, str(k))
                s1, a1, y1 = data.bar(*data.minus(psi, a, y))
                s2, a2, y2 = data.minus(*data.bar(psi, a, y))
                assert (a1, y1) == (a2, y2)
                rep.require("bar-minus-interchange", tag, s1, s2)
                s3, a3, y3 = data.bar(*data.bar(psi, a, y))
                assert (a3, y3) == (a, y)
                rep.require("bar-involution", tag, s3, psi)
    return rep.finish()


def check_graded_dims(data: CategoryData) -> AxiomReport:
    """Every graded component has the same squared-dimension total as
    the neutral one."""
    rep = AxiomReport("graded-dims")
    neutral_total = data.zero()
    for x in data.neutral_labels():
        neutral_total = neutral_total + data.d(x) * data.d(x)
    for g in sorted(data.group.elements):
        total = data.zero()
        for x in data.labels_of_grade(g):
            total = total + data.d(x) * data.d(x)
        rep.require("graded-dim-sum", (g,), total, neutral_total)
    return rep.finish()


def derived_identity_report(data: CategoryData) -> AxiomReport:
    """Consequences of the axioms that double as transcription checks:
    the two closed forms of the inverse braiding, the neutral-twist
    multiplicativity, and the unit-conjugation normalizations."""
    rep = AxiomReport("derived")
    G, L = data.group, data.labels
    ls = sorted(L.elements)
    for x in ls:
        for y in ls:
            b = data.grade[y]
            # lem-braiding (d), first composite (left duality of x)
            rep.require(
                "tau-inverse-left",
                (x, y),
                data.t(x, y).inverse(),
                data.t(L.inv(x), y) * data.pankle(b, x),
            )
            # lem-braiding (d), second composite (right duality of y)
            rep.require(
                "tau-inverse-right",
                (x, y),
                data.t(x, y).inverse(),
                data.t(data.act(b, x), L.inv(y))
                * data.p0(x).inverse()
                * data.p2(G.inv(b), b, x),
            )
    # neutral twist: v(xy) = v(x) v(y) c(x,y) c(y,x) on the kernel of the grading
    for x in data.neutral_labels():
        for y in data.neutral_labels():
            cxy = data.p0(x).inverse() * data.t(x, y)
            cyx = data.p0(y).inverse() * data.t(y, x)
            rep.require(
                "neutral-twist-mult",
                (x, y),
                data.neutral_twist(L.mul(x, y)),
                data.neutral_twist(x) * data.neutral_twist(y) * cxy * cyx,
            )
    # theta_1 = (phi_0)_1 = (phi_1)_0
    rep.require("twist-unit", (), data.twist(L.unit), data.p0(L.unit))
    rep.require("twist-unit-phiA0", (), data.twist(L.unit), data.pA0(G.unit))
    return rep.finish()


ALL_CHECKS = (
    ("pivotal", check_pivotal),
    ("crossing", check_crossing),
    ("braiding", check_braiding),
    ("ribbon", check_ribbon),
    ("graded-dims", check_graded_dims),
)


def check_all(data: CategoryData) -> list[AxiomReport]:
    return [fn(data) for _, fn in ALL_CHECKS]
