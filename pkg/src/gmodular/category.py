"""Skeletal data for a pointed G-crossed ribbon category.

Everything is finite and scalar-valued: simple objects are invertible,
indexed by a label group L with X_x (x) X_y = X_{xy} and X_x* = X_{x^-1},
and every structure morphism is an element of Q(zeta_N) (module
``cyclotomic``).  Stored scalars:

* ``dim[x]``         spherical dimension, +1 or -1;
* ``phiA2[a][x][y]`` the scalar of (phi_a)_2(X_x, X_y);
* ``phiA0[a]``       the scalar of (phi_a)_0 : 1 -> phi_a(1);
* ``phi2[a][b][x]``  the scalar of phi_2(a,b)_{X_x} : phi_a phi_b (X_x) -> phi_{ba}(X_x);
* ``phi0[x]``        the scalar of (phi_0)_{X_x} : X_x -> phi_1(X_x);
* ``braid[x][y]``    the scalar of tau_{X_x, X_y} : X_x X_y -> X_y phi_{|y|}(X_x).

Duality is normalized rather than stored: ev = coev = 1 and
ev~ = coev~ = dim(x).  The zig-zags then force dim(x)^2 = 1, which the
pivotal check verifies together with multiplicativity of dim.

The crossing acts on labels by ``action[a][x]``, a group automorphism
per a with action[a][action[b][x]] = action[b*a][x] (phi is monoidal
from the opposite group) and grade(action[a][x]) = a^-1 grade(x) a.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cyclotomic import CycNumber, ScalarSyntaxError, euler_phi, parse_scalar


class CategoryError(ValueError):
    """Raised when a category document is malformed or structurally invalid."""


@dataclass(frozen=True)
class GroupTable:
    """A finite group given by its Cayley table over symbolic elements."""

    elements: tuple[str, ...]
    mult: dict[tuple[str, str], str]

    def __post_init__(self) -> None:
        elems = set(self.elements)
        if len(elems) != len(self.elements):
            raise CategoryError("duplicate group elements")
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.mult:
                    raise CategoryError(f"missing product {a}*{b}")
                if self.mult[(a, b)] not in elems:
                    raise CategoryError(f"product {a}*{b} leaves the element set")
        # unit
        unit = None
        for e in self.elements:
            if all(self.mult[(e, a)] == a and self.mult[(a, e)] == a for a in self.elements):
                unit = e
                break
        if unit is None:
            raise CategoryError("no unit element in group table")
        object.__setattr__(self, "_unit", unit)
        # inverses
        inv: dict[str, str] = {}
        for a in self.elements:
            for b in self.elements:
                if self.mult[(a, b)] == unit and self.mult[(b, a)] == unit:
                    inv[a] = b
                    break
            else:
                raise CategoryError(f"element {a} has no inverse")
        object.__setattr__(self, "_inv", inv)
        # associativity by full enumeration
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.mult[(self.mult[(a, b)], c)] != self.mult[(a, self.mult[(b, c)])]:
                        raise CategoryError(f"non-associative at ({a},{b},{c})")

    @property
    def unit(self) -> str:
        return self._unit  # type: ignore[attr-defined]

    def mul(self, a: str, b: str) -> str:
        return self.mult[(a, b)]

    def inv(self, a: str) -> str:
        return self._inv[a]  # type: ignore[attr-defined]

    def product(self, items: list[str]) -> str:
        out = self.unit
        for a in items:
            out = self.mul(out, a)
        return out

    def conj(self, a: str, by: str) -> str:
        """by^-1 * a * by."""
        return self.mul(self.mul(self.inv(by), a), by)

    def __contains__(self, a: str) -> bool:
        return a in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    @staticmethod
    def cyclic(n: int, prefix: str = "") -> GroupTable:
        names = [f"{prefix}{i}" for i in range(n)]
        mult = {
            (names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)
        }
        return GroupTable(tuple(names), mult)


@dataclass(frozen=True)
class CategoryData:
    """Immutable, fully verified skeletal category data."""

    group: GroupTable
    labels: GroupTable
    grade: dict[str, str]
    dim: dict[str, CycNumber]
    action: dict[str, dict[str, str]]
    phiA2: dict[tuple[str, str, str], CycNumber]
    phiA0: dict[str, CycNumber]
    phi2: dict[tuple[str, str, str], CycNumber]
    phi0: dict[str, CycNumber]
    braid: dict[tuple[str, str], CycNumber]
    rankD: CycNumber
    root_order: int
    name: str = field(default="", compare=False)

    # -- scalar helpers -------------------------------------------------

    def one(self) -> CycNumber:
        return CycNumber.one(self.root_order)

    def zero(self) -> CycNumber:
        return CycNumber.zero(self.root_order)

    def act(self, alpha: str, x: str) -> str:
        return self.action[alpha][x]

    def d(self, x: str) -> CycNumber:
        return self.dim[x]

    def t(self, x: str, y: str) -> CycNumber:
        return self.braid[(x, y)]

    def pA2(self, alpha: str, x: str, y: str) -> CycNumber:
        return self.phiA2[(alpha, x, y)]

    def pA0(self, alpha: str) -> CycNumber:
        return self.phiA0[alpha]

    def p2(self, alpha: str, beta: str, x: str) -> CycNumber:
        return self.phi2[(alpha, beta, x)]

    def p0(self, x: str) -> CycNumber:
        return self.phi0[x]

    def neutral_labels(self) -> list[str]:
        unit = self.group.unit
        return [x for x in self.labels.elements if self.grade[x] == unit]

    def labels_of_grade(self, alpha: str) -> list[str]:
        return [x for x in self.labels.elements if self.grade[x] == alpha]

    # monoidal-coherence scalar of (phi_a)_k on a word of signed labels,
    # built by the left fold F_2(X1...X_{k-1}, Xk) o (F_{k-1} (x) id);
    # the empty word contributes (phi_a)_0.
    def pA_chain(self, alpha: str, labels: list[str]) -> CycNumber:
        if not labels:
            return self.pA0(alpha)
        out = self.one()
        acc = labels[0]
        for x in labels[1:]:
            out = out * self.pA2(alpha, acc, x)
            acc = self.labels.mul(acc, x)
        return out

    # phi_alpha^1(X_x): the duality-comparison scalar of the pivotal
    # crossing functor (left form, with normalized ev/coev).
    def pankle(self, alpha: str, x: str) -> CycNumber:
        return self.pA0(alpha).inverse() * self.pA2(alpha, self.labels.inv(x), x)

    def twist(self, x: str) -> CycNumber:
        """theta_x = ev . (id (x) tau_{x,x}) . (coev~ (x) id), as a scalar."""
        return self.d(x) * self.t(x, x)

    def twist_inverse(self, x: str) -> CycNumber:
        """The two-sided inverse composite: coev . (tau^-1 (x) id) . (id (x) ev~)."""
        return self.d(x) * self.t(x, x).inverse()

    def neutral_twist(self, x: str) -> CycNumber:
        """v_x = (phi_0)_x^-1 theta_x, the standard twist of the neutral part."""
        return self.p0(x).inverse() * self.twist(x)

    def signed_label(self, x: str, sign: int) -> str:
        return x if sign > 0 else self.labels.inv(x)

    # -- bar / minus transforms of crossing-type isomorphisms ----------
    #
    # An isomorphism psi: X -> phi_alpha(Y) is recorded as (scalar,
    # alpha, y); the source label is forced to action[alpha][y].

    def bar(self, psi: CycNumber, alpha: str, y: str) -> tuple[CycNumber, str, str]:
        """psi-bar: Y -> phi_{alpha^-1}(X) for psi: X -> phi_alpha(Y)."""
        ai = self.group.inv(alpha)
        x = self.act(alpha, y)
        scalar = self.p0(y) * self.p2(ai, alpha, y).inverse() * psi.inverse()
        return scalar, ai, x

    def minus(self, psi: CycNumber, alpha: str, y: str) -> tuple[CycNumber, str, str]:
        """psi^-: X* -> phi_alpha(Y*) for psi: X -> phi_alpha(Y)."""
        scalar = psi.inverse() * self.pankle(alpha, y).inverse()
        return scalar, alpha, self.labels.inv(y)


def _is_homomorphism(table: GroupTable, target: GroupTable, f: dict[str, str]) -> bool:
    return all(
        f[table.mul(a, b)] == target.mul(f[a], f[b])
        for a in table.elements
        for b in table.elements
    )


def verify_structure(data: CategoryData) -> None:
    """Structural invariants enforced at load time (hard errors, not report
    entries): group laws, grading homomorphism and surjectivity, action
    well-formedness, nonzero scalars, braiding label constraint, rank."""
    G, L = data.group, data.labels
    if data.root_order < 1:
        raise CategoryError("root order must be positive")
    if set(data.grade) != set(L.elements):
        raise CategoryError("grade map must cover all labels")
    if not _is_homomorphism(L, G, data.grade):
        raise CategoryError("grade is not a group homomorphism")
    if set(data.grade.values()) != set(G.elements):
        raise CategoryError("grade is not surjective")
    for alpha in G.elements:
        amap = data.action[alpha]
        if sorted(amap.values()) != sorted(L.elements):
            raise CategoryError(f"action of {alpha} is not a bijection on labels")
        for x in L.elements:
            for y in L.elements:
                if amap[L.mul(x, y)] != L.mul(amap[x], amap[y]):
                    raise CategoryError(f"action of {alpha} is not an automorphism")
        for x in L.elements:
            if data.grade[amap[x]] != G.conj(data.grade[x], alpha):
                raise CategoryError(
                    f"action of {alpha} violates grading on label {x}"
                )
    for x in L.elements:
        if data.action[G.unit][x] != x:
            raise CategoryError("unit of G must act as the identity on labels")
    for alpha in G.elements:
        for beta in G.elements:
            for x in L.elements:
                if data.action[alpha][data.action[beta][x]] != data.action[G.mul(beta, alpha)][x]:
                    raise CategoryError(
                        f"label action is not compatible with phi_2 at ({alpha},{beta},{x})"
                    )
    # braiding label constraint: x y = y * action[|y|](x)
    for x in L.elements:
        for y in L.elements:
            if L.mul(x, y) != L.mul(y, data.action[data.grade[y]][x]):
                raise CategoryError(
                    f"braiding is ill-typed at ({x},{y}): "
                    "x*y != y*phi_|y|(x) in the label group"
                )
    # scalars present and nonzero
    phi = euler_phi(data.root_order)
    for name, scalars in (
        ("dim", data.dim.values()),
        ("phiA0", data.phiA0.values()),
        ("phi0", data.phi0.values()),
        ("phiA2", data.phiA2.values()),
        ("phi2", data.phi2.values()),
        ("braid", data.braid.values()),
    ):
        for s in scalars:
            if s.order != data.root_order:
                raise CategoryError(f"{name} scalar has wrong root order")
            if s.is_zero():
                raise CategoryError(f"zero structure scalar in {name}")
            if len(s.coeffs) != phi:
                raise CategoryError(f"{name} scalar is not in canonical form")
    for x in L.elements:
        for y in L.elements:
            if (x, y) not in data.braid:
                raise CategoryError(f"missing braiding scalar for ({x},{y})")
    # rank: D^2 = dim(C_1) = number of neutral labels (dims are +-1)
    neutral = data.neutral_labels()
    global_dim = data.zero()
    for x in neutral:
        global_dim = global_dim + data.d(x) * data.d(x)
    if data.rankD * data.rankD != global_dim:
        raise CategoryError(
            f"rank mismatch: rank^2 = {data.rankD * data.rankD} "
            f"but dim(C_1) = {global_dim}"
        )
    if data.rankD.is_zero():
        raise CategoryError("rank must be invertible")


# ---------------------------------------------------------------------
# Document format.  Sectioned UTF-8 text:
#
#   [scalars] root_order=12      # must come first
#   [group]
#   elements = e
#   mult e e = e
#   [labels]
#   elements = 0 1 2
#   mult 0 1 = 1 ...             # omitted lines are an error
#   [grade]
#   0 = e ...
#   [dim]
#   0 = 1 ...
#   [crossing]
#   action e 0 = 0               # default: identity
#   phiA2 e 0 1 = 1              # default: 1
#   phiA0 e = 1                  # default: 1
#   phi2 e e 0 = 1               # default: 1
#   phi0 0 = 1                   # default: 1
#   [braiding]
#   0 0 = 1 ...                  # all pairs required
#   [rank]
#   rank = z^1 + z^11
#
# `#` starts a comment; blank lines are ignored.
# ---------------------------------------------------------------------


def _parse_sections(text: str) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            close = line.find("]")
            if close < 0:
                raise CategoryError(f"malformed section header: {raw_line!r}")
            current = line[1:close].strip()
            sections.setdefault(current, [])
            rest = line[close + 1 :].strip()
            if rest:
                sections[current].append(rest)
            continue
        if current is None:
            raise CategoryError(f"content before first section: {raw_line!r}")
        sections[current].append(line)
    return sections


def _parse_group(lines: list[str], what: str) -> GroupTable:
    elements: tuple[str, ...] | None = None
    mult: dict[tuple[str, str], str] = {}
    for line in lines:
        if line.startswith("elements"):
            _, _, rhs = line.partition("=")
            elements = tuple(rhs.split())
        elif line.startswith("mult"):
            parts = line.split("=")
            if len(parts) != 2:
                raise CategoryError(f"bad mult line in [{what}]: {line!r}")
            lhs = parts[0].split()[1:]
            if len(lhs) != 2:
                raise CategoryError(f"bad mult line in [{what}]: {line!r}")
            mult[(lhs[0], lhs[1])] = parts[1].strip()
        else:
            raise CategoryError(f"unrecognized line in [{what}]: {line!r}")
    if elements is None:
        raise CategoryError(f"[{what}] is missing an elements line")
    return GroupTable(elements, mult)


def load_category_text(text: str, name: str = "") -> CategoryData:
    sections = _parse_sections(text)
    for required in ("scalars", "group", "labels", "grade", "dim", "braiding", "rank"):
        if required not in sections:
            raise CategoryError(f"missing [{required}] section")

    order: int | None = None
    for line in sections["scalars"]:
        key, _, value = line.partition("=")
        if key.strip() == "root_order":
            order = int(value.strip())
        else:
            raise CategoryError(f"unrecognized line in [scalars]: {line!r}")
    if order is None or order < 1:
        raise CategoryError("[scalars] must set root_order")

    def scalar(text_: str, where: str) -> CycNumber:
        try:
            return parse_scalar(text_, order)
        except ScalarSyntaxError as exc:
            raise CategoryError(f"bad scalar in {where}: {exc}") from exc

    group = _parse_group(sections["group"], "group")
    labels = _parse_group(sections["labels"], "labels")

    grade: dict[str, str] = {}
    for line in sections["grade"]:
        lhs, _, rhs = line.partition("=")
        x, alpha = lhs.strip(), rhs.strip()
        if x not in labels or alpha not in group:
            raise CategoryError(f"bad grade line: {line!r}")
        grade[x] = alpha

    dim: dict[str, CycNumber] = {}
    for line in sections["dim"]:
        lhs, _, rhs = line.partition("=")
        x = lhs.strip()
        if x not in labels:
            raise CategoryError(f"bad dim line: {line!r}")
        dim[x] = scalar(rhs, f"dim {x}")
    for x in labels.elements:
        if x not in dim:
            raise CategoryError(f"missing dim for label {x}")

    one = CycNumber.one(order)
    action: dict[str, dict[str, str]] = {
        a: {x: x for x in labels.elements} for a in group.elements
    }
    phiA2: dict[tuple[str, str, str], CycNumber] = {
        (a, x, y): one
        for a in group.elements
        for x in labels.elements
        for y in labels.elements
    }
    phiA0: dict[str, CycNumber] = {a: one for a in group.elements}
    phi2: dict[tuple[str, str, str], CycNumber] = {
        (a, b, x): one
        for a in group.elements
        for b in group.elements
        for x in labels.elements
    }
    phi0: dict[str, CycNumber] = {x: one for x in labels.elements}

    for line in sections.get("crossing", []):
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise CategoryError(f"bad crossing line: {line!r}")
        parts = lhs.split()
        rhs = rhs.strip()
        kind = parts[0]
        args = parts[1:]
        if kind == "action" and len(args) == 2:
            a, x = args
            if a not in group or x not in labels or rhs not in labels:
                raise CategoryError(f"bad action line: {line!r}")
            action[a][x] = rhs
        elif kind == "phiA2" and len(args) == 3:
            a, x, y = args
            phiA2[(a, x, y)] = scalar(rhs, line)
        elif kind == "phiA0" and len(args) == 1:
            phiA0[args[0]] = scalar(rhs, line)
        elif kind == "phi2" and len(args) == 3:
            a, b, x = args
            phi2[(a, b, x)] = scalar(rhs, line)
        elif kind == "phi0" and len(args) == 1:
            phi0[args[0]] = scalar(rhs, line)
        else:
            raise CategoryError(f"unrecognized crossing line: {line!r}")

    braid: dict[tuple[str, str], CycNumber] = {}
    for line in sections["braiding"]:
        lhs, eq, rhs = line.partition("=")
        parts = lhs.split()
        if not eq or len(parts) != 2:
            raise CategoryError(f"bad braiding line: {line!r}")
        x, y = parts
        if x not in labels or y not in labels:
            raise CategoryError(f"unknown label in braiding line: {line!r}")
        braid[(x, y)] = scalar(rhs, line)

    rankD: CycNumber | None = None
    for line in sections["rank"]:
        key, _, value = line.partition("=")
        if key.strip() == "rank":
            rankD = scalar(value, "rank")
        else:
            raise CategoryError(f"unrecognized line in [rank]: {line!r}")
    if rankD is None:
        raise CategoryError("[rank] must set rank")

    data = CategoryData(
        group=group,
        labels=labels,
        grade=grade,
        dim=dim,
        action=action,
        phiA2=phiA2,
        phiA0=phiA0,
        phi2=phi2,
        phi0=phi0,
        braid=braid,
        rankD=rankD,
        root_order=order,
        name=name,
    )
    verify_structure(data)
    return data


def load_category(path: str) -> CategoryData:
    with open(path, encoding="utf-8") as fh:
        return load_category_text(fh.read(), name=path)
