"""Exact arithmetic in the cyclotomic field Q(zeta_N).

A scalar is stored as a coefficient vector over the power basis
{zeta^0, ..., zeta^(phi(N)-1)}, reduced modulo the N-th cyclotomic
polynomial Phi_N.  Coefficients are ``fractions.Fraction``, so every
operation is exact; there is no floating point anywhere in the engine
(``approx`` is a diagnostic printer only).

All structure constants of a loaded category live in a single field
Q(zeta_N); the order N is fixed per category file and mixing orders is
an error.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache


def _poly_trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return _poly_trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and _poly_trim(a):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        _poly_trim(a)
    return _poly_trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, low degree first, computed by dividing
    x^n - 1 by all Phi_d with d a proper divisor of n."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {n}")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class OrderMismatch(ValueError):
    """Two scalars from different cyclotomic fields were combined."""


class CycNumber:
    """An element of Q(zeta_N) in canonical reduced form.

    Instances are immutable and hashable; equality is coefficient-wise
    on the reduced representative, so it is decidable field equality.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: tuple[Fraction, ...]) -> None:
        self.order = order
        self.coeffs = coeffs
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def from_poly(cls, order: int, raw: list[Fraction]) -> CycNumber:
        """Reduce an arbitrary polynomial in zeta to canonical form."""
        if order < 1:
            raise ValueError(f"cyclotomic order must be >= 1, got {order}")
        phi = euler_phi(order)
        coeffs = [Fraction(c) for c in raw]
        # fold exponents >= N first (zeta^N = 1), cheaper than division
        folded = [Fraction(0)] * order if order > 1 else [Fraction(0)]
        for e, c in enumerate(coeffs):
            folded[e % order] += c
        _, rem = _poly_divmod(_poly_trim(folded), list(cyclotomic_polynomial(order)))
        rem = rem + [Fraction(0)] * (phi - len(rem))
        return cls(order, tuple(rem))

    @classmethod
    def from_rational(cls, order: int, value: Fraction | int) -> CycNumber:
        return cls.from_poly(order, [Fraction(value)])

    @classmethod
    def zero(cls, order: int) -> CycNumber:
        return cls(order, (Fraction(0),) * euler_phi(order))

    @classmethod
    def one(cls, order: int) -> CycNumber:
        return cls.from_rational(order, 1)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> CycNumber:
        power %= order
        return cls.from_poly(order, [Fraction(0)] * power + [Fraction(1)])

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self == CycNumber.one(self.order)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: CycNumber) -> None:
        if self.order != other.order:
            raise OrderMismatch(
                f"cannot combine scalars of orders {self.order} and {other.order}"
            )

    def __add__(self, other: CycNumber | int | Fraction) -> CycNumber:
        other = self._coerce(other)
        self._check(other)
        return CycNumber(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycNumber:
        return CycNumber(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other: CycNumber | int | Fraction) -> CycNumber:
        return self + (-self._coerce(other))

    def __rsub__(self, other: CycNumber | int | Fraction) -> CycNumber:
        return (-self) + self._coerce(other)

    def __mul__(self, other: CycNumber | int | Fraction) -> CycNumber:
        other = self._coerce(other)
        self._check(other)
        return CycNumber.from_poly(self.order, _poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> CycNumber:
        """Field inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        # invariant: r_i = s_i * self  (mod Phi_N)
        r0, r1 = list(cyclotomic_polynomial(self.order)), _poly_trim(list(self.coeffs))
        s0: list[Fraction] = []
        s1: list[Fraction] = [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # Phi_N is irreducible, so the gcd r0 is a nonzero constant
        assert len(r0) == 1
        return CycNumber.from_poly(self.order, [c / r0[0] for c in s0])

    def __truediv__(self, other: CycNumber | int | Fraction) -> CycNumber:
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other: CycNumber | int | Fraction) -> CycNumber:
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> CycNumber:
        base = self if exponent >= 0 else self.inverse()
        n = abs(exponent)
        out = CycNumber.one(self.order)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> CycNumber:
        """Galois map zeta -> zeta^(-1) (complex conjugation)."""
        n = self.order
        raw = [Fraction(0)] * n if n > 1 else [Fraction(0)]
        for e, c in enumerate(self.coeffs):
            raw[(-e) % n] += c
        return CycNumber.from_poly(n, raw)

    def _coerce(self, other: CycNumber | int | Fraction) -> CycNumber:
        if isinstance(other, CycNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.from_rational(self.order, other)
        return NotImplemented  # type: ignore[return-value]

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNumber.from_rational(self.order, other)
        if not isinstance(other, CycNumber):
            return False
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.coeffs))
        return self._hash

    # -- text form -------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"CycNumber({self.order}, {format_scalar(self)!r})"

    def approx(self) -> complex:
        """Floating-point shadow, for diagnostics only."""
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**e for e, c in enumerate(self.coeffs))


def cyc_reduce(order: int, raw: list[Fraction | int]) -> CycNumber:
    """Canonical representative of a raw polynomial in zeta_order."""
    return CycNumber.from_poly(order, [Fraction(c) for c in raw])


# ---------------------------------------------------------------------
# Text syntax:  integer combinations  `a0 + a1*z^1 + a2*z^2 (den d)`.
# `z` is the fixed primitive N-th root; exponents must be < N.
# Whitespace is optional everywhere.
# ---------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""(?P<sign>[+-])?\s*
        (?: (?P<coeff>\d+) \s* (?: \* \s* z (?:\^(?P<exp1>\d+))? )?
          | z (?:\^(?P<exp2>\d+))?
        )\s*""",
    re.VERBOSE,
)
_DEN_RE = re.compile(r"\(\s*den\s+(\d+)\s*\)\s*$")


class ScalarSyntaxError(ValueError):
    pass


def parse_scalar(text: str, order: int) -> CycNumber:
    """Parse the data-file scalar syntax into a CycNumber.

    Examples: ``1``, ``-1``, ``z^4``, ``1 + 2*z^4``, ``1 + 2*z^8 (den 3)``.
    Exponents >= order are rejected.
    """
    text = text.strip()
    den = 1
    m = _DEN_RE.search(text)
    if m:
        den = int(m.group(1))
        if den == 0:
            raise ScalarSyntaxError("zero denominator")
        text = text[: m.start()].strip()
    if not text:
        raise ScalarSyntaxError("empty scalar")
    coeffs = [Fraction(0)] * max(order, 1)
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarSyntaxError(f"bad scalar syntax at {text[pos:]!r}")
        sign = m.group("sign")
        if sign is None and not first:
            raise ScalarSyntaxError(f"missing +/- between terms in {text!r}")
        s = -1 if sign == "-" else 1
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        has_z = "z" in m.group(0)
        exp = 0
        if has_z:
            exp_txt = m.group("exp1") or m.group("exp2")
            exp = int(exp_txt) if exp_txt else 1
            if exp >= order:
                raise ScalarSyntaxError(
                    f"exponent {exp} not allowed for root order {order}"
                )
        coeffs[exp] += Fraction(s * coeff, den)
        pos = m.end()
        first = False
    return CycNumber.from_poly(order, coeffs)


def format_scalar(a: CycNumber) -> str:
    """Inverse of parse_scalar on its canonical output (bit-exact round trip)."""
    den = 1
    for c in a.coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    terms = []
    for e, c in enumerate(a.coeffs):
        n = c * den
        if n == 0:
            continue
        mag = abs(int(n))
        sign = "-" if n < 0 else "+"
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = f"z^{e}"
        else:
            body = f"{mag}*z^{e}"
        terms.append((sign, body))
    if not terms:
        out = "0"
    else:
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
    if den != 1:
        out += f" (den {den})"
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
