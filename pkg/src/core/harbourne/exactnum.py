"""
Exact arithmetic over the fields the engine works in: the rationals Q,
the prime fields F_p and the Eisenstein rationals Q(w), w^2 = -1 - w.

Rationals are plain ``fractions.Fraction`` values; the other two fields get
small immutable value classes with operator overloading so the geometry code
can stay field-agnostic.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Any, Optional, Union

from src.utils.constants import SUPPORTED_PRIMES

from .errors import FieldMismatchError, UnsupportedFieldError

_RATIONAL_TEXT = re.compile(r"^-?\d+(/\d+)?$")


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


@dataclass(frozen=True, slots=True)
class PrimeFieldElement:
    residue: int
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"F_{self.p}: {self.p} is not prime")
        if not 0 <= self.residue < self.p:
            raise ValueError(f"residue {self.residue} outside [0, {self.p})")

    def _coerce(self, other: Any) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise FieldMismatchError(f"cannot combine F_{self.p} with F_{other.p}")
            return other.residue
        if isinstance(other, int) and not isinstance(other, bool):
            return other % self.p
        raise FieldMismatchError(f"cannot combine F_{self.p} with {type(other).__name__}")

    def _make(self, value: int) -> "PrimeFieldElement":
        return PrimeFieldElement(value % self.p, self.p)

    def __add__(self, other: Any) -> "PrimeFieldElement":
        return self._make(self.residue + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PrimeFieldElement":
        return self._make(self.residue - self._coerce(other))

    def __rsub__(self, other: Any) -> "PrimeFieldElement":
        return self._make(self._coerce(other) - self.residue)

    def __mul__(self, other: Any) -> "PrimeFieldElement":
        return self._make(self.residue * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "PrimeFieldElement":
        return self._make(-self.residue)

    def __truediv__(self, other: Any) -> "PrimeFieldElement":
        return self * self._make(self._coerce(other)).inverse()

    def __bool__(self) -> bool:
        return self.residue != 0

    def inverse(self) -> "PrimeFieldElement":
        if not self.residue:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return self._make(pow(self.residue, -1, self.p))

    def __repr__(self) -> str:
        return f"{self.residue} (mod {self.p})"


@dataclass(frozen=True, slots=True)
class EisensteinRational:
    """a + b*w with w a primitive cube root of unity."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def _coerce(other: Any) -> "EisensteinRational":
        if isinstance(other, EisensteinRational):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return EisensteinRational(Fraction(other))
        raise FieldMismatchError(f"cannot combine Q(w) with {type(other).__name__}")

    def __add__(self, other: Any) -> "EisensteinRational":
        o = self._coerce(other)
        return EisensteinRational(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "EisensteinRational":
        o = self._coerce(other)
        return EisensteinRational(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Any) -> "EisensteinRational":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "EisensteinRational":
        o = self._coerce(other)
        # w^2 = -1 - w
        bd = self.b * o.b
        return EisensteinRational(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def __neg__(self) -> "EisensteinRational":
        return EisensteinRational(-self.a, -self.b)

    def __truediv__(self, other: Any) -> "EisensteinRational":
        return self * self._coerce(other).inverse()

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def conjugate(self) -> "EisensteinRational":
        return EisensteinRational(self.a - self.b, -self.b)

    def inverse(self) -> "EisensteinRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("0 has no inverse in Q(w)")
        c = self.conjugate()
        return EisensteinRational(c.a / n, c.b / n)

    def __repr__(self) -> str:
        return f"({self.a}) + ({self.b})w"


OMEGA = EisensteinRational(0, 1)

Scalar = Union[Fraction, PrimeFieldElement, EisensteinRational]


@dataclass(frozen=True, slots=True)
class FieldDescriptor:
    kind: str
    p: Optional[int] = None

    @classmethod
    def rational(cls) -> "FieldDescriptor":
        return cls("rational")

    @classmethod
    def eisenstein(cls) -> "FieldDescriptor":
        return cls("eisenstein")

    @classmethod
    def prime(cls, p: int) -> "FieldDescriptor":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p not in SUPPORTED_PRIMES:
            raise UnsupportedFieldError(
                f"F_{p} is not supported (choose from {', '.join(map(str, SUPPORTED_PRIMES))})"
            )
        return cls("prime", p)

    @classmethod
    def parse(cls, text: str) -> "FieldDescriptor":
        """Parse the CLI spelling: ``f3``, ``q``/``rational``, ``eisenstein``."""
        value = text.strip().lower()
        if value in ("q", "rational"):
            return cls.rational()
        if value in ("eisenstein", "qw", "q(w)"):
            return cls.eisenstein()
        if value.startswith("f") and value[1:].isdigit():
            return cls.prime(int(value[1:]))
        raise ValueError(f"unknown field {text!r}")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    @property
    def is_finite(self) -> bool:
        return self.kind == "prime"

    @property
    def tag(self) -> str:
        if self.kind == "prime":
            return f"F{self.p}"
        return "Q" if self.kind == "rational" else "Q(w)"

    def zero(self) -> Scalar:
        return self.coerce(0)

    def one(self) -> Scalar:
        return self.coerce(1)

    def coerce(self, n: int) -> Scalar:
        if self.kind == "prime":
            return PrimeFieldElement(n % self.p, self.p)
        if self.kind == "eisenstein":
            return EisensteinRational(n)
        return Fraction(n)

    def contains(self, x: Any) -> bool:
        try:
            return descriptor_of(x) == self
        except FieldMismatchError:
            return False

    def to_wire(self) -> dict:
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p}
        return {"kind": self.kind}

    def __str__(self) -> str:
        return self.tag


def descriptor_of(x: Any) -> FieldDescriptor:
    if isinstance(x, PrimeFieldElement):
        return FieldDescriptor("prime", x.p)
    if isinstance(x, EisensteinRational):
        return FieldDescriptor.eisenstein()
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return FieldDescriptor.rational()
    raise FieldMismatchError(f"{type(x).__name__} is not a field element")


def _same_field(x: Any, y: Any) -> None:
    fx, fy = descriptor_of(x), descriptor_of(y)
    if fx != fy:
        raise FieldMismatchError(f"descriptor mismatch: {fx} vs {fy}")


def field_add(x: Scalar, y: Scalar) -> Scalar:
    _same_field(x, y)
    return _normalize(x + y)


def field_sub(x: Scalar, y: Scalar) -> Scalar:
    _same_field(x, y)
    return _normalize(x - y)


def field_mul(x: Scalar, y: Scalar) -> Scalar:
    _same_field(x, y)
    return _normalize(x * y)


def field_neg(x: Scalar) -> Scalar:
    descriptor_of(x)
    return _normalize(-x)


def field_inverse(x: Scalar) -> Scalar:
    descriptor_of(x)
    if not x:
        raise ZeroDivisionError("field_inverse of zero")
    if isinstance(x, (PrimeFieldElement, EisensteinRational)):
        return x.inverse()
    return 1 / Fraction(x)


def _normalize(x: Any) -> Scalar:
    return Fraction(x) if isinstance(x, int) else x


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _where(path: str) -> str:
    return f"{path}: " if path else ""


def parse_rational(raw: Any, path: str = "") -> Fraction:
    if not isinstance(raw, str) or not _RATIONAL_TEXT.match(raw.strip()):
        raise ValueError(f"{_where(path)}expected a rational string 'n' or 'n/d', got {raw!r}")
    value = raw.strip()
    if "/" in value and int(value.split("/")[1]) == 0:
        raise ValueError(f"{_where(path)}zero denominator in {raw!r}")
    return Fraction(value)


def encode_scalar(x: Scalar) -> Any:
    if isinstance(x, PrimeFieldElement):
        return x.residue
    if isinstance(x, EisensteinRational):
        return [format_rational(x.a), format_rational(x.b)]
    return format_rational(x)


def decode_scalar(raw: Any, field: FieldDescriptor, path: str = "") -> Scalar:
    """Decode one certificate scalar; raises ValueError naming ``path``."""
    if field.kind == "prime":
        if isinstance(raw, bool) or not isinstance(raw, int) or not 0 <= raw < field.p:
            raise ValueError(f"{_where(path)}expected an integer in [0, {field.p}), got {raw!r}")
        return PrimeFieldElement(raw, field.p)
    if field.kind == "eisenstein":
        if not isinstance(raw, list) or len(raw) != 2:
            raise ValueError(f"{_where(path)}expected [\"a\", \"b\"], got {raw!r}")
        return EisensteinRational(
            parse_rational(raw[0], f"{path}[0]"), parse_rational(raw[1], f"{path}[1]")
        )
    return parse_rational(raw, path)
