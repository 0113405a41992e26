"""Coefficient fields: the rationals and prime fields GF(p).

Elements are plain Python values: ``fractions.Fraction`` over QQ and
``int`` in ``range(p)`` over GF(p). Keeping them unboxed matters because the
Groebner engine touches coefficients in its innermost loops.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """QQ when ``p`` is None, otherwise the prime field with ``p`` elements."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"GF({self.p}): characteristic must be prime")

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def __call__(self, value) -> int | Fraction:
        """Coerce an int or Fraction into the field."""
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def reducer(self):
        """Return a normalizing function for raw int/Fraction arithmetic results."""
        p = self.p
        if p:
            return lambda a: a % p
        return lambda a: a

    def signed(self, a) -> int | Fraction:
        """Symmetric representative, used for printing GF(p) elements."""
        if self.p and a > self.p // 2:
            return a - self.p
        return a

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text.upper() in ("QQ", "Q"):
            return QQ
        m = re.fullmatch(r"(?:GF|F|ZZ/)\(?\s*(\d+)\s*\)?", text, flags=re.IGNORECASE)
        if not m:
            raise ValueError(f"unrecognized field {text!r}; use QQ or GF(p)")
        return cls(int(m.group(1)))


def GF(p: int) -> Field:
    return Field(p)


QQ = Field(None)
DEFAULT_FIELD = Field(32003)
