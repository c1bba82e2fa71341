"""Exact rate values: rationals >= 1, plus infinity.

Rates index the collapse filtration; they are compared exactly, so floats
are rejected everywhere. The string forms accepted are "p/q", "p", and
"inf".
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError


class Rate:
    """A rational number >= 1 or infinity, with exact comparisons.

    >>> Rate("3/2") < Rate(2) < Rate("inf")
    True
    >>> str(Rate("7/2")), str(Rate.infinity())
    ('7/2', 'inf')
    """

    __slots__ = ("_value",)

    def __init__(self, value):
        if isinstance(value, Rate):
            self._value = value._value
            return
        if value == "inf":
            self._value = None
            return
        if isinstance(value, float):
            raise ValidationError("rates must be exact rationals, not floats: %r" % (value,))
        try:
            q = Fraction(value)
        except (ValueError, ZeroDivisionError, TypeError):
            raise ValidationError("not a rate: %r" % (value,)) from None
        if q < 1:
            raise ValidationError("rates must be >= 1, got %s" % q)
        self._value = q

    @classmethod
    def infinity(cls):
        return cls("inf")

    @property
    def is_infinite(self):
        return self._value is None

    @property
    def fraction(self):
        if self._value is None:
            raise ValueError("infinite rate has no fraction value")
        return self._value

    def _key(self, other):
        if not isinstance(other, Rate):
            other = Rate(other)
        return other

    def __eq__(self, other):
        if not isinstance(other, (Rate, int, str, Fraction)):
            return NotImplemented
        return self._value == self._key(other)._value

    def __hash__(self):
        return hash(self._value)

    def __lt__(self, other):
        other = self._key(other)
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __str__(self):
        return "inf" if self._value is None else str(self._value)

    def __repr__(self):
        return "Rate(%r)" % str(self)
