"""Quotient-ring descriptors and coefficient-vector polynomials."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormMismatch
from .modarith import check_modulus

XN_MINUS_1 = "x^n-1"
XN_PLUS_1 = "x^n+1"
TRINOMIAL = "x^n-x^(n/2)+1"
XN_MINUS_X_MINUS_1 = "x^n-x-1"
GENERAL = "general"

FORMS = (XN_MINUS_1, XN_PLUS_1, TRINOMIAL, XN_MINUS_X_MINUS_1, GENERAL)


def is_pow2(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


@dataclass(frozen=True)
class RingSpec:
    """Z_q[x]/(phi(x)) with phi in one of the recognized forms.

    ``phi`` is only stored for GENERAL (monic, ascending coefficients,
    length n+1); the named forms derive it on demand.
    """

    form: str
    n: int
    q: int
    phi: tuple | None = None

    def __post_init__(self):
        if self.form not in FORMS:
            raise FormMismatch(f"unknown ring form {self.form!r}")
        if self.n < 1:
            raise ValueError("ring degree must be positive")
        check_modulus(self.q)
        if self.form == TRINOMIAL:
            if self.n % 3 != 0 or not is_pow2(self.n // 3) or self.n // 3 < 2:
                raise FormMismatch("trinomial ring needs n = 3*2^e with e >= 1")
        if self.form == XN_MINUS_X_MINUS_1 and self.n < 2:
            raise FormMismatch("x^n - x - 1 needs n >= 2")
        if self.form == GENERAL:
            if self.phi is None or len(self.phi) != self.n + 1:
                raise FormMismatch("general ring needs phi of length n+1")
            if self.phi[-1] % self.q != 1:
                raise FormMismatch("phi must be monic")
        elif self.phi is not None:
            raise FormMismatch("phi is only stored for general rings")

    def phi_coeffs(self) -> list:
        """Ascending coefficients of phi, reduced mod q."""
        n, q = self.n, self.q
        if self.form == GENERAL:
            return [c % q for c in self.phi]
        c = [0] * (n + 1)
        c[n] = 1
        if self.form == XN_MINUS_1:
            c[0] = (-1) % q
        elif self.form == XN_PLUS_1:
            c[0] = 1
        elif self.form == TRINOMIAL:
            c[0] = 1
            c[n // 2] = (-1) % q
        elif self.form == XN_MINUS_X_MINUS_1:
            c[0] = (-1) % q
            c[1] = (-1) % q
        return c


@dataclass
class Poly:
    """Length-n canonical coefficient vector over its ring (ascending)."""

    coeffs: list
    ring: RingSpec

    def __post_init__(self):
        n, q = self.ring.n, self.ring.q
        if len(self.coeffs) != n:
            raise ValueError(f"expected {n} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < q for c in self.coeffs):
            raise ValueError("coefficients must be canonical in [0, q)")

    @classmethod
    def from_ints(cls, ints, ring: RingSpec) -> "Poly":
        """Reduce arbitrary integers (shorter vectors are zero-padded)."""
        q = ring.q
        c = [v % q for v in ints]
        if len(c) > ring.n:
            raise ValueError("too many coefficients for the ring degree")
        c += [0] * (ring.n - len(c))
        return cls(c, ring)

    @classmethod
    def zero(cls, ring: RingSpec) -> "Poly":
        return cls([0] * ring.n, ring)

    @classmethod
    def one(cls, ring: RingSpec) -> "Poly":
        return cls.from_ints([1], ring)

    @classmethod
    def random(cls, ring: RingSpec, rng) -> "Poly":
        return cls([rng.randrange(ring.q) for _ in range(ring.n)], ring)

    @classmethod
    def random_small(cls, ring: RingSpec, rng, bound: int) -> "Poly":
        """Uniform centered coefficients in [-bound, bound], stored canonically."""
        q = ring.q
        return cls([rng.randint(-bound, bound) % q for _ in range(ring.n)], ring)

    def add(self, other: "Poly") -> "Poly":
        self._check(other)
        q = self.ring.q
        return Poly([(x + y) % q for x, y in zip(self.coeffs, other.coeffs)], self.ring)

    def sub(self, other: "Poly") -> "Poly":
        self._check(other)
        q = self.ring.q
        return Poly([(x - y) % q for x, y in zip(self.coeffs, other.coeffs)], self.ring)

    def _check(self, other):
        if self.ring != other.ring:
            from .errors import RingMismatch

            raise RingMismatch("polynomials belong to different rings")
