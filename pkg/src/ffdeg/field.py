"""Prime field arithmetic F_p for 2 <= p < 2**31."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotPrime, ZeroInverse

MAX_MODULUS = 2**31
DEFAULT_PRIME = 65521


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; bases 2, 3, 5, 7 are exact below 3.2e9."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not (2 <= self.p < MAX_MODULUS):
            raise NotPrime(f"modulus must be an integer in [2, 2^31), got {self.p!r}")
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")

    def __call__(self, value: int) -> FieldElem:
        return FieldElem(value % self.p, self)

    # raw-int helpers; used on hot paths where wrapping is too slow
    def norm(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverse(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)


@dataclass(frozen=True)
class FieldElem:
    value: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            object.__setattr__(self, "value", self.value % self.field.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return int(other) % self.field.p

    def __add__(self, other) -> FieldElem:
        return FieldElem((self.value + self._coerce(other)) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other) -> FieldElem:
        return FieldElem((self.value - self._coerce(other)) % self.field.p, self.field)

    def __rsub__(self, other) -> FieldElem:
        return FieldElem((self._coerce(other) - self.value) % self.field.p, self.field)

    def __mul__(self, other) -> FieldElem:
        return FieldElem(self.value * self._coerce(other) % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self) -> FieldElem:
        return FieldElem(-self.value % self.field.p, self.field)

    def __truediv__(self, other) -> FieldElem:
        return self * ff_inv(self.field(self._coerce(other)), self.field)

    def __pow__(self, k: int) -> FieldElem:
        if k < 0:
            return ff_inv(self, self.field) ** (-k)
        return FieldElem(pow(self.value, k, self.field.p), self.field)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"F{self.field.p}({self.value})"


def ff_inv(a: FieldElem | int, f: FieldSpec) -> FieldElem:
    value = a.value if isinstance(a, FieldElem) else int(a) % f.p
    return FieldElem(f.inv(value), f)
