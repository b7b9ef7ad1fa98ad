"""Prime fields and Lucas binomial coefficients.

Field elements are plain Python ints in ``range(p)``; a :class:`PrimeField`
instance carries the modulus and the handful of operations that need it.
Callers go through the field object rather than doing ``% p`` themselves,
which keeps the door open for small extension fields later.
"""

from __future__ import annotations

from functools import lru_cache


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


class PrimeField:
    """The field with ``p`` elements, ``p`` prime."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"field order must be prime, got {p}")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    @property
    def q(self) -> int:
        return self.p

    def elements(self) -> range:
        return range(self.p)

    def units(self) -> range:
        return range(1, self.p)

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a prime field")
        return pow(x, self.p - 2, self.p)

    def signed(self, x: int) -> int:
        """Symmetric representative, used for human-readable output."""
        x %= self.p
        return x - self.p if 2 * x > self.p else x


@lru_cache(maxsize=None)
def field(p: int) -> PrimeField:
    return PrimeField(p)


def _binom_small(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for t in range(k):
        num *= n - t
        den *= t + 1
    return num // den


@lru_cache(maxsize=65536)
def lucas_binomial(i: int, j: int, p: int) -> int:
    """``binom(i, j) mod p`` for any integer ``i`` and ``j >= 0``.

    Negative upper indices use ``binom(-m, j) = (-1)^j binom(m + j - 1, j)``.
    Nonnegative ones are reduced digit by digit (Lucas).
    """
    if j < 0:
        raise ValueError("lower index must be nonnegative")
    if i < 0:
        sign = -1 if j % 2 else 1
        return (sign * lucas_binomial(-i + j - 1, j, p)) % p
    result = 1
    while i or j:
        i, di = divmod(i, p)
        j, dj = divmod(j, p)
        if dj > di:
            return 0
        result = result * _binom_small(di, dj) % p
    return result
