"""Elementary number theory shared by the rest of the package.

Everything here is exact integer arithmetic.  Python integers are unbounded,
so there is no overflow regime; the one function that can explode
combinatorially (phi_preimage_divisors) takes an explicit cost guard instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FactoredInteger",
    "divisors",
    "euler_phi",
    "factorize",
    "glm_order",
    "is_prime",
    "minkowski_bound",
    "ord_p",
    "phi_preimage_divisors",
    "prime_sieve",
    "primes_array",
    "primes_upto",
]

# Witness set makes Miller-Rabin deterministic for n < 3.3e24, far beyond
# anything this package computes with.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array of length limit+1; index i is True iff i is prime."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(limit**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return sieve


def primes_array(limit: int) -> np.ndarray:
    return np.flatnonzero(prime_sieve(limit)).astype(np.int64)


def primes_upto(x: int) -> list[int]:
    """All primes <= x, ascending."""
    if x < 2:
        return []
    return primes_array(x).tolist()


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, e), ...) with p ascending."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    for q in (2, 3):
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
    q = 5
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
        # skip multiples of 2 and 3
        q += 2 if q % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for q, e in self.factors:
            if e < 1 or not is_prime(q):
                raise ValueError(f"bad factor ({q}, {e})")
            prod *= q**e
        if prod != self.value or self.value < 1:
            raise ValueError(f"factors do not multiply to {self.value}")

    @classmethod
    def from_int(cls, n: int) -> "FactoredInteger":
        return cls(n, factorize(n))

    def ord_p(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def divisors(n: int) -> list[int]:
    """Sorted divisors of n >= 1."""
    out = [1]
    for q, e in factorize(n):
        out = [d * q**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    out = n
    for q, _ in factorize(n):
        out = out // q * (q - 1)
    return out


def ord_p(n: int, p: int) -> int:
    """p-adic valuation of n != 0."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    e = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        e += 1
    return e


def phi_preimage_divisors(m: int, limit: int = 2 * 10**7) -> list[int]:
    """Sorted list of all N with euler_phi(N) | m.

    Complete: phi(N) >= sqrt(N/2), so phi(N) | m forces N <= 2*m*m.  The scan
    is brute force over that range; `limit` guards the cost (raise it
    explicitly for larger m).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    bound = 2 * m * m
    if bound > limit:
        raise ValueError(
            f"phi preimage scan for m={m} needs N <= {bound} > limit={limit}; "
            "pass a larger limit to accept the cost"
        )
    if bound <= 10**5:
        return [n for n in range(1, bound + 1) if m % euler_phi(n) == 0]
    # sieve phi for big ranges: phi[n] starts as n, then phi -= phi/p per prime p | n
    phi = np.arange(bound + 1, dtype=np.int64)
    for q in range(2, bound + 1):
        if phi[q] == q:  # q prime
            phi[q::q] -= phi[q::q] // q
    hits = np.flatnonzero(m % phi[1:] == 0) + 1
    return hits.tolist()


def glm_order(m: int, p: int, n: int) -> tuple[int, int]:
    """Order of GL_m(Z/p^n Z), returned as (c, G) with order = c * p**G, gcd(c, p) = 1.

    #GL_m(Z/p^n) = p^((n-1) m^2) * prod_{i=0}^{m-1} (p^m - p^i).
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    total = p ** ((n - 1) * m * m)
    for i in range(m):
        total *= p**m - p**i
    g = ord_p(total, p)
    return total // p**g, g


def minkowski_bound(n: int) -> int:
    """Minkowski's bound: every finite subgroup order of GL_n(Q) divides this.

    prod_p p^(e_p) with e_p = sum_{k>=0} floor(n / (p^k (p-1))); only primes
    with p - 1 <= n contribute.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = 1
    for p in primes_upto(n + 1):
        e = 0
        q = p - 1
        while q <= n:
            e += n // q
            q *= p
        out *= p**e
    return out
