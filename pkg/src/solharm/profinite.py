"""Profinite integers as coherent residue towers, with exact Haar averaging.

An element of the profinite completion of the integers is represented by its
residues along a divisibility chain of moduli M_1 | M_2 | ... | M_K.  The
default chain is the distinct values of lcm(1..k) for k up to a configured
depth, which is cofinal in the divisibility order: every modulus b <= depth
is resolvable.  Equality and all operations are exact at the stored depth;
genuine profinite elements are infinite objects and the API is explicit
about truncation (see :class:`PrecisionError`).

Haar integration over the group is exact cylinder averaging: a function that
only depends on the residue mod m integrates to the plain average of its m
values, because the normalized Haar measure gives each residue class mass
1/m.  No Monte Carlo is involved anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError, PrecisionError
from .rationals import RationalAngle

DEFAULT_DEPTH = 16


def lcm_depth_required(m: int) -> int:
    """Smallest depth K such that m divides lcm(1..K).

    Equals the largest prime power dividing m (and 1 for m == 1).
    """
    if m < 1:
        raise DomainError(f"modulus must be positive, got {m}")
    required = 1
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            pk = 1
            while rest % p == 0:
                rest //= p
                pk *= p
            required = max(required, pk)
        p += 1
    if rest > 1:
        required = max(required, rest)
    return required


def largest_prime_factor(m: int) -> int:
    """Largest prime dividing m (1 for m == 1).

    A depth-K lcm tower contains every prime up to K, and integer-backed
    elements deepen along those primes on demand, so this is the depth an
    analysis session needs up front for denominator m.
    """
    if m < 1:
        raise DomainError(f"modulus must be positive, got {m}")
    largest = 1
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            largest = p
            while rest % p == 0:
                rest //= p
        p += 1
    if rest > 1:
        largest = rest
    return largest


@dataclass(frozen=True)
class ModulusTower:
    """Strictly increasing divisibility chain of positive moduli."""

    levels: tuple[int, ...]

    def __post_init__(self):
        levels = tuple(int(m) for m in self.levels)
        if not levels:
            raise DomainError("empty modulus tower")
        if levels[0] < 1:
            raise DomainError("tower levels must be positive")
        for lo, hi in zip(levels, levels[1:]):
            if hi <= lo or hi % lo != 0:
                raise DomainError(
                    f"tower levels must be strictly increasing and divide: {lo} -> {hi}"
                )
        object.__setattr__(self, "levels", levels)

    @classmethod
    def default(cls, depth: int = DEFAULT_DEPTH) -> "ModulusTower":
        """Distinct values of lcm(1..k) for k = 1..depth."""
        if depth < 1:
            raise DomainError("tower depth must be >= 1")
        levels = []
        acc = 1
        for k in range(1, depth + 1):
            acc = math.lcm(acc, k)
            if not levels or acc > levels[-1]:
                levels.append(acc)
        return cls(tuple(levels))

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def top(self) -> int:
        return self.levels[-1]

    def resolve_level(self, m: int) -> int | None:
        """Index of the first level divisible by m, or None."""
        for i, level in enumerate(self.levels):
            if level % m == 0:
                return i
        return None

    def refined_to(self, m: int) -> "ModulusTower":
        """A tower that resolves m: self, or self with one level appended."""
        if self.resolve_level(m) is not None:
            return self
        return ModulusTower(self.levels + (math.lcm(self.top, m),))


DEFAULT_TOWER = ModulusTower.default(DEFAULT_DEPTH)


@dataclass(frozen=True)
class ProfiniteInt:
    """Coherent residue vector along a modulus tower.

    ``integer`` records a known integer preimage when the element came from
    :func:`embed_int`; such elements resolve any modulus on demand.  Opaque
    towers (no preimage) raise :class:`PrecisionError` beyond their depth.
    """

    tower: ModulusTower
    residues: tuple[int, ...]
    integer: int | None = None

    def __post_init__(self):
        residues = tuple(int(r) for r in self.residues)
        levels = self.tower.levels
        if len(residues) != len(levels):
            raise DomainError("residue list length must match tower depth")
        for r, m in zip(residues, levels):
            if not 0 <= r < m:
                raise DomainError(f"residue {r} out of range for modulus {m}")
        for i in range(len(levels) - 1):
            if residues[i + 1] % levels[i] != residues[i]:
                raise DomainError(
                    f"incoherent residues at levels {levels[i]} | {levels[i + 1]}"
                )
        if self.integer is not None and any(
            self.integer % m != r for r, m in zip(residues, levels)
        ):
            raise DomainError("integer preimage disagrees with residues")
        object.__setattr__(self, "residues", residues)

    def __add__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        tower, a, b = _align(self, other)
        res = tuple((x + y) % m for x, y, m in zip(a, b, tower.levels))
        n = None
        if self.integer is not None and other.integer is not None:
            n = self.integer + other.integer
        return ProfiniteInt(tower, res, n)

    def __neg__(self) -> "ProfiniteInt":
        res = tuple((-r) % m for r, m in zip(self.residues, self.tower.levels))
        n = None if self.integer is None else -self.integer
        return ProfiniteInt(self.tower, res, n)

    def __sub__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return self + (-other)

    def __str__(self) -> str:
        if self.integer is not None:
            return f"profinite({self.integer})"
        return f"profinite{list(self.residues)} mod {list(self.tower.levels)}"


def embed_int(n: int, tower: ModulusTower | None = None) -> ProfiniteInt:
    """Image of an integer under the dense embedding into the profinite group."""
    if tower is None:
        tower = DEFAULT_TOWER
    return ProfiniteInt(tower, tuple(n % m for m in tower.levels), int(n))


def pf_add(s: ProfiniteInt, t: ProfiniteInt) -> ProfiniteInt:
    return s + t


def pf_neg(t: ProfiniteInt) -> ProfiniteInt:
    return -t


def _align(s: ProfiniteInt, t: ProfiniteInt) -> tuple[ModulusTower, tuple, tuple]:
    """Bring two elements onto a common tower.

    Equal towers pass through.  Otherwise the shared chain is the set of
    common levels; integer-backed elements adapt to the other side's tower.
    """
    if s.tower == t.tower:
        return s.tower, s.residues, t.residues
    if s.integer is not None:
        return t.tower, embed_int(s.integer, t.tower).residues, t.residues
    if t.integer is not None:
        return s.tower, s.residues, embed_int(t.integer, s.tower).residues
    common = [m for m in s.tower.levels if m in set(t.tower.levels)]
    if not common:
        raise DomainError("incompatible towers with no common levels")
    tower = ModulusTower(tuple(common))
    si = {m: r for m, r in zip(s.tower.levels, s.residues)}
    ti = {m: r for m, r in zip(t.tower.levels, t.residues)}
    return tower, tuple(si[m] for m in common), tuple(ti[m] for m in common)


def residue(t: ProfiniteInt | int, m: int) -> int:
    """The residue of t mod m, in [0, m).

    m must divide some tower level; integer-backed elements deepen on demand.
    """
    if m < 1:
        raise DomainError(f"modulus must be positive, got {m}")
    if isinstance(t, int):
        return t % m
    level = t.tower.resolve_level(m)
    if level is not None:
        return t.residues[level] % m
    if t.integer is not None:
        return t.integer % m
    raise PrecisionError(m, lcm_depth_required(m))


def approx_sequence(t: ProfiniteInt, depth: int) -> int:
    """The depth-th integer approximant: t_k = t mod M_k, read off the tower.

    The sequence (t_k) converges to t in the profinite topology.
    """
    if not 1 <= depth <= t.tower.depth:
        raise PrecisionError(
            t.tower.levels[-1],
            depth,
            f"depth {depth} exceeds tower depth {t.tower.depth}",
        )
    return t.residues[depth - 1]


def haar_average(
    f: Callable[[int], complex] | Callable[[np.ndarray], np.ndarray],
    modulus: int,
    tower: ModulusTower | None = None,
) -> complex:
    """Exact Haar integral of a cylinder function depending only on t mod m.

    Computes (1/m) * sum over the m residue classes, which equals the Haar
    integral because the measure restricted to each class mod m is uniform
    with mass 1/m.  ``f`` receives residues in [0, m) and may be vectorized
    over an integer ndarray.
    """
    if modulus < 1:
        raise DomainError(f"modulus must be positive, got {modulus}")
    if tower is not None and tower.resolve_level(modulus) is None:
        raise PrecisionError(modulus, lcm_depth_required(modulus))
    rs = np.arange(modulus)
    try:
        vals = np.asarray(f(rs), dtype=complex)
        if vals.shape != rs.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([f(int(r)) for r in rs], dtype=complex)
    # pairwise summation keeps the roundoff of these short sums near eps
    return complex(np.sum(vals) / modulus)


def coherent_random(
    tower: ModulusTower, rng: np.random.Generator
) -> ProfiniteInt:
    """A uniformly random element at the tower's depth (opaque, no preimage)."""
    top = int(rng.integers(0, tower.top))
    return ProfiniteInt(tower, tuple(top % m for m in tower.levels))
