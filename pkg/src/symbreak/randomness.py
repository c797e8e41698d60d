"""Randomness configurations, realizations and their exact probabilities.

Parties are indexed ``0..n-1`` internally; source ids are ``1..k``.  A bit
string's position ``r`` holds the bit of round ``r + 1``, so a prefix is the
realization at an earlier time.
"""

from __future__ import annotations

import hashlib
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from functools import reduce
from typing import Iterator, Mapping, Sequence

from .errors import CapExceeded, InvalidConfiguration

DEFAULT_CAP = 24


@dataclass(frozen=True)
class RandomnessConfiguration:
    """Which source each party is wired to (``source_of[p]`` in ``1..k``)."""

    source_of: tuple

    def __post_init__(self):
        object.__setattr__(self, "source_of", tuple(int(s) for s in self.source_of))
        if not self.source_of:
            raise InvalidConfiguration("need at least one party")
        used = set(self.source_of)
        if used != set(range(1, len(used) + 1)):
            raise InvalidConfiguration(
                f"source ids must be exactly 1..k, got {sorted(used)}"
            )

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "RandomnessConfiguration":
        """Canonical assignment: the first ``counts[0]`` parties use source 1, and so on."""
        if not counts or any(c < 1 for c in counts):
            raise InvalidConfiguration(f"source counts must be positive, got {list(counts)}")
        return cls(tuple(i + 1 for i, c in enumerate(counts) for _ in range(c)))

    @property
    def n(self) -> int:
        return len(self.source_of)

    @property
    def k(self) -> int:
        return max(self.source_of)

    @property
    def counts(self) -> tuple:
        return source_counts(self)

    @property
    def gcd(self) -> int:
        return reduce(gcd, self.counts)

    def members(self, source: int) -> tuple:
        return tuple(p for p, s in enumerate(self.source_of) if s == source)

    def to_json(self) -> dict:
        return {"n": self.n, "source_of": list(self.source_of)}

    @classmethod
    def from_json(cls, data: Mapping) -> "RandomnessConfiguration":
        cfg = cls(tuple(data["source_of"]))
        if "n" in data and int(data["n"]) != cfg.n:
            raise InvalidConfiguration(f"n={data['n']} but {cfg.n} parties listed")
        return cfg


@dataclass(frozen=True)
class Realization:
    """Per-party bit strings after ``t`` rounds (a facet of the realization complex)."""

    strings: tuple

    def __post_init__(self):
        object.__setattr__(self, "strings", tuple(self.strings))
        if not self.strings:
            raise InvalidConfiguration("realization needs at least one party")
        lengths = {len(s) for s in self.strings}
        if len(lengths) != 1:
            raise InvalidConfiguration(f"strings have unequal lengths {sorted(lengths)}")
        if any(set(s) - {"0", "1"} for s in self.strings):
            raise InvalidConfiguration("strings must be over {0,1}")

    @property
    def n(self) -> int:
        return len(self.strings)

    @property
    def t(self) -> int:
        return len(self.strings[0])

    def prefix(self, t: int) -> "Realization":
        if not 0 <= t <= self.t:
            raise ValueError(f"prefix length {t} out of range 0..{self.t}")
        return Realization(tuple(s[:t] for s in self.strings))

    def succeeds(self, earlier: "Realization") -> bool:
        """Strict succession: longer, and every string extends the earlier one."""
        return (
            self.n == earlier.n
            and self.t > earlier.t
            and self.prefix(earlier.t) == earlier
        )

    def to_json(self) -> dict:
        return {"t": self.t, "strings": list(self.strings)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Realization":
        rho = cls(tuple(data["strings"]))
        if "t" in data and int(data["t"]) != rho.t:
            raise InvalidConfiguration(f"t={data['t']} but strings have length {rho.t}")
        return rho


@dataclass(frozen=True)
class SourceDraw:
    """Bits produced by each source (index ``c - 1`` for source ``c``)."""

    source_strings: tuple

    def __post_init__(self):
        object.__setattr__(self, "source_strings", tuple(self.source_strings))
        if len({len(s) for s in self.source_strings}) > 1:
            raise InvalidConfiguration("source strings must share one length")

    @property
    def k(self) -> int:
        return len(self.source_strings)

    @property
    def t(self) -> int:
        return len(self.source_strings[0]) if self.source_strings else 0


def source_counts(alpha: RandomnessConfiguration) -> tuple:
    """``(n_1, ..., n_k)``: how many parties listen to each source."""
    c = Counter(alpha.source_of)
    return tuple(c[i] for i in range(1, alpha.k + 1))


def realize(alpha: RandomnessConfiguration, draw: SourceDraw) -> Realization:
    if draw.k != alpha.k:
        raise InvalidConfiguration(f"draw has {draw.k} sources, configuration needs {alpha.k}")
    return Realization(tuple(draw.source_strings[s - 1] for s in alpha.source_of))


def is_consistent(rho: Realization, alpha: RandomnessConfiguration) -> bool:
    if rho.n != alpha.n:
        return False
    seen: dict[int, str] = {}
    for s, x in zip(alpha.source_of, rho.strings):
        if seen.setdefault(s, x) != x:
            return False
    return True


def probability(rho: Realization, alpha: RandomnessConfiguration) -> Fraction:
    """Exact ``Pr[rho | alpha]``: zero when two co-sourced parties disagree, else ``2**(-t*k)``."""
    if not is_consistent(rho, alpha):
        return Fraction(0)
    return Fraction(1, 2 ** (rho.t * alpha.k))


def all_strings(t: int) -> list[str]:
    return ["".join(bits) for bits in product("01", repeat=t)]


def enumerate_consistent(
    alpha: RandomnessConfiguration, t: int, cap: int = DEFAULT_CAP
) -> Iterator[Realization]:
    """Every realization with positive probability, sources counted lexicographically."""
    if alpha.k * t > cap:
        raise CapExceeded(f"k*t = {alpha.k * t} exceeds cap {cap}")
    for strings in product(all_strings(t), repeat=alpha.k):
        yield realize(alpha, SourceDraw(strings))


def enumerate_all(n: int, t: int, cap: int = DEFAULT_CAP) -> Iterator[Realization]:
    """All ``2**(n*t)`` facets of the realization complex at time ``t``."""
    if n * t > cap:
        raise CapExceeded(f"n*t = {n * t} exceeds cap {cap}")
    for strings in product(all_strings(t), repeat=n):
        yield Realization(strings)


# ---------------------------------------------------------------------------
# seeding
# ---------------------------------------------------------------------------


def derive_seed(seed: int, *path) -> int:
    """Child seed for ``path`` under ``seed``; stable across runs and platforms.

    Every random choice in the package hangs off one root seed through this
    function, e.g. ``derive_seed(seed, "trial", 17, "source", 2)``.
    """
    key = "/".join([str(seed), *map(str, path)])
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def sample_draw(alpha: RandomnessConfiguration, t: int, seed: int) -> SourceDraw:
    rng = random.Random(derive_seed(seed, "draw", alpha.k, t))
    strings = []
    for _ in range(alpha.k):
        bits = rng.getrandbits(t) if t else 0
        strings.append(format(bits, f"0{t}b") if t else "")
    return SourceDraw(tuple(strings))


def set_partitions(n: int) -> Iterator[RandomnessConfiguration]:
    """Every configuration on ``n`` parties, as restricted growth strings."""

    def grow(prefix: list[int], k: int):
        if len(prefix) == n:
            yield RandomnessConfiguration(tuple(prefix))
            return
        for s in range(1, k + 2):
            yield from grow(prefix + [s], max(k, s))

    yield from grow([], 0)


def integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple]:
    """Partitions of ``n`` as nondecreasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield tuple(sorted((first,) + rest))
