"""Exact solvability probabilities and the eventual-solvability classifiers."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .knowledge import Model, adversarial_ports, refine
from .randomness import DEFAULT_CAP, RandomnessConfiguration, enumerate_consistent, probability
from .tasks import OutputComplex, solves_realization

CSV_COLUMNS = ("t", "numerator", "denominator", "solving_count", "total_count")


@dataclass(frozen=True)
class CurveRow:
    t: int
    probability: Fraction
    solving: int
    total: int


@dataclass
class SolvabilityCurve:
    alpha: RandomnessConfiguration
    model: str
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.t, r.probability.numerator, r.probability.denominator, r.solving, r.total])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_json(),
            "model": self.model,
            "rows": [
                {
                    "t": r.t,
                    "numerator": r.probability.numerator,
                    "denominator": r.probability.denominator,
                    "solving_count": r.solving,
                    "total_count": r.total,
                }
                for r in self.rows
            ],
        }


def _count_solving(model: Model, alpha: RandomnessConfiguration, O: OutputComplex, t: int, cap: int):
    solving = total = 0
    for rho in enumerate_consistent(alpha, t, cap):
        total += 1
        if solves_realization(model, rho, O):
            solving += 1
    return solving, total


def exact_probability(
    model: Model, alpha: RandomnessConfiguration, O: OutputComplex, t: int, cap: int = DEFAULT_CAP
) -> Fraction:
    """``Pr[S(t) | alpha]`` as an exact fraction, by summing over consistent realizations."""
    result = Fraction(0)
    for rho in enumerate_consistent(alpha, t, cap):
        if solves_realization(model, rho, O):
            result += probability(rho, alpha)
    return result


def solvability_curve(
    model: Model,
    alpha: RandomnessConfiguration,
    O: OutputComplex,
    ts: Iterable[int],
    cap: int = DEFAULT_CAP,
) -> SolvabilityCurve:
    curve = SolvabilityCurve(alpha, model.describe())
    for t in ts:
        solving, total = _count_solving(model, alpha, O, t, cap)
        # every consistent realization has probability 2**(-t*k) and there are exactly 2**(t*k)
        curve.rows.append(CurveRow(t, Fraction(solving, total), solving, total))
    return curve


# ---------------------------------------------------------------------------
# eventual solvability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EventualVerdict:
    solvable: bool | None  # None: no criterion covers the case
    criterion: str

    @property
    def label(self) -> str:
        if self.solvable is None:
            return f"unknown ({self.criterion})"
        return f"{'solvable' if self.solvable else 'unsolvable'} ({self.criterion})"


def decide_blackboard(alpha: RandomnessConfiguration) -> EventualVerdict:
    counts = alpha.counts
    for i, c in enumerate(counts, start=1):
        if c == 1:
            return EventualVerdict(True, f"n_{i}=1")
    return EventualVerdict(False, f"min n_i={min(counts)}")


def decide_message_passing_worst_case(alpha: RandomnessConfiguration) -> EventualVerdict:
    g = alpha.gcd
    return EventualVerdict(g == 1, f"gcd={g}")


def decide_message_passing_fixed_ports(alpha: RandomnessConfiguration) -> EventualVerdict:
    """With the ports fixed, ``gcd = 1`` still guarantees success; ``gcd > 1`` is open."""
    g = alpha.gcd
    if g == 1:
        return EventualVerdict(True, "gcd=1")
    return EventualVerdict(None, "fixed ports, g>1")


def blackboard_lower_bound(k: int, t: int) -> tuple[Fraction, Fraction]:
    """Probability that one lone party's string differs from every other source's.

    Returns ``(((2**t - 1) / 2**t) ** (k - 1), 1 - (k - 1) / 2**t)``; the
    second value is the weaker union-style bound and can be negative.
    """
    if k < 1 or t < 1:
        raise ValueError("need k >= 1 and t >= 1")
    tight = Fraction(2**t - 1, 2**t) ** (k - 1)
    crude = 1 - Fraction(k - 1, 2**t)
    return tight, crude


# ---------------------------------------------------------------------------
# falsification harnesses
# ---------------------------------------------------------------------------


@dataclass
class SuccessionReport:
    t: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def succession_check(
    model: Model, alpha: RandomnessConfiguration, O: OutputComplex, t: int, cap: int = DEFAULT_CAP
) -> SuccessionReport:
    """Check that every solving realization at time ``s < t`` stays solving one round later."""
    report = SuccessionReport(t)
    for s in range(t):
        for rho in enumerate_consistent(alpha, s, cap):
            if not solves_realization(model, rho, O):
                continue
            for ext in enumerate_consistent(alpha, 1, cap):
                longer = type(rho)(tuple(a + b for a, b in zip(rho.strings, ext.strings)))
                report.checked += 1
                if not solves_realization(model, longer, O):
                    report.violations.append((rho, longer))
    return report


@dataclass
class DivisibilityReport:
    alpha: RandomnessConfiguration
    g: int
    histograms: dict = field(default_factory=dict)  # t -> Counter(class size -> count)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def sizes_seen(self, t: int) -> set:
        return set(self.histograms.get(t, {}))


def divisibility_audit(alpha: RandomnessConfiguration, t: int, cap: int = DEFAULT_CAP) -> DivisibilityReport:
    """Under adversarial ports, every consistency class size must be a multiple of the gcd."""
    ports, _ = adversarial_ports(alpha)
    model = Model.message_passing(ports)
    g = alpha.gcd
    report = DivisibilityReport(alpha, g)
    for s in range(1, t + 1):
        hist: Counter = Counter()
        for rho in enumerate_consistent(alpha, s, cap):
            for cls in refine(model, rho).classes:
                hist[len(cls)] += 1
                if len(cls) % g:
                    report.violations.append((rho, sorted(cls)))
        report.histograms[s] = hist
    return report


def dumps_curve(curve: SolvabilityCurve) -> str:
    return json.dumps(curve.to_json(), indent=2)


def t_range(text: str) -> Sequence[int]:
    """Parse ``"A..B"`` (inclusive) or a single integer; ``B < A`` gives an empty range."""
    if ".." in text:
        a, b = text.split("..", 1)
        return range(int(a), int(b) + 1)
    return range(int(text), int(text) + 1)
