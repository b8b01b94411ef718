"""Temporal transformation rules between construction classes.

A construction's class is the label of the vehicle's incoming arc.  For each
metaphor we take the first-occurrence year of every class; a rule
``Ci -> Cj`` gains one unit of support for each metaphor in which ``Ci`` is
attested strictly earlier than ``Cj``.  Its conditional probability divides
that support by the number of metaphors in which ``Ci`` occurs at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Mapping, Sequence

from .constructions import MetaphorProfile
from .corpus import ROOT
from .errors import EmptyInput


@dataclass(frozen=True)
class ClassTimeline:
    lemma: str
    class_foys: Mapping[str, int] = field(hash=False)

    def __contains__(self, label: str) -> bool:
        return label in self.class_foys

    def __getitem__(self, label: str) -> int:
        return self.class_foys[label]


def class_timeline(profile: MetaphorProfile) -> ClassTimeline:
    if not profile.constructions:
        raise EmptyInput(f"profile {profile.lemma!r} has no constructions")
    foys: dict[str, int] = {}
    for c in profile.constructions:
        label = c.incoming_label
        foys[label] = min(foys.get(label, c.first_occurrence_year), c.first_occurrence_year)
    return ClassTimeline(profile.lemma, dict(sorted(foys.items())))


@dataclass(frozen=True)
class TransformationRule:
    antecedent: str
    consequent: str
    frequency: int
    conditional_probability: float

    def to_dict(self) -> dict:
        return {
            "antecedent": self.antecedent,
            "consequent": self.consequent,
            "frequency": self.frequency,
            "conditional_probability": self.conditional_probability,
        }

    def __str__(self) -> str:
        return (f"{_pretty(self.antecedent)} → {_pretty(self.consequent)}"
                f"  p={self.conditional_probability:.2f}  n={self.frequency}")


def _pretty(label: str) -> str:
    governor = "ROOT" if label == ROOT else "X"
    return f"{label}({governor}, VEHICLE)"


def mine_rules(timelines: Sequence[ClassTimeline], min_frequency: int = 6,
               min_probability: float = 0.8,
               denominator: str = "antecedent") -> list[TransformationRule]:
    """Mine ordering rules across metaphors.

    ``denominator="antecedent"`` divides support by the number of metaphors
    containing the antecedent class; ``"both"`` divides by the number
    containing both classes.  Pairs with no support are never returned.
    """
    if not timelines:
        raise EmptyInput("no timelines to mine")
    if denominator not in ("antecedent", "both"):
        raise ValueError(f"unknown denominator {denominator!r}")

    support: dict[tuple[str, str], int] = {}
    together: dict[tuple[str, str], int] = {}
    present: dict[str, int] = {}
    for tl in timelines:
        for label in tl.class_foys:
            present[label] = present.get(label, 0) + 1
        for ci, cj in permutations(tl.class_foys, 2):
            together[ci, cj] = together.get((ci, cj), 0) + 1
            if tl.class_foys[ci] < tl.class_foys[cj]:
                support[ci, cj] = support.get((ci, cj), 0) + 1

    rules = []
    for (ci, cj), n in support.items():
        base = present[ci] if denominator == "antecedent" else together[ci, cj]
        p = n / base
        if n >= min_frequency and p >= min_probability:
            rules.append(TransformationRule(ci, cj, n, p))
    rules.sort(key=lambda r: (-r.conditional_probability, -r.frequency,
                              r.antecedent, r.consequent))
    return rules


@dataclass(frozen=True)
class OrderingPrediction:
    rule: TransformationRule
    antecedent_year: int
    consequent_year: int

    @property
    def satisfied(self) -> bool:
        return self.antecedent_year < self.consequent_year

    @property
    def violated(self) -> bool:
        return not self.satisfied


def apply_rules_report(rules: Sequence[TransformationRule],
                       timeline: ClassTimeline) -> list[OrderingPrediction]:
    """Check each applicable rule against one metaphor's timeline."""
    return [
        OrderingPrediction(r, timeline[r.antecedent], timeline[r.consequent])
        for r in rules
        if r.antecedent in timeline and r.consequent in timeline
    ]


def rules_to_json(rules: Sequence[TransformationRule]) -> str:
    return json.dumps([r.to_dict() for r in rules], indent=2) + "\n"


def rules_from_json(text: str) -> list[TransformationRule]:
    return [TransformationRule(d["antecedent"], d["consequent"], int(d["frequency"]),
                               float(d["conditional_probability"]))
            for d in json.loads(text)]


def rules_report(rules: Sequence[TransformationRule]) -> str:
    return "".join(f"{r}\n" for r in rules)
