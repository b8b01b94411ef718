"""Grouping vehicle instances into constructions by their dependency-slot signature.

A signature is the vehicle's incoming relation plus the ordered labels of its
direct dependents, with a ``CORE-WORD`` marker at the vehicle's own linear
position.  Groups that are too small (fewer than ``min_cluster_size``
instances) or cover too little of the retained data are set aside as
outliers; the rest become constructions.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Instance
from .errors import EmptyInput

log = logging.getLogger(__name__)

CORE = "CORE-WORD"


@dataclass(frozen=True, order=True)
class Signature:
    incoming_label: str
    slot_sequence: tuple[str, ...]

    def __post_init__(self):
        if self.slot_sequence.count(CORE) != 1:
            raise ValueError(f"slot sequence needs exactly one {CORE}: {self.slot_sequence}")

    @property
    def constituent_number(self) -> int:
        return len(self.slot_sequence) - 1

    def pattern(self) -> str:
        return " ".join(self.slot_sequence)

    def __str__(self) -> str:
        return f"{self.incoming_label}: {self.pattern()}"


def signature_of(instance: Instance) -> Signature:
    """Signature for one instance; CORE-WORD goes after every dependent that precedes it."""
    before = sum(1 for i in instance.dependent_indices if i < instance.core_index)
    slots = list(instance.dependent_labels)
    slots.insert(before, CORE)
    return Signature(instance.incoming_label, tuple(slots))


@dataclass(frozen=True)
class Construction:
    signature: Signature
    instances: tuple[Instance, ...]
    coverage: float

    @property
    def frequency(self) -> int:
        return len(self.instances)

    @property
    def constituent_number(self) -> int:
        return self.signature.constituent_number

    @property
    def first_occurrence_year(self) -> int:
        return min(i.year for i in self.instances)

    @property
    def incoming_label(self) -> str:
        return self.signature.incoming_label

    def sort_key(self):
        return (-self.frequency, self.first_occurrence_year,
                self.signature.incoming_label, self.signature.slot_sequence)


@dataclass(frozen=True)
class MetaphorProfile:
    lemma: str
    constructions: tuple[Construction, ...]
    outlier_count: int
    total_instances: int
    outliers: tuple[Instance, ...] = field(default=(), compare=False, repr=False)

    @property
    def retained_instances(self) -> int:
        return sum(c.frequency for c in self.constructions)

    @property
    def first_occurrence_year(self) -> int | None:
        if not self.constructions:
            return None
        return min(c.first_occurrence_year for c in self.constructions)


def _group(instances: Sequence[Instance]) -> dict[Signature, list[Instance]]:
    groups: dict[Signature, list[Instance]] = defaultdict(list)
    for inst in instances:
        groups[signature_of(inst)].append(inst)
    return groups


def cluster(instances: Sequence[Instance], min_cluster_size: int = 7,
            min_coverage: float = 0.04, iterate: bool = True) -> MetaphorProfile:
    """Group instances by exact signature and apply the size and coverage filters.

    Coverage is measured against the instances retained by the size filter.
    With ``iterate=True`` the coverage filter is re-applied against the
    shrinking denominator until nothing more is removed; ``iterate=False``
    applies it once.
    """
    if not instances:
        raise EmptyInput("no instances to cluster")
    lemmas = {i.lemma for i in instances}
    if len(lemmas) > 1:
        raise ValueError(f"instances mix several lemmas: {sorted(lemmas)}")

    groups = _group(instances)
    kept = {sig: members for sig, members in groups.items() if len(members) >= min_cluster_size}
    while kept:
        retained = sum(len(m) for m in kept.values())
        survivors = {sig: m for sig, m in kept.items() if len(m) / retained >= min_coverage}
        if len(survivors) == len(kept):
            break
        kept = survivors
        if not iterate:
            break

    retained = sum(len(m) for m in kept.values())
    constructions = sorted(
        (Construction(sig, tuple(m), len(m) / retained) for sig, m in kept.items()),
        key=Construction.sort_key,
    )
    outliers = tuple(i for sig, m in groups.items() if sig not in kept for i in m)
    if not constructions:
        log.warning("every instance of %r fell below the cluster filters", instances[0].lemma)
    return MetaphorProfile(
        lemma=instances[0].lemma,
        constructions=tuple(constructions),
        outlier_count=len(outliers),
        total_instances=len(instances),
        outliers=outliers,
    )


@dataclass(frozen=True)
class ConstructionRow:
    pattern: str
    incoming_label: str
    constituent_number: int
    first_occurrence_year: int
    frequency: int
    coverage: float


@dataclass(frozen=True)
class ProfileSummary:
    lemma: str
    construction_count: int
    retained_instances: int
    total_instances: int
    rows: tuple[ConstructionRow, ...]
    warning: str | None = None

    @property
    def instance_ratio(self) -> str:
        return f"{self.retained_instances}/{self.total_instances}"


def summarize(profile: MetaphorProfile) -> ProfileSummary:
    rows = tuple(
        ConstructionRow(c.signature.pattern(), c.incoming_label, c.constituent_number,
                        c.first_occurrence_year, c.frequency, c.coverage)
        for c in profile.constructions
    )
    warning = None
    if not rows:
        warning = "no construction survived the filters"
    return ProfileSummary(profile.lemma, len(rows), profile.retained_instances,
                          profile.total_instances, rows, warning)


CSV_COLUMNS = ["lemma", "signature", "incoming_label", "frequency",
               "constituent_number", "first_occurrence_year", "coverage"]


def constructions_csv(profiles: Sequence[MetaphorProfile]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in profiles:
        for c in p.constructions:
            writer.writerow([p.lemma, c.signature.pattern(), c.incoming_label, c.frequency,
                             c.constituent_number, c.first_occurrence_year,
                             f"{c.coverage:.6f}"])
    return buf.getvalue()


def profile_to_dict(profile: MetaphorProfile) -> dict:
    return {
        "lemma": profile.lemma,
        "total_instances": profile.total_instances,
        "retained_instances": profile.retained_instances,
        "outlier_count": profile.outlier_count,
        "constructions": [
            {
                "incoming_label": c.incoming_label,
                "slot_sequence": list(c.signature.slot_sequence),
                "frequency": c.frequency,
                "constituent_number": c.constituent_number,
                "first_occurrence_year": c.first_occurrence_year,
                "coverage": round(c.coverage, 12),
                "instances": [i.to_dict() for i in c.instances],
            }
            for c in profile.constructions
        ],
        "outliers": [i.to_dict() for i in profile.outliers],
    }


def profile_from_dict(d: dict) -> MetaphorProfile:
    constructions = []
    for c in d["constructions"]:
        sig = Signature(c["incoming_label"], tuple(c["slot_sequence"]))
        insts = tuple(Instance.from_dict(i) for i in c["instances"])
        constructions.append(Construction(sig, insts, float(c["coverage"])))
    outliers = tuple(Instance.from_dict(i) for i in d.get("outliers", []))
    return MetaphorProfile(
        lemma=d["lemma"],
        constructions=tuple(constructions),
        outlier_count=int(d["outlier_count"]),
        total_instances=int(d["total_instances"]),
        outliers=outliers,
    )


def dump_profile(profile: MetaphorProfile) -> str:
    return json.dumps(profile_to_dict(profile), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def load_profile(path) -> MetaphorProfile:
    with open(path, encoding="utf-8") as fh:
        return profile_from_dict(json.load(fh))
