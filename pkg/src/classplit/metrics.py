"""Cohesion (LCOM) and coupling (MPC) metrics for classes and split fragments.

LCOM counts method pairs sharing no instance variable (P) against pairs
sharing at least one (Q) and reports max(P - Q, 0); fewer than two methods
scores 0. MPC counts message-passing call sites: for a fragment, every call
site whose target lies outside the fragment, including formerly-internal
calls severed by the split.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .cluster import Partition
from .errors import DimensionMismatch
from .facts import ClassFacts


def _resolve_members(facts: ClassFacts, member_ids: Iterable[int] | None) -> list[int]:
    if member_ids is None:
        return list(range(facts.n_methods))
    members = sorted(set(int(i) for i in member_ids))
    for mid in members:
        facts.method(mid)  # raises MissingMethod when out of range
    return members


def lcom(facts: ClassFacts, member_ids: Iterable[int] | None = None) -> int:
    """Lack of cohesion: disjoint-variable method pairs minus sharing pairs, floored at 0."""
    members = _resolve_members(facts, member_ids)
    if len(members) < 2:
        return 0
    p = q = 0
    for i, j in combinations(members, 2):
        if facts.method(i).accessed_vars & facts.method(j).accessed_vars:
            q += 1
        else:
            p += 1
    return max(p - q, 0)


def mpc(facts: ClassFacts, member_ids: Iterable[int] | None = None) -> int:
    """Message passing coupling: call sites from members to anything outside.

    For the whole class this is the total external call count; for a fragment
    it additionally counts internal calls whose callee left the fragment.
    """
    members = _resolve_members(facts, member_ids)
    member_set = set(members)
    total = 0
    for mid in members:
        m = facts.method(mid)
        total += m.external_call_count
        for callee, count in m.internal_calls.items():
            if callee not in member_set:
                total += count
    return total


def severed_calls(facts: ClassFacts, labels: Sequence[int]) -> int:
    """Internal call sites whose caller and callee land in different clusters."""
    if len(labels) != facts.n_methods:
        raise DimensionMismatch(f"{len(labels)} labels for {facts.n_methods} methods")
    total = 0
    for m in facts.methods:
        for callee, count in m.internal_calls.items():
            if labels[m.id] != labels[callee]:
                total += count
    return total


@dataclass(frozen=True)
class FragmentMetrics:
    name: str
    n_methods: int
    lcom: int
    mpc: int


@dataclass(frozen=True)
class MetricsReport:
    class_name: str
    original_lcom: int
    original_mpc: int
    n_methods: int
    fragments: tuple[FragmentMetrics, ...]
    severed: int

    @property
    def average_fragment_lcom(self) -> float:
        return sum(f.lcom for f in self.fragments) / len(self.fragments)

    @property
    def max_fragment_lcom(self) -> int:
        return max(f.lcom for f in self.fragments)

    def to_csv(self) -> str:
        lines = ["sub_class,methods,lcom,mpc"]
        for f in self.fragments:
            lines.append(f"{f.name},{f.n_methods},{f.lcom},{f.mpc}")
        lines.append(f"{self.class_name},{self.n_methods},{self.original_lcom},{self.original_mpc}")
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        lines = [
            "| Class | Methods | LCOM | MPC |",
            "| --- | ---: | ---: | ---: |",
            f"| {self.class_name} (original) | {self.n_methods} |"
            f" {self.original_lcom} | {self.original_mpc} |",
        ]
        for f in self.fragments:
            lines.append(f"| {f.name} | {f.n_methods} | {f.lcom} | {f.mpc} |")
        return "\n".join(lines) + "\n"


def split_metrics(facts: ClassFacts, partition: Partition) -> MetricsReport:
    """Metrics for the original class and every fragment of the partition."""
    if len(partition.labels) != facts.n_methods:
        raise DimensionMismatch(
            f"partition has {len(partition.labels)} labels for {facts.n_methods} methods"
        )
    fragments = []
    for c in range(partition.k):
        members = partition.members(c)
        fragments.append(
            FragmentMetrics(
                name=f"{facts.class_name}_{c + 1}",
                n_methods=len(members),
                lcom=lcom(facts, members),
                mpc=mpc(facts, members),
            )
        )
    return MetricsReport(
        class_name=facts.class_name,
        original_lcom=lcom(facts),
        original_mpc=mpc(facts),
        n_methods=facts.n_methods,
        fragments=tuple(fragments),
        severed=severed_calls(facts, partition.labels),
    )
