"""Shared helpers: compact builders for facts objects and random instances."""

from __future__ import annotations

import random

from classplit.facts import ClassFacts, MethodFacts


def make_facts(
    specs: list[tuple[set[str], dict[int, int], int]],
    class_name: str = "C",
    instance_vars: set[str] | None = None,
    blobs: list[str] | None = None,
) -> ClassFacts:
    """Build ClassFacts from (accessed_vars, internal_calls, external_count) triples."""
    if instance_vars is None:
        instance_vars = set()
        for vars_, _, _ in specs:
            instance_vars |= vars_
    methods = []
    for i, (vars_, calls, external) in enumerate(specs):
        blob = blobs[i] if blobs else f"void m{i}() {{ }}"
        methods.append(
            MethodFacts(
                id=i,
                name=f"m{i}",
                arity=0,
                accessed_vars=frozenset(vars_),
                internal_calls=dict(calls),
                external_call_count=external,
                text_blob=blob,
            )
        )
    facts = ClassFacts(
        class_name=class_name,
        source_id="<test>",
        instance_vars=frozenset(instance_vars),
        methods=tuple(methods),
    )
    facts.validate()
    return facts


def random_method_dicts(
    rng: random.Random, max_methods: int = 12, max_fields: int = 8
) -> list[dict]:
    """Random oracle-style method dicts: vars/calls/external per method."""
    n = rng.randint(1, max_methods)
    n_fields = rng.randint(0, max_fields)
    fields = [f"f{k}" for k in range(n_fields)]
    methods = []
    for _ in range(n):
        vars_ = {f for f in fields if rng.random() < 0.4}
        calls: dict[int, int] = {}
        for callee in range(n):
            if rng.random() < 0.25:
                calls[callee] = rng.randint(1, 3)
        methods.append(
            {"vars": vars_, "calls": calls, "external": rng.randint(0, 4)}
        )
    return methods


def dicts_to_facts(methods: list[dict], class_name: str = "R") -> ClassFacts:
    specs = [(m["vars"], m["calls"], m["external"]) for m in methods]
    return make_facts(specs, class_name=class_name)
