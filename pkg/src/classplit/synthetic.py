"""Generator for synthetic low-cohesion classes with planted responsibilities.

Each generated class has ``responsibilities`` groups of methods. Groups are
mutually disjoint in every signal: fields, internal calls (only within a
group), and vocabulary (generated words, checked disjoint after
lemmatization). Within a group every signal is uniform — each method accesses
all group fields, calls every group peer exactly once, and its word bag is
exactly the group vocabulary (the method name is built from two vocabulary
words and the body supplies the rest) — so the planted partition is the
unambiguous density structure of the similarity matrix. Method ids
interleave the groups round-robin so a partition cannot score well by simply
cutting contiguous id ranges. The planted assignment ships as a labels
sidecar for external scoring.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .facts import ClassFacts, MethodFacts, facts_to_dict
from .textprep import filter_tokens, lemmatize

_CONSONANTS = "bcdfgklmnprstvz"
_VOWELS = "aeiou"


def _make_words(rng: np.random.Generator, count: int, taken_lemmas: set[str]) -> list[str]:
    """Distinct pronounceable words whose lemmas collide with nothing in ``taken``."""
    words = []
    while len(words) < count:
        syllables = int(rng.integers(2, 4))
        word = "".join(
            _CONSONANTS[int(rng.integers(len(_CONSONANTS)))]
            + _VOWELS[int(rng.integers(len(_VOWELS)))]
            for _ in range(syllables)
        )
        lemma = lemmatize(word)
        if len(lemma) < 3 or lemma in taken_lemmas:
            continue
        if not filter_tokens([word]) or not filter_tokens([lemma]):
            continue
        taken_lemmas.add(lemma)
        words.append(word)
    return words


@dataclass(frozen=True)
class SyntheticClass:
    facts: ClassFacts
    labels: tuple[int, ...]

    @property
    def n_groups(self) -> int:
        return max(self.labels) + 1


def synthetic_class(
    name: str = "Synthetic",
    responsibilities: int = 2,
    methods_per: int = 8,
    fields_per: int = 4,
    vocab_per: int = 8,
    seed: int = 0,
) -> SyntheticClass:
    """One synthetic class with ``responsibilities`` planted method groups."""
    if responsibilities < 1:
        raise ValueError("responsibilities must be >= 1")
    if methods_per < 2:
        raise ValueError("methods_per must be >= 2")
    if fields_per < 1:
        raise ValueError("fields_per must be >= 1")
    if vocab_per < 2 or methods_per > vocab_per * (vocab_per - 1):
        raise ValueError(
            f"vocab_per={vocab_per} gives too few distinct names for"
            f" {methods_per} methods"
        )
    rng = np.random.default_rng(seed)
    taken: set[str] = set()
    group_fields = [
        [f"{w}Store" for w in _make_words(rng, fields_per, taken)]
        for _ in range(responsibilities)
    ]
    group_vocab = [_make_words(rng, vocab_per, taken) for _ in range(responsibilities)]

    n = responsibilities * methods_per
    labels = [i % responsibilities for i in range(n)]
    group_members = [
        [i for i in range(n) if labels[i] == g] for g in range(responsibilities)
    ]

    # Distinct (verb, noun) vocabulary pairs name each group's methods; the
    # body carries the remaining vocabulary words, so every method of a group
    # ends up with the same word bag.
    group_names: list[list[tuple[str, str]]] = []
    for g in range(responsibilities):
        vocab = group_vocab[g]
        pairs = [(v, w) for v in vocab for w in vocab if v != w]
        picked = rng.choice(len(pairs), size=methods_per, replace=False)
        group_names.append([pairs[int(j)] for j in picked])

    position = [0] * responsibilities
    methods = []
    for mid in range(n):
        g = labels[mid]
        accessed = frozenset(group_fields[g])
        calls = {peer: 1 for peer in group_members[g] if peer != mid}

        verb, noun = group_names[g][position[g]]
        position[g] += 1
        method_name = verb + noun.capitalize()
        words = [w for w in group_vocab[g] if w not in (verb, noun)]
        blob = f"void {method_name}() {{ {' '.join(words)}; }}"

        methods.append(
            MethodFacts(
                id=mid,
                name=method_name,
                arity=0,
                accessed_vars=accessed,
                internal_calls=calls,
                external_call_count=int(rng.integers(0, 4)),
                text_blob=blob,
            )
        )

    all_fields = frozenset(f for fields in group_fields for f in fields)
    facts = ClassFacts(
        class_name=name,
        source_id=f"synthetic://{name}?seed={seed}",
        instance_vars=all_fields,
        methods=tuple(methods),
    )
    facts.validate()
    return SyntheticClass(facts=facts, labels=tuple(labels))


def write_corpus(
    outdir: str,
    n_classes: int = 10,
    seed: int = 0,
    min_responsibilities: int = 2,
    max_responsibilities: int = 4,
    min_methods_per: int = 4,
    max_methods_per: int = 6,
) -> list[tuple[str, str]]:
    """Write ``n_classes`` synthetic classes plus label sidecars to a directory.

    Responsibility counts cycle through the requested range so the corpus
    covers every size; other shape parameters are drawn from the seed.
    Returns (facts_path, labels_path) pairs.
    """
    os.makedirs(outdir, exist_ok=True)
    rng = np.random.default_rng(seed)
    span = max_responsibilities - min_responsibilities + 1
    out = []
    for i in range(n_classes):
        responsibilities = min_responsibilities + (i % span)
        methods_per = int(rng.integers(min_methods_per, max_methods_per + 1))
        sub_seed = int(rng.integers(0, 2**31 - 1))
        name = f"Synthetic{i:02d}"
        sc = synthetic_class(
            name=name,
            responsibilities=responsibilities,
            methods_per=methods_per,
            seed=sub_seed,
        )
        facts_path = os.path.join(outdir, f"{name}.json")
        labels_path = os.path.join(outdir, f"{name}.labels.json")
        with open(facts_path, "w", encoding="utf-8") as fh:
            json.dump(facts_to_dict(sc.facts), fh, indent=2)
            fh.write("\n")
        with open(labels_path, "w", encoding="utf-8") as fh:
            json.dump({"class_name": name, "labels": list(sc.labels)}, fh, indent=2)
            fh.write("\n")
        out.append((facts_path, labels_path))
    return out
