"""Canonical facts extracted from a Java class.

A :class:`ClassFacts` value is the lingua franca of the pipeline: the parser
produces it, similarity and metric computations consume it, and it round-trips
through a stable JSON form so facts can be produced once and reanalyzed many
times (or imported from other tooling).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Any, Callable, Iterable, Mapping

from .errors import MissingMethod, SchemaError


@dataclass(frozen=True)
class MethodFacts:
    """Facts about one method (constructors included).

    ``internal_calls`` maps callee method id to the number of call sites in
    this method's body that resolve to that callee. ``external_call_count``
    counts call sites that do not resolve to any method of the class.
    ``text_blob`` is the raw text of the declaration (doc comment, signature,
    and body) used for semantic analysis.
    """

    id: int
    name: str
    arity: int
    accessed_vars: frozenset[str]
    internal_calls: Mapping[int, int]
    external_call_count: int
    text_blob: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "accessed_vars", frozenset(self.accessed_vars))
        object.__setattr__(self, "internal_calls", dict(self.internal_calls))


@dataclass(frozen=True)
class ClassFacts:
    """Facts about one class: its instance variables and member methods."""

    class_name: str
    source_id: str
    instance_vars: frozenset[str]
    methods: tuple[MethodFacts, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "instance_vars", frozenset(self.instance_vars))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def n_methods(self) -> int:
        return len(self.methods)

    def method(self, method_id: int) -> MethodFacts:
        if not 0 <= method_id < len(self.methods):
            raise MissingMethod(method_id, self.class_name)
        return self.methods[method_id]

    def validate(self) -> None:
        """Check internal consistency, raising :class:`SchemaError` on failure."""
        _validate_parsed(self)


def _require(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise SchemaError(message, path)


def _validate_parsed(facts: ClassFacts) -> None:
    _require(bool(facts.class_name), "class_name must be non-empty", "class_name")
    n = len(facts.methods)
    for i, m in enumerate(facts.methods):
        path = f"methods[{i}]"
        _require(m.id == i, f"id {m.id} must equal its position {i}", f"{path}.id")
        _require(bool(m.name), "name must be non-empty", f"{path}.name")
        _require(m.arity >= 0, "arity must be >= 0", f"{path}.arity")
        _require(
            m.external_call_count >= 0,
            "external_call_count must be >= 0",
            f"{path}.external_call_count",
        )
        extra = m.accessed_vars - facts.instance_vars
        _require(
            not extra,
            f"accessed vars {sorted(extra)} are not instance variables",
            f"{path}.accessed_vars",
        )
        for callee, count in m.internal_calls.items():
            cpath = f"{path}.internal_calls[{callee}]"
            _require(isinstance(callee, int), "callee id must be an integer", cpath)
            _require(0 <= callee < n, f"callee id {callee} out of range", cpath)
            _require(
                isinstance(count, int) and count >= 1,
                "call count must be a positive integer",
                cpath,
            )


def _as_str(value: Any, path: str) -> str:
    _require(isinstance(value, str), f"expected string, got {type(value).__name__}", path)
    return value


def _as_int(value: Any, path: str) -> int:
    _require(
        isinstance(value, int) and not isinstance(value, bool),
        f"expected integer, got {type(value).__name__}",
        path,
    )
    return value


def _as_list(value: Any, path: str) -> list:
    _require(isinstance(value, list), f"expected array, got {type(value).__name__}", path)
    return value


def _as_obj(value: Any, path: str) -> dict:
    _require(isinstance(value, dict), f"expected object, got {type(value).__name__}", path)
    return value


def _get(obj: dict, key: str, path: str) -> Any:
    _require(key in obj, f"missing required field '{key}'", path)
    return obj[key]


def facts_to_dict(facts: ClassFacts) -> dict:
    """Plain-dict form with sorted variable lists for stable serialization."""
    return {
        "class_name": facts.class_name,
        "source_id": facts.source_id,
        "instance_vars": sorted(facts.instance_vars),
        "methods": [
            {
                "id": m.id,
                "name": m.name,
                "arity": m.arity,
                "accessed_vars": sorted(m.accessed_vars),
                "internal_calls": {str(k): m.internal_calls[k] for k in sorted(m.internal_calls)},
                "external_call_count": m.external_call_count,
                "text_blob": m.text_blob,
            }
            for m in facts.methods
        ],
        "warnings": list(facts.warnings),
    }


def facts_from_dict(data: Any) -> ClassFacts:
    """Build :class:`ClassFacts` from parsed JSON, validating the schema."""
    obj = _as_obj(data, "$")
    class_name = _as_str(_get(obj, "class_name", "$"), "class_name")
    source_id = _as_str(_get(obj, "source_id", "$"), "source_id")
    ivars = [
        _as_str(v, f"instance_vars[{i}]")
        for i, v in enumerate(_as_list(_get(obj, "instance_vars", "$"), "instance_vars"))
    ]
    methods: list[MethodFacts] = []
    for i, raw in enumerate(_as_list(_get(obj, "methods", "$"), "methods")):
        path = f"methods[{i}]"
        m = _as_obj(raw, path)
        calls_raw = _as_obj(_get(m, "internal_calls", path), f"{path}.internal_calls")
        calls: dict[int, int] = {}
        for key, value in calls_raw.items():
            cpath = f"{path}.internal_calls[{key}]"
            try:
                callee = int(key)
            except (TypeError, ValueError):
                raise SchemaError("key must be a stringified method id", cpath) from None
            calls[callee] = _as_int(value, cpath)
        methods.append(
            MethodFacts(
                id=_as_int(_get(m, "id", path), f"{path}.id"),
                name=_as_str(_get(m, "name", path), f"{path}.name"),
                arity=_as_int(_get(m, "arity", path), f"{path}.arity"),
                accessed_vars=frozenset(
                    _as_str(v, f"{path}.accessed_vars[{j}]")
                    for j, v in enumerate(
                        _as_list(_get(m, "accessed_vars", path), f"{path}.accessed_vars")
                    )
                ),
                internal_calls=calls,
                external_call_count=_as_int(
                    _get(m, "external_call_count", path), f"{path}.external_call_count"
                ),
                text_blob=_as_str(_get(m, "text_blob", path), f"{path}.text_blob"),
            )
        )
    warnings_raw = obj.get("warnings", [])
    warnings = tuple(
        _as_str(w, f"warnings[{i}]") for i, w in enumerate(_as_list(warnings_raw, "warnings"))
    )
    facts = ClassFacts(
        class_name=class_name,
        source_id=source_id,
        instance_vars=frozenset(ivars),
        methods=tuple(methods),
        warnings=warnings,
    )
    facts.validate()
    return facts


def save_facts(facts: ClassFacts, fp: IO[str] | None = None) -> str:
    """Serialize to JSON text; also writes to ``fp`` when given."""
    facts.validate()
    text = json.dumps(facts_to_dict(facts), indent=2, sort_keys=False)
    if fp is not None:
        fp.write(text + "\n")
    return text


def load_facts(source: str | bytes | IO[str]) -> ClassFacts:
    """Parse facts JSON from text, bytes, or a readable file object."""
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", "$") from exc
    return facts_from_dict(data)


def filter_methods(facts: ClassFacts, keep: Callable[[MethodFacts], bool]) -> ClassFacts:
    """Drop methods failing ``keep`` and reindex ids contiguously.

    Internal calls to dropped methods become external call sites, preserving
    the total number of call sites per surviving method.
    """
    kept = [m for m in facts.methods if keep(m)]
    remap = {m.id: new_id for new_id, m in enumerate(kept)}
    rebuilt = []
    for new_id, m in enumerate(kept):
        calls: dict[int, int] = {}
        extra_external = 0
        for callee, count in m.internal_calls.items():
            if callee in remap:
                calls[remap[callee]] = count
            else:
                extra_external += count
        rebuilt.append(
            MethodFacts(
                id=new_id,
                name=m.name,
                arity=m.arity,
                accessed_vars=m.accessed_vars,
                internal_calls=calls,
                external_call_count=m.external_call_count + extra_external,
                text_blob=m.text_blob,
            )
        )
    return ClassFacts(
        class_name=facts.class_name,
        source_id=facts.source_id,
        instance_vars=facts.instance_vars,
        methods=tuple(rebuilt),
        warnings=facts.warnings,
    )


def subset_vars_union(facts: ClassFacts, method_ids: Iterable[int]) -> frozenset[str]:
    """Union of instance variables accessed by the given methods."""
    out: set[str] = set()
    for mid in method_ids:
        out |= facts.method(mid).accessed_vars
    return frozenset(out)
