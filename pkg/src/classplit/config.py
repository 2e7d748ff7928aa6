"""Minimal TOML-style configuration parsing for the comparison harness.

The stdlib of the supported Python baseline has no TOML reader, so this
module implements the small subset the harness needs: ``#`` comments,
``[section]`` tables (dotted names nest), ``[[section]]`` arrays of tables,
and ``key = value`` pairs whose values are strings, integers, floats,
booleans, or one-line arrays of those.
"""

from __future__ import annotations

import re

from .cluster import ClusterConfig
from .errors import ConfigError
from .pipeline import ModelSpec, default_specs, spec_from_options

_BARE_KEY = re.compile(r"^[A-Za-z0-9_-]+$")


def _parse_scalar(raw: str, lineno: int):
    raw = raw.strip()
    if not raw:
        raise ConfigError(f"line {lineno}: empty value")
    if raw.startswith('"'):
        if not raw.endswith('"') or len(raw) < 2:
            raise ConfigError(f"line {lineno}: unterminated string")
        body = raw[1:-1]
        out = []
        i = 0
        while i < len(body):
            c = body[i]
            if c == "\\":
                if i + 1 >= len(body):
                    raise ConfigError(f"line {lineno}: dangling escape")
                esc = body[i + 1]
                mapping = {"n": "\n", "t": "\t", '"': '"', "\\": "\\", "r": "\r"}
                if esc not in mapping:
                    raise ConfigError(f"line {lineno}: unsupported escape \\{esc}")
                out.append(mapping[esc])
                i += 2
            elif c == '"':
                raise ConfigError(f"line {lineno}: stray quote inside string")
            else:
                out.append(c)
                i += 1
        return "".join(out)
    if raw.startswith("'"):
        if not raw.endswith("'") or len(raw) < 2:
            raise ConfigError(f"line {lineno}: unterminated string")
        return raw[1:-1]
    if raw == "true":
        return True
    if raw == "false":
        return False
    try:
        return int(raw.replace("_", ""), 0) if not re.search(r"[.eE]", raw) else float(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: cannot parse value {raw!r}") from None


def _split_array_items(body: str, lineno: int) -> list[str]:
    items = []
    current = []
    in_string: str | None = None
    i = 0
    while i < len(body):
        c = body[i]
        if in_string:
            current.append(c)
            if c == "\\" and in_string == '"' and i + 1 < len(body):
                current.append(body[i + 1])
                i += 2
                continue
            if c == in_string:
                in_string = None
        elif c in "\"'":
            in_string = c
            current.append(c)
        elif c == ",":
            items.append("".join(current))
            current = []
        else:
            current.append(c)
        i += 1
    if in_string:
        raise ConfigError(f"line {lineno}: unterminated string in array")
    if "".join(current).strip():
        items.append("".join(current))
    return [s for s in (item.strip() for item in items) if s]


def _strip_comment(line: str) -> str:
    out = []
    in_string: str | None = None
    i = 0
    while i < len(line):
        c = line[i]
        if in_string:
            out.append(c)
            if c == "\\" and in_string == '"' and i + 1 < len(line):
                out.append(line[i + 1])
                i += 2
                continue
            if c == in_string:
                in_string = None
        elif c in "\"'":
            in_string = c
            out.append(c)
        elif c == "#":
            break
        else:
            out.append(c)
        i += 1
    return "".join(out)


def parse_config(text: str) -> dict:
    """Parse the supported TOML subset into nested dicts and lists."""
    root: dict = {}
    current: dict = root
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        if line.startswith("[["):
            if not line.endswith("]]"):
                raise ConfigError(f"line {lineno}: malformed table array header")
            name = line[2:-2].strip()
            current = _enter(root, name, lineno, array=True)
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed table header")
            name = line[1:-1].strip()
            current = _enter(root, name, lineno, array=False)
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if not _BARE_KEY.match(key):
            raise ConfigError(f"line {lineno}: invalid key {key!r}")
        value = value.strip()
        if value.startswith("["):
            if not value.endswith("]"):
                raise ConfigError(f"line {lineno}: arrays must be on one line")
            items = _split_array_items(value[1:-1], lineno)
            current[key] = [_parse_scalar(item, lineno) for item in items]
        else:
            current[key] = _parse_scalar(value, lineno)
    return root


def _enter(root: dict, dotted: str, lineno: int, array: bool) -> dict:
    if not dotted:
        raise ConfigError(f"line {lineno}: empty table name")
    parts = dotted.split(".")
    node = root
    for part in parts[:-1]:
        part = part.strip()
        if not _BARE_KEY.match(part):
            raise ConfigError(f"line {lineno}: invalid table name {dotted!r}")
        node = node.setdefault(part, {})
        if isinstance(node, list):
            node = node[-1]
        if not isinstance(node, dict):
            raise ConfigError(f"line {lineno}: {part!r} is not a table")
    leaf = parts[-1].strip()
    if not _BARE_KEY.match(leaf):
        raise ConfigError(f"line {lineno}: invalid table name {dotted!r}")
    if array:
        arr = node.setdefault(leaf, [])
        if not isinstance(arr, list):
            raise ConfigError(f"line {lineno}: {leaf!r} is not a table array")
        table: dict = {}
        arr.append(table)
        return table
    table = node.setdefault(leaf, {})
    if not isinstance(table, dict):
        raise ConfigError(f"line {lineno}: {leaf!r} is not a table")
    return table


def load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def specs_from_config(cfg: dict) -> tuple[list[ModelSpec], dict]:
    """Turn a parsed harness config into model specs plus leftover options.

    With no ``[[model]]`` tables, all eight stock specs are used. Global
    ``seed`` and ``[cluster]`` settings apply to every model unless a model
    table overrides them.
    """
    shared: dict = {}
    if "seed" in cfg:
        shared["seed"] = cfg["seed"]
    cluster_cfg = cfg.get("cluster", {})
    if not isinstance(cluster_cfg, dict):
        raise ConfigError("[cluster] must be a table")
    for key in ("min_methods", "xi"):
        if key in cluster_cfg:
            shared[key] = cluster_cfg[key]

    model_tables = cfg.get("model", [])
    if not isinstance(model_tables, list):
        raise ConfigError("[[model]] must be an array of tables")
    specs: list[ModelSpec] = []
    if model_tables:
        for i, table in enumerate(model_tables):
            if not isinstance(table, dict):
                raise ConfigError(f"model entry {i} is not a table")
            options = dict(shared)
            options.update(table)
            try:
                specs.append(spec_from_options(options))
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"model entry {i}: {exc}") from exc
    else:
        for spec in default_specs():
            options = dict(shared)
            options.update({"name": spec.name, "graph": spec.graph, "embedding": spec.embedding})
            try:
                specs.append(spec_from_options(options))
            except (ValueError, TypeError) as exc:
                raise ConfigError(str(exc)) from exc

    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate model names in config: {names}")

    options = {
        "corpus": cfg.get("corpus"),
        "vectors_dir": cfg.get("vectors_dir"),
        "report_spec": cfg.get("report_spec"),
        "exclude_accessors": bool(cfg.get("exclude_accessors", False)),
    }
    return specs, options


def cluster_from_config(cfg: dict) -> ClusterConfig:
    section = cfg.get("cluster", {})
    return ClusterConfig(
        min_methods=int(section.get("min_methods", 3)),
        xi=float(section.get("xi", 0.05)),
    )
