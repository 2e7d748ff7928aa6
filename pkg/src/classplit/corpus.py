"""Evaluation corpus management: manifest parsing, fetching, loading.

The bundled manifest lists known low-cohesion classes from public Java
systems together with the method count reported for each. Fetching is best
effort: per-entry failures (network, checksum, missing revision) become
entries in the fetch report instead of exceptions, because the pinned
upstream mirrors are outside our control.
"""

from __future__ import annotations

import hashlib
import os
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources

from .config import parse_config
from .errors import ChecksumMismatch, ConfigError, EmptyCorpus, NetworkError, ParseError, SchemaError, UnsupportedConstruct
from .facts import ClassFacts, load_facts
from .javaparse import parse_class


@dataclass(frozen=True)
class CorpusEntry:
    class_name: str
    system: str
    url: str
    expected_methods: int | None = None
    sha256: str | None = None


@dataclass
class FetchOutcome:
    entry: CorpusEntry
    status: str  # fetched | failed | skipped
    detail: str = ""
    path: str | None = None


@dataclass
class FetchReport:
    outcomes: list[FetchOutcome] = field(default_factory=list)

    @property
    def fetched(self) -> list[FetchOutcome]:
        return [o for o in self.outcomes if o.status == "fetched"]

    @property
    def failed(self) -> list[FetchOutcome]:
        return [o for o in self.outcomes if o.status == "failed"]

    def summary(self) -> str:
        lines = [f"{len(self.fetched)}/{len(self.outcomes)} entries fetched"]
        for o in self.outcomes:
            lines.append(f"  [{o.status}] {o.entry.class_name}: {o.detail or o.path or ''}")
        return "\n".join(lines)


def bundled_manifest_text() -> str:
    return resources.files("classplit.data").joinpath("corpus.toml").read_text("utf-8")


def parse_manifest(text: str) -> list[CorpusEntry]:
    cfg = parse_config(text)
    raw_entries = cfg.get("entry", [])
    if not isinstance(raw_entries, list) or not raw_entries:
        raise ConfigError("manifest has no [[entry]] tables")
    entries = []
    for i, raw in enumerate(raw_entries):
        if not isinstance(raw, dict):
            raise ConfigError(f"entry {i} is not a table")
        for key in ("class_name", "system", "url"):
            if key not in raw or not isinstance(raw[key], str):
                raise ConfigError(f"entry {i} is missing string field '{key}'")
        expected = raw.get("expected_methods")
        if expected is not None and not isinstance(expected, int):
            raise ConfigError(f"entry {i}: expected_methods must be an integer")
        sha = raw.get("sha256")
        if sha is not None and not isinstance(sha, str):
            raise ConfigError(f"entry {i}: sha256 must be a string")
        entries.append(
            CorpusEntry(
                class_name=raw["class_name"],
                system=raw["system"],
                url=raw["url"],
                expected_methods=expected,
                sha256=sha,
            )
        )
    return entries


def load_manifest(path: str | None = None) -> list[CorpusEntry]:
    if path is None:
        return parse_manifest(bundled_manifest_text())
    with open(path, "r", encoding="utf-8") as fh:
        return parse_manifest(fh.read())


def _download(url: str, timeout: float) -> bytes:
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise NetworkError(f"{url}: {exc}") from exc


def fetch_corpus(
    entries: list[CorpusEntry], outdir: str, timeout: float = 30.0, overwrite: bool = False
) -> FetchReport:
    """Download each entry into ``outdir`` as ``<ClassName>.java``.

    Existing files are kept unless ``overwrite``. A checksum pinned in the
    manifest is verified; mismatches delete the download and mark the entry
    failed.
    """
    os.makedirs(outdir, exist_ok=True)
    report = FetchReport()
    for entry in entries:
        path = os.path.join(outdir, f"{entry.class_name}.java")
        if os.path.exists(path) and not overwrite:
            report.outcomes.append(FetchOutcome(entry, "skipped", "already present", path))
            continue
        try:
            data = _download(entry.url, timeout)
        except NetworkError as exc:
            report.outcomes.append(FetchOutcome(entry, "failed", str(exc)))
            continue
        if entry.sha256:
            digest = hashlib.sha256(data).hexdigest()
            if digest != entry.sha256.lower():
                report.outcomes.append(
                    FetchOutcome(
                        entry,
                        "failed",
                        str(ChecksumMismatch(f"got {digest}, expected {entry.sha256}")),
                    )
                )
                continue
        tmp = path + ".part"
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
        report.outcomes.append(FetchOutcome(entry, "fetched", path=path))
    return report


def load_corpus_dir(path: str, exclude_accessors: bool = False) -> list[ClassFacts]:
    """Load every facts JSON and Java file in a directory, sorted by filename.

    Files that fail to parse are skipped with a warning entry attached to the
    returned list via stderr-free reporting: the caller sees them missing.
    Raises :class:`EmptyCorpus` when nothing loads.
    """
    corpus: list[ClassFacts] = []
    errors: list[str] = []
    names = sorted(os.listdir(path))
    for name in names:
        full = os.path.join(path, name)
        if not os.path.isfile(full):
            continue
        if name.endswith(".labels.json") or name.endswith(".vectors.json"):
            continue
        try:
            if name.endswith(".json"):
                with open(full, "r", encoding="utf-8") as fh:
                    corpus.append(load_facts(fh))
            elif name.endswith(".java"):
                with open(full, "r", encoding="utf-8", errors="replace") as fh:
                    corpus.append(
                        parse_class(fh.read(), source_id=full, exclude_accessors=exclude_accessors)
                    )
        except (ParseError, UnsupportedConstruct, SchemaError) as exc:
            errors.append(f"{name}: {exc}")
    if not corpus:
        detail = f" ({len(errors)} file(s) failed to load)" if errors else ""
        raise EmptyCorpus(f"no loadable classes in {path}{detail}")
    return corpus


def check_against_manifest(
    corpus: list[ClassFacts], entries: list[CorpusEntry]
) -> list[str]:
    """Compare loaded classes to manifest expectations; returns notes."""
    notes = []
    by_name = {f.class_name: f for f in corpus}
    for entry in entries:
        facts = by_name.get(entry.class_name)
        if facts is None:
            notes.append(f"{entry.class_name}: not in corpus")
        elif entry.expected_methods is not None and facts.n_methods != entry.expected_methods:
            notes.append(
                f"{entry.class_name}: {facts.n_methods} methods parsed,"
                f" {entry.expected_methods} expected"
            )
    return notes
