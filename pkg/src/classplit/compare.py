"""Side-by-side evaluation of several model configurations over a corpus.

Every (class, model) cell runs independently; a failure in one cell is
recorded as an error string instead of aborting the sweep, so partial
results (for example when pretrained vector files are missing for some
classes) still produce a full table.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field

from .cluster import save_partition
from .facts import ClassFacts
from .pipeline import ModelRun, ModelSpec, run_model
from .semvec import load_vectors

CSV_COLUMNS = (
    "class",
    "model",
    "status",
    "k",
    "original_lcom",
    "avg_fragment_lcom",
    "max_fragment_lcom",
    "original_mpc",
    "fragment_mpc_sum",
    "severed",
    "error",
)


@dataclass(frozen=True)
class CellResult:
    """Outcome of one model applied to one class."""

    class_name: str
    model: str
    status: str
    k: int | None = None
    original_lcom: int | None = None
    avg_fragment_lcom: float | None = None
    max_fragment_lcom: int | None = None
    original_mpc: int | None = None
    fragment_mpc_sum: int | None = None
    severed: int | None = None
    error: str | None = None
    run: ModelRun | None = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def avg_fragment_mpc(self) -> float | None:
        if self.fragment_mpc_sum is None or not self.k:
            return None
        return self.fragment_mpc_sum / self.k

    def row(self) -> list[str]:
        def fmt(value: object) -> str:
            if value is None:
                return ""
            if isinstance(value, float):
                return format(value, ".17g")
            return str(value)

        return [
            self.class_name,
            self.model,
            self.status,
            fmt(self.k),
            fmt(self.original_lcom),
            fmt(self.avg_fragment_lcom),
            fmt(self.max_fragment_lcom),
            fmt(self.original_mpc),
            fmt(self.fragment_mpc_sum),
            fmt(self.severed),
            self.error or "",
        ]


@dataclass
class CompareResult:
    cells: list[CellResult]

    def cell(self, class_name: str, model: str) -> CellResult:
        for c in self.cells:
            if c.class_name == class_name and c.model == model:
                return c
        raise KeyError(f"no cell for ({class_name}, {model})")

    @property
    def ok_cells(self) -> list[CellResult]:
        return [c for c in self.cells if c.ok]

    @property
    def error_cells(self) -> list[CellResult]:
        return [c for c in self.cells if not c.ok]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for cell in self.cells:
            writer.writerow(cell.row())
        return buf.getvalue()

    def to_markdown(self) -> str:
        header = "| " + " | ".join(CSV_COLUMNS) + " |"
        rule = "|" + "|".join(" --- " for _ in CSV_COLUMNS) + "|"
        lines = [header, rule]
        for cell in self.cells:
            cols = [c.replace("|", "\\|") for c in cell.row()]
            lines.append("| " + " | ".join(cols) + " |")
        return "\n".join(lines) + "\n"

    @property
    def class_names(self) -> list[str]:
        seen: list[str] = []
        for c in self.cells:
            if c.class_name not in seen:
                seen.append(c.class_name)
        return seen

    @property
    def spec_names(self) -> list[str]:
        seen: list[str] = []
        for c in self.cells:
            if c.model not in seen:
                seen.append(c.model)
        return seen


@dataclass(frozen=True)
class PivotTable:
    """Classes down the side, model specs across the top, one metric inside.

    The best (lowest) cell per row is flagged: an extra ``best`` column in
    CSV, bold in markdown. Ties go to the earlier spec. Error cells are
    blank and never win.
    """

    metric: str
    spec_names: tuple[str, ...]
    class_names: tuple[str, ...]
    values: tuple[tuple[float | None, ...], ...]

    def best_column(self, row: int) -> int | None:
        best = None
        for j, v in enumerate(self.values[row]):
            if v is not None and (best is None or v < self.values[row][best]):
                best = j
        return best

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["class", *self.spec_names, "best"])
        for i, name in enumerate(self.class_names):
            best = self.best_column(i)
            cells = [
                "" if v is None else format(v, ".17g") for v in self.values[i]
            ]
            writer.writerow([name, *cells, "" if best is None else self.spec_names[best]])
        return buf.getvalue()

    def to_markdown(self) -> str:
        cols = ["class", *self.spec_names]
        lines = [
            "| " + " | ".join(cols) + " |",
            "|" + "|".join(" --- " for _ in cols) + "|",
        ]
        for i, name in enumerate(self.class_names):
            best = self.best_column(i)
            rendered = []
            for j, v in enumerate(self.values[i]):
                if v is None:
                    rendered.append("")
                elif j == best:
                    rendered.append(f"**{v:.6g}**")
                else:
                    rendered.append(f"{v:.6g}")
            lines.append("| " + " | ".join([name, *rendered]) + " |")
        return "\n".join(lines) + "\n"


def pivot_table(result: CompareResult, metric: str) -> PivotTable:
    """Average fragment LCOM or MPC per (class, spec) in matrix layout."""
    if metric not in ("lcom", "mpc"):
        raise ValueError(f"metric must be 'lcom' or 'mpc', got {metric!r}")
    classes = result.class_names
    specs = result.spec_names
    by_key = {(c.class_name, c.model): c for c in result.cells}
    rows = []
    for cname in classes:
        row: list[float | None] = []
        for sname in specs:
            cell = by_key.get((cname, sname))
            if cell is None or not cell.ok:
                row.append(None)
            elif metric == "lcom":
                row.append(cell.avg_fragment_lcom)
            else:
                row.append(cell.avg_fragment_mpc)
        rows.append(tuple(row))
    return PivotTable(
        metric=metric,
        spec_names=tuple(specs),
        class_names=tuple(classes),
        values=tuple(rows),
    )


@dataclass(frozen=True)
class BeforeAfterTable:
    """Original-versus-fragments view for one designated model spec.

    One row per class: cohesion and coupling before the split, the number of
    extracted sub-classes, and the per-sub-class values after.
    """

    spec_name: str
    rows: tuple[tuple[str, int, int, tuple[int, ...], int, tuple[int, ...]], ...]

    _COLUMNS = ("class", "splits", "lcom_before", "lcom_after", "mpc_before", "mpc_after")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self._COLUMNS)
        for name, k, lcom_b, lcom_a, mpc_b, mpc_a in self.rows:
            writer.writerow(
                [
                    name,
                    k,
                    lcom_b,
                    ";".join(str(v) for v in lcom_a),
                    mpc_b,
                    ";".join(str(v) for v in mpc_a),
                ]
            )
        return buf.getvalue()

    def to_markdown(self) -> str:
        cols = self._COLUMNS
        lines = [
            "| " + " | ".join(cols) + " |",
            "|" + "|".join(" --- " for _ in cols) + "|",
        ]
        for name, k, lcom_b, lcom_a, mpc_b, mpc_a in self.rows:
            lines.append(
                "| "
                + " | ".join(
                    [
                        name,
                        str(k),
                        str(lcom_b),
                        ", ".join(str(v) for v in lcom_a),
                        str(mpc_b),
                        ", ".join(str(v) for v in mpc_a),
                    ]
                )
                + " |"
            )
        return "\n".join(lines) + "\n"


def before_after_table(result: CompareResult, spec_name: str) -> BeforeAfterTable:
    """Before/after rows for every class the designated spec handled."""
    rows = []
    for cell in result.cells:
        if cell.model != spec_name or not cell.ok or cell.run is None:
            continue
        report = cell.run.report
        rows.append(
            (
                cell.class_name,
                cell.k or 0,
                report.original_lcom,
                tuple(f.lcom for f in report.fragments),
                report.original_mpc,
                tuple(f.mpc for f in report.fragments),
            )
        )
    return BeforeAfterTable(spec_name=spec_name, rows=tuple(rows))


def _cell_from_run(run: ModelRun) -> CellResult:
    report = run.report
    return CellResult(
        class_name=report.class_name,
        model=run.spec.name,
        status="ok",
        k=run.partition.k,
        original_lcom=report.original_lcom,
        avg_fragment_lcom=report.average_fragment_lcom,
        max_fragment_lcom=report.max_fragment_lcom,
        original_mpc=report.original_mpc,
        fragment_mpc_sum=sum(f.mpc for f in report.fragments),
        severed=report.severed,
        run=run,
    )


def run_cell(
    facts: ClassFacts, spec: ModelSpec, vectors_dir: str | None = None
) -> CellResult:
    """Run one model on one class, never raising.

    Pretrained vectors are looked up as ``<vectors_dir>/<Class>.<embedding>.json``
    when the model needs them.
    """
    try:
        vectors = None
        if spec.needs_imported_vectors and vectors_dir is not None:
            vpath = os.path.join(
                vectors_dir, f"{facts.class_name}.{spec.embedding}.json"
            )
            if os.path.exists(vpath):
                with open(vpath, "r", encoding="utf-8") as fh:
                    vectors = load_vectors(fh, facts)
        run = run_model(facts, spec, vectors)
    except Exception as exc:  # noqa: BLE001  cell isolation is the point
        return CellResult(
            class_name=facts.class_name,
            model=spec.name,
            status="error",
            error=f"{type(exc).__name__}: {exc}",
        )
    return _cell_from_run(run)


def run_comparison(
    corpus: list[ClassFacts],
    specs: list[ModelSpec],
    vectors_dir: str | None = None,
) -> CompareResult:
    """Evaluate every spec on every class; classes vary slowest."""
    cells = [run_cell(facts, spec, vectors_dir) for facts in corpus for spec in specs]
    return CompareResult(cells=cells)


def _write(path: str, text: str, written: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    written.append(path)


def emit(result: CompareResult, outdir: str, report_spec: str | None = None) -> list[str]:
    """Write every report artifact for a finished comparison.

    Emits the long-format cell table, one pivot table per metric, a
    before/after table for ``report_spec`` (default: the first spec), and a
    partition + metrics file per successful cell. Returns the written paths.
    """
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    _write(os.path.join(outdir, "comparison.csv"), result.to_csv(), written)
    _write(os.path.join(outdir, "comparison.md"), result.to_markdown(), written)
    for metric in ("lcom", "mpc"):
        table = pivot_table(result, metric)
        _write(os.path.join(outdir, f"{metric}.csv"), table.to_csv(), written)
        _write(os.path.join(outdir, f"{metric}.md"), table.to_markdown(), written)
    specs = result.spec_names
    if report_spec is None and specs:
        report_spec = specs[0]
    if report_spec is not None:
        ba = before_after_table(result, report_spec)
        _write(
            os.path.join(outdir, f"before_after_{report_spec}.csv"), ba.to_csv(), written
        )
        _write(
            os.path.join(outdir, f"before_after_{report_spec}.md"), ba.to_markdown(), written
        )
    for cell in result.ok_cells:
        if cell.run is None:
            continue
        stem = f"{cell.class_name}_{cell.model}"
        ppath = os.path.join(outdir, f"{stem}.partition.json")
        with open(ppath, "w", encoding="utf-8") as fh:
            save_partition(cell.run.partition, fh)
        written.append(ppath)
        mpath = os.path.join(outdir, f"{stem}.metrics.csv")
        with open(mpath, "w", encoding="utf-8") as fh:
            fh.write(cell.run.report.to_csv())
        written.append(mpath)
    return written
