#!/usr/bin/env python3
"""Regenerate src/stopwords.ts from the Python package's stopword list.

Run from the exporter directory: python3 scripts/gen-stopwords.py
"""

from __future__ import annotations

import os

HERE = os.path.dirname(os.path.abspath(__file__))
SOURCE = os.path.join(HERE, "..", "..", "src", "classplit", "data", "stopwords.txt")
TARGET = os.path.join(HERE, "..", "src", "stopwords.ts")


def main() -> None:
    words = []
    with open(SOURCE, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.append(line.lower())
    lines = [
        "// English stopwords used by the token filter. Generated from the Python",
        "// package's data/stopwords.txt so both sides share one list; regenerate",
        "// with scripts/gen-stopwords.py if that file changes.",
        "",
        "export const STOPWORDS: ReadonlySet<string> = new Set([",
    ]
    for i in range(0, len(words), 8):
        chunk = ", ".join(f'"{w}"' for w in words[i : i + 8])
        lines.append(f"  {chunk},")
    lines += ["]);", ""]
    with open(TARGET, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
    print(f"wrote {len(words)} stopwords to {os.path.relpath(TARGET, os.getcwd())}")


if __name__ == "__main__":
    main()
