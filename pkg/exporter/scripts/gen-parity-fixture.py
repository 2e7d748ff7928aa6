#!/usr/bin/env python3
"""Regenerate test/fixtures/textprep_parity.json from the Python pipeline.

The exporter's TypeScript text preprocessing must produce exactly the token
sequences the analysis pipeline produces, or the two sides would embed
different vocabularies. This script records the Python side's output for a
set of inputs that exercise every tokenizer and lemmatizer rule; the vitest
suite replays them against the TypeScript port.

Run from anywhere:  python3 exporter/scripts/gen-parity-fixture.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent.parent / "src"))

from classplit import textprep as tp  # noqa: E402

CASES = [
    # camel / number / acronym boundary splitting
    "getUserName",
    "parseHTTPResponse",
    "HTMLParser",
    "value2X",
    "md5Hash",
    "snake_case_name",
    "SCREAMING_SNAKE",
    "x2y3z",
    # keywords, stopwords, literals, digits dropped
    "public static void main the a an 42 0x1F true false null",
    "for (int i = 0; i < rows.length; i++) { total += rows[i]; }",
    # lemmatizer behaviour incl. irregulars and fixpoints
    "running ran runs children geese wrote written copies copied",
    "classes boxes churches wishes buses potatoes heroes",
    "fitted fitting hoped hoping stopped stopping freed agreed",
    "studies studied flies tried cries applied",
    "makes made making takes took taken keeps kept",
    "analyses indices matrices vertices statuses",
    # mixed realistic method text
    "private List<Row> fetchRowsByUserId(long userId) { return this.rowCache.get(userId); }",
    "/** Updates the cached totals. */ synchronized void recomputeTotals() {}",
    # degenerate inputs
    "",
    "   ",
    "// just a comment",
    "0 1 2 3",
    "a b c",
    "was were been being is are",
    "better best worse worst",
    "mice feet teeth people men women",
    "denied relied died lied",
    "singing sing sang sung rang ringing",
    "used uses using user users",
    "caches cached caching cache",
    "pushes pushed pushing push",
    "carries carried carrying carry",
    "sizes sized sizing size",
    "Is THE Class NOT a STOPword doing",
]


def prepared(text: str) -> list[str]:
    return tp.filter_tokens(tp.normalize(tp.filter_tokens(tp.tokenize(text))))


def main() -> None:
    fixture = [{"text": t, "prepared": prepared(t)} for t in CASES]
    out = HERE.parent / "test" / "fixtures" / "textprep_parity.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixture, indent=2) + "\n")
    print(f"wrote {len(fixture)} cases to {out}")


if __name__ == "__main__":
    main()
