"""Identifier-aware text preprocessing for method bodies.

The pipeline is ``tokenize -> filter_tokens -> normalize`` and
:func:`bag_of_words` composes the three into term counts. Tokenization splits
identifiers the way programmers read them (camelCase, underscores, digit
boundaries); filtering drops English stopwords, Java reserved words, literals,
numbers, and single characters; normalization lowercases and applies a small
deterministic rule-based lemmatizer so that e.g. "Parsing" and "parsed" both
count as "parse".
"""

from __future__ import annotations

import re
from collections import Counter
from importlib import resources

_WORD_RUN = re.compile(r"[A-Za-z0-9]+")
_BOUNDARY = re.compile(
    r"(?<=[a-z])(?=[A-Z])"  # fooBar -> foo Bar
    r"|(?<=[A-Z])(?=[A-Z][a-z])"  # XMLNode -> XML Node
    r"|(?<=[0-9])(?=[A-Za-z])"  # 2fast -> 2 fast
    r"|(?<=[A-Za-z])(?=[0-9])"  # node2 -> node 2
)

JAVA_KEYWORDS: frozenset[str] = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while
    """.split()
)

JAVA_LITERALS: frozenset[str] = frozenset({"true", "false", "null"})


def _load_stopwords() -> frozenset[str]:
    text = resources.files("classplit.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


STOPWORDS: frozenset[str] = _load_stopwords()

_DROP = STOPWORDS | JAVA_KEYWORDS | JAVA_LITERALS

# Irregular forms the suffix rules would mangle or miss.
_IRREGULAR: dict[str, str] = {
    "children": "child",
    "indices": "index",
    "vertices": "vertex",
    "matrices": "matrix",
    "men": "man",
    "women": "woman",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "people": "person",
    "series": "series",
    "species": "species",
    "went": "go",
    "gone": "go",
    "goes": "go",
    "done": "do",
    "did": "do",
    "made": "make",
    "making": "make",
    "built": "build",
    "bought": "buy",
    "caught": "catch",
    "drawn": "draw",
    "drew": "draw",
    "found": "find",
    "got": "get",
    "gotten": "get",
    "gave": "give",
    "given": "give",
    "held": "hold",
    "kept": "keep",
    "knew": "know",
    "known": "know",
    "lost": "lose",
    "meant": "mean",
    "ran": "run",
    "said": "say",
    "sent": "send",
    "shown": "show",
    "sold": "sell",
    "taken": "take",
    "took": "take",
    "thrown": "throw",
    "threw": "throw",
    "told": "tell",
    "thought": "think",
    "wrote": "write",
    "written": "write",
    "writing": "write",
    "chose": "choose",
    "chosen": "choose",
    "began": "begin",
    "begun": "begin",
    "came": "come",
    "deleting": "delete",
    "deleted": "delete",
}

_VOWELS = set("aeiou")
_UNDOUBLE = {"bb", "cc", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"}


def tokenize(text: str) -> list[str]:
    """Split text into identifier sub-tokens, preserving original case.

    Splits at whitespace, underscores, and any other non-alphanumeric
    character, then at camelCase and letter/digit boundaries:
    ``"getXMLNode2_fast"`` becomes ``["get", "XML", "Node", "2", "fast"]``.
    """
    out: list[str] = []
    for run in _WORD_RUN.findall(text):
        out.extend(t for t in _BOUNDARY.split(run) if t)
    return out


def filter_tokens(tokens: list[str]) -> list[str]:
    """Drop stopwords, Java reserved words and literals, numbers, single chars.

    Matching is case-insensitive so "Return" is dropped like "return".
    """
    kept = []
    for tok in tokens:
        low = tok.lower()
        if len(tok) <= 1 or low in _DROP or tok.isdigit():
            continue
        kept.append(tok)
    return kept


def _has_vowel(s: str) -> bool:
    return any(c in _VOWELS for c in s)


def _is_cvc_short(stem: str) -> bool:
    # Porter-style "short word" test: ends consonant-vowel-consonant with the
    # final consonant not w/x/y, and exactly one vowel group overall.
    if len(stem) < 3:
        return False
    c1, v, c2 = stem[-3], stem[-2], stem[-1]
    if c1 in _VOWELS or v not in _VOWELS or c2 in _VOWELS or c2 in "wxy":
        return False
    groups = len(re.findall(r"[aeiou]+", stem))
    return groups == 1


def _restore(stem: str) -> str:
    """Post-process a stem after stripping -ing/-ed (undouble, restore 'e')."""
    if len(stem) >= 4 and stem[-2:] in _UNDOUBLE:
        return stem[:-1]  # mapping -> mapp -> map
    if stem.endswith(("at", "iz", "bl")):
        return stem + "e"  # creat -> create, initializ -> initialize
    if stem.endswith(("v", "u", "c")):
        return stem + "e"  # sav -> save, valu -> value, replac -> replace
    if stem.endswith("s") and not stem.endswith("ss"):
        # pars -> parse, caus -> cause, us -> use; but focus stays focus
        if not stem.endswith("us") or stem == "us" or (len(stem) >= 3 and stem[-3] in _VOWELS):
            return stem + "e"
        return stem
    if len(stem) >= 2 and stem.endswith("g") and stem[-2] not in _VOWELS:
        return stem + "e"  # merg -> merge, chang -> change
    if _is_cvc_short(stem):
        return stem + "e"  # mak -> make, stor -> store
    return stem


def _lemmatize_once(w: str) -> str:
    if w in _IRREGULAR:
        return _IRREGULAR[w]
    if w.endswith("ing") and len(w) >= 5:
        stem = w[:-3]
        return _restore(stem) if _has_vowel(stem) else w
    if w.endswith("ied") and len(w) >= 5:
        return w[:-3] + "y"  # copied -> copy
    if w.endswith("ed") and not w.endswith("eed") and len(w) >= 4:
        stem = w[:-2]
        return _restore(stem) if _has_vowel(stem) else w
    if w.endswith("ies") and len(w) >= 5:
        return w[:-3] + "y"  # properties -> property
    if w.endswith(("sses", "zzes", "xes", "ches", "shes")):
        return w[:-2]  # classes -> class, matches -> match
    if w.endswith("oes") and len(w) >= 4:
        return w[:-2]  # heroes -> hero
    if w.endswith("s") and len(w) >= 4 and not w.endswith(("ss", "us", "is")):
        return w[:-1]  # nodes -> node
    return w


def lemmatize(token: str) -> str:
    """Map a lowercase token to a base form with deterministic suffix rules.

    Rules are applied to a fixpoint so stacked suffixes reduce fully
    ("settings" -> "setting" -> "set") and the function is idempotent.
    """
    w = token
    while True:
        nxt = _lemmatize_once(w)
        if nxt == w:
            return w
        w = nxt


def normalize(tokens: list[str]) -> list[str]:
    """Lowercase and lemmatize each token."""
    return [lemmatize(t.lower()) for t in tokens]


def bag_of_words(text: str) -> dict[str, int]:
    """Term counts for a text blob.

    Runs tokenize, filter, normalize, then filters once more: lemmatization
    can land on a stopword or keyword ("doing" -> "do") and the bag must never
    contain one.
    """
    terms = normalize(filter_tokens(tokenize(text)))
    return dict(Counter(filter_tokens(terms)))
