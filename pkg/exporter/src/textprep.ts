// Identifier-aware text preprocessing for method bodies.
//
// Port of the Python package's textprep module: tokenize -> filter ->
// normalize, with the same camelCase/digit boundary splitting, stopword and
// Java-keyword filtering, and the same deterministic rule-based lemmatizer.
// test/textprep.test.ts pins parity against outputs generated by the Python
// implementation, so the two sides tokenize method text identically.

import { STOPWORDS } from "./stopwords.js";

const WORD_RUN = /[A-Za-z0-9]+/g;
const BOUNDARY =
  /(?<=[a-z])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])|(?<=[0-9])(?=[A-Za-z])|(?<=[A-Za-z])(?=[0-9])/;

const JAVA_KEYWORDS = new Set(
  (
    "abstract assert boolean break byte case catch char class const continue " +
    "default do double else enum extends final finally float for goto if " +
    "implements import instanceof int interface long native new package private " +
    "protected public return short static strictfp super switch synchronized " +
    "this throw throws transient try void volatile while"
  ).split(" "),
);

const JAVA_LITERALS = new Set(["true", "false", "null"]);

const DROP = new Set<string>([...STOPWORDS, ...JAVA_KEYWORDS, ...JAVA_LITERALS]);

// Irregular forms the suffix rules would mangle or miss.
const IRREGULAR = new Map<string, string>([
  ["children", "child"],
  ["indices", "index"],
  ["vertices", "vertex"],
  ["matrices", "matrix"],
  ["men", "man"],
  ["women", "woman"],
  ["feet", "foot"],
  ["teeth", "tooth"],
  ["mice", "mouse"],
  ["geese", "goose"],
  ["people", "person"],
  ["series", "series"],
  ["species", "species"],
  ["went", "go"],
  ["gone", "go"],
  ["goes", "go"],
  ["done", "do"],
  ["did", "do"],
  ["made", "make"],
  ["making", "make"],
  ["built", "build"],
  ["bought", "buy"],
  ["caught", "catch"],
  ["drawn", "draw"],
  ["drew", "draw"],
  ["found", "find"],
  ["got", "get"],
  ["gotten", "get"],
  ["gave", "give"],
  ["given", "give"],
  ["held", "hold"],
  ["kept", "keep"],
  ["knew", "know"],
  ["known", "know"],
  ["lost", "lose"],
  ["meant", "mean"],
  ["ran", "run"],
  ["said", "say"],
  ["sent", "send"],
  ["shown", "show"],
  ["sold", "sell"],
  ["taken", "take"],
  ["took", "take"],
  ["thrown", "throw"],
  ["threw", "throw"],
  ["told", "tell"],
  ["thought", "think"],
  ["wrote", "write"],
  ["written", "write"],
  ["writing", "write"],
  ["chose", "choose"],
  ["chosen", "choose"],
  ["began", "begin"],
  ["begun", "begin"],
  ["came", "come"],
  ["deleting", "delete"],
  ["deleted", "delete"],
]);

const VOWELS = new Set("aeiou");
const UNDOUBLE = new Set(["bb", "cc", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"]);

/** Split text into identifier sub-tokens, preserving original case. */
export function tokenize(text: string): string[] {
  const out: string[] = [];
  for (const run of text.match(WORD_RUN) ?? []) {
    for (const piece of run.split(BOUNDARY)) {
      if (piece) out.push(piece);
    }
  }
  return out;
}

/** Drop stopwords, Java reserved words and literals, numbers, single chars. */
export function filterTokens(tokens: string[]): string[] {
  const kept: string[] = [];
  for (const tok of tokens) {
    const low = tok.toLowerCase();
    if (tok.length <= 1 || DROP.has(low) || /^[0-9]+$/.test(tok)) continue;
    kept.push(tok);
  }
  return kept;
}

function hasVowel(s: string): boolean {
  for (const c of s) if (VOWELS.has(c)) return true;
  return false;
}

function isCvcShort(stem: string): boolean {
  if (stem.length < 3) return false;
  const c1 = stem[stem.length - 3]!;
  const v = stem[stem.length - 2]!;
  const c2 = stem[stem.length - 1]!;
  if (VOWELS.has(c1) || !VOWELS.has(v) || VOWELS.has(c2) || "wxy".includes(c2)) {
    return false;
  }
  const groups = stem.match(/[aeiou]+/g)?.length ?? 0;
  return groups === 1;
}

function restore(stem: string): string {
  if (stem.length >= 4 && UNDOUBLE.has(stem.slice(-2))) {
    return stem.slice(0, -1); // mapping -> mapp -> map
  }
  if (/(?:at|iz|bl)$/.test(stem)) return stem + "e"; // creat -> create
  if (/[vuc]$/.test(stem)) return stem + "e"; // sav -> save, valu -> value
  if (stem.endsWith("s") && !stem.endsWith("ss")) {
    // pars -> parse, caus -> cause, us -> use; but focus stays focus
    if (
      !stem.endsWith("us") ||
      stem === "us" ||
      (stem.length >= 3 && VOWELS.has(stem[stem.length - 3]!))
    ) {
      return stem + "e";
    }
    return stem;
  }
  if (stem.length >= 2 && stem.endsWith("g") && !VOWELS.has(stem[stem.length - 2]!)) {
    return stem + "e"; // merg -> merge, chang -> change
  }
  if (isCvcShort(stem)) return stem + "e"; // mak -> make, stor -> store
  return stem;
}

function lemmatizeOnce(w: string): string {
  const irregular = IRREGULAR.get(w);
  if (irregular !== undefined) return irregular;
  if (w.endsWith("ing") && w.length >= 5) {
    const stem = w.slice(0, -3);
    return hasVowel(stem) ? restore(stem) : w;
  }
  if (w.endsWith("ied") && w.length >= 5) return w.slice(0, -3) + "y"; // copied -> copy
  if (w.endsWith("ed") && !w.endsWith("eed") && w.length >= 4) {
    const stem = w.slice(0, -2);
    return hasVowel(stem) ? restore(stem) : w;
  }
  if (w.endsWith("ies") && w.length >= 5) return w.slice(0, -3) + "y"; // properties -> property
  if (/(?:sses|zzes|xes|ches|shes)$/.test(w)) return w.slice(0, -2); // classes -> class
  if (w.endsWith("oes") && w.length >= 4) return w.slice(0, -2); // heroes -> hero
  if (w.endsWith("s") && w.length >= 4 && !/(?:ss|us|is)$/.test(w)) {
    return w.slice(0, -1); // nodes -> node
  }
  return w;
}

/** Map a lowercase token to a base form; rules run to a fixpoint. */
export function lemmatize(token: string): string {
  let w = token;
  for (;;) {
    const next = lemmatizeOnce(w);
    if (next === w) return w;
    w = next;
  }
}

/** Lowercase and lemmatize each token. */
export function normalize(tokens: string[]): string[] {
  return tokens.map((t) => lemmatize(t.toLowerCase()));
}

/**
 * The full preprocessed token sequence for a text blob, in text order.
 *
 * Matches the composition behind the Python side's bag_of_words: tokenize,
 * filter, normalize, then filter once more because lemmatization can land on
 * a stopword or keyword ("doing" -> "do").
 */
export function prepareTokens(text: string): string[] {
  return filterTokens(normalize(filterTokens(tokenize(text))));
}

/**
 * Raw code tokens: identifier/number runs and punctuation runs, in order.
 *
 * Used for the code-oriented embedding input, which reads the snippet as
 * written (keywords, braces and all) rather than the cleaned identifier words.
 */
export function rawTokens(text: string): string[] {
  return text.match(/[A-Za-z0-9_]+|[^\sA-Za-z0-9_]+/g) ?? [];
}
