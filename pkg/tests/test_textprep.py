import string

from hypothesis import given, settings
from hypothesis import strategies as st

from classplit.textprep import (
    JAVA_KEYWORDS,
    JAVA_LITERALS,
    STOPWORDS,
    bag_of_words,
    filter_tokens,
    lemmatize,
    normalize,
    tokenize,
)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_five_split_rules(self):
        assert tokenize("getXMLNode2_fast") == ["get", "XML", "Node", "2", "fast"]

    def test_underscore(self):
        assert tokenize("parse_document") == ["parse", "document"]

    def test_whitespace_and_specials(self):
        assert tokenize("a.b(c, d)") == ["a", "b", "c", "d"]

    def test_camel_case_pairs(self):
        assert tokenize("XMLParser") == ["XML", "Parser"]
        assert tokenize("fooBar") == ["foo", "Bar"]

    def test_digit_boundaries(self):
        assert tokenize("utf8Decoder") == ["utf", "8", "Decoder"]

    def test_order_preserved(self):
        assert tokenize("beta_alpha") == ["beta", "alpha"]


class TestFilterTokens:
    def test_stopword_and_keyword(self):
        assert filter_tokens(["the", "return", "parse"]) == ["parse"]

    def test_numeric_and_single_char(self):
        assert filter_tokens(["2", "x"]) == []

    def test_empty(self):
        assert filter_tokens([]) == []

    def test_case_insensitive(self):
        assert filter_tokens(["THE", "Return", "NULL"]) == []

    def test_literals_dropped(self):
        assert filter_tokens(["true", "false", "null", "node"]) == ["node"]


class TestNormalize:
    def test_ing_with_e_restoration(self):
        assert normalize(["Parsing"]) == ["parse"]

    def test_plural(self):
        assert normalize(["nodes"]) == ["node"]

    def test_already_normal(self):
        assert normalize(["xml"]) == ["xml"]

    def test_lowercases(self):
        assert normalize(["Document"]) == ["document"]

    def test_common_code_words(self):
        cases = {
            "classes": "class",
            "entries": "entry",
            "indices": "index",
            "used": "use",
            "using": "use",
            "settings": "set",
            "copied": "copy",
            "writing": "write",
            "getting": "get",
            "children": "child",
            "focus": "focus",
            "status": "status",
        }
        for word, lemma in cases.items():
            assert lemmatize(word) == lemma, word


class TestBagOfWords:
    def test_composition(self):
        assert bag_of_words("return nodes;") == {"node": 1}

    def test_empty(self):
        assert bag_of_words("") == {}

    def test_counting(self):
        assert bag_of_words("parse parse") == {"parse": 2}

    def test_comment_and_code_pooled(self):
        bag = bag_of_words("/** Parses nodes. */ void parseNode() { }")
        assert bag == {"parse": 2, "node": 2}

    def test_lemma_collision_merges_counts(self):
        assert bag_of_words("caches cached")["cach"] == 2


identifier_words = st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=12)


@given(identifier_words)
@settings(max_examples=300, deadline=None)
def test_lemmatize_idempotent(word):
    once = lemmatize(word)
    assert lemmatize(once) == once


@given(st.lists(identifier_words, max_size=8))
@settings(max_examples=100, deadline=None)
def test_bag_tokens_never_in_drop_lists(words):
    bag = bag_of_words(" ".join(words))
    drop = STOPWORDS | JAVA_KEYWORDS | JAVA_LITERALS
    for token in bag:
        assert token == token.lower()
        assert token not in drop
        assert not token.isdigit()
        assert len(token) > 1
        assert bag[token] >= 1


@given(st.text(max_size=200))
@settings(max_examples=100, deadline=None)
def test_bag_deterministic(blob):
    assert bag_of_words(blob) == bag_of_words(blob)
