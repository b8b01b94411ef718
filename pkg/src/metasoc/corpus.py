"""Reading year-stamped CoNLL-U corpora and pulling out occurrences of a lemma.

Each sentence block must carry a ``# year = YYYY`` comment; ``# sent_id``
is optional (a positional id is generated when absent).  Multi-word token
ranges (``1-2``) and empty nodes (``1.1``) are not part of the basic tree
and are dropped on read.

Example::

    corpus = parse_corpus(open("news.conllu", encoding="utf-8"))
    for inst in extract_instances(corpus, "lianyin"):
        print(inst.year, inst.incoming_label, inst.dependent_labels)
"""

from __future__ import annotations

import io
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, TextIO

from .errors import CorpusError, MalformedTree, MissingYear

log = logging.getLogger(__name__)

ROOT = "ROOT"

# Appendix-style glossary of the relation labels the construction tables use.
DEPENDENCY_GLOSSARY = {
    "ACL": "D is the head of an attributive clause of H",
    "ADVCL:LOC": "D is the head of an adverbial clause of H",
    "ADVMOD": "D is an adverbial modifier of H",
    "CASE": "D is a grammatical marker of H",
    "CCOMP": "D is the head of a clausal complement of H",
    "COMP": "D is the head of a complement of H",
    "COMPOUND": "D forms a compound phrase with H (suffix gives the category)",
    "CONJ": "H is a conjunct of D and precedes D in word order",
    "DEP": "unspecified dependency between H and D",
    "DOBJ": "D is the direct object of H",
    "MOD:PREP": "D heads a preposition-introduced modifier of H",
    "NMOD:PREP": "D is a prepositional modifier of H",
    "NSUBJ": "D is the nominal subject of H",
    "ROOT": "D is the predicate verb of the sentence",
}


def describe_label(label: str) -> str | None:
    """Gloss for a relation label; subtyped labels fall back to their base."""
    label = label.upper()
    if label in DEPENDENCY_GLOSSARY:
        return DEPENDENCY_GLOSSARY[label]
    base = label.split(":", 1)[0]
    return DEPENDENCY_GLOSSARY.get(base)


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    lemma: str
    upos: str
    head: int
    deprel: str
    # XPOS, FEATS, DEPS, MISC kept verbatim for round-tripping
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    @property
    def is_root(self) -> bool:
        return self.deprel.upper() == ROOT


@dataclass(frozen=True)
class DepSentence:
    sent_id: str
    year: int
    tokens: tuple[Token, ...]
    # other "# key = value" comments, in input order
    comments: tuple[tuple[str, str], ...] = ()

    def dependents(self, index: int) -> list[Token]:
        return [t for t in self.tokens if t.head == index]

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[DepSentence, ...] = ()
    rejected: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    @property
    def year_range(self) -> tuple[int, int] | None:
        if not self.sentences:
            return None
        years = [s.year for s in self.sentences]
        return min(years), max(years)

    def __len__(self) -> int:
        return len(self.sentences)

    def label_inventory(self) -> set[str]:
        labels = {ROOT}
        for s in self.sentences:
            labels.update(t.deprel.upper() for t in s.tokens)
        return labels


@dataclass(frozen=True)
class Instance:
    """One occurrence of the vehicle lemma, seen from its position in the tree."""

    lemma: str
    sentence_ref: str
    year: int
    core_index: int
    incoming_label: str
    dependent_labels: tuple[str, ...]
    dependent_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dependent_labels"] = list(self.dependent_labels)
        d["dependent_indices"] = list(self.dependent_indices)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        return cls(
            lemma=d["lemma"],
            sentence_ref=d["sentence_ref"],
            year=int(d["year"]),
            core_index=int(d["core_index"]),
            incoming_label=d["incoming_label"],
            dependent_labels=tuple(d["dependent_labels"]),
            dependent_indices=tuple(int(i) for i in d["dependent_indices"]),
        )


def _blocks(lines: Iterable[str]) -> Iterator[list[str]]:
    block: list[str] = []
    for line in lines:
        line = line.rstrip("\r\n")
        if line.strip():
            block.append(line)
        elif block:
            yield block
            block = []
    if block:
        yield block


def validate_tree(tokens: tuple[Token, ...], sent_id: str | None = None) -> None:
    """Raise MalformedTree unless ``tokens`` form a single-rooted dependency tree."""
    n = len(tokens)
    if n == 0:
        raise MalformedTree("no tokens", sent_id)
    for pos, tok in enumerate(tokens, start=1):
        if tok.index != pos:
            raise MalformedTree(f"token ids not consecutive at {tok.index}", sent_id)
        if tok.head == tok.index:
            raise MalformedTree(f"token {tok.index} is its own head", sent_id)
        if not 0 <= tok.head <= n:
            raise MalformedTree(f"token {tok.index} has dangling head {tok.head}", sent_id)
        if (tok.head == 0) != tok.is_root:
            raise MalformedTree(
                f"token {tok.index}: head {tok.head} inconsistent with label {tok.deprel}",
                sent_id,
            )
    roots = [t.index for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise MalformedTree(f"expected one root, found {len(roots)}", sent_id)
    # every token must reach the root without revisiting a node
    for tok in tokens:
        seen = set()
        cur = tok.index
        while cur != 0:
            if cur in seen:
                raise MalformedTree(f"cycle through token {cur}", sent_id)
            seen.add(cur)
            cur = tokens[cur - 1].head


def _parse_block(block: list[str], position: int) -> DepSentence:
    meta: list[tuple[str, str]] = []
    rows: list[list[str]] = []
    for line in block:
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta.append((key.strip(), value.strip()))
        else:
            rows.append(line.split("\t"))

    metadata = dict(meta)
    sent_id = metadata.get("sent_id", f"s{position}")
    if "year" not in metadata:
        raise MissingYear("no '# year = YYYY' comment", sent_id)
    try:
        year = int(metadata["year"])
    except ValueError:
        raise MissingYear(f"year {metadata['year']!r} is not an integer", sent_id) from None

    tokens = []
    for cols in rows:
        if len(cols) != 10:
            raise MalformedTree(f"expected 10 columns, got {len(cols)}", sent_id)
        if "-" in cols[0] or "." in cols[0]:
            continue
        try:
            index, head = int(cols[0]), int(cols[6])
        except ValueError:
            raise MalformedTree(f"non-integer ID/HEAD in row {cols[0]!r}", sent_id) from None
        tokens.append(Token(index=index, surface=cols[1], lemma=cols[2], upos=cols[3],
                            xpos=cols[4], feats=cols[5], head=head, deprel=cols[7],
                            deps=cols[8], misc=cols[9]))
    tokens = tuple(tokens)
    validate_tree(tokens, sent_id)
    comments = tuple((k, v) for k, v in meta if k not in ("sent_id", "year"))
    return DepSentence(sent_id=sent_id, year=year, tokens=tokens, comments=comments)


def parse_corpus(stream: TextIO | str, format: str = "conllu", strict: bool = False) -> Corpus:
    """Parse a CoNLL-U stream (or string) into a Corpus.

    With ``strict=False`` malformed blocks are skipped and listed in
    ``Corpus.rejected``; with ``strict=True`` the first problem raises.
    """
    if format != "conllu":
        raise ValueError(f"unsupported corpus format {format!r}")
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    sentences = []
    rejected = []
    for position, block in enumerate(_blocks(stream), start=1):
        try:
            sentences.append(_parse_block(block, position))
        except CorpusError as exc:
            if strict:
                raise
            rejected.append((exc.sent_id, str(exc)))
    if rejected:
        log.warning("skipped %d malformed sentence(s)", len(rejected))
    return Corpus(sentences=tuple(sentences), rejected=tuple(rejected))


def read_corpus(path, strict: bool = False) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, strict=strict)


def write_conllu(corpus: Corpus) -> str:
    out = []
    for s in corpus.sentences:
        out.append(f"# sent_id = {s.sent_id}")
        out.append(f"# year = {s.year}")
        for key, value in s.comments:
            out.append(f"# {key} = {value}")
        for t in s.tokens:
            out.append("\t".join([str(t.index), t.surface, t.lemma, t.upos, t.xpos, t.feats,
                                  str(t.head), t.deprel, t.deps, t.misc]))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def instance_at(sentence: DepSentence, index: int) -> Instance:
    tok = sentence.token(index)
    deps = sentence.dependents(index)  # already in token order
    incoming = ROOT if tok.head == 0 else tok.deprel.upper()
    return Instance(
        lemma=tok.lemma,
        sentence_ref=sentence.sent_id,
        year=sentence.year,
        core_index=index,
        incoming_label=incoming,
        dependent_labels=tuple(d.deprel.upper() for d in deps),
        dependent_indices=tuple(d.index for d in deps),
    )


def extract_instances(corpus: Corpus, lemma: str) -> list[Instance]:
    """All occurrences of ``lemma`` (exact match on the LEMMA column)."""
    if not lemma:
        raise ValueError("lemma must be non-empty")
    found = [
        instance_at(s, t.index)
        for s in corpus.sentences
        for t in s.tokens
        if t.lemma == lemma
    ]
    found.sort(key=lambda i: (i.year, i.sentence_ref, i.core_index))
    return found


def instances_to_jsonl(instances: Iterable[Instance]) -> str:
    return "".join(json.dumps(i.to_dict(), ensure_ascii=False, sort_keys=True) + "\n"
                   for i in instances)
