"""Deterministic synthetic diachronic corpus used by the demos and pipeline tests.

Eight vehicle lemmas, 25 sentences each.  Every lemma is realised in a few
construction classes whose first attestations follow a mostly fixed order
(CONJ, then CCOMP/ROOT, then DEP, then NSUBJ), plus a couple of one-off
variants that the cluster filters should discard.
"""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, DepSentence, Token, write_conllu

LEMMAS = ["chao", "chonglang", "chongci", "shache", "qiake", "zhuangche", "lianyin", "jingen"]

# incoming label -> (dependents before the vehicle, dependents after it)
TEMPLATES = {
    "CONJ": (["advmod", "nmod:prep"], []),
    "ROOT": (["nsubj", "advmod", "nmod:prep"], []),
    "CCOMP": ([], []),
    "DEP": (["case"], []),
    "NSUBJ": ([], ["dep"]),
}
OUTLIER_TEMPLATES = [
    ("DOBJ", ["compound:nn"], []),
    ("ACL", [], ["nsubj"]),
    ("ROOT", ["nsubj"], ["dobj"]),
]

# per lemma: (class, instance count, earliest possible year)
PLANS = {
    "chao":      [("CONJ", 9, 1950), ("ROOT", 7, 1958), ("NSUBJ", 7, 1966)],
    "chonglang": [("CONJ", 8, 1980), ("DEP", 8, 1986), ("NSUBJ", 7, 1990)],
    "chongci":   [("CONJ", 9, 1955), ("CCOMP", 7, 1960), ("NSUBJ", 7, 1970)],
    "shache":    [("CONJ", 8, 1954), ("DEP", 8, 1962), ("NSUBJ", 7, 1968)],
    "qiake":     [("CONJ", 9, 1962), ("ROOT", 7, 1967), ("NSUBJ", 7, 1975)],
    "zhuangche": [("CONJ", 8, 1961), ("DEP", 8, 1966), ("NSUBJ", 7, 1972)],
    "lianyin":   [("CONJ", 9, 1981), ("CCOMP", 7, 1982), ("NSUBJ", 7, 1984)],
    "jingen":    [("NSUBJ", 9, 1947), ("CONJ", 7, 1952), ("ROOT", 7, 1956)],
}

FILLER = {
    "nsubj": "qiye", "advmod": "zhudong", "nmod:prep": "yuanxiao", "case": "yu",
    "dep": "xianxiang", "dobj": "jishu", "compound:nn": "wenqi",
}


def _sentence(sent_id: str, year: int, lemma: str, incoming: str,
              before: list[str], after: list[str]) -> DepSentence:
    rows = []  # (surface, deprel, head_key)
    if incoming == "NSUBJ":
        rows += [(FILLER[d], d, "V") for d in before]
        rows.append((lemma, "nsubj", "G"))
        rows += [(FILLER[d], d, "V") for d in after]
        rows.append(("chuxian", "root", None))
    elif incoming == "ROOT":
        rows += [(FILLER[d], d, "V") for d in before]
        rows.append((lemma, "root", None))
        rows += [(FILLER[d], d, "V") for d in after]
    else:
        rows.append(("tamen", "nsubj", "G"))
        rows.append(("xiwang", "root", None))
        rows += [(FILLER[d], d, "V") for d in before]
        rows.append((lemma, incoming.lower(), "G"))
        rows += [(FILLER[d], d, "V") for d in after]
    vehicle = next(i for i, r in enumerate(rows, 1) if r[0] == lemma)
    governor = next(i for i, r in enumerate(rows, 1) if r[1] == "root")
    tokens = []
    for i, (surface, rel, key) in enumerate(rows, 1):
        head = 0 if key is None else (vehicle if key == "V" else governor)
        upos = "VERB" if rel == "root" or surface == lemma else "NOUN"
        tokens.append(Token(i, surface, surface, upos, head, rel))
    return DepSentence(sent_id, year, tuple(tokens))


def generate_corpus(seed: int = 2024) -> Corpus:
    rng = np.random.default_rng(seed)
    sentences = []
    for lemma in LEMMAS:
        plan = []
        for incoming, count, start in PLANS[lemma]:
            before, after = TEMPLATES[incoming]
            years = [start] + [start + int(rng.integers(0, 15)) for _ in range(count - 1)]
            plan += [(y, incoming, before, after) for y in years]
        while len(plan) < 25:
            incoming, before, after = OUTLIER_TEMPLATES[int(rng.integers(0, len(OUTLIER_TEMPLATES)))]
            plan.append((int(rng.integers(1946, 2005)), incoming, before, after))
        order = rng.permutation(len(plan))
        for n, idx in enumerate(order, 1):
            year, incoming, before, after = plan[idx]
            year = min(int(year), 2004)
            sentences.append(_sentence(f"{lemma}-{n:02d}", year, lemma, incoming, before, after))
    return Corpus(tuple(sentences))


def synthetic_conllu(seed: int = 2024) -> str:
    return write_conllu(generate_corpus(seed))


if __name__ == "__main__":
    import sys
    sys.stdout.write(synthetic_conllu())
