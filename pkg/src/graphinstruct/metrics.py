"""Evaluation metrics for downstream predictions.

Classification is scored with macro/micro/weighted F1; generated text
with corpus BLEU-4, an exact-match METEOR variant, ROUGE-L, and CHRF++.
Text metrics tokenize with the package's own unicode-word tokenizer,
lowercased, so scores are deterministic and self-contained. The METEOR
variant deliberately skips stem/synonym matching and is named
``meteor_lite`` so it is not mistaken for the canonical metric.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .tokens import TokenizerConfig, tokenize

OTHER_LABEL = "__other__"

_TEXT_TOKENIZER = TokenizerConfig(mode="unicode-words", count_punctuation=True)


def _toks(text: str) -> list:
    return tokenize(text.lower(), _TEXT_TOKENIZER)


@dataclass(frozen=True)
class ClassificationEval:
    pairs: tuple  # (gold label, predicted label)
    label_set: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "label_set", frozenset(self.label_set))


@dataclass(frozen=True)
class TextEval:
    pairs: tuple  # (candidate text, tuple of reference texts)

    def __post_init__(self):
        pairs = tuple((cand, tuple(refs)) for cand, refs in self.pairs)
        if any(not refs for _, refs in pairs):
            raise ValueError("every candidate needs at least one reference")
        object.__setattr__(self, "pairs", pairs)


def f1_suite(eval: ClassificationEval) -> tuple:
    """(macro, micro, weighted) F1. Out-of-label predictions count as a
    distinct "other" class; zero-support classes are excluded from the
    macro and weighted averages."""
    if not eval.pairs:
        raise ValueError("empty classification eval")
    pairs = [(g, p if p in eval.label_set else OTHER_LABEL) for g, p in eval.pairs]

    classes = sorted(eval.label_set | {OTHER_LABEL})
    tp = Counter()
    fp = Counter()
    fn = Counter()
    support = Counter()
    correct = 0
    for gold, pred in pairs:
        support[gold] += 1
        if gold == pred:
            tp[gold] += 1
            correct += 1
        else:
            fp[pred] += 1
            fn[gold] += 1

    def class_f1(c):
        p_den = tp[c] + fp[c]
        r_den = tp[c] + fn[c]
        p = tp[c] / p_den if p_den else 0.0
        r = tp[c] / r_den if r_den else 0.0
        return 2 * p * r / (p + r) if p + r else 0.0

    present = [c for c in classes if support[c] > 0]
    macro = sum(class_f1(c) for c in present) / len(present)
    weighted = sum(class_f1(c) * support[c] for c in present) / len(pairs)
    micro = correct / len(pairs)  # pooled F1 == accuracy for single-label
    return macro, micro, weighted


def _ngrams(tokens, n) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu4(pairs: TextEval, smooth: bool = False) -> float:
    """Corpus BLEU with uniform weights over 1..4-gram precisions.

    ``smooth`` enables add-one smoothing on the n-gram counts; off by
    default. Reference length uses the closest reference per candidate.
    """
    if not pairs.pairs:
        raise ValueError("empty text eval")
    matched = [0] * 4
    total = [0] * 4
    cand_len = 0
    ref_len = 0
    for cand, refs in pairs.pairs:
        c_toks = _toks(cand)
        r_toks = [_toks(r) for r in refs]
        cand_len += len(c_toks)
        ref_len += min((abs(len(r) - len(c_toks)), len(r)) for r in r_toks)[1]
        for n in range(1, 5):
            counts = _ngrams(c_toks, n)
            if not counts:
                continue
            best = Counter()
            for r in r_toks:
                for gram, cnt in _ngrams(r, n).items():
                    best[gram] = max(best[gram], cnt)
            matched[n - 1] += sum(min(cnt, best[gram]) for gram, cnt in counts.items())
            total[n - 1] += sum(counts.values())

    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    for m, t in zip(matched, total):
        if smooth:
            m, t = m + 1, t + 1
        if t == 0 or m == 0:
            return 0.0
        log_sum += 0.25 * math.log(m / t)
    bp = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / cand_len)
    return bp * math.exp(log_sum)


def _lcs_length(a, b) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            curr.append(prev[j - 1] + 1 if x == y else max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rouge_l(pairs: TextEval) -> float:
    """Mean LCS F-measure (beta=1); multi-reference takes the per-pair max."""
    if not pairs.pairs:
        raise ValueError("empty text eval")
    scores = []
    for cand, refs in pairs.pairs:
        c_toks = _toks(cand)
        best = 0.0
        for ref in refs:
            r_toks = _toks(ref)
            lcs = _lcs_length(c_toks, r_toks)
            if lcs and c_toks and r_toks:
                p = lcs / len(c_toks)
                r = lcs / len(r_toks)
                best = max(best, 2 * p * r / (p + r))
        scores.append(best)
    return sum(scores) / len(scores)


def _chrf_orders(cand: str, ref: str, beta: float) -> float:
    c_chars = "".join(cand.lower().split())
    r_chars = "".join(ref.lower().split())
    c_words = _toks(cand)
    r_words = _toks(ref)

    f_scores = []
    grams = [(list(c_chars), list(r_chars), n) for n in range(1, 7)]
    grams += [(c_words, r_words, n) for n in range(1, 3)]
    for c_seq, r_seq, n in grams:
        c_counts = _ngrams(c_seq, n)
        r_counts = _ngrams(r_seq, n)
        if not c_counts and not r_counts:
            continue
        overlap = sum(min(cnt, r_counts[g]) for g, cnt in c_counts.items())
        p = overlap / sum(c_counts.values()) if c_counts else 0.0
        r = overlap / sum(r_counts.values()) if r_counts else 0.0
        denom = beta * beta * p + r
        f_scores.append((1 + beta * beta) * p * r / denom if denom else 0.0)
    return sum(f_scores) / len(f_scores) if f_scores else 0.0


def chrf_pp(pairs: TextEval, beta: float = 2.0) -> float:
    """CHRF++: character 1..6-grams plus word 1..2-grams, beta=2."""
    if not pairs.pairs:
        raise ValueError("empty text eval")
    scores = []
    for cand, refs in pairs.pairs:
        scores.append(max(_chrf_orders(cand, ref, beta) for ref in refs))
    return sum(scores) / len(scores)


def _align(c_toks, r_toks):
    """Greedy exact-match alignment preferring chunk continuation.

    Returns matched (candidate-position, reference-position) pairs in
    candidate order.
    """
    positions = {}
    for j, tok in enumerate(r_toks):
        positions.setdefault(tok, []).append(j)
    used = set()
    matches = []
    prev_ref = None
    for i, tok in enumerate(c_toks):
        free = [j for j in positions.get(tok, ()) if j not in used]
        if not free:
            prev_ref = None
            continue
        if prev_ref is not None and prev_ref + 1 in free:
            j = prev_ref + 1
        else:
            j = free[0]
        used.add(j)
        matches.append((i, j))
        prev_ref = j
    return matches


def _meteor_pair(c_toks, r_toks) -> float:
    matches = _align(c_toks, r_toks)
    m = len(matches)
    if m == 0:
        return 0.0
    precision = m / len(c_toks)
    recall = m / len(r_toks)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    chunks = 1
    for (ci, rj), (pi, pj) in zip(matches[1:], matches):
        if ci != pi + 1 or rj != pj + 1:
            chunks += 1
    penalty = 0.5 * (chunks / m) ** 3
    return f_mean * (1 - penalty)


def meteor_lite(pairs: TextEval) -> float:
    """Exact-match METEOR: unigram alignment, 9:1 recall-weighted mean,
    fragmentation penalty; no stemming or synonymy."""
    if not pairs.pairs:
        raise ValueError("empty text eval")
    scores = []
    for cand, refs in pairs.pairs:
        c_toks = _toks(cand)
        if not c_toks:
            scores.append(0.0)
            continue
        scores.append(max(_meteor_pair(c_toks, _toks(ref)) for ref in refs))
    return sum(scores) / len(scores)


def metric_report(task: str, gold_pairs, label_space=None) -> dict:
    """All applicable metrics for one task.

    ``gold_pairs`` is a list of (gold, prediction) strings. Classification
    tasks get the F1 suite; graph-to-text gets the text-generation suite.
    """
    if task in ("node_classification", "link_prediction"):
        labels = label_space if label_space is not None else {g for g, _ in gold_pairs}
        macro, micro, weighted = f1_suite(ClassificationEval(tuple(gold_pairs), labels))
        return {"macro_f1": macro, "micro_f1": micro, "weighted_f1": weighted}
    text_eval = TextEval(tuple((pred, (gold,)) for gold, pred in gold_pairs))
    return {
        "bleu4": bleu4(text_eval),
        "meteor_lite": meteor_lite(text_eval),
        "rouge_l": rouge_l(text_eval),
        "chrf_pp": chrf_pp(text_eval),
    }
