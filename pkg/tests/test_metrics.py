import math
import random

import pytest

from graphinstruct.metrics import (OTHER_LABEL, ClassificationEval, TextEval,
                                   bleu4, chrf_pp, f1_suite, meteor_lite,
                                   metric_report, rouge_l)


def ce(gold, pred, labels):
    return ClassificationEval(tuple(zip(gold, pred)), frozenset(labels))


def te(*pairs):
    return TextEval(tuple((c, tuple(r) if isinstance(r, (list, tuple)) else (r,))
                          for c, r in pairs))


# --- F1 suite ---------------------------------------------------------------

def test_all_correct_is_perfect():
    assert f1_suite(ce("abcab", "abcab", "abc")) == (1.0, 1.0, 1.0)


def test_hand_confusion_case():
    macro, micro, weighted = f1_suite(ce("aab", "abb", "ab"))
    # class a: P=1, R=1/2 -> 2/3; class b: P=1/2, R=1 -> 2/3
    assert macro == pytest.approx(2 / 3)
    assert micro == pytest.approx(2 / 3)
    assert weighted == pytest.approx(2 / 3)


def test_single_class_degenerate():
    assert f1_suite(ce("aaa", "aaa", "ab")) == (1.0, 1.0, 1.0)


def test_out_of_label_prediction_counts_as_other():
    macro, micro, weighted = f1_suite(ce("aa", ["a", "junk"], "ab"))
    assert micro == 0.5  # the malformed prediction stays in the denominator
    assert macro == pytest.approx(2 / 3)  # only class a has support


def f1_oracle(gold, pred, labels):
    """From-scratch confusion-matrix scorer."""
    mapped = [p if p in labels else OTHER_LABEL for p in pred]
    present = sorted(set(gold))
    f1s, supports = [], []
    for c in present:
        tp = sum(1 for g, p in zip(gold, mapped) if g == c and p == c)
        fp = sum(1 for g, p in zip(gold, mapped) if g != c and p == c)
        fn = sum(1 for g, p in zip(gold, mapped) if g == c and p != c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1s.append(2 * prec * rec / (prec + rec) if prec + rec else 0.0)
        supports.append(gold.count(c))
    macro = sum(f1s) / len(f1s)
    weighted = sum(f * s for f, s in zip(f1s, supports)) / len(gold)
    micro = sum(1 for g, p in zip(gold, mapped) if g == p) / len(gold)
    return macro, micro, weighted


def test_matches_brute_force_scorer_exactly():
    rng = random.Random(17)
    labels = ["a", "b", "c", "d"]
    for _ in range(100):
        n = rng.randint(1, 40)
        gold = [rng.choice(labels) for _ in range(n)]
        pred = [rng.choice(labels + ["weird output"]) for _ in range(n)]
        assert f1_suite(ce(gold, pred, labels)) == f1_oracle(gold, pred, labels)


def test_micro_equals_accuracy():
    rng = random.Random(18)
    for _ in range(50):
        n = rng.randint(1, 30)
        gold = [rng.choice("xyz") for _ in range(n)]
        pred = [rng.choice("xyz") for _ in range(n)]
        _, micro, _ = f1_suite(ce(gold, pred, "xyz"))
        assert micro == sum(g == p for g, p in zip(gold, pred)) / n


def test_empty_eval_rejected():
    with pytest.raises(ValueError):
        f1_suite(ce("", "", "ab"))
    with pytest.raises(ValueError):
        bleu4(TextEval(()))
    with pytest.raises(ValueError):
        TextEval((("candidate", ()),))


# --- BLEU-4 -----------------------------------------------------------------

def test_bleu_identical_text():
    assert bleu4(te(("the quick brown fox jumps", "the quick brown fox jumps"))) \
        == pytest.approx(1.0)


def test_bleu_brevity_penalty_hand_case():
    score = bleu4(te(("a b c d", "a b c d e")))
    assert score == pytest.approx(math.exp(1 - 5 / 4), abs=1e-6)
    assert score == pytest.approx(0.7788007831, abs=1e-6)


def test_bleu_disjoint_is_zero():
    assert bleu4(te(("aa bb cc dd", "xx yy zz ww"))) == 0.0


def test_bleu_empty_candidate_is_zero():
    assert bleu4(te(("", "some reference text here"))) == 0.0


def test_bleu_smoothing_rescues_short_candidates():
    pairs = te(("a b c", "a b c"))  # no 4-grams at all
    assert bleu4(pairs) == 0.0
    assert 0.0 < bleu4(pairs, smooth=True) <= 1.0


# --- ROUGE-L ----------------------------------------------------------------

def test_rouge_identical():
    assert rouge_l(te(("same text here", "same text here"))) == pytest.approx(1.0)


def test_rouge_hand_case():
    # LCS("a c e", "a b c d e") = 3; P=1, R=3/5 -> F1 = 0.75
    assert rouge_l(te(("a c e", "a b c d e"))) == pytest.approx(0.75)


def test_rouge_disjoint():
    assert rouge_l(te(("p q r", "x y z"))) == 0.0


def lcs_oracle(a, b):
    """Exponential enumeration of every subsequence of ``a``."""
    best = 0
    for mask in range(1 << len(a)):
        sub = [a[i] for i in range(len(a)) if mask >> i & 1]
        it = iter(b)
        if all(tok in it for tok in sub):
            best = max(best, len(sub))
    return best


def test_rouge_matches_enumeration_oracle():
    rng = random.Random(23)
    vocab = "abcde"
    for _ in range(100):
        a = [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
        b = [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
        lcs = lcs_oracle(a, b)
        if lcs == 0:
            expected = 0.0
        else:
            p, r = lcs / len(a), lcs / len(b)
            expected = 2 * p * r / (p + r)
        got = rouge_l(te((" ".join(a), " ".join(b))))
        assert got == pytest.approx(expected, abs=1e-9)


def test_rouge_multi_reference_takes_max():
    pairs = te(("a c e", ["x y z", "a b c d e"]))
    assert rouge_l(pairs) == pytest.approx(0.75)


# --- CHRF++ -----------------------------------------------------------------

def test_chrf_identical():
    assert chrf_pp(te(("exact same sentence", "exact same sentence"))) \
        == pytest.approx(1.0)


def test_chrf_disjoint_alphabets():
    assert chrf_pp(te(("aaa bbb", "xyz qrs"))) == 0.0


def chrf_oracle(cand, ref, beta=2.0):
    """Second implementation written directly from the CHRF++ definition."""
    from graphinstruct.tokens import TokenizerConfig, tokenize
    word_tok = TokenizerConfig(mode="unicode-words", count_punctuation=True)

    def counts(seq, n):
        table = {}
        for i in range(len(seq) - n + 1):
            key = tuple(seq[i:i + n])
            table[key] = table.get(key, 0) + 1
        return table

    def fscore(c_seq, r_seq, n):
        c, r = counts(c_seq, n), counts(r_seq, n)
        if not c and not r:
            return None
        overlap = sum(min(v, r.get(k, 0)) for k, v in c.items())
        prec = overlap / sum(c.values()) if c else 0.0
        rec = overlap / sum(r.values()) if r else 0.0
        if prec + rec == 0:
            return 0.0
        return (1 + beta ** 2) * prec * rec / (beta ** 2 * prec + rec)

    cand_chars = "".join(cand.lower().split())
    ref_chars = "".join(ref.lower().split())
    cand_words = tokenize(cand.lower(), word_tok)
    ref_words = tokenize(ref.lower(), word_tok)
    scores = [fscore(cand_chars, ref_chars, n) for n in range(1, 7)]
    scores += [fscore(cand_words, ref_words, n) for n in range(1, 3)]
    scores = [s for s in scores if s is not None]
    return sum(scores) / len(scores) if scores else 0.0


def test_chrf_agrees_with_second_implementation():
    rng = random.Random(31)
    vocab = "graph node energy walk token budget ego the of".split()
    for _ in range(60):
        cand = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 12)))
        ref = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 12)))
        got = chrf_pp(te((cand, ref)))
        assert got == pytest.approx(chrf_oracle(cand, ref), abs=1e-9)


# --- METEOR (exact-match variant) -------------------------------------------

def test_meteor_identical_matches_direct_formula():
    for text in ("one", "one two three", "a b c d e f g h"):
        m = len(text.split())
        expected = 1.0 * (1 - 0.5 * (1 / m) ** 3)  # P=R=Fmean=1, one chunk
        assert meteor_lite(te((text, text))) == pytest.approx(expected)


def test_meteor_disjoint():
    assert meteor_lite(te(("p q r", "x y z"))) == 0.0


def test_meteor_reordering_lowers_score():
    ref = "a b c d"
    ordered = meteor_lite(te(("a b c d", ref)))
    scrambled = meteor_lite(te(("b a d c", ref)))
    assert scrambled < ordered


def test_meteor_formula_hand_case():
    # cand "a b x", ref "a b c": m=2, P=2/3, R=2/3, 1 chunk
    p = r = 2 / 3
    f_mean = 10 * p * r / (r + 9 * p)
    expected = f_mean * (1 - 0.5 * (1 / 2) ** 3)
    assert meteor_lite(te(("a b x", "a b c"))) == pytest.approx(expected)


# --- report -----------------------------------------------------------------

def test_report_classification_keys():
    report = metric_report("node_classification",
                           [("a", "a"), ("b", "a")], label_space={"a", "b"})
    assert set(report) == {"macro_f1", "micro_f1", "weighted_f1"}
    assert report["micro_f1"] == 0.5


def test_report_text_keys_and_ranges():
    report = metric_report("graph_to_text",
                           [("the quick brown fox jumps", "the quick brown fox leaps")])
    assert set(report) == {"bleu4", "meteor_lite", "rouge_l", "chrf_pp"}
    assert all(0.0 <= v <= 1.0 for v in report.values())


def test_all_metrics_bounded():
    rng = random.Random(41)
    vocab = "alpha beta gamma delta".split()
    pairs = []
    for _ in range(20):
        cand = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 8)))
        ref = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8)))
        pairs.append((cand, ref))
    ev = te(*pairs)
    for metric in (bleu4, rouge_l, chrf_pp, meteor_lite):
        assert 0.0 <= metric(ev) <= 1.0
