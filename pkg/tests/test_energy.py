import math
import random
import re

import mpmath
import pytest

from graphinstruct.energy import compute_energies, node_energy
from graphinstruct.tokens import TokenizerConfig

from conftest import make_graph, read_jsonl_rows


def oracle_energy(t, d, base):
    """High-precision independent evaluation of t * ceil(log_base(d+1))."""
    if d == 0:
        return 0
    with mpmath.workdps(60):
        return t * int(mpmath.ceil(mpmath.log(d + 1) / mpmath.log(base)))


def test_zero_degree_is_zero_energy():
    assert node_energy(42, 0) == 0
    assert node_energy(42, 0, 2.0) == 0


def test_hand_cases_natural_log():
    # ln 8 ~ 2.079 -> ceil 3; ln 2 ~ 0.693 -> ceil 1
    assert node_energy(10, 7) == 30
    assert node_energy(5, 1) == 5
    assert node_energy(10, 7) == oracle_energy(10, 7, math.e)
    assert node_energy(5, 1) == oracle_energy(5, 1, math.e)


def test_exact_power_boundaries():
    # d + 1 an exact power of the base must not flip on float noise
    for k in range(1, 12):
        assert node_energy(1, 2**k - 1, 2.0) == k
        assert node_energy(1, 2**k, 2.0) == k + 1


def test_random_pairs_match_oracle():
    rng = random.Random(101)
    for _ in range(1000):
        t = rng.randint(0, 500)
        d = rng.randint(0, 10**6)
        base = rng.choice([math.e, 2.0, 10.0, 1.5])
        got = node_energy(t, d, base)
        assert got == oracle_energy(t, d, base)
        assert (got == 0) == (t == 0 or d == 0)


def test_monotone_in_both_arguments():
    rng = random.Random(7)
    for _ in range(300):
        t, d = rng.randint(0, 100), rng.randint(0, 100)
        dt, dd = rng.randint(0, 20), rng.randint(0, 20)
        assert node_energy(t + dt, d + dd) >= node_energy(t, d)


def test_degree_plateau_base_e():
    t = 13
    factors = [node_energy(t, d) // t for d in range(0, 65)]
    assert factors[0] == 0
    assert factors[1] == 1 and factors[2] == 2  # the first ceiling step
    assert factors == sorted(factors)
    for d in range(0, 65):
        assert node_energy(t, d) == t * oracle_energy(1, d, math.e)


def test_invalid_base_rejected():
    with pytest.raises(ValueError):
        node_energy(1, 1, 1.0)
    with pytest.raises(ValueError):
        node_energy(1, 1, 0.5)


def test_compute_energies_isolated_nodes():
    g = make_graph({n: {"title": "some words here"} for n in "abc"}, [])
    energies = compute_energies(g)
    assert all(e.energy == 0 for e in energies.values())


def test_compute_energies_two_node_graph():
    g = make_graph({"a": {"t": "a b"}, "b": {"t": "a b c"}}, [("a", "b")])
    energies = compute_energies(g)
    # degree 1 -> ceil(ln 2) = 1, energy equals the token count
    assert energies["a"].energy == 2
    assert energies["b"].energy == 3


def test_compute_energies_against_raw_file_oracle(citeworld, citeworld_energies,
                                                  citeworld_paths):
    nodes_path, edges_path = citeworld_paths
    word_or_punct = re.compile(r"\w+|[^\w\s]", re.UNICODE)  # oracle's own counter
    degrees = {}
    for row in read_jsonl_rows(edges_path):
        degrees[row["src"]] = degrees.get(row["src"], 0) + 1
        degrees[row["dst"]] = degrees.get(row["dst"], 0) + 1
    for row in read_jsonl_rows(nodes_path):
        nid = row["id"]
        text = row["title"] + " " + row["abstract"]
        t = len(word_or_punct.findall(text))
        d = degrees.get(nid, 0)
        e = citeworld_energies[nid]
        assert (e.token_count, e.degree) == (t, d)
        assert e.energy == oracle_energy(t, d, math.e)


def test_attribute_concatenation_counts_join_independently():
    # spaces between attributes must not merge word runs
    cfg = TokenizerConfig()
    g = make_graph({"a": {"x": "one two", "y": "three"}}, [])
    assert compute_energies(g, cfg)["a"].token_count == 3
