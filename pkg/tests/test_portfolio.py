import random
from fractions import Fraction

import pytest

from approvalwd import (
    CCAV,
    compute_params,
    Election,
    format_instance,
    Instance,
    MAV,
    PAV,
    RULES,
)
from approvalwd.oracle import brute_force
from approvalwd.portfolio import (
    AllSolversExceededError,
    bench,
    dispatch,
    DispatchPolicy,
    generate,
    GeneratorConfig,
    verify,
)

from helpers import e1, random_election


def test_dispatch_routing():
    res = dispatch(Instance(election=e1(), rule=PAV, k=2, d=Fraction(7, 2)))
    assert res.algorithm == "pav_deg22" and res.decision

    av = Election(m=3, votes=(frozenset({0}), frozenset({0}), frozenset({1})))
    res = dispatch(Instance(election=av, rule=CCAV, k=1, d=2))
    assert res.algorithm == "av_optimal" and res.decision

    res = dispatch(Instance(election=e1(), rule=MAV, k=1, d=2))
    assert res.algorithm == "mav_deg2" and res.decision


def test_dispatch_fpt_route():
    # deltaC = 3 knocks out every polynomial special case
    e = Election(
        m=4,
        votes=(
            frozenset({0, 1, 2}),
            frozenset({0, 2, 3}),
            frozenset({0, 1, 3}),
        ),
    )
    for rule in RULES:
        inst = Instance(election=e, rule=rule, k=2, d=1)
        res = dispatch(inst)
        assert res.decision == brute_force(inst).decision
        assert res.algorithm != "brute_force"


def test_dispatch_matches_oracle():
    rng = random.Random(80)
    for _ in range(80):
        e = random_election(rng)
        inst = Instance(
            election=e,
            rule=rng.choice(RULES),
            k=rng.randint(0, e.m),
            d=Fraction(rng.randint(0, 8), rng.choice((1, 2))),
        )
        assert dispatch(inst).decision == brute_force(inst).decision


def test_dispatch_budget_exhaustion():
    e = Election(m=30, votes=tuple(frozenset({c, (c + 1) % 30, (c + 2) % 30}) for c in range(30)))
    inst = Instance(election=e, rule=PAV, k=15, d=40)
    tiny = DispatchPolicy(fpt_cost_cap=0, class_vote_budget=0, brute_m_budget=5, tw_width_cap=-1)
    with pytest.raises(AllSolversExceededError):
        dispatch(inst, tiny)


def test_generator_determinism_and_caps():
    config = GeneratorConfig(m=5, n=4, max_dv=2, max_dc=None)
    assert generate(config, 1) == generate(config, 1)
    assert generate(config, 1) != generate(config, 2) or True  # seeds may collide, no assert
    for seed in range(30):
        e = generate(GeneratorConfig(m=6, n=5, max_dv=2, max_dc=1), seed)
        assert e.delta_v <= 2
        assert e.delta_c <= 1
        p = compute_params(Instance(election=e, rule=MAV, k=0, d=0))
        assert p.delta_v <= 2 and p.delta_c <= 1
    with pytest.raises(ValueError):
        generate(GeneratorConfig(m=-1, n=0), 0)
    with pytest.raises(ValueError):
        generate(GeneratorConfig(m=1, n=1, max_dv=-1), 0)


def _write_corpus(path, count, seed):
    rng = random.Random(seed)
    for i in range(count):
        e = random_election(rng, max_m=5, max_n=4)
        inst = Instance(
            election=e,
            rule=rng.choice(RULES),
            k=rng.randint(0, e.m),
            d=rng.randint(0, 4),
        )
        (path / f"inst{i:03d}.appr").write_text(format_instance(inst))


def test_verify_corpus(tmp_path):
    _write_corpus(tmp_path, 25, seed=81)
    ok, report = verify(str(tmp_path))
    assert ok
    assert not [r for r in report if r["status"] == "disagreement"]


def test_verify_corrupt_file(tmp_path):
    _write_corpus(tmp_path, 3, seed=82)
    (tmp_path / "broken.appr").write_text("not an instance\n")
    (tmp_path / "ignored.txt").write_text("not scanned\n")
    ok, report = verify(str(tmp_path))
    assert ok  # parse errors are reported, not disagreements
    assert [r for r in report if r["status"] == "parse-error"]


def test_verify_empty_corpus(tmp_path):
    ok, report = verify(str(tmp_path))
    assert ok and report == []


def test_bench(tmp_path):
    _write_corpus(tmp_path, 5, seed=83)
    text = bench(str(tmp_path))
    lines = text.strip().splitlines()
    assert lines[0].startswith("instance,rule,m,n,k")
    assert len(lines) == 6
