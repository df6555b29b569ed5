"""Command-line surface: determinism, caching, exit codes, output formats."""

import json

import pytest

from cmqsearch import cli
from cmqsearch.cli import doc_to_table, main, serialize_table


def run(args, capfd):
    code = main(args)
    out = capfd.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cache(tmp_path):
    return str(tmp_path / "plans.json")


# ----------------------------------------------------------------- determinism

def test_table_rebuild_is_byte_identical(cache, capfd, tmp_path):
    assert main(["table", "--cache", cache]) == 0
    first = (tmp_path / "plans.json").read_bytes()
    assert main(["table", "--cache", cache]) == 0
    assert (tmp_path / "plans.json").read_bytes() == first
    capfd.readouterr()


def test_document_round_trip(table90):
    text = serialize_table(table90)
    rebuilt = doc_to_table(json.loads(text))
    assert serialize_table(rebuilt) == text
    for a, b in zip(table90.plans, rebuilt.plans):
        assert a == b  # dataclass equality: every float bit-exact


def test_plan_from_cache_matches_fresh(cache, capfd, tmp_path):
    main(["table", "--cache", cache])
    capfd.readouterr()
    code, cached, _ = run(["plan", "--lambda", "0.01", "--cache", cache], capfd)
    assert code == 0
    fresh_cache = str(tmp_path / "fresh.json")
    code, fresh, _ = run(["plan", "--lambda", "0.01", "--cache", fresh_cache], capfd)
    assert code == 0
    assert cached == fresh


def test_plan_output_fields(cache, capfd):
    code, out, _ = run(["plan", "--lambda", "0.01", "--cache", cache], capfd)
    assert code == 0
    rec = json.loads(out)
    assert rec["k"] == 8 and rec["m"] == 1
    assert float(rec["phi"]) == pytest.approx(2.432, abs=5e-3)
    assert float(rec["guaranteed_p"]) >= 0.90


# ------------------------------------------------------------------- exit codes

def test_exit_code_ambiguous_range(cache, capfd):
    code, _, err = run(["plan", "--range", "0.2..0.3", "--cache", cache], capfd)
    assert code == 2
    assert "straddles" in err


def test_exit_code_below_coverage(cache, capfd):
    code, _, err = run(["plan", "--lambda", "1e-4", "--cache", cache], capfd)
    assert code == 3
    assert "coverage" in err


def test_exit_code_solver_config(cache, capfd):
    code, _, err = run(["table", "--max-nk", "1", "--cache", cache], capfd)
    assert code == 4
    assert "max_nk" in err


def test_exit_code_verification_negative_control(cache, capfd):
    # an absurdly tight level tolerance must make the equal-level suite fail
    code, out, _ = run(["verify", "--level-tol", "1e-30", "--cache", cache], capfd)
    assert code == 5
    assert "equal_level: FAIL" in out


# ---------------------------------------------------------------------- formats

def test_table_csv_header(cache, capfd):
    code, out, _ = run(["table", "--format", "csv", "--cache", cache], capfd)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,band_lo,band_hi,n_k,phases,q_k_pi"
    assert len(lines) == 9  # header + 8 bands


def test_sweep_csv(cache, capfd):
    code, out, _ = run(["sweep", "--grid", "50", "--algorithms", "ours,grover,long",
                        "--cache", cache], capfd)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "lambda,algorithm,k,p"
    assert len(lines) == 1 + 50 * 3
    for line in lines[1:]:
        lam, alg, k, p = line.split(",")
        float(lam), int(k)
        if alg == "ours":
            assert float(p) >= 0.90 - 1e-9


def test_sweep_rejects_unknown_algorithm(cache, capfd):
    code, _, err = run(["sweep", "--algorithms", "nope", "--cache", cache], capfd)
    assert code == 1
    assert "unknown algorithms" in err


def test_compare_record(cache, capfd):
    code, out, _ = run(["compare", "--lambda", "0.01", "--pcri", "0.9925",
                        "--cache", cache], capfd)
    assert code == 0
    rec = json.loads(out)
    assert rec["k_ours"] == 8 and rec["k_yoder_lb"] == 16
    assert float(rec["yoder_ratio"]) == pytest.approx(2.0, abs=0.15)


# ------------------------------------------------------------------ environment

def test_cache_env_override(tmp_path, capfd, monkeypatch):
    target = tmp_path / "env-cache.json"
    monkeypatch.setenv("CMQSEARCH_CACHE", str(target))
    assert main(["table"]) == 0
    capfd.readouterr()
    assert target.exists()


def test_plan_requires_exactly_one_selector(cache, capfd):
    code, _, err = run(["plan", "--cache", cache], capfd)
    assert code == 1
    assert "exactly one" in err
