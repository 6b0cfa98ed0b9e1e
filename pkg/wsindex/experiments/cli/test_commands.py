"""Command line testing.
"""

import os

import pytest

from wsindex.cli.commands import (EXIT_LOAD, EXIT_OK, EXIT_USAGE, UsageError,
                                  answer_query, load_index, main, parse_query_batch)
from wsindex.core.weightedseq import parse_weighted_sequence
from wsindex.index.weightedindex import WeightedIndex, build_weighted_index
from wsindex.experiments.helpers import overwrite_tree_word


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write(path, text):
    with open(path, "w", encoding="utf-8") as file:
        file.write(text)
    return str(path)


def stats(stderr):
    return dict(line.split("=", 1) for line in stderr.splitlines() if "=" in line)


# ---
# gen
# ---

def test_gen_stdout(capsys):
    assert main(["gen", "6", "2", "--seed", "1"]) == EXIT_OK
    x = parse_weighted_sequence(capsys.readouterr().out)
    assert x.n == 6
    assert x.alphabet.letters == "AB"


def test_gen_file(workdir):
    assert main(["gen", "40", "4", "--seed", "2", "-o", "x.wseq"]) == EXIT_OK
    assert main(["build", "x.wseq", "--z", "3"]) == EXIT_OK
    assert os.path.exists("x.wix")


def test_gen_rejects(capsys):
    assert main(["gen", "0", "2"]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error: ")


# -----
# build
# -----

def test_build(workdir, profile_path, capsys):
    assert main(["build", profile_path, "--z", "4", "-o", "x.wix"]) == EXIT_OK
    found = stats(capsys.readouterr().err)
    assert found["blocks"] == "4"
    assert found["block_length"] == "6"
    assert {"nodes_created", "nodes_deleted", "walk_steps", "build_seconds"} <= set(found)


def test_build_small_z(workdir, profile_path, capsys):
    assert main(["build", profile_path, "--z", "0.5"]) == EXIT_USAGE
    assert "floor(z) < 1" in capsys.readouterr().err


def test_build_missing_file(workdir, capsys):
    assert main(["build", "missing.wseq", "--z", "4"]) == EXIT_LOAD


def test_build_needs_threshold(workdir, profile_path):
    assert main(["build", profile_path]) == EXIT_USAGE
    assert main(["build", profile_path, "--z", "4", "--eps", "0.25"]) == EXIT_USAGE


def test_build_randomized(workdir, profile_path, capsys):
    assert main(["build", profile_path, "--z", "4", "--randomized", "--seed", "3",
                 "-o", "r.wix"]) == EXIT_OK
    assert stats(capsys.readouterr().err)["sampled_strings"] == "51"
    assert load_index("r.wix").randomized


def test_build_normalize(workdir, capsys):
    write("bad.wseq", "WSEQ 2 AB\nA:0.5 B:0.4\nA:1\n")
    assert main(["build", "bad.wseq", "--z", "2"]) == EXIT_USAGE
    assert main(["build", "bad.wseq", "--z", "2", "--normalize"]) == EXIT_OK


# -----
# query
# -----

def test_query_exact(workdir, profile_path, capsys):
    main(["build", profile_path, "--z", "4", "-o", "x.wix"])
    write("batch.txt", "report AA\ndecide BAB\n\n# comment\ncount AA\nreport C\n")
    capsys.readouterr()

    assert main(["query", "x.wix", "batch.txt"]) == EXIT_OK
    assert capsys.readouterr().out == ("report AA 1 2 3 4\ndecide BAB false\n"
                                       "count AA 4\nreport C\n")


def test_query_approximate(workdir, profile_path, capsys):
    assert main(["build", profile_path, "--eps", "0.25", "-o", "x.awix"]) == EXIT_OK
    write("batch.txt", "approx A 2\napprox AAB 4\ndecide AA\n")
    capsys.readouterr()

    assert main(["query", "x.awix", "batch.txt"]) == EXIT_OK
    assert capsys.readouterr().out == ("approximate eps=0.25\napprox A 1 2 3 4 5\n"
                                       "approx AAB 3 4\ndecide AA true\n")


def test_query_errors(workdir, profile_path, capsys):
    main(["build", profile_path, "--z", "4", "-o", "x.wix"])
    write("approx.txt", "approx A 2\n")
    write("bad.txt", "find AA\n")
    write("corrupt.wix", "WIX1 but not really")

    assert main(["query", "x.wix", "approx.txt"]) == EXIT_USAGE
    assert main(["query", "x.wix", "bad.txt"]) == EXIT_USAGE
    assert main(["query", "corrupt.wix", "bad.txt"]) == EXIT_LOAD
    assert main(["query", "missing.wix", "bad.txt"]) == EXIT_LOAD


def test_query_corrupt_tree(workdir, profile, capsys):
    index = build_weighted_index(profile, 4)
    write("batch.txt", "report A\n")
    with open("bad.wix", "wb") as file:
        file.write(overwrite_tree_word(index.to_bytes(), index.tree, "child_ids", 0, 999,
                                       start=WeightedIndex.HEADER.size))

    assert main(["query", "bad.wix", "batch.txt"]) == EXIT_LOAD
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith("error: Corrupt property suffix tree")


def test_parse_query_batch():
    assert parse_query_batch(["report AA", "", "approx B 2.5  # x"]) == [
        ("report", "AA", None), ("approx", "B", 2.5)]
    for line in ["report", "approx A", "approx A two", "count A B"]:
        with pytest.raises(UsageError):
            parse_query_batch([line])


def test_loaded_answers_match(workdir, profile, capsys):
    index = build_weighted_index(profile, 4)
    index.save("x.wix")
    loaded = load_index("x.wix")
    for pattern in ["A", "AA", "AAB", "BB", "BAB", "ABAA"]:
        for mode in ["decide", "count", "report"]:
            assert answer_query(loaded, mode, pattern) == answer_query(index, mode, pattern)


# ------
# verify
# ------

def test_verify_profile(workdir, profile_path, capsys):
    assert main(["verify", profile_path, "--z", "4", "--seeds", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6
    assert all(line.startswith("check ") and line.endswith(" pass") for line in lines)


def test_verify_random(workdir, capsys):
    main(["gen", "30", "4", "--seed", "7", "-o", "r.wseq"])
    assert main(["verify", "r.wseq", "--z", "7.5", "--seeds", "2"]) == EXIT_OK


def test_verify_bad_input(workdir, capsys):
    write("bad.wseq", "WSEQ 1 AB\nA:0.7 B:0.7\n")
    assert main(["verify", "bad.wseq", "--z", "2"]) == EXIT_USAGE


def test_verify_reports_failure(workdir, profile_path, capsys, monkeypatch):
    monkeypatch.setattr("wsindex.cli.commands.oracle_checks",
                        lambda x, z, seeds: [("always", lambda: True), ("broken", lambda: False)])
    assert main(["verify", profile_path, "--z", "4"]) == 1
    assert capsys.readouterr().out == "check always pass\ncheck broken fail\n"
