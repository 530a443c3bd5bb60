import json

import pytest

from camsim.cli import build_parser, main


def test_parser_search_defaults():
    args = build_parser().parse_args(["search"])
    assert args.verb == "search"
    assert args.num_words == 256
    assert args.width == 144
    assert args.mle_bits == 3
    assert args.seed == 1
    assert args.queries == 1000
    assert args.workload == "uniform"
    assert args.variant == "selective"
    assert args.out == "-"
    assert args.workers == 1
    assert args.tolerance == 0.005


def test_parser_rejects_unknown_variant():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["search", "--variant", "nand"])


def test_parser_requires_verb():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_search_smoke(tmp_path):
    out = tmp_path / "report.json"
    rc = main([
        "search", "--num-words", "64", "--width", "32", "--queries", "400",
        "--seed", "7", "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["report"] == "search"
    assert doc["config"] == {
        "num_words": 64, "word_bits": 32, "mle_bits": 3, "seed": 7,
    }
    assert doc["model"]["c_mle_node"] == 4.0
    assert len(doc["queries"]) == 400
    assert doc["aggregate"]["expected_energized_fraction"] == 0.125
    assert abs(doc["aggregate"]["mean_energized_fraction"] - 0.125) < 0.02
    assert "arbitrary units" in doc["units"]["energy"]


def test_search_planted_every_query_matches(tmp_path):
    out = tmp_path / "report.json"
    rc = main([
        "search", "--num-words", "16", "--width", "16", "--queries", "50",
        "--workload", "planted", "--match-rate", "1.0", "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["aggregate"]["queries_with_match"] == 50
    assert all(entry["matches"] for entry in doc["queries"])


def test_search_k1_exits_2_citing_minimum(tmp_path, capsys):
    rc = main(["search", "--mle-bits", "1", "--out", str(tmp_path / "r.json")])
    assert rc == 2
    assert "2" in capsys.readouterr().err


def test_search_missing_words_file_exits_1(tmp_path):
    rc = main(["search", "--words", str(tmp_path / "nope.txt")])
    assert rc == 1


def test_search_malformed_words_file_exits_1(tmp_path, capsys):
    bad = tmp_path / "words.txt"
    bad.write_text("0000\n11x1\n")
    rc = main([
        "search", "--width", "4", "--mle-bits", "2", "--words", str(bad),
        "--queries", "5",
    ])
    assert rc == 1
    assert "line 2" in capsys.readouterr().err


def test_search_bad_param_exits_2(tmp_path):
    rc = main(["search", "--param", "bogus=1", "--out", str(tmp_path / "r.json")])
    assert rc == 2


def test_search_expect_fraction_gate(tmp_path):
    common = [
        "search", "--num-words", "64", "--width", "32", "--queries", "600",
        "--seed", "3", "--out", str(tmp_path / "r.json"),
    ]
    assert main(common + ["--expect-fraction", "0.125", "--tolerance", "0.02"]) == 0
    assert main(common + ["--expect-fraction", "0.5", "--tolerance", "0.02"]) == 1


def test_search_words_file_and_variant(tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("# store\n10110011\n10111100\n00110011\n")
    out = tmp_path / "r.json"
    rc = main([
        "search", "--width", "8", "--words", str(words), "--queries", "20",
        "--variant", "baseline-nor", "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["num_words"] == 3
    assert doc["variant"] == "baseline-nor"
    assert doc["aggregate"]["mean_energized_fraction"] == 1.0


def test_queries_file(tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("1011\n0011\n")
    queries = tmp_path / "queries.txt"
    queries.write_text("1011\n1111\n0011\n")
    out = tmp_path / "r.json"
    rc = main([
        "search", "--width", "4", "--mle-bits", "2", "--words", str(words),
        "--queries-file", str(queries), "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["workload"]["kind"] == "file"
    assert [e["matches"] for e in doc["queries"]] == [[0], [], [1]]


def test_determinism_across_worker_counts(tmp_path):
    fa, fb = tmp_path / "a.json", tmp_path / "b.json"
    flags = ["search", "--num-words", "32", "--width", "24", "--queries", "300",
             "--seed", "13"]
    assert main(flags + ["--workers", "1", "--out", str(fa)]) == 0
    assert main(flags + ["--workers", "5", "--out", str(fb)]) == 0
    assert fa.read_bytes() == fb.read_bytes()


def test_sweep_smoke_and_argmin(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--num-words", "128", "--width", "48", "--queries", "1500",
        "--seed", "2", "--out", str(out),
    ])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "argmin k = 3" in printed
    assert "model-calibrated" in printed
    lines = out.read_text().splitlines()
    assert lines[0] == "k,energized_fraction,energy_metric,mean_delay"
    assert len(lines) == 6


def test_sweep_k_subrange(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--num-words", "32", "--width", "16", "--queries", "100",
        "--k-min", "2", "--k-max", "3", "--out", str(out),
    ])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 3


def test_sweep_without_upsizing_argmin_six(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--queries", "3000", "--seed", "5", "--param", "upsize_base=1",
        "--out", str(out),
    ])
    assert rc == 0
    assert "argmin k = 6" in capsys.readouterr().out
    metrics = [float(line.split(",")[2]) for line in out.read_text().splitlines()[1:]]
    assert all(b <= a for a, b in zip(metrics, metrics[1:]))


def test_sweep_rejects_bad_k_range(tmp_path):
    assert main(["sweep", "--k-min", "1", "--queries", "10"]) == 2
    assert main(["sweep", "--k-min", "4", "--k-max", "3", "--queries", "10"]) == 2


def test_sweep_echoes_effective_configuration(tmp_path, capsys):
    rc = main([
        "sweep", "--num-words", "16", "--width", "12", "--queries", "50",
        "--seed", "6", "--out", str(tmp_path / "s.csv"),
    ])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "num_words=16" in printed and "seed=6" in printed
    assert "c_mle_node=4" in printed


def test_sweep_with_queries_file(tmp_path):
    queries = tmp_path / "queries.txt"
    queries.write_text("".join(f"{i:012b}\n" for i in range(40)))
    out = tmp_path / "s.csv"
    rc = main([
        "sweep", "--num-words", "16", "--width", "12", "--seed", "6",
        "--queries-file", str(queries), "--k-min", "2", "--k-max", "4",
        "--out", str(out),
    ])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 4


def test_compare_smoke(tmp_path):
    out = tmp_path / "cmp.json"
    rc = main([
        "compare", "--num-words", "64", "--width", "32", "--queries", "500",
        "--seed", "11", "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["match_sets_identical"] is True
    assert abs(doc["ml_precharge_event_ratio"] - 0.125) < 0.02
    assert doc["ml_energy_ratio"] == pytest.approx(doc["ml_precharge_event_ratio"])
    assert doc["baseline_nor"]["mean_energized_fraction"] == 1.0


def test_compare_adversarial_shared_prefix_ratio_one(tmp_path):
    words = tmp_path / "words.txt"
    # every word carries the same 3-bit prefix; queries copy stored words
    words.write_text("".join(f"101{i:05b}\n" for i in range(8)))
    out = tmp_path / "cmp.json"
    rc = main([
        "compare", "--width", "8", "--words", str(words),
        "--workload", "planted", "--match-rate", "1.0", "--queries", "40",
        "--out", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["ml_precharge_event_ratio"] == 1.0


def test_verify_small_scale(capsys):
    rc = main(["verify", "--num-words", "32", "--width", "16", "--trials", "300"])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "exhaustive:" in printed and "randomized: 300" in printed


def test_verify_inject_fault_exits_1(capsys):
    rc = main(["verify", "--num-words", "8", "--width", "8", "--trials", "50",
               "--inject-fault"])
    assert rc == 1
    assert "counterexample" in capsys.readouterr().err
