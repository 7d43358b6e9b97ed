from __future__ import annotations

from gamma72 import catalog
from gamma72.cli import cli_main


def _report(capsys) -> dict[str, str]:
    out = capsys.readouterr().out
    return dict(line.split(": ", 1) for line in out.splitlines() if ": " in line)


def test_unknown_flag():
    assert cli_main(["info", "x.gram", "--nope"]) == 2
    assert cli_main([]) == 2


def test_missing_file(tmp_path):
    assert cli_main(["info", str(tmp_path / "missing.gram")]) == 2


def test_build_e8_and_info(tmp_path, capsys):
    assert cli_main(["build", "e8", "--out-dir", str(tmp_path)]) == 0
    r = _report(capsys)
    assert r["kissing"] == "240"
    assert (tmp_path / "e8.cert").exists()
    assert cli_main(["info", str(tmp_path / "e8.gram")]) == 0
    r = _report(capsys)
    assert r["even"] == "true" and r["unimodular"] == "true"


def test_short_vectors_and_dump(tmp_path, capsys):
    cli_main(["build", "e8", "--out-dir", str(tmp_path)])
    capsys.readouterr()
    g = str(tmp_path / "e8.gram")
    assert cli_main(["short-vectors", g, "--bound", "2", "--dump", str(tmp_path / "v.txt")]) == 0
    assert _report(capsys)["total"] == "240"
    lines = (tmp_path / "v.txt").read_text().splitlines()
    assert lines[0].startswith("# input_sha256") and len(lines) == 122


def test_budget_then_resume(tmp_path, capsys):
    cli_main(["build", "e8", "--out-dir", str(tmp_path)])
    g = str(tmp_path / "e8.gram")
    ck = str(tmp_path / "ck")
    assert cli_main(["short-vectors", g, "--bound", "6", "--budget", "30", "--checkpoint-dir", ck]) == 1
    capsys.readouterr()
    assert cli_main(["short-vectors", g, "--bound", "6", "--checkpoint-dir", ck, "--resume"]) == 0
    assert _report(capsys)["total"] == "9120"


def test_global_flags_either_side(tmp_path, capsys):
    cli_main(["build", "e8", "--out-dir", str(tmp_path)])
    g = str(tmp_path / "e8.gram")
    assert cli_main(["--seed", "3", "polarize", "--gram", g]) == 0
    assert _report(capsys)["seed"] == "3"
    assert cli_main(["polarize", "--gram", g, "--seed", "4", "--threads", "1"]) == 0
    assert _report(capsys)["seed"] == "4"


def test_design_counts(capsys):
    assert cli_main(["design-counts"]) == 0
    assert _report(capsys)["moment_solution"] == "46488 78848 47216 18944 4536 512 16"


def test_census_reports_are_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert cli_main(["census", "--sample", "4", "--seed", "2", "--out", str(a)]) == 0
    assert cli_main(["census", "--sample", "4", "--seed", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "b6: 0" in a.read_text()


def test_census_negative_control(capsys):
    path = str(catalog.data_path("leech_structure_b6_40320.txt"))
    assert cli_main(["census", "--full", "--structure", path]) == 1
    assert _report(capsys)["b6"] == "40320"


def test_tampered_build(tmp_path, leech_sp):
    from gamma72.hermitian import format_structure
    text = format_structure(leech_sp).replace("STRUCTURE\n24\n", "STRUCTURE\n24\n1 ", 1)
    p = tmp_path / "bad.txt"
    p.write_text(text)
    assert cli_main(["build", "gamma", "--structure", str(p)]) != 0


def test_build_gamma(tmp_path, capsys):
    assert cli_main(["build", "gamma", "--out-dir", str(tmp_path)]) == 0
    r = _report(capsys)
    assert r["gamma_dim"] == "72" and r["gamma_det_tensor"] == "1"
    assert r["gamma_even"] == "true"
    assert (tmp_path / "gamma.gram").read_text().startswith("72\n")
