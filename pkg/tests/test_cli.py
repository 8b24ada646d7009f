import json
import os

from bflab.cli import main

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "bflab", "data")


def run(args):
    return main(args)


def test_analyze_exit_zero_and_schema(tmp_path):
    out = tmp_path / "rep.json"
    code = run(["analyze", "--group", os.path.join(DATA, "c2.json"),
                "--prime", "2", "--out", str(out),
                "--findings-dir", str(tmp_path / "f")])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == "bflab-report/1"
    assert rep["ok"] and len(rep["blocks"]) == 1
    blk = rep["blocks"][0]
    for key in ("block_index", "block_dim", "defect_group",
                "source_idempotent", "source_dim", "source_shape",
                "source_fusion_identity"):
        assert key in blk


def test_check_s3_both_primes(tmp_path):
    for prime, nblocks in ((3, 1), (2, 2)):
        out = tmp_path / f"s3p{prime}.json"
        code = run(["check", "--group", os.path.join(DATA, "s3.json"),
                    "--prime", str(prime), "--out", str(out),
                    "--findings-dir", str(tmp_path / "f")])
        assert code == 0
        rep = json.loads(out.read_text())
        assert len(rep["blocks"]) == nblocks
        for blk in rep["blocks"]:
            assert blk["equivalence"]["conditions_agree"]
            assert blk["characteristic"]["all"]


def test_input_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = run(["analyze", "--group", str(bad), "--prime", "2",
                "--findings-dir", str(tmp_path / "f")])
    assert code == 2
    code = run(["analyze", "--group", str(tmp_path / "missing.json"),
                "--prime", "2", "--findings-dir", str(tmp_path / "f")])
    assert code == 2


def test_order_cap_exit_code(tmp_path):
    doc = {"label": "C6", "degree": 6, "generators": [[2, 3, 4, 5, 6, 1]]}
    gpath = tmp_path / "c6.json"
    gpath.write_text(json.dumps(doc))
    code = run(["analyze", "--group", str(gpath), "--prime", "2",
                "--order-cap", "3", "--findings-dir", str(tmp_path / "f")])
    assert code == 3


def test_reports_byte_identical_same_seed(tmp_path):
    outs = []
    for t in range(2):
        out = tmp_path / f"rep{t}.json"
        code = run(["check", "--group", os.path.join(DATA, "s3.json"),
                    "--prime", "3", "--out", str(out), "--seed", "12345",
                    "--findings-dir", str(tmp_path / "f")])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_verdicts_stable_across_seeds(tmp_path):
    verdicts = []
    for seed in (1, 99991):
        out = tmp_path / f"rep{seed}.json"
        code = run(["check", "--group", os.path.join(DATA, "a4.json"),
                    "--prime", "2", "--out", str(out), "--seed", str(seed),
                    "--findings-dir", str(tmp_path / "f")])
        assert code == 0
        rep = json.loads(out.read_text())
        verdicts.append([
            (blk["defect_group"]["order"],
             blk["characteristic"]["all"],
             blk["equivalence"]["conditions_agree"],
             blk["equivalence"]["unital_basis"],
             blk["equivalence"]["all_twisted_units"],
             blk["equivalence"]["intrinsic_balance"],
             blk["source_shape"])
            for blk in rep["blocks"]])
    assert verdicts[0] == verdicts[1]


def test_catalog_on_small_dir(tmp_path):
    gdir = tmp_path / "groups"
    gdir.mkdir()
    for name in ("c2.json", "s3.json"):
        (gdir / name).write_text(
            open(os.path.join(DATA, name)).read())
    (gdir / "broken.json").write_text("{oops")
    out = tmp_path / "catalog.json"
    code = run(["catalog", "--dir", str(gdir), "--out", str(out),
                "--cache-dir", str(tmp_path / "cache"),
                "--findings-dir", str(tmp_path / "f")])
    assert code == 2          # the corrupt file marks input-error
    table = json.loads(out.read_text())
    statuses = {r["file"]: r["status"] for r in table["rows"]}
    assert statuses["broken.json"] == "input-error"
    ok_rows = [r for r in table["rows"] if r["file"] != "broken.json"]
    assert all(r["status"].startswith("ok") for r in ok_rows)
    # c2 at p=2, s3 at p=2 and p=3
    assert len(ok_rows) == 3
    # cache hits do not change verdicts
    code2 = run(["catalog", "--dir", str(gdir), "--out",
                 str(tmp_path / "catalog2.json"),
                 "--cache-dir", str(tmp_path / "cache"),
                 "--findings-dir", str(tmp_path / "f")])
    table2 = json.loads((tmp_path / "catalog2.json").read_text())
    for r1, r2 in zip(table["rows"], table2["rows"]):
        if r1["file"] == "broken.json":
            continue
        assert r2["status"].endswith("(cached)") or r2["status"] == r1["status"]
        assert r1.get("blocks") == r2.get("blocks")
        assert r1.get("defects") == r2.get("defects")


def test_catalog_empty_dir(tmp_path):
    gdir = tmp_path / "empty"
    gdir.mkdir()
    out = tmp_path / "catalog.json"
    code = run(["catalog", "--dir", str(gdir), "--out", str(out),
                "--cache-dir", str(tmp_path / "cache"),
                "--findings-dir", str(tmp_path / "f")])
    assert code == 0
    assert json.loads(out.read_text())["rows"] == []


def test_finding_exit_code_and_artifact(tmp_path, monkeypatch):
    # force a disagreement to exercise the finding path end to end
    import bflab.cli as cli
    from bflab.conjecture import Finding

    def explode(data, rng, thorough=False, exhaustive=False):
        raise Finding("equivalence_conditions_disagree", {"forced": True})

    monkeypatch.setattr(cli, "equivalence_report", explode)
    out = tmp_path / "rep.json"
    fdir = tmp_path / "findings"
    code = run(["check", "--group", os.path.join(DATA, "c2.json"),
                "--prime", "2", "--out", str(out),
                "--findings-dir", str(fdir)])
    assert code == 4
    files = list(fdir.iterdir())
    assert files, "finding artifact not written"
    doc = json.loads(files[0].read_text())
    assert doc["condition"] == "equivalence_conditions_disagree"
    assert doc["witnesses"] == {"forced": True}
    assert set(doc["choices"]) >= {"defect_group", "source_idempotent"}
    rep = json.loads(out.read_text())
    assert not rep["ok"] and rep["findings"]


def test_field_extension_restart(tmp_path, monkeypatch):
    # force the first attempt onto a non-splitting field: kC3 blocks over
    # GF(2) need GF(4), so the analysis must restart with doubled degree
    import bflab.cli as cli
    from bflab.gf import field

    calls = []
    real_build = cli.build_group_algebra

    def skewed(G, prime):
        calls.append(prime)
        from bflab.algebra import group_algebra
        return group_algebra(G, field(prime, 1))   # GF(2): too small

    monkeypatch.setattr(cli, "build_group_algebra", skewed)
    out = tmp_path / "rep.json"
    code = run(["analyze", "--group", os.path.join(DATA, "c3.json"),
                "--prime", "2", "--out", str(out),
                "--findings-dir", str(tmp_path / "f")])
    assert code == 0
    rep = json.loads(out.read_text())
    # over the splitting field GF(4), kC3 has three defect-zero blocks
    assert len(rep["blocks"]) == 3
    assert all(b["defect_group"]["order"] == 1 for b in rep["blocks"])
