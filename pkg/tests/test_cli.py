import json
from pathlib import Path

import pytest

from toric_embed import cli
from toric_embed.errors import GradingError
from toric_embed.fixtures import FIXTURE_NAMES, load_fixture
from toric_embed.serialize import (
    ci_from_json,
    dump_json,
    fan_from_json,
    fan_to_json,
    parse_polynomial,
    polynomial_from_json,
    polynomial_to_json,
    polytope_from_json,
    polytope_to_json,
)

GOLDEN = Path(__file__).resolve().parent.parent / "fixtures"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_golden_files_match(name):
    for fname, doc in cli.example_documents(name).items():
        assert (GOLDEN / name / fname).read_text() == dump_json(doc), f"{name}/{fname}"


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_documents_roundtrip(name):
    d = GOLDEN / name
    fan_text = (d / "fan.json").read_text()
    assert dump_json(fan_to_json(fan_from_json(json.loads(fan_text)))) == fan_text
    for poly in ("delta.json", "dual.json"):
        text = (d / poly).read_text()
        assert dump_json(polytope_to_json(polytope_from_json(json.loads(text)))) == text
    for ci in ("ci.json", "family.json"):
        if not (d / ci).exists():
            continue
        doc = json.loads((d / ci).read_text())
        ambient, labels, eqs, params = ci_from_json(doc)
        assert fan_to_json(ambient) == doc["ambient"]
        assert [polynomial_to_json(q) for q in eqs] == doc["equations"]


def test_golden_content_p11222():
    ci = (GOLDEN / "p11222" / "ci.json").read_text()
    doc = json.loads(ci)
    labels = [c["label"] for c in doc["coordinates"]]
    rendered = [polynomial_from_json(e, labels).render() for e in doc["equations"]]
    assert "s2*t1 - s1*t0" in rendered
    family = (GOLDEN / "p11222" / "family.json").read_text()
    assert len(json.loads(family)["parameters"]) == 3
    assert len({p["name"] for p in json.loads(family)["parameters"] if p["name"].startswith("lambda")}) == 3


def test_parse_polynomial():
    fx = load_fixture("p11222")
    f = parse_polynomial("x1^8*x6^4 + x2^8*x6^4 + x3^4 + x4^4 + x5^4", fx.fan)
    assert f == fx.hypersurface
    with pytest.raises(GradingError, match="x1 and x1\\*x6"):
        parse_polynomial("x1 + x1*x6", fx.fan)
    with pytest.raises(GradingError, match="unknown variable"):
        parse_polynomial("x7", fx.fan)
    p2 = load_fixture("p2_cubic").fan
    assert parse_polynomial("x1 + x2", p2).render() == "x1 + x2"


def test_example_command(capsys, tmp_path):
    code, out, _ = run(["example", "p11222", "--emit-all", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads(out)
    assert (doc["h1_poly"], doc["h1_nonp"]) == (83, 3)
    assert doc["parameters"] == ["lambda_1_1", "lambda_2_1", "lambda_3_1"]
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ci.json", "delta.json", "dims.json", "dual.json", "family.json", "fan.json"]
    code, out, _ = run(["example", "remark41"], capsys)
    target = json.loads(out)["target"]
    assert len(target["generators"]) == 9 and target["hull_reflexive"] is False


def test_dims_command(capsys):
    code, out, _ = run(["dims", "--fan", "p3_quartic"], capsys)
    assert code == 0 and (json.loads(out)["h1_poly"], json.loads(out)["h1_nonp"]) == (19, 0)


def test_fan_and_polytope_commands(capsys, tmp_path):
    fan = GOLDEN / "p11222" / "fan.json"
    assert run(["fan", "validate", str(fan)], capsys)[0] == 0
    assert run(["fan", "complete", str(fan)], capsys)[0] == 0
    assert run(["--jobs", "2", "fan", "validate", str(fan)], capsys)[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1], [0, 2]]}))
    assert run(["fan", "validate", str(bad)], capsys)[0] == 1
    dual = GOLDEN / "p11222" / "dual.json"
    code, out, _ = run(["fan", "from-polytope", str(dual)], capsys)
    coarse = tmp_path / "coarse.json"
    coarse.write_text(out)
    code, out, _ = run(["fan", "star-subdivide", "--ray", "0,-1,-1,-1", str(coarse)], capsys)
    assert code == 0 and len(json.loads(out)["max_cones"]) == 8
    code, out, _ = run(["polytope", "points", str(dual)], capsys)
    assert len(json.loads(out)["points"]) == 7
    assert run(["polytope", "reflexive", str(dual)], capsys)[0] == 0
    code, out, _ = run(["polytope", "dual", str(dual)], capsys)
    assert [7, -1, -1, -1] in json.loads(out)["vertices"]
    assert run(["polytope", "faces", str(dual)], capsys)[0] == 0


def test_embed_command(capsys, tmp_path):
    poly = tmp_path / "f.txt"
    poly.write_text("x1^8*x6^4 + x2^8*x6^4 + x3^4 + x4^4 + x5^4\n")
    out = tmp_path / "ci.json"
    fan = str(GOLDEN / "p11222" / "fan.json")
    code, _, _ = run(["embed", "--fan", fan, "--edge", "1,2", "--hypersurface", str(poly), "--deform", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["parameters"]) == 3 and len(doc["equations"]) == 2
    code, _, err = run(["embed", "--fan", fan, "--edge", "3,4", "--out", str(out)], capsys)
    assert code == 1 and "admissible edges" in err and "1,2" in err


def test_verify_commands(capsys):
    code, out, err = run(["verify", "binomial-rank", "--fan", "p11222", "--samples", "10"], capsys)
    assert code == 0 and "seed: 0" in err and json.loads(out)["ok"]
    code, out, _ = run(["verify", "ci-rank", "--fan", "p11226", "--samples", "3", "--seed", "4"], capsys)
    assert code == 0 and json.loads(out)["seed"] == 4
    code, out, _ = run(["verify", "nondegenerate", "--fan", "p11222"], capsys)
    assert code == 0 and json.loads(out)["status"] == "heuristically nondegenerate"


def test_hypotheses_command(capsys):
    code, out, _ = run(["hypotheses", str(GOLDEN / "remark41" / "fan.json")], capsys)
    assert code == 0 and len(json.loads(out)["admissible_edges"]) == 3


def test_usage_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 2,\n  "rays": [1, 2,]}')
    code, _, err = run(["hypotheses", str(bad)], capsys)
    assert code == 2 and "line 2" in err and "column" in err
    assert run(["dims", "--fan", str(tmp_path / "missing.json")], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
