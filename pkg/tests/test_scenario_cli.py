import json
from fractions import Fraction as F

import pytest

from endoapprox.cli import main
from endoapprox.pipeline import run_pipeline, run_property_suites
from endoapprox.scenario import (
    ScenarioError,
    load_scenario,
    morphism_from_json,
    morphism_to_json,
    point_from_json,
    point_to_json,
    rat_from_json,
    rat_to_json,
    scenario_from_json,
)


def test_rational_codec():
    assert rat_to_json(F(-3, 7)) == {"num": "-3", "den": "7"}
    assert rat_from_json({"num": "-3", "den": "7"}) == F(-3, 7)
    assert rat_from_json(5) == F(5)
    with pytest.raises(ScenarioError):
        rat_from_json(0.5)


def test_scenario_loads_and_round_trips(scenario_paths):
    for path in scenario_paths:
        scenario = load_scenario(path)
        assert scenario.k0_sq >= scenario.eps_sq
        for name, w in scenario.witnesses():
            w.verify()
        for name, phi in scenario.morphisms.items():
            again = morphism_from_json(scenario.product, morphism_to_json(phi))
            assert again == phi
        for name, pt in scenario.points.items():
            again = point_from_json(scenario.space, point_to_json(pt))
            assert again == pt


def test_schema_rejected():
    with pytest.raises(ScenarioError):
        scenario_from_json({"schema": "something/else"})


def test_pipeline_ok_on_pack(scenario_paths):
    for path in scenario_paths:
        scenario = load_scenario(path)
        report = run_pipeline(scenario)
        assert report["ok"], f"{path.name}: {report['witnesses']}"
        assert report["family"]["distinct"] >= 1


def test_property_suites_ok_quick(scenario_paths):
    scenario = load_scenario(scenario_paths[0])
    report = run_property_suites(scenario, trials=12)
    assert report["ok"], report["suites"]


def test_witness_serialization_round_trip(scenario_paths):
    from endoapprox.approx import derive_ledger
    from endoapprox.reduction import gamma_embed
    from endoapprox.scenario import witness_from_json, witness_to_json

    scenario = load_scenario(scenario_paths[0])
    ledger = derive_ledger(scenario.product)
    name, w = scenario.witnesses()[0]
    pair = gamma_embed(w, scenario.gamma, scenario.k0_sq, scenario.ambient, ledger)
    rebuilt = witness_from_json(
        scenario.product, scenario.space, witness_to_json(pair)
    )
    rebuilt.verify()
    assert rebuilt.morphism == pair.morphism
    assert rebuilt.x == pair.x and rebuilt.p == pair.p and rebuilt.xi == pair.xi
    assert rebuilt.weighted == pair.weighted
    assert rebuilt.special == pair.special


def test_pipeline_empty_witness_list(scenario_paths):
    scenario = load_scenario(scenario_paths[0])
    scenario.witness_specs = ()
    report = run_pipeline(scenario)
    assert report["ok"] and report["witnesses"] == []
    # the bounded-family modulus is still computed per admissible target rank
    assert report["moduli"]
    for row in report["moduli"]:
        assert row["M"] == row["Q"] ** row["m"]


def test_cli_pipeline_deterministic(tmp_path, scenario_paths):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    path = str(scenario_paths[0])
    assert main(["pipeline", "--scenario", path, "--out", str(out1)]) == 0
    assert main(["pipeline", "--scenario", path, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_commands_run(tmp_path, scenario_paths):
    path = str(scenario_paths[0])
    for command in ["approx", "reduce", "thresholds"]:
        out = tmp_path / f"{command}.json"
        assert main([command, "--scenario", path, "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["ok"] is True


def test_cli_bad_witness_exits_nonzero(tmp_path, scenario_paths):
    data = json.loads(scenario_paths[0].read_text())
    # corrupt the first witness: move its base point off the kernel
    bad_point = data["witnesses"][0]["x"]
    slot = data["points"][bad_point]["slots"][0][0]
    assert slot["free"], "expected a free part to corrupt"
    for coord in slot["free"][0]:
        coord["num"] = "999"
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(data))
    out = tmp_path / "out.json"
    code = main(["pipeline", "--scenario", str(bad_path), "--out", str(out)])
    assert code == 1
    report = json.loads(out.read_text())
    assert not report["ok"]
    assert any("diagnostic" in row for row in report["witnesses"])
