import csv
import io
import json
import os
from pathlib import Path

import pytest

import guardsim

CONFIG_DIR = Path(os.environ.get("GUARDSIM_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def smoke_config(**overrides):
    cfg = json.loads((CONFIG_DIR / "smoke.json").read_text())
    for section, values in overrides.items():
        cfg[section].update(values)
    return json.dumps(cfg)


def test_oracles():
    assert guardsim.erlang_b(2, 1.0) == pytest.approx(0.2)
    r = guardsim.guard_channel_stationary(2, 1, 1.0, 1.0, 1.0)
    assert r.Pb == pytest.approx(0.75)
    assert r.Ph == pytest.approx(0.25)
    assert sum(r.state_probs) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        guardsim.erlang_b(2, -1.0)


def test_policy_state():
    p = guardsim.PolicyParams()
    state = guardsim.PolicyState(p)
    assert state.admit_new(10) == guardsim.Decision.Reject
    assert state.admit_handoff(19) == guardsim.Decision.Admit
    for _ in range(9):
        state.on_handoff_event(guardsim.Decision.Admit)
    report = state.on_handoff_event(guardsim.Decision.Admit)
    assert report.rule == guardsim.AdaptationRule.Decrement
    assert state.guard == 9


def test_run_is_deterministic():
    a = guardsim.run(smoke_config())
    b = guardsim.run(smoke_config())
    assert a["summary"] == b["summary"]
    assert a["timeseries"][-1]["cell"] == "all"
    assert 0.0 <= a["total"]["utilization"] <= 1.0


def test_compare_csv_has_three_policies():
    out = guardsim.compare(smoke_config(run={"replications": 2}))
    rows = list(csv.DictReader(io.StringIO(out["timeseries_csv"])))
    assert {r["policy"] for r in rows} == {"fca", "static", "acas"}
    acas = [r for r in rows if r["policy"] == "acas" and r["cell"] != "all"]
    assert all(0 <= int(r["GCh"]) <= 19 for r in acas)


def test_invalid_config_names_field():
    with pytest.raises(guardsim.ValidationError, match="policy.A_u"):
        guardsim.run(smoke_config(policy={"A_u": 1.5}))
