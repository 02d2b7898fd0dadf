import json
import os
import pathlib

import pytest

import specfrob

DATA = pathlib.Path(os.environ.get("SPECFROB_DATA", pathlib.Path(__file__).resolve().parents[2] / "data"))


def test_cubic_prepotential_passes_the_axioms():
    rep = specfrob.frobenius_check({"n": 1, "order": 6, "psi": [{"exp": [3], "num": 1, "den": 6}]})
    assert rep["pass"]
    assert len(rep["checks"]) == 8


def test_broken_input_raises():
    with pytest.raises(specfrob.InputError):
        specfrob.frobenius_check({"n": 1, "order": 6, "psi": [{"exp": [0], "num": 1}]})


def test_restriction_returns_the_prepotential():
    cubic = [{"exp": [3], "num": 1, "den": 6}]
    out = specfrob.sg_restrict({"n": 1, "order": 5, "psi": cubic})
    assert out["pass"]
    assert out["psi"] == cubic


def test_combinatorics_a1():
    c = specfrob.combinatorics("A1", 2)
    assert (c["dim_B"], c["genus_cameral"], c["deg_D_int"], c["deg_D_br"]) == (3, 5, 4, 4)


def _cx(v):
    return complex(*v) if isinstance(v, list) else complex(v)


def test_shipped_family_file_matches_the_builtin():
    on_disk = json.loads((DATA / "family.json").read_text())
    builtin = specfrob.shipped_family()
    for key in ("q0", "u_star"):
        assert [_cx(x) for x in on_disk[key]] == [_cx(x) for x in builtin[key]]
    assert [[_cx(x) for x in p] for p in on_disk["phis"]] == [[_cx(x) for x in p] for p in builtin["phis"]]


def test_periods_and_pipeline():
    fam = json.loads((DATA / "family.json").read_text())
    pd = specfrob.periods(fam)
    assert len(pd["z"]) == 2 and pd["quadrature_error"] < 1e-9
    res = specfrob.pipeline(fam)
    assert res["pass"]
    assert res["frobenius_residual"] <= 1e-6
    assert res["grid_csv"].count("\n") == 26


def test_numeric_suite_is_deterministic():
    a = specfrob.suite("numeric", 1)
    b = specfrob.suite("numeric", 1)
    assert a["pass"]
    assert a["checks"] == b["checks"]
