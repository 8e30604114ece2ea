import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moprh import config as cfgmod
from moprh.config import ConfigError

GOLDEN = Path(__file__).parent / "data" / "preset_names.txt"


def test_six_listed_presets_match_golden():
    names = cfgmod.preset_names()
    assert len(names) == 6
    assert list(names) == GOLDEN.read_text().split()


def test_extra_presets_and_alias():
    assert "dpi-displayed-variant" in cfgmod.preset_names(include_extra=True)
    assert cfgmod.preset("dpi-paper-variant") == cfgmod.preset("dpi-displayed-variant")
    with pytest.raises(ConfigError):
        cfgmod.preset("no-such-preset")


@pytest.mark.parametrize("name", cfgmod.preset_names(include_extra=True))
def test_preset_round_trip(name):
    p = cfgmod.preset(name)
    assert cfgmod.loads(cfgmod.dumps(p)) == p
    assert p.description


def _base():
    return json.loads(cfgmod.dumps(cfgmod.preset("scalar-hermite")))


@pytest.mark.parametrize("patch", [
    {"unknown_key": 1},
    {"family": "laguerre"},
    {"n_max": -1},
    {"precision": "quad"},
    {"suites": ["recurrence", "bogus"]},
    {"contour": {"kind": "circle"}},
    {"hL": [[[0]], [[-1, 0]]]},
])
def test_invalid_configs_rejected(patch):
    d = _base()
    d.update(patch)
    with pytest.raises(ConfigError):
        cfgmod.from_dict(d)


def test_family_shape_checks():
    d = _base()
    d["family"] = "dpi"
    with pytest.raises(ConfigError):
        cfgmod.from_dict(d)
    with pytest.raises(ConfigError):
        cfgmod.loads("{not json")


def test_complex_entries():
    d = _base()
    d["hL"] = [[[[0.5, -1.0]]], [[-1]]]
    cfg = cfgmod.from_dict(d)
    assert cfg.hL[0][0, 0] == 0.5 - 1j
    assert json.loads(cfgmod.dumps(cfg))["hL"][0] == [[[0.5, -1.0]]]


@given(st.integers(0, 40), st.sampled_from(["double", "extended"]), st.integers(0, 10 ** 6))
def test_round_trip_property(n_max, precision, seed):
    p = cfgmod.preset("matrix-hermite-2x2").with_overrides(n_max=n_max, precision=precision, seed=seed)
    q = cfgmod.loads(cfgmod.dumps(p))
    assert q == p and q.N == 2
    np.testing.assert_array_equal(q.alphaL, p.alphaL)
