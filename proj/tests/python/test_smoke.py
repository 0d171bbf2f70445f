import json
import math
import os
import subprocess

import _core


def test_single_delta_count_and_closed_form():
    assert _core.lattice_count([((0, 0), 2.0)], 200) == 1
    lam = math.sqrt(4 + 4) - 2
    # diagonal resolvent at the bound-state energy balances the coupling
    assert abs(2.0 * _core.resolvent_lattice_1d(lam, 0, 0) - 1.0) < 1e-9


def test_bargmann_dominates_count():
    entries = [((-3, 0), 0.8), ((0, 0), 1.5), ((4, 0), 0.4)]
    exact = _core.lattice_count(entries, 300)
    rep = _core.bargmann_1d(entries)
    assert rep["certified"]
    assert rep["value"] >= exact
    ref = _core.refined_bargmann_1d(entries, 1.0)
    assert ref["certified"]
    assert ref["value"] >= exact


def test_kernel_identities():
    assert abs(_core.p0_lattice(1.0, (0, 0), (0, 0), 1) -
               math.exp(-2.0) * 2.2795853023360673) < 1e-12
    assert _core.p1_lattice_1d(2.0, 3, 3) > 0
    assert _core.p_alpha(1.0, 0, 1.0) > 0
    assert abs(_core.regularized_resolvent_1d(7) - 7.0) < 1e-8


def test_witness_routes():
    n = _core.dyadic_witness_count(lambda x: 1.0 / (1.0 + abs(x)), 1, 12)
    assert n >= 4
    r = _core.sparse_delta_witnesses([0.25, 0.0625, 0.015625, 0.00390625],
                                     0.5, 1 << 14)
    assert r["certified_count"] == 4
    assert abs(r["gamma_sum"] - 15.0 / 16.0) < 1e-12


def test_cli_canonical_report():
    bin_path = os.environ["CLR_LAB_BIN"]
    out = subprocess.run(
        [bin_path, "count", "--family", "lattice1d", "--potential",
         "delta:site=0,amp=2", "--box", "100", "--canonical"],
        capture_output=True, text=True, check=True)
    doc = json.loads(out.stdout)
    assert doc["result"]["n0"] == 1
    assert doc["result"]["converged"] is True
    assert "timestamp" not in doc
