from __future__ import annotations

import json
import random

import numpy as np
import pytest

from gamma72 import catalog
from gamma72.census import (DESIGN_TABLE, FRAME, N_CLASSES, CensusData, CheckpointCorrupt, _gram, _norm8_of,
                            check_24A1, cross_check, design_counts, design_moments, generic_pair_counts,
                            norm6_census, norm8_assembly, w2_set, w3_set)
from gamma72.polarization import InvariantFailure, polarization_from_structure


def test_assembly_closed_form():
    rep = norm8_assembly(0)
    assert rep.type_counts == {(8, 0, 0): 589680, (4, 4, 0): 28304640, (3, 3, 2): 4830658560,
                               (4, 2, 2): 1358622720}
    assert rep.kissing == 6218175600


def test_assembly_b6_shifts_422():
    assert norm8_assembly(0).kissing - norm8_assembly(40320).kissing == 72 * 40320
    with pytest.raises(ValueError):
        norm8_assembly(-1)


def test_design_moments():
    m = design_moments()
    assert m[0] == 196560
    # second moment: |X| * |x|^2 |w|^2 / n
    assert m[1] == 196560 * 64 / 24


def test_design_solver():
    assert design_counts() == DESIGN_TABLE
    assert sum(DESIGN_TABLE) == 196560


def test_design_direct(leech_pol, table):
    X = _norm8_of(leech_pol, "M")
    for i in random.Random(3).sample(range(N_CLASSES), 3):
        assert design_counts(True, leech_pol, table.representatives[i], X) == DESIGN_TABLE


def test_class_table(table, leech_pol):
    assert len(table) == N_CLASSES
    assert table.frames.shape[1:] == (FRAME, 24)
    G = _gram(leech_pol)
    f = table.frames[17]
    P = f @ G @ f.T
    assert set(np.unique(P)) <= {-8, 0, 8}


def test_w_sets(leech_pol, table):
    for i in (0, 1000, 4094):
        w = table.representatives[i]
        W2 = w2_set(leech_pol, w)
        check_24A1(leech_pol, w, W2)
        assert len(w3_set(leech_pol, w)) == 4096


def test_24A1_rejects_wrong_size(leech_pol, table):
    w = table.representatives[0]
    W2 = w2_set(leech_pol, w)
    with pytest.raises(InvariantFailure):
        check_24A1(leech_pol, w, W2[:47])


def test_splitting(census_data):
    keys = census_data.split.key(census_data.codes)
    assert len(np.unique(keys)) == N_CLASSES
    assert len(census_data.coset_minimal(5)) == FRAME


def test_full_fast_census(leech_pol, census_data):
    rep = norm6_census(leech_pol, data=census_data)
    assert rep.complete and rep.b6 == 0
    assert rep.enumerated_422 == rep.type_counts[(4, 2, 2)] == 1358622720


def test_sampled_census(leech_pol, census_data):
    rep = norm6_census(leech_pol, 32, seed=1, data=census_data)
    assert rep.classes_done == 32 and not rep.complete and rep.b6 == 0
    assert rep.enumerated_422 == 3 * 32 * 48 ** 3


def test_fast_matches_generic(census_data):
    assert cross_check(census_data, 100, seed=2) == 100


def test_generic_class(leech_pol, census_data):
    rep = norm6_census(leech_pol, 1, seed=4, method="generic", data=census_data)
    assert rep.b6 == 0 and rep.enumerated_422 == 3 * 48 ** 3


def test_checkpoint_resume(leech_pol, census_data, tmp_path):
    r1 = norm6_census(leech_pol, 5, seed=0, checkpoint=tmp_path, data=census_data, max_classes=3)
    assert r1.classes_done == 3 and len(list(tmp_path.glob("class_*.json"))) == 3
    r2 = norm6_census(leech_pol, 5, seed=0, checkpoint=tmp_path, data=census_data)
    assert r2.classes_done == 5
    f = sorted(tmp_path.glob("class_*.json"))[0]
    f.write_text(json.dumps({"key": -1, "bad": 0, "n422": 0}))
    with pytest.raises(CheckpointCorrupt):
        norm6_census(leech_pol, 5, seed=0, checkpoint=tmp_path, data=census_data)


@pytest.fixture(scope="module")
def control():
    sp = catalog.load_leech_structure(catalog.data_path("leech_structure_b6_40320.txt"))
    pol = polarization_from_structure(sp.lattice(), sp)
    return pol, CensusData(pol)


def test_negative_control(control):
    pol, data = control
    rep = norm6_census(pol, data=data)
    assert rep.b6 == 40320
    assert rep.enumerated_422 == rep.type_counts[(4, 2, 2)]


def test_negative_control_generic(control):
    pol, data = control
    key = next(k for k in data.class_keys() if data.bad_pairs(k))
    pairs = [(i, j) for i in range(FRAME) for j in range(FRAME)]
    bad, n422 = generic_pair_counts(data, key, pairs)
    assert bad == data.bad_pairs(key)
    assert n422 == 48 * (FRAME * FRAME - bad)
