"""Group enumeration and census sweeps, checked against frozen values."""

import numpy as np
import pytest

from polaris import backend as backend_mod
from polaris import sweep
from polaris.constructors import homology_C, root_elation
from polaris.gf import GF
from polaris.spaces import symplectic_space


def test_chevalley_generators_count():
    sp = symplectic_space(2, GF(3))
    gens = sweep.chevalley_generators(sp)
    assert len(gens) == 4  # two simple roots, both signs
    for g in gens:
        assert g.dtype == np.uint8
        assert not np.array_equal(g, np.eye(4, dtype=np.uint8))


def test_enumerate_small_group():
    sp = symplectic_space(2, GF(2))
    elems = sweep.enumerate_group(sp)
    assert len(elems) == 720  # |Sp(4,2)|
    # identity first, and every element distinct
    assert np.array_equal(elems[0], np.eye(4, dtype=np.uint8))
    keys = {tuple(m.reshape(-1)) for m in elems}
    assert len(keys) == 720


def test_enumerate_budget():
    sp = symplectic_space(2, GF(3))
    try:
        sweep.enumerate_group(sp, budget=1000)
        assert False, "budget should have tripped"
    except ValueError as e:
        assert "budget" in str(e)


def test_enumeration_deterministic():
    sp = symplectic_space(2, GF(2))
    a = sweep.enumerate_group(sp)
    b = sweep.enumerate_group(sp)
    assert np.array_equal(a, b)


def test_vec_lut_roundtrip():
    sp = symplectic_space(2, GF(3))
    t = sweep.space_tables(sp)
    keys = t["P"].astype(np.int64) @ t["powq"]
    assert np.array_equal(t["vec_lut"][keys], np.arange(sp.num_points))
    # scalar multiples hit the same point index
    scaled = sp.F.mul_table[2, t["P"]].astype(np.int64) @ t["powq"]
    assert np.array_equal(t["vec_lut"][scaled], np.arange(sp.num_points))
    # the zero vector is not a point
    assert t["vec_lut"][0] == -1


def test_p_power_order_mask():
    sp = symplectic_space(2, GF(3))
    eye = np.eye(4, dtype=np.uint8)
    elation = root_elation(sp, (2, 0), 1)
    hom = homology_C(2, 1, GF(3))
    mask = sweep.p_power_order_mask(sp, np.stack([eye, elation, hom]))
    assert mask.tolist() == [True, True, False]


def test_pattern_table_rank2():
    sp = symplectic_space(2, GF(3))
    pat = sweep.pattern_table(sp)
    assert pat[0b00]["symbol"] == "C2;0^1"
    assert pat[0b01]["symbol"] == "C2;1^1" and pat[0b01]["polar_closed"]
    assert pat[0b10]["symbol"] == "C2;1^2" and not pat[0b10]["polar_closed"]
    assert pat[0b11]["symbol"] == "C2;2^1" and pat[0b11]["polar_closed"]
    assert pat[0b01]["alias"] is None  # odd q: no coincident sibling building


def test_sweep_sp4_q2_census():
    rep = sweep.run_sweep(symplectic_space(2, GF(2)), exhaustive=True)
    assert rep.group_order == 720
    assert rep.census == {"C2;0^1": 1, "C2;1^1": 15, "C2;1^2": 15, "C2;2^1": 689}
    assert rep.class_census == {"identity": 1, "I": 15, "II": 15, "not domestic": 689}
    assert rep.uncapped == {}
    assert rep.alias_symbols == {
        "C2;1^1": "B2;1^1",
        "C2;1^2": "B2;1^2",
        "C2;2^1": "B2;2^1",
    }
    assert rep.all_checks_pass, rep.checks


def test_sweep_sp4_q3_census():
    # the full 51,840-element group
    rep = sweep.run_sweep(symplectic_space(2, GF(3)), exhaustive=True)
    assert rep.group_order == 51840
    assert rep.census == {"C2;0^1": 2, "C2;1^1": 160, "C2;1^2": 90, "C2;2^1": 51588}
    assert sum(rep.census.values()) == 51840
    # the two trivially-acting elements are the scalars +-1
    assert rep.class_census["identity"] == 2
    assert rep.class_census["II"] == 90  # the (I2,-I2) homology conjugates
    assert rep.uncapped == {}
    assert rep.all_checks_pass, rep.checks
    assert rep.checks["homology"]  # every C2;1^2 with a fixed point is one
    d = rep.to_dict()
    assert d["census"] == rep.census and d["mode"] == "exhaustive"


def test_sweep_report_witnesses():
    rep = sweep.run_sweep(symplectic_space(2, GF(3)), exhaustive=True)
    # witnesses index into the deterministic enumeration order
    assert rep.witnesses["C2;0^1"] == 0  # the identity comes first
    elems = sweep.enumerate_group(symplectic_space(2, GF(3)))
    i = rep.witnesses["C2;1^2"]
    enc, fixed = sweep.evaluate_elements(
        symplectic_space(2, GF(3)), elems[i : i + 1]
    )
    assert enc[0] == 0b10 and fixed[0] > 0


def test_random_mode_deterministic():
    sp = symplectic_space(2, GF(3))
    a = sweep.sample_elements(sp, 64, seed=5)
    b = sweep.sample_elements(sp, 64, seed=5)
    c = sweep.sample_elements(sp, 64, seed=6)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    rep = sweep.run_sweep(sp, exhaustive=False, sample=200, seed=11)
    assert rep.mode == "random" and rep.evaluated == 200 and rep.seed == 11
    assert rep.checks["nonempty"] and rep.checks["capped"]


def test_threads_match_single():
    sp = symplectic_space(2, GF(3))
    elems = sweep.enumerate_group(sp)
    e1, f1 = sweep.evaluate_elements(sp, elems, threads=1)
    e2, f2 = sweep.evaluate_elements(sp, elems[: 5 * 4096], threads=3)
    assert np.array_equal(e1[: 5 * 4096], e2)
    assert np.array_equal(f1[: 5 * 4096], f2)


def test_backend_parity():
    if "compiled" not in backend_mod.available_backends():
        pytest.skip("compiled kernel not built")
    sp = symplectic_space(2, GF(3))
    elems = sweep.sample_elements(sp, 256, seed=17)
    ep, fp = sweep.evaluate_elements(sp, elems, backend="python")
    ec, fc = sweep.evaluate_elements(sp, elems, backend="compiled")
    assert np.array_equal(ep, ec)
    assert np.array_equal(fp, fc)


def test_backend_parity_rank3():
    if "compiled" not in backend_mod.available_backends():
        pytest.skip("compiled kernel not built")
    sp = symplectic_space(3, GF(2))
    elems = sweep.sample_elements(sp, 64, seed=23)
    ep, fp = sweep.evaluate_elements(sp, elems, backend="python")
    ec, fc = sweep.evaluate_elements(sp, elems, backend="compiled")
    assert np.array_equal(ep, ec)
    assert np.array_equal(fp, fc)
