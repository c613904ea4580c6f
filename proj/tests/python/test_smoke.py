import pytest

import clonelab as cl


def test_tables():
    assert cl.table("AND x0 x1") == "2:8"
    assert cl.table("MAJ x0 x1 x2") == "3:8e"
    assert cl.table("x0", arity=3) == "3:aa"


def test_lattice_operations():
    d = cl.Clone.named("D")
    m = cl.Clone.named("M")
    assert cl.basis_clone("MAJ,NOT") == d
    assert (d & m).name == "DM"
    assert (d | m).name == "⊤"
    assert cl.Clone.named("DM") <= d
    assert not d <= m
    assert len({d, cl.basis_clone("MAJ,NOT")}) == 1
    assert repr(d) == "Clone(D)"


def test_member():
    r = cl.member("NOT AND NOT x0 NOT x1", "AND,NOT")
    assert r["member"] and r["separator"] is None
    r = cl.member("NOT x0", "AND,OR")
    assert not r["member"]
    assert r["separator"] == "LE"
    assert r["matrix"] is not None


def test_synthesis_and_conversion():
    t = cl.synthesize("XOR x0 x1", "NAND")
    assert cl.table(t, arity=2) == cl.table("XOR x0 x1")
    net = cl.convert("OR x0 x1", "NAND")
    assert "out" in net
    with pytest.raises(RuntimeError, match="fails to preserve"):
        cl.convert("NOT x0", "AND,OR")
    with pytest.raises(cl.LogicError):
        cl.synthesize("NOT x0", "AND,OR")


def test_classify_and_fast_paths():
    assert cl.classify("NOTIMPLIES") == "coDP-complete"
    assert cl.classify("XOR,ONE") == "P"
    assert cl.classify("AND,NOT") == "Θᵖ₂-complete"
    clone, form = cl.identify_restricted("OR x0 OR x2 x2", "V")
    assert clone == cl.clone_of(["OR x0 x1"])
    assert form.startswith("or")


def test_thresholds():
    assert cl.threshold_clone(3, 2) == cl.Clone.named("DM")
    assert cl.sigma(3) == pytest.approx(0.76759187924399819, abs=1e-12)
    assert cl.pick_N(3, 11, 12) == 14
    r = cl.random_threshold(12, 11, 3, seed=5)
    assert r["N"] == 14
    assert r["depth"] == cl.choose_depth(3, 14, 12, 3)
    assert r == cl.random_threshold(12, 11, 3, seed=5)


def test_errors():
    with pytest.raises(ValueError):
        cl.table("3:zz")
    with pytest.raises(cl.InputError):
        cl.clone_of(["FROB x0"])
