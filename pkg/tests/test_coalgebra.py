"""Dualization, tensor calculus with Koszul signs, and the co-axioms."""

import random

import pytest

from confcoalg.coalgebra import (
    Coproduct, TensorElement, apply_delta_slot, check_jordan_coalgebra,
    check_lie_coalgebra, compare, double_dual_roundtrip, dualize, tau, zeta,
    zeta_via_tau,
)
from confcoalg.conformal import Generator, LambdaStructure, StructureError
from confcoalg.families import make_vir
from confcoalg.poly import D, LAM, MultiPoly, P_ONE, Scalar, X1, X2, random_poly


def test_dualize_vir(vir):
    c = dualize(vir)
    assert c.generators[0].id == "L*"
    assert c.normalized(0) == {(0, 0): X1 - X2}


def test_dualize_reindexes(cur_sl2):
    c = dualize(cur_sl2)
    h = c.index["h*"]
    e = c.index["e*"]
    f = c.index["f*"]
    assert c.normalized(h) == {(e, f): P_ONE, (f, e): MultiPoly.const(-1)}


def _rand_tensor(rng, cop, arity):
    pars = tuple(g.parity for g in cop.generators)
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        key = tuple(rng.randrange(cop.rank) for _ in range(arity))
        terms[key] = random_poly(rng, nvars=arity + 4)
    return TensorElement(arity, terms, pars)


def test_tau_involution_and_signs(JS1):
    cop = dualize(JS1)
    rng = random.Random(9)
    for _ in range(100):
        t = _rand_tensor(rng, cop, 2)
        assert tau(tau(t, 1), 1) == t
    # odd (x) odd picks up a sign: T* is odd
    tt = TensorElement(2, {(1, 1): P_ONE}, (0, 1))
    assert tau(tt, 1) == TensorElement(2, {(1, 1): MultiPoly.const(-1)}, (0, 1))
    # even (x) even: the slot variable follows its factor
    ss = TensorElement(2, {(0, 0): X1}, (0, 1))
    assert tau(ss, 1) == TensorElement(2, {(0, 0): X2}, (0, 1))


def test_zeta_matches_two_swaps(JCK4):
    cop = dualize(JCK4)
    rng = random.Random(10)
    for _ in range(200):
        t = _rand_tensor(rng, cop, 4)
        assert zeta(t) == zeta_via_tau(t)
    # zeta cubed is the identity on the first three slots
    for _ in range(50):
        t = _rand_tensor(rng, cop, 4)
        assert zeta(zeta(zeta(t))) == t


def test_apply_delta_slot_vir(vir):
    cop = dualize(vir)
    seed = TensorElement.seed(0, cop)
    d1 = apply_delta_slot(seed, cop, 1)
    assert d1 == TensorElement(2, {(0, 0): X1 - X2}, (0,))
    # expanding d-weighted elements: the slot variable splits
    weighted = TensorElement(1, {(0,): X1 * X1}, (0,))
    d2 = apply_delta_slot(weighted, cop, 1)
    assert d2.terms[(0, 0)] == (X1 + X2) * (X1 + X2) * (X1 - X2)


def test_apply_delta_slot_coderivation(W):
    # expanding a d-multiplied seed equals (x_s + x_{s+1}) times the expansion
    cop = dualize(W[1])
    rng = random.Random(13)
    for _ in range(40):
        g = rng.randrange(cop.rank)
        seed = TensorElement(1, {(g,): P_ONE}, tuple(x.parity for x in cop.generators))
        dseed = TensorElement(1, {(g,): X1}, seed.parities)
        lhs = apply_delta_slot(dseed, cop, 1)
        rhs = apply_delta_slot(seed, cop, 1).scale(X1 + X2)
        assert lhs == rhs


def test_arity_overflow():
    cop = dualize(make_vir())
    t = TensorElement(4, {(0, 0, 0, 0): P_ONE}, (0,))
    with pytest.raises(StructureError):
        apply_delta_slot(t, cop, 1)
    with pytest.raises(StructureError):
        tau(t, 4)


def test_lie_coalgebra_vir_and_w2(vir, W):
    assert check_lie_coalgebra(dualize(vir)).ok
    assert check_lie_coalgebra(dualize(W[2])).ok


def test_corrupted_vir_antisymmetry():
    # Q = x1 + x2 on identical even factors is tau-symmetric, so it fails
    gens = [Generator("L*", 0)]
    bad = Coproduct("lie", gens, {0: [(0, 0, X1 + X2)]}, name="bad")
    rep = check_lie_coalgebra(bad)
    assert not rep.ok
    assert rep.violations[0].where == ("L*", "antisymmetry")


def test_jordan_coalgebra(JS1, Jn):
    assert check_jordan_coalgebra(dualize(JS1)).ok
    with pytest.raises(StructureError):
        check_jordan_coalgebra(dualize(make_vir()))
    # J_0 and J_1 dualize to honest Jordan coalgebras
    assert check_jordan_coalgebra(dualize(Jn[0])).ok
    assert check_jordan_coalgebra(dualize(Jn[1])).ok


def test_double_dual_roundtrip_families(vir, W, K, JS1):
    for S in (vir, W[2], K[3], JS1):
        assert double_dual_roundtrip(S).ok


def test_double_dual_roundtrip_random_tables():
    rng = random.Random(21)
    img = -LAM - D
    checked = 0
    for _ in range(10_000):
        p = random_poly(rng, nvars=4)
        assert p.subst_general("d", img).subst_general("d", img) == p
        checked += 1
    assert checked == 10_000


def test_compare_identity_and_perturbation(vir):
    c = dualize(vir)
    assert compare(c, c).ok
    other = Coproduct(
        "lie", c.generators, {0: [(0, 0, X1 - X2 + P_ONE)]}, name="pert"
    )
    rep = compare(c, other)
    assert len(rep.lines) == 1
    assert rep.lines[0].gen == "L*"


def test_compare_rejects_generator_mismatch(vir, JS1):
    with pytest.raises(StructureError):
        compare(dualize(vir), dualize(JS1))
