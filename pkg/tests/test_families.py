"""Family constructors: tabulated examples, ranks, and the documented
discrepancies between the definitional constructions and the printed tables."""

import re

import pytest

from confcoalg.conformal import (
    ConformalElement, StructureError, bracket, check_jacobi, check_skew,
)
from confcoalg.families import (
    CAPS, NotInSpan, canonicalize_CK6, canonicalize_S, check_div_identity,
    ck6_embed, corrupt_entry, div_module_map, div_w, embed_sn, kernel_basis,
    make_CK6, make_current, make_Jn, make_S, make_S_b, make_W, sn_basis,
)
from confcoalg.poly import D, LAM, MultiPoly, P_ONE, Scalar


def E(S, name):
    return ConformalElement.gen(S.index[name])


# -- Vir, currents -----------------------------------------------------------


def test_vir_table(vir):
    assert vir.rank == 1
    assert vir.generators[0].parity == 0
    assert vir.entry(0, 0) == ConformalElement({0: D + 2 * LAM})


def test_current_is_lambda_free(cur_sl2):
    for (i, j), entries in cur_sl2.table.items():
        for _, p in entries:
            assert "lam" not in p.variables() and "d" not in p.variables()
    assert cur_sl2.entry(cur_sl2.index["e"], cur_sl2.index["f"]) == E(cur_sl2, "h")


def test_current_rejects_invalid_constants():
    with pytest.raises(StructureError):
        make_current(
            ["a", "b"], [0, 0],
            {("a", "b"): [("a", Scalar(1))]},  # not antisymmetric
            kind="lie",
        )


def test_jordan_current_idempotent():
    cur = make_current(["a"], [0], {("a", "a"): [("a", Scalar(1))]},
                       kind="jordan")
    assert cur.entry(0, 0) == E(cur, "a")


# -- W_n ---------------------------------------------------------------------


def test_w_ranks(W):
    for n in range(4):
        assert W[n].rank == (n + 1) * 2 ** n


def test_w_bracket_examples(W):
    w2 = W[2]
    one = w2.index["1"]
    assert w2.entry(one, one) == ConformalElement({one: -(D + 2 * LAM)})
    # [d1 lam xi1] = xi_empty + lam xi1 d1 (the lambda-term sign follows the
    # double negative in a(f) - (-1)^{p(a)p(f)} lam f a with both odd)
    d1 = w2.index["d1"]
    xi1 = w2.index["xi1"]
    assert w2.entry(d1, xi1) == ConformalElement(
        {one: P_ONE, w2.index["xi1d1"]: LAM}
    )


def test_w_axioms(W):
    for n in range(3):
        assert check_skew(W[n]).ok
        assert check_jacobi(W[n]).ok


# -- divergence --------------------------------------------------------------


def test_div_examples(W):
    w2 = W[2]
    one = ConformalElement.gen(w2.index["1"])
    assert div_w(w2, one) == ConformalElement({w2.index["1"]: -D})
    assert div_w(w2, one, Scalar(1)) == ConformalElement(
        {w2.index["1"]: MultiPoly.const(1) - D}
    )
    assert div_w(w2, ConformalElement.gen(w2.index["d1"])).is_zero()


def test_div_of_B_elements(W):
    for n in (2, 3):
        w = W[n]
        for b in sn_basis(n):
            assert div_w(w, embed_sn(b, w)).is_zero(), b.name(n)


def test_div_identity_b0_and_deformed():
    assert check_div_identity(2).ok
    assert check_div_identity(2, Scalar(1)).ok
    assert check_div_identity(2, Scalar(0, 1)).ok


# -- S_n ---------------------------------------------------------------------


def test_sn_basis_count():
    assert len(sn_basis(2)) == 2 * 2 ** 2
    assert len(sn_basis(3)) == 3 * 2 ** 3


def test_s2_table_examples(S):
    s2 = S[2]
    # [B_I lam B_J] with overlapping I, J vanishes
    b1, b2 = s2.index["B1"], s2.index["B1"]
    assert s2.entry(b1, b2).is_zero()
    # disjoint: [B lam B1] = lam (2n-|I|-|J|) B_{IJ} + d (n-|I|) B_{IJ}
    b, b1 = s2.index["B"], s2.index["B1"]
    assert s2.entry(b, b1) == ConformalElement(
        {s2.index["B1"]: LAM * 3 + D * 2}
    )
    # [A pair lam A pair] on disjoint supports vanishes
    a12 = s2.index["A_1_2"]
    assert (s2.index["A_1_2"], s2.index["A_1_2"]) in s2.table
    assert s2.entry(a12, a12).is_zero()


def test_s_axioms(S):
    for n in (2, 3):
        assert check_skew(S[n]).ok
        assert check_jacobi(S[n]).ok


def test_s_proposition_diffs_documented(S):
    """The tabulated bracket formulas drop the contributions where a pair
    element's indices meet the partner's support; the diff set is pinned."""
    d2 = S[2].meta["proposition_diffs"]
    assert sorted(d2) == sorted([
        "[A_1_2 lam A1_2] @ A1_2: W-path 2 vs formula 1",
        "[A_1_2 lam A2_1] @ A2_1: W-path -2 vs formula -1",
        "[A1_2 lam A_1_2] @ A1_2: W-path -2 vs formula -1",
        "[A2_1 lam A_1_2] @ A2_1: W-path 2 vs formula 1",
    ])
    d3 = S[3].meta["proposition_diffs"]
    assert len(d3) == 56
    # every diff involves a pair element; none involves a B element
    for d in d3:
        head = re.match(r"\[(\S+) lam (\S+)\]", d)
        assert not any(x.startswith("B") for x in head.groups())
        assert any(x.count("_") == 2 for x in head.groups())


def test_s_strict_mode_raises():
    from confcoalg.families import ConstructionMismatch

    with pytest.raises(ConstructionMismatch):
        make_S(2, strict=True)


def test_canonicalize_s_rejects_outsiders(S, W):
    w2 = W[2]
    # xi_star has no preimage in S_2
    star = ConformalElement.gen(w2.index["xi12"])
    with pytest.raises(NotInSpan):
        canonicalize_S(star, w2)
    # a divergence-full element: xi1 d1 alone
    with pytest.raises(NotInSpan):
        canonicalize_S(ConformalElement.gen(w2.index["xi1d1"]), w2)


def test_canonicalize_s_round_trip(S):
    s2 = S[2]
    W2 = s2.meta["W"]
    for el, emb in zip(s2.meta["basis"], s2.meta["embeds"]):
        coords = canonicalize_S(emb, W2)
        assert coords == {el.name(2): P_ONE}


# -- S_{n,b} and S~_n --------------------------------------------------------


def test_sb_ranks_and_axioms(S2b):
    for key, sb in S2b.items():
        assert sb.rank == 2 * 2 ** 2
        assert check_skew(sb).ok
        assert check_jacobi(sb).ok


def test_sb0_matches_s2_after_base_change(S, S2b):
    """Brackets of the kernel basis of div_0 computed through the S_2 table
    agree with the direct W_2 computation."""
    s2 = S[2]
    sb = S2b["0"]
    W2 = s2.meta["W"]
    assert W2.meta["n"] == sb.meta["W"].meta["n"]
    Wb = sb.meta["W"]
    table_embeds = s2.meta["embeds"]
    for a in range(sb.rank):
        for c in range(sb.rank):
            direct = bracket(Wb, sb.meta["embeds"][a], sb.meta["embeds"][c], "lam")
            ca = canonicalize_S(sb.meta["embeds"][a], Wb)
            cc = canonicalize_S(sb.meta["embeds"][c], Wb)
            via = ConformalElement()
            for na, pa in ca.items():
                for nc, pc in cc.items():
                    ia, ic = s2.index[na], s2.index[nc]
                    pa_l = pa.substitute("d", -LAM)
                    pc_r = pc.subst_general("d", LAM + D)
                    for k, P in s2.table[(ia, ic)]:
                        via = via + table_embeds[k].scale(pa_l * pc_r * P)
            assert (direct - via).is_zero(), (a, c)


def test_stilde_rank_and_axioms(Stilde2):
    assert Stilde2.rank == 8
    assert check_skew(Stilde2).ok
    assert check_jacobi(Stilde2).ok


def test_stilde_needs_even_n():
    from confcoalg.families import make_S_tilde

    with pytest.raises(StructureError):
        make_S_tilde(3)


# -- K_n, K_4', CK_6 ---------------------------------------------------------


def test_k_ranks_and_examples(K):
    for n in range(7):
        assert K[n].rank == 2 ** n
    k2 = K[2]
    one = k2.index["1"]
    assert k2.entry(one, one) == ConformalElement({one: -2 * D - 4 * LAM})
    xi1 = k2.index["xi1"]
    assert k2.entry(xi1, xi1) == ConformalElement({one: MultiPoly.const(-1)})


def test_k_axioms_small(K):
    for n in range(4):
        assert check_skew(K[n]).ok
        assert check_jacobi(K[n]).ok


def test_k4prime_structure(K4p):
    assert K4p.rank == 16
    i = K4p.index["dxistar"]
    assert K4p.entry(i, i).is_zero()
    assert K4p.entry(i, K4p.index["1"]) == ConformalElement({i: -2 * LAM})
    # [d xi_star lam xi_j] = -lam d_j xi_star
    assert K4p.entry(i, K4p.index["xi1"]) == ConformalElement(
        {K4p.index["xi234"]: -LAM}
    )
    assert K4p.entry(i, K4p.index["xi2"]) == ConformalElement(
        {K4p.index["xi134"]: LAM}
    )
    for nm in ("xi12", "xi123"):
        assert K4p.entry(i, K4p.index[nm]).is_zero()


def test_k4prime_axioms(K4p):
    assert check_skew(K4p).ok
    assert check_jacobi(K4p).ok


def test_ck6_rank_weights_and_examples(CK6):
    assert CK6.rank == 32
    L = CK6.index["L"]
    assert CK6.entry(L, L) == ConformalElement({L: 2 * LAM + D})
    # restriction weights 3/2, 1, 1/2 on degrees 1, 2, 3
    from fractions import Fraction

    for nm, w in (("C1", Fraction(3, 2)), ("C12", Fraction(1)),
                  ("C123", Fraction(1, 2))):
        g = CK6.index[nm]
        assert CK6.entry(L, g) == ConformalElement(
            {g: LAM.scalar_mul(w) + D}
        )
    c1 = CK6.index["C1"]
    assert CK6.entry(c1, c1) == ConformalElement({L: MultiPoly.const(2)})
    assert CK6.entry(CK6.index["C123"], CK6.index["C145"]).is_zero()


def test_ck6_printed_diffs_are_the_weight_transposition(CK6):
    diffs = CK6.meta["printed_diffs"]
    assert len(diffs) == 42
    for d in diffs:
        m = re.match(r"\[(\S+) lam (\S+)\]", d)
        a, b = m.groups()
        pair = {a, b}
        assert "L" in pair
        other = (pair - {"L"}).pop() if pair != {"L"} else "L"
        assert other != "L" and len(other) in (2, 3)  # C_i or C_ij only


def test_ck6_axioms(CK6):
    assert check_skew(CK6).ok


def test_canonicalize_ck6(CK6):
    K6 = CK6.meta["K6"]
    lam_idx = K6.meta["lam_idx"]
    # xi_empty - beta d^3 xi_star = -2 L
    x = ConformalElement({
        lam_idx[0]: P_ONE,
        lam_idx[(1 << 6) - 1]: MultiPoly.monomial({"d": 3}, -Scalar.beta()),
    })
    assert canonicalize_CK6(x, K6) == {"L": MultiPoly.const(-2)}
    # C_456 = beta (-1)^alpha({4,5,6},{1,2,3}) C_123 = -beta C_123
    from confcoalg.grassmann import IndexSet, hodge

    t = IndexSet(6, (4, 5, 6))
    h = hodge(t)
    c456 = ConformalElement({
        lam_idx[t.mask]: P_ONE,
        lam_idx[h.idxset.mask]: MultiPoly.const(Scalar.beta() * Scalar(h.sign)),
    })
    assert canonicalize_CK6(c456, K6) == {
        "C123": MultiPoly.const(-Scalar.beta())
    }
    assert canonicalize_CK6(ConformalElement(), K6) == {}
    with pytest.raises(NotInSpan):
        canonicalize_CK6(ConformalElement.gen(lam_idx[0]), K6)


# -- Jordan families ---------------------------------------------------------


def test_jn_ranks_and_products(Jn):
    for n in (0, 1, 2, 3):
        assert Jn[n].rank == 2 * 2 ** n
    j2 = Jn[2]
    th = j2.index["th"]
    one = j2.index["1"]
    # theta la theta = -4 lam - 2 d on the unit
    assert j2.entry(th, th) == ConformalElement({one: -4 * LAM - 2 * D})
    # (xi1 th) la (xi2 th) picks up the swapped-derivative contact term
    a = j2.index["xi1th"]
    b = j2.index["xi2th"]
    assert j2.entry(a, b) == ConformalElement({
        j2.index["xi12"]: 2 * LAM + D,
        one: P_ONE,
    })


def test_js1_table(JS1):
    s, t = JS1.index["S"], JS1.index["T"]
    assert JS1.entry(s, s) == ConformalElement({s: MultiPoly.const(2)})
    assert JS1.entry(t, t) == ConformalElement({s: 2 * LAM + D})
    assert JS1.entry(t, s) == ConformalElement({t: P_ONE})
    assert JS1.entry(s, t) == ConformalElement({t: P_ONE})


def test_jck4_products(JCK4):
    w3 = JCK4.index["w3"]
    assert JCK4.entry(w3, w3) == ConformalElement(
        {JCK4.index["one"]: MultiPoly.const(-1)}
    )
    w1, x2 = JCK4.index["w1"], JCK4.index["x2"]
    assert JCK4.entry(w1, x2) == ConformalElement(
        {JCK4.index["x3"]: MultiPoly.const(-1)}
    )
    w1x = JCK4.entry(w1, JCK4.index["x"])
    assert w1x == ConformalElement({JCK4.index["x1"]: LAM})
    x, x1 = JCK4.index["x"], JCK4.index["x1"]
    assert JCK4.entry(x, x) == ConformalElement(
        {JCK4.index["one"]: 2 * LAM + D}
    )
    assert JCK4.entry(x1, x) == ConformalElement({w1: P_ONE})
    assert JCK4.entry(x, x1) == ConformalElement({w1: MultiPoly.const(-1)})


def test_caps_table():
    assert CAPS["W"] == 4 and CAPS["K"] == 6 and CAPS["Jn"] == 3
