"""Coded modules: mixed-radix base groups, power maps, module extensions."""

import numpy as np
import pytest

from codeloops import (build, build_module_extension, cvs_new, emit_module,
                       eval_sigma2, module_isotopy_check, module_new,
                       octonion_cvs, parse_module, sigma_q,
                       verify_module_extension)
from codeloops.modules import eval_alpha_module, eval_chi_module
from codeloops.modular import Residue


# -- constructor validation -------------------------------------------------

def test_module_new_rejects_bad_shapes():
    with pytest.raises(ValueError, match="prime"):
        module_new(4, (4,), 2, (0,), {}, {})
    with pytest.raises(ValueError, match="power of 2"):
        module_new(2, (6,), 2, (0,), {}, {})
    with pytest.raises(ValueError, match="Z order"):
        module_new(2, (4,), 6, (0,), {}, {})
    with pytest.raises(ValueError, match="one z value per basis slot"):
        module_new(2, (4, 2), 2, (0,), {}, {})


def test_module_new_clause_1_chi_diagonal():
    with pytest.raises(ValueError, match=r"condition \(1\)"):
        module_new(2, (2, 2), 2, (0, 0), {(1, 1): 1}, {})


def test_module_new_clause_2_ordered_keys():
    with pytest.raises(ValueError, match=r"condition \(2\)"):
        module_new(2, (2, 2), 2, (0, 0), {(1, 0): 1}, {})


def test_module_new_clause_3_chi_order():
    # chi(1,2) = 1 has additive order 4 in Z/4, but gcd(q_1, q_2) = 2
    with pytest.raises(ValueError, match=r"condition \(3\)"):
        module_new(2, (4, 2), 4, (0, 0), {(0, 1): 1}, {})
    # same chi value is fine once both orders are 4
    module_new(2, (4, 4), 4, (0, 0), {(0, 1): 1}, {})


def test_module_new_alpha_exponent_conditions():
    with pytest.raises(ValueError, match=r"2\*alpha = 0"):
        module_new(2, (2, 2, 2), 4, (0, 0, 0), {}, {(0, 1, 2): 1})
    with pytest.raises(ValueError, match=r"6\*alpha = 0"):
        module_new(3, (9, 9, 9), 9, (0, 0, 0), {}, {(0, 1, 2): 1})
    # 6*3 = 18 = 0 mod 9, so alpha = 3 is admissible over Z/9
    module_new(3, (9, 9, 9), 9, (0, 0, 0), {}, {(0, 1, 2): 3})
    # p > 3 forces alpha = 0 (via 6*alpha = 0, since gcd(6, 5^r) = 1)
    with pytest.raises(ValueError, match="alpha"):
        module_new(5, (5, 5, 5), 5, (0, 0, 0), {}, {(0, 1, 2): 1})


def test_module_new_alpha_key_order():
    with pytest.raises(ValueError, match="alpha key"):
        module_new(2, (2, 2, 2), 2, (0, 0, 0), {}, {(2, 1, 0): 1})


# -- cyclic groups from one slot ---------------------------------------------

def test_cyclic_27_from_order_9_slot():
    # C = C_9, Z = C_3, c^9 = z: the extension is cyclic of order 27
    M = module_new(3, (9,), 3, (1,), {}, {})
    L = build_module_extension(M)
    assert L.order == 27
    g = L.element(0, (1,))
    x = g
    order = 1
    while x != L.identity:
        x = L.mul(x, g)
        order += 1
    assert order == 27


def test_split_9_by_3_stays_exponent_9():
    # z trivial: C_9 x C_3 instead
    M = module_new(3, (9,), 3, (0,), {}, {})
    L = build_module_extension(M)
    g = L.element(0, (1,))
    assert L.pow(g, 9) == L.identity


# -- sigma on general vectors (p = 2) ----------------------------------------

def test_eval_sigma2_two_slot_example():
    # sigma(x1 + x2) = s1 + s2 + chi12
    M = module_new(2, (2, 2), 2, (0, 0), {(0, 1): 1}, {})
    assert eval_sigma2(M, (0, 0), (1, 1)) == Residue(1, 2)
    assert eval_sigma2(M, (1, 1), (1, 1)) == Residue(1, 2)
    assert eval_sigma2(M, (1, 0), (1, 1)) == Residue(0, 2)


def test_eval_sigma2_polarization():
    M = module_new(2, (2, 2, 2), 2, (0, 0, 0),
                   {(0, 1): 1, (1, 2): 1}, {(0, 1, 2): 1})
    rng = np.random.default_rng(7)
    sig = (1, 0, 1)
    for _ in range(40):
        c = tuple(rng.integers(0, 2, size=3).tolist())
        d = tuple(rng.integers(0, 2, size=3).tolist())
        e = tuple((x + y) % 2 for x, y in zip(c, d))
        lhs = eval_sigma2(M, sig, e)
        rhs = (eval_sigma2(M, sig, c) + eval_sigma2(M, sig, d)
               + eval_chi_module(M, c, d))
        assert lhs == rhs


def test_eval_sigma2_requires_p2_and_exponent_2():
    M3 = module_new(3, (3,), 3, (0,), {}, {})
    with pytest.raises(ValueError, match="p = 2"):
        eval_sigma2(M3, (0,), (1,))
    M4 = module_new(2, (4,), 4, (0,), {}, {})
    with pytest.raises(ValueError, match="exponent 2"):
        eval_sigma2(M4, (0,), (1,))
    M = module_new(2, (2, 2), 2, (0, 0), {}, {})
    with pytest.raises(ValueError, match="per basis slot"):
        eval_sigma2(M, (0,), (1, 1))


# -- q-th power maps ----------------------------------------------------------

def test_sigma_q_on_c4_times_c2():
    M = module_new(2, (4, 2), 2, (1, 0), {(0, 1): 1}, {})
    L = build_module_extension(M)
    # c1^4 = z, c2^4 = 1
    assert sigma_q(L, 4, (1, 0)) == Residue(1, 2)
    assert sigma_q(L, 4, (0, 1)) == Residue(0, 2)
    # trivial on the subgroup C_2 = {squares and involutions}
    for c in [(0, 0), (2, 0), (0, 1), (2, 1)]:
        assert sigma_q(L, 4, c) == Residue(0, 2)
    # linear for q = 4 > 2
    vecs = [(x, y) for x in range(4) for y in range(2)]
    for c in vecs:
        for d in vecs:
            e = ((c[0] + d[0]) % 4, (c[1] + d[1]) % 2)
            assert sigma_q(L, 4, e) == sigma_q(L, 4, c) + sigma_q(L, 4, d)


def test_sigma_q_domain_errors():
    M = module_new(2, (4, 2), 2, (1, 0), {(0, 1): 1}, {})
    L = build_module_extension(M)
    with pytest.raises(ValueError, match="not in C_q"):
        sigma_q(L, 2, (1, 0))
    with pytest.raises(ValueError, match="power of 2"):
        sigma_q(L, 6, (0, 0))
    M4 = module_new(2, (4,), 4, (1,), {}, {})
    L4 = build_module_extension(M4)
    with pytest.raises(ValueError, match="exponent p"):
        sigma_q(L4, 4, (1,))


# -- extensions and their verification ---------------------------------------

def test_module_extension_matches_cvs_when_elementary():
    # orders all p and |Z| = p is exactly the vector-space case
    C = octonion_cvs()
    M = module_new(2, (2, 2, 2), 2, tuple(C.sigma_basis),
                   {(0, 1): 1, (0, 2): 1, (1, 2): 1}, {(0, 1, 2): 1})
    LM = build_module_extension(M)
    LC = build(C)
    assert np.array_equal(LM.theta_table(), LC.theta_table())


def test_verify_p2_mixed_radix():
    M = module_new(2, (4, 2), 2, (1, 0), {(0, 1): 1}, {})
    L = build_module_extension(M)
    assert L.order == 16
    rep = verify_module_extension(L)
    assert rep.ok, [str(c) for c in rep.checks if not c.ok]
    g = L.generator(0)
    assert L.pow(g, 4) == L.element(1, (0, 0))


def test_verify_p3_with_alpha():
    M = module_new(3, (9, 3, 3), 3, (1, 2, 0), {(0, 1): 1}, {(0, 1, 2): 1})
    L = build_module_extension(M)
    assert L.order == 243
    rep = verify_module_extension(L)
    assert rep.ok, [str(c) for c in rep.checks if not c.ok]
    # the slot of order 9 really needs 9 steps to hit its z value
    g = L.generator(0)
    assert L.pow(g, 9) == L.element(1, (0, 0, 0))
    assert L.pow(g, 3) != L.element(1, (0, 0, 0))


def test_verify_catches_wrong_z_value():
    M = module_new(2, (4, 2), 2, (1, 0), {(0, 1): 1}, {})
    L = build_module_extension(M)
    # freeze the true multiplication, then lie about the recorded z value
    L.theta_table()
    bad = module_new(2, (4, 2), 2, (0, 0), {(0, 1): 1}, {})
    L.module = bad
    rep = verify_module_extension(L)
    assert not rep.ok
    assert any("basis powers" in c.name and not c.ok for c in rep.checks)


# -- isotopes ----------------------------------------------------------------

def test_module_isotopy_check_p3():
    M = module_new(3, (3, 3, 3), 3, (0, 1, 2), {(0, 1): 1}, {(0, 1, 2): 1})
    rep = module_isotopy_check(M)
    assert rep.ok, [str(c) for c in rep.checks if not c.ok]
    assert len(rep.checks) == 28  # 27 kappas plus the kappa = 0 extra check


def test_module_isotopy_check_rejects_p2():
    M = module_new(2, (2, 2), 2, (0, 0), {(0, 1): 1}, {})
    with pytest.raises(ValueError, match="p = 3"):
        module_isotopy_check(M)


# -- text form ----------------------------------------------------------------

def test_emit_parse_round_trip():
    M = module_new(3, (9, 3, 3), 3, (1, 2, 0), {(0, 1): 1}, {(0, 1, 2): 1})
    text = emit_module(M)
    assert parse_module(text) == M
    assert "orders 9 3 3" in text
    # indices in the text form are 1-based
    assert "zi 1 1" in text and "chi 1 2 1" in text and "alpha 1 2 3 1" in text


def test_parse_module_errors():
    with pytest.raises(ValueError, match="header"):
        parse_module("p 2\norders 2\nzorder 2\n")
    with pytest.raises(ValueError, match="required"):
        parse_module("module\np 2\norders 2\n")
    with pytest.raises(ValueError, match="duplicate zi"):
        parse_module("module\np 2\norders 4\nzorder 2\nzi 1 1\nzi 1 0\n")
    with pytest.raises(ValueError, match="out of range"):
        parse_module("module\np 2\norders 4\nzorder 2\nzi 3 1\n")
    with pytest.raises(ValueError, match="unknown directive"):
        parse_module("module\np 2\norders 2\nzorder 2\nsigma 1 1\n")
    with pytest.raises(ValueError, match="line 2"):
        parse_module("module\np two\norders 2\nzorder 2\n")


def test_alpha_tensor_signs():
    M = module_new(3, (3, 3, 3), 3, (0, 0, 0), {}, {(0, 1, 2): 1})
    assert eval_alpha_module(M, (1, 0, 0), (0, 1, 0), (0, 0, 1)) == Residue(1, 3)
    # odd permutation of the arguments flips the sign mod 3
    assert eval_alpha_module(M, (0, 1, 0), (1, 0, 0), (0, 0, 1)) == Residue(2, 3)
