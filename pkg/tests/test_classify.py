"""Isomorphism and isotopy classification over small parameter ranges.

The dim-4 run takes about a minute and lives in the acceptance tests; here
we pin down the small cases exactly and check the class data is usable.
"""

import pytest

from codeloops import (brute_force_isomorphic, build, classify, cvs_new,
                       rep_to_cvs, LoopTable)
from codeloops.classify import state_invariants, total_state_count


def test_dim3_p3_nonassoc():
    res = classify(3, 3, 3, nonassoc=True)
    # sigma is identically zero at exponent p, so states are (chi, alpha)
    assert res.n_states == total_state_count(3, 3, 3, True) == 27 * 2
    assert res.n_iso == 2
    assert res.n_isotopy == 1
    assert sorted(c.size for c in res.iso_classes) == [2, 52]
    assert sum(c.size for c in res.iso_classes) == res.n_states
    # one isotopy class containing both isomorphism classes
    assert sorted(len(g) for g in res.isotopy_classes) == [2]


def test_dim3_p3_all():
    res = classify(3, 3, 3)
    assert res.n_states == 27 * 3
    assert sum(c.size for c in res.iso_classes) == res.n_states
    assert [c.size for c in res.iso_classes] == [1, 2, 26, 52]
    # the associative states (alpha = 0) are the symplectic-form classes:
    # chi of rank 0 and rank 2
    assoc = [c for c in res.iso_classes
             if c.invariants["rad_alpha_dim"] == 3]
    assert sorted(c.invariants["rad_chi_dim"] for c in assoc) == [1, 3]
    assert res.n_iso == 4
    assert res.n_isotopy == 3  # isotopy only merges the nonassociative pair
    merged = [g for g in res.isotopy_classes if len(g) == 2]
    assert len(merged) == 1


def test_dim2_p3():
    res = classify(3, 2, 3)
    # no alpha in dimension 2: chi zero or symplectic, never merged
    assert res.n_iso == 2 and res.n_isotopy == 2
    assert [c.size for c in res.iso_classes] == [1, 2]


def test_dim2_p5():
    res = classify(5, 2, 5)
    assert res.n_iso == 2 and res.n_isotopy == 2
    assert sum(c.size for c in res.iso_classes) == 5
    assert [c.size for c in res.iso_classes] == [1, 4]


def test_exponent9_dim1():
    # sigma ranges over Z/3 here: the split and nonsplit extensions
    res = classify(3, 1, 9)
    assert res.n_states == 3
    assert res.n_iso == 2
    assert sorted(c.size for c in res.iso_classes) == [1, 2]


def test_exponent9_dim2():
    # sigma zero/nonzero crossed with chi zero/nonzero
    res = classify(3, 2, 9)
    assert res.n_states == 3 ** 3
    assert res.n_iso == 4
    sizes = sorted(c.size for c in res.iso_classes)
    assert sizes == [1, 2, 8, 16] and sum(sizes) == 27


def test_invariants_and_reps_are_consistent():
    res = classify(3, 3, 3, nonassoc=True)
    for c in res.iso_classes:
        inv = state_invariants(c.rep, 3, 3)
        assert inv == c.invariants
        C = rep_to_cvs(c.rep, 3, 3)  # must pass cvs_new validation
        assert C.p == 3 and C.k == 3
    # reps of distinct classes build non-isomorphic loops
    L0 = LoopTable(build(rep_to_cvs(res.iso_classes[0].rep, 3, 3)).table_array())
    L1 = LoopTable(build(rep_to_cvs(res.iso_classes[1].rep, 3, 3)).table_array())
    assert brute_force_isomorphic(L0, L1) is None


def test_classify_error_paths():
    with pytest.raises(ValueError, match="odd p"):
        classify(2, 3, 2)
    with pytest.raises(ValueError, match="alpha"):
        classify(5, 3, 5, nonassoc=True)
    with pytest.raises(ValueError, match="exponent"):
        classify(3, 2, 27)


def test_prune_matches_unpruned_dim3():
    a = classify(3, 3, 3, nonassoc=True, prune=True)
    b = classify(3, 3, 3, nonassoc=True, prune=False)
    assert a.n_iso == b.n_iso and a.n_isotopy == b.n_isotopy
    assert ([c.size for c in a.iso_classes]
            == [c.size for c in b.iso_classes])
