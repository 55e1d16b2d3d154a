import pytest
from hypothesis import given, strategies as st

from torus_stab.bounds import bounds, replay
from torus_stab.errors import BoundOverflow


def _c0(z, d):
    k = 0
    while z ** k < d ** 3:
        k += 1
    return k + d * (d - 1)


def _t2(z, d):
    """T(z, 2, d) with gamma_1 = 1, written out by hand."""
    c0 = _c0(z, d)
    if c0 == 0:
        return 0
    c1 = 6 * d + 6 * d * (2 * d)
    return c0 * (c1 * z ** (2 * c0 - 1)) + c0


@pytest.mark.parametrize("z", range(2, 6))
@pytest.mark.parametrize("d", range(1, 9))
def test_base_formulas(z, d):
    r1 = bounds(z, 1, d)
    assert (r1.T, r1.E, r1.L) == (d, d, 1)
    assert bounds(z, 2, d).L == 2 * d


def test_examples():
    assert bounds(2, 1, 5).T == 5
    assert bounds(2, 2, 3).L == 6
    r = bounds(2, 2, 2)
    assert (r.c0, r.L, r.c1) == (5, 4, 60)
    assert r.T == 153605


@pytest.mark.parametrize("z", range(2, 5))
@pytest.mark.parametrize("d", range(1, 7))
def test_t2_independent(z, d):
    r = bounds(z, 2, d)
    assert r.c0 == _c0(z, d)
    assert r.T == _t2(z, d)
    assert r.c2 == 6 * d + 6 * d * d


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("z", [2, 3])
def test_monotone_in_d(n, z):
    vals = [bounds(z, n, d) for d in range(1, 7)]
    for a, b in zip(vals, vals[1:]):
        assert a.T <= b.T and a.E <= b.E


def test_three_variables():
    r = bounds(2, 3, 1)
    assert (r.T, r.E, r.L) == (0, 1, 2)
    with pytest.raises(BoundOverflow):
        bounds(2, 3, 2)


def test_digit_cap():
    with pytest.raises(BoundOverflow):
        bounds(2, 2, 6, max_digits=10)
    with pytest.raises(ValueError):
        bounds(1, 2, 2)


@given(st.integers(2, 6), st.integers(1, 2), st.integers(1, 8))
def test_replay(z, n, d):
    r = bounds(z, n, d)
    assert replay(r)
    assert any(t[0] == "T" and t[1:4] == (z, n, d) for t in r.trace)


def test_proof_inequality_recorded():
    # equality at k = l = c0
    for z in (2, 3, 4):
        for d in range(1, 6):
            assert bounds(z, 2, d).proof_inequality is True
    assert bounds(2, 1, 2).proof_inequality is None


def test_json_strings():
    j = bounds(2, 2, 2).to_json()
    assert j["T"] == "153605" and j["L"] == "4"
