"""Chain combinatorics and the flat-geometry intersection oracle.

The frozen genus-2 crossing matrix [[6,4],[4,2]] was derived by hand from
the pentagon strip decomposition and is pinned by two independent linear
identities: the transpose against the horizontal heights reproduces the
vertical circumferences, and the matrix against the vertical heights
reproduces the horizontal circumferences.
"""

from fractions import Fraction
import random

import mpmath
import pytest

from lamkit.curves import (
    WeightedMulticurve,
    chain_intersection_matrix,
    derive_intersection_matrix,
    intersection_system,
    matches_chain_pattern,
    pair,
)
from lamkit.errors import HypothesisError, ParameterError
from lamkit.flat_surface import HORIZONTAL, VERTICAL, area, cylinder_decomposition


def test_chain_genus2_structure():
    cs = chain_intersection_matrix(2)
    assert cs.labels == ("a1", "a2", "b1", "b2")
    assert cs.chain_order == ("a1", "b2", "a2", "b1")
    ones = [(x, y) for x in cs.labels for y in cs.labels if cs.entry(x, y) == 1]
    assert len(ones) == 6  # 3 adjacent pairs, symmetric
    assert cs.entry("a1", "b2") == 1
    assert cs.entry("a2", "b2") == 1
    assert cs.entry("a2", "b1") == 1
    assert cs.entry("a1", "b1") == 0


def test_chain_genus4_matches_figure_layout():
    cs = chain_intersection_matrix(4)
    assert cs.chain_order == ("a1", "b4", "a2", "b3", "a3", "b2", "a4", "b1")
    for i in range(1, 5):
        partners = [j for j in range(1, 5) if cs.entry(f"a{i}", f"b{j}") == 1]
        expected = [j for j in (5 - i, 6 - i) if 1 <= j <= 4]
        assert partners == sorted(expected)


@pytest.mark.parametrize("g", range(2, 7))
def test_chain_invariants(g):
    cs = chain_intersection_matrix(g)
    size = 2 * g
    m = cs.matrix
    assert all(m[i][j] == m[j][i] for i in range(size) for j in range(size))
    # a-a and b-b blocks vanish
    assert all(m[i][j] == 0 for i in range(g) for j in range(g))
    assert all(m[g + i][g + j] == 0 for i in range(g) for j in range(g))
    row_sums = sorted(sum(row) for row in m)
    assert set(row_sums) <= {1, 2}
    assert sum(row_sums) == 2 * (2 * g - 1)  # path graph edge count, doubled


def test_chain_rejects_small_genus():
    with pytest.raises(ParameterError):
        chain_intersection_matrix(1)


def test_geometric_matrix_genus2_frozen(surface):
    assert derive_intersection_matrix(surface(2)) == ((6, 4), (4, 2))


@pytest.mark.parametrize("g", range(2, 7))
def test_geometric_matrix_reconstruction_identities(surface, g):
    s = surface(g)
    m = derive_intersection_matrix(s)
    hs = cylinder_decomposition(s, HORIZONTAL)
    vs = cylinder_decomposition(s, VERTICAL)
    with mpmath.workprec(s.precision):
        for j in range(g):
            col = sum(hs[i].height * m[i][j] for i in range(g))
            assert abs(col - vs[j].circumference) < mpmath.mpf("1e-10")
        for i in range(g):
            row = sum(vs[j].height * m[i][j] for j in range(g))
            assert abs(row - hs[i].circumference) < mpmath.mpf("1e-10")
        # central symmetry pairs up crossings
        assert all(entry % 2 == 0 for row in m for entry in row)


@pytest.mark.parametrize("g", range(2, 7))
def test_area_identity_via_pairing(surface, g):
    s = surface(g)
    system = intersection_system(s)
    with mpmath.workprec(s.precision):
        u = WeightedMulticurve(
            "A", tuple(c.height for c in cylinder_decomposition(s, HORIZONTAL))
        )
        v = WeightedMulticurve(
            "B", tuple(c.height for c in cylinder_decomposition(s, VERTICAL))
        )
        total = pair(u, v, system)
        assert abs(total - area(s)) / area(s) < mpmath.mpf("1e-10")
        assert abs(pair(v, u, system) - total) == 0  # symmetric in its arguments


@pytest.mark.xfail(
    strict=True,
    reason="spec defect: the horizontal/vertical cores of the regular "
    "double-(2g+1)-gon intersect with even multiplicities ([[6,4],[4,2]] in "
    "genus 2), not in the unit chain pattern; the chain lives in a different "
    "parabolic direction pair (see decisions ledger)",
)
def test_geometric_matrix_matches_chain_after_relabeling(surface):
    assert matches_chain_pattern(derive_intersection_matrix(surface(2))) is not None


def test_pair_on_chain_unit_vectors():
    cs = chain_intersection_matrix(3)
    a1 = WeightedMulticurve("A", (1, 0, 0))
    b3 = WeightedMulticurve("B", (0, 0, 1))
    b1 = WeightedMulticurve("B", (1, 0, 0))
    assert pair(a1, b3, cs) == 1  # a1 is chain-adjacent to b_g
    assert pair(a1, b1, cs) == 0


def test_pair_is_bilinear():
    cs = chain_intersection_matrix(3)
    rng = random.Random(11)

    def rand_vec():
        return tuple(Fraction(rng.randint(0, 9) + 1, rng.randint(1, 9)) for _ in range(3))

    for _ in range(25):
        u, up, v = rand_vec(), rand_vec(), rand_vec()
        alpha = Fraction(rng.randint(1, 7), rng.randint(1, 7))
        lhs = pair(
            WeightedMulticurve("A", tuple(alpha * x + y for x, y in zip(u, up))),
            WeightedMulticurve("B", v),
            cs,
        )
        rhs = alpha * pair(
            WeightedMulticurve("A", u), WeightedMulticurve("B", v), cs
        ) + pair(WeightedMulticurve("A", up), WeightedMulticurve("B", v), cs)
        assert lhs == rhs


def test_pair_side_and_zero_guards():
    cs = chain_intersection_matrix(2)
    u = WeightedMulticurve("A", (1, 1))
    w = WeightedMulticurve("A", (2, 1))
    with pytest.raises(HypothesisError):
        pair(u, w, cs)
    assert pair(u, w, cs, allow_same_side=True) == 0
    with pytest.raises(HypothesisError):
        WeightedMulticurve("A", (0, 0))
    with pytest.raises(HypothesisError):
        WeightedMulticurve("B", (-1, 2))
    with pytest.raises(ParameterError):
        pair(u, WeightedMulticurve("B", (1, 1, 1)), cs)
