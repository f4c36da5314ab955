import random

import numpy as np
import pytest

from pathseries.exceptions import ConsistencyError
from pathseries.graph import Graph, add_loops, named_family
from pathseries.series import BivariateSeries, ps_reciprocal
from pathseries.zeta import (
    BivariatePoly,
    bareiss_det,
    edge_matrices,
    zeta_from_cycles,
    zeta_inverse_det,
    zeta_inverse_factored,
)

u, t = BivariatePoly.u(), BivariatePoly.t()
ONE = BivariatePoly.const(1)

LOOP = Graph(1, (0,), (0,))
EDGE = named_family("edge")
K3 = named_family("complete", v=3)
K4 = named_family("complete", v=4)


def random_cubic_multigraph(seed):
    # configuration model on 4 vertices; loops and multi-edges allowed
    rnd = random.Random(seed)
    stubs = [v for v in range(4) for _ in range(3)]
    rnd.shuffle(stubs)
    return Graph(4, tuple(stubs), tuple(i ^ 1 for i in range(12)))


def c3_with_loop_pair():
    g = named_family("cycle", k=3)
    h = g.half_edge_count
    return Graph(3, g.source + (0, 0), g.partner + (h + 1, h))


def with_self_inverse_edge():
    # path 0-1 plus a half-loop at vertex 1
    return Graph(2, (0, 1, 1), (1, 0, 2))


TEST_GRAPHS = {
    "triangle": K3,
    "K4": K4,
    "C5": named_family("cycle", k=5),
    "C3+loop": c3_with_loop_pair(),
    "cubic": random_cubic_multigraph(3),
    "cubic2": random_cubic_multigraph(11),
    "half-loop": with_self_inverse_edge(),
    "loop": LOOP,
    "edge": EDGE,
    "looped-K3": add_loops(K3),
}


def test_edge_matrices_examples():
    em = edge_matrices(EDGE)
    swap = np.array([[0, 1], [1, 0]])
    assert (em.B == swap).all() and (em.J == swap).all() and (em.A == swap).all()
    assert (em.D == np.eye(2)).all() and (em.n_selfinv, em.m_pairs) == (0, 1)
    em = edge_matrices(LOOP)
    assert em.B.tolist() == em.J.tolist() == em.A.tolist() == em.D.tolist() == [[1]]
    assert (em.n_selfinv, em.m_pairs) == (1, 0)
    em = edge_matrices(K3)
    assert em.B.shape == (6, 6) and (em.B.sum(axis=1) == 2).all() and em.m_pairs == 3


def test_small_determinants():
    assert zeta_inverse_det(LOOP) == ONE - u * t
    assert zeta_inverse_det(EDGE) == ONE - u * u * t * t
    assert zeta_inverse_factored(LOOP) == ONE - u * t


def test_triangle_at_u0():
    det = zeta_inverse_det(K3)
    assert det.at_u(0) == {0: 1, 3: -2, 6: 1}  # (1 - t^3)^2


@pytest.mark.parametrize("name", sorted(TEST_GRAPHS))
def test_bass_identity(name):
    g = TEST_GRAPHS[name]
    assert zeta_inverse_det(g) == zeta_inverse_factored(g)


@pytest.mark.parametrize("name", sorted(TEST_GRAPHS))
def test_cycle_product(name):
    g = TEST_GRAPHS[name]
    assert ps_reciprocal(zeta_inverse_det(g).to_series(10)) == zeta_from_cycles(g, 10)


def test_single_edge_cycle_product():
    z = zeta_from_cycles(EDGE, 8)
    assert z == BivariateSeries.from_terms({(0, 0): 1, (2, 2): 1, (4, 4): 1, (6, 6): 1, (8, 8): 1}, 8)


def test_classical_ihara_on_k4():
    # (q+1)-regular simple graph, q = 2: det(I - (B-J)t) = (1-t^2)^(m-|V|) det(I - At + q t^2 I)
    det = zeta_inverse_det(K4).at_u(0)
    A = [[0 if i == j else 1 for j in range(4)] for i in range(4)]
    P = [[BivariatePoly.const(1 if i == j else 0) - t * A[i][j] + (t * t * 2 if i == j else 0)
          for j in range(4)] for i in range(4)]
    rhs = bareiss_det(P) * (ONE - t * t) ** 2
    assert det == rhs.at_u(0)


def test_exact_division_refuses_remainder():
    with pytest.raises(ConsistencyError):
        (ONE + t).exact_div(ONE - t)
    assert ((ONE + t) * (ONE - u)).exact_div(ONE - u) == ONE + t


def test_poly_json():
    p = ONE - u * t * 3
    assert p.to_json() == [{"u": 0, "t": 0, "coeff": "1"}, {"u": 1, "t": 1, "coeff": "-3"}]
