from __future__ import annotations

import numpy as np
import pytest

from coupled_fpi import (
    InsufficientSamplesError,
    InvalidInputError,
    InvalidParameterError,
    OrderGraph,
    PredicateGraph,
    SampleSpec,
    Sampler,
    product_edge,
)


def test_spec_validation():
    with pytest.raises(InvalidParameterError):
        SampleSpec(count=0)
    with pytest.raises(InvalidParameterError):
        SampleSpec(count=True)
    with pytest.raises(InvalidParameterError):
        SampleSpec(seed=1.5)
    spec = SampleSpec()
    assert spec.count == 10_000 and spec.seed == 0


def test_same_seed_same_draws():
    spec = SampleSpec(count=10, seed=42, low=-2.0, high=2.0)
    a = Sampler(spec, 3).draw(100)
    b = Sampler(spec, 3).draw(100)
    assert np.array_equal(a, b)
    c = Sampler(SampleSpec(count=10, seed=43, low=-2.0, high=2.0), 3).draw(100)
    assert not np.array_equal(a, c)


def test_box_bounds_respected():
    s = Sampler(SampleSpec(count=10, seed=1, low=-1.5, high=0.5), 2)
    pts = s.draw(1000)
    assert pts.shape == (1000, 2)
    assert (pts >= -1.5).all() and (pts <= 0.5).all()


def test_per_coordinate_bounds():
    s = Sampler(SampleSpec(count=10, seed=1, low=(0.0, -5.0), high=(1.0, -4.0)), 2)
    pts = s.draw(500)
    assert (pts[:, 0] >= 0.0).all() and (pts[:, 0] <= 1.0).all()
    assert (pts[:, 1] >= -5.0).all() and (pts[:, 1] <= -4.0).all()


def test_invalid_box():
    with pytest.raises(InvalidInputError):
        Sampler(SampleSpec(count=10, seed=1, low=1.0, high=0.0), 1)


def test_pool_draws_only_listed_points():
    s = Sampler(SampleSpec(count=10, seed=5, points=(0.0, 1.0, 2.0)), 1)
    pts = s.draw(200)
    assert set(np.unique(pts)) <= {0.0, 1.0, 2.0}


def test_edge_pairs_satisfy_constraint():
    g = OrderGraph(1)
    spec = SampleSpec(count=500, seed=7, low=-1.0, high=1.0)
    P, Q = Sampler(spec, 1).edge_pairs(g)
    assert len(P) == 500
    assert g.edge_mask(P, Q).all()


def test_edge_triples_first_two_constrained():
    g = OrderGraph(2)
    spec = SampleSpec(count=300, seed=8, low=-1.0, high=1.0)
    P, Q, W = Sampler(spec, 2).edge_triples(g)
    assert len(P) == len(Q) == len(W) == 300
    assert g.edge_mask(P, Q).all()


def test_product_edge_pairs_satisfy_product_constraint():
    g = OrderGraph(1)
    spec = SampleSpec(count=200, seed=9, low=-1.0, high=1.0)
    X, Y, U, V = Sampler(spec, 1).product_edge_pairs(g)
    for i in range(len(X)):
        assert product_edge(g, (X[i], Y[i]), (U[i], V[i]))


def test_rejection_budget_exhaustion():
    # loops are the only edges; box draws never repeat a point exactly
    g = PredicateGraph(1, lambda p, q: False)
    spec = SampleSpec(count=5, seed=3, low=-1.0, high=1.0)
    with pytest.raises(InsufficientSamplesError):
        Sampler(spec, 1).edge_pairs(g)


def test_filtered_draws_deterministic():
    g = OrderGraph(1)
    spec = SampleSpec(count=100, seed=11, low=-1.0, high=1.0)
    A = Sampler(spec, 1).edge_pairs(g)
    B = Sampler(spec, 1).edge_pairs(g)
    assert np.array_equal(A[0], B[0]) and np.array_equal(A[1], B[1])
