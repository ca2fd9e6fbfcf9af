import math
from fractions import Fraction

import numpy as np
import pytest

from spectrum import graph as gr
from spectrum.prob_types import Distribution, NType, shannon_entropy
from spectrum.refinement import (capacity_within_type_lower, combine_lambda, combined_upper_bound,
                                 complementary_refinement, continuity_bound, corner_refinement,
                                 disjoint_union_value, f_star, fekete_estimate, maximize_over_simplex,
                                 maximize_refinement, reproduce_incomparable_example, witsenhausen_upper)

C5 = gr.cycle(5)
U5 = Distribution.uniform(range(5))


@pytest.fixture(scope="module")
def chi():
    return corner_refinement("chi_bar_f")


@pytest.fixture(scope="module")
def theta():
    return corner_refinement("theta")


def test_refinement_bounds(chi, theta):
    for F in (chi, theta):
        v = F(C5, U5)
        assert 0 <= v <= math.log2(5)
    assert chi(C5, U5) == pytest.approx(math.log2(2.5), abs=1e-7)
    assert theta(C5, U5) == pytest.approx(math.log2(5) / 2, abs=1e-6)


def test_refinements_on_extreme_graphs(chi, theta):
    P = Distribution(range(4), [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)])
    for F in (chi, theta):
        assert F(gr.complete(4), P) == pytest.approx(0.0, abs=1e-6)
        assert F(gr.edgeless(4), P) == pytest.approx(1.75, abs=1e-6)


def test_complementary_refinement(theta, chi):
    # theta is self-complementary on C5 at the uniform distribution
    assert complementary_refinement(theta, C5, U5) == pytest.approx(theta(C5, U5), abs=1e-6)
    assert complementary_refinement(chi, C5, U5) <= chi(C5, U5) + 1e-9


def test_disjoint_union_value(chi):
    G, H = C5, gr.complete(3)
    P, Q = U5, Distribution.uniform(range(3))
    p = Fraction(1, 3)
    from spectrum.prob_types import mixture

    lhs = chi(gr.disjoint_union(G, H), mixture(p, P, Q))
    assert lhs == pytest.approx(disjoint_union_value(chi, G, H, p, P, Q), abs=1e-7)


def test_maximize_over_simplex_on_entropy():
    fn = lambda p: (shannon_entropy(p), -np.log2(np.maximum(p, 1e-300)) - 1 / math.log(2))
    v, p = maximize_over_simplex(fn, 4, restarts=2)
    assert v == pytest.approx(2.0, abs=1e-6)
    assert np.allclose(p, 0.25, atol=1e-3)


def test_max_over_distributions_recovers_parameter(chi):
    v, _ = maximize_refinement(chi, C5, restarts=3)
    assert 2**v == pytest.approx(2.5, abs=1e-4)
    v, _ = maximize_refinement(chi, gr.path(4), restarts=3)
    assert 2**v == pytest.approx(2.0, abs=1e-4)


def test_combine_lambda_endpoints(chi, theta):
    lo = combine_lambda(chi, theta, 0.0, C5, restarts=1)
    assert 2**lo == pytest.approx(2.5, abs=1e-4)
    mid = combine_lambda(chi, theta, 0.5, C5, restarts=1)
    # on a vertex-transitive graph the uniform distribution is optimal for both
    assert mid == pytest.approx(0.5 * math.log2(2.5) + 0.25 * math.log2(5), abs=1e-4)
    with pytest.raises(ValueError):
        combine_lambda(chi, theta, 1.5, C5)


def test_combined_upper_bound_on_a_graph():
    v = combined_upper_bound("fractional_clique_cover", "alpha", Fraction(1, 2), C5)
    assert str(v) == "sqrt(5)"


def test_f_star():
    assert float(f_star("chi_bar_f", C5, restarts=2)) == pytest.approx(2.0, abs=1e-4)
    assert float(f_star("chi_bar_f", gr.edgeless(4), restarts=2)) == pytest.approx(4.0, abs=1e-4)
    assert f_star("chi_bar_f", gr.null_graph()) == 0


def test_fekete_on_edgeless_pair():
    est = fekete_estimate("chi_bar_f", gr.edgeless(2), Distribution.uniform([0, 1]), 3)
    values = [t["value"] for t in est.trace]
    expected = [math.log2(math.comb(2 * k, k)) / (2 * k) for k in (1, 2, 3)]
    assert values == pytest.approx(expected, abs=1e-12)
    assert est.value == pytest.approx(math.log2(20) / 6, abs=1e-12)
    assert est.certified_direction == "lower"
    assert [t["vertices"] for t in est.trace] == [2, 6, 20]


def test_fekete_on_complete_graph_is_zero():
    est = fekete_estimate("theta", gr.complete(3), Distribution.uniform(range(3)), 2)
    assert all(abs(t["value"]) < 1e-6 for t in est.trace)


def test_fekete_below_corner_value_on_c5(theta):
    est = fekete_estimate("theta", C5, U5, 1)
    assert est.value == pytest.approx(math.log2(30) / 5, abs=1e-6)
    assert est.value <= theta(C5, U5) + 1e-4
    assert est.to_json_dict()["trace"][0]["vertices"] == 120


def test_capacity_within_type_lower():
    assert capacity_within_type_lower(C5, NType(tuple(range(5)), (1,) * 5)) == pytest.approx(math.log2(25) / 5)


def test_witsenhausen_upper():
    assert witsenhausen_upper(C5, 1) == pytest.approx(math.log2(3))
    assert witsenhausen_upper(C5, 2) == pytest.approx(math.log2(5) / 2)
    assert witsenhausen_upper(gr.complete(4), 2) == pytest.approx(2.0)


def test_continuity_bound():
    assert continuity_bound(7, 0.0) == 0.0
    assert continuity_bound(2, 2.0) == pytest.approx(2.0)
    assert continuity_bound(5, 0.2) == pytest.approx(0.1 * 2 + 0.4689955935892812 + 2 * (1 - 0.9927744539878083))
    with pytest.raises(ValueError):
        continuity_bound(3, 2.5)


def test_continuity_bound_holds_on_samples(chi):
    rng = np.random.default_rng(1)
    for _ in range(10):
        p, q = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(5))
        diff = abs(chi(C5, p) - chi(C5, q))
        assert diff <= continuity_bound(5, float(np.abs(p - q).sum())) + 1e-7


def test_worked_example():
    rep = reproduce_incomparable_example()
    vals = {k: str(v) for k, v in rep["values"].items()}
    assert vals["theta(G)"] == "2600/11"
    assert vals["haemersF2(G)"] == "15625/64"
    assert vals["f_half_bound(G)"] == "625*sqrt(5)/8"
    assert vals["f_half_bound(G0')"] == "40*sqrt(2145)/11"
    assert all(rep["checks"].values())
    assert rep["values"]["theta(G)"].provenance == "derived"
