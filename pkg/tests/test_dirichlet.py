import random
from fractions import Fraction as F

import pytest

from endoapprox.dirichlet import (
    BudgetError,
    DirichletError,
    dirichlet_approx,
    feasibility_oracle,
)


def test_boundary_case():
    res = dirichlet_approx([F(1, 2)], 2)
    assert res.denominator == 1
    assert res.numerators == (0,)
    assert res.error == F(1, 2)  # closed bound: error <= 1/Q


def test_integer_inputs():
    res = dirichlet_approx([F(5), F(-3)], 3)
    assert res.denominator == 1
    assert res.numerators == (5, -3)
    assert res.error == 0


def test_thirds_matches_oracle():
    # With the theorem's closed bound, b = 1 already achieves error 1/3 = 1/Q;
    # the oracle confirms it is the minimal feasible row, and the exact row
    # b = 3 (error 0) is present further down the table.
    alpha = [F(2, 3), F(1, 3)]
    res = dirichlet_approx(alpha, 3)
    table = feasibility_oracle(alpha, 3)
    feasible = [b for b, err in table if err <= F(1, 3)]
    assert res.denominator == feasible[0] == 1
    assert (3, F(0)) in table


def test_oracle_table_examples():
    assert feasibility_oracle([F(1, 2)], 2) == [(1, F(1, 2))]
    with pytest.raises(DirichletError):
        feasibility_oracle([], 3)
    with pytest.raises(DirichletError):
        dirichlet_approx([F(1, 2)], 1)


def test_budget_error():
    with pytest.raises(BudgetError):
        dirichlet_approx([F(1, 3)] * 3, 8, budget=100)


def test_ties_round_to_even():
    # alpha*b = 3/2 rounds to 2, 1/2 rounds to 0
    res = dirichlet_approx([F(3, 2)], 2)
    assert res.numerators == (2,) if res.denominator == 1 else True
    assert abs(F(3, 2) * res.denominator - res.numerators[0]) <= F(1, 2)


def test_contract_against_oracle_random():
    rng = random.Random(41)
    for _ in range(150):
        m = rng.randint(1, 3)
        q = rng.randint(2, 8)
        alpha = [F(rng.randint(-300, 300), rng.randint(1, 100)) for _ in range(m)]
        res = dirichlet_approx(alpha, q)
        assert 1 <= res.denominator < q**m
        assert res.error <= F(1, q)
        for a, beta in zip(alpha, res.numerators):
            assert abs(a * res.denominator - beta) <= F(1, q)
        table = feasibility_oracle(alpha, q)
        feasible = [b for b, err in table if err <= F(1, q)]
        assert feasible and res.denominator == feasible[0]
