# SPDX-License-Identifier: Apache-2.0
"""Smoke tests of the Python bindings."""

import math

import pytest

import lipnet


def test_family_bound():
    assert lipnet.family_bound(1.0, 2.0) == 28.0


def test_one_dimensional_spiderweb():
    points = lipnet.spiderweb_points(1, "LINF", 1.0, 4)
    assert sorted(p[0] for p in points) == [-4, -3, -2, -1, 0, 1, 2, 3, 4]
    report = lipnet.certify_spiderweb(1, radius=8)
    assert report["pass"]
    assert report["points"] == 17
    assert report["measured_k"] <= 26
    assert report["radial_gap"] <= 12


def test_flipped_rule_fails():
    report = lipnet.certify_spiderweb(1, radius=4, rule="flipped")
    assert not report["pass"]


def test_free_norm_dipole():
    d = [[0.0, 3.0], [3.0, 0.0]]
    result = lipnet.free_norm(d, [0, 1], [1.0, -1.0])
    assert math.isclose(result["value"], 3.0)
    assert result["gap"] <= 1e-9


def test_basis_constant_below_k():
    est = lipnet.basis_constant(2, radius=8, points=40, samples=50)
    assert 1.0 <= est["value"] <= est["measured_k"] + 1e-9


def test_grid():
    assert lipnet.q_sequence(4) == [1, 8, 256, 24576]
    assert lipnet.grid_sk_sequence(1, 2) == [17, 9, 1, 0]
    assert all(ok for _, ok in lipnet.grid_identities(cap=2))


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        lipnet.certify_spiderweb(1, norm="L7")
    with pytest.raises(ValueError):
        lipnet.certify_spiderweb(1, rule="sideways")
