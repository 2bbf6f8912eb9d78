"""Smoke tests for the python bindings."""

import math

import pytest

import warplab as wl


def test_version():
    assert wl.__version__


def test_phi_values():
    assert wl.phi(0.0) == 0.0
    assert wl.phi(1.0) == pytest.approx(0.25806333281920273, rel=1e-10)
    assert abs(wl.phi(1000.0) - 1.0) <= 2e-3


def test_theorem_b_boundary():
    s = wl.eval_theorem_b(0.0)
    assert s.f == 0.0
    assert s.fp == pytest.approx(1.0)
    assert s.h == pytest.approx(1.0 / math.log(2.0), rel=1e-14)
    assert s.hp == 0.0


def test_theorem_a_table_roundtrip(tmp_path):
    table = wl.build_theorem_a(5.0, 1e-10)
    s = table.eval(2.0)
    assert s.f == pytest.approx(1.73161918526163, rel=1e-9)
    path = tmp_path / "table.txt"
    table.save(path)
    loaded = wl.WarpTable.load(path)
    assert loaded.eval(2.0).f == s.f


def test_flat_ricci_zero():
    flat = wl.WarpFamily.flat(1.0)
    sample = wl.eval_warp(flat, None, 1.5)
    ricci = wl.ricci_closed(sample, 4)
    assert ricci.hh == 0.0 and ricci.uu == 0.0 and ricci.vv == 0.0
    oracle = wl.ricci_fd_oracle(flat, None, 4, 1.0)
    assert abs(oracle.hh) < 1e-7


def test_curvature_positivity_scan():
    fam = wl.WarpFamily.theorem_b()
    grid = [0.1 * i for i in range(101)]
    report = wl.positivity_scan(fam, None, 15, grid)
    assert report.positive


def test_classify_and_half_oscillation():
    fam = wl.WarpFamily.theorem_b()
    h0 = 1.0 / math.log(2.0)
    assert (
        wl.classify(fam, None, wl.StripState(0, 0, 1, 0)).kind
        == wl.GeodesicClass.RadialRay
    )
    res = wl.classify(
        fam, None, wl.StripState(0, 0, math.cos(math.pi / 6), math.sin(math.pi / 6) / h0)
    )
    assert res.kind == wl.GeodesicClass.Oscillating
    assert res.oscillation.r_star == pytest.approx(math.sqrt(2.0), abs=1e-9)


def test_trace_clairaut_drift():
    fam = wl.WarpFamily.theorem_b()
    h0 = 1.0 / math.log(2.0)
    path = wl.trace(
        fam, None, wl.StripState(0, 0, math.cos(0.6), math.sin(0.6) / h0), 100.0
    )
    assert path.max_j_drift < 1e-9
    assert len(path.samples) > 10


def test_deck_and_distances():
    p = wl.deck(wl.StripPoint(0.0, 0.0), 2)
    assert p.y == pytest.approx(4.0 * math.pi)

    fam = wl.WarpFamily.theorem_b()
    d0 = wl.distance_axis(fam, None, 0)
    assert d0.value == 0.0
    d1 = wl.distance_axis(fam, None, 1)
    assert d1.value == pytest.approx(6.3389294000450235, rel=1e-7)
    assert d1.method_name == "quadrature-BVP"
    assert d1.lower_bound <= d1.value <= d1.upper_bound

    dp = wl.distance_axis_to_point(fam, None, 1, wl.StripPoint(10.0, 0.0))
    assert 10.0 <= dp.value <= 10.0 + 2.0 * math.pi * wl.eval_theorem_b(10.0).h


def test_busemann_and_certificate():
    fam = wl.WarpFamily.theorem_b()
    series = wl.busemann_estimate(fam, None, 1, [10.0, 100.0])
    assert series.monotone
    assert all(row.b_hi <= 0.0 for row in series.rows)

    cert = wl.nonproper_certificate(fam, None, [1, 2], 100.0, 4.0)
    assert cert.verdict == "non-proper evidence"

    with pytest.raises(ValueError):
        wl.nonproper_certificate(wl.WarpFamily.flat(1.0), None, [1], 100.0, 1.0)


def test_numerical_error_maps_to_arithmetic_error():
    with pytest.raises(ArithmeticError):
        wl.turning_radius(wl.WarpFamily.flat(1.0), None, 0.5)
