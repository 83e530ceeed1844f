import numpy as np
import pytest

from lemniscates.curves import SampledCurve, count_preimages, winding_number
from lemniscates.errors import PreconditionError, TraceError
from lemniscates.levelcurves import (
    ArgChangeReaches,
    ClosedLoop,
    HitsGradient,
    arg_change_along,
    level_component_enclosing,
    solve_target,
    trace_gradient,
    trace_level,
)
from lemniscates.polynomials import Polynomial, RationalMap

F4 = RationalMap(Polynomial([0, 0, 3, 4, 1]))
Z = RationalMap(Polynomial([0, 1]))
PI6 = np.pi / 6


def _v5():
    """Vertex on {|f4|=8} with arg f4 = pi/2, found from a coarse grid seed."""
    gr = (np.linspace(-4, 2, 60)[None, :] + 1j * np.linspace(-3, 3, 60)[:, None]).ravel()
    vals = F4(gr)
    seed = gr[int(np.argmin(np.abs(vals - 8j)))]
    return solve_target(F4, 8j, seed)


def test_solve_target_examples():
    sq = RationalMap(Polynomial([0, 0, 1]))
    assert solve_target(sq, 4.0, 1.9) == pytest.approx(2.0, abs=1e-9)
    assert solve_target(Z, 0.7 + 0.1j, 0.5) == pytest.approx(0.7 + 0.1j, abs=1e-12)
    v5 = _v5()
    assert abs(F4(v5)) == pytest.approx(8.0, abs=1e-10)
    assert np.angle(F4(v5)) == pytest.approx(np.pi / 2, abs=1e-10)


def test_solve_target_critical_point_failure():
    sq = RationalMap(Polynomial([0, 0, 1]))
    with pytest.raises(TraceError):
        solve_target(sq, 0.0, 0.5)  # solution z=0 is critical


def test_trace_level_identity_circle():
    arc = trace_level(Z, 1.0, 1.0, +1, ClosedLoop(), step=0.02)
    assert arg_change_along(arc) == pytest.approx(2 * np.pi, abs=1e-9)
    assert np.max(np.abs(np.abs(arc.samples) - 1.0)) < 1e-8
    assert abs(arc.samples[-1] - arc.samples[0]) < 1e-12


def test_trace_level_v5v6_change():
    # stop at the first crossing of arg f = 5*pi/3 going positively
    arc = trace_level(F4, 8.0, _v5(), +1, HitsGradient(5 * np.pi / 3, 1), step=0.01)
    assert arg_change_along(arc) == pytest.approx(7 * np.pi / 6, abs=1e-12)
    # honest re-measurement from the samples themselves
    fresh = np.unwrap(np.angle(arc.f_values))
    assert fresh[-1] - fresh[0] == pytest.approx(7 * np.pi / 6, abs=1e-9)


def test_trace_level_closed_loop_lev8():
    arc = trace_level(F4, 8.0, _v5(), +1, ClosedLoop(), step=0.01)
    assert arg_change_along(arc) == pytest.approx(8 * np.pi, abs=1e-9)


def test_trace_level_invariants():
    arc = trace_level(F4, 8.0, _v5(), +1, ArgChangeReaches(7 * np.pi / 6), step=0.01)
    assert np.max(np.abs(np.abs(arc.f_values) - 8.0)) / 8.0 <= 1e-8
    assert np.max(np.abs(np.diff(arc.arg_lift))) < np.pi / 4


def test_trace_level_reverse_returns_to_start():
    v5 = _v5()
    fwd = trace_level(F4, 8.0, v5, +1, ArgChangeReaches(np.pi / 2), step=0.01)
    back = trace_level(
        F4, 8.0, complex(fwd.samples[-1]), -1, ArgChangeReaches(-np.pi / 2), step=0.01
    )
    assert abs(back.samples[-1] - v5) < 10 * 0.01 * 1e-6 + 1e-9


def test_trace_gradient_real_segment():
    arc = trace_gradient(Z, 0.0, 1.0, 2.0, step=0.02)
    assert arc.samples[0] == pytest.approx(1.0)
    assert arc.samples[-1] == pytest.approx(2.0, abs=1e-12)
    assert np.max(np.abs(arc.samples.imag)) < 1e-12
    mods = np.abs(arc.f_values)
    assert np.all(np.diff(mods) > 0)


def test_trace_gradient_v2v3():
    # the arc joining Lev(f4, 0.15) to Lev(f4, 0.6) along arg f4 = 3*pi/2
    comp = level_component_enclosing(F4, 0.15, [0.0], step=0.01)
    vals = F4(comp.points)
    j = int(np.argmin(np.abs(np.angle(vals) - (-np.pi / 2))))
    start = solve_target(F4, 0.15 * np.exp(-1j * np.pi / 2), complex(comp.points[j]))
    arc = trace_gradient(F4, -np.pi / 2, start, 0.6, step=0.01)
    assert abs(abs(F4(arc.samples[-1])) - 0.6) < 1e-10
    dev = np.max(np.abs(np.angle(arc.f_values * np.exp(1j * np.pi / 2))))
    assert dev <= 1e-8


def test_trace_gradient_rejects_same_modulus():
    with pytest.raises(PreconditionError):
        trace_gradient(Z, 0.0, 1.0, 1.0)


def test_arg_change_along_closed_component():
    # component of Lev(f4, 0.6) around {0, -1} encloses 3 zeros with multiplicity
    comp = level_component_enclosing(F4, 0.6, [0.0, -1.0], step=0.01)
    k = count_preimages(F4, comp, 0.0)
    assert k == 3
    start = complex(comp.points[0])
    arc = trace_level(F4, 0.6, start, +1, ClosedLoop(), step=0.01)
    assert arg_change_along(arc) == pytest.approx(2 * np.pi * k, abs=1e-9)


def test_level_component_enclosing_examples():
    small = level_component_enclosing(F4, 0.15, [0.0], step=0.01)
    assert winding_number(small, 0.0) == 1
    assert winding_number(small, -1.0) == 0
    assert winding_number(small, -3.0) == 0

    big = level_component_enclosing(F4, 8.0, [0.0, -1.0, -3.0], step=0.01)
    for z in (0.0, -1.0, -3.0):
        assert winding_number(big, z) == 1

    circ = level_component_enclosing(Z, 1.0, [0.0], step=0.02)
    assert np.max(np.abs(np.abs(circ.points) - 1.0)) < 1e-8


def test_level_component_failure_names_blocking_value():
    with pytest.raises(TraceError, match="blocking critical value"):
        level_component_enclosing(F4, 0.6, [0.0], step=0.01)


def test_level_component_rejects_critical_modulus():
    cv = (3 * np.sqrt(3.0) - 4.5) / 2
    with pytest.raises(PreconditionError):
        level_component_enclosing(F4, cv, [0.0], step=0.01)


def test_cross_module_lift_vs_count(circle_T):
    # lift of a closed level loop equals 2*pi*(preimages of 0 inside)
    comp = level_component_enclosing(F4, 0.15, [0.0], step=0.01)
    start = complex(comp.points[0])
    arc = trace_level(F4, 0.15, start, +1, ClosedLoop(), step=0.01)
    inside = count_preimages(F4, comp, 0.0)
    assert arg_change_along(arc) == pytest.approx(2 * np.pi * inside, abs=1e-6)
