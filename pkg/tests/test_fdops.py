import numpy as np
import pytest

from lamsep.errors import NonMonotoneSequence, StencilOutOfDomain
from lamsep.fdops import (
    StencilSpec,
    fd_advection,
    fd_gradient,
    fd_laplacian,
    richardson,
)
from lamsep.field import FieldHandle, LaminarParams, laminar_field, profile_h_prime
from lamsep.geometry import ArcBoundary, local_frame


def make_field(fn):
    return FieldHandle(evaluator=lambda x: np.asarray(fn(x), dtype=float))


CONST = make_field(lambda x: np.broadcast_to([1.5, -2.0], x.shape).copy())
LINEAR = make_field(lambda x: np.stack([x[..., 1], -x[..., 0]], axis=-1))
HARMONIC = make_field(
    lambda x: np.stack([x[..., 0] ** 2 - x[..., 1] ** 2, -2 * x[..., 0] * x[..., 1]], axis=-1)
)
QUADRATIC = make_field(lambda x: np.stack([x[..., 1] ** 2, np.zeros_like(x[..., 0])], axis=-1))
ROTATION = make_field(lambda x: np.stack([-x[..., 1], x[..., 0]], axis=-1))


def test_stencil_validation():
    with pytest.raises(ValueError):
        StencilSpec(h=0.0)
    with pytest.raises(ValueError):
        StencilSpec(h=0.1, order=3)


def test_gradient_constant_field():
    assert np.allclose(fd_gradient(CONST, [0.3, 0.7], StencilSpec(h=1e-3)), 0.0, atol=1e-12)


def test_gradient_linear_exact():
    jac = fd_gradient(LINEAR, [0.2, -0.4], StencilSpec(h=1e-3))
    assert np.allclose(jac, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-12)


def test_gradient_order4_exact_on_quartics():
    quartic = make_field(lambda x: np.stack([x[..., 0] ** 4, x[..., 1] ** 4], axis=-1))
    jac = fd_gradient(quartic, [0.5, 0.5], StencilSpec(h=1e-2, order=4))
    assert jac[0, 0] == pytest.approx(4 * 0.5**3, abs=1e-11)
    assert jac[1, 1] == pytest.approx(4 * 0.5**3, abs=1e-11)


def test_gradient_matches_wall_shear():
    arc = ArcBoundary(1.0, 0.0, (0.0, 0.0), (0.0, 0.5))
    params = LaminarParams(1.0, 1.0, 1.0)
    field = laminar_field(arc, params)
    frame = local_frame(arc, 0.0)
    x = frame.to_world(0.0, 0.2)
    jac = fd_gradient(field, x, StencilSpec(h=1e-4, order=2))
    # dv1/dr at s=0 is the profile slope
    dv1_dr = frame.e1 @ jac @ frame.e2
    assert dv1_dr == pytest.approx(profile_h_prime(params, 0.2), abs=1e-6)


def test_laplacian_harmonic_field():
    lap = fd_laplacian(HARMONIC, [0.4, -0.3], StencilSpec(h=1e-3))
    assert np.linalg.norm(lap) <= 1e-10


def test_laplacian_quadratic_exact():
    lap = fd_laplacian(QUADRATIC, [0.7, 0.2], StencilSpec(h=1e-3))
    assert np.allclose(lap, [2.0, 0.0], atol=1e-9)


def test_laplacian_order_convergence():
    smooth = make_field(
        lambda x: np.stack([np.sin(x[..., 0]) * np.cos(x[..., 1]), np.cos(x[..., 0])], axis=-1)
    )
    x = np.array([0.3, 0.6])
    exact = np.array([-2 * np.sin(0.3) * np.cos(0.6), -np.cos(0.3)])
    for order in (2, 4):
        errs = [
            np.linalg.norm(fd_laplacian(smooth, x, StencilSpec(h=h, order=order)) - exact)
            for h in (0.1, 0.05, 0.025)
        ]
        observed = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all(np.abs(observed - order) < 0.3)


def test_advection_rigid_rotation():
    adv = fd_advection(ROTATION, [1.0, 0.0], StencilSpec(h=1e-4))
    assert np.allclose(adv, [-1.0, 0.0], atol=1e-8)


def test_guard_raises():
    guard = lambda p: p[1] > 0  # noqa: E731
    with pytest.raises(StencilOutOfDomain):
        fd_gradient(LINEAR, [0.0, 1e-5], StencilSpec(h=1e-3), guard=guard)


def test_richardson_exact_order2():
    samples = [(h, 3.7 + 2.0 * h**2) for h in (0.1, 0.05, 0.025)]
    res = richardson(samples, order=2)
    assert res.value == pytest.approx(3.7, abs=1e-12)
    assert res.observed_order == pytest.approx(2.0, abs=1e-6)


def test_richardson_order1():
    samples = [(h, -1.0 + 0.5 * h) for h in (0.2, 0.1, 0.05)]
    res = richardson(samples, order=1)
    assert res.value == pytest.approx(-1.0, abs=1e-12)
    assert res.observed_order == pytest.approx(1.0, abs=1e-6)


def test_richardson_theorem2_samples():
    from lamsep.theorems import theorem2_ratio

    params = LaminarParams(1.0, 1.0, 1.0)
    samples = [(r, float(theorem2_ratio(params, 1.0, r))) for r in (0.04, 0.02, 0.01)]
    res = richardson(samples, order=1)
    assert res.value == pytest.approx(-3.0, abs=2e-3)
    assert abs(res.observed_order - 1.0) < 0.2


def test_richardson_nonmonotone_raises():
    with pytest.raises(NonMonotoneSequence):
        richardson([(0.1, 1.0), (0.05, 1.5), (0.025, 3.0)], order=1)


def test_richardson_needs_two_samples():
    with pytest.raises(ValueError):
        richardson([(0.1, 1.0)], order=2)
    with pytest.raises(ValueError):
        richardson([(0.1, 1.0), (0.2, 1.1)], order=2)


def test_richardson_error_estimate_shrinks():
    samples = [(h, 1.0 + h + 0.3 * h**2) for h in (0.2, 0.1, 0.05, 0.025)]
    res = richardson(samples, order=1)
    assert res.error_estimate < 0.3 * 0.2**2
    assert res.levels_used == 4


def test_fd_never_touches_analytic_paths():
    def booby_trap(_x):
        raise AssertionError("analytic derivative path must not be called")

    field = FieldHandle(
        evaluator=lambda x: np.stack([x[..., 1] ** 2, x[..., 0] ** 2], axis=-1),
        jacobian=booby_trap,
        laplacian=booby_trap,
    )
    fd_gradient(field, [0.3, 0.4], StencilSpec(h=1e-3))
    fd_laplacian(field, [0.3, 0.4], StencilSpec(h=1e-3))
    fd_advection(field, [0.3, 0.4], StencilSpec(h=1e-3))


def test_dump_samples_csv(tmp_path):
    from lamsep.fdops import dump_samples_csv

    path = tmp_path / "samples.csv"
    dump_samples_csv([(0.1, 1.01), (0.05, 1.0025)], path, reference=1.0)
    lines = path.read_text().splitlines()
    assert lines[0] == "h,value,error"
    assert len(lines) == 3
