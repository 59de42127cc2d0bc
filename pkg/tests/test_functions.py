import numpy as np
import pytest

from fsrlab import functions as fn


def test_f1_samples_small_grid():
    # (x - 1/2)^2 at x = 0, 1/4, 1/2, 3/4
    gf = fn.sample(fn.f1(), 1.0, 4)
    assert np.allclose(gf.samples, [0.25, 0.0625, 0.0, 0.0625])
    assert np.isclose(gf.A, np.sqrt(0.25 ** 2 + 2 * 0.0625 ** 2))


def test_f2_values():
    spec = fn.f2()
    x = np.array([0.25, 0.5])
    expected = (0.95 * np.exp(-1024 / 9 * (x - 0.5) ** 2)
                + 0.38 * np.exp(-256 * (x - 0.25) ** 2))
    assert np.allclose(fn.evaluate(spec, x), expected)


def test_f3_f4_are_2d():
    assert fn.f3().dims == 2 and fn.f4().dims == 2
    v = fn.evaluate(fn.f3(), 0.5, 0.5)
    assert np.isclose(v, 2.0)  # cos(0) + 1 at the center
    v4 = fn.evaluate(fn.f4(), 0.65, 0.65)
    assert np.isclose(v4, 1.0 + np.exp(-16 * 2 * 0.3 ** 2))


def test_sample_2d_orientation():
    gf = fn.sample(fn.f4(), 1.0, (4, 8))
    assert gf.samples.shape == (4, 8)
    x, y = gf.grid()
    assert np.isclose(gf.samples[1, 3], fn.evaluate(fn.f4(), x[1], y[3]))


def test_sample_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        fn.sample(fn.f1(), 1.0, 100)
    with pytest.raises(ValueError):
        fn.sample(fn.f1(), -1.0, 16)


def test_sample_dimension_mismatch():
    with pytest.raises(ValueError):
        fn.sample(fn.f3(), 1.0, (8,))


def test_custom_expression():
    spec = fn.FunctionSpec("custom-expression", (), "exp(-x) * cos(2*pi*x)")
    x = np.linspace(0, 1, 7)
    assert np.allclose(fn.evaluate(spec, x), np.exp(-x) * np.cos(2 * np.pi * x))


def test_custom_expression_2d_and_caret():
    spec = fn.FunctionSpec("custom-expression", (), "x^2 + y^2")
    assert spec.dims == 2
    assert np.isclose(fn.evaluate(spec, 0.3, 0.4), 0.25)


def test_custom_expression_rejects_unsafe_syntax():
    for bad in ("__import__('os')", "x.real", "lambda: 1", "open('f')", "z + 1"):
        with pytest.raises(ValueError):
            fn.evaluate(fn.FunctionSpec("custom-expression", (), bad), 0.5)


def test_spec_validation():
    with pytest.raises(ValueError):
        fn.FunctionSpec("no-such-kind")
    with pytest.raises(ValueError):
        fn.FunctionSpec("quadratic", (1.0, 2.0))
    with pytest.raises(ValueError):
        fn.FunctionSpec("custom-expression", ())


def test_grid_excludes_right_endpoint():
    gf = fn.sample(fn.f1(), 2.0, 8)
    x = gf.grid()[0]
    assert x[0] == 0.0 and np.isclose(x[-1], 2.0 * 7 / 8)
