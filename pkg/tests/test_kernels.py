"""Both kernel backends against each other and against numpy."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from povmforge import _kernels_py, kernels
from povmforge.finite_field import make_field

try:
    from povmforge import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels is not None:
    BACKENDS.append(pytest.param(_kernels, id="compiled"))


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("mod", BACKENDS)
@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 2), (2, 6)])
def test_gf_mul_agrees_with_field(mod, p, k):
    spec = make_field(p, k)
    for a in range(0, spec.q, max(1, spec.q // 16)):
        for b in range(0, spec.q, max(1, spec.q // 16)):
            assert mod.gf_mul(a, b, p, k, spec.modulus) == spec.mul(a, b)


@pytest.mark.parametrize("mod", BACKENDS)
def test_power_table(mod):
    spec = make_field(3, 4)
    t = mod.gf_power_table(spec.generator, spec.q - 1, 3, 4, spec.modulus)
    assert sorted(t.tolist()) == list(range(1, spec.q))


@pytest.mark.skipif(_kernels is None, reason="extension not built")
@given(st.integers(0, 3**6 - 1), st.integers(0, 3**6 - 1))
def test_backends_agree_on_products(a, b):
    spec = make_field(3, 6)
    assert _kernels.gf_mul(a, b, 3, 6, spec.modulus) == _kernels_py.gf_mul(a, b, 3, 6, spec.modulus)


@pytest.mark.parametrize("mod", BACKENDS)
@pytest.mark.parametrize("d", [1, 3, 10, 27])
def test_jacobi(mod, rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    a = (a + a.conj().T) / 2
    w, V, sweeps = mod.jacobi_eigh(a, 1e-15, 60)
    assert sweeps >= 0
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-11)
    assert np.allclose((V * w) @ V.conj().T, a, atol=1e-11)


@pytest.mark.parametrize("mod", BACKENDS)
def test_jacobi_reports_exhausted_budget(mod, rng):
    a = rng.standard_normal((12, 12))
    a = a + a.T
    assert mod.jacobi_eigh(a.astype(complex), 1e-15, 0)[2] == -1
