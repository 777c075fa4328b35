"""Both kernel paths must agree; the env flag must pick the numpy path."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from revsym import kernels

nb = kernels.numba_impl
npk = kernels.numpy_impl

pytestmark = pytest.mark.skipif(nb is None, reason="numba not installed")

images = st.integers(1, 40).flatmap(lambda n: st.permutations(range(n))).map(lambda p: np.array(p, dtype=np.int64))


@given(images)
def test_cycle_labels_agree(image):
    assert np.array_equal(nb.cycle_labels(image), npk.cycle_labels(image))


@given(images, st.integers(-50, 50))
def test_power_agree(image, k):
    assert np.array_equal(nb.power_image(image, k), npk.power_image(image, k))


@given(images)
def test_inverse_agree(image):
    inv = nb.inverse_image(image)
    assert np.array_equal(inv, npk.inverse_image(image))
    assert np.array_equal(image[inv], np.arange(image.size))


@given(images, st.data())
def test_distribution_kernels_agree(image, data):
    w = np.array(data.draw(st.lists(st.floats(0, 1), min_size=image.size, max_size=image.size)))
    if w.sum() == 0:
        w[0] = 1.0
    p = w / w.sum()
    assert nb.entropy_bits(p) == pytest.approx(npk.entropy_bits(p), abs=1e-12)
    assert np.array_equal(nb.push_forward(p, image), npk.push_forward(p, image))
    labels = np.array(data.draw(st.lists(st.integers(0, 3), min_size=image.size, max_size=image.size)))
    assert np.allclose(nb.project(p, labels, 4), npk.project(p, labels, 4), atol=1e-15)


@given(images, st.data())
def test_filter_kernels_agree(image, data):
    n = image.size
    labels = np.array(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)), dtype=np.int64)
    obs = np.array(data.draw(st.lists(st.integers(0, 2), min_size=1, max_size=6)), dtype=np.int64)
    prior = np.array(data.draw(st.lists(st.booleans(), min_size=n, max_size=n)))
    assert np.array_equal(
        nb.filter_sequence(image, labels, obs, prior), npk.filter_sequence(image, labels, obs, prior)
    )
    h = data.draw(st.integers(0, 6))
    assert np.array_equal(nb.reconstruct_all(image, labels, h), npk.reconstruct_all(image, labels, h))


@given(st.data())
def test_transfer_kernels_agree(data):
    n = data.draw(st.integers(1, 12))
    cells = np.array(data.draw(st.lists(st.integers(0, 100), min_size=n, max_size=n)), dtype=np.int64)
    e = data.draw(st.integers(0, 20))
    src = np.array(data.draw(st.lists(st.integers(0, n - 1), min_size=e, max_size=e)), dtype=np.int64)
    dst = np.array(data.draw(st.lists(st.integers(0, n - 1), min_size=e, max_size=e)), dtype=np.int64)
    amt = np.array(data.draw(st.lists(st.integers(0, 9), min_size=e, max_size=e)), dtype=np.int64)
    for a, b in zip(nb.apply_transfers(cells, src, dst, amt), npk.apply_transfers(cells, src, dst, amt)):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("flag, backend", [("1", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, backend):
    env = dict(os.environ, REVSYM_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from revsym import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == backend
