from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from paleycover import _kernels
from paleycover.cospectral import random_odd_permutation
from paleycover.cover import sample_voltage
from paleycover.field import make_field

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("p,r,ell", [(5, 2, 3), (13, 1, 5), (3, 2, 3), (7, 2, 3)])
def test_theta_backends_agree(p, r, ell, rng):
    F = make_field(p, r)
    v = sample_voltage(F, ell, rng)
    sq = F.squares
    tr = np.ascontiguousarray(F.trace_products[:, sq])
    vs = np.ascontiguousarray(v.values[sq])
    assert np.array_equal(_kernels.theta_counts_numpy(tr, vs, p, ell), _kernels.theta_counts_numba(tr, vs, p, ell))


@needs_numba
@pytest.mark.parametrize("p,r", [(5, 2), (13, 1), (3, 2)])
def test_m_backends_agree(p, r, rng):
    F = make_field(p, r)
    fv = random_odd_permutation(F, rng)
    tp = np.ascontiguousarray(F.trace_products)
    assert np.array_equal(_kernels.m_counts_numpy(tp, fv, p), _kernels.m_counts_numba(tp, fv, p))


def test_counts_add_up(F25, alpha25):
    c = _kernels.theta_counts(F25.trace_products[:, F25.squares], alpha25.values[F25.squares], 5, 3)
    assert (c.sum(axis=(2, 3)) == 12).all()


def test_env_flag_selects_numpy():
    env = dict(os.environ, PALEYCOVER_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from paleycover import _kernels; print(_kernels.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_gives_same_example_verdicts():
    env = dict(os.environ, PALEYCOVER_DISABLE_NUMBA="1")
    code = (
        "from paleycover.example25 import verify_example25; "
        "print(all(verify_example25(3).values()))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "True"
