import os
import random
import subprocess
import sys

import pytest

from tropism_forge import _pykernels, kernels
from tropism_forge.cones import Cone
from tropism_forge.initial_solver import grid_equations
from tropism_forge.laurent import cyclic_system
from tropism_forge.linalg import Matrix, transform_from_tropisms
from tropism_forge.polytopes import initial_form_system
from tropism_forge.puiseux import reduce_initial_system

try:
    from tropism_forge import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def random_cases(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, 5)
        cons = [(tuple(rng.randint(-5, 5) for _ in range(n)), rng.random() < 0.25) for _ in range(rng.randint(1, 25))]
        lin = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        yield lin, cons


@needs_ext
def test_double_description_backends_agree():
    for lin, cons in random_cases(3, 150):
        assert _ckernels.dd_intersect(lin, [], [], 0, cons) == _pykernels.dd_intersect(lin, [], [], 0, cons)


@needs_ext
def test_grid_backends_agree_on_cyclic9_initial_system():
    u = (1, 1, -2, 1, 1, -2, 1, 1, -2)
    v = (0, 1, -1, 0, 1, -1, 0, 1, -1)
    w = tuple(a + b for a, b in zip(u, v))
    red = reduce_initial_system(initial_form_system(cyclic_system(9), [w]), transform_from_tropisms(Matrix([u, v])))
    order, eqs, phi, _ = grid_equations(red, 3)
    a = _pykernels.grid_search(order, red.nvars, eqs, phi, 0, 3)
    b = _ckernels.grid_search(order, red.nvars, eqs, phi, 0, 3)
    assert a == b and a
    assert _ckernels.grid_search(order, red.nvars, eqs, phi, 1, 3) == a[:1]


@needs_ext
def test_overflow_falls_back_to_python():
    big = 2**70
    lin = [(1, 0), (0, 1)]
    cons = [((big, 1), False), ((1, -big), False)]
    with pytest.raises(OverflowError):
        _ckernels.dd_intersect(lin, [], [], 0, cons)
    assert kernels.dd_intersect(lin, [], [], 0, cons) == _pykernels.dd_intersect(lin, [], [], 0, cons)


def test_cone_results_do_not_depend_on_backend():
    saved = kernels._impl
    try:
        outs = []
        for impl in [_pykernels] + ([_ckernels] if _ckernels else []):
            kernels._impl = impl
            c = Cone.from_generators([(1, 0, 0), (1, 1, 0), (0, 1, 1)])
            outs.append((c.canonical(), c.contains((2, 1, 0)), c.contains((0, 0, 1))))
        assert all(o == outs[0] for o in outs)
    finally:
        kernels._impl = saved


def _backend_in_subprocess(pure):
    env = dict(os.environ)
    env.pop("TROPISM_FORGE_PURE", None)
    if pure:
        env["TROPISM_FORGE_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", "from tropism_forge import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_environment_selects_python_fallback():
    assert _backend_in_subprocess(True) == "python"


@needs_ext
def test_default_backend_is_compiled():
    assert _backend_in_subprocess(False) == "cython"
