import numpy as np
import pytest

from helpers import random_instance
from pickroute import kernel
from pickroute import solver_single, solver_two
from pickroute.harness import generate_instance

needs_cython = pytest.mark.skipif("cython" not in kernel.BACKENDS,
                                  reason="compiled kernel not built")


def programs(seed):
    rng = np.random.default_rng(seed)
    blocks = 1 + seed % 2
    inst = random_instance(rng, blocks, int(rng.integers(1, 6)), int(rng.integers(0, 10)))
    if blocks == 1:
        yield from (solver_single.build_program(inst, v) for v in ("original", "modified"))
    else:
        yield from (solver_two.build_program(inst, v) for v in ("original", "mod1", "mod2"))


def run(program, backend):
    b = program.bundle
    return kernel.get_sweep(backend)(b.ptr, b.nxt, b.act, b.rank, program.stage_base,
                                     program.stage_ctx, program.cost, b.n_states,
                                     b.n_states - 2)


@needs_cython
@pytest.mark.parametrize("seed", range(30))
def test_backends_identical(seed):
    for program in programs(seed):
        py = run(program, "python")
        cy = run(program, "cython")
        for a, b in zip(py, cy):
            np.testing.assert_array_equal(np.asarray(a), np.asarray(b))


@needs_cython
def test_backends_identical_at_scale():
    inst = generate_instance(2, 30, 90, seed=7)
    for v in ("original", "mod1", "mod2"):
        program = solver_two.build_program(inst, v)
        py, cy = run(program, "python"), run(program, "cython")
        assert py[0].tolist() == cy[0].tolist()
        assert py[3].tolist() == cy[3].tolist()


def test_python_backend_always_available():
    assert "python" in kernel.BACKENDS
    assert kernel.BACKEND in kernel.BACKENDS
