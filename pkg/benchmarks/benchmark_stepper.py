"""Benchmark the compiled stepping kernel against the NumPy fallback.

Times the master-equation right-hand side on the reference device (full
six-transition model, Fock cutoff 40, composite dimension 160) and projects
the cost of one sweep grid point (23k steps).

Usage: python benchmarks/benchmark_stepper.py [--steps N] [--cutoff N]
"""

import argparse
import time

import numpy as np

from catsum import _stepper_py
from catsum.core import SystemDims
from catsum.dynamics import EvolutionConfig, _generator_terms, _pack_collapse, _pack_csr_terms
from catsum.experiments import default_config
from catsum.model import DecoherenceParams, collapse_operators, hamiltonian_full
from catsum.protocol import initial_state

try:
    from catsum import _stepper

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def build_system(cutoff):
    cfg = default_config()
    dims = SystemDims(cutoff)
    device = cfg.device()
    h = hamiltonian_full(device, dims)
    dec = DecoherenceParams.from_timescale(20.0, 0.01)
    collapse = collapse_operators(dec, dims)
    lm = _pack_csr_terms(_generator_terms(h, collapse), dims.total_dim)
    sc = _pack_collapse(collapse)
    econf = EvolutionConfig.for_hamiltonian(h, device.dispersive_shifts().gate_time)
    steps_full, dt = econf.steps_and_dt()
    rho0 = initial_state(0.0, cfg.alpha, dims).to_density_matrix().data
    return dims, lm, sc, dt, steps_full, rho0


def time_backend(stepper_cls, dims, lm, sc, dt, rho0, steps):
    stepper = stepper_cls(dims.total_dim, *lm, *sc)
    rho = rho0.copy()
    stepper.run(rho, 0.0, dt, 10)  # warm-up
    tic = time.perf_counter()
    stepper.run(rho, 0.0, dt, steps)
    elapsed = time.perf_counter() - tic
    return elapsed, rho


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=300)
    parser.add_argument("--py-steps", type=int, default=30)
    parser.add_argument("--cutoff", type=int, default=40)
    args = parser.parse_args()

    dims, lm, sc, dt, steps_full, rho0 = build_system(args.cutoff)
    print(f"composite dimension {dims.total_dim}, dt = {dt * 1e6:.3f} ps, "
          f"{steps_full} steps per gate")

    results = {}
    if HAVE_COMPILED:
        elapsed, rho_c = time_backend(_stepper.LindbladStepper, dims, lm, sc, dt, rho0, args.steps)
        rate = args.steps / elapsed
        results["compiled"] = rate
        print(f"compiled: {rate:8.1f} steps/s   ({steps_full / rate:6.1f} s per grid point)")
    else:
        print("compiled: extension not built")

    elapsed, rho_p = time_backend(_stepper_py.LindbladStepper, dims, lm, sc, dt, rho0, args.py_steps)
    rate = args.py_steps / elapsed
    results["python"] = rate
    print(f"python:   {rate:8.1f} steps/s   ({steps_full / rate:6.1f} s per grid point)")

    if HAVE_COMPILED:
        print(f"speedup:  {results['compiled'] / results['python']:.1f}x")
        check_steps = min(args.py_steps, args.steps)
        _, a = time_backend(_stepper.LindbladStepper, dims, lm, sc, dt, rho0, check_steps)
        _, b = time_backend(_stepper_py.LindbladStepper, dims, lm, sc, dt, rho0, check_steps)
        print(f"agreement over {check_steps} steps: max |diff| = {np.max(np.abs(a - b)):.2e}")


if __name__ == "__main__":
    main()
