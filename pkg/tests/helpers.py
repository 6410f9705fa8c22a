"""Shared test utilities: random inputs and independent brute-force oracles."""

from __future__ import annotations

import itertools
import math

import numpy as np


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (m + m.conj().T)


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def phase_align(v: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Multiply v by the phase making <reference|v> real positive."""
    z = np.vdot(reference, v)
    return v * np.conj(z / abs(z))


def x_power_element(m: int, n: int, power: int) -> float:
    """<m| x^power |n> by expanding (a + a^dag)^power over operator strings.

    Walks every length-``power`` string of ladder operators applied to
    |n> right-to-left, fully independent of any matrix representation.
    """
    total = 0.0
    for ops in itertools.product("aA", repeat=power):
        level = n
        coefficient = 1.0
        for op in reversed(ops):
            if op == "a":
                if level == 0:
                    coefficient = 0.0
                    break
                coefficient *= math.sqrt(level)
                level -= 1
            else:
                coefficient *= math.sqrt(level + 1)
                level += 1
        if coefficient != 0.0 and level == m:
            total += coefficient
    return total / 2 ** (power / 2.0)
