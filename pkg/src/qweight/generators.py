"""Seeded code generators: random dense CSS codes, sparse-X random codes,
and named small fixtures.

All randomness flows through numpy's default_rng seeded explicitly, so a
given (parameters, seed) pair reproduces the same code on any platform.
"""

from __future__ import annotations

import math
import re

import numpy as np

from qweight.css import CssCode
from qweight.gf2 import BitMatrix, kernel_basis, rank

_MAX_RESAMPLE = 64


def random_dense_css(n: int, m_x: int, m_z: int, seed: int) -> CssCode:
    """Uniform random CSS code: Hx uniform of full rank m_x, Hz rows drawn
    from the kernel of Hx, also full rank. Resamples a bounded number of
    times on rank deficiency so k = n - m_x - m_z exactly."""
    if m_x < 0 or m_z < 0 or m_x + m_z > n:
        raise ValueError(f"infeasible dimensions: m_x={m_x}, m_z={m_z}, n={n}")
    rng = np.random.default_rng(seed)

    hx_dense = np.zeros((0, n), dtype=np.uint8)
    if m_x:
        for _ in range(_MAX_RESAMPLE):
            hx_dense = rng.integers(0, 2, size=(m_x, n), dtype=np.uint8)
            if rank(BitMatrix.from_dense(hx_dense)) == m_x:
                break
        else:
            raise ValueError(f"could not sample a full-rank {m_x}x{n} matrix")
    hx = BitMatrix.from_dense(hx_dense)

    hz_dense = np.zeros((0, n), dtype=np.uint8)
    if m_z:
        kb = kernel_basis(hx).to_dense()
        for _ in range(_MAX_RESAMPLE):
            coeffs = rng.integers(0, 2, size=(m_z, kb.shape[0]), dtype=np.uint8)
            hz_dense = (coeffs @ kb) % 2
            if rank(BitMatrix.from_dense(hz_dense)) == m_z:
                break
        else:
            raise ValueError(f"could not sample a full-rank {m_z}-row Z side")
    return CssCode(hx, BitMatrix.from_dense(hz_dense), label=f"dense-{n}-{m_x}-{m_z}-s{seed}")


def hastings_sparse_x(n: int, beta: float, seed: int) -> CssCode:
    """Sparse-X random code: n/2 X-rows with i.i.d. Bernoulli(delta/n)
    entries where delta = beta * ln(n), and n/4 Z-rows drawn uniformly
    from the kernel of Hx."""
    if n < 8:
        raise ValueError(f"n must be at least 8, got {n}")
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    rng = np.random.default_rng(seed)
    delta = beta * math.log(n)
    p = min(1.0, delta / n)
    hx_dense = (rng.random(size=(n // 2, n)) < p).astype(np.uint8)
    hx = BitMatrix.from_dense(hx_dense)
    kb = kernel_basis(hx).to_dense()
    m_z = n // 4
    if kb.shape[0]:
        coeffs = rng.integers(0, 2, size=(m_z, kb.shape[0]), dtype=np.uint8)
        hz_dense = (coeffs @ kb) % 2
    else:
        hz_dense = np.zeros((m_z, n), dtype=np.uint8)
    return CssCode(hx, BitMatrix.from_dense(hz_dense), label=f"hastings-{n}-b{beta}-s{seed}")


def _hypergraph_product(h1: np.ndarray, h2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m1, n1 = h1.shape
    m2, n2 = h2.shape
    hx = np.hstack([
        np.kron(h1, np.eye(n2, dtype=np.uint8)),
        np.kron(np.eye(m1, dtype=np.uint8), h2.T),
    ]) % 2
    hz = np.hstack([
        np.kron(np.eye(n1, dtype=np.uint8), h2),
        np.kron(h1.T, np.eye(m2, dtype=np.uint8)),
    ]) % 2
    return hx.astype(np.uint8), hz.astype(np.uint8)


def _cycle_matrix(length: int) -> np.ndarray:
    h = np.zeros((length, length), dtype=np.uint8)
    for i in range(length):
        h[i, i] = 1
        h[i, (i + 1) % length] = 1
    return h


def _path_matrix(length: int) -> np.ndarray:
    h = np.zeros((length - 1, length), dtype=np.uint8)
    for i in range(length - 1):
        h[i, i] = 1
        h[i, i + 1] = 1
    return h


_STEANE_H = [
    [0, 1, 1, 1, 1, 0, 0],
    [1, 0, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 0, 1],
]


def standard_code(name: str) -> CssCode:
    """Named fixtures: steane, four_qubit, toric(L), repetition_product(L)."""
    if name == "steane":
        h = BitMatrix.from_dense(_STEANE_H)
        return CssCode(h, h, label="steane")
    if name == "four_qubit":
        h = BitMatrix.from_dense([[1, 1, 1, 1]])
        return CssCode(h, h, label="four_qubit")
    m = re.fullmatch(r"(toric|repetition_product)\((\d+)\)", name)
    if m:
        kind, length = m.group(1), int(m.group(2))
        if length < 2:
            raise ValueError(f"{kind} needs side length >= 2, got {length}")
        base = _cycle_matrix(length) if kind == "toric" else _path_matrix(length)
        hx, hz = _hypergraph_product(base, base)
        return CssCode(BitMatrix.from_dense(hx), BitMatrix.from_dense(hz), label=name)
    raise ValueError(f"unknown code name {name!r}")
