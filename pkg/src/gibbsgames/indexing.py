"""Mixed-radix indexing over joint actions.

Joint actions are flattened row-major: the player with the smallest index is
the most significant digit. Local tables over a scope use the same convention
restricted to the scope's (ascending) players, so a flat table index is
reproducible from the file format alone.
"""

import math

import numpy as np


def total_actions(sizes) -> int:
    return math.prod(sizes)


def strides(sizes) -> tuple[int, ...]:
    """C-order strides: stride[k] = product of sizes after k."""
    out = [1] * len(sizes)
    for k in range(len(sizes) - 2, -1, -1):
        out[k] = out[k + 1] * sizes[k + 1]
    return tuple(out)


def encode(actions, sizes) -> int:
    idx = 0
    for a, s in zip(actions, sizes):
        idx = idx * s + a
    return idx


def decode(index, sizes) -> tuple[int, ...]:
    out = [0] * len(sizes)
    for k in range(len(sizes) - 1, -1, -1):
        out[k] = index % sizes[k]
        index //= sizes[k]
    return tuple(out)


def scope_index_vector(sizes, scope) -> np.ndarray:
    """For every full joint index, the flat index into a table over `scope`.

    O(len(scope)) passes over an int64 vector of length prod(sizes); nothing
    of shape (total, n) is materialized.
    """
    full = np.arange(total_actions(sizes), dtype=np.int64)
    st = strides(sizes)
    out = np.zeros_like(full)
    for j in scope:
        out *= sizes[j]
        out += (full // st[j]) % sizes[j]
    return out


def coordinate_vector(sizes, j) -> np.ndarray:
    """Player j's action at every full joint index."""
    full = np.arange(total_actions(sizes), dtype=np.int64)
    st = strides(sizes)
    return (full // st[j]) % sizes[j]
