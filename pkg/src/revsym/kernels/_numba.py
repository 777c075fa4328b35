"""Loop kernels compiled with numba; twins of ``_numpy.py``."""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def inverse_image(image):
    inv = np.empty_like(image)
    for k in range(image.shape[0]):
        inv[image[k]] = k
    return inv


@njit(cache=True)
def cycle_labels(image):
    n = image.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    for start in range(n):
        if labels[start] >= 0:
            continue
        # first unvisited index of an orbit is its smallest member
        k = start
        while labels[k] < 0:
            labels[k] = start
            k = image[k]
    return labels


@njit(cache=True)
def power_image(image, k):
    n = image.shape[0]
    labels = cycle_labels(image)
    # walk each cycle once, then index into it modulo its length
    result = np.empty(n, dtype=np.int64)
    cycle = np.empty(n, dtype=np.int64)
    for start in range(n):
        if labels[start] != start:
            continue
        length = 0
        j = start
        while True:
            cycle[length] = j
            length += 1
            j = image[j]
            if j == start:
                break
        for pos in range(length):
            result[cycle[pos]] = cycle[(pos + k) % length]
    return result


@njit(cache=True)
def entropy_bits(probs):
    total = 0.0
    for p in probs:
        if p > 0.0:
            total -= p * math.log2(p)
    return total


@njit(cache=True)
def push_forward(probs, image):
    out = np.empty_like(probs)
    for k in range(probs.shape[0]):
        out[image[k]] = probs[k]
    return out


@njit(cache=True)
def project(probs, labels, n_labels):
    out = np.zeros(n_labels)
    for k in range(probs.shape[0]):
        out[labels[k]] += probs[k]
    return out


@njit(cache=True)
def filter_sequence(image, labels, observations, prior):
    n = image.shape[0]
    steps = observations.shape[0]
    masks = np.zeros((steps, n), dtype=np.bool_)
    for x in range(n):
        masks[0, x] = prior[x] and labels[x] == observations[0]
    for t in range(1, steps):
        obs = observations[t]
        for x in range(n):
            if masks[t - 1, x]:
                y = image[x]
                masks[t, y] = labels[y] == obs
    return masks


@njit(cache=True)
def reconstruct_all(image, labels, horizon):
    n = image.shape[0]
    sizes = np.empty(n, dtype=np.int64)
    mask = np.empty(n, dtype=np.bool_)
    moved = np.empty(n, dtype=np.bool_)
    for start in range(n):
        obs = labels[start]
        for x in range(n):
            mask[x] = labels[x] == obs
        truth = start
        for _ in range(horizon):
            truth = image[truth]
            obs = labels[truth]
            moved[:] = False
            for x in range(n):
                if mask[x]:
                    y = image[x]
                    moved[y] = labels[y] == obs
            mask, moved = moved, mask
        count = 0
        for x in range(n):
            if mask[x]:
                count += 1
        sizes[start] = count
    return sizes


@njit(cache=True)
def apply_transfers(cells, src, dst, amount):
    n = cells.shape[0]
    inflow = np.zeros(n, dtype=np.int64)
    outflow = np.zeros(n, dtype=np.int64)
    for e in range(src.shape[0]):
        outflow[src[e]] += amount[e]
        inflow[dst[e]] += amount[e]
    new = np.empty(n, dtype=np.int64)
    for c in range(n):
        new[c] = cells[c] - outflow[c] + inflow[c]
    return new, inflow, outflow
