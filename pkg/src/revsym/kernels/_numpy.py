"""Vectorised numpy implementations of the hot loops.

Every function here has a loop twin in ``_numba.py`` with the same
signature and the same result (bit-for-bit for the integer kernels).
"""
import numpy as np


def inverse_image(image):
    inv = np.empty_like(image)
    inv[image] = np.arange(image.shape[0], dtype=image.dtype)
    return inv


def cycle_labels(image):
    """Label every index with the smallest index of its cycle.

    Pointer doubling: after ``ceil(log2 n)`` rounds each index has seen the
    minimum over its whole orbit.
    """
    n = image.shape[0]
    labels = np.arange(n, dtype=np.int64)
    jump = image.astype(np.int64)
    span = 1
    while span < n:
        labels = np.minimum(labels, labels[jump])
        jump = jump[jump]
        span *= 2
    return labels


def power_image(image, k):
    n = image.shape[0]
    result = np.arange(n, dtype=np.int64)
    if k < 0:
        base = inverse_image(image).astype(np.int64)
        k = -k
    else:
        base = image.astype(np.int64)
    while k:
        if k & 1:
            result = base[result]
        base = base[base]
        k >>= 1
    return result


def entropy_bits(probs):
    nz = probs[probs > 0]
    return float(-np.sum(nz * np.log2(nz)))


def push_forward(probs, image):
    out = np.empty_like(probs)
    out[image] = probs
    return out


def project(probs, labels, n_labels):
    return np.bincount(labels, weights=probs, minlength=n_labels)[:n_labels]


def filter_sequence(image, labels, observations, prior):
    """Candidate masks ``C_t = U(C_{t-1}) & readout^-1(obs_t)``.

    Returns a boolean array of shape ``(len(observations), n)``.
    """
    n = image.shape[0]
    masks = np.zeros((observations.shape[0], n), dtype=np.bool_)
    mask = prior & (labels == observations[0])
    masks[0] = mask
    for t in range(1, observations.shape[0]):
        moved = np.zeros(n, dtype=np.bool_)
        moved[image] = mask
        mask = moved & (labels == observations[t])
        masks[t] = mask
    return masks


def reconstruct_all(image, labels, horizon):
    """Final candidate-set size for every start, filtering its own closed run."""
    n = image.shape[0]
    inv = inverse_image(image)
    truth = np.arange(n)
    masks = labels[None, :] == labels[truth][:, None]
    for _ in range(horizon):
        truth = image[truth]
        masks = masks[:, inv] & (labels[None, :] == labels[truth][:, None])
    return masks.sum(axis=1).astype(np.int64)


def apply_transfers(cells, src, dst, amount):
    """Return ``(new_cells, inflow, outflow)`` for one simultaneous tick."""
    n = cells.shape[0]
    outflow = np.zeros(n, dtype=np.int64)
    inflow = np.zeros(n, dtype=np.int64)
    np.add.at(outflow, src, amount)
    np.add.at(inflow, dst, amount)
    return cells - outflow + inflow, inflow, outflow
