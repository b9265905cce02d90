"""Pure-numpy fallback for the coverage-integral kernel."""

import numpy as np

_CHUNK_ELEMS = 1 << 22


def utility_rows(weights, gains, i, sigma2, powers):
    """Coverage utility of station ``i`` (0-based) for each row of ``powers``.

    Computes ``sum_n w_n log2(1 + g_ni p_i / (sigma2 + sum_{j != i} g_nj p_j))``
    with the interference accumulated over ``j`` in ascending order.
    """
    weights = np.asarray(weights, dtype=float)
    gains = np.asarray(gains, dtype=float)
    powers = np.atleast_2d(np.asarray(powers, dtype=float))
    n_rows, n_sbs = powers.shape
    out = np.empty(n_rows)
    if weights.size == 0:
        out[:] = 0.0
        return out
    step = max(1, _CHUNK_ELEMS // weights.size)
    for start in range(0, n_rows, step):
        block = powers[start:start + step]
        interference = np.full((block.shape[0], weights.size), float(sigma2))
        for j in range(n_sbs):
            if j != i:
                interference = interference + gains[None, :, j] * block[:, j, None]
        signal = gains[None, :, i] * block[:, i, None]
        terms = weights[None, :] * np.log2(1.0 + signal / interference)
        out[start:start + step] = np.add.reduce(terms, axis=1)
    return out
