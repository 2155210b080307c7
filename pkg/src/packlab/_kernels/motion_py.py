"""Pure-numpy kernels for rigid-motion orbit counting.

Same contracts as the compiled module `_motion`; used whenever the
extension is unavailable or PACKLAB_BACKEND=python forces it.
"""

from __future__ import annotations

import numpy as np


def multiplicity_counts(g_ids, z_ids, e_idx, perms, add_table):
    """lambda[y] = #{(x, (g,z)) : g x + z = y} over the motion list."""
    n = add_table.shape[0]
    lam = np.zeros(n, dtype=np.int64)
    if len(e_idx) == 0 or len(g_ids) == 0:
        return lam
    for g in np.unique(g_ids):
        zs = z_ids[g_ids == g]
        moved = perms[g][e_idx]
        targets = add_table[np.ix_(zs, moved)]
        lam += np.bincount(targets.ravel(), minlength=n)
    return lam


def orbit_mask(g_ids, z_ids, e_idx, perms, add_table):
    """Boolean occupancy of the orbit union {g x + z}."""
    n = add_table.shape[0]
    mask = np.zeros(n, dtype=bool)
    if len(e_idx) == 0 or len(g_ids) == 0:
        return mask
    for g in np.unique(g_ids):
        zs = z_ids[g_ids == g]
        moved = perms[g][e_idx]
        mask[add_table[np.ix_(zs, moved)].ravel()] = True
    return mask
