"""Independent brute-force oracles used to verify the fast builders.

Everything here is deliberately naive: explicit nested loops over voxels,
neighbors, and assignments, with no code shared with the package. Shapes and
conventions mirror the documented matrix layouts so results compare exactly.
"""

import itertools
import math

import numpy as np

DIRS_13 = [
    (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (1, 1, 0), (1, -1, 0),
    (1, 0, 1), (1, 0, -1),
    (0, 1, 1), (0, 1, -1),
    (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
]

NEIGHBORS_26 = [
    (dx, dy, dz)
    for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
    if (dx, dy, dz) != (0, 0, 0)
]


def _in_grid(lvl, x, y, z):
    nz, ny, nx = lvl.shape
    return 0 <= x < nx and 0 <= y < ny and 0 <= z < nz


def glcm_counts_oracle(lvl, n_bins, distance=1, directions=None):
    """Symmetric merged-direction co-occurrence counts by pair enumeration."""
    dirs = DIRS_13 if directions is None else directions
    nz, ny, nx = lvl.shape
    counts = np.zeros((n_bins, n_bins), dtype=np.int64)
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                a = lvl[z, y, x]
                if a == 0:
                    continue
                for dx, dy, dz in dirs:
                    x2, y2, z2 = x + dx * distance, y + dy * distance, z + dz * distance
                    if not _in_grid(lvl, x2, y2, z2):
                        continue
                    b = lvl[z2, y2, x2]
                    if b == 0:
                        continue
                    counts[a - 1, b - 1] += 1
                    counts[b - 1, a - 1] += 1
    return counts


def glrlm_oracle(lvl, n_bins, directions=None):
    """Run counts by walking every maximal run in every direction."""
    dirs = DIRS_13 if directions is None else directions
    nz, ny, nx = lvl.shape
    runs = {}
    for dx, dy, dz in dirs:
        for z in range(nz):
            for y in range(ny):
                for x in range(nx):
                    v = lvl[z, y, x]
                    if v == 0:
                        continue
                    px, py, pz = x - dx, y - dy, z - dz
                    if _in_grid(lvl, px, py, pz) and lvl[pz, py, px] == v:
                        continue  # not a run start
                    length = 1
                    cx, cy, cz = x + dx, y + dy, z + dz
                    while _in_grid(lvl, cx, cy, cz) and lvl[cz, cy, cx] == v:
                        length += 1
                        cx, cy, cz = cx + dx, cy + dy, cz + dz
                    runs[(v, length)] = runs.get((v, length), 0) + 1
    max_len = max(l for _, l in runs)
    matrix = np.zeros((n_bins, max_len), dtype=np.int64)
    for (v, length), c in runs.items():
        matrix[v - 1, length - 1] = c
    return matrix


def glszm_oracle(lvl, n_bins):
    """Zone counts via flood fill over 26-connected equal-level components."""
    nz, ny, nx = lvl.shape
    seen = np.zeros(lvl.shape, dtype=bool)
    zones = []
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                if lvl[z, y, x] == 0 or seen[z, y, x]:
                    continue
                level = lvl[z, y, x]
                stack = [(x, y, z)]
                seen[z, y, x] = True
                size = 0
                while stack:
                    cx, cy, cz = stack.pop()
                    size += 1
                    for dx, dy, dz in NEIGHBORS_26:
                        qx, qy, qz = cx + dx, cy + dy, cz + dz
                        if (_in_grid(lvl, qx, qy, qz) and not seen[qz, qy, qx]
                                and lvl[qz, qy, qx] == level):
                            seen[qz, qy, qx] = True
                            stack.append((qx, qy, qz))
                zones.append((level, size))
    max_size = max(s for _, s in zones)
    matrix = np.zeros((n_bins, max_size), dtype=np.int64)
    for level, size in zones:
        matrix[level - 1, size - 1] += 1
    return matrix


def ngtdm_oracle(lvl, n_bins):
    """Per-level [n_i, p_i, s_i] by direct neighborhood averaging."""
    nz, ny, nx = lvl.shape
    n = np.zeros(n_bins)
    s = np.zeros(n_bins)
    total = 0
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                v = lvl[z, y, x]
                if v == 0:
                    continue
                total += 1
                n[v - 1] += 1
                neighbor_levels = []
                for dx, dy, dz in NEIGHBORS_26:
                    qx, qy, qz = x + dx, y + dy, z + dz
                    if _in_grid(lvl, qx, qy, qz) and lvl[qz, qy, qx] > 0:
                        neighbor_levels.append(lvl[qz, qy, qx])
                if neighbor_levels:
                    s[v - 1] += abs(v - sum(neighbor_levels) / len(neighbor_levels))
    p = n / total
    return np.column_stack([n, p, s])


def gldm_oracle(lvl, n_bins, alpha=0):
    """Dependence counts by per-voxel neighbor enumeration."""
    nz, ny, nx = lvl.shape
    matrix = np.zeros((n_bins, 27), dtype=np.int64)
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                v = lvl[z, y, x]
                if v == 0:
                    continue
                dep = 0
                for dx, dy, dz in NEIGHBORS_26:
                    qx, qy, qz = x + dx, y + dy, z + dz
                    if (_in_grid(lvl, qx, qy, qz) and lvl[qz, qy, qx] > 0
                            and abs(int(lvl[qz, qy, qx]) - int(v)) <= alpha):
                        dep += 1
                matrix[v - 1, dep] += 1
    return matrix


def mwu_by_pair_counting(x, y):
    """(U_x, U_y) by direct comparison of every (x_i, y_j) pair."""
    ux = 0.0
    for xi in x:
        for yj in y:
            if xi > yj:
                ux += 1.0
            elif xi == yj:
                ux += 0.5
    return ux, len(x) * len(y) - ux


def mwu_exact_p_oracle(x, y):
    """Two-sided exact p: share of assignments with min-U <= observed min-U."""
    combined = list(x) + list(y)
    n1 = len(x)
    ux_obs, uy_obs = mwu_by_pair_counting(x, y)
    u_obs = min(ux_obs, uy_obs)
    hits = 0
    total = 0
    for idx in itertools.combinations(range(len(combined)), n1):
        chosen = set(idx)
        gx = [combined[i] for i in idx]
        gy = [combined[i] for i in range(len(combined)) if i not in chosen]
        ux, uy = mwu_by_pair_counting(gx, gy)
        if min(ux, uy) <= u_obs + 1e-9:
            hits += 1
        total += 1
    return hits / total


def auroc_by_pair_counting(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    wins = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1.0
            elif p == q:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def pearson_oracle(a, b):
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    cov = sum((ai - ma) * (bi - mb) for ai, bi in zip(a, b))
    va = sum((ai - ma) ** 2 for ai in a)
    vb = sum((bi - mb) ** 2 for bi in b)
    if va == 0 or vb == 0:
        return 0.0
    return cov / math.sqrt(va * vb)


def random_level_grid(rng, shape=(4, 4, 4), n_levels=5, mask_prob=0.85):
    """Random quantized grid with a random (always nonempty) mask."""
    lvl = rng.integers(1, n_levels + 1, size=shape)
    mask = rng.random(shape) < mask_prob
    if not mask.any():
        mask[tuple(rng.integers(0, s) for s in shape)] = True
    return np.where(mask, lvl, 0).astype(np.int32)
