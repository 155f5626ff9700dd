"""Seeded random instance generators and independent oracles for the tests."""

from __future__ import annotations

import random
import string
from fractions import Fraction

from mvfix import AlphaFn, MultiMap, PointSet, Space, dist

LINE_SPACE = Space.interval(-100, 100)


def rand_fraction(rng: random.Random, lo=-8, hi=8, max_den=12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_point_tuple(rng, max_points=8, min_points=1):
    count = rng.randint(min_points, max_points)
    points = {rand_fraction(rng) for _ in range(count)}
    return tuple(sorted(points))


def rand_finite_point_set(rng, space=LINE_SPACE, max_points=8) -> PointSet:
    return PointSet.of_points(space, rand_point_tuple(rng, max_points))


def rand_interval_union(rng, space=LINE_SPACE, max_components=3) -> PointSet:
    pairs = []
    for _ in range(rng.randint(1, max_components)):
        a = rand_fraction(rng)
        b = a + abs(rand_fraction(rng, lo=0, hi=3))
        pairs.append((a, b))
    return PointSet.of_intervals(space, pairs)


def brute_hausdorff(space, aset: PointSet, bset: PointSet) -> Fraction:
    """O(|A||B|) max-min double sweep over finite point collections."""
    a_points = aset.points()
    b_points = bset.points()
    forward = max(min(dist(space, a, b) for b in b_points) for a in a_points)
    backward = max(min(dist(space, a, b) for a in a_points) for b in b_points)
    return max(forward, backward)


def sampled_directed_hausdorff(aset: PointSet, bset: PointSet, step=1e-4) -> float:
    """Dense float sampling of sup_{a in A} d(a, B); oracle only."""
    import numpy as np

    chunks = []
    for lo, hi in aset.intervals:
        n = max(2, int((float(hi) - float(lo)) / step) + 1)
        chunks.append(np.linspace(float(lo), float(hi), n))
    samples = np.concatenate(chunks)
    best = np.full(samples.shape, np.inf)
    for lo, hi in bset.intervals:
        lo_f, hi_f = float(lo), float(hi)
        d = np.where(samples < lo_f, lo_f - samples,
                     np.where(samples > hi_f, samples - hi_f, 0.0))
        best = np.minimum(best, d)
    return float(best.max())


# --- random finite-space instances -----------------------------------------

def rand_finite_space(rng: random.Random, max_points=6) -> Space:
    n = rng.randint(2, max_points)
    labels = list(string.ascii_lowercase[:n])
    if rng.random() < 0.5:
        # line-embedded metric
        coords = sorted(rng.sample(range(0, 40), n))
        distances = {}
        for i in range(n):
            for j in range(i + 1, n):
                distances[(labels[i], labels[j])] = Fraction(coords[j] - coords[i], 4)
    else:
        # scaled discrete metric (all triangles degenerate-safe)
        scale = Fraction(rng.randint(1, 8), rng.randint(1, 4))
        distances = {}
        for i in range(n):
            for j in range(i + 1, n):
                distances[(labels[i], labels[j])] = scale
    return Space.finite(distances)


def rand_table_map(rng: random.Random, space: Space, within=None) -> MultiMap:
    """Random set-valued table map; if `within` labels are given, points of
    `within` map inside it (an admissible-by-design shape)."""
    mapping = {}
    for label in space.labels:
        if within and label in within:
            pool = list(within)
        else:
            pool = list(space.labels)
        size = rng.randint(1, min(3, len(pool)))
        mapping[label] = rng.sample(pool, size)
    return MultiMap.from_table(space, mapping)


def rand_alpha(rng: random.Random, space: Space) -> AlphaFn:
    """Mix of constant-1, region-style tables, and fully random tables."""
    roll = rng.random()
    if roll < 0.3:
        return AlphaFn.constant(1)
    labels = space.labels
    entries = {}
    if roll < 0.65:
        region = rng.sample(labels, rng.randint(1, len(labels)))
        for a in region:
            for b in region:
                entries[(a, b)] = Fraction(1)
    else:
        values = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]
        for a in labels:
            for b in labels:
                entries[(a, b)] = rng.choice(values)
    return AlphaFn.from_table(space, entries)


def region_instance(rng: random.Random, max_points=6):
    """A finite space with a region-indicator-style alpha and a map that
    keeps the region invariant — triangular-admissible by construction."""
    space = rand_finite_space(rng, max_points)
    region = rng.sample(space.labels, rng.randint(1, len(space.labels)))
    tmap = rand_table_map(rng, space, within=region)
    entries = {(a, b): Fraction(1) for a in region for b in region}
    alpha = AlphaFn.from_table(space, entries)
    return space, tmap, alpha, tuple(sorted(region))


def valid_starts(space, tmap, alpha):
    """All (x0, x1) with x1 in T x0 and alpha(x0, x1) >= 1."""
    starts = []
    for x0 in space.labels:
        for x1 in tmap.image(x0).members:
            if alpha.gates(x0, x1):
                starts.append((x0, x1))
    return starts
