"""Independent brute-force references used to check the fast implementations.

None of these share code with the package beyond plain data types.
"""

from __future__ import annotations

import functools
import itertools
from collections import deque

import numpy as np


# --- edit scripts -----------------------------------------------------------


@functools.lru_cache(maxsize=None)
def edit_scripts(n: int, m: int) -> tuple[tuple[tuple, ...], ...]:
    """Every alignment of an n-sequence onto an m-sequence as a tuple of ops.

    Ops are ("D", i), ("I", j) or ("S", i, j).  Enumerated recursively from
    the front, without any cost-based pruning.
    """
    if n == 0 and m == 0:
        return ((),)
    out = []
    if n > 0:
        for rest in edit_scripts(n - 1, m):
            out.append((("D", n - 1),) + rest)
    if m > 0:
        for rest in edit_scripts(n, m - 1):
            out.append((("I", m - 1),) + rest)
    if n > 0 and m > 0:
        for rest in edit_scripts(n - 1, m - 1):
            out.append((("S", n - 1, m - 1),) + rest)
    return tuple(out)


def brute_force_edit_cost(xs, ys, dist, tau) -> float:
    """Minimum total cost over all edit scripts."""
    best = float("inf")
    for script in edit_scripts(len(xs), len(ys)):
        cost = 0.0
        for op in script:
            if op[0] == "D":
                cost += tau(xs[op[1]])
            elif op[0] == "I":
                cost += tau(ys[op[1]])
            else:
                x, y = xs[op[1]], ys[op[2]]
                cost += 0.0 if x == y else dist(x, y)
        best = min(best, cost)
    return best


@functools.lru_cache(maxsize=None)
def script_incidence(n: int, m: int) -> np.ndarray:
    """(scripts x ops) 0/1 matrix; op columns are n deletions, m insertions, n*m substitutions."""
    scripts = edit_scripts(n, m)
    mat = np.zeros((len(scripts), n + m + n * m))
    for r, script in enumerate(scripts):
        for op in script:
            if op[0] == "D":
                mat[r, op[1]] = 1
            elif op[0] == "I":
                mat[r, n + op[1]] = 1
            else:
                mat[r, n + m + op[1] * m + op[2]] = 1
    return mat


def brute_force_edit_costs_batch(pairs, dist, tau) -> list[float]:
    """Vectorised ``brute_force_edit_cost`` over many pairs of equal shape."""
    n, m = len(pairs[0][0]), len(pairs[0][1])
    inc = script_incidence(n, m)
    costs = np.zeros((len(pairs), n + m + n * m))
    for k, (xs, ys) in enumerate(pairs):
        costs[k, :n] = [tau(x) for x in xs]
        costs[k, n:n + m] = [tau(y) for y in ys]
        costs[k, n + m:] = [0.0 if x == y else dist(x, y) for x in xs for y in ys]
    return (costs @ inc.T).min(axis=1).tolist()


# --- soft matching ----------------------------------------------------------


def mutual_best_pairs(xs, ys, sim) -> set[tuple[str, str]]:
    """Pairs whose similarity is the unique maximum for both endpoints.

    Assumes no ties, which holds for continuous random similarity tables.
    """
    out = set()
    for x in xs:
        for y in ys:
            s = sim(x, y)
            if s <= 0:
                continue
            if all(sim(x, y2) < s for y2 in ys if y2 != y) and all(sim(x2, y) < s for x2 in xs if x2 != x):
                out.add((x, y))
    return out


# --- taxonomy ---------------------------------------------------------------


def shortest_depths(parents: dict[str, set[str]], root: str) -> dict[str, int]:
    """Depth (root = 1) by breadth-first search on the reversed edges."""
    children: dict[str, list[str]] = {}
    for c, ps in parents.items():
        for p in ps:
            children.setdefault(p, []).append(c)
    depth = {root: 1}
    queue = deque([root])
    while queue:
        n = queue.popleft()
        for c in children.get(n, []):
            if c not in depth:
                depth[c] = depth[n] + 1
                queue.append(c)
    return depth


def all_paths_up(parents, node):
    if not parents.get(node):
        return [[node]]
    return [[node] + p for par in parents[node] for p in all_paths_up(parents, par)]


# --- classification ---------------------------------------------------------


def f1_pair(gold, pred):
    """Macro-F1 from label lists with True meaning the positive class."""
    scores = []
    for cls in (True, False):
        tp = sum(g == cls and p == cls for g, p in zip(gold, pred))
        fp = sum(g != cls and p == cls for g, p in zip(gold, pred))
        fn = sum(g == cls and p != cls for g, p in zip(gold, pred))
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        scores.append(2 * prec * rec / (prec + rec) if prec + rec else 0.0)
    return sum(scores) / 2


def best_threshold_f1(values, gold, high_is_positive=True):
    """Best macro-F1 over every cut of the sorted values (plus all-in / all-out)."""
    cuts = sorted(set(values))
    probes = [min(cuts) - 1.0] + cuts
    best = 0.0
    for t in probes:
        if high_is_positive:
            pred = [v > t for v in values]
        else:
            pred = [v <= t for v in values]
        best = max(best, f1_pair(gold, pred))
    if not high_is_positive:
        best = max(best, f1_pair(gold, [False] * len(values)))
    return best


def depth1_best_accuracy(points, labels):
    """Best training accuracy of any single axis-aligned split with majority leaves."""
    best = 0.0
    n = len(points)
    for f in range(len(points[0])):
        for t in sorted({p[f] for p in points}) + [float("-inf")]:
            left = [l for p, l in zip(points, labels) if p[f] <= t]
            right = [l for p, l in zip(points, labels) if p[f] > t]
            correct = sum(max(side.count(True), side.count(False)) for side in (left, right))
            best = max(best, correct / n)
    return best


def rank_average(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def pearson(xs, ys):
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    return cov / (vx * vy) ** 0.5


def all_sequences(alphabet, max_len):
    return [s for n in range(max_len + 1) for s in itertools.product(alphabet, repeat=n)]
