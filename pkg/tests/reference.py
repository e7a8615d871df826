"""Plain-Python scalar references used as test oracles.

Written independently of the package kernels: lists of components, no numpy
in the recursion, Python's stable ``sorted`` for ordering.
"""
import math


def clamp(v, lo, hi):
    return max(lo, min(hi, v))


def gmm_step(comps, x, *, lr, prune, gate, vinit, vmin, vmax, boost, max_comp):
    """One observation on a list of ``[weight, mean, var]``; returns the new list."""
    comps = [list(c) for c in comps]
    if not comps:
        b = boost * x * x
        return [[1.0, x, clamp(vinit + b, vmin + b, vmax + b)]]
    inside = [(abs(x - c[1]) ** 2, i) for i, c in enumerate(comps)
              if (x - c[1]) ** 2 < gate * gate * c[2]]
    owner = min(inside)[1] if inside else None
    for i, c in enumerate(comps):
        c[0] = c[0] + lr * ((1.0 if i == owner else 0.0) - c[0]) - lr * prune
    if owner is not None:
        c = comps[owner]
        rho = lr / c[0]
        delta = x - c[1]
        c[1] = c[1] + rho * delta
        b = boost * c[1] ** 2
        c[2] = clamp(c[2] + rho * (delta * delta - c[2]), vmin + b, vmax + b)
    else:
        b = boost * x * x
        fresh = [lr, x, clamp(vinit + b, vmin + b, vmax + b)]
        if len(comps) < max_comp:
            comps.append(fresh)
        else:
            weakest = min(range(len(comps)), key=lambda i: (comps[i][0], i))
            comps[weakest] = fresh
    comps = [c for c in comps if c[0] > 0]
    total = sum(c[0] for c in comps)
    comps = [[c[0] / total, c[1], c[2]] for c in comps]
    return sorted(comps, key=lambda c: -c[0])


def gmm_density(comps, x, cf):
    total = 0.0
    cum = 0.0
    for w, mu, var in comps:
        total += w * math.exp(-(x - mu) ** 2 / (2 * var)) / math.sqrt(2 * math.pi * var)
        cum += w
        if cum > 1 - cf:
            break
    return total
