"""Reference implementations used only by tests.

Each oracle takes a different route from the code it checks: knot-list
interpolation instead of case analysis, exact fractions instead of floats,
recursion instead of an explicit post-order, enumeration instead of search.
"""
import itertools
import math
from fractions import Fraction


def interp(knots, x):
    """Piecewise-linear interpolation over (x, y) knots, 0 outside."""
    if x < knots[0][0] or x > knots[-1][0]:
        return 0.0
    for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
        if x0 <= x <= x1:
            if x1 == x0:
                return max(y0, y1)
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    return 0.0


def exact_weighted_mean(parts):
    num = sum(Fraction(mu) * Fraction(w) for mu, w in parts)
    den = sum(Fraction(w) for _, w in parts)
    return float(num / den)


def recursive_propagate(children, weights, leaf_values, node):
    """children: id -> list of ids; leaf_values: id -> value for leaves."""
    if node in leaf_values:
        return leaf_values[node]
    kids = children[node]
    total = sum(weights[k] for k in kids)
    return sum(weights[k] * recursive_propagate(children, weights, leaf_values, k) for k in kids) / total


def crisp_level(levels, value):
    """levels: list of (name, lo, hi, lo_incl, hi_incl); first containing level."""
    for name, lo, hi, li, hi_incl in levels:
        if (value > lo or (li and value == lo)) and (value < hi or (hi_incl and value == hi)):
            return name
    return None


def template_table(subs, rows):
    """Status and normalized score for every level assignment, by enumeration.

    subs: list of (name, weight, [level names]); rows: list of (status, levels).
    Level values are evenly spaced by first appearance in the rows.
    """
    rankings = []
    for i, (_, _, names) in enumerate(subs):
        order = []
        for _, lv in rows:
            if lv[i] not in order:
                order.append(lv[i])
        order += [n for n in names if n not in order]
        rankings.append(order)
    table = {}
    for combo in itertools.product(*(names for _, _, names in subs)):
        status = None
        for st, lv in rows:
            if tuple(lv) == combo:
                status = st
                break
        if status is None:
            implied = []
            for i, lvl in enumerate(combo):
                hits = [k for k, (_, lv) in enumerate(rows) if lv[i] == lvl]
                implied.append(hits[0] if hits else len(rows) - 1)
            status = rows[max(implied)][0]
        vals = []
        for i, lvl in enumerate(combo):
            n = len(rankings[i])
            vals.append(1.0 if n == 1 else (n - 1 - rankings[i].index(lvl)) / (n - 1))
        score = exact_weighted_mean([(v, w) for v, (_, w, _) in zip(vals, subs)])
        table[combo] = (status, score)
    return table


def nearest_rank(samples, p):
    ordered = sorted(samples)
    k = math.ceil(Fraction(p) * len(ordered))
    return ordered[max(k, 1) - 1]
