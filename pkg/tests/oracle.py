"""Brute-force reference computations by enumerating the full joint as a dict.

Deliberately shares no code with the package: plain Python floats, every
conditional obtained by summing matching cells.
"""

import itertools


def joint(model):
    p_u = [float(x) for x in model.p_u]
    p_e1 = [float(x) for x in model.p_e1_given_u]
    p_d1 = [[float(x) for x in row] for row in model.p_d1_given_eu]
    p_r1 = [[float(x) for x in row] for row in model.p_r1_given_eu]
    k = len(p_u)
    out = {}
    for d, e, u, r in itertools.product((0, 1), (0, 1), range(k), (0, 1)):
        pe = p_e1[u] if e else 1 - p_e1[u]
        pd = p_d1[e][u] if d else 1 - p_d1[e][u]
        pr = p_r1[e][u] if r else 1 - p_r1[e][u]
        out[d, e, u, r] = p_u[u] * pe * pd * pr
    return out


def prob(table, **fixed):
    names = ("d", "e", "u", "r")
    return sum(p for cell, p in table.items() if all(cell[names.index(k)] == v for k, v in fixed.items()))


def cond(table, target, given):
    return prob(table, **target, **given) / prob(table, **given)


def u_card(table):
    return max(cell[2] for cell in table) + 1


def potential(table, e):
    """p(D_e=1) by back-door adjustment over U, read off the joint."""
    return sum(cond(table, {"d": 1}, {"e": e, "u": u}) * prob(table, u=u) for u in range(u_card(table)))


def complete_case(table, e):
    k = u_card(table)
    return sum(cond(table, {"d": 1}, {"e": e, "u": u, "r": 0}) * cond(table, {"u": u}, {"r": 0}) for u in range(k))


def mi_weight(table, u):
    pr1 = prob(table, r=1)
    w = cond(table, {"u": u}, {"r": 0}) * prob(table, r=0)
    for d, e in itertools.product((0, 1), (0, 1)):
        if pr1 > 0:
            w += pr1 * cond(table, {"u": u}, {"d": d, "e": e, "r": 0}) * cond(table, {"d": d, "e": e}, {"r": 1})
    return w


def multiple_imputation(table, e):
    k = u_card(table)
    return sum(cond(table, {"d": 1}, {"e": e, "u": u, "r": 0}) * mi_weight(table, u) for u in range(k))


def _eq1_pieces(table, e):
    k = u_card(table)
    o = 1 - e
    cf_r0 = sum(cond(table, {"d": 1}, {"e": e, "u": u, "r": 0}) * cond(table, {"u": u}, {"e": o, "r": 0}) for u in range(k))
    known = prob(table, d=1, e=e) + cf_r0 * prob(table, r=0, e=o)
    return known, prob(table, r=1, e=o)


def po_bounds(table, e):
    k = u_card(table)
    strata = [cond(table, {"d": 1}, {"e": e, "u": u, "r": 0}) for u in range(k)]
    known, w = _eq1_pieces(table, e)
    return known + w * min(strata), min(1.0, known + w * max(strata))


def sa_po_bounds(table, e, alpha, beta):
    k = u_card(table)
    s = sum(cond(table, {"d": 1}, {"e": e, "u": u, "r": 0}) for u in range(k))
    known, w = _eq1_pieces(table, e)
    return known + w * alpha[1 - e] * s, min(1.0, known + w * beta[1 - e] * s)


def u_given_e_r1(table, e):
    return [cond(table, {"u": u}, {"e": e, "r": 1}) for u in range(u_card(table))]


def threshold(table, e):
    k = u_card(table)
    s = sum(cond(table, {"d": 1}, {"e": e, "u": u, "r": 0}) for u in range(k))
    return min(1.0, cond(table, {"d": 1}, {"e": e, "r": 1}) / s)
