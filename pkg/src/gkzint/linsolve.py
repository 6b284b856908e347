"""Sparse exact nullspace over a field (rational functions or plain Fractions).

Gaussian elimination with Markowitz-style pivoting: the pivot minimizes
(row_nnz - 1) * (col_nnz - 1), ties broken by smallest coefficient size, which
keeps fill-in and expression swell low on the banded systems produced by
coefficient matching.
"""

from fractions import Fraction


def _default_size(c):
    if isinstance(c, (int, Fraction)):
        return abs(c.numerator).bit_length() + abs(c.denominator).bit_length() \
            if isinstance(c, Fraction) else abs(c).bit_length()
    try:
        return len(c.numer.terms()) + len(c.denom.terms())
    except AttributeError:
        return 1


def nullspace_markowitz(rows, nunknowns, ctx=None, size=_default_size):
    """Basis of the solution space of the homogeneous system given by `rows`
    (each a dict unknown-index -> coefficient).  Returns list of vectors
    (Python lists, zeros filled with 0)."""
    rows = [dict(r) for r in rows if r]
    pivots = {}
    while rows:
        colcnt = {}
        for r in rows:
            for u in r:
                colcnt[u] = colcnt.get(u, 0) + 1
        best = None
        for ri, r in enumerate(rows):
            rn = len(r) - 1
            for u, c in r.items():
                score = rn * (colcnt[u] - 1)
                key = (score, size(c))
                if best is None or key < best[0]:
                    best = (key, ri, u)
                    if key[0] == 0 and key[1] <= 2:
                        break
            else:
                continue
            break
        _, ri, piv = best
        row = rows.pop(ri)
        pc = row[piv]
        prow = {u: c / pc for u, c in row.items() if u != piv}
        newrows = []
        for r in rows:
            if piv in r:
                c = r.pop(piv)
                for u2, c2 in prow.items():
                    s = r.get(u2, 0) - c * c2
                    if s:
                        r[u2] = s
                    else:
                        r.pop(u2, None)
            if r:
                newrows.append(r)
        rows = newrows
        for u0, r0 in pivots.items():
            if piv in r0:
                c = r0.pop(piv)
                for u2, c2 in prow.items():
                    s = r0.get(u2, 0) - c * c2
                    if s:
                        r0[u2] = s
                    else:
                        r0.pop(u2, None)
        pivots[piv] = prow
    free = [u for u in range(nunknowns) if u not in pivots]
    basis = []
    for f in free:
        vec = [0] * nunknowns
        vec[f] = 1
        for u0, r0 in pivots.items():
            if f in r0:
                vec[u0] = -r0[f]
        basis.append(vec)
    return basis
