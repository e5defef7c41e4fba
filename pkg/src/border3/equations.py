"""Degree-4 commutation equations and slice-determinant cubics for 3x3x3 tensors.

The quartic system evaluates, for each of the three slicing directions, the
nine entries of  Z adj(X) Y - Y adj(X) Z  where (X, Y, Z) are the three slices
of that direction and adj is the classical adjugate.  Vanishing of all 27
values characterises border rank <= 3 for concise 3x3x3 tensors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._linalg import _norm, rank, span_dim
from .polytools import (
    bivariate_is_constant, gcd_bivariate, padd, pdiff, pmul, pclean,
)
from .tensor import multilinear_rank, slice_matrices

_COF_INDEX = ((1, 2), (0, 2), (0, 1))


def _cofactor_matrix(x):
    """cof[j][k] = (-1)^(j+k) * minor of x with row j, column k removed."""
    cof = [[0] * 3 for _ in range(3)]
    for j in range(3):
        r0, r1 = _COF_INDEX[j]
        for k in range(3):
            c0, c1 = _COF_INDEX[k]
            m = x[r0][c0] * x[r1][c1] - x[r0][c1] * x[r1][c0]
            cof[j][k] = m if (j + k) % 2 == 0 else -m
    return cof


def _commutator_block(x, y, z):
    """Nine values P[s][t] = sum_{j,k} cof(x)[j][k] (y[j][t] z[s][k] - y[s][k] z[j][t])."""
    cof = _cofactor_matrix(x)
    out = []
    for s in range(3):
        for t in range(3):
            acc = 0
            for j in range(3):
                cj = cof[j]
                yj = y[j]
                zj = z[j]
                for k in range(3):
                    c = cj[k]
                    if c:
                        acc += c * (yj[t] * z[s][k] - y[s][k] * zj[t])
            out.append(_norm(acc))
    return out


def strassen_equations(t):
    """All 27 quartic values, slicing along modes 0, 1, 2 in turn.

    Within each slicing direction the first slice plays the adjugate role and
    the nine entries are listed row-major.
    """
    if t.dims != (3, 3, 3):
        raise ValueError("the quartic system is defined for dims (3, 3, 3)")
    vals = []
    for mode in range(3):
        x, y, z = slice_matrices(t, mode)
        vals.extend(_commutator_block(x, y, z))
    return vals


# ---- symbolic version (for the Jacobian criterion) ----

_VARS27 = None


def _var(i, j, k):
    e = [0] * 27
    e[9 * i + 3 * j + k] = 1
    return {tuple(e): 1}


def strassen_polynomials():
    """The 27 quartics as polynomials in the 27 entries x_ijk (flat index 9i+3j+k)."""
    global _VARS27
    if _VARS27 is not None:
        return _VARS27
    polys = []
    for mode in range(3):
        def entry(slice_idx, r, c, _mode=mode):
            idx = [0, 0, 0]
            idx[_mode] = slice_idx
            other = [m for m in range(3) if m != _mode]
            idx[other[0]] = r
            idx[other[1]] = c
            return _var(*idx)

        x = [[entry(0, r, c) for c in range(3)] for r in range(3)]
        y = [[entry(1, r, c) for c in range(3)] for r in range(3)]
        z = [[entry(2, r, c) for c in range(3)] for r in range(3)]
        cof = [[None] * 3 for _ in range(3)]
        for j in range(3):
            r0, r1 = _COF_INDEX[j]
            for k in range(3):
                c0, c1 = _COF_INDEX[k]
                m = padd(pmul(x[r0][c0], x[r1][c1]),
                         {e: -c for e, c in pmul(x[r0][c1], x[r1][c0]).items()})
                cof[j][k] = m if (j + k) % 2 == 0 else {e: -c for e, c in m.items()}
        for s in range(3):
            for tt in range(3):
                p = {}
                for j in range(3):
                    for k in range(3):
                        term = padd(pmul(y[j][tt], z[s][k]),
                                    {e: -c for e, c in pmul(y[s][k], z[j][tt]).items()})
                        p = padd(p, pmul(cof[j][k], term))
                polys.append(pclean(p))
    _VARS27 = polys
    return polys


_GRADS27 = None


def _gradients():
    global _GRADS27
    if _GRADS27 is None:
        _GRADS27 = [[pdiff(p, v) for v in range(27)] for p in strassen_polynomials()]
    return _GRADS27


def strassen_jacobian_rank(t):
    """Rank of the 27x27 Jacobian of the quartic system at t."""
    if t.dims != (3, 3, 3):
        raise ValueError("the quartic system is defined for dims (3, 3, 3)")
    point = list(t.entries)
    grads = _gradients()
    jac = []
    for row in grads:
        jac.append([_poly_eval27(p, point) for p in row])
    return rank(jac)


def _poly_eval27(p, point):
    total = 0
    for e, c in p.items():
        v = c
        for idx, k in enumerate(e):
            if k:
                x = point[idx]
                for _ in range(k):
                    v *= x
                if not v:
                    break
        total += v
    return _norm(total)


# ---- slice determinant cubics ----

@dataclass(frozen=True)
class TernaryCubic:
    """Homogeneous cubic in (s, t, u): dict {(i,j,k): coeff} with i+j+k = 3."""
    coeffs: tuple  # sorted tuple of ((i,j,k), coeff)

    @staticmethod
    def from_dict(d):
        items = tuple(sorted((e, c) for e, c in d.items() if c))
        for e, _ in items:
            if len(e) != 3 or sum(e) != 3:
                raise ValueError(f"not a ternary cubic monomial: {e}")
        return TernaryCubic(items)

    def as_dict(self):
        return {e: c for e, c in self.coeffs}

    def is_zero(self):
        return not self.coeffs

    def evaluate(self, s, t, u):
        total = 0
        for (i, j, k), c in self.coeffs:
            total += c * s ** i * t ** j * u ** k
        return _norm(total)


def slice_det_cubic(t, mode):
    """det(s*S0 + t*S1 + u*S2) for the slices along a mode of a 3x3x3 tensor."""
    if t.dims != (3, 3, 3):
        raise ValueError("slice determinants are defined for dims (3, 3, 3)")
    s0, s1, s2 = slice_matrices(t, mode)
    # entry (r,c) is the linear form s0[r][c]*s + s1[r][c]*t + s2[r][c]*u
    lin = [[(s0[r][c], s1[r][c], s2[r][c]) for c in range(3)] for r in range(3)]
    out = {}
    for perm, sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                       ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        # product of three linear forms
        prod = {(0, 0, 0): sign}
        for r in range(3):
            f = lin[r][perm[r]]
            nxt = {}
            for e, c in prod.items():
                for v in range(3):
                    if f[v]:
                        e2 = list(e)
                        e2[v] += 1
                        e2 = tuple(e2)
                        nxt[e2] = nxt.get(e2, 0) + c * f[v]
            prod = nxt
        for e, c in prod.items():
            out[e] = out.get(e, 0) + c
    return TernaryCubic.from_dict({e: _norm(c) for e, c in out.items() if c})


class LinePattern(Enum):
    IDENTICALLY_ZERO = "identically_zero"
    TRIPLE_LINE = "triple_line"
    DOUBLE_LINE_PLUS_LINE = "double_line_plus_line"
    SQUAREFREE = "squarefree"


def _cubic_partials(d):
    out = []
    for var in range(3):
        p = {}
        for e, c in d.items():
            k = e[var]
            if k:
                e2 = list(e)
                e2[var] -= 1
                p[tuple(e2)] = k * c
        out.append(p)
    return out


def _is_cube_of_linear_form(d):
    """A nonzero cubic is a perfect cube iff its three partials span a line."""
    partials = _cubic_partials(d)
    monos = sorted({e for p in partials for e in p})
    rows = [[p.get(e, 0) for e in monos] for p in partials]
    return span_dim(rows) == 1


def _dehomogenize(d, var):
    """Drop one variable (set it to 1); remaining two keep their order."""
    keep = [v for v in range(3) if v != var]
    out = {}
    for e, c in d.items():
        key = (e[keep[0]], e[keep[1]])
        out[key] = out.get(key, 0) + c
    return pclean(out)


def _cubic_is_squarefree(d):
    """No repeated linear factor (cubics of interest split into lines)."""
    for var in range(3):
        if any(e[var] for e in d):
            break
    # multiplicity of the coordinate line {var = 0}
    mult = min(e[var] for e in d)
    if mult >= 2:
        return False
    red = {tuple(x - (mult if v == var else 0) for v, x in enumerate(e)): c
           for e, c in d.items()}
    f = _dehomogenize(red, var)
    g = f
    for w in (0, 1):
        fw = pclean({(e[0] - (1 if w == 0 else 0), e[1] - (1 if w == 1 else 0)): e[w] * c
                     for e, c in f.items() if e[w]})
        g = gcd_bivariate(g, fw)
    if not bivariate_is_constant(g):
        return False
    # a repeated factor could still pair the coordinate line with itself only,
    # which mult < 2 already excludes; remaining case: coordinate line times a
    # repeated factor was handled by the dehomogenised gcd above
    return True


def cubic_line_pattern(cubic):
    """Classify det-slice cubics: zero, a cube, a square times a line, or squarefree."""
    d = cubic.as_dict()
    if not d:
        return LinePattern.IDENTICALLY_ZERO
    if _is_cube_of_linear_form(d):
        return LinePattern.TRIPLE_LINE
    if _cubic_is_squarefree(d):
        return LinePattern.SQUAREFREE
    return LinePattern.DOUBLE_LINE_PLUS_LINE


def subspace_membership(t, bounds):
    """Whether every mode flattening rank is <= the given bound for that mode."""
    if len(bounds) != t.order:
        raise ValueError("one bound per mode required")
    return all(r <= b for r, b in zip(multilinear_rank(t), bounds))
