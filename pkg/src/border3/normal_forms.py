"""Normal forms for border rank <= 3 and cominuscule coordinate charts.

Conventions used throughout the package:

* factors (modes) are labelled 1..n in user-facing arguments;
* sigma2_point(n, J) is the tangent-type point with one term per j in J,
  putting the second basis vector in slot j and the first elsewhere;
* sigma3_point(kind, ...) builds the four limit-type families "i", "ii",
  "iii", "iv" (type iv takes the distinguished factor as an argument);
* orbit_representative(k), k = 34..39, returns the catalog representative of
  the six concise orbits at dims (3, 3, 3); their slice pencils
  s*S0 + t*S1 + u*S2 reproduce the catalog patterns verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
import math

from .tensor import Tensor, basis_tensor, zero_tensor

SIGMA3_KINDS = ("i", "ii", "iii", "iv")


def _unit_index(n, overrides):
    """Multi-index equal to 0 except mode->coord overrides (0-based modes)."""
    idx = [0] * n
    for m, c in overrides.items():
        idx[m] = c
    return tuple(idx)


def sigma2_point(n, J=None, dims=None):
    """Tangent-type point of border rank 2 with support J (1-based factors)."""
    if J is None:
        J = set(range(1, n + 1))
    J = sorted(set(J))
    if not J or J[0] < 1 or J[-1] > n:
        raise ValueError(f"J must be a nonempty subset of 1..{n}")
    if dims is None:
        dims = (2,) * n
    dims = tuple(dims)
    if len(dims) != n:
        raise ValueError("dims must have one entry per factor")
    for j in J:
        if dims[j - 1] < 2:
            raise ValueError(f"factor {j} needs dimension >= 2")
    t = zero_tensor(dims)
    for j in J:
        t = t + basis_tensor(dims, _unit_index(n, {j - 1: 1}))
    return t


def sigma3_point(kind, n=3, dims=None, factor=1):
    """Normal forms of the four border-rank-3 limit types (dims >= 3 per factor)."""
    if kind not in SIGMA3_KINDS:
        raise ValueError(f"kind must be one of {SIGMA3_KINDS}")
    if n < 3:
        raise ValueError("the border-rank-3 families need n >= 3")
    if dims is None:
        dims = (3,) * n
    dims = tuple(dims)
    if len(dims) != n or any(d < 3 for d in dims):
        raise ValueError("each factor needs dimension >= 3")
    if not 1 <= factor <= n:
        raise ValueError(f"factor must be in 1..{n}")
    f = factor - 1
    t = zero_tensor(dims)
    if kind == "i":
        for c in range(3):
            t = t + basis_tensor(dims, (c,) * n)
    elif kind == "ii":
        t = t + basis_tensor(dims, (2,) * n)
        for j in range(n):
            t = t + basis_tensor(dims, _unit_index(n, {j: 1}))
    elif kind == "iii":
        for j, k in combinations(range(n), 2):
            t = t + basis_tensor(dims, _unit_index(n, {j: 1, k: 1}))
        for j in range(n):
            t = t + basis_tensor(dims, _unit_index(n, {j: 2}))
    else:  # iv
        for j in range(n):
            if j != f:
                t = t + basis_tensor(dims, _unit_index(n, {f: 1, j: 1}))
        t = t + basis_tensor(dims, _unit_index(n, {f: 2}))
        for j in range(n):
            if j != f:
                t = t + basis_tensor(dims, _unit_index(n, {j: 2}))
    return t


# ---- the six concise orbits at dims (3, 3, 3) ----

def _t333(terms):
    t = zero_tensor((3, 3, 3))
    for idx in terms:
        t = t + basis_tensor((3, 3, 3), idx)
    return t


_ORBIT_TERMS = {
    34: [(0, 0, 1), (0, 1, 0), (1, 0, 0), (2, 2, 0), (2, 0, 2)],
    35: [(0, 0, 1), (0, 1, 0), (0, 2, 2), (1, 0, 0), (2, 2, 0)],
    36: [(0, 0, 1), (0, 1, 0), (0, 2, 2), (1, 0, 0), (2, 0, 2)],
    37: [(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0)],
    38: [(0, 0, 1), (0, 1, 0), (1, 0, 0), (2, 2, 2)],
    39: [(0, 0, 0), (1, 1, 1), (2, 2, 2)],
}

ORBIT_IDS = tuple(sorted(_ORBIT_TERMS))

ORBIT_INFO = {
    34: {"type": "iv", "factor": 1, "border_rank": 3, "rank": 5,
         "stabilizer_dim": 10, "orbit_dim": 16, "dim_offset": 11},
    35: {"type": "iv", "factor": 2, "border_rank": 3, "rank": 5,
         "stabilizer_dim": 10, "orbit_dim": 16, "dim_offset": 11},
    36: {"type": "iv", "factor": 3, "border_rank": 3, "rank": 5,
         "stabilizer_dim": 10, "orbit_dim": 16, "dim_offset": 11},
    37: {"type": "iii", "factor": None, "border_rank": 3, "rank": 5,
         "stabilizer_dim": 8, "orbit_dim": 18, "dim_offset": 9},
    38: {"type": "ii", "factor": None, "border_rank": 3, "rank": 4,
         "stabilizer_dim": 7, "orbit_dim": 19, "dim_offset": 8},
    39: {"type": "i", "factor": None, "border_rank": 3, "rank": 3,
         "stabilizer_dim": 6, "orbit_dim": 20, "dim_offset": 7},
}


def orbit_representative(orbit_id):
    if orbit_id not in _ORBIT_TERMS:
        raise ValueError(f"orbit_id must be one of {list(_ORBIT_TERMS)}")
    return _t333(_ORBIT_TERMS[orbit_id])


# ---- generic-ring determinants and Pfaffians ----

def _perms_with_signs(n):
    out = []

    def rec(prefix, rest, sign):
        if not rest:
            out.append((tuple(prefix), sign))
            return
        for i, x in enumerate(rest):
            rec(prefix + [x], rest[:i] + rest[i + 1:], sign * (-1) ** i)
    rec([], list(range(n)), 1)
    return out


def generic_det(m):
    """Determinant by permutation expansion; entries from any commutative ring."""
    n = len(m)
    if n == 0:
        return 1
    total = None
    for perm, sign in _perms_with_signs(n):
        prod = None
        for r, c in enumerate(perm):
            prod = m[r][c] if prod is None else prod * m[r][c]
        term = prod if sign > 0 else -1 * prod
        total = term if total is None else total + term
    return total


def generic_pfaffian(m):
    """Pfaffian of a skew matrix by division-free expansion along the first row."""
    n = len(m)
    if n % 2:
        raise ValueError("Pfaffian needs even size")
    if n == 0:
        return 1
    if n == 2:
        return m[0][1]
    total = None
    for j in range(1, n):
        keep = [i for i in range(n) if i not in (0, j)]
        sub = [[m[r][c] for c in keep] for r in keep]
        term = m[0][j] * generic_pfaffian(sub)
        if j % 2 == 0:
            term = -1 * term
        total = term if total is None else total + term
    return total


def pfaffian(m):
    """Pfaffian of a skew-symmetric matrix with exact scalar entries."""
    n = len(m)
    for i in range(n):
        if m[i][i] != 0:
            raise ValueError("matrix is not skew-symmetric")
        for j in range(i):
            if m[i][j] != -m[j][i]:
                raise ValueError("matrix is not skew-symmetric")
    if n % 2:
        return 0
    return generic_pfaffian(m)


def compound_matrix(m, s):
    """s-th compound: minors indexed by lex s-subsets of rows and columns."""
    rows = list(combinations(range(len(m)), s))
    cols = list(combinations(range(len(m[0])), s))
    return [[generic_det([[m[r][c] for c in cs] for r in rs]) for cs in cols]
            for rs in rows]


# ---- cominuscule coordinate models ----

@dataclass(frozen=True)
class CominusculeModel:
    """An affine chart of a cominuscule variety, coordinatised by minors.

    kind: "segre" (dims), "grassmann" (k, n), "lagrangian" (k), "spinor" (k).
    phi maps tangent coordinates to the full ambient coordinate vector; the
    degree-s component of phi is the s-th fundamental form evaluated on the
    diagonal, and its slots embed N_s into the ambient coordinates.
    """
    kind: str
    dims: tuple = None
    k: int = 0
    n: int = 0

    def __post_init__(self):
        if self.kind == "segre":
            if not self.dims or any(d < 1 for d in self.dims):
                raise ValueError("segre model needs factor dims")
        elif self.kind == "grassmann":
            if not 0 < self.k < self.n:
                raise ValueError("grassmann model needs 0 < k < n")
        elif self.kind in ("lagrangian", "spinor"):
            if self.k < 1:
                raise ValueError("model needs k >= 1")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    # -- coordinate bookkeeping --

    @property
    def tangent_dim(self):
        if self.kind == "segre":
            return sum(d - 1 for d in self.dims)
        if self.kind == "grassmann":
            return self.k * (self.n - self.k)
        if self.kind == "lagrangian":
            return self.k * (self.k + 1) // 2
        return self.k * (self.k - 1) // 2

    @property
    def base_degree(self):
        """Largest s with a nonzero s-th fundamental form."""
        if self.kind == "segre":
            return len(self.dims)
        if self.kind == "grassmann":
            return min(self.k, self.n - self.k)
        if self.kind == "lagrangian":
            return self.k
        return self.k // 2

    def ambient_slots(self):
        """Slot labels in ambient order, each tagged with its form degree s."""
        if self.kind == "segre":
            out = []
            for flat in range(math.prod(self.dims)):
                rem, idx = flat, []
                for d in reversed(self.dims):
                    rem, r = divmod(rem, d)
                    idx.append(r)
                idx = tuple(reversed(idx))
                out.append((sum(1 for x in idx if x), idx))
            return out
        if self.kind == "grassmann":
            out = []
            for s in range(self.k + 1):
                for rs in combinations(range(self.k), s):
                    for cs in combinations(range(self.n - self.k), s):
                        out.append((s, (rs, cs)))
            return out
        if self.kind == "lagrangian":
            out = []
            for s in range(self.k + 1):
                subs = list(combinations(range(self.k), s))
                for i, rs in enumerate(subs):
                    for cs in subs[i:]:
                        out.append((s, (rs, cs)))
            return out
        out = []
        for s in range(0, self.k + 1, 2):
            for sub in combinations(range(self.k), s):
                out.append((s // 2, sub))
        return out

    @property
    def ambient_dim(self):
        return len(self.ambient_slots())

    def slot_block(self, s):
        """Ambient indices of the degree-s slots (the N_s component)."""
        return [i for i, (deg, _) in enumerate(self.ambient_slots()) if deg == s]

    # -- tangent vector -> structured chart data --

    def _structure(self, v):
        if len(v) != self.tangent_dim:
            raise ValueError("tangent vector has wrong length")
        if self.kind == "segre":
            blocks, pos = [], 0
            for d in self.dims:
                blocks.append(list(v[pos:pos + d - 1]))
                pos += d - 1
            return blocks
        if self.kind == "grassmann":
            w = self.n - self.k
            return [list(v[r * w:(r + 1) * w]) for r in range(self.k)]
        if self.kind == "lagrangian":
            m = [[0] * self.k for _ in range(self.k)]
            pos = 0
            for i in range(self.k):
                for j in range(i, self.k):
                    m[i][j] = v[pos]
                    m[j][i] = v[pos]
                    pos += 1
            return m
        m = [[0] * self.k for _ in range(self.k)]
        pos = 0
        for i in range(self.k):
            for j in range(i + 1, self.k):
                m[i][j] = v[pos]
                m[j][i] = -1 * v[pos]
                pos += 1
        return m

    def phi(self, v):
        """Full chart map on a tangent vector with ring-element entries."""
        st = self._structure(v)
        out = []
        for s, label in self.ambient_slots():
            out.append(self._slot_value(st, s, label))
        return out

    def _slot_value(self, st, s, label):
        if self.kind == "segre":
            prod = None
            for mode, c in enumerate(label):
                if c:
                    x = st[mode][c - 1]
                    prod = x if prod is None else prod * x
            return 1 if prod is None else prod
        if self.kind in ("grassmann", "lagrangian"):
            rs, cs = label
            if not rs:
                return 1
            return generic_det([[st[r][c] for c in cs] for r in rs])
        sub = label
        if not sub:
            return 1
        return generic_pfaffian([[st[r][c] for c in sub] for r in sub])

    def fundamental_form_diag(self, s, v):
        """F_s(v^s) as {ambient_slot: value} on the degree-s block."""
        if s < 0:
            raise ValueError("form degree must be >= 0")
        if s > self.base_degree:
            return {}
        st = self._structure(v)
        out = {}
        for i, (deg, label) in enumerate(self.ambient_slots()):
            if deg == s:
                val = self._slot_value(st, s, label)
                if not isinstance(val, int) or val:
                    out[i] = val
        return out

    def base_point(self):
        """phi at the origin of the chart."""
        return [1 if deg == 0 else 0 for deg, _ in self.ambient_slots()]


def segre_model(dims):
    return CominusculeModel("segre", dims=tuple(dims))


def grassmann_model(k, n):
    return CominusculeModel("grassmann", k=k, n=n)


def lagrangian_model(k):
    return CominusculeModel("lagrangian", k=k)


def spinor_model(k):
    return CominusculeModel("spinor", k=k)


def segre_tensor_from_ambient(model, vec):
    """Reshape an ambient segre coordinate vector into a Tensor."""
    if model.kind != "segre":
        raise ValueError("ambient reshape is defined for segre models")
    return Tensor(model.dims, tuple(vec))
