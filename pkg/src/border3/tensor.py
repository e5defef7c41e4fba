"""Dense tensors with exact rational entries.

Entries are stored flat in row-major order; scalars are ``int`` or
``fractions.Fraction``.  All operations are exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from ._linalg import Echelon, _norm, mat_mul, rank, span_basis

MAX_ENTRIES = 10 ** 6


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid dims {dims}")
    if math.prod(dims) > MAX_ENTRIES:
        raise OverflowError(
            f"tensor with dims {dims} exceeds the {MAX_ENTRIES}-entry guard")
    return dims


def _strides(dims):
    st = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        st[i] = st[i + 1] * dims[i + 1]
    return tuple(st)


@dataclass(frozen=True)
class Tensor:
    dims: tuple
    entries: tuple  # flat, row-major

    def __post_init__(self):
        object.__setattr__(self, "dims", _check_dims(self.dims))
        if len(self.entries) != math.prod(self.dims):
            raise ValueError("entry count does not match dims")

    @property
    def order(self):
        return len(self.dims)

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        st = _strides(self.dims)
        flat = 0
        for i, (j, d) in enumerate(zip(idx, self.dims)):
            if not 0 <= j < d:
                raise IndexError(f"index {idx} out of range for dims {self.dims}")
            flat += j * st[i]
        return self.entries[flat]

    def is_zero(self):
        return not any(self.entries)

    def __add__(self, other):
        if self.dims != other.dims:
            raise ValueError("dimension mismatch")
        return Tensor(self.dims, tuple(_norm(a + b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if self.dims != other.dims:
            raise ValueError("dimension mismatch")
        return Tensor(self.dims, tuple(_norm(a - b) for a, b in zip(self.entries, other.entries)))

    def __rmul__(self, scalar):
        return Tensor(self.dims, tuple(_norm(scalar * a) for a in self.entries))

    def __neg__(self):
        return Tensor(self.dims, tuple(-a for a in self.entries))


def make_tensor(dims, entries):
    return Tensor(tuple(dims), tuple(entries))


def zero_tensor(dims):
    return Tensor(tuple(dims), (0,) * math.prod(tuple(dims)))


def basis_tensor(dims, idx):
    dims = tuple(dims)
    st = _strides(dims)
    flat = sum(j * s for j, s in zip(idx, st))
    e = [0] * math.prod(dims)
    e[flat] = 1
    return Tensor(dims, tuple(e))


def rank_one(vectors, coeff=1):
    """coeff * v_1 (x) v_2 (x) ... (x) v_n."""
    dims = tuple(len(v) for v in vectors)
    entries = [coeff]
    for v in vectors:
        entries = [_norm(a * x) for a in entries for x in v]
    return Tensor(dims, tuple(entries))


def flattening(t, mode):
    """Mode flattening: dims[mode] rows, complementary row-major columns."""
    dims = t.dims
    d = dims[mode]
    st = _strides(dims)
    other = [m for m in range(len(dims)) if m != mode]
    cols = math.prod(dims[m] for m in other) if other else 1
    rows = [[0] * cols for _ in range(d)]
    ost = [1] * len(other)
    for i in range(len(other) - 2, -1, -1):
        ost[i] = ost[i + 1] * dims[other[i + 1]]
    idx = [0] * len(dims)
    ent = t.entries
    for col in range(cols):
        rem = col
        base = 0
        for i, m in enumerate(other):
            q, rem = divmod(rem, ost[i])
            base += q * st[m]
        sm = st[mode]
        for r in range(d):
            rows[r][col] = ent[base + r * sm]
    return rows


def grouped_flattening(t, row_modes):
    """Flattening with an arbitrary subset of modes as rows."""
    row_modes = sorted(row_modes)
    col_modes = [m for m in range(t.order) if m not in row_modes]
    perm = row_modes + col_modes
    p = permute_modes(t, perm)
    nrows = math.prod(t.dims[m] for m in row_modes)
    ncols = math.prod(t.dims[m] for m in col_modes) if col_modes else 1
    ent = p.entries
    return [list(ent[r * ncols:(r + 1) * ncols]) for r in range(nrows)]


def multilinear_rank(t):
    return tuple(rank(flattening(t, m)) for m in range(t.order))


def permute_modes(t, perm):
    """New tensor s with s[i_perm[0], ..] = t[i_0, ..]: mode j of result is mode perm[j] of t."""
    perm = list(perm)
    dims = tuple(t.dims[p] for p in perm)
    st = _strides(t.dims)
    nst = [st[p] for p in perm]
    out = [0] * len(t.entries)
    ent = t.entries
    ost = _strides(dims)
    for flat in range(len(out)):
        rem = flat
        base = 0
        for i in range(len(dims)):
            q, rem = divmod(rem, ost[i])
            base += q * nst[i]
        out[flat] = ent[base]
    return Tensor(dims, tuple(out))


def apply_mode_map(t, matrix, mode):
    """Act on one mode by a matrix (rows = new dim, cols = dims[mode])."""
    d = t.dims[mode]
    if any(len(row) != d for row in matrix):
        raise ValueError("matrix shape does not match mode dimension")
    flat = flattening(t, mode)
    new = mat_mul(matrix, flat)
    ndim = len(matrix)
    dims = list(t.dims)
    dims[mode] = ndim
    # un-flatten: new[r][col] -> entries
    other = [m for m in range(len(t.dims)) if m != mode]
    out = zero_tensor(dims).entries
    out = list(out)
    st = _strides(tuple(dims))
    ost = [1] * len(other)
    for i in range(len(other) - 2, -1, -1):
        ost[i] = ost[i + 1] * dims[other[i + 1]]
    ncols = len(new[0]) if new else 0
    for col in range(ncols):
        rem = col
        base = 0
        for i, m in enumerate(other):
            q, rem = divmod(rem, ost[i])
            base += q * st[m]
        sm = st[mode]
        for r in range(ndim):
            out[base + r * sm] = new[r][col]
    return Tensor(tuple(dims), tuple(out))


@dataclass(frozen=True)
class GLTuple:
    """One invertible matrix per mode, acting factor-wise."""
    matrices: tuple

    def __post_init__(self):
        for m in self.matrices:
            if len(m) != len(m[0]):
                raise ValueError("GL matrices must be square")


def apply_gl(t, g):
    if len(g.matrices) != t.order:
        raise ValueError("GL tuple order does not match tensor order")
    out = t
    for mode, mat in enumerate(g.matrices):
        out = apply_mode_map(out, mat, mode)
    return out


def random_unimodular(n, rng, steps=None):
    """Integer matrix with determinant +-1 (product of elementary operations)."""
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    steps = steps if steps is not None else 3 * n
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            m[i][k] += c * m[j][k]
    if rng.random() < 0.5 and n > 1:
        m[0], m[1] = m[1], m[0]
    return m


def random_gl_tuple(dims, rng):
    return GLTuple(tuple(random_unimodular(d, rng) for d in dims))


def contract(t, mode, covector):
    """Pair one mode with a covector, dropping that mode."""
    if len(covector) != t.dims[mode]:
        raise ValueError("covector length does not match mode dimension")
    flat = flattening(t, mode)
    col = [0] * (len(flat[0]) if flat else 0)
    for c, row in zip(covector, flat):
        if c:
            for k, x in enumerate(row):
                col[k] = _norm(col[k] + c * x)
    dims = tuple(d for m, d in enumerate(t.dims) if m != mode)
    if not dims:
        dims = (1,)
    return Tensor(dims, tuple(col))


def slices(t, mode):
    """List of order-(n-1) slice tensors along a mode (as flat row vectors)."""
    return flattening(t, mode)


def slice_matrices(t, mode):
    """For 3-way tensors: the dims[mode] slices as matrices (rows/cols in mode order)."""
    if t.order != 3:
        raise ValueError("slice_matrices requires a 3-way tensor")
    other = [m for m in range(3) if m != mode]
    r, c = t.dims[other[0]], t.dims[other[1]]
    flat = flattening(t, mode)
    return [[row[i * c:(i + 1) * c] for i in range(r)] for row in flat]


def tensor_from_slices(mats):
    """Inverse of slice_matrices along mode 0."""
    a = len(mats)
    b = len(mats[0])
    c = len(mats[0][0])
    ent = []
    for m in mats:
        for row in m:
            ent.extend(row)
    return Tensor((a, b, c), tuple(ent))


def group_modes(t, partition):
    """Merge modes into blocks (a partition of range(order), blocks ordered)."""
    blocks = [list(b) for b in partition]
    flatmodes = [m for b in blocks for m in b]
    if sorted(flatmodes) != list(range(t.order)):
        raise ValueError("partition must cover each mode exactly once")
    p = permute_modes(t, flatmodes)
    dims = tuple(math.prod(t.dims[m] for m in b) for b in blocks)
    return Tensor(dims, p.entries)


@dataclass(frozen=True)
class ConciseCore:
    """T = (maps[0] (x) ... (x) maps[n-1]) . core with full-column-rank maps."""
    core: Tensor
    maps: tuple  # maps[i]: dims[i] x core.dims[i]

    def embed(self):
        out = self.core
        for mode, m in enumerate(self.maps):
            out = apply_mode_map(out, m, mode)
        return out


def concise_core(t):
    """Concise representative: restrict each mode to a pivot set of slices."""
    core = t
    maps = []
    for mode in range(t.order):
        flat = flattening(core, mode)
        ech = Echelon()
        pivots = []
        for i, row in enumerate(flat):
            if ech.add(row):
                pivots.append(i)
        if not pivots:  # zero tensor: keep a single index to stay well-formed
            pivots = [0]
        # coefficients expressing every slice on the pivot slices
        sub = Echelon()
        for i in pivots:
            sub.add(flat[i])
        u = []
        for i in range(core.dims[mode]):
            u.append(sub.coords_in(flat[i]))
        sel = [[1 if j == p else 0 for j in range(core.dims[mode])] for p in pivots]
        core = apply_mode_map(core, sel, mode)
        maps.append([list(row) for row in u])
    return ConciseCore(core, tuple(maps))


def squeeze(t):
    """Drop modes of dimension 1.  Returns (tensor, kept_mode_indices)."""
    kept = [m for m, d in enumerate(t.dims) if d > 1]
    if len(kept) == len(t.dims):
        return t, kept
    if not kept:
        return Tensor((1,), t.entries), []
    dims = tuple(t.dims[m] for m in kept)
    return Tensor(dims, t.entries), kept


def random_tensor(dims, rng, lo=-9, hi=9):
    n = math.prod(tuple(dims))
    return Tensor(tuple(dims), tuple(rng.randint(lo, hi) for _ in range(n)))


# ---- scalar and JSON conventions ----

def parse_scalar(s):
    """Accept int, 'p', or 'p/q' strings; exact."""
    if isinstance(s, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(s, int):
        return s
    if isinstance(s, Fraction):
        return _norm(s)
    if isinstance(s, str):
        return _norm(Fraction(s))
    raise ValueError(f"cannot parse scalar {s!r} exactly (floats are rejected)")


def scalar_str(x):
    return str(x)


def tensor_to_json(t):
    return {"dims": list(t.dims), "entries": [scalar_str(x) for x in t.entries]}


def tensor_from_json(obj):
    if not isinstance(obj, dict) or "dims" not in obj or "entries" not in obj:
        raise ValueError("tensor JSON must have 'dims' and 'entries'")
    dims = tuple(int(d) for d in obj["dims"])
    entries = tuple(parse_scalar(e) for e in obj["entries"])
    return Tensor(dims, entries)


def loads_tensor(text):
    return tensor_from_json(json.loads(text))


def dumps_tensor(t):
    return json.dumps(tensor_to_json(t))


def vectors_span_equal(vs, ws):
    return span_basis(list(vs)) == span_basis(list(ws))
