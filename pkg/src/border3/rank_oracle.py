"""Independent rank verification by search and certificate.

Three oracles that share no logic with the structural classifier: an
exhaustive finite-field search for the exact rank of a small tensor, explicit
rational decompositions certifying upper bounds, and a bounded-degree
ideal-membership solver producing multiplier certificates for lower-bound
arguments.  Everything is exact; the finite-field search is deterministic,
with candidates ordered sparsest-first and subsets visited in colex order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from ._linalg import Echelon, _norm
from .normal_forms import (_ORBIT_TERMS, ORBIT_IDS, orbit_representative,
                           sigma2_point, sigma3_point)
from .polytools import monomial, padd, pis_zero, pmul, psub
from .tensor import multilinear_rank, rank_one, zero_tensor

_PRIMES = (2, 3, 5)


class SearchSpaceError(ValueError):
    """The exhaustive search would exceed its candidate budget."""


# -- finite-field plumbing ---------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """Residue modulo a small search prime."""

    value: int
    prime: int

    def __post_init__(self):
        if self.prime not in _PRIMES:
            raise ValueError(f"search primes are {_PRIMES}")
        object.__setattr__(self, "value", self.value % self.prime)

    @classmethod
    def from_rational(cls, x, prime):
        x = Fraction(x)
        if x.denominator % prime == 0:
            raise ValueError(f"denominator of {x} vanishes modulo {prime}")
        num = x.numerator % prime
        den = x.denominator % prime
        return cls(num * pow(den, prime - 2, prime), prime)

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.prime != self.prime:
            raise ValueError("mixed primes in field arithmetic")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.value + other.value, self.prime)

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.value - other.value, self.prime)

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.value * other.value, self.prime)

    def __neg__(self):
        return FieldElement(-self.value, self.prime)

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, self.prime - 2, self.prime), self.prime)

    def __bool__(self):
        return self.value != 0


def _entries_mod(t, q):
    return [FieldElement.from_rational(x, q).value for x in t.entries]


def _gf_row_reduce(rows, q):
    """Row-reduce over GF(q); returns (rank, reduced rows, transform).

    transform is an invertible matrix with transform @ input = reduced, the
    first rank rows of which are the echelon basis and the rest zero.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    work = [list(r) + [1 if i == j else 0 for j in range(m)]
            for i, r in enumerate(rows)]
    piv = 0
    for col in range(ncols):
        hit = next((i for i in range(piv, m) if work[i][col] % q), None)
        if hit is None:
            continue
        work[piv], work[hit] = work[hit], work[piv]
        inv = pow(work[piv][col], q - 2, q)
        work[piv] = [x * inv % q for x in work[piv]]
        for i in range(m):
            if i != piv and work[i][col] % q:
                f = work[i][col]
                work[i] = [(a - f * b) % q for a, b in zip(work[i], work[piv])]
        piv += 1
        if piv == m:
            break
    reduced = [r[:ncols] for r in work]
    transform = [r[ncols:] for r in work]
    return piv, reduced, transform


def _flatten_mode(flat, dims, mode):
    rest = dims[:mode] + dims[mode + 1:]
    width = math.prod(rest) if rest else 1
    rows = [[0] * width for _ in range(dims[mode])]
    for pos, idx in enumerate(product(*map(range, dims))):
        col = 0
        for c, d in zip(idx[:mode] + idx[mode + 1:], rest):
            col = col * d + c
        rows[idx[mode]][col] = flat[pos]
    return rows


def _unflatten_mode(rows, dims, mode):
    rest = dims[:mode] + dims[mode + 1:]
    flat = [0] * math.prod(dims)
    for pos, idx in enumerate(product(*map(range, dims))):
        col = 0
        for c, d in zip(idx[:mode] + idx[mode + 1:], rest):
            col = col * d + c
        flat[pos] = rows[idx[mode]][col]
    return flat


def _gf_concise_core(flat, dims, q):
    """Concise core of a mod-q tensor: invertible ops per mode, zero slices cut."""
    dims = list(dims)
    for mode in range(len(dims)):
        rows = _flatten_mode(flat, tuple(dims), mode)
        r, reduced, _ = _gf_row_reduce(rows, q)
        if r == dims[mode]:
            continue
        flat = _unflatten_mode(reduced, tuple(dims), mode)
        keep = []
        for i, idx in enumerate(product(*map(range, dims))):
            if idx[mode] < r:
                keep.append(flat[i])
        dims[mode] = max(r, 1) if r else 0
        if r == 0:
            return [], tuple(0 for _ in dims)
        flat = keep
    return flat, tuple(dims)


def _projective_vectors(d, q):
    """All length-d vectors over GF(q) with first nonzero coordinate 1."""
    out = []
    for lead in range(d):
        for tail in product(range(q), repeat=d - 1 - lead):
            out.append((0,) * lead + (1,) + tail)
    return out


def _rank_one_candidates(dims, q):
    """Outer products of projective vectors per mode, sparsest first."""
    grids = [_projective_vectors(d, q) for d in dims]
    cands = []
    for vecs in product(*grids):
        entry = [1]
        for v in vecs:
            entry = [(a * b) % q for a in entry for b in v]
        cands.append(tuple(entry))
    cands.sort(key=lambda e: (sum(1 for x in e if x), e))
    return cands


class _GFSpan:
    """Incremental echelon span over GF(q) with pop-undo."""

    def __init__(self, q):
        self.q = q
        self.rows = []
        self.pivots = []

    @property
    def dim(self):
        return len(self.rows)

    def _reduce(self, v):
        q = self.q
        v = [x % q for x in v]
        for row, p in zip(self.rows, self.pivots):
            f = v[p]
            if f:
                v = [(a - f * b) % q for a, b in zip(v, row)]
        return v

    def add(self, v):
        v = self._reduce(v)
        for c, x in enumerate(v):
            if x:
                inv = pow(x, self.q - 2, self.q)
                self.rows.append([a * inv % self.q for a in v])
                self.pivots.append(c)
                return True
        return False

    def pop(self):
        self.rows.pop()
        self.pivots.pop()


def _span_search(slice_rows, cands, r, q):
    """First (in colex order) r-subset of cands whose span contains the rows."""
    chosen_span = _GFSpan(q)
    joint_span = _GFSpan(q)
    for row in slice_rows:
        joint_span.add(row)
    target = joint_span.dim
    if target > r:
        return None
    found = []

    def rec(bound, slots):
        for i in range(slots - 1, bound):
            cand = cands[i]
            if not chosen_span.add(cand):
                continue  # no span growth: a smaller subset would already win
            grew = joint_span.add(cand)
            needed = joint_span.dim - chosen_span.dim
            if needed == 0:
                found.append(i)
                return True
            if needed <= slots - 1 and slots > 1:
                found.append(i)
                if rec(i, slots - 1):
                    return True
                found.pop()
            chosen_span.pop()
            if grew:
                joint_span.pop()
        return False

    if target == 0:
        return ()
    return tuple(sorted(found)) if rec(len(cands), r) else None


@dataclass(frozen=True)
class GreaterThan:
    """Search verdict: the rank exceeds the stated bound."""

    bound: int


def _prepare_span_search(t, q):
    """Reduce to a concise core; returns (decided rank, None) or (None, ctx)."""
    flat = _entries_mod(t, q)
    if not any(flat):
        return 0, None
    flat, dims = _gf_concise_core(flat, t.dims, q)
    # dropping singleton modes leaves the row-major data untouched
    dims = tuple(d for d in dims if d > 1)
    if len(dims) <= 1:
        return 1, None
    if len(dims) == 2:
        return dims[0], None  # a concise matrix is square and invertible
    if any(d > 3 for d in dims):
        raise SearchSpaceError(
            f"concise core dims {dims} too large for exhaustive search")
    # slice along the largest mode so candidates range over the smaller ones
    mode0 = max(range(len(dims)), key=lambda m: dims[m])
    rest = dims[:mode0] + dims[mode0 + 1:]
    n_cands = 1
    for d in rest:
        n_cands *= (q ** d - 1) // (q - 1)
    if n_cands > 2500:
        raise SearchSpaceError(
            f"{n_cands} rank-one candidates exceed the search budget")
    slice_rows = _flatten_mode(flat, dims, mode0)
    return None, (slice_rows, _rank_one_candidates(rest, q), max(dims))


def _search_job(payload):
    slice_rows, cands, r, q = payload
    return r, _span_search(slice_rows, cands, r, q) is not None


def rank_over_field(t, q, r_max=6, jobs=1):
    """Exact rank of a small tensor over GF(q) by exhaustive span search.

    The rank of T equals the smallest number of rank-one tensors (in the
    modes past the first) whose span contains every mode-0 slice of T.
    Candidates are enumerated as outer products of projective vectors and
    subsets are visited in colex order with pruning by partial-span
    dimension.  Returns GreaterThan(r_max) when no subset of size <= r_max
    works.  With jobs > 1 the candidate sizes are searched in parallel
    worker processes.
    """
    if q not in _PRIMES:
        raise ValueError(f"search primes are {_PRIMES}")
    if not isinstance(r_max, int) or not 1 <= r_max <= 6:
        raise ValueError("r_max must be an integer between 1 and 6")
    if not isinstance(jobs, int) or jobs < 1:
        raise ValueError("jobs must be a positive integer")
    decided, ctx = _prepare_span_search(t, q)
    if ctx is None:
        return decided
    slice_rows, cands, low = ctx
    sizes = range(low, r_max + 1)
    if jobs > 1 and len(sizes) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(sizes))) as pool:
            hits = dict(pool.map(
                _search_job, [(slice_rows, cands, r, q) for r in sizes]))
        for r in sizes:
            if hits[r]:
                return r
        return GreaterThan(r_max)
    for r in sizes:
        if _span_search(slice_rows, cands, r, q) is not None:
            return r
    return GreaterThan(r_max)


# -- explicit rational decompositions ----------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """Sum of scaled rank-one terms reproducing a target tensor exactly."""

    dims: tuple
    terms: tuple  # (coefficient, per-mode vectors) pairs

    def tensor(self):
        acc = zero_tensor(self.dims)
        for coeff, vectors in self.terms:
            acc = acc + rank_one([list(v) for v in vectors], coeff)
        return acc

    def verify(self, target):
        return self.dims == target.dims and self.tensor() == target

    def __len__(self):
        return len(self.terms)


def _basis_term(dims, idx):
    vectors = []
    for d, i in zip(dims, idx):
        e = [0] * d
        e[i] = 1
        vectors.append(tuple(e))
    return (1, tuple(vectors))


_HALF = Fraction(1, 2)

# five terms for the triple-collision orbit: split off one corner point, and
# interpolate the remaining multiplication-by-a-line structure at 0, 1, -1
_OSCULATING_TERMS = (
    (1, ((1, 0, 0), (-1, 0, 1), (1, 0, 0))),
    (_HALF, ((1, 1, 0), (1, 1, 0), (1, 1, 1))),
    (_HALF, ((1, -1, 0), (1, -1, 0), (1, -1, 1))),
    (-1, ((0, 1, 0), (0, 1, 0), (0, 0, 1))),
    (1, ((0, 0, 1), (1, 0, 0), (1, 0, 0))),
)


def _orbit_decomposition(orbit_id):
    if orbit_id == 37:
        return Decomposition((3, 3, 3), _OSCULATING_TERMS)
    terms = tuple(_basis_term((3, 3, 3), idx) for idx in _ORBIT_TERMS[orbit_id])
    return Decomposition((3, 3, 3), terms)


def _unit_overrides(dims, overrides):
    idx = [0] * len(dims)
    for m, c in overrides.items():
        idx[m] = c
    return tuple(idx)


def _sigma2_terms(dims, J):
    return tuple(_basis_term(dims, _unit_overrides(dims, {j - 1: 1})) for j in J)


def _sigma3_terms(dims, kind, factor):
    n = len(dims)
    f = factor - 1
    if kind == "i":
        return tuple(_basis_term(dims, (c,) * n) for c in range(3))
    if kind == "ii":
        idxs = [(2,) * n] + [_unit_overrides(dims, {j: 1}) for j in range(n)]
    elif kind == "iii":
        idxs = [_unit_overrides(dims, {j: 1, k: 1})
                for j, k in combinations(range(n), 2)]
        idxs += [_unit_overrides(dims, {j: 2}) for j in range(n)]
    else:
        idxs = [_unit_overrides(dims, {f: 1, j: 1}) for j in range(n) if j != f]
        idxs.append(_unit_overrides(dims, {f: 2}))
        idxs += [_unit_overrides(dims, {j: 2}) for j in range(n) if j != f]
    return tuple(_basis_term(dims, idx) for idx in idxs)


def rank_upper_bound(t):
    """Explicit rational decomposition of a tensor of known provenance.

    Recognizes the zero tensor, rank-one tensors, the six concise orbit
    representatives at dims (3,3,3), and the tangent-type and small-secant
    normal forms at any matching dims; raises on anything else.  The term
    count realizes the best constructive upper bound the toolkit knows.
    """
    dims = t.dims
    if t.is_zero():
        return Decomposition(dims, ())
    if all(r <= 1 for r in multilinear_rank(t)):
        anchor = next(idx for idx in product(*map(range, dims)) if t[idx])
        vectors = []
        for mode, d in enumerate(dims):
            fiber = []
            for j in range(d):
                idx = list(anchor)
                idx[mode] = j
                fiber.append(t[tuple(idx)])
            vectors.append(tuple(fiber))
        a = Fraction(t[anchor])
        coeff = _norm(1 / a ** (len(dims) - 1))
        dec = Decomposition(dims, ((coeff, tuple(vectors)),))
        if not dec.verify(t):
            raise ValueError("tensor is not rank one despite unit flattenings")
        return dec
    if dims == (3, 3, 3):
        for orbit_id in ORBIT_IDS:
            if t == orbit_representative(orbit_id):
                dec = _orbit_decomposition(orbit_id)
                if not dec.verify(t):
                    raise AssertionError("orbit decomposition failed to verify")
                return dec
    n = len(dims)
    eligible = [j for j in range(1, n + 1) if dims[j - 1] >= 2]
    for size in range(1, len(eligible) + 1):
        for J in combinations(eligible, size):
            if t == sigma2_point(n, set(J), dims):
                return Decomposition(dims, _sigma2_terms(dims, J))
    if n >= 3 and all(d >= 3 for d in dims):
        for kind in ("i", "ii", "iii"):
            if t == sigma3_point(kind, n, dims):
                return Decomposition(dims, _sigma3_terms(dims, kind, 1))
        for factor in range(1, n + 1):
            if t == sigma3_point("iv", n, dims, factor):
                return Decomposition(dims, _sigma3_terms(dims, "iv", factor))
    raise ValueError("unknown provenance: no decomposition recipe matches")


# -- bounded-degree ideal membership -----------------------------------------

@dataclass(frozen=True)
class MembershipCertificate:
    """Outcome of a bounded-degree ideal-membership search.

    When found, multipliers[i] is the polynomial coefficient of the i-th
    generator in an exact expression of the target; when not found,
    bound_limited records that only the stated multiplier degree was tried.
    """

    found: bool
    bound_limited: bool
    bound: int
    multipliers: tuple | None = None

    def __bool__(self):
        return self.found


def _graded_degree(expo, graded_indices):
    return sum(expo[i] for i in graded_indices)


def _homogeneous_degree(poly, graded_indices):
    if pis_zero(poly):
        return None
    degs = {_graded_degree(e, graded_indices) for e in poly}
    if len(degs) != 1:
        raise ValueError("polynomials must be homogeneous in the graded variables")
    return degs.pop()


def _exact_degree_monomials(indices, degree, nvars):
    out = set()

    def rec(pos, remaining, expo):
        if pos == len(indices):
            if remaining == 0:
                out.add(tuple(expo))
            return
        for k in range(remaining + 1):
            expo[indices[pos]] = k
            rec(pos + 1, remaining - k, expo)
        expo[indices[pos]] = 0

    rec(0, degree, [0] * nvars)
    return sorted(out)


def _bounded_monomials(indices, bound, nvars):
    out = []
    for d in range(bound + 1):
        out.extend(_exact_degree_monomials(indices, d, nvars))
    return out


def _merge_exponents(a, b):
    return tuple(x + y for x, y in zip(a, b))


def macaulay_membership(target, generators, coefficient_degree_bound,
                        graded_indices=(0, 1, 2, 3)):
    """Decide target = sum h_i * generators[i] with bounded multipliers.

    Polynomials are exponent-tuple dictionaries over one shared variable
    list; variables listed in graded_indices carry degree one and all others
    are degree-zero parameters.  Multipliers are searched with parameter
    degree at most the bound and graded degree matching the homogeneous
    difference; the decision is exact linear algebra on the coefficient
    matrix, and a found certificate is re-substituted before returning.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    if coefficient_degree_bound < 0:
        raise ValueError("the multiplier degree bound must be nonnegative")
    if pis_zero(target):
        return MembershipCertificate(True, False, coefficient_degree_bound,
                                     tuple({} for _ in generators))
    nvars = len(next(iter(target)))
    if any(len(e) != nvars for g in generators for e in g):
        raise ValueError("polynomials must share one variable list")
    graded = sorted(set(graded_indices))
    params = [i for i in range(nvars) if i not in graded]
    target_deg = _homogeneous_degree(target, graded)
    gen_degs = [_homogeneous_degree(g, graded) for g in generators]

    param_monos = _bounded_monomials(params, coefficient_degree_bound, nvars)
    columns = []   # (generator index, multiplier exponent tuple, product poly)
    for gi, (g, gd) in enumerate(zip(generators, gen_degs)):
        if gd is None or gd > target_deg:
            continue
        graded_monos = _exact_degree_monomials(graded, target_deg - gd, nvars)
        for pm in param_monos:
            for gm in graded_monos:
                expo = _merge_exponents(pm, gm)
                columns.append((gi, expo, pmul(monomial(expo), g)))

    support = set(target)
    for _, _, prod_poly in columns:
        support.update(prod_poly)
    slots = {mono: i for i, mono in enumerate(sorted(support))}
    ech = Echelon()
    meta = []
    for gi, expo, prod_poly in columns:
        vec = [0] * len(slots)
        for mono, c in prod_poly.items():
            vec[slots[mono]] = c
        ech.add(vec)
        meta.append((gi, expo))
    tvec = [0] * len(slots)
    for mono, c in target.items():
        tvec[slots[mono]] = c
    coords = ech.coords_in(tvec)
    if coords is None:
        return MembershipCertificate(False, True, coefficient_degree_bound)
    multipliers = [dict() for _ in generators]
    for (gi, expo), c in zip(meta, coords):
        if c:
            multipliers[gi] = padd(multipliers[gi], monomial(expo, c))
    total = {}
    for h, g in zip(multipliers, generators):
        total = padd(total, pmul(h, g))
    if not pis_zero(psub(total, target)):
        raise AssertionError("membership certificate failed re-substitution")
    return MembershipCertificate(True, False, coefficient_degree_bound,
                                 tuple(multipliers))


# -- the perturbed symmetric pencil and its minor ideal ------------------------

# variable order: s, t, u, x carry degree one; f1..f3, g1..g3 are parameters
PENCIL_VARS = ("s", "t", "u", "x", "f1", "f2", "f3", "g1", "g2", "g3")


def _pvar(i):
    e = [0] * len(PENCIL_VARS)
    e[i] = 1
    return tuple(e)


def _pmono(*indices):
    e = [0] * len(PENCIL_VARS)
    for i in indices:
        e[i] += 1
    return monomial(tuple(e))


def perturbed_pencil_matrix():
    """Symmetric matrix pencil of a triple-collision slice space plus a
    rank-one perturbation x * f g^T with parameter vectors f, g."""
    s, t, u, x = 0, 1, 2, 3
    f = (4, 5, 6)
    g = (7, 8, 9)
    base = ((t, s, u), (s, None, None), (u, None, None))
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            p = {}
            if base[i][j] is not None:
                p = padd(p, _pmono(base[i][j]))
            p = padd(p, _pmono(x, f[i], g[j]))
            row.append(p)
        rows.append(tuple(row))
    return tuple(rows)


def perturbed_pencil_minors():
    """All nine 2x2 minors of the perturbed pencil, keyed by row/column pairs."""
    a = perturbed_pencil_matrix()
    minors = {}
    for rows in combinations(range(3), 2):
        for cols in combinations(range(3), 2):
            i, j = rows
            k, l = cols
            m = psub(pmul(a[i][k], a[j][l]), pmul(a[i][l], a[j][k]))
            minors[(rows, cols)] = m
    return minors


def perturbed_pencil_targets():
    """The two squared linear forms certified to lie in the minor ideal:
    (s*f3 - u*f2)**2 and its transpose twin (s*g3 - u*g2)**2."""
    s, u = 0, 2
    out = []
    for a3, a2 in ((6, 5), (9, 8)):
        lin = psub(_pmono(s, a3), _pmono(u, a2))
        out.append(pmul(lin, lin))
    return tuple(out)
