"""Truncated-series curves on chart models and their limit planes.

Curves on a cominuscule chart are pushed through the model's embedding with
exact rational coefficients.  The limit at t=0 of the moving span of three
curve points is computed by valuation-aware row reduction, and colliding
configurations are classified by how the limit plane meets the affine
tangent space at the collision point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ._linalg import Echelon, _norm, rank, span_basis
from .normal_forms import segre_model


class PrecisionError(RuntimeError):
    """A computation needs more series terms than are tracked."""


class _DependentRows(PrecisionError):
    """A row vanished to the working truncation order during reduction."""


class ScalarSeries:
    """Truncated power series sum_k c_k t^k for k < prec, exact coefficients."""

    __slots__ = ("prec", "coeffs")

    def __init__(self, coeffs, prec=None):
        coeffs = tuple(_norm(c) for c in coeffs)
        if prec is None:
            prec = len(coeffs)
        if prec < 1:
            raise ValueError("series need at least one tracked coefficient")
        if len(coeffs) < prec:
            coeffs = coeffs + (0,) * (prec - len(coeffs))
        elif len(coeffs) > prec:
            coeffs = coeffs[:prec]
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarSeries is immutable")

    @classmethod
    def constant(cls, c, prec):
        return cls((c,), prec)

    @classmethod
    def variable(cls, prec):
        return cls((0, 1), prec)

    def coeff(self, k):
        if not 0 <= k < self.prec:
            raise PrecisionError(f"coefficient {k} is beyond truncation {self.prec}")
        return self.coeffs[k]

    def order(self):
        """Index of the first nonzero tracked coefficient, or None."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self):
        return self.order() is None

    def _coerce(self, other):
        if isinstance(other, ScalarSeries):
            if other.prec != self.prec:
                raise ValueError("mixing series with different truncation orders")
            return other
        if isinstance(other, (int, Fraction)):
            return ScalarSeries.constant(other, self.prec)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ScalarSeries(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.prec)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ScalarSeries(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)), self.prec)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ScalarSeries(tuple(-c for c in self.coeffs), self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ScalarSeries((0,), self.prec)
            return ScalarSeries(tuple(other * c for c in self.coeffs), self.prec)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.prec
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] += a * b
        return ScalarSeries(tuple(out), n)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("series powers must be nonnegative integers")
        out = ScalarSeries.constant(1, self.prec)
        for _ in range(e):
            out = out * self
        return out

    def shift(self, k):
        """Multiply by t**k (k >= 0), truncating."""
        if k < 0:
            raise ValueError("negative shifts are not defined on truncated series")
        return ScalarSeries((0,) * k + self.coeffs, self.prec)

    def inverse(self):
        """Multiplicative inverse; the constant term must be nonzero."""
        a0 = self.coeffs[0]
        if not a0:
            raise ValueError("series with zero constant term has no inverse")
        inv0 = _norm(Fraction(1, 1) / Fraction(a0))
        out = [inv0] + [0] * (self.prec - 1)
        for n in range(1, self.prec):
            acc = 0
            for j in range(1, n + 1):
                if self.coeffs[j]:
                    acc += self.coeffs[j] * out[n - j]
            out[n] = _norm(-acc * Fraction(inv0))
        return ScalarSeries(tuple(out), self.prec)

    def compose(self, inner):
        """Substitute t -> inner(t); inner must vanish at 0."""
        inner = self._coerce(inner)
        if inner is None or inner.coeffs[0]:
            raise ValueError("composition needs a series vanishing at 0")
        out = ScalarSeries.constant(self.coeffs[-1], self.prec)
        for k in range(self.prec - 2, -1, -1):
            out = out * inner + self.coeffs[k]
        return out

    def scaled(self, c):
        """Reparameterize t -> c*t."""
        f = 1
        out = []
        for a in self.coeffs:
            out.append(_norm(a * f))
            f *= c
        return ScalarSeries(tuple(out), self.prec)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarSeries.constant(other, self.prec)
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prec, self.coeffs))

    def __repr__(self):
        return f"ScalarSeries({self.coeffs!r})"


class VectorSeries:
    """Fixed-length vector of scalar series sharing one truncation order."""

    __slots__ = ("prec", "parts")

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ValueError("empty vector series")
        prec = parts[0].prec
        if any(p.prec != prec for p in parts):
            raise ValueError("vector series parts must share a truncation order")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("VectorSeries is immutable")

    @classmethod
    def from_polynomial(cls, coeff_vectors, prec):
        """Curve sum_k t^k * coeff_vectors[k] at the given truncation."""
        coeff_vectors = [tuple(v) for v in coeff_vectors]
        if not coeff_vectors:
            raise ValueError("a curve needs at least one coefficient vector")
        n = len(coeff_vectors[0])
        if any(len(v) != n for v in coeff_vectors):
            raise ValueError("coefficient vectors must share a length")
        parts = []
        for i in range(n):
            parts.append(ScalarSeries(tuple(v[i] for v in coeff_vectors[:prec]), prec))
        return cls(parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def coeff_vector(self, k):
        return tuple(p.coeff(k) for p in self.parts)

    def polynomial_coefficients(self):
        """Tracked coefficient vectors, trailing zero vectors trimmed."""
        vecs = [self.coeff_vector(k) for k in range(self.prec)]
        while len(vecs) > 1 and not any(vecs[-1]):
            vecs.pop()
        return vecs

    def order(self):
        orders = [p.order() for p in self.parts]
        orders = [o for o in orders if o is not None]
        return min(orders) if orders else None

    def leading_vector(self):
        o = self.order()
        if o is None:
            return None
        return self.coeff_vector(o)

    def __add__(self, other):
        return VectorSeries(a + b for a, b in zip(self.parts, other.parts))

    def __sub__(self, other):
        return VectorSeries(a - b for a, b in zip(self.parts, other.parts))

    def __rmul__(self, c):
        return VectorSeries(c * p for p in self.parts)

    def scale_series(self, s):
        return VectorSeries(p * s for p in self.parts)

    def compose(self, inner):
        return VectorSeries(p.compose(inner) for p in self.parts)

    def scaled(self, c):
        return VectorSeries(p.scaled(c) for p in self.parts)

    def __eq__(self, other):
        if not isinstance(other, VectorSeries):
            return NotImplemented
        return self.parts == other.parts

    def __repr__(self):
        return f"VectorSeries({[p.coeffs for p in self.parts]!r})"


def curve_from_coefficients(coeff_vectors, prec):
    return VectorSeries.from_polynomial(coeff_vectors, prec)


def embed_curve(model, curve):
    """Ambient coordinates of the model chart map along a chart curve."""
    vals = model.phi(list(curve.parts))
    prec = curve.prec
    parts = [
        v if isinstance(v, ScalarSeries) else ScalarSeries.constant(v, prec)
        for v in vals
    ]
    return VectorSeries(parts)


def parameterize(model, tangent_series):
    """Curve on the model through its base point with the given tangent expansion.

    The tangent series lives in the chart coordinates; the result carries the
    full ambient coordinates at the same truncation order, with every graded
    component of the chart map evaluated exactly.
    """
    if not isinstance(tangent_series, VectorSeries):
        data = [tuple(v) for v in tangent_series]
        p = max(2, (len(data) - 1) * model.base_degree + 2)
        tangent_series = VectorSeries.from_polynomial(data, p)
    if len(tangent_series) != model.tangent_dim:
        raise ValueError("tangent series has wrong length for the model chart")
    return embed_curve(model, tangent_series)


def affine_tangent_frame(model, chart_point):
    """Rows spanning the affine tangent space at the chart point's image."""
    cp = list(chart_point)
    if len(cp) != model.tangent_dim:
        raise ValueError("chart point has wrong length")
    frame = [[_norm(x) for x in model.phi(cp)]]
    for j in range(model.tangent_dim):
        v = [ScalarSeries((cp[i], 1 if i == j else 0), 2) for i in range(len(cp))]
        amb = model.phi(v)
        frame.append([a.coeff(1) if isinstance(a, ScalarSeries) else 0 for a in amb])
    return frame


def second_order_offset(model, chart_point, direction):
    """s^2 coefficient vector of the chart map along chart_point + s*direction."""
    cp, u = list(chart_point), list(direction)
    v = [ScalarSeries((cp[i], u[i], 0), 3) for i in range(len(cp))]
    amb = model.phi(v)
    return [a.coeff(2) if isinstance(a, ScalarSeries) else 0 for a in amb]


def second_fundamental_vanishes(model, chart_point, direction):
    """Whether the second-order offset along the direction stays tangent."""
    frame = affine_tangent_frame(model, chart_point)
    vec = second_order_offset(model, chart_point, direction)
    return rank(frame + [vec]) == rank(frame)


@dataclass(frozen=True)
class LimitPlaneResult:
    """Limit of the moving span of three curve points.

    plane holds a rref-canonical basis of the limit subspace (empty when
    degenerate), orders the valuations of the reduced rows, and
    leading_order the valuation of the full triple wedge along the curves
    (the sum of the row valuations; None when degenerate).
    """

    plane: tuple
    orders: tuple
    leading_order: int | None
    degenerate: bool = False

    def sample(self, coeffs):
        if self.degenerate:
            raise ValueError("a degenerate wedge has no plane to sample")
        if len(coeffs) != len(self.plane):
            raise ValueError("need one coefficient per basis vector")
        n = len(self.plane[0])
        out = [0] * n
        for c, row in zip(coeffs, self.plane):
            if c:
                for i, x in enumerate(row):
                    if x:
                        out[i] += c * x
        return tuple(_norm(x) for x in out)

    def contains(self, vec):
        rows = [list(r) for r in self.plane]
        return rank(rows + [list(vec)]) == rank(rows)


def _poly_data(curve):
    if isinstance(curve, VectorSeries):
        return curve.polynomial_coefficients()
    return [tuple(v) for v in curve]


def _reduce_rows(rows, prec):
    """Valuation echelon of series rows: leading vectors and their orders."""
    for _ in range(3 * prec + 12):
        orders = []
        for r in rows:
            ros = [p.order() for p in r]
            ros = [o for o in ros if o is not None]
            if not ros:
                raise _DependentRows("rows are dependent to the truncation order")
            orders.append(min(ros))
        idx = sorted(range(len(rows)), key=lambda i: orders[i])
        ech = Echelon()
        inserted = []
        clean = True
        for i in idx:
            lead = [p.coeffs[orders[i]] for p in rows[i]]
            if ech.add(lead):
                inserted.append(i)
                continue
            coeffs = ech.coords_in(lead)
            for j, c in zip(inserted, coeffs):
                if c:
                    sh = orders[i] - orders[j]
                    rows[i] = [
                        a - c * b.shift(sh) for a, b in zip(rows[i], rows[j])
                    ]
            clean = False
            break
        if clean:
            return [(orders[i], [p.coeffs[orders[i]] for p in rows[i]]) for i in idx]
    raise PrecisionError("row reduction did not stabilise")


def limit_plane(c1, c2, c3, prec=8, max_prec=64):
    """Limit at t=0 of the span of three moving ambient points.

    Curves may be VectorSeries or sequences of ambient coefficient vectors;
    either way the data is read as an exact polynomial curve.  The working
    truncation starts at prec and doubles up to max_prec when the reduction
    needs more terms.  The triple wedge of polynomial rows is a polynomial
    of degree at most the sum of the row degrees, so once the truncation
    passes that bound a vanishing wedge is certain and the result is
    returned with the degenerate flag instead of a plane.
    """
    polys = [_poly_data(c) for c in (c1, c2, c3)]
    widths = {len(data[0]) for data in polys}
    if len(widths) != 1:
        raise ValueError("curves must share an ambient dimension")
    (width,) = widths
    if width > 64:
        raise ValueError("ambient dimension capped at 64")
    degree_bound = sum(len(data) - 1 for data in polys) + 1
    # never truncate the polynomial data itself, only the series tail
    p = max(prec, max(len(data) for data in polys))
    max_prec = max(max_prec, p)
    while True:
        try:
            rows = [list(VectorSeries.from_polynomial(d, p).parts) for d in polys]
            leads = _reduce_rows(rows, p)
        except _DependentRows:
            if p >= degree_bound:
                return LimitPlaneResult((), (), None, degenerate=True)
            if p >= max_prec:
                raise ValueError(
                    f"wedge vanishes to truncation {max_prec}; deciding "
                    f"degeneracy needs truncation {degree_bound}"
                )
            p = min(2 * p, max_prec)
            continue
        except PrecisionError:
            if p >= max_prec:
                raise ValueError(
                    f"curves do not span a plane within truncation order {max_prec}"
                )
            p = min(2 * p, max_prec)
            continue
        orders = tuple(o for o, _ in leads)
        basis = tuple(tuple(r) for r in span_basis([v for _, v in leads]))
        if len(basis) != 3:
            raise ValueError("reduced leading vectors do not span a plane")
        return LimitPlaneResult(basis, orders, sum(orders))


def _ambient_polynomial(model, data):
    """Exact ambient polynomial data of a polynomial chart curve."""
    p = max(2, (len(data) - 1) * model.base_degree + 2)
    amb = embed_curve(model, VectorSeries.from_polynomial(data, p))
    return amb.polynomial_coefficients()


def chart_limit_plane(model, curves, prec=8, max_prec=64):
    """Limit plane of three chart curves pushed through the model map."""
    curves = list(curves)
    if len(curves) != 3:
        raise ValueError("a limit plane needs exactly three curves")
    amb = [_ambient_polynomial(model, _poly_data(c)) for c in curves]
    return limit_plane(*amb, prec=prec, max_prec=max_prec)


def sample_plane_point(plane, coeffs):
    return plane.sample(coeffs)


@dataclass(frozen=True)
class LimitAnalysis:
    """A limit plane together with the collision geometry of its curves."""

    plane: LimitPlaneResult
    tag: str                    # "i" | "ii" | "iii" | "iv" | "degenerate"
    support_count: int          # distinct limit points among the three curves
    collision_direction: tuple | None
    distinguished_factor: int | None  # segre models, tag "iv" only; 1-based


def _segre_single_block(model, u):
    """Index (1-based) of the unique factor block supporting u, else None."""
    if model.kind != "segre":
        return None
    hit = None
    pos = 0
    for f, d in enumerate(model.dims):
        blk = u[pos:pos + d - 1]
        pos += d - 1
        if any(blk):
            if hit is not None:
                return None
            hit = f + 1
    return hit


def limit_analysis(model, curves, prec=8, max_prec=64):
    """Classify the limit plane of three colliding chart curves.

    Three distinct limit points give tag "i".  Two distinct limit points
    give "ii", or "iv" when the two support points sit on a line of the
    model (the second-order offset along the chord vanishes).  A triple
    collision gives "iii" when the relative direction bends away from the
    tangent space, "iv" when it does not, and "degenerate" when the whole
    plane is tangent at the collision point.
    """
    curves = list(curves)
    if len(curves) != 3:
        raise ValueError("a limit plane needs exactly three curves")
    polys = [_poly_data(c) for c in curves]
    plane = chart_limit_plane(model, polys, prec=prec, max_prec=max_prec)
    consts = [tuple(_norm(x) for x in data[0]) for data in polys]
    distinct = []
    for c in consts:
        if c not in distinct:
            distinct.append(c)
    support = len(distinct)
    if plane.degenerate:
        return LimitAnalysis(plane, "degenerate", support, None, None)
    if support == 3:
        return LimitAnalysis(plane, "i", 3, None, None)
    if support == 2:
        counts = {c: consts.count(c) for c in distinct}
        doubled = next(c for c in distinct if counts[c] == 2)
        single = next(c for c in distinct if counts[c] == 1)
        u = tuple(_norm(a - b) for a, b in zip(single, doubled))
        if second_fundamental_vanishes(model, doubled, u):
            return LimitAnalysis(plane, "iv", 2, u, _segre_single_block(model, u))
        return LimitAnalysis(plane, "ii", 2, u, None)
    c = distinct[0]
    frame = affine_tangent_frame(model, c)
    base_rank = rank(frame)
    if rank(frame + [list(r) for r in plane.plane]) == base_rank:
        return LimitAnalysis(plane, "degenerate", 1, None, None)
    # relative direction of the collision: lowest-order pairwise difference
    best = None
    wp = max(len(d) for d in polys) + 1
    for i in range(3):
        for j in range(i + 1, 3):
            diff = VectorSeries.from_polynomial(polys[i], wp) - \
                VectorSeries.from_polynomial(polys[j], wp)
            o = diff.order()
            if o is not None and (best is None or o < best[0]):
                best = (o, diff.leading_vector())
    if best is None:
        raise ValueError("curves are identical")
    u = best[1]
    if second_fundamental_vanishes(model, c, u):
        return LimitAnalysis(plane, "iv", 1, u, _segre_single_block(model, u))
    return LimitAnalysis(plane, "iii", 1, u, None)


# -- random curve families with a prescribed limit type --------------------

@dataclass(frozen=True)
class CurveFamily:
    """Three polynomial chart curves with the limit type they realise."""

    tag: str
    curves: tuple   # three tuples of chart coefficient vectors
    factor: int | None = None


def _blocks(model):
    sizes = [d - 1 for d in model.dims]
    offs, pos = [], 0
    for s in sizes:
        offs.append(pos)
        pos += s
    return sizes, offs


def _rand_block(rng, size):
    while True:
        v = tuple(rng.randint(-3, 3) for _ in range(size))
        if any(v):
            return v


def _assemble(model, blocks):
    sizes, _ = _blocks(model)
    out = []
    for b, s in zip(blocks, sizes):
        b = tuple(b) if b is not None else (0,) * s
        if len(b) != s:
            raise ValueError("block has wrong size")
        out.extend(b)
    return tuple(out)


def _mode_frames_independent(model, chart_rows):
    """Each mode's projective frame (1, block) must be a basis."""
    sizes, offs = _blocks(model)
    for m, s in enumerate(sizes):
        mat = []
        for kind, vec in chart_rows:
            blk = list(vec[offs[m]:offs[m] + s])
            mat.append(([1] if kind == "point" else [0]) + blk)
        if rank(mat) != len(mat):
            return False
    return True


def secant_curve_family(tag, model=None, rng=None, factor=1):
    """Draw random polynomial curves whose limit plane has the given type.

    Implemented for three-factor segre models with all dims >= 3; the
    genericity conditions that keep sampled plane points concise are
    enforced by redrawing, with exact linear algebra only.
    """
    if model is None:
        model = segre_model((3, 3, 3))
    if model.kind != "segre" or len(model.dims) != 3 or min(model.dims) < 3:
        raise ValueError("curve families need a three-factor segre model with dims >= 3")
    if rng is None:
        rng = random.Random(0)
    sizes, offs = _blocks(model)
    tdim = model.tangent_dim
    zero = (0,) * tdim
    if tag == "i":
        while True:
            pts = [_assemble(model, [_rand_block(rng, s) for s in sizes])
                   for _ in range(3)]
            if len(set(pts)) == 3 and _mode_frames_independent(
                    model, [("point", p) for p in pts]):
                return CurveFamily("i", tuple((p,) for p in pts))
    if tag == "ii":
        while True:
            a = _assemble(model, [_rand_block(rng, s) for s in sizes])
            b = _assemble(model, [_rand_block(rng, s) for s in sizes])
            u1 = _assemble(model, [_rand_block(rng, s) for s in sizes])
            u2 = _assemble(model, [_rand_block(rng, s) for s in sizes])
            d = tuple(x - y for x, y in zip(u2, u1))
            dblocks = [d[offs[m]:offs[m] + s] for m, s in enumerate(sizes)]
            if not all(any(blk) for blk in dblocks):
                continue
            rows = [("point", a), ("dir", d), ("point", b)]
            if _mode_frames_independent(model, rows):
                return CurveFamily("ii", ((a, u1), (a, u2), (b,)))
    if tag == "iii":
        while True:
            c = _assemble(model, [_rand_block(rng, s) for s in sizes])
            u = _assemble(model, [_rand_block(rng, s) for s in sizes])
            m = _assemble(model, [_rand_block(rng, s) for s in sizes])
            rows = [("point", c), ("dir", u), ("dir", m)]
            if not _mode_frames_independent(model, rows):
                continue
            c2 = tuple(2 * x for x in u)
            m4 = tuple(4 * x for x in m)
            return CurveFamily("iii", ((c,), (c, u, m), (c, c2, m4)))
    if tag == "iv":
        f = factor - 1
        if not 0 <= f < 3:
            raise ValueError("factor must be 1, 2, or 3")
        while True:
            eta = _rand_block(rng, sizes[f])
            v = _assemble(model, [_rand_block(rng, s) for s in sizes])
            wblocks = [None if m == f else _rand_block(rng, sizes[m])
                       for m in range(3)]
            w = _assemble(model, wblocks)
            sigma = rng.choice([1, 2, -1, -2, 3])
            etahat = _assemble(model, [eta if m == f else None for m in range(3)])
            # sampled frames: mode f sees {eta, v_f}; mode g != f sees
            # {v_g + w_g / sigma, w_g}; enforce independence everywhere
            ok = True
            for m in range(3):
                s, o = sizes[m], offs[m]
                if m == f:
                    mat = [list(eta), list(v[o:o + s])]
                else:
                    wg = list(w[o:o + s])
                    vg = [x + Fraction(y, sigma) for x, y in zip(v[o:o + s], wg)]
                    mat = [vg, wg]
                if rank(mat) != 2:
                    ok = False
                    break
            if not ok:
                continue
            sig_eta = tuple(sigma * x for x in etahat)
            p = (zero, etahat)
            q = (zero, zero, v)
            r = (sig_eta, w)
            return CurveFamily("iv", (p, q, r), factor=factor)
    raise ValueError(f"unknown curve family tag {tag!r}")


# -- spans of tangent spaces along a factor line ---------------------------

def line_tangent_span_formula(dims, factor):
    """Predicted span dimension of tangent spaces along a factor line."""
    if not 1 <= factor <= len(dims):
        raise ValueError("factor out of range")
    return 2 * sum(d - 1 for d in dims) + 2 - dims[factor - 1]


def line_tangent_span(model_or_dims, factor):
    """Exact span dimension of affine tangent spaces along a factor line."""
    if hasattr(model_or_dims, "kind"):
        model = model_or_dims
        if model.kind != "segre":
            raise ValueError("factor lines need a segre model")
    else:
        model = segre_model(tuple(model_or_dims))
    dims = model.dims
    sizes, offs = _blocks(model)
    if not 1 <= factor <= len(dims):
        raise ValueError("factor out of range")
    rows = []
    for s in (0, 1, 2):
        c = [0] * model.tangent_dim
        c[offs[factor - 1]] = s
        rows.extend(affine_tangent_frame(model, c))
    return rank(rows)


# -- fundamental forms and order bounds -------------------------------------

def fundamental_form(model, s, vectors):
    """Polarisation of the degree-s block of the chart map on s vectors.

    Returns {ambient_slot_index: value}; the diagonal reproduces the
    degree-s coefficients of the chart map.
    """
    vectors = [list(v) for v in vectors]
    if s < 1 or len(vectors) != s:
        raise ValueError("need exactly s vectors for the degree-s form")
    if s > model.base_degree:
        return {}
    n = model.tangent_dim
    if any(len(v) != n for v in vectors):
        raise ValueError("vectors have wrong length")
    total = {}
    for mask in range(1, 1 << s):
        w = [0] * n
        bits = 0
        for i in range(s):
            if mask >> i & 1:
                bits += 1
                for j in range(n):
                    w[j] += vectors[i][j]
        sign = 1 if (s - bits) % 2 == 0 else -1
        for slot, val in model.fundamental_form_diag(s, w).items():
            total[slot] = total.get(slot, 0) + sign * val
    scale = Fraction(1, math.factorial(s))
    out = {}
    for slot, val in total.items():
        val = _norm(scale * val)
        if val:
            out[slot] = val
    return out


def fubini_form(model, s, vectors):
    """Degree-s fundamental form on s tangent vectors, as a dense ambient vector.

    Entries outside the degree-s ambient block are zero; forms of degree
    beyond the model's top block are reported as the zero vector.
    """
    if s < 2:
        raise ValueError("fundamental forms start at degree 2")
    vals = fundamental_form(model, s, vectors)
    out = [0] * model.ambient_dim
    for slot, val in vals.items():
        out[slot] = val
    return tuple(out)


def fubini_series(model, tangent_series, s):
    """Series value of the degree-s fundamental form along t -> v(t)^s.

    By the grading of the chart map this is its degree-s ambient block
    evaluated along the curve.
    """
    if s < 2:
        raise ValueError("fundamental forms start at degree 2")
    if not isinstance(tangent_series, VectorSeries):
        data = [tuple(v) for v in tangent_series]
        tangent_series = VectorSeries.from_polynomial(data, max(2, len(data)))
    if len(tangent_series) != model.tangent_dim:
        raise ValueError("tangent series has wrong length for the model chart")
    amb = embed_curve(model, tangent_series)
    block = set(model.slot_block(s))
    zero = ScalarSeries.constant(0, tangent_series.prec)
    return VectorSeries(
        amb.parts[i] if i in block else zero for i in range(model.ambient_dim)
    )


def prolongation_check(model, f1, f2):
    """Vanishing of the next fundamental form on a product of arguments.

    f1 is a sequence of s1 >= 2 tangent vectors on which the degree-s1 form
    must already vanish (ValueError otherwise); f2 is a nonempty sequence of
    further tangent vectors.  Returns whether the degree-(s1+s2) form
    vanishes on the combined argument.
    """
    f1 = [list(v) for v in f1]
    f2 = [list(v) for v in f2]
    if len(f1) < 2:
        raise ValueError("the first argument needs at least two vectors")
    if not f2:
        raise ValueError("the second argument needs at least one vector")
    if fundamental_form(model, len(f1), f1):
        raise ValueError("the first argument must annihilate its own form degree")
    return not fundamental_form(model, len(f1) + len(f2), f1 + f2)


def curve_taylor_consistency(model, curve, max_block=None):
    """Order bounds and leading coefficients of the chart map along a curve.

    The curve must vanish at t=0 to order m >= 1.  For each block degree s,
    every degree-s ambient coordinate must vanish to order >= s*m, the
    t^(s*m) coefficient must equal the diagonal degree-s form on the leading
    vector, and the next coefficient must match its first polarisation.
    """
    if not isinstance(curve, VectorSeries):
        curve = VectorSeries.from_polynomial(list(curve), 8)
    m = curve.order()
    if m is None or m < 1:
        raise ValueError("curve must vanish at t=0")
    amb = embed_curve(model, curve)
    prec = curve.prec
    vm = list(curve.coeff_vector(m))
    vm1 = list(curve.coeff_vector(m + 1)) if m + 1 < prec else None
    top = model.base_degree if max_block is None else min(max_block, model.base_degree)
    for s in range(1, top + 1):
        block = model.slot_block(s)
        lead = model.fundamental_form_diag(s, vm)
        pol = None
        if vm1 is not None and s * m + 1 < prec:
            pol = fundamental_form(model, s, [vm] * (s - 1) + [vm1])
        for i in block:
            o = amb[i].order()
            if o is not None and o < s * m:
                return False
            if s * m < prec and amb[i].coeff(s * m) != lead.get(i, 0):
                return False
            if pol is not None:
                if amb[i].coeff(s * m + 1) != _norm(s * pol.get(i, 0)):
                    return False
    return True


# -- colliding-curve configurations ------------------------------------------

@dataclass(frozen=True)
class LimitConfig:
    """Three colliding curves in normalized form on a model chart.

    The first point is frozen at the base point, the second moves along
    t^k * v(t), and the third along lam(t) * t^k * v(t) + t^l * w(t), with
    0 <= k <= l and v(0), w(0) nonzero (so that k and l are maximal).
    """

    model: object
    k: int
    l: int
    v: VectorSeries
    w: VectorSeries
    lam: ScalarSeries

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.l, int)):
            raise ValueError("k and l must be integers")
        if not 0 <= self.k <= self.l:
            raise ValueError("need 0 <= k <= l")
        for name, series in (("v", self.v), ("w", self.w)):
            if not isinstance(series, VectorSeries):
                raise ValueError(f"{name} must be a VectorSeries")
            if len(series) != self.model.tangent_dim:
                raise ValueError(f"{name} has wrong length for the model chart")
            if series.order() != 0:
                raise ValueError(f"{name} must be nonzero at t=0 to keep k and l maximal")
        if not isinstance(self.lam, ScalarSeries):
            raise ValueError("lam must be a ScalarSeries")

    @property
    def m(self):
        """Valuation of the scalar series lam, or None when lam is zero."""
        return self.lam.order()


def limit_config_curves(cfg):
    """The three chart tangent curves of a colliding configuration."""
    pv = cfg.v.polynomial_coefficients()
    pw = cfg.w.polynomial_coefficients()
    pl = list(cfg.lam.coeffs)
    while len(pl) > 1 and not pl[-1]:
        pl.pop()
    p = max(8, cfg.k + len(pv) + len(pl), cfg.l + len(pw)) + 1
    v = VectorSeries.from_polynomial(pv, p)
    w = VectorSeries.from_polynomial(pw, p)
    lam = ScalarSeries(tuple(pl), p)
    tk = ScalarSeries((0,) * cfg.k + (1,), p)
    tl = ScalarSeries((0,) * cfg.l + (1,), p)
    width = len(v)
    x = VectorSeries.from_polynomial([(0,) * width], p)
    y = v.scale_series(tk)
    z = v.scale_series(lam * tk) + w.scale_series(tl)
    return (x, y, z)


def limit_config_plane(cfg, prec=8, max_prec=64):
    """Limit plane of the configuration's three embedded curves."""
    return chart_limit_plane(
        cfg.model, limit_config_curves(cfg), prec=prec, max_prec=max_prec
    )


def limit_type(cfg):
    """Type tag of a colliding configuration: "i", "ii", or coarse "iii-iv".

    Decision tree on (k, l, lam(0), II(v(0)^2)): l = 0 keeps three distinct
    limit points; a collision of order k >= 1, or a second fundamental form
    vanishing on the collision direction, needs the derivative cases; at
    k = 0 the scalar lam(0) decides whether the third point collides with
    the base point (lam(0) = 0), with the second point (lam(0) = 1), or
    stays distinct.
    """
    if cfg.l == 0:
        return "i"
    if cfg.k >= 1:
        return "iii-iv"
    v0 = cfg.v.coeff_vector(0)
    if not fundamental_form(cfg.model, 2, [v0, v0]):
        return "iii-iv"
    lam0 = cfg.lam.coeff(0)
    if lam0 != 0 and lam0 != 1:
        return "i"
    return "ii"
