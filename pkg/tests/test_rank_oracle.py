import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from border3.normal_forms import (
    ORBIT_IDS, ORBIT_INFO, orbit_representative, sigma2_point, sigma3_point,
)
from border3.rank_oracle import (
    Decomposition, FieldElement, GreaterThan, _gf_concise_core, _gf_row_reduce,
    macaulay_membership, perturbed_pencil_matrix, perturbed_pencil_minors,
    perturbed_pencil_targets, rank_over_field, rank_upper_bound,
)
from border3.polytools import monomial, padd, pis_zero, pmul, psub
from border3.tensor import make_tensor, rank_one, zero_tensor


def test_field_element_arithmetic():
    a = FieldElement(7, 5)
    assert a.value == 2
    b = FieldElement(4, 5)
    assert (a + b).value == 1
    assert (a - b).value == 3
    assert (a * b).value == 3
    assert (-b).value == 1
    assert (b.inverse() * b).value == 1
    assert not FieldElement(10, 5)
    assert FieldElement(1, 3)
    with pytest.raises(ValueError):
        FieldElement(1, 7)
    with pytest.raises(ValueError):
        FieldElement(1, 3) + FieldElement(1, 5)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, 2).inverse()


def test_field_element_from_rational():
    x = FieldElement.from_rational(Fraction(1, 2), 3)
    assert x.value == 2  # 1/2 = 2 mod 3
    assert FieldElement.from_rational(Fraction(-1, 3), 5).value == 3
    assert FieldElement.from_rational(4, 2).value == 0
    with pytest.raises(ValueError):
        FieldElement.from_rational(Fraction(1, 2), 2)
    with pytest.raises(ValueError):
        FieldElement.from_rational(Fraction(3, 10), 5)


def test_gf_row_reduce_transform_tracks_row_operations():
    rng = random.Random(41)
    for q in (2, 3, 5):
        for _ in range(20):
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            rows = [[rng.randrange(q) for _ in range(n)] for _ in range(m)]
            rank, reduced, transform = _gf_row_reduce(rows, q)
            for i in range(m):
                got = [sum(transform[i][k] * rows[k][j] for k in range(m)) % q
                       for j in range(n)]
                assert got == reduced[i]
            assert all(not any(reduced[i]) for i in range(rank, m))
            # the transform is invertible: it reduces to full rank
            t_rank, _, _ = _gf_row_reduce(transform, q)
            assert t_rank == m


def test_gf_concise_core_is_concise():
    rng = random.Random(17)
    for q in (2, 3):
        for _ in range(15):
            dims = tuple(rng.randint(1, 3) for _ in range(3))
            flat = [rng.randrange(q) for _ in range(dims[0] * dims[1] * dims[2])]
            if not any(flat):
                continue
            core, cdims = _gf_concise_core(flat, dims, q)
            t = make_tensor(cdims, core)
            for mode, d in enumerate(cdims):
                # conciseness: each mode flattening has full rank mod q
                rows = [[0] * (len(core) // d) for _ in range(d)]
                for pos, idx in enumerate(product(*map(range, cdims))):
                    rest = idx[:mode] + idx[mode + 1:]
                    col = 0
                    for c, dd in zip(rest, cdims[:mode] + cdims[mode + 1:]):
                        col = col * dd + c
                    rows[idx[mode]][col] = core[pos]
                r, _, _ = _gf_row_reduce(rows, q)
                assert r == d


def test_rank_over_field_small_cases():
    assert rank_over_field(zero_tensor((3, 3, 3)), 2) == 0
    assert rank_over_field(zero_tensor((2, 2)), 5) == 0
    t = rank_one([[1, 2], [3, 1], [0, 4]], 1)
    assert rank_over_field(t, 5) == 1
    assert rank_over_field(t, 3) == 1
    # a tensor that is rank one only after reduction: 5 * e000 over F2
    five = rank_one([[5], [1], [1]], 1)
    assert rank_over_field(five, 2) == 1
    assert rank_over_field(rank_one([[2], [1], [1]], 1), 2) == 0
    # matrix case: concise core is square
    m = make_tensor((2, 3), [1, 0, 1, 0, 1, 1])
    assert rank_over_field(m, 2) == 2


def test_rank_over_field_matches_orbit_table():
    for oid in ORBIT_IDS:
        rep = orbit_representative(oid)
        expected = ORBIT_INFO[oid]["rank"]
        assert rank_over_field(rep, 2) == expected
        assert rank_over_field(rep, 3) == expected


def test_rank_over_field_greater_than():
    rng = random.Random(7)
    g = make_tensor((3, 3, 3), [rng.randrange(1, 50) for _ in range(27)])
    out = rank_over_field(g, 2, r_max=4)
    assert out == GreaterThan(4)
    assert rank_over_field(g, 2, r_max=6) == 5


def test_rank_over_field_zero_padding_invariance():
    # padding with zero slices never changes the rank
    rng = random.Random(23)
    small = make_tensor((2, 2, 2), [rng.randrange(5) for _ in range(8)])
    big = zero_tensor((3, 3, 3))
    entries = list(big.entries)
    for i, j, k in product(range(2), repeat=3):
        entries[i * 9 + j * 3 + k] = small[i, j, k]
    big = make_tensor((3, 3, 3), entries)
    for q in (2, 3):
        assert rank_over_field(small, q) == rank_over_field(big, q)


def test_rank_over_field_input_validation():
    t = zero_tensor((2, 2, 2))
    with pytest.raises(ValueError):
        rank_over_field(t, 7)
    with pytest.raises(ValueError):
        rank_over_field(t, 2, r_max=0)
    with pytest.raises(ValueError):
        rank_over_field(t, 2, r_max=7)
    rng = random.Random(5)
    wide = make_tensor((4, 3, 3), [rng.randrange(1, 7) for _ in range(36)])
    with pytest.raises(ValueError, match="too large"):
        rank_over_field(wide, 5)
    diag = zero_tensor((3, 3, 3, 3))
    entries = list(diag.entries)
    for c in range(3):
        entries[c * 27 + c * 9 + c * 3 + c] = 1
    diag = make_tensor((3, 3, 3, 3), entries)
    with pytest.raises(ValueError, match="budget"):
        rank_over_field(diag, 5)
    # the same shape fits the budget over the smaller fields
    assert rank_over_field(diag, 2) == 3


def test_sigma2_ranks_over_f2():
    for n in (3, 4):
        for size in range(1, n + 1):
            J = set(range(1, size + 1))
            t = sigma2_point(n, J, (2,) * n)
            expected = 1 if size == 1 else size
            assert rank_over_field(t, 2) == expected


def test_rank_upper_bound_zero_and_rank_one():
    z = zero_tensor((2, 3))
    dz = rank_upper_bound(z)
    assert len(dz) == 0 and dz.verify(z)
    t = rank_one([[2, -1], [1, 3, 0], [4]], Fraction(1, 2))
    d = rank_upper_bound(t)
    assert len(d) == 1 and d.verify(t)


def test_rank_upper_bound_orbit_representatives():
    expected_terms = {34: 5, 35: 5, 36: 5, 37: 5, 38: 4, 39: 3}
    for oid in ORBIT_IDS:
        rep = orbit_representative(oid)
        dec = rank_upper_bound(rep)
        assert dec.verify(rep)
        assert len(dec) == expected_terms[oid]
        # the decomposition meets the known rank exactly
        assert len(dec) == ORBIT_INFO[oid]["rank"]


def test_rank_upper_bound_sigma_points():
    for n in (3, 4):
        for size in range(1, n + 1):
            J = tuple(range(1, size + 1))
            t = sigma2_point(n, set(J), (2,) * n)
            dec = rank_upper_bound(t)
            assert dec.verify(t)
            assert len(dec) == (1 if size == 1 else size)
    t4 = sigma3_point("iii", 4)
    d4 = rank_upper_bound(t4)
    assert d4.verify(t4) and len(d4) == 10  # pair count of five items
    t2 = sigma3_point("ii", 4)
    assert len(rank_upper_bound(t2)) == 5
    for factor in (1, 2, 3):
        tv = sigma3_point("iv", 3, factor=factor)
        dv = rank_upper_bound(tv)
        assert dv.verify(tv) and len(dv) == 5


def test_rank_upper_bound_agrees_with_field_rank():
    # a field rank can only be smaller than the number of rational terms
    for oid in ORBIT_IDS:
        rep = orbit_representative(oid)
        dec = rank_upper_bound(rep)
        assert rank_over_field(rep, 3) <= len(dec)
    assert rank_over_field(orbit_representative(39), 5) == 3


def test_decomposition_reduces_modulo_odd_primes():
    # every coefficient of the five-term decomposition stays defined mod 3
    # and 5, so the rational terms certify the field rank bound directly
    rep = orbit_representative(37)
    dec = rank_upper_bound(rep)
    for q in (3, 5):
        acc = [0] * 27
        for coeff, vectors in dec.terms:
            c = FieldElement.from_rational(coeff, q).value
            for pos, (i, j, k) in enumerate(product(range(3), repeat=3)):
                c_ijk = vectors[0][i] * vectors[1][j] * vectors[2][k]
                acc[pos] = (acc[pos] + c * c_ijk) % q
        want = [FieldElement.from_rational(x, q).value for x in rep.entries]
        assert acc == want
    with pytest.raises(ValueError):
        FieldElement.from_rational(Fraction(1, 2), 2)


def test_rank_upper_bound_unknown_provenance():
    rng = random.Random(99)
    g = make_tensor((3, 3, 3), [rng.randrange(2, 9) for _ in range(27)])
    with pytest.raises(ValueError, match="provenance"):
        rank_upper_bound(g)


def test_decomposition_tensor_round_trip():
    terms = (
        (Fraction(3, 7), ((1, 0), (0, 2), (1, 1))),
        (-2, ((0, 1), (1, 1), (1, 0))),
    )
    dec = Decomposition((2, 2, 2), terms)
    t = dec.tensor()
    assert dec.verify(t)
    assert not dec.verify(zero_tensor((2, 2, 2)))
    assert t[0, 1, 0] == Fraction(6, 7)


def _pencil_vars():
    # variable order: s, t, u, x graded; f1 f2 f3 g1 g2 g3 parameters
    def var(i):
        e = [0] * 10
        e[i] = 1
        return monomial(tuple(e))
    return [var(i) for i in range(10)]


def test_perturbed_pencil_matrix_entries():
    s, t, u, x, f1, f2, f3, g1, g2, g3 = _pencil_vars()
    a = perturbed_pencil_matrix()
    assert a[0][0] == padd(t, pmul(x, pmul(f1, g1)))
    assert a[0][1] == padd(s, pmul(x, pmul(f1, g2)))
    assert a[1][0] == padd(s, pmul(x, pmul(f2, g1)))
    assert a[1][1] == pmul(x, pmul(f2, g2))
    assert a[2][0] == padd(u, pmul(x, pmul(f3, g1)))
    assert a[2][2] == pmul(x, pmul(f3, g3))


def pscale_neg(p):
    return {e: -c for e, c in p.items()}


def test_perturbed_pencil_minors_and_targets():
    s, t, u, x, f1, f2, f3, g1, g2, g3 = _pencil_vars()
    minors = perturbed_pencil_minors()
    assert len(minors) == 9
    assert pis_zero(minors[((1, 2), (1, 2))])
    lin_f = psub(pmul(s, f3), pmul(u, f2))
    lin_g = psub(pmul(s, g3), pmul(u, g2))
    tgt_f, tgt_g = perturbed_pencil_targets()
    assert tgt_f == pmul(lin_f, lin_f)
    assert tgt_g == pmul(lin_g, lin_g)
    # hand-checked certificate: all first-order perturbation terms cancel
    combo = {}
    for key, mult in (
        (((0, 1), (0, 1)), pscale_neg(pmul(f3, f3))),
        (((0, 1), (0, 2)), pmul(f2, f3)),
        (((0, 2), (0, 1)), pmul(f2, f3)),
        (((0, 2), (0, 2)), pscale_neg(pmul(f2, f2))),
        (((1, 2), (0, 1)), pscale_neg(pmul(f1, f3))),
        (((1, 2), (0, 2)), pmul(f1, f2)),
    ):
        combo = padd(combo, pmul(mult, minors[key]))
    assert pis_zero(psub(combo, tgt_f))


def test_macaulay_membership_direct_and_failing():
    s, t, u, x, f1, f2, f3, g1, g2, g3 = _pencil_vars()
    gens = [pmul(s, s), pmul(u, u)]
    cert = macaulay_membership(gens[0], gens, 0)
    assert cert and not cert.bound_limited
    assert cert.multipliers[0] == {(0,) * 10: 1}
    assert cert.multipliers[1] == {}
    st = pmul(s, t)
    miss = macaulay_membership(st, gens, 1)
    assert not miss and miss.bound_limited
    assert miss.multipliers is None
    zero_cert = macaulay_membership({}, gens, 0)
    assert zero_cert and not zero_cert.bound_limited


def test_macaulay_membership_validation():
    s, t, u, x, f1, f2, f3, g1, g2, g3 = _pencil_vars()
    with pytest.raises(ValueError):
        macaulay_membership(pmul(s, s), [], 1)
    with pytest.raises(ValueError):
        macaulay_membership(pmul(s, s), [s], -1)
    with pytest.raises(ValueError, match="homogeneous"):
        macaulay_membership(padd(s, pmul(s, s)), [s], 1)


def test_pencil_targets_need_quadratic_multipliers():
    minors = perturbed_pencil_minors()
    gens = list(minors.values())
    tgt_f, tgt_g = perturbed_pencil_targets()
    for target in (tgt_f, tgt_g):
        for bound in (0, 1):
            cert = macaulay_membership(target, gens, bound)
            assert not cert and cert.bound_limited
        cert = macaulay_membership(target, gens, 2)
        assert cert and not cert.bound_limited
        # re-substitute the certificate independently
        total = {}
        for h, g in zip(cert.multipliers, gens):
            total = padd(total, pmul(h, g))
        assert pis_zero(psub(total, target))


def test_pencil_certificate_matches_hand_identity():
    s, t, u, x, f1, f2, f3, g1, g2, g3 = _pencil_vars()
    minors = perturbed_pencil_minors()
    keys = list(minors.keys())
    gens = [minors[k] for k in keys]
    tgt_f = perturbed_pencil_targets()[0]
    cert = macaulay_membership(tgt_f, gens, 2)
    by_key = dict(zip(keys, cert.multipliers))
    assert by_key[((0, 1), (0, 1))] == pscale_neg(pmul(f3, f3))
    assert by_key[((0, 1), (0, 2))] == pmul(f2, f3)
    assert by_key[((0, 2), (0, 1))] == pmul(f2, f3)
    assert by_key[((0, 2), (0, 2))] == pscale_neg(pmul(f2, f2))
    assert by_key[((1, 2), (0, 1))] == pscale_neg(pmul(f1, f3))
    assert by_key[((1, 2), (0, 2))] == pmul(f1, f2)
