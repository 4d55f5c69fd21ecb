"""Parameter derivation, block indexing, encoding vectors, and code builders."""

import numpy as np
import pytest

from conftest import SWEEP
from splitconv.basecode import parity_vector, search_points
from splitconv.construction import (
    SPLIT_DOWN,
    SPLIT_UP,
    VectorCode,
    block_coords,
    derive_params,
    final_encoding_vector,
    find_code_pair,
    initial_encoding_vector,
    permuted_instance,
    projection_vector,
    verify_mds_vector,
)
from splitconv.errors import NoSavingsError, NotSplitRegimeError


def test_derive_params_split_down():
    p = derive_params(11, 8, 6, 4)
    assert (p.lam, p.ri, p.rf, p.case) == (2, 3, 2, SPLIT_DOWN)
    assert (p.alpha, p.beta1, p.beta2) == (5, 2, 4)


def test_derive_params_split_up():
    p = derive_params(9, 8, 6, 4)
    assert (p.lam, p.ri, p.rf, p.case) == (2, 1, 2, SPLIT_UP)
    assert (p.alpha, p.beta1, p.beta2) == (4, 3, 4)


def test_derive_params_errors():
    with pytest.raises(NotSplitRegimeError):
        derive_params(11, 9, 6, 4)  # 9 not a multiple of 4
    with pytest.raises(NoSavingsError):
        derive_params(10, 4, 7, 2)  # rF = 5 >= kF = 2
    with pytest.raises(NotSplitRegimeError):
        derive_params(6, 4, 6, 4)  # lam = 1
    with pytest.raises(NotSplitRegimeError):
        derive_params(8, 8, 6, 4)  # no initial parities


def test_params_invariants_across_sweep():
    for ni, ki, nf, kf in SWEEP:
        p = derive_params(ni, ki, nf, kf)
        assert p.ki == p.lam * p.kf and p.lam >= 2
        assert p.rf < p.kf
        if p.case == SPLIT_DOWN:
            assert p.ri > p.rf
            assert p.alpha == (p.lam - 1) * p.rf + p.ri
            assert p.beta1 == (p.lam - 1) * p.rf
        else:
            assert p.ri <= p.rf
            assert p.alpha == p.lam * p.rf
            assert p.beta1 == p.lam * p.rf - p.ri
        assert p.beta2 == p.lam * p.rf
        assert 0 <= p.beta1 <= p.alpha and 0 < p.beta2 <= p.alpha
    # equal redundancy lands in SPLIT_UP, where the two formulas coincide
    p = derive_params(10, 8, 6, 4)
    assert p.case == SPLIT_UP and p.alpha == 4 and p.beta1 == 2


def test_block_coords():
    p = derive_params(11, 8, 6, 4)  # alpha 5, rf 2, lam 2
    assert block_coords(1, p) == (1, 1)
    assert block_coords(4, p) == (2, 2)
    assert block_coords(5, p) == (3, 1)
    with pytest.raises(ValueError):
        block_coords(6, p)
    up = derive_params(9, 8, 6, 4)  # alpha 4, rf 2
    assert [block_coords(l, up) for l in range(1, 5)] == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_permuted_instance():
    p = derive_params(11, 8, 6, 4)  # lam 2, rf 2
    assert permuted_instance(1, 2, p) == 3
    assert permuted_instance(1, 1, p) == 1  # zero shift
    p3 = derive_params(9, 6, 3, 2)  # lam 3, rf 1 (ri=3 > rf=1)
    assert permuted_instance(2, 2, p3) == 1
    with pytest.raises(ValueError):
        permuted_instance(5, 1, p)  # tail block
    with pytest.raises(ValueError):
        permuted_instance(1, 3, p)  # i out of range


def test_permuted_instance_bijection():
    p = derive_params(9, 6, 3, 2)
    span = range(1, p.lam * p.rf + 1)
    for i in range(1, p.lam + 1):
        image = {permuted_instance(l, i, p) for l in span}
        assert image == set(span)


def test_projection_vector(field):
    p = derive_params(11, 8, 6, 4)
    pts = search_points(11, 8, 3, field)
    v = projection_vector(1, 1, 2, p, pts, field)
    nz = np.nonzero(v)[0]
    assert len(nz) == p.kf
    assert all(idx < p.kf * p.alpha for idx in nz)  # inside codeword 1's block
    # xi = 1 parity: all nonzero entries are 1 at stride-alpha positions
    assert all(v[(j * p.alpha) + 1] == 1 for j in range(p.kf))
    # i=2 with xi_t = 2 and kf = 2: nonzero entries are xi^2, xi^3
    p2 = derive_params(7, 4, 3, 2)
    v2 = projection_vector(2, 1, 1, p2, [2, 3, 5], field)
    nz2 = np.nonzero(v2)[0]
    assert [int(v2[i]) for i in nz2] == [4, 8]
    assert all(idx >= p2.kf * p2.alpha for idx in nz2)


def test_initial_encoding_vector_split_down(field):
    p = derive_params(11, 8, 6, 4)
    pts = search_points(11, 8, 3, field)
    # tail instance of a low parity: plain unpermuted sum, no piggyback
    tail = initial_encoding_vector(1, 5, p, pts, field)
    expect = np.zeros_like(tail)
    for i in (1, 2):
        expect ^= projection_vector(i, 1, 5, p, pts, field)
    assert np.array_equal(tail, expect)
    # t = 3 > rf at l = 1: sum plus piggyback p^(1)_{1, 5}
    v = initial_encoding_vector(3, 1, p, pts, field)
    expect = projection_vector(1, 3, permuted_instance(1, 1, p), p, pts, field)
    expect ^= projection_vector(2, 3, permuted_instance(1, 2, p), p, pts, field)
    expect ^= projection_vector(1, 1, 5, p, pts, field)  # scaling is 1 at l1 = 1
    assert np.array_equal(v, expect)


def test_initial_encoding_vector_split_up(field):
    p = derive_params(9, 8, 6, 4)
    pts = search_points(9, 8, 2, field)
    # l = 2 has offset 2 > ri = 1: piggyback p^(1)_{2, 1}
    v = initial_encoding_vector(1, 2, p, pts, field)
    expect = projection_vector(1, 1, permuted_instance(2, 1, p), p, pts, field)
    expect ^= projection_vector(2, 1, permuted_instance(2, 2, p), p, pts, field)
    expect ^= projection_vector(1, 2, 1, p, pts, field)
    assert np.array_equal(v, expect)


def test_final_encoding_vector(field):
    p = derive_params(11, 8, 6, 4)
    pts = search_points(11, 8, 3, field)
    # i = 1: zero exponent, so the tail vector is p^(1)_{1,5} + p^(1)_{3,1}
    v = final_encoding_vector(1, 1, 5, p, pts, field)
    expect = projection_vector(1, 1, 5, p, pts, field) ^ projection_vector(1, 3, 1, p, pts, field)
    assert np.array_equal(v, expect)
    # SPLIT_UP: support entirely in codeword i's block, exactly kf nonzeros
    up = derive_params(9, 8, 6, 4)
    upts = search_points(9, 8, 2, field)
    for i in (1, 2):
        for t in (1, 2):
            w = final_encoding_vector(i, t, 3, up, upts, field)
            nz = np.nonzero(w)[0]
            assert len(nz) == up.kf
            lo = (i - 1) * up.kf * up.alpha
            assert all(lo <= idx < lo + up.kf * up.alpha for idx in nz)


def test_sequential_decodability_supports(field):
    # SPLIT_DOWN piggybacks (t > rf) touch only tail-instance coordinates
    p = derive_params(11, 8, 6, 4)
    pts = search_points(11, 8, 3, field)
    for t in range(p.rf + 1, p.ri + 1):
        for l in range(1, p.lam * p.rf + 1):
            plain = np.zeros(p.alpha * p.ki, np.uint8)
            for i in range(1, p.lam + 1):
                plain ^= projection_vector(i, t, permuted_instance(l, i, p), p, pts, field)
            pb = initial_encoding_vector(t, l, p, pts, field) ^ plain
            insts = {int(idx % p.alpha) + 1 for idx in np.nonzero(pb)[0]}
            assert insts and insts <= set(range(p.lam * p.rf + 1, p.alpha + 1))
    # SPLIT_DOWN final extra data sits at block-one instances t <= rf
    for t in range(1, p.rf + 1):
        for l in range(p.lam * p.rf + 1, p.alpha + 1):
            base = projection_vector(1, t, l, p, pts, field)
            extra = final_encoding_vector(1, t, l, p, pts, field) ^ base
            insts = {int(idx % p.alpha) + 1 for idx in np.nonzero(extra)[0]}
            assert insts <= set(range(1, p.rf + 1))
    # SPLIT_UP piggybacks reference block-one offsets <= ri only
    up = derive_params(9, 8, 6, 4)
    upts = search_points(9, 8, 2, field)
    for t in range(1, up.ri + 1):
        for l in range(1, up.alpha + 1):
            plain = np.zeros(up.alpha * up.ki, np.uint8)
            for i in range(1, up.lam + 1):
                plain ^= projection_vector(i, t, permuted_instance(l, i, up), up, upts, field)
            pb = initial_encoding_vector(t, l, up, upts, field) ^ plain
            insts = {int(idx % up.alpha) + 1 for idx in np.nonzero(pb)[0]}
            assert insts <= set(range(1, up.ri + 1))


def test_build_initial_code(field, pairs):
    params, points, icode, _ = pairs.get(11, 8, 6, 4)
    assert icode.generator.shape == (40, 55)
    assert field.rank(icode.generator) == 40
    # systematic data symbols
    dim = params.alpha * params.ki
    assert np.array_equal(icode.generator[:, :dim], np.eye(dim, dtype=np.uint8))


def test_piggyback_free_instances_match_base_code(field, pairs):
    # tail instances of the initial code are exactly the scalar base code
    params, points, icode, _ = pairs.get(11, 8, 6, 4)
    for t in range(1, params.ri + 1):
        h = parity_vector(t, params.ki, points, field)
        for l in range(params.lam * params.rf + 1, params.alpha + 1):
            col = icode.column(params.ki + t, l)
            for s in range(1, params.ki + 1):
                coord = (s - 1) * params.alpha + (l - 1)
                assert col[coord] == h[s - 1]


def test_permuted_instances_carry_base_transversals(field, pairs):
    # SPLIT_UP piggyback-free instances: parity t at instance l applies h_t to
    # codeword i's data at the permuted instance, for every i
    params, points, icode, _ = pairs.get(9, 8, 6, 4)
    for t in range(1, params.ri + 1):
        h = parity_vector(t, params.ki, points, field)
        for l in range(1, params.alpha + 1):
            if (l - 1) % params.rf + 1 > params.ri:
                continue
            col = icode.column(params.ki + t, l)
            expect = np.zeros_like(col)
            for i in range(1, params.lam + 1):
                pin = permuted_instance(l, i, params)
                for j in range(1, params.kf + 1):
                    s = (i - 1) * params.kf + j
                    expect[(s - 1) * params.alpha + (pin - 1)] = h[s - 1]
            assert np.array_equal(col, expect)


def test_build_final_code(field, pairs):
    for shape in [(11, 8, 6, 4), (9, 8, 6, 4)]:
        params, points, icode, fcode = pairs.get(*shape)
        dim = params.alpha * params.kf
        assert np.array_equal(fcode.generator[:, :dim], np.eye(dim, dtype=np.uint8))
        assert verify_mds_vector(fcode, field)
        assert verify_mds_vector(icode, field)


def test_final_parity_is_scaled_base_prefix(field, pairs):
    # the non-tail final parity columns are the truncated base-parity vectors
    params, points, _, fcode = pairs.get(11, 8, 6, 4)
    for t in range(1, params.rf + 1):
        h = parity_vector(t, params.kf, points, field)
        for l in range(1, params.lam * params.rf + 1):
            col = fcode.column(params.kf + t, l)
            for j in range(1, params.kf + 1):
                assert col[(j - 1) * params.alpha + (l - 1)] == h[j - 1]


def test_vector_code_json_roundtrip(field, pairs):
    _, _, _, fcode = pairs.get(9, 8, 6, 4)
    back = VectorCode.from_json(fcode.to_json())
    assert back.n == fcode.n and back.k == fcode.k and back.alpha == fcode.alpha
    assert np.array_equal(back.generator, fcode.generator)


def test_find_code_pair(field):
    params = derive_params(7, 4, 3, 2)
    pts, icode, fcode = find_code_pair(params, field, vector_verify=True)
    assert verify_mds_vector(icode, field) and verify_mds_vector(fcode, field)
    assert pts == search_points(7, 4, 3, field)
