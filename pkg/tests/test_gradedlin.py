from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsatake.gradedlin import (
    E,
    GradingError,
    GradingProfile,
    flip_legs,
    graded_permutation,
    identity,
    is_even,
    koszul_embed,
    parity_of,
    partial_supertranspose,
    supertranspose,
)
from qsatake.qring import ONE, Q, qpow
from qsatake.rmat import build_R
from qsatake.rootdata import build_root_system

G101 = GradingProfile((1, 0, 1))


def test_grading_must_be_symmetric():
    with pytest.raises(GradingError):
        GradingProfile((1, 0, 0))
    assert GradingProfile.minimal(1, 1).parity == (1, 0, 1)


def test_embed_sign_on_basis_vector():
    x = koszul_embed(E(G101, 1, 2), E(G101, 2, 1))
    # v_2 (x) v_1 is flat index 3, v_1 (x) v_2 is flat index 1
    assert x.mat.get(1, 3) == ONE
    assert x.mat.nnz() == 1


def test_embed_identity():
    one = identity(G101)
    assert koszul_embed(one, one) == identity(G101, 2)


def test_embed_swap_sign():
    a, b = E(G101, 1, 2), E(G101, 2, 3)
    left = koszul_embed(identity(G101), b) @ koszul_embed(a, identity(G101))
    assert left == koszul_embed(a, b).scale(-1)


def test_graded_permutation_examples():
    P = graded_permutation(G101)
    assert P.mat.get(0, 0) == -ONE
    assert P.mat.get(3, 1) == ONE
    assert P @ P == identity(G101, 2)


def test_supertranspose_examples():
    d = identity(G101).scale(Q)
    assert supertranspose(d) == d
    assert supertranspose(E(G101, 1, 2)) == E(G101, 2, 1)
    assert supertranspose(E(G101, 2, 1)) == E(G101, 1, 2).scale(-1)


def test_partial_supertranspose_example():
    x = koszul_embed(E(G101, 1, 2), E(G101, 1, 1))
    assert partial_supertranspose(x, 1) == koszul_embed(E(G101, 2, 1), E(G101, 1, 1))


def test_partial_supertranspose_even_involution():
    g = GradingProfile((0, 0))
    x = koszul_embed(E(g, 1, 2), E(g, 2, 2, Q))
    assert partial_supertranspose(partial_supertranspose(x, 1), 1) == x


def test_gl_R_double_transpose_is_flip():
    R = build_R(build_root_system("GL", 1, 1))
    assert partial_supertranspose(partial_supertranspose(R, 1), 2) == flip_legs(R)


def test_parity_of_inhomogeneous_raises():
    with pytest.raises(GradingError):
        parity_of(E(G101, 1, 1) + E(G101, 1, 2))
    assert parity_of(E(G101, 1, 2)) == 1
    assert is_even(E(G101, 1, 3))


gradings = st.sampled_from([(1, 0, 1), (0, 1, 1, 0), (1, 1, 0, 0, 1, 1), (0, 1, 0), (1, 0, 0, 1)])


@st.composite
def units(draw, g: GradingProfile):
    i = draw(st.integers(1, g.dim))
    j = draw(st.integers(1, g.dim))
    return E(g, i, j, qpow(draw(st.integers(-2, 2))) * draw(st.sampled_from([1, -1, 2])))


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_embed_is_signed_homomorphism(data):
    g = GradingProfile(data.draw(gradings))
    a, b, c, d = (data.draw(units(g)) for _ in range(4))
    sign = -1 if (parity_of(c) or 0) * (parity_of(b) or 0) else 1
    assert koszul_embed(a, b) @ koszul_embed(c, d) == koszul_embed(a @ c, b @ d).scale(sign)


@settings(max_examples=30, deadline=None)
@given(gradings)
def test_permutation_squares_to_identity(p):
    g = GradingProfile(p)
    P = graded_permutation(g)
    assert P @ P == identity(g, 2)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_supertranspose_antihomomorphism(data):
    g = GradingProfile(data.draw(gradings))
    a, b = data.draw(units(g)), data.draw(units(g))
    sign = -1 if (parity_of(a) or 0) * (parity_of(b) or 0) else 1
    assert supertranspose(a @ b) == (supertranspose(b) @ supertranspose(a)).scale(sign)
    assert supertranspose(a + b) == supertranspose(a) + supertranspose(b)
