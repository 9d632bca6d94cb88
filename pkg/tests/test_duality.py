import numpy as np
import pytest

from srlab.complexes import RelativeComplex, SimplicialComplex, builtin_complex, f_h_vectors
from srlab.duality import (
    DualityError,
    DualityPresentation,
    _pd_view,
    build_B,
    cone_lemma_check,
    is_poincare_duality_algebra,
    manifold_sanity_check,
    pairing_rank,
    poincare_duality_report,
    socle_dims,
)
from srlab.facering import LinearFormSequence, expected_lsop_length, quotient_presentation, sample_lsop
from srlab.linalg import DEFAULT_PRIME, PrimeField, matmul, rank
from srlab.partition import PartitionComplexSpec, ReducedPartitionComplex, restriction_matrix

F = PrimeField(DEFAULT_PRIME)


def lsop(psi, seed=0, field=F, budget=20000):
    theta = sample_lsop(psi, expected_lsop_length(psi), seed, field, budget=budget)
    assert theta is not None
    return theta


def test_manifold_sanity_check_names_offending_faces():
    tor = builtin_complex("torus7")
    assert manifold_sanity_check(tor.delta, F) == {-1: 0, 0: 0, 1: 2, 2: 1}

    with pytest.raises(DualityError, match=r"link of face \(1,\)"):
        manifold_sanity_check(builtin_complex("moebius").delta, F)
    with pytest.raises(DualityError, match=r"link of face \(1,\)"):
        manifold_sanity_check(builtin_complex("path_4").delta, F)
    with pytest.raises(DualityError, match="not connected"):
        manifold_sanity_check(builtin_complex("two_points").delta, F)

    # vertex 1 of the bowtie has a single edge as its link, a ball not a sphere
    bow = SimplicialComplex.from_facets((1, 2, 3, 4, 5), [(1, 2, 3), (3, 4, 5)])
    with pytest.raises(DualityError, match=r"link of face \(1,\)"):
        manifold_sanity_check(bow, F)
    with pytest.raises(DualityError, match="not pure"):
        manifold_sanity_check(SimplicialComplex.from_facets((1, 2, 3), [(1, 2), (3,)]), F)
    with pytest.raises(DualityError, match="void"):
        manifold_sanity_check(SimplicialComplex.void_complex((1,)), F)


def test_sphere_quotient_is_already_self_dual():
    bs3 = builtin_complex("boundary_simplex_3")
    P = build_B(bs3.delta, lsop(bs3), F)
    assert P.j_dims_list(3) == [0, 0, 0, 0]
    assert P.b_dims_list(3) == [1, 1, 1, 1]
    assert is_poincare_duality_algebra(P)
    assert socle_dims(P) == {3: 1}
    assert pairing_rank(P, 1) == {"rank": 1, "full": True, "dim_left": 1, "dim_right": 1}
    assert pairing_rank(P, 0)["full"]


def test_torus_duality_quotient():
    tor = builtin_complex("torus7")
    P = build_B(tor.delta, lsop(tor), F)
    assert P.b_dims_list(3) == [1, 4, 4, 1]
    assert P.j_dims_list(3) == [0, 0, 6, 0]
    assert P.fundamental_degree == 3
    assert P.diagnostics["orientable_like"]
    assert P.diagnostics["betti"] == {-1: 0, 0: 0, 1: 2, 2: 1}
    assert P.annihilator_ok()
    rep = poincare_duality_report(P)
    assert rep["pd"] and rep["routes"] == {"pairing": True, "socle": True}
    assert rep["pairings"][1] == {"rank": 4, "full": True, "dim_left": 4, "dim_right": 4}
    assert rep["socle"] == {3: 1}


def test_unquotiented_torus_algebra_is_not_self_dual():
    tor = builtin_complex("torus7")
    A = quotient_presentation(tor, lsop(tor), F)
    rep = poincare_duality_report(A)
    assert not rep["pd"]
    assert rep["fundamental_degree"] == 3 and rep["vanish_above_fundamental"]
    assert rep["pairings"][1] == {"rank": 4, "full": False, "dim_left": 4, "dim_right": 10}
    assert rep["socle"] == {2: 6, 3: 1}


def test_projective_plane_splits_by_field():
    rp2 = builtin_complex("rp2_6")

    f2 = PrimeField(2)
    theta = lsop(rp2, field=f2, budget=4000)
    P = build_B(rp2.delta, theta, f2)
    assert P.b_dims_list(3) == [1, 3, 3, 1]
    assert P.j_dims_list(3) == [0, 0, 3, 0]
    assert P.diagnostics["orientable_like"]
    assert is_poincare_duality_algebra(P)
    assert P.annihilator_ok()
    reduced = ReducedPartitionComplex(PartitionComplexSpec.full(rp2), theta, f2, max_position=0)
    assert [reduced.front_kernel_dims(2)[j] for j in range(3)] == P.j_dims_list(2)

    f3 = PrimeField(3)
    P = build_B(rp2.delta, lsop(rp2, field=f3, budget=4000), f3)
    assert P.b_dims_list(3) == [1, 3, 6, 0]
    assert P.j_dims_list(3) == [0, 0, 0, 0]
    assert not P.diagnostics["orientable_like"]
    assert not is_poincare_duality_algebra(P)
    assert socle_dims(P) == {2: 6}
    with pytest.raises(DualityError, match="dimension 0, expected 1"):
        pairing_rank(P, 1)


def test_socle_of_a_fat_point_quotient():
    # two points cut by one generic form leave k[x]/<x^2>
    two = builtin_complex("two_points")
    A = quotient_presentation(two, lsop(two), F)
    assert A.dims_list(2) == [1, 1, 0]
    assert socle_dims(A) == {1: 1}


def test_cone_lemma_on_spheres_and_the_point():
    bs3 = builtin_complex("boundary_simplex_3")
    theta = lsop(bs3)
    for v in bs3.delta.labels:
        res = cone_lemma_check(bs3.delta, v, theta, F)
        assert res["pass"] and res["prime"] == F.p
        assert [res["degrees"][j]["star_dim"] for j in range(4)] == [1, 1, 1, 0]
        assert all(row["bijective"] for row in res["degrees"].values())

    pt = builtin_complex("simplex_0")
    res = cone_lemma_check(pt.delta, pt.delta.labels[0], lsop(pt), F)
    assert res["pass"]
    assert res["degrees"][0] == {"star_dim": 1, "shifted_open_dim": 1, "bijective": True}


def test_cone_lemma_on_every_torus_vertex():
    tor = builtin_complex("torus7")
    theta = lsop(tor)
    for v in tor.delta.labels:
        assert cone_lemma_check(tor.delta, v, theta, F)["pass"]


def test_open_stars_embed_into_A_and_B():
    tor = builtin_complex("torus7")
    theta = lsop(tor)
    A = quotient_presentation(tor, theta, F)
    P = build_B(tor.delta, theta, F)
    p = F.p
    for vmask in tor.delta.vertex_masks()[:3]:
        open_star = tor.open_star(vmask)
        q = quotient_presentation(open_star, theta, F)
        for j in range(1, P.fundamental_degree + 1):
            if q.dim(j) == 0:
                continue
            inc = restriction_matrix(tor, open_star, j).T
            in_A = A.reduce(j, matmul(inc, q.lift(j), p))
            assert rank(in_A, p) == q.dim(j)
            in_B = P.b_reduce(j, in_A)
            assert rank(in_B, p) == q.dim(j)


def test_sphere_h_vectors_and_B_dims_are_palindromic():
    for name in ("boundary_simplex_2", "cross_polytope_2"):
        psi = builtin_complex(name)
        h = f_h_vectors(psi).h
        assert list(h) == list(reversed(h))
        P = build_B(psi.delta, lsop(psi), F)
        dims = P.b_dims_list(P.fundamental_degree)
        assert dims == dims[::-1]


def test_build_B_input_validation():
    tor = builtin_complex("torus7")
    theta = lsop(tor)

    bary = SimplicialComplex.from_facets((1, 2, 3), [(1, 2, 3)]).barycentric_subdivision()
    disk = RelativeComplex(bary, bary.boundary_subcomplex())
    with pytest.raises(DualityError, match="absolute"):
        build_B(disk, sample_lsop(disk, 3, 0, F), F)

    with pytest.raises(DualityError, match="different moduli"):
        build_B(tor.delta, LinearFormSequence([(1,) * 7] * 3, 7), F)

    zero = LinearFormSequence([(0,) * 7] * 3, F.p)
    with pytest.raises(DualityError, match="linear system of parameters"):
        build_B(tor.delta, zero, F)

    with pytest.raises(DualityError, match="quotient presentation"):
        _pd_view(42)
