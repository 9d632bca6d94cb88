import math
import random

import numpy as np
import pytest

from srlab.complexes import (
    RelativeComplex,
    SimplicialComplex,
    builtin_complex,
    random_relative_complex,
    relative_cohomology_dims,
)
from srlab.duality import build_B
from srlab.facering import LinearFormSequence, expected_lsop_length, monomial_basis, sample_lsop
from srlab.linalg import DEFAULT_PRIME, PrimeField, rank
from srlab.partition import (
    DoubleComplexSlice,
    PartitionComplexSpec,
    PartitionError,
    ReducedPartitionComplex,
    SubdivisionStructure,
    barycentric_subdivision_structure,
    interior_partition_check,
    partition_homology_dims,
    reduced_partition_homology,
    restriction_matrix,
    subdivision_partition_check,
    total_complex_homology,
)

F = PrimeField(DEFAULT_PRIME)


def lsop(psi, seed=0):
    theta = sample_lsop(psi, expected_lsop_length(psi), seed, F)
    assert theta is not None
    return theta


def test_empty_complex_has_only_the_front_column():
    psi = RelativeComplex(SimplicialComplex.from_facets((1,), []))
    assert partition_homology_dims(psi, F, max_degree=0) == {(-1, 0): 1}


def test_star_cover_homology_equals_simplicial_cohomology():
    rng = random.Random(2024)
    cases = [builtin_complex("torus7"), builtin_complex("boundary_simplex_3")]
    cases += [random_relative_complex(rng, max_vertices=5) for _ in range(25)]
    for psi in cases:
        table = partition_homology_dims(psi, F)
        coh = relative_cohomology_dims(psi, F)
        for (i, j), dim in table.items():
            assert dim == (coh.get(i, 0) if j == 0 else 0)


def test_front_restrictions_are_unsigned():
    tor = builtin_complex("torus7")
    pspec = PartitionComplexSpec.full(tor)
    for j in (0, 1, 2):
        mat = pspec.differential(-1, j, F)
        assert set(np.unique(mat)) <= {0, 1}


def test_cech_differential_squares_to_zero():
    tor = builtin_complex("torus7")
    pspec = PartitionComplexSpec.full(tor)
    for i in range(-1, pspec.max_position):
        for j in (1, 2):
            m2 = pspec.differential(i + 1, j, F) @ pspec.differential(i, j, F) % F.p
            assert not m2.any()


def test_restriction_matrix_kills_foreign_monomials():
    tor = builtin_complex("torus7")
    v = tor.delta.vertex_masks()[0]
    star = tor.star(v)
    for j in (1, 2):
        src = monomial_basis(tor, j)
        dst = monomial_basis(star, j)
        mat = restriction_matrix(tor, star, j)
        assert mat.shape == (len(dst), len(src))
        for col, alpha in enumerate(src):
            column = mat[:, col]
            if alpha in dst.index:
                assert column.sum() == 1 and column[dst.index[alpha]] == 1
            else:
                assert not column.any()


def _fine_slice_dims(psi, alpha):
    """Homology of the single-monomial piece of the star-cover complex."""
    pspec = PartitionComplexSpec.full(psi)
    j = sum(alpha)
    sel = {}
    for i in range(-1, pspec.max_position + 1):
        rows = []
        off = 0
        for _, mod in pspec.summands(i):
            basis = monomial_basis(mod, j)
            idx = basis.index.get(tuple(alpha))
            if idx is not None:
                rows.append(off + idx)
            off += len(basis)
        sel[i] = rows
    ranks = {}
    for i in range(-1, pspec.max_position + 1):
        if sel[i] and sel.get(i + 1):
            sub = pspec.differential(i, j, F)[np.ix_(sel[i + 1], sel[i])]
            ranks[i] = rank(sub, F.p)
        else:
            ranks[i] = 0
    return {i: len(sel[i]) - ranks[i] - ranks.get(i - 1, 0)
            for i in range(-1, pspec.max_position + 1)}


def test_fine_pieces_compute_star_cohomology():
    # the slice of a single monomial is a Cech complex of the star of its support
    rng = random.Random(5150)
    cases = [builtin_complex("torus7")]
    cases += [random_relative_complex(rng, max_vertices=5) for _ in range(6)]
    for psi in cases:
        if psi.is_void or psi.delta.dim is None:
            continue
        faces = [f for f in psi.delta.faces if f]
        for _ in range(3):
            S = rng.choice(faces)
            verts = [i for i in range(len(psi.delta.labels)) if S >> i & 1]
            alpha = [0] * len(psi.delta.labels)
            for v in verts:
                alpha[v] = 1
            alpha[rng.choice(verts)] += rng.randint(0, 2)
            got = _fine_slice_dims(psi, alpha)
            want = relative_cohomology_dims(psi.star(S), F)
            assert all(got.get(i, 0) == want.get(i, 0) for i in set(got) | set(want))
    tor = builtin_complex("torus7")
    unit = _fine_slice_dims(tor, [0] * 7)
    assert {i: v for i, v in unit.items() if v} == {1: 2, 2: 1}


def test_reduced_tables_match_the_binomial_formula():
    bs3 = builtin_complex("boundary_simplex_3")
    table = reduced_partition_homology(bs3, lsop(bs3), F)
    assert {k: v for k, v in table.items() if v} == {
        (-1, 3): 1, (0, 2): 3, (1, 1): 3, (2, 0): 1}

    tor = builtin_complex("torus7")
    table = reduced_partition_homology(tor, lsop(tor), F)
    assert {k: v for k, v in table.items() if v} == {
        (-1, 2): 6, (-1, 3): 1, (0, 1): 6, (0, 2): 3, (1, 0): 2, (1, 1): 3, (2, 0): 1}

    rp2 = builtin_complex("rp2_6")
    for q in (2, 3):
        field = PrimeField(q)
        theta = sample_lsop(rp2, 3, 0, field, budget=4000)
        table = reduced_partition_homology(rp2, theta, field)
        coh = relative_cohomology_dims(rp2, field)
        d = rp2.dim
        for (i, j), dim in table.items():
            assert dim == math.comb(d + 1, j) * coh.get(i + j, 0)


def test_cones_have_exact_reduced_complexes():
    s3 = builtin_complex("simplex_3")
    table = reduced_partition_homology(s3, lsop(s3), F)
    assert not any(table.values())


def test_nonpure_complex_breaks_the_binomial_formula():
    # two isolated points next to an edge: stars come in mixed dimensions,
    # so the unity formula over-counts the front kernel
    psi = RelativeComplex(SimplicialComplex.from_facets((1, 2, 3, 4), [(1,), (2,), (3, 4)]))
    table = reduced_partition_homology(psi, lsop(psi), F)
    coh = relative_cohomology_dims(psi, F)
    assert table[(-1, 1)] == 2
    assert math.comb(psi.dim + 1, 1) * coh.get(0, 0) == 4


def test_reduced_complex_requires_parameter_systems():
    bow = RelativeComplex(SimplicialComplex.from_facets((1, 2, 3, 4, 5), [(1, 2, 3), (3, 4, 5)]))
    zero = LinearFormSequence([(0,) * 5] * 3, F.p)
    with pytest.raises(PartitionError):
        ReducedPartitionComplex(PartitionComplexSpec.full(bow), zero, F)


def test_front_kernel_agrees_with_the_duality_ideal():
    tor = builtin_complex("torus7")
    theta = lsop(tor)
    reduced = ReducedPartitionComplex(PartitionComplexSpec.full(tor), theta, F, max_position=0)
    kernels = reduced.front_kernel_dims(3)
    P = build_B(tor.delta, theta, F)
    assert [kernels[j] for j in range(3)] == P.j_dims_list(2) == [0, 0, 6]
    # degree d+1 keeps the fundamental class: the raw kernel is everything,
    # the duality ideal projects it away
    assert kernels[3] == 1 and P.j_dim(3) == 0


def test_double_complex_commutes_and_total_squares_to_zero():
    mo = builtin_complex("moebius")
    sl = DoubleComplexSlice(PartitionComplexSpec.full(mo), lsop(mo), F, 2)
    p = F.p
    for a in (-1, 0, 1):
        for b in (0, 1):
            lhs = sl.vertical(a + 1, b) @ sl.horizontal(a, b) % p
            rhs = sl.horizontal(a, b + 1) @ sl.vertical(a, b) % p
            assert np.array_equal(lhs, rhs)
    for k in (-1, 0, 1, 2):
        m2 = sl.tot_differential(k + 1) @ sl.tot_differential(k) % p
        assert not m2.any()


def test_exact_columns_force_an_exact_total_complex():
    s2 = builtin_complex("simplex_2")
    pspec = PartitionComplexSpec.full(s2)
    theta = lsop(s2)
    p = F.p
    for j in (1, 2):
        sl = DoubleComplexSlice(pspec, theta, F, j)
        for a in range(-1, pspec.max_position + 1):
            for b in range(sl.n + 1):
                up = sl.vertical(a, b)
                dn = sl.vertical(a, b - 1)
                hom = sl.grid_dim(a, b) - (rank(up, p) if up.size else 0) \
                    - (rank(dn, p) if dn.size else 0)
                assert hom == 0
        assert not any(sl.homology_dims().values())


def test_total_complex_table_of_a_sphere():
    bs3 = builtin_complex("boundary_simplex_3")
    d = bs3.dim
    table = total_complex_homology(bs3, lsop(bs3), F)
    assert {k: v for k, v in table.items() if v} == {
        (2, 3): 1, (3, 2): 3, (4, 1): 3, (5, 0): 1}
    for (i, j), dim in table.items():
        want = math.comb(d + 1, j) if i + j - d - 1 == 2 and j <= d + 1 else 0
        assert dim == want


def test_interior_check_on_a_subdivided_disk():
    bary = SimplicialComplex.from_facets((1, 2, 3), [(1, 2, 3)]).barycentric_subdivision()
    disk = RelativeComplex(bary, bary.boundary_subcomplex())
    res = interior_partition_check(disk, lsop(disk), F)
    assert res["exact"] and res["injective_below_top"]
    diag = res["diagnostics"]
    assert diag["boundary_induced"] and diag["delta_acyclic"] and diag["boundary_is_sphere"]
    assert not any(res["kernel_dims"].values())


def test_interior_check_flags_a_disk_without_interior_vertices():
    tri = SimplicialComplex.from_facets((1, 2, 3), [(1, 2, 3)])
    disk = RelativeComplex(tri, tri.boundary_subcomplex())
    res = interior_partition_check(disk, lsop(disk), F)
    assert not res["exact"] and not res["injective_below_top"]
    assert res["kernel_dims"] == {0: 1, 1: 0, 2: 0}
    assert res["diagnostics"]["interior_vertices"] == []
    # the closure of the boundary vertices is the whole triangle
    assert not res["diagnostics"]["boundary_induced"]
    assert res["diagnostics"]["delta_acyclic"] and res["diagnostics"]["boundary_is_sphere"]


def test_interior_check_on_a_cone_with_interior_apex():
    cone = SimplicialComplex.from_facets((0, 1, 2, 3), [(0, 1, 2), (0, 2, 3), (0, 1, 3)])
    disk = RelativeComplex(cone, cone.boundary_subcomplex())
    res = interior_partition_check(disk, lsop(disk), F)
    assert res["exact"] and res["injective_below_top"]
    assert res["diagnostics"]["interior_vertices"] == [0]


def test_subdivision_checks_pass_on_barycentric_structures():
    single = barycentric_subdivision_structure(
        SimplicialComplex.from_facets((1, 2, 3), [(1, 2, 3)]))
    res = subdivision_partition_check(single, lsop(RelativeComplex(single.delta)), F)
    assert res["pass"] and res["boundary_induced_ok"] and not res["failing_cells"]
    assert res["kernel_dims"] == {0: 0, 1: 0, 2: 0, 3: 0}

    glued = barycentric_subdivision_structure(
        SimplicialComplex.from_facets((1, 2, 3, 4), [(1, 2, 3), (1, 3, 4)]))
    res = subdivision_partition_check(glued, lsop(RelativeComplex(glued.delta)), F)
    assert res["pass"] and res["boundary_induced_ok"]
    # the kernel above half the dimension is real but outside the gate
    assert res["kernel_dims"] == {0: 0, 1: 0, 2: 1, 3: 0}


def test_subdivision_round_trip_preserves_incidence():
    st = barycentric_subdivision_structure(
        SimplicialComplex.from_facets((1, 2, 3, 4), [(1, 2, 3), (1, 3, 4)]))
    again = SubdivisionStructure.from_json(st.to_json())
    assert again.incidence_signs == st.incidence_signs
    assert again.incidence == st.incidence
    pspec = PartitionComplexSpec.subdivision(st)
    for i in range(pspec.max_position):
        for j in (0, 1, 2):
            m2 = pspec.differential(i + 1, j, F) @ pspec.differential(i, j, F) % F.p
            assert not m2.any()


def test_subdivision_structure_validation_errors():
    st = barycentric_subdivision_structure(
        SimplicialComplex.from_facets((1, 2, 3, 4), [(1, 2, 3), (1, 3, 4)]))
    data = st.to_json()
    top = next(i for i, c in enumerate(data["sigma"]) if c["dim"] == 2)
    broken = {"delta": data["delta"],
              "sigma": [c for i, c in enumerate(data["sigma"]) if i != top]}
    with pytest.raises(PartitionError, match="cover"):
        SubdivisionStructure.from_json(broken)

    book = SimplicialComplex.from_facets((1, 2, 3, 4, 5), [(1, 2, 3), (1, 2, 4), (1, 2, 5)])
    with pytest.raises(PartitionError, match="more than two"):
        SubdivisionStructure(book, [{"dim": 2, "facets": [(1, 2, 3), (1, 2, 4), (1, 2, 5)],
                                     "boundary_facets": []}])

    mo = builtin_complex("moebius").delta
    with pytest.raises(PartitionError, match="orientable"):
        SubdivisionStructure(mo, [{"dim": 2,
                                   "facets": [list(mo.labels_of(f)) for f in mo.facets()],
                                   "boundary_facets": []}])

    two = SimplicialComplex.from_facets((1, 2, 3, 4), [(1, 2, 3), (1, 3, 4)])
    with pytest.raises(PartitionError, match="not inside"):
        SubdivisionStructure(two, [{"dim": 2, "facets": [(1, 2, 4)], "boundary_facets": []}])

    tri = SimplicialComplex.from_facets((1, 2, 3), [(1, 2, 3)])
    with pytest.raises(PartitionError, match="unknown vertex"):
        SubdivisionStructure(tri, [{"dim": 2, "facets": [(1, 2, 4)], "boundary_facets": []}])
